//! Valuation results that keep track of truncation.
//!
//! `Exact(k)` certifies a provably nonzero degree-k coefficient.
//! `AtLeast(k)` certifies only that everything below k vanishes, with the
//! series truncation preventing a stronger statement. `Infinite` is reserved
//! for identically-zero finite polynomials and certified common branches.

use std::fmt;

use serde::ser::{Serialize, SerializeMap, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderValue {
    Exact(usize),
    AtLeast(usize),
    Infinite,
}

impl OrderValue {
    pub fn is_exact(&self) -> bool {
        matches!(self, OrderValue::Exact(_))
    }

    pub fn exact(&self) -> Option<usize> {
        match self {
            OrderValue::Exact(k) => Some(*k),
            _ => None,
        }
    }

    /// The certified lower bound (usize::MAX for Infinite).
    pub fn lower_bound(&self) -> usize {
        match self {
            OrderValue::Exact(k) | OrderValue::AtLeast(k) => *k,
            OrderValue::Infinite => usize::MAX,
        }
    }

    /// Valuation of a sum of orders (e.g. of a product of series), with
    /// Exact only when every part is Exact.
    pub fn add(&self, other: &OrderValue) -> OrderValue {
        use OrderValue::*;
        match (self, other) {
            (Infinite, _) | (_, Infinite) => Infinite,
            (Exact(a), Exact(b)) => Exact(a + b),
            (a, b) => AtLeast(a.lower_bound() + b.lower_bound()),
        }
    }

    /// Valuation of a minimum (e.g. order of a pair of components). An
    /// `AtLeast` partner below an `Exact` value leaves only a bound.
    pub fn min(&self, other: &OrderValue) -> OrderValue {
        use OrderValue::*;
        match (self, other) {
            (Infinite, x) | (x, Infinite) => *x,
            (Exact(a), Exact(b)) => Exact(*a.min(b)),
            (Exact(a), AtLeast(b)) | (AtLeast(b), Exact(a)) => {
                if *a <= *b {
                    Exact(*a)
                } else {
                    AtLeast(*b)
                }
            }
            (AtLeast(a), AtLeast(b)) => AtLeast(*a.min(b)),
        }
    }

    /// Subtract a known exact offset (for j = mu - m^2).
    pub fn sub_exact(&self, k: usize) -> OrderValue {
        match self {
            OrderValue::Exact(a) => OrderValue::Exact(a.checked_sub(k).expect("order underflow")),
            OrderValue::AtLeast(a) => OrderValue::AtLeast(a.saturating_sub(k).max(1)),
            OrderValue::Infinite => OrderValue::Infinite,
        }
    }
}

impl fmt::Display for OrderValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderValue::Exact(k) => write!(f, "{}", k),
            OrderValue::AtLeast(k) => write!(f, ">={}", k),
            OrderValue::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for OrderValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            OrderValue::Exact(k) => s.serialize_u64(*k as u64),
            OrderValue::AtLeast(k) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("at_least", k)?;
                m.end()
            }
            OrderValue::Infinite => s.serialize_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::OrderValue::*;

    #[test]
    fn add_rules() {
        assert_eq!(Exact(2).add(&Exact(3)), Exact(5));
        assert_eq!(Exact(2).add(&AtLeast(3)), AtLeast(5));
        assert_eq!(AtLeast(2).add(&Infinite), Infinite);
    }

    #[test]
    fn min_rules() {
        assert_eq!(Exact(2).min(&Exact(3)), Exact(2));
        assert_eq!(Exact(2).min(&AtLeast(5)), Exact(2));
        assert_eq!(Exact(5).min(&AtLeast(2)), AtLeast(2));
        assert_eq!(Exact(5).min(&Infinite), Exact(5));
        assert_eq!(Infinite.min(&Infinite), Infinite);
    }
}

//! General K-analytic planar germs at regular critical points: Jacobian,
//! regularity test, the iterated-determinant recursion computing the
//! critical value order j (with mu = j + 1), and the Whitney
//! fold/cusp/collapse classification.

pub mod flow;

use num_rational::BigRational;
use thiserror::Error;

use crate::field::CycloNumber;
use crate::intersection::{self, IntersectionError};
use crate::order::OrderValue;
use crate::report::WhitneyClass;
use crate::series2::{Axis, Series2};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalyticError {
    #[error("components must vanish at the origin")]
    NonVanishing,
    #[error("not a regular critical point: J(0) = 0 and grad J(0) != 0 required")]
    NotRegular,
    #[error("truncation {0} too small to compute even M_1")]
    TruncationTooSmall(usize),
    #[error(transparent)]
    Intersection(#[from] IntersectionError),
}

type Result<T> = std::result::Result<T, AnalyticError>;

/// A planar analytic germ at the origin: two bivariate component series
/// with zero constant term.
#[derive(Clone, Debug)]
pub struct AnalyticGerm {
    f1: Series2,
    f2: Series2,
}

/// Constant terms of the determinant recursion, and the resulting order.
#[derive(Clone, Debug)]
pub struct RecursionTrace {
    /// M_1(0), M_2(0), ... as far as computed.
    pub values: Vec<CycloNumber>,
    pub j: OrderValue,
}

impl AnalyticGerm {
    pub fn new(f1: Series2, f2: Series2) -> Result<Self> {
        if !f1.constant_term().is_zero() || !f2.constant_term().is_zero() {
            return Err(AnalyticError::NonVanishing);
        }
        Ok(AnalyticGerm { f1, f2 })
    }

    pub fn components(&self) -> (&Series2, &Series2) {
        (&self.f1, &self.f2)
    }

    pub fn trunc(&self) -> usize {
        self.f1.trunc().min(self.f2.trunc())
    }

    /// J = d_x f1 * d_y f2 - d_y f1 * d_x f2; truncation drops by one.
    pub fn jacobian(&self) -> Series2 {
        let f1x = self.f1.partial(Axis::X);
        let f1y = self.f1.partial(Axis::Y);
        let f2x = self.f2.partial(Axis::X);
        let f2y = self.f2.partial(Axis::Y);
        f1x.mul(&f2y).sub(&f1y.mul(&f2x))
    }

    /// True iff J(0) = 0 and grad J(0) != (0, 0), decided exactly.
    pub fn regular_test(&self) -> bool {
        let j = self.jacobian();
        if !j.constant_term().is_zero() {
            return false;
        }
        !j.coeff(1, 0).is_zero() || !j.coeff(0, 1).is_zero()
    }

    /// The complex-valued form f1 + i*f2 over the field.
    pub fn complex_form(&self) -> Series2 {
        let level = num_integer::lcm(self.f1.level(), self.f2.level());
        let i = CycloNumber::i(level).expect("level");
        self.f1.add(&self.f2.scale(&i))
    }

    /// Run the determinant recursion: M_1 = det[grad J; grad f],
    /// M_k = det[grad J; grad M_{k-1}], evaluating constant terms. The
    /// companion Wirtinger recursion L_k is computed alongside and
    /// M_n(0) = (2i)^n L_n(0) is asserted for every computed n.
    ///
    /// `min_depth` keeps the recursion going past the first nonzero value
    /// (budget permitting) so callers can inspect more constants. Each
    /// determinant costs one derivative, so at most `trunc - 1` steps are
    /// decidable; exhausting them yields an `AtLeast` bound.
    pub fn j_via_mn(&self, min_depth: usize) -> Result<RecursionTrace> {
        if !self.regular_test() {
            return Err(AnalyticError::NotRegular);
        }
        let trunc = self.trunc();
        if trunc < 2 {
            return Err(AnalyticError::TruncationTooSmall(trunc));
        }
        let level = num_integer::lcm(self.f1.level(), self.f2.level());
        let i = CycloNumber::i(level).expect("level");
        let two_i = i.mul_rational(&BigRational::from_integer(2.into()));
        let jac = self.jacobian();
        let jx = jac.partial(Axis::X);
        let jy = jac.partial(Axis::Y);
        let (jz, jzb) = wirtinger(&jac);
        let f = self.complex_form();

        let budget = trunc - 1;
        let mut values = Vec::new();
        let mut j = None;
        let mut m = f.clone();
        let mut l = f;
        let mut two_i_pow = CycloNumber::one(level).expect("level");
        for k in 1..=budget {
            m = jx.mul(&m.partial(Axis::Y)).sub(&jy.mul(&m.partial(Axis::X)));
            let (lz, lzb) = wirtinger(&l);
            l = lz.mul(&jzb).sub(&lzb.mul(&jz));
            two_i_pow = two_i_pow.mul(&two_i);
            let mk = m.constant_term();
            let lk = l.constant_term();
            assert_eq!(
                mk,
                lk.mul(&two_i_pow),
                "M_{k}(0) must equal (2i)^{k} L_{k}(0)"
            );
            values.push(mk.clone());
            if j.is_none() && !mk.is_zero() {
                j = Some(k);
            }
            if let Some(jv) = j {
                if k >= min_depth.max(jv) {
                    break;
                }
            }
        }
        let j = match j {
            Some(k) => OrderValue::Exact(k),
            None => OrderValue::AtLeast(budget + 1),
        };
        Ok(RecursionTrace { values, j })
    }

    /// mu = j + 1 from the recursion, cross-checked against the local
    /// intersection oracle when the components are exact polynomials
    /// (exact equality when both are finite).
    pub fn mu_regular(&self) -> Result<OrderValue> {
        let trace = self.j_via_mn(1)?;
        let mu_rec = match trace.j {
            OrderValue::Exact(j) => OrderValue::Exact(j + 1),
            OrderValue::AtLeast(b) => OrderValue::AtLeast(b + 1),
            OrderValue::Infinite => OrderValue::Infinite,
        };
        if self.f1.is_exact() && self.f2.is_exact() {
            let oracle = intersection::mu_complexified(&self.f1, &self.f2)?;
            match (mu_rec, oracle) {
                (OrderValue::Exact(a), OrderValue::Exact(b)) => {
                    assert_eq!(a, b, "recursion and intersection oracle disagree on mu");
                    Ok(OrderValue::Exact(a))
                }
                (OrderValue::AtLeast(b), oracle) => {
                    debug_assert!(b <= oracle.lower_bound().saturating_add(1));
                    Ok(oracle)
                }
                (rec, _) => Ok(rec),
            }
        } else {
            Ok(mu_rec)
        }
    }
}

/// Wirtinger gradient: (g_z, g_zbar) = ((g_x - i g_y)/2, (g_x + i g_y)/2).
fn wirtinger(g: &Series2) -> (Series2, Series2) {
    let level = g.level();
    let i = CycloNumber::i(level).expect("level");
    let half = BigRational::new(1.into(), 2.into());
    let gx = g.partial(Axis::X);
    let gy = g.partial(Axis::Y);
    let igy = gy.scale(&i);
    let gz = gx.sub(&igy).scale(&CycloNumber::from_rational(half.clone(), level).expect("level"));
    let gzb = gx.add(&igy).scale(&CycloNumber::from_rational(half, level).expect("level"));
    (gz, gzb)
}

/// Whitney classification from the multiplicity parity.
pub fn whitney_classify(mu: OrderValue) -> WhitneyClass {
    match mu {
        OrderValue::Exact(2) => WhitneyClass::Fold,
        OrderValue::Exact(3) => WhitneyClass::Cusp,
        OrderValue::Exact(k) if k % 2 == 0 => WhitneyClass::HigherEven,
        OrderValue::Exact(_) => WhitneyClass::HigherOdd,
        OrderValue::Infinite => WhitneyClass::Collapse,
        OrderValue::AtLeast(_) => WhitneyClass::Indeterminate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_series2;

    fn germ(f1: &str, f2: &str, trunc: usize) -> AnalyticGerm {
        AnalyticGerm::new(
            parse_series2(f1, trunc).unwrap(),
            parse_series2(f2, trunc).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn jacobian_examples() {
        let g = germ("x", "y^2", 8);
        assert_eq!(g.jacobian(), parse_series2("2*y", 8).unwrap());

        let g = germ("x", "x*y + y^3", 8);
        assert_eq!(g.jacobian(), parse_series2("x + 3*y^2", 8).unwrap());

        // c = 1 instance of the general form 2y((2c-5)x^4 + (4-3c)x^2y^2 - y^4)
        let g = germ("x^2 + y^2", "x^5 + x^3*y^2 + x*y^4", 12);
        let expect = parse_series2("-6*x^4*y + 2*x^2*y^3 - 2*y^5", 12).unwrap();
        assert_eq!(g.jacobian(), expect);
    }

    #[test]
    fn regular_test_examples() {
        assert!(germ("x", "y^2", 8).regular_test());
        // gradient of the Jacobian vanishes at the origin
        assert!(!germ("x", "x^2*y^2 + y^4", 8).regular_test());
        // not a critical point at all
        assert!(!germ("x", "y", 8).regular_test());
    }

    #[test]
    fn fold_recursion() {
        let g = germ("x", "y^2", 8);
        let trace = g.j_via_mn(1).unwrap();
        assert_eq!(trace.j, OrderValue::Exact(1));
        assert_eq!(trace.values[0], CycloNumber::from_int(-2, 4).unwrap());
        assert_eq!(g.mu_regular().unwrap(), OrderValue::Exact(2));
        assert_eq!(whitney_classify(OrderValue::Exact(2)), WhitneyClass::Fold);
    }

    #[test]
    fn cusp_recursion() {
        let g = germ("x", "x*y + y^3", 8);
        let trace = g.j_via_mn(2).unwrap();
        assert_eq!(trace.j, OrderValue::Exact(2));
        assert!(trace.values[0].is_zero());
        assert_eq!(trace.values[1], CycloNumber::from_int(-6, 4).unwrap());
        assert_eq!(g.mu_regular().unwrap(), OrderValue::Exact(3));
        assert_eq!(whitney_classify(OrderValue::Exact(3)), WhitneyClass::Cusp);
    }

    #[test]
    fn collapse_recursion_hits_truncation() {
        let g = germ("x", "x*y", 8);
        let trace = g.j_via_mn(1).unwrap();
        assert!(trace.values.iter().all(|v| v.is_zero()));
        match trace.j {
            OrderValue::AtLeast(b) => assert!(b >= 7),
            other => panic!("expected AtLeast, got {other:?}"),
        }
        // the oracle certifies the collapse
        assert_eq!(g.mu_regular().unwrap(), OrderValue::Infinite);
        assert_eq!(whitney_classify(OrderValue::Infinite), WhitneyClass::Collapse);
    }

    #[test]
    fn collapse_with_unit_factor() {
        let g = germ("x", "x*y + x^2*y", 8);
        assert_eq!(g.mu_regular().unwrap(), OrderValue::Infinite);
    }

    #[test]
    fn j_via_mn_requires_regular() {
        let g = germ("x", "x^2*y^2 + y^4", 8);
        assert!(matches!(g.j_via_mn(1), Err(AnalyticError::NotRegular)));
    }

    #[test]
    fn whitney_higher_classes() {
        assert_eq!(whitney_classify(OrderValue::Exact(4)), WhitneyClass::HigherEven);
        assert_eq!(whitney_classify(OrderValue::Exact(5)), WhitneyClass::HigherOdd);
        assert_eq!(
            whitney_classify(OrderValue::AtLeast(9)),
            WhitneyClass::Indeterminate
        );
    }
}

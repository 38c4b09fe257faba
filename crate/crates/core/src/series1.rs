//! Truncated formal power series in one variable over the cyclotomic field.
//!
//! A series stores coefficients for every degree `0..=trunc`. `exact = true`
//! means the series is a finite polynomial with no hidden tail, so
//! coefficients above `trunc` are identically zero rather than unknown.

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use thiserror::Error;

use crate::field::CycloNumber;
use crate::order::OrderValue;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("inner series must have zero constant term")]
    InnerConstantNonzero,
    #[error("series is not invertible: constant term is zero")]
    NotAUnit,
    #[error("reversion needs s(0) = 0 and s'(0) != 0")]
    NotReversible,
    #[error("cannot shift down by {0}: lower coefficients are nonzero")]
    ShiftBelowOrder(usize),
}

type Result<T> = std::result::Result<T, SeriesError>;

#[derive(Clone)]
pub struct Series1 {
    level: u32,
    coeffs: Vec<CycloNumber>, // length trunc + 1
    trunc: usize,
    exact: bool,
}

impl PartialEq for Series1 {
    /// Exact polynomials compare by their terms regardless of truncation
    /// capacity; truncated series require matching truncation.
    fn eq(&self, other: &Self) -> bool {
        if self.exact != other.exact {
            return false;
        }
        if self.exact {
            let hi = self.trunc.max(other.trunc);
            (0..=hi).all(|k| self.coeff(k) == other.coeff(k))
        } else {
            self.trunc == other.trunc
                && (0..=self.trunc).all(|k| self.coeffs[k] == other.coeffs[k])
        }
    }
}

impl Eq for Series1 {}

impl Series1 {
    pub fn zero(level: u32, trunc: usize, exact: bool) -> Self {
        let z = CycloNumber::zero(level).expect("valid level");
        Series1 {
            level,
            coeffs: vec![z; trunc + 1],
            trunc,
            exact,
        }
    }

    /// The identity series `z`.
    pub fn identity(level: u32, trunc: usize) -> Self {
        let mut s = Series1::zero(level, trunc, true);
        s.coeffs[1] = CycloNumber::one(level).expect("valid level");
        s
    }

    pub fn monomial(c: CycloNumber, degree: usize, trunc: usize) -> Self {
        let mut s = Series1::zero(c.level(), trunc, true);
        if degree <= trunc {
            s.coeffs[degree] = c;
        } else {
            s.exact = false; // the monomial itself was cut off
        }
        s
    }

    pub fn from_terms(level: u32, trunc: usize, terms: &[(usize, CycloNumber)], exact: bool) -> Self {
        let mut s = Series1::zero(level, trunc, exact);
        for (deg, c) in terms {
            if *deg <= trunc {
                let lifted = c.lift_level(s.level.lcm(&c.level())).expect("level");
                s = s.at_level(lifted.level());
                s.coeffs[*deg] = s.coeffs[*deg].add(&lifted);
            } else {
                s.exact = false;
            }
        }
        s
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn coeff(&self, k: usize) -> CycloNumber {
        if k <= self.trunc {
            self.coeffs[k].clone()
        } else {
            debug_assert!(self.exact, "coefficient beyond truncation is unknown");
            CycloNumber::zero(self.level).expect("valid level")
        }
    }

    /// Degree of the highest stored nonzero coefficient, if any.
    pub fn poly_degree(&self) -> Option<usize> {
        (0..=self.trunc).rev().find(|&k| !self.coeffs[k].is_zero())
    }

    pub fn is_zero_poly(&self) -> bool {
        self.exact && self.poly_degree().is_none()
    }

    fn at_level(&self, level: u32) -> Self {
        if level == self.level {
            return self.clone();
        }
        Series1 {
            level,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.lift_level(level).expect("level lift"))
                .collect(),
            trunc: self.trunc,
            exact: self.exact,
        }
    }

    fn unify(a: &Self, b: &Self) -> (Self, Self) {
        let l = a.level.lcm(&b.level);
        (a.at_level(l), b.at_level(l))
    }

    pub fn retrunc(&self, trunc: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        let mut exact = self.exact;
        if trunc < self.trunc {
            // dropping stored nonzero terms loses polynomial exactness
            if self.poly_degree().map(|d| d > trunc).unwrap_or(false) {
                exact = false;
            }
            coeffs.truncate(trunc + 1);
        } else {
            if !self.exact && trunc > self.trunc {
                // cannot invent unknown coefficients
                return Series1 {
                    level: self.level,
                    coeffs,
                    trunc: self.trunc,
                    exact: false,
                };
            }
            coeffs.resize(trunc + 1, CycloNumber::zero(self.level).expect("level"));
        }
        Series1 {
            level: self.level,
            coeffs,
            trunc,
            exact,
        }
    }

    pub fn ord(&self) -> OrderValue {
        match (0..=self.trunc).find(|&k| !self.coeffs[k].is_zero()) {
            Some(k) => OrderValue::Exact(k),
            None if self.exact => OrderValue::Infinite,
            None => OrderValue::AtLeast(self.trunc + 1),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = Self::unify(self, other);
        let trunc = a.trunc.min(b.trunc);
        let within = |s: &Series1| s.poly_degree().map(|d| d <= trunc).unwrap_or(true);
        let exact = a.exact && b.exact && within(&a) && within(&b);
        let coeffs = (0..=trunc).map(|k| a.coeffs[k].add(&b.coeffs[k])).collect();
        Series1 {
            level: a.level,
            coeffs,
            trunc,
            exact,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Series1 {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            trunc: self.trunc,
            exact: self.exact,
        }
    }

    pub fn scale(&self, c: &CycloNumber) -> Self {
        let l = self.level.lcm(&c.level());
        let s = self.at_level(l);
        let c = c.lift_level(l).expect("level lift");
        Series1 {
            level: l,
            coeffs: s.coeffs.iter().map(|x| x.mul(&c)).collect(),
            trunc: s.trunc,
            exact: s.exact,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::unify(self, other);
        let trunc = a.trunc.min(b.trunc);
        let zero = CycloNumber::zero(a.level).expect("level");
        let mut coeffs = vec![zero; trunc + 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() || i > trunc {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if i + j > trunc {
                    break;
                }
                if !y.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add(&x.mul(y));
                }
            }
        }
        let exact = a.exact
            && b.exact
            && match (a.poly_degree(), b.poly_degree()) {
                (Some(da), Some(db)) => da + db <= trunc,
                _ => true, // a zero factor
            };
        Series1 {
            level: a.level,
            coeffs,
            trunc,
            exact,
        }
    }

    pub fn pow(&self, m: u32) -> Self {
        let mut acc = {
            let mut one = Series1::zero(self.level, self.trunc, true);
            one.coeffs[0] = CycloNumber::one(self.level).expect("level");
            one
        };
        for _ in 0..m {
            acc = acc.mul(self);
        }
        acc
    }

    /// Coefficient-wise complex conjugation (`p` to `p-bar`).
    pub fn conj_series(&self) -> Self {
        Series1 {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
            trunc: self.trunc,
            exact: self.exact,
        }
    }

    pub fn derivative(&self) -> Self {
        let trunc = self.trunc.saturating_sub(1);
        let coeffs = (0..=trunc)
            .map(|k| {
                let c = &self.coeffs[k + 1];
                c.mul_rational(&BigRational::from_integer(((k + 1) as i64).into()))
            })
            .collect();
        Series1 {
            level: self.level,
            coeffs,
            trunc,
            exact: self.exact,
        }
    }

    /// `outer(inner)`; requires `inner(0) = 0`.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::InnerConstantNonzero);
        }
        let (a, b) = Self::unify(outer, inner);
        let trunc = a.trunc.min(b.trunc);
        let mut acc = Series1::zero(a.level, trunc, true);
        // Horner over truncated series
        for k in (0..=a.trunc).rev() {
            acc = acc.mul(&b.retrunc(trunc));
            acc.coeffs[0] = acc.coeffs[0].add(&a.coeffs[k]);
        }
        let exact = a.exact
            && b.exact
            && match (a.poly_degree(), b.poly_degree()) {
                (Some(da), Some(db)) => da * db <= trunc,
                _ => true,
            };
        acc.exact = exact;
        Ok(acc)
    }

    /// Compositional inverse: `r` with `s(r(z)) = z` up to truncation.
    pub fn reversion(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() || self.trunc < 1 || self.coeffs[1].is_zero() {
            return Err(SeriesError::NotReversible);
        }
        let c1_inv = self.coeffs[1].inv().expect("nonzero");
        let trunc = self.trunc;
        let ident = Series1::identity(self.level, trunc);
        // s = c1*z + h;  r <- (z - h(r)) / c1 gains one correct degree per pass
        let mut h = self.clone();
        h.coeffs[1] = CycloNumber::zero(self.level).expect("level");
        let mut r = ident.scale(&c1_inv);
        for _ in 1..trunc {
            let hr = Series1::compose(&h, &r)?;
            r = ident.sub(&hr).scale(&c1_inv);
        }
        r.exact = self.poly_degree() == Some(1);
        Ok(r)
    }

    /// Divide by `z^k`; every coefficient below k must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if self.coeffs[..k.min(self.trunc + 1)].iter().any(|c| !c.is_zero()) {
            return Err(SeriesError::ShiftBelowOrder(k));
        }
        let trunc = self.trunc - k.min(self.trunc);
        let zero = CycloNumber::zero(self.level).expect("level");
        let coeffs = (0..=trunc)
            .map(|j| self.coeffs.get(j + k).cloned().unwrap_or_else(|| zero.clone()))
            .collect();
        Ok(Series1 {
            level: self.level,
            coeffs,
            trunc,
            exact: self.exact,
        })
    }

    /// Multiplicative inverse of a unit series (nonzero constant term).
    pub fn invert_unit(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(SeriesError::NotAUnit);
        }
        let c0_inv = self.coeffs[0].inv().expect("nonzero");
        let mut inv = Series1::zero(self.level, self.trunc, false);
        inv.coeffs[0] = c0_inv.clone();
        for k in 1..=self.trunc {
            // coefficient k of self * inv must vanish
            let mut acc = CycloNumber::zero(self.level).expect("level");
            for j in 0..k {
                acc = acc.add(&self.coeffs[k - j].mul(&inv.coeffs[j]));
            }
            inv.coeffs[k] = acc.neg().mul(&c0_inv);
        }
        // the inverse of a nonconstant polynomial is an infinite series
        inv.exact = self.poly_degree() == Some(0);
        Ok(inv)
    }

    /// Quotient of series: `self / other` where `ord(other) <= ord(self)`
    /// and the quotient extends holomorphically. Shifts the common power
    /// of z down and inverts the remaining unit.
    pub fn div_series(&self, other: &Self, common_order: usize) -> Result<Self> {
        let num = self.shift_down(common_order)?;
        let den = other.shift_down(common_order)?;
        Ok(num.mul(&den.invert_unit()?))
    }

    /// Float coefficients for the samplers.
    pub fn approx_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.approx()).collect()
    }

    pub fn eval_f64(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.approx();
        }
        acc
    }
}

impl std::fmt::Debug for Series1 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Series1[{}; trunc {}{}]({})",
            self.level,
            self.trunc,
            if self.exact { ", exact" } else { "" },
            crate::text::print_series1(self)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CycloNumber;

    fn z_plus_z2(trunc: usize) -> Series1 {
        let one = CycloNumber::one(4).unwrap();
        Series1::from_terms(4, trunc, &[(1, one.clone()), (2, one)], true)
    }

    fn z_plus_iz2(trunc: usize) -> Series1 {
        let one = CycloNumber::one(4).unwrap();
        let i = CycloNumber::i(4).unwrap();
        Series1::from_terms(4, trunc, &[(1, one), (2, i)], true)
    }

    #[test]
    fn ord_examples() {
        let one = CycloNumber::one(4).unwrap();
        let s = Series1::from_terms(4, 8, &[(2, one.clone()), (3, one.neg())], true);
        assert_eq!(s.ord(), OrderValue::Exact(2));

        let zero_poly = Series1::zero(4, 8, true);
        assert_eq!(zero_poly.ord(), OrderValue::Infinite);

        let zero_trunc = Series1::zero(4, 8, false);
        assert_eq!(zero_trunc.ord(), OrderValue::AtLeast(9));
    }

    #[test]
    fn compose_direct_expansion() {
        // (z + z^2) o (z + z^3) = z + z^2 + z^3 + 2z^4 + z^6
        let one = CycloNumber::one(4).unwrap();
        let outer = z_plus_z2(8);
        let inner = Series1::from_terms(4, 8, &[(1, one.clone()), (3, one.clone())], true);
        let got = Series1::compose(&outer, &inner).unwrap();
        let expect = Series1::from_terms(
            4,
            8,
            &[
                (1, one.clone()),
                (2, one.clone()),
                (3, one.clone()),
                (4, CycloNumber::from_int(2, 4).unwrap()),
                (6, one),
            ],
            true,
        );
        assert_eq!(got, expect);
    }

    #[test]
    fn compose_identity_outer() {
        let outer = Series1::identity(4, 8);
        let s = z_plus_iz2(8);
        assert_eq!(Series1::compose(&outer, &s).unwrap(), s);
    }

    #[test]
    fn compose_pbar_after_p() {
        // p = z + iz^2: pbar o p = z + 2z^3 + iz^4
        let p = z_plus_iz2(8);
        let got = Series1::compose(&p.conj_series(), &p).unwrap();
        let one = CycloNumber::one(4).unwrap();
        let expect = Series1::from_terms(
            4,
            8,
            &[
                (1, one),
                (3, CycloNumber::from_int(2, 4).unwrap()),
                (4, CycloNumber::i(4).unwrap()),
            ],
            true,
        );
        assert_eq!(got, expect);
    }

    #[test]
    fn compose_rejects_constant_inner() {
        let one = CycloNumber::one(4).unwrap();
        let inner = Series1::from_terms(4, 8, &[(0, one)], true);
        assert!(Series1::compose(&Series1::identity(4, 8), &inner).is_err());
    }

    #[test]
    fn conj_series_examples() {
        let p = z_plus_iz2(8);
        let one = CycloNumber::one(4).unwrap();
        let expect = Series1::from_terms(4, 8, &[(1, one), (2, CycloNumber::i(4).unwrap().neg())], true);
        assert_eq!(p.conj_series(), expect);

        let real = z_plus_z2(8);
        assert_eq!(real.conj_series(), real);
        assert_eq!(p.conj_series().conj_series(), p);
    }

    #[test]
    fn reversion_catalan_signs() {
        // rev(z + z^2) = z - z^2 + 2z^3 - 5z^4 + 14z^5 - ...
        let s = z_plus_z2(6);
        let r = s.reversion().unwrap();
        let expect: [i64; 6] = [0, 1, -1, 2, -5, 14];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(r.coeff(k), CycloNumber::from_int(*e, 4).unwrap(), "degree {k}");
        }
        // round-trip
        let back = Series1::compose(&s, &r).unwrap();
        assert_eq!(back.sub(&Series1::identity(4, 6)).ord(), OrderValue::AtLeast(7));
    }

    #[test]
    fn reversion_linear() {
        let i = CycloNumber::i(4).unwrap();
        let s = Series1::monomial(i.clone(), 1, 8);
        let r = s.reversion().unwrap();
        assert_eq!(r, Series1::monomial(i.inv().unwrap(), 1, 8));
        assert_eq!(Series1::identity(4, 8).reversion().unwrap(), Series1::identity(4, 8));
    }

    #[test]
    fn derivative_example() {
        let one = CycloNumber::one(4).unwrap();
        let s = Series1::from_terms(4, 8, &[(3, one)], true);
        let expect = Series1::from_terms(4, 7, &[(2, CycloNumber::from_int(3, 4).unwrap())], true);
        assert_eq!(s.derivative(), expect);
    }

    #[test]
    fn pow_examples() {
        let s = z_plus_z2(8);
        let sq = s.pow(2);
        let one = CycloNumber::one(4).unwrap();
        let expect = Series1::from_terms(
            4,
            8,
            &[(2, one.clone()), (3, CycloNumber::from_int(2, 4).unwrap()), (4, one)],
            true,
        );
        assert_eq!(sq, expect);
        assert_eq!(s.pow(1), s);

        // (z + iz^2)^3 = z^3 + 3i z^4 - 3 z^5 - i z^6
        let c = z_plus_iz2(8).pow(3);
        assert_eq!(c.coeff(3), CycloNumber::from_int(1, 4).unwrap());
        assert_eq!(
            c.coeff(4),
            CycloNumber::i(4).unwrap().mul(&CycloNumber::from_int(3, 4).unwrap())
        );
        assert_eq!(c.coeff(5), CycloNumber::from_int(-3, 4).unwrap());
        assert_eq!(c.coeff(6), CycloNumber::i(4).unwrap().neg());
    }

    #[test]
    fn exact_flag_drops_when_degree_exceeds_trunc() {
        let s = z_plus_z2(3);
        let sq = s.mul(&s); // degree 4 > trunc 3
        assert!(!sq.is_exact());
        assert_eq!(sq.trunc(), 3);
    }
}

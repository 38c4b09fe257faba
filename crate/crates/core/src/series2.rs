//! Truncated formal power series in two variables over the cyclotomic
//! field, with total-degree truncation.

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;

use crate::field::CycloNumber;
use crate::order::OrderValue;
use crate::series1::{Series1, SeriesError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

#[derive(Clone)]
pub struct Series2 {
    level: u32,
    /// `coeffs[a][b]` is the coefficient of `x^a y^b`; `a + b <= trunc`.
    coeffs: Vec<Vec<CycloNumber>>,
    trunc: usize,
    exact: bool,
}

impl PartialEq for Series2 {
    /// Exact polynomials compare by their terms regardless of truncation
    /// capacity; truncated series require matching truncation.
    fn eq(&self, other: &Self) -> bool {
        if self.exact != other.exact {
            return false;
        }
        if self.exact {
            let hi = self.trunc.max(other.trunc);
            (0..=hi).all(|d| (0..=d).all(|a| self.coeff(a, d - a) == other.coeff(a, d - a)))
        } else {
            self.trunc == other.trunc
                && (0..=self.trunc)
                    .all(|d| (0..=d).all(|a| self.coeffs[a][d - a] == other.coeffs[a][d - a]))
        }
    }
}

impl Eq for Series2 {}

impl Series2 {
    pub fn zero(level: u32, trunc: usize, exact: bool) -> Self {
        let z = CycloNumber::zero(level).expect("valid level");
        let coeffs = (0..=trunc).map(|a| vec![z.clone(); trunc - a + 1]).collect();
        Series2 {
            level,
            coeffs,
            trunc,
            exact,
        }
    }

    pub fn var(axis: Axis, level: u32, trunc: usize) -> Self {
        let mut s = Series2::zero(level, trunc, true);
        let one = CycloNumber::one(level).expect("level");
        match axis {
            Axis::X => s.coeffs[1][0] = one,
            Axis::Y => s.coeffs[0][1] = one,
        }
        s
    }

    pub fn from_terms(
        level: u32,
        trunc: usize,
        terms: &[(usize, usize, CycloNumber)],
        exact: bool,
    ) -> Self {
        let mut s = Series2::zero(level, trunc, exact);
        for (a, b, c) in terms {
            if a + b <= trunc {
                let l = s.level.lcm(&c.level());
                s = s.at_level(l);
                let lifted = c.lift_level(l).expect("level lift");
                s.coeffs[*a][*b] = s.coeffs[*a][*b].add(&lifted);
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

    pub fn coeff(&self, a: usize, b: usize) -> CycloNumber {
        if a + b <= self.trunc {
            self.coeffs[a][b].clone()
        } else {
            debug_assert!(self.exact, "coefficient beyond truncation is unknown");
            CycloNumber::zero(self.level).expect("level")
        }
    }

    pub fn constant_term(&self) -> CycloNumber {
        self.coeffs[0][0].clone()
    }

    /// Iterate stored nonzero terms as (a, b, coeff).
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &CycloNumber)> {
        self.coeffs.iter().enumerate().flat_map(|(a, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(b, c)| (a, b, c))
        })
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms().map(|(a, b, _)| a + b).max()
    }

    pub fn is_zero_poly(&self) -> bool {
        self.exact && self.terms().next().is_none()
    }

    pub fn at_level(&self, level: u32) -> Self {
        if level == self.level {
            return self.clone();
        }
        Series2 {
            level,
            coeffs: self
                .coeffs
                .iter()
                .map(|row| row.iter().map(|c| c.lift_level(level).expect("lift")).collect())
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
        let mut out = Series2::zero(self.level, trunc, self.exact);
        if trunc >= self.trunc && !self.exact {
            return self.clone(); // cannot extend unknown coefficients
        }
        for (a, b, c) in self.terms() {
            if a + b <= trunc {
                out.coeffs[a][b] = c.clone();
            } else {
                out.exact = false;
            }
        }
        out
    }

    pub fn ord(&self) -> OrderValue {
        match self.terms().map(|(a, b, _)| a + b).min() {
            Some(k) => OrderValue::Exact(k),
            None if self.exact => OrderValue::Infinite,
            None => OrderValue::AtLeast(self.trunc + 1),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = Self::unify(self, other);
        let trunc = a.trunc.min(b.trunc);
        let within = |s: &Series2| s.total_degree().map(|d| d <= trunc).unwrap_or(true);
        let exact = a.exact && b.exact && within(&a) && within(&b);
        let mut out = Series2::zero(a.level, trunc, exact);
        for i in 0..=trunc {
            for j in 0..=trunc - i {
                out.coeffs[i][j] = a.coeffs[i][j].add(&b.coeffs[i][j]);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Series2 {
            level: self.level,
            coeffs: self
                .coeffs
                .iter()
                .map(|row| row.iter().map(|c| c.neg()).collect())
                .collect(),
            trunc: self.trunc,
            exact: self.exact,
        }
    }

    pub fn scale(&self, c: &CycloNumber) -> Self {
        let l = self.level.lcm(&c.level());
        let s = self.at_level(l);
        let c = c.lift_level(l).expect("lift");
        Series2 {
            level: l,
            coeffs: s
                .coeffs
                .iter()
                .map(|row| row.iter().map(|x| x.mul(&c)).collect())
                .collect(),
            trunc: s.trunc,
            exact: s.exact,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::unify(self, other);
        let trunc = a.trunc.min(b.trunc);
        let exact = a.exact
            && b.exact
            && match (a.total_degree(), b.total_degree()) {
                (Some(da), Some(db)) => da + db <= trunc,
                _ => true,
            };
        let mut out = Series2::zero(a.level, trunc, exact);
        for (i1, j1, c1) in a.terms() {
            if i1 + j1 > trunc {
                continue;
            }
            for (i2, j2, c2) in b.terms() {
                if i1 + i2 + j1 + j2 > trunc {
                    continue;
                }
                let t = &mut out.coeffs[i1 + i2][j1 + j2];
                *t = t.add(&c1.mul(c2));
            }
        }
        out
    }

    pub fn partial(&self, axis: Axis) -> Self {
        let trunc = self.trunc.saturating_sub(1);
        let mut out = Series2::zero(self.level, trunc, self.exact);
        for (a, b, c) in self.terms() {
            match axis {
                Axis::X if a >= 1 && a - 1 + b <= trunc => {
                    out.coeffs[a - 1][b] =
                        c.mul_rational(&BigRational::from_integer((a as i64).into()));
                }
                Axis::Y if b >= 1 && a + b - 1 <= trunc => {
                    out.coeffs[a][b - 1] =
                        c.mul_rational(&BigRational::from_integer((b as i64).into()));
                }
                _ => {}
            }
        }
        out
    }

    /// Coefficient-wise conjugation (the variables are real).
    pub fn conj_coeffs(&self) -> Self {
        Series2 {
            level: self.level,
            coeffs: self
                .coeffs
                .iter()
                .map(|row| row.iter().map(|c| c.conj()).collect())
                .collect(),
            trunc: self.trunc,
            exact: self.exact,
        }
    }

    /// `outer(inner)` with `outer` univariate and `inner(0,0) = 0`.
    pub fn compose_uni(outer: &Series1, inner: &Series2) -> Result<Self, SeriesError> {
        if !inner.constant_term().is_zero() {
            return Err(SeriesError::InnerConstantNonzero);
        }
        let l = outer.level().lcm(&inner.level);
        let inner = inner.at_level(l);
        let trunc = outer.trunc().min(inner.trunc);
        let mut acc = Series2::zero(l, trunc, true);
        for k in (0..=outer.trunc()).rev() {
            acc = acc.mul(&inner.retrunc(trunc));
            let c = outer.coeff(k).lift_level(l).expect("lift");
            acc.coeffs[0][0] = acc.coeffs[0][0].add(&c);
        }
        let exact = outer.is_exact()
            && inner.exact
            && match (outer.poly_degree(), inner.total_degree()) {
                (Some(da), Some(db)) => da * db <= trunc,
                _ => true,
            };
        acc.exact = exact;
        Ok(acc)
    }

    /// Embed a univariate series as a series in x or y alone.
    pub fn embed(uni: &Series1, axis: Axis) -> Self {
        let mut out = Series2::zero(uni.level(), uni.trunc(), uni.is_exact());
        for k in 0..=uni.trunc() {
            let c = uni.coeff(k);
            if !c.is_zero() {
                match axis {
                    Axis::X => out.coeffs[k][0] = c,
                    Axis::Y => out.coeffs[0][k] = c,
                }
            }
        }
        out
    }

    /// Substitute `x -> a11 x + a12 y`, `y -> a21 x + a22 y` (exact linear
    /// change of variables; total degree is preserved).
    pub fn linear_sub(&self, m: &[[CycloNumber; 2]; 2]) -> Self {
        let mut l = self.level;
        for row in m {
            for c in row {
                l = l.lcm(&c.level());
            }
        }
        let s = self.at_level(l);
        let lift = |c: &CycloNumber| c.lift_level(l).expect("lift");
        let new_x = Series2::from_terms(
            l,
            s.trunc,
            &[(1, 0, lift(&m[0][0])), (0, 1, lift(&m[0][1]))],
            true,
        );
        let new_y = Series2::from_terms(
            l,
            s.trunc,
            &[(1, 0, lift(&m[1][0])), (0, 1, lift(&m[1][1]))],
            true,
        );
        s.substitute(&new_x, &new_y)
    }

    /// Substitute arbitrary series (with zero constant term for truncation
    /// soundness unless `self` is an exact polynomial).
    pub fn substitute(&self, sx: &Series2, sy: &Series2) -> Self {
        let l = self.level.lcm(&sx.level).lcm(&sy.level);
        let s = self.at_level(l);
        let sx = sx.at_level(l);
        let sy = sy.at_level(l);
        let trunc = if s.exact {
            sx.trunc.min(sy.trunc)
        } else {
            s.trunc.min(sx.trunc).min(sy.trunc)
        };
        let mut xpows: Vec<Series2> = vec![{
            let mut one = Series2::zero(l, trunc, true);
            one.coeffs[0][0] = CycloNumber::one(l).expect("level");
            one
        }];
        let mut out = Series2::zero(l, trunc, s.exact && sx.exact && sy.exact);
        let max_a = s.coeffs.len() - 1;
        for a in 1..=max_a {
            let prev = xpows[a - 1].clone();
            xpows.push(prev.mul(&sx));
        }
        for (a, b, c) in s.terms() {
            let mut term = xpows[a].clone();
            for _ in 0..b {
                term = term.mul(&sy);
            }
            out = out.add(&term.scale(c));
        }
        out
    }

    /// Exact recentering of a polynomial: `x -> x + x0`, `y -> y + y0`,
    /// i.e. the Taylor expansion at `(x0, y0)`.
    pub fn recenter(&self, x0: &CycloNumber, y0: &CycloNumber) -> Self {
        assert!(self.exact, "recentering needs an exact polynomial");
        let l = self.level.lcm(&x0.level()).lcm(&y0.level());
        let trunc = self.trunc;
        let sx = Series2::from_terms(
            l,
            trunc,
            &[
                (0, 0, x0.lift_level(l).expect("lift")),
                (1, 0, CycloNumber::one(l).expect("level")),
            ],
            true,
        );
        let sy = Series2::from_terms(
            l,
            trunc,
            &[
                (0, 0, y0.lift_level(l).expect("lift")),
                (0, 1, CycloNumber::one(l).expect("level")),
            ],
            true,
        );
        self.at_level(l).substitute(&sx, &sy)
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b, c) in self.terms() {
            acc += c.approx() * x.powi(a as i32) * y.powi(b as i32);
        }
        acc
    }
}

impl std::fmt::Debug for Series2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Series2[{}; trunc {}{}]({})",
            self.level,
            self.trunc,
            if self.exact { ", exact" } else { "" },
            crate::text::print_series2(self)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> CycloNumber {
        CycloNumber::one(4).unwrap()
    }

    #[test]
    fn partial_derivatives() {
        // x^2 y: d/dx = 2xy, d/dy = x^2
        let s = Series2::from_terms(4, 8, &[(2, 1, one())], true);
        let dx = s.partial(Axis::X);
        let dy = s.partial(Axis::Y);
        assert_eq!(
            dx,
            Series2::from_terms(4, 7, &[(1, 1, CycloNumber::from_int(2, 4).unwrap())], true)
        );
        assert_eq!(dy, Series2::from_terms(4, 7, &[(2, 0, one())], true));
    }

    #[test]
    fn mul_and_ord() {
        let x = Series2::var(Axis::X, 4, 8);
        let y = Series2::var(Axis::Y, 4, 8);
        let s = x.mul(&x).add(&y.mul(&y)); // x^2 + y^2
        assert_eq!(s.ord(), OrderValue::Exact(2));
        let zero_trunc = Series2::zero(4, 8, false);
        assert_eq!(zero_trunc.ord(), OrderValue::AtLeast(9));
        assert_eq!(Series2::zero(4, 8, true).ord(), OrderValue::Infinite);
    }

    #[test]
    fn compose_univariate() {
        // p(z) = z + z^2 composed with inner = x + i y
        let p = Series1::from_terms(4, 6, &[(1, one()), (2, one())], true);
        let i = CycloNumber::i(4).unwrap();
        let inner = Series2::from_terms(4, 6, &[(1, 0, one()), (0, 1, i.clone())], true);
        let got = Series2::compose_uni(&p, &inner).unwrap();
        // (x + iy) + (x + iy)^2 = x + iy + x^2 + 2ixy - y^2
        assert_eq!(got.coeff(1, 0), one());
        assert_eq!(got.coeff(0, 1), i);
        assert_eq!(got.coeff(2, 0), one());
        assert_eq!(
            got.coeff(1, 1),
            CycloNumber::i(4).unwrap().mul(&CycloNumber::from_int(2, 4).unwrap())
        );
        assert_eq!(got.coeff(0, 2), one().neg());
    }

    #[test]
    fn recenter_taylor_shift() {
        // f = x^2 recentered at x0 = 1 gives (x+1)^2 = x^2 + 2x + 1
        let s = Series2::from_terms(4, 4, &[(2, 0, one())], true);
        let shifted = s.recenter(&one(), &CycloNumber::zero(4).unwrap());
        assert_eq!(shifted.coeff(0, 0), one());
        assert_eq!(shifted.coeff(1, 0), CycloNumber::from_int(2, 4).unwrap());
        assert_eq!(shifted.coeff(2, 0), one());
    }
}

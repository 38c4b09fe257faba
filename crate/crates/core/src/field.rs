//! Exact arithmetic in cyclotomic fields `Q(zeta_N)` with `4 | N`.
//!
//! Elements are canonical residues modulo the N-th cyclotomic polynomial,
//! stored as `phi(N)` rational coordinates, so equality and the zero test
//! are coordinate-wise and exact. The quotient by `z^N - 1` would have
//! zero divisors and is deliberately avoided.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use thiserror::Error;

/// Largest admissible cyclotomic level. `phi(N)`-dimensional arithmetic
/// grows quadratically; nothing at desk scale needs more.
pub const MAX_LEVEL: u32 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("cyclotomic level {0} is not divisible by 4")]
    LevelNotMultipleOf4(u32),
    #[error("cyclotomic level {0} exceeds the guard {MAX_LEVEL}")]
    LevelTooLarge(u32),
    #[error("order {order} does not divide level {level}")]
    OrderDoesNotDivideLevel { order: u32, level: u32 },
    #[error("level {from} does not divide target level {to}")]
    LevelNotDivisible { from: u32, to: u32 },
    #[error("division by zero in the cyclotomic field")]
    DivisionByZero,
}

type Result<T> = std::result::Result<T, FieldError>;

// ---------------------------------------------------------------------------
// per-level data
// ---------------------------------------------------------------------------

struct LevelInfo {
    n: u32,
    phi: usize,
    /// `pow[k]` = canonical coordinates of `zeta^k` for `k = 0..n`.
    pow: Vec<Vec<BigRational>>,
}

static LEVELS: Lazy<Mutex<HashMap<u32, Arc<LevelInfo>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn rat(i: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(i))
}

/// Monic coefficients (ascending) of the n-th cyclotomic polynomial,
/// computed by dividing `x^n - 1` by all proper-divisor cyclotomics.
fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
        // den is monic; division over Z is exact here.
        let mut rem = num.to_vec();
        let dd = den.len() - 1;
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone();
            if !c.is_zero() {
                for (j, d) in den.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        debug_assert!(rem.iter().all(|c| c.is_zero()));
        quot
    }
    let mut acc = {
        // x^n - 1
        let mut v = vec![BigInt::zero(); n as usize + 1];
        v[0] = BigInt::from(-1);
        v[n as usize] = BigInt::one();
        v
    };
    for d in 1..n {
        if n % d == 0 {
            let phid = cyclotomic_polynomial(d);
            acc = poly_div_exact(&acc, &phid);
        }
    }
    acc
}

fn euler_phi(n: u32) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result = result / p * (p - 1);
        }
        p += 1;
    }
    if m > 1 {
        result = result / m * (m - 1);
    }
    result as usize
}

impl LevelInfo {
    fn get(n: u32) -> Result<Arc<LevelInfo>> {
        if n % 4 != 0 {
            return Err(FieldError::LevelNotMultipleOf4(n));
        }
        if n > MAX_LEVEL {
            return Err(FieldError::LevelTooLarge(n));
        }
        let mut cache = LEVELS.lock().unwrap();
        if let Some(info) = cache.get(&n) {
            return Ok(info.clone());
        }
        let cyclo: Vec<BigRational> = cyclotomic_polynomial(n)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let phi = cyclo.len() - 1;
        debug_assert_eq!(phi, euler_phi(n));
        // x^phi = -(low part of cyclo); build x^k residues up to x^{n-1}.
        let mut pow: Vec<Vec<BigRational>> = Vec::with_capacity(n as usize);
        for k in 0..phi {
            let mut v = vec![BigRational::zero(); phi];
            v[k] = BigRational::one();
            pow.push(v);
        }
        for k in phi..n as usize {
            let prev = &pow[k - 1];
            let mut v = vec![BigRational::zero(); phi];
            // multiply prev by x, reduce the overflow term via the relation
            let top = prev[phi - 1].clone();
            for j in (1..phi).rev() {
                v[j] = prev[j - 1].clone();
            }
            if !top.is_zero() {
                for j in 0..phi {
                    v[j] -= &top * &cyclo[j];
                }
            }
            pow.push(v);
        }
        let info = Arc::new(LevelInfo { n, phi, pow });
        cache.insert(n, info.clone());
        Ok(info)
    }
}

// ---------------------------------------------------------------------------
// CycloNumber
// ---------------------------------------------------------------------------

/// An exact element of `Q(zeta_N)`, `4 | N`, as a reduced residue modulo
/// the N-th cyclotomic polynomial. Immutable; all operations are pure.
#[derive(Clone)]
pub struct CycloNumber {
    level: u32,
    coords: Vec<BigRational>,
}

impl CycloNumber {
    fn from_residue(level: u32, mut coords: Vec<BigRational>) -> Result<Self> {
        let info = LevelInfo::get(level)?;
        coords.resize(info.phi, BigRational::zero());
        Ok(CycloNumber { level, coords })
    }

    pub fn zero(level: u32) -> Result<Self> {
        Self::from_residue(level, vec![])
    }

    pub fn one(level: u32) -> Result<Self> {
        Self::from_rational(BigRational::one(), level)
    }

    pub fn from_rational(r: BigRational, level: u32) -> Result<Self> {
        Self::from_residue(level, vec![r])
    }

    pub fn from_int(i: i64, level: u32) -> Result<Self> {
        Self::from_rational(rat(i), level)
    }

    /// `re + im * i`, with `i = zeta_N^{N/4}`.
    pub fn make_gaussian(re: BigRational, im: BigRational, level: u32) -> Result<Self> {
        let info = LevelInfo::get(level)?;
        let quarter = (level / 4) as usize;
        let mut coords = vec![BigRational::zero(); info.phi];
        coords[0] = re;
        for (j, c) in info.pow[quarter].iter().enumerate() {
            coords[j] += &im * c;
        }
        Ok(CycloNumber { level, coords })
    }

    pub fn i(level: u32) -> Result<Self> {
        Self::make_gaussian(BigRational::zero(), BigRational::one(), level)
    }

    /// `zeta_level^{k * level/order}`: an exact order-th root of unity.
    pub fn root_of_unity(k: i64, order: u32, level: u32) -> Result<Self> {
        let info = LevelInfo::get(level)?;
        if order == 0 || level % order != 0 {
            return Err(FieldError::OrderDoesNotDivideLevel { order, level });
        }
        let step = (level / order) as i64;
        let exp = (k * step).rem_euclid(level as i64) as usize;
        Ok(CycloNumber {
            level,
            coords: info.pow[exp].clone(),
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Coordinates of the canonical residue (length `phi(level)`).
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// The rational value, when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// The pair `(a, b)` with `self = a + b*i`, when the element is Gaussian.
    pub fn as_gaussian(&self) -> Option<(BigRational, BigRational)> {
        let info = LevelInfo::get(self.level).ok()?;
        let iv = &info.pow[(self.level / 4) as usize];
        // Solve a*e0 + b*iv = coords, then verify.
        let k = (1..info.phi).find(|&k| !iv[k].is_zero());
        let b = match k {
            Some(k) => &self.coords[k] / &iv[k],
            None => BigRational::zero(),
        };
        let a = &self.coords[0] - &b * &iv[0];
        let mut check = vec![BigRational::zero(); info.phi];
        check[0] = a.clone();
        for j in 0..info.phi {
            check[j] += &b * &iv[j];
        }
        if check == self.coords {
            Some((a, b))
        } else {
            None
        }
    }

    /// Canonical embedding into `Q(zeta_M)` for `level | M`.
    pub fn lift_level(&self, new_level: u32) -> Result<Self> {
        if new_level == self.level {
            return Ok(self.clone());
        }
        if new_level % self.level != 0 {
            return Err(FieldError::LevelNotDivisible {
                from: self.level,
                to: new_level,
            });
        }
        let info = LevelInfo::get(new_level)?;
        let ratio = (new_level / self.level) as usize;
        let mut coords = vec![BigRational::zero(); info.phi];
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (k * ratio) % new_level as usize;
            for (j, p) in info.pow[e].iter().enumerate() {
                coords[j] += c * p;
            }
        }
        Ok(CycloNumber {
            level: new_level,
            coords,
        })
    }

    /// Lift both operands to the lcm of their levels.
    pub fn unify(a: &Self, b: &Self) -> Result<(Self, Self)> {
        if a.level == b.level {
            return Ok((a.clone(), b.clone()));
        }
        let l = a.level.lcm(&b.level);
        Ok((a.lift_level(l)?, b.lift_level(l)?))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = Self::unify(self, other).expect("level unification");
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x + y)
            .collect();
        CycloNumber {
            level: a.level,
            coords,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CycloNumber {
            level: self.level,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::unify(self, other).expect("level unification");
        let info = LevelInfo::get(a.level).expect("cached level");
        let phi = info.phi;
        let mut prod = vec![BigRational::zero(); 2 * phi - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut coords: Vec<BigRational> = prod[..phi].to_vec();
        for (k, c) in prod.iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            for (j, p) in info.pow[k].iter().enumerate() {
                coords[j] += c * p;
            }
        }
        CycloNumber {
            level: a.level,
            coords,
        }
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        CycloNumber {
            level: self.level,
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    /// Complex conjugation: the ring automorphism `zeta -> zeta^{N-1}`.
    pub fn conj(&self) -> Self {
        let info = LevelInfo::get(self.level).expect("cached level");
        let n = self.level as usize;
        let mut coords = vec![BigRational::zero(); info.phi];
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (k * (n - 1)) % n;
            for (j, p) in info.pow[e].iter().enumerate() {
                coords[j] += c * p;
            }
        }
        CycloNumber {
            level: self.level,
            coords,
        }
    }

    /// Exact inverse via the extended gcd of the representing polynomial
    /// with the cyclotomic polynomial.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let info = LevelInfo::get(self.level)?;
        let cyclo: Vec<BigRational> = cyclotomic_polynomial(self.level)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        // extended Euclid in Q[x]: u*a + v*cyclo = g (g a nonzero constant,
        // since the cyclotomic polynomial is irreducible and deg a < phi)
        let (g, u) = poly_xgcd(&self.coords, &cyclo);
        debug_assert_eq!(poly_deg(&g), Some(0));
        let ginv = g[0].recip();
        let mut coords = vec![BigRational::zero(); info.phi];
        for (k, c) in u.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // deg u < deg cyclo = phi, so no reduction needed
            coords[k] = c * &ginv;
        }
        Ok(CycloNumber {
            level: self.level,
            coords,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Whether `x * conj(x) = 1` exactly.
    pub fn unit_modulus_test(&self) -> bool {
        let one = CycloNumber::one(self.level).expect("cached level");
        self.mul(&self.conj()) == one
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = CycloNumber::one(self.level).expect("cached level");
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Float approximation; used only by the samplers, never on exact paths.
    pub fn approx(&self) -> Complex64 {
        let n = self.level as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / n;
            let v = c.to_f64().expect("rational fits f64");
            acc += Complex64::new(theta.cos(), theta.sin()) * v;
        }
        acc
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.level == other.level {
            return self.coords == other.coords;
        }
        match Self::unify(self, other) {
            Ok((a, b)) => a.coords == b.coords,
            Err(_) => false,
        }
    }
}

impl Eq for CycloNumber {}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNumber[{}]({})", self.level, self)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycloNumber {
    /// Canonical textual form: a rational `a/b`, a Gaussian pair
    /// `(a/b, c/d)`, or a parenthesized sum of `q*zeta(N)^k` terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", fmt_rational(&r));
        }
        if let Some((a, b)) = self.as_gaussian() {
            return write!(f, "({}, {})", fmt_rational(&a), fmt_rational(&b));
        }
        let mut parts = Vec::new();
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let zeta = if k == 0 {
                String::new()
            } else if k == 1 {
                format!("zeta({})", self.level)
            } else {
                format!("zeta({})^{}", self.level, k)
            };
            let part = if k == 0 {
                fmt_rational(c)
            } else if c.is_one() {
                zeta
            } else if (-c).is_one() {
                format!("-{}", zeta)
            } else {
                format!("{}*{}", fmt_rational(c), zeta)
            };
            parts.push(part);
        }
        let joined = parts
            .iter()
            .enumerate()
            .map(|(idx, p)| {
                if idx == 0 {
                    p.clone()
                } else if let Some(stripped) = p.strip_prefix('-') {
                    format!(" - {}", stripped)
                } else {
                    format!(" + {}", p)
                }
            })
            .collect::<String>();
        write!(f, "({})", joined)
    }
}

// ---------------------------------------------------------------------------
// polynomial helpers over Q (private)
// ---------------------------------------------------------------------------

fn poly_deg(p: &[BigRational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn poly_trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

fn poly_sub_scaled(a: &[BigRational], b: &[BigRational], c: &BigRational, shift: usize) -> Vec<BigRational> {
    let mut out = a.to_vec();
    if out.len() < b.len() + shift {
        out.resize(b.len() + shift, BigRational::zero());
    }
    for (j, bc) in b.iter().enumerate() {
        if !bc.is_zero() {
            out[j + shift] -= c * bc;
        }
    }
    poly_trim(out)
}

/// Returns `(g, u)` with `u*a = g (mod m)` and `g = gcd(a, m)`.
fn poly_xgcd(a: &[BigRational], m: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = poly_trim(m.to_vec());
    let mut r1 = poly_trim(a.to_vec());
    let mut u0: Vec<BigRational> = vec![BigRational::zero()];
    let mut u1: Vec<BigRational> = vec![BigRational::one()];
    while poly_deg(&r1).is_some() {
        // divide r0 by r1
        let d1 = poly_deg(&r1).unwrap();
        let lc1 = r1[d1].clone();
        let mut rem = r0.clone();
        let mut q: Vec<BigRational> = vec![BigRational::zero(); rem.len().max(1)];
        while let Some(d0) = poly_deg(&rem) {
            if d0 < d1 {
                break;
            }
            let c = &rem[d0] / &lc1;
            q[d0 - d1] = c.clone();
            rem = poly_sub_scaled(&rem, &r1, &c, d0 - d1);
        }
        q = poly_trim(q);
        // u_next = u0 - q*u1
        let mut qu = vec![BigRational::zero(); q.len() + u1.len()];
        for (i, qc) in q.iter().enumerate() {
            if qc.is_zero() {
                continue;
            }
            for (j, uc) in u1.iter().enumerate() {
                qu[i + j] += qc * uc;
            }
        }
        let mut unext = u0.clone();
        if unext.len() < qu.len() {
            unext.resize(qu.len(), BigRational::zero());
        }
        for (j, c) in qu.iter().enumerate() {
            unext[j] -= c;
        }
        r0 = r1;
        r1 = rem;
        u0 = u1;
        u1 = poly_trim(unext);
    }
    (r0, u0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn gaussian_defining_relation() {
        let i = CycloNumber::make_gaussian(r(0, 1), r(1, 1), 4).unwrap();
        let m1 = CycloNumber::from_int(-1, 4).unwrap();
        assert_eq!(i.mul(&i), m1);
    }

    #[test]
    fn gaussian_norm_two() {
        let a = CycloNumber::make_gaussian(r(1, 1), r(1, 1), 4).unwrap();
        let b = CycloNumber::make_gaussian(r(1, 1), r(-1, 1), 4).unwrap();
        assert_eq!(a.mul(&b), CycloNumber::from_int(2, 4).unwrap());
    }

    #[test]
    fn rational_embedding_at_level_12() {
        let x = CycloNumber::make_gaussian(r(2, 3), r(0, 1), 12).unwrap();
        assert_eq!(x.as_rational(), Some(r(2, 3)));
    }

    #[test]
    fn make_gaussian_rejects_bad_level() {
        assert!(matches!(
            CycloNumber::make_gaussian(r(1, 1), r(0, 1), 6),
            Err(FieldError::LevelNotMultipleOf4(6))
        ));
    }

    #[test]
    fn level_guard() {
        assert!(matches!(
            CycloNumber::zero(2048),
            Err(FieldError::LevelTooLarge(2048))
        ));
    }

    #[test]
    fn root_of_unity_examples() {
        let i4 = CycloNumber::root_of_unity(1, 4, 4).unwrap();
        assert_eq!(i4, CycloNumber::i(4).unwrap());

        let z3 = CycloNumber::root_of_unity(1, 3, 12).unwrap();
        let sum = z3.mul(&z3).add(&z3).add(&CycloNumber::one(12).unwrap());
        assert!(sum.is_zero(), "zeta_3 minimal polynomial");

        let even = CycloNumber::root_of_unity(2, 2, 4).unwrap();
        assert_eq!(even, CycloNumber::one(4).unwrap());
    }

    #[test]
    fn root_of_unity_rejects_nondivisor() {
        assert!(CycloNumber::root_of_unity(1, 3, 4).is_err());
    }

    #[test]
    fn inverse_of_one_plus_i() {
        let x = CycloNumber::make_gaussian(r(1, 1), r(1, 1), 4).unwrap();
        let expect = CycloNumber::make_gaussian(r(1, 2), r(-1, 2), 4).unwrap();
        assert_eq!(x.inv().unwrap(), expect);
    }

    #[test]
    fn inverse_of_zeta3() {
        let z3 = CycloNumber::root_of_unity(1, 3, 12).unwrap();
        let z3sq = CycloNumber::root_of_unity(2, 3, 12).unwrap();
        assert_eq!(z3.inv().unwrap(), z3sq);
    }

    #[test]
    fn inverse_of_one_plus_zeta5() {
        let z5 = CycloNumber::root_of_unity(1, 5, 20).unwrap();
        let x = z5.add(&CycloNumber::one(20).unwrap());
        let inv = x.inv().unwrap();
        assert_eq!(x.mul(&inv), CycloNumber::one(20).unwrap());
    }

    #[test]
    fn division_by_zero() {
        let z = CycloNumber::zero(4).unwrap();
        assert!(matches!(z.inv(), Err(FieldError::DivisionByZero)));
    }

    #[test]
    fn unit_modulus_examples() {
        assert!(CycloNumber::i(4).unwrap().unit_modulus_test());
        assert!(!CycloNumber::from_int(2, 4).unwrap().unit_modulus_test());
        let pyth = CycloNumber::make_gaussian(r(3, 5), r(4, 5), 4).unwrap();
        assert!(pyth.unit_modulus_test());
    }

    #[test]
    fn lift_preserves_relations() {
        let i = CycloNumber::i(4).unwrap();
        let i12 = i.lift_level(12).unwrap();
        assert_eq!(i12.mul(&i12), CycloNumber::from_int(-1, 12).unwrap());

        let z3 = CycloNumber::root_of_unity(1, 3, 12).unwrap();
        let z3l = z3.lift_level(24).unwrap();
        let sum = z3l.mul(&z3l).add(&z3l).add(&CycloNumber::one(24).unwrap());
        assert!(sum.is_zero());
    }

    #[test]
    fn lift_commutes_with_inverse() {
        let z5 = CycloNumber::root_of_unity(1, 5, 20).unwrap();
        let x = z5.add(&CycloNumber::one(20).unwrap());
        let a = x.inv().unwrap().lift_level(60).unwrap();
        let b = x.lift_level(60).unwrap().inv().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn lift_rejects_nondivisible() {
        let i = CycloNumber::i(4).unwrap();
        assert!(i.lift_level(6).is_err());
    }

    #[test]
    fn conj_maps_zeta_to_inverse_power() {
        let z = CycloNumber::root_of_unity(1, 12, 12).unwrap();
        let zc = z.conj();
        let z11 = CycloNumber::root_of_unity(11, 12, 12).unwrap();
        assert_eq!(zc, z11);
    }

    #[test]
    fn approx_of_i() {
        let i = CycloNumber::i(4).unwrap();
        let v = i.approx();
        assert!((v.re).abs() < 1e-15 && (v.im - 1.0).abs() < 1e-15);
    }
}

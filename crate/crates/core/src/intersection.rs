//! Exact local intersection multiplicity of two plane curve germs at the
//! origin, by Fulton's axiomatic recursion, with gcd-based common-branch
//! detection. Serves as the independent oracle for the multiplicity `mu`.

use num_integer::Integer;
use thiserror::Error;

use crate::field::CycloNumber;
use crate::order::OrderValue;
use crate::series2::Series2;

/// Degree guard: the oracle's role is verification on desk-scale germs.
pub const MAX_TOTAL_DEGREE: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntersectionError {
    #[error("local intersection needs exact polynomials, not truncated series")]
    TruncatedInput,
    #[error("total degree {0} exceeds the guard {MAX_TOTAL_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("component does not vanish at the origin")]
    NonVanishing,
}

type Result<T> = std::result::Result<T, IntersectionError>;

// ---------------------------------------------------------------------------
// internal representation: polynomials in y with coefficients in Q(zeta)[x]
// ---------------------------------------------------------------------------

type XPoly = Vec<CycloNumber>; // ascending powers of x

#[derive(Clone)]
struct YPoly {
    level: u32,
    /// `coeffs[b]` is the x-polynomial multiplying `y^b`.
    coeffs: Vec<XPoly>,
}

fn xp_trim(p: &mut XPoly) {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn xp_is_zero(p: &XPoly) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn xp_deg(p: &XPoly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn xp_mul(a: &XPoly, b: &XPoly) -> XPoly {
    if xp_is_zero(a) || xp_is_zero(b) {
        return vec![];
    }
    let level = a[0].level();
    let zero = CycloNumber::zero(level).expect("level");
    let mut out = vec![zero; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    xp_trim(&mut out);
    out
}

fn xp_sub_scaled(a: &XPoly, b: &XPoly, c: &CycloNumber, shift: usize) -> XPoly {
    let level = c.level();
    let zero = CycloNumber::zero(level).expect("level");
    let mut out = a.clone();
    if out.len() < b.len() + shift {
        out.resize(b.len() + shift, zero);
    }
    for (j, bc) in b.iter().enumerate() {
        if !bc.is_zero() {
            out[j + shift] = out[j + shift].sub(&c.mul(bc));
        }
    }
    xp_trim(&mut out);
    out
}

/// Euclidean gcd in Q(zeta)[x], normalized monic.
fn xp_gcd(a: &XPoly, b: &XPoly) -> XPoly {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    xp_trim(&mut r0);
    xp_trim(&mut r1);
    while !xp_is_zero(&r1) {
        let d1 = xp_deg(&r1).unwrap();
        let lc1 = r1[d1].inv().expect("nonzero leading coefficient");
        while let Some(d0) = xp_deg(&r0) {
            if d0 < d1 {
                break;
            }
            let c = r0[d0].mul(&lc1);
            r0 = xp_sub_scaled(&r0, &r1, &c, d0 - d1);
        }
        std::mem::swap(&mut r0, &mut r1);
    }
    if let Some(d) = xp_deg(&r0) {
        let lcinv = r0[d].inv().expect("nonzero");
        r0 = r0.iter().map(|c| c.mul(&lcinv)).collect();
        xp_trim(&mut r0);
    }
    r0
}

/// Exact division in Q(zeta)[x]; panics if not exact (callers guarantee it).
fn xp_div_exact(a: &XPoly, b: &XPoly) -> XPoly {
    let db = xp_deg(b).expect("division by zero x-polynomial");
    let lcinv = b[db].inv().expect("nonzero");
    let mut rem = a.clone();
    xp_trim(&mut rem);
    let level = b[db].level();
    let zero = CycloNumber::zero(level).expect("level");
    let da = match xp_deg(&rem) {
        Some(d) => d,
        None => return vec![],
    };
    assert!(da >= db, "inexact x-division");
    let mut quot = vec![zero; da - db + 1];
    while let Some(d0) = xp_deg(&rem) {
        if d0 < db {
            break;
        }
        let c = rem[d0].mul(&lcinv);
        quot[d0 - db] = c.clone();
        rem = xp_sub_scaled(&rem, b, &c, d0 - db);
    }
    assert!(xp_is_zero(&rem), "inexact x-division");
    quot
}

impl YPoly {
    fn zero(level: u32) -> Self {
        YPoly {
            level,
            coeffs: vec![],
        }
    }

    fn from_series2(s: &Series2) -> Result<Self> {
        if !s.is_exact() {
            return Err(IntersectionError::TruncatedInput);
        }
        if s.total_degree().unwrap_or(0) > MAX_TOTAL_DEGREE {
            return Err(IntersectionError::DegreeTooLarge(s.total_degree().unwrap()));
        }
        let level = s.level();
        let zero = CycloNumber::zero(level).expect("level");
        let ydeg = s.terms().map(|(_, b, _)| b).max();
        let mut coeffs = match ydeg {
            Some(d) => vec![Vec::new(); d + 1],
            None => vec![],
        };
        for (a, b, c) in s.terms() {
            if coeffs[b].len() <= a {
                coeffs[b].resize(a + 1, zero.clone());
            }
            coeffs[b][a] = c.clone();
        }
        let mut p = YPoly { level, coeffs };
        p.trim();
        Ok(p)
    }

    fn to_series2(&self) -> Series2 {
        let mut terms = Vec::new();
        let mut deg = 0usize;
        for (b, row) in self.coeffs.iter().enumerate() {
            for (a, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    terms.push((a, b, c.clone()));
                    deg = deg.max(a + b);
                }
            }
        }
        Series2::from_terms(self.level, deg, &terms, true)
    }

    fn trim(&mut self) {
        for row in &mut self.coeffs {
            xp_trim(row);
        }
        while self.coeffs.last().map(xp_is_zero).unwrap_or(false) {
            self.coeffs.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(xp_is_zero)
    }

    fn ydeg(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !xp_is_zero(c))
    }

    fn at_level(&self, level: u32) -> Self {
        YPoly {
            level,
            coeffs: self
                .coeffs
                .iter()
                .map(|row| row.iter().map(|c| c.lift_level(level).expect("lift")).collect())
                .collect(),
        }
    }

    fn value_at_origin(&self) -> CycloNumber {
        self.coeffs
            .first()
            .and_then(|row| row.first().cloned())
            .unwrap_or_else(|| CycloNumber::zero(self.level).expect("level"))
    }

    /// Restriction to `x = 0`, as the dense coefficient list of a poly in y.
    fn restrict_x0(&self) -> Vec<CycloNumber> {
        let zero = CycloNumber::zero(self.level).expect("level");
        self.coeffs
            .iter()
            .map(|row| row.first().cloned().unwrap_or_else(|| zero.clone()))
            .collect()
    }

    /// Largest a with `x^a | self`; None for the zero polynomial.
    fn x_multiplicity(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .filter(|row| !xp_is_zero(row))
            .map(|row| row.iter().position(|c| !c.is_zero()).unwrap())
            .min()
    }

    fn divide_x_power(&self, a: usize) -> Self {
        YPoly {
            level: self.level,
            coeffs: self
                .coeffs
                .iter()
                .map(|row| if row.len() > a { row[a..].to_vec() } else { vec![] })
                .collect(),
        }
    }

    /// `self - c * y^k * other`.
    fn sub_scaled_ypow(&self, other: &Self, c: &CycloNumber, k: usize) -> Self {
        let mut out = self.clone();
        let needed = other.coeffs.len() + k;
        if out.coeffs.len() < needed {
            out.coeffs.resize(needed, Vec::new());
        }
        for (b, row) in other.coeffs.iter().enumerate() {
            if xp_is_zero(row) {
                continue;
            }
            let scaled: XPoly = row.iter().map(|x| x.mul(c)).collect();
            let target = &mut out.coeffs[b + k];
            let zero = CycloNumber::zero(out.level).expect("level");
            if target.len() < scaled.len() {
                target.resize(scaled.len(), zero);
            }
            for (j, s) in scaled.iter().enumerate() {
                target[j] = target[j].sub(s);
            }
        }
        out.trim();
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = YPoly::zero(self.level);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        out.coeffs = vec![Vec::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (b1, r1) in self.coeffs.iter().enumerate() {
            if xp_is_zero(r1) {
                continue;
            }
            for (b2, r2) in other.coeffs.iter().enumerate() {
                if xp_is_zero(r2) {
                    continue;
                }
                let prod = xp_mul(r1, r2);
                let target = &mut out.coeffs[b1 + b2];
                let zero = CycloNumber::zero(self.level).expect("level");
                if target.len() < prod.len() {
                    target.resize(prod.len(), zero);
                }
                for (j, c) in prod.iter().enumerate() {
                    target[j] = target[j].add(c);
                }
            }
        }
        out.trim();
        out
    }

    /// Content in x: monic gcd of the y-coefficients.
    fn content(&self) -> XPoly {
        let mut g: XPoly = vec![];
        for row in &self.coeffs {
            if !xp_is_zero(row) {
                g = if xp_is_zero(&g) { row.clone() } else { xp_gcd(&g, row) };
                if xp_deg(&g) == Some(0) {
                    break;
                }
            }
        }
        g
    }

    fn divide_content(&self, content: &XPoly) -> Self {
        YPoly {
            level: self.level,
            coeffs: self
                .coeffs
                .iter()
                .map(|row| {
                    if xp_is_zero(row) {
                        vec![]
                    } else {
                        xp_div_exact(row, content)
                    }
                })
                .collect(),
        }
    }

    /// Exact long division in (Q(zeta)[x])[y]; valid when `other | self`.
    fn div_exact(&self, other: &Self) -> Self {
        let db = other.ydeg().expect("division by zero polynomial");
        let lead = &other.coeffs[db];
        let mut rem = self.clone();
        let mut quot = YPoly::zero(self.level);
        let da = match rem.ydeg() {
            Some(d) => d,
            None => return quot,
        };
        assert!(da >= db, "inexact y-division");
        quot.coeffs = vec![Vec::new(); da - db + 1];
        while let Some(d0) = rem.ydeg() {
            if d0 < db {
                break;
            }
            let q = xp_div_exact(&rem.coeffs[d0], lead);
            // rem -= q * y^{d0-db} * other
            let mut qterm = YPoly::zero(self.level);
            qterm.coeffs = vec![Vec::new(); d0 - db + 1];
            qterm.coeffs[d0 - db] = q.clone();
            rem = {
                let prod = qterm.mul(other);
                let mut r = rem.clone();
                let needed = prod.coeffs.len();
                if r.coeffs.len() < needed {
                    r.coeffs.resize(needed, Vec::new());
                }
                for (b, row) in prod.coeffs.iter().enumerate() {
                    let zero = CycloNumber::zero(r.level).expect("level");
                    let target = &mut r.coeffs[b];
                    if target.len() < row.len() {
                        target.resize(row.len(), zero);
                    }
                    for (j, c) in row.iter().enumerate() {
                        target[j] = target[j].sub(c);
                    }
                }
                r.trim();
                r
            };
            quot.coeffs[d0 - db] = q;
        }
        assert!(rem.is_zero(), "inexact y-division");
        quot.trim();
        quot
    }

    /// Pseudo-remainder of `self` by `other` in (Q(zeta)[x])[y], with the
    /// content stripped after each pass (primitive PRS).
    fn prem_primitive(&self, other: &Self) -> Self {
        let db = other.ydeg().expect("zero divisor");
        let lead = other.coeffs[db].clone();
        let mut rem = self.clone();
        while let Some(d0) = rem.ydeg() {
            if d0 < db {
                break;
            }
            // rem <- lead*rem - rem_lead * y^{d0-db} * other
            let rem_lead = rem.coeffs[d0].clone();
            let mut scaled = YPoly::zero(self.level);
            scaled.coeffs = rem
                .coeffs
                .iter()
                .map(|row| if xp_is_zero(row) { vec![] } else { xp_mul(row, &lead) })
                .collect();
            let mut shift = YPoly::zero(self.level);
            shift.coeffs = vec![Vec::new(); d0 - db + 1];
            shift.coeffs[d0 - db] = rem_lead;
            let sub = shift.mul(other);
            let needed = sub.coeffs.len().max(scaled.coeffs.len());
            scaled.coeffs.resize(needed, Vec::new());
            for (b, row) in sub.coeffs.iter().enumerate() {
                let zero = CycloNumber::zero(self.level).expect("level");
                let target = &mut scaled.coeffs[b];
                if target.len() < row.len() {
                    target.resize(row.len(), zero);
                }
                for (j, c) in row.iter().enumerate() {
                    target[j] = target[j].sub(c);
                }
            }
            scaled.trim();
            rem = scaled;
            debug_assert!(rem.ydeg().map(|d| d < d0).unwrap_or(true));
        }
        // strip content to keep coefficient growth down
        if !rem.is_zero() {
            let content = rem.content();
            if xp_deg(&content).map(|d| d > 0).unwrap_or(false) {
                rem = rem.divide_content(&content);
            }
        }
        rem
    }
}

fn unify(a: &Series2, b: &Series2) -> (YPoly, YPoly) {
    let level = a.level().lcm(&b.level());
    let pa = YPoly::from_series2(&a.at_level(level)).expect("checked exact");
    let pb = YPoly::from_series2(&b.at_level(level)).expect("checked exact");
    (pa.at_level(level), pb.at_level(level))
}

// ---------------------------------------------------------------------------
// gcd
// ---------------------------------------------------------------------------

/// A gcd of two exact bivariate polynomials, up to a unit factor, via
/// primitive pseudo-remainder elimination in y with content handling.
pub fn bivariate_gcd(f: &Series2, g: &Series2) -> Result<Series2> {
    if !f.is_exact() || !g.is_exact() {
        return Err(IntersectionError::TruncatedInput);
    }
    let (mut a, mut b) = unify(f, g);
    if a.is_zero() {
        return Ok(b.to_series2());
    }
    if b.is_zero() {
        return Ok(a.to_series2());
    }
    // pure x-polynomials reduce to the univariate gcd of contents
    let ca = a.content();
    let cb = b.content();
    let content_gcd = xp_gcd(&ca, &cb);
    a = a.divide_content(&ca);
    b = b.divide_content(&cb);
    // primitive PRS on the y-primitive parts
    if a.ydeg().unwrap_or(0) < b.ydeg().unwrap_or(0) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() && b.ydeg().unwrap_or(0) > 0 {
        let r = a.prem_primitive(&b);
        a = b;
        b = r;
    }
    let mut result = if b.is_zero() {
        a
    } else {
        // nonzero y-degree-0 remainder: primitive parts are coprime in y
        let content = b.content();
        let mut unit = YPoly::zero(b.level);
        unit.coeffs = vec![content];
        let trivial = xp_deg(&unit.coeffs[0]) == Some(0) || true;
        debug_assert!(trivial);
        YPoly {
            level: b.level,
            coeffs: vec![vec![CycloNumber::one(b.level).expect("level")]],
        }
    };
    // multiply back the content gcd
    if !xp_is_zero(&content_gcd) {
        let mut cg = YPoly::zero(result.level);
        cg.coeffs = vec![content_gcd];
        result = result.mul(&cg);
    }
    // normalize: make the leading coefficient (in lex y, then x) one
    if let Some(db) = result.ydeg() {
        let da = xp_deg(&result.coeffs[db]).unwrap();
        let lcinv = result.coeffs[db][da].inv().expect("nonzero");
        result.coeffs = result
            .coeffs
            .iter()
            .map(|row| row.iter().map(|c| c.mul(&lcinv)).collect())
            .collect();
    }
    Ok(result.to_series2())
}

// ---------------------------------------------------------------------------
// local intersection number
// ---------------------------------------------------------------------------

/// Local intersection multiplicity of F and G at the origin. `Exact(k)` is
/// the codimension of the local quotient ring when the germs share no
/// branch through the origin; `Infinite` when a common branch exists.
/// Never returns `AtLeast`.
pub fn local_intersection(f: &Series2, g: &Series2) -> Result<OrderValue> {
    if !f.is_exact() || !g.is_exact() {
        return Err(IntersectionError::TruncatedInput);
    }
    for s in [f, g] {
        if let Some(d) = s.total_degree() {
            if d > MAX_TOTAL_DEGREE {
                return Err(IntersectionError::DegreeTooLarge(d));
            }
        }
    }
    let (mut a, mut b) = unify(f, g);
    // zero polynomials share every branch
    if a.is_zero() || b.is_zero() {
        let other = if a.is_zero() { &b } else { &a };
        return Ok(if other.value_at_origin().is_zero() {
            OrderValue::Infinite
        } else {
            OrderValue::Exact(0)
        });
    }
    // common-branch detection runs first
    let d = bivariate_gcd(&a.to_series2(), &b.to_series2())?;
    if d.total_degree().unwrap_or(0) >= 1 {
        if d.constant_term().is_zero() {
            return Ok(OrderValue::Infinite);
        }
        // a gcd not vanishing at the origin does not affect the local number
        let dp = YPoly::from_series2(&d)?.at_level(a.level);
        a = a.div_exact(&dp);
        b = b.div_exact(&dp);
    }
    Ok(OrderValue::Exact(fulton(a, b)))
}

/// Fulton's recursion for coprime germs; finite by construction.
fn fulton(mut f: YPoly, mut g: YPoly) -> usize {
    let mut total = 0usize;
    let mut steps = 0usize;
    loop {
        steps += 1;
        assert!(steps < 200_000, "intersection recursion failed to terminate");
        if !f.value_at_origin().is_zero() || !g.value_at_origin().is_zero() {
            return total;
        }
        let rf = f.restrict_x0();
        let rg = g.restrict_x0();
        let f0_zero = rf.iter().all(|c| c.is_zero());
        let g0_zero = rg.iter().all(|c| c.is_zero());
        if f0_zero {
            // x divides f: split off the x^a factor
            let a = f.x_multiplicity().expect("nonzero polynomial");
            debug_assert!(a >= 1);
            let h = f.divide_x_power(a);
            // I(x, g) = ord_y g(0, y); finite since x does not divide g
            let ord = rg
                .iter()
                .position(|c| !c.is_zero())
                .expect("coprime germs: x does not divide g");
            total += a * ord;
            f = h;
            continue;
        }
        if g0_zero {
            let a = g.x_multiplicity().expect("nonzero polynomial");
            let h = g.divide_x_power(a);
            let ord = rf
                .iter()
                .position(|c| !c.is_zero())
                .expect("coprime germs: x does not divide f");
            total += a * ord;
            g = h;
            continue;
        }
        // both restrictions nonzero: reduce the higher restricted degree
        let df = rf.iter().rposition(|c| !c.is_zero()).unwrap();
        let dg = rg.iter().rposition(|c| !c.is_zero()).unwrap();
        if dg < df {
            std::mem::swap(&mut f, &mut g);
            continue;
        }
        // the pair (deg of g's restriction, deg of f's restriction)
        // decreases lexicographically at every reduction
        let c = rg[dg].mul(&rf[df].inv().expect("nonzero"));
        let g_new = g.sub_scaled_ypow(&f, &c, dg - df);
        let rg_new = g_new.restrict_x0();
        let dg_new = rg_new.iter().rposition(|c| !c.is_zero());
        assert!(
            dg_new.map(|d| d < dg).unwrap_or(true),
            "restricted degree must strictly decrease"
        );
        g = g_new;
    }
}

/// Multiplicity of a complexified germ: the local intersection of its two
/// component polynomials, both required to vanish at the origin.
pub fn mu_complexified(f: &Series2, g: &Series2) -> Result<OrderValue> {
    if !f.constant_term().is_zero() || !g.constant_term().is_zero() {
        return Err(IntersectionError::NonVanishing);
    }
    local_intersection(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series1::Series1;
    use crate::series2::Axis;
    use crate::text::parse_series2;

    fn p2(src: &str) -> Series2 {
        parse_series2(src, 32).unwrap()
    }

    #[test]
    fn transverse_lines() {
        assert_eq!(
            local_intersection(&p2("x"), &p2("y")).unwrap(),
            OrderValue::Exact(1)
        );
    }

    #[test]
    fn puiseux_pair_example_mu_10() {
        // Appendix-style fixture: I(x^2+y^2, x^5 + x^3 y^2 + x y^4) = 10
        let f = p2("x^2 + y^2");
        let g = p2("x^5 + x^3*y^2 + x*y^4");
        assert_eq!(local_intersection(&f, &g).unwrap(), OrderValue::Exact(10));
    }

    #[test]
    fn common_branch_is_infinite() {
        // x^5 + 2x^3y^2 + xy^4 = x (x^2+y^2)^2 shares x^2+y^2
        let f = p2("x^2 + y^2");
        let g = p2("x^5 + 2*x^3*y^2 + x*y^4");
        assert_eq!(local_intersection(&f, &g).unwrap(), OrderValue::Infinite);
    }

    #[test]
    fn quartic_contact() {
        assert_eq!(
            local_intersection(&p2("x"), &p2("x^2*y^2 + y^4")).unwrap(),
            OrderValue::Exact(4)
        );
    }

    #[test]
    fn rejects_truncated_inputs() {
        let f = Series2::zero(4, 8, false);
        assert!(matches!(
            local_intersection(&f, &p2("x")),
            Err(IntersectionError::TruncatedInput)
        ));
    }

    #[test]
    fn gcd_examples() {
        // gcd(x*y, x*(x+y)) is x up to a unit
        let g = bivariate_gcd(&p2("x*y"), &p2("x^2 + x*y")).unwrap();
        assert_eq!(g, p2("x"));

        let g = bivariate_gcd(&p2("x^2 + y^2"), &p2("x^5 + 2*x^3*y^2 + x*y^4")).unwrap();
        // normalized so the lex-leading coefficient is 1
        assert_eq!(g, p2("x^2 + y^2"));

        let g = bivariate_gcd(&p2("x"), &p2("y")).unwrap();
        assert_eq!(g.total_degree(), Some(0));
    }

    #[test]
    fn mu_complexified_generic_case() {
        // f(z) = z + z^2 - conj(z): pair (p(u) - v, pbar(v) - u), mu = 2
        let one = CycloNumber::one(4).unwrap();
        let p = Series1::from_terms(4, 8, &[(1, one.clone()), (2, one)], true);
        let pu = Series2::embed(&p, Axis::X);
        let pbv = Series2::embed(&p.conj_series(), Axis::Y);
        let f = pu.sub(&Series2::var(Axis::Y, 4, 8));
        let g = pbv.sub(&Series2::var(Axis::X, 4, 8));
        assert_eq!(mu_complexified(&f, &g).unwrap(), OrderValue::Exact(2));
    }

    #[test]
    fn mu_complexified_collapse_and_cusp() {
        assert_eq!(
            mu_complexified(&p2("x"), &p2("x*y")).unwrap(),
            OrderValue::Infinite
        );
        assert_eq!(
            mu_complexified(&p2("x"), &p2("x*y + y^3")).unwrap(),
            OrderValue::Exact(3)
        );
    }

    #[test]
    fn rejects_nonvanishing_component() {
        assert!(matches!(
            mu_complexified(&p2("1 + x"), &p2("y")),
            Err(IntersectionError::NonVanishing)
        ));
    }
}

//! Harmonic germs `f = p + conj(q)` at a critical point: the smooth
//! criterion, the invariants m, mu, j and the order-pair, the topological
//! model classifier, germ constructors with prescribed invariants, and the
//! normal-form bookkeeping.

pub mod sampler;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::analytic::AnalyticGerm;
use crate::field::CycloNumber;
use crate::intersection::{self, IntersectionError};
use crate::order::OrderValue;
use crate::report::{InvariantReport, OrderPair, Shape, TopologicalModel};
use crate::series1::Series1;
use crate::series2::{Axis, Series2};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GermError {
    #[error("p and q must vanish at the base point (recenter first)")]
    NonVanishing,
    #[error("constant germ: p and q are both identically zero")]
    ConstantGerm,
    #[error(transparent)]
    Intersection(#[from] IntersectionError),
}

/// Typed reasons a germ fails the smooth-critical-point criterion.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Rejection {
    #[error("order mismatch: ord p = {p}, ord q = {q}")]
    OrderMismatch { p: OrderValue, q: OrderValue },
    #[error("|psi(0)| != 1: the base point is not a smooth critical point")]
    NonUnitModulus,
    #[error("psi'(0) = 0: critical set is a star of {arcs} arcs")]
    StarOfArcs { arcs: usize },
    #[error("anti-holomorphic part absent (holomorphic-like germ)")]
    HolomorphicLike,
    #[error("jacobian identically zero (non-light)")]
    JacobianZero,
    #[error("truncation too small to decide: {0}")]
    Indeterminate(String),
}

type Result<T> = std::result::Result<T, GermError>;

// ---------------------------------------------------------------------------
// germ type
// ---------------------------------------------------------------------------

/// A harmonic germ `f = p + conj(q)` recentered so `f(0) = 0`.
///
/// Germs of the normal-form family `p(z)^m - conj(z)^m` remember their
/// `(p, m)` data, which routes the multiplicity through the root-of-unity
/// order sum.
#[derive(Clone, Debug)]
pub struct HarmonicGerm {
    p: Series1,
    q: Series1,
    pm: Option<(Series1, u32)>,
}

impl HarmonicGerm {
    pub fn new(p: Series1, q: Series1) -> Result<Self> {
        if !p.coeff(0).is_zero() || !q.coeff(0).is_zero() {
            return Err(GermError::NonVanishing);
        }
        if p.is_zero_poly() && q.is_zero_poly() {
            return Err(GermError::ConstantGerm);
        }
        Ok(HarmonicGerm { p, q, pm: None })
    }

    /// The family `g = p(z)^m - conj(z)^m`.
    pub fn pm_family(p: Series1, m: u32) -> Result<Self> {
        if !p.coeff(0).is_zero() {
            return Err(GermError::NonVanishing);
        }
        if p.is_zero_poly() {
            return Err(GermError::ConstantGerm);
        }
        let trunc = p.trunc();
        let level = p.level();
        let pw = p.pow(m);
        let mz = Series1::monomial(CycloNumber::one(level).expect("level"), m as usize, trunc).neg();
        Ok(HarmonicGerm {
            p: pw,
            q: mz,
            pm: Some((p, m)),
        })
    }

    pub fn parts(&self) -> (&Series1, &Series1) {
        (&self.p, &self.q)
    }

    pub fn pm_data(&self) -> Option<(&Series1, u32)> {
        self.pm.as_ref().map(|(p, m)| (p, *m))
    }

    pub fn is_exact(&self) -> bool {
        self.p.is_exact() && self.q.is_exact()
    }
}

// ---------------------------------------------------------------------------
// order and the smooth criterion
// ---------------------------------------------------------------------------

pub fn germ_order(g: &HarmonicGerm) -> OrderValue {
    g.p.ord().min(&g.q.ord())
}

/// Data certifying a smooth critical point at the base point.
#[derive(Clone, Debug)]
pub struct SmoothCriticalData {
    pub m: u32,
    /// lambda = psi(0), of unit modulus.
    pub lambda: CycloNumber,
    /// psi = p'/q' extended holomorphically (truncated series).
    pub psi: Series1,
}

/// The smooth-critical-point criterion: ord p = ord q = m < infinity,
/// psi = p'/q' extends holomorphically with |psi(0)| = 1 and psi'(0) != 0.
pub fn smooth_critical_test(g: &HarmonicGerm) -> std::result::Result<SmoothCriticalData, Rejection> {
    if g.q.is_zero_poly() || g.p.is_zero_poly() {
        return Err(Rejection::HolomorphicLike);
    }
    let op = g.p.ord();
    let oq = g.q.ord();
    let m = match (op, oq) {
        (OrderValue::Exact(a), OrderValue::Exact(b)) if a == b => a,
        (OrderValue::Exact(_), OrderValue::Exact(_)) => {
            return Err(Rejection::OrderMismatch { p: op, q: oq })
        }
        (OrderValue::Exact(a), OrderValue::AtLeast(b)) | (OrderValue::AtLeast(b), OrderValue::Exact(a))
            if b > a =>
        {
            return Err(Rejection::OrderMismatch { p: op, q: oq })
        }
        _ => {
            return Err(Rejection::Indeterminate(format!(
                "orders of p and q undecided (ord p = {op}, ord q = {oq})"
            )))
        }
    };
    if m == 0 {
        return Err(Rejection::OrderMismatch { p: op, q: oq });
    }
    let dp = g.p.derivative();
    let dq = g.q.derivative();
    let lambda = dp
        .coeff(m - 1)
        .mul(&dq.coeff(m - 1).inv().expect("leading coefficient nonzero"));
    if !lambda.unit_modulus_test() {
        return Err(Rejection::NonUnitModulus);
    }
    // J = |p'|^2 - |q'|^2 vanishes identically iff p' = lambda q'
    let resid = dp.sub(&dq.scale(&lambda));
    match resid.ord() {
        OrderValue::Infinite => return Err(Rejection::JacobianZero),
        OrderValue::AtLeast(_) => {
            return Err(Rejection::Indeterminate(
                "cannot distinguish J = 0 from a deep tangency within the truncation".into(),
            ))
        }
        OrderValue::Exact(_) => {}
    }
    let psi = dp
        .div_series(&dq, m - 1)
        .expect("orders checked: quotient extends holomorphically");
    // ord(psi - lambda) = 1, i.e. psi'(0) != 0, is the smoothness condition
    let dev = psi.sub(&Series1::from_terms(
        psi.level(),
        psi.trunc(),
        &[(0, lambda.clone())],
        true,
    ));
    match dev.ord() {
        OrderValue::Exact(1) => Ok(SmoothCriticalData {
            m: m as u32,
            lambda,
            psi,
        }),
        OrderValue::Exact(k) => Err(Rejection::StarOfArcs { arcs: k }),
        OrderValue::AtLeast(_) | OrderValue::Infinite => Err(Rejection::Indeterminate(
            "order of psi - psi(0) undecided within the truncation".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// multiplicity
// ---------------------------------------------------------------------------

/// Truncation ladder: most germs resolve at low degree; escalate only when
/// a summand stays undecided.
fn trunc_ladder(full: usize) -> Vec<usize> {
    let mut caps = vec![16usize, full];
    caps.retain(|&c| c <= full);
    caps.dedup();
    if caps.is_empty() {
        caps.push(full);
    }
    caps
}

/// The multiplicity of `g = p^m - conj(z)^m` as the root-of-unity order
/// sum over eta * pbar(xi * p(z)) - z.
///
/// Exact when every summand order is exact; `AtLeast` with the best
/// certified bound when truncation binds; `Infinite` only when an exactly
/// vanishing summand is certified as a common branch by the intersection
/// oracle on the complexified pair.
pub fn mu_order_sum(p: &Series1, m: u32) -> OrderValue {
    debug_assert!(p.coeff(0).is_zero(), "p must vanish at 0");
    debug_assert!(!p.is_zero_poly(), "p must not vanish identically");
    let level = p.level().lcm(&4u32.lcm(&m));
    for cap in trunc_ladder(p.trunc()) {
        let pc = p.retrunc(cap);
        let pbar = pc.conj_series();
        let ident = Series1::identity(level, cap);
        let mut total = OrderValue::Exact(0);
        let mut undecided = false;
        for kx in 0..m {
            let xi = CycloNumber::root_of_unity(kx as i64, m, level).expect("level");
            let inner = pc.scale(&xi);
            let composed = Series1::compose(&pbar, &inner).expect("p(0) = 0");
            for ke in 0..m {
                let eta = CycloNumber::root_of_unity(ke as i64, m, level).expect("level");
                let summand = composed.scale(&eta).sub(&ident);
                let ord = summand.ord();
                if let OrderValue::Infinite = ord {
                    // an exactly vanishing summand means a common branch;
                    // certify through the independent oracle
                    let oracle = mu_general_parts(p, m).expect("exact inputs");
                    assert_eq!(oracle, OrderValue::Infinite, "oracle must confirm the branch");
                    return OrderValue::Infinite;
                }
                if !ord.is_exact() {
                    undecided = true;
                }
                total = total.add(&ord);
            }
        }
        if !undecided || cap == p.trunc() {
            return total;
        }
    }
    unreachable!("ladder always ends at the full truncation")
}

/// The normal-form case split: mu = m^2 + m when (-b^2)^m != 1, and
/// mu(f_{-b^2}) + (m-1)(m+2) otherwise, for p = z + b z^2 + O(z^3) with
/// |b| = 1. Falls back to the order sum when the preconditions fail.
pub fn mu_relation_fastpath(p: &Series1, m: u32) -> OrderValue {
    let tangent = p.coeff(0).is_zero() && p.coeff(1) == CycloNumber::one(p.level()).expect("level");
    if !tangent {
        return mu_order_sum(p, m);
    }
    let b = p.coeff(2);
    if b.is_zero() || !b.unit_modulus_test() {
        return mu_order_sum(p, m);
    }
    let minus_b2 = b.mul(&b).neg();
    let test = minus_b2.pow(m);
    let m = m as usize;
    if test != CycloNumber::one(test.level()).expect("level") {
        return OrderValue::Exact(m * m + m);
    }
    // mu(f_xi) with xi = -b^2: the m = 1 order sum applied to xi * p
    let xi = minus_b2;
    let scaled = p.scale(&xi);
    let inner = mu_order_sum(&scaled, 1);
    let shift = (m - 1) * (m + 2);
    match inner {
        OrderValue::Exact(v) => OrderValue::Exact(v + shift),
        OrderValue::AtLeast(b) => OrderValue::AtLeast(b + shift),
        OrderValue::Infinite => OrderValue::Infinite,
    }
}

/// Complexified pair of `f = p + conj(q)`:
/// `(p(u) + qbar(v), q(u) + pbar(v))`.
pub fn complexify(g: &HarmonicGerm) -> (Series2, Series2) {
    let f = Series2::embed(&g.p, Axis::X).add(&Series2::embed(&g.q.conj_series(), Axis::Y));
    let fbar = Series2::embed(&g.q, Axis::X).add(&Series2::embed(&g.p.conj_series(), Axis::Y));
    (f, fbar)
}

fn mu_general_parts(p: &Series1, m: u32) -> Result<OrderValue> {
    let g = HarmonicGerm::pm_family(p.clone(), m)?;
    mu_general(&g)
}

/// Multiplicity by the local intersection oracle on the complexified pair.
/// Requires exact polynomial parts.
pub fn mu_general(g: &HarmonicGerm) -> Result<OrderValue> {
    let (f, fbar) = complexify(g);
    Ok(intersection::mu_complexified(&f, &fbar)?)
}

/// Multiplicity dispatch: order sum (with the normal-form shortcut) for
/// the pm family, the intersection oracle for exact general germs.
pub fn multiplicity(g: &HarmonicGerm) -> Result<(OrderValue, &'static str)> {
    if let Some((p, m)) = g.pm_data() {
        return Ok((mu_relation_fastpath(p, m), "order-sum"));
    }
    if g.is_exact() {
        return Ok((mu_general(g)?, "intersection"));
    }
    Err(GermError::Intersection(IntersectionError::TruncatedInput))
}

// ---------------------------------------------------------------------------
// j and the full report
// ---------------------------------------------------------------------------

/// Compute the full invariant report: m, mu, j = mu - m^2, the order-pair,
/// and the topological model. For m = 1 germs with exact parts, j is
/// independently recomputed through the analytic determinant recursion and
/// the two values are asserted equal.
pub fn j_invariant(g: &HarmonicGerm) -> std::result::Result<InvariantReport, Rejection> {
    let data = smooth_critical_test(g)?;
    let m = data.m as usize;
    let (mu, route) = multiplicity(g)
        .map_err(|e| Rejection::Indeterminate(format!("multiplicity unavailable: {e}")))?;
    let j = match mu {
        OrderValue::Exact(v) => {
            assert!(v >= m * m + m, "mu = {v} below m^2 + m for m = {m}");
            OrderValue::Exact(v - m * m)
        }
        OrderValue::AtLeast(b) => OrderValue::AtLeast((b.saturating_sub(m * m)).max(m)),
        OrderValue::Infinite => OrderValue::Infinite,
    };
    let mut diagnostics = vec![format!("mu computed via {route}")];
    if m == 1 && g.is_exact() {
        if let OrderValue::Exact(jv) = j {
            let analytic = to_analytic(g, jv + 3);
            let trace = analytic
                .j_via_mn(1)
                .expect("m = 1 harmonic germs are regular critical points");
            assert_eq!(
                trace.j,
                OrderValue::Exact(jv),
                "determinant recursion disagrees with mu - 1"
            );
            diagnostics.push(format!("analytic recursion confirms j = {jv}"));
        }
    }
    let model = match j {
        OrderValue::Exact(jv) => Some(
            classify_model(data.m, jv)
                .expect("j >= m holds for smooth critical germs"),
        ),
        _ => None,
    };
    Ok(InvariantReport {
        m: data.m,
        mu,
        j,
        order_pair: OrderPair::from_j(j),
        model,
        diagnostics,
    })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("classification needs finite j >= m (got m = {m}, j = {j})")]
    OutOfRange { m: u32, j: usize },
}

/// The local model table: the admissible `(2n+ - 1, 2n- - 1)` pairs,
/// shape, absolute degree, and fiber counts determined by `(m, j)`.
pub fn classify_model(m: u32, j: usize) -> std::result::Result<TopologicalModel, ModelError> {
    if j < m as usize || m == 0 {
        return Err(ModelError::OutOfRange { m, j });
    }
    let m_odd = m % 2 == 1;
    let j_odd = j % 2 == 1;
    let shape = if j_odd { Shape::Convex } else { Shape::Cusp };
    let candidates: Vec<(u32, u32)> = match (m_odd, j_odd) {
        (true, true) => vec![(m, m)],
        (true, false) => vec![(m + 2, m), (m, m + 2)],
        (false, true) => vec![(m + 1, m - 1), (m - 1, m + 1)],
        (false, false) => vec![(m + 1, m + 1)],
    };
    for &(a, b) in &candidates {
        debug_assert!(a % 2 == 1 && b % 2 == 1 && a >= 1 && b >= 1);
        let np = (a + 1) / 2;
        let nm = (b + 1) / 2;
        debug_assert!(np.abs_diff(nm) <= 1);
    }
    let (a, b) = candidates[0];
    let n_sum = (a + 1) / 2 + (b + 1) / 2;
    let degree_abs = if (m as usize + j) % 2 == 0 { 0 } else { 1 };
    Ok(TopologicalModel {
        shape,
        candidates: candidates.clone(),
        degree_abs,
        fibers: (n_sum, n_sum - 2),
        unique: candidates.len() == 1,
    })
}

// ---------------------------------------------------------------------------
// construction with prescribed invariants
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MuRequest {
    Finite(usize),
    Infinite,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("infeasible request: mu = {mu} < m^2 + m = {min} for m = {m}")]
    Infeasible { m: u32, mu: usize, min: usize },
    #[error("verification failed: constructed germ has mu = {got}, requested {want}")]
    VerifyFailed { got: OrderValue, want: usize },
}

/// Build `g = p^m - conj(z)^m` with the requested multiplicity:
/// `mu = m^2 + m` uses `p = z + b z^2` with `b` an 8m-th root of unity;
/// larger finite mu uses the truncated-geometric recipe with a trailing
/// `2 z^nu` term; `mu = infinity` truncates `p = -z/(1-z)`.
/// The result is verified by recomputing the invariants.
pub fn construct_germ(
    m: u32,
    mu: MuRequest,
    trunc: usize,
) -> std::result::Result<(HarmonicGerm, OrderValue), ConstructError> {
    let min = (m * m + m) as usize;
    let p = match mu {
        MuRequest::Finite(v) if v < min => {
            return Err(ConstructError::Infeasible { m, mu: v, min })
        }
        MuRequest::Finite(v) if v == min => {
            let level = 8 * m;
            let b = CycloNumber::root_of_unity(1, 8 * m, level).expect("level");
            let check = b.mul(&b).neg().pow(m);
            assert!(
                check != CycloNumber::one(level).expect("level"),
                "(-b^2)^m must differ from 1 for the generic recipe"
            );
            Series1::from_terms(
                level,
                trunc,
                &[(1, CycloNumber::one(level).expect("level")), (2, b)],
                true,
            )
        }
        MuRequest::Finite(v) => {
            // nu = mu - (m-1)(m+2) >= 3
            let nu = v - ((m as usize - 1) * (m as usize + 2));
            let trunc = trunc.max(nu + 2);
            let i = CycloNumber::i(4).expect("level");
            let mut terms = Vec::new();
            // z * sum_{s=0}^{nu-2} (i z)^s
            for s in 0..=(nu - 2) {
                terms.push((s + 1, i.pow(s as u32)));
            }
            terms.push((nu, CycloNumber::from_int(2, 4).expect("level")));
            Series1::from_terms(4, trunc, &terms, true)
        }
        MuRequest::Infinite => {
            let minus_one = CycloNumber::from_int(-1, 4).expect("level");
            let terms: Vec<(usize, CycloNumber)> =
                (1..=trunc).map(|k| (k, minus_one.clone())).collect();
            Series1::from_terms(4, trunc, &terms, false)
        }
    };
    let germ = HarmonicGerm::pm_family(p, m).expect("constructed p is admissible");
    let (base, _) = germ.pm_data().expect("pm family");
    let got = mu_relation_fastpath(base, m);
    match mu {
        MuRequest::Finite(want) => {
            if got != OrderValue::Exact(want) {
                return Err(ConstructError::VerifyFailed { got, want });
            }
        }
        MuRequest::Infinite => {
            // a truncated germ can only certify a lower bound
            assert!(
                matches!(got, OrderValue::AtLeast(b) if b > trunc),
                "infinite-mu construction must exhaust the truncation, got {got}"
            );
        }
    }
    Ok((germ, got))
}

// ---------------------------------------------------------------------------
// conversion to a real-analytic germ
// ---------------------------------------------------------------------------

/// Express the harmonic germ as a planar analytic germ
/// (f1, f2) = (Re f, Im f) in real coordinates z = x + i y.
pub fn to_analytic(g: &HarmonicGerm, trunc2: usize) -> AnalyticGerm {
    let level = g.p.level().lcm(&g.q.level()).lcm(&4);
    let i = CycloNumber::i(level).expect("level");
    let one = CycloNumber::one(level).expect("level");
    let plus = Series2::from_terms(level, trunc2, &[(1, 0, one.clone()), (0, 1, i.clone())], true);
    let minus = Series2::from_terms(level, trunc2, &[(1, 0, one), (0, 1, i.neg())], true);
    let fp = Series2::compose_uni(&g.p, &plus).expect("zero constant term");
    let fq = Series2::compose_uni(&g.q.conj_series(), &minus).expect("zero constant term");
    let f = fp.add(&fq);
    let fstar = f.conj_coeffs();
    let half = CycloNumber::from_rational(BigRational::new(1.into(), 2.into()), level).expect("level");
    let f1 = f.add(&fstar).scale(&half);
    let f2 = f.sub(&fstar).scale(&half.mul(&i.neg()));
    AnalyticGerm::new(f1, f2).expect("recentered germ")
}

// ---------------------------------------------------------------------------
// normal-form bookkeeping (prenormalize)
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalCase {
    HolomorphicLike,
    MLessN,
    MEqualsN,
}

#[derive(Clone, Debug)]
pub struct Prenormalized {
    pub m: u32,
    /// None encodes n = infinity (holomorphic-like).
    pub n: Option<u32>,
    pub case: NormalCase,
    /// The germ transformed toward `z^m - conj(z^n(1 + O(z)))`, when every
    /// scaling constant is representable in the working cyclotomic field.
    pub transformed: Option<HarmonicGerm>,
}

/// Invariants (m, n) of the local normal form `z^m - conj(z^n(1+O(z)))`
/// with the constructive normalization applied when its constants exist
/// in the field.
pub fn prenormalize(g: &HarmonicGerm) -> std::result::Result<Prenormalized, Rejection> {
    prenormalize_depth(g, 0)
}

fn prenormalize_depth(g: &HarmonicGerm, depth: usize) -> std::result::Result<Prenormalized, Rejection> {
    assert!(depth <= 2, "normal-form reduction must terminate");
    // orient so the holomorphic part has the lower order
    let (p, q, conjugated) = {
        let op = g.p.ord();
        let oq = g.q.ord();
        match (op, oq) {
            (_, OrderValue::Infinite) => (g.p.clone(), g.q.clone(), false),
            (OrderValue::Infinite, _) => (g.q.clone(), g.p.clone(), true),
            (OrderValue::Exact(a), OrderValue::Exact(b)) => {
                if a <= b {
                    (g.p.clone(), g.q.clone(), false)
                } else {
                    // conj(f) = q + conj(p) swaps the roles exactly
                    (g.q.clone(), g.p.clone(), true)
                }
            }
            _ => {
                return Err(Rejection::Indeterminate(
                    "orders of p and q undecided".into(),
                ))
            }
        }
    };
    let _ = conjugated;
    if q.is_zero_poly() {
        let m = match p.ord() {
            OrderValue::Exact(k) => k as u32,
            _ => return Err(Rejection::Indeterminate("order of p undecided".into())),
        };
        let transformed = holomorphic_normal_form(&p, m);
        return Ok(Prenormalized {
            m,
            n: None,
            case: NormalCase::HolomorphicLike,
            transformed,
        });
    }
    let m = match p.ord() {
        OrderValue::Exact(k) => k,
        _ => return Err(Rejection::Indeterminate("order of p undecided".into())),
    };
    let n = match q.ord() {
        OrderValue::Exact(k) => k,
        OrderValue::AtLeast(_) => {
            return Err(Rejection::Indeterminate("order of q undecided".into()))
        }
        OrderValue::Infinite => unreachable!("zero polynomial handled above"),
    };
    debug_assert!(m <= n);
    if m < n {
        let transformed = scale_to_normal_form(&p, &q, m, n);
        return Ok(Prenormalized {
            m: m as u32,
            n: Some(n as u32),
            case: NormalCase::MLessN,
            transformed,
        });
    }
    // m = n: the case tag depends on |lead(p)/lead(q)|
    let a = p.coeff(m);
    let b = q.coeff(n);
    let ratio = a.mul(&b.inv().expect("nonzero lead"));
    if ratio.unit_modulus_test() {
        let transformed = scale_to_normal_form(&p, &q, m, n);
        return Ok(Prenormalized {
            m: m as u32,
            n: Some(n as u32),
            case: NormalCase::MEqualsN,
            transformed,
        });
    }
    // |A| != 1: the shear H(z) = z + w conj(z), w = -conj(b/a), kills the
    // anti-part at order m and reduces to an earlier case. H is invertible
    // because |w| != 1.
    let w = b.mul(&a.inv().expect("nonzero")).conj().neg();
    let new_p = p.add(&q.scale(&w));
    let new_q = q.add(&p.scale(&w.conj()));
    let reduced = HarmonicGerm::new(new_p, new_q).map_err(|_| {
        Rejection::Indeterminate("normal-form reduction produced a constant germ".into())
    })?;
    let inner = prenormalize_depth(&reduced, depth + 1)?;
    Ok(inner)
}

/// Case 0: `p = a z^m (1 + u)` is `h(z)^m` when `a` has an m-th root in
/// the field; the normal form is then exactly `z^m`.
fn holomorphic_normal_form(p: &Series1, m: u32) -> Option<HarmonicGerm> {
    let a = p.coeff(m as usize);
    let _root = nth_root_in_field(&a, m)?;
    let level = p.level();
    let zm = Series1::monomial(CycloNumber::one(level).expect("level"), m as usize, p.trunc());
    let zero = Series1::zero(level, p.trunc(), true);
    HarmonicGerm::new(zm, zero).ok()
}

/// Cases 1 and 2: find s, lambda with `s * p(lambda z)` of leading
/// coefficient 1 and `conj(s) * q(lambda z)` of leading coefficient -1,
/// then reparametrize so the holomorphic part becomes exactly `z^m`.
fn scale_to_normal_form(p: &Series1, q: &Series1, m: usize, n: usize) -> Option<HarmonicGerm> {
    let a = p.coeff(m);
    let b = q.coeff(n);
    // need lambda with a lambda^m = -conj(b) conj(lambda)^n
    let target = a.inv().ok()?.mul(&b.conj().neg());
    let (c_t, k_t, level_t) = modulus_phase(&target)?;
    // lambda = c * u: c^{m-n} = c_t and u^{m+n} = zeta_{level_t}^{k_t}
    let c = if m == n {
        if c_t != BigRational::from_integer(1.into()) {
            return None;
        }
        BigRational::from_integer(1.into())
    } else {
        rational_root(&c_t.recip(), (n - m) as u32)?
    };
    let phase_level = level_t.checked_mul((m + n) as u32)?;
    if phase_level > crate::field::MAX_LEVEL {
        return None;
    }
    let u = CycloNumber::root_of_unity(k_t, phase_level, phase_level).ok()?;
    let lambda = u.mul_rational(&c);
    let s = b
        .conj()
        .mul(&lambda.conj().pow(n as u32))
        .inv()
        .ok()?
        .neg();
    // apply f -> s * f(lambda z)
    let scale_var = |series: &Series1, factor: &CycloNumber| -> Series1 {
        let level = series.level().lcm(&factor.level());
        let terms: Vec<(usize, CycloNumber)> = (0..=series.trunc())
            .map(|k| (k, series.coeff(k).lift_level(level).unwrap().mul(&factor.lift_level(level).unwrap().pow(k as u32))))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Series1::from_terms(level, series.trunc(), &terms, series.is_exact())
    };
    let p1 = scale_var(p, &lambda).scale(&s);
    let q1 = scale_var(q, &lambda).scale(&s.conj());
    debug_assert_eq!(p1.coeff(m), CycloNumber::one(p1.level()).expect("level"));
    debug_assert_eq!(q1.coeff(n), CycloNumber::from_int(-1, q1.level()).expect("level"));
    // reparametrize: p1 = z^m (1 + w); h = z (1+w)^{1/m}; compose with h^{-1}
    let unit = p1.shift_down(m).ok()?;
    let v = nth_root_unit_series(&unit, m as u32)?;
    let h = Series1::identity(v.level(), v.trunc()).mul(&v);
    let hinv = h.reversion().ok()?;
    let q2 = Series1::compose(&q1, &hinv).ok()?;
    let zm = Series1::monomial(CycloNumber::one(p1.level()).expect("level"), m, p1.trunc());
    HarmonicGerm::new(zm, q2).ok()
}

/// Decompose x as (positive rational c) * zeta_L^k, if possible.
fn modulus_phase(x: &CycloNumber) -> Option<(BigRational, i64, u32)> {
    if x.is_zero() {
        return None;
    }
    let norm = x.mul(&x.conj()).as_rational()?;
    let c = rational_sqrt(&norm)?;
    let u = x.mul_rational(&c.recip());
    let level = x.level();
    (0..level).find_map(|k| {
        let z = CycloNumber::root_of_unity(k as i64, level, level).ok()?;
        (z == u).then_some((c.clone(), k as i64, level))
    })
}

fn integer_root(v: &BigInt, e: u32) -> Option<BigInt> {
    if v.is_negative() {
        if e % 2 == 0 {
            return None;
        }
        return integer_root(&-v, e).map(|r| -r);
    }
    let r = v.nth_root(e);
    (r.pow(e) == *v).then_some(r)
}

fn rational_root(v: &BigRational, e: u32) -> Option<BigRational> {
    let n = integer_root(v.numer(), e)?;
    let d = integer_root(v.denom(), e)?;
    Some(BigRational::new(n, d))
}

fn rational_sqrt(v: &BigRational) -> Option<BigRational> {
    rational_root(v, 2)
}

/// An m-th root of a field element, when one exists as
/// (rational) * (root of unity) within the level guard.
fn nth_root_in_field(x: &CycloNumber, m: u32) -> Option<CycloNumber> {
    let (c, k, level) = modulus_phase(x)?;
    let croot = rational_root(&c, m)?;
    let new_level = level.checked_mul(m)?;
    if new_level > crate::field::MAX_LEVEL {
        return None;
    }
    let u = CycloNumber::root_of_unity(k, new_level, new_level).ok()?;
    Some(u.mul_rational(&croot))
}

/// The m-th root of a unit series with constant term 1 (coefficients are
/// rational expressions in the input, hence stay in the field).
fn nth_root_unit_series(s: &Series1, m: u32) -> Option<Series1> {
    let level = s.level();
    let one = CycloNumber::one(level).expect("level");
    if s.coeff(0) != one {
        return None;
    }
    let trunc = s.trunc();
    let minv = BigRational::new(1.into(), BigInt::from(m));
    let mut v = Series1::from_terms(level, trunc, &[(0, one)], s.is_exact());
    for k in 1..=trunc {
        let cur = v.pow(m);
        let residual = s.coeff(k).sub(&cur.coeff(k));
        if residual.is_zero() {
            continue;
        }
        let vk = residual.mul_rational(&minv);
        v = v.add(&Series1::monomial(vk, k, trunc));
    }
    v = Series1::from_terms(
        level,
        trunc,
        &(0..=trunc).map(|k| (k, v.coeff(k))).collect::<Vec<_>>(),
        false,
    );
    Some(v)
}

#[cfg(test)]
mod tests;

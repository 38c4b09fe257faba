use super::*;
use crate::text::parse_series1;

fn s1(src: &str) -> Series1 {
    parse_series1(src, 32).unwrap()
}

fn pm(src: &str, m: u32) -> HarmonicGerm {
    HarmonicGerm::pm_family(s1(src), m).unwrap()
}

fn germ(p: &str, q: &str) -> HarmonicGerm {
    HarmonicGerm::new(s1(p), s1(q)).unwrap()
}

#[test]
fn germ_order_examples() {
    assert_eq!(germ_order(&germ("z + z^2", "z")), OrderValue::Exact(1));
    assert_eq!(germ_order(&germ("z^3", "z^3 + z^4")), OrderValue::Exact(3));
    let zero_p = Series1::zero(4, 8, true);
    let g = HarmonicGerm::new(zero_p, s1("z^2")).unwrap();
    assert_eq!(germ_order(&g), OrderValue::Exact(2));
}

#[test]
fn smooth_test_accepts_generic_germ() {
    let data = smooth_critical_test(&germ("z + z^2", "z")).unwrap();
    assert_eq!(data.m, 1);
    assert_eq!(data.lambda, CycloNumber::one(4).unwrap());
    // psi = p'/q' = 1 + 2z by direct division
    assert_eq!(data.psi.coeff(0), CycloNumber::one(4).unwrap());
    assert_eq!(data.psi.coeff(1), CycloNumber::from_int(2, 4).unwrap());
}

#[test]
fn smooth_test_rejections() {
    assert!(matches!(
        smooth_critical_test(&germ("z^2", "z")),
        Err(Rejection::OrderMismatch { .. })
    ));
    // psi = 1 + 3z^2 has psi'(0) = 0: star of 2 arcs
    assert!(matches!(
        smooth_critical_test(&germ("z + z^3", "z")),
        Err(Rejection::StarOfArcs { arcs: 2 })
    ));
    assert!(matches!(
        smooth_critical_test(&germ("z", "z")),
        Err(Rejection::JacobianZero)
    ));
    assert!(matches!(
        smooth_critical_test(&germ("2*z", "z")),
        Err(Rejection::NonUnitModulus)
    ));
    let g = HarmonicGerm::new(s1("z^2"), Series1::zero(4, 8, true)).unwrap();
    assert!(matches!(
        smooth_critical_test(&g),
        Err(Rejection::HolomorphicLike)
    ));
}

#[test]
fn pm_family_is_smooth() {
    let data = smooth_critical_test(&pm("z + (0,1)*z^2", 2)).unwrap();
    assert_eq!(data.m, 2);
    assert_eq!(data.lambda, CycloNumber::from_int(-1, 4).unwrap());
}

#[test]
fn mu_order_sum_examples() {
    assert_eq!(mu_order_sum(&s1("z + z^2"), 1), OrderValue::Exact(2));
    assert_eq!(mu_order_sum(&s1("z + (0,1)*z^2"), 1), OrderValue::Exact(3));
    assert_eq!(mu_order_sum(&s1("z + (0,1)*z^2"), 2), OrderValue::Exact(7));
}

#[test]
fn mu_order_sum_truncated_involution() {
    // p = -z/(1-z) truncated to degree 32: pbar o p = z exactly, so only
    // a bound survives the truncation
    let minus_one = CycloNumber::from_int(-1, 4).unwrap();
    let terms: Vec<(usize, CycloNumber)> = (1..=32).map(|k| (k, minus_one.clone())).collect();
    let p = Series1::from_terms(4, 32, &terms, false);
    assert_eq!(mu_order_sum(&p, 1), OrderValue::AtLeast(33));
}

#[test]
fn fastpath_matches_case_split() {
    // (-zeta_8^2)^2 = -1 != 1: generic, mu = m^2 + m = 6
    let b = CycloNumber::root_of_unity(1, 8, 8).unwrap();
    let p = Series1::from_terms(8, 32, &[(1, CycloNumber::one(8).unwrap()), (2, b)], true);
    assert_eq!(mu_relation_fastpath(&p, 2), OrderValue::Exact(6));

    // b = i, m = 1: -b^2 = 1, reduces to mu(f_1) = 3
    assert_eq!(mu_relation_fastpath(&s1("z + (0,1)*z^2"), 1), OrderValue::Exact(3));

    // b = 1, m = 2: (-1)^2 = 1, degenerate path must agree with the sum
    let p = s1("z + z^2");
    assert_eq!(mu_relation_fastpath(&p, 2), mu_order_sum(&p, 2));
    assert_eq!(mu_relation_fastpath(&p, 2), OrderValue::Exact(7));
}

#[test]
fn mu_general_matches_order_sum() {
    let g = pm("z + z^2", 1);
    assert_eq!(mu_general(&g).unwrap(), OrderValue::Exact(2));

    // f = 2 Re z: jacobian vanishes identically, common branch
    assert_eq!(mu_general(&germ("z", "z")).unwrap(), OrderValue::Infinite);

    // m = 3, b = i: dual-oracle value
    let g = pm("z + (0,1)*z^2", 3);
    let sum = mu_order_sum(&s1("z + (0,1)*z^2"), 3);
    assert_eq!(mu_general(&g).unwrap(), sum);
    assert_eq!(sum, OrderValue::Exact(13));
}

#[test]
fn j_invariant_fixtures() {
    let r = j_invariant(&pm("z + z^2", 1)).unwrap();
    assert_eq!((r.m, r.mu, r.j), (1, OrderValue::Exact(2), OrderValue::Exact(1)));
    assert_eq!(r.order_pair, OrderPair::OneInfinity);

    let r = j_invariant(&pm("z + (0,1)*z^2", 1)).unwrap();
    assert_eq!((r.m, r.mu, r.j), (1, OrderValue::Exact(3), OrderValue::Exact(2)));
    assert_eq!(r.order_pair, OrderPair::Finite(2, 3));

    let r = j_invariant(&pm("z + (0,1)*z^2", 2)).unwrap();
    assert_eq!((r.m, r.mu, r.j), (2, OrderValue::Exact(7), OrderValue::Exact(3)));
    assert_eq!(r.order_pair, OrderPair::Finite(3, 4));
}

#[test]
fn classify_model_table() {
    let m11 = classify_model(1, 1).unwrap();
    assert_eq!(m11.shape, Shape::Convex);
    assert_eq!(m11.candidates, vec![(1, 1)]);
    assert_eq!(m11.degree_abs, 0);
    assert_eq!(m11.fibers, (2, 0));
    assert!(m11.unique);

    let m12 = classify_model(1, 2).unwrap();
    assert_eq!(m12.shape, Shape::Cusp);
    assert_eq!(m12.candidates, vec![(3, 1), (1, 3)]);
    assert_eq!(m12.degree_abs, 1);
    assert_eq!(m12.fibers, (3, 1));
    assert!(!m12.unique);

    let m22 = classify_model(2, 2).unwrap();
    assert_eq!(m22.shape, Shape::Cusp);
    assert_eq!(m22.candidates, vec![(3, 3)]);
    assert_eq!(m22.degree_abs, 0);
    assert_eq!(m22.fibers, (4, 2));
    assert!(m22.unique);

    assert!(classify_model(3, 2).is_err());
}

#[test]
fn construct_germ_fixtures() {
    let (_, mu) = construct_germ(1, MuRequest::Finite(2), 32).unwrap();
    assert_eq!(mu, OrderValue::Exact(2));

    // nu = 5: p_5 = z + iz^2 - z^3 - iz^4 + 2z^5
    let (g, mu) = construct_germ(1, MuRequest::Finite(5), 32).unwrap();
    assert_eq!(mu, OrderValue::Exact(5));
    let (base, _) = g.pm_data().unwrap();
    assert_eq!(base.coeff(1), CycloNumber::one(4).unwrap());
    assert_eq!(base.coeff(2), CycloNumber::i(4).unwrap());
    assert_eq!(base.coeff(3), CycloNumber::from_int(-1, 4).unwrap());
    assert_eq!(base.coeff(4), CycloNumber::i(4).unwrap().neg());
    assert_eq!(base.coeff(5), CycloNumber::from_int(2, 4).unwrap());

    let (g, mu) = construct_germ(2, MuRequest::Finite(9), 32).unwrap();
    assert_eq!(mu, OrderValue::Exact(9));
    let r = j_invariant(&g).unwrap();
    assert_eq!(r.j, OrderValue::Exact(5));

    assert!(matches!(
        construct_germ(2, MuRequest::Finite(5), 32),
        Err(ConstructError::Infeasible { .. })
    ));

    let (_, mu) = construct_germ(1, MuRequest::Infinite, 16).unwrap();
    assert_eq!(mu, OrderValue::AtLeast(17));
}

#[test]
fn prenormalize_examples() {
    let g = HarmonicGerm::new(s1("z^2"), Series1::zero(4, 8, true)).unwrap();
    let r = prenormalize(&g).unwrap();
    assert_eq!((r.m, r.n, r.case), (2, None, NormalCase::HolomorphicLike));
    assert!(r.transformed.is_some());

    let r = prenormalize(&germ("z + z^2", "z^3")).unwrap();
    assert_eq!((r.m, r.n, r.case), (1, Some(3), NormalCase::MLessN));

    let r = prenormalize(&germ("z + (0,1)*z^2", "z")).unwrap();
    assert_eq!((r.m, r.n, r.case), (1, Some(1), NormalCase::MEqualsN));
}

#[test]
fn prenormalize_shear_reduction() {
    // |lead p / lead q| = 2: the shear removes the anti-part entirely
    // (q + conj(w) p with w = -conj(b/a) kills every term here)
    let r = prenormalize(&germ("2*z", "z")).unwrap();
    assert_eq!(r.m, 1);
    assert_eq!(r.case, NormalCase::HolomorphicLike);
    assert_eq!(r.n, None);
}

#[test]
fn prenormalize_transform_fixes_leading_coefficients() {
    let r = prenormalize(&germ("z + z^2", "z^3")).unwrap();
    let t = r.transformed.expect("constants representable");
    let (tp, tq) = t.parts();
    assert_eq!(tp.coeff(1), CycloNumber::one(tp.level()).unwrap());
    assert_eq!(tp.ord(), OrderValue::Exact(1));
    assert_eq!(tq.coeff(3), CycloNumber::from_int(-1, tq.level()).unwrap());
    assert_eq!(tq.ord(), OrderValue::Exact(3));
}

#[test]
fn to_analytic_dual_route_for_m1() {
    // invariants of z + iz^2 - conj(z): mu = 3, so the recursion gives j = 2
    let g = pm("z + (0,1)*z^2", 1);
    let a = to_analytic(&g, 6);
    assert!(a.regular_test());
    let trace = a.j_via_mn(1).unwrap();
    assert_eq!(trace.j, OrderValue::Exact(2));
}

#[test]
fn equivalence_invariance_under_root_of_unity_scaling() {
    // p(z) -> c^{-1} p(c z) with c^{2m} = 1 realizes the normal-form
    // uniqueness scaling and leaves (m, mu, j) fixed. (For other roots of
    // unity the anti-part picks up the factor c^{-2m} and the germ is a
    // genuinely different one.)
    let p = s1("z + (0,1)*z^2 + z^3");
    for m in [1u32, 2] {
        let base = j_invariant(&HarmonicGerm::pm_family(p.clone(), m).unwrap()).unwrap();
        let level = 4 * (2 * m);
        for k in 0..2 * m as i64 {
            let c = CycloNumber::root_of_unity(k, 2 * m, level).unwrap();
            let cinv = c.inv().unwrap();
            let terms: Vec<(usize, CycloNumber)> = (0..=p.trunc())
                .map(|d| {
                    (
                        d,
                        p.coeff(d)
                            .lift_level(level)
                            .unwrap()
                            .mul(&c.pow(d as u32))
                            .mul(&cinv),
                    )
                })
                .filter(|(_, v)| !v.is_zero())
                .collect();
            let pc = Series1::from_terms(level, p.trunc(), &terms, true);
            let r = j_invariant(&HarmonicGerm::pm_family(pc, m).unwrap()).unwrap();
            assert_eq!(
                (r.m, r.mu, r.j),
                (base.m, base.mu, base.j),
                "c = zeta^{k} of order 2m, m = {m}"
            );
        }
    }
}

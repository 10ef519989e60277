use std::collections::BTreeMap;

use proptest::prelude::*;

use monact_core::algebra::{
    cyclo_eval, rat, Polynomial, RationalExpr, Scalar, Var, VarKind,
};
use monact_core::graded::{lie_bracket, VectorField};
use monact_core::jet::{gk_compose, gk_inverse, weil_endo, JetElement};
use monact_core::jet_bundle::tk_lift;
use monact_core::m2::{m2_embed, m2_mul};

fn even_vars() -> Vec<Var> {
    ["x", "y", "z"].iter().map(|n| Var::fiber(n)).collect()
}

fn odd_vars() -> Vec<Var> {
    ["th1", "th2", "th3"].iter().map(|n| Var::odd(n, VarKind::Fiber)).collect()
}

fn poly_from(vars: &[Var], terms: &[(Vec<u8>, i64, i64)]) -> Polynomial {
    let mut p = Polynomial::zero();
    for (exps, n, d) in terms {
        let mut m = Polynomial::constant(Scalar::ratio(*n, *d));
        for (v, e) in vars.iter().zip(exps) {
            let e = if v.is_odd() { (*e).min(1) } else { *e };
            m = &m * &Polynomial::var(v).pow(e as u32).unwrap();
        }
        p = &p + &m;
    }
    p
}

fn term_strategy(nvars: usize, max_exp: u8) -> impl Strategy<Value = (Vec<u8>, i64, i64)> {
    (prop::collection::vec(0..=max_exp, nvars), -5i64..=5, 1i64..=3)
}

fn even_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(term_strategy(3, 2), 0..4).prop_map(|t| poly_from(&even_vars(), &t))
}

/// Polynomials in `x, y, th1, th2, th3`.
fn super_poly() -> impl Strategy<Value = Polynomial> {
    let mut vars = even_vars()[..2].to_vec();
    vars.extend(odd_vars());
    prop::collection::vec(term_strategy(5, 1), 0..4).prop_map(move |t| poly_from(&vars, &t))
}

fn homogeneous_parity_poly(odd: bool) -> impl Strategy<Value = Polynomial> {
    super_poly().prop_map(move |p| {
        let want = if odd { 1 } else { 0 };
        p.filter_terms(|m| m.odd_count() % 2 == want)
    })
}

fn jet(k: usize) -> impl Strategy<Value = JetElement> {
    prop::collection::vec((-4i64..=4, 1i64..=3), k).prop_map(|c| {
        JetElement::new(c.into_iter().map(|(n, d)| rat(n, d)).collect()).unwrap()
    })
}

fn jet_triple() -> impl Strategy<Value = (usize, JetElement, JetElement, JetElement)> {
    (1usize..=5).prop_flat_map(|k| (Just(k), jet(k), jet(k), jet(k)))
}

fn field() -> impl Strategy<Value = VectorField> {
    prop::collection::vec(even_poly(), 3).prop_map(|ps| {
        VectorField::from_components(even_vars().into_iter().zip(ps))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(a in super_poly(), b in super_poly(), c in super_poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a - &a, Polynomial::zero());
        prop_assert_eq!(&a * &Polynomial::one(), a.clone());
    }

    #[test]
    fn even_polynomials_commute(a in even_poly(), b in even_poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn koszul_rule(
        pa in any::<bool>(),
        pb in any::<bool>(),
        a in super_poly(),
        b in super_poly(),
    ) {
        let keep = |p: &Polynomial, odd: bool| p.filter_terms(|m| (m.odd_count() % 2 == 1) == odd);
        let (a, b) = (keep(&a, pa), keep(&b, pb));
        let ab = &a * &b;
        let ba = &b * &a;
        if pa && pb {
            prop_assert_eq!(ab, -&ba);
        } else {
            prop_assert_eq!(ab, ba);
        }
    }

    #[test]
    fn odd_elements_square_to_zero(a in homogeneous_parity_poly(true)) {
        prop_assert!((&a * &a).is_zero());
    }

    #[test]
    fn substitution_composes(f in even_poly(), g in prop::collection::vec(even_poly(), 3), h in prop::collection::vec(even_poly(), 3)) {
        let vars = even_vars();
        let gm: BTreeMap<Var, Polynomial> = vars.iter().cloned().zip(g).collect();
        let hm: BTreeMap<Var, Polynomial> = vars.iter().cloned().zip(h).collect();
        let lhs = f.substitute(&gm).unwrap().substitute(&hm).unwrap();
        let gh: BTreeMap<Var, Polynomial> = gm
            .iter()
            .map(|(v, p)| (v.clone(), p.substitute(&hm).unwrap()))
            .collect();
        prop_assert_eq!(lhs, f.substitute(&gh).unwrap());
    }

    #[test]
    fn derivation_rule(a in super_poly(), b in super_poly(), i in 0usize..5) {
        let mut vars = even_vars()[..2].to_vec();
        vars.extend(odd_vars());
        let v = &vars[i];
        // With `a` even the Leibniz rule carries no sign.
        let a = a.filter_terms(|m| m.odd_count() % 2 == 0);
        let lhs = (&a * &b).derivative(v);
        let rhs = &(&a.derivative(v) * &b) + &(&a * &b.derivative(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jets_associate((k, p, q, r) in jet_triple()) {
        let lhs = gk_compose(&gk_compose(&p, &q).unwrap(), &r).unwrap();
        let rhs = gk_compose(&p, &gk_compose(&q, &r).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let id = JetElement::identity(k);
        prop_assert_eq!(gk_compose(&p, &id).unwrap(), p.clone());
        prop_assert_eq!(gk_compose(&id, &p).unwrap(), p.clone());
        if p.is_invertible() {
            let inv = gk_inverse(&p).unwrap();
            prop_assert_eq!(gk_compose(&p, &inv).unwrap(), id.clone());
            prop_assert_eq!(gk_compose(&inv, &p).unwrap(), id);
        }
    }

    #[test]
    fn jacobi_identity(x in field(), y in field(), z in field()) {
        let j = lie_bracket(&x, &lie_bracket(&y, &z))
            .add(&lie_bracket(&y, &lie_bracket(&z, &x)))
            .add(&lie_bracket(&z, &lie_bracket(&x, &y)));
        prop_assert!(j.is_zero());
        prop_assert_eq!(lie_bracket(&x, &y), lie_bracket(&y, &x).scale(&Scalar::int(-1)));
    }

    #[test]
    fn tk_lift_is_functorial(
        k in 1usize..=3,
        f in prop::collection::vec(term_strategy(2, 2), 1..3),
        g in prop::collection::vec(term_strategy(2, 2), 1..3),
        h in prop::collection::vec(term_strategy(2, 2), 1..3),
    ) {
        let base = [Var::base("x"), Var::base("y")];
        let phi = BTreeMap::from([
            ("x".to_string(), poly_from(&base, &f)),
            ("y".to_string(), poly_from(&base, &g)),
        ]);
        let psi = BTreeMap::from([
            ("x".to_string(), poly_from(&base, &h)),
            ("y".to_string(), Polynomial::var(&base[0])),
        ]);
        let composite: BTreeMap<String, Polynomial> = phi
            .iter()
            .map(|(n, p)| {
                let sub: BTreeMap<Var, Polynomial> =
                    base.iter().map(|b| (b.clone(), psi[b.name()].clone())).collect();
                (n.clone(), p.substitute(&sub).unwrap())
            })
            .collect();
        let lifted_phi = tk_lift(&phi, &["x", "y"], k).unwrap();
        let lifted_psi = tk_lift(&psi, &["x", "y"], k).unwrap();
        let lifted = tk_lift(&composite, &["x", "y"], k).unwrap();
        for (v, p) in &lifted {
            prop_assert_eq!(p, &lifted_phi[v].substitute(&lifted_psi).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn m2_embedding_is_multiplicative(p in jet(2), q in jet(2)) {
        let lhs = m2_embed(&gk_compose(&p, &q).unwrap()).unwrap();
        prop_assert_eq!(lhs, m2_mul(&m2_embed(&p).unwrap(), &m2_embed(&q).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn weil_action_reverses_order(k in 1usize..=5, p in jet(5), q in jet(5)) {
        let cut = |j: &JetElement| JetElement::new(j.coeffs()[..k].to_vec()).unwrap();
        let (p, q) = (cut(&p), cut(&q));
        let lhs = weil_endo(&p).compose(&weil_endo(&q));
        prop_assert_eq!(lhs, weil_endo(&gk_compose(&q, &p).unwrap()));
    }

    #[test]
    fn cyclo_eval_is_a_homomorphism(m in 1u32..=12, a in xi_poly(), b in xi_poly()) {
        let xi = Var::param("xi");
        let ev = |p: &Polynomial| cyclo_eval(p, &xi, m).unwrap();
        prop_assert_eq!(ev(&(&a * &b)), &ev(&a) * &ev(&b));
        prop_assert_eq!(ev(&(&a + &b)), &ev(&a) + &ev(&b));
    }
}

fn xi_poly() -> impl Strategy<Value = Polynomial> {
    let xi = Var::param("xi");
    let vars = vec![xi.clone(), xi.conjugate(), Var::fiber("y")];
    prop::collection::vec(term_strategy(3, 3), 0..4).prop_map(move |t| poly_from(&vars, &t))
}

#[test]
fn roots_of_unity_are_exact() {
    let xi = Var::param("xi");
    let xp = Polynomial::var(&xi);
    for m in 1..=12u32 {
        let pow = cyclo_eval(&xp.pow(m).unwrap(), &xi, m).unwrap();
        assert_eq!(pow, Polynomial::one(), "ζ_{m}^{m}");
        let norm = cyclo_eval(&(&xp * &Polynomial::var(&xi.conjugate())), &xi, m).unwrap();
        assert_eq!(norm, Polynomial::one(), "|ζ_{m}|²");
        if m > 1 {
            let mut sum = Polynomial::zero();
            for k in 0..m {
                sum = &sum + &xp.pow(k).unwrap();
            }
            assert!(cyclo_eval(&sum, &xi, m).unwrap().is_zero(), "Σ ζ_{m}^k");
            let half = cyclo_eval(&xp.pow(m / 2).unwrap(), &xi, m).unwrap();
            if m % 2 == 0 {
                assert_eq!(half, Polynomial::int(-1), "ζ_{m}^{}", m / 2);
            }
        }
    }
}

/// Monomials in `vars` with total degree at most `d`; odd variables at most once.
fn monomials(vars: &[Var], d: u32) -> Vec<Polynomial> {
    let mut out = vec![Polynomial::one()];
    for v in vars {
        let cap = if v.is_odd() { 1 } else { d };
        let mut next = Vec::new();
        for m in &out {
            for e in 0..=cap {
                let p = m * &Polynomial::var(v).pow(e).unwrap();
                if !p.is_zero() && total_degree(&p) <= d {
                    next.push(p);
                }
            }
        }
        out = next;
    }
    out
}

fn total_degree(p: &Polynomial) -> u32 {
    p.terms()
        .map(|(m, _)| m.iter().map(|(_, e)| e as u32).sum())
        .max()
        .unwrap_or(0)
}

#[test]
fn homogeneous_complex_functions_are_holomorphic() {
    use monact_core::graded::{standard_homothety, GradedSignature, VarDecl};
    let xi = Var::param("xi");
    for weights in [vec![1u32], vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 2, 3]] {
        let decls: Vec<VarDecl> = weights
            .iter()
            .enumerate()
            .map(|(i, w)| VarDecl { var: Var::fiber(&format!("z{i}")), weight: *w })
            .collect();
        let sig = GradedSignature::complex(decls).unwrap();
        let h = standard_homothety(&sig, &xi);
        let coords = sig.all_coordinates();
        for m in monomials(&coords, 4) {
            let f = RationalExpr::from(m.clone());
            let pulled = h.pull_back(&f).unwrap();
            let w = (0..=12).find(|w| {
                pulled == f.checked_mul(&RationalExpr::from(Polynomial::var(&xi).pow(*w).unwrap())).unwrap()
            });
            let conj_free = m.variables().iter().all(|v| !v.is_conj());
            assert_eq!(w.is_some(), conj_free, "{m}");
            if let Some(w) = w {
                let parts = m.weight_decompose(sig.weight_fn());
                assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![w as i64]);
            }
        }
    }
}

#[test]
fn homogeneous_super_functions_have_one_weight() {
    use monact_core::graded::{standard_homothety, GradedSignature, VarDecl};
    let t = Var::param("t");
    let decls = vec![
        VarDecl { var: Var::base("x"), weight: 0 },
        VarDecl { var: Var::odd("eta", VarKind::Base), weight: 0 },
        VarDecl { var: Var::fiber("y"), weight: 2 },
        VarDecl { var: Var::odd("th1", VarKind::Fiber), weight: 1 },
        VarDecl { var: Var::odd("th2", VarKind::Fiber), weight: 2 },
    ];
    let sig = GradedSignature::new(decls).unwrap();
    let h = standard_homothety(&sig, &t);
    let mons = monomials(&sig.all_coordinates(), 4);
    for a in &mons {
        for b in mons.iter().take(12) {
            let f = a + b;
            let fr = RationalExpr::from(f.clone());
            let pulled = h.pull_back(&fr).unwrap();
            let parts = f.weight_decompose(sig.weight_fn());
            for w in 0..=10u32 {
                let tw = RationalExpr::from(Polynomial::var(&t).pow(w).unwrap());
                let homogeneous = pulled == fr.checked_mul(&tw).unwrap();
                let concentrated = parts.len() == 1 && parts.contains_key(&(w as i64));
                assert_eq!(homogeneous, concentrated, "{f} at weight {w}");
            }
        }
    }
}

#[test]
fn fourier_modes_sum_back() {
    use monact_core::complex::{complex_family, fourier_weight_project};
    use monact_core::algebra::{parse_expr, Symbols};
    let xi = Var::param("xi");
    let coords = [Var::fiber("y1"), Var::fiber("y2")];
    let mut syms = Symbols::from_vars(&coords, true);
    syms.insert(xi.clone());
    let comps = BTreeMap::from([
        (coords[0].clone(), parse_expr("(xi + xi^2)/2*y1 + (xi - xi^2)/2*y2", &syms).unwrap()),
        (coords[1].clone(), parse_expr("(xi - xi^2)/2*y1 + (xi + xi^2)/2*y2", &syms).unwrap()),
    ]);
    let fam = complex_family(&xi, comps).unwrap();
    let f = parse_expr("y1^2 + conj(y2)*y1 + 3*conj(y1)", &syms).unwrap();
    let mut total = RationalExpr::zero();
    for w in -8..=8 {
        let mode = fourier_weight_project(&f, &fam, w).unwrap();
        total = total
            .checked_add(&mode.checked_mul(&RationalExpr::from(Polynomial::power_of(&xi, w).unwrap())).unwrap())
            .unwrap();
    }
    let circle = BTreeMap::from([(xi.conjugate(), Polynomial::power_of(&xi, -1).unwrap())]);
    let direct = fam.pull_back(&f).unwrap().substitute_poly(&circle).unwrap();
    assert_eq!(total, direct);
}

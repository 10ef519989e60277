//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! All checks are exact; there are no floating-point tolerances.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;

use monact_core::algebra::{parse_expr, rat, Polynomial, Rational, RationalExpr, Scalar, Symbols, Var, VarKind};
use monact_core::complex::{
    complex_family, complex_homogenize, is_holomorphic, niceness_check, verify_c_action, Holomorphy,
};
use monact_core::g2::{
    bullet_obstruction, bullet_polarize, criterion_deg_le3, cubic_obstruction, extendable_to_zero,
    infinitesimal_pair, left_family_from_bullet, quartic_square, right_family, BulletProduct,
    WeightMinusOneField,
};
use monact_core::graded::{
    flow_nilpotent, homogenize_real, lie_bracket, standard_homothety, verify_action,
    ActionFamily, GradedSignature, Monoid, VarDecl, Verdict, VectorField,
};
use monact_core::jet::{gk_compose, weil_endo, JetElement};
use monact_core::jet_bundle::{tk_right_action, tkstar_left_action, tkstar_signature};
use monact_core::m2::{double_weight_analysis, j2_velocities_action, j2_velocities_signature};
use monact_core::supergeo::{
    super_homogenize, super_morphism_check, super_tangent_signature, super_tk_lift,
    verify_super_action,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn syms(vars: impl IntoIterator<Item = Var>, params: &[&str], complex: bool) -> Symbols {
    let mut s = Symbols::new(complex);
    for v in vars {
        s.insert(v);
    }
    for p in params {
        s.insert(Var::param(p));
    }
    s
}

fn expr(src: &str, s: &Symbols) -> RationalExpr {
    parse_expr(src, s).unwrap_or_else(|e| panic!("{src}: {e}"))
}

fn field(sig: &GradedSignature, s: &Symbols, comps: &[(&str, &str)]) -> VectorField {
    VectorField::from_components(comps.iter().map(|(v, e)| {
        let var = sig.get(v).expect("declared").var.clone();
        (var, expr(e, s).to_poly().expect("polynomial"))
    }))
}

fn random_jet(rng: &mut ChaCha8Rng, k: usize) -> JetElement {
    let coeffs = (0..k)
        .map(|_| {
            let n: i64 = rng.gen_range(-40..=40);
            let d: i64 = rng.gen_range(1..=15);
            rat(n, d)
        })
        .collect();
    JetElement::new(coeffs).expect("jet")
}

fn g2_product_and_associativity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6732);
    for _ in 0..1000 {
        let p = random_jet(&mut rng, 2);
        let q = random_jet(&mut rng, 2);
        let (a, b) = (&p.coeffs()[0], &p.coeffs()[1]);
        let (aa, bb) = (&q.coeffs()[0], &q.coeffs()[1]);
        let expect: Vec<Rational> = vec![a * aa, a * bb + b * aa * aa];
        let got = gk_compose(&p, &q).map_err(|e| e.to_string())?;
        ensure(got.coeffs() == expect.as_slice(), || format!("{:?} * {:?}", p.coeffs(), q.coeffs()))?;
    }
    for n in 0..200 {
        let k = 1 + n % 5;
        let (p, q, r) = (random_jet(&mut rng, k), random_jet(&mut rng, k), random_jet(&mut rng, k));
        let lhs = gk_compose(&gk_compose(&p, &q).unwrap(), &r).unwrap();
        let rhs = gk_compose(&p, &gk_compose(&q, &r).unwrap()).unwrap();
        ensure(lhs == rhs, || format!("associativity fails at k={k}"))?;
    }
    Ok("1000 products, 200 triples".into())
}

fn weil_opposite_order() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3e11);
    for n in 0..50 {
        let k = 1 + n % 4;
        let (p, q) = (random_jet(&mut rng, k), random_jet(&mut rng, k));
        let lhs = weil_endo(&p).compose(&weil_endo(&q));
        let rhs = weil_endo(&gk_compose(&q, &p).unwrap());
        ensure(lhs == rhs, || format!("k={k}: {:?} {:?}", p.coeffs(), q.coeffs()))?;
    }
    Ok("50 pairs".into())
}

fn t2_fixture() -> Check {
    let (a, b) = (Var::param("a"), Var::param("b"));
    let fam = tk_right_action(&["x"], 2, &[a, b]).map_err(|e| e.to_string())?;
    let shown: Vec<String> = ["x", "dx", "ddx"]
        .iter()
        .map(|n| fam.component(&fam.coordinates().find(|v| v.name() == *n).unwrap().clone()).unwrap().to_string())
        .collect();
    ensure(shown == ["x", "a*dx", "a^2*ddx + b*dx"], || format!("{shown:?}"))?;
    ensure(verify_action(&fam).unwrap().is_ok(), || "not an action".into())?;
    let sig = GradedSignature::simple(&["x"], &[("dx", 1), ("ddx", 2)]);
    let s = syms(sig.vars().cloned(), &[], false);
    let (delta, x) = infinitesimal_pair(&fam).map_err(|e| e.to_string())?;
    ensure(delta == field(&sig, &s, &[("dx", "dx"), ("ddx", "2*ddx")]), || format!("Δ = {delta}"))?;
    ensure(x == field(&sig, &s, &[("ddx", "dx")]), || format!("X = {x}"))?;
    ensure(lie_bracket(&delta, &x) == x.scale(&Scalar::int(-1)), || "[Δ,X] ≠ -X".into())?;
    Ok(format!("Δ = {delta}, X = {x}"))
}

fn t2star_fixture() -> Check {
    let (a, b) = (Var::param("a"), Var::param("b"));
    let fam = tkstar_left_action(2, &a, &b).map_err(|e| e.to_string())?;
    let sig = tkstar_signature(2);
    let s = syms(sig.vars().cloned(), &["a", "b"], false);
    let find = |n: &str| fam.components.iter().find(|(v, _)| v.name() == n).map(|(_, c)| c.clone());
    for i in 1..=2 {
        let pi = format!("p{i}");
        ensure(find(&pi) == Some(expr(&format!("a*{pi}"), &s)), || format!("component of {pi}"))?;
        for j in i..=2 {
            let pij = format!("p{i}_{j}");
            let want = expr(&format!("a*{pij} + b*p{i}*p{j}"), &s);
            ensure(find(&pij) == Some(want), || format!("component of {pij}"))?;
        }
    }
    ensure(fam.monoid == Monoid::Jets { order: 2, side: monact_core::graded::Side::Left }, || "side".into())?;
    ensure(verify_action(&fam).unwrap().is_ok(), || "left action laws fail".into())?;
    let (delta, y) = infinitesimal_pair(&fam).map_err(|e| e.to_string())?;
    ensure(lie_bracket(&delta, &y) == y, || "[Δ,Y] ≠ Y".into())?;
    Ok("(a p_i, a p_ij + b p_i p_j), [Δ,Y] = Y".into())
}

fn deg3_sig() -> GradedSignature {
    GradedSignature::simple(&[], &[("y1", 1), ("y2", 2), ("y3", 3)])
}

fn block_field(f: i64, g: i64, h: i64, i: i64) -> WeightMinusOneField {
    let c = RationalExpr::int;
    WeightMinusOneField {
        y1: vec![Var::fiber("y1")],
        y2: vec![Var::fiber("y2")],
        y3: vec![Var::fiber("y3")],
        f: vec![c(f)],
        g: vec![vec![c(g)]],
        h: vec![vec![c(h)]],
        i: vec![vec![vec![c(i)]]],
    }
}

fn degree_three_criterion() -> Check {
    let sig = deg3_sig();
    let (a, b, s) = (Var::param("a"), Var::param("b"), Var::param("s"));
    let sy = syms(sig.vars().cloned(), &["s"], false);
    let vals = [-1, 0, 1];
    let mut disagreements = 0;
    let mut blocked = 0;
    for f in vals {
        for g in vals {
            for h in vals {
                for i in vals {
                    let blocks = block_field(f, g, h, i);
                    let x = blocks.to_field().map_err(|e| e.to_string())?;
                    let fam = right_family(&sig, &x, &a, &b).map_err(|e| e.to_string())?;
                    let ext = extendable_to_zero(&sig, &fam, &a).is_ok();
                    if criterion_deg_le3(&blocks).unwrap() != ext {
                        disagreements += 1;
                    }
                    blocked += usize::from(!ext);
                    let flow = flow_nilpotent(&x, &sig, &s).map_err(|e| e.to_string())?;
                    let want = [
                        ("y1", format!("y1 + s*({f})")),
                        ("y2", format!("y2 + s*({g})*y1 + s^2/2*({g})*({f})")),
                        (
                            "y3",
                            format!(
                                "y3 + s*(({h})*y2 + ({i})*y1^2/2) + s^2/2*(({h})*({g})*y1 + ({i})*({f})*y1) + s^3/6*(({h})*({g})*({f}) + ({i})*({f})*({f}))"
                            ),
                        ),
                    ];
                    for (v, e) in want {
                        let got = flow.component(&Var::fiber(v)).unwrap();
                        ensure(*got == expr(&e, &sy), || format!("flow of {v} at F={f} G={g} H={h} I={i}: {got}"))?;
                    }
                }
            }
        }
    }
    ensure(disagreements == 0, || format!("{disagreements} disagreements"))?;
    Ok(format!("81 cases, 0 disagreements, {blocked} blocked; flow formulas exact"))
}

fn tensor(n: usize, entries: &[(usize, usize, usize)]) -> BulletProduct {
    let mut t = vec![vec![vec![rat(0, 1); n]; n]; n];
    for &(k, i, j) in entries {
        t[k][i][j] = rat(1, 1);
        t[k][j][i] = rat(1, 1);
    }
    BulletProduct::new(t).expect("symmetric")
}

fn bullet_checks() -> Check {
    let (a, b, aa, bb) = (Var::param("a"), Var::param("b"), Var::param("A"), Var::param("B"));
    let admissible = [
        ("e1•e1=e2", tensor(2, &[(1, 0, 0)])),
        ("zero", BulletProduct::zero(2)),
        ("e1•e1=e2•e2=e3", tensor(3, &[(2, 0, 0), (2, 1, 1)])),
    ];
    for (name, t) in &admissible {
        ensure(cubic_obstruction(t).iter().all(Polynomial::is_zero), || format!("{name}: v•(v•v) ≠ 0"))?;
        ensure(bullet_polarize(t).iter().all(Polynomial::is_zero), || format!("{name}: polarization"))?;
        ensure(quartic_square(t).iter().all(Polynomial::is_zero), || format!("{name}: (v•v)•(v•v) ≠ 0"))?;
        let obs = bullet_obstruction(t, (&a, &b), (&aa, &bb));
        ensure(obs.iter().all(Polynomial::is_zero), || format!("{name}: obstruction"))?;
        let fam = left_family_from_bullet(t, &a, &b).map_err(|e| e.to_string())?;
        ensure(verify_action(&fam).unwrap().is_ok(), || format!("{name}: not an action"))?;
    }
    let bad = tensor(1, &[(0, 0, 0)]);
    let obs = bullet_obstruction(&bad, (&a, &b), (&aa, &bb));
    ensure(obs.iter().any(|p| !p.is_zero()), || "e1•e1=e1 has zero obstruction".into())?;
    ensure(left_family_from_bullet(&bad, &a, &b).is_err(), || "e1•e1=e1 accepted".into())?;
    Ok(format!("{} admissible tensors; e1•e1=e1 obstruction {}", admissible.len(), obs[0]))
}

fn m2_example() -> Check {
    let p: Vec<Var> = ["a", "b", "c", "d"].iter().map(|n| Var::param(n)).collect();
    let fam = j2_velocities_action(1, [&p[0], &p[1], &p[2], &p[3]]).map_err(|e| e.to_string())?;
    ensure(verify_action(&fam).unwrap().is_ok(), || "not an M2 action".into())?;
    let sig = j2_velocities_signature(1).total().map_err(|e| e.to_string())?;
    let s = syms(sig.vars().cloned(), &[], false);
    let r = double_weight_analysis(&fam).map_err(|e| e.to_string())?;
    let expect = [
        ("X", &r.x, field(&sig, &s, &[("x01", "x10"), ("x11", "x20"), ("x02", "2*x11")])),
        ("Y", &r.y, field(&sig, &s, &[("x10", "x01"), ("x11", "x02"), ("x20", "2*x11")])),
        ("Δ1", &r.delta1, field(&sig, &s, &[("x10", "x10"), ("x11", "x11"), ("x20", "2*x20")])),
        ("Δ2", &r.delta2, field(&sig, &s, &[("x01", "x01"), ("x11", "x11"), ("x02", "2*x02")])),
    ];
    for (n, got, want) in &expect {
        ensure(*got == want, || format!("{n} = {got}"))?;
    }
    ensure(r.xy_residual.is_zero(), || format!("[X,Y] - (Δ1 - Δ2) = {}", r.xy_residual))?;
    ensure(lie_bracket(&r.delta1, &r.delta2).is_zero(), || "[Δ1,Δ2] ≠ 0".into())?;
    Ok(format!("X = {}, [X,Y] = Δ1 - Δ2", r.x))
}

fn homogenizer_round_trip() -> Check {
    let sig = GradedSignature::simple(&[], &[("u", 1), ("v", 2)]);
    let t = Var::param("t");
    let s = syms(sig.vars().cloned(), &["t"], false);
    let std = standard_homothety(&sig, &t);
    // Chart v' = v + u² + u, so v = v' - u² - u.
    let back = BTreeMap::from([(Var::fiber("v"), expr("v - u^2 - u", &s))]);
    let fwd = expr("v + u^2 + u", &s);
    let v_comp = std.pull_back(&fwd).unwrap().substitute(&back).unwrap();
    let comps = BTreeMap::from([(Var::fiber("u"), expr("t*u", &s)), (Var::fiber("v"), v_comp.clone())]);
    let fam = ActionFamily::new(Monoid::Reals, vec![t.clone()], comps).unwrap();
    ensure(v_comp == expr("t^2*v + (t - t^2)*u", &s), || format!("conjugated family {v_comp}"))?;
    let h = homogenize_real(&sig, &fam).map_err(|e| e.to_string())?;
    // Up to weight-preserving changes, the new v must lie in span{v - u, u²}.
    let shift = BTreeMap::from([(Var::fiber("v"), expr("v + u", &s))]);
    let new_v = h.forward[&Var::fiber("v")].substitute(&shift).unwrap();
    let ok_v = new_v
        .numer()
        .terms()
        .all(|(m, _)| m.exponent(&Var::fiber("v")) == 1 && m.exponent(&Var::fiber("u")) == 0 || m.exponent(&Var::fiber("u")) == 2);
    ensure(ok_v && new_v.coeff_extract(&Var::fiber("v"), 1).as_constant().is_some(), || format!("v ↦ {}", h.forward[&Var::fiber("v")]))?;
    ensure(h.forward[&Var::fiber("u")] == expr("u", &s), || "u changed".into())?;
    for d in h.signature.decls() {
        let want = expr(&format!("t^{}*{}", d.weight, d.var), &s);
        ensure(h.family.components[&d.var] == want, || format!("not diagonal at {}", d.var))?;
    }
    let again = homogenize_real(&h.signature, &h.family).map_err(|e| e.to_string())?;
    ensure(again.is_identity(), || "not idempotent".into())?;
    Ok(format!("v ↦ {}", h.forward[&Var::fiber("v")]))
}

fn complex_sig(weights: &[u32]) -> GradedSignature {
    GradedSignature::complex(
        weights
            .iter()
            .enumerate()
            .map(|(i, w)| VarDecl { var: Var::fiber(&format!("z{i}")), weight: *w })
            .collect(),
    )
    .unwrap()
}

fn single(src: &str, w: u32) -> (GradedSignature, ActionFamily) {
    let sig = GradedSignature::complex(vec![VarDecl { var: Var::fiber("y"), weight: w }]).unwrap();
    let xi = Var::param("xi");
    let s = syms(sig.vars().cloned(), &["xi"], true);
    let fam = complex_family(&xi, BTreeMap::from([(Var::fiber("y"), expr(src, &s))])).unwrap();
    (sig, fam)
}

fn mixing_sig() -> GradedSignature {
    GradedSignature::complex(vec![
        VarDecl { var: Var::base("x"), weight: 0 },
        VarDecl { var: Var::fiber("y1"), weight: 1 },
        VarDecl { var: Var::fiber("y2"), weight: 2 },
    ])
    .unwrap()
}

fn mixing(factor: &str) -> ActionFamily {
    let sig = mixing_sig();
    let s = syms(sig.vars().cloned(), &["xi"], true);
    let comps = BTreeMap::from([
        (Var::fiber("y1"), expr("(xi + xi^2)/2*y1 + conj(x)/(2*x)*(xi - xi^2)*y2", &s)),
        (Var::fiber("y2"), expr(&format!("{factor}*(xi - xi^2)*y1 + (xi + xi^2)/2*y2"), &s)),
    ]);
    complex_family(&Var::param("xi"), comps).unwrap()
}

fn complex_niceness() -> Check {
    let xi = Var::param("xi");
    let mut ranks = 0;
    for code in 1..81u32 {
        let counts: Vec<u32> = (0..4).map(|k| code / 3u32.pow(k) % 3).collect();
        let weights: Vec<u32> = counts.iter().enumerate().flat_map(|(k, &c)| std::iter::repeat_n(k as u32 + 1, c as usize)).collect();
        let sig = complex_sig(&weights);
        let fam = standard_homothety(&sig, &xi);
        let r = niceness_check(&sig, &fam).map_err(|e| e.to_string())?;
        ensure(r.is_nice(), || format!("standard homothety with weights {weights:?} not nice"))?;
        ranks += 1;
    }
    for (src, w, level) in [("xi*conj(xi)*y", 2, 2), ("xi^2*conj(xi)*y", 3, 3)] {
        let (sig, fam) = single(src, w);
        let r = niceness_check(&sig, &fam).map_err(|e| e.to_string())?;
        let got = r.first_failure().map(|l| l.level);
        ensure(got == Some(level), || format!("{src}: first failure {got:?}"))?;
    }
    let fam = mixing("x/(2*conj(x))");
    ensure(verify_c_action(&fam).unwrap().is_ok(), || "mixing family is not a C-action".into())?;
    match is_holomorphic(&fam) {
        Holomorphy::NotHolomorphic { witness, .. } => ensure(
            witness.variables().iter().any(|v| v.is_conj() && v.name() == "x"),
            || format!("witness {witness} lacks conj(x)"),
        )?,
        Holomorphy::Holomorphic => return Err("mixing family reported holomorphic".into()),
    }
    let sig = mixing_sig();
    ensure(niceness_check(&sig, &fam).unwrap().is_nice(), || "mixing family not nice".into())?;
    let base = BTreeMap::from([(Var::base("x"), Scalar::gaussian(rat(1, 1), rat(1, 1)))]);
    let h = complex_homogenize(&sig, &fam, &base).map_err(|e| e.to_string())?;
    let s = syms(sig.vars().cloned(), &[], true);
    let targets = [(1, expr("(1 + i)*y1 + (1 - i)*y2", &s)), (2, expr("-(1 + i)*y1 + (1 - i)*y2", &s))];
    for (w, target) in targets {
        let (_, e) = h
            .forward
            .iter()
            .find(|(z, _)| h.signature.weight(z) == w)
            .ok_or_else(|| format!("no coordinate of weight {w}"))?;
        let (m, c) = e.numer().terms().next().unwrap();
        let (_, tc) = target.numer().terms().find(|(tm, _)| *tm == m).ok_or("monomial mismatch")?;
        let ratio = c.checked_mul(&tc.inv().unwrap()).unwrap();
        ensure(*e == target.scale(&ratio).unwrap(), || format!("weight {w}: {e}"))?;
    }
    let printed = verify_c_action(&mixing("x/conj(x)")).unwrap();
    let Verdict::Violation { law, coordinate, .. } = printed else {
        return Err("printed variant passes".into());
    };
    Ok(format!("{ranks} standard signatures nice; printed variant fails the {law} law at {coordinate}"))
}

fn monomials(vars: &[Var], d: u32) -> Vec<Polynomial> {
    let mut out = vec![Polynomial::one()];
    for v in vars {
        let cap = if v.is_odd() { 1 } else { d };
        let mut next = Vec::new();
        for m in &out {
            for e in 0..=cap {
                let p = m * &Polynomial::var(v).pow(e).unwrap();
                let deg: u32 = p.terms().map(|(mm, _)| mm.iter().map(|(_, e)| e as u32).sum()).max().unwrap_or(0);
                if !p.is_zero() && deg <= d {
                    next.push(p);
                }
            }
        }
        out = next;
    }
    out
}

/// `h^* f = p^w f` holds exactly when `f` sits in the single weight `w`.
fn single_weight_sweep(sig: &GradedSignature, h: &ActionFamily, p: &Var, pairs: bool) -> Result<usize, String> {
    let mons = monomials(&sig.all_coordinates(), 4);
    let mut n = 0;
    for (k, a) in mons.iter().enumerate() {
        let partners: Vec<Option<&Polynomial>> = if pairs {
            std::iter::once(None).chain(mons[k + 1..].iter().map(Some)).collect()
        } else {
            vec![None]
        };
        for b in partners {
            let f = match b {
                Some(b) => a + b,
                None => a.clone(),
            };
            let fr = RationalExpr::from(f.clone());
            let pulled = h.pull_back(&fr).map_err(|e| e.to_string())?;
            let parts = f.weight_decompose(sig.weight_fn());
            let holo = !f.contains_var(|v| v.is_conj());
            for w in 0..=12u32 {
                let pw = RationalExpr::from(Polynomial::var(p).pow(w).unwrap());
                let homogeneous = pulled == fr.checked_mul(&pw).unwrap();
                let concentrated = holo && parts.len() == 1 && parts.contains_key(&(w as i64));
                ensure(homogeneous == concentrated, || format!("{f} at weight {w}"))?;
            }
            n += 1;
        }
    }
    Ok(n)
}

fn super_suite() -> Check {
    let t = Var::param("t");
    let (x, th) = (Var::base("x"), Var::odd("theta", VarKind::Base));
    let t2 = super_tangent_signature(&[x.clone(), th.clone()], 2).map_err(|e| e.to_string())?;
    let hom = standard_homothety(&t2, &t);
    ensure(verify_super_action(&hom).unwrap().is_ok(), || "T²R^{1|1} homothety fails".into())?;
    let xp = Polynomial::var(&x);
    let phi = BTreeMap::from([
        (x.clone(), xp.clone()),
        (th.clone(), &Polynomial::var(&th) * &(&Polynomial::one() + &xp)),
    ]);
    let lift = super_tk_lift(&phi, &[x, th], 2).map_err(|e| e.to_string())?;
    let lift: BTreeMap<Var, RationalExpr> = lift.into_iter().map(|(k, v)| (k, RationalExpr::from(v))).collect();
    ensure(super_morphism_check(&lift, &t2, &t2).unwrap().is_ok(), || "lift is not a morphism".into())?;

    let odd_sig = |d: &[(&str, bool, u32)]| {
        GradedSignature::new(
            d.iter()
                .map(|(n, odd, w)| {
                    let kind = if *w == 0 { VarKind::Base } else { VarKind::Fiber };
                    let var = if *odd { Var::odd(n, kind) } else { Var::new(n, monact_core::algebra::Parity::Even, kind) };
                    VarDecl { var, weight: *w }
                })
                .collect(),
        )
        .unwrap()
    };
    let fixtures = [
        (t2.clone(), vec![]),
        (
            odd_sig(&[("u", false, 2), ("th1", true, 1), ("th2", true, 2)]),
            vec![("u", "t^2*u + (t^3 - t^2)*th1*th2"), ("th1", "t*th1"), ("th2", "t^2*th2")],
        ),
        (
            odd_sig(&[("y", false, 2), ("th1", true, 1), ("eta", true, 2)]),
            vec![("y", "t^2*y"), ("th1", "t*th1"), ("eta", "t^2*eta + (t^3 - t^2)*y*th1")],
        ),
    ];
    for (sig, src) in &fixtures {
        let s = syms(sig.vars().cloned(), &["t"], false);
        let mut comps = standard_homothety(sig, &t).components;
        for (v, e) in src {
            comps.insert(sig.get(v).unwrap().var.clone(), expr(e, &s));
        }
        let fam = ActionFamily::new(Monoid::Reals, vec![t.clone()], comps).unwrap();
        let h = super_homogenize(sig, &fam).map_err(|e| e.to_string())?;
        for (z, f) in &h.forward {
            let w = h.signature.weight(z) as u32;
            let tw = RationalExpr::from(Polynomial::var(&t).pow(w).unwrap());
            ensure(fam.pull_back(f).unwrap() == f.checked_mul(&tw).unwrap(), || format!("{z} = {f} not of weight {w}"))?;
        }
    }

    let mut checked = 0;
    let real_sigs: [&[(&str, u32)]; 5] = [&[("y", 1), ("z", 2)], &[("y", 1), ("z", 3)], &[("y", 2), ("z", 3)], &[("y1", 1), ("y2", 1), ("z", 3)], &[("y", 1), ("z", 2), ("w", 3)]];
    for fibers in real_sigs {
        let sig = GradedSignature::simple(&["x"], fibers);
        checked += single_weight_sweep(&sig, &standard_homothety(&sig, &t), &t, true)?;
    }
    let xi = Var::param("xi");
    for weights in [vec![1u32], vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 2, 3]] {
        let sig = complex_sig(&weights);
        checked += single_weight_sweep(&sig, &standard_homothety(&sig, &xi), &xi, weights.len() < 2)?;
    }
    let super_sigs = [
        odd_sig(&[("x", false, 0), ("eta", true, 0), ("y", false, 2), ("th1", true, 1), ("th2", true, 2)]),
        odd_sig(&[("y", false, 1), ("th", true, 1), ("z", false, 3), ("eta", true, 3)]),
    ];
    for sig in &super_sigs {
        checked += single_weight_sweep(sig, &standard_homothety(sig, &t), &t, true)?;
    }
    Ok(format!("3 homogenizations exact; {checked} functions swept with 0 exceptions"))
}

fn fixtures_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn cli_determinism() -> Check {
    let exe = env!("CARGO_BIN_EXE_monact");
    let mut files = Vec::new();
    for (dir, code) in [("ok", 0), ("violations", 1), ("invalid", 2)] {
        let mut entries: Vec<PathBuf> = std::fs::read_dir(fixtures_root().join(dir))
            .map_err(|e| e.to_string())?
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        entries.sort();
        files.extend(entries.into_iter().map(|p| (p, code)));
    }
    let tmp = std::env::temp_dir().join(format!("monact-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&tmp).map_err(|e| e.to_string())?;
    let mut runs: Vec<Vec<u8>> = Vec::new();
    for run in 0..3 {
        let mut bytes = Vec::new();
        for (path, code) in &files {
            let side = tmp.join("records.jsonl");
            let mut cmd = Command::new(exe);
            cmd.arg("run").arg(path).arg("--machine-output").arg(&side);
            if run == 2 {
                cmd.arg("--parallel");
            }
            let out = cmd.output().map_err(|e| e.to_string())?;
            let got = out.status.code();
            ensure(got == Some(*code), || format!("{}: exit {got:?}, expected {code}", path.display()))?;
            bytes.extend_from_slice(&out.stdout);
            bytes.extend_from_slice(&out.stderr);
            if *code != 2 {
                bytes.extend(std::fs::read(&side).map_err(|e| e.to_string())?);
                std::fs::remove_file(&side).ok();
            }
        }
        runs.push(bytes);
    }
    std::fs::remove_dir_all(&tmp).ok();
    ensure(runs.windows(2).all(|w| w[0] == w[1]), || "reports differ between runs".into())?;
    Ok(format!("{} fixtures, 3 runs byte-identical ({} bytes)", files.len(), runs[0].len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("G2 product law and associativity", g2_product_and_associativity),
        ("Weil endomorphisms reverse the order", weil_opposite_order),
        ("T2 fixture and its infinitesimal pair", t2_fixture),
        ("T2* fixture as a left action", t2star_fixture),
        ("degree 3 criterion and flows", degree_three_criterion),
        ("left G2 actions from bullet products", bullet_checks),
        ("M2 double weight example", m2_example),
        ("homogenizer round trip", homogenizer_round_trip),
        ("complex niceness", complex_niceness),
        ("super suite", super_suite),
        ("CLI determinism and exit codes", cli_determinism),
    ];
    let mut failed = 0;
    for (n, (title, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS criterion {}: {title}: {detail} [{secs:.2}s]", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {title}: {why} [{secs:.2}s]", n + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

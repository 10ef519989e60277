use std::collections::BTreeMap;

use monact_core::algebra::{parse_expr, rat, Polynomial, RationalExpr, Symbols, Var};
use monact_core::g2::{
    criterion_deg_le3, extendable_to_zero, infinitesimal_pair, right_family, BulletProduct,
    Extendability, WeightMinusOneField,
};
use monact_core::graded::{
    field_weight, flow_nilpotent, lie_bracket, standard_weight_field, verify_action,
    GradedSignature, VectorField,
};

fn deg3() -> GradedSignature {
    GradedSignature::simple(&[], &[("y1", 1), ("y2", 2), ("y3", 3)])
}

fn block_field(f: i64, g: i64, h: i64, i: i64) -> WeightMinusOneField {
    let sig = deg3();
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
    .to_field()
    .map(|x| WeightMinusOneField::from_field(&sig, &x).unwrap())
    .unwrap()
}

fn ab() -> (Var, Var) {
    (Var::param("a"), Var::param("b"))
}

#[test]
fn sweep_of_81_degree_three_fields() {
    let sig = deg3();
    let (a, b) = ab();
    let vals = [-1, 0, 1];
    let mut agree = 0;
    for f in vals {
        for g in vals {
            for h in vals {
                for i in vals {
                    let blocks = block_field(f, g, h, i);
                    let x = blocks.to_field().unwrap();
                    let fam = right_family(&sig, &x, &a, &b).unwrap();
                    assert!(verify_action(&fam).unwrap().is_ok(), "{f} {g} {h} {i}");
                    let ext = extendable_to_zero(&sig, &fam, &a).is_ok();
                    assert_eq!(criterion_deg_le3(&blocks).unwrap(), ext, "F={f} G={g} H={h} I={i}");
                    agree += 1;
                }
            }
        }
    }
    assert_eq!(agree, 81);
}

#[test]
fn f_nonzero_blocks_at_y1() {
    let sig = deg3();
    let (a, b) = ab();
    let x = block_field(1, 0, 0, 0).to_field().unwrap();
    let fam = right_family(&sig, &x, &a, &b).unwrap();
    let mut syms = Symbols::from_vars(sig.vars(), false);
    syms.insert(a.clone());
    syms.insert(b.clone());
    assert_eq!(
        fam.component(&Var::fiber("y1")).unwrap(),
        &parse_expr("a*y1 + b*a^-1", &syms).unwrap()
    );
    match extendable_to_zero(&sig, &fam, &a) {
        Extendability::Blocked { coordinate, exponent, .. } => {
            assert_eq!(coordinate, Var::fiber("y1"));
            assert_eq!(exponent, -1);
        }
        Extendability::Ok(_) => panic!("expected a block"),
    }
}

#[test]
fn contraction_blocks_at_y3() {
    let sig = deg3();
    let (a, b) = ab();
    let blocks = block_field(0, 1, 1, 0);
    assert!(!criterion_deg_le3(&blocks).unwrap());
    let fam = right_family(&sig, &blocks.to_field().unwrap(), &a, &b).unwrap();
    match extendable_to_zero(&sig, &fam, &a) {
        Extendability::Blocked { coordinate, exponent, .. } => {
            assert_eq!(coordinate, Var::fiber("y3"));
            assert_eq!(exponent, -1);
        }
        Extendability::Ok(_) => panic!("expected a block"),
    }
}

#[test]
fn degree_three_flow_formulas() {
    let sig = deg3();
    let s = Var::param("s");
    let x = block_field(1, 1, 1, 1).to_field().unwrap();
    let flow = flow_nilpotent(&x, &sig, &s).unwrap();
    let mut syms = Symbols::from_vars(sig.vars(), false);
    syms.insert(s.clone());
    let expect = [
        ("y1", "y1 + s"),
        ("y2", "y2 + s*y1 + s^2/2"),
        ("y3", "y3 + s*(y2 + y1^2/2) + s^2/2*(1 + 1)*y1 + s^3/6*(1 + 1)"),
    ];
    for (n, e) in expect {
        assert_eq!(flow.component(&Var::fiber(n)).unwrap(), &parse_expr(e, &syms).unwrap(), "{n}");
    }
}

#[test]
fn flow_group_law() {
    let sig = deg3();
    for (f, g, h, i) in [(1, 1, 1, 1), (0, -1, 1, 1), (1, 0, -1, 0), (0, 0, 0, 0)] {
        let x = block_field(f, g, h, i).to_field().unwrap();
        let (s, u) = (Var::param("s"), Var::param("u"));
        let fs = flow_nilpotent(&x, &sig, &s).unwrap();
        let fu = flow_nilpotent(&x, &sig, &u).unwrap();
        let sum = BTreeMap::from([(s.clone(), &Polynomial::var(&s) + &Polynomial::var(&u))]);
        for (v, c) in &fs.components {
            let lhs = c.substitute(&fu.components).unwrap();
            assert_eq!(lhs, c.substitute_poly(&sum).unwrap(), "{v}");
        }
        assert!(verify_action(&fs).unwrap().is_ok());
    }
}

#[test]
fn zero_field_gives_homothety() {
    let sig = deg3();
    let (a, b) = ab();
    let fam = right_family(&sig, &VectorField::zero(), &a, &b).unwrap();
    assert_eq!(fam.component(&Var::fiber("y3")).unwrap().to_string(), "a^3*y3");
    assert!(criterion_deg_le3(&block_field(0, 0, 0, 0)).unwrap());
}

#[test]
fn infinitesimal_round_trip() {
    let sig = deg3();
    let (a, b) = ab();
    for (f, g, h, i) in [(0, 1, 0, 1), (1, 1, 1, 1), (0, -1, 0, 0)] {
        let x = block_field(f, g, h, i).to_field().unwrap();
        let fam = right_family(&sig, &x, &a, &b).unwrap();
        let (delta, xx) = infinitesimal_pair(&fam).unwrap();
        assert_eq!(delta, standard_weight_field(&sig));
        assert_eq!(xx, x);
        let br = lie_bracket(&delta, &xx);
        assert_eq!(br, xx.scale(&monact_core::algebra::Scalar::int(-1)));
        if !xx.is_zero() {
            assert_eq!(field_weight(&xx, &delta), Some(-1));
        }
    }
}

#[test]
fn left_bullet_action_is_affine_in_b() {
    let z = rat(0, 1);
    let o = rat(1, 1);
    let bullet = BulletProduct::new(vec![
        vec![vec![z.clone(), z.clone()], vec![z.clone(), z.clone()]],
        vec![vec![o, z.clone()], vec![z.clone(), z]],
    ])
    .unwrap();
    let (a, b) = ab();
    let fam = monact_core::g2::left_family_from_bullet(&bullet, &a, &b).unwrap();
    let (delta, y) = infinitesimal_pair(&fam).unwrap();
    assert_eq!(lie_bracket(&delta, &y), y);
    let one = BTreeMap::from([(a.clone(), Polynomial::one())]);
    for c in fam.components.values() {
        let at_one = c.substitute_poly(&one).unwrap();
        assert!(at_one.max_exponent(&b).unwrap_or(0) <= 1);
    }
}

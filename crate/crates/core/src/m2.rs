//! Actions of the matrix monoid `M_2(R)`: the embedding of `G_2`, the
//! second-order `(1,1)`-velocities, and the double grading they induce.

use std::collections::BTreeMap;

use num_traits::One;

use crate::algebra::{Polynomial, Rational, RationalExpr, Scalar, Var, VarKind};
use crate::error::{Error, Result};
use crate::graded::field::derivative_at;
use crate::graded::{
    field_weight, lie_bracket, ActionFamily, GradedSignature, Monoid, Side, VarDecl, VectorField,
};
use crate::jet::JetElement;

pub type Matrix2 = [[Rational; 2]; 2];

/// `(a, b) ↦ [[a, b], [0, a²]]`.
pub fn m2_embed(j: &JetElement) -> Result<Matrix2> {
    if j.order() != 2 {
        return Err(Error::OrderMismatch(j.order(), 2));
    }
    let (a, b) = (j.coeffs()[0].clone(), j.coeffs()[1].clone());
    let z = Rational::from_integer(0.into());
    Ok([[a.clone(), b], [z, &a * &a]])
}

pub fn m2_mul(x: &Matrix2, y: &Matrix2) -> Matrix2 {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Variables with a pair of weights.
#[derive(Clone, Debug, PartialEq)]
pub struct BiGradedSignature {
    decls: Vec<(Var, (u32, u32))>,
}

impl BiGradedSignature {
    pub fn new(decls: Vec<(Var, (u32, u32))>) -> Result<Self> {
        let s = BiGradedSignature { decls };
        s.projection(0)?;
        s.projection(1)?;
        Ok(s)
    }

    pub fn decls(&self) -> &[(Var, (u32, u32))] {
        &self.decls
    }

    /// The graded signature of the `i`-th weight; coordinates of weight 0
    /// there become base coordinates.
    pub fn projection(&self, i: usize) -> Result<GradedSignature> {
        let decls = self
            .decls
            .iter()
            .map(|(v, w)| {
                let weight = if i == 0 { w.0 } else { w.1 };
                let kind = if weight == 0 { VarKind::Base } else { VarKind::Fiber };
                VarDecl {
                    var: v.with_kind(kind),
                    weight,
                }
            })
            .collect();
        GradedSignature::new(decls)
    }

    pub fn total(&self) -> Result<GradedSignature> {
        GradedSignature::new(
            self.decls
                .iter()
                .map(|(v, w)| VarDecl {
                    var: v.clone(),
                    weight: w.0 + w.1,
                })
                .collect(),
        )
    }
}

fn velocity_name(j: usize, m: usize, p: usize, q: usize) -> String {
    if m == 1 {
        format!("x{p}{q}")
    } else {
        format!("x{j}_{p}{q}")
    }
}

const ORDERS: [(usize, usize); 6] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];

/// Coordinates `x_{pq}` (or `x{j}_{pq}` when `m > 1`) of second jets at
/// the origin of maps `R² → R^m`, bi-graded by `(p, q)`.
pub fn j2_velocities_signature(m: usize) -> BiGradedSignature {
    let mut decls = Vec::new();
    for &(p, q) in &ORDERS {
        for j in 1..=m {
            let name = velocity_name(j, m, p, q);
            let var = if p + q == 0 { Var::base(&name) } else { Var::fiber(&name) };
            decls.push((var, (p as u32, q as u32)));
        }
    }
    BiGradedSignature { decls }
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// The right action `[γ]·A = [γ(at + bs, ct + ds)]` on second-order
/// `(1,1)`-velocities, with parameters `a, b, c, d`.
pub fn j2_velocities_action(m: usize, params: [&Var; 4]) -> Result<ActionFamily> {
    let (t, s) = (Var::param("t__curve"), Var::param("s__curve"));
    let (tp, sp) = (Polynomial::var(&t), Polynomial::var(&s));
    let [a, b, c, d] = params.map(Polynomial::var);
    let sub = BTreeMap::from([
        (t.clone(), &(&a * &tp) + &(&b * &sp)),
        (s.clone(), &(&c * &tp) + &(&d * &sp)),
    ]);
    let mut comps = BTreeMap::new();
    for j in 1..=m {
        let mut gamma = Polynomial::zero();
        for &(p, q) in &ORDERS {
            let v = Var::fiber(&velocity_name(j, m, p, q));
            let v = if p + q == 0 { Var::base(v.name()) } else { v };
            let c = Scalar::ratio(1, factorial(p) * factorial(q));
            let term = &(&tp.pow(p as u32)? * &sp.pow(q as u32)?) * &Polynomial::var(&v);
            gamma = &gamma + &term.scale(&c)?;
        }
        let moved = gamma.substitute(&sub)?;
        for &(p, q) in &ORDERS {
            let name = velocity_name(j, m, p, q);
            let v = if p + q == 0 { Var::base(&name) } else { Var::fiber(&name) };
            let coeff = moved.coeff_extract(&t, p as i32).coeff_extract(&s, q as i32);
            let coeff = coeff.scale(&Scalar::int(factorial(p) * factorial(q)))?;
            comps.insert(v, RationalExpr::from(coeff));
        }
    }
    ActionFamily::new(
        Monoid::Matrix2 { side: Side::Right },
        params.iter().map(|v| (*v).clone()).collect(),
        comps,
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct DoubleWeightReport {
    pub delta1: VectorField,
    pub delta2: VectorField,
    pub x: VectorField,
    pub y: VectorField,
    /// Computed brackets, in the order `[Δ1,Δ2], [Δ1,X], [Δ2,X], [Δ1,Y], [Δ2,Y], [X,Y]`.
    pub brackets: Vec<(String, VectorField)>,
    /// `w` with `[Δi, X] = w X` and `[Δi, Y] = w Y`, as computed.
    pub x_weight: (Option<i64>, Option<i64>),
    pub y_weight: (Option<i64>, Option<i64>),
    /// `[X, Y] - (Δ1 - Δ2)`.
    pub xy_residual: VectorField,
}

/// `Δ1, Δ2` from the diagonal subgroups and `X, Y` from the two unipotent
/// ones, all differentiated at the identity.
pub fn double_weight_analysis(fam: &ActionFamily) -> Result<DoubleWeightReport> {
    if !matches!(fam.monoid, Monoid::Matrix2 { .. }) {
        return Err(Error::Unsupported(format!("{} is not M2", fam.monoid)));
    }
    let id = fam.monoid.identity();
    let delta1 = derivative_at(fam, 0, &id)?;
    let x = derivative_at(fam, 1, &id)?;
    let y = derivative_at(fam, 2, &id)?;
    let delta2 = derivative_at(fam, 3, &id)?;
    let pairs = [
        ("[D1,D2]", &delta1, &delta2),
        ("[D1,X]", &delta1, &x),
        ("[D2,X]", &delta2, &x),
        ("[D1,Y]", &delta1, &y),
        ("[D2,Y]", &delta2, &y),
        ("[X,Y]", &x, &y),
    ];
    let brackets: Vec<(String, VectorField)> = pairs
        .iter()
        .map(|(n, p, q)| (n.to_string(), lie_bracket(p, q)))
        .collect();
    let xy_residual = brackets[5].1.sub(&delta1.sub(&delta2));
    Ok(DoubleWeightReport {
        x_weight: (field_weight(&x, &delta1), field_weight(&x, &delta2)),
        y_weight: (field_weight(&y, &delta1), field_weight(&y, &delta2)),
        delta1,
        delta2,
        x,
        y,
        brackets,
        xy_residual,
    })
}

/// Restriction along the embedding `(a, b) ↦ [[a, b], [0, a²]]`.
pub fn restrict_to_g2(fam: &ActionFamily, a: &Var, b: &Var) -> Result<ActionFamily> {
    if !matches!(fam.monoid, Monoid::Matrix2 { .. }) {
        return Err(Error::Unsupported(format!("{} is not M2", fam.monoid)));
    }
    let (ap, bp) = (Polynomial::var(a), Polynomial::var(b));
    let comps = fam.at_params(&[ap.clone(), bp, Polynomial::zero(), &ap * &ap])?;
    ActionFamily::new(
        Monoid::Jets {
            order: 2,
            side: fam.monoid.side(),
        },
        vec![a.clone(), b.clone()],
        comps,
    )
}

/// The identity matrix.
pub fn m2_identity() -> Matrix2 {
    let (o, z) = (Rational::one(), Rational::from_integer(0.into()));
    [[o.clone(), z.clone()], [z, o]]
}

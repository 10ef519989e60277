//! Super graded spaces: `(R, ·)` actions on coordinates of both parities,
//! reduction modulo the ideal `J` generated by odd coordinates, and the
//! `f^[w]` homogenizer.

use std::collections::BTreeMap;

use num_traits::One;

use crate::algebra::matrix::{self, Matrix};
use crate::algebra::{Parity, Polynomial, Rational, RationalExpr, Scalar, Var, VarKind};
use crate::error::{Error, Result};
use crate::graded::{
    check_morphism, homogenize_real, verify_action, ActionFamily, GradedSignature, Monoid,
    MorphismReport, VarDecl, Verdict,
};

const EVEN_SUFFIX: &str = "__Y";

/// Parity check plus the action laws.
pub fn verify_super_action(fam: &ActionFamily) -> Result<Verdict> {
    if !matches!(fam.monoid, Monoid::Reals) {
        return Err(Error::Unsupported(format!("{} is not (R, ·)", fam.monoid)));
    }
    for (v, c) in &fam.components {
        if !c.is_zero() && c.parity() != Some(v.parity()) {
            return Err(Error::ParityViolation(format!("component of {v} is {c}")));
        }
    }
    verify_action(fam)
}

fn even_stand_in(v: &Var) -> Var {
    Var::new(&format!("{}{EVEN_SUFFIX}", v.name()), Parity::Even, v.kind())
}

fn odd_original(v: &Var) -> Option<Var> {
    if !v.name().contains(EVEN_SUFFIX) {
        return None;
    }
    Some(Var::new(
        &v.name().replacen(EVEN_SUFFIX, "", 1),
        Parity::Odd,
        v.kind(),
    ))
}

#[derive(Clone, Debug)]
pub struct BodyReduction {
    /// Even coordinates only.
    pub body_signature: GradedSignature,
    /// The action modulo `J`.
    pub body: ActionFamily,
    /// `α[A][B]`: coefficient of `ξ^B` in `h_t^* ξ^A` modulo `J²`.
    pub alpha: Matrix,
    pub odd: Vec<Var>,
    /// Body coordinates plus even stand-ins `Y^A`, with `Y^A ↦ α^A_B Y^B`.
    pub even_model_signature: GradedSignature,
    pub even_model: ActionFamily,
    /// Whether `α` is multiplicative, i.e. the even model is an action.
    pub alpha_verdict: Verdict,
}

pub fn body_reduce(sig: &GradedSignature, fam: &ActionFamily) -> Result<BodyReduction> {
    let body_signature = sig.restrict(|d| d.var.parity() == Parity::Even);
    let mut body_comps = BTreeMap::new();
    for v in body_signature.vars() {
        if let Some(c) = fam.component(v) {
            body_comps.insert(v.clone(), c.mod_odd_power(1));
        }
    }
    let body = ActionFamily::new(fam.monoid.clone(), fam.params.clone(), body_comps.clone())?;
    let odd: Vec<Var> = sig.vars().filter(|v| v.is_odd()).cloned().collect();
    let mut alpha = Vec::new();
    let mut model_comps = body_comps;
    for a in &odd {
        let c = fam
            .component(a)
            .cloned()
            .unwrap_or_else(|| RationalExpr::var(a))
            .mod_odd_power(2);
        let mut row = Vec::new();
        let mut image = RationalExpr::zero();
        for b in &odd {
            let e = c.derivative(b)?.mod_odd_power(1);
            image = image.checked_add(&e.checked_mul(&RationalExpr::var(&even_stand_in(b)))?)?;
            row.push(e);
        }
        alpha.push(row);
        model_comps.insert(even_stand_in(a), image);
    }
    let mut decls = body_signature.decls().to_vec();
    decls.extend(sig.decls().iter().filter(|d| d.var.is_odd()).map(|d| VarDecl {
        var: even_stand_in(&d.var),
        weight: d.weight,
    }));
    let even_model_signature = GradedSignature::new(decls)?;
    let even_model = ActionFamily::new(fam.monoid.clone(), fam.params.clone(), model_comps)?;
    let alpha_verdict = verify_action(&even_model)?;
    Ok(BodyReduction {
        body_signature,
        body,
        alpha,
        odd,
        even_model_signature,
        even_model,
        alpha_verdict,
    })
}

/// Requires `h_t^* y = t^w y` mod `J` for even and `h_t^* ξ = t^w ξ` mod `J²`
/// for odd coordinates, with `w` the declared weight.
pub fn check_normal_form(sig: &GradedSignature, fam: &ActionFamily) -> Result<()> {
    let t = fam.param();
    for d in sig.decls() {
        let v = &d.var;
        let Some(c) = fam.component(v) else { continue };
        let k = if v.is_odd() { 2 } else { 1 };
        let reduced = c.mod_odd_power(k);
        let expect = RationalExpr::from(&Polynomial::var(t).pow(d.weight)? * &Polynomial::var(v));
        if reduced != expect {
            return Err(Error::NotNormalForm {
                coordinate: v.to_string(),
                detail: format!("{reduced} modulo J^{k}, expected {expect}"),
            });
        }
    }
    Ok(())
}

/// Swaps each even stand-in for its odd coordinate in an expression linear
/// in the stand-ins.
fn replace_stand_ins(e: &RationalExpr, map: &BTreeMap<Var, Var>) -> Result<RationalExpr> {
    let mut out = RationalExpr::zero();
    for (m, c) in e.split_by(|v| map.contains_key(v)) {
        let mut vars = m.vars();
        let term = match (vars.next(), vars.next()) {
            (None, _) => c,
            (Some(y), None) if m.exponent(y) == 1 => c.checked_mul(&RationalExpr::var(&map[y]))?,
            _ => return Err(Error::Unsupported(format!("{e} is not linear in the odd stand-ins"))),
        };
        out = out.checked_add(&term)?;
    }
    Ok(out)
}

/// `f^[w] = [t^w] h_t^* f`.
pub fn weight_extract(fam: &ActionFamily, f: &RationalExpr, w: u32) -> Result<RationalExpr> {
    Ok(fam.pull_back(f)?.coeff_extract(fam.param(), w as i32))
}

#[derive(Clone, Debug)]
pub struct SuperHomogenization {
    pub signature: GradedSignature,
    /// New coordinate ↦ expression in the old coordinates.
    pub forward: BTreeMap<Var, RationalExpr>,
    /// Determinants of the even and odd linear blocks over the body; where
    /// they vanish the chart does not extend.
    pub even_det: RationalExpr,
    pub odd_det: RationalExpr,
}

impl SuperHomogenization {
    pub fn is_identity(&self) -> bool {
        self.forward.iter().all(|(v, e)| *e == RationalExpr::var(v))
    }

    /// The non-constant determinants, i.e. the locus to exclude.
    pub fn singular_locus(&self) -> Vec<RationalExpr> {
        [&self.even_det, &self.odd_det]
            .into_iter()
            .filter(|d| d.as_constant().is_none())
            .cloned()
            .collect()
    }
}

/// Graded coordinates for a super action: the even model (body plus `α`)
/// is homogenized first, and each candidate `f` of weight `w` is replaced by
/// `f^[w]`.
pub fn super_homogenize(sig: &GradedSignature, fam: &ActionFamily) -> Result<SuperHomogenization> {
    if let Verdict::Violation { law, coordinate, residual } = verify_super_action(fam)? {
        return Err(Error::NotAnAction(format!("{law} law fails at {coordinate}: {residual}")));
    }
    let red = body_reduce(sig, fam)?;
    if let Verdict::Violation { coordinate, residual, .. } = &red.alpha_verdict {
        return Err(Error::NotAnAction(format!(
            "odd linear part is not multiplicative at {coordinate}: {residual}"
        )));
    }
    let model = homogenize_real(&red.even_model_signature, &red.even_model)?;
    // Candidates are linear in the stand-ins, so renaming back is exact.
    let stand_ins: BTreeMap<Var, Var> = red
        .odd
        .iter()
        .map(|a| (even_stand_in(a), a.clone()))
        .collect();
    let mut decls = Vec::new();
    let mut forward = BTreeMap::new();
    for d in model.signature.decls() {
        let (var, candidate) = match odd_original(&d.var) {
            Some(o) => {
                let e = model.forward.get(&d.var).cloned().unwrap_or_else(|| RationalExpr::var(&d.var));
                (o, replace_stand_ins(&e, &stand_ins)?)
            }
            None => {
                let e = model.forward.get(&d.var).cloned().unwrap_or_else(|| RationalExpr::var(&d.var));
                (d.var.clone(), e)
            }
        };
        decls.push(VarDecl {
            var: var.clone(),
            weight: d.weight,
        });
        if var.kind() == VarKind::Base && !var.is_odd() {
            continue;
        }
        let z = weight_extract(fam, &candidate, d.weight)?;
        let homogeneous = fam.pull_back(&z)?
            == z.checked_mul(&RationalExpr::from(Polynomial::var(fam.param()).pow(d.weight)?))?;
        if !homogeneous {
            return Err(Error::InversionFailed(format!("{var}^[{}] = {z} is not homogeneous", d.weight)));
        }
        if z.parity().is_some_and(|p| p != var.parity()) {
            return Err(Error::ParityViolation(format!("{var} became {z}")));
        }
        forward.insert(var, z);
    }
    let signature = GradedSignature::new(decls)?;
    let old_even: Vec<Var> = sig.vars().filter(|v| !v.is_odd() && v.kind() == VarKind::Fiber).cloned().collect();
    let new_even: Vec<Var> = signature
        .vars()
        .filter(|v| !v.is_odd() && v.kind() == VarKind::Fiber)
        .cloned()
        .collect();
    let new_odd: Vec<Var> = signature.vars().filter(|v| v.is_odd()).cloned().collect();
    let even_det = block_det(&forward, &new_even, &old_even, &red.odd)?;
    let odd_det = block_det(&forward, &new_odd, &red.odd, &red.odd)?;
    for (name, det) in [("even", &even_det), ("odd", &odd_det)] {
        if det.is_zero() {
            return Err(Error::SingularBlock(format!("{name} block of the coordinate change")));
        }
    }
    Ok(SuperHomogenization {
        signature,
        forward,
        even_det,
        odd_det,
    })
}

/// `det ∂(new)/∂(old)` with odd coordinates set to zero.
fn block_det(
    forward: &BTreeMap<Var, RationalExpr>,
    new: &[Var],
    old: &[Var],
    odd: &[Var],
) -> Result<RationalExpr> {
    let body: BTreeMap<Var, RationalExpr> = odd.iter().map(|v| (v.clone(), RationalExpr::zero())).collect();
    let rows = new
        .iter()
        .map(|z| {
            old.iter()
                .map(|y| forward[z].derivative(y)?.substitute(&body))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Matrix>>()?;
    if rows.len() != old.len() {
        return Err(Error::SingularBlock(format!(
            "{} new coordinates for {} old ones",
            rows.len(),
            old.len()
        )));
    }
    matrix::determinant(&rows)
}

/// A map is a morphism of super graded spaces iff every component is
/// homogeneous in weight and parity.
pub fn super_morphism_check(
    phi: &BTreeMap<Var, RationalExpr>,
    src: &GradedSignature,
    dst: &GradedSignature,
) -> Result<MorphismReport> {
    check_morphism(phi, src, dst)
}

/// `T^k` of a superdomain with base coordinates of either parity: `x`,
/// `dx`, `ddx`, ... carry the parity of `x` and weights `0, 1, 2, ...`.
pub fn super_tangent_signature(bases: &[Var], k: usize) -> Result<GradedSignature> {
    let mut decls = Vec::new();
    for alpha in 0..=k {
        for b in bases {
            decls.push(VarDecl {
                var: super_adapted(b, alpha),
                weight: alpha as u32,
            });
        }
    }
    GradedSignature::new(decls)
}

fn super_adapted(b: &Var, alpha: usize) -> Var {
    let kind = if alpha == 0 { VarKind::Base } else { VarKind::Fiber };
    Var::new(&format!("{}{}", "d".repeat(alpha), b.name()), b.parity(), kind)
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, j| acc * Rational::from_integer(j.into()))
}

/// `T^k φ` by the chain rule along a formal curve; `φ` maps target base
/// coordinates to polynomials in the source base coordinates.
pub fn super_tk_lift(
    phi: &BTreeMap<Var, Polynomial>,
    src: &[Var],
    k: usize,
) -> Result<BTreeMap<Var, Polynomial>> {
    let tau = Var::param("tau__curve");
    let tp = Polynomial::var(&tau);
    let mut curve = BTreeMap::new();
    for b in src {
        let mut acc = Polynomial::zero();
        for alpha in 0..=k {
            let c = Scalar::from(factorial(alpha).recip());
            let term = (&tp.pow(alpha as u32)? * &Polynomial::var(&super_adapted(b, alpha))).scale(&c)?;
            acc = &acc + &term;
        }
        curve.insert(b.clone(), acc);
    }
    let mut out = BTreeMap::new();
    for (target, f) in phi {
        let along = f.substitute(&curve)?;
        for alpha in 0..=k {
            let p = along
                .coeff_extract(&tau, alpha as i32)
                .scale(&Scalar::from(factorial(alpha)))?;
            out.insert(super_adapted(target, alpha), p);
        }
    }
    Ok(out)
}

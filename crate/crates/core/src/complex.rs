//! Complex graded spaces: `(C, ·)` actions given as polynomials in the
//! formal pair `(ξ, conj(ξ))`, holomorphy, niceness and Fourier weight
//! projection.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::matrix;
use crate::algebra::{cyclo_eval, Polynomial, RationalExpr, Scalar, Var, VarKind};
use crate::error::{Error, Result};
use crate::graded::{
    homogenize_real, tower_truncate, verify_action, ActionFamily, GradedSignature, Law, Monoid,
    VarDecl, Verdict,
};

const BAR: &str = "__bar";

/// A `(C, ·)` family from the components of the declared coordinates;
/// conjugate coordinates receive the conjugated components.
pub fn complex_family(
    xi: &Var,
    comps: BTreeMap<Var, RationalExpr>,
) -> Result<ActionFamily> {
    let mut all = comps.clone();
    for (v, c) in &comps {
        all.entry(v.conjugate()).or_insert_with(|| c.conjugate());
    }
    ActionFamily::new(Monoid::Complexes, vec![xi.clone(), xi.conjugate()], all)
}

/// The action laws for `ξ ↦ h_ξ`, plus reality: the component of
/// `conj(y)` is the conjugate of the component of `y`.
pub fn verify_c_action(fam: &ActionFamily) -> Result<Verdict> {
    if !matches!(fam.monoid, Monoid::Complexes) {
        return Err(Error::Unsupported(format!("{} is not (C, ·)", fam.monoid)));
    }
    for (v, c) in &fam.components {
        if v.is_conj() {
            continue;
        }
        if let Some(cc) = fam.component(&v.conjugate()) {
            let r = cc.checked_sub(&c.conjugate())?;
            if !r.is_zero() {
                return Ok(Verdict::Violation {
                    law: Law::Reality,
                    coordinate: v.conjugate(),
                    residual: r,
                });
            }
        }
    }
    verify_action(fam)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Holomorphy {
    Holomorphic,
    NotHolomorphic { coordinate: Var, witness: Polynomial },
}

impl Holomorphy {
    pub fn is_holomorphic(&self) -> bool {
        matches!(self, Holomorphy::Holomorphic)
    }
}

/// Holomorphic iff no component of an unconjugated coordinate involves a
/// conjugated variable or `conj(ξ)`.
pub fn is_holomorphic(fam: &ActionFamily) -> Holomorphy {
    for (v, c) in &fam.components {
        if v.is_conj() {
            continue;
        }
        for part in [c.numer(), c.denom()] {
            if let Some((m, k)) = part.terms().find(|(m, _)| m.vars().any(Var::is_conj)) {
                return Holomorphy::NotHolomorphic {
                    coordinate: v.clone(),
                    witness: Polynomial::term(k.clone(), m.clone()),
                };
            }
        }
    }
    Holomorphy::Holomorphic
}

fn to_real(v: &Var) -> Var {
    if v.is_conj() && !v.is_param() {
        v.conjugate().renamed(&format!("{}{BAR}", v.name()))
    } else {
        v.clone()
    }
}

fn from_real(v: &Var) -> Var {
    if v.is_param() || !v.name().contains(BAR) {
        return v.clone();
    }
    v.renamed(&v.name().replacen(BAR, "", 1)).conjugate()
}

fn realify(e: &RationalExpr) -> RationalExpr {
    let map: BTreeMap<Var, Var> = e.variables().iter().map(|v| (v.clone(), to_real(v))).collect();
    e.rename(&map)
}

fn complexify(e: &RationalExpr) -> RationalExpr {
    let map: BTreeMap<Var, Var> = e.variables().iter().map(|v| (v.clone(), from_real(v))).collect();
    e.rename(&map)
}

/// `ξ = conj(ξ) = t`, with each conjugate coordinate `conj(y)` turned into
/// an independent real coordinate `y__bar`.
pub fn real_restriction(
    sig: &GradedSignature,
    fam: &ActionFamily,
    t: &Var,
) -> Result<(GradedSignature, ActionFamily)> {
    let mut decls = sig.decls().to_vec();
    decls.extend(sig.decls().iter().map(|d| VarDecl {
        var: to_real(&d.var.conjugate()),
        weight: d.weight,
    }));
    let real_sig = GradedSignature::new(decls)?;
    let xi = fam.params[0].clone();
    let tp = Polynomial::var(t);
    let at_t = BTreeMap::from([(xi.clone(), tp.clone()), (xi.conjugate(), tp)]);
    let mut comps = BTreeMap::new();
    for (v, c) in &fam.components {
        comps.insert(to_real(v), realify(&c.substitute_poly(&at_t)?));
    }
    Ok((real_sig, ActionFamily::new(Monoid::Reals, vec![t.clone()], comps)?))
}

/// The family rewritten in coordinates in which its real restriction is
/// graded.
#[derive(Clone, Debug)]
pub struct ComplexChart {
    pub signature: GradedSignature,
    /// New coordinate ↦ expression in the old coordinates.
    pub forward: BTreeMap<Var, RationalExpr>,
    pub family: ActionFamily,
}

pub fn graded_chart(sig: &GradedSignature, fam: &ActionFamily) -> Result<ComplexChart> {
    let t = Var::param("t__real");
    let (real_sig, real_fam) = real_restriction(sig, fam, &t)?;
    let hom = homogenize_real(&real_sig, &real_fam)?;
    let mut decls: Vec<VarDecl> = Vec::new();
    let mut forward = BTreeMap::new();
    let mut full_forward = BTreeMap::new();
    for d in hom.signature.decls() {
        let cv = from_real(&d.var);
        let expr = match hom.forward.get(&d.var) {
            Some(e) => complexify(e),
            None => RationalExpr::var(&cv),
        };
        full_forward.insert(cv.clone(), expr.clone());
        if !cv.is_conj() {
            decls.push(VarDecl {
                var: cv.clone(),
                weight: d.weight,
            });
            if d.var.kind() == VarKind::Fiber {
                forward.insert(cv, expr);
            }
        }
    }
    for (z, e) in &forward {
        let partner = full_forward.get(&z.conjugate());
        if partner != Some(&e.conjugate()) {
            return Err(Error::Unsupported(format!(
                "graded coordinates are not conjugate-paired at {z}"
            )));
        }
    }
    let signature = GradedSignature::complex(decls)?;
    let inverse: BTreeMap<Var, RationalExpr> = hom
        .inverse
        .iter()
        .map(|(y, e)| (from_real(y), complexify(e)))
        .collect();
    let mut comps = BTreeMap::new();
    for (z, e) in &full_forward {
        if z.kind() != VarKind::Fiber {
            continue;
        }
        comps.insert(z.clone(), fam.pull_back(e)?.substitute(&inverse)?);
    }
    let family = ActionFamily::new(Monoid::Complexes, fam.params.clone(), comps)?;
    Ok(ComplexChart {
        signature,
        forward,
        family,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelReport {
    pub level: u32,
    pub nice: bool,
    /// Coordinate and its component at `ξ = ζ_{2j}` when not `-id`.
    pub witness: Option<(Var, RationalExpr)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NicenessReport {
    pub levels: Vec<LevelReport>,
}

impl NicenessReport {
    pub fn is_nice(&self) -> bool {
        self.levels.iter().all(|l| l.nice)
    }

    pub fn first_failure(&self) -> Option<&LevelReport> {
        self.levels.iter().find(|l| !l.nice)
    }
}

/// For each level `j`, `h` at `ξ = ζ_{2j}` must act as `-id` on the core of
/// the level-`j` truncation.
pub fn niceness_check(sig: &GradedSignature, fam: &ActionFamily) -> Result<NicenessReport> {
    if let Verdict::Violation { law, coordinate, residual } = verify_c_action(fam)? {
        return Err(Error::NotAnAction(format!("{law} law fails at {coordinate}: {residual}")));
    }
    let chart = graded_chart(sig, fam)?;
    let zsig = &chart.signature;
    let xi = fam.params[0].clone();
    let mut levels = Vec::new();
    for j in 1..=zsig.degree() {
        let (_, trunc) = tower_truncate(zsig, &chart.family, j)?;
        let lower: BTreeMap<Var, RationalExpr> = zsig
            .decls()
            .iter()
            .filter(|d| d.var.kind() == VarKind::Fiber && d.weight < j)
            .flat_map(|d| [d.var.clone(), d.var.conjugate()])
            .map(|v| (v, RationalExpr::zero()))
            .collect();
        let mut witness = None;
        for d in zsig.decls().iter().filter(|d| d.weight == j && d.var.kind() == VarKind::Fiber) {
            for z in [d.var.clone(), d.var.conjugate()] {
                let c = trunc.components[&z].substitute(&lower)?;
                let at_root = c.map_num(|p| cyclo_eval(p, &xi, 2 * j).expect("order is positive"));
                if at_root != -&RationalExpr::var(&z) {
                    witness.get_or_insert((z, at_root));
                }
            }
        }
        levels.push(LevelReport {
            level: j,
            nice: witness.is_none(),
            witness,
        });
    }
    Ok(NicenessReport { levels })
}

/// `[ξ^w] (h_ξ^* f)|_{conj(ξ) = ξ^{-1}}`: the weight-`w` Fourier mode of `f`
/// along the circle.
pub fn fourier_weight_project(f: &RationalExpr, fam: &ActionFamily, w: i32) -> Result<RationalExpr> {
    let xi = &fam.params[0];
    let pulled = fam.pull_back(f)?;
    let circle = BTreeMap::from([(xi.conjugate(), Polynomial::power_of(xi, -1)?)]);
    Ok(pulled.substitute_poly(&circle)?.coeff_extract(xi, w))
}

#[derive(Clone, Debug)]
pub struct ComplexHomogenization {
    pub signature: GradedSignature,
    /// New coordinate ↦ expression in the old coordinates.
    pub forward: BTreeMap<Var, RationalExpr>,
    /// Determinant of the linear part of `(z, conj z)` in `(y, conj y)`.
    pub jacobian_det: RationalExpr,
}

/// Complex graded coordinates `z` with `h_ξ^* z = ξ^w z`, fiberwise at the
/// given base values.
pub fn complex_homogenize(
    sig: &GradedSignature,
    fam: &ActionFamily,
    base_values: &BTreeMap<Var, Scalar>,
) -> Result<ComplexHomogenization> {
    let mut at_base: BTreeMap<Var, RationalExpr> = BTreeMap::new();
    for b in sig.base_vars() {
        let val = base_values
            .get(&b)
            .ok_or_else(|| Error::UnboundVariable(b.to_string()))?;
        at_base.insert(b.clone(), RationalExpr::constant(val.clone()));
        at_base.insert(b.conjugate(), RationalExpr::constant(val.conj()));
    }
    let fiber_sig = sig.restrict(|d| d.var.kind() == VarKind::Fiber);
    let comps = fam
        .components
        .iter()
        .filter(|(v, _)| v.kind() == VarKind::Fiber)
        .map(|(v, c)| Ok((v.clone(), c.substitute(&at_base)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let fam = ActionFamily::new(Monoid::Complexes, fam.params.clone(), comps)?;
    let nice = niceness_check(&fiber_sig, &fam)?;
    if let Some(l) = nice.first_failure() {
        return Err(Error::NotNice { level: l.level });
    }
    let chart = graded_chart(&fiber_sig, &fam)?;
    let xi = fam.params[0].clone();
    let mut forward = BTreeMap::new();
    for (z, e) in &chart.forward {
        let w = chart.signature.weight(z) as i32;
        let proj = fourier_weight_project(e, &fam, w)?;
        let expect = proj.checked_mul(&RationalExpr::from(Polynomial::power_of(&xi, w)?))?;
        let residual = fam.pull_back(&proj)?.checked_sub(&expect)?;
        if !residual.is_zero() {
            return Err(Error::ComplexHomogenizationFailed {
                coordinate: z.to_string(),
                residual: residual.to_string(),
            });
        }
        forward.insert(z.clone(), proj);
    }
    let old: Vec<Var> = fiber_sig.all_coordinates();
    let mut rows = Vec::new();
    for e in forward.values().flat_map(|e| [e.clone(), e.conjugate()]) {
        rows.push(
            old.iter()
                .map(|y| e.derivative(y)?.substitute(&old.iter().map(|v| (v.clone(), RationalExpr::zero())).collect()))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let jacobian_det = matrix::determinant(&rows)?;
    if jacobian_det.is_zero() {
        return Err(Error::SingularBlock("complex coordinate change".into()));
    }
    let names: BTreeSet<&str> = forward.keys().map(|v| v.name()).collect();
    let signature = chart.signature.restrict(|d| names.contains(d.var.name()));
    Ok(ComplexHomogenization {
        signature,
        forward,
        jacobian_det,
    })
}

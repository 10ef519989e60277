use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::matrix::{self, Matrix};
use crate::algebra::{Monomial, Polynomial, RationalExpr, Var, VarKind};
use crate::error::{Error, Result};

use super::action::{verify_action, ActionFamily, Monoid, Verdict};
use super::signature::{GradedSignature, VarDecl};

/// New graded coordinates for a one-parameter family.
#[derive(Clone, Debug)]
pub struct Homogenization {
    pub signature: GradedSignature,
    /// New coordinate ↦ expression in the old coordinates.
    pub forward: BTreeMap<Var, RationalExpr>,
    /// Old coordinate ↦ expression in the new coordinates.
    pub inverse: BTreeMap<Var, RationalExpr>,
    /// The family rewritten in the new coordinates (diagonal `t^w`).
    pub family: ActionFamily,
    /// Determinant of the linear part of the coordinate change.
    pub jacobian_det: RationalExpr,
}

impl Homogenization {
    /// True when every new coordinate is the old coordinate of the same name.
    pub fn is_identity(&self) -> bool {
        self.forward.iter().all(|(v, e)| *e == RationalExpr::var(v))
    }
}

fn is_fiber(v: &Var) -> bool {
    v.kind() == VarKind::Fiber
}

/// Projectors `P_w` from the coordinate-linear part `A(t) = Σ t^w P_w`.
pub fn linear_projectors(
    h: &ActionFamily,
    fibers: &[Var],
) -> Result<BTreeMap<i32, Matrix>> {
    let t = h.param();
    let n = fibers.len();
    let mut proj: BTreeMap<i32, Matrix> = BTreeMap::new();
    for (i, y) in fibers.iter().enumerate() {
        let c = h
            .component(y)
            .ok_or_else(|| Error::InvalidAction(format!("no component for {y}")))?;
        let parts = c.split_by(is_fiber);
        for (m, coeff) in &parts {
            let deg: i32 = m.iter().map(|(_, e)| e).sum();
            if deg == 0 {
                return Err(Error::Unsupported(format!(
                    "zero section is not invariant: component of {y} has fiber-free part {coeff}"
                )));
            }
            if deg != 1 {
                continue;
            }
            let (v, _) = m.iter().next().expect("degree one");
            let j = fibers
                .iter()
                .position(|f| f == v)
                .ok_or_else(|| Error::InvalidAction(format!("unknown coordinate {v}")))?;
            let lo = coeff.laurent_min_exponent(t).unwrap_or(0);
            let hi = coeff.max_exponent(t).unwrap_or(0);
            if lo < 0 {
                return Err(Error::NotPolynomial(format!("negative power of {t} in {coeff}")));
            }
            for w in lo..=hi {
                let e = coeff.coeff_extract(t, w);
                if e.is_zero() {
                    continue;
                }
                let p = proj
                    .entry(w)
                    .or_insert_with(|| vec![vec![RationalExpr::zero(); n]; n]);
                p[i][j] = e;
            }
        }
    }
    Ok(proj)
}

/// Checks `P_v P_w = δ_{vw} P_w`, `Σ P_w = I` and `P_0 = 0`.
pub fn check_projectors(proj: &BTreeMap<i32, Matrix>, n: usize) -> Result<()> {
    if proj.get(&0).is_some_and(|p| !matrix::is_zero_matrix(p)) {
        return Err(Error::ProjectorFailure(
            "t^0 part of the linear action is non-zero".into(),
        ));
    }
    let mut sum = vec![vec![RationalExpr::zero(); n]; n];
    for (w, p) in proj {
        for (v, q) in proj {
            let pq = matrix::mat_mul(p, q)?;
            let ok = if v == w { pq == *p } else { matrix::is_zero_matrix(&pq) };
            if !ok {
                return Err(Error::ProjectorFailure(format!("P_{w} P_{v} is wrong")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                sum[i][j] = sum[i][j].checked_add(&p[i][j])?;
            }
        }
    }
    if sum != matrix::identity(n) {
        return Err(Error::ProjectorFailure("projectors do not sum to the identity".into()));
    }
    Ok(())
}

/// Spectral-projector homogenizer for a real one-parameter family.
pub fn homogenize_real(sig: &GradedSignature, h: &ActionFamily) -> Result<Homogenization> {
    if !matches!(h.monoid, Monoid::Reals) {
        return Err(Error::Unsupported(format!("homogenize a {} family", h.monoid)));
    }
    if let Verdict::Violation { law, coordinate, residual } = verify_action(h)? {
        return Err(Error::NotAnAction(format!(
            "{law} law fails at {coordinate}: {residual}"
        )));
    }
    let t = h.param().clone();
    for b in sig.base_vars() {
        if let Some(c) = h.component(&b) {
            if *c != RationalExpr::var(&b) {
                return Err(Error::Unsupported(format!(
                    "base coordinate {b} is moved by the action"
                )));
            }
        }
    }
    let fibers = sig.fiber_vars();
    let n = fibers.len();
    let proj = linear_projectors(h, &fibers)?;
    check_projectors(&proj, n)?;

    // Lexicographically first rows of each P_w give the linear parts of the
    // new coordinates; the f^[w] extraction supplies the rest.
    let mut forward = BTreeMap::new();
    let mut decls: Vec<VarDecl> = sig
        .decls()
        .iter()
        .filter(|d| d.var.kind() == VarKind::Base)
        .cloned()
        .collect();
    let mut used = BTreeSet::new();
    let mut lin_rows: Matrix = Vec::new();
    for (w, p) in &proj {
        for i in matrix::independent_rows(p)? {
            let y = &fibers[i];
            let name = if used.insert(i) && sig.weight(y) == *w as i64 {
                y.name().to_string()
            } else {
                format!("{}_{w}", y.name())
            };
            let z = y.renamed(&name);
            let expr = h.component(y).expect("checked").coeff_extract(&t, *w);
            forward.insert(z.clone(), expr);
            decls.push(VarDecl {
                var: z,
                weight: *w as u32,
            });
            lin_rows.push(p[i].clone());
        }
    }
    // Names can collide when a coordinate is reused for two weights.
    let mut seen = BTreeSet::new();
    for d in &decls {
        if !seen.insert(d.var.name().to_string()) {
            return Err(Error::InvalidSignature(format!("name clash at {}", d.var)));
        }
    }
    let signature = GradedSignature::new(decls)?;
    let jacobian_det = matrix::determinant(&lin_rows)?;
    if jacobian_det.is_zero() {
        return Err(Error::SingularBlock("linear part of the coordinate change".into()));
    }
    let new_fibers: Vec<Var> = signature.fiber_vars();
    let lin_inv = matrix::inverse(&lin_rows)?;
    let k = fibers
        .iter()
        .map(|y| h.component(y).and_then(|c| c.max_exponent(&t)).unwrap_or(0))
        .max()
        .unwrap_or(0);
    let inverse = invert_graded(&forward, &new_fibers, &fibers, &lin_rows, &lin_inv, &signature, k)?;

    let mut comps = BTreeMap::new();
    for b in sig.base_vars() {
        if h.component(&b).is_some() {
            comps.insert(b.clone(), RationalExpr::var(&b));
        }
    }
    for z in &new_fibers {
        let pulled = h.pull_back(&forward[z])?;
        comps.insert(z.clone(), pulled.substitute(&inverse)?);
    }
    let family = ActionFamily::new(Monoid::Reals, vec![t.clone()], comps)?;
    for z in &new_fibers {
        let expect = RationalExpr::from(
            &Polynomial::power_of(&t, signature.weight(z) as i32)? * &Polynomial::var(z),
        );
        let got = &family.components[z];
        if *got != expect {
            return Err(Error::InversionFailed(format!(
                "{z} transforms as {got}, expected {expect}"
            )));
        }
    }
    Ok(Homogenization {
        signature,
        forward,
        inverse,
        family,
        jacobian_det,
    })
}

/// Solves `z = L y + N(y)` for `y` by fixed-point iteration, truncating at
/// weighted degree `k` in the new coordinates, then checks the result.
fn invert_graded(
    forward: &BTreeMap<Var, RationalExpr>,
    new_fibers: &[Var],
    old_fibers: &[Var],
    lin: &Matrix,
    lin_inv: &Matrix,
    sig: &GradedSignature,
    k: i32,
) -> Result<BTreeMap<Var, RationalExpr>> {
    // Nonlinear parts N_r(y) = z_r - (L y)_r.
    let mut nonlin = Vec::new();
    for (r, z) in new_fibers.iter().enumerate() {
        let mut e = forward[z].clone();
        for (j, y) in old_fibers.iter().enumerate() {
            if !lin[r][j].is_zero() {
                e = e.checked_sub(&lin[r][j].checked_mul(&RationalExpr::var(y))?)?;
            }
        }
        nonlin.push(e);
    }
    let wf = sig.weight_fn();
    let truncate = |e: RationalExpr| e.map_num(|p| p.filter_terms(|m| m.weight(&wf) <= k as i64));
    let mut y: BTreeMap<Var, RationalExpr> = BTreeMap::new();
    for v in old_fibers.iter() {
        y.insert(v.clone(), RationalExpr::zero());
    }
    for _ in 0..=(k.max(1) as usize + 1) {
        let rhs: Vec<RationalExpr> = new_fibers
            .iter()
            .zip(&nonlin)
            .map(|(z, nl)| RationalExpr::var(z).checked_sub(&nl.substitute(&y)?))
            .collect::<Result<_>>()?;
        let mut next = BTreeMap::new();
        for (j, v) in old_fibers.iter().enumerate() {
            let mut acc = RationalExpr::zero();
            for (r, e) in rhs.iter().enumerate() {
                if !lin_inv[j][r].is_zero() {
                    acc = acc.checked_add(&lin_inv[j][r].checked_mul(e)?)?;
                }
            }
            next.insert(v.clone(), truncate(acc));
        }
        if next == y {
            break;
        }
        y = next;
    }
    for z in new_fibers {
        let back = forward[z].substitute(&y)?;
        if back != RationalExpr::var(z) {
            return Err(Error::InversionFailed(format!("{z} round-trips to {back}")));
        }
    }
    Ok(y)
}

/// Drop fiber coordinates of weight above `j`; the kept components must not
/// involve the dropped coordinates.
pub fn tower_truncate(
    sig: &GradedSignature,
    h: &ActionFamily,
    j: u32,
) -> Result<(GradedSignature, ActionFamily)> {
    let kept = sig.restrict(|d| d.weight <= j);
    let dropped: BTreeSet<String> = sig
        .decls()
        .iter()
        .filter(|d| d.weight > j)
        .map(|d| d.var.name().to_string())
        .collect();
    let mut comps = BTreeMap::new();
    for (v, c) in &h.components {
        if dropped.contains(v.name()) {
            continue;
        }
        if c.variables().iter().any(|u| !u.is_param() && dropped.contains(u.name())) {
            return Err(Error::DoesNotDescend {
                level: j,
                coordinate: v.to_string(),
            });
        }
        comps.insert(v.clone(), c.clone());
    }
    let fam = ActionFamily {
        components: comps,
        ..h.clone()
    };
    Ok((kept, fam))
}

/// The core: fiber coordinates of top weight `k` with all lower fiber
/// coordinates set to zero, and `t^{k e}` rescaled to `t^e`.
pub fn core_extract(sig: &GradedSignature, h: &ActionFamily) -> Result<(GradedSignature, ActionFamily)> {
    let k = sig.degree();
    if k == 0 {
        return Err(Error::InvalidSignature("degree 0 has no core".into()));
    }
    let core_sig = sig
        .restrict(|d| d.var.kind() == VarKind::Base || d.weight == k)
        .with_weights(|d| if d.weight == k { 1 } else { 0 });
    let mut zero: BTreeMap<Var, RationalExpr> = BTreeMap::new();
    for d in sig.decls() {
        if d.var.kind() != VarKind::Base && d.weight < k {
            zero.insert(d.var.clone(), RationalExpr::zero());
            if sig.is_complex() {
                zero.insert(d.var.conjugate(), RationalExpr::zero());
            }
        }
    }
    let params = h.params.clone();
    let mut comps = BTreeMap::new();
    for (v, c) in &h.components {
        if zero.contains_key(v) {
            continue;
        }
        let c = c.substitute(&zero)?;
        let rescaled = c.map_num(|p| rescale_params(p, &params, k as i32));
        if rescaled.numer().len() != c.numer().len() {
            return Err(Error::Unsupported(format!(
                "core action at {v} is not a rescaled homothety: {c}"
            )));
        }
        comps.insert(v.clone(), rescaled);
    }
    Ok((
        core_sig,
        ActionFamily {
            components: comps,
            ..h.clone()
        },
    ))
}

/// Divide every parameter exponent by `k`; terms with non-divisible
/// exponents are dropped (callers compare term counts).
fn rescale_params(p: &Polynomial, params: &[Var], k: i32) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        let mut nm = Monomial::one();
        let mut ok = true;
        for (v, e) in m.iter() {
            let e = if params.iter().any(|q| q == v) {
                if e % k != 0 {
                    ok = false;
                }
                e / k
            } else {
                e
            };
            nm = nm.mul(&Monomial::power(v, e)).expect("even or fresh factor").0;
        }
        if ok {
            out = &out + &Polynomial::term(c.clone(), nm);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum MorphismReport {
    Ok,
    Violation {
        coordinate: Var,
        component: RationalExpr,
        detail: String,
    },
}

impl MorphismReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, MorphismReport::Ok)
    }
}

/// A map given by `dst coordinate ↦ expression in src coordinates` is a
/// graded morphism iff each component is homogeneous of the target weight
/// (and parity). The homothety-intertwining test is run as well and the
/// two must agree.
pub fn check_morphism(
    phi: &BTreeMap<Var, RationalExpr>,
    src: &GradedSignature,
    dst: &GradedSignature,
) -> Result<MorphismReport> {
    let t = Var::param("t__morphism");
    let hom: BTreeMap<Var, Polynomial> = src.homothety_map(&t);
    let tp = Polynomial::var(&t);
    let mut first_bad = None;
    for v in dst.all_coordinates() {
        let Some(c) = phi.get(&v) else {
            return Err(Error::InvalidAction(format!("morphism has no component for {v}")));
        };
        let w = dst.weight(&v);
        let by_weight = {
            let parts = c.numer().weight_decompose(src.weight_fn());
            let parity_ok = c.is_zero() || c.parity() == Some(v.parity());
            parity_ok && (parts.is_empty() || (parts.len() == 1 && parts.contains_key(&w)))
        };
        let by_homothety = {
            let lhs = c.substitute_poly(&hom)?;
            let tw = if v.is_conj() {
                Polynomial::power_of(&t.conjugate(), w as i32)?
            } else {
                tp.pow(w as u32)?
            };
            let parity_ok = c.is_zero() || c.parity() == Some(v.parity());
            parity_ok && lhs == c.checked_mul(&RationalExpr::from(tw))?
        };
        if by_weight != by_homothety {
            return Err(Error::Unsupported(format!(
                "weight and homothety tests disagree at {v}"
            )));
        }
        if !by_weight && first_bad.is_none() {
            let parts = c.numer().weight_decompose(src.weight_fn());
            let weights: Vec<String> = parts.keys().map(|k| k.to_string()).collect();
            first_bad = Some(MorphismReport::Violation {
                coordinate: v.clone(),
                component: c.clone(),
                detail: format!("weight {w} expected, found weights {{{}}}", weights.join(", ")),
            });
        }
    }
    Ok(first_bad.unwrap_or(MorphismReport::Ok))
}

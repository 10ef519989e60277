use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Polynomial, RationalExpr, Scalar, Var};
use crate::error::{Error, Result};
use crate::jet::compose_coeffs;

use super::signature::GradedSignature;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// The acting monoid, with its parameter layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Monoid {
    /// `(R, ·)`; one parameter.
    Reals,
    /// `(C, ·)`; parameters `ξ` and `conj(ξ)`.
    Complexes,
    /// `G_k` with parameters `a_1..a_k`.
    Jets { order: usize, side: Side },
    /// `M_2(R)` with parameters `a, b, c, d` for `[[a, b], [c, d]]`.
    Matrix2 { side: Side },
    /// `(R, +)`, used for flows.
    Additive,
}

impl Monoid {
    pub fn param_count(&self) -> usize {
        match self {
            Monoid::Reals | Monoid::Additive => 1,
            Monoid::Complexes => 2,
            Monoid::Jets { order, .. } => *order,
            Monoid::Matrix2 { .. } => 4,
        }
    }

    pub fn side(&self) -> Side {
        match self {
            Monoid::Jets { side, .. } | Monoid::Matrix2 { side } => *side,
            _ => Side::Right,
        }
    }

    pub fn identity(&self) -> Vec<Polynomial> {
        match self {
            Monoid::Reals => vec![Polynomial::one()],
            Monoid::Additive => vec![Polynomial::zero()],
            Monoid::Complexes => vec![Polynomial::one(), Polynomial::one()],
            Monoid::Jets { order, .. } => {
                let mut v = vec![Polynomial::zero(); *order];
                v[0] = Polynomial::one();
                v
            }
            Monoid::Matrix2 { .. } => vec![
                Polynomial::one(),
                Polynomial::zero(),
                Polynomial::zero(),
                Polynomial::one(),
            ],
        }
    }

    /// Parameters of the product `g·h`.
    pub fn product(&self, g: &[Polynomial], h: &[Polynomial]) -> Vec<Polynomial> {
        match self {
            Monoid::Reals => vec![&g[0] * &h[0]],
            Monoid::Additive => vec![&g[0] + &h[0]],
            Monoid::Complexes => vec![&g[0] * &h[0], &g[1] * &h[1]],
            Monoid::Jets { .. } => compose_coeffs(g, h),
            Monoid::Matrix2 { .. } => {
                let (a, b, c, d) = (&g[0], &g[1], &g[2], &g[3]);
                let (p, q, r, s) = (&h[0], &h[1], &h[2], &h[3]);
                vec![
                    &(a * p) + &(b * r),
                    &(a * q) + &(b * s),
                    &(c * p) + &(d * r),
                    &(c * q) + &(d * s),
                ]
            }
        }
    }
}

impl fmt::Display for Monoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monoid::Reals => write!(f, "reals"),
            Monoid::Complexes => write!(f, "complexes"),
            Monoid::Additive => write!(f, "additive"),
            Monoid::Jets { order, side } => write!(f, "G{order}-{}", side_name(*side)),
            Monoid::Matrix2 { side } => write!(f, "M2-{}", side_name(*side)),
        }
    }
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Left => "left",
        Side::Right => "right",
    }
}

/// A parameterized pullback `y ↦ h_g^* y`, one component per coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionFamily {
    pub monoid: Monoid,
    pub params: Vec<Var>,
    pub components: BTreeMap<Var, RationalExpr>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Law {
    Identity,
    Composition,
    /// Conjugating a component does not give the conjugate coordinate's component.
    Reality,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Law::Identity => write!(f, "identity"),
            Law::Composition => write!(f, "composition"),
            Law::Reality => write!(f, "reality"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Ok,
    Violation {
        law: Law,
        coordinate: Var,
        residual: RationalExpr,
    },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

impl ActionFamily {
    pub fn new(
        monoid: Monoid,
        params: Vec<Var>,
        components: BTreeMap<Var, RationalExpr>,
    ) -> Result<Self> {
        if params.len() != monoid.param_count() {
            return Err(Error::InvalidAction(format!(
                "{monoid} needs {} parameters, got {}",
                monoid.param_count(),
                params.len()
            )));
        }
        if let Some(p) = params.iter().find(|p| !p.is_param()) {
            return Err(Error::InvalidAction(format!("`{p}` is not a parameter")));
        }
        for (v, c) in &components {
            if let Some(p) = c.parity() {
                if !c.is_zero() && p != v.parity() {
                    return Err(Error::ParityViolation(format!("component of {v}")));
                }
            } else {
                return Err(Error::ParityViolation(format!("component of {v} has mixed parity")));
            }
        }
        Ok(ActionFamily {
            monoid,
            params,
            components,
        })
    }

    pub fn coordinates(&self) -> impl Iterator<Item = &Var> {
        self.components.keys()
    }

    pub fn component(&self, v: &Var) -> Option<&RationalExpr> {
        self.components.get(v)
    }

    /// The single parameter of a one-parameter family.
    pub fn param(&self) -> &Var {
        &self.params[0]
    }

    /// Substitute parameter values.
    pub fn at_params(&self, values: &[Polynomial]) -> Result<BTreeMap<Var, RationalExpr>> {
        let map: BTreeMap<Var, Polynomial> = self
            .params
            .iter()
            .cloned()
            .zip(values.iter().cloned())
            .collect();
        self.components
            .iter()
            .map(|(v, c)| Ok((v.clone(), c.substitute_poly(&map)?)))
            .collect()
    }

    /// Pull an expression back along the family: `f ↦ f ∘ h`.
    pub fn pull_back(&self, f: &RationalExpr) -> Result<RationalExpr> {
        f.substitute(&self.components)
    }

    /// Copy of the family with parameters renamed `{name}{suffix}`.
    pub fn fresh(&self, suffix: &str) -> (Vec<Var>, BTreeMap<Var, RationalExpr>) {
        let ren: BTreeMap<Var, Var> = self
            .params
            .iter()
            .map(|p| (p.clone(), p.renamed(&format!("{}{suffix}", p.name()))))
            .collect();
        let params = self.params.iter().map(|p| ren[p].clone()).collect();
        let comps = self
            .components
            .iter()
            .map(|(v, c)| (v.clone(), c.rename(&ren)))
            .collect();
        (params, comps)
    }

    pub fn map_components(
        &self,
        f: impl Fn(&Var, &RationalExpr) -> Result<RationalExpr>,
    ) -> Result<ActionFamily> {
        let components = self
            .components
            .iter()
            .map(|(v, c)| Ok((v.clone(), f(v, c)?)))
            .collect::<Result<_>>()?;
        Ok(ActionFamily {
            components,
            ..self.clone()
        })
    }
}

impl fmt::Display for ActionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, c) in &self.components {
            writeln!(f, "{v} -> {c}")?;
        }
        Ok(())
    }
}

/// `y ↦ t^{w(y)} y` over the signature (and conjugates in complex mode).
pub fn standard_homothety(sig: &GradedSignature, t: &Var) -> ActionFamily {
    let map = sig.homothety_map(t);
    let (monoid, params) = if sig.is_complex() {
        (Monoid::Complexes, vec![t.clone(), t.conjugate()])
    } else {
        (Monoid::Reals, vec![t.clone()])
    };
    ActionFamily {
        monoid,
        params,
        components: map.into_iter().map(|(v, p)| (v, RationalExpr::from(p))).collect(),
    }
}

/// Symbolic check of the identity and composition laws with fresh copies
/// `{p}__g`, `{p}__h` of the parameters.
pub fn verify_action(h: &ActionFamily) -> Result<Verdict> {
    let ident = h.at_params(&h.monoid.identity())?;
    for (v, c) in &ident {
        let r = c.checked_sub(&RationalExpr::var(v))?;
        if !r.is_zero() {
            return Ok(Verdict::Violation {
                law: Law::Identity,
                coordinate: v.clone(),
                residual: r,
            });
        }
    }
    let (gp, gc) = h.fresh("__g");
    let (hp, hc) = h.fresh("__h");
    let gv: Vec<Polynomial> = gp.iter().map(Polynomial::var).collect();
    let hv: Vec<Polynomial> = hp.iter().map(Polynomial::var).collect();
    let prod = h.at_params(&h.monoid.product(&gv, &hv))?;
    let (outer, inner) = match h.monoid.side() {
        Side::Right => (&hc, &gc),
        Side::Left => (&gc, &hc),
    };
    for (v, lhs) in &prod {
        let rhs = outer[v].substitute(inner)?;
        let r = lhs.checked_sub(&rhs)?;
        if !r.is_zero() {
            return Ok(Verdict::Violation {
                law: Law::Composition,
                coordinate: v.clone(),
                residual: r,
            });
        }
    }
    Ok(Verdict::Ok)
}

/// Evaluate a family at constant parameter values.
pub fn at_constants(h: &ActionFamily, values: &[Scalar]) -> Result<BTreeMap<Var, RationalExpr>> {
    let vals: Vec<Polynomial> = values.iter().cloned().map(Polynomial::constant).collect();
    h.at_params(&vals)
}

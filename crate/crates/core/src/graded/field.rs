use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::algebra::{Polynomial, Rational, RationalExpr, Scalar, Var};
use crate::error::{Error, Result};

use super::action::{ActionFamily, Monoid};
use super::signature::GradedSignature;

/// A first-order differential operator `Σ X^i ∂_i` with polynomial
/// coefficients; zero components are not stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct VectorField {
    comps: BTreeMap<Var, Polynomial>,
}

impl VectorField {
    pub fn zero() -> Self {
        VectorField::default()
    }

    pub fn from_components(it: impl IntoIterator<Item = (Var, Polynomial)>) -> Self {
        VectorField {
            comps: it.into_iter().filter(|(_, p)| !p.is_zero()).collect(),
        }
    }

    pub fn components(&self) -> &BTreeMap<Var, Polynomial> {
        &self.comps
    }

    pub fn component(&self, v: &Var) -> Polynomial {
        self.comps.get(v).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// `X(f) = Σ X^i ∂f/∂y^i`.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (v, c) in &self.comps {
            let d = f.derivative(v);
            if !d.is_zero() {
                out = &out + &(c * &d);
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> VectorField {
        Self::from_components(
            self.comps
                .iter()
                .map(|(v, p)| (v.clone(), p.scale(c).expect("rational scale"))),
        )
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        let mut comps = self.comps.clone();
        for (v, p) in &o.comps {
            let s = &comps.get(v).cloned().unwrap_or_default() + p;
            comps.insert(v.clone(), s);
        }
        Self::from_components(comps)
    }

    pub fn sub(&self, o: &VectorField) -> VectorField {
        self.add(&o.scale(&Scalar::int(-1)))
    }

    pub fn substitute(&self, map: &BTreeMap<Var, Polynomial>) -> Result<VectorField> {
        Ok(Self::from_components(
            self.comps
                .iter()
                .map(|(v, p)| Ok((v.clone(), p.substitute(map)?)))
                .collect::<Result<Vec<_>>>()?,
        ))
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(v, p)| {
                if p.len() > 1 {
                    format!("({p})*d/d{v}")
                } else {
                    format!("{p}*d/d{v}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `[X, Y]^i = X(Y^i) - Y(X^i)`.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> VectorField {
    let mut keys: Vec<&Var> = x.comps.keys().chain(y.comps.keys()).collect();
    keys.sort();
    keys.dedup();
    VectorField::from_components(keys.into_iter().map(|v| {
        let c = &x.apply(&y.component(v)) - &y.apply(&x.component(v));
        (v.clone(), c)
    }))
}

/// `w` with `[Δ, X] = w X`, if `X` is non-zero and homogeneous.
pub fn field_weight(x: &VectorField, delta: &VectorField) -> Option<i64> {
    let (v, xc) = x.comps.iter().next()?;
    let b = lie_bracket(delta, x);
    let (m, c) = xc.terms().next()?;
    let bc = b
        .component(v)
        .terms()
        .find(|(bm, _)| *bm == m)
        .map(|(_, c)| c.clone())
        .unwrap_or_else(Scalar::zero);
    let ratio = bc.checked_mul(&c.inv().ok()?).ok()?;
    let w = ratio.as_integer()?;
    let w = i64::try_from(w).ok()?;
    (b == x.scale(&Scalar::int(w))).then_some(w)
}

/// `Δ = Σ w(y) y ∂_y` for the signature's declared coordinates.
pub fn standard_weight_field(sig: &GradedSignature) -> VectorField {
    VectorField::from_components(sig.decls().iter().map(|d| {
        (
            d.var.clone(),
            &Polynomial::int(d.weight as i64) * &Polynomial::var(&d.var),
        )
    }))
}

/// `d/dt` at `t = 1` of a one-parameter family.
pub fn weight_field(h: &ActionFamily) -> Result<VectorField> {
    if !matches!(h.monoid, Monoid::Reals) {
        return Err(Error::Unsupported(format!(
            "weight field of a {} family",
            h.monoid
        )));
    }
    derivative_at(h, 0, &h.monoid.identity())
}

/// Derivative of the family in parameter `idx` at the given parameter point.
pub fn derivative_at(h: &ActionFamily, idx: usize, point: &[Polynomial]) -> Result<VectorField> {
    let p = &h.params[idx];
    let map: BTreeMap<Var, Polynomial> = h
        .params
        .iter()
        .cloned()
        .zip(point.iter().cloned())
        .collect();
    let mut comps = Vec::new();
    for (v, c) in &h.components {
        let d = c.derivative(p)?.substitute_poly(&map)?;
        let d = d.as_poly().cloned().ok_or_else(|| {
            Error::NotPolynomial(format!("derivative of the component of {v}: {d}"))
        })?;
        comps.push((v.clone(), d));
    }
    Ok(VectorField::from_components(comps))
}

/// Iterates `X^j(f)` until it vanishes; `None` if it has not vanished after
/// `cap` steps.
fn lie_powers(x: &VectorField, f: &Polynomial, cap: usize) -> Option<Vec<Polynomial>> {
    let mut out = vec![f.clone()];
    let mut cur = f.clone();
    for _ in 0..cap {
        cur = x.apply(&cur);
        if cur.is_zero() {
            return Some(out);
        }
        out.push(cur.clone());
    }
    None
}

/// Exact flow `y ↦ Σ s^j/j! X^j(y)` of a nilpotent field, as an additive
/// family in `s`. Errors if some Lie series does not terminate within
/// `cap` terms.
pub fn lie_series_flow(
    x: &VectorField,
    coords: &[Var],
    s: &Var,
    cap: usize,
) -> Result<ActionFamily> {
    let sp = Polynomial::var(s);
    let mut comps = BTreeMap::new();
    for v in coords {
        let pows = lie_powers(x, &Polynomial::var(v), cap)
            .ok_or_else(|| Error::Unsupported(format!("flow of {x} does not terminate at {v}")))?;
        let mut acc = Polynomial::zero();
        let mut fact = Rational::one();
        let mut spow = Polynomial::one();
        for (j, p) in pows.iter().enumerate() {
            if j > 0 {
                fact *= Rational::from_integer(j.into());
                spow = &spow * &sp;
            }
            let c = Scalar::from(fact.recip());
            acc = &acc + &(&spow * p).scale(&c)?;
        }
        comps.insert(v.clone(), RationalExpr::from(acc));
    }
    ActionFamily::new(Monoid::Additive, vec![s.clone()], comps)
}

/// The flow of a weight-`-1` field, whose Lie series terminate after
/// `degree` steps.
pub fn flow_nilpotent(
    x: &VectorField,
    sig: &GradedSignature,
    s: &Var,
) -> Result<ActionFamily> {
    let delta = standard_weight_field(sig);
    if !x.is_zero() && field_weight(x, &delta) != Some(-1) {
        return Err(Error::WrongWeight { expected: -1 });
    }
    let coords: Vec<Var> = sig.vars().cloned().collect();
    lie_series_flow(x, &coords, s, sig.degree() as usize + 1)
}

/// True when every component of a field of negative weight vanishes on
/// base coordinates (there are no functions of negative weight).
pub fn base_components_vanish(x: &VectorField, sig: &GradedSignature) -> bool {
    sig.base_vars().iter().all(|b| x.component(b).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(v: &Var) -> Polynomial {
        Polynomial::var(v)
    }

    #[test]
    fn bracket_of_t2_fields() {
        let (xd, xdd) = (Var::fiber("dx"), Var::fiber("ddx"));
        let delta = VectorField::from_components([
            (xd.clone(), pv(&xd)),
            (xdd.clone(), &Polynomial::int(2) * &pv(&xdd)),
        ]);
        let x = VectorField::from_components([(xdd.clone(), pv(&xd))]);
        assert_eq!(lie_bracket(&delta, &x), x.scale(&Scalar::int(-1)));
        assert_eq!(field_weight(&x, &delta), Some(-1));
        assert_eq!(field_weight(&delta, &delta), Some(0));
        assert!(lie_bracket(&x, &x).is_zero());
        assert_eq!(field_weight(&VectorField::zero(), &delta), None);
    }

    #[test]
    fn inhomogeneous_field_has_no_weight() {
        let (u, v) = (Var::fiber("u"), Var::fiber("v"));
        let delta = VectorField::from_components([
            (u.clone(), pv(&u)),
            (v.clone(), &Polynomial::int(2) * &pv(&v)),
        ]);
        let x = VectorField::from_components([(v.clone(), &pv(&u) + &Polynomial::one())]);
        assert_eq!(field_weight(&x, &delta), None);
    }
}

//! Actions of `G_2`: right actions built from a weight field and a
//! weight `-1` field, the extension-to-`a = 0` test, the degree-3
//! criterion, and left actions on vector bundles from bullet products.

use std::collections::BTreeMap;

use crate::algebra::{Polynomial, Rational, RationalExpr, Scalar, Var, VarKind};
use crate::error::{Error, Result};
use crate::graded::field::derivative_at;
use crate::graded::{
    field_weight, flow_nilpotent, standard_weight_field, ActionFamily, GradedSignature, Monoid,
    Side, VectorField,
};

/// `(Δ, X)`: derivatives of a `G_2` family at `(1, 0)` along `a` and `b`.
pub fn infinitesimal_pair(fam: &ActionFamily) -> Result<(VectorField, VectorField)> {
    if !matches!(fam.monoid, Monoid::Jets { order: 2, .. }) {
        return Err(Error::Unsupported(format!("{} is not G2", fam.monoid)));
    }
    let id = fam.monoid.identity();
    Ok((derivative_at(fam, 0, &id)?, derivative_at(fam, 1, &id)?))
}

/// `p.(a, b) = X^{b/a}(h_a(p))`, with `a` a Laurent parameter. Both
/// orderings `X^{b/a}∘h_a` and `h_a∘X^{b/a²}` are built and compared.
pub fn right_family(
    sig: &GradedSignature,
    x: &VectorField,
    a: &Var,
    b: &Var,
) -> Result<ActionFamily> {
    let s = Var::param("s__flow");
    let flow = flow_nilpotent(x, sig, &s)?;
    let ap = Polynomial::var(a);
    let bp = Polynomial::var(b);
    let a_inv = Polynomial::power_of(a, -1)?;
    let homothety: BTreeMap<Var, Polynomial> = sig
        .vars()
        .map(|v| {
            let w = sig.weight(v) as u32;
            (v.clone(), &ap.pow(w).expect("power") * &Polynomial::var(v))
        })
        .collect();
    let s_first = BTreeMap::from([(s.clone(), &bp * &a_inv)]);
    let s_second = BTreeMap::from([(s.clone(), &bp * &a_inv.pow(2)?)]);
    let mut comps = BTreeMap::new();
    for v in sig.vars() {
        let phi = flow.component(v).expect("flow covers every coordinate");
        // Pull back along X^{b/a}, then along h_a.
        let first = phi.substitute_poly(&s_first)?.substitute_poly(&homothety)?;
        // Pull back along h_a, then along X^{b/a²}.
        let second = RationalExpr::from(homothety[v].clone())
            .substitute(&flow.components)?
            .substitute_poly(&s_second)?;
        if first != second {
            return Err(Error::Unsupported(format!(
                "orderings disagree at {v}: {first} vs {second}"
            )));
        }
        comps.insert(v.clone(), first);
    }
    ActionFamily::new(
        Monoid::Jets {
            order: 2,
            side: Side::Right,
        },
        vec![a.clone(), b.clone()],
        comps,
    )
}

#[derive(Clone, Debug, PartialEq)]
pub enum Extendability {
    Ok(ActionFamily),
    Blocked {
        coordinate: Var,
        exponent: i32,
        witness: RationalExpr,
    },
}

impl Extendability {
    pub fn is_ok(&self) -> bool {
        matches!(self, Extendability::Ok(_))
    }
}

/// The family extends to `a = 0` iff no component carries a negative power
/// of `a`. Coordinates are inspected in signature order; the witness is
/// the negative-power part of the first offending component.
pub fn extendable_to_zero(sig: &GradedSignature, fam: &ActionFamily, a: &Var) -> Extendability {
    for v in sig.all_coordinates() {
        let Some(c) = fam.component(&v) else { continue };
        if let Some(e) = c.laurent_min_exponent(a) {
            if e < 0 {
                return Extendability::Blocked {
                    coordinate: v,
                    exponent: e,
                    witness: c.map_num(|p| p.negative_part(a)),
                };
            }
        }
    }
    Extendability::Ok(fam.clone())
}

/// Coefficient blocks of a weight `-1` field on a signature of degree ≤ 3:
/// `X = F ∂_{y1} + G y1 ∂_{y2} + (H y2 + ½ I y1 y1) ∂_{y3}`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightMinusOneField {
    pub y1: Vec<Var>,
    pub y2: Vec<Var>,
    pub y3: Vec<Var>,
    /// `F[s]`
    pub f: Vec<RationalExpr>,
    /// `G[S][s]`
    pub g: Vec<Vec<RationalExpr>>,
    /// `H[σ][S]`
    pub h: Vec<Vec<RationalExpr>>,
    /// `I[σ][s][r]`, symmetric in `s, r`
    pub i: Vec<Vec<Vec<RationalExpr>>>,
}

fn weight_vars(sig: &GradedSignature, w: u32) -> Vec<Var> {
    sig.decls()
        .iter()
        .filter(|d| d.var.kind() == VarKind::Fiber && d.weight == w)
        .map(|d| d.var.clone())
        .collect()
}

fn coeff_of(p: &Polynomial, vars: &[&Var]) -> RationalExpr {
    let mut q = p.clone();
    for v in vars {
        q = q.derivative(v);
    }
    let q = q.filter_terms(|m| m.vars().all(|v| v.kind() != VarKind::Fiber));
    RationalExpr::from(q)
}

impl WeightMinusOneField {
    pub fn from_field(sig: &GradedSignature, x: &VectorField) -> Result<Self> {
        if sig.degree() > 3 {
            return Err(Error::Unsupported("block form needs degree at most 3".into()));
        }
        let delta = standard_weight_field(sig);
        if !x.is_zero() && field_weight(x, &delta) != Some(-1) {
            return Err(Error::WrongWeight { expected: -1 });
        }
        let (y1, y2, y3) = (weight_vars(sig, 1), weight_vars(sig, 2), weight_vars(sig, 3));
        let f = y1.iter().map(|s| coeff_of(&x.component(s), &[])).collect();
        let g = y2
            .iter()
            .map(|big| y1.iter().map(|s| coeff_of(&x.component(big), &[s])).collect())
            .collect();
        let h = y3
            .iter()
            .map(|sg| y2.iter().map(|big| coeff_of(&x.component(sg), &[big])).collect())
            .collect();
        // ∂_s ∂_r of ½ I_{sr} y^s y^r is I_{sr}.
        let i = y3
            .iter()
            .map(|sg| {
                y1.iter()
                    .map(|s| y1.iter().map(|r| coeff_of(&x.component(sg), &[s, r])).collect())
                    .collect()
            })
            .collect();
        Ok(WeightMinusOneField { y1, y2, y3, f, g, h, i })
    }

    pub fn to_field(&self) -> Result<VectorField> {
        let mut comps = Vec::new();
        let yv = |v: &Var| RationalExpr::var(v);
        for (s, fs) in self.y1.iter().zip(&self.f) {
            comps.push((s.clone(), fs.to_poly()?));
        }
        for (big, row) in self.y2.iter().zip(&self.g) {
            let mut acc = RationalExpr::zero();
            for (s, gs) in self.y1.iter().zip(row) {
                acc = acc.checked_add(&gs.checked_mul(&yv(s))?)?;
            }
            comps.push((big.clone(), acc.to_poly()?));
        }
        let half = RationalExpr::constant(Scalar::ratio(1, 2));
        for (sg, (hrow, irows)) in self.y3.iter().zip(self.h.iter().zip(&self.i)) {
            let mut acc = RationalExpr::zero();
            for (big, hs) in self.y2.iter().zip(hrow) {
                acc = acc.checked_add(&hs.checked_mul(&yv(big))?)?;
            }
            for (s, irow) in self.y1.iter().zip(irows) {
                for (r, isr) in self.y1.iter().zip(irow) {
                    let t = half.checked_mul(isr)?.checked_mul(&yv(s))?.checked_mul(&yv(r))?;
                    acc = acc.checked_add(&t)?;
                }
            }
            comps.push((sg.clone(), acc.to_poly()?));
        }
        Ok(VectorField::from_components(comps))
    }

    /// `H^σ_S G^S_s`.
    pub fn hg(&self) -> Result<Vec<Vec<RationalExpr>>> {
        let mut out = Vec::new();
        for hrow in &self.h {
            let mut row = Vec::new();
            for s in 0..self.y1.len() {
                let mut acc = RationalExpr::zero();
                for (big, hs) in hrow.iter().enumerate() {
                    acc = acc.checked_add(&hs.checked_mul(&self.g[big][s])?)?;
                }
                row.push(acc);
            }
            out.push(row);
        }
        Ok(out)
    }
}

/// A right `G_2` action with this weight `-1` field extends to `a = 0`
/// iff `F = 0` and `H G = 0`.
pub fn criterion_deg_le3(x: &WeightMinusOneField) -> Result<bool> {
    let f_zero = x.f.iter().all(RationalExpr::is_zero);
    let hg_zero = x.hg()?.iter().flatten().all(RationalExpr::is_zero);
    Ok(f_zero && hg_zero)
}

/// A symmetric bilinear product on `R^n`: `(e_i • e_j)^k = F[k][i][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BulletProduct {
    tensor: Vec<Vec<Vec<Rational>>>,
}

impl BulletProduct {
    pub fn new(tensor: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let n = tensor.len();
        for (k, m) in tensor.iter().enumerate() {
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(Error::InvalidAction(format!("bullet slice {k} is not {n}x{n}")));
            }
            for i in 0..n {
                for j in 0..n {
                    if m[i][j] != m[j][i] {
                        return Err(Error::InvalidAction(format!(
                            "bullet product not symmetric at ({k}; {i}, {j})"
                        )));
                    }
                }
            }
        }
        Ok(BulletProduct { tensor })
    }

    pub fn zero(n: usize) -> Self {
        let z = Rational::from_integer(0.into());
        BulletProduct {
            tensor: vec![vec![vec![z; n]; n]; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.tensor.len()
    }

    /// `v • w` on formal vectors.
    pub fn apply(&self, v: &[Polynomial], w: &[Polynomial]) -> Vec<Polynomial> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut acc = Polynomial::zero();
                for i in 0..n {
                    for j in 0..n {
                        let c = &self.tensor[k][i][j];
                        if *c.numer() != 0.into() {
                            let t = (&v[i] * &w[j]).scale(&Scalar::from(c.clone())).expect("rational");
                            acc = &acc + &t;
                        }
                    }
                }
                acc
            })
            .collect()
    }
}

pub fn vector_vars(prefix: &str, n: usize) -> Vec<Var> {
    (1..=n).map(|i| Var::fiber(&format!("{prefix}{i}"))).collect()
}

fn polys(vars: &[Var]) -> Vec<Polynomial> {
    vars.iter().map(Polynomial::var).collect()
}

/// `v • (v • v)` on the formal vector `v`.
pub fn cubic_obstruction(b: &BulletProduct) -> Vec<Polynomial> {
    let v = polys(&vector_vars("v", b.dim()));
    let vv = b.apply(&v, &v);
    b.apply(&v, &vv)
}

/// `(v • v) • (v • v)`.
pub fn quartic_square(b: &BulletProduct) -> Vec<Polynomial> {
    let v = polys(&vector_vars("v", b.dim()));
    let vv = b.apply(&v, &v);
    b.apply(&vv, &vv)
}

/// `2 A b B · v•(v•v) + b B² · (v•v)•(v•v)`, the failure of the left action
/// law for `(a, b)·(A, B)`.
pub fn bullet_obstruction(b: &BulletProduct, g: (&Var, &Var), h: (&Var, &Var)) -> Vec<Polynomial> {
    let (bg, ah, bh) = (Polynomial::var(g.1), Polynomial::var(h.0), Polynomial::var(h.1));
    let c1 = &(&(&Polynomial::int(2) * &ah) * &bg) * &bh;
    let c2 = &bg * &(&bh * &bh);
    cubic_obstruction(b)
        .iter()
        .zip(quartic_square(b))
        .map(|(p, q)| &(&c1 * p) + &(&c2 * &q))
        .collect()
}

/// `(a, b).v = a v + b v•v` as a left `G_2` family on `v1..vn`.
pub fn bullet_family(b: &BulletProduct, a: &Var, bv: &Var) -> Result<ActionFamily> {
    let vars = vector_vars("v", b.dim());
    let v = polys(&vars);
    let vv = b.apply(&v, &v);
    let (ap, bp) = (Polynomial::var(a), Polynomial::var(bv));
    let comps = vars
        .iter()
        .zip(v.iter().zip(&vv))
        .map(|(var, (vi, qi))| (var.clone(), RationalExpr::from(&(&ap * vi) + &(&bp * qi))))
        .collect();
    ActionFamily::new(
        Monoid::Jets {
            order: 2,
            side: Side::Left,
        },
        vec![a.clone(), bv.clone()],
        comps,
    )
}

/// As [`bullet_family`], but refuses inadmissible products, reporting
/// the obstruction polynomial.
pub fn left_family_from_bullet(b: &BulletProduct, a: &Var, bv: &Var) -> Result<ActionFamily> {
    let cubic = cubic_obstruction(b);
    if cubic.iter().any(|p| !p.is_zero()) {
        let ah = Var::param(&format!("{}__h", a.name()));
        let bh = Var::param(&format!("{}__h", bv.name()));
        let obs = bullet_obstruction(b, (a, bv), (&ah, &bh));
        let parts: Vec<String> = obs.iter().map(|p| p.to_string()).collect();
        return Err(Error::NotAnAction(format!(
            "v•(v•v) ≠ 0; obstruction ({})",
            parts.join(", ")
        )));
    }
    bullet_family(b, a, bv)
}

/// `w•(v•v) + 2 v•(v•w)` in two formal vectors.
pub fn bullet_polarize(b: &BulletProduct) -> Vec<Polynomial> {
    let v = polys(&vector_vars("v", b.dim()));
    let w = polys(&vector_vars("w", b.dim()));
    let vv = b.apply(&v, &v);
    let vw = b.apply(&v, &w);
    let lhs = b.apply(&w, &vv);
    let rhs = b.apply(&v, &vw);
    lhs.iter()
        .zip(&rhs)
        .map(|(l, r)| l + &(&Polynomial::int(2) * r))
        .collect()
}

//! Adapted coordinates on `T^k R^m`, lifts of polynomial maps, and the
//! canonical `G_k` actions on `T^k` and `T^{2*}`.

use std::collections::BTreeMap;

use num_traits::One;

use crate::algebra::{Polynomial, Rational, RationalExpr, Scalar, Var};
use crate::error::Result;
use crate::graded::{ActionFamily, GradedSignature, Monoid, Side, VarDecl};

/// `x`, `dx`, `ddx`, ...: the name of the order-`alpha` coordinate over `x`.
pub fn adapted_name(base: &str, alpha: usize) -> String {
    format!("{}{base}", "d".repeat(alpha))
}

pub fn adapted_var(base: &str, alpha: usize) -> Var {
    if alpha == 0 {
        Var::base(base)
    } else {
        Var::fiber(&adapted_name(base, alpha))
    }
}

/// Signature of `T^k R^m` over the given base names; rank `(m, .., m)`.
pub fn adapted_signature(bases: &[&str], k: usize) -> GradedSignature {
    let mut decls = Vec::new();
    for alpha in 0..=k {
        for b in bases {
            decls.push(VarDecl {
                var: adapted_var(b, alpha),
                weight: alpha as u32,
            });
        }
    }
    GradedSignature::new(decls).expect("adapted names are distinct")
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, j| acc * Rational::from_integer(j.into()))
}

/// `Σ_α τ^α/α! · x^{(α)}`, the formal curve through the adapted point.
fn formal_curve(base: &str, k: usize, tau: &Var) -> Polynomial {
    let tp = Polynomial::var(tau);
    let mut acc = Polynomial::zero();
    let mut pw = Polynomial::one();
    for alpha in 0..=k {
        if alpha > 0 {
            pw = &pw * &tp;
        }
        let c = Scalar::from(factorial(alpha).recip());
        let term = (&pw * &Polynomial::var(&adapted_var(base, alpha)))
            .scale(&c)
            .expect("rational scale");
        acc = &acc + &term;
    }
    acc
}

/// `α!·[τ^α] f` for `α = 0..=k`.
fn taylor_levels(f: &Polynomial, tau: &Var, k: usize) -> Vec<Polynomial> {
    (0..=k)
        .map(|alpha| {
            f.coeff_extract(tau, alpha as i32)
                .scale(&Scalar::from(factorial(alpha)))
                .expect("rational scale")
        })
        .collect()
}

/// `T^k φ` for `φ: R^m → R^n` given as target name ↦ polynomial in the
/// source base variables. The result maps every adapted target coordinate
/// to a polynomial in the adapted source coordinates.
pub fn tk_lift(
    phi: &BTreeMap<String, Polynomial>,
    src_bases: &[&str],
    k: usize,
) -> Result<BTreeMap<Var, Polynomial>> {
    let tau = Var::param("tau__curve");
    let curve: BTreeMap<Var, Polynomial> = src_bases
        .iter()
        .map(|b| (Var::base(b), formal_curve(b, k, &tau)))
        .collect();
    let mut out = BTreeMap::new();
    for (target, f) in phi {
        let along = f.substitute(&curve)?;
        for (alpha, p) in taylor_levels(&along, &tau, k).into_iter().enumerate() {
            out.insert(adapted_var(target, alpha), p);
        }
    }
    Ok(out)
}

/// The right `G_k` action `[γ]·[φ] = [γ∘φ]` on `T^k R^m`.
pub fn tk_right_action(bases: &[&str], k: usize, params: &[Var]) -> Result<ActionFamily> {
    assert_eq!(params.len(), k, "one parameter per jet order");
    let tau = Var::param("tau__curve");
    // φ(τ) = Σ a_j τ^j/j! as a series in τ.
    let pv: Vec<Polynomial> = params.iter().map(Polynomial::var).collect();
    let mut phi = Polynomial::zero();
    let tp = Polynomial::var(&tau);
    let mut pw = Polynomial::one();
    for (j, a) in pv.iter().enumerate() {
        pw = &pw * &tp;
        let c = Scalar::from(factorial(j + 1).recip());
        phi = &phi + &(&pw * a).scale(&c)?;
    }
    let mut comps = BTreeMap::new();
    for b in bases {
        let curve = formal_curve(b, k, &tau);
        let moved = curve.substitute(&BTreeMap::from([(tau.clone(), phi.clone())]))?;
        let moved = moved.filter_terms(|m| m.exponent(&tau) <= k as i32);
        for (alpha, p) in taylor_levels(&moved, &tau, k).into_iter().enumerate() {
            comps.insert(adapted_var(b, alpha), RationalExpr::from(p));
        }
    }
    ActionFamily::new(
        Monoid::Jets {
            order: k,
            side: Side::Right,
        },
        params.to_vec(),
        comps,
    )
}

/// Name of the symmetric coordinate `p_{ij}`, stored with `i ≤ j`.
pub fn pij_name(i: usize, j: usize) -> String {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    format!("p{i}_{j}")
}

/// Signature of `T^{2*} R^m`: base `x{i}`, weight-1 `p{i}`, weight-2 `p{i}_{j}`.
pub fn tkstar_signature(m: usize) -> GradedSignature {
    let mut decls = Vec::new();
    for i in 1..=m {
        decls.push(VarDecl {
            var: Var::base(&format!("x{i}")),
            weight: 0,
        });
    }
    for i in 1..=m {
        decls.push(VarDecl {
            var: Var::fiber(&format!("p{i}")),
            weight: 1,
        });
    }
    for i in 1..=m {
        for j in i..=m {
            decls.push(VarDecl {
                var: Var::fiber(&pij_name(i, j)),
                weight: 2,
            });
        }
    }
    GradedSignature::new(decls).expect("distinct names")
}

/// Extra names `p{j}_{i}` (with `j > i`) resolving to `p{i}_{j}`.
pub fn tkstar_aliases(m: usize) -> Vec<(String, Var)> {
    let mut out = Vec::new();
    for i in 1..=m {
        for j in 1..i {
            out.push((format!("p{i}_{j}"), Var::fiber(&pij_name(i, j))));
        }
    }
    out
}

/// `(a, b).(p_i, p_ij) = (a p_i, a p_ij + b p_i p_j)`.
pub fn tkstar_left_action(m: usize, a: &Var, b: &Var) -> Result<ActionFamily> {
    let (ap, bp) = (Polynomial::var(a), Polynomial::var(b));
    let p = |i: usize| Polynomial::var(&Var::fiber(&format!("p{i}")));
    let mut comps = BTreeMap::new();
    for i in 1..=m {
        comps.insert(Var::fiber(&format!("p{i}")), RationalExpr::from(&ap * &p(i)));
        for j in i..=m {
            let pij = Var::fiber(&pij_name(i, j));
            let c = &(&ap * &Polynomial::var(&pij)) + &(&bp * &(&p(i) * &p(j)));
            comps.insert(pij, RationalExpr::from(c));
        }
    }
    ActionFamily::new(
        Monoid::Jets {
            order: 2,
            side: Side::Left,
        },
        vec![a.clone(), b.clone()],
        comps,
    )
}

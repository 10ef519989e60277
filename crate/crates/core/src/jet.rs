//! The monoid `G_k` of `k`-jets at 0 of maps `(R,0) -> (R,0)` and its action
//! on the Weil algebra `R[ε]/⟨ε^{k+1}⟩`.
//!
//! A jet is stored as `(a_1, ..., a_k)` with `φ(t) = Σ a_j t^j / j!`.

use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{Polynomial, Rational, Scalar};
use crate::error::{Error, Result};

/// Coefficient rings jets can be composed over.
pub trait JetCoeff: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
}

impl JetCoeff for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
}

impl JetCoeff for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, r: &Rational) -> Self {
        Polynomial::scale(self, &Scalar::from(r.clone())).expect("rational scaling")
    }
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(<Rational as One>::one(), |acc, j| acc * Rational::from_integer(j.into()))
}

/// Series `[0, c_1, .., c_k]` of `Σ a_j t^j/j!`.
fn to_series<T: JetCoeff>(a: &[T]) -> Vec<T> {
    let mut s = vec![T::zero(); a.len() + 1];
    for (j, aj) in a.iter().enumerate() {
        s[j + 1] = aj.scale(&factorial(j + 1).recip());
    }
    s
}

fn from_series<T: JetCoeff>(s: &[T]) -> Vec<T> {
    (1..s.len()).map(|j| s[j].scale(&factorial(j))).collect()
}

fn series_mul<T: JetCoeff>(a: &[T], b: &[T]) -> Vec<T> {
    let n = a.len();
    let mut out = vec![T::zero(); n];
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] = out[i + j].add(&a[i].mul(&b[j]));
        }
    }
    out
}

/// `f(g(t))` truncated to the length of `g`; `g` has no constant term.
pub(crate) fn series_compose<T: JetCoeff>(f: &[T], g: &[T]) -> Vec<T> {
    let n = g.len();
    let mut out = vec![T::zero(); n];
    let mut pw = vec![T::zero(); n];
    pw[0] = T::one();
    for (j, fj) in f.iter().enumerate().take(n) {
        if j > 0 {
            pw = series_mul(&pw, g);
        }
        for (o, p) in out.iter_mut().zip(&pw) {
            *o = o.add(&fj.mul(p));
        }
    }
    out
}

/// Jet-coordinate product `[φ]·[ψ] = [φ∘ψ]` over any coefficient ring.
pub fn compose_coeffs<T: JetCoeff>(p: &[T], q: &[T]) -> Vec<T> {
    from_series(&series_compose(&to_series(p), &to_series(q)))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct JetElement {
    coeffs: Vec<Rational>,
}

impl JetElement {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::OrderMismatch(0, 1));
        }
        Ok(JetElement { coeffs })
    }

    pub fn identity(k: usize) -> Self {
        let mut coeffs = vec![<Rational as Zero>::zero(); k];
        coeffs[0] = <Rational as One>::one();
        JetElement { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_invertible(&self) -> bool {
        !self.coeffs[0].is_zero()
    }
}

impl fmt::Display for JetElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for JetElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn gk_compose(p: &JetElement, q: &JetElement) -> Result<JetElement> {
    if p.order() != q.order() {
        return Err(Error::OrderMismatch(p.order(), q.order()));
    }
    Ok(JetElement {
        coeffs: compose_coeffs(&p.coeffs, &q.coeffs),
    })
}

/// Two-sided inverse by series reversion.
pub fn gk_inverse(p: &JetElement) -> Result<JetElement> {
    if !p.is_invertible() {
        return Err(Error::NotInvertible);
    }
    let k = p.order();
    let a1_inv = p.coeffs[0].recip();
    // Solve φ(ψ(t)) = t one order at a time.
    let mut q = vec![<Rational as Zero>::zero(); k];
    q[0] = a1_inv.clone();
    for n in 1..k {
        let r = compose_coeffs(&p.coeffs, &q);
        q[n] = -&r[n] * &a1_inv;
    }
    Ok(JetElement { coeffs: q })
}

/// An algebra endomorphism of `R[ε]/⟨ε^{k+1}⟩`, stored as the image of `ε`
/// (coefficients of `1, ε, .., ε^k`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeilEndo {
    image: Vec<Rational>,
}

impl WeilEndo {
    pub fn identity(k: usize) -> Self {
        let mut image = vec![<Rational as Zero>::zero(); k + 1];
        image[1] = <Rational as One>::one();
        WeilEndo { image }
    }

    pub fn image(&self) -> &[Rational] {
        &self.image
    }

    pub fn order(&self) -> usize {
        self.image.len() - 1
    }

    /// `f(ε) ↦ f(image)`.
    pub fn apply(&self, f: &[Rational]) -> Vec<Rational> {
        let mut padded = f.to_vec();
        padded.resize(self.image.len(), <Rational as Zero>::zero());
        series_compose(&padded, &self.image)
    }

    /// Composition of maps, `self ∘ other`.
    pub fn compose(&self, other: &WeilEndo) -> WeilEndo {
        WeilEndo {
            image: self.apply(&other.image),
        }
    }
}

pub fn weil_endo(p: &JetElement) -> WeilEndo {
    WeilEndo {
        image: to_series(&p.coeffs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn jet(v: &[(i64, i64)]) -> JetElement {
        JetElement::new(v.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    #[test]
    fn second_order_product() {
        let r = gk_compose(&jet(&[(2, 1), (1, 1)]), &jet(&[(3, 1), (4, 1)])).unwrap();
        assert_eq!(r, jet(&[(6, 1), (17, 1)]));
    }

    #[test]
    fn not_commutative() {
        let p = jet(&[(1, 1), (1, 1)]);
        let q = jet(&[(2, 1), (0, 1)]);
        assert_eq!(gk_compose(&p, &q).unwrap(), jet(&[(2, 1), (4, 1)]));
        assert_eq!(gk_compose(&q, &p).unwrap(), jet(&[(2, 1), (2, 1)]));
    }

    #[test]
    fn inverses() {
        assert_eq!(gk_inverse(&jet(&[(2, 1), (1, 1)])).unwrap(), jet(&[(1, 2), (-1, 8)]));
        assert_eq!(gk_inverse(&jet(&[(-1, 1), (0, 1)])).unwrap(), jet(&[(-1, 1), (0, 1)]));
        assert_eq!(gk_inverse(&jet(&[(0, 1), (1, 1)])), Err(Error::NotInvertible));
        let p = jet(&[(3, 2), (-1, 1), (5, 1), (2, 3)]);
        let q = gk_inverse(&p).unwrap();
        assert_eq!(gk_compose(&p, &q).unwrap(), JetElement::identity(4));
        assert_eq!(gk_compose(&q, &p).unwrap(), JetElement::identity(4));
    }

    #[test]
    fn order_mismatch() {
        assert_eq!(
            gk_compose(&JetElement::identity(2), &JetElement::identity(3)),
            Err(Error::OrderMismatch(2, 3))
        );
    }

    #[test]
    fn weil_square_of_nilpotent_jet_vanishes() {
        let e = weil_endo(&jet(&[(0, 1), (1, 1)]));
        assert_eq!(e.image(), &[rat(0, 1), rat(0, 1), rat(1, 2)]);
        let sq = e.compose(&e);
        assert!(sq.image().iter().all(Zero::is_zero));
    }
}

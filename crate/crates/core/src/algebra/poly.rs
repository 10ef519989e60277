//! Sparse Laurent polynomials over [`Scalar`] with Grassmann (odd) variables.
//!
//! A term stores its odd factors in the canonical variable order; every
//! product re-sorts them and applies the Koszul sign. Odd variables never
//! carry an exponent other than 1, and only parameter variables carry
//! negative exponents.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Bound, Mul, Neg, Sub};

use super::scalar::Scalar;
use super::var::{Parity, Var};
use crate::error::{Error, Result};

/// A monomial: variables with non-zero exponents, in canonical order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(BTreeMap<Var, i32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(v: &Var) -> Self {
        Self::power(v, 1)
    }

    pub fn power(v: &Var, e: i32) -> Self {
        let mut m = BTreeMap::new();
        if e != 0 {
            m.insert(v.clone(), e);
        }
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: &Var) -> i32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, i32)> {
        self.0.iter().map(|(v, e)| (v, *e))
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.keys()
    }

    pub fn odd_count(&self) -> usize {
        self.0.keys().filter(|v| v.is_odd()).count()
    }

    pub fn parity(&self) -> Parity {
        if self.odd_count().is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Product `self · other`; `None` when an odd variable repeats. The flag
    /// is true when reordering the odd factors contributes a minus sign.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        let mut neg = false;
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            if v.is_odd() {
                if self.0.contains_key(v) {
                    return None;
                }
                let later = self
                    .0
                    .range((Bound::Excluded(v), Bound::Unbounded))
                    .filter(|(w, _)| w.is_odd())
                    .count();
                neg ^= later % 2 == 1;
                out.insert(v.clone(), 1);
            } else {
                let slot = out.entry(v.clone()).or_insert(0);
                *slot += e;
                if *slot == 0 {
                    out.remove(v);
                }
            }
        }
        Some((Monomial(out), neg))
    }

    /// Weighted degree with a per-variable weight.
    pub fn weight(&self, w: &impl Fn(&Var) -> i64) -> i64 {
        self.0.iter().map(|(v, e)| w(v) * *e as i64).sum()
    }

    fn without(&self, v: &Var) -> Monomial {
        let mut m = self.0.clone();
        m.remove(v);
        Monomial(m)
    }

    /// Split into (part over variables failing `pred`, part over variables
    /// satisfying `pred`).
    fn partition(&self, pred: &impl Fn(&Var) -> bool) -> (Monomial, Monomial) {
        let (sel, rest): (BTreeMap<_, _>, BTreeMap<_, _>) =
            self.0.iter().map(|(v, e)| (v.clone(), *e)).partition(|(v, _)| pred(v));
        (Monomial(rest), Monomial(sel))
    }

    /// Pure lexicographic order on exponent vectors (a monomial order).
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let mut a = self.0.iter().peekable();
        let mut b = other.0.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some((_, ea)), None) => return ea.signum().cmp(&0),
                (None, Some((_, eb))) => return 0.cmp(&eb.signum()),
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return ea.signum().cmp(&0),
                    Ordering::Greater => return 0.cmp(&eb.signum()),
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        a.next();
                        b.next();
                    }
                },
            }
        }
    }

    fn conjugate(&self) -> Monomial {
        Monomial(self.0.iter().map(|(v, e)| (v.conjugate(), *e)).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        // Parameters first, so `t^2*y` reads like the usual notation.
        let ordered = self
            .0
            .iter()
            .filter(|(v, _)| v.is_param())
            .chain(self.0.iter().filter(|(v, _)| !v.is_param()));
        for (i, (v, e)) in ordered.enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Scalar::int(n))
    }

    pub fn var(v: &Var) -> Self {
        Self::term(Scalar::one(), Monomial::var(v))
    }

    pub fn term(c: Scalar, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    /// `v^e`. Negative exponents are accepted only for parameter variables,
    /// and odd variables only to the first power.
    pub fn power_of(v: &Var, e: i32) -> Result<Self> {
        if e < 0 && !v.is_param() {
            return Err(Error::LaurentNotAllowed(v.to_string()));
        }
        if v.is_odd() && e > 1 {
            return Ok(Self::zero());
        }
        if v.is_odd() && e < 0 {
            return Err(Error::NotPolynomial(format!("negative power of odd {v}")));
        }
        Ok(Self::term(Scalar::one(), Monomial::power(v, e)))
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Scalar)>) -> Result<Self> {
        let mut p = Polynomial::zero();
        for (m, c) in it {
            p.add_term(m, &c)?;
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: &Scalar) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.checked_add(c)?;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Scalar)> {
        self.terms.into_iter()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// The single term, when there is exactly one.
    pub fn as_term(&self) -> Option<(&Monomial, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.vars().cloned())
            .collect()
    }

    pub fn contains_var(&self, pred: impl Fn(&Var) -> bool) -> bool {
        self.terms.keys().any(|m| m.vars().any(&pred))
    }

    /// Common parity of all terms; `None` for inhomogeneous parity. Zero is even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(Monomial::parity);
        let first = it.next().unwrap_or(Parity::Even);
        it.all(|p| p == first).then_some(first)
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c)?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, neg)) = ma.mul(mb) {
                    let mut c = ca.checked_mul(cb)?;
                    if neg {
                        c = -c;
                    }
                    out.add_term(m, &c)?;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Result<Polynomial> {
        if c.is_zero() {
            return Ok(Polynomial::zero());
        }
        let mut out = Polynomial::zero();
        for (m, a) in &self.terms {
            out.add_term(m.clone(), &a.checked_mul(c)?)?;
        }
        Ok(out)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, c) in &self.terms {
            if let Some((mm, neg)) = ma.mul(m) {
                let c = if neg { -c } else { c.clone() };
                out.add_term(mm, &c).expect("same field");
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Result<Polynomial> {
        let mut acc = Polynomial::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Inverse of an invertible single even term (a Laurent monomial).
    pub fn monomial_inverse(&self) -> Option<Polynomial> {
        let (m, c) = self.as_term()?;
        if m.odd_count() > 0 || m.vars().any(|v| !v.is_param()) {
            return None;
        }
        let inv = Monomial(m.iter().map(|(v, e)| (v.clone(), -e)).collect());
        Some(Polynomial::term(c.inv().ok()?, inv))
    }

    /// Partial derivative. For an odd variable this is the left derivative.
    pub fn derivative(&self, v: &Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            if v.is_odd() {
                let before = m.vars().take_while(|w| *w < v).filter(|w| w.is_odd()).count();
                let c = if before % 2 == 1 { -c } else { c.clone() };
                out.add_term(m.without(v), &c).expect("same field");
            } else {
                let mut mm = m.clone();
                if e == 1 {
                    mm.0.remove(v);
                } else {
                    mm.0.insert(v.clone(), e - 1);
                }
                out.add_term(mm, &(c * &Scalar::int(e as i64))).expect("same field");
            }
        }
        out
    }

    /// Simultaneous substitution; unmapped variables are left untouched.
    /// Images must match the parity of the variable they replace.
    pub fn substitute(&self, map: &BTreeMap<Var, Polynomial>) -> Result<Polynomial> {
        for (v, img) in map {
            if !img.is_zero() {
                check_image_parity(v, img.parity())?;
            }
        }
        let mut cache: HashMap<(Var, i32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut acc = Polynomial::constant(c.clone());
            for (v, e) in m.iter() {
                let factor = match map.get(v) {
                    None => Polynomial::term(Scalar::one(), Monomial::power(v, e)),
                    Some(img) => match cache.get(&(v.clone(), e)) {
                        Some(p) => p.clone(),
                        None => {
                            let p = if e >= 0 {
                                img.pow(e as u32)?
                            } else {
                                img.monomial_inverse()
                                    .ok_or_else(|| Error::NonMonomialLaurent(v.to_string()))?
                                    .pow((-e) as u32)?
                            };
                            cache.insert((v.clone(), e), p.clone());
                            p
                        }
                    },
                };
                acc = acc.checked_mul(&factor)?;
                if acc.is_zero() {
                    break;
                }
            }
            out = out.checked_add(&acc)?;
        }
        Ok(out)
    }

    /// Replace variables by other variables (used for fresh parameter copies).
    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Polynomial {
        let sub: BTreeMap<Var, Polynomial> = map
            .iter()
            .map(|(a, b)| (a.clone(), Polynomial::var(b)))
            .collect();
        // Renaming an even parameter to an even parameter never needs a
        // non-monomial inverse.
        self.substitute(&sub).expect("renaming preserves parity")
    }

    /// Coefficient of `p^k`, with `p` removed from every monomial.
    pub fn coeff_extract(&self, p: &Var, k: i32) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if m.exponent(p) == k {
                out.add_term(m.without(p), c).expect("same field");
            }
        }
        out
    }

    /// Smallest exponent of `p`; `None` for the zero polynomial.
    pub fn laurent_min_exponent(&self, p: &Var) -> Option<i32> {
        self.terms.keys().map(|m| m.exponent(p)).min()
    }

    pub fn max_exponent(&self, p: &Var) -> Option<i32> {
        self.terms.keys().map(|m| m.exponent(p)).max()
    }

    /// Terms whose exponent of `p` is negative.
    pub fn negative_part(&self, p: &Var) -> Polynomial {
        self.filter_terms(|m| m.exponent(p) < 0)
    }

    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drop every term with at least `k` odd factors (reduction modulo `J^k`).
    pub fn mod_odd_power(&self, k: usize) -> Polynomial {
        self.filter_terms(|m| m.odd_count() < k)
    }

    /// Group by weighted degree; components sum back to `self`.
    pub fn weight_decompose(&self, w: impl Fn(&Var) -> i64) -> BTreeMap<i64, Polynomial> {
        let mut out: BTreeMap<i64, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.weight(&w))
                .or_default()
                .add_term(m.clone(), c)
                .expect("same field");
        }
        out
    }

    /// Write `self = Σ coeff_m · m` where `m` ranges over monomials in the
    /// variables selected by `pred` and each coefficient avoids them.
    pub fn split_by(&self, pred: impl Fn(&Var) -> bool) -> BTreeMap<Monomial, Polynomial> {
        let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, sel) = m.partition(&pred);
            let (_, neg) = rest.mul(&sel).expect("disjoint factors");
            let c = if neg { -c } else { c.clone() };
            out.entry(sel)
                .or_default()
                .add_term(rest, &c)
                .expect("same field");
        }
        out
    }

    /// Formal conjugation: every variable is swapped with its conjugate and
    /// every scalar is conjugated.
    pub fn conjugate(&self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.conjugate(), c.conj()))
                .collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c)?)?;
        }
        Ok(out)
    }

    /// Leading term under pure lex order.
    pub fn lex_leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    /// Exact quotient by an even divisor, if the division leaves no remainder.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        let (dm, dc) = d.lex_leading()?;
        if dm.odd_count() > 0 {
            return None;
        }
        let dc_inv = dc.inv().ok()?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        for _ in 0..10_000 {
            let Some((rm, rc)) = rem.lex_leading() else {
                return Some(quot);
            };
            let mut qm = rm.clone();
            for (v, e) in dm.iter() {
                let slot = qm.0.entry(v.clone()).or_insert(0);
                *slot -= e;
                if *slot < 0 && !v.is_param() {
                    return None;
                }
                if *slot == 0 {
                    qm.0.remove(v);
                }
            }
            let qc = rc.checked_mul(&dc_inv).ok()?;
            let qt = Polynomial::term(qc, qm);
            rem = rem.checked_sub(&qt.checked_mul(d).ok()?).ok()?;
            quot = quot.checked_add(&qt).ok()?;
        }
        None
    }

    /// Largest monomial dividing every term, over even non-parameter variables.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g: BTreeMap<Var, i32> = first
            .iter()
            .filter(|(v, e)| !v.is_odd() && !v.is_param() && *e > 0)
            .map(|(v, e)| (v.clone(), e))
            .collect();
        for m in it {
            g.retain(|v, e| {
                *e = (*e).min(m.exponent(v));
                *e > 0
            });
        }
        Monomial(g)
    }

    /// Divide by a monomial that divides every term.
    pub fn div_monomial(&self, m: &Monomial) -> Polynomial {
        let inv = Monomial(m.iter().map(|(v, e)| (v.clone(), -e)).collect());
        self.mul_monomial(&inv)
    }

    /// Total degree in the variables selected by `pred`, per term.
    pub fn degrees_in(&self, pred: impl Fn(&Var) -> bool) -> BTreeSet<i32> {
        self.terms
            .keys()
            .map(|m| m.iter().filter(|(v, _)| pred(v)).map(|(_, e)| e).sum())
            .collect()
    }

    /// Keep the terms of total degree `d` in the variables selected by `pred`.
    pub fn homogeneous_part_in(&self, pred: impl Fn(&Var) -> bool, d: i32) -> Polynomial {
        self.filter_terms(|m| m.iter().filter(|(v, _)| pred(v)).map(|(_, e)| e).sum::<i32>() == d)
    }
}

fn check_image_parity(v: &Var, image: Option<Parity>) -> Result<()> {
    match image {
        Some(p) if p == v.parity() => Ok(()),
        Some(p) => Err(Error::ParityViolation(format!(
            "{v} is {:?} but its image is {:?}",
            v.parity(),
            p
        ))),
        None => Err(Error::ParityViolation(format!(
            "image of {v} has mixed parity"
        ))),
    }
}

pub(crate) fn check_parity(v: &Var, image: &Polynomial) -> Result<()> {
    if image.is_zero() {
        return Ok(());
    }
    check_image_parity(v, image.parity())
}

/// Evaluate the parameter pair `(ξ, conj(ξ))` at `(ζ_m, ζ_m^{m-1})`.
pub fn cyclo_eval(f: &Polynomial, xi: &Var, m: u32) -> Result<Polynomial> {
    if m == 0 {
        return Err(Error::ZeroCyclotomicOrder);
    }
    let root = Scalar::root_of_unity(m, 1)?;
    let map = BTreeMap::from([
        (xi.clone(), Polynomial::constant(root.clone())),
        (xi.conjugate(), Polynomial::constant(root.conj())),
    ]);
    f.substitute(&map)
}

impl From<Scalar> for Polynomial {
    fn from(c: Scalar) -> Self {
        Polynomial::constant(c)
    }
}

impl From<&Var> for Polynomial {
    fn from(v: &Var) -> Self {
        Polynomial::var(v)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

// Operators panic if cyclotomic orders clash; see `checked_*`.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        self.checked_add(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        self.checked_sub(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        self.checked_mul(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, o: Polynomial) -> Polynomial {
        &self + &o
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, o: Polynomial) -> Polynomial {
        &self - &o
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, o: Polynomial) -> Polynomial {
        &self * &o
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.is_negative_rational() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `lhs op rhs` for the three ring operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(lhs: &Polynomial, rhs: &Polynomial, op: RingOp) -> Result<Polynomial> {
    match op {
        RingOp::Add => lhs.checked_add(rhs),
        RingOp::Sub => lhs.checked_sub(rhs),
        RingOp::Mul => lhs.checked_mul(rhs),
    }
}

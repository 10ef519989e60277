//! Quotients `num / den` whose denominator is an even polynomial in base
//! variables. Parameter monomials never stay in the denominator: they are
//! moved into the numerator as negative exponents.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::poly::{check_parity, Monomial, Polynomial};
use super::scalar::Scalar;
use super::var::{Parity, Var, VarKind};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct RationalExpr {
    num: Polynomial,
    den: Polynomial,
}

impl RationalExpr {
    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn int(n: i64) -> Self {
        Self::from_poly(Polynomial::int(n))
    }

    pub fn var(v: &Var) -> Self {
        Self::from_poly(Polynomial::var(v))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalExpr {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if den.parity() != Some(Parity::Even) || den.terms().any(|(m, _)| m.odd_count() > 0) {
            return Err(Error::NotPolynomial(format!("odd denominator {den}")));
        }
        let r = RationalExpr { num, den }.normalized()?;
        if let Some(v) = r.den.variables().into_iter().find(|v| v.kind() != VarKind::Base) {
            return Err(Error::NotPolynomial(format!(
                "denominator {} involves non-base variable {v}",
                r.den
            )));
        }
        Ok(r)
    }

    fn normalized(self) -> Result<Self> {
        let RationalExpr { mut num, mut den } = self;
        if num.is_zero() {
            return Ok(Self::zero());
        }
        // Parameter monomials leave the denominator.
        let params: Vec<Var> = den.variables().into_iter().filter(Var::is_param).collect();
        for p in params {
            let e = den.laurent_min_exponent(&p).unwrap_or(0);
            if e != 0 {
                let shift = Monomial::power(&p, -e);
                den = den.mul_monomial(&shift);
                num = num.mul_monomial(&shift);
            }
        }
        let dc = den.monomial_content();
        if !dc.is_one() {
            let nc = num.monomial_content();
            let g: Vec<(Var, i32)> = dc
                .iter()
                .map(|(v, e)| (v.clone(), e.min(nc.exponent(v))))
                .filter(|(_, e)| *e > 0)
                .collect();
            for (v, e) in g {
                let m = Monomial::power(&v, e);
                num = num.div_monomial(&m);
                den = den.div_monomial(&m);
            }
        }
        if let Some(c) = den.as_constant() {
            return Ok(Self::from_poly(num.scale(&c.inv()?)?));
        }
        if let Some(q) = num.div_exact(&den) {
            return Ok(Self::from_poly(q));
        }
        let lc = den.lex_leading().map(|(_, c)| c.clone()).ok_or(Error::DivisionByZero)?;
        if !lc.is_one() {
            let inv = lc.inv()?;
            num = num.scale(&inv)?;
            den = den.scale(&inv)?;
        }
        Ok(RationalExpr { num, den })
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_poly(&self) -> Option<&Polynomial> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn to_poly(&self) -> Result<Polynomial> {
        self.as_poly()
            .cloned()
            .ok_or_else(|| Error::NotPolynomial(self.to_string()))
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        self.as_poly().and_then(Polynomial::as_constant)
    }

    pub fn parity(&self) -> Option<Parity> {
        self.num.parity()
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        let mut v = self.num.variables();
        v.extend(self.den.variables());
        v
    }

    pub fn checked_add(&self, o: &RationalExpr) -> Result<RationalExpr> {
        if self.den == o.den {
            return RationalExpr {
                num: self.num.checked_add(&o.num)?,
                den: self.den.clone(),
            }
            .normalized();
        }
        let num = self
            .num
            .checked_mul(&o.den)?
            .checked_add(&o.num.checked_mul(&self.den)?)?;
        RationalExpr {
            num,
            den: self.den.checked_mul(&o.den)?,
        }
        .normalized()
    }

    pub fn checked_sub(&self, o: &RationalExpr) -> Result<RationalExpr> {
        self.checked_add(&-o)
    }

    pub fn checked_mul(&self, o: &RationalExpr) -> Result<RationalExpr> {
        if self.is_polynomial() && o.is_polynomial() {
            return Ok(Self::from_poly(self.num.checked_mul(&o.num)?));
        }
        RationalExpr {
            num: self.num.checked_mul(&o.num)?,
            den: self.den.checked_mul(&o.den)?,
        }
        .normalized()
    }

    pub fn inv(&self) -> Result<RationalExpr> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.num.terms().any(|(m, _)| m.odd_count() > 0) {
            return Err(Error::NotPolynomial(format!("cannot invert {self}")));
        }
        RationalExpr::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, o: &RationalExpr) -> Result<RationalExpr> {
        self.checked_mul(&o.inv()?)
    }

    pub fn pow(&self, e: i32) -> Result<RationalExpr> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        Ok(RationalExpr {
            num: self.num.pow(e as u32)?,
            den: self.den.pow(e as u32)?,
        })
    }

    pub fn scale(&self, c: &Scalar) -> Result<RationalExpr> {
        RationalExpr {
            num: self.num.scale(c)?,
            den: self.den.clone(),
        }
        .normalized()
    }

    /// Simultaneous substitution with base-rational images.
    pub fn substitute(&self, map: &BTreeMap<Var, RationalExpr>) -> Result<RationalExpr> {
        if map.values().all(RationalExpr::is_polynomial) {
            let pm: BTreeMap<Var, Polynomial> =
                map.iter().map(|(k, v)| (k.clone(), v.num.clone())).collect();
            return self.substitute_poly(&pm);
        }
        let num = subst_rational(&self.num, map)?;
        let den = subst_rational(&self.den, map)?;
        num.checked_div(&den)
    }

    pub fn substitute_poly(&self, map: &BTreeMap<Var, Polynomial>) -> Result<RationalExpr> {
        let num = self.num.substitute(map)?;
        if self.is_polynomial() {
            return Ok(Self::from_poly(num));
        }
        let den = self.den.substitute(map)?;
        RationalExpr::new(num, den)
    }

    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> RationalExpr {
        RationalExpr {
            num: self.num.rename(map),
            den: self.den.rename(map),
        }
    }

    pub fn derivative(&self, v: &Var) -> Result<RationalExpr> {
        let dn = self.num.derivative(v);
        if self.is_polynomial() {
            return Ok(Self::from_poly(dn));
        }
        let dd = self.den.derivative(v);
        let num = dn
            .checked_mul(&self.den)?
            .checked_sub(&self.num.checked_mul(&dd)?)?;
        RationalExpr {
            num,
            den: self.den.checked_mul(&self.den)?,
        }
        .normalized()
    }

    pub fn conjugate(&self) -> RationalExpr {
        RationalExpr {
            num: self.num.conjugate(),
            den: self.den.conjugate(),
        }
        .normalized()
        .expect("conjugation preserves the field")
    }

    /// Coefficient of `p^k` for a parameter `p` (never in the denominator).
    pub fn coeff_extract(&self, p: &Var, k: i32) -> RationalExpr {
        RationalExpr {
            num: self.num.coeff_extract(p, k),
            den: self.den.clone(),
        }
        .normalized()
        .expect("denominator unchanged")
    }

    pub fn laurent_min_exponent(&self, p: &Var) -> Option<i32> {
        self.num.laurent_min_exponent(p)
    }

    pub fn max_exponent(&self, p: &Var) -> Option<i32> {
        self.num.max_exponent(p)
    }

    pub fn map_num(&self, f: impl FnOnce(&Polynomial) -> Polynomial) -> RationalExpr {
        RationalExpr {
            num: f(&self.num),
            den: self.den.clone(),
        }
        .normalized()
        .expect("denominator unchanged")
    }

    pub fn mod_odd_power(&self, k: usize) -> RationalExpr {
        self.map_num(|n| n.mod_odd_power(k))
    }

    /// Split over monomials in the selected (non-denominator) variables.
    pub fn split_by(&self, pred: impl Fn(&Var) -> bool) -> BTreeMap<Monomial, RationalExpr> {
        self.num
            .split_by(pred)
            .into_iter()
            .map(|(m, c)| {
                let r = RationalExpr {
                    num: c,
                    den: self.den.clone(),
                }
                .normalized()
                .expect("denominator unchanged");
                (m, r)
            })
            .collect()
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<RationalExpr> {
        RationalExpr {
            num: self.num.map_coeffs(&f)?,
            den: self.den.map_coeffs(&f)?,
        }
        .normalized()
    }
}

fn subst_rational(p: &Polynomial, map: &BTreeMap<Var, RationalExpr>) -> Result<RationalExpr> {
    for (v, img) in map {
        check_parity(v, &img.num)?;
    }
    let mut out = RationalExpr::zero();
    for (m, c) in p.terms() {
        let mut acc = RationalExpr::constant(c.clone());
        for (v, e) in m.iter() {
            let f = match map.get(v) {
                Some(img) => img.pow(e)?,
                None => RationalExpr::from_poly(Polynomial::term(Scalar::one(), Monomial::power(v, e))),
            };
            acc = acc.checked_mul(&f)?;
        }
        out = out.checked_add(&acc)?;
    }
    Ok(out)
}

impl PartialEq for RationalExpr {
    fn eq(&self, o: &RationalExpr) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        self.num.checked_mul(&o.den).ok() == o.num.checked_mul(&self.den).ok()
    }
}

impl Eq for RationalExpr {}

impl From<Polynomial> for RationalExpr {
    fn from(p: Polynomial) -> Self {
        RationalExpr::from_poly(p)
    }
}

impl From<Scalar> for RationalExpr {
    fn from(c: Scalar) -> Self {
        RationalExpr::constant(c)
    }
}

impl Neg for &RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        RationalExpr {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        -&self
    }
}

impl Add for &RationalExpr {
    type Output = RationalExpr;
    fn add(self, o: &RationalExpr) -> RationalExpr {
        self.checked_add(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &RationalExpr {
    type Output = RationalExpr;
    fn sub(self, o: &RationalExpr) -> RationalExpr {
        self.checked_sub(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &RationalExpr {
    type Output = RationalExpr;
    fn mul(self, o: &RationalExpr) -> RationalExpr {
        self.checked_mul(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl fmt::Debug for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

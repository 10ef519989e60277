use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::cyclotomic;
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gaussian {
    pub re: Rational,
    pub im: Rational,
}

impl Gaussian {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gaussian { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        Gaussian {
            re,
            im: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn i() -> Self {
        Gaussian::new(Rational::zero(), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gaussian::new(self.re.clone(), -&self.im)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Gaussian::new(&self.re * r, &self.im * r)
    }

    pub fn inv(&self) -> Result<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Gaussian::new(&self.re / &norm, -&self.im / &norm))
    }
}

impl Add for &Gaussian {
    type Output = Gaussian;
    fn add(self, o: &Gaussian) -> Gaussian {
        Gaussian::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &Gaussian {
    type Output = Gaussian;
    fn sub(self, o: &Gaussian) -> Gaussian {
        Gaussian::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &Gaussian {
    type Output = Gaussian;
    fn mul(self, o: &Gaussian) -> Gaussian {
        Gaussian::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

/// An exact scalar.
///
/// Values are kept in the smallest field that contains them: a cyclotomic
/// value that happens to be Gaussian is stored as `Gaussian`, and a Gaussian
/// value with zero imaginary part as `Rational`. Structural equality is
/// therefore value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    Gaussian(Gaussian),
    Cyclotomic { order: u32, coeffs: Vec<Gaussian> },
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Rational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rational(Rational::from_integer(n.into()))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Rational(rat(num, den))
    }

    pub fn i() -> Self {
        Scalar::Gaussian(Gaussian::i())
    }

    pub fn gaussian(re: Rational, im: Rational) -> Self {
        Self::from_gaussian(Gaussian::new(re, im))
    }

    pub fn from_gaussian(g: Gaussian) -> Self {
        if g.im.is_zero() {
            Scalar::Rational(g.re)
        } else {
            Scalar::Gaussian(g)
        }
    }

    /// Builds a cyclotomic value from raw coefficients of powers of `ζ_m`,
    /// reducing modulo `Φ_m` and demoting when possible.
    pub fn cyclotomic(order: u32, coeffs: Vec<Gaussian>) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroCyclotomicOrder);
        }
        Ok(Self::canonical(order, cyclotomic::reduce(order, coeffs)))
    }

    /// `ζ_m^k`, the primitive `m`-th root of unity `e^{2πi/m}` raised to `k`.
    pub fn root_of_unity(order: u32, k: i64) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroCyclotomicOrder);
        }
        Ok(Self::canonical(order, cyclotomic::root_power(order, k)))
    }

    fn canonical(order: u32, coeffs: Vec<Gaussian>) -> Self {
        match cyclotomic::as_gaussian(order, &coeffs) {
            Some(g) => Self::from_gaussian(g),
            None => Scalar::Cyclotomic { order, coeffs },
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_gaussian(&self) -> Option<Gaussian> {
        match self {
            Scalar::Rational(r) => Some(Gaussian::from_rational(r.clone())),
            Scalar::Gaussian(g) => Some(g.clone()),
            Scalar::Cyclotomic { .. } => None,
        }
    }

    /// Integer value, when this scalar is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    pub fn cyclotomic_order(&self) -> Option<u32> {
        match self {
            Scalar::Cyclotomic { order, .. } => Some(*order),
            _ => None,
        }
    }

    fn lift(&self, order: u32) -> Vec<Gaussian> {
        match self {
            Scalar::Cyclotomic { coeffs, .. } => coeffs.clone(),
            other => cyclotomic::lift(order, &other.as_gaussian().expect("non-cyclotomic")),
        }
    }

    fn common_order(&self, other: &Scalar) -> Result<Option<u32>> {
        match (self.cyclotomic_order(), other.cyclotomic_order()) {
            (Some(a), Some(b)) if a != b => Err(Error::MixedCyclotomicOrders(a, b)),
            (a, b) => Ok(a.or(b)),
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            _ => match self.common_order(other)? {
                Some(m) => Ok(Self::canonical(
                    m,
                    cyclotomic::add(&self.lift(m), &other.lift(m)),
                )),
                None => Ok(Self::from_gaussian(
                    &self.as_gaussian().unwrap() + &other.as_gaussian().unwrap(),
                )),
            },
        }
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            _ => match self.common_order(other)? {
                Some(m) => Ok(Self::canonical(
                    m,
                    cyclotomic::mul(m, &self.lift(m), &other.lift(m)),
                )),
                None => Ok(Self::from_gaussian(
                    &self.as_gaussian().unwrap() * &other.as_gaussian().unwrap(),
                )),
            },
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Rational(r) if r.is_zero() => Err(Error::DivisionByZero),
            Scalar::Rational(r) => Ok(Scalar::Rational(r.recip())),
            Scalar::Gaussian(g) => Ok(Self::from_gaussian(g.inv()?)),
            Scalar::Cyclotomic { order, coeffs } => Ok(Self::canonical(
                *order,
                cyclotomic::inverse(*order, coeffs)?,
            )),
        }
    }

    pub fn pow(&self, e: i32) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.checked_mul(&base)?;
        }
        Ok(acc)
    }

    /// Complex conjugation (`i ↦ -i`, `ζ_m ↦ ζ_m^{m-1}`).
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Rational(_) => self.clone(),
            Scalar::Gaussian(g) => Scalar::Gaussian(g.conj()),
            Scalar::Cyclotomic { order, coeffs } => {
                Self::canonical(*order, cyclotomic::conjugate(*order, coeffs))
            }
        }
    }

    pub(crate) fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Gaussian(g) => Scalar::Gaussian(Gaussian::new(-&g.re, -&g.im)),
            Scalar::Cyclotomic { order, coeffs } => Scalar::Cyclotomic {
                order: *order,
                coeffs: coeffs.iter().map(|c| &Gaussian::zero() - c).collect(),
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

// Operators panic when cyclotomic orders differ; use the `checked_*`
// methods where mixed orders can occur.
impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.checked_add(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.checked_sub(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.checked_mul(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rational(&self.re, f);
        }
        if self.re.is_zero() {
            fmt_im(&self.im, f)
        } else {
            write!(f, "(")?;
            fmt_rational(&self.re, f)?;
            if self.im.is_negative() {
                write!(f, " - ")?;
                fmt_im(&-&self.im, f)?;
            } else {
                write!(f, " + ")?;
                fmt_im(&self.im, f)?;
            }
            write!(f, ")")
        }
    }
}

fn fmt_im(im: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if im.is_one() {
        write!(f, "i")
    } else if (-im).is_one() {
        write!(f, "-i")
    } else {
        fmt_rational(im, f)?;
        write!(f, "*i")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => fmt_rational(r, f),
            Scalar::Gaussian(g) => {
                if g.re.is_zero() {
                    write!(f, "(")?;
                    fmt_im(&g.im, f)?;
                    write!(f, ")")
                } else {
                    write!(f, "{g}")
                }
            }
            Scalar::Cyclotomic { order, coeffs } => {
                let mut first = true;
                write!(f, "(")?;
                for (j, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    match j {
                        0 => write!(f, "{c}")?,
                        1 if *c == Gaussian::one() => write!(f, "zeta{order}")?,
                        1 => write!(f, "{c}*zeta{order}")?,
                        _ if *c == Gaussian::one() => write!(f, "zeta{order}^{j}")?,
                        _ => write!(f, "{c}*zeta{order}^{j}")?,
                    }
                }
                write!(f, ")")
            }
        }
    }
}

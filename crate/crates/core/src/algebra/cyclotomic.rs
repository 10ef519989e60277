//! Arithmetic in `Q(i)[s] / Φ_m(s)`, the cyclotomic extension holding the
//! primitive root `ζ_m = s`.
//!
//! When `4 | m` the Gaussian unit is itself a power of `ζ_m`
//! (`i = ζ_m^{m/4}`), so every coefficient is rewritten over `Q` and the
//! quotient stays a field. Otherwise `Φ_m` remains irreducible over `Q(i)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::scalar::{Gaussian, Rational};
use crate::error::{Error, Result};

/// Integer coefficients of the `m`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    assert!(m > 0, "cyclotomic order must be positive");
    // s^m - 1 divided by every Φ_d with d a proper divisor of m.
    let mut poly = vec![BigInt::zero(); m as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            poly = exact_div_monic(&poly, &cyclotomic_polynomial(d));
        }
    }
    poly
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for q in (0..qlen).rev() {
        let c = rem[q + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[q + j] -= &c * dj;
        }
        quot[q] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Euler's totient, i.e. the degree of `Φ_m`.
pub fn totient(m: u32) -> usize {
    (1..=m).filter(|k| num_integer::gcd(*k, m) == 1).count()
}

/// Reduce an arbitrary coefficient vector modulo `Φ_m`, returning exactly
/// `totient(m)` coefficients in canonical form.
pub fn reduce(order: u32, coeffs: Vec<Gaussian>) -> Vec<Gaussian> {
    let phi = cyclotomic_polynomial(order);
    let deg = phi.len() - 1;
    let mut work = coeffs;
    if order.is_multiple_of(4) {
        // Move the imaginary parts onto ζ^{m/4}.
        let shift = (order / 4) as usize;
        let mut real = vec![Gaussian::zero(); work.len() + shift];
        for (j, c) in work.iter().enumerate() {
            real[j].re += &c.re;
            real[j + shift].re += &c.im;
        }
        work = real;
    }
    for top in (deg..work.len()).rev() {
        let c = work[top].clone();
        if c.is_zero() {
            continue;
        }
        let base = top - deg;
        for (j, pj) in phi.iter().enumerate() {
            let pj = Rational::from_integer(pj.clone());
            work[base + j] = &work[base + j] - &c.scale(&pj);
        }
    }
    work.resize(deg, Gaussian::zero());
    work
}

/// `ζ_m^k` for any integer `k`.
pub fn root_power(order: u32, k: i64) -> Vec<Gaussian> {
    let e = k.rem_euclid(order as i64) as usize;
    let mut v = vec![Gaussian::zero(); e + 1];
    v[e] = Gaussian::one();
    reduce(order, v)
}

pub fn add(a: &[Gaussian], b: &[Gaussian]) -> Vec<Gaussian> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Gaussian], b: &[Gaussian]) -> Vec<Gaussian> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn mul(order: u32, a: &[Gaussian], b: &[Gaussian]) -> Vec<Gaussian> {
    let mut out = vec![Gaussian::zero(); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    reduce(order, out)
}

/// Lift a Gaussian rational into the order-`m` representation.
pub fn lift(order: u32, g: &Gaussian) -> Vec<Gaussian> {
    reduce(order, vec![g.clone()])
}

/// Complex conjugation: coefficients are conjugated and `ζ ↦ ζ^{m-1}`.
pub fn conjugate(order: u32, a: &[Gaussian]) -> Vec<Gaussian> {
    let mut out = vec![Gaussian::zero(); totient(order)];
    for (j, c) in a.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let p = root_power(order, -(j as i64));
        let term = mul(order, &lift(order, &c.conj()), &p);
        out = add(&out, &term);
    }
    out
}

/// Multiplicative inverse by the extended Euclidean algorithm over `Q(i)[s]`.
pub fn inverse(order: u32, a: &[Gaussian]) -> Result<Vec<Gaussian>> {
    if a.iter().all(Gaussian::is_zero) {
        return Err(Error::DivisionByZero);
    }
    let phi: Vec<Gaussian> = cyclotomic_polynomial(order)
        .into_iter()
        .map(|c| Gaussian::from_rational(Rational::from_integer(c)))
        .collect();
    // Invariant: r0 = s0 * a (mod Φ), r1 = s1 * a (mod Φ).
    let (mut r0, mut r1) = (trim(phi), trim(a.to_vec()));
    let (mut s0, mut s1) = (vec![], vec![Gaussian::one()]);
    while r1.len() > 1 {
        let (q, r) = poly_divmod(&r0, &r1)?;
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if r1.is_empty() {
        return Err(Error::DivisionByZero);
    }
    let c = r1[0].inv()?;
    let scaled: Vec<Gaussian> = s1.iter().map(|x| x * &c).collect();
    Ok(reduce(order, scaled))
}

fn trim(mut v: Vec<Gaussian>) -> Vec<Gaussian> {
    while v.last().is_some_and(Gaussian::is_zero) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[Gaussian], b: &[Gaussian]) -> Vec<Gaussian> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Gaussian::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trim(out)
}

fn poly_sub(a: &[Gaussian], b: &[Gaussian]) -> Vec<Gaussian> {
    let n = a.len().max(b.len());
    let z = Gaussian::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect(),
    )
}

fn poly_divmod(a: &[Gaussian], b: &[Gaussian]) -> Result<(Vec<Gaussian>, Vec<Gaussian>)> {
    let lead_inv = b.last().ok_or(Error::DivisionByZero)?.inv()?;
    let mut rem = a.to_vec();
    if rem.len() < b.len() {
        return Ok((vec![], trim(rem)));
    }
    let mut quot = vec![Gaussian::zero(); rem.len() - b.len() + 1];
    for q in (0..quot.len()).rev() {
        let c = &rem[q + b.len() - 1] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[q + j] = &rem[q + j] - &(&c * bj);
        }
        quot[q] = c;
    }
    Ok((trim(quot), trim(rem)))
}

/// True when the (canonical) element lies in `Q(i)`; returns that value.
pub fn as_gaussian(order: u32, a: &[Gaussian]) -> Option<Gaussian> {
    if a.iter().skip(1).all(Gaussian::is_zero) {
        return Some(a.first().cloned().unwrap_or_else(Gaussian::zero));
    }
    if !order.is_multiple_of(4) {
        return None;
    }
    let unit = root_power(order, (order / 4) as i64);
    let j = unit.iter().skip(1).position(|c| !c.is_zero())? + 1;
    let c1 = &a[j].re / &unit[j].re;
    let c0 = &a[0].re - &(&c1 * &unit[0].re);
    let rebuilt: Vec<Gaussian> = unit
        .iter()
        .enumerate()
        .map(|(idx, u)| {
            let mut v = Gaussian::from_rational(&c1 * &u.re);
            if idx == 0 {
                v.re += &c0;
            }
            v
        })
        .collect();
    (rebuilt.as_slice() == a).then(|| Gaussian::new(c0, c1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::rat;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn known_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
        for m in 1..=30 {
            assert_eq!(cyclotomic_polynomial(m).len() - 1, totient(m));
        }
    }

    #[test]
    fn root_has_exact_order() {
        for m in 1..=12u32 {
            assert_eq!(
                as_gaussian(m, &root_power(m, m as i64)),
                Some(Gaussian::one())
            );
            for k in 1..m as i64 {
                assert_ne!(root_power(m, k), root_power(m, 0), "m={m} k={k}");
            }
        }
    }

    #[test]
    fn imaginary_unit_is_quarter_root() {
        let i = lift(8, &Gaussian::i());
        assert_eq!(i, root_power(8, 2));
        assert_eq!(as_gaussian(8, &i), Some(Gaussian::i()));
    }

    #[test]
    fn inverse_round_trips() {
        for m in [3u32, 5, 6, 7, 8, 12] {
            let a = add(&root_power(m, 1), &lift(m, &Gaussian::new(rat(2, 1), rat(1, 1))));
            let inv = inverse(m, &a).unwrap();
            assert_eq!(as_gaussian(m, &mul(m, &a, &inv)), Some(Gaussian::one()));
        }
    }

    #[test]
    fn conjugation_inverts_roots() {
        for m in 1..=12u32 {
            let z = root_power(m, 1);
            assert_eq!(conjugate(m, &z), root_power(m, -1));
        }
    }
}

//! Double-precision `L(m, χ)` at positive integers with an explicit
//! absolute-error bound.
//!
//! For `m ≥ 2`, `L(m, χ) = Σ_{a=1}^{q} χ(a) Σ_{k≥0} (kq + a)^{-m}`; the inner
//! sum is `q^{-m} ζ(m, a/q)` and is computed by direct summation plus an
//! Euler–Maclaurin tail. For `m = 1` and non-principal `χ`,
//! `L(1, χ) = -(1/q) Σ_{a=1}^{q-1} χ(a) ψ(a/q)`.

use std::ops::{Add, Mul};

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::factorize;
use crate::bernoulli::{bernoulli_number, factorial, Rational};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;
/// Terms summed directly before switching to the asymptotic tail.
const SHIFT: u64 = 24;
/// Euler–Maclaurin / asymptotic correction terms.
const CORRECTIONS: u32 = 10;

/// A complex number with an absolute-error bound on both parts jointly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexApprox {
    pub re: f64,
    pub im: f64,
    pub err: f64,
}

impl ComplexApprox {
    pub const ZERO: ComplexApprox = ComplexApprox {
        re: 0.0,
        im: 0.0,
        err: 0.0,
    };

    pub fn new(value: Complex64, err: f64) -> Self {
        ComplexApprox {
            re: value.re,
            im: value.im,
            err,
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn conj(&self) -> Self {
        ComplexApprox {
            im: -self.im,
            ..*self
        }
    }

    pub fn norm(&self) -> f64 {
        self.value().norm()
    }

    /// Multiplies by an exact unit-modulus or zero factor.
    pub fn scale(&self, factor: Complex64) -> Self {
        let v = self.value() * factor;
        let f = factor.norm();
        ComplexApprox::new(v, self.err * f + 2.0 * EPS * v.norm())
    }
}

impl Add for ComplexApprox {
    type Output = ComplexApprox;
    fn add(self, rhs: Self) -> Self {
        let v = self.value() + rhs.value();
        ComplexApprox::new(v, self.err + rhs.err + EPS * v.norm())
    }
}

impl Mul for ComplexApprox {
    type Output = ComplexApprox;
    fn mul(self, rhs: Self) -> Self {
        let v = self.value() * rhs.value();
        let err = self.norm() * rhs.err + rhs.norm() * self.err + self.err * rhs.err;
        ComplexApprox::new(v, err + 4.0 * EPS * v.norm())
    }
}

impl std::iter::Sum for ComplexApprox {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ComplexApprox::ZERO, |a, b| a + b)
    }
}

fn even_bernoulli_f64(j: u32) -> f64 {
    bernoulli_number(2 * j).to_f64().unwrap()
}

/// `Σ_{k≥0} (k·step + offset)^{-s}` for `s ≥ 2`, `offset > 0`, as
/// `(value, error bound)`. Equals `step^{-s} ζ(s, offset/step)`.
fn shifted_power_sum(s: u32, offset: f64, step: f64) -> (f64, f64) {
    let sf = f64::from(s);
    let mut direct = 0.0;
    for k in (0..SHIFT).rev() {
        direct += (k as f64 * step + offset).powi(-(s as i32));
    }
    // tail Σ_{k≥N} (k step + offset)^{-s} = step^{-s} Σ_{k≥0} (k + y)^{-s}, y = N + offset/step
    let y = SHIFT as f64 + offset / step;
    let mut tail = y.powf(1.0 - sf) / (sf - 1.0) + 0.5 * y.powf(-sf);
    let mut rising = sf; // s (s+1) ... (s+2j-2)
    let mut last = 0.0f64;
    for j in 1..=CORRECTIONS {
        let fact = factorial(2 * j).to_f64().unwrap();
        let term = even_bernoulli_f64(j) / fact * rising * y.powf(-sf - f64::from(2 * j) + 1.0);
        tail += term;
        last = term.abs();
        rising *= (sf + f64::from(2 * j) - 1.0) * (sf + f64::from(2 * j));
    }
    let scale = step.powi(-(s as i32));
    let value = direct + tail * scale;
    let err = 2.0 * last * scale + 4.0 * EPS * (direct + (tail * scale).abs());
    (value, err)
}

fn check_unit_interval(x: &Rational) -> Result<(f64, f64)> {
    let p = x.numer().to_f64().unwrap_or(f64::NAN);
    let r = x.denom().to_f64().unwrap_or(f64::NAN);
    if !(p > 0.0 && p <= r) {
        return Err(Error::Domain(format!("{x} (expected 0 < x <= 1)")));
    }
    Ok((p, r))
}

/// Hurwitz zeta `ζ(m, x) = Σ_{k≥0} (k + x)^{-m}` for `m ≥ 2`, `0 < x ≤ 1`.
///
/// The result carries relative error of a few ulps, i.e. absolute error
/// below `1e-12` whenever `ζ(m, x) ≤ 1e3`.
pub fn hurwitz_zeta(m: u32, x: &Rational) -> Result<f64> {
    if m < 2 {
        return Err(Error::range("m", m, "m >= 2"));
    }
    let (p, r) = check_unit_interval(x)?;
    // ζ(m, p/r) = r^m Σ (k r + p)^{-m}
    let (v, _) = shifted_power_sum(m, p, r);
    Ok(v * r.powi(m as i32))
}

fn digamma_f64(x: f64) -> f64 {
    let mut acc = 0.0;
    let mut y = x;
    while y < 20.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut series = 0.0;
    let mut pow = inv2;
    for j in 1..=CORRECTIONS {
        series += even_bernoulli_f64(j) / f64::from(2 * j) * pow;
        pow *= inv2;
    }
    acc + y.ln() - 0.5 / y - series
}

/// Digamma `ψ(x)` for rational `x > 0`.
pub fn digamma(x: &Rational) -> Result<f64> {
    let p = x.numer().to_f64().unwrap_or(f64::NAN);
    let r = x.denom().to_f64().unwrap_or(f64::NAN);
    if !(p > 0.0) {
        return Err(Error::Domain(format!("{x} (expected x > 0)")));
    }
    // ψ(x) = ψ(x + n) - Σ_{k<n} 1/(x + k); exact reciprocal form r/(p + k r)
    let whole = (p / r).floor();
    let shift = (20.0 - whole).max(0.0) as u64;
    let mut acc = 0.0;
    for k in (0..shift).rev() {
        acc -= r / (p + k as f64 * r);
    }
    Ok(acc + digamma_f64(p / r + shift as f64))
}

/// `L(m, χ)` at a positive integer.
pub fn l_value(m: u32, chi: &DirichletCharacter) -> Result<ComplexApprox> {
    if m == 0 {
        return Err(Error::range("m", m, "m >= 1"));
    }
    let q = chi.modulus();
    if m == 1 {
        if chi.is_principal() {
            return Err(Error::PrincipalAtOne);
        }
        let qf = q as f64;
        let mut total = ComplexApprox::ZERO;
        for a in 1..q {
            let v = chi.value(a as i64);
            if v.is_zero() {
                continue;
            }
            let psi = digamma(&Rational::new(a.into(), q.into()))?;
            let term = ComplexApprox::new(Complex64::new(psi, 0.0), 32.0 * EPS * (1.0 + psi.abs()));
            total = total + term.scale(v.to_complex());
        }
        let scaled = total.value() * (-1.0 / qf);
        return Ok(ComplexApprox::new(
            scaled,
            total.err / qf + EPS * scaled.norm(),
        ));
    }
    let mut total = ComplexApprox::ZERO;
    for a in (1..=q).rev() {
        let v = chi.value(a as i64);
        if v.is_zero() {
            continue;
        }
        let (s, e) = shifted_power_sum(m, a as f64, q as f64);
        total = total + ComplexApprox::new(Complex64::new(s, 0.0), e).scale(v.to_complex());
    }
    if chi.is_principal() {
        let reference = principal_l_value(m, q);
        debug_assert!(
            (total.re - reference).abs() <= 1e-12 && total.im == 0.0,
            "principal L({m}) mod {q}: {} vs {reference}",
            total.re
        );
    }
    Ok(total)
}

/// `ζ(m) ∏_{p | q} (1 - p^{-m})`.
pub fn principal_l_value(m: u32, q: u64) -> f64 {
    let (zeta, _) = shifted_power_sum(m, 1.0, 1.0);
    factorize(q)
        .primes()
        .fold(zeta, |acc, p| acc * (1.0 - (p as f64).powi(-(m as i32))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernoulli::{int, rat};
    use crate::characters::character_group;
    use std::f64::consts::PI;

    fn r(p: i64, q: i64) -> Rational {
        rat(p, q)
    }

    #[test]
    fn hurwitz_examples() {
        assert!((hurwitz_zeta(2, &int(1)).unwrap() - PI * PI / 6.0).abs() < 1e-13);
        assert!((hurwitz_zeta(2, &r(1, 2)).unwrap() - PI * PI / 2.0).abs() < 1e-13);
        assert!((hurwitz_zeta(3, &int(1)).unwrap() - 1.202_056_903_159_594_2).abs() < 1e-13);
        assert!(hurwitz_zeta(1, &int(1)).is_err());
        assert!(hurwitz_zeta(2, &int(0)).is_err());
        assert!(hurwitz_zeta(2, &r(3, 2)).is_err());
    }

    #[test]
    fn hurwitz_against_brute_force() {
        // Σ (k+x)^{-4} to 2e5 terms, tail ≤ 1/(3·2e5^3)
        for (p, q) in [(1, 3), (2, 5), (7, 8), (1, 1)] {
            let x = p as f64 / q as f64;
            let brute: f64 = (0..200_000u64).rev().map(|k| (k as f64 + x).powi(-4)).sum();
            let v = hurwitz_zeta(4, &r(p, q)).unwrap();
            assert!((v - brute).abs() < 1e-13, "{p}/{q}: {v} vs {brute}");
        }
    }

    #[test]
    fn digamma_examples() {
        let gamma = 0.577_215_664_901_532_9;
        assert!((digamma(&int(1)).unwrap() + gamma).abs() < 1e-13);
        assert!((digamma(&r(1, 2)).unwrap() + gamma + 2.0 * 2f64.ln()).abs() < 1e-13);
        assert!((digamma(&int(2)).unwrap() - (1.0 - gamma)).abs() < 1e-13);
        assert!(digamma(&int(0)).is_err());
        assert!(digamma(&r(-1, 2)).is_err());
    }

    #[test]
    fn l_value_examples() {
        let g4 = character_group(4);
        let odd = g4
            .characters()
            .into_iter()
            .find(|c| c.parity() == -1)
            .unwrap();
        let v = l_value(1, &odd).unwrap();
        assert!((v.re - PI / 4.0).abs() < 1e-12 && v.im.abs() < 1e-15);
        let v = l_value(2, &g4.principal()).unwrap();
        assert!((v.re - PI * PI / 8.0).abs() < 1e-12);
        let g3 = character_group(3);
        let quad = g3.character(vec![1]).unwrap();
        let v = l_value(3, &quad).unwrap();
        let expected = 4.0 * PI.powi(3) / (81.0 * 3f64.sqrt());
        assert!((v.re - expected).abs() < 1e-12);
        assert!(v.err <= 1e-10);
        assert_eq!(l_value(1, &g3.principal()), Err(Error::PrincipalAtOne));
    }

    #[test]
    fn principal_cross_check() {
        for q in 1..30u64 {
            let chi0 = character_group(q).principal();
            for m in 2..6 {
                let v = l_value(m, &chi0).unwrap();
                assert!((v.re - principal_l_value(m, q)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn conjugate_symmetry_and_realness() {
        for q in [5u64, 7, 12, 13, 16] {
            for chi in character_group(q).characters() {
                for m in 1..5 {
                    if m == 1 && chi.is_principal() {
                        continue;
                    }
                    let v = l_value(m, &chi).unwrap();
                    let w = l_value(m, &chi.conjugate()).unwrap();
                    assert!((v.re - w.re).abs() <= 1e-12 && (v.im + w.im).abs() <= 1e-12);
                    if chi.is_real() {
                        assert!(v.im.abs() <= 1e-12);
                    }
                    assert!(v.err <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn agrees_with_partial_sums() {
        for q in [3u64, 8, 11, 20] {
            for chi in character_group(q).characters().into_iter().step_by(3) {
                for m in 2..4 {
                    let mut partial = Complex64::new(0.0, 0.0);
                    for n in (1..=1_000_000i64).rev() {
                        partial += chi.value_complex(n) / (n as f64).powi(m as i32);
                    }
                    let v = l_value(m, &chi).unwrap().value();
                    assert!((v - partial).norm() <= 1e-5);
                }
            }
        }
    }
}

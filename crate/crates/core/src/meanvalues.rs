//! Exact character-weighted mean values
//!
//! ```text
//! V2(q; m, n; a, b)          = Σ_{χ(-1)=(-1)^m=(-1)^n} χ(a) χ̄(b) L(m, χ) L(n, χ̄)
//! V3(q; m1, m2, m3; a, b, c) = Σ_{χ1(-1)=(-1)^m1, χ2(-1)=(-1)^m2}
//!                                  χ1(a) χ2(b) conj(χ1χ2)(c) L(m1, χ1) L(m2, χ2) L(m3, conj(χ1χ2))
//! ```
//!
//! as rational multiples of powers of π. Each value is available from a
//! Bernoulli-function closed form (`v2_closed`, `v3_closed` and their
//! specializations) and from the Möbius–Bernoulli lattice sum it rewrites
//! (`v2_lattice`, `v3_lattice`). The individual terms of the closed forms are
//! exposed so a disagreement can be traced to one of them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{
    euler_phi, factorize, gcd_u64, jordan_totient, lcm_u64, moebius_divisor_weights,
};
use crate::bernoulli::{bbar, bernoulli_number as bern, binomial, factorial, int, rat, Rational};
use crate::error::{Error, Result};

/// `coeff · π^pi_power`, exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiValue {
    pub pi_power: u32,
    pub coeff: Rational,
}

impl PiValue {
    pub fn new(coeff: Rational, pi_power: u32) -> Self {
        if coeff.is_zero() {
            return PiValue::zero();
        }
        PiValue { pi_power, coeff }
    }

    pub fn zero() -> Self {
        PiValue {
            pi_power: 0,
            coeff: Rational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Sum of two values sharing a power of π (zero is compatible with any).
    pub fn checked_add(&self, other: &PiValue) -> Result<PiValue> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_power != other.pi_power {
            return Err(Error::Domain(format!(
                "cannot add multiples of pi^{} and pi^{}",
                self.pi_power, other.pi_power
            )));
        }
        Ok(PiValue::new(&self.coeff + &other.coeff, self.pi_power))
    }

    /// `coeff` as `"numerator/denominator"` (denominator always present).
    pub fn coeff_string(&self) -> String {
        format!("{}/{}", self.coeff.numer(), self.coeff.denom())
    }

    /// Parses the output of [`PiValue::coeff_string`] back.
    pub fn parse_coeff(s: &str) -> Result<Rational> {
        let bad = || Error::Domain(format!("malformed rational {s:?}"));
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::new(n, d))
    }

    /// `coeff · π^k` to 100+ digits as an exact rational.
    fn approx_rational(&self) -> Rational {
        self.coeff.clone() * num_traits::pow(pi_rational(), self.pi_power as usize)
    }

    /// Decimal expansion rounded to `digits` significant digits.
    pub fn decimal(&self, digits: usize) -> Decimal {
        Decimal::from_rational(&self.approx_rational(), digits)
    }

    /// Nearest double, via a 30-digit decimal rendering.
    pub fn to_f64(&self) -> f64 {
        self.decimal(30).to_f64()
    }
}

impl fmt::Display for PiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_power {
            _ if self.is_zero() => write!(f, "0"),
            0 => write!(f, "{}", self.coeff),
            1 => write!(f, "({})·π", self.coeff),
            k => write!(f, "({})·π^{k}", self.coeff),
        }
    }
}

impl Serialize for PiValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PiValue", 2)?;
        st.serialize_field("pi_power", &self.pi_power)?;
        st.serialize_field("coeff", &self.coeff_string())?;
        st.end()
    }
}

const PI_DIGITS: &str = "3141592653589793238462643383279502884197169399375105820974944592307816406286208998628034825342117068";

fn pi_rational() -> Rational {
    let digits: BigInt = PI_DIGITS.parse().unwrap();
    Rational::new(digits, BigInt::from(10).pow(PI_DIGITS.len() as u32 - 1))
}

/// A rounded decimal `0.d1d2…dn × 10^(exp10+1)`, i.e. `d1.d2…dn × 10^exp10`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decimal {
    pub negative: bool,
    /// Significant digits, no leading zeros (empty for zero).
    pub digits: String,
    pub exp10: i32,
}

impl Decimal {
    pub fn from_rational(x: &Rational, digits: usize) -> Decimal {
        assert!(digits >= 1);
        if x.is_zero() {
            return Decimal {
                negative: false,
                digits: String::new(),
                exp10: 0,
            };
        }
        let negative = x.is_negative();
        let v = x.abs();
        let ten = BigInt::from(10);
        // exp10 = floor(log10 v)
        let mut exp10 = (v.numer().bits() as i64 - v.denom().bits() as i64) * 30103 / 100000;
        let pow10 = |e: i64| -> Rational {
            if e >= 0 {
                Rational::from_integer(ten.pow(e as u32))
            } else {
                Rational::new(BigInt::one(), ten.pow((-e) as u32))
            }
        };
        while pow10(exp10) > v {
            exp10 -= 1;
        }
        while pow10(exp10 + 1) <= v {
            exp10 += 1;
        }
        let scaled = &v * pow10(digits as i64 - 1 - exp10);
        // round half up
        let mut n = (scaled + rat(1, 2)).floor().to_integer();
        if n >= ten.pow(digits as u32) {
            n /= 10;
            exp10 += 1;
        }
        Decimal {
            negative,
            digits: n.to_string(),
            exp10: exp10 as i32,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.scientific().parse().unwrap()
    }

    /// `-d.ddde±x`.
    pub fn scientific(&self) -> String {
        if self.digits.is_empty() {
            return "0".into();
        }
        let sign = if self.negative { "-" } else { "" };
        let (head, tail) = self.digits.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{}", self.exp10)
        } else {
            format!("{sign}{head}.{tail}e{}", self.exp10)
        }
    }

    /// Positional notation keeping every significant digit (including
    /// trailing zeros); falls back to scientific for extreme exponents.
    pub fn positional(&self) -> String {
        if self.digits.is_empty() {
            return "0".into();
        }
        if self.exp10 < -12 || self.exp10 > 20 {
            return self.scientific();
        }
        let sign = if self.negative { "-" } else { "" };
        let n = self.digits.len() as i32;
        let body = if self.exp10 < 0 {
            format!(
                "0.{}{}",
                "0".repeat((-self.exp10 - 1) as usize),
                self.digits
            )
        } else if self.exp10 + 1 >= n {
            format!(
                "{}{}",
                self.digits,
                "0".repeat((self.exp10 + 1 - n) as usize)
            )
        } else {
            let (i, f) = self.digits.split_at(self.exp10 as usize + 1);
            format!("{i}.{f}")
        };
        format!("{sign}{body}")
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.positional())
    }
}

/// The three independently computed pieces of the two-L closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem21Terms {
    pub r_ab: Rational,
    pub r_ba: Rational,
    pub c1: Rational,
}

/// Terms of the three-L closed form. `*_bc` is the term with arguments
/// `(m1, m2, m3; a, b, c)`, `*_cb` the one with `(m1, m3, m2; a, c, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem24Terms {
    /// `R(m1, m2+m3, q; a, L) + R(m2+m3, m1, q; L, a)` with `L = lcm(b, c)`.
    pub r_pair: Rational,
    /// `r_pair` times `(-1)^{m2-1} m2! m3! gcd(b,c)^{m2+m3} / (b^{m3} c^{m2} (m2+m3)!)`.
    pub r_part: Rational,
    pub a_bc: Rational,
    pub a_cb: Rational,
    pub b_bc: Rational,
    pub b_cb: Rational,
    pub c_bc: Rational,
    pub c_cb: Rational,
    pub d_bc: Rational,
    pub d_cb: Rational,
    pub c2: Rational,
}

// --- small helpers ---------------------------------------------------------

fn coprime(name: &'static str, value: u64, q: u64) -> Result<()> {
    if value == 0 {
        return Err(Error::ZeroArgument(name));
    }
    if gcd_u64(value, q) != 1 {
        return Err(Error::NotCoprime {
            name,
            value: value as i64,
            modulus: q as i64,
        });
    }
    Ok(())
}

fn positive(name: &'static str, value: u32) -> Result<()> {
    if value == 0 {
        return Err(Error::range(name, value, ">= 1"));
    }
    Ok(())
}

fn modulus_at_least_two(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::range("q", q, "q >= 2"));
    }
    Ok(())
}

fn modulus_positive(q: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::range("q", q, "q >= 1"));
    }
    Ok(())
}

/// `(-1)^{e/2}` for even `e`.
fn half_sign(e: i64) -> i64 {
    debug_assert!(e % 2 == 0);
    if (e.abs() / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

fn neg_one_pow(e: u32) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

fn upow(base: u64, exp: u32) -> BigInt {
    BigInt::from(base).pow(exp)
}

fn ri(n: impl Into<BigInt>) -> Rational {
    int(n)
}

fn fact(n: u32) -> Rational {
    ri(factorial(n))
}

fn choose(n: u32, k: u32) -> Rational {
    ri(binomial(n, k))
}

fn jordan(k: u32, q: u64) -> Rational {
    ri(jordan_totient(k, q))
}

fn phi(q: u64) -> Rational {
    ri(euler_phi(q))
}

/// `Σ_{d|q} μ(q/d) d^k f(d)` for precomputed weights.
fn moebius_sum(weights: &[(u64, i8)], k: u32, mut f: impl FnMut(u64) -> Rational) -> Rational {
    weights
        .iter()
        .map(|&(d, mu)| {
            let v = f(d);
            if v.is_zero() {
                v
            } else {
                v * ri(upow(d, k) * i64::from(mu))
            }
        })
        .sum()
}

fn is_integer_ratio(num: u64, den: u64) -> bool {
    num % den == 0
}

// --- two L-functions -------------------------------------------------------

fn r_raw(m: u32, n: u32, weights: &[(u64, i8)], a: u64, b: u64) -> Rational {
    let mut total = Rational::zero();
    for j in 0..=m {
        let inner: Rational = (1..=b)
            .map(|l| {
                let outer = bbar(j, (a * l) as i64, b);
                if outer.is_zero() {
                    return outer;
                }
                outer * moebius_sum(weights, j, |d| bbar(m + n - j, (d * l) as i64, b))
            })
            .sum();
        if inner.is_zero() {
            continue;
        }
        total += inner * choose(m, j) * ri(neg_one_pow(j)) * ri(upow(a, m - j)) / ri(m + n - j);
    }
    total * ri(upow(b, n - 1) * n)
}

/// `R(m, n, q; a, b) = n b^{n-1} Σ_{j=0}^{m} C(m,j) (-1)^j a^{m-j}/(m+n-j)
///   Σ_{l=1}^{b} B̄_j(al/b) Σ_{d|q} μ(q/d) d^j B̄_{m+n-j}(dl/b)`.
pub fn r_term(m: u32, n: u32, q: u64, a: u64, b: u64) -> Result<Rational> {
    positive("m", m)?;
    positive("n", n)?;
    modulus_positive(q)?;
    coprime("a", a, q)?;
    coprime("b", b, q)?;
    Ok(r_raw(m, n, &moebius_divisor_weights(q), a, b))
}

fn c1_raw(m: u32, n: u32, q: u64, a: u64, b: u64) -> Rational {
    let g = gcd_u64(a, b);
    let main = ri(neg_one_pow(n - 1))
        * fact(m)
        * fact(n)
        * ri(upow(g, m + n))
        * bern(m + n)
        * jordan(m + n, q)
        / (ri(upow(a, n)) * ri(upow(b, m)) * fact(m + n));
    if m == 1 && n == 1 {
        main - phi(q) / ri(4)
    } else {
        main
    }
}

/// `C1 = (-1)^{n-1} m! n! gcd(a,b)^{m+n} B_{m+n} J_{m+n}(q) / (a^n b^m (m+n)!)
///   - δ_{1,m} δ_{1,n} φ(q)/4`.
pub fn c1_term(m: u32, n: u32, q: u64, a: u64, b: u64) -> Result<Rational> {
    positive("m", m)?;
    positive("n", n)?;
    modulus_positive(q)?;
    coprime("a", a, q)?;
    coprime("b", b, q)?;
    Ok(c1_raw(m, n, q, a, b))
}

pub fn theorem21_terms(q: u64, m: u32, n: u32, a: u64, b: u64) -> Result<Theorem21Terms> {
    Ok(Theorem21Terms {
        r_ab: r_term(m, n, q, a, b)?,
        r_ba: r_term(n, m, q, b, a)?,
        c1: c1_term(m, n, q, a, b)?,
    })
}

/// `Σ_{d|q} μ(q/d) d^{m+n-1} Σ_{j=0}^{d-1} B̄_m(aj/d) B̄_n(bj/d)`.
pub fn lattice2_sum(q: u64, m: u32, n: u32, a: u64, b: u64) -> Result<Rational> {
    positive("m", m)?;
    positive("n", n)?;
    modulus_positive(q)?;
    coprime("a", a, q)?;
    coprime("b", b, q)?;
    let weights = moebius_divisor_weights(q);
    Ok(moebius_sum(&weights, m + n - 1, |d| {
        (0..d)
            .map(|j| {
                let x = bbar(m, (a * j) as i64, d);
                if x.is_zero() {
                    x
                } else {
                    x * bbar(n, (b * j) as i64, d)
                }
            })
            .sum()
    }))
}

/// `R(m,n,q;a,b) + R(n,m,q;b,a) + C1`, the closed form of [`lattice2_sum`].
pub fn lattice2_closed(q: u64, m: u32, n: u32, a: u64, b: u64) -> Result<Rational> {
    let t = theorem21_terms(q, m, n, a, b)?;
    Ok(t.r_ab + t.r_ba + t.c1)
}

/// `(-1)^{(m-n)/2} 2^{m+n} φ(q) / (4 q^{m+n} m! n!)`: the rational part of
/// `(-1)^{(m-n)/2} (2π)^{m+n} φ(q) / (4 q^{m+n} m! n!)`.
fn v2_prefactor(q: u64, m: u32, n: u32) -> Rational {
    ri(half_sign(i64::from(m) - i64::from(n))) * ri(upow(2, m + n)) * phi(q)
        / (ri(4) * ri(upow(q, m + n)) * fact(m) * fact(n))
}

fn same_parity(m: u32, n: u32) -> bool {
    (m + n) % 2 == 0
}

/// Closed form of `V2(q; m, n; a, b)`. Zero when `m ≢ n (mod 2)`.
pub fn v2_closed(q: u64, m: u32, n: u32, a: u64, b: u64) -> Result<PiValue> {
    let bracket = lattice2_closed(q, m, n, a, b)?;
    if !same_parity(m, n) {
        return Ok(PiValue::zero());
    }
    Ok(PiValue::new(v2_prefactor(q, m, n) * bracket, m + n))
}

/// `V2` from the exact lattice sum. Zero when `m ≢ n (mod 2)`.
pub fn v2_lattice(q: u64, m: u32, n: u32, a: u64, b: u64) -> Result<PiValue> {
    if !same_parity(m, n) {
        // validate arguments all the same
        lattice2_sum(q, 1, 1, a, b)?;
        positive("m", m)?;
        positive("n", n)?;
        return Ok(PiValue::zero());
    }
    let s = lattice2_sum(q, m, n, a, b)?;
    Ok(PiValue::new(v2_prefactor(q, m, n) * s, m + n))
}

fn corollary_args(q: u64, m: u32, n: u32) -> Result<()> {
    modulus_at_least_two(q)?;
    positive("m", m)?;
    positive("n", n)
}

/// `V2(q; m, n; a, 1)` with the `b = 1` simplifications applied.
pub fn v2_cor22(q: u64, m: u32, n: u32, a: u64) -> Result<PiValue> {
    corollary_args(q, m, n)?;
    coprime("a", a, q)?;
    if !same_parity(m, n) {
        return Ok(PiValue::zero());
    }
    let weights = moebius_divisor_weights(q);
    let first: Rational = (1..=m)
        .map(|j| {
            choose(m, j) * ri(neg_one_pow(j)) * ri(upow(a, m - j)) / ri(m + n - j)
                * bbar(j, 0, 1)
                * bbar(m + n - j, 0, 1)
                * jordan(j, q)
        })
        .sum::<Rational>()
        * ri(n);
    let second: Rational = (1..=n)
        .map(|j| {
            let inner: Rational = (1..=a)
                .map(|l| {
                    let x = bbar(j, l as i64, a);
                    if x.is_zero() {
                        return x;
                    }
                    x * moebius_sum(&weights, j, |d| bbar(m + n - j, (d * l) as i64, a))
                })
                .sum();
            choose(n, j) * ri(neg_one_pow(j)) / ri(m + n - j) * inner
        })
        .sum::<Rational>()
        * ri(upow(a, m - 1) * m);
    let third = ri(neg_one_pow(n - 1)) * fact(m) * fact(n) * bern(m + n) * jordan(m + n, q)
        / (ri(upow(a, n)) * fact(m + n));
    let delta = if m == 1 && n == 1 {
        phi(q) / ri(4)
    } else {
        Rational::zero()
    };
    Ok(PiValue::new(
        v2_prefactor(q, m, n) * (first + second + third - delta),
        m + n,
    ))
}

/// `V2(q; 1, 1; a, 1)` in totient form with the `B̄_1·B̄_1` correction sum.
pub fn v2_eq28(q: u64, a: u64) -> Result<PiValue> {
    modulus_at_least_two(q)?;
    coprime("a", a, q)?;
    let phi_q = phi(q);
    let prod: Rational = factorize(q)
        .primes()
        .map(|p| ri(1) + rat(1, p as i64))
        .product();
    let main = &phi_q * &phi_q / ri(12 * a * q * q) * (ri(q) * prod - ri(3 * a));
    let weights = moebius_divisor_weights(q);
    let correction = moebius_sum(&weights, 1, |d| {
        (1..=a)
            .map(|l| bbar(1, l as i64, a) * bbar(1, (d * l) as i64, a))
            .sum()
    });
    Ok(PiValue::new(main - phi_q * correction / ri(q * q), 2))
}

/// `V2(q; m, n; 1, 1)` as a Bernoulli–Jordan polynomial in `q`.
pub fn v2_cor23(q: u64, m: u32, n: u32) -> Result<PiValue> {
    corollary_args(q, m, n)?;
    if !same_parity(m, n) {
        return Ok(PiValue::zero());
    }
    let even_sum = |outer: u32, top: u32| -> Rational {
        (1..=top / 2)
            .map(|j| {
                choose(top, 2 * j) * bern(2 * j) * bern(m + n - 2 * j) / ri(m + n - 2 * j)
                    * jordan(2 * j, q)
            })
            .sum::<Rational>()
            * ri(outer)
    };
    let third =
        ri(neg_one_pow(n - 1)) * fact(m) * fact(n) * bern(m + n) * jordan(m + n, q) / fact(m + n);
    let delta = if m == 1 && n == 1 {
        phi(q) / ri(4)
    } else {
        Rational::zero()
    };
    let bracket = even_sum(n, m) + even_sum(m, n) + third - delta;
    Ok(PiValue::new(v2_prefactor(q, m, n) * bracket, m + n))
}

/// `V2(q; n, n; 1, 1)`, `n ≥ 2`.
pub fn v2_diag(q: u64, n: u32) -> Result<PiValue> {
    modulus_at_least_two(q)?;
    if n < 2 {
        return Err(Error::range("n", n, "n >= 2"));
    }
    let sum: Rational = (1..=n / 2)
        .map(|j| {
            choose(n, 2 * j) * bern(2 * j) * bern(2 * n - 2 * j) / ri(2 * n - 2 * j)
                * jordan(2 * j, q)
        })
        .sum();
    let nf = fact(n);
    let last = ri(neg_one_pow(n)) * &nf * &nf * bern(2 * n) * jordan(2 * n, q) / fact(2 * n);
    let pre = ri(upow(2, 2 * n)) * phi(q) / (ri(4) * ri(upow(q, 2 * n)) * &nf * &nf);
    Ok(PiValue::new(pre * (ri(2 * n) * sum - last), 2 * n))
}

/// `V2(q; m, n; 1, 1)` via the coefficients
/// `r_{m,n,l} = B_{m+n-l} Σ_{j≤m, k≤n, j+k ≥ m+n-l} B_{m-j} B_{n-k} C(m,j) C(n,k) C(j+k+1, m+n-l)/(j+k+1)`.
pub fn liu_zhang(q: u64, m: u32, n: u32) -> Result<PiValue> {
    corollary_args(q, m, n)?;
    if !same_parity(m, n) {
        return Ok(PiValue::zero());
    }
    let coefficient = |l: u32| -> Rational {
        let target = m + n - l;
        let mut s = Rational::zero();
        for j in 0..=m {
            for k in 0..=n {
                if j + k < target {
                    continue;
                }
                s += bern(m - j)
                    * bern(n - k)
                    * choose(m, j)
                    * choose(n, k)
                    * choose(j + k + 1, target)
                    / ri(j + k + 1);
            }
        }
        bern(target) * s
    };
    let sum: Rational = (1..=m + n).map(|l| coefficient(l) * jordan(l, q)).sum();
    let eps = if m == 1 && n == 1 {
        phi(q) / ri(4)
    } else {
        Rational::zero()
    };
    Ok(PiValue::new(v2_prefactor(q, m, n) * (sum - eps), m + n))
}

// --- three L-functions -----------------------------------------------------

fn a_raw(m1: u32, m2: u32, m3: u32, w: &[(u64, i8)], a: u64, b: u64, c: u64) -> Rational {
    let mut total = Rational::zero();
    for j in 1..=m2 {
        for j1 in 0..=m1 {
            let mut s = Rational::zero();
            for l in 1..=c {
                for l1 in 1..=b {
                    // B̄_{j1}(a l1/b + a l/c) over the common denominator b c
                    let outer = bbar(j1, (a * l1 * c + a * l * b) as i64, b * c);
                    if outer.is_zero() {
                        continue;
                    }
                    s += outer
                        * moebius_sum(w, j1, |d| {
                            let x = bbar(m2 + m3 - j, (d * l) as i64, c);
                            if x.is_zero() {
                                return x;
                            }
                            x * bbar(m1 + j - j1, (d * l1 * c + d * l * b) as i64, b * c)
                        });
                }
            }
            if s.is_zero() {
                continue;
            }
            total += s * choose(m2, j) * ri(neg_one_pow(j) * i64::from(j)) / ri(m2 + m3 - j)
                * choose(m1, j1)
                * ri(neg_one_pow(j1))
                * ri(upow(a, m1 - j1))
                / ri(m1 + j - j1);
        }
    }
    total * ri(upow(b, m2 - 1) * upow(c, m3 - 1) * m3)
}

fn b_raw(m1: u32, m2: u32, m3: u32, w: &[(u64, i8)], a: u64, b: u64, c: u64) -> Rational {
    let mut total = Rational::zero();
    for j in 1..=m3 {
        for j1 in 0..=j {
            let mut s = Rational::zero();
            for l in 1..=b {
                for l1 in 1..=a {
                    // B̄_{j1}(c l1/a + c l/b)
                    let outer = bbar(j1, (c * l1 * b + c * l * a) as i64, a * b);
                    if outer.is_zero() {
                        continue;
                    }
                    s += outer
                        * moebius_sum(w, j1, |d| {
                            let x = bbar(m2 + m3 - j, (d * l) as i64, b);
                            if x.is_zero() {
                                return x;
                            }
                            x * bbar(m1 + j - j1, (d * l1) as i64, a)
                        });
                }
            }
            if s.is_zero() {
                continue;
            }
            total += s * choose(m3, j) / ri(m2 + m3 - j)
                * choose(j, j1)
                * ri(neg_one_pow(j1))
                * ri(upow(c, m3 - j1))
                / ri(m1 + j - j1);
        }
    }
    total * ri(upow(a, m1 - 1) * upow(b, m2 - 1) * (m1 * m2))
}

fn c_raw(m1: u32, m2: u32, m3: u32, w: &[(u64, i8)], a: u64, b: u64, c: u64) -> Rational {
    let g = gcd_u64(a, c);
    let l_ac = lcm_u64(a, c);
    let mut total = Rational::zero();
    for j in 1..=m3 {
        let s: Rational = (1..=b)
            .map(|l| {
                let x = bbar(m1 + j, (l_ac * l) as i64, b);
                if x.is_zero() {
                    return x;
                }
                x * moebius_sum(w, m1 + j, |d| bbar(m2 + m3 - j, (d * l) as i64, b))
            })
            .sum();
        if s.is_zero() {
            continue;
        }
        total +=
            s * choose(m3, j) * ri(neg_one_pow(j)) * ri(upow(g, j)) * ri(upow(c, m3 - j)) * fact(j)
                / (ri(upow(a, j)) * ri(m2 + m3 - j) * fact(m1 + j));
    }
    -total * ri(upow(b, m2 - 1) * upow(g, m1) * m2) * fact(m1) / ri(upow(c, m1))
}

fn d_raw(m1: u32, m2: u32, m3: u32, w: &[(u64, i8)], b: u64, c: u64) -> Rational {
    if m1 != 1 {
        return Rational::zero();
    }
    let s = moebius_sum(w, m1, |d| {
        (1..=b)
            .filter(|&l| is_integer_ratio(c * l, b))
            .map(|l| bbar(m2 + m3 - 1, (d * l) as i64, b))
            .sum()
    });
    s * ri(upow(b, m2 - 1) * upow(c, m3 - 1) * (m2 * m3)) / ri(4 * (m2 + m3 - 1))
}

fn c2_raw(m1: u32, m2: u32, m3: u32, q: u64, a: u64, b: u64, c: u64) -> Rational {
    let total = m1 + m2 + m3;
    let g = gcd_u64(a * gcd_u64(b, c), b * c);
    ri(neg_one_pow(m1 + m2))
        * fact(m1)
        * fact(m2)
        * fact(m3)
        * ri(upow(g, total))
        * bern(total)
        * jordan(total, q)
        / (ri(upow(a, m2 + m3)) * ri(upow(b, m1 + m3)) * ri(upow(c, m1 + m2)) * fact(total))
}

fn v3_args(q: u64, m1: u32, m2: u32, m3: u32, a: u64, b: u64, c: u64) -> Result<()> {
    modulus_at_least_two(q)?;
    positive("m1", m1)?;
    positive("m2", m2)?;
    if m3 < 2 {
        return Err(Error::range("m3", m3, "m3 >= 2"));
    }
    coprime("a", a, q)?;
    coprime("b", b, q)?;
    coprime("c", c, q)
}

/// All terms of the three-L closed form, each evaluated exactly.
pub fn thm24_terms(
    q: u64,
    m1: u32,
    m2: u32,
    m3: u32,
    a: u64,
    b: u64,
    c: u64,
) -> Result<Theorem24Terms> {
    v3_args(q, m1, m2, m3, a, b, c)?;
    let w = moebius_divisor_weights(q);
    let g = gcd_u64(b, c);
    let l = lcm_u64(b, c);
    let r_pair = r_raw(m1, m2 + m3, &w, a, l) + r_raw(m2 + m3, m1, &w, l, a);
    let r_part = &r_pair * ri(neg_one_pow(m2 - 1)) * fact(m2) * fact(m3) * ri(upow(g, m2 + m3))
        / (ri(upow(b, m3)) * ri(upow(c, m2)) * fact(m2 + m3));
    Ok(Theorem24Terms {
        r_pair,
        r_part,
        a_bc: a_raw(m1, m2, m3, &w, a, b, c),
        a_cb: a_raw(m1, m3, m2, &w, a, c, b),
        b_bc: b_raw(m1, m2, m3, &w, a, b, c),
        b_cb: b_raw(m1, m3, m2, &w, a, c, b),
        c_bc: c_raw(m1, m2, m3, &w, a, b, c),
        c_cb: c_raw(m1, m3, m2, &w, a, c, b),
        d_bc: d_raw(m1, m2, m3, &w, b, c),
        d_cb: d_raw(m1, m3, m2, &w, c, b),
        c2: c2_raw(m1, m2, m3, q, a, b, c),
    })
}

/// `Σ_{d|q} μ(q/d) d^{m1+m2+m3-2} Σ_{s,t=0}^{d-1} B̄_{m1}(as/d) B̄_{m2}(bt/d) B̄_{m3}(c(s+t)/d)`.
pub fn lattice3_sum(q: u64, m1: u32, m2: u32, m3: u32, a: u64, b: u64, c: u64) -> Result<Rational> {
    v3_args(q, m1, m2, m3, a, b, c)?;
    let w = moebius_divisor_weights(q);
    Ok(moebius_sum(&w, m1 + m2 + m3 - 2, |d| {
        let first: Vec<Rational> = (0..d).map(|s| bbar(m1, (a * s) as i64, d)).collect();
        let second: Vec<Rational> = (0..d).map(|t| bbar(m2, (b * t) as i64, d)).collect();
        let third: Vec<Rational> = (0..d).map(|u| bbar(m3, (c * u) as i64, d)).collect();
        let mut acc = Rational::zero();
        for (s, x) in first.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let inner: Rational = second
                .iter()
                .enumerate()
                .filter(|(_, y)| !y.is_zero())
                .map(|(t, y)| y * &third[(s + t) % d as usize])
                .sum();
            acc += x * inner;
        }
        acc
    }))
}

/// The term combination equal to [`lattice3_sum`] (no parity condition).
pub fn lattice3_closed(
    q: u64,
    m1: u32,
    m2: u32,
    m3: u32,
    a: u64,
    b: u64,
    c: u64,
) -> Result<Rational> {
    let t = thm24_terms(q, m1, m2, m3, a, b, c)?;
    let swap = ri(neg_one_pow(m2 + m3));
    let swap_c = ri(neg_one_pow(m1));
    Ok(
        t.r_part + t.a_bc + &swap * t.a_cb + t.b_bc + &swap * t.b_cb + t.c_bc + swap_c * t.c_cb
            - t.d_bc
            + t.d_cb
            + t.c2,
    )
}

fn v3_parity_ok(m1: u32, m2: u32, m3: u32) -> bool {
    (m1 + m2 + m3) % 2 == 0
}

/// `2^{Σm} φ(q)^2 / (8 q^{Σm} m1! m2! m3!)` with sign `(-1)^{(m1+m2-m3)/2}`.
fn v3_prefactor(q: u64, m1: u32, m2: u32, m3: u32) -> Rational {
    let total = m1 + m2 + m3;
    let phi_q = phi(q);
    ri(half_sign(i64::from(m1) + i64::from(m2) - i64::from(m3)))
        * ri(upow(2, total))
        * &phi_q
        * &phi_q
        / (ri(8) * ri(upow(q, total)) * fact(m1) * fact(m2) * fact(m3))
}

/// Closed form of `V3(q; m1, m2, m3; a, b, c)`. Zero when
/// `m1 + m2 ≢ m3 (mod 2)`.
pub fn v3_closed(q: u64, m1: u32, m2: u32, m3: u32, a: u64, b: u64, c: u64) -> Result<PiValue> {
    v3_args(q, m1, m2, m3, a, b, c)?;
    if !v3_parity_ok(m1, m2, m3) {
        return Ok(PiValue::zero());
    }
    let total = m1 + m2 + m3;
    let t = thm24_terms(q, m1, m2, m3, a, b, c)?;
    let g = gcd_u64(b, c);
    let phi_q = phi(q);
    let first = ri(half_sign(i64::from(m1) - i64::from(m2) - i64::from(m3)))
        * ri(upow(2, total))
        * ri(upow(g, m2 + m3))
        * &phi_q
        * &phi_q
        / (ri(8)
            * ri(upow(q, total))
            * ri(upow(b, m3))
            * ri(upow(c, m2))
            * fact(m1)
            * fact(m2 + m3));
    let swap = ri(neg_one_pow(m1));
    let combination = t.a_bc + &swap * t.a_cb + t.b_bc + &swap * t.b_cb + t.c_bc + &swap * t.c_cb
        - t.d_bc
        + t.d_cb
        + t.c2;
    let value = first * t.r_pair - v3_prefactor(q, m1, m2, m3) * combination;
    Ok(PiValue::new(value, total))
}

/// `V3` from the exact triple lattice sum. Zero when `m1 + m2 ≢ m3 (mod 2)`.
pub fn v3_lattice(q: u64, m1: u32, m2: u32, m3: u32, a: u64, b: u64, c: u64) -> Result<PiValue> {
    v3_args(q, m1, m2, m3, a, b, c)?;
    if !v3_parity_ok(m1, m2, m3) {
        return Ok(PiValue::zero());
    }
    let s = lattice3_sum(q, m1, m2, m3, a, b, c)?;
    Ok(PiValue::new(-v3_prefactor(q, m1, m2, m3) * s, m1 + m2 + m3))
}

/// `Σ_{l=2}^{j-1} C(j,l) B_l B_{j+1-l} J_l(q) / (j+1-l)`.
fn inner_bernoulli_jordan(j: u32, q: u64) -> Rational {
    (2..j)
        .map(|l| choose(j, l) * bern(l) * bern(j + 1 - l) * jordan(l, q) / ri(j + 1 - l))
        .sum()
}

/// `V3(q; 1, 1, n; 1, 1, 1)` for even `n`.
pub fn v3_cor25(q: u64, n: u32) -> Result<PiValue> {
    modulus_at_least_two(q)?;
    if n == 0 || n % 2 == 1 {
        return Err(Error::range("n", n, "even n >= 2"));
    }
    let m1: Rational = (1..=n / 2)
        .map(|j| {
            choose(n, 2 * j) * bern(2 * j) * bern(n + 2 - 2 * j) * jordan(2 * j, q)
                / ri((n + 2 - 2 * j) * (n + 1 - 2 * j))
        })
        .sum::<Rational>()
        * ri(2);
    let m2: Rational = (3..n)
        .map(|j| choose(n, j) * bern(n + 1 - j) / ri(n + 1 - j) * inner_bernoulli_jordan(j, q))
        .sum();
    let m3 = -bern(2) * bern(n) * jordan(2, q) / ri(2)
        + bern(n + 2) * jordan(n + 2, q) / ri((n + 2) * (n + 1));
    let phi_q = phi(q);
    let pre = ri(half_sign(i64::from(n))) * ri(upow(2, n + 2)) * &phi_q * &phi_q
        / (ri(8) * ri(upow(q, n + 2)) * fact(n));
    Ok(PiValue::new(pre * (m1 + m2 + m3), n + 2))
}

/// `V3(q; 1, 2, n; 1, 1, 1)` for odd `n ≥ 3`.
pub fn v3_cor26(q: u64, n: u32) -> Result<PiValue> {
    modulus_at_least_two(q)?;
    if n < 3 || n % 2 == 0 {
        return Err(Error::range("n", n, "odd n >= 3"));
    }
    let n1: Rational = -(1..=(n - 1) / 2)
        .map(|j| {
            choose(n, 2 * j) * bern(2 * j) * bern(n + 3 - 2 * j) * jordan(2 * j, q)
                / ri((n + 3 - 2 * j) * (n + 2 - 2 * j))
        })
        .sum::<Rational>();
    let n2: Rational = (3..=n)
        .map(|j| choose(n, j) * bern(n + 2 - j) / ri(n + 2 - j) * inner_bernoulli_jordan(j, q))
        .sum();
    let n3 = ri(n) * bern(2) * bern(n + 1) * jordan(2, q) / ri(2 * (n + 1))
        + bern(n + 3) * jordan(n + 3, q) / ri((n + 3) * (n + 2) * (n + 1));
    let phi_q = phi(q);
    let pre = ri(half_sign(i64::from(n) + 1)) * ri(upow(2, n + 3)) * &phi_q * &phi_q
        / (ri(8) * ri(upow(q, n + 3)) * fact(n));
    Ok(PiValue::new(pre * (n1 - n2 + n3), n + 3))
}

/// Totient-polynomial forms of the classical special cases. Each returns the
/// mean value for `q ≥ 2` (`q` an odd prime for [`special::v2_11_prime`]).
pub mod special {
    use super::*;

    fn jordan_combo(q: u64, terms: &[(i64, u32)]) -> Rational {
        terms.iter().map(|&(k, l)| ri(k) * jordan(l, q)).sum()
    }

    /// `V2(p; 1, 1; 1, 1) = π² (p-1)² (p-2) / (12 p²)` for an odd prime `p`.
    pub fn v2_11_prime(p: u64) -> Result<PiValue> {
        let f = factorize(p.max(1));
        if p < 3 || f.factors != vec![(p, 1)] {
            return Err(Error::range("p", p, "an odd prime"));
        }
        let pm1 = ri(p - 1);
        Ok(PiValue::new(&pm1 * &pm1 * ri(p - 2) / ri(12 * p * p), 2))
    }

    /// `V2(q; 1, 1; 1, 1) = π² φ(q)² (q ∏_{p|q}(1 + 1/p) - 3) / (12 q²)`.
    pub fn v2_11(q: u64) -> Result<PiValue> {
        modulus_at_least_two(q)?;
        let prod: Rational = factorize(q)
            .primes()
            .map(|p| ri(1) + rat(1, p as i64))
            .product();
        let phi_q = phi(q);
        Ok(PiValue::new(
            &phi_q * &phi_q / ri(12 * q * q) * (ri(q) * prod - ri(3)),
            2,
        ))
    }

    /// `V2(q; 2, 2; 1, 1) = π⁴ φ(q) (J_4 + 10 J_2) / (180 q⁴)`.
    pub fn v2_22(q: u64) -> Result<PiValue> {
        modulus_at_least_two(q)?;
        Ok(PiValue::new(
            phi(q) / ri(180 * q.pow(4)) * jordan_combo(q, &[(1, 4), (10, 2)]),
            4,
        ))
    }

    /// `V2(q; 3, 3; 1, 1) = π⁶ φ(q) (J_6 - 21 J_2) / (1890 q⁶)`.
    pub fn v2_33(q: u64) -> Result<PiValue> {
        modulus_at_least_two(q)?;
        Ok(PiValue::new(
            phi(q) / ri(BigInt::from(1890) * upow(q, 6)) * jordan_combo(q, &[(1, 6), (-21, 2)]),
            6,
        ))
    }

    /// `V3(q; 1, 1, 2; 1, 1, 1) = π⁴ φ(q)² (J_4 - 5 J_2) / (360 q⁴)`.
    pub fn v3_112(q: u64) -> Result<PiValue> {
        modulus_at_least_two(q)?;
        let phi_q = phi(q);
        Ok(PiValue::new(
            &phi_q * &phi_q / ri(360 * q.pow(4)) * jordan_combo(q, &[(1, 4), (-5, 2)]),
            4,
        ))
    }

    /// `V3(q; 1, 1, 4; 1, 1, 1) = π⁶ φ(q)² (J_6 - 7 J_4 + 14 J_2) / (3780 q⁶)`.
    pub fn v3_114(q: u64) -> Result<PiValue> {
        modulus_at_least_two(q)?;
        Ok(v3_114_with_denominator_power(q, 6))
    }

    /// The same totient combination over `q⁴` instead of `q⁶`. This variant
    /// is wrong for every `q ≥ 2`; it exists so reports can show it failing.
    pub fn v3_114_q4_variant(q: u64) -> Result<PiValue> {
        modulus_at_least_two(q)?;
        Ok(v3_114_with_denominator_power(q, 4))
    }

    fn v3_114_with_denominator_power(q: u64, k: u32) -> PiValue {
        let phi_q = phi(q);
        PiValue::new(
            &phi_q * &phi_q / ri(BigInt::from(3780) * upow(q, k))
                * jordan_combo(q, &[(1, 6), (-7, 4), (14, 2)]),
            6,
        )
    }

    /// `V3(q; 1, 2, 3; 1, 1, 1) = π⁶ φ(q)² (J_6 - 21 J_2) / (3780 q⁶)`.
    pub fn v3_123(q: u64) -> Result<PiValue> {
        modulus_at_least_two(q)?;
        let phi_q = phi(q);
        Ok(PiValue::new(
            &phi_q * &phi_q / ri(BigInt::from(3780) * upow(q, 6))
                * jordan_combo(q, &[(1, 6), (-21, 2)]),
            6,
        ))
    }

    /// `V3(q; 1, 2, 5; 1, 1, 1) = π⁸ φ(q)² (J_8 - 7 J_4 - 50 J_2) / (37800 q⁸)`.
    pub fn v3_125(q: u64) -> Result<PiValue> {
        modulus_at_least_two(q)?;
        let phi_q = phi(q);
        Ok(PiValue::new(
            &phi_q * &phi_q / ri(BigInt::from(37800) * upow(q, 8))
                * jordan_combo(q, &[(1, 8), (-7, 4), (-50, 2)]),
            8,
        ))
    }
}

/// Lifts `a` to its least positive representative modulo `q` (`q` if `a ≡ 0`).
pub fn reduce_residue(a: u64, q: u64) -> u64 {
    match a % q {
        0 => q,
        r => r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(n: i64, d: i64, k: u32) -> PiValue {
        PiValue::new(rat(n, d), k)
    }

    #[test]
    fn r_term_examples() {
        assert_eq!(r_term(1, 1, 1, 1, 1).unwrap(), rat(1, 12));
        assert_eq!(r_term(1, 1, 3, 1, 1).unwrap(), rat(0, 1));
        assert_eq!(r_term(1, 1, 5, 2, 1).unwrap(), rat(0, 1));
        assert!(r_term(1, 1, 6, 2, 1).is_err());
        assert!(r_term(1, 1, 6, 1, 3).is_err());
    }

    #[test]
    fn c1_term_examples() {
        assert_eq!(c1_term(1, 1, 1, 1, 1).unwrap(), rat(-1, 6));
        assert_eq!(c1_term(1, 1, 3, 1, 1).unwrap(), rat(1, 6));
        assert_eq!(c1_term(2, 2, 5, 1, 1).unwrap(), rat(52, 15));
        assert!(c1_term(1, 1, 4, 2, 1).is_err());
    }

    #[test]
    fn v2_examples() {
        assert_eq!(v2_closed(3, 1, 1, 1, 1).unwrap(), pv(1, 27, 2));
        assert_eq!(v2_closed(5, 1, 1, 2, 1).unwrap(), PiValue::zero());
        assert_eq!(v2_closed(4, 2, 2, 1, 1).unwrap(), pv(1, 64, 4));
        assert_eq!(v2_closed(7, 1, 2, 1, 1).unwrap(), PiValue::zero());
        assert!(v2_closed(6, 1, 1, 3, 1).is_err());

        assert_eq!(v2_lattice(1, 1, 1, 1, 1).unwrap(), PiValue::zero());
        assert_eq!(v2_lattice(5, 1, 1, 1, 1).unwrap(), pv(4, 25, 2));
        assert_eq!(v2_lattice(4, 2, 2, 1, 1).unwrap(), pv(1, 64, 4));
        assert_eq!(v2_closed(1, 1, 1, 1, 1).unwrap(), PiValue::zero());
    }

    #[test]
    fn corollary_examples() {
        assert_eq!(v2_cor22(3, 1, 1, 1).unwrap(), pv(1, 27, 2));
        assert_eq!(v2_cor22(5, 1, 1, 2).unwrap(), PiValue::zero());
        assert_eq!(v2_cor22(7, 1, 1, 2).unwrap(), pv(3, 49, 2));
        assert!(v2_cor22(1, 1, 1, 1).is_err());

        assert_eq!(v2_eq28(3, 1).unwrap(), pv(1, 27, 2));
        assert_eq!(v2_eq28(5, 2).unwrap(), PiValue::zero());
        assert_eq!(v2_eq28(7, 2).unwrap(), pv(3, 49, 2));

        assert_eq!(v2_cor23(5, 1, 1).unwrap(), pv(4, 25, 2));
        assert_eq!(v2_cor23(5, 2, 2).unwrap(), pv(96, 3125, 4));
        assert_eq!(v2_cor23(3, 3, 3).unwrap(), pv(16, 19683, 6));
        assert!(v2_cor23(1, 2, 2).is_err());

        assert_eq!(v2_diag(4, 2).unwrap(), pv(1, 64, 4));
        assert_eq!(v2_diag(5, 2).unwrap(), pv(96, 3125, 4));
        assert_eq!(v2_diag(3, 3).unwrap(), pv(16, 19683, 6));
        assert!(v2_diag(5, 1).is_err());

        assert_eq!(liu_zhang(5, 1, 1).unwrap(), pv(4, 25, 2));
        assert_eq!(liu_zhang(4, 2, 2).unwrap(), pv(1, 64, 4));
        assert_eq!(liu_zhang(3, 3, 3).unwrap(), pv(16, 19683, 6));
    }

    #[test]
    fn thm24_term_examples() {
        let t = thm24_terms(3, 1, 1, 2, 1, 1, 1).unwrap();
        assert_eq!(t.c2, rat(-2, 9));
        assert_eq!(t.d_bc, rat(1, 12));
        for q in 2..12u64 {
            let t = thm24_terms(q, 1, 1, 2, 1, 1, 1).unwrap();
            assert_eq!(t.d_bc, ri(euler_phi(q)) / ri(24));
        }
        let t = thm24_terms(5, 2, 2, 2, 1, 2, 3).unwrap();
        assert!(t.d_bc.is_zero() && t.d_cb.is_zero());
    }

    #[test]
    fn v3_examples() {
        assert_eq!(v3_closed(3, 1, 1, 2, 1, 1, 1).unwrap(), pv(4, 729, 4));
        assert_eq!(v3_closed(3, 1, 2, 3, 1, 1, 1).unwrap(), pv(16, 19683, 6));
        assert_eq!(v3_closed(4, 1, 1, 2, 1, 1, 1).unwrap(), pv(1, 128, 4));
        assert_eq!(v3_lattice(3, 1, 1, 2, 1, 1, 1).unwrap(), pv(4, 729, 4));
        assert_eq!(v3_lattice(2, 2, 2, 2, 1, 1, 1).unwrap(), pv(1, 512, 6));
        assert_eq!(v3_lattice(4, 1, 1, 2, 1, 1, 1).unwrap(), pv(1, 128, 4));
        assert_eq!(v3_closed(5, 1, 1, 3, 1, 1, 1).unwrap(), PiValue::zero());
        assert!(v3_closed(5, 1, 1, 1, 1, 1, 1).is_err());
        assert!(v3_closed(1, 1, 1, 2, 1, 1, 1).is_err());
        assert!(v3_closed(6, 1, 1, 2, 1, 2, 1).is_err());

        assert_eq!(v3_cor25(3, 2).unwrap(), pv(4, 729, 4));
        assert_eq!(v3_cor25(4, 2).unwrap(), pv(1, 128, 4));
        assert_eq!(v3_cor25(3, 4).unwrap(), pv(8, 19683, 6));
        assert!(v3_cor25(3, 3).is_err());

        assert_eq!(v3_cor26(3, 3).unwrap(), pv(16, 19683, 6));
        assert_eq!(v3_cor26(5, 3).unwrap(), pv(64, 15625, 6));
        assert_eq!(v3_cor26(3, 5).unwrap(), pv(16, 177147, 8));
        assert!(v3_cor26(3, 4).is_err());
    }

    #[test]
    fn special_forms() {
        use special::*;
        for q in 2..30u64 {
            assert_eq!(v2_11(q).unwrap(), v2_cor23(q, 1, 1).unwrap());
            assert_eq!(v2_22(q).unwrap(), v2_diag(q, 2).unwrap());
            assert_eq!(v2_33(q).unwrap(), v2_diag(q, 3).unwrap());
            assert_eq!(v3_112(q).unwrap(), v3_cor25(q, 2).unwrap());
            assert_eq!(v3_114(q).unwrap(), v3_cor25(q, 4).unwrap());
            if q > 2 {
                assert_ne!(v3_114_q4_variant(q).unwrap(), v3_cor25(q, 4).unwrap());
            }
            assert_eq!(v3_123(q).unwrap(), v3_cor26(q, 3).unwrap());
            assert_eq!(v3_125(q).unwrap(), v3_cor26(q, 5).unwrap());
        }
        for p in [3u64, 5, 7, 11, 13] {
            assert_eq!(v2_11_prime(p).unwrap(), v2_cor23(p, 1, 1).unwrap());
        }
        assert!(v2_11_prime(9).is_err());
        assert_eq!(v2_11_prime(5).unwrap(), pv(4, 25, 2));
    }

    #[test]
    fn residue_and_symmetry() {
        assert_eq!(
            v2_closed(5, 1, 1, 7, 1).unwrap(),
            v2_closed(5, 1, 1, 2, 1).unwrap()
        );
        for q in 1..10u64 {
            for (m, n) in [(1, 3), (2, 4), (3, 3)] {
                for a in (1..5).filter(|&a| gcd_u64(a, q) == 1) {
                    for b in (1..5).filter(|&b| gcd_u64(b, q) == 1) {
                        assert_eq!(
                            v2_closed(q, m, n, a, b).unwrap(),
                            v2_closed(q, n, m, b, a).unwrap()
                        );
                        let a2 = reduce_residue(a + q, q);
                        assert_eq!(
                            v2_closed(q, m, n, a + q, b).unwrap(),
                            v2_closed(q, m, n, a2, b).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn decimal_rendering() {
        let v = pv(4, 25, 2);
        assert_eq!(v.decimal(15).positional(), "1.57913670417430");
        assert_eq!(
            PiValue::new(rat(1, 1), 1).decimal(30).digits,
            "314159265358979323846264338328"
        );
        assert_eq!(PiValue::zero().decimal(15).positional(), "0");
        assert_eq!(pv(-1, 1000, 0).decimal(3).positional(), "-0.00100");
        assert_eq!(pv(12345, 1, 0).decimal(3).positional(), "12300");
        assert_eq!(pv(999, 1000, 0).decimal(2).positional(), "1.0");
        assert!(
            (pv(16, 19683, 6).to_f64() - 16.0 * std::f64::consts::PI.powi(6) / 19683.0).abs()
                < 1e-15
        );
    }

    #[test]
    fn coeff_string_round_trip() {
        let v = pv(-96, 3125, 4);
        assert_eq!(v.coeff_string(), "-96/3125");
        assert_eq!(PiValue::parse_coeff(&v.coeff_string()).unwrap(), v.coeff);
        assert_eq!(PiValue::zero().coeff_string(), "0/1");
        assert!(PiValue::parse_coeff("1/0").is_err());
        assert!(PiValue::parse_coeff("x").is_err());
    }

    #[test]
    fn pi_value_addition() {
        let a = pv(1, 2, 2);
        assert_eq!(a.checked_add(&pv(1, 2, 2)).unwrap(), pv(1, 1, 2));
        assert_eq!(a.checked_add(&PiValue::zero()).unwrap(), a);
        assert!(a.checked_add(&pv(1, 1, 4)).is_err());
        assert_eq!(pv(0, 1, 6).pi_power, 0);
    }
}

//! Bernoulli numbers, Bernoulli polynomials and the periodic Bernoulli
//! functions `B̄_n(x)`, all in exact rational arithmetic.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::gcd_u64;
use crate::error::{Error, Result};

/// Reduced arbitrary-precision fraction with positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

fn factorial_table() -> &'static RwLock<Vec<BigInt>> {
    static TABLE: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![BigInt::one()]))
}

pub fn factorial(n: u32) -> BigInt {
    let n = n as usize;
    if let Some(v) = factorial_table().read().unwrap().get(n) {
        return v.clone();
    }
    let mut table = factorial_table().write().unwrap();
    while table.len() <= n {
        let next = table.last().unwrap() * BigInt::from(table.len());
        table.push(next);
    }
    table[n].clone()
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn number_table() -> &'static RwLock<Vec<Rational>> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Rational::one()]))
}

/// `B_n` with `B_1 = -1/2`, from `Σ_{k=0}^{n} C(n+1, k) B_k = 0`.
pub fn bernoulli_number(n: u32) -> Rational {
    let n = n as usize;
    if let Some(v) = number_table().read().unwrap().get(n) {
        return v.clone();
    }
    let mut table = number_table().write().unwrap();
    while table.len() <= n {
        let m = table.len() as u32;
        let acc: Rational = table
            .iter()
            .enumerate()
            .map(|(k, b)| b * int(binomial(m + 1, k as u32)))
            .sum();
        table.push(-acc / int(m + 1));
    }
    table[n].clone()
}

/// `B_n(x)` scaled to integer coefficients: `B_n(x) = Σ_k coeffs[k] x^{n-k} / denom`.
struct IntegerPoly {
    coeffs: Vec<BigInt>,
    denom: BigInt,
}

fn poly_table() -> &'static RwLock<Vec<Arc<IntegerPoly>>> {
    static TABLE: OnceLock<RwLock<Vec<Arc<IntegerPoly>>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(Vec::new()))
}

fn integer_poly(n: u32) -> Arc<IntegerPoly> {
    let n = n as usize;
    if let Some(p) = poly_table().read().unwrap().get(n) {
        return p.clone();
    }
    let mut table = poly_table().write().unwrap();
    while table.len() <= n {
        let deg = table.len() as u32;
        let terms: Vec<Rational> = (0..=deg)
            .map(|k| bernoulli_number(k) * int(binomial(deg, k)))
            .collect();
        let denom = terms
            .iter()
            .fold(BigInt::one(), |acc, t| acc.lcm(t.denom()));
        let coeffs = terms
            .iter()
            .map(|t| t.numer() * (&denom / t.denom()))
            .collect();
        table.push(Arc::new(IntegerPoly { coeffs, denom }));
    }
    table[n].clone()
}

/// Evaluates `B_n(p/r)` for `r > 0` by homogeneous Horner over the integers.
fn poly_at_ratio(n: u32, p: &BigInt, r: &BigInt) -> Rational {
    let poly = integer_poly(n);
    let mut acc = poly.coeffs[0].clone();
    let mut r_pow = BigInt::one();
    for c in &poly.coeffs[1..] {
        r_pow *= r;
        acc = acc * p + c * &r_pow;
    }
    Rational::new(acc, &poly.denom * r_pow)
}

/// `B_n(x) = Σ_{k=0}^{n} C(n,k) B_k x^{n-k}`.
pub fn bernoulli_poly(n: u32, x: &Rational) -> Rational {
    poly_at_ratio(n, x.numer(), x.denom())
}

/// Fractional part `{x} = x - ⌊x⌋ ∈ [0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

fn bbar_reduced(n: u32, p: &BigInt, r: &BigInt) -> Rational {
    let p = p.mod_floor(r);
    match n {
        0 => Rational::one(),
        1 if p.is_zero() => Rational::zero(),
        _ => poly_at_ratio(n, &p, r),
    }
}

/// The periodic Bernoulli function `B̄_n(x)`.
///
/// `B̄_0 = 1`, `B̄_1` vanishes at integers, and otherwise `B̄_n(x) = B_n({x})`.
pub fn bernoulli_function(n: u32, x: &Rational) -> Rational {
    bbar_reduced(n, x.numer(), x.denom())
}

/// `B̄_n(p / r)` for machine-sized arguments, `r > 0`.
pub fn bbar(n: u32, p: i64, r: u64) -> Rational {
    let r = r as i64;
    let p = p.rem_euclid(r);
    match n {
        0 => Rational::one(),
        1 if p == 0 => Rational::zero(),
        _ => poly_at_ratio(n, &BigInt::from(p), &BigInt::from(r)),
    }
}

/// `a^{n-1} Σ_{l=0}^{a-1} B̄_n(x + d·l/a)`, which equals `B̄_n(a·x)` whenever
/// `gcd(a, d) = 1`.
pub fn raabe_sum(n: u32, a: u64, d: i64, x: &Rational) -> Result<Rational> {
    if n == 0 {
        return Err(Error::range("n", n, "n >= 1"));
    }
    if a == 0 {
        return Err(Error::ZeroArgument("a"));
    }
    if gcd_u64(a, d.unsigned_abs()) != 1 {
        return Err(Error::NotCoprime {
            name: "d",
            value: d,
            modulus: a as i64,
        });
    }
    let a_r = int(a);
    let sum: Rational = (0..a as i64)
        .map(|l| bernoulli_function(n, &(x + rat(d * l, 1) / &a_r)))
        .sum();
    Ok(sum * int(BigInt::from(a).pow(n - 1)))
}

fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

fn pow_signed(base: i64, exp: u32) -> Rational {
    int(BigInt::from(base).pow(exp))
}

/// Right-hand side of the product expansion of `B̄_m(ax+y)·B̄_n(bx+z)` into
/// single Bernoulli functions of `x`, including the `δ_Z` correction at
/// `m = n = 1`. Equal to the product for all rational `x, y, z`.
#[allow(clippy::too_many_arguments)]
pub fn product_expansion(
    m: u32,
    n: u32,
    a: i64,
    b: i64,
    x: &Rational,
    y: &Rational,
    z: &Rational,
) -> Result<Rational> {
    if m == 0 || n == 0 {
        return Err(Error::range("m, n", 0, "m, n >= 1"));
    }
    if a == 0 {
        return Err(Error::ZeroArgument("a"));
    }
    if b == 0 {
        return Err(Error::ZeroArgument("b"));
    }
    let half = |m: u32, n: u32, a: i64, b: i64, y: &Rational, z: &Rational| -> Rational {
        // n b^{n-1} sgn(b) Σ_j C(m,j) (-1)^j a^{m-j}/(m+n-j) Σ_{l=1}^{|b|} B̄_j(a(l+z)/b - y) B̄_{m+n-j}(x + (l+z)/b)
        let b_r = int(b);
        let a_r = int(a);
        let mut total = Rational::zero();
        for j in 0..=m {
            let inner: Rational = (1..=b.unsigned_abs() as i64)
                .map(|l| {
                    let shifted = (z + int(l)) / &b_r;
                    bernoulli_function(j, &(&a_r * &shifted - y))
                        * bernoulli_function(m + n - j, &(x + &shifted))
                })
                .sum();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            total += inner * int(binomial(m, j) * sign) * pow_signed(a, m - j) / int(m + n - j);
        }
        total * pow_signed(b, n - 1) * int(n as i64 * b.signum())
    };
    let first = half(m, n, a, b, y, z);
    let second = half(n, m, b, a, z, y);
    let g = gcd_u64(a.unsigned_abs(), b.unsigned_abs()) as i64;
    let sign = if n % 2 == 1 { 1 } else { -1 };
    let third = int(factorial(m) * factorial(n) * BigInt::from(g).pow(m + n) * sign)
        * bernoulli_function(m + n, &((int(b) * y - int(a) * z) / int(g)))
        / (pow_signed(a, n) * pow_signed(b, m) * int(factorial(m + n)));
    let mut result = first + second + third;
    if m == 1 && n == 1 {
        let ax_y = int(a) * x + y;
        let bx_z = int(b) * x + z;
        if is_integer(&ax_y) && is_integer(&bx_z) {
            result -= rat((a * b).signum(), 4);
        }
    }
    Ok(result)
}

/// Symmetric partial sum `-n!/(2πi)^n Σ'_{|k|≤K} e^{2πikx}/k^n` of the
/// Fourier series of `B̄_n`, accumulated from the largest `|k|` down.
///
/// The `±k` terms are paired into `2 cos(2πkx)/k^n` (even `n`) or
/// `2i sin(2πkx)/k^n` (odd `n`); `kx mod 1` is reduced exactly when the
/// denominator of `x` fits in 64 bits, and the sum is compensated.
pub fn fourier_eval(n: u32, x: &Rational, terms: u64) -> f64 {
    assert!(n >= 1 && terms >= 1);
    let t = frac(x);
    let exact = t.numer().to_u64().zip(t.denom().to_u64());
    let tf = t.to_f64().unwrap_or(0.0);
    // 2πkx mod 2π in double-double, reduced to [-π, π)
    let angle = |k: u64| -> (f64, f64) {
        let u = match exact {
            Some((p, r)) => {
                let res = (u128::from(k) * u128::from(p) % u128::from(r)) as f64;
                let r = r as f64;
                let num = if 2.0 * res >= r { res - r } else { res };
                let hi = num / r;
                (hi, (-hi).mul_add(r, num) / r)
            }
            None => ((k as f64 * tf).fract(), 0.0),
        };
        dd_mul((TWO_PI_HI, TWO_PI_LO), u)
    };
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for k in (1..=terms).rev() {
        let (th, tl) = angle(k);
        let (sin, cos) = th.sin_cos();
        let trig = if n % 2 == 0 {
            cos - sin * tl
        } else {
            sin + cos * tl
        };
        let term = trig / (k as f64).powi(n as i32);
        // Neumaier
        let s = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - s) + term
        } else {
            (term - s) + sum
        };
        sum = s;
    }
    // 2 n! / (2π)^n in double-double, sign (-1)^{⌊n/2⌋+1}
    let (mut hi, mut lo) = (1.0f64, 0.0f64);
    for _ in 0..n {
        (hi, lo) = dd_mul((hi, lo), (TWO_PI_HI, TWO_PI_LO));
    }
    let nfact = factorial(n).to_f64().unwrap_or(f64::INFINITY);
    let (ph, pl) = dd_div_into(2.0 * nfact, (hi, lo));
    let (vh, vl) = dd_mul((ph, pl), (sum, comp));
    let sign = if (n / 2) % 2 == 0 { -1.0 } else { 1.0 };
    sign * (vh + vl)
}

const TWO_PI_HI: f64 = std::f64::consts::TAU;
const TWO_PI_LO: f64 = 2.4492935982947064e-16;

fn dd_mul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let p = a.0 * b.0;
    let e = a.0.mul_add(b.0, -p) + (a.0 * b.1 + a.1 * b.0);
    let s = p + e;
    (s, e - (s - p))
}

/// `c / b` for a double `c` and double-double `b`.
fn dd_div_into(c: f64, b: (f64, f64)) -> (f64, f64) {
    let q1 = c / b.0;
    let (ph, pl) = dd_mul((q1, 0.0), b);
    let r = ((c - ph) - pl) / b.0;
    let s = q1 + r;
    (s, r - (s - q1))
}

/// Truncation bound for [`fourier_eval`] when `n ≥ 2`:
/// `2·n!/(2π)^n · K^{1-n}/(n-1)`.
pub fn fourier_tail_bound(n: u32, terms: u64) -> f64 {
    assert!(n >= 2);
    let nfact = factorial(n).to_f64().unwrap_or(f64::INFINITY);
    2.0 * nfact / (2.0 * PI).powi(n as i32) * (terms as f64).powi(1 - n as i32) / f64::from(n - 1)
}

//! Dirichlet characters modulo `q` as exponent vectors against fixed
//! generators of `(Z/qZ)^×`.
//!
//! The unit group is split by CRT into cyclic components: one per odd prime
//! power (generated by a primitive root), `Z/2` for `4`, and `Z/2 × Z/2^{k-2}`
//! (generated by `-1` and `5`) for `2^k` with `k ≥ 3`. A character is the
//! vector `(e_1, …, e_r)` with `e_i` taken modulo the `i`-th component order,
//! and `χ(g_i) = exp(2πi e_i / o_i)`. All group-layer arithmetic is on
//! integers; values become floating point only through [`CharValue::to_complex`].

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::arith::{euler_phi, factorize, gcd_u64, lcm_u64};
use crate::error::{Error, Result};

/// A cyclic factor of the unit group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicComponent {
    /// Prime power this factor lives in.
    pub prime_power: u64,
    pub generator: u64,
    pub order: u64,
}

#[derive(Debug, Clone)]
pub struct CharacterGroup {
    modulus: u64,
    components: Vec<CyclicComponent>,
    exponent: u64,
    /// Discrete logs per residue `0..q`, `None` for non-units.
    logs: Vec<Option<Vec<u64>>>,
}

fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut acc = 1u128 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

fn primitive_root(prime_power: u64, order: u64) -> u64 {
    let order_primes: Vec<u64> = factorize(order).primes().collect();
    (2..prime_power)
        .find(|&g| {
            gcd_u64(g, prime_power) == 1
                && order_primes
                    .iter()
                    .all(|&l| pow_mod(g, order / l, prime_power) != 1)
        })
        .expect("odd prime powers have primitive roots")
}

/// Components for one prime power plus a table from residues mod that
/// prime power to their exponent vectors.
fn prime_power_part(p: u64, e: u32) -> (Vec<CyclicComponent>, Vec<Option<Vec<u64>>>) {
    let pe = p.pow(e);
    let mut table = vec![None; pe as usize];
    let mut comps = Vec::new();
    if p == 2 {
        match e {
            1 => table[1] = Some(vec![]),
            2 => {
                comps.push(CyclicComponent {
                    prime_power: 4,
                    generator: 3,
                    order: 2,
                });
                table[1] = Some(vec![0]);
                table[3] = Some(vec![1]);
            }
            _ => {
                let half = pe / 4;
                comps.push(CyclicComponent {
                    prime_power: pe,
                    generator: pe - 1,
                    order: 2,
                });
                comps.push(CyclicComponent {
                    prime_power: pe,
                    generator: 5,
                    order: half,
                });
                let mut five_k = 1u64;
                for k in 0..half {
                    table[five_k as usize] = Some(vec![0, k]);
                    table[(pe - five_k) as usize] = Some(vec![1, k]);
                    five_k = five_k * 5 % pe;
                }
            }
        }
    } else {
        let order = (p - 1) * p.pow(e - 1);
        let g = primitive_root(pe, order);
        comps.push(CyclicComponent {
            prime_power: pe,
            generator: g,
            order,
        });
        let mut gk = 1u64;
        for k in 0..order {
            table[gk as usize] = Some(vec![k]);
            gk = gk * g % pe;
        }
    }
    (comps, table)
}

/// Builds the full character group modulo `q`.
pub fn character_group(q: u64) -> Arc<CharacterGroup> {
    Arc::new(CharacterGroup::new(q))
}

impl CharacterGroup {
    pub fn new(q: u64) -> Self {
        assert!(q >= 1, "modulus must be positive");
        let parts: Vec<_> = factorize(q)
            .factors
            .iter()
            .map(|&(p, e)| (p.pow(e), prime_power_part(p, e)))
            .collect();
        let components: Vec<CyclicComponent> =
            parts.iter().flat_map(|(_, (c, _))| c.clone()).collect();
        let logs = (0..q)
            .map(|r| {
                if gcd_u64(r, q) != 1 {
                    return None;
                }
                let mut v = Vec::with_capacity(components.len());
                for (pe, (_, table)) in &parts {
                    v.extend(table[(r % pe) as usize].as_ref()?);
                }
                Some(v)
            })
            .collect();
        let exponent = components.iter().fold(1, |acc, c| lcm_u64(acc, c.order));
        CharacterGroup {
            modulus: q,
            components,
            exponent,
            logs,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn components(&self) -> &[CyclicComponent] {
        &self.components
    }

    /// Least common multiple of the component orders; every value is an
    /// `exponent()`-th root of unity.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn order(&self) -> u64 {
        self.components.iter().map(|c| c.order).product()
    }

    /// Exponent vector of `n` against the generators, `None` off the units.
    pub fn discrete_log(&self, n: i64) -> Option<&[u64]> {
        let r = n.rem_euclid(self.modulus as i64) as usize;
        self.logs[r].as_deref()
    }

    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.modulus).filter(|&r| self.logs[r as usize].is_some())
    }

    pub fn principal(self: &Arc<Self>) -> DirichletCharacter {
        DirichletCharacter {
            group: Arc::clone(self),
            exps: vec![0; self.components.len()],
        }
    }

    /// All `φ(q)` characters, lexicographic in their exponent vectors.
    pub fn characters(self: &Arc<Self>) -> Vec<DirichletCharacter> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut exps = vec![0u64; self.components.len()];
        loop {
            out.push(DirichletCharacter {
                group: Arc::clone(self),
                exps: exps.clone(),
            });
            // odometer, last component fastest
            let mut i = exps.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                exps[i] += 1;
                if exps[i] < self.components[i].order {
                    break;
                }
                exps[i] = 0;
            }
        }
    }

    pub fn character(self: &Arc<Self>, exps: Vec<u64>) -> Result<DirichletCharacter> {
        if exps.len() != self.components.len() {
            return Err(Error::Domain(format!(
                "expected {} exponents, got {}",
                self.components.len(),
                exps.len()
            )));
        }
        let exps = exps
            .iter()
            .zip(&self.components)
            .map(|(e, c)| e % c.order)
            .collect();
        Ok(DirichletCharacter {
            group: Arc::clone(self),
            exps,
        })
    }
}

/// A value of a Dirichlet character: zero, or `exp(2πi·exp/order)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharValue {
    Zero,
    Root { exp: u64, order: u64 },
}

impl CharValue {
    pub fn one(order: u64) -> Self {
        CharValue::Root { exp: 0, order }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CharValue::Zero)
    }

    pub fn mul(self, other: CharValue) -> CharValue {
        match (self, other) {
            (CharValue::Root { exp: a, order }, CharValue::Root { exp: b, order: o2 }) => {
                assert_eq!(order, o2, "roots of unity of different orders");
                CharValue::Root {
                    exp: (a + b) % order,
                    order,
                }
            }
            _ => CharValue::Zero,
        }
    }

    pub fn conj(self) -> CharValue {
        match self {
            CharValue::Root { exp, order } => CharValue::Root {
                exp: (order - exp) % order,
                order,
            },
            CharValue::Zero => CharValue::Zero,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            CharValue::Zero => Complex64::new(0.0, 0.0),
            CharValue::Root { exp, order } => {
                // exact on the axes so real characters stay real
                let twice = 4 * exp % (4 * order);
                if twice % order == 0 {
                    return match twice / order {
                        0 => Complex64::new(1.0, 0.0),
                        1 => Complex64::new(0.0, 1.0),
                        2 => Complex64::new(-1.0, 0.0),
                        _ => Complex64::new(0.0, -1.0),
                    };
                }
                let theta = 2.0 * std::f64::consts::PI * exp as f64 / order as f64;
                Complex64::from_polar(1.0, theta)
            }
        }
    }
}

#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<CharacterGroup>,
    exps: Vec<u64>,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.modulus == other.group.modulus && self.exps == other.exps
    }
}

impl Eq for DirichletCharacter {}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi_{}{:?}", self.group.modulus, self.exps)
    }
}

impl DirichletCharacter {
    pub fn group(&self) -> &Arc<CharacterGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn value(&self, n: i64) -> CharValue {
        let order = self.group.exponent;
        match self.group.discrete_log(n) {
            None => CharValue::Zero,
            Some(logs) => {
                let exp = logs
                    .iter()
                    .zip(&self.exps)
                    .zip(&self.group.components)
                    .map(|((l, e), c)| (l * e % c.order) as u128 * (order / c.order) as u128)
                    .sum::<u128>()
                    % order as u128;
                CharValue::Root {
                    exp: exp as u64,
                    order,
                }
            }
        }
    }

    pub fn value_complex(&self, n: i64) -> Complex64 {
        self.value(n).to_complex()
    }

    /// `χ(-1)` as `±1`.
    pub fn parity(&self) -> i8 {
        match self.value(-1) {
            CharValue::Root { exp: 0, .. } => 1,
            _ => -1,
        }
    }

    pub fn is_principal(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// All values real, i.e. `χ = χ̄`.
    pub fn is_real(&self) -> bool {
        self.exps
            .iter()
            .zip(&self.group.components)
            .all(|(e, c)| 2 * e % c.order == 0)
    }

    pub fn multiply(&self, other: &DirichletCharacter) -> Result<DirichletCharacter> {
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch(self.modulus(), other.modulus()));
        }
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .zip(&self.group.components)
            .map(|((a, b), c)| (a + b) % c.order)
            .collect();
        Ok(DirichletCharacter {
            group: Arc::clone(&self.group),
            exps,
        })
    }

    pub fn conjugate(&self) -> DirichletCharacter {
        let exps = self
            .exps
            .iter()
            .zip(&self.group.components)
            .map(|(e, c)| (c.order - e) % c.order)
            .collect();
        DirichletCharacter {
            group: Arc::clone(&self.group),
            exps,
        }
    }
}

/// An exact sum of `N`-th roots of unity with integer multiplicities.
///
/// Equality tests reduce the multiplicity polynomial modulo the cyclotomic
/// polynomial `Φ_N`, so vanishing is decided exactly.
#[derive(Debug, Clone)]
pub struct RootSum {
    order: u64,
    counts: Vec<i64>,
}

impl RootSum {
    pub fn new(order: u64) -> Self {
        RootSum {
            order,
            counts: vec![0; order as usize],
        }
    }

    pub fn add(&mut self, v: CharValue) {
        if let CharValue::Root { exp, order } = v {
            assert_eq!(order, self.order);
            self.counts[exp as usize] += 1;
        }
    }

    /// Canonical representative modulo `Φ_N`, trailing zeros trimmed.
    pub fn reduced(&self) -> Vec<i64> {
        let phi = cyclotomic(self.order);
        let deg = phi.len() - 1;
        let mut rem = self.counts.clone();
        for top in (deg..rem.len()).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            for (i, &p) in phi.iter().enumerate() {
                rem[top - deg + i] -= c * p;
            }
        }
        rem.truncate(deg);
        while rem.last() == Some(&0) {
            rem.pop();
        }
        rem
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().is_empty()
    }

    /// The sum as an integer, if it is one.
    pub fn as_integer(&self) -> Option<i64> {
        match self.reduced().as_slice() {
            [] => Some(0),
            [c] => Some(*c),
            _ => None,
        }
    }
}

/// Coefficients (constant term first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in crate::arith::divisors(n) {
        if d == n {
            continue;
        }
        let div = cyclotomic(d);
        let dd = div.len() - 1;
        let mut quot = vec![0i64; poly.len() - dd];
        for top in (dd..poly.len()).rev() {
            let c = poly[top];
            quot[top - dd] = c;
            for (i, &p) in div.iter().enumerate() {
                poly[top - dd + i] -= c * p;
            }
        }
        debug_assert!(poly.iter().all(|&c| c == 0));
        poly = quot;
    }
    debug_assert_eq!(poly.len() as u64 - 1, euler_phi(n));
    poly
}

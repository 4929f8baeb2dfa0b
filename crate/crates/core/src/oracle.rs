//! Brute-force mean values by summing over the character group, and the
//! three-way comparison against the exact forms.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::gcd_u64;
use crate::characters::{character_group, CharacterGroup, DirichletCharacter};
use crate::error::{Error, Result};
use crate::lvalues::{l_value, ComplexApprox};
use crate::meanvalues::{self, special, PiValue};

/// Characters modulo `q` with a shared `L(m, χ)` cache.
///
/// Safe to share between threads; the cache is filled on demand.
pub struct Oracle {
    group: Arc<CharacterGroup>,
    chars: Vec<DirichletCharacter>,
    index: HashMap<Vec<u64>, usize>,
    cache: Mutex<HashMap<(u32, usize), ComplexApprox>>,
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Oracle")
            .field("modulus", &self.group.modulus())
            .field("characters", &self.chars.len())
            .finish()
    }
}

/// Summation order over the character list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Forward,
    Reverse,
}

impl Oracle {
    pub fn new(q: u64) -> Result<Oracle> {
        if q == 0 {
            return Err(Error::range("q", q, "q >= 1"));
        }
        let group = character_group(q);
        let chars = group.characters();
        let index = chars
            .iter()
            .enumerate()
            .map(|(i, c)| (c.exponents().to_vec(), i))
            .collect();
        Ok(Oracle {
            group,
            chars,
            index,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus()
    }

    fn coprime(&self, name: &'static str, v: u64) -> Result<()> {
        if v == 0 {
            return Err(Error::ZeroArgument(name));
        }
        if gcd_u64(v, self.modulus()) != 1 {
            return Err(Error::NotCoprime {
                name,
                value: v as i64,
                modulus: self.modulus() as i64,
            });
        }
        Ok(())
    }

    fn l(&self, m: u32, i: usize) -> Result<ComplexApprox> {
        if let Some(v) = self.cache.lock().unwrap().get(&(m, i)) {
            return Ok(*v);
        }
        let v = l_value(m, &self.chars[i])?;
        self.cache.lock().unwrap().insert((m, i), v);
        Ok(v)
    }

    fn with_parity(&self, m: u32, order: Order) -> Vec<usize> {
        let want = if m % 2 == 0 { 1 } else { -1 };
        let mut idx: Vec<usize> = (0..self.chars.len())
            .filter(|&i| self.chars[i].parity() == want)
            .collect();
        if order == Order::Reverse {
            idx.reverse();
        }
        idx
    }

    fn at(&self, i: usize, n: u64) -> Complex64 {
        self.chars[i].value_complex(n as i64)
    }

    pub fn v2(&self, m: u32, n: u32, a: u64, b: u64) -> Result<ComplexApprox> {
        self.v2_ordered(m, n, a, b, Order::Forward)
    }

    pub fn v2_ordered(
        &self,
        m: u32,
        n: u32,
        a: u64,
        b: u64,
        order: Order,
    ) -> Result<ComplexApprox> {
        if m == 0 || n == 0 {
            return Err(Error::range("m, n", 0, ">= 1"));
        }
        self.coprime("a", a)?;
        self.coprime("b", b)?;
        if (m + n) % 2 == 1 {
            return Ok(ComplexApprox::ZERO);
        }
        let mut total = ComplexApprox::ZERO;
        for i in self.with_parity(m, order) {
            let weight = self.at(i, a) * self.at(i, b).conj();
            // L(n, χ̄) = conj L(n, χ)
            let term = self.l(m, i)? * self.l(n, i)?.conj();
            total = total + term.scale(weight);
        }
        Ok(total)
    }

    pub fn v3(&self, m: [u32; 3], a: u64, b: u64, c: u64) -> Result<ComplexApprox> {
        self.v3_ordered(m, a, b, c, Order::Forward)
    }

    /// Pairs `(χ1, χ2)` with `χ1(-1) = (-1)^{m1}`, `χ2(-1) = (-1)^{m2}` and
    /// `χ1χ2(-1) = (-1)^{m3}`.
    pub fn v3_ordered(
        &self,
        m: [u32; 3],
        a: u64,
        b: u64,
        c: u64,
        order: Order,
    ) -> Result<ComplexApprox> {
        let [m1, m2, m3] = m;
        if self.modulus() < 2 {
            return Err(Error::range("q", self.modulus(), "q >= 2"));
        }
        if m1 == 0 || m2 == 0 {
            return Err(Error::range("m1, m2", 0, ">= 1"));
        }
        if m3 < 2 {
            return Err(Error::range("m3", m3, "m3 >= 2"));
        }
        self.coprime("a", a)?;
        self.coprime("b", b)?;
        self.coprime("c", c)?;
        if (m1 + m2 + m3) % 2 == 1 {
            return Ok(ComplexApprox::ZERO);
        }
        let second = self.with_parity(m2, order);
        let mut total = ComplexApprox::ZERO;
        for i in self.with_parity(m1, order) {
            let l1 = self.l(m1, i)?;
            let wa = self.at(i, a);
            for &j in &second {
                let prod = self.chars[i].multiply(&self.chars[j])?;
                let k = self.index[prod.exponents()];
                let weight = wa * self.at(j, b) * self.at(k, c).conj();
                let term = l1 * self.l(m2, j)? * self.l(m3, k)?.conj();
                total = total + term.scale(weight);
            }
        }
        Ok(total)
    }
}

/// `Σ χ(a) χ̄(b) L(m, χ) L(n, χ̄)` over `χ mod q` with `χ(-1) = (-1)^m = (-1)^n`.
pub fn oracle_v2(q: u64, m: u32, n: u32, a: u64, b: u64) -> Result<ComplexApprox> {
    Oracle::new(q)?.v2(m, n, a, b)
}

/// `Σ χ1(a) χ2(b) conj(χ1χ2)(c) L(m1, χ1) L(m2, χ2) L(m3, conj(χ1χ2))` over
/// parity-admissible pairs.
pub fn oracle_v3(
    q: u64,
    m1: u32,
    m2: u32,
    m3: u32,
    a: u64,
    b: u64,
    c: u64,
) -> Result<ComplexApprox> {
    Oracle::new(q)?.v3([m1, m2, m3], a, b, c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Query {
    V2 {
        q: u64,
        m: u32,
        n: u32,
        a: u64,
        b: u64,
    },
    V3 {
        q: u64,
        m1: u32,
        m2: u32,
        m3: u32,
        a: u64,
        b: u64,
        c: u64,
    },
}

impl Query {
    pub fn modulus(&self) -> u64 {
        match *self {
            Query::V2 { q, .. } | Query::V3 { q, .. } => q,
        }
    }

    pub fn closed(&self) -> Result<PiValue> {
        match *self {
            Query::V2 { q, m, n, a, b } => meanvalues::v2_closed(q, m, n, a, b),
            Query::V3 {
                q,
                m1,
                m2,
                m3,
                a,
                b,
                c,
            } => meanvalues::v3_closed(q, m1, m2, m3, a, b, c),
        }
    }

    pub fn lattice(&self) -> Result<PiValue> {
        match *self {
            Query::V2 { q, m, n, a, b } => meanvalues::v2_lattice(q, m, n, a, b),
            Query::V3 {
                q,
                m1,
                m2,
                m3,
                a,
                b,
                c,
            } => meanvalues::v3_lattice(q, m1, m2, m3, a, b, c),
        }
    }

    pub fn oracle(&self) -> Result<ComplexApprox> {
        self.oracle_with(&Oracle::new(self.modulus())?)
    }

    /// Evaluates with a caller-provided oracle of the same modulus.
    pub fn oracle_with(&self, oracle: &Oracle) -> Result<ComplexApprox> {
        if oracle.modulus() != self.modulus() {
            return Err(Error::ModulusMismatch(oracle.modulus(), self.modulus()));
        }
        match *self {
            Query::V2 { m, n, a, b, .. } => oracle.v2(m, n, a, b),
            Query::V3 {
                m1,
                m2,
                m3,
                a,
                b,
                c,
                ..
            } => oracle.v3([m1, m2, m3], a, b, c),
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Query::V2 { q, m, n, a, b } => write!(f, "V2(q={q}; m={m}, n={n}; a={a}, b={b})"),
            Query::V3 {
                q,
                m1,
                m2,
                m3,
                a,
                b,
                c,
            } => {
                write!(f, "V3(q={q}; m={m1},{m2},{m3}; a={a}, b={b}, c={c})")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub query: Query,
    pub closed: PiValue,
    pub lattice: Option<PiValue>,
    pub oracle: ComplexApprox,
    /// `closed` to 30 significant digits.
    pub exact_decimal: String,
    pub abs_dev: f64,
    pub rel_dev: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Computes all three forms of `query` and compares them.
///
/// Relative tolerance, absolute when the exact value is zero. Fails if the
/// closed form and lattice sum differ at all.
pub fn verify(query: &Query, tolerance: f64) -> Result<VerificationReport> {
    check_tolerance(tolerance)?;
    let oracle = Oracle::new(query.modulus())?;
    verify_with(query, tolerance, &oracle)
}

/// [`verify`] reusing an existing oracle (and its L-value cache).
pub fn verify_with(query: &Query, tolerance: f64, oracle: &Oracle) -> Result<VerificationReport> {
    check_tolerance(tolerance)?;
    let closed = query.closed()?;
    let lattice = query.lattice()?;
    let approx = query.oracle_with(oracle)?;
    let mut report = assess(*query, closed, Some(lattice), approx, tolerance);
    if let Query::V3 {
        q,
        m1: 1,
        m2: 1,
        m3: 4,
        a: 1,
        b: 1,
        c: 1,
    } = *query
    {
        report.notes.extend(quartic_denominator_note(q, &approx)?);
    }
    Ok(report)
}

fn check_tolerance(tolerance: f64) -> Result<()> {
    if !(tolerance > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    Ok(())
}

/// Builds a report from precomputed values. The verdict is decided here.
pub fn assess(
    query: Query,
    closed: PiValue,
    lattice: Option<PiValue>,
    oracle: ComplexApprox,
    tolerance: f64,
) -> VerificationReport {
    let decimal = closed.decimal(30);
    let exact = decimal.to_f64();
    let abs_dev = (oracle.value() - Complex64::new(exact, 0.0)).norm();
    let rel_dev = if exact == 0.0 {
        abs_dev
    } else {
        abs_dev / exact.abs()
    };
    let mut notes = Vec::new();
    let mut ok = rel_dev <= tolerance;
    if !ok {
        notes.push(format!(
            "oracle deviates from the exact value by {rel_dev:.3e} (tolerance {tolerance:.1e})"
        ));
    }
    if let Some(l) = &lattice {
        if *l != closed {
            ok = false;
            notes.push(format!("closed form {closed} differs from lattice sum {l}"));
        }
    }
    if oracle.err > tolerance * exact.abs().max(1.0) {
        notes.push(format!(
            "oracle error bound {:.3e} exceeds the tolerance",
            oracle.err
        ));
    }
    VerificationReport {
        query,
        closed,
        lattice,
        oracle,
        exact_decimal: decimal.scientific(),
        abs_dev,
        rel_dev,
        tolerance,
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        notes,
    }
}

/// For `V3(q; 1, 1, 4; 1, 1, 1)`: the totient form over `q⁶` against the same
/// combination over `q⁴`.
fn quartic_denominator_note(q: u64, oracle: &ComplexApprox) -> Result<Vec<String>> {
    if q < 2 {
        return Ok(Vec::new());
    }
    let right = special::v3_114(q)?;
    let wrong = special::v3_114_q4_variant(q)?;
    let dev = |v: &PiValue| {
        let x = v.to_f64();
        let d = (oracle.value() - Complex64::new(x, 0.0)).norm();
        if x == 0.0 {
            d
        } else {
            d / x.abs()
        }
    };
    Ok(vec![
        format!(
            "totient form (J6 - 7 J4 + 14 J2) phi^2 / (3780 q^6) = {right}, oracle deviation {:.3e}",
            dev(&right)
        ),
        format!(
            "same combination over q^4 = {wrong}, oracle deviation {:.3e}; the q^4 denominator is wrong{}",
            dev(&wrong),
            if right == wrong { " (coincides at this q)" } else { "" }
        ),
    ])
}

use lvmean::arith::{euler_phi, gcd};
use lvmean::characters::{character_group, CharValue, RootSum};

/// Character-layer checks modulo `q`; one message per violated property.
pub fn character_failures(q: u64) -> Vec<String> {
    let mut bad = Vec::new();
    let g = character_group(q);
    let chars = g.characters();
    let phi = euler_phi(q);
    if chars.len() as u64 != phi || g.order() != phi {
        bad.push(format!("q={q}: {} characters, phi = {phi}", chars.len()));
    }
    let units: Vec<u64> = g.units().collect();
    if units.len() as u64 != phi {
        bad.push(format!("q={q}: {} units", units.len()));
    }
    let n = g.exponent();

    // χ ↦ Σ_a χ(a) conj ψ(a)
    for (i, chi) in chars.iter().enumerate() {
        for (j, psi) in chars.iter().enumerate() {
            let mut s = RootSum::new(n);
            for &a in &units {
                s.add(chi.value(a as i64).mul(psi.value(a as i64).conj()));
            }
            let want = if i == j { phi as i64 } else { 0 };
            if s.as_integer() != Some(want) {
                bad.push(format!("q={q}: row orthogonality fails at ({i}, {j})"));
            }
        }
    }
    // a, b ↦ Σ_χ χ(a) conj χ(b)
    for &a in &units {
        for &b in &units {
            let mut s = RootSum::new(n);
            for chi in &chars {
                s.add(chi.value(a as i64).mul(chi.value(b as i64).conj()));
            }
            let want = if a == b { phi as i64 } else { 0 };
            if s.as_integer() != Some(want) {
                bad.push(format!("q={q}: column orthogonality fails at ({a}, {b})"));
            }
        }
    }

    if q >= 3 {
        let odd = chars.iter().filter(|c| c.parity() == -1).count() as u64;
        if 2 * odd != phi {
            bad.push(format!("q={q}: {odd} odd characters of {phi}"));
        }
    } else if chars.iter().any(|c| c.parity() != 1) {
        bad.push(format!("q={q}: odd character modulo {q}"));
    }

    let qi = q as i64;
    for chi in &chars {
        for m in -qi..2 * qi {
            let vm = chi.value(m);
            if vm != chi.value(m + qi) {
                bad.push(format!("q={q}: {chi:?} not periodic at {m}"));
            }
            if vm.is_zero() != (gcd(m, qi).unwrap_or(0) != 1) {
                bad.push(format!("q={q}: {chi:?} support wrong at {m}"));
            }
        }
        for m in 0..qi {
            for k in 0..qi {
                if chi.value(m * k) != chi.value(m).mul(chi.value(k)) {
                    bad.push(format!("q={q}: {chi:?} not multiplicative at {m}·{k}"));
                }
            }
        }
        for psi in &chars {
            let prod = chi.multiply(psi).unwrap();
            for &a in &units {
                let a = a as i64;
                if prod.value(a) != chi.value(a).mul(psi.value(a)) {
                    bad.push(format!("q={q}: product character wrong at {a}"));
                }
            }
            if prod.parity() != chi.parity() * psi.parity() {
                bad.push(format!("q={q}: parity not multiplicative"));
            }
        }
        if !chi.multiply(&chi.conjugate()).unwrap().is_principal() {
            bad.push(format!("q={q}: χ·χ̄ not principal"));
        }
    }
    let principal = chars.iter().filter(|c| c.is_principal()).count();
    if principal != 1 || chars.iter().any(|c| c.value(1) != CharValue::one(n)) {
        bad.push(format!("q={q}: principal character or χ(1) wrong"));
    }
    bad
}

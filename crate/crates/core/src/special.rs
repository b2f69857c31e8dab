//! Hurwitz zeta function, the normaliser of the discrete power law.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
#[error("Hurwitz zeta needs s > 1 and q > 0 (got s = {s}, q = {q})")]
pub struct ZetaDomainError {
    pub s: f64,
    pub q: f64,
}

// B_{2j}/(2j)! for j = 1..=8.
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
];

/// `ζ(s, q) = Σ_{k≥0} (k + q)^{−s}` by Euler–Maclaurin summation.
///
/// The first terms are summed directly until the argument reaches 16, which
/// makes the truncated Bernoulli series accurate to about machine precision.
pub fn hurwitz_zeta(s: f64, q: f64) -> Result<f64, ZetaDomainError> {
    if !(s > 1.0 && q > 0.0) || !s.is_finite() || !q.is_finite() {
        return Err(ZetaDomainError { s, q });
    }
    let shift = (16.0 - q).ceil().max(0.0) as usize;
    let head: f64 = (0..shift).map(|k| (q + k as f64).powf(-s)).sum();
    let a = q + shift as f64;
    let a_pow = a.powf(-s);
    let mut tail = a * a_pow / (s - 1.0) + 0.5 * a_pow;
    // rising factorial s(s+1)…(s+2j−2) times a^{−s−2j+1}
    let mut factor = s * a_pow / a;
    for (j, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = b * factor;
        tail += term;
        if term.abs() < 1e-17 * tail.abs() {
            break;
        }
        let m = 2.0 * (j + 1) as f64;
        factor *= (s + m - 1.0) * (s + m) / (a * a);
    }
    Ok(head + tail)
}

use crate::error::{Error, Result};
use crate::num::Real;

/// Rotation number `alpha_x = sum_j b_j^{x_j}` for the schedule
/// `b_n = (eps/4) 8^{-n}`, `b^1 = b`, `b^0 = b/3`. Distinct words of equal
/// length give values at least `b_n / 2` apart, `n` the first differing index.
pub fn rotation_family<S: Real>(bits: &[u8], eps: S) -> Result<(S, Vec<S>)> {
    if bits.is_empty() {
        return Err(Error::Config("rotation family needs a non-empty bit word".into()));
    }
    if !(eps > S::zero()) {
        return Err(Error::Config("rotation family needs eps > 0".into()));
    }
    if let Some(b) = bits.iter().find(|&&b| b > 1) {
        return Err(Error::Config(format!("bit value {b} is not 0 or 1")));
    }
    let schedule: Vec<S> = (1..=bits.len()).map(|n| eps / S::of(4.0) * S::of(8.0).powi(-(n as i32))).collect();
    let alpha = bits
        .iter()
        .zip(&schedule)
        .rev()
        .fold(S::zero(), |acc, (&bit, &b)| acc + if bit == 1 { b } else { b / S::of(3.0) });
    Ok((alpha, schedule))
}

/// Parses a word such as `"0110"`.
pub fn parse_bits(text: &str) -> Result<Vec<u8>> {
    text.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Config(format!("bit `{other}` is not 0 or 1"))),
        })
        .collect()
}

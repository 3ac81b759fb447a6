use std::collections::{BTreeMap, BTreeSet};

use super::sequence::{Symbol, SymbolSequence};
use super::system::{odometer_value, CantorKind, CantorSystem};
use crate::error::{Error, Result};

/// Cylinder metric `2^{-m}`, `m` the smallest `|i| <= radius` where the
/// sequences differ; 0 when they agree on the whole range.
pub fn cantor_metric(c1: &SymbolSequence, c2: &SymbolSequence, radius: usize) -> f64 {
    match first_mismatch(c1, c2, radius) {
        Some(m) => 0.5f64.powi(m as i32),
        None => 0.0,
    }
}

/// Smallest `|i| <= radius` with `c1_i != c2_i`.
pub fn first_mismatch(c1: &SymbolSequence, c2: &SymbolSequence, radius: usize) -> Option<usize> {
    (0..=radius).find(|&m| {
        let m = m as isize;
        [m, -m].iter().any(|&i| match (c1.symbol(i), c2.symbol(i)) {
            (Some(a), Some(b)) => a != b,
            (None, None) => false,
            _ => true,
        })
    })
}

/// Largest `a` with `2^{-a} >= eps`, i.e. `a(eps) = floor(log2(1/eps))`.
/// Two points are closer than `eps` iff they agree on `|i| <= a(eps)`.
pub fn agreement_radius(eps: f64) -> usize {
    assert!(eps > 0.0 && eps <= 1.0, "agreement radius needs 0 < eps <= 1");
    let mut a = (1.0 / eps).log2().floor() as i64;
    while a > 0 && 0.5f64.powi(a as i32) < eps {
        a -= 1;
    }
    while 0.5f64.powi(a as i32 + 1) >= eps {
        a += 1;
    }
    a.max(0) as usize
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyValue {
    pub value: f64,
    /// Set for a reducible subshift of finite type.
    pub reducible: bool,
}

const POWER_ITERATIONS: usize = 10_000;
const POWER_TOLERANCE: f64 = 1e-9;

/// Exact topological entropy.
pub fn entropy_exact(sys: &CantorSystem) -> EntropyValue {
    match sys.kind() {
        CantorKind::FullShift { k } => EntropyValue { value: (*k as f64).ln(), reducible: false },
        CantorKind::Sft { adjacency } => EntropyValue {
            value: spectral_radius(&adjacency.as_f64_rows()).ln().max(0.0),
            reducible: !adjacency.is_irreducible(),
        },
        CantorKind::Substitution { .. } | CantorKind::Odometer { .. } => EntropyValue { value: 0.0, reducible: false },
    }
}

/// Perron root of a nonnegative matrix. Iterates on `A + I` so that
/// periodic (imprimitive) matrices still converge.
pub fn spectral_radius(a: &[Vec<f64>]) -> f64 {
    let k = a.len();
    let mut x = vec![1.0; k];
    let mut lambda = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let y: Vec<f64> = (0..k).map(|i| x[i] + (0..k).map(|j| a[i][j] * x[j]).sum::<f64>()).collect();
        let norm = y.iter().cloned().fold(0.0, f64::max);
        let next: Vec<f64> = y.iter().map(|v| v / norm).collect();
        let converged = (norm - lambda).abs() <= POWER_TOLERANCE * norm
            && next.iter().zip(&x).all(|(p, q)| (p - q).abs() <= POWER_TOLERANCE);
        lambda = norm;
        x = next;
        if converged {
            break;
        }
    }
    lambda - 1.0
}

/// Maximal return gap of a word along an orbit segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Gap {
    Finite(usize),
    Never,
}

impl Gap {
    pub fn is_finite(&self) -> bool {
        matches!(self, Gap::Finite(_))
    }
}

const PROFILE_LANGUAGE_CAP: usize = 1 << 16;

/// Scans `h^{-j}(c)` for `j < horizon`, reading the word at indices `0..L`
/// (the first `L` digits for odometers). The gap of a word is the longest
/// stretch of the scan without it, counting both ends of the segment.
pub fn recurrence_profile(
    sys: &CantorSystem,
    c: &SymbolSequence,
    len: usize,
    horizon: usize,
) -> Result<BTreeMap<Vec<Symbol>, Gap>> {
    sys.validate_point(c)?;
    if len == 0 || len > c.radius() + 1 {
        return Err(Error::Domain(format!("word length {len} does not fit the window")));
    }
    let mut last_seen: BTreeMap<Vec<Symbol>, (usize, usize)> = BTreeMap::new();
    let mut point = c.clone();
    for j in 0..horizon {
        let word = point.word(0, len).expect("word inside window");
        let entry = last_seen.entry(word).or_insert((j, j + 1));
        if entry.0 != j {
            entry.1 = entry.1.max(j - entry.0);
        }
        entry.0 = j;
        sys.step_in_place(&mut point, -1);
    }
    let mut profile: BTreeMap<Vec<Symbol>, Gap> = BTreeMap::new();
    if let Ok(words) = sys.language(len, PROFILE_LANGUAGE_CAP) {
        for w in words {
            profile.insert(w, Gap::Never);
        }
    }
    for (word, (last, gap)) in last_seen {
        profile.insert(word, Gap::Finite(gap.max(horizon - last)));
    }
    Ok(profile)
}

/// Smallest `1 <= n <= horizon` with `[u] ∩ h^{-n}[v]` non-empty.
pub fn mixing_witness_symbolic(sys: &CantorSystem, u: &[Symbol], v: &[Symbol], horizon: usize) -> Option<usize> {
    if u.is_empty() || v.is_empty() || !sys.admits(u) || !sys.admits(v) {
        return None;
    }
    match sys.kind() {
        CantorKind::FullShift { .. } | CantorKind::Sft { .. } => {
            let adjacency = sys.adjacency().expect("shift adjacency");
            let k = adjacency.size();
            (1..=horizon).find(|&n| {
                let total = u.len().max(n + v.len());
                let fixed = |i: usize| -> Option<Symbol> {
                    let from_u = u.get(i).copied();
                    let from_v = if i >= n { v.get(i - n).copied() } else { None };
                    match (from_u, from_v) {
                        (Some(a), Some(b)) if a != b => Some(Symbol::MAX),
                        (Some(a), _) | (_, Some(a)) => Some(a),
                        _ => None,
                    }
                };
                let mut reach: Vec<bool> = (0..k).map(|s| fixed(0).is_none_or(|f| f as usize == s)).collect();
                for i in 1..total {
                    let f = fixed(i);
                    let mut next = vec![false; k];
                    for a in (0..k).filter(|&a| reach[a]) {
                        for b in adjacency.successors(a as Symbol) {
                            if f.is_none_or(|f| f == b) {
                                next[b as usize] = true;
                            }
                        }
                    }
                    reach = next;
                }
                reach.iter().any(|&r| r)
            })
        }
        CantorKind::Substitution { .. } => {
            let text = sys.language_word().expect("substitution word");
            let starts_u: Vec<usize> =
                text.windows(u.len()).enumerate().filter(|(_, w)| *w == u).map(|(p, _)| p).collect();
            let starts_v: BTreeSet<usize> =
                text.windows(v.len()).enumerate().filter(|(_, w)| *w == v).map(|(p, _)| p).collect();
            (1..=horizon).find(|&n| starts_u.iter().any(|&p| starts_v.contains(&(p + n))))
        }
        CantorKind::Odometer { bases } => {
            let depth = u.len().max(v.len()).min(bases.len());
            let modulus: u128 = bases[..depth].iter().map(|&b| b as u128).product();
            let free: u128 = bases[u.len().min(depth)..depth].iter().map(|&b| b as u128).product();
            let prefix_mod: u128 = bases[..u.len().min(depth)].iter().map(|&b| b as u128).product();
            let u_val = odometer_value(&u[..u.len().min(depth)], bases);
            let v_len = v.len().min(depth);
            let v_mod: u128 = bases[..v_len].iter().map(|&b| b as u128).product();
            let v_val = odometer_value(&v[..v_len], bases);
            (1..=horizon).find(|&n| {
                (0..free).any(|hi| {
                    let x = u_val + hi * prefix_mod;
                    (x + n as u128) % modulus % v_mod == v_val
                })
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agreement_radius_matches_definition() {
        assert_eq!(agreement_radius(1.0), 0);
        assert_eq!(agreement_radius(0.5), 1);
        assert_eq!(agreement_radius(0.3), 1);
        assert_eq!(agreement_radius(0.25), 2);
        assert_eq!(agreement_radius(0.01), 6);
    }

    #[test]
    fn golden_mean_spectral_radius() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let r = spectral_radius(&[vec![1.0, 1.0], vec![1.0, 0.0]]);
        assert!((r - phi).abs() < 1e-8);
        let swap = spectral_radius(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!((swap - 1.0).abs() < 1e-8);
    }
}

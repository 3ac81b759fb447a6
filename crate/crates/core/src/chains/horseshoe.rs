use rayon::prelude::*;

use super::plmap::{intersect_union, Interval, PLMap};
use crate::error::{Error, Result};
use crate::num::{Coord, Rational};

/// Chain of open subintervals of `[0,1]`; the ends at 0 and 1 are closed.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalChain<T> {
    links: Vec<Interval<T>>,
}

impl<T: Coord> IntervalChain<T> {
    pub fn new(links: Vec<Interval<T>>) -> Self {
        Self { links }
    }

    /// `n` equal links widened by `overlap` on each inner side.
    pub fn uniform(n: usize, overlap: T) -> Self {
        let links = (0..n)
            .map(|j| {
                let lo = T::ratio(j as i64, n as i64) - overlap.clone();
                let hi = T::ratio(j as i64 + 1, n as i64) + overlap.clone();
                (T::max_of(&lo, &T::zero()), T::min_of(&hi, &T::one()))
            })
            .collect();
        Self { links }
    }

    pub fn links(&self) -> &[Interval<T>] {
        &self.links
    }

    /// `U_i` for 1-based `i`.
    pub fn link(&self, i: usize) -> &Interval<T> {
        &self.links[i - 1]
    }

    /// Links cover `[0,1]`, consecutive links overlap and non-consecutive
    /// closures are disjoint.
    pub fn check_taut(&self) -> Result<()> {
        let l = &self.links;
        if l.is_empty() || l[0].0 != T::zero() || l[l.len() - 1].1 != T::one() {
            return Err(Error::NotTaut("links must cover [0,1] from end to end".into()));
        }
        if let Some(i) = l.iter().position(|(a, b)| a >= b) {
            return Err(Error::NotTaut(format!("link {} is empty", i + 1)));
        }
        for i in 0..l.len() {
            if i + 1 < l.len() && !(l[i + 1].0 < l[i].1 && l[i].0 < l[i + 1].0 && l[i].1 < l[i + 1].1) {
                return Err(Error::NotTaut(format!("links {} and {} do not overlap in order", i + 1, i + 2)));
            }
            if i + 2 < l.len() && !(l[i].1 < l[i + 2].0) {
                return Err(Error::NotTaut(format!("links {} and {} meet", i + 1, i + 3)));
            }
        }
        Ok(())
    }

    /// Closed `[p, q]` inside the link, which is open except at 0 and 1.
    pub fn contains(&self, i: usize, iv: &Interval<T>) -> bool {
        let (a, b) = self.link(i);
        let left = if *a == T::zero() { iv.0 >= *a } else { iv.0 > *a };
        let right = if *b == T::one() { iv.1 <= *b } else { iv.1 < *b };
        left && right
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `G(U_3) ⊂ U_1` and `G(U_5) ⊂ U_7`.
    Direct,
    /// `G(U_5) ⊂ U_1` and `G(U_3) ⊂ U_7`.
    Reversed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stretch {
    pub m: usize,
    pub orientation: Orientation,
}

/// Smallest `m <= m_bound` for which `g^m` stretches the 7-link chain.
pub fn stretch_check<T: Coord>(g: &PLMap<T>, chain: &IntervalChain<T>, m_bound: usize) -> Result<Option<Stretch>> {
    if chain.links().len() != 7 {
        return Err(Error::NotTaut(format!("stretching needs 7 links, got {}", chain.links().len())));
    }
    chain.check_taut()?;
    let (mut u3, mut u5) = (chain.link(3).clone(), chain.link(5).clone());
    for m in 1..=m_bound {
        u3 = g.image(&u3);
        u5 = g.image(&u5);
        if chain.contains(1, &u3) && chain.contains(7, &u5) {
            return Ok(Some(Stretch { m, orientation: Orientation::Direct }));
        }
        if chain.contains(1, &u5) && chain.contains(7, &u3) {
            return Ok(Some(Stretch { m, orientation: Orientation::Reversed }));
        }
    }
    Ok(None)
}

/// The `k` disjoint intervals `W_1 < ... < W_k` that stand in for the
/// even links `V_4, V_6, ..., V_{2k+2}` of a `k`-fold refinement: equal
/// parts of the core of `U_4` between its overlaps with `U_3` and `U_5`,
/// each shrunk by 10% on both sides.
pub fn fold_passes<T: Coord>(chain: &IntervalChain<T>, k: usize) -> Vec<Interval<T>> {
    let lo = chain.link(3).1.clone();
    let hi = chain.link(5).0.clone();
    let width = (hi - lo.clone()) / T::ratio(k as i64, 1);
    let margin = width.clone() * T::ratio(1, 10);
    (0..k)
        .map(|i| {
            let a = lo.clone() + width.clone() * T::ratio(i as i64, 1);
            (a.clone() + margin.clone(), a + width.clone() - margin.clone())
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct HorseshoeCertificate<T> {
    pub k: usize,
    pub m: usize,
    pub depth: usize,
    pub orientation: Orientation,
    pub passes: Vec<Interval<T>>,
    /// Itineraries of length `depth + 1` over `1..=k` in lexicographic order,
    /// each with its set of points `x` such that `G^j(x)` lies in pass `i_j`.
    pub words: Vec<(Vec<usize>, Vec<Interval<T>>)>,
}

impl<T: Coord> HorseshoeCertificate<T> {
    /// `ln(k) / m`.
    pub fn bound(&self) -> f64 {
        (self.k as f64).ln() / self.m as f64
    }

    pub fn nonempty_count(&self) -> usize {
        self.words.iter().filter(|(_, s)| !s.is_empty()).count()
    }
}

/// Itinerary construction for `G = g^m`, `m` the stretching exponent: every
/// word `(i_0, ..., i_d)` over `1..=k` must have a non-empty set
/// `W_{i_0} ∩ G^{-1}(W_{i_1}) ∩ ... ∩ G^{-d}(W_{i_d})`.
pub fn horseshoe_extract<T: Coord>(
    g: &PLMap<T>,
    chain: &IntervalChain<T>,
    k: usize,
    depth: usize,
    m_bound: usize,
) -> Result<HorseshoeCertificate<T>> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::Domain(format!("horseshoe extraction needs an odd k >= 3, got k = {k}")));
    }
    let stretch = stretch_check(g, chain, m_bound)?
        .ok_or_else(|| Error::Precondition(format!("the map does not stretch the chain for any m <= {m_bound}")))?;
    let m = stretch.m;
    let passes = fold_passes(chain, k);
    if passes.windows(2).any(|w| !(w[0].1 < w[1].0)) || passes.iter().any(|(a, b)| a >= b) {
        return Err(Error::Resolution("fold passes are not pairwise disjoint".into()));
    }
    let mut level: Vec<(Vec<usize>, Vec<Interval<T>>)> =
        (1..=k).map(|i| (vec![i], vec![passes[i - 1].clone()])).collect();
    check_level(&level)?;
    for _ in 0..depth {
        let pulled: Vec<Vec<Interval<T>>> = level.par_iter().map(|(_, set)| g.preimage_iter(set, m)).collect();
        let mut next = Vec::with_capacity(level.len() * k);
        for i in 1..=k {
            for ((word, _), pre) in level.iter().zip(&pulled) {
                let mut w = Vec::with_capacity(word.len() + 1);
                w.push(i);
                w.extend_from_slice(word);
                next.push((w, intersect_union(pre, &passes[i - 1])));
            }
        }
        level = next;
        check_level(&level)?;
    }
    Ok(HorseshoeCertificate { k, m, depth, orientation: stretch.orientation, passes, words: level })
}

fn check_level<T>(level: &[(Vec<usize>, Vec<Interval<T>>)]) -> Result<()> {
    match level.iter().find(|(_, s)| s.is_empty()) {
        Some((word, _)) => Err(Error::EmptyBranch { word: word.clone() }),
        None => Ok(()),
    }
}

/// Parses `"0,1/10; 9/100,49/100; ..."`.
pub fn parse_links(text: &str) -> Result<IntervalChain<Rational>> {
    let links = text
        .split(';')
        .map(|pair| {
            let (a, b) =
                pair.split_once(',').ok_or_else(|| Error::Config(format!("link `{}` is not `lo,hi`", pair.trim())))?;
            let p = |s: &str| {
                crate::num::parse_rational(s)
                    .ok_or_else(|| Error::Config(format!("`{}` is not a rational number", s.trim())))
            };
            Ok((p(a)?, p(b)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntervalChain::new(links))
}

use rayon::prelude::*;

use crate::annulus::{sample_grid, DisplacementTrack, LiftedAnnulusMap};
use crate::cantor::{cantor_metric, CantorSystem, SymbolSequence};
use crate::error::{Error, Result};
use crate::num::Real;

/// Normalized representative `(t, r, c)` with `r in [0,1)` of a point of the
/// pseudo-suspension, tagged with its pseudo-component: the registered seed
/// point and the winding `w` for which `c = h^w(seed)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuspensionPoint<S> {
    pub t: S,
    pub r: S,
    pub c: SymbolSequence,
    pub seed: usize,
    pub winding: i64,
}

/// Lift of an annulus map `H` to the pseudo-suspension over a Cantor system `h`.
#[derive(Clone, Debug)]
pub struct SuspensionSystem<S> {
    map: LiftedAnnulusMap<S>,
    cantor: CantorSystem,
    radius: usize,
    seeds: Vec<SymbolSequence>,
}

impl<S: Real> SuspensionSystem<S> {
    /// `radius` is the metric window `W` of the Cantor coordinate.
    pub fn new(map: LiftedAnnulusMap<S>, cantor: CantorSystem, radius: usize) -> Self {
        Self { map, cantor, radius, seeds: Vec::new() }
    }

    pub fn map(&self) -> &LiftedAnnulusMap<S> {
        &self.map
    }

    pub fn cantor(&self) -> &CantorSystem {
        &self.cantor
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Window radius of freshly drawn Cantor points.
    pub fn point_radius(&self) -> usize {
        match self.cantor.kind() {
            crate::cantor::CantorKind::Odometer { bases } => bases.len(),
            _ => self.radius,
        }
    }

    pub fn seeds(&self) -> &[SymbolSequence] {
        &self.seeds
    }

    pub fn register_seed(&mut self, c: SymbolSequence) -> Result<usize> {
        self.cantor.validate_point(&c)?;
        self.seeds.push(c);
        Ok(self.seeds.len() - 1)
    }

    /// Registers `random_point(seed)` of the Cantor system.
    pub fn register_random_seed(&mut self, seed: u64) -> usize {
        let c = self.cantor.random_point(seed, self.point_radius());
        self.seeds.push(c);
        self.seeds.len() - 1
    }

    /// Point `((t, r), seed)` of the registered pseudo-component, normalized.
    pub fn point(&self, seed: usize, t: S, r: S) -> Result<SuspensionPoint<S>> {
        let c =
            self.seeds.get(seed).ok_or_else(|| Error::Config(format!("no registered seed with index {seed}")))?.clone();
        self.normalize(t, r, c, seed, 0)
    }

    /// `(t, r, c) -> (t, r - floor(r), h^{floor(r)}(c))`, winding `+= floor(r)`.
    pub fn normalize(&self, t: S, r: S, c: SymbolSequence, seed: usize, winding: i64) -> Result<SuspensionPoint<S>> {
        if !(t >= S::zero() && t <= S::one()) || !r.is_finite() {
            return Err(Error::Domain(format!("point ({t}, {r}) is outside the strip")));
        }
        let n = r.floor();
        let shift = n.to_i64().ok_or_else(|| Error::Domain(format!("angular coordinate {r} too large")))?;
        let mut rr = r - n;
        if rr >= S::one() {
            rr = S::zero();
        }
        let c = if shift == 0 { c } else { self.cantor.iterate(&c, shift) };
        Ok(SuspensionPoint { t, r: rr, c, seed, winding: winding + shift })
    }

    pub fn step(&self, p: &SuspensionPoint<S>) -> Result<SuspensionPoint<S>> {
        let (t1, r1) = self.map.apply(p.t, p.r)?;
        self.normalize(t1, r1, p.c.clone(), p.seed, p.winding)
    }

    pub fn orbit(&self, p: &SuspensionPoint<S>, n: usize) -> Result<Vec<SuspensionPoint<S>>> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(p.clone());
        for _ in 0..n {
            let next = self.step(out.last().expect("non-empty"))?;
            out.push(next);
        }
        Ok(out)
    }

    /// `min_{n in {-1,0,1}} max(|t_p - t_q| + |r_p - r_q - n|, d_C(c_p, h^{-n}(c_q)))`.
    pub fn quotient_distance(&self, p: &SuspensionPoint<S>, q: &SuspensionPoint<S>) -> S {
        let dt = (p.t - q.t).abs();
        [-1i64, 0, 1]
            .iter()
            .map(|&n| {
                let strip = dt + (p.r - q.r - S::of(n as f64)).abs();
                let cq = if n == 0 { q.c.clone() } else { self.cantor.iterate(&q.c, -n) };
                strip.max(S::of(cantor_metric(&p.c, &cq, self.radius)))
            })
            .fold(S::infinity(), S::min)
    }

    /// `(k, w_k / k)` for `k = 1..=n`.
    pub fn winding_rate(&self, p0: &SuspensionPoint<S>, n: usize) -> Result<Vec<(usize, S)>> {
        let mut p = p0.clone();
        let mut out = Vec::with_capacity(n);
        for k in 1..=n {
            p = self.step(&p)?;
            out.push((k, S::of((p.winding - p0.winding) as f64) / S::of(k as f64)));
        }
        Ok(out)
    }

    /// All `n <= horizon` with `sup d(H_C^n(x), x) < eps` over a `G x G`
    /// grid on `band` crossed with the registered seeds (or one random seed).
    pub fn rigidity_suspension(&self, grid: usize, horizon: usize, eps: S, band: (S, S)) -> Result<Vec<(usize, S)>> {
        let seeds: Vec<SymbolSequence> = if self.seeds.is_empty() {
            vec![self.cantor.random_point(0, self.point_radius())]
        } else {
            self.seeds.clone()
        };
        let samples: Vec<(usize, (S, S))> = seeds
            .iter()
            .enumerate()
            .flat_map(|(i, _)| sample_grid(band, grid).into_iter().map(move |x| (i, x)))
            .collect();
        let rows = samples
            .par_iter()
            .map(|&(i, (t, r))| {
                let p0 = self.normalize(t, r, seeds[i].clone(), i, 0)?;
                let mut p = p0.clone();
                let mut track = DisplacementTrack::default();
                let mut row = Vec::with_capacity(horizon);
                for _ in 0..horizon {
                    let (t1, d) = self.map.step(p.t, p.r)?;
                    track.push(d);
                    let winding = (p0.r + track.total()).floor();
                    let r1 = p0.r + track.total() - winding;
                    let shift = winding.to_i64().unwrap_or(0) + p0.winding - p.winding;
                    let c = if shift == 0 { p.c.clone() } else { self.cantor.iterate(&p.c, shift) };
                    p = SuspensionPoint { t: t1, r: r1, c, seed: i, winding: p.winding + shift };
                    row.push(self.quotient_distance(&p, &p0));
                }
                Ok(row)
            })
            .collect::<Result<Vec<Vec<S>>>>()?;
        let mut sup = vec![S::zero(); horizon];
        for row in &rows {
            for (s, v) in sup.iter_mut().zip(row) {
                *s = s.max(*v);
            }
        }
        Ok(sup.into_iter().enumerate().filter(|(_, s)| *s < eps).map(|(n, s)| (n + 1, s)).collect())
    }
}

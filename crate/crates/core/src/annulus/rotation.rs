use rayon::prelude::*;

use super::map::{circle_distance, LiftedAnnulusMap, NeumaierSum, Primitive};
use crate::error::{Error, Result};
use crate::num::Real;

/// Running total of angular displacements, stored as runs of equal values so
/// that a constant displacement `b` yields exactly `b` as the mean.
#[derive(Clone, Debug, Default)]
pub struct DisplacementTrack<S> {
    closed: NeumaierSum<S>,
    run_value: S,
    run_len: u64,
    closed_runs: u64,
    steps: u64,
}

impl<S: Real> DisplacementTrack<S> {
    pub fn push(&mut self, d: S) {
        if self.run_len > 0 && d != self.run_value {
            self.closed.add(self.run_value * S::of(self.run_len as f64));
            self.run_len = 0;
            self.closed_runs += 1;
        }
        self.run_value = d;
        self.run_len += 1;
        self.steps += 1;
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn total(&self) -> S {
        let mut s = self.closed;
        s.add(self.run_value * S::of(self.run_len as f64));
        s.value()
    }

    pub fn mean(&self) -> S {
        if self.steps == 0 {
            return S::zero();
        }
        if self.closed_runs == 0 {
            return self.run_value * (S::of(self.run_len as f64) / S::of(self.steps as f64));
        }
        self.total() / S::of(self.steps as f64)
    }
}

/// Birkhoff quotients `(r_n - r_0) / n` of the angular lift, `n = 1..=n_max`.
pub fn rotation_estimate<S: Real>(map: &LiftedAnnulusMap<S>, t: S, r: S, n_max: usize) -> Result<Vec<(usize, S)>> {
    if n_max < 1 {
        return Err(Error::Config("rotation estimate needs n_max >= 1".into()));
    }
    let (mut t, mut r) = (t, r);
    let mut track = DisplacementTrack::default();
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let (t1, d) = map.step(t, r)?;
        track.push(d);
        t = t1;
        r = r + d;
        out.push((n, track.mean()));
    }
    Ok(out)
}

/// `G` evenly spaced radial values across `band` and `G` angular values in `[0,1)`.
pub fn sample_grid<S: Real>(band: (S, S), g: usize) -> Vec<(S, S)> {
    let g = g.max(1);
    let step_t = if g > 1 { (band.1 - band.0) / S::of((g - 1) as f64) } else { S::zero() };
    let mut out = Vec::with_capacity(g * g);
    for i in 0..g {
        let t = if i + 1 == g && g > 1 { band.1 } else { band.0 + step_t * S::of(i as f64) };
        for j in 0..g {
            out.push((t, S::of(j as f64) / S::of(g as f64)));
        }
    }
    out
}

/// Worst annulus displacement `sup_x d(F^n(x), x)` over a sample grid, for
/// `n = 1..=horizon`.
pub fn displacement_profile<S: Real>(map: &LiftedAnnulusMap<S>, samples: &[(S, S)], horizon: usize) -> Result<Vec<S>> {
    let per_sample: Vec<Vec<S>> = samples
        .par_iter()
        .map(|&(t0, r0)| {
            let (mut t, mut r) = (t0, r0);
            let mut track = DisplacementTrack::default();
            let mut row = Vec::with_capacity(horizon);
            for _ in 0..horizon {
                let (t1, d) = map.step(t, r)?;
                track.push(d);
                t = t1;
                r = r + d;
                row.push((t - t0).abs() + circle_distance(track.total()));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sup = vec![S::zero(); horizon];
    for row in &per_sample {
        for (s, v) in sup.iter_mut().zip(row) {
            *s = s.max(*v);
        }
    }
    Ok(sup)
}

/// All `n <= horizon` whose worst displacement over the `G x G` grid on
/// `band` is below `eps`.
pub fn rigidity_scan<S: Real>(
    map: &LiftedAnnulusMap<S>,
    grid: usize,
    horizon: usize,
    eps: S,
    band: (S, S),
) -> Result<Vec<(usize, S)>> {
    let sup = displacement_profile(map, &sample_grid(band, grid), horizon)?;
    Ok(sup.into_iter().enumerate().filter(|(_, s)| *s < eps).map(|(i, s)| (i + 1, s)).collect())
}

/// Integer bound `K` on the angular displacement, from a 64 x 64 grid.
pub fn displacement_bound<S: Real>(map: &LiftedAnnulusMap<S>) -> S {
    let samples = sample_grid((S::zero(), S::one()), 64);
    let sup =
        samples.iter().map(|&(t, r)| map.step(t, r).map(|(_, d)| d.abs()).unwrap_or(S::zero())).fold(S::zero(), S::max);
    (sup - S::of(1e-9)).ceil().max(S::zero())
}

/// Lift to the `q`-fold cover composed with the deck rotation `p/q`; the
/// rotation number becomes `(alpha + p) / q`.
pub fn cover_lift<S: Real>(map: &LiftedAnnulusMap<S>, q: i64, p: i64) -> Result<LiftedAnnulusMap<S>> {
    if q <= 0 {
        return Err(Error::Config(format!("cover degree must be positive, got q = {q}")));
    }
    if q == 1 && p == 0 {
        return Ok(map.clone());
    }
    let mut pipeline = vec![Primitive::Cover { inner: Box::new(map.clone()), q: q as u32 }];
    if p != 0 {
        pipeline.push(Primitive::RigidRotation(S::of(p as f64) / S::of(q as f64)));
    }
    Ok(LiftedAnnulusMap::new(pipeline))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjugacyReport<S> {
    pub estimate_map: S,
    pub estimate_conjugate: S,
    pub bound: S,
}

impl<S: Real> ConjugacyReport<S> {
    pub fn difference(&self) -> S {
        (self.estimate_map - self.estimate_conjugate).abs()
    }

    pub fn holds(&self) -> bool {
        self.difference() <= self.bound
    }
}

/// Rotation estimates of `f` from `x` and of `g f g^{-1}` from `g(x)` at
/// horizon `n`, with the bound `2 K_g / n` on their difference.
pub fn conjugacy_invariance_check<S: Real>(
    f: &LiftedAnnulusMap<S>,
    g: &LiftedAnnulusMap<S>,
    n: usize,
    start: (S, S),
) -> Result<ConjugacyReport<S>> {
    let conj = g.inverse()?.then(f).then(g);
    let (gt, gr) = g.apply(start.0, start.1)?;
    let last = |v: Vec<(usize, S)>| v.last().map(|e| e.1).unwrap_or(S::zero());
    let estimate_map = last(rotation_estimate(f, start.0, start.1, n)?);
    let estimate_conjugate = last(rotation_estimate(&conj, gt, gr, n)?);
    let bound = S::of(2.0) * displacement_bound(g) / S::of(n as f64);
    Ok(ConjugacyReport { estimate_map, estimate_conjugate, bound })
}

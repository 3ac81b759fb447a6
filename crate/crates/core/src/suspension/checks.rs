use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::system::{SuspensionPoint, SuspensionSystem};
use crate::annulus::DisplacementTrack;
use crate::cantor::{agreement_radius, CantorKind, SymbolSequence};
use crate::error::{Error, Result};
use crate::num::Real;

/// Search limits for [`SuspensionSystem::dense_orbit_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DenseBounds {
    pub k_max: usize,
    pub s_max: usize,
    pub p_max: usize,
}

/// Witness `(k, s, p)` of the two density hypotheses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DenseWitness {
    pub k: usize,
    pub s: usize,
    pub p: usize,
}

/// Open ball in the quotient metric.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball<S> {
    pub center: SuspensionPoint<S>,
    pub radius: S,
}

/// Minimum number of cloud points for the weak-mixing search.
pub const MIN_CLOUD: usize = 64;

impl<S: Real> SuspensionSystem<S> {
    /// Searches `k <= k_max`, then `s <= s_max`, for a triple such that
    /// (1) every depth-`D` cylinder, `D = ceil(log2(1/eps))`, meets
    /// `{h^{-ik}(c) : 0 <= i <= p}` and (2) `H^{sj}(t, r)` lies within `eps`
    /// of `(t, r + kj)` for `0 <= j <= p`.
    pub fn dense_orbit_check(
        &self,
        c: &SymbolSequence,
        start: (S, S),
        eps: S,
        bounds: DenseBounds,
    ) -> Result<Option<DenseWitness>> {
        self.cantor().validate_point(c)?;
        let eps_f = eps.as_f64();
        if !(eps_f > 0.0 && eps_f <= 1.0) {
            return Err(Error::Config("dense orbit check needs 0 < eps <= 1".into()));
        }
        let depth = (1.0 / eps_f).log2().ceil().max(0.0) as usize;
        let odometer = matches!(self.cantor().kind(), CantorKind::Odometer { .. });
        let key = |x: &SymbolSequence| -> Vec<u8> {
            if odometer {
                x.window().into_iter().take(depth + 1).collect()
            } else {
                let d = depth.min(x.radius());
                x.word(-(d as isize), 2 * d + 1).expect("inside window")
            }
        };
        let net: BTreeSet<Vec<u8>> = if odometer {
            let len = (depth + 1).min(c.radius());
            self.cantor().language(len, 1 << 20)?.into_iter().collect()
        } else {
            let d = depth.min(c.radius());
            self.cantor().language(2 * d + 1, 1 << 20)?.into_iter().collect()
        };
        for k in 1..=bounds.k_max {
            let mut seen = BTreeSet::new();
            let mut x = c.clone();
            let mut p = None;
            for i in 0..=bounds.p_max {
                if net.contains(&key(&x)) {
                    seen.insert(key(&x));
                }
                if seen.len() == net.len() {
                    p = Some(i);
                    break;
                }
                x = self.cantor().iterate(&x, -(k as i64));
            }
            let Some(p) = p else { continue };
            for s in 1..=bounds.s_max {
                if self.returns_with_drift(start, k, s, p, eps)? {
                    return Ok(Some(DenseWitness { k, s, p }));
                }
            }
        }
        Ok(None)
    }

    fn returns_with_drift(&self, start: (S, S), k: usize, s: usize, p: usize, eps: S) -> Result<bool> {
        let (mut t, mut r) = start;
        let mut track = DisplacementTrack::default();
        for j in 1..=p {
            for _ in 0..s {
                let (t1, d) = self.map().step(t, r)?;
                track.push(d);
                t = t1;
                r = r + d;
            }
            let drift = track.total() - S::of((k * j) as f64);
            if !((t - start.0).abs() + drift.abs() < eps) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Smallest `l <= horizon` such that some point of a seeded cloud in `U`
    /// returns to `U` and some point lands in `V` after `l` steps.
    pub fn weak_mixing_witness(
        &self,
        u: &Ball<S>,
        v: &Ball<S>,
        horizon: usize,
        cloud: usize,
        seed: u64,
    ) -> Result<Option<usize>> {
        if !(u.radius > S::zero() && u.radius.is_finite()) || !(v.radius > S::zero() && v.radius.is_finite()) {
            return Err(Error::Config("ball radii must be positive and finite".into()));
        }
        let cloud = self.cloud_in(u, cloud.max(MIN_CLOUD), seed)?;
        if cloud.is_empty() {
            return Err(Error::Config("empty seeded cloud".into()));
        }
        let mut points = cloud;
        for l in 1..=horizon {
            points = points.iter().map(|p| self.step(p)).collect::<Result<Vec<_>>>()?;
            let back = points.iter().any(|p| self.quotient_distance(p, &u.center) < u.radius);
            let there = points.iter().any(|p| self.quotient_distance(p, &v.center) < v.radius);
            if back && there {
                return Ok(Some(l));
            }
        }
        Ok(None)
    }

    /// Seeded points inside the ball: strip offset below `radius / 2`, Cantor
    /// coordinate in the cylinder of radius `a(radius)`.
    pub fn cloud_in(&self, ball: &Ball<S>, count: usize, seed: u64) -> Result<Vec<SuspensionPoint<S>>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let half = ball.radius.as_f64().min(1.0) / 2.0;
        let fixed = agreement_radius(ball.radius.as_f64().min(1.0));
        let c0 = &ball.center;
        let mut out = Vec::with_capacity(count);
        for _ in 0..count * 100 {
            if out.len() >= count {
                break;
            }
            let dt: f64 = rng.gen_range(-half / 2.0..half / 2.0);
            let dr: f64 = rng.gen_range(-half / 2.0..half / 2.0);
            let t = (c0.t + S::of(dt)).max(S::zero()).min(S::one());
            let c = self.cantor().random_in_cylinder(&c0.c, fixed, rng.gen());
            let p = self.normalize(t, c0.r + S::of(dr), c, c0.seed, c0.winding)?;
            if self.quotient_distance(&p, c0) < ball.radius {
                out.push(p);
            }
        }
        Ok(out)
    }
}

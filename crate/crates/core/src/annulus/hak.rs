use rayon::prelude::*;

use super::map::{annulus_distance, circle_distance, LiftedAnnulusMap, Primitive};
use super::pl::PlProfile;
use super::rotation::sample_grid;
use crate::error::{Error, Result};
use crate::num::Real;

/// Tolerance added to every pass threshold.
pub const SLACK: f64 = 1e-7;

/// One stage of a HAK approximation scheme with identity-rescale chart
/// `f_n(t, r) = ((t - u_n) / (v_n - u_n), r)` on the band `A_n = [u_n, v_n]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HakStage<S> {
    pub eps: S,
    pub band: (S, S),
    /// `R_n` is the rotation by `rot.0 / rot.1`, in lowest terms.
    pub rot: (u64, u64),
    pub alpha: S,
    pub q: u64,
    /// Closed band outside which `g_n` is the identity; defaults to `A_{n-1}`.
    pub support: Option<(S, S)>,
}

impl<S: Real> HakStage<S> {
    pub fn new(eps: S, band: (S, S), rot: (u64, u64), alpha: S, q: u64) -> Self {
        Self { eps, band, rot, alpha, q, support: None }
    }

    pub fn period(&self) -> u64 {
        self.rot.1
    }

    pub fn rotation(&self) -> S {
        S::of(self.rot.0 as f64) / S::of(self.rot.1 as f64)
    }

    /// `delta_n` for `eps_n / 4` in the uniform continuity of `f_n^{-1}`;
    /// the rescale chart has a 1-Lipschitz inverse.
    pub fn delta(&self) -> S {
        self.eps / S::of(4.0)
    }
}

/// Three-stage scheme with `eps_n = 0.2 * 2^{-n}` that satisfies every condition.
pub fn toy_stages<S: Real>() -> Vec<HakStage<S>> {
    let s = |eps: f64, u: f64, v: f64, p: u64| {
        HakStage::new(S::of(eps), (S::of(u), S::of(v)), (1, p), S::of(1.0 / p as f64), p)
    };
    vec![s(0.1, 0.48, 0.52, 48), s(0.05, 0.49, 0.51, 528), s(0.025, 0.495, 0.505, 11088)]
}

#[derive(Clone, Debug, PartialEq)]
pub struct HakCheck<S> {
    /// `"(1)"` through `"(8)"`, or `"rigidity"`.
    pub condition: &'static str,
    pub stage: usize,
    pub what: &'static str,
    pub observed: S,
    pub bound: S,
    pub passed: bool,
}

impl<S: Real> HakCheck<S> {
    pub fn margin(&self) -> S {
        self.bound - self.observed
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HakReport<S> {
    pub checks: Vec<HakCheck<S>>,
    /// `gamma_n` per stage.
    pub gamma: Vec<S>,
}

impl<S: Real> HakReport<S> {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn condition_passed(&self, condition: &str) -> bool {
        self.checks.iter().filter(|c| c.condition == condition).all(|c| c.passed)
    }

    pub fn failed_conditions(&self) -> Vec<&'static str> {
        let mut out: Vec<&'static str> = self.checks.iter().filter(|c| !c.passed).map(|c| c.condition).collect();
        out.dedup();
        out
    }
}

/// The scheme's maps `g_n` and `H_n`.
#[derive(Clone, Debug)]
pub struct HakScheme<S> {
    pub stages: Vec<HakStage<S>>,
    pub g: Vec<LiftedAnnulusMap<S>>,
    pub h: Vec<LiftedAnnulusMap<S>>,
}

impl<S: Real> HakScheme<S> {
    pub fn build(stages: &[HakStage<S>]) -> Result<Self> {
        validate(stages)?;
        let mut g = Vec::with_capacity(stages.len());
        let mut h = Vec::with_capacity(stages.len());
        let mut pipeline: Vec<Primitive<S>> = Vec::new();
        for (i, st) in stages.iter().enumerate() {
            let (a, b) = support_of(stages, i);
            let (u, v) = st.band;
            let beta = st.rotation();
            let mut pts = Vec::new();
            if a > S::zero() {
                pts.push((S::zero(), S::zero()));
            }
            pts.push((a, if a > S::zero() { S::zero() } else { beta }));
            pts.push((u, beta));
            pts.push((v, beta));
            pts.push((b, if b < S::one() { S::zero() } else { beta }));
            if b < S::one() {
                pts.push((S::one(), S::zero()));
            }
            pts.dedup_by(|x, y| x.0 == y.0);
            let prim = Primitive::Twist(PlProfile::new(pts)?);
            g.push(LiftedAnnulusMap::new(vec![prim.clone()]).with_label(format!("g_{}", i + 1)));
            pipeline.push(prim);
            h.push(LiftedAnnulusMap::new(pipeline.clone()).with_label(format!("H_{}", i + 1)));
        }
        Ok(Self { stages: stages.to_vec(), g, h })
    }
}

fn support_of<S: Real>(stages: &[HakStage<S>], i: usize) -> (S, S) {
    stages[i].support.unwrap_or(if i == 0 { (S::zero(), S::one()) } else { stages[i - 1].band })
}

fn validate<S: Real>(stages: &[HakStage<S>]) -> Result<()> {
    if stages.len() < 2 {
        return Err(Error::Config("a HAK scheme needs at least two stages".into()));
    }
    for (i, st) in stages.iter().enumerate() {
        let n = i + 1;
        let (u, v) = st.band;
        if !(st.eps > S::zero()) || !(st.alpha > S::zero()) {
            return Err(Error::Config(format!("stage {n}: eps and alpha must be positive")));
        }
        if st.rot.1 == 0 || gcd(st.rot.0, st.rot.1) != 1 {
            return Err(Error::Config(format!("stage {n}: rotation {}/{} is not in lowest terms", st.rot.0, st.rot.1)));
        }
        if st.q == 0 || st.q % st.rot.1 != 0 {
            return Err(Error::Config(format!(
                "stage {n}: condition (6) needs q = m p, but q = {} is not a multiple of p = {}",
                st.q, st.rot.1
            )));
        }
        let (outer_u, outer_v) = if i == 0 { (S::zero(), S::one()) } else { stages[i - 1].band };
        if !(outer_u < u && u < v && v < outer_v) {
            return Err(Error::Config(format!("stage {n}: band is not strictly nested in the previous band")));
        }
        let (a, b) = support_of(stages, i);
        if !(a >= S::zero() && a < u && v < b && b <= S::one()) {
            return Err(Error::Config(format!("stage {n}: support must strictly contain the band")));
        }
    }
    Ok(())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn strict<S: Real>(condition: &'static str, stage: usize, what: &'static str, observed: S, bound: S) -> HakCheck<S> {
    HakCheck { condition, stage, what, observed, bound, passed: observed < bound - S::of(SLACK) }
}

fn vanishing<S: Real>(condition: &'static str, stage: usize, what: &'static str, observed: S) -> HakCheck<S> {
    HakCheck { condition, stage, what, observed, bound: S::of(SLACK), passed: observed <= S::of(SLACK) }
}

/// Checks conditions (1)-(8) and the rigidity conclusion on a `G x G` grid.
/// `tail` bounds `sum_{i > N} eps_i` (defaults to `eps_N`).
pub fn hak_verify<S: Real>(stages: &[HakStage<S>], grid: usize, tail: Option<S>) -> Result<HakReport<S>> {
    let scheme = HakScheme::build(stages)?;
    let big_n = stages.len();
    let tail = tail.unwrap_or(stages[big_n - 1].eps);
    let gamma: Vec<S> = (0..big_n).map(|i| stages[i..].iter().fold(tail, |acc, s| acc + s.eps)).collect();
    let full = sample_grid((S::zero(), S::one()), grid);
    let mut checks = Vec::new();

    for (i, st) in stages.iter().enumerate() {
        let n = i + 1;
        let (u, v) = st.band;
        let p = st.period();

        checks.push(strict("(1)", n, "fiber diameter", v - u, st.eps / S::of(2.0)));

        let tiling = (st.alpha * S::of(p as f64) - S::one()).abs();
        checks.push(vanishing("(2)", n, "boxes tile the annulus", tiling));
        checks.push(strict("(2)", n, "box height below delta", st.alpha, st.delta()));
        if i + 1 < big_n {
            let next = stages[i + 1].period();
            checks.push(HakCheck {
                condition: "(2)",
                stage: n,
                what: "periods non-decreasing",
                observed: S::of(p as f64),
                bound: S::of(next as f64),
                passed: next >= p,
            });
        }

        let g = &scheme.g[i];
        let disp = sup_over(&full, |x| {
            let y = g.apply(x.0, x.1)?;
            Ok(annulus_distance(x, y))
        })?;
        checks.push(strict("(3)", n, "rho(g_n, id)", disp, st.eps));
        let outer = if i == 0 { (S::zero(), S::one()) } else { stages[i - 1].band };
        let off: Vec<(S, S)> = full.iter().copied().filter(|x| x.0 < outer.0 || x.0 > outer.1).collect();
        let off_disp = sup_over(&off, |x| Ok(annulus_distance(x, g.apply(x.0, x.1)?)))?;
        checks.push(vanishing("(3)", n, "g_n is the identity off A_{n-1}", off_disp));
        let on = sample_grid(st.band, grid);
        let chart_dev = sup_over(&on, |x| {
            let (t1, r1) = g.apply(x.0, x.1)?;
            Ok((t1 - x.0).abs() + circle_distance(r1 - x.1 - st.rotation()))
        })?;
        checks.push(vanishing("(3)", n, "g_n agrees with the conjugated rotation on A_n", chart_dev));

        let composed = sup_over(&full, |x| {
            let prev = if i == 0 { x } else { scheme.h[i - 1].apply(x.0, x.1)? };
            let expected = g.apply(prev.0, prev.1)?;
            Ok(annulus_distance(scheme.h[i].apply(x.0, x.1)?, expected))
        })?;
        checks.push(vanishing("(4)", n, "H_n = g_n o H_{n-1}", composed));

        if i + 1 < big_n {
            let next = &stages[i + 1];
            let h = &scheme.h[i];
            let inside = sample_grid(next.band, grid);
            let escape = sup_over(&inside, |x| {
                let (t1, _) = h.apply(x.0, x.1)?;
                Ok((next.band.0 - t1).max(t1 - next.band.1).max(S::zero()))
            })?;
            let boundary: Vec<(S, S)> =
                inside.iter().copied().filter(|x| x.0 == next.band.0 || x.0 == next.band.1).collect();
            let rim = sup_over(&boundary, |x| {
                let (t1, _) = h.apply(x.0, x.1)?;
                Ok((t1 - next.band.0).abs().min((t1 - next.band.1).abs()))
            })?;
            checks.push(vanishing("(5)", n, "H_n(A_{n+1}) = A_{n+1}", escape.max(rim)));

            let h_next = &scheme.h[i + 1];
            let q = st.q as usize;
            let worst = sup_over(&full, |x| {
                let (mut a, mut b) = (x, x);
                let mut w = S::zero();
                for _ in 0..q {
                    a = h.apply(a.0, a.1)?;
                    b = h_next.apply(b.0, b.1)?;
                    w = w.max(annulus_distance(a, b));
                }
                Ok(w)
            })?;
            checks.push(strict("(6)", n, "rho(H_n^i, H_{n+1}^i), i <= q_n", worst, st.eps));
        }

        checks.push(strict("(7)", n, "diam D_n^j", box_diameter(st, g)?, st.eps));

        let rho_n = stages[..=i].iter().fold(S::zero(), |acc, s| acc + s.rotation());
        let orbit_gap = orbit_box_gap(st, rho_n, &scheme.h[big_n - 1])?;
        checks.push(strict("(8)", n, "orbits follow the boxes within gamma_n", orbit_gap, gamma[i]));

        let h_n = &scheme.h[i];
        let rigid = sup_over(&on, |x| {
            let (mut t, mut r) = x;
            let mut total = S::zero();
            for _ in 0..p {
                let (t1, d) = h_n.step(t, r)?;
                t = t1;
                r = r + d;
                total = total + d;
            }
            Ok((t - x.0).abs() + circle_distance(total))
        })?;
        checks.push(strict("rigidity", n, "d(H_n^{p_n}(x), x) on A_n", rigid, gamma[i]));
    }
    Ok(HakReport { checks, gamma })
}

fn sup_over<S: Real>(samples: &[(S, S)], f: impl Fn((S, S)) -> Result<S> + Sync) -> Result<S> {
    let values = samples.par_iter().map(|&x| f(x)).collect::<Result<Vec<S>>>()?;
    Ok(values.into_iter().fold(S::zero(), S::max))
}

const BOX_SIDE_SAMPLES: usize = 8;

fn box_outline<S: Real>(st: &HakStage<S>, k: u64) -> Vec<(S, S)> {
    let (u, v) = st.band;
    let base = S::of(k as f64) * st.rotation();
    let m = BOX_SIDE_SAMPLES;
    let mut out = Vec::with_capacity(4 * m);
    for s in 0..m {
        let f = S::of(s as f64) / S::of((m - 1) as f64);
        let t = u + (v - u) * f;
        out.push((t, base));
        out.push((t, base + st.alpha));
        out.push((u, base + st.alpha * f));
        out.push((v, base + st.alpha * f));
    }
    out
}

/// Largest diameter of `D_n^j = g_n^j(D_n^0)` over `0 <= j < p_n`.
fn box_diameter<S: Real>(st: &HakStage<S>, g: &LiftedAnnulusMap<S>) -> Result<S> {
    let mut pts = box_outline(st, 0);
    let mut worst = S::zero();
    for _ in 0..st.period() {
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                worst = worst.max(annulus_distance(pts[a], pts[b]));
            }
        }
        for x in pts.iter_mut() {
            *x = g.apply(x.0, x.1)?;
        }
    }
    Ok(worst)
}

fn distance_to_box<S: Real>(st: &HakStage<S>, lo: S, x: (S, S)) -> S {
    let (u, v) = st.band;
    let dt = (u - x.0).max(x.0 - v).max(S::zero());
    let offset = x.1 - lo;
    let offset = offset - offset.floor();
    let dr = if offset <= st.alpha { S::zero() } else { (offset - st.alpha).min(S::one() - offset) };
    dt + dr
}

const ORBIT_START_BOXES: u64 = 4;
const ORBIT_POINTS_PER_SIDE: usize = 3;

/// Largest distance from `H^i(x)` to the box that `H_n^i` carries `D_n^j`
/// onto, for sampled `x in D_n^j` and `0 <= i <= q_n`. On `A_n` the map
/// `H_n` is the rotation by `rho_n`, a multiple of `1 / p_n`.
fn orbit_box_gap<S: Real>(st: &HakStage<S>, rho_n: S, h: &LiftedAnnulusMap<S>) -> Result<S> {
    let p = st.period();
    let (u, v) = st.band;
    let m = ORBIT_POINTS_PER_SIDE;
    let mut starts = Vec::new();
    for b in 0..ORBIT_START_BOXES.min(p) {
        let j = b * p / ORBIT_START_BOXES.min(p);
        let base = S::of(j as f64) * st.rotation();
        for a in 0..m {
            for c in 0..m {
                let fa = S::of(a as f64) / S::of((m - 1) as f64);
                let fc = S::of(c as f64) / S::of((m - 1) as f64);
                starts.push((j, (u + (v - u) * fa, base + st.alpha * fc)));
            }
        }
    }
    let gaps = starts
        .par_iter()
        .map(|&(j, x0)| {
            let mut x = x0;
            let base = S::of(j as f64) * st.rotation();
            let mut worst = distance_to_box(st, base, x);
            for i in 1..=st.q {
                x = h.apply(x.0, x.1)?;
                worst = worst.max(distance_to_box(st, base + S::of(i as f64) * rho_n, x));
            }
            Ok(worst)
        })
        .collect::<Result<Vec<S>>>()?;
    Ok(gaps.into_iter().fold(S::zero(), S::max))
}

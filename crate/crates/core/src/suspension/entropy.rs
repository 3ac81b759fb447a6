use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::system::SuspensionSystem;
use crate::annulus::DisplacementTrack;
use crate::cantor::{agreement_radius, entropy_exact, CantorKind, Symbol};
use crate::error::{Error, Result};
use crate::num::{format_g, Real};

pub const DEFAULT_BUDGET: usize = 20_000;

/// Bowen-count bracket for the topological entropy at scale `eps` and
/// horizon `n`.
///
/// `S_eps(m)` is a greedy maximal `(eps, m)`-separated subset of the sample
/// and `T(m)` a greedy `(eps/2, m)`-cover of it; the reported rates are
/// `lower = ln(S_eps(n) / T(1)) / (n - 1)` and
/// `upper = ln(T(n) / S_eps(1)) / (n - 1)`, so `lower <= upper` always.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyBracket {
    pub eps: f64,
    pub n: usize,
    pub budget: usize,
    pub samples: usize,
    pub spatial_seeds: usize,
    pub cantor_tails: usize,
    pub separated_n: usize,
    pub cover_n: usize,
    pub separated_1: usize,
    pub cover_1: usize,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Copy, Debug)]
struct SpatialState {
    t: f64,
    r: f64,
    w: i64,
}

impl<S: Real> SuspensionSystem<S> {
    /// Samples are spatial seeds on a `2 eps` grid (jittered by less than
    /// `eps/2`) crossed with Cantor points sharing the cylinder of radius
    /// `a(eps) + 1` and differing on every index the orbit windings reach.
    pub fn entropy_bracket(&self, eps: S, n: usize, budget: usize, seed: u64) -> Result<EntropyBracket> {
        let eps_f = eps.as_f64();
        if !(eps_f > 0.0 && eps_f <= 0.5) {
            return Err(Error::Config("entropy estimation needs 0 < eps <= 1/2".into()));
        }
        if n < 2 {
            return Err(Error::Config("entropy estimation needs n >= 2".into()));
        }
        if budget == 0 {
            return Err(Error::Config("entropy budget must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fine = agreement_radius(eps_f) + 1;

        let cells = (1.0 / (2.0 * eps_f)).floor() as usize;
        let (m_t, m_r) = (cells + 1, cells.max(1));
        let jitter = 0.49 * eps_f;
        let mut grid: Vec<(f64, f64)> = Vec::with_capacity(m_t * m_r);
        for i in 0..m_t {
            for j in 0..m_r {
                let t = (i as f64 * 2.0 * eps_f + rng.gen_range(-jitter..jitter)).clamp(0.0, 1.0);
                let r = (j as f64 / m_r as f64 + rng.gen_range(-jitter..jitter)).rem_euclid(1.0);
                grid.push((t, r));
            }
        }
        grid.shuffle(&mut rng);
        let orbits = grid.par_iter().map(|&(t, r)| self.spatial_orbit(t, r, n)).collect::<Result<Vec<_>>>()?;
        let w_min = orbits.iter().flatten().map(|s| s.w).min().unwrap_or(0);
        let w_max = orbits.iter().flatten().map(|s| s.w).max().unwrap_or(0);

        let odometer = matches!(self.cantor().kind(), CantorKind::Odometer { .. });
        let point_radius = self.point_radius();
        let reach = fine as i64 + 1 + w_min.abs().max(w_max.abs());
        if odometer {
            if fine >= point_radius {
                return Err(Error::Capacity(format!(
                    "eps = {eps_f} needs {} odometer digits, only {point_radius} available",
                    fine + 1
                )));
            }
        } else if reach > self.radius() as i64 || reach > point_radius as i64 {
            return Err(Error::Capacity(format!(
                "orbits reach index {reach} but the window radius is {}; increase W",
                self.radius().min(point_radius)
            )));
        }

        let base = self.cantor().random_point(rng.gen(), point_radius);
        let (lo, hi) = if odometer {
            (0, point_radius as isize - 1)
        } else {
            ((w_min - 1) as isize - fine as isize, (w_max + 1) as isize + fine as isize)
        };
        let tails = self.cantor().cylinder_variants(&base, fine, lo, hi, budget, rng.gen());
        let spatial = (budget / tails.len().max(1)).clamp(1, grid.len());
        let orbits = &orbits[..spatial];
        let grid = &grid[..spatial];

        let span = (w_max - w_min + 3) as usize;
        let words: Vec<Vec<Vec<Symbol>>> = tails
            .par_iter()
            .map(|tail| {
                let mut x = self.cantor().iterate(tail, w_min - 1);
                let mut out = Vec::with_capacity(span);
                for k in 0..span {
                    if k > 0 {
                        x = self.cantor().iterate(&x, 1);
                    }
                    out.push(if odometer {
                        x.window().into_iter().take(fine + 1).collect()
                    } else {
                        x.word(-(fine as isize), 2 * fine + 1).expect("inside window")
                    });
                }
                out
            })
            .collect();

        let separated_seeds = min_seed_distance(grid) >= eps_f;
        let ctx = Bowen { orbits, words: &words, w_min, fine, odometer };
        let count = |threshold: f64, horizon: usize| -> usize {
            if separated_seeds {
                (0..spatial)
                    .into_par_iter()
                    .map(|s| {
                        let members: Vec<(usize, usize)> = (0..tails.len()).map(|c| (s, c)).collect();
                        ctx.greedy(&members, threshold, horizon)
                    })
                    .sum()
            } else {
                let members: Vec<(usize, usize)> =
                    (0..spatial).flat_map(|s| (0..tails.len()).map(move |c| (s, c))).collect();
                ctx.greedy(&members, threshold, horizon)
            }
        };
        let separated_n = count(eps_f, n);
        let cover_n = count(eps_f / 2.0, n);
        let separated_1 = count(eps_f, 1);
        let cover_1 = count(eps_f / 2.0, 1);
        let rate = |num: usize, den: usize| (num as f64 / den as f64).ln() / (n - 1) as f64;
        Ok(EntropyBracket {
            eps: eps_f,
            n,
            budget,
            samples: spatial * tails.len(),
            spatial_seeds: spatial,
            cantor_tails: tails.len(),
            separated_n,
            cover_n,
            separated_1,
            cover_1,
            lower: rate(separated_n, cover_1).max(0.0),
            upper: rate(cover_n, separated_1).max(0.0),
        })
    }

    /// Lower estimate from the separated-set count.
    pub fn entropy_separated(&self, eps: S, n: usize, budget: usize, seed: u64) -> Result<f64> {
        Ok(self.entropy_bracket(eps, n, budget, seed)?.lower)
    }

    /// Upper estimate from the spanning-cover count.
    pub fn entropy_spanning(&self, eps: S, n: usize, budget: usize, seed: u64) -> Result<f64> {
        Ok(self.entropy_bracket(eps, n, budget, seed)?.upper)
    }

    fn spatial_orbit(&self, t: f64, r: f64, n: usize) -> Result<Vec<SpatialState>> {
        let (mut tt, mut rr) = (S::of(t), S::of(r));
        let r0 = S::of(r);
        let mut track = DisplacementTrack::default();
        let mut out = Vec::with_capacity(n);
        out.push(SpatialState { t, r, w: 0 });
        for _ in 1..n {
            let (t1, d) = self.map().step(tt, rr)?;
            track.push(d);
            tt = t1;
            rr = rr + d;
            let abs = r0 + track.total();
            let w = abs.floor();
            out.push(SpatialState {
                t: t1.as_f64(),
                r: (abs - w).as_f64().rem_euclid(1.0),
                w: w.to_i64().ok_or_else(|| Error::Capacity("winding overflow".into()))?,
            });
        }
        Ok(out)
    }

    /// Bracket rows for every `(eps, n)` pair, with target `|alpha| h_top(h)`.
    pub fn product_formula_report(
        &self,
        alpha: f64,
        eps_list: &[f64],
        n_list: &[usize],
        budget: usize,
        seed: u64,
    ) -> Result<ProductReport> {
        let h_entropy = entropy_exact(self.cantor()).value;
        let mut rows = Vec::new();
        for &eps in eps_list {
            for &n in n_list {
                let b = self.entropy_bracket(S::of(eps), n, budget, seed)?;
                rows.push(ProductRow {
                    eps,
                    n,
                    budget,
                    lower: b.lower,
                    upper: b.upper,
                    target: alpha.abs() * h_entropy,
                    alpha,
                    h_entropy,
                });
            }
        }
        Ok(ProductReport { rows })
    }
}

fn min_seed_distance(grid: &[(f64, f64)]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in grid.iter().enumerate() {
        for b in &grid[i + 1..] {
            let dr = (a.1 - b.1).abs();
            best = best.min((a.0 - b.0).abs() + dr.min(1.0 - dr));
        }
    }
    best
}

struct Bowen<'a> {
    orbits: &'a [Vec<SpatialState>],
    words: &'a [Vec<Vec<Symbol>>],
    w_min: i64,
    fine: usize,
    odometer: bool,
}

impl Bowen<'_> {
    fn cantor(&self, a: &[Symbol], b: &[Symbol]) -> f64 {
        let mismatch = if self.odometer {
            (0..a.len()).find(|&i| a[i] != b[i])
        } else {
            let f = self.fine;
            (0..=f).find(|&m| a[f + m] != b[f + m] || a[f - m] != b[f - m])
        };
        mismatch.map_or(0.0, |m| 0.5f64.powi(m as i32))
    }

    fn distance(&self, p: (usize, usize), q: (usize, usize), i: usize) -> f64 {
        let sp = self.orbits[p.0][i];
        let sq = self.orbits[q.0][i];
        let dt = (sp.t - sq.t).abs();
        let wp = &self.words[p.1][(sp.w - self.w_min + 1) as usize];
        [-1i64, 0, 1]
            .iter()
            .map(|&m| {
                let strip = dt + (sp.r - sq.r - m as f64).abs();
                let k = sq.w - m - self.w_min + 1;
                let cantor = match self.words[q.1].get(k as usize) {
                    Some(wq) if k >= 0 => self.cantor(wp, wq),
                    _ => 1.0,
                };
                strip.max(cantor)
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn close(&self, p: (usize, usize), q: (usize, usize), threshold: f64, horizon: usize) -> bool {
        (0..horizon).all(|i| self.distance(p, q, i) < threshold)
    }

    fn greedy(&self, members: &[(usize, usize)], threshold: f64, horizon: usize) -> usize {
        let mut chosen: Vec<(usize, usize)> = Vec::new();
        for &x in members {
            if !chosen.iter().any(|&y| self.close(x, y, threshold, horizon)) {
                chosen.push(x);
            }
        }
        chosen.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductRow {
    pub eps: f64,
    pub n: usize,
    pub budget: usize,
    pub lower: f64,
    pub upper: f64,
    pub target: f64,
    pub alpha: f64,
    pub h_entropy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductReport {
    pub rows: Vec<ProductRow>,
}

impl ProductReport {
    pub const HEADER: &'static str = "eps,n,budget,lower,upper,target,alpha,h_entropy";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                format_g(r.eps),
                r.n,
                r.budget,
                format_g(r.lower),
                format_g(r.upper),
                format_g(r.target),
                format_g(r.alpha),
                format_g(r.h_entropy)
            ));
        }
        out
    }

    /// True when every row's bracket contains its target.
    pub fn brackets_target(&self) -> bool {
        self.rows.iter().all(|r| r.lower <= r.target && r.target <= r.upper)
    }
}

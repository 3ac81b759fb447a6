use std::fmt;

use super::pl::PlProfile;
use crate::error::{Error, Result};
use crate::num::Real;

/// Displacement table sampled on a `(res+1) x res` grid over the fundamental
/// domain `[0,1] x [0,1)`, interpolated bilinearly and extended periodically
/// in the angular coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSampled<S> {
    resolution: usize,
    /// `dt[i * res + j]`, `dr[i * res + j]` at node `(i/res, j/res)`.
    dt: Vec<S>,
    dr: Vec<S>,
}

impl<S: Real> GridSampled<S> {
    pub fn new(resolution: usize, dt: Vec<S>, dr: Vec<S>) -> Result<Self> {
        let n = (resolution + 1) * resolution;
        if resolution < 1 || dt.len() != n || dr.len() != n {
            return Err(Error::Config(format!("grid tables must have {n} entries")));
        }
        let res = S::of(resolution as f64);
        for i in 0..=resolution {
            let t = S::of(i as f64) / res;
            for j in 0..resolution {
                let t1 = t + dt[i * resolution + j];
                if !(t1 >= S::zero() && t1 <= S::one()) || !dr[i * resolution + j].is_finite() {
                    return Err(Error::Config(format!("grid node ({i},{j}) leaves the strip")));
                }
            }
        }
        Ok(Self { resolution, dt, dr })
    }

    /// Samples the displacement of `f` at the grid nodes.
    pub fn from_fn(resolution: usize, f: impl Fn(S, S) -> (S, S)) -> Result<Self> {
        let res = S::of(resolution as f64);
        let mut dt = Vec::with_capacity((resolution + 1) * resolution);
        let mut dr = Vec::with_capacity((resolution + 1) * resolution);
        for i in 0..=resolution {
            for j in 0..resolution {
                let (t, r) = (S::of(i as f64) / res, S::of(j as f64) / res);
                let (t1, r1) = f(t, r);
                dt.push(t1 - t);
                dr.push(r1 - r);
            }
        }
        Self::new(resolution, dt, dr)
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    fn displacement(&self, t: S, r: S) -> (S, S) {
        let n = self.resolution;
        let res = S::of(n as f64);
        let x = t * res;
        let i = x.floor().to_usize().unwrap_or(0).min(n - 1);
        let fx = x - S::of(i as f64);
        let y = (r - r.floor()) * res;
        let j0 = y.floor().to_usize().unwrap_or(0).min(n - 1);
        let fy = y - S::of(j0 as f64);
        let j1 = (j0 + 1) % n;
        let lerp = |table: &[S]| {
            let a = table[i * n + j0] * (S::one() - fy) + table[i * n + j1] * fy;
            let b = table[(i + 1) * n + j0] * (S::one() - fy) + table[(i + 1) * n + j1] * fy;
            a * (S::one() - fx) + b * fx
        };
        (lerp(&self.dt), lerp(&self.dr))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Primitive<S> {
    /// `(t, r) -> (t, r + beta)`.
    RigidRotation(S),
    /// `(t, r) -> (t, r + tau(t))`.
    Twist(PlProfile<S>),
    /// `(t, r) -> (phi(t), r)` with `phi` an increasing homeomorphism of `[0,1]`.
    RadialReparam(PlProfile<S>),
    GridSampled(GridSampled<S>),
    /// Lift to the `q`-fold cover: `(t, r) -> (F_t(t, qr), F_r(t, qr) / q)`.
    Cover {
        inner: Box<LiftedAnnulusMap<S>>,
        q: u32,
    },
}

impl<S: Real> Primitive<S> {
    pub fn inverse(&self) -> Result<Self> {
        match self {
            Primitive::RigidRotation(b) => Ok(Primitive::RigidRotation(-*b)),
            Primitive::Twist(p) => {
                Ok(Primitive::Twist(PlProfile::new(p.points().iter().map(|&(x, y)| (x, -y)).collect())?))
            }
            Primitive::RadialReparam(p) => p
                .inverse()
                .map(Primitive::RadialReparam)
                .ok_or_else(|| Error::UnsupportedConjugacy("reparametrization is not invertible".into())),
            Primitive::GridSampled(_) => {
                Err(Error::UnsupportedConjugacy("grid-sampled maps have no closed-form inverse".into()))
            }
            Primitive::Cover { .. } => {
                Err(Error::UnsupportedConjugacy("covering lifts have no closed-form inverse here".into()))
            }
        }
    }

    /// New radial coordinate and angular displacement.
    fn step(&self, t: S, r: S) -> (S, S) {
        match self {
            Primitive::RigidRotation(b) => (t, *b),
            Primitive::Twist(p) => (t, p.eval(t)),
            Primitive::RadialReparam(p) => (p.eval(t), S::zero()),
            Primitive::GridSampled(g) => {
                let (dt, dr) = g.displacement(t, r);
                ((t + dt).max(S::zero()).min(S::one()), dr)
            }
            Primitive::Cover { inner, q } => {
                let q = S::of(*q as f64);
                let (t1, d) = inner.step_unchecked(t, q * r);
                (t1, d / q)
            }
        }
    }
}

impl<S: Real> fmt::Display for Primitive<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Primitive::RigidRotation(b) => write!(f, "rotation:{b}"),
            Primitive::Twist(p) => write!(f, "twist:{}", p.to_text()),
            Primitive::RadialReparam(p) => write!(f, "reparam:{}", p.to_text()),
            Primitive::GridSampled(g) => write!(f, "grid:{}", g.resolution),
            Primitive::Cover { inner, q } => write!(f, "cover:{q}[{inner}]"),
        }
    }
}

/// Deck-equivariant lift of an annulus homeomorphism to the strip
/// `[0,1] x R`: a composition of primitives, applied in order.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedAnnulusMap<S> {
    pipeline: Vec<Primitive<S>>,
    label: String,
}

impl<S: Real> LiftedAnnulusMap<S> {
    pub fn new(pipeline: Vec<Primitive<S>>) -> Self {
        let label = pipeline.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" | ");
        Self { pipeline, label }
    }

    pub fn identity() -> Self {
        Self::new(Vec::new())
    }

    pub fn rotation(beta: S) -> Self {
        Self::new(vec![Primitive::RigidRotation(beta)])
    }

    pub fn twist(profile: PlProfile<S>) -> Self {
        Self::new(vec![Primitive::Twist(profile)])
    }

    /// Parses `"rotation:0.5 | twist:0,0;1,0.25 | reparam:0,0;0.5,0.7;1,1"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pipeline = Vec::new();
        for part in text.split('|').map(str::trim).filter(|p| !p.is_empty()) {
            let (kind, arg) = part.split_once(':').unwrap_or((part, ""));
            let primitive = match kind.trim() {
                "identity" | "id" => continue,
                "rotation" | "rot" => Primitive::RigidRotation(
                    arg.trim()
                        .parse::<f64>()
                        .ok()
                        .or_else(|| crate::num::parse_rational(arg).map(|q| *q.numer() as f64 / *q.denom() as f64))
                        .map(S::of)
                        .ok_or_else(|| Error::Config(format!("rotation amount `{arg}` is not a number")))?,
                ),
                "twist" => Primitive::Twist(PlProfile::parse(arg)?),
                "reparam" => {
                    let p = PlProfile::parse(arg)?;
                    if !p.is_increasing_onto_unit() {
                        return Err(Error::Config("reparam profile must increase from 0 to 1".into()));
                    }
                    Primitive::RadialReparam(p)
                }
                other => return Err(Error::Config(format!("unknown map primitive `{other}`"))),
            };
            pipeline.push(primitive);
        }
        Ok(Self::new(pipeline))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn pipeline(&self) -> &[Primitive<S>] {
        &self.pipeline
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Self) -> Self {
        let mut pipeline = self.pipeline.clone();
        pipeline.extend(other.pipeline.iter().cloned());
        Self::new(pipeline)
    }

    pub fn inverse(&self) -> Result<Self> {
        let pipeline = self.pipeline.iter().rev().map(Primitive::inverse).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(pipeline))
    }

    pub fn apply(&self, t: S, r: S) -> Result<(S, S)> {
        let (t1, d) = self.step(t, r)?;
        Ok((t1, r + d))
    }

    /// Image radial coordinate and angular displacement `r' - r`, the latter
    /// accumulated without cancellation error.
    pub fn step(&self, t: S, r: S) -> Result<(S, S)> {
        if !(t >= S::zero() && t <= S::one()) || !r.is_finite() {
            return Err(Error::Domain(format!("point ({t}, {r}) is outside the strip [0,1] x R")));
        }
        Ok(self.step_unchecked(t, r))
    }

    pub(crate) fn step_unchecked(&self, t: S, r: S) -> (S, S) {
        let mut t = t;
        let mut sum = NeumaierSum::default();
        for p in &self.pipeline {
            let (t1, d) = p.step(t, r + sum.value());
            t = t1;
            sum.add(d);
        }
        (t, sum.value())
    }
}

impl<S: Real> fmt::Display for LiftedAnnulusMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pipeline.is_empty() {
            write!(f, "identity")
        } else {
            write!(f, "{}", self.label)
        }
    }
}

/// Compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct NeumaierSum<S> {
    sum: S,
    compensation: S,
}

impl<S: Real> NeumaierSum<S> {
    pub(crate) fn add(&mut self, x: S) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation = self.compensation + ((self.sum - t) + x);
        } else {
            self.compensation = self.compensation + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> S {
        self.sum + self.compensation
    }
}

/// Sum metric on the annulus: `|t - t'|` plus the circular distance of the
/// angular coordinates.
pub fn annulus_distance<S: Real>(a: (S, S), b: (S, S)) -> S {
    (a.0 - b.0).abs() + circle_distance(a.1 - b.1)
}

/// Distance from `x` to the nearest integer.
pub fn circle_distance<S: Real>(x: S) -> S {
    (x - x.round()).abs()
}

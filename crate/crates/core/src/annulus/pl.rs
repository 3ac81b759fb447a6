use crate::error::{Error, Result};
use crate::num::Real;

/// Piecewise-linear function on `[0,1]` given by its breakpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct PlProfile<S> {
    points: Vec<(S, S)>,
}

impl<S: Real> PlProfile<S> {
    /// Breakpoints must start at `x = 0`, end at `x = 1` and strictly increase in `x`.
    pub fn new(points: Vec<(S, S)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Config("a profile needs at least two breakpoints".into()));
        }
        if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::Config("profile breakpoints must be finite".into()));
        }
        if points[0].0 != S::zero() || points[points.len() - 1].0 != S::one() {
            return Err(Error::Config("profile breakpoints must span [0,1]".into()));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Config("profile breakpoints must strictly increase".into()));
        }
        Ok(Self { points })
    }

    pub fn constant(value: S) -> Self {
        Self { points: vec![(S::zero(), value), (S::one(), value)] }
    }

    pub fn identity() -> Self {
        Self { points: vec![(S::zero(), S::zero()), (S::one(), S::one())] }
    }

    /// Parses `"0,0;0.5,0.7;1,1"`.
    pub fn parse(text: &str) -> Result<Self> {
        let points = text
            .split(';')
            .map(|pair| {
                let (x, y) =
                    pair.split_once(',').ok_or_else(|| Error::Config(format!("breakpoint `{pair}` is not `x,y`")))?;
                let parse = |s: &str| {
                    s.trim()
                        .parse::<f64>()
                        .map(S::of)
                        .map_err(|_| Error::Config(format!("breakpoint coordinate `{s}` is not a number")))
                };
                Ok((parse(x)?, parse(y)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    pub fn points(&self) -> &[(S, S)] {
        &self.points
    }

    pub fn eval(&self, x: S) -> S {
        let pts = &self.points;
        let x = x.max(S::zero()).min(S::one());
        let i = pts.partition_point(|(px, _)| *px <= x).clamp(1, pts.len() - 1);
        let (x0, y0) = pts[i - 1];
        let (x1, y1) = pts[i];
        if x == x1 {
            return y1;
        }
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn is_increasing_onto_unit(&self) -> bool {
        let pts = &self.points;
        pts[0].1 == S::zero() && pts[pts.len() - 1].1 == S::one() && pts.windows(2).all(|w| w[1].1 > w[0].1)
    }

    /// Inverse of an increasing homeomorphism of `[0,1]`.
    pub fn inverse(&self) -> Option<Self> {
        self.is_increasing_onto_unit().then(|| Self { points: self.points.iter().map(|&(x, y)| (y, x)).collect() })
    }

    pub fn max_abs(&self) -> S {
        self.points.iter().map(|p| p.1.abs()).fold(S::zero(), S::max)
    }

    pub fn to_text(&self) -> String {
        self.points.iter().map(|(x, y)| format!("{x},{y}")).collect::<Vec<_>>().join(";")
    }
}

use crate::error::{Error, Result};
use crate::num::{parse_rational, Coord, Rational};

/// Closed interval `[lo, hi]`.
pub type Interval<T> = (T, T);

/// Continuous piecewise-linear self-map of `[0,1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PLMap<T> {
    points: Vec<(T, T)>,
}

impl<T: Coord> PLMap<T> {
    pub fn new(points: Vec<(T, T)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Config("a PL map needs at least two breakpoints".into()));
        }
        if points[0].0 != T::zero() || points[points.len() - 1].0 != T::one() {
            return Err(Error::Config("PL map breakpoints must span [0,1]".into()));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Config("PL map breakpoints must strictly increase".into()));
        }
        if points.iter().any(|(_, y)| *y < T::zero() || *y > T::one()) {
            return Err(Error::Config("PL map values must lie in [0,1]".into()));
        }
        Ok(Self { points })
    }

    pub fn identity() -> Self {
        Self { points: vec![(T::zero(), T::zero()), (T::one(), T::one())] }
    }

    pub fn points(&self) -> &[(T, T)] {
        &self.points
    }

    pub fn eval(&self, x: &T) -> T {
        let pts = &self.points;
        let i = pts.iter().position(|(px, _)| px >= x).unwrap_or(pts.len() - 1).max(1);
        let (x0, y0) = &pts[i - 1];
        let (x1, y1) = &pts[i];
        y0.clone() + (y1.clone() - y0.clone()) * (x.clone() - x0.clone()) / (x1.clone() - x0.clone())
    }

    /// Exact image of `[a, b]`.
    pub fn image(&self, iv: &Interval<T>) -> Interval<T> {
        let (a, b) = iv;
        let mut lo = self.eval(a);
        let mut hi = lo.clone();
        let inner = self.points.iter().filter(|(x, _)| x > a && x < b).map(|(_, y)| y.clone());
        for y in inner.chain(std::iter::once(self.eval(b))) {
            lo = T::min_of(&lo, &y);
            hi = T::max_of(&hi, &y);
        }
        (lo, hi)
    }

    /// Image under the `m`-th iterate.
    pub fn image_iter(&self, iv: &Interval<T>, m: usize) -> Interval<T> {
        (0..m).fold(iv.clone(), |acc, _| self.image(&acc))
    }

    /// Exact preimage of `[c, d]` as a sorted union of disjoint closed intervals.
    pub fn preimage(&self, iv: &Interval<T>) -> Vec<Interval<T>> {
        let (c, d) = iv;
        let mut pieces: Vec<Interval<T>> = Vec::new();
        for w in self.points.windows(2) {
            let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
            let piece = if y0 == y1 {
                (y0 >= c && y0 <= d).then(|| (x0.clone(), x1.clone()))
            } else {
                let solve = |y: &T| {
                    x0.clone() + (y.clone() - y0.clone()) * (x1.clone() - x0.clone()) / (y1.clone() - y0.clone())
                };
                let (ylo, yhi) = (T::min_of(y0, y1), T::max_of(y0, y1));
                let lo_y = T::max_of(c, &ylo);
                let hi_y = T::min_of(d, &yhi);
                (lo_y <= hi_y).then(|| {
                    let (p, q) = (solve(&lo_y), solve(&hi_y));
                    (T::min_of(&p, &q), T::max_of(&p, &q))
                })
            };
            if let Some(p) = piece {
                push_merged(&mut pieces, p);
            }
        }
        pieces
    }

    /// Preimage of a union under the `m`-th iterate.
    pub fn preimage_iter(&self, set: &[Interval<T>], m: usize) -> Vec<Interval<T>> {
        let mut current = set.to_vec();
        for _ in 0..m {
            let mut next: Vec<Interval<T>> = Vec::new();
            for iv in &current {
                for p in self.preimage(iv) {
                    next.push(p);
                }
            }
            current = normalize_union(next);
        }
        current
    }
}

impl PLMap<Rational> {
    /// Parses `"0,0; 1/2,1; 1,0"`.
    pub fn parse(text: &str) -> Result<Self> {
        let points = text
            .split(';')
            .map(|pair| {
                let (x, y) = pair
                    .split_once(',')
                    .ok_or_else(|| Error::Config(format!("breakpoint `{}` is not `x,y`", pair.trim())))?;
                let p = |s: &str| {
                    parse_rational(s).ok_or_else(|| Error::Config(format!("`{}` is not a rational number", s.trim())))
                };
                Ok((p(x)?, p(y)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }
}

fn push_merged<T: Coord>(pieces: &mut Vec<Interval<T>>, p: Interval<T>) {
    if let Some(last) = pieces.last_mut() {
        if p.0 <= last.1 {
            last.1 = T::max_of(&last.1, &p.1);
            return;
        }
    }
    pieces.push(p);
}

/// Sorts and merges overlapping or touching intervals.
pub fn normalize_union<T: Coord>(mut set: Vec<Interval<T>>) -> Vec<Interval<T>> {
    set.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("comparable coordinates"));
    let mut out = Vec::with_capacity(set.len());
    for p in set {
        push_merged(&mut out, p);
    }
    out
}

/// Intersection of a union with a single interval.
pub fn intersect_union<T: Coord>(set: &[Interval<T>], iv: &Interval<T>) -> Vec<Interval<T>> {
    set.iter()
        .filter_map(|(a, b)| {
            let lo = T::max_of(a, &iv.0);
            let hi = T::min_of(b, &iv.1);
            (lo <= hi).then_some((lo, hi))
        })
        .collect()
}

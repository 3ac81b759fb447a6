use super::pattern::Pattern;
use crate::error::{Error, Result};
use crate::num::Coord;

const MIN_WIDTH: f64 = 1e-6;
const MAX_LAYOUTS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    T,
    R,
}

impl Axis {
    fn other(self) -> Self {
        match self {
            Axis::T => Axis::R,
            Axis::R => Axis::T,
        }
    }
}

/// Closed rectangle `[t0,t1] x [r0,r1]`, with `r` an unwrapped angle.
#[derive(Clone, Debug, PartialEq)]
pub struct Rect<T> {
    pub t: (T, T),
    pub r: (T, T),
}

impl<T: Coord> Rect<T> {
    pub fn new(t0: T, t1: T, r0: T, r1: T) -> Self {
        Self { t: (t0, t1), r: (r0, r1) }
    }

    pub fn side(&self, axis: Axis) -> &(T, T) {
        match axis {
            Axis::T => &self.t,
            Axis::R => &self.r,
        }
    }

    fn with_side(mut self, axis: Axis, side: (T, T)) -> Self {
        match axis {
            Axis::T => self.t = side,
            Axis::R => self.r = side,
        }
        self
    }

    pub fn width(&self, axis: Axis) -> T {
        let (a, b) = self.side(axis);
        b.clone() - a.clone()
    }

    fn mid(&self, axis: Axis) -> T {
        let (a, b) = self.side(axis);
        (a.clone() + b.clone()) / T::ratio(2, 1)
    }

    /// Copy with the angle shifted by `s`.
    pub fn shifted(&self, s: &T) -> Self {
        Self { t: self.t.clone(), r: (self.r.0.clone() + s.clone(), self.r.1.clone() + s.clone()) }
    }

    pub fn bbox(&self, other: &Self) -> Self {
        Self {
            t: (T::min_of(&self.t.0, &other.t.0), T::max_of(&self.t.1, &other.t.1)),
            r: (T::min_of(&self.r.0, &other.r.0), T::max_of(&self.r.1, &other.r.1)),
        }
    }

    /// Intersection with positive area.
    pub fn overlap(&self, other: &Self) -> Option<Self> {
        let t = (T::max_of(&self.t.0, &other.t.0), T::min_of(&self.t.1, &other.t.1));
        let r = (T::max_of(&self.r.0, &other.r.0), T::min_of(&self.r.1, &other.r.1));
        (t.0 < t.1 && r.0 < r.1).then_some(Self { t, r })
    }

    /// Closures intersect.
    pub fn meets(&self, other: &Self) -> bool {
        self.t.0 <= other.t.1 && other.t.0 <= self.t.1 && self.r.0 <= other.r.1 && other.r.0 <= self.r.1
    }

    /// Closure of `self` lies in the open rectangle `other`.
    pub fn inside(&self, other: &Self) -> bool {
        self.t.0 > other.t.0 && self.t.1 < other.t.1 && self.r.0 > other.r.0 && self.r.1 < other.r.1
    }

    fn min_width(&self) -> f64 {
        self.width(Axis::T).to_f64().min(self.width(Axis::R).to_f64())
    }
}

fn shifts<T: Coord>() -> [T; 3] {
    [T::zero(), -T::one(), T::one()]
}

/// Chain of rectangular links in the annulus `[0,1] x R/Z`.
///
/// A closed chain winds once around the annulus; its last link meets its
/// first one across the seam `r = 1 ~ r = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainCover<T> {
    links: Vec<Rect<T>>,
    closed: bool,
}

impl<T: Coord> ChainCover<T> {
    /// Validates link shapes and tautness.
    pub fn new(links: Vec<Rect<T>>, closed: bool) -> Result<Self> {
        let half = T::ratio(1, 2);
        for (i, l) in links.iter().enumerate() {
            if !(l.t.0 < l.t.1 && l.r.0 < l.r.1) {
                return Err(Error::Config(format!("link {} is empty", i + 1)));
            }
            if l.width(Axis::R) >= half {
                return Err(Error::Config(format!("link {} spans half the annulus or more", i + 1)));
            }
        }
        let chain = Self { links, closed };
        chain.check_taut()?;
        Ok(chain)
    }

    /// `n` links `[0,1] x [j/n - delta, (j+1)/n + delta]` closing around the annulus.
    pub fn essential(n: usize, delta: T) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("an essential chain needs at least 3 links, got {n}")));
        }
        let links = (0..n)
            .map(|j| {
                Rect::new(
                    T::zero(),
                    T::one(),
                    T::ratio(j as i64, n as i64) - delta.clone(),
                    T::ratio(j as i64 + 1, n as i64) + delta.clone(),
                )
            })
            .collect();
        Self::new(links, true)
    }

    pub fn links(&self) -> &[Rect<T>] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    fn adjacent(&self, i: usize, j: usize) -> bool {
        let n = self.links.len();
        i.abs_diff(j) == 1 || (self.closed && n > 2 && i.abs_diff(j) == n - 1)
    }

    /// Closures of consecutive links meet and all other pairs are disjoint,
    /// on the annulus.
    pub fn check_taut(&self) -> Result<()> {
        let n = self.links.len();
        for i in 0..n {
            for j in i + 1..n {
                let meet = shifts::<T>().iter().any(|s| self.links[i].meets(&self.links[j].shifted(s)));
                match (self.adjacent(i, j), meet) {
                    (true, false) => return Err(Error::NotTaut(format!("links {} and {} do not meet", i + 1, j + 1))),
                    (false, true) => return Err(Error::NotTaut(format!("links {} and {} meet", i + 1, j + 1))),
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn is_taut(&self) -> bool {
        self.check_taut().is_ok()
    }

    /// Every link `i` lies inside parent link `f(i)`.
    pub fn follows(&self, parent: &Self, f: &Pattern) -> bool {
        f.len() == self.len()
            && f.range() <= parent.len()
            && self.links.iter().zip(f.values()).all(|(l, &p)| l.inside(&parent.links[p - 1]))
    }
}

/// Overlap region of two consecutive parent links, in the frame of the first.
struct Omega<T> {
    a: usize,
    b: usize,
    shift: T,
    region: Rect<T>,
    thin: Axis,
}

struct Crossing {
    omega: usize,
    pass: usize,
}

#[derive(Clone, Copy)]
struct Layout {
    travel: Axis,
    descending: bool,
}

/// Child chain following `f` inside `parent`.
///
/// Each overlap of consecutive parent links is crossed by the child path
/// once per monotone pass of `f`. Crossings get disjoint transverse lanes,
/// indexed by pass, each an equal cell of the overlap shrunk by 10% on both
/// sides; along the crossing direction a port keeps the middle 80%. A child
/// link is the bounding box of its two ports; the first and last links run
/// from their port to the middle of the parent link, and constant runs of
/// `f` are sliced equally. Lane directions are searched until the child is
/// taut and inside the parent.
pub fn refine_chain<T: Coord>(parent: &ChainCover<T>, f: &Pattern) -> Result<ChainCover<T>> {
    let n = parent.len();
    if f.is_empty() {
        return Err(Error::Domain("cannot refine along an empty pattern".into()));
    }
    if f.range() > n {
        return Err(Error::Domain(format!("pattern range {} exceeds the {n} parent links", f.range())));
    }
    let vals: Vec<usize> = f.values().iter().map(|v| v - 1).collect();
    let m = vals.len();
    let closed = parent.closed && n > 2 && vals[0] == 0 && vals[m - 1] == n - 1 && m > 2;

    let mut omegas: Vec<Omega<T>> = Vec::new();
    let mut omega_of = |a: usize, b: usize| -> Result<usize> {
        if let Some(k) = omegas.iter().position(|o| o.a == a && o.b == b) {
            return Ok(k);
        }
        let (pa, pb) = (&parent.links[a], &parent.links[b]);
        let (shift, region) = shifts::<T>()
            .into_iter()
            .find_map(|s| pa.overlap(&pb.shifted(&s)).map(|o| (s, o)))
            .ok_or_else(|| Error::NotTaut(format!("parent links {} and {} do not overlap", a + 1, b + 1)))?;
        if region.min_width() < MIN_WIDTH {
            return Err(Error::Resolution(format!("overlap of parent links {} and {} is too thin", a + 1, b + 1)));
        }
        let thin = if region.width(Axis::R) <= region.width(Axis::T) { Axis::R } else { Axis::T };
        omegas.push(Omega { a, b, shift, region, thin });
        Ok(omegas.len() - 1)
    };

    // crossings[i] sits between child i and child i+1 (cyclically when closed)
    let steps = if closed { m } else { m - 1 };
    let mut crossings: Vec<Option<Crossing>> = Vec::with_capacity(steps);
    let mut pass = 0;
    let mut last_dir = 0i64;
    for i in 0..steps {
        let (x, y) = (vals[i], vals[(i + 1) % m]);
        let dir = if y == x {
            0
        } else if y == x + 1 || (x == n - 1 && y == 0) {
            1
        } else {
            -1
        };
        if dir != 0 && last_dir != 0 && dir != last_dir {
            pass += 1;
        }
        if dir != 0 {
            last_dir = dir;
        }
        crossings.push(match dir {
            0 => None,
            1 => Some(Crossing { omega: omega_of(x, y)?, pass }),
            _ => Some(Crossing { omega: omega_of(y, x)?, pass }),
        });
    }
    let lanes = pass + 1;

    let count = 4usize.saturating_pow(omegas.len() as u32).min(MAX_LAYOUTS);
    let mut last_err = None;
    for code in 0..count {
        let layouts: Vec<Layout> = omegas
            .iter()
            .enumerate()
            .map(|(q, o)| {
                let bits = if q < 6 { (code >> (2 * q)) & 3 } else { 0 };
                Layout { travel: if bits & 1 == 0 { o.thin } else { o.thin.other() }, descending: bits & 2 != 0 }
            })
            .collect();
        match build(parent, &vals, closed, &omegas, &crossings, &layouts, lanes) {
            Ok(child) => return Ok(child),
            Err(e) => last_err = Some(e),
        }
    }
    Err(Error::Resolution(format!(
        "no lane layout yields a taut child chain ({})",
        last_err.map(|e| e.to_string()).unwrap_or_default()
    )))
}

fn port<T: Coord>(o: &Omega<T>, layout: Layout, pass: usize, lanes: usize) -> Result<Rect<T>> {
    let tenth = T::ratio(1, 10);
    let travel = layout.travel;
    let trans = travel.other();
    let (lo, hi) = o.region.side(trans).clone();
    let cell = (hi - lo.clone()) / T::ratio(lanes as i64, 1);
    let slot = if layout.descending { lanes - 1 - pass } else { pass };
    let start = lo + cell.clone() * T::ratio(slot as i64, 1);
    let side_t = (start.clone() + cell.clone() * tenth.clone(), start + cell.clone() - cell * tenth.clone());
    let (a, b) = o.region.side(travel).clone();
    let w = b.clone() - a.clone();
    let side_r = (a + w.clone() * tenth.clone(), b - w * tenth);
    let p = o.region.clone().with_side(trans, side_t).with_side(travel, side_r);
    if p.min_width() < MIN_WIDTH {
        return Err(Error::Resolution("port narrower than the resolution limit".into()));
    }
    Ok(p)
}

fn build<T: Coord>(
    parent: &ChainCover<T>,
    vals: &[usize],
    closed: bool,
    omegas: &[Omega<T>],
    crossings: &[Option<Crossing>],
    layouts: &[Layout],
    lanes: usize,
) -> Result<ChainCover<T>> {
    let m = vals.len();
    // port of crossing i in the frame of parent link p, with its travel axis
    let port_in = |i: usize, p: usize| -> Result<Option<(Rect<T>, Axis)>> {
        let Some(c) = crossings.get(i).and_then(Option::as_ref) else { return Ok(None) };
        let o = &omegas[c.omega];
        let layout = layouts[c.omega];
        let rect = port(o, layout, c.pass, lanes)?;
        let rect = if p == o.a { rect } else { rect.shifted(&-o.shift.clone()) };
        Ok(Some((rect, layout.travel)))
    };

    let mut links: Vec<Rect<T>> = Vec::with_capacity(m);
    let mut start = 0;
    while start < m {
        let p = vals[start];
        let mut end = start;
        while end + 1 < m && vals[end + 1] == p {
            end += 1;
        }
        let entry = if start > 0 {
            port_in(start - 1, p)?
        } else if closed {
            port_in(m - 1, p)?
        } else {
            None
        };
        let exit = if end + 1 < m || closed { port_in(end, p)? } else { None };
        links.extend(run_links(&parent.links[p], entry, exit, end - start + 1));
        start = end + 1;
    }

    for (i, (l, &p)) in links.iter().zip(vals).enumerate() {
        if l.min_width() < MIN_WIDTH {
            return Err(Error::Resolution(format!("child link {} is too thin", i + 1)));
        }
        if !l.inside(&parent.links[p]) {
            return Err(Error::Resolution(format!("child link {} leaves parent link {}", i + 1, p + 1)));
        }
    }
    let child = ChainCover { links, closed };
    child.check_taut()?;
    Ok(child)
}

fn toward_middle<T: Coord>(port: &Rect<T>, axis: Axis, parent: &Rect<T>) -> Rect<T> {
    let c = parent.mid(axis);
    let (a, b) = port.side(axis).clone();
    port.clone().with_side(axis, (T::min_of(&a, &c), T::max_of(&b, &c)))
}

fn run_links<T: Coord>(
    parent: &Rect<T>,
    entry: Option<(Rect<T>, Axis)>,
    exit: Option<(Rect<T>, Axis)>,
    len: usize,
) -> Vec<Rect<T>> {
    let tenth = T::ratio(1, 10);
    let region = match (&entry, &exit) {
        (Some((a, _)), Some((b, _))) => a.bbox(b),
        (Some((a, ax)), None) | (None, Some((a, ax))) => toward_middle(a, *ax, parent),
        (None, None) => {
            let shrink = |(a, b): (T, T)| {
                let w = b.clone() - a.clone();
                (a + w.clone() * tenth.clone(), b - w * tenth.clone())
            };
            Rect { t: shrink(parent.t.clone()), r: shrink(parent.r.clone()) }
        }
    };
    if len == 1 {
        return vec![region];
    }
    let longer = if region.width(Axis::R) >= region.width(Axis::T) { Axis::R } else { Axis::T };
    let (axis, reverse) = match (&entry, &exit) {
        (Some((a, _)), Some((b, _))) => {
            let dt = (a.mid(Axis::T) - b.mid(Axis::T)).to_f64().abs();
            let dr = (a.mid(Axis::R) - b.mid(Axis::R)).to_f64().abs();
            let axis = if dt == dr {
                longer
            } else if dr > dt {
                Axis::R
            } else {
                Axis::T
            };
            (axis, a.mid(axis) > b.mid(axis))
        }
        (Some((a, _)), None) => (longer, a.mid(longer) > region.mid(longer)),
        (None, Some((b, _))) => (longer, b.mid(longer) < region.mid(longer)),
        (None, None) => (longer, false),
    };
    let (lo, hi) = region.side(axis).clone();
    let w = (hi - lo.clone()) / T::ratio(len as i64, 1);
    let mut slices: Vec<Rect<T>> = (0..len)
        .map(|k| {
            let a = lo.clone() + w.clone() * T::ratio(k as i64, 1);
            region.clone().with_side(axis, (a.clone(), a + w.clone()))
        })
        .collect();
    if reverse {
        slices.reverse();
    }
    if let Some((a, _)) = &entry {
        slices[0] = slices[0].bbox(a);
    }
    if let Some((b, _)) = &exit {
        slices[len - 1] = slices[len - 1].bbox(b);
    }
    slices
}

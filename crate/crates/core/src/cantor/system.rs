use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sequence::{Extension, Symbol, SymbolSequence};
use crate::error::{Error, Result};

/// Default window radius `W`.
pub const DEFAULT_RADIUS: usize = 32;

/// Square 0/1 transition matrix of a vertex shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjacency {
    rows: Vec<Vec<bool>>,
}

impl Adjacency {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self> {
        let k = rows.len();
        if k < 2 {
            return Err(Error::Config(format!("adjacency must be at least 2x2, got {k} rows")));
        }
        if k > 256 {
            return Err(Error::Config("alphabets larger than 256 symbols are unsupported".into()));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != k) {
            return Err(Error::Config(format!("adjacency row {i} has wrong length")));
        }
        if let Some(i) = rows.iter().position(|r| !r.iter().any(|&b| b)) {
            return Err(Error::Config(format!("adjacency row {i} is all zero")));
        }
        if let Some(j) = (0..k).find(|&j| !rows.iter().any(|r| r[j])) {
            return Err(Error::Config(format!("adjacency column {j} is all zero")));
        }
        Ok(Self { rows })
    }

    pub fn full(k: usize) -> Self {
        Self { rows: vec![vec![true; k]; k] }
    }

    /// Parses `"1,1;1,0"`.
    pub fn parse(text: &str) -> Result<Self> {
        let rows = text
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|cell| match cell.trim() {
                        "0" => Ok(false),
                        "1" => Ok(true),
                        other => Err(Error::Config(format!("adjacency entry `{other}` is not 0/1"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn allows(&self, a: Symbol, b: Symbol) -> bool {
        self.rows.get(a as usize).and_then(|r| r.get(b as usize)).copied().unwrap_or(false)
    }

    pub fn successors(&self, a: Symbol) -> impl Iterator<Item = Symbol> + '_ {
        self.rows[a as usize].iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j as Symbol)
    }

    pub fn predecessors(&self, b: Symbol) -> impl Iterator<Item = Symbol> + '_ {
        self.rows.iter().enumerate().filter(move |(_, r)| r[b as usize]).map(|(i, _)| i as Symbol)
    }

    pub fn as_f64_rows(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()).collect()
    }

    /// Strong connectivity of the transition graph.
    #[allow(clippy::needless_range_loop)]
    pub fn is_irreducible(&self) -> bool {
        let k = self.size();
        let reach = |forward: bool| {
            let mut seen = vec![false; k];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(v) = stack.pop() {
                for w in 0..k {
                    let edge = if forward { self.rows[v][w] } else { self.rows[w][v] };
                    if edge && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach(true) && reach(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CantorKind {
    FullShift {
        k: u32,
    },
    Sft {
        adjacency: Arc<Adjacency>,
    },
    /// `rules[a]` is the image word of letter `a`.
    Substitution {
        rules: Vec<Vec<Symbol>>,
    },
    /// Mixed-radix adding machine truncated at depth `bases.len()`.
    Odometer {
        bases: Vec<u32>,
    },
}

/// A homeomorphism of the Cantor set given symbolically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CantorSystem {
    kind: CantorKind,
    label: String,
    /// Long word of the substitution language, centred on a legal seam.
    language_word: Option<Arc<Vec<Symbol>>>,
}

const SUBSTITUTION_WORD_LEN: usize = 1 << 13;

impl CantorSystem {
    pub fn full_shift(k: u32) -> Result<Self> {
        if !(2..=256).contains(&k) {
            return Err(Error::Config(format!("full shift needs 2 <= k <= 256, got k = {k}")));
        }
        Ok(Self { kind: CantorKind::FullShift { k }, label: format!("fullshift({k})"), language_word: None })
    }

    pub fn sft(adjacency: Adjacency) -> Result<Self> {
        let k = adjacency.size();
        Ok(Self {
            kind: CantorKind::Sft { adjacency: Arc::new(adjacency) },
            label: format!("sft({k})"),
            language_word: None,
        })
    }

    pub fn golden_mean() -> Self {
        Self::sft(Adjacency::new(vec![vec![true, true], vec![true, false]]).expect("valid matrix"))
            .expect("valid system")
    }

    pub fn substitution(rules: Vec<Vec<Symbol>>) -> Result<Self> {
        let k = rules.len();
        if k < 2 {
            return Err(Error::Config("substitution needs at least two letters".into()));
        }
        for (a, w) in rules.iter().enumerate() {
            if w.is_empty() {
                return Err(Error::Config(format!("substitution rule for letter {a} is empty")));
            }
            if let Some(&b) = w.iter().find(|&&b| b as usize >= k) {
                return Err(Error::Config(format!("substitution rule for letter {a} uses unknown letter {b}")));
            }
        }
        if !substitution_is_primitive(&rules) {
            return Err(Error::Config("substitution is not primitive (checked up to power 2k)".into()));
        }
        let word = substitution_word(&rules, SUBSTITUTION_WORD_LEN);
        Ok(Self {
            kind: CantorKind::Substitution { rules },
            label: format!("substitution({k})"),
            language_word: Some(Arc::new(word)),
        })
    }

    pub fn thue_morse() -> Self {
        Self::substitution(vec![vec![0, 1], vec![1, 0]]).expect("valid substitution")
    }

    /// Parses `"0:01;1:10"`.
    pub fn parse_rules(text: &str) -> Result<Vec<Vec<Symbol>>> {
        let mut rules: Vec<(usize, Vec<Symbol>)> = Vec::new();
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (letter, image) =
                part.split_once(':').ok_or_else(|| Error::Config(format!("rule `{part}` lacks `:`")))?;
            let letter: usize = letter
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("rule letter `{letter}` is not an integer")))?;
            let image = image
                .trim()
                .chars()
                .map(|ch| {
                    ch.to_digit(36)
                        .map(|d| d as Symbol)
                        .ok_or_else(|| Error::Config(format!("rule image symbol `{ch}` is invalid")))
                })
                .collect::<Result<Vec<_>>>()?;
            rules.push((letter, image));
        }
        rules.sort_by_key(|(a, _)| *a);
        if rules.iter().enumerate().any(|(i, (a, _))| i != *a) {
            return Err(Error::Config("rules must define letters 0..k-1 exactly once".into()));
        }
        Ok(rules.into_iter().map(|(_, w)| w).collect())
    }

    pub fn odometer(bases: Vec<u32>) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::Config("odometer depth must be at least 1".into()));
        }
        if let Some(b) = bases.iter().find(|&&b| !(2..=256).contains(&b)) {
            return Err(Error::Config(format!("odometer base {b} must lie in 2..=256")));
        }
        let label = format!("odometer({})", bases.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
        Ok(Self { kind: CantorKind::Odometer { bases }, label, language_word: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn kind(&self) -> &CantorKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn alphabet_size(&self) -> u32 {
        match &self.kind {
            CantorKind::FullShift { k } => *k,
            CantorKind::Sft { adjacency } => adjacency.size() as u32,
            CantorKind::Substitution { rules } => rules.len() as u32,
            CantorKind::Odometer { bases } => bases.iter().copied().max().unwrap_or(2),
        }
    }

    pub fn is_odometer(&self) -> bool {
        matches!(self.kind, CantorKind::Odometer { .. })
    }

    /// Shift-type systems act by `h(c)_i = c_{i+1}`.
    pub fn is_shift(&self) -> bool {
        !self.is_odometer()
    }

    pub(crate) fn adjacency(&self) -> Option<Arc<Adjacency>> {
        match &self.kind {
            CantorKind::FullShift { k } => Some(Arc::new(Adjacency::full(*k as usize))),
            CantorKind::Sft { adjacency } => Some(adjacency.clone()),
            _ => None,
        }
    }

    pub(crate) fn language_word(&self) -> Option<&[Symbol]> {
        self.language_word.as_deref().map(Vec::as_slice)
    }

    /// Checks the window against the system's alphabet and admissibility.
    pub fn validate_point(&self, c: &SymbolSequence) -> Result<()> {
        match &self.kind {
            CantorKind::Odometer { bases } => {
                if !c.is_digit_stream() || c.window.len() != bases.len() {
                    return Err(Error::InvalidPoint("odometer points are digit streams of full depth".into()));
                }
                if let Some((i, d)) =
                    c.window.iter().zip(bases).position(|(&d, &b)| d as u32 >= b).map(|i| (i, c.window[i]))
                {
                    return Err(Error::InvalidPoint(format!("digit {d} at position {i} exceeds its base")));
                }
                Ok(())
            }
            _ => {
                if c.is_digit_stream() {
                    return Err(Error::InvalidPoint("shift points need a two-sided window".into()));
                }
                let k = self.alphabet_size();
                if let Some(s) = c.window.iter().find(|&&s| s as u32 >= k) {
                    return Err(Error::InvalidPoint(format!("symbol {s} outside alphabet of size {k}")));
                }
                if let CantorKind::Sft { adjacency } = &self.kind {
                    let w = c.window();
                    if let Some(i) = w.windows(2).position(|p| !adjacency.allows(p[0], p[1])) {
                        return Err(Error::InvalidPoint(format!(
                            "transition {}->{} at window position {i} is not admissible",
                            w[i],
                            w[i + 1]
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// `h(c)`.
    pub fn shift_forward(&self, c: &SymbolSequence) -> Result<SymbolSequence> {
        self.validate_point(c)?;
        Ok(self.step(c, 1))
    }

    /// `h^{-1}(c)`.
    pub fn shift_backward(&self, c: &SymbolSequence) -> Result<SymbolSequence> {
        self.validate_point(c)?;
        Ok(self.step(c, -1))
    }

    /// `h^n(c)` without re-validating the point.
    pub fn iterate(&self, c: &SymbolSequence, n: i64) -> SymbolSequence {
        self.step(c, n)
    }

    fn step(&self, c: &SymbolSequence, n: i64) -> SymbolSequence {
        let mut out = c.clone();
        self.step_in_place(&mut out, n);
        out
    }

    pub(crate) fn step_in_place(&self, c: &mut SymbolSequence, n: i64) {
        match &self.kind {
            CantorKind::Odometer { bases } => odometer_add(&mut c.window, bases, n),
            _ => {
                if n >= 0 {
                    (0..n).for_each(|_| c.advance());
                } else {
                    (0..-n).for_each(|_| c.retreat());
                }
            }
        }
    }

    /// Deterministic point of the system for a given seed.
    pub fn random_point(&self, seed: u64, radius: usize) -> SymbolSequence {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = 2 * radius + 1;
        match &self.kind {
            CantorKind::FullShift { k } => {
                let window = (0..len).map(|_| rng.gen_range(0..*k) as Symbol).collect();
                let left = (0..16).map(|_| rng.gen_range(0..*k) as Symbol).collect();
                let right = (0..16).map(|_| rng.gen_range(0..*k) as Symbol).collect();
                SymbolSequence::periodic(window, left, right, *k)
            }
            CantorKind::Sft { adjacency } => {
                let k = adjacency.size();
                let mut window = Vec::with_capacity(len);
                window.push(rng.gen_range(0..k) as Symbol);
                while window.len() < len {
                    let last = *window.last().expect("non-empty");
                    let next: Vec<Symbol> = adjacency.successors(last).collect();
                    window.push(next[rng.gen_range(0..next.len())]);
                }
                SymbolSequence::two_sided(window, Extension::GraphPath { adjacency: adjacency.clone(), seed }, k as u32)
            }
            CantorKind::Substitution { rules } => {
                let word = self.language_word().expect("substitution word");
                let margin = word.len() / 4;
                let centre = margin + rng.gen_range(0..word.len() - 2 * margin);
                self.point_from_language(word, centre, radius, rules.len() as u32)
            }
            CantorKind::Odometer { bases } => {
                let digits = bases.iter().map(|&b| rng.gen_range(0..b) as Symbol).collect();
                SymbolSequence::digits(digits, bases.clone())
            }
        }
    }

    /// The point whose window is `word[centre-W..=centre+W]`, continued by the
    /// rest of `word` on both sides.
    pub(crate) fn point_from_language(&self, word: &[Symbol], centre: usize, radius: usize, k: u32) -> SymbolSequence {
        let lo = centre.saturating_sub(radius);
        let hi = (centre + radius + 1).min(word.len());
        assert!(centre >= radius && hi - lo == 2 * radius + 1, "language word too short for window");
        let window = word[lo..hi].to_vec();
        let mut left: Vec<Symbol> = word[..lo].iter().rev().copied().collect();
        let mut right: Vec<Symbol> = word[hi..].to_vec();
        if left.is_empty() {
            left.push(window[0]);
        }
        if right.is_empty() {
            right.push(window[window.len() - 1]);
        }
        SymbolSequence::periodic(window, left, right, k)
    }

    /// Seeded point that agrees with `base` on `|i| <= fixed` (on the first
    /// `fixed + 1` digits for odometers) and is random elsewhere.
    pub fn random_in_cylinder(&self, base: &SymbolSequence, fixed: usize, seed: u64) -> SymbolSequence {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let radius = base.radius();
        match &self.kind {
            CantorKind::FullShift { .. } | CantorKind::Sft { .. } => {
                let adjacency = self.adjacency().expect("shift adjacency");
                let f = fixed.min(radius) as isize;
                let w = radius as isize;
                let mut right = Vec::new();
                let mut last = base.symbol(f).expect("inside window");
                for _ in f + 1..=w {
                    let next: Vec<Symbol> = adjacency.successors(last).collect();
                    last = next[rng.gen_range(0..next.len())];
                    right.push(last);
                }
                let mut left = Vec::new();
                let mut first = base.symbol(-f).expect("inside window");
                for _ in f + 1..=w {
                    let prev: Vec<Symbol> = adjacency.predecessors(first).collect();
                    first = prev[rng.gen_range(0..prev.len())];
                    left.push(first);
                }
                let mut window: Vec<Symbol> = left.into_iter().rev().collect();
                window.extend((-f..=f).map(|i| base.symbol(i).expect("inside window")));
                window.extend(right);
                self.shift_point(window, adjacency, seed, &mut rng)
            }
            CantorKind::Substitution { rules } => {
                let text = self.language_word().expect("substitution word");
                let f = fixed.min(radius);
                let core = base.word(-(f as isize), 2 * f + 1).expect("inside window");
                let hits: Vec<usize> = text
                    .windows(core.len())
                    .enumerate()
                    .filter(|(p, w)| *w == core.as_slice() && *p >= radius && p + f + radius < text.len())
                    .map(|(p, _)| p + f)
                    .collect();
                if hits.is_empty() {
                    return base.clone();
                }
                let centre = hits[rng.gen_range(0..hits.len())];
                self.point_from_language(text, centre, radius, rules.len() as u32)
            }
            CantorKind::Odometer { bases } => {
                let mut digits = base.window();
                for (i, d) in digits.iter_mut().enumerate().skip(fixed + 1) {
                    *d = rng.gen_range(0..bases[i]) as Symbol;
                }
                SymbolSequence::digits(digits, bases.clone())
            }
        }
    }

    fn shift_point(
        &self,
        window: Vec<Symbol>,
        adjacency: Arc<Adjacency>,
        seed: u64,
        rng: &mut ChaCha8Rng,
    ) -> SymbolSequence {
        match &self.kind {
            CantorKind::FullShift { k } => {
                let left = (0..16).map(|_| rng.gen_range(0..*k) as Symbol).collect();
                let right = (0..16).map(|_| rng.gen_range(0..*k) as Symbol).collect();
                SymbolSequence::periodic(window, left, right, *k)
            }
            _ => {
                let k = adjacency.size() as u32;
                SymbolSequence::two_sided(window, Extension::GraphPath { adjacency, seed }, k)
            }
        }
    }

    /// Distinct points of the cylinder of `base` on `|i| <= fixed` that differ
    /// on the index range `lo..=hi` (digit range for odometers). All variants
    /// are enumerated when there are at most `cap`; otherwise `cap` distinct
    /// variants are drawn with the seeded generator.
    pub fn cylinder_variants(
        &self,
        base: &SymbolSequence,
        fixed: usize,
        lo: isize,
        hi: isize,
        cap: usize,
        seed: u64,
    ) -> Vec<SymbolSequence> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match &self.kind {
            CantorKind::FullShift { .. } | CantorKind::Sft { .. } => {
                let adjacency = self.adjacency().expect("shift adjacency");
                let w = base.radius() as isize;
                let f = fixed as isize;
                let (lo, hi) = (lo.max(-w), hi.min(w));
                let grow = |start: Symbol, steps: isize, forward: bool| -> Option<Vec<Vec<Symbol>>> {
                    let mut paths: Vec<Vec<Symbol>> = vec![vec![]];
                    for _ in 0..steps.max(0) {
                        let mut next = Vec::new();
                        for p in &paths {
                            let last = *p.last().unwrap_or(&start);
                            let options: Vec<Symbol> = if forward {
                                adjacency.successors(last).collect()
                            } else {
                                adjacency.predecessors(last).collect()
                            };
                            for s in options {
                                let mut q = p.clone();
                                q.push(s);
                                next.push(q);
                            }
                            if next.len() > cap {
                                return None;
                            }
                        }
                        paths = next;
                    }
                    Some(paths)
                };
                let core: Vec<Symbol> = (-f..=f).map(|i| base.symbol(i).expect("inside window")).collect();
                let assemble = |left: &[Symbol], right: &[Symbol], rng: &mut ChaCha8Rng, variant: u64| {
                    let mut window: Vec<Symbol> = Vec::with_capacity(base.window.len());
                    let mut l: Vec<Symbol> = left.to_vec();
                    let mut first = *l.last().unwrap_or(&core[0]);
                    while (l.len() as isize) < w - f {
                        first = adjacency.predecessors(first).next().expect("non-empty column");
                        l.push(first);
                    }
                    window.extend(l.iter().rev());
                    window.extend(&core);
                    let mut last = *right.last().unwrap_or(&core[core.len() - 1]);
                    window.extend(right);
                    while window.len() < base.window.len() {
                        last = adjacency.successors(last).next().expect("non-empty row");
                        window.push(last);
                    }
                    self.shift_point(window, adjacency.clone(), seed ^ variant, rng)
                };
                let lefts = grow(core[0], -f - lo, false);
                let rights = grow(core[core.len() - 1], hi - f, true);
                match (lefts, rights) {
                    (Some(ls), Some(rs)) if ls.len().saturating_mul(rs.len()) <= cap => {
                        let mut out = Vec::with_capacity(ls.len() * rs.len());
                        for l in &ls {
                            for r in &rs {
                                let v = out.len() as u64;
                                out.push(assemble(l, r, &mut rng, v));
                            }
                        }
                        out
                    }
                    _ => {
                        let mut seen = BTreeSet::new();
                        let mut out = Vec::with_capacity(cap);
                        let mut attempts = 0usize;
                        while out.len() < cap && attempts < cap * 8 {
                            attempts += 1;
                            let p = self.random_in_cylinder(base, fixed, rng.gen());
                            let key: Vec<Symbol> = (lo..=hi).map(|i| p.symbol(i).expect("inside window")).collect();
                            if seen.insert(key) {
                                out.push(p);
                            }
                        }
                        out
                    }
                }
            }
            CantorKind::Substitution { .. } => {
                let mut seen = BTreeSet::new();
                let mut out = Vec::new();
                for attempt in 0..cap.saturating_mul(8).max(64) {
                    let p = self.random_in_cylinder(base, fixed, seed.wrapping_add(attempt as u64));
                    let key: Vec<Symbol> = (lo..=hi).filter_map(|i| p.symbol(i)).collect();
                    if seen.insert(key) {
                        out.push(p);
                        if out.len() >= cap {
                            break;
                        }
                    }
                }
                out
            }
            CantorKind::Odometer { bases } => {
                let top = (hi.max(0) as usize).min(bases.len() - 1);
                let free: Vec<usize> = (fixed + 1..=top).collect();
                let total = free.iter().try_fold(1usize, |acc, &i| acc.checked_mul(bases[i] as usize));
                match total {
                    Some(total) if total <= cap => (0..total)
                        .map(|mut v| {
                            let mut digits = base.window();
                            for &i in &free {
                                digits[i] = (v % bases[i] as usize) as Symbol;
                                v /= bases[i] as usize;
                            }
                            SymbolSequence::digits(digits, bases.clone())
                        })
                        .collect(),
                    _ => {
                        let mut seen = BTreeSet::new();
                        let mut out = Vec::new();
                        let mut attempts = 0usize;
                        while out.len() < cap && attempts < cap * 8 {
                            attempts += 1;
                            let mut digits = base.window();
                            for &i in &free {
                                digits[i] = rng.gen_range(0..bases[i]) as Symbol;
                            }
                            if seen.insert(digits.clone()) {
                                out.push(SymbolSequence::digits(digits, bases.clone()));
                            }
                        }
                        out
                    }
                }
            }
        }
    }

    /// All admissible words of length `len` (for odometers: digit words of
    /// the first `len` digits). Returns an error above `cap` words.
    pub fn language(&self, len: usize, cap: usize) -> Result<Vec<Vec<Symbol>>> {
        let too_many = || Error::Capacity(format!("language of length {len} exceeds {cap} words"));
        match &self.kind {
            CantorKind::FullShift { .. } | CantorKind::Sft { .. } => {
                let adjacency = self.adjacency().expect("shift adjacency");
                let mut words: Vec<Vec<Symbol>> =
                    if len == 0 { vec![vec![]] } else { (0..adjacency.size() as Symbol).map(|s| vec![s]).collect() };
                for _ in 1..len {
                    let mut next = Vec::new();
                    for w in &words {
                        for s in adjacency.successors(*w.last().expect("non-empty")) {
                            let mut v = w.clone();
                            v.push(s);
                            next.push(v);
                            if next.len() > cap {
                                return Err(too_many());
                            }
                        }
                    }
                    words = next;
                }
                Ok(words)
            }
            CantorKind::Substitution { .. } => {
                let word = self.language_word().expect("substitution word");
                let set: BTreeSet<&[Symbol]> = word.windows(len.max(1)).collect();
                if set.len() > cap {
                    return Err(too_many());
                }
                Ok(set.into_iter().map(|w| w[..len].to_vec()).collect())
            }
            CantorKind::Odometer { bases } => {
                let depth = len.min(bases.len());
                let total: usize = bases[..depth].iter().map(|&b| b as usize).product();
                if total > cap {
                    return Err(too_many());
                }
                let mut words = Vec::with_capacity(total);
                for mut v in 0..total {
                    let mut w = Vec::with_capacity(depth);
                    for &b in &bases[..depth] {
                        w.push((v % b as usize) as Symbol);
                        v /= b as usize;
                    }
                    words.push(w);
                }
                Ok(words)
            }
        }
    }

    /// Membership of a finite word in the language.
    pub fn admits(&self, word: &[Symbol]) -> bool {
        match &self.kind {
            CantorKind::FullShift { k } => word.iter().all(|&s| (s as u32) < *k),
            CantorKind::Sft { adjacency } => {
                word.iter().all(|&s| (s as usize) < adjacency.size())
                    && word.windows(2).all(|p| adjacency.allows(p[0], p[1]))
            }
            CantorKind::Substitution { .. } => {
                let text = self.language_word().expect("substitution word");
                word.is_empty() || text.windows(word.len()).any(|w| w == word)
            }
            CantorKind::Odometer { bases } => {
                word.len() <= bases.len() && word.iter().zip(bases).all(|(&d, &b)| (d as u32) < b)
            }
        }
    }
}

/// Adds `n` (possibly negative) to a little-endian mixed-radix number; carry
/// or borrow past the last digit is dropped.
pub(crate) fn odometer_add<C>(digits: &mut C, bases: &[u32], n: i64)
where
    C: std::ops::IndexMut<usize, Output = Symbol>,
{
    let modulus: i128 = bases.iter().map(|&b| b as i128).product();
    let mut value: i128 = 0;
    for (i, &b) in bases.iter().enumerate().rev() {
        value = value * b as i128 + digits[i] as i128;
    }
    let mut value = (value + n as i128).rem_euclid(modulus);
    for (i, &b) in bases.iter().enumerate() {
        digits[i] = (value % b as i128) as Symbol;
        value /= b as i128;
    }
}

/// Little-endian digits to integer.
pub(crate) fn odometer_value(digits: &[Symbol], bases: &[u32]) -> u128 {
    digits.iter().zip(bases).rev().fold(0u128, |acc, (&d, &b)| acc * b as u128 + d as u128)
}

fn substitution_is_primitive(rules: &[Vec<Symbol>]) -> bool {
    let k = rules.len();
    let mut m = vec![vec![false; k]; k];
    for (a, w) in rules.iter().enumerate() {
        for &b in w {
            m[a][b as usize] = true;
        }
    }
    let mut power = m.clone();
    for _ in 0..2 * k {
        if power.iter().all(|r| r.iter().all(|&x| x)) {
            return true;
        }
        let mut next = vec![vec![false; k]; k];
        for i in 0..k {
            for j in 0..k {
                next[i][j] = (0..k).any(|l| power[i][l] && m[l][j]);
            }
        }
        power = next;
    }
    power.iter().all(|r| r.iter().all(|&x| x))
}

/// Builds a two-sided legal word `σ^n(b) . σ^n(a)` of at least `len`
/// symbols, where `b a` is a two-letter word occurring in the language.
fn substitution_word(rules: &[Vec<Symbol>], len: usize) -> Vec<Symbol> {
    let apply = |w: &[Symbol]| -> Vec<Symbol> { w.iter().flat_map(|&a| rules[a as usize].iter().copied()).collect() };
    let mut seed_word = vec![0 as Symbol];
    while seed_word.len() < 2 {
        seed_word = apply(&seed_word);
    }
    let (mut left, mut right) = (vec![seed_word[0]], vec![seed_word[1]]);
    while left.len() + right.len() < len {
        left = apply(&left);
        right = apply(&right);
    }
    left.extend(right);
    left
}

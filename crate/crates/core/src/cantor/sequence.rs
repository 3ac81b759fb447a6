use std::collections::VecDeque;
use std::sync::Arc;

use super::system::Adjacency;

pub type Symbol = u8;

/// Rule that produces symbols beyond the stored window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    /// `left` is read outward from index `-W-1`, `right` outward from `W+1`;
    /// both repeat cyclically. The phases record how much of each word has
    /// already been pulled into the window.
    Periodic { left: Vec<Symbol>, right: Vec<Symbol>, left_phase: usize, right_phase: usize },
    /// Path in a vertex-shift graph. Fresh symbols are the lexicographically
    /// smallest admissible successor (right) or predecessor (left).
    GraphPath { adjacency: Arc<Adjacency>, seed: u64 },
    /// Mixed-radix digits, least significant first. The window holds the
    /// digits themselves and is indexed `0..N`.
    DigitStream { bases: Vec<u32> },
}

/// A two-sided symbol sequence stored as a finite window plus an extension
/// rule.
///
/// Symbols pushed out of the window by shifting are kept on spill stacks, so
/// shifting back and forth is exact on the whole window, not only on the
/// shared part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolSequence {
    pub(crate) window: VecDeque<Symbol>,
    pub(crate) left_spill: Vec<Symbol>,
    pub(crate) right_spill: Vec<Symbol>,
    pub(crate) extension: Extension,
    pub(crate) alphabet_size: u32,
}

impl SymbolSequence {
    /// Two-sided sequence with window indices `-W..=W` where `W = (len-1)/2`.
    pub fn two_sided(window: Vec<Symbol>, extension: Extension, alphabet_size: u32) -> Self {
        debug_assert!(window.len() % 2 == 1, "two-sided windows have odd length");
        Self { window: window.into(), left_spill: Vec::new(), right_spill: Vec::new(), extension, alphabet_size }
    }

    /// Window with cyclically repeated tails on both sides.
    pub fn periodic(window: Vec<Symbol>, left: Vec<Symbol>, right: Vec<Symbol>, alphabet_size: u32) -> Self {
        Self::two_sided(window, Extension::Periodic { left, right, left_phase: 0, right_phase: 0 }, alphabet_size)
    }

    pub fn digits(digits: Vec<Symbol>, bases: Vec<u32>) -> Self {
        let alphabet_size = bases.iter().copied().max().unwrap_or(2);
        Self {
            window: digits.into(),
            left_spill: Vec::new(),
            right_spill: Vec::new(),
            extension: Extension::DigitStream { bases },
            alphabet_size,
        }
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn extension(&self) -> &Extension {
        &self.extension
    }

    pub fn is_digit_stream(&self) -> bool {
        matches!(self.extension, Extension::DigitStream { .. })
    }

    /// Window radius `W`; for digit streams the number of digits.
    pub fn radius(&self) -> usize {
        if self.is_digit_stream() {
            self.window.len()
        } else {
            (self.window.len() - 1) / 2
        }
    }

    /// Smallest and largest stored index.
    pub fn index_range(&self) -> (isize, isize) {
        if self.is_digit_stream() {
            (0, self.window.len() as isize - 1)
        } else {
            let w = self.radius() as isize;
            (-w, w)
        }
    }

    pub fn symbol(&self, index: isize) -> Option<Symbol> {
        let (lo, hi) = self.index_range();
        if index < lo || index > hi {
            return None;
        }
        self.window.get((index - lo) as usize).copied()
    }

    /// Window contents in index order.
    pub fn window(&self) -> Vec<Symbol> {
        self.window.iter().copied().collect()
    }

    /// Symbols at indices `from..from+len`.
    pub fn word(&self, from: isize, len: usize) -> Option<Vec<Symbol>> {
        (0..len as isize).map(|j| self.symbol(from + j)).collect()
    }

    /// True when both windows agree on `|i| <= radius` (or on the first
    /// `radius + 1` digits).
    pub fn agrees_within(&self, other: &Self, radius: usize) -> bool {
        let r = radius as isize;
        let (lo, hi) = self.index_range();
        (lo.max(-r)..=hi.min(r)).all(|i| self.symbol(i) == other.symbol(i))
    }

    /// Moves the window one step to the right along the sequence: the result
    /// satisfies `out_i = self_{i+1}`.
    pub(crate) fn advance(&mut self) {
        let dropped = self.window.pop_front().expect("non-empty window");
        let fresh = match self.right_spill.pop() {
            Some(s) => s,
            None => self.fresh_right(),
        };
        self.left_spill.push(dropped);
        self.window.push_back(fresh);
    }

    /// Inverse of [`advance`](Self::advance): `out_i = self_{i-1}`.
    pub(crate) fn retreat(&mut self) {
        let dropped = self.window.pop_back().expect("non-empty window");
        let fresh = match self.left_spill.pop() {
            Some(s) => s,
            None => self.fresh_left(),
        };
        self.right_spill.push(dropped);
        self.window.push_front(fresh);
    }

    fn fresh_right(&mut self) -> Symbol {
        let last = *self.window.back().expect("non-empty window");
        match &mut self.extension {
            Extension::Periodic { right, right_phase, .. } => {
                let s = right[*right_phase % right.len()];
                *right_phase += 1;
                s
            }
            Extension::GraphPath { adjacency, .. } => {
                adjacency.successors(last).next().expect("adjacency rows are non-empty")
            }
            Extension::DigitStream { .. } => unreachable!("digit streams are not shifted"),
        }
    }

    fn fresh_left(&mut self) -> Symbol {
        let first = *self.window.front().expect("non-empty window");
        match &mut self.extension {
            Extension::Periodic { left, left_phase, .. } => {
                let s = left[*left_phase % left.len()];
                *left_phase += 1;
                s
            }
            Extension::GraphPath { adjacency, .. } => {
                adjacency.predecessors(first).next().expect("adjacency columns are non-empty")
            }
            Extension::DigitStream { .. } => unreachable!("digit streams are not shifted"),
        }
    }

    /// Regenerates what the extension rule would put in the window from the
    /// spill-free state and reports whether it matches. Only meaningful for
    /// freshly constructed sequences.
    pub fn extension_consistent(&self) -> bool {
        match &self.extension {
            Extension::Periodic { left, right, .. } => !left.is_empty() && !right.is_empty(),
            Extension::GraphPath { adjacency, .. } => {
                self.window.iter().zip(self.window.iter().skip(1)).all(|(&a, &b)| adjacency.allows(a, b))
            }
            Extension::DigitStream { bases } => {
                bases.len() == self.window.len() && self.window.iter().zip(bases).all(|(&d, &b)| (d as u32) < b)
            }
        }
    }
}

use std::fmt;

use crate::error::{Error, Result};

/// Map `f: {1..m} -> {1..n}` with `|f(i+1) - f(i)| <= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    values: Vec<usize>,
    range: usize,
}

impl Pattern {
    /// Fails with the 1-based index `i` of the first step `f(i) -> f(i+1)`
    /// larger than one, or of the first value below 1.
    pub fn new(values: Vec<usize>) -> Result<Self> {
        if let Some(i) = values.iter().position(|&v| v == 0) {
            return Err(Error::PatternRange { index: i + 1 });
        }
        if let Some(i) = values.windows(2).position(|w| w[0].abs_diff(w[1]) > 1) {
            return Err(Error::PatternStep { index: i + 1 });
        }
        let range = values.iter().copied().max().unwrap_or(0);
        Ok(Self { values, range })
    }

    pub fn identity(n: usize) -> Self {
        Self { values: (1..=n).collect(), range: n }
    }

    /// Parses `"1,2,3,2"`.
    pub fn parse(text: &str) -> Result<Self> {
        let values = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Config(format!("pattern value `{}` is not a positive integer", s.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest value `n`.
    pub fn range(&self) -> usize {
        self.range
    }

    /// `f(i)` for 1-based `i`.
    pub fn at(&self, i: usize) -> usize {
        self.values[i - 1]
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(usize::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The `k`-fold pattern `{1..2k+5} -> {1..7}` for odd `k >= 3`.
pub fn kfold(k: usize) -> Result<Pattern> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::Domain(format!("k-fold patterns need an odd k >= 3, got k = {k}")));
    }
    let m = 2 * k + 5;
    let values = (1..=m)
        .map(|i| match i {
            i if i <= 5 => i,
            i if i == m => 7,
            i if i == m - 1 => 6,
            i if i % 2 == 0 => 4,
            i if i % 4 == 3 => 3,
            _ => 5,
        })
        .collect();
    Pattern::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_examples() {
        assert!(Pattern::new(vec![1, 2, 3, 2, 1]).is_ok());
        assert_eq!(Pattern::new(vec![1, 3]), Err(Error::PatternStep { index: 1 }));
        assert!(Pattern::new(vec![1, 1, 1]).is_ok());
    }

    #[test]
    fn kfold_examples() {
        assert_eq!(kfold(3).unwrap().values(), &[1, 2, 3, 4, 5, 4, 3, 4, 5, 6, 7]);
        let five = kfold(5).unwrap();
        assert_eq!(five.len(), 15);
        assert_eq!(&five.values()[5..13], &[4, 3, 4, 5, 4, 3, 4, 5]);
        assert!(kfold(4).is_err());
        assert!(kfold(1).is_err());
    }
}

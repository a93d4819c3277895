//! Words over `{1, 2}`, the Fibonacci shift and edge-shift periodic points.

use num::{BigInt, One, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubshiftError {
    #[error("word `{0}` contains the forbidden block 11")]
    ForbiddenBlock(String),
    #[error("word `{0}` uses a symbol outside {{1, 2}}")]
    BadSymbol(String),
    #[error("adjacency matrix is not square")]
    NotSquare,
    #[error("cannot parse adjacency matrix `{0}`")]
    Parse(String),
}

/// Finite word over the alphabet `{1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(symbols: Vec<u8>) -> Result<Self, SubshiftError> {
        let w = Word(symbols);
        if w.0.iter().any(|&s| s != 1 && s != 2) {
            return Err(SubshiftError::BadSymbol(w.to_string()));
        }
        Ok(w)
    }

    pub fn parse(text: &str) -> Result<Self, SubshiftError> {
        let symbols = text
            .chars()
            .map(|ch| match ch {
                '1' => Ok(1),
                '2' => Ok(2),
                _ => Err(SubshiftError::BadSymbol(text.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word(symbols))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word([self.0.as_slice(), other.0.as_slice()].concat())
    }

    pub fn count(&self, symbol: u8) -> usize {
        self.0.iter().filter(|&&s| s == symbol).count()
    }

    pub fn is_fibonacci_admissible(&self) -> bool {
        !self.0.windows(2).any(|p| p == [1, 1])
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// All length-`n` words over `{1, 2}` without two consecutive 1s, in
/// lexicographic order.
pub fn fib_language(n: usize) -> Vec<Word> {
    let mut words = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(words.len() * 2);
        for w in &words {
            for s in [1u8, 2] {
                if s == 1 && w.last() == Some(&1) {
                    continue;
                }
                let mut v: Vec<u8> = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        words = next;
    }
    words.into_iter().map(Word).collect()
}

/// `l_0, ..., l_n` with `l_0 = 0`, `l_1 = 1`.
pub fn fib_numbers(n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(), BigInt::one()];
    while out.len() <= n {
        let k = out.len();
        out.push(&out[k - 1] + &out[k - 2]);
    }
    out.truncate(n + 1);
    out
}

/// Collapses each `12` block of an admissible word to `1`.
///
/// The scan keeps every `2`; a `1` swallows the `2` that follows it, and a
/// final `1` is kept as is. The result spells the inverse branches (`1` for
/// the second-iterate branch, `2` for the first-iterate branch) whose
/// composition produces the cylinder of `w`.
pub fn vee_map(w: &Word) -> Result<Word, SubshiftError> {
    if !w.is_fibonacci_admissible() {
        return Err(SubshiftError::ForbiddenBlock(w.to_string()));
    }
    let s = w.symbols();
    let mut out = Vec::with_capacity(s.len());
    let mut i = 0;
    while i < s.len() {
        out.push(s[i]);
        i += if s[i] == 1 { 2 } else { 1 };
    }
    Ok(Word(out))
}

/// Square matrix of edge counts of a directed graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjMatrix {
    k: usize,
    rows: Vec<Vec<u64>>,
}

impl AdjMatrix {
    pub fn new(rows: Vec<Vec<u64>>) -> Result<Self, SubshiftError> {
        let k = rows.len();
        if k == 0 || rows.iter().any(|r| r.len() != k) {
            return Err(SubshiftError::NotSquare);
        }
        Ok(AdjMatrix { k, rows })
    }

    pub fn identity(k: usize) -> Self {
        let rows = (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect();
        AdjMatrix { k, rows }
    }

    /// Parses rows separated by `;` with comma-separated entries, e.g. `0,1;1,1`.
    pub fn parse(text: &str) -> Result<Self, SubshiftError> {
        let rows = text
            .split(';')
            .map(|r| {
                r.split(',')
                    .map(|e| e.trim().parse::<u64>())
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| SubshiftError::Parse(text.to_string()))?;
        Self::new(rows)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    fn big(&self) -> Vec<Vec<BigInt>> {
        self.rows.iter().map(|r| r.iter().map(|&e| BigInt::from(e)).collect()).collect()
    }
}

/// `[[0, 1], [1, 1]]`, the golden-mean graph.
pub fn fib_adjacency() -> AdjMatrix {
    AdjMatrix { k: 2, rows: vec![vec![0, 1], vec![1, 1]] }
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let k = a.len();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| (0..k).fold(BigInt::zero(), |acc, l| acc + &a[i][l] * &b[l][j]))
                .collect()
        })
        .collect()
}

/// `tr(A^m)` for `m = 0..=n`.
pub fn matrix_power_traces(a: &AdjMatrix, n: usize) -> Vec<BigInt> {
    let base = a.big();
    let mut power: Vec<Vec<BigInt>> = (0..a.k)
        .map(|i| (0..a.k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m > 0 {
            power = mat_mul(&power, &base);
        }
        out.push((0..a.k).fold(BigInt::zero(), |acc, i| acc + &power[i][i]));
    }
    out
}

/// Periodic-point counts `N_1..N_n` of the edge shift, as traces of powers.
pub fn sft_periodic_counts(a: &AdjMatrix, n: usize) -> Vec<BigInt> {
    matrix_power_traces(a, n).into_iter().skip(1).collect()
}

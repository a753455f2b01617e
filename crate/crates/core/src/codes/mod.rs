//! Binary codes: parsing, distance profiles, the symmetric-distance bounds,
//! tightness, and the two known tight constructions.
//!
//! For constant-weight words `d_H(x, y) = 2 d_J(x, y)` with
//! `d_J(x, y) = w - |x ∩ y|`. A degree set `S` is symmetric when `a ∈ S`
//! implies `m - a ∈ S`, where `m` is the weight under the Johnson metric and
//! the length under the Hamming metric.

mod clique;
mod hadamard;
mod rank;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, Integer};
use crate::schemepoly::SchemeParams;

pub use clique::{brute_force_max, MaxCode, BRUTE_FORCE_MAX_LENGTH};
pub use hadamard::{code_to_hadamard, hadamard_to_code, sylvester_hadamard, HadamardMatrix};
pub use rank::{verify_rank_s2, RankCheck, RANK_CHECK_MAX_LENGTH};

/// A binary word packed into 64-bit blocks; position `j` is bit `j % 64` of
/// block `j / 64`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    blocks: Vec<u64>,
}

impl Word {
    pub fn zeros(length: usize) -> Self {
        Word {
            blocks: vec![0; length.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut w = Word::zeros(bits.len());
        for (j, &b) in bits.iter().enumerate() {
            if b {
                w.set(j);
            }
        }
        w
    }

    /// Word of the given length with ones at the listed (0-based) positions.
    pub fn from_support(length: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let mut w = Word::zeros(length);
        for j in support {
            w.set(j);
        }
        w
    }

    pub fn set(&mut self, j: usize) {
        self.blocks[j / 64] |= 1 << (j % 64);
    }

    pub fn get(&self, j: usize) -> bool {
        self.blocks[j / 64] >> (j % 64) & 1 == 1
    }

    pub fn weight(&self) -> u32 {
        self.blocks.iter().map(|b| b.count_ones()).sum()
    }

    pub fn hamming(&self, other: &Word) -> u32 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a ^ b).count_ones())
            .sum()
    }

    pub fn intersection(&self, other: &Word) -> u32 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    pub fn render(&self, length: usize) -> String {
        (0..length).map(|j| if self.get(j) { '1' } else { '0' }).collect()
    }
}

/// A set of distinct equal-length binary words, kept in first-seen order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    length: usize,
    words: Vec<Word>,
    weight: Option<u32>,
}

impl Code {
    /// Builds a code, dropping repeated words. Rejects an empty word list.
    pub fn new(length: usize, words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut seen = HashSet::new();
        let words: Vec<Word> = words
            .into_iter()
            .filter(|w| seen.insert(w.clone()))
            .collect();
        if words.is_empty() {
            return Err(Error::Invalid("code has no words".into()));
        }
        let expected_blocks = length.div_ceil(64);
        if words.iter().any(|w| w.blocks.len() != expected_blocks) {
            return Err(Error::Invalid("words differ in length".into()));
        }
        let first = words[0].weight();
        let weight = words.iter().all(|w| w.weight() == first).then_some(first);
        Ok(Code {
            length,
            words,
            weight,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// The common weight, if every word has the same popcount.
    pub fn weight(&self) -> Option<u32> {
        self.weight
    }

    /// The code with word `index` removed.
    pub fn without(&self, index: usize) -> Result<Code> {
        let words = self
            .words
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != index)
            .map(|(_, w)| w.clone());
        Code::new(self.length, words)
    }

    /// One word per line, each followed by a newline.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.words.len() * (self.length + 1));
        for w in &self.words {
            out.push_str(&w.render(self.length));
            out.push('\n');
        }
        out
    }
}

/// Parses the code file format: one word per line over `{0,1}`; lines whose
/// first non-blank character is `#` and blank lines are skipped.
pub fn load_code(source: &str) -> Result<Code> {
    let mut length = None;
    let mut words = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bits: Vec<bool> = line
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse {
                    line: idx + 1,
                    message: format!("illegal character {other:?}"),
                }),
            })
            .collect::<Result<_>>()?;
        match length {
            None => length = Some(bits.len()),
            Some(l) if l != bits.len() => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("ragged line: length {} after length {l}", bits.len()),
                })
            }
            _ => {}
        }
        words.push(Word::from_bits(&bits));
    }
    let Some(length) = length else {
        return Err(Error::Parse {
            line: 0,
            message: "no codewords".into(),
        });
    };
    Code::new(length, words)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Hamming,
    Johnson,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Hamming => "hamming",
            Metric::Johnson => "johnson",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceProfile {
    pub metric: Metric,
    pub degree_set: BTreeSet<u64>,
    /// Point `m` of the reflection `a -> m - a` used for the symmetry test.
    pub reflection: u64,
    pub symmetric: bool,
}

impl DistanceProfile {
    pub fn degree(&self) -> usize {
        self.degree_set.len()
    }
}

fn is_symmetric(set: &BTreeSet<u64>, reflection: u64) -> bool {
    set.iter()
        .all(|&a| a <= reflection && set.contains(&(reflection - a)))
}

/// Pairwise distance set of `c` under `metric`.
///
/// The Johnson metric needs constant weight `w` and length `2w`.
pub fn distance_profile(c: &Code, metric: Metric) -> Result<DistanceProfile> {
    let reflection = match metric {
        Metric::Hamming => c.length as u64,
        Metric::Johnson => {
            let w = c.weight.ok_or_else(|| {
                Error::Domain("Johnson metric needs a constant-weight code".into())
            })?;
            if c.length != 2 * w as usize {
                return Err(Error::Domain(format!(
                    "Johnson metric needs length 2w, got length {} and weight {w}",
                    c.length
                )));
            }
            w as u64
        }
    };
    let mut degree_set = BTreeSet::new();
    for (i, x) in c.words.iter().enumerate() {
        for y in &c.words[i + 1..] {
            let d = match metric {
                Metric::Hamming => x.hamming(y),
                Metric::Johnson => reflection as u32 - x.intersection(y),
            };
            degree_set.insert(d as u64);
        }
    }
    Ok(DistanceProfile {
        metric,
        symmetric: is_symmetric(&degree_set, reflection),
        degree_set,
        reflection,
    })
}

fn parity_binomial_sum(n: u64, s: u64) -> Integer {
    (s % 2..=s).step_by(2).map(|i| binomial(n, i)).sum()
}

/// `sum_{i <= s, i ≡ s (2)} C(n, i)`, for binary codes of length `n`.
pub fn bound_hamming(n: u64, s: u64) -> Result<Integer> {
    if s == 0 || s > n {
        return Err(Error::out_of_range("degree s", s as i64, 1, n as i64));
    }
    Ok(parity_binomial_sum(n, s))
}

/// `C(2n - 1, s)`, for weight-`n` codes of length `2n`.
pub fn bound_johnson(n: u64, s: u64) -> Result<Integer> {
    if s == 0 || s >= n {
        return Err(Error::out_of_range("degree s", s as i64, 1, n as i64 - 1));
    }
    Ok(binomial(2 * n - 1, s))
}

/// `sum_{i <= s, i ≡ s (2)} m_i` for a Q-bipartite scheme.
pub fn bound_scheme(params: SchemeParams, s: u64) -> Result<Integer> {
    if s == 0 || s >= params.n {
        return Err(Error::out_of_range("degree s", s as i64, 1, params.n as i64 - 1));
    }
    (s % 2..=s)
        .step_by(2)
        .map(|i| params.multiplicity(i))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tightness {
    NotSymmetric,
    BelowBound { gap: Integer },
    Tight,
    /// Never produced by a valid code; reported rather than hidden.
    ExceedsBound { excess: Integer },
}

impl Tightness {
    pub fn as_str(&self) -> &'static str {
        match self {
            Tightness::NotSymmetric => "not_symmetric",
            Tightness::BelowBound { .. } => "below_bound",
            Tightness::Tight => "tight",
            Tightness::ExceedsBound { .. } => "exceeds_bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightnessReport {
    pub profile: DistanceProfile,
    /// The applicable bound; absent when the code is not symmetric.
    pub bound: Option<Integer>,
    pub verdict: Tightness,
}

/// Compares `|C|` against the bound that applies to its metric.
pub fn check_tight(c: &Code, metric: Metric) -> Result<TightnessReport> {
    let profile = distance_profile(c, metric)?;
    if !profile.symmetric {
        return Ok(TightnessReport {
            profile,
            bound: None,
            verdict: Tightness::NotSymmetric,
        });
    }
    let s = profile.degree() as u64;
    let bound = match metric {
        Metric::Hamming => bound_hamming(profile.reflection, s)?,
        Metric::Johnson => bound_johnson(profile.reflection, s)?,
    };
    let gap = &bound - Integer::from(c.len());
    let verdict = if gap.is_zero() {
        Tightness::Tight
    } else if gap.is_positive() {
        Tightness::BelowBound { gap }
    } else {
        Tightness::ExceedsBound { excess: -gap }
    };
    Ok(TightnessReport {
        profile,
        bound: Some(bound),
        verdict,
    })
}

/// Lexicographically ordered `k`-subsets of `0..m`.
pub(crate) fn combinations(m: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (k <= m).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < m - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// All weight-`n` words of length `2n` whose support contains `anchor`
/// (1-based), in lexicographic order of supports.
pub fn construct_ekr(n: u64, anchor: u64) -> Result<Code> {
    if n < 2 {
        return Err(Error::out_of_range("n", n as i64, 2, i64::MAX));
    }
    if anchor == 0 || anchor > 2 * n {
        return Err(Error::out_of_range("anchor", anchor as i64, 1, 2 * n as i64));
    }
    let len = 2 * n as usize;
    let a = anchor as usize - 1;
    let words = combinations(len, n as usize)
        .filter(|sub| sub.contains(&a))
        .map(|sub| Word::from_support(len, sub));
    Code::new(len, words)
}

//! Hadamard matrices and their correspondence with degree-1 tight codes.
//!
//! A normalized Hadamard matrix of order `2n` (first row all ones) has every
//! other row balanced, and two such rows agree in exactly `n` positions, so
//! the rows below the first are `2n - 1` weight-`n` words with
//! `|x ∩ y| = n/2`, i.e. Johnson degree set `{n/2}`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::{distance_profile, Code, Metric, Word};

/// Square `±1` matrix; entries stored as `i8`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardMatrix {
    rows: Vec<Vec<i8>>,
}

impl HadamardMatrix {
    /// Wraps a square `±1` array without checking orthogonality.
    pub fn from_rows(rows: Vec<Vec<i8>>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::Invalid("empty matrix".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::Invalid(format!(
                    "row {} has {} entries, expected {order}",
                    i + 1,
                    row.len()
                )));
            }
            if row.iter().any(|&e| e != 1 && e != -1) {
                return Err(Error::Invalid(format!("row {} has an entry other than ±1", i + 1)));
            }
        }
        Ok(HadamardMatrix { rows })
    }

    /// Parses rows of `+` / `-` characters (U+2212 is accepted for `-`);
    /// blank lines and `#` comment lines are skipped.
    pub fn parse(source: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (idx, raw) in source.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .chars()
                .map(|ch| match ch {
                    '+' => Ok(1i8),
                    '-' | '\u{2212}' => Ok(-1i8),
                    other => Err(Error::Parse {
                        line: idx + 1,
                        message: format!("illegal character {other:?}"),
                    }),
                })
                .collect::<Result<Vec<i8>>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: "no matrix rows".into(),
            });
        }
        HadamardMatrix::from_rows(rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.extend(row.iter().map(|&e| if e == 1 { '+' } else { '-' }));
            out.push('\n');
        }
        out
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.rows
    }

    /// Pairs of distinct rows (0-based) whose inner product is nonzero.
    pub fn orthogonality_violations(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for i in 0..self.rows.len() {
            for j in i + 1..self.rows.len() {
                let dot: i64 = self.rows[i]
                    .iter()
                    .zip(&self.rows[j])
                    .map(|(&a, &b)| (a * b) as i64)
                    .sum();
                if dot != 0 {
                    bad.push((i, j));
                }
            }
        }
        bad
    }

    /// `H H^T = order * I`. The diagonal holds automatically for `±1` rows.
    pub fn is_hadamard(&self) -> bool {
        self.orthogonality_violations().is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.rows[0].iter().all(|&e| e == 1)
    }
}

/// Order-`2^k` Sylvester matrix `[[H, H], [H, -H]]`.
pub fn sylvester_hadamard(k: u32) -> HadamardMatrix {
    let mut rows = vec![vec![1i8]];
    for _ in 0..k {
        let m = rows.len();
        let mut next = vec![vec![0i8; 2 * m]; 2 * m];
        for i in 0..m {
            for j in 0..m {
                let e = rows[i][j];
                next[i][j] = e;
                next[i][j + m] = e;
                next[i + m][j] = e;
                next[i + m][j + m] = -e;
            }
        }
        rows = next;
    }
    HadamardMatrix { rows }
}

fn describe_violations(v: &[(usize, usize)]) -> String {
    v.iter()
        .take(8)
        .map(|(i, j)| format!("({}, {})", i + 1, j + 1))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Rows below the first of a normalized Hadamard matrix, with `+1 -> 1` and
/// `-1 -> 0`.
pub fn hadamard_to_code(h: &HadamardMatrix) -> Result<Code> {
    let order = h.order();
    if order < 2 || order % 2 == 1 {
        return Err(Error::Invalid(format!("order {order} is not of the form 2n")));
    }
    if !h.is_normalized() {
        return Err(Error::Invalid("first row is not all ones".into()));
    }
    let bad = h.orthogonality_violations();
    if !bad.is_empty() {
        return Err(Error::Invalid(format!(
            "rows are not orthogonal: {}",
            describe_violations(&bad)
        )));
    }
    let words = h.rows[1..].iter().map(|row| {
        Word::from_support(order, row.iter().enumerate().filter(|(_, &e)| e == 1).map(|(j, _)| j))
    });
    Code::new(order, words)
}

/// Stacks the all-ones row over the signed characteristic vectors of a
/// degree-1 tight code, then validates orthogonality.
pub fn code_to_hadamard(c: &Code) -> Result<HadamardMatrix> {
    let length = c.length();
    if length % 2 == 1 || length == 0 {
        return Err(Error::Domain(format!("length {length} is not of the form 2n")));
    }
    let n = length / 2;
    if c.weight() != Some(n as u32) {
        return Err(Error::Domain(format!("code is not constant weight {n}")));
    }
    if c.len() != length - 1 {
        return Err(Error::Domain(format!(
            "need {} codewords, found {}",
            length - 1,
            c.len()
        )));
    }
    if n % 2 == 1 && n > 1 {
        return Err(Error::Domain(format!(
            "degree set {{n/2}} is impossible for odd n = {n}"
        )));
    }
    let profile = distance_profile(c, Metric::Johnson)?;
    let expected: BTreeSet<u64> = if n >= 2 {
        BTreeSet::from([n as u64 / 2])
    } else {
        BTreeSet::new()
    };
    if profile.degree_set != expected {
        return Err(Error::Domain(format!(
            "degree set {:?} differs from {:?}",
            profile.degree_set, expected
        )));
    }
    let mut rows = vec![vec![1i8; length]];
    for w in c.words() {
        rows.push((0..length).map(|j| if w.get(j) { 1 } else { -1 }).collect());
    }
    let h = HadamardMatrix::from_rows(rows)?;
    let bad = h.orthogonality_violations();
    if !bad.is_empty() {
        return Err(Error::Invalid(format!(
            "rows are not orthogonal: {}",
            describe_violations(&bad)
        )));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{check_tight, construct_ekr, Tightness};

    #[test]
    fn sylvester_examples() {
        assert_eq!(sylvester_hadamard(0).rows(), &[vec![1]]);
        assert_eq!(sylvester_hadamard(1).rows(), &[vec![1, 1], vec![1, -1]]);
        for k in 0..=5 {
            let h = sylvester_hadamard(k);
            assert_eq!(h.order(), 1 << k);
            assert!(h.is_hadamard() && h.is_normalized());
        }
    }

    #[test]
    fn order_four_and_eight_codes() {
        let c4 = hadamard_to_code(&sylvester_hadamard(2)).unwrap();
        assert_eq!(c4.len(), 3);
        let p = distance_profile(&c4, Metric::Johnson).unwrap();
        assert_eq!(p.degree_set, BTreeSet::from([1]));
        let c8 = hadamard_to_code(&sylvester_hadamard(3)).unwrap();
        assert_eq!(c8.len(), 7);
        let p = distance_profile(&c8, Metric::Johnson).unwrap();
        assert_eq!(p.degree_set, BTreeSet::from([2]));
        assert_eq!(check_tight(&c8, Metric::Johnson).unwrap().verdict, Tightness::Tight);
    }

    #[test]
    fn order_two_is_degenerate() {
        let c = hadamard_to_code(&sylvester_hadamard(1)).unwrap();
        assert_eq!(c.len(), 1);
        assert!(distance_profile(&c, Metric::Johnson).unwrap().degree_set.is_empty());
        assert_eq!(code_to_hadamard(&c).unwrap(), sylvester_hadamard(1));
    }

    #[test]
    fn round_trips() {
        for k in 2..=4 {
            let h = sylvester_hadamard(k);
            let c = hadamard_to_code(&h).unwrap();
            assert_eq!(code_to_hadamard(&c).unwrap(), h);
            assert_eq!(hadamard_to_code(&code_to_hadamard(&c).unwrap()).unwrap(), c);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(code_to_hadamard(&construct_ekr(3, 1).unwrap()).is_err());
        assert!(hadamard_to_code(&sylvester_hadamard(0)).is_err());
        let mut rows = sylvester_hadamard(2).rows().to_vec();
        rows[0][0] = -1;
        let h = HadamardMatrix::from_rows(rows).unwrap();
        assert!(!h.is_normalized());
        assert!(hadamard_to_code(&h).is_err());
        let mut rows = sylvester_hadamard(2).rows().to_vec();
        rows[2] = rows[1].clone();
        let h = HadamardMatrix::from_rows(rows).unwrap();
        assert_eq!(h.orthogonality_violations(), vec![(1, 2)]);
        let err = hadamard_to_code(&h).unwrap_err().to_string();
        assert!(err.contains("(2, 3)"), "{err}");
    }

    #[test]
    fn text_format() {
        let h = sylvester_hadamard(2);
        let text = h.to_text();
        assert_eq!(text, "++++\n+-+-\n++--\n+--+\n");
        assert_eq!(HadamardMatrix::parse(&text).unwrap(), h);
        let unicode = "+ +\n".replace(' ', "\u{2212}");
        assert!(HadamardMatrix::parse(&unicode).is_err());
        assert_eq!(
            HadamardMatrix::parse("++\n+\u{2212}\n").unwrap(),
            sylvester_hadamard(1)
        );
        assert!(HadamardMatrix::parse("++\n+x\n").is_err());
        assert!(HadamardMatrix::parse("++\n+\n").is_err());
    }
}

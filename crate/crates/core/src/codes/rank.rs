//! Rank check for the polynomial-method argument over `{-1, 1}^{2n}`.
//!
//! Codewords map to sign vectors `v_i` (`1 -> +1`, `0 -> -1`). For a code
//! with Johnson degree set `S`, the functions
//! `P_i(x) = prod_{d in S} (<x, v_i> - 2(n - 2d))` vanish at every other
//! codeword and not at `v_i`. Together with `x^a (x_1 + ... + x_{2n})` for
//! `|a| <= s - 1`, `|a| ≡ s - 1 (mod 2)`, they should be linearly
//! independent as functions on the cube.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, Integer};

use super::{combinations, distance_profile, Code, Metric};

/// Largest length `2n` accepted by [`verify_rank_s2`].
pub const RANK_CHECK_MAX_LENGTH: usize = 12;

const MODULUS: u64 = (1 << 61) - 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankCheck {
    pub rank: usize,
    pub expected: usize,
    pub rows: usize,
    pub columns: usize,
}

impl RankCheck {
    pub fn holds(&self) -> bool {
        self.rank == self.expected
    }
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    acc
}

fn to_residue(v: i64) -> u64 {
    v.rem_euclid(MODULUS as i64) as u64
}

fn rank_mod_p(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| to_residue(v)).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = pow_mod(m[rank][col], MODULUS - 2);
        for r in rank + 1..m.len() {
            if m[r][col] == 0 {
                continue;
            }
            let f = mul_mod(m[r][col], inv);
            let (top, rest) = m.split_at_mut(r);
            for (x, &pv) in rest[0][col..].iter_mut().zip(&top[rank][col..]) {
                *x = (*x + MODULUS - mul_mod(f, pv)) % MODULUS;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Fraction-free elimination with content removal, exact over the rationals.
fn rank_exact(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Integer>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| Integer::from(v)).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let p = m[rank][col].clone();
        for r in rank + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            let mut g = Integer::zero();
            let (top, rest) = m.split_at_mut(r);
            for (x, pv) in rest[0][col..].iter_mut().zip(&top[rank][col..]) {
                let v = &*x * &p - &f * pv;
                g = g.gcd(&v);
                *x = v;
            }
            if !g.is_zero() && !g.abs().is_one() {
                for x in &mut rest[0][col..] {
                    *x = &*x / &g;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

fn rank(rows: &[Vec<i64>]) -> usize {
    let r = rank_mod_p(rows);
    if r == rows.len() {
        r
    } else {
        rank_exact(rows)
    }
}

/// Builds the evaluation matrix on all `2^{2n}` sign vectors and compares
/// its rank with `|C| + sum_{i <= s-1, i ≡ s-1 (2)} C(2n, i)`.
pub fn verify_rank_s2(c: &Code) -> Result<RankCheck> {
    let len = c.length();
    if len > RANK_CHECK_MAX_LENGTH {
        return Err(Error::Resource(format!(
            "rank check needs length <= {RANK_CHECK_MAX_LENGTH}, got {len}"
        )));
    }
    let profile = distance_profile(c, Metric::Johnson)?;
    if !profile.symmetric {
        return Err(Error::Domain("degree set is not symmetric".into()));
    }
    let s = profile.degree();
    if s == 0 {
        return Err(Error::Domain("code has no distances".into()));
    }
    let n = profile.reflection as i64;
    let points = 1usize << len;
    let sign = |mask: usize, j: usize| if mask >> j & 1 == 1 { -1i64 } else { 1 };

    let mut rows: Vec<Vec<i64>> = Vec::new();
    for w in c.words() {
        let v: Vec<i64> = (0..len).map(|j| if w.get(j) { 1 } else { -1 }).collect();
        let row = (0..points)
            .map(|x| {
                let dot: i64 = (0..len).map(|j| v[j] * sign(x, j)).sum();
                profile
                    .degree_set
                    .iter()
                    .map(|&d| dot - 2 * (n - 2 * d as i64))
                    .product()
            })
            .collect();
        rows.push(row);
    }
    let mut shifted = 0usize;
    for size in ((s - 1) % 2..s).step_by(2) {
        for alpha in combinations(len, size) {
            let row = (0..points)
                .map(|x| {
                    let mono: i64 = alpha.iter().map(|&j| sign(x, j)).product();
                    let total: i64 = (0..len).map(|j| sign(x, j)).sum();
                    mono * total
                })
                .collect();
            rows.push(row);
            shifted += 1;
        }
    }
    let expected_shifted: Integer = ((s - 1) % 2..s)
        .step_by(2)
        .map(|i| binomial(len as u64, i as u64))
        .sum();
    debug_assert_eq!(expected_shifted, Integer::from(shifted));
    let expected = c.len() + shifted;
    Ok(RankCheck {
        rank: rank(&rows),
        expected,
        rows: rows.len(),
        columns: points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{construct_ekr, hadamard_to_code, load_code, sylvester_hadamard};

    #[test]
    fn hadamard_four() {
        let c = hadamard_to_code(&sylvester_hadamard(2)).unwrap();
        let r = verify_rank_s2(&c).unwrap();
        assert_eq!((r.rank, r.expected), (4, 4));
        assert!(r.holds());
    }

    #[test]
    fn ekr_three() {
        let r = verify_rank_s2(&construct_ekr(3, 1).unwrap()).unwrap();
        assert_eq!((r.rank, r.expected), (16, 16));
        assert_eq!(r.columns, 64);
    }

    #[test]
    fn larger_tight_codes() {
        assert!(verify_rank_s2(&hadamard_to_code(&sylvester_hadamard(3)).unwrap())
            .unwrap()
            .holds());
        assert!(verify_rank_s2(&construct_ekr(4, 2).unwrap()).unwrap().holds());
    }

    #[test]
    fn exact_and_modular_ranks_agree() {
        let m = vec![vec![2, 4, 6], vec![1, 2, 3], vec![0, 1, 1], vec![3, 7, 10]];
        assert_eq!(rank_mod_p(&m), 2);
        assert_eq!(rank_exact(&m), 2);
        assert_eq!(rank(&m), 2);
        let id = vec![vec![1, 0], vec![0, 5]];
        assert_eq!(rank(&id), 2);
    }

    #[test]
    fn guards() {
        let lopsided = load_code("111000\n110100\n").unwrap();
        assert!(verify_rank_s2(&lopsided).is_err());
        assert!(verify_rank_s2(&load_code("1100\n").unwrap()).is_err());
        assert!(verify_rank_s2(&construct_ekr(7, 1).unwrap()).is_err());
    }
}

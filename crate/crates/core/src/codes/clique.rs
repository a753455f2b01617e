//! Exact maximum codes in `J(2n, n)` with a prescribed distance set, by
//! branch and bound over the distance graph.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::{combinations, Code, Word};

/// Largest length `2n` accepted by [`brute_force_max`].
pub const BRUTE_FORCE_MAX_LENGTH: u64 = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxCode {
    pub size: usize,
    /// The lexicographically first maximum code among those containing the
    /// first vertex.
    pub witness: Code,
}

struct Graph {
    n: u32,
    vertices: Vec<u32>,
    allowed: u64,
}

impl Graph {
    fn adjacent(&self, a: usize, b: usize) -> bool {
        let d = self.n - (self.vertices[a] & self.vertices[b]).count_ones();
        self.allowed >> d & 1 == 1
    }

    fn colour_bound(&self, cands: &[usize]) -> usize {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        'outer: for &v in cands {
            for class in classes.iter_mut() {
                if class.iter().all(|&u| !self.adjacent(u, v)) {
                    class.push(v);
                    continue 'outer;
                }
            }
            classes.push(vec![v]);
        }
        classes.len()
    }

    fn expand(&self, clique: &mut Vec<usize>, cands: &[usize], best: &mut Vec<usize>) {
        if cands.is_empty() {
            if clique.len() > best.len() {
                best.clone_from(clique);
            }
            return;
        }
        if clique.len() + self.colour_bound(cands) <= best.len() {
            return;
        }
        for (idx, &v) in cands.iter().enumerate() {
            if clique.len() + cands.len() - idx <= best.len() {
                break;
            }
            let next: Vec<usize> = cands[idx + 1..]
                .iter()
                .copied()
                .filter(|&u| self.adjacent(v, u))
                .collect();
            clique.push(v);
            self.expand(clique, &next, best);
            clique.pop();
        }
    }
}

/// Size of the largest weight-`n` code of length `2n` whose Johnson
/// distances all lie in `allowed`.
///
/// The automorphism group of `J(2n, n)` is vertex-transitive, so the search
/// fixes the first vertex.
pub fn brute_force_max(n: u64, allowed: &BTreeSet<u64>) -> Result<MaxCode> {
    if n == 0 || 2 * n > BRUTE_FORCE_MAX_LENGTH {
        return Err(Error::Resource(format!(
            "exhaustive search needs 1 <= n <= {}, got n = {n}",
            BRUTE_FORCE_MAX_LENGTH / 2
        )));
    }
    if let Some(&d) = allowed.iter().find(|&&d| d == 0 || d > n) {
        return Err(Error::out_of_range("distance", d as i64, 1, n as i64));
    }
    let len = 2 * n as usize;
    let vertices: Vec<u32> = combinations(len, n as usize)
        .map(|sub| sub.iter().fold(0u32, |m, &j| m | 1 << j))
        .collect();
    let graph = Graph {
        n: n as u32,
        allowed: allowed.iter().fold(0u64, |m, &d| m | 1 << d),
        vertices,
    };
    let cands: Vec<usize> = (1..graph.vertices.len())
        .filter(|&u| graph.adjacent(0, u))
        .collect();
    let mut clique = vec![0];
    let mut best = vec![0];
    graph.expand(&mut clique, &cands, &mut best);
    let words = best
        .iter()
        .map(|&v| Word::from_support(len, (0..len).filter(|&j| graph.vertices[v] >> j & 1 == 1)));
    Ok(MaxCode {
        size: best.len(),
        witness: Code::new(len, words)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{bound_johnson, distance_profile, Metric};

    #[test]
    fn examples() {
        assert_eq!(brute_force_max(3, &BTreeSet::from([1, 2])).unwrap().size, 10);
        assert_eq!(brute_force_max(2, &BTreeSet::from([1])).unwrap().size, 3);
        assert_eq!(brute_force_max(2, &BTreeSet::from([2])).unwrap().size, 2);
        assert_eq!(brute_force_max(3, &BTreeSet::from([2])).unwrap().size, 4);
        assert_eq!(brute_force_max(4, &BTreeSet::from([2])).unwrap().size, 7);
        assert_eq!(brute_force_max(3, &BTreeSet::new()).unwrap().size, 1);
        assert_eq!(brute_force_max(3, &BTreeSet::from([1, 2, 3])).unwrap().size, 20);
    }

    #[test]
    fn witness_respects_distance_set() {
        let allowed = BTreeSet::from([1, 3]);
        let best = brute_force_max(4, &allowed).unwrap();
        assert_eq!(best.witness.len(), best.size);
        let p = distance_profile(&best.witness, Metric::Johnson).unwrap();
        assert!(p.degree_set.is_subset(&allowed));
    }

    #[test]
    fn never_beats_the_bound_for_symmetric_sets() {
        for n in [2u64, 3] {
            let half: Vec<u64> = (1..=n / 2).collect();
            for mask in 1u32..1 << half.len() {
                let mut set = BTreeSet::new();
                for (k, &a) in half.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        set.insert(a);
                        set.insert(n - a);
                    }
                }
                let best = brute_force_max(n, &set).unwrap();
                let bound = bound_johnson(n, set.len() as u64).unwrap();
                assert!(crate::exactnum::Integer::from(best.size) <= bound, "{n} {set:?}");
            }
        }
    }

    #[test]
    fn deterministic_witness() {
        let allowed = BTreeSet::from([1, 2]);
        let a = brute_force_max(3, &allowed).unwrap();
        let b = brute_force_max(3, &allowed).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.witness.words()[0].render(6), "111000");
    }

    #[test]
    fn guards() {
        assert!(brute_force_max(11, &BTreeSet::from([1])).is_err());
        assert!(brute_force_max(0, &BTreeSet::new()).is_err());
        assert!(brute_force_max(3, &BTreeSet::from([4])).is_err());
        assert!(brute_force_max(3, &BTreeSet::from([0])).is_err());
    }
}

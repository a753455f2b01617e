//! Dual orthogonal polynomials of `J(2n, n)` and `H(n, 2)`.
//!
//! Both schemes are Q-polynomial and Q-bipartite: the dual polynomials obey a
//! three-term recursion with no middle term,
//!
//! ```text
//! x v_i(x) = c(i) v_{i+1}(x) + b(i) v_{i-1}(x),   v_{-1} = 0, v_0 = 1,
//! ```
//!
//! so `v_i` has the parity of `i` and the dual eigenvalues are antisymmetric,
//! `theta_{n-j} = -theta_j`. For `J(2n, n)`
//!
//! ```text
//! c(i) = (2n-1)(i+1)(n-i) / (n(2n-2i-1)),  b(i) = (2n-1)(n-i+1)(2n-i+2) / (n(2n-2i+3)),
//! ```
//!
//! and for `H(n, 2)` the dual polynomials are the Krawtchouk polynomials with
//! `c(i) = i + 1`, `b(i) = n - i + 1`, `theta_j = n - 2j`.

mod poly;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, falling_power, int, rat, Integer, Rational};
use crate::phicert::{build_phi, PhiParams};

pub use poly::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Johnson,
    Hamming,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Johnson => "johnson",
            Family::Hamming => "hamming",
        })
    }
}

/// A scheme with `n` classes: `J(2n, n)` or `H(n, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SchemeParams {
    pub family: Family,
    pub n: u64,
}

impl SchemeParams {
    pub fn new(family: Family, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("scheme needs at least one class".into()));
        }
        Ok(SchemeParams { family, n })
    }

    pub fn johnson(n: u64) -> Result<Self> {
        SchemeParams::new(Family::Johnson, n)
    }

    pub fn hamming(n: u64) -> Result<Self> {
        SchemeParams::new(Family::Hamming, n)
    }

    /// Coefficients `(c(i), b(i))` of the recursion step that produces `v_{i+1}`.
    fn recursion(&self, i: u64) -> (Rational, Rational) {
        let n = self.n as i64;
        let i = i as i64;
        match self.family {
            Family::Johnson => (
                Rational::new(
                    Integer::from((2 * n - 1) * (i + 1) * (n - i)),
                    Integer::from(n * (2 * n - 2 * i - 1)),
                ),
                Rational::new(
                    Integer::from((2 * n - 1) * (n - i + 1) * (2 * n - i + 2)),
                    Integer::from(n * (2 * n - 2 * i + 3)),
                ),
            ),
            Family::Hamming => (int(i + 1), int(n - i + 1)),
        }
    }

    fn check_index(&self, what: &'static str, i: u64) -> Result<()> {
        if i > self.n {
            return Err(Error::out_of_range(what, i as i64, 0, self.n as i64));
        }
        Ok(())
    }

    /// `theta_j`: `(2n-1)(1 - 2j/n)` for Johnson, `n - 2j` for Hamming.
    pub fn dual_eigenvalue(&self, j: u64) -> Result<Rational> {
        self.check_index("dual eigenvalue index", j)?;
        let n = self.n as i64;
        let j = j as i64;
        Ok(match self.family {
            Family::Johnson => int(2 * n - 1) * (int(1) - rat(2 * j, n)),
            Family::Hamming => int(n - 2 * j),
        })
    }

    /// `m_i`: `C(2n, i) - C(2n, i-1)` for Johnson, `C(n, i)` for Hamming.
    pub fn multiplicity(&self, i: u64) -> Result<Integer> {
        self.check_index("multiplicity index", i)?;
        Ok(match self.family {
            Family::Johnson => {
                let below = if i == 0 {
                    Integer::zero()
                } else {
                    binomial(2 * self.n, i - 1)
                };
                binomial(2 * self.n, i) - below
            }
            Family::Hamming => binomial(self.n, i),
        })
    }
}

impl fmt::Display for SchemeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Johnson => write!(f, "J({},{})", 2 * self.n, self.n),
            Family::Hamming => write!(f, "H({},2)", self.n),
        }
    }
}

/// Coefficients `g_i` of `F = sum g_i v_i`; only nonzero entries are stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExpansionCoeffs {
    pub f: BTreeMap<u64, Rational>,
}

impl ExpansionCoeffs {
    pub fn get(&self, i: u64) -> Rational {
        self.f.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    /// True when every nonzero coefficient sits at an index `≡ parity (mod 2)`.
    pub fn has_parity(&self, parity: u64) -> bool {
        self.f.keys().all(|i| i % 2 == parity % 2)
    }
}

/// Outcome of expanding a code's annihilator in the dual basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihilatorTest {
    pub annihilator: Poly,
    pub coeffs: ExpansionCoeffs,
    /// Nonzero coefficients only at indices with the parity of `|S|`.
    pub parity_ok: bool,
    /// `f_i = 1` for every `i <= |S|` with `i ≡ |S| (mod 2)`, and nothing else.
    pub all_one: bool,
}

/// A scheme with a memo of its dual polynomials.
#[derive(Debug)]
pub struct Scheme {
    params: SchemeParams,
    cache: Mutex<Vec<Poly>>,
}

impl Clone for Scheme {
    fn clone(&self) -> Self {
        Scheme {
            params: self.params,
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl Scheme {
    pub fn new(params: SchemeParams) -> Self {
        Scheme {
            params,
            cache: Mutex::new(vec![Poly::one()]),
        }
    }

    pub fn johnson(n: u64) -> Result<Self> {
        SchemeParams::johnson(n).map(Scheme::new)
    }

    pub fn hamming(n: u64) -> Result<Self> {
        SchemeParams::hamming(n).map(Scheme::new)
    }

    pub fn params(&self) -> SchemeParams {
        self.params
    }

    pub fn n(&self) -> u64 {
        self.params.n
    }

    pub fn dual_eigenvalue(&self, j: u64) -> Result<Rational> {
        self.params.dual_eigenvalue(j)
    }

    pub fn multiplicity(&self, i: u64) -> Result<Integer> {
        self.params.multiplicity(i)
    }

    /// `v_i`, exact, of degree `i`.
    pub fn dual_poly(&self, i: u64) -> Result<Poly> {
        self.params.check_index("dual polynomial index", i)?;
        let mut cache = self.cache.lock().unwrap();
        let x = Poly::x();
        while (cache.len() as u64) <= i {
            let k = cache.len() as u64 - 1;
            let (c, b) = self.params.recursion(k);
            let mut next = &x * &cache[k as usize];
            if k >= 1 {
                next = &next - &cache[k as usize - 1].scale(&b);
            }
            cache.push(next.scale(&(Rational::one() / c)));
        }
        Ok(cache[i as usize].clone())
    }

    fn check_degree(&self, s: u64) -> Result<()> {
        if s == 0 || s >= self.params.n {
            return Err(Error::out_of_range(
                "degree s",
                s as i64,
                1,
                self.params.n as i64 - 1,
            ));
        }
        Ok(())
    }

    /// `sum of v_i over 0 <= i <= s, i ≡ s (mod 2)`.
    pub fn psi_star(&self, s: u64) -> Result<Poly> {
        self.check_degree(s)?;
        let mut acc = Poly::zero();
        for i in (s % 2..=s).step_by(2) {
            acc = &acc + &self.dual_poly(i)?;
        }
        Ok(acc)
    }

    /// `|C| prod_{i in S} (z - theta_i) / (theta_0 - theta_i)`.
    pub fn annihilator(&self, code_size: u64, degree_set: &BTreeSet<u64>) -> Result<Poly> {
        if code_size == 0 {
            return Err(Error::Domain("annihilator needs a nonempty code".into()));
        }
        if degree_set.is_empty() {
            return Err(Error::Domain("annihilator needs a nonempty degree set".into()));
        }
        let theta0 = self.dual_eigenvalue(0)?;
        let mut f = Poly::constant(int(code_size as i64));
        for &i in degree_set {
            if i == 0 || i >= self.params.n {
                return Err(Error::out_of_range(
                    "degree-set element",
                    i as i64,
                    1,
                    self.params.n as i64 - 1,
                ));
            }
            let theta = self.dual_eigenvalue(i)?;
            let denom = &theta0 - &theta;
            f = &f * &Poly::linear(-&theta / &denom, Rational::one() / denom);
        }
        Ok(f)
    }

    /// Writes `f` in the basis `v_0, ..., v_n` by descending-degree elimination.
    pub fn expand_in_dual_basis(&self, f: &Poly) -> Result<ExpansionCoeffs> {
        let mut rest = f.clone();
        let mut out = ExpansionCoeffs::default();
        let Some(deg) = rest.degree() else {
            return Ok(out);
        };
        self.params.check_index("polynomial degree", deg as u64)?;
        for d in (0..=deg).rev() {
            let top = rest.coeff(d);
            if top.is_zero() {
                continue;
            }
            let v = self.dual_poly(d as u64)?;
            let g = top / v.leading().expect("dual polynomial is nonzero");
            rest = &rest - &v.scale(&g);
            out.f.insert(d as u64, g);
        }
        debug_assert!(rest.is_zero());
        Ok(out)
    }

    /// Builds the annihilator of a code of size `code_size` with degree set
    /// `degree_set`, expands it, and checks the tightness pattern `f_i = 1`.
    pub fn annihilator_test(
        &self,
        code_size: u64,
        degree_set: &BTreeSet<u64>,
    ) -> Result<AnnihilatorTest> {
        let annihilator = self.annihilator(code_size, degree_set)?;
        let coeffs = self.expand_in_dual_basis(&annihilator)?;
        let s = degree_set.len() as u64;
        let parity_ok = coeffs.has_parity(s);
        let all_one = parity_ok
            && (s % 2..=s)
                .step_by(2)
                .all(|i| coeffs.get(i).is_one())
            && coeffs.f.len() as u64 == s / 2 + 1;
        Ok(AnnihilatorTest {
            annihilator,
            coeffs,
            parity_ok,
            all_one,
        })
    }
}

/// The scalar `2^(2s) / s! * (n - 1/2)^(s falling) / n^(s falling)` relating
/// `Psi_s(theta_z)` to the certificate polynomial.
pub fn prop41_scalar(n: u64, s: u64) -> Rational {
    let half = int(n as i64) - rat(1, 2);
    let pow4 = Rational::from_integer(Integer::one() << (2 * s) as usize);
    let fact = Rational::from_integer(crate::exactnum::factorial(s));
    pow4 / fact * falling_power(&half, s as u32) / falling_power(&int(n as i64), s as u32)
}

/// Checks `Psi_s((2n-1)(1 - 2z/n)) = scalar * Phi_s(z)` with `r = n - s`, as an
/// exact polynomial identity in `z`.
pub fn verify_prop41(n: u64, s: u64) -> Result<bool> {
    let scheme = Scheme::johnson(n)?;
    let psi = scheme.psi_star(s)?;
    let top = int(2 * n as i64 - 1);
    let theta_z = Poly::linear(top.clone(), -(top * rat(2, n as i64)));
    let lhs = psi.compose(&theta_z);
    let phi = build_phi(PhiParams::new(n - s, s)?);
    Ok((&lhs - &phi.scale(&prop41_scalar(n, s))).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j(n: u64) -> Scheme {
        Scheme::johnson(n).unwrap()
    }

    fn poly(cs: &[Rational]) -> Poly {
        Poly::from_coeffs(cs.to_vec())
    }

    #[test]
    fn johnson_dual_polys() {
        let s = j(3);
        assert_eq!(s.dual_poly(0).unwrap(), Poly::one());
        assert_eq!(s.dual_poly(1).unwrap(), Poly::x());
        // 9(x^2 - 5)/20
        assert_eq!(
            s.dual_poly(2).unwrap(),
            poly(&[rat(-9, 4), int(0), rat(9, 20)])
        );
        assert!(s.dual_poly(4).is_err());
    }

    #[test]
    fn hamming_dual_polys_are_krawtchouk() {
        let h = Scheme::hamming(4).unwrap();
        // K_2(x) = (x^2 - n)/2
        assert_eq!(h.dual_poly(2).unwrap(), poly(&[int(-2), int(0), rat(1, 2)]));
        for i in 0..=4 {
            let v = h.dual_poly(i).unwrap();
            assert_eq!(v.eval(&int(4)), int(binomial(4, i).try_into().unwrap()));
        }
    }

    #[test]
    fn eigenvalues() {
        let s = j(3);
        assert_eq!(s.dual_eigenvalue(0).unwrap(), int(5));
        assert_eq!(s.dual_eigenvalue(1).unwrap(), rat(5, 3));
        assert_eq!(s.dual_eigenvalue(3).unwrap(), int(-5));
        assert!(s.dual_eigenvalue(4).is_err());
        let h = Scheme::hamming(4).unwrap();
        assert_eq!(h.dual_eigenvalue(1).unwrap(), int(2));
    }

    #[test]
    fn multiplicities() {
        assert_eq!(j(3).multiplicity(2).unwrap(), Integer::from(9));
        assert_eq!(j(3).multiplicity(0).unwrap(), Integer::from(1));
        assert_eq!(
            Scheme::hamming(4).unwrap().multiplicity(2).unwrap(),
            Integer::from(6)
        );
        assert!(j(3).multiplicity(4).is_err());
    }

    #[test]
    fn psi_star_examples() {
        let s = j(3);
        assert_eq!(
            s.psi_star(2).unwrap(),
            poly(&[rat(-5, 4), int(0), rat(9, 20)])
        );
        assert_eq!(s.psi_star(1).unwrap(), Poly::x());
        assert!(s.psi_star(3).is_err());
        assert!(s.psi_star(0).is_err());
        let h = Scheme::hamming(4).unwrap();
        let expected = &h.dual_poly(0).unwrap() + &h.dual_poly(2).unwrap();
        assert_eq!(h.psi_star(2).unwrap(), expected);
        assert_eq!(expected, poly(&[int(-1), int(0), rat(1, 2)]));
    }

    #[test]
    fn annihilator_examples() {
        let s = j(3);
        let set: BTreeSet<u64> = [1, 2].into();
        let f = s.annihilator(10, &set).unwrap();
        assert_eq!(f, poly(&[rat(-5, 4), int(0), rat(9, 20)]));
        assert_eq!(f.eval(&int(5)), int(10));
        let f1 = s.annihilator(1, &[1].into()).unwrap();
        assert_eq!(f1, poly(&[rat(-1, 2), rat(3, 10)]));
        assert!(s.annihilator(1, &BTreeSet::new()).is_err());
        assert!(s.annihilator(1, &[3].into()).is_err());
        assert!(s.annihilator(1, &[0].into()).is_err());
        assert!(s.annihilator(0, &[1].into()).is_err());
    }

    #[test]
    fn expansion_examples() {
        let s = j(3);
        let f = poly(&[rat(-5, 4), int(0), rat(9, 20)]);
        let e = s.expand_in_dual_basis(&f).unwrap();
        assert_eq!(e.f, BTreeMap::from([(0, int(1)), (2, int(1))]));
        let e = s.expand_in_dual_basis(&Poly::x()).unwrap();
        assert_eq!(e.f, BTreeMap::from([(1, int(1))]));
        for k in 0..=3 {
            let e = s.expand_in_dual_basis(&s.dual_poly(k).unwrap()).unwrap();
            assert_eq!(e.f, BTreeMap::from([(k, int(1))]));
        }
        let too_big = Poly::from_coeffs(vec![int(0); 4].into_iter().chain([int(1)]).collect());
        assert!(s.expand_in_dual_basis(&too_big).is_err());
    }

    #[test]
    fn ekr_annihilator_has_unit_coefficients() {
        let t = j(3).annihilator_test(10, &[1, 2].into()).unwrap();
        assert!(t.parity_ok && t.all_one);
        let t = j(3).annihilator_test(9, &[1, 2].into()).unwrap();
        assert!(t.parity_ok && !t.all_one);
    }

    #[test]
    fn prop41_examples() {
        assert!(verify_prop41(3, 2).unwrap());
        assert!(verify_prop41(2, 1).unwrap());
        assert!(verify_prop41(12, 7).unwrap());
        assert!(verify_prop41(3, 3).is_err());
    }

    #[test]
    fn parity_and_degree_exhaustive() {
        for n in 1..=20 {
            for family in [Family::Johnson, Family::Hamming] {
                let s = Scheme::new(SchemeParams::new(family, n).unwrap());
                let theta0 = s.dual_eigenvalue(0).unwrap();
                for i in 0..=n {
                    let v = s.dual_poly(i).unwrap();
                    assert_eq!(v.degree(), Some(i as usize));
                    assert_eq!(v.parity(), Some((i % 2) as usize));
                    assert_eq!(v.reflect(), if i % 2 == 0 { v.clone() } else { -&v });
                    assert_eq!(
                        v.eval(&theta0),
                        Rational::from_integer(s.multiplicity(i).unwrap()),
                        "{family} n={n} i={i}"
                    );
                }
                for jdx in 0..=n {
                    assert_eq!(
                        s.dual_eigenvalue(n - jdx).unwrap(),
                        -s.dual_eigenvalue(jdx).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn telescoping_multiplicity_sums() {
        for n in 1..=50u64 {
            let s = j(n);
            for deg in 0..=n {
                let sum: Integer = (deg % 2..=deg)
                    .step_by(2)
                    .map(|i| s.multiplicity(i).unwrap())
                    .sum();
                assert_eq!(sum, binomial(2 * n - 1, deg), "n={n} s={deg}");
            }
        }
    }

    fn symmetric_sets(n: u64) -> Vec<BTreeSet<u64>> {
        // each orbit {a, n-a} with 1 <= a <= n/2 is either in or out
        let orbits: Vec<BTreeSet<u64>> = (1..=n / 2)
            .filter(|&a| a < n)
            .map(|a| [a, n - a].into())
            .collect();
        (1u64..1 << orbits.len())
            .map(|mask| {
                orbits
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .flat_map(|(_, o)| o.iter().copied())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn symmetric_annihilators_expand_with_single_parity() {
        for n in 2..=10 {
            for family in [Family::Johnson, Family::Hamming] {
                let s = Scheme::new(SchemeParams::new(family, n).unwrap());
                for set in symmetric_sets(n) {
                    let t = s.annihilator_test(3, &set).unwrap();
                    assert!(t.parity_ok, "{family} n={n} S={set:?}");
                    assert_eq!(
                        t.annihilator.parity(),
                        Some(set.len() % 2),
                        "{family} n={n} S={set:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn memo_survives_clone_and_threads() {
        let s = j(12);
        let expected = s.dual_poly(12).unwrap();
        let t = s.clone();
        std::thread::scope(|scope| {
            for _ in 0..4 {
                scope.spawn(|| assert_eq!(t.dual_poly(12).unwrap(), expected));
            }
        });
    }
}

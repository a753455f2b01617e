//! The certificate polynomial
//!
//! ```text
//! Phi_s(z) = sum_{i=0}^{s} (-1)^(s-i) z^(s-i falling) p_{s,i},
//! p_{s,i}  = C(s,i) / 2^i * (r+i-1)^(floor(i/2) falling) (r+1)^(i rising)
//!                          / (r+1/2)^(floor(i/2) rising),
//! ```
//!
//! with `n = r + s`. A tight symmetric-distance code of degree `s` in
//! `J(2n, n)` forces `Phi_s` to have `s` distinct integral zeros in
//! `[1, n-1]`; and if all zeros are integers then `s = 1`, `r = 1`, or
//! `s >= 5000 r (14.5 + ln r)^2`. [`certify`] chains both tests.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::certified::below_growth_bound;
use crate::exactnum::{binomial, int, rat, Integer, Rational};
use crate::schemepoly::Poly;

/// Constant in the growth threshold `5000 r (c + ln r)^2` that excludes
/// integral zeros.
pub fn growth_constant() -> Rational {
    rat(29, 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhiParams {
    pub r: u64,
    pub s: u64,
}

impl PhiParams {
    pub fn new(r: u64, s: u64) -> Result<Self> {
        if r == 0 || s == 0 {
            return Err(Error::Domain(format!(
                "certificate polynomial needs r, s >= 1, got r = {r}, s = {s}"
            )));
        }
        Ok(PhiParams { r, s })
    }

    pub fn n(&self) -> u64 {
        self.r + self.s
    }
}

/// `p_{s,i}` as numerator and denominator products, reduced once at the end.
fn p_coeff_unchecked(params: PhiParams, i: u64) -> Rational {
    let PhiParams { r, s } = params;
    let half = i / 2;
    let mut num: BigInt = binomial(s, i);
    let mut den = BigInt::one() << i as usize;
    // (r+i-1)^(half falling)
    for j in 0..half {
        num *= r + i - 1 - j;
    }
    // (r+1)^(i rising)
    for j in 0..i {
        num *= r + 1 + j;
    }
    // (r+1/2)^(half rising) = prod (2r+1+2j) / 2^half
    for j in 0..half {
        den *= 2 * r + 1 + 2 * j;
    }
    num <<= half as usize;
    Rational::new(num, den)
}

/// `p_{s,i}` for `0 <= i <= s`.
pub fn p_coeff(params: PhiParams, i: u64) -> Result<Rational> {
    if i > params.s {
        return Err(Error::out_of_range("coefficient index", i as i64, 0, params.s as i64));
    }
    Ok(p_coeff_unchecked(params, i))
}

/// `[p_{s,0}, ..., p_{s,s}]`.
pub fn p_coeffs(params: PhiParams) -> Vec<Rational> {
    (0..=params.s).map(|i| p_coeff_unchecked(params, i)).collect()
}

fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> Integer {
    xs.into_iter()
        .fold(Integer::one(), |acc, x| acc.lcm(x.denom()))
}

/// Integer coefficients `c_k` and a positive scale `d` with
/// `Phi_s(z) = sum_k c_k z^k / d`.
fn phi_scaled(params: PhiParams) -> (Vec<Integer>, Integer) {
    let s = params.s as usize;
    let p = p_coeffs(params);
    let scale = lcm_of_denominators(&p);
    // a_j is the coefficient of z^(j falling); scaled to integers.
    let a: Vec<Integer> = (0..=s)
        .map(|j| {
            let pj = &p[s - j];
            let v = pj.numer() * (&scale / pj.denom());
            if j % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    // nested form a_0 + z (a_1 + (z - 1)(a_2 + (z - 2)(...)))
    let mut q: Vec<Integer> = vec![a[s].clone()];
    for j in (0..s).rev() {
        // q <- a_j + (z - j) q
        let mut next = vec![Integer::zero(); q.len() + 1];
        for (k, c) in q.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * j;
        }
        next[0] += &a[j];
        q = next;
    }
    (q, scale)
}

/// `Phi_s` in the monomial basis, of degree `s` with leading coefficient `(-1)^s`.
pub fn build_phi(params: PhiParams) -> Poly {
    let (q, scale) = phi_scaled(params);
    let scale = Rational::from_integer(scale);
    Poly::from_coeffs(
        q.into_iter()
            .map(|c| Rational::from_integer(c) / &scale)
            .collect(),
    )
}

/// `Phi_s(n - z) = (-1)^s Phi_s(z)`, checked on the integer-scaled
/// coefficients.
pub fn phi_reflection_check(params: PhiParams) -> bool {
    let (q, _) = phi_scaled(params);
    let n = params.n();
    // Horner in the variable n - z
    let mut acc: Vec<Integer> = Vec::with_capacity(q.len());
    for c in q.iter().rev() {
        let mut next = vec![Integer::zero(); acc.len() + 1];
        for (k, a) in acc.iter().enumerate() {
            next[k] += a * n;
            next[k + 1] -= a;
        }
        next[0] += c;
        acc = next;
    }
    if params.s % 2 == 1 {
        acc.iter_mut().for_each(|c| *c = -std::mem::take(c));
    }
    acc == q
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct IntegralZero {
    pub value: i64,
    pub multiplicity: usize,
}

/// Integral zeros of a polynomial found by scanning a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroReport {
    /// Ascending, with multiplicities.
    pub zeros: Vec<IntegralZero>,
    /// Every zero (with multiplicity) is an integer in the window.
    pub all_integral: bool,
    /// No zero found has multiplicity above one.
    pub distinct: bool,
    /// No zero is left unaccounted for outside the window. Zeros that are
    /// not found are only known through `residual_degree`, so this coincides
    /// with `residual_degree == 0`.
    pub in_range: bool,
    /// Degree of the factor left after dividing out every zero found.
    pub residual_degree: usize,
}

impl ZeroReport {
    pub fn integral_zeros(&self) -> Vec<i64> {
        self.zeros.iter().map(|z| z.value).collect()
    }

    pub fn passes(&self) -> bool {
        self.all_integral && self.distinct && self.in_range
    }
}

fn eval_int(coeffs: &[Integer], z: i64) -> Integer {
    let mut acc = Integer::zero();
    for c in coeffs.iter().rev() {
        acc *= z;
        acc += c;
    }
    acc
}

/// Quotient of an integer polynomial by `z - root`; the caller guarantees
/// `root` is a zero.
fn deflate_int(coeffs: &[Integer], root: i64) -> Vec<Integer> {
    let mut quotient = vec![Integer::zero(); coeffs.len() - 1];
    let mut carry = Integer::zero();
    for k in (1..coeffs.len()).rev() {
        carry = carry * root + &coeffs[k];
        quotient[k - 1] = carry.clone();
    }
    quotient
}

const RESIDUE_MODULUS: u64 = (1 << 61) - 1;

fn residues_mod(coeffs: &[Integer]) -> Vec<u64> {
    let m = Integer::from(RESIDUE_MODULUS);
    coeffs
        .iter()
        .map(|c| c.mod_floor(&m).to_u64().expect("residue fits in u64"))
        .collect()
}

fn eval_mod(residues: &[u64], z: i64) -> u64 {
    let p = RESIDUE_MODULUS as u128;
    let z = z.rem_euclid(RESIDUE_MODULUS as i64) as u128;
    residues
        .iter()
        .rev()
        .fold(0u128, |acc, &c| (acc * z + c as u128) % p) as u64
}

/// Evaluates `phi` at every integer in `[lo, hi]`, dividing out each zero as
/// often as it divides.
pub fn integer_zero_report(phi: &Poly, lo: i64, hi: i64) -> Result<ZeroReport> {
    if phi.is_zero() {
        return Err(Error::Domain("zero polynomial has no finite zero set".into()));
    }
    if lo > hi {
        return Err(Error::Domain(format!("empty window [{lo}, {hi}]")));
    }
    let scale = lcm_of_denominators(phi.coeffs());
    let mut coeffs: Vec<Integer> = phi
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&scale / c.denom()))
        .collect();
    let mut residues = residues_mod(&coeffs);
    let mut zeros = Vec::new();
    for k in lo..=hi {
        if coeffs.len() <= 1 {
            break;
        }
        let mut multiplicity = 0;
        // a nonzero residue already rules k out
        while coeffs.len() > 1
            && eval_mod(&residues, k) == 0
            && eval_int(&coeffs, k).is_zero()
        {
            coeffs = deflate_int(&coeffs, k);
            residues = residues_mod(&coeffs);
            multiplicity += 1;
        }
        if multiplicity > 0 {
            zeros.push(IntegralZero { value: k, multiplicity });
        }
    }
    let residual_degree = coeffs.len() - 1;
    Ok(ZeroReport {
        distinct: zeros.iter().all(|z| z.multiplicity == 1),
        all_integral: residual_degree == 0,
        in_range: residual_degree == 0,
        residual_degree,
        zeros,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    /// Passes every necessary condition and is not a known family.
    Possible,
    /// `Phi_s` lacks `s` distinct integral zeros in `[1, n-1]`.
    ExcludedByZeros,
    /// Integral zeros, but `s < 5000 r (14.5 + ln r)^2` with `s, r >= 2`.
    ExcludedByGrowth,
    /// `s = 1` with `n` even (Hadamard matrices) or `s = n - 1` (stars).
    KnownTightFamily,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Possible => "possible",
            Verdict::ExcludedByZeros => "excluded_by_thm14",
            Verdict::ExcludedByGrowth => "excluded_by_thm16",
            Verdict::KnownTightFamily => "known_tight_family",
        }
    }

    pub fn is_excluded(&self) -> bool {
        matches!(self, Verdict::ExcludedByZeros | Verdict::ExcludedByGrowth)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub n: u64,
    pub s: u64,
    pub r: u64,
    pub phi: Poly,
    pub zeros: ZeroReport,
    pub verdict: Verdict,
    /// Human-readable reason for the verdict.
    pub rule: String,
}

/// Runs the zero test and the growth test for a tight code of degree `s`
/// in `J(2n, n)`.
pub fn certify(n: u64, s: u64) -> Result<Certificate> {
    if s == 0 || s >= n {
        return Err(Error::out_of_range("degree s", s as i64, 1, n as i64 - 1));
    }
    let params = PhiParams::new(n - s, s)?;
    let r = params.r;
    let phi = build_phi(params);
    let zeros = integer_zero_report(&phi, 1, n as i64 - 1)?;
    let (verdict, rule) = if !zeros.passes() {
        let why = if !zeros.all_integral {
            format!(
                "{} of {} zeros are not integers in [1, {}]",
                zeros.residual_degree,
                s,
                n - 1
            )
        } else {
            "repeated integral zero".to_string()
        };
        (Verdict::ExcludedByZeros, why)
    } else if s != 1 && r != 1 && below_growth_bound(&Integer::from(s), r, &growth_constant()) {
        (
            Verdict::ExcludedByGrowth,
            format!("integral zeros require s >= 5000 r (29/2 + ln r)^2 with r = {r}"),
        )
    } else if (s == 1 && n.is_multiple_of(2)) || s == n - 1 {
        let family = if s == n - 1 { "star of a point" } else { "normalized Hadamard matrix" };
        (Verdict::KnownTightFamily, format!("realized by a {family}"))
    } else {
        (
            Verdict::Possible,
            "all necessary conditions hold".to_string(),
        )
    };
    Ok(Certificate {
        n,
        s,
        r,
        phi,
        zeros,
        verdict,
        rule,
    })
}

/// `16 p_{s,2}` from the closed form `C(s,2) (4r^2 + 14r + 13 + 3/(2r+1))`.
pub fn p2_closed_form_times16(r: u64, s: u64) -> Rational {
    let r_ = r as i64;
    let bracket = int(4 * r_ * r_ + 14 * r_ + 13) + rat(3, 2 * r_ + 1);
    Rational::from_integer(binomial(s, 2)) * bracket
}

/// Sign of `Phi_s` leading coefficient, `(-1)^s`.
pub fn leading_sign(s: u64) -> Rational {
    if s.is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    }
}

//! Sieving, exact prime counting, and the prime-gap function
//! `rho_s = min { n >= 1 : (n, n + s - 1] contains no prime }`.

use crate::error::{Error, Result};
use crate::exactnum::certified::{growth_bound_floor, growth_bound_tight, Interval};
use crate::exactnum::{rat, Integer, Rational};

/// Default upper end for any sieve-backed query.
pub const DEFAULT_CEILING: u64 = 1_000_000_000;
/// Default segment length (numbers per segment) for segmented scans.
pub const DEFAULT_SEGMENT: u64 = 1 << 18;

/// Bit-packed primality table for `0..=limit`.
#[derive(Debug, Clone)]
pub struct Sieve {
    limit: u64,
    bits: Vec<u64>,
}

impl Sieve {
    pub fn new(limit: u64) -> Self {
        let words = (limit / 64 + 1) as usize;
        let mut bits = vec![u64::MAX; words];
        let clear = |bits: &mut Vec<u64>, k: u64| bits[(k / 64) as usize] &= !(1 << (k % 64));
        clear(&mut bits, 0);
        if limit >= 1 {
            clear(&mut bits, 1);
        }
        let mut p = 2u64;
        while p * p <= limit {
            if bits[(p / 64) as usize] >> (p % 64) & 1 == 1 {
                let mut m = p * p;
                while m <= limit {
                    clear(&mut bits, m);
                    m += p;
                }
            }
            p += 1;
        }
        Sieve { limit, bits }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime(&self, k: u64) -> bool {
        k <= self.limit && self.bits[(k / 64) as usize] >> (k % 64) & 1 == 1
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (2..=self.limit).filter(|&k| self.is_prime(k))
    }
}

/// Primes in `[2, hi]` produced one segment at a time.
pub struct SegmentedPrimes {
    base: Vec<u64>,
    segment: Vec<bool>,
    seg_lo: u64,
    seg_len: u64,
    pos: usize,
    hi: u64,
}

impl SegmentedPrimes {
    pub fn new(hi: u64, segment_len: u64) -> Self {
        let root = (hi as f64).sqrt() as u64 + 2;
        let base: Vec<u64> = Sieve::new(root).primes().collect();
        let mut it = SegmentedPrimes {
            base,
            segment: Vec::new(),
            seg_lo: 0,
            seg_len: segment_len.max(64),
            pos: 0,
            hi,
        };
        it.fill(0);
        it
    }

    fn fill(&mut self, lo: u64) {
        self.seg_lo = lo;
        self.pos = 0;
        if lo > self.hi {
            self.segment.clear();
            return;
        }
        let end = (lo + self.seg_len - 1).min(self.hi);
        self.segment.clear();
        self.segment.resize((end - lo + 1) as usize, true);
        for k in lo..=end.min(1) {
            self.segment[(k - lo) as usize] = false;
        }
        for &p in &self.base {
            if p * p > end {
                break;
            }
            let first = (p * p).max(lo.div_ceil(p) * p);
            let mut m = first;
            while m <= end {
                self.segment[(m - lo) as usize] = false;
                m += p;
            }
        }
    }
}

impl Iterator for SegmentedPrimes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.segment.is_empty() {
                return None;
            }
            while self.pos < self.segment.len() {
                let k = self.pos;
                self.pos += 1;
                if self.segment[k] {
                    return Some(self.seg_lo + k as u64);
                }
            }
            let next = self.seg_lo + self.segment.len() as u64;
            self.fill(next);
        }
    }
}

fn guard(x: u64, ceiling: u64) -> Result<()> {
    if x > ceiling {
        return Err(Error::Resource(format!(
            "{x} exceeds the sieve ceiling {ceiling}"
        )));
    }
    Ok(())
}

/// All primes `<= limit`, ascending; empty below 2.
pub fn primes_upto(limit: u64, ceiling: u64) -> Result<Vec<u64>> {
    guard(limit, ceiling)?;
    Ok(SegmentedPrimes::new(limit, DEFAULT_SEGMENT).collect())
}

/// `pi(x)`, the number of primes `<= x`.
pub fn prime_pi(x: u64, ceiling: u64) -> Result<u64> {
    guard(x, ceiling)?;
    Ok(SegmentedPrimes::new(x, DEFAULT_SEGMENT).count() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rho {
    Found(u64),
    NotFoundBelowCeiling { ceiling: u64 },
}

impl Rho {
    pub fn value(&self) -> Option<u64> {
        match self {
            Rho::Found(n) => Some(*n),
            Rho::NotFoundBelowCeiling { .. } => None,
        }
    }
}

/// `rho_s`, scanning prime gaps up to `ceiling`.
///
/// For `s >= 2` the minimizer is always a prime `p` whose successor is at
/// least `p + s`, so only consecutive primes are compared.
pub fn rho(s: u64, ceiling: u64) -> Rho {
    rho_with_segment(s, ceiling, DEFAULT_SEGMENT)
}

pub fn rho_with_segment(s: u64, ceiling: u64, segment_len: u64) -> Rho {
    if s <= 1 {
        return Rho::Found(1);
    }
    let mut prev: Option<u64> = None;
    for q in SegmentedPrimes::new(ceiling, segment_len) {
        if let Some(p) = prev {
            if q - p >= s {
                return Rho::Found(p);
            }
        }
        prev = Some(q);
    }
    match prev {
        // no prime in (p, ceiling], so the interval is clean if it fits
        Some(p) if ceiling - p >= s - 1 => Rho::Found(p),
        _ => Rho::NotFoundBelowCeiling { ceiling },
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoLowerBound {
    pub s: u64,
    /// Enclosure of `5000 s (14.6 + ln s)^2`.
    pub value: Interval,
    /// `floor(5000 s (14.6 + ln s)^2)`.
    pub floor: Integer,
    /// The enclosure lies strictly above `2,000,000 s`.
    pub exceeds_two_million_s: bool,
}

/// Constant inside the logarithmic factor of the prime-gap lower bound.
pub fn rho_constant() -> Rational {
    rat(73, 5)
}

/// The lower bound `rho_s >= 5000 s (14.6 + ln s)^2`, valid for `s >= 288`.
pub fn rho_lower_bound(s: u64) -> Result<RhoLowerBound> {
    if s < 288 {
        return Err(Error::out_of_range("s", s as i64, 288, i64::MAX));
    }
    let c = rho_constant();
    let value = growth_bound_tight(s, &c, 32);
    let floor = growth_bound_floor(s, &c);
    let two_million_s = Rational::from_integer(Integer::from(2_000_000u64) * s);
    let exceeds_two_million_s = value.lo > two_million_s;
    Ok(RhoLowerBound {
        s,
        value,
        floor,
        exceeds_two_million_s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_upto_examples() {
        assert_eq!(primes_upto(10, DEFAULT_CEILING).unwrap(), vec![2, 3, 5, 7]);
        assert!(primes_upto(1, DEFAULT_CEILING).unwrap().is_empty());
        assert!(primes_upto(0, DEFAULT_CEILING).unwrap().is_empty());
        assert_eq!(primes_upto(100, DEFAULT_CEILING).unwrap().len(), 25);
        assert!(primes_upto(101, 100).is_err());
    }

    #[test]
    fn prime_pi_examples() {
        assert_eq!(prime_pi(100, DEFAULT_CEILING).unwrap(), 25);
        assert_eq!(prime_pi(2, DEFAULT_CEILING).unwrap(), 1);
        assert_eq!(prime_pi(1, DEFAULT_CEILING).unwrap(), 0);
        assert_eq!(prime_pi(1_000_000, DEFAULT_CEILING).unwrap(), 78_498);
    }

    #[test]
    fn segmented_matches_plain_sieve_for_odd_segment_sizes() {
        let plain: Vec<u64> = Sieve::new(50_000).primes().collect();
        for seg in [64, 100, 997, 4096] {
            let seg_primes: Vec<u64> = SegmentedPrimes::new(50_000, seg).collect();
            assert_eq!(seg_primes, plain, "segment {seg}");
        }
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(1, 100), Rho::Found(1));
        assert_eq!(rho(2, 100), Rho::Found(3));
        assert_eq!(rho(4, 100), Rho::Found(7));
        assert_eq!(rho(8, 1_000_000), Rho::Found(89));
        assert_eq!(rho(36, 1_000_000), Rho::Found(9551));
        assert_eq!(rho(40, 1_000_000), Rho::Found(15683));
    }

    #[test]
    fn rho_reports_ceiling() {
        assert_eq!(rho(8, 95), Rho::NotFoundBelowCeiling { ceiling: 95 });
        // 90..96 composite and 96 <= ceiling
        assert_eq!(rho(8, 96), Rho::Found(89));
        assert_eq!(rho_with_segment(8, 96, 64), Rho::Found(89));
    }

    #[test]
    fn rho_lower_bound_examples() {
        let b = rho_lower_bound(288).unwrap();
        assert!(b.exceeds_two_million_s);
        assert!(b.floor > Integer::from(576_000_000u64));
        let c = rho_lower_bound(289).unwrap();
        assert!(c.value.lo > b.value.hi);
        let d = rho_lower_bound(1000).unwrap();
        assert!(d.floor >= Integer::from(2_000_000_000u64));
        assert!(Rational::from_integer(d.floor.clone()) <= d.value.hi);
        assert!(Rational::from_integer(d.floor.clone() + 1) > d.value.lo);
        assert!(rho_lower_bound(287).is_err());
    }
}

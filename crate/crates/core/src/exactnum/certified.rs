//! Certified rational enclosures of natural logarithms, and the integer
//! comparisons against `5000 x (c + ln x)^2` that the exclusion rules need.
//!
//! `ln x` is enclosed as `k ln 2 + ln y` with `y = x / 2^k` in `[1, 2)`, and
//! each logarithm is written as `2 atanh(t)` with `t <= 1/3`. A truncated
//! atanh series is a lower bound; adding the geometric tail bound
//! `t^(2K+1) / ((2K+1)(1 - t^2))` gives an upper bound.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::{int, rat, Integer, Rational};

/// Closed rational interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    fn add_scalar(&self, c: &Rational) -> Self {
        Interval {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    fn scale(&self, c: &Rational) -> Self {
        if c.is_negative() {
            Interval {
                lo: &self.hi * c,
                hi: &self.lo * c,
            }
        } else {
            Interval {
                lo: &self.lo * c,
                hi: &self.hi * c,
            }
        }
    }

    fn add(&self, other: &Interval) -> Self {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    /// Square of an interval that lies in `[0, inf)`.
    fn square_nonneg(&self) -> Self {
        assert!(!self.lo.is_negative(), "square_nonneg on a negative interval");
        Interval {
            lo: &self.lo * &self.lo,
            hi: &self.hi * &self.hi,
        }
    }
}

/// Encloses `atanh(t)` for `0 <= t < 1` using `terms` series terms.
fn atanh_interval(t: &Rational, terms: u32) -> Interval {
    debug_assert!(!t.is_negative() && t < &int(1));
    if t.is_zero() {
        return Interval::point(Rational::zero());
    }
    let t2 = t * t;
    let mut power = t.clone();
    let mut sum = Rational::zero();
    for j in 0..terms {
        sum += &power / int(2 * j as i64 + 1);
        power *= &t2;
    }
    let tail = power / (int(2 * terms as i64 + 1) * (int(1) - t2));
    Interval {
        hi: &sum + tail,
        lo: sum,
    }
}

/// Encloses `ln x` for rational `x > 0`.
pub fn ln_interval(x: &Rational, terms: u32) -> Interval {
    assert!(x.is_positive(), "ln of a non-positive number");
    if x.is_one() {
        return Interval::point(Rational::zero());
    }
    // x = y * 2^k with 1 <= y < 2
    let mut k: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let scaled = |k: i64| -> Rational {
        if k >= 0 {
            x / Rational::from_integer(Integer::one() << k as usize)
        } else {
            x * Rational::from_integer(Integer::one() << (-k) as usize)
        }
    };
    let mut y = scaled(k);
    while y < int(1) {
        k -= 1;
        y = scaled(k);
    }
    while y >= int(2) {
        k += 1;
        y = scaled(k);
    }
    let t = (&y - int(1)) / (&y + int(1));
    let two = int(2);
    let ln_y = atanh_interval(&t, terms).scale(&two);
    if k == 0 {
        return ln_y;
    }
    let ln2 = atanh_interval(&rat(1, 3), terms).scale(&two);
    ln2.scale(&int(k)).add(&ln_y)
}

/// Encloses `5000 x (c + ln x)^2` for `x >= 1` and `c >= 0`.
pub fn growth_bound_interval(x: u64, c: &Rational, terms: u32) -> Interval {
    assert!(x >= 1 && !c.is_negative());
    ln_interval(&int(x as i64), terms)
        .add_scalar(c)
        .square_nonneg()
        .scale(&int(5000 * x as i64))
}

const START_TERMS: u32 = 16;

/// Decides `s < 5000 x (c + ln x)^2` exactly, refining the enclosure until
/// the comparison is strict.
pub fn below_growth_bound(s: &Integer, x: u64, c: &Rational) -> bool {
    let s = Rational::from_integer(s.clone());
    let mut terms = START_TERMS;
    loop {
        let iv = growth_bound_interval(x, c, terms);
        if s < iv.lo {
            return true;
        }
        if s >= iv.hi {
            return false;
        }
        terms *= 2;
    }
}

/// `floor(5000 x (c + ln x)^2)`, certified.
pub fn growth_bound_floor(x: u64, c: &Rational) -> Integer {
    let mut terms = START_TERMS;
    loop {
        let iv = growth_bound_interval(x, c, terms);
        let lo = iv.lo.floor().to_integer();
        let hi = iv.hi.floor().to_integer();
        if lo == hi {
            return lo;
        }
        terms *= 2;
    }
}

/// Refines `growth_bound_interval` until its width is below `1 / 2^bits`.
pub fn growth_bound_tight(x: u64, c: &Rational, bits: u32) -> Interval {
    let eps = Rational::new(Integer::one(), Integer::one() << bits as usize);
    let mut terms = START_TERMS;
    loop {
        let iv = growth_bound_interval(x, c, terms);
        if iv.width() < eps {
            return iv;
        }
        terms *= 2;
    }
}

/// Integer floor of a rational, rounding toward negative infinity.
pub fn floor(x: &Rational) -> Integer {
    x.numer().div_floor(x.denom())
}

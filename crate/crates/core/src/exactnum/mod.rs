//! Exact integer and rational primitives: falling/rising powers, double
//! factorials, binomials at half-integers, and p-adic valuations.
//!
//! Nothing in here touches floating point. Logarithms that feed integer
//! comparisons are computed by repeated multiplication (`floor_log`) or by
//! certified rational intervals (see [`certified`]).

pub mod certified;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

/// `num / den` as a normalized rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(Integer::from(num), Integer::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(Integer::from(value))
}

/// Renders a rational as `"a"` or `"a/b"`.
pub fn render(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses the `"a"` / `"a/b"` rendering back into a rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: Integer = n.trim().parse().ok()?;
            let d: Integer = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => text.parse::<Integer>().ok().map(Rational::from_integer),
    }
}

/// `x (x - 1) ... (x - k + 1)`; the empty product for `k = 0`.
pub fn falling_power(x: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    let mut factor = x.clone();
    for _ in 0..k {
        acc *= &factor;
        factor -= Rational::one();
    }
    acc
}

/// `x (x + 1) ... (x + k - 1)`; the empty product for `k = 0`.
pub fn rising_power(x: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    let mut factor = x.clone();
    for _ in 0..k {
        acc *= &factor;
        factor += Rational::one();
    }
    acc
}

/// `k (k - 2) (k - 4) ...` down to 1 or 2, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(k: i64) -> Result<Integer> {
    if k < -1 {
        return Err(Error::Domain(format!(
            "double factorial needs k >= -1, got {k}"
        )));
    }
    let mut acc = Integer::one();
    let mut f = k;
    while f > 1 {
        acc *= f;
        f -= 2;
    }
    Ok(acc)
}

pub fn factorial(n: u64) -> Integer {
    (2..=n).fold(Integer::one(), |acc, f| acc * f)
}

/// Ordinary binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> Integer {
    if k > n {
        return Integer::zero();
    }
    let k = k.min(n - k);
    let mut acc = Integer::one();
    for i in 0..k {
        // exact at every step: acc = C(n, i) before the update
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `C(n - 1/2, m) = (2n-1)!! / ((2(n-m)-1)!! 2^m m!)`.
pub fn binom_half(n: u64, m: u64) -> Result<Rational> {
    if n < m {
        return Err(Error::Domain(format!(
            "half-integer binomial needs n >= m, got n = {n}, m = {m}"
        )));
    }
    let top = double_factorial(2 * n as i64 - 1)?;
    let bottom = (double_factorial(2 * (n - m) as i64 - 1)? * factorial(m)) << (m as usize);
    Ok(Rational::new(top, bottom))
}

/// Deterministic primality by trial division; `p` is expected to be small.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime { value: p })
    }
}

/// A prime together with the exponent it carries in some rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    pub p: u64,
    pub e: i64,
}

/// Multiplicity of `p` in a nonzero integer.
pub fn integer_val(p: u64, x: &Integer) -> u64 {
    debug_assert!(!x.is_zero());
    let p = Integer::from(p);
    let mut x = x.abs();
    let mut e = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return e;
        }
        x = q;
        e += 1;
    }
}

/// `val_p(x) = val_p(numerator) - val_p(denominator)`.
pub fn padic_val(p: u64, x: &Rational) -> Result<i64> {
    require_prime(p)?;
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    Ok(integer_val(p, x.numer()) as i64 - integer_val(p, x.denom()) as i64)
}

/// The nonzero valuations of `x` at the listed primes, in list order.
pub fn valuations_at(x: &Rational, primes: &[u64]) -> Result<Vec<PrimePower>> {
    primes
        .iter()
        .map(|&p| padic_val(p, x).map(|e| PrimePower { p, e }))
        .filter(|pp| !matches!(pp, Ok(PrimePower { e: 0, .. })))
        .collect()
}

/// Legendre's formula: `val_p(n!) = sum_i floor(n / p^i)`.
pub fn legendre_val(p: u64, n: u64) -> Result<u64> {
    require_prime(p)?;
    let mut total = 0;
    let mut q = n;
    while q > 0 {
        q /= p;
        total += q;
    }
    Ok(total)
}

/// `val_p((2n-1)!!) = sum_i ceil(floor((2n-1) / p^i) / 2)` for odd primes.
///
/// Odd double factorials are odd, so `p = 2` is rejected instead of
/// answering zero.
pub fn dfact_val(p: u64, n: u64) -> Result<u64> {
    require_prime(p)?;
    if p == 2 {
        return Err(Error::Domain(
            "double-factorial valuation is only defined for odd primes".into(),
        ));
    }
    if n == 0 {
        return Ok(0);
    }
    let top = 2 * n - 1;
    let mut total = 0;
    let mut q = top / p;
    while q > 0 {
        total += q.div_ceil(2);
        q /= p;
    }
    Ok(total)
}

/// True iff `val_p(x) <= 0` for every prime `p > b`.
pub fn is_smooth(x: &Rational, b: u64) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let mut rest = x.numer().abs();
    let mut d = 2u64;
    while d <= b && !rest.is_one() {
        let dd = Integer::from(d);
        loop {
            let (q, r) = rest.div_rem(&dd);
            if !r.is_zero() {
                break;
            }
            rest = q;
        }
        d += 1;
    }
    Ok(rest.is_one())
}

/// `floor(log_base(x))` for `x >= 1`, by repeated multiplication.
pub fn floor_log(base: u64, x: u64) -> u32 {
    assert!(base >= 2 && x >= 1);
    let (base, x) = (base as u128, x as u128);
    let mut power = base;
    let mut k = 0;
    while power <= x {
        power *= base;
        k += 1;
    }
    k
}

/// Upper bound on `val_p(C(n - 1/2, m))`: `floor(log_p(2n-1))` for odd `p`,
/// and `-2m + floor(log_2(m+1))` for `p = 2`.
///
/// For `n = 0` (so `m = 0` and the binomial is 1) the odd-prime bound is 0.
pub fn kummer_half_bound(p: u64, n: u64, m: u64) -> Result<i64> {
    require_prime(p)?;
    if n < m {
        return Err(Error::Domain(format!(
            "half-integer binomial needs n >= m, got n = {n}, m = {m}"
        )));
    }
    if p == 2 {
        return Ok(-2 * m as i64 + floor_log(2, m + 1) as i64);
    }
    if n == 0 {
        return Ok(0);
    }
    Ok(floor_log(p, 2 * n - 1) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn falling_and_rising_examples() {
        assert_eq!(falling_power(&int(5), 3), int(60));
        assert_eq!(falling_power(&rat(7, 3), 0), int(1));
        assert_eq!(falling_power(&rat(1, 2), 2), rat(-1, 4));
        assert_eq!(rising_power(&int(3), 2), int(12));
        assert_eq!(rising_power(&rat(-9, 5), 0), int(1));
        assert_eq!(rising_power(&rat(3, 2), 1), rat(3, 2));
    }

    #[test]
    fn double_factorial_examples() {
        assert_eq!(double_factorial(7).unwrap(), Integer::from(105));
        assert_eq!(double_factorial(-1).unwrap(), Integer::one());
        assert_eq!(double_factorial(0).unwrap(), Integer::one());
        assert_eq!(double_factorial(8).unwrap(), Integer::from(384));
        assert!(double_factorial(-2).is_err());
    }

    #[test]
    fn binom_half_examples() {
        assert_eq!(binom_half(3, 2).unwrap(), rat(15, 8));
        assert_eq!(binom_half(9, 0).unwrap(), int(1));
        assert_eq!(binom_half(1, 1).unwrap(), rat(1, 2));
        assert!(binom_half(1, 2).is_err());
    }

    #[test]
    fn binom_half_matches_generalized_binomial() {
        // C(x, m) = x^(m falling) / m! with x = n - 1/2
        for n in 0..30u64 {
            for m in 0..=n {
                let x = int(n as i64) - rat(1, 2);
                let direct = falling_power(&x, m as u32) / Rational::from_integer(factorial(m));
                assert_eq!(binom_half(n, m).unwrap(), direct, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn padic_examples() {
        assert_eq!(padic_val(2, &rat(15, 8)).unwrap(), -3);
        assert_eq!(padic_val(3, &rat(15, 8)).unwrap(), 1);
        assert_eq!(padic_val(5, &int(1)).unwrap(), 0);
        assert!(matches!(padic_val(2, &int(0)), Err(Error::ZeroValuation)));
        assert!(matches!(padic_val(4, &int(8)), Err(Error::NotPrime { value: 4 })));
    }

    #[test]
    fn valuations_at_lists_nonzero_exponents() {
        let v = valuations_at(&rat(15, 8), &[2, 3, 5, 7]).unwrap();
        assert_eq!(
            v,
            vec![
                PrimePower { p: 2, e: -3 },
                PrimePower { p: 3, e: 1 },
                PrimePower { p: 5, e: 1 }
            ]
        );
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_val(3, 10).unwrap(), 4);
        assert_eq!(legendre_val(7, 0).unwrap(), 0);
        assert_eq!(legendre_val(2, 4).unwrap(), 3);
        assert!(legendre_val(9, 4).is_err());
    }

    #[test]
    fn dfact_examples() {
        assert_eq!(dfact_val(3, 5).unwrap(), 3);
        assert_eq!(dfact_val(7, 4).unwrap(), 1);
        assert_eq!(dfact_val(3, 1).unwrap(), 0);
        assert_eq!(dfact_val(3, 0).unwrap(), 0);
        assert!(dfact_val(2, 5).is_err());
    }

    #[test]
    fn smoothness_examples() {
        assert!(is_smooth(&rat(15, 8), 5).unwrap());
        assert!(!is_smooth(&int(7), 5).unwrap());
        assert!(is_smooth(&rat(1, 7), 5).unwrap());
        assert!(is_smooth(&int(-30), 5).unwrap());
        assert!(is_smooth(&int(1), 0).unwrap());
        assert!(is_smooth(&int(0), 5).is_err());
    }

    #[test]
    fn kummer_examples() {
        assert_eq!(kummer_half_bound(2, 1, 1).unwrap(), -1);
        assert_eq!(padic_val(2, &binom_half(1, 1).unwrap()).unwrap(), -1);
        assert_eq!(kummer_half_bound(3, 5, 2).unwrap(), 2);
        assert_eq!(kummer_half_bound(5, 1, 0).unwrap(), 0);
        assert!(kummer_half_bound(3, 1, 2).is_err());
    }

    #[test]
    fn floor_log_at_exact_powers() {
        assert_eq!(floor_log(3, 8), 1);
        assert_eq!(floor_log(3, 9), 2);
        assert_eq!(floor_log(3, 26), 2);
        assert_eq!(floor_log(3, 27), 3);
        assert_eq!(floor_log(2, 1), 0);
        assert_eq!(floor_log(2, u64::MAX), 63);
    }

    #[test]
    fn binomial_small() {
        assert_eq!(binomial(5, 2), Integer::from(10));
        assert_eq!(binomial(3, 4), Integer::zero());
        assert_eq!(binomial(0, 0), Integer::one());
    }

    #[test]
    fn render_round_trip() {
        for x in [rat(-3, 4), int(0), int(17), rat(22, 7)] {
            assert_eq!(parse_rational(&render(&x)), Some(x));
        }
        assert_eq!(render(&rat(6, -4)), "-3/2");
        assert_eq!(parse_rational("1/0"), None);
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-10_000i64..10_000, 1i64..10_000).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn padic_val_is_additive(
            x in small_rational(),
            y in small_rational(),
            p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 97]),
        ) {
            prop_assume!(!x.is_zero() && !y.is_zero());
            let lhs = padic_val(p, &(&x * &y)).unwrap();
            prop_assert_eq!(lhs, padic_val(p, &x).unwrap() + padic_val(p, &y).unwrap());
        }

        #[test]
        fn falling_is_reversed_rising(x in small_rational(), k in 0u32..12) {
            let f = falling_power(&x, k);
            let shifted = &x - int(k as i64) + int(1);
            let r = rising_power(&shifted, k);
            prop_assert_eq!(&f, &r);
            if !f.is_zero() {
                prop_assert!((f / r).is_one());
            }
        }
    }
}

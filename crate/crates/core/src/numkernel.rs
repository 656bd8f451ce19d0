//! Exact integer and rational combinatorics.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Arbitrary-precision fraction, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int_to_rat(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Renders as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses `p/q` or `p`. Non-reduced input is accepted and reduced.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Format(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = match den {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Format(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

fn bernoulli_cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// Bernoulli number `B_h` from `sum_{j=0}^{m} C(m+1, j) B_j = 0`, `B_0 = 1`
/// (so `B_1 = -1/2`).
pub fn bernoulli(h: usize) -> Rational {
    let mut cache = bernoulli_cache().lock().unwrap_or_else(|e| e.into_inner());
    while cache.len() <= h {
        let m = cache.len();
        let mut acc = Rational::zero();
        for (j, b) in cache.iter().enumerate() {
            acc += int_to_rat(choose(m as u64 + 1, j as u64)) * b;
        }
        let next = -acc / rat(m as i64 + 1);
        cache.push(next);
    }
    cache[h].clone()
}

/// `C(a, b)` for `a >= 0`; zero outside `0 <= b <= a`.
pub fn binomial(a: i64, b: i64) -> Result<BigInt> {
    if a < 0 {
        return Err(Error::invalid(format!("binomial with negative top {a}")));
    }
    if b < 0 || b > a {
        return Ok(BigInt::zero());
    }
    Ok(choose(a as u64, b as u64))
}

/// Unsigned binomial; zero when `b > a`.
pub fn choose(a: u64, b: u64) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc = acc * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    acc
}

/// Binomial for call sites whose top argument is non-negative by construction.
pub(crate) fn binom(a: i64, b: i64) -> BigInt {
    assert!(a >= 0, "binomial top must be non-negative, got C({a}, {b})");
    binomial(a, b).unwrap_or_default()
}

pub(crate) fn binom_q(a: i64, b: i64) -> Rational {
    int_to_rat(binom(a, b))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Sum of `h`-th powers of the positive divisors of `n`.
pub fn sigma(h: u32, n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::invalid("sigma(h, 0) is undefined"));
    }
    let mut acc = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            acc += BigInt::from(d).pow(h);
            let e = n / d;
            if e != d {
                acc += BigInt::from(e).pow(h);
            }
        }
        d += 1;
    }
    Ok(acc)
}

/// Multiplies a rational vector by the lcm of its denominators and divides by
/// the gcd of the resulting numerators. The first nonzero entry is made positive.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter().map(|x| x / &g * &sign).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), rat(1));
        assert_eq!(bernoulli(1), ratio(-1, 2));
        assert_eq!(bernoulli(2), ratio(1, 6));
        assert_eq!(bernoulli(4), ratio(-1, 30));
        assert_eq!(bernoulli(6), ratio(1, 42));
        assert_eq!(bernoulli(12), ratio(-691, 2730));
    }

    #[test]
    fn odd_bernoulli_vanish() {
        for h in (3..=50).step_by(2) {
            assert!(bernoulli(h).is_zero(), "B_{h}");
        }
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2).unwrap(), BigInt::from(6));
        assert_eq!(binomial(12, 1).unwrap(), BigInt::from(12));
        assert_eq!(binomial(5, 7).unwrap(), BigInt::zero());
        assert_eq!(binomial(5, -1).unwrap(), BigInt::zero());
        assert_eq!(binomial(0, 0).unwrap(), BigInt::one());
        assert!(binomial(-3, 1).is_err());
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(1, 6).unwrap(), BigInt::from(12));
        assert_eq!(sigma(3, 1).unwrap(), BigInt::from(1));
        assert_eq!(sigma(5, 2).unwrap(), BigInt::from(33));
        assert_eq!(sigma(1, 36).unwrap(), BigInt::from(91));
        assert!(sigma(1, 0).is_err());
    }

    #[test]
    fn rational_text_roundtrip() {
        for s in ["0", "-691/2730", "12", "1/6"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("2/4").unwrap(), ratio(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn primitive_vector() {
        let v = [ratio(-1, 2), rat(6), rat(0)];
        let p = primitive_integer_vector(&v);
        assert_eq!(p, vec![BigInt::from(1), BigInt::from(-12), BigInt::zero()]);
    }

    proptest! {
        #[test]
        fn sigma_is_multiplicative(m in 1u64..10_000, n in 1u64..10_000, h in 1u32..4) {
            prop_assume!(m.gcd(&n) == 1);
            prop_assert_eq!(
                sigma(h, m * n).unwrap(),
                sigma(h, m).unwrap() * sigma(h, n).unwrap()
            );
        }

        #[test]
        fn binomial_symmetry(a in 0i64..80, b in 0i64..80) {
            prop_assume!(b <= a);
            prop_assert_eq!(binomial(a, b).unwrap(), binomial(a, a - b).unwrap());
        }
    }
}

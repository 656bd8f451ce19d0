//! The hypergeometric sum behind the derivative-product structure result.
//!
//! `beta_r(N) = 2 C(r,2) C(N,r) C(N,r-1) (N+1-2r)` and `A(N) = sum_r beta_r(N)`.
//! The rational function `K(N, r)` turns the two-term recurrence for `A(N)`
//! into a telescoping identity in `r`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::brackets::bracket;
use crate::numkernel::{binom, int_to_rat, rat, Rational};
use crate::ring::{GradedPoly, QuasiForm};
use crate::spaces::{basis_cusp, SpaceSpec, Summand};
use crate::{Error, Result};

fn c(a: i64, b: i64) -> BigInt {
    if a < 0 {
        BigInt::zero()
    } else {
        binom(a, b)
    }
}

fn sign(r: i64) -> i64 {
    if r.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `2 (-1)^r C(r,2) C(N,r) C(N,r-1) (N+1-2r)`.
pub fn alpha(n: i64, r: i64) -> Rational {
    let v = BigInt::from(2 * sign(r)) * c(r, 2) * c(n, r) * c(n, r - 1) * BigInt::from(n + 1 - 2 * r);
    int_to_rat(v)
}

/// `(-1)^r alpha_r(N)`.
pub fn beta(n: i64, r: i64) -> Rational {
    alpha(n, r) * rat(sign(r))
}

fn certificate_numerator(n: i64, r: i64) -> BigInt {
    let poly = 3 * n.pow(3) + 8 * n * n * (1 - r) + n * (4 * r * r - 6 * r + 3) - 2 * r * r + 4 * r - 2;
    BigInt::from(r - 2) * BigInt::from(r - 1) * BigInt::from(n + 1) * BigInt::from(poly)
}

/// `K(N, r)`, or [`Error::ZeroDenominator`] where
/// `(N-2r+1)(N-r+1)(N-r+2)(N-1)` vanishes.
pub fn certificate_k(n: i64, r: i64) -> Result<Rational> {
    let den = (n - 2 * r + 1) * (n - r + 1) * (n - r + 2) * (n - 1);
    if den == 0 {
        return Err(Error::ZeroDenominator { n, r });
    }
    Ok(Rational::new(certificate_numerator(n, r), BigInt::from(den)))
}

/// `K(N, r) beta_r(N)` with the denominator cancelled against the binomials:
/// `2 C(r,2) (r-2)(r-1) P(N,r) C(N+1,r) C(N+1,r-1) / ((N+1)(N-1))`.
/// Defined for every `r` once `N >= 2`.
pub fn certificate_term(n: i64, r: i64) -> Rational {
    let num = certificate_numerator(n, r) / BigInt::from(n + 1);
    let v = BigInt::from(2) * c(r, 2) * num * c(n + 1, r) * c(n + 1, r - 1);
    Rational::new(v, BigInt::from((n + 1) * (n - 1)))
}

pub fn a_direct(n: i64) -> Rational {
    (2..=n).fold(Rational::zero(), |acc, r| acc + beta(n, r))
}

/// `-N (N-1) C(2N-2, N-1)`.
pub fn a_closed(n: i64) -> Rational {
    int_to_rat(-BigInt::from(n * (n - 1)) * c(2 * n - 2, n - 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    #[serde(rename = "N")]
    pub n: i64,
    pub checked_r: Vec<i64>,
    pub skipped_r: Vec<i64>,
    /// `r` where the identity failed; empty when the certificate works.
    pub failed_r: Vec<i64>,
    /// The identity with the cancelled certificate term holds for every `r`,
    /// including the skipped ones.
    pub cancelled_ok: bool,
    pub ratio_ok: bool,
    pub closed_form_ok: bool,
}

impl CertificateReport {
    pub fn pass(&self) -> bool {
        self.failed_r.is_empty() && self.cancelled_ok && self.ratio_ok && self.closed_form_ok
    }
}

fn lhs(n: i64, r: i64) -> Rational {
    beta(n, r) * rat(2 * (n + 1) * (2 * n - 1)) - beta(n + 1, r) * rat(n * (n - 1))
}

/// `2(N+1)(2N-1) beta_r(N) - N(N-1) beta_r(N+1) = K(N,r+1) beta_{r+1}(N) - K(N,r) beta_r(N)`
/// for `r` in `0..=N+1`.
pub fn certificate_check(n: i64) -> Result<CertificateReport> {
    if n < 2 {
        return Err(Error::invalid(format!("certificate check needs N >= 2, got {n}")));
    }
    let mut report = CertificateReport {
        n,
        checked_r: Vec::new(),
        skipped_r: Vec::new(),
        failed_r: Vec::new(),
        cancelled_ok: true,
        ratio_ok: a_direct(n + 1) * rat(n * (n - 1)) == a_direct(n) * rat(2 * (n + 1) * (2 * n - 1)),
        closed_form_ok: a_direct(n) == a_closed(n),
    };
    for r in 0..=n + 1 {
        let left = lhs(n, r);
        match (certificate_k(n, r + 1), certificate_k(n, r)) {
            (Ok(k1), Ok(k0)) => {
                report.checked_r.push(r);
                if left != k1 * beta(n, r + 1) - k0 * beta(n, r) {
                    report.failed_r.push(r);
                }
            }
            _ => report.skipped_r.push(r),
        }
        if left != certificate_term(n, r + 1) - certificate_term(n, r) {
            report.cancelled_ok = false;
        }
    }
    Ok(report)
}

fn sign_q(r: i64) -> Rational {
    rat(sign(r))
}

/// `144 R_2([E2, E2]_{2m+2}) = 24 (2m+2) D^{2m+1} E2 + 4 (S1 + S2)` where
///
/// ```text
/// S1 = sum_{r=2}^{2m+2} (-1)^r C(2m+2,r)^2 C(r,2) C(r+1,2) D^{r-2}E2 D^{2m+2-r}E2
/// S2 = sum_{r=1}^{2m+1} (-1)^r C(2m+2,r)^2 C(r+1,2) C(2m+3-r,2) D^{r-1}E2 D^{2m+1-r}E2
/// ```
///
/// and, for `m >= 1`, `R_2` of the bracket is a cusp form of weight `4m+4`.
/// (At `m = 0` the order `2` equals the total depth and `R_2 = -E4/36`.)
pub fn q2_bracket_check(m: u32) -> Result<bool> {
    let n = 2 * m + 2;
    let ni = n as i64;
    let e2 = QuasiForm::e2();
    let b = bracket(&e2, &e2, n, None)?;
    let r2 = b.poly().e2_taylor(2);
    let d = GradedPoly::e2().derivatives(n);
    let mut rhs = d[n as usize - 1].scale(&rat(24 * ni));
    let mut sums = GradedPoly::zero();
    for r in 2..=ni {
        let coef = sign_q(r) * int_to_rat(c(ni, r).pow(2) * c(r, 2) * c(r + 1, 2));
        sums = &sums + &(&d[(r - 2) as usize] * &d[(ni - r) as usize]).scale(&coef);
    }
    for r in 1..ni {
        let coef = sign_q(r) * int_to_rat(c(ni, r).pow(2) * c(r + 1, 2) * c(ni + 1 - r, 2));
        sums = &sums + &(&d[(r - 1) as usize] * &d[(ni - 1 - r) as usize]).scale(&coef);
    }
    rhs = &rhs + &sums.scale(&rat(4));
    let identity = r2.scale(&rat(144)) == rhs;
    let w = 4 * m as i64 + 4;
    let cusp = SpaceSpec::new(vec![Summand::Cusp(w)]).span()?;
    debug_assert_eq!(cusp.dimension(), basis_cusp(w)?.len());
    Ok(identity && (m == 0 || cusp.contains(&r2)))
}

/// `A(N+1) / A(N)` as given by the recurrence.
pub fn ratio(n: i64) -> Rational {
    Rational::new(BigInt::from(2 * (n + 1) * (2 * n - 1)), BigInt::from(n * (n - 1)))
}

/// `A(N)` unrolled from `A(2) = -4` through the recurrence.
pub fn a_recursive(n: i64) -> Rational {
    (2..n).fold(rat(-4), |acc, j| acc * ratio(j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn alpha_beta_examples() {
        assert_eq!(alpha(2, 2), rat(-4));
        assert_eq!(beta(2, 2), rat(-4));
        for n in 2..10 {
            assert!(alpha(n, 0).is_zero() && alpha(n, 1).is_zero());
            assert!(alpha(n, -3).is_zero() && alpha(n, n + 2).is_zero());
        }
    }

    #[test]
    fn beta_sign_follows_the_linear_factor() {
        for n in 2..40 {
            for r in 2..=n {
                let b = beta(n, r);
                let lin = n + 1 - 2 * r;
                assert_eq!(b.is_positive(), lin > 0, "N={n} r={r}");
                assert_eq!(b.is_zero(), lin == 0);
            }
        }
    }

    #[test]
    fn certificate_values() {
        for n in 2..20 {
            for r in [1, 2] {
                // N = 3, r = 2 sits on the pole N + 1 = 2r
                if let Ok(k) = certificate_k(n, r) {
                    assert!(k.is_zero());
                }
            }
        }
        assert!(certificate_k(3, 2).is_err());
        // (1)(2)(5)[192 - 256 + 84 - 18 + 12 - 2] / ((-1)(2)(3)(3))
        assert_eq!(certificate_k(4, 3).unwrap(), Rational::new((-20).into(), 3.into()));
        assert_eq!(certificate_k(5, 3), Err(Error::ZeroDenominator { n: 5, r: 3 }));
        assert!(certificate_k(1, 5).is_err());
        for n in 2..20 {
            for r in 0..=n + 2 {
                if let Ok(k) = certificate_k(n, r) {
                    assert_eq!(k * beta(n, r), certificate_term(n, r));
                }
            }
        }
    }

    #[test]
    fn sums() {
        assert_eq!(a_direct(2), rat(-4));
        assert_eq!(a_closed(2), rat(-4));
        assert_eq!(a_direct(5), rat(-1400));
        assert_eq!(a_closed(5), rat(-1400));
        for n in 2..60 {
            assert_eq!(a_recursive(n), a_closed(n));
        }
    }

    #[test]
    fn certificate_reports() {
        let rep = certificate_check(4).unwrap();
        assert_eq!(rep.checked_r, vec![0, 1, 2, 3]);
        assert_eq!(rep.skipped_r, vec![4, 5]);
        assert!(rep.pass());
        let rep = certificate_check(5).unwrap();
        assert_eq!(rep.skipped_r, vec![2, 3, 5, 6]);
        assert!(rep.pass());
        for n in 2..=40 {
            let rep = certificate_check(n).unwrap();
            let mut all: Vec<i64> = rep.checked_r.iter().chain(&rep.skipped_r).copied().collect();
            all.sort();
            assert_eq!(all, (0..=n + 1).collect::<Vec<_>>());
            assert!(rep.pass(), "{rep:?}");
        }
        assert!(certificate_check(1).is_err());
    }

    #[test]
    fn perturbed_certificate_fails() {
        let n = 6;
        let r = 3;
        let k1 = certificate_k(n, r + 1).unwrap() + rat(1);
        let k0 = certificate_k(n, r).unwrap();
        assert_ne!(lhs(n, r), k1 * beta(n, r + 1) - k0 * beta(n, r));
    }

    #[test]
    fn q2_remainder_at_order_two_is_not_cuspidal() {
        let b = bracket(&QuasiForm::e2(), &QuasiForm::e2(), 2, None).unwrap();
        assert_eq!(b.poly().e2_taylor(2), GradedPoly::e4().scale(&crate::numkernel::ratio(-1, 36)));
    }

    #[test]
    fn q2_brackets() {
        for m in 0..=3 {
            assert!(q2_bracket_check(m).unwrap(), "m={m}");
        }
    }
}

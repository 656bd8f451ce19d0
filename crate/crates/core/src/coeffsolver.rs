//! Recovers the bracket coefficients from the depth-cancellation conditions.
//!
//! A vector `(a_0..a_n)` makes `sum_r a_r D^r f D^{n-r} g` drop to depth
//! `s + t` as soon as
//!
//! ```text
//! sum_r a_r C(r, alpha) C(n-r, beta) (k+r-u-1)! (l+n-r-v-1)! = 0
//! ```
//!
//! for every `(u, v, alpha, beta)` with `u <= s`, `v <= t` and
//! `alpha + beta <= u + v + n - s - t - 1`. The solution space of this system
//! is one-dimensional and spanned by [`rc_coeffs`].

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::brackets::{rc_coeffs, BracketParams, CoeffVector};
use crate::linalg::{nullspace, Matrix};
use crate::numkernel::{binom_q, factorial, int_to_rat, primitive_integer_vector, rat, Rational};
use crate::{Error, Result};

pub use crate::linalg::nullspace as kernel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConstraintIndex {
    pub u: u32,
    pub v: u32,
    pub alpha: u32,
    pub beta: u32,
}

/// Every `(u, v, alpha, beta)` with `u <= s`, `v <= t`,
/// `alpha + beta <= u + v + n - s - t - 1`, in lexicographic order.
pub fn constraint_set(s: u32, t: u32, n: u32) -> Vec<ConstraintIndex> {
    let mut out = Vec::new();
    for u in 0..=s {
        for v in 0..=t {
            let bound = (u + v + n) as i64 - (s + t) as i64 - 1;
            if bound < 0 {
                continue;
            }
            let bound = bound as u32;
            for alpha in 0..=bound {
                for beta in 0..=bound - alpha {
                    out.push(ConstraintIndex { u, v, alpha, beta });
                }
            }
        }
    }
    out
}

/// Rows indexed by [`constraint_set`], columns by `r = 0..=n`. Each row is
/// divided by the gcd of its entries.
pub fn constraint_matrix(k: u32, l: u32, s: u32, t: u32, n: u32) -> Result<Matrix> {
    BracketParams::new(n, k, s, l, t)?;
    let (k, l, n) = (k as i64, l as i64, n as i64);
    let rows = constraint_set(s, t, n as u32)
        .into_iter()
        .map(|c| {
            let (u, v, a, b) = (c.u as i64, c.v as i64, c.alpha as i64, c.beta as i64);
            let row: Vec<Rational> = (0..=n)
                .map(|r| {
                    binom_q(r, a)
                        * binom_q(n - r, b)
                        * int_to_rat(factorial((k + r - u - 1) as u64))
                        * int_to_rat(factorial((l + n - r - v - 1) as u64))
                })
                .collect();
            primitive_integer_vector(&row).into_iter().map(int_to_rat).collect()
        })
        .collect();
    Ok(Matrix::new(n as usize + 1, rows))
}

/// Same matrix without row normalization.
pub fn raw_constraint_row(k: u32, l: u32, n: u32, c: ConstraintIndex) -> Vec<BigInt> {
    let (k, l, n) = (k as i64, l as i64, n as i64);
    let (u, v, a, b) = (c.u as i64, c.v as i64, c.alpha as i64, c.beta as i64);
    (0..=n)
        .map(|r| {
            crate::numkernel::binom(r, a)
                * crate::numkernel::binom(n - r, b)
                * factorial((k + r - u - 1) as u64)
                * factorial((l + n - r - v - 1) as u64)
        })
        .collect()
}

/// Solves the constraint system and checks that its kernel is the line spanned
/// by the closed-form coefficient vector, which is returned.
pub fn solve_and_confirm(k: u32, l: u32, s: u32, t: u32, n: u32) -> Result<CoeffVector> {
    if n == 0 {
        return Err(Error::invalid("the constraint system needs n >= 1"));
    }
    let params = BracketParams::new(n, k, s, l, t)?;
    let m = constraint_matrix(k, l, s, t, n)?;
    let kernel = nullspace(&m);
    if kernel.len() != 1 {
        return Err(Error::Discrepancy(format!(
            "kernel of the constraint system for {params} has dimension {}",
            kernel.len()
        )));
    }
    let closed = rc_coeffs(&params);
    if !proportional(&kernel[0], closed.as_slice()) {
        return Err(Error::Discrepancy(format!(
            "kernel vector for {params} is not proportional to {closed}"
        )));
    }
    Ok(closed)
}

pub fn proportional(a: &[Rational], b: &[Rational]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let Some(i) = b.iter().position(|x| !x.is_zero()) else {
        return a.iter().all(Zero::is_zero);
    };
    if a[i].is_zero() {
        return false;
    }
    let lambda = &a[i] / &b[i];
    a.iter().zip(b).all(|(x, y)| *x == &lambda * y)
}

/// Truncated exponential-type series used in the existence argument.
fn truncated(order: usize, coeff: impl Fn(i64) -> Rational) -> Vec<Rational> {
    (0..=order as i64).map(coeff).collect()
}

fn product(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().min(b.len());
    (0..n)
        .map(|i| (0..=i).fold(Rational::zero(), |acc, j| acc + &a[j] * &b[i - j]))
        .collect()
}

fn exp_series(order: usize, sign: i64) -> Vec<Rational> {
    truncated(order, |r| {
        let s = if sign < 0 && r % 2 == 1 { rat(-1) } else { rat(1) };
        s / int_to_rat(factorial(r as u64))
    })
}

/// `P1(X) = sum_r (-1)^r / r! C(r, alpha) C(k-u-1+r, s-u) X^r`.
pub fn p1_series(k: u32, s: u32, u: u32, alpha: u32, order: usize) -> Vec<Rational> {
    let (k, s, u, a) = (k as i64, s as i64, u as i64, alpha as i64);
    truncated(order, |r| {
        let c = binom_q(r, a) * binom_q(k - u - 1 + r, s - u) / int_to_rat(factorial(r as u64));
        if r % 2 == 1 { -c } else { c }
    })
}

/// `P2(X) = sum_r 1/r! C(r, beta) C(l-v-1+r, t-v) X^r`.
pub fn p2_series(l: u32, t: u32, v: u32, beta: u32, order: usize) -> Vec<Rational> {
    let (l, t, v, b) = (l as i64, t as i64, v as i64, beta as i64);
    truncated(order, |r| {
        binom_q(r, b) * binom_q(l - v - 1 + r, t - v) / int_to_rat(factorial(r as u64))
    })
}

/// `Pi1(X) = sum_{r=alpha}^{s-u+alpha} (-1)^r C(k+alpha-u-1, k+r-s-1) C(r, alpha) X^r / r!`,
/// the polynomial with `P1 = Pi1 exp(-X)`.
pub fn pi1_polynomial(k: u32, s: u32, u: u32, alpha: u32) -> Vec<Rational> {
    let (k, s, u, a) = (k as i64, s as i64, u as i64, alpha as i64);
    let deg = (s - u + a) as usize;
    truncated(deg, |r| {
        if r < a {
            return Rational::zero();
        }
        let c = binom_q(k + a - u - 1, k + r - s - 1) * binom_q(r, a) / int_to_rat(factorial(r as u64));
        if r % 2 == 1 { -c } else { c }
    })
}

/// `Pi2(X) = sum_{r=beta}^{t-v+beta} C(l+beta-v-1, l+r-t-1) C(r, beta) X^r / r!`,
/// the polynomial with `P2 = Pi2 exp(X)`.
pub fn pi2_polynomial(l: u32, t: u32, v: u32, beta: u32) -> Vec<Rational> {
    let (l, t, v, b) = (l as i64, t as i64, v as i64, beta as i64);
    let deg = (t - v + b) as usize;
    truncated(deg, |r| {
        if r < b {
            return Rational::zero();
        }
        binom_q(l + b - v - 1, l + r - t - 1) * binom_q(r, b) / int_to_rat(factorial(r as u64))
    })
}

fn padded(mut v: Vec<Rational>, len: usize) -> Vec<Rational> {
    v.resize(len, Rational::zero());
    v.truncate(len);
    v
}

/// Checks, as power series truncated at `X^order`: `P1 = Pi1 e^{-X}`,
/// `P2 = Pi2 e^{X}`, and that `P1 P2` is a polynomial of degree exactly
/// `alpha + beta + s + t - u - v` (which needs `order` at least that degree).
#[allow(clippy::too_many_arguments)]
pub fn pi_polynomial_check(
    k: u32,
    l: u32,
    s: u32,
    t: u32,
    u: u32,
    v: u32,
    alpha: u32,
    beta: u32,
    order: usize,
) -> Result<bool> {
    if u > s || v > t || s > k / 2 || t > l / 2 || k == 0 || l == 0 {
        return Err(Error::invalid("need 0 <= u <= s <= k/2 and 0 <= v <= t <= l/2"));
    }
    let len = order + 1;
    let p1 = p1_series(k, s, u, alpha, order);
    let p2 = p2_series(l, t, v, beta, order);
    let pi1 = padded(pi1_polynomial(k, s, u, alpha), len);
    let pi2 = padded(pi2_polynomial(l, t, v, beta), len);
    let ok1 = product(&pi1, &exp_series(order, -1)) == p1;
    let ok2 = product(&pi2, &exp_series(order, 1)) == p2;
    let degree = (alpha + beta + s + t) as usize - (u + v) as usize;
    if degree > order {
        return Err(Error::invalid(format!("order {order} is below the degree {degree}")));
    }
    let p1p2 = product(&p1, &p2);
    let ok3 = !p1p2[degree].is_zero() && p1p2[degree + 1..].iter().all(Zero::is_zero);
    Ok(ok1 && ok2 && ok3)
}

/// The left side of the existence identity: the coefficient of `X^n` in `P1 P2`,
/// computed as a finite sum over `r1 + r2 = n`.
pub fn existence_sum(k: u32, l: u32, s: u32, t: u32, n: u32, c: ConstraintIndex) -> Rational {
    let (k, l, s, t, n) = (k as i64, l as i64, s as i64, t as i64, n as i64);
    let (u, v, a, b) = (c.u as i64, c.v as i64, c.alpha as i64, c.beta as i64);
    (0..=n).fold(Rational::zero(), |acc, r1| {
        let r2 = n - r1;
        let sign = if r1 % 2 == 1 { -Rational::one() } else { Rational::one() };
        let term = sign * binom_q(r1, a) * binom_q(r2, b) * binom_q(k - u - 1 + r1, s - u)
            * binom_q(l - v - 1 + r2, t - v)
            / int_to_rat(factorial(r1 as u64) * factorial(r2 as u64));
        acc + term
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ci(u: u32, v: u32, alpha: u32, beta: u32) -> ConstraintIndex {
        ConstraintIndex { u, v, alpha, beta }
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|x| rat(*x)).collect()
    }

    #[test]
    fn constraint_sets() {
        assert_eq!(constraint_set(0, 0, 1), vec![ci(0, 0, 0, 0)]);
        assert_eq!(constraint_set(1, 1, 1), vec![ci(1, 1, 0, 0)]);
        let mut expected =
            vec![ci(1, 0, 0, 0), ci(0, 1, 0, 0), ci(1, 1, 0, 0), ci(1, 1, 1, 0), ci(1, 1, 0, 1)];
        expected.sort();
        assert_eq!(constraint_set(1, 1, 2), expected);
        assert!(constraint_set(0, 0, 0).is_empty());
    }

    #[test]
    fn constraint_rows() {
        assert_eq!(
            raw_constraint_row(2, 2, 1, ci(0, 0, 0, 0)),
            vec![BigInt::from(2), BigInt::from(2)]
        );
        assert_eq!(
            raw_constraint_row(2, 12, 1, ci(1, 0, 0, 0)),
            vec![factorial(12), factorial(11)]
        );
        assert!(raw_constraint_row(4, 4, 2, ci(0, 0, 3, 0)).iter().all(Zero::is_zero));
        let m = constraint_matrix(2, 12, 1, 0, 1).unwrap();
        assert_eq!(m.nrows(), 1);
        assert_eq!(m.row(0), &ints(&[12, 1])[..]);
    }

    #[test]
    fn kernels() {
        assert_eq!(solve_and_confirm(2, 2, 1, 1, 4).unwrap().0, ints(&[1, -16, 36, -16, 1]));
        assert_eq!(solve_and_confirm(2, 12, 1, 0, 1).unwrap().0, ints(&[1, -12]));
        let k = nullspace(&constraint_matrix(4, 6, 0, 0, 1).unwrap());
        assert!(proportional(&k[0], &ints(&[4, -6])));
        assert!(solve_and_confirm(2, 2, 1, 1, 0).is_err());
    }

    #[test]
    fn wrong_vector_is_not_proportional() {
        assert!(!proportional(&ints(&[1, 2]), &ints(&[1, -2])));
        assert!(proportional(&ints(&[0, 0]), &ints(&[0, 0])));
        assert!(proportional(&ints(&[-2, 4]), &ints(&[1, -2])));
    }

    #[test]
    fn closed_form_satisfies_every_row() {
        for (k, l) in [(2, 2), (4, 12), (8, 6)] {
            for s in 0..=k / 2 {
                for t in 0..=l / 2 {
                    for n in 1..=5 {
                        let p = BracketParams::new(n, k, s, l, t).unwrap();
                        let a = rc_coeffs(&p);
                        let m = constraint_matrix(k, l, s, t, n).unwrap();
                        assert!(m.mul_vec(a.as_slice()).iter().all(Zero::is_zero), "{p}");
                        for c in constraint_set(s, t, n) {
                            assert!(existence_sum(k, l, s, t, n, c).is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pi_polynomials() {
        // (u, v, alpha, beta) = (s, t, 0, 0): P1 P2 has degree 0
        assert!(pi_polynomial_check(6, 8, 2, 3, 2, 3, 0, 0, 10).unwrap());
        // alpha = 0, u = s: Pi1 is a constant
        let pi1 = pi1_polynomial(6, 2, 2, 0);
        assert_eq!(pi1, ints(&[1]));
        for k in (2..=10).step_by(2) {
            for s in 0..=k / 2 {
                for u in 0..=s {
                    for alpha in 0..4 {
                        for (l, t, v, beta) in [(2, 1, 0, 0), (6, 3, 1, 2), (12, 2, 2, 1)] {
                            assert!(
                                pi_polynomial_check(k, l, s, t, u, v, alpha, beta, 16).unwrap(),
                                "k={k} s={s} u={u} alpha={alpha}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sign_swapped_variant_does_not_match() {
        // the same polynomial with the alternating sign moved onto alpha fails
        let (k, s, u, alpha) = (2u32, 1u32, 0u32, 0u32);
        let order = 8;
        let swapped: Vec<Rational> = pi1_polynomial(k, s, u, alpha)
            .iter()
            .enumerate()
            .map(|(r, c)| if r % 2 == 1 { -c.clone() } else { c.clone() })
            .collect();
        let lhs = product(&padded(swapped, order + 1), &exp_series(order, -1));
        assert_ne!(lhs, p1_series(k, s, u, alpha, order));
    }
}

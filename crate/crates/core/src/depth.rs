//! Normalized depth components.
//!
//! For `f` of weight `k` and depth `s` the transformation law reads
//! `f|_k g = sum_i Q_i(f) X(g)^i`. With `E2|_2 g = E2 + (12 / 2 pi i) X(g)` and
//! `E4`, `E6` modular, substituting into the polynomial shows that
//! `Q_i(f) = (12 / 2 pi i)^i R_i(f)` where `R_i(f)` is the `i`-th Taylor
//! coefficient of `f` in the variable `E2`. Working with `R_i` keeps every
//! coefficient rational; each law below is the classical one with that
//! substitution made.

use crate::numkernel::{binom_q, factorial, int_to_rat, rat, ratio, Rational};
use crate::ring::{GradedPoly, QuasiForm};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthComponents {
    base: QuasiForm,
    parts: Vec<GradedPoly>,
}

impl DepthComponents {
    pub fn base(&self) -> &QuasiForm {
        &self.base
    }

    /// `R_0 .. R_s` for the declared depth bound `s`.
    pub fn parts(&self) -> &[GradedPoly] {
        &self.parts
    }

    /// `R_i`, zero outside `0 ..= s`.
    pub fn get(&self, i: i64) -> GradedPoly {
        usize::try_from(i)
            .ok()
            .and_then(|i| self.parts.get(i).cloned())
            .unwrap_or_default()
    }
}

pub fn components(f: &QuasiForm) -> DepthComponents {
    let parts = (0..=f.depth()).map(|i| f.poly().e2_taylor(i)).collect();
    DepthComponents { base: f.clone(), parts }
}

/// `R_i` of a bare polynomial, zero for negative `i`.
fn r(p: &GradedPoly, i: i64) -> GradedPoly {
    if i < 0 {
        GradedPoly::zero()
    } else {
        p.e2_taylor(i as u32)
    }
}

fn positive_weight(f: &QuasiForm) -> Result<()> {
    if f.weight() == 0 {
        return Err(Error::invalid("derivative laws need positive weight"));
    }
    Ok(())
}

/// `R_i(Df) = D R_i(f) + ((k - i + 1)/12) R_{i-1}(f)` for every `i`.
pub fn check_first_derivative_law(f: &QuasiForm) -> Result<bool> {
    positive_weight(f)?;
    let k = f.weight() as i64;
    let p = f.poly();
    let dp = p.derive();
    let ok = (0..=f.depth() as i64 + 1).all(|i| {
        let rhs = &r(p, i).derive() + &r(p, i - 1).scale(&ratio(k - i + 1, 12));
        r(&dp, i) == rhs
    });
    Ok(ok)
}

/// `R_i(D^r f) = sum_j 12^{-j} j! C(r, j) C(k + r - i + j - 1, j) D^{r-j} R_{i-j}(f)`
/// for `0 <= i <= s + r`, and `R_i(D^r f) = 0` beyond.
pub fn check_derqm(f: &QuasiForm, r_order: u32) -> Result<bool> {
    positive_weight(f)?;
    let k = f.weight() as i64;
    let s = f.depth() as i64;
    let rr = r_order as i64;
    let p = f.poly();
    let lhs_form = p.derive_n(r_order);
    // D^m R_u(f) for every u <= s, m <= r
    let derived: Vec<Vec<GradedPoly>> = (0..=s).map(|u| r(p, u).derivatives(r_order)).collect();
    for i in 0..=s + rr {
        let mut rhs = GradedPoly::zero();
        for j in 0..=rr.min(i) {
            let u = i - j;
            if u > s {
                continue;
            }
            let c = int_to_rat(factorial(j as u64)) * binom_q(rr, j) * binom_q(k + rr - i + j - 1, j)
                / rat(12).pow(j as i32);
            rhs = &rhs + &derived[u as usize][(rr - j) as usize].scale(&c);
        }
        if r(&lhs_form, i) != rhs {
            return Ok(false);
        }
    }
    Ok((s + rr + 1..=s + rr + 2).all(|i| r(&lhs_form, i).is_zero()))
}

/// The leading normalized component of `D^s g` for modular `g` of weight `k - 2s`:
/// `R_s(D^s g) = 12^{-s} s! C(k - s - 1, s) g`.
pub fn qsds_constant(k: u32, s: u32) -> Rational {
    let (k, s) = (k as i64, s as i64);
    int_to_rat(factorial(s as u64)) * binom_q(k - s - 1, s) / rat(12).pow(s as i32)
}

pub fn check_qsds(g: &QuasiForm, s: u32) -> Result<bool> {
    if s == 0 {
        return Err(Error::invalid("check_qsds needs s >= 1"));
    }
    if g.exact_depth().unwrap_or(0) != 0 {
        return Err(Error::invalid(format!("{g} is not modular")));
    }
    let k = g.weight() + 2 * s;
    let lhs = g.poly().derive_n(s).e2_taylor(s);
    Ok(lhs == g.poly().scale(&qsds_constant(k, s)))
}

/// `R_i(fg) = sum_j R_j(f) R_{i-j}(g)`.
pub fn check_product_law(f: &QuasiForm, g: &QuasiForm) -> bool {
    let fg = f.poly() * g.poly();
    let top = (f.depth() + g.depth()) as i64;
    (0..=top + 1).all(|i| {
        let rhs = (0..=i).fold(GradedPoly::zero(), |acc, j| &acc + &(&r(f.poly(), j) * &r(g.poly(), i - j)));
        r(&fg, i) == rhs
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Monomial;

    fn form(p: GradedPoly) -> QuasiForm {
        QuasiForm::from_poly(p).unwrap()
    }

    /// Every monomial of weight `k` and depth at most `s`, declared at depth `s`.
    fn basis(k: u32, s: u32) -> Vec<QuasiForm> {
        Monomial::of_weight(k, s)
            .into_iter()
            .map(|m| QuasiForm::new(GradedPoly::monomial(m), k, s).unwrap())
            .collect()
    }

    #[test]
    fn components_of_generators() {
        let c = components(&QuasiForm::e2());
        assert_eq!(c.parts(), &[GradedPoly::e2(), GradedPoly::one()]);
        let e2sq = QuasiForm::e2().pow(2);
        let c = components(&e2sq);
        assert_eq!(
            c.parts(),
            &[GradedPoly::e2().pow(2), GradedPoly::e2().scale(&rat(2)), GradedPoly::one()]
        );
        let c = components(&QuasiForm::delta());
        assert_eq!(c.parts(), &[GradedPoly::delta()]);
        assert!(c.get(1).is_zero() && c.get(-1).is_zero());
    }

    #[test]
    fn components_respect_grading() {
        for f in basis(12, 6) {
            for (i, part) in components(&f).parts().iter().enumerate() {
                assert!(part.is_homogeneous_of(12 - 2 * i as u32));
                assert!(part.depth_of().is_none_or(|d| d <= 6 - i as u32));
            }
        }
    }

    #[test]
    fn first_derivative_law_examples() {
        // R_1(D E2) = E2/6 = D(1) + (2/12) E2
        let de2 = GradedPoly::e2().derive();
        assert_eq!(de2.e2_taylor(1), GradedPoly::e2().scale(&ratio(1, 6)));
        assert!(check_first_derivative_law(&QuasiForm::e2()).unwrap());
        assert!(check_first_derivative_law(&QuasiForm::delta()).unwrap());
        assert!(check_first_derivative_law(&QuasiForm::e2().mul(&QuasiForm::e4())).unwrap());
        assert!(check_first_derivative_law(&QuasiForm::constant(rat(1))).is_err());
    }

    #[test]
    fn derqm_examples() {
        assert!(check_derqm(&QuasiForm::e2(), 1).unwrap());
        assert!(check_derqm(&QuasiForm::delta(), 3).unwrap());
        assert!(check_derqm(&QuasiForm::e2().pow(2), 2).unwrap());
    }

    #[test]
    fn derqm_detects_a_wrong_constant() {
        // the same law with 12^{-j} replaced by 6^{-j} must fail
        let f = QuasiForm::e2();
        let k = 2i64;
        let lhs = f.poly().derive().e2_taylor(1);
        let wrong = &f.poly().e2_taylor(1).derive()
            + &f.poly().scale(&(binom_q(1, 1) * binom_q(k + 1 - 1 + 1 - 1, 1) / rat(6)));
        assert_ne!(lhs, wrong);
    }

    #[test]
    fn qsds_examples() {
        // R_1(D E4) = (1/12) 1! C(4, 1) E4 = E4 / 3
        assert_eq!(qsds_constant(6, 1), ratio(1, 3));
        assert!(check_qsds(&QuasiForm::e4(), 1).unwrap());
        assert!(check_qsds(&QuasiForm::delta(), 2).unwrap());
        assert!(check_qsds(&QuasiForm::constant(rat(1)), 1).unwrap());
        assert_eq!(qsds_constant(2, 1), rat(0));
        assert!(check_qsds(&QuasiForm::e2(), 1).is_err());
    }

    #[test]
    fn laws_on_generated_bases() {
        for k in (2..=16).step_by(2) {
            for s in 0..=k / 2 {
                for f in basis(k, s) {
                    assert!(check_first_derivative_law(&f).unwrap(), "{f}");
                    for r in 0..=4 {
                        assert!(check_derqm(&f, r).unwrap(), "{f} r={r}");
                    }
                }
            }
            for g in basis(k, 0) {
                for s in 1..=4 {
                    assert!(check_qsds(&g, s).unwrap(), "{g} s={s}");
                }
            }
        }
    }

    #[test]
    fn product_law_on_bases() {
        for f in basis(6, 3) {
            for g in basis(8, 2) {
                assert!(check_product_law(&f, &g));
            }
        }
        let f = form(&GradedPoly::e2().pow(3) + &GradedPoly::e6());
        assert!(check_product_law(&f, &QuasiForm::e2()));
    }

    #[test]
    fn components_vanish_above_half_weight() {
        for f in basis(10, 5) {
            assert!(f.poly().e2_taylor(6).is_zero());
        }
    }
}

//! Rankin-Cohen brackets on quasimodular forms.
//!
//! For `f` in `M_k^{<= s}` and `g` in `M_l^{<= t}`,
//!
//! ```text
//! Phi_{n;k,s;l,t}(f, g) = sum_{r=0}^{n} (-1)^r C(k-s+n-1, n-r) C(l-t+n-1, r) D^r f D^{n-r} g
//! ```
//!
//! lands in `M_{k+l+2n}^{<= s+t}`, whereas a generic combination of the
//! products `D^r f D^{n-r} g` only has depth at most `s + t + n`.

use std::fmt;

use crate::linalg::EchelonSpan;
use crate::numkernel::{binom_q, Rational};
use crate::ring::{GradedPoly, Monomial, QuasiForm};
use crate::{Error, Result};

/// The quintuple `(n; k, s; l, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BracketParams {
    pub n: u32,
    pub k: u32,
    pub s: u32,
    pub l: u32,
    pub t: u32,
}

impl BracketParams {
    pub fn new(n: u32, k: u32, s: u32, l: u32, t: u32) -> Result<Self> {
        for (name, w, d) in [("k", k, s), ("l", l, t)] {
            if w == 0 || w % 2 == 1 {
                return Err(Error::invalid(format!("{name} = {w} must be a positive even weight")));
            }
            if d > w / 2 {
                return Err(Error::invalid(format!("depth {d} exceeds {name}/2 = {}", w / 2)));
            }
        }
        Ok(BracketParams { n, k, s, l, t })
    }

    /// Weight of the bracket.
    pub fn weight(&self) -> u32 {
        self.k + self.l + 2 * self.n
    }

    /// Depth bound of the bracket.
    pub fn depth(&self) -> u32 {
        self.s + self.t
    }
}

impl fmt::Display for BracketParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}, {}; {}, {})", self.n, self.k, self.s, self.l, self.t)
    }
}

/// `(a_0, ..., a_n)`, the weights of `D^r f D^{n-r} g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffVector(pub Vec<Rational>);

impl CoeffVector {
    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }
}

impl fmt::Display for CoeffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `a_r = (-1)^r C(k-s+n-1, n-r) C(l-t+n-1, r)`.
pub fn rc_coeffs(p: &BracketParams) -> CoeffVector {
    let (n, ks, lt) = (p.n as i64, (p.k - p.s) as i64, (p.l - p.t) as i64);
    CoeffVector(
        (0..=n)
            .map(|r| {
                let c = binom_q(ks + n - 1, n - r) * binom_q(lt + n - 1, r);
                if r % 2 == 0 { c } else { -c }
            })
            .collect(),
    )
}

/// `sum_r coeffs[r] D^r f D^{n-r} g` with `n = coeffs.len() - 1`.
pub fn bilinear_form(coeffs: &[Rational], f: &GradedPoly, g: &GradedPoly) -> GradedPoly {
    let n = coeffs.len().saturating_sub(1) as u32;
    let df = f.derivatives(n);
    let dg = g.derivatives(n);
    combine(coeffs, &df, &dg)
}

/// Same as [`bilinear_form`] with precomputed derivative ladders.
pub fn combine(coeffs: &[Rational], df: &[GradedPoly], dg: &[GradedPoly]) -> GradedPoly {
    let n = coeffs.len() - 1;
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, a)| !num_traits::Zero::is_zero(*a))
        .fold(GradedPoly::zero(), |acc, (r, a)| &acc + &(&df[r] * &dg[n - r]).scale(a))
}

/// Parameters read off the forms: declared weights and exact depths.
pub fn default_params(f: &QuasiForm, g: &QuasiForm, n: u32) -> Result<BracketParams> {
    BracketParams::new(
        n,
        f.weight(),
        f.exact_depth().unwrap_or(0),
        g.weight(),
        g.exact_depth().unwrap_or(0),
    )
}

/// `Phi_{n;k,s;l,t}(f, g)`. Without an override the parameters are the
/// weights and exact depths of `f` and `g` (the bracket `[f, g]_n`). An
/// override must agree on weights and may only loosen depth bounds.
///
/// The depth of the result is checked against `s + t`.
pub fn bracket(
    f: &QuasiForm,
    g: &QuasiForm,
    n: u32,
    override_params: Option<BracketParams>,
) -> Result<QuasiForm> {
    if f.weight() == 0 || g.weight() == 0 {
        return Err(Error::invalid("brackets need forms of positive weight"));
    }
    let p = match override_params {
        None => default_params(f, g, n)?,
        Some(p) => {
            let p = BracketParams::new(p.n, p.k, p.s, p.l, p.t)?;
            if p.n != n || p.k != f.weight() || p.l != g.weight() {
                return Err(Error::invalid(format!(
                    "parameters {p} do not match n = {n} and weights {}, {}",
                    f.weight(),
                    g.weight()
                )));
            }
            for (form, bound) in [(f, p.s), (g, p.t)] {
                if form.exact_depth().is_some_and(|d| d > bound) {
                    return Err(Error::invalid(format!("{form} has depth above the bound {bound}")));
                }
            }
            p
        }
    };
    let poly = bilinear_form(rc_coeffs(&p).as_slice(), f.poly(), g.poly());
    if let Some(d) = poly.depth_of() {
        if d > p.depth() {
            return Err(Error::DepthBound { computed: d, bound: p.depth() });
        }
    }
    QuasiForm::new(poly, p.weight(), p.depth())
}

/// `D Phi_{n;k,s;l,t}(f,g) = Phi_{n;k,s;l+2,t+1}(f, Dg) + Phi_{n;k+2,s+1;l,t}(Df, g)`,
/// with `(k, s; l, t)` the weights and exact depths of `f`, `g`.
pub fn check_leibniz(f: &QuasiForm, g: &QuasiForm, n: u32) -> Result<bool> {
    check_leibniz_with(f, g, default_params(f, g, n)?)
}

/// The Leibniz rule for explicit parameters (depth bounds may be loose).
pub fn check_leibniz_with(f: &QuasiForm, g: &QuasiForm, p: BracketParams) -> Result<bool> {
    let shifted_g = BracketParams::new(p.n, p.k, p.s, p.l + 2, p.t + 1)?;
    let shifted_f = BracketParams::new(p.n, p.k + 2, p.s + 1, p.l, p.t)?;
    let lhs = bracket(f, g, p.n, Some(p))?.poly().derive();
    let a = bracket(f, &g.derive(), p.n, Some(shifted_g))?;
    let b = bracket(&f.derive(), g, p.n, Some(shifted_f))?;
    Ok(lhs == a.poly() + b.poly())
}

/// The Leibniz rule at the level of coefficients, in the basis
/// `f^{(i)} g^{(n+1-i)}`, `i = 0 ..= n+1`. Compares three vectors: the
/// derivative of the bracket computed termwise, the closed form for it, and
/// the closed form for the sum of the two shifted brackets.
pub fn leibniz_coefficient_vectors(p: &BracketParams) -> [Vec<Rational>; 3] {
    let n = p.n as usize;
    let a = rc_coeffs(p).0;
    let zero = Rational::default();
    let termwise: Vec<Rational> = (0..=n + 1)
        .map(|i| {
            let left = if i > 0 { a[i - 1].clone() } else { zero.clone() };
            let right = a.get(i).cloned().unwrap_or_default();
            left + right
        })
        .collect();

    let (nn, ks, lt) = (p.n as i64, (p.k - p.s) as i64, (p.l - p.t) as i64);
    let sign = |r: i64| if r % 2 == 0 { Rational::from_integer(1.into()) } else { Rational::from_integer((-1).into()) };
    let ends = |v: &mut Vec<Rational>| {
        v[0] = binom_q(ks + nn - 1, nn);
        v[n + 1] = sign(nn) * binom_q(lt + nn - 1, nn);
    };

    let mut derived = vec![zero.clone(); n + 2];
    ends(&mut derived);
    for r in 0..nn {
        derived[r as usize + 1] = sign(r)
            * (binom_q(ks + nn - 1, nn - r) * binom_q(lt + nn - 1, r)
                - binom_q(ks + nn - 1, nn - r - 1) * binom_q(lt + nn - 1, r + 1));
    }

    let mut shifted = vec![zero; n + 2];
    ends(&mut shifted);
    for r in 0..nn {
        shifted[r as usize + 1] = sign(r)
            * (binom_q(ks + nn, nn - r) * binom_q(lt + nn - 1, r)
                - binom_q(ks + nn - 1, nn - r - 1) * binom_q(lt + nn, r + 1));
    }
    [termwise, derived, shifted]
}

/// Finds `h` with `Delta h = Phi(f, Delta g)`, where the bracket is taken with
/// the weights and exact depths of `f` and `Delta g`.
pub fn delta_factor(f: &QuasiForm, g: &QuasiForm, n: u32) -> Result<QuasiForm> {
    let dg = QuasiForm::delta().mul(g);
    let phi = bracket(f, &dg, n, None)?;
    let weight = f.weight() + g.weight() + 2 * n;
    let depth = phi.depth();
    let basis = Monomial::of_weight(weight, depth);
    let delta = GradedPoly::delta();
    let span = EchelonSpan::from_generators(
        basis.iter().map(|m| (&GradedPoly::monomial(*m) * &delta).to_vector()),
    );
    let coords = span.coordinates(phi.poly().to_vector()).ok_or_else(|| {
        Error::Discrepancy(format!("{} is not Delta times a form of weight {weight}", phi))
    })?;
    let h = GradedPoly::from_terms(basis.into_iter().zip(coords));
    if &(&delta * &h) != phi.poly() {
        return Err(Error::Discrepancy("Delta-factor verification failed".into()));
    }
    QuasiForm::new(h, weight, depth.min(weight / 2))
}

//! Graded pieces of the ring as explicit finite-dimensional spaces.
//!
//! Modular forms of weight `w` are spanned by `E4^a E6^b` with `4a + 6b = w`,
//! cusp forms by `Delta * M_{w-12}`. Membership questions are answered by exact
//! elimination on polynomial coefficients.

use std::fmt;

use num_traits::Zero;

use crate::depth::qsds_constant;
use crate::linalg::EchelonSpan;
use crate::numkernel::{factorial, int_to_rat, rat, Rational};
use crate::ring::{GradedPoly, Monomial, QuasiForm};
use crate::{Error, Result};

fn check_even(w: i64) -> Result<()> {
    if w.rem_euclid(2) == 1 {
        return Err(Error::Grading(format!("odd weight {w}")));
    }
    Ok(())
}

/// `E4^a E6^b` with `4a + 6b = w`; empty for negative `w` and for `w = 2`.
pub fn basis_modular(w: i64) -> Result<Vec<GradedPoly>> {
    check_even(w)?;
    if w < 0 {
        return Ok(Vec::new());
    }
    Ok(Monomial::of_weight(w as u32, 0).into_iter().map(GradedPoly::monomial).collect())
}

/// `Delta * m` for `m` in the basis of `M_{w-12}`.
pub fn basis_cusp(w: i64) -> Result<Vec<GradedPoly>> {
    check_even(w)?;
    let delta = GradedPoly::delta();
    Ok(basis_modular(w - 12)?.iter().map(|m| &delta * m).collect())
}

/// Every monomial of weight `w` with `E2`-degree at most `s`.
pub fn basis_quasimodular(w: u32, s: u32) -> Vec<GradedPoly> {
    Monomial::of_weight(w, s).into_iter().map(GradedPoly::monomial).collect()
}

/// One direct summand of a [`SpaceSpec`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Summand {
    Modular(i64),
    Cusp(i64),
    /// `D^j M_w`
    DerivedModular(u32, i64),
    /// `D^j S_w`
    DerivedCusp(u32, i64),
    Line(QuasiForm),
}

impl Summand {
    pub fn weight(&self) -> i64 {
        match self {
            Summand::Modular(w) | Summand::Cusp(w) => *w,
            Summand::DerivedModular(j, w) | Summand::DerivedCusp(j, w) => w + 2 * *j as i64,
            Summand::Line(f) => f.weight() as i64,
        }
    }

    pub fn generators(&self) -> Result<Vec<GradedPoly>> {
        Ok(match self {
            Summand::Modular(w) => basis_modular(*w)?,
            Summand::Cusp(w) => basis_cusp(*w)?,
            Summand::DerivedModular(j, w) => basis_modular(*w)?.iter().map(|m| m.derive_n(*j)).collect(),
            Summand::DerivedCusp(j, w) => basis_cusp(*w)?.iter().map(|m| m.derive_n(*j)).collect(),
            Summand::Line(f) => vec![f.poly().clone()],
        })
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Summand::Modular(w) => write!(f, "M_{w}"),
            Summand::Cusp(w) => write!(f, "S_{w}"),
            Summand::DerivedModular(j, w) => write!(f, "D^{j} M_{w}"),
            Summand::DerivedCusp(j, w) => write!(f, "D^{j} S_{w}"),
            Summand::Line(g) => write!(f, "C({g})"),
        }
    }
}

/// A direct sum of summands of a common weight.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpaceSpec {
    pub summands: Vec<Summand>,
}

impl SpaceSpec {
    pub fn new(summands: Vec<Summand>) -> Self {
        SpaceSpec { summands }
    }

    fn weight(&self) -> Result<Option<i64>> {
        let mut weights = self.summands.iter().map(Summand::weight);
        let Some(w) = weights.next() else { return Ok(None) };
        if let Some(other) = weights.find(|x| *x != w) {
            return Err(Error::Grading(format!("summands of weights {w} and {other} in {self}")));
        }
        Ok(Some(w))
    }

    /// Precomputes an echelon basis for repeated membership queries.
    pub fn span(&self) -> Result<Span> {
        let weight = self.weight()?;
        let mut sizes = Vec::with_capacity(self.summands.len());
        let mut echelon = EchelonSpan::new();
        for s in &self.summands {
            let gens = s.generators()?;
            sizes.push(gens.len());
            for g in gens {
                echelon.push(g.to_vector());
            }
        }
        Ok(Span { weight, sizes, echelon })
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.summands.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Coordinates grouped per summand, in the order of the summand's generators.
pub type Coordinates = Vec<Vec<Rational>>;

#[derive(Clone, Debug)]
pub struct Span {
    weight: Option<i64>,
    sizes: Vec<usize>,
    echelon: EchelonSpan<Monomial>,
}

impl Span {
    pub fn dimension(&self) -> usize {
        self.echelon.rank()
    }

    pub fn coordinates(&self, f: &QuasiForm) -> Result<Option<Coordinates>> {
        if let Some(w) = self.weight {
            if w != f.weight() as i64 && !f.is_zero() {
                return Err(Error::Grading(format!("form of weight {} tested against weight {w}", f.weight())));
            }
        }
        Ok(self.coordinates_of(f.poly()))
    }

    /// Membership of a bare polynomial (no weight check).
    pub fn coordinates_of(&self, p: &GradedPoly) -> Option<Coordinates> {
        let flat = self.echelon.coordinates(p.to_vector())?;
        let mut it = flat.into_iter();
        Some(self.sizes.iter().map(|n| it.by_ref().take(*n).collect()).collect())
    }

    pub fn contains(&self, p: &GradedPoly) -> bool {
        self.echelon.contains(p.to_vector())
    }
}

/// Exact coordinates of `f` in the concatenated bases of `spec`, if it lies in
/// their span.
pub fn membership(f: &QuasiForm, spec: &SpaceSpec) -> Result<Option<Coordinates>> {
    spec.span()?.coordinates(f)
}

/// `f = sum_j D^j m_j + c D^{k/2-1} E2` with `m_j` modular of weight `k - 2j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub weight: u32,
    /// `(j, m_j)`, decreasing in `j`, zero parts omitted.
    pub parts: Vec<(u32, GradedPoly)>,
    /// Coefficient on `D^{k/2-1} E2`.
    pub line: Option<Rational>,
}

impl Decomposition {
    pub fn reassemble(&self) -> GradedPoly {
        let mut acc = self
            .parts
            .iter()
            .fold(GradedPoly::zero(), |acc, (j, m)| &acc + &m.derive_n(*j));
        if let Some(c) = &self.line {
            acc = &acc + &GradedPoly::e2().derive_n(self.weight / 2 - 1).scale(c);
        }
        acc
    }
}

/// Structure decomposition by descent on the depth.
///
/// At depth `s < k/2` the top component is removed by `D^s m` with
/// `m = 12^s (k-2s-1)!/(k-s-1)! R_s`; at `s = k/2` by a multiple of
/// `D^{k/2-1} E2` with coefficient `12^{k/2-1} R_{k/2} / (k/2-1)!`.
pub fn decompose(f: &QuasiForm) -> Result<Decomposition> {
    let k = f.weight();
    if k == 0 {
        return Err(Error::invalid("decomposition needs positive weight"));
    }
    let half = k / 2;
    let mut residual = f.poly().clone();
    let mut parts = Vec::new();
    let mut line = None;
    while let Some(s) = residual.depth_of() {
        let top = residual.e2_taylor(s);
        if s == half {
            let c = top.constant_term() * rat(12).pow(half as i32 - 1)
                / int_to_rat(factorial(half as u64 - 1));
            residual = &residual - &GradedPoly::e2().derive_n(half - 1).scale(&c);
            line = Some(c);
        } else {
            let m = top.scale(&qsds_constant(k, s).recip());
            residual = &residual - &m.derive_n(s);
            parts.push((s, m));
        }
        if residual.depth_of().is_some_and(|d| d >= s) {
            return Err(Error::Discrepancy(format!("descent stalled at depth {s} for {f}")));
        }
    }
    let out = Decomposition { weight: k, parts, line };
    debug_assert!(out.reassemble() == *f.poly());
    Ok(out)
}

/// The spec `Cusp(w) + sum_{j=1}^{top} D^j M_{w-2j}`, with the top summand
/// replaced by `D^{top} S_{w-2top}` when `cusp_top` is set.
pub fn structure_spec(w: u32, top: u32, cusp_top: bool) -> SpaceSpec {
    let w = w as i64;
    let mut summands = vec![Summand::Cusp(w)];
    for j in 1..=top {
        let rest = w - 2 * j as i64;
        summands.push(if cusp_top && j == top {
            Summand::DerivedCusp(j, rest)
        } else {
            Summand::DerivedModular(j, rest)
        });
    }
    SpaceSpec::new(summands)
}

/// `sum_{j = n mod 2, j <= n-4} D^j S_{2n+4-2j} + C D^n E4 + C D^{n+1} E2`.
pub fn derivative_products_spec(n: u32) -> SpaceSpec {
    let mut summands: Vec<Summand> = (0..=n.saturating_sub(4))
        .filter(|j| n >= 4 && j % 2 == n % 2)
        .map(|j| Summand::DerivedCusp(j, (2 * n + 4 - 2 * j) as i64))
        .collect();
    summands.push(Summand::Line(QuasiForm::e4().derive_n(n)));
    summands.push(Summand::Line(QuasiForm::e2().derive_n(n + 1)));
    SpaceSpec::new(summands)
}

/// `true` if every coordinate is zero.
pub fn is_trivial(c: &Coordinates) -> bool {
    c.iter().flatten().all(Zero::is_zero)
}

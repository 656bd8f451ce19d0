//! The graded ring `Q[E2, E4, E6]` of quasimodular forms of level 1.
//!
//! Generators have weights 2, 4, 6; the depth of a form is its degree in `E2`.
//! `E2`, `E4`, `E6` are algebraically independent, so equality of ring elements
//! is equality of identities between quasimodular forms with no truncation
//! analysis.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::numkernel::{binom_q, format_rational, parse_rational, rat, ratio, Rational};
use crate::qseries::{eisenstein, QSeries};
use crate::{Error, Result};

/// `E2^e2 * E4^e4 * E6^e6`. Ordered lexicographically by `(e2, e4, e6)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub e2: u32,
    pub e4: u32,
    pub e6: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { e2: 0, e4: 0, e6: 0 };

    pub const fn new(e2: u32, e4: u32, e6: u32) -> Self {
        Monomial { e2, e4, e6 }
    }

    pub fn weight(&self) -> u32 {
        2 * self.e2 + 4 * self.e4 + 6 * self.e6
    }

    fn times(self, other: Monomial) -> Monomial {
        Monomial::new(self.e2 + other.e2, self.e4 + other.e4, self.e6 + other.e6)
    }

    /// All monomials of weight `w` with `E2`-degree at most `max_e2`, in
    /// canonical (descending) order.
    pub fn of_weight(w: u32, max_e2: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        if w % 2 == 1 {
            return out;
        }
        for e2 in (0..=max_e2.min(w / 2)).rev() {
            let rest = w - 2 * e2;
            for e4 in (0..=rest / 4).rev() {
                let r = rest - 4 * e4;
                if r.is_multiple_of(6) {
                    out.push(Monomial::new(e2, e4, r / 6));
                }
            }
        }
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, e) in [("E2", self.e2), ("E4", self.e4), ("E6", self.e6)] {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            match e {
                1 => write!(f, "{name}")?,
                _ => write!(f, "{name}^{e}")?,
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Sparse polynomial in `E2, E4, E6` over the rationals. Never stores a zero
/// coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        GradedPoly { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Rational::one())
    }

    pub fn e2() -> Self {
        Self::monomial(Monomial::new(1, 0, 0))
    }

    pub fn e4() -> Self {
        Self::monomial(Monomial::new(0, 1, 0))
    }

    pub fn e6() -> Self {
        Self::monomial(Monomial::new(0, 0, 1))
    }

    /// `Delta = (E4^3 - E6^2) / 1728`.
    pub fn delta() -> Self {
        let c = ratio(1, 1728);
        let mut p = Self::term(Monomial::new(0, 3, 0), c.clone());
        p.add_term(Monomial::new(0, 0, 2), -c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Terms in canonical order: `(e2, e4, e6)` lexicographically descending.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    /// Coefficient table keyed by monomial, for linear algebra.
    pub fn to_vector(&self) -> BTreeMap<Monomial, Rational> {
        self.terms.clone()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_homogeneous_of(&self, w: u32) -> bool {
        self.terms.keys().all(|m| m.weight() == w)
    }

    /// The common weight of every term. The zero polynomial has every weight
    /// and is reported as an error like an inhomogeneous one.
    pub fn weight_of(&self) -> Result<u32> {
        let mut weights = self.terms.keys().map(Monomial::weight);
        let w = weights
            .next()
            .ok_or_else(|| Error::Grading("the zero polynomial has no single weight".into()))?;
        if weights.any(|x| x != w) {
            return Err(Error::Grading(format!("{self} is not weight-homogeneous")));
        }
        Ok(w)
    }

    /// Degree in `E2`; `None` stands for depth `-infinity` (the zero polynomial).
    pub fn depth_of(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.e2).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GradedPoly { terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// The Ramanujan derivation `D = q d/dq`, determined on generators by
    /// `D E2 = (E2^2 - E4)/12`, `D E4 = (E2 E4 - E6)/3`, `D E6 = (E2 E6 - E4^2)/2`.
    pub fn derive(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let Monomial { e2: a, e4: b, e6: d } = *m;
            // every generator's derivative carries an E2 * (generator) term
            let lead = ratio(a as i64, 12) + ratio(b as i64, 3) + ratio(d as i64, 2);
            out.add_term(Monomial::new(a + 1, b, d), c * lead);
            if a > 0 {
                out.add_term(Monomial::new(a - 1, b + 1, d), -c * ratio(a as i64, 12));
            }
            if b > 0 {
                out.add_term(Monomial::new(a, b - 1, d + 1), -c * ratio(b as i64, 3));
            }
            if d > 0 {
                out.add_term(Monomial::new(a, b + 2, d - 1), -c * ratio(d as i64, 2));
            }
        }
        out
    }

    pub fn derive_n(&self, r: u32) -> Self {
        (0..r).fold(self.clone(), |acc, _| acc.derive())
    }

    /// `D^0 p, D^1 p, ..., D^r p`.
    pub fn derivatives(&self, r: u32) -> Vec<GradedPoly> {
        let mut out = Vec::with_capacity(r as usize + 1);
        out.push(self.clone());
        for i in 0..r as usize {
            let next = out[i].derive();
            out.push(next);
        }
        out
    }

    /// The `i`-th Taylor coefficient in `E2`: `(1/i!) d^i/dE2^i`.
    pub fn e2_taylor(&self, i: u32) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.e2 >= i {
                let k = binom_q(m.e2 as i64, i as i64);
                out.add_term(Monomial::new(m.e2 - i, m.e4, m.e6), c * k);
            }
        }
        out
    }

    /// Value at `E2 = E4 = E6 = 1`, which is the constant q-coefficient.
    pub fn constant_term(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// Substitutes the Eisenstein expansions of the generators.
    pub fn to_qseries(&self, order: usize) -> QSeries {
        let (mut max2, mut max4, mut max6) = (0, 0, 0);
        for m in self.terms.keys() {
            max2 = max2.max(m.e2);
            max4 = max4.max(m.e4);
            max6 = max6.max(m.e6);
        }
        let powers = |h: u32, max: u32| -> Vec<QSeries> {
            let base = eisenstein(h, order).expect("generator weights are valid");
            let mut v = vec![QSeries::one(order)];
            for i in 0..max as usize {
                let next = &v[i] * &base;
                v.push(next);
            }
            v
        };
        let (p2, p4, p6) = (powers(2, max2), powers(4, max4), powers(6, max6));
        let mut acc = QSeries::zero(order);
        for (m, c) in &self.terms {
            let t = &(&p2[m.e2 as usize] * &p4[m.e4 as usize]) * &p6[m.e6 as usize];
            acc = &acc + &t.scale(c);
        }
        acc
    }

    /// Canonical record list, ordered by `(a, b, c)` descending.
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms()
            .map(|(m, c)| TermRecord { a: m.e2, b: m.e4, c: m.e6, coefficient: format_rational(c) })
            .collect()
    }

    pub fn from_records(records: &[TermRecord]) -> Result<Self> {
        let mut p = Self::zero();
        for r in records {
            let m = Monomial::new(r.a, r.b, r.c);
            if p.terms.contains_key(&m) {
                return Err(Error::Format(format!("duplicate monomial {m}")));
            }
            let c = parse_rational(&r.coefficient)?;
            if c.is_zero() {
                return Err(Error::Format(format!("zero coefficient stored for {m}")));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn to_text(&self) -> String {
        serde_json::to_string(&self.to_records()).expect("records serialize")
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let records: Vec<TermRecord> =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_records(&records)
    }
}

/// One serialized term `coefficient * E2^a * E4^b * E6^c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub coefficient: String,
}

/// Prints in the expression syntax accepted by [`crate::expr::parse`].
impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if *m == Monomial::ONE {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &GradedPoly {
    type Output = GradedPoly;

    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &GradedPoly {
    type Output = GradedPoly;

    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;

    fn neg(self) -> GradedPoly {
        GradedPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Mul for &GradedPoly {
    type Output = GradedPoly;

    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.times(*mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $method:ident),*) => {$(
        impl $tr for GradedPoly {
            type Output = GradedPoly;
            fn $method(self, rhs: GradedPoly) -> GradedPoly {
                (&self).$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

/// A weight-homogeneous element of `M_k^{<= s}` together with its weight `k`
/// and a depth bound `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiForm {
    poly: GradedPoly,
    weight: u32,
    depth: u32,
}

impl QuasiForm {
    /// Checks homogeneity, `depth_of(poly) <= depth` and `depth <= weight / 2`.
    pub fn new(poly: GradedPoly, weight: u32, depth: u32) -> Result<Self> {
        if weight % 2 == 1 {
            return Err(Error::Grading(format!("odd weight {weight}")));
        }
        if !poly.is_homogeneous_of(weight) {
            return Err(Error::Grading(format!("{poly} is not homogeneous of weight {weight}")));
        }
        if depth > weight / 2 {
            return Err(Error::Grading(format!(
                "depth bound {depth} exceeds half the weight {weight}"
            )));
        }
        if let Some(d) = poly.depth_of() {
            if d > depth {
                return Err(Error::Grading(format!("{poly} has depth {d} > bound {depth}")));
            }
        }
        Ok(QuasiForm { poly, weight, depth })
    }

    /// Weight read off the polynomial; the depth bound is the exact depth.
    pub fn from_poly(poly: GradedPoly) -> Result<Self> {
        let weight = poly.weight_of()?;
        let depth = poly.depth_of().unwrap_or(0);
        Self::new(poly, weight, depth)
    }

    pub fn zero(weight: u32) -> Result<Self> {
        Self::new(GradedPoly::zero(), weight, 0)
    }

    pub fn constant(c: Rational) -> Self {
        QuasiForm { poly: GradedPoly::constant(c), weight: 0, depth: 0 }
    }

    pub fn e2() -> Self {
        QuasiForm { poly: GradedPoly::e2(), weight: 2, depth: 1 }
    }

    pub fn e4() -> Self {
        QuasiForm { poly: GradedPoly::e4(), weight: 4, depth: 0 }
    }

    pub fn e6() -> Self {
        QuasiForm { poly: GradedPoly::e6(), weight: 6, depth: 0 }
    }

    pub fn delta() -> Self {
        QuasiForm { poly: GradedPoly::delta(), weight: 12, depth: 0 }
    }

    pub fn poly(&self) -> &GradedPoly {
        &self.poly
    }

    pub fn into_poly(self) -> GradedPoly {
        self.poly
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// The declared depth bound.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// The exact depth, `None` for zero.
    pub fn exact_depth(&self) -> Option<u32> {
        self.poly.depth_of()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Same form with the depth bound replaced.
    pub fn with_depth(&self, depth: u32) -> Result<Self> {
        Self::new(self.poly.clone(), self.weight, depth)
    }

    /// `D` maps `M_k^{<= s}` into `M_{k+2}^{<= s+1}`.
    pub fn derive(&self) -> Self {
        QuasiForm { poly: self.poly.derive(), weight: self.weight + 2, depth: self.depth + 1 }
    }

    pub fn derive_n(&self, r: u32) -> Self {
        QuasiForm { poly: self.poly.derive_n(r), weight: self.weight + 2 * r, depth: self.depth + r }
    }

    pub fn mul(&self, other: &QuasiForm) -> Self {
        QuasiForm {
            poly: &self.poly * &other.poly,
            weight: self.weight + other.weight,
            depth: self.depth + other.depth,
        }
    }

    pub fn add(&self, other: &QuasiForm) -> Result<Self> {
        if self.weight != other.weight {
            return Err(Error::Grading(format!(
                "cannot add forms of weights {} and {}",
                self.weight, other.weight
            )));
        }
        Ok(QuasiForm {
            poly: &self.poly + &other.poly,
            weight: self.weight,
            depth: self.depth.max(other.depth),
        })
    }

    pub fn sub(&self, other: &QuasiForm) -> Result<Self> {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QuasiForm { poly: self.poly.scale(c), weight: self.weight, depth: self.depth }
    }

    pub fn pow(&self, exp: u32) -> Self {
        QuasiForm { poly: self.poly.pow(exp), weight: self.weight * exp, depth: self.depth * exp }
    }

    pub fn constant_term(&self) -> Rational {
        self.poly.constant_term()
    }

    pub fn to_qseries(&self, order: usize) -> QSeries {
        self.poly.to_qseries(order)
    }
}

impl fmt::Display for QuasiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::delta;
    use proptest::prelude::*;

    fn e2() -> GradedPoly {
        GradedPoly::e2()
    }
    fn e4() -> GradedPoly {
        GradedPoly::e4()
    }
    fn e6() -> GradedPoly {
        GradedPoly::e6()
    }

    #[test]
    fn weight_and_depth() {
        assert_eq!((&e4() * &e6()).weight_of().unwrap(), 10);
        assert_eq!(e2().pow(2).depth_of(), Some(2));
        assert_eq!(GradedPoly::delta().depth_of(), Some(0));
        assert_eq!(GradedPoly::zero().depth_of(), None);
        assert!((&e2() + &e4()).weight_of().is_err());
        assert!(GradedPoly::zero().weight_of().is_err());
    }

    #[test]
    fn generator_derivatives() {
        let de2 = (&e2().pow(2) - &e4()).scale(&ratio(1, 12));
        assert_eq!(e2().derive(), de2);
        let de4 = (&(&e2() * &e4()) - &e6()).scale(&ratio(1, 3));
        assert_eq!(e4().derive(), de4);
        let de6 = (&(&e2() * &e6()) - &e4().pow(2)).scale(&ratio(1, 2));
        assert_eq!(e6().derive(), de6);
        let d = GradedPoly::delta();
        assert_eq!(d.derive(), &d * &e2());
        assert!(GradedPoly::one().derive().is_zero());
    }

    #[test]
    fn derivatives_match_series() {
        // the generator rules checked against q d/dq on expansions
        for g in [e2(), e4(), e6(), GradedPoly::delta()] {
            assert_eq!(g.derive().to_qseries(10), g.to_qseries(10).derive());
        }
    }

    #[test]
    fn qseries_bridge_examples() {
        let s = e2().pow(2).to_qseries(1);
        assert_eq!(s.dense(), vec![rat(1), rat(-48)]);
        assert_eq!(GradedPoly::delta().to_qseries(1).dense(), vec![rat(0), rat(1)]);
        assert!(GradedPoly::zero().to_qseries(3).is_zero());
        assert_eq!(GradedPoly::delta().to_qseries(30), delta(30));
    }

    #[test]
    fn constant_terms() {
        assert_eq!(e2().pow(2).constant_term(), rat(1));
        assert_eq!(GradedPoly::delta().constant_term(), rat(0));
        assert_eq!((&GradedPoly::delta() * &e4().pow(3)).constant_term(), rat(0));
    }

    #[test]
    fn display_and_records() {
        assert_eq!(GradedPoly::delta().to_string(), "1/1728*E4^3 - 1/1728*E6^2");
        let p = &(&e2() * &e4()).scale(&rat(-1)) + &GradedPoly::constant(rat(3));
        assert_eq!(p.to_string(), "-E2*E4 + 3");
        assert_eq!(GradedPoly::zero().to_string(), "0");
        assert_eq!(
            GradedPoly::delta().to_text(),
            r#"[{"a":0,"b":3,"c":0,"coefficient":"1/1728"},{"a":0,"b":0,"c":2,"coefficient":"-1/1728"}]"#
        );
        assert!(GradedPoly::from_text(r#"[{"a":0,"b":0,"c":0,"coefficient":"0"}]"#).is_err());
    }

    #[test]
    fn quasiform_invariants() {
        assert!(QuasiForm::new(e2(), 2, 0).is_err());
        assert!(QuasiForm::new(e2(), 2, 2).is_err());
        assert!(QuasiForm::new(e2(), 4, 1).is_err());
        let f = QuasiForm::from_poly(&e2() * &e4()).unwrap();
        assert_eq!((f.weight(), f.depth()), (6, 1));
        let df = f.derive();
        assert_eq!((df.weight(), df.depth()), (8, 2));
        assert!(f.add(&QuasiForm::e4()).is_err());
    }

    #[test]
    fn monomials_of_weight() {
        assert_eq!(Monomial::of_weight(12, 0).len(), 2);
        assert_eq!(Monomial::of_weight(12, 6).len(), 7);
        assert_eq!(Monomial::of_weight(2, 0).len(), 0);
        assert_eq!(Monomial::of_weight(0, 0), vec![Monomial::ONE]);
    }

    pub(crate) fn arb_homogeneous() -> impl Strategy<Value = GradedPoly> {
        (1u32..=8).prop_flat_map(|half| {
            let monos = Monomial::of_weight(2 * half, half);
            let n = monos.len();
            prop::collection::vec((-9i64..=9, 1i64..=4), n).prop_map(move |cs| {
                GradedPoly::from_terms(
                    monos.iter().zip(cs).map(|(m, (p, q))| (*m, ratio(p, q))),
                )
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn grading_is_multiplicative(f in arb_homogeneous(), g in arb_homogeneous()) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let fg = &f * &g;
            prop_assert_eq!(fg.weight_of().unwrap(), f.weight_of().unwrap() + g.weight_of().unwrap());
            prop_assert!(fg.depth_of().unwrap() <= f.depth_of().unwrap() + g.depth_of().unwrap());
        }

        #[test]
        fn derivation_is_leibniz(f in arb_homogeneous(), g in arb_homogeneous()) {
            let lhs = (&f * &g).derive();
            let rhs = &(&f.derive() * &g) + &(&f * &g.derive());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn derivation_commutes_with_expansion(f in arb_homogeneous(), order in 0usize..=30) {
            prop_assert_eq!(f.derive().to_qseries(order), f.to_qseries(order).derive());
        }

        #[test]
        fn expansion_is_multiplicative(f in arb_homogeneous(), g in arb_homogeneous()) {
            prop_assert_eq!((&f * &g).to_qseries(12), &f.to_qseries(12) * &g.to_qseries(12));
        }

        #[test]
        fn constant_term_is_q0(f in arb_homogeneous()) {
            prop_assert_eq!(f.constant_term(), f.to_qseries(0).coeff(0).unwrap());
        }

        #[test]
        fn records_roundtrip(f in arb_homogeneous()) {
            let text = f.to_text();
            let back = GradedPoly::from_text(&text).unwrap();
            prop_assert_eq!(back.to_text(), text);
            prop_assert_eq!(back, f);
        }
    }
}

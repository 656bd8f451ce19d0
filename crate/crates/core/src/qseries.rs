//! Truncated q-expansions with exact rational coefficients.
//!
//! A [`QSeries`] tracks the coefficients of `q^0 ..= q^order`. Operations never
//! extrapolate: a binary operation yields the smaller of the two orders.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::numkernel::{bernoulli, format_rational, int_to_rat, parse_rational, rat, sigma, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    order: usize,
    coeffs: BTreeMap<usize, Rational>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries { order, coeffs: BTreeMap::new() }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        Self::from_coeffs(order, [(0, c)]).expect("exponent 0 is always tracked")
    }

    /// Builds a series from `(exponent, coefficient)` pairs. Zero coefficients
    /// are dropped; repeated exponents are summed.
    pub fn from_coeffs<I>(order: usize, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut map: BTreeMap<usize, Rational> = BTreeMap::new();
        for (e, c) in coeffs {
            if e > order {
                return Err(Error::invalid(format!("exponent {e} exceeds order {order}")));
            }
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(QSeries { order, coeffs: map })
    }

    pub fn from_dense(coeffs: Vec<Rational>) -> Self {
        let order = coeffs.len().saturating_sub(1);
        Self::from_coeffs(order, coeffs.into_iter().enumerate()).expect("dense input is in range")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, n: usize) -> Result<Rational> {
        if n > self.order {
            return Err(Error::BeyondTrackedRange { requested: n, tracked: self.order });
        }
        Ok(self.coeffs.get(&n).cloned().unwrap_or_else(Rational::zero))
    }

    /// Nonzero coefficients in increasing exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn dense(&self) -> Vec<Rational> {
        (0..=self.order).map(|n| self.coeffs.get(&n).cloned().unwrap_or_default()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        QSeries {
            order,
            coeffs: self.coeffs.range(..=order).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    /// Equality on the common tracked range `0 ..= min(order)`.
    pub fn agrees(&self, other: &QSeries) -> bool {
        let n = self.order.min(other.order);
        self.truncate(n).coeffs == other.truncate(n).coeffs
    }

    /// Equality on `0 ..= upto`; an error if either side does not track that far.
    pub fn agrees_to(&self, other: &QSeries, upto: usize) -> Result<bool> {
        let tracked = self.order.min(other.order);
        if upto > tracked {
            return Err(Error::BeyondTrackedRange { requested: upto, tracked });
        }
        Ok(self.truncate(upto).coeffs == other.truncate(upto).coeffs)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        QSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// The normalized derivative `q d/dq`: the coefficient of `q^n` is multiplied by `n`.
    pub fn derive(&self) -> Self {
        QSeries {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| **e > 0)
                .map(|(e, c)| (*e, c * rat(*e as i64)))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Canonical text object: every exponent `0 ..= order` is listed, coefficients
    /// rendered `p/q` or `p`.
    pub fn to_text(&self) -> String {
        let record = SeriesRecord {
            order: self.order,
            coeffs: (0..=self.order)
                .map(|n| (n, format_rational(&self.coeffs.get(&n).cloned().unwrap_or_default())))
                .collect(),
        };
        serde_json::to_string(&record).expect("series record serializes")
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let record: SeriesRecord =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let coeffs = record
            .coeffs
            .into_iter()
            .map(|(e, c)| parse_rational(&c).map(|c| (e, c)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(record.order, coeffs)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRecord {
    order: usize,
    coeffs: BTreeMap<usize, String>,
}

impl Add for &QSeries {
    type Output = QSeries;

    fn add(self, rhs: &QSeries) -> QSeries {
        let order = self.order.min(rhs.order);
        let terms = self.truncate(order).coeffs.into_iter().chain(rhs.truncate(order).coeffs);
        QSeries::from_coeffs(order, terms).expect("truncated terms are in range")
    }
}

impl Sub for &QSeries {
    type Output = QSeries;

    fn sub(self, rhs: &QSeries) -> QSeries {
        self + &(-rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;

    fn neg(self) -> QSeries {
        QSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &QSeries {
    type Output = QSeries;

    /// Cauchy product truncated at the smaller order.
    fn mul(self, rhs: &QSeries) -> QSeries {
        let order = self.order.min(rhs.order);
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.range(..=order) {
            for (j, b) in rhs.coeffs.range(..=order - i) {
                out[i + j] += a * b;
            }
        }
        QSeries::from_coeffs(order, out.into_iter().enumerate()).expect("product is in range")
    }
}

/// `E_h = 1 - (2h / B_h) sum_{n>=1} sigma_{h-1}(n) q^n`.
///
/// The divisor power is `h - 1` (the standard normalization, which is what makes
/// `E_2 = 1 - 24q - ...`, `E_4 = 1 + 240q + ...`, `E_6 = 1 - 504q - ...`).
pub fn eisenstein(h: u32, order: usize) -> Result<QSeries> {
    if h < 2 || h % 2 == 1 {
        return Err(Error::invalid(format!("Eisenstein series needs even h >= 2, got {h}")));
    }
    let factor = -rat(2 * h as i64) / bernoulli(h as usize);
    let mut coeffs = vec![(0, Rational::one())];
    for n in 1..=order {
        let s = sigma(h - 1, n as u64)?;
        coeffs.push((n, &factor * int_to_rat(s)));
    }
    QSeries::from_coeffs(order, coeffs)
}

/// `Delta = (E4^3 - E6^2) / 1728`.
pub fn delta(order: usize) -> QSeries {
    let e4 = eisenstein(4, order).expect("4 is a valid weight");
    let e6 = eisenstein(6, order).expect("6 is a valid weight");
    (&e4.pow(3) - &e6.pow(2)).scale(&Rational::new(BigInt::one(), BigInt::from(1728)))
}

/// Ramanujan's `tau(n)`, the `n`-th coefficient of `Delta`.
pub fn tau(n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::invalid("tau(0) is undefined"));
    }
    Ok(tau_table(n as usize)?.pop().expect("table has n entries"))
}

/// `[tau(1), ..., tau(nmax)]`.
pub fn tau_table(nmax: usize) -> Result<Vec<BigInt>> {
    let d = delta(nmax);
    (1..=nmax)
        .map(|n| {
            let c = d.coeff(n)?;
            if !c.is_integer() {
                return Err(Error::Discrepancy(format!("tau({n}) = {c} is not an integer")));
            }
            Ok(c.to_integer())
        })
        .collect()
}

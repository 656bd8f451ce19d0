//! Fraction-exact Gaussian elimination.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::numkernel::Rational;

/// Dense matrix over the rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: Vec<Vec<Rational>>,
    cols: usize,
}

impl Matrix {
    pub fn new(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix { rows, cols }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows: vec![vec![Rational::zero(); cols]; rows], cols }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = Rational::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    /// Pivots are taken as the first nonzero entry scanning down each column.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..self.cols {
            let Some(p) = (lead..self.rows.len()).find(|&i| !self.rows[i][col].is_zero()) else {
                continue;
            };
            self.rows.swap(lead, p);
            let inv = self.rows[lead][col].recip();
            for x in self.rows[lead].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = self.rows[lead].clone();
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i == lead || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
            pivots.push(col);
            lead += 1;
            if lead == self.rows.len() {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }
}

/// Basis of the right kernel `{x : m x = 0}`, one vector per free column with
/// that column set to 1.
pub fn nullspace(m: &Matrix) -> Vec<Vec<Rational>> {
    let mut r = m.clone();
    let pivots = r.rref();
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); m.cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.rows[row][f].clone();
            }
            v
        })
        .collect()
}

/// Incrementally built echelon basis of the span of a list of sparse vectors,
/// remembering how each basis row combines the original generators.
#[derive(Clone, Debug)]
pub struct EchelonSpan<K: Ord + Copy> {
    generators: usize,
    rows: Vec<EchelonRow<K>>,
}

#[derive(Clone, Debug)]
struct EchelonRow<K: Ord + Copy> {
    pivot: K,
    vector: BTreeMap<K, Rational>,
    combo: Vec<(usize, Rational)>,
}

impl<K: Ord + Copy> Default for EchelonSpan<K> {
    fn default() -> Self {
        EchelonSpan { generators: 0, rows: Vec::new() }
    }
}

impl<K: Ord + Copy> EchelonSpan<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_generators<I>(gens: I) -> Self
    where
        I: IntoIterator<Item = BTreeMap<K, Rational>>,
    {
        let mut s = Self::new();
        for g in gens {
            s.push(g);
        }
        s
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a generator; returns whether it enlarged the span.
    pub fn push(&mut self, v: BTreeMap<K, Rational>) -> bool {
        let idx = self.generators;
        self.generators += 1;
        let (rest, mut combo) = self.reduce(v);
        combo.iter_mut().for_each(|(_, c)| *c = -c.clone());
        combo.push((idx, Rational::one()));
        // pivot: largest key, i.e. first in canonical descending order
        let Some((&pivot, lead)) = rest.iter().next_back() else {
            return false;
        };
        let inv = lead.recip();
        let vector = rest.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        let combo = combo.into_iter().map(|(i, c)| (i, c * &inv)).collect();
        self.rows.push(EchelonRow { pivot, vector, combo });
        true
    }

    /// Subtracts basis rows until no pivot remains. Returns the remainder and
    /// the multipliers used, as a combination of original generators.
    fn reduce(&self, mut v: BTreeMap<K, Rational>) -> (BTreeMap<K, Rational>, Vec<(usize, Rational)>) {
        let mut coords: BTreeMap<usize, Rational> = BTreeMap::new();
        for row in &self.rows {
            let Some(f) = v.get(&row.pivot).cloned() else { continue };
            for (k, c) in &row.vector {
                let slot = v.entry(*k).or_insert_with(Rational::zero);
                *slot -= &f * c;
                if slot.is_zero() {
                    v.remove(k);
                }
            }
            for (i, c) in &row.combo {
                *coords.entry(*i).or_insert_with(Rational::zero) += &f * c;
            }
        }
        (v, coords.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    /// Coordinates of `v` on the original generators, if `v` lies in the span.
    /// Generators that did not enlarge the span get coordinate zero.
    pub fn coordinates(&self, v: BTreeMap<K, Rational>) -> Option<Vec<Rational>> {
        let (rest, combo) = self.reduce(v);
        if !rest.is_empty() {
            return None;
        }
        let mut out = vec![Rational::zero(); self.generators];
        for (i, c) in combo {
            out[i] += c;
        }
        Some(out)
    }

    pub fn contains(&self, v: BTreeMap<K, Rational>) -> bool {
        self.reduce(v).0.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{factorial, int_to_rat, rat};

    fn m(rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::new(cols, rows.iter().map(|r| r.iter().map(|x| rat(*x)).collect()).collect())
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(nullspace(&Matrix::identity(2)).is_empty());
    }

    #[test]
    fn zero_row_kernel_is_everything() {
        let k = nullspace(&Matrix::zeros(1, 2));
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn factorial_row_kernel() {
        let row = vec![int_to_rat(factorial(12)), int_to_rat(factorial(11))];
        let k = nullspace(&Matrix::new(2, vec![row]));
        assert_eq!(k.len(), 1);
        // normalized so the free (last) column is 1: (-1/12, 1) ~ (1, -12)
        assert_eq!(k[0][0].clone() * rat(-12), k[0][1]);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 1]]);
        let k = nullspace(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
        assert_eq!(a.rank(), 2);
    }

    fn sv(entries: &[(u32, i64)]) -> BTreeMap<u32, Rational> {
        entries.iter().map(|(k, c)| (*k, rat(*c))).collect()
    }

    #[test]
    fn echelon_coordinates() {
        let span = EchelonSpan::from_generators([sv(&[(0, 1), (1, 1)]), sv(&[(1, 1), (2, 1)])]);
        assert_eq!(span.rank(), 2);
        let c = span.coordinates(sv(&[(0, 2), (1, 5), (2, 3)])).unwrap();
        assert_eq!(c, vec![rat(2), rat(3)]);
        assert!(span.coordinates(sv(&[(0, 1)])).is_none());
    }

    #[test]
    fn dependent_generator_is_ignored() {
        let mut span = EchelonSpan::new();
        assert!(span.push(sv(&[(0, 1)])));
        assert!(!span.push(sv(&[(0, 2)])));
        assert!(!span.push(BTreeMap::new()));
        assert_eq!(span.coordinates(sv(&[(0, 3)])).unwrap(), vec![rat(3), rat(0), rat(0)]);
    }
}

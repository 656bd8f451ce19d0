//! Exhaustive checks over the parameter grid `k, l` even, `s <= k/2`,
//! `t <= l/2`, `n <= nmax`, with every monomial of the right weight and depth
//! as input.

use std::collections::BTreeMap;
use std::sync::Mutex;

use crate::brackets::{combine, rc_coeffs, BracketParams};
use crate::coeffsolver::solve_and_confirm;
use crate::numkernel::{rat, Rational};
use crate::ring::{GradedPoly, Monomial};
use crate::spaces::{structure_spec, Span};
use crate::Result;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GridReport {
    pub points: usize,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl GridReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(&mut self, other: GridReport) {
        self.points += other.points;
        self.cases += other.cases;
        self.failures.extend(other.failures);
    }
}

/// Every grid point, ordered by `(k, s, l, t, n)`.
pub fn grid(kmax: u32, nmin: u32, nmax: u32) -> Vec<BracketParams> {
    let mut out = Vec::new();
    for k in (2..=kmax).step_by(2) {
        for s in 0..=k / 2 {
            for l in (2..=kmax).step_by(2) {
                for t in 0..=l / 2 {
                    for n in nmin..=nmax {
                        out.push(BracketParams::new(n, k, s, l, t).expect("grid parameters are valid"));
                    }
                }
            }
        }
    }
    out
}

/// `D^0 m .. D^depth m` for every monomial of weight `<= kmax + 2`.
pub struct Ladders {
    depth: u32,
    table: BTreeMap<Monomial, Vec<GradedPoly>>,
}

impl Ladders {
    pub fn new(kmax: u32, depth: u32) -> Self {
        let mut table = BTreeMap::new();
        for w in (0..=kmax + 2).step_by(2) {
            for m in Monomial::of_weight(w, w / 2) {
                table.insert(m, GradedPoly::monomial(m).derivatives(depth));
            }
        }
        Ladders { depth, table }
    }

    pub fn get(&self, m: &Monomial) -> &[GradedPoly] {
        &self.table[m]
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }
}

fn inputs(k: u32, s: u32) -> Vec<Monomial> {
    Monomial::of_weight(k, s)
}

fn run_parallel<F>(points: &[BracketParams], f: F) -> GridReport
where
    F: Fn(&BracketParams) -> GridReport + Sync,
{
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(16);
    let chunk = points.len().div_ceil(threads).max(1);
    let total = Mutex::new(GridReport::default());
    std::thread::scope(|scope| {
        for part in points.chunks(chunk) {
            let (f, total) = (&f, &total);
            scope.spawn(move || {
                let mut local = GridReport::default();
                for p in part {
                    local.merge(f(p));
                }
                total.lock().expect("no poisoned lock").merge(local);
            });
        }
    });
    let mut r = total.into_inner().expect("no poisoned lock");
    r.failures.sort();
    r
}

/// Depth of `sum_r a_r D^r f D^{n-r} g` against `s + t` for the closed-form
/// coefficients.
pub fn depth_bound(kmax: u32, nmax: u32) -> GridReport {
    let ladders = Ladders::new(kmax, nmax + 1);
    run_parallel(&grid(kmax, 0, nmax), |p| {
        let a = rc_coeffs(p);
        let mut r = GridReport { points: 1, ..Default::default() };
        for f in inputs(p.k, p.s) {
            for g in inputs(p.l, p.t) {
                r.cases += 1;
                let b = combine(a.as_slice(), ladders.get(&f), ladders.get(&g));
                if b.depth_of().is_some_and(|d| d > p.depth()) || !b.is_zero() && !b.is_homogeneous_of(p.weight()) {
                    r.failures.push(format!("{p}: ({f}, {g}) has depth {:?}", b.depth_of()));
                }
            }
        }
        r
    })
}

/// Grid points (with `n >= 1`) where `coeffs(p)` produces some bracket of depth above
/// `s + t`, together with the number of points tried.
pub fn depth_violations<F>(kmax: u32, nmax: u32, coeffs: F) -> (usize, Vec<BracketParams>)
where
    F: Fn(&BracketParams) -> Vec<Rational>,
{
    let ladders = Ladders::new(kmax, nmax + 1);
    let points = grid(kmax, 1, nmax);
    let bad = points
        .iter()
        .filter(|p| {
            let a = coeffs(p);
            inputs(p.k, p.s).iter().any(|f| {
                inputs(p.l, p.t).iter().any(|g| {
                    combine(&a, ladders.get(f), ladders.get(g)).depth_of().is_some_and(|d| d > p.depth())
                })
            })
        })
        .copied()
        .collect();
    (points.len(), bad)
}

/// The all-ones vector, proportional to no closed-form vector once `n >= 1`.
pub fn all_ones(p: &BracketParams) -> Vec<Rational> {
    vec![rat(1); p.n as usize + 1]
}

/// The closed form with `1` added to its first entry.
pub fn perturbed(p: &BracketParams) -> Vec<Rational> {
    let mut a = rc_coeffs(p).0;
    a[0] += rat(1);
    a
}

/// `D Phi_p(f, g) = Phi_{(l+2, t+1)}(f, Dg) + Phi_{(k+2, s+1)}(Df, g)`.
pub fn leibniz(kmax: u32, nmax: u32) -> GridReport {
    let ladders = Ladders::new(kmax, nmax + 2);
    run_parallel(&grid(kmax, 0, nmax), |p| {
        let mut r = GridReport { points: 1, ..Default::default() };
        let a = rc_coeffs(p);
        let ag = rc_coeffs(&BracketParams::new(p.n, p.k, p.s, p.l + 2, p.t + 1).expect("shift is valid"));
        let af = rc_coeffs(&BracketParams::new(p.n, p.k + 2, p.s + 1, p.l, p.t).expect("shift is valid"));
        for f in inputs(p.k, p.s) {
            for g in inputs(p.l, p.t) {
                r.cases += 1;
                let (df, dg) = (ladders.get(&f), ladders.get(&g));
                let lhs = combine(a.as_slice(), df, dg).derive();
                let rhs = &combine(ag.as_slice(), df, &dg[1..]) + &combine(af.as_slice(), &df[1..], dg);
                if lhs != rhs {
                    r.failures.push(format!("{p}: Leibniz fails on ({f}, {g})"));
                }
            }
        }
        r
    })
}

/// The constraint kernel is the closed-form line at every point with `n >= 1`.
pub fn kernels(kmax: u32, nmax: u32) -> GridReport {
    run_parallel(&grid(kmax, 1, nmax), |p| {
        let mut r = GridReport { points: 1, cases: 1, ..Default::default() };
        if let Err(e) = solve_and_confirm(p.k, p.l, p.s, p.t, p.n) {
            r.failures.push(format!("{p}: {e}"));
        }
        r
    })
}

/// Membership of every bracket with `n >= 1` in `S_w + sum_{j=1}^{s+t} D^j M_{w-2j}`,
/// tightened to `D^{s+t} S` on top when `n > s + t`, and for `n = s + t` when
/// the second argument is `Delta` times a monomial.
pub fn structure(kmax: u32, nmax: u32) -> Result<GridReport> {
    let ladders = Ladders::new(kmax, nmax + 1);
    let mut spans: BTreeMap<(u32, u32, bool), Span> = BTreeMap::new();
    let points = grid(kmax, 1, nmax);
    for p in &points {
        for cusp_top in [false, true] {
            if let std::collections::btree_map::Entry::Vacant(e) = spans.entry((p.weight(), p.depth(), cusp_top)) {
                e.insert(structure_spec(p.weight(), p.depth(), cusp_top).span()?);
            }
        }
    }
    let delta = GradedPoly::delta();
    let delta_ladders: BTreeMap<Monomial, Vec<GradedPoly>> = (0..=kmax.saturating_sub(12))
        .step_by(2)
        .flat_map(|w| Monomial::of_weight(w, w / 2))
        .map(|m| (m, (&delta * &GradedPoly::monomial(m)).derivatives(nmax)))
        .collect();
    Ok(run_parallel(&points, |p| {
        let mut r = GridReport { points: 1, ..Default::default() };
        let a = rc_coeffs(p);
        let loose = &spans[&(p.weight(), p.depth(), false)];
        let tight = &spans[&(p.weight(), p.depth(), true)];
        let span = if p.n > p.depth() { tight } else { loose };
        for f in inputs(p.k, p.s) {
            for g in inputs(p.l, p.t) {
                r.cases += 1;
                let b = combine(a.as_slice(), ladders.get(&f), ladders.get(&g));
                if !span.contains(&b) {
                    r.failures.push(format!("{p}: bracket of ({f}, {g}) outside the structure space"));
                }
            }
            if p.n == p.depth() && p.depth() > 0 && p.l >= 12 {
                for m in inputs(p.l - 12, p.t) {
                    r.cases += 1;
                    let b = combine(a.as_slice(), ladders.get(&f), &delta_ladders[&m]);
                    if !tight.contains(&b) {
                        r.failures.push(format!("{p}: bracket of ({f}, Delta*{m}) outside the cusp-top space"));
                    }
                }
            }
        }
        r
    }))
}

/// `true` if the bracket vanishes identically for all inputs at `p`.
pub fn vanishes(p: &BracketParams, ladders: &Ladders) -> bool {
    let a = rc_coeffs(p);
    inputs(p.k, p.s).iter().all(|f| {
        inputs(p.l, p.t).iter().all(|g| combine(a.as_slice(), ladders.get(f), ladders.get(g)).is_zero())
    })
}

use quasimodular::grid;

const KMAX: u32 = 12;
const NMAX: u32 = 5;

#[test]
fn depth_bound_on_full_grid() {
    let r = grid::depth_bound(KMAX, NMAX);
    assert!(r.pass(), "{:?}", r.failures);
    assert_eq!(r.points, grid::grid(KMAX, 0, NMAX).len());
}

#[test]
fn generic_vectors_exceed_the_bound() {
    let (_, bad) = grid::depth_violations(KMAX, NMAX, grid::all_ones);
    assert!(!bad.is_empty());
    let (_, bad) = grid::depth_violations(KMAX, NMAX, grid::perturbed);
    assert!(!bad.is_empty());
}

#[test]
fn leibniz_on_full_grid() {
    let r = grid::leibniz(KMAX, NMAX);
    assert!(r.pass(), "{:?}", r.failures);
}

#[test]
fn kernels_on_full_grid() {
    let r = grid::kernels(KMAX, NMAX);
    assert!(r.pass(), "{:?}", r.failures);
}

#[test]
fn structure_on_full_grid() {
    let r = grid::structure(KMAX, NMAX).unwrap();
    assert!(r.pass(), "{:?}", r.failures);
}

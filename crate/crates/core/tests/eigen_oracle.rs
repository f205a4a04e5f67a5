//! Eigenvalues by bisection on the inertia of `A − xI` (counted through an
//! unpivoted LDLᵀ), compared with the library's dense solver on small DtN
//! matrices.

use nalgebra::DMatrix;

use steklov::graph::{gadget_prefix, subgraph_problem, FiniteGraph};
use steklov::lattice::LatticeDomain;
use steklov::spectral::{
    assemble_problem, dtn_matrix, lattice_spectrum, steklov_spectrum, DtNOperator,
};

/// Number of eigenvalues of `a` strictly below `x`.
fn count_below(a: &DMatrix<f64>, x: f64) -> usize {
    let n = a.nrows();
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)] -= x;
    }
    let mut negatives = 0;
    for k in 0..n {
        let mut p = m[(k, k)];
        if p == 0.0 {
            p = -1e-300;
        }
        if p < 0.0 {
            negatives += 1;
        }
        for i in k + 1..n {
            let f = m[(i, k)] / p;
            for j in k + 1..n {
                m[(i, j)] -= f * m[(k, j)];
            }
        }
    }
    negatives
}

fn bisection_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    let bound = (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
        + 1.0;
    (0..n)
        .map(|k| {
            // k-th smallest: the smallest x with more than k eigenvalues ≤ x
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(a, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

fn compare(op: &DtNOperator) {
    assert!(op.dim() <= 6);
    let spec = steklov_spectrum(op).unwrap();
    let oracle = bisection_eigenvalues(&op.matrix);
    for (a, b) in spec.eigenvalues.iter().zip(&oracle) {
        assert!(
            (a - b).abs() < 1e-10,
            "{:?} vs {:?}",
            spec.eigenvalues,
            oracle
        );
    }
}

#[test]
fn lattice_cases() {
    let cases = [
        (2, vec![vec![0, 0]]),
        (2, vec![vec![0, 0], vec![1, 0]]),
        (3, vec![vec![0, 0, 0]]),
        (1, vec![vec![0], vec![1], vec![2], vec![3]]),
    ];
    for (n, pts) in cases {
        let d = LatticeDomain::from_coords(n, &pts).unwrap();
        let (_, op, _) = lattice_spectrum(&d).unwrap();
        compare(&op);
    }
}

#[test]
fn single_vertex_closed_form() {
    // Λ = I − J/(2n): eigenvalue 0 once and 1 with multiplicity 2n − 1
    for n in 1..=3 {
        let d = LatticeDomain::from_coords(n, &[vec![0; n]]).unwrap();
        let (_, op, spec) = lattice_spectrum(&d).unwrap();
        let m = 2 * n;
        let expected =
            DMatrix::from_fn(m, m, |i, j| if i == j { 1.0 } else { 0.0 } - 1.0 / m as f64);
        assert!((&op.matrix - expected).amax() < 1e-14);
        assert!(spec.eigenvalues[0].abs() < 1e-12);
        assert!(spec.eigenvalues[1..]
            .iter()
            .all(|l| (l - 1.0).abs() < 1e-12));
    }
}

#[test]
fn graph_cases() {
    for i in 2..=4 {
        let chain = gadget_prefix(i).unwrap();
        let p = subgraph_problem(&chain.graph, &chain.block_omega(i).unwrap()).unwrap();
        compare(&dtn_matrix(&assemble_problem(&p).unwrap()).unwrap());
    }
    let star = FiniteGraph::new(6, (1..6).map(|v| (0, v))).unwrap();
    let p = subgraph_problem(&star, &[0]).unwrap();
    compare(&dtn_matrix(&assemble_problem(&p).unwrap()).unwrap());
    let path = FiniteGraph::path(7);
    let p = subgraph_problem(&path, &[1, 2, 4, 5]).unwrap();
    compare(&dtn_matrix(&assemble_problem(&p).unwrap()).unwrap());
}

//! Linear-algebra kernels: a sparse symmetric matrix, an envelope (profile)
//! Cholesky factorization in the natural vertex order, conjugate gradients,
//! and a sorted, sign-normalized dense symmetric eigendecomposition.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Symmetric sparse matrix stored as full adjacency rows.
#[derive(Clone, Debug)]
pub struct SparseSym {
    n: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseSym {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            rows: vec![Vec::new(); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Adds `v` to entries `(i, j)` and `(j, i)` (once when `i == j`).
    pub fn add_sym(&mut self, i: usize, j: usize, v: f64) {
        Self::add_to(&mut self.rows[i], j, v);
        if i != j {
            Self::add_to(&mut self.rows[j], i, v);
        }
    }

    fn add_to(row: &mut Vec<(usize, f64)>, j: usize, v: f64) {
        match row.binary_search_by_key(&j, |&(c, _)| c) {
            Ok(pos) => row[pos].1 += v,
            Err(pos) => row.insert(pos, (j, v)),
        }
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .binary_search_by_key(&j, |&(c, _)| c)
            .map(|p| self.rows[i][p].1)
            .unwrap_or(0.0)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&(j, v)| v * x[j]).sum())
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, v) in r {
                m[(i, j)] = v;
            }
        }
        m
    }
}

/// Cholesky factor `A = L Lᵀ` stored by rows over each row's envelope
/// `first[i]..=i`. Fill-in is confined to the envelope, so for lattice
/// domains in lexicographic order the cost is governed by the width of a
/// coordinate slab rather than by the total vertex count.
#[derive(Clone, Debug)]
pub struct ProfileCholesky {
    first: Vec<usize>,
    offsets: Vec<usize>,
    values: Vec<f64>,
}

impl ProfileCholesky {
    pub fn factor(a: &SparseSym) -> Result<Self> {
        let n = a.dim();
        let first: Vec<usize> = (0..n)
            .map(|i| a.row(i).first().map(|&(j, _)| j.min(i)).unwrap_or(i))
            .collect();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for i in 0..n {
            offsets.push(offsets[i] + (i - first[i] + 1));
        }
        let mut values = vec![0.0; offsets[n]];
        for i in 0..n {
            let fi = first[i];
            let base = offsets[i];
            for &(j, v) in a.row(i) {
                if j <= i {
                    values[base + j - fi] = v;
                }
            }
            for j in fi..=i {
                let fj = first[j];
                let start = fi.max(fj);
                let bj = offsets[j];
                let mut s = values[base + j - fi];
                for k in start..j {
                    s -= values[base + k - fi] * values[bj + k - fj];
                }
                if j < i {
                    values[base + j - fi] = s / values[bj + j - fj];
                } else {
                    if !(s > 0.0) {
                        return Err(Error::Solver(format!(
                            "matrix is not positive definite (pivot {s:e} at row {i})"
                        )));
                    }
                    values[base + i - fi] = s.sqrt();
                }
            }
        }
        Ok(Self {
            first,
            offsets,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.first.len()
    }

    /// Number of stored factor entries.
    pub fn envelope_size(&self) -> usize {
        self.values.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y = b.to_vec();
        for i in 0..n {
            let fi = self.first[i];
            let base = self.offsets[i];
            let mut s = y[i];
            for k in fi..i {
                s -= self.values[base + k - fi] * y[k];
            }
            y[i] = s / self.values[base + i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let base = self.offsets[i];
            y[i] /= self.values[base + i - fi];
            let xi = y[i];
            for k in fi..i {
                y[k] -= self.values[base + k - fi] * xi;
            }
        }
        y
    }
}

pub fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Conjugate gradients for a symmetric positive definite `a`, stopping when
/// `‖b − a x‖ ≤ rel_tol · ‖b‖`.
pub fn conjugate_gradient(
    a: &SparseSym,
    b: &[f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let n = a.dim();
    let mut x = vec![0.0; n];
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        return Ok(x);
    }
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    for _ in 0..max_iter {
        if rr.sqrt() <= rel_tol * bnorm {
            return Ok(x);
        }
        let ap = a.matvec(&p);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::Solver(
                "conjugate gradients hit a nonpositive curvature".into(),
            ));
        }
        let alpha = rr / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    // recompute the true residual before giving up
    let ax = a.matvec(&x);
    let res: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    if norm2(&res) <= rel_tol * bnorm {
        Ok(x)
    } else {
        Err(Error::Solver(format!(
            "conjugate gradients did not converge in {max_iter} iterations"
        )))
    }
}

/// `max |a_ij − a_ji| / max(1e-300, max |a_ij|)`.
pub fn relative_asymmetry(m: &DMatrix<f64>) -> f64 {
    let scale = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..i {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if scale == 0.0 {
        0.0
    } else {
        worst / scale
    }
}

/// Eigenpairs of a symmetric matrix, eigenvalues ascending, each
/// eigenvector scaled so its first entry that is not negligible is
/// positive.
/// Ascending eigenvalues of a symmetric matrix without forming eigenvectors.
pub fn sorted_symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut values: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

pub fn sorted_symmetric_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (c, &i) in order.iter().enumerate() {
        let mut v: DVector<f64> = eig.eigenvectors.column(i).into_owned();
        let cutoff = 1e-12 * v.amax();
        if let Some(lead) = v.iter().find(|x| x.abs() > cutoff) {
            if *lead < 0.0 {
                v.neg_mut();
            }
        }
        vectors.set_column(c, &v);
    }
    (values, vectors)
}

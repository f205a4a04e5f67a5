//! Dirichlet energy, harmonic extension and the Dirichlet-to-Neumann map.
//!
//! Functions on `Ω̄` are plain slices in *closure order*: the `|Ω|` interior
//! vertices first (canonical order), then the `|δΩ|` boundary vertices
//! (canonical order). Energy edges always join an interior vertex to an
//! interior or a boundary vertex; boundary-boundary edges never carry
//! energy.
//!
//! The DtN matrix is the Schur complement
//! `Λ = L_BB − L_IBᵀ L_II⁻¹ L_IB`, computed with an envelope Cholesky
//! factorization of the interior block. [`dtn_definitional`] rebuilds it
//! column by column from harmonic extensions solved by conjugate gradients,
//! which gives an independent route for cross-checks.

use std::sync::OnceLock;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{components_of, SubgraphProblem};
use crate::lattice::{BoundaryProfile, LatticeDomain};
use crate::linalg::{
    conjugate_gradient, norm2, relative_asymmetry, sorted_symmetric_eigen,
    sorted_symmetric_eigenvalues, ProfileCholesky, SparseSym,
};

/// Eigenvalues below `ZERO_EIGEN_RTOL · max(1, λ_max)` count as zero.
pub const ZERO_EIGEN_RTOL: f64 = 1e-9;
/// Largest zero threshold callers may configure.
pub const MAX_ZERO_EIGEN_RTOL: f64 = 1e-6;
/// Symmetry gate for operators handed to [`steklov_spectrum`].
pub const SYMMETRY_RTOL: f64 = 1e-10;
/// Orthonormality / mean-zero tolerance for variational trial families.
pub const TRIAL_FAMILY_TOL: f64 = 1e-9;
/// Relative residual for the conjugate-gradient harmonic solve.
pub const CG_RTOL: f64 = 1e-13;

/// Which interior solver computes a harmonic extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InteriorSolver {
    /// Envelope Cholesky in canonical vertex order (cached on the form).
    Direct,
    /// Conjugate gradients to relative residual [`CG_RTOL`].
    ConjugateGradient,
}

/// The Dirichlet energy `D_Ω` split into interior/boundary blocks.
#[derive(Debug)]
pub struct EnergyForm {
    interior_count: usize,
    boundary_count: usize,
    /// `E(Ω, Ω̄)` in closure order, `(a, b)` with `a` interior.
    edges: Vec<(usize, usize)>,
    interior_block: SparseSym,
    /// For each boundary vertex, its interior neighbours (each an entry −1
    /// of `L_IB`).
    coupling: Vec<Vec<usize>>,
    boundary_diagonal: Vec<f64>,
    components: Vec<Vec<usize>>,
    boundary_labels: Vec<String>,
    factor: OnceLock<std::result::Result<ProfileCholesky, String>>,
}

impl EnergyForm {
    /// Builds the form from edges in closure order. Fails with
    /// [`Error::DegenerateClosure`] when some component of the closure graph
    /// has no boundary vertex.
    pub fn from_closure_edges(
        interior_count: usize,
        boundary_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        boundary_labels: Vec<String>,
        interior_name: impl Fn(usize) -> String,
    ) -> Result<Self> {
        let total = interior_count + boundary_count;
        let mut interior_block = SparseSym::new(interior_count);
        let mut coupling = vec![Vec::new(); boundary_count];
        let mut boundary_diagonal = vec![0.0; boundary_count];
        let mut adj = vec![Vec::new(); total];
        let mut list = Vec::new();
        for (a, b) in edges {
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            if a >= interior_count {
                return Err(Error::Precondition(format!(
                    "edge ({a},{b}) has no interior endpoint"
                )));
            }
            if b >= total {
                return Err(Error::Precondition(format!("edge ({a},{b}) out of range")));
            }
            interior_block.add_sym(a, a, 1.0);
            if b < interior_count {
                interior_block.add_sym(b, b, 1.0);
                interior_block.add_sym(a, b, -1.0);
            } else {
                let j = b - interior_count;
                coupling[j].push(a);
                boundary_diagonal[j] += 1.0;
            }
            adj[a].push(b);
            adj[b].push(a);
            list.push((a, b));
        }
        list.sort_unstable();
        let components = components_of(total, |v| adj[v].iter().copied());
        if let Some(bad) = components
            .iter()
            .find(|c| c.iter().all(|&v| v < interior_count))
        {
            return Err(Error::DegenerateClosure {
                component: interior_name(bad[0]),
            });
        }
        Ok(Self {
            interior_count,
            boundary_count,
            edges: list,
            interior_block,
            coupling,
            boundary_diagonal,
            components,
            boundary_labels,
            factor: OnceLock::new(),
        })
    }

    pub fn interior_count(&self) -> usize {
        self.interior_count
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary_count
    }

    pub fn closure_count(&self) -> usize {
        self.interior_count + self.boundary_count
    }

    /// Energy edges in closure order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `L_II`.
    pub fn interior_block(&self) -> &SparseSym {
        &self.interior_block
    }

    /// `L_IB` as a dense `|Ω| × |δΩ|` matrix.
    pub fn coupling_block(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.interior_count, self.boundary_count);
        for (j, nbrs) in self.coupling.iter().enumerate() {
            for &i in nbrs {
                m[(i, j)] -= 1.0;
            }
        }
        m
    }

    /// `L_BB`: number of interior neighbours of each boundary vertex.
    pub fn boundary_diagonal(&self) -> &[f64] {
        &self.boundary_diagonal
    }

    /// Components of `(Ω̄, E(Ω, Ω̄))` in closure indices.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn boundary_labels(&self) -> &[String] {
        &self.boundary_labels
    }

    fn factor(&self) -> Result<&ProfileCholesky> {
        self.factor
            .get_or_init(|| {
                ProfileCholesky::factor(&self.interior_block).map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(|e| Error::Solver(e.clone()))
    }

    /// `D_Ω(u, v)` summed edge by edge.
    pub fn energy_pair(&self, u: &[f64], v: &[f64]) -> f64 {
        self.edges
            .iter()
            .map(|&(a, b)| (u[a] - u[b]) * (v[a] - v[b]))
            .sum()
    }

    pub fn energy(&self, u: &[f64]) -> f64 {
        self.energy_pair(u, u)
    }

    /// Quadratic form through the block matrices, for cross-checking
    /// [`Self::energy`].
    pub fn block_quadratic_form(&self, u: &[f64]) -> f64 {
        let m = self.interior_count;
        let (ui, ub) = u.split_at(m);
        let lii = self.interior_block.matvec(ui);
        let mut q: f64 = ui.iter().zip(&lii).map(|(a, b)| a * b).sum();
        for (j, nbrs) in self.coupling.iter().enumerate() {
            let s: f64 = nbrs.iter().map(|&i| ui[i]).sum();
            q -= 2.0 * ub[j] * s;
            q += self.boundary_diagonal[j] * ub[j] * ub[j];
        }
        q
    }

    /// `Δu(x) = Σ_{y∼x} (u(y) − u(x))` at every interior vertex.
    pub fn laplacian(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.interior_count];
        for &(a, b) in &self.edges {
            out[a] += u[b] - u[a];
            if b < self.interior_count {
                out[b] += u[a] - u[b];
            }
        }
        out
    }

    /// `∂u/∂n(x) = Σ_{y∈Ω, y∼x} (u(x) − u(y))` at every boundary vertex.
    pub fn normal_derivative(&self, u: &[f64]) -> Vec<f64> {
        let m = self.interior_count;
        self.coupling
            .iter()
            .enumerate()
            .map(|(j, nbrs)| nbrs.iter().map(|&i| u[m + j] - u[i]).sum())
            .collect()
    }

    fn interior_rhs(&self, phi: &[f64]) -> Vec<f64> {
        let mut rhs = vec![0.0; self.interior_count];
        for (j, nbrs) in self.coupling.iter().enumerate() {
            for &i in nbrs {
                rhs[i] += phi[j];
            }
        }
        rhs
    }

    fn solve_interior(&self, rhs: &[f64], solver: InteriorSolver) -> Result<Vec<f64>> {
        match solver {
            InteriorSolver::Direct => Ok(self.factor()?.solve(rhs)),
            InteriorSolver::ConjugateGradient => conjugate_gradient(
                &self.interior_block,
                rhs,
                CG_RTOL,
                20 * self.interior_count.max(10),
            ),
        }
    }
}

/// Energy form of a lattice domain: interior in lexicographic order, then
/// `δΩ` in lexicographic order.
pub fn assemble_lattice(d: &LatticeDomain) -> Result<EnergyForm> {
    assemble_lattice_with(d, &d.profile())
}

pub fn assemble_lattice_with(d: &LatticeDomain, profile: &BoundaryProfile) -> Result<EnergyForm> {
    let m = d.len();
    let index = |p| {
        d.index_of(p)
            .or_else(|| profile.delta_index(p).map(|j| m + j))
            .expect("energy edge endpoint lies in the closure")
    };
    let edges: Vec<_> = profile
        .energy_edges
        .iter()
        .map(|e| {
            let (a, b) = e.endpoints();
            (index(a), index(b))
        })
        .collect();
    let labels = profile.delta.iter().map(|p| p.to_string()).collect();
    EnergyForm::from_closure_edges(m, profile.delta.len(), edges, labels, |i| {
        d.points()[i].to_string()
    })
}

/// Energy form of a graph subproblem: `Ω` then `δΩ`, both in vertex order.
pub fn assemble_problem(p: &SubgraphProblem) -> Result<EnergyForm> {
    let m = p.omega.len();
    let index = |v: usize| {
        p.omega
            .binary_search(&v)
            .ok()
            .or_else(|| p.delta.binary_search(&v).ok().map(|j| m + j))
            .expect("energy edge endpoint lies in the closure")
    };
    let edges: Vec<_> = p
        .energy_edges
        .iter()
        .map(|&(a, b)| (index(a), index(b)))
        .collect();
    EnergyForm::from_closure_edges(m, p.delta.len(), edges, p.delta_labels().to_vec(), |i| {
        format!("vertex {}", p.omega[i])
    })
}

/// Harmonic extension of boundary data `phi`: solves `L_II u_I = −L_IB φ` and
/// returns `u` on `Ω̄` in closure order.
pub fn harmonic_extension(form: &EnergyForm, phi: &[f64]) -> Result<Vec<f64>> {
    harmonic_extension_with(form, phi, InteriorSolver::Direct)
}

pub fn harmonic_extension_with(
    form: &EnergyForm,
    phi: &[f64],
    solver: InteriorSolver,
) -> Result<Vec<f64>> {
    if phi.len() != form.boundary_count {
        return Err(Error::DimensionMismatch(form.boundary_count, phi.len()));
    }
    let mut u = form.solve_interior(&form.interior_rhs(phi), solver)?;
    u.extend_from_slice(phi);
    Ok(u)
}

/// The DtN operator as a dense symmetric matrix over `δΩ`.
#[derive(Clone, Debug)]
pub struct DtNOperator {
    pub matrix: DMatrix<f64>,
    pub boundary_labels: Vec<String>,
    /// Relative asymmetry of the matrix before symmetrization.
    pub raw_asymmetry: f64,
}

impl DtNOperator {
    /// Wraps an externally supplied matrix; no symmetrization is applied.
    pub fn from_matrix(matrix: DMatrix<f64>) -> Self {
        let raw_asymmetry = relative_asymmetry(&matrix);
        let labels = (0..matrix.nrows()).map(|i| i.to_string()).collect();
        Self {
            matrix,
            boundary_labels: labels,
            raw_asymmetry,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, phi: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.matrix[(i, j)] * phi[j]).sum())
            .collect()
    }
}

/// `Λ = L_BB − L_IBᵀ L_II⁻¹ L_IB`, one interior solve per boundary column.
pub fn dtn_matrix(form: &EnergyForm) -> Result<DtNOperator> {
    let nb = form.boundary_count;
    let mut raw = DMatrix::zeros(nb, nb);
    let factor = form.factor()?;
    let mut e = vec![0.0; nb];
    for j in 0..nb {
        e[j] = 1.0;
        // x = −L_II⁻¹ L_IB e_j is the interior part of the harmonic extension of e_j
        let x = factor.solve(&form.interior_rhs(&e));
        e[j] = 0.0;
        for (i, nbrs) in form.coupling.iter().enumerate() {
            let s: f64 = nbrs.iter().map(|&k| x[k]).sum();
            raw[(i, j)] = -s;
        }
        raw[(j, j)] += form.boundary_diagonal[j];
    }
    let raw_asymmetry = relative_asymmetry(&raw);
    let sym = (&raw + raw.transpose()) * 0.5;
    Ok(DtNOperator {
        matrix: sym,
        boundary_labels: form.boundary_labels.clone(),
        raw_asymmetry,
    })
}

/// The DtN matrix by its definition: harmonically extend each boundary
/// basis vector and take the exterior normal derivative. Not symmetrized.
pub fn dtn_definitional(form: &EnergyForm, solver: InteriorSolver) -> Result<DMatrix<f64>> {
    let nb = form.boundary_count;
    let mut out = DMatrix::zeros(nb, nb);
    let mut e = vec![0.0; nb];
    for j in 0..nb {
        e[j] = 1.0;
        let u = harmonic_extension_with(form, &e, solver)?;
        e[j] = 0.0;
        for (i, v) in form.normal_derivative(&u).into_iter().enumerate() {
            out[(i, j)] = v;
        }
    }
    Ok(out)
}

/// `|D_Ω(u) + ⟨Δu, u⟩_Ω − ⟨∂u/∂n, u⟩_δΩ|` for an arbitrary `u` on `Ω̄`.
pub fn green_identity_residual(form: &EnergyForm, u: &[f64]) -> f64 {
    let m = form.interior_count;
    let energy = form.energy(u);
    let lap: f64 = form
        .laplacian(u)
        .iter()
        .zip(&u[..m])
        .map(|(a, b)| a * b)
        .sum();
    let flux: f64 = form
        .normal_derivative(u)
        .iter()
        .zip(&u[m..])
        .map(|(a, b)| a * b)
        .sum();
    (energy + lap - flux).abs()
}

/// Sorted Steklov spectrum, optionally with an orthonormal eigenbasis.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the eigenvector of `eigenvalues[i]`. `None` for
    /// spectra from [`steklov_eigenvalues_with`].
    pub eigenvectors: Option<DMatrix<f64>>,
    pub zero_multiplicity: usize,
    /// Absolute cut-off used for `zero_multiplicity`.
    pub zero_threshold: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn is_zero(&self, lambda: f64) -> bool {
        lambda < self.zero_threshold
    }

    /// `λ_k` with 1-based `k`, if `k ≤ N`.
    pub fn lambda(&self, k: usize) -> Option<f64> {
        k.checked_sub(1)
            .and_then(|i| self.eigenvalues.get(i))
            .copied()
    }

    pub fn eigenvector(&self, i: usize) -> Option<Vec<f64>> {
        self.eigenvectors
            .as_ref()
            .map(|m| m.column(i).iter().copied().collect())
    }
}

pub fn steklov_spectrum(op: &DtNOperator) -> Result<Spectrum> {
    steklov_spectrum_with(op, ZERO_EIGEN_RTOL)
}

/// Full eigendecomposition with a custom relative zero threshold (at most
/// [`MAX_ZERO_EIGEN_RTOL`]).
pub fn steklov_spectrum_with(op: &DtNOperator, zero_rtol: f64) -> Result<Spectrum> {
    check_operator(op, zero_rtol)?;
    let (eigenvalues, eigenvectors) = sorted_symmetric_eigen(&op.matrix);
    Ok(finish_spectrum(eigenvalues, Some(eigenvectors), zero_rtol))
}

/// Eigenvalues only. Several times cheaper than [`steklov_spectrum_with`]
/// on large boundaries.
pub fn steklov_eigenvalues_with(op: &DtNOperator, zero_rtol: f64) -> Result<Spectrum> {
    check_operator(op, zero_rtol)?;
    let eigenvalues = sorted_symmetric_eigenvalues(&op.matrix);
    Ok(finish_spectrum(eigenvalues, None, zero_rtol))
}

fn check_operator(op: &DtNOperator, zero_rtol: f64) -> Result<()> {
    if !(zero_rtol > 0.0 && zero_rtol <= MAX_ZERO_EIGEN_RTOL) {
        return Err(Error::Precondition(format!(
            "zero threshold {zero_rtol:e} outside (0, {MAX_ZERO_EIGEN_RTOL:e}]"
        )));
    }
    let asym = relative_asymmetry(&op.matrix);
    if asym > SYMMETRY_RTOL {
        return Err(Error::NonSymmetric(asym));
    }
    Ok(())
}

fn finish_spectrum(
    eigenvalues: Vec<f64>,
    eigenvectors: Option<DMatrix<f64>>,
    zero_rtol: f64,
) -> Spectrum {
    let top = eigenvalues.last().copied().unwrap_or(0.0);
    let zero_threshold = zero_rtol * top.max(1.0);
    let zero_multiplicity = eigenvalues.iter().filter(|&&l| l < zero_threshold).count();
    Spectrum {
        eigenvalues,
        eigenvectors,
        zero_multiplicity,
        zero_threshold,
    }
}

/// `Σ_i Σ_{z∈δΩ} v_i(z)²` for a family `v_2..v_p` on `Ω̄` (closure order)
/// that is `D_Ω`-orthonormal with zero boundary sum. The result never
/// exceeds `Σ_{i=2}^p 1/λ_i`.
pub fn variational_sum_lower_bound(form: &EnergyForm, trials: &[Vec<f64>]) -> Result<f64> {
    if trials.is_empty() {
        return Err(Error::InvalidTrialFamily(
            "need at least one trial function (p ≥ 2)".into(),
        ));
    }
    let m = form.interior_count;
    for (i, v) in trials.iter().enumerate() {
        if v.len() != form.closure_count() {
            return Err(Error::DimensionMismatch(form.closure_count(), v.len()));
        }
        let s: f64 = v[m..].iter().sum();
        let scale: f64 = v[m..].iter().map(|x| x.abs()).sum::<f64>().max(1.0);
        if s.abs() > TRIAL_FAMILY_TOL * scale {
            return Err(Error::InvalidTrialFamily(format!(
                "trial {i} has boundary sum {s:e}"
            )));
        }
        for (j, w) in trials.iter().enumerate().take(i + 1) {
            let d = form.energy_pair(v, w);
            let target = if i == j { 1.0 } else { 0.0 };
            if (d - target).abs() > TRIAL_FAMILY_TOL {
                return Err(Error::InvalidTrialFamily(format!(
                    "D(v_{i}, v_{j}) = {d} differs from {target}"
                )));
            }
        }
    }
    Ok(trials
        .iter()
        .map(|v| v[m..].iter().map(|x| x * x).sum::<f64>())
        .sum())
}

/// The maximizing family `v_i = λ_i^{-1/2} u_{φ_i}`, `i = 2..=p`, built from
/// eigenpairs with `λ_i > 0`. Indices beyond `N` are skipped.
pub fn eigen_trial_family(
    form: &EnergyForm,
    spectrum: &Spectrum,
    p: usize,
) -> Result<Vec<Vec<f64>>> {
    let top = p.min(spectrum.len());
    (2..=top)
        .map(|k| {
            let lambda = spectrum.eigenvalues[k - 1];
            if spectrum.is_zero(lambda) {
                return Err(Error::InvalidTrialFamily(format!("λ_{k} is zero")));
            }
            let phi = spectrum
                .eigenvector(k - 1)
                .ok_or_else(|| Error::InvalidTrialFamily("spectrum has no eigenvectors".into()))?;
            let u = harmonic_extension(form, &phi)?;
            let s = lambda.sqrt().recip();
            Ok(u.into_iter().map(|x| x * s).collect())
        })
        .collect()
}

/// Coordinate trial functions `u_i(z) = |E_i|^{-1/2} (z_i − mean_{δΩ} z_i)`.
#[derive(Clone, Debug)]
pub struct CoordinateBound {
    /// `Σ_{z∈δΩ} u_i(z)²` per axis.
    pub per_axis: Vec<f64>,
    pub sum: f64,
    /// `Σ_{z,ω∈δΩ} |z − ω|²`, exact.
    pub double_sum: i128,
    /// `2|δΩ| · Σ_z |z − z̄|²`, which equals `double_sum` exactly.
    pub double_sum_via_variance: f64,
    /// `double_sum / (2 |δΩ| |E(Ω, Ω̄)|)`.
    pub rhs_main: f64,
    /// Largest `|D(u_i, u_j) − δ_ij|`.
    pub orthonormality_error: f64,
    /// Axes with `|E_k| = 0`; they contribute 0.
    pub zero_axes: Vec<usize>,
    pub trials: Vec<Vec<f64>>,
}

pub fn coordinate_trial_bound(d: &LatticeDomain) -> Result<CoordinateBound> {
    let profile = d.profile();
    let form = assemble_lattice_with(d, &profile)?;
    coordinate_trial_bound_with(d, &profile, &form)
}

pub fn coordinate_trial_bound_with(
    d: &LatticeDomain,
    profile: &BoundaryProfile,
    form: &EnergyForm,
) -> Result<CoordinateBound> {
    let n = d.dim();
    let nb = profile.delta.len() as i128;
    let mut per_axis = Vec::with_capacity(n);
    let mut trials = Vec::new();
    let mut zero_axes = Vec::new();
    let mut variance_total = 0.0;
    for k in 0..n {
        let sum: i128 = profile.delta.iter().map(|z| z.0[k] as i128).sum();
        let sum_sq: i128 = profile.delta.iter().map(|z| (z.0[k] as i128).pow(2)).sum();
        // Σ (z_k − mean)² = (N Σ z² − (Σ z)²) / N, kept exact in the numerator
        let scatter = (nb * sum_sq - sum * sum) as f64 / nb as f64;
        variance_total += scatter;
        let count = profile.direction_counts[k];
        if count == 0 {
            zero_axes.push(k);
            per_axis.push(0.0);
            continue;
        }
        per_axis.push(scatter / count as f64);
        let mean = sum as f64 / nb as f64;
        let scale = (count as f64).sqrt().recip();
        let coord = |p: &crate::lattice::LatticePoint| scale * (p.0[k] as f64 - mean);
        let u: Vec<f64> = d.points().iter().chain(&profile.delta).map(coord).collect();
        trials.push(u);
    }
    let mut orthonormality_error = 0.0f64;
    for (i, u) in trials.iter().enumerate() {
        for (j, v) in trials.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            orthonormality_error =
                orthonormality_error.max((form.energy_pair(u, v) - target).abs());
        }
    }
    let mut double_sum: i128 = 0;
    for z in &profile.delta {
        for w in &profile.delta {
            double_sum += z.dist2(w) as i128;
        }
    }
    let e = profile.energy_edges.len() as f64;
    let rhs_main = double_sum as f64 / (2.0 * nb as f64 * e);
    Ok(CoordinateBound {
        sum: per_axis.iter().sum(),
        per_axis,
        double_sum,
        double_sum_via_variance: 2.0 * nb as f64 * variance_total,
        rhs_main,
        orthonormality_error,
        zero_axes,
        trials,
    })
}

/// Convenience: form, operator and spectrum of a lattice domain.
pub fn lattice_spectrum(d: &LatticeDomain) -> Result<(EnergyForm, DtNOperator, Spectrum)> {
    let form = assemble_lattice(d)?;
    let op = dtn_matrix(&form)?;
    let spec = steklov_spectrum(&op)?;
    Ok((form, op, spec))
}

/// Residual `‖Λv_i − λ_i v_i‖` maximized over the spectrum, if the
/// eigenvectors are present.
pub fn max_eigen_residual(op: &DtNOperator, spectrum: &Spectrum) -> Option<f64> {
    spectrum.eigenvectors.as_ref()?;
    let worst = (0..spectrum.len())
        .map(|i| {
            let v = spectrum.eigenvector(i).unwrap_or_default();
            let av = op.apply(&v);
            let r: Vec<f64> = av
                .iter()
                .zip(&v)
                .map(|(a, b)| a - spectrum.eigenvalues[i] * b)
                .collect();
            norm2(&r)
        })
        .fold(0.0, f64::max);
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{subgraph_problem, FiniteGraph};
    use crate::lattice::{generate, ShapeSpec};

    fn single() -> LatticeDomain {
        generate(&ShapeSpec::Box { dims: vec![1, 1] }).unwrap()
    }

    fn domino() -> LatticeDomain {
        LatticeDomain::from_coords(2, &[vec![0, 0], vec![1, 0]]).unwrap()
    }

    fn path_form() -> EnergyForm {
        assemble_problem(&subgraph_problem(&FiniteGraph::path(3), &[1]).unwrap()).unwrap()
    }

    #[test]
    fn single_vertex_blocks() {
        let f = assemble_lattice(&single()).unwrap();
        assert_eq!(
            f.interior_block().to_dense(),
            DMatrix::from_element(1, 1, 4.0)
        );
        assert_eq!(f.coupling_block(), DMatrix::from_element(1, 4, -1.0));
        assert_eq!(f.boundary_diagonal(), &[1.0; 4]);
    }

    #[test]
    fn path_and_domino_blocks() {
        let f = path_form();
        assert_eq!(
            f.interior_block().to_dense(),
            DMatrix::from_element(1, 1, 2.0)
        );
        assert_eq!(f.boundary_diagonal(), &[1.0, 1.0]);
        let f = assemble_lattice(&domino()).unwrap();
        assert_eq!(
            f.interior_block().to_dense(),
            DMatrix::from_row_slice(2, 2, &[4.0, -1.0, -1.0, 4.0])
        );
    }

    #[test]
    fn block_form_reproduces_edge_energy() {
        let f = assemble_lattice(&domino()).unwrap();
        for s in 0..20 {
            let u: Vec<f64> = (0..f.closure_count())
                .map(|i| ((i * 7 + s * 13) as f64).sin())
                .collect();
            let a = f.energy(&u);
            let b = f.block_quadratic_form(&u);
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn harmonic_extensions() {
        let f = assemble_lattice(&single()).unwrap();
        let u = harmonic_extension(&f, &[1.0; 4]).unwrap();
        assert!((u[0] - 1.0).abs() < 1e-15);
        let u = harmonic_extension(&f, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((u[0] - 0.25).abs() < 1e-15);
        let u = harmonic_extension(&path_form(), &[3.0, -1.0]).unwrap();
        assert!((u[0] - 1.0).abs() < 1e-15);
        assert!(harmonic_extension(&f, &[1.0]).is_err());
    }

    #[test]
    fn single_vertex_dtn() {
        let f = assemble_lattice(&single()).unwrap();
        let op = dtn_matrix(&f).unwrap();
        let expected = DMatrix::identity(4, 4) - DMatrix::from_element(4, 4, 0.25);
        assert!((&op.matrix - expected).amax() < 1e-15);
        let s = steklov_spectrum(&op).unwrap();
        for (got, want) in s.eigenvalues.iter().zip([0.0, 1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert_eq!(s.zero_multiplicity, 1);
    }

    #[test]
    fn path_dtn() {
        let op = dtn_matrix(&path_form()).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[0.5, -0.5, -0.5, 0.5]);
        assert!((&op.matrix - expected).amax() < 1e-15);
        let s = steklov_spectrum(&op).unwrap();
        assert!(s.eigenvalues[0].abs() < 1e-15);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spectrum_of_explicit_matrix() {
        let op = DtNOperator::from_matrix(DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]));
        let s = steklov_spectrum(&op).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 3.0).abs() < 1e-14);
        let bad = DtNOperator::from_matrix(DMatrix::from_row_slice(2, 2, &[2.0, -1.0, 0.0, 2.0]));
        assert!(matches!(
            steklov_spectrum(&bad),
            Err(Error::NonSymmetric(_))
        ));
        assert!(steklov_spectrum_with(&op, 1e-3).is_err());
    }

    #[test]
    fn two_far_points_have_two_zero_modes() {
        let d = LatticeDomain::from_coords(2, &[vec![0, 0], vec![10, 0]]).unwrap();
        let (form, _, s) = lattice_spectrum(&d).unwrap();
        assert_eq!(form.components().len(), 2);
        assert_eq!(s.zero_multiplicity, 2);
    }

    #[test]
    fn definitional_route_matches_schur() {
        let f = assemble_lattice(&domino()).unwrap();
        let op = dtn_matrix(&f).unwrap();
        for solver in [InteriorSolver::Direct, InteriorSolver::ConjugateGradient] {
            let def = dtn_definitional(&f, solver).unwrap();
            assert!((&op.matrix - def).amax() < 1e-12);
        }
    }

    #[test]
    fn green_identity() {
        let f = assemble_lattice(&domino()).unwrap();
        assert_eq!(
            green_identity_residual(&f, &vec![1.0; f.closure_count()]),
            0.0
        );
        let phi: Vec<f64> = (0..6).map(|i| i as f64 - 2.5).collect();
        let u = harmonic_extension(&f, &phi).unwrap();
        let op = dtn_matrix(&f).unwrap();
        let lphi: f64 = op.apply(&phi).iter().zip(&phi).map(|(a, b)| a * b).sum();
        assert!((f.energy(&u) - lphi).abs() < 1e-12);
    }

    #[test]
    fn degenerate_graph_problem() {
        let g = FiniteGraph::new(4, [(0, 1), (1, 2)]).unwrap();
        let p = subgraph_problem(&g, &[1, 3]).unwrap();
        match assemble_problem(&p) {
            Err(Error::DegenerateClosure { component }) => assert_eq!(component, "vertex 3"),
            other => panic!("expected degenerate closure, got {other:?}"),
        }
    }

    #[test]
    fn variational_family_checks() {
        let d = single();
        let (form, _, s) = lattice_spectrum(&d).unwrap();
        let fam = eigen_trial_family(&form, &s, 3).unwrap();
        let v = variational_sum_lower_bound(&form, &fam).unwrap();
        assert!((v - 2.0).abs() < 1e-12);

        // one mean-zero boundary bump with unit energy
        let mut w = vec![0.0; form.closure_count()];
        w[1] = 1.0;
        w[2] = -1.0;
        let e = form.energy(&w).sqrt();
        let w: Vec<f64> = w.iter().map(|x| x / e).collect();
        let v = variational_sum_lower_bound(&form, std::slice::from_ref(&w)).unwrap();
        assert!(v <= 1.0 + 1e-12);

        let unnormalized: Vec<f64> = w.iter().map(|x| 2.0 * x).collect();
        assert!(variational_sum_lower_bound(&form, &[unnormalized]).is_err());
        let mut biased = w;
        biased[1] += 0.1;
        assert!(variational_sum_lower_bound(&form, &[biased]).is_err());
        assert!(variational_sum_lower_bound(&form, &[]).is_err());
    }

    #[test]
    fn coordinate_bound_single_vertex() {
        let c = coordinate_trial_bound(&single()).unwrap();
        assert_eq!(c.per_axis, vec![1.0, 1.0]);
        assert_eq!(c.sum, 2.0);
        assert!(c.orthonormality_error < 1e-15);
        assert_eq!(c.double_sum as f64, c.double_sum_via_variance);
        assert!(c.zero_axes.is_empty());
    }
}

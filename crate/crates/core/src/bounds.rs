//! Constants and final inequalities for lattice domains, with every step of
//! the chain from the eigenvalue sum down to `C1|Ω|^{1/n} − C2/|Ω|` kept as a
//! separate record.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    ball_radius, comparison_constant, unit_ball_volume, GeometryReport, FLOAT_RTOL,
};
use crate::lattice::{
    count_identities, injection_check_prop36, q2_neighborhood_check, LatticeDomain,
};
use crate::record::{extended_f64, Relation, VerificationRecord};
use crate::spectral::{
    assemble_lattice_with, coordinate_trial_bound_with, dtn_matrix, steklov_eigenvalues_with,
    Spectrum, ZERO_EIGEN_RTOL,
};

/// Tolerance on `D(u_i, u_j) = δ_ij` for the coordinate family.
pub const ORTHONORMALITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub n: usize,
    pub omega_n: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// Volume above which the lower bound is at least `C1|Ω|^{1/n} / 2`.
    pub threshold: f64,
}

pub fn constants(n: usize) -> Result<BoundConstants> {
    if n < 1 {
        return Err(Error::InvalidDimension(n));
    }
    let nf = n as f64;
    let omega_n = unit_ball_volume(n);
    let c1 = (64.0 * nf.powi(3) * omega_n.powf(1.0 / nf)).recip();
    let c2 = (32.0 * nf).recip();
    Ok(BoundConstants {
        n,
        omega_n,
        c1,
        c2,
        c3: comparison_constant(n),
        threshold: (2.0 * c2 / c1).powf(nf / (nf + 1.0)),
    })
}

/// `v^{1/n}`, exact when `v` is a perfect `n`-th power.
pub fn nth_root(v: usize, n: usize) -> f64 {
    let approx = (v as f64).powf(1.0 / n as f64);
    let r = approx.round() as u128;
    if r.checked_pow(n as u32) == Some(v as u128) {
        r as f64
    } else {
        approx
    }
}

impl BoundConstants {
    /// `C1|Ω|^{1/n} − C2/|Ω|`.
    pub fn rhs_theorem(&self, volume: usize) -> f64 {
        self.c1 * nth_root(volume, self.n) - self.c2 / volume as f64
    }
}

/// `Σ_{i=2}^{min(n+1,N)} 1/λ_i`; `+∞` as soon as one of those eigenvalues
/// is zero at the spectrum's threshold.
pub fn inverse_eigen_sum(spec: &Spectrum, n: usize) -> f64 {
    let top = (n + 1).min(spec.len());
    let mut sum = 0.0;
    for i in 2..=top {
        let l = spec.eigenvalues[i - 1];
        if spec.is_zero(l) {
            return f64::INFINITY;
        }
        sum += l.recip();
    }
    sum
}

/// Corollary and threshold form for one domain.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub lambda2: Option<f64>,
    /// `n / rhs_theorem` when `rhs_theorem > 0`.
    pub corollary_rhs: Option<f64>,
    pub threshold: f64,
    /// `C1|Ω|^{1/n} / 2`.
    pub remark_rhs: f64,
    pub corollary: VerificationRecord,
    pub remark: VerificationRecord,
}

fn corollary_of(c: &BoundConstants, volume: usize, spec: &Spectrum, lhs: f64) -> CorollaryReport {
    let rhs = c.rhs_theorem(volume);
    let lambda2 = spec.lambda(2);
    let corollary_rhs = (rhs > 0.0).then(|| c.n as f64 / rhs);
    let corollary = match (lambda2, corollary_rhs) {
        (Some(l), Some(b)) => {
            VerificationRecord::check("corollary_lambda2_upper", l, Relation::Le, b, FLOAT_RTOL)
        }
        (l, b) => VerificationRecord::check(
            "corollary_lambda2_upper",
            l.unwrap_or(0.0),
            Relation::Le,
            b.unwrap_or(f64::INFINITY),
            FLOAT_RTOL,
        )
        .mark_vacuous()
        .with_detail(if b.is_none() {
            "theorem bound not positive"
        } else {
            "fewer than two boundary vertices"
        }),
    };
    let remark_rhs = 0.5 * c.c1 * nth_root(volume, c.n);
    let mut remark = VerificationRecord::check(
        "remark_half_c1_lower",
        lhs,
        Relation::Ge,
        remark_rhs,
        FLOAT_RTOL,
    );
    if (volume as f64) < c.threshold {
        remark = remark.mark_vacuous().with_detail("volume below threshold");
    }
    CorollaryReport {
        lambda2,
        corollary_rhs,
        threshold: c.threshold,
        remark_rhs,
        corollary,
        remark,
    }
}

/// The evaluated chain for one lattice domain.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub volume: usize,
    pub boundary_vertices: usize,
    pub bad_vertices: usize,
    pub edge_boundary: usize,
    pub energy_edges: usize,
    /// `λ_1 .. λ_{min(n+1, N)}`.
    pub spectrum_head: Vec<f64>,
    pub zero_multiplicity: usize,
    /// Set when some `λ_i`, `2 ≤ i ≤ n+1`, is zero.
    pub disconnected: bool,
    #[serde(with = "extended_f64")]
    pub lhs: f64,
    pub coordinate_per_axis: Vec<f64>,
    pub coordinate_sum: f64,
    pub boundary_double_sum: String,
    pub rhs_main: f64,
    /// `(R − 2n²/|Ω|) / (2 C3 m)` with the computed multiplicity.
    pub reduced_actual: f64,
    /// The same with `m = 8n²`.
    pub reduced_bound: f64,
    pub rhs_theorem: f64,
    pub corollary_rhs: Option<f64>,
    pub constants: BoundConstants,
    pub geometry: GeometryReport,
    pub links: Vec<VerificationRecord>,
    pub corollary: CorollaryReport,
    /// Every non-vacuous record passed.
    pub passed: bool,
}

impl BoundReport {
    pub fn all_records(&self) -> impl Iterator<Item = &VerificationRecord> {
        self.links
            .iter()
            .chain(self.geometry.all_records())
            .chain([&self.corollary.corollary, &self.corollary.remark])
    }

    pub fn failures(&self) -> Vec<&VerificationRecord> {
        self.all_records()
            .filter(|r| !r.passed && !r.vacuous)
            .collect()
    }

    pub fn lambda2(&self) -> Option<f64> {
        self.spectrum_head.get(1).copied()
    }
}

pub fn verify_theorem(d: &LatticeDomain) -> Result<BoundReport> {
    verify_theorem_with(d, ZERO_EIGEN_RTOL)
}

pub fn verify_theorem_with(d: &LatticeDomain, zero_rtol: f64) -> Result<BoundReport> {
    let n = d.dim();
    let c = constants(n)?;
    let profile = d.profile();
    let form = assemble_lattice_with(d, &profile)?;
    let op = dtn_matrix(&form)?;
    let spec = steklov_eigenvalues_with(&op, zero_rtol)?;
    let coord = coordinate_trial_bound_with(d, &profile, &form)?;
    let geometry = GeometryReport::compute_with(d, &profile)?;

    let volume = d.len();
    let lhs = inverse_eigen_sum(&spec, n);
    let nf = n as f64;
    let vol = volume as f64;
    let nb = profile.delta.len() as f64;
    let e = profile.energy_edges.len() as f64;
    let edges = profile.edge_boundary.len() as f64;
    let bad = profile.delta_bad.len() as f64;
    let r = ball_radius(n, vol);
    let rhs_theorem = c.rhs_theorem(volume);

    let mut links = Vec::new();
    links.push(VerificationRecord::check(
        "inverse_sum_ge_coordinate_family",
        lhs,
        Relation::Ge,
        coord.sum,
        FLOAT_RTOL,
    ));
    links.push(VerificationRecord::exact(
        "coordinate_family_orthonormal",
        coord.orthonormality_error,
        Relation::Le,
        ORTHONORMALITY_TOL,
    ));
    let mut variance = VerificationRecord::check(
        "double_sum_eq_variance_form",
        coord.double_sum_via_variance,
        Relation::Le,
        coord.double_sum as f64,
        1e-12,
    );
    variance.passed &= (coord.double_sum_via_variance - coord.double_sum as f64).abs()
        <= 1e-12 * (1.0 + coord.double_sum as f64);
    links.push(variance);
    links.push(VerificationRecord::check(
        "coordinate_family_ge_main",
        coord.sum,
        Relation::Ge,
        coord.rhs_main,
        FLOAT_RTOL,
    ));
    links.push(VerificationRecord::check(
        "inverse_sum_ge_main",
        lhs,
        Relation::Ge,
        coord.rhs_main,
        FLOAT_RTOL,
    ));

    let mut reduced = [0.0; 2];
    for (slot, (tag, m)) in [
        (
            "actual_multiplicity",
            geometry.chain_actual.multiplicity_used,
        ),
        ("multiplicity_bound", geometry.chain_bound.multiplicity_used),
    ]
    .into_iter()
    .enumerate()
    {
        let m = m as f64;
        let numerator = edges * vol * r - 2.0 * nf * nf * bad;
        let combined = 2.0 * nf * numerator / (2.0 * nb * e * c.c3 * m);
        let widened = nf * numerator / (edges * 2.0 * nf * vol * c.c3 * m);
        let radial = (r - 2.0 * nf * nf / vol) / (2.0 * c.c3 * m);
        reduced[slot] = radial;
        links.push(VerificationRecord::check(
            format!("main_ge_combined_{tag}"),
            coord.rhs_main,
            Relation::Ge,
            combined,
            FLOAT_RTOL,
        ));
        let mut w = VerificationRecord::check(
            format!("combined_ge_widened_{tag}"),
            combined,
            Relation::Ge,
            widened,
            FLOAT_RTOL,
        );
        if numerator < 0.0 {
            w = w.mark_vacuous().with_detail("numerator negative");
        }
        links.push(w);
        links.push(VerificationRecord::check(
            format!("widened_ge_radial_{tag}"),
            widened,
            Relation::Ge,
            radial,
            FLOAT_RTOL,
        ));
    }
    let mut actual_vs_theorem = VerificationRecord::check(
        "radial_actual_ge_theorem",
        reduced[0],
        Relation::Ge,
        rhs_theorem,
        FLOAT_RTOL,
    );
    if rhs_theorem <= 0.0 {
        actual_vs_theorem = actual_vs_theorem
            .mark_vacuous()
            .with_detail("theorem bound not positive");
    }
    links.push(actual_vs_theorem);
    let mut bound_eq = VerificationRecord::check(
        "radial_bound_eq_theorem",
        reduced[1],
        Relation::Ge,
        rhs_theorem,
        FLOAT_RTOL,
    );
    bound_eq.passed &= (reduced[1] - rhs_theorem).abs() <= FLOAT_RTOL * (1.0 + rhs_theorem.abs());
    links.push(bound_eq);
    links.push(VerificationRecord::check(
        "main_ge_theorem",
        coord.rhs_main,
        Relation::Ge,
        rhs_theorem,
        FLOAT_RTOL,
    ));
    let mut theorem =
        VerificationRecord::check("theorem", lhs, Relation::Ge, rhs_theorem, FLOAT_RTOL);
    if rhs_theorem <= 0.0 {
        theorem = theorem
            .mark_vacuous()
            .with_detail("theorem bound not positive");
    }
    if lhs.is_infinite() {
        theorem = theorem.with_detail("disconnected: some λ_i with 2 ≤ i ≤ n+1 is zero");
    }
    links.push(theorem);
    links.push(injection_check_prop36(d));
    links.push(q2_neighborhood_check(d, &profile)?);
    links.extend(count_identities(d, &profile));

    let corollary = corollary_of(&c, volume, &spec, lhs);
    let head = (n + 1).min(spec.len());
    let mut report = BoundReport {
        n,
        volume,
        boundary_vertices: profile.delta.len(),
        bad_vertices: profile.delta_bad.len(),
        edge_boundary: profile.edge_boundary.len(),
        energy_edges: profile.energy_edges.len(),
        spectrum_head: spec.eigenvalues[..head].to_vec(),
        zero_multiplicity: spec.zero_multiplicity,
        disconnected: lhs.is_infinite(),
        lhs,
        coordinate_per_axis: coord.per_axis,
        coordinate_sum: coord.sum,
        boundary_double_sum: coord.double_sum.to_string(),
        rhs_main: coord.rhs_main,
        reduced_actual: reduced[0],
        reduced_bound: reduced[1],
        rhs_theorem,
        corollary_rhs: corollary.corollary_rhs,
        constants: c,
        geometry,
        links,
        corollary,
        passed: false,
    };
    report.passed = report.failures().is_empty();
    Ok(report)
}

pub fn verify_corollary(d: &LatticeDomain) -> Result<CorollaryReport> {
    Ok(verify_theorem(d)?.corollary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{generate, ShapeSpec};

    #[test]
    fn planar_constants() {
        let c = constants(2).unwrap();
        assert!((c.c1 - 1.0 / (512.0 * std::f64::consts::PI.sqrt())).abs() < 1e-15);
        assert!((c.c1 - 1.1019328e-3).abs() < 1e-10);
        assert_eq!(c.c2, 1.0 / 64.0);
        let alt = (16.0 * std::f64::consts::PI.sqrt()).powf(2.0 / 3.0);
        assert!((c.threshold - alt).abs() < 1e-12);
        assert!((c.threshold - 9.29).abs() < 0.01);
        assert_eq!(constants(3).unwrap().c2, 1.0 / 96.0);
        assert!(matches!(constants(0), Err(Error::InvalidDimension(0))));
    }

    #[test]
    fn threshold_matches_closed_form() {
        for n in 1..8 {
            let c = constants(n).unwrap();
            let nf = n as f64;
            let alt = (4.0 * nf * nf * c.omega_n.powf(1.0 / nf)).powf(nf / (nf + 1.0));
            assert!((c.threshold - alt).abs() < 1e-10 * alt);
        }
    }

    #[test]
    fn integer_roots() {
        assert_eq!(nth_root(144, 2), 12.0);
        assert_eq!(nth_root(216, 3), 6.0);
        assert!((nth_root(2, 2) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn single_vertex_report() {
        let d = LatticeDomain::from_coords(2, &[vec![0, 0]]).unwrap();
        let r = verify_theorem(&d).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-12);
        assert!(
            (r.rhs_theorem - (1.0 / (512.0 * std::f64::consts::PI.sqrt()) - 1.0 / 64.0)).abs()
                < 1e-15
        );
        assert!(r.rhs_theorem < 0.0);
        assert!(r.passed, "{:?}", r.failures());
        let theorem = r.links.iter().find(|l| l.name == "theorem").unwrap();
        assert!(theorem.vacuous);
    }

    #[test]
    fn box_twelve_passes() {
        let d = generate(&ShapeSpec::Box { dims: vec![12, 12] }).unwrap();
        let r = verify_theorem(&d).unwrap();
        assert!(r.passed, "{:?}", r.failures());
        assert!(r.lhs >= r.rhs_main && r.rhs_main >= r.rhs_theorem);
    }

    #[test]
    fn two_components_infinite() {
        let d = LatticeDomain::from_coords(2, &[vec![0, 0], vec![5, 5]]).unwrap();
        let r = verify_theorem(&d).unwrap();
        assert!(r.disconnected && r.lhs.is_infinite());
        assert!(r.passed);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"lhs\":\"inf\""));
    }
}

//! Spectra of single blocks `K_i` inside a gadget chain, where the bottom
//! of the spectrum is pinned by the two-terminal effective resistance.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{effective_resistance, gadget_prefix, subgraph_problem};
use crate::record::{extended_f64, Relation, VerificationRecord};
use crate::spectral::{assemble_problem, dtn_matrix, steklov_eigenvalues_with};

/// Absolute tolerance on `λ₂` and the resistance against their closed forms.
pub const GADGET_TOL: f64 = 1e-9;

/// Uniform lower bound asserted for `λ₂(K_i)`.
pub const GADGET_LAMBDA2_FLOOR: f64 = 1.0 / 3.0;

/// `6 − 2^{1−i}`: four pendant edges plus two parallel trees of depth `i`.
pub fn expected_resistance(i: usize) -> f64 {
    6.0 - 2f64.powi(1 - i as i32)
}

/// `2 / (6 − 2^{1−i})`, asserted only for `i ≥ 2`.
pub fn expected_lambda2(i: usize) -> Option<f64> {
    (i >= 2).then(|| 2.0 / expected_resistance(i))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GadgetReport {
    pub index: usize,
    pub omega_size: usize,
    pub boundary_labels: Vec<String>,
    pub eigenvalues: Vec<f64>,
    /// `+∞` when the block has a single boundary vertex.
    #[serde(with = "extended_f64")]
    pub lambda2: f64,
    pub expected_lambda2: Option<f64>,
    /// Between the two boundary vertices, inside `(K̄_i, E(K_i, K̄_i))`.
    pub resistance: Option<f64>,
    pub records: Vec<VerificationRecord>,
}

impl GadgetReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.passed || r.vacuous)
    }
}

/// Block `i` of the chain `K_1 … K_{i+1}`. The first block touches only
/// `K_2`, so it has one boundary vertex and `λ₂ = +∞`.
pub fn gadget_report(i: usize, zero_rtol: f64) -> Result<GadgetReport> {
    let chain = gadget_prefix(i)?;
    let p = subgraph_problem(&chain.graph, &chain.block_omega(i)?)?;
    let form = assemble_problem(&p)?;
    let op = dtn_matrix(&form)?;
    let spec = steklov_eigenvalues_with(&op, zero_rtol)?;
    let lambda2 = spec.lambda(2).unwrap_or(f64::INFINITY);

    let closure = p.closure();
    let local = |v: usize| {
        closure
            .binary_search(&v)
            .expect("boundary vertex lies in the closure")
    };
    let resistance = match p.delta.as_slice() {
        [a, b] => Some(effective_resistance(
            &p.closure_graph(),
            local(*a),
            local(*b),
        )?),
        _ => None,
    };

    let mut records = Vec::new();
    if let Some(e) = expected_lambda2(i) {
        let mut r = VerificationRecord::check(
            "lambda2_closed_form",
            (lambda2 - e).abs(),
            Relation::Le,
            GADGET_TOL,
            0.0,
        );
        r = r.with_detail(format!("lambda2 = {lambda2}, closed form = {e}"));
        records.push(r);
    }
    records.push(VerificationRecord::check(
        "lambda2_floor",
        lambda2,
        Relation::Ge,
        GADGET_LAMBDA2_FLOOR,
        0.0,
    ));
    if let Some(res) = resistance {
        records.push(
            VerificationRecord::check(
                "resistance_closed_form",
                (res - expected_resistance(i)).abs(),
                Relation::Le,
                GADGET_TOL,
                0.0,
            )
            .with_detail(format!("resistance = {res}")),
        );
        records.push(VerificationRecord::check(
            "lambda2_times_resistance",
            (lambda2 * res - 2.0).abs(),
            Relation::Le,
            GADGET_TOL,
            0.0,
        ));
    }
    Ok(GadgetReport {
        index: i,
        omega_size: p.omega.len(),
        boundary_labels: p.delta_labels().to_vec(),
        eigenvalues: spec.eigenvalues.clone(),
        lambda2,
        expected_lambda2: expected_lambda2(i),
        resistance,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::ZERO_EIGEN_RTOL;

    #[test]
    fn depth_two_block() {
        let r = gadget_report(2, ZERO_EIGEN_RTOL).unwrap();
        assert!((r.lambda2 - 4.0 / 11.0).abs() < 1e-12);
        assert_eq!(r.eigenvalues.len(), 2);
        assert!(r.eigenvalues[0].abs() < 1e-12);
        assert!(r.passed());
    }

    #[test]
    fn first_block_has_no_closed_form() {
        let r = gadget_report(1, ZERO_EIGEN_RTOL).unwrap();
        assert!(r.expected_lambda2.is_none());
        assert_eq!(r.boundary_labels, vec!["K2:root".to_string()]);
        assert!(r.lambda2.is_infinite() && r.resistance.is_none());
        assert!(r.passed());
    }
}

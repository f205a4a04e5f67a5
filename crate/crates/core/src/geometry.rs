//! Continuous comparison geometry for a lattice domain `Ω`.
//!
//! Every boundary edge `τ = {x, y}` is dual to a unit `(n−1)`-cube
//! `τ^⊥ = ½(x+y) + Q_k` normal to the edge axis `k`; the union of these
//! cubes is the boundary of `Ω̂`, the union of closed unit cubes centred at
//! the points of `Ω`. Cube centres have half-integer coordinates, so every
//! integral computed here is a rational with denominator dividing 12.
//! Centres are stored doubled, as integers.
//!
//! For two unit cubes with centres `p`, `q` each coordinate contributes
//! `(p_k − q_k)²` plus a variance of `1/12` for every cube in which that
//! coordinate varies. Each cube varies in `n − 1` coordinates, so
//!
//! ```text
//! ∫_{τ₁^⊥} ∫_{τ₂^⊥} |s − t|² = |p − q|² + (n − 1)/6
//! ```
//!
//! for all orientation combinations. The integration tests check this
//! against a Monte-Carlo estimator.

use std::f64::consts::PI;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{p_map, q2_boundary_neighbors, BoundaryProfile, LatticeDomain, LatticeEdge};
use crate::record::{Relation, VerificationRecord};

/// Largest `|∂Ω|` for which pair sums are attempted.
pub const MAX_BOUNDARY_CUBES: usize = 20_000;
/// Pair sums run in exact rational arithmetic up to this many ordered pairs.
pub const EXACT_PAIR_LIMIT: usize = 1_000_000;
/// Relative tolerance for floating-point identities in this module.
pub const FLOAT_RTOL: f64 = 1e-9;

/// Volume of the unit ball in `R^n`, via `ω_n = 2π/n · ω_{n−2}` from
/// `ω_0 = 1`, `ω_1 = 2`.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// Radius of the ball with volume `volume` in `R^n`.
pub fn ball_radius(n: usize, volume: f64) -> f64 {
    (volume / unit_ball_volume(n)).powf(1.0 / n as f64)
}

/// Constant of the per-pair comparison `∫∫|s−t|² ≤ 4n |P₁ − P₂|²`.
pub fn comparison_constant(n: usize) -> f64 {
    4.0 * n as f64
}

/// A unit `(n−1)`-cube normal to one axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryCube {
    /// Twice the centre.
    pub center2: Vec<i64>,
    pub normal_axis: usize,
    pub source_edge: Option<LatticeEdge>,
}

impl BoundaryCube {
    /// The cube `τ^⊥` dual to a lattice edge.
    pub fn dual_to(edge: &LatticeEdge) -> Self {
        let (a, b) = edge.endpoints();
        Self {
            center2: a
                .0
                .iter()
                .zip(&b.0)
                .map(|(&x, &y)| x as i64 + y as i64)
                .collect(),
            normal_axis: edge.axis(),
            source_edge: Some(edge.clone()),
        }
    }

    /// A free-standing cube with centre `center2 / 2`.
    pub fn new(center2: Vec<i64>, normal_axis: usize) -> Result<Self> {
        if normal_axis >= center2.len() {
            return Err(Error::InvalidSpec(format!(
                "normal axis {normal_axis} outside dimension {}",
                center2.len()
            )));
        }
        Ok(Self {
            center2,
            normal_axis,
            source_edge: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.center2.len()
    }

    pub fn center(&self) -> Vec<f64> {
        self.center2.iter().map(|&c| c as f64 / 2.0).collect()
    }

    /// `(n−1)`-dimensional measure, always 1.
    pub fn measure(&self) -> f64 {
        1.0
    }
}

fn dist2_i(a: &[i64], b: &[i64]) -> i128 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = (x - y) as i128;
            d * d
        })
        .sum()
}

/// `12 · ∫∫|s−t|²`, an integer: `3|P − Q|² + 2(n−1)` for doubled centres.
pub fn pair_integral_twelfths(c1: &BoundaryCube, c2: &BoundaryCube) -> Result<i128> {
    if c1.dim() != c2.dim() {
        return Err(Error::DimensionMismatch(c1.dim(), c2.dim()));
    }
    Ok(3 * dist2_i(&c1.center2, &c2.center2) + 2 * (c1.dim() as i128 - 1))
}

pub fn pair_integral(c1: &BoundaryCube, c2: &BoundaryCube) -> Result<f64> {
    Ok(pair_integral_twelfths(c1, c2)? as f64 / 12.0)
}

/// Boundary cubes of `Ω` with the index in `δΩ` of `P(τ^⊥)`.
#[derive(Clone, Debug)]
pub struct CubeSet {
    pub n: usize,
    pub cubes: Vec<BoundaryCube>,
    /// `anchor[i]` is the index in `δΩ` of the boundary endpoint of cube `i`.
    pub anchor: Vec<usize>,
    /// Per `δΩ` vertex, whether it is bad.
    pub bad: Vec<bool>,
}

impl CubeSet {
    pub fn new(d: &LatticeDomain, profile: &BoundaryProfile) -> Result<Self> {
        let m = profile.edge_boundary.len();
        if m > MAX_BOUNDARY_CUBES {
            return Err(Error::TooLarge(format!(
                "|∂Ω| = {m} exceeds the pair-sum cap {MAX_BOUNDARY_CUBES}"
            )));
        }
        let mut cubes = Vec::with_capacity(m);
        let mut anchor = Vec::with_capacity(m);
        for e in &profile.edge_boundary {
            let p = p_map(e, d)?;
            anchor.push(profile.delta_index(&p).expect("P lands in δΩ"));
            cubes.push(BoundaryCube::dual_to(e));
        }
        let bad = profile.delta.iter().map(|x| profile.is_bad(x)).collect();
        Ok(Self {
            n: d.dim(),
            cubes,
            anchor,
            bad,
        })
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    /// A pair is bad iff both cubes share the same boundary endpoint and that
    /// endpoint is a bad vertex.
    pub fn is_bad_pair(&self, i: usize, j: usize) -> bool {
        self.anchor[i] == self.anchor[j] && self.bad[self.anchor[i]]
    }

    /// Ordered good pairs `(i, j)` of cube indices, row-major.
    pub fn good_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.len();
        (0..m)
            .flat_map(move |i| (0..m).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.is_bad_pair(i, j))
    }

    fn twelfths(&self, i: usize, j: usize) -> i128 {
        3 * dist2_i(&self.cubes[i].center2, &self.cubes[j].center2) + 2 * (self.n as i128 - 1)
    }
}

/// Which arithmetic produced a [`DoubleIntegral`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arithmetic {
    ExactRational,
    Float,
}

/// `∫_{∂Ω̂}∫_{∂Ω̂} |s−t|²` with the barycenter and second moment of `∂Ω̂`.
#[derive(Clone, Debug)]
pub struct DoubleIntegral {
    pub arithmetic: Arithmetic,
    pub cube_count: usize,
    pub total: f64,
    pub total_exact: Option<Ratio<i128>>,
    pub barycenter: Vec<f64>,
    /// `∫_{∂Ω̂} |s − c|²`.
    pub second_moment: f64,
    pub second_moment_exact: Option<Ratio<i128>>,
    /// `|total − 2|∂Ω|·second_moment| / total` in floating point.
    pub identity_rel_error: f64,
    /// Exact `total == 2|∂Ω|·second_moment` (rational mode only).
    pub identity_exact: Option<bool>,
}

pub fn total_double_integral(d: &LatticeDomain) -> Result<DoubleIntegral> {
    let profile = d.profile();
    double_integral_of(&CubeSet::new(d, &profile)?)
}

/// Pair sum in a fixed order: rows are reduced independently (in parallel)
/// and then summed sequentially by row index.
pub fn double_integral_of(cs: &CubeSet) -> Result<DoubleIntegral> {
    let m = cs.len();
    let n = cs.n;
    if m == 0 {
        return Err(Error::Precondition("domain has no boundary cubes".into()));
    }
    let exact = m * m <= EXACT_PAIR_LIMIT;
    let mut sum2 = vec![0i128; n];
    for c in &cs.cubes {
        for (s, &x) in sum2.iter_mut().zip(&c.center2) {
            *s += x as i128;
        }
    }
    let mm = m as i128;
    let barycenter: Vec<f64> = sum2.iter().map(|&s| s as f64 / (2.0 * m as f64)).collect();
    // ∫_{τ^⊥} |s − c|² = |centre − c|² + (n − 1)/12 for a unit cube
    let scatter_f: f64 = cs
        .cubes
        .iter()
        .map(|c| {
            c.center()
                .iter()
                .zip(&barycenter)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
        })
        .sum();
    let second_moment = scatter_f + m as f64 * (n as f64 - 1.0) / 12.0;

    let (total, total_exact, second_moment_exact, identity_exact, arithmetic) = if exact {
        let rows: Vec<i128> = (0..m)
            .into_par_iter()
            .map(|i| (0..m).map(|j| cs.twelfths(i, j)).sum())
            .collect();
        let twelfths: i128 = rows.iter().sum();
        let total_exact = Ratio::new(twelfths, 12);
        // Σ |M·P_i − S|² / (4M²) + M(n−1)/12, with P_i the doubled centres
        let scatter_num: i128 = cs
            .cubes
            .iter()
            .map(|c| {
                c.center2
                    .iter()
                    .zip(&sum2)
                    .map(|(&x, &s)| {
                        let v = mm * x as i128 - s;
                        v * v
                    })
                    .sum::<i128>()
            })
            .sum();
        let sm = Ratio::new(scatter_num, 4 * mm * mm) + Ratio::new(mm * (n as i128 - 1), 12);
        let holds = total_exact == Ratio::from_integer(2 * mm) * sm;
        (
            ratio_to_f64(&total_exact),
            Some(total_exact),
            Some(sm),
            Some(holds),
            Arithmetic::ExactRational,
        )
    } else {
        let rows: Vec<f64> = (0..m)
            .into_par_iter()
            .map(|i| (0..m).map(|j| cs.twelfths(i, j) as f64 / 12.0).sum())
            .collect();
        (rows.iter().sum(), None, None, None, Arithmetic::Float)
    };
    let second_moment = second_moment_exact
        .as_ref()
        .map(ratio_to_f64)
        .unwrap_or(second_moment);
    let identity_rel_error =
        (total - 2.0 * m as f64 * second_moment).abs() / total.abs().max(f64::MIN_POSITIVE);
    Ok(DoubleIntegral {
        arithmetic,
        cube_count: m,
        total,
        total_exact,
        barycenter,
        second_moment,
        second_moment_exact,
        identity_rel_error,
        identity_exact,
    })
}

pub fn ratio_to_f64(r: &Ratio<i128>) -> f64 {
    // split off the integer part so large numerators keep their precision
    let whole = r.numer() / r.denom();
    let rem = r.numer() % r.denom();
    whole as f64 + rem as f64 / *r.denom() as f64
}

/// Counts of good and bad ordered pairs of boundary edges.
#[derive(Clone, Debug)]
pub struct PairClassification {
    pub good: usize,
    pub bad: usize,
    /// `4n² |δ'Ω|`.
    pub bad_bound: usize,
    pub record: VerificationRecord,
}

/// Per-anchor cube counts.
fn anchor_counts(cs: &CubeSet, boundary_len: usize) -> Vec<usize> {
    let mut c = vec![0usize; boundary_len];
    for &a in &cs.anchor {
        c[a] += 1;
    }
    c
}

pub fn classify_pairs(d: &LatticeDomain) -> Result<PairClassification> {
    let profile = d.profile();
    Ok(classify_pairs_of(&CubeSet::new(d, &profile)?, &profile))
}

pub fn classify_pairs_of(cs: &CubeSet, profile: &BoundaryProfile) -> PairClassification {
    let counts = anchor_counts(cs, profile.delta.len());
    let bad: usize = counts
        .iter()
        .zip(&cs.bad)
        .filter(|(_, &b)| b)
        .map(|(&c, _)| c * c)
        .sum();
    let m = cs.len();
    let bad_bound = 4 * cs.n * cs.n * profile.delta_bad.len();
    let record = VerificationRecord::exact(
        "bad_pairs_le_4n2_bad_vertices",
        bad as f64,
        Relation::Le,
        bad_bound as f64,
    );
    PairClassification {
        good: m * m - bad,
        bad,
        bad_bound,
        record,
    }
}

/// The map `f` on good pairs and everything checked along with it.
#[derive(Clone, Debug)]
pub struct FMap {
    /// For each `δΩ` vertex that is not bad, the partner `z` used for good
    /// pairs whose two cubes share that endpoint: the lexicographically
    /// smallest other boundary vertex in its Chebyshev unit neighbourhood.
    pub partner: Vec<Option<usize>>,
    /// Largest preimage size of `f`.
    pub multiplicity: usize,
    /// `8n²`.
    pub multiplicity_bound: usize,
    /// `Σ_good |f₁ − f₂|²`.
    pub good_distance_sum: i128,
    /// `Σ_{z,ω∈δΩ} |z − ω|²`.
    pub boundary_double_sum: i128,
    /// Largest `∫∫ / (4n|f₁−f₂|²)` over good pairs.
    pub good_pair_max_ratio: f64,
    /// Largest `∫∫ / (4n|P₁−P₂|²)` over pairs with distinct endpoints.
    pub distinct_pair_max_ratio: f64,
    /// Largest `∫∫ / n` over bad pairs (0 when there are none).
    pub bad_pair_max_ratio: f64,
    pub good_pair_violations: usize,
    pub distinct_pair_violations: usize,
    pub bad_pair_violations: usize,
}

impl FMap {
    /// `f(τ_i, τ_j)` as indices into `δΩ`, or `None` for a bad pair.
    pub fn image(&self, cs: &CubeSet, i: usize, j: usize) -> Option<(usize, usize)> {
        let (a, b) = (cs.anchor[i], cs.anchor[j]);
        if a != b {
            Some((a, b))
        } else if cs.bad[a] {
            None
        } else {
            Some((a, self.partner[a].expect("non-bad vertices have a partner")))
        }
    }
}

pub fn f_map(d: &LatticeDomain) -> Result<FMap> {
    let profile = d.profile();
    f_map_of(d, &profile, &CubeSet::new(d, &profile)?)
}

pub fn f_map_of(d: &LatticeDomain, profile: &BoundaryProfile, cs: &CubeSet) -> Result<FMap> {
    let n = cs.n;
    let nb = profile.delta.len();
    let counts = anchor_counts(cs, nb);
    let mut partner = vec![None; nb];
    for (k, x) in profile.delta.iter().enumerate() {
        if cs.bad[k] || counts[k] == 0 {
            continue;
        }
        let z = q2_boundary_neighbors(x, d)?
            .into_iter()
            .find(|y| y != x)
            .ok_or_else(|| Error::Internal(format!("no second boundary vertex near {x}")))?;
        partner[k] = profile.delta_index(&z);
    }
    // Preimage of (x, y), x ≠ y: c_x c_y pairs with distinct endpoints, plus
    // c_x² same-endpoint pairs when y is the partner of x.
    let mut multiplicity = 0usize;
    for x in 0..nb {
        for y in 0..nb {
            if x == y || counts[x] == 0 {
                continue;
            }
            let mut pre = counts[x] * counts[y];
            if partner[x] == Some(y) {
                pre += counts[x] * counts[x];
            }
            multiplicity = multiplicity.max(pre);
        }
    }

    let delta: Vec<Vec<i64>> = profile
        .delta
        .iter()
        .map(|p| p.0.iter().map(|&c| c as i64).collect())
        .collect();
    let c3_twelfths = 12 * 4 * n as i128;
    let n_twelfths = 12 * n as i128;
    let fm = FMap {
        partner,
        multiplicity: 0,
        multiplicity_bound: 8 * n * n,
        good_distance_sum: 0,
        boundary_double_sum: 0,
        good_pair_max_ratio: 0.0,
        distinct_pair_max_ratio: 0.0,
        bad_pair_max_ratio: 0.0,
        good_pair_violations: 0,
        distinct_pair_violations: 0,
        bad_pair_violations: 0,
    };
    #[derive(Default)]
    struct Acc {
        dist_sum: i128,
        good_ratio: f64,
        distinct_ratio: f64,
        bad_ratio: f64,
        good_viol: usize,
        distinct_viol: usize,
        bad_viol: usize,
    }
    let m = cs.len();
    let rows: Vec<Acc> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut acc = Acc::default();
            for j in 0..m {
                let w = cs.twelfths(i, j);
                match fm.image(cs, i, j) {
                    None => {
                        acc.bad_ratio = acc.bad_ratio.max(w as f64 / n_twelfths as f64);
                        if w > n_twelfths {
                            acc.bad_viol += 1;
                        }
                    }
                    Some((a, b)) => {
                        let dist = dist2_i(&delta[a], &delta[b]);
                        acc.dist_sum += dist;
                        let bound = c3_twelfths * dist;
                        acc.good_ratio = acc.good_ratio.max(w as f64 / bound as f64);
                        if w > bound {
                            acc.good_viol += 1;
                        }
                        if cs.anchor[i] != cs.anchor[j] {
                            acc.distinct_ratio = acc.distinct_ratio.max(w as f64 / bound as f64);
                            if w > bound {
                                acc.distinct_viol += 1;
                            }
                        }
                    }
                }
            }
            acc
        })
        .collect();
    let mut out = fm;
    out.multiplicity = multiplicity;
    for r in rows {
        out.good_distance_sum += r.dist_sum;
        out.good_pair_max_ratio = out.good_pair_max_ratio.max(r.good_ratio);
        out.distinct_pair_max_ratio = out.distinct_pair_max_ratio.max(r.distinct_ratio);
        out.bad_pair_max_ratio = out.bad_pair_max_ratio.max(r.bad_ratio);
        out.good_pair_violations += r.good_viol;
        out.distinct_pair_violations += r.distinct_viol;
        out.bad_pair_violations += r.bad_viol;
    }
    out.boundary_double_sum = delta
        .iter()
        .map(|z| delta.iter().map(|w| dist2_i(z, w)).sum::<i128>())
        .sum();
    Ok(out)
}

impl FMap {
    pub fn records(&self) -> Vec<VerificationRecord> {
        let rhs = self.multiplicity as i128 * self.boundary_double_sum;
        let mut sum_rec = VerificationRecord::exact(
            "good_distance_sum_le_multiplicity_times_double_sum",
            self.good_distance_sum as f64,
            Relation::Le,
            rhs as f64,
        );
        sum_rec.passed = self.good_distance_sum <= rhs;
        vec![
            VerificationRecord::exact(
                "multiplicity_le_8n2",
                self.multiplicity as f64,
                Relation::Le,
                self.multiplicity_bound as f64,
            ),
            VerificationRecord::exact(
                "good_pair_integral_le_c3_f_distance",
                self.good_pair_max_ratio,
                Relation::Le,
                1.0,
            )
            .with_detail(format!("violations: {}", self.good_pair_violations)),
            VerificationRecord::exact(
                "distinct_anchor_pair_integral_le_c3_anchor_distance",
                self.distinct_pair_max_ratio,
                Relation::Le,
                1.0,
            )
            .with_detail(format!("violations: {}", self.distinct_pair_violations)),
            VerificationRecord::exact(
                "bad_pair_integral_le_n",
                self.bad_pair_max_ratio,
                Relation::Le,
                1.0,
            )
            .with_detail(format!("violations: {}", self.bad_pair_violations)),
            sum_rec,
        ]
    }
}

/// `∫_{∂Ω̂} |s − c|² ≥ n |Ω| R` with `ω_n R^n = |Ω|`.
pub fn isoperimetric_check(d: &LatticeDomain) -> Result<VerificationRecord> {
    let di = total_double_integral(d)?;
    Ok(isoperimetric_record(d.dim(), d.len(), &di))
}

fn isoperimetric_record(n: usize, volume: usize, di: &DoubleIntegral) -> VerificationRecord {
    let r = ball_radius(n, volume as f64);
    VerificationRecord::check(
        "boundary_second_moment_ge_ball",
        di.second_moment,
        Relation::Ge,
        n as f64 * volume as f64 * r,
        FLOAT_RTOL,
    )
}

/// Every quantity on the path from the pair integral to the lower bound on
/// `Σ_{z,ω∈δΩ} |z − ω|²`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainReport {
    /// Multiplicity used in the bounds: the computed one or `8n²`.
    pub multiplicity_used: usize,
    pub used_actual_multiplicity: bool,
    pub total_integral: f64,
    pub boundary_double_sum: f64,
    /// `4n·m·Σ|z−ω|² + 4n³|δ'Ω|`.
    pub upper_bound: f64,
    /// `2n |∂Ω| |Ω| R`.
    pub lower_bound: f64,
    /// `2n (|∂Ω||Ω|R − 2n²|δ'Ω|) / (4n·m)`.
    pub double_sum_lower_bound: f64,
    pub records: Vec<VerificationRecord>,
}

pub fn chain_est1(d: &LatticeDomain, use_actual_mf: bool) -> Result<ChainReport> {
    let g = GeometryReport::compute(d)?;
    Ok(if use_actual_mf {
        g.chain_actual
    } else {
        g.chain_bound
    })
}

fn chain_of(
    n: usize,
    volume: usize,
    profile: &BoundaryProfile,
    di: &DoubleIntegral,
    fm: &FMap,
    use_actual: bool,
) -> ChainReport {
    let nf = n as f64;
    let m = if use_actual {
        fm.multiplicity
    } else {
        fm.multiplicity_bound
    };
    let c3 = comparison_constant(n);
    let bad = profile.delta_bad.len() as f64;
    let edges = profile.edge_boundary.len() as f64;
    let r = ball_radius(n, volume as f64);
    let s = fm.boundary_double_sum as f64;
    let upper = c3 * m as f64 * s + 4.0 * nf.powi(3) * bad;
    let lower = 2.0 * nf * edges * volume as f64 * r;
    let est = 2.0 * nf * (edges * volume as f64 * r - 2.0 * nf * nf * bad) / (c3 * m as f64);
    let tag = if use_actual {
        "actual_multiplicity"
    } else {
        "multiplicity_bound"
    };
    let mut records = vec![
        VerificationRecord::check(
            format!("double_integral_upper_{tag}"),
            di.total,
            Relation::Le,
            upper,
            FLOAT_RTOL,
        ),
        VerificationRecord::check(
            "double_integral_lower",
            di.total,
            Relation::Ge,
            lower,
            FLOAT_RTOL,
        ),
    ];
    let mut est_rec = VerificationRecord::check(
        format!("double_sum_lower_{tag}"),
        s,
        Relation::Ge,
        est,
        FLOAT_RTOL,
    );
    if est <= 0.0 {
        est_rec = est_rec.mark_vacuous();
    }
    records.push(est_rec);
    ChainReport {
        multiplicity_used: m,
        used_actual_multiplicity: use_actual,
        total_integral: di.total,
        boundary_double_sum: s,
        upper_bound: upper,
        lower_bound: lower,
        double_sum_lower_bound: est,
        records,
    }
}

/// All geometric quantities of one domain.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeometryReport {
    pub n: usize,
    pub arithmetic: Arithmetic,
    pub cube_count: usize,
    pub total_integral: f64,
    /// Exact value as `"p/q"` in rational mode.
    pub total_integral_exact: Option<String>,
    pub barycenter: Vec<f64>,
    pub second_moment: f64,
    pub second_moment_exact: Option<String>,
    pub radius: f64,
    pub multiplicity: usize,
    pub good_pairs: usize,
    pub bad_pairs: usize,
    pub chain_actual: ChainReport,
    pub chain_bound: ChainReport,
    /// Moment identity, isoperimetric comparison, pair-level bounds and the
    /// bad-pair count.
    pub records: Vec<VerificationRecord>,
}

impl GeometryReport {
    pub fn compute(d: &LatticeDomain) -> Result<Self> {
        let profile = d.profile();
        Self::compute_with(d, &profile)
    }

    pub fn compute_with(d: &LatticeDomain, profile: &BoundaryProfile) -> Result<Self> {
        let n = d.dim();
        let cs = CubeSet::new(d, profile)?;
        let di = double_integral_of(&cs)?;
        let pc = classify_pairs_of(&cs, profile);
        let fm = f_map_of(d, profile, &cs)?;
        let mut records = Vec::new();
        let mut moment = VerificationRecord::check(
            "double_integral_eq_twice_area_times_second_moment",
            di.identity_rel_error,
            Relation::Le,
            FLOAT_RTOL,
            0.0,
        );
        if let Some(exact) = di.identity_exact {
            moment.passed &= exact;
            moment = moment.with_detail(format!("exact rational identity: {exact}"));
        }
        records.push(moment);
        let area: f64 = cs.cubes.iter().map(|c| c.measure()).sum();
        let mut area_rec = VerificationRecord::exact(
            "cube_area_eq_edge_boundary",
            area,
            Relation::Le,
            profile.edge_boundary.len() as f64,
        );
        area_rec.passed &= area == profile.edge_boundary.len() as f64;
        records.push(area_rec);
        records.push(isoperimetric_record(n, d.len(), &di));
        records.push(pc.record.clone());
        records.extend(fm.records());
        let chain_actual = chain_of(n, d.len(), profile, &di, &fm, true);
        let chain_bound = chain_of(n, d.len(), profile, &di, &fm, false);
        Ok(Self {
            n,
            arithmetic: di.arithmetic,
            cube_count: di.cube_count,
            total_integral: di.total,
            total_integral_exact: di.total_exact.map(|r| r.to_string()),
            barycenter: di.barycenter,
            second_moment: di.second_moment,
            second_moment_exact: di.second_moment_exact.map(|r| r.to_string()),
            radius: ball_radius(n, d.len() as f64),
            multiplicity: fm.multiplicity,
            good_pairs: pc.good,
            bad_pairs: pc.bad,
            chain_actual,
            chain_bound,
            records,
        })
    }

    pub fn all_records(&self) -> impl Iterator<Item = &VerificationRecord> {
        self.records
            .iter()
            .chain(&self.chain_actual.records)
            .chain(&self.chain_bound.records)
    }

    pub fn passed(&self) -> bool {
        self.all_records().all(|r| r.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{generate, ShapeSpec};

    fn single() -> LatticeDomain {
        generate(&ShapeSpec::Box { dims: vec![1, 1] }).unwrap()
    }

    #[test]
    fn unit_ball_volumes() {
        assert_eq!(unit_ball_volume(1), 2.0);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-15);
        assert!((unit_ball_volume(4) - PI * PI / 2.0).abs() < 1e-14);
        // ω_12 = π^6 / 6!
        assert!((unit_ball_volume(12) - PI.powi(6) / 720.0).abs() < 1e-13);
    }

    #[test]
    fn pair_integral_closed_forms() {
        let a = BoundaryCube::new(vec![1, 0], 0).unwrap();
        assert!((pair_integral(&a, &a).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        let b = BoundaryCube::new(vec![3, 0], 0).unwrap();
        assert!((pair_integral(&a, &b).unwrap() - (1.0 + 1.0 / 6.0)).abs() < 1e-15);
        let p = BoundaryCube::new(vec![1], 0).unwrap();
        let q = BoundaryCube::new(vec![-5], 0).unwrap();
        assert_eq!(pair_integral(&p, &q).unwrap(), 9.0);
        let c3 = BoundaryCube::new(vec![1, 0, 0], 0).unwrap();
        assert!((pair_integral(&c3, &c3).unwrap() - 2.0 / 6.0).abs() < 1e-15);
        assert!(matches!(
            pair_integral(&a, &c3),
            Err(Error::DimensionMismatch(2, 3))
        ));
        assert!(BoundaryCube::new(vec![0, 0], 2).is_err());
    }

    #[test]
    fn single_vertex_integrals() {
        let di = total_double_integral(&single()).unwrap();
        assert_eq!(di.arithmetic, Arithmetic::ExactRational);
        assert_eq!(di.cube_count, 4);
        assert_eq!(di.barycenter, vec![0.0, 0.0]);
        assert_eq!(di.second_moment_exact, Some(Ratio::new(4, 3)));
        assert_eq!(di.identity_exact, Some(true));
        // 4·(1/6) + 8·(1/2 + 1/6) + 4·(1 + 1/6) = 32/3
        assert_eq!(di.total_exact, Some(Ratio::new(32, 3)));
    }

    #[test]
    fn symmetric_domain_barycenter() {
        let d = generate(&ShapeSpec::ChebyshevBall { n: 3, radius: 2 }).unwrap();
        let di = total_double_integral(&d).unwrap();
        assert!(di.barycenter.iter().all(|c| c.abs() < 1e-15));
        let d = generate(&ShapeSpec::Box { dims: vec![4, 6] }).unwrap();
        let di = total_double_integral(&d).unwrap();
        assert_eq!(di.barycenter, vec![1.5, 2.5]);
    }

    #[test]
    fn pair_classes() {
        let pc = classify_pairs(&single()).unwrap();
        assert_eq!((pc.good, pc.bad), (16, 0));
        let d = generate(&ShapeSpec::punctured_square()).unwrap();
        let pc = classify_pairs(&d).unwrap();
        assert_eq!(pc.bad, 16);
        assert_eq!(pc.bad_bound, 16);
        assert!(pc.record.passed);
        let ring = generate(&ShapeSpec::CheckerRing { radius: 3 }).unwrap();
        let pc = classify_pairs(&ring).unwrap();
        assert!(pc.bad <= 16 * ring.profile().delta_bad.len());
        assert!(pc.record.passed);
    }

    #[test]
    fn f_map_on_single_vertex() {
        let d = single();
        let profile = d.profile();
        let cs = CubeSet::new(&d, &profile).unwrap();
        let fm = f_map_of(&d, &profile, &cs).unwrap();
        let idx = |c: &[i32]| {
            profile
                .delta_index(&crate::lattice::LatticePoint::new(c.to_vec()))
                .unwrap()
        };
        let cube_at = |c: &[i32]| cs.anchor.iter().position(|&a| a == idx(c)).unwrap();
        // opposite edges
        let (a, b) = fm.image(&cs, cube_at(&[1, 0]), cube_at(&[-1, 0])).unwrap();
        assert_eq!(profile.delta[a].dist2(&profile.delta[b]), 4);
        // same endpoint: partner is the smallest other boundary vertex nearby
        let k = cube_at(&[1, 0]);
        let (a, b) = fm.image(&cs, k, k).unwrap();
        assert_eq!(a, idx(&[1, 0]));
        assert_eq!(b, idx(&[0, -1]));
        assert!(fm.multiplicity <= 32);
        assert!(fm.records().iter().all(|r| r.passed));
    }

    #[test]
    fn isoperimetric_single_vertex() {
        let r = isoperimetric_check(&single()).unwrap();
        assert!((r.lhs - 4.0 / 3.0).abs() < 1e-15);
        assert!((r.rhs - 2.0 / PI.sqrt()).abs() < 1e-15);
        assert!(r.passed);
        let r = isoperimetric_check(&generate(&ShapeSpec::Box { dims: vec![10, 10] }).unwrap())
            .unwrap();
        assert!(r.passed && r.margin() > 0.0);
    }

    #[test]
    fn chain_on_fixtures() {
        let c = chain_est1(&single(), true).unwrap();
        let fm = f_map(&single()).unwrap();
        assert_eq!(
            c.upper_bound,
            8.0 * fm.multiplicity as f64 * c.boundary_double_sum
        );
        assert!(c.records.iter().all(|r| r.passed));
        let d = generate(&ShapeSpec::punctured_square()).unwrap();
        for actual in [true, false] {
            assert!(chain_est1(&d, actual)
                .unwrap()
                .records
                .iter()
                .all(|r| r.passed));
        }
        let g = GeometryReport::compute(&generate(&ShapeSpec::CheckerRing { radius: 4 }).unwrap())
            .unwrap();
        assert!(g.passed());
    }
}

//! Finite subsets of the integer lattice `Z^n` and their boundary
//! combinatorics.
//!
//! A [`LatticeDomain`] keeps its points both sorted (lexicographic order is
//! the canonical order used for every matrix built downstream) and hashed
//! for membership queries. [`BoundaryProfile`] collects the vertex boundary,
//! the bad vertices (boundary vertices whose neighbours all lie in the
//! domain), the edge boundary and the energy edges `E(Ω, Ω̄)`.
//!
//! Axis indices are 0-based throughout the API: axis `k` is the direction
//! of the basis vector `e_{k+1}`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::{Relation, VerificationRecord};

/// A vertex of `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i32>);

impl LatticePoint {
    pub fn new(coords: impl Into<Vec<i32>>) -> Self {
        Self(coords.into())
    }

    pub fn origin(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    /// `self ± e_axis`.
    pub fn shifted(&self, axis: usize, delta: i32) -> Self {
        let mut c = self.0.clone();
        c[axis] += delta;
        Self(c)
    }

    /// All `2n` lattice neighbours, ordered `-e_1, +e_1, -e_2, ...`.
    pub fn neighbors(&self) -> impl Iterator<Item = (usize, LatticePoint)> + '_ {
        (0..self.dim()).flat_map(move |k| [(k, self.shifted(k, -1)), (k, self.shifted(k, 1))])
    }

    /// Squared Euclidean distance, exact.
    pub fn dist2(&self, other: &LatticePoint) -> i64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| {
                let d = a as i64 - b as i64;
                d * d
            })
            .sum()
    }

    /// Chebyshev (max-coordinate) distance.
    pub fn chebyshev(&self, other: &LatticePoint) -> i64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| (a as i64 - b as i64).abs())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An edge of `Z^n`. Endpoints are stored with `lo < hi` so that equality
/// and ordering do not depend on orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeEdge {
    lo: LatticePoint,
    hi: LatticePoint,
    axis: usize,
}

impl LatticeEdge {
    pub fn new(x: LatticePoint, y: LatticePoint) -> Result<Self> {
        if x.dim() != y.dim() {
            return Err(Error::DimensionMismatch(x.dim(), y.dim()));
        }
        let diffs: Vec<usize> = (0..x.dim()).filter(|&k| x.0[k] != y.0[k]).collect();
        match diffs.as_slice() {
            [k] if (x.0[*k] as i64 - y.0[*k] as i64).abs() == 1 => {
                let axis = *k;
                let (lo, hi) = if x < y { (x, y) } else { (y, x) };
                Ok(Self { lo, hi, axis })
            }
            _ => Err(Error::Precondition(format!(
                "{x} and {y} are not lattice neighbours"
            ))),
        }
    }

    pub fn endpoints(&self) -> (&LatticePoint, &LatticePoint) {
        (&self.lo, &self.hi)
    }

    /// 0-based axis the edge is parallel to.
    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn other(&self, p: &LatticePoint) -> Option<&LatticePoint> {
        if *p == self.lo {
            Some(&self.hi)
        } else if *p == self.hi {
            Some(&self.lo)
        } else {
            None
        }
    }
}

/// Coordinates are limited so that every neighbour of every point, and every
/// squared distance computed from them, stays comfortably in range.
pub const COORD_LIMIT: i32 = 1 << 24;

/// A nonempty finite subset `Ω ⊂ Z^n`.
#[derive(Clone, Debug)]
pub struct LatticeDomain {
    n: usize,
    points: Vec<LatticePoint>,
    index: HashMap<LatticePoint, usize>,
}

impl PartialEq for LatticeDomain {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.points == other.points
    }
}

impl LatticeDomain {
    /// Builds a domain from arbitrary points; duplicates are dropped and the
    /// result is stored in lexicographic order.
    pub fn new(n: usize, points: impl IntoIterator<Item = LatticePoint>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let mut set = BTreeSet::new();
        for p in points {
            if p.dim() != n {
                return Err(Error::DimensionMismatch(n, p.dim()));
            }
            if p.0.iter().any(|c| c.abs() >= COORD_LIMIT) {
                return Err(Error::InvalidSpec(format!(
                    "point {p} exceeds the coordinate limit {COORD_LIMIT}"
                )));
            }
            set.insert(p);
        }
        if set.is_empty() {
            return Err(Error::EmptyOmega);
        }
        let points: Vec<_> = set.into_iter().collect();
        let index = points
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        Ok(Self { n, points, index })
    }

    pub fn from_coords(n: usize, coords: &[Vec<i32>]) -> Result<Self> {
        Self::new(n, coords.iter().map(|c| LatticePoint(c.clone())))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points in canonical (lexicographic) order.
    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.index.contains_key(p)
    }

    /// Canonical index of `p` in [`Self::points`].
    pub fn index_of(&self, p: &LatticePoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// `p ∈ δΩ`: outside `Ω` with at least one neighbour inside.
    pub fn is_boundary(&self, p: &LatticePoint) -> bool {
        !self.contains(p) && p.neighbors().any(|(_, q)| self.contains(&q))
    }

    /// `p ∈ Ω^e`: neither in `Ω` nor in `δΩ`.
    pub fn is_exterior(&self, p: &LatticePoint) -> bool {
        !self.contains(p) && !self.is_boundary(p)
    }

    /// Inclusive per-axis bounds `(min, max)` of the points.
    pub fn bounding_box(&self) -> Vec<(i32, i32)> {
        (0..self.n)
            .map(|k| {
                let it = self.points.iter().map(|p| p.0[k]);
                (it.clone().min().unwrap(), it.max().unwrap())
            })
            .collect()
    }

    pub fn profile(&self) -> BoundaryProfile {
        boundary_profile(self)
    }
}

/// Boundary sets of a lattice domain, each in canonical order.
#[derive(Clone, Debug)]
pub struct BoundaryProfile {
    /// `δΩ`.
    pub delta: Vec<LatticePoint>,
    /// `δ'Ω`, the boundary vertices all of whose neighbours lie in `Ω`.
    pub delta_bad: Vec<LatticePoint>,
    /// `∂Ω = E(Ω, Ω^c)`.
    pub edge_boundary: Vec<LatticeEdge>,
    /// `E(Ω, Ω̄)`: every edge with at least one endpoint in `Ω`.
    pub energy_edges: Vec<LatticeEdge>,
    /// `|E_k|`, the number of energy edges parallel to axis `k`.
    pub direction_counts: Vec<usize>,
    delta_index: HashMap<LatticePoint, usize>,
}

impl BoundaryProfile {
    pub fn delta_index(&self, p: &LatticePoint) -> Option<usize> {
        self.delta_index.get(p).copied()
    }

    pub fn in_delta(&self, p: &LatticePoint) -> bool {
        self.delta_index.contains_key(p)
    }

    pub fn is_bad(&self, p: &LatticePoint) -> bool {
        self.delta_bad.binary_search(p).is_ok()
    }
}

/// Enumerates all boundary structure of `d` by visiting each point's
/// neighbours once.
pub fn boundary_profile(d: &LatticeDomain) -> BoundaryProfile {
    let mut delta = BTreeSet::new();
    let mut edge_boundary = Vec::new();
    let mut energy_edges = Vec::new();
    let mut direction_counts = vec![0usize; d.n];
    for p in d.points() {
        for (k, q) in p.neighbors() {
            let inside = d.contains(&q);
            // Interior edges are seen twice; keep the copy from the smaller end.
            if inside && q < *p {
                continue;
            }
            let e = LatticeEdge::new(p.clone(), q.clone()).expect("neighbours form an edge");
            if !inside {
                delta.insert(q);
                edge_boundary.push(e.clone());
            }
            direction_counts[k] += 1;
            energy_edges.push(e);
        }
    }
    edge_boundary.sort();
    energy_edges.sort();
    let delta: Vec<_> = delta.into_iter().collect();
    let delta_bad = delta
        .iter()
        .filter(|x| x.neighbors().all(|(_, y)| d.contains(&y)))
        .cloned()
        .collect();
    let delta_index = delta
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    BoundaryProfile {
        delta,
        delta_bad,
        edge_boundary,
        energy_edges,
        direction_counts,
        delta_index,
    }
}

fn require_boundary(x: &LatticePoint, d: &LatticeDomain) -> Result<()> {
    if x.dim() != d.dim() {
        return Err(Error::DimensionMismatch(d.dim(), x.dim()));
    }
    if !d.is_boundary(x) {
        return Err(Error::Precondition(format!("{x} is not a boundary vertex")));
    }
    Ok(())
}

/// True iff the boundary vertex `x` has every lattice neighbour in `Ω`.
pub fn is_bad_vertex(x: &LatticePoint, d: &LatticeDomain) -> Result<bool> {
    require_boundary(x, d)?;
    Ok(x.neighbors().all(|(_, y)| d.contains(&y)))
}

/// `Q_2(x) ∩ δΩ`: the boundary vertices within Chebyshev distance 1 of `x`,
/// including `x` itself, in canonical order.
pub fn q2_boundary_neighbors(x: &LatticePoint, d: &LatticeDomain) -> Result<Vec<LatticePoint>> {
    require_boundary(x, d)?;
    let n = d.dim();
    let mut out = Vec::new();
    let mut offset = vec![-1i32; n];
    loop {
        let y = LatticePoint(x.0.iter().zip(&offset).map(|(a, b)| a + b).collect());
        if d.is_boundary(&y) {
            out.push(y);
        }
        // odometer over {-1,0,1}^n, last axis fastest, so output is sorted
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if offset[k] < 1 {
                offset[k] += 1;
                break;
            }
            offset[k] = -1;
        }
    }
}

/// The endpoint of a boundary edge that lies in `δΩ`.
pub fn p_map(e: &LatticeEdge, d: &LatticeDomain) -> Result<LatticePoint> {
    let (a, b) = e.endpoints();
    match (d.contains(a), d.contains(b)) {
        (true, false) => Ok(b.clone()),
        (false, true) => Ok(a.clone()),
        _ => Err(Error::Precondition(format!(
            "edge {a}-{b} is not in the edge boundary"
        ))),
    }
}

/// Checks `|δ'Ω| ≤ |Ω|` through the injection `x ↦ x + e_1` of bad vertices
/// into `Ω`.
pub fn injection_check_prop36(d: &LatticeDomain) -> VerificationRecord {
    let profile = d.profile();
    let images: HashSet<LatticePoint> = profile.delta_bad.iter().map(|x| x.shifted(0, 1)).collect();
    let lands_in_omega = images.iter().all(|y| d.contains(y));
    let injective = images.len() == profile.delta_bad.len();
    let mut rec = VerificationRecord::exact(
        "bad_vertices_le_volume",
        profile.delta_bad.len() as f64,
        Relation::Le,
        d.len() as f64,
    )
    .with_detail(format!(
        "shift maps into omega: {lands_in_omega}, injective: {injective}, ratio {:.6}",
        profile.delta_bad.len() as f64 / d.len() as f64
    ));
    rec.passed &= lands_in_omega && injective;
    rec
}

/// Every boundary vertex that is not bad has at least one other boundary
/// vertex within Chebyshev distance 1. The record carries the smallest
/// `|Q_2(x) ∩ δΩ|` seen.
pub fn q2_neighborhood_check(
    d: &LatticeDomain,
    profile: &BoundaryProfile,
) -> Result<VerificationRecord> {
    let mut smallest = usize::MAX;
    for x in &profile.delta {
        if profile.is_bad(x) {
            continue;
        }
        smallest = smallest.min(q2_boundary_neighbors(x, d)?.len());
    }
    let mut rec = VerificationRecord::exact(
        "boundary_q2_neighbourhood_ge_2",
        smallest as f64,
        Relation::Ge,
        2.0,
    );
    if smallest == usize::MAX {
        rec = VerificationRecord::exact("boundary_q2_neighbourhood_ge_2", 2.0, Relation::Ge, 2.0)
            .mark_vacuous()
            .with_detail("every boundary vertex is bad");
    }
    Ok(rec)
}

/// Checks `|δ'Ω| ≤ |δΩ| ≤ |∂Ω| ≤ 2n|Ω|` and `2|E(Ω, Ω̄)| = 2n|Ω| + |∂Ω|`.
pub fn count_identities(d: &LatticeDomain, profile: &BoundaryProfile) -> Vec<VerificationRecord> {
    let n = d.dim();
    let (bad, delta, edges) = (
        profile.delta_bad.len(),
        profile.delta.len(),
        profile.edge_boundary.len(),
    );
    let energy = profile.energy_edges.len();
    let mut chain = VerificationRecord::exact(
        "boundary_size_chain",
        bad as f64,
        Relation::Le,
        (2 * n * d.len()) as f64,
    )
    .with_detail(format!(
        "{bad} <= {delta} <= {edges} <= {}",
        2 * n * d.len()
    ));
    chain.passed = bad <= delta && delta <= edges && edges <= 2 * n * d.len();
    let mut identity = VerificationRecord::exact(
        "energy_edge_count_identity",
        (2 * energy) as f64,
        Relation::Le,
        (2 * n * d.len() + edges) as f64,
    );
    identity.passed = 2 * energy == 2 * n * d.len() + edges
        && profile.direction_counts.iter().sum::<usize>() == energy;
    vec![chain, identity]
}

/// Families of lattice domains.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeSpec {
    /// `{x : 0 ≤ x_k < dims[k]}`.
    Box {
        dims: Vec<usize>,
    },
    /// `{x : max_k |x_k| ≤ radius}`.
    ChebyshevBall {
        n: usize,
        radius: usize,
    },
    /// A Chebyshev ball with the origin removed; in `n = 2` with radius 2
    /// the origin is the only bad boundary vertex.
    PuncturedBox {
        n: usize,
        radius: usize,
    },
    /// The planar set made of the Chebyshev sphere of the given radius plus
    /// the odd-parity points strictly inside it. Almost every even interior
    /// point is a bad boundary vertex.
    CheckerRing {
        radius: usize,
    },
    /// Grown from the origin by repeatedly adding a uniformly chosen boundary
    /// vertex of the current set (candidates in canonical order, index drawn
    /// from ChaCha8 seeded with `seed`).
    RandomConnected {
        n: usize,
        size: usize,
        seed: u64,
    },
    Explicit {
        n: usize,
        points: Vec<Vec<i32>>,
    },
}

impl ShapeSpec {
    /// The 24-point planar punctured square of radius 2.
    pub fn punctured_square() -> Self {
        ShapeSpec::PuncturedBox { n: 2, radius: 2 }
    }
}

fn positive(what: &str, v: usize) -> Result<i32> {
    if v == 0 {
        return Err(Error::InvalidSpec(format!("{what} must be positive")));
    }
    if v as u64 >= (COORD_LIMIT as u64) / 2 {
        return Err(Error::InvalidSpec(format!("{what} = {v} is too large")));
    }
    Ok(v as i32)
}

fn dimension(n: usize) -> Result<usize> {
    if n == 0 {
        Err(Error::InvalidDimension(n))
    } else {
        Ok(n)
    }
}

/// All points of the integer box `∏ [lo_k, hi_k]`, in lexicographic order.
fn box_points(bounds: &[(i32, i32)]) -> Vec<LatticePoint> {
    let mut out = vec![LatticePoint(Vec::with_capacity(bounds.len()))];
    for &(lo, hi) in bounds {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |c| {
                    let mut q = p.0.clone();
                    q.push(c);
                    LatticePoint(q)
                })
            })
            .collect();
    }
    out
}

pub fn generate(spec: &ShapeSpec) -> Result<LatticeDomain> {
    match spec {
        ShapeSpec::Box { dims } => {
            let n = dimension(dims.len())?;
            let bounds = dims
                .iter()
                .map(|&s| positive("box side", s).map(|s| (0, s - 1)))
                .collect::<Result<Vec<_>>>()?;
            LatticeDomain::new(n, box_points(&bounds))
        }
        ShapeSpec::ChebyshevBall { n, radius } => {
            let n = dimension(*n)?;
            let r = positive("radius", *radius)?;
            LatticeDomain::new(n, box_points(&vec![(-r, r); n]))
        }
        ShapeSpec::PuncturedBox { n, radius } => {
            let n = dimension(*n)?;
            let r = positive("radius", *radius)?;
            let origin = LatticePoint::origin(n);
            LatticeDomain::new(
                n,
                box_points(&vec![(-r, r); n])
                    .into_iter()
                    .filter(|p| *p != origin),
            )
        }
        ShapeSpec::CheckerRing { radius } => {
            let r = positive("radius", *radius)?;
            let pts = box_points(&[(-r, r), (-r, r)]).into_iter().filter(|p| {
                let (x, y) = (p.0[0], p.0[1]);
                let ring =
                    (x.abs() == r && x.abs() >= y.abs()) || (y.abs() == r && y.abs() >= x.abs());
                let inner = x.abs() < r && y.abs() < r && (x + y).rem_euclid(2) == 1;
                ring || inner
            });
            LatticeDomain::new(2, pts)
        }
        ShapeSpec::RandomConnected { n, size, seed } => random_connected(*n, *size, *seed),
        ShapeSpec::Explicit { n, points } => LatticeDomain::from_coords(dimension(*n)?, points),
    }
}

fn random_connected(n: usize, size: usize, seed: u64) -> Result<LatticeDomain> {
    let n = dimension(n)?;
    positive("size", size)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let origin = LatticePoint::origin(n);
    let mut omega: HashSet<LatticePoint> = HashSet::from([origin.clone()]);
    let mut candidates: BTreeSet<LatticePoint> = origin.neighbors().map(|(_, q)| q).collect();
    while omega.len() < size {
        let pick = rng.random_range(0..candidates.len());
        let p = candidates
            .iter()
            .nth(pick)
            .cloned()
            .expect("index in range");
        candidates.remove(&p);
        for (_, q) in p.neighbors() {
            if !omega.contains(&q) {
                candidates.insert(q);
            }
        }
        omega.insert(p);
    }
    LatticeDomain::new(n, omega)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[i32]) -> LatticePoint {
        LatticePoint::new(c.to_vec())
    }

    fn single() -> LatticeDomain {
        generate(&ShapeSpec::Box { dims: vec![1, 1] }).unwrap()
    }

    fn punctured() -> LatticeDomain {
        generate(&ShapeSpec::punctured_square()).unwrap()
    }

    #[test]
    fn single_vertex_profile() {
        let d = single();
        assert_eq!(d.points(), &[pt(&[0, 0])]);
        let p = d.profile();
        assert_eq!(
            p.delta,
            vec![pt(&[-1, 0]), pt(&[0, -1]), pt(&[0, 1]), pt(&[1, 0])]
        );
        assert_eq!(p.edge_boundary.len(), 4);
        assert!(p.delta_bad.is_empty());
        assert_eq!(p.energy_edges.len(), 4);
        assert_eq!(p.direction_counts, vec![2, 2]);
    }

    #[test]
    fn domino_profile() {
        let d = LatticeDomain::from_coords(2, &[vec![0, 0], vec![1, 0]]).unwrap();
        let p = d.profile();
        assert_eq!(p.delta.len(), 6);
        assert_eq!(p.edge_boundary.len(), 6);
        assert_eq!(p.energy_edges.len(), 7);
        assert_eq!(2 * 7, 4 * 2 + 6);
    }

    #[test]
    fn punctured_square_fixture() {
        let d = punctured();
        assert_eq!(d.len(), 24);
        let p = d.profile();
        assert_eq!(p.delta_bad, vec![pt(&[0, 0])]);
        assert_eq!(p.delta.len(), 21);
        assert!(is_bad_vertex(&pt(&[0, 0]), &d).unwrap());
        assert!(!is_bad_vertex(&pt(&[3, 0]), &d).unwrap());
    }

    #[test]
    fn bad_vertex_requires_boundary() {
        let d = single();
        assert!(matches!(
            is_bad_vertex(&pt(&[0, 0]), &d),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            is_bad_vertex(&pt(&[5, 5]), &d),
            Err(Error::Precondition(_))
        ));
        for x in &d.profile().delta {
            assert!(!is_bad_vertex(x, &d).unwrap());
        }
    }

    #[test]
    fn q2_neighbourhoods() {
        let d = punctured();
        let q = q2_boundary_neighbors(&pt(&[3, 0]), &d).unwrap();
        for y in [pt(&[3, 0]), pt(&[3, 1]), pt(&[3, -1])] {
            assert!(q.contains(&y));
        }
        assert_eq!(
            q2_boundary_neighbors(&pt(&[0, 0]), &d).unwrap(),
            vec![pt(&[0, 0])]
        );

        let s = single();
        let q = q2_boundary_neighbors(&pt(&[1, 0]), &s).unwrap();
        assert_eq!(q, vec![pt(&[0, -1]), pt(&[0, 1]), pt(&[1, 0])]);
        assert!(q2_boundary_neighbors(&pt(&[0, 0]), &s).is_err());
    }

    #[test]
    fn p_map_picks_outside_endpoint() {
        let s = single();
        let e = LatticeEdge::new(pt(&[0, 0]), pt(&[1, 0])).unwrap();
        assert_eq!(p_map(&e, &s).unwrap(), pt(&[1, 0]));

        let d = punctured();
        let e = LatticeEdge::new(pt(&[2, 0]), pt(&[3, 0])).unwrap();
        assert_eq!(p_map(&e, &d).unwrap(), pt(&[3, 0]));
        let e = LatticeEdge::new(pt(&[1, 0]), pt(&[0, 0])).unwrap();
        assert_eq!(p_map(&e, &d).unwrap(), pt(&[0, 0]));

        let interior = LatticeEdge::new(pt(&[1, 0]), pt(&[2, 0])).unwrap();
        assert!(p_map(&interior, &d).is_err());
    }

    #[test]
    fn edge_rejects_non_neighbours() {
        assert!(LatticeEdge::new(pt(&[0, 0]), pt(&[1, 1])).is_err());
        assert!(LatticeEdge::new(pt(&[0, 0]), pt(&[2, 0])).is_err());
        assert!(LatticeEdge::new(pt(&[0, 0]), pt(&[0, 0])).is_err());
        let e = LatticeEdge::new(pt(&[0, 1]), pt(&[0, 0])).unwrap();
        assert_eq!(e.axis(), 1);
        assert_eq!(e.endpoints().0, &pt(&[0, 0]));
    }

    #[test]
    fn generators() {
        assert_eq!(
            generate(&ShapeSpec::Box { dims: vec![1, 1] })
                .unwrap()
                .points(),
            &[pt(&[0, 0])]
        );
        assert_eq!(
            generate(&ShapeSpec::Box {
                dims: vec![3, 4, 2]
            })
            .unwrap()
            .len(),
            24
        );
        assert_eq!(
            generate(&ShapeSpec::ChebyshevBall { n: 3, radius: 2 })
                .unwrap()
                .len(),
            125
        );
        let ring = generate(&ShapeSpec::CheckerRing { radius: 2 }).unwrap();
        // 16 ring points + 4 odd points of the 3x3 interior
        assert_eq!(ring.len(), 20);
        assert!(ring.contains(&pt(&[1, 0])));
        assert!(!ring.contains(&pt(&[1, 1])));
        assert_eq!(ring.profile().delta_bad.len(), 5);
    }

    #[test]
    fn generator_errors() {
        assert!(matches!(
            generate(&ShapeSpec::Box { dims: vec![] }),
            Err(Error::InvalidDimension(0))
        ));
        assert!(matches!(
            generate(&ShapeSpec::Box { dims: vec![2, 0] }),
            Err(Error::InvalidSpec(_))
        ));
        assert!(generate(&ShapeSpec::CheckerRing { radius: 0 }).is_err());
        assert!(generate(&ShapeSpec::RandomConnected {
            n: 2,
            size: 0,
            seed: 1
        })
        .is_err());
        assert!(generate(&ShapeSpec::Explicit {
            n: 2,
            points: vec![]
        })
        .is_err());
        assert!(generate(&ShapeSpec::Explicit {
            n: 2,
            points: vec![vec![1, 2, 3]]
        })
        .is_err());
        assert!(generate(&ShapeSpec::Explicit {
            n: 1,
            points: vec![vec![COORD_LIMIT]]
        })
        .is_err());
    }

    #[test]
    fn random_connected_is_reproducible_and_connected() {
        let spec = ShapeSpec::RandomConnected {
            n: 3,
            size: 40,
            seed: 7,
        };
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 40);
        let other = generate(&ShapeSpec::RandomConnected {
            n: 3,
            size: 40,
            seed: 8,
        })
        .unwrap();
        assert_ne!(a, other);
        // induced subgraph is connected
        let mut seen = HashSet::from([a.points()[0].clone()]);
        let mut stack = vec![a.points()[0].clone()];
        while let Some(p) = stack.pop() {
            for (_, q) in p.neighbors() {
                if a.contains(&q) && seen.insert(q.clone()) {
                    stack.push(q);
                }
            }
        }
        assert_eq!(seen.len(), 40);
    }

    #[test]
    fn prop36_records() {
        let r = injection_check_prop36(&punctured());
        assert!(r.passed);
        assert_eq!((r.lhs, r.rhs), (1.0, 24.0));
        let r = injection_check_prop36(&single());
        assert!(r.passed);
        assert_eq!((r.lhs, r.rhs), (0.0, 1.0));
        let r = injection_check_prop36(&generate(&ShapeSpec::CheckerRing { radius: 5 }).unwrap());
        assert!(r.passed);
        assert_eq!(r.lhs, 41.0);
        assert_eq!(r.rhs, 80.0);
    }

    #[test]
    fn classifiers_partition_a_box() {
        let d = generate(&ShapeSpec::RandomConnected {
            n: 2,
            size: 15,
            seed: 3,
        })
        .unwrap();
        let bb = d.bounding_box();
        let grown: Vec<_> = bb.iter().map(|&(lo, hi)| (lo - 2, hi + 2)).collect();
        for p in box_points(&grown) {
            let classes = [d.contains(&p), d.is_boundary(&p), d.is_exterior(&p)];
            assert_eq!(classes.iter().filter(|&&c| c).count(), 1, "{p}");
        }
    }
}

//! Finite simple graphs, the two-tree gadget chain with bounded Steklov gap,
//! connected components, effective resistance and subgraph problems
//! `(host, Ω)`.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::linalg::{norm2, ProfileCholesky, SparseSym};

/// A simple undirected graph on vertices `0..vertex_count`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    labels: Vec<Option<String>>,
}

impl FiniteGraph {
    /// Rejects self-loops, duplicate edges and out-of-range endpoints.
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::InvalidSpec(format!(
                    "edge ({a},{b}) out of range for {vertex_count} vertices"
                )));
            }
            if a == b {
                return Err(Error::InvalidSpec(format!("self-loop at {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidSpec(format!("duplicate edge ({a},{b})")));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }
        Ok(Self {
            vertex_count,
            edges,
            adjacency,
            labels: vec![None; vertex_count],
        })
    }

    pub fn path(len: usize) -> Self {
        Self::new(len, (1..len).map(|i| (i - 1, i))).expect("path is simple")
    }

    pub fn cycle(len: usize) -> Result<Self> {
        if len < 3 {
            return Err(Error::InvalidSpec(
                "a cycle needs at least 3 vertices".into(),
            ));
        }
        Self::new(len, (0..len).map(|i| (i, (i + 1) % len)))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Edges as `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels[v].as_deref()
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn set_label(&mut self, v: usize, label: impl Into<String>) {
        self.labels[v] = Some(label.into());
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.as_deref() == Some(label))
    }

    /// Display name of a vertex: its label if any, else its index.
    pub fn display_name(&self, v: usize) -> String {
        self.labels[v].clone().unwrap_or_else(|| v.to_string())
    }
}

/// Partition into maximal connected vertex sets; each set is sorted and the
/// sets are ordered by their smallest vertex.
pub fn connected_components(g: &FiniteGraph) -> Vec<Vec<usize>> {
    components_of(g.vertex_count(), |v| g.neighbors(v).iter().copied())
}

pub(crate) fn components_of<I>(n: usize, neighbors: impl Fn(usize) -> I) -> Vec<Vec<usize>>
where
    I: Iterator<Item = usize>,
{
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut members = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for w in neighbors(v) {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                    queue.push_back(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Relative residual tolerance for the grounded Laplacian solve.
pub const RESISTANCE_RESIDUAL_TOL: f64 = 1e-10;

/// Effective resistance between `a` and `b` with unit resistors on every
/// edge: inject unit current at `a`, ground `b`, read the potential at `a`.
pub fn effective_resistance(g: &FiniteGraph, a: usize, b: usize) -> Result<f64> {
    let n = g.vertex_count();
    if a >= n || b >= n {
        return Err(Error::Precondition(format!(
            "vertex out of range ({a}, {b})"
        )));
    }
    if a == b {
        return Err(Error::Precondition("endpoints must differ".into()));
    }
    let comp = connected_components(g)
        .into_iter()
        .find(|c| c.binary_search(&a).is_ok())
        .expect("every vertex has a component");
    if comp.binary_search(&b).is_err() {
        return Err(Error::DisconnectedPair { a, b });
    }
    // local indices over the component minus the ground vertex
    let mut local = vec![usize::MAX; n];
    let mut k = 0;
    for &v in &comp {
        if v != b {
            local[v] = k;
            k += 1;
        }
    }
    let mut lap = SparseSym::new(k);
    for &v in &comp {
        if v == b {
            continue;
        }
        lap.add_sym(local[v], local[v], g.degree(v) as f64);
        for &w in g.neighbors(v) {
            if w != b && v < w {
                lap.add_sym(local[v], local[w], -1.0);
            }
        }
    }
    let chol = ProfileCholesky::factor(&lap)?;
    let mut rhs = vec![0.0; k];
    rhs[local[a]] = 1.0;
    let x = chol.solve(&rhs);
    let ax = lap.matvec(&x);
    let res: Vec<f64> = ax.iter().zip(&rhs).map(|(p, q)| p - q).collect();
    if norm2(&res) > RESISTANCE_RESIDUAL_TOL * norm2(&rhs) {
        return Err(Error::Solver(format!(
            "resistance residual {:e} too large",
            norm2(&res)
        )));
    }
    Ok(x[local[a]])
}

/// One `K_d` block of a gadget chain: two complete binary trees of depth
/// `d` glued along their leaves, each root carrying a pendant vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct GadgetBlock {
    pub depth: usize,
    /// Every vertex of the block including both pendants, sorted.
    pub vertices: Vec<usize>,
    pub left_pendant: usize,
    pub right_pendant: usize,
    pub left_root: usize,
    pub right_root: usize,
}

/// A finite prefix of the chain `K_{d_1} ∪ K_{d_2} ∪ …` in which the right
/// pendant of each block is identified with the left pendant of the next.
///
/// Labels: block `i` (1-based) has `K{i}:P_left`, `K{i}:P_right`,
/// `K{i}:root` (root of the first tree) and `K{i}:root'` (root of the
/// glued copy). A junction carries the label `K{i}:P_right`; the alias
/// `K{i+1}:P_left` resolves through [`GadgetChain::vertex`].
#[derive(Clone, Debug)]
pub struct GadgetChain {
    pub graph: FiniteGraph,
    pub blocks: Vec<GadgetBlock>,
}

impl GadgetChain {
    pub fn vertex(&self, label: &str) -> Option<usize> {
        let (block, role) = label.strip_prefix('K')?.split_once(':')?;
        let i: usize = block.parse().ok()?;
        let b = self.blocks.get(i.checked_sub(1)?)?;
        match role {
            "P_left" => Some(b.left_pendant),
            "P_right" => Some(b.right_pendant),
            "root" => Some(b.left_root),
            "root'" => Some(b.right_root),
            _ => None,
        }
    }

    /// The block `K_i` (1-based) as a vertex subset.
    pub fn block_omega(&self, i: usize) -> Result<Vec<usize>> {
        i.checked_sub(1)
            .and_then(|k| self.blocks.get(k))
            .map(|b| b.vertices.clone())
            .ok_or_else(|| Error::InvalidSpec(format!("chain has no block {i}")))
    }
}

/// Builds the gadget chain with the given tree depths.
pub fn build_gadget_chain(depths: &[usize]) -> Result<GadgetChain> {
    if depths.is_empty() {
        return Err(Error::InvalidSpec(
            "gadget chain needs at least one depth".into(),
        ));
    }
    if let Some(&d) = depths.iter().find(|&&d| d == 0 || d > 24) {
        return Err(Error::InvalidSpec(format!(
            "gadget depth {d} outside 1..=24"
        )));
    }
    let mut next = 0usize;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let mut edges = Vec::new();
    let mut blocks = Vec::new();
    let mut carry: Option<usize> = None;
    for &d in depths {
        let left_pendant = carry.unwrap_or_else(&mut fresh);
        // first tree, level by level
        let mut levels: Vec<Vec<usize>> = vec![vec![fresh()]];
        for l in 1..=d {
            let row: Vec<usize> = (0..(1usize << l)).map(|_| fresh()).collect();
            for (j, &v) in row.iter().enumerate() {
                edges.push((levels[l - 1][j / 2], v));
            }
            levels.push(row);
        }
        // second tree shares the leaf row
        let mut mirror: Vec<Vec<usize>> = vec![Vec::new(); d + 1];
        mirror[d] = levels[d].clone();
        for l in (0..d).rev() {
            let row: Vec<usize> = (0..(1usize << l)).map(|_| fresh()).collect();
            for (j, &v) in mirror[l + 1].iter().enumerate() {
                edges.push((row[j / 2], v));
            }
            mirror[l] = row;
        }
        let right_pendant = fresh();
        let left_root = levels[0][0];
        let right_root = mirror[0][0];
        edges.push((left_pendant, left_root));
        edges.push((right_root, right_pendant));
        let mut vertices: Vec<usize> = levels
            .iter()
            .chain(mirror[..d].iter())
            .flatten()
            .copied()
            .chain([left_pendant, right_pendant])
            .collect();
        vertices.sort_unstable();
        blocks.push(GadgetBlock {
            depth: d,
            vertices,
            left_pendant,
            right_pendant,
            left_root,
            right_root,
        });
        carry = Some(right_pendant);
    }
    let mut graph = FiniteGraph::new(next, edges)?;
    for (i, b) in blocks.iter().enumerate() {
        let k = i + 1;
        if i == 0 {
            graph.set_label(b.left_pendant, format!("K{k}:P_left"));
        }
        graph.set_label(b.right_pendant, format!("K{k}:P_right"));
        graph.set_label(b.left_root, format!("K{k}:root"));
        graph.set_label(b.right_root, format!("K{k}:root'"));
    }
    Ok(GadgetChain { graph, blocks })
}

/// The chain `K_1, …, K_{i+1}`, a finite prefix that contains the closure
/// of `K_i`. Block `i` then has tree depth `i`.
pub fn gadget_prefix(i: usize) -> Result<GadgetChain> {
    if i == 0 {
        return Err(Error::InvalidSpec("gadget index must be at least 1".into()));
    }
    build_gadget_chain(&(1..=i + 1).collect::<Vec<_>>())
}

/// A vertex subset `Ω` of a host graph with its derived boundary data.
#[derive(Clone, Debug)]
pub struct SubgraphProblem {
    /// `Ω`, sorted.
    pub omega: Vec<usize>,
    /// `δΩ`, sorted.
    pub delta: Vec<usize>,
    /// `E(Ω, Ω̄)` as host-vertex pairs `(a, b)` with `a < b`, sorted.
    pub energy_edges: Vec<(usize, usize)>,
    /// Set when some component of `(Ω̄, E(Ω, Ω̄))` misses `δΩ`.
    pub degenerate: bool,
    /// Components of `(Ω̄, E(Ω, Ω̄))` as host vertices.
    pub closure_components: Vec<Vec<usize>>,
    labels: Vec<String>,
}

impl SubgraphProblem {
    pub fn closure(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.omega.iter().chain(&self.delta).copied().collect();
        v.sort_unstable();
        v
    }

    /// Display names of the boundary vertices, aligned with `delta`.
    pub fn delta_labels(&self) -> &[String] {
        &self.labels
    }

    /// The closure graph `(Ω̄, E(Ω, Ω̄))` re-indexed over `closure()`.
    pub fn closure_graph(&self) -> FiniteGraph {
        let closure = self.closure();
        let local = |v: usize| closure.binary_search(&v).expect("closure vertex");
        FiniteGraph::new(
            closure.len(),
            self.energy_edges.iter().map(|&(a, b)| (local(a), local(b))),
        )
        .expect("energy edges are simple")
    }
}

pub fn subgraph_problem(host: &FiniteGraph, omega: &[usize]) -> Result<SubgraphProblem> {
    if omega.is_empty() {
        return Err(Error::EmptyOmega);
    }
    let n = host.vertex_count();
    let mut inside = vec![false; n];
    for &v in omega {
        if v >= n {
            return Err(Error::Precondition(format!(
                "vertex {v} is not in the host graph"
            )));
        }
        inside[v] = true;
    }
    let omega: Vec<usize> = (0..n).filter(|&v| inside[v]).collect();
    let mut delta = BTreeSet::new();
    let mut energy_edges = Vec::new();
    for &(a, b) in host.edges() {
        match (inside[a], inside[b]) {
            (false, false) => {}
            (ia, ib) => {
                energy_edges.push((a, b));
                if !ia {
                    delta.insert(a);
                }
                if !ib {
                    delta.insert(b);
                }
            }
        }
    }
    let delta: Vec<usize> = delta.into_iter().collect();
    let mut closure: Vec<usize> = omega.iter().chain(&delta).copied().collect();
    closure.sort_unstable();
    let local = |v: usize| closure.binary_search(&v).expect("closure vertex");
    let mut adj = vec![Vec::new(); closure.len()];
    for &(a, b) in &energy_edges {
        adj[local(a)].push(local(b));
        adj[local(b)].push(local(a));
    }
    let closure_components: Vec<Vec<usize>> =
        components_of(closure.len(), |v| adj[v].iter().copied())
            .into_iter()
            .map(|c| c.into_iter().map(|i| closure[i]).collect())
            .collect();
    let degenerate = closure_components
        .iter()
        .any(|c| c.iter().all(|v| delta.binary_search(v).is_err()));
    let labels = delta.iter().map(|&v| host.display_name(v)).collect();
    Ok(SubgraphProblem {
        omega,
        delta,
        energy_edges,
        degenerate,
        closure_components,
        labels,
    })
}

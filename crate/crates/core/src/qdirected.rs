//! Directed Q-analysis: (q,d̂i,d̂j)-nearness, connectivity digraphs,
//! condensations and directed pseudomanifold certificates.
//!
//! An ordered pair of simplices `(σ,τ)` with dimensions >= q is q-near
//! along the face-map pair `(d̂i,d̂j)` when σ is an ordered face of τ, or
//! some q-simplex of the complex is an ordered face of both `d̂i(σ)` and
//! `d̂j(τ)`. Transitive closure of this relation is a preorder on K_q; the
//! connectivity digraph keeps it in Hasse form (no loops, no materialised
//! transitive edges). Condensing by strongly connected components yields a
//! DAG, the Kolmogorov quotient of the preorder.

use std::collections::HashMap;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::flagcomplex::{self, DirectedFlagComplex, SimplexId};

/// A connectivity triple: the level q and the two direction indexes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ConnectionSpec {
    pub q: usize,
    pub i: usize,
    pub j: usize,
}

impl ConnectionSpec {
    pub fn new(q: usize, i: usize, j: usize) -> Self {
        ConnectionSpec { q, i, j }
    }

    /// All triples of the first structure map for a complex of dimension
    /// `dim`: q in 0..dim with i,j in 0..=dim, plus the single trivial
    /// q = dim case.
    pub fn all_for_dim(dim: usize) -> impl Iterator<Item = ConnectionSpec> {
        let full = (0..dim).flat_map(move |q| {
            (0..=dim).flat_map(move |i| (0..=dim).map(move |j| ConnectionSpec::new(q, i, j)))
        });
        full.chain(std::iter::once(ConnectionSpec::new(dim, 0, 0)))
    }

    /// Number of triples yielded by [`all_for_dim`](Self::all_for_dim):
    /// `dim^3 + 2 dim^2 + dim + 1`.
    pub fn count_for_dim(dim: usize) -> usize {
        dim * (dim + 1) * (dim + 1) + 1
    }
}

impl std::fmt::Display for ConnectionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.q, self.i, self.j)
    }
}

#[derive(Debug, Error)]
pub enum DirectedError {
    #[error("no simplices of dimension >= {q}; complex has dimension {dim}")]
    EmptyLevel { q: usize, dim: usize },
}

/// True iff the ordered pair `(a,b)` is q-near along `(d̂i,d̂j)` in the
/// complex: `a` is an ordered face of `b`, or the modified faces share a
/// q-face. The empty face admits no shared q-face.
pub fn directed_q_near(
    a: &[u32],
    b: &[u32],
    spec: ConnectionSpec,
    _complex: &DirectedFlagComplex,
) -> bool {
    debug_assert!(a.len() > spec.q && b.len() > spec.q, "both simplices must lie in K_q");
    if flagcomplex::is_face(a, b) {
        return true;
    }
    let (x, y) = match (flagcomplex::face_hat(a, spec.i), flagcomplex::face_hat(b, spec.j)) {
        (Some(x), Some(y)) => (x, y),
        _ => return false,
    };
    // Any common ordered subsequence of two stored faces is itself stored
    // (the complex is closed under ordered subtuples), so a shared q-face
    // exists iff the longest common subsequence has at least q+1 vertices.
    flagcomplex::common_subsequence_len(&x, &y) > spec.q
}

/// The (q,d̂i,d̂j)-connectivity digraph in Hasse form. Nodes are the
/// simplices of K_q in canonical order (ascending dimension, then
/// lexicographic); edges are the ordered nearness pairs without loops.
#[derive(Debug, Clone)]
pub struct ConnectivityDigraph {
    pub spec: ConnectionSpec,
    nodes: Vec<SimplexId>,
    /// First node index of each dimension q..=dim.
    offsets: Vec<u32>,
    edges: Vec<(u32, u32)>,
    adj_start: Vec<u32>,
    adj: Vec<u32>,
}

impl ConnectivityDigraph {
    /// Builds the connectivity digraph by bucketing simplices on the
    /// q-faces of their modified-face images and joining buckets, plus the
    /// proper ordered-inclusion edges.
    pub fn build(
        complex: &DirectedFlagComplex,
        spec: ConnectionSpec,
    ) -> Result<Self, DirectedError> {
        let dim = complex.dim();
        if complex.is_empty() || spec.q > dim {
            return Err(DirectedError::EmptyLevel { q: spec.q, dim });
        }
        let q = spec.q;
        let mut nodes = Vec::with_capacity(complex.count_from(q));
        let mut offsets = vec![0u32; dim - q + 2];
        for k in q..=dim {
            offsets[k - q + 1] = offsets[k - q] + complex.count(k) as u32;
            for (id, _) in complex.simplices(k) {
                nodes.push(id);
            }
        }
        let node_of = |id: SimplexId| offsets[id.dim as usize - q] + id.idx;

        // Inclusion edges: every proper ordered subtuple of dimension >= q.
        let mut edges: Vec<(u32, u32)> = nodes
            .par_iter()
            .flat_map_iter(|&tid| {
                let t = complex.simplex(tid);
                let target = node_of(tid);
                let mut out = Vec::new();
                let mut scratch = Vec::new();
                for len in q + 1..t.len() {
                    for_each_subsequence(t, len, &mut scratch, &mut |sub| {
                        let sid = complex.find(sub).expect("faces of stored simplices are stored");
                        out.push((node_of(sid), target));
                    });
                }
                out
            })
            .collect();

        // Shared-q-face edges: bucket by the q-faces of the modified-face
        // images, then join source and target buckets.
        let mut sources: HashMap<u32, Vec<u32>> = HashMap::new();
        let mut targets: HashMap<u32, Vec<u32>> = HashMap::new();
        let mut scratch = Vec::new();
        for &id in &nodes {
            let s = complex.simplex(id);
            let node = node_of(id);
            if let Some(x) = flagcomplex::face_hat(s, spec.i) {
                for_each_subsequence(&x, q + 1, &mut scratch, &mut |sub| {
                    if let Some(alpha) = complex.find(sub) {
                        sources.entry(alpha.idx).or_default().push(node);
                    }
                });
            }
            if let Some(y) = flagcomplex::face_hat(s, spec.j) {
                for_each_subsequence(&y, q + 1, &mut scratch, &mut |sub| {
                    if let Some(alpha) = complex.find(sub) {
                        targets.entry(alpha.idx).or_default().push(node);
                    }
                });
            }
        }
        let mut keys: Vec<u32> = sources.keys().copied().filter(|k| targets.contains_key(k)).collect();
        keys.sort_unstable();
        let bucket_edges: Vec<(u32, u32)> = keys
            .par_iter()
            .flat_map_iter(|alpha| {
                let srcs = &sources[alpha];
                let tgts = &targets[alpha];
                srcs.iter().flat_map(move |&u| {
                    tgts.iter().filter_map(move |&v| (u != v).then_some((u, v)))
                })
            })
            .collect();
        edges.extend(bucket_edges);
        edges.par_sort_unstable();
        edges.dedup();

        let (adj_start, adj) = to_csr(nodes.len(), &edges);
        Ok(ConnectivityDigraph { spec, nodes, offsets, edges, adj_start, adj })
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted `(source, target)` node-index pairs.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// The simplex behind a node index.
    pub fn simplex_id(&self, node: u32) -> SimplexId {
        self.nodes[node as usize]
    }

    /// The node index of a stored simplex of dimension >= q.
    pub fn node_of(&self, id: SimplexId) -> u32 {
        self.offsets[id.dim as usize - self.spec.q] + id.idx
    }

    pub fn successors(&self, node: u32) -> &[u32] {
        &self.adj[self.adj_start[node as usize] as usize..self.adj_start[node as usize + 1] as usize]
    }

    /// True iff `target` is reachable from `source` along edges (including
    /// the empty path).
    pub fn reachable(&self, source: u32, target: u32) -> bool {
        if source == target {
            return true;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![source];
        seen[source as usize] = true;
        while let Some(v) = stack.pop() {
            for &w in self.successors(v) {
                if w == target {
                    return true;
                }
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        false
    }

    /// DOT form with simplex tuples as node labels.
    pub fn write_dot<W: Write>(&self, complex: &DirectedFlagComplex, mut w: W) -> io::Result<()> {
        writeln!(w, "digraph dq_{}_{}_{} {{", self.spec.q, self.spec.i, self.spec.j)?;
        for (n, &id) in self.nodes.iter().enumerate() {
            writeln!(w, "  n{} [label=\"{}\"];", n, flagcomplex::format_simplex(complex.simplex(id)))?;
        }
        for &(u, v) in &self.edges {
            writeln!(w, "  n{u} -> n{v};")?;
        }
        writeln!(w, "}}")
    }
}

/// Enumerates all order-preserving subsequences of `s` of length `len`.
fn for_each_subsequence(s: &[u32], len: usize, scratch: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if len == 0 || len > s.len() {
        return;
    }
    fn rec(s: &[u32], len: usize, start: usize, scratch: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if scratch.len() == len {
            f(scratch);
            return;
        }
        let need = len - scratch.len();
        for i in start..=s.len() - need {
            scratch.push(s[i]);
            rec(s, len, i + 1, scratch, f);
            scratch.pop();
        }
    }
    scratch.clear();
    rec(s, len, 0, scratch, f);
}

fn to_csr(n: usize, edges: &[(u32, u32)]) -> (Vec<u32>, Vec<u32>) {
    let mut start = vec![0u32; n + 1];
    for &(u, _) in edges {
        start[u as usize + 1] += 1;
    }
    for i in 0..n {
        start[i + 1] += start[i];
    }
    let adj = edges.iter().map(|&(_, v)| v).collect();
    (start, adj)
}

/// The condensation of a connectivity digraph: strongly connected
/// components as nodes, deduplicated edges between distinct components.
/// Components are labelled in ascending order of their smallest member, so
/// ids are reproducible.
#[derive(Debug, Clone)]
pub struct Condensation {
    /// Member node indexes per component, ascending.
    components: Vec<Vec<u32>>,
    comp_of: Vec<u32>,
    edges: Vec<(u32, u32)>,
    adj_start: Vec<u32>,
    adj: Vec<u32>,
}

/// Condenses a digraph to its DAG of strongly connected components (the
/// Kolmogorov quotient of the preorder).
pub fn condense(g: &ConnectivityDigraph) -> Condensation {
    condense_edges(g.num_nodes(), g.edges())
}

pub(crate) fn condense_edges(n: usize, edges: &[(u32, u32)]) -> Condensation {
    let (adj_start, adj) = to_csr(n, edges);
    let mut components = tarjan_scc(n, &adj_start, &adj);
    for c in &mut components {
        c.sort_unstable();
    }
    components.sort_by_key(|c| c[0]);
    let mut comp_of = vec![0u32; n];
    for (ci, c) in components.iter().enumerate() {
        for &v in c {
            comp_of[v as usize] = ci as u32;
        }
    }
    let mut cedges: Vec<(u32, u32)> = edges
        .iter()
        .filter_map(|&(u, v)| {
            let (cu, cv) = (comp_of[u as usize], comp_of[v as usize]);
            (cu != cv).then_some((cu, cv))
        })
        .collect();
    cedges.sort_unstable();
    cedges.dedup();
    let (adj_start, adj) = to_csr(components.len(), &cedges);
    Condensation { components, comp_of, edges: cedges, adj_start, adj }
}

impl Condensation {
    pub fn num_nodes(&self) -> usize {
        self.components.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Members (digraph node indexes) of a component.
    pub fn members(&self, comp: u32) -> &[u32] {
        &self.components[comp as usize]
    }

    pub fn component_of(&self, node: u32) -> u32 {
        self.comp_of[node as usize]
    }

    pub fn successors(&self, comp: u32) -> &[u32] {
        &self.adj[self.adj_start[comp as usize] as usize..self.adj_start[comp as usize + 1] as usize]
    }

    /// True iff the condensation has no directed cycle. Always holds; used
    /// as a self-check in tests.
    pub fn is_acyclic(&self) -> bool {
        let n = self.num_nodes();
        let mut indeg = vec![0usize; n];
        for &(_, v) in &self.edges {
            indeg[v as usize] += 1;
        }
        let mut queue: Vec<u32> = (0..n as u32).filter(|&v| indeg[v as usize] == 0).collect();
        let mut seen = 0;
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            seen += 1;
            for &w in self.successors(v) {
                indeg[w as usize] -= 1;
                if indeg[w as usize] == 0 {
                    queue.push(w);
                }
            }
        }
        seen == n
    }

    /// The condensation as a finite poset (elements = components, order =
    /// reachability).
    pub fn to_poset(&self) -> crate::topology::Poset {
        crate::topology::Poset::new(self.num_nodes(), self.edges.clone())
    }

    /// DOT form with component member lists as labels.
    pub fn write_dot<W: Write>(
        &self,
        g: &ConnectivityDigraph,
        complex: &DirectedFlagComplex,
        mut w: W,
    ) -> io::Result<()> {
        writeln!(w, "digraph condensation {{")?;
        for (ci, members) in self.components.iter().enumerate() {
            let label: Vec<String> = members
                .iter()
                .map(|&v| flagcomplex::format_simplex(complex.simplex(g.simplex_id(v))))
                .collect();
            writeln!(w, "  c{} [label=\"{}\"];", ci, label.join(" "))?;
        }
        for &(u, v) in &self.edges {
            writeln!(w, "  c{u} -> c{v};")?;
        }
        writeln!(w, "}}")
    }
}

/// Iterative Tarjan over CSR adjacency; components come out in reverse
/// topological order and are re-labelled by the caller.
fn tarjan_scc(n: usize, adj_start: &[u32], adj: &[u32]) -> Vec<Vec<u32>> {
    const UNSET: u32 = u32::MAX;
    let mut index = vec![UNSET; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut comps = Vec::new();
    // Explicit DFS frames: (node, next edge offset).
    let mut frames: Vec<(u32, u32)> = Vec::new();
    for root in 0..n as u32 {
        if index[root as usize] != UNSET {
            continue;
        }
        frames.push((root, adj_start[root as usize]));
        index[root as usize] = next_index;
        low[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;
        while let Some(&mut (v, ref mut edge)) = frames.last_mut() {
            if *edge < adj_start[v as usize + 1] {
                let w = adj[*edge as usize];
                *edge += 1;
                if index[w as usize] == UNSET {
                    index[w as usize] = next_index;
                    low[w as usize] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    frames.push((w, adj_start[w as usize]));
                } else if on_stack[w as usize] {
                    low[v as usize] = low[v as usize].min(index[w as usize]);
                }
            } else {
                frames.pop();
                if let Some(&mut (parent, _)) = frames.last_mut() {
                    low[parent as usize] = low[parent as usize].min(low[v as usize]);
                }
                if low[v as usize] == index[v as usize] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w as usize] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// The first structure map of the complex: lazily yields the connectivity
/// digraph of every triple in Q_K. The number of triples is
/// [`ConnectionSpec::count_for_dim`].
pub fn structure_map(
    complex: &DirectedFlagComplex,
) -> impl Iterator<Item = (ConnectionSpec, ConnectivityDigraph)> + '_ {
    ConnectionSpec::all_for_dim(complex.dim()).map(move |spec| {
        let g = ConnectivityDigraph::build(complex, spec)
            .expect("triples of the structure map stay within the dimension");
        (spec, g)
    })
}

/// JSON-ready summary of a connectivity digraph and its condensation.
#[derive(Debug, Clone, Serialize)]
pub struct DigraphSummary {
    pub q: usize,
    pub i: usize,
    pub j: usize,
    pub nodes: usize,
    pub edges: usize,
    pub scc_count: usize,
    pub condensation_edges: usize,
}

pub fn summarize(g: &ConnectivityDigraph, c: &Condensation) -> DigraphSummary {
    DigraphSummary {
        q: g.spec.q,
        i: g.spec.i,
        j: g.spec.j,
        nodes: g.num_nodes(),
        edges: g.num_edges(),
        scc_count: c.num_nodes(),
        condensation_edges: c.num_edges(),
    }
}

/// A directed pseudomanifold violation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DirectedPmViolation {
    MaximalOfWrongDimension { simplex: Vec<u32> },
    TooManyCofaces { simplex: Vec<u32>, count: usize },
    TooFewCofaces { simplex: Vec<u32>, count: usize },
    /// Some ordered pair of n-simplices is not (n-1,d̂i,d̂j)-connected.
    NotMutuallyConnected { scc_count: usize },
    NoTopSimplices,
}

/// Certificate returned by [`directed_pseudomanifold_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectedPmCertificate {
    pub is_pseudomanifold: bool,
    pub with_boundary: bool,
    pub boundary: Vec<Vec<u32>>,
    pub violations: Vec<DirectedPmViolation>,
}

/// Checks whether the complex is an n-pseudomanifold along `(d̂i,d̂j)`:
/// maximal simplices all n-dimensional, ordered (n-1)-coface counts of
/// exactly/at most two, and every ordered pair of n-simplices
/// (n-1,d̂i,d̂j)-connected (mutual reachability in the connectivity
/// digraph).
pub fn directed_pseudomanifold_check(
    complex: &DirectedFlagComplex,
    n: usize,
    i: usize,
    j: usize,
) -> DirectedPmCertificate {
    let mut violations = Vec::new();
    if complex.count(n) == 0 {
        violations.push(DirectedPmViolation::NoTopSimplices);
        return DirectedPmCertificate {
            is_pseudomanifold: false,
            with_boundary: false,
            boundary: Vec::new(),
            violations,
        };
    }
    // A simplex in a complex closed under faces is maximal iff it has no
    // codimension-1 coface.
    for k in 0..=complex.dim() {
        if k == n {
            continue;
        }
        for (id, s) in complex.simplices(k) {
            if complex.cofaces(id).is_empty() {
                violations.push(DirectedPmViolation::MaximalOfWrongDimension { simplex: s.to_vec() });
            }
        }
    }

    let mut boundary = Vec::new();
    if n >= 1 && n <= complex.dim() {
        for (id, s) in complex.simplices(n - 1) {
            match complex.cofaces(id).len() {
                1 => boundary.push(s.to_vec()),
                2 => {}
                c if c > 2 => {
                    violations.push(DirectedPmViolation::TooManyCofaces { simplex: s.to_vec(), count: c })
                }
                c => violations.push(DirectedPmViolation::TooFewCofaces { simplex: s.to_vec(), count: c }),
            }
        }
    }

    let mut mutually_connected = true;
    if n >= 1 && n <= complex.dim() {
        let spec = ConnectionSpec::new(n - 1, i, j);
        if let Ok(g) = ConnectivityDigraph::build(complex, spec) {
            let cond = condense(&g);
            let top_components: std::collections::BTreeSet<u32> = complex
                .simplices(n)
                .map(|(id, _)| cond.component_of(g.node_of(id)))
                .collect();
            if top_components.len() > 1 {
                mutually_connected = false;
                violations.push(DirectedPmViolation::NotMutuallyConnected {
                    scc_count: top_components.len(),
                });
            }
        }
    }

    let wrong_max = violations
        .iter()
        .any(|v| matches!(v, DirectedPmViolation::MaximalOfWrongDimension { .. }));
    let too_many =
        violations.iter().any(|v| matches!(v, DirectedPmViolation::TooManyCofaces { .. }));
    let with_boundary = !wrong_max && !too_many && mutually_connected;
    let is_pseudomanifold = with_boundary
        && boundary.is_empty()
        && !violations.iter().any(|v| matches!(v, DirectedPmViolation::TooFewCofaces { .. }));
    DirectedPmCertificate { is_pseudomanifold, with_boundary, boundary, violations }
}

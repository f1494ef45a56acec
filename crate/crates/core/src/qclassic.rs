//! Classical (undirected) Q-analysis.
//!
//! Two simplices are q-near when they share a q-face, i.e. at least q+1
//! vertices; closing transitively yields the q-connectivity equivalence
//! relation on K_q, the set of simplices of dimension >= q. This module
//! computes q-graphs, q-connected components, structure vectors,
//! eccentricity, the incidence-matrix route, clique communities,
//! pseudomanifold certificates and the face poset.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::flagcomplex::{DirectedFlagComplex, SimplexId};
use crate::topology::Poset;

/// Default K_q size up to which the incidence-product route is used by
/// [`QGraph::build`]; larger complexes go through the coface-bucket route.
pub const DEFAULT_LAMBDA_THRESHOLD: usize = 20_000;

#[derive(Debug, Error)]
pub enum ViewError {
    #[error("simplex ceiling {ceiling} exceeded while closing the complex under subsets")]
    CeilingExceeded { ceiling: u64 },
    #[error("empty complex")]
    Empty,
}

/// A simplicial complex with order forgotten: simplices are vertex sets,
/// stored per dimension, sorted and deduplicated, closed under subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplexView {
    /// `dims[k]` holds the k-simplices as sorted (k+1)-tuples, flattened,
    /// in lexicographic order without duplicates.
    dims: Vec<Vec<u32>>,
}

impl SimplicialComplexView {
    /// Forgets the vertex order of a directed flag complex. Ordered
    /// simplices with equal vertex sets collapse to one set.
    pub fn from_flag_complex(c: &DirectedFlagComplex) -> Self {
        let mut dims = Vec::new();
        for k in 0..=c.dim() {
            if c.count(k) == 0 {
                continue;
            }
            let mut flat: Vec<Vec<u32>> = c
                .simplices(k)
                .map(|(_, s)| {
                    let mut set = s.to_vec();
                    set.sort_unstable();
                    set
                })
                .collect();
            flat.sort();
            flat.dedup();
            if dims.len() <= k {
                dims.resize_with(k + 1, Vec::new);
            }
            dims[k] = flat.concat();
        }
        SimplicialComplexView { dims }
    }

    /// Builds a complex from generating simplices (any iterable of vertex
    /// sets), closing downward under subsets. `ceiling` bounds the total
    /// number of simplices produced.
    pub fn from_simplices<I>(simplices: I, ceiling: u64) -> Result<Self, ViewError>
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        let mut by_dim: Vec<std::collections::BTreeSet<Vec<u32>>> = Vec::new();
        let mut pending: Vec<Vec<u32>> = Vec::new();
        for s in simplices {
            let mut s = s;
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            pending.push(s);
        }
        let mut total: u64 = 0;
        while let Some(s) = pending.pop() {
            let dim = s.len() - 1;
            if by_dim.len() <= dim {
                by_dim.resize_with(dim + 1, Default::default);
            }
            if !by_dim[dim].insert(s.clone()) {
                continue;
            }
            total += 1;
            if total > ceiling {
                return Err(ViewError::CeilingExceeded { ceiling });
            }
            if dim > 0 {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    pending.push(f);
                }
            }
        }
        let dims = by_dim.into_iter().map(|set| set.into_iter().flatten().collect()).collect();
        Ok(SimplicialComplexView { dims })
    }

    /// Dimension of the complex.
    pub fn dim(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.dims.iter().all(Vec::is_empty)
    }

    /// Number of k-simplices.
    pub fn count(&self, k: usize) -> usize {
        self.dims.get(k).map_or(0, |flat| flat.len() / (k + 1))
    }

    pub fn simplex_counts(&self) -> Vec<usize> {
        (0..self.dims.len()).map(|k| self.count(k)).collect()
    }

    pub fn total(&self) -> usize {
        (0..self.dims.len()).map(|k| self.count(k)).sum()
    }

    /// Number of simplices of dimension >= q.
    pub fn count_from(&self, q: usize) -> usize {
        (q..self.dims.len()).map(|k| self.count(k)).sum()
    }

    /// Vertex set of the simplex `(k, idx)`, sorted ascending.
    pub fn simplex(&self, k: usize, idx: usize) -> &[u32] {
        &self.dims[k][idx * (k + 1)..(idx + 1) * (k + 1)]
    }

    /// Iterates `(idx, vertex set)` over the k-simplices.
    pub fn simplices(&self, k: usize) -> impl Iterator<Item = (usize, &[u32])> + '_ {
        (0..self.count(k)).map(move |idx| (idx, self.simplex(k, idx)))
    }

    /// Looks up a sorted vertex set.
    pub fn find(&self, set: &[u32]) -> Option<(usize, usize)> {
        let k = set.len().checked_sub(1)?;
        if k >= self.dims.len() {
            return None;
        }
        let count = self.count(k);
        let (mut lo, mut hi) = (0usize, count);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.simplex(k, mid).cmp(set) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some((k, mid)),
            }
        }
        None
    }

    /// The simplices of K_q in canonical order (ascending dimension, then
    /// lexicographic), as `(dim, idx)` pairs.
    pub fn level(&self, q: usize) -> Vec<(usize, usize)> {
        let mut nodes = Vec::with_capacity(self.count_from(q));
        for k in q..self.dims.len() {
            for idx in 0..self.count(k) {
                nodes.push((k, idx));
            }
        }
        nodes
    }
}

/// True iff the simplices share a q-face, i.e. at least q+1 vertices.
/// Both inputs must be sorted vertex sets of dimension >= q.
pub fn q_near(a: &[u32], b: &[u32], q: usize) -> bool {
    debug_assert!(a.len() > q && b.len() > q);
    intersection_size(a, b) > q
}

fn intersection_size(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// The q-graph: vertices are the simplices of K_q, undirected edges join
/// q-near pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QGraph {
    pub q: usize,
    /// K_q in canonical order; node i of the graph is `nodes[i]`.
    pub nodes: Vec<(usize, usize)>,
    /// Undirected edges as `(u, v)` with `u < v`, sorted, deduplicated.
    pub edges: Vec<(u32, u32)>,
}

impl QGraph {
    /// Builds the q-graph, choosing the incidence-product route for small
    /// K_q and the shared-face-bucket route otherwise. Both routes produce
    /// identical graphs.
    pub fn build(view: &SimplicialComplexView, q: usize) -> QGraph {
        Self::build_with_threshold(view, q, DEFAULT_LAMBDA_THRESHOLD)
    }

    pub fn build_with_threshold(view: &SimplicialComplexView, q: usize, threshold: usize) -> QGraph {
        if view.count_from(q) <= threshold {
            Self::build_incidence_product(view, q)
        } else {
            Self::build_pairwise(view, q)
        }
    }

    /// Incidence-matrix route: rows of the K_q x vertices incidence matrix
    /// as bit vectors; the entry of the row product is the shared vertex
    /// count, thresholded at q+1.
    pub fn build_incidence_product(view: &SimplicialComplexView, q: usize) -> QGraph {
        let nodes = view.level(q);
        let nverts = nodes
            .iter()
            .flat_map(|&(k, idx)| view.simplex(k, idx))
            .copied()
            .max()
            .map_or(0, |m| m as usize + 1);
        let words = nverts.div_ceil(64);
        let mut rows = vec![0u64; nodes.len() * words];
        for (i, &(k, idx)) in nodes.iter().enumerate() {
            for &v in view.simplex(k, idx) {
                rows[i * words + (v as usize) / 64] |= 1 << (v % 64);
            }
        }
        let edges: Vec<(u32, u32)> = (0..nodes.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let rows = &rows;
                (i + 1..nodes.len()).filter_map(move |j| {
                    let a = &rows[i * words..(i + 1) * words];
                    let b = &rows[j * words..(j + 1) * words];
                    let lambda: u32 = a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum();
                    // lambda - 1 is the shared-face dimension; edge iff >= q.
                    (lambda as usize > q).then_some((i as u32, j as u32))
                })
            })
            .collect();
        let mut edges = edges;
        edges.sort_unstable();
        QGraph { q, nodes, edges }
    }

    /// Bucket route: simplices sharing a (q+1)-subset of vertices end up in
    /// a common bucket; all pairs within a bucket are q-near.
    pub fn build_pairwise(view: &SimplicialComplexView, q: usize) -> QGraph {
        let nodes = view.level(q);
        let mut buckets: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
        let mut subset = Vec::with_capacity(q + 1);
        for (i, &(k, idx)) in nodes.iter().enumerate() {
            let s = view.simplex(k, idx);
            for_each_subset(s, q + 1, &mut subset, &mut |sub| {
                buckets.entry(sub.to_vec()).or_default().push(i as u32);
            });
        }
        let mut edges: Vec<(u32, u32)> = buckets
            .into_values()
            .flat_map(|members| {
                let mut pairs = Vec::new();
                for (a, &u) in members.iter().enumerate() {
                    for &v in &members[a + 1..] {
                        pairs.push((u.min(v), u.max(v)));
                    }
                }
                pairs
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        QGraph { q, nodes, edges }
    }

    /// Adjacency lists of the q-graph.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Writes the graph in undirected DOT form, nodes labelled by vertex
    /// sets.
    pub fn write_dot<W: Write>(&self, view: &SimplicialComplexView, mut w: W) -> io::Result<()> {
        writeln!(w, "graph qgraph_{} {{", self.q)?;
        for (i, &(k, idx)) in self.nodes.iter().enumerate() {
            let label: Vec<String> =
                view.simplex(k, idx).iter().map(|v| v.to_string()).collect();
            writeln!(w, "  n{} [label=\"{{{}}}\"];", i, label.join(","))?;
        }
        for &(u, v) in &self.edges {
            writeln!(w, "  n{u} -- n{v};")?;
        }
        writeln!(w, "}}")
    }
}

/// Enumerates all sorted `size`-subsets of `s`, invoking `f` on each.
fn for_each_subset(s: &[u32], size: usize, scratch: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if size == 0 || size > s.len() {
        return;
    }
    fn rec(s: &[u32], size: usize, start: usize, scratch: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if scratch.len() == size {
            f(scratch);
            return;
        }
        let need = size - scratch.len();
        for i in start..=s.len() - need {
            scratch.push(s[i]);
            rec(s, size, i + 1, scratch, f);
            scratch.pop();
        }
    }
    scratch.clear();
    rec(s, size, 0, scratch, f);
}

/// Connected components of a q-graph: the q-connectivity classes of K_q.
/// Classes are sorted by their smallest member node.
pub fn q_components(g: &QGraph) -> Vec<Vec<u32>> {
    let mut uf = UnionFind::new(g.nodes.len());
    for &(u, v) in &g.edges {
        uf.union(u as usize, v as usize);
    }
    uf.classes()
}

/// Number of q-connectivity classes, computed by uniting shared-face
/// buckets directly without materialising q-graph edges. Agrees with
/// `q_components(&QGraph::build(view, q)).len()`.
fn count_q_components(view: &SimplicialComplexView, q: usize) -> usize {
    let nodes = view.level(q);
    let mut buckets: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut uf = UnionFind::new(nodes.len());
    let mut subset = Vec::with_capacity(q + 1);
    for (i, &(k, idx)) in nodes.iter().enumerate() {
        let s = view.simplex(k, idx);
        for_each_subset(s, q + 1, &mut subset, &mut |sub| {
            match buckets.get(sub) {
                Some(&first) => uf.union(first as usize, i),
                None => {
                    buckets.insert(sub.to_vec(), i as u32);
                }
            }
        });
    }
    uf.classes().len()
}

pub(crate) struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    pub fn find(&mut self, x: usize) -> u32 {
        let mut root = x as u32;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x as u32;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root wins so class labels follow smallest members.
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi as usize] = lo;
        }
    }

    /// Classes sorted by smallest member, members ascending.
    pub fn classes(&mut self) -> Vec<Vec<u32>> {
        let n = self.parent.len();
        let mut by_root: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
        for x in 0..n {
            by_root.entry(self.find(x)).or_default().push(x as u32);
        }
        by_root.into_values().collect()
    }
}

/// The four structure vectors, all indexed top dimension first.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct StructureVectors {
    /// Q_q = number of q-connected components, q = dim(K) down to 0.
    pub q_vec: Vec<usize>,
    /// |K_q| = number of simplices of dimension >= q.
    pub n_vec: Vec<usize>,
    /// 1 - Q_q / |K_q|.
    pub t_vec: Vec<f64>,
    /// Obstruction vector Q - 1.
    pub q_hat: Vec<usize>,
}

/// Computes all four structure vectors of a non-empty complex.
pub fn structure_vectors(view: &SimplicialComplexView) -> StructureVectors {
    assert!(!view.is_empty(), "structure vectors of an empty complex");
    let dim = view.dim();
    let mut q_vec = Vec::with_capacity(dim + 1);
    let mut n_vec = Vec::with_capacity(dim + 1);
    for q in (0..=dim).rev() {
        q_vec.push(count_q_components(view, q));
        n_vec.push(view.count_from(q));
    }
    let t_vec = q_vec
        .iter()
        .zip(&n_vec)
        .map(|(&qq, &nn)| 1.0 - qq as f64 / nn as f64)
        .collect();
    let q_hat = q_vec.iter().map(|&qq| qq - 1).collect();
    StructureVectors { q_vec, n_vec, t_vec, q_hat }
}

impl StructureVectors {
    /// CSV form: one row per vector, entries top dimension first.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        writeln!(w, "Q,{}", join(&self.q_vec))?;
        writeln!(w, "N,{}", join(&self.n_vec))?;
        let t: Vec<String> = self.t_vec.iter().map(|x| format!("{x:.6}")).collect();
        writeln!(w, "T,{}", t.join(","))?;
        writeln!(w, "Qhat,{}", join(&self.q_hat))
    }
}

/// Eccentricity of a simplex: `(dim - q̌) / (q̌ + 1)` where q̌ is the
/// greatest q at which the simplex is q-connected to a simplex that is not
/// one of its faces. `Infinite` when no such q exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eccentricity {
    Finite { num: usize, den: usize },
    Infinite,
}

impl Eccentricity {
    fn finite(num: usize, den: usize) -> Self {
        let g = gcd(num.max(1), den);
        Eccentricity::Finite { num: num / g, den: den / g }
    }
}

impl fmt::Display for Eccentricity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eccentricity::Finite { num, den } if *den == 1 => write!(f, "{num}"),
            Eccentricity::Finite { num, den } => write!(f, "{num}/{den}"),
            Eccentricity::Infinite => write!(f, "inf"),
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Computes the eccentricity of the simplex `(k, idx)` of `view`.
pub fn eccentricity(view: &SimplicialComplexView, k: usize, idx: usize) -> Eccentricity {
    let s = view.simplex(k, idx).to_vec();
    for q in (0..=k).rev() {
        let g = QGraph::build(view, q);
        let classes = q_components(&g);
        let node = g
            .nodes
            .iter()
            .position(|&(dk, di)| dk == k && di == idx)
            .expect("simplex present in its own level") as u32;
        let class = classes.iter().find(|c| c.contains(&node)).unwrap();
        let has_non_face = class.iter().any(|&other| {
            let (ok, oi) = g.nodes[other as usize];
            let t = view.simplex(ok, oi);
            !(t.len() <= s.len() && intersection_size(t, &s) == t.len())
        });
        if has_non_face {
            return Eccentricity::finite(k - q, q + 1);
        }
    }
    Eccentricity::Infinite
}

/// The two simplicial complexes of a binary relation: `K_X(Y,R)` generated
/// by the column-supports of rows, and `K_Y(X,R)` by the row-supports of
/// columns. All-zero rows and columns contribute nothing.
pub fn incidence_complexes(
    lambda: &[Vec<u8>],
    ceiling: u64,
) -> Result<(SimplicialComplexView, SimplicialComplexView), ViewError> {
    let rows = lambda.iter().map(|row| {
        row.iter()
            .enumerate()
            .filter(|&(_, &e)| e != 0)
            .map(|(j, _)| j as u32)
            .collect::<Vec<u32>>()
    });
    let ncols = lambda.first().map_or(0, Vec::len);
    let cols = (0..ncols).map(|j| {
        lambda
            .iter()
            .enumerate()
            .filter(|(_, row)| row[j] != 0)
            .map(|(i, _)| i as u32)
            .collect::<Vec<u32>>()
    });
    let row_complex = SimplicialComplexView::from_simplices(rows, ceiling)?;
    let col_complex = SimplicialComplexView::from_simplices(cols, ceiling)?;
    Ok((row_complex, col_complex))
}

/// The shared-face-dimension matrix `ΛΛᵀ - 1`: entry `(i,j)` is the
/// dimension of the intersection of row-simplices i and j (-1 when
/// disjoint).
pub fn shared_face_matrix(lambda: &[Vec<u8>]) -> Vec<Vec<i64>> {
    let m = lambda.len();
    let mut out = vec![vec![0i64; m]; m];
    for i in 0..m {
        for j in 0..m {
            let dot: i64 =
                lambda[i].iter().zip(&lambda[j]).map(|(&a, &b)| (a as i64) * (b as i64)).sum();
            out[i][j] = dot - 1;
        }
    }
    out
}

/// k-clique communities of a simple undirected graph: maximal sets of
/// k-cliques connected through chains of (k-1)-vertex overlaps. Returns
/// the k-cliques (sorted vertex lists, lexicographic) and the community
/// partition as lists of clique indexes.
pub fn clique_communities(
    num_vertices: usize,
    edges: &[(u32, u32)],
    k: usize,
) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
    assert!(k >= 2, "clique size must be at least 2");
    let mut adj = vec![Vec::new(); num_vertices];
    for &(u, v) in edges {
        if u == v {
            continue;
        }
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    // Enumerate all k-cliques by ascending extension.
    let mut cliques: Vec<Vec<u32>> = Vec::new();
    let mut stack: Vec<(Vec<u32>, Vec<u32>)> = (0..num_vertices as u32)
        .map(|v| (vec![v], adj[v as usize].iter().copied().filter(|&w| w > v).collect()))
        .collect();
    while let Some((clique, cands)) = stack.pop() {
        if clique.len() == k {
            cliques.push(clique);
            continue;
        }
        for &w in &cands {
            let next: Vec<u32> = cands
                .iter()
                .copied()
                .filter(|&x| x > w && adj[w as usize].binary_search(&x).is_ok())
                .collect();
            let mut ext = clique.clone();
            ext.push(w);
            stack.push((ext, next));
        }
    }
    cliques.sort();
    cliques.dedup();

    // Two k-cliques are adjacent iff they share k-1 vertices; bucket by
    // (k-1)-subsets.
    let mut uf = UnionFind::new(cliques.len());
    let mut buckets: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
    let mut scratch = Vec::new();
    for (i, c) in cliques.iter().enumerate() {
        for_each_subset(c, k - 1, &mut scratch, &mut |sub| {
            buckets.entry(sub.to_vec()).or_default().push(i as u32);
        });
    }
    for members in buckets.into_values() {
        for w in &members[1..] {
            uf.union(members[0] as usize, *w as usize);
        }
    }
    let communities = uf.classes();
    (cliques, communities)
}

/// A pseudomanifold violation.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum PmViolation {
    /// A maximal simplex of dimension other than n.
    MaximalOfWrongDimension { simplex: Vec<u32> },
    /// An (n-1)-simplex contained in more than two n-simplices.
    TooManyCofaces { simplex: Vec<u32>, count: usize },
    /// An (n-1)-simplex contained in fewer than two n-simplices (closed
    /// variant only).
    TooFewCofaces { simplex: Vec<u32>, count: usize },
    /// The n-simplices do not all lie in one (n-1)-connected class.
    NotConnected { classes: usize },
    /// The complex has no n-simplices at all.
    NoTopSimplices,
}

/// Certificate returned by [`pseudomanifold_check`].
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PmCertificate {
    /// Closed pseudomanifold: every (n-1)-simplex in exactly two
    /// n-simplices.
    pub is_pseudomanifold: bool,
    /// Pseudomanifold with boundary: at most two.
    pub with_boundary: bool,
    /// The (n-1)-simplices lying in exactly one n-simplex.
    pub boundary: Vec<Vec<u32>>,
    pub violations: Vec<PmViolation>,
}

/// Checks whether the complex is an n-pseudomanifold (closed or with
/// boundary): maximal simplices all n-dimensional, (n-1)-coface counts of
/// exactly/at most two, and all n-simplices (n-1)-connected.
pub fn pseudomanifold_check(view: &SimplicialComplexView, n: usize) -> PmCertificate {
    let mut violations = Vec::new();
    if view.count(n) == 0 {
        violations.push(PmViolation::NoTopSimplices);
        return PmCertificate {
            is_pseudomanifold: false,
            with_boundary: false,
            boundary: Vec::new(),
            violations,
        };
    }
    // Maximal simplices: those not properly contained in another simplex,
    // i.e. with no codimension-1 coface in the closed complex.
    for k in 0..view.dims.len() {
        if k == n {
            continue;
        }
        for (_, s) in view.simplices(k) {
            let maximal = if k + 1 < view.dims.len() {
                !has_proper_coface(view, s)
            } else {
                true
            };
            if maximal {
                violations.push(PmViolation::MaximalOfWrongDimension { simplex: s.to_vec() });
            }
        }
    }

    let mut boundary = Vec::new();
    if n >= 1 && n <= view.dim() {
        for (_, f) in view.simplices(n - 1) {
            let count = view
                .simplices(n)
                .filter(|(_, s)| intersection_size(s, f) == f.len())
                .count();
            match count {
                1 => boundary.push(f.to_vec()),
                2 => {}
                c if c > 2 => {
                    violations.push(PmViolation::TooManyCofaces { simplex: f.to_vec(), count: c })
                }
                c => violations.push(PmViolation::TooFewCofaces { simplex: f.to_vec(), count: c }),
            }
        }
    }

    // Connectivity of n-simplices at level n-1.
    let mut connected = true;
    if n >= 1 {
        let g = QGraph::build(view, n - 1);
        let classes = q_components(&g);
        let top_class_count = classes
            .iter()
            .filter(|c| c.iter().any(|&i| g.nodes[i as usize].0 == n))
            .count();
        if top_class_count > 1 {
            connected = false;
            violations.push(PmViolation::NotConnected { classes: top_class_count });
        }
    }

    let wrong_max = violations
        .iter()
        .any(|v| matches!(v, PmViolation::MaximalOfWrongDimension { .. }));
    let too_many =
        violations.iter().any(|v| matches!(v, PmViolation::TooManyCofaces { .. }));
    let with_boundary = !wrong_max && !too_many && connected;
    let is_pseudomanifold = with_boundary && boundary.is_empty()
        && !violations.iter().any(|v| matches!(v, PmViolation::TooFewCofaces { .. }));
    PmCertificate { is_pseudomanifold, with_boundary, boundary, violations }
}

fn has_proper_coface(view: &SimplicialComplexView, s: &[u32]) -> bool {
    let k = s.len() - 1;
    if k + 1 >= view.dims.len() {
        return false;
    }
    view.simplices(k + 1).any(|(_, t)| intersection_size(t, s) == s.len())
}

/// The face poset of the complex in Hasse form: element ids follow the
/// canonical order of K_0, with an edge for every codimension-1 inclusion.
pub fn face_poset(view: &SimplicialComplexView) -> Poset {
    let nodes = view.level(0);
    let mut index: HashMap<(usize, usize), u32> = HashMap::new();
    for (i, &node) in nodes.iter().enumerate() {
        index.insert(node, i as u32);
    }
    let mut hasse = Vec::new();
    for k in 1..view.dims.len() {
        for (idx, s) in view.simplices(k) {
            let up = index[&(k, idx)];
            let mut f = Vec::with_capacity(k);
            for drop in 0..s.len() {
                f.clear();
                f.extend(s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v));
                let (fk, fi) = view.find(&f).expect("closed under subsets");
                hasse.push((index[&(fk, fi)], up));
            }
        }
    }
    hasse.sort_unstable();
    hasse.dedup();
    Poset::new(nodes.len(), hasse)
}

/// The face poset of a directed flag complex: ordered simplices as
/// elements, codimension-1 ordered inclusions as Hasse edges. The element
/// order is ascending dimension then lexicographic.
pub fn face_poset_directed(c: &DirectedFlagComplex) -> Poset {
    let mut offset = vec![0u32; c.dim() + 2];
    for k in 0..=c.dim() {
        offset[k + 1] = offset[k] + c.count(k) as u32;
    }
    let n = offset[c.dim() + 1] as usize;
    let mut hasse = Vec::new();
    for k in 0..c.dim() {
        for (fid, _) in c.simplices(k) {
            for &up in c.cofaces(fid) {
                hasse.push((offset[k] + fid.idx, offset[k + 1] + up));
            }
        }
    }
    hasse.sort_unstable();
    hasse.dedup();
    Poset::new(n, hasse)
}

/// Element labels matching [`face_poset_directed`]'s numbering.
pub fn directed_poset_labels(c: &DirectedFlagComplex) -> Vec<SimplexId> {
    let mut labels = Vec::with_capacity(c.total());
    for k in 0..=c.dim() {
        for (id, _) in c.simplices(k) {
            labels.push(id);
        }
    }
    labels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Digraph;
    use crate::flagcomplex::DirectedFlagComplex;

    fn view_of(edges: &[(u32, u32)], n: usize) -> SimplicialComplexView {
        let g = Digraph::from_edges(n, edges);
        let c = DirectedFlagComplex::build(&g, None, 1 << 30).unwrap();
        SimplicialComplexView::from_flag_complex(&c)
    }

    fn from_maximal(sets: &[&[u32]]) -> SimplicialComplexView {
        SimplicialComplexView::from_simplices(sets.iter().map(|s| s.to_vec()), 1 << 20).unwrap()
    }

    /// Boundary of the 3-simplex: all proper subsets of {0,1,2,3}.
    fn tetra_boundary() -> SimplicialComplexView {
        from_maximal(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])
    }

    #[test]
    fn q_near_examples() {
        assert!(q_near(&[0, 1, 2], &[1, 2, 3], 1));
        assert!(!q_near(&[0, 1, 2], &[2, 3, 4], 1));
        assert!(q_near(&[0, 1], &[0, 1], 1));
    }

    #[test]
    fn view_deduplicates_reciprocal_simplices() {
        let v = view_of(&[(0, 1), (1, 0)], 2);
        assert_eq!(v.simplex_counts(), vec![2, 1]);
    }

    #[test]
    fn closure_from_maximal() {
        let v = from_maximal(&[&[0, 1, 2]]);
        assert_eq!(v.simplex_counts(), vec![3, 3, 1]);
    }

    #[test]
    fn q_graph_on_tetra_boundary_is_3_regular_on_triangles() {
        let v = tetra_boundary();
        let g = QGraph::build(&v, 1);
        let adj = g.adjacency();
        for (i, &(k, _)) in g.nodes.iter().enumerate() {
            if k == 2 {
                let deg = adj[i].iter().filter(|&&w| g.nodes[w as usize].0 == 2).count();
                assert_eq!(deg, 3);
            }
        }
    }

    #[test]
    fn q_graph_cycle_has_no_edges_at_top() {
        let v = view_of(&[(0, 1), (1, 2), (2, 0)], 3);
        let g = QGraph::build(&v, 1);
        assert!(g.edges.is_empty());
    }

    #[test]
    fn q_graph_two_triangles_share_edge() {
        let v = from_maximal(&[&[0, 1, 2], &[1, 2, 3]]);
        let g = QGraph::build(&v, 1);
        let triangle_pairs = g
            .edges
            .iter()
            .filter(|&&(u, v_)| g.nodes[u as usize].0 == 2 && g.nodes[v_ as usize].0 == 2)
            .count();
        assert_eq!(triangle_pairs, 1);
    }

    #[test]
    fn incidence_product_equals_pairwise() {
        let v = tetra_boundary();
        for q in 0..=v.dim() {
            assert_eq!(QGraph::build_incidence_product(&v, q), QGraph::build_pairwise(&v, q));
        }
    }

    #[test]
    fn q_components_examples() {
        let cycle = view_of(&[(0, 1), (1, 2), (2, 0)], 3);
        let g1 = QGraph::build(&cycle, 1);
        assert_eq!(q_components(&g1).len(), 3);
        let g0 = QGraph::build(&cycle, 0);
        assert_eq!(q_components(&g0).len(), 1);

        let full = from_maximal(&[&[0, 1, 2]]);
        assert_eq!(q_components(&QGraph::build(&full, 0)).len(), 1);
    }

    #[test]
    fn structure_vectors_examples() {
        let full = from_maximal(&[&[0, 1, 2]]);
        assert_eq!(structure_vectors(&full).q_vec, vec![1, 1, 1]);

        let cycle = view_of(&[(0, 1), (1, 2), (2, 0)], 3);
        let sv = structure_vectors(&cycle);
        assert_eq!(sv.q_vec, vec![3, 1]);
        assert_eq!(sv.n_vec, vec![3, 6]);
        assert_eq!(sv.q_hat, vec![2, 0]);

        let tetra = tetra_boundary();
        assert_eq!(structure_vectors(&tetra).q_vec, vec![4, 1, 1]);
    }

    #[test]
    fn eccentricity_examples() {
        let glued = from_maximal(&[&[0, 1, 2], &[1, 2, 3]]);
        let (k, idx) = glued.find(&[0, 1, 2]).unwrap();
        assert_eq!(eccentricity(&glued, k, idx), Eccentricity::Finite { num: 1, den: 2 });

        let pendant = from_maximal(&[&[0, 1, 2], &[2, 3, 4]]);
        let (k, idx) = pendant.find(&[2, 3, 4]).unwrap();
        assert_eq!(eccentricity(&pendant, k, idx), Eccentricity::Finite { num: 2, den: 1 });

        let isolated = from_maximal(&[&[0], &[1, 2]]);
        let (k, idx) = isolated.find(&[0]).unwrap();
        assert_eq!(eccentricity(&isolated, k, idx), Eccentricity::Infinite);
        assert_eq!(eccentricity(&isolated, k, idx).to_string(), "inf");
    }

    #[test]
    fn incidence_complex_examples() {
        let (rows, cols) = incidence_complexes(&[vec![1, 0], vec![0, 1]], 1 << 20).unwrap();
        assert_eq!(rows.simplex_counts(), vec![2]);
        assert_eq!(cols.simplex_counts(), vec![2]);

        let (rows, _) = incidence_complexes(&[vec![1, 1, 1], vec![1, 1, 1]], 1 << 20).unwrap();
        assert_eq!(rows.simplex_counts(), vec![3, 3, 1]);

        let (rows, _) = incidence_complexes(&[vec![1, 1, 0], vec![0, 1, 1]], 1 << 20).unwrap();
        assert_eq!(rows.simplex_counts(), vec![3, 2]);
        assert!(rows.find(&[0, 1]).is_some() && rows.find(&[1, 2]).is_some());

        let (rows, cols) = incidence_complexes(&[vec![0, 0], vec![1, 1]], 1 << 20).unwrap();
        assert_eq!(rows.total(), 3);
        assert_eq!(cols.simplex_counts(), vec![1]); // only row 1 relates
    }

    #[test]
    fn shared_face_matrix_examples() {
        assert_eq!(
            shared_face_matrix(&[vec![1, 1, 0], vec![0, 1, 1]]),
            vec![vec![1, 0], vec![0, 1]]
        );
        assert_eq!(shared_face_matrix(&[vec![1, 0], vec![0, 1]]), vec![vec![0, -1], vec![-1, 0]]);
        assert_eq!(shared_face_matrix(&[vec![1, 1, 1]]), vec![vec![2]]);
    }

    #[test]
    fn clique_community_examples() {
        // Two triangles sharing an edge.
        let (cliques, comms) =
            clique_communities(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)], 3);
        assert_eq!(cliques.len(), 2);
        assert_eq!(comms.len(), 1);

        // Two triangles sharing one vertex.
        let (cliques, comms) =
            clique_communities(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)], 3);
        assert_eq!(cliques.len(), 2);
        assert_eq!(comms.len(), 2);

        // K4: four triangles, one community.
        let (cliques, comms) =
            clique_communities(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], 3);
        assert_eq!(cliques.len(), 4);
        assert_eq!(comms.len(), 1);
        assert_eq!(comms[0].len(), 4);
    }

    #[test]
    fn clique_communities_match_skeleton_components() {
        // Contract: k-clique communities are the (k-2)-connected classes of
        // the (k-1)-skeleton of the flag complex, restricted to its
        // (k-1)-simplices.
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let n = rng.random_range(3..=9usize);
            let mut edges = Vec::new();
            for a in 0..n as u32 {
                for b in a + 1..n as u32 {
                    if rng.random_bool(0.5) {
                        edges.push((a, b));
                    }
                }
            }
            for k in 2..=4usize {
                let (cliques, communities) = clique_communities(n, &edges, k);
                // Downward closure of the k-cliques plus all vertices and
                // edges; lower cliques outside it cannot affect the
                // component partition restricted to (k-1)-simplices.
                let skeleton = SimplicialComplexView::from_simplices(
                    cliques
                        .iter()
                        .cloned()
                        .chain((0..n as u32).map(|v| vec![v]))
                        .chain(edges.iter().map(|&(a, b)| vec![a, b])),
                    1 << 20,
                )
                .unwrap();
                if skeleton.dim() + 1 < k {
                    assert!(cliques.is_empty());
                    continue;
                }
                let g = QGraph::build(&skeleton, k - 2);
                let classes = q_components(&g);
                let mut from_skeleton: Vec<Vec<Vec<u32>>> = classes
                    .iter()
                    .map(|cl| {
                        cl.iter()
                            .filter(|&&m| g.nodes[m as usize].0 == k - 1)
                            .map(|&m| {
                                let (dk, di) = g.nodes[m as usize];
                                skeleton.simplex(dk, di).to_vec()
                            })
                            .collect()
                    })
                    .filter(|cl: &Vec<Vec<u32>>| !cl.is_empty())
                    .collect();
                from_skeleton.sort();
                let mut from_communities: Vec<Vec<Vec<u32>>> = communities
                    .iter()
                    .map(|c| c.iter().map(|&i| cliques[i as usize].clone()).collect())
                    .collect();
                from_communities.sort();
                assert_eq!(from_communities, from_skeleton);
            }
        }
    }

    #[test]
    fn pseudomanifold_examples() {
        let tetra = tetra_boundary();
        let cert = pseudomanifold_check(&tetra, 2);
        assert!(cert.is_pseudomanifold);
        assert!(cert.boundary.is_empty());

        // Three triangles sharing the edge {0,1}.
        let fan = from_maximal(&[&[0, 1, 2], &[0, 1, 3], &[0, 1, 4]]);
        let cert = pseudomanifold_check(&fan, 2);
        assert!(!cert.is_pseudomanifold && !cert.with_boundary);
        assert!(cert
            .violations
            .iter()
            .any(|v| matches!(v, PmViolation::TooManyCofaces { simplex, count: 3 } if simplex == &[0,1])));

        let triangle = from_maximal(&[&[0, 1, 2]]);
        let cert = pseudomanifold_check(&triangle, 2);
        assert!(!cert.is_pseudomanifold && cert.with_boundary);
        assert_eq!(cert.boundary, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn face_poset_examples() {
        let edge = from_maximal(&[&[0, 1]]);
        assert_eq!(face_poset(&edge).hasse().len(), 2);

        let full = from_maximal(&[&[0, 1, 2]]);
        assert_eq!(face_poset(&full).hasse().len(), 9);

        let vertex = from_maximal(&[&[0]]);
        assert!(face_poset(&vertex).hasse().is_empty());
    }

    #[test]
    fn hasse_edges_are_q_near_pairs() {
        let v = tetra_boundary();
        let poset = face_poset(&v);
        let nodes = v.level(0);
        for &(lo, hi) in poset.hasse() {
            let (lk, li) = nodes[lo as usize];
            let (hk, hi_) = nodes[hi as usize];
            assert_eq!(hk, lk + 1);
            assert!(q_near(v.simplex(lk, li), v.simplex(hk, hi_), lk));
        }
    }
}

//! Directed flag complex enumeration and ordered-simplex face machinery.
//!
//! A k-simplex of the directed flag complex is a tuple `(v0,..,vk)` of
//! distinct vertices with a digraph edge `(vi,vj)` for every `i < j` (a
//! directed clique). `v0` is the source and `vk` the sink. Simplices are
//! stored per dimension in lexicographic order, so ids are reproducible
//! regardless of worker count.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::digraph::Digraph;

/// Default per-dimension simplex ceiling.
pub const DEFAULT_SIMPLEX_CEILING: u64 = 100_000_000;

/// Identity of a stored simplex: its dimension and lexicographic rank
/// within that dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimplexId {
    pub dim: u32,
    pub idx: u32,
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("simplex ceiling {ceiling} exceeded in dimension {dim}; partial counts {partial:?}")]
    CeilingExceeded { dim: usize, ceiling: u64, partial: Vec<usize> },
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("line {line}: expected \"dim <k>\" header or vertex ids, got {found:?}")]
    Malformed { line: usize, found: String },
    #[error("line {line}: simplex has {got} vertices but current section is dimension {dim}")]
    WrongSection { line: usize, got: usize, dim: usize },
    #[error("line {line}: repeated vertex in simplex")]
    RepeatedVertex { line: usize },
    #[error("simplex {0:?} has a face missing from the store")]
    MissingFace(Vec<u32>),
    #[error("dimension {dim} is not sorted or contains duplicates")]
    NotCanonical { dim: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Applies the face map `d_i`: removes the vertex at position `i`.
///
/// Requires `i <= dim(s)` and `dim(s) >= 1`.
pub fn face(s: &[u32], i: usize) -> Vec<u32> {
    assert!(s.len() >= 2, "face of a 0-simplex is the empty face");
    assert!(i < s.len(), "face index {i} out of range for dimension {}", s.len() - 1);
    let mut out = Vec::with_capacity(s.len() - 1);
    out.extend_from_slice(&s[..i]);
    out.extend_from_slice(&s[i + 1..]);
    out
}

/// Applies the modified face map: removes the vertex at position
/// `min(i, dim(s))`. Returns `None` (the empty face) for 0-simplices; the
/// empty face contains no q-face for any q >= 0.
pub fn face_hat(s: &[u32], i: usize) -> Option<Vec<u32>> {
    if s.len() == 1 {
        return None;
    }
    Some(face(s, i.min(s.len() - 1)))
}

/// True iff `a` is a face of `b`: `a` is an order-preserving subsequence of
/// `b`. Every simplex is a face of itself.
pub fn is_face(a: &[u32], b: &[u32]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut it = b.iter();
    a.iter().all(|v| it.any(|w| w == v))
}

/// Length of the longest common order-preserving subsequence of two tuples.
pub(crate) fn common_subsequence_len(a: &[u32], b: &[u32]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for &x in a {
        for (j, &y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Formats a simplex as `(v0 v1 .. vk)`.
pub fn format_simplex(s: &[u32]) -> String {
    let mut out = String::from("(");
    for (i, v) in s.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{v}");
    }
    out.push(')');
    out
}

/// Simplices of one dimension, flattened and lexicographically sorted.
#[derive(Debug, Clone, Default)]
struct DimStore {
    tuple_len: usize,
    verts: Vec<u32>,
}

impl DimStore {
    fn len(&self) -> usize {
        self.verts.len().checked_div(self.tuple_len).unwrap_or(0)
    }

    fn get(&self, idx: usize) -> &[u32] {
        &self.verts[idx * self.tuple_len..(idx + 1) * self.tuple_len]
    }

    fn find(&self, tuple: &[u32]) -> Option<u32> {
        debug_assert_eq!(tuple.len(), self.tuple_len);
        let n = self.len();
        let (mut lo, mut hi) = (0usize, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(tuple) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid as u32),
            }
        }
        None
    }
}

/// The directed flag complex of a digraph: per-dimension stores of ordered
/// simplices plus a codimension-1 coface index.
///
/// Immutable once built; shareable across threads.
#[derive(Debug, Clone)]
pub struct DirectedFlagComplex {
    dims: Vec<DimStore>,
    /// `cofaces[k][i]` lists the (k+1)-simplices having k-simplex `i` as a
    /// codimension-1 face, ascending.
    cofaces: Vec<Vec<Vec<u32>>>,
}

impl DirectedFlagComplex {
    /// Enumerates all directed cliques of `g` up to `max_dim` (inclusive;
    /// `None` = unbounded). Enumeration extends a simplex at the sink end
    /// with vertices from the common out-neighbourhood, ascending, so
    /// per-dimension lists come out lexicographically sorted.
    pub fn build(g: &Digraph, max_dim: Option<usize>, ceiling: u64) -> Result<Self, BuildError> {
        let n = g.num_vertices();
        let cap = max_dim.unwrap_or(usize::MAX);

        // Fan out over root vertices; each worker produces per-dimension
        // flattened tuples which are concatenated in root order, preserving
        // global lexicographic order.
        let per_root: Vec<Vec<Vec<u32>>> = (0..n as u32)
            .into_par_iter()
            .map(|root| {
                let mut local: Vec<Vec<u32>> = vec![Vec::new()];
                local[0].push(root);
                if cap > 0 {
                    let mut prefix = vec![root];
                    extend_simplex(g, &mut prefix, g.out_neighbors(root), cap, &mut local);
                }
                local
            })
            .collect();

        let mut dims: Vec<DimStore> = Vec::new();
        for local in &per_root {
            for (k, tuples) in local.iter().enumerate() {
                if tuples.is_empty() {
                    continue;
                }
                if dims.len() <= k {
                    dims.resize_with(k + 1, DimStore::default);
                }
                dims[k].tuple_len = k + 1;
                dims[k].verts.extend_from_slice(tuples);
            }
        }
        while dims.last().is_some_and(|d| d.verts.is_empty()) {
            dims.pop();
        }
        for (k, store) in dims.iter().enumerate() {
            let count = store.len() as u64;
            if count > ceiling {
                let partial = dims.iter().map(|d| d.len()).collect();
                return Err(BuildError::CeilingExceeded { dim: k, ceiling, partial });
            }
        }

        let mut complex = DirectedFlagComplex { dims, cofaces: Vec::new() };
        complex.build_coface_index();
        Ok(complex)
    }

    fn build_coface_index(&mut self) {
        let mut cofaces = Vec::new();
        for k in 0..self.dims.len().saturating_sub(1) {
            let mut index = vec![Vec::new(); self.dims[k].len()];
            let upper = &self.dims[k + 1];
            for idx in 0..upper.len() {
                let s = upper.get(idx);
                for i in 0..s.len() {
                    let f = face(s, i);
                    let fid = self.dims[k].find(&f).expect("face of a stored simplex is stored");
                    index[fid as usize].push(idx as u32);
                }
            }
            for list in &mut index {
                list.sort_unstable();
                list.dedup();
            }
            cofaces.push(index);
        }
        self.cofaces = cofaces;
    }

    /// Dimension of the complex (its highest-dimensional simplex).
    pub fn dim(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Number of k-simplices.
    pub fn count(&self, k: usize) -> usize {
        self.dims.get(k).map_or(0, DimStore::len)
    }

    /// Simplex counts per dimension, `counts[k]` = number of k-simplices.
    pub fn simplex_counts(&self) -> Vec<usize> {
        self.dims.iter().map(DimStore::len).collect()
    }

    /// Total number of stored simplices.
    pub fn total(&self) -> usize {
        self.dims.iter().map(DimStore::len).sum()
    }

    /// Number of simplices of dimension >= q (the size of K_q).
    pub fn count_from(&self, q: usize) -> usize {
        (q..self.dims.len()).map(|k| self.count(k)).sum()
    }

    /// Vertex tuple of a stored simplex.
    pub fn simplex(&self, id: SimplexId) -> &[u32] {
        self.dims[id.dim as usize].get(id.idx as usize)
    }

    /// Looks up the id of a tuple, if stored.
    pub fn find(&self, tuple: &[u32]) -> Option<SimplexId> {
        let dim = tuple.len().checked_sub(1)?;
        let store = self.dims.get(dim)?;
        store.find(tuple).map(|idx| SimplexId { dim: dim as u32, idx })
    }

    /// Iterates over `(id, tuple)` of all k-simplices in lexicographic order.
    pub fn simplices(&self, k: usize) -> impl Iterator<Item = (SimplexId, &[u32])> + '_ {
        let store = self.dims.get(k);
        (0..store.map_or(0, DimStore::len)).map(move |idx| {
            let store = store.unwrap();
            (SimplexId { dim: k as u32, idx: idx as u32 }, store.get(idx))
        })
    }

    /// Ids of the (k+1)-simplices having k-simplex `id` as a codimension-1
    /// face.
    pub fn cofaces(&self, id: SimplexId) -> &[u32] {
        match self.cofaces.get(id.dim as usize) {
            Some(index) => &index[id.idx as usize],
            None => &[],
        }
    }

    /// Writes the text store: a `dim k` header per dimension, then one
    /// simplex per line as space-separated vertex ids.
    pub fn write_store<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (k, store) in self.dims.iter().enumerate() {
            writeln!(w, "dim {k}")?;
            for idx in 0..store.len() {
                let s = store.get(idx);
                let line: Vec<String> = s.iter().map(|v| v.to_string()).collect();
                writeln!(w, "{}", line.join(" "))?;
            }
        }
        Ok(())
    }

    /// Reads a text store written by [`write_store`](Self::write_store),
    /// validating canonical order and closure under faces.
    pub fn read_store<R: BufRead>(reader: R) -> Result<Self, StoreError> {
        let mut dims: Vec<DimStore> = Vec::new();
        let mut current: Option<usize> = None;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let content = line.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            if let Some(rest) = content.strip_prefix("dim ") {
                let k: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| StoreError::Malformed { line: lineno, found: content.to_string() })?;
                if dims.len() <= k {
                    dims.resize_with(k + 1, DimStore::default);
                }
                dims[k].tuple_len = k + 1;
                current = Some(k);
                continue;
            }
            let k = current
                .ok_or_else(|| StoreError::Malformed { line: lineno, found: content.to_string() })?;
            let mut tuple = Vec::with_capacity(k + 1);
            for tok in content.split_whitespace() {
                let v: u32 = tok
                    .parse()
                    .map_err(|_| StoreError::Malformed { line: lineno, found: content.to_string() })?;
                tuple.push(v);
            }
            if tuple.len() != k + 1 {
                return Err(StoreError::WrongSection { line: lineno, got: tuple.len(), dim: k });
            }
            let mut seen = tuple.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != tuple.len() {
                return Err(StoreError::RepeatedVertex { line: lineno });
            }
            dims[k].verts.extend_from_slice(&tuple);
        }
        while dims.last().is_some_and(|d| d.verts.is_empty()) {
            dims.pop();
        }
        for (k, store) in dims.iter().enumerate() {
            for idx in 1..store.len() {
                if store.get(idx - 1) >= store.get(idx) {
                    return Err(StoreError::NotCanonical { dim: k });
                }
            }
        }
        // Closure: every face of a stored simplex must be stored.
        for k in 1..dims.len() {
            for idx in 0..dims[k].len() {
                let s = dims[k].get(idx).to_vec();
                for i in 0..s.len() {
                    let f = face(&s, i);
                    if dims[k - 1].find(&f).is_none() {
                        return Err(StoreError::MissingFace(s));
                    }
                }
            }
        }
        let mut complex = DirectedFlagComplex { dims, cofaces: Vec::new() };
        complex.build_coface_index();
        Ok(complex)
    }
}

fn extend_simplex(
    g: &Digraph,
    prefix: &mut Vec<u32>,
    candidates: &[u32],
    cap: usize,
    local: &mut Vec<Vec<u32>>,
) {
    for &w in candidates {
        prefix.push(w);
        let dim = prefix.len() - 1;
        if local.len() <= dim {
            local.resize_with(dim + 1, Vec::new);
        }
        local[dim].extend_from_slice(prefix);
        if dim < cap {
            let next: Vec<u32> = intersect_sorted(candidates, g.out_neighbors(w));
            if !next.is_empty() {
                extend_simplex(g, prefix, &next, cap, local);
            }
        }
        prefix.pop();
    }
}

fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

//! Directed-graph data model and ingestion from edge lists and adjacency
//! matrices.
//!
//! A [`Digraph`] is a simple directed graph without self-loops; reciprocal
//! pairs `(v,w)` and `(w,v)` may both be present. Vertices are dense integer
//! ids `0..n`. Loaders can optionally remap sparse external ids to dense ones
//! and record the dictionary.

use std::io::{self, BufRead, Write};

use thiserror::Error;

/// Errors raised while loading a digraph from an external file.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("line {line}: self-loop ({v},{v}) is not allowed")]
    SelfLoop { line: usize, v: u64 },
    #[error("line {line}: expected two whitespace-separated vertex ids, got {found:?}")]
    Malformed { line: usize, found: String },
    #[error("line {line}: vertex id {id} exceeds the declared vertex count {n}")]
    VertexOutOfRange { line: usize, id: u64, n: usize },
    #[error("adjacency matrix is not square: row {row} has {got} entries, expected {expected}")]
    NonSquare { row: usize, got: usize, expected: usize },
    #[error("adjacency matrix row {row}: nonzero diagonal entry")]
    NonzeroDiagonal { row: usize },
    #[error("adjacency matrix row {row}, column {col}: entry {entry:?} is not 0 or 1")]
    NonBinary { row: usize, col: usize, entry: String },
    #[error("adjacency matrix is empty")]
    EmptyMatrix,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Options for the edge-list loader.
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Force the vertex count instead of deriving it as `1 + max id`.
    pub num_vertices: Option<usize>,
    /// Remap sparse external ids to dense ids in order of first appearance
    /// and record the dictionary.
    pub remap_ids: bool,
}

/// A simple loop-free directed graph with dense vertex ids.
///
/// Immutable after load; safe to share read-only across parallel workers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    /// Sorted out-neighbour lists, one per vertex.
    out_neighbors: Vec<Vec<u32>>,
    num_edges: usize,
    /// Original external ids, present when the loader remapped sparse ids.
    /// `external_ids[v]` is the id vertex `v` had in the input.
    external_ids: Option<Vec<u64>>,
}

impl Digraph {
    /// Builds a digraph from explicit edges. Self-loops and out-of-range
    /// endpoints panic; duplicate edges collapse.
    pub fn from_edges(num_vertices: usize, edges: &[(u32, u32)]) -> Self {
        let mut out = vec![Vec::new(); num_vertices];
        for &(src, dst) in edges {
            assert_ne!(src, dst, "self-loop ({src},{src})");
            assert!((src as usize) < num_vertices && (dst as usize) < num_vertices);
            out[src as usize].push(dst);
        }
        Self::from_out_lists(out)
    }

    fn from_out_lists(mut out: Vec<Vec<u32>>) -> Self {
        let mut num_edges = 0;
        for list in &mut out {
            list.sort_unstable();
            list.dedup();
            num_edges += list.len();
        }
        Digraph { out_neighbors: out, num_edges, external_ids: None }
    }

    pub fn num_vertices(&self) -> usize {
        self.out_neighbors.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    /// Sorted out-neighbours of `v`.
    pub fn out_neighbors(&self, v: u32) -> &[u32] {
        &self.out_neighbors[v as usize]
    }

    pub fn has_edge(&self, src: u32, dst: u32) -> bool {
        self.out_neighbors[src as usize].binary_search(&dst).is_ok()
    }

    /// All edges in `(source, target)` order, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.out_neighbors
            .iter()
            .enumerate()
            .flat_map(|(src, dsts)| dsts.iter().map(move |&dst| (src as u32, dst)))
    }

    /// The recorded external-id dictionary, when the loader remapped ids.
    pub fn external_ids(&self) -> Option<&[u64]> {
        self.external_ids.as_deref()
    }

    /// Loads an edge list: one `src dst` pair per line, `#` comments and
    /// blank lines ignored. Duplicate edges collapse; self-loops are an
    /// error. The vertex count is `1 + max id` unless overridden.
    pub fn from_edge_list<R: BufRead>(reader: R, opts: &LoadOptions) -> Result<Self, LoadError> {
        let mut raw_edges: Vec<(u64, u64)> = Vec::new();
        let mut max_id: u64 = 0;
        let mut saw_vertex = false;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let content = match line.find('#') {
                Some(pos) => &line[..pos],
                None => &line[..],
            };
            let mut it = content.split_whitespace();
            let (a, b) = match (it.next(), it.next()) {
                (None, _) => continue,
                (Some(a), Some(b)) if it.next().is_none() => (a, b),
                _ => {
                    return Err(LoadError::Malformed { line: lineno, found: content.trim().to_string() })
                }
            };
            let parse = |tok: &str| {
                tok.parse::<u64>().map_err(|_| LoadError::Malformed {
                    line: lineno,
                    found: content.trim().to_string(),
                })
            };
            let (src, dst) = (parse(a)?, parse(b)?);
            if src == dst {
                return Err(LoadError::SelfLoop { line: lineno, v: src });
            }
            if let Some(n) = opts.num_vertices {
                if !opts.remap_ids {
                    for id in [src, dst] {
                        if id >= n as u64 {
                            return Err(LoadError::VertexOutOfRange { line: lineno, id, n });
                        }
                    }
                }
            }
            max_id = max_id.max(src).max(dst);
            saw_vertex = true;
            raw_edges.push((src, dst));
        }

        let (edges, external_ids, derived_n) = if opts.remap_ids {
            let mut dict: Vec<u64> = Vec::new();
            let mut map = std::collections::HashMap::new();
            let mut dense = Vec::with_capacity(raw_edges.len());
            for (src, dst) in raw_edges {
                let mut id_of = |v: u64| {
                    *map.entry(v).or_insert_with(|| {
                        dict.push(v);
                        (dict.len() - 1) as u32
                    })
                };
                let e = (id_of(src), id_of(dst));
                dense.push(e);
            }
            let n = dict.len();
            (dense, Some(dict), n)
        } else {
            let dense = raw_edges.iter().map(|&(s, d)| (s as u32, d as u32)).collect();
            let n = if saw_vertex { max_id as usize + 1 } else { 0 };
            (dense, None, n)
        };

        let n = opts.num_vertices.unwrap_or(derived_n).max(derived_n);
        let mut out = vec![Vec::new(); n];
        for (src, dst) in edges {
            out[src as usize].push(dst);
        }
        let mut g = Self::from_out_lists(out);
        g.external_ids = external_ids;
        Ok(g)
    }

    /// Loads a dense 0/1 adjacency matrix, one row per line with comma- or
    /// whitespace-separated entries. Edge `(i,j)` iff entry `(i,j)` is 1;
    /// the diagonal must be all zeros.
    pub fn from_adjacency_matrix<R: BufRead>(reader: R) -> Result<Self, LoadError> {
        let mut rows: Vec<Vec<u8>> = Vec::new();
        for line in reader.lines() {
            let line = line?;
            let content = match line.find('#') {
                Some(pos) => &line[..pos],
                None => &line[..],
            };
            if content.trim().is_empty() {
                continue;
            }
            let row_idx = rows.len();
            let mut row = Vec::new();
            for (col, tok) in content.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).enumerate() {
                let entry = match tok {
                    "0" => 0,
                    "1" => 1,
                    _ => {
                        return Err(LoadError::NonBinary { row: row_idx, col, entry: tok.to_string() })
                    }
                };
                row.push(entry);
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(LoadError::EmptyMatrix);
        }
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(LoadError::NonSquare { row: i, got: row.len(), expected: n });
            }
            if row[i] != 0 {
                return Err(LoadError::NonzeroDiagonal { row: i });
            }
        }
        let out = rows
            .iter()
            .map(|row| {
                row.iter().enumerate().filter(|&(_, &e)| e == 1).map(|(j, _)| j as u32).collect()
            })
            .collect();
        Ok(Self::from_out_lists(out))
    }

    /// Writes the edge-list form: one `src dst` per line, sorted.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (src, dst) in self.edges() {
            writeln!(w, "{src} {dst}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn load(text: &str) -> Result<Digraph, LoadError> {
        Digraph::from_edge_list(Cursor::new(text), &LoadOptions::default())
    }

    #[test]
    fn edge_list_basic() {
        let g = load("0 1\n1 2\n2 0").unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.num_edges(), 3);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && g.has_edge(2, 0));
        assert!(!g.has_edge(1, 0));
    }

    #[test]
    fn edge_list_reciprocal_pair() {
        let g = load("0 1\n1 0").unwrap();
        assert_eq!(g.num_vertices(), 2);
        assert_eq!(g.num_edges(), 2);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0));
    }

    #[test]
    fn edge_list_rejects_self_loop_with_line() {
        let err = load("0 1\n2 2").unwrap_err();
        match err {
            LoadError::SelfLoop { line, v } => {
                assert_eq!(line, 2);
                assert_eq!(v, 2);
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn edge_list_rejects_malformed_token() {
        let err = load("0 x").unwrap_err();
        assert!(matches!(err, LoadError::Malformed { line: 1, .. }));
        let err = load("0 1 2").unwrap_err();
        assert!(matches!(err, LoadError::Malformed { line: 1, .. }));
    }

    #[test]
    fn edge_list_comments_blanks_duplicates() {
        let g = load("# header\n\n0 1 # trailing\n0 1\n1 2\n").unwrap();
        assert_eq!(g.num_edges(), 2);
    }

    #[test]
    fn edge_list_vertex_count_override() {
        let opts = LoadOptions { num_vertices: Some(5), ..Default::default() };
        let g = Digraph::from_edge_list(Cursor::new("0 1"), &opts).unwrap();
        assert_eq!(g.num_vertices(), 5);
        let opts = LoadOptions { num_vertices: Some(1), ..Default::default() };
        let err = Digraph::from_edge_list(Cursor::new("0 1"), &opts).unwrap_err();
        assert!(matches!(err, LoadError::VertexOutOfRange { .. }));
    }

    #[test]
    fn edge_list_remaps_sparse_ids() {
        let opts = LoadOptions { remap_ids: true, ..Default::default() };
        let g = Digraph::from_edge_list(Cursor::new("100 7\n7 100\n7 42"), &opts).unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.external_ids(), Some(&[100, 7, 42][..]));
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0) && g.has_edge(1, 2));
    }

    #[test]
    fn adjacency_matrix_basic() {
        let g = Digraph::from_adjacency_matrix(Cursor::new("0,1\n0,0")).unwrap();
        assert_eq!(g.num_vertices(), 2);
        assert_eq!(g.num_edges(), 1);
        assert!(g.has_edge(0, 1));
        let g = Digraph::from_adjacency_matrix(Cursor::new("0 1\n1 0")).unwrap();
        assert_eq!(g.num_edges(), 2);
    }

    #[test]
    fn adjacency_matrix_rejects_bad_input() {
        assert!(matches!(
            Digraph::from_adjacency_matrix(Cursor::new("1,0\n0,0")),
            Err(LoadError::NonzeroDiagonal { row: 0 })
        ));
        assert!(matches!(
            Digraph::from_adjacency_matrix(Cursor::new("0,1,0\n0,0,1")),
            Err(LoadError::NonSquare { .. })
        ));
        assert!(matches!(
            Digraph::from_adjacency_matrix(Cursor::new("0,2\n0,0")),
            Err(LoadError::NonBinary { .. })
        ));
    }

    #[test]
    fn loaders_agree_and_round_trip() {
        let from_edges = load("0 1\n1 2\n2 0\n0 2").unwrap();
        let from_matrix =
            Digraph::from_adjacency_matrix(Cursor::new("0,1,1\n0,0,1\n1,0,0")).unwrap();
        assert_eq!(from_edges, from_matrix);

        let mut buf = Vec::new();
        from_edges.write_edge_list(&mut buf).unwrap();
        let reloaded = Digraph::from_edge_list(Cursor::new(buf), &LoadOptions::default()).unwrap();
        assert_eq!(from_edges, reloaded);
    }
}

//! Finite-space invariants of connectivity posets: order complexes, Z2
//! simplicial homology and poset height.
//!
//! A finite poset carries the weak homotopy type of its order complex, the
//! simplicial complex of its chains. Betti numbers are computed over the
//! two-element field by boundary-matrix rank.

use thiserror::Error;

use crate::flagcomplex::DirectedFlagComplex;
use crate::qclassic::SimplicialComplexView;

/// Default ceiling on the number of chains an order complex may produce.
pub const DEFAULT_CHAIN_CEILING: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("chain ceiling {ceiling} exceeded while enumerating the order complex")]
    CeilingExceeded { ceiling: u64 },
}

/// A finite poset given by strict order edges (Hasse form, possibly with
/// transitive edges); the order relation is edge reachability.
#[derive(Debug, Clone)]
pub struct Poset {
    n: usize,
    hasse: Vec<(u32, u32)>,
    out: Vec<Vec<u32>>,
    topo: Vec<u32>,
}

impl Poset {
    /// Builds a poset from strict order edges. Panics if the edges contain
    /// a cycle.
    pub fn new(n: usize, edges: Vec<(u32, u32)>) -> Self {
        let mut out = vec![Vec::new(); n];
        for &(a, b) in &edges {
            assert_ne!(a, b, "strict order has no loops");
            out[a as usize].push(b);
        }
        for list in &mut out {
            list.sort_unstable();
            list.dedup();
        }
        let mut indeg = vec![0usize; n];
        for list in &out {
            for &b in list {
                indeg[b as usize] += 1;
            }
        }
        let mut queue: Vec<u32> = (0..n as u32).filter(|&v| indeg[v as usize] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            topo.push(v);
            for &w in &out[v as usize] {
                indeg[w as usize] -= 1;
                if indeg[w as usize] == 0 {
                    queue.push(w);
                }
            }
        }
        assert_eq!(topo.len(), n, "order relation contains a cycle");
        Poset { n, hasse: edges, out, topo }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// The strict order edges this poset was built from.
    pub fn hasse(&self) -> &[(u32, u32)] {
        &self.hasse
    }

    pub fn successors(&self, v: u32) -> &[u32] {
        &self.out[v as usize]
    }

    /// Per-element bitsets of strictly greater elements (edge reachability).
    pub fn up_sets(&self) -> Vec<Vec<u64>> {
        let words = self.n.div_ceil(64);
        let mut reach = vec![vec![0u64; words]; self.n];
        for &v in self.topo.iter().rev() {
            let mut acc = vec![0u64; words];
            for &w in &self.out[v as usize] {
                acc[(w as usize) / 64] |= 1 << (w % 64);
                for (a, b) in acc.iter_mut().zip(&reach[w as usize]) {
                    *a |= *b;
                }
            }
            reach[v as usize] = acc;
        }
        reach
    }

    /// True iff `a < b` in the order.
    pub fn less(&self, a: u32, b: u32, up_sets: &[Vec<u64>]) -> bool {
        up_sets[a as usize][(b as usize) / 64] >> (b % 64) & 1 == 1
    }
}

/// Length in edges of the longest chain of the poset.
pub fn poset_height(p: &Poset) -> usize {
    let mut best = vec![0usize; p.n];
    let mut height = 0;
    for &v in p.topo.iter().rev() {
        for &w in &p.out[v as usize] {
            best[v as usize] = best[v as usize].max(best[w as usize] + 1);
        }
        height = height.max(best[v as usize]);
    }
    height
}

/// The order complex: all non-empty chains of the poset as simplices, up
/// to `max_dim` (chains of at most max_dim+1 elements).
pub fn order_complex(
    p: &Poset,
    max_dim: Option<usize>,
    ceiling: u64,
) -> Result<SimplicialComplexView, ChainError> {
    let cap = max_dim.unwrap_or(usize::MAX);
    let up = p.up_sets();
    let mut chains: Vec<Vec<u32>> = Vec::new();
    let mut count: u64 = 0;
    // Chains are extended at their top element, so each chain is produced
    // exactly once; every subset of a chain is a chain, so the result is
    // closed under subsets.
    let mut stack: Vec<Vec<u32>> = (0..p.n as u32).rev().map(|v| vec![v]).collect();
    while let Some(chain) = stack.pop() {
        count += 1;
        if count > ceiling {
            return Err(ChainError::CeilingExceeded { ceiling });
        }
        let top = *chain.last().unwrap();
        if chain.len() <= cap {
            for w in 0..p.n as u32 {
                if p.less(top, w, &up) {
                    let mut ext = chain.clone();
                    ext.push(w);
                    stack.push(ext);
                }
            }
        }
        chains.push(chain);
    }
    Ok(SimplicialComplexView::from_simplices(chains, u64::MAX)
        .expect("chain sets are already closed"))
}

/// A dense bit matrix over the two-element field.
#[derive(Debug, Clone)]
pub struct BitMatrix {
    rows: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        BitMatrix { rows, words, data: vec![0; rows * words] }
    }

    pub fn set(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] ^= 1 << (c % 64);
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Rank by Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<&[u64]> = Vec::new();
        let mut basis: Vec<Vec<u64>> = Vec::new();
        for r in 0..self.rows {
            rows.push(&self.data[r * self.words..(r + 1) * self.words]);
        }
        for row in rows {
            let mut cur = row.to_vec();
            for b in &basis {
                let pivot = b.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| (i, w.trailing_zeros()));
                if let Some((wi, bit)) = pivot {
                    if cur[wi] >> bit & 1 == 1 {
                        for (c, &bw) in cur.iter_mut().zip(b) {
                            *c ^= bw;
                        }
                    }
                }
            }
            if cur.iter().any(|&w| w != 0) {
                basis.push(cur);
            }
        }
        basis.len()
    }
}

/// Per-dimension boundary matrices over the two-element field.
pub struct ChainComplexZ2 {
    /// Number of k-cells.
    pub dims: Vec<usize>,
    /// `boundaries[k]` is the matrix of the boundary map from (k+1)-chains
    /// to k-chains: one row per (k+1)-cell, columns indexed by k-cells.
    pub boundaries: Vec<BitMatrix>,
}

impl ChainComplexZ2 {
    /// Chain complex of an unordered complex: the boundary of a simplex is
    /// the sum of its codimension-1 faces.
    pub fn from_view(view: &SimplicialComplexView) -> Self {
        let top = if view.is_empty() { 0 } else { view.dim() };
        let dims: Vec<usize> = (0..=top).map(|k| view.count(k)).collect();
        let mut boundaries = Vec::new();
        for k in 0..top {
            let mut m = BitMatrix::zero(view.count(k + 1), view.count(k));
            for (idx, s) in view.simplices(k + 1) {
                let mut f = Vec::with_capacity(s.len() - 1);
                for drop in 0..s.len() {
                    f.clear();
                    f.extend(s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v));
                    let (_, fi) = view.find(&f).expect("closed under subsets");
                    m.set(idx, fi);
                }
            }
            boundaries.push(m);
        }
        ChainComplexZ2 { dims, boundaries }
    }

    /// Chain complex of an ordered complex: ordered simplices are distinct
    /// cells, glued by the face maps. This is what distinguishes e.g.
    /// `(0 1)` from `(1 0)`.
    pub fn from_flag_complex(c: &DirectedFlagComplex) -> Self {
        let top = if c.is_empty() { 0 } else { c.dim() };
        let dims: Vec<usize> = (0..=top).map(|k| c.count(k)).collect();
        let mut boundaries = Vec::new();
        for k in 0..top {
            let mut m = BitMatrix::zero(c.count(k + 1), c.count(k));
            for (id, s) in c.simplices(k + 1) {
                for i in 0..s.len() {
                    let f = crate::flagcomplex::face(s, i);
                    let fid = c.find(&f).expect("closure");
                    m.set(id.idx as usize, fid.idx as usize);
                }
            }
            boundaries.push(m);
        }
        ChainComplexZ2 { dims, boundaries }
    }

    /// Verifies the boundary-of-boundary identity on every pair of
    /// consecutive matrices.
    pub fn dd_is_zero(&self) -> bool {
        for k in 1..self.boundaries.len() {
            let upper = &self.boundaries[k];
            let lower = &self.boundaries[k - 1];
            for r in 0..upper.rows {
                let mut acc = vec![0u64; lower.words];
                for c in 0..lower.rows {
                    if upper.data[r * upper.words + c / 64] >> (c % 64) & 1 == 1 {
                        for (a, &b) in
                            acc.iter_mut().zip(&lower.data[c * lower.words..(c + 1) * lower.words])
                        {
                            *a ^= b;
                        }
                    }
                }
                if acc.iter().any(|&w| w != 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Unreduced Betti numbers up to `up_to` (inclusive, clamped to the
    /// dimension of the complex).
    pub fn betti(&self, up_to: usize) -> Vec<usize> {
        let top = self.dims.len() - 1;
        let ranks: Vec<usize> = self.boundaries.iter().map(BitMatrix::rank).collect();
        let rank_at = |k: usize| if k == 0 || k > top { 0 } else { ranks[k - 1] };
        (0..=up_to.min(top)).map(|k| self.dims[k] - rank_at(k) - rank_at(k + 1)).collect()
    }

    /// Euler characteristic from cell counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }
}

/// Betti numbers of an unordered simplicial complex over the two-element
/// field.
pub fn betti_z2(view: &SimplicialComplexView, up_to: usize) -> Vec<usize> {
    ChainComplexZ2::from_view(view).betti(up_to)
}

/// Betti numbers of a directed flag complex, with ordered simplices as
/// distinct cells.
pub fn betti_z2_flag(c: &DirectedFlagComplex, up_to: usize) -> Vec<usize> {
    ChainComplexZ2::from_flag_complex(c).betti(up_to)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Digraph;

    fn chain_poset(n: usize) -> Poset {
        Poset::new(n, (1..n as u32).map(|i| (i - 1, i)).collect())
    }

    #[test]
    fn order_complex_antichain() {
        let p = Poset::new(3, vec![]);
        let v = order_complex(&p, None, DEFAULT_CHAIN_CEILING).unwrap();
        assert_eq!(v.simplex_counts(), vec![3]);
    }

    #[test]
    fn order_complex_chain_is_full_simplex() {
        let v = order_complex(&chain_poset(3), None, DEFAULT_CHAIN_CEILING).unwrap();
        assert_eq!(v.simplex_counts(), vec![3, 3, 1]);
    }

    #[test]
    fn order_complex_respects_max_dim() {
        let v = order_complex(&chain_poset(4), Some(1), DEFAULT_CHAIN_CEILING).unwrap();
        assert_eq!(v.simplex_counts(), vec![4, 6]);
    }

    #[test]
    fn order_complex_guard() {
        assert!(matches!(
            order_complex(&chain_poset(10), None, 8),
            Err(ChainError::CeilingExceeded { ceiling: 8 })
        ));
    }

    #[test]
    fn poset_height_examples() {
        assert_eq!(poset_height(&Poset::new(3, vec![])), 0);
        assert_eq!(poset_height(&chain_poset(4)), 3);
        let full = SimplicialComplexView::from_simplices(vec![vec![0, 1, 2]], 1 << 20).unwrap();
        assert_eq!(poset_height(&crate::qclassic::face_poset(&full)), 2);
    }

    #[test]
    #[should_panic(expected = "cycle")]
    fn poset_rejects_cycles() {
        Poset::new(2, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn betti_of_sphere_flag_complex() {
        let g = Digraph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (2, 1), (1, 3), (2, 3)]);
        let c = crate::flagcomplex::DirectedFlagComplex::build(&g, None, 1 << 30).unwrap();
        assert_eq!(betti_z2_flag(&c, 2), vec![1, 0, 1]);
        let cc = ChainComplexZ2::from_flag_complex(&c);
        assert!(cc.dd_is_zero());
        assert_eq!(cc.euler_characteristic(), 2);
    }

    #[test]
    fn betti_of_unordered_view() {
        // Hollow triangle: a circle.
        let v = SimplicialComplexView::from_simplices(
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            1 << 20,
        )
        .unwrap();
        assert_eq!(betti_z2(&v, 2), vec![1, 1]);
        // Tetrahedron boundary: a 2-sphere.
        let t = SimplicialComplexView::from_simplices(
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
            1 << 20,
        )
        .unwrap();
        assert_eq!(betti_z2(&t, 2), vec![1, 0, 1]);
    }

    #[test]
    fn face_poset_order_complex_preserves_betti() {
        let t = SimplicialComplexView::from_simplices(
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
            1 << 20,
        )
        .unwrap();
        let p = crate::qclassic::face_poset(&t);
        let oc = order_complex(&p, None, DEFAULT_CHAIN_CEILING).unwrap();
        assert_eq!(betti_z2(&oc, 2), betti_z2(&t, 2));
    }
}

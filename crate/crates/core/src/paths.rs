//! Longest simplicial path extraction and path fractions.
//!
//! The longest path of the condensation DAG is found by dynamic
//! programming over a topological order, then augmented back to a path of
//! simplices: singleton components are appended directly, multi-member
//! components contribute the longest of the shortest internal paths
//! between the entry points forced by the previous simplex and the exit
//! points that can continue into the next component.
//!
//! All tie-breaking is lexicographic on canonical node ids, so results are
//! reproducible.

use serde::Serialize;
use thiserror::Error;

use crate::flagcomplex::{self, DirectedFlagComplex};
use crate::qdirected::{condense, directed_q_near, Condensation, ConnectionSpec, ConnectivityDigraph, DirectedError};

/// Default number of condensation-path candidates tried before giving up
/// on augmentation.
pub const DEFAULT_AUGMENT_RETRIES: usize = 32;

#[derive(Debug, Error)]
pub enum PathError {
    #[error(transparent)]
    Empty(#[from] DirectedError),
    #[error("no condensation path admits an internal augmentation after {attempts} attempts")]
    Infeasible { attempts: usize },
}

/// A realised simplicial path together with its path fraction.
#[derive(Debug, Clone, Serialize)]
pub struct SimplicialPath {
    pub spec: ConnectionSpec,
    /// The simplices on the path, in order.
    pub simplices: Vec<Vec<u32>>,
    /// Number of simplices on the path.
    pub length: usize,
    /// Path fraction as an exact ratio.
    pub fraction: f64,
    pub fraction_num: u64,
    pub fraction_den: u64,
    /// Component sizes along the condensation path that was augmented.
    pub condensation_path_node_sizes: Vec<usize>,
}

/// Longest path of the condensation DAG as a list of component ids; among
/// equal-length paths the lexicographically smallest id sequence.
pub fn longest_condensation_path(c: &Condensation) -> Vec<u32> {
    let dp = longest_from(c);
    let best = dp.iter().copied().max().unwrap_or(0);
    let mut paths = enumerate_paths(c, &dp, best, 1);
    paths.pop().expect("non-empty condensation has a longest path")
}

/// dp[v] = maximum node count of a directed path starting at v.
fn longest_from(c: &Condensation) -> Vec<u32> {
    let n = c.num_nodes();
    let mut dp = vec![0u32; n];
    let order = topo_order(c);
    for &v in order.iter().rev() {
        let best = c.successors(v).iter().map(|&w| dp[w as usize]).max().unwrap_or(0);
        dp[v as usize] = best + 1;
    }
    dp
}

fn topo_order(c: &Condensation) -> Vec<u32> {
    let n = c.num_nodes();
    let mut indeg = vec![0usize; n];
    for &(_, v) in c.edges() {
        indeg[v as usize] += 1;
    }
    let mut queue: Vec<u32> = (0..n as u32).filter(|&v| indeg[v as usize] == 0).collect();
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        for &w in c.successors(v) {
            indeg[w as usize] -= 1;
            if indeg[w as usize] == 0 {
                queue.push(w);
            }
        }
    }
    assert_eq!(queue.len(), n, "condensation contains a cycle");
    queue
}

/// Enumerates directed paths with exactly `len` nodes in lexicographic
/// order, up to `bound` of them.
fn enumerate_paths(c: &Condensation, dp: &[u32], len: u32, bound: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    if len == 0 {
        return out;
    }
    let mut prefix: Vec<u32> = Vec::new();
    fn rec(
        c: &Condensation,
        dp: &[u32],
        len: u32,
        bound: usize,
        prefix: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if out.len() >= bound {
            return;
        }
        if prefix.len() == len as usize {
            out.push(prefix.clone());
            return;
        }
        let remaining = len - prefix.len() as u32;
        match prefix.last().copied() {
            None => {
                for v in 0..c.num_nodes() as u32 {
                    if dp[v as usize] >= remaining {
                        prefix.push(v);
                        rec(c, dp, len, bound, prefix, out);
                        prefix.pop();
                        if out.len() >= bound {
                            return;
                        }
                    }
                }
            }
            Some(last) => {
                for &w in c.successors(last) {
                    if dp[w as usize] >= remaining {
                        prefix.push(w);
                        rec(c, dp, len, bound, prefix, out);
                        prefix.pop();
                        if out.len() >= bound {
                            return;
                        }
                    }
                }
            }
        }
    }
    rec(c, dp, len, bound, &mut prefix, &mut out);
    out
}

/// Augments a condensation path to a path of digraph nodes following the
/// four-case loop: singletons pass through; a multi-member component
/// contributes the longest of the shortest internal paths from its forced
/// sources to its forced targets.
pub fn augment_path(
    c: &Condensation,
    g: &ConnectivityDigraph,
    p: &[u32],
) -> Result<Vec<u32>, PathError> {
    let mut out: Vec<u32> = Vec::new();
    let mut current: Option<u32> = None;
    for (k, &comp) in p.iter().enumerate() {
        let members = c.members(comp);
        if members.len() == 1 {
            out.push(members[0]);
            current = Some(members[0]);
            continue;
        }
        let sources: Vec<u32> = match current {
            None => members.to_vec(),
            Some(cur) => {
                g.successors(cur).iter().copied().filter(|v| members.binary_search(v).is_ok()).collect()
            }
        };
        let targets: Vec<u32> = if k + 1 == p.len() {
            members.to_vec()
        } else {
            let next = c.members(p[k + 1]);
            members
                .iter()
                .copied()
                .filter(|&v| g.successors(v).iter().any(|w| next.binary_search(w).is_ok()))
                .collect()
        };
        if sources.is_empty() || targets.is_empty() {
            return Err(PathError::Infeasible { attempts: 1 });
        }
        let segment = longest_of_shortest(g, members, &sources, &targets)
            .ok_or(PathError::Infeasible { attempts: 1 })?;
        out.extend_from_slice(&segment);
        current = Some(*segment.last().unwrap());
    }
    Ok(out)
}

/// In the subgraph induced by `members`, the longest among the shortest
/// source-to-target paths; ties resolved towards the lexicographically
/// smallest source, target, then path.
fn longest_of_shortest(
    g: &ConnectivityDigraph,
    members: &[u32],
    sources: &[u32],
    targets: &[u32],
) -> Option<Vec<u32>> {
    let local_of: std::collections::HashMap<u32, u32> =
        members.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
    let n = members.len();
    let mut fwd = vec![Vec::new(); n];
    let mut rev = vec![Vec::new(); n];
    for (li, &v) in members.iter().enumerate() {
        for &w in g.successors(v) {
            if let Some(&lw) = local_of.get(&w) {
                fwd[li].push(lw);
                rev[lw as usize].push(li as u32);
            }
        }
    }
    for list in fwd.iter_mut().chain(rev.iter_mut()) {
        list.sort_unstable();
    }

    let bfs = |start: u32, adj: &[Vec<u32>]| {
        let mut dist = vec![u32::MAX; n];
        dist[start as usize] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[v as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    };

    let mut best: Option<(u32, u32, u32)> = None; // (dist, source, target), source/target local
    for &s in sources {
        let ls = local_of[&s];
        let dist = bfs(ls, &fwd);
        for &t in targets {
            let lt = local_of[&t];
            if dist[lt as usize] == u32::MAX {
                continue;
            }
            let cand = (dist[lt as usize], s, t);
            best = Some(match best {
                None => cand,
                Some(cur) => {
                    if cand.0 > cur.0 || (cand.0 == cur.0 && (cand.1, cand.2) < (cur.1, cur.2)) {
                        cand
                    } else {
                        cur
                    }
                }
            });
        }
    }
    let (d, s, t) = best?;
    let (ls, lt) = (local_of[&s], local_of[&t]);
    let dist_from = bfs(ls, &fwd);
    let dist_to = bfs(lt, &rev);
    // Walk forward, always taking the smallest next node that stays on a
    // shortest path.
    let mut path = vec![members[ls as usize]];
    let mut cur = ls;
    while cur != lt {
        let step = dist_from[cur as usize];
        let next = fwd[cur as usize]
            .iter()
            .copied()
            .filter(|&w| {
                dist_from[w as usize] == step + 1 && dist_to[w as usize] + step + 1 == d
            })
            .min()
            .expect("shortest path walk");
        path.push(members[next as usize]);
        cur = next;
    }
    Some(path)
}

/// Path fraction: distinct vertices on the path over the vertex budget of
/// an ideal path with the same dimensions glued strictly through q-faces.
/// Returned as an exact `(numerator, denominator)` pair.
pub fn path_fraction(simplices: &[Vec<u32>], q: usize) -> (u64, u64) {
    assert!(!simplices.is_empty(), "path fraction of an empty path");
    let mut verts: Vec<u32> = simplices.iter().flatten().copied().collect();
    verts.sort_unstable();
    verts.dedup();
    let mut budget: u64 = simplices[0].len() as u64; // dim + 1
    for pair in simplices.windows(2) {
        let (prev, cur) = (&pair[0], &pair[1]);
        budget += if flagcomplex::is_face(prev, cur) {
            (cur.len() - prev.len()) as u64
        } else {
            (cur.len() - 1 - q) as u64
        };
    }
    let g = gcd(verts.len() as u64, budget);
    (verts.len() as u64 / g, budget / g)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// End-to-end longest simplicial path: build the connectivity digraph,
/// condense, take the longest condensation path, augment, and compute the
/// fraction. When a candidate path admits no augmentation the next
/// candidate (same length, then shorter) is tried, up to `retries`.
pub fn longest_simplicial_path(
    complex: &DirectedFlagComplex,
    spec: ConnectionSpec,
    retries: usize,
) -> Result<SimplicialPath, PathError> {
    let g = ConnectivityDigraph::build(complex, spec)?;
    let cond = condense(&g);
    let dp = longest_from(&cond);
    let best = dp.iter().copied().max().unwrap_or(0);

    let mut attempts = 0;
    let mut len = best;
    while len >= 1 && attempts < retries.max(1) {
        let budget = retries.max(1) - attempts;
        for cand in enumerate_paths(&cond, &dp, len, budget) {
            attempts += 1;
            match augment_path(&cond, &g, &cand) {
                Ok(nodes) => {
                    let simplices: Vec<Vec<u32>> =
                        nodes.iter().map(|&v| complex.simplex(g.simplex_id(v)).to_vec()).collect();
                    // Re-check every consecutive pair against the nearness
                    // definition rather than trusting the edge list.
                    for pair in simplices.windows(2) {
                        assert!(
                            directed_q_near(&pair[0], &pair[1], spec, complex),
                            "augmented path violates nearness at {:?} -> {:?}",
                            pair[0],
                            pair[1]
                        );
                    }
                    let (num, den) = path_fraction(&simplices, spec.q);
                    return Ok(SimplicialPath {
                        spec,
                        length: simplices.len(),
                        fraction: num as f64 / den as f64,
                        fraction_num: num,
                        fraction_den: den,
                        condensation_path_node_sizes: cand
                            .iter()
                            .map(|&comp| cond.members(comp).len())
                            .collect(),
                        simplices,
                    });
                }
                Err(_) => continue,
            }
        }
        len -= 1;
    }
    Err(PathError::Infeasible { attempts })
}

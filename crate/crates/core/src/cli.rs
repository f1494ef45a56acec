//! Command-line surface: loads inputs, runs the analyses and emits
//! plot-ready JSON/CSV/DOT reports.
//!
//! Every command is deterministic: identical inputs and configuration
//! produce byte-identical reports. Exit codes: 0 success, 2 input/parse
//! errors, 3 guard aborts, 4 infeasible or empty results.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::digraph::{Digraph, LoadError, LoadOptions};
use crate::flagcomplex::{BuildError, DirectedFlagComplex, StoreError, DEFAULT_SIMPLEX_CEILING};
use crate::paths::{longest_simplicial_path, PathError, SimplicialPath, DEFAULT_AUGMENT_RETRIES};
use crate::qclassic::{
    self, clique_communities, pseudomanifold_check, structure_vectors, QGraph,
    SimplicialComplexView, ViewError,
};
use crate::qdirected::{
    condense, summarize, ConnectionSpec, ConnectivityDigraph, DirectedError,
};
use crate::topology::{betti_z2, order_complex, poset_height, ChainError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Load(#[from] LoadError),
    #[error("{0}")]
    Store(#[from] StoreError),
    #[error("{0}")]
    Build(#[from] BuildError),
    #[error("{0}")]
    View(#[from] ViewError),
    #[error("{0}")]
    Chain(#[from] ChainError),
    #[error("{0}")]
    Directed(#[from] DirectedError),
    #[error("{0}")]
    Path(#[from] PathError),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Config(String),
}

impl CliError {
    /// 2 = parse/input, 3 = guard abort, 4 = infeasible result.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Load(_)
            | CliError::Store(_)
            | CliError::Io(_)
            | CliError::Json(_)
            | CliError::Config(_) => 2,
            CliError::Build(_) | CliError::View(_) | CliError::Chain(_) => 3,
            CliError::Directed(_) | CliError::Path(_) => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// Edge list: one "src dst" per line, '#' comments.
    Edges,
    /// Dense 0/1 adjacency matrix.
    Matrix,
    /// Ordered simplex store with "dim k" section headers.
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
    Dot,
}

/// Global analysis configuration shared by all subcommands.
#[derive(Debug, Args)]
pub struct AnalysisConfig {
    /// Input file ("-" for stdin).
    #[arg(long, global = true, default_value = "-")]
    pub input: String,
    /// Input format.
    #[arg(long, global = true, value_enum, default_value_t = InputFormat::Edges)]
    pub format: InputFormat,
    /// Cap on the dimension of the directed flag complex.
    #[arg(long, global = true)]
    pub max_dim: Option<usize>,
    /// Connectivity level q.
    #[arg(long, global = true)]
    pub q: Option<usize>,
    /// First direction index.
    #[arg(long, global = true)]
    pub di: Option<usize>,
    /// Second direction index.
    #[arg(long, global = true)]
    pub dj: Option<usize>,
    /// Inclusive range "lo..hi" of first direction indexes.
    #[arg(long, global = true)]
    pub di_range: Option<String>,
    /// Inclusive range "lo..hi" of second direction indexes.
    #[arg(long, global = true)]
    pub dj_range: Option<String>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub out: Option<OutputFormat>,
    /// Simplex/chain ceiling guard.
    #[arg(long, global = true, default_value_t = DEFAULT_SIMPLEX_CEILING)]
    pub guard: u64,
    /// Augmentation retry bound for path searches.
    #[arg(long, global = true, default_value_t = DEFAULT_AUGMENT_RETRIES)]
    pub retries: usize,
}

#[derive(Debug, Parser)]
#[command(name = "flagq", version, about = "Classical and directed Q-analysis of digraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: AnalysisConfig,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-dimension simplex counts of the directed flag complex.
    Count,
    /// Classical structure vectors (Q, N, T, Qhat).
    Classic,
    /// The q-graph of the complex, as DOT.
    Qgraph,
    /// k-clique communities of the undirected input graph.
    Communities {
        /// Clique size k >= 2.
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Classical pseudomanifold certificate in dimension n.
    PmCheck {
        #[arg(long)]
        n: usize,
        /// Also check the directed variant along (--di, --dj).
        #[arg(long, default_value_t = false)]
        directed: bool,
    },
    /// Build a (q,di,dj)-connectivity digraph; DOT or JSON summary.
    DqBuild,
    /// Condensation of a (q,di,dj)-connectivity digraph.
    Condense,
    /// Longest simplicial paths over an (i,j) grid; CSV length/fraction
    /// matrices or JSON cells.
    Paths {
        /// Include the i=j diagonal (skipped by default).
        #[arg(long, default_value_t = false)]
        include_diagonal: bool,
        /// Include full simplex dumps in JSON cells.
        #[arg(long, default_value_t = false)]
        dump_paths: bool,
    },
    /// Betti numbers and height of the condensed (q,di,dj)-poset.
    Topology,
    /// Normalize an input graph to the edge-list format.
    Convert {
        /// Remap sparse external ids to dense ids, recording the
        /// dictionary as comments.
        #[arg(long, default_value_t = false)]
        remap: bool,
    },
}

fn open_input(path: &str) -> Result<Box<dyn BufRead>, CliError> {
    if path == "-" {
        Ok(Box::new(BufReader::new(io::stdin())))
    } else {
        Ok(Box::new(BufReader::new(File::open(PathBuf::from(path))?)))
    }
}

fn load_digraph(cfg: &AnalysisConfig) -> Result<Digraph, CliError> {
    let reader = open_input(&cfg.input)?;
    match cfg.format {
        InputFormat::Edges => {
            Ok(Digraph::from_edge_list(reader, &LoadOptions::default())?)
        }
        InputFormat::Matrix => Ok(Digraph::from_adjacency_matrix(reader)?),
        InputFormat::Complex => {
            Err(CliError::Config("this command needs a digraph input (edges or matrix)".into()))
        }
    }
}

fn load_complex(cfg: &AnalysisConfig) -> Result<DirectedFlagComplex, CliError> {
    match cfg.format {
        InputFormat::Complex => {
            let reader = open_input(&cfg.input)?;
            Ok(DirectedFlagComplex::read_store(reader)?)
        }
        _ => {
            let g = load_digraph(cfg)?;
            Ok(DirectedFlagComplex::build(&g, cfg.max_dim, cfg.guard)?)
        }
    }
}

fn load_view(cfg: &AnalysisConfig) -> Result<SimplicialComplexView, CliError> {
    Ok(SimplicialComplexView::from_flag_complex(&load_complex(cfg)?))
}

fn spec_from(cfg: &AnalysisConfig) -> Result<ConnectionSpec, CliError> {
    let q = cfg.q.ok_or_else(|| CliError::Config("--q is required".into()))?;
    let i = cfg.di.ok_or_else(|| CliError::Config("--di is required".into()))?;
    let j = cfg.dj.ok_or_else(|| CliError::Config("--dj is required".into()))?;
    Ok(ConnectionSpec::new(q, i, j))
}

fn parse_range(text: &str) -> Result<Vec<usize>, CliError> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| CliError::Config(format!("range {text:?} must look like lo..hi")))?;
    let lo: usize =
        lo.trim().parse().map_err(|_| CliError::Config(format!("bad range bound in {text:?}")))?;
    let hi: usize =
        hi.trim().parse().map_err(|_| CliError::Config(format!("bad range bound in {text:?}")))?;
    if hi < lo {
        return Err(CliError::Config(format!("empty range {text:?}")));
    }
    Ok((lo..=hi).collect())
}

fn direction_axes(cfg: &AnalysisConfig) -> Result<(Vec<usize>, Vec<usize>), CliError> {
    let parse_axis = |single: Option<usize>, range: &Option<String>| -> Result<Option<Vec<usize>>, CliError> {
        match (single, range) {
            (Some(v), None) => Ok(Some(vec![v])),
            (None, Some(r)) => Ok(Some(parse_range(r)?)),
            (None, None) => Ok(None),
            (Some(_), Some(_)) => {
                Err(CliError::Config("give either a single direction or a range, not both".into()))
            }
        }
    };
    let q = cfg.q.ok_or_else(|| CliError::Config("--q is required".into()))?;
    let default = || (0..=q + 1).collect::<Vec<usize>>();
    let di = parse_axis(cfg.di, &cfg.di_range)?.unwrap_or_else(default);
    let dj = parse_axis(cfg.dj, &cfg.dj_range)?.unwrap_or_else(default);
    Ok((di, dj))
}

pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<(), CliError> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Count => cmd_count(cfg, out),
        Command::Classic => cmd_classic(cfg, out),
        Command::Qgraph => cmd_qgraph(cfg, out),
        Command::Communities { k } => cmd_communities(cfg, *k, out),
        Command::PmCheck { n, directed } => cmd_pm_check(cfg, *n, *directed, out),
        Command::DqBuild => cmd_dq_build(cfg, false, out),
        Command::Condense => cmd_dq_build(cfg, true, out),
        Command::Paths { include_diagonal, dump_paths } => {
            cmd_paths(cfg, *include_diagonal, *dump_paths, out)
        }
        Command::Topology => cmd_topology(cfg, out),
        Command::Convert { remap } => cmd_convert(cfg, *remap, out),
    }
}

fn cmd_count<W: Write>(cfg: &AnalysisConfig, out: &mut W) -> Result<(), CliError> {
    let complex = load_complex(cfg)?;
    let counts = complex.simplex_counts();
    match cfg.out.unwrap_or(OutputFormat::Text) {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Report {
                counts: Vec<usize>,
            }
            writeln!(out, "{}", serde_json::to_string(&Report { counts })?)?;
        }
        OutputFormat::Csv => {
            writeln!(out, "dim,count")?;
            for (k, c) in counts.iter().enumerate() {
                writeln!(out, "{k},{c}")?;
            }
        }
        _ => {
            if counts.is_empty() {
                eprintln!("warning: input graph has no vertices");
                writeln!(out, "dim0:0")?;
            } else {
                let parts: Vec<String> =
                    counts.iter().enumerate().map(|(k, c)| format!("dim{k}:{c}")).collect();
                writeln!(out, "{}", parts.join(" "))?;
            }
        }
    }
    Ok(())
}

fn cmd_classic<W: Write>(cfg: &AnalysisConfig, out: &mut W) -> Result<(), CliError> {
    let view = load_view(cfg)?;
    if view.is_empty() {
        return Err(CliError::Config("empty complex has no structure vectors".into()));
    }
    let sv = structure_vectors(&view);
    match cfg.out.unwrap_or(OutputFormat::Text) {
        OutputFormat::Json => writeln!(out, "{}", serde_json::to_string(&sv)?)?,
        OutputFormat::Csv => sv.write_csv(out)?,
        _ => {
            let fmt = |v: &[usize]| {
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            };
            writeln!(out, "Q=({})", fmt(&sv.q_vec))?;
            writeln!(out, "N=({})", fmt(&sv.n_vec))?;
            let t: Vec<String> = sv.t_vec.iter().map(|x| format!("{x:.4}")).collect();
            writeln!(out, "T=({})", t.join(","))?;
            writeln!(out, "Qhat=({})", fmt(&sv.q_hat))?;
        }
    }
    Ok(())
}

fn cmd_qgraph<W: Write>(cfg: &AnalysisConfig, out: &mut W) -> Result<(), CliError> {
    let view = load_view(cfg)?;
    let q = cfg.q.ok_or_else(|| CliError::Config("--q is required".into()))?;
    if q > view.dim() || view.is_empty() {
        return Err(CliError::Directed(DirectedError::EmptyLevel { q, dim: view.dim() }));
    }
    let g = QGraph::build(&view, q);
    match cfg.out.unwrap_or(OutputFormat::Dot) {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Report {
                q: usize,
                nodes: usize,
                edges: usize,
                components: usize,
            }
            let components = qclassic::q_components(&g).len();
            let report =
                Report { q, nodes: g.nodes.len(), edges: g.edges.len(), components };
            writeln!(out, "{}", serde_json::to_string(&report)?)?;
        }
        _ => g.write_dot(&view, out)?,
    }
    Ok(())
}

fn cmd_communities<W: Write>(cfg: &AnalysisConfig, k: usize, out: &mut W) -> Result<(), CliError> {
    if k < 2 {
        return Err(CliError::Config("clique size k must be at least 2".into()));
    }
    let g = load_digraph(cfg)?;
    let edges: Vec<(u32, u32)> = g.edges().collect();
    let (cliques, communities) = clique_communities(g.num_vertices(), &edges, k);
    match cfg.out.unwrap_or(OutputFormat::Text) {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Report {
                k: usize,
                communities: Vec<Vec<Vec<u32>>>,
            }
            let communities = communities
                .iter()
                .map(|c| c.iter().map(|&i| cliques[i as usize].clone()).collect())
                .collect();
            writeln!(out, "{}", serde_json::to_string(&Report { k, communities })?)?;
        }
        _ => {
            for (ci, members) in communities.iter().enumerate() {
                let labels: Vec<String> = members
                    .iter()
                    .map(|&i| {
                        let c: Vec<String> =
                            cliques[i as usize].iter().map(|v| v.to_string()).collect();
                        format!("{{{}}}", c.join(","))
                    })
                    .collect();
                writeln!(out, "community {ci}: {}", labels.join(" "))?;
            }
        }
    }
    Ok(())
}

fn cmd_pm_check<W: Write>(
    cfg: &AnalysisConfig,
    n: usize,
    directed: bool,
    out: &mut W,
) -> Result<(), CliError> {
    let complex = load_complex(cfg)?;
    if directed {
        let i = cfg.di.unwrap_or(0);
        let j = cfg.dj.unwrap_or(1);
        let cert = crate::qdirected::directed_pseudomanifold_check(&complex, n, i, j);
        writeln!(out, "{}", serde_json::to_string(&cert)?)?;
    } else {
        let view = SimplicialComplexView::from_flag_complex(&complex);
        let cert = pseudomanifold_check(&view, n);
        writeln!(out, "{}", serde_json::to_string(&cert)?)?;
    }
    Ok(())
}

fn cmd_dq_build<W: Write>(
    cfg: &AnalysisConfig,
    condensation_only: bool,
    out: &mut W,
) -> Result<(), CliError> {
    let complex = load_complex(cfg)?;
    let spec = spec_from(cfg)?;
    let g = ConnectivityDigraph::build(&complex, spec)?;
    let cond = condense(&g);
    match cfg.out.unwrap_or(if condensation_only { OutputFormat::Dot } else { OutputFormat::Json }) {
        OutputFormat::Dot => {
            if condensation_only {
                cond.write_dot(&g, &complex, out)?;
            } else {
                g.write_dot(&complex, out)?;
            }
        }
        _ => writeln!(out, "{}", serde_json::to_string(&summarize(&g, &cond))?)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct PathCell {
    q: usize,
    i: usize,
    j: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    condensation_path_node_sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    simplices: Option<Vec<Vec<u32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn cmd_paths<W: Write>(
    cfg: &AnalysisConfig,
    include_diagonal: bool,
    dump_paths: bool,
    out: &mut W,
) -> Result<(), CliError> {
    let complex = load_complex(cfg)?;
    let q = cfg.q.ok_or_else(|| CliError::Config("--q is required".into()))?;
    let (dis, djs) = direction_axes(cfg)?;
    if complex.is_empty() || q > complex.dim() {
        eprintln!("warning: no simplices of dimension >= {q}; emitting an empty matrix");
        writeln!(out, "lengths")?;
        writeln!(out, "fractions")?;
        return Ok(());
    }
    type Cell = ((usize, usize), Option<Result<SimplicialPath, String>>);
    let cells: Vec<Cell> = dis
        .par_iter()
        .flat_map_iter(|&i| {
            let complex = &complex;
            let djs = &djs;
            djs.iter().map(move |&j| {
                if i == j && !include_diagonal {
                    return ((i, j), None);
                }
                let r = longest_simplicial_path(complex, ConnectionSpec::new(q, i, j), cfg.retries)
                    .map_err(|e| e.to_string());
                ((i, j), Some(r))
            })
        })
        .collect();
    let cell = |i: usize, j: usize| &cells.iter().find(|((a, b), _)| (*a, *b) == (i, j)).unwrap().1;

    match cfg.out.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Json => {
            let mut reports = Vec::new();
            for &i in &dis {
                for &j in &djs {
                    let mut c = PathCell {
                        q,
                        i,
                        j,
                        length: None,
                        fraction: None,
                        condensation_path_node_sizes: None,
                        simplices: None,
                        error: None,
                    };
                    match cell(i, j) {
                        None => continue,
                        Some(Ok(p)) => {
                            c.length = Some(p.length);
                            c.fraction = Some(p.fraction);
                            c.condensation_path_node_sizes =
                                Some(p.condensation_path_node_sizes.clone());
                            if dump_paths {
                                c.simplices = Some(p.simplices.clone());
                            }
                        }
                        Some(Err(e)) => c.error = Some(e.clone()),
                    }
                    reports.push(c);
                }
            }
            writeln!(out, "{}", serde_json::to_string(&reports)?)?;
        }
        _ => {
            let header: Vec<String> = djs.iter().map(|j| j.to_string()).collect();
            writeln!(out, "lengths")?;
            writeln!(out, ",{}", header.join(","))?;
            for &i in &dis {
                let mut row = vec![i.to_string()];
                for &j in &djs {
                    row.push(match cell(i, j) {
                        None => "-".into(),
                        Some(Ok(p)) => p.length.to_string(),
                        Some(Err(_)) => "-".into(),
                    });
                }
                writeln!(out, "{}", row.join(","))?;
            }
            writeln!(out, "fractions")?;
            writeln!(out, ",{}", header.join(","))?;
            for &i in &dis {
                let mut row = vec![i.to_string()];
                for &j in &djs {
                    row.push(match cell(i, j) {
                        None => "-".into(),
                        Some(Ok(p)) => format!("{:.4}", p.fraction),
                        Some(Err(_)) => "-".into(),
                    });
                }
                writeln!(out, "{}", row.join(","))?;
            }
        }
    }
    Ok(())
}

fn cmd_topology<W: Write>(cfg: &AnalysisConfig, out: &mut W) -> Result<(), CliError> {
    let complex = load_complex(cfg)?;
    let spec = spec_from(cfg)?;
    let g = ConnectivityDigraph::build(&complex, spec)?;
    let cond = condense(&g);
    let poset = cond.to_poset();
    let oc = order_complex(&poset, None, cfg.guard)?;
    let betti = betti_z2(&oc, oc.dim());
    let height = poset_height(&poset);
    match cfg.out.unwrap_or(OutputFormat::Text) {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Report {
                q: usize,
                i: usize,
                j: usize,
                betti: Vec<usize>,
                height: usize,
                order_complex_counts: Vec<usize>,
            }
            let report = Report {
                q: spec.q,
                i: spec.i,
                j: spec.j,
                betti,
                height,
                order_complex_counts: oc.simplex_counts(),
            };
            writeln!(out, "{}", serde_json::to_string(&report)?)?;
        }
        _ => {
            let b: Vec<String> = betti.iter().map(|x| x.to_string()).collect();
            writeln!(out, "betti=({}) height={}", b.join(","), height)?;
        }
    }
    Ok(())
}

fn cmd_convert<W: Write>(cfg: &AnalysisConfig, remap: bool, out: &mut W) -> Result<(), CliError> {
    let reader = open_input(&cfg.input)?;
    let g = match cfg.format {
        InputFormat::Edges => {
            let opts = LoadOptions { remap_ids: remap, ..Default::default() };
            Digraph::from_edge_list(reader, &opts)?
        }
        InputFormat::Matrix => Digraph::from_adjacency_matrix(reader)?,
        InputFormat::Complex => {
            return Err(CliError::Config("convert expects a digraph input".into()))
        }
    };
    if let Some(ids) = g.external_ids() {
        writeln!(out, "# vertex remap: dense external")?;
        for (dense, ext) in ids.iter().enumerate() {
            writeln!(out, "# {dense} {ext}")?;
        }
    }
    g.write_edge_list(out)?;
    Ok(())
}

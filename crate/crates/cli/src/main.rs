//! The `gkmgw` binary: validate and print stacky GKM graph files, enumerate
//! decorated fixed-locus graphs, and compute equivariant orbifold
//! Gromov-Witten invariants by localization.
//!
//! Exit codes: 0 on success, 2 on any validation or input failure, 3 when a
//! requested integral needs a table entry that was not provided.

use clap::{Parser, Subcommand};
use gkmgw_cli::{query, report, wdvv, OutputMode, SessionConfig};
use gkmgw_core::crcoh::{cup_affine, pairing};
use gkmgw_core::fixedloci::{c_gamma, enumerate};
use gkmgw_core::gkm::catalog::{catalog, list_catalog};
use gkmgw_core::gkm::{io, StackyGKMGraph};
use gkmgw_core::localize::{self, EngineConfig, InvariantQuery, LocalizeError};
use gkmgw_core::psihodge::{psi_mgn, HodgeTable, PsiError};
use std::fs;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "gkmgw", version, about = "Equivariant invariants of stacky GKM graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a graph file and check the decoration axioms.
    Validate {
        /// Graph file, or catalog:NAME for a built-in target.
        file: String,
    },
    /// List the built-in targets, or print one as a graph file.
    Catalog {
        name: Option<String>,
    },
    /// Enumerate the decorated graphs indexing the fixed loci of a query.
    FixedLoci {
        /// Graph file, or catalog:NAME.
        graph: String,
        #[arg(long)]
        genus: usize,
        /// Degree as edge:multiplicity pairs, e.g. "e01:1,e12:2"; "-" is zero.
        #[arg(long, default_value = "-")]
        deg: String,
        /// Number of markings.
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Allowed sectors per marking: whitespace-separated groups of
        /// comma-separated vertex:rep entries.
        #[arg(long)]
        monodromy: Option<String>,
    },
    /// Compute an invariant from a query file of insertions.
    Invariant {
        /// Graph file, or catalog:NAME.
        graph: String,
        #[arg(long)]
        genus: usize,
        /// Degree as edge:multiplicity pairs; "-" is zero.
        #[arg(long, default_value = "-")]
        deg: String,
        /// Query file listing the insertions.
        #[arg(long)]
        insertions: String,
        /// Evaluate at a random point instead of symbolically.
        #[arg(long, conflicts_with = "symbolic")]
        eval_only: bool,
        /// Full symbolic computation (the default).
        #[arg(long)]
        symbolic: bool,
        #[arg(long)]
        threads: Option<usize>,
        /// Print the per-graph factor table.
        #[arg(long, conflicts_with = "eval_only")]
        audit: bool,
        /// Sum the value over all degree classes with the same weighted total.
        #[arg(long, conflicts_with = "audit")]
        pushforward: bool,
        /// Seed for evaluation-mode sample points.
        #[arg(long)]
        seed: Option<u64>,
        /// Table file for integrals the built-in engine declines.
        #[arg(long)]
        table: Option<String>,
        /// Weight marking coefficients by the sector element order.
        #[arg(long)]
        weighted_markings: bool,
        /// Read insertion coefficients at the inverse marking sector.
        #[arg(long)]
        pair_inverse: bool,
    },
    /// Poincare pairing of two classes given inline.
    Pairing {
        /// Graph file, or catalog:NAME.
        graph: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Cup product of two sector units at an affine vertex.
    Cup {
        /// Graph file, or catalog:NAME.
        graph: String,
        #[arg(long)]
        vertex: String,
        /// Class representative (group element index).
        #[arg(long)]
        left: usize,
        #[arg(long)]
        right: usize,
    },
    /// A psi-class intersection number on the moduli of stable curves.
    Psi {
        #[arg(long)]
        genus: usize,
        /// Comma-separated psi exponents, one per marking.
        #[arg(long, default_value = "")]
        exps: String,
    },
    /// Independent plane-curve count for cross-checks.
    Oracle {
        #[arg(long, default_value = "P2")]
        target: String,
        #[arg(long)]
        deg: u64,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn validation(msg: impl Into<String>) -> Self {
        Failure { code: 2, msg: msg.into() }
    }

    fn unsupported(msg: impl Into<String>) -> Self {
        Failure { code: 3, msg: msg.into() }
    }

    fn from_localize(e: LocalizeError) -> Self {
        match &e {
            LocalizeError::Psi(PsiError::UnsupportedIntegral(_)) => {
                Failure::unsupported(e.to_string())
            }
            _ => Failure::validation(e.to_string()),
        }
    }
}

fn violation_lines(graph: &StackyGKMGraph) -> Option<String> {
    let violations = graph.validate();
    if violations.is_empty() {
        return None;
    }
    let mut msg = String::new();
    for v in &violations {
        msg.push_str(&format!("violation [{}] at {}: {}\n", v.rule, v.location, v.witness));
    }
    msg.push_str(&format!("{} violations", violations.len()));
    Some(msg)
}

/// Loads a graph from a file or `catalog:NAME` and checks the axioms.
fn load_graph(arg: &str) -> Result<StackyGKMGraph, Failure> {
    let graph = if let Some(name) = arg.strip_prefix("catalog:") {
        catalog(name).map_err(|e| Failure::validation(e.to_string()))?
    } else {
        let text = fs::read_to_string(arg)
            .map_err(|e| Failure::validation(format!("cannot read '{}': {}", arg, e)))?;
        io::parse_text(&text).map_err(|e| Failure::validation(e.to_string()))?
    };
    match violation_lines(&graph) {
        Some(msg) => Err(Failure::validation(msg)),
        None => Ok(graph),
    }
}

fn init_threads(flag: Option<usize>) -> Result<(), Failure> {
    if let Some(n) = SessionConfig::resolve_threads(flag) {
        if n == 0 {
            return Err(Failure::validation("thread count must be positive"));
        }
        // A later init in the same process keeps the first pool; that is fine.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn read_file(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("cannot read '{}': {}", path, e)))
}

fn cmd_validate(file: &str) -> Result<(), Failure> {
    let graph = load_graph(file)?;
    println!(
        "ok {}: {} vertices, {} edges, m={}, r={}",
        graph.name,
        graph.vertices.len(),
        graph.edges.len(),
        graph.m,
        graph.r
    );
    Ok(())
}

fn cmd_catalog(name: Option<&str>) -> Result<(), Failure> {
    match name {
        None => {
            for entry in list_catalog() {
                println!("{}", entry);
            }
        }
        Some(name) => {
            let graph = catalog(name).map_err(|e| Failure::validation(e.to_string()))?;
            print!("{}", io::to_text(&graph));
        }
    }
    Ok(())
}

fn cmd_fixed_loci(
    graph: &str,
    genus: usize,
    deg: &str,
    n: usize,
    monodromy: Option<&str>,
) -> Result<(), Failure> {
    let target = load_graph(graph)?;
    let beta = query::parse_degree(&target, deg).map_err(Failure::validation)?;
    let allowed = match monodromy {
        Some(s) => Some(query::parse_monodromy(&target, s, n).map_err(Failure::validation)?),
        None => None,
    };
    let graphs = enumerate(&target, genus, n, &beta, allowed.as_deref())
        .map_err(|e| Failure::validation(e.to_string()))?;
    println!("graphs {}", graphs.len());
    for (k, g) in graphs.iter().enumerate() {
        println!("graph {} c = {}", k + 1, c_gamma(g, &target));
        for line in g.to_string().lines() {
            println!("  {}", line);
        }
    }
    Ok(())
}

struct InvariantFlags {
    eval_only: bool,
    audit: bool,
    threads: Option<usize>,
    seed: Option<u64>,
    weighted_markings: bool,
    pair_inverse: bool,
}

#[allow(clippy::too_many_arguments)]
fn cmd_invariant(
    graph: &str,
    genus: usize,
    deg: &str,
    insertions: &str,
    flags: &InvariantFlags,
    pushforward: bool,
    table: Option<&str>,
) -> Result<(), Failure> {
    init_threads(flags.threads)?;
    let target = load_graph(graph)?;
    let session = SessionConfig {
        m: target.m,
        seed: flags.seed.unwrap_or_else(|| EngineConfig::default().seed),
        threads: flags.threads,
        pair_inverse: flags.pair_inverse,
        weighted_markings: flags.weighted_markings,
        mode: if flags.eval_only {
            OutputMode::EvalOnly
        } else if flags.audit {
            OutputMode::Audit
        } else {
            OutputMode::Symbolic
        },
    };
    let beta = query::parse_degree(&target, deg).map_err(Failure::validation)?;
    let text = read_file(insertions)?;
    let parsed = query::parse_query_file(&target, &text)
        .map_err(|e| Failure::validation(e.to_string()))?;
    let q = InvariantQuery { genus, degree: beta, insertions: parsed };
    let table = match table {
        Some(path) => Some(
            HodgeTable::parse(&read_file(path)?)
                .map_err(|e| Failure::validation(e.to_string()))?,
        ),
        None => None,
    };
    let config = EngineConfig {
        weighted_markings: session.weighted_markings,
        pair_inverse: session.pair_inverse,
        table,
        seed: session.seed,
        ..EngineConfig::default()
    };
    let t0 = Instant::now();
    if pushforward {
        if session.mode == OutputMode::EvalOnly {
            let rep = localize::pushforward_eval(&target, &q, &config)
                .map_err(Failure::from_localize)?;
            print!("{}", report::format_eval(&rep, t0.elapsed()));
        } else {
            let rep = localize::pushforward_check(&target, &q, &config)
                .map_err(Failure::from_localize)?;
            print!("{}", report::format_pushforward(&rep, t0.elapsed()));
        }
        return Ok(());
    }
    match session.mode {
        OutputMode::EvalOnly => {
            let rep = localize::invariant_eval(&target, &q, &config)
                .map_err(Failure::from_localize)?;
            print!("{}", report::format_eval(&rep, t0.elapsed()));
        }
        OutputMode::Symbolic => {
            let rep = localize::invariant(&target, &q, &config)
                .map_err(Failure::from_localize)?;
            print!("{}", report::format_invariant(&rep, t0.elapsed()));
        }
        OutputMode::Audit => {
            let rep = localize::invariant(&target, &q, &config)
                .map_err(Failure::from_localize)?;
            print!("{}", report::format_invariant(&rep, t0.elapsed()));
            let mut graphs = localize::enumerate_for(&target, &q, &config)
                .map_err(Failure::from_localize)?;
            graphs.sort_by_key(|g| g.certificate());
            let contribs: Result<Vec<_>, _> = graphs
                .iter()
                .map(|g| localize::contribution(&target, g, &q, &config))
                .collect();
            print!("{}", report::format_audit(&contribs.map_err(Failure::from_localize)?));
        }
    }
    Ok(())
}

fn cmd_pairing(graph: &str, left: &str, right: &str) -> Result<(), Failure> {
    let target = load_graph(graph)?;
    let a = query::parse_class_expr(&target, left).map_err(Failure::validation)?;
    let b = query::parse_class_expr(&target, right).map_err(Failure::validation)?;
    println!("pairing = {}", pairing(&target, &a, &b));
    Ok(())
}

fn cmd_cup(graph: &str, vertex: &str, left: usize, right: usize) -> Result<(), Failure> {
    let target = load_graph(graph)?;
    let group = target
        .vertices
        .get(vertex)
        .ok_or_else(|| Failure::validation(format!("unknown vertex '{}'", vertex)))?;
    if left >= group.order() || right >= group.order() {
        return Err(Failure::validation(format!(
            "element index out of range for |G| = {}",
            group.order()
        )));
    }
    let c = group.class_of(left as u16);
    let cp = group.class_of(right as u16);
    println!("{}", cup_affine(&target, vertex, c, cp));
    Ok(())
}

fn cmd_psi(genus: usize, exps: &str) -> Result<(), Failure> {
    let parsed: Result<Vec<usize>, _> = exps
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>())
        .collect();
    let parsed =
        parsed.map_err(|_| Failure::validation(format!("bad exponent list '{}'", exps)))?;
    println!("{}", psi_mgn(genus, &parsed));
    Ok(())
}

fn cmd_oracle(target: &str, deg: u64) -> Result<(), Failure> {
    match wdvv::wdvv_oracle(target, deg) {
        Some(v) => {
            println!("N_{}({}) = {}", deg, target, v);
            Ok(())
        }
        None => Err(Failure::validation(format!(
            "oracle supports target P2 and degree >= 1, got {} degree {}",
            target, deg
        ))),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Validate { file } => cmd_validate(&file),
        Cmd::Catalog { name } => cmd_catalog(name.as_deref()),
        Cmd::FixedLoci { graph, genus, deg, n, monodromy } => {
            cmd_fixed_loci(&graph, genus, &deg, n, monodromy.as_deref())
        }
        Cmd::Invariant {
            graph,
            genus,
            deg,
            insertions,
            eval_only,
            symbolic: _,
            threads,
            audit,
            pushforward,
            seed,
            table,
            weighted_markings,
            pair_inverse,
        } => {
            let flags = InvariantFlags {
                eval_only,
                audit,
                threads,
                seed,
                weighted_markings,
                pair_inverse,
            };
            cmd_invariant(&graph, genus, &deg, &insertions, &flags, pushforward, table.as_deref())
        }
        Cmd::Pairing { graph, left, right } => cmd_pairing(&graph, &left, &right),
        Cmd::Cup { graph, vertex, left, right } => cmd_cup(&graph, &vertex, left, right),
        Cmd::Psi { genus, exps } => cmd_psi(genus, &exps),
        Cmd::Oracle { target, deg } => cmd_oracle(&target, deg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

//! Command-line surface for the gkmgw toolkit: file and query parsing,
//! catalog access, result reporting, and an independent plane-curve count
//! oracle used for cross-checks.

pub mod query;
pub mod report;
pub mod wdvv;

/// Session-wide settings assembled from command-line flags and the
/// `GKMGW_THREADS` environment variable. The torus rank is copied from the
/// loaded target and is at least 1 for every validated graph.
#[derive(Debug, Clone)]
pub struct SessionConfig {
    pub m: usize,
    pub seed: u64,
    pub threads: Option<usize>,
    /// Pair a marking's insertion coefficient against the inverse sector.
    pub pair_inverse: bool,
    /// Weight marking coefficients by the order of the sector element.
    pub weighted_markings: bool,
    pub mode: OutputMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    Symbolic,
    EvalOnly,
    /// Symbolic computation plus the per-graph factor table.
    Audit,
}

impl SessionConfig {
    /// Thread count: an explicit flag wins over `GKMGW_THREADS`.
    pub fn resolve_threads(flag: Option<usize>) -> Option<usize> {
        flag.or_else(|| {
            std::env::var("GKMGW_THREADS")
                .ok()
                .and_then(|s| s.trim().parse().ok())
        })
    }
}

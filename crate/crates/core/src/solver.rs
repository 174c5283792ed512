//! Exact Ramsey-type number computation by backtracking over colorings.
//!
//! Positions are assigned colors in order; the state kept per assigned
//! position is the length of the longest monochromatic diffsequence ending
//! there, which depends only on earlier positions. Any branch where that
//! length reaches the target is pruned. Position 1 is pinned to color 0
//! (colors are interchangeable).

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use serde::Serialize;

use crate::gapset::GapSet;

/// Default node budget: 10^8 assignments.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Maximum number of color assignments across the whole run.
    pub budget: u64,
    /// Worker threads; 1 means plain sequential search.
    pub threads: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            budget: DEFAULT_NODE_BUDGET,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExistsOutcome {
    /// A coloring of `[1..n]` with no monochromatic diffsequence of length k.
    Found(Vec<u8>),
    /// Search space exhausted; no such coloring exists.
    Exhausted,
    /// Node budget ran out before the question was settled.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct ExistsResult {
    pub outcome: ExistsOutcome,
    pub nodes: u64,
}

/// Decides whether some r-coloring of `[1..n]` avoids monochromatic
/// diffsequences of length `k`.
pub fn exists_valid_coloring(
    g: &GapSet,
    k: u64,
    r: u32,
    n: u64,
    config: &SolverConfig,
) -> ExistsResult {
    // upper limit comes from the single-digit coloring text format
    assert!((2..=9).contains(&r), "color count must be in 2..=9");
    let n = n as usize;
    let gaps: Vec<usize> = g
        .members_up_to((n as u64).saturating_sub(1))
        .into_iter()
        .map(|d| d as usize)
        .collect();
    let prune_at = k.min(u32::MAX as u64) as u32;
    if config.threads > 1 && n > 8 {
        exists_parallel(&gaps, prune_at, r as u8, n, config)
    } else {
        let mut search = Search::new(&gaps, prune_at, r as u8, n, config.budget);
        let outcome = search.assign(1);
        ExistsResult {
            outcome,
            nodes: search.nodes,
        }
    }
}

struct Search<'a> {
    gaps: &'a [usize],
    prune_at: u32,
    r: u8,
    n: usize,
    col: Vec<u8>,
    len: Vec<u32>,
    nodes: u64,
    budget: u64,
}

impl<'a> Search<'a> {
    fn new(gaps: &'a [usize], prune_at: u32, r: u8, n: usize, budget: u64) -> Search<'a> {
        Search {
            gaps,
            prune_at,
            r,
            n,
            col: vec![0; n + 1],
            len: vec![0; n + 1],
            nodes: 0,
            budget,
        }
    }

    /// Longest monochromatic diffsequence ending at `a` if it took color `c`,
    /// given the assignment of all earlier positions.
    fn chain_len(&self, a: usize, c: u8) -> u32 {
        let mut best = 1u32;
        for &d in self.gaps {
            if d >= a {
                break;
            }
            if self.col[a - d] == c && self.len[a - d] + 1 > best {
                best = self.len[a - d] + 1;
            }
        }
        best
    }

    fn assign(&mut self, a: usize) -> ExistsOutcome {
        if a > self.n {
            return ExistsOutcome::Found(self.col[1..].to_vec());
        }
        let color_count = if a == 1 { 1 } else { self.r };
        for c in 0..color_count {
            if self.nodes >= self.budget {
                return ExistsOutcome::Inconclusive;
            }
            self.nodes += 1;
            let l = self.chain_len(a, c);
            if l >= self.prune_at {
                continue;
            }
            self.col[a] = c;
            self.len[a] = l;
            match self.assign(a + 1) {
                ExistsOutcome::Exhausted => {}
                other => return other,
            }
        }
        ExistsOutcome::Exhausted
    }

    /// Enumerates the surviving assignments of positions `1..=depth` as
    /// launch states for parallel subtree search, in branch order.
    fn live_prefixes(&mut self, depth: usize) -> Vec<(Vec<u8>, Vec<u32>)> {
        let mut out = Vec::new();
        self.collect_prefixes(1, depth, &mut out);
        out
    }

    fn collect_prefixes(&mut self, a: usize, depth: usize, out: &mut Vec<(Vec<u8>, Vec<u32>)>) {
        if a > depth {
            out.push((self.col.clone(), self.len.clone()));
            return;
        }
        let color_count = if a == 1 { 1 } else { self.r };
        for c in 0..color_count {
            self.nodes += 1;
            let l = self.chain_len(a, c);
            if l >= self.prune_at {
                continue;
            }
            self.col[a] = c;
            self.len[a] = l;
            self.collect_prefixes(a + 1, depth, out);
        }
    }
}

/// Fans the subtrees below a fixed prefix depth out to a rayon pool. The
/// merged answer is the one the sequential branch order would produce: the
/// subtree list is in branch order and the scan below prefers earlier
/// entries. A monotone "first solution index" lets later subtrees stop
/// early; that affects node counts, never the answer.
fn exists_parallel(
    gaps: &[usize],
    prune_at: u32,
    r: u8,
    n: usize,
    config: &SolverConfig,
) -> ExistsResult {
    let depth = prefix_depth(n, config.threads);
    let mut root = Search::new(gaps, prune_at, r, n, config.budget);
    let prefixes = root.live_prefixes(depth);
    let prefix_nodes = root.nodes;
    if prefixes.is_empty() {
        return ExistsResult {
            outcome: ExistsOutcome::Exhausted,
            nodes: prefix_nodes,
        };
    }
    let slice_budget = (config.budget.saturating_sub(prefix_nodes)) / prefixes.len() as u64;
    let first_found = AtomicUsize::new(usize::MAX);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .expect("thread pool");
    let results: Vec<(ExistsOutcome, u64)> = pool.install(|| {
        use rayon::prelude::*;
        prefixes
            .into_par_iter()
            .enumerate()
            .map(|(idx, (col, len))| {
                if first_found.load(Ordering::Relaxed) < idx {
                    return (ExistsOutcome::Exhausted, 0);
                }
                let mut search = Search::new(gaps, prune_at, r, n, slice_budget);
                search.col = col;
                search.len = len;
                let outcome = search.assign(depth + 1);
                if matches!(outcome, ExistsOutcome::Found(_)) {
                    first_found.fetch_min(idx, Ordering::Relaxed);
                }
                (outcome, search.nodes)
            })
            .collect()
    });

    let mut nodes = prefix_nodes;
    let mut merged = ExistsOutcome::Exhausted;
    for (outcome, subtree_nodes) in results {
        nodes += subtree_nodes;
        match (&merged, &outcome) {
            // keep the first coloring in branch order
            (ExistsOutcome::Found(_), _) => {}
            (_, ExistsOutcome::Found(_)) => merged = outcome,
            (ExistsOutcome::Exhausted, ExistsOutcome::Inconclusive) => merged = outcome,
            _ => {}
        }
    }
    ExistsResult {
        outcome: merged,
        nodes,
    }
}

fn prefix_depth(n: usize, threads: usize) -> usize {
    // enough prefixes to keep the pool busy, but bounded
    let want = (threads.max(2) * 8).next_power_of_two().trailing_zeros() as usize + 1;
    want.min(n.saturating_sub(1)).clamp(1, 14)
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SolverStatus {
    /// No valid coloring of `[1..delta]` exists; the stored extremal coloring
    /// of `[1..delta-1]` is the evidence that delta is minimal.
    Found {
        delta: u64,
        extremal_coloring: String,
    },
    /// Valid colorings still exist at the cap.
    ExceedsCap { cap: u64, extremal_coloring: String },
    /// Budget ran out while deciding size `at_n`.
    BudgetExhausted { at_n: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverResult {
    pub gapset: String,
    pub k: u64,
    pub r: u32,
    #[serde(flatten)]
    pub status: SolverStatus,
    pub nodes: u64,
    pub elapsed_ms: u64,
}

/// Smallest `n` such that every r-coloring of `[1..n]` contains a
/// monochromatic diffsequence of length `k`, found by growing `n` until the
/// existence search fails. A valid coloring of `[1..n]` restricts to one of
/// `[1..n-1]`, so the first failure is the answer.
pub fn delta(g: &GapSet, k: u64, r: u32, cap: u64, config: &SolverConfig) -> SolverResult {
    assert!(k >= 1 && r >= 2);
    let start = Instant::now();
    let mut nodes_total = 0u64;
    let first_n = k.max(1);
    // any coloring of fewer than k positions is trivially valid
    let mut coloring: Vec<u8> = vec![0; first_n as usize - 1];
    let mut lens = chain_lengths(g, &coloring);

    let mut n = first_n;
    while n <= cap {
        let gaps: Vec<usize> = g
            .members_up_to(n - 1)
            .into_iter()
            .map(|d| d as usize)
            .collect();
        // warm start: try extending the previous extremal coloring in place
        let mut extended = false;
        for c in 0..r as u8 {
            if n == 1 && c > 0 {
                break;
            }
            let l = extension_len(&gaps, &coloring, &lens, c);
            if (l as u64) < k {
                coloring.push(c);
                lens.push(l);
                extended = true;
                break;
            }
        }
        if !extended {
            let remaining = SolverConfig {
                budget: config.budget.saturating_sub(nodes_total),
                threads: config.threads,
            };
            let result = exists_valid_coloring(g, k, r, n, &remaining);
            nodes_total += result.nodes;
            match result.outcome {
                ExistsOutcome::Found(col) => {
                    lens = chain_lengths(g, &col);
                    coloring = col;
                }
                ExistsOutcome::Exhausted => {
                    return SolverResult {
                        gapset: g.to_string(),
                        k,
                        r,
                        status: SolverStatus::Found {
                            delta: n,
                            extremal_coloring: bitstring(&coloring),
                        },
                        nodes: nodes_total,
                        elapsed_ms: start.elapsed().as_millis() as u64,
                    };
                }
                ExistsOutcome::Inconclusive => {
                    return SolverResult {
                        gapset: g.to_string(),
                        k,
                        r,
                        status: SolverStatus::BudgetExhausted { at_n: n },
                        nodes: nodes_total,
                        elapsed_ms: start.elapsed().as_millis() as u64,
                    };
                }
            }
        }
        n += 1;
    }
    // possible when cap < k: the trivial evidence is longer than the cap
    coloring.truncate(cap as usize);
    SolverResult {
        gapset: g.to_string(),
        k,
        r,
        status: SolverStatus::ExceedsCap {
            cap,
            extremal_coloring: bitstring(&coloring),
        },
        nodes: nodes_total,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

/// Chain lengths for a fully known coloring (same recurrence the search
/// maintains incrementally).
fn chain_lengths(g: &GapSet, coloring: &[u8]) -> Vec<u32> {
    let n = coloring.len();
    let gaps: Vec<usize> = g
        .members_up_to((n as u64).saturating_sub(1))
        .into_iter()
        .map(|d| d as usize)
        .collect();
    let mut lens = Vec::with_capacity(n);
    for a in 1..=n {
        let c = coloring[a - 1];
        let mut best = 1u32;
        for &d in &gaps {
            if d >= a {
                break;
            }
            if coloring[a - d - 1] == c && lens[a - d - 1] + 1 > best {
                best = lens[a - d - 1] + 1;
            }
        }
        lens.push(best);
    }
    lens
}

fn extension_len(gaps: &[usize], coloring: &[u8], lens: &[u32], c: u8) -> u32 {
    let a = coloring.len() + 1;
    let mut best = 1u32;
    for &d in gaps {
        if d >= a {
            break;
        }
        if coloring[a - d - 1] == c && lens[a - d - 1] + 1 > best {
            best = lens[a - d - 1] + 1;
        }
    }
    best
}

fn bitstring(coloring: &[u8]) -> String {
    coloring
        .iter()
        .map(|&c| char::from_digit(c as u32, 10).unwrap())
        .collect()
}

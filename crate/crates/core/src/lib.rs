//! Frequent-itemset mining on an in-process map/combine/reduce core.
//!
//! The crate implements Apriori with seven phase-planning strategies that
//! decide how many candidate-generation passes are folded into each
//! map/reduce phase:
//!
//! * `SPC` — one pass per phase,
//! * `FPC` — a fixed number of passes per phase,
//! * `DPC` — passes bounded by a candidate threshold driven by previous
//!   phase time against a single cutoff,
//! * `VFPC` — pass count grown from the candidate-count trend,
//! * `ETDPC` — candidate threshold driven by the elapsed-time ratio of the
//!   two preceding phases,
//! * `Optimized-VFPC` / `Optimized-ETDPC` — the same planners with the
//!   pruning step skipped for every non-first pass inside a multi-pass
//!   phase (join-only generation).
//!
//! Candidates live in a prefix tree ([`trie::CandidateTrie`]) that performs
//! join+prune generation, join-only generation, and transaction subset
//! matching, all instrumented with operation counters. Jobs execute on a
//! deterministic in-process engine ([`engine`]) with per-split mappers, a
//! local combiner, hash-partitioned reducers and a pluggable clock (wall or
//! a counter-based cost model). [`oracle`] holds deliberately simple
//! reference implementations used for differential testing.

pub mod dataset;
pub mod engine;
pub mod oracle;
pub mod strategies;
pub mod trie;

pub use dataset::{DatasetStats, GeneratorConfig, Item, Itemset, SplitPlan, Transaction, TransactionDb};
pub use engine::{threshold, CostCoeffs, EmissionMode, GenerationMode, ThresholdConvention, TimeSource};
pub use strategies::{run_strategy, RunConfig, RunReport, StrategyConfig, Variant};

/// Errors shared by all modules of this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at line {line}: invalid token {token:?}")]
    Parse { line: usize, token: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("itemset not present in trie")]
    ItemsetNotInTrie,
    #[error("internal consistency violation: {0}")]
    InternalConsistency(String),
    #[error("oracle budget exceeded: estimated {estimated} support tests > budget {budget}")]
    BudgetExceeded { estimated: u64, budget: u64 },
    #[error("report error: {0}")]
    Report(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Verification and benchmarking: the brute-force oracle, comparison
//! metrics, tree-size identities and the benchmark runner.

pub mod bench;
pub mod identities;
pub mod metrics;
pub mod oracle;

pub use bench::{BenchSpec, RunRecord};
pub use identities::{expected_lb_calls, tree_size_recurrence_check, TreeSizeReport};
pub use metrics::{boxplot_stats, performance_profile, relative_gap_percent, BoxplotSummary, ProfilePoint};
pub use oracle::{brute_force_oracle, brute_force_oracle_with, ORACLE_LIMIT};

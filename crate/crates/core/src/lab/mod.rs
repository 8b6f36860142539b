//! Matchability statistics, exhaustive oracles and experiment sweeps.

pub mod conditions;
pub mod experiments;
pub mod oracle;
pub mod stats;

pub use conditions::{check_condition_me, check_condition_ms, ConditionParams, ConditionResult, MeCondition, MsCondition};
pub use experiments::{
    run_figure1_experiment, run_figure2_experiment, run_planted_experiment, summarize, ExperimentRow, Figure1Config,
    Figure2Config, PlantedConfig, PlantedRow, SummaryRow,
};
pub use oracle::{brute_force_global_min, enumerate_perm_classes, has_trivial_automorphism_group, BruteForceResult};
pub use stats::{
    delta_counts, expected_xp_me, expected_xp_ms, xp_forms, xp_statistic, ChannelDelta, DeltaCounts, MeCounts, Model,
    XpForms,
};

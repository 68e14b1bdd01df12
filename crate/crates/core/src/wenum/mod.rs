//! Weight enumerators: exact finite-length averages and asymptotic growth rates.

pub mod check;
pub mod exact;

pub use check::{check_enum_asymptotic, entropy, solve_check, CheckEnumProblem, CheckSolution};
pub use exact::{
    binomial, check_enum_exact, ensemble_enum_exact, WeightSpectrum, DEFAULT_GUARD_LIMIT,
};
pub mod growth;
pub use growth::{growth_rate, GrowthPoint, GrowthProblem, NodeWeightVector, OuterConfig};
pub mod crossing;
pub use crossing::{delta_min, scan, GrowthCurve, SearchConfig};

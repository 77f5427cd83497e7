//! Tent-map dynamics and predictive-averaging cycle stabilization.
//!
//! The crate is organized bottom-up:
//!
//! * [`scalar`]: binary64, exact rational and fixed-precision decimal
//!   arithmetic behind the [`Real`] trait;
//! * [`tent`]: the tent map `T_h`, orbits and itineraries;
//! * [`cycles`]: fixed points, 2-cycles, periodic-orbit enumeration and
//!   onset thresholds;
//! * [`stabilizer`]: six-tap averaging, its companion map and spectra;
//! * [`experiments`]: sweeps, escape detection and precision runs;
//! * [`rabbits`]: the Fibonacci operator and its stable/unstable split.

pub mod cycles;
pub mod error;
pub mod experiments;
mod poly;
pub mod rabbits;
pub mod scalar;
pub mod stabilizer;
pub mod tent;

pub use num_rational::BigRational;

pub use cycles::{
    cycle_multiplier, enumerate_cycles, fixed_point, onset_threshold, two_cycle, Cycle,
    CycleRecord, OnsetRecord,
};
pub use error::{Error, Result};
pub use experiments::{
    build_net, chaotic_series, classify_outcome, classify_value, detect_escape, sqrt2_experiment,
    sweep, EscapeEvent, EscapeTolerances, NetSpec, Outcome, OutcomeCounts, OutcomeKind,
    Sqrt2Report, SweepConfig, SweepResult,
};
pub use rabbits::{
    decompose, eigen_basis, predict_escape_index, recurrence, EigenData, RecurrenceRun,
};
pub use scalar::{
    affine, cmp_half, parse_scalar, BackendKind, BackendSpec, Branch, Decimal, DecimalContext,
    Real, Scalar,
};
pub use stabilizer::{
    build_coefficients, classify_equilibria, companion_spectrum, companion_step,
    equilibrium_report, stabilized_final, stabilized_orbit, Coefficients, CompanionState,
    EquilibriumReport, Spectrum, StabRun,
};
pub use tent::{itinerary, orbit, tent_power_step, tent_step, Itinerary, MapParams, Orbit};

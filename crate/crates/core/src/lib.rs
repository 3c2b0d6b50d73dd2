//! Sizing and dispatch of hybrid grid-connected hydrogen plants as a linear
//! program, plus emission-intensity certification of the resulting dispatch.
//!
//! The crate is organised bottom-up:
//!
//! * [`types`]: hourly series with unit tags, grid profiles, plant parameters
//!   and scenario descriptions.
//! * [`lp`]: a solver-agnostic LP model with a HiGHS backend and a
//!   vertex-enumeration reference solver for tiny problems.
//! * [`plant`]: plant flows, conversion and storage constraints.
//! * [`policy`]: temporal correlation, emission caps, CAPEX caps and the
//!   two-grid (geographically split) topology.
//! * [`economics`]: CRF, storage cost curves, LCOH and the storage-cost
//!   fixed-point solve.
//! * [`certification`]: market, location, MEF and AEF emission accounting.
//! * [`ingest`]: CSV/JSON file formats, run configuration and fixtures.
//! * [`runner`]: scenario suites and parameter sweeps.

pub mod certification;
pub mod economics;
pub mod ingest;
pub mod lp;
pub mod plant;
pub mod policy;
pub mod runner;
pub mod types;

pub use certification::EmissionsReport;
pub use economics::{optimize_plant, CostBreakdown, OptimizeError, PlantSolution, SolveOptions, StorageTech};
pub use types::{
    CapacityBound, CapacitySpec, Geo, GridMode, GridProfile, HourlySeries, PlantParameters, ScenarioSpec,
    TcInterval, Unit, Zone, ZoneLibrary,
};

/// Hours in the non-leap year the plant parameters are annualised over.
pub const HOURS_PER_YEAR: usize = 8760;

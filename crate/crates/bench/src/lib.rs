//! Shared setup for the criterion benches.

use hydrogrid_core::ingest::{synth_fixture, FixtureKind};
use hydrogrid_core::runner::RunContext;
use hydrogrid_core::{PlantParameters, ZoneLibrary};

/// A run context holding a single synthetic zone named after its fixture.
pub fn fixture_context(kind: FixtureKind, horizon: usize) -> RunContext {
    let fixture = synth_fixture(kind, horizon, 1);
    let mut zones = ZoneLibrary::new();
    zones.insert(kind.name().into(), fixture.zone().clone());
    RunContext::new(PlantParameters::default(), zones, kind.name())
}

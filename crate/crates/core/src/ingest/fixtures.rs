//! Deterministic synthetic zones for tests, benches and demos.
//!
//! Prices are designed in AUD/MWh and stored converted at 0.7 USD/AUD.

use std::fmt;
use std::str::FromStr;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::types::{GridProfile, HourlySeries, Unit, Zone};

const FX: f64 = 0.7;
const WIND_REF_KW: f64 = 320_000.0;
const PV_REF_KW: f64 = 1_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixtureKind {
    /// Constant prices, factors and RE output.
    Flat,
    /// Solar-shaped PV, evening price peak, MEF falling as price rises.
    Diurnal,
    /// Mean-reverting random walks in price, factors and wind.
    RandomWalk,
    /// A high-MEF buy zone and a low-MEF, low-price sell zone.
    TwoZoneContrast,
}

impl FixtureKind {
    pub const ALL: [FixtureKind; 4] = [
        FixtureKind::Flat,
        FixtureKind::Diurnal,
        FixtureKind::RandomWalk,
        FixtureKind::TwoZoneContrast,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixtureKind::Flat => "flat",
            FixtureKind::Diurnal => "diurnal",
            FixtureKind::RandomWalk => "random-walk",
            FixtureKind::TwoZoneContrast => "two-zone-contrast",
        }
    }
}

impl fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FixtureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown fixture `{s}`"))
    }
}

/// Which half of the two-zone fixture to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixtureSide {
    Buy,
    Sell,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub kind: FixtureKind,
    pub seed: u64,
    /// One zone, or `[buy, sell]` for the two-zone fixture.
    pub zones: Vec<Zone>,
}

impl Fixture {
    pub fn zone(&self) -> &Zone {
        &self.zones[0]
    }

    pub fn side(&self, side: FixtureSide) -> &Zone {
        match side {
            FixtureSide::Sell if self.zones.len() > 1 => &self.zones[1],
            _ => &self.zones[0],
        }
    }
}

struct Columns {
    price_aud: Vec<f64>,
    mef: Vec<f64>,
    aef: Vec<f64>,
    wind_cf: Vec<f64>,
    pv_cf: Vec<f64>,
}

impl Columns {
    fn with_capacity(t: usize) -> Self {
        let v = || Vec::with_capacity(t);
        Self {
            price_aud: v(),
            mef: v(),
            aef: v(),
            wind_cf: v(),
            pv_cf: v(),
        }
    }

    fn into_zone(self, zone_id: &str, ef_location: f64, arpp: f64, rmf: f64) -> Zone {
        let series = |v: Vec<f64>, unit| HourlySeries::new(v, unit).expect("fixture values are finite");
        let price = self.price_aud.iter().map(|a| a * FX / 1000.0).collect();
        Zone {
            grid: GridProfile {
                zone_id: zone_id.into(),
                spot_price: series(price, Unit::UsdPerKwh),
                mef: series(self.mef, Unit::KgCo2ePerKwh),
                aef: series(self.aef, Unit::KgCo2ePerKwh),
                ef_location,
                arpp,
                rmf,
            },
            ref_wind: series(self.wind_cf.iter().map(|c| c * WIND_REF_KW).collect(), Unit::Kw),
            ref_pv: series(self.pv_cf.iter().map(|c| c * PV_REF_KW).collect(), Unit::Kw),
        }
    }
}

/// Clear-sky PV shape: a half sine between 06:00 and 18:00.
fn solar_shape(hour_of_day: usize) -> f64 {
    let h = hour_of_day as f64;
    if (6.0..=18.0).contains(&h) {
        (std::f64::consts::PI * (h - 6.0) / 12.0).sin().max(0.0)
    } else {
        0.0
    }
}

fn flat(t: usize) -> Zone {
    Columns {
        price_aud: vec![60.0; t],
        mef: vec![0.5; t],
        aef: vec![0.6; t],
        wind_cf: vec![0.4; t],
        pv_cf: vec![0.25; t],
    }
    .into_zone("flat", 0.71, 0.1872, 0.81)
}

fn diurnal(t: usize, rng: &mut ChaCha8Rng) -> Zone {
    let mut c = Columns::with_capacity(t);
    let mut cloud = 1.0;
    let mut wind_day = 0.0;
    for hour in 0..t {
        let h = hour % 24;
        if h == 0 {
            cloud = rng.random_range(0.6..=1.0);
            wind_day = rng.random_range(-0.1..=0.1);
        }
        let sun = solar_shape(h);
        let peak = if (17..=20).contains(&h) { 90.0 } else { 0.0 };
        let price = 70.0 - 45.0 * sun + peak + rng.random_range(-10.0..=10.0);
        c.price_aud.push(price);
        c.mef
            .push((0.95 - 0.004 * price + rng.random_range(-0.03..=0.03)).clamp(0.05, 1.2));
        c.aef.push(0.8 - 0.35 * sun);
        let wind = 0.35 + 0.15 * (2.0 * std::f64::consts::PI * (h as f64 - 3.0) / 24.0).cos() + wind_day;
        c.wind_cf.push(wind.clamp(0.0, 1.0));
        c.pv_cf.push(sun * cloud);
    }
    c.into_zone("diurnal", 0.71, 0.1872, 0.81)
}

/// Bounded walk that reflects off `[lo, hi]`.
fn reflect(x: f64, lo: f64, hi: f64) -> f64 {
    if x < lo {
        (2.0 * lo - x).min(hi)
    } else if x > hi {
        (2.0 * hi - x).max(lo)
    } else {
        x
    }
}

fn random_walk(t: usize, rng: &mut ChaCha8Rng) -> Zone {
    let mut c = Columns::with_capacity(t);
    let (mut price, mut mef, mut aef, mut wind) = (80.0, 0.6, 0.6, 0.4);
    let mut cloud = 1.0;
    for hour in 0..t {
        if hour % 24 == 0 {
            cloud = rng.random_range(0.3..=1.0);
        }
        price += 0.1 * (80.0 - price) + rng.random_range(-20.0..=20.0);
        mef = reflect(mef + rng.random_range(-0.05..=0.05), 0.1, 1.0);
        aef = reflect(aef + rng.random_range(-0.03..=0.03), 0.3, 0.9);
        wind = reflect(wind + rng.random_range(-0.08..=0.08), 0.0, 1.0);
        c.price_aud.push(price);
        c.mef.push(mef);
        c.aef.push(aef);
        c.wind_cf.push(wind);
        c.pv_cf.push(solar_shape(hour % 24) * cloud);
    }
    c.into_zone("random-walk", 0.66, 0.1872, 0.81)
}

fn two_zone(t: usize) -> Vec<Zone> {
    let pv: Vec<f64> = (0..t).map(|h| solar_shape(h % 24)).collect();
    let buy = Columns {
        price_aud: vec![100.0; t],
        mef: vec![0.52; t],
        aef: vec![0.63; t],
        wind_cf: vec![0.3; t],
        pv_cf: pv.clone(),
    }
    .into_zone("buy", 0.66, 0.1872, 0.81);
    let sell = Columns {
        price_aud: vec![40.0; t],
        mef: vec![0.19; t],
        aef: vec![0.12; t],
        wind_cf: vec![0.45; t],
        pv_cf: pv,
    }
    .into_zone("sell", 0.15, 0.1872, 0.81);
    vec![buy, sell]
}

/// Builds the fixture `kind` over `horizon` hours. The seed only matters for
/// the stochastic kinds; the same seed always gives the same profiles.
pub fn synth_fixture(kind: FixtureKind, horizon: usize, seed: u64) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zones = match kind {
        FixtureKind::Flat => vec![flat(horizon)],
        FixtureKind::Diurnal => vec![diurnal(horizon, &mut rng)],
        FixtureKind::RandomWalk => vec![random_walk(horizon, &mut rng)],
        FixtureKind::TwoZoneContrast => two_zone(horizon),
    };
    Fixture { kind, seed, zones }
}

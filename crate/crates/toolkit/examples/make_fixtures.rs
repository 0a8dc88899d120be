//! Regenerates the synthetic input fixtures under `fixtures/`.
//!
//! cargo run -p gravity-toolkit --example make_fixtures -- <fixtures dir>

use std::fs;
use std::path::{Path, PathBuf};

use gravity_core::{CountryRecord, CountryTable, GeoPoint};
use gravity_toolkit::ingest::{write_countries, write_trades};
use gravity_toolkit::synth::{censor_smallest, generate, gravity_flows, WorldSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn write_world(dir: &Path, table: &CountryTable, ex: &gravity_core::DirectedTradeMatrix) {
    fs::create_dir_all(dir).unwrap();
    write_countries(table, &dir.join("gdp.csv"), &dir.join("capitals.csv")).unwrap();
    write_trades(table, ex, &dir.join("trade.csv")).unwrap();
}

fn main() {
    let root = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));

    // N = 50, exact gravity flows, smallest 30% of pairs removed
    let (table, ex) = generate(&WorldSpec::default()).unwrap();
    write_world(&root.join("synthetic50_censored"), &table, &censor_smallest(&ex, 0.3).unwrap());

    // ten real capitals with rounded 2014 GDPs; flows are synthetic
    let countries = [
        ("AUS", "Canberra", 1.47e12, -35.2809, 149.13),
        ("BRA", "Brasilia", 2.46e12, -15.7939, -47.8828),
        ("CHN", "Beijing", 10.48e12, 39.9042, 116.4074),
        ("DEU", "Berlin", 3.89e12, 52.52, 13.405),
        ("FRA", "Paris", 2.85e12, 48.8566, 2.3522),
        ("IDN", "Jakarta", 0.89e12, -6.2088, 106.8456),
        ("IND", "New Delhi", 2.04e12, 28.6139, 77.209),
        ("JPN", "Tokyo", 4.85e12, 35.6762, 139.6503),
        ("USA", "Washington, D.C.", 17.52e12, 38.9072, -77.0369),
        ("ZAF", "Pretoria", 0.35e12, -25.7479, 28.2293),
    ];
    let records = countries
        .iter()
        .map(|&(iso, cap, gdp, lat, lon)| CountryRecord {
            iso: iso.into(),
            capital_name: cap.into(),
            gdp_usd: gdp,
            capital: GeoPoint::new(lat, lon).unwrap(),
        })
        .collect();
    let table = CountryTable::new(2014, records).unwrap();
    let spec = WorldSpec { delta: 1.0, beta: -1.1, k: 1e-12, noise: 0.6, ..WorldSpec::default() };
    let ex = gravity_flows(&table, &spec, &mut ChaCha8Rng::seed_from_u64(10)).unwrap();
    write_world(&root.join("mini10"), &table, &censor_smallest(&ex, 0.15).unwrap());
}

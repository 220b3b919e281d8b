//! A small six-appliance demo dataset (36 samples at a 5-minute step) used
//! by tests, docs, and the golden CLI checks: stove, toaster, microwave,
//! clothes washer, dryer, and iron, each either On or Off.

use crate::transform::{SymbolicDatabase, SymbolicSeries};

/// Per-variable On/Off encoding, one char per sample.
const ROWS: [(&str, &str); 6] = [
    ("S", "111100011000000111000011100110011100"),
    ("T", "011100011001100111000011100110001110"),
    ("M", "000011100111011000110110011001110011"),
    ("W", "000011100110111000110110011001110011"),
    ("D", "000000000110000011000000000110001100"),
    ("I", "000000011000000000110000000110000011"),
];

/// Builds the demo symbolic database. Six binary series over 36 samples;
/// the grid unit is 5 (minutes per step).
pub fn appliance_demo() -> SymbolicDatabase {
    let series = ROWS
        .iter()
        .map(|(name, bits)| {
            SymbolicSeries::from_symbols(
                *name,
                bits.chars().map(|c| if c == '1' { "On" } else { "Off" }),
            )
        })
        .collect();
    SymbolicDatabase::new(series, 5).expect("demo data is well-formed")
}

/// The demo database rendered as wide CSV (time column plus one column per
/// variable), for CLI round-trip tests.
pub fn appliance_demo_csv() -> String {
    let db = appliance_demo();
    let mut out = String::from("time");
    for s in &db.series {
        out.push(',');
        out.push_str(&s.variable);
    }
    out.push('\n');
    for i in 0..db.grid_len() {
        out.push_str(&format!("{}", i as u64 * db.grid_unit));
        for s in &db.series {
            out.push(',');
            out.push_str(&s.symbols[i].1);
        }
        out.push('\n');
    }
    out
}

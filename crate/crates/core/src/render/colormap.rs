//! Tabulated 256-entry palettes from Fabio Crameri's scientific colour maps
//! (MIT licensed, see `resources/COLORMAPS.md`).

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub const BLACK: Rgb = Rgb(0, 0, 0);
    pub const WHITE: Rgb = Rgb(255, 255, 255);

    pub fn hex(self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }
}

pub const PALETTE_SIZE: usize = 256;

fn parse_table(csv: &str) -> Vec<Rgb> {
    csv.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split(',').map(|v| v.trim().parse::<u8>().expect("bundled palette is valid"));
            Rgb(it.next().unwrap(), it.next().unwrap(), it.next().unwrap())
        })
        .collect()
}

/// Cyclic palette (romaO).
pub fn cyclic() -> &'static [Rgb] {
    static TABLE: OnceLock<Vec<Rgb>> = OnceLock::new();
    TABLE.get_or_init(|| parse_table(include_str!("../../resources/romaO.csv")))
}

/// Sequential palette (batlow).
pub fn sequential() -> &'static [Rgb] {
    static TABLE: OnceLock<Vec<Rgb>> = OnceLock::new();
    TABLE.get_or_init(|| parse_table(include_str!("../../resources/batlow.csv")))
}

/// Colour for a straight-line edge direction. Directed edges use the full
/// circle; undirected edges fold opposite directions together, so the
/// palette wraps once per half turn.
pub fn angle_color(angle: f64, directed: bool) -> Rgb {
    let period = if directed { TAU } else { PI };
    let t = angle.rem_euclid(period) / period;
    let idx = ((t * PALETTE_SIZE as f64).floor() as usize) % PALETTE_SIZE;
    cyclic()[idx]
}

/// Sequential colour for `value` normalized to `[min, max]`. A flat range
/// maps everything to the first entry.
pub fn sequential_color(value: f64, min: f64, max: f64) -> Rgb {
    let idx = if max > min {
        let t = ((value - min) / (max - min)).clamp(0.0, 1.0);
        (t * (PALETTE_SIZE - 1) as f64).round() as usize
    } else {
        0
    };
    sequential()[idx]
}

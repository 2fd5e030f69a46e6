//! Bundled seeds.
//!
//! Rank-2 presets use `{e_2, e_1} = 1`, so `B = [[0, -d1], [d2, 0]]`.

use crate::lattice::{FixedData, Seed};
use crate::{invalid, Result};

/// A named exchange matrix with its symmetrizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub b: Vec<Vec<i64>>,
    pub delta: Vec<i64>,
    pub summary: &'static str,
}

impl Preset {
    pub fn data(&self) -> FixedData {
        FixedData::from_exchange_matrix(&self.b, &self.delta).expect("bundled presets are valid")
    }

    pub fn seed(&self) -> Seed {
        Seed::initial(self.data())
    }
}

/// Rank-2 fixed data with `{e_2, e_1} = 1` and the given `delta`.
pub fn rank2(d1: i64, d2: i64) -> Result<FixedData> {
    FixedData::from_exchange_matrix(&[vec![0, -d1], vec![d2, 0]], &[d1, d2])
}

fn r2(name: &'static str, d1: i64, d2: i64, summary: &'static str) -> Preset {
    Preset { name, b: vec![vec![0, -d1], vec![d2, 0]], delta: vec![d1, d2], summary }
}

/// Every bundled preset, in display order.
pub fn all() -> Vec<Preset> {
    vec![
        r2("A2", 1, 1, "finite type, five chambers"),
        r2("B2", 1, 2, "finite type, six chambers"),
        r2("C2", 2, 1, "finite type, six chambers"),
        r2("G2", 1, 3, "finite type, eight chambers"),
        r2("A1(1)", 2, 2, "affine rank 2"),
        r2("A2(2)", 1, 4, "affine rank 2"),
        Preset {
            name: "A3",
            b: vec![vec![0, -1, 0], vec![1, 0, -1], vec![0, 1, 0]],
            delta: vec![1, 1, 1],
            summary: "finite type rank 3",
        },
        Preset {
            name: "B3",
            b: vec![vec![0, -1, 0], vec![1, 0, -1], vec![0, 2, 0]],
            delta: vec![1, 1, 2],
            summary: "finite type rank 3",
        },
        Preset {
            name: "C3",
            b: vec![vec![0, -1, 0], vec![1, 0, -2], vec![0, 1, 0]],
            delta: vec![2, 2, 1],
            summary: "finite type rank 3",
        },
        Preset {
            name: "A2(1)",
            b: vec![vec![0, -1, -1], vec![1, 0, -1], vec![1, 1, 0]],
            delta: vec![1, 1, 1],
            summary: "affine rank 3",
        },
        Preset {
            name: "Markov",
            b: vec![vec![0, -1, 0], vec![1, 0, -2], vec![0, 2, 0]],
            delta: vec![1, 1, 1],
            summary: "non-affine rank 3 with a fractal chamber structure",
        },
    ]
}

fn normalize(name: &str) -> String {
    name.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_uppercase()
}

/// Looks up a preset by name; punctuation and case are ignored, so `a11` finds `A1(1)`.
pub fn by_name(name: &str) -> Result<Preset> {
    let key = normalize(name);
    let found = all().into_iter().find(|p| normalize(p.name) == key);
    match found {
        Some(p) => Ok(p),
        None => {
            let names: Vec<&str> = all().iter().map(|p| p.name).collect();
            invalid(format!("unknown preset '{name}'; available: {}", names.join(", ")))
        }
    }
}

/// Initial seed of a preset.
pub fn seed(name: &str) -> Result<Seed> {
    Ok(by_name(name)?.seed())
}

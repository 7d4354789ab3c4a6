//! JSON formats for interval systems, chord diagrams and colourings.
//!
//! ```text
//! system:   {"intervals": [{"id": "A", "left": 0.5, "right": 3}, ...]}
//! diagram:  {"n": 7, "chords": [{"a": "p3", "b": "q5", "mult": 2}, ...]}
//! colouring: {"colors": {"A": 1, ...}, "colour_sets": [{"gap": 5, "colors": [1, 2]}],
//!             "pillar_order": [5], "chi_used": 2, "complete": true, "stats": {...}}
//! ```
//!
//! System endpoints may be any finite numbers; they are rank-compressed on load.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::chord::{Chord, ChordDiagram, ChordError, Point};
use crate::pillar::{Colour, PillarState};
use crate::solver::{CompleteColouring, SolveStats};
use crate::system::{canonicalize, Gap, IntervalSystem, SystemError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Chord(#[from] ChordError),
    #[error("interval {id:?}: {what}")]
    BadInterval { id: String, what: String },
    #[error("colour of {id:?} must be a positive integer")]
    BadColour { id: String },
}

#[derive(Debug, Serialize, Deserialize)]
struct RawSystem {
    intervals: Vec<RawInterval>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawInterval {
    id: Value,
    left: Value,
    right: Value,
}

fn id_string(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

/// Endpoint value, kept exact for integers.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
enum Coord {
    Int(i128),
    Float(f64),
}

impl Coord {
    fn parse(v: &Value) -> Option<Coord> {
        let Value::Number(n) = v else { return None };
        if let Some(i) = n.as_i64() {
            Some(Coord::Int(i.into()))
        } else if let Some(u) = n.as_u64() {
            Some(Coord::Int(u.into()))
        } else {
            n.as_f64().filter(|f| f.is_finite()).map(Coord::Float)
        }
    }
}

// Mixed comparisons go through f64; integers compare exactly among themselves.
#[derive(Debug, Clone, Copy)]
struct Key(Coord);

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(std::cmp::Ordering::Equal)
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        match (self.0, other.0) {
            (Coord::Int(a), Coord::Int(b)) => a.partial_cmp(&b),
            (Coord::Int(a), Coord::Float(b)) => (a as f64).partial_cmp(&b),
            (Coord::Float(a), Coord::Int(b)) => a.partial_cmp(&(b as f64)),
            (Coord::Float(a), Coord::Float(b)) => a.partial_cmp(&b),
        }
    }
}

pub fn parse_system(text: &str) -> Result<IntervalSystem, FormatError> {
    let raw: RawSystem = serde_json::from_str(text)?;
    let mut items = Vec::with_capacity(raw.intervals.len());
    for (pos, iv) in raw.intervals.iter().enumerate() {
        let id = id_string(&iv.id).ok_or_else(|| FormatError::BadInterval {
            id: format!("#{pos}"),
            what: "id must be a string or number".into(),
        })?;
        let coord = |v: &Value, side: &str| {
            Coord::parse(v)
                .map(Key)
                .ok_or_else(|| FormatError::BadInterval {
                    id: id.clone(),
                    what: format!("{side} endpoint must be a finite number"),
                })
        };
        let left = coord(&iv.left, "left")?;
        let right = coord(&iv.right, "right")?;
        items.push((id, left, right));
    }
    Ok(canonicalize(items)?)
}

pub fn system_to_json(sys: &IntervalSystem) -> Value {
    let intervals = sys
        .intervals()
        .iter()
        .map(|iv| serde_json::json!({"id": iv.id, "left": iv.left, "right": iv.right}))
        .collect::<Vec<_>>();
    serde_json::json!({ "intervals": intervals })
}

#[derive(Debug, Serialize, Deserialize)]
struct RawDiagram {
    n: u32,
    chords: Vec<RawChord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawChord {
    a: String,
    b: String,
    #[serde(default = "one")]
    mult: u32,
}

fn one() -> u32 {
    1
}

pub fn parse_diagram(text: &str) -> Result<ChordDiagram, FormatError> {
    let raw: RawDiagram = serde_json::from_str(text)?;
    let chords = raw
        .chords
        .iter()
        .map(|c| {
            Ok(Chord {
                a: c.a.parse::<Point>()?,
                b: c.b.parse::<Point>()?,
                mult: c.mult,
            })
        })
        .collect::<Result<Vec<_>, ChordError>>()?;
    Ok(ChordDiagram::new(raw.n, chords)?)
}

pub fn diagram_to_json(d: &ChordDiagram) -> Value {
    let raw = RawDiagram {
        n: d.n(),
        chords: d
            .chords()
            .iter()
            .map(|c| RawChord {
                a: c.a.to_string(),
                b: c.b.to_string(),
                mult: c.mult,
            })
            .collect(),
    };
    serde_json::to_value(raw).expect("diagram serializes")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColourSetEntry {
    pub gap: Gap,
    pub colors: Vec<Colour>,
}

/// Colouring output document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColouringOutput {
    pub colors: BTreeMap<String, Colour>,
    pub colour_sets: Vec<ColourSetEntry>,
    pub pillar_order: Vec<Gap>,
    pub chi_used: usize,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<SolveStats>,
}

impl ColouringOutput {
    /// Output for a pillar state; uncoloured intervals are left out of `colors`.
    pub fn from_state(state: &PillarState<'_>) -> Self {
        let sys = state.system();
        ColouringOutput {
            colors: sys
                .intervals()
                .iter()
                .enumerate()
                .filter_map(|(i, iv)| state.colour(i).map(|c| (iv.id.clone(), c)))
                .collect(),
            colour_sets: state
                .pillar_order()
                .iter()
                .zip(state.colour_sets())
                .map(|(&gap, set)| ColourSetEntry {
                    gap,
                    colors: set.as_slice().to_vec(),
                })
                .collect(),
            pillar_order: state.pillar_order().to_vec(),
            chi_used: state.chi_used(),
            complete: state.is_complete(),
            stats: None,
        }
    }

    pub fn from_solution(sys: &IntervalSystem, sol: &CompleteColouring) -> Self {
        ColouringOutput {
            colors: sol.colour_map(sys),
            colour_sets: sol
                .pillar_order
                .iter()
                .zip(&sol.colour_sets)
                .map(|(&gap, set)| ColourSetEntry {
                    gap,
                    colors: set.as_slice().to_vec(),
                })
                .collect(),
            pillar_order: sol.pillar_order.clone(),
            chi_used: sol.stats.colors_used,
            complete: true,
            stats: Some(sol.stats.clone()),
        }
    }
}

#[derive(Debug, Deserialize)]
struct RawColours {
    colors: BTreeMap<String, Value>,
}

/// Reads the `colors` object of a colouring document; other fields are ignored.
pub fn parse_colours(text: &str) -> Result<BTreeMap<String, Colour>, FormatError> {
    let raw: RawColours = serde_json::from_str(text)?;
    raw.colors
        .into_iter()
        .map(|(id, v)| {
            let c = v
                .as_u64()
                .filter(|&c| c >= 1 && c <= u64::from(Colour::MAX))
                .ok_or_else(|| FormatError::BadColour { id: id.clone() })?;
            Ok((id, c as Colour))
        })
        .collect()
}

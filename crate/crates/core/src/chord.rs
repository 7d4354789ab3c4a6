//! Chord diagrams on `2n` cyclic points `p1, q1, ..., pn, qn` and their
//! conversion to interval systems.
//!
//! Chords are open and may coincide: coinciding chords intersect, chords that
//! share exactly one endpoint do not.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::system::{Interval, IntervalSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChordError {
    #[error("malformed point label {0:?} (expected p<i> or q<i>)")]
    BadLabel(String),
    #[error("point {label} outside 1..={n}")]
    PointOutOfRange { label: String, n: u32 },
    #[error("chord {0} joins a point to itself")]
    Loop(usize),
    #[error("chord {0} has multiplicity zero")]
    ZeroMultiplicity(usize),
    #[error("diagram must have n >= 1")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    P,
    Q,
}

/// One of the labelled circle points; `index` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub side: Side,
    pub index: u32,
}

impl Point {
    pub fn p(index: u32) -> Self {
        Point {
            side: Side::P,
            index,
        }
    }

    pub fn q(index: u32) -> Self {
        Point {
            side: Side::Q,
            index,
        }
    }

    /// Clockwise position in `0..2n`.
    pub fn position(self) -> u32 {
        2 * (self.index - 1) + u32::from(self.side == Side::Q)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.side {
            Side::P => 'p',
            Side::Q => 'q',
        };
        write!(f, "{c}{}", self.index)
    }
}

impl FromStr for Point {
    type Err = ChordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ChordError::BadLabel(s.to_string());
        let mut chars = s.chars();
        let side = match chars.next() {
            Some('p') | Some('P') => Side::P,
            Some('q') | Some('Q') => Side::Q,
            _ => return Err(bad()),
        };
        let index: u32 = chars.as_str().parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(Point { side, index })
    }
}

/// A chord with its number of coinciding copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chord {
    pub a: Point,
    pub b: Point,
    pub mult: u32,
}

impl Chord {
    fn positions(&self) -> (u32, u32) {
        let (x, y) = (self.a.position(), self.b.position());
        (x.min(y), x.max(y))
    }
}

/// Whether two chords of one diagram intersect.
///
/// Coinciding chords intersect; chords sharing exactly one endpoint do not;
/// otherwise they intersect iff their endpoints interleave around the circle.
pub fn chords_intersect(c1: &Chord, c2: &Chord) -> bool {
    let (x1, y1) = c1.positions();
    let (x2, y2) = c2.positions();
    if (x1, y1) == (x2, y2) {
        return true;
    }
    if x1 == x2 || x1 == y2 || y1 == x2 || y1 == y2 {
        return false;
    }
    let inside = |v: u32| x1 < v && v < y1;
    inside(x2) != inside(y2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChordDiagram {
    n: u32,
    chords: Vec<Chord>,
}

impl ChordDiagram {
    pub fn new(n: u32, chords: Vec<Chord>) -> Result<Self, ChordError> {
        if n == 0 {
            return Err(ChordError::Empty);
        }
        for (i, c) in chords.iter().enumerate() {
            for pt in [c.a, c.b] {
                if pt.index == 0 || pt.index > n {
                    return Err(ChordError::PointOutOfRange {
                        label: pt.to_string(),
                        n,
                    });
                }
            }
            if c.a == c.b {
                return Err(ChordError::Loop(i));
            }
            if c.mult == 0 {
                return Err(ChordError::ZeroMultiplicity(i));
            }
        }
        Ok(ChordDiagram { n, chords })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn chords(&self) -> &[Chord] {
        &self.chords
    }

    /// Number of chords counting multiplicity.
    pub fn chord_count(&self) -> usize {
        self.chords.iter().map(|c| c.mult as usize).sum()
    }

    /// Every copy as `(chord index, copy index)`, in chord order then copy order.
    /// Interval `k` of [`chords_to_intervals`] is copy `k` of this list.
    pub fn expanded(&self) -> Vec<(usize, u32)> {
        self.chords
            .iter()
            .enumerate()
            .flat_map(|(i, c)| (0..c.mult).map(move |t| (i, t)))
            .collect()
    }
}

/// Converts a chord diagram to an interval system with an isomorphic overlap
/// graph.
///
/// Each circle point is widened into one slot per incident chord copy. At a
/// point, copies are ordered by the clockwise distance to their other endpoint,
/// farthest first, so chords sharing just this point nest instead of crossing;
/// copies of one chord keep their copy order at both ends, so they pairwise
/// interleave. The circle is cut just before `p1`. Interval ids are the 1-based
/// positions in [`ChordDiagram::expanded`].
pub fn chords_to_intervals(d: &ChordDiagram) -> IntervalSystem {
    let points = 2 * d.n;
    let expanded = d.expanded();
    // Entries with equal endpoints are grouped under their first occurrence so
    // duplicate entries still interleave like copies.
    let group: Vec<usize> = (0..d.chords.len())
        .map(|ci| {
            let key = d.chords[ci].positions();
            (0..=ci)
                .find(|&o| d.chords[o].positions() == key)
                .unwrap_or(ci)
        })
        .collect();
    // (point, farther-target-first key, group, copy, expanded index) for both ends.
    let mut slots: Vec<(u32, u32, usize, u32, usize)> = Vec::with_capacity(2 * expanded.len());
    for (k, &(ci, t)) in expanded.iter().enumerate() {
        let c = &d.chords[ci];
        let (pa, pb) = (c.a.position(), c.b.position());
        for (here, there) in [(pa, pb), (pb, pa)] {
            let clockwise = (there + points - here) % points;
            slots.push((here, points - clockwise, group[ci], t, k));
        }
    }
    slots.sort_unstable();
    let mut ends = vec![(0u32, 0u32); expanded.len()];
    for (pos, &(.., k)) in slots.iter().enumerate() {
        let rank = pos as u32 + 1;
        if ends[k].0 == 0 {
            ends[k].0 = rank;
        } else {
            ends[k].1 = rank;
        }
    }
    let intervals = ends
        .into_iter()
        .enumerate()
        .map(|(k, (a, b))| Interval::new((k + 1).to_string(), a.min(b), a.max(b)))
        .collect();
    IntervalSystem::from_ranks(intervals).expect("slot ranks form a permutation")
}

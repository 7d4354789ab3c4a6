//! Colouring circle graphs with ordered pillar assignments.
//!
//! Circle graphs are handled as overlap graphs of rank-compressed interval
//! systems. [`solver::colour`] produces a proper colouring with at most
//! `2w log2 w + 2w log2 log2 w + 10w` colours, where `w` is the clique number.
//! The crate also ships the matching lower-bound chord diagrams and small exact
//! oracles used to cross-check everything at desk scale.

pub mod chord;
pub mod dominance;
pub mod format;
pub mod graph;
pub mod lowerbound;
pub mod oracle;
pub mod pillar;
pub mod rng;
pub mod solver;
pub mod system;

pub use chord::{chords_intersect, chords_to_intervals, Chord, ChordDiagram, Point};
pub use dominance::{omega, Clique};
pub use graph::{overlap_graph, Graph};
pub use pillar::{build_colouring, Colour, ColourSet, GapInterval, PillarState};
pub use solver::{colour, CompleteColouring, SolveStats};
pub use system::{canonicalize, Gap, Interval, IntervalSystem, Rank};

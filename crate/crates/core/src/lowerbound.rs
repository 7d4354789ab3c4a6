//! The chord diagrams `D(n, w)` with clique number at most `w`, no `n` pairwise
//! disjoint chords, and more than `n w (ln w - 2)` chords.
//!
//! Points are `p1, q1, ..., pn, qn` clockwise. For every `i` in `1..=n` and
//! `j` in `1..w` the diagram holds `floor(w / (j + 1))` coinciding chords from
//! `p_i` to `q_{i+j}`, indices taken modulo `n` in `1..=n`.

use serde::Serialize;
use thiserror::Error;

use crate::chord::{chords_to_intervals, Chord, ChordDiagram, Point};
use crate::dominance::omega;
use crate::graph::Graph;
use crate::oracle::{maximum_clique, maximum_stable_set};

pub use crate::chord::chords_intersect;

/// Relative slack on the strict size inequality.
const SIZE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LowerBoundError {
    #[error("n = {n} must exceed 3w - 3 = {min} for w = {omega}")]
    NTooSmall { n: u32, omega: u32, min: i64 },
    #[error("omega must be at least 1")]
    OmegaZero,
}

fn check_params(n: u32, omega: u32) -> Result<(), LowerBoundError> {
    if omega == 0 {
        return Err(LowerBoundError::OmegaZero);
    }
    let min = 3 * i64::from(omega) - 3;
    if i64::from(n) <= min {
        return Err(LowerBoundError::NTooSmall { n, omega, min });
    }
    Ok(())
}

/// `n * sum_{j=1}^{w-1} floor(w / (j + 1))`.
pub fn closed_form_count(n: u32, omega: u32) -> u64 {
    let per_point: u64 = (1..omega).map(|j| u64::from(omega / (j + 1))).sum();
    u64::from(n) * per_point
}

/// `n w (ln w - 2)`.
pub fn size_lower_bound(n: u32, omega: u32) -> f64 {
    let w = f64::from(omega);
    f64::from(n) * w * (w.ln() - 2.0)
}

pub fn generate_d(n: u32, omega: u32) -> Result<ChordDiagram, LowerBoundError> {
    check_params(n, omega)?;
    let mut chords = Vec::new();
    for i in 1..=n {
        for j in 1..omega {
            let mult = omega / (j + 1);
            if mult == 0 {
                continue;
            }
            chords.push(Chord {
                a: Point::p(i),
                b: Point::q((i + j - 1) % n + 1),
                mult,
            });
        }
    }
    Ok(ChordDiagram::new(n, chords).expect("generated chords are valid"))
}

/// Intersection graph on expanded chord copies, in [`ChordDiagram::expanded`]
/// order. Copies of one chord are adjacent.
pub fn chord_intersection_graph(d: &ChordDiagram) -> Graph {
    let exp = d.expanded();
    let ids = (1..=exp.len()).map(|k| k.to_string()).collect();
    let mut edges = Vec::new();
    for a in 0..exp.len() {
        for b in a + 1..exp.len() {
            let (ca, cb) = (&d.chords()[exp[a].0], &d.chords()[exp[b].0]);
            if exp[a].0 == exp[b].0 || chords_intersect(ca, cb) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(ids, edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CheckMethod {
    #[serde(rename = "brute_force")]
    BruteForce,
    #[serde(rename = "polynomial")]
    Polynomial,
    #[serde(rename = "skipped")]
    Skipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn ceil(self) -> u64 {
        self.num.div_ceil(self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub n: u32,
    pub omega: u32,
    pub chord_count: u64,
    pub closed_form_count: u64,
    pub size_lower_bound: f64,
    pub count_exceeds_bound: bool,
    /// Largest set of pairwise intersecting chords found.
    pub clique_checked: u32,
    pub clique_method: CheckMethod,
    /// Largest set of pairwise disjoint chords, when computed.
    pub stable_checked: Option<u32>,
    pub stable_method: CheckMethod,
    /// `chord_count / (n - 1)`; absent when `n = 1`.
    pub chi_lower: Option<Ratio>,
    pub chi_lower_ceil: Option<u64>,
    pub passed: bool,
}

/// Builds `D(n, w)` and checks its size, clique and stable-set bounds.
///
/// Brute-force searches run when the expanded chord count is at most
/// `brute_limit`. Above it the clique number comes from the interval
/// conversion and the stable-set check is skipped.
pub fn verify_lower_bound_instance(
    n: u32,
    omega_param: u32,
    brute_limit: usize,
) -> Result<LowerBoundReport, LowerBoundError> {
    let d = generate_d(n, omega_param)?;
    let chord_count = d.chord_count() as u64;
    let closed = closed_form_count(n, omega_param);
    let size_lb = size_lower_bound(n, omega_param);
    let count_exceeds_bound = (chord_count as f64) > size_lb - SIZE_SLACK * size_lb.abs();

    let small = d.chord_count() <= brute_limit;
    let (clique, clique_method, stable, stable_method) = if small {
        let g = chord_intersection_graph(&d);
        (
            maximum_clique(&g).len() as u32,
            CheckMethod::BruteForce,
            Some(maximum_stable_set(&g).len() as u32),
            CheckMethod::BruteForce,
        )
    } else {
        let sys = chords_to_intervals(&d);
        (
            omega(&sys).size,
            CheckMethod::Polynomial,
            None,
            CheckMethod::Skipped,
        )
    };
    let chi_lower = (n > 1).then_some(Ratio {
        num: chord_count,
        den: u64::from(n) - 1,
    });
    let passed = chord_count == closed
        && count_exceeds_bound
        && clique <= omega_param
        && stable.is_none_or(|s| s < n);
    Ok(LowerBoundReport {
        n,
        omega: omega_param,
        chord_count,
        closed_form_count: closed,
        size_lower_bound: size_lb,
        count_exceeds_bound,
        clique_checked: clique,
        clique_method,
        stable_checked: stable,
        stable_method,
        chi_lower,
        chi_lower_ceil: chi_lower.map(Ratio::ceil),
        passed,
    })
}

//! The constructive colouring loop.
//!
//! Each round takes the uncoloured interval with the smallest left endpoint,
//! looks at the arch `K` around it, sweeps `K` left to right to cut it into
//! blocks of degree `2w`, and appends those cuts (plus a gap inside the chosen
//! interval) as pillars in median-first order. Every step is checked against
//! the degree and colour-count inequalities the construction guarantees; a
//! failed check aborts with [`SolveError::InvariantViolation`].

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::dominance::omega;
use crate::oracle::first_conflict;
use crate::pillar::{Colour, ColourCounter, ColourSet, GapInterval, PillarError, PillarState};
use crate::system::{Gap, IntervalSystem};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("omega = {0} is below 2; the bound is undefined")]
    OmegaTooSmall(u32),
    #[error("({}, {}) is not an arch of the current state", .0.lo, .0.hi)]
    NotAnArch(GapInterval),
    #[error("gap {gap} is not strictly inside arch ({}, {})", arch.lo, arch.hi)]
    GapOutsideArch { gap: Gap, arch: GapInterval },
    #[error("gap {0} appears twice in the extension set")]
    DuplicatePillarGap(Gap),
    #[error("arch ({}, {}) contains no uncoloured interval", .0.lo, .0.hi)]
    NoUncolouredIntervalInArch(GapInterval),
    #[error(transparent)]
    Pillar(#[from] PillarError),
    #[error("invariant violated: {0}")]
    InvariantViolation(Box<Diagnostic>),
}

/// Structured report of a failed runtime check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub check: &'static str,
    pub arch: (Gap, Gap),
    pub observed: f64,
    pub limit: f64,
    pub omega: u32,
    pub pillar_count: usize,
    pub uncoloured: usize,
    pub chi_used: usize,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} at arch ({}, {}): observed {} > limit {} (omega {}, {} pillars, {} uncoloured, {} colours)",
            self.check,
            self.arch.0,
            self.arch.1,
            self.observed,
            self.limit,
            self.omega,
            self.pillar_count,
            self.uncoloured,
            self.chi_used
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub omega: u32,
    pub colors_used: usize,
    pub bound: u32,
    pub pillar_count: usize,
    pub iteration_count: usize,
    pub max_arch_degree_seen: usize,
    pub assertions_checked: u64,
}

/// A total proper colouring together with the pillar data that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct CompleteColouring {
    /// Colour of interval `i` (system order).
    pub colours: Vec<Colour>,
    pub pillar_order: Vec<Gap>,
    pub colour_sets: Vec<ColourSet>,
    pub stats: SolveStats,
}

impl CompleteColouring {
    /// Colours keyed by interval id.
    pub fn colour_map(&self, sys: &IntervalSystem) -> BTreeMap<String, Colour> {
        sys.intervals()
            .iter()
            .zip(&self.colours)
            .map(|(iv, &c)| (iv.id.clone(), c))
            .collect()
    }
}

/// `ceil(2w log2 w + 2w log2 log2 w + 10w)`.
pub fn bound(omega: u32) -> Result<u32, SolveError> {
    if omega < 2 {
        return Err(SolveError::OmegaTooSmall(omega));
    }
    let w = f64::from(omega);
    Ok((2.0 * w * w.log2() + 2.0 * w * w.log2().log2() + 10.0 * w).ceil() as u32)
}

/// `ceil(w log2 w + w log2 log2 w + 6w)`, the arch degree kept between rounds.
pub fn arch_degree_limit(omega: u32) -> Result<u32, SolveError> {
    if omega < 2 {
        return Err(SolveError::OmegaTooSmall(omega));
    }
    let w = f64::from(omega);
    Ok((w * w.log2() + w * w.log2().log2() + 6.0 * w).ceil() as u32)
}

/// Strict upper limit on the number of sweep cuts in one arch.
fn sweep_cut_limit(omega: u32) -> f64 {
    let w = f64::from(omega);
    w * w.log2() + w * w.log2().log2() + 5.0 * w
}

fn ceil_log2(x: usize) -> u32 {
    x.next_power_of_two().trailing_zeros()
}

/// Output of one sweep over an arch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sweep {
    pub arch: GapInterval,
    /// Cuts `q_1 < ... < q_n`; each block `(q_{i-1}, q_i)` has degree `2w`.
    pub cuts: Vec<Gap>,
    /// The uncoloured interval the round is built around.
    pub anchor_interval: usize,
    /// `l(anchor_interval)`, a gap strictly inside it.
    pub anchor: Gap,
    /// Sorted, deduplicated union of `cuts` and `anchor`.
    pub pillars: Vec<Gap>,
}

/// Scratch and counters shared by the checked steps of one solve.
struct Checker {
    omega: u32,
    counter: ColourCounter,
    assertions: u64,
    max_arch_degree: usize,
}

impl Checker {
    fn new(omega: u32) -> Self {
        Checker {
            omega,
            counter: ColourCounter::new(),
            assertions: 0,
            max_arch_degree: 0,
        }
    }

    fn degree(&mut self, state: &PillarState<'_>, j: GapInterval) -> usize {
        state.degree_with(j, &mut self.counter)
    }

    fn ensure(
        &mut self,
        state: &PillarState<'_>,
        check: &'static str,
        arch: GapInterval,
        ok: bool,
        observed: f64,
        limit: f64,
    ) -> Result<(), SolveError> {
        self.assertions += 1;
        if ok {
            return Ok(());
        }
        let diag = Diagnostic {
            check,
            arch: (arch.lo, arch.hi),
            observed,
            limit,
            omega: self.omega,
            pillar_count: state.pillar_order().len(),
            uncoloured: state.uncoloured_count(),
            chi_used: state.chi_used(),
        };
        log::error!("{diag}");
        Err(SolveError::InvariantViolation(Box::new(diag)))
    }

    fn sweep(&mut self, state: &PillarState<'_>, arch: GapInterval) -> Result<Sweep, SolveError> {
        check_arch(state, arch)?;
        let sys = state.system();
        let anchor_interval = arch
            .ranks()
            .map(|r| sys.owner(r))
            .find(|&i| {
                let iv = sys.interval(i);
                state.colour(i).is_none()
                    && arch.contains_rank(iv.left)
                    && arch.contains_rank(iv.right)
            })
            .ok_or(SolveError::NoUncolouredIntervalInArch(arch))?;
        let anchor = sys.interval(anchor_interval).left;

        let target = 2 * self.omega as usize;
        let mut cuts = Vec::new();
        let mut start = arch.lo;
        loop {
            // Find where the running count hits 2w, and keep the cut only if the
            // rest of the arch goes beyond 2w.
            self.counter.reset();
            let mut count = 0;
            let mut candidate = None;
            let mut exceeded = false;
            for rank in start + 1..=arch.hi {
                if let Some(c) = state.colour(sys.owner(rank)) {
                    if self.counter.insert(c) {
                        count += 1;
                        if count == target {
                            candidate = Some(rank);
                        } else if count > target {
                            exceeded = true;
                            break;
                        }
                    }
                }
            }
            match candidate {
                Some(q) if exceeded => {
                    cuts.push(q);
                    start = q;
                }
                _ => break,
            }
        }

        let mut pillars = cuts.clone();
        pillars.push(anchor);
        pillars.sort_unstable();
        pillars.dedup();
        let sweep = Sweep {
            arch,
            cuts,
            anchor_interval,
            anchor,
            pillars,
        };
        self.check_sweep(state, &sweep)?;
        Ok(sweep)
    }

    fn check_sweep(&mut self, state: &PillarState<'_>, sweep: &Sweep) -> Result<(), SolveError> {
        let arch = sweep.arch;
        let w = self.omega as usize;
        let n = sweep.cuts.len();
        let mut bounds = Vec::with_capacity(n + 2);
        bounds.push(arch.lo);
        bounds.extend(&sweep.cuts);
        bounds.push(arch.hi);
        for (i, b) in bounds.windows(2).enumerate() {
            let d = self.degree(state, GapInterval::new(b[0], b[1]));
            if i < n {
                self.ensure(
                    state,
                    "sweep block degree",
                    arch,
                    d == 2 * w,
                    d as f64,
                    (2 * w) as f64,
                )?;
            } else {
                self.ensure(
                    state,
                    "sweep tail degree",
                    arch,
                    d <= 2 * w,
                    d as f64,
                    (2 * w) as f64,
                )?;
            }
        }
        // The extremal inequality runs over the n blocks
        // (q_0, q_1), ..., (q_{n-2}, q_{n-1}), (q_{n-1}, K.hi).
        let d_k = self.degree(state, arch);
        if n >= w && d_k >= w {
            bounds.remove(n);
            let blocks_sum: usize = bounds
                .windows(2)
                .map(|b| self.degree(state, GapInterval::new(b[0], b[1])))
                .sum();
            let limit = w * (d_k + n - w);
            self.ensure(
                state,
                "extremal inequality",
                arch,
                blocks_sum <= limit,
                blocks_sum as f64,
                limit as f64,
            )?;
        }
        let limit = sweep_cut_limit(self.omega);
        self.ensure(
            state,
            "sweep cut count",
            arch,
            (n as f64) < limit,
            n as f64,
            limit,
        )
    }

    fn extend(
        &mut self,
        state: &mut PillarState<'_>,
        arch: GapInterval,
        q: &[Gap],
    ) -> Result<(), SolveError> {
        check_arch(state, arch)?;
        let mut sorted = q.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(SolveError::DuplicatePillarGap(w[0]));
            }
        }
        if let Some(&gap) = sorted.iter().find(|&&g| !arch.contains_gap(g)) {
            return Err(SolveError::GapOutsideArch { gap, arch });
        }
        if sorted.is_empty() {
            return Ok(());
        }

        let mut bounds = Vec::with_capacity(sorted.len() + 2);
        bounds.push(arch.lo);
        bounds.extend(&sorted);
        bounds.push(arch.hi);
        let blocks: Vec<GapInterval> = bounds
            .windows(2)
            .map(|b| GapInterval::new(b[0], b[1]))
            .collect();
        let t = blocks
            .iter()
            .map(|&j| self.degree(state, j))
            .max()
            .unwrap_or(0);
        let d_k = self.degree(state, arch);
        let chi_before = state.chi_used();

        let mut order = Vec::with_capacity(sorted.len());
        median_preorder(&sorted, &mut order);
        for gap in order {
            state.push_pillar(gap)?;
        }

        let growth = self.omega as usize * ceil_log2(sorted.len() + 1) as usize;
        for &j in &blocks {
            let d = self.degree(state, j);
            self.max_arch_degree = self.max_arch_degree.max(d);
            self.ensure(
                state,
                "extension block degree",
                j,
                d <= t + growth,
                d as f64,
                (t + growth) as f64,
            )?;
        }
        let chi_limit = chi_before.max(d_k + growth);
        let chi = state.chi_used();
        self.ensure(
            state,
            "extension colour count",
            arch,
            chi <= chi_limit,
            chi as f64,
            chi_limit as f64,
        )
    }
}

/// Median first, then the left half, then the right half, recursively.
fn median_preorder(q: &[Gap], out: &mut Vec<Gap>) {
    if q.is_empty() {
        return;
    }
    let mid = q.len().div_ceil(2) - 1;
    out.push(q[mid]);
    median_preorder(&q[..mid], out);
    median_preorder(&q[mid + 1..], out);
}

fn check_arch(state: &PillarState<'_>, arch: GapInterval) -> Result<(), SolveError> {
    let two_m = state.system().endpoint_count();
    let lo_ok = arch.lo == 0 || state.is_pillar(arch.lo);
    let hi_ok = arch.hi == two_m || state.is_pillar(arch.hi);
    if arch.lo >= arch.hi
        || arch.hi > two_m
        || !lo_ok
        || !hi_ok
        || state.arch_of_rank(arch.lo + 1) != arch
    {
        return Err(SolveError::NotAnArch(arch));
    }
    Ok(())
}

/// Sweeps `arch` and returns the pillars one round would add.
pub fn sweep_pillars(
    state: &PillarState<'_>,
    arch: GapInterval,
    omega: u32,
) -> Result<Sweep, SolveError> {
    if omega < 2 {
        return Err(SolveError::OmegaTooSmall(omega));
    }
    Checker::new(omega).sweep(state, arch)
}

/// Appends the gaps `q` inside `arch` in median-first order and checks the
/// resulting degree and colour-count limits.
pub fn dnc_extend<'a>(
    state: &PillarState<'a>,
    arch: GapInterval,
    q: &[Gap],
) -> Result<PillarState<'a>, SolveError> {
    let w = omega(state.system()).size.max(1);
    let mut next = state.clone();
    Checker::new(w).extend(&mut next, arch, q)?;
    Ok(next)
}

/// Colours every interval of `sys`.
pub fn colour(sys: &IntervalSystem) -> Result<CompleteColouring, SolveError> {
    let w = omega(sys).size;
    if w <= 1 {
        return Ok(CompleteColouring {
            colours: vec![1; sys.len()],
            pillar_order: Vec::new(),
            colour_sets: Vec::new(),
            stats: SolveStats {
                omega: w,
                colors_used: w as usize,
                bound: w,
                ..SolveStats::default()
            },
        });
    }
    let colour_bound = bound(w)?;
    let arch_limit = arch_degree_limit(w)? as usize;
    let mut checker = Checker::new(w);
    let mut state = PillarState::new(sys);
    let by_left: Vec<usize> = sys.by_left().collect();
    let mut cursor = 0;
    let mut iterations = 0;

    while !state.is_complete() {
        while state.colour(by_left[cursor]).is_some() {
            cursor += 1;
        }
        let next = by_left[cursor];
        let arch = state.arch_of_rank(sys.interval(next).left);
        let sweep = checker.sweep(&state, arch)?;
        debug_assert_eq!(sweep.anchor_interval, next);
        log::trace!(
            "round {iterations}: arch ({}, {}), {} cuts, anchor {}",
            arch.lo,
            arch.hi,
            sweep.cuts.len(),
            sweep.anchor
        );
        checker.extend(&mut state, arch, &sweep.pillars)?;

        let mut inner = Vec::with_capacity(sweep.pillars.len() + 2);
        inner.push(arch.lo);
        inner.extend(&sweep.pillars);
        inner.push(arch.hi);
        for b in inner.windows(2) {
            let j = GapInterval::new(b[0], b[1]);
            let d = checker.degree(&state, j);
            checker.max_arch_degree = checker.max_arch_degree.max(d);
            checker.ensure(
                &state,
                "arch degree",
                j,
                d <= arch_limit,
                d as f64,
                arch_limit as f64,
            )?;
        }
        let chi = state.chi_used();
        checker.ensure(
            &state,
            "colour bound",
            arch,
            chi <= colour_bound as usize,
            chi as f64,
            f64::from(colour_bound),
        )?;
        iterations += 1;
    }

    let whole = GapInterval::new(0, sys.endpoint_count());
    let conflict = first_conflict(sys, state.colours());
    checker.ensure(
        &state,
        "final properness",
        whole,
        conflict.is_none(),
        f64::from(u8::from(conflict.is_some())),
        0.0,
    )?;
    let colours: Vec<Colour> = state
        .colours()
        .iter()
        .map(|c| c.expect("complete"))
        .collect();
    let stats = SolveStats {
        omega: w,
        colors_used: state.chi_used(),
        bound: colour_bound,
        pillar_count: state.pillar_order().len(),
        iteration_count: iterations,
        max_arch_degree_seen: checker.max_arch_degree,
        assertions_checked: checker.assertions,
    };
    log::debug!(
        "coloured {} intervals with {} colours (omega {}, bound {}) in {} rounds",
        sys.len(),
        stats.colors_used,
        w,
        colour_bound,
        iterations
    );
    Ok(CompleteColouring {
        colours,
        pillar_order: state.pillar_order().to_vec(),
        colour_sets: state.colour_sets().to_vec(),
        stats,
    })
}

//! Ordered pillar assignments and the partial colouring they induce.
//!
//! Pillars are gaps taken in a total order. An interval is assigned to the
//! earliest pillar it contains. When a pillar `p` is appended, its intervals
//! `I_p` (those containing `p` and no earlier pillar) are coloured by height
//! under the dominance order, using the smallest `omega(I_p)` colours not
//! already used by intervals with exactly one endpoint in the foundation of
//! `p`. The foundation is the open stretch around `p` bounded by earlier
//! pillars or the ends of the line.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::dominance::chain_heights;
use crate::system::{Gap, IntervalSystem, Rank};

/// Colours are positive integers.
pub type Colour = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PillarError {
    #[error("gap {0} is already a pillar")]
    DuplicatePillarGap(Gap),
    #[error("gap {gap} is not strictly between 0 and {max}")]
    GapOutOfRange { gap: Gap, max: Gap },
    #[error("colour set has {available} colours but {needed} are required")]
    ColourSetTooSmall { needed: usize, available: usize },
    #[error("interval {id:?} does not contain gap {gap}")]
    MemberMissesPillar { id: String, gap: Gap },
    #[error("pillar {pillar} lies strictly inside ({lo}, {hi})")]
    PillarInsideJ { pillar: Gap, lo: Gap, hi: Gap },
    #[error("({lo}, {hi}) is not a valid gap interval")]
    BadGapInterval { lo: Gap, hi: Gap },
}

/// A pillar together with its position in the pillar order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pillar {
    pub position: Gap,
    pub order_index: usize,
}

/// The open stretch between two gaps. Endpoint rank `e` lies inside iff
/// `lo < e <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GapInterval {
    pub lo: Gap,
    pub hi: Gap,
}

impl GapInterval {
    pub fn new(lo: Gap, hi: Gap) -> Self {
        GapInterval { lo, hi }
    }

    #[inline]
    pub fn contains_rank(&self, rank: Rank) -> bool {
        self.lo < rank && rank <= self.hi
    }

    /// Gap strictly inside.
    #[inline]
    pub fn contains_gap(&self, gap: Gap) -> bool {
        self.lo < gap && gap < self.hi
    }

    pub fn ranks(&self) -> std::ops::RangeInclusive<Rank> {
        self.lo + 1..=self.hi
    }
}

/// Sorted set of distinct colours.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct ColourSet(Vec<Colour>);

impl ColourSet {
    pub fn new(mut colours: Vec<Colour>) -> Self {
        colours.sort_unstable();
        colours.dedup();
        ColourSet(colours)
    }

    /// The `count` smallest positive integers not in `forbidden` (sorted).
    pub fn smallest_avoiding(count: usize, forbidden: &[Colour]) -> Self {
        let mut out = Vec::with_capacity(count);
        let mut blocked = forbidden.iter().peekable();
        let mut c: Colour = 1;
        while out.len() < count {
            while blocked.next_if(|&&b| b < c).is_some() {}
            if blocked.next_if_eq(&&c).is_none() {
                out.push(c);
            }
            c += 1;
        }
        ColourSet(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The `h`-th smallest colour, 1-based.
    pub fn nth(&self, h: u32) -> Colour {
        self.0[h as usize - 1]
    }

    pub fn as_slice(&self) -> &[Colour] {
        &self.0
    }
}

impl From<&[Colour]> for ColourSet {
    fn from(colours: &[Colour]) -> Self {
        ColourSet::new(colours.to_vec())
    }
}

/// Foundation of the `k`-th pillar (in pillar order) of `pillars`: the
/// stretch around it bounded by the nearest earlier pillars, or by gaps 0 and
/// `two_m`.
pub fn foundation(pillars: &[Gap], k: usize, two_m: Gap) -> GapInterval {
    let p = pillars[k];
    let earlier = &pillars[..k];
    let lo = earlier
        .iter()
        .copied()
        .filter(|&q| q < p)
        .max()
        .unwrap_or(0);
    let hi = earlier
        .iter()
        .copied()
        .filter(|&q| q > p)
        .min()
        .unwrap_or(two_m);
    GapInterval::new(lo, hi)
}

/// For every interval, the order index of the earliest pillar it contains.
pub fn assign_intervals(
    sys: &IntervalSystem,
    pillars: &[Gap],
) -> Result<Vec<Option<usize>>, PillarError> {
    let mut by_position = BTreeMap::new();
    for (k, &g) in pillars.iter().enumerate() {
        if by_position.insert(g, k).is_some() {
            return Err(PillarError::DuplicatePillarGap(g));
        }
    }
    Ok(sys
        .intervals()
        .iter()
        .map(|iv| by_position.range(iv.left..iv.right).map(|(_, &k)| k).min())
        .collect())
}

/// Colours intervals sharing `gap` by height: height `h` gets the `h`-th
/// smallest colour of `colours`.
pub fn permutation_colouring(
    sys: &IntervalSystem,
    members: &[usize],
    gap: Gap,
    colours: &ColourSet,
) -> Result<Vec<(usize, Colour)>, PillarError> {
    let mut members = members.to_vec();
    members.sort_by_key(|&i| sys.interval(i).left);
    if let Some(&bad) = members
        .iter()
        .find(|&&i| !sys.interval(i).contains_gap(gap))
    {
        return Err(PillarError::MemberMissesPillar {
            id: sys.interval(bad).id.clone(),
            gap,
        });
    }
    let rights: Vec<u32> = members.iter().map(|&i| sys.interval(i).right).collect();
    let (heights, _) = chain_heights(&rights);
    let needed = heights.iter().copied().max().unwrap_or(0) as usize;
    if colours.len() < needed {
        return Err(PillarError::ColourSetTooSmall {
            needed,
            available: colours.len(),
        });
    }
    Ok(members
        .into_iter()
        .zip(heights)
        .map(|(i, h)| (i, colours.nth(h)))
        .collect())
}

/// What a single pillar append did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppendOutcome {
    pub foundation: GapInterval,
    pub members: Vec<usize>,
    pub colours: ColourSet,
}

/// Distinct-colour counter reused across degree queries.
#[derive(Debug, Clone, Default)]
pub struct ColourCounter {
    stamp: Vec<u32>,
    epoch: u32,
}

impl ColourCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reset(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
    }

    /// Records `c`; returns true if it was not yet seen in this round.
    #[inline]
    pub fn insert(&mut self, c: Colour) -> bool {
        let c = c as usize;
        if c >= self.stamp.len() {
            self.stamp.resize(c + 1 + c / 2, 0);
        }
        if self.stamp[c] == self.epoch {
            false
        } else {
            self.stamp[c] = self.epoch;
            true
        }
    }
}

/// A pillar assignment: pillars in order plus the colouring they induce.
///
/// [`PillarState::append_pillar`] returns a new snapshot; the solver uses
/// [`PillarState::push_pillar`] to extend in place.
#[derive(Debug, Clone)]
pub struct PillarState<'a> {
    system: &'a IntervalSystem,
    order: Vec<Gap>,
    positions: BTreeSet<Gap>,
    assignment: Vec<Option<u32>>,
    colour_sets: Vec<ColourSet>,
    psi: Vec<Option<Colour>>,
    colour_use: Vec<u32>,
    distinct: usize,
    uncoloured: usize,
}

impl<'a> PillarState<'a> {
    /// The state with no pillars.
    pub fn new(system: &'a IntervalSystem) -> Self {
        PillarState {
            system,
            order: Vec::new(),
            positions: BTreeSet::new(),
            assignment: vec![None; system.len()],
            colour_sets: Vec::new(),
            psi: vec![None; system.len()],
            colour_use: Vec::new(),
            distinct: 0,
            uncoloured: system.len(),
        }
    }

    pub fn system(&self) -> &'a IntervalSystem {
        self.system
    }

    /// Pillar gaps in pillar order.
    pub fn pillar_order(&self) -> &[Gap] {
        &self.order
    }

    pub fn pillars(&self) -> impl Iterator<Item = Pillar> + '_ {
        self.order
            .iter()
            .enumerate()
            .map(|(order_index, &position)| Pillar {
                position,
                order_index,
            })
    }

    /// Pillar gaps in increasing position.
    pub fn positions(&self) -> impl Iterator<Item = Gap> + '_ {
        self.positions.iter().copied()
    }

    pub fn is_pillar(&self, gap: Gap) -> bool {
        self.positions.contains(&gap)
    }

    /// Colour sets in pillar order.
    pub fn colour_sets(&self) -> &[ColourSet] {
        &self.colour_sets
    }

    /// Order index of the pillar an interval is assigned to.
    pub fn assignment(&self, idx: usize) -> Option<usize> {
        self.assignment[idx].map(|k| k as usize)
    }

    pub fn colour(&self, idx: usize) -> Option<Colour> {
        self.psi[idx]
    }

    /// The partial colouring, indexed like the system's intervals.
    pub fn colours(&self) -> &[Option<Colour>] {
        &self.psi
    }

    pub fn uncoloured_count(&self) -> usize {
        self.uncoloured
    }

    /// Number of distinct colours in use.
    pub fn chi_used(&self) -> usize {
        self.distinct
    }

    /// Every interval contains some pillar.
    pub fn is_complete(&self) -> bool {
        self.uncoloured == 0
    }

    /// Returns a new state with `gap` appended as the last pillar.
    pub fn append_pillar(&self, gap: Gap) -> Result<PillarState<'a>, PillarError> {
        let mut next = self.clone();
        next.push_pillar(gap)?;
        Ok(next)
    }

    /// Appends `gap` as the last pillar in place. Earlier colours never change.
    pub fn push_pillar(&mut self, gap: Gap) -> Result<AppendOutcome, PillarError> {
        let sys = self.system;
        let two_m = sys.endpoint_count();
        if gap == 0 || gap >= two_m {
            return Err(PillarError::GapOutOfRange { gap, max: two_m });
        }
        if self.positions.contains(&gap) {
            return Err(PillarError::DuplicatePillarGap(gap));
        }
        let found = self.arch_around(gap);

        // Unassigned intervals containing the gap cannot contain an earlier
        // pillar, so they start inside the foundation.
        let mut members = Vec::new();
        for rank in found.lo + 1..=gap {
            let idx = sys.owner(rank);
            let iv = sys.interval(idx);
            if iv.left == rank && iv.right > gap && self.assignment[idx].is_none() {
                members.push(idx);
            }
        }

        let mut forbidden = Vec::new();
        for rank in found.ranks() {
            let idx = sys.owner(rank);
            let iv = sys.interval(idx);
            let other = if iv.left == rank { iv.right } else { iv.left };
            if !found.contains_rank(other) {
                if let Some(c) = self.psi[idx] {
                    forbidden.push(c);
                }
            }
        }
        forbidden.sort_unstable();
        forbidden.dedup();

        let rights: Vec<u32> = members.iter().map(|&i| sys.interval(i).right).collect();
        let (heights, _) = chain_heights(&rights);
        let width = heights.iter().copied().max().unwrap_or(0) as usize;
        let colours = ColourSet::smallest_avoiding(width, &forbidden);

        let k = self.order.len() as u32;
        for (&idx, &h) in members.iter().zip(&heights) {
            let c = colours.nth(h);
            self.assignment[idx] = Some(k);
            self.psi[idx] = Some(c);
            let slot = c as usize;
            if slot >= self.colour_use.len() {
                self.colour_use.resize(slot + 1, 0);
            }
            if self.colour_use[slot] == 0 {
                self.distinct += 1;
            }
            self.colour_use[slot] += 1;
        }
        self.uncoloured -= members.len();
        self.order.push(gap);
        self.positions.insert(gap);
        self.colour_sets.push(colours.clone());
        Ok(AppendOutcome {
            foundation: found,
            members,
            colours,
        })
    }

    /// The arch (maximal pillar-free stretch) around a gap that is not a pillar.
    pub fn arch_around(&self, gap: Gap) -> GapInterval {
        let lo = self
            .positions
            .range(..gap)
            .next_back()
            .copied()
            .unwrap_or(0);
        let hi = self
            .positions
            .range(gap + 1..)
            .next()
            .copied()
            .unwrap_or(self.system.endpoint_count());
        GapInterval::new(lo, hi)
    }

    /// The arch containing endpoint `rank`.
    pub fn arch_of_rank(&self, rank: Rank) -> GapInterval {
        let lo = self
            .positions
            .range(..rank)
            .next_back()
            .copied()
            .unwrap_or(0);
        let hi = self
            .positions
            .range(rank..)
            .next()
            .copied()
            .unwrap_or(self.system.endpoint_count());
        GapInterval::new(lo, hi)
    }

    /// Maximal pillar-free stretches, left to right.
    pub fn arches(&self) -> Vec<GapInterval> {
        let mut bounds = Vec::with_capacity(self.positions.len() + 2);
        bounds.push(0);
        bounds.extend(self.positions.iter().copied());
        bounds.push(self.system.endpoint_count());
        bounds
            .windows(2)
            .map(|w| GapInterval::new(w[0], w[1]))
            .collect()
    }

    /// Number of distinct colours on intervals with an endpoint in `j`.
    /// `j` must not contain a pillar strictly inside it.
    pub fn degree(&self, j: GapInterval) -> Result<usize, PillarError> {
        if j.lo >= j.hi || j.hi > self.system.endpoint_count() {
            return Err(PillarError::BadGapInterval { lo: j.lo, hi: j.hi });
        }
        if let Some(&pillar) = self.positions.range(j.lo + 1..j.hi).next() {
            return Err(PillarError::PillarInsideJ {
                pillar,
                lo: j.lo,
                hi: j.hi,
            });
        }
        Ok(self.degree_with(j, &mut ColourCounter::new()))
    }

    /// Degree without the arch check.
    pub fn degree_with(&self, j: GapInterval, counter: &mut ColourCounter) -> usize {
        counter.reset();
        let mut count = 0;
        for rank in j.ranks() {
            if let Some(c) = self.psi[self.system.owner(rank)] {
                if counter.insert(c) {
                    count += 1;
                }
            }
        }
        count
    }

    /// Checks the structural guarantees of a pillar assignment.
    pub fn verify_assignment(&self) -> AssignmentReport {
        let mut report = AssignmentReport::default();
        self.check_coverage(&mut report);
        self.check_proper(&mut report);
        self.check_colour_sets(&mut report);
        for arch in self.arches() {
            self.check_arch(arch, &mut report);
        }
        report
    }

    fn check_coverage(&self, report: &mut AssignmentReport) {
        let expected = assign_intervals(self.system, &self.order).expect("pillars are distinct");
        for (idx, &want) in expected.iter().enumerate() {
            let id = &self.system.interval(idx).id;
            if want != self.assignment(idx) {
                report.fail_coverage(format!("interval {id:?} assigned to the wrong pillar"));
            }
            if self.assignment[idx].is_some() != self.psi[idx].is_some() {
                report.fail_coverage(format!("interval {id:?}: coloured iff assigned fails"));
            }
            if self.psi[idx] == Some(0) {
                report.fail_coverage(format!("interval {id:?} has colour 0"));
            }
        }
    }

    fn check_proper(&self, report: &mut AssignmentReport) {
        // Same-coloured intervals must be laminar: a stack per colour.
        let sys = self.system;
        let mut stacks: HashMap<Colour, Vec<usize>> = HashMap::new();
        for rank in 1..=sys.endpoint_count() {
            let idx = sys.owner(rank);
            let Some(c) = self.psi[idx] else { continue };
            let stack = stacks.entry(c).or_default();
            if sys.interval(idx).left == rank {
                stack.push(idx);
            } else if stack.last() == Some(&idx) {
                stack.pop();
            } else {
                report.fail_proper(format!(
                    "interval {:?} crosses another interval of colour {c}",
                    sys.interval(idx).id
                ));
                stack.retain(|&i| i != idx);
            }
        }
    }

    fn check_colour_sets(&self, report: &mut AssignmentReport) {
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); self.order.len()];
        for idx in 0..self.system.len() {
            if let Some(k) = self.assignment(idx) {
                members[k].push(idx);
            }
        }
        for (k, list) in members.iter_mut().enumerate() {
            let gap = self.order[k];
            let set = &self.colour_sets[k];
            list.sort_by_key(|&i| self.system.interval(i).left);
            let rights: Vec<u32> = list
                .iter()
                .map(|&i| self.system.interval(i).right)
                .collect();
            let width = chain_heights(&rights).0.into_iter().max().unwrap_or(0) as usize;
            let expected = permutation_colouring(self.system, list, gap, set);
            if set.len() != width {
                report.fail_colour_sets(format!(
                    "pillar {gap}: |C_p| = {} but clique number is {width}",
                    set.len()
                ));
            }
            match expected {
                Ok(assigned) => {
                    if assigned.iter().any(|&(i, c)| self.psi[i] != Some(c)) {
                        report.fail_colour_sets(format!(
                            "pillar {gap}: colours are not height-ordered"
                        ));
                    }
                }
                Err(e) => report.fail_colour_sets(format!("pillar {gap}: {e}")),
            }
        }
    }

    fn check_arch(&self, arch: GapInterval, report: &mut AssignmentReport) {
        let sys = self.system;
        // Crossing intervals: exactly one endpoint in the arch.
        let mut pillar_of_colour: HashMap<Colour, usize> = HashMap::new();
        let mut spans: BTreeMap<usize, (Rank, Rank)> = BTreeMap::new();
        for rank in arch.ranks() {
            let idx = sys.owner(rank);
            let iv = sys.interval(idx);
            let outside = if iv.left == rank { iv.right } else { iv.left };
            if arch.contains_rank(outside) {
                continue;
            }
            let (Some(c), Some(k)) = (self.psi[idx], self.assignment(idx)) else {
                report.fail_single_pillar(format!(
                    "interval {:?} crosses arch ({}, {}) uncoloured",
                    iv.id, arch.lo, arch.hi
                ));
                continue;
            };
            let first = *pillar_of_colour.entry(c).or_insert(k);
            if first != k {
                report.fail_single_pillar(format!(
                    "arch ({}, {}): colour {c} comes from pillars {} and {}",
                    arch.lo, arch.hi, self.order[first], self.order[k]
                ));
            }
            let span = spans.entry(k).or_insert((outside, outside));
            span.0 = span.0.min(outside);
            span.1 = span.1.max(outside);
        }
        let mut ranges: Vec<(Rank, Rank, usize)> =
            spans.into_iter().map(|(k, (a, b))| (a, b, k)).collect();
        for &(a, b, k) in &ranges {
            if a <= arch.lo && b > arch.hi {
                report.fail_separated(format!(
                    "arch ({}, {}): pillar {} has crossing endpoints on both sides",
                    arch.lo, arch.hi, self.order[k]
                ));
            }
        }
        ranges.sort_unstable();
        for w in ranges.windows(2) {
            if w[0].1 > w[1].0 {
                report.fail_separated(format!(
                    "arch ({}, {}): endpoint ranges of pillars {} and {} interleave",
                    arch.lo, arch.hi, self.order[w[0].2], self.order[w[1].2]
                ));
            }
        }
    }
}

/// Result of [`PillarState::verify_assignment`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentReport {
    /// Each interval is assigned to its earliest contained pillar and coloured
    /// iff assigned.
    pub coverage: bool,
    /// No two overlapping intervals share a colour.
    pub proper: bool,
    /// Each `C_p` has size `omega(I_p)` and colours `I_p` by height.
    pub colour_sets: bool,
    /// Per arch, each colour on crossing intervals comes from a single pillar.
    pub single_pillar_colours: bool,
    /// Per arch, outside endpoints grouped by pillar occupy disjoint ranges.
    pub separated_groups: bool,
    pub violations: Vec<String>,
}

impl Default for AssignmentReport {
    fn default() -> Self {
        AssignmentReport {
            coverage: true,
            proper: true,
            colour_sets: true,
            single_pillar_colours: true,
            separated_groups: true,
            violations: Vec::new(),
        }
    }
}

impl AssignmentReport {
    pub fn all_passed(&self) -> bool {
        self.coverage
            && self.proper
            && self.colour_sets
            && self.single_pillar_colours
            && self.separated_groups
    }

    fn fail_coverage(&mut self, msg: String) {
        self.coverage = false;
        self.violations.push(msg);
    }

    fn fail_proper(&mut self, msg: String) {
        self.proper = false;
        self.violations.push(msg);
    }

    fn fail_colour_sets(&mut self, msg: String) {
        self.colour_sets = false;
        self.violations.push(msg);
    }

    fn fail_single_pillar(&mut self, msg: String) {
        self.single_pillar_colours = false;
        self.violations.push(msg);
    }

    fn fail_separated(&mut self, msg: String) {
        self.separated_groups = false;
        self.violations.push(msg);
    }
}

/// Appends `gaps` in order to the empty state.
pub fn build_colouring<'a>(
    sys: &'a IntervalSystem,
    gaps: &[Gap],
) -> Result<PillarState<'a>, PillarError> {
    let mut state = PillarState::new(sys);
    for &g in gaps {
        state.push_pillar(g)?;
    }
    Ok(state)
}

//! Strong dominance: chains, heights, grid antichains and clique numbers.
//!
//! Among intervals sharing a common gap, two intervals overlap exactly when one
//! strongly dominates the other (both endpoints larger), so cliques are chains
//! and heights give a proper colouring.

use thiserror::Error;

use crate::system::{Gap, IntervalSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DominanceError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// A point of the integer grid, ordered by strong dominance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    pub x: u32,
    pub y: u32,
}

impl GridPoint {
    pub fn new(x: u32, y: u32) -> Self {
        GridPoint { x, y }
    }

    /// Strict strong dominance: both coordinates strictly smaller.
    pub fn precedes(self, other: GridPoint) -> bool {
        self.x < other.x && self.y < other.y
    }
}

/// Heights of a sequence under strict increase of `keys`.
///
/// The sequence must already be ordered so that every chain respects the
/// sequence order (e.g. intervals sorted by distinct left endpoints). Returns
/// each element's height and its predecessor in a longest chain ending there;
/// among equal-height candidates the predecessor has the smallest key.
pub(crate) fn chain_heights(keys: &[u32]) -> (Vec<u32>, Vec<Option<usize>>) {
    // tails[h] = position of the element with smallest key among height h+1.
    let mut tails: Vec<usize> = Vec::new();
    let mut heights = Vec::with_capacity(keys.len());
    let mut preds = Vec::with_capacity(keys.len());
    for (pos, &key) in keys.iter().enumerate() {
        let h = tails.partition_point(|&t| keys[t] < key);
        preds.push(h.checked_sub(1).map(|p| tails[p]));
        if h == tails.len() {
            tails.push(pos);
        } else {
            tails[h] = pos;
        }
        heights.push(h as u32 + 1);
    }
    (heights, preds)
}

/// Heights of the intervals containing a gap, in left-endpoint order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HeightMap {
    entries: Vec<(usize, u32)>,
    preds: Vec<Option<usize>>,
}

impl HeightMap {
    fn build(sys: &IntervalSystem, members: Vec<usize>) -> Self {
        let rights: Vec<u32> = members.iter().map(|&i| sys.interval(i).right).collect();
        let (heights, preds) = chain_heights(&rights);
        HeightMap {
            entries: members.into_iter().zip(heights).collect(),
            preds,
        }
    }

    pub fn height(&self, idx: usize) -> Option<u32> {
        self.entries.iter().find(|e| e.0 == idx).map(|e| e.1)
    }

    pub fn max_height(&self) -> u32 {
        self.entries.iter().map(|e| e.1).max().unwrap_or(0)
    }

    /// `(interval index, height)` in left-endpoint order.
    pub fn entries(&self) -> &[(usize, u32)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// A longest chain, earliest first.
    pub fn longest_chain(&self) -> Vec<usize> {
        let top = self.max_height();
        let Some(mut pos) = self.entries.iter().position(|e| e.1 == top) else {
            return Vec::new();
        };
        let mut chain = vec![self.entries[pos].0];
        while let Some(p) = self.preds[pos] {
            chain.push(self.entries[p].0);
            pos = p;
        }
        chain.reverse();
        chain
    }
}

/// Heights of the intervals containing `gap` under the dominance order.
pub fn heights_at_point(sys: &IntervalSystem, gap: Gap) -> HeightMap {
    HeightMap::build(sys, sys.containing(gap))
}

/// Heights among the intervals containing `gap` that pass `keep`.
pub fn heights_at_point_among(
    sys: &IntervalSystem,
    gap: Gap,
    keep: impl Fn(usize) -> bool,
) -> HeightMap {
    let members = sys
        .containing(gap)
        .into_iter()
        .filter(|&i| keep(i))
        .collect();
    HeightMap::build(sys, members)
}

/// Clique number of the intervals containing `gap`; 0 if there are none.
pub fn omega_at_point(sys: &IntervalSystem, gap: Gap) -> u32 {
    heights_at_point(sys, gap).max_height()
}

/// Clique number of the intervals containing `gap` that pass `keep`.
pub fn omega_at_point_among(sys: &IntervalSystem, gap: Gap, keep: impl Fn(usize) -> bool) -> u32 {
    heights_at_point_among(sys, gap, keep).max_height()
}

/// A maximum set of pairwise overlapping intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clique {
    pub size: u32,
    /// Interval indices ordered by left endpoint.
    pub members: Vec<usize>,
}

/// Clique number of an interval system, with a witness.
///
/// Pairwise overlapping intervals share a common gap, so the clique number is
/// the largest chain among the intervals containing some gap. Only gaps that
/// follow a left endpoint and precede a right endpoint need inspection.
pub fn omega(sys: &IntervalSystem) -> Clique {
    let two_m = sys.endpoint_count();
    let mut best = Clique {
        size: 0,
        members: Vec::new(),
    };
    let mut active: Vec<usize> = Vec::new();
    let mut alive = vec![false; sys.len()];
    let mut live = 0usize;
    let mut rights = Vec::new();
    for rank in 1..=two_m {
        let idx = sys.owner(rank);
        if sys.interval(idx).left == rank {
            active.push(idx);
            alive[idx] = true;
            live += 1;
        } else {
            alive[idx] = false;
            live -= 1;
            if active.len() > 2 * live + 16 {
                active.retain(|&i| alive[i]);
            }
            continue;
        }
        let is_peak = rank < two_m && !sys.is_left_endpoint(rank + 1);
        if !is_peak || live as u32 <= best.size {
            continue;
        }
        rights.clear();
        rights.extend(
            active
                .iter()
                .filter(|&&i| alive[i])
                .map(|&i| sys.interval(i).right),
        );
        let (heights, _) = chain_heights(&rights);
        let top = heights.iter().copied().max().unwrap_or(0);
        if top > best.size {
            let hm = heights_at_point(sys, rank);
            best = Clique {
                size: top,
                members: hm.longest_chain(),
            };
        }
    }
    best
}

/// Length of a longest strict-dominance chain, with a witness chain.
pub fn longest_chain_2d(points: &[GridPoint]) -> (usize, Vec<GridPoint>) {
    let mut pts = points.to_vec();
    // Equal x never chain: put them in decreasing y so an increasing run can use at most one.
    pts.sort_by(|a, b| a.x.cmp(&b.x).then(b.y.cmp(&a.y)));
    pts.dedup();
    let ys: Vec<u32> = pts.iter().map(|p| p.y).collect();
    let (heights, preds) = chain_heights(&ys);
    let Some((mut pos, &top)) = heights
        .iter()
        .enumerate()
        .max_by_key(|&(i, h)| (*h, std::cmp::Reverse(i)))
    else {
        return (0, Vec::new());
    };
    let mut chain = vec![pts[pos]];
    while let Some(p) = preds[pos] {
        chain.push(pts[p]);
        pos = p;
    }
    chain.reverse();
    (top as usize, chain)
}

/// Maximum antichain size of the `a x b` grid under strong dominance: `a + b - 1`.
pub fn grid_max_antichain(a: u32, b: u32) -> u32 {
    assert!(a >= 1 && b >= 1, "grid sides must be positive");
    a + b - 1
}

/// Maximum antichain size of the `a x b` grid by exhaustive branch-and-bound
/// search. Intended for small grids.
pub fn grid_max_antichain_exhaustive(a: u32, b: u32) -> u32 {
    let points: Vec<GridPoint> = (1..=a)
        .flat_map(|x| (1..=b).map(move |y| GridPoint::new(x, y)))
        .collect();

    fn extend(candidates: &[GridPoint], size: u32, best: &mut u32) {
        if size + candidates.len() as u32 <= *best {
            return;
        }
        let Some((&first, rest)) = candidates.split_first() else {
            *best = (*best).max(size);
            return;
        };
        let compatible: Vec<GridPoint> = rest
            .iter()
            .copied()
            .filter(|&p| !first.precedes(p) && !p.precedes(first))
            .collect();
        extend(&compatible, size + 1, best);
        extend(rest, size, best);
    }

    let mut best = 0;
    extend(&points, 0, &mut best);
    best
}

/// Checks `|S| <= n(a + b - n)` for a set `S` of the `a x b` grid with no chain
/// longer than `n`.
pub fn estype_check(s: &[GridPoint], a: u32, b: u32, n: u32) -> Result<bool, DominanceError> {
    if n == 0 || n > a || n > b {
        return Err(DominanceError::PreconditionViolated(format!(
            "need 1 <= n <= a, b (n = {n}, a = {a}, b = {b})"
        )));
    }
    if let Some(p) = s
        .iter()
        .find(|p| p.x == 0 || p.x > a || p.y == 0 || p.y > b)
    {
        return Err(DominanceError::PreconditionViolated(format!(
            "point ({}, {}) outside the {a} x {b} grid",
            p.x, p.y
        )));
    }
    let mut distinct = s.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let (chain, _) = longest_chain_2d(&distinct);
    if chain > n as usize {
        return Err(DominanceError::PreconditionViolated(format!(
            "set has a chain of length {chain} > {n}"
        )));
    }
    Ok(distinct.len() as u64 <= u64::from(n) * u64::from(a + b - n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{permutation_example, pillar_example, Interval, PERMUTATION_EXAMPLE_GAP};
    use proptest::prelude::*;

    fn by_id(sys: &IntervalSystem, hm: &HeightMap) -> Vec<(String, u32)> {
        hm.entries()
            .iter()
            .map(|&(i, h)| (sys.interval(i).id.clone(), h))
            .collect()
    }

    fn brute_chain(points: &[GridPoint]) -> usize {
        fn go(points: &[GridPoint], last: Option<GridPoint>) -> usize {
            points
                .iter()
                .filter(|p| last.is_none_or(|l| l.precedes(**p)))
                .map(|&p| 1 + go(points, Some(p)))
                .max()
                .unwrap_or(0)
        }
        go(points, None)
    }

    fn brute_omega(sys: &IntervalSystem) -> u32 {
        let m = sys.len();
        let mut best = 0;
        for mask in 0u32..(1 << m) {
            let members: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            let clique = members.iter().enumerate().all(|(k, &a)| {
                members[k + 1..]
                    .iter()
                    .all(|&b| sys.interval(a).overlaps(sys.interval(b)))
            });
            if clique {
                best = best.max(members.len() as u32);
            }
        }
        best
    }

    fn is_clique(sys: &IntervalSystem, members: &[usize]) -> bool {
        members.iter().enumerate().all(|(k, &a)| {
            members[k + 1..]
                .iter()
                .all(|&b| sys.interval(a).overlaps(sys.interval(b)))
        })
    }

    #[test]
    fn permutation_example_heights() {
        let sys = permutation_example();
        let hm = heights_at_point(&sys, PERMUTATION_EXAMPLE_GAP);
        let expected: Vec<(String, u32)> = [("A", 1), ("B", 2), ("C", 2), ("D", 1), ("E", 3)]
            .iter()
            .map(|&(id, h)| (id.to_string(), h))
            .collect();
        assert_eq!(by_id(&sys, &hm), expected);
        assert_eq!(omega_at_point(&sys, PERMUTATION_EXAMPLE_GAP), 3);
    }

    #[test]
    fn pillar_example_heights_at_13() {
        let sys = pillar_example();
        let hm = heights_at_point(&sys, 13);
        let expected: Vec<(String, u32)> = [("I6", 1), ("I7", 1), ("I8", 2)]
            .iter()
            .map(|&(id, h)| (id.to_string(), h))
            .collect();
        assert_eq!(by_id(&sys, &hm), expected);
    }

    #[test]
    fn single_interval_height() {
        let sys = IntervalSystem::from_ranks(vec![Interval::new("x", 1, 2)]).unwrap();
        assert_eq!(heights_at_point(&sys, 1).entries(), &[(0, 1)]);
        assert_eq!(omega_at_point(&sys, 0), 0);
        assert_eq!(omega_at_point(&sys, 2), 0);
    }

    #[test]
    fn omega_at_point_restricted() {
        let sys = pillar_example();
        let i11 = sys.index_of("I11").unwrap();
        assert_eq!(omega_at_point_among(&sys, 21, |i| i == i11), 1);
    }

    #[test]
    fn omega_fixtures() {
        let sys = permutation_example();
        let c = omega(&sys);
        assert_eq!(c.size, 3);
        let ids: Vec<&str> = c
            .members
            .iter()
            .map(|&i| sys.interval(i).id.as_str())
            .collect();
        assert_eq!(ids, ["A", "C", "E"]);
        assert_eq!(brute_omega(&sys), 3);

        let sys = pillar_example();
        let c = omega(&sys);
        assert_eq!(c.size, 3);
        assert_eq!(c.size, brute_omega(&sys));
        assert!(is_clique(&sys, &c.members));
        assert_eq!(c.members.len(), 3);
        // {I8, I9, I10} is another maximum clique.
        let alt: Vec<usize> = ["I8", "I9", "I10"]
            .iter()
            .map(|id| sys.index_of(id).unwrap())
            .collect();
        assert!(is_clique(&sys, &alt));
    }

    #[test]
    fn omega_disjoint_and_empty() {
        let sys = IntervalSystem::from_ranks(
            (0..5)
                .map(|i| Interval::new(i.to_string(), 2 * i + 1, 2 * i + 2))
                .collect(),
        )
        .unwrap();
        assert_eq!(omega(&sys).size, 1);
        assert_eq!(omega(&IntervalSystem::empty()).size, 0);
    }

    #[test]
    fn chain_examples() {
        let diag = [
            GridPoint::new(1, 1),
            GridPoint::new(2, 2),
            GridPoint::new(3, 3),
        ];
        assert_eq!(longest_chain_2d(&diag).0, 3);
        let anti = [
            GridPoint::new(1, 3),
            GridPoint::new(2, 2),
            GridPoint::new(3, 1),
        ];
        assert_eq!(longest_chain_2d(&anti).0, 1);
        let l_shape: Vec<GridPoint> = (1..=4)
            .flat_map(|x| (1..=4).map(move |y| GridPoint::new(x, y)))
            .filter(|p| p.x <= 2 || p.y <= 2)
            .collect();
        assert_eq!(l_shape.len(), 12);
        let (len, witness) = longest_chain_2d(&l_shape);
        assert_eq!(brute_chain(&l_shape), 2);
        assert_eq!(len, 2);
        assert!(witness.windows(2).all(|w| w[0].precedes(w[1])));
        assert_eq!(longest_chain_2d(&[]).0, 0);
    }

    #[test]
    fn antichain_examples() {
        assert_eq!(grid_max_antichain(3, 4), 6);
        assert_eq!(grid_max_antichain(1, 1), 1);
        assert_eq!(grid_max_antichain_exhaustive(2, 5), 6);
        assert_eq!(grid_max_antichain_exhaustive(1, 1), 1);
    }

    #[test]
    fn estype_examples() {
        let (a, b, n) = (5, 5, 2);
        let extremal: Vec<GridPoint> = (1..=a)
            .flat_map(|x| (1..=b).map(move |y| GridPoint::new(x, y)))
            .filter(|p| p.x <= n || p.y <= n)
            .collect();
        assert_eq!(extremal.len() as u32, n * (a + b - n));
        assert_eq!(extremal.len(), 16);
        assert_eq!(estype_check(&extremal, a, b, n), Ok(true));

        let full: Vec<GridPoint> = (1..=3)
            .flat_map(|x| (1..=3).map(move |y| GridPoint::new(x, y)))
            .collect();
        assert_eq!(estype_check(&full, 3, 3, 3), Ok(true));
        assert!(estype_check(&full, 3, 3, 2).is_err());
        assert!(estype_check(&[GridPoint::new(7, 1)], 3, 3, 1).is_err());
        assert!(estype_check(&[], 3, 3, 4).is_err());
    }

    fn arb_system(max_m: usize) -> impl Strategy<Value = IntervalSystem> {
        (0..=max_m)
            .prop_flat_map(|m| Just((1..=2 * m as u32).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|ranks| {
                IntervalSystem::from_ranks(
                    ranks
                        .chunks_exact(2)
                        .enumerate()
                        .map(|(i, c)| Interval::new(i.to_string(), c[0].min(c[1]), c[0].max(c[1])))
                        .collect(),
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn omega_matches_brute_force(sys in arb_system(10)) {
            let c = omega(&sys);
            prop_assert_eq!(c.size, brute_omega(&sys));
            prop_assert_eq!(c.members.len() as u32, c.size);
            prop_assert!(is_clique(&sys, &c.members));
        }

        #[test]
        fn heights_respect_dominance(sys in arb_system(12), gap_seed in 0u32..1000) {
            let gap = gap_seed % (sys.endpoint_count() + 1);
            let hm = heights_at_point(&sys, gap);
            for &(a, ha) in hm.entries() {
                prop_assert!(ha >= 1);
                for &(b, hb) in hm.entries() {
                    let (ia, ib) = (sys.interval(a), sys.interval(b));
                    if ia.left < ib.left && ia.right < ib.right {
                        prop_assert!(ha < hb);
                    }
                }
            }
            prop_assert_eq!(hm.max_height(), omega_at_point(&sys, gap));
        }

        #[test]
        fn chain_matches_brute_force(
            pts in prop::collection::btree_set((1u32..6, 1u32..6), 0..=12)
        ) {
            let pts: Vec<GridPoint> = pts.into_iter().map(|(x, y)| GridPoint::new(x, y)).collect();
            let (len, witness) = longest_chain_2d(&pts);
            prop_assert_eq!(len, brute_chain(&pts));
            prop_assert_eq!(witness.len(), len);
            prop_assert!(witness.windows(2).all(|w| w[0].precedes(w[1])));
        }
    }
}

//! Rank-compressed interval systems.
//!
//! Every endpoint is stored as its rank among all `2m` endpoints, so the
//! ranks of a valid system are exactly `1..=2m`. A *gap* `g` in `0..=2m` is the
//! location strictly between ranks `g` and `g + 1`; pillars only ever live in
//! gaps.

use std::collections::HashSet;

use thiserror::Error;

/// Position of an endpoint among all endpoints of a system, in `1..=2m`.
pub type Rank = u32;

/// Location between ranks `g` and `g + 1`, in `0..=2m`.
pub type Gap = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("endpoint value shared by intervals {first:?} and {second:?}")]
    DuplicateEndpoint { first: String, second: String },
    #[error("interval {id:?} has left endpoint not below its right endpoint")]
    DegenerateInterval { id: String },
    #[error("interval id {0:?} appears more than once")]
    DuplicateId(String),
    #[error("endpoint values of interval {id:?} are not comparable")]
    Incomparable { id: String },
    #[error("endpoint ranks do not form a permutation of 1..={0}")]
    RanksNotPermutation(u32),
}

/// An open interval over endpoint ranks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub id: String,
    pub left: Rank,
    pub right: Rank,
}

impl Interval {
    pub fn new(id: impl Into<String>, left: Rank, right: Rank) -> Self {
        Interval {
            id: id.into(),
            left,
            right,
        }
    }

    /// Whether the gap lies strictly inside the interval.
    #[inline]
    pub fn contains_gap(&self, gap: Gap) -> bool {
        self.left <= gap && gap < self.right
    }

    /// Whether the two intervals intersect with neither containing the other.
    #[inline]
    pub fn overlaps(&self, other: &Interval) -> bool {
        overlaps(self.left, self.right, other.left, other.right)
    }
}

/// Overlap predicate on endpoint coordinates: the endpoints strictly interleave.
#[inline]
pub fn overlaps<T: PartialOrd>(l1: T, r1: T, l2: T, r2: T) -> bool {
    (l1 < l2 && l2 < r1 && r1 < r2) || (l2 < l1 && l1 < r2 && r2 < r1)
}

/// A set of open intervals whose `2m` endpoint ranks are exactly `1..=2m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSystem {
    intervals: Vec<Interval>,
    // owner[rank] is the index of the interval with that endpoint; owner[0] is unused.
    owner: Vec<u32>,
}

impl IntervalSystem {
    /// Builds a system from intervals already expressed in ranks.
    pub fn from_ranks(intervals: Vec<Interval>) -> Result<Self, SystemError> {
        let m = intervals.len();
        let two_m = 2 * m as u32;
        let mut owner = vec![u32::MAX; 2 * m + 1];
        let mut ids = HashSet::with_capacity(m);
        for (idx, iv) in intervals.iter().enumerate() {
            if !ids.insert(iv.id.as_str()) {
                return Err(SystemError::DuplicateId(iv.id.clone()));
            }
            if iv.left >= iv.right {
                return Err(SystemError::DegenerateInterval { id: iv.id.clone() });
            }
            for rank in [iv.left, iv.right] {
                if rank == 0 || rank > two_m || owner[rank as usize] != u32::MAX {
                    return Err(SystemError::RanksNotPermutation(two_m));
                }
                owner[rank as usize] = idx as u32;
            }
        }
        Ok(IntervalSystem { intervals, owner })
    }

    pub fn empty() -> Self {
        IntervalSystem {
            intervals: Vec::new(),
            owner: vec![u32::MAX],
        }
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Number of endpoints, `2m`; also the largest gap position.
    pub fn endpoint_count(&self) -> u32 {
        2 * self.intervals.len() as u32
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn interval(&self, idx: usize) -> &Interval {
        &self.intervals[idx]
    }

    /// Index of the interval owning the endpoint at `rank`.
    #[inline]
    pub fn owner(&self, rank: Rank) -> usize {
        self.owner[rank as usize] as usize
    }

    #[inline]
    pub fn is_left_endpoint(&self, rank: Rank) -> bool {
        self.intervals[self.owner(rank)].left == rank
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.intervals.iter().position(|iv| iv.id == id)
    }

    /// Interval indices in increasing order of left endpoint.
    pub fn by_left(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.endpoint_count()).filter_map(move |rank| {
            let idx = self.owner(rank);
            (self.intervals[idx].left == rank).then_some(idx)
        })
    }

    /// Indices of intervals containing `gap`, ordered by left endpoint.
    pub fn containing(&self, gap: Gap) -> Vec<usize> {
        let top = gap.min(self.endpoint_count());
        (1..=top)
            .filter_map(|rank| {
                let idx = self.owner(rank);
                let iv = &self.intervals[idx];
                (iv.left == rank && iv.right > gap).then_some(idx)
            })
            .collect()
    }
}

/// Rank-compresses raw endpoint values.
///
/// The rank order equals the order of the raw values, so the overlap relation
/// is unchanged. Raw values must be pairwise distinct.
pub fn canonicalize<T, I>(raw: I) -> Result<IntervalSystem, SystemError>
where
    T: PartialOrd,
    I: IntoIterator<Item = (String, T, T)>,
{
    let raw: Vec<(String, T, T)> = raw.into_iter().collect();
    let mut endpoints: Vec<(usize, bool)> = Vec::with_capacity(2 * raw.len());
    for (idx, (id, left, right)) in raw.iter().enumerate() {
        match left.partial_cmp(right) {
            None => return Err(SystemError::Incomparable { id: id.clone() }),
            Some(std::cmp::Ordering::Less) => {}
            Some(_) => return Err(SystemError::DegenerateInterval { id: id.clone() }),
        }
        endpoints.push((idx, true));
        endpoints.push((idx, false));
    }
    let value = |&(idx, is_left): &(usize, bool)| {
        if is_left {
            &raw[idx].1
        } else {
            &raw[idx].2
        }
    };
    let mut incomparable = None;
    endpoints.sort_by(|a, b| {
        value(a).partial_cmp(value(b)).unwrap_or_else(|| {
            incomparable.get_or_insert(a.0);
            std::cmp::Ordering::Equal
        })
    });
    if let Some(idx) = incomparable {
        return Err(SystemError::Incomparable {
            id: raw[idx].0.clone(),
        });
    }
    for pair in endpoints.windows(2) {
        if value(&pair[0]) == value(&pair[1]) {
            return Err(SystemError::DuplicateEndpoint {
                first: raw[pair[0].0].0.clone(),
                second: raw[pair[1].0].0.clone(),
            });
        }
    }
    let mut ranks = vec![(0, 0); raw.len()];
    for (pos, &(idx, is_left)) in endpoints.iter().enumerate() {
        let rank = pos as Rank + 1;
        if is_left {
            ranks[idx].0 = rank;
        } else {
            ranks[idx].1 = rank;
        }
    }
    let intervals = raw
        .into_iter()
        .zip(ranks)
        .map(|((id, _, _), (left, right))| Interval { id, left, right })
        .collect();
    IntervalSystem::from_ranks(intervals)
}

/// The five-interval permutation system whose intervals all contain gap 5.
pub fn permutation_example() -> IntervalSystem {
    IntervalSystem::from_ranks(vec![
        Interval::new("A", 1, 7),
        Interval::new("B", 2, 9),
        Interval::new("C", 3, 8),
        Interval::new("D", 4, 6),
        Interval::new("E", 5, 10),
    ])
    .expect("fixture is valid")
}

/// Pillar gap used with [`permutation_example`].
pub const PERMUTATION_EXAMPLE_GAP: Gap = 5;

/// The eleven-interval system used for the five-pillar worked example.
pub fn pillar_example() -> IntervalSystem {
    IntervalSystem::from_ranks(vec![
        Interval::new("I1", 1, 9),
        Interval::new("I2", 2, 5),
        Interval::new("I3", 3, 7),
        Interval::new("I4", 4, 8),
        Interval::new("I5", 6, 11),
        Interval::new("I6", 10, 21),
        Interval::new("I7", 12, 14),
        Interval::new("I8", 13, 17),
        Interval::new("I9", 15, 18),
        Interval::new("I10", 16, 19),
        Interval::new("I11", 20, 22),
    ])
    .expect("fixture is valid")
}

/// Pillar gaps of [`pillar_example`] in pillar order.
pub const PILLAR_EXAMPLE_ORDER: [Gap; 5] = [4, 21, 7, 13, 17];

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn raw(items: &[(&str, f64, f64)]) -> Vec<(String, f64, f64)> {
        items
            .iter()
            .map(|&(id, l, r)| (id.to_string(), l, r))
            .collect()
    }

    #[test]
    fn canonicalize_permutation_example() {
        let sys = canonicalize(raw(&[
            ("A", -5.0, 2.0),
            ("B", -4.0, 4.0),
            ("C", -3.0, 3.0),
            ("D", -2.0, 1.0),
            ("E", -1.0, 5.0),
        ]))
        .unwrap();
        assert_eq!(sys, permutation_example());
    }

    #[test]
    fn canonicalize_pillar_example_from_drawing_coordinates() {
        // Left/right coordinates as drawn in the worked example.
        let sys = canonicalize(raw(&[
            ("I1", -7.0, -1.0),
            ("I2", -6.25, -3.5),
            ("I3", -5.5, -2.5),
            ("I4", -4.75, -1.5),
            ("I5", -3.0, 0.0),
            ("I6", -0.5, 6.25),
            ("I7", 0.5, 2.25),
            ("I8", 1.25, 4.0),
            ("I9", 2.75, 4.75),
            ("I10", 3.5, 5.25),
            ("I11", 5.75, 7.0),
        ]))
        .unwrap();
        assert_eq!(sys, pillar_example());
    }

    #[test]
    fn canonicalize_single() {
        let sys = canonicalize(raw(&[("x", 0.1, 0.9)])).unwrap();
        assert_eq!(sys.intervals(), &[Interval::new("x", 1, 2)]);
    }

    #[test]
    fn canonicalize_errors() {
        assert!(matches!(
            canonicalize(raw(&[("a", 0.0, 1.0), ("b", 1.0, 2.0)])),
            Err(SystemError::DuplicateEndpoint { .. })
        ));
        assert_eq!(
            canonicalize(raw(&[("a", 2.0, 1.0)])),
            Err(SystemError::DegenerateInterval { id: "a".into() })
        );
        assert_eq!(
            canonicalize(raw(&[("a", 1.0, 1.0)])),
            Err(SystemError::DegenerateInterval { id: "a".into() })
        );
        assert_eq!(
            canonicalize(raw(&[("a", 0.0, 1.0), ("a", 2.0, 3.0)])),
            Err(SystemError::DuplicateId("a".into()))
        );
        assert!(matches!(
            canonicalize(raw(&[("a", f64::NAN, 1.0)])),
            Err(SystemError::Incomparable { .. })
        ));
    }

    #[test]
    fn from_ranks_rejects_gaps_in_permutation() {
        assert_eq!(
            IntervalSystem::from_ranks(vec![Interval::new("a", 1, 3)]),
            Err(SystemError::RanksNotPermutation(2))
        );
        assert_eq!(
            IntervalSystem::from_ranks(vec![Interval::new("a", 1, 2), Interval::new("b", 2, 4)]),
            Err(SystemError::RanksNotPermutation(4))
        );
    }

    #[test]
    fn overlap_predicate() {
        assert!(overlaps(1, 3, 2, 4));
        assert!(overlaps(2, 4, 1, 3));
        assert!(!overlaps(1, 4, 2, 3));
        assert!(!overlaps(1, 2, 3, 4));
    }

    #[test]
    fn containing_is_left_ordered() {
        let sys = pillar_example();
        let ids: Vec<&str> = sys
            .containing(13)
            .into_iter()
            .map(|i| sys.interval(i).id.as_str())
            .collect();
        assert_eq!(ids, ["I6", "I7", "I8"]);
        assert!(sys.containing(0).is_empty());
        assert!(sys.containing(22).is_empty());
    }

    proptest! {
        #[test]
        fn canonicalize_preserves_overlap(
            values in prop::collection::hash_set(-10_000i64..10_000, 2..24)
        ) {
            let values: Vec<i64> = values.into_iter().collect();
            let raw: Vec<(String, f64, f64)> = values
                .chunks_exact(2)
                .enumerate()
                .map(|(i, c)| {
                    let (l, r) = (c[0].min(c[1]), c[0].max(c[1]));
                    (i.to_string(), l as f64 / 7.0, r as f64 / 7.0)
                })
                .collect();
            let sys = canonicalize(raw.clone()).unwrap();
            for a in 0..raw.len() {
                for b in 0..raw.len() {
                    let expected = overlaps(raw[a].1, raw[a].2, raw[b].1, raw[b].2);
                    prop_assert_eq!(sys.interval(a).overlaps(sys.interval(b)), expected);
                }
            }
        }
    }
}

//! Ground truth for small instances: exact chromatic number, maximum cliques,
//! an independent colouring checker, and seeded random interval systems.

use std::collections::{BTreeMap, HashMap};

use crate::graph::Graph;
use crate::pillar::Colour;
use crate::rng::SplitMix64;
use crate::system::{Interval, IntervalSystem};

/// Default search budget for [`exact_chi`], in search-node expansions.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Uniformly random perfect matching of ranks `1..=2m` into `m` intervals.
///
/// Ranks are shuffled with [`SplitMix64`] seeded by `seed`; consecutive pairs
/// form intervals with ids `"1"..="m"`.
pub fn random_system(m: usize, seed: u64) -> IntervalSystem {
    let mut ranks: Vec<u32> = (1..=2 * m as u32).collect();
    SplitMix64::new(seed).shuffle(&mut ranks);
    let intervals = ranks
        .chunks_exact(2)
        .enumerate()
        .map(|(k, pair)| {
            Interval::new(
                (k + 1).to_string(),
                pair[0].min(pair[1]),
                pair[0].max(pair[1]),
            )
        })
        .collect();
    IntervalSystem::from_ranks(intervals).expect("a matching of 1..=2m is a valid system")
}

/// True iff every vertex has a positive colour and no edge is monochromatic.
pub fn verify_colouring(g: &Graph, colours: &BTreeMap<String, Colour>) -> bool {
    let indexed: Vec<Option<Colour>> = g.ids().iter().map(|id| colours.get(id).copied()).collect();
    verify_colouring_indexed(g, &indexed)
}

/// [`verify_colouring`] with colours indexed by vertex position.
pub fn verify_colouring_indexed(g: &Graph, colours: &[Option<Colour>]) -> bool {
    if colours.len() != g.vertex_count() || colours.iter().any(|c| matches!(c, None | Some(0))) {
        return false;
    }
    g.edges().all(|(u, v)| colours[u] != colours[v])
}

/// First pair of overlapping intervals sharing a colour, if any.
///
/// Intervals of one colour must be laminar (pairwise nested or disjoint), which
/// a per-colour stack checks in one left-to-right pass.
pub fn first_conflict(sys: &IntervalSystem, colours: &[Option<Colour>]) -> Option<(usize, usize)> {
    let mut stacks: HashMap<Colour, Vec<usize>> = HashMap::new();
    for rank in 1..=sys.endpoint_count() {
        let idx = sys.owner(rank);
        let Some(c) = colours[idx] else { continue };
        let stack = stacks.entry(c).or_default();
        if sys.interval(idx).left == rank {
            stack.push(idx);
        } else {
            let top = stack.pop().expect("left endpoint pushed earlier");
            if top != idx {
                return Some((top.min(idx), top.max(idx)));
            }
        }
    }
    None
}

/// Outcome of an exact chromatic-number search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiResult {
    Exact(usize),
    Exhausted,
}

impl ChiResult {
    pub fn value(self) -> Option<usize> {
        match self {
            ChiResult::Exact(k) => Some(k),
            ChiResult::Exhausted => None,
        }
    }
}

/// Exact chromatic number by DSATUR branch and bound.
pub fn exact_chi(g: &Graph, node_budget: u64) -> ChiResult {
    let lower = greedy_clique(g).len();
    exact_chi_with_lower_bound(g, lower, node_budget)
}

/// [`exact_chi`] with a known clique lower bound (e.g. the clique number of
/// the interval system the graph came from).
pub fn exact_chi_with_lower_bound(g: &Graph, lower: usize, node_budget: u64) -> ChiResult {
    let n = g.vertex_count();
    if n == 0 {
        return ChiResult::Exact(0);
    }
    let greedy = dsatur_greedy(g);
    let upper = greedy.iter().copied().max().unwrap_or(0) as usize;
    if upper <= lower.max(1) {
        return ChiResult::Exact(upper);
    }
    let mut search = Search {
        g,
        colour: vec![0; n],
        // neighbour_count[v][c]: neighbours of v currently coloured c.
        neighbour_count: vec![vec![0; upper + 1]; n],
        saturation: vec![0; n],
        best: upper,
        lower: lower.max(1),
        nodes: 0,
        budget: node_budget,
        exhausted: false,
    };
    search.dfs(0);
    if search.exhausted {
        ChiResult::Exhausted
    } else {
        ChiResult::Exact(search.best)
    }
}

struct Search<'g> {
    g: &'g Graph,
    colour: Vec<usize>,
    neighbour_count: Vec<Vec<u32>>,
    saturation: Vec<usize>,
    best: usize,
    lower: usize,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Search<'_> {
    fn pick(&self) -> Option<usize> {
        (0..self.g.vertex_count())
            .filter(|&v| self.colour[v] == 0)
            .max_by(|&a, &b| {
                self.saturation[a]
                    .cmp(&self.saturation[b])
                    .then(self.g.degree(a).cmp(&self.g.degree(b)))
                    .then(b.cmp(&a))
            })
    }

    fn set(&mut self, v: usize, c: usize) {
        self.colour[v] = c;
        for &u in self.g.neighbors(v) {
            let slot = &mut self.neighbour_count[u][c];
            if *slot == 0 {
                self.saturation[u] += 1;
            }
            *slot += 1;
        }
    }

    fn unset(&mut self, v: usize, c: usize) {
        self.colour[v] = 0;
        for &u in self.g.neighbors(v) {
            let slot = &mut self.neighbour_count[u][c];
            *slot -= 1;
            if *slot == 0 {
                self.saturation[u] -= 1;
            }
        }
    }

    fn dfs(&mut self, used: usize) {
        if self.exhausted || self.best <= self.lower {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let Some(v) = self.pick() else {
            self.best = self.best.min(used);
            return;
        };
        let top = (used + 1).min(self.best - 1);
        for c in 1..=top {
            if self.neighbour_count[v][c] != 0 {
                continue;
            }
            self.set(v, c);
            self.dfs(used.max(c));
            self.unset(v, c);
            if self.exhausted || self.best <= self.lower || self.best - 1 <= c {
                return;
            }
        }
    }
}

/// Greedy DSATUR colouring (colours start at 1), indexed by vertex.
pub fn dsatur_greedy(g: &Graph) -> Vec<Colour> {
    let n = g.vertex_count();
    let mut colour = vec![0 as Colour; n];
    let mut seen: Vec<Vec<Colour>> = vec![Vec::new(); n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| colour[v] == 0)
            .max_by(|&a, &b| {
                seen[a]
                    .len()
                    .cmp(&seen[b].len())
                    .then(g.degree(a).cmp(&g.degree(b)))
                    .then(b.cmp(&a))
            })
            .expect("an uncoloured vertex remains");
        let c = (1..).find(|c| seen[v].binary_search(c).is_err()).unwrap();
        colour[v] = c;
        for &u in g.neighbors(v) {
            if let Err(pos) = seen[u].binary_search(&c) {
                seen[u].insert(pos, c);
            }
        }
    }
    colour
}

fn greedy_clique(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut best = Vec::new();
    for &start in &order {
        let mut clique = vec![start];
        for &v in &order {
            if v != start && clique.iter().all(|&u| g.has_edge(u, v)) {
                clique.push(v);
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

/// A maximum clique by branch and bound with greedy-colouring bounds.
pub fn maximum_clique(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut adj = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }

    fn colour_sort(adj: &[Vec<bool>], cand: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in cand {
            match classes
                .iter_mut()
                .find(|cls| cls.iter().all(|&u| !adj[u][v]))
            {
                Some(cls) => cls.push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut order = Vec::with_capacity(cand.len());
        let mut bound = Vec::with_capacity(cand.len());
        for (k, cls) in classes.into_iter().enumerate() {
            for v in cls {
                order.push(v);
                bound.push(k + 1);
            }
        }
        (order, bound)
    }

    fn expand(adj: &[Vec<bool>], current: &mut Vec<usize>, cand: &[usize], best: &mut Vec<usize>) {
        let (order, bound) = colour_sort(adj, cand);
        for i in (0..order.len()).rev() {
            if current.len() + bound[i] <= best.len() {
                return;
            }
            let v = order[i];
            current.push(v);
            let next: Vec<usize> = order[..i].iter().copied().filter(|&u| adj[v][u]).collect();
            if next.is_empty() {
                if current.len() > best.len() {
                    *best = current.clone();
                }
            } else {
                expand(adj, current, &next, best);
            }
            current.pop();
        }
    }

    let mut best = Vec::new();
    let cand: Vec<usize> = (0..n).collect();
    expand(&adj, &mut Vec::new(), &cand, &mut best);
    best.sort_unstable();
    best
}

/// A maximum set of pairwise non-adjacent vertices.
pub fn maximum_stable_set(g: &Graph) -> Vec<usize> {
    maximum_clique(&g.complement())
}

/// The system whose `k` intervals all contain gap `k`: interval `i` has left
/// rank `i + 1` and right rank `k + 1 + perm[i]`.
pub fn permutation_system(perm: &[usize]) -> IntervalSystem {
    let k = perm.len() as u32;
    let intervals = perm
        .iter()
        .enumerate()
        .map(|(i, &p)| Interval::new((i + 1).to_string(), i as u32 + 1, k + 1 + p as u32))
        .collect();
    IntervalSystem::from_ranks(intervals).expect("a permutation gives a valid system")
}

/// Searches for a failure of the witness property of a height colouring.
///
/// For every run `I_1, ..., I_k` of members with strictly increasing colours
/// and strictly increasing left (or right) endpoints, some `k` pairwise
/// overlapping members must have left (or right) endpoints inside
/// `[l(I_1), l(I_k)]` (or the matching right range). Cliques are found by
/// subset enumeration, so at most 16 members are accepted.
pub fn witness_counterexample(
    sys: &IntervalSystem,
    assigned: &[(usize, Colour)],
) -> Option<String> {
    let n = assigned.len();
    assert!(n <= 16, "subset enumeration is limited to 16 members");
    let mut overlap_mask = vec![0u32; n];
    for a in 0..n {
        for b in 0..n {
            if a != b
                && sys
                    .interval(assigned[a].0)
                    .overlaps(sys.interval(assigned[b].0))
            {
                overlap_mask[a] |= 1 << b;
            }
        }
    }
    for by_left in [true, false] {
        let key = |i: usize| {
            let iv = sys.interval(assigned[i].0);
            if by_left {
                iv.left
            } else {
                iv.right
            }
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| key(i));
        let sorted_mask: Vec<u32> = (0..n)
            .map(|p| members_mask(&order, p, &overlap_mask))
            .collect();
        // best[s][j]: largest clique whose sorted positions lie in s..=j.
        let mut best = vec![vec![0usize; n]; n];
        let mut clique = vec![false; 1 << n];
        clique[0] = true;
        for subset in 1u32..(1 << n) {
            let low = subset.trailing_zeros() as usize;
            let rest = subset & (subset - 1);
            clique[subset as usize] = clique[rest as usize] && rest & !sorted_mask[low] == 0;
            if clique[subset as usize] {
                let hi = 31 - subset.leading_zeros() as usize;
                best[low][hi] = best[low][hi].max(subset.count_ones() as usize);
            }
        }
        for s in (0..n).rev() {
            for j in s..n {
                let mut v = best[s][j];
                if j > s {
                    v = v.max(best[s][j - 1]);
                }
                if s < j {
                    v = v.max(best[s + 1][j]);
                }
                best[s][j] = v;
            }
        }
        for s in 0..n {
            let mut run = vec![0usize; n];
            run[s] = 1;
            for j in s + 1..n {
                let cj = assigned[order[j]].1;
                run[j] = (s..j)
                    .filter(|&i| run[i] > 0 && assigned[order[i]].1 < cj)
                    .map(|i| run[i] + 1)
                    .max()
                    .unwrap_or(0);
                if run[j] > best[s][j] {
                    return Some(format!(
                        "{} run of length {} from {:?} to {:?} has only {} overlapping members in range",
                        if by_left { "left" } else { "right" },
                        run[j],
                        sys.interval(assigned[order[s]].0).id,
                        sys.interval(assigned[order[j]].0).id,
                        best[s][j]
                    ));
                }
            }
        }
    }
    None
}

/// Overlap mask of the member at sorted position `p`, re-indexed by sorted position.
fn members_mask(order: &[usize], p: usize, overlap_mask: &[u32]) -> u32 {
    let raw = overlap_mask[order[p]];
    order
        .iter()
        .enumerate()
        .filter(|&(_, &i)| raw >> i & 1 == 1)
        .fold(0, |acc, (q, _)| acc | 1 << q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::overlap_graph;
    use crate::system::pillar_example;
    use proptest::prelude::*;

    fn brute_chi(g: &Graph) -> usize {
        let n = g.vertex_count();
        if n == 0 {
            return 0;
        }
        for k in 1..=n {
            let mut colour = vec![0usize; n];
            loop {
                if g.edges().all(|(u, v)| colour[u] != colour[v]) {
                    return k;
                }
                // Next assignment in base k.
                let mut pos = 0;
                while pos < n && colour[pos] == k - 1 {
                    colour[pos] = 0;
                    pos += 1;
                }
                if pos == n {
                    break;
                }
                colour[pos] += 1;
            }
        }
        n
    }

    fn brute_clique(g: &Graph) -> usize {
        let n = g.vertex_count();
        (0u32..1 << n)
            .filter(|mask| {
                let vs: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
                vs.iter()
                    .enumerate()
                    .all(|(i, &a)| vs[i + 1..].iter().all(|&b| g.has_edge(a, b)))
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (0..=max_n).prop_flat_map(|n| {
            prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
                let edges: Vec<(usize, usize)> = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .filter(|&(u, v)| bits[u * n + v])
                    .collect();
                Graph::from_edges((0..n).map(|i| i.to_string()).collect(), edges)
            })
        })
    }

    #[test]
    fn chi_of_complete_and_edgeless() {
        assert_eq!(
            exact_chi(&Graph::complete(5), DEFAULT_NODE_BUDGET),
            ChiResult::Exact(5)
        );
        assert_eq!(
            exact_chi(&Graph::edgeless(7), DEFAULT_NODE_BUDGET),
            ChiResult::Exact(1)
        );
        assert_eq!(
            exact_chi(&Graph::edgeless(0), DEFAULT_NODE_BUDGET),
            ChiResult::Exact(0)
        );
    }

    #[test]
    fn chi_of_pillar_example_frozen() {
        let g = overlap_graph(&pillar_example());
        assert_eq!(brute_chi(&g), 3);
        assert_eq!(exact_chi(&g, DEFAULT_NODE_BUDGET), ChiResult::Exact(3));
    }

    #[test]
    fn odd_cycle_needs_three() {
        let g = Graph::from_edges(
            (0..5).map(|i| i.to_string()).collect(),
            (0..5).map(|i| (i, (i + 1) % 5)),
        );
        assert_eq!(exact_chi(&g, DEFAULT_NODE_BUDGET), ChiResult::Exact(3));
        assert_eq!(maximum_clique(&g).len(), 2);
        assert_eq!(maximum_stable_set(&g).len(), 2);
    }

    #[test]
    fn tiny_budget_exhausts() {
        // Mycielski graph of C5 (Groetzsch): triangle-free with chi = 4.
        let mut edges: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        for i in 0..5 {
            edges.push((5 + i, (i + 1) % 5));
            edges.push((5 + i, (i + 4) % 5));
            edges.push((10, 5 + i));
        }
        let g = Graph::from_edges((0..11).map(|i| i.to_string()).collect(), edges);
        assert_eq!(exact_chi(&g, DEFAULT_NODE_BUDGET), ChiResult::Exact(4));
        assert_eq!(exact_chi(&g, 1), ChiResult::Exhausted);
    }

    #[test]
    fn verifier_cases() {
        let g = Graph::complete(2);
        let mut colours = BTreeMap::new();
        colours.insert("1".to_string(), 1);
        assert!(!verify_colouring(&g, &colours));
        colours.insert("2".to_string(), 1);
        assert!(!verify_colouring(&g, &colours));
        colours.insert("2".to_string(), 2);
        assert!(verify_colouring(&g, &colours));
        colours.insert("2".to_string(), 0);
        assert!(!verify_colouring(&g, &colours));
    }

    #[test]
    fn pillar_example_worked_colouring_verifies() {
        let sys = pillar_example();
        let g = overlap_graph(&sys);
        let colours: BTreeMap<String, Colour> = [
            ("I1", 1),
            ("I2", 1),
            ("I3", 2),
            ("I4", 3),
            ("I5", 5),
            ("I6", 2),
            ("I7", 2),
            ("I8", 6),
            ("I9", 1),
            ("I10", 3),
            ("I11", 4),
        ]
        .iter()
        .map(|&(id, c)| (id.to_string(), c))
        .collect();
        assert!(verify_colouring(&g, &colours));
    }

    #[test]
    fn random_system_cases() {
        assert!(random_system(0, 5).is_empty());
        let a = random_system(3, 42);
        assert_eq!(a, random_system(3, 42));
        // Frozen output of the documented generator for m = 3, seed = 42.
        let spans: Vec<(u32, u32)> = a.intervals().iter().map(|iv| (iv.left, iv.right)).collect();
        assert_eq!(spans, RANDOM_3_42);
        let big = random_system(1000, 7);
        assert_eq!(big.len(), 1000);
        let mut seen = vec![false; 2001];
        for iv in big.intervals() {
            assert!(iv.left < iv.right);
            seen[iv.left as usize] = true;
            seen[iv.right as usize] = true;
        }
        assert!(seen[1..].iter().all(|&s| s));
    }

    const RANDOM_3_42: [(u32, u32); 3] = [(4, 5), (1, 3), (2, 6)];

    proptest! {
        #[test]
        fn exact_chi_matches_enumeration(g in arb_graph(8)) {
            let chi = exact_chi(&g, DEFAULT_NODE_BUDGET).value().unwrap();
            prop_assert_eq!(chi, brute_chi(&g));
            prop_assert!(chi >= brute_clique(&g));
            let greedy = dsatur_greedy(&g);
            prop_assert!(chi <= greedy.iter().copied().max().unwrap_or(0) as usize);
            prop_assert!(verify_colouring_indexed(&g, &greedy.iter().map(|&c| Some(c)).collect::<Vec<_>>()));
        }

        #[test]
        fn maximum_clique_matches_enumeration(g in arb_graph(10)) {
            let clique = maximum_clique(&g);
            prop_assert_eq!(clique.len(), brute_clique(&g));
            for (i, &a) in clique.iter().enumerate() {
                for &b in &clique[i + 1..] {
                    prop_assert!(g.has_edge(a, b));
                }
            }
        }
    }
}

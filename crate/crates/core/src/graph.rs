//! Simple undirected graphs over string-identified vertices.

use crate::system::IntervalSystem;

/// Undirected, loop-free graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    ids: Vec<String>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from vertex ids and an edge list. Loops and repeated
    /// edges are dropped.
    pub fn from_edges(ids: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); ids.len()];
        for (u, v) in edges {
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Graph { ids, adj }
    }

    pub fn complete(k: usize) -> Self {
        let ids = (1..=k).map(|i| i.to_string()).collect();
        let edges = (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v)));
        Graph::from_edges(ids, edges)
    }

    pub fn edgeless(k: usize) -> Self {
        Graph::from_edges((1..=k).map(|i| i.to_string()).collect(), [])
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn complement(&self) -> Graph {
        let n = self.vertex_count();
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !self.has_edge(u, v))
            .collect::<Vec<_>>();
        Graph::from_edges(self.ids.clone(), edges)
    }
}

/// The overlap graph: one vertex per interval (same index order), an edge for
/// each overlapping pair.
pub fn overlap_graph(sys: &IntervalSystem) -> Graph {
    let ivs = sys.intervals();
    let mut edges = Vec::new();
    // Sweep by left endpoint: interval b starting inside a overlaps a iff it ends after a.
    let order: Vec<usize> = sys.by_left().collect();
    for (pos, &a) in order.iter().enumerate() {
        let ra = ivs[a].right;
        for &b in &order[pos + 1..] {
            if ivs[b].left > ra {
                break;
            }
            if ivs[b].right > ra {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(ivs.iter().map(|iv| iv.id.clone()).collect(), edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{permutation_example, pillar_example, Interval};

    fn brute_edges(sys: &IntervalSystem) -> usize {
        let ivs = sys.intervals();
        let mut count = 0;
        for a in 0..ivs.len() {
            for b in a + 1..ivs.len() {
                if ivs[a].overlaps(&ivs[b]) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn permutation_example_overlap_graph() {
        let g = overlap_graph(&permutation_example());
        // A-B, A-C, A-E, B-E, C-E, D-E; every other pair is nested.
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.edge_count(), brute_edges(&permutation_example()));
        assert!(!g.has_edge(0, 3));
        assert!(g.has_edge(0, 1));
    }

    #[test]
    fn pillar_example_matches_pairwise() {
        let sys = pillar_example();
        let g = overlap_graph(&sys);
        for a in 0..sys.len() {
            for b in 0..sys.len() {
                if a != b {
                    assert_eq!(g.has_edge(a, b), sys.interval(a).overlaps(sys.interval(b)));
                }
            }
        }
    }

    #[test]
    fn empty_and_staircase() {
        assert_eq!(overlap_graph(&IntervalSystem::empty()).vertex_count(), 0);
        let k = 6;
        let sys = IntervalSystem::from_ranks(
            (1..=k)
                .map(|i| Interval::new(i.to_string(), i, k + i))
                .collect(),
        )
        .unwrap();
        let g = overlap_graph(&sys);
        assert_eq!(g, Graph::complete(k as usize));
    }

    #[test]
    fn complement_of_complete_is_edgeless() {
        assert_eq!(Graph::complete(4).complement(), Graph::edgeless(4));
    }
}

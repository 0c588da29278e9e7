use std::collections::{BTreeMap, BTreeSet};

use super::BeepError;

/// Undirected simple graph over node ids `1..=n_ids`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n_ids: usize,
    adj: BTreeMap<usize, BTreeSet<usize>>,
}

impl Graph {
    pub fn new(
        n_ids: usize,
        nodes: impl IntoIterator<Item = usize>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, BeepError> {
        let mut adj = BTreeMap::new();
        for v in nodes {
            if v == 0 || v > n_ids {
                return Err(BeepError::IdOutOfRange { id: v, n: n_ids });
            }
            if adj.insert(v, BTreeSet::new()).is_some() {
                return Err(BeepError::Graph(format!("node {v} listed twice")));
            }
        }
        for (a, b) in edges {
            if a == b {
                return Err(BeepError::Graph(format!("self-loop at {a}")));
            }
            for x in [a, b] {
                if !adj.contains_key(&x) {
                    return Err(BeepError::Graph(format!("edge endpoint {x} is not a node")));
                }
            }
            if !adj.get_mut(&a).unwrap().insert(b) {
                return Err(BeepError::Graph(format!("duplicate edge {a}-{b}")));
            }
            adj.get_mut(&b).unwrap().insert(a);
        }
        Ok(Graph { n_ids, adj })
    }

    pub fn n_ids(&self) -> usize {
        self.n_ids
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.adj.keys().copied()
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj.get(&v).into_iter().flatten().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj.get(&a).is_some_and(|s| s.contains(&b))
    }

    /// Edges `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&a, s)| s.range(a + 1..).map(move |&b| (a, b)))
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(BTreeSet::len).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_and_reports_degree() {
        let g = Graph::new(4, [1, 2, 3, 4], [(1, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(g.max_degree(), 3);
        assert!(g.has_edge(3, 1));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2), (1, 3), (1, 4)]);
    }

    #[test]
    fn rejects_non_simple_graphs() {
        assert!(Graph::new(3, [1, 2], [(1, 1)]).is_err());
        assert!(Graph::new(3, [1, 2], [(1, 2), (2, 1)]).is_err());
        assert!(Graph::new(3, [1, 2], [(1, 3)]).is_err());
        assert!(Graph::new(3, [0], []).is_err());
        assert!(Graph::new(3, [4], []).is_err());
        assert!(Graph::new(3, [1, 1], []).is_err());
    }
}

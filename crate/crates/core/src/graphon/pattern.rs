use std::collections::BTreeSet;

use crate::error::{invalid, Result};

/// A finite simple graph used as a density statistic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphPattern {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl SubgraphPattern {
    /// Edges are normalized to `(min, max)` and sorted; loops and repeated
    /// pairs are rejected.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertex_count == 0 {
            return invalid("pattern needs at least one vertex");
        }
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return invalid(format!(
                    "edge ({u},{v}) out of range for {vertex_count} vertices"
                ));
            }
            if u == v {
                return invalid(format!("loop at vertex {u}"));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return invalid(format!("repeated edge ({u},{v})"));
            }
        }
        Ok(Self {
            vertex_count,
            edges: seen.into_iter().collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge() -> Self {
        Self::complete(2)
    }

    pub fn triangle() -> Self {
        Self::complete(3)
    }

    pub fn complete(k: usize) -> Self {
        let edges: Vec<_> = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .collect();
        Self::new(k.max(1), &edges).expect("complete graph is a valid pattern")
    }

    /// Two edges sharing a centre vertex.
    pub fn two_star() -> Self {
        Self::new(3, &[(0, 1), (0, 2)]).expect("valid pattern")
    }

    /// Path with `k` edges.
    pub fn path(k: usize) -> Self {
        let edges: Vec<_> = (0..k).map(|i| (i, i + 1)).collect();
        Self::new(k + 1, &edges).expect("valid pattern")
    }

    pub fn cycle(k: usize) -> Self {
        assert!(k >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        Self::new(k, &edges).expect("valid pattern")
    }
}

use crate::error::{invalid, Result};

/// Largest graph the sampler accepts.
pub const MAX_VERTICES: usize = 2000;

/// Labeled simple graph with edge and triangle counts maintained under
/// single-pair toggles.
///
/// Adjacency rows are bitsets; common-neighbour counts are popcounts of row
/// intersections, computed on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphState {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    edge_count: u64,
    triangle_count: u64,
}

impl GraphState {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("graph needs at least one vertex");
        }
        if n > MAX_VERTICES {
            return invalid(format!(
                "n = {n} exceeds the sampler limit of {MAX_VERTICES}"
            ));
        }
        let words = n.div_ceil(64);
        Ok(Self {
            n,
            words,
            rows: vec![0; n * words],
            edge_count: 0,
            triangle_count: 0,
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    /// Complete bipartite graph between `0..⌈n/2⌉` and the rest.
    pub fn complete_bipartite(n: usize) -> Result<Self> {
        let half = n.div_ceil(2);
        Self::from_edges(n, (0..half).flat_map(|i| (half..n).map(move |j| (i, j))))
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for (i, j) in edges {
            if i >= n || j >= n || i == j {
                return invalid(format!("edge ({i},{j}) invalid for n = {n}"));
            }
            if !g.has_edge(i, j) {
                g.toggle(i, j);
            }
        }
        Ok(g)
    }

    pub fn from_adjacency(adjacency: &[Vec<bool>]) -> Result<Self> {
        let n = adjacency.len();
        for (i, row) in adjacency.iter().enumerate() {
            if row.len() != n || row[i] {
                return invalid(format!("adjacency row {i} malformed"));
            }
            for j in 0..n {
                if row[j] != adjacency[j][i] {
                    return invalid(format!("adjacency not symmetric at ({i},{j})"));
                }
            }
        }
        Self::from_edges(
            n,
            (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| adjacency[i][j]),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    pub fn triangle_count(&self) -> u64 {
        self.triangle_count
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.row(i).iter().map(|w| w.count_ones()).sum()
    }

    pub fn common_neighbors(&self, i: usize, j: usize) -> u64 {
        self.row(i)
            .iter()
            .zip(self.row(j))
            .map(|(a, b)| (a & b).count_ones() as u64)
            .sum()
    }

    /// Change in `(edges, triangles)` if the pair `{i, j}` were toggled.
    pub fn toggle_delta(&self, i: usize, j: usize) -> Result<(i64, i64)> {
        if i == j {
            return invalid(format!("cannot toggle the loop ({i},{i})"));
        }
        if i >= self.n || j >= self.n {
            return invalid(format!("pair ({i},{j}) out of range for n = {}", self.n));
        }
        Ok(self.toggle_delta_unchecked(i, j))
    }

    pub(crate) fn toggle_delta_unchecked(&self, i: usize, j: usize) -> (i64, i64) {
        let common = self.common_neighbors(i, j) as i64;
        if self.has_edge(i, j) {
            (-1, -common)
        } else {
            (1, common)
        }
    }

    /// Flips the pair `{i, j}` and updates the counts.
    pub(crate) fn toggle(&mut self, i: usize, j: usize) {
        let (de, dt) = self.toggle_delta_unchecked(i, j);
        self.rows[i * self.words + j / 64] ^= 1 << (j % 64);
        self.rows[j * self.words + i / 64] ^= 1 << (i % 64);
        self.edge_count = self.edge_count.wrapping_add_signed(de);
        self.triangle_count = self.triangle_count.wrapping_add_signed(dt);
    }

    /// `t(K₂, G) = 2|E|/n²`.
    pub fn edge_density(&self) -> f64 {
        2.0 * self.edge_count as f64 / (self.n * self.n) as f64
    }

    /// `t(K₃, G) = 6·#triangles/n³`.
    pub fn triangle_density(&self) -> f64 {
        let n = self.n as f64;
        6.0 * self.triangle_count as f64 / (n * n * n)
    }

    /// Counts recomputed from the adjacency rows.
    pub fn recount(&self) -> (u64, u64) {
        let mut edges = 0;
        let mut triangles = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(i, j) {
                    edges += 1;
                    // Common neighbours above j close each triangle once.
                    triangles += (j + 1..self.n)
                        .filter(|&l| self.has_edge(i, l) && self.has_edge(j, l))
                        .count() as u64;
                }
            }
        }
        (edges, triangles)
    }

    /// Sorted `(i, j)` pairs with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has_edge(i, j))
            .collect()
    }

    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.has_edge(i, j)).collect())
            .collect()
    }

    /// Plain-text edge list, one `i j` pair per line, 0-indexed and sorted.
    pub fn write_edge_list<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        for (i, j) in self.edges() {
            writeln!(out, "{i} {j}")?;
        }
        Ok(())
    }

    pub fn read_edge_list(n: usize, text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace().map(str::parse::<usize>);
            match (parts.next(), parts.next(), parts.next()) {
                (Some(Ok(i)), Some(Ok(j)), None) => edges.push((i, j)),
                _ => return invalid(format!("edge list line {} malformed: {line:?}", lineno + 1)),
            }
        }
        Self::from_edges(n, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toggle_delta_examples() {
        let g = GraphState::empty(5).unwrap();
        assert_eq!(g.toggle_delta(0, 3).unwrap(), (1, 0));
        let k3 = GraphState::complete(3).unwrap();
        assert_eq!(k3.triangle_count(), 1);
        assert_eq!(k3.toggle_delta(0, 1).unwrap(), (-1, -1));
        let k4 = GraphState::complete(4).unwrap();
        assert_eq!(k4.triangle_count(), 4);
        assert_eq!(k4.toggle_delta(2, 3).unwrap(), (-1, -2));
        assert!(k4.toggle_delta(1, 1).is_err());
        assert!(k4.toggle_delta(1, 4).is_err());
    }

    #[test]
    fn densities_follow_hom_convention() {
        let k3 = GraphState::complete(3).unwrap();
        assert!((k3.edge_density() - 6.0 / 9.0).abs() < 1e-15);
        assert!((k3.triangle_density() - 6.0 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn bipartite_counts() {
        let g = GraphState::complete_bipartite(60).unwrap();
        assert_eq!(g.edge_count(), 900);
        assert_eq!(g.triangle_count(), 0);
        assert_eq!(g.recount(), (900, 0));
    }

    #[test]
    fn wide_rows_span_words() {
        let mut g = GraphState::empty(130).unwrap();
        g.toggle(0, 129);
        g.toggle(70, 129);
        g.toggle(0, 70);
        assert_eq!(g.triangle_count(), 1);
        assert_eq!(g.common_neighbors(0, 70), 1);
        assert_eq!(g.recount(), (3, 1));
    }

    #[test]
    fn size_limits() {
        assert!(GraphState::empty(0).is_err());
        assert!(GraphState::empty(MAX_VERTICES + 1).is_err());
    }

    #[test]
    fn edge_list_text() {
        let g = GraphState::from_edges(4, [(2, 1), (0, 3)]).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "0 3\n1 2\n");
        assert_eq!(GraphState::read_edge_list(4, &text).unwrap(), g);
        assert!(GraphState::read_edge_list(4, "0 1 2\n").is_err());
    }
}

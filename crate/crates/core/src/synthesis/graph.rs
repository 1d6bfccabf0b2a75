use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Undirected, simple, connected qubit connectivity graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingGraph {
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl CouplingGraph {
    /// Builds the graph on nodes `0..num_nodes`. Edges are stored with the
    /// smaller endpoint first and sorted.
    pub fn new(num_nodes: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if num_nodes == 0 {
            return Err(Error::invalid("coupling graph needs at least one node"));
        }
        let mut adjacency = vec![Vec::new(); num_nodes];
        let mut norm = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= num_nodes || b >= num_nodes {
                return Err(Error::invalid(format!("edge ({a}, {b}) outside 0..{num_nodes}")));
            }
            if a == b {
                return Err(Error::invalid(format!("self loop on node {a}")));
            }
            let e = (a.min(b), a.max(b));
            if adjacency[a].contains(&b) {
                return Err(Error::invalid(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
            norm.push(e);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        norm.sort_unstable();
        let g = CouplingGraph { adjacency, edges: norm };
        if g.distances_from(0).contains(&usize::MAX) {
            return Err(Error::invalid("coupling graph is not connected"));
        }
        Ok(g)
    }

    /// Path `0 - 1 - … - (n-1)`.
    pub fn line(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|k| (k - 1, k)).collect();
        Self::new(n, &edges)
    }

    pub fn num_nodes(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.num_nodes() && self.adjacency[a].binary_search(&b).is_ok()
    }

    /// BFS hop counts from `src`; unreachable nodes get `usize::MAX`.
    pub fn distances_from(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.num_nodes()];
        let mut queue = VecDeque::from([src]);
        dist[src] = 0;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// All-pairs hop counts.
    pub fn distance_matrix(&self) -> Vec<Vec<usize>> {
        (0..self.num_nodes()).map(|v| self.distances_from(v)).collect()
    }

    /// One shortest path from `a` to `b`, inclusive of both ends. Ties go
    /// to the lowest-index neighbour.
    pub fn shortest_path(&self, a: usize, b: usize) -> Vec<usize> {
        let dist = self.distances_from(b);
        let mut path = vec![a];
        let mut v = a;
        while v != b {
            v = *self.adjacency[v].iter().find(|&&w| dist[w] + 1 == dist[v]).expect("graph is connected");
            path.push(v);
        }
        path
    }
}

/// Heavy-hex lattice with `rows` lines of `cols` qubits.
///
/// Consecutive lines are joined by bridge qubits, one every four columns,
/// at columns `≡ 0 (mod 4)` below even lines and `≡ 2 (mod 4)` below odd
/// lines. Nodes are numbered line by line, each line followed by the
/// bridges beneath it.
pub fn heavy_hex_graph(rows: usize, cols: usize) -> Result<CouplingGraph> {
    let lines: Vec<Vec<usize>> = (0..rows).map(|_| (0..cols).collect()).collect();
    heavy_hex_from_lines(&lines, cols)
}

/// The 127-qubit heavy-hex device layout: seven lines of fifteen columns,
/// with the last column of the first line and the first column of the
/// last line absent.
pub fn eagle_127() -> CouplingGraph {
    let mut lines: Vec<Vec<usize>> = (0..7).map(|_| (0..15).collect()).collect();
    lines[0].pop();
    lines[6].remove(0);
    heavy_hex_from_lines(&lines, 15).expect("fixed layout is valid")
}

fn heavy_hex_from_lines(lines: &[Vec<usize>], cols: usize) -> Result<CouplingGraph> {
    let rows = lines.len();
    if rows == 0 || cols == 0 || rows * cols < 2 {
        return Err(Error::invalid(format!("heavy-hex lattice {rows}x{cols} has fewer than two nodes")));
    }
    let bridge_cols = |r: usize| (0..cols).filter(move |c| c % 4 == if r.is_multiple_of(2) { 0 } else { 2 });
    let mut id = vec![vec![None; cols]; rows];
    let mut next = 0;
    let mut bridges = Vec::new();
    let mut edges = Vec::new();
    for r in 0..rows {
        for &c in &lines[r] {
            id[r][c] = Some(next);
            next += 1;
        }
        if r + 1 < rows {
            for c in bridge_cols(r) {
                bridges.push((r, c, next));
                next += 1;
            }
        }
    }
    for row in &id {
        for c in 1..cols {
            if let (Some(a), Some(b)) = (row[c - 1], row[c]) {
                edges.push((a, b));
            }
        }
    }
    for &(r, c, b) in &bridges {
        if let Some(a) = id[r][c] {
            edges.push((a, b));
        }
        if let Some(a) = id[r + 1][c] {
            edges.push((b, a));
        }
    }
    CouplingGraph::new(next, &edges)
}

impl fmt::Display for CouplingGraph {
    /// Edge-list text: a `# nodes N` header, then one `a b` pair per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# nodes {}", self.num_nodes())?;
        for (a, b) in &self.edges {
            writeln!(f, "{a} {b}")?;
        }
        Ok(())
    }
}

impl FromStr for CouplingGraph {
    type Err = Error;

    /// Parses edge-list text. The node count comes from a `# nodes N`
    /// header when present and from the largest index otherwise; other `#`
    /// lines are comments.
    fn from_str(s: &str) -> Result<Self> {
        let mut declared = None;
        let mut edges = Vec::new();
        for (k, raw) in s.lines().enumerate() {
            let line = raw.trim();
            let parse_err = |msg: String| Error::Parse { line: k + 1, msg };
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(n) = comment.trim().strip_prefix("nodes") {
                    declared = Some(n.trim().parse::<usize>().map_err(|e| parse_err(format!("bad node count: {e}")))?);
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(parse_err(format!("expected two node indices, got {line:?}")));
            }
            let a = fields[0].parse::<usize>().map_err(|e| parse_err(format!("bad node {:?}: {e}", fields[0])))?;
            let b = fields[1].parse::<usize>().map_err(|e| parse_err(format!("bad node {:?}: {e}", fields[1])))?;
            edges.push((a, b));
        }
        let inferred = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        let n = declared.unwrap_or(inferred);
        if n == 0 {
            return Err(Error::Parse { line: 0, msg: "empty edge list".into() });
        }
        CouplingGraph::new(n, &edges)
    }
}

//! Erdős–Rényi graphs `G(N, p)` and connectivity.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::sampling::RngStream;

/// Below this edge probability `gen_er` switches from visiting every pair to
/// geometric skipping. Part of the reproducibility contract: changing it
/// changes every sparse graph drawn from a given seed.
pub const SPARSE_CUTOFF: f64 = 0.1;

/// Default rejection budget for [`gen_connected_at_threshold`].
pub const DEFAULT_MAX_ATTEMPTS: usize = 10_000;

/// Undirected simple graph stored as sorted neighbour lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    neighbors: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Self { neighbors: vec![Vec::new(); n], edge_count: 0 }
    }

    pub fn complete(n: usize) -> Self {
        let neighbors = (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect();
        Self { neighbors, edge_count: n * n.saturating_sub(1) / 2 }
    }

    /// Builds a graph from unordered edges. Self-loops, duplicates and
    /// out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut neighbors = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::param(format!("edge ({a}, {b}) out of range for n = {n}")));
            }
            if a == b {
                return Err(Error::param(format!("self-loop at node {a}")));
            }
            neighbors[a].push(b);
            neighbors[b].push(a);
            edge_count += 1;
        }
        for (i, list) in neighbors.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::param(format!("duplicate edge at node {i}")));
            }
        }
        Ok(Self { neighbors, edge_count })
    }

    pub fn n(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn mean_degree(&self) -> f64 {
        if self.n() == 0 {
            0.0
        } else {
            2.0 * self.edge_count as f64 / self.n() as f64
        }
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.edge_count == n * n.saturating_sub(1) / 2
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn is_connected(&self) -> bool {
        is_connected(self)
    }

    /// Serialises as an edge list: `N M` followed by one `i j` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n(), self.edge_count);
        for (i, j) in self.edges() {
            let _ = writeln!(out, "{i} {j}");
        }
        out
    }

    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_edge_list().as_bytes())?;
        Ok(())
    }

    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| Error::Malformed("empty edge list".into()))??;
        let (n, m) = parse_pair(&header, 1)?;
        let mut edges = Vec::with_capacity(m);
        for (idx, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let (i, j) = parse_pair(&line, idx + 2)?;
            if i >= j {
                return Err(Error::Malformed(format!("line {}: expected i < j, got {i} {j}", idx + 2)));
            }
            edges.push((i, j));
        }
        if edges.len() != m {
            return Err(Error::Malformed(format!("header announces {m} edges, found {}", edges.len())));
        }
        Graph::from_edges(n, edges).map_err(|e| Error::Malformed(e.to_string()))
    }
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(Error::Malformed(format!("line {lineno}: expected two integers, got {line:?}"))),
    }
}

/// `ln(n) / n`, the probability above which `G(n, p)` is almost surely connected.
pub fn connectivity_threshold(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::param(format!("connectivity threshold needs n >= 2, got {n}")));
    }
    let n = n as f64;
    Ok(n.ln() / n)
}

/// Samples `G(n, p)`: every pair `{i, j}` is linked independently with probability `p`.
///
/// For `p >= SPARSE_CUTOFF` one uniform draw is consumed per pair in the order
/// `(0,1), (0,2), ..., (n-2,n-1)`. Sparser graphs skip over non-edges with
/// geometric jumps (Batagelj and Brandes, 2005) so the cost is `O(n + m)`.
pub fn gen_er(n: usize, p: f64, stream: &mut RngStream) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("edge probability must lie in [0, 1], got {p}")));
    }
    let mut neighbors = vec![Vec::new(); n];
    let mut edge_count = 0;
    if p == 0.0 || n < 2 {
        return Ok(Graph { neighbors, edge_count });
    }

    if p >= SPARSE_CUTOFF {
        for i in 0..n {
            for j in i + 1..n {
                if stream.next_f64() < p {
                    neighbors[i].push(j);
                    neighbors[j].push(i);
                    edge_count += 1;
                }
            }
        }
    } else {
        // Walks the strictly lower triangle (v, w), w < v, row by row.
        let log_q = (-p).ln_1p();
        let mut v = 1usize;
        let mut w: i64 = -1;
        while v < n {
            let r = stream.next_f64();
            let skip = ((-r).ln_1p() / log_q).floor();
            w += 1 + if skip.is_finite() { skip.min(i64::MAX as f64 / 4.0) as i64 } else { i64::MAX / 4 };
            while v < n && w >= v as i64 {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                let w = w as usize;
                neighbors[v].push(w);
                neighbors[w].push(v);
                edge_count += 1;
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
    }
    Ok(Graph { neighbors, edge_count })
}

/// Breadth-first search from node 0. The empty graph counts as connected.
pub fn is_connected(g: &Graph) -> bool {
    let n = g.n();
    if n <= 1 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    reached == n
}

/// First connected sample of `G(n, p)`.
///
/// Attempt `a` draws from `stream.derive(a)`, so the result depends only on
/// the stream lineage and not on the stream's position.
pub fn gen_connected(n: usize, p: f64, stream: &RngStream, max_attempts: usize) -> Result<Graph> {
    if max_attempts == 0 {
        return Err(Error::param("max_attempts must be positive"));
    }
    for attempt in 0..max_attempts {
        let g = gen_er(n, p, &mut stream.derive(attempt as u64))?;
        if is_connected(&g) {
            return Ok(g);
        }
    }
    Err(Error::RejectionExhausted { attempts: max_attempts })
}

/// First connected sample of `G(n, ln n / n)`; see [`gen_connected`].
pub fn gen_connected_at_threshold(n: usize, stream: &RngStream, max_attempts: usize) -> Result<Graph> {
    gen_connected(n, connectivity_threshold(n)?, stream, max_attempts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_invariants(g: &Graph) {
        let mut degree_sum = 0;
        for i in 0..g.n() {
            let nb = g.neighbors(i);
            assert!(nb.windows(2).all(|w| w[0] < w[1]), "node {i} not sorted/unique");
            assert!(!nb.contains(&i), "self-loop at {i}");
            for &j in nb {
                assert!(g.neighbors(j).binary_search(&i).is_ok(), "asymmetric {i}-{j}");
            }
            degree_sum += g.degree(i);
        }
        assert_eq!(degree_sum, 2 * g.edge_count());
    }

    #[test]
    fn threshold_values() {
        assert!((connectivity_threshold(100).unwrap() - 0.046_051_701_859_880_91).abs() < 1e-15);
        assert!((connectivity_threshold(1000).unwrap() - 0.006_907_755_278_982_137).abs() < 1e-15);
        assert!((connectivity_threshold(3).unwrap() - 0.366_204_096_222_703_3).abs() < 1e-15);
        assert!(connectivity_threshold(1).is_err());
        assert!(connectivity_threshold(0).is_err());
    }

    #[test]
    fn degenerate_probabilities() {
        let mut s = RngStream::new(1);
        let g = gen_er(30, 0.0, &mut s).unwrap();
        assert_eq!(g.edge_count(), 0);
        let g = gen_er(30, 1.0, &mut s).unwrap();
        assert_eq!(g.edge_count(), 30 * 29 / 2);
        assert!(g.degrees().iter().all(|&d| d == 29));
        assert!(g.is_complete());
        check_invariants(&g);
        assert!(gen_er(30, 1.5, &mut s).is_err());
        assert!(gen_er(30, -0.1, &mut s).is_err());
        assert!(gen_er(30, f64::NAN, &mut s).is_err());
    }

    #[test]
    fn both_sampling_paths_keep_invariants() {
        for &p in &[0.01, 0.05, 0.099, 0.1, 0.3, 0.9] {
            let g = gen_er(200, p, &mut RngStream::new(3)).unwrap();
            check_invariants(&g);
        }
    }

    #[test]
    fn sparse_path_reaches_last_pair() {
        // With p just under the cutoff the skip sampler must still be able to
        // emit (n-1, n-2); check the empirical pair frequency over many draws.
        let n = 6;
        let p = 0.09;
        let trials = 40_000;
        let root = RngStream::new(8);
        let mut hits = 0;
        for t in 0..trials {
            let g = gen_er(n, p, &mut root.derive(t)).unwrap();
            if g.neighbors(n - 1).contains(&(n - 2)) {
                hits += 1;
            }
        }
        let freq = hits as f64 / trials as f64;
        let sd = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((freq - p).abs() < 5.0 * sd, "freq = {freq}");
    }

    #[test]
    fn generation_is_deterministic() {
        let a = gen_er(300, 0.02, &mut RngStream::new(9).derive(0)).unwrap();
        let b = gen_er(300, 0.02, &mut RngStream::new(9).derive(0)).unwrap();
        assert_eq!(a, b);
        let c = gen_er(50, 0.4, &mut RngStream::new(9)).unwrap();
        let d = gen_er(50, 0.4, &mut RngStream::new(9)).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn connectivity_examples() {
        let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(is_connected(&path));
        let split = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!is_connected(&split));
        for n in 1..8 {
            assert!(is_connected(&Graph::complete(n)));
        }
        assert!(!is_connected(&Graph::empty(2)));
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(Graph::from_edges(3, [(0, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn connected_at_threshold_small() {
        let g = gen_connected_at_threshold(50, &RngStream::new(12345), DEFAULT_MAX_ATTEMPTS).unwrap();
        assert_eq!(g.n(), 50);
        assert!(is_connected(&g));
        check_invariants(&g);

        let g2 = gen_connected_at_threshold(2, &RngStream::new(4), DEFAULT_MAX_ATTEMPTS).unwrap();
        assert_eq!(g2.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert!(gen_connected_at_threshold(1, &RngStream::new(4), 10).is_err());
    }

    #[test]
    fn rejection_exhausted_with_adversarial_seed() {
        // Find a seed whose first attempt at n = 50 is disconnected.
        let p = connectivity_threshold(50).unwrap();
        let seed = (0..1000u64)
            .find(|&s| !is_connected(&gen_er(50, p, &mut RngStream::new(s).derive(0)).unwrap()))
            .expect("some first draw is disconnected");
        let err = gen_connected_at_threshold(50, &RngStream::new(seed), 1).unwrap_err();
        assert!(matches!(err, Error::RejectionExhausted { attempts: 1 }));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = gen_er(40, 0.2, &mut RngStream::new(5)).unwrap();
        let text = g.to_edge_list();
        assert!(text.starts_with(&format!("40 {}\n", g.edge_count())));
        assert!(text.ends_with('\n'));
        let back = Graph::read_edge_list(text.as_bytes()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn edge_list_rejects_malformed() {
        assert!(Graph::read_edge_list("".as_bytes()).is_err());
        assert!(Graph::read_edge_list("3 1\n1 0\n".as_bytes()).is_err());
        assert!(Graph::read_edge_list("3 2\n0 1\n".as_bytes()).is_err());
        assert!(Graph::read_edge_list("3 1\n0 x\n".as_bytes()).is_err());
    }
}

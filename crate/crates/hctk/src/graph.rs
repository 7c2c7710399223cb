//! Simple connected graphs, the text format, and metric primitives.

use crate::error::{Error, Result};
use crate::vset::VertexSet;
use std::collections::VecDeque;
use std::fmt::Write as _;

/// A simple, undirected, connected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting loops, parallel edges, bad labels and
    /// disconnected inputs.
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Graph> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let mut es = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::VertexOutOfRange(a.max(b)));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at vertex {a}")));
            }
            es.push((a.min(b), a.max(b)));
        }
        es.sort_unstable();
        for w in es.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidGraph(format!(
                    "parallel edge {} {}",
                    w[0].0, w[0].1
                )));
            }
        }
        let g = Self::from_sorted_edges(n, es);
        if !g.is_connected() {
            return Err(Error::InvalidGraph("graph is disconnected".into()));
        }
        Ok(g)
    }

    fn from_sorted_edges(n: usize, edges: Vec<(usize, usize)>) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically. The position
    /// in this list is the edge index.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn is_regular(&self) -> bool {
        self.adj.iter().all(|l| l.len() == self.adj[0].len())
    }

    fn is_connected(&self) -> bool {
        self.distances(0).iter().all(|&d| d != usize::MAX)
    }

    /// BFS distances from `v`.
    pub fn distances(&self, v: usize) -> Vec<usize> {
        let mut d = vec![usize::MAX; self.n];
        let mut q = VecDeque::new();
        d[v] = 0;
        q.push_back(v);
        while let Some(x) = q.pop_front() {
            for &y in &self.adj[x] {
                if d[y] == usize::MAX {
                    d[y] = d[x] + 1;
                    q.push_back(y);
                }
            }
        }
        d
    }

    pub fn metric(&self) -> Metric {
        let n = self.n;
        let mut d = vec![0u32; n * n];
        for v in 0..n {
            for (u, du) in self.distances(v).into_iter().enumerate() {
                d[v * n + u] = du as u32;
            }
        }
        Metric { n, d }
    }

    /// An edge whose endpoints get the same colour in a BFS 2-colouring, if any.
    pub fn odd_edge(&self) -> Option<(usize, usize)> {
        let d = self.distances(0);
        self.edges
            .iter()
            .copied()
            .find(|&(a, b)| d[a] % 2 == d[b] % 2)
    }

    pub fn is_bipartite(&self) -> bool {
        self.odd_edge().is_none()
    }

    /// Induced subgraph on `s`, with the map from new labels to old ones.
    /// New labels preserve the order of the old ones.
    pub fn induced(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        let verts = s.to_vec();
        if verts.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| s.contains(a) && s.contains(b))
            .map(|&(a, b)| (index[a], index[b]));
        Ok((Graph::new(verts.len(), edges)?, verts))
    }

    /// Parses the text format: a header `n m`, then `m` lines `u v` with
    /// `0 <= u < v < n`. Lines starting with `#` and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            last_line = lineno;
            let trimmed = raw.trim_start();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let toks = tokens(raw);
            if toks.len() != 2 {
                let column = toks.get(2).map(|t| t.0).unwrap_or(raw.len() + 1);
                return Err(parse_err(
                    lineno,
                    column,
                    format!("expected two integers, found {} fields", toks.len()),
                ));
            }
            let a = parse_num(lineno, toks[0])?;
            let b = parse_num(lineno, toks[1])?;
            match header {
                None => header = Some((a, b)),
                Some((n, m)) => {
                    if edges.len() == m {
                        return Err(parse_err(
                            lineno,
                            toks[0].0,
                            format!("more than the declared {m} edge lines"),
                        ));
                    }
                    if b >= n {
                        return Err(parse_err(
                            lineno,
                            toks[1].0,
                            format!("vertex {b} out of range 0..{n}"),
                        ));
                    }
                    if a >= b {
                        return Err(parse_err(
                            lineno,
                            toks[0].0,
                            format!("expected u < v, found {a} {b}"),
                        ));
                    }
                    edges.push((a, b, lineno));
                }
            }
        }
        let (n, m) = header.ok_or_else(|| parse_err(1, 1, "missing header line `n m`".into()))?;
        if edges.len() != m {
            return Err(parse_err(
                last_line.max(1),
                1,
                format!("declared {m} edges, found {}", edges.len()),
            ));
        }
        let mut sorted: Vec<_> = edges.clone();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                return Err(parse_err(
                    w[0].2.max(w[1].2),
                    1,
                    format!("duplicate edge {} {}", w[0].0, w[0].1),
                ));
            }
        }
        Graph::new(n, edges.into_iter().map(|(a, b, _)| (a, b)))
    }

    /// Serializes to the text format with edges in sorted order.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.m());
        for &(a, b) in &self.edges {
            writeln!(s, "{a} {b}").unwrap();
        }
        s
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph {name} {{\n");
        for v in 0..self.n {
            writeln!(s, "  {v};").unwrap();
        }
        for &(a, b) in &self.edges {
            writeln!(s, "  {a} -- {b};").unwrap();
        }
        s.push_str("}\n");
        s
    }
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_num(line: usize, tok: (usize, &str)) -> Result<usize> {
    tok.1
        .parse::<usize>()
        .map_err(|_| parse_err(line, tok.0, format!("expected a non-negative integer, found `{}`", tok.1)))
}

fn parse_err(line: usize, column: usize, message: String) -> Error {
    Error::Parse {
        line,
        column,
        message,
    }
}

/// All-pairs shortest-path distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    n: usize,
    d: Vec<u32>,
}

impl Metric {
    #[inline]
    pub fn d(&self, u: usize, v: usize) -> usize {
        self.d[u * self.n + v] as usize
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diameter(&self) -> usize {
        self.d.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn interval(&self, u: usize, v: usize) -> VertexSet {
        let duv = self.d(u, v);
        VertexSet::from_iter(self.n, (0..self.n).filter(|&x| self.d(u, x) + self.d(x, v) == duv))
    }

    pub fn ball(&self, v: usize, r: usize) -> VertexSet {
        VertexSet::from_iter(self.n, (0..self.n).filter(|&x| self.d(v, x) <= r))
    }

    /// Convexity test: for each `x` in `s`, every vertex of `s` must have all
    /// its neighbours closer to `x` inside `s`.
    pub fn is_convex(&self, g: &Graph, s: &VertexSet) -> bool {
        for x in s.iter() {
            for y in s.iter() {
                let dy = self.d(x, y);
                for &z in g.neighbors(y) {
                    if self.d(x, z) + 1 == dy && !s.contains(z) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Interval-closure fixpoint; the hull algorithm for raw graphs.
    pub fn interval_closure(&self, s: &VertexSet) -> VertexSet {
        let mut cur = s.clone();
        loop {
            let mut next = cur.clone();
            let vs = cur.to_vec();
            for (i, &a) in vs.iter().enumerate() {
                for &b in &vs[i + 1..] {
                    next.union_with(&self.interval(a, b));
                }
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// The gate of `x` in `s`, if one exists.
    pub fn gate(&self, s: &VertexSet, x: usize) -> Option<usize> {
        let g = s.iter().min_by_key(|&y| (self.d(x, y), y))?;
        let dg = self.d(x, g);
        s.iter()
            .all(|y| dg + self.d(g, y) == self.d(x, y))
            .then_some(g)
    }

    pub fn is_gated(&self, s: &VertexSet) -> bool {
        (0..self.n).all(|x| self.gate(s, x).is_some())
    }
}

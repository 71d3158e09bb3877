//! Undirected simple graphs with dense vertex ids.
//!
//! Vertices are `0..n`. Edges are stored once, as `(u, v)` with `u < v`,
//! sorted lexicographically; this canonical edge order is what the
//! enumeration oracle indexes its direction vectors by.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// An immutable undirected simple graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Graph {
    /// Builds a graph on vertices `0..n`. Duplicate edges collapse,
    /// endpoint order is ignored. Self-loops and out-of-range endpoints
    /// are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop { vertex: u });
            }
            let (a, b) = (u.min(v), u.max(v));
            if b >= n {
                return Err(Error::UnknownVertex { vertex: b, count: n });
            }
            set.insert((a, b));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph construction cannot fail")
    }

    /// Path `0 - 1 - ... - n-1`.
    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|v| (v - 1, v))).expect("path construction cannot fail")
    }

    /// Cycle `0 - 1 - ... - n-1 - 0`. Requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let edges = (0..n).map(|v| (v, (v + 1) % n));
        Graph::new(n, edges).expect("cycle construction cannot fail")
    }

    /// Complete multipartite graph; `parts[i]` is the size of part `i` and
    /// vertices are numbered part by part.
    pub fn complete_multipartite(parts: &[usize]) -> Self {
        let n: usize = parts.iter().sum();
        let mut part_of = Vec::with_capacity(n);
        for (i, &size) in parts.iter().enumerate() {
            part_of.extend(std::iter::repeat_n(i, size));
        }
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| part_of[u] != part_of[v]);
        Graph::new(n, edges).expect("multipartite construction cannot fail")
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list: `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        v < self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Index of edge `{u, v}` in the canonical edge list.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::UnknownVertex {
                vertex: v,
                count: self.n,
            })
        }
    }

    /// Connected components: `(count, label per vertex)`. Labels are
    /// assigned in increasing order of each component's smallest vertex.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (count, label)
    }

    /// True iff every pair of vertices in `s` is adjacent.
    pub fn is_clique(&self, s: &VertexSet) -> Result<bool> {
        let verts: Vec<usize> = s.iter().collect();
        for &v in &verts {
            self.check_vertex(v)?;
        }
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                if !self.has_edge(u, v) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Subgraph induced by `s`, relabeled to dense ids preserving the
    /// numeric order of the original ids. The returned map sends new ids
    /// to old ids.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        let old_ids: Vec<usize> = s.iter().collect();
        for &v in &old_ids {
            self.check_vertex(v)?;
        }
        let mut new_id = BTreeMap::new();
        for (i, &v) in old_ids.iter().enumerate() {
            new_id.insert(v, i);
        }
        let edges = self.edges.iter().filter_map(|&(u, v)| {
            match (new_id.get(&u), new_id.get(&v)) {
                (Some(&a), Some(&b)) => Some((a, b)),
                _ => None,
            }
        });
        let g = Graph::new(old_ids.len(), edges)?;
        Ok((g, old_ids))
    }

    /// Returns a new graph with one extra vertex (id `n`) adjacent to
    /// exactly the vertices of `q_set`, which must form a clique.
    pub fn add_simplicial_vertex(&self, q_set: &VertexSet) -> Result<Graph> {
        self.require_clique(q_set)?;
        let new = self.n;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(q_set.iter().map(|w| (w, new)));
        Graph::new(self.n + 1, edges)
    }

    pub(crate) fn require_clique(&self, s: &VertexSet) -> Result<()> {
        let verts: Vec<usize> = s.iter().collect();
        for &v in &verts {
            self.check_vertex(v)?;
        }
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                if !self.has_edge(u, v) {
                    return Err(Error::NotAClique { u, v });
                }
            }
        }
        Ok(())
    }

    /// Parses the edge-list text format.
    ///
    /// One edge per line as `u v`; `#` starts a comment line; an optional
    /// header line `n <count>` declares vertices `0..count` so isolated
    /// vertices are representable. Vertex ids are arbitrary non-negative
    /// integers and get normalized to `0..n` preserving numeric order; the
    /// returned map sends original ids to normalized ids.
    pub fn parse_edge_list(text: &str) -> Result<(Graph, BTreeMap<usize, usize>)> {
        let mut declared = 0usize;
        let mut raw_edges: Vec<(usize, usize)> = Vec::new();
        let mut mentioned = BTreeSet::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let first = tokens.next().expect("non-empty line has a token");
            if first == "n" {
                let count = parse_token(tokens.next(), line_no, "vertex count")?;
                if tokens.next().is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "trailing tokens after header".into(),
                    });
                }
                declared = declared.max(count);
                continue;
            }
            let u: usize = first.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("expected vertex id, found {first:?}"),
            })?;
            let v = parse_token(tokens.next(), line_no, "second endpoint")?;
            if tokens.next().is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "trailing tokens after edge".into(),
                });
            }
            if u == v {
                return Err(Error::SelfLoop { vertex: u });
            }
            mentioned.insert(u);
            mentioned.insert(v);
            raw_edges.push((u, v));
        }
        let mut universe: BTreeSet<usize> = mentioned;
        universe.extend(0..declared);
        let map: BTreeMap<usize, usize> = universe
            .into_iter()
            .enumerate()
            .map(|(new, old)| (old, new))
            .collect();
        let edges = raw_edges.into_iter().map(|(u, v)| (map[&u], map[&v]));
        let g = Graph::new(map.len(), edges)?;
        Ok((g, map))
    }

    /// Renders the edge-list format; parsing the output reproduces the
    /// graph with identical ids.
    pub fn render_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn parse_token(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("expected {what}, found {tok:?}"),
    })
}

/// A set of vertices of some graph.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VertexSet {
    verts: BTreeSet<usize>,
}

impl VertexSet {
    pub fn new(verts: impl IntoIterator<Item = usize>) -> Self {
        VertexSet {
            verts: verts.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.verts.contains(&v)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.verts.iter().copied()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(arr: [usize; N]) -> Self {
        VertexSet::new(arr)
    }
}

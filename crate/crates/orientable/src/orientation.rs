//! Acyclic orientations and dependent arcs.
//!
//! An arc `u -> v` of an acyclic orientation is *dependent* when some
//! directed walk of length at least two also leads from `u` to `v`;
//! equivalently, reversing the arc creates a directed cycle. Dependence
//! queries reject cyclic orientations.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A direction assignment for every edge of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    graph: Arc<Graph>,
    /// Per canonical edge `(u, v)` with `u < v`: `true` means `u -> v`.
    forward: Vec<bool>,
    out: Vec<Vec<usize>>,
}

impl Orientation {
    fn build(graph: Arc<Graph>, forward: Vec<bool>) -> Self {
        debug_assert_eq!(forward.len(), graph.edge_count());
        let mut out = vec![Vec::new(); graph.vertex_count()];
        for (idx, &(u, v)) in graph.edges().iter().enumerate() {
            let (tail, head) = if forward[idx] { (u, v) } else { (v, u) };
            out[tail].push(head);
        }
        for list in &mut out {
            list.sort_unstable();
        }
        Orientation {
            graph,
            forward,
            out,
        }
    }

    /// Orients every edge from the earlier to the later vertex of `order`.
    /// The result is acyclic by construction.
    pub fn by_ordering(graph: impl Into<Arc<Graph>>, order: &[usize]) -> Result<Self> {
        let graph = graph.into();
        let pos = position_map(&graph, order)?;
        let forward = graph
            .edges()
            .iter()
            .map(|&(u, v)| pos[u] < pos[v])
            .collect();
        Ok(Orientation::build(graph, forward))
    }

    /// Builds an orientation from explicit arcs; every edge of the graph
    /// must appear exactly once.
    pub fn from_arcs(graph: impl Into<Arc<Graph>>, arcs: &[(usize, usize)]) -> Result<Self> {
        let graph = graph.into();
        let mut forward: Vec<Option<bool>> = vec![None; graph.edge_count()];
        for &(tail, head) in arcs {
            let idx = graph
                .edge_index(tail, head)
                .ok_or(Error::ArcNotPresent { tail, head })?;
            let value = tail < head;
            if forward[idx].is_some() {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("edge {{{tail}, {head}}} oriented twice"),
                });
            }
            forward[idx] = Some(value);
        }
        if let Some(missing) = forward.iter().position(Option::is_none) {
            let (u, v) = graph.edges()[missing];
            return Err(Error::Parse {
                line: 0,
                msg: format!("edge {{{u}, {v}}} has no direction"),
            });
        }
        let forward = forward.into_iter().map(|d| d.unwrap()).collect();
        Ok(Orientation::build(graph, forward))
    }

    pub(crate) fn from_direction_bits(graph: Arc<Graph>, forward: Vec<bool>) -> Self {
        Orientation::build(graph, forward)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> Arc<Graph> {
        Arc::clone(&self.graph)
    }

    /// Arcs in canonical edge order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.graph
            .edges()
            .iter()
            .zip(&self.forward)
            .map(|(&(u, v), &f)| if f { (u, v) } else { (v, u) })
    }

    pub fn has_arc(&self, tail: usize, head: usize) -> bool {
        match self.graph.edge_index(tail, head) {
            Some(idx) => {
                let (u, _) = self.graph.edges()[idx];
                self.forward[idx] == (tail == u)
            }
            None => false,
        }
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Same underlying graph with one arc reversed.
    pub fn with_arc_reversed(&self, tail: usize, head: usize) -> Result<Self> {
        if !self.has_arc(tail, head) {
            return Err(Error::ArcNotPresent { tail, head });
        }
        let idx = self.graph.edge_index(tail, head).expect("arc implies edge");
        let mut forward = self.forward.clone();
        forward[idx] = !forward[idx];
        Ok(Orientation::build(Arc::clone(&self.graph), forward))
    }

    pub fn is_acyclic(&self) -> bool {
        self.kahn_order().is_some()
    }

    /// In-degree-zero elimination; ties broken smallest id first, so the
    /// result is deterministic. Errors on cyclic input.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        self.kahn_order().ok_or_else(|| Error::CyclicOrientation {
            cycle: self.find_cycle().expect("cyclic orientation has a cycle"),
        })
    }

    fn kahn_order(&self) -> Option<Vec<usize>> {
        let n = self.graph.vertex_count();
        let mut indeg = vec![0usize; n];
        for v in 0..n {
            for &w in &self.out[v] {
                indeg[w] += 1;
            }
        }
        let mut heap: BinaryHeap<Reverse<usize>> = (0..n)
            .filter(|&v| indeg[v] == 0)
            .map(Reverse)
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(v)) = heap.pop() {
            order.push(v);
            for &w in &self.out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    heap.push(Reverse(w));
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Some directed cycle, if one exists.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        let n = self.graph.vertex_count();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; n];
        let mut parent = vec![usize::MAX; n];
        for start in 0..n {
            if state[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            state[start] = 1;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next < self.out[v].len() {
                    let w = self.out[v][*next];
                    *next += 1;
                    match state[w] {
                        0 => {
                            state[w] = 1;
                            parent[w] = v;
                            stack.push((w, 0));
                        }
                        1 => {
                            // back arc v -> w closes a cycle
                            let mut cycle = vec![v];
                            let mut cur = v;
                            while cur != w {
                                cur = parent[cur];
                                cycle.push(cur);
                            }
                            cycle.reverse();
                            return Some(cycle);
                        }
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    stack.pop();
                }
            }
        }
        None
    }

    fn require_acyclic(&self) -> Result<()> {
        if let Some(cycle) = self.find_cycle() {
            Err(Error::CyclicOrientation { cycle })
        } else {
            Ok(())
        }
    }

    /// True iff `head` stays reachable from `tail` once the direct arc is
    /// removed. Requires the orientation to be acyclic and the arc present.
    pub fn is_dependent(&self, tail: usize, head: usize) -> Result<bool> {
        if !self.has_arc(tail, head) {
            return Err(Error::ArcNotPresent { tail, head });
        }
        self.require_acyclic()?;
        let mut visited = vec![false; self.graph.vertex_count()];
        let mut stack: Vec<usize> = self.out[tail]
            .iter()
            .copied()
            .filter(|&w| w != head)
            .collect();
        while let Some(v) = stack.pop() {
            if v == head {
                return Ok(true);
            }
            if visited[v] {
                continue;
            }
            visited[v] = true;
            stack.extend(self.out[v].iter().copied());
        }
        Ok(false)
    }

    /// All dependent arcs, computed in one pass via reachability closure.
    pub fn dependent_arcs(&self) -> Result<DependencyReport> {
        let order = self.topological_order()?;
        let n = self.graph.vertex_count();
        let words = n.div_ceil(64);
        // reach[v] = bitset of vertices reachable from v, including v
        let mut reach = vec![vec![0u64; words]; n];
        for &v in order.iter().rev() {
            reach[v][v / 64] |= 1 << (v % 64);
            for i in 0..self.out[v].len() {
                let w = self.out[v][i];
                let (rv, rw) = index_two(&mut reach, v, w);
                for (a, b) in rv.iter_mut().zip(rw.iter()) {
                    *a |= *b;
                }
            }
        }
        let mut dependent = Vec::new();
        for (tail, head) in self.arcs() {
            let hit = self.out[tail]
                .iter()
                .any(|&w| w != head && reach[w][head / 64] >> (head % 64) & 1 == 1);
            if hit {
                dependent.push((tail, head));
            }
        }
        dependent.sort_unstable();
        Ok(DependencyReport { dependent })
    }

    /// Renders one arc per line as `u > v`, in canonical edge order.
    pub fn render_arcs(&self) -> String {
        let mut out = String::new();
        for (tail, head) in self.arcs() {
            out.push_str(&format!("{tail} > {head}\n"));
        }
        out
    }

    /// Parses the `u > v` arc format against a known graph.
    pub fn parse_arcs(graph: impl Into<Arc<Graph>>, text: &str) -> Result<Self> {
        let arcs = parse_arc_pairs(text)?;
        Orientation::from_arcs(graph, &arcs)
    }
}

/// Parses `u > v` lines into raw arc pairs without resolving them against
/// a graph. `#` starts a comment line.
pub fn parse_arc_pairs(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut arcs = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let parse_err = |msg: String| Error::Parse {
            line: idx + 1,
            msg,
        };
        let tail: usize = tokens
            .next()
            .ok_or_else(|| parse_err("missing tail".into()))?
            .parse()
            .map_err(|_| parse_err("expected tail vertex id".into()))?;
        match tokens.next() {
            Some(">") => {}
            other => return Err(parse_err(format!("expected '>', found {other:?}"))),
        }
        let head: usize = tokens
            .next()
            .ok_or_else(|| parse_err("missing head".into()))?
            .parse()
            .map_err(|_| parse_err("expected head vertex id".into()))?;
        if tokens.next().is_some() {
            return Err(parse_err("trailing tokens after arc".into()));
        }
        arcs.push((tail, head));
    }
    Ok(arcs)
}

fn index_two<T>(slice: &mut [T], a: usize, b: usize) -> (&mut T, &T) {
    debug_assert_ne!(a, b);
    if a < b {
        let (lo, hi) = slice.split_at_mut(b);
        (&mut lo[a], &hi[0])
    } else {
        let (lo, hi) = slice.split_at_mut(a);
        (&mut hi[0], &lo[b])
    }
}

fn position_map(graph: &Graph, order: &[usize]) -> Result<Vec<usize>> {
    let n = graph.vertex_count();
    if order.len() != n {
        return Err(Error::NotAPermutation);
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(Error::NotAPermutation);
        }
        pos[v] = i;
    }
    Ok(pos)
}

/// The set of dependent arcs of one acyclic orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyReport {
    dependent: Vec<(usize, usize)>,
}

impl DependencyReport {
    /// Dependent arcs, sorted.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.dependent
    }

    /// The count `d(D)`.
    pub fn count(&self) -> usize {
        self.dependent.len()
    }

    pub fn contains(&self, tail: usize, head: usize) -> bool {
        self.dependent.binary_search(&(tail, head)).is_ok()
    }
}

/// `d_max(G) = ||G|| - |G| + c` for a graph with `c` connected components.
pub fn d_max(graph: &Graph) -> usize {
    let (c, _) = graph.components();
    graph.edge_count() + c - graph.vertex_count()
}

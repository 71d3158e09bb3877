//! Exhaustive ground truth at desk scale.
//!
//! Enumerates every acyclic orientation of a small graph by backtracking
//! over the canonical edge order with early cycle pruning, which visits
//! exactly the acyclic members of the full 2^m direction-vector space in
//! lexicographic order (the low-to-high direction of each edge first).
//! On top of the enumeration sit exact dependency spectra, `d_min`, and
//! the witness searches the synthesis procedure is seeded from. The
//! orientation count is independently cross-checked against the chromatic
//! polynomial at -1.

use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::orientation::Orientation;

/// Default guard against 2^m blowup; covers every shipped fixture.
pub const DEFAULT_EDGE_CAP: usize = 24;

/// Above this many edges the bitset engine (and any enumeration budget)
/// is out of reach regardless of the configured cap.
pub const HARD_EDGE_LIMIT: usize = 32;

/// Exact histogram of dependent-arc counts over all acyclic orientations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumResult {
    pub d_min: usize,
    #[serde(rename = "d_max")]
    pub d_max_observed: usize,
    pub histogram: BTreeMap<usize, u64>,
    pub fully_orientable: bool,
    pub total_acyclic: u64,
}

impl SpectrumResult {
    fn from_histogram(histogram: BTreeMap<usize, u64>) -> Self {
        let d_min = *histogram.keys().next().expect("at least one orientation");
        let d_max_observed = *histogram.keys().last().expect("at least one orientation");
        let fully_orientable = histogram.len() == d_max_observed - d_min + 1;
        let total_acyclic = histogram.values().sum();
        SpectrumResult {
            d_min,
            d_max_observed,
            histogram,
            fully_orientable,
            total_acyclic,
        }
    }
}

/// Enumeration front end carrying the resource guard and the worker count.
#[derive(Clone, Debug)]
pub struct Oracle {
    cap: usize,
    jobs: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            cap: DEFAULT_EDGE_CAP,
            jobs: 1,
        }
    }
}

impl Oracle {
    pub fn new() -> Self {
        Oracle::default()
    }

    pub fn with_cap(cap: usize) -> Self {
        Oracle { cap, jobs: 1 }
    }

    pub fn jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn guard(&self, graph: &Graph) -> Result<()> {
        let edges = graph.edge_count();
        if edges > self.cap {
            return Err(Error::EnumerationCap {
                edges,
                cap: self.cap,
            });
        }
        if edges > HARD_EDGE_LIMIT {
            return Err(Error::EnumerationCap {
                edges,
                cap: HARD_EDGE_LIMIT,
            });
        }
        Ok(())
    }

    /// Streams every acyclic orientation exactly once, in lexicographic
    /// direction-vector order.
    pub fn enumerate(&self, graph: &Graph) -> Result<AcyclicOrientations> {
        self.guard(graph)?;
        Ok(AcyclicOrientations::new(Arc::new(graph.clone())))
    }

    /// Exact dependency spectrum. With `jobs > 1` the direction-vector
    /// space is partitioned by prefix; the merged histogram is identical
    /// to the sequential one.
    pub fn spectrum(&self, graph: &Graph) -> Result<SpectrumResult> {
        self.guard(graph)?;
        let histogram = if self.jobs > 1 {
            spectrum_parallel(graph, self.jobs)
        } else {
            let mut engine = Engine::new(graph);
            let mut histogram = BTreeMap::new();
            let _ = engine.search(&mut |eng| {
                *histogram.entry(eng.dep_count()).or_insert(0u64) += 1;
                ControlFlow::<()>::Continue(())
            });
            histogram
        };
        Ok(SpectrumResult::from_histogram(histogram))
    }

    /// Minimum dependent-arc count over all acyclic orientations.
    /// Stops early once a zero is seen.
    pub fn d_min(&self, graph: &Graph) -> Result<usize> {
        self.guard(graph)?;
        let mut engine = Engine::new(graph);
        let mut best = usize::MAX;
        let _ = engine.search(&mut |eng| {
            let d = eng.dep_count();
            best = best.min(d);
            if best == 0 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        debug_assert_ne!(best, usize::MAX, "every graph has an acyclic orientation");
        Ok(best)
    }

    /// Number of acyclic orientations, cross-checked against the
    /// chromatic polynomial identity a(G) = |P(G, -1)| when the
    /// deletion-contraction evaluation is feasible.
    pub fn count_acyclic(&self, graph: &Graph) -> Result<u64> {
        self.guard(graph)?;
        let mut engine = Engine::new(graph);
        let mut count = 0u64;
        let _ = engine.search(&mut |_| {
            count += 1;
            ControlFlow::<()>::Continue(())
        });
        if graph.vertex_count() <= 10 {
            let p = chromatic_polynomial_eval(graph, -1);
            if p.unsigned_abs() != count {
                return Err(Error::Consistency(format!(
                    "enumeration found {count} acyclic orientations but |P(G,-1)| = {}",
                    p.unsigned_abs()
                )));
            }
        }
        Ok(count)
    }

    /// Among the orientations achieving `d_min`, finds the first (in
    /// enumeration order) whose clique `q_set` contains a non-trivial
    /// dependent arc: a clique arc dependent in the whole orientation but
    /// not in the induced clique orientation. `None` when no minimum
    /// orientation has one.
    pub fn min_orientation_with_nontrivial_arc(
        &self,
        graph: &Graph,
        q_set: &VertexSet,
    ) -> Result<Option<Orientation>> {
        let d_min = self.d_min(graph)?;
        self.orientation_with_nontrivial_arc_within(graph, q_set, d_min)
    }

    /// First orientation (in enumeration order) with exactly `d`
    /// dependent arcs, if the spectrum contains `d`.
    pub fn orientation_with_dep_count(&self, graph: &Graph, d: usize) -> Result<Option<Orientation>> {
        self.guard(graph)?;
        let mut engine = Engine::new(graph);
        let mut found: Option<Vec<bool>> = None;
        let _ = engine.search(&mut |eng| {
            if eng.dep_count() == d {
                found = Some(eng.dirs.clone());
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        Ok(found.map(|dirs| Orientation::from_direction_bits(Arc::new(graph.clone()), dirs)))
    }

    /// First orientation with exactly `d` dependent arcs and a
    /// non-trivial dependent arc in `q_set`.
    pub(crate) fn orientation_with_dep_count_and_nontrivial(
        &self,
        graph: &Graph,
        q_set: &VertexSet,
        d: usize,
    ) -> Result<Option<Orientation>> {
        self.guard(graph)?;
        graph.require_clique(q_set)?;
        if q_set.len() < 2 {
            return Ok(None);
        }
        let mut engine = Engine::new(graph);
        let clique: Vec<usize> = q_set.iter().map(|v| engine.to_local[v]).collect();
        let mut found: Option<Vec<bool>> = None;
        let _ = engine.search(&mut |eng| {
            if eng.dep_count() == d && eng.clique_has_nontrivial_arc(&clique) {
                found = Some(eng.dirs.clone());
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        Ok(found.map(|dirs| Orientation::from_direction_bits(Arc::new(graph.clone()), dirs)))
    }

    /// Relaxed variant: searches among all orientations with
    /// `d(D) <= bound` instead of exactly `d_min`.
    pub fn orientation_with_nontrivial_arc_within(
        &self,
        graph: &Graph,
        q_set: &VertexSet,
        bound: usize,
    ) -> Result<Option<Orientation>> {
        self.guard(graph)?;
        graph.require_clique(q_set)?;
        if q_set.len() < 2 {
            return Ok(None);
        }
        let mut engine = Engine::new(graph);
        let clique: Vec<usize> = q_set.iter().map(|v| engine.to_local[v]).collect();
        let mut found: Option<Vec<bool>> = None;
        let _ = engine.search(&mut |eng| {
            if eng.dep_count() <= bound && eng.clique_has_nontrivial_arc(&clique) {
                found = Some(eng.dirs.clone());
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        Ok(found.map(|dirs| Orientation::from_direction_bits(Arc::new(graph.clone()), dirs)))
    }
}

fn spectrum_parallel(graph: &Graph, jobs: usize) -> BTreeMap<usize, u64> {
    let m = graph.edge_count();
    let prefix_len = (usize::BITS - (4 * jobs).leading_zeros()) as usize;
    let prefix_len = prefix_len.min(m);
    // acyclic prefixes of the direction vector, in enumeration order
    let mut prefixes: Vec<Vec<bool>> = Vec::new();
    {
        let mut engine = Engine::new(graph);
        let _ = engine.search_to_depth(prefix_len, &mut |eng| {
            prefixes.push(eng.dirs[..prefix_len].to_vec());
            ControlFlow::<()>::Continue(())
        });
    }
    let mut partials: Vec<BTreeMap<usize, u64>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for worker in 0..jobs {
            let prefixes = &prefixes;
            handles.push(scope.spawn(move || {
                let mut engine = Engine::new(graph);
                let mut histogram = BTreeMap::new();
                for prefix in prefixes.iter().skip(worker).step_by(jobs) {
                    engine.replay_prefix(prefix);
                    let _ = engine.search_from(prefix.len(), &mut |eng: &mut Engine| {
                        *histogram.entry(eng.dep_count()).or_insert(0u64) += 1;
                        ControlFlow::<()>::Continue(())
                    });
                    engine.unwind_prefix(prefix.len());
                }
                histogram
            }));
        }
        for handle in handles {
            partials.push(handle.join().expect("spectrum worker panicked"));
        }
    });
    let mut merged = BTreeMap::new();
    for partial in partials {
        for (d, count) in partial {
            *merged.entry(d).or_insert(0) += count;
        }
    }
    merged
}

/// Backtracking enumeration state over the active (non-isolated) part of
/// a graph. Active vertex count is at most 2m <= 64, so reachability runs
/// on single-word bitsets.
struct Engine {
    edges: Vec<(usize, usize)>,
    to_local: Vec<usize>,
    active: usize,
    dirs: Vec<bool>,
    out: Vec<Vec<usize>>,
    // scratch for per-leaf dependence counting
    indeg: Vec<u32>,
    topo: Vec<usize>,
    reach: Vec<u64>,
}

impl Engine {
    fn new(graph: &Graph) -> Self {
        let n = graph.vertex_count();
        let mut to_local = vec![usize::MAX; n];
        let mut active = 0;
        for (v, slot) in to_local.iter_mut().enumerate() {
            if graph.degree(v) > 0 {
                *slot = active;
                active += 1;
            }
        }
        assert!(active <= 64, "active vertex count exceeds bitset width");
        let edges: Vec<(usize, usize)> = graph
            .edges()
            .iter()
            .map(|&(u, v)| (to_local[u], to_local[v]))
            .collect();
        let m = edges.len();
        Engine {
            edges,
            to_local,
            active,
            dirs: vec![false; m],
            out: vec![Vec::new(); active],
            indeg: vec![0; active],
            topo: Vec::with_capacity(active),
            reach: vec![0; active],
        }
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        if from == to {
            return true;
        }
        let mut visited = 1u64 << from;
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for &w in &self.out[v] {
                if w == to {
                    return true;
                }
                if visited >> w & 1 == 0 {
                    visited |= 1 << w;
                    stack.push(w);
                }
            }
        }
        false
    }

    fn search<B>(&mut self, visit: &mut impl FnMut(&mut Engine) -> ControlFlow<B>) -> ControlFlow<B> {
        self.search_from(0, visit)
    }

    fn search_from<B>(
        &mut self,
        idx: usize,
        visit: &mut impl FnMut(&mut Engine) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if idx == self.edges.len() {
            return visit(self);
        }
        let (u, v) = self.edges[idx];
        for dir in [true, false] {
            let (a, b) = if dir { (u, v) } else { (v, u) };
            // adding a -> b closes a cycle exactly when b already reaches a
            if !self.reaches(b, a) {
                self.dirs[idx] = dir;
                self.out[a].push(b);
                let flow = self.search_from(idx + 1, visit);
                self.out[a].pop();
                if flow.is_break() {
                    return flow;
                }
            }
        }
        ControlFlow::Continue(())
    }

    /// Visits every acyclic partial assignment of the first `depth` edges.
    fn search_to_depth<B>(
        &mut self,
        depth: usize,
        visit: &mut impl FnMut(&mut Engine) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if depth == 0 {
            return visit(self);
        }
        self.search_to_depth_from(0, depth, visit)
    }

    fn search_to_depth_from<B>(
        &mut self,
        idx: usize,
        depth: usize,
        visit: &mut impl FnMut(&mut Engine) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let (u, v) = self.edges[idx];
        for dir in [true, false] {
            let (a, b) = if dir { (u, v) } else { (v, u) };
            if !self.reaches(b, a) {
                self.dirs[idx] = dir;
                self.out[a].push(b);
                let flow = if idx + 1 == depth {
                    visit(self)
                } else {
                    self.search_to_depth_from(idx + 1, depth, visit)
                };
                self.out[a].pop();
                if flow.is_break() {
                    return flow;
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn replay_prefix(&mut self, prefix: &[bool]) {
        for (idx, &dir) in prefix.iter().enumerate() {
            let (u, v) = self.edges[idx];
            let (a, b) = if dir { (u, v) } else { (v, u) };
            self.dirs[idx] = dir;
            self.out[a].push(b);
        }
    }

    fn unwind_prefix(&mut self, len: usize) {
        for idx in (0..len).rev() {
            let (u, v) = self.edges[idx];
            let a = if self.dirs[idx] { u } else { v };
            self.out[a].pop();
        }
    }

    /// Dependent-arc count of the full assignment currently on the stack.
    /// Fills `self.reach` as a side effect.
    fn dep_count(&mut self) -> usize {
        let k = self.active;
        self.indeg.iter_mut().for_each(|d| *d = 0);
        for v in 0..k {
            for &w in &self.out[v] {
                self.indeg[w] += 1;
            }
        }
        self.topo.clear();
        self.topo.extend((0..k).filter(|&v| self.indeg[v] == 0));
        let mut head = 0;
        while head < self.topo.len() {
            let v = self.topo[head];
            head += 1;
            for i in 0..self.out[v].len() {
                let w = self.out[v][i];
                self.indeg[w] -= 1;
                if self.indeg[w] == 0 {
                    self.topo.push(w);
                }
            }
        }
        debug_assert_eq!(self.topo.len(), k, "assignment on the stack is acyclic");
        for i in (0..k).rev() {
            let v = self.topo[i];
            let mut bits = 1u64 << v;
            for &w in &self.out[v] {
                bits |= self.reach[w];
            }
            self.reach[v] = bits;
        }
        let mut count = 0;
        for (idx, &(u, v)) in self.edges.iter().enumerate() {
            let (a, b) = if self.dirs[idx] { (u, v) } else { (v, u) };
            let dependent = self.out[a]
                .iter()
                .any(|&w| w != b && self.reach[w] >> b & 1 == 1);
            if dependent {
                count += 1;
            }
        }
        count
    }

    /// Whether some consecutive pair of the clique (in its topological
    /// order) forms a dependent arc. Valid right after `dep_count` has
    /// filled `self.reach`. `clique` holds active-local ids.
    fn clique_has_nontrivial_arc(&self, clique: &[usize]) -> bool {
        let mut ordered: Vec<usize> = clique.to_vec();
        // within a clique, a -> b holds iff b is in reach[a] \ {a}
        ordered.sort_by_key(|&w| {
            clique
                .iter()
                .filter(|&&z| z != w && self.reach[w] >> z & 1 == 1)
                .count()
        });
        ordered.reverse();
        for pair in ordered.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            debug_assert!(self.reach[a] >> b & 1 == 1);
            let dependent = self.out[a]
                .iter()
                .any(|&w| w != b && self.reach[w] >> b & 1 == 1);
            if dependent {
                return true;
            }
        }
        false
    }
}

/// Streaming iterator over all acyclic orientations.
pub struct AcyclicOrientations {
    graph: Arc<Graph>,
    engine: Engine,
    progress: Vec<u8>,
    depth: usize,
    exhausted: bool,
}

impl AcyclicOrientations {
    fn new(graph: Arc<Graph>) -> Self {
        let engine = Engine::new(&graph);
        let m = graph.edge_count();
        AcyclicOrientations {
            graph,
            engine,
            progress: vec![0; m],
            depth: 0,
            exhausted: false,
        }
    }

    fn retreat(&mut self) {
        if self.depth == 0 {
            self.exhausted = true;
            return;
        }
        self.depth -= 1;
        let (u, v) = self.engine.edges[self.depth];
        let a = if self.engine.dirs[self.depth] { u } else { v };
        self.engine.out[a].pop();
    }
}

impl Iterator for AcyclicOrientations {
    type Item = Orientation;

    fn next(&mut self) -> Option<Orientation> {
        if self.exhausted {
            return None;
        }
        let m = self.engine.edges.len();
        loop {
            if self.depth == m {
                let item = Orientation::from_direction_bits(
                    Arc::clone(&self.graph),
                    self.engine.dirs.clone(),
                );
                self.retreat();
                return Some(item);
            }
            let tried = self.progress[self.depth];
            if tried == 2 {
                self.retreat();
                if self.exhausted {
                    return None;
                }
                continue;
            }
            self.progress[self.depth] += 1;
            let dir = tried == 0;
            let (u, v) = self.engine.edges[self.depth];
            let (a, b) = if dir { (u, v) } else { (v, u) };
            if !self.engine.reaches(b, a) {
                self.engine.dirs[self.depth] = dir;
                self.engine.out[a].push(b);
                self.depth += 1;
                if self.depth < m {
                    self.progress[self.depth] = 0;
                }
            }
        }
    }
}

/// Evaluates the chromatic polynomial by deletion-contraction, splitting
/// into connected components and short-circuiting complete graphs and
/// forests. Exponential in general; meant for graphs of roughly ten
/// vertices or fewer.
pub fn chromatic_polynomial_eval(graph: &Graph, x: i64) -> i64 {
    assert!(
        graph.vertex_count() <= 64,
        "chromatic polynomial evaluation is limited to 64 vertices"
    );
    let n = graph.vertex_count();
    let mut adj = vec![0u64; n];
    for &(u, v) in graph.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let alive = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    chrom_components(&adj, alive, x)
}

fn chrom_components(adj: &[u64], alive: u64, x: i64) -> i64 {
    let mut result = 1i64;
    let mut remaining = alive;
    while remaining != 0 {
        let start = remaining.trailing_zeros() as usize;
        let mut comp = 1u64 << start;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let mut fresh = adj[v] & remaining & !comp;
            while fresh != 0 {
                let w = fresh.trailing_zeros() as usize;
                fresh &= fresh - 1;
                comp |= 1 << w;
                stack.push(w);
            }
        }
        remaining &= !comp;
        result *= chrom_connected(adj, comp, x);
    }
    result
}

fn chrom_connected(adj: &[u64], verts: u64, x: i64) -> i64 {
    let n = verts.count_ones() as u64;
    let mut m = 0u64;
    let mut w = verts;
    while w != 0 {
        let v = w.trailing_zeros() as usize;
        w &= w - 1;
        m += (adj[v] & verts).count_ones() as u64;
    }
    m /= 2;
    if m == n * (n - 1) / 2 {
        // complete: falling factorial x (x-1) ... (x-n+1)
        let mut p = 1i64;
        for i in 0..n {
            p *= x - i as i64;
        }
        return p;
    }
    if m == n - 1 {
        // connected and n-1 edges: a tree
        let mut p = x;
        for _ in 0..n - 1 {
            p *= x - 1;
        }
        return p;
    }
    // pick an edge at a maximum-degree vertex so contractions densify fast
    let mut best = (0usize, 0usize, 0u32);
    let mut w = verts;
    while w != 0 {
        let v = w.trailing_zeros() as usize;
        w &= w - 1;
        let deg = (adj[v] & verts).count_ones();
        if deg > best.2 {
            let u = (adj[v] & verts).trailing_zeros() as usize;
            best = (v, u, deg);
        }
    }
    let (a, b, _) = best;
    // deletion
    let mut deleted = adj.to_vec();
    deleted[a] &= !(1 << b);
    deleted[b] &= !(1 << a);
    let p_delete = chrom_components(&deleted, verts, x);
    // contraction: fold b into a
    let mut contracted = adj.to_vec();
    let mut nbrs = contracted[b] & verts & !(1 << a);
    contracted[a] |= nbrs;
    contracted[a] &= !(1 << a);
    while nbrs != 0 {
        let t = nbrs.trailing_zeros() as usize;
        nbrs &= nbrs - 1;
        contracted[t] |= 1 << a;
        contracted[t] &= !(1 << b);
    }
    let p_contract = chrom_components(&contracted, verts & !(1 << b), x);
    p_delete - p_contract
}

//! Constructive synthesis of acyclic orientations with a prescribed
//! dependent-arc count.
//!
//! Adding a simplicial vertex on a q-clique extends any acyclic
//! orientation by q-1 dependent arcs (make the new vertex a source) or,
//! when the clique holds a non-trivial dependent arc, by q-2 (insert the
//! new vertex between the arc's endpoints in the clique order). Walking
//! these two moves along the reverse of a perfect elimination ordering
//! hits every feasible target on a chordal graph. Inputs that are not
//! chordal are peeled down to a simplicial core and the core is solved by
//! exhaustive oracle search instead, which succeeds exactly when the
//! target lies in the graph's true spectrum.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chordality::{is_chordal, ChordalityVerdict, EliminationOrdering};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::oracle::{Oracle, DEFAULT_EDGE_CAP};
use crate::orientation::{d_max, Orientation};

/// Some clique arc that is dependent in `d` but not in the orientation
/// induced on the clique, or `None`. In the clique's topological order
/// only consecutive arcs qualify, and the smallest such index is taken.
pub fn nontrivial_dependent_arc(
    d: &Orientation,
    q_set: &VertexSet,
) -> Result<Option<(usize, usize)>> {
    d.graph().require_clique(q_set)?;
    let ordered = clique_topological_order(d, q_set)?;
    let mut found = None;
    for pair in ordered.windows(2) {
        if d.is_dependent(pair[0], pair[1])? {
            found = Some((pair[0], pair[1]));
            break;
        }
    }
    #[cfg(debug_assertions)]
    if !ordered.is_empty() {
        // cross-check: a non-trivial dependent arc exists exactly when the
        // clique carries more than (q-1)(q-2)/2 dependent arcs
        let q = ordered.len();
        let mut dependent_in_clique = 0;
        for (i, &a) in ordered.iter().enumerate() {
            for &b in &ordered[i + 1..] {
                if d.is_dependent(a, b)? {
                    dependent_in_clique += 1;
                }
            }
        }
        debug_assert_eq!(dependent_in_clique > (q - 1) * (q - 2) / 2, found.is_some());
    }
    Ok(found)
}

/// Extends `d` with a new vertex (id `|G|`) oriented as a source toward
/// every vertex of the clique; the count grows by exactly `q - 1` (by
/// zero for `q <= 1`) and old arcs keep their dependence.
pub fn source_extension(d: &Orientation, q_set: &VertexSet) -> Result<Orientation> {
    d.topological_order()?;
    let graph = d.graph();
    let extended = Arc::new(graph.add_simplicial_vertex(q_set)?);
    let v = graph.vertex_count();
    let arcs: Vec<(usize, usize)> = d.arcs().chain(q_set.iter().map(|w| (v, w))).collect();
    let result = Orientation::from_arcs(extended, &arcs)?;
    debug_assert!(result.is_acyclic());
    Ok(result)
}

/// Extends `d` with a new vertex (id `|G|`) inserted between the
/// endpoints of a non-trivial dependent arc of the clique: arcs run from
/// the clique prefix into the new vertex and from it into the suffix.
/// The count grows by exactly `q - 2`. Errors when the clique has no
/// non-trivial dependent arc, in which case `q - 2` is unreachable.
pub fn insertion_extension(d: &Orientation, q_set: &VertexSet) -> Result<Orientation> {
    let graph = d.graph();
    graph.require_clique(q_set)?;
    let ordered = clique_topological_order(d, q_set)?;
    let mut split = None;
    for (i, pair) in ordered.windows(2).enumerate() {
        if d.is_dependent(pair[0], pair[1])? {
            split = Some(i);
            break;
        }
    }
    let split = split.ok_or(Error::NoNontrivialArc)?;
    let extended = Arc::new(graph.add_simplicial_vertex(q_set)?);
    let v = graph.vertex_count();
    let arcs: Vec<(usize, usize)> = d
        .arcs()
        .chain(ordered[..=split].iter().map(|&w| (w, v)))
        .chain(ordered[split + 1..].iter().map(|&w| (v, w)))
        .collect();
    let result = Orientation::from_arcs(extended, &arcs)?;
    debug_assert!(result.is_acyclic());
    Ok(result)
}

fn clique_topological_order(d: &Orientation, q_set: &VertexSet) -> Result<Vec<usize>> {
    let order = d.topological_order()?;
    let mut pos = vec![usize::MAX; d.graph().vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut members: Vec<usize> = q_set.iter().collect();
    members.sort_by_key(|&w| pos[w]);
    Ok(members)
}

/// Random chordal graph: start from a single vertex and attach `n - 1`
/// simplicial vertices, each onto a clique grown by random greedy
/// extension inside a random vertex's closed neighborhood. Deterministic
/// for a fixed seed. `max_q` bounds the clique size, so `max_q = 1`
/// yields random trees.
pub fn random_chordal(n: usize, max_q: usize, seed: u64) -> Graph {
    assert!(n >= 1, "need at least one vertex");
    assert!(max_q >= 1, "need max_q >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(1);
    for _ in 1..n {
        let cur = g.vertex_count();
        let want = rng.random_range(1..=max_q.min(cur));
        let root = rng.random_range(0..cur);
        let mut clique = vec![root];
        while clique.len() < want {
            let candidates: Vec<usize> = g
                .neighbors(root)
                .iter()
                .copied()
                .filter(|&w| !clique.contains(&w) && clique.iter().all(|&c| g.has_edge(c, w)))
                .collect();
            if candidates.is_empty() {
                break;
            }
            clique.push(candidates[rng.random_range(0..candidates.len())]);
        }
        g = g
            .add_simplicial_vertex(&VertexSet::new(clique))
            .expect("grown set is a clique");
    }
    g
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LayerRule {
    SourceExtension,
    InsertionExtension,
}

/// One step of a synthesis trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanStep {
    /// Base orientation of a component: a bare vertex, or an
    /// oracle-found orientation of a non-trivial base graph.
    Seed {
        vertices: Vec<usize>,
        count: usize,
        from_oracle: bool,
    },
    /// One simplicial layer added on top of what is built so far.
    Extend {
        vertex: usize,
        clique: Vec<usize>,
        rule: LayerRule,
        running_count: usize,
    },
}

/// Trace of one synthesis run, in construction order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisPlan {
    pub target: usize,
    /// Perfect elimination ordering when the input is chordal.
    pub peo: Option<Vec<usize>>,
    pub steps: Vec<PlanStep>,
}

impl SynthesisPlan {
    /// Human-readable trace: one line per layer with its position in the
    /// construction, the clique size, the rule, and the running count.
    pub fn render(&self) -> String {
        let mut out = format!("target {}\n", self.target);
        if let Some(peo) = &self.peo {
            out.push_str(&format!("peo {}\n", join_ids(peo)));
        }
        let mut layer = 0usize;
        for step in &self.steps {
            match step {
                PlanStep::Seed {
                    vertices,
                    count,
                    from_oracle,
                } => {
                    let how = if *from_oracle { "oracle search" } else { "trivial" };
                    out.push_str(&format!(
                        "seed {{{}}} d = {count} ({how})\n",
                        join_ids(vertices)
                    ));
                }
                PlanStep::Extend {
                    vertex,
                    clique,
                    rule,
                    running_count,
                } => {
                    layer += 1;
                    let rule = match rule {
                        LayerRule::SourceExtension => "source extension",
                        LayerRule::InsertionExtension => "insertion extension",
                    };
                    out.push_str(&format!(
                        "layer {layer}: add {vertex} onto {{{}}} (q = {}) via {rule} -> d = {running_count}\n",
                        join_ids(clique),
                        clique.len()
                    ));
                }
            }
        }
        out
    }
}

fn join_ids(ids: &[usize]) -> String {
    ids.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Knobs for [`synthesize_with_plan`].
#[derive(Clone, Debug)]
pub struct SynthesisOptions {
    /// Edge cap for the oracle runs the walk needs (suffix d_min values
    /// and insertion seeds).
    pub edge_cap: usize,
    /// Precomputed per-position suffix d_min values (as produced by
    /// [`suffix_dmin_table`]); skips the oracle d_min runs entirely.
    pub suffix_dmin: Option<Vec<usize>>,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            edge_cap: DEFAULT_EDGE_CAP,
            suffix_dmin: None,
        }
    }
}

/// Builds an acyclic orientation of `g` with exactly `target` dependent
/// arcs. See [`synthesize_with_plan`].
pub fn synthesize(g: &Graph, target: usize) -> Result<Orientation> {
    synthesize_with_plan(g, target, &SynthesisOptions::default()).map(|(o, _)| o)
}

/// Builds an acyclic orientation of `g` with exactly `target` dependent
/// arcs and returns the construction trace.
///
/// Chordal inputs follow the reverse perfect elimination ordering, one
/// simplicial layer at a time; every target in `[d_min, d_max]` is
/// feasible. A connected non-chordal input is peeled down to a simplicial
/// core that the oracle solves exhaustively, so it succeeds exactly when
/// the target is in the graph's spectrum; unreachable targets (and
/// disconnected non-chordal inputs) report the chordless-cycle witness.
pub fn synthesize_with_plan(
    g: &Graph,
    target: usize,
    opts: &SynthesisOptions,
) -> Result<(Orientation, SynthesisPlan)> {
    let oracle = Oracle::with_cap(opts.edge_cap);
    match is_chordal(g) {
        ChordalityVerdict::Chordal(peo) => synthesize_chordal(g, target, &peo, opts, &oracle),
        ChordalityVerdict::NotChordal { witness } => {
            if g.components().0 != 1 {
                return Err(Error::NotChordal { witness });
            }
            synthesize_general(g, target, witness, &oracle)
        }
    }
}

/// Exact d_min of every "suffix" of a chordal graph: entry `i` is the
/// minimum dependent-arc count over the subgraph induced by the vertices
/// of positions `i..` of the perfect elimination ordering that lie in the
/// same component as position `i`. Feed the result to
/// [`SynthesisOptions::suffix_dmin`] to amortize repeated synthesis runs.
pub fn suffix_dmin_table(g: &Graph, edge_cap: usize) -> Result<Vec<usize>> {
    let peo = is_chordal(g).into_peo()?;
    let oracle = Oracle::with_cap(edge_cap);
    let chains = build_chains(g, &peo, None, &oracle)?;
    let mut table = vec![0usize; g.vertex_count()];
    for chain in &chains {
        for r in 0..chain.len() {
            table[chain.position_of_rank[r]] = chain.dmin[r];
        }
    }
    Ok(table)
}

/// Per-component layering of a chordal graph in reverse PEO order.
/// Rank 0 is the last PEO vertex of the component; rank `r` is attached
/// onto `cliques[r]`, its neighbors of lower rank.
struct Chain {
    relabeled: Graph,
    global_of_rank: Vec<usize>,
    position_of_rank: Vec<usize>,
    cliques: Vec<Vec<usize>>,
    dmin: Vec<usize>,
    dmax: usize,
}

impl Chain {
    fn len(&self) -> usize {
        self.global_of_rank.len()
    }

    fn component_dmin(&self) -> usize {
        *self.dmin.last().expect("components are non-empty")
    }
}

fn build_chains(
    g: &Graph,
    peo: &EliminationOrdering,
    suffix_dmin: Option<&[usize]>,
    oracle: &Oracle,
) -> Result<Vec<Chain>> {
    let n = g.vertex_count();
    if let Some(table) = suffix_dmin {
        if table.len() != n {
            return Err(Error::Consistency(format!(
                "suffix d_min table has {} entries for {} vertices",
                table.len(),
                n
            )));
        }
    }
    let (comp_count, labels) = g.components();
    let mut entries: Vec<Vec<(usize, usize)>> = vec![Vec::new(); comp_count];
    for (pos, &v) in peo.order().iter().enumerate() {
        entries[labels[v]].push((pos, v));
    }
    let mut rank_of = vec![usize::MAX; n];
    let mut chains = Vec::with_capacity(comp_count);
    for comp in &entries {
        let k = comp.len();
        let mut global_of_rank = vec![0usize; k];
        let mut position_of_rank = vec![0usize; k];
        for (j, &(pos, v)) in comp.iter().enumerate() {
            let r = k - 1 - j;
            global_of_rank[r] = v;
            position_of_rank[r] = pos;
            rank_of[v] = r;
        }
        let comp_label = labels[comp[0].1];
        let edges = g
            .edges()
            .iter()
            .filter(|&&(u, _)| labels[u] == comp_label)
            .map(|&(u, v)| (rank_of[u], rank_of[v]));
        let relabeled = Graph::new(k, edges)?;
        let mut cliques = vec![Vec::new(); k];
        for (j, &(pos, _)) in comp.iter().enumerate() {
            let r = k - 1 - j;
            if r == 0 {
                continue;
            }
            let mut clique: Vec<usize> = peo
                .simplicial_clique(pos)?
                .iter()
                .map(|w| rank_of[w])
                .collect();
            clique.sort_unstable();
            debug_assert!(clique.iter().all(|&c| c < r));
            cliques[r] = clique;
        }
        let dmin = match suffix_dmin {
            Some(table) => (0..k).map(|r| table[position_of_rank[r]]).collect(),
            None => prefix_dmin_table(&relabeled, &cliques, oracle)?,
        };
        let dmax = d_max(&relabeled);
        chains.push(Chain {
            relabeled,
            global_of_rank,
            position_of_rank,
            cliques,
            dmin,
            dmax,
        });
    }
    Ok(chains)
}

/// d_min of every rank prefix of a chain, by oracle enumeration. A layer
/// attached on at most one vertex leaves d_min unchanged: the new arc, if
/// any, can never be dependent and alters no other walk.
fn prefix_dmin_table(relabeled: &Graph, cliques: &[Vec<usize>], oracle: &Oracle) -> Result<Vec<usize>> {
    let k = relabeled.vertex_count();
    let mut dmin = vec![0usize; k];
    for r in 1..k {
        if cliques[r].len() <= 1 {
            dmin[r] = dmin[r - 1];
            continue;
        }
        let (prefix, _) = relabeled.induced_subgraph(&(0..=r).collect())?;
        dmin[r] = oracle.d_min(&prefix)?;
    }
    Ok(dmin)
}

fn synthesize_chordal(
    g: &Graph,
    target: usize,
    peo: &EliminationOrdering,
    opts: &SynthesisOptions,
    oracle: &Oracle,
) -> Result<(Orientation, SynthesisPlan)> {
    let chains = build_chains(g, peo, opts.suffix_dmin.as_deref(), oracle)?;
    let total_dmin: usize = chains.iter().map(Chain::component_dmin).sum();
    let total_dmax: usize = chains.iter().map(|c| c.dmax).sum();
    if target < total_dmin || target > total_dmax {
        return Err(Error::InfeasibleTarget {
            target,
            d_min: total_dmin,
            d_max: total_dmax,
        });
    }
    // greedy split of the target across components
    let mut remaining = target;
    let mut arcs = Vec::with_capacity(g.edge_count());
    let mut steps = Vec::new();
    let mut done = 0usize;
    for (i, chain) in chains.iter().enumerate() {
        let later_min: usize = chains[i + 1..].iter().map(Chain::component_dmin).sum();
        let t_c = (remaining - later_min).min(chain.dmax);
        debug_assert!(t_c >= chain.component_dmin());
        remaining -= t_c;
        build_chain(chain, t_c, oracle, done, &mut arcs, &mut steps)?;
        done += t_c;
    }
    debug_assert_eq!(remaining, 0);
    let orientation = Orientation::from_arcs(Arc::new(g.clone()), &arcs)?;
    debug_assert_eq!(orientation.dependent_arcs()?.count(), target);
    let plan = SynthesisPlan {
        target,
        peo: Some(peo.order().to_vec()),
        steps,
    };
    Ok((orientation, plan))
}

/// Builds one component to exactly `t` dependent arcs, appending its
/// arcs (in global ids) and trace steps. Walks the layers outside-in
/// preferring the source rule; the single forced insertion layer, when
/// one exists, is seeded by the oracle's minimum witness orientation.
fn build_chain(
    chain: &Chain,
    t: usize,
    oracle: &Oracle,
    count_before: usize,
    arcs: &mut Vec<(usize, usize)>,
    steps: &mut Vec<PlanStep>,
) -> Result<()> {
    let k = chain.len();
    let stale = || Error::Consistency("suffix d_min table is inconsistent with the graph".into());
    let mut insertion_at = None;
    let mut t_cur = t;
    for r in (1..k).rev() {
        let q = chain.cliques[r].len();
        if q <= 1 {
            continue;
        }
        if t_cur >= chain.dmin[r - 1] + q - 1 {
            t_cur -= q - 1;
        } else {
            if t_cur != chain.dmin[r - 1] + q - 2 {
                return Err(stale());
            }
            insertion_at = Some(r);
            break;
        }
    }
    let (mut orient, start_rank, mut running) = match insertion_at {
        Some(r) => {
            let q = chain.cliques[r].len();
            let (prefix, _) = chain.relabeled.induced_subgraph(&(0..r).collect())?;
            let q_set = VertexSet::new(chain.cliques[r].iter().copied());
            let seed = oracle
                .min_orientation_with_nontrivial_arc(&prefix, &q_set)?
                .ok_or_else(stale)?;
            let mut seed_vertices: Vec<usize> =
                (0..r).map(|s| chain.global_of_rank[s]).collect();
            seed_vertices.sort_unstable();
            steps.push(PlanStep::Seed {
                vertices: seed_vertices,
                count: chain.dmin[r - 1],
                from_oracle: true,
            });
            let extended = insertion_extension(&seed, &q_set)?;
            let running = chain.dmin[r - 1] + q - 2;
            steps.push(extend_step(chain, r, LayerRule::InsertionExtension, count_before + running));
            (extended, r + 1, running)
        }
        None => {
            if t_cur != 0 {
                return Err(stale());
            }
            let (single, _) = chain.relabeled.induced_subgraph(&[0].into())?;
            let orient = Orientation::by_ordering(single, &[0])?;
            steps.push(PlanStep::Seed {
                vertices: vec![chain.global_of_rank[0]],
                count: 0,
                from_oracle: false,
            });
            (orient, 1, 0)
        }
    };
    for r in start_rank..k {
        let q_set = VertexSet::new(chain.cliques[r].iter().copied());
        orient = source_extension(&orient, &q_set)?;
        running += q_set.len().saturating_sub(1);
        steps.push(extend_step(chain, r, LayerRule::SourceExtension, count_before + running));
    }
    if running != t {
        return Err(stale());
    }
    arcs.extend(
        orient
            .arcs()
            .map(|(a, b)| (chain.global_of_rank[a], chain.global_of_rank[b])),
    );
    Ok(())
}

fn extend_step(chain: &Chain, r: usize, rule: LayerRule, running_count: usize) -> PlanStep {
    let mut clique: Vec<usize> = chain.cliques[r]
        .iter()
        .map(|&c| chain.global_of_rank[c])
        .collect();
    clique.sort_unstable();
    PlanStep::Extend {
        vertex: chain.global_of_rank[r],
        clique,
        rule,
        running_count,
    }
}

/// Synthesis for a connected non-chordal graph: peel simplicial vertices
/// greedily (smallest id first) down to a core without simplicial
/// vertices, solve the core by exhaustive search, and extend back up.
/// Reaches exactly the values of the graph's dependency spectrum.
fn synthesize_general(
    g: &Graph,
    target: usize,
    witness: Vec<usize>,
    oracle: &Oracle,
) -> Result<(Orientation, SynthesisPlan)> {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut peeled: Vec<(usize, Vec<usize>)> = Vec::new();
    loop {
        let mut found = None;
        'scan: for v in 0..n {
            if !alive[v] {
                continue;
            }
            let nbrs: Vec<usize> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| alive[w])
                .collect();
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if !g.has_edge(a, b) {
                        continue 'scan;
                    }
                }
            }
            found = Some((v, nbrs));
            break;
        }
        match found {
            Some((v, nbrs)) => {
                alive[v] = false;
                peeled.push((v, nbrs));
            }
            None => break,
        }
    }
    let core_verts: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let core_size = core_verts.len();
    debug_assert!(core_size >= 4, "a non-chordal graph peels to a chordless core");

    // rank layout: core on 0..core_size ascending, then peeled vertices in
    // reverse peel order
    let mut global_of_rank = vec![0usize; n];
    let mut rank_of = vec![usize::MAX; n];
    for (i, &v) in core_verts.iter().enumerate() {
        global_of_rank[i] = v;
        rank_of[v] = i;
    }
    for (idx, &(v, _)) in peeled.iter().enumerate() {
        let r = n - 1 - idx;
        global_of_rank[r] = v;
        rank_of[v] = r;
    }
    let relabeled = Graph::new(
        n,
        g.edges().iter().map(|&(u, v)| (rank_of[u], rank_of[v])),
    )?;
    let mut cliques = vec![Vec::new(); n];
    for (idx, (_, nbrs)) in peeled.iter().enumerate() {
        let r = n - 1 - idx;
        let mut clique: Vec<usize> = nbrs.iter().map(|&w| rank_of[w]).collect();
        clique.sort_unstable();
        debug_assert!(clique.iter().all(|&c| c < r));
        cliques[r] = clique;
    }
    let (core_graph, _) = relabeled.induced_subgraph(&(0..core_size).collect())?;
    let spectrum = oracle.spectrum(&core_graph)?;

    let mut walker = GeneralWalk {
        relabeled: &relabeled,
        cliques: &cliques,
        core_top: core_size - 1,
        core_values: spectrum.histogram.keys().copied().collect(),
        oracle,
        reachable: HashMap::new(),
        seeds: HashMap::new(),
    };
    if !walker.reachable(n - 1, target)? {
        return Err(Error::NotChordal { witness });
    }

    // replay the walk's decisions top-down, then build bottom-up
    let mut seed_from: Option<(usize, usize)> = None; // (top rank of seed, its count)
    let mut t_cur = target;
    let mut r = n - 1;
    while r > walker.core_top {
        let q = cliques[r].len();
        if q <= 1 {
            r -= 1;
            continue;
        }
        if t_cur >= q - 1 && walker.reachable(r - 1, t_cur - (q - 1))? {
            t_cur -= q - 1;
            r -= 1;
            continue;
        }
        seed_from = Some((r - 1, t_cur - (q - 2)));
        break;
    }

    let mut steps = Vec::new();
    let (mut orient, start_rank, mut running) = match seed_from {
        Some((top, count)) => {
            let clique_above = &cliques[top + 1];
            let seed = walker
                .seed(top, count, clique_above)?
                .ok_or_else(|| Error::Consistency("walk decision lost its witness".into()))?;
            let mut vertices: Vec<usize> = (0..=top).map(|s| global_of_rank[s]).collect();
            vertices.sort_unstable();
            steps.push(PlanStep::Seed {
                vertices,
                count,
                from_oracle: true,
            });
            let q_set = VertexSet::new(clique_above.iter().copied());
            let extended = insertion_extension(&seed, &q_set)?;
            let running = count + clique_above.len() - 2;
            steps.push(PlanStep::Extend {
                vertex: global_of_rank[top + 1],
                clique: sorted_globals(clique_above, &global_of_rank),
                rule: LayerRule::InsertionExtension,
                running_count: running,
            });
            (extended, top + 2, running)
        }
        None => {
            let base = oracle
                .orientation_with_dep_count(&core_graph, t_cur)?
                .ok_or_else(|| Error::Consistency("walk decision lost its base".into()))?;
            let mut vertices = core_verts.clone();
            vertices.sort_unstable();
            steps.push(PlanStep::Seed {
                vertices,
                count: t_cur,
                from_oracle: true,
            });
            (base, core_size, t_cur)
        }
    };
    for r in start_rank..n {
        let q_set = VertexSet::new(cliques[r].iter().copied());
        orient = source_extension(&orient, &q_set)?;
        running += q_set.len().saturating_sub(1);
        steps.push(PlanStep::Extend {
            vertex: global_of_rank[r],
            clique: sorted_globals(&cliques[r], &global_of_rank),
            rule: LayerRule::SourceExtension,
            running_count: running,
        });
    }
    if running != target {
        return Err(Error::Consistency("general walk missed its target".into()));
    }
    let arcs: Vec<(usize, usize)> = orient
        .arcs()
        .map(|(a, b)| (global_of_rank[a], global_of_rank[b]))
        .collect();
    let orientation = Orientation::from_arcs(Arc::new(g.clone()), &arcs)?;
    debug_assert_eq!(orientation.dependent_arcs()?.count(), target);
    Ok((
        orientation,
        SynthesisPlan {
            target,
            peo: None,
            steps,
        },
    ))
}

fn sorted_globals(ranks: &[usize], global_of_rank: &[usize]) -> Vec<usize> {
    let mut ids: Vec<usize> = ranks.iter().map(|&r| global_of_rank[r]).collect();
    ids.sort_unstable();
    ids
}

/// Memoized reachability of (prefix top rank, target) pairs for the
/// peeled walk. Insertion needs an oracle witness with an exact count,
/// so those are cached alongside.
struct GeneralWalk<'a> {
    relabeled: &'a Graph,
    cliques: &'a [Vec<usize>],
    core_top: usize,
    core_values: Vec<usize>,
    oracle: &'a Oracle,
    reachable: HashMap<(usize, usize), bool>,
    seeds: HashMap<(usize, usize), Option<Orientation>>,
}

impl GeneralWalk<'_> {
    fn reachable(&mut self, r: usize, t: usize) -> Result<bool> {
        if let Some(&hit) = self.reachable.get(&(r, t)) {
            return Ok(hit);
        }
        let ans = if r == self.core_top {
            self.core_values.contains(&t)
        } else {
            let q = self.cliques[r].len();
            if q <= 1 {
                self.reachable(r - 1, t)?
            } else {
                let by_source = t >= q - 1 && self.reachable(r - 1, t - (q - 1))?;
                if by_source {
                    true
                } else {
                    t >= q - 2 && {
                        let clique = self.cliques[r].clone();
                        self.seed(r - 1, t - (q - 2), &clique)?.is_some()
                    }
                }
            }
        };
        self.reachable.insert((r, t), ans);
        Ok(ans)
    }

    /// Orientation of the prefix up to `top` with exactly `count`
    /// dependent arcs and a non-trivial dependent arc in `clique`.
    fn seed(&mut self, top: usize, count: usize, clique: &[usize]) -> Result<Option<Orientation>> {
        if let Some(hit) = self.seeds.get(&(top, count)) {
            return Ok(hit.clone());
        }
        let (prefix, _) = self.relabeled.induced_subgraph(&(0..=top).collect())?;
        let q_set = VertexSet::new(clique.iter().copied());
        let found = self
            .oracle
            .orientation_with_dep_count_and_nontrivial(&prefix, &q_set, count)?;
        self.seeds.insert((top, count), found.clone());
        Ok(found)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Oracle;

    fn k32() -> Graph {
        Graph::complete_multipartite(&[2, 2, 2])
    }

    fn kprime() -> Graph {
        k32().add_simplicial_vertex(&[0, 3, 5].into()).unwrap()
    }

    fn diamond() -> Graph {
        Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    #[test]
    fn bare_triangle_has_no_nontrivial_arc() {
        let d = Orientation::by_ordering(Graph::complete(3), &[0, 1, 2]).unwrap();
        assert_eq!(nontrivial_dependent_arc(&d, &[0, 1, 2].into()).unwrap(), None);
    }

    #[test]
    fn transitive_k4_triangle_has_no_nontrivial_arc() {
        let d = Orientation::by_ordering(Graph::complete(4), &[0, 1, 2, 3]).unwrap();
        assert_eq!(nontrivial_dependent_arc(&d, &[0, 1, 2].into()).unwrap(), None);
    }

    #[test]
    fn diamond_triangle_with_nontrivial_arc() {
        // arcs 0>2, 0>1, 2>1, 0>3, 1>3: the arc 0>1 is dependent through 2,
        // and 0, 1 are consecutive in the clique order of {0, 1, 3}
        let d = Orientation::by_ordering(diamond(), &[0, 2, 1, 3]).unwrap();
        assert_eq!(
            nontrivial_dependent_arc(&d, &[0, 1, 3].into()).unwrap(),
            Some((0, 1))
        );
        // in the triangle {0, 1, 2} nothing non-trivial: 0>2 and 2>1 are consecutive
        assert_eq!(nontrivial_dependent_arc(&d, &[0, 1, 2].into()).unwrap(), None);
    }

    #[test]
    fn nontrivial_arc_requires_clique() {
        let d = Orientation::by_ordering(diamond(), &[0, 1, 2, 3]).unwrap();
        assert!(matches!(
            nontrivial_dependent_arc(&d, &[2, 3].into()).unwrap_err(),
            Error::NotAClique { .. }
        ));
    }

    #[test]
    fn source_extension_on_triangle_gives_k4_count() {
        let d = Orientation::by_ordering(Graph::complete(3), &[1, 2, 0]).unwrap();
        let ext = source_extension(&d, &[0, 1, 2].into()).unwrap();
        assert_eq!(ext.graph().vertex_count(), 4);
        assert_eq!(ext.dependent_arcs().unwrap().count(), 3);
    }

    #[test]
    fn source_extension_keeps_old_dependence_and_adds_q_minus_one() {
        let g = Graph::new(5, [(0, 1), (0, 2), (1, 2), (2, 3), (1, 4), (2, 4)]).unwrap();
        for order in [vec![0, 1, 2, 3, 4], vec![4, 3, 2, 1, 0], vec![2, 0, 4, 1, 3]] {
            let d = Orientation::by_ordering(g.clone(), &order).unwrap();
            let before = d.dependent_arcs().unwrap();
            let q_set: VertexSet = [1, 2, 4].into();
            let ext = source_extension(&d, &q_set).unwrap();
            let after = ext.dependent_arcs().unwrap();
            assert_eq!(after.count(), before.count() + 2);
            for (tail, head) in d.arcs() {
                assert_eq!(
                    before.contains(tail, head),
                    after.contains(tail, head),
                    "old arc {tail}->{head} changed dependence"
                );
            }
            // the new vertex's arcs: all but the first clique vertex dependent
            let new_dependent: Vec<_> = after
                .arcs()
                .iter()
                .filter(|&&(t, _)| t == 5)
                .collect();
            assert_eq!(new_dependent.len(), 2);
        }
    }

    #[test]
    fn source_extension_with_singleton_clique_adds_nothing() {
        let d = Orientation::by_ordering(Graph::path(3), &[0, 1, 2]).unwrap();
        let ext = source_extension(&d, &[1].into()).unwrap();
        assert_eq!(ext.dependent_arcs().unwrap().count(), 0);
    }

    #[test]
    fn source_extension_rejects_cyclic_input() {
        let d = Orientation::from_arcs(Graph::complete(3), &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(matches!(
            source_extension(&d, &[0, 1].into()).unwrap_err(),
            Error::CyclicOrientation { .. }
        ));
    }

    #[test]
    fn insertion_extension_on_a_two_clique() {
        // transitive triangle, clique {0, 2}: its single arc is dependent,
        // so insertion adds q - 2 = 0 and both new arcs are non-dependent
        let d = Orientation::by_ordering(Graph::complete(3), &[0, 1, 2]).unwrap();
        let ext = insertion_extension(&d, &[0, 2].into()).unwrap();
        let report = ext.dependent_arcs().unwrap();
        assert_eq!(report.count(), 1);
        assert!(ext.has_arc(0, 3));
        assert!(ext.has_arc(3, 2));
        assert!(!report.contains(0, 3));
        assert!(!report.contains(3, 2));
    }

    #[test]
    fn insertion_extension_on_diamond_triangle() {
        let seed = Oracle::new()
            .orientation_with_dep_count_and_nontrivial(&diamond(), &[0, 1, 3].into(), 2)
            .unwrap()
            .expect("a 2-dependent diamond orientation with a non-trivial arc exists");
        let ext = insertion_extension(&seed, &[0, 1, 3].into()).unwrap();
        assert_eq!(ext.dependent_arcs().unwrap().count(), 3);
    }

    #[test]
    fn insertion_extension_requires_a_nontrivial_arc() {
        let d = Orientation::by_ordering(Graph::complete(3), &[0, 1, 2]).unwrap();
        assert_eq!(
            insertion_extension(&d, &[0, 1, 2].into()).unwrap_err(),
            Error::NoNontrivialArc
        );
    }

    /// The 6-dependent-arc orientation of the complete tripartite graph
    /// with two dependent arcs in the triangle {0, 3, 5}, as found by the
    /// relaxed oracle search (shipped as a fixture for the CLI).
    fn six_dependent_orientation() -> Orientation {
        Oracle::new()
            .orientation_with_nontrivial_arc_within(&k32(), &[0, 3, 5].into(), 6)
            .unwrap()
            .expect("such an orientation exists")
    }

    #[test]
    fn tripartite_triangle_has_a_nontrivial_arc_at_six() {
        let d = six_dependent_orientation();
        assert_eq!(d.dependent_arcs().unwrap().count(), 6);
        assert!(nontrivial_dependent_arc(&d, &[0, 3, 5].into())
            .unwrap()
            .is_some());
    }

    #[test]
    fn source_extension_lifts_the_six_orientation_to_eight() {
        let d = six_dependent_orientation();
        let ext = source_extension(&d, &[0, 3, 5].into()).unwrap();
        assert_eq!(ext.graph(), &kprime());
        assert_eq!(ext.dependent_arcs().unwrap().count(), 8);
    }

    #[test]
    fn insertion_extension_lifts_the_six_orientation_to_seven() {
        let d = six_dependent_orientation();
        let ext = insertion_extension(&d, &[0, 3, 5].into()).unwrap();
        assert_eq!(ext.graph(), &kprime());
        assert_eq!(ext.dependent_arcs().unwrap().count(), 7);
    }

    #[test]
    fn random_chordal_single_vertex() {
        let g = random_chordal(1, 5, 42);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn random_chordal_with_unit_cliques_is_a_tree() {
        for seed in 0..10 {
            let g = random_chordal(12, 1, seed);
            assert_eq!(g.edge_count(), 11);
            assert_eq!(g.components().0, 1);
            assert!(is_chordal(&g).is_chordal());
            assert_eq!(d_max(&g), 0);
        }
    }

    #[test]
    fn random_chordal_outputs_verify_chordal() {
        for seed in 0..40 {
            let g = random_chordal(9, 4, seed);
            assert_eq!(g.vertex_count(), 9);
            assert!(is_chordal(&g).is_chordal(), "seed {seed}");
        }
    }

    #[test]
    fn random_chordal_is_deterministic_per_seed() {
        assert_eq!(random_chordal(10, 3, 7), random_chordal(10, 3, 7));
    }

    #[test]
    fn synthesize_diamond_hits_both_targets() {
        for target in [1, 2] {
            let d = synthesize(&diamond(), target).unwrap();
            assert_eq!(d.dependent_arcs().unwrap().count(), target);
        }
    }

    #[test]
    fn synthesize_rejects_infeasible_targets() {
        assert_eq!(
            synthesize(&diamond(), 0).unwrap_err(),
            Error::InfeasibleTarget {
                target: 0,
                d_min: 1,
                d_max: 2
            }
        );
        assert_eq!(
            synthesize(&diamond(), 3).unwrap_err(),
            Error::InfeasibleTarget {
                target: 3,
                d_min: 1,
                d_max: 2
            }
        );
    }

    #[test]
    fn synthesize_complete_graph_singleton() {
        let d = synthesize(&Graph::complete(5), 6).unwrap();
        assert_eq!(d.dependent_arcs().unwrap().count(), 6);
    }

    #[test]
    fn synthesize_path_target_zero() {
        let d = synthesize(&Graph::path(4), 0).unwrap();
        assert_eq!(d.dependent_arcs().unwrap().count(), 0);
    }

    #[test]
    fn synthesize_on_the_non_chordal_extension() {
        // not chordal, but every spectrum value is constructible by
        // peeling the simplicial vertex and solving the core exhaustively
        for target in 6..=9 {
            let d = synthesize(&kprime(), target).unwrap();
            assert_eq!(d.dependent_arcs().unwrap().count(), target);
        }
    }

    #[test]
    fn synthesize_gap_target_reports_the_witness() {
        match synthesize(&k32(), 5).unwrap_err() {
            Error::NotChordal { witness } => assert!(witness.len() >= 4),
            other => panic!("expected a chordality error, got {other:?}"),
        }
    }

    #[test]
    fn synthesize_non_chordal_spectrum_values_succeed() {
        for target in [4, 6, 7] {
            let d = synthesize(&k32(), target).unwrap();
            assert_eq!(d.dependent_arcs().unwrap().count(), target);
        }
    }

    #[test]
    fn synthesize_disconnected_chordal_distributes_targets() {
        // diamond (spectrum {1, 2}) next to a triangle (spectrum {1})
        let mut edges: Vec<(usize, usize)> =
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)];
        edges.extend([(4, 5), (4, 6), (5, 6)]);
        let g = Graph::new(7, edges).unwrap();
        for target in [2, 3] {
            let d = synthesize(&g, target).unwrap();
            assert_eq!(d.dependent_arcs().unwrap().count(), target);
        }
        assert!(matches!(
            synthesize(&g, 1),
            Err(Error::InfeasibleTarget {
                d_min: 2,
                d_max: 3,
                ..
            })
        ));
    }

    #[test]
    fn synthesis_plan_traces_the_construction() {
        let g = random_chordal(8, 3, 11);
        let spectrum = Oracle::new().spectrum(&g).unwrap();
        let target = spectrum.d_min;
        let (d, plan) = synthesize_with_plan(&g, target, &SynthesisOptions::default()).unwrap();
        assert_eq!(d.dependent_arcs().unwrap().count(), target);
        assert_eq!(plan.target, target);
        assert!(plan.peo.is_some());
        let last_running = match plan.steps.last().unwrap() {
            PlanStep::Extend { running_count, .. } => *running_count,
            PlanStep::Seed { count, .. } => *count,
        };
        assert_eq!(last_running, target);
        let rendered = plan.render();
        assert!(rendered.starts_with(&format!("target {target}\n")));
        assert!(rendered.contains("seed"));
    }

    #[test]
    fn precomputed_dmin_table_matches_internal_computation() {
        let g = random_chordal(9, 3, 23);
        let table = suffix_dmin_table(&g, DEFAULT_EDGE_CAP).unwrap();
        let spectrum = Oracle::new().spectrum(&g).unwrap();
        assert_eq!(table[0], spectrum.d_min);
        let opts = SynthesisOptions {
            edge_cap: DEFAULT_EDGE_CAP,
            suffix_dmin: Some(table),
        };
        for target in spectrum.d_min..=spectrum.d_max_observed {
            let (with_table, _) = synthesize_with_plan(&g, target, &opts).unwrap();
            let without = synthesize(&g, target).unwrap();
            assert_eq!(with_table, without);
        }
    }

    #[test]
    fn suffix_dmin_table_rejects_non_chordal_inputs() {
        assert!(matches!(
            suffix_dmin_table(&k32(), DEFAULT_EDGE_CAP),
            Err(Error::NotChordal { .. })
        ));
    }
}

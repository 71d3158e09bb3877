//! Chordal graph recognition via maximum cardinality search.
//!
//! A graph is chordal iff it admits a perfect elimination ordering: an
//! ordering where every vertex is simplicial in the subgraph induced by
//! itself and its successors. MCS produces such an ordering whenever one
//! exists; verification either certifies it or pins down a violation from
//! which a chordless cycle is extracted.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// A vertex ordering together with each vertex's later-neighborhood.
/// Values of this type are only produced by successful verification, so
/// every stored neighborhood is a clique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationOrdering {
    order: Vec<usize>,
    neighborhoods: Vec<VertexSet>,
}

impl EliminationOrdering {
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The clique the vertex at `position` is simplicially attached to:
    /// its neighbors among the later vertices of the ordering.
    pub fn simplicial_clique(&self, position: usize) -> Result<&VertexSet> {
        self.neighborhoods
            .get(position)
            .ok_or(Error::PositionOutOfRange {
                position,
                len: self.order.len(),
            })
    }

    /// Space-separated vertex ids on one line.
    pub fn render(&self) -> String {
        let ids: Vec<String> = self.order.iter().map(|v| v.to_string()).collect();
        ids.join(" ")
    }
}

/// Outcome of checking an ordering against the PEO condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeoCheck {
    Valid(EliminationOrdering),
    Invalid(PeoViolation),
}

/// First position whose later-neighborhood is not a clique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeoViolation {
    pub position: usize,
    pub vertex: usize,
    /// A non-adjacent pair inside the later-neighborhood.
    pub pair: (usize, usize),
}

/// Chordality verdict: a perfect elimination ordering, or a chordless
/// cycle of length at least four.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChordalityVerdict {
    Chordal(EliminationOrdering),
    NotChordal { witness: Vec<usize> },
}

impl ChordalityVerdict {
    pub fn is_chordal(&self) -> bool {
        matches!(self, ChordalityVerdict::Chordal(_))
    }

    pub fn peo(&self) -> Option<&EliminationOrdering> {
        match self {
            ChordalityVerdict::Chordal(peo) => Some(peo),
            ChordalityVerdict::NotChordal { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&[usize]> {
        match self {
            ChordalityVerdict::Chordal(_) => None,
            ChordalityVerdict::NotChordal { witness } => Some(witness),
        }
    }

    pub fn into_peo(self) -> Result<EliminationOrdering> {
        match self {
            ChordalityVerdict::Chordal(peo) => Ok(peo),
            ChordalityVerdict::NotChordal { witness } => Err(Error::NotChordal { witness }),
        }
    }
}

/// Maximum cardinality search: repeatedly visit the unvisited vertex with
/// the most visited neighbors, ties to the smallest id. Returns the visit
/// order reversed, so chordal inputs yield a perfect elimination ordering.
pub fn maximum_cardinality_search(graph: &Graph) -> Vec<usize> {
    let n = graph.vertex_count();
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut visit_order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !visited[v])
            .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
            .expect("an unvisited vertex remains");
        visited[v] = true;
        visit_order.push(v);
        for &w in graph.neighbors(v) {
            if !visited[w] {
                weight[w] += 1;
            }
        }
    }
    visit_order.reverse();
    visit_order
}

/// Checks the PEO condition; on failure reports the first violating
/// position together with a non-adjacent later-neighbor pair.
pub fn verify_peo(graph: &Graph, order: &[usize]) -> Result<PeoCheck> {
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
    let mut neighborhoods = Vec::with_capacity(n);
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<usize> = graph
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| pos[w] > i)
            .collect();
        for (a_idx, &a) in later.iter().enumerate() {
            for &b in &later[a_idx + 1..] {
                if !graph.has_edge(a, b) {
                    return Ok(PeoCheck::Invalid(PeoViolation {
                        position: i,
                        vertex: v,
                        pair: (a, b),
                    }));
                }
            }
        }
        neighborhoods.push(VertexSet::new(later));
    }
    Ok(PeoCheck::Valid(EliminationOrdering {
        order: order.to_vec(),
        neighborhoods,
    }))
}

/// Runs MCS and verifies the result. Non-chordal graphs get a chordless
/// cycle of length at least four as witness.
pub fn is_chordal(graph: &Graph) -> ChordalityVerdict {
    let order = maximum_cardinality_search(graph);
    match verify_peo(graph, &order).expect("MCS output is a permutation") {
        PeoCheck::Valid(peo) => ChordalityVerdict::Chordal(peo),
        PeoCheck::Invalid(violation) => {
            let witness = chordless_cycle_through(graph, violation.vertex, violation.pair)
                .or_else(|| find_chordless_cycle(graph))
                .expect("a failed PEO check implies a chordless cycle exists");
            ChordalityVerdict::NotChordal { witness }
        }
    }
}

/// Looks for a chordless cycle through `x` closing a non-adjacent neighbor
/// pair `(u, w)`: a shortest u-w path avoiding every other vertex of
/// N[x] is induced and none of its interior is adjacent to `x`.
fn chordless_cycle_through(graph: &Graph, x: usize, (u, w): (usize, usize)) -> Option<Vec<usize>> {
    let n = graph.vertex_count();
    let mut banned = vec![false; n];
    banned[x] = true;
    for &y in graph.neighbors(x) {
        banned[y] = true;
    }
    banned[u] = false;
    banned[w] = false;

    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[u] = true;
    let mut frontier = vec![u];
    'bfs: while !frontier.is_empty() {
        let mut next = Vec::new();
        for &v in &frontier {
            for &t in graph.neighbors(v) {
                if seen[t] || banned[t] {
                    continue;
                }
                seen[t] = true;
                parent[t] = v;
                if t == w {
                    break 'bfs;
                }
                next.push(t);
            }
        }
        frontier = next;
    }
    if !seen[w] {
        return None;
    }
    let mut path = vec![w];
    let mut cur = w;
    while cur != u {
        cur = parent[cur];
        path.push(cur);
    }
    path.push(x);
    path.reverse(); // cycle x, u, ..., w
    debug_assert!(path.len() >= 4);
    Some(path)
}

/// Exhaustive fallback: every non-chordal graph has a triple
/// (x, non-adjacent u, w in N(x)) through which a chordless cycle closes.
fn find_chordless_cycle(graph: &Graph) -> Option<Vec<usize>> {
    for x in 0..graph.vertex_count() {
        let nbrs = graph.neighbors(x);
        for (i, &u) in nbrs.iter().enumerate() {
            for &w in &nbrs[i + 1..] {
                if graph.has_edge(u, w) {
                    continue;
                }
                if let Some(cycle) = chordless_cycle_through(graph, x, (u, w)) {
                    return Some(cycle);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Test-side validity check for witnesses.
    fn assert_chordless_cycle(graph: &Graph, cycle: &[usize]) {
        assert!(cycle.len() >= 4, "cycle too short: {cycle:?}");
        let k = cycle.len();
        let mut sorted = cycle.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), k, "repeated vertex in {cycle:?}");
        for i in 0..k {
            assert!(
                graph.has_edge(cycle[i], cycle[(i + 1) % k]),
                "missing cycle edge in {cycle:?}"
            );
        }
        for i in 0..k {
            for j in i + 2..k {
                if i == 0 && j == k - 1 {
                    continue;
                }
                assert!(
                    !graph.has_edge(cycle[i], cycle[j]),
                    "chord {}-{} in {cycle:?}",
                    cycle[i],
                    cycle[j]
                );
            }
        }
    }

    #[test]
    fn mcs_on_k4_with_tie_rule() {
        assert_eq!(maximum_cardinality_search(&Graph::complete(4)), vec![3, 2, 1, 0]);
    }

    #[test]
    fn trees_are_chordal_and_every_mcs_order_verifies() {
        let tree = Graph::new(6, [(0, 1), (1, 2), (1, 3), (3, 4), (0, 5)]).unwrap();
        let order = maximum_cardinality_search(&tree);
        assert!(matches!(
            verify_peo(&tree, &order).unwrap(),
            PeoCheck::Valid(_)
        ));
        assert!(is_chordal(&tree).is_chordal());
    }

    #[test]
    fn c4_fails_verification() {
        let c4 = Graph::cycle(4);
        let order = maximum_cardinality_search(&c4);
        assert!(matches!(
            verify_peo(&c4, &order).unwrap(),
            PeoCheck::Invalid(_)
        ));
    }

    #[test]
    fn any_order_of_a_complete_graph_is_a_peo() {
        let k3 = Graph::complete(3);
        for order in [[0, 1, 2], [2, 0, 1], [1, 2, 0]] {
            assert!(matches!(
                verify_peo(&k3, &order).unwrap(),
                PeoCheck::Valid(_)
            ));
        }
    }

    #[test]
    fn c4_violation_details() {
        let c4 = Graph::cycle(4);
        match verify_peo(&c4, &[0, 1, 2, 3]).unwrap() {
            PeoCheck::Invalid(v) => {
                assert_eq!(v.position, 0);
                assert_eq!(v.vertex, 0);
                assert_eq!(v.pair, (1, 3));
            }
            PeoCheck::Valid(_) => panic!("C4 has no PEO"),
        }
    }

    #[test]
    fn diamond_peo_and_simplicial_cliques() {
        // K4 minus the edge {2, 3}
        let diamond = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let check = verify_peo(&diamond, &[2, 3, 0, 1]).unwrap();
        let peo = match check {
            PeoCheck::Valid(peo) => peo,
            PeoCheck::Invalid(v) => panic!("unexpected violation {v:?}"),
        };
        assert_eq!(peo.simplicial_clique(0).unwrap(), &[0, 1].into());
        assert_eq!(peo.simplicial_clique(1).unwrap(), &[0, 1].into());
        assert_eq!(peo.simplicial_clique(3).unwrap(), &VertexSet::default());
        assert!(peo.simplicial_clique(4).is_err());
        assert!(is_chordal(&diamond).is_chordal());
    }

    #[test]
    fn verify_rejects_non_permutations() {
        let k3 = Graph::complete(3);
        assert_eq!(
            verify_peo(&k3, &[0, 1]).unwrap_err(),
            Error::NotAPermutation
        );
        assert_eq!(
            verify_peo(&k3, &[0, 0, 1]).unwrap_err(),
            Error::NotAPermutation
        );
    }

    #[test]
    fn k4_simplicial_clique_at_first_position() {
        let verdict = is_chordal(&Graph::complete(4));
        let peo = verdict.peo().unwrap();
        assert_eq!(peo.simplicial_clique(0).unwrap().len(), 3);
    }

    #[test]
    fn leaf_first_tree_peo_has_singleton_cliques() {
        let path = Graph::path(4);
        let check = verify_peo(&path, &[0, 1, 2, 3]).unwrap();
        let peo = match check {
            PeoCheck::Valid(peo) => peo,
            PeoCheck::Invalid(_) => panic!("path orders are PEOs"),
        };
        assert_eq!(peo.simplicial_clique(0).unwrap().len(), 1);
    }

    #[test]
    fn complete_tripartite_is_not_chordal() {
        let k32 = Graph::complete_multipartite(&[2, 2, 2]);
        let verdict = is_chordal(&k32);
        assert!(!verdict.is_chordal());
        assert_chordless_cycle(&k32, verdict.witness().unwrap());
        assert_eq!(verdict.witness().unwrap().len(), 4);
    }

    #[test]
    fn five_cycle_witness_is_the_whole_cycle() {
        let c5 = Graph::cycle(5);
        let verdict = is_chordal(&c5);
        assert!(!verdict.is_chordal());
        let witness = verdict.witness().unwrap();
        assert_chordless_cycle(&c5, witness);
        assert_eq!(witness.len(), 5);
    }

    #[test]
    fn long_cycles_with_extra_chords() {
        let mut edges: Vec<(usize, usize)> = (0..6).map(|v| (v, (v + 1) % 6)).collect();
        edges.push((0, 2));
        let g = Graph::new(6, edges).unwrap();
        let verdict = is_chordal(&g);
        assert!(!verdict.is_chordal());
        assert_chordless_cycle(&g, verdict.witness().unwrap());
    }

    #[test]
    fn peo_render_is_one_line() {
        let verdict = is_chordal(&Graph::complete(3));
        let rendered = verdict.peo().unwrap().render();
        assert_eq!(rendered, "2 1 0");
    }
}

//! Cactus multigraphs: validation, cycle decomposition, 2-edge-cut
//! enumeration and augmentation feasibility.
//!
//! A cactus here is a connected multigraph in which every edge lies on
//! exactly one cycle; length-2 cycles made of two parallel edges are
//! allowed, self-loops are not. Removing any two edges of a common cycle
//! disconnects the graph, and those pairs are exactly the 2-edge-cuts.
//! An augmentation (a set of links) is feasible when every such cut has a
//! link with endpoints on both sides.

use std::collections::VecDeque;
use thiserror::Error;

pub type NodeId = usize;
pub type EdgeId = usize;
pub type LinkId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CactusError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("edge {0} is a self-loop")]
    SelfLoop(EdgeId),
    #[error("graph is not connected")]
    NotConnected,
    #[error("not a cactus: edge {edge} {reason}")]
    NotCactus { edge: EdgeId, reason: String },
}

/// One cycle of the decomposition. `nodes[i]` and `nodes[(i+1) % len]` are
/// the endpoints of `edges[i]`; nodes are distinct and `len >= 2`.
#[derive(Debug, Clone)]
pub struct Cycle {
    pub edges: Vec<EdgeId>,
    pub nodes: Vec<NodeId>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Position of `v` in the cyclic node order.
    pub fn node_position(&self, v: NodeId) -> Option<usize> {
        self.nodes.iter().position(|&x| x == v)
    }
}

/// A validated cactus with its unique cycle decomposition and the full
/// list of 2-edge-cuts, both materialized at construction time.
#[derive(Debug, Clone)]
pub struct CactusGraph {
    pub node_count: usize,
    pub edges: Vec<(NodeId, NodeId)>,
    pub cycles: Vec<Cycle>,
    /// Cycle id of each edge.
    edge_cycle: Vec<usize>,
    /// Multigraph degree of each node (parallel edges count separately).
    degrees: Vec<usize>,
    cuts: Vec<TwoEdgeCut>,
}

/// A pair of edges of a common cycle together with the bipartition of the
/// nodes induced by removing both.
#[derive(Debug, Clone)]
pub struct TwoEdgeCut {
    pub edge_a: EdgeId,
    pub edge_b: EdgeId,
    pub cycle: usize,
    /// side_mask[v] is true for nodes on the `left` side.
    side_mask: Vec<bool>,
    pub left: Vec<NodeId>,
    pub right: Vec<NodeId>,
}

impl TwoEdgeCut {
    pub fn side_of(&self, v: NodeId) -> bool {
        self.side_mask[v]
    }
}

/// Returns true when the link's endpoints lie on opposite sides of the cut.
pub fn covers(cut: &TwoEdgeCut, link: (NodeId, NodeId)) -> bool {
    cut.side_mask[link.0] != cut.side_mask[link.1]
}

/// Validates a multigraph as a cactus and computes its cycle decomposition.
///
/// Rejects graphs that are disconnected, contain a self-loop, a bridge, or
/// an edge that closes more than one cycle (which covers three or more
/// parallel edges between the same pair of nodes).
pub fn validate_cactus(
    node_count: usize,
    edge_list: &[(NodeId, NodeId)],
) -> Result<CactusGraph, CactusError> {
    if node_count < 2 {
        return Err(CactusError::Input(format!(
            "need at least 2 nodes, got {node_count}"
        )));
    }
    if edge_list.is_empty() {
        return Err(CactusError::Input("edge list is empty".into()));
    }
    for (id, &(u, v)) in edge_list.iter().enumerate() {
        if u >= node_count || v >= node_count {
            return Err(CactusError::Input(format!(
                "edge {id} references node out of range: ({u}, {v})"
            )));
        }
        if u == v {
            return Err(CactusError::SelfLoop(id));
        }
    }

    let mut adj: Vec<Vec<(NodeId, EdgeId)>> = vec![Vec::new(); node_count];
    for (id, &(u, v)) in edge_list.iter().enumerate() {
        adj[u].push((v, id));
        adj[v].push((u, id));
    }

    // Iterative DFS. Every non-tree edge closes one cycle through tree
    // edges; a valid cactus covers each tree edge exactly once.
    let mut parent_edge: Vec<Option<EdgeId>> = vec![None; node_count];
    let mut parent: Vec<Option<NodeId>> = vec![None; node_count];
    let mut depth: Vec<usize> = vec![0; node_count];
    let mut visited = vec![false; node_count];
    let mut order: Vec<NodeId> = Vec::with_capacity(node_count);
    let mut stack: Vec<(NodeId, usize)> = vec![(0, 0)];
    visited[0] = true;
    let mut tree_edge = vec![false; edge_list.len()];
    while let Some(&mut (u, ref mut next)) = stack.last_mut() {
        if *next < adj[u].len() {
            let (v, eid) = adj[u][*next];
            *next += 1;
            if !visited[v] {
                visited[v] = true;
                parent[v] = Some(u);
                parent_edge[v] = Some(eid);
                depth[v] = depth[u] + 1;
                tree_edge[eid] = true;
                order.push(v);
                stack.push((v, 0));
            }
        } else {
            stack.pop();
        }
    }
    if visited.iter().any(|&b| !b) {
        return Err(CactusError::NotConnected);
    }

    let mut cover_count = vec![0usize; edge_list.len()];
    let mut edge_cycle = vec![usize::MAX; edge_list.len()];
    let mut cycles: Vec<Cycle> = Vec::new();
    for (eid, &(u, v)) in edge_list.iter().enumerate() {
        if tree_edge[eid] {
            continue;
        }
        // Non-tree edge: in an undirected DFS one endpoint is an ancestor
        // of the other. Walk up from the deeper endpoint.
        let (mut w, top) = if depth[u] > depth[v] { (u, v) } else { (v, u) };
        let mut path_nodes = vec![w];
        let mut path_edges = Vec::new();
        while w != top {
            let pe = parent_edge[w].ok_or(CactusError::NotCactus {
                edge: eid,
                reason: "closes a walk outside the DFS tree".into(),
            })?;
            path_edges.push(pe);
            w = parent[w].unwrap();
            path_nodes.push(w);
        }
        if path_edges.is_empty() {
            // Parallel to nothing: would mean u == v, excluded above.
            return Err(CactusError::NotCactus {
                edge: eid,
                reason: "degenerate cycle".into(),
            });
        }
        for &pe in &path_edges {
            cover_count[pe] += 1;
            if cover_count[pe] > 1 {
                return Err(CactusError::NotCactus {
                    edge: pe,
                    reason: "lies on two cycles".into(),
                });
            }
        }
        // Order the closed walk top -> ... -> deeper endpoint -> (eid) -> top.
        path_nodes.reverse();
        path_edges.reverse();
        path_edges.push(eid);
        let cid = cycles.len();
        for &ce in &path_edges {
            edge_cycle[ce] = cid;
        }
        cycles.push(Cycle {
            edges: path_edges,
            nodes: path_nodes,
        });
    }
    for (eid, &c) in cover_count.iter().enumerate() {
        if tree_edge[eid] && c == 0 {
            return Err(CactusError::NotCactus {
                edge: eid,
                reason: "is a bridge".into(),
            });
        }
    }

    let mut degrees = vec![0usize; node_count];
    for &(u, v) in edge_list {
        degrees[u] += 1;
        degrees[v] += 1;
    }

    let mut graph = CactusGraph {
        node_count,
        edges: edge_list.to_vec(),
        cycles,
        edge_cycle,
        degrees,
        cuts: Vec::new(),
    };
    graph.cuts = compute_two_edge_cuts(&graph);
    Ok(graph)
}

impl CactusGraph {
    pub fn degree(&self, v: NodeId) -> usize {
        self.degrees[v]
    }

    pub fn cycle_of_edge(&self, e: EdgeId) -> usize {
        self.edge_cycle[e]
    }

    /// Nodes of multigraph degree exactly 2 (the future terminals).
    pub fn degree_two_nodes(&self) -> Vec<NodeId> {
        (0..self.node_count)
            .filter(|&v| self.degrees[v] == 2)
            .collect()
    }

    pub fn cuts(&self) -> &[TwoEdgeCut] {
        &self.cuts
    }
}

/// All 2-edge-cuts: one per unordered pair of distinct edges on a common
/// cycle, each with its side bipartition. The count is
/// `sum over cycles of len * (len - 1) / 2`.
pub fn enumerate_two_edge_cuts(graph: &CactusGraph) -> &[TwoEdgeCut] {
    graph.cuts()
}

fn compute_two_edge_cuts(graph: &CactusGraph) -> Vec<TwoEdgeCut> {
    let n = graph.node_count;
    let mut cuts = Vec::new();
    for (cid, cycle) in graph.cycles.iter().enumerate() {
        let k = cycle.len();
        // Component of G minus this cycle's edges that contains each node;
        // every node of the graph hangs off exactly one cycle node.
        let mut anchor = vec![usize::MAX; n];
        for (pos, &start) in cycle.nodes.iter().enumerate() {
            if anchor[start] != usize::MAX {
                continue;
            }
            let mut queue = VecDeque::from([start]);
            anchor[start] = pos;
            while let Some(u) = queue.pop_front() {
                for (eid, &(a, b)) in graph.edges.iter().enumerate() {
                    if graph.edge_cycle[eid] == cid {
                        continue;
                    }
                    let w = if a == u {
                        b
                    } else if b == u {
                        a
                    } else {
                        continue;
                    };
                    if anchor[w] == usize::MAX {
                        anchor[w] = pos;
                        queue.push_back(w);
                    }
                }
            }
        }
        for i in 0..k {
            for j in (i + 1)..k {
                // Removing edges at positions i and j splits the cyclic node
                // order into arcs (i+1..=j) and (j+1..=i).
                let mut side_mask = vec![false; n];
                let mut pos = (i + 1) % k;
                let mut arc = Vec::new();
                loop {
                    arc.push(pos);
                    if pos == j {
                        break;
                    }
                    pos = (pos + 1) % k;
                }
                for v in 0..n {
                    if arc.contains(&anchor[v]) {
                        side_mask[v] = true;
                    }
                }
                let left: Vec<NodeId> = (0..n).filter(|&v| side_mask[v]).collect();
                let right: Vec<NodeId> = (0..n).filter(|&v| !side_mask[v]).collect();
                cuts.push(TwoEdgeCut {
                    edge_a: cycle.edges[i].min(cycle.edges[j]),
                    edge_b: cycle.edges[i].max(cycle.edges[j]),
                    cycle: cid,
                    side_mask,
                    left,
                    right,
                });
            }
        }
    }
    cuts
}

/// A cactus plus candidate links. Construction validates link endpoints;
/// feasibility of the whole link set is checked by [`CacapInstance::is_feasible`]
/// and demanded explicitly by the operations that need it.
#[derive(Debug, Clone)]
pub struct CacapInstance {
    pub graph: CactusGraph,
    pub links: Vec<(NodeId, NodeId)>,
}

impl CacapInstance {
    pub fn new(
        graph: CactusGraph,
        links: Vec<(NodeId, NodeId)>,
    ) -> Result<CacapInstance, CactusError> {
        for (i, &(u, v)) in links.iter().enumerate() {
            if u >= graph.node_count || v >= graph.node_count {
                return Err(CactusError::Input(format!(
                    "link {i} references node out of range: ({u}, {v})"
                )));
            }
            if u == v {
                return Err(CactusError::Input(format!("link {i} is a self-loop")));
            }
        }
        Ok(CacapInstance { graph, links })
    }

    /// True when the full link set covers every 2-edge-cut.
    pub fn is_feasible(&self) -> bool {
        let all: Vec<LinkId> = (0..self.links.len()).collect();
        is_feasible_augmentation(self, &all)
    }

    /// Per-link bitmask over cut indices (64 cuts per word).
    pub fn link_cut_masks(&self) -> Vec<Vec<u64>> {
        let cuts = self.graph.cuts();
        let words = cuts.len().div_ceil(64);
        self.links
            .iter()
            .map(|&l| {
                let mut mask = vec![0u64; words];
                for (ci, cut) in cuts.iter().enumerate() {
                    if covers(cut, l) {
                        mask[ci / 64] |= 1 << (ci % 64);
                    }
                }
                mask
            })
            .collect()
    }
}

/// True when every 2-edge-cut is covered by some link in `subset`.
pub fn is_feasible_augmentation(instance: &CacapInstance, subset: &[LinkId]) -> bool {
    instance.graph.cuts().iter().all(|cut| {
        subset
            .iter()
            .any(|&l| covers(cut, instance.links[l]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::global_min_cut;
    use crate::gen::gen_instance;
    use crate::samples;

    fn two_cycle() -> CactusGraph {
        validate_cactus(2, &[(0, 1), (0, 1)]).unwrap()
    }

    #[test]
    fn smallest_cactus() {
        let g = two_cycle();
        assert_eq!(g.cycles.len(), 1);
        assert_eq!(g.cycles[0].edges.len(), 2);
        assert_eq!(g.degree(0), 2);
    }

    #[test]
    fn twelve_node_sample_has_six_cycles() {
        let inst = samples::cactus12();
        let g = &inst.graph;
        assert_eq!(g.node_count, 12);
        assert_eq!(g.edges.len(), 17);
        assert_eq!(g.cycles.len(), 6);
        let mut lens: Vec<usize> = g.cycles.iter().map(|c| c.len()).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![2, 2, 2, 3, 3, 5]);
        // Multigraph degrees drive the terminal definition.
        assert_eq!(g.degree(0), 8);
        assert_eq!(g.degree(7), 6);
        assert_eq!(
            g.degree_two_nodes(),
            vec![1, 2, 3, 4, 5, 6, 8, 9, 10, 11]
        );
    }

    #[test]
    fn path_is_rejected_as_bridge() {
        let err = validate_cactus(3, &[(0, 1), (1, 2)]).unwrap_err();
        match err {
            CactusError::NotCactus { reason, .. } => assert!(reason.contains("bridge")),
            other => panic!("expected NotCactus, got {other:?}"),
        }
    }

    #[test]
    fn self_loop_rejected() {
        assert_eq!(
            validate_cactus(2, &[(0, 0), (0, 1)]).unwrap_err(),
            CactusError::SelfLoop(0)
        );
    }

    #[test]
    fn disconnected_rejected() {
        let err = validate_cactus(4, &[(0, 1), (0, 1), (2, 3), (2, 3)]).unwrap_err();
        assert_eq!(err, CactusError::NotConnected);
    }

    #[test]
    fn triple_parallel_edge_rejected() {
        let err = validate_cactus(2, &[(0, 1), (0, 1), (0, 1)]).unwrap_err();
        assert!(matches!(err, CactusError::NotCactus { .. }));
    }

    #[test]
    fn edge_shared_by_two_cycles_rejected() {
        // Two triangles glued along an edge.
        let err = validate_cactus(4, &[(0, 1), (1, 2), (2, 0), (1, 3), (3, 2)]).unwrap_err();
        assert!(matches!(err, CactusError::NotCactus { .. }));
    }

    #[test]
    fn cut_count_follows_cycle_lengths() {
        let g = two_cycle();
        assert_eq!(g.cuts().len(), 1);
        assert_eq!(g.cuts()[0].left, vec![1]);
        assert_eq!(g.cuts()[0].right, vec![0]);

        let tri = validate_cactus(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(tri.cuts().len(), 3);

        let inst = samples::cactus12();
        // 3 two-cycles + 2 triangles + C(5,2) on the five-cycle.
        assert_eq!(inst.graph.cuts().len(), 1 + 1 + 1 + 3 + 3 + 10);
    }

    #[test]
    fn covers_is_side_membership() {
        let g = two_cycle();
        let cut = &g.cuts()[0];
        assert!(covers(cut, (0, 1)));
        assert!(covers(cut, (1, 0)));
    }

    #[test]
    fn sample12_cut_coverage() {
        let inst = samples::cactus12();
        // The cut that splits off node 1 (two parallel edges to node 0).
        let cut = inst
            .graph
            .cuts()
            .iter()
            .find(|c| c.left == vec![1] || c.right == vec![1])
            .unwrap();
        // Link l4 = (1, 2) covers it, link l7 = (8, 9) does not.
        assert!(covers(cut, inst.links[3]));
        assert!(!covers(cut, inst.links[6]));
    }

    #[test]
    fn feasibility_two_cycle() {
        let g = two_cycle();
        let inst = CacapInstance::new(g, vec![(0, 1)]).unwrap();
        assert!(is_feasible_augmentation(&inst, &[0]));
        assert!(!is_feasible_augmentation(&inst, &[]));
        assert!(inst.is_feasible());
    }

    #[test]
    fn sample12_feasibility() {
        let inst = samples::cactus12();
        let all: Vec<LinkId> = (0..inst.links.len()).collect();
        assert!(is_feasible_augmentation(&inst, &all));
        // A single link leaves the triangle on nodes 7, 10, 11 uncovered.
        assert!(!is_feasible_augmentation(&inst, &[0]));
    }

    #[test]
    fn cut_sides_are_the_removal_components() {
        // Removing the two edges must split the graph into exactly the
        // recorded sides.
        for seed in [0u64, 3, 11, 19] {
            let inst = gen_instance(3, 5, 2, seed);
            let g = &inst.graph;
            for cut in g.cuts() {
                let mut comp = vec![usize::MAX; g.node_count];
                let mut next = 0;
                for start in 0..g.node_count {
                    if comp[start] != usize::MAX {
                        continue;
                    }
                    let id = next;
                    next += 1;
                    let mut queue = std::collections::VecDeque::from([start]);
                    comp[start] = id;
                    while let Some(u) = queue.pop_front() {
                        for (eid, &(a, b)) in g.edges.iter().enumerate() {
                            if eid == cut.edge_a || eid == cut.edge_b {
                                continue;
                            }
                            let w = if a == u {
                                b
                            } else if b == u {
                                a
                            } else {
                                continue;
                            };
                            if comp[w] == usize::MAX {
                                comp[w] = id;
                                queue.push_back(w);
                            }
                        }
                    }
                }
                assert_eq!(next, 2, "seed {seed}: removal must leave two components");
                let left_comp = comp[cut.left[0]];
                for &v in &cut.left {
                    assert_eq!(comp[v], left_comp);
                }
                for &v in &cut.right {
                    assert_ne!(comp[v], left_comp);
                }
            }
        }
    }

    #[test]
    fn feasibility_matches_min_cut_oracle() {
        // Independent route: adding the subset must push the global edge
        // connectivity to 3 or more.
        for seed in 0..40u64 {
            let inst = gen_instance(3, 5, 4, seed);
            let links: Vec<LinkId> = (0..inst.links.len()).collect();
            for mask in 0..(1u32 << links.len().min(6)) {
                let subset: Vec<LinkId> =
                    links.iter().copied().filter(|&l| mask >> l & 1 == 1).collect();
                let mut edges = inst.graph.edges.clone();
                for &l in &subset {
                    edges.push(inst.links[l]);
                }
                let lambda = global_min_cut(inst.graph.node_count, &edges);
                assert_eq!(
                    is_feasible_augmentation(&inst, &subset),
                    lambda >= 3,
                    "seed {seed} mask {mask:b}: cut oracle disagrees"
                );
            }
        }
    }

    #[test]
    fn degree_two_nodes_need_incident_links() {
        for seed in 100..130u64 {
            let inst = gen_instance(3, 6, 3, seed);
            if !inst.is_feasible() {
                continue;
            }
            for v in inst.graph.degree_two_nodes() {
                assert!(
                    inst.links.iter().any(|&(a, b)| a == v || b == v),
                    "feasible instance must touch degree-2 node {v}"
                );
            }
        }
    }
}

//! Reduction from cactus augmentation to unweighted Steiner tree.
//!
//! Terminals are the degree-2 cactus nodes, Steiner nodes are the links.
//! A link attaches to each of its degree-2 endpoints, and two links are
//! joined when they cross: some projection of one shares an endpoint with
//! a projection of the other, or two projections on a common cycle
//! strictly interleave. A link set is feasible for the augmentation
//! problem exactly when terminals plus chosen Steiner nodes induce a
//! connected subgraph, so minimum augmentations and minimum Steiner trees
//! translate into each other with a fixed cost shift of `t - 1`.

use std::collections::{BTreeSet, VecDeque};
use thiserror::Error;

use crate::cactus::{CacapInstance, LinkId, NodeId};
use crate::steiner::{SteinerInstance, SteinerTreeSolution};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("instance is infeasible: 2-edge-cut ({edge_a}, {edge_b}) is covered by no link")]
    InstanceInfeasible { edge_a: usize, edge_b: usize },
    #[error("node set does not connect all terminals")]
    NotConnectedOverTerminals,
    #[error("link set leaves the terminal graph disconnected")]
    InfeasibleLinkSet,
    #[error("Steiner node adjacent to more than two terminals")]
    TooManyTerminalNeighbors,
    #[error("neighbors of a terminal must form a clique")]
    TerminalNeighborsNotClique,
}

/// Restriction of a link to one cycle along the unique cycle-level path
/// between its endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    pub link: LinkId,
    pub cycle: usize,
    pub segment: (NodeId, NodeId),
}

/// Walks the unique path between the link's endpoints in the node/cycle
/// incidence tree and splits it at the transition nodes (which have
/// degree at least 4). A link inside a single cycle projects to itself.
pub fn project_link(instance: &CacapInstance, link: LinkId) -> Vec<Projection> {
    let graph = &instance.graph;
    let (src, dst) = instance.links[link];
    // Incidence tree: node vertices 0..n, cycle vertices n..n+c.
    let n = graph.node_count;
    let c = graph.cycles.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + c];
    for (cid, cycle) in graph.cycles.iter().enumerate() {
        for &v in &cycle.nodes {
            adj[v].push(n + cid);
            adj[n + cid].push(v);
        }
    }
    let mut parent = vec![usize::MAX; n + c];
    let mut seen = vec![false; n + c];
    seen[src] = true;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        if u == dst {
            break;
        }
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    debug_assert!(seen[dst], "cactus is connected");
    let mut path = vec![dst];
    let mut cur = dst;
    while cur != src {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    // Path alternates node, cycle, node, cycle, ..., node.
    let mut out = Vec::new();
    let mut i = 0;
    while i + 2 < path.len() {
        out.push(Projection {
            link,
            cycle: path[i + 1] - n,
            segment: (path[i], path[i + 2]),
        });
        i += 2;
    }
    out
}

/// True when two projections cross: shared endpoint (on any cycle), or
/// strict interleaving of the four endpoints on a common cycle.
fn projections_cross(graph: &crate::cactus::CactusGraph, p: &Projection, q: &Projection) -> bool {
    let (a1, a2) = p.segment;
    let (b1, b2) = q.segment;
    if a1 == b1 || a1 == b2 || a2 == b1 || a2 == b2 {
        return true;
    }
    if p.cycle != q.cycle {
        return false;
    }
    let cycle = &graph.cycles[p.cycle];
    let pos = |v: NodeId| cycle.node_position(v).expect("segment endpoint on cycle");
    let (i1, i2) = (pos(a1), pos(a2));
    // Walk one arc from a1 to a2; crossing iff exactly one of b1, b2 is
    // strictly inside it.
    let k = cycle.len();
    let mut inside = 0;
    let mut at = (i1 + 1) % k;
    while at != i2 {
        let v = cycle.nodes[at];
        if v == b1 || v == b2 {
            inside += 1;
        }
        at = (at + 1) % k;
    }
    inside == 1
}

/// Crossing test for two whole links, over all projection pairs.
pub fn links_cross(instance: &CacapInstance, link_a: LinkId, link_b: LinkId) -> bool {
    let pa = project_link(instance, link_a);
    let pb = project_link(instance, link_b);
    pa.iter()
        .any(|p| pb.iter().any(|q| projections_cross(&instance.graph, p, q)))
}

/// Builds the Steiner instance of a feasible augmentation instance.
///
/// Terminal slot `i` is the `i`-th degree-2 node in ascending id order;
/// Steiner slot `j` is link `j`.
pub fn build_steiner_instance(
    instance: &CacapInstance,
) -> Result<SteinerInstance, ReductionError> {
    if let Some(cut) = instance
        .graph
        .cuts()
        .iter()
        .find(|cut| !instance.links.iter().any(|&l| crate::cactus::covers(cut, l)))
    {
        return Err(ReductionError::InstanceInfeasible {
            edge_a: cut.edge_a,
            edge_b: cut.edge_b,
        });
    }
    let terminals = instance.graph.degree_two_nodes();
    let mut st = SteinerInstance::new(terminals.clone(), instance.links.clone());
    for (lid, &(u, v)) in instance.links.iter().enumerate() {
        for endpoint in [u, v] {
            if let Some(t) = terminals.iter().position(|&x| x == endpoint) {
                st.add_edge(t, st.steiner_flat(lid));
            }
        }
    }
    let projections: Vec<Vec<Projection>> = (0..instance.links.len())
        .map(|l| project_link(instance, l))
        .collect();
    for a in 0..instance.links.len() {
        for b in (a + 1)..instance.links.len() {
            let cross = projections[a].iter().any(|p| {
                projections[b]
                    .iter()
                    .any(|q| projections_cross(&instance.graph, p, q))
            });
            if cross {
                st.add_edge(st.steiner_flat(a), st.steiner_flat(b));
            }
        }
    }
    validate_structure(&st)?;
    Ok(st)
}

/// Structural facts guaranteed by the construction: each Steiner node sees
/// at most two terminals, and the neighbors of every terminal are Steiner
/// nodes forming a clique.
pub fn validate_structure(st: &SteinerInstance) -> Result<(), ReductionError> {
    for s in st.terminal_count()..st.node_count() {
        let terminal_neighbors = st.neighbors(s).iter().filter(|&&x| st.is_terminal(x)).count();
        if terminal_neighbors > 2 {
            return Err(ReductionError::TooManyTerminalNeighbors);
        }
    }
    for t in 0..st.terminal_count() {
        let nbrs: Vec<usize> = st.neighbors(t).iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if !st.has_edge(a, b) {
                    return Err(ReductionError::TerminalNeighborsNotClique);
                }
            }
        }
    }
    Ok(())
}

/// Maps a connected node set containing all terminals back to a link set.
pub fn lift_solution(
    st: &SteinerInstance,
    node_set: &BTreeSet<usize>,
) -> Result<Vec<LinkId>, ReductionError> {
    if !st.connected_over_terminals(node_set) {
        return Err(ReductionError::NotConnectedOverTerminals);
    }
    Ok(node_set
        .iter()
        .filter(|&&v| !st.is_terminal(v))
        .map(|&v| st.link_of_flat(v))
        .collect())
}

/// Spanning tree of the subgraph induced by all terminals plus the links
/// in `subset`. Exists exactly when `subset` is a feasible augmentation.
pub fn embed_solution(
    st: &SteinerInstance,
    subset: &[LinkId],
) -> Result<SteinerTreeSolution, ReductionError> {
    let mut nodes: BTreeSet<usize> = (0..st.terminal_count()).collect();
    for &l in subset {
        nodes.insert(st.steiner_flat(l));
    }
    let edges = st
        .spanning_tree(&nodes)
        .ok_or(ReductionError::InfeasibleLinkSet)?;
    Ok(SteinerTreeSolution::new(edges))
}

/// Rewires a tree spanning the terminals so that every terminal becomes a
/// leaf, keeping the edge count. Each step moves one edge (`v`, `b`) of a
/// terminal `v` with degree two or more to (`a`, `b`) for two of its
/// Steiner neighbors `a`, `b`, which are adjacent because terminal
/// neighborhoods are cliques.
pub fn normalize_terminal_degrees(
    st: &SteinerInstance,
    tree: &SteinerTreeSolution,
) -> SteinerTreeSolution {
    let mut edges: BTreeSet<(usize, usize)> = tree.edges.iter().copied().collect();
    loop {
        let mut deg: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for &(a, b) in &edges {
            deg.entry(a).or_default().push(b);
            deg.entry(b).or_default().push(a);
        }
        let busy_terminal = (0..st.terminal_count())
            .find(|t| deg.get(t).map_or(0, |v| v.len()) >= 2);
        let Some(v) = busy_terminal else { break };
        let nbrs = &deg[&v];
        let a = nbrs[0];
        let b = nbrs[1];
        debug_assert!(st.has_edge(a, b), "terminal neighborhood is a clique");
        edges.remove(&(v.min(b), v.max(b)));
        edges.insert((a.min(b), a.max(b)));
    }
    SteinerTreeSolution::new(edges.into_iter().collect())
}

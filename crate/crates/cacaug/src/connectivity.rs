//! Global minimum edge cut (Stoer-Wagner).
//!
//! Used as an independent oracle for augmentation feasibility: a link set
//! is feasible exactly when the augmented graph has edge connectivity at
//! least 3. Parallel edges contribute their multiplicity.

/// Weight of a global minimum edge cut of the multigraph given by `edges`
/// on `n >= 2` nodes. Returns 0 for disconnected graphs.
pub fn global_min_cut(n: usize, edges: &[(usize, usize)]) -> u64 {
    assert!(n >= 2, "min cut needs at least two nodes");
    let mut w = vec![vec![0u64; n]; n];
    for &(u, v) in edges {
        if u != v {
            w[u][v] += 1;
            w[v][u] += 1;
        }
    }
    let mut active: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    while active.len() > 1 {
        // Maximum adjacency order over the active (merged) nodes.
        let m = active.len();
        let mut added = vec![false; m];
        let mut weight_to_set = vec![0u64; m];
        let mut order = Vec::with_capacity(m);
        for _ in 0..m {
            let mut pick = usize::MAX;
            for i in 0..m {
                if !added[i] && (pick == usize::MAX || weight_to_set[i] > weight_to_set[pick]) {
                    pick = i;
                }
            }
            added[pick] = true;
            order.push(pick);
            for i in 0..m {
                if !added[i] {
                    weight_to_set[i] += w[active[pick]][active[i]];
                }
            }
        }
        let last = order[m - 1];
        let prev = order[m - 2];
        // Cut-of-the-phase isolates the last-added node.
        best = best.min(weight_to_set[last]);
        // Merge the last node into its predecessor.
        let (a, b) = (active[prev], active[last]);
        for i in 0..n {
            if i != a && i != b {
                w[a][i] += w[b][i];
                w[i][a] = w[a][i];
            }
        }
        w[a][b] = 0;
        w[b][a] = 0;
        active.remove(last);
        if best == 0 {
            return 0;
        }
    }
    best
}

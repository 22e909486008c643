//! The tree-based Robber move on high-girth graphs.
//!
//! On an `ell`-regular graph of girth above `6d`, the ball of radius `3d`
//! around the Robber vertex is a tree. Keeping every pebbled edge at distance
//! more than `d` from the Robber vertex, the move walks through each child of
//! the root to a grandchild subtree that the announced pebbles miss, which
//! both yields `ell` edge-disjoint escape paths and re-establishes the
//! distance invariant at their endpoints.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{validate_path_system, OrderedGraph, Path};

/// The distance invariant: every edge of `pebbled` has both endpoints
/// farther than `d` from `u`.
pub fn distance_invariant_holds(
    g: &OrderedGraph,
    d: usize,
    pebbled: &BTreeSet<usize>,
    u: usize,
) -> bool {
    pebbled.iter().all(|&e| {
        let (a, b) = g.edge(e);
        g.distance(u, a).is_none_or(|x| x > d) && g.distance(u, b).is_none_or(|x| x > d)
    })
}

/// Robber's move from `(pebbled, u)` against the announced pebble set
/// `incoming`: `ell` pairwise edge-disjoint paths of length `2d` from `u`,
/// avoiding `pebbled ∩ incoming`, each endpoint satisfying the distance
/// invariant for `incoming`. Preconditions are hard errors, never silently
/// weakened; postconditions are asserted on the result.
pub fn robber_girth_move(
    g: &OrderedGraph,
    d: usize,
    pebbled: &BTreeSet<usize>,
    u: usize,
    incoming: &BTreeSet<usize>,
) -> Result<Vec<Path>> {
    if d == 0 {
        return Err(Error::Precondition("need d >= 1".into()));
    }
    let Some(ell) = g.regular_degree() else {
        return Err(Error::Precondition("girth strategy needs a regular graph".into()));
    };
    if ell < 3 {
        return Err(Error::Precondition("girth strategy needs degree at least 3".into()));
    }
    if let Some(girth) = g.girth() {
        if girth <= 6 * d {
            return Err(Error::Precondition(format!("girth {girth} is not above {}", 6 * d)));
        }
    }
    if !distance_invariant_holds(g, d, pebbled, u) {
        return Err(Error::Precondition("distance invariant fails at the current position".into()));
    }
    // (ℓ-1)^(d-1) subtrees per child must outnumber the 2|incoming| pebble
    // endpoints.
    let subtrees = (ell - 1).pow((d - 1) as u32);
    if subtrees <= 2 * incoming.len() {
        return Err(Error::Precondition(format!(
            "(ell-1)^(d-1) = {subtrees} does not exceed 2|F'| = {}",
            2 * incoming.len()
        )));
    }

    // Rooted BFS tree of radius 3d around u; the girth bound makes it a tree.
    let radius = 3 * d;
    let n = g.vertex_count();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::new();
    dist[u] = 0;
    order.push(u);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        if dist[v] == radius {
            continue;
        }
        for &w in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                parent[w] = v;
                order.push(w);
            } else if w != parent[v] && dist[w] <= radius {
                // Two meeting branches inside the ball contradict the girth
                // precondition already checked above.
                return Err(Error::Internal("ball of radius 3d is not a tree".into()));
            }
        }
    }

    let pebble_endpoints: BTreeSet<usize> = incoming
        .iter()
        .flat_map(|&e| {
            let (a, b) = g.edge(e);
            [a, b]
        })
        .collect();

    // Does the subtree rooted at x (within the ball) contain a pebble endpoint?
    let subtree_clean = |x: usize| -> bool {
        let mut stack = vec![x];
        while let Some(v) = stack.pop() {
            if pebble_endpoints.contains(&v) {
                return false;
            }
            for &w in g.neighbors(v) {
                if parent[w] == v && dist[w] == dist[v] + 1 {
                    stack.push(w);
                }
            }
        }
        true
    };

    let children: Vec<usize> = g.neighbors(u).to_vec();
    debug_assert_eq!(children.len(), ell);
    let mut system = Vec::with_capacity(ell);
    for &child in &children {
        // Descendants of this child at distance exactly d from u.
        let mut level: Vec<usize> = vec![child];
        for _ in 1..d {
            let mut next = Vec::new();
            for &v in &level {
                for &w in g.neighbors(v) {
                    if parent[w] == v && dist[w] == dist[v] + 1 {
                        next.push(w);
                    }
                }
            }
            level = next;
        }
        level.sort_unstable();
        let anchor = level.iter().copied().find(|&x| subtree_clean(x)).ok_or_else(|| {
            Error::Internal("no clean subtree despite the counting precondition".into())
        })?;
        // First descendant of the anchor at distance d below it.
        let mut down: Vec<usize> = vec![anchor];
        for _ in 0..d {
            let mut next = Vec::new();
            for &v in &down {
                for &w in g.neighbors(v) {
                    if parent[w] == v && dist[w] == dist[v] + 1 {
                        next.push(w);
                    }
                }
            }
            next.sort_unstable();
            down = next;
        }
        let target = *down.first().ok_or_else(|| {
            Error::Internal("subtree below the anchor is too shallow".into())
        })?;
        // Unique tree path u -> target.
        let mut vertices = vec![target];
        let mut at = target;
        while at != u {
            at = parent[at];
            vertices.push(at);
        }
        vertices.reverse();
        system.push(Path::from_vertices(g, vertices)?);
    }

    // Postconditions, all asserted at return.
    let forbidden: BTreeSet<usize> = pebbled.intersection(incoming).copied().collect();
    validate_path_system(g, u, &forbidden, &system)?;
    for p in &system {
        if p.edges.len() != 2 * d {
            return Err(Error::Internal("escape path has the wrong length".into()));
        }
        if !distance_invariant_holds(g, d, incoming, p.endpoint()) {
            return Err(Error::Internal("endpoint violates the distance invariant".into()));
        }
    }
    Ok(system)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, generate_regular};

    fn girth7_graph() -> OrderedGraph {
        generate_regular(3, 30, 7, 20_260_101, 3_000_000)
            .expect("generation ran")
            .expect("girth-7 cubic graph found")
    }

    #[test]
    fn escape_move_on_girth7() {
        let g = girth7_graph();
        let empty = BTreeSet::new();
        for u in [0usize, 5, 11] {
            let system = robber_girth_move(&g, 1, &empty, u, &empty).unwrap();
            assert_eq!(system.len(), 3);
            for p in &system {
                assert_eq!(p.edges.len(), 2);
            }
        }
    }

    #[test]
    fn guard_rejects_low_girth() {
        let g = complete_graph(4);
        let empty = BTreeSet::new();
        assert!(matches!(
            robber_girth_move(&g, 1, &empty, 0, &empty),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn guard_rejects_large_incoming_set() {
        let g = girth7_graph();
        let empty = BTreeSet::new();
        // d = 1 allows only an empty announced set: (ell-1)^0 = 1.
        let incoming = BTreeSet::from([0usize]);
        assert!(matches!(
            robber_girth_move(&g, 1, &empty, 0, &incoming),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn guard_rejects_violated_invariant() {
        let g = girth7_graph();
        let e = g.incident_edges(0)[0];
        let pebbled = BTreeSet::from([e]);
        assert!(matches!(
            robber_girth_move(&g, 1, &pebbled, 0, &BTreeSet::new()),
            Err(Error::Precondition(_))
        ));
    }
}

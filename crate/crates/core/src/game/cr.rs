//! Exact solvers for the Cops-and-Robber game on edge sets.
//!
//! Positions are pairs `(F, u)` with `|F| ≤ k`: Cop wins immediately when an
//! `F`-edge touches `u`; otherwise Cop announces the next edge set `F'`,
//! Robber answers with `ell` pairwise edge-disjoint simple paths from `u`
//! avoiding `F ∩ F'` (the pebbles that never move), and Cop picks which path
//! Robber must follow to its endpoint.
//!
//! Robber wins infinite play, so the safe region is a greatest fixpoint. Two
//! independent implementations compute it: the primary solver peels unsafe
//! positions using a max-flow existence test for the path systems, and the
//! cross-check solver runs value iteration with explicit path-system
//! enumeration. The acceptance suite holds them to agreement.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{validate_path_system, OrderedGraph, Path};
use crate::util::subsets_up_to;

/// Result of solving the game for fixed `k` and `ell`.
#[derive(Clone, Debug)]
pub struct CrOutcome {
    pub k: usize,
    pub ell: usize,
    /// Robber-winning positions `(edge mask, vertex)`.
    pub safe: HashSet<(u64, usize)>,
    /// For each unsafe-but-uncaught position, a Cop move that wins.
    pub cop_attack: HashMap<(u64, usize), u64>,
    /// Pass at which each unsafe position fell (0 = caught outright).
    pub cop_depth: HashMap<(u64, usize), usize>,
    pub passes: usize,
}

impl CrOutcome {
    pub fn is_safe(&self, f_mask: u64, u: usize) -> bool {
        self.safe.contains(&(f_mask, u))
    }

    /// Per-vertex safety for the empty pebble set.
    pub fn safe_vertices_for_empty(&self) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.safe.iter().filter(|&&(f, _)| f == 0).map(|&(_, u)| u).collect();
        out.sort_unstable();
        out
    }
}

pub fn edge_mask(edges: &BTreeSet<usize>) -> u64 {
    edges.iter().fold(0u64, |m, &e| m | 1 << e)
}

pub fn mask_edges(mask: u64) -> BTreeSet<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

fn incident_mask(g: &OrderedGraph, u: usize) -> u64 {
    g.incident_edges(u).iter().fold(0u64, |m, &e| m | 1 << e)
}

fn check_inputs(g: &OrderedGraph, k: usize, ell: usize) -> Result<Vec<u64>> {
    if g.regular_degree() != Some(ell) {
        return Err(Error::Precondition(format!("graph must be {ell}-regular")));
    }
    if g.edge_count() > 60 {
        return Err(Error::BudgetExceeded("more than 60 edges".into()));
    }
    let masks: Vec<u64> = subsets_up_to(g.edge_count(), k)
        .into_iter()
        .map(|s| s.iter().fold(0u64, |m, &e| m | 1 << e))
        .collect();
    let count = masks.len() * g.vertex_count();
    if count > 5_000_000 {
        return Err(Error::BudgetExceeded(format!("{count} game positions")));
    }
    Ok(masks)
}

/// Primary solver: greatest-fixpoint peeling with flow-based path existence.
pub fn solve_cr_game(g: &OrderedGraph, k: usize, ell: usize) -> Result<CrOutcome> {
    let masks = check_inputs(g, k, ell)?;
    let n = g.vertex_count();
    let mut alive: Vec<Vec<bool>> = masks
        .iter()
        .map(|&f| (0..n).map(|u| f & incident_mask(g, u) == 0).collect())
        .collect();
    let mut cop_depth: HashMap<(u64, usize), usize> = HashMap::new();
    let mut cop_attack: HashMap<(u64, usize), u64> = HashMap::new();
    for (mi, &f) in masks.iter().enumerate() {
        for u in 0..n {
            if !alive[mi][u] {
                cop_depth.insert((f, u), 0);
            }
        }
    }
    let mut passes = 0usize;
    loop {
        passes += 1;
        let mut died: Vec<(usize, usize, u64)> = Vec::new();
        for (mi, &f) in masks.iter().enumerate() {
            for u in 0..n {
                if !alive[mi][u] {
                    continue;
                }
                let mut killer = None;
                for (pi, &fp) in masks.iter().enumerate() {
                    let targets: Vec<usize> =
                        (0..n).filter(|&w| w != u && alive[pi][w]).collect();
                    let forbidden = f & fp;
                    if max_edge_disjoint_paths(g, u, &targets, forbidden, ell) < ell {
                        killer = Some(fp);
                        break;
                    }
                }
                if let Some(fp) = killer {
                    died.push((mi, u, fp));
                }
            }
        }
        if died.is_empty() {
            break;
        }
        for (mi, u, fp) in died {
            alive[mi][u] = false;
            cop_depth.insert((masks[mi], u), passes);
            cop_attack.insert((masks[mi], u), fp);
        }
    }
    let mut safe = HashSet::new();
    for (mi, &f) in masks.iter().enumerate() {
        for u in 0..n {
            if alive[mi][u] {
                safe.insert((f, u));
            }
        }
    }
    Ok(CrOutcome { k, ell, safe, cop_attack, cop_depth, passes })
}

/// Maximum number of edge-disjoint `u → targets` paths avoiding `forbidden`,
/// capped at `want`. Undirected unit capacities via net flows in `{-1,0,1}`.
fn max_edge_disjoint_paths(
    g: &OrderedGraph,
    u: usize,
    targets: &[usize],
    forbidden: u64,
    want: usize,
) -> usize {
    if targets.is_empty() {
        return 0;
    }
    let is_target = {
        let mut t = vec![false; g.vertex_count()];
        for &w in targets {
            t[w] = true;
        }
        t
    };
    let mut flow: Vec<i8> = vec![0; g.edge_count()]; // +1 = along (a,b) with a<b
    let mut value = 0usize;
    while value < want {
        // BFS in the residual graph.
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; g.vertex_count()]; // (prev vertex, edge)
        let mut seen = vec![false; g.vertex_count()];
        let mut queue = VecDeque::new();
        seen[u] = true;
        queue.push_back(u);
        let mut reached = None;
        'bfs: while let Some(v) = queue.pop_front() {
            for &eid in g.incident_edges(v) {
                if forbidden >> eid & 1 == 1 {
                    continue;
                }
                let w = g.other_endpoint(eid, v);
                if seen[w] {
                    continue;
                }
                let (a, _) = g.edge(eid);
                let dir: i8 = if v == a { 1 } else { -1 };
                if flow[eid] == dir {
                    continue; // saturated in this direction
                }
                seen[w] = true;
                parent[w] = Some((v, eid));
                if is_target[w] {
                    reached = Some(w);
                    break 'bfs;
                }
                queue.push_back(w);
            }
        }
        let Some(mut w) = reached else {
            break;
        };
        while let Some((v, eid)) = parent[w] {
            let (a, _) = g.edge(eid);
            let dir: i8 = if v == a { 1 } else { -1 };
            flow[eid] += dir;
            debug_assert!(flow[eid].abs() <= 1);
            w = v;
        }
        value += 1;
    }
    value
}

/// Extracts `ell` edge-disjoint simple paths from `u` to safe-for-`f_prime`
/// vertices, avoiding `F ∩ F'`. This is the Robber strategy for the primary
/// solver; the returned system is re-validated before use.
pub fn robber_paths(
    g: &OrderedGraph,
    outcome: &CrOutcome,
    f_mask: u64,
    u: usize,
    fp_mask: u64,
) -> Result<Vec<Path>> {
    if !outcome.is_safe(f_mask, u) {
        return Err(Error::Precondition(format!("({f_mask:#x}, {u}) is not robber-safe")));
    }
    let targets: Vec<usize> = (0..g.vertex_count())
        .filter(|&w| w != u && outcome.is_safe(fp_mask, w))
        .collect();
    let forbidden = f_mask & fp_mask;
    let ell = outcome.ell;

    // Re-run the augmenting search, then decompose the flow into trails and
    // shortcut them to simple paths.
    let is_target = {
        let mut t = vec![false; g.vertex_count()];
        for &w in &targets {
            t[w] = true;
        }
        t
    };
    let mut flow: Vec<i8> = vec![0; g.edge_count()];
    let mut sink_flow: Vec<usize> = vec![0; g.vertex_count()];
    let mut value = 0usize;
    while value < ell {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; g.vertex_count()];
        let mut seen = vec![false; g.vertex_count()];
        let mut queue = VecDeque::new();
        seen[u] = true;
        queue.push_back(u);
        let mut reached = None;
        'bfs: while let Some(v) = queue.pop_front() {
            for &eid in g.incident_edges(v) {
                if forbidden >> eid & 1 == 1 {
                    continue;
                }
                let w = g.other_endpoint(eid, v);
                if seen[w] {
                    continue;
                }
                let (a, _) = g.edge(eid);
                let dir: i8 = if v == a { 1 } else { -1 };
                if flow[eid] == dir {
                    continue;
                }
                seen[w] = true;
                parent[w] = Some((v, eid));
                if is_target[w] {
                    reached = Some(w);
                    break 'bfs;
                }
                queue.push_back(w);
            }
        }
        let Some(end) = reached else {
            return Err(Error::Internal(
                "robber-safe position lacks the promised path system".into(),
            ));
        };
        sink_flow[end] += 1;
        let mut w = end;
        while let Some((v, eid)) = parent[w] {
            let (a, _) = g.edge(eid);
            let dir: i8 = if v == a { 1 } else { -1 };
            flow[eid] += dir;
            w = v;
        }
        value += 1;
    }

    // Directed arcs carried by the flow, ordered by edge id for determinism.
    let mut out_arcs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.vertex_count()];
    for eid in 0..g.edge_count() {
        let (a, b) = g.edge(eid);
        match flow[eid] {
            1 => out_arcs[a].push((eid, b)),
            -1 => out_arcs[b].push((eid, a)),
            _ => {}
        }
    }
    for arcs in &mut out_arcs {
        arcs.sort_unstable();
    }
    let mut used: Vec<bool> = vec![false; g.edge_count()];
    let mut system = Vec::with_capacity(ell);
    for _ in 0..ell {
        // Walk a trail from u until sink capacity absorbs it.
        let mut trail_vertices = vec![u];
        let mut trail_edges = Vec::new();
        let mut at = u;
        loop {
            if at != u && sink_flow[at] > 0 {
                sink_flow[at] -= 1;
                break;
            }
            let next = out_arcs[at].iter().find(|&&(eid, _)| !used[eid]).copied();
            let Some((eid, w)) = next else {
                return Err(Error::Internal("flow decomposition ran out of arcs".into()));
            };
            used[eid] = true;
            trail_edges.push(eid);
            trail_vertices.push(w);
            at = w;
        }
        // Shortcut to a simple path: on revisits drop the loop.
        let mut simple_vertices: Vec<usize> = Vec::new();
        let mut simple_edges: Vec<usize> = Vec::new();
        for (i, &v) in trail_vertices.iter().enumerate() {
            if let Some(pos) = simple_vertices.iter().position(|&x| x == v) {
                simple_vertices.truncate(pos + 1);
                simple_edges.truncate(pos);
            } else {
                simple_vertices.push(v);
                if i > 0 {
                    simple_edges.push(trail_edges[i - 1]);
                }
            }
        }
        system.push(Path { vertices: simple_vertices, edges: simple_edges });
    }
    validate_path_system(g, u, &mask_edges(forbidden), &system)?;
    for p in &system {
        if !outcome.is_safe(fp_mask, p.endpoint()) {
            return Err(Error::Internal("extracted path ends at an unsafe vertex".into()));
        }
    }
    Ok(system)
}

/// Cross-check solver: value iteration with explicit path-system
/// enumeration. Shares no search machinery with the flow route.
pub fn solve_cr_game_minimax(g: &OrderedGraph, k: usize, ell: usize) -> Result<HashSet<(u64, usize)>> {
    let masks = check_inputs(g, k, ell)?;
    let n = g.vertex_count();
    // Simple paths are reused across passes, keyed by (start, avoided edges);
    // each path is reduced to (first edge, edge mask, endpoint).
    type ReducedPath = (usize, u64, usize);
    let mut path_cache: HashMap<(usize, u64), Vec<ReducedPath>> = HashMap::new();
    let mut cached_paths =
        |u: usize, forbidden: u64| -> Result<Vec<ReducedPath>> {
            if let Some(p) = path_cache.get(&(u, forbidden)) {
                return Ok(p.clone());
            }
            let set = mask_edges(forbidden);
            let paths = crate::graph::simple_paths_from(g, u, &set, 1_000_000)?;
            let reduced: Vec<(usize, u64, usize)> = paths
                .iter()
                .map(|p| {
                    let mask = p.edges.iter().fold(0u64, |m, &e| m | 1 << e);
                    (p.edges[0], mask, p.endpoint())
                })
                .collect();
            path_cache.insert((u, forbidden), reduced.clone());
            Ok(reduced)
        };
    let mut survive: HashMap<(u64, usize), bool> = HashMap::new();
    for &f in &masks {
        for u in 0..n {
            survive.insert((f, u), f & incident_mask(g, u) == 0);
        }
    }
    loop {
        let mut next = HashMap::new();
        for &f in &masks {
            for u in 0..n {
                let mut ok = survive[&(f, u)];
                if ok {
                    for &fp in &masks {
                        let good: Vec<bool> = (0..n).map(|w| w != u && survive[&(fp, w)]).collect();
                        let paths = cached_paths(u, f & fp)?;
                        if !exists_disjoint_selection(&paths, ell, &good) {
                            ok = false;
                            break;
                        }
                    }
                }
                next.insert((f, u), ok);
            }
        }
        if next == survive {
            break;
        }
        survive = next;
    }
    Ok(survive.into_iter().filter(|&(_, ok)| ok).map(|(p, _)| p).collect())
}

/// Choose `ell` pairwise edge-disjoint paths with distinct first edges and
/// good endpoints. Paths to bad endpoints never help Robber (Cop would pick
/// them), so only good-endpoint paths enter the search.
fn exists_disjoint_selection(paths: &[(usize, u64, usize)], ell: usize, good: &[bool]) -> bool {
    let mut by_first: Vec<(usize, Vec<(u64, usize)>)> = Vec::new();
    for &(fe, mask, end) in paths {
        if !good[end] {
            continue;
        }
        match by_first.iter_mut().find(|(e, _)| *e == fe) {
            Some((_, v)) => v.push((mask, end)),
            None => by_first.push((fe, vec![(mask, end)])),
        }
    }
    by_first.sort_by_key(|(e, _)| *e);
    fn rec(groups: &[(usize, Vec<(u64, usize)>)], start: usize, need: usize, used: u64) -> bool {
        if need == 0 {
            return true;
        }
        if groups.len() - start < need {
            return false;
        }
        for gi in start..groups.len() {
            for &(mask, _) in &groups[gi].1 {
                if used & mask == 0 && rec(groups, gi + 1, need - 1, used | mask) {
                    return true;
                }
            }
        }
        false
    }
    rec(&by_first, 0, ell, 0)
}

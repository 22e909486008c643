//! Ordered graphs, girth machinery, regular-graph generation, and
//! edge-disjoint path systems.
//!
//! Vertices carry their natural order (`v0 = 0`); the edges around a vertex
//! are ordered by the other endpoint's index, which fixes the incidence tuple
//! used by the CFI construction everywhere downstream.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structure::{Structure, Vocabulary};

/// A simple undirected graph on `{0,…,n-1}` with the natural vertex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    incidence: Vec<Vec<usize>>,
    edge_ids: HashMap<(usize, usize), usize>,
}

impl OrderedGraph {
    pub fn new(n: usize, edge_list: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut seen = HashSet::new();
        for (a, b) in edge_list {
            if a >= n || b >= n {
                return Err(Error::OutOfUniverse { element: a.max(b), universe: n });
            }
            if a == b {
                return Err(Error::invalid("graph", format!("loop at vertex {a}")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::invalid("graph", format!("duplicate edge {e:?}")));
            }
            edges.push(e);
        }
        edges.sort();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let edge_ids: HashMap<(usize, usize), usize> =
            edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut incidence = vec![Vec::new(); n];
        for v in 0..n {
            // Edge order at v follows the other endpoint's index.
            incidence[v] = adj[v].iter().map(|&w| edge_ids[&(v.min(w), v.max(w))]).collect();
        }
        Ok(OrderedGraph { n, edges, adj, incidence, edge_ids })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order; the position is the edge id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_ids.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Incident edge ids at `v`, ordered by the other endpoint.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn other_endpoint(&self, edge_id: usize, v: usize) -> usize {
        let (a, b) = self.edges[edge_id];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn is_regular(&self, ell: usize) -> bool {
        (0..self.n).all(|v| self.degree(v) == ell)
    }

    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first()?.len();
        if self.is_regular(d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.ball(0, self.n).len() == self.n
    }

    pub fn distance(&self, a: usize, b: usize) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[a] = 0;
        queue.push_back(a);
        while let Some(v) = queue.pop_front() {
            if v == b {
                return Some(dist[v]);
            }
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    pub fn ball(&self, u: usize, d: usize) -> BTreeSet<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[u] = 0;
        queue.push_back(u);
        let mut out = BTreeSet::new();
        out.insert(u);
        while let Some(v) = queue.pop_front() {
            if dist[v] == d {
                continue;
            }
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    out.insert(w);
                    queue.push_back(w);
                }
            }
        }
        out
    }

    /// Length of the shortest cycle; `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for root in 0..self.n {
            let mut dist = vec![usize::MAX; self.n];
            let mut parent_edge = vec![usize::MAX; self.n];
            let mut queue = VecDeque::new();
            dist[root] = 0;
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                for &eid in &self.incidence[v] {
                    let w = self.other_endpoint(eid, v);
                    if eid == parent_edge[v] {
                        continue;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        parent_edge[w] = eid;
                        queue.push_back(w);
                    } else {
                        // Cross or back edge closes a cycle through the BFS tree.
                        let len = dist[v] + dist[w] + 1;
                        if best.is_none_or(|b| len < b) {
                            best = Some(len);
                        }
                    }
                }
            }
        }
        best
    }

    /// Shortest cycle length through a given edge, ignoring that edge itself.
    fn cycle_length_through(&self, edge_id: usize) -> Option<usize> {
        let (a, b) = self.edges[edge_id];
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[a] = 0;
        queue.push_back(a);
        while let Some(v) = queue.pop_front() {
            if v == b {
                return Some(dist[b] + 1);
            }
            for &eid in &self.incidence[v] {
                if eid == edge_id {
                    continue;
                }
                let w = self.other_endpoint(eid, v);
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut comps = 0;
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            comps += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        comps
    }

    /// Text format: `p <vertices> <edges>` then 1-based `e u v` lines.
    pub fn to_edge_list_text(&self) -> String {
        let mut out = format!("p {} {}\n", self.n, self.edges.len());
        for &(a, b) in &self.edges {
            out.push_str(&format!("e {} {}\n", a + 1, b + 1));
        }
        out
    }

    pub fn from_edge_list_text(text: &str) -> Result<OrderedGraph> {
        let mut n = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("p") => {
                    let v: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::invalid("graph text", format!("bad p line {}", lineno + 1)))?;
                    n = Some(v);
                }
                Some("e") => {
                    let a: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::invalid("graph text", format!("bad e line {}", lineno + 1)))?;
                    let b: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::invalid("graph text", format!("bad e line {}", lineno + 1)))?;
                    if a == 0 || b == 0 {
                        return Err(Error::invalid("graph text", "vertices are 1-based"));
                    }
                    edges.push((a - 1, b - 1));
                }
                _ => return Err(Error::invalid("graph text", format!("unrecognized line {}", lineno + 1))),
            }
        }
        let n = n.ok_or_else(|| Error::invalid("graph text", "missing p line"))?;
        OrderedGraph::new(n, edges)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson { n: self.n, edges: self.edges.clone() }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("graph serialization")
    }

    pub fn from_json_str(s: &str) -> Result<OrderedGraph> {
        let json: GraphJson = serde_json::from_str(s)?;
        OrderedGraph::new(json.n, json.edges)
    }

    /// The graph as a structure with one symmetric binary relation `E`.
    pub fn to_structure(&self) -> Structure {
        let vocab = Vocabulary::new(vec![("E".into(), 2)]).expect("graph vocabulary");
        let tuples = self.edges.iter().flat_map(|&(a, b)| [vec![a, b], vec![b, a]]).collect();
        Structure::from_parts(vocab, self.n, vec![tuples]).expect("graph structure")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

/// The complete graph on `n` vertices.
pub fn complete_graph(n: usize) -> OrderedGraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            edges.push((a, b));
        }
    }
    OrderedGraph::new(n, edges).expect("complete graph")
}

/// The complete bipartite graph on `m + m` vertices.
pub fn complete_bipartite(m: usize) -> OrderedGraph {
    let mut edges = Vec::new();
    for a in 0..m {
        for b in 0..m {
            edges.push((a, m + b));
        }
    }
    OrderedGraph::new(2 * m, edges).expect("complete bipartite graph")
}

/// The Petersen graph (outer 5-cycle, inner pentagram, spokes).
pub fn petersen() -> OrderedGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, 5 + i));
    }
    OrderedGraph::new(10, edges).expect("petersen graph")
}

/// Randomized pairing-model generation of a connected `ell`-regular simple
/// graph with girth at least `min_girth`, repaired by degree-preserving edge
/// swaps. All randomness derives from `seed`; `budget` caps the total number
/// of repair steps across restarts. Returns `None` when the budget runs out.
pub fn generate_regular(
    ell: usize,
    v_count: usize,
    min_girth: usize,
    seed: u64,
    budget: u64,
) -> Result<Option<OrderedGraph>> {
    if ell == 0 || v_count == 0 {
        return Err(Error::invalid("regular graph", "need positive degree and order"));
    }
    if ell * v_count % 2 == 1 {
        return Err(Error::invalid("regular graph", format!("{ell}-regular on {v_count} vertices violates parity")));
    }
    if ell >= v_count {
        return Err(Error::invalid("regular graph", "degree must be below the vertex count"));
    }
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut steps_left = budget;
    loop {
        let attempt_seed = master.random::<u64>();
        let mut rng = ChaCha8Rng::seed_from_u64(attempt_seed);
        let Some(mut graph) = random_pairing(ell, v_count, &mut rng, &mut steps_left) else {
            if steps_left == 0 {
                return Ok(None);
            }
            continue;
        };
        // Hill-climb on (components, short-cycle pressure) via edge swaps.
        loop {
            if steps_left == 0 {
                return Ok(None);
            }
            let score = repair_score(&graph, min_girth);
            if score == (0, 0) {
                break;
            }
            steps_left -= 1;
            let Some(next) = try_swap(&graph, min_girth, score, &mut rng) else {
                // Plateau stuck: restart from a fresh pairing.
                break;
            };
            graph = next;
        }
        if verify_regular(&graph, ell, min_girth) {
            return Ok(Some(graph));
        }
        if steps_left == 0 {
            return Ok(None);
        }
    }
}

/// Independent checkers: degree scan, connectivity, BFS girth.
fn verify_regular(g: &OrderedGraph, ell: usize, min_girth: usize) -> bool {
    g.is_regular(ell) && g.is_connected() && g.girth().is_none_or(|girth| girth >= min_girth)
}

fn random_pairing(
    ell: usize,
    v_count: usize,
    rng: &mut ChaCha8Rng,
    steps_left: &mut u64,
) -> Option<OrderedGraph> {
    'attempt: loop {
        if *steps_left == 0 {
            return None;
        }
        *steps_left = steps_left.saturating_sub(1);
        let mut stubs: Vec<usize> = (0..v_count).flat_map(|v| std::iter::repeat_n(v, ell)).collect();
        stubs.shuffle(rng);
        let mut seen = HashSet::new();
        let mut edges = Vec::with_capacity(stubs.len() / 2);
        for pair in stubs.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b || !seen.insert((a.min(b), a.max(b))) {
                continue 'attempt;
            }
            edges.push((a, b));
        }
        return OrderedGraph::new(v_count, edges).ok();
    }
}

/// `(components - 1, pressure)`: pressure sums squared girth deficits over
/// edges lying on short cycles.
fn repair_score(g: &OrderedGraph, min_girth: usize) -> (usize, usize) {
    let comps = g.component_count() - 1;
    let mut pressure = 0usize;
    for e in 0..g.edge_count() {
        if let Some(len) = g.cycle_length_through(e) {
            if len < min_girth {
                let deficit = min_girth - len;
                pressure += deficit * deficit;
            }
        }
    }
    (comps, pressure)
}

fn try_swap(
    g: &OrderedGraph,
    min_girth: usize,
    current: (usize, usize),
    rng: &mut ChaCha8Rng,
) -> Option<OrderedGraph> {
    // Bias the first edge toward a short cycle (or a random edge when the
    // problem is connectivity).
    let short: Vec<usize> = (0..g.edge_count())
        .filter(|&e| g.cycle_length_through(e).is_some_and(|len| len < min_girth))
        .collect();
    for _ in 0..40 {
        let e1 = if !short.is_empty() && rng.random_bool(0.9) {
            short[rng.random_range(0..short.len())]
        } else {
            rng.random_range(0..g.edge_count())
        };
        let e2 = rng.random_range(0..g.edge_count());
        let (a, b) = g.edge(e1);
        let (c, d) = g.edge(e2);
        if [a, b].iter().any(|x| [c, d].contains(x)) {
            continue;
        }
        let orientations = if rng.random_bool(0.5) {
            [((a, c), (b, d)), ((a, d), (b, c))]
        } else {
            [((a, d), (b, c)), ((a, c), (b, d))]
        };
        for (new1, new2) in orientations {
            if g.edge_id(new1.0, new1.1).is_some() || g.edge_id(new2.0, new2.1).is_some() {
                continue;
            }
            let mut edges: Vec<(usize, usize)> = g
                .edges()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != e1 && i != e2)
                .map(|(_, &e)| e)
                .collect();
            edges.push(new1);
            edges.push(new2);
            let Ok(candidate) = OrderedGraph::new(g.vertex_count(), edges) else {
                continue;
            };
            let score = repair_score(&candidate, min_girth);
            let accept = score < current || (score == current && rng.random_bool(0.3));
            if accept {
                return Some(candidate);
            }
        }
    }
    None
}

/// A nonempty simple path given by its vertex sequence and edge ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Path {
    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn endpoint(&self) -> usize {
        *self.vertices.last().expect("paths are nonempty")
    }

    pub fn from_vertices(g: &OrderedGraph, vertices: Vec<usize>) -> Result<Path> {
        if vertices.len() < 2 {
            return Err(Error::invalid("path", "needs at least one edge"));
        }
        let mut seen = HashSet::new();
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(Error::invalid("path", "vertices repeat"));
            }
        }
        let mut edges = Vec::with_capacity(vertices.len() - 1);
        for w in vertices.windows(2) {
            let id = g
                .edge_id(w[0], w[1])
                .ok_or_else(|| Error::invalid("path", format!("{} and {} are not adjacent", w[0], w[1])))?;
            edges.push(id);
        }
        Ok(Path { vertices, edges })
    }
}

/// Checks the path-system contract: nonempty simple paths from `u`, pairwise
/// edge-disjoint (hence distinct first edges), avoiding the forbidden edges.
pub fn validate_path_system(
    g: &OrderedGraph,
    u: usize,
    forbidden: &BTreeSet<usize>,
    system: &[Path],
) -> Result<()> {
    let mut used = HashSet::new();
    for p in system {
        if p.vertices.first() != Some(&u) {
            return Err(Error::Internal("path does not start at the robber vertex".into()));
        }
        if p.edges.is_empty() {
            return Err(Error::Internal("zero-length path in a system".into()));
        }
        let rebuilt = Path::from_vertices(g, p.vertices.clone())
            .map_err(|e| Error::Internal(format!("invalid path in system: {e}")))?;
        if rebuilt.edges != p.edges {
            return Err(Error::Internal("path edge ids do not match vertices".into()));
        }
        for &e in &p.edges {
            if forbidden.contains(&e) {
                return Err(Error::Internal("path uses a forbidden edge".into()));
            }
            if !used.insert(e) {
                return Err(Error::Internal("paths share an edge".into()));
            }
        }
    }
    Ok(())
}

/// All simple paths from `u` avoiding `forbidden`, in DFS order.
pub(crate) fn simple_paths_from(
    g: &OrderedGraph,
    u: usize,
    forbidden: &BTreeSet<usize>,
    cap: usize,
) -> Result<Vec<Path>> {
    let mut out = Vec::new();
    let mut vertices = vec![u];
    let mut edges = Vec::new();
    let mut on_path = vec![false; g.vertex_count()];
    on_path[u] = true;
    fn rec(
        g: &OrderedGraph,
        forbidden: &BTreeSet<usize>,
        vertices: &mut Vec<usize>,
        edges: &mut Vec<usize>,
        on_path: &mut Vec<bool>,
        out: &mut Vec<Path>,
        cap: usize,
    ) -> Result<()> {
        let v = *vertices.last().unwrap();
        for &eid in g.incident_edges(v) {
            if forbidden.contains(&eid) {
                continue;
            }
            let w = g.other_endpoint(eid, v);
            if on_path[w] {
                continue;
            }
            vertices.push(w);
            edges.push(eid);
            on_path[w] = true;
            if out.len() >= cap {
                return Err(Error::BudgetExceeded(format!("more than {cap} simple paths")));
            }
            out.push(Path { vertices: vertices.clone(), edges: edges.clone() });
            rec(g, forbidden, vertices, edges, on_path, out, cap)?;
            on_path[w] = false;
            edges.pop();
            vertices.pop();
        }
        Ok(())
    }
    rec(g, forbidden, &mut vertices, &mut edges, &mut on_path, &mut out, cap)?;
    Ok(out)
}

/// Deterministic enumeration of systems of `ell` pairwise edge-disjoint
/// simple paths from `u`, avoiding `forbidden`, with distinct first edges
/// (canonical order: strictly increasing first-edge ids, then path order).
/// Every yielded system is re-validated; endpoints are unconstrained.
pub fn disjoint_path_systems(
    g: &OrderedGraph,
    u: usize,
    forbidden: &BTreeSet<usize>,
    ell: usize,
) -> Result<Vec<Vec<Path>>> {
    let mut systems = Vec::new();
    enumerate_path_systems(g, u, forbidden, ell, 1_000_000, &mut |system| {
        validate_path_system(g, u, forbidden, system)?;
        systems.push(system.to_vec());
        Ok(true)
    })?;
    Ok(systems)
}

/// Core enumeration: calls `visit` on each system until it returns `false`.
/// `path_cap` guards the path pre-enumeration.
pub(crate) fn enumerate_path_systems(
    g: &OrderedGraph,
    u: usize,
    forbidden: &BTreeSet<usize>,
    ell: usize,
    path_cap: usize,
    visit: &mut dyn FnMut(&[Path]) -> Result<bool>,
) -> Result<()> {
    let all_paths = simple_paths_from(g, u, forbidden, path_cap)?;
    // Group by first edge, keeping ids ascending.
    let mut by_first: Vec<(usize, Vec<usize>)> = Vec::new();
    for (idx, p) in all_paths.iter().enumerate() {
        let fe = p.edges[0];
        match by_first.iter_mut().find(|(e, _)| *e == fe) {
            Some((_, v)) => v.push(idx),
            None => by_first.push((fe, vec![idx])),
        }
    }
    by_first.sort_by_key(|(e, _)| *e);
    let mut chosen: Vec<usize> = Vec::with_capacity(ell);
    let mut used_edges: HashSet<usize> = HashSet::new();

    fn rec(
        all_paths: &[Path],
        by_first: &[(usize, Vec<usize>)],
        group_start: usize,
        ell: usize,
        chosen: &mut Vec<usize>,
        used_edges: &mut HashSet<usize>,
        visit: &mut dyn FnMut(&[Path]) -> Result<bool>,
    ) -> Result<bool> {
        if chosen.len() == ell {
            let system: Vec<Path> = chosen.iter().map(|&i| all_paths[i].clone()).collect();
            return visit(&system);
        }
        // Not enough remaining first-edge groups to finish: prune.
        if by_first.len() - group_start < ell - chosen.len() {
            return Ok(true);
        }
        for gi in group_start..by_first.len() {
            for &pi in &by_first[gi].1 {
                let path = &all_paths[pi];
                if path.edges.iter().any(|e| used_edges.contains(e)) {
                    continue;
                }
                for &e in &path.edges {
                    used_edges.insert(e);
                }
                chosen.push(pi);
                let keep_going =
                    rec(all_paths, by_first, gi + 1, ell, chosen, used_edges, visit)?;
                chosen.pop();
                for e in &path.edges {
                    used_edges.remove(e);
                }
                if !keep_going {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
    rec(&all_paths, &by_first, 0, ell, &mut chosen, &mut used_edges, visit)?;
    Ok(())
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(k);
    fn rec(items: &[usize], start: usize, k: usize, pick: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pick.len() == k {
            out.push(pick.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - pick.len() {
                break;
            }
            pick.push(items[i]);
            rec(items, i + 1, k, pick, out);
            pick.pop();
        }
    }
    rec(items, 0, k, &mut pick, &mut out);
    out
}

/// Enumerates connected `ell`-regular graphs on `v_count` vertices up to
/// isomorphism, by backtracking over adjacency choices and deduplicating with
/// the exact isomorphism search.
pub fn enumerate_connected_regular(ell: usize, v_count: usize) -> Result<Vec<OrderedGraph>> {
    if ell * v_count % 2 == 1 || ell >= v_count {
        return Ok(Vec::new());
    }
    if v_count > 10 {
        return Err(Error::BudgetExceeded("regular enumeration guarded to 10 vertices".into()));
    }

    fn rec(
        ell: usize,
        v_count: usize,
        vertex: usize,
        degrees: &mut Vec<usize>,
        edges: &mut Vec<(usize, usize)>,
        reps: &mut Vec<OrderedGraph>,
    ) -> Result<()> {
        if vertex == v_count {
            let g = OrderedGraph::new(v_count, edges.clone()).expect("valid candidate");
            if g.is_connected() {
                let gs = g.to_structure();
                let mut known = false;
                for rep in reps.iter() {
                    if crate::search::find_isomorphism(&rep.to_structure(), &gs)?.is_some() {
                        known = true;
                        break;
                    }
                }
                if !known {
                    reps.push(g);
                }
            }
            return Ok(());
        }
        // All of `vertex`'s missing adjacencies go to higher-indexed vertices.
        let need = ell - degrees[vertex];
        let candidates: Vec<usize> = ((vertex + 1)..v_count).filter(|&w| degrees[w] < ell).collect();
        for pick in combinations(&candidates, need) {
            for &w in &pick {
                degrees[vertex] += 1;
                degrees[w] += 1;
                edges.push((vertex, w));
            }
            rec(ell, v_count, vertex + 1, degrees, edges, reps)?;
            for &w in &pick {
                degrees[vertex] -= 1;
                degrees[w] -= 1;
                edges.pop();
            }
        }
        Ok(())
    }

    let mut reps = Vec::new();
    let mut degrees = vec![0usize; v_count];
    let mut edges = Vec::new();
    rec(ell, v_count, 0, &mut degrees, &mut edges, &mut reps)?;
    Ok(reps)
}

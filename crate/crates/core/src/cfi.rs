//! The CFI construction over ordered regular graphs, and the switch-set
//! calculus of its edge-preserving bijections.
//!
//! The universe doubles every edge: element `2e + (i-1)` stands for `(e, i)`
//! with `i ∈ {1,2}`. Every vertex contributes one parity gadget; collecting
//! the even gadgets into `R0` (and the odd ones at the twisted vertices)
//! yields the two instance classes the solvers separate.
//!
//! Edge-preserving bijections are stored purely as the set of edges they
//! flip, which makes the full bijection space enumerable and path switching
//! linear in the path length.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{OrderedGraph, Path};
use crate::structure::{PartialMap, Structure, Vocabulary};

/// A CFI structure together with the graph it came from.
#[derive(Clone, Debug)]
pub struct CfiInstance {
    graph: OrderedGraph,
    twisted: BTreeSet<usize>,
    ell: usize,
    structure: Structure,
}

/// An edge-preserving bijection, encoded by the set of flipped edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SwitchSet {
    switched: BTreeSet<usize>,
}

impl SwitchSet {
    pub fn new(edges: impl IntoIterator<Item = usize>) -> Self {
        SwitchSet { switched: edges.into_iter().collect() }
    }

    pub fn identity() -> Self {
        SwitchSet::default()
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.switched.contains(&edge)
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.switched.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.switched.len()
    }

    pub fn is_empty(&self) -> bool {
        self.switched.is_empty()
    }

    /// Sorted edge-index list, the serialization format for switch sets.
    pub fn to_vec(&self) -> Vec<usize> {
        self.switched.iter().copied().collect()
    }

    pub fn symmetric_difference(&self, edges: &[usize]) -> SwitchSet {
        let mut out = self.switched.clone();
        for &e in edges {
            if !out.remove(&e) {
                out.insert(e);
            }
        }
        SwitchSet { switched: out }
    }
}

/// Builds the CFI structure for `graph` with the gadgets at `twisted`
/// vertices flipped into the odd relation.
pub fn build_cfi(graph: &OrderedGraph, twisted: impl IntoIterator<Item = usize>) -> Result<CfiInstance> {
    let Some(ell) = graph.regular_degree() else {
        return Err(Error::Precondition("CFI construction needs a regular graph".into()));
    };
    if !graph.is_connected() {
        return Err(Error::Precondition("CFI construction needs a connected graph".into()));
    }
    if graph.vertex_count() == 0 {
        return Err(Error::Precondition("CFI construction needs a nonempty graph".into()));
    }
    let twisted: BTreeSet<usize> = twisted.into_iter().collect();
    for &v in &twisted {
        if v >= graph.vertex_count() {
            return Err(Error::OutOfUniverse { element: v, universe: graph.vertex_count() });
        }
    }
    let mut even_rel = Vec::new();
    let mut odd_rel = Vec::new();
    for v in 0..graph.vertex_count() {
        let (plain, tilde) = gadget_tuples(graph, ell, v);
        if twisted.contains(&v) {
            even_rel.extend(tilde.iter().cloned());
            odd_rel.extend(plain.iter().cloned());
        } else {
            even_rel.extend(plain.iter().cloned());
            odd_rel.extend(tilde.iter().cloned());
        }
    }
    let vocab = Vocabulary::new(vec![("R0".into(), ell), ("R1".into(), ell)])?;
    let structure =
        Structure::from_parts(vocab, 2 * graph.edge_count(), vec![even_rel, odd_rel])?;
    Ok(CfiInstance { graph: graph.clone(), twisted, ell, structure })
}

/// The untwisted instance (`U = ∅`).
pub fn build_even(graph: &OrderedGraph) -> Result<CfiInstance> {
    build_cfi(graph, [])
}

/// The instance twisted at the least vertex (`U = {v0}`).
pub fn build_odd(graph: &OrderedGraph) -> Result<CfiInstance> {
    build_cfi(graph, [0])
}

/// The even- and odd-parity tuple sets of the gadget at `v`, both in the
/// incidence order of `v`.
pub fn gadget_tuples(graph: &OrderedGraph, ell: usize, v: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let incident = graph.incident_edges(v);
    debug_assert_eq!(incident.len(), ell);
    let mut plain = Vec::with_capacity(1 << (ell - 1));
    let mut tilde = Vec::with_capacity(1 << (ell - 1));
    for code in 0u32..(1 << ell) {
        // Bit j set means (e_j, 2), clear means (e_j, 1).
        let tuple: Vec<usize> =
            incident.iter().enumerate().map(|(j, &e)| element_id(e, 1 + (code >> j & 1) as usize)).collect();
        // Σ i_j with i_j ∈ {1,2} is even iff ℓ and the number of 2s disagree
        // in parity only through ℓ itself.
        let twos = code.count_ones() as usize;
        if (ell + twos).is_multiple_of(2) {
            plain.push(tuple);
        } else {
            tilde.push(tuple);
        }
    }
    (plain, tilde)
}

/// Element id of `(edge, i)` with `i ∈ {1, 2}`.
pub fn element_id(edge: usize, i: usize) -> usize {
    debug_assert!(i == 1 || i == 2);
    2 * edge + (i - 1)
}

/// Inverse of [`element_id`].
pub fn element_parts(id: usize) -> (usize, usize) {
    (id / 2, id % 2 + 1)
}

impl CfiInstance {
    pub fn graph(&self) -> &OrderedGraph {
        &self.graph
    }

    pub fn twisted(&self) -> &BTreeSet<usize> {
        &self.twisted
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn universe_size(&self) -> usize {
        self.structure.universe_size()
    }

    /// The number of switched edges at `v`.
    pub fn switching_number(&self, s: &SwitchSet, v: usize) -> usize {
        self.graph.incident_edges(v).iter().filter(|e| s.contains(**e)).count()
    }

    /// Vertices with odd switching number; always of even cardinality.
    pub fn odd_set(&self, s: &SwitchSet) -> BTreeSet<usize> {
        (0..self.graph.vertex_count())
            .filter(|&v| self.switching_number(s, v) % 2 == 1)
            .collect()
    }

    pub fn is_good(&self, s: &SwitchSet) -> bool {
        let odd = self.odd_set(s);
        odd.is_empty() || (odd.len() == 2 && odd.contains(&0))
    }

    /// The unique vertex whose gadget the bijection fails to preserve:
    /// `v0` when the odd set is empty, its partner otherwise.
    pub fn twist(&self, s: &SwitchSet) -> Result<usize> {
        let odd = self.odd_set(s);
        if odd.is_empty() {
            return Ok(0);
        }
        if odd.len() == 2 && odd.contains(&0) {
            return Ok(*odd.iter().find(|&&v| v != 0).expect("two-element odd set"));
        }
        Err(Error::Precondition(format!("switch set is not good (odd set {odd:?})")))
    }

    pub fn is_good_for(&self, s: &SwitchSet, pebbled: &BTreeSet<usize>) -> bool {
        match self.twist(s) {
            Ok(tw) => {
                self.is_good(s)
                    && self.graph.incident_edges(tw).iter().all(|e| !pebbled.contains(e))
            }
            Err(_) => false,
        }
    }

    /// Switches the bijection along a path starting at its twist; the twist
    /// relocates to the other end.
    pub fn switch_along_path(&self, s: &SwitchSet, path: &Path) -> Result<SwitchSet> {
        let tw = self.twist(s)?;
        if path.start() != tw {
            return Err(Error::Precondition(format!(
                "path starts at {} but the twist is at {tw}",
                path.start()
            )));
        }
        let next = s.symmetric_difference(&path.edges);
        // Interior vertices gain two switched edges, the ends gain one.
        if !self.is_good(&next) {
            return Err(Error::Internal("path switching produced a non-good bijection".into()));
        }
        let new_twist = self.twist(&next)?;
        if new_twist != path.endpoint() {
            return Err(Error::Internal(format!(
                "twist moved to {new_twist}, expected the path end {}",
                path.endpoint()
            )));
        }
        Ok(next)
    }

    /// The encoded bijection as a total map on the universe.
    pub fn to_bijection(&self, s: &SwitchSet) -> PartialMap {
        let mut map = PartialMap::new();
        for e in 0..self.graph.edge_count() {
            let (one, two) = (element_id(e, 1), element_id(e, 2));
            if s.contains(e) {
                map.insert(one, two);
                map.insert(two, one);
            } else {
                map.insert(one, one);
                map.insert(two, two);
            }
        }
        map
    }

    /// The restriction `f ↾ (F × [2])`.
    pub fn restrict(&self, s: &SwitchSet, pebbled: &BTreeSet<usize>) -> PartialMap {
        let mut map = PartialMap::new();
        for &e in pebbled {
            let (one, two) = (element_id(e, 1), element_id(e, 2));
            if s.contains(e) {
                map.insert(one, two);
                map.insert(two, one);
            } else {
                map.insert(one, one);
                map.insert(two, two);
            }
        }
        map
    }

    /// Applies the bijection to one element.
    pub fn map_element(&self, s: &SwitchSet, element: usize) -> usize {
        let (e, i) = element_parts(element);
        if s.contains(e) {
            element_id(e, 3 - i)
        } else {
            element
        }
    }

    /// The edges pebbled by an assignment range (`F_α`).
    pub fn pebbled_edges(&self, range: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        range.into_iter().map(|el| element_parts(el).0).collect()
    }

    /// Image of one gadget's tuple set under the restriction of the bijection
    /// to that gadget, used to state the switching-number facts directly.
    pub fn gadget_image(&self, s: &SwitchSet, tuples: &[Vec<usize>]) -> BTreeSet<Vec<usize>> {
        tuples
            .iter()
            .map(|t| t.iter().map(|&el| self.map_element(s, el)).collect())
            .collect()
    }
}

/// Every subset of edges encodes a distinct edge-preserving bijection, and
/// every edge-preserving bijection arises this way.
pub fn switch_set_from_bijection(inst: &CfiInstance, f: &PartialMap) -> Result<SwitchSet> {
    let mut flipped = BTreeSet::new();
    for e in 0..inst.graph().edge_count() {
        let (one, two) = (element_id(e, 1), element_id(e, 2));
        match (f.get(one), f.get(two)) {
            (Some(a), Some(b)) if a == one && b == two => {}
            (Some(a), Some(b)) if a == two && b == one => {
                flipped.insert(e);
            }
            _ => {
                return Err(Error::invalid("bijection", format!("not edge preserving at edge {e}")));
            }
        }
    }
    Ok(SwitchSet { switched: flipped })
}

//! Exhaustive homomorphism and isomorphism search.
//!
//! Both searches are complete backtracking: homomorphism search picks the
//! most constrained element first with forward checking, isomorphism search
//! prunes candidates through an iterated element-invariant refinement. Tie
//! breaks are always by element index so witnesses are reproducible.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::structure::{is_partial_isomorphism, PartialMap, Structure};

/// Occurrence table: for each element of `A`, the `(symbol, tuple)` pairs it
/// appears in.
fn occurrences(a: &Structure) -> Vec<Vec<(usize, usize)>> {
    let mut occ = vec![Vec::new(); a.universe_size()];
    for (si, rel) in a.relations().iter().enumerate() {
        for (ti, t) in rel.tuples().iter().enumerate() {
            for &x in t {
                if occ[x].last() != Some(&(si, ti)) {
                    occ[x].push((si, ti));
                }
            }
        }
    }
    occ
}

/// Finds a total homomorphism `A → B`, or `None` when none exists.
pub fn find_homomorphism(a: &Structure, b: &Structure) -> Result<Option<PartialMap>> {
    if a.vocab() != b.vocab() {
        return Err(Error::VocabMismatch("homomorphism search needs a common vocabulary".into()));
    }
    let n = a.universe_size();
    if n == 0 {
        return Ok(Some(PartialMap::new()));
    }
    if b.universe_size() == 0 {
        return Ok(None);
    }
    let occ = occurrences(a);
    let mut state = HomState {
        a,
        b,
        occ: &occ,
        assignment: vec![usize::MAX; n],
        domains: vec![vec![true; b.universe_size()]; n],
        assigned: 0,
    };
    if state.search() {
        let map = PartialMap::from_pairs(state.assignment.iter().enumerate().map(|(x, &v)| (x, v)))
            .expect("assignment is a map");
        debug_assert!(verify_homomorphism(a, b, &map));
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

pub fn verify_homomorphism(a: &Structure, b: &Structure, h: &PartialMap) -> bool {
    a.relations().iter().zip(b.relations()).all(|(ra, rb)| {
        ra.tuples().iter().all(|t| {
            h.apply_tuple(t).is_some_and(|img| rb.contains(&img))
        })
    })
}

struct HomState<'a> {
    a: &'a Structure,
    b: &'a Structure,
    occ: &'a [Vec<(usize, usize)>],
    assignment: Vec<usize>,
    domains: Vec<Vec<bool>>,
    assigned: usize,
}

impl HomState<'_> {
    fn search(&mut self) -> bool {
        if self.assigned == self.assignment.len() {
            return true;
        }
        // Most constrained element first, tie break by index.
        let (x, _) = (0..self.assignment.len())
            .filter(|&x| self.assignment[x] == usize::MAX)
            .map(|x| (x, self.domains[x].iter().filter(|&&ok| ok).count()))
            .min_by_key(|&(x, c)| (c, x))
            .expect("unassigned element exists");
        let candidates: Vec<usize> =
            (0..self.b.universe_size()).filter(|&v| self.domains[x][v]).collect();
        for v in candidates {
            if self.consistent(x, v) {
                self.assignment[x] = v;
                self.assigned += 1;
                let trail = self.forward_check(x);
                if let Some(removed) = trail {
                    if self.search() {
                        return true;
                    }
                    for (y, w) in removed {
                        self.domains[y][w] = true;
                    }
                }
                self.assignment[x] = usize::MAX;
                self.assigned -= 1;
            }
        }
        false
    }

    /// Every fully assigned tuple through `x` must land in the target relation.
    fn consistent(&self, x: usize, v: usize) -> bool {
        for &(si, ti) in &self.occ[x] {
            let tuple = &self.a.relations()[si].tuples()[ti];
            let mut image = Vec::with_capacity(tuple.len());
            let mut complete = true;
            for &y in tuple {
                let w = if y == x { v } else { self.assignment[y] };
                if w == usize::MAX {
                    complete = false;
                    break;
                }
                image.push(w);
            }
            if complete && !self.b.relations()[si].contains(&image) {
                return false;
            }
        }
        true
    }

    /// Prunes domains of elements sharing a tuple with `x` that now have a
    /// single unassigned slot. Returns the removal trail, or `None` on wipeout
    /// (in which case the trail is already rolled back).
    fn forward_check(&mut self, x: usize) -> Option<Vec<(usize, usize)>> {
        let mut removed = Vec::new();
        for &(si, ti) in &self.occ[x] {
            let tuple = self.a.relations()[si].tuples()[ti].clone();
            let unassigned: Vec<usize> =
                tuple.iter().copied().filter(|&y| self.assignment[y] == usize::MAX).collect();
            if unassigned.len() != 1 {
                continue;
            }
            let y = unassigned[0];
            let mut alive = false;
            for w in 0..self.b.universe_size() {
                if !self.domains[y][w] {
                    continue;
                }
                let image: Vec<usize> = tuple
                    .iter()
                    .map(|&z| if z == y { w } else { self.assignment[z] })
                    .collect();
                if self.b.relations()[si].contains(&image) {
                    alive = true;
                } else {
                    self.domains[y][w] = false;
                    removed.push((y, w));
                }
            }
            if !alive {
                for &(z, w) in &removed {
                    self.domains[z][w] = true;
                }
                return None;
            }
        }
        Some(removed)
    }
}

/// Iterated invariant refinement used to prune isomorphism candidates.
/// Elements with different stable invariants can never correspond.
type Signature = (u64, Vec<(usize, usize, Vec<u64>)>);

fn invariant_colors(s: &Structure) -> Vec<u64> {
    let n = s.universe_size();
    let mut colors = vec![0u64; n];
    for _ in 0..n.max(1) {
        let mut sigs: Vec<Signature> = Vec::with_capacity(n);
        for x in 0..n {
            let mut local = Vec::new();
            for (si, rel) in s.relations().iter().enumerate() {
                for t in rel.tuples() {
                    for (pos, &y) in t.iter().enumerate() {
                        if y == x {
                            local.push((si, pos, t.iter().map(|&z| colors[z]).collect::<Vec<_>>()));
                        }
                    }
                }
            }
            local.sort();
            sigs.push((colors[x], local));
        }
        // Rank signatures by sorted order so colors stay comparable between
        // two structures refined independently.
        let mut distinct: Vec<&Signature> = sigs.iter().collect();
        distinct.sort();
        distinct.dedup();
        let order: BTreeMap<&Signature, u64> =
            distinct.into_iter().enumerate().map(|(i, s)| (s, i as u64)).collect();
        let new_colors: Vec<u64> = sigs.iter().map(|sig| order[sig]).collect();
        let stable = {
            let mut classes_old: Vec<u64> = colors.clone();
            let mut classes_new: Vec<u64> = new_colors.clone();
            classes_old.sort();
            classes_old.dedup();
            classes_new.sort();
            classes_new.dedup();
            classes_old.len() == classes_new.len()
        };
        colors = new_colors;
        if stable {
            break;
        }
    }
    colors
}

/// Finds a total bijection that is a partial isomorphism in both directions,
/// or `None`. Complete via pruned backtracking.
pub fn find_isomorphism(a: &Structure, b: &Structure) -> Result<Option<PartialMap>> {
    if a.vocab() != b.vocab() {
        return Err(Error::VocabMismatch("isomorphism search needs a common vocabulary".into()));
    }
    let n = a.universe_size();
    if n != b.universe_size() {
        return Ok(None);
    }
    for (ra, rb) in a.relations().iter().zip(b.relations()) {
        if ra.len() != rb.len() {
            return Ok(None);
        }
    }
    if n == 0 {
        return Ok(Some(PartialMap::new()));
    }
    let ca = invariant_colors(a);
    let cb = invariant_colors(b);
    let mut hist_a: HashMap<u64, usize> = HashMap::new();
    let mut hist_b: HashMap<u64, usize> = HashMap::new();
    for &c in &ca {
        *hist_a.entry(c).or_default() += 1;
    }
    for &c in &cb {
        *hist_b.entry(c).or_default() += 1;
    }
    if hist_a != hist_b {
        return Ok(None);
    }

    let occ = occurrences(a);
    let mut state = IsoState {
        a,
        b,
        occ: &occ,
        ca: &ca,
        cb: &cb,
        forward: vec![usize::MAX; n],
        used: vec![false; n],
        assigned: 0,
    };
    if state.search() {
        let map = PartialMap::from_pairs(state.forward.iter().enumerate().map(|(x, &v)| (x, v)))
            .expect("bijection");
        debug_assert!(is_partial_isomorphism(a, b, &map).unwrap_or(false));
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

struct IsoState<'a> {
    a: &'a Structure,
    b: &'a Structure,
    occ: &'a [Vec<(usize, usize)>],
    ca: &'a [u64],
    cb: &'a [u64],
    forward: Vec<usize>,
    used: Vec<bool>,
    assigned: usize,
}

impl IsoState<'_> {
    fn search(&mut self) -> bool {
        let n = self.forward.len();
        if self.assigned == n {
            return true;
        }
        // Prefer elements co-occurring with already mapped ones, so gadget
        // constraints bind as early as possible.
        let x = (0..n)
            .filter(|&x| self.forward[x] == usize::MAX)
            .max_by_key(|&x| {
                let linked = self.occ[x]
                    .iter()
                    .map(|&(si, ti)| {
                        self.a.relations()[si].tuples()[ti]
                            .iter()
                            .filter(|&&y| self.forward[y] != usize::MAX)
                            .count()
                    })
                    .sum::<usize>();
                (linked, usize::MAX - x)
            })
            .expect("unassigned element exists");
        for v in 0..n {
            if self.used[v] || self.cb[v] != self.ca[x] {
                continue;
            }
            if self.extension_ok(x, v) {
                self.forward[x] = v;
                self.used[v] = true;
                self.assigned += 1;
                if self.search() {
                    return true;
                }
                self.forward[x] = usize::MAX;
                self.used[v] = false;
                self.assigned -= 1;
            }
        }
        false
    }

    /// Checks the partial isomorphism condition on all tuples over the mapped
    /// domain that involve the new pair, in both directions.
    fn extension_ok(&self, x: usize, v: usize) -> bool {
        let dom: Vec<usize> = (0..self.forward.len())
            .filter(|&y| self.forward[y] != usize::MAX || y == x)
            .collect();
        let get = |y: usize| if y == x { v } else { self.forward[y] };
        for (si, rel_a) in self.a.relations().iter().enumerate() {
            let rel_b = &self.b.relations()[si];
            let r = rel_a.arity();
            // Enumerate tuples over dom containing x at least once.
            let mut counters = vec![0usize; r];
            'tuples: loop {
                let tuple: Vec<usize> = counters.iter().map(|&i| dom[i]).collect();
                if tuple.contains(&x) {
                    let image: Vec<usize> = tuple.iter().map(|&y| get(y)).collect();
                    if rel_a.contains(&tuple) != rel_b.contains(&image) {
                        return false;
                    }
                }
                for slot in counters.iter_mut() {
                    *slot += 1;
                    if *slot < dom.len() {
                        continue 'tuples;
                    }
                    *slot = 0;
                }
                break;
            }
        }
        true
    }
}

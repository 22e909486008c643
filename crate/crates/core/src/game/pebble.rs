//! Exact solver for the k-pebble game with family moves.
//!
//! The game on structures `A`, `B` proceeds in rounds from a position
//! `(α, β)`. Spoiler first wins any position whose map `α ↦ β` is not a
//! partial isomorphism. Otherwise he picks a side, an arity `r` and distinct
//! variables `y⃗`; Duplicator answers with a bijection (onto the side he
//! attacks from); Spoiler places an r-tuple; Duplicator serves a set `P` of
//! response tuples whose closure under the family contains the bijection
//! image of Spoiler's tuple; Spoiler picks one member of `P` and the position
//! updates by overwriting `y⃗`.
//!
//! The solver computes the greatest fixpoint of Duplicator-safe positions by
//! value iteration; the pass at which a position dies is the number of rounds
//! Spoiler needs from it. Duplicator's served set is canonical: the set of
//! all safe continuations. Any winning response is one of its subsets and the
//! closure operator is monotone, so serving the whole set is optimal; the
//! naive subset-enumerating oracle in the test suite re-derives this.
//!
//! Positions are indexed arithmetically (one digit per pebble) and response
//! sets are bitmasks over the r-tuple space, so the inner loop is integer
//! work; closures of response masks are memoized per distinct mask.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::structure::{is_partial_isomorphism, PartialMap, Structure};

/// Which bijections Duplicator may play.
#[derive(Clone, Debug)]
pub enum BijectionMode {
    /// All bijections between the two universes (guarded by size).
    Full,
    /// A supplied set, as image vectors `A → B`. Sound for Duplicator-win
    /// certificates; a Spoiler verdict in this mode only means no supplied
    /// bijection works.
    Restricted(Vec<Vec<usize>>),
}

#[derive(Clone, Debug)]
pub struct PgConfig {
    pub k: usize,
    pub family: Family,
    /// Allowed move arities (default `1..=k`).
    pub move_arities: Vec<usize>,
    pub bijections: BijectionMode,
    /// Stop after this many passes and report a bounded verdict.
    pub round_bound: Option<usize>,
    /// Guard for full bijection enumeration.
    pub max_full_universe: usize,
}

impl PgConfig {
    pub fn new(k: usize, family: Family) -> PgConfig {
        PgConfig {
            k,
            family,
            move_arities: (1..=k).collect(),
            bijections: BijectionMode::Full,
            round_bound: None,
            max_full_universe: 6,
        }
    }

    pub fn with_arities(mut self, arities: Vec<usize>) -> PgConfig {
        self.move_arities = arities;
        self
    }

    pub fn with_bijections(mut self, mode: BijectionMode) -> PgConfig {
        self.bijections = mode;
        self
    }

    pub fn with_round_bound(mut self, bound: usize) -> PgConfig {
        self.round_bound = Some(bound);
        self
    }
}

/// A position: per pebble, the placed pair of elements.
pub type PgPosition = Vec<Option<(usize, usize)>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Duplicator answers with a bijection `B → A`; Spoiler's tuple lives in B.
    Left,
    /// Mirror image.
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PgVerdict {
    DuplicatorWins,
    SpoilerWins,
    /// Round-bounded run: Duplicator survived this many rounds; not a win
    /// claim.
    DuplicatorSurvives(usize),
}

#[derive(Clone, Debug)]
pub struct PgOutcome {
    pub verdict: PgVerdict,
    /// Positions alive at the end of iteration (the winning region when the
    /// fixpoint was reached).
    pub safe: Vec<PgPosition>,
    /// Pass index at which each dead position fell (0 = not a partial
    /// isomorphism), i.e. the number of rounds Spoiler needs.
    pub spoiler_depth: HashMap<PgPosition, usize>,
    pub fixpoint_reached: bool,
    pub passes: usize,
    /// For each safe position and move shape, one witnessing bijection index.
    pub duplicator_witness: HashMap<(PgPosition, Side, Vec<usize>), usize>,
    /// The bijections in play, as `A → B` image vectors.
    pub bijections: Vec<Vec<usize>>,
}

/// Tuple-space masks: up to 256 r-tuples.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
struct Mask([u64; 4]);

impl Mask {
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }


    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..4).flat_map(move |w| {
            let word = self.0[w];
            (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }
}

const MAX_TUPLE_SPACE: usize = 256;

/// Ordered r-tuples of distinct variables from `{1,…,k}`.
pub fn distinct_var_tuples(k: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(r);
    fn rec(k: usize, r: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == r {
            out.push(current.clone());
            return;
        }
        for v in 1..=k {
            if !current.contains(&v) {
                current.push(v);
                rec(k, r, current, out);
                current.pop();
            }
        }
    }
    rec(k, r, &mut current, &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    if n == 0 {
        out.push(Vec::new());
    } else {
        heap(n, &mut items, &mut out);
    }
    out
}

fn decode_tuple(mut idx: usize, n: usize, r: usize) -> Vec<usize> {
    let mut t = Vec::with_capacity(r);
    for _ in 0..r {
        t.push(idx % n);
        idx /= n;
    }
    t
}

fn encode_tuple(t: &[usize], n: usize) -> usize {
    let mut idx = 0usize;
    for &x in t.iter().rev() {
        idx = idx * n + x;
    }
    idx
}

/// Closure of a tuple-index mask under the family, memoized by mask.
struct MaskCloser<'a> {
    family: &'a Family,
    n: usize,
    r: usize,
    memo: HashMap<Mask, Mask>,
}

impl<'a> MaskCloser<'a> {
    fn new(family: &'a Family, n: usize, r: usize) -> Self {
        MaskCloser { family, n, r, memo: HashMap::new() }
    }

    fn close(&mut self, start: Mask) -> Mask {
        if let Some(&m) = self.memo.get(&start) {
            return m;
        }
        if matches!(self.family, Family::Nowhere) {
            self.memo.insert(start, start);
            return start;
        }
        let arity = self.family.arity();
        let mut current = start;
        loop {
            let members: Vec<Vec<usize>> =
                current.ones().map(|i| decode_tuple(i, self.n, self.r)).collect();
            let mut next = current;
            let k = members.len();
            if k > 0 {
                let mut counters = vec![0usize; arity];
                let mut args = vec![0usize; arity];
                'seq: loop {
                    let mut image_idx = 0usize;
                    let mut defined = true;
                    for coord in (0..self.r).rev() {
                        for (slot, &ci) in counters.iter().enumerate() {
                            args[slot] = members[ci][coord];
                        }
                        match self.family.eval_unchecked(self.n, &args) {
                            Some(v) => image_idx = image_idx * self.n + v,
                            None => {
                                defined = false;
                                break;
                            }
                        }
                    }
                    if defined {
                        next.set(image_idx);
                    }
                    for slot in counters.iter_mut() {
                        *slot += 1;
                        if *slot < k {
                            continue 'seq;
                        }
                        *slot = 0;
                    }
                    break;
                }
            }
            if next == current {
                break;
            }
            current = next;
        }
        self.memo.insert(start, current);
        current
    }
}

struct PositionSpace {
    k: usize,
    n: usize,
    base: usize,
    weights: Vec<usize>,
    count: usize,
}

impl PositionSpace {
    fn new(k: usize, n: usize) -> Result<PositionSpace> {
        let base = 1 + n * n;
        let mut weights = Vec::with_capacity(k);
        let mut count = 1usize;
        for _ in 0..k {
            weights.push(count);
            count = count
                .checked_mul(base)
                .ok_or_else(|| Error::BudgetExceeded("position space overflow".into()))?;
        }
        if count > 4_000_000 {
            return Err(Error::BudgetExceeded(format!("{count} pebble-game positions")));
        }
        Ok(PositionSpace { k, n, base, weights, count })
    }

    fn decode(&self, mut id: usize) -> PgPosition {
        let mut pos = Vec::with_capacity(self.k);
        for _ in 0..self.k {
            let digit = id % self.base;
            id /= self.base;
            if digit == 0 {
                pos.push(None);
            } else {
                let v = digit - 1;
                pos.push(Some((v / self.n, v % self.n)));
            }
        }
        pos
    }

    fn digit(&self, id: usize, slot: usize) -> usize {
        id / self.weights[slot] % self.base
    }
}

fn position_map(pos: &PgPosition) -> Option<PartialMap> {
    let mut map = PartialMap::new();
    for slot in pos.iter().flatten() {
        let (a, b) = *slot;
        if let Some(existing) = map.get(a) {
            if existing != b {
                return None;
            }
        }
        map.insert(a, b);
    }
    if map.is_injective() {
        Some(map)
    } else {
        None
    }
}

/// Solves the game, computing the full safe region and Spoiler win depths.
pub fn solve_pebble_game(a: &Structure, b: &Structure, cfg: &PgConfig) -> Result<PgOutcome> {
    if a.vocab() != b.vocab() {
        return Err(Error::VocabMismatch("pebble game needs a common vocabulary".into()));
    }
    if cfg.k == 0 || cfg.move_arities.is_empty() || cfg.move_arities.iter().any(|&r| r == 0 || r > cfg.k) {
        return Err(Error::invalid("pebble game config", "need 1 <= r <= k move arities"));
    }
    let n = a.universe_size();
    if n != b.universe_size() {
        // No bijection exists, so Spoiler wins every position at its first
        // quantifier move; the start position survives zero rounds.
        return Ok(PgOutcome {
            verdict: PgVerdict::SpoilerWins,
            safe: Vec::new(),
            spoiler_depth: HashMap::from([(vec![None; cfg.k], 1)]),
            fixpoint_reached: true,
            passes: 1,
            duplicator_witness: HashMap::new(),
            bijections: Vec::new(),
        });
    }
    let bijections: Vec<Vec<usize>> = match &cfg.bijections {
        BijectionMode::Full => {
            if n > cfg.max_full_universe {
                return Err(Error::BudgetExceeded(format!(
                    "full bijection mode guarded to universes of size {}, got {n}",
                    cfg.max_full_universe
                )));
            }
            permutations(n)
        }
        BijectionMode::Restricted(list) => {
            for f in list {
                if f.len() != n {
                    return Err(Error::invalid("bijection list", "wrong length"));
                }
                let mut seen = vec![false; n];
                for &v in f {
                    if v >= n || std::mem::replace(&mut seen[v], true) {
                        return Err(Error::invalid("bijection list", "not a bijection"));
                    }
                }
            }
            list.clone()
        }
    };
    if bijections.is_empty() {
        return Err(Error::invalid("bijection list", "empty"));
    }
    let nf = bijections.len();
    let inverses: Vec<Vec<usize>> = bijections
        .iter()
        .map(|f| {
            let mut inv = vec![0usize; n];
            for (x, &y) in f.iter().enumerate() {
                inv[y] = x;
            }
            inv
        })
        .collect();

    let space = PositionSpace::new(cfg.k, n)?;
    let mut alive = vec![false; space.count];
    let mut depth: HashMap<PgPosition, usize> = HashMap::new();
    for id in 0..space.count {
        let pos = space.decode(id);
        let ok = match position_map(&pos) {
            Some(map) => is_partial_isomorphism(a, b, &map)?,
            None => false,
        };
        if ok {
            alive[id] = true;
        } else {
            depth.insert(pos, 0);
        }
    }

    // Precompute per arity r: spoiler-tuple space sizes and the bijection
    // image index of every tuple.
    let mut shapes: Vec<(Side, Vec<usize>)> = Vec::new();
    for &r in &cfg.move_arities {
        if n.checked_pow(r as u32).is_none_or(|s| s > MAX_TUPLE_SPACE) {
            return Err(Error::BudgetExceeded(format!("tuple space {n}^{r} above {MAX_TUPLE_SPACE}")));
        }
        for vars in distinct_var_tuples(cfg.k, r) {
            shapes.push((Side::Left, vars.clone()));
            shapes.push((Side::Right, vars));
        }
    }
    // image_of[r][side-as-index][f][tuple_idx] — only for arities in use.
    let max_r = *cfg.move_arities.iter().max().expect("nonempty");
    let mut image_left: Vec<Vec<Vec<u16>>> = vec![Vec::new(); max_r + 1];
    let mut image_right: Vec<Vec<Vec<u16>>> = vec![Vec::new(); max_r + 1];
    for &r in &cfg.move_arities {
        let sp = n.pow(r as u32);
        let mut left = Vec::with_capacity(nf);
        let mut right = Vec::with_capacity(nf);
        for fi in 0..nf {
            let mut l = Vec::with_capacity(sp);
            let mut rr = Vec::with_capacity(sp);
            for idx in 0..sp {
                let t = decode_tuple(idx, n, r);
                let li: Vec<usize> = t.iter().map(|&x| inverses[fi][x]).collect();
                let ri: Vec<usize> = t.iter().map(|&x| bijections[fi][x]).collect();
                l.push(encode_tuple(&li, n) as u16);
                rr.push(encode_tuple(&ri, n) as u16);
            }
            left.push(l);
            right.push(rr);
        }
        image_left[r] = left;
        image_right[r] = right;
    }

    let mut closers: Vec<Option<MaskCloser>> = Vec::new();
    for r in 0..=max_r {
        if cfg.move_arities.contains(&r) {
            closers.push(Some(MaskCloser::new(&cfg.family, n, r)));
        } else {
            closers.push(None);
        }
    }

    let mut witness: HashMap<(usize, usize), usize> = HashMap::new();
    let mut passes = 0usize;
    let fixpoint_reached;
    let nf_words = nf.div_ceil(64);
    loop {
        if let Some(bound) = cfg.round_bound {
            if passes >= bound {
                fixpoint_reached = false;
                break;
            }
        }
        passes += 1;
        let mut died: Vec<usize> = Vec::new();
        for id in 0..space.count {
            if !alive[id] {
                continue;
            }
            let mut pos_ok = true;
            for (si, (side, vars)) in shapes.iter().enumerate() {
                let r = vars.len();
                let sp = n.pow(r as u32);
                let closer = closers[r].as_mut().expect("closer for arity in use");
                // Strip the digits of the variables being overwritten.
                let mut base_id = id;
                for &v in vars {
                    base_id -= space.digit(id, v - 1) * space.weights[v - 1];
                }
                let mut valid = vec![u64::MAX; nf_words];
                if !nf.is_multiple_of(64) {
                    valid[nf_words - 1] = (1u64 << (nf % 64)) - 1;
                }
                for spoiler_idx in 0..sp {
                    let spoiler_t = decode_tuple(spoiler_idx, n, r);
                    let mut good = Mask::default();
                    for val_idx in 0..sp {
                        let val_t = decode_tuple(val_idx, n, r);
                        let mut next_id = base_id;
                        for (i, &v) in vars.iter().enumerate() {
                            let (x, y) = match side {
                                Side::Left => (val_t[i], spoiler_t[i]),
                                Side::Right => (spoiler_t[i], val_t[i]),
                            };
                            next_id += (1 + x * n + y) * space.weights[v - 1];
                        }
                        if alive[next_id] {
                            good.set(val_idx);
                        }
                    }
                    let closed = closer.close(good);
                    let images = match side {
                        Side::Left => &image_left[r],
                        Side::Right => &image_right[r],
                    };
                    let mut any = false;
                    for w in 0..nf_words {
                        let mut word = valid[w];
                        while word != 0 {
                            let bit = word.trailing_zeros() as usize;
                            word &= word - 1;
                            let fi = w * 64 + bit;
                            if !closed.get(images[fi][spoiler_idx] as usize) {
                                valid[w] &= !(1u64 << bit);
                            }
                        }
                        any |= valid[w] != 0;
                    }
                    if !any {
                        pos_ok = false;
                        break;
                    }
                }
                if !pos_ok {
                    break;
                }
                let fi = valid
                    .iter()
                    .enumerate()
                    .find_map(|(w, &word)| (word != 0).then(|| w * 64 + word.trailing_zeros() as usize))
                    .expect("some bijection survived");
                witness.insert((id, si), fi);
            }
            if !pos_ok {
                died.push(id);
            }
        }
        if died.is_empty() {
            fixpoint_reached = true;
            break;
        }
        for id in died {
            alive[id] = false;
            depth.insert(space.decode(id), passes);
        }
    }

    let start_id = 0usize; // all digits zero = empty position
    let start_alive = alive[start_id];
    let verdict = if start_alive {
        if fixpoint_reached {
            PgVerdict::DuplicatorWins
        } else {
            PgVerdict::DuplicatorSurvives(passes)
        }
    } else {
        PgVerdict::SpoilerWins
    };
    let safe: Vec<PgPosition> =
        (0..space.count).filter(|&id| alive[id]).map(|id| space.decode(id)).collect();
    let duplicator_witness = witness
        .into_iter()
        .filter(|&((id, _), _)| alive[id])
        .map(|((id, si), fi)| {
            let (side, vars) = shapes[si].clone();
            ((space.decode(id), side, vars), fi)
        })
        .collect();
    Ok(PgOutcome {
        verdict,
        safe,
        spoiler_depth: depth,
        fixpoint_reached,
        passes,
        duplicator_witness,
        bijections,
    })
}

/// The canonical served set for a concrete round against the final safe
/// region: all safe continuations. `bijection` must already point in the
/// response direction (`B → A` for left moves). Returns `None` when the move
/// is not answerable.
#[allow(clippy::too_many_arguments)]
pub fn canonical_response(
    outcome: &PgOutcome,
    family: &Family,
    n: usize,
    pos: &PgPosition,
    side: Side,
    vars: &[usize],
    spoiler_tuple: &[usize],
    bijection: &[usize],
) -> Result<Option<Vec<Vec<usize>>>> {
    let r = vars.len();
    let safe_set: std::collections::HashSet<&PgPosition> = outcome.safe.iter().collect();
    let image: Vec<usize> = spoiler_tuple.iter().map(|&x| bijection[x]).collect();
    let sp = n.pow(r as u32);
    let mut good = std::collections::BTreeSet::new();
    for val_idx in 0..sp {
        let vals = decode_tuple(val_idx, n, r);
        let mut next = pos.clone();
        for (i, &v) in vars.iter().enumerate() {
            next[v - 1] = match side {
                Side::Left => Some((vals[i], spoiler_tuple[i])),
                Side::Right => Some((spoiler_tuple[i], vals[i])),
            };
        }
        if safe_set.contains(&next) {
            good.insert(vals);
        }
    }
    let closed = crate::family::gamma_closure_tuples(family, n, &good)?;
    if closed.contains(&image) {
        Ok(Some(good.into_iter().collect()))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::OrderedGraph;

    fn cycle(n: usize) -> Structure {
        OrderedGraph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap().to_structure()
    }

    #[test]
    fn identical_structures_are_duplicator_wins() {
        let g = cycle(4);
        let cfg = PgConfig::new(2, Family::Nowhere);
        let out = solve_pebble_game(&g, &g, &cfg).unwrap();
        assert_eq!(out.verdict, PgVerdict::DuplicatorWins);
        assert!(out.fixpoint_reached);
    }

    #[test]
    fn size_mismatch_is_immediate_spoiler_win() {
        let a = cycle(4);
        let b = cycle(5);
        let cfg = PgConfig::new(2, Family::Nowhere);
        let out = solve_pebble_game(&a, &b, &cfg).unwrap();
        assert_eq!(out.verdict, PgVerdict::SpoilerWins);
    }

    #[test]
    fn hexagon_vs_two_triangles_nowhere_family() {
        let c6 = cycle(6);
        let two_c3 = OrderedGraph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
            .unwrap()
            .to_structure();
        let cfg = PgConfig::new(2, Family::Nowhere).with_arities(vec![1]);
        let out = solve_pebble_game(&c6, &two_c3, &cfg).unwrap();
        assert_eq!(out.verdict, PgVerdict::DuplicatorWins);
    }

    #[test]
    fn path_vs_star_is_spoiler_win() {
        let path = OrderedGraph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap().to_structure();
        let star = OrderedGraph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap().to_structure();
        let cfg = PgConfig::new(2, Family::Nowhere).with_arities(vec![1]);
        let out = solve_pebble_game(&path, &star, &cfg).unwrap();
        assert_eq!(out.verdict, PgVerdict::SpoilerWins);
        // The empty start position carries a finite win depth.
        assert!(out.spoiler_depth.contains_key(&vec![None, None]));
    }

    #[test]
    fn round_bound_reports_survival() {
        let path = OrderedGraph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap().to_structure();
        let star = OrderedGraph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap().to_structure();
        let cfg = PgConfig::new(2, Family::Nowhere).with_arities(vec![1]).with_round_bound(0);
        let out = solve_pebble_game(&path, &star, &cfg).unwrap();
        assert_eq!(out.verdict, PgVerdict::DuplicatorSurvives(0));
    }

    #[test]
    fn full_mode_guard() {
        let big = cycle(7);
        let cfg = PgConfig::new(1, Family::Nowhere);
        assert!(matches!(solve_pebble_game(&big, &big, &cfg), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn restricted_duplicator_soundness() {
        // If Duplicator wins with a restricted bijection set, she wins the
        // full game too.
        let c6 = cycle(6);
        let two_c3 = OrderedGraph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
            .unwrap()
            .to_structure();
        let full = PgConfig::new(2, Family::Nowhere).with_arities(vec![1]);
        let full_out = solve_pebble_game(&c6, &two_c3, &full).unwrap();
        // Restrict to the witnesses the full game found.
        let mut distinct: Vec<Vec<usize>> = full_out
            .duplicator_witness
            .values()
            .map(|&fi| full_out.bijections[fi].clone())
            .collect();
        distinct.sort();
        distinct.dedup();
        assert!(!distinct.is_empty());
        let restricted = PgConfig::new(2, Family::Nowhere)
            .with_arities(vec![1])
            .with_bijections(BijectionMode::Restricted(distinct));
        let restricted_out = solve_pebble_game(&c6, &two_c3, &restricted).unwrap();
        if restricted_out.verdict == PgVerdict::DuplicatorWins {
            assert_eq!(full_out.verdict, PgVerdict::DuplicatorWins);
        }
    }

    #[test]
    fn majority_family_changes_small_games() {
        // One-relation structures where the majority closure gives Duplicator
        // extra answers; sanity: solver runs and fixpoints with both families.
        let vocab = crate::structure::Vocabulary::new(vec![("R".into(), 2)]).unwrap();
        let a = Structure::from_parts(vocab.clone(), 3, vec![vec![vec![0, 1], vec![1, 2]]]).unwrap();
        let b = Structure::from_parts(vocab, 3, vec![vec![vec![0, 1], vec![0, 2]]]).unwrap();
        for family in [Family::Nowhere, Family::majority()] {
            let cfg = PgConfig::new(2, family);
            let out = solve_pebble_game(&a, &b, &cfg).unwrap();
            assert!(out.fixpoint_reached);
        }
    }

    #[test]
    fn safe_region_is_a_fixpoint() {
        let c6 = cycle(6);
        let two_c3 = OrderedGraph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
            .unwrap()
            .to_structure();
        let cfg = PgConfig::new(2, Family::Nowhere).with_arities(vec![1]);
        let out = solve_pebble_game(&c6, &two_c3, &cfg).unwrap();
        assert!(out.fixpoint_reached);
        let safe_set: std::collections::HashSet<PgPosition> = out.safe.iter().cloned().collect();
        // Every safe position answers every shape with its recorded witness,
        // serving only safe continuations.
        for pos in &out.safe {
            for (side, vars) in
                [(Side::Left, vec![1]), (Side::Right, vec![1]), (Side::Left, vec![2]), (Side::Right, vec![2])]
            {
                let fi = out.duplicator_witness[&(pos.clone(), side, vars.clone())];
                let f = &out.bijections[fi];
                let bij: Vec<usize> = match side {
                    Side::Left => {
                        let mut inv = vec![0usize; 6];
                        for (x, &y) in f.iter().enumerate() {
                            inv[y] = x;
                        }
                        inv
                    }
                    Side::Right => f.clone(),
                };
                for spoiler in 0..6usize {
                    let served = canonical_response(
                        &out,
                        &Family::Nowhere,
                        6,
                        pos,
                        side,
                        &vars,
                        &[spoiler],
                        &bij,
                    )
                    .unwrap()
                    .expect("witness answers every tuple");
                    for vals in served {
                        let mut next = pos.clone();
                        next[vars[0] - 1] = match side {
                            Side::Left => Some((vals[0], spoiler)),
                            Side::Right => Some((spoiler, vals[0])),
                        };
                        assert!(safe_set.contains(&next));
                    }
                }
            }
        }
    }
}

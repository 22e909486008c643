//! The path-based Duplicator strategy on CFI instance pairs, driven by a
//! Robber strategy for the edge game, with an exhaustive adversarial
//! verifier.
//!
//! The engine maintains a good bijection (as a switch set) whose twist is
//! Robber-safe for the pebbled edges, together with the current position.
//! Each round it serves the bijection, pulls a disjoint escape-path system
//! from the Robber strategy, switches the bijection along each path, and
//! serves the images of Spoiler's tuple under those switched bijections. The
//! loop invariant and the near-unanimity legality identity are asserted at
//! every step: a violation is an internal error, never a degraded answer.

use std::collections::{BTreeSet, HashMap};

use crate::cfi::{CfiInstance, SwitchSet};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::game::cr::{edge_mask, robber_paths, CrOutcome};
use crate::game::girth::{distance_invariant_holds, robber_girth_move};
use crate::game::pebble::{distinct_var_tuples, Side};
use crate::graph::Path;
use crate::structure::Assignment;

/// Where the Robber strategy comes from.
#[derive(Clone, Copy, Debug)]
pub enum CrOracle<'a> {
    /// Exact solver output (positions must stay within its `k`).
    Exact(&'a CrOutcome),
    /// The high-girth tree strategy with distance parameter `d`.
    Girth { d: usize },
}

impl CrOracle<'_> {
    pub fn is_safe(&self, inst: &CfiInstance, pebbled: &BTreeSet<usize>, u: usize) -> bool {
        match self {
            CrOracle::Exact(out) => out.is_safe(edge_mask(pebbled), u),
            CrOracle::Girth { d } => distance_invariant_holds(inst.graph(), *d, pebbled, u),
        }
    }

    pub fn paths(
        &self,
        inst: &CfiInstance,
        pebbled: &BTreeSet<usize>,
        u: usize,
        incoming: &BTreeSet<usize>,
    ) -> Result<Vec<Path>> {
        match self {
            CrOracle::Exact(out) => {
                robber_paths(inst.graph(), out, edge_mask(pebbled), u, edge_mask(incoming))
            }
            CrOracle::Girth { d } => robber_girth_move(inst.graph(), *d, pebbled, u, incoming),
        }
    }
}

/// Duplicator's state between rounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DuplicatorState {
    pub switch_set: SwitchSet,
    /// Assignment into the untwisted instance.
    pub alpha: Assignment,
    /// Assignment into the twisted instance.
    pub beta: Assignment,
}

impl DuplicatorState {
    pub fn initial() -> DuplicatorState {
        DuplicatorState {
            switch_set: SwitchSet::identity(),
            alpha: Assignment::new(),
            beta: Assignment::new(),
        }
    }
}

/// The committed part of a round: Spoiler's move and Duplicator's answer,
/// before Spoiler picks from the served set.
#[derive(Clone, Debug)]
pub struct DuplicatorRound {
    pub side: Side,
    pub vars: Vec<usize>,
    pub spoiler_tuple: Vec<usize>,
    /// The served response set, deduplicated and sorted.
    pub served: Vec<Vec<usize>>,
    /// One response tuple per escape path, aligned with `switched`.
    pub path_tuples: Vec<Vec<usize>>,
    /// The switched bijection per escape path.
    pub switched: Vec<SwitchSet>,
    /// Pebbled edges after the round (`F'`).
    pub incoming: BTreeSet<usize>,
}

fn pebbled_edges(inst: &CfiInstance, a: &Assignment) -> BTreeSet<usize> {
    inst.pebbled_edges(a.range())
}

fn check_invariant(
    inst: &CfiInstance,
    cr: &CrOracle,
    st: &DuplicatorState,
    context: &str,
) -> Result<usize> {
    let pebbled_a = pebbled_edges(inst, &st.alpha);
    let pebbled_b = pebbled_edges(inst, &st.beta);
    if pebbled_a != pebbled_b {
        return Err(Error::Internal(format!("{context}: assignments pebble different edges")));
    }
    if !inst.is_good_for(&st.switch_set, &pebbled_a) {
        return Err(Error::Internal(format!("{context}: bijection is not good for the pebbled set")));
    }
    let twist = inst.twist(&st.switch_set)?;
    let alpha_vars: Vec<usize> = st.alpha.domain().collect();
    let beta_vars: Vec<usize> = st.beta.domain().collect();
    if alpha_vars != beta_vars {
        return Err(Error::Internal(format!("{context}: assignment domains differ")));
    }
    for v in alpha_vars {
        let a = st.alpha.get(v).expect("domain member");
        let b = st.beta.get(v).expect("domain member");
        if inst.map_element(&st.switch_set, a) != b {
            return Err(Error::Internal(format!("{context}: position escapes the bijection")));
        }
    }
    if !cr.is_safe(inst, &pebbled_a, twist) {
        return Err(Error::Internal(format!("{context}: twist is not certified safe")));
    }
    Ok(twist)
}

/// Plays Duplicator's answer to Spoiler's side, variables, and tuple.
pub fn respond(
    inst: &CfiInstance,
    cr: &CrOracle,
    k: usize,
    st: &DuplicatorState,
    side: Side,
    vars: &[usize],
    spoiler_tuple: &[usize],
) -> Result<DuplicatorRound> {
    if vars.is_empty() || vars.len() > k {
        return Err(Error::Precondition(format!("need 1 <= r <= {k} variables")));
    }
    let mut seen = BTreeSet::new();
    for &v in vars {
        if v == 0 || v > k || !seen.insert(v) {
            return Err(Error::Precondition("variables must be distinct and within 1..=k".into()));
        }
    }
    if spoiler_tuple.len() != vars.len() {
        return Err(Error::ArityMismatch { expected: vars.len(), got: spoiler_tuple.len() });
    }
    for &e in spoiler_tuple {
        if e >= inst.universe_size() {
            return Err(Error::OutOfUniverse { element: e, universe: inst.universe_size() });
        }
    }
    let twist = check_invariant(inst, cr, st, "round entry")?;
    let pebbled = pebbled_edges(inst, &st.alpha);

    // The pebble set after the round is read off the updated assignment on
    // Spoiler's side.
    let updated = match side {
        Side::Left => st.beta.update(vars, spoiler_tuple),
        Side::Right => st.alpha.update(vars, spoiler_tuple),
    };
    let incoming = pebbled_edges(inst, &updated);

    let paths = cr.paths(inst, &pebbled, twist, &incoming)?;
    let ell = inst.ell();
    if paths.len() != ell {
        return Err(Error::Internal(format!("expected {ell} escape paths, got {}", paths.len())));
    }
    let mut switched = Vec::with_capacity(ell);
    let mut path_tuples = Vec::with_capacity(ell);
    for p in &paths {
        let s = inst.switch_along_path(&st.switch_set, p)?;
        let tuple: Vec<usize> = spoiler_tuple.iter().map(|&e| inst.map_element(&s, e)).collect();
        switched.push(s);
        path_tuples.push(tuple);
    }

    // Legality: the near-unanimity image of the served tuples is exactly the
    // current bijection's image of Spoiler's tuple (the paths are disjoint,
    // so per coordinate at most one switched bijection deviates).
    let family = Family::near_unanimity(ell)?;
    let n = inst.universe_size();
    let expected: Vec<usize> =
        spoiler_tuple.iter().map(|&e| inst.map_element(&st.switch_set, e)).collect();
    for coord in 0..spoiler_tuple.len() {
        let args: Vec<usize> = path_tuples.iter().map(|t| t[coord]).collect();
        match family.eval(n, &args)? {
            Some(v) if v == expected[coord] => {}
            other => {
                return Err(Error::Internal(format!(
                    "legality identity failed at coordinate {coord}: got {other:?}, expected {}",
                    expected[coord]
                )));
            }
        }
    }

    let mut served: Vec<Vec<usize>> = path_tuples.clone();
    served.sort();
    served.dedup();
    Ok(DuplicatorRound {
        side,
        vars: vars.to_vec(),
        spoiler_tuple: spoiler_tuple.to_vec(),
        served,
        path_tuples,
        switched,
        incoming,
    })
}

/// Applies Spoiler's pick (an index into `served`) and re-establishes the
/// invariant for the next round.
pub fn complete(
    inst: &CfiInstance,
    cr: &CrOracle,
    st: &DuplicatorState,
    round: &DuplicatorRound,
    pick: usize,
) -> Result<DuplicatorState> {
    let chosen = round
        .served
        .get(pick)
        .ok_or_else(|| Error::Precondition(format!("pick {pick} out of range")))?;
    let path_idx = round
        .path_tuples
        .iter()
        .position(|t| t == chosen)
        .expect("served tuples come from the path tuples");
    let new_switch = round.switched[path_idx].clone();
    let (alpha, beta) = match round.side {
        Side::Left => (
            st.alpha.update(&round.vars, chosen),
            st.beta.update(&round.vars, &round.spoiler_tuple),
        ),
        Side::Right => (
            st.alpha.update(&round.vars, &round.spoiler_tuple),
            st.beta.update(&round.vars, chosen),
        ),
    };
    let next = DuplicatorState { switch_set: new_switch, alpha, beta };

    // The pebbled set after the round must be exactly the announced one.
    if pebbled_edges(inst, &next.alpha) != round.incoming {
        return Err(Error::Internal("pebbled set after the round differs from the announced set".into()));
    }
    check_invariant(inst, cr, &next, "round exit")?;
    Ok(next)
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub ok: bool,
    pub states_visited: usize,
    pub rounds: usize,
    /// Move trace to the failure, when one was found.
    pub failure: Option<String>,
}

/// Exhaustive Spoiler against the strategy engine: every side, variable
/// tuple, element tuple and pick, to the given depth. Every visited round
/// asserts the invariant and the legality identity internally.
pub fn adversarial_verify(
    inst: &CfiInstance,
    cr: &CrOracle,
    k: usize,
    rounds: usize,
) -> Result<VerifyReport> {
    if k == 0 {
        return Err(Error::Precondition("need at least one pebble".into()));
    }
    let start = DuplicatorState::initial();
    let twist = inst.twist(&start.switch_set)?;
    if !cr.is_safe(inst, &BTreeSet::new(), twist) {
        return Err(Error::Precondition(
            "the least vertex is not certified safe for the empty set".into(),
        ));
    }
    type Key = (Vec<usize>, Vec<(usize, usize)>, Vec<(usize, usize)>);
    let mut verified: HashMap<Key, usize> = HashMap::new();
    let mut states_visited = 0usize;

    fn state_key(st: &DuplicatorState) -> Key {
        (st.switch_set.to_vec(), st.alpha.bindings().collect(), st.beta.bindings().collect())
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        inst: &CfiInstance,
        cr: &CrOracle,
        k: usize,
        st: &DuplicatorState,
        depth: usize,
        verified: &mut HashMap<Key, usize>,
        states_visited: &mut usize,
        trace: &mut Vec<String>,
    ) -> Result<()> {
        if depth == 0 {
            return Ok(());
        }
        let key = state_key(st);
        if verified.get(&key).is_some_and(|&d| d >= depth) {
            return Ok(());
        }
        *states_visited += 1;
        let n = inst.universe_size();
        for side in [Side::Left, Side::Right] {
            for r in 1..=k {
                for vars in distinct_var_tuples(k, r) {
                    let mut tuple = vec![0usize; r];
                    'tuples: loop {
                        trace.push(format!("{side:?} vars={vars:?} tuple={tuple:?}"));
                        let round = respond(inst, cr, k, st, side, &vars, &tuple)?;
                        for pick in 0..round.served.len() {
                            trace.push(format!("pick={pick}"));
                            let next = complete(inst, cr, st, &round, pick)?;
                            walk(inst, cr, k, &next, depth - 1, verified, states_visited, trace)?;
                            trace.pop();
                        }
                        trace.pop();
                        for slot in tuple.iter_mut() {
                            *slot += 1;
                            if *slot < n {
                                continue 'tuples;
                            }
                            *slot = 0;
                        }
                        break;
                    }
                }
            }
        }
        verified.insert(key, depth);
        Ok(())
    }

    let mut trace = Vec::new();
    match walk(inst, cr, k, &start, rounds, &mut verified, &mut states_visited, &mut trace) {
        Ok(()) => Ok(VerifyReport { ok: true, states_visited, rounds, failure: None }),
        Err(Error::Internal(msg)) => Ok(VerifyReport {
            ok: false,
            states_visited,
            rounds,
            failure: Some(format!("{msg}; trace: {}", trace.join(" / "))),
        }),
        Err(e) => Err(e),
    }
}

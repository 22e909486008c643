//! Families of n-ary partial functions and their closure operator.
//!
//! A family assigns one partial function to every finite universe; it is
//! represented intensionally by an evaluator on `(universe size, arguments)`
//! so a single value covers all sizes. Property checks (invariance,
//! projectivity) materialize maps only up to a small guard size.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::structure::Structure;

/// Guard for the exhaustive invariance checks.
pub const INVARIANCE_MAX_N: usize = 5;

/// A family of `n`-ary partial functions, one per finite universe.
#[derive(Clone)]
pub enum Family {
    /// `M(a,b,b) = M(b,b,a) = a`, undefined otherwise.
    Maltsev,
    /// `ℓ`-ary near-unanimity: value `a` iff at least `ℓ-1` arguments equal `a`.
    /// Arity 3 is the partial majority family.
    NearUnanimity(usize),
    /// The everywhere-undefined family; degenerates the pebble game to the
    /// plain bijection game.
    Nowhere,
    /// Escape hatch for experiment fixtures: a plain function pointer.
    Custom { name: &'static str, arity: usize, eval: fn(usize, &[usize]) -> Option<usize> },
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Family::Maltsev, Family::Maltsev) | (Family::Nowhere, Family::Nowhere) => true,
            (Family::NearUnanimity(a), Family::NearUnanimity(b)) => a == b,
            (Family::Custom { name: a, arity: ra, .. }, Family::Custom { name: b, arity: rb, .. }) => {
                a == b && ra == rb
            }
            _ => false,
        }
    }
}

impl Eq for Family {}

impl Family {
    pub fn near_unanimity(ell: usize) -> Result<Family> {
        if ell < 3 {
            return Err(Error::invalid("family", "near-unanimity arity must be at least 3"));
        }
        Ok(Family::NearUnanimity(ell))
    }

    /// The partial majority family (ternary near-unanimity).
    pub fn majority() -> Family {
        Family::NearUnanimity(3)
    }

    /// Parses a selector string: `maltsev`, `nu:<ℓ>`, or `nowhere`.
    pub fn parse(selector: &str) -> Result<Family> {
        match selector {
            "maltsev" => Ok(Family::Maltsev),
            "nowhere" => Ok(Family::Nowhere),
            s => {
                if let Some(ell) = s.strip_prefix("nu:") {
                    let ell: usize = ell
                        .parse()
                        .map_err(|_| Error::invalid("family selector", format!("bad arity in {s}")))?;
                    Family::near_unanimity(ell)
                } else {
                    Err(Error::invalid("family selector", format!("unknown selector {s}")))
                }
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Family::Maltsev => "maltsev".into(),
            Family::NearUnanimity(ell) => format!("nu:{ell}"),
            Family::Nowhere => "nowhere".into(),
            Family::Custom { name, .. } => (*name).into(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Family::Maltsev => 3,
            Family::NearUnanimity(ell) => *ell,
            Family::Nowhere => 1,
            Family::Custom { arity, .. } => *arity,
        }
    }

    /// Evaluates the family member for universe `{0,…,n-1}`.
    pub fn eval(&self, n: usize, args: &[usize]) -> Result<Option<usize>> {
        if args.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), got: args.len() });
        }
        for &a in args {
            if a >= n {
                return Err(Error::OutOfUniverse { element: a, universe: n });
            }
        }
        Ok(self.eval_unchecked(n, args))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, n: usize, args: &[usize]) -> Option<usize> {
        match self {
            Family::Maltsev => {
                let (a, b, c) = (args[0], args[1], args[2]);
                if b == c {
                    Some(a)
                } else if a == b {
                    Some(c)
                } else {
                    None
                }
            }
            Family::NearUnanimity(ell) => {
                // Value a needs ℓ-1 agreeing arguments; at most one candidate
                // can reach that for ℓ ≥ 3, and any argument ties the vote.
                for cand_idx in 0..2.min(*ell) {
                    let a = args[cand_idx];
                    let votes = args.iter().filter(|&&x| x == a).count();
                    if votes >= ell - 1 {
                        return Some(a);
                    }
                }
                None
            }
            Family::Nowhere => None,
            Family::Custom { eval, .. } => eval(n, args),
        }
    }
}

/// Applies `p̂` to every sequence of tuples drawn from `rel`, dropping results
/// with an undefined coordinate.
pub fn apply_to_relation(family: &Family, n: usize, rel: &[Vec<usize>]) -> Result<BTreeSet<Vec<usize>>> {
    let mut out = BTreeSet::new();
    let Some(first) = rel.first() else {
        return Ok(out);
    };
    let r = first.len();
    for t in rel {
        if t.len() != r {
            return Err(Error::ArityMismatch { expected: r, got: t.len() });
        }
    }
    let k = rel.len();
    let arity = family.arity();
    let mut counters = vec![0usize; arity];
    let mut args = vec![0usize; arity];
    'seq: loop {
        let mut image = Vec::with_capacity(r);
        let mut defined = true;
        for coord in 0..r {
            for (slot, &idx) in counters.iter().enumerate() {
                args[slot] = rel[idx][coord];
            }
            match family.eval_unchecked(n, &args) {
                Some(v) => image.push(v),
                None => {
                    defined = false;
                    break;
                }
            }
        }
        if defined {
            out.insert(image);
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
    Ok(out)
}

/// Applies the family to every relation of a structure; the universe is kept.
pub fn apply_to_structure(family: &Family, a: &Structure) -> Result<Structure> {
    let n = a.universe_size();
    let mut tuple_sets = Vec::with_capacity(a.relations().len());
    for rel in a.relations() {
        let image = apply_to_relation(family, n, rel.tuples())?;
        tuple_sets.push(image.into_iter().collect());
    }
    Structure::from_parts(a.vocab().clone(), n, tuple_sets)
}

/// True iff every relation of `a` is closed under the family member.
pub fn is_partial_polymorphism(family: &Family, a: &Structure) -> Result<bool> {
    let n = a.universe_size();
    for rel in a.relations() {
        let image = apply_to_relation(family, n, rel.tuples())?;
        if !image.iter().all(|t| rel.contains(t)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-pass snapshots of the closure iteration, ending at the fixpoint.
#[derive(Clone, Debug)]
pub struct ClosureTrace {
    pub stages: Vec<Structure>,
    pub fixpoint_index: usize,
}

/// Iterates `R ← p(R) ∪ R` on every relation until nothing new appears.
/// Recombination is complete each pass; the frontier is only used to detect
/// the fixpoint.
pub fn gamma_closure(family: &Family, a: &Structure) -> Result<(Structure, ClosureTrace)> {
    let n = a.universe_size();
    let max_r = a.relations().iter().map(|r| r.arity()).max().unwrap_or(0);
    let bound = n.checked_pow(max_r as u32).unwrap_or(usize::MAX);
    let mut current = a.clone();
    let mut stages = vec![current.clone()];
    loop {
        let image = apply_to_structure(family, &current)?;
        let next = crate::structure::union(&current, &image)?;
        if next == current {
            break;
        }
        current = next;
        stages.push(current.clone());
        if stages.len() > bound + 2 {
            return Err(Error::Internal("closure iteration exceeded its theoretical bound".into()));
        }
    }
    let fixpoint_index = stages.len() - 1;
    Ok((current, ClosureTrace { stages, fixpoint_index }))
}

/// Closure of a raw tuple set (used by the pebble game legality check, which
/// closes over the served set itself).
pub fn gamma_closure_tuples(
    family: &Family,
    n: usize,
    start: &BTreeSet<Vec<usize>>,
) -> Result<BTreeSet<Vec<usize>>> {
    let mut current = start.clone();
    loop {
        let as_vec: Vec<Vec<usize>> = current.iter().cloned().collect();
        let image = apply_to_relation(family, n, &as_vec)?;
        let before = current.len();
        current.extend(image);
        if current.len() == before {
            return Ok(current);
        }
    }
}

/// Outcome of the exhaustive invariance checks up to a universe-size bound.
#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub max_n: usize,
    pub invariant: bool,
    pub strongly_invariant: bool,
    pub projective: bool,
    pub partial_choice: bool,
    pub counterexample: Option<InvarianceCounterexample>,
}

/// First failing instance found, in enumeration order.
#[derive(Clone, Debug)]
pub struct InvarianceCounterexample {
    pub property: &'static str,
    pub from_size: usize,
    pub to_size: usize,
    /// Image of each element of the source universe.
    pub map: Vec<usize>,
    pub args: Vec<usize>,
    pub lhs: Option<usize>,
    pub rhs: Option<usize>,
}

fn for_each_tuple(n: usize, arity: usize, mut f: impl FnMut(&[usize]) -> Result<bool>) -> Result<bool> {
    if n == 0 {
        return Ok(true);
    }
    let mut tuple = vec![0usize; arity];
    'outer: loop {
        if !f(&tuple)? {
            return Ok(false);
        }
        for slot in tuple.iter_mut() {
            *slot += 1;
            if *slot < n {
                continue 'outer;
            }
            *slot = 0;
        }
        return Ok(true);
    }
}

fn injections(from: usize, to: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(from);
    fn rec(from: usize, to: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == from {
            out.push(current.clone());
            return;
        }
        for v in 0..to {
            if !current.contains(&v) {
                current.push(v);
                rec(from, to, current, out);
                current.pop();
            }
        }
    }
    rec(from, to, &mut current, &mut out);
    out
}

fn all_maps(from: usize, to: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if from == 0 {
        out.push(Vec::new());
        return out;
    }
    if to == 0 {
        return out;
    }
    let mut map = vec![0usize; from];
    'outer: loop {
        out.push(map.clone());
        for slot in map.iter_mut() {
            *slot += 1;
            if *slot < to {
                continue 'outer;
            }
            *slot = 0;
        }
        return out;
    }
}

/// Exhaustively decides the invariance hierarchy for universes up to `max_n`.
///
/// Kleene equality is used throughout: either both sides undefined, or both
/// defined and equal. Projectivity demands the one-sided condition (the image
/// value must be defined and match whenever the source value is defined)
/// together with strong invariance.
pub fn check_invariance(family: &Family, max_n: usize) -> Result<InvarianceReport> {
    if max_n > INVARIANCE_MAX_N {
        return Err(Error::BudgetExceeded(format!(
            "invariance check guarded to max_n <= {INVARIANCE_MAX_N}, got {max_n}"
        )));
    }
    let arity = family.arity();
    let mut report = InvarianceReport {
        max_n,
        invariant: true,
        strongly_invariant: true,
        projective: true,
        partial_choice: true,
        counterexample: None,
    };
    let record = |report: &mut InvarianceReport, cx: InvarianceCounterexample| {
        if report.counterexample.is_none() {
            report.counterexample = Some(cx);
        }
    };

    // Partial choice: a defined value is always one of the arguments.
    'pc: for n in 1..=max_n {
        let ok = for_each_tuple(n, arity, |args| {
            if let Some(v) = family.eval_unchecked(n, args) {
                if !args.contains(&v) {
                    return Ok(false);
                }
            }
            Ok(true)
        })?;
        if !ok {
            report.partial_choice = false;
            // Re-run to capture the witness deterministically.
            for_each_tuple(n, arity, |args| {
                if let Some(v) = family.eval_unchecked(n, args) {
                    if !args.contains(&v) {
                        record(
                            &mut report,
                            InvarianceCounterexample {
                                property: "partial_choice",
                                from_size: n,
                                to_size: n,
                                map: (0..n).collect(),
                                args: args.to_vec(),
                                lhs: Some(v),
                                rhs: None,
                            },
                        );
                        return Ok(false);
                    }
                }
                Ok(true)
            })?;
            break 'pc;
        }
    }

    // The three map-respecting conditions share one loop body.
    let check_maps = |maps: &[(usize, usize, Vec<usize>)],
                          one_sided: bool,
                          property: &'static str|
     -> Result<Option<InvarianceCounterexample>> {
        for (sa, sb, map) in maps {
            let mut witness = None;
            for_each_tuple(*sa, arity, |args| {
                let lhs_args: Vec<usize> = args.iter().map(|&a| map[a]).collect();
                let lhs = family.eval_unchecked(*sb, &lhs_args);
                let rhs = family.eval_unchecked(*sa, args).map(|v| map[v]);
                let bad = if one_sided {
                    rhs.is_some() && lhs != rhs
                } else {
                    lhs != rhs
                };
                if bad {
                    witness = Some(InvarianceCounterexample {
                        property,
                        from_size: *sa,
                        to_size: *sb,
                        map: map.clone(),
                        args: args.to_vec(),
                        lhs,
                        rhs,
                    });
                    return Ok(false);
                }
                Ok(true)
            })?;
            if witness.is_some() {
                return Ok(witness);
            }
        }
        Ok(None)
    };

    let mut bijections = Vec::new();
    let mut injective = Vec::new();
    let mut arbitrary = Vec::new();
    for sa in 1..=max_n {
        for sb in 1..=max_n {
            if sa == sb {
                bijections.extend(injections(sa, sb).into_iter().map(|m| (sa, sb, m)));
            }
            if sa <= sb {
                injective.extend(injections(sa, sb).into_iter().map(|m| (sa, sb, m)));
            }
            arbitrary.extend(all_maps(sa, sb).into_iter().map(|m| (sa, sb, m)));
        }
    }

    if let Some(cx) = check_maps(&bijections, false, "invariant")? {
        report.invariant = false;
        record(&mut report, cx);
    }
    if let Some(cx) = check_maps(&injective, false, "strongly_invariant")? {
        report.strongly_invariant = false;
        record(&mut report, cx);
    }
    if let Some(cx) = check_maps(&arbitrary, true, "projective")? {
        report.projective = false;
        record(&mut report, cx);
    }
    // Projectivity includes strong invariance by definition.
    report.projective = report.projective && report.strongly_invariant;
    Ok(report)
}

//! CSP targets and solvers.
//!
//! Two solver routes exist for parity instances: the generic backtracking
//! homomorphism search from [`crate::search`], and Gauss-Jordan elimination
//! over GF(2) on packed bit rows. The two must agree; the test census and the
//! acceptance suite hold them to that.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::structure::{Structure, Vocabulary};

/// The parity template: universe `{0,1}` with the even and odd `ℓ`-tuples.
pub fn build_c_ell(ell: usize) -> Result<Structure> {
    if ell < 2 {
        return Err(Error::invalid("parity template", "arity must be at least 2"));
    }
    if ell > 20 {
        return Err(Error::BudgetExceeded(format!("parity template of arity {ell}")));
    }
    let vocab = Vocabulary::new(vec![("R0".into(), ell), ("R1".into(), ell)])?;
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for code in 0u32..(1 << ell) {
        let tuple: Vec<usize> = (0..ell).map(|i| (code >> i & 1) as usize).collect();
        if (code.count_ones() & 1) == 0 {
            even.push(tuple);
        } else {
            odd.push(tuple);
        }
    }
    Structure::from_parts(vocab, 2, vec![even, odd])
}

/// Detects whether a structure is the parity template produced by
/// [`build_c_ell`]; returns the arity.
pub fn as_c_ell(s: &Structure) -> Option<usize> {
    let ell = s.vocab().uniform_arity()?;
    if ell < 2 || s.vocab().len() != 2 || s.universe_size() != 2 {
        return None;
    }
    let built = build_c_ell(ell).ok()?;
    if *s == built {
        Some(ell)
    } else {
        None
    }
}

/// Complete `n`-regular hypergraph colouring targets on `m` points.
///
/// Without `k` (or with `k = 1`) the relation holds the injective `n`-tuples.
/// With `k` given, a tuple is allowed when no value occupies more than `k`
/// coordinates, which is the same as every `k+1` coordinates meeting at least
/// two values.
pub fn build_hypergraph_target(n: usize, m: usize, k: Option<usize>) -> Result<Structure> {
    if n < 2 || m < 2 {
        return Err(Error::invalid("hypergraph target", "need n >= 2 and m >= 2"));
    }
    let k = k.unwrap_or(1);
    if k == 0 || k >= n {
        return Err(Error::invalid("hypergraph target", format!("need 1 <= k < n, got k={k}")));
    }
    let vocab = Vocabulary::new(vec![("R".into(), n)])?;
    let mut tuples = Vec::new();
    let mut tuple = vec![0usize; n];
    let mut counts = vec![0usize; m];
    'outer: loop {
        counts.iter_mut().for_each(|c| *c = 0);
        for &v in &tuple {
            counts[v] += 1;
        }
        if counts.iter().all(|&c| c <= k) {
            tuples.push(tuple.clone());
        }
        for slot in tuple.iter_mut() {
            *slot += 1;
            if *slot < m {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    Structure::from_parts(vocab, m, vec![tuples])
}

/// A system of linear equations over GF(2), canonical sorted supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XorSystem {
    variable_count: usize,
    equations: Vec<XorEquation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XorEquation {
    pub support: Vec<usize>,
    pub parity: bool,
}

impl XorSystem {
    pub fn new(variable_count: usize, equations: Vec<(Vec<usize>, bool)>) -> Result<XorSystem> {
        let mut eqs = Vec::with_capacity(equations.len());
        for (support, parity) in equations {
            eqs.push(XorEquation::new(variable_count, support, parity)?);
        }
        Ok(XorSystem { variable_count, equations: eqs })
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn equations(&self) -> &[XorEquation] {
        &self.equations
    }

    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.variable_count
            && self.equations.iter().all(|eq| {
                let sum = eq.support.iter().filter(|&&v| assignment[v]).count();
                (sum % 2 == 1) == eq.parity
            })
    }

    /// One equation per line, e.g. `v3 v5 = 1`; an empty support is just `= 0`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "vars {}", self.variable_count);
        for eq in &self.equations {
            for v in &eq.support {
                let _ = write!(out, "v{v} ");
            }
            let _ = writeln!(out, "= {}", if eq.parity { 1 } else { 0 });
        }
        out
    }

    pub fn from_text(text: &str) -> Result<XorSystem> {
        let mut variable_count = None;
        let mut equations = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("vars ") {
                variable_count = Some(rest.trim().parse::<usize>().map_err(|_| {
                    Error::invalid("xor system", format!("bad vars line {}", lineno + 1))
                })?);
                continue;
            }
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| {
                Error::invalid("xor system", format!("missing '=' on line {}", lineno + 1))
            })?;
            let parity = match rhs.trim() {
                "0" => false,
                "1" => true,
                other => {
                    return Err(Error::invalid(
                        "xor system",
                        format!("parity must be 0 or 1, got {other:?} on line {}", lineno + 1),
                    ))
                }
            };
            let mut support = Vec::new();
            for token in lhs.split_whitespace() {
                let v = token.strip_prefix('v').and_then(|s| s.parse::<usize>().ok()).ok_or_else(
                    || Error::invalid("xor system", format!("bad variable {token:?} on line {}", lineno + 1)),
                )?;
                support.push(v);
            }
            equations.push((support, parity));
        }
        let inferred = equations
            .iter()
            .flat_map(|(s, _)| s.iter().copied())
            .max()
            .map(|v| v + 1)
            .unwrap_or(0);
        XorSystem::new(variable_count.unwrap_or(inferred).max(inferred), equations)
    }
}

impl XorEquation {
    fn new(variable_count: usize, mut support: Vec<usize>, parity: bool) -> Result<XorEquation> {
        for &v in &support {
            if v >= variable_count {
                return Err(Error::OutOfUniverse { element: v, universe: variable_count });
            }
        }
        support.sort_unstable();
        support.dedup();
        Ok(XorEquation { support, parity })
    }
}

/// Encodes a parity-vocabulary structure as one GF(2) equation per tuple.
///
/// Entries with even multiplicity cancel at encoding time (`x ⊕ x = 0`), so a
/// tuple like `(3,3,5)` in the odd relation yields `v5 = 1`.
pub fn structure_to_xor(a: &Structure) -> Result<XorSystem> {
    let symbols = a.vocab().symbols();
    let arity_ok = a.vocab().uniform_arity().is_some();
    if symbols.len() != 2 || symbols[0].0 != "R0" || symbols[1].0 != "R1" || !arity_ok {
        return Err(Error::VocabMismatch(
            "xor encoding expects the parity vocabulary {R0, R1} of equal arity".into(),
        ));
    }
    let mut equations = Vec::new();
    for (idx, parity) in [(0usize, false), (1usize, true)] {
        for tuple in a.relations()[idx].tuples() {
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for &e in tuple {
                *counts.entry(e).or_default() += 1;
            }
            let support: Vec<usize> =
                counts.into_iter().filter(|(_, c)| c % 2 == 1).map(|(e, _)| e).collect();
            equations.push((support, parity));
        }
    }
    XorSystem::new(a.universe_size(), equations)
}

/// Gauss-Jordan elimination over packed 64-bit rows with an augmented parity
/// bit. Returns a satisfying assignment (free variables set to zero), or
/// `None` exactly when the system derives `0 = 1`.
pub fn solve_xor(sys: &XorSystem) -> Option<Vec<bool>> {
    let n = sys.variable_count;
    let words = (n + 1).div_ceil(64);
    let parity_bit = n;
    let mut rows: Vec<Vec<u64>> = sys
        .equations
        .iter()
        .map(|eq| {
            let mut row = vec![0u64; words.max(1)];
            for &v in &eq.support {
                row[v / 64] |= 1 << (v % 64);
            }
            if eq.parity {
                row[parity_bit / 64] |= 1 << (parity_bit % 64);
            }
            row
        })
        .collect();

    let mut pivot_of_col = vec![usize::MAX; n];
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col / 64] >> (col % 64) & 1 == 1)
        else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col / 64] >> (col % 64) & 1 == 1 {
                for (w, p) in row.iter_mut().zip(&pivot_row) {
                    *w ^= p;
                }
            }
        }
        pivot_of_col[col] = rank;
        rank += 1;
    }

    // A row with empty support but odd parity is the contradiction 0 = 1.
    for row in rows.iter().skip(rank) {
        if row[parity_bit / 64] >> (parity_bit % 64) & 1 == 1 {
            return None;
        }
    }

    let mut assignment = vec![false; n];
    for col in 0..n {
        let r = pivot_of_col[col];
        if r != usize::MAX {
            assignment[col] = rows[r][parity_bit / 64] >> (parity_bit % 64) & 1 == 1;
        }
    }
    debug_assert!(sys.is_satisfied(&assignment));
    Some(assignment)
}

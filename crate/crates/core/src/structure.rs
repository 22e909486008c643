//! Finite relational structures over integer universes.
//!
//! A universe of size `n` is always the prefix `{0, …, n-1}`. Relations are
//! canonical: tuples sorted lexicographically, no duplicates. Membership
//! queries go through a packed bitset keyed by mixed-radix tuple encoding
//! whenever `n^arity` fits the configured cap, and a hash set otherwise, so
//! the closure and game loops stay cheap.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest packed tuple space for which relations keep a bitset index.
const BITSET_CAP: usize = 1 << 24;

/// Default cap on the universe of a power structure.
pub const POWER_UNIVERSE_CAP: usize = 1 << 24;

/// A relational vocabulary: named symbols with positive arities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    symbols: Vec<(String, usize)>,
}

impl Vocabulary {
    pub fn new(symbols: Vec<(String, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (name, arity) in &symbols {
            if *arity == 0 {
                return Err(Error::invalid("vocabulary", format!("symbol {name} has arity 0")));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::invalid("vocabulary", format!("duplicate symbol {name}")));
            }
        }
        Ok(Vocabulary { symbols })
    }

    pub fn symbols(&self) -> &[(String, usize)] {
        &self.symbols
    }

    pub fn arity_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().find(|(s, _)| s == name).map(|(_, a)| *a)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|(s, _)| s == name)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// True when every symbol has the same arity; returns it.
    pub fn uniform_arity(&self) -> Option<usize> {
        let mut it = self.symbols.iter().map(|(_, a)| *a);
        let first = it.next()?;
        if it.all(|a| a == first) {
            Some(first)
        } else {
            None
        }
    }
}

fn pack(tuple: &[usize], universe: usize) -> usize {
    let mut code = 0usize;
    for &x in tuple.iter().rev() {
        code = code * universe + x;
    }
    code
}

#[derive(Clone, Debug)]
enum RelIndex {
    Bits(Vec<u64>),
    Set(HashSet<Vec<usize>>),
}

/// A canonical set of same-arity tuples over a fixed universe.
#[derive(Clone, Debug)]
pub struct Relation {
    universe: usize,
    arity: usize,
    tuples: Vec<Vec<usize>>,
    index: RelIndex,
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.arity == other.arity && self.tuples == other.tuples
    }
}
impl Eq for Relation {}

impl Relation {
    pub fn new(universe: usize, arity: usize, mut tuples: Vec<Vec<usize>>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::invalid("relation", "arity 0"));
        }
        for t in &tuples {
            if t.len() != arity {
                return Err(Error::ArityMismatch { expected: arity, got: t.len() });
            }
            for &x in t {
                if x >= universe {
                    return Err(Error::OutOfUniverse { element: x, universe });
                }
            }
        }
        tuples.sort();
        tuples.dedup();
        let index = Self::build_index(universe, arity, &tuples);
        Ok(Relation { universe, arity, tuples, index })
    }

    fn build_index(universe: usize, arity: usize, tuples: &[Vec<usize>]) -> RelIndex {
        let space = universe.checked_pow(arity as u32);
        match space {
            Some(sz) if sz <= BITSET_CAP => {
                let mut words = vec![0u64; sz.div_ceil(64)];
                for t in tuples {
                    let c = pack(t, universe);
                    words[c / 64] |= 1 << (c % 64);
                }
                RelIndex::Bits(words)
            }
            _ => RelIndex::Set(tuples.iter().cloned().collect()),
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Tuples in lexicographic order.
    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        if tuple.len() != self.arity || tuple.iter().any(|&x| x >= self.universe) {
            return false;
        }
        match &self.index {
            RelIndex::Bits(words) => {
                let c = pack(tuple, self.universe);
                words[c / 64] >> (c % 64) & 1 == 1
            }
            RelIndex::Set(set) => set.contains(tuple),
        }
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.tuples.iter().all(|t| other.contains(t))
    }
}

/// A finite relational structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    vocab: Vocabulary,
    n: usize,
    relations: Vec<Relation>,
}

impl Structure {
    /// Builds a structure; relations are given per symbol name, missing
    /// symbols get the empty relation, unknown names are rejected.
    pub fn new(
        vocab: Vocabulary,
        n: usize,
        relations: BTreeMap<String, Vec<Vec<usize>>>,
    ) -> Result<Self> {
        for name in relations.keys() {
            if vocab.index_of(name).is_none() {
                return Err(Error::invalid("structure", format!("unknown relation symbol {name}")));
            }
        }
        let mut rels = Vec::with_capacity(vocab.len());
        for (name, arity) in vocab.symbols() {
            let tuples = relations.get(name).cloned().unwrap_or_default();
            rels.push(Relation::new(n, *arity, tuples)?);
        }
        Ok(Structure { vocab, n, relations: rels })
    }

    pub fn from_parts(vocab: Vocabulary, n: usize, tuple_sets: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if tuple_sets.len() != vocab.len() {
            return Err(Error::invalid("structure", "relation count does not match vocabulary"));
        }
        let mut rels = Vec::with_capacity(vocab.len());
        for ((_, arity), tuples) in vocab.symbols().iter().zip(tuple_sets) {
            rels.push(Relation::new(n, *arity, tuples)?);
        }
        Ok(Structure { vocab, n, relations: rels })
    }

    pub fn empty(vocab: Vocabulary, n: usize) -> Self {
        let relations = vocab
            .symbols()
            .iter()
            .map(|(_, a)| Relation::new(n, *a, Vec::new()).expect("empty relation"))
            .collect();
        Structure { vocab, n, relations }
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn universe_size(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.vocab.index_of(name).map(|i| &self.relations[i])
    }

    pub fn contains(&self, name: &str, tuple: &[usize]) -> bool {
        self.relation(name).is_some_and(|r| r.contains(tuple))
    }

    /// Replaces one relation, keeping everything else.
    pub fn with_relation(&self, name: &str, tuples: Vec<Vec<usize>>) -> Result<Structure> {
        let idx = self
            .vocab
            .index_of(name)
            .ok_or_else(|| Error::invalid("structure", format!("unknown relation symbol {name}")))?;
        let mut rels = self.relations.clone();
        rels[idx] = Relation::new(self.n, self.vocab.symbols()[idx].1, tuples)?;
        Ok(Structure { vocab: self.vocab.clone(), n: self.n, relations: rels })
    }

    pub fn total_tuple_count(&self) -> usize {
        self.relations.iter().map(|r| r.len()).sum()
    }

    pub fn to_json(&self) -> StructureJson {
        let relations = self
            .vocab
            .symbols()
            .iter()
            .zip(&self.relations)
            .map(|((name, _), rel)| (name.clone(), rel.tuples().to_vec()))
            .collect();
        StructureJson {
            n: self.n,
            relations,
            vocab: self
                .vocab
                .symbols()
                .iter()
                .map(|(n, a)| SymbolJson { arity: *a, name: n.clone() })
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("structure serialization")
    }

    pub fn from_json_str(s: &str) -> Result<Structure> {
        let json: StructureJson = serde_json::from_str(s)?;
        json.try_into()
    }
}

/// Wire format: `{"vocab":[{"name":"R0","arity":3},…],"n":12,"relations":{"R0":[[0,2,4],…]}}`,
/// accepted with fields in any order. Canonical output sorts object keys and
/// tuples, so re-serialization is byte-stable.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureJson {
    pub n: usize,
    pub relations: BTreeMap<String, Vec<Vec<usize>>>,
    pub vocab: Vec<SymbolJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymbolJson {
    pub arity: usize,
    pub name: String,
}

impl TryFrom<StructureJson> for Structure {
    type Error = Error;

    fn try_from(json: StructureJson) -> Result<Structure> {
        let vocab = Vocabulary::new(json.vocab.into_iter().map(|s| (s.name, s.arity)).collect())?;
        Structure::new(vocab, json.n, json.relations)
    }
}

/// A finite partial map between two integer universes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialMap {
    pairs: BTreeMap<usize, usize>,
}

impl PartialMap {
    pub fn new() -> Self {
        PartialMap::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (a, b) in pairs {
            if let Some(&old) = map.get(&a) {
                if old != b {
                    return Err(Error::invalid("partial map", format!("{a} mapped to both {old} and {b}")));
                }
            }
            map.insert(a, b);
        }
        Ok(PartialMap { pairs: map })
    }

    pub fn identity(n: usize) -> Self {
        PartialMap { pairs: (0..n).map(|i| (i, i)).collect() }
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        self.pairs.insert(a, b);
    }

    pub fn get(&self, a: usize) -> Option<usize> {
        self.pairs.get(&a).copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().map(|(&a, &b)| (a, b))
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs.keys().copied()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = HashSet::new();
        self.pairs.values().all(|b| seen.insert(*b))
    }

    /// Inverse map; `None` if not injective.
    pub fn inverse(&self) -> Option<PartialMap> {
        let mut inv = BTreeMap::new();
        for (&a, &b) in &self.pairs {
            if inv.insert(b, a).is_some() {
                return None;
            }
        }
        Some(PartialMap { pairs: inv })
    }

    pub fn apply_tuple(&self, tuple: &[usize]) -> Option<Vec<usize>> {
        tuple.iter().map(|&x| self.get(x)).collect()
    }

    /// True when this is a total bijection between universes of size `n`.
    pub fn is_bijection_on(&self, n: usize) -> bool {
        self.pairs.len() == n
            && self.pairs.keys().all(|&a| a < n)
            && {
                let mut seen = vec![false; n];
                self.pairs.values().all(|&b| b < n && !std::mem::replace(&mut seen[b], true))
            }
    }
}

/// A variable assignment: variable indices `1..=k` to universe elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    bindings: BTreeMap<usize, usize>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn from_bindings(bindings: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Assignment { bindings: bindings.into_iter().collect() }
    }

    pub fn get(&self, var: usize) -> Option<usize> {
        self.bindings.get(&var).copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.bindings.keys().copied()
    }

    pub fn bindings(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bindings.iter().map(|(&v, &e)| (v, e))
    }

    pub fn range(&self) -> impl Iterator<Item = usize> + '_ {
        self.bindings.values().copied()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Overwriting update `α[a⃗/y⃗]`.
    pub fn update(&self, vars: &[usize], values: &[usize]) -> Assignment {
        debug_assert_eq!(vars.len(), values.len());
        let mut next = self.clone();
        for (&v, &e) in vars.iter().zip(values) {
            next.bindings.insert(v, e);
        }
        next
    }
}

/// Transposes a sequence of same-length tuples.
pub fn transpose(tuples: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let Some(first) = tuples.first() else {
        return Ok(Vec::new());
    };
    let m = first.len();
    for t in tuples {
        if t.len() != m {
            return Err(Error::ArityMismatch { expected: m, got: t.len() });
        }
    }
    Ok((0..m).map(|i| tuples.iter().map(|t| t[i]).collect()).collect())
}

fn check_same_vocab(a: &Structure, b: &Structure) -> Result<()> {
    if a.vocab != b.vocab {
        return Err(Error::VocabMismatch("structures have different vocabularies".into()));
    }
    Ok(())
}

/// Membership of `m` in `PI(A, B)`: injectivity plus, for every symbol and
/// every tuple over the domain, membership in `R^A` iff the image is in `R^B`.
pub fn is_partial_isomorphism(a: &Structure, b: &Structure, m: &PartialMap) -> Result<bool> {
    check_same_vocab(a, b)?;
    for (x, y) in m.pairs() {
        if x >= a.universe_size() {
            return Err(Error::OutOfUniverse { element: x, universe: a.universe_size() });
        }
        if y >= b.universe_size() {
            return Err(Error::OutOfUniverse { element: y, universe: b.universe_size() });
        }
    }
    if !m.is_injective() {
        return Ok(false);
    }
    let dom: Vec<usize> = m.domain().collect();
    for (idx, (_, arity)) in a.vocab.symbols().iter().enumerate() {
        let ra = &a.relations[idx];
        let rb = &b.relations[idx];
        if dom.is_empty() {
            continue;
        }
        let mut counters = vec![0usize; *arity];
        'tuples: loop {
            let tuple: Vec<usize> = counters.iter().map(|&i| dom[i]).collect();
            let image: Vec<usize> = tuple.iter().map(|&x| m.get(x).unwrap()).collect();
            if ra.contains(&tuple) != rb.contains(&image) {
                return Ok(false);
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
    Ok(true)
}

/// The substructure order: equal universe size and componentwise inclusion.
pub fn leq(a: &Structure, b: &Structure) -> Result<bool> {
    check_same_vocab(a, b)?;
    Ok(a.n == b.n && a.relations.iter().zip(&b.relations).all(|(ra, rb)| ra.is_subset_of(rb)))
}

/// Union: universe is the larger of the two, relations united componentwise.
pub fn union(a: &Structure, b: &Structure) -> Result<Structure> {
    check_same_vocab(a, b)?;
    let n = a.n.max(b.n);
    let mut tuple_sets = Vec::with_capacity(a.vocab.len());
    for (ra, rb) in a.relations.iter().zip(&b.relations) {
        let mut tuples = ra.tuples().to_vec();
        tuples.extend(rb.tuples().iter().cloned());
        tuple_sets.push(tuples);
    }
    Structure::from_parts(a.vocab.clone(), n, tuple_sets)
}

/// The power structure `B^m` with elements packed mixed-radix
/// (`(a_0,…,a_{m-1}) ↦ Σ a_j · n^j`).
pub fn power(b: &Structure, m: usize) -> Result<Structure> {
    power_with_cap(b, m, POWER_UNIVERSE_CAP)
}

pub fn power_with_cap(b: &Structure, m: usize, cap: usize) -> Result<Structure> {
    if m == 0 {
        return Err(Error::invalid("power", "exponent must be at least 1"));
    }
    let size = b
        .n
        .checked_pow(m as u32)
        .filter(|&s| s <= cap)
        .ok_or_else(|| Error::BudgetExceeded(format!("power universe {}^{m} exceeds cap {cap}", b.n)))?;
    let mut tuple_sets = Vec::with_capacity(b.vocab.len());
    for rel in &b.relations {
        let r = rel.arity();
        let k = rel.len();
        let mut tuples = Vec::new();
        if k > 0 {
            // Every m-sequence of base tuples yields one product tuple.
            let mut counters = vec![0usize; m];
            'seq: loop {
                let mut packed = vec![0usize; r];
                for j in (0..m).rev() {
                    let base = rel.tuples()[counters[j]].as_slice();
                    for i in 0..r {
                        packed[i] = packed[i] * b.n + base[i];
                    }
                }
                tuples.push(packed);
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
        tuple_sets.push(tuples);
    }
    Structure::from_parts(b.vocab.clone(), size, tuple_sets)
}

/// Packs one `m`-tuple of `B`-elements into the element code used by [`power`].
pub fn pack_power_element(coords: &[usize], n: usize) -> usize {
    pack(coords, n)
}

//! Shared test support: the naive pebble-game oracle and corpus generators.
//! Each integration test binary compiles this module separately and uses a
//! different slice of it.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyquant_core::family::Family;
use polyquant_core::structure::{is_partial_isomorphism, PartialMap, Structure, Vocabulary};

pub type Pos = Vec<Option<(usize, usize)>>;

/// Naive pebble-game solver: same game, but Duplicator's response sets are
/// found by enumerating subsets of the safe continuations explicitly, with
/// its own closure computation per candidate set. A winning response set can
/// only contain safe continuations (Spoiler picks any unsafe member), so the
/// subset space below the safe set is the whole search space; no use is made
/// of closure monotonicity or of the production solver's canonical rule.
pub struct NaiveOutcome {
    pub duplicator_wins: bool,
    pub safe: HashSet<Pos>,
}

struct NaiveCloser<'a> {
    family: &'a Family,
    n: usize,
    r: usize,
    memo: HashMap<u32, u32>,
}

impl<'a> NaiveCloser<'a> {
    fn new(family: &'a Family, n: usize, r: usize) -> Self {
        assert!(n.pow(r as u32) <= 32, "naive oracle is for tiny spaces");
        NaiveCloser { family, n, r, memo: HashMap::new() }
    }

    fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut t = Vec::with_capacity(self.r);
        for _ in 0..self.r {
            t.push(idx % self.n);
            idx /= self.n;
        }
        t
    }

    fn close(&mut self, start: u32) -> u32 {
        if let Some(&m) = self.memo.get(&start) {
            return m;
        }
        let arity = self.family.arity();
        let mut current = start;
        loop {
            let members: Vec<Vec<usize>> = (0..32u32)
                .filter(|&i| current >> i & 1 == 1)
                .map(|i| self.decode(i as usize))
                .collect();
            let mut next = current;
            if !members.is_empty() {
                let mut counters = vec![0usize; arity];
                'seq: loop {
                    let mut image_idx = 0usize;
                    let mut defined = true;
                    for coord in (0..self.r).rev() {
                        let args: Vec<usize> =
                            counters.iter().map(|&c| members[c][coord]).collect();
                        match self.family.eval(self.n, &args).expect("valid eval") {
                            Some(v) => image_idx = image_idx * self.n + v,
                            None => {
                                defined = false;
                                break;
                            }
                        }
                    }
                    if defined {
                        next |= 1 << image_idx;
                    }
                    for slot in counters.iter_mut() {
                        *slot += 1;
                        if *slot < members.len() {
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

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let smaller = permutations(n - 1);
    for p in smaller {
        for slot in 0..=p.len() {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

fn var_tuples(k: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(k: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for v in 1..=k {
            if !cur.contains(&v) {
                cur.push(v);
                rec(k, r, cur, out);
                cur.pop();
            }
        }
    }
    rec(k, r, &mut Vec::new(), &mut out);
    out
}

fn all_positions(k: usize, n: usize) -> Vec<Pos> {
    let mut positions: Vec<Pos> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for p in &positions {
            let mut q = p.clone();
            q.push(None);
            next.push(q.clone());
            q.pop();
            for x in 0..n {
                for y in 0..n {
                    let mut q = p.clone();
                    q.push(Some((x, y)));
                    next.push(q);
                }
            }
        }
        positions = next;
    }
    positions
}

fn pos_map(pos: &Pos) -> Option<PartialMap> {
    let mut map = PartialMap::new();
    for &slot in pos.iter().flatten().collect::<Vec<_>>() {
        let (a, b) = slot;
        if let Some(old) = map.get(a) {
            if old != b {
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

pub fn solve_naive(
    a: &Structure,
    b: &Structure,
    k: usize,
    family: &Family,
    arities: &[usize],
) -> NaiveOutcome {
    let n = a.universe_size();
    assert_eq!(n, b.universe_size(), "naive oracle assumes equal universes");
    let positions = all_positions(k, n);
    let index: HashMap<Pos, usize> =
        positions.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut alive: Vec<bool> = positions
        .iter()
        .map(|p| match pos_map(p) {
            Some(m) => is_partial_isomorphism(a, b, &m).expect("same vocab"),
            None => false,
        })
        .collect();
    let perms = permutations(n);
    let mut closers: HashMap<usize, NaiveCloser> = HashMap::new();
    for &r in arities {
        closers.insert(r, NaiveCloser::new(family, n, r));
    }

    let encode = |t: &[usize]| -> usize {
        let mut idx = 0;
        for &x in t.iter().rev() {
            idx = idx * n + x;
        }
        idx
    };

    loop {
        let mut died = Vec::new();
        'positions: for (pi, pos) in positions.iter().enumerate() {
            if !alive[pi] {
                continue;
            }
            for &r in arities {
                let sp = n.pow(r as u32);
                for vars in var_tuples(k, r) {
                    for left in [true, false] {
                        let mut some_f_works = false;
                        'bijections: for f in &perms {
                            // f maps the spoiler side to the response side.
                            let inv = {
                                let mut v = vec![0usize; n];
                                for (x, &y) in f.iter().enumerate() {
                                    v[y] = x;
                                }
                                v
                            };
                            let to_resp = if left { &inv } else { f };
                            for spoiler_idx in 0..sp {
                                let spoiler_t: Vec<usize> = {
                                    let mut idx = spoiler_idx;
                                    (0..r)
                                        .map(|_| {
                                            let d = idx % n;
                                            idx /= n;
                                            d
                                        })
                                        .collect()
                                };
                                let image_idx = encode(
                                    &spoiler_t.iter().map(|&x| to_resp[x]).collect::<Vec<_>>(),
                                );
                                // Safe continuations for this move.
                                let mut good: u32 = 0;
                                for val_idx in 0..sp {
                                    let val_t: Vec<usize> = {
                                        let mut idx = val_idx;
                                        (0..r)
                                            .map(|_| {
                                                let d = idx % n;
                                                idx /= n;
                                                d
                                            })
                                            .collect()
                                    };
                                    let mut next = pos.clone();
                                    for (i, &v) in vars.iter().enumerate() {
                                        next[v - 1] = if left {
                                            Some((val_t[i], spoiler_t[i]))
                                        } else {
                                            Some((spoiler_t[i], val_t[i]))
                                        };
                                    }
                                    if alive[index[&next]] {
                                        good |= 1 << val_idx;
                                    }
                                }
                                // Enumerate every response set below the safe
                                // continuations (the submask walk visits each
                                // subset exactly once, largest first).
                                let closer = closers.get_mut(&r).expect("closer");
                                let mut legal_found = false;
                                let mut sub = good;
                                loop {
                                    if closer.close(sub) >> image_idx & 1 == 1 {
                                        legal_found = true;
                                        break;
                                    }
                                    if sub == 0 {
                                        break;
                                    }
                                    sub = (sub - 1) & good;
                                }
                                if !legal_found {
                                    continue 'bijections;
                                }
                            }
                            some_f_works = true;
                            break;
                        }
                        if !some_f_works {
                            died.push(pi);
                            continue 'positions;
                        }
                    }
                }
            }
        }
        if died.is_empty() {
            break;
        }
        for pi in died {
            alive[pi] = false;
        }
    }

    let safe: HashSet<Pos> = positions
        .iter()
        .zip(&alive)
        .filter(|&(_, &ok)| ok)
        .map(|(p, _)| p.clone())
        .collect();
    let duplicator_wins = safe.contains(&vec![None; k]);
    NaiveOutcome { duplicator_wins, safe }
}

/// All structures with one unary relation on `n` elements.
pub fn all_unary_structures(n: usize) -> Vec<Structure> {
    let vocab = Vocabulary::new(vec![("R".into(), 1)]).unwrap();
    (0..(1u32 << n))
        .map(|mask| {
            let tuples: Vec<Vec<usize>> =
                (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| vec![i]).collect();
            Structure::from_parts(vocab.clone(), n, vec![tuples]).unwrap()
        })
        .collect()
}

/// A seeded random structure with one binary relation.
pub fn random_binary_structure(n: usize, rng: &mut ChaCha8Rng) -> Structure {
    let vocab = Vocabulary::new(vec![("R".into(), 2)]).unwrap();
    let density: f64 = rng.random_range(0.1..0.6);
    let mut tuples = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if rng.random_bool(density) {
                tuples.push(vec![x, y]);
            }
        }
    }
    Structure::from_parts(vocab, n, vec![tuples]).unwrap()
}

/// A seeded random simple graph structure on `n` vertices, plus its edge set.
pub fn random_graph(n: usize, rng: &mut ChaCha8Rng) -> polyquant_core::graph::OrderedGraph {
    let density: f64 = rng.random_range(0.2..0.8);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.random_bool(density) {
                edges.push((a, b));
            }
        }
    }
    polyquant_core::graph::OrderedGraph::new(n, edges).unwrap()
}

/// Relabels a graph by a seeded random permutation.
pub fn shuffled_copy(
    g: &polyquant_core::graph::OrderedGraph,
    rng: &mut ChaCha8Rng,
) -> polyquant_core::graph::OrderedGraph {
    let n = g.vertex_count();
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|&(a, b)| (perm[a], perm[b])).collect();
    polyquant_core::graph::OrderedGraph::new(n, edges).unwrap()
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

//! Colour refinement over one binary relation, used as the independent
//! oracle for the degenerate pebble game.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::structure::Structure;

/// Stable vertex partition of a structure under its binary symbol: colours
/// are canonical (ranked by sorted signature), so equal colours on two
/// jointly refined structures mean matching refinement classes.
pub fn color_refinement(a: &Structure, symbol: &str) -> Result<Vec<usize>> {
    let rel = a
        .relation(symbol)
        .ok_or_else(|| Error::invalid("color refinement", format!("no symbol {symbol}")))?;
    if rel.arity() != 2 {
        return Err(Error::invalid("color refinement", format!("{symbol} is not binary")));
    }
    Ok(refine_joint(&[(a, symbol)])?.pop().expect("one partition"))
}

/// Refines several structures in one colour space. Returns one colour vector
/// per structure.
fn refine_joint(inputs: &[(&Structure, &str)]) -> Result<Vec<Vec<usize>>> {
    #[derive(Default)]
    struct Node {
        out: Vec<usize>,
        inc: Vec<usize>,
    }
    // Flatten all universes into one colour space; the sides are compared by
    // colour histogram afterwards.
    let mut nodes: Vec<Node> = Vec::new();
    let mut offsets = Vec::new();
    for (s, symbol) in inputs {
        let rel = s
            .relation(symbol)
            .ok_or_else(|| Error::invalid("color refinement", format!("no symbol {symbol}")))?;
        if rel.arity() != 2 {
            return Err(Error::invalid("color refinement", format!("{symbol} is not binary")));
        }
        let off = nodes.len();
        offsets.push(off);
        nodes.extend((0..s.universe_size()).map(|_| Node::default()));
        for t in rel.tuples() {
            let (u, v) = (off + t[0], off + t[1]);
            nodes[u].out.push(v);
            nodes[v].inc.push(u);
        }
    }
    let total = nodes.len();
    let mut colors = vec![0usize; total];
    loop {
        let mut signatures: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::with_capacity(total);
        for (i, node) in nodes.iter().enumerate() {
            let mut outs: Vec<usize> = node.out.iter().map(|&v| colors[v]).collect();
            let mut ins: Vec<usize> = node.inc.iter().map(|&v| colors[v]).collect();
            outs.sort_unstable();
            ins.sort_unstable();
            signatures.push((colors[i], outs, ins));
        }
        let mut distinct: Vec<&(usize, Vec<usize>, Vec<usize>)> = signatures.iter().collect();
        distinct.sort();
        distinct.dedup();
        let rank: BTreeMap<_, usize> = distinct.iter().enumerate().map(|(r, &s)| (s.clone(), r)).collect();
        let next: Vec<usize> = signatures.iter().map(|s| rank[s]).collect();
        let old_classes = {
            let mut c = colors.clone();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        let new_classes = rank.len();
        colors = next;
        if new_classes == old_classes {
            break;
        }
    }
    let mut out = Vec::with_capacity(inputs.len());
    for (idx, (s, _)) in inputs.iter().enumerate() {
        let off = offsets[idx];
        out.push(colors[off..off + s.universe_size()].to_vec());
    }
    Ok(out)
}

/// True when colour refinement distinguishes the two structures: different
/// universe sizes or different stable colour histograms under joint
/// refinement.
pub fn cr_distinguishes(a: &Structure, b: &Structure, symbol: &str) -> Result<bool> {
    if a.universe_size() != b.universe_size() {
        return Ok(true);
    }
    let parts = refine_joint(&[(a, symbol), (b, symbol)])?;
    let hist = |v: &[usize]| {
        let mut h: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in v {
            *h.entry(c).or_default() += 1;
        }
        h
    };
    Ok(hist(&parts[0]) != hist(&parts[1]))
}

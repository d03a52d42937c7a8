//! Dominating sequences: chains of vertices with nested witness sets.
//!
//! A sequence starts at a vertex whose neighborhood meets the first witness
//! threshold. Each later element must come from the pseudo-cover element
//! pool of its predecessor and keep a large enough witness set, where the
//! witness sets are the canonical ones: the first is the full neighborhood
//! of the start vertex, and each next one is the intersection of the
//! previous witness set with the open neighborhood of the new element.
//! Canonical witness sets are the largest allowed choice, so they admit the
//! most extensions; every upper-bound property asserted elsewhere holds for
//! any valid choice.
//!
//! Sequence elements are pairwise distinct: a repeated vertex cannot shrink
//! its own witness set and would let sequences grow forever.

use std::collections::BTreeSet;

use crate::graph::{Graph, Vertex};
use crate::params::{count_at_least, Params};
use crate::pseudocover::{pseudocover_elements, ElementPools};

/// A dominating sequence with its canonical witness trace. `witnesses[i]`
/// belongs to `sequence[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominatingSequence {
    pub sequence: Vec<Vertex>,
    pub witnesses: Vec<BTreeSet<Vertex>>,
    pub maximal: bool,
}

impl DominatingSequence {
    pub fn last(&self) -> Vertex {
        *self.sequence.last().expect("sequences are nonempty")
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }
}

/// All maximal dominating sequences starting at `v`: exactly those with no
/// legal extension. Starts whose neighborhood misses the first threshold
/// have none.
pub fn enumerate_maximal_sequences(
    g: &Graph,
    v: Vertex,
    params: &Params,
    pools: &ElementPools,
) -> Vec<DominatingSequence> {
    enumerate_maximal_sequences_with(g, v, params, &|u| (*pools.get(u)).clone())
}

/// Enumeration with an arbitrary pool source; the distributed realization
/// passes the pools it received over the wire instead of recomputing them.
pub fn enumerate_maximal_sequences_with<F>(
    g: &Graph,
    v: Vertex,
    params: &Params,
    pool_of: &F,
) -> Vec<DominatingSequence>
where
    F: Fn(Vertex) -> BTreeSet<Vertex>,
{
    let first = g.neighbors(v).clone();
    if !count_at_least(first.len(), &params.witness_threshold(1)) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut sequence = vec![v];
    let mut witnesses = vec![first];
    extend(g, params, pool_of, &mut sequence, &mut witnesses, &mut out);
    out
}

fn extend<F>(
    g: &Graph,
    params: &Params,
    pool_of: &F,
    sequence: &mut Vec<Vertex>,
    witnesses: &mut Vec<BTreeSet<Vertex>>,
    out: &mut Vec<DominatingSequence>,
) where
    F: Fn(Vertex) -> BTreeSet<Vertex>,
{
    let last = *sequence.last().expect("sequence starts nonempty");
    let witness = witnesses.last().expect("one witness per element").clone();
    let next_threshold = params.witness_threshold(sequence.len() as u32 + 1);
    let mut extended = false;
    for u in pool_of(last) {
        if sequence.contains(&u) {
            continue;
        }
        let next: BTreeSet<Vertex> = g.neighbors(u).intersection(&witness).copied().collect();
        if !count_at_least(next.len(), &next_threshold) {
            continue;
        }
        extended = true;
        sequence.push(u);
        witnesses.push(next);
        extend(g, params, pool_of, sequence, witnesses, out);
        witnesses.pop();
        sequence.pop();
    }
    if !extended {
        out.push(DominatingSequence {
            sequence: sequence.clone(),
            witnesses: witnesses.clone(),
            maximal: true,
        });
    }
}

/// Independent validity check: recomputes the canonical witness sets and
/// every membership and threshold condition from scratch.
pub fn is_valid_sequence(g: &Graph, sequence: &[Vertex], params: &Params) -> bool {
    let Some((&first, rest)) = sequence.split_first() else {
        return false;
    };
    let mut distinct: BTreeSet<Vertex> = BTreeSet::from([first]);
    let mut witness = g.neighbors(first).clone();
    if !count_at_least(witness.len(), &params.witness_threshold(1)) {
        return false;
    }
    let mut prev = first;
    for (idx, &u) in rest.iter().enumerate() {
        if !distinct.insert(u) {
            return false;
        }
        if !pseudocover_elements(g, prev, params).contains(&u) {
            return false;
        }
        witness = g.neighbors(u).intersection(&witness).copied().collect();
        if !count_at_least(witness.len(), &params.witness_threshold(idx as u32 + 2)) {
            return false;
        }
        prev = u;
    }
    true
}

/// Independent maximality check: a valid sequence is maximal when no vertex
/// extends it.
pub fn has_extension(g: &Graph, seq: &DominatingSequence, params: &Params) -> bool {
    let last = seq.last();
    let witness = seq.witnesses.last().expect("nonempty");
    let threshold = params.witness_threshold(seq.len() as u32 + 1);
    pseudocover_elements(g, last, params).iter().any(|&u| {
        !seq.sequence.contains(&u)
            && count_at_least(
                g.neighbors(u).intersection(witness).count(),
                &threshold,
            )
    })
}

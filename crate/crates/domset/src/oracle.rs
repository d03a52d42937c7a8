//! Ground-truth machinery: exact and greedy minimum dominating sets, the
//! validity check, and the proof-scaffolding set used to assert size bounds.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cover::cover_with_budget;
use crate::graph::{Graph, Vertex};

/// Default vertex-count guard for the exact search.
pub const EXACT_GUARD: usize = 40;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error(
        "graph has {n} vertices, above the exact-search guard of {guard}; \
         use the greedy oracle instead"
    )]
    GuardExceeded { n: usize, guard: usize },
    #[error("the candidate set contains vertex {0}, which is not in the graph")]
    ForeignVertex(Vertex),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    Exact,
    Greedy,
}

impl OracleMethod {
    pub fn label(&self) -> &'static str {
        match self {
            OracleMethod::Exact => "exact",
            OracleMethod::Greedy => "greedy",
        }
    }
}

/// A dominating set with a provenance claim: `optimal` means no smaller
/// dominating set exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomSetCertificate {
    pub set: BTreeSet<Vertex>,
    pub optimal: bool,
    pub method: OracleMethod,
}

/// True exactly when every vertex is in `set` or adjacent to it.
pub fn verify_dominating(g: &Graph, set: &BTreeSet<Vertex>) -> Result<bool, OracleError> {
    if let Some(&v) = set.iter().find(|v| !g.has_vertex(**v)) {
        return Err(OracleError::ForeignVertex(v));
    }
    let covered = g.closed_neighborhood_of_set(set);
    Ok(g.vertices().all(|v| covered.contains(&v)))
}

/// Greedy dominating set: repeatedly take the vertex covering the most not
/// yet dominated vertices, ties broken by lowest id.
pub fn greedy_domset(g: &Graph) -> DomSetCertificate {
    let mut undominated = g.vertex_set();
    let mut set = BTreeSet::new();
    while !undominated.is_empty() {
        let best = g
            .vertices()
            .max_by_key(|&z| {
                let gain = g.neighbors(z).iter().filter(|u| undominated.contains(u)).count()
                    + usize::from(undominated.contains(&z));
                (gain, std::cmp::Reverse(z))
            })
            .expect("graph has vertices while some are undominated");
        set.insert(best);
        undominated.remove(&best);
        for u in g.neighbors(best) {
            undominated.remove(u);
        }
    }
    DomSetCertificate {
        set,
        optimal: false,
        method: OracleMethod::Greedy,
    }
}

/// Exact minimum dominating set by branch and bound with the default guard.
pub fn exact_min_domset(g: &Graph) -> Result<DomSetCertificate, OracleError> {
    exact_min_domset_guarded(g, EXACT_GUARD)
}

/// Exact minimum dominating set by branch and bound: branch on the
/// dominators of an undominated vertex with the fewest choices, prune with
/// the greedy upper bound and a coverage lower bound.
pub fn exact_min_domset_guarded(g: &Graph, guard: usize) -> Result<DomSetCertificate, OracleError> {
    let n = g.vertex_count();
    if n > guard {
        return Err(OracleError::GuardExceeded { n, guard });
    }
    let mut best = greedy_domset(g).set;
    let mut chosen = BTreeSet::new();
    branch(g, g.vertex_set(), &mut chosen, &mut best);
    Ok(DomSetCertificate {
        set: best,
        optimal: true,
        method: OracleMethod::Exact,
    })
}

fn branch(
    g: &Graph,
    undominated: BTreeSet<Vertex>,
    chosen: &mut BTreeSet<Vertex>,
    best: &mut BTreeSet<Vertex>,
) {
    if undominated.is_empty() {
        if chosen.len() < best.len() {
            *best = chosen.clone();
        }
        return;
    }
    // Lower bound: every chosen vertex can dominate at most one more than
    // the largest remaining coverage.
    let max_cover = undominated
        .iter()
        .flat_map(|&w| g.closed_neighborhood(w))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|z| {
            g.neighbors(z).iter().filter(|u| undominated.contains(u)).count()
                + usize::from(undominated.contains(&z))
        })
        .max()
        .unwrap_or(1)
        .max(1);
    let lower = undominated.len().div_ceil(max_cover);
    if chosen.len() + lower >= best.len() {
        return;
    }
    let w = undominated
        .iter()
        .copied()
        .min_by_key(|&w| (g.degree(w), w))
        .expect("undominated is nonempty");
    for z in g.closed_neighborhood(w) {
        chosen.insert(z);
        let mut rest = undominated.clone();
        rest.remove(&z);
        for u in g.neighbors(z) {
            rest.remove(u);
        }
        branch(g, rest, chosen, best);
        chosen.remove(&z);
    }
}

/// The scaffolding set: the given dominating set plus every vertex whose
/// neighborhood cannot be covered by `budget` members of it other than the
/// vertex itself. Never computed by the distributed algorithm; it exists to
/// make size bounds checkable.
pub fn scaffolding_set(g: &Graph, domset: &BTreeSet<Vertex>, budget: usize) -> BTreeSet<Vertex> {
    let mut out = domset.clone();
    for v in g.vertices() {
        let mut pool = domset.clone();
        pool.remove(&v);
        if cover_with_budget(g, g.neighbors(v), v, budget, Some(&pool)).is_none() {
            out.insert(v);
        }
    }
    out
}

/// The vertices added by [`scaffolding_set`] on top of the dominating set.
pub fn scaffolding_extras(
    g: &Graph,
    domset: &BTreeSet<Vertex>,
    budget: usize,
) -> BTreeSet<Vertex> {
    scaffolding_set(g, domset, budget)
        .difference(domset)
        .copied()
        .collect()
}

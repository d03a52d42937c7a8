//! Budgeted covering: can a target set be dominated by a handful of vertices?
//!
//! The decision is made exactly by bounded-depth branching on an uncovered
//! target element, because the first phase of the algorithm needs the exact
//! predicate. A greedy pre-pass can confirm feasibility early but never
//! declares infeasibility.

use std::collections::{BTreeMap, BTreeSet};

use num::rational::Ratio;
use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("the target set must be nonempty")]
    EmptyTarget,
}

/// Searches for a set `Z` of at most `budget` vertices, none equal to
/// `excluded`, with the whole `target` inside the closed neighborhood of
/// `Z`. Returns `None` exactly when no such set exists.
///
/// Candidates default to the closed neighborhood of the target minus the
/// excluded vertex (any dominator of a target element lives there); a caller
/// may restrict them further via `pool`.
pub fn cover_with_budget(
    g: &Graph,
    target: &BTreeSet<Vertex>,
    excluded: Vertex,
    budget: usize,
    pool: Option<&BTreeSet<Vertex>>,
) -> Option<BTreeSet<Vertex>> {
    if target.is_empty() {
        return Some(BTreeSet::new());
    }
    let restricted = pool.is_some();
    let pool: BTreeSet<Vertex> = match pool {
        Some(p) => p.iter().copied().filter(|&z| z != excluded).collect(),
        None => g
            .closed_neighborhood_of_set(target)
            .into_iter()
            .filter(|&z| z != excluded)
            .collect(),
    };
    // A small target covers itself element by element.
    if !restricted && target.len() <= budget && !target.contains(&excluded) {
        return Some(target.clone());
    }

    if let Some(found) = greedy_cover(g, target, &pool, budget) {
        return Some(found);
    }
    let mut chosen = BTreeSet::new();
    branch_cover(g, target.clone(), &pool, budget, &mut chosen)
}

/// Greedy packing of uncovered elements with pairwise-disjoint dominator
/// sets; each packed element costs one budget unit, so the packing size is
/// a lower bound on any remaining cover.
fn packing_lower_bound(
    g: &Graph,
    uncovered: &BTreeSet<Vertex>,
    pool: &BTreeSet<Vertex>,
    chosen: &BTreeSet<Vertex>,
    stop_at: usize,
) -> usize {
    let mut used: BTreeSet<Vertex> = BTreeSet::new();
    let mut packed = 0;
    for &w in uncovered {
        let candidates: Vec<Vertex> = g
            .closed_neighborhood(w)
            .into_iter()
            .filter(|z| pool.contains(z) && !chosen.contains(z))
            .collect();
        if candidates.iter().any(|z| used.contains(z)) {
            continue;
        }
        packed += 1;
        if packed >= stop_at {
            break;
        }
        used.extend(candidates);
    }
    packed
}

fn greedy_cover(
    g: &Graph,
    target: &BTreeSet<Vertex>,
    pool: &BTreeSet<Vertex>,
    budget: usize,
) -> Option<BTreeSet<Vertex>> {
    let mut uncovered = target.clone();
    let mut chosen = BTreeSet::new();
    while !uncovered.is_empty() {
        if chosen.len() == budget {
            return None;
        }
        let mut best: Option<(usize, Vertex)> = None;
        for &z in pool {
            if chosen.contains(&z) {
                continue;
            }
            let gain = covered_count(g, z, &uncovered);
            if gain > 0 && best.is_none_or(|(b, _)| gain > b) {
                best = Some((gain, z));
            }
        }
        let (_, z) = best?;
        chosen.insert(z);
        remove_covered(g, z, &mut uncovered);
    }
    Some(chosen)
}

fn branch_cover(
    g: &Graph,
    uncovered: BTreeSet<Vertex>,
    pool: &BTreeSet<Vertex>,
    budget: usize,
    chosen: &mut BTreeSet<Vertex>,
) -> Option<BTreeSet<Vertex>> {
    if uncovered.is_empty() {
        return Some(chosen.clone());
    }
    if chosen.len() == budget {
        return None;
    }
    let slack = budget - chosen.len();
    if packing_lower_bound(g, &uncovered, pool, chosen, slack + 1) > slack {
        return None;
    }
    // Branch on the uncovered element with the fewest remaining dominators.
    let mut pick: Option<(usize, Vertex)> = None;
    for &w in &uncovered {
        let count = g
            .closed_neighborhood(w)
            .iter()
            .filter(|z| pool.contains(z) && !chosen.contains(z))
            .count();
        if pick.is_none_or(|(c, _)| count < c) {
            pick = Some((count, w));
        }
    }
    let (_, w) = pick.expect("uncovered set is nonempty");
    let candidates: Vec<Vertex> = g
        .closed_neighborhood(w)
        .into_iter()
        .filter(|z| pool.contains(z) && !chosen.contains(z))
        .collect();
    for z in candidates {
        chosen.insert(z);
        let mut rest = uncovered.clone();
        remove_covered(g, z, &mut rest);
        if let Some(found) = branch_cover(g, rest, pool, budget, chosen) {
            return Some(found);
        }
        chosen.remove(&z);
    }
    None
}

fn covered_count(g: &Graph, z: Vertex, set: &BTreeSet<Vertex>) -> usize {
    let in_nbrs = g.neighbors(z).iter().filter(|v| set.contains(v)).count();
    in_nbrs + usize::from(set.contains(&z))
}

fn remove_covered(g: &Graph, z: Vertex, set: &mut BTreeSet<Vertex>) {
    set.remove(&z);
    for v in g.neighbors(z) {
        set.remove(v);
    }
}

/// All vertices whose closed neighborhood covers at least a `strength`
/// fraction of `target`; the comparison is exact.
pub fn strong_vertices(
    g: &Graph,
    target: &BTreeSet<Vertex>,
    strength: Ratio<i64>,
) -> Result<BTreeSet<Vertex>, CoverError> {
    if target.is_empty() {
        return Err(CoverError::EmptyTarget);
    }
    Ok(coverage_counts(g, target)
        .into_iter()
        .filter(|&(_, count)| {
            count as i128 * *strength.denom() as i128
                >= *strength.numer() as i128 * target.len() as i128
        })
        .map(|(z, _)| z)
        .collect())
}

/// How many elements of `target` each vertex covers with its closed
/// neighborhood. Vertices covering nothing are absent.
pub fn coverage_counts(g: &Graph, target: &BTreeSet<Vertex>) -> BTreeMap<Vertex, usize> {
    let mut counts: BTreeMap<Vertex, usize> = BTreeMap::new();
    for &x in target {
        *counts.entry(x).or_default() += 1;
        for &z in g.neighbors(x) {
            *counts.entry(z).or_default() += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::counterexample;

    fn star(leaves: u32) -> Graph {
        Graph::from_edges((1..=leaves).map(|i| (0, i))).unwrap()
    }

    fn cycle(n: u32) -> Graph {
        Graph::from_edges((0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    /// Exhaustive search over subsets of the default candidate pool; the
    /// independent oracle for the branching implementation.
    fn cover_bruteforce(
        g: &Graph,
        target: &BTreeSet<Vertex>,
        excluded: Vertex,
        budget: usize,
    ) -> Option<BTreeSet<Vertex>> {
        let pool: Vec<Vertex> = g
            .closed_neighborhood_of_set(target)
            .into_iter()
            .filter(|&z| z != excluded)
            .collect();
        let mut best: Option<BTreeSet<Vertex>> = None;
        for mask in 0u32..(1 << pool.len()) {
            let subset: BTreeSet<Vertex> = (0..pool.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| pool[i])
                .collect();
            if subset.len() > budget {
                continue;
            }
            let covered = g.closed_neighborhood_of_set(&subset);
            if target.is_subset(&covered) && best.as_ref().is_none_or(|b| subset.len() < b.len()) {
                best = Some(subset);
            }
        }
        best
    }

    #[test]
    fn singleton_target_with_budget_one() {
        let g = star(3);
        let target = BTreeSet::from([1]);
        let z = cover_with_budget(&g, &target, 0, 1, None).unwrap();
        assert_eq!(z.len(), 1);
        assert!(target.is_subset(&g.closed_neighborhood_of_set(&z)));
    }

    #[test]
    fn layered_graph_small_case_coverable() {
        // Second spine vertex picks up the satellite the first one misses.
        let g = counterexample(2, 3);
        let w1 = 2;
        let target = g.neighbors(w1).clone();
        assert_eq!(target, BTreeSet::from([0, 5, 8]));
        let z = cover_with_budget(&g, &target, w1, 2, None).unwrap();
        assert_eq!(z, BTreeSet::from([0, 1]));
        assert!(cover_bruteforce(&g, &target, w1, 2).is_some());
    }

    #[test]
    fn layered_graph_wide_case_needs_five() {
        // Each satellite of a middle vertex is dominated only by itself, the
        // middle vertex, or its own spine vertex, so five dominators are
        // needed and a budget of two fails.
        let g = counterexample(5, 4);
        let w1 = 5;
        let target = g.neighbors(w1).clone();
        assert_eq!(cover_with_budget(&g, &target, w1, 2, None), None);
        assert_eq!(cover_bruteforce(&g, &target, w1, 2), None);
        assert!(cover_with_budget(&g, &target, w1, 5, None).is_some());
    }

    #[test]
    fn branching_matches_bruteforce_on_random_targets() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for seed in 0..30 {
            let g = crate::generators::random_sparse(10, Ratio::from_integer(3), seed).unwrap();
            let v = rng.gen_range(0..10);
            if g.degree(v) == 0 {
                continue;
            }
            let target = g.neighbors(v).clone();
            for budget in 0..4 {
                let fast = cover_with_budget(&g, &target, v, budget, None);
                let slow = cover_bruteforce(&g, &target, v, budget);
                assert_eq!(fast.is_some(), slow.is_some(), "seed {seed} budget {budget}");
                if let Some(z) = fast {
                    assert!(z.len() <= budget);
                    assert!(!z.contains(&v));
                    assert!(target.is_subset(&g.closed_neighborhood_of_set(&z)));
                }
            }
        }
    }

    #[test]
    fn restricted_pool_is_respected() {
        let g = star(4);
        let target = g.neighbors(0).clone();
        let pool = BTreeSet::from([1, 2]);
        // Leaves only cover themselves, so the restricted pool fails.
        assert_eq!(cover_with_budget(&g, &target, 0, 4, Some(&pool)), None);
    }

    #[test]
    fn empty_target_is_trivially_covered() {
        let g = star(2);
        assert_eq!(
            cover_with_budget(&g, &BTreeSet::new(), 0, 0, None),
            Some(BTreeSet::new())
        );
    }

    #[test]
    fn strong_vertices_on_star_neighborhood() {
        let g = star(4);
        let target = g.neighbors(0).clone();
        let strong = strong_vertices(&g, &target, Ratio::new(1, 2)).unwrap();
        assert!(strong.contains(&0));
        assert!(strong.iter().all(|&z| z == 0));
    }

    #[test]
    fn full_coverage_is_strong_for_any_ratio() {
        let g = star(5);
        let target = g.neighbors(0).clone();
        let strong = strong_vertices(&g, &target, Ratio::from_integer(1)).unwrap();
        assert_eq!(strong, BTreeSet::from([0]));
    }

    #[test]
    fn strong_vertices_on_six_cycle() {
        let g = cycle(6);
        let target = BTreeSet::from([0, 2, 4]);
        let strong = strong_vertices(&g, &target, Ratio::new(1, 3)).unwrap();
        assert_eq!(strong, g.vertex_set());
    }

    #[test]
    fn strong_vertices_rejects_empty_target() {
        let g = star(2);
        assert_eq!(
            strong_vertices(&g, &BTreeSet::new(), Ratio::new(1, 2)),
            Err(CoverError::EmptyTarget)
        );
    }
}

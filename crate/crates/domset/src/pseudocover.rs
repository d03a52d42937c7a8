//! Pseudo-covers: short sequences of strong vertices that each cover many
//! new elements of a target set and jointly leave only a small residual.
//!
//! A sequence `(v_1, ..., v_m)` is a pseudo-cover of `W` when
//! - at most `residual_cap` elements of `W` escape all of the closed
//!   neighborhoods of the sequence,
//! - every `v_i` covers at least a `strength` fraction of what was left of
//!   `W` before it,
//! - every `v_i` covers at least `min_gain` new elements, and
//! - `m <= cover_budget`.
//!
//! In a graph whose shallow-minor density is bounded there can only be few
//! such sequences per neighborhood, which is what makes the element pool a
//! useful restricted candidate set for dominating sequences.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

use thiserror::Error;

use crate::cover::coverage_counts;
use crate::graph::{Graph, Vertex};
use crate::params::Params;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PseudoCoverError {
    #[error("target has {size} elements, below the residual cap {cap}")]
    TargetTooSmall { size: usize, cap: u64 },
    #[error("the given set does not cover the target")]
    NotACover,
    #[error("cover has {size} elements, above the budget {budget}")]
    CoverTooLarge { size: usize, budget: u32 },
}

/// A pseudo-cover together with its residual trace. `residuals[i]` is what
/// is left of the target after the first `i` sequence elements; in
/// particular `residuals[0]` is the target itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoCover {
    pub sequence: Vec<Vertex>,
    pub residuals: Vec<BTreeSet<Vertex>>,
}

impl PseudoCover {
    pub fn final_residual(&self) -> &BTreeSet<Vertex> {
        self.residuals.last().expect("trace contains the target")
    }
}

fn strong_enough(count: usize, residual_len: usize, params: &Params) -> bool {
    count as i128 * *params.strength.denom() as i128
        >= *params.strength.numer() as i128 * residual_len as i128
}

/// Independent validity checker for a candidate sequence; recomputes every
/// condition from scratch.
pub fn is_valid_pseudocover(
    g: &Graph,
    target: &BTreeSet<Vertex>,
    sequence: &[Vertex],
    params: &Params,
) -> bool {
    if sequence.len() > params.cover_budget as usize {
        return false;
    }
    let mut residual = target.clone();
    for &v in sequence {
        let covered = g
            .closed_neighborhood(v)
            .intersection(&residual)
            .count();
        if covered < params.min_gain as usize || !strong_enough(covered, residual.len(), params) {
            return false;
        }
        for u in g.closed_neighborhood(v) {
            residual.remove(&u);
        }
    }
    residual.len() as u64 <= params.residual_cap
}

/// All pseudo-covers of an arbitrary target set, in depth-first order with
/// candidates visited by ascending id.
pub fn pseudocovers_of_target(
    g: &Graph,
    target: &BTreeSet<Vertex>,
    params: &Params,
) -> Vec<PseudoCover> {
    let mut out = Vec::new();
    let mut sequence = Vec::new();
    let mut residuals = vec![target.clone()];
    dfs(g, params, &mut sequence, &mut residuals, &mut out);
    out
}

fn dfs(
    g: &Graph,
    params: &Params,
    sequence: &mut Vec<Vertex>,
    residuals: &mut Vec<BTreeSet<Vertex>>,
    out: &mut Vec<PseudoCover>,
) {
    let residual = residuals.last().expect("trace is never empty").clone();
    if residual.len() as u64 <= params.residual_cap {
        out.push(PseudoCover {
            sequence: sequence.clone(),
            residuals: residuals.clone(),
        });
    }
    if sequence.len() == params.cover_budget as usize
        || (residual.len() as u64) < params.min_gain
    {
        return;
    }
    for (z, count) in coverage_counts(g, &residual) {
        if (count as u64) < params.min_gain || !strong_enough(count, residual.len(), params) {
            continue;
        }
        let mut next = residual.clone();
        next.remove(&z);
        for u in g.neighbors(z) {
            next.remove(u);
        }
        sequence.push(z);
        residuals.push(next);
        dfs(g, params, sequence, residuals, out);
        residuals.pop();
        sequence.pop();
    }
}

/// All pseudo-covers of the open neighborhood of `v`. Neighborhoods of at
/// most `min_gain` elements have none by convention.
pub fn enumerate_pseudocovers(g: &Graph, v: Vertex, params: &Params) -> Vec<PseudoCover> {
    let target = g.neighbors(v);
    if target.len() as u64 <= params.min_gain {
        return Vec::new();
    }
    pseudocovers_of_target(g, target, params)
}

/// Orders a budget-sized cover greedily by marginal coverage and truncates
/// it at the longest prefix that satisfies the strength and gain conditions.
/// The result is always a valid pseudo-cover of the target: the elements
/// after the cut each cover fewer than `min_gain` residual elements, and
/// jointly they cover the whole residual, so the residual fits under the cap.
pub fn pseudocover_from_cover(
    g: &Graph,
    target: &BTreeSet<Vertex>,
    cover: &BTreeSet<Vertex>,
    params: &Params,
) -> Result<PseudoCover, PseudoCoverError> {
    if (target.len() as u64) < params.residual_cap {
        return Err(PseudoCoverError::TargetTooSmall {
            size: target.len(),
            cap: params.residual_cap,
        });
    }
    if cover.len() > params.cover_budget as usize {
        return Err(PseudoCoverError::CoverTooLarge {
            size: cover.len(),
            budget: params.cover_budget,
        });
    }
    if !target.is_subset(&g.closed_neighborhood_of_set(cover)) {
        return Err(PseudoCoverError::NotACover);
    }

    let mut remaining = cover.clone();
    let mut residual = target.clone();
    let mut sequence = Vec::new();
    let mut residuals = vec![residual.clone()];
    while !remaining.is_empty() {
        let z = remaining
            .iter()
            .copied()
            .max_by_key(|&z| {
                let count = g.closed_neighborhood(z).intersection(&residual).count();
                (count, std::cmp::Reverse(z))
            })
            .expect("remaining is nonempty");
        remaining.remove(&z);
        sequence.push(z);
        residual.remove(&z);
        for u in g.neighbors(z) {
            residual.remove(u);
        }
        residuals.push(residual.clone());
    }

    let mut keep = 0;
    for (i, &z) in sequence.iter().enumerate() {
        let before = &residuals[i];
        let covered = g.closed_neighborhood(z).intersection(before).count();
        if covered >= params.min_gain as usize && strong_enough(covered, before.len(), params) {
            keep = i + 1;
        } else {
            break;
        }
    }
    sequence.truncate(keep);
    residuals.truncate(keep + 1);
    let result = PseudoCover { sequence, residuals };
    debug_assert!(is_valid_pseudocover(g, target, &result.sequence, params));
    Ok(result)
}

/// The element pool of `v`: every vertex appearing in some pseudo-cover of
/// the neighborhood of `v`.
pub fn pseudocover_elements(g: &Graph, v: Vertex, params: &Params) -> BTreeSet<Vertex> {
    enumerate_pseudocovers(g, v, params)
        .into_iter()
        .flat_map(|pc| pc.sequence)
        .collect()
}

/// Memoizing wrapper around [`pseudocover_elements`]; sequence enumeration
/// queries the same pools over and over.
pub struct ElementPools<'a> {
    g: &'a Graph,
    params: &'a Params,
    cache: RefCell<BTreeMap<Vertex, Rc<BTreeSet<Vertex>>>>,
}

impl<'a> ElementPools<'a> {
    pub fn new(g: &'a Graph, params: &'a Params) -> Self {
        ElementPools {
            g,
            params,
            cache: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn get(&self, v: Vertex) -> Rc<BTreeSet<Vertex>> {
        if let Some(hit) = self.cache.borrow().get(&v) {
            return Rc::clone(hit);
        }
        let pool = Rc::new(pseudocover_elements(self.g, v, self.params));
        self.cache.borrow_mut().insert(v, Rc::clone(&pool));
        pool
    }
}

/// Iterated element pools: the union of pools of `start`, pools of those
/// pools, and so on, `depth` levels deep.
pub fn element_closure(
    g: &Graph,
    start: &BTreeSet<Vertex>,
    params: &Params,
    depth: u32,
) -> BTreeSet<Vertex> {
    assert!(depth >= 1);
    let pools = ElementPools::new(g, params);
    let mut closure = BTreeSet::new();
    let mut level: BTreeSet<Vertex> = start.clone();
    for _ in 0..depth {
        let next: BTreeSet<Vertex> = level
            .iter()
            .flat_map(|&v| pools.get(v).iter().copied().collect::<Vec<_>>())
            .collect();
        closure.extend(next.iter().copied());
        level = next;
    }
    closure
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{ParamOverrides, TMode};
    use num::rational::Ratio;

    fn unit_params(g: &Graph) -> Params {
        Params::for_graph(g, Ratio::from_integer(1), TMode::Exact, Default::default()).unwrap()
    }

    fn star(leaves: u32) -> Graph {
        Graph::from_edges((1..=leaves).map(|i| (0, i))).unwrap()
    }

    #[test]
    fn small_neighborhood_has_no_pseudocovers() {
        let g = crate::generators::twin_stars(33, 1);
        let params = unit_params(&g);
        assert_eq!(params.min_gain, 33);
        assert!(enumerate_pseudocovers(&g, 0, &params).is_empty());
    }

    #[test]
    fn twin_gadget_pools_are_hub_and_twin() {
        // Hub and twin share 34 leaves: each covers everything, leaves cover
        // only themselves. The target also fits under the residual cap, so
        // the empty sequence qualifies.
        let g = crate::generators::twin_stars(34, 1);
        let params = unit_params(&g);
        let covers = enumerate_pseudocovers(&g, 0, &params);
        let sequences: Vec<Vec<Vertex>> = covers.iter().map(|pc| pc.sequence.clone()).collect();
        assert_eq!(sequences, vec![vec![], vec![0], vec![1]]);
        assert_eq!(pseudocover_elements(&g, 0, &params), BTreeSet::from([0, 1]));
        for pc in &covers {
            assert!(is_valid_pseudocover(&g, g.neighbors(0), &pc.sequence, &params));
        }
    }

    #[test]
    fn large_twin_gadget_drops_empty_sequence() {
        let g = crate::generators::twin_stars(70, 1);
        let params = unit_params(&g);
        let covers = enumerate_pseudocovers(&g, 0, &params);
        let sequences: Vec<Vec<Vertex>> = covers.iter().map(|pc| pc.sequence.clone()).collect();
        assert_eq!(sequences, vec![vec![0], vec![1]]);
        assert!(covers.iter().all(|pc| pc.final_residual().is_empty()));
    }

    #[test]
    fn count_bound_holds_on_genuine_star() {
        let g = star(40);
        let params = unit_params(&g);
        let count = enumerate_pseudocovers(&g, 0, &params).len();
        assert!(num::BigInt::from(count) <= params.pseudocover_count_bound());
        assert_eq!(pseudocover_elements(&g, 0, &params), BTreeSet::from([0]));
    }

    #[test]
    fn from_cover_single_coverer() {
        let g = star(70);
        let params = unit_params(&g);
        let target = g.neighbors(0).clone();
        let pc = pseudocover_from_cover(&g, &target, &BTreeSet::from([0]), &params).unwrap();
        assert_eq!(pc.sequence, vec![0]);
        assert!(pc.final_residual().is_empty());
    }

    #[test]
    fn from_cover_truncates_weak_tail() {
        // First coverer takes 7 of 10 elements, second only 3, below the
        // overridden gain of 5: the ordering keeps just the first element
        // and the residual (3 elements) still fits under the cap (4).
        let mut edges: Vec<(Vertex, Vertex)> = (0..7).map(|i| (100, i)).collect();
        edges.extend((7..10).map(|i| (101, i)));
        let g = Graph::from_edges(edges).unwrap();
        let params = Params::for_graph(
            &g,
            Ratio::from_integer(1),
            TMode::Fixed(3),
            ParamOverrides {
                min_gain: Some(5),
                residual_cap: Some(4),
                thresholds: None,
            },
        )
        .unwrap();
        let target: BTreeSet<Vertex> = (0..10).collect();
        let cover = BTreeSet::from([100, 101]);
        let pc = pseudocover_from_cover(&g, &target, &cover, &params).unwrap();
        assert_eq!(pc.sequence, vec![100]);
        assert_eq!(pc.final_residual(), &BTreeSet::from([7, 8, 9]));
    }

    #[test]
    fn from_cover_preconditions() {
        let g = star(70);
        let params = unit_params(&g);
        let target = g.neighbors(0).clone();
        let small: BTreeSet<Vertex> = target.iter().take(10).copied().collect();
        assert!(matches!(
            pseudocover_from_cover(&g, &small, &BTreeSet::from([0]), &params),
            Err(PseudoCoverError::TargetTooSmall { .. })
        ));
        assert!(matches!(
            pseudocover_from_cover(&g, &target, &BTreeSet::from([1]), &params),
            Err(PseudoCoverError::NotACover)
        ));
        assert!(matches!(
            pseudocover_from_cover(&g, &target, &BTreeSet::from([0, 1, 2]), &params),
            Err(PseudoCoverError::CoverTooLarge { .. })
        ));
    }

    #[test]
    fn from_cover_outputs_are_valid_on_random_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let mut checked = 0;
        for seed in 0..40 {
            let g =
                crate::generators::random_sparse(12, Ratio::from_integer(4), seed).unwrap();
            let params = Params::for_graph(
                &g,
                Ratio::from_integer(1),
                TMode::Fixed(3),
                ParamOverrides {
                    min_gain: Some(2),
                    residual_cap: Some(3),
                    thresholds: None,
                },
            )
            .unwrap();
            let v = rng.gen_range(0..12);
            let target = g.neighbors(v).clone();
            if (target.len() as u64) < params.residual_cap {
                continue;
            }
            let Some(cover) =
                crate::cover::cover_with_budget(&g, &target, v, params.cover_budget as usize, None)
            else {
                continue;
            };
            let pc = pseudocover_from_cover(&g, &target, &cover, &params).unwrap();
            assert!(
                is_valid_pseudocover(&g, &target, &pc.sequence, &params),
                "seed {seed}"
            );
            checked += 1;
        }
        assert!(checked >= 10, "only {checked} instances exercised the path");
    }

    #[test]
    fn enumeration_agrees_with_validator_on_small_overrides() {
        // Every emitted sequence is valid, and every valid sequence over a
        // small vertex set is emitted.
        let g = crate::generators::twin_stars(4, 1);
        let params = Params::for_graph(
            &g,
            Ratio::from_integer(1),
            TMode::Fixed(3),
            ParamOverrides {
                min_gain: Some(2),
                residual_cap: Some(2),
                thresholds: None,
            },
        )
        .unwrap();
        let target = g.neighbors(0).clone();
        let emitted: BTreeSet<Vec<Vertex>> = pseudocovers_of_target(&g, &target, &params)
            .into_iter()
            .map(|pc| pc.sequence)
            .collect();
        for pc in &emitted {
            assert!(is_valid_pseudocover(&g, &target, pc, &params));
        }
        // The cover budget is 2, so the exhaustive universe is every
        // sequence of length at most 2 over distinct vertices.
        let verts: Vec<Vertex> = g.vertices().collect();
        let mut all: BTreeSet<Vec<Vertex>> = BTreeSet::new();
        all.insert(vec![]);
        for &a in &verts {
            all.insert(vec![a]);
            for &b in &verts {
                if a != b {
                    all.insert(vec![a, b]);
                }
            }
        }
        let valid: BTreeSet<Vec<Vertex>> = all
            .into_iter()
            .filter(|seq| is_valid_pseudocover(&g, &target, seq, &params))
            .collect();
        assert_eq!(emitted, valid);
    }

    #[test]
    fn closure_depth_one_is_union_of_pools() {
        let g = crate::generators::twin_stars(34, 2);
        let params = unit_params(&g);
        let start: BTreeSet<Vertex> = BTreeSet::from([0, 36]);
        let direct: BTreeSet<Vertex> = [0u32, 36u32]
            .iter()
            .flat_map(|&v| pseudocover_elements(&g, v, &params))
            .collect();
        assert_eq!(element_closure(&g, &start, &params, 1), direct);
    }

    #[test]
    fn closure_is_monotone_in_depth() {
        let g = crate::generators::twin_stars(34, 1);
        let params = unit_params(&g);
        let start = BTreeSet::from([0]);
        let d1 = element_closure(&g, &start, &params, 1);
        let d2 = element_closure(&g, &start, &params, 2);
        let d3 = element_closure(&g, &start, &params, 3);
        assert!(d1.is_subset(&d2));
        assert!(d2.is_subset(&d3));
    }

    #[test]
    fn closure_of_small_neighborhoods_is_empty() {
        let g = crate::generators::grid(4, 4);
        let params =
            Params::for_graph(&g, Ratio::from_integer(3), TMode::Exact, Default::default())
                .unwrap();
        let start = g.vertex_set();
        assert!(element_closure(&g, &start, &params, 3).is_empty());
    }
}

//! The three phases of the approximation, as pure functions over a graph.
//!
//! Phase 1 selects every vertex whose neighborhood cannot be covered by a
//! budget of other vertices; those vertices are removed and their
//! neighborhoods marked dominated. Phase 2 runs the dominating-sequence
//! machinery on the remaining live graph and selects the last element of
//! every maximal sequence. Phase 3 sweeps up whatever is still undominated.
//! The union of the three phases always dominates the whole graph.

use std::collections::BTreeSet;

use crate::cover::cover_with_budget;
use crate::graph::{Graph, Vertex};
use crate::params::Params;
use crate::protocol;
use crate::pseudocover::ElementPools;
use crate::sequence::enumerate_maximal_sequences;
use crate::sim::{SimError, Trace};

/// Which implementation(s) to execute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Reference,
    Distributed,
    Both,
}

impl Mode {
    pub fn label(&self) -> &'static str {
        match self {
            Mode::Reference => "reference",
            Mode::Distributed => "distributed",
            Mode::Both => "both",
        }
    }

    pub fn runs_distributed(&self) -> bool {
        matches!(self, Mode::Distributed | Mode::Both)
    }
}

/// The outcome of the three phases. The sets are pairwise disjoint and
/// their union dominates the graph; `live` is the graph with the phase-1
/// set removed, which is where phase 2 operated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseResult {
    pub d1: BTreeSet<Vertex>,
    pub d2: BTreeSet<Vertex>,
    pub d3: BTreeSet<Vertex>,
    pub dominated: BTreeSet<Vertex>,
    pub live: Graph,
}

impl PhaseResult {
    pub fn solution(&self) -> BTreeSet<Vertex> {
        let mut set = self.d1.clone();
        set.extend(self.d2.iter().copied());
        set.extend(self.d3.iter().copied());
        set
    }

    pub fn total(&self) -> usize {
        self.d1.len() + self.d2.len() + self.d3.len()
    }

    pub fn same_sets(&self, other: &PhaseResult) -> bool {
        self.d1 == other.d1 && self.d2 == other.d2 && self.d3 == other.d3
    }
}

/// Phase 1: the vertices whose neighborhood cannot be covered by
/// `cover_budget` vertices other than themselves, plus the dominated region
/// (their closed neighborhoods).
pub fn phase1(g: &Graph, params: &Params) -> (BTreeSet<Vertex>, BTreeSet<Vertex>) {
    let budget = params.cover_budget as usize;
    let d1: BTreeSet<Vertex> = g
        .vertices()
        .filter(|&v| cover_with_budget(g, g.neighbors(v), v, budget, None).is_none())
        .collect();
    let dominated = g.closed_neighborhood_of_set(&d1);
    (d1, dominated)
}

/// Phase 2 on the live graph: the last elements of all maximal dominating
/// sequences over all start vertices.
pub fn phase2(live: &Graph, params: &Params) -> BTreeSet<Vertex> {
    let pools = ElementPools::new(live, params);
    let mut d2 = BTreeSet::new();
    for v in live.vertices() {
        for seq in enumerate_maximal_sequences(live, v, params, &pools) {
            d2.insert(seq.last());
        }
    }
    d2
}

/// Phase 3: everything not yet dominated.
pub fn phase3(g: &Graph, dominated: &BTreeSet<Vertex>) -> BTreeSet<Vertex> {
    g.vertices().filter(|v| !dominated.contains(v)).collect()
}

/// Runs all three phases sequentially on one graph.
pub fn run_reference(g: &Graph, params: &Params) -> PhaseResult {
    let (d1, mut dominated) = phase1(g, params);
    let live = g.without_vertices(&d1);
    let d2 = phase2(&live, params);
    dominated.extend(g.closed_neighborhood_of_set(&d2));
    let d3 = phase3(g, &dominated);
    dominated.extend(d3.iter().copied());
    let result = PhaseResult {
        d1,
        d2,
        d3,
        dominated,
        live,
    };
    debug_assert!(result.d1.is_disjoint(&result.d2));
    debug_assert!(result.d1.is_disjoint(&result.d3));
    debug_assert!(result.d2.is_disjoint(&result.d3));
    debug_assert_eq!(
        g.closed_neighborhood_of_set(&result.solution()),
        g.vertex_set()
    );
    result
}

/// The outcome of a full run: the reference result, plus the simulator
/// trace and the agreement verdict when a distributed run was requested.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub result: PhaseResult,
    pub trace: Option<Trace<protocol::NodeData>>,
    pub modes_agree: Option<bool>,
}

/// Runs the algorithm in the requested mode. A distributed run always
/// executes the reference implementation too and records whether the two
/// produced identical sets.
pub fn run_full(g: &Graph, params: &Params, mode: Mode) -> Result<RunOutcome, SimError> {
    let reference = run_reference(g, params);
    if !mode.runs_distributed() {
        return Ok(RunOutcome {
            result: reference,
            trace: None,
            modes_agree: None,
        });
    }
    let (distributed, trace) = protocol::run_distributed(g, params)?;
    let agree = reference.same_sets(&distributed);
    Ok(RunOutcome {
        result: reference,
        trace: Some(trace),
        modes_agree: Some(agree),
    })
}

/// Debug dump of the enumeration state: the phase-1 set, then one line per
/// live vertex that clears the pool gate, with its element pool and the
/// maximal sequences starting there.
pub fn debug_dump(g: &Graph, params: &Params) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let (d1, _) = phase1(g, params);
    let _ = writeln!(out, "phase1: {:?}", d1);
    let live = g.without_vertices(&d1);
    let pools = ElementPools::new(&live, params);
    for v in live.vertices() {
        if live.degree(v) as u64 <= params.min_gain {
            continue;
        }
        let pool = pools.get(v);
        let seqs: Vec<Vec<Vertex>> = enumerate_maximal_sequences(&live, v, params, &pools)
            .into_iter()
            .map(|s| s.sequence)
            .collect();
        let _ = writeln!(out, "vertex {v}: pool={:?} sequences={:?}", pool, seqs);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{counterexample, grid, twin_stars};
    use crate::oracle::verify_dominating;
    use crate::params::TMode;
    use num::rational::Ratio;

    fn params_for(g: &Graph, bound: i64) -> Params {
        Params::for_graph(g, Ratio::from_integer(bound), TMode::Exact, Default::default())
            .unwrap()
    }

    fn star(leaves: u32) -> Graph {
        Graph::from_edges((1..=leaves).map(|i| (0, i))).unwrap()
    }

    fn cycle(n: u32) -> Graph {
        Graph::from_edges((0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn star_center_lands_in_first_phase() {
        // Degree above the cover budget and leaves only cover themselves.
        let g = star(4);
        let params = params_for(&g, 1);
        let (d1, dominated) = phase1(&g, &params);
        assert_eq!(d1, BTreeSet::from([0]));
        assert_eq!(dominated, g.vertex_set());
    }

    #[test]
    fn low_degree_graphs_skip_the_first_phase() {
        let g = cycle(6);
        let params = params_for(&g, 1);
        let (d1, _) = phase1(&g, &params);
        assert!(d1.is_empty());
    }

    #[test]
    fn layered_graph_middle_vertices_join_first_phase() {
        let g = counterexample(5, 4);
        let params = params_for(&g, 1); // cover budget 2
        let (d1, _) = phase1(&g, &params);
        for j in 0..4 {
            assert!(d1.contains(&(5 + j)), "middle vertex {j} not selected");
        }
    }

    #[test]
    fn twin_gadgets_elect_hub_and_twin_in_phase_two() {
        let g = twin_stars(540, 2);
        let params = params_for(&g, 1);
        let result = run_reference(&g, &params);
        assert!(result.d1.is_empty());
        assert_eq!(result.d2, BTreeSet::from([0, 1, 542, 543]));
        assert!(result.d3.is_empty());
        assert!(verify_dominating(&g, &result.solution()).unwrap());
        assert_eq!(result.total(), 4);
    }

    #[test]
    fn grids_fall_through_to_phase_three() {
        let g = grid(5, 5);
        let params = params_for(&g, 3);
        let result = run_reference(&g, &params);
        assert!(result.d1.is_empty());
        assert!(result.d2.is_empty());
        assert_eq!(result.d3, g.vertex_set());
        assert!(verify_dominating(&g, &result.solution()).unwrap());
    }

    #[test]
    fn single_vertex_is_swept_up_by_phase_three() {
        let g = Graph::from_parts([0], []).unwrap();
        let params = params_for(&g, 1);
        let result = run_reference(&g, &params);
        assert!(result.d1.is_empty() && result.d2.is_empty());
        assert_eq!(result.d3, BTreeSet::from([0]));
    }

    #[test]
    fn phases_are_deterministic() {
        let g = counterexample(3, 5);
        let params = params_for(&g, 2);
        assert_eq!(run_reference(&g, &params), run_reference(&g, &params));
    }

    #[test]
    fn solution_always_dominates() {
        for seed in 0..10 {
            let g = crate::generators::random_sparse(60, Ratio::from_integer(3), seed).unwrap();
            let params = params_for(&g, 2);
            let result = run_reference(&g, &params);
            assert!(verify_dominating(&g, &result.solution()).unwrap());
        }
    }
}

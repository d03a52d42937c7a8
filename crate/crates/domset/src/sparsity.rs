//! Density measures that parameterize the algorithm: exact maximum subgraph
//! density, brute-force 1-shallow-minor density, and the smallest excluded
//! biclique.
//!
//! Densities are exact rationals throughout. Floating point would make the
//! bound assertions flaky.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::flow::FlowNetwork;
use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SparsityError {
    #[error(
        "graph has {n} vertices, above the exact-search guard of {guard}; \
         pass the density bound as part of the input instead"
    )]
    GuardExceeded { n: usize, guard: usize },
}

/// Default vertex-count guard for the brute-force minor enumeration.
pub const MINOR_BRUTEFORCE_GUARD: usize = 12;

/// An edge/vertex density, kept unreduced so the achieving subgraph or minor
/// stays readable. Comparison is exact cross-multiplication.
#[derive(Debug, Clone, Copy)]
pub struct Density {
    pub edges: u64,
    pub vertices: u64,
}

impl Density {
    pub fn new(edges: u64, vertices: u64) -> Self {
        assert!(vertices >= 1, "density denominator must be at least 1");
        Density { edges, vertices }
    }

    pub const ZERO: Density = Density {
        edges: 0,
        vertices: 1,
    };
}

impl PartialEq for Density {
    fn eq(&self, other: &Self) -> bool {
        self.edges as u128 * other.vertices as u128
            == other.edges as u128 * self.vertices as u128
    }
}

impl Eq for Density {}

impl PartialOrd for Density {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Density {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.edges as u128 * other.vertices as u128)
            .cmp(&(other.edges as u128 * self.vertices as u128))
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.edges, self.vertices)
    }
}

/// Maximum edge density over all subgraphs, exact.
///
/// Uses iterated parametric min-cuts: test whether some subgraph beats the
/// current candidate density, move to the witness subgraph if so. Every
/// arithmetic step is integer, so the result is exact.
pub fn max_subgraph_density(g: &Graph) -> Density {
    let n = g.vertex_count() as u64;
    let m = g.edge_count() as u64;
    if m == 0 {
        return Density::ZERO;
    }
    let vertices: Vec<Vertex> = g.vertices().collect();
    let index: std::collections::BTreeMap<Vertex, usize> =
        vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    let mut best = Density::new(m, n);
    loop {
        let (p, q) = (best.edges, best.vertices);
        // Network: source 0, vertices 1..=n, sink n+1; capacities scaled by q.
        let source = 0;
        let sink = vertices.len() + 1;
        let mut net = FlowNetwork::new(vertices.len() + 2);
        for (i, &v) in vertices.iter().enumerate() {
            let d = g.degree(v) as u64;
            net.add_arc(source, i + 1, m * q);
            net.add_arc(i + 1, sink, m * q + 2 * p - d * q);
        }
        for (u, v) in g.edges() {
            let (iu, iv) = (index[&u] + 1, index[&v] + 1);
            net.add_arc(iu, iv, q);
            net.add_arc(iv, iu, q);
        }
        let flow = net.max_flow(source, sink);
        if flow >= m * n * q {
            return best;
        }
        let side = net.min_cut_source_side(source);
        let chosen: BTreeSet<Vertex> = vertices
            .iter()
            .enumerate()
            .filter(|&(i, _)| side[i + 1])
            .map(|(_, &v)| v)
            .collect();
        let sub_edges = g.induced(&chosen).edge_count() as u64;
        let improved = Density::new(sub_edges, chosen.len() as u64);
        debug_assert!(improved > best);
        best = improved;
    }
}

/// Exhaustive maximum subgraph density for cross-checking the flow route.
pub fn max_subgraph_density_bruteforce(
    g: &Graph,
    guard: usize,
) -> Result<Density, SparsityError> {
    let n = g.vertex_count();
    if n > guard {
        return Err(SparsityError::GuardExceeded { n, guard });
    }
    let vertices: Vec<Vertex> = g.vertices().collect();
    let mut best = Density::ZERO;
    for mask in 1u32..(1u32 << n) {
        let subset: BTreeSet<Vertex> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| vertices[i])
            .collect();
        let e = g.induced(&subset).edge_count() as u64;
        let cand = Density::new(e, subset.len() as u64);
        if cand > best {
            best = cand;
        }
    }
    Ok(best)
}

/// Maximum edge density over all 1-shallow minors, by exhaustive enumeration
/// of families of pairwise-disjoint branch sets.
///
/// A connected radius-1 branch set is a star: a center together with a subset
/// of its neighbors. The search assigns each vertex either to no branch set
/// or to a star block whose minimum vertex it is, deduplicating blocks by
/// their vertex sets. Exponential; this is a test oracle, not a production
/// path, which is why the guard refuses larger inputs.
pub fn max_shallow_minor_density(g: &Graph, guard: usize) -> Result<Density, SparsityError> {
    let n = g.vertex_count();
    if n > guard {
        return Err(SparsityError::GuardExceeded { n, guard });
    }
    if g.edge_count() == 0 {
        return Ok(Density::ZERO);
    }
    let vertices: Vec<Vertex> = g.vertices().collect();
    let adj: Vec<u32> = vertices
        .iter()
        .map(|&v| {
            let mut mask = 0u32;
            for (&u, i) in vertices.iter().zip(0..) {
                if g.has_edge(v, u) {
                    mask |= 1 << i;
                }
            }
            mask
        })
        .collect();

    struct Search<'a> {
        adj: &'a [u32],
        best: Density,
    }

    impl Search<'_> {
        // blocks carry (member mask, union of member adjacencies)
        fn run(&mut self, todo: u32, blocks: &mut Vec<(u32, u32)>) {
            if todo == 0 {
                if !blocks.is_empty() {
                    let mut contacts = 0u64;
                    for i in 0..blocks.len() {
                        for j in i + 1..blocks.len() {
                            if blocks[i].1 & blocks[j].0 != 0 {
                                contacts += 1;
                            }
                        }
                    }
                    let cand = Density::new(contacts, blocks.len() as u64);
                    if cand > self.best {
                        self.best = cand;
                    }
                }
                return;
            }
            let v = todo.trailing_zeros() as usize;
            let v_bit = 1u32 << v;
            self.run(todo & !v_bit, blocks);

            let mut seen: HashSet<u32> = HashSet::new();
            let avail = todo & !v_bit;
            // center v, leaves among its available neighbors
            let mut t = self.adj[v] & avail;
            loop {
                let block = v_bit | t;
                if seen.insert(block) {
                    self.descend(todo, block, blocks);
                }
                if t == 0 {
                    break;
                }
                t = (t - 1) & (self.adj[v] & avail);
            }
            // center c > v adjacent to v, v among its leaves
            let mut centers = self.adj[v] & avail;
            while centers != 0 {
                let c = centers.trailing_zeros() as usize;
                let c_bit = 1u32 << c;
                centers &= !c_bit;
                let leaf_pool = self.adj[c] & avail & !c_bit;
                let mut t = leaf_pool;
                loop {
                    let block = v_bit | c_bit | t;
                    if seen.insert(block) {
                        self.descend(todo, block, blocks);
                    }
                    if t == 0 {
                        break;
                    }
                    t = (t - 1) & leaf_pool;
                }
            }
        }

        fn descend(&mut self, todo: u32, block: u32, blocks: &mut Vec<(u32, u32)>) {
            let mut nbrs = 0u32;
            let mut members = block;
            while members != 0 {
                let i = members.trailing_zeros() as usize;
                members &= members - 1;
                nbrs |= self.adj[i];
            }
            blocks.push((block, nbrs));
            self.run(todo & !block, blocks);
            blocks.pop();
        }
    }

    let mut search = Search {
        adj: &adj,
        best: Density::ZERO,
    };
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    search.run(full, &mut Vec::new());
    Ok(search.best)
}

/// Smallest `t >= 1` such that the graph contains no complete bipartite
/// subgraph with both sides of size `t`.
pub fn min_excluded_biclique(g: &Graph) -> u32 {
    let mut t = 1u32;
    while has_biclique(g, t as usize) {
        t += 1;
    }
    // The density bound forces t <= 2 * max_subgraph_density + 1; checked on
    // small inputs where recomputing the density is cheap.
    #[cfg(debug_assertions)]
    if g.vertex_count() <= 100 {
        let d = max_subgraph_density(g);
        debug_assert!(
            (t as u64 - 1) as u128 * d.vertices as u128 <= 2 * d.edges as u128,
            "excluded biclique {t} above density bound {d}"
        );
    }
    t
}

fn has_biclique(g: &Graph, t: usize) -> bool {
    if t == 0 {
        return true;
    }
    if t == 1 {
        return g.edge_count() >= 1;
    }
    if g.vertex_count() < 2 * t {
        return false;
    }
    let vertices: Vec<Vertex> = g.vertices().collect();
    let mut side = Vec::with_capacity(t);
    extend_biclique(g, &vertices, t, 0, &mut side, None)
}

/// One-sided growth of a candidate biclique; `from` is the smallest vertex
/// id still allowed on this side.
fn extend_biclique(
    g: &Graph,
    vertices: &[Vertex],
    t: usize,
    from: Vertex,
    side: &mut Vec<Vertex>,
    common: Option<&BTreeSet<Vertex>>,
) -> bool {
    if side.len() == t {
        let common = common.expect("nonempty side has a common neighborhood");
        return common.iter().filter(|v| !side.contains(v)).count() >= t;
    }
    match common {
        None => {
            for &z in vertices {
                let next = g.neighbors(z);
                if next.len() < t {
                    continue;
                }
                side.push(z);
                if extend_biclique(g, vertices, t, z + 1, side, Some(next)) {
                    return true;
                }
                side.pop();
            }
            false
        }
        Some(common) => {
            // Later side members must keep at least t common neighbors, so
            // they are adjacent to some current common neighbor; that keeps
            // the candidate set local instead of the whole vertex set.
            let candidates: BTreeSet<Vertex> = common
                .iter()
                .flat_map(|&w| g.neighbors(w).iter().copied())
                .filter(|&z| z >= from)
                .collect();
            for z in candidates {
                let next: BTreeSet<Vertex> =
                    common.intersection(g.neighbors(z)).copied().collect();
                if next.len() < t {
                    continue;
                }
                side.push(z);
                if extend_biclique(g, vertices, t, z + 1, side, Some(&next)) {
                    return true;
                }
                side.pop();
            }
            false
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: u32) -> Graph {
        Graph::from_edges((0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    fn cycle(n: u32) -> Graph {
        Graph::from_edges((0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn star(leaves: u32) -> Graph {
        Graph::from_edges((1..=leaves).map(|i| (0, i))).unwrap()
    }

    #[test]
    fn density_comparison_is_cross_multiplied() {
        assert_eq!(Density::new(6, 4), Density::new(3, 2));
        assert!(Density::new(5, 5) < Density::new(6, 4));
        assert_eq!(Density::new(5, 5).to_string(), "5/5");
    }

    #[test]
    fn subgraph_density_of_k4() {
        assert_eq!(max_subgraph_density(&complete(4)), Density::new(6, 4));
    }

    #[test]
    fn subgraph_density_of_c5() {
        let d = max_subgraph_density(&cycle(5));
        assert_eq!(d, Density::new(5, 5));
        assert_eq!(d, Density::new(1, 1));
    }

    #[test]
    fn subgraph_density_of_edgeless() {
        let g = Graph::from_parts([0, 1, 2], []).unwrap();
        assert_eq!(max_subgraph_density(&g), Density::ZERO);
    }

    #[test]
    fn subgraph_density_finds_dense_core() {
        // K4 with a pendant path attached: the core is denser than the whole.
        let mut edges: Vec<(u32, u32)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
        edges.extend([(3, 4), (4, 5), (5, 6)]);
        let g = Graph::from_edges(edges).unwrap();
        assert_eq!(max_subgraph_density(&g), Density::new(6, 4));
    }

    #[test]
    fn flow_route_matches_bruteforce_on_small_graphs() {
        for g in [complete(4), cycle(5), cycle(6), star(5)] {
            let brute = max_subgraph_density_bruteforce(&g, 12).unwrap();
            assert_eq!(max_subgraph_density(&g), brute);
        }
    }

    #[test]
    fn shallow_minor_density_of_k4() {
        let d = max_shallow_minor_density(&complete(4), 12).unwrap();
        assert_eq!(d, Density::new(3, 2));
    }

    #[test]
    fn shallow_minor_density_of_star_is_subgraph_density() {
        // Contractions in a tree only lose edges.
        let d = max_shallow_minor_density(&star(5), 12).unwrap();
        assert_eq!(d, Density::new(5, 6));
    }

    #[test]
    fn shallow_minor_density_of_single_edge() {
        let g = Graph::from_edges([(0, 1)]).unwrap();
        assert_eq!(max_shallow_minor_density(&g, 12).unwrap(), Density::new(1, 2));
    }

    #[test]
    fn shallow_minor_density_guard_refuses() {
        let g = cycle(13);
        assert_eq!(
            max_shallow_minor_density(&g, 12).unwrap_err(),
            SparsityError::GuardExceeded { n: 13, guard: 12 }
        );
    }

    #[test]
    fn shallow_minor_at_least_subgraph_density() {
        for g in [complete(4), cycle(6), star(4)] {
            let minor = max_shallow_minor_density(&g, 12).unwrap();
            assert!(minor >= max_subgraph_density(&g));
        }
    }

    #[test]
    fn biclique_of_star_is_two() {
        assert_eq!(min_excluded_biclique(&star(3)), 2);
    }

    #[test]
    fn biclique_of_c4_is_three() {
        assert_eq!(min_excluded_biclique(&cycle(4)), 3);
    }

    #[test]
    fn biclique_of_edgeless_is_one() {
        let g = Graph::from_parts([0, 1], []).unwrap();
        assert_eq!(min_excluded_biclique(&g), 1);
    }

    #[test]
    fn biclique_of_k33_plus_edge_is_four() {
        let mut edges: Vec<(u32, u32)> =
            (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect();
        edges.push((0, 1));
        let g = Graph::from_edges(edges).unwrap();
        assert_eq!(min_excluded_biclique(&g), 4);
    }

    #[test]
    fn degeneracy_bounded_by_twice_density() {
        for g in [complete(4), cycle(6), star(7)] {
            let d = max_subgraph_density(&g);
            let degen = g.degeneracy() as u128;
            assert!(degen * d.vertices as u128 <= 2 * d.edges as u128);
        }
    }
}

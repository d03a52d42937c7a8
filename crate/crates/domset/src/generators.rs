//! Seeded instance families.
//!
//! Vertex numbering per family is fixed so golden files stay stable. Random
//! generation uses ChaCha8 with explicit seeding; platform randomness is
//! never consulted.

use num::rational::Ratio;
use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("invalid generator argument: {0}")]
    InvalidArgument(String),
}

/// `w` by `h` grid graph. Vertices are numbered row-major starting at 0.
pub fn grid(w: u32, h: u32) -> Graph {
    assert!(w >= 1 && h >= 1);
    let id = |x: u32, y: u32| y * w + x;
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < h {
                edges.push((id(x, y), id(x, y + 1)));
            }
        }
    }
    Graph::from_parts((0..w * h).collect::<Vec<_>>(), edges).expect("grid edges are simple")
}

/// Grid plus one diagonal per face (top-left to bottom-right), still planar.
pub fn triangulated_grid(w: u32, h: u32) -> Graph {
    assert!(w >= 1 && h >= 1);
    let id = |x: u32, y: u32| y * w + x;
    let base = grid(w, h);
    let mut edges: Vec<(Vertex, Vertex)> = base.edges().collect();
    for y in 0..h.saturating_sub(1) {
        for x in 0..w.saturating_sub(1) {
            edges.push((id(x, y), id(x + 1, y + 1)));
        }
    }
    Graph::from_parts((0..w * h).collect::<Vec<_>>(), edges).expect("diagonals are simple")
}

/// The layered construction with `gamma` spine vertices, `m` middle vertices
/// and a `gamma` by `m` matrix of satellites.
///
/// Numbering: spine vertices `v_1..v_gamma` get ids `0..gamma`, middle
/// vertices `w^1..w^m` get ids `gamma..gamma+m`, satellite `s_i^j` gets id
/// `gamma + m + (i-1)*m + (j-1)` (row-major in `i`).
///
/// Edges: `v_1` to every `w^j`; `w^j` to every `s_i^j`; `v_i` to every
/// `s_i^j`. The middle vertices have neighborhoods that only `gamma` distinct
/// vertices can dominate once the middle vertex itself is excluded.
pub fn counterexample(gamma: u32, m: u32) -> Graph {
    assert!(gamma >= 1 && m >= 1);
    let v = |i: u32| i - 1; // i in 1..=gamma
    let w = |j: u32| gamma + (j - 1); // j in 1..=m
    let s = |i: u32, j: u32| gamma + m + (i - 1) * m + (j - 1);
    let mut edges = Vec::new();
    for j in 1..=m {
        edges.push((v(1), w(j)));
    }
    for i in 1..=gamma {
        for j in 1..=m {
            edges.push((w(j), s(i, j)));
            edges.push((v(i), s(i, j)));
        }
    }
    Graph::from_edges(edges).expect("construction has no self-loops")
}

/// Disjoint gadgets, each a hub and a twin sharing `d` leaves (no hub-twin
/// edge). The shared leaves keep the hub out of the first phase while its
/// neighborhood can be large enough to start dominating sequences.
///
/// Numbering per gadget `c`: hub `c*(d+2)`, twin `c*(d+2)+1`, leaves
/// `c*(d+2)+2 ..`.
pub fn twin_stars(d: u32, copies: u32) -> Graph {
    assert!(d >= 1 && copies >= 1);
    let mut edges = Vec::new();
    for c in 0..copies {
        let base = c * (d + 2);
        let hub = base;
        let twin = base + 1;
        for leaf in base + 2..base + 2 + d {
            edges.push((hub, leaf));
            edges.push((twin, leaf));
        }
    }
    Graph::from_edges(edges).expect("gadgets have no self-loops")
}

/// Sparse random graph: every pair is an edge independently with probability
/// `d / n`. Deterministic for a fixed `(n, d, seed)` triple: pairs are
/// visited in lexicographic order and each consumes exactly one 64-bit draw.
pub fn random_sparse(n: u32, d: Ratio<u64>, seed: u64) -> Result<Graph, GeneratorError> {
    if n < 1 {
        return Err(GeneratorError::InvalidArgument("n must be at least 1".into()));
    }
    if d < Ratio::from_integer(0) || d >= Ratio::from_integer(n as u64) {
        return Err(GeneratorError::InvalidArgument(format!(
            "expected 0 <= d < n, got d={d} with n={n}"
        )));
    }
    // Edge probability p = d/n as a 64-bit fixed-point threshold, exact.
    let num = *d.numer() as u128;
    let den = *d.denom() as u128 * n as u128;
    let threshold = (num << 64) / den;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let draw = rng.next_u64() as u128;
            if draw < threshold {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_parts((0..n).collect::<Vec<_>>(), edges).expect("pairs are distinct"))
}

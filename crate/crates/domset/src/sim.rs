//! Deterministic synchronous message-passing executor.
//!
//! One round means: every node emits one message that is broadcast to all of
//! its neighbors, all messages are delivered, and every node then updates its
//! state from the received inbox. Messages are structured values of unlimited
//! size and local computation is free; the round count is the only measured
//! cost. Handlers must be pure functions of the node state and inbox --
//! sharing mutable state across nodes is forbidden by contract, which is what
//! makes the execution order within a round irrelevant.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{self, Write};

use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("node {vertex} failed in round {round}: {message}")]
pub struct SimError {
    pub vertex: Vertex,
    pub round: usize,
    pub message: String,
}

/// Per-node membership and progress flags. The set flags are monotone: once
/// a node joins a phase set it never leaves it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NodeFlags {
    pub in_d1: bool,
    pub in_d2: bool,
    pub in_d3: bool,
    pub dominated: bool,
    pub removed: bool,
}

impl NodeFlags {
    fn monotone_from(&self, prev: &NodeFlags) -> bool {
        (!prev.in_d1 || self.in_d1)
            && (!prev.in_d2 || self.in_d2)
            && (!prev.in_d3 || self.in_d3)
    }
}

impl fmt::Display for NodeFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.in_d1 {
            parts.push("d1");
        }
        if self.in_d2 {
            parts.push("d2");
        }
        if self.in_d3 {
            parts.push("d3");
        }
        if self.dominated {
            parts.push("dom");
        }
        if self.removed {
            parts.push("rm");
        }
        if parts.is_empty() {
            write!(f, "-")
        } else {
            write!(f, "{}", parts.join(","))
        }
    }
}

/// The state of one node: its identity, what it currently knows about the
/// network, its flags and phase counter, and protocol-private data.
///
/// `known_subgraph` starts as the node's star (the node, its neighbors, and
/// its incident edges: identifiers are visible across an edge before any
/// communication). After `r` rounds of an information-gathering protocol it
/// is exactly the induced subgraph on the radius-`r` ball around the node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeState<D> {
    pub id: Vertex,
    pub known_subgraph: Graph,
    pub flags: NodeFlags,
    pub phase: u8,
    pub data: D,
}

/// A synchronous protocol. `send` is called with the state the node had at
/// the start of the round; `receive` folds the delivered inbox into the
/// state. Both must be deterministic and depend only on their arguments.
pub trait Protocol {
    type Message: Clone;
    type Data: Clone;

    fn init(&self, id: Vertex, neighbors: &BTreeSet<Vertex>) -> Self::Data;

    fn send(&self, node: &NodeState<Self::Data>, round: usize) -> Option<Self::Message>;

    fn receive(
        &self,
        node: &mut NodeState<Self::Data>,
        inbox: &[(Vertex, Self::Message)],
        round: usize,
    ) -> Result<(), String>;

    /// Fixed round budget, if the protocol has one.
    fn round_budget(&self) -> Option<usize> {
        None
    }

    /// Halting predicate, evaluated at the round barrier after `completed`
    /// rounds. Defaults to the fixed budget.
    fn halted(&self, _nodes: &BTreeMap<Vertex, NodeState<Self::Data>>, completed: usize) -> bool {
        self.round_budget().is_some_and(|b| completed >= b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogEntry {
    pub round: usize,
    pub vertex: Vertex,
    pub phase: u8,
    pub flags: NodeFlags,
}

/// The result of a simulation: how many rounds ran, how many messages were
/// delivered per round, a per-round flag log, and the final node states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace<D> {
    pub rounds_executed: usize,
    pub messages_per_round: Vec<usize>,
    pub log: Vec<LogEntry>,
    pub final_states: BTreeMap<Vertex, NodeState<D>>,
}

impl<D> Trace<D> {
    /// Writes the line-oriented log used for debugging and golden tests.
    pub fn write_log<W: Write>(&self, mut w: W) -> io::Result<()> {
        for entry in &self.log {
            writeln!(
                w,
                "round={} node={} phase={} flags={}",
                entry.round, entry.vertex, entry.phase, entry.flags
            )?;
        }
        Ok(())
    }

    pub fn log_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_log(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("log is ascii")
    }
}

/// Runs a protocol on a graph for at most `max_rounds` synchronous rounds,
/// stopping earlier if the protocol reports itself halted.
pub fn run<P: Protocol>(
    g: &Graph,
    protocol: &P,
    max_rounds: usize,
) -> Result<Trace<P::Data>, SimError> {
    let mut states: BTreeMap<Vertex, NodeState<P::Data>> = g
        .vertices()
        .map(|v| {
            let data = protocol.init(v, g.neighbors(v));
            (
                v,
                NodeState {
                    id: v,
                    known_subgraph: g.star(v),
                    flags: NodeFlags::default(),
                    phase: 0,
                    data,
                },
            )
        })
        .collect();

    let mut trace = Trace {
        rounds_executed: 0,
        messages_per_round: Vec::new(),
        log: Vec::new(),
        final_states: BTreeMap::new(),
    };

    for round in 1..=max_rounds {
        if protocol.halted(&states, round - 1) {
            break;
        }
        // Emission happens before any delivery: messages sent in a round are
        // a function of the state at the start of that round.
        let outbox: BTreeMap<Vertex, Option<P::Message>> = states
            .iter()
            .map(|(&v, state)| (v, protocol.send(state, round)))
            .collect();

        let mut delivered = 0usize;
        let inboxes: BTreeMap<Vertex, Vec<(Vertex, P::Message)>> = states
            .keys()
            .map(|&v| {
                let inbox: Vec<(Vertex, P::Message)> = g
                    .neighbors(v)
                    .iter()
                    .filter_map(|&u| outbox[&u].clone().map(|m| (u, m)))
                    .collect();
                delivered += inbox.len();
                (v, inbox)
            })
            .collect();

        for (&v, state) in states.iter_mut() {
            let prev_flags = state.flags;
            protocol
                .receive(state, &inboxes[&v], round)
                .map_err(|message| SimError {
                    vertex: v,
                    round,
                    message,
                })?;
            debug_assert!(
                state.flags.monotone_from(&prev_flags),
                "node {v} unset a phase flag in round {round}"
            );
        }

        trace.rounds_executed = round;
        trace.messages_per_round.push(delivered);
        for (&v, state) in &states {
            trace.log.push(LogEntry {
                round,
                vertex: v,
                phase: state.phase,
                flags: state.flags,
            });
        }
    }

    trace.final_states = states;
    Ok(trace)
}

/// Flooding protocol: after `radius` rounds every node's `known_subgraph` is
/// exactly the induced subgraph on its radius-`radius` ball.
pub struct GatherBall {
    pub radius: usize,
}

impl GatherBall {
    pub fn new(radius: usize) -> Self {
        GatherBall { radius }
    }
}

/// Raw flooded knowledge: the union of the stars of every vertex heard from.
/// This can mention edges that leave the ball, so the induced-ball view is
/// derived from it rather than stored directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GatheredKnowledge {
    pub raw: Graph,
}

/// Trims raw flooded knowledge to the induced subgraph on the radius-`r`
/// ball. Distances up to `r` are correct in the raw knowledge because it
/// contains every edge incident to the radius-`r` ball.
pub fn induced_ball_view(raw: &Graph, center: Vertex, radius: usize) -> Graph {
    let ball = raw
        .ball(center, radius)
        .expect("center is part of its own knowledge");
    raw.induced(&ball)
}

impl Protocol for GatherBall {
    type Message = std::rc::Rc<Graph>;
    type Data = GatheredKnowledge;

    fn init(&self, id: Vertex, neighbors: &BTreeSet<Vertex>) -> Self::Data {
        let raw = Graph::from_parts(
            [id],
            neighbors.iter().map(|&u| (id, u)),
        )
        .expect("a star has no self-loops");
        GatheredKnowledge { raw }
    }

    fn send(&self, node: &NodeState<Self::Data>, round: usize) -> Option<Self::Message> {
        (round <= self.radius).then(|| std::rc::Rc::new(node.data.raw.clone()))
    }

    fn receive(
        &self,
        node: &mut NodeState<Self::Data>,
        inbox: &[(Vertex, Self::Message)],
        round: usize,
    ) -> Result<(), String> {
        for (_, g) in inbox {
            node.data.raw.absorb(g);
        }
        node.known_subgraph = induced_ball_view(&node.data.raw, node.id, round.min(self.radius));
        Ok(())
    }

    fn round_budget(&self) -> Option<usize> {
        Some(self.radius)
    }
}

//! The approximation as a fixed 10-round protocol for the simulator.
//!
//! Schedule (one broadcast per node per round):
//!
//! 1.  flood stars;
//! 2.  flood gathered topology -- every node now knows its radius-2 ball and
//!     decides membership in the first phase set locally;
//! 3.  first-phase members announce; neighbors mark themselves dominated and
//!     note the removal, members fall silent from here on;
//! 4.  flood live stars (edges to removed vertices dropped);
//! 5.  flood gathered live topology -- every live node knows its live
//!     radius-2 ball and computes its own pseudo-cover element pool;
//! 6.  broadcast own pool;
//! 7.  rebroadcast collected pools -- pools of the whole radius-2 ball are
//!     now local, so each node enumerates the maximal dominating sequences
//!     starting at itself and records their last elements as electees;
//! 8.  broadcast electees;
//! 9.  rebroadcast collected electees -- every electee (always within the
//!     radius-2 ball of its electing start vertex) now knows it was chosen
//!     and joins the second phase set;
//! 10. second-phase members announce; neighbors mark themselves dominated,
//!     and whoever is still undominated joins the third set.
//!
//! Every per-node computation is a pure function of the node's gathered
//! knowledge, so the distributed run reproduces the reference run exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

use crate::cover::cover_with_budget;
use crate::graph::{Graph, Vertex};
use crate::params::Params;
use crate::phases::PhaseResult;
use crate::pseudocover::pseudocover_elements;
use crate::sequence::enumerate_maximal_sequences_with;
use crate::sim::{self, induced_ball_view, NodeState, Protocol, SimError, Trace};

/// Total number of communication rounds, independent of the input size.
pub const SCHEDULE_ROUNDS: usize = 10;

#[derive(Debug, Clone)]
pub enum Message {
    Topology(Rc<Graph>),
    JoinedFirstSet,
    Pools(Rc<BTreeMap<Vertex, BTreeSet<Vertex>>>),
    Electees(Rc<BTreeSet<Vertex>>),
    JoinedSecondSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeData {
    /// Raw flooded topology of the original graph (rounds 1-2).
    knowledge: Graph,
    /// Raw flooded topology of the live graph (rounds 4-5).
    live_knowledge: Graph,
    removed_neighbors: BTreeSet<Vertex>,
    /// Pseudo-cover element pools, own and relayed (rounds 5-7).
    pools: BTreeMap<Vertex, BTreeSet<Vertex>>,
    /// Last elements of maximal sequences, own and relayed (rounds 7-9).
    electees: BTreeSet<Vertex>,
}

pub struct DomsetProtocol {
    pub params: Params,
}

impl DomsetProtocol {
    pub fn new(params: Params) -> Self {
        DomsetProtocol { params }
    }
}

fn merge_topology(into: &mut Graph, inbox: &[(Vertex, Message)]) {
    for (_, msg) in inbox {
        if let Message::Topology(g) = msg {
            into.absorb(g);
        }
    }
}

fn rc_graph(g: &Graph) -> Rc<Graph> {
    Rc::new(g.clone())
}

impl Protocol for DomsetProtocol {
    type Message = Message;
    type Data = NodeData;

    fn init(&self, id: Vertex, neighbors: &BTreeSet<Vertex>) -> NodeData {
        let star = Graph::from_parts([id], neighbors.iter().map(|&u| (id, u)))
            .expect("stars have no self-loops");
        NodeData {
            knowledge: star,
            live_knowledge: Graph::empty(),
            removed_neighbors: BTreeSet::new(),
            pools: BTreeMap::new(),
            electees: BTreeSet::new(),
        }
    }

    fn send(&self, node: &NodeState<NodeData>, round: usize) -> Option<Message> {
        let live = !node.flags.removed;
        match round {
            1 | 2 => Some(Message::Topology(rc_graph(&node.data.knowledge))),
            3 => node.flags.in_d1.then_some(Message::JoinedFirstSet),
            4 | 5 => live.then(|| Message::Topology(rc_graph(&node.data.live_knowledge))),
            6 | 7 => live.then(|| Message::Pools(Rc::new(node.data.pools.clone()))),
            8 | 9 => (live && !node.data.electees.is_empty())
                .then(|| Message::Electees(Rc::new(node.data.electees.clone()))),
            10 => node.flags.in_d2.then_some(Message::JoinedSecondSet),
            _ => None,
        }
    }

    fn receive(
        &self,
        node: &mut NodeState<NodeData>,
        inbox: &[(Vertex, Message)],
        round: usize,
    ) -> Result<(), String> {
        let id = node.id;
        match round {
            1 => merge_topology(&mut node.data.knowledge, inbox),
            2 => {
                merge_topology(&mut node.data.knowledge, inbox);
                node.known_subgraph = induced_ball_view(&node.data.knowledge, id, 2);
                // Any useful coverer of the neighborhood lives in the
                // radius-2 ball, so this decision is purely local.
                let target = node.data.knowledge.neighbors(id);
                let coverable = cover_with_budget(
                    &node.data.knowledge,
                    target,
                    id,
                    self.params.cover_budget as usize,
                    None,
                )
                .is_some();
                if !coverable {
                    node.flags.in_d1 = true;
                    node.flags.dominated = true;
                    node.flags.removed = true;
                }
                node.phase = 1;
            }
            3 => {
                for (sender, msg) in inbox {
                    if matches!(msg, Message::JoinedFirstSet) {
                        node.data.removed_neighbors.insert(*sender);
                        node.flags.dominated = true;
                    }
                }
                if !node.flags.removed {
                    let live_neighbors: Vec<Vertex> = node
                        .data
                        .knowledge
                        .neighbors(id)
                        .iter()
                        .copied()
                        .filter(|u| !node.data.removed_neighbors.contains(u))
                        .collect();
                    node.data.live_knowledge =
                        Graph::from_parts([id], live_neighbors.into_iter().map(|u| (id, u)))
                            .expect("stars have no self-loops");
                }
            }
            4 => {
                if !node.flags.removed {
                    merge_topology(&mut node.data.live_knowledge, inbox);
                }
            }
            5 => {
                if !node.flags.removed {
                    merge_topology(&mut node.data.live_knowledge, inbox);
                    node.known_subgraph = induced_ball_view(&node.data.live_knowledge, id, 2);
                    let pool = pseudocover_elements(&node.data.live_knowledge, id, &self.params);
                    node.data.pools.insert(id, pool);
                }
            }
            6 | 7 => {
                if !node.flags.removed {
                    for (_, msg) in inbox {
                        if let Message::Pools(pools) = msg {
                            for (v, pool) in pools.iter() {
                                node.data.pools.entry(*v).or_insert_with(|| pool.clone());
                            }
                        }
                    }
                    if round == 7 {
                        let pools = &node.data.pools;
                        let lookup =
                            |v: Vertex| pools.get(&v).cloned().unwrap_or_default();
                        for seq in enumerate_maximal_sequences_with(
                            &node.data.live_knowledge,
                            id,
                            &self.params,
                            &lookup,
                        ) {
                            node.data.electees.insert(seq.last());
                        }
                    }
                }
            }
            8 | 9 => {
                if !node.flags.removed {
                    for (_, msg) in inbox {
                        if let Message::Electees(set) = msg {
                            node.data.electees.extend(set.iter().copied());
                        }
                    }
                    if round == 9 {
                        if node.data.electees.contains(&id) {
                            node.flags.in_d2 = true;
                            node.flags.dominated = true;
                        }
                        node.phase = 2;
                    }
                }
            }
            10 => {
                if inbox
                    .iter()
                    .any(|(_, msg)| matches!(msg, Message::JoinedSecondSet))
                {
                    node.flags.dominated = true;
                }
                if !node.flags.dominated {
                    node.flags.in_d3 = true;
                    node.flags.dominated = true;
                }
                node.phase = 3;
            }
            _ => return Err(format!("round {round} is outside the schedule")),
        }
        Ok(())
    }

    fn round_budget(&self) -> Option<usize> {
        Some(SCHEDULE_ROUNDS)
    }
}

/// Runs the protocol and folds the final flags into a [`PhaseResult`].
pub fn run_distributed(
    g: &Graph,
    params: &Params,
) -> Result<(PhaseResult, Trace<NodeData>), SimError> {
    let protocol = DomsetProtocol::new(params.clone());
    let trace = sim::run(g, &protocol, SCHEDULE_ROUNDS)?;
    let flag_set = |pick: fn(&sim::NodeFlags) -> bool| -> BTreeSet<Vertex> {
        trace
            .final_states
            .iter()
            .filter(|(_, s)| pick(&s.flags))
            .map(|(&v, _)| v)
            .collect()
    };
    let d1 = flag_set(|f| f.in_d1);
    let d2 = flag_set(|f| f.in_d2);
    let d3 = flag_set(|f| f.in_d3);
    let dominated = flag_set(|f| f.dominated);
    let live = g.without_vertices(&d1);
    Ok((
        PhaseResult {
            d1,
            d2,
            d3,
            dominated,
            live,
        },
        trace,
    ))
}

//! Dinic max-flow on small integer-capacity networks.
//!
//! Only used internally by the density analyzer; capacities fit in u64
//! because every instance is desk scale.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: u64,
    rev: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct FlowNetwork {
    adj: Vec<Vec<Arc>>,
}

impl FlowNetwork {
    pub(crate) fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
        }
    }

    pub(crate) fn add_arc(&mut self, from: usize, to: usize, cap: u64) {
        let rev_from = self.adj[to].len();
        let rev_to = self.adj[from].len();
        self.adj[from].push(Arc {
            to,
            cap,
            rev: rev_from,
        });
        self.adj[to].push(Arc {
            to: from,
            cap: 0,
            rev: rev_to,
        });
    }

    fn levels(&self, source: usize, sink: usize) -> Option<Vec<i32>> {
        let mut level = vec![-1; self.adj.len()];
        level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for arc in &self.adj[u] {
                if arc.cap > 0 && level[arc.to] < 0 {
                    level[arc.to] = level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        (level[sink] >= 0).then_some(level)
    }

    fn augment(
        &mut self,
        u: usize,
        sink: usize,
        pushed: u64,
        level: &[i32],
        iter: &mut [usize],
    ) -> u64 {
        if u == sink {
            return pushed;
        }
        while iter[u] < self.adj[u].len() {
            let (to, cap, rev) = {
                let arc = &self.adj[u][iter[u]];
                (arc.to, arc.cap, arc.rev)
            };
            if cap > 0 && level[to] == level[u] + 1 {
                let d = self.augment(to, sink, pushed.min(cap), level, iter);
                if d > 0 {
                    self.adj[u][iter[u]].cap -= d;
                    self.adj[to][rev].cap += d;
                    return d;
                }
            }
            iter[u] += 1;
        }
        0
    }

    /// Runs Dinic to completion and returns the max-flow value.
    pub(crate) fn max_flow(&mut self, source: usize, sink: usize) -> u64 {
        let mut flow = 0;
        while let Some(level) = self.levels(source, sink) {
            let mut iter = vec![0; self.adj.len()];
            loop {
                let pushed = self.augment(source, sink, u64::MAX, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
        flow
    }

    /// Source side of a minimum cut; call after `max_flow`.
    pub(crate) fn min_cut_source_side(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for arc in &self.adj[u] {
                if arc.cap > 0 && !seen[arc.to] {
                    seen[arc.to] = true;
                    queue.push_back(arc.to);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_diamond() {
        // s -> a -> t and s -> b -> t, all capacity 1.
        let mut net = FlowNetwork::new(4);
        net.add_arc(0, 1, 1);
        net.add_arc(0, 2, 1);
        net.add_arc(1, 3, 1);
        net.add_arc(2, 3, 1);
        assert_eq!(net.max_flow(0, 3), 2);
    }

    #[test]
    fn bottleneck() {
        let mut net = FlowNetwork::new(3);
        net.add_arc(0, 1, 7);
        net.add_arc(1, 2, 3);
        assert_eq!(net.max_flow(0, 2), 3);
        let side = net.min_cut_source_side(0);
        assert_eq!(side, vec![true, true, false]);
    }
}

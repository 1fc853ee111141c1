//! Integral max-flow and min-cost flow with arc lower bounds.
//!
//! Networks here are tiny (a handful of committee members and voters), so
//! the implementations favour simplicity: Edmonds-Karp for max-flow and
//! lower-bound elimination followed by successive shortest paths for
//! min-cost flow. All quantities are integers and stay integers.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub lower: i64,
    pub capacity: i64,
    pub cost: i64,
}

#[derive(Clone, Debug)]
pub struct FlowNetwork {
    pub num_nodes: usize,
    pub source: usize,
    pub sink: usize,
    pub arcs: Vec<FlowArc>,
}

impl FlowNetwork {
    pub fn new(num_nodes: usize, source: usize, sink: usize) -> Self {
        FlowNetwork {
            num_nodes,
            source,
            sink,
            arcs: Vec::new(),
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, lower: i64, capacity: i64, cost: i64) {
        self.arcs.push(FlowArc {
            from,
            to,
            lower,
            capacity,
            cost,
        });
    }

    fn validate(&self) -> Result<()> {
        if self.source >= self.num_nodes || self.sink >= self.num_nodes {
            return Err(Error::invalid("source or sink out of range"));
        }
        if self.source == self.sink {
            return Err(Error::invalid("source equals sink"));
        }
        for arc in &self.arcs {
            if arc.from >= self.num_nodes || arc.to >= self.num_nodes {
                return Err(Error::invalid("arc endpoint out of range"));
            }
            if arc.lower < 0 || arc.lower > arc.capacity {
                return Err(Error::invalid("arc bounds must satisfy 0 <= lower <= capacity"));
            }
        }
        Ok(())
    }
}

/// Residual graph with paired forward/backward edges.
struct Residual {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
}

impl Residual {
    fn new(num_nodes: usize) -> Self {
        Residual {
            adj: vec![Vec::new(); num_nodes],
            to: Vec::new(),
            cap: Vec::new(),
            cost: Vec::new(),
        }
    }

    /// Returns the forward edge id; the paired reverse edge is `id ^ 1`.
    fn add_edge(&mut self, from: usize, to: usize, cap: i64, cost: i64) -> usize {
        let id = self.to.len();
        self.adj[from].push(id);
        self.to.push(to);
        self.cap.push(cap);
        self.cost.push(cost);
        self.adj[to].push(id + 1);
        self.to.push(from);
        self.cap.push(0);
        self.cost.push(-cost);
        id
    }

    /// Shortest augmenting path by edge count (BFS); returns predecessor
    /// edge ids or None when the sink is unreachable.
    fn bfs_path(&self, source: usize, sink: usize) -> Option<Vec<usize>> {
        let mut pred = vec![usize::MAX; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        let mut queue = std::collections::VecDeque::new();
        seen[source] = true;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &eid in &self.adj[u] {
                let v = self.to[eid];
                if !seen[v] && self.cap[eid] > 0 {
                    seen[v] = true;
                    pred[v] = eid;
                    if v == sink {
                        return Some(pred);
                    }
                    queue.push_back(v);
                }
            }
        }
        None
    }

    /// Cheapest path by cost (Bellman-Ford; residual costs may be negative).
    fn cheapest_path(&self, source: usize, sink: usize) -> Option<Vec<usize>> {
        let n = self.adj.len();
        let mut dist = vec![i64::MAX; n];
        let mut pred = vec![usize::MAX; n];
        dist[source] = 0;
        for _ in 0..n {
            let mut changed = false;
            for eid in 0..self.to.len() {
                if self.cap[eid] <= 0 {
                    continue;
                }
                let u = self.to[eid ^ 1];
                let v = self.to[eid];
                if dist[u] != i64::MAX && dist[u] + self.cost[eid] < dist[v] {
                    dist[v] = dist[u] + self.cost[eid];
                    pred[v] = eid;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if dist[sink] == i64::MAX {
            None
        } else {
            Some(pred)
        }
    }

    fn augment(&mut self, pred: &[usize], source: usize, sink: usize) -> i64 {
        let mut bottleneck = i64::MAX;
        let mut v = sink;
        while v != source {
            let eid = pred[v];
            bottleneck = bottleneck.min(self.cap[eid]);
            v = self.to[eid ^ 1];
        }
        let mut v = sink;
        while v != source {
            let eid = pred[v];
            self.cap[eid] -= bottleneck;
            self.cap[eid ^ 1] += bottleneck;
            v = self.to[eid ^ 1];
        }
        bottleneck
    }
}

/// Maximum s-t flow. Lower bounds must be zero. Returns the flow value and
/// the flow on each arc, in input order.
pub fn max_flow(net: &FlowNetwork) -> Result<(i64, Vec<i64>)> {
    net.validate()?;
    if net.arcs.iter().any(|a| a.lower != 0) {
        return Err(Error::invalid("max_flow does not accept lower bounds"));
    }
    let mut res = Residual::new(net.num_nodes);
    let edge_ids: Vec<usize> = net
        .arcs
        .iter()
        .map(|a| res.add_edge(a.from, a.to, a.capacity, 0))
        .collect();
    let mut value = 0;
    while let Some(pred) = res.bfs_path(net.source, net.sink) {
        value += res.augment(&pred, net.source, net.sink);
    }
    let flows = edge_ids
        .iter()
        .zip(&net.arcs)
        .map(|(&eid, arc)| arc.capacity - res.cap[eid])
        .collect();
    Ok((value, flows))
}

/// Minimum-cost s-t flow of exactly `required_value` units, honouring arc
/// lower bounds. Returns `None` when no feasible flow exists. Arc costs
/// must be nonnegative.
pub fn min_cost_flow_with_bounds(
    net: &FlowNetwork,
    required_value: i64,
) -> Result<Option<(i64, Vec<i64>)>> {
    net.validate()?;
    if required_value < 0 {
        return Err(Error::invalid("required flow value must be nonnegative"));
    }
    if net.arcs.iter().any(|a| a.cost < 0) {
        return Err(Error::invalid("negative arc costs are not supported"));
    }

    // Lower-bound elimination: ship each arc's mandatory `lower` units and
    // record the resulting node imbalances; the required s-t value acts as a
    // mandatory sink-to-source return arc.
    let mut excess = vec![0i64; net.num_nodes];
    let mut base_cost = 0i64;
    for arc in &net.arcs {
        excess[arc.to] += arc.lower;
        excess[arc.from] -= arc.lower;
        base_cost += arc.lower * arc.cost;
    }
    excess[net.source] += required_value;
    excess[net.sink] -= required_value;

    let super_source = net.num_nodes;
    let super_sink = net.num_nodes + 1;
    let mut res = Residual::new(net.num_nodes + 2);
    let edge_ids: Vec<usize> = net
        .arcs
        .iter()
        .map(|a| res.add_edge(a.from, a.to, a.capacity - a.lower, a.cost))
        .collect();
    let mut supply = 0;
    for (node, &ex) in excess.iter().enumerate() {
        if ex > 0 {
            res.add_edge(super_source, node, ex, 0);
            supply += ex;
        } else if ex < 0 {
            res.add_edge(node, super_sink, -ex, 0);
        }
    }

    // Successive shortest paths from the super source.
    let mut shipped = 0;
    let mut extra_cost = 0i64;
    while shipped < supply {
        let Some(pred) = res.cheapest_path(super_source, super_sink) else {
            return Ok(None);
        };
        let mut path_cost = 0;
        let mut v = super_sink;
        while v != super_source {
            let eid = pred[v];
            path_cost += res.cost[eid];
            v = res.to[eid ^ 1];
        }
        let sent = res.augment(&pred, super_source, super_sink);
        shipped += sent;
        extra_cost += sent * path_cost;
    }

    let flows: Vec<i64> = edge_ids
        .iter()
        .zip(&net.arcs)
        .map(|(&eid, arc)| arc.lower + (arc.capacity - arc.lower - res.cap[eid]))
        .collect();
    debug_assert!(flow_is_valid(net, required_value, &flows));
    Ok(Some((base_cost + extra_cost, flows)))
}

/// Conservation and bound checks for a candidate flow vector.
pub fn flow_is_valid(net: &FlowNetwork, value: i64, flows: &[i64]) -> bool {
    if flows.len() != net.arcs.len() {
        return false;
    }
    let mut balance = vec![0i64; net.num_nodes];
    for (arc, &f) in net.arcs.iter().zip(flows) {
        if f < arc.lower || f > arc.capacity {
            return false;
        }
        balance[arc.from] -= f;
        balance[arc.to] += f;
    }
    (0..net.num_nodes).all(|v| {
        if v == net.source {
            balance[v] == -value
        } else if v == net.sink {
            balance[v] == value
        } else {
            balance[v] == 0
        }
    })
}

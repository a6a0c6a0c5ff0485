//! Projection of the relaxed solution onto AP and server marginals, the
//! node-splitting bipartite construction, and the merge into a weighted
//! tripartite hypergraph.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::discretize::Combination;

/// Values at or below this are treated as zero.
pub const ZERO_TOL: f64 = 1e-9;

/// A marginal value x̃_ijm (or ỹ_ikn) with its allocation in units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FractionalEntry {
    pub task: usize,
    pub resource: usize,
    pub level: usize,
    pub units: u32,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    /// Per (task, AP, bandwidth level), sorted by that key.
    pub x: Vec<FractionalEntry>,
    /// Per (task, server, compute level), sorted by that key.
    pub y: Vec<FractionalEntry>,
}

/// Sums the relaxed combination values into AP and server marginals.
pub fn project(z: &[f64], combos: &[Combination]) -> Projection {
    let mut x: BTreeMap<(usize, usize, usize), FractionalEntry> = BTreeMap::new();
    let mut y: BTreeMap<(usize, usize, usize), FractionalEntry> = BTreeMap::new();
    for (c, &v) in combos.iter().zip(z) {
        if v <= ZERO_TOL {
            continue;
        }
        x.entry((c.task, c.ap, c.bw_level))
            .or_insert(FractionalEntry {
                task: c.task,
                resource: c.ap,
                level: c.bw_level,
                units: c.bw_units,
                value: 0.0,
            })
            .value += v;
        y.entry((c.task, c.server, c.cpu_level))
            .or_insert(FractionalEntry {
                task: c.task,
                resource: c.server,
                level: c.cpu_level,
                units: c.cpu_units,
                value: 0.0,
            })
            .value += v;
    }
    Projection {
        x: x.into_values().collect(),
        y: y.into_values().collect(),
    }
}

/// One copy w_jr of an AP (or server); `ordinal` is 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResourceNode {
    pub resource: usize,
    pub ordinal: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BipartiteEdge {
    pub task: usize,
    pub node: usize,
    pub units: u32,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteGraph {
    pub num_tasks: usize,
    pub nodes: Vec<ResourceNode>,
    pub edges: Vec<BipartiteEdge>,
    /// First node id of each resource; nodes of a resource are contiguous.
    pub first_node: Vec<usize>,
    /// Edges produced by each (task, resource, level) entry, one or two.
    sources: BTreeMap<(usize, usize, usize), Vec<usize>>,
}

impl BipartiteGraph {
    pub fn nodes_of(&self, resource: usize) -> usize {
        let end = self.first_node.get(resource + 1).copied().unwrap_or(self.nodes.len());
        end - self.first_node[resource]
    }

    pub fn edges_for(&self, task: usize, resource: usize, level: usize) -> &[usize] {
        self.sources
            .get(&(task, resource, level))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn incident_fraction(&self, node: usize) -> f64 {
        self.edges.iter().filter(|e| e.node == node).map(|e| e.fraction).sum()
    }

    /// Σ over the copies of `resource` of the largest allocation on each copy.
    /// Bounds what any integral matching can draw from the resource.
    pub fn capacity_witness(&self, resource: usize) -> u64 {
        let first = self.first_node[resource];
        let mut max = vec![0u32; self.nodes_of(resource)];
        for e in &self.edges {
            if e.node >= first && e.node < first + max.len() {
                let slot = &mut max[e.node - first];
                *slot = (*slot).max(e.units);
            }
        }
        max.iter().map(|&u| u as u64).sum()
    }
}

fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= ZERO_TOL {
        r
    } else {
        v
    }
}

/// Node-splitting construction over the entries of one side.
///
/// For each resource the positive entries are sorted by level descending
/// (task ascending on ties) and poured, in that order, into ⌈Σ⌉ unit-capacity
/// copies; an entry straddling a boundary yields two edges.
pub fn bg_construct(entries: &[FractionalEntry], num_tasks: usize, num_resources: usize) -> BipartiteGraph {
    let mut per_resource: Vec<Vec<&FractionalEntry>> = vec![Vec::new(); num_resources];
    for e in entries.iter().filter(|e| e.value > ZERO_TOL) {
        per_resource[e.resource].push(e);
    }
    let mut graph = BipartiteGraph {
        num_tasks,
        nodes: Vec::new(),
        edges: Vec::new(),
        first_node: Vec::with_capacity(num_resources),
        sources: BTreeMap::new(),
    };
    let mut edge_index: HashMap<(usize, usize), usize> = HashMap::new();

    for (resource, list) in per_resource.iter_mut().enumerate() {
        list.sort_by(|a, b| b.level.cmp(&a.level).then(a.task.cmp(&b.task)));
        let total = snap(list.iter().map(|e| e.value).sum());
        let copies = total.ceil() as usize;
        let first = graph.nodes.len();
        graph.first_node.push(first);
        graph
            .nodes
            .extend((0..copies).map(|ordinal| ResourceNode { resource, ordinal }));

        let mut prefix = 0.0;
        for entry in list.iter() {
            let prev = snap(prefix);
            let next = snap(prefix + entry.value);
            let bucket = (prev.floor() as usize).min(copies.saturating_sub(1));
            let upper = (bucket + 1) as f64;
            let key = (entry.task, resource, entry.level);
            if next <= upper || bucket + 1 >= copies {
                let id = assign(&mut graph, &mut edge_index, entry, first + bucket, entry.value);
                graph.sources.entry(key).or_default().push(id);
            } else {
                let a = assign(&mut graph, &mut edge_index, entry, first + bucket, upper - prev);
                let b = assign(&mut graph, &mut edge_index, entry, first + bucket + 1, next - upper);
                let ids = graph.sources.entry(key).or_default();
                ids.push(a);
                if b != a {
                    ids.push(b);
                }
            }
            prefix += entry.value;
        }
    }
    graph
}

/// Creates the edge on first sight with the entry's allocation, accumulates
/// the fraction on repeats.
fn assign(
    graph: &mut BipartiteGraph,
    index: &mut HashMap<(usize, usize), usize>,
    entry: &FractionalEntry,
    node: usize,
    fraction: f64,
) -> usize {
    match index.get(&(entry.task, node)) {
        Some(&id) => {
            graph.edges[id].fraction += fraction;
            id
        }
        None => {
            let id = graph.edges.len();
            graph.edges.push(BipartiteEdge {
                task: entry.task,
                node,
                units: entry.units,
                fraction,
            });
            index.insert((entry.task, node), id);
            id
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hyperedge {
    pub task: usize,
    /// Index into `TripartiteGraph::ap_nodes`.
    pub ap_node: usize,
    /// Index into `TripartiteGraph::server_nodes`.
    pub server_node: usize,
    /// u(e), joules.
    pub weight: f64,
    pub bw_units: u32,
    pub cpu_units: u32,
    /// Combination that first defined the edge.
    pub combo: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripartiteGraph {
    pub num_tasks: usize,
    pub ap_nodes: Vec<ResourceNode>,
    pub server_nodes: Vec<ResourceNode>,
    pub edges: Vec<Hyperedge>,
}

impl TripartiteGraph {
    pub fn num_nodes(&self) -> usize {
        self.num_tasks + self.ap_nodes.len() + self.server_nodes.len()
    }

    /// Global node ids: tasks first, then AP copies, then server copies.
    pub fn node_triple(&self, e: &Hyperedge) -> [usize; 3] {
        [
            e.task,
            self.num_tasks + e.ap_node,
            self.num_tasks + self.ap_nodes.len() + e.server_node,
        ]
    }

    pub fn triples(&self) -> Vec<[usize; 3]> {
        self.edges.iter().map(|e| self.node_triple(e)).collect()
    }

    pub fn ap_of(&self, e: &Hyperedge) -> usize {
        self.ap_nodes[e.ap_node].resource
    }

    pub fn server_of(&self, e: &Hyperedge) -> usize {
        self.server_nodes[e.server_node].resource
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }
}

/// Merges the two bipartite graphs into hyperedges, visiting positive
/// combinations by saved energy, highest first; the first combination to
/// define an edge fixes its weight and allocations.
pub fn wtg_construct(
    z: &[f64],
    combos: &[Combination],
    bg_x: &BipartiteGraph,
    bg_y: &BipartiteGraph,
) -> TripartiteGraph {
    let mut order: Vec<usize> = (0..combos.len()).filter(|&v| z[v] > ZERO_TOL).collect();
    // combos are in lexicographic key order, so a stable sort breaks ties by key
    order.sort_by(|&a, &b| combos[b].saved_energy.total_cmp(&combos[a].saved_energy));

    let mut graph = TripartiteGraph {
        num_tasks: bg_x.num_tasks,
        ap_nodes: bg_x.nodes.clone(),
        server_nodes: bg_y.nodes.clone(),
        edges: Vec::new(),
    };
    let mut seen: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for v in order {
        let c = &combos[v];
        for &xe in bg_x.edges_for(c.task, c.ap, c.bw_level) {
            for &ye in bg_y.edges_for(c.task, c.server, c.cpu_level) {
                let (ex, ey) = (&bg_x.edges[xe], &bg_y.edges[ye]);
                let key = (c.task, ex.node, ey.node);
                if seen.contains_key(&key) {
                    continue;
                }
                seen.insert(key, graph.edges.len());
                graph.edges.push(Hyperedge {
                    task: c.task,
                    ap_node: ex.node,
                    server_node: ey.node,
                    weight: c.saved_energy,
                    bw_units: ex.units,
                    cpu_units: ey.units,
                    combo: v,
                });
            }
        }
    }
    graph
}

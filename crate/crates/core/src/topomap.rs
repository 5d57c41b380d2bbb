//! Topological map of an environment.
//!
//! Nodes are viewpoints keyed by their dataset id, each carrying a 3-D position and a
//! reference to its panorama. Edges are unordered, unit-weight, and come only from
//! consecutive waypoints of the trajectories the map was built from.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::alignment::PathHypothesis;
use crate::error::{read_json, Error, Result};
use crate::harness::Episode;

/// Two waypoints with the same id must agree on position within this many meters.
pub const POSITION_TOLERANCE_M: f64 = 1e-6;

pub type Position = [f64; 3];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: String,
    pub position: Position,
    /// Panorama reference: an image path, a directory of tiles, or a synthetic label-set id.
    pub panorama: String,
}

impl GraphNode {
    pub fn new(id: impl Into<String>, position: Position, panorama: impl Into<String>) -> Self {
        GraphNode {
            id: id.into(),
            position,
            panorama: panorama.into(),
        }
    }
}

/// Undirected unit-weight graph over viewpoints. Immutable once built.
///
/// Serializes as `{scene_id, nodes: [{id, position, panorama}], edges: [[id, id]]}`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct TopoGraph {
    scene_id: String,
    nodes: BTreeMap<String, GraphNode>,
    // (lo, hi) with lo < hi
    edges: BTreeSet<(String, String)>,
    adjacency: BTreeMap<String, BTreeSet<String>>,
}

/// On-disk layout of a graph file.
#[derive(Serialize, Deserialize)]
struct GraphFile {
    scene_id: String,
    nodes: Vec<GraphNode>,
    edges: Vec<[String; 2]>,
}

impl From<TopoGraph> for GraphFile {
    fn from(graph: TopoGraph) -> Self {
        GraphFile {
            scene_id: graph.scene_id,
            nodes: graph.nodes.into_values().collect(),
            edges: graph.edges.into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl TryFrom<GraphFile> for TopoGraph {
    type Error = Error;

    fn try_from(file: GraphFile) -> Result<Self> {
        TopoGraph::from_parts(
            file.scene_id,
            file.nodes,
            file.edges.into_iter().map(|[a, b]| (a, b)),
        )
    }
}

impl TopoGraph {
    /// Assembles a graph from explicit nodes and edges, checking every invariant.
    pub fn from_parts(
        scene_id: impl Into<String>,
        nodes: impl IntoIterator<Item = GraphNode>,
        edges: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self> {
        let mut graph = TopoGraph {
            scene_id: scene_id.into(),
            ..Default::default()
        };
        for node in nodes {
            graph.insert_node(node)?;
        }
        for (a, b) in edges {
            for id in [&a, &b] {
                if !graph.nodes.contains_key(id) {
                    return Err(Error::UnknownNode(id.clone()));
                }
            }
            graph.insert_edge(a, b)?;
        }
        Ok(graph)
    }

    fn insert_node(&mut self, node: GraphNode) -> Result<()> {
        if node.position.iter().any(|v| !v.is_finite()) {
            return Err(Error::InconsistentInput(format!(
                "node `{}` has a non-finite position",
                node.id
            )));
        }
        match self.nodes.get(&node.id) {
            Some(existing) => {
                let drift = distance(&existing.position, &node.position);
                if drift > POSITION_TOLERANCE_M {
                    return Err(Error::InconsistentInput(format!(
                        "waypoint `{}` appears at {:?} and {:?}",
                        node.id, existing.position, node.position
                    )));
                }
            }
            None => {
                self.adjacency.entry(node.id.clone()).or_default();
                self.nodes.insert(node.id.clone(), node);
            }
        }
        Ok(())
    }

    fn insert_edge(&mut self, a: String, b: String) -> Result<()> {
        if a == b {
            return Err(Error::InconsistentInput(format!("self-loop on `{a}`")));
        }
        self.adjacency
            .entry(a.clone())
            .or_default()
            .insert(b.clone());
        self.adjacency
            .entry(b.clone())
            .or_default()
            .insert(a.clone());
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges.insert(key);
        Ok(())
    }

    pub fn scene_id(&self) -> &str {
        &self.scene_id
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: &str) -> Option<&GraphNode> {
        self.nodes.get(id)
    }

    /// Nodes in id order.
    pub fn nodes(&self) -> impl Iterator<Item = &GraphNode> {
        self.nodes.values()
    }

    /// Edges as `(lo, hi)` id pairs in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        self.adjacency.get(a).is_some_and(|n| n.contains(b))
    }

    /// Neighbors of `id` in lexicographic order.
    pub fn neighbors(&self, id: &str) -> impl Iterator<Item = &str> {
        self.adjacency
            .get(id)
            .into_iter()
            .flat_map(|n| n.iter().map(String::as_str))
    }

    /// Validates `ids` as a connected walk in this graph and attaches positions.
    pub fn path(&self, ids: &[String]) -> Result<NodePath> {
        if ids.is_empty() {
            return Err(Error::InvalidInput("a path needs at least one node".into()));
        }
        let mut positions = Vec::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            let node = self
                .node(id)
                .ok_or_else(|| Error::UnknownNode(id.clone()))?;
            if i > 0 && !self.has_edge(&ids[i - 1], id) {
                return Err(Error::InconsistentInput(format!(
                    "`{}` and `{id}` are not adjacent",
                    ids[i - 1]
                )));
            }
            positions.push(node.position);
        }
        Ok(NodePath {
            node_ids: ids.to_vec(),
            positions,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        read_json(path)
    }
}

fn distance(a: &Position, b: &Position) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Ordered walk through the graph, with the positions of its nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodePath {
    pub node_ids: Vec<String>,
    pub positions: Vec<Position>,
}

impl NodePath {
    pub fn len(&self) -> usize {
        self.node_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_ids.is_empty()
    }

    pub fn start(&self) -> &str {
        &self.node_ids[0]
    }

    pub fn goal(&self) -> &str {
        &self.node_ids[self.node_ids.len() - 1]
    }
}

/// Builds the map from the union of all waypoints and consecutive-waypoint edges.
pub fn build_graph(episodes: &[Episode], scene_id: &str) -> Result<TopoGraph> {
    let mut graph = TopoGraph {
        scene_id: scene_id.to_string(),
        ..Default::default()
    };
    // Insert every node first so conflict detection does not depend on episode order.
    for episode in episodes {
        if episode.scene_id != scene_id {
            return Err(Error::InconsistentInput(format!(
                "episode `{}` belongs to scene `{}`, not `{scene_id}`",
                episode.episode_id, episode.scene_id
            )));
        }
        if episode.path.is_empty() {
            return Err(Error::InvalidInput(format!(
                "episode `{}` has no waypoints",
                episode.episode_id
            )));
        }
        for waypoint in &episode.path {
            graph.insert_node(waypoint.clone())?;
        }
    }
    for episode in episodes {
        for pair in episode.path.windows(2) {
            if pair[0].id != pair[1].id {
                graph.insert_edge(pair[0].id.clone(), pair[1].id.clone())?;
            }
        }
    }
    Ok(graph)
}

/// Minimum-hop path by BFS. Neighbors are expanded in lexicographic id order, so the
/// first-discovered parent of every node, and therefore the returned path, is fixed.
pub fn shortest_path(graph: &TopoGraph, start: &str, goal: &str) -> Result<NodePath> {
    for id in [start, goal] {
        if graph.node(id).is_none() {
            return Err(Error::UnknownNode(id.to_string()));
        }
    }
    let mut parent: BTreeMap<&str, &str> = BTreeMap::new();
    let mut seen: HashSet<&str> = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(current) = queue.pop_front() {
        if current == goal {
            break;
        }
        for next in graph.neighbors(current) {
            if seen.insert(next) {
                parent.insert(next, current);
                queue.push_back(next);
            }
        }
    }
    if !seen.contains(goal) {
        return Err(Error::NoPath {
            from: start.to_string(),
            to: goal.to_string(),
        });
    }
    let mut ids = vec![goal.to_string()];
    let mut cursor = goal;
    while let Some(prev) = parent.get(cursor) {
        ids.push(prev.to_string());
        cursor = prev;
    }
    ids.reverse();
    graph.path(&ids)
}

/// A goal that produced no hypothesis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedGoal {
    pub goal: String,
    pub rank: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HypothesisSet {
    pub hypotheses: Vec<PathHypothesis>,
    pub skipped: Vec<SkippedGoal>,
}

/// One shortest-path hypothesis per reachable goal, in retrieval order.
///
/// A goal whose path repeats an earlier hypothesis's node sequence is dropped in favor of
/// the better-ranked one. Unreachable or unknown goals are recorded in `skipped`.
pub fn generate_hypotheses(
    graph: &TopoGraph,
    start: &str,
    goals: &[String],
) -> Result<HypothesisSet> {
    if graph.node(start).is_none() {
        return Err(Error::UnknownNode(start.to_string()));
    }
    let mut set = HypothesisSet::default();
    let mut seen: HashSet<Vec<String>> = HashSet::new();
    for (i, goal) in goals.iter().enumerate() {
        let rank = i + 1;
        match shortest_path(graph, start, goal) {
            Ok(path) => {
                if seen.insert(path.node_ids.clone()) {
                    set.hypotheses.push(PathHypothesis::new(path, rank));
                } else {
                    set.skipped.push(SkippedGoal {
                        goal: goal.clone(),
                        rank,
                        reason: "duplicate of a better-ranked hypothesis".into(),
                    });
                }
            }
            Err(err @ (Error::NoPath { .. } | Error::UnknownNode(_))) => {
                log::debug!("goal `{goal}` (rank {rank}) skipped: {err}");
                set.skipped.push(SkippedGoal {
                    goal: goal.clone(),
                    rank,
                    reason: err.to_string(),
                });
            }
            Err(err) => return Err(err),
        }
    }
    Ok(set)
}

//! Seeded synthetic worlds: a grid-embedded connected graph, landmark labels per node, and
//! templated episodes whose landmark sequence is realizable along the ground-truth path.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Episode;
use crate::error::{read_json, Error, Result};
use crate::providers::{instruction_from_landmarks, LabelIndex};
use crate::topomap::{shortest_path, GraphNode, TopoGraph};

/// Landmark names usable in templated instructions. None contains an article, a
/// conjunction or punctuation, so the rule-based extractor recovers them exactly.
pub const LANDMARK_VOCABULARY: &[&str] = &[
    "kitchen",
    "sink",
    "bedroom",
    "hallway",
    "staircase",
    "dining table",
    "fireplace",
    "bathtub",
    "couch",
    "piano",
    "bookshelf",
    "laundry room",
    "front door",
    "potted plant",
    "mirror",
    "wardrobe",
    "desk",
    "armchair",
    "television",
    "refrigerator",
    "oven",
    "washing machine",
    "painting",
    "rug",
    "floor lamp",
    "bed",
    "toilet",
    "shower",
    "closet",
    "balcony",
    "patio",
    "garage",
    "office",
    "pantry",
    "bar stool",
    "coffee table",
    "chandelier",
    "vase",
    "clock",
    "window",
    "ottoman",
    "dresser",
    "nightstand",
    "bench",
    "railing",
    "archway",
    "pool table",
    "treadmill",
    "sculpture",
    "aquarium",
    "stove",
    "microwave",
    "dishwasher",
    "bathroom",
    "living room",
    "study",
    "foyer",
    "hot tub",
    "wine rack",
    "grand staircase",
    "exercise bike",
    "kitchen island",
    "towel rack",
    "ceiling fan",
];

pub const MAX_LABELS_PER_NODE: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldParams {
    pub scene_id: String,
    pub n_nodes: usize,
    /// Target mean node degree; values at or below 2 give (nearly) a tree.
    pub branching: f64,
    pub n_landmark_types: usize,
    pub n_episodes: usize,
    /// Longest ground-truth path, in hops.
    pub max_hops: usize,
    pub seed: u64,
}

impl WorldParams {
    pub fn new(
        n_nodes: usize,
        branching: f64,
        n_landmark_types: usize,
        n_episodes: usize,
        seed: u64,
    ) -> Self {
        WorldParams {
            scene_id: format!("world{seed}"),
            n_nodes,
            branching,
            n_landmark_types,
            n_episodes,
            max_hops: 5,
            seed,
        }
    }

    pub fn scene_id(mut self, id: impl Into<String>) -> Self {
        self.scene_id = id.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticWorld {
    pub graph: TopoGraph,
    pub labels: LabelIndex,
    pub episodes: Vec<Episode>,
    pub seed: u64,
}

impl SyntheticWorld {
    pub fn scene_id(&self) -> &str {
        self.graph.scene_id()
    }

    /// Labels that occur at exactly one node.
    pub fn unique_labels(&self) -> BTreeSet<String> {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for l in self.labels.values().flatten() {
            *counts.entry(l).or_default() += 1;
        }
        counts
            .into_iter()
            .filter(|(_, n)| *n == 1)
            .map(|(l, _)| l.to_string())
            .collect()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        read_json(path)
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn generate_world(params: &WorldParams) -> Result<SyntheticWorld> {
    let n = params.n_nodes;
    if n < 2 {
        return Err(Error::Generation("need at least 2 nodes".into()));
    }
    if params.n_landmark_types == 0 || params.n_episodes == 0 || params.max_hops == 0 {
        return Err(Error::Generation(
            "landmark types, episodes and max hops must be positive".into(),
        ));
    }
    if !(params.branching.is_finite() && params.branching > 0.0) {
        return Err(Error::Generation("branching must be positive".into()));
    }
    if params.n_landmark_types > LANDMARK_VOCABULARY.len() {
        return Err(Error::Generation(format!(
            "{} landmark types requested, vocabulary has {}",
            params.n_landmark_types,
            LANDMARK_VOCABULARY.len()
        )));
    }
    if params.n_landmark_types > n * MAX_LABELS_PER_NODE {
        return Err(Error::Generation(format!(
            "{} landmark types cannot be placed on {n} nodes",
            params.n_landmark_types
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let width = (n as f64).sqrt().ceil() as usize;
    let digits = (n - 1).to_string().len();
    let ids: Vec<String> = (0..n).map(|i| format!("n{i:0digits$}")).collect();
    let nodes: Vec<GraphNode> = (0..n)
        .map(|i| {
            let position = [(i % width) as f64, (i / width) as f64, 0.0];
            GraphNode::new(
                ids[i].clone(),
                position,
                format!("synthetic:{}/{}", params.scene_id, ids[i]),
            )
        })
        .collect();

    // Grid-neighbor candidates; a random spanning tree keeps the graph connected.
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        if (i % width) + 1 < width && i + 1 < n {
            candidates.push((i, i + 1));
        }
        if i + width < n {
            candidates.push((i, i + width));
        }
    }
    candidates.shuffle(&mut rng);
    let mut parent: Vec<usize> = (0..n).collect();
    let mut chosen = Vec::new();
    let mut spare = Vec::new();
    for (a, b) in candidates {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            chosen.push((a, b));
        } else {
            spare.push((a, b));
        }
    }
    let target_edges = ((params.branching * n as f64) / 2.0).round() as usize;
    for e in spare {
        if chosen.len() >= target_edges {
            break;
        }
        chosen.push(e);
    }
    let edges: Vec<(String, String)> = chosen
        .iter()
        .map(|&(a, b)| (ids[a].clone(), ids[b].clone()))
        .collect();
    let graph = TopoGraph::from_parts(params.scene_id.clone(), nodes, edges)?;

    // Every type lands somewhere; unlabeled nodes then draw a random type.
    let vocabulary: Vec<String> = LANDMARK_VOCABULARY[..params.n_landmark_types]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut labels: LabelIndex = ids.iter().map(|id| (id.clone(), BTreeSet::new())).collect();
    for (t, name) in vocabulary.iter().enumerate() {
        labels
            .get_mut(&ids[order[t % n]])
            .expect("id")
            .insert(name.clone());
    }
    for id in &ids {
        let set = labels.get_mut(id).expect("id");
        if set.is_empty() {
            set.insert(vocabulary.choose(&mut rng).expect("vocabulary").clone());
        }
    }

    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for l in labels.values().flatten() {
        *counts.entry(l.as_str()).or_default() += 1;
    }
    let unique_label_of = |id: &str| -> Vec<String> {
        labels[id]
            .iter()
            .filter(|l| counts[l.as_str()] == 1)
            .cloned()
            .collect()
    };

    let mut episodes = Vec::with_capacity(params.n_episodes);
    for e in 0..params.n_episodes {
        let start = &ids[rng.random_range(0..n)];
        let dist = hop_distances(&graph, start);
        let reachable: Vec<&String> = ids
            .iter()
            .filter(
                |id| matches!(dist.get(id.as_str()), Some(&d) if d >= 1 && d <= params.max_hops),
            )
            .collect();
        let preferred: Vec<&String> = reachable
            .iter()
            .copied()
            .filter(|id| !unique_label_of(id).is_empty())
            .collect();
        let pool = if preferred.is_empty() {
            &reachable
        } else {
            &preferred
        };
        let goal = *pool
            .choose(&mut rng)
            .ok_or_else(|| Error::Generation(format!("no goal reachable from `{start}`")))?;

        let path = shortest_path(&graph, start, goal)?;
        let mut landmarks = Vec::with_capacity(path.len());
        for (i, id) in path.node_ids.iter().enumerate() {
            let options: Vec<String> = if i + 1 == path.len() {
                let unique = unique_label_of(id);
                if unique.is_empty() {
                    labels[id].iter().cloned().collect()
                } else {
                    unique
                }
            } else {
                labels[id].iter().cloned().collect()
            };
            landmarks.push(options.choose(&mut rng).expect("labels").clone());
        }
        episodes.push(Episode {
            episode_id: format!("{}-ep{e:03}", params.scene_id),
            scene_id: params.scene_id.clone(),
            instruction: instruction_from_landmarks(&landmarks),
            path: path
                .node_ids
                .iter()
                .map(|id| graph.node(id).expect("path node").clone())
                .collect(),
        });
    }

    Ok(SyntheticWorld {
        graph,
        labels,
        episodes,
        seed: params.seed,
    })
}

fn hop_distances<'a>(graph: &'a TopoGraph, start: &'a str) -> BTreeMap<&'a str, usize> {
    let mut dist = BTreeMap::from([(start, 0usize)]);
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        let d = dist[cur];
        for next in graph.neighbors(cur) {
            if !dist.contains_key(next) {
                dist.insert(next, d + 1);
                queue.push_back(next);
            }
        }
    }
    dist
}

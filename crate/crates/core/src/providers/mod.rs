//! Model-backed capabilities behind uniform traits.
//!
//! Four capabilities drive the pipeline: landmark extraction from an instruction,
//! text/panorama embeddings for goal retrieval, binary landmark grounding on a panorama,
//! and holistic path rating. Each has a remote implementation (chat-completion style HTTP
//! with a content-addressed response cache) and a deterministic oracle implementation
//! that answers from a synthetic world's ground-truth labels.

mod cache;
mod oracle;
mod prompts;
mod remote;
mod simulated;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topomap::{GraphNode, TopoGraph};

pub use cache::{RequestDigest, ResponseCache};
pub use oracle::{instruction_from_landmarks, LabelIndex, Oracle, RuleBasedExtractor};
pub use prompts::{EXTRACT_PROMPT, GROUND_PROMPT, PROMPT_VERSION, RATE_PROMPT};
pub use remote::{
    FilePanoramas, HttpRequest, HttpResponse, HttpTransport, PanoramaImage, PanoramaSource,
    ProviderConfig, RemoteClient, RemoteEmbedder, RemoteExtractor, RemoteGrounder, RemoteRater,
    Transport,
};
pub use simulated::{NodeIdPanoramas, SimulatedService};

/// Ordered landmark phrases extracted from one instruction. Duplicates are kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LandmarkSequence {
    phrases: Vec<String>,
    source_instruction: String,
}

impl LandmarkSequence {
    pub fn new(phrases: Vec<String>, source_instruction: impl Into<String>) -> Result<Self> {
        if phrases.iter().any(|p| p.trim().is_empty()) {
            return Err(Error::InvalidInput("empty landmark phrase".into()));
        }
        Ok(LandmarkSequence {
            phrases,
            source_instruction: source_instruction.into(),
        })
    }

    pub fn phrases(&self) -> &[String] {
        &self.phrases
    }

    pub fn source_instruction(&self) -> &str {
        &self.source_instruction
    }

    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }

    pub fn last(&self) -> Option<&str> {
        self.phrases.last().map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundingJudgment {
    pub node_id: String,
    pub landmark: String,
    pub present: bool,
    pub provider_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalScore {
    pub node_id: String,
    pub score: f64,
}

/// Holistic 1-5 rating of a path against an instruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathRating(u8);

impl PathRating {
    pub fn new(rating: u8) -> Result<Self> {
        if (1..=5).contains(&rating) {
            Ok(PathRating(rating))
        } else {
            Err(Error::InvalidInput(format!(
                "rating {rating} outside 1..=5"
            )))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

pub trait LandmarkExtractor: Send + Sync {
    fn extract_landmarks(&self, instruction: &str) -> Result<LandmarkSequence>;
}

pub trait Embedder: Send + Sync {
    fn embed_text(&self, text: &str) -> Result<Vec<f32>>;
    fn embed_panorama(&self, node: &GraphNode) -> Result<Vec<f32>>;
}

pub trait Grounder: Send + Sync {
    fn ground_landmark(&self, node: &GraphNode, landmark: &str) -> Result<GroundingJudgment>;
}

pub trait PathRater: Send + Sync {
    /// `nodes` are the path's viewpoints in travel order.
    fn rate_path(
        &self,
        nodes: &[GraphNode],
        instruction: &str,
        landmarks: &LandmarkSequence,
    ) -> Result<PathRating>;
}

/// One implementation per capability, shareable across worker threads.
#[derive(Clone)]
pub struct Providers {
    pub extractor: Arc<dyn LandmarkExtractor>,
    pub embedder: Arc<dyn Embedder>,
    pub grounder: Arc<dyn Grounder>,
    pub rater: Arc<dyn PathRater>,
}

impl Providers {
    /// Oracle-backed set: rule-based extraction plus label-driven embedding, grounding and rating.
    pub fn oracle(oracle: Arc<Oracle>) -> Self {
        Providers {
            extractor: Arc::new(RuleBasedExtractor),
            embedder: oracle.clone(),
            grounder: oracle.clone(),
            rater: oracle,
        }
    }
}

/// Cosine similarity; zero when either vector has zero norm.
pub fn cosine_similarity(a: &[f32], b: &[f32]) -> f64 {
    let (mut dot, mut na, mut nb) = (0.0f64, 0.0f64, 0.0f64);
    for (x, y) in a.iter().zip(b) {
        let (x, y) = (*x as f64, *y as f64);
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0)
}

/// Every node ranked by similarity to `landmark`: descending score, ties by node id.
pub fn rank_nodes(
    graph: &TopoGraph,
    landmark: &str,
    embedder: &dyn Embedder,
) -> Result<Vec<RetrievalScore>> {
    let query = embedder.embed_text(landmark)?;
    let mut scores = Vec::with_capacity(graph.node_count());
    for node in graph.nodes() {
        let pano = embedder.embed_panorama(node)?;
        if pano.len() != query.len() {
            return Err(Error::ProviderFormat {
                capability: "embedding",
                detail: format!(
                    "panorama `{}` embedding has {} dims, query has {}",
                    node.id,
                    pano.len(),
                    query.len()
                ),
            });
        }
        let score = cosine_similarity(&query, &pano);
        if !score.is_finite() {
            return Err(Error::ProviderFormat {
                capability: "embedding",
                detail: format!("non-finite similarity for `{}`", node.id),
            });
        }
        scores.push(RetrievalScore {
            node_id: node.id.clone(),
            score,
        });
    }
    // graph.nodes() is id-ordered and the sort is stable, so equal scores stay in id order.
    scores.sort_by(|a, b| b.score.total_cmp(&a.score));
    Ok(scores)
}

/// Top-`k` goal candidates for the final landmark of an instruction.
pub fn rank_goal_candidates(
    graph: &TopoGraph,
    landmark: &str,
    k: usize,
    embedder: &dyn Embedder,
) -> Result<Vec<RetrievalScore>> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if graph.is_empty() {
        return Err(Error::InvalidInput(
            "cannot retrieve from an empty graph".into(),
        ));
    }
    let mut ranked = rank_nodes(graph, landmark, embedder)?;
    ranked.truncate(k);
    Ok(ranked)
}

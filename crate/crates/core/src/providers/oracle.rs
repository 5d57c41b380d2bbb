//! Deterministic stand-ins for the model providers, driven by ground-truth labels.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicUsize, Ordering};

use sha2::{Digest, Sha256};

use super::{
    Embedder, Grounder, GroundingJudgment, LandmarkExtractor, LandmarkSequence, PathRater,
    PathRating,
};
use crate::alignment::{normalized_alignment, GroundingMatrix};
use crate::error::{Error, Result};
use crate::topomap::GraphNode;

/// Node id -> landmark labels visible in that node's panorama.
pub type LabelIndex = BTreeMap<String, BTreeSet<String>>;

const ARTICLES: [&str; 3] = ["the", "a", "an"];
const CONJUNCTIONS: [&str; 2] = ["and", "then"];

/// Extracts the noun phrase following the first article of every clause.
///
/// Clauses are delimited by `,` `;` `.` and the words "and"/"then". This is exact for
/// instructions produced by [`instruction_from_landmarks`] and for simple route sentences
/// such as "Turn left in the hallway, go to the kitchen, and stop by the sink".
#[derive(Debug, Clone, Copy, Default)]
pub struct RuleBasedExtractor;

impl LandmarkExtractor for RuleBasedExtractor {
    fn extract_landmarks(&self, instruction: &str) -> Result<LandmarkSequence> {
        if instruction.trim().is_empty() {
            return Err(Error::InvalidInput("empty instruction".into()));
        }
        let lowered = instruction.to_lowercase();
        let mut phrases = Vec::new();
        for segment in lowered.split([',', ';', '.', '!', '?']) {
            let mut clause: Vec<&str> = Vec::new();
            for word in segment.split_whitespace() {
                if CONJUNCTIONS.contains(&word) {
                    push_phrase(&clause, &mut phrases);
                    clause.clear();
                } else {
                    clause.push(word);
                }
            }
            push_phrase(&clause, &mut phrases);
        }
        if phrases.is_empty() {
            return Err(Error::InvalidInput(format!(
                "no landmarks found in `{instruction}`"
            )));
        }
        LandmarkSequence::new(phrases, instruction)
    }
}

fn push_phrase(clause: &[&str], out: &mut Vec<String>) {
    if let Some(pos) = clause.iter().position(|w| ARTICLES.contains(w)) {
        let phrase = clause[pos + 1..].join(" ");
        let phrase = phrase.trim_matches(|c: char| !c.is_alphanumeric());
        if !phrase.is_empty() {
            out.push(phrase.to_string());
        }
    }
}

/// Renders a landmark list with the fixed route grammar used by synthetic episodes.
pub fn instruction_from_landmarks(landmarks: &[String]) -> String {
    match landmarks {
        [] => String::new(),
        [only] => format!("Stop at the {only}."),
        [first, middle @ .., last] => {
            let mut text = format!("Go to the {first}");
            for m in middle {
                text.push_str(&format!(", then the {m}"));
            }
            text.push_str(&format!(", and stop at the {last}."));
            text
        }
    }
}

/// Label-driven embedder, grounder and rater for a synthetic world.
///
/// Text embeddings are one-hot over the world's label vocabulary (plus one slot for unknown
/// phrases); a panorama embeds as the normalized sum of its labels' one-hots. Grounding
/// answers label membership, optionally flipped with probability `noise` by a hash of
/// `(seed, node, landmark)`, so every answer is a pure function of its inputs.
#[derive(Debug)]
pub struct Oracle {
    labels: LabelIndex,
    vocabulary: BTreeMap<String, usize>,
    noise: f64,
    seed: u64,
    grounding_calls: AtomicUsize,
    embedding_calls: AtomicUsize,
    rating_calls: AtomicUsize,
}

impl Oracle {
    pub fn new(labels: LabelIndex) -> Self {
        let vocabulary = labels
            .values()
            .flatten()
            .map(|l| normalize(l))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, l)| (l, i))
            .collect();
        Oracle {
            labels,
            vocabulary,
            noise: 0.0,
            seed: 0,
            grounding_calls: AtomicUsize::new(0),
            embedding_calls: AtomicUsize::new(0),
            rating_calls: AtomicUsize::new(0),
        }
    }

    /// Flip each grounding answer with probability `noise`, keyed by `seed`.
    pub fn with_noise(mut self, noise: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&noise) {
            return Err(Error::InvalidInput(format!("noise {noise} outside [0, 1]")));
        }
        self.noise = noise;
        self.seed = seed;
        Ok(self)
    }

    pub fn labels(&self) -> &LabelIndex {
        &self.labels
    }

    pub fn grounding_calls(&self) -> usize {
        self.grounding_calls.load(Ordering::Relaxed)
    }

    pub fn embedding_calls(&self) -> usize {
        self.embedding_calls.load(Ordering::Relaxed)
    }

    pub fn rating_calls(&self) -> usize {
        self.rating_calls.load(Ordering::Relaxed)
    }

    fn has_label(&self, node_id: &str, landmark: &str) -> bool {
        let wanted = normalize(landmark);
        self.labels
            .get(node_id)
            .is_some_and(|set| set.iter().any(|l| normalize(l) == wanted))
    }

    fn judge(&self, node_id: &str, landmark: &str) -> bool {
        let truth = self.has_label(node_id, landmark);
        if self.noise > 0.0 && self.flip_draw(node_id, landmark) < self.noise {
            !truth
        } else {
            truth
        }
    }

    /// Uniform draw in [0, 1) fixed by (seed, node, landmark).
    fn flip_draw(&self, node_id: &str, landmark: &str) -> f64 {
        let mut h = Sha256::new();
        h.update(self.seed.to_le_bytes());
        h.update(node_id.as_bytes());
        h.update([0u8]);
        h.update(normalize(landmark).as_bytes());
        let digest = h.finalize();
        let mut bytes = [0u8; 8];
        bytes.copy_from_slice(&digest[..8]);
        (u64::from_le_bytes(bytes) >> 11) as f64 / (1u64 << 53) as f64
    }

    fn one_hot(&self, phrase: &str) -> Vec<f32> {
        let mut v = vec![0.0; self.vocabulary.len() + 1];
        let slot = self
            .vocabulary
            .get(&normalize(phrase))
            .copied()
            .unwrap_or(self.vocabulary.len());
        v[slot] = 1.0;
        v
    }
}

fn normalize(s: &str) -> String {
    s.trim().to_lowercase()
}

impl Embedder for Oracle {
    fn embed_text(&self, text: &str) -> Result<Vec<f32>> {
        self.embedding_calls.fetch_add(1, Ordering::Relaxed);
        Ok(self.one_hot(text))
    }

    fn embed_panorama(&self, node: &GraphNode) -> Result<Vec<f32>> {
        self.embedding_calls.fetch_add(1, Ordering::Relaxed);
        let mut v = vec![0.0f32; self.vocabulary.len() + 1];
        if let Some(labels) = self.labels.get(&node.id) {
            for label in labels {
                v[self.vocabulary[&normalize(label)]] += 1.0;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f32>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
        }
        Ok(v)
    }
}

impl Grounder for Oracle {
    fn ground_landmark(&self, node: &GraphNode, landmark: &str) -> Result<GroundingJudgment> {
        if landmark.trim().is_empty() {
            return Err(Error::InvalidInput("empty landmark".into()));
        }
        self.grounding_calls.fetch_add(1, Ordering::Relaxed);
        Ok(GroundingJudgment {
            node_id: node.id.clone(),
            landmark: landmark.to_string(),
            present: self.judge(&node.id, landmark),
            provider_id: "oracle".into(),
        })
    }
}

impl PathRater for Oracle {
    /// `round(1 + 4 * normalized_alignment)` over this oracle's own grounding answers.
    fn rate_path(
        &self,
        nodes: &[GraphNode],
        _instruction: &str,
        landmarks: &LandmarkSequence,
    ) -> Result<PathRating> {
        if nodes.is_empty() || landmarks.is_empty() {
            return Err(Error::InvalidInput(
                "rating needs a path and landmarks".into(),
            ));
        }
        self.rating_calls.fetch_add(1, Ordering::Relaxed);
        let matrix = GroundingMatrix::from_fn(
            landmarks.phrases().to_vec(),
            nodes.iter().map(|n| n.id.clone()).collect(),
            |r, c| self.judge(&nodes[c].id, &landmarks.phrases()[r]),
        )?;
        let rating = (1.0 + 4.0 * normalized_alignment(&matrix)).round() as u8;
        PathRating::new(rating)
    }
}

//! Landmark/panorama alignment and hypothesis ranking.
//!
//! A path hypothesis is scored by how many instruction landmarks can be grounded, in order,
//! in distinct panoramas along the path: the longest common subsequence between the
//! landmark sequence and the panorama sequence where "match" is a positive grounding
//! judgment. The count is normalized by the number of panoramas so that long detours are
//! penalized.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::providers::{Grounder, LandmarkSequence, PathRater};
use crate::topomap::{GraphNode, NodePath, TopoGraph};

/// Number of seeded picks taken when several hypotheses share the best score.
pub const TIE_REPEATS: usize = 3;

/// Binary landmarks x panoramas matrix; rows follow instruction order, columns path order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundingMatrix {
    entries: Vec<Vec<u8>>,
    landmark_labels: Vec<String>,
    node_ids: Vec<String>,
}

impl GroundingMatrix {
    pub fn new(
        entries: Vec<Vec<u8>>,
        landmark_labels: Vec<String>,
        node_ids: Vec<String>,
    ) -> Result<Self> {
        if landmark_labels.is_empty() || node_ids.is_empty() {
            return Err(Error::InvalidInput(
                "grounding matrix needs at least one row and one column".into(),
            ));
        }
        if entries.len() != landmark_labels.len()
            || entries.iter().any(|row| row.len() != node_ids.len())
        {
            return Err(Error::InvalidInput(format!(
                "grounding matrix shape does not match {} landmarks x {} panoramas",
                landmark_labels.len(),
                node_ids.len()
            )));
        }
        if entries.iter().flatten().any(|&v| v > 1) {
            return Err(Error::InvalidInput(
                "grounding entries must be 0 or 1".into(),
            ));
        }
        Ok(GroundingMatrix {
            entries,
            landmark_labels,
            node_ids,
        })
    }

    pub fn from_fn(
        landmark_labels: Vec<String>,
        node_ids: Vec<String>,
        mut cell: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        let entries = (0..landmark_labels.len())
            .map(|r| (0..node_ids.len()).map(|c| cell(r, c) as u8).collect())
            .collect();
        GroundingMatrix::new(entries, landmark_labels, node_ids)
    }

    /// Unlabeled matrix from rows of 0/1, handy for fixtures.
    pub fn from_rows(rows: &[&[u8]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        GroundingMatrix::new(
            rows.iter().map(|r| r.to_vec()).collect(),
            (0..rows.len()).map(|r| format!("l{r}")).collect(),
            (0..cols).map(|c| format!("p{c}")).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.node_ids.len()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.entries[row][col] == 1
    }

    pub fn entries(&self) -> &[Vec<u8>] {
        &self.entries
    }

    pub fn landmark_labels(&self) -> &[String] {
        &self.landmark_labels
    }

    pub fn node_ids(&self) -> &[String] {
        &self.node_ids
    }
}

/// Asks `grounder` about every (landmark, panorama) cell of one path.
///
/// Cells are requested concurrently; the matrix layout does not depend on completion order.
pub fn build_grounding_matrix(
    nodes: &[GraphNode],
    landmarks: &LandmarkSequence,
    grounder: &dyn Grounder,
) -> Result<GroundingMatrix> {
    if nodes.is_empty() || landmarks.is_empty() {
        return Err(Error::InvalidInput(
            "grounding needs a non-empty path and landmark sequence".into(),
        ));
    }
    let cols = nodes.len();
    let cells: Vec<bool> = (0..landmarks.len() * cols)
        .into_par_iter()
        .map(|i| {
            let (r, c) = (i / cols, i % cols);
            grounder
                .ground_landmark(&nodes[c], &landmarks.phrases()[r])
                .map(|j| j.present)
                .map_err(|e| Error::Grounding {
                    row: r,
                    col: c,
                    source: Box::new(e),
                })
        })
        .collect::<Result<_>>()?;
    GroundingMatrix::from_fn(
        landmarks.phrases().to_vec(),
        nodes.iter().map(|n| n.id.clone()).collect(),
        |r, c| cells[r * cols + c],
    )
}

/// Longest in-order landmark/panorama matching.
///
/// `dp[r][c]` is the best count using the first `r` landmarks and first `c` panoramas, with a
/// zero border; a grounded cell extends the diagonal, otherwise the best of dropping a row or
/// a column carries over.
pub fn pano2land_score(matrix: &GroundingMatrix) -> usize {
    let (rows, cols) = (matrix.rows(), matrix.cols());
    let mut dp = vec![vec![0usize; cols + 1]; rows + 1];
    for r in 1..=rows {
        for c in 1..=cols {
            dp[r][c] = if matrix.get(r - 1, c - 1) {
                dp[r - 1][c - 1] + 1
            } else {
                dp[r - 1][c].max(dp[r][c - 1])
            };
        }
    }
    dp[rows][cols]
}

/// Alignment score divided by the number of panoramas on the path.
pub fn normalized_alignment(matrix: &GroundingMatrix) -> f64 {
    pano2land_score(matrix) as f64 / matrix.cols() as f64
}

/// A candidate path to one retrieved goal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathHypothesis {
    pub path: NodePath,
    /// 1-based retrieval rank of the goal this path leads to.
    pub goal_rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alignment: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rating: Option<u8>,
}

impl PathHypothesis {
    pub fn new(path: NodePath, goal_rank: usize) -> Self {
        PathHypothesis {
            path,
            goal_rank,
            alignment: None,
            rating: None,
        }
    }
}

/// Keeps hypotheses with at least as many panoramas as landmarks, in order.
pub fn filter_hypotheses(
    hypotheses: Vec<PathHypothesis>,
    landmarks: &LandmarkSequence,
) -> Vec<PathHypothesis> {
    hypotheses
        .into_iter()
        .filter(|h| h.path.len() >= landmarks.len())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedResult {
    pub chosen: PathHypothesis,
    /// Picks among the top-scoring hypotheses: one when the maximum is unique, otherwise
    /// [`TIE_REPEATS`] seeded draws. `chosen` is the first.
    pub repeats: Vec<PathHypothesis>,
    /// How many hypotheses share the maximum score.
    pub tie_count: usize,
    /// Every input hypothesis with its score filled in, input order.
    pub scored: Vec<PathHypothesis>,
    /// Grounding matrices aligned with `scored` (empty for holistic rating).
    pub matrices: Vec<GroundingMatrix>,
}

/// Index of the chosen hypothesis, the repeat picks and the tie size for the given keys.
pub fn select_with_ties<K, F>(keys: &[K], cmp: F, seed: u64) -> Result<(Vec<usize>, usize)>
where
    F: Fn(&K, &K) -> Ordering,
{
    let best = keys
        .iter()
        .max_by(|a, b| cmp(a, b))
        .ok_or(Error::NoCandidates)?;
    let tied: Vec<usize> = keys
        .iter()
        .enumerate()
        .filter(|(_, k)| cmp(k, best) == Ordering::Equal)
        .map(|(i, _)| i)
        .collect();
    if tied.len() == 1 {
        return Ok((tied, 1));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = (0..TIE_REPEATS)
        .map(|_| tied[rng.random_range(0..tied.len())])
        .collect();
    Ok((picks, tied.len()))
}

/// Exact comparison of `a.0 / a.1` against `b.0 / b.1`.
fn cmp_ratio(a: &(usize, usize), b: &(usize, usize)) -> Ordering {
    (a.0 * b.1).cmp(&(b.0 * a.1))
}

fn path_nodes(graph: &TopoGraph, path: &NodePath) -> Result<Vec<GraphNode>> {
    path.node_ids
        .iter()
        .map(|id| {
            graph
                .node(id)
                .cloned()
                .ok_or_else(|| Error::UnknownNode(id.clone()))
        })
        .collect()
}

fn assemble(
    mut scored: Vec<PathHypothesis>,
    matrices: Vec<GroundingMatrix>,
    picks: Vec<usize>,
    tie_count: usize,
) -> RankedResult {
    let repeats: Vec<PathHypothesis> = picks.iter().map(|&i| scored[i].clone()).collect();
    scored.shrink_to_fit();
    RankedResult {
        chosen: repeats[0].clone(),
        repeats,
        tie_count,
        scored,
        matrices,
    }
}

/// Ranks by normalized in-order landmark/panorama alignment.
pub fn rank_approach1(
    graph: &TopoGraph,
    hypotheses: &[PathHypothesis],
    landmarks: &LandmarkSequence,
    grounder: &dyn Grounder,
    rng_seed: u64,
) -> Result<RankedResult> {
    if hypotheses.is_empty() {
        return Err(Error::NoCandidates);
    }
    let mut scored = Vec::with_capacity(hypotheses.len());
    let mut matrices = Vec::with_capacity(hypotheses.len());
    let mut keys = Vec::with_capacity(hypotheses.len());
    for h in hypotheses {
        let nodes = path_nodes(graph, &h.path)?;
        let matrix = build_grounding_matrix(&nodes, landmarks, grounder)?;
        let key = (pano2land_score(&matrix), matrix.cols());
        let mut h = h.clone();
        h.alignment = Some(key.0 as f64 / key.1 as f64);
        h.rating = None;
        keys.push(key);
        scored.push(h);
        matrices.push(matrix);
    }
    let (picks, tie_count) = select_with_ties(&keys, cmp_ratio, rng_seed)?;
    Ok(assemble(scored, matrices, picks, tie_count))
}

/// Ranks by a holistic 1-5 rating of each whole path.
pub fn rank_approach2(
    graph: &TopoGraph,
    hypotheses: &[PathHypothesis],
    instruction: &str,
    landmarks: &LandmarkSequence,
    rater: &dyn PathRater,
    rng_seed: u64,
) -> Result<RankedResult> {
    if hypotheses.is_empty() {
        return Err(Error::NoCandidates);
    }
    let ratings: Vec<u8> = hypotheses
        .par_iter()
        .map(|h| {
            let nodes = path_nodes(graph, &h.path)?;
            Ok(rater.rate_path(&nodes, instruction, landmarks)?.get())
        })
        .collect::<Result<_>>()?;
    let scored: Vec<PathHypothesis> = hypotheses
        .iter()
        .zip(&ratings)
        .map(|(h, &r)| PathHypothesis {
            rating: Some(r),
            alignment: None,
            ..h.clone()
        })
        .collect();
    let (picks, tie_count) = select_with_ties(&ratings, |a, b| a.cmp(b), rng_seed)?;
    Ok(assemble(scored, Vec::new(), picks, tie_count))
}

/// Re-ranks from stored matrices without provider access.
pub fn rerank_from_matrices(
    hypotheses: &[PathHypothesis],
    matrices: &[GroundingMatrix],
    rng_seed: u64,
) -> Result<RankedResult> {
    if hypotheses.len() != matrices.len() {
        return Err(Error::InvalidInput(
            "one grounding matrix per hypothesis is required".into(),
        ));
    }
    let keys: Vec<(usize, usize)> = matrices
        .iter()
        .map(|m| (pano2land_score(m), m.cols()))
        .collect();
    let scored = hypotheses
        .iter()
        .zip(&keys)
        .map(|(h, k)| PathHypothesis {
            alignment: Some(k.0 as f64 / k.1 as f64),
            rating: None,
            ..h.clone()
        })
        .collect();
    let (picks, tie_count) = select_with_ties(&keys, cmp_ratio, rng_seed)?;
    Ok(assemble(scored, matrices.to_vec(), picks, tie_count))
}

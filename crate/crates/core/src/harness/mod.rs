//! Episodes, run configuration, the per-episode pipeline and the benchmark driver.

mod config;
pub mod dataset;
mod pipeline;
pub mod world;

use serde::{Deserialize, Serialize};

use crate::topomap::GraphNode;

pub use config::{
    Approach, ProviderMode, ProviderSettings, RunConfig, SceneSource, SyntheticSuite,
};
pub use dataset::{load_episodes, write_dataset};
pub use pipeline::{
    derive_seed, eval_retrieval, load_scenes, read_results, report_from_results, run_benchmark,
    run_episode, BenchmarkOutput, EpisodeTrace, ProviderFactory, RetrievalEval, Scene,
};
pub use world::{generate_world, SyntheticWorld, WorldParams, LANDMARK_VOCABULARY};

/// One instruction with its ground-truth trajectory through a scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Episode {
    pub episode_id: String,
    pub scene_id: String,
    pub instruction: String,
    /// Ground-truth viewpoints in travel order; the first is the start.
    pub path: Vec<GraphNode>,
}

impl Episode {
    pub fn start_node(&self) -> &str {
        self.path.first().map_or("", |n| n.id.as_str())
    }

    pub fn gt_path(&self) -> Vec<String> {
        self.path.iter().map(|n| n.id.clone()).collect()
    }
}

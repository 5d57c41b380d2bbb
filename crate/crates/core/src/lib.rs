//! Landmark-guided path selection on topological maps.
//!
//! An instruction is reduced to an ordered list of landmark phrases. The final landmark
//! is matched against every panorama of a scene graph to retrieve candidate goals, a
//! shortest path to each goal becomes a hypothesis, and hypotheses are ranked either by
//! in-order landmark grounding along the path or by a holistic rating. Path fidelity is
//! measured with normalized dynamic time warping.

pub mod alignment;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod providers;
pub mod topomap;

pub use error::{Error, Result};

//! Left-right gait symmetry from 2D pose keypoints.
//!
//! The pipeline runs keypoint files through [`ingest`] (gap repair and
//! smoothing), turns joint trajectories into speed series with [`signal`],
//! and scores them with the two metrics in [`symmetry`]: a quarter-cycle
//! shift correlation of the ankle speeds, and a cross-convolution
//! dissimilarity between the left and right ankle-to-wrist coupling systems.
//! [`synth`] produces walking records with known symmetry for testing, and
//! [`cli`] wires everything into the `gaitsym` command.

pub mod cli;
pub mod error;
pub mod ingest;
pub mod signal;
pub mod symmetry;
pub mod synth;

pub use error::{Error, Result};

//! Minimal neural substrate for the DRL schedulers: a fixed-shape dense
//! network with manual forward/backward passes, the Adam optimizer,
//! experience replay and gradient-check tooling.

pub mod adam;
pub mod checkpoint;
pub mod gradcheck;
pub mod mlp;
pub mod replay;

pub use adam::{adam_step, AdamState};
pub use checkpoint::{load_params, save_params, CheckpointHeader};
pub use gradcheck::gradient_check;
pub use mlp::{backward, backward_batch, forward, forward_batch, BatchTrace, Gradients, MlpParams};
pub use replay::ReplayMemory;

//! Desk-scale simulator and scheduler library for uplink resource-block
//! sharing between NB-IoT, LTE-M and 5G-NR devices in an interference-limited
//! multi-cell network.
//!
//! The crate provides:
//! - hexagonal multi-cell geometry with wraparound, shadowing and temporally
//!   correlated fading ([`geometry`], [`fading`], [`realization`]);
//! - per-technology MCS tables and the Shannon / envelope / discrete rate
//!   functions ([`link`]);
//! - the round-robin baseline scheduler with fixed ICI compensation and
//!   retransmission accounting ([`baseline`]);
//! - the log-transformed joint sub-carrier/MCS upper-bound problem and a
//!   multi-start augmented-Lagrangian local solver ([`benchmark`]);
//! - a small dense network with manual backprop, Adam, and experience replay
//!   ([`neural`]);
//! - DQN, policy-gradient and deterministic actor-critic schedulers in
//!   interference-allocation and power-allocation variants ([`drl`]);
//! - throughput/fairness/delay metrics and latency measurement ([`metrics`]);
//! - experiment orchestration with train/test splits ([`harness`]).

pub mod baseline;
pub mod benchmark;
pub mod drl;
pub mod error;
pub mod fading;
pub mod geometry;
pub mod harness;
pub mod link;
pub mod metrics;
pub mod neural;
pub mod realization;
pub mod units;

pub use error::{Result, SimError};
pub use geometry::{build_layout, place_devices, CellLayout, NodePlacement};
pub use link::{build_mcs_table, McsTable, McsTables, Tech};
pub use realization::{realize, ChannelOptions, Realization};

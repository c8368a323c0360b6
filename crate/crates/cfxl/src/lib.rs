//! Desk-scale simulator for user-centric cell-free XL-MIMO uplink.
//!
//! The crate models a square service area in which distributed multi-antenna
//! APs jointly serve mobile multi-antenna UEs over near-field wavenumber-
//! domain channels. On top of the channel layer it provides spectral- and
//! energy-efficiency analytics for maximum-ratio combining, user-centric AP
//! clustering with the induced UE cooperation graph, a small feed-forward
//! network kernel with explicit gradients, a two-layer multi-agent
//! actor-critic trainer for joint clustering and power control together with
//! baseline architectures, and a seeded experiment harness with a CLI.

pub mod channel;
pub mod clustering;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod marl;
pub mod nn;
pub mod performance;
pub mod scenario;

pub use error::{Error, Result};

//! In-process simulation of a peer network that stores segmented time
//! series, indexes them in a Chord DHT by canonical name, caches derived
//! results and plans queries against that cache.

pub mod annotate;
pub mod cache;
pub mod config;
pub mod dht;
pub mod error;
pub mod exec;
pub mod network;
pub mod probe;
pub mod ring;

pub use annotate::{annotate, AnnotatedTree, SegmentPlan};
pub use config::SimConfig;
pub use error::{Result, SimError};
pub use exec::{execute, Execution};
pub use network::Network;
pub use probe::{ExecStats, TimingProbe};
pub use ring::PeerId;

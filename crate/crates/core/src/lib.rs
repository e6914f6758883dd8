//! Topological subsystem color codes on the square-octagon lattice and their
//! gauge-fixing erasure decoders.

pub mod code;
pub mod correctability;
pub mod decoder;
pub mod erasure;
pub mod error;
pub mod gf2;
pub mod io;
pub mod lattice;
pub mod montecarlo;
pub mod pauli;
pub mod schedule;
pub mod threshold;
pub mod verify;

pub use code::{CheckType, TsccCode};
pub use correctability::{Correctability, CorrectabilityVerdict};
pub use decoder::{decode, DecodeOutcome};
pub use erasure::{sample_erasure, ErasurePattern, RngStream};
pub use error::{Error, Result};
pub use lattice::Color;
pub use pauli::{Pauli, PauliOperator};
pub use schedule::Mode;

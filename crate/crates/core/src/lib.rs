//! Stabilizer simulation of distance-3 error correction on spin-qubit
//! hardware with slow readout.
//!
//! Layers, bottom up:
//!
//! * [`tableau`]: Clifford tableau over the native gate set `{RY(±π/2), CZ}`.
//! * [`codes`]: surface-17 and Bacon-Shor-17 definitions and lookup decoders.
//! * [`noise`]: hardware parameters and per-location fault probabilities.
//! * [`circuits`]: syndrome rounds, preparation protocols and fault injection.
//! * [`sampler`]: subset sampling of the fault distribution with bounds.
//! * [`experiments`]: parameter sweeps and their CSV output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuits;
pub mod codes;
pub mod experiments;
pub mod gf2;
pub mod noise;
pub mod num;
pub mod sampler;
pub mod tableau;

pub use num::Real;

pub type HardwareParamsF64 = noise::HardwareParams<f64>;
pub type NoiseParamsF64 = noise::NoiseParams<f64>;
pub type QubitParamsF64 = noise::QubitParams<f64>;
pub type ReadoutModelF64 = noise::ReadoutModel<f64>;
pub type ProtocolF64 = circuits::Protocol<f64>;
pub type BoundPairF64 = sampler::BoundPair<f64>;
pub type SubsetRunF64 = sampler::SubsetRun<f64>;
pub type ExperimentResultF64 = experiments::ExperimentResult<f64>;

pub type HardwareParamsF32 = noise::HardwareParams<f32>;
pub type NoiseParamsF32 = noise::NoiseParams<f32>;
pub type BoundPairF32 = sampler::BoundPair<f32>;

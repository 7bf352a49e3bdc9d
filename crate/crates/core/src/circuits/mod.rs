//! Timed circuits for syndrome extraction and logical-state preparation.
//!
//! Qubits 0–8 are data, 9–12 are the ancillas of the X checks `S_X(1..4)`
//! and 13–16 those of the Z checks `S_Z(1..4)`. One round is
//!
//! ```text
//! prep(anc) · RY+(anc) · 4×CZ[Z checks] · RY−(data) · 4×CZ[X checks] · RY+(data) · RY−(anc) · MZ(anc)
//! ```
//!
//! Every layer and every operation carries a [`Part`], which lets the
//! protocols run Z-only or X-only rounds on the same circuit.

mod protocol;

use std::fmt::{self, Write as _};

use crate::noise::{FaultCategory, NoiseParams, QubitRole};
use crate::num::Real;
use crate::tableau::Pauli;

pub use protocol::{
    ideal_ec, perfect_logical_state, FaultSet, LogicalBasis, Protocol, ProtocolKind, ProtocolOutcome, RoundRecord,
};

pub const N_DATA: usize = 9;
pub const N_QUBITS: usize = 17;
pub const X_ANCILLAS: [usize; 4] = [9, 10, 11, 12];
pub const Z_ANCILLAS: [usize; 4] = [13, 14, 15, 16];

/// Z-check CZ schedule: `(ancilla, data)` per timestep.
const Z_SCHEDULE: [[(usize, usize); 3]; 4] = [
    [(14, 1), (15, 3), (16, 5)],
    [(14, 4), (15, 6), (16, 8)],
    [(14, 2), (15, 4), (13, 0)],
    [(14, 5), (15, 7), (13, 3)],
];

/// X-check CZ schedule, applied in the rotated data frame.
const X_SCHEDULE: [[(usize, usize); 3]; 4] =
    [[(10, 0), (11, 4), (12, 6)], [(10, 1), (11, 5), (12, 7)], [(10, 3), (11, 7), (9, 1)], [(10, 4), (11, 8), (9, 2)]];

/// Which check type an operation serves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    Common,
    Z,
    X,
}

/// The check types executed by a (possibly partial) round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Parts {
    pub z: bool,
    pub x: bool,
}

impl Parts {
    pub const ALL: Parts = Parts { z: true, x: true };
    pub const Z_ONLY: Parts = Parts { z: true, x: false };
    pub const X_ONLY: Parts = Parts { z: false, x: true };

    pub fn includes(self, part: Part) -> bool {
        match part {
            Part::Common => true,
            Part::Z => self.z,
            Part::X => self.x,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Prep(usize),
    RyPlus(usize),
    RyMinus(usize),
    Cz(usize, usize),
    Measure(usize),
}

impl Op {
    pub fn qubits(&self) -> ([usize; 2], usize) {
        match *self {
            Op::Prep(q) | Op::RyPlus(q) | Op::RyMinus(q) | Op::Measure(q) => ([q, q], 1),
            Op::Cz(a, b) => ([a, b], 2),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Op::Prep(_) => "PREP",
            Op::RyPlus(_) => "RY+",
            Op::RyMinus(_) => "RY-",
            Op::Cz(..) => "CZ",
            Op::Measure(_) => "MZ",
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Op::Cz(a, b) => write!(f, "CZ({a},{b})"),
            Op::Prep(q) | Op::RyPlus(q) | Op::RyMinus(q) | Op::Measure(q) => write!(f, "{}({q})", self.name()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LayerKind {
    Prep,
    Rotation,
    Cz,
    Measure,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Layer<T> {
    pub kind: LayerKind,
    pub block: Part,
    pub duration: T,
    pub ops: Vec<(Op, Part)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit<T> {
    pub roles: Vec<QubitRole>,
    pub layers: Vec<Layer<T>>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("layer {layer}: qubit {qubit} used twice")]
    QubitReused { layer: usize, qubit: usize },
    #[error("layer {layer}: qubit {qubit} out of range")]
    OutOfRange { layer: usize, qubit: usize },
    #[error("layer {layer}: {kind:?} layer contains {op}")]
    WrongKind { layer: usize, kind: LayerKind, op: String },
}

impl<T: Real> Circuit<T> {
    pub fn n_qubits(&self) -> usize {
        self.roles.len()
    }

    pub fn duration(&self) -> T {
        self.layers.iter().map(|l| l.duration).fold(T::zero(), |a, b| a + b)
    }

    /// Duration of the layers executed under `parts`.
    pub fn duration_of(&self, parts: Parts) -> T {
        self.layers.iter().filter(|l| parts.includes(l.block)).map(|l| l.duration).fold(T::zero(), |a, b| a + b)
    }

    pub fn cz_count(&self) -> usize {
        self.layers.iter().flat_map(|l| &l.ops).filter(|(op, _)| matches!(op, Op::Cz(..))).count()
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        for (li, layer) in self.layers.iter().enumerate() {
            let mut used = vec![false; self.n_qubits()];
            for (op, _) in &layer.ops {
                let ok = matches!(
                    (layer.kind, op),
                    (LayerKind::Prep, Op::Prep(_))
                        | (LayerKind::Rotation, Op::RyPlus(_) | Op::RyMinus(_))
                        | (LayerKind::Cz, Op::Cz(..))
                        | (LayerKind::Measure, Op::Measure(_))
                );
                if !ok {
                    return Err(CircuitError::WrongKind { layer: li, kind: layer.kind, op: op.to_string() });
                }
                let (qs, arity) = op.qubits();
                for &q in &qs[..arity] {
                    if q >= used.len() {
                        return Err(CircuitError::OutOfRange { layer: li, qubit: q });
                    }
                    if std::mem::replace(&mut used[q], true) {
                        return Err(CircuitError::QubitReused { layer: li, qubit: q });
                    }
                }
            }
        }
        Ok(())
    }

    /// One layer per line: `<duration_us> <gate>(<qubits>) …`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for layer in &self.layers {
            write!(out, "{}", layer.duration).unwrap();
            for (op, _) in &layer.ops {
                write!(out, " {op}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

fn role_of(q: usize) -> QubitRole {
    if q < N_DATA {
        QubitRole::Data
    } else {
        QubitRole::Ancilla
    }
}

fn ancilla_part(q: usize) -> Part {
    if X_ANCILLAS.contains(&q) {
        Part::X
    } else {
        Part::Z
    }
}

/// One full syndrome round on 17 qubits; identical for both codes.
pub fn build_round<T: Real>(params: &NoiseParams<T>) -> Circuit<T> {
    let anc: Vec<usize> = X_ANCILLAS.iter().chain(&Z_ANCILLAS).copied().collect();
    let t_cz = params.t_cz();
    let zero = T::zero();
    let on_anc = |f: fn(usize) -> Op| anc.iter().map(|&q| (f(q), ancilla_part(q))).collect::<Vec<_>>();
    let on_data = |f: fn(usize) -> Op| (0..N_DATA).map(|q| (f(q), Part::X)).collect::<Vec<_>>();
    let cz_layer = |step: &[(usize, usize); 3], block: Part| Layer {
        kind: LayerKind::Cz,
        block,
        duration: t_cz,
        ops: step.iter().map(|&(a, d)| (Op::Cz(a, d), block)).collect(),
    };

    let mut layers = vec![
        Layer { kind: LayerKind::Prep, block: Part::Common, duration: params.t_prep(), ops: on_anc(Op::Prep) },
        Layer { kind: LayerKind::Rotation, block: Part::Common, duration: zero, ops: on_anc(Op::RyPlus) },
    ];
    layers.extend(Z_SCHEDULE.iter().map(|s| cz_layer(s, Part::Z)));
    layers.push(Layer { kind: LayerKind::Rotation, block: Part::X, duration: zero, ops: on_data(Op::RyMinus) });
    layers.extend(X_SCHEDULE.iter().map(|s| cz_layer(s, Part::X)));
    layers.push(Layer { kind: LayerKind::Rotation, block: Part::X, duration: zero, ops: on_data(Op::RyPlus) });
    layers.push(Layer { kind: LayerKind::Rotation, block: Part::Common, duration: zero, ops: on_anc(Op::RyMinus) });
    layers.push(Layer {
        kind: LayerKind::Measure,
        block: Part::Common,
        duration: params.t_readout(),
        ops: on_anc(Op::Measure),
    });
    Circuit { roles: (0..N_QUBITS).map(role_of).collect(), layers }
}

/// Noisy preparation of the nine data qubits in `|0⟩` or `|+⟩`.
pub fn build_data_prep<T: Real>(params: &NoiseParams<T>, basis: LogicalBasis) -> Circuit<T> {
    let mut layers = vec![Layer {
        kind: LayerKind::Prep,
        block: Part::Common,
        duration: params.data.t_prep,
        ops: (0..N_DATA).map(|q| (Op::Prep(q), Part::Common)).collect(),
    }];
    if basis == LogicalBasis::Plus {
        layers.push(Layer {
            kind: LayerKind::Rotation,
            block: Part::Common,
            duration: T::zero(),
            ops: (0..N_DATA).map(|q| (Op::RyPlus(q), Part::Common)).collect(),
        });
    }
    Circuit { roles: (0..N_QUBITS).map(role_of).collect(), layers }
}

/// Three column GHZ states forming the Bacon-Shor `|+⟩_L` (nine qubits).
pub fn build_bs_plus_prep<T: Real>(params: &NoiseParams<T>) -> Circuit<T> {
    let common = |ops: Vec<Op>| ops.into_iter().map(|o| (o, Part::Common)).collect::<Vec<_>>();
    let layers = vec![
        Layer {
            kind: LayerKind::Prep,
            block: Part::Common,
            duration: params.data.t_prep,
            ops: common((0..N_DATA).map(Op::Prep).collect()),
        },
        Layer {
            kind: LayerKind::Rotation,
            block: Part::Common,
            duration: T::zero(),
            ops: common((0..N_DATA).map(Op::RyPlus).collect()),
        },
        Layer {
            kind: LayerKind::Cz,
            block: Part::Common,
            duration: params.data.t_cz,
            ops: common((0..3).map(|c| Op::Cz(c, c + 3)).collect()),
        },
        Layer {
            kind: LayerKind::Cz,
            block: Part::Common,
            duration: params.data.t_cz,
            ops: common((0..3).map(|c| Op::Cz(c + 3, c + 6)).collect()),
        },
        Layer {
            kind: LayerKind::Rotation,
            block: Part::Common,
            duration: T::zero(),
            ops: common([0, 1, 2, 6, 7, 8].into_iter().map(Op::RyMinus).collect()),
        },
    ];
    Circuit { roles: vec![QubitRole::Data; N_DATA], layers }
}

/// When a fault acts relative to its layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Timing {
    Before,
    After,
}

/// A place where a single Pauli fault can occur.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FaultLocation {
    pub category: FaultCategory,
    pub segment: usize,
    pub layer: usize,
    pub qubits: [usize; 2],
    pub arity: usize,
    /// Applied to each qubit in `qubits[..arity]`.
    pub pauli: Pauli,
    pub timing: Timing,
    pub part: Part,
}

impl FaultLocation {
    pub fn targets(&self) -> &[usize] {
        &self.qubits[..self.arity]
    }
}

/// All fault locations of a circuit placed as `segment`.
pub fn enumerate_fault_locations<T: Real>(circuit: &Circuit<T>, segment: usize) -> Vec<FaultLocation> {
    let mut out = Vec::new();
    let loc = |category, layer, qubits: [usize; 2], arity, pauli, timing, part| FaultLocation {
        category,
        segment,
        layer,
        qubits,
        arity,
        pauli,
        timing,
        part,
    };
    for (li, layer) in circuit.layers.iter().enumerate() {
        let mut busy = vec![false; circuit.n_qubits()];
        for &(op, part) in &layer.ops {
            let (qs, arity) = op.qubits();
            for &q in &qs[..arity] {
                busy[q] = true;
            }
            let (category, pauli, timing) = match op {
                Op::Prep(_) => (FaultCategory::Prep, Pauli::X, Timing::After),
                Op::Measure(_) => (FaultCategory::Measure, Pauli::X, Timing::Before),
                Op::RyPlus(_) | Op::RyMinus(_) => (FaultCategory::Gate1q, Pauli::Y, Timing::After),
                Op::Cz(..) => (FaultCategory::Cz, Pauli::Z, Timing::After),
            };
            out.push(loc(category, li, qs, arity, pauli, timing, part));
        }
        for (q, &role) in circuit.roles.iter().enumerate() {
            if busy[q] {
                continue;
            }
            let category = match (layer.kind, role) {
                (LayerKind::Prep, QubitRole::Data) if layer.ops.iter().any(|(o, _)| o.qubits().0[0] >= N_DATA) => {
                    FaultCategory::IdlePrep
                }
                (LayerKind::Measure, QubitRole::Data) => FaultCategory::IdleMeasure,
                (LayerKind::Cz, QubitRole::Data) => FaultCategory::IdleCzData,
                (LayerKind::Cz, QubitRole::Ancilla) => FaultCategory::IdleCzAncilla,
                _ => continue,
            };
            out.push(loc(category, li, [q, q], 1, Pauli::Z, Timing::After, layer.block));
        }
    }
    out
}

/// Number of locations per category.
pub fn location_counts(locations: &[FaultLocation]) -> [usize; 8] {
    let mut n = [0; 8];
    for l in locations {
        n[l.category.index()] += 1;
    }
    n
}

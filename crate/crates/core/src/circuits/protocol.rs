//! Adaptive protocols over the round circuit, and the ideal-EC oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    build_bs_plus_prep, build_data_prep, build_round, enumerate_fault_locations, location_counts, Circuit,
    FaultLocation, Op, Parts, Timing, N_DATA, N_QUBITS, X_ANCILLAS, Z_ANCILLAS,
};
use crate::codes::{surface17_spec, CodeKind, CodeSpec, Syndrome};
use crate::noise::{NoiseParams, N_CATEGORIES};
use crate::num::Real;
use crate::tableau::{Eigenvalue, Pauli, PauliString, StabilizerTableau};

/// Logical state a preparation targets; failure is judged on the matching
/// logical operator (`X_L` for `Plus`, `Z_L` for `Zero`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LogicalBasis {
    Plus,
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProtocolKind {
    /// One adaptive error-correction step on a perfect `|+⟩_L`.
    QecStep(CodeKind),
    /// Projective surface-17 preparation.
    SurfacePrep(LogicalBasis),
    /// Bacon-Shor `|+⟩_L` from three GHZ states.
    BsPrep,
}

impl ProtocolKind {
    pub fn code(self) -> CodeKind {
        match self {
            ProtocolKind::QecStep(c) => c,
            ProtocolKind::SurfacePrep(_) => CodeKind::Surface17,
            ProtocolKind::BsPrep => CodeKind::BaconShor17,
        }
    }

    pub fn basis(self) -> LogicalBasis {
        match self {
            ProtocolKind::SurfacePrep(b) => b,
            _ => LogicalBasis::Plus,
        }
    }
}

/// Outcomes of one syndrome round; a check type that was not executed is
/// `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    pub x: Option<Vec<i8>>,
    pub z: Option<Vec<i8>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolOutcome {
    pub rounds: usize,
    pub history: Vec<RoundRecord>,
    pub correction: PauliString,
    pub logical_failure: bool,
}

impl ProtocolOutcome {
    pub fn z_rounds(&self) -> usize {
        self.history.iter().filter(|r| r.z.is_some()).count()
    }

    pub fn x_rounds(&self) -> usize {
        self.history.iter().filter(|r| r.x.is_some()).count()
    }
}

/// A set of fault locations (indices into [`Protocol::locations`]).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FaultSet {
    pub(crate) indices: Vec<usize>,
}

impl FaultSet {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Noise-free syndrome extraction and logical readout on a data register.
#[derive(Clone, Debug)]
struct EcOracle {
    code: CodeSpec,
    x_stabs: Vec<PauliString>,
    z_stabs: Vec<PauliString>,
    logical: PauliString,
    logical_bare: PauliString,
}

impl EcOracle {
    fn new(code: CodeSpec, width: usize, basis: LogicalBasis) -> Self {
        let resize = |v: &[PauliString]| v.iter().map(|p| p.resized(width)).collect::<Vec<_>>();
        let logical_bare = match basis {
            LogicalBasis::Plus => code.logical_x.clone(),
            LogicalBasis::Zero => code.logical_z.clone(),
        };
        Self {
            x_stabs: resize(&code.x_stabilizers),
            z_stabs: resize(&code.z_stabilizers),
            logical: logical_bare.resized(width),
            logical_bare,
            code,
        }
    }

    fn eig(state: &mut StabilizerTableau, p: &PauliString) -> i8 {
        match state.eigenvalue_of(p).expect("oracle operators match state width") {
            Eigenvalue::Plus => 1,
            Eigenvalue::Minus => -1,
            Eigenvalue::Indeterminate => panic!("state is not a Pauli image of a code state"),
        }
    }

    /// Returns `true` on logical failure; applies the correction.
    fn run(&self, state: &mut StabilizerTableau) -> bool {
        let x: Vec<i8> = self.x_stabs.iter().map(|p| Self::eig(state, p)).collect();
        let z: Vec<i8> = self.z_stabs.iter().map(|p| Self::eig(state, p)).collect();
        let correction = self.code.decode(&Syndrome { x_bits: x, z_bits: z }).expect("oracle syndrome lengths");
        apply_data_pauli(state, &correction);
        let mut value = Self::eig(state, &self.logical);
        if self.logical.is_negative() {
            value = -value;
        }
        debug_assert!(!self.logical_bare.is_negative());
        value != 1
    }
}

/// Noise-free error correction of `state` against `code`, then a check of
/// the logical operator for `basis`. Returns `true` on logical failure.
pub fn ideal_ec(code: &CodeSpec, state: &mut StabilizerTableau, basis: LogicalBasis) -> bool {
    EcOracle::new(code.clone(), state.num_qubits(), basis).run(state)
}

fn apply_data_pauli(state: &mut StabilizerTableau, p: &PauliString) {
    for q in p.support() {
        match p.get(q) {
            Pauli::X => state.pauli_x(q),
            Pauli::Y => state.pauli_y(q),
            Pauli::Z => state.pauli_z(q),
            Pauli::I => {}
        }
    }
}

/// Error-free logical state on the first nine qubits of an `n`-qubit
/// register, obtained by projecting `|0…0⟩` onto the code and fixing signs.
pub fn perfect_logical_state(code: &CodeSpec, basis: LogicalBasis, n: usize) -> StabilizerTableau {
    let mut state = StabilizerTableau::new(n).expect("n ≥ 1");
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let oracle = EcOracle::new(code.clone(), n, basis);
    for p in oracle.x_stabs.iter().chain(&oracle.z_stabs).chain([&oracle.logical]) {
        state.measure_pauli(p, &mut rng).expect("width matches");
    }
    if oracle.run(&mut state) {
        let flip = match basis {
            LogicalBasis::Plus => &code.logical_z,
            LogicalBasis::Zero => &code.logical_x,
        };
        apply_data_pauli(&mut state, flip);
    }
    state
}

type Outcomes = fn(&RoundRecord) -> &Option<Vec<i8>>;

/// A protocol: circuit segments over the maximal unrolling, its fault
/// locations, and the branching logic.
#[derive(Clone, Debug)]
pub struct Protocol<T> {
    pub kind: ProtocolKind,
    pub code: CodeSpec,
    pub segments: Vec<Circuit<T>>,
    pub locations: Vec<FaultLocation>,
    by_category: Vec<Vec<usize>>,
    initial: StabilizerTableau,
    oracle: EcOracle,
}

impl<T: Real> Protocol<T> {
    pub fn new(kind: ProtocolKind, params: &NoiseParams<T>) -> Self {
        let code = kind.code().spec();
        let surface = surface17_spec();
        let (segments, initial) = match kind {
            ProtocolKind::QecStep(_) => {
                let round = build_round(params);
                (vec![round.clone(), round], perfect_logical_state(&surface, LogicalBasis::Plus, N_QUBITS))
            }
            ProtocolKind::SurfacePrep(basis) => {
                let round = build_round(params);
                (
                    vec![build_data_prep(params, basis), round.clone(), round.clone(), round],
                    StabilizerTableau::new(N_QUBITS).unwrap(),
                )
            }
            ProtocolKind::BsPrep => (vec![build_bs_plus_prep(params)], StabilizerTableau::new(N_DATA).unwrap()),
        };
        let locations: Vec<FaultLocation> =
            segments.iter().enumerate().flat_map(|(s, c)| enumerate_fault_locations(c, s)).collect();
        let mut by_category = vec![Vec::new(); N_CATEGORIES];
        for (i, l) in locations.iter().enumerate() {
            by_category[l.category.index()].push(i);
        }
        let oracle = EcOracle::new(code.clone(), initial.num_qubits(), kind.basis());
        Self { kind, code, segments, locations, by_category, initial, oracle }
    }

    pub fn n_qubits(&self) -> usize {
        self.initial.num_qubits()
    }

    pub fn initial_state(&self) -> &StabilizerTableau {
        &self.initial
    }

    /// Location counts `n_1..n_8`.
    pub fn counts(&self) -> [usize; N_CATEGORIES] {
        location_counts(&self.locations)
    }

    /// Location indices of one category.
    pub fn category_locations(&self, category: usize) -> &[usize] {
        &self.by_category[category]
    }

    /// Longest possible duration (every segment fully executed).
    pub fn max_duration(&self) -> T {
        self.segments.iter().map(|c| c.duration()).fold(T::zero(), |a, b| a + b)
    }

    /// Runs the protocol with the given faults injected.
    pub fn run<R: Rng + ?Sized>(&self, faults: &FaultSet, rng: &mut R) -> ProtocolOutcome {
        let mut state = self.initial.clone();
        let mut exec = Executor { protocol: self, faults: &faults.indices, state: &mut state };
        let mut history = Vec::new();
        let correction = match self.kind {
            ProtocolKind::QecStep(_) => {
                let r1 = exec.round(0, Parts::ALL, rng);
                let trivial = r1.x.as_ref().unwrap().iter().chain(r1.z.as_ref().unwrap()).all(|&b| b == 1);
                history.push(r1);
                if !trivial {
                    history.push(exec.round(1, Parts::ALL, rng));
                }
                let last = history.last().unwrap();
                let surface = Syndrome { x_bits: last.x.clone().unwrap(), z_bits: last.z.clone().unwrap() };
                let syndrome = self.code.syndrome_from_surface(&surface).expect("complete surface syndrome");
                self.code.decode(&syndrome).expect("syndrome lengths")
            }
            ProtocolKind::SurfacePrep(basis) => {
                exec.segment(0, Parts::ALL, rng);
                // `proj` projects the product state; `det` detects errors.
                let (proj_only, proj_of, det_of): (Parts, Outcomes, Outcomes) = match basis {
                    LogicalBasis::Plus => (Parts::Z_ONLY, |r| &r.z, |r| &r.x),
                    LogicalBasis::Zero => (Parts::X_ONLY, |r| &r.x, |r| &r.z),
                };
                let r1 = exec.round(1, Parts::ALL, rng);
                let flagged = det_of(&r1).as_ref().unwrap().contains(&-1);
                let r2 = exec.round(2, if flagged { Parts::ALL } else { proj_only }, rng);
                let coincide = proj_of(&r1) == proj_of(&r2);
                history.push(r1);
                history.push(r2);
                if !coincide {
                    history.push(exec.round(3, proj_only, rng));
                }
                let last_x = history.iter().rev().find_map(|r| r.x.clone()).unwrap();
                let last_z = history.iter().rev().find_map(|r| r.z.clone()).unwrap();
                self.code.decode(&Syndrome { x_bits: last_x, z_bits: last_z }).expect("syndrome lengths")
            }
            ProtocolKind::BsPrep => {
                exec.segment(0, Parts::ALL, rng);
                PauliString::identity(N_DATA)
            }
        };
        apply_data_pauli(&mut state, &correction);
        let logical_failure = self.oracle.run(&mut state);
        ProtocolOutcome { rounds: history.len(), history, correction, logical_failure }
    }

    /// Runs without faults.
    pub fn run_noiseless<R: Rng + ?Sized>(&self, rng: &mut R) -> ProtocolOutcome {
        self.run(&FaultSet::none(), rng)
    }
}

struct Executor<'a, T> {
    protocol: &'a Protocol<T>,
    faults: &'a [usize],
    state: &'a mut StabilizerTableau,
}

impl<T: Real> Executor<'_, T> {
    fn inject(&mut self, segment: usize, layer: usize, timing: Timing, parts: Parts) {
        for &i in self.faults {
            let loc = &self.protocol.locations[i];
            if loc.segment == segment && loc.layer == layer && loc.timing == timing && parts.includes(loc.part) {
                for &q in loc.targets() {
                    match loc.pauli {
                        Pauli::X => self.state.pauli_x(q),
                        Pauli::Y => self.state.pauli_y(q),
                        Pauli::Z => self.state.pauli_z(q),
                        Pauli::I => {}
                    }
                }
            }
        }
    }

    /// Executes one segment; returns the outcome of each measured qubit.
    fn segment<R: Rng + ?Sized>(&mut self, segment: usize, parts: Parts, rng: &mut R) -> Vec<i8> {
        let circuit = &self.protocol.segments[segment];
        let mut outcomes = vec![0i8; circuit.n_qubits()];
        for (li, layer) in circuit.layers.iter().enumerate() {
            if !parts.includes(layer.block) {
                continue;
            }
            self.inject(segment, li, Timing::Before, parts);
            for &(op, part) in &layer.ops {
                if !parts.includes(part) {
                    continue;
                }
                match op {
                    Op::Prep(q) => self.state.prepare_z(q, rng).expect("qubit in range"),
                    Op::RyPlus(q) => self.state.ry_plus(q),
                    Op::RyMinus(q) => self.state.ry_minus(q),
                    Op::Cz(a, b) => self.state.cz(a, b),
                    Op::Measure(q) => {
                        let m = self.state.measure_z(q, rng).expect("qubit in range");
                        outcomes[q] = m.outcome.value();
                    }
                }
            }
            self.inject(segment, li, Timing::After, parts);
        }
        outcomes
    }

    fn round<R: Rng + ?Sized>(&mut self, segment: usize, parts: Parts, rng: &mut R) -> RoundRecord {
        let out = self.segment(segment, parts, rng);
        let pick = |anc: &[usize; 4]| anc.iter().map(|&q| out[q]).collect::<Vec<i8>>();
        RoundRecord { x: parts.x.then(|| pick(&X_ANCILLAS)), z: parts.z.then(|| pick(&Z_ANCILLAS)) }
    }
}

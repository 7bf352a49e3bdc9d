//! Destabilizer/stabilizer tableau simulation of Clifford circuits.
//!
//! The state of `n` qubits is held as `2n` Pauli rows: rows `0..n` are
//! destabilizers, rows `n..2n` stabilizers, and one extra scratch row is
//! used for deterministic measurements. Phases are kept as exponents of `i`
//! modulo 4; only `0` and `2` ever survive on stored rows.
//!
//! The gate set is the one the spin-qubit circuits need: `RY(±π/2)`, `CZ`
//! and the Paulis, plus reset and measurement in the Z basis. `RY(±π/2)` is
//! applied as a native column update instead of a Hadamard/phase
//! decomposition.

mod pauli;

use rand::Rng;
use thiserror::Error;

use pauli::{product_phase, words_for};
pub use pauli::{Pauli, PauliString};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableauError {
    #[error("a tableau needs at least one qubit")]
    ZeroQubits,
    #[error("qubit {qubit} out of range for a {n}-qubit register")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("gate {gate:?} applied to repeated target {qubit}")]
    RepeatedTarget { gate: GateKind, qubit: usize },
    #[error("gate {gate:?} takes {expected} target(s), got {got}")]
    Arity { gate: GateKind, expected: usize, got: usize },
    #[error("operator width {got} does not match register width {expected}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("product of anticommuting Paulis is not Hermitian")]
    NonHermitianProduct,
    #[error("cannot parse Pauli operator {0:?}")]
    Parse(String),
}

/// Unitary gates understood by the tableau.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    /// `RY(+π/2)`: X → −Z, Z → X.
    RyPlus,
    /// `RY(−π/2)`: X → Z, Z → −X.
    RyMinus,
    Cz,
    X,
    Y,
    Z,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cz => 2,
            _ => 1,
        }
    }
}

/// ±1 measurement outcome or eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    fn from_phase(phase: u8) -> Self {
        debug_assert!(phase.is_multiple_of(2), "non-Hermitian phase {phase}");
        if phase.is_multiple_of(4) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    fn phase(self) -> u8 {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 2,
        }
    }
}

/// Eigenvalue of a Pauli operator on a stabilizer state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eigenvalue {
    Plus,
    Minus,
    /// The operator anticommutes with some stabilizer: a measurement would be
    /// a fair coin.
    Indeterminate,
}

impl From<Sign> for Eigenvalue {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Plus => Eigenvalue::Plus,
            Sign::Minus => Eigenvalue::Minus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measurement {
    pub outcome: Sign,
    /// True when the outcome was drawn from the coin source.
    pub random: bool,
}

/// Pure stabilizer state of `n` qubits.
#[derive(Clone, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    words: usize,
    // (2n + 1) rows of `words` u64 each; last row is scratch.
    x: Vec<u64>,
    z: Vec<u64>,
    phase: Vec<u8>,
}

impl StabilizerTableau {
    /// The state `|0…0⟩`.
    pub fn new(n: usize) -> Result<Self, TableauError> {
        if n == 0 {
            return Err(TableauError::ZeroQubits);
        }
        let words = words_for(n);
        let rows = 2 * n + 1;
        let mut t = Self { n, words, x: vec![0; rows * words], z: vec![0; rows * words], phase: vec![0; rows] };
        for q in 0..n {
            t.x[q * words + q / 64] |= 1 << (q % 64);
            t.z[(n + q) * words + q / 64] |= 1 << (q % 64);
        }
        Ok(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Stabilizer generator `i` (0-based) as a signed Pauli.
    pub fn stabilizer(&self, i: usize) -> PauliString {
        self.row(self.n + i)
    }

    pub fn destabilizer(&self, i: usize) -> PauliString {
        self.row(i)
    }

    pub fn stabilizers(&self) -> Vec<PauliString> {
        (0..self.n).map(|i| self.stabilizer(i)).collect()
    }

    fn row(&self, r: usize) -> PauliString {
        let mut p = PauliString::identity(self.n);
        p.x.copy_from_slice(&self.x[r * self.words..(r + 1) * self.words]);
        p.z.copy_from_slice(&self.z[r * self.words..(r + 1) * self.words]);
        if Sign::from_phase(self.phase[r]).is_minus() {
            p = p.negated();
        }
        p
    }

    fn check_qubit(&self, q: usize) -> Result<(), TableauError> {
        if q >= self.n {
            Err(TableauError::QubitOutOfRange { qubit: q, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Applies `gate` to `qubits`, validating arity and range.
    pub fn apply_gate(&mut self, gate: GateKind, qubits: &[usize]) -> Result<(), TableauError> {
        if qubits.len() != gate.arity() {
            return Err(TableauError::Arity { gate, expected: gate.arity(), got: qubits.len() });
        }
        for &q in qubits {
            self.check_qubit(q)?;
        }
        match gate {
            GateKind::RyPlus => self.ry_plus(qubits[0]),
            GateKind::RyMinus => self.ry_minus(qubits[0]),
            GateKind::Cz => {
                if qubits[0] == qubits[1] {
                    return Err(TableauError::RepeatedTarget { gate, qubit: qubits[0] });
                }
                self.cz(qubits[0], qubits[1]);
            }
            GateKind::X => self.pauli_x(qubits[0]),
            GateKind::Y => self.pauli_y(qubits[0]),
            GateKind::Z => self.pauli_z(qubits[0]),
        }
        Ok(())
    }

    #[inline]
    fn loc(&self, q: usize) -> (usize, u64) {
        (q / 64, 1u64 << (q % 64))
    }

    pub fn ry_plus(&mut self, q: usize) {
        let (w, m) = self.loc(q);
        for r in 0..2 * self.n {
            let i = r * self.words + w;
            let (xb, zb) = (self.x[i] & m, self.z[i] & m);
            if xb != 0 && zb == 0 {
                self.phase[r] ^= 2;
            }
            self.x[i] = (self.x[i] & !m) | zb;
            self.z[i] = (self.z[i] & !m) | xb;
        }
    }

    pub fn ry_minus(&mut self, q: usize) {
        let (w, m) = self.loc(q);
        for r in 0..2 * self.n {
            let i = r * self.words + w;
            let (xb, zb) = (self.x[i] & m, self.z[i] & m);
            if zb != 0 && xb == 0 {
                self.phase[r] ^= 2;
            }
            self.x[i] = (self.x[i] & !m) | zb;
            self.z[i] = (self.z[i] & !m) | xb;
        }
    }

    pub fn cz(&mut self, a: usize, b: usize) {
        debug_assert_ne!(a, b);
        let (wa, ma) = self.loc(a);
        let (wb, mb) = self.loc(b);
        for r in 0..2 * self.n {
            let base = r * self.words;
            let xa = self.x[base + wa] & ma != 0;
            let xb = self.x[base + wb] & mb != 0;
            let za = self.z[base + wa] & ma != 0;
            let zb = self.z[base + wb] & mb != 0;
            if xa && xb && (za ^ zb) {
                self.phase[r] ^= 2;
            }
            if xb {
                self.z[base + wa] ^= ma;
            }
            if xa {
                self.z[base + wb] ^= mb;
            }
        }
    }

    pub fn pauli_x(&mut self, q: usize) {
        let (w, m) = self.loc(q);
        for r in 0..2 * self.n {
            if self.z[r * self.words + w] & m != 0 {
                self.phase[r] ^= 2;
            }
        }
    }

    pub fn pauli_z(&mut self, q: usize) {
        let (w, m) = self.loc(q);
        for r in 0..2 * self.n {
            if self.x[r * self.words + w] & m != 0 {
                self.phase[r] ^= 2;
            }
        }
    }

    pub fn pauli_y(&mut self, q: usize) {
        let (w, m) = self.loc(q);
        for r in 0..2 * self.n {
            let i = r * self.words + w;
            if (self.x[i] ^ self.z[i]) & m != 0 {
                self.phase[r] ^= 2;
            }
        }
    }

    /// Conjugates the state by a Pauli operator (its sign is a global phase).
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<(), TableauError> {
        if p.num_qubits() != self.n {
            return Err(TableauError::WidthMismatch { expected: self.n, got: p.num_qubits() });
        }
        for r in 0..2 * self.n {
            if self.anticommutes_with_row(r, p) {
                self.phase[r] ^= 2;
            }
        }
        Ok(())
    }

    #[inline]
    fn anticommutes_with_row(&self, r: usize, p: &PauliString) -> bool {
        let base = r * self.words;
        let mut parity = 0u32;
        for w in 0..self.words {
            parity ^= ((self.x[base + w] & p.z[w]) ^ (self.z[base + w] & p.x[w])).count_ones();
        }
        parity & 1 == 1
    }

    /// Row `h` ← row `i` · row `h`.
    #[inline]
    fn rowsum(&mut self, h: usize, i: usize) {
        let (bh, bi) = (h * self.words, i * self.words);
        let mut phase = u32::from(self.phase[h]) + u32::from(self.phase[i]);
        for w in 0..self.words {
            let (x1, z1) = (self.x[bi + w], self.z[bi + w]);
            let (x2, z2) = (self.x[bh + w], self.z[bh + w]);
            phase += product_phase(x1, z1, x2, z2);
            self.x[bh + w] = x1 ^ x2;
            self.z[bh + w] = z1 ^ z2;
        }
        debug_assert!(phase.is_multiple_of(2), "rowsum of anticommuting rows {h}, {i}");
        self.phase[h] = (phase % 4) as u8;
    }

    fn clear_scratch(&mut self) {
        let s = 2 * self.n;
        for w in 0..self.words {
            self.x[s * self.words + w] = 0;
            self.z[s * self.words + w] = 0;
        }
        self.phase[s] = 0;
    }

    fn set_row(&mut self, r: usize, p: &PauliString, sign: Sign) {
        let base = r * self.words;
        self.x[base..base + self.words].copy_from_slice(&p.x);
        self.z[base..base + self.words].copy_from_slice(&p.z);
        self.phase[r] = sign.phase();
    }

    fn copy_row(&mut self, dst: usize, src: usize) {
        let (bd, bs) = (dst * self.words, src * self.words);
        for w in 0..self.words {
            self.x[bd + w] = self.x[bs + w];
            self.z[bd + w] = self.z[bs + w];
        }
        self.phase[dst] = self.phase[src];
    }

    /// Measures qubit `q` in the Z basis, collapsing the state.
    pub fn measure_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<Measurement, TableauError> {
        self.check_qubit(q)?;
        let (w, m) = self.loc(q);
        let n = self.n;
        let pivot = (n..2 * n).find(|&r| self.x[r * self.words + w] & m != 0);
        match pivot {
            Some(p) => {
                for r in 0..2 * n {
                    if r != p && r != p - n && self.x[r * self.words + w] & m != 0 {
                        self.rowsum(r, p);
                    }
                }
                self.copy_row(p - n, p);
                let outcome = if rng.gen::<bool>() { Sign::Minus } else { Sign::Plus };
                let zq = PauliString::single(n, q, Pauli::Z);
                self.set_row(p, &zq, outcome);
                Ok(Measurement { outcome, random: true })
            }
            None => {
                self.clear_scratch();
                for i in 0..n {
                    if self.x[i * self.words + w] & m != 0 {
                        self.rowsum(2 * n, n + i);
                    }
                }
                Ok(Measurement { outcome: Sign::from_phase(self.phase[2 * n]), random: false })
            }
        }
    }

    /// Measures an arbitrary Hermitian Pauli observable.
    pub fn measure_pauli<R: Rng + ?Sized>(
        &mut self,
        p: &PauliString,
        rng: &mut R,
    ) -> Result<Measurement, TableauError> {
        if p.num_qubits() != self.n {
            return Err(TableauError::WidthMismatch { expected: self.n, got: p.num_qubits() });
        }
        let n = self.n;
        let pivot = (n..2 * n).find(|&r| self.anticommutes_with_row(r, p));
        match pivot {
            Some(pv) => {
                for r in 0..2 * n {
                    if r != pv && r != pv - n && self.anticommutes_with_row(r, p) {
                        self.rowsum(r, pv);
                    }
                }
                self.copy_row(pv - n, pv);
                let outcome = if rng.gen::<bool>() { Sign::Minus } else { Sign::Plus };
                // Stored row is the unsigned operator with the outcome as phase,
                // folded with the sign of `p`.
                let stored = if p.is_negative() {
                    match outcome {
                        Sign::Plus => Sign::Minus,
                        Sign::Minus => Sign::Plus,
                    }
                } else {
                    outcome
                };
                self.set_row(pv, &p.with_sign_positive(), stored);
                Ok(Measurement { outcome, random: true })
            }
            None => {
                let s = self.signed_eigenvalue(p);
                Ok(Measurement { outcome: s, random: false })
            }
        }
    }

    /// Eigenvalue of `p` assuming it commutes with every stabilizer.
    fn signed_eigenvalue(&mut self, p: &PauliString) -> Sign {
        let n = self.n;
        self.clear_scratch();
        for i in 0..n {
            if self.anticommutes_with_row(i, p) {
                self.rowsum(2 * n, n + i);
            }
        }
        let s = Sign::from_phase(self.phase[2 * n]);
        debug_assert!((0..self.words)
            .all(|w| { self.x[2 * n * self.words + w] == p.x[w] && self.z[2 * n * self.words + w] == p.z[w] }));
        match (s, p.is_negative()) {
            (Sign::Plus, false) | (Sign::Minus, true) => Sign::Plus,
            _ => Sign::Minus,
        }
    }

    /// `+1`/`-1` when `±p` belongs to the stabilizer group, otherwise
    /// indeterminate. Does not change the state.
    pub fn eigenvalue_of(&mut self, p: &PauliString) -> Result<Eigenvalue, TableauError> {
        if p.num_qubits() != self.n {
            return Err(TableauError::WidthMismatch { expected: self.n, got: p.num_qubits() });
        }
        if (self.n..2 * self.n).any(|r| self.anticommutes_with_row(r, p)) {
            return Ok(Eigenvalue::Indeterminate);
        }
        Ok(self.signed_eigenvalue(p).into())
    }

    /// Resets qubit `q` to `|0⟩`: measure, then flip on a `-1` outcome.
    pub fn prepare_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<(), TableauError> {
        if self.measure_z(q, rng)?.outcome.is_minus() {
            self.pauli_x(q);
        }
        Ok(())
    }

    /// Checks the structural invariants: stabilizers commute, destabilizer
    /// `i` anticommutes exactly with stabilizer `i`, and the rows have full
    /// symplectic rank.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.n;
        let rows: Vec<PauliString> = (0..2 * n).map(|r| self.row(r)).collect();
        for i in 0..n {
            for j in 0..n {
                if !rows[n + i].commutes_with(&rows[n + j]) {
                    return Err(format!("stabilizers {i} and {j} anticommute"));
                }
                let anti = !rows[i].commutes_with(&rows[n + j]);
                if anti != (i == j) {
                    return Err(format!("destabilizer {i} vs stabilizer {j}: anticommute = {anti}"));
                }
            }
        }
        if self.phase[..2 * n].iter().any(|p| p % 2 == 1) {
            return Err("imaginary phase on a stored row".into());
        }
        let symp: Vec<Vec<u64>> = rows.iter().map(|r| r.symplectic()).collect();
        let rank = crate::gf2::rank(&symp);
        if rank != 2 * n {
            return Err(format!("symplectic rank {rank} < {}", 2 * n));
        }
        Ok(())
    }

    /// Symplectic rank of the `2n` rows (equals `2n` for a valid tableau).
    pub fn rank(&self) -> usize {
        let symp: Vec<Vec<u64>> = (0..2 * self.n).map(|r| self.row(r).symplectic()).collect();
        crate::gf2::rank(&symp)
    }
}

impl std::fmt::Debug for StabilizerTableau {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "destabilizers:")?;
        for i in 0..self.n {
            writeln!(f, "  {}", self.destabilizer(i))?;
        }
        writeln!(f, "stabilizers:")?;
        for i in 0..self.n {
            writeln!(f, "  {}", self.stabilizer(i))?;
        }
        Ok(())
    }
}

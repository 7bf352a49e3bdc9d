//! Signed multi-qubit Pauli operators in the binary symplectic representation.

use std::fmt;
use std::str::FromStr;

use super::TableauError;

/// Single-qubit Pauli factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        match c {
            'I' | '_' | '.' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Hermitian Pauli operator `±P_0 ⊗ … ⊗ P_{n-1}`.
///
/// A set `x` bit together with a set `z` bit on the same qubit denotes `Y`
/// itself (not `XZ`), so every representable operator is Hermitian and the
/// sign is exactly ±1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    pub(crate) x: Vec<u64>,
    pub(crate) z: Vec<u64>,
    negative: bool,
}

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        Self { n, x: vec![0; w], z: vec![0; w], negative: false }
    }

    /// Operator acting as `pauli` on each listed qubit and identity elsewhere.
    pub fn uniform(n: usize, pauli: Pauli, qubits: &[usize]) -> Self {
        let mut p = Self::identity(n);
        for &q in qubits {
            p.set(q, pauli);
        }
        p
    }

    pub fn x_on(n: usize, qubits: &[usize]) -> Self {
        Self::uniform(n, Pauli::X, qubits)
    }

    pub fn z_on(n: usize, qubits: &[usize]) -> Self {
        Self::uniform(n, Pauli::Z, qubits)
    }

    pub fn single(n: usize, q: usize, pauli: Pauli) -> Self {
        Self::uniform(n, pauli, &[q])
    }

    /// Parses the compact indexed form used in code tables, e.g. `"X0X1X3X4"`
    /// or `"-Z5Z8"`. `"I"` denotes the identity.
    pub fn from_sparse(n: usize, s: &str) -> Result<Self, TableauError> {
        let err = || TableauError::Parse(s.to_string());
        let mut p = Self::identity(n);
        let mut rest = s.trim();
        if let Some(r) = rest.strip_prefix('-') {
            p.negative = true;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        if rest == "I" || rest.is_empty() {
            return Ok(p);
        }
        let mut chars = rest.chars().peekable();
        while let Some(c) = chars.next() {
            let pauli = Pauli::from_letter(c).filter(|&q| q != Pauli::I).ok_or_else(err)?;
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let q: usize = digits.parse().map_err(|_| err())?;
            if q >= n || p.get(q) != Pauli::I {
                return Err(err());
            }
            p.set(q, pauli);
        }
        Ok(p)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.negative = !p.negative;
        p
    }

    pub fn with_sign_positive(&self) -> Self {
        let mut p = self.clone();
        p.negative = false;
        p
    }

    pub fn get(&self, q: usize) -> Pauli {
        assert!(q < self.n, "qubit {q} out of range for width {}", self.n);
        let (w, b) = (q / 64, q % 64);
        Pauli::from_bits(self.x[w] >> b & 1 == 1, self.z[w] >> b & 1 == 1)
    }

    pub fn set(&mut self, q: usize, pauli: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for width {}", self.n);
        let (w, b) = (q / 64, q % 64);
        let (xb, zb) = pauli.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | (u64::from(xb) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | (u64::from(zb) << b);
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).map(|(x, z)| (x | z).count_ones() as usize).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// Qubits on which the operator acts nontrivially.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.get(q) != Pauli::I).collect()
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        debug_assert_eq!(self.n, other.n);
        let mut parity = 0u32;
        for i in 0..self.x.len() {
            parity ^= ((self.x[i] & other.z[i]) ^ (self.z[i] & other.x[i])).count_ones();
        }
        parity & 1 == 0
    }

    /// Product `self · other`, defined when the two operators commute so the
    /// result is again Hermitian.
    pub fn product(&self, other: &Self) -> Result<Self, TableauError> {
        if self.n != other.n {
            return Err(TableauError::WidthMismatch { expected: self.n, got: other.n });
        }
        let mut phase = 2 * u32::from(self.negative) + 2 * u32::from(other.negative);
        for i in 0..self.x.len() {
            phase += product_phase(self.x[i], self.z[i], other.x[i], other.z[i]);
        }
        if phase % 2 == 1 {
            return Err(TableauError::NonHermitianProduct);
        }
        Ok(Self {
            n: self.n,
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
            negative: phase % 4 == 2,
        })
    }

    /// Product up to phase; the result carries a `+` sign. Used for
    /// corrections and group-membership checks where phase is irrelevant.
    pub fn unsigned_product(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "width mismatch");
        Self {
            n: self.n,
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
            negative: false,
        }
    }

    /// Same operator on a register of `n` qubits (padding with identity or
    /// truncating identity tail qubits).
    pub fn resized(&self, n: usize) -> Self {
        let mut p = Self::identity(n);
        p.negative = self.negative;
        for q in self.support() {
            assert!(q < n, "cannot truncate away qubit {q}");
            p.set(q, self.get(q));
        }
        p
    }

    /// Concatenated `[x | z]` bit-vector, the symplectic coordinates.
    pub fn symplectic(&self) -> Vec<u64> {
        let mut v = Vec::with_capacity(2 * self.x.len());
        v.extend_from_slice(&self.x);
        v.extend_from_slice(&self.z);
        v
    }

    /// Indexed form like `X0X3X6`, matching the code tables.
    pub fn to_sparse_string(&self) -> String {
        let body: String = self.support().into_iter().map(|q| format!("{}{}", self.get(q).letter(), q)).collect();
        let body = if body.is_empty() { "I".to_string() } else { body };
        if self.negative {
            format!("-{body}")
        } else {
            body
        }
    }
}

/// Exponent of `i` (mod 4, summed over qubits) picked up when multiplying
/// the Paulis `(x1, z1)` and `(x2, z2)` in that order, bit-parallel.
#[inline]
pub(crate) fn product_phase(x1: u64, z1: u64, x2: u64, z2: u64) -> u32 {
    let y1 = x1 & z1;
    let xo = x1 & !z1;
    let zo = !x1 & z1;
    let plus = (y1 & z2 & !x2) | (xo & x2 & z2) | (zo & x2 & !z2);
    let minus = (y1 & x2 & !z2) | (xo & z2 & !x2) | (zo & x2 & z2);
    (plus.count_ones() + 4 * 64 - minus.count_ones()) % 4
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        for q in 0..self.n {
            write!(f, "{}", self.get(q).letter())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = TableauError;

    /// Dense form: optional sign followed by one letter per qubit, e.g. `-XIZ`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let (negative, body) = match t.chars().next() {
            Some('-') => (true, &t[1..]),
            Some('+') => (false, &t[1..]),
            _ => (false, t),
        };
        if body.is_empty() {
            return Err(TableauError::Parse(s.to_string()));
        }
        let mut p = Self::identity(body.chars().count());
        p.negative = negative;
        for (q, c) in body.chars().enumerate() {
            let pauli = Pauli::from_letter(c).ok_or_else(|| TableauError::Parse(s.to_string()))?;
            p.set(q, pauli);
        }
        Ok(p)
    }
}

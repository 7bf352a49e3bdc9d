//! The two distance-3 codes on a 3×3 data patch, with their lookup decoders.
//!
//! Data qubits are numbered row-major:
//!
//! ```text
//!   0 1 2
//!   3 4 5
//!   6 7 8
//! ```
//!
//! Both codes share the logical representatives `X_L = X0X3X6` (left column)
//! and `Z_L = Z0Z1Z2` (top row). The Bacon-Shor stabilizers are products of
//! surface-code stabilizers, so the same syndrome-extraction circuit serves
//! both; only the classical interpretation differs.

use std::fmt;

use thiserror::Error;

use crate::tableau::{PauliString, Sign};

pub const N_DATA: usize = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("syndrome has {got} {kind} bits, code expects {expected}")]
    SyndromeLength { kind: &'static str, expected: usize, got: usize },
    #[error("syndrome entries must be +1 or -1, got {0}")]
    SyndromeValue(i8),
    #[error("stabilizer {0} is not a product of surface-code stabilizers")]
    NoDecomposition(String),
    #[error("code {0} has no gauge parity map")]
    NoGaugeMap(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CodeKind {
    Surface17,
    BaconShor17,
}

impl CodeKind {
    pub fn spec(self) -> CodeSpec {
        match self {
            CodeKind::Surface17 => surface17_spec(),
            CodeKind::BaconShor17 => bs17_spec(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CodeKind::Surface17 => "surface17",
            CodeKind::BaconShor17 => "bs17",
        }
    }
}

impl std::str::FromStr for CodeKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "surface17" | "surface" => Ok(CodeKind::Surface17),
            "bs17" | "bs" | "bacon-shor" => Ok(CodeKind::BaconShor17),
            _ => Err(format!("unknown code {s:?}")),
        }
    }
}

/// Measured ±1 eigenvalues of the X-type and Z-type generators, in table
/// row order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome {
    pub x_bits: Vec<i8>,
    pub z_bits: Vec<i8>,
}

impl Syndrome {
    pub fn new(x_bits: Vec<i8>, z_bits: Vec<i8>) -> Result<Self, CodeError> {
        if let Some(&bad) = x_bits.iter().chain(&z_bits).find(|&&b| b != 1 && b != -1) {
            return Err(CodeError::SyndromeValue(bad));
        }
        Ok(Self { x_bits, z_bits })
    }

    pub fn trivial(nx: usize, nz: usize) -> Self {
        Self { x_bits: vec![1; nx], z_bits: vec![1; nz] }
    }

    pub fn from_signs(x: &[Sign], z: &[Sign]) -> Self {
        Self { x_bits: x.iter().map(|s| s.value()).collect(), z_bits: z.iter().map(|s| s.value()).collect() }
    }

    pub fn is_trivial(&self) -> bool {
        self.x_bits.iter().chain(&self.z_bits).all(|&b| b == 1)
    }

    pub fn x_trivial(&self) -> bool {
        self.x_bits.iter().all(|&b| b == 1)
    }

    pub fn z_trivial(&self) -> bool {
        self.z_bits.iter().all(|&b| b == 1)
    }
}

/// Table index of a ±1 bit-string: the first generator is the most
/// significant bit and `-1` maps to 1.
pub fn syndrome_key(bits: &[i8]) -> usize {
    bits.iter().fold(0, |k, &b| (k << 1) | usize::from(b == -1))
}

/// Which surface-code generators multiply to each Bacon-Shor generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeParityMap {
    /// For each BS X generator, the indices of surface X generators.
    pub x: Vec<Vec<usize>>,
    pub z: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct CodeSpec {
    pub kind: CodeKind,
    pub name: &'static str,
    pub n_data: usize,
    pub x_stabilizers: Vec<PauliString>,
    pub z_stabilizers: Vec<PauliString>,
    pub logical_x: PauliString,
    pub logical_z: PauliString,
    /// Correction (Z-type) indexed by [`syndrome_key`] of the X-generator bits.
    pub x_lookup: Vec<PauliString>,
    /// Correction (X-type) indexed by the Z-generator bits.
    pub z_lookup: Vec<PauliString>,
    pub gauge_parity_map: Option<GaugeParityMap>,
    /// Extra generators of the gauge group beyond the stabilizers (BS only).
    pub gauge_operators: Vec<PauliString>,
}

fn paulis(list: &[&str]) -> Vec<PauliString> {
    list.iter().map(|s| PauliString::from_sparse(N_DATA, s).expect("static code table")).collect()
}

pub const SURFACE_X_STABILIZERS: [&str; 4] = ["X1X2", "X0X1X3X4", "X4X5X7X8", "X6X7"];
pub const SURFACE_Z_STABILIZERS: [&str; 4] = ["Z0Z3", "Z1Z2Z4Z5", "Z3Z4Z6Z7", "Z5Z8"];
pub const BS_X_STABILIZERS: [&str; 2] = ["X0X1X3X4X6X7", "X1X2X4X5X7X8"];
pub const BS_Z_STABILIZERS: [&str; 2] = ["Z0Z3Z1Z4Z2Z5", "Z3Z6Z4Z7Z5Z8"];

const SURFACE_X_LOOKUP: [&str; 16] =
    ["I", "Z6", "Z5", "Z7", "Z0", "Z3Z6", "Z4", "Z4Z6", "Z2", "Z2Z6", "Z2Z5", "Z2Z7", "Z1", "Z1Z6", "Z2Z4", "Z1Z7"];
const SURFACE_Z_LOOKUP: [&str; 16] =
    ["I", "X8", "X6", "X7X8", "X1", "X5", "X4", "X4X8", "X0", "X0X8", "X3", "X3X8", "X0X1", "X0X5", "X0X4", "X3X5"];
const BS_X_LOOKUP: [&str; 4] = ["I", "Z2", "Z0", "Z1"];
const BS_Z_LOOKUP: [&str; 4] = ["I", "X6", "X0", "X3"];

pub fn surface17_spec() -> CodeSpec {
    CodeSpec {
        kind: CodeKind::Surface17,
        name: "surface-17",
        n_data: N_DATA,
        x_stabilizers: paulis(&SURFACE_X_STABILIZERS),
        z_stabilizers: paulis(&SURFACE_Z_STABILIZERS),
        logical_x: PauliString::from_sparse(N_DATA, "X0X3X6").unwrap(),
        logical_z: PauliString::from_sparse(N_DATA, "Z0Z1Z2").unwrap(),
        x_lookup: paulis(&SURFACE_X_LOOKUP),
        z_lookup: paulis(&SURFACE_Z_LOOKUP),
        gauge_parity_map: None,
        gauge_operators: Vec::new(),
    }
}

pub fn bs17_spec() -> CodeSpec {
    let x_stabilizers = paulis(&BS_X_STABILIZERS);
    let z_stabilizers = paulis(&BS_Z_STABILIZERS);
    let surface = surface17_spec();
    let map = GaugeParityMap {
        x: decompose_all(&x_stabilizers, &surface.x_stabilizers).expect("BS X generators decompose"),
        z: decompose_all(&z_stabilizers, &surface.z_stabilizers).expect("BS Z generators decompose"),
    };
    // Weight-2 gauge operators: X on horizontal neighbours, Z on vertical ones.
    let mut gauge_operators = Vec::new();
    for r in 0..3 {
        for c in 0..2 {
            gauge_operators.push(PauliString::x_on(N_DATA, &[3 * r + c, 3 * r + c + 1]));
        }
    }
    for r in 0..2 {
        for c in 0..3 {
            gauge_operators.push(PauliString::z_on(N_DATA, &[3 * r + c, 3 * r + c + 3]));
        }
    }
    CodeSpec {
        kind: CodeKind::BaconShor17,
        name: "bacon-shor-17",
        n_data: N_DATA,
        x_stabilizers,
        z_stabilizers,
        logical_x: PauliString::from_sparse(N_DATA, "X0X3X6").unwrap(),
        logical_z: PauliString::from_sparse(N_DATA, "Z0Z1Z2").unwrap(),
        x_lookup: paulis(&BS_X_LOOKUP),
        z_lookup: paulis(&BS_Z_LOOKUP),
        gauge_parity_map: Some(map),
        gauge_operators,
    }
}

/// Expresses each target as a product of `basis` elements via GF(2) solve.
pub fn decompose_all(targets: &[PauliString], basis: &[PauliString]) -> Result<Vec<Vec<usize>>, CodeError> {
    let gens: Vec<Vec<u64>> = basis.iter().map(|p| p.symplectic()).collect();
    targets
        .iter()
        .map(|t| {
            crate::gf2::solve(&gens, &t.symplectic())
                .map(|sel| sel.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i).collect())
                .ok_or_else(|| CodeError::NoDecomposition(t.to_sparse_string()))
        })
        .collect()
}

impl CodeSpec {
    fn check_lengths(&self, s: &Syndrome) -> Result<(), CodeError> {
        if s.x_bits.len() != self.x_stabilizers.len() {
            return Err(CodeError::SyndromeLength {
                kind: "X",
                expected: self.x_stabilizers.len(),
                got: s.x_bits.len(),
            });
        }
        if s.z_bits.len() != self.z_stabilizers.len() {
            return Err(CodeError::SyndromeLength {
                kind: "Z",
                expected: self.z_stabilizers.len(),
                got: s.z_bits.len(),
            });
        }
        Ok(())
    }

    /// Lookup-table correction; X and Z sectors are decoded independently.
    pub fn decode(&self, syndrome: &Syndrome) -> Result<PauliString, CodeError> {
        self.check_lengths(syndrome)?;
        let zc = &self.x_lookup[syndrome_key(&syndrome.x_bits)];
        let xc = &self.z_lookup[syndrome_key(&syndrome.z_bits)];
        Ok(zc.unsigned_product(xc))
    }

    /// Noise-free syndrome of a Pauli error: `-1` where it anticommutes.
    pub fn syndrome_of(&self, error: &PauliString) -> Syndrome {
        let bit = |s: &PauliString| if s.commutes_with(error) { 1 } else { -1 };
        Syndrome {
            x_bits: self.x_stabilizers.iter().map(bit).collect(),
            z_bits: self.z_stabilizers.iter().map(bit).collect(),
        }
    }

    /// Combines surface-17 outcomes into this code's syndrome. For the
    /// surface code itself this is the identity.
    pub fn syndrome_from_surface(&self, surface: &Syndrome) -> Result<Syndrome, CodeError> {
        match &self.gauge_parity_map {
            None => Ok(surface.clone()),
            Some(map) => bs_syndrome_from_surface(map, surface),
        }
    }

    /// Whether `p` (up to sign) lies in the group generated by the
    /// stabilizers and, for subsystem codes, the gauge operators.
    pub fn in_gauge_group(&self, p: &PauliString) -> bool {
        let gens: Vec<Vec<u64>> = self
            .x_stabilizers
            .iter()
            .chain(&self.z_stabilizers)
            .chain(&self.gauge_operators)
            .map(|g| g.symplectic())
            .collect();
        p.is_identity() || crate::gf2::solve(&gens, &p.symplectic()).is_some()
    }

    /// Human-readable listing of generators and lookup tables.
    pub fn dump(&self) -> String {
        self.to_string()
    }
}

/// Multiplies surface outcomes into Bacon-Shor generator outcomes.
pub fn bs_syndrome_from_surface(map: &GaugeParityMap, surface: &Syndrome) -> Result<Syndrome, CodeError> {
    let need = |v: &Vec<Vec<usize>>| v.iter().flatten().copied().max().map_or(0, |m| m + 1);
    if surface.x_bits.len() < need(&map.x) {
        return Err(CodeError::SyndromeLength { kind: "X", expected: need(&map.x), got: surface.x_bits.len() });
    }
    if surface.z_bits.len() < need(&map.z) {
        return Err(CodeError::SyndromeLength { kind: "Z", expected: need(&map.z), got: surface.z_bits.len() });
    }
    let combine = |bits: &[i8], groups: &[Vec<usize>]| -> Vec<i8> {
        groups.iter().map(|g| g.iter().map(|&i| bits[i]).product()).collect()
    };
    Ok(Syndrome { x_bits: combine(&surface.x_bits, &map.x), z_bits: combine(&surface.z_bits, &map.z) })
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "code {}", self.name)?;
        for (i, s) in self.x_stabilizers.iter().enumerate() {
            writeln!(f, "S_X({}) {}", i + 1, s.to_sparse_string())?;
        }
        for (i, s) in self.z_stabilizers.iter().enumerate() {
            writeln!(f, "S_Z({}) {}", i + 1, s.to_sparse_string())?;
        }
        writeln!(f, "X_L {}", self.logical_x.to_sparse_string())?;
        writeln!(f, "Z_L {}", self.logical_z.to_sparse_string())?;
        let row = |k: usize, m: usize| -> String {
            (0..m).rev().map(|b| if k >> b & 1 == 1 { "-1" } else { "+1" }).collect::<Vec<_>>().join(" ")
        };
        writeln!(f, "lookup X")?;
        for (k, c) in self.x_lookup.iter().enumerate() {
            writeln!(f, "{} -> {}", row(k, self.x_stabilizers.len()), c.to_sparse_string())?;
        }
        writeln!(f, "lookup Z")?;
        for (k, c) in self.z_lookup.iter().enumerate() {
            writeln!(f, "{} -> {}", row(k, self.z_stabilizers.len()), c.to_sparse_string())?;
        }
        if let Some(map) = &self.gauge_parity_map {
            for (i, g) in map.x.iter().enumerate() {
                writeln!(f, "parity S_X({}) = {:?}", i + 1, g.iter().map(|j| j + 1).collect::<Vec<_>>())?;
            }
            for (i, g) in map.z.iter().enumerate() {
                writeln!(f, "parity S_Z({}) = {:?}", i + 1, g.iter().map(|j| j + 1).collect::<Vec<_>>())?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableau::Pauli;

    fn p(s: &str) -> PauliString {
        PauliString::from_sparse(N_DATA, s).unwrap()
    }

    fn key_bits(v: &[i8]) -> usize {
        syndrome_key(v)
    }

    #[test]
    fn table_entries_match_reference_rows() {
        let s = surface17_spec();
        assert_eq!(s.z_stabilizers[0], p("Z0Z3"));
        assert_eq!(s.x_stabilizers[1], p("X0X1X3X4"));
        assert_eq!(s.x_lookup[key_bits(&[1, 1, 1, -1])], p("Z6"));
        assert_eq!(s.z_lookup[key_bits(&[-1, -1, -1, -1])], p("X3X5"));
        let b = bs17_spec();
        assert_eq!(b.x_lookup[key_bits(&[-1, -1])], p("Z1"));
        assert_eq!(b.z_lookup[key_bits(&[1, -1])], p("X6"));
    }

    #[test]
    fn decode_examples() {
        let s = surface17_spec();
        assert!(s.decode(&Syndrome::trivial(4, 4)).unwrap().is_identity());
        let syn = Syndrome::new(vec![1; 4], vec![-1, 1, 1, 1]).unwrap();
        assert_eq!(s.decode(&syn).unwrap(), p("X0"));
        let b = bs17_spec();
        let syn = Syndrome::new(vec![1, -1], vec![1, 1]).unwrap();
        assert_eq!(b.decode(&syn).unwrap(), p("Z2"));
        assert!(matches!(b.decode(&Syndrome::trivial(4, 2)), Err(CodeError::SyndromeLength { .. })));
        assert_eq!(Syndrome::new(vec![0], vec![]), Err(CodeError::SyndromeValue(0)));
    }

    #[test]
    fn gauge_map_is_products_of_surface_generators() {
        let b = bs17_spec();
        let map = b.gauge_parity_map.as_ref().unwrap();
        assert_eq!(map.x, vec![vec![1, 3], vec![0, 2]]);
        assert_eq!(map.z, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn parity_combination_examples() {
        let b = bs17_spec();
        let triv = b.syndrome_from_surface(&Syndrome::trivial(4, 4)).unwrap();
        assert!(triv.is_trivial());
        let flipped = Syndrome::new(vec![1, -1, 1, 1], vec![1, 1, 1, 1]).unwrap();
        let bs = b.syndrome_from_surface(&flipped).unwrap();
        assert_eq!(bs.x_bits, vec![-1, 1]);
        // Z4 error: surface flags S_X(2), S_X(3); BS flags both X bits; decode Z4 ~ Z1 (gauge equivalent)
        let s = surface17_spec();
        let e = p("Z4");
        let surf = s.syndrome_of(&e);
        assert_eq!(surf.x_bits, vec![1, -1, -1, 1]);
        let bsyn = b.syndrome_from_surface(&surf).unwrap();
        assert_eq!(bsyn.x_bits, vec![-1, -1]);
        let c = b.decode(&bsyn).unwrap();
        assert!(b.in_gauge_group(&c.unsigned_product(&e)));
    }

    #[test]
    fn code_invariants() {
        for code in [surface17_spec(), bs17_spec()] {
            let all: Vec<&PauliString> = code.x_stabilizers.iter().chain(&code.z_stabilizers).collect();
            for a in &all {
                for b in &all {
                    assert!(a.commutes_with(b));
                }
                assert!(a.commutes_with(&code.logical_x));
                assert!(a.commutes_with(&code.logical_z));
            }
            for g in &code.gauge_operators {
                for s in &all {
                    assert!(g.commutes_with(s), "{} vs {}", g.to_sparse_string(), s.to_sparse_string());
                }
                assert!(g.commutes_with(&code.logical_x) && g.commutes_with(&code.logical_z));
            }
            assert!(!code.logical_x.commutes_with(&code.logical_z));
        }
    }

    #[test]
    fn lookup_rows_reproduce_their_keys() {
        for code in [surface17_spec(), bs17_spec()] {
            for (k, c) in code.x_lookup.iter().enumerate() {
                assert_eq!(syndrome_key(&code.syndrome_of(c).x_bits), k, "{}", c.to_sparse_string());
                assert!(code.syndrome_of(c).z_trivial());
            }
            for (k, c) in code.z_lookup.iter().enumerate() {
                assert_eq!(syndrome_key(&code.syndrome_of(c).z_bits), k, "{}", c.to_sparse_string());
                assert!(code.syndrome_of(c).x_trivial());
            }
        }
    }

    #[test]
    fn every_single_qubit_error_is_corrected() {
        for code in [surface17_spec(), bs17_spec()] {
            for q in 0..N_DATA {
                for pauli in [Pauli::X, Pauli::Y, Pauli::Z] {
                    let e = PauliString::single(N_DATA, q, pauli);
                    let c = code.decode(&code.syndrome_of(&e)).unwrap();
                    let residual = e.unsigned_product(&c);
                    assert!(code.in_gauge_group(&residual), "{} on {}", e.to_sparse_string(), code.name);
                }
            }
        }
    }

    #[test]
    fn dump_lists_generators_and_tables() {
        let text = bs17_spec().dump();
        assert!(text.contains("S_X(1) X0X1X3X4X6X7"));
        assert!(text.contains("-1 -1 -> Z1"));
        assert!(text.contains("parity S_Z(2) = [3, 4]"));
        let text = surface17_spec().dump();
        assert!(text.contains("-1 -1 -1 -1 -> X3X5"));
    }
}

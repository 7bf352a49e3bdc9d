mod common;

use common::tables;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinqec::circuits::{perfect_logical_state, LogicalBasis};
use spinqec::codes::{bs17_spec, surface17_spec, CodeSpec, Syndrome};
use spinqec::tableau::{Eigenvalue, Pauli, PauliString};

fn check_table(code: &CodeSpec, table: &str, x_type: bool) {
    let (nx, nz) = (code.x_stabilizers.len(), code.z_stabilizers.len());
    let rows = tables::rows(table);
    assert_eq!(rows.len(), 1 << if x_type { nx } else { nz });
    for (signs, corr) in rows {
        let syn = if x_type {
            Syndrome::new(signs.clone(), vec![1; nz]).unwrap()
        } else {
            Syndrome::new(vec![1; nx], signs.clone()).unwrap()
        };
        let expected = PauliString::from_sparse(9, &corr).unwrap();
        assert_eq!(code.decode(&syn).unwrap(), expected, "{} row {signs:?}", code.name);
        let back = code.syndrome_of(&expected);
        assert_eq!(if x_type { &back.x_bits } else { &back.z_bits }, &signs);
    }
}

#[test]
fn decoders_reproduce_reference_tables() {
    let s = surface17_spec();
    check_table(&s, tables::SURFACE_X, true);
    check_table(&s, tables::SURFACE_Z, false);
    let b = bs17_spec();
    check_table(&b, tables::BS_X, true);
    check_table(&b, tables::BS_Z, false);
}

fn eig(v: Eigenvalue) -> i8 {
    match v {
        Eigenvalue::Plus => 1,
        Eigenvalue::Minus => -1,
        Eigenvalue::Indeterminate => panic!("indeterminate"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// On gauge-fixed BS states with arbitrary Pauli errors, multiplying the
    /// measured surface outcomes gives the BS generator eigenvalues.
    #[test]
    fn bs_parity_matches_direct_eigenvalues(seed in any::<u64>(), plus in any::<bool>()) {
        let bs = bs17_spec();
        let surf = surface17_spec();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = if plus { LogicalBasis::Plus } else { LogicalBasis::Zero };
        let mut state = perfect_logical_state(&bs, basis, 9);
        for _ in 0..6 {
            let g = &bs.gauge_operators[rng.gen_range(0..bs.gauge_operators.len())];
            state.measure_pauli(g, &mut rng).unwrap();
        }
        let mut err = PauliString::identity(9);
        for q in 0..9 {
            if rng.gen_bool(0.3) {
                err.set(q, [Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..3)]);
            }
        }
        state.apply_pauli(&err).unwrap();
        let direct_x: Vec<i8> = bs.x_stabilizers.iter().map(|s| eig(state.eigenvalue_of(s).unwrap())).collect();
        let direct_z: Vec<i8> = bs.z_stabilizers.iter().map(|s| eig(state.eigenvalue_of(s).unwrap())).collect();
        let mut measured = |ops: &[PauliString]| -> Vec<i8> {
            ops.iter().map(|s| state.measure_pauli(s, &mut rng).unwrap().outcome.value()).collect()
        };
        let sx = measured(&surf.x_stabilizers);
        let sz = measured(&surf.z_stabilizers);
        let combined = bs.syndrome_from_surface(&Syndrome::new(sx, sz).unwrap()).unwrap();
        prop_assert_eq!(&combined.x_bits, &direct_x);
        prop_assert_eq!(&combined.z_bits, &direct_z);
        prop_assert_eq!(bs.syndrome_of(&err), Syndrome::new(direct_x, direct_z).unwrap());
    }

    #[test]
    fn single_errors_decode_to_gauge_equivalents(q in 0usize..9, k in 0usize..3, bs in any::<bool>()) {
        let code = if bs { bs17_spec() } else { surface17_spec() };
        let e = PauliString::single(9, q, [Pauli::X, Pauli::Y, Pauli::Z][k]);
        let c = code.decode(&code.syndrome_of(&e)).unwrap();
        prop_assert!(code.in_gauge_group(&e.unsigned_product(&c)));
    }
}

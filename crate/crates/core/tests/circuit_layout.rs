use spinqec::circuits::{build_bs_plus_prep, build_round, enumerate_fault_locations, location_counts};
use spinqec::noise::{Encoding, NoiseParams};

const ROUND_GOLDEN: &str = include_str!("golden/round_hybrid.txt");
const BS_PREP_GOLDEN: &str = include_str!("golden/bs_prep.txt");

#[test]
fn round_dump_matches_golden() {
    let params = NoiseParams::<f64>::nominal(Encoding::Hybrid);
    let round = build_round(&params);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden");
        std::fs::write(format!("{dir}/round_hybrid.txt"), round.dump()).unwrap();
        std::fs::write(format!("{dir}/bs_prep.txt"), build_bs_plus_prep(&params).dump()).unwrap();
        return;
    }
    assert_eq!(round.dump(), ROUND_GOLDEN);
    assert_eq!(build_bs_plus_prep(&params).dump(), BS_PREP_GOLDEN);
}

#[test]
fn round_structure() {
    for enc in [Encoding::AllLd, Encoding::Hybrid] {
        let params = NoiseParams::<f64>::nominal(enc);
        let round = build_round(&params);
        round.validate().unwrap();
        assert_eq!(round.cz_count(), 24);
        assert_eq!(location_counts(&enumerate_fault_locations(&round, 0)), [8, 8, 34, 24, 9, 9, 48, 40]);
        assert!((round.duration() - params.round_duration()).abs() < 1e-12);
    }
}

#[test]
fn every_cz_pairs_an_ancilla_with_a_data_qubit() {
    let round = build_round(&NoiseParams::<f64>::nominal(Encoding::Hybrid));
    let dump = round.dump();
    let mut seen = 0;
    for tok in dump.split_whitespace().filter(|t| t.starts_with("CZ(")) {
        let inner = &tok[3..tok.len() - 1];
        let (a, b) = inner.split_once(',').unwrap();
        let (a, b): (usize, usize) = (a.parse().unwrap(), b.parse().unwrap());
        assert!((a < 9) != (b < 9), "{tok}");
        seen += 1;
    }
    assert_eq!(seen, 24);
}

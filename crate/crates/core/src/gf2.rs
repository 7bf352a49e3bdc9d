//! Small dense linear algebra over GF(2) on packed `u64` rows.

/// Rank of a set of packed bit-vectors.
pub fn rank(rows: &[Vec<u64>]) -> usize {
    let mut basis: Vec<Vec<u64>> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        reduce(&basis, &mut r);
        if let Some(pivot) = leading_bit(&r) {
            insert_sorted(&mut basis, r, pivot);
        }
    }
    basis.len()
}

/// Expresses `target` as an XOR of a subset of `generators`.
///
/// Returns the selection mask (one flag per generator) or `None` when the
/// target lies outside their span.
pub fn solve(generators: &[Vec<u64>], target: &[u64]) -> Option<Vec<bool>> {
    let words = target.len();
    let m = generators.len();
    let tag_words = m.div_ceil(64).max(1);
    let mut basis: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
    for (g, row) in generators.iter().enumerate() {
        debug_assert_eq!(row.len(), words);
        let mut r = row.clone();
        let mut tag = vec![0u64; tag_words];
        tag[g / 64] |= 1 << (g % 64);
        for (b, btag) in &basis {
            let pivot = leading_bit(b).expect("basis rows are nonzero");
            if bit(&r, pivot) {
                xor_into(&mut r, b);
                xor_into(&mut tag, btag);
            }
        }
        if leading_bit(&r).is_some() {
            basis.push((r, tag));
        }
    }
    let mut t = target.to_vec();
    let mut tag = vec![0u64; tag_words];
    for (b, btag) in &basis {
        let pivot = leading_bit(b).expect("basis rows are nonzero");
        if bit(&t, pivot) {
            xor_into(&mut t, b);
            xor_into(&mut tag, btag);
        }
    }
    if t.iter().any(|&w| w != 0) {
        return None;
    }
    Some((0..m).map(|g| tag[g / 64] >> (g % 64) & 1 == 1).collect())
}

fn reduce(basis: &[Vec<u64>], r: &mut [u64]) {
    for b in basis {
        let pivot = leading_bit(b).expect("basis rows are nonzero");
        if bit(r, pivot) {
            xor_into(r, b);
        }
    }
}

fn insert_sorted(basis: &mut Vec<Vec<u64>>, row: Vec<u64>, pivot: usize) {
    let pos = basis.iter().position(|b| leading_bit(b).unwrap() < pivot).unwrap_or(basis.len());
    basis.insert(pos, row);
}

fn leading_bit(r: &[u64]) -> Option<usize> {
    r.iter().enumerate().rev().find(|(_, &w)| w != 0).map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
}

fn bit(r: &[u64], i: usize) -> bool {
    r[i / 64] >> (i % 64) & 1 == 1
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_identity_and_dependent_rows() {
        let rows = vec![vec![0b001], vec![0b010], vec![0b011], vec![0b100]];
        assert_eq!(rank(&rows), 3);
        assert_eq!(rank(&[]), 0);
        assert_eq!(rank(&[vec![0]]), 0);
    }

    #[test]
    fn solve_finds_combination_or_reports_absence() {
        let gens = vec![vec![0b0011], vec![0b0110], vec![0b1100]];
        let sel = solve(&gens, &[0b1001]).unwrap();
        let mut acc = 0u64;
        for (g, &s) in gens.iter().zip(&sel) {
            if s {
                acc ^= g[0];
            }
        }
        assert_eq!(acc, 0b1001);
        assert!(solve(&gens, &[0b0001]).is_none());
    }

    #[test]
    fn solve_handles_multiword_rows() {
        let gens = vec![vec![1, 0], vec![0, 1 << 5], vec![1, 1 << 5]];
        assert!(solve(&gens, &[0, 1 << 5]).is_some());
        assert!(solve(&gens, &[2, 0]).is_none());
    }
}

//! Direct and error-subset sampling of logical failure rates.
//!
//! A subset is a weight vector `w` (number of faults per category). Its
//! probability `A_w = ∏ C(n_i, w_i) p_i^{w_i} (1 − p_i)^{n_i − w_i}` is
//! analytic; the conditional failure rate `p_L^(w)` is sampled. Summing
//! over the enumerated subsets gives
//!
//! ```text
//! lower = Σ A_w p_L^(w)        upper = lower + (1 − Σ A_w)
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;
use std::time::Instant;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::circuits::{FaultSet, Protocol};
use crate::num::{CompensatedSum, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplerError {
    #[error("weight {w} exceeds location count {n} in category {category}")]
    WeightTooLarge { category: usize, w: usize, n: usize },
    #[error("weight vector has {got} entries, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("shots must be positive")]
    ZeroShots,
    #[error("duplicate subset {0:?}")]
    Duplicate(Vec<usize>),
}

/// Faults per category.
pub type WeightVector = Vec<usize>;

/// Something that can be run with a chosen set of faults.
pub trait FaultModel: Sync {
    /// Number of locations per category.
    fn counts(&self) -> Vec<usize>;
    /// Global index of the `k`-th location of `category`.
    fn location(&self, category: usize, k: usize) -> usize;
    /// Runs once with the given faults and reports logical failure.
    fn is_failure(&self, faults: &FaultSet, rng: &mut ChaCha8Rng) -> bool;
}

impl<T: Real> FaultModel for Protocol<T> {
    fn counts(&self) -> Vec<usize> {
        Protocol::counts(self).to_vec()
    }

    fn location(&self, category: usize, k: usize) -> usize {
        self.category_locations(category)[k]
    }

    fn is_failure(&self, faults: &FaultSet, rng: &mut ChaCha8Rng) -> bool {
        self.run(faults, rng).logical_failure
    }
}

fn check_inputs<T: Real>(w: &[usize], n: &[usize], p: &[T]) -> Result<(), SamplerError> {
    if w.len() != n.len() || p.len() != n.len() {
        return Err(SamplerError::Arity { expected: n.len(), got: w.len().min(p.len()) });
    }
    for (i, (&wi, &ni)) in w.iter().zip(n).enumerate() {
        if wi > ni {
            return Err(SamplerError::WeightTooLarge { category: i, w: wi, n: ni });
        }
    }
    for &pi in p {
        if !(pi >= T::zero() && pi <= T::one()) {
            return Err(SamplerError::Probability(pi.as_f64()));
        }
    }
    Ok(())
}

/// `ln[C(n, k) p^k (1 − p)^(n − k)]`, or `-∞` when the term vanishes.
fn ln_binomial_term<T: Real>(n: usize, k: usize, p: T) -> T {
    if p == T::zero() {
        return if k == 0 { T::zero() } else { T::neg_infinity() };
    }
    if p == T::one() {
        return if k == n { T::zero() } else { T::neg_infinity() };
    }
    let mut ln_c = T::zero();
    for j in 0..k {
        ln_c = ln_c + (T::lit((n - j) as f64) / T::lit((j + 1) as f64)).ln();
    }
    ln_c + T::lit(k as f64) * p.ln() + T::lit((n - k) as f64) * (-p).ln_1p()
}

/// Probability of the subset `w`.
pub fn subset_weight<T: Real>(w: &[usize], n: &[usize], p: &[T]) -> Result<T, SamplerError> {
    check_inputs(w, n, p)?;
    let ln: T = w.iter().zip(n).zip(p).map(|((&wi, &ni), &pi)| ln_binomial_term(ni, wi, pi)).sum();
    Ok(ln.exp())
}

/// Every subset with `A_w > threshold`, by decreasing `A_w`.
///
/// Depth-first over categories; a branch is pruned when its partial product
/// times the per-category maxima of the remaining factors cannot exceed the
/// threshold. Each factor is unimodal in `w_i`, so scanning outward from the
/// mode stops at the first failing value.
pub fn enumerate_subsets<T: Real>(n: &[usize], p: &[T], threshold: T) -> Result<Vec<(WeightVector, T)>, SamplerError> {
    check_inputs(&vec![0; n.len()], n, p)?;
    let m = n.len();
    let terms: Vec<Vec<T>> = (0..m).map(|i| (0..=n[i]).map(|k| ln_binomial_term(n[i], k, p[i])).collect()).collect();
    let modes: Vec<usize> =
        terms.iter().map(|t| (0..t.len()).fold(0, |best, k| if t[k] > t[best] { k } else { best })).collect();
    let mut suffix = vec![T::zero(); m + 1];
    for i in (0..m).rev() {
        suffix[i] = suffix[i + 1] + terms[i][modes[i]];
    }
    let ln_thr = threshold.ln();
    let mut out = Vec::new();
    let mut w = vec![0usize; m];
    dfs(0, T::zero(), &terms, &modes, &suffix, ln_thr, &mut w, &mut out);
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs<T: Real>(
    i: usize,
    ln_p: T,
    terms: &[Vec<T>],
    modes: &[usize],
    suffix: &[T],
    ln_thr: T,
    w: &mut Vec<usize>,
    out: &mut Vec<(WeightVector, T)>,
) {
    if i == terms.len() {
        if ln_p > ln_thr {
            out.push((w.clone(), ln_p.exp()));
        }
        return;
    }
    let up = modes[i]..terms[i].len();
    let down = (0..modes[i]).rev();
    for range in [up.collect::<Vec<_>>(), down.collect()] {
        for k in range {
            let next = ln_p + terms[i][k];
            if !(next + suffix[i + 1] > ln_thr) {
                break;
            }
            w[i] = k;
            dfs(i + 1, next, terms, modes, suffix, ln_thr, w, out);
        }
    }
    w[i] = 0;
}

/// Monte Carlo estimate of one subset's conditional failure rate.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetEstimate<T> {
    pub w: WeightVector,
    pub a_w: T,
    pub shots: u64,
    pub failures: u64,
}

impl<T: Real> SubsetEstimate<T> {
    pub fn p_l(&self) -> T {
        if self.shots == 0 {
            return T::zero();
        }
        T::lit(self.failures as f64 / self.shots as f64)
    }

    /// Binomial standard error of [`Self::p_l`].
    pub fn std_err(&self) -> T {
        binomial_se(self.failures, self.shots)
    }
}

fn binomial_se<T: Real>(failures: u64, shots: u64) -> T {
    if shots == 0 {
        return T::zero();
    }
    let p = failures as f64 / shots as f64;
    T::lit((p * (1.0 - p) / shots as f64).sqrt())
}

/// Standard error with add-one smoothing, non-zero even without failures.
fn smoothed_se(failures: u64, shots: u64) -> f64 {
    let p = (failures as f64 + 1.0) / (shots as f64 + 2.0);
    (p * (1.0 - p) / shots as f64).sqrt()
}

/// Lower and upper bounds on the logical failure rate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundPair<T> {
    pub lower: T,
    pub upper: T,
    pub sampled_mass: T,
    /// Monte Carlo standard error of `lower` (and of `upper`).
    pub std_err: T,
}

impl<T: Real> BoundPair<T> {
    pub fn gap(&self) -> T {
        self.upper - self.lower
    }
}

pub fn combine_bounds<T: Real>(estimates: &[SubsetEstimate<T>]) -> Result<BoundPair<T>, SamplerError> {
    let mut seen = HashSet::new();
    let mut lower = CompensatedSum::new();
    let mut mass = CompensatedSum::new();
    let mut var = CompensatedSum::new();
    for e in estimates {
        if !seen.insert(e.w.clone()) {
            return Err(SamplerError::Duplicate(e.w.clone()));
        }
        lower.add(e.a_w * e.p_l());
        mass.add(e.a_w);
        let s = e.a_w * e.std_err();
        var.add(s * s);
    }
    let (lower, mass) = (lower.value(), mass.value());
    let gap = (T::one() - mass).max(T::zero());
    Ok(BoundPair { lower, upper: lower + gap, sampled_mass: mass, std_err: var.value().sqrt() })
}

/// Failure rate from independent per-location fault draws.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectEstimate<T> {
    pub shots: u64,
    pub failures: u64,
    pub p_l: T,
    pub std_err: T,
}

/// Shot allocation for the subset sampler.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShotPolicy {
    pub base: u64,
    pub cap: u64,
    /// Refine a subset until `A_w · se_w < rel_target · target`.
    pub rel_target: f64,
}

impl Default for ShotPolicy {
    fn default() -> Self {
        Self { base: 10_000, cap: 1_000_000, rel_target: 0.05 }
    }
}

impl ShotPolicy {
    pub fn fixed(shots: u64) -> Self {
        Self { base: shots, cap: shots, rel_target: 0.05 }
    }
}

/// Everything the subset sampler produced for one configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetRun<T> {
    pub counts: Vec<usize>,
    pub probs: Vec<T>,
    pub estimates: Vec<SubsetEstimate<T>>,
    pub bounds: BoundPair<T>,
    /// The deadline cut refinement short.
    pub partial: bool,
}

impl<T: Real> SubsetRun<T> {
    pub fn total_shots(&self) -> u64 {
        self.estimates.iter().map(|e| e.shots).sum()
    }

    /// Per-subset ledger: `w_1..w_m,A_w,shots,failures,p_L_w,std_err`.
    pub fn ledger_csv(&self) -> String {
        let mut out = String::new();
        for i in 1..=self.counts.len() {
            write!(out, "w_{i},").unwrap();
        }
        out.push_str("A_w,shots,failures,p_L_w,std_err\n");
        for e in &self.estimates {
            for wi in &e.w {
                write!(out, "{wi},").unwrap();
            }
            writeln!(
                out,
                "{:e},{},{},{:e},{:e}",
                e.a_w.as_f64(),
                e.shots,
                e.failures,
                e.p_l().as_f64(),
                e.std_err().as_f64()
            )
            .unwrap();
        }
        out
    }
}

/// Stream id for a subset, stable across platforms and runs.
fn subset_stream(w: &[usize]) -> u64 {
    let mut h = Sha256::new();
    for &wi in w {
        h.update((wi as u64).to_le_bytes());
    }
    u64::from_le_bytes(h.finalize()[..8].try_into().unwrap())
}

const DIRECT_STREAM: u64 = u64::MAX;

/// Generator for shot `shot` of stream `stream` under `seed`.
pub fn shot_rng(seed: u64, stream: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(u128::from(shot) << 32);
    rng
}

fn count_failures<F>(shots: std::ops::Range<u64>, trial: F) -> u64
where
    F: Fn(u64) -> bool + Sync,
{
    const CHUNK: u64 = 256;
    let chunks: Vec<(u64, u64)> =
        (shots.start..shots.end).step_by(CHUNK as usize).map(|s| (s, (s + CHUNK).min(shots.end))).collect();
    chunks.par_iter().map(|&(a, b)| (a..b).filter(|&s| trial(s)).count() as u64).sum()
}

/// Runs shots `range` of subset `w`.
fn sample_range<M: FaultModel>(
    model: &M,
    w: &[usize],
    counts: &[usize],
    seed: u64,
    range: std::ops::Range<u64>,
) -> u64 {
    let stream = subset_stream(w);
    count_failures(range, |shot| {
        let mut rng = shot_rng(seed, stream, shot);
        let mut faults = Vec::with_capacity(w.iter().sum());
        for (c, (&wc, &nc)) in w.iter().zip(counts).enumerate() {
            if wc > 0 {
                for k in index::sample(&mut rng, nc, wc) {
                    faults.push(model.location(c, k));
                }
            }
        }
        model.is_failure(&FaultSet::new(faults), &mut rng)
    })
}

/// Samples `shots` fault configurations of weight `w`.
pub fn sample_subset<M: FaultModel, T: Real>(
    model: &M,
    w: &[usize],
    a_w: T,
    shots: u64,
    seed: u64,
) -> Result<SubsetEstimate<T>, SamplerError> {
    if shots == 0 {
        return Err(SamplerError::ZeroShots);
    }
    let counts = model.counts();
    check_inputs::<T>(w, &counts, &vec![T::zero(); counts.len()])?;
    let failures = sample_range(model, w, &counts, seed, 0..shots);
    Ok(SubsetEstimate { w: w.to_vec(), a_w, shots, failures })
}

/// Independent Bernoulli faults at every location.
pub fn direct_sample<M: FaultModel, T: Real>(
    model: &M,
    probs: &[T],
    shots: u64,
    seed: u64,
) -> Result<DirectEstimate<T>, SamplerError> {
    if shots == 0 {
        return Err(SamplerError::ZeroShots);
    }
    let counts = model.counts();
    check_inputs(&vec![0; counts.len()], &counts, probs)?;
    let p: Vec<f64> = probs.iter().map(|x| x.as_f64()).collect();
    let failures = count_failures(0..shots, |shot| {
        let mut rng = shot_rng(seed, DIRECT_STREAM, shot);
        let mut faults = Vec::new();
        for (c, &nc) in counts.iter().enumerate() {
            if p[c] > 0.0 {
                for k in 0..nc {
                    if rng.gen::<f64>() < p[c] {
                        faults.push(model.location(c, k));
                    }
                }
            }
        }
        model.is_failure(&FaultSet::new(faults), &mut rng)
    });
    Ok(DirectEstimate {
        shots,
        failures,
        p_l: T::lit(failures as f64 / shots as f64),
        std_err: binomial_se(failures, shots),
    })
}

/// Full subset-sampling run: enumerate, pilot every subset with
/// `policy.base` shots, then double shots on subsets whose weighted
/// standard error is still large compared with
/// `max(lower bound, 1 − ΣA_w)`.
pub fn run_subset_sampler<M: FaultModel, T: Real>(
    model: &M,
    probs: &[T],
    threshold: T,
    policy: ShotPolicy,
    seed: u64,
    deadline: Option<Instant>,
) -> Result<SubsetRun<T>, SamplerError> {
    if policy.base == 0 {
        return Err(SamplerError::ZeroShots);
    }
    let counts = model.counts();
    let subsets = enumerate_subsets(&counts, probs, threshold)?;
    let mut partial = false;
    let mut estimates = Vec::with_capacity(subsets.len());
    for (w, a_w) in subsets {
        if deadline.is_some_and(|d| Instant::now() > d) {
            partial = true;
            break;
        }
        let failures = sample_range(model, &w, &counts, seed, 0..policy.base);
        estimates.push(SubsetEstimate { w, a_w, shots: policy.base, failures });
    }
    let pilot = combine_bounds(&estimates)?;
    let target = policy.rel_target * pilot.lower.max(pilot.gap()).as_f64();
    if target > 0.0 && !partial {
        'refine: for e in &mut estimates {
            while e.shots < policy.cap && e.a_w.as_f64() * smoothed_se(e.failures, e.shots) >= target {
                if deadline.is_some_and(|d| Instant::now() > d) {
                    partial = true;
                    break 'refine;
                }
                let more = e.shots.min(policy.cap - e.shots);
                e.failures += sample_range(model, &e.w, &counts, seed, e.shots..e.shots + more);
                e.shots += more;
            }
        }
    }
    let bounds = combine_bounds(&estimates)?;
    Ok(SubsetRun { counts, probs: probs.to_vec(), estimates, bounds, partial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_weight_subset() {
        let a: f64 = subset_weight(&[0, 0], &[3, 5], &[0.1, 0.2]).unwrap();
        assert_relative_eq!(a, 0.9f64.powi(3) * 0.8f64.powi(5), max_relative = 1e-12);
    }

    #[test]
    fn single_category_factor() {
        let a: f64 = subset_weight(&[1], &[24], &[4e-3]).unwrap();
        assert_relative_eq!(a, 24.0 * 0.004 * 0.996f64.powi(23), max_relative = 1e-12);
        assert!((a - 0.0875).abs() < 5e-4);
        assert!(matches!(subset_weight(&[3], &[2], &[0.1]), Err(SamplerError::WeightTooLarge { .. })));
        assert!(matches!(subset_weight(&[0], &[2], &[1.5]), Err(SamplerError::Probability(_))));
    }

    #[test]
    fn enumeration_edge_cases() {
        let only_zero = enumerate_subsets(&[4, 5], &[0.0, 0.0], 1e-6).unwrap();
        assert_eq!(only_zero, vec![(vec![0, 0], 1.0)]);
        assert!(enumerate_subsets(&[4], &[0.1], 1.0).unwrap().is_empty());
        let list = enumerate_subsets(&[10, 10], &[0.1, 0.3], 1e-3).unwrap();
        assert!(list.windows(2).all(|p| p[0].1 >= p[1].1));
    }

    #[test]
    fn combine_examples() {
        let e = SubsetEstimate { w: vec![0], a_w: 0.9, shots: 10, failures: 0 };
        let b = combine_bounds(std::slice::from_ref(&e)).unwrap();
        assert_eq!(b.lower, 0.0);
        assert_relative_eq!(b.upper, 0.1, max_relative = 1e-12);
        assert!(matches!(combine_bounds(&[e.clone(), e]), Err(SamplerError::Duplicate(_))));
        let empty = combine_bounds::<f64>(&[]).unwrap();
        assert_eq!((empty.lower, empty.upper), (0.0, 1.0));
    }

    #[test]
    fn shot_streams_are_distinct() {
        let a: u64 = shot_rng(1, 2, 0).gen();
        let b: u64 = shot_rng(1, 2, 1).gen();
        let c: u64 = shot_rng(1, 3, 0).gen();
        let d: u64 = shot_rng(2, 2, 0).gen();
        assert!(a != b && a != c && a != d);
        assert_eq!(a, shot_rng(1, 2, 0).gen::<u64>());
    }
}

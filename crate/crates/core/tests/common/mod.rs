#![allow(dead_code)]

pub mod dense;
pub mod tables;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use spinqec::circuits::FaultSet;
use spinqec::sampler::FaultModel;

/// Fails iff an odd number of faults occurred, with the verdict inverted
/// at rate `flip` using the shot's RNG.
pub struct XorModel {
    pub counts: Vec<usize>,
    pub flip: f64,
}

impl FaultModel for XorModel {
    fn counts(&self) -> Vec<usize> {
        self.counts.clone()
    }

    fn location(&self, category: usize, k: usize) -> usize {
        self.counts[..category].iter().sum::<usize>() + k
    }

    fn is_failure(&self, faults: &FaultSet, rng: &mut ChaCha8Rng) -> bool {
        let odd = faults.len() % 2 == 1;
        odd != (self.flip > 0.0 && rng.gen_bool(self.flip))
    }
}

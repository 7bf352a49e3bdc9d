//! Dense state-vector reference for a handful of qubits.

use num_complex::Complex64 as C;
use rand::Rng;
use spinqec::tableau::{GateKind, Pauli, PauliString};

#[derive(Clone, Debug)]
pub struct Dense {
    pub n: usize,
    pub amp: Vec<C>,
}

impl Dense {
    pub fn new(n: usize) -> Self {
        let mut amp = vec![C::new(0.0, 0.0); 1 << n];
        amp[0] = C::new(1.0, 0.0);
        Self { n, amp }
    }

    fn one_qubit(&mut self, q: usize, m: [[C; 2]; 2]) {
        let bit = 1 << q;
        for i in 0..self.amp.len() {
            if i & bit == 0 {
                let (a, b) = (self.amp[i], self.amp[i | bit]);
                self.amp[i] = m[0][0] * a + m[0][1] * b;
                self.amp[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    pub fn apply(&mut self, gate: GateKind, qs: &[usize]) {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| C::new(re, im);
        match gate {
            GateKind::RyPlus => self.one_qubit(qs[0], [[c(r, 0.), c(-r, 0.)], [c(r, 0.), c(r, 0.)]]),
            GateKind::RyMinus => self.one_qubit(qs[0], [[c(r, 0.), c(r, 0.)], [c(-r, 0.), c(r, 0.)]]),
            GateKind::X => self.one_qubit(qs[0], [[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]]),
            GateKind::Y => self.one_qubit(qs[0], [[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]]),
            GateKind::Z => self.one_qubit(qs[0], [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]]),
            GateKind::Cz => {
                let m = (1 << qs[0]) | (1 << qs[1]);
                for (i, a) in self.amp.iter_mut().enumerate() {
                    if i & m == m {
                        *a = -*a;
                    }
                }
            }
        }
    }

    /// Probability of reading 1 on `q`.
    pub fn p_one(&self, q: usize) -> f64 {
        self.amp.iter().enumerate().filter(|(i, _)| i >> q & 1 == 1).map(|(_, a)| a.norm_sqr()).sum()
    }

    /// Projects `q` onto `outcome` (0 or 1) and renormalizes.
    pub fn project(&mut self, q: usize, outcome: usize) -> f64 {
        let mut norm = 0.0;
        for (i, a) in self.amp.iter_mut().enumerate() {
            if (i >> q & 1) != outcome {
                *a = C::new(0.0, 0.0);
            } else {
                norm += a.norm_sqr();
            }
        }
        if norm > 0.0 {
            let s = norm.sqrt();
            self.amp.iter_mut().for_each(|a| *a /= s);
        }
        norm
    }

    pub fn measure<R: Rng>(&mut self, q: usize, rng: &mut R) -> usize {
        let o = usize::from(rng.gen::<f64>() < self.p_one(q));
        self.project(q, o);
        o
    }

    /// `⟨ψ|P|ψ⟩` including the sign of `p`.
    pub fn expectation(&self, p: &PauliString) -> C {
        let mut out = C::new(0.0, 0.0);
        for (i, a) in self.amp.iter().enumerate() {
            let mut j = i;
            let mut phase = C::new(f64::from(p.sign()), 0.0);
            for q in 0..self.n {
                let b = i >> q & 1;
                match p.get(q) {
                    Pauli::I => {}
                    Pauli::X => j ^= 1 << q,
                    Pauli::Y => {
                        j ^= 1 << q;
                        phase *= if b == 0 { C::new(0.0, 1.0) } else { C::new(0.0, -1.0) };
                    }
                    Pauli::Z => {
                        if b == 1 {
                            phase = -phase;
                        }
                    }
                }
            }
            out += self.amp[j].conj() * phase * a;
        }
        out
    }
}

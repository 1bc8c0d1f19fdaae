//! Seeded random instances for the identity suites.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

use crate::algebroid::Algebroid;
use crate::ring::{Exponents, Poly, Rational};
use crate::tensor::{GradedTensor, Kind};

fn fnv1a(mut h: u64, bytes: &[u8]) -> u64 {
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Mixes a seed with string labels and a trial number into a stream seed.
pub fn stream_seed(seed: u64, labels: &[&str], trial: u64) -> u64 {
    let mut h = fnv1a(0xcbf2_9ce4_8422_2325, &seed.to_le_bytes());
    for l in labels {
        h = fnv1a(h, l.as_bytes());
        h = fnv1a(h, &[0xff]);
    }
    fnv1a(h, &trial.to_le_bytes())
}

/// Random polynomials and tensors with small integer coefficients.
pub struct Gen {
    rng: ChaCha8Rng,
    max_degree: u32,
    max_terms: usize,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), max_degree: 2, max_terms: 2 }
    }

    pub fn for_trial(seed: u64, labels: &[&str], trial: u64) -> Gen {
        Gen::new(stream_seed(seed, labels, trial))
    }

    pub fn with_max_degree(mut self, d: u32) -> Gen {
        self.max_degree = d;
        self
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen()
    }

    fn coefficient(&mut self) -> Rational {
        let c = self.rng.gen_range(1..=3i64);
        Rational::from_int(if self.rng.gen() { c } else { -c })
    }

    /// 1–3 terms, total degree at most the configured bound, coefficients in [−3, 3] \ {0}.
    pub fn poly(&mut self, nvars: usize) -> Poly {
        let mut out = Poly::zero(nvars);
        let terms = self.rng.gen_range(1..=3);
        for _ in 0..terms {
            let mut e: Exponents = SmallVec::from_elem(0, nvars);
            if nvars > 0 {
                let deg = self.rng.gen_range(0..=self.max_degree);
                for _ in 0..deg {
                    let v = self.rng.gen_range(0..nvars);
                    e[v] += 1;
                }
            }
            out.add_assign_ref(&Poly::monomial(e, self.coefficient()));
        }
        if out.is_zero() {
            Poly::constant(self.coefficient(), nvars)
        } else {
            out
        }
    }

    fn subset(&mut self, m: usize, k: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..m).collect();
        idx.shuffle(&mut self.rng);
        idx.truncate(k);
        idx
    }

    fn antisym(&mut self, a: &Arc<Algebroid>, kind: Kind, k: usize) -> GradedTensor {
        let (m, n) = (a.rank(), a.nvars());
        let mut out = GradedTensor::zero(a, kind, k);
        if k > m {
            return out;
        }
        let terms = self.rng.gen_range(1..=self.max_terms);
        for _ in 0..terms {
            let key = self.subset(m, k);
            let p = self.poly(n);
            out.add_raw_term(&key, &p);
        }
        out
    }

    pub fn function(&mut self, a: &Arc<Algebroid>) -> Poly {
        self.poly(a.nvars())
    }

    pub fn form(&mut self, a: &Arc<Algebroid>, k: usize) -> GradedTensor {
        self.antisym(a, Kind::Form, k)
    }

    pub fn multivector(&mut self, a: &Arc<Algebroid>, k: usize) -> GradedTensor {
        self.antisym(a, Kind::MultiVector, k)
    }

    pub fn section(&mut self, a: &Arc<Algebroid>) -> GradedTensor {
        self.antisym(a, Kind::MultiVector, 1)
    }

    pub fn sym(&mut self, a: &Arc<Algebroid>, k: usize) -> GradedTensor {
        let (m, n) = (a.rank(), a.nvars());
        let mut out = GradedTensor::zero(a, Kind::Sym, k);
        if m == 0 {
            return out;
        }
        let terms = self.rng.gen_range(1..=self.max_terms);
        for _ in 0..terms {
            let key: Vec<usize> = (0..k).map(|_| self.rng.gen_range(0..m)).collect();
            let p = self.poly(n);
            out.add_raw_term(&key, &p);
        }
        out
    }

    /// Mixed tensor of form degree `k`; degree 0 gives a section.
    pub fn mixed(&mut self, a: &Arc<Algebroid>, k: usize) -> GradedTensor {
        if k == 0 {
            return self.section(a);
        }
        let (m, n) = (a.rank(), a.nvars());
        let mut out = GradedTensor::zero(a, Kind::Mixed, k);
        if k > m {
            return out;
        }
        let terms = self.rng.gen_range(1..=self.max_terms);
        for _ in 0..terms {
            let mut key = self.subset(m, k);
            key.push(self.rng.gen_range(0..m));
            let p = self.poly(n);
            out.add_raw_term(&key, &p);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Chart;

    #[test]
    fn streams_are_reproducible() {
        let a = Algebroid::canonical(&Chart::new(["x", "y"]).unwrap()).unwrap();
        let mut g1 = Gen::for_trial(7, &["theorem-1", "so3"], 3);
        let mut g2 = Gen::for_trial(7, &["theorem-1", "so3"], 3);
        assert_eq!(g1.form(&a, 2), g2.form(&a, 2));
        let mut g3 = Gen::for_trial(7, &["theorem-1", "so3"], 4);
        let p: Vec<Poly> = (0..5).map(|_| g3.poly(2)).collect();
        assert!(p.iter().all(|q| !q.is_zero() && q.total_degree() <= 2));
    }
}

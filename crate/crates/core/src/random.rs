//! Seeded random unitaries and states.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::qudit::{Operator, StateVector};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Orthonormalizes the columns of a complex Gaussian matrix (modified
/// Gram-Schmidt), giving a unitary on `n` qudits.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> Operator {
    let dim = d.pow(n as u32);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for u in &cols {
                let p: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= p * y;
                }
            }
        }
        let nrm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if nrm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|a| *a /= nrm);
        cols.push(v);
    }
    Operator::from_fn(d, n, n, |r, c| cols[c][r])
}

pub fn random_state<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> StateVector {
    let dim = d.pow(n as u32);
    let amps: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
    StateVector::new(d, n, amps)
        .expect("length matches d^n")
        .normalized()
}

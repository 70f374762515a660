use num_complex::Complex64;

use super::{digit, pow_usize, Operator};
use crate::error::{Error, Result};
use crate::scalar::Amplitudes;

/// Amplitudes on `(C^d)^⊗n`, big-endian: qudit 1 is the most significant
/// digit of the index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    d: usize,
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(d: usize, n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(d));
        }
        let expected = pow_usize(d, n);
        if amps.len() != expected {
            return Err(Error::shape(expected, amps.len()));
        }
        Ok(StateVector { d, n, amps })
    }

    pub(crate) fn from_amps_unchecked(d: usize, n: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), pow_usize(d, n));
        StateVector { d, n, amps }
    }

    pub fn zeros(d: usize, n: usize) -> Self {
        StateVector {
            d,
            n,
            amps: vec![Complex64::new(0.0, 0.0); pow_usize(d, n)],
        }
    }

    /// `|k_1, …, k_n⟩`; entries are reduced modulo `d`.
    pub fn basis(d: usize, charges: &[i64]) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(d));
        }
        let mut s = Self::zeros(d, charges.len());
        let idx = charges
            .iter()
            .fold(0usize, |acc, &k| acc * d + k.rem_euclid(d as i64) as usize);
        s.amps[idx] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> StateVector {
        let nrm = self.norm();
        let amps = if nrm > 0.0 {
            self.amps.iter().map(|a| a / nrm).collect()
        } else {
            self.amps.clone()
        };
        StateVector { amps, ..*self }
    }

    pub fn scale(&self, s: Complex64) -> StateVector {
        StateVector {
            amps: self.amps.iter().map(|a| a * s).collect(),
            ..*self
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.d != other.d || self.n != other.n {
            return Err(Error::shape(self.len(), other.len()));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn tensor(&self, rhs: &StateVector) -> Result<StateVector> {
        if self.d != rhs.d {
            return Err(Error::shape(format!("d={}", self.d), format!("d={}", rhs.d)));
        }
        let amps = self
            .amps
            .iter()
            .flat_map(|a| rhs.amps.iter().map(move |b| a * b))
            .collect();
        Ok(StateVector {
            d: self.d,
            n: self.n + rhs.n,
            amps,
        })
    }

    /// Applies a square `m`-qudit operator to the listed qudits (1-based, in
    /// the operator's own qudit order).
    pub fn apply_local(&self, op: &Operator, qudits: &[usize]) -> Result<StateVector> {
        let targets = self.check_targets(op, qudits)?;
        let (d, n) = (self.d, self.n);
        let m = targets.len();
        let weights: Vec<usize> = targets.iter().map(|&t| pow_usize(d, n - 1 - t)).collect();
        let place = |local: usize| -> usize {
            (0..m)
                .map(|i| digit(local, i, m, d) * weights[i])
                .sum::<usize>()
        };
        let offsets: Vec<usize> = (0..op.rows()).map(place).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); self.len()];
        for (idx, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let col = (0..m).fold(0usize, |acc, i| acc * d + digit(idx, targets[i], n, d));
            let base = idx - offsets[col];
            for (r, off) in offsets.iter().enumerate() {
                let v = op.get(r, col);
                if v.re != 0.0 || v.im != 0.0 {
                    out[base + off] += v * a;
                }
            }
        }
        Ok(StateVector {
            amps: out,
            ..*self
        })
    }

    /// Projects qudit `qudit` (1-based) onto `|k⟩` without renormalizing and
    /// keeps the collapsed qudit in the register.
    pub fn project(&self, qudit: usize, k: usize) -> Result<StateVector> {
        if qudit == 0 || qudit > self.n {
            return Err(Error::QuditOutOfRange {
                index: qudit,
                n: self.n,
            });
        }
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(idx, a)| {
                if digit(idx, qudit - 1, self.n, self.d) == k % self.d {
                    *a
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok(StateVector { amps, ..*self })
    }

    /// Contracts the listed qudits (1-based) against fixed basis values and
    /// returns the state of the remaining qudits, in order.
    pub fn extract(&self, fixed: &[(usize, usize)]) -> Result<StateVector> {
        let (d, n) = (self.d, self.n);
        let mut is_fixed = vec![None; n];
        for &(q, v) in fixed {
            if q == 0 || q > n {
                return Err(Error::QuditOutOfRange { index: q, n });
            }
            is_fixed[q - 1] = Some(v % d);
        }
        let keep: Vec<usize> = (0..n).filter(|&i| is_fixed[i].is_none()).collect();
        let mut out = StateVector::zeros(d, keep.len());
        for (idx, a) in self.amps.iter().enumerate() {
            let matches = (0..n).all(|i| match is_fixed[i] {
                Some(v) => digit(idx, i, n, d) == v,
                None => true,
            });
            if matches {
                let j = keep.iter().fold(0usize, |acc, &i| acc * d + digit(idx, i, n, d));
                out.amps[j] = *a;
            }
        }
        Ok(out)
    }

    /// Reduced density matrix on the listed qudits (1-based, in that order).
    pub fn reduced_density(&self, keep: &[usize]) -> Result<Operator> {
        let (d, n) = (self.d, self.n);
        let mut kept = vec![false; n];
        for &q in keep {
            if q == 0 || q > n || kept[q - 1] {
                return Err(Error::QuditOutOfRange { index: q, n });
            }
            kept[q - 1] = true;
        }
        let rest: Vec<usize> = (0..n).filter(|&i| !kept[i]).collect();
        let m = keep.len();
        let dim_k = pow_usize(d, m);
        let dim_r = pow_usize(d, rest.len());
        // ψ reshaped as (kept, rest)
        let mut psi = vec![Complex64::new(0.0, 0.0); dim_k * dim_r];
        for (idx, a) in self.amps.iter().enumerate() {
            let kk = keep.iter().fold(0, |acc, &q| acc * d + digit(idx, q - 1, n, d));
            let rr = rest.iter().fold(0, |acc, &i| acc * d + digit(idx, i, n, d));
            psi[kk * dim_r + rr] = *a;
        }
        Ok(Operator::from_fn(d, m, m, |a, b| {
            (0..dim_r)
                .map(|r| psi[a * dim_r + r] * psi[b * dim_r + r].conj())
                .sum()
        }))
    }

    fn check_targets(&self, op: &Operator, qudits: &[usize]) -> Result<Vec<usize>> {
        if !op.is_square() || op.d() != self.d || op.n() != qudits.len() {
            return Err(Error::shape(
                format!("square operator on {} qudits", qudits.len()),
                format!("{}<-{} qudits", op.n_out(), op.n_in()),
            ));
        }
        let mut seen = vec![false; self.n];
        qudits
            .iter()
            .map(|&q| {
                if q == 0 || q > self.n || seen[q - 1] {
                    return Err(Error::QuditOutOfRange {
                        index: q,
                        n: self.n,
                    });
                }
                seen[q - 1] = true;
                Ok(q - 1)
            })
            .collect()
    }
}

impl Amplitudes for StateVector {
    fn shape(&self) -> (usize, usize) {
        (self.amps.len(), 1)
    }

    fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::{embed_local, fourier, pauli, Pauli};

    #[test]
    fn apply_local_matches_embedded_operator() {
        let d = 3;
        let psi = StateVector::new(
            d,
            3,
            (0..27).map(|i| Complex64::new(i as f64, 1.0 - i as f64)).collect(),
        )
        .unwrap();
        let f = fourier(d).unwrap();
        let x = pauli(d, Pauli::X).unwrap();
        let fx = f.tensor(&x).unwrap();
        let full = embed_local(&fx, 2, 3).unwrap();
        let a = full.apply(&psi).unwrap();
        let b = psi.apply_local(&fx, &[2, 3]).unwrap();
        let dev = crate::scalar::max_deviation(a.amps(), b.amps()).unwrap();
        assert!(dev < 1e-12);

        // reversed target order equals conjugating by a swap
        let xf = x.tensor(&f).unwrap();
        let c = psi.apply_local(&xf, &[3, 2]).unwrap();
        let dev = crate::scalar::max_deviation(a.amps(), c.amps()).unwrap();
        assert!(dev < 1e-12);
    }

    #[test]
    fn extract_and_project() {
        let s = StateVector::basis(2, &[1, 0, 1]).unwrap();
        let r = s.extract(&[(2, 0)]).unwrap();
        assert_eq!(r, StateVector::basis(2, &[1, 1]).unwrap());
        assert_eq!(s.project(1, 0).unwrap().norm(), 0.0);
        assert!(s.apply_local(&Operator::identity(2, 1), &[4]).is_err());
    }
}

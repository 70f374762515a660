use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{pow_usize, ChargeVector, Operator, StateVector};
use crate::error::{Error, Result};
use crate::scalar::{q_pow, zeta_pow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(Pauli::X),
            "Y" | "y" => Ok(Pauli::Y),
            "Z" | "z" => Ok(Pauli::Z),
            other => Err(Error::Malformed(format!("unknown Pauli axis '{other}'"))),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        };
        f.write_str(s)
    }
}

fn check_gate_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(())
    }
}

/// Generalized Pauli matrices:
/// `X|k⟩ = |k+1⟩`, `Y|k⟩ = ζ^(1-2k)|k-1⟩`, `Z|k⟩ = q^k|k⟩`.
pub fn pauli(d: usize, which: Pauli) -> Result<Operator> {
    check_gate_dim(d)?;
    let di = d as i64;
    let op = Operator::from_fn(d, 1, 1, |r, c| {
        let (r, k) = (r as i64, c as i64);
        let hit = match which {
            Pauli::X => r == (k + 1).rem_euclid(di),
            Pauli::Y => r == (k - 1).rem_euclid(di),
            Pauli::Z => r == k,
        };
        if !hit {
            return Complex64::new(0.0, 0.0);
        }
        match which {
            Pauli::X => Complex64::new(1.0, 0.0),
            Pauli::Y => zeta_pow(d, 1 - 2 * k),
            Pauli::Z => q_pow(d, k),
        }
    });
    Ok(op)
}

/// Quantum Fourier transform, `F|k⟩ = d^(-1/2) Σ_ℓ q^(kℓ)|ℓ⟩`.
pub fn fourier(d: usize) -> Result<Operator> {
    check_gate_dim(d)?;
    let s = 1.0 / (d as f64).sqrt();
    Ok(Operator::from_fn(d, 1, 1, |r, c| {
        q_pow(d, (r * c) as i64) * s
    }))
}

/// Gaussian matrix, `G|k⟩ = ζ^(k²)|k⟩`.
pub fn gauss(d: usize) -> Result<Operator> {
    check_gate_dim(d)?;
    Ok(Operator::from_fn(d, 1, 1, |r, c| {
        if r == c {
            zeta_pow(d, (c * c) as i64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// `|ℓ, k⟩ ↦ |ℓ, k+ℓ⟩`.
pub fn controlled_adder(d: usize) -> Result<Operator> {
    check_gate_dim(d)?;
    Ok(Operator::from_fn(d, 2, 2, |r, c| {
        let (l, k) = (c / d, c % d);
        if r == l * d + (k + l) % d {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

fn check_state_args(d: usize, n: usize) -> Result<()> {
    check_gate_dim(d)?;
    if n == 0 {
        return Err(Error::Malformed("resource state needs n >= 1".into()));
    }
    Ok(())
}

/// `d^(-1/2) Σ_k |k, k, …, k⟩`.
pub fn ghz_state(d: usize, n: usize) -> Result<StateVector> {
    check_state_args(d, n)?;
    let mut s = StateVector::zeros(d, n);
    let a = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for k in 0..d {
        let idx = (0..n).fold(0, |acc, _| acc * d + k);
        s.amps_mut()[idx] = a;
    }
    Ok(s)
}

/// `d^((1-n)/2) Σ_{|k⃗|=0} |k⃗⟩`: uniform on the zero-total-charge sector.
pub fn max_state(d: usize, n: usize) -> Result<StateVector> {
    check_state_args(d, n)?;
    let mut s = StateVector::zeros(d, n);
    let a = Complex64::new((d as f64).powf((1.0 - n as f64) / 2.0), 0.0);
    for idx in 0..pow_usize(d, n) {
        if ChargeVector::from_index(d, n, idx).total_charge() == 0 {
            s.amps_mut()[idx] = a;
        }
    }
    Ok(s)
}

/// GHZ preparation circuit: `F` on qudit 1, then controlled adders fanning
/// qudit 1 out to the others, starting from `|0…0⟩`.
pub fn ghz_circuit(d: usize, n: usize) -> Result<StateVector> {
    check_state_args(d, n)?;
    let mut s = StateVector::basis(d, &vec![0; n])?;
    s = s.apply_local(&fourier(d)?, &[1])?;
    let add = controlled_adder(d)?;
    for j in 2..=n {
        s = s.apply_local(&add, &[1, j])?;
    }
    Ok(s)
}

/// Resource-state preparation for the X-compressed protocol:
/// `(F⁻¹)^⊗n` applied to the GHZ state.
pub fn prepare_max(d: usize, n: usize) -> Result<StateVector> {
    let mut s = ghz_circuit(d, n)?;
    let finv = fourier(d)?.adjoint();
    for j in 1..=n {
        s = s.apply_local(&finv, &[j])?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::embed_local;
    use crate::scalar::{omega, phase_aligned_deviation, Tolerance};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn qubit_examples() {
        let x = pauli(2, Pauli::X).unwrap();
        assert_eq!(x.data(), &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let z = pauli(2, Pauli::Z).unwrap();
        assert!(z.max_deviation(&Operator::square(2, 1, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]).unwrap()).unwrap() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let f = fourier(2).unwrap();
        let want = Operator::square(2, 1, vec![c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.)]).unwrap();
        assert!(f.max_deviation(&want).unwrap() < 1e-15);
        let g = gauss(2).unwrap();
        let want = Operator::square(2, 1, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 1.)]).unwrap();
        assert!(g.max_deviation(&want).unwrap() < 1e-15);
    }

    #[test]
    fn qutrit_y_on_zero() {
        let y = pauli(3, Pauli::Y).unwrap();
        let out = y.apply(&StateVector::basis(3, &[0]).unwrap()).unwrap();
        let want = StateVector::basis(3, &[2]).unwrap().scale(zeta_pow(3, 1));
        assert!(crate::scalar::max_deviation(out.amps(), want.amps()).unwrap() < 1e-15);
    }

    #[test]
    fn gates_reject_small_dimensions() {
        assert!(matches!(pauli(1, Pauli::X), Err(Error::InvalidDimension(1))));
        assert!(fourier(0).is_err());
        assert!(gauss(1).is_err());
        assert!(ghz_state(1, 2).is_err());
    }

    #[test]
    fn fourier_is_unitary() {
        assert!(fourier(5).unwrap().is_unitary(Tolerance::default()));
    }

    #[test]
    fn resource_state_examples() {
        let s3 = 1.0 / 3f64.sqrt();
        let ghz = ghz_state(3, 2).unwrap();
        for (idx, a) in ghz.amps().iter().enumerate() {
            let want = if idx % 4 == 0 { s3 } else { 0.0 };
            assert!((a - c(want, 0.)).norm() < 1e-15);
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m22 = max_state(2, 2).unwrap();
        assert!(crate::scalar::max_deviation(m22.amps(), &[c(s, 0.), c(0., 0.), c(0., 0.), c(s, 0.)]).unwrap() < 1e-15);
        // |000⟩ + |011⟩ + |101⟩ + |110⟩, halved
        let m23 = max_state(2, 3).unwrap();
        let support = [0b000, 0b011, 0b101, 0b110];
        for (idx, a) in m23.amps().iter().enumerate() {
            let want = if support.contains(&idx) { 0.5 } else { 0.0 };
            assert!((a - c(want, 0.)).norm() < 1e-15);
        }
    }

    #[test]
    fn ghz_circuit_matches_closed_form() {
        for d in 2..=4 {
            for n in 1..=4 {
                let a = ghz_circuit(d, n).unwrap();
                let b = ghz_state(d, n).unwrap();
                assert!(crate::scalar::max_deviation(a.amps(), b.amps()).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn prepare_max_examples() {
        let p = prepare_max(2, 2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(phase_aligned_deviation(p.amps(), &[c(s, 0.), c(0., 0.), c(0., 0.), c(s, 0.)]).unwrap() < 1e-12);
        let p1 = prepare_max(2, 1).unwrap();
        assert!(phase_aligned_deviation(p1.amps(), &[c(1., 0.), c(0., 0.)]).unwrap() < 1e-12);
        let p3 = prepare_max(3, 2).unwrap();
        let m3 = max_state(3, 2).unwrap();
        assert!(phase_aligned_deviation(p3.amps(), m3.amps()).unwrap() < 1e-9);
    }

    #[test]
    fn clifford_relations_small() {
        for d in 2..=5 {
            let x = pauli(d, Pauli::X).unwrap();
            let f = fourier(d).unwrap();
            let g = gauss(d).unwrap();
            let fg3 = f.compose(&g).unwrap().pow(3).unwrap();
            let w = Operator::identity(d, 1).scale(omega(d).unwrap());
            assert!(fg3.max_deviation(&w).unwrap() < 1e-9, "d={d}");
            let fxf = f.compose(&x).unwrap().compose(&f.adjoint()).unwrap();
            assert!(fxf.max_deviation(&pauli(d, Pauli::Z).unwrap()).unwrap() < 1e-9);
        }
        let cz_like = embed_local(&pauli(2, Pauli::Z).unwrap(), 1, 1).unwrap();
        assert_eq!(cz_like, pauli(2, Pauli::Z).unwrap());
    }
}

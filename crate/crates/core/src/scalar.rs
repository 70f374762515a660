//! Roots of unity, the Gauss sum, exact phase bookkeeping and
//! phase-insensitive comparison.
//!
//! Throughout the crate `q = exp(2πi/d)` and `ζ` is the fixed square root of
//! `q` with `ζ^(d²) = 1`:
//!
//! * even `d`: `ζ = exp(iπ/d)`
//! * odd `d`:  `ζ = q^((d+1)/2)`
//!
//! Every phase a planar relation can produce is a power of `ζ`, and every
//! magnitude is a power of `d^(1/4)`, so [`PhaseExponent`] tracks them exactly.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_EPS: f64 = 1e-9;

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(())
    }
}

/// Multiplier `m` such that `ζ^a = exp(iπ·a·m/d)`.
fn zeta_multiplier(d: usize) -> i64 {
    if d % 2 == 0 {
        1
    } else {
        d as i64 + 1
    }
}

/// `ζ^a` as a floating complex number, exact in the exponent reduction.
pub fn zeta_pow(d: usize, a: i64) -> Complex64 {
    let two_d = 2 * d as i64;
    let t = (a.rem_euclid(two_d) * zeta_multiplier(d)).rem_euclid(two_d);
    Complex64::from_polar(1.0, PI * t as f64 / d as f64)
}

/// `q^a = ζ^(2a)`.
pub fn q_pow(d: usize, a: i64) -> Complex64 {
    zeta_pow(d, 2 * a)
}

pub fn zeta(d: usize) -> Result<Complex64> {
    check_dim(d)?;
    Ok(zeta_pow(d, 1))
}

pub fn q(d: usize) -> Result<Complex64> {
    check_dim(d)?;
    Ok(q_pow(d, 1))
}

/// Normalized Gauss sum `ω = d^(-1/2) Σ_j ζ^(j²)`, a unit complex number.
pub fn omega(d: usize) -> Result<Complex64> {
    check_dim(d)?;
    let sum: Complex64 = (0..d as i64).map(|j| zeta_pow(d, j * j)).sum();
    Ok(sum / (d as f64).sqrt())
}

/// Principal square root of `ω`, argument in `(-π/2, π/2]`.
pub fn sqrt_omega(d: usize) -> Result<Complex64> {
    let w = omega(d)?;
    let mut r = w.sqrt();
    // num-complex returns arg in (-π/2, π/2]; pin the boundary case ω = -1.
    if (r.re).abs() < 1e-15 && r.im < 0.0 {
        r = -r;
    }
    Ok(r)
}

/// Exact scalar `ζ^a · d^(b/4)` or zero.
///
/// `a` is kept reduced modulo `d²`. Magnitudes are tracked in quarter powers
/// of `d` because a single cap carries `d^(1/4)`; [`PhaseExponent::sqrtd_exp`]
/// reports the exponent of `√d` when it is integral.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhaseExponent {
    d: u32,
    zeta_exp: u64,
    root4_exp: i32,
    zero: bool,
}

impl PhaseExponent {
    pub fn one(d: usize) -> Self {
        Self::new(d, 0, 0)
    }

    pub fn zero(d: usize) -> Self {
        PhaseExponent {
            d: d as u32,
            zeta_exp: 0,
            root4_exp: 0,
            zero: true,
        }
    }

    /// `ζ^zeta_exp · d^(root4_exp/4)`.
    pub fn new(d: usize, zeta_exp: i64, root4_exp: i32) -> Self {
        assert!(d >= 1, "dimension must be positive");
        let m = (d * d) as i64;
        PhaseExponent {
            d: d as u32,
            zeta_exp: zeta_exp.rem_euclid(m) as u64,
            root4_exp,
            zero: false,
        }
    }

    pub fn zeta(d: usize, a: i64) -> Self {
        Self::new(d, a, 0)
    }

    pub fn q(d: usize, a: i64) -> Self {
        Self::new(d, 2 * a, 0)
    }

    /// `d^(b/2)`.
    pub fn sqrt_d(d: usize, b: i32) -> Self {
        Self::new(d, 0, 2 * b)
    }

    /// `d^(b/4)`.
    pub fn root4_d(d: usize, b: i32) -> Self {
        Self::new(d, 0, b)
    }

    pub fn dim(&self) -> usize {
        self.d as usize
    }

    pub fn zeta_exp(&self) -> u64 {
        self.zeta_exp
    }

    pub fn root4_exp(&self) -> i32 {
        self.root4_exp
    }

    /// Exponent of `d^(1/2)`, when the magnitude is an integral power of `√d`.
    pub fn sqrtd_exp(&self) -> Option<i32> {
        (self.root4_exp % 2 == 0).then_some(self.root4_exp / 2)
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn inv(&self) -> Self {
        assert!(!self.zero, "zero has no inverse");
        Self::new(self.dim(), -(self.zeta_exp as i64), -self.root4_exp)
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        if self.zero {
            return *self;
        }
        Self::new(self.dim(), -(self.zeta_exp as i64), self.root4_exp)
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.zero {
            return Complex64::new(0.0, 0.0);
        }
        let mag = (self.d as f64).powf(self.root4_exp as f64 / 4.0);
        zeta_pow(self.dim(), self.zeta_exp as i64) * mag
    }
}

impl Mul for PhaseExponent {
    type Output = PhaseExponent;

    fn mul(self, rhs: PhaseExponent) -> PhaseExponent {
        assert_eq!(self.d, rhs.d, "phase exponents over different dimensions");
        if self.zero || rhs.zero {
            return PhaseExponent::zero(self.dim());
        }
        PhaseExponent::new(
            self.dim(),
            self.zeta_exp as i64 + rhs.zeta_exp as i64,
            self.root4_exp + rhs.root4_exp,
        )
    }
}

impl fmt::Debug for PhaseExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            return write!(f, "0");
        }
        write!(f, "ζ^{}·d^({}/4) [d={}]", self.zeta_exp, self.root4_exp, self.d)
    }
}

/// Comparison tolerance for floating amplitudes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    eps: f64,
}

impl Tolerance {
    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_finite() && eps > 0.0 {
            Ok(Tolerance { eps })
        } else {
            Err(Error::InvalidTolerance(eps))
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: DEFAULT_EPS }
    }
}

/// Anything laid out as a flat array of complex amplitudes with a shape.
pub trait Amplitudes {
    fn shape(&self) -> (usize, usize);
    fn amplitudes(&self) -> &[Complex64];
}

/// `max |a - c·b|` after aligning the phase on the largest entry of `b`.
///
/// `c` is the unit scalar that makes the largest-magnitude entry of `b` point
/// the same way as the matching entry of `a`.
pub fn phase_aligned_deviation(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::shape(a.len(), b.len()));
    }
    let Some((imax, bmax)) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))
    else {
        return Ok(0.0);
    };
    let c = if bmax.norm() == 0.0 || a[imax].norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        let r = a[imax] / bmax;
        r / r.norm()
    };
    Ok(a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - c * y).norm())
        .fold(0.0, f64::max))
}

/// `max |a - b|` entrywise.
pub fn max_deviation(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::shape(a.len(), b.len()));
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

pub fn equal_up_to_global_phase<A: Amplitudes + ?Sized, B: Amplitudes + ?Sized>(
    a: &A,
    b: &B,
    tol: Tolerance,
) -> Result<bool> {
    if a.shape() != b.shape() {
        return Err(Error::shape(
            format!("{:?}", a.shape()),
            format!("{:?}", b.shape()),
        ));
    }
    Ok(phase_aligned_deviation(a.amplitudes(), b.amplitudes())? <= tol.eps())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, eps: f64) -> bool {
        (a - b).norm() <= eps
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(zeta(1).unwrap(), Complex64::new(1.0, 0.0));
        assert!(close(zeta(2).unwrap(), Complex64::new(0.0, 1.0), 1e-15));
        let z3 = zeta(3).unwrap();
        assert!(close(z3, Complex64::from_polar(1.0, 4.0 * PI / 3.0), 1e-15));
        assert!(matches!(zeta(0), Err(Error::InvalidDimension(0))));
    }

    #[test]
    fn zeta_squares_to_q_and_has_order_dividing_d_squared() {
        for d in 1..=16 {
            let z = zeta(d).unwrap();
            let q = Complex64::from_polar(1.0, 2.0 * PI / d as f64);
            assert!(close(z * z, q, 1e-12), "d={d}");
            assert!(close(z.powu((d * d) as u32), Complex64::new(1.0, 0.0), 1e-12));
            // exact side: ζ^2 and q^1 are the same exponent
            assert_eq!(PhaseExponent::zeta(d, 2), PhaseExponent::q(d, 1));
            assert_eq!(PhaseExponent::zeta(d, (d * d) as i64), PhaseExponent::one(d));
        }
    }

    #[test]
    fn omega_examples() {
        assert!(close(omega(1).unwrap(), Complex64::new(1.0, 0.0), 1e-15));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(omega(2).unwrap(), Complex64::new(s, s), 1e-15));
        for d in 1..=16 {
            assert!((omega(d).unwrap().norm() - 1.0).abs() < 1e-12, "d={d}");
            let r = sqrt_omega(d).unwrap();
            assert!(close(r * r, omega(d).unwrap(), 1e-12));
            assert!(r.re > -1e-15);
        }
    }

    #[test]
    fn phase_exponent_algebra() {
        let d = 5;
        let a = PhaseExponent::new(d, 7, 3);
        let b = PhaseExponent::new(d, 21, -1);
        let c = PhaseExponent::new(d, -4, 2);
        assert_eq!((a * b) * c, a * (b * c));
        assert_eq!(a * b, b * a);
        assert!(close((a * b).to_complex(), a.to_complex() * b.to_complex(), 1e-12));
        assert!((a * PhaseExponent::zero(d)).is_zero());
        assert_eq!(a * a.inv(), PhaseExponent::one(d));
        assert_eq!(PhaseExponent::sqrt_d(d, 1).sqrtd_exp(), Some(1));
        assert_eq!(PhaseExponent::root4_d(d, 1).sqrtd_exp(), None);
        assert!(PhaseExponent::new(d, -1, 0).zeta_exp() < 25);
    }

    struct V(Vec<Complex64>);
    impl Amplitudes for V {
        fn shape(&self) -> (usize, usize) {
            (self.0.len(), 1)
        }
        fn amplitudes(&self) -> &[Complex64] {
            &self.0
        }
    }

    #[test]
    fn global_phase_comparison() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = V(vec![Complex64::new(s, 0.0), Complex64::new(0.0, s)]);
        let iv = V(v.0.iter().map(|x| x * Complex64::i()).collect());
        let two_v = V(v.0.iter().map(|x| x * 2.0).collect());
        let tol = Tolerance::default();
        assert!(equal_up_to_global_phase(&v, &iv, tol).unwrap());
        assert!(!equal_up_to_global_phase(&v, &two_v, tol).unwrap());
        let short = V(vec![Complex64::new(1.0, 0.0)]);
        assert!(equal_up_to_global_phase(&v, &short, tol).is_err());
    }

    #[test]
    fn tolerance_must_be_positive() {
        assert!(Tolerance::new(0.0).is_err());
        assert!(Tolerance::new(-1.0).is_err());
        assert_eq!(Tolerance::default().eps(), 1e-9);
    }
}

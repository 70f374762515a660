use std::fmt;

use num_complex::Complex64;

use super::{digit, pow_usize, StateVector};
use crate::error::{Error, Result};
use crate::scalar::{max_deviation, Amplitudes, Tolerance};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Dense linear map `(C^d)^⊗n_in → (C^d)^⊗n_out`, row-major, row = output
/// index, column = input index. Square operators have `n_out == n_in`.
#[derive(Clone, PartialEq)]
pub struct Operator {
    d: usize,
    n_out: usize,
    n_in: usize,
    data: Vec<Complex64>,
}

impl Operator {
    pub fn new(d: usize, n_out: usize, n_in: usize, data: Vec<Complex64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(d));
        }
        let expected = pow_usize(d, n_out) * pow_usize(d, n_in);
        if data.len() != expected {
            return Err(Error::shape(expected, data.len()));
        }
        Ok(Operator {
            d,
            n_out,
            n_in,
            data,
        })
    }

    pub fn square(d: usize, n: usize, data: Vec<Complex64>) -> Result<Self> {
        Self::new(d, n, n, data)
    }

    pub fn zeros(d: usize, n_out: usize, n_in: usize) -> Self {
        let len = pow_usize(d, n_out) * pow_usize(d, n_in);
        Operator {
            d,
            n_out,
            n_in,
            data: vec![ZERO; len],
        }
    }

    pub fn identity(d: usize, n: usize) -> Self {
        let mut op = Self::zeros(d, n, n);
        for i in 0..op.rows() {
            op.set(i, i, ONE);
        }
        op
    }

    pub fn from_fn(
        d: usize,
        n_out: usize,
        n_in: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let mut op = Self::zeros(d, n_out, n_in);
        let cols = op.cols();
        for (idx, v) in op.data.iter_mut().enumerate() {
            *v = f(idx / cols, idx % cols);
        }
        op
    }

    /// Builds an operator column by column from the images of basis states.
    pub fn from_columns(d: usize, n_out: usize, columns: &[StateVector]) -> Result<Self> {
        let n_in = column_qudits(d, columns.len())?;
        let mut op = Self::zeros(d, n_out, n_in);
        for (c, col) in columns.iter().enumerate() {
            if col.n() != n_out || col.d() != d {
                return Err(Error::shape(
                    format!("column on {n_out} qudits"),
                    format!("column on {} qudits", col.n()),
                ));
            }
            for (r, a) in col.amps().iter().enumerate() {
                op.set(r, c, *a);
            }
        }
        Ok(op)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Qudit count of a square operator (the output count otherwise).
    pub fn n(&self) -> usize {
        self.n_out
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn is_square(&self) -> bool {
        self.n_out == self.n_in
    }

    pub fn rows(&self) -> usize {
        pow_usize(self.d, self.n_out)
    }

    pub fn cols(&self) -> usize {
        pow_usize(self.d, self.n_in)
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols() + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        let cols = self.cols();
        self.data[r * cols + c] = v;
    }

    pub fn column(&self, c: usize) -> StateVector {
        let amps = (0..self.rows()).map(|r| self.get(r, c)).collect();
        StateVector::from_amps_unchecked(self.d, self.n_out, amps)
    }

    /// `self · rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &Operator) -> Result<Operator> {
        if self.d != rhs.d || self.n_in != rhs.n_out {
            return Err(Error::shape(
                format!("right factor with {} output qudits", self.n_in),
                format!("{} output qudits", rhs.n_out),
            ));
        }
        let (m, k, n) = (self.rows(), self.cols(), rhs.cols());
        let mut out = Operator::zeros(self.d, self.n_out, rhs.n_in);
        for i in 0..m {
            let row = &self.data[i * k..(i + 1) * k];
            let dst = &mut out.data[i * n..(i + 1) * n];
            for (l, a) in row.iter().enumerate() {
                if *a == ZERO {
                    continue;
                }
                let src = &rhs.data[l * n..(l + 1) * n];
                for (o, b) in dst.iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product, `self` on the leading qudits.
    pub fn tensor(&self, rhs: &Operator) -> Result<Operator> {
        if self.d != rhs.d {
            return Err(Error::shape(format!("d={}", self.d), format!("d={}", rhs.d)));
        }
        let (rr, rc) = (rhs.rows(), rhs.cols());
        Ok(Operator::from_fn(
            self.d,
            self.n_out + rhs.n_out,
            self.n_in + rhs.n_in,
            |r, c| self.get(r / rr, c / rc) * rhs.get(r % rr, c % rc),
        ))
    }

    pub fn adjoint(&self) -> Operator {
        Operator::from_fn(self.d, self.n_in, self.n_out, |r, c| self.get(c, r).conj())
    }

    pub fn scale(&self, s: Complex64) -> Operator {
        Operator {
            data: self.data.iter().map(|x| x * s).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, rhs: &Operator) -> Result<Operator> {
        self.check_same_shape(rhs)?;
        Ok(Operator {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
            ..self.clone()
        })
    }

    pub fn sub(&self, rhs: &Operator) -> Result<Operator> {
        self.check_same_shape(rhs)?;
        Ok(Operator {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
            ..self.clone()
        })
    }

    pub fn commutator(&self, rhs: &Operator) -> Result<Operator> {
        self.compose(rhs)?.sub(&rhs.compose(self)?)
    }

    pub fn pow(&self, k: u32) -> Result<Operator> {
        if !self.is_square() {
            return Err(Error::shape("square operator", self.shape_string()));
        }
        let mut acc = Operator::identity(self.d, self.n_out);
        for _ in 0..k {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn max_deviation(&self, rhs: &Operator) -> Result<f64> {
        self.check_same_shape(rhs)?;
        max_deviation(&self.data, &rhs.data)
    }

    /// `max |U·U† - I|`.
    pub fn unitarity_deviation(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::shape("square operator", self.shape_string()));
        }
        self.compose(&self.adjoint())?
            .max_deviation(&Operator::identity(self.d, self.n_out))
    }

    pub fn is_unitary(&self, tol: Tolerance) -> bool {
        self.unitarity_deviation()
            .map(|dev| dev <= tol.eps())
            .unwrap_or(false)
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.d() != self.d || state.n() != self.n_in {
            return Err(Error::shape(
                format!("state on {} qudits", self.n_in),
                format!("state on {} qudits", state.n()),
            ));
        }
        let k = self.cols();
        let amps = (0..self.rows())
            .map(|r| {
                self.data[r * k..(r + 1) * k]
                    .iter()
                    .zip(state.amps())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        Ok(StateVector::from_amps_unchecked(self.d, self.n_out, amps))
    }

    /// Reorders the qudits of a square operator: qudit `perm[i]` of `self`
    /// becomes qudit `i` of the result (0-based).
    pub fn permute_qudits(&self, perm: &[usize]) -> Result<Operator> {
        let n = self.n_out;
        if !self.is_square() || perm.len() != n {
            return Err(Error::shape(format!("permutation of {n}"), perm.len()));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Malformed(format!("not a permutation: {perm:?}")));
            }
        }
        let d = self.d;
        let map = |idx: usize| -> usize {
            // digit i of the new index is digit perm[i] of the old one
            let mut old = vec![0usize; n];
            for (i, &p) in perm.iter().enumerate() {
                old[p] = digit(idx, i, n, d);
            }
            old.iter().fold(0, |acc, &x| acc * d + x)
        };
        let src: Vec<usize> = (0..self.rows()).map(map).collect();
        Ok(Operator::from_fn(d, n, n, |r, c| self.get(src[r], src[c])))
    }

    fn check_same_shape(&self, rhs: &Operator) -> Result<()> {
        if self.d != rhs.d || self.n_out != rhs.n_out || self.n_in != rhs.n_in {
            return Err(Error::shape(self.shape_string(), rhs.shape_string()));
        }
        Ok(())
    }

    fn shape_string(&self) -> String {
        format!("d={} {}<-{}", self.d, self.n_out, self.n_in)
    }
}

fn column_qudits(d: usize, cols: usize) -> Result<usize> {
    let mut n = 0;
    let mut p = 1;
    while p < cols {
        p *= d;
        n += 1;
    }
    if p != cols {
        return Err(Error::shape(format!("a power of {d} columns"), cols));
    }
    Ok(n)
}

impl Amplitudes for Operator {
    fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    fn amplitudes(&self) -> &[Complex64] {
        &self.data
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Operator(d={}, {}<-{})", self.d, self.n_out, self.n_in)?;
        for r in 0..self.rows().min(16) {
            let row: Vec<String> = (0..self.cols().min(16))
                .map(|c| {
                    let v = self.get(r, c);
                    format!("{:+.3}{:+.3}i", v.re, v.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Places a local operator on qudits `at..at+m-1` (1-based) of an n-qudit
/// register, identity elsewhere.
pub fn embed_local(op: &Operator, at: usize, n: usize) -> Result<Operator> {
    if !op.is_square() {
        return Err(Error::shape("square local operator", op.shape_string()));
    }
    let m = op.n();
    if at == 0 || at + m - 1 > n {
        return Err(Error::QuditOutOfRange { index: at, n });
    }
    let d = op.d();
    Operator::identity(d, at - 1)
        .tensor(op)?
        .tensor(&Operator::identity(d, n - (at - 1 + m)))
}

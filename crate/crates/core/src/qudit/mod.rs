//! Dense qudit states and operators, the generalized Pauli / Clifford
//! matrices and the GHZ and Max resource states.

mod charge;
mod gates;
pub mod io;
mod operator;
mod state;

pub use charge::ChargeVector;
pub use gates::{
    controlled_adder, fourier, gauss, ghz_circuit, ghz_state, max_state, pauli, prepare_max, Pauli,
};
pub use operator::{embed_local, Operator};
pub use state::StateVector;

pub(crate) fn pow_usize(d: usize, n: usize) -> usize {
    d.pow(n as u32)
}

/// Digit of qudit `i` (0-based, most significant first) in a big-endian index.
#[inline]
pub(crate) fn digit(idx: usize, i: usize, n: usize, d: usize) -> usize {
    (idx / pow_usize(d, n - 1 - i)) % d
}

//! Matrix semantics through a Jordan–Wigner representation.
//!
//! Strings `2j-1` and `2j` live on qudit `j`. The charge operators are
//!
//! ```text
//! c_(2j-1) = Y_j⁻¹ · Z_(j+1) ⋯ Z_m
//! c_(2j)   = X_j   · Z_(j+1) ⋯ Z_m
//! ```
//!
//! so that `c_s c_t = q c_t c_s` for `s < t`, `c_s^d = 1`, and on one qudit
//! `X = c_2`, `Y = c_1⁻¹`, `Z = ζ c_1 c_2⁻¹`. Caps are the isometries
//! intertwining these operators; cups are their adjoints.

use num_complex::Complex64;

use super::{Diagram, Generator};
use crate::error::Result;
use crate::qudit::Operator;
use crate::scalar::{sqrt_omega, zeta_pow};

type Column = Vec<(usize, Complex64)>;

fn decode(d: usize, m: usize, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; m];
    for slot in out.iter_mut().rev() {
        *slot = idx % d;
        idx /= d;
    }
    out
}

fn encode(d: usize, digits: &[usize]) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

/// Applies `c_s^k` to a basis label in place; returns the `ζ` exponent.
fn apply_charge(d: usize, digits: &mut [usize], s: usize, k: i64) -> i64 {
    let kr = k.rem_euclid(d as i64);
    if kr == 0 {
        return 0;
    }
    let j = (s - 1) / 2;
    let tail: usize = digits[j + 1..].iter().sum();
    let mut phase = 2 * kr * tail as i64;
    let m = digits[j] as i64;
    if s % 2 == 1 {
        // Y⁻¹|m⟩ = ζ^(1+2m)|m+1⟩
        phase += kr * kr + 2 * m * kr;
    }
    digits[j] = ((m + kr) % d as i64) as usize;
    phase
}

fn charge_column(d: usize, m: usize, idx: usize, charges: &[(usize, i64)], coeff: Complex64) -> (usize, Complex64) {
    let mut digits = decode(d, m, idx);
    let mut phase = 0i64;
    for &(s, k) in charges {
        phase += apply_charge(d, &mut digits, s, k);
    }
    (encode(d, &digits), coeff * zeta_pow(d, phase))
}

/// Column lists of one slice on a width-`w` register, plus the output width.
fn slice_columns(d: usize, w: usize, g: &Generator) -> Result<(usize, Vec<Column>)> {
    let m = w / 2;
    let dim = d.pow(m as u32);
    let one = Complex64::new(1.0, 0.0);
    let r4 = (d as f64).powf(0.25);
    let cols: Vec<Column> = match g {
        Generator::Strand { .. } => (0..dim).map(|i| vec![(i, one)]).collect(),
        Generator::Charge { pos, k } => (0..dim)
            .map(|i| vec![charge_column(d, m, i, &[(*pos, *k)], one)])
            .collect(),
        Generator::MultiCharge { items } => {
            let mut twist = 0i64;
            for (a, x) in items.iter().enumerate() {
                for y in &items[a + 1..] {
                    twist += x.k * y.k;
                }
            }
            let coeff = zeta_pow(d, twist);
            let seq: Vec<(usize, i64)> = items.iter().map(|it| (it.pos, it.k)).collect();
            (0..dim)
                .map(|i| vec![charge_column(d, m, i, &seq, coeff)])
                .collect()
        }
        Generator::BraidPos { pos } | Generator::BraidNeg { pos } => {
            let p = *pos;
            let sw = sqrt_omega(d)?;
            let norm = (d as f64).sqrt();
            let positive = matches!(g, Generator::BraidPos { .. });
            let coeff = if positive { 1.0 / (sw * norm) } else { sw / norm };
            (0..dim)
                .map(|i| {
                    (0..d as i64)
                        .map(|k| {
                            let seq = if positive {
                                [(p, k), (p + 1, -k)]
                            } else {
                                [(p + 1, k), (p, -k)]
                            };
                            charge_column(d, m, i, &seq, coeff)
                        })
                        .collect()
                })
                .collect()
        }
        Generator::Cap { pos } => {
            let slot = (pos - 1) / 2;
            (0..dim)
                .map(|i| {
                    let digits = decode(d, m, i);
                    if pos % 2 == 1 {
                        let mut out = digits.clone();
                        out.insert(slot, 0);
                        vec![(encode(d, &out), Complex64::new(r4, 0.0))]
                    } else {
                        let a = digits[slot];
                        (0..d)
                            .map(|k| {
                                let mut out = digits.clone();
                                out[slot] = k;
                                out.insert(slot + 1, (a + d - k) % d);
                                (encode(d, &out), Complex64::new(1.0 / r4, 0.0))
                            })
                            .collect()
                    }
                })
                .collect()
        }
        Generator::Cup { pos } => {
            let slot = (pos - 1) / 2;
            (0..dim)
                .map(|i| {
                    let mut digits = decode(d, m, i);
                    if pos % 2 == 1 {
                        if digits[slot] != 0 {
                            return Vec::new();
                        }
                        digits.remove(slot);
                        vec![(encode(d, &digits), Complex64::new(r4, 0.0))]
                    } else {
                        let y = digits.remove(slot + 1);
                        digits[slot] = (digits[slot] + y) % d;
                        vec![(encode(d, &digits), Complex64::new(1.0 / r4, 0.0))]
                    }
                })
                .collect()
        }
    };
    let w_out = match g {
        Generator::Cap { .. } => w + 2,
        Generator::Cup { .. } => w - 2,
        _ => w,
    };
    Ok((w_out, cols))
}

/// Dense matrix of a diagram in the qudit basis, rows indexed by the bottom
/// boundary and columns by the top boundary.
pub fn evaluate_dense(diag: &Diagram) -> Result<Operator> {
    let d = diag.d();
    let n_cols = d.pow(diag.n_in() as u32);
    let mut w = diag.top();
    // row-major, rows = current register
    let mut cur = Operator::identity(d, diag.n_in()).data().to_vec();
    for g in diag.slices() {
        let (w_out, cols) = slice_columns(d, w, g)?;
        let rows_out = d.pow((w_out / 2) as u32);
        let mut next = vec![Complex64::new(0.0, 0.0); rows_out * n_cols];
        for (i, col) in cols.iter().enumerate() {
            let src = &cur[i * n_cols..(i + 1) * n_cols];
            if src.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
                continue;
            }
            for &(o, c) in col {
                let dst = &mut next[o * n_cols..(o + 1) * n_cols];
                for (x, y) in dst.iter_mut().zip(src) {
                    *x += c * y;
                }
            }
        }
        cur = next;
        w = w_out;
    }
    let p = diag.prefactor().to_complex();
    cur.iter_mut().for_each(|z| *z *= p);
    Operator::new(d, w / 2, diag.n_in(), cur)
}

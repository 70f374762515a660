//! Compressed transformations: operators commuting with a Pauli on one
//! designated qudit, and their controlled / Pauli-expanded normal forms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qudit::{embed_local, fourier, pauli, Operator, Pauli};
use crate::scalar::{q_pow, DEFAULT_EPS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Compressed,
    NotCompressed,
    Indeterminate,
}

/// Commutator norms are compared relative to `‖T‖_max`: at or below `pass`
/// is compressed, above `fail` is not, anything between is indeterminate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub pass: f64,
    pub fail: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            pass: DEFAULT_EPS,
            fail: 1e-6,
        }
    }
}

impl Thresholds {
    pub fn with_pass(pass: f64) -> Result<Self> {
        if !(pass.is_finite() && pass > 0.0) {
            return Err(Error::InvalidTolerance(pass));
        }
        Ok(Thresholds {
            pass,
            fail: pass.max(1e-6),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CommutatorCheck {
    pub norm: f64,
    pub scale: f64,
    pub verdict: Verdict,
}

fn scale_of(t: &Operator) -> f64 {
    t.max_norm().max(f64::MIN_POSITIVE)
}

fn check_index(t: &Operator, j: usize) -> Result<()> {
    if !t.is_square() {
        return Err(Error::shape("square operator", format!("{}<-{}", t.n_out(), t.n_in())));
    }
    if j == 0 || j > t.n() {
        return Err(Error::QuditOutOfRange { index: j, n: t.n() });
    }
    Ok(())
}

/// `‖[T, P_j]‖_max` and the resulting verdict.
pub fn commutator_check(t: &Operator, j: usize, axis: Pauli, th: Thresholds) -> Result<CommutatorCheck> {
    check_index(t, j)?;
    let p = embed_local(&pauli(t.d(), axis)?, j, t.n())?;
    let norm = t.commutator(&p)?.max_norm();
    let scale = scale_of(t);
    let verdict = if norm <= th.pass * scale {
        Verdict::Compressed
    } else if norm > th.fail * scale {
        Verdict::NotCompressed
    } else {
        Verdict::Indeterminate
    };
    Ok(CommutatorCheck {
        norm,
        scale,
        verdict,
    })
}

pub fn is_compressed(t: &Operator, j: usize, axis: Pauli) -> Result<bool> {
    Ok(commutator_check(t, j, axis, Thresholds::default())?.verdict == Verdict::Compressed)
}

/// Qudit order with `j` (1-based) moved to the front, as a permutation for
/// [`Operator::permute_qudits`].
fn front_perm(n: usize, j: usize) -> Vec<usize> {
    std::iter::once(j - 1)
        .chain((0..n).filter(|&i| i != j - 1))
        .collect()
}

/// Inverse of [`front_perm`].
fn back_perm(n: usize, j: usize) -> Vec<usize> {
    (0..n)
        .map(|i| match i.cmp(&(j - 1)) {
            std::cmp::Ordering::Less => i + 1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => i,
        })
        .collect()
}

/// `a` on qudit `j` tensored with `rest` on the other qudits, in order.
pub fn local_tensor(a: &Operator, j: usize, rest: &Operator) -> Result<Operator> {
    let n = rest.n() + 1;
    if j == 0 || j > n {
        return Err(Error::QuditOutOfRange { index: j, n });
    }
    a.tensor(rest)?.permute_qudits(&back_perm(n, j))
}

/// `T = Σ_ℓ |ℓ⟩⟨ℓ|_j ⊗ T(ℓ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlledDecomposition {
    pub control_qudit: usize,
    pub blocks: Vec<Operator>,
}

impl ControlledDecomposition {
    pub fn reassemble(&self) -> Result<Operator> {
        let n = self.blocks.first().map(|b| b.n() + 1).unwrap_or(1);
        assemble_controlled(&self.blocks, self.control_qudit, n)
    }
}

/// `T = Σ_ℓ X_j^ℓ ⊗ T'(ℓ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct XDecomposition {
    pub qudit: usize,
    pub components: Vec<Operator>,
}

impl XDecomposition {
    pub fn reassemble(&self) -> Result<Operator> {
        pauli_sum(Pauli::X, self.qudit, &self.components)
    }
}

/// `Σ_ℓ P_j^ℓ ⊗ C(ℓ)`.
pub fn pauli_sum(axis: Pauli, j: usize, components: &[Operator]) -> Result<Operator> {
    let first = components
        .first()
        .ok_or_else(|| Error::shape("d components", 0))?;
    let d = first.d();
    if components.len() != d {
        return Err(Error::shape(format!("{d} components"), components.len()));
    }
    let p = pauli(d, axis)?;
    let mut acc = Operator::zeros(d, first.n() + 1, first.n() + 1);
    for (l, c) in components.iter().enumerate() {
        acc = acc.add(&local_tensor(&p.pow(l as u32)?, j, c)?)?;
    }
    Ok(acc)
}

/// Control on qudit `j` of an `n`-qudit register.
pub fn assemble_controlled(blocks: &[Operator], j: usize, n: usize) -> Result<Operator> {
    let first = blocks.first().ok_or_else(|| Error::shape("d blocks", 0))?;
    let d = first.d();
    if blocks.len() != d {
        return Err(Error::shape(format!("{d} blocks"), blocks.len()));
    }
    if n == 0 || j == 0 || j > n {
        return Err(Error::QuditOutOfRange { index: j, n });
    }
    for b in blocks {
        if b.d() != d || !b.is_square() || b.n() != n - 1 {
            return Err(Error::shape(
                format!("square block on {} qudits", n - 1),
                format!("{}<-{} qudits", b.n_out(), b.n_in()),
            ));
        }
    }
    let m = d.pow((n - 1) as u32);
    let front = Operator::from_fn(d, n, n, |r, c| {
        if r / m == c / m {
            blocks[r / m].get(r % m, c % m)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    front.permute_qudits(&back_perm(n, j))
}

pub fn controlled_blocks(t: &Operator, j: usize) -> Result<ControlledDecomposition> {
    controlled_blocks_with(t, j, Thresholds::default())
}

pub fn controlled_blocks_with(t: &Operator, j: usize, th: Thresholds) -> Result<ControlledDecomposition> {
    check_index(t, j)?;
    let (d, n) = (t.d(), t.n());
    let front = t.permute_qudits(&front_perm(n, j))?;
    let m = d.pow((n - 1) as u32);
    let mut off = 0.0f64;
    for r in 0..front.rows() {
        for c in 0..front.cols() {
            if r / m != c / m {
                off = off.max(front.get(r, c).norm());
            }
        }
    }
    if off > th.pass * scale_of(t) {
        return Err(Error::NotBlockDiagonal { qudit: j, norm: off });
    }
    let blocks = (0..d)
        .map(|l| Operator::from_fn(d, n - 1, n - 1, |r, c| front.get(l * m + r, l * m + c)))
        .collect();
    Ok(ControlledDecomposition {
        control_qudit: j,
        blocks,
    })
}

/// Inverse discrete Fourier transform of blocks:
/// `C'(ℓ) = (1/d) Σ_m q^(-mℓ) C(m)`.
fn fourier_of_blocks(blocks: &[Operator]) -> Result<Vec<Operator>> {
    let d = blocks.len();
    let b0 = &blocks[0];
    (0..d)
        .map(|l| {
            let mut acc = Operator::zeros(b0.d(), b0.n(), b0.n());
            for (m, b) in blocks.iter().enumerate() {
                let w = q_pow(d, -((m * l) as i64)) / d as f64;
                acc = acc.add(&b.scale(w))?;
            }
            Ok(acc)
        })
        .collect()
}

/// `T = Σ_ℓ Z_j^ℓ ⊗ T''(ℓ)` for a controlled `T`.
pub fn z_components(t: &Operator, j: usize) -> Result<Vec<Operator>> {
    fourier_of_blocks(&controlled_blocks(t, j)?.blocks)
}

pub fn x_components(t: &Operator, j: usize) -> Result<XDecomposition> {
    x_components_with(t, j, Thresholds::default())
}

pub fn x_components_with(t: &Operator, j: usize, th: Thresholds) -> Result<XDecomposition> {
    let check = commutator_check(t, j, Pauli::X, th)?;
    if check.verdict != Verdict::Compressed {
        return Err(Error::NotXCompressed {
            qudit: j,
            norm: check.norm,
        });
    }
    // F X F⁻¹ = Z turns an X-compressed operator into a controlled one
    let f = embed_local(&fourier(t.d())?, j, t.n())?;
    let c = f.compose(t)?.compose(&f.adjoint())?;
    let blocks = controlled_blocks_with(&c, j, th)?.blocks;
    Ok(XDecomposition {
        qudit: j,
        components: fourier_of_blocks(&blocks)?,
    })
}

/// Checks `T' = U_j T V_j` with unitary `U`, `V` and `T` controlled on `j`.
pub fn verify_compressed_witness(
    tp: &Operator,
    t: &Operator,
    u: &Operator,
    v: &Operator,
    j: usize,
) -> Result<bool> {
    check_index(t, j)?;
    if tp.d() != t.d() || tp.n_out() != t.n_out() || tp.n_in() != t.n_in() {
        return Err(Error::shape(format!("{} qudits", t.n()), format!("{} qudits", tp.n())));
    }
    for w in [u, v] {
        if w.d() != t.d() || !w.is_square() || w.n() != 1 {
            return Err(Error::shape("single-qudit witness", format!("{}<-{}", w.n_out(), w.n_in())));
        }
        let dev = w.unitarity_deviation()?;
        if dev > DEFAULT_EPS {
            return Err(Error::NonUnitary(dev));
        }
    }
    let uj = embed_local(u, j, t.n())?;
    let vj = embed_local(v, j, t.n())?;
    let dressed = uj.compose(t)?.compose(&vj)?;
    let close = dressed.max_deviation(tp)? <= DEFAULT_EPS * scale_of(tp);
    Ok(close && is_compressed(t, j, Pauli::Z)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::gauss;

    fn cnot(d: usize) -> Operator {
        let x = pauli(d, Pauli::X).unwrap();
        let blocks: Vec<Operator> = (0..d).map(|l| x.pow(l as u32).unwrap()).collect();
        assemble_controlled(&blocks, 1, 2).unwrap()
    }

    fn swap(d: usize) -> Operator {
        Operator::from_fn(d, 2, 2, |r, c| {
            let hit = r == (c % d) * d + c / d;
            Complex64::new(if hit { 1.0 } else { 0.0 }, 0.0)
        })
    }

    #[test]
    fn predicate_examples() {
        let c = cnot(2);
        assert!(is_compressed(&c, 1, Pauli::Z).unwrap());
        let x = pauli(2, Pauli::X).unwrap();
        let xi = embed_local(&x, 1, 2).unwrap();
        assert!(is_compressed(&xi, 1, Pauli::X).unwrap());
        let fi = embed_local(&fourier(2).unwrap(), 1, 2).unwrap();
        assert!(!is_compressed(&fi, 1, Pauli::Z).unwrap());
        assert!(matches!(
            is_compressed(&c, 3, Pauli::Z),
            Err(Error::QuditOutOfRange { index: 3, n: 2 })
        ));
    }

    #[test]
    fn cnot_layout() {
        let c = cnot(2);
        // |10⟩ -> |11⟩
        assert_eq!(c.get(3, 2), Complex64::new(1.0, 0.0));
        assert_eq!(c.get(0, 0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn block_examples() {
        let dec = controlled_blocks(&cnot(2), 1).unwrap();
        assert_eq!(dec.blocks, vec![Operator::identity(2, 1), pauli(2, Pauli::X).unwrap()]);

        let z = pauli(3, Pauli::Z).unwrap();
        let zs: Vec<Operator> = (0..3).map(|l| z.pow(l).unwrap()).collect();
        let cz = assemble_controlled(&zs, 1, 2).unwrap();
        let dec = controlled_blocks(&cz, 1).unwrap();
        for (a, b) in dec.blocks.iter().zip(&zs) {
            assert!(a.max_deviation(b).unwrap() < 1e-12);
        }

        let xi = embed_local(&pauli(2, Pauli::X).unwrap(), 1, 2).unwrap();
        assert!(matches!(controlled_blocks(&xi, 1), Err(Error::NotBlockDiagonal { .. })));

        let ids = vec![Operator::identity(3, 1); 3];
        assert_eq!(assemble_controlled(&ids, 1, 2).unwrap(), Operator::identity(3, 2));
    }

    #[test]
    fn control_on_second_qudit() {
        let x = pauli(2, Pauli::X).unwrap();
        let c2 = assemble_controlled(&[Operator::identity(2, 1), x.clone()], 2, 2).unwrap();
        // control qudit 2, target qudit 1: |01⟩ -> |11⟩
        assert_eq!(c2.get(3, 1), Complex64::new(1.0, 0.0));
        let dec = controlled_blocks(&c2, 2).unwrap();
        assert_eq!(dec.blocks[1], x);
    }

    #[test]
    fn x_component_examples() {
        let x = pauli(2, Pauli::X).unwrap();
        let xi = embed_local(&x, 1, 2).unwrap();
        let dec = x_components(&xi, 1).unwrap();
        assert!(dec.components[0].max_norm() < 1e-12);
        assert!(dec.components[1].max_deviation(&Operator::identity(2, 1)).unwrap() < 1e-12);

        let z = pauli(2, Pauli::Z).unwrap();
        let t = pauli_sum(Pauli::X, 1, &[Operator::identity(2, 1), z.clone()]).unwrap();
        let dec = x_components(&t, 1).unwrap();
        assert!(dec.components[0].max_deviation(&Operator::identity(2, 1)).unwrap() < 1e-12);
        assert!(dec.components[1].max_deviation(&z).unwrap() < 1e-12);
        assert!(dec.reassemble().unwrap().max_deviation(&t).unwrap() < 1e-12);

        let fi = embed_local(&fourier(2).unwrap(), 1, 2).unwrap();
        assert!(matches!(x_components(&fi, 1), Err(Error::NotXCompressed { .. })));
    }

    #[test]
    fn z_components_reassemble() {
        let c = cnot(3);
        let zc = z_components(&c, 1).unwrap();
        let back = pauli_sum(Pauli::Z, 1, &zc).unwrap();
        assert!(back.max_deviation(&c).unwrap() < 1e-12);
    }

    #[test]
    fn witness_examples() {
        let d = 2;
        let f = fourier(d).unwrap();
        let z = pauli(d, Pauli::Z).unwrap();
        let cz = assemble_controlled(&[Operator::identity(d, 1), z], 1, 2).unwrap();
        let fj = embed_local(&f, 1, 2).unwrap();
        let tp = fj.compose(&cz).unwrap().compose(&fj.adjoint()).unwrap();
        assert!(verify_compressed_witness(&tp, &cz, &f, &f.adjoint(), 1).unwrap());

        let c = cnot(2);
        let id = Operator::identity(d, 1);
        assert!(verify_compressed_witness(&c, &c, &id, &id, 1).unwrap());

        let s = swap(2);
        assert!(!verify_compressed_witness(&s, &s, &id, &id, 1).unwrap());
        assert!(!verify_compressed_witness(&s, &s, &id, &id, 2).unwrap());

        let g2 = gauss(d).unwrap().scale(Complex64::new(2.0, 0.0));
        assert!(matches!(
            verify_compressed_witness(&c, &c, &g2, &id, 1),
            Err(Error::NonUnitary(_))
        ));
    }

    #[test]
    fn indeterminate_band() {
        let mut c = cnot(2);
        c.set(0, 2, Complex64::new(1e-8, 0.0));
        let check = commutator_check(&c, 1, Pauli::Z, Thresholds::default()).unwrap();
        assert_eq!(check.verdict, Verdict::Indeterminate);
    }
}

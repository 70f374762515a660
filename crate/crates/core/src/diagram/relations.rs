//! The planar relations, each checked as a family of diagram identities
//! under both evaluators.

use num_complex::Complex64;
use serde::Serialize;

use super::{builtin, evaluate, Backend, Builtin, Diagram, Generator};
use crate::error::{Error, Result};
use crate::qudit::{max_state, pauli, Operator, Pauli, StateVector};
use crate::scalar::{sqrt_omega, zeta_pow, PhaseExponent, Tolerance};

pub const RELATION_IDS: [&str; 11] = [
    "additive_charge",
    "para_isotopy",
    "twisted_product",
    "string_fourier",
    "quantum_dimension",
    "neutrality",
    "temperley_lieb",
    "resolution_identity",
    "braid",
    "pauli",
    "bell",
];

/// A linear combination of diagrams with a common boundary.
#[derive(Clone, Debug)]
pub struct Combo {
    d: usize,
    n_out: usize,
    n_in: usize,
    terms: Vec<(Complex64, Diagram)>,
}

impl Combo {
    pub fn zero(d: usize, n_out: usize, n_in: usize) -> Self {
        Combo {
            d,
            n_out,
            n_in,
            terms: Vec::new(),
        }
    }

    pub fn one(diag: Diagram) -> Self {
        Combo {
            d: diag.d(),
            n_out: diag.n_out(),
            n_in: diag.n_in(),
            terms: vec![(Complex64::new(1.0, 0.0), diag)],
        }
    }

    pub fn push(&mut self, c: Complex64, diag: Diagram) {
        debug_assert_eq!((diag.n_out(), diag.n_in()), (self.n_out, self.n_in));
        self.terms.push((c, diag));
    }

    pub fn evaluate(&self, backend: Backend) -> Result<Operator> {
        let mut acc = Operator::zeros(self.d, self.n_out, self.n_in);
        for (c, diag) in &self.terms {
            acc = acc.add(&evaluate(diag, backend)?.scale(*c))?;
        }
        Ok(acc)
    }
}

enum Rhs {
    Diagrams(Combo),
    Matrix(Operator),
}

enum Check {
    Equal { label: String, lhs: Combo, rhs: Rhs },
    Unitary { label: String, diagram: Diagram },
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub relation: String,
    pub d: usize,
    pub checks: usize,
    pub max_dev_dense: f64,
    pub max_dev_symbolic: f64,
    pub pass: bool,
    pub failures: Vec<String>,
}

fn diag(d: usize, top: usize, slices: Vec<Generator>) -> Diagram {
    Diagram::new(d, top, slices).expect("relation diagrams are well formed")
}

fn cap(pos: usize) -> Generator {
    Generator::Cap { pos }
}

fn cup(pos: usize) -> Generator {
    Generator::Cup { pos }
}

fn ch(pos: usize, k: i64) -> Generator {
    Generator::charge(pos, k)
}

fn equal(label: String, lhs: Diagram, rhs: Diagram) -> Check {
    Check::Equal {
        label,
        lhs: Combo::one(lhs),
        rhs: Rhs::Diagrams(Combo::one(rhs)),
    }
}

fn additive_charge(d: usize) -> Vec<Check> {
    let dd = d as i64;
    let mut out = Vec::new();
    for (w, strings) in [(2, vec![1, 2]), (4, vec![1, 2, 3, 4])] {
        let range = if w == 2 { 2 * dd } else { dd };
        for &s in &strings {
            for k in 0..range {
                for l in 0..range {
                    out.push(equal(
                        format!("w={w} s={s} k={k} l={l}"),
                        diag(d, w, vec![ch(s, k), ch(s, l)]),
                        diag(d, w, vec![ch(s, k + l)]),
                    ));
                }
            }
            out.push(equal(
                format!("w={w} s={s} order d"),
                diag(d, w, vec![ch(s, dd)]),
                diag(d, w, vec![]),
            ));
        }
    }
    out
}

fn para_isotopy(d: usize) -> Vec<Check> {
    let dd = d as i64;
    let mut out = Vec::new();
    for w in [2usize, 4] {
        for s in 1..=w {
            for t in s + 1..=w {
                for k in 0..dd {
                    for l in 0..dd {
                        // k on s below ℓ on t  =  q^(kℓ) · k above ℓ
                        out.push(equal(
                            format!("w={w} s={s} t={t} k={k} l={l}"),
                            diag(d, w, vec![ch(t, l), ch(s, k)]),
                            diag(d, w, vec![ch(s, k), ch(t, l)]).scaled(PhaseExponent::q(d, k * l)),
                        ));
                    }
                }
            }
        }
    }
    out
}

fn twisted_product(d: usize) -> Vec<Check> {
    let dd = d as i64;
    let mut out = Vec::new();
    let cases = [(2usize, 1usize, 2usize, 2 * dd), (4, 1, 3, dd), (4, 2, 4, dd), (4, 2, 3, dd)];
    for (w, s, t, range) in cases {
        for k in 0..range {
            for l in 0..range {
                let same = || diag(d, w, vec![Generator::multi(&[(s, k), (t, l)])]);
                out.push(equal(
                    format!("below w={w} s={s} t={t} k={k} l={l}"),
                    same(),
                    diag(d, w, vec![ch(t, l), ch(s, k)]).scaled(PhaseExponent::zeta(d, -k * l)),
                ));
                out.push(equal(
                    format!("above w={w} s={s} t={t} k={k} l={l}"),
                    same(),
                    diag(d, w, vec![ch(s, k), ch(t, l)]).scaled(PhaseExponent::zeta(d, k * l)),
                ));
            }
        }
    }
    out
}

fn string_fourier(d: usize) -> Vec<Check> {
    let dd = d as i64;
    let mut out = Vec::new();
    for k in 0..2 * dd {
        for (w, p) in [(0usize, 1usize), (2, 1), (2, 2), (2, 3)] {
            out.push(equal(
                format!("cap w={w} p={p} k={k}"),
                diag(d, w, vec![cap(p), ch(p, k)]),
                diag(d, w, vec![cap(p), ch(p + 1, k)]).scaled(PhaseExponent::zeta(d, k * k)),
            ));
        }
        for (w, p) in [(2usize, 1usize), (4, 1), (4, 2), (4, 3)] {
            out.push(equal(
                format!("cup w={w} p={p} k={k}"),
                diag(d, w, vec![ch(p, k), cup(p)]),
                diag(d, w, vec![ch(p + 1, k), cup(p)]).scaled(PhaseExponent::zeta(d, -k * k)),
            ));
        }
    }
    out
}

fn quantum_dimension(d: usize) -> Vec<Check> {
    let sd = PhaseExponent::sqrt_d(d, 1);
    let mut out = vec![
        equal(
            "closed loop".into(),
            diag(d, 0, vec![cap(1), cup(1)]),
            diag(d, 0, vec![]).scaled(sd),
        ),
        equal(
            "loop with charge d".into(),
            diag(d, 0, vec![cap(1), ch(2, d as i64), cup(1)]),
            diag(d, 0, vec![]).scaled(sd),
        ),
        equal(
            "two loops".into(),
            diag(d, 0, vec![cap(1), cap(3), cup(1), cup(1)]),
            diag(d, 0, vec![]).scaled(PhaseExponent::sqrt_d(d, 2)),
        ),
    ];
    for p in 1..=3 {
        out.push(equal(
            format!("loop beside strands p={p}"),
            diag(d, 2, vec![cap(p), cup(p)]),
            diag(d, 2, vec![]).scaled(sd),
        ));
    }
    out
}

fn neutrality(d: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for k in 1..d as i64 {
        for leg in 0..2 {
            out.push(Check::Equal {
                label: format!("closed leg={leg} k={k}"),
                lhs: Combo::one(diag(d, 0, vec![cap(1), ch(1 + leg, k), cup(1)])),
                rhs: Rhs::Diagrams(Combo::zero(d, 0, 0)),
            });
            for p in 1..=3 {
                out.push(Check::Equal {
                    label: format!("beside strands p={p} leg={leg} k={k}"),
                    lhs: Combo::one(diag(d, 2, vec![cap(p), ch(p + leg, k), cup(p)])),
                    rhs: Rhs::Diagrams(Combo::zero(d, 1, 1)),
                });
            }
        }
    }
    out
}

fn temperley_lieb(d: usize) -> Vec<Check> {
    let sd = PhaseExponent::sqrt_d(d, 1);
    let e = |p: usize| [cup(p), cap(p)];
    let cat = |parts: &[[Generator; 2]]| -> Vec<Generator> { parts.iter().flatten().cloned().collect() };
    vec![
        equal("zig-zag right".into(), diag(d, 2, vec![cap(3), cup(2)]), diag(d, 2, vec![])),
        equal("zig-zag left".into(), diag(d, 2, vec![cap(1), cup(2)]), diag(d, 2, vec![])),
        equal(
            "zig-zag inside".into(),
            diag(d, 4, vec![cap(2), cup(3)]),
            diag(d, 4, vec![]),
        ),
        equal(
            "closed snake".into(),
            diag(d, 0, vec![cap(1), cap(3), cup(2)]),
            diag(d, 0, vec![cap(1)]),
        ),
        equal("e1 e1".into(), diag(d, 4, cat(&[e(1), e(1)])), diag(d, 4, cat(&[e(1)])).scaled(sd)),
        equal("e2 e2".into(), diag(d, 4, cat(&[e(2), e(2)])), diag(d, 4, cat(&[e(2)])).scaled(sd)),
        equal("e1 e2 e1".into(), diag(d, 4, cat(&[e(1), e(2), e(1)])), diag(d, 4, cat(&[e(1)]))),
        equal("e2 e1 e2".into(), diag(d, 4, cat(&[e(2), e(1), e(2)])), diag(d, 4, cat(&[e(2)]))),
        equal("e2 e3 e2".into(), diag(d, 4, cat(&[e(2), e(3), e(2)])), diag(d, 4, cat(&[e(2)]))),
        equal("e1 e3".into(), diag(d, 4, cat(&[e(1), e(3)])), diag(d, 4, cat(&[e(3), e(1)]))),
    ]
}

fn resolution_identity(d: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let c = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for (w, p) in [(2usize, 1usize), (4, 1), (4, 2), (4, 3)] {
        let mut rhs = Combo::zero(d, w / 2, w / 2);
        for k in 0..d as i64 {
            rhs.push(c, diag(d, w, vec![ch(p + 1, -k), cup(p), cap(p), ch(p + 1, k)]));
        }
        out.push(Check::Equal {
            label: format!("w={w} p={p}"),
            lhs: Combo::one(diag(d, w, vec![])),
            rhs: Rhs::Diagrams(rhs),
        });
    }
    out
}

fn braid(d: usize) -> Result<Vec<Check>> {
    let sw = sqrt_omega(d)?;
    let rd = (d as f64).sqrt();
    let pos = |p| Generator::BraidPos { pos: p };
    let neg = |p| Generator::BraidNeg { pos: p };
    let mut out = Vec::new();
    for (w, p) in [(2usize, 1usize), (4, 1), (4, 2), (4, 3)] {
        let m = w / 2;
        let mut twisted_pos = Combo::zero(d, m, m);
        let mut twisted_neg = Combo::zero(d, m, m);
        for k in 0..d as i64 {
            twisted_pos.push(
                zeta_pow(d, k * k) / (sw * rd),
                diag(d, w, vec![Generator::multi(&[(p, k), (p + 1, -k)])]),
            );
            twisted_neg.push(
                zeta_pow(d, -k * k) * sw / rd,
                diag(d, w, vec![Generator::multi(&[(p, -k), (p + 1, k)])]),
            );
        }
        out.push(Check::Equal {
            label: format!("positive expansion w={w} p={p}"),
            lhs: Combo::one(diag(d, w, vec![pos(p)])),
            rhs: Rhs::Diagrams(twisted_pos),
        });
        out.push(Check::Equal {
            label: format!("negative expansion w={w} p={p}"),
            lhs: Combo::one(diag(d, w, vec![neg(p)])),
            rhs: Rhs::Diagrams(twisted_neg),
        });
        out.push(Check::Unitary {
            label: format!("unitary w={w} p={p}"),
            diagram: diag(d, w, vec![pos(p)]),
        });
        out.push(equal(
            format!("pos then neg w={w} p={p}"),
            diag(d, w, vec![pos(p), neg(p)]),
            diag(d, w, vec![]),
        ));
        out.push(equal(
            format!("neg then pos w={w} p={p}"),
            diag(d, w, vec![neg(p), pos(p)]),
            diag(d, w, vec![]),
        ));
    }
    for (a, b) in [(1usize, 2usize), (2, 3)] {
        out.push(equal(
            format!("braid relation {a},{b}"),
            diag(d, 4, vec![pos(a), pos(b), pos(a)]),
            diag(d, 4, vec![pos(b), pos(a), pos(b)]),
        ));
    }
    out.push(equal(
        "far braids commute".into(),
        diag(d, 4, vec![pos(1), neg(3)]),
        diag(d, 4, vec![neg(3), pos(1)]),
    ));
    Ok(out)
}

fn pauli_checks(d: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let matrices = [
        (Builtin::I, Operator::identity(d, 1)),
        (Builtin::X, pauli(d, Pauli::X)?),
        (Builtin::Y, pauli(d, Pauli::Y)?),
        (Builtin::Z, pauli(d, Pauli::Z)?),
    ];
    for (b, m) in matrices {
        out.push(Check::Equal {
            label: format!("{b} diagram"),
            lhs: Combo::one(builtin(&b, d)?),
            rhs: Rhs::Matrix(m),
        });
    }
    let [x, y, z] = [Builtin::X, Builtin::Y, Builtin::Z].map(|b| builtin(&b, d));
    let (x, y, z) = (x?, y?, z?);
    // XYZ = ζ: Z acts first
    out.push(equal(
        "XYZ = zeta".into(),
        z.then(&y)?.then(&x)?,
        Diagram::identity(d, 1)?.scaled(PhaseExponent::zeta(d, 1)),
    ));
    // XY = q YX
    out.push(equal("XY = q YX".into(), y.then(&x)?, x.then(&y)?.scaled(PhaseExponent::q(d, 1))));
    out.push(equal("ZX = q XZ".into(), x.then(&z)?, z.then(&x)?.scaled(PhaseExponent::q(d, 1))));
    for (name, g) in [("X", &x), ("Y", &y), ("Z", &z)] {
        let mut pow = Diagram::identity(d, 1)?;
        for _ in 0..d {
            pow = pow.then(g)?;
        }
        out.push(equal(format!("{name}^d = I"), pow, Diagram::identity(d, 1)?));
    }
    Ok(out)
}

fn state_matrix(s: &StateVector) -> Operator {
    Operator::new(s.d(), s.n(), 0, s.amps().to_vec()).expect("state as a column")
}

fn bell(d: usize) -> Result<Vec<Check>> {
    let mut out = vec![Check::Equal {
        label: "bell".into(),
        lhs: Combo::one(builtin(&Builtin::Bell, d)?),
        rhs: Rhs::Matrix(state_matrix(&max_state(d, 2)?)),
    }];
    for n in 1..=3 {
        out.push(Check::Equal {
            label: format!("max({n})"),
            lhs: Combo::one(builtin(&Builtin::Max(n), d)?),
            rhs: Rhs::Matrix(state_matrix(&max_state(d, n)?)),
        });
    }
    let dd = d as i64;
    for k1 in 0..dd {
        for k2 in 0..dd {
            out.push(Check::Equal {
                label: format!("basis({k1},{k2})"),
                lhs: Combo::one(builtin(&Builtin::Basis(vec![k1, k2]), d)?),
                rhs: Rhs::Matrix(state_matrix(&StateVector::basis(d, &[k1, k2])?)),
            });
            let mut unit = Operator::zeros(d, 1, 1);
            unit.set(k1 as usize, k2 as usize, Complex64::new(1.0, 0.0));
            out.push(Check::Equal {
                label: format!("matrix_unit({k1};{k2})"),
                lhs: Combo::one(builtin(&Builtin::MatrixUnit(vec![k1], vec![k2]), d)?),
                rhs: Rhs::Matrix(unit),
            });
        }
    }
    Ok(out)
}

fn checks_for(id: &str, d: usize) -> Result<Vec<Check>> {
    Ok(match id {
        "additive_charge" => additive_charge(d),
        "para_isotopy" => para_isotopy(d),
        "twisted_product" => twisted_product(d),
        "string_fourier" => string_fourier(d),
        "quantum_dimension" => quantum_dimension(d),
        "neutrality" => neutrality(d),
        "temperley_lieb" => temperley_lieb(d),
        "resolution_identity" => resolution_identity(d),
        "braid" => braid(d)?,
        "pauli" => pauli_checks(d)?,
        "bell" => bell(d)?,
        other => return Err(Error::UnknownRelation(other.to_string())),
    })
}

fn deviation(check: &Check, backend: Backend) -> Result<f64> {
    match check {
        Check::Equal { lhs, rhs, .. } => {
            let a = lhs.evaluate(backend)?;
            let b = match rhs {
                Rhs::Diagrams(c) => c.evaluate(backend)?,
                Rhs::Matrix(m) => m.clone(),
            };
            a.max_deviation(&b)
        }
        Check::Unitary { diagram, .. } => evaluate(diagram, backend)?.unitarity_deviation(),
    }
}

/// Builds every instance of the named relation for dimension `d` and checks
/// it with both evaluators.
pub fn check_relation(id: &str, d: usize, tol: Tolerance) -> Result<RelationReport> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let checks = checks_for(id, d)?;
    let mut report = RelationReport {
        relation: id.to_string(),
        d,
        checks: checks.len(),
        max_dev_dense: 0.0,
        max_dev_symbolic: 0.0,
        pass: true,
        failures: Vec::new(),
    };
    for c in &checks {
        let dense = deviation(c, Backend::Dense)?;
        let symbolic = deviation(c, Backend::Symbolic)?;
        report.max_dev_dense = report.max_dev_dense.max(dense);
        report.max_dev_symbolic = report.max_dev_symbolic.max(symbolic);
        if dense > tol.eps() || symbolic > tol.eps() || dense.is_nan() || symbolic.is_nan() {
            let label = match c {
                Check::Equal { label, .. } | Check::Unitary { label, .. } => label,
            };
            report.pass = false;
            report
                .failures
                .push(format!("{label}: dense {dense:.3e}, symbolic {symbolic:.3e}"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_relation_passes_for_qubits_and_qutrits() {
        for d in 2..=3 {
            for id in RELATION_IDS {
                let r = check_relation(id, d, Tolerance::default()).unwrap();
                assert!(r.pass, "{id} d={d}: {:?}", r.failures);
                assert!(r.checks > 0);
            }
        }
    }

    #[test]
    fn unknown_relation_and_dimension() {
        assert!(matches!(
            check_relation("reidemeister", 2, Tolerance::default()),
            Err(Error::UnknownRelation(_))
        ));
        assert!(matches!(
            check_relation("braid", 1, Tolerance::default()),
            Err(Error::InvalidDimension(1))
        ));
    }
}

use std::fmt;
use std::str::FromStr;

use super::{Diagram, Generator};
use crate::error::{Error, Result};
use crate::scalar::PhaseExponent;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    I,
    X,
    Y,
    Z,
    Basis(Vec<i64>),
    MatrixUnit(Vec<i64>, Vec<i64>),
    Bell,
    Max(usize),
    BraidPos,
    BraidNeg,
}

fn parse_list(s: &str) -> Result<Vec<i64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::UnknownBuiltin(format!("bad charge '{t}'")))
        })
        .collect()
}

impl FromStr for Builtin {
    type Err = Error;

    /// Names: `I X Y Z bell braid_pos braid_neg`, `max(n)`, `basis(k1,…)`,
    /// `matrix_unit(k1,…;l1,…)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, args) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], Some(&s[i + 1..s.len() - 1])),
            _ => (s, None),
        };
        let unknown = || Error::UnknownBuiltin(s.to_string());
        match (head, args) {
            ("I", None) => Ok(Builtin::I),
            ("X", None) => Ok(Builtin::X),
            ("Y", None) => Ok(Builtin::Y),
            ("Z", None) => Ok(Builtin::Z),
            ("bell", None) => Ok(Builtin::Bell),
            ("braid_pos", None) => Ok(Builtin::BraidPos),
            ("braid_neg", None) => Ok(Builtin::BraidNeg),
            ("max", Some(a)) => a.trim().parse().map(Builtin::Max).map_err(|_| unknown()),
            ("basis", Some(a)) => parse_list(a).map(Builtin::Basis),
            ("matrix_unit", Some(a)) => {
                let (k, l) = a.split_once(';').ok_or_else(unknown)?;
                Ok(Builtin::MatrixUnit(parse_list(k)?, parse_list(l)?))
            }
            _ => Err(unknown()),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            Builtin::I => write!(f, "I"),
            Builtin::X => write!(f, "X"),
            Builtin::Y => write!(f, "Y"),
            Builtin::Z => write!(f, "Z"),
            Builtin::Basis(k) => write!(f, "basis({})", join(k)),
            Builtin::MatrixUnit(k, l) => write!(f, "matrix_unit({};{})", join(k), join(l)),
            Builtin::Bell => write!(f, "bell"),
            Builtin::Max(n) => write!(f, "max({n})"),
            Builtin::BraidPos => write!(f, "braid_pos"),
            Builtin::BraidNeg => write!(f, "braid_neg"),
        }
    }
}

/// The basis state `|k⃗⟩`: one cap per qudit, charge `k_j` on string `2j`,
/// normalized by `d^(-n/4)`. Charges are drawn at increasing depth from left
/// to right.
pub fn basis(d: usize, k: &[i64]) -> Result<Diagram> {
    let n = k.len();
    let mut slices: Vec<Generator> = (0..n).map(|j| Generator::Cap { pos: 2 * j + 1 }).collect();
    slices.extend(
        k.iter()
            .enumerate()
            .filter(|(_, &kj)| kj != 0)
            .map(|(j, &kj)| Generator::charge(2 * j + 2, kj)),
    );
    Ok(Diagram::new(d, 0, slices)?.scaled(PhaseExponent::root4_d(d, -(n as i32))))
}

/// `⟨k⃗|`, the adjoint of [`basis`].
pub fn bra(d: usize, k: &[i64]) -> Result<Diagram> {
    Ok(basis(d, k)?.adjoint())
}

/// `|k⃗⟩⟨ℓ⃗|`.
pub fn matrix_unit(d: usize, k: &[i64], l: &[i64]) -> Result<Diagram> {
    bra(d, l)?.then(&basis(d, k)?)
}

pub fn builtin(which: &Builtin, d: usize) -> Result<Diagram> {
    if d == 0 {
        return Err(Error::InvalidDimension(d));
    }
    match which {
        Builtin::I => Diagram::identity(d, 1),
        Builtin::X => Diagram::new(d, 2, vec![Generator::charge(2, 1)]),
        Builtin::Y => Diagram::new(d, 2, vec![Generator::charge(1, -1)]),
        Builtin::Z => Diagram::new(d, 2, vec![Generator::multi(&[(1, 1), (2, -1)])]),
        Builtin::Basis(k) => basis(d, k),
        Builtin::MatrixUnit(k, l) => matrix_unit(d, k, l),
        Builtin::Bell => Ok(Diagram::new(
            d,
            0,
            vec![Generator::Cap { pos: 1 }, Generator::Cap { pos: 2 }],
        )?
        .scaled(PhaseExponent::sqrt_d(d, -1))),
        Builtin::Max(n) => {
            if *n == 0 {
                return Err(Error::UnknownBuiltin("max(0)".into()));
            }
            let mut slices = vec![Generator::Cap { pos: 1 }];
            slices.extend((1..*n).map(|j| Generator::Cap { pos: 2 * j }));
            Ok(Diagram::new(d, 0, slices)?.scaled(PhaseExponent::root4_d(d, -(*n as i32))))
        }
        Builtin::BraidPos => Diagram::new(d, 2, vec![Generator::BraidPos { pos: 1 }]),
        Builtin::BraidNeg => Diagram::new(d, 2, vec![Generator::BraidNeg { pos: 1 }]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for name in [
            "I",
            "X",
            "Y",
            "Z",
            "bell",
            "max(3)",
            "basis(0,1)",
            "matrix_unit(1;2)",
            "braid_pos",
            "braid_neg",
        ] {
            let b: Builtin = name.parse().unwrap();
            assert_eq!(b.to_string(), name);
        }
        assert!(matches!("W".parse::<Builtin>(), Err(Error::UnknownBuiltin(_))));
        assert!("max(x)".parse::<Builtin>().is_err());
    }

    #[test]
    fn pauli_shapes() {
        let z = builtin(&Builtin::Z, 2).unwrap();
        assert_eq!(z.slices(), &[Generator::multi(&[(1, 1), (2, -1)])]);
        let y = builtin(&Builtin::Y, 3).unwrap();
        assert_eq!(y.slices(), &[Generator::charge(1, -1)]);
        let bell = builtin(&Builtin::Bell, 2).unwrap();
        assert_eq!(bell.prefactor(), PhaseExponent::sqrt_d(2, -1));
        assert_eq!(bell.bottom(), 4);
    }
}

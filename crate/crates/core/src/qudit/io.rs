//! JSON exchange format for operators and states:
//! `{"d": int, "n": int, "re": [...], "im": [...]}`, row-major for operators.
//! Non-square maps (diagrams with different boundary widths) carry
//! `"n_out"` and `"n_in"` instead of `"n"`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{pow_usize, Operator, StateVector};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_out: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_in: Option<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

/// Smallest `n` with `d^n = len`, if any.
fn exact_log(d: usize, len: usize) -> Option<usize> {
    if d < 2 {
        return (len == 1).then_some(0);
    }
    let (mut n, mut p) = (0, 1usize);
    while p < len {
        p = p.checked_mul(d)?;
        n += 1;
    }
    (p == len).then_some(n)
}

fn amps_of(doc: &MatrixDoc) -> Result<Vec<Complex64>> {
    if doc.re.len() != doc.im.len() {
        return Err(Error::Malformed(format!(
            "re has {} entries but im has {}",
            doc.re.len(),
            doc.im.len()
        )));
    }
    Ok(doc
        .re
        .iter()
        .zip(&doc.im)
        .map(|(&a, &b)| Complex64::new(a, b))
        .collect())
}

impl MatrixDoc {
    pub fn into_operator(self) -> Result<Operator> {
        let d = self.d;
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let data = amps_of(&self)?;
        let (n_out, n_in) = match (self.n, self.n_out, self.n_in) {
            (_, Some(o), Some(i)) => (o, i),
            (Some(n), None, None) => (n, n),
            (None, None, None) => {
                // square matrix: len = d^(2n)
                let two_n = exact_log(d, data.len()).ok_or_else(|| {
                    Error::shape(format!("d^(2n) entries for d={d}"), data.len())
                })?;
                if two_n % 2 != 0 {
                    return Err(Error::shape(
                        format!("d^(2n) entries for d={d}"),
                        data.len(),
                    ));
                }
                (two_n / 2, two_n / 2)
            }
            _ => {
                return Err(Error::Malformed(
                    "give either \"n\" or both \"n_out\" and \"n_in\"".into(),
                ))
            }
        };
        Operator::new(d, n_out, n_in, data)
    }

    pub fn into_state(self) -> Result<StateVector> {
        let d = self.d;
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let amps = amps_of(&self)?;
        let n = match self.n {
            Some(n) => n,
            None => exact_log(d, amps.len())
                .ok_or_else(|| Error::shape(format!("d^n entries for d={d}"), amps.len()))?,
        };
        if amps.len() != pow_usize(d, n) {
            return Err(Error::shape(pow_usize(d, n), amps.len()));
        }
        StateVector::new(d, n, amps)
    }

    pub fn from_operator(op: &Operator) -> Self {
        let (n, n_out, n_in) = if op.is_square() {
            (Some(op.n()), None, None)
        } else {
            (None, Some(op.n_out()), Some(op.n_in()))
        };
        MatrixDoc {
            d: op.d(),
            n,
            n_out,
            n_in,
            re: op.data().iter().map(|c| c.re).collect(),
            im: op.data().iter().map(|c| c.im).collect(),
        }
    }

    pub fn from_state(s: &StateVector) -> Self {
        MatrixDoc {
            d: s.d(),
            n: Some(s.n()),
            n_out: None,
            n_in: None,
            re: s.amps().iter().map(|c| c.re).collect(),
            im: s.amps().iter().map(|c| c.im).collect(),
        }
    }
}

pub fn operator_from_json(text: &str) -> Result<Operator> {
    serde_json::from_str::<MatrixDoc>(text)?.into_operator()
}

pub fn state_from_json(text: &str) -> Result<StateVector> {
    serde_json::from_str::<MatrixDoc>(text)?.into_state()
}

pub fn operator_to_json(op: &Operator) -> serde_json::Value {
    serde_json::to_value(MatrixDoc::from_operator(op)).expect("matrix document serializes")
}

pub fn state_to_json(s: &StateVector) -> serde_json::Value {
    serde_json::to_value(MatrixDoc::from_state(s)).expect("state document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::{fourier, ghz_state};

    #[test]
    fn operator_round_trip_and_inference() {
        let f = fourier(3).unwrap();
        let text = operator_to_json(&f).to_string();
        assert_eq!(operator_from_json(&text).unwrap(), f);

        let no_n = r#"{"d":2,"re":[1,0,0,0, 0,1,0,0, 0,0,0,1, 0,0,1,0],"im":[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]}"#;
        assert_eq!(operator_from_json(no_n).unwrap().n(), 2);

        let bad = r#"{"d":2,"re":[1,0,0,0,0,0,0,0],"im":[0,0,0,0,0,0,0,0]}"#;
        assert!(matches!(operator_from_json(bad), Err(Error::ShapeMismatch { .. })));
        let bad = r#"{"d":3,"re":[1,0,0,1],"im":[0,0,0,0]}"#;
        assert!(operator_from_json(bad).is_err());
    }

    #[test]
    fn state_round_trip() {
        let g = ghz_state(2, 3).unwrap();
        let text = state_to_json(&g).to_string();
        assert_eq!(state_from_json(&text).unwrap(), g);
    }
}

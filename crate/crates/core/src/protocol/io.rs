//! Gate files for the protocol runner and seeded random instances.
//!
//! ```json
//! {"d": 2, "blocks": [[{"d":2,"n":1,…}, {"d":2,"n":1,…}]], "input": {…}}
//! {"d": 3, "components": [{"d":3,"n":2,…}]}
//! ```
//!
//! `blocks[j][ℓ]` is party `j+1`'s block for control value `ℓ`;
//! `components[j]` is an X-compressed operator whose first qudit is the
//! control leg. `input` is optional.

use rand::Rng;
use serde::Deserialize;

use crate::compression::{assemble_controlled, local_tensor};
use crate::error::{Error, Result};
use crate::qudit::io::MatrixDoc;
use crate::qudit::{fourier, Operator, StateVector};
use crate::random::{random_state, random_unitary};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateDoc {
    d: usize,
    #[serde(default)]
    blocks: Option<Vec<Vec<MatrixDoc>>>,
    #[serde(default)]
    components: Option<Vec<MatrixDoc>>,
    #[serde(default)]
    input: Option<MatrixDoc>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateSpec {
    Controlled(Vec<Vec<Operator>>),
    XCompressed(Vec<Operator>),
}

impl GateSpec {
    pub fn parties(&self) -> usize {
        match self {
            GateSpec::Controlled(b) => b.len(),
            GateSpec::XCompressed(c) => c.len(),
        }
    }

    /// Data qudits `[P1…, Pn…, L]`.
    pub fn data_qudits(&self) -> usize {
        1 + match self {
            GateSpec::Controlled(b) => b.iter().map(|bs| bs.first().map_or(0, Operator::n)).sum(),
            GateSpec::XCompressed(c) => c.iter().map(|t| t.n().saturating_sub(1)).sum::<usize>(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateFile {
    pub d: usize,
    pub gate: GateSpec,
    pub input: Option<StateVector>,
}

pub fn gate_file_from_json(text: &str) -> Result<GateFile> {
    let doc: GateDoc = serde_json::from_str(text)?;
    let gate = match (doc.blocks, doc.components) {
        (Some(b), None) => GateSpec::Controlled(
            b.into_iter()
                .map(|bs| bs.into_iter().map(MatrixDoc::into_operator).collect())
                .collect::<Result<_>>()?,
        ),
        (None, Some(c)) => GateSpec::XCompressed(
            c.into_iter().map(MatrixDoc::into_operator).collect::<Result<_>>()?,
        ),
        _ => {
            return Err(Error::Malformed(
                "exactly one of \"blocks\" and \"components\" is required".into(),
            ))
        }
    };
    let input = doc.input.map(MatrixDoc::into_state).transpose()?;
    Ok(GateFile {
        d: doc.d,
        gate,
        input,
    })
}

/// Haar-like random blocks, one data qudit per party.
pub fn random_blocks<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> Vec<Vec<Operator>> {
    (0..n)
        .map(|_| (0..d).map(|_| random_unitary(rng, d, 1)).collect())
        .collect()
}

/// Random X-compressed two-qudit factors `F⁻¹ C F` (Fourier on the leg,
/// `C` controlled by the leg).
pub fn random_components<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> Result<Vec<Operator>> {
    let f = local_tensor(&fourier(d)?, 1, &Operator::identity(d, 1))?;
    random_blocks(rng, d, n)
        .iter()
        .map(|bs| {
            let c = assemble_controlled(bs, 1, 2)?;
            f.adjoint().compose(&c)?.compose(&f)
        })
        .collect()
}

pub fn random_input<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> StateVector {
    random_state(rng, d, n + 1)
}

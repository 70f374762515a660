use serde::{Deserialize, Serialize};

use super::{Diagram, Generator};
use crate::error::{Error, Result};
use crate::scalar::PhaseExponent;

/// Scalar `ζ^zeta_exp · d^(sqrtd_exp/2) · d^(root4_exp/4)`. The quarter-power
/// field is only needed for odd numbers of caps and is omitted otherwise.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PrefactorDoc {
    #[serde(default)]
    zeta_exp: i64,
    #[serde(default)]
    sqrtd_exp: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    root4_exp: Option<i32>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramDoc {
    d: usize,
    top: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prefactor: Option<PrefactorDoc>,
    slices: Vec<Generator>,
}

pub fn parse_diagram(text: &str) -> Result<Diagram> {
    let doc: DiagramDoc = serde_json::from_str(text)?;
    if doc.d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let diag = Diagram::new(doc.d, doc.top, doc.slices)?;
    Ok(match doc.prefactor {
        None => diag,
        Some(p) => {
            let quarter = 2 * p.sqrtd_exp + p.root4_exp.unwrap_or(0);
            diag.scaled(PhaseExponent::new(doc.d, p.zeta_exp, quarter))
        }
    })
}

pub fn diagram_to_json(diag: &Diagram) -> serde_json::Value {
    let p = diag.prefactor();
    let prefactor = if p == PhaseExponent::one(diag.d()) {
        None
    } else {
        let r = p.root4_exp();
        Some(PrefactorDoc {
            zeta_exp: p.zeta_exp() as i64,
            sqrtd_exp: r.div_euclid(2),
            root4_exp: (r.rem_euclid(2) == 1).then_some(1),
        })
    };
    let doc = DiagramDoc {
        d: diag.d(),
        top: diag.top(),
        prefactor,
        slices: diag.slices().to_vec(),
    };
    serde_json::to_value(doc).expect("diagram document serializes")
}

//! Layered two-string diagrams.
//!
//! A diagram is read top to bottom: the top boundary is the input, each slice
//! applies one generator, the bottom boundary is the output. Strings are
//! numbered from 1 at the left; qudit `i` is the string pair `(2i-1, 2i)`.

mod builtin;
mod dense;
mod parse;
pub mod random;
pub mod relations;
mod symbolic;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::PhaseExponent;

pub use builtin::{basis, bra, builtin, matrix_unit, Builtin};
pub use dense::evaluate_dense;
pub use parse::{diagram_to_json, parse_diagram};
pub use symbolic::{closed_value, evaluate_symbolic};

/// Value of a closed, braid-free diagram.
pub type ClosedDiagramValue = PhaseExponent;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Dense,
    Symbolic,
}

pub fn evaluate(diag: &Diagram, backend: Backend) -> Result<crate::qudit::Operator> {
    match backend {
        Backend::Dense => evaluate_dense(diag),
        Backend::Symbolic => evaluate_symbolic(diag),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChargeItem {
    pub pos: usize,
    pub k: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    Strand {
        pos: usize,
    },
    Cap {
        pos: usize,
    },
    Cup {
        pos: usize,
    },
    Charge {
        pos: usize,
        k: i64,
    },
    /// Charges written at one height (twisted tensor product).
    #[serde(rename = "multicharge")]
    MultiCharge {
        items: Vec<ChargeItem>,
    },
    BraidPos {
        pos: usize,
    },
    BraidNeg {
        pos: usize,
    },
}

impl Generator {
    pub fn charge(pos: usize, k: i64) -> Self {
        Generator::Charge { pos, k }
    }

    pub fn multi(items: &[(usize, i64)]) -> Self {
        Generator::MultiCharge {
            items: items.iter().map(|&(pos, k)| ChargeItem { pos, k }).collect(),
        }
    }

    /// Width change and validity against the current string count.
    fn next_width(&self, w: usize) -> std::result::Result<usize, String> {
        let in_range = |pos: usize, hi: usize, what: &str| {
            if pos >= 1 && pos <= hi {
                Ok(())
            } else {
                Err(format!("{what} at {pos} outside 1..={hi} (width {w})"))
            }
        };
        match self {
            Generator::Strand { pos } => in_range(*pos, w, "strand").map(|_| w),
            Generator::Cap { pos } => in_range(*pos, w + 1, "cap").map(|_| w + 2),
            Generator::Cup { pos } => {
                if w < 2 {
                    return Err(format!("cup needs two strings, width is {w}"));
                }
                in_range(*pos, w - 1, "cup").map(|_| w - 2)
            }
            Generator::Charge { pos, .. } => in_range(*pos, w, "charge").map(|_| w),
            Generator::MultiCharge { items } => {
                if items.is_empty() {
                    return Err("multicharge without items".into());
                }
                for (i, it) in items.iter().enumerate() {
                    in_range(it.pos, w, "multicharge item")?;
                    if items[..i].iter().any(|o| o.pos == it.pos) {
                        return Err(format!("multicharge repeats string {}", it.pos));
                    }
                }
                Ok(w)
            }
            Generator::BraidPos { pos } | Generator::BraidNeg { pos } => {
                if w < 2 {
                    return Err(format!("braid needs two strings, width is {w}"));
                }
                in_range(*pos, w - 1, "braid").map(|_| w)
            }
        }
    }

    fn adjoint(&self) -> Generator {
        match self {
            Generator::Strand { pos } => Generator::Strand { pos: *pos },
            Generator::Cap { pos } => Generator::Cup { pos: *pos },
            Generator::Cup { pos } => Generator::Cap { pos: *pos },
            Generator::Charge { pos, k } => Generator::Charge { pos: *pos, k: -k },
            Generator::MultiCharge { items } => Generator::MultiCharge {
                items: items
                    .iter()
                    .map(|it| ChargeItem { pos: it.pos, k: -it.k })
                    .collect(),
            },
            Generator::BraidPos { pos } => Generator::BraidNeg { pos: *pos },
            Generator::BraidNeg { pos } => Generator::BraidPos { pos: *pos },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagram {
    d: usize,
    top: usize,
    prefactor: PhaseExponent,
    slices: Vec<Generator>,
    bottom: usize,
}

impl Diagram {
    pub fn new(d: usize, top: usize, slices: Vec<Generator>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(d));
        }
        if top % 2 != 0 {
            return Err(Error::OddBoundary(top));
        }
        let mut slices = slices;
        let mut w = top;
        for (i, g) in slices.iter_mut().enumerate() {
            if let Generator::MultiCharge { items } = g {
                items.sort_by_key(|it| it.pos);
            }
            w = g.next_width(w).map_err(|message| Error::WidthViolation {
                slice: i + 1,
                message,
            })?;
        }
        Ok(Diagram {
            d,
            top,
            prefactor: PhaseExponent::one(d),
            slices,
            bottom: w,
        })
    }

    pub fn identity(d: usize, n: usize) -> Result<Self> {
        Self::new(d, 2 * n, Vec::new())
    }

    /// Multiplies the scalar prefactor by `p`.
    pub fn scaled(mut self, p: PhaseExponent) -> Self {
        self.prefactor = self.prefactor * p;
        self
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn n_in(&self) -> usize {
        self.top / 2
    }

    pub fn n_out(&self) -> usize {
        self.bottom / 2
    }

    pub fn prefactor(&self) -> PhaseExponent {
        self.prefactor
    }

    pub fn slices(&self) -> &[Generator] {
        &self.slices
    }

    /// String count above each slice, followed by the bottom width.
    pub fn widths(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.slices.len() + 1);
        let mut w = self.top;
        out.push(w);
        for g in &self.slices {
            w = g.next_width(w).expect("validated on construction");
            out.push(w);
        }
        out
    }

    pub fn max_width(&self) -> usize {
        self.widths().into_iter().max().unwrap_or(0)
    }

    pub fn braid_count(&self) -> usize {
        self.slices
            .iter()
            .filter(|g| matches!(g, Generator::BraidPos { .. } | Generator::BraidNeg { .. }))
            .count()
    }

    pub fn is_closed(&self) -> bool {
        self.top == 0 && self.bottom == 0
    }

    /// Stacks `below` under `self`.
    pub fn then(&self, below: &Diagram) -> Result<Diagram> {
        if self.d != below.d {
            return Err(Error::shape(format!("d={}", self.d), format!("d={}", below.d)));
        }
        if self.bottom != below.top {
            return Err(Error::shape(
                format!("{} top points", self.bottom),
                format!("{} top points", below.top),
            ));
        }
        let mut slices = self.slices.clone();
        slices.extend(below.slices.iter().cloned());
        Ok(Diagram {
            d: self.d,
            top: self.top,
            prefactor: self.prefactor * below.prefactor,
            slices,
            bottom: below.bottom,
        })
    }

    /// Vertical reflection with charges negated and the scalar conjugated.
    pub fn adjoint(&self) -> Diagram {
        Diagram {
            d: self.d,
            top: self.bottom,
            prefactor: self.prefactor.conj(),
            slices: self.slices.iter().rev().map(Generator::adjoint).collect(),
            bottom: self.top,
        }
    }
}

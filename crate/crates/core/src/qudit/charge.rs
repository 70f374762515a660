use std::fmt;

use serde::{Deserialize, Serialize};

use super::digit;

/// A basis label `k⃗ ∈ Z_d^n`, entries reduced mod `d`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChargeVector {
    d: usize,
    k: Vec<usize>,
}

impl ChargeVector {
    pub fn new(d: usize, charges: &[i64]) -> Self {
        let k = charges
            .iter()
            .map(|&c| c.rem_euclid(d as i64) as usize)
            .collect();
        ChargeVector { d, k }
    }

    pub fn from_index(d: usize, n: usize, idx: usize) -> Self {
        ChargeVector {
            d,
            k: (0..n).map(|i| digit(idx, i, n, d)).collect(),
        }
    }

    pub fn index(&self) -> usize {
        self.k.iter().fold(0, |acc, &c| acc * self.d + c)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.k
    }

    /// `|k⃗| = Σ k_j mod d`.
    pub fn total_charge(&self) -> usize {
        self.k.iter().sum::<usize>() % self.d
    }
}

impl fmt::Debug for ChargeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{:?}⟩_{}", self.k, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_round_trips() {
        let v = ChargeVector::new(3, &[4, -1, 2]);
        assert_eq!(v.entries(), &[1, 2, 2]);
        assert_eq!(v.total_charge(), 2);
        assert_eq!(ChargeVector::from_index(3, 3, v.index()), v);
    }
}

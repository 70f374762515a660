//! Random layered diagrams for backend cross-checks.

use rand::seq::index::sample;
use rand::Rng;

use super::{Diagram, Generator};

#[derive(Clone, Copy, Debug)]
pub struct RandomDiagramConfig {
    pub max_strings: usize,
    pub max_slices: usize,
    pub max_braids: usize,
}

impl Default for RandomDiagramConfig {
    fn default() -> Self {
        RandomDiagramConfig {
            max_strings: 6,
            max_slices: 8,
            max_braids: 2,
        }
    }
}

pub fn random_diagram<R: Rng + ?Sized>(rng: &mut R, d: usize, cfg: RandomDiagramConfig) -> Diagram {
    let max_top = cfg.max_strings.min(4) / 2;
    let top = 2 * rng.random_range(0..=max_top);
    let n_slices = rng.random_range(0..=cfg.max_slices);
    let dd = d as i64;
    let mut w = top;
    let mut braids = 0;
    let mut slices = Vec::with_capacity(n_slices);
    while slices.len() < n_slices {
        let g = match rng.random_range(0..7) {
            0 if w + 2 <= cfg.max_strings => Generator::Cap {
                pos: rng.random_range(1..=w + 1),
            },
            1 if w >= 2 => Generator::Cup {
                pos: rng.random_range(1..w),
            },
            2 | 3 if w >= 1 => Generator::Charge {
                pos: rng.random_range(1..=w),
                k: rng.random_range(-dd..2 * dd),
            },
            4 if w >= 2 => {
                let m = rng.random_range(2..=w.min(3));
                let strings = sample(rng, w, m).into_vec();
                let items: Vec<(usize, i64)> = strings
                    .into_iter()
                    .map(|p| (p + 1, rng.random_range(-dd..2 * dd)))
                    .collect();
                Generator::multi(&items)
            }
            5 if w >= 2 && braids < cfg.max_braids => {
                braids += 1;
                let pos = rng.random_range(1..w);
                if rng.random_bool(0.5) {
                    Generator::BraidPos { pos }
                } else {
                    Generator::BraidNeg { pos }
                }
            }
            6 if w >= 1 => Generator::Strand {
                pos: rng.random_range(1..=w),
            },
            _ => continue,
        };
        w = match g {
            Generator::Cap { .. } => w + 2,
            Generator::Cup { .. } => w - 2,
            _ => w,
        };
        slices.push(g);
        if w == 0 && rng.random_bool(0.5) {
            break;
        }
    }
    Diagram::new(d, top, slices).expect("generator respects width bookkeeping")
}

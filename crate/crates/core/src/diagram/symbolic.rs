//! Evaluation by planar rewriting.
//!
//! Each matrix entry is the value of the closed diagram obtained by putting a
//! basis cap on top and a basis cup at the bottom. Braids are expanded into
//! sums of charge pairs, equal-height charges are unfolded with their twist,
//! and the remaining closed diagram is reduced by transporting every charge
//! around its loop to one anchor cap, collecting
//!
//! * `q^(±kℓ)` whenever two charges on different strings swap heights,
//! * `ζ^(±k²)` whenever a charge turns around a cap or cup,
//!
//! and finally replacing each loop by `√d` (neutral) or `0` (charged).

use num_complex::Complex64;
use rayon::prelude::*;

use super::{Diagram, Generator};
use crate::error::{Error, Result};
use crate::qudit::Operator;
use crate::scalar::{sqrt_omega, PhaseExponent};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Item {
    Cap { pos: usize, anchor: bool },
    Cup { pos: usize },
    Charge { pos: usize, k: i64, settled: bool },
}

/// One summand of the braid expansion: float weight, exact phase, items.
struct Term {
    weight: Complex64,
    phase: i64,
    items: Vec<Item>,
}

fn charge(pos: usize, k: i64) -> Item {
    Item::Charge {
        pos,
        k,
        settled: false,
    }
}

/// Unfolds the body of a diagram into braid-free summands.
fn expand(diag: &Diagram) -> Result<Vec<Term>> {
    let d = diag.d();
    let mut terms = vec![Term {
        weight: Complex64::new(1.0, 0.0),
        phase: 0,
        items: Vec::new(),
    }];
    let push_all = |terms: &mut Vec<Term>, items: &[Item], phase: i64| {
        for t in terms.iter_mut() {
            t.items.extend_from_slice(items);
            t.phase += phase;
        }
    };
    for g in diag.slices() {
        match g {
            Generator::Strand { .. } => {}
            Generator::Cap { pos } => push_all(
                &mut terms,
                &[Item::Cap {
                    pos: *pos,
                    anchor: false,
                }],
                0,
            ),
            Generator::Cup { pos } => push_all(&mut terms, &[Item::Cup { pos: *pos }], 0),
            Generator::Charge { pos, k } => push_all(&mut terms, &[charge(*pos, *k)], 0),
            Generator::MultiCharge { items } => {
                // equal height = leftmost lowest, times ζ^(-Σ_{a<b} k_a k_b)
                let mut twist = 0i64;
                for (a, x) in items.iter().enumerate() {
                    for y in &items[a + 1..] {
                        twist -= x.k * y.k;
                    }
                }
                let seq: Vec<Item> = items.iter().rev().map(|it| charge(it.pos, it.k)).collect();
                push_all(&mut terms, &seq, twist);
            }
            Generator::BraidPos { pos } | Generator::BraidNeg { pos } => {
                let p = *pos;
                let sw = sqrt_omega(d)?;
                let rd = (d as f64).sqrt();
                let positive = matches!(g, Generator::BraidPos { .. });
                let w = if positive { 1.0 / (sw * rd) } else { sw / rd };
                let mut next = Vec::with_capacity(terms.len() * d);
                for t in &terms {
                    for k in 0..d as i64 {
                        let pair = if positive {
                            [charge(p, k), charge(p + 1, -k)]
                        } else {
                            [charge(p + 1, k), charge(p, -k)]
                        };
                        let mut items = t.items.clone();
                        items.extend_from_slice(&pair);
                        next.push(Term {
                            weight: t.weight * w,
                            phase: t.phase,
                            items,
                        });
                    }
                }
                terms = next;
            }
        }
    }
    Ok(terms)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn add(&mut self) -> usize {
        self.0.push(self.0.len());
        self.0.len() - 1
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// Marks the topmost cap of every loop; returns the loop count.
fn mark_anchors(items: &mut [Item]) -> usize {
    let mut uf = UnionFind(Vec::new());
    let mut strings: Vec<usize> = Vec::new();
    let mut caps = Vec::new();
    for (i, it) in items.iter().enumerate() {
        match *it {
            Item::Cap { pos, .. } => {
                let node = uf.add();
                strings.insert(pos - 1, node);
                strings.insert(pos - 1, node);
                caps.push((i, node));
            }
            Item::Cup { pos } => {
                let a = strings.remove(pos - 1);
                let b = strings.remove(pos - 1);
                uf.union(a, b);
            }
            Item::Charge { .. } => {}
        }
    }
    debug_assert!(strings.is_empty(), "diagram is not closed");
    let mut seen = Vec::new();
    for (i, node) in caps {
        let root = uf.find(node);
        if !seen.contains(&root) {
            seen.push(root);
            if let Item::Cap { anchor, .. } = &mut items[i] {
                *anchor = true;
            }
        }
    }
    seen.len()
}

/// Value of a closed braid-free item list as `(ζ exponent, loop count)`, or
/// `None` when some loop carries a nonzero charge.
fn reduce(d: usize, mut items: Vec<Item>) -> Option<(i64, usize)> {
    let dd = d as i64;
    let loops = mark_anchors(&mut items);
    items.retain(|it| !matches!(it, Item::Charge { k, .. } if k.rem_euclid(dd) == 0));
    let mut phase = 0i64;

    while let Some(start) = items
        .iter()
        .position(|it| matches!(it, Item::Charge { settled: false, .. }))
    {
        let Item::Charge { pos, k, .. } = items[start] else {
            unreachable!()
        };
        let (mut i, mut s, mut k, mut up) = (start, pos, k, true);
        let mut alive = true;
        let mut stopped = false;
        while alive && !stopped {
            let j = if up { i - 1 } else { i + 1 };
            match items[j] {
                Item::Charge { pos: t, k: l, .. } if t == s => {
                    k += l;
                    items.remove(i);
                    i = if up { j } else { j - 1 };
                    if k.rem_euclid(dd) == 0 {
                        items.remove(i);
                        alive = false;
                        continue;
                    }
                }
                Item::Charge { pos: t, k: l, .. } => {
                    let sign = if (s < t) == up { 1 } else { -1 };
                    phase += sign * 2 * k * l;
                    items.swap(i, j);
                    i = j;
                }
                Item::Cap { pos: p, anchor } if up => {
                    if s == p {
                        if anchor {
                            stopped = true;
                        } else {
                            s = p + 1;
                            phase += k * k;
                            up = false;
                        }
                    } else if s == p + 1 {
                        s = p;
                        phase -= k * k;
                        if anchor {
                            stopped = true;
                        } else {
                            up = false;
                        }
                    } else {
                        if s > p + 1 {
                            s -= 2;
                        }
                        items.swap(i, j);
                        i = j;
                    }
                }
                Item::Cup { pos: p } if !up => {
                    if s == p {
                        s = p + 1;
                        phase -= k * k;
                        up = true;
                    } else if s == p + 1 {
                        s = p;
                        phase += k * k;
                        up = true;
                    } else {
                        if s > p + 1 {
                            s -= 2;
                        }
                        items.swap(i, j);
                        i = j;
                    }
                }
                Item::Cup { pos: p } => {
                    // moving up past a cup
                    if s >= p {
                        s += 2;
                    }
                    items.swap(i, j);
                    i = j;
                }
                Item::Cap { pos: p, .. } => {
                    // moving down past a cap
                    if s >= p {
                        s += 2;
                    }
                    items.swap(i, j);
                    i = j;
                }
            }
            if alive {
                items[i] = Item::Charge {
                    pos: s,
                    k,
                    settled: stopped,
                };
            }
        }
        if stopped {
            if let Some(&Item::Charge { pos: t, k: l, .. }) = items.get(i + 1) {
                if t == s {
                    k += l;
                    items.remove(i + 1);
                    if k.rem_euclid(dd) == 0 {
                        items.remove(i);
                    } else {
                        items[i] = Item::Charge {
                            pos: s,
                            k,
                            settled: true,
                        };
                    }
                }
            }
        }
    }

    let charged = items
        .iter()
        .any(|it| matches!(it, Item::Charge { k, .. } if k.rem_euclid(dd) != 0));
    (!charged).then_some((phase, loops))
}

fn exact_value(d: usize, items: Vec<Item>) -> PhaseExponent {
    match reduce(d, items) {
        Some((phase, loops)) => PhaseExponent::new(d, phase, 2 * loops as i32),
        None => PhaseExponent::zero(d),
    }
}

/// Exact value of a closed diagram without braids.
pub fn closed_value(diag: &Diagram) -> Result<PhaseExponent> {
    if !diag.is_closed() {
        return Err(Error::Malformed(format!(
            "closed diagram expected, boundary is {} -> {}",
            diag.top(),
            diag.bottom()
        )));
    }
    if diag.braid_count() > 0 {
        return Err(Error::Malformed(
            "braids expand into sums; use evaluate_symbolic".into(),
        ));
    }
    let mut terms = expand(diag)?;
    let t = terms.pop().expect("braid-free diagrams expand to one term");
    Ok(diag.prefactor() * PhaseExponent::zeta(diag.d(), t.phase) * exact_value(diag.d(), t.items))
}

fn basis_items(d: usize, n: usize, mut idx: usize) -> (Vec<Item>, Vec<i64>) {
    let mut k = vec![0i64; n];
    for slot in k.iter_mut().rev() {
        *slot = (idx % d) as i64;
        idx /= d;
    }
    let mut items: Vec<Item> = (0..n)
        .map(|j| Item::Cap {
            pos: 2 * j + 1,
            anchor: false,
        })
        .collect();
    items.extend(
        k.iter()
            .enumerate()
            .filter(|(_, &kj)| kj != 0)
            .map(|(j, &kj)| charge(2 * j + 2, kj)),
    );
    (items, k)
}

fn cobasis_items(d: usize, n: usize, idx: usize) -> Vec<Item> {
    let (ket, _) = basis_items(d, n, idx);
    ket.iter()
        .rev()
        .map(|it| match *it {
            Item::Cap { pos, .. } => Item::Cup { pos },
            Item::Charge { pos, k, .. } => charge(pos, -k),
            Item::Cup { .. } => unreachable!(),
        })
        .collect()
}

/// Matrix of a diagram computed entry by entry from planar relations.
pub fn evaluate_symbolic(diag: &Diagram) -> Result<Operator> {
    let d = diag.d();
    let (n_in, n_out) = (diag.n_in(), diag.n_out());
    let terms = expand(diag)?;
    let cols = d.pow(n_in as u32);
    let rows = d.pow(n_out as u32);
    let norm = diag.prefactor() * PhaseExponent::root4_d(d, -((n_in + n_out) as i32));
    let norm = norm.to_complex();
    let data: Vec<Complex64> = (0..rows * cols)
        .into_par_iter()
        .map(|e| {
            let (r, c) = (e / cols, e % cols);
            let (ket, _) = basis_items(d, n_in, c);
            let bra = cobasis_items(d, n_out, r);
            let mut acc = Complex64::new(0.0, 0.0);
            for t in &terms {
                let mut items = Vec::with_capacity(ket.len() + t.items.len() + bra.len());
                items.extend_from_slice(&ket);
                items.extend_from_slice(&t.items);
                items.extend_from_slice(&bra);
                let v = PhaseExponent::zeta(d, t.phase) * exact_value(d, items);
                acc += t.weight * v.to_complex();
            }
            acc * norm
        })
        .collect();
    Operator::new(d, n_out, n_in, data)
}

use num_complex::Complex64;
use proptest::prelude::*;

use twostring::compression::{
    assemble_controlled, controlled_blocks, is_compressed, local_tensor, x_components,
};
use twostring::diagram::random::{random_diagram, RandomDiagramConfig};
use twostring::diagram::{diagram_to_json, evaluate_dense, evaluate_symbolic, parse_diagram};
use twostring::protocol::io::{random_blocks, random_components, random_input};
use twostring::protocol::{run_mct_controlled, run_mct_xcompressed, Mode};
use twostring::qudit::{embed_local, fourier, gauss, pauli, Operator, Pauli};
use twostring::random::{random_unitary, rng};
use twostring::scalar::{q_pow, zeta_pow, PhaseExponent};

const EPS: f64 = 1e-9;

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= EPS
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zeta_powers_add(d in 1usize..=12, a in -200i64..200, b in -200i64..200) {
        prop_assert!(close(zeta_pow(d, a) * zeta_pow(d, b), zeta_pow(d, a + b)));
        prop_assert!(close(zeta_pow(d, 2 * a), q_pow(d, a)));
        prop_assert!(close(zeta_pow(d, a + (2 * d * d) as i64), zeta_pow(d, a)));
    }

    #[test]
    fn phase_exponent_product_matches_floats(
        d in 1usize..=9,
        a in -50i64..50, b in -50i64..50,
        r in -6i32..6, s in -6i32..6,
    ) {
        let x = PhaseExponent::new(d, a, r);
        let y = PhaseExponent::new(d, b, s);
        let p = (x * y).to_complex();
        prop_assert!((p - x.to_complex() * y.to_complex()).norm() <= EPS * p.norm().max(1.0));
        prop_assert!(((x * x.inv()).to_complex() - 1.0).norm() <= EPS);
        prop_assert!(close(x.conj().to_complex(), x.to_complex().conj()));
    }

    #[test]
    fn fourier_and_gauss_conjugations(d in 2usize..=8) {
        let f = fourier(d).unwrap();
        let g = gauss(d).unwrap();
        let x = pauli(d, Pauli::X).unwrap();
        let y = pauli(d, Pauli::Y).unwrap();
        let z = pauli(d, Pauli::Z).unwrap();
        let fxf = f.compose(&x).unwrap().compose(&f.adjoint()).unwrap();
        prop_assert!(fxf.max_deviation(&z).unwrap() <= EPS);
        let gxg = g.compose(&x).unwrap().compose(&g.adjoint()).unwrap();
        prop_assert!(gxg.max_deviation(&y.adjoint()).unwrap() <= EPS);
    }

    #[test]
    fn controlled_round_trip(seed in any::<u64>(), d in 2usize..=3, n in 2usize..=3, j in 1usize..=3) {
        let j = j.min(n);
        let mut r = rng(seed);
        let blocks: Vec<Operator> = (0..d).map(|_| random_unitary(&mut r, d, n - 1)).collect();
        let t = assemble_controlled(&blocks, j, n).unwrap();
        prop_assert!(is_compressed(&t, j, Pauli::Z).unwrap());
        let back = controlled_blocks(&t, j).unwrap();
        for (a, b) in back.blocks.iter().zip(&blocks) {
            prop_assert!(a.max_deviation(b).unwrap() <= EPS);
        }
        prop_assert!(back.reassemble().unwrap().max_deviation(&t).unwrap() <= EPS);
    }

    #[test]
    fn compression_transports_under_fourier_and_gauss(
        seed in any::<u64>(), d in 2usize..=3, n in 2usize..=3, j in 1usize..=3,
    ) {
        let j = j.min(n);
        let mut r = rng(seed);
        let blocks: Vec<Operator> = (0..d).map(|_| random_unitary(&mut r, d, n - 1)).collect();
        let t = assemble_controlled(&blocks, j, n).unwrap();
        let fj = embed_local(&fourier(d).unwrap(), j, n).unwrap();
        let gj = embed_local(&gauss(d).unwrap(), j, n).unwrap();
        // F X F⁻¹ = Z, so F⁻¹ T F commutes with X_j
        let tx = fj.adjoint().compose(&t).unwrap().compose(&fj).unwrap();
        prop_assert!(is_compressed(&tx, j, Pauli::X).unwrap());
        let dec = x_components(&tx, j).unwrap();
        prop_assert!(dec.reassemble().unwrap().max_deviation(&tx).unwrap() <= EPS);
        // G is diagonal, so conjugating keeps Z-compression
        let tg = gj.compose(&t).unwrap().compose(&gj.adjoint()).unwrap();
        prop_assert!(is_compressed(&tg, j, Pauli::Z).unwrap());
    }

    #[test]
    fn generic_unitaries_are_not_compressed(seed in any::<u64>(), d in 2usize..=3) {
        let t = random_unitary(&mut rng(seed), d, 2);
        prop_assert!(!is_compressed(&t, 1, Pauli::Z).unwrap());
        prop_assert!(!is_compressed(&t, 2, Pauli::X).unwrap());
        let wrapped = local_tensor(&Operator::identity(d, 1), 1, &t).unwrap();
        prop_assert!(is_compressed(&wrapped, 1, Pauli::Z).unwrap());
    }

    #[test]
    fn backends_agree_on_random_diagrams(seed in any::<u64>(), d in 2usize..=4) {
        let diag = random_diagram(&mut rng(seed), d, RandomDiagramConfig::default());
        let a = evaluate_dense(&diag).unwrap();
        let b = evaluate_symbolic(&diag).unwrap();
        prop_assert!(a.max_deviation(&b).unwrap() <= EPS, "{:?}", diag);
    }

    #[test]
    fn diagram_json_round_trip(seed in any::<u64>(), d in 2usize..=4) {
        let diag = random_diagram(&mut rng(seed), d, RandomDiagramConfig::default());
        let text = diagram_to_json(&diag).to_string();
        let back = parse_diagram(&text).unwrap();
        prop_assert_eq!(back, diag);
    }

    #[test]
    fn adjoint_and_stacking(seed in any::<u64>(), d in 2usize..=3) {
        let mut r = rng(seed);
        let a = random_diagram(&mut r, d, RandomDiagramConfig::default());
        let ea = evaluate_dense(&a).unwrap();
        let adj = evaluate_dense(&a.adjoint()).unwrap();
        prop_assert!(adj.max_deviation(&ea.adjoint()).unwrap() <= EPS);
        let stacked = a.then(&a.adjoint()).unwrap();
        let lhs = evaluate_symbolic(&stacked).unwrap();
        let rhs = ea.adjoint().compose(&ea).unwrap();
        prop_assert!(lhs.max_deviation(&rhs).unwrap() <= EPS * rhs.max_norm().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn protocol_matches_on_every_branch(seed in any::<u64>(), d in 2usize..=3, n in 1usize..=2) {
        let mut r = rng(seed);
        let blocks = random_blocks(&mut r, d, n);
        let input = random_input(&mut r, d, n);
        let run = run_mct_controlled(d, &blocks, &input, &Mode::AllBranches).unwrap();
        prop_assert!(run.all_matched());
        prop_assert!((run.total_prob - 1.0).abs() <= EPS);
        prop_assert!(run.cost.matches_expected_cost(n));

        let comps = random_components(&mut r, d, n).unwrap();
        let run = run_mct_xcompressed(d, &comps, &input, &Mode::AllBranches).unwrap();
        prop_assert!(run.all_matched());
        prop_assert!(run.cost.matches_expected_cost(n));
    }

    #[test]
    fn sampled_branches_match(seed in any::<u64>(), d in 2usize..=3) {
        let mut r = rng(seed);
        let blocks = random_blocks(&mut r, d, 3);
        let input = random_input(&mut r, d, 3);
        let run = run_mct_controlled(d, &blocks, &input, &Mode::Sample { seed, shots: 4 }).unwrap();
        prop_assert_eq!(run.branches.len(), 4);
        for b in &run.branches {
            prop_assert!(b.matched);
            let uniform = 1.0 / (d.pow(4) as f64);
            prop_assert!((b.prob - uniform).abs() <= EPS);
        }
    }
}

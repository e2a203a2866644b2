//! Checks the teleportation-style GHZ expansion against the simulator.
//!
//! `|P> ⊗ GHZ` with `|P> = a|0> + b|1>` expands over Alice's Bell outcome
//! and Bob's X outcome as `1/(2 sqrt 2) * sign * |Bell>|±>|v>`, where the
//! Trent vectors `v` are written out by hand below.

use aqs_core::{BellOutcome, CorrectionTable, PauliLetter, PauliString, Qubit, State, StateVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Hand-expanded branch `(sign, Trent vector)` for `(outcome, x_bit)`.
fn analytic_branch(outcome: BellOutcome, minus: bool, a: Complex64, b: Complex64) -> (f64, [Complex64; 2]) {
    use BellOutcome::*;
    let v = match (outcome, minus) {
        (PhiPlus, false) => [a, b],
        (PhiPlus, true) => [a, -b],
        (PhiMinus, false) => [a, -b],
        (PhiMinus, true) => [a, b],
        (PsiPlus, false) => [b, a],
        (PsiPlus, true) => [b, -a],
        (PsiMinus, false) => [b, -a],
        (PsiMinus, true) => [b, a],
    };
    let sign = if outcome == PsiMinus { -1.0 } else { 1.0 };
    (sign, v)
}

fn joint(q: Qubit<f64>) -> State {
    StateVector::product(&[q]).unwrap().tensor(&StateVector::ghz())
}

#[test]
fn simulated_branches_match_hand_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let scale = 1.0 / (2.0 * 2f64.sqrt());
    for _ in 0..100 {
        let q = aqs_core::haar_random_qubit::<f64, _>(&mut rng);
        let branches = joint(q).bell_branches(0, 1).unwrap();
        for (k, outcome) in BellOutcome::ALL.into_iter().enumerate() {
            // unnormalized (Bob, Trent) amplitudes, then project Bob onto |±>
            let bt = StateVectorRaw(branches[k].clone());
            for minus in [false, true] {
                let trent = bt.project_bob(minus);
                let (sign, v) = analytic_branch(outcome, minus, q.a, q.b);
                for j in 0..2 {
                    let expected = v[j] * (sign * scale);
                    assert!((trent[j] - expected).norm() < 1e-12, "{outcome} minus={minus}");
                }
            }
        }
    }
}

/// Raw two-qubit amplitudes (Bob, Trent), unnormalized.
struct StateVectorRaw(Vec<Complex64>);

impl StateVectorRaw {
    fn project_bob(&self, minus: bool) -> [Complex64; 2] {
        let s = if minus { -1.0 } else { 1.0 };
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // <±|_Bob: amplitude over Trent t is (amp[0t] ± amp[1t]) / sqrt 2
        [(self.0[0] + self.0[2] * s) * h, (self.0[1] + self.0[3] * s) * h]
    }
}

#[test]
fn every_bell_outcome_has_probability_one_quarter() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let q = aqs_core::haar_random_qubit::<f64, _>(&mut rng);
        for b in joint(q).bell_branches(0, 1).unwrap() {
            let p: f64 = b.iter().map(|z| z.norm_sqr()).sum();
            assert!((p - 0.25).abs() < 1e-12);
        }
    }
}

#[test]
fn bob_x_outcome_is_unbiased_for_every_alice_outcome() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let q = aqs_core::haar_random_qubit::<f64, _>(&mut rng);
        let branches = joint(q).bell_branches(0, 1).unwrap();
        for b in branches {
            let norm: f64 = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let residual = StateVector::from_amplitudes(b.iter().map(|z| z / norm).collect()).unwrap();
            for xb in residual.x_branches(0).unwrap() {
                let p: f64 = xb.iter().map(|z| z.norm_sqr()).sum();
                assert!((p - 0.5).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn psi_plus_residual_matches_quoted_form() {
    // {|+>(b|0> + a|1>) + |->(b|0> - a|1>)} / sqrt 2 on (Bob, Trent)
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let q = aqs_core::haar_random_qubit::<f64, _>(&mut rng);
    let mut r = ChaCha8Rng::seed_from_u64(0);
    let (outcome, residual) = loop {
        let (o, s) = joint(q).measure_bell(0, 1, &mut r).unwrap();
        if o == BellOutcome::PsiPlus {
            break (o, s);
        }
    };
    assert_eq!(outcome, BellOutcome::PsiPlus);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus_part = StateVector::product(&[Qubit::plus(), Qubit { a: q.b, b: q.a }]).unwrap();
    let minus_part = StateVector::product(&[Qubit::minus(), Qubit { a: q.b, b: -q.a }]).unwrap();
    for i in 0..4 {
        let expected = (plus_part.amplitudes()[i] + minus_part.amplitudes()[i]) * h;
        assert!((residual.amplitudes()[i] - expected).norm() < 1e-12);
    }
}

/// Brute force: which single-qubit Pauli maps Trent's residual back to `|P>`?
fn brute_force_correction(residual: &State, target: &State) -> PauliLetter {
    let hits: Vec<PauliLetter> = PauliLetter::ALL
        .into_iter()
        .filter(|&l| {
            PauliString::from_letters(vec![l]).apply(residual).unwrap().equal_up_to_global_phase(target, 1e-9).unwrap()
        })
        .collect();
    assert_eq!(hits.len(), 1, "generic message should have a unique correction");
    hits[0]
}

#[test]
fn correction_table_matches_brute_force_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        let q = aqs_core::haar_random_qubit::<f64, _>(&mut rng);
        let target = StateVector::product(&[q]).unwrap();
        let branches = joint(q).bell_branches(0, 1).unwrap();
        for (k, outcome) in BellOutcome::ALL.into_iter().enumerate() {
            let norm: f64 = branches[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let bt = StateVector::from_amplitudes(branches[k].iter().map(|z| z / norm).collect()).unwrap();
            for (x_bit, tb) in bt.x_branches(0).unwrap().into_iter().enumerate() {
                let tn: f64 = tb.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let trent = StateVector::from_amplitudes(tb.iter().map(|z| z / tn).collect()).unwrap();
                let oracle = brute_force_correction(&trent, &target);
                assert_eq!(CorrectionTable::letter(outcome, x_bit == 1), oracle, "{outcome} x={x_bit}");
                let corrected = CorrectionTable::correction(outcome, x_bit == 1).apply(&trent).unwrap();
                assert!((corrected.fidelity(&target).unwrap() - 1.0).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn correction_table_has_expected_shape() {
    use BellOutcome::*;
    use PauliLetter::*;
    let expected = [
        ((PhiPlus, false), I),
        ((PhiPlus, true), Z),
        ((PhiMinus, false), Z),
        ((PhiMinus, true), I),
        ((PsiPlus, false), X),
        ((PsiPlus, true), Y),
        ((PsiMinus, false), Y),
        ((PsiMinus, true), X),
    ];
    for ((o, x), letter) in expected {
        assert_eq!(CorrectionTable::letter(o, x), letter, "{o} {x}");
    }
    assert_eq!(CorrectionTable::entries().len(), 8);
}

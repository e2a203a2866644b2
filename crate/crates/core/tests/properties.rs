//! Algebraic and statistical invariants. Dense matrices built here by
//! Kronecker products serve as the oracle for the symbolic Pauli layer.

use aqs_core::{
    decrypt_with, encrypt_with, haar_random_qubit, swap_test, BellOutcome, CMatrix, Gate, KeyBits, Matrix, PauliLetter,
    PauliString, Qubit, Scheme, State, StateVector,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn letter() -> impl Strategy<Value = PauliLetter> {
    prop::sample::select(PauliLetter::ALL.to_vec())
}

fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
    (0u8..4, prop::collection::vec(letter(), n)).prop_map(|(k, l)| PauliString::new(k, l))
}

fn random_state(n: usize, seed: u64) -> State {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // generic (entangled) state: random complex amplitudes, normalized
    let raw: Vec<Complex64> = (0..1 << n)
        .map(|_| {
            let q = haar_random_qubit::<f64, _>(&mut rng);
            q.a * 2.0 - q.b
        })
        .collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(raw.into_iter().map(|z| z / norm).collect()).unwrap()
}

fn dense(p: &PauliString) -> Matrix {
    let mut m = CMatrix::identity(1);
    for l in p.letters() {
        let g: Gate = match l {
            PauliLetter::I => Gate::identity(),
            PauliLetter::X => Gate::pauli_x(),
            PauliLetter::Y => Gate::pauli_y(),
            PauliLetter::Z => Gate::pauli_z(),
        };
        m = m.kron(&g.to_matrix());
    }
    let phase = Complex64::i().powu(p.phase_exponent() as u32);
    m.scale(phase)
}

proptest! {
    #[test]
    fn multiplication_is_associative((p, q, r) in (pauli(3), pauli(3), pauli(3))) {
        let left = p.multiply(&q).unwrap().multiply(&r).unwrap();
        let right = p.multiply(&q.multiply(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn square_is_plus_or_minus_identity(p in pauli(4)) {
        let sq = p.multiply(&p).unwrap();
        prop_assert!(sq.is_identity_up_to_phase());
        prop_assert!(sq.phase_exponent() % 2 == 0);
    }

    #[test]
    fn product_matches_dense_matrices((p, q) in (pauli(3), pauli(3))) {
        let sym = dense(&p.multiply(&q).unwrap());
        let num = &dense(&p) * &dense(&q);
        prop_assert!(sym.max_abs_diff(&num) < 1e-12);
    }

    #[test]
    fn commutation_sign_matches_dense_commutator((p, q) in (pauli(3), pauli(3))) {
        let pq = &dense(&p) * &dense(&q);
        let qp = &dense(&q) * &dense(&p);
        let commute = pq.max_abs_diff(&qp) < 1e-12;
        let anticommute = pq.max_abs_diff(&qp.scale(Complex64::new(-1.0, 0.0))) < 1e-12;
        prop_assert!(commute ^ anticommute);
        prop_assert_eq!(p.commutation_sign(&q).unwrap(), if commute { 1 } else { -1 });
    }

    #[test]
    fn action_matches_dense_matrix((p, seed) in (pauli(3), any::<u64>())) {
        let s = random_state(3, seed);
        let got = p.apply(&s).unwrap();
        let expected = dense(&p).apply(s.amplitudes());
        for (a, b) in got.amplitudes().iter().zip(&expected) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn composed_action_keeps_exact_phase((p, q, seed) in (pauli(3), pauli(3), any::<u64>())) {
        let s = random_state(3, seed);
        let product = p.multiply(&q).unwrap().apply(&s).unwrap();
        let sequential = p.apply(&q.apply(&s).unwrap()).unwrap();
        prop_assert!(product.max_abs_diff(&sequential).unwrap() < 1e-12);
    }

    #[test]
    fn hadamard_conjugation_is_an_involution((p, mask) in (pauli(4), prop::collection::vec(any::<bool>(), 4))) {
        let positions: Vec<usize> = mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
        let twice = p.conjugate_by_hadamard(&positions).unwrap().conjugate_by_hadamard(&positions).unwrap();
        prop_assert_eq!(twice, p);
    }

    /// Q E R = s E R Q with s the product of the two commutation signs.
    #[test]
    fn pauli_forgery_identity((q, e, r) in (pauli(4), pauli(4), pauli(4))) {
        let lhs = q.multiply(&e).unwrap().multiply(&r).unwrap();
        let er_q = e.multiply(&r).unwrap().multiply(&q).unwrap();
        let s = q.commutation_sign(&e).unwrap() * q.commutation_sign(&r).unwrap();
        let expected = if s == 1 { er_q.clone() } else { er_q.with_phase(er_q.phase_exponent() + 2) };
        prop_assert_eq!(lhs, expected);
    }

    #[test]
    fn gates_preserve_norm((seed, target, angles) in (any::<u64>(), 0usize..4, prop::array::uniform4(-3.0f64..3.0))) {
        let g = Gate::from_angles(angles[0], angles[1], angles[2], angles[3]);
        let s = random_state(4, seed).apply_gate(&g, target).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn measurements_preserve_norm((seed, q1, q2) in (any::<u64>(), 0usize..4, 0usize..4)) {
        prop_assume!(q1 != q2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_state(4, seed);
        let (_, after_bell) = s.measure_bell(q1, q2, &mut rng).unwrap();
        prop_assert!((after_bell.norm_sqr() - 1.0).abs() < 1e-9);
        let (_, after_x) = s.measure_x(q1, &mut rng).unwrap();
        prop_assert!((after_x.norm_sqr() - 1.0).abs() < 1e-9);
        prop_assert_eq!(after_x.num_qubits(), 3);
    }

    /// Decrypting a Pauli-tampered Pauli ciphertext yields the tampered plaintext up to phase.
    #[test]
    fn pauli_encryption_is_transparent_to_paulis((q, seed, keybits) in (pauli(2), any::<u64>(), prop::collection::vec(any::<(bool, bool)>(), 2))) {
        let keys: Vec<KeyBits> = keybits.iter().map(|&(x, z)| KeyBits::new(x, z)).collect();
        let s = random_state(2, seed);
        let scheme = Scheme::Pauli;
        let tampered = q.apply(&encrypt_with(&s, &keys, &scheme).unwrap()).unwrap();
        let got = decrypt_with(&tampered, &keys, &scheme).unwrap();
        prop_assert!(got.equal_up_to_global_phase(&q.apply(&s).unwrap(), 1e-9).unwrap());
    }
}

/// 3-sigma binomial bound.
fn within_3_sigma(hits: usize, shots: usize, p: f64) -> bool {
    let mean = shots as f64 * p;
    let sd = (shots as f64 * p * (1.0 - p)).sqrt();
    (hits as f64 - mean).abs() <= 3.0 * sd.max(1e-12)
}

#[test]
fn bell_measurement_follows_born_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let s = random_state(3, 99);
    let branches = s.bell_branches(0, 2).unwrap();
    let probs: Vec<f64> = branches.iter().map(|b| b.iter().map(|z| z.norm_sqr()).sum()).collect();
    let shots = 10_000;
    let mut counts = [0usize; 4];
    for _ in 0..shots {
        let (o, _) = s.measure_bell(0, 2, &mut rng).unwrap();
        counts[o.bits() as usize] += 1;
    }
    for o in BellOutcome::ALL {
        let k = BellOutcome::ALL.iter().position(|&b| b == o).unwrap();
        assert!(within_3_sigma(counts[o.bits() as usize], shots, probs[k]), "{o}: {counts:?} vs {probs:?}");
    }
}

#[test]
fn x_measurement_follows_born_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let zero = StateVector::<f64>::zeros(1);
    let shots = 10_000;
    let ones = (0..shots).filter(|_| zero.measure_x(0, &mut rng).unwrap().0).count();
    assert!(within_3_sigma(ones, shots, 0.5));

    let s = random_state(2, 7);
    let [plus, _] = s.x_branches(1).unwrap();
    let p_plus: f64 = plus.iter().map(|z| z.norm_sqr()).sum();
    let plus_hits = (0..shots).filter(|_| !s.measure_x(1, &mut rng).unwrap().0).count();
    assert!(within_3_sigma(plus_hits, shots, p_plus));
}

#[test]
fn bob_marginal_is_unbiased_after_alice_measures() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let shots = 10_000;
    let mut ones = 0;
    for _ in 0..shots {
        let q = haar_random_qubit::<f64, _>(&mut rng);
        let joint = StateVector::product(&[q]).unwrap().tensor(&StateVector::ghz());
        let (_, bt) = joint.measure_bell(0, 1, &mut rng).unwrap();
        ones += usize::from(bt.measure_x(0, &mut rng).unwrap().0);
    }
    assert!(within_3_sigma(ones, shots, 0.5));
}

#[test]
fn swap_test_law_over_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let shots = 10_000;
    for seed in 0..3u64 {
        let a = random_state(2, seed);
        let b = random_state(2, seed + 100);
        let f = a.fidelity(&b).unwrap();
        let hits = (0..shots).filter(|_| swap_test(&a, &b, &mut rng).unwrap()).count();
        assert!(within_3_sigma(hits, shots, (1.0 + f) / 2.0), "overlap {f}: {hits}");
    }
}

#[test]
fn haar_messages_make_valid_product_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let qs: Vec<Qubit<f64>> = (0..6).map(|_| haar_random_qubit(&mut rng)).collect();
    let s = StateVector::product(&qs).unwrap();
    assert_eq!(s.num_qubits(), 6);
    assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
}

//! Invariants checked on random instances.

mod common;

use proptest::prelude::*;
use qchd::bounds::{evaluate_combination, harrow_ansatz_coefficients, kraus_product_span};
use qchd::channels::{bloch_affine_of, harrow_channels, KrausChannel};
use qchd::divergences::{classical_renyi, nussbaum_szkola, renyi_divergence};
use qchd::io::ChannelFile;
use qchd::linalg::{hermitian_eig_of, partial_trace, random, trace_norm, ComplexMatrix, DensityMatrix, C64};
use qchd::strategies::helstrom_error;

/// Channel from a Haar isometry C^din -> C^k (x) C^dout.
fn random_channel(din: usize, dout: usize, k: usize, seed: u64) -> KrausChannel {
    let mut rng = random::stream_rng(seed, 1);
    let u = random::haar_unitary(k * dout, &mut rng);
    let kraus = (0..k)
        .map(|i| ComplexMatrix::from_fn(dout, din, |r, c| u[(i * dout + r, c)]))
        .collect();
    KrausChannel::new(kraus).unwrap()
}

fn state(d: usize, seed: u64, stream: u64) -> DensityMatrix {
    let mut rng = random::stream_rng(seed, stream);
    random::random_density(d, d, &mut rng)
}

fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .all(|(x, y)| (x - y).norm() <= tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigensolver_agrees_with_reference(d in 1usize..7, seed in any::<u64>()) {
        let rho = state(d, seed, 0);
        let e = hermitian_eig_of(rho.matrix()).unwrap();
        prop_assert!(close(&e.reconstruct(), rho.matrix(), 1e-12));
        let reference = common::eigenvalues(rho.matrix());
        for (x, y) in e.eigenvalues.iter().zip(&reference) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_product(da in 1usize..4, db in 1usize..4, seed in any::<u64>()) {
        let (a, b) = (state(da, seed, 0), state(db, seed, 1));
        let ab = a.kron(&b);
        let back = partial_trace(&ab, &[da, db], &[0]).unwrap();
        prop_assert!(close(back.matrix(), a.matrix(), 1e-12));
        let back = partial_trace(&ab, &[da, db], &[1]).unwrap();
        prop_assert!(close(back.matrix(), b.matrix(), 1e-12));
    }

    #[test]
    fn helstrom_is_half_minus_quarter_trace_distance(d in 1usize..5, seed in any::<u64>()) {
        let (r, s) = (state(d, seed, 0), state(d, seed, 1));
        let diff = ComplexMatrix::from_fn(d, d, |i, j| r.matrix()[(i, j)] - s.matrix()[(i, j)]);
        let t = trace_norm(&diff).unwrap();
        prop_assert!((0.0..=2.0 + 1e-12).contains(&t));
        let reference: f64 = common::eigenvalues(&diff).iter().map(|x| x.abs()).sum();
        prop_assert!((t - reference).abs() < 1e-10);
        prop_assert!((helstrom_error(&r, &s).unwrap() - 0.5 * (1.0 - 0.5 * t)).abs() < 1e-12);
    }

    #[test]
    fn channels_map_states_to_states(din in 1usize..4, dout in 1usize..4, k in 1usize..4, seed in any::<u64>()) {
        prop_assume!(k * dout >= din);
        let ch = random_channel(din, dout, k, seed);
        prop_assert!(ch.completeness_residual() < 1e-12);
        let out = ch.apply(&state(din, seed, 2)).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(common::eigenvalues(out.matrix())[0] > -1e-12);
    }

    #[test]
    fn tensor_product_acts_on_products(seed in any::<u64>()) {
        let ch = random_channel(2, 2, 2, seed);
        let (a, b) = (state(2, seed, 3), state(2, seed, 4));
        let both = ch.tensor(&ch, 64).unwrap().apply(&a.kron(&b)).unwrap();
        let want = ch.apply(&a).unwrap().kron(&ch.apply(&b).unwrap());
        prop_assert!(close(both.matrix(), want.matrix(), 1e-12));
    }

    #[test]
    fn bloch_form_matches_kraus_action(seed in any::<u64>()) {
        let ch = random_channel(2, 2, 3, seed);
        let aff = bloch_affine_of(&ch).unwrap();
        let rho = state(2, seed, 5);
        let v = rho.bloch_vector().unwrap();
        let w = ch.apply(&rho).unwrap().bloch_vector().unwrap();
        let m = aff.map_bloch(v);
        for i in 0..3 {
            prop_assert!((m[i] - w[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn nussbaum_szkola_preserves_renyi(d in 1usize..5, a in 0.05f64..0.95, seed in any::<u64>()) {
        let (r, s) = (state(d, seed, 0), state(d, seed, 1));
        let (p, q) = nussbaum_szkola(&r, &s).unwrap();
        let dq = renyi_divergence(&r, &s, a).unwrap().value;
        prop_assert!((dq - classical_renyi(&p, &q, a).unwrap().value).abs() < 1e-9);
        prop_assert!((dq - common::renyi(&r, &s, a)).abs() < 1e-9);
    }

    #[test]
    fn combination_is_scale_free_and_phase_sensitive(scale in 0.1f64..10.0, theta in 0.0f64..1.5) {
        let (m, mb) = harrow_channels();
        let span = kraus_product_span(&m, &mb).unwrap();
        let base = harrow_ansatz_coefficients();
        let l0 = evaluate_combination(&span, &base).unwrap().lambda_min;
        let scaled: Vec<C64> = base.iter().map(|c| c * scale).collect();
        prop_assert!((evaluate_combination(&span, &scaled).unwrap().lambda_min - l0).abs() < 1e-12);
        let phase = C64::from_polar(1.0, theta);
        let rotated: Vec<C64> = base.iter().map(|c| c * phase).collect();
        match evaluate_combination(&span, &rotated) {
            Ok(pc) => prop_assert!((pc.lambda_min - theta.cos() * l0).abs() < 1e-10),
            // cos(theta) l0 below the positivity threshold
            Err(_) => prop_assert!(theta.cos() * l0 <= 1e-9 + 1e-12),
        }
    }

    #[test]
    fn channel_files_round_trip(din in 1usize..4, dout in 1usize..4, seed in any::<u64>()) {
        let ch = random_channel(din, dout, 3, seed);
        let text = serde_json::to_string(&ChannelFile::from_channel(&ch)).unwrap();
        let back: ChannelFile = serde_json::from_str(&text).unwrap();
        let back = back.to_channel().unwrap();
        for (x, y) in ch.kraus().iter().zip(back.kraus()) {
            prop_assert!(close(x, y, 0.0));
        }
    }
}

mod common;

use std::time::Instant;

use common::{bisect, c, char_poly, discriminant_real, poly_roots};
use crossstitch_core::linalg::match_multisets;
use crossstitch_core::spectra::{self, TrackConfig};
use crossstitch_core::{FiniteLattice, LatticeParams};
use proptest::prelude::*;

fn chain(n: usize, t: f64, d: f64, delta: f64, gamma: f64, loss: f64) -> FiniteLattice {
    FiniteLattice::with_loss(n, LatticeParams::new(t, d, delta, gamma).unwrap(), loss).unwrap()
}

#[test]
fn four_site_roots_match_characteristic_polynomial() {
    let fl = chain(2, 1.0, 1.0, 0.0, 1.0, 0.0);
    let h = spectra::assemble_hamiltonian(&fl);
    let oracle = poly_roots(&char_poly(&h));
    let s = spectra::eigenvalues(&fl, 1e-10).unwrap();
    let m = match_multisets(&s.values, &oracle).unwrap();
    assert!(m.max_distance < 1e-9, "{:?} vs {oracle:?}", s.values);
    // Frozen from the oracle: 1 +- i/2 and -1 +- sqrt(3.75).
    let frozen = [
        c(1.0, 0.5),
        c(1.0, -0.5),
        c(-1.0 + 3.75f64.sqrt(), 0.0),
        c(-1.0 - 3.75f64.sqrt(), 0.0),
    ];
    assert!(match_multisets(&s.values, &frozen).unwrap().max_distance < 1e-9);
}

#[test]
fn flat_band_multiplicity_at_hundred_cells() {
    let start = Instant::now();
    let fl = chain(100, 1.0, 1.0, 0.0, 0.0, 0.0);
    let s = spectra::eigenvalues(&fl, 1e-10).unwrap();
    assert_eq!(s.len(), 200);
    assert_eq!(s.multiplicity_near(c(1.0, 0.0), 1e-9), 100);
    for v in &s.values {
        assert!(v.im.abs() < 1e-9);
        if (v.re - 1.0).abs() > 1e-9 {
            assert!(v.re > -5.0 && v.re < 3.0, "{v}");
        }
    }
    assert!(start.elapsed().as_secs_f64() < 5.0);
}

#[test]
fn open_chain_dispersive_values_are_chain_modes() {
    // The symmetric cell combination is a uniform chain with on-site -t and
    // hopping -2d, whose open-chain modes are -t - 4d cos(j pi / (N + 1)).
    let n = 30;
    let s = spectra::eigenvalues(&chain(n, 1.0, 1.0, 0.0, 0.0, 0.0), 1e-10).unwrap();
    let mut want: Vec<_> = (1..=n)
        .map(|j| {
            c(
                -1.0 - 4.0 * (j as f64 * std::f64::consts::PI / (n + 1) as f64).cos(),
                0.0,
            )
        })
        .collect();
    want.extend(std::iter::repeat_n(c(1.0, 0.0), n));
    assert!(match_multisets(&s.values, &want).unwrap().max_distance < 1e-10);
}

#[test]
fn dimer_ep_matches_discriminant_root() {
    let template = chain(2, 1.0, 0.5, 0.0, 0.0, 0.0);
    let disc = |g: f64| {
        let h = spectra::assemble_hamiltonian(&template.with_params(LatticeParams::new(1.0, 0.5, 0.0, g).unwrap()));
        let coeffs: Vec<f64> = char_poly(&h).iter().map(|z| z.re).collect();
        discriminant_real(&coeffs)
    };
    let oracle = bisect(0.9, 1.1, disc);
    let gammas: Vec<f64> = (0..=40).map(|i| 0.805 + 0.01 * i as f64).collect();
    let r = (0.25f64 - 0.805f64 * 0.805 / 4.0).sqrt();
    let trace = spectra::trace_pair_vs_gamma(
        &template,
        &gammas,
        [c(0.5 + r, 0.0), c(0.5 - r, 0.0)],
        &TrackConfig {
            continuity_bound: 0.1,
            ..Default::default()
        },
    )
    .unwrap();
    let ep = trace.ep.unwrap();
    assert!((ep.gamma - oracle).abs() < 1e-6, "{ep:?} vs {oracle}");
    assert!(ep.distance < 1e-5, "{ep:?}");
}

#[test]
fn pair_goes_real_then_conjugate() {
    // Six cells: the two real eigenvalues near 1.05 and 1.44 at gamma = 0.3
    // coalesce and split into a conjugate pair.
    let template = chain(6, 1.0, 1.0, 0.0, 0.0, 0.0);
    let g0 = 0.3;
    let s = spectra::eigenvalues(&template.with_params(LatticeParams::pt_symmetric(g0).unwrap()), 1e-9).unwrap();
    let pick = |z: f64| {
        *s.values
            .iter()
            .min_by(|a, b| (*a - c(z, 0.0)).norm().total_cmp(&(*b - c(z, 0.0)).norm()))
            .unwrap()
    };
    let seeds = [pick(1.05), pick(1.44)];
    assert!(seeds.iter().all(|v| v.im.abs() < 1e-9));
    let gammas: Vec<f64> = (0..=2000).map(|i| g0 + 1.2 * i as f64 / 2000.0).collect();
    let cfg = TrackConfig {
        continuity_bound: 0.03,
        ..Default::default()
    };
    let tr = spectra::trace_pair_vs_gamma(&template, &gammas, seeds, &cfg).unwrap();
    let ep = tr.ep.expect("pair should coalesce");
    assert!(ep.gamma > 0.3 && ep.gamma < 0.6, "{ep:?}");
    assert!(ep.energy.im.abs() < 1e-6);
    let [a, b] = *tr.tracks.last().unwrap();
    assert!(a.im.abs() > 0.1, "{a} {b} {ep:?}");
    assert!((a - b.conj()).norm() < 1e-9);
    let jumps = tr
        .tracks
        .windows(2)
        .map(|w| (w[1][0] - w[0][0]).norm().max((w[1][1] - w[0][1]).norm()));
    assert!(jumps.fold(0.0, f64::max) <= cfg.continuity_bound);
}

#[test]
fn gamma_shift_theorem_at_hundred_cells() {
    for gamma in [0.0, 0.5, 1.0] {
        let base = spectra::eigenvalues(&chain(100, 1.0, 1.0, 0.0, gamma, 0.0), 1e-10).unwrap();
        for loss in [0.1, 0.5] {
            let lossy = spectra::eigenvalues(&chain(100, 1.0, 1.0, 0.0, gamma, loss), 1e-10).unwrap();
            let shifted: Vec<_> = base.values.iter().map(|v| v - c(0.0, loss)).collect();
            let m = match_multisets(&lossy.values, &shifted).unwrap();
            assert!(m.max_distance <= 1e-10, "gamma {gamma} loss {loss}: {}", m.max_distance);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_shift_theorem(n in 1usize..12, t in -2.0..2.0f64, d in 0.2..2.0f64, delta in -1.0..1.0f64,
                           gamma in 0.0..3.0f64, loss in 0.0..1.0f64) {
        let base = spectra::eigenvalues(&chain(n, t, d, delta, gamma, 0.0), 1e-9).unwrap();
        let lossy = spectra::eigenvalues(&chain(n, t, d, delta, gamma, loss), 1e-9).unwrap();
        let shifted: Vec<_> = base.values.iter().map(|v| v - c(0.0, loss)).collect();
        prop_assert!(match_multisets(&lossy.values, &shifted).unwrap().max_distance <= 1e-10);
    }

    #[test]
    fn pt_spectrum_closed_under_conjugation(n in 1usize..12, t in -2.0..2.0f64, d in 0.2..2.0f64,
                                            gamma in 0.0..3.0f64) {
        let s = spectra::eigenvalues(&chain(n, t, d, 0.0, gamma, 0.0), 1e-9).unwrap();
        let conj: Vec<_> = s.values.iter().map(|v| v.conj()).collect();
        let m = match_multisets(&s.values, &conj).unwrap();
        // Non-defective draws only: near an EP eigenvalues carry sqrt(eps) noise.
        let min_gap = s.values.iter().enumerate().flat_map(|(i, a)| s.values[i + 1..].iter().map(move |b| (a - b).norm())).fold(f64::INFINITY, f64::min);
        prop_assume!(min_gap > 1e-3 || gamma == 0.0);
        prop_assert!(m.max_distance <= 1e-10, "{}", m.max_distance);
    }

    #[test]
    fn eigenvalue_sum_is_trace(n in 1usize..20, t in -2.0..2.0f64, d in 0.2..2.0f64, delta in -1.0..1.0f64,
                               gamma in -3.0..3.0f64, loss in 0.0..1.0f64) {
        let fl = chain(n, t, d, delta, gamma, loss);
        let s = spectra::eigenvalues(&fl, 1e-9).unwrap();
        let sum: crossstitch_core::Complex64 = s.values.iter().sum();
        prop_assert!((sum - c(0.0, -2.0 * n as f64 * loss)).norm() <= 1e-8 * n as f64);
    }
}

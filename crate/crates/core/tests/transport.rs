mod common;

use common::{c, transfer_amplitudes, ChainSpec};
use crossstitch_core::bands;
use crossstitch_core::transport::{self, Continuation};
use crossstitch_core::{FiniteLattice, LatticeParams, LeadParams};
use proptest::prelude::*;

fn lattice(s: &ChainSpec) -> FiniteLattice {
    FiniteLattice::with_loss(s.n, LatticeParams::new(s.t, s.d, s.delta, s.gamma).unwrap(), s.loss).unwrap()
}

fn lead(s: &ChainSpec) -> LeadParams {
    LeadParams::new(s.v0, s.g).unwrap()
}

fn spec(n: usize, t: f64, d: f64, delta: f64, gamma: f64, loss: f64) -> ChainSpec {
    ChainSpec {
        n,
        t,
        d,
        delta,
        gamma,
        loss,
        v0: 10.0,
        g: 1.0,
    }
}

#[test]
fn two_cell_amplitudes_match_transfer_recursion() {
    let s = spec(2, 1.0, 1.0, 0.0, 0.5, 0.0);
    let sol = transport::solve_scattering(&lattice(&s), &lead(&s), c(0.3, 0.0)).unwrap();
    let (r, t) = transfer_amplitudes(&s, c(0.3, 0.0), 0.3);
    assert!(
        (sol.r0 - r).norm() + (sol.t0 - t).norm() < 1e-12,
        "{:?} vs {:?}",
        (sol.r0, sol.t0),
        (r, t)
    );
}

#[test]
fn hermitian_gap_of_imbalanced_chain_is_opaque() {
    // delta = 1, gamma = 0: the gap between the two real bands.
    let p = LatticeParams::new(1.0, 1.0, 1.0, 0.0).unwrap();
    let b = bands::sample_bands(&p, 1 << 14).unwrap();
    let lower_top = b
        .points
        .iter()
        .map(|x| x.plus.re.min(x.minus.re))
        .fold(f64::NEG_INFINITY, f64::max);
    let upper_bottom = b
        .points
        .iter()
        .map(|x| x.plus.re.max(x.minus.re))
        .fold(f64::INFINITY, f64::min);
    assert!(upper_bottom - lower_top > 0.1);
    let fl = FiniteLattice::new(100, p).unwrap();
    let w = upper_bottom - lower_top;
    for i in 0..=50 {
        let e = lower_top + 0.01 * w + 0.98 * w * i as f64 / 50.0;
        let s = transport::solve_scattering(&fl, &LeadParams::default(), c(e, 0.0)).unwrap();
        assert!(s.transmission < 1e-5, "E = {e}: T = {}", s.transmission);
    }
}

#[test]
fn interior_amplitudes_solve_lattice_rows() {
    // The recovered cell amplitudes satisfy the bulk equations of cell 2.
    let s = spec(4, 0.7, 1.1, 0.3, 0.6, 0.1);
    let e = c(0.42, 0.0);
    let sol = transport::solve_scattering(&lattice(&s), &lead(&s), e).unwrap();
    let a = &sol.amplitudes;
    assert_eq!(a.len(), 4);
    let ea = c(s.delta / 2.0, s.gamma / 2.0 - s.loss);
    let lhs = (ea - e) * a[1][0] - s.t * a[1][1] - s.d * (a[0][0] + a[0][1] + a[2][0] + a[2][1]);
    assert!(lhs.norm() < 1e-12);
}

#[test]
fn measured_flux_in_unbroken_pt_chain() {
    // Not a conservation law: R + T is reported, and only required finite.
    let s = spec(20, 1.0, 1.0, 0.0, 0.5, 0.0);
    let sol = transport::solve_scattering(&lattice(&s), &lead(&s), c(-2.0, 0.0)).unwrap();
    assert!(sol.flux_sum().is_finite() && sol.flux_sum() > 0.0);
}

fn hermitian_spec() -> impl Strategy<Value = ChainSpec> {
    (
        1usize..=10,
        -2.0..2.0f64,
        0.2..2.0f64,
        -2.0..2.0f64,
        2.0..12.0f64,
        0.2..2.0f64,
    )
        .prop_map(|(n, t, d, delta, v0, g)| ChainSpec {
            n,
            t,
            d,
            delta,
            gamma: 0.0,
            loss: 0.0,
            v0,
            g,
        })
}

fn general_spec() -> impl Strategy<Value = ChainSpec> {
    (
        1usize..=4,
        -2.0..2.0f64,
        0.2..2.0f64,
        -1.5..1.5f64,
        0.0..3.0f64,
        0.0..0.6f64,
        2.0..12.0f64,
        0.2..2.0f64,
    )
        .prop_map(|(n, t, d, delta, gamma, loss, v0, g)| ChainSpec {
            n,
            t,
            d,
            delta,
            gamma,
            loss,
            v0,
            g,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn hermitian_unitarity(s in hermitian_spec(), x in -0.999..0.999f64) {
        let e = c(x * s.v0, 0.0);
        let sol = transport::solve_scattering(&lattice(&s), &lead(&s), e).unwrap();
        prop_assert!((sol.flux_sum() - 1.0).abs() <= 1e-10, "{}", sol.flux_sum());
    }

    #[test]
    fn layout_is_mirror_symmetric(s in general_spec(), x in -0.95..0.95f64) {
        // Swapping source and drain maps r0 <-> t0 and cell j <-> N + 1 - j;
        // the bordered matrix is invariant, so T does not depend on the side.
        let sys = transport::assemble_scattering_system(&lattice(&s), &lead(&s), c(x * s.v0, 0.0));
        let a = sys.matrix.to_dense();
        let n = a.nrows();
        let mirror = |i: usize| {
            if i == 0 || i == n - 1 {
                n - 1 - i
            } else {
                let cell = (i - 1) / 2;
                let site = (i - 1) % 2;
                1 + 2 * (s.n - 1 - cell) + site
            }
        };
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(a[(i, j)], a[(mirror(i), mirror(j))]);
            }
        }
    }

    #[test]
    fn bordered_solver_matches_transfer_oracle(s in general_spec(), x in -0.95..0.95f64, y in 0.0..0.5f64) {
        let e = c(x * s.v0, y);
        let sol = transport::solve_scattering(&lattice(&s), &lead(&s), e).unwrap();
        let (r, t) = transfer_amplitudes(&s, e, e.re);
        prop_assert!((sol.r0 - r).norm() + (sol.t0 - t).norm() <= 1e-9);
    }

    #[test]
    fn overall_loss_equals_imaginary_energy(s in general_spec(), x in -0.95..0.95f64, loss in 0.0..0.6f64) {
        let lossy = ChainSpec { loss, ..s };
        let plain = ChainSpec { loss: 0.0, ..s };
        let e = x * s.v0;
        let a = transport::solve_scattering(&lattice(&lossy), &lead(&s), c(e, 0.0)).unwrap();
        let b = transport::solve_scattering(&lattice(&plain), &lead(&s), c(e, loss)).unwrap();
        prop_assert!((a.transmission - b.transmission).abs() <= 1e-8);
    }

    #[test]
    fn analytic_mode_uses_continued_phase(s in general_spec(), x in -0.95..0.95f64, y in 0.01..0.5f64) {
        let e = c(x * s.v0, y);
        let sys = transport::assemble_scattering_system_with(&lattice(&s), &lead(&s), e, Continuation::Analytic);
        prop_assert_eq!(sys.phase, transport::lead_phase(e, &lead(&s)));
        let sol = transport::solve_scattering_with(&lattice(&s), &lead(&s), e, Continuation::Analytic).unwrap();
        prop_assert!(sol.residual <= transport::RESIDUAL_TOL);
    }
}

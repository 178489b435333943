use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use boussinesq_lab::experiments::{
    beta_endpoint, exponent_violations, fit_exponent, CheckMode, Exponents, ScalingFit, TorusSystem,
};
use boussinesq_lab::norms::{
    lorentz_weak_norm_weighted, mixed_norm, schatten_norm, sequence_norm, NormOrder, SpaceTimeField,
};
use boussinesq_lab::oscillatory::exp_sum;
use boussinesq_lab::randomization::{fourier_randomize_torus, substream, Distribution};
use boussinesq_lab::spectral::{density_function, propagate, CompactOperatorRep, Grid1D, WaveFunction};

fn torus_function(coeffs: &[(f64, f64)]) -> WaveFunction {
    let grid = Arc::new(Grid1D::torus(64).unwrap());
    let mut c = vec![Complex64::new(0.0, 0.0); 64];
    for (i, &(re, im)) in coeffs.iter().enumerate() {
        let k = i as i64 - (coeffs.len() as i64) / 2;
        c[grid.bin_of(k).unwrap()] = Complex64::new(re, im);
    }
    WaveFunction::from_fourier(grid, &c).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..20)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_sum_conjugation_and_triangle(n in 1usize..200, t in -1.0..1.0f64, x in -1.0..1.0f64) {
        let a = exp_sum(n, t, x);
        let b = exp_sum(n, -t, -x).conj();
        prop_assert!((a - b).norm() <= 1e-9 * (1.0 + a.norm()));
        prop_assert!(a.norm() <= (2 * n + 1) as f64 * (1.0 + 1e-12));
    }

    #[test]
    fn propagation_is_a_unitary_group(c in coeffs(), s in -2.0..2.0f64, t in -2.0..2.0f64) {
        let f = torus_function(&c);
        let ft = propagate(&f, t).unwrap();
        prop_assert!((ft.l2_norm() - f.l2_norm()).abs() <= 1e-10 * f.l2_norm().max(1e-300));
        let two_step = propagate(&propagate(&f, s).unwrap(), t).unwrap();
        let one_step = propagate(&f, s + t).unwrap();
        let diff = two_step.axpy(Complex64::new(-1.0, 0.0), &one_step).unwrap().l2_norm();
        prop_assert!(diff <= 1e-10 * f.l2_norm().max(1e-300));
    }

    #[test]
    fn density_integrates_to_trace(seed in 0u64..1000, rank in 1usize..6, t in 0.0..3.0f64,
                                   lambda in prop::collection::vec(-2.0..2.0f64, 6)) {
        let sys = TorusSystem::random(8, rank, 1.0, &mut substream(seed, 0)).unwrap();
        let grid = Arc::new(Grid1D::torus(32).unwrap());
        let ons = boussinesq_lab::spectral::OrthonormalSystem::new(
            sys.functions(&grid).unwrap(),
            boussinesq_lab::spectral::InnerProduct::L2,
        ).unwrap();
        let op = CompactOperatorRep::new(lambda[..rank].to_vec(), ons).unwrap();
        let rho = density_function(&op, t, None).unwrap();
        let abs: f64 = op.eigenvalues().iter().map(|l| l.abs()).sum();
        prop_assert!((rho.integral() - op.trace()).abs() <= 1e-8 * abs.max(1e-300));
    }

    #[test]
    fn mixed_norms_are_homogeneous_and_subadditive(
        a in prop::collection::vec(0.0..5.0f64, 48),
        b in prop::collection::vec(0.0..5.0f64, 48),
        c in 0.01..100.0f64,
        p in 1.0..8.0f64,
        q in 1.0..8.0f64,
    ) {
        let grid = Arc::new(Grid1D::torus(8).unwrap());
        let times: Vec<f64> = (0..6).map(|i| i as f64 * 0.1).collect();
        let fa = SpaceTimeField::new(times.clone(), 0.1, grid.clone(), a.clone()).unwrap();
        let fb = SpaceTimeField::new(times.clone(), 0.1, grid.clone(), b.clone()).unwrap();
        let sum = SpaceTimeField::new(times, 0.1, grid, a.iter().zip(&b).map(|(x, y)| x + y).collect()).unwrap();
        for order in [NormOrder::TimeOuter, NormOrder::SpaceOuter] {
            let na = mixed_norm(&fa, p, q, order).unwrap();
            let nb = mixed_norm(&fb, p, q, order).unwrap();
            let scaled = mixed_norm(&fa.map(|v| c * v), p, q, order).unwrap();
            prop_assert!((scaled - c * na).abs() <= 1e-10 * (c * na).max(1e-300));
            prop_assert!(mixed_norm(&sum, p, q, order).unwrap() <= (na + nb) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn weak_norm_is_below_strong_norm(v in prop::collection::vec(-3.0..3.0f64, 1..40), p in 1.0..6.0f64) {
        let w = vec![0.25; v.len()];
        let strong = v.iter().map(|x| 0.25 * x.abs().powf(p)).sum::<f64>().powf(1.0 / p);
        prop_assert!(lorentz_weak_norm_weighted(&v, &w, p).unwrap() <= strong * (1.0 + 1e-12));
    }

    #[test]
    fn schatten_norms_decrease_in_alpha(seed in 0u64..500) {
        let sys = TorusSystem::random(3, 4, 1.0, &mut substream(seed, 1)).unwrap();
        let m = sys.coeffs() * sys.coeffs().adjoint().scale(seed as f64 % 7.0 + 1.0);
        let w = vec![1.0; m.nrows()];
        let norms: Vec<f64> = [1.0, 1.5, 2.0, 4.0, f64::INFINITY].iter().map(|&a| schatten_norm(&m, &w, a).unwrap()).collect();
        for pair in norms.windows(2) {
            prop_assert!(pair[1] <= pair[0] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn sequence_norm_ratios_are_scale_free(l in prop::collection::vec(0.01..4.0f64, 1..30), c in 0.01..100.0f64, beta in 1.0..5.0f64) {
        let scaled: Vec<f64> = l.iter().map(|x| c * x).collect();
        let r = sequence_norm(&scaled, beta).unwrap() / sequence_norm(&l, beta).unwrap();
        prop_assert!((r - c).abs() <= 1e-12 * c);
    }

    #[test]
    fn fits_recover_exact_power_laws(slope in -3.0..3.0f64, amp in 0.01..100.0f64) {
        let ns: Vec<f64> = (6..=10).map(|e| 2f64.powi(e)).collect();
        let ys: Vec<f64> = ns.iter().map(|n| amp * n.powf(slope)).collect();
        let pairs: Vec<(f64, f64)> = ns.iter().copied().zip(ys.iter().copied()).collect();
        prop_assert!((fit_exponent(&pairs).unwrap().slope - slope).abs() <= 1e-10);
        prop_assert!(ScalingFit::new(ns, ys, slope).unwrap().matches_claim(1e-10));
    }

    #[test]
    fn segment_exponent_arithmetic(inv_q in 0.001..1.0f64, excess in 0.001..1.0f64) {
        let q = 1.0 / inv_q;
        let e = Exponents::on_segment(q);
        prop_assert!((2.0 / e.p + 1.0 / e.q - 1.0).abs() <= 1e-12);
        prop_assert!(exponent_violations(&e, CheckMode::Bound).is_empty());
        // the counterexample ratio slope vanishes exactly at the endpoint and is positive beyond it
        prop_assert!((1.0 - 1.0 / e.p - 1.0 / e.beta).abs() <= 1e-12);
        let over = e.with_beta(beta_endpoint(q) + excess);
        prop_assert!(1.0 - 1.0 / over.p - 1.0 / over.beta > 0.0);
        prop_assert!(!exponent_violations(&over, CheckMode::Bound).is_empty());
    }

    #[test]
    fn rademacher_fourier_randomization_is_isometric(c in coeffs(), seed in 0u64..1000) {
        let f = torus_function(&c);
        let g = fourier_randomize_torus(&f, Distribution::Rademacher, &mut substream(seed, 0)).unwrap();
        prop_assert!((g.l2_norm() - f.l2_norm()).abs() <= 1e-12 * f.l2_norm().max(1e-300));
    }
}

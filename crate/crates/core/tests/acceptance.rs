//! Acceptance suite: one test per shipped criterion, each printing a single
//! `criterion N (...): PASS|FAIL` line (visible with `--nocapture`) and
//! enforcing its runtime budget. Every expected number is frozen here, not
//! recomputed from the code under test.

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use qds_core::algebra::{Algebra, AlgebraElement, State};
use qds_core::dissipativity::{
    certify_completely_dissipative, check_dissipative, default_alpha_grid, CertifyOptions,
    METHOD_CONTRACTIVITY,
};
use qds_core::error::Error;
use qds_core::generators::{
    commutator_derivation, lindblad_generator, squared_min_length_weights, weyl_damping_generator,
    weyl_matrix, Superoperator,
};
use qds_core::gns::{
    gns_construct, implementing_operator, theorem_report, ImplementingForm, GRAM_RANK_REL_TOL,
};
use qds_core::lattice::{
    convergence_diagnostic, derivative_check, embed_observable, finite_volume_dynamics,
    ruelle_bound, Interaction, LatticeRegion,
};
use qds_core::linalg::{kron, spectral_norm};
use qds_core::random::{random_element, SampleKind};
use qds_core::scalar::cpx;
use qds_core::semigroup::{
    check_resolvent_identity, choi_matrix, euler_approximant, exp_generator,
    is_completely_positive,
};

type Cpx64 = qds_core::scalar::Cpx<f64>;
type Map = Superoperator<f64>;
type El = AlgebraElement<f64>;

const TIME_GRID: [f64; 4] = [0.1, 0.5, 1.0, 2.0];

fn criterion(number: u32, label: &str, budget: Duration, body: impl FnOnce()) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let verdict = if outcome.is_ok() && elapsed <= budget { "PASS" } else { "FAIL" };
    println!("criterion {number:2} ({label}): {verdict} [{elapsed:.2?}, budget {budget:?}]");
    if let Err(panic) = outcome {
        resume_unwind(panic);
    }
    assert!(
        elapsed <= budget,
        "criterion {number} exceeded its budget: {elapsed:?} > {budget:?}"
    );
}

fn full(d: usize) -> Algebra {
    Algebra::full_matrix(d).expect("dimension under cap")
}

fn random_lindblad(algebra: &Algebra, seed: u64, jump_count: usize) -> Map {
    let h = random_element(algebra, seed, SampleKind::Hermitian);
    let jumps: Vec<El> = (0..jump_count)
        .map(|j| random_element(algebra, seed.wrapping_add(1000 + j as u64), SampleKind::General))
        .collect();
    lindblad_generator(&h, &jumps).expect("Hermitian h")
}

/// A unit-norm map with iid complex Gaussian matrix entries: almost surely
/// not dissipative, so the agreement check sees both verdicts. Both
/// dissipativity conditions are scale-covariant, so normalizing puts every
/// sampled generator at the same distance from the shared tolerance.
fn random_superoperator(algebra: &Algebra, seed: u64) -> Map {
    let n = algebra.element_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Cpx64::new(re, im)
    });
    let raw = Superoperator::from_matrix(algebra.clone(), m, "gaussian map").expect("square matrix");
    let norm = raw.matrix_norm();
    raw.scale(1.0 / norm)
}

fn pauli(which: char) -> DMatrix<Cpx64> {
    match which {
        'x' => DMatrix::from_row_slice(2, 2, &[cpx(0.0, 0.0), cpx(1.0, 0.0), cpx(1.0, 0.0), cpx(0.0, 0.0)]),
        'z' => DMatrix::from_row_slice(2, 2, &[cpx(1.0, 0.0), cpx(0.0, 0.0), cpx(0.0, 0.0), cpx(-1.0, 0.0)]),
        _ => unreachable!(),
    }
}

/// The fixed Lindblad corpus shared by criteria 2 and 4.
fn lindblad_corpus() -> Vec<Map> {
    (0..50u64)
        .map(|i| {
            let algebra = full(if i % 2 == 0 { 2 } else { 3 });
            random_lindblad(&algebra, 6000 + i, if i % 5 == 0 { 2 } else { 1 })
        })
        .collect()
}

#[test]
fn criterion_01_grid_and_functional_verdicts_agree() {
    criterion(1, "dissipativity conditions agree", Duration::from_secs(60), || {
        let algebras = [full(2), full(3)];
        let alpha_grid = default_alpha_grid::<f64>();
        let tol = 1e-8;
        let mut checks = 0usize;
        let mut disagreements = 0usize;
        for g in 0..200u64 {
            let algebra = &algebras[(g % 2) as usize];
            // dissipative, conservative, and generic maps so both verdicts occur
            let delta = match g % 4 {
                0 => commutator_derivation(&random_element(algebra, 1000 + g, SampleKind::Hermitian))
                    .unwrap(),
                1 => random_lindblad(algebra, 2000 + g, 1),
                2 => random_superoperator(algebra, 3000 + g),
                _ => {
                    let base = random_lindblad(algebra, 4000 + g, 1);
                    base.add(&random_superoperator(algebra, 5000 + g).scale(0.05)).unwrap()
                }
            };
            for s in 0..50u64 {
                let kind = if s % 2 == 0 { SampleKind::Hermitian } else { SampleKind::General };
                let x: El = random_element(algebra, 100_000 + g * 97 + s, kind);
                let check = check_dissipative(&delta, &x, &alpha_grid, tol).unwrap();
                checks += 1;
                if !check.methods_agree {
                    disagreements += 1;
                }
            }
        }
        assert_eq!(checks, 10_000);
        assert_eq!(disagreements, 0, "{disagreements} of {checks} checks disagreed");
    });
}

#[test]
fn criterion_02_lindblad_generators_yield_cp_semigroups() {
    criterion(2, "Lindblad semigroups are CP and certified", Duration::from_secs(120), || {
        for (i, delta) in lindblad_corpus().iter().enumerate() {
            for t in TIME_GRID {
                let choi = choi_matrix(&exp_generator(delta, t)).unwrap();
                assert!(
                    choi.min_eigenvalue >= -1e-9,
                    "generator {i}: Choi eigenvalue {} at t = {t}",
                    choi.min_eigenvalue
                );
            }
            let opts = CertifyOptions {
                seed: 7000 + i as u64,
                ..CertifyOptions::default()
            };
            let report = certify_completely_dissipative(delta, &opts).unwrap();
            assert!(report.passed(), "generator {i} failed certification");
            assert_eq!(report.levels.len(), 4);
        }
    });
}

#[test]
fn criterion_03_transpose_minus_identity_fails_at_level_two() {
    criterion(3, "matricial counterexample", Duration::from_secs(5), || {
        let algebra = full(2);
        // column-stacked basis (x00, x10, x01, x11): transpose swaps the middle two
        let mut m = DMatrix::<Cpx64>::zeros(4, 4);
        m[(1, 1)] = cpx(-1.0, 0.0);
        m[(1, 2)] = cpx(1.0, 0.0);
        m[(2, 1)] = cpx(1.0, 0.0);
        m[(2, 2)] = cpx(-1.0, 0.0);
        let delta = Superoperator::from_matrix(algebra, m, "transpose minus identity").unwrap();
        let opts = CertifyOptions {
            n_max: 2,
            ..CertifyOptions::default()
        };
        let report = certify_completely_dissipative(&delta, &opts).unwrap();
        assert_eq!(report.levels[0].verdict, "pass");
        assert_eq!(report.levels[1].verdict, "fail");

        let witness = report.levels[1].witness.as_ref().expect("failing level carries a witness");
        assert_eq!(witness.method, METHOD_CONTRACTIVITY);
        let profile = witness.t_profile.as_ref().expect("contractivity witness has a profile");
        let at_one = profile.iter().find(|p| p.t == 1.0).expect("grid contains t = 1");
        let expected = (3.0 - (-2.0f64).exp()) / 2.0;
        let growth = at_one.norm_after / at_one.norm_before;
        assert!(
            (growth - expected).abs() <= 1e-6,
            "growth {growth} vs (3 - e^-2)/2 = {expected}"
        );
        assert!((expected - 1.432_332_358_381_693_6).abs() < 1e-15);
    });
}

#[test]
fn criterion_04_dissipation_inequality_on_certified_generators() {
    criterion(4, "second-order dissipation inequality", Duration::from_secs(60), || {
        for (i, delta) in lindblad_corpus().iter().enumerate() {
            let algebra = delta.algebra().clone();
            for s in 0..100u64 {
                let x: El = random_element(&algebra, 200_000 + (i as u64) * 100 + s, SampleKind::General);
                let dx = delta.apply(&x).unwrap();
                let combo = &delta.apply(&(&x.adjoint() * &x)).unwrap()
                    - &(&(&dx.adjoint() * &x) + &(&x.adjoint() * &dx));
                let check = combo.positivity(1e-8);
                assert!(
                    check.min_eigenvalue >= -1e-8,
                    "generator {i}, sample {s}: min eigenvalue {}",
                    check.min_eigenvalue
                );
            }
        }
        // derivations attain the Leibniz equality
        for g in 0..20u64 {
            let algebra = full(if g % 2 == 0 { 2 } else { 3 });
            let h: El = random_element(&algebra, 210_000 + g, SampleKind::Hermitian);
            let delta = commutator_derivation(&h).unwrap();
            for s in 0..10u64 {
                let x: El = random_element(&algebra, 220_000 + g * 10 + s, SampleKind::General);
                let dx = delta.apply(&x).unwrap();
                let residual = (&delta.apply(&(&x.adjoint() * &x)).unwrap()
                    - &(&(&dx.adjoint() * &x) + &(&x.adjoint() * &dx)))
                    .operator_norm();
                assert!(residual <= 1e-10, "derivation {g}, sample {s}: residual {residual}");
            }
        }
    });
}

#[test]
fn criterion_05_euler_approximants_converge_at_first_order() {
    criterion(5, "Euler convergence rate", Duration::from_secs(30), || {
        for i in 0..10u64 {
            let algebra = full(if i % 2 == 0 { 2 } else { 3 });
            let raw = random_lindblad(&algebra, 9000 + i, 1);
            // unit generator norm keeps n = 8..64 inside the first-order regime
            let delta = raw.scale(1.0 / raw.matrix_norm());
            let exact = exp_generator(&delta, 1.0);
            let errors: Vec<f64> = [8u64, 16, 32, 64]
                .iter()
                .map(|&n| euler_approximant(&delta, 1.0, n).unwrap().distance(&exact).unwrap())
                .collect();
            for pair in errors.windows(2) {
                let ratio = pair[0] / pair[1];
                assert!(
                    (1.7..=2.3).contains(&ratio),
                    "generator {i}: doubling ratio {ratio}, errors {errors:?}"
                );
            }
        }

        let scalar_algebra = Algebra::new(vec![1]).unwrap();
        let decay: Map = Superoperator::from_matrix(
            scalar_algebra,
            DMatrix::from_element(1, 1, cpx(-1.0, 0.0)),
            "scalar decay",
        )
        .unwrap();
        let euler_value = euler_approximant(&decay, 1.0, 10).unwrap().matrix()[(0, 0)].re;
        let exp_value = exp_generator(&decay, 1.0).matrix()[(0, 0)].re;
        assert!((euler_value - 0.38554).abs() <= 1e-5);
        assert!((exp_value - 0.36788).abs() <= 1e-5);
        assert!((euler_value - 1.1f64.powi(-10)).abs() <= 1e-12);
        assert!((exp_value - (-1.0f64).exp()).abs() <= 1e-12);
    });
}

#[test]
fn criterion_06_resolvent_identity() {
    criterion(6, "resolvent identity", Duration::from_secs(10), || {
        for g in 0..20u64 {
            let algebra = full(if g % 2 == 0 { 2 } else { 3 });
            let delta = if g < 10 {
                commutator_derivation(&random_element(&algebra, 9500 + g, SampleKind::Hermitian))
                    .unwrap()
            } else {
                random_lindblad(&algebra, 9600 + g, 1)
            };
            for (k1, k2) in [(1.0, 2.0), (0.5, 3.0)] {
                let residual = check_resolvent_identity(&delta, k1, k2).unwrap();
                assert!(
                    residual <= 1e-9,
                    "generator {g}: residual {residual} at (k1, k2) = ({k1}, {k2})"
                );
            }
        }
    });
}

#[test]
fn criterion_07_ising_chain_dynamics() {
    criterion(7, "lattice dynamics", Duration::from_secs(60), || {
        let sx = pauli('x');
        let sz = pauli('z');
        let tfi = Interaction::new(
            2,
            vec![(vec![0, 1], kron(&sz, &sz)), (vec![0], &sx * cpx(0.5, 0.0))],
        )
        .unwrap();
        let site = LatticeRegion::new(0, 0, 2).unwrap();
        let observable = AlgebraElement::from_matrix(sx.clone()).unwrap();

        let volumes: Vec<LatticeRegion> = (1..=3)
            .map(|r| LatticeRegion::centered(r, 2).unwrap())
            .collect();
        let diagnostic = convergence_diagnostic(&tfi, &observable, &site, 0.2, &volumes).unwrap();
        assert_eq!(diagnostic.gaps.len(), 2);
        assert!(
            diagnostic.strictly_decreasing,
            "gaps not decreasing: {:?}",
            diagnostic.gaps
        );

        let region = LatticeRegion::centered(1, 2).unwrap();
        let embedded = embed_observable(&observable, &site, &region).unwrap();
        let coarse = derivative_check(&tfi, &region, &embedded, 0.05).unwrap();
        let fine = derivative_check(&tfi, &region, &embedded, 0.025).unwrap();
        let ratio = coarse / fine;
        assert!(
            (1.7..=2.3).contains(&ratio),
            "derivative residual halving ratio {ratio} (residuals {coarse}, {fine})"
        );

        let ising = Interaction::new(2, vec![(vec![0, 1], kron(&sz, &sz))]).unwrap();
        let bound = ruelle_bound(&ising, 1.0, 4).unwrap();
        assert!(bound.finite_range_exact);
        assert_eq!(bound.total, 2.0 * std::f64::consts::E, "weighted norm must be exact");

        // full ten-site chain: evolution stays isometric and trace-preserving
        let chain = LatticeRegion::new(0, 9, 2).unwrap();
        let center = LatticeRegion::new(4, 4, 2).unwrap();
        let wide = embed_observable(&observable, &center, &chain).unwrap();
        let moved = finite_volume_dynamics(&tfi, &chain, 0.2, &wide).unwrap();
        assert!((moved.operator_norm() - 1.0).abs() <= 1e-9);
        assert!(moved.trace().norm() <= 1e-9);
    });
}

#[test]
fn criterion_08_gns_pipeline_on_the_trace_state() {
    criterion(8, "GNS implementation pipeline", Duration::from_secs(60), || {
        let algebra = full(3);
        let trace = State::trace_state(&algebra);
        let rep = gns_construct(&algebra, &trace, GRAM_RANK_REL_TOL).unwrap();
        assert_eq!(rep.dim(), 9);

        // Gram reproduction: <class(a), class(b)> = ω(b*a) over the basis
        let basis: Vec<El> = algebra
            .basis_indices()
            .into_iter()
            .map(|idx| algebra.basis_element(idx))
            .collect();
        let mut gram_residual = 0.0f64;
        for a in &basis {
            for b in &basis {
                let va = rep.class_vector(a).unwrap();
                let vb = rep.class_vector(b).unwrap();
                let lhs = (vb.adjoint() * &va)[(0, 0)];
                let rhs = trace.evaluate(&(&b.adjoint() * a)).unwrap();
                gram_residual = gram_residual.max((lhs - rhs).norm());
            }
        }
        assert!(gram_residual <= 1e-10, "Gram residual {gram_residual}");

        for g in 0..20u64 {
            let h: El = random_element(&algebra, 12_100 + g, SampleKind::Hermitian);
            let delta = commutator_derivation(&h).unwrap();
            let l = implementing_operator(&delta, &rep, ImplementingForm::TwoSided, true, 1e-8)
                .unwrap();
            assert!(l.residual <= 1e-8, "H {g}: fit residual {}", l.residual);
            assert!(l.cyclic_defect <= 1e-10, "H {g}: LΩ norm {}", l.cyclic_defect);
            let skew_defect = spectral_norm(&(&l.matrix + l.matrix.adjoint()));
            assert!(skew_defect <= 1e-10, "H {g}: ‖L + L*‖ = {skew_defect}");

            for sign in [1.0, -1.0] {
                let opts = CertifyOptions {
                    n_max: 3,
                    sample_count: 6,
                    seed: 13_000 + g,
                    ..CertifyOptions::default()
                };
                let report =
                    certify_completely_dissipative(&delta.scale(sign), &opts).unwrap();
                assert!(report.passed(), "H {g}: certification failed for sign {sign}");
            }
        }

        // end-to-end report for one derivation, including the cross-check
        let h: El = random_element(&algebra, 12_000, SampleKind::Hermitian);
        let delta = commutator_derivation(&h).unwrap();
        let report = theorem_report(&delta, &trace, 3, 8, 21, 1e-8).unwrap();
        assert_eq!(report.gns_dim, 9);
        assert!(report.pipeline_passed());
        assert!(report.consistent);

        // strictly two-sided implementation forces L skew, which damping defeats
        let weyl = weyl_damping_generator(2, &squared_min_length_weights::<f64>(2)).unwrap();
        let trace2 = State::trace_state(&full(2));
        match theorem_report(&weyl, &trace2, 2, 6, 33, 1e-8) {
            Err(Error::NotImplementable { residual, .. }) => {
                assert!(residual > 1e-2, "residual {residual} should be far above tol");
                assert!((residual - 0.748_734_230_623_936_8).abs() <= 1e-6);
            }
            other => panic!("expected a non-implementability finding, got {other:?}"),
        }
    });
}

#[test]
fn criterion_09_weyl_damping_semigroup() {
    criterion(9, "Weyl damping semigroup", Duration::from_secs(5), || {
        let weights = squared_min_length_weights::<f64>(2);
        let delta = weyl_damping_generator(2, &weights).unwrap();
        for t in TIME_GRID {
            let tau = exp_generator(&delta, t);
            for p in 0..2 {
                for q in 0..2 {
                    let w = AlgebraElement::from_matrix(weyl_matrix::<f64>(2, p, q)).unwrap();
                    let moved = tau.apply(&w).unwrap();
                    let expected = w.scale(cpx((-t * weights[(p, q)]).exp(), 0.0));
                    let gap = (&moved - &expected).operator_norm();
                    assert!(gap <= 1e-10, "W({p},{q}) at t = {t}: deviation {gap}");
                }
            }
            let cp = is_completely_positive(&tau, 1e-9).unwrap();
            assert!(cp.completely_positive, "Choi test failed at t = {t}");
            // Pauli-channel spectrum: smallest Choi eigenvalue is (1 - e^-t)²/2
            let predicted = (1.0 - (-t).exp()).powi(2) / 2.0;
            assert!(
                (cp.min_eigenvalue - predicted).abs() <= 1e-10,
                "min Choi eigenvalue {} vs (1 - e^-t)²/2 = {predicted}",
                cp.min_eigenvalue
            );
        }
    });
}

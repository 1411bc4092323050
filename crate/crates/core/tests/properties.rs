use std::path::Path;

use proptest::prelude::*;
use simulroots::bounds::{apriori, lambda_theta_mu, ln_apriori};
use simulroots::certify::{
    certificate_from_e, ehrlich_domain, nourein_domain, nourein_nominal_domain, CertificateKind,
    MethodParams,
};
use simulroots::corpus::load_corpus;
use simulroots::localize::inclusion_disks;
use simulroots::oracle::reference_roots;
use simulroots::simul::{quality_e, separations, step_weierstrass};
use simulroots::solve::{run, RunConfig, Status};
use simulroots::{ApproximationVector, Complex64, Method, MonicPolynomial, NormParameter};

fn norm_strategy() -> impl Strategy<Value = NormParameter> {
    prop_oneof![
        Just(NormParameter::ONE),
        Just(NormParameter::TWO),
        Just(NormParameter::INF),
        (1.0..8.0f64).prop_map(|p| NormParameter::new(p).unwrap()),
    ]
}

fn kind_strategy() -> impl Strategy<Value = CertificateKind> {
    prop_oneof![
        Just(CertificateKind::Localization),
        Just(CertificateKind::Ehrlich),
        Just(CertificateKind::Nourein),
    ]
}

/// Well separated roots and a start within `scale` of them.
fn instance(max_n: usize, scale: f64) -> impl Strategy<Value = (Vec<Complex64>, Vec<Complex64>)> {
    (2..=max_n)
        .prop_flat_map(move |n| {
            (
                prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), n),
                prop::collection::vec((0.0..scale, 0.0..std::f64::consts::TAU), n),
            )
        })
        .prop_map(|(roots, shifts)| {
            let roots: Vec<Complex64> = roots
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect();
            let z = roots
                .iter()
                .zip(shifts)
                .map(|(r, (m, a))| r + Complex64::from_polar(m, a))
                .collect();
            (roots, z)
        })
        .prop_filter("roots too close", |(roots, _)| separations(roots).1 > 0.3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permutation_equivariance((roots, z) in instance(8, 0.05), rot in 0usize..8) {
        let f = MonicPolynomial::from_roots(&roots).unwrap();
        let n = z.len();
        let perm: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        let zp: Vec<Complex64> = perm.iter().map(|&i| z[i]).collect();
        for method in Method::ALL {
            let a = method.step(&f, &ApproximationVector::new(z.clone()).unwrap()).unwrap().next;
            let b = method.step(&f, &ApproximationVector::new(zp.clone()).unwrap()).unwrap().next;
            for (k, &i) in perm.iter().enumerate() {
                prop_assert!((a[i] - b[k]).norm() <= 1e-12 * a[i].norm().max(1.0));
            }
        }
    }

    #[test]
    fn root_vector_is_fixed_and_has_zero_e((roots, _) in instance(6, 1e-9)) {
        // Gaussian-integer roots keep the expanded coefficients exact
        let ints: Vec<Complex64> = roots.iter().map(|r| Complex64::new(r.re.round(), r.im.round())).collect();
        prop_assume!(separations(&ints).1 > 0.5);
        let f = MonicPolynomial::from_roots(&ints).unwrap();
        let z = ApproximationVector::new(ints.clone()).unwrap();
        for norm in [NormParameter::ONE, NormParameter::INF] {
            prop_assert_eq!(quality_e(&f, &z, norm).unwrap(), 0.0);
        }
        for method in Method::ALL {
            prop_assert_eq!(&method.step(&f, &z).unwrap().next, &ints);
        }
    }

    #[test]
    fn e_positive_away_from_roots((roots, z) in instance(6, 0.05), norm in norm_strategy()) {
        let f = MonicPolynomial::from_roots(&roots).unwrap();
        let z = ApproximationVector::new(z).unwrap();
        let matched = roots.iter().all(|r| z.points().contains(r));
        prop_assert_eq!(quality_e(&f, &z, norm).unwrap() == 0.0, matched);
    }

    #[test]
    fn phi_increasing_from_zero(kind in kind_strategy(), n in 2usize..=50, norm in norm_strategy(), u in 0.0..1.0f64, v in 0.0..1.0f64) {
        let params = MethodParams::new(n, norm).unwrap();
        let end = kind.domain_bound(&params);
        prop_assert_eq!(kind.phi(0.0, &params).unwrap(), 0.0);
        let (x, y) = (end * u.min(v), end * u.max(v));
        prop_assume!(y - x > 1e-9 * end && y < end);
        prop_assert!(kind.phi(x, &params).unwrap() < kind.phi(y, &params).unwrap());
    }

    #[test]
    fn certificate_flags_are_consistent(kind in kind_strategy(), n in 2usize..=40, norm in norm_strategy(), e in 0.0..0.6f64) {
        let cert = certificate_from_e(kind, n, norm, e, false).unwrap();
        if cert.satisfied {
            prop_assert!(cert.e0 < cert.domain_bound);
            prop_assert!(cert.lambda.unwrap() <= 1.0);
        }
        if cert.strict {
            prop_assert!(cert.satisfied && cert.lambda.unwrap() < 1.0);
        }
        prop_assert_eq!(cert.guaranteed_order.is_some(), cert.strict);
    }

    #[test]
    fn stated_intervals_imply_positive_denominators(n in 2usize..=200, norm in norm_strategy()) {
        let params = MethodParams::new(n, norm).unwrap();
        let (a, b) = (params.a, params.b);
        prop_assert!((ehrlich_domain(&params) - 1.0 / (a + b)).abs() <= 1e-15);
        prop_assert!(1.0 / (a + b) <= 1.0 / a && 1.0 / (a + b) <= 1.0 / (a + 1.0));
        prop_assert!(nourein_domain(&params) <= nourein_nominal_domain(&params));
    }

    #[test]
    fn bound_factors_at_least_one(n in 2usize..=30, norm in norm_strategy(), u in 0.0..1.0f64) {
        let params = MethodParams::new(n, norm).unwrap();
        for kind in [CertificateKind::Ehrlich, CertificateKind::Nourein] {
            let x = u * kind.domain_bound(&params);
            let (lambda, theta, mu) = lambda_theta_mu(kind, x, &params).unwrap();
            prop_assert!(mu >= 1.0);
            prop_assert!((0.0..=1.0).contains(&theta));
            if lambda < 1.0 {
                prop_assert!(1.0 / (1.0 - theta * lambda) >= 1.0);
            }
        }
    }

    #[test]
    fn apriori_decays(n in 2usize..=20, norm in norm_strategy(), u in 0.01..1.0f64) {
        let params = MethodParams::new(n, norm).unwrap();
        for kind in [CertificateKind::Ehrlich, CertificateKind::Nourein] {
            let e0 = u * kind.domain_bound(&params);
            let cert = certificate_from_e(kind, n, norm, e0, false).unwrap();
            prop_assume!(cert.strict);
            let mut prev = f64::INFINITY;
            for k in 0..=60u32 {
                let l = ln_apriori(kind, k, e0, 1.0, &params).unwrap();
                prop_assert!(!l.is_nan());
                prop_assert!(l <= prev);
                prev = l;
                let plain = apriori(kind, k, e0, 1.0, &params).unwrap();
                prop_assert!(plain.is_finite() && plain >= 0.0);
            }
            prop_assert!(prev < -50.0);
        }
    }

    #[test]
    fn weierstrass_step_shrinks_disks((roots, z) in instance(6, 0.01)) {
        let f = MonicPolynomial::from_roots(&roots).unwrap();
        let z0 = ApproximationVector::new(z).unwrap();
        let Ok(d0) = inclusion_disks(&f, &z0, NormParameter::INF) else { return Ok(()) };
        let z1 = step_weierstrass(&f, &z0).unwrap().into_vector().unwrap();
        let d1 = inclusion_disks(&f, &z1, NormParameter::INF).unwrap();
        let max = |d: &[simulroots::localize::InclusionDisk]| d.iter().map(|x| x.radius).fold(0.0, f64::max);
        prop_assume!(max(&d0) > 1e-13);
        prop_assert!(max(&d1) < max(&d0));
        prop_assert!(d0.iter().chain(&d1).all(|d| d.radius >= 0.0));
    }

    #[test]
    fn traces_are_ordered_and_reproducible((roots, z) in instance(6, 0.1), method in prop::sample::select(Method::ALL.to_vec())) {
        let f = MonicPolynomial::from_roots(&roots).unwrap();
        let z0 = ApproximationVector::new(z).unwrap();
        let config = RunConfig { method, max_iters: 50, ..RunConfig::default() };
        let a = run(&f, &z0, &config).unwrap();
        let b = run(&f, &z0, &config).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        prop_assert!(a.rows.windows(2).all(|w| w[0].k < w[1].k));
        if a.status == Status::Converged {
            prop_assert!(a.last().stop_value <= config.tol);
        }
    }
}

#[test]
fn norm_exponents() {
    assert_eq!(NormParameter::ONE.pow_inv_q(7.0), 1.0);
    assert_eq!(NormParameter::INF.q(), 1.0);
    assert_eq!(NormParameter::ONE.pow_inv_p(7.0), 7.0);
    for p in [1.5, 2.0, 3.0, 10.0] {
        let norm = NormParameter::new(p).unwrap();
        assert!((norm.q() - p / (p - 1.0)).abs() < 1e-12);
        assert!((norm.inv_p() + norm.inv_q() - 1.0).abs() < 1e-15);
    }
    let inf = MethodParams::new(9, NormParameter::INF).unwrap();
    assert_eq!((inf.a, inf.b, inf.m), (8.0, 2.0, 11.0));
    let one = MethodParams::new(9, NormParameter::ONE).unwrap();
    assert_eq!((one.a, one.b), (1.0, 1.0));
}

#[test]
fn corpus_roots_match_oracle() {
    let corpus = load_corpus(&Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")).unwrap();
    assert!(corpus.len() >= 10);
    let degrees: Vec<usize> = corpus.iter().map(|c| c.polynomial.degree()).collect();
    assert!(degrees.contains(&2) && degrees.contains(&12));
    assert!(corpus.iter().any(|c| c.has_tag("clustered")));
    for inst in corpus.iter().filter(|c| !c.has_tag("negative")) {
        let Some(known) = &inst.roots else { continue };
        let oracle = reference_roots(&inst.polynomial).unwrap();
        let scale = inst.polynomial.max_coeff_modulus().max(1.0);
        for r in known {
            let nearest = oracle
                .roots
                .iter()
                .map(|x| (x - r).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(
                nearest < 1e-12 * scale,
                "{}: {r} off by {nearest}",
                inst.name
            );
        }
        for point in &inst.initial_points {
            inst.vector(point).unwrap();
        }
    }
}

mod common;

use avgmix::bounds::{
    atmix_sample_size, bp_bound, evaluate_json, jps_bound, mad_and_pac_uniform, mad_bound_general,
    variance_bound_visits, weak_vgeo_check, AtmixInput, ErgodicCertificate, RateKind, RateModel,
};
use avgmix::chain::{stationary_distribution, ProbabilityVector, StochasticMatrix};
use avgmix::estimation::visit_variance_experiment;
use avgmix::families::{pt_chain, pt_weak_vgeo_certificate, CertificateScope, PtSpec, Sequence};
use avgmix::mixing::{entropic_term, exact_beta, pair_matrix, PValue};
use avgmix::random::random_ergodic;
use proptest::prelude::*;

/// `sum_{t >= 0} envelope(s t)^(1/p)` summed until the terms are negligible.
fn direct_bp(model: &RateModel, p: f64, s: usize) -> f64 {
    let mut total = 0.0;
    for t in 0..10_000_000usize {
        let term = model.envelope(s * t).powf(1.0 / p);
        total += term;
        if t > 10 && term < 1e-18 * total {
            break;
        }
    }
    total
}

#[test]
fn exponential_closed_form_is_the_geometric_sum() {
    let model = RateModel::exponential(1.0, 0.7).unwrap();
    for p in [1.0, 2.0, 4.0] {
        for s in [1, 3, 10] {
            let closed = bp_bound(&model, PValue::Finite(p), s).unwrap();
            let direct = direct_bp(&model, p, s);
            assert!((closed - direct).abs() <= 1e-12 * direct, "p {p}, s {s}: {closed} vs {direct}");
        }
    }
}

#[test]
fn sub_exponential_closed_form_dominates_direct_sum() {
    let model = RateModel::sub_exponential(1.0, 1.0, 0.5).unwrap();
    let closed = bp_bound(&model, PValue::Finite(2.0), 4).unwrap();
    let direct = direct_bp(&model, 2.0, 4);
    assert!(closed >= direct, "{closed} < {direct}");
    // Not wildly loose either.
    assert!(closed <= 2.0 * direct, "{closed} vs {direct}");
    for (p, s) in [(1.0, 1), (3.0, 2), (2.0, 20)] {
        let c = bp_bound(&model, PValue::Finite(p), s).unwrap();
        assert!(c >= direct_bp(&model, p, s));
    }
}

#[test]
fn polynomial_closed_form_dominates_direct_sum() {
    let model = RateModel::polynomial(0.5, 2.0, 3.0).unwrap();
    for (p, s) in [(1.0, 1), (2.0, 1), (2.0, 5)] {
        let closed = bp_bound(&model, PValue::Finite(p), s).unwrap();
        assert!(closed >= direct_bp(&model, p, s));
    }
    assert!(bp_bound(&model, PValue::Finite(3.0), 1).is_err());
}

#[test]
fn calculators_are_monotone() {
    let mut last = f64::INFINITY;
    for n in [11, 101, 1001, 10001] {
        let v = mad_bound_general(1.3, 2.0, 2, n).unwrap();
        assert!(v < last);
        last = v;
    }
    let model = RateModel::sub_exponential(1.0, 0.4, 0.7).unwrap();
    let mut last = f64::INFINITY;
    for s in 1..30 {
        let v = bp_bound(&model, PValue::Finite(2.0), s).unwrap();
        assert!(v <= last, "s = {s}");
        last = v;
    }
    let finite = |xi: f64, eps: f64, delta: f64| {
        atmix_sample_size(xi, eps, delta, &AtmixInput::Finite { t_mix: 5, size: 3 }).unwrap().n
    };
    let base = finite(0.2, 0.25, 0.1);
    assert!(finite(0.1, 0.25, 0.1) > base);
    assert!(finite(0.2, 0.1, 0.1) > base);
    assert!(finite(0.2, 0.25, 0.01) >= base);
    let uniform = |delta: f64| mad_and_pac_uniform(0.1, delta, 1, 4, 2.0, 1000).unwrap().pac_n;
    assert!(uniform(0.001) > uniform(0.1));
}

#[test]
fn finite_mode_is_uniform_mode_with_squared_size() {
    for size in [2usize, 5, 9] {
        let a = atmix_sample_size(0.1, 0.3, 0.05, &AtmixInput::Finite { t_mix: 7, size }).unwrap();
        let b =
            atmix_sample_size(0.1, 0.3, 0.05, &AtmixInput::Uniform { t_mix: 7, j_inf: (size * size) as f64 }).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn rank_one_visit_variance_is_bounded() {
    let pi = [0.1, 0.2, 0.3, 0.4];
    let p = StochasticMatrix::new(vec![pi.to_vec(); 4]).unwrap();
    let stat = ProbabilityVector::new(pi.to_vec()).unwrap();
    let n = 2_000;
    let profile = exact_beta(&p, &stat, n).unwrap();
    let observed = visit_variance_experiment(&p, n, 400, 5).unwrap();
    for pv in [PValue::Finite(1.0), PValue::Finite(2.0), PValue::Finite(4.0)] {
        let bp = profile.b_p(pv, 1, n).unwrap();
        for x in 0..4 {
            let bound = variance_bound_visits(pi[x], pv, n, bp);
            let exact = (n - 1) as f64 * pi[x] * (1.0 - pi[x]);
            assert!(exact <= bound, "state {x}: {exact} > {bound}");
            assert!(observed.variance[x] <= bound, "state {x}: {} > {bound}", observed.variance[x]);
        }
    }
}

#[test]
fn dominating_certificate_bounds_entropic_term() {
    for seed in 0..10 {
        let p = random_ergodic(5, 40 + seed).unwrap();
        let pi = stationary_distribution(&p).unwrap();
        let nu = ProbabilityVector::uniform(5);
        let c = p.as_flat().iter().map(|v| v * 5.0).fold(0.0, f64::max);
        let cert = ErgodicCertificate::Dominating { c, nu };
        for pv in [PValue::Finite(2.0), PValue::Finite(4.0), PValue::Infinity] {
            for s in 1..6 {
                let exact = entropic_term(&pair_matrix(&p, &pi, s).unwrap(), pv);
                let bound = jps_bound(&cert, &pi, pv, s, 1).unwrap();
                assert!(exact <= bound * (1.0 + 1e-12), "seed {seed}, s {s}: {exact} > {bound}");
            }
        }
    }
}

#[test]
fn weak_certificate_check_detects_shrunk_drift() {
    let spec =
        PtSpec { q: 0.2, mu: Sequence::geometric(1.0, 0.5), nu: Sequence::capped_power(0.5, 1.0), truncation: 60 }
            .with_normalized_mu()
            .unwrap();
    let chain = pt_chain(&spec).unwrap();
    let cert = pt_weak_vgeo_certificate(&spec, PValue::Finite(2.0), CertificateScope::Truncated).unwrap();
    let ok = weak_vgeo_check(&chain.matrix, &chain.pi, &cert.v, &cert.d, cert.b).unwrap();
    assert!(ok.passed, "{ok:?}");
    let half: Vec<f64> = cert.d.iter().map(|d| 0.5 * d).collect();
    let bad = weak_vgeo_check(&chain.matrix, &chain.pi, &cert.v, &half, cert.b).unwrap();
    assert!(!bad.passed);

    let uniform = StochasticMatrix::new(vec![vec![0.5, 0.5], vec![0.3, 0.7]]).unwrap();
    let pi = stationary_distribution(&uniform).unwrap();
    assert!(weak_vgeo_check(&uniform, &pi, &[1.0, 1.0], &[1.0, 1.0], 0.0).unwrap().passed);
}

#[test]
fn json_requests_match_direct_calls() {
    let resp = evaluate_json(r#"{"bound": "bp", "params": {"model": {"kind": "exponential", "beta0": 1.0, "beta1": 0.5, "b": 1.0}, "p": 2.0, "s": 3}}"#).unwrap();
    let direct = bp_bound(&RateModel::exponential(1.0, 0.5).unwrap(), PValue::Finite(2.0), 3).unwrap();
    assert_eq!(resp.value.as_f64().unwrap(), direct);
    let resp = evaluate_json(
        r#"{"bound": "uniform", "params": {"eps": 0.1, "delta": 0.05, "s": 1, "t_mix": 3, "j_inf": 4.0, "n": 500}}"#,
    )
    .unwrap();
    let direct = mad_and_pac_uniform(0.1, 0.05, 1, 3, 4.0, 500).unwrap();
    assert_eq!(resp.value["pac_n"].as_u64().unwrap() as usize, direct.pac_n);
    assert!(evaluate_json(r#"{"bound": "nope", "params": {}}"#).is_err());
    assert!(evaluate_json(r#"{"bound": "riemann_zeta", "params": {"r": 0.5}}"#).is_err());
}

#[test]
fn special_functions_match_oracles() {
    for r in [1.5, 2.0, 3.5] {
        let resp = evaluate_json(&format!(r#"{{"bound": "riemann_zeta", "params": {{"r": {r}}}}}"#)).unwrap();
        let v = resp.value.as_f64().unwrap();
        assert!((v - common::zeta_partial_sum(r)).abs() <= 1e-9 * v);
    }
}

fn two_point() -> impl Strategy<Value = StochasticMatrix> {
    (0.05f64..0.95, 0.05f64..0.95)
        .prop_map(|(p, q)| StochasticMatrix::new(vec![vec![1.0 - p, p], vec![q, 1.0 - q]]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fitted_envelopes_bound_bp(chain in two_point(), s in 1usize..6, n in 2usize..200) {
        let pi = stationary_distribution(&chain).unwrap();
        let profile = exact_beta(&chain, &pi, 200).unwrap();
        let fits = [
            (RateModel::fit(&profile, RateKind::Exponential, 1.0, 1.0).unwrap(), vec![1.0, 2.0, 4.0]),
            (RateModel::fit(&profile, RateKind::SubExponential, 1.0, 0.5).unwrap(), vec![1.0, 2.0, 4.0]),
            (RateModel::fit(&profile, RateKind::Polynomial, 1.0, 3.0).unwrap(), vec![1.0, 2.0]),
        ];
        for (model, ps) in fits {
            prop_assert!(model.dominates(&profile), "{model:?}");
            for p in ps {
                let exact = profile.b_p(PValue::Finite(p), s, n).unwrap();
                let bound = bp_bound(&model, PValue::Finite(p), s).unwrap();
                prop_assert!(exact <= bound * (1.0 + 1e-12), "{model:?}, p {p}: {exact} > {bound}");
            }
        }
    }

    #[test]
    fn t_sharp_upper_bounds_the_envelope_crossing(b in 0.2f64..1.0, beta1 in 0.05f64..2.0, xi in 1e-4f64..0.5) {
        let model = RateModel::sub_exponential(1.0, beta1, b).unwrap();
        let t = model.t_sharp_upper(xi).unwrap();
        prop_assert!(model.envelope(t) <= xi);
        prop_assert!(t == 1 || model.envelope(t - 1) > xi);
    }
}

use avgmix::chain::{stationary_distribution, ProbabilityVector, StochasticMatrix};
use avgmix::estimation::{
    avg_mixing_time_hat_states, beta_hat, beta_hat_states, confidence_interval, coverage_experiment, mad_experiment,
    read_trajectory, sample_trajectory, skipped_counts_states, write_trajectory, MultiSkipCounter, StartMode,
    Trajectory,
};
use avgmix::mixing::PValue;
use avgmix::random::random_ergodic;
use proptest::prelude::*;

fn rank_one(pi: &[f64]) -> StochasticMatrix {
    StochasticMatrix::new(vec![pi.to_vec(); pi.len()]).unwrap()
}

const PI5: [f64; 5] = [0.1, 0.15, 0.2, 0.25, 0.3];

#[test]
fn rank_one_pair_frequencies_match_product_law() {
    let p = rank_one(&PI5);
    let traj = sample_trajectory(&p, &StartMode::Stationary, 100_000, 3).unwrap();
    let c = skipped_counts_states(traj.states(), 1).unwrap();
    let m = c.m as f64;
    for x in 0..5u32 {
        for y in 0..5u32 {
            let prob = PI5[x as usize] * PI5[y as usize];
            let got = c.pair.get(&(x, y)).copied().unwrap_or(0) as f64;
            let sigma = (m * prob * (1.0 - prob)).sqrt();
            assert!((got - m * prob).abs() <= 3.0 * sigma, "pair ({x}, {y}): {got} vs {}", m * prob);
        }
    }
}

#[test]
fn two_point_transition_frequencies() {
    let p = StochasticMatrix::new(vec![vec![0.9, 0.1], vec![0.4, 0.6]]).unwrap();
    let traj = sample_trajectory(&p, &StartMode::Stationary, 1_000_000, 11).unwrap();
    let c = skipped_counts_states(traj.states(), 1).unwrap();
    for x in 0..2u32 {
        let nx = c.visit[&x] as f64;
        for y in 0..2u32 {
            let prob = p.get(x as usize, y as usize);
            let freq = c.pair.get(&(x, y)).copied().unwrap_or(0) as f64 / nx;
            let sigma = (prob * (1.0 - prob) / nx).sqrt();
            assert!((freq - prob).abs() <= 3.0 * sigma, "({x}, {y}): {freq} vs {prob}");
        }
    }
}

#[test]
fn rank_one_estimates_are_small() {
    let p = rank_one(&PI5);
    let mean: f64 = (0..20)
        .map(|seed| {
            let traj = sample_trajectory(&p, &StartMode::Stationary, 100_000, seed).unwrap();
            beta_hat_states(traj.states(), 1)
        })
        .sum::<f64>()
        / 20.0;
    assert!(mean < 0.02, "mean beta_hat = {mean}");
}

#[test]
fn rank_one_estimate_is_one_step() {
    let p = rank_one(&PI5);
    let replicas = 200;
    let ones = (0..replicas)
        .filter(|&seed| {
            let traj = sample_trajectory(&p, &StartMode::Stationary, 10_000, seed).unwrap();
            avg_mixing_time_hat_states(traj.states(), 0.1).value == 1
        })
        .count();
    assert!(ones as f64 >= 0.99 * replicas as f64, "{ones}/{replicas}");
}

#[test]
fn factorized_counts_give_zero() {
    let states = [0u32, 0, 1, 1, 0];
    assert_eq!(beta_hat_states(&states, 1), 0.0);
    assert_eq!(beta_hat(&skipped_counts_states(&states, 1).unwrap()).beta_hat, 0.0);
}

#[test]
fn shortest_trajectory_estimate() {
    for states in [[0u32, 0], [0, 1], [1, 0]] {
        for xi in [1e-6, 0.1, 0.9] {
            assert!(avg_mixing_time_hat_states(&states, xi).value <= 2);
        }
    }
}

#[test]
fn confidence_interval_shape() {
    let p = random_ergodic(4, 5).unwrap();
    let traj = sample_trajectory(&p, &StartMode::Stationary, 20_000, 8).unwrap();
    for xi in [0.05, 0.1, 0.2] {
        let t_hat = avg_mixing_time_hat_states(traj.states(), xi).value;
        let tight = confidence_interval(&traj, xi, 0.0).unwrap();
        assert_eq!((tight.lower, tight.upper), (t_hat, t_hat));
        for eps in [0.1, 0.3, 0.6] {
            let ci = confidence_interval(&traj, xi, eps).unwrap();
            assert!(ci.lower <= t_hat && t_hat <= ci.upper, "xi {xi}, eps {eps}: {ci:?} vs {t_hat}");
        }
    }
}

#[test]
fn coverage_grows_with_length() {
    let p = StochasticMatrix::new(vec![vec![0.9, 0.1], vec![0.4, 0.6]]).unwrap();
    let mut last = 0.0;
    for n in [2_000, 8_000, 32_000] {
        let res = coverage_experiment(&p, 0.1, 0.5, n, 400, 21).unwrap();
        assert_eq!(res.window, (2, 3));
        assert!(res.coverage >= last - 0.02, "n = {n}: {} after {last}", res.coverage);
        last = res.coverage;
    }
    assert!(last > 0.9, "coverage at the largest n is {last}");
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let p = random_ergodic(3, 2).unwrap();
    let run = || mad_experiment(&p, 2, &[500, 2_000], 64, 99, &[PValue::Finite(2.0)]).unwrap();
    let default = run();
    std::env::set_var(avgmix::rng::THREADS_ENV, "1");
    let single = run();
    std::env::set_var(avgmix::rng::THREADS_ENV, "3");
    let three = run();
    std::env::remove_var(avgmix::rng::THREADS_ENV);
    assert_eq!(default, single);
    assert_eq!(default, three);
}

#[test]
fn trajectory_file_round_trip() {
    let p = random_ergodic(6, 4).unwrap();
    let traj = sample_trajectory(&p, &StartMode::Point(2), 5_000, 17).unwrap();
    assert_eq!(traj.states()[0], 2);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("walk.bin");
    write_trajectory(&traj, &path).unwrap();
    let back = read_trajectory(&path).unwrap();
    assert_eq!(back, traj);
}

#[test]
fn stationary_start_residual_is_recorded() {
    let p = random_ergodic(5, 6).unwrap();
    let traj = sample_trajectory(&p, &StartMode::Stationary, 100, 1).unwrap();
    let residual = traj.meta().stationary_residual.unwrap();
    assert!(residual <= 1e-12);
    let pi = stationary_distribution(&p).unwrap();
    let custom = sample_trajectory(&p, &StartMode::Custom(pi), 100, 1).unwrap();
    assert_eq!(custom.meta().stationary_residual, None);
}

#[test]
fn imported_states_are_validated() {
    let p = random_ergodic(3, 1).unwrap();
    assert!(Trajectory::from_states(vec![0, 1, 3], &p, 0, StartMode::Stationary).is_err());
    assert!(Trajectory::from_states(vec![0], &p, 0, StartMode::Stationary).is_err());
    assert!(Trajectory::from_states(vec![0, 2, 1], &p, 0, StartMode::Stationary).is_ok());
}

fn states_strategy() -> impl Strategy<Value = Vec<u32>> {
    (2u32..7).prop_flat_map(|k| proptest::collection::vec(0..k, 2..400))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn estimate_lies_in_unit_interval(states in states_strategy(), s in 1usize..20) {
        let v = beta_hat_states(&states, s);
        prop_assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn estimate_ignores_labels(states in states_strategy(), s in 1usize..10, shift in 1u32..6) {
        let k = states.iter().max().unwrap() + 1;
        let relabeled: Vec<u32> = states.iter().map(|x| (x + shift) % k).collect();
        let a = beta_hat_states(&states, s);
        let b = beta_hat_states(&relabeled, s);
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn pair_counts_sum_to_m(states in states_strategy(), s in 1usize..50) {
        prop_assume!(s < states.len());
        let c = skipped_counts_states(&states, s).unwrap();
        prop_assert_eq!(c.m, (states.len() - 1) / s);
        prop_assert_eq!(c.pair.values().sum::<u64>() as usize, c.m);
        prop_assert_eq!(c.visit.values().sum::<u64>() as usize, c.m);
    }

    #[test]
    fn skipping_is_thinning(states in states_strategy(), s in 1usize..10) {
        prop_assume!(s < states.len());
        let thinned: Vec<u32> = states.iter().step_by(s).copied().collect();
        prop_assume!(thinned.len() >= 2);
        let a = skipped_counts_states(&states, s).unwrap();
        let b = skipped_counts_states(&thinned, 1).unwrap();
        prop_assert_eq!(a.pair, b.pair);
        prop_assert_eq!(a.visit, b.visit);
    }

    #[test]
    fn counting_routes_agree(states in states_strategy()) {
        let size = *states.iter().max().unwrap() as usize + 1;
        let mut multi = MultiSkipCounter::new(size, 8);
        for &x in &states {
            multi.push(x);
        }
        for s in 1..=8 {
            let dense = beta_hat_states(&states, s);
            prop_assert!((multi.beta_hat(s) - dense).abs() <= 1e-12);
            if s < states.len() {
                let sparse = beta_hat(&skipped_counts_states(&states, s).unwrap()).beta_hat;
                prop_assert!((sparse - dense).abs() <= 1e-12);
            } else {
                prop_assert_eq!(dense, 0.0);
            }
        }
    }

    #[test]
    fn estimate_is_the_first_crossing(states in states_strategy(), xi in 0.01f64..0.6) {
        let est = avg_mixing_time_hat_states(&states, xi);
        for s in 1..est.value.min(states.len()) {
            prop_assert!(beta_hat_states(&states, s) > xi);
        }
        if !est.saturated {
            prop_assert!(beta_hat_states(&states, est.value) <= xi);
        }
    }
}

#[test]
fn custom_start_law_is_honoured() {
    let p = random_ergodic(3, 3).unwrap();
    let mu = ProbabilityVector::new(vec![0.0, 0.0, 1.0]).unwrap();
    for seed in 0..10 {
        let traj = sample_trajectory(&p, &StartMode::Custom(mu.clone()), 10, seed).unwrap();
        assert_eq!(traj.states()[0], 2);
    }
}

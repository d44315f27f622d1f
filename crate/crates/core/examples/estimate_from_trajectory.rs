//! Estimate beta(s) and the average-mixing time from a single simulated path.

use avgmix::estimation::{
    avg_mixing_time_hat, beta_hat, confidence_interval, sample_trajectory, skipped_counts, StartMode,
};
use avgmix::families::TwoPointChain;
use avgmix::mixing::exact_beta;

fn main() -> avgmix::Result<()> {
    let chain = TwoPointChain::new(0.1, 0.4)?;
    let (p, pi) = (chain.matrix(), chain.stationary());
    let traj = sample_trajectory(&p, &StartMode::Stationary, 200_000, 42)?;
    let exact = exact_beta(&p, &pi, 10)?;

    for s in 1..=5 {
        let est = beta_hat(&skipped_counts(&traj, s)?);
        println!("s = {s}: beta_hat = {:.4}, beta = {:.4}", est.beta_hat, exact.values()[s]);
    }

    let xi = 0.1;
    let t_hat = avg_mixing_time_hat(&traj, xi);
    let ci = confidence_interval(&traj, xi, 0.2)?;
    println!("t_hat({xi}) = {} (exact {:?}), interval [{}, {}]", t_hat.value, exact.t_sharp(xi), ci.lower, ci.upper);
    Ok(())
}

//! Exact beta(t) and d(t) of a two-point chain, and where they cross a threshold.

use avgmix::families::{two_point_closed_forms, TwoPointChain};
use avgmix::mixing::{mixing_profile, mixing_times};

fn main() -> avgmix::Result<()> {
    let chain = TwoPointChain::new(0.1, 0.4)?;
    let (p, pi) = (chain.matrix(), chain.stationary());

    let profile = mixing_profile(&p, &pi, 8)?;
    println!("{:>3} {:>12} {:>12} {:>12}", "t", "beta(t)", "d(t)", "closed form");
    for t in 0..=8 {
        let closed = two_point_closed_forms(&chain, t);
        println!("{t:>3} {:>12.6} {:>12.6} {:>12.6}", profile.beta.values()[t], profile.d[t], closed.d_sharp);
    }

    let report = mixing_times(&p, &pi, 0.1, 1000)?;
    println!("xi = 0.1: t_mix = {:?}, t_sharp = {:?}", report.t_mix, report.t_sharp);
    Ok(())
}

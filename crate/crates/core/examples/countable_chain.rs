//! A truncated countable-state chain: exact beta(t) between closed-form bounds.

use avgmix::families::{pt_beta_lower, pt_beta_upper_best, pt_chain, PtSpec, Sequence};
use avgmix::mixing::exact_beta;

fn main() -> avgmix::Result<()> {
    let nu = Sequence::capped_power(0.5, 1.0);
    let mu = Sequence::product(vec![nu.clone(), Sequence::power(1.0, 2.5)]);
    let spec = PtSpec { q: 0.2, mu, nu, truncation: 400 }.with_normalized_mu()?;
    let chain = pt_chain(&spec)?;
    println!("truncation K = 400, stationary tail mass {:.2e}", chain.tail_mass);

    let profile = exact_beta(&chain.matrix, &chain.pi, 200)?;
    for t in [2, 5, 10, 20, 50, 100, 200] {
        let lower = pt_beta_lower(&spec, t, 1.0)?;
        let upper = pt_beta_upper_best(&spec, t, 400, 64)?;
        let beta = profile.get(t).unwrap_or(0.0);
        println!("t = {t:>3}: {lower:.3e} <= {beta:.3e} <= {:.3e} (K_inner = {})", upper.total(), upper.k_inner);
    }
    Ok(())
}

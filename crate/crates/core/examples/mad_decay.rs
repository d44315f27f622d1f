//! Monte Carlo mean absolute deviation of beta_hat against its bound.
//!
//! Set `MIX_THREADS` to cap the worker pool; output does not depend on it.

use avgmix::estimation::mad_experiment;
use avgmix::mixing::PValue;
use avgmix::random::random_ergodic;

fn main() -> avgmix::Result<()> {
    let p = random_ergodic(5, 7)?;
    let ps = [PValue::Finite(2.0), PValue::Finite(4.0), PValue::Infinity];
    let rows = mad_experiment(&p, 1, &[1_000, 4_000, 16_000], 200, 7, &ps)?;
    println!("{:>7} {:>10} {:>10} {:>10}", "n", "mad", "stderr", "bound");
    for r in rows {
        let bound = r.bounds.iter().map(|b| b.bound).fold(f64::INFINITY, f64::min);
        println!("{:>7} {:>10.5} {:>10.5} {:>10.4}", r.n, r.mad, r.mad_stderr, bound);
    }
    Ok(())
}

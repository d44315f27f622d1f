//! Two-point chains whose mixing time is many times their average-mixing time.

use avgmix::families::gap_search;

fn main() -> avgmix::Result<()> {
    for m in [10.0, 100.0, 1000.0] {
        let r = gap_search(0.1, m, 10_000)?;
        println!(
            "M = {m:>6}: p = {:.3e}, q = {:.3e}, t_mix = {}, t_sharp = {}, ratio = {}",
            r.p, r.q, r.t_mix, r.t_sharp, r.ratio
        );
    }
    Ok(())
}

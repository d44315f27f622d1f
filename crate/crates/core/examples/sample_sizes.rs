//! Sample-size calculators for the estimators and for deviation inequalities.

use avgmix::bounds::{atmix_sample_size, bp_bound, deviation_sample_size, mad_and_pac_uniform, AtmixInput, RateModel};
use avgmix::mixing::PValue;

fn main() -> avgmix::Result<()> {
    let (xi, eps, delta) = (0.2, 0.25, 0.1);

    let finite = atmix_sample_size(xi, eps, delta, &AtmixInput::Finite { t_mix: 3, size: 2 })?;
    println!("average-mixing time, finite space (t_mix = 3, |X| = 2): n = {}", finite.n);

    let uniform = mad_and_pac_uniform(eps, delta, 1, 3, 4.0, 10_000)?;
    println!("uniformly ergodic: MAD bound at n = 10000 is {:.4}, PAC n = {}", uniform.mad_bound, uniform.pac_n);

    for model in [
        RateModel::exponential(1.0, 0.5)?,
        RateModel::sub_exponential(1.0, 0.5, 0.5)?,
        RateModel::polynomial(1.0, 1.0, 4.0)?,
    ] {
        let dev = deviation_sample_size(&model, 0.1, 0.05, &|x| model.t_sharp_upper(x))?;
        let b2 = bp_bound(&model, PValue::Finite(2.0), 1)?;
        println!("{:?}: B_2 <= {b2:.3}, deviation n = {}", model.kind, dev.n);
    }
    Ok(())
}

//! Check an ergodicity certificate on a chain and compare its J_p bound with the exact value.

use avgmix::bounds::{jps_bound, weak_vgeo_check, ErgodicCertificate};
use avgmix::families::{pt_chain, pt_weak_vgeo_certificate, CertificateScope, PtSpec, Sequence};
use avgmix::mixing::{entropic_term, pair_matrix, PValue};

fn main() -> avgmix::Result<()> {
    let nu = Sequence::capped_power(0.5, 1.0);
    let mu = Sequence::product(vec![nu.clone(), Sequence::power(1.0, 2.5)]);
    let spec = PtSpec { q: 0.2, mu, nu, truncation: 200 }.with_normalized_mu()?;
    let chain = pt_chain(&spec)?;

    let p = PValue::Finite(2.0);
    let cert = pt_weak_vgeo_certificate(&spec, p, CertificateScope::Truncated)?;
    let check = weak_vgeo_check(&chain.matrix, &chain.pi, &cert.v, &cert.d, cert.b)?;
    println!("drift condition holds: {} (residual {:.1e})", check.passed, check.drift_residual);

    let wv = ErgodicCertificate::WeakVGeometric { v: cert.v, d: cert.d, b: cert.b };
    for s in [1, 5, 20] {
        let exact = entropic_term(&pair_matrix(&chain.matrix, &chain.pi, s)?, p);
        let bound = jps_bound(&wv, &chain.pi, p, s, 0)?;
        println!("s = {s:>2}: J_2 = {exact:.4}, certificate bound {bound:.4}");
    }
    Ok(())
}

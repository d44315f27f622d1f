//! Evaluate calculators from JSON requests, as a service or script would.

use avgmix::bounds::evaluate_json;

fn main() -> avgmix::Result<()> {
    let requests = [
        r#"{"bound": "atmix", "params": {"xi": 0.2, "eps": 0.25, "delta": 0.1, "input": {"mode": "finite", "t_mix": 3, "size": 2}}}"#,
        r#"{"bound": "mad_general", "params": {"bp": 2.0, "jp": 3.0, "s": 1, "n": 10000}}"#,
        r#"{"bound": "riemann_zeta", "params": {"r": 2.0}}"#,
    ];
    for text in requests {
        let resp = evaluate_json(text)?;
        println!("{}", serde_json::to_string(&resp)?);
    }
    Ok(())
}

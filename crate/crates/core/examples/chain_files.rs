//! Build a chain from a family description, export it, and read it back bit for bit.

use avgmix::families::FamilySpec;
use avgmix::io::{read_matrix_json, write_matrix_json};

fn main() -> avgmix::Result<()> {
    let spec = FamilySpec::from_json(r#"{"family": "chebyshev", "params": {"theta": 1.0}, "truncation": 20}"#)?;
    let built = spec.build()?;
    let path = std::env::temp_dir().join("chebyshev20.json");
    write_matrix_json(&built.matrix, &path)?;
    let back = read_matrix_json(&path)?;
    println!("{} states, checksum {}", back.size(), back.checksum());
    println!("round trip exact: {}", back == built.matrix);
    Ok(())
}

//! Seeded random chains for tests and experiments.

use rand::Rng;

use crate::chain::{ProbabilityVector, StochasticMatrix};
use crate::error::Result;
use crate::rng::replica_rng;

fn exp_draw<R: Rng>(rng: &mut R) -> f64 {
    -(1.0 - rng.gen::<f64>()).ln()
}

/// Rows drawn from a flat Dirichlet distribution; every entry is positive.
pub fn random_ergodic(size: usize, seed: u64) -> Result<StochasticMatrix> {
    let mut rng = replica_rng(seed, 0);
    let rows = (0..size)
        .map(|_| {
            let w: Vec<f64> = (0..size).map(|_| exp_draw(&mut rng)).collect();
            let total: f64 = w.iter().sum();
            w.into_iter().map(|v| v / total).collect()
        })
        .collect();
    StochasticMatrix::new(rows)
}

/// Random walk on a symmetric conductance matrix; reversible with respect to the returned law.
pub fn random_reversible(size: usize, seed: u64) -> Result<(StochasticMatrix, ProbabilityVector)> {
    let mut rng = replica_rng(seed, 1);
    let mut c = vec![vec![0.0; size]; size];
    for i in 0..size {
        for j in i..size {
            let w = exp_draw(&mut rng);
            c[i][j] = w;
            c[j][i] = w;
        }
    }
    let degree: Vec<f64> = c.iter().map(|r| r.iter().sum()).collect();
    let total: f64 = degree.iter().sum();
    let rows = c.iter().zip(&degree).map(|(r, d)| r.iter().map(|v| v / d).collect()).collect();
    Ok((StochasticMatrix::new(rows)?, ProbabilityVector::new(degree.iter().map(|d| d / total).collect())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{is_ergodic, reversibility_residual};

    #[test]
    fn generated_chains_have_claimed_structure() {
        let p = random_ergodic(6, 3).unwrap();
        assert!(is_ergodic(&p).ergodic);
        assert_eq!(p, random_ergodic(6, 3).unwrap());
        let (p, pi) = random_reversible(5, 3).unwrap();
        assert!(reversibility_residual(&p, &pi) < 1e-15);
    }
}

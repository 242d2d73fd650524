//! Deterministic and seeded constructions of the tournament families under study.
//!
//! Every random generator draws from [`ChaCha8Rng`] seeded with
//! `seed_from_u64(seed)`, and consumes coins for unordered pairs in
//! lexicographic order `(0,1), (0,2), …, (1,2), …`. Equal parameters and seed
//! therefore give bit-identical tournaments on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tournament::Tournament;

pub type TourneyRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> TourneyRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The carousel tournament `R_m`: vertex `x` beats `x+1, …, x+(m−1)/2 (mod m)`.
pub fn carousel(m: usize) -> Result<Tournament> {
    if m == 0 {
        return Err(Error::EmptyTournament);
    }
    if m % 2 == 0 {
        return Err(Error::EvenOrder(m));
    }
    let half = (m - 1) / 2;
    Tournament::from_fn(m, |u, v| v - u <= half)
}

/// `u` beats `v` iff `u < v`.
pub fn transitive(n: usize) -> Result<Tournament> {
    Tournament::from_fn(n, |_, _| true)
}

/// Every pair oriented by an independent fair coin.
pub fn random_uniform(n: usize, seed: u64) -> Result<Tournament> {
    let mut rng = rng_from_seed(seed);
    Tournament::from_fn(n, |_, _| rng.gen::<bool>())
}

/// Parameters of the layered construction `S_{N,t}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayeredSpec {
    pub n: usize,
    pub t: f64,
    pub seed: u64,
}

impl LayeredSpec {
    pub fn new(n: usize, t: f64, seed: u64) -> Result<Self> {
        let spec = Self { n, t, seed };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::EmptyTournament);
        }
        if !(self.t > 0.0 && self.t < 1.0) {
            return Err(Error::InvalidRatio(self.t));
        }
        Ok(())
    }

    /// Sizes `|A_0| > |A_1| > …` of the nested prefix chain.
    ///
    /// Each size is `t·|A_{i−1}|` rounded half-up; the chain stops once the
    /// next size would be 0 or would not shrink.
    pub fn layer_sizes(&self) -> Result<Vec<usize>> {
        self.validate()?;
        let mut sizes = vec![self.n];
        let mut k = self.n;
        loop {
            let next = (self.t * k as f64 + 0.5).floor() as usize;
            if next == 0 || next >= k {
                break;
            }
            sizes.push(next);
            k = next;
        }
        Ok(sizes)
    }
}

/// The layered construction: `A_i` is the first `|A_i|` vertices, every vertex
/// of `A_i` beats all of `A_{i−1} ∖ A_i`, and all other arcs (inside each
/// difference set and inside the final core) are fair coins.
pub fn layered(spec: &LayeredSpec) -> Result<Tournament> {
    let sizes = spec.layer_sizes()?;
    // depth(v) = max { i : v ∈ A_i }; prefixes make depth nonincreasing in v.
    let mut depth = vec![0usize; spec.n];
    for (i, &size) in sizes.iter().enumerate().skip(1) {
        depth[..size].iter_mut().for_each(|d| *d = i);
    }
    let mut rng = rng_from_seed(spec.seed);
    Tournament::from_fn(spec.n, |u, v| {
        if depth[u] == depth[v] {
            rng.gen::<bool>()
        } else {
            depth[u] > depth[v]
        }
    })
}

/// Draws `n` independent uniform points on the circle `[0, 1)` and builds the
/// circular tournament on them (see [`digraphon_from_points`]).
pub fn digraphon_sample(n: usize, seed: u64) -> Result<Tournament> {
    Ok(digraphon_sample_with_points(n, seed)?.0)
}

/// As [`digraphon_sample`], also returning the sampled coordinates.
pub fn digraphon_sample_with_points(n: usize, seed: u64) -> Result<(Tournament, Vec<f64>)> {
    if n == 0 {
        return Err(Error::EmptyTournament);
    }
    let mut rng = rng_from_seed(seed);
    let xs: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    Ok((digraphon_from_points(&xs)?, xs))
}

/// Arc `u → v` iff `(x_u − x_v) mod 1 < 1/2`. When the rule holds in both or
/// neither direction (equal points, or points exactly half a turn apart) the
/// lower index beats the higher.
pub fn digraphon_from_points(xs: &[f64]) -> Result<Tournament> {
    if let Some(&bad) = xs.iter().find(|x| !(0.0..1.0).contains(*x)) {
        return Err(Error::InvalidParameter(format!(
            "coordinate {bad} is outside [0, 1)"
        )));
    }
    Tournament::from_fn(xs.len(), |u, v| {
        let forward = (xs[u] - xs[v]).rem_euclid(1.0) < 0.5;
        let backward = (xs[v] - xs[u]).rem_euclid(1.0) < 0.5;
        forward == backward || forward
    })
}

//! Seeded random initial data.
//!
//! Every draw goes through ChaCha8 with an explicit stream number, so work
//! split across threads stays reproducible regardless of scheduling.

use darboux_core::{Boundary, LatticeState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Uniform point on the unit sphere of `R^dim`.
pub fn unit_direction<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|a| a / norm).collect();
        }
    }
}

/// Uniform point in the Euclidean ball of radius `radius`.
pub fn ball_point<R: Rng>(rng: &mut R, dim: usize, radius: f64) -> Vec<f64> {
    let u = unit_direction(rng, dim);
    let r = radius * rng.gen::<f64>().powf(1.0 / dim as f64);
    u.into_iter().map(|a| a * r).collect()
}

pub fn state_on_sphere(seed: u64, stream: u64, sites: usize, radius: f64, bc: Boundary) -> LatticeState {
    let u = unit_direction(&mut rng(seed, stream), 2 * sites);
    let v: Vec<f64> = u.into_iter().map(|a| a * radius).collect();
    LatticeState::from_flat(&v, bc).expect("even length by construction")
}

pub fn state_in_ball(seed: u64, stream: u64, sites: usize, radius: f64, bc: Boundary) -> LatticeState {
    let v = ball_point(&mut rng(seed, stream), 2 * sites, radius);
    LatticeState::from_flat(&v, bc).expect("even length by construction")
}

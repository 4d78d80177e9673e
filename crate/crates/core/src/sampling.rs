//! Deterministic point sets in balls and boxes.
//!
//! A level's sample is half scrambled Halton points (for n ≤ 3), a quarter
//! uniform points in the ball, and a quarter points whose radius is
//! log-uniform in `[1e-9·r, r]`. The radial quarter reaches scales a uniform
//! sample would need billions of points to see, which is what makes
//! `1/|x|`-type blow-ups and `sin(1/x)`-type oscillation visible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::ivf::DomainBox;

const HALTON_MAX_DIMS: usize = 3;
const PRIMES: [u64; 3] = [2, 3, 5];
const RADIAL_DECADES: f64 = 9.0;

/// A ChaCha stream keyed by `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let (mut f, mut r) = (inv, 0.0);
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

pub fn unit_direction<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = norm(&v);
        if norm > 1e-12 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `count` points in the closed ball `B(center, radius)`, reproducible from
/// `(seed, stream)`.
pub fn ball_points(
    center: &[f64],
    radius: f64,
    count: usize,
    seed: u64,
    stream: u64,
) -> Vec<Vec<f64>> {
    let n = center.len();
    let mut rng = stream_rng(seed, stream);
    let mut out = Vec::with_capacity(count);
    let at = |u: &[f64], scale: f64| -> Vec<f64> {
        center
            .iter()
            .zip(u)
            .map(|(c, d)| c + scale * d)
            .collect()
    };

    if n <= HALTON_MAX_DIMS {
        let target = count / 2;
        let shift: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let mut i = 1u64;
        let max_tries = 8 * target as u64 + 16;
        while out.len() < target && i <= max_tries {
            let u: Vec<f64> = (0..n)
                .map(|d| {
                    let p = (radical_inverse(i, PRIMES[d]) + shift[d]).fract();
                    2.0 * p - 1.0
                })
                .collect();
            i += 1;
            if norm(&u) <= 1.0 {
                out.push(at(&u, radius));
            }
        }
    }

    let radial = (count - out.len()) / 2;
    for _ in 0..radial {
        let dir = unit_direction(n, &mut rng);
        let r = radius * 10f64.powf(-RADIAL_DECADES * rng.random::<f64>());
        out.push(at(&dir, r));
    }
    while out.len() < count {
        let dir = unit_direction(n, &mut rng);
        let r = radius * rng.random::<f64>().powf(1.0 / n as f64);
        out.push(at(&dir, r));
    }
    out
}

/// `count` uniform points in a box.
pub fn box_points(domain: &DomainBox, count: usize, seed: u64, stream: u64) -> Vec<Vec<f64>> {
    let mut rng = stream_rng(seed, stream);
    (0..count).map(|_| domain.sample_uniform(&mut rng)).collect()
}

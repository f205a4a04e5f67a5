//! Oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use steklov::geometry::BoundaryCube;

/// Reduces a network with unit resistors to a single edge between `s` and
/// `t`. Returns `None` if the network is not series/parallel reducible.
pub fn series_parallel(edges: &[(usize, usize)], s: usize, t: usize) -> Option<f64> {
    // multigraph as keyed resistances; parallel edges merge on insertion
    let mut net: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let add = |net: &mut BTreeMap<(usize, usize), f64>, a: usize, b: usize, r: f64| {
        let k = key(a, b);
        let merged = match net.get(&k) {
            Some(&old) => old * r / (old + r),
            None => r,
        };
        net.insert(k, merged);
    };
    for &(a, b) in edges {
        add(&mut net, a, b, 1.0);
    }
    loop {
        if net.len() == 1 && net.contains_key(&key(s, t)) {
            return net.get(&key(s, t)).copied();
        }
        let mut deg: BTreeMap<usize, Vec<((usize, usize), f64)>> = BTreeMap::new();
        for (&(a, b), &r) in &net {
            deg.entry(a).or_default().push(((a, b), r));
            deg.entry(b).or_default().push(((a, b), r));
        }
        let pick = deg
            .iter()
            .find(|(&v, inc)| v != s && v != t && inc.len() <= 2)
            .map(|(&v, inc)| (v, inc.clone()));
        let (v, inc) = pick?;
        for (k, _) in &inc {
            net.remove(k);
        }
        if let [(k1, r1), (k2, r2)] = inc.as_slice() {
            let other = |k: &(usize, usize)| if k.0 == v { k.1 } else { k.0 };
            add(&mut net, other(k1), other(k2), r1 + r2);
        }
    }
}

pub fn tree_resistance(depth: usize) -> f64 {
    // root to shorted leaves of a complete binary tree
    (0..depth).fold(0.0, |r, _| (1.0 + r) / 2.0)
}

pub const SAMPLES: usize = 1_000_000;

pub fn random_cube(n: usize, rng: &mut ChaCha8Rng) -> BoundaryCube {
    let axis = rng.random_range(0..n);
    let center2 = (0..n)
        .map(|k| {
            let c = 2 * rng.random_range(-4i64..=4);
            if k == axis {
                c + 1
            } else {
                c
            }
        })
        .collect();
    BoundaryCube::new(center2, axis).unwrap()
}

fn sample_point(c: &BoundaryCube, rng: &mut ChaCha8Rng) -> Vec<f64> {
    c.center()
        .into_iter()
        .enumerate()
        .map(|(k, x)| {
            if k == c.normal_axis {
                x
            } else {
                x + rng.random::<f64>() - 0.5
            }
        })
        .collect()
}

/// Mean and standard error of `|s−t|²` for independent uniform `s`, `t`.
pub fn monte_carlo(a: &BoundaryCube, b: &BoundaryCube, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..SAMPLES {
        let s = sample_point(a, rng);
        let t = sample_point(b, rng);
        let d: f64 = s.iter().zip(&t).map(|(x, y)| (x - y) * (x - y)).sum();
        sum += d;
        sum_sq += d * d;
    }
    let nf = SAMPLES as f64;
    let mean = sum / nf;
    let var = (sum_sq / nf - mean * mean) * nf / (nf - 1.0);
    (mean, (var / nf).sqrt())
}

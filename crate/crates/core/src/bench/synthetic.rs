use std::collections::BTreeSet;
use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::{
    AffinityMatrix, Error, GroundTruth, InstanceMeta, MatchInstance, Permutation, PointSet, Result,
};

/// Largest rotation applied by [`gen_synthetic`], in radians.
pub const MAX_ROTATION: f64 = PI / 12.0;

/// Point-matching instance with a planted correspondence.
///
/// Model: `n_inliers` uniform points in the unit square plus `n_outliers`
/// uniform outliers. Data: a rigid motion of the inliers (rotation within
/// ±[`MAX_ROTATION`], translation in `[−1, 1]²`) with Gaussian noise, plus
/// fresh outliers inside the inliers' bounding box, all shuffled. Outliers
/// are "don't care" in the ground truth.
pub fn gen_synthetic(
    n_inliers: usize,
    n_outliers: usize,
    noise_sigma: f64,
    seed: u64,
) -> Result<MatchInstance> {
    if n_inliers < 3 {
        return Err(Error::TooFewInliers(n_inliers));
    }
    if !(noise_sigma.is_finite() && noise_sigma >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "noise sigma must be finite and nonnegative, got {noise_sigma}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit_point = |rng: &mut ChaCha8Rng| [rng.random::<f64>(), rng.random::<f64>()];

    let inliers: Vec<[f64; 2]> = (0..n_inliers).map(|_| unit_point(&mut rng)).collect();
    let rotation = rng.random_range(-MAX_ROTATION..=MAX_ROTATION);
    let translation = [rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)];
    let (sin, cos) = rotation.sin_cos();
    let noise = Normal::new(0.0, noise_sigma).expect("sigma validated above");

    let mut data: Vec<[f64; 2]> = inliers
        .iter()
        .map(|&[x, y]| [cos * x - sin * y + translation[0], sin * x + cos * y + translation[1]])
        .collect();
    if noise_sigma > 0.0 {
        for p in &mut data {
            p[0] += noise.sample(&mut rng);
            p[1] += noise.sample(&mut rng);
        }
    }

    let mut model = inliers;
    model.extend((0..n_outliers).map(|_| unit_point(&mut rng)));

    let (lo, hi) = data.iter().fold(
        ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]),
        |(lo, hi), p| ([lo[0].min(p[0]), lo[1].min(p[1])], [hi[0].max(p[0]), hi[1].max(p[1])]),
    );
    for _ in 0..n_outliers {
        data.push([
            lo[0] + rng.random::<f64>() * (hi[0] - lo[0]),
            lo[1] + rng.random::<f64>() * (hi[1] - lo[1]),
        ]);
    }

    // position[k] = where original data point k ends up after shuffling
    let mut position: Vec<usize> = (0..data.len()).collect();
    position.shuffle(&mut rng);
    let mut shuffled = vec![[0.0; 2]; data.len()];
    for (k, &pos) in position.iter().enumerate() {
        shuffled[pos] = data[k];
    }

    let truth = (0..model.len())
        .map(|i| (i < n_inliers).then(|| position[i]))
        .collect();
    let inst = MatchInstance::new(
        PointSet::new(model)?,
        PointSet::new(shuffled)?,
        Some(GroundTruth::new(truth)?),
    )?;
    Ok(inst.with_meta(InstanceMeta {
        seed,
        n_inliers,
        n_outliers,
        noise_sigma,
        rotation,
        translation,
    }))
}

/// Regenerates an instance from its metadata.
pub fn regenerate(meta: &InstanceMeta) -> Result<MatchInstance> {
    gen_synthetic(meta.n_inliers, meta.n_outliers, meta.noise_sigma, meta.seed)
}

/// An affinity matrix whose global optimum is known by construction.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub w: AffinityMatrix,
    pub truth: Permutation,
    pub model_edges: Vec<(usize, usize)>,
}

/// Default weight ceiling for inconsistent edge pairs in planted instances.
pub const PLANTED_BACKGROUND: f64 = 0.5;

fn random_edges(n: usize, density: f64, rng: &mut ChaCha8Rng) -> BTreeSet<(usize, usize)> {
    let mut edges = BTreeSet::new();
    for i in 0..n {
        for k in (i + 1)..n {
            if rng.random::<f64>() < density {
                edges.insert((i, k));
            }
        }
    }
    edges
}

/// Noiseless planted problem.
///
/// A random model graph (edge probability `density`, isolated nodes joined
/// to a random partner) is mapped through a random permutation to form the
/// data graph. Edge pairs consistent with the permutation get weight 1;
/// every other edge pair gets `background · u`, `u ~ U[0, 1)`, with
/// `background < 1`. The planted permutation is then the unique IQP optimum.
pub fn planted_instance(n: usize, density: f64, background: f64, seed: u64) -> Result<PlantedInstance> {
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    if !(0.0..1.0).contains(&background) {
        return Err(Error::InvalidConfig(format!(
            "background weight must lie in [0, 1), got {background}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = random_edges(n, density, &mut rng);
    for i in 0..n {
        if !edges.iter().any(|&(a, b)| a == i || b == i) {
            let mut k = rng.random_range(0..n - 1);
            if k >= i {
                k += 1;
            }
            edges.insert((i.min(k), i.max(k)));
        }
    }
    let mut map: Vec<usize> = (0..n).collect();
    map.shuffle(&mut rng);
    let truth = Permutation::new(map)?;
    let pi = truth.map();

    let data_edges: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(i, k)| (pi[i].min(pi[k]), pi[i].max(pi[k])))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let mut builder = AffinityMatrix::builder(n);
    for &(i, k) in &edges {
        for &(j, l) in &data_edges {
            for (a, b) in [(j, l), (l, j)] {
                let w = if pi[i] == a && pi[k] == b {
                    1.0
                } else {
                    background * rng.random::<f64>()
                };
                builder.set_pair((i, a), (k, b), w)?;
            }
        }
    }
    Ok(PlantedInstance {
        w: builder.build()?,
        truth,
        model_edges: edges.into_iter().collect(),
    })
}

/// Random graph-structured affinity: independent model and data graphs with
/// edge probability `density` (each with at least one edge), and an
/// independent `U(0, 1]` weight for every edge pair and orientation.
pub fn random_instance(n: usize, density: f64, seed: u64) -> Result<AffinityMatrix> {
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = |rng: &mut ChaCha8Rng| loop {
        let edges = random_edges(n, density, rng);
        if !edges.is_empty() {
            break edges;
        }
    };
    let model = graph(&mut rng);
    let data = graph(&mut rng);

    let mut builder = AffinityMatrix::builder(n);
    for &(i, k) in &model {
        for &(j, l) in &data {
            builder.set_pair((i, j), (k, l), 1.0 - rng.random::<f64>())?;
            builder.set_pair((i, l), (k, j), 1.0 - rng.random::<f64>())?;
        }
    }
    builder.build()
}

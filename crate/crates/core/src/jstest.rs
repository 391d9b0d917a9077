//! Bootstrap test of whether two sets of graphs share one density.
//!
//! Each graph contributes one density (of its spectrum or of its degrees) on
//! a grid shared by both sets. The statistic is the JS divergence between the
//! two set averages; its null distribution comes from redrawing both sets,
//! with replacement, from the pooled densities.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{estimate_density, shared_grid, DensityOptions, Grid, SpectralDensity};
use crate::divergence::js_on_grid;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{derive_seed, rng_from_seed};

pub const DEFAULT_BOOTSTRAP_REPLICATES: usize = 1000;
pub const MIN_BOOTSTRAP_REPLICATES: usize = 100;

/// Per-graph densities on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSet {
    pub label: String,
    densities: Vec<SpectralDensity>,
}

impl GraphSet {
    pub fn new(label: impl Into<String>, densities: Vec<SpectralDensity>) -> Result<GraphSet> {
        let first = densities
            .first()
            .ok_or_else(|| Error::domain("a graph set needs at least one density"))?;
        for d in &densities[1..] {
            first.require_same_grid(d)?;
        }
        Ok(GraphSet {
            label: label.into(),
            densities,
        })
    }

    /// One density per sample (eigenvalues or degrees), all on `grid`.
    pub fn from_samples<S: AsRef<[f64]>>(
        label: impl Into<String>,
        samples: &[S],
        grid: &Grid,
        options: &DensityOptions,
    ) -> Result<GraphSet> {
        let densities = samples
            .iter()
            .map(|s| estimate_density(s.as_ref(), Some(grid), options))
            .collect::<Result<Vec<_>>>()?;
        Self::new(label, densities)
    }

    pub fn densities(&self) -> &[SpectralDensity] {
        &self.densities
    }

    pub fn len(&self) -> usize {
        self.densities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.densities.is_empty()
    }

    pub fn grid(&self) -> &Grid {
        self.densities[0].grid()
    }
}

/// Node degrees as a real sample.
pub fn degree_sample(g: &Graph) -> Vec<f64> {
    g.degrees().into_iter().map(|d| d as f64).collect()
}

/// Density of the degree sequence, built exactly like a spectral density.
pub fn degree_density(g: &Graph, grid: Option<&Grid>, options: &DensityOptions) -> Result<SpectralDensity> {
    estimate_density(&degree_sample(g), grid, options)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub min: f64,
    pub q05: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub q95: f64,
    pub q99: f64,
    pub max: f64,
}

impl BootstrapSummary {
    fn of(sorted: &[f64]) -> BootstrapSummary {
        let q = |p: f64| {
            let pos = p * (sorted.len() - 1) as f64;
            let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
            sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
        };
        BootstrapSummary {
            min: sorted[0],
            q05: q(0.05),
            q25: q(0.25),
            median: q(0.5),
            q75: q(0.75),
            q95: q(0.95),
            q99: q(0.99),
            max: sorted[sorted.len() - 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsTestResult {
    pub observed_js: f64,
    pub p_value: f64,
    pub replicates: usize,
    pub quantiles: BootstrapSummary,
    /// Bootstrap statistics in replicate order.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sample: Option<Vec<f64>>,
}

/// `(1 + #{null >= observed}) / (1 + B)`.
pub fn bootstrap_p_value(observed: f64, null: &[f64]) -> f64 {
    let exceed = null.iter().filter(|&&x| x >= observed).count();
    (1 + exceed) as f64 / (1 + null.len()) as f64
}

/// Mean of the selected rows, rescaled to unit integral.
fn mean_of(grid: &Grid, rows: &[&[f64]], picks: impl Iterator<Item = usize>, out: &mut [f64]) {
    out.fill(0.0);
    let mut count = 0usize;
    for i in picks {
        for (acc, v) in out.iter_mut().zip(rows[i]) {
            *acc += v;
        }
        count += 1;
    }
    let mass = grid.integrate(out);
    let scale = if mass > 0.0 { 1.0 / mass } else { 1.0 / count as f64 };
    for v in out.iter_mut() {
        *v *= scale;
    }
}

/// Bootstrap JS test between two sets on one grid. Replicate `r` draws from
/// a generator seeded with `derive_seed(seed, r)`, so the result does not
/// depend on the thread count.
pub fn js_test(
    set1: &GraphSet,
    set2: &GraphSet,
    replicates: usize,
    seed: u64,
    keep_sample: bool,
) -> Result<JsTestResult> {
    if replicates < MIN_BOOTSTRAP_REPLICATES {
        return Err(Error::domain(format!(
            "need at least {MIN_BOOTSTRAP_REPLICATES} bootstrap replicates, got {replicates}"
        )));
    }
    set1.densities[0].require_same_grid(&set2.densities[0])?;
    let grid = *set1.grid();
    let pool: Vec<&[f64]> = set1
        .densities
        .iter()
        .chain(&set2.densities)
        .map(|d| d.values())
        .collect();
    let (n1, n2) = (set1.len(), set2.len());

    let mut mean1 = vec![0.0; grid.len()];
    let mut mean2 = vec![0.0; grid.len()];
    mean_of(&grid, &pool, 0..n1, &mut mean1);
    mean_of(&grid, &pool, n1..n1 + n2, &mut mean2);
    let observed_js = js_on_grid(&grid, &mean1, &mean2);

    let null: Vec<f64> = (0..replicates as u64)
        .into_par_iter()
        .map_init(
            || (vec![0.0; grid.len()], vec![0.0; grid.len()]),
            |(a, b), r| {
                let mut rng = rng_from_seed(derive_seed(seed, r));
                let total = pool.len();
                let first: Vec<usize> = (0..n1).map(|_| rng.random_range(0..total)).collect();
                let second: Vec<usize> = (0..n2).map(|_| rng.random_range(0..total)).collect();
                mean_of(&grid, &pool, first.into_iter(), a);
                mean_of(&grid, &pool, second.into_iter(), b);
                js_on_grid(&grid, a, b)
            },
        )
        .collect();

    let p_value = bootstrap_p_value(observed_js, &null);
    let mut sorted = null.clone();
    sorted.sort_by(f64::total_cmp);
    Ok(JsTestResult {
        observed_js,
        p_value,
        replicates,
        quantiles: BootstrapSummary::of(&sorted),
        sample: keep_sample.then_some(null),
    })
}

/// Builds both sets on a grid covering every sample, then runs [`js_test`].
pub fn js_test_samples<S: AsRef<[f64]>>(
    samples1: &[S],
    samples2: &[S],
    options: &DensityOptions,
    replicates: usize,
    seed: u64,
) -> Result<JsTestResult> {
    let all: Vec<&[f64]> = samples1.iter().chain(samples2).map(|s| s.as_ref()).collect();
    let grid = shared_grid(&all, options)?;
    let set1 = GraphSet::from_samples("set1", samples1, &grid, options)?;
    let set2 = GraphSet::from_samples("set2", samples2, &grid, options)?;
    js_test(&set1, &set2, replicates, seed, false)
}

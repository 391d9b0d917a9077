//! Minimum-KL parameter estimation by grid search.
//!
//! A family's density at parameter `theta` is not known in closed form, so it
//! is replaced by a Monte Carlo reference: the average density of
//! `replicates` graphs drawn from the model. References are the expensive
//! part and are cached in memory and optionally on disk.

use std::collections::HashMap;
use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{average_estimate, covering_grid, natural_span, DensityOptions, Grid, SpectralDensity};
use crate::divergence::{extended_f64, kl_divergence};
use crate::error::{Error, Result};
use crate::graph::{Family, ModelSpec};
use crate::rng::{derive_seed, derive_seed_for, sha256_hex};
use crate::spectrum::Spectrum;

pub const DEFAULT_REPLICATES: usize = 50;

/// Candidate parameter values for one family with fixed structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterGrid {
    pub family: Family,
    pub n: usize,
    values: Vec<f64>,
    pub replicates: usize,
}

impl ParameterGrid {
    pub fn new(family: Family, n: usize, values: Vec<f64>, replicates: usize) -> Result<ParameterGrid> {
        if values.is_empty() {
            return Err(Error::domain("parameter grid is empty"));
        }
        if replicates == 0 {
            return Err(Error::domain("need at least one Monte Carlo replicate"));
        }
        if values.windows(2).any(|w| w[0] >= w[1] || w[0].is_nan() || w[1].is_nan()) {
            return Err(Error::domain("parameter grid must be strictly increasing"));
        }
        for &theta in &values {
            ModelSpec::new(family, n, theta)?;
        }
        Ok(ParameterGrid {
            family,
            n,
            values,
            replicates,
        })
    }

    /// `lo, lo + step, ...` up to `hi` (inclusive, within rounding).
    pub fn linspace(
        family: Family,
        n: usize,
        lo: f64,
        hi: f64,
        step: f64,
        replicates: usize,
    ) -> Result<ParameterGrid> {
        Self::new(family, n, steps(lo, hi, step)?, replicates)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn specs(&self) -> impl Iterator<Item = ModelSpec> + '_ {
        self.values.iter().map(move |&theta| ModelSpec {
            family: self.family,
            n: self.n,
            theta,
        })
    }
}

/// Evenly spaced values, rounded to ten decimals so that `0.1 + 2 * 0.1`
/// prints and hashes as `0.3`.
pub fn steps(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && lo.is_finite() && hi.is_finite() && hi >= lo) {
        return Err(Error::domain(format!("invalid range {lo}..={hi} step {step}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((lo + i as f64 * step) * 1e10).round() / 1e10)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub theta: f64,
    #[serde(with = "extended_f64")]
    pub kl: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    #[serde(flatten)]
    pub family: Family,
    pub n: usize,
    pub theta_hat: f64,
    #[serde(with = "extended_f64")]
    pub kl: f64,
    pub trace: Vec<TracePoint>,
    /// Cache key of the reference density at `theta_hat`.
    pub reference_cache_key: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CacheRecord {
    spec: ModelSpec,
    replicates: usize,
    seed: u64,
    options: DensityOptions,
    grid: Grid,
    bandwidth: f64,
}

/// Builds and caches reference densities and fits parameters against them.
///
/// Safe to share across threads. Two threads asking for the same missing
/// reference may both compute it; the results are identical.
#[derive(Debug)]
pub struct Estimator {
    options: DensityOptions,
    cache_dir: Option<PathBuf>,
    spectra: Mutex<HashMap<String, Arc<Vec<Spectrum>>>>,
    densities: Mutex<HashMap<String, Arc<SpectralDensity>>>,
}

impl Estimator {
    pub fn new(options: DensityOptions) -> Estimator {
        Estimator {
            options,
            cache_dir: None,
            spectra: Mutex::new(HashMap::new()),
            densities: Mutex::new(HashMap::new()),
        }
    }

    /// Persists reference densities under `dir` as CSV plus a JSON sidecar.
    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Result<Estimator> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        self.cache_dir = Some(dir);
        Ok(self)
    }

    pub fn options(&self) -> &DensityOptions {
        &self.options
    }

    /// Drops in-memory spectra; densities stay cached.
    pub fn clear_spectra(&self) {
        self.spectra.lock().unwrap().clear();
    }

    /// Drops in-memory reference densities. The disk cache is untouched.
    pub fn clear_densities(&self) {
        self.densities.lock().unwrap().clear();
    }

    /// Spectra of `replicates` graphs drawn from `spec`. Replicate `i` uses a
    /// seed derived from `seed`, the model's canonical key and `i`.
    pub fn reference_spectra(&self, spec: &ModelSpec, replicates: usize, seed: u64) -> Result<Arc<Vec<Spectrum>>> {
        if replicates == 0 {
            return Err(Error::domain("need at least one Monte Carlo replicate"));
        }
        spec.validate()?;
        let key = format!("{};reps={replicates};seed={seed}", spec.canonical_key());
        if let Some(hit) = self.spectra.lock().unwrap().get(&key) {
            return Ok(Arc::clone(hit));
        }
        let base = derive_seed_for(seed, &spec.canonical_key());
        let spectra = (0..replicates as u64)
            .into_par_iter()
            .map(|i| spec.generate(derive_seed(base, i)).and_then(|g| Spectrum::of(&g)))
            .collect::<Result<Vec<_>>>()?;
        let spectra = Arc::new(spectra);
        self.spectra.lock().unwrap().insert(key, Arc::clone(&spectra));
        Ok(spectra)
    }

    /// Union of the natural density spans of a reference's replicates.
    pub fn reference_span(&self, spec: &ModelSpec, replicates: usize, seed: u64) -> Result<(f64, f64)> {
        let spectra = self.reference_spectra(spec, replicates, seed)?;
        spans_union(&spectra, &self.options)
    }

    pub fn reference_cache_key(&self, spec: &ModelSpec, replicates: usize, seed: u64, grid: &Grid) -> String {
        let text = format!(
            "{};reps={replicates};seed={seed};{};{}",
            spec.canonical_key(),
            self.options.canonical_key(),
            grid.canonical_key()
        );
        sha256_hex(&text)
    }

    /// Average of the replicate densities, each estimated on `grid`.
    pub fn reference_density(
        &self,
        spec: &ModelSpec,
        replicates: usize,
        seed: u64,
        grid: &Grid,
    ) -> Result<Arc<SpectralDensity>> {
        let key = self.reference_cache_key(spec, replicates, seed, grid);
        if let Some(hit) = self.densities.lock().unwrap().get(&key) {
            return Ok(Arc::clone(hit));
        }
        let record = CacheRecord {
            spec: *spec,
            replicates,
            seed,
            options: self.options,
            grid: *grid,
            bandwidth: 0.0,
        };
        let loaded = match &self.cache_dir {
            Some(dir) => load_cached(dir, &key, &record)?,
            None => None,
        };
        let density = match loaded {
            Some(d) => {
                log::debug!("reference {} loaded from disk cache", spec.canonical_key());
                d
            }
            None => {
                let spectra = self.reference_spectra(spec, replicates, seed)?;
                let d = average_estimate(&spectra, grid, &self.options)?;
                if let Some(dir) = &self.cache_dir {
                    store_cached(dir, &key, &CacheRecord { bandwidth: d.bandwidth(), ..record }, &d)?;
                }
                d
            }
        };
        let density = Arc::new(density);
        self.densities.lock().unwrap().insert(key, Arc::clone(&density));
        Ok(density)
    }

    /// Grid covering the observed spectra and every candidate reference.
    pub fn comparison_grid(&self, observed: &[Spectrum], candidates: &[&ParameterGrid], seed: u64) -> Result<Grid> {
        let mut spans = vec![spans_union(observed, &self.options)?];
        for params in candidates {
            let specs: Vec<ModelSpec> = params.specs().collect();
            let candidate_spans = specs
                .par_iter()
                .map(|spec| self.reference_span(spec, params.replicates, seed))
                .collect::<Result<Vec<_>>>()?;
            spans.extend(candidate_spans);
        }
        covering_grid(spans, self.options.grid_points)
    }

    /// `argmin_theta KL(observed || reference(theta))` over the grid, using
    /// the observed density's abscissae for every reference.
    pub fn fit(&self, observed: &SpectralDensity, params: &ParameterGrid, seed: u64) -> Result<FitResult> {
        let grid = *observed.grid();
        let specs: Vec<ModelSpec> = params.specs().collect();
        let kls = specs
            .par_iter()
            .map(|spec| {
                let reference = self.reference_density(spec, params.replicates, seed, &grid)?;
                kl_divergence(observed, &reference)
            })
            .collect::<Result<Vec<f64>>>()?;
        let best = argmin_first(&kls).ok_or_else(|| {
            Error::NoFeasibleModel(format!(
                "every {} candidate has infinite divergence from the observation",
                params.family
            ))
        })?;
        Ok(FitResult {
            family: params.family,
            n: params.n,
            theta_hat: specs[best].theta,
            kl: kls[best],
            trace: specs
                .iter()
                .zip(&kls)
                .map(|(s, &kl)| TracePoint { theta: s.theta, kl })
                .collect(),
            reference_cache_key: self.reference_cache_key(&specs[best], params.replicates, seed, &grid),
        })
    }

    /// Fits graphs given by their spectra: builds the comparison grid,
    /// estimates their averaged density on it and calls [`Self::fit`].
    pub fn fit_spectra(&self, observed: &[Spectrum], params: &ParameterGrid, seed: u64) -> Result<FitResult> {
        let grid = self.comparison_grid(observed, &[params], seed)?;
        let density = average_estimate(observed, &grid, &self.options)?;
        self.fit(&density, params, seed)
    }
}

/// Index of the first finite minimum.
pub(crate) fn argmin_first(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if v.is_finite() && best.is_none_or(|b| v < values[b]) {
            best = Some(i);
        }
    }
    best
}

fn spans_union(spectra: &[Spectrum], options: &DensityOptions) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in spectra {
        let (a, b) = natural_span(s.values(), options)?;
        lo = lo.min(a);
        hi = hi.max(b);
    }
    if !lo.is_finite() {
        return Err(Error::DegenerateSample("no spectra".into()));
    }
    Ok((lo, hi))
}

fn load_cached(dir: &Path, key: &str, expected: &CacheRecord) -> Result<Option<SpectralDensity>> {
    let meta_path = dir.join(format!("{key}.json"));
    let csv_path = dir.join(format!("{key}.csv"));
    let text = match fs::read_to_string(&meta_path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(Error::io(&meta_path, e)),
    };
    let record: CacheRecord = serde_json::from_str(&text).map_err(|e| Error::Cache {
        path: meta_path.clone(),
        message: e.to_string(),
    })?;
    if (CacheRecord { bandwidth: 0.0, ..record.clone() }) != *expected {
        return Err(Error::Cache {
            path: meta_path,
            message: "sidecar does not match the requested reference".into(),
        });
    }
    let file = fs::File::open(&csv_path).map_err(|e| Error::io(&csv_path, e))?;
    let density = SpectralDensity::read_csv(BufReader::new(file), record.grid, record.bandwidth)
        .map_err(|e| Error::Cache {
            path: csv_path,
            message: e.to_string(),
        })?;
    Ok(Some(density))
}

fn store_cached(dir: &Path, key: &str, record: &CacheRecord, density: &SpectralDensity) -> Result<()> {
    // the sidecar is written last, so its presence implies a complete CSV
    let csv_path = dir.join(format!("{key}.csv"));
    write_atomic(dir, &csv_path, |w| density.write_csv(w))?;
    let meta_path = dir.join(format!("{key}.json"));
    write_atomic(dir, &meta_path, |w| {
        serde_json::to_writer_pretty(&mut *w, record).map_err(std::io::Error::from)?;
        writeln!(w)?;
        Ok(())
    })
}

fn write_atomic<F>(dir: &Path, path: &Path, fill: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<&mut fs::File>) -> Result<()>,
{
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    {
        let mut w = BufWriter::new(tmp.as_file_mut());
        fill(&mut w)?;
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

//! Simulation studies: entropy curves, estimator accuracy, model-selection
//! accuracy, power of the two-sample test and its null calibration.
//!
//! Every repetition draws from a seed derived from the master seed and a
//! label naming its role, and results are collected in repetition order, so
//! output does not depend on the number of worker threads.

use rayon::prelude::*;
use serde::Serialize;

use graphspectra::density::{estimate_density, shared_grid, DensityOptions};
use graphspectra::divergence::{er_entropy_theoretical, spectral_entropy};
use graphspectra::estimation::{Estimator, ParameterGrid};
use graphspectra::graph::{Family, FamilyKind, Graph, ModelSpec};
use graphspectra::jstest::{degree_sample, js_test_samples};
use graphspectra::rng::{derive_seed, derive_seed_for};
use graphspectra::selection::{classify_network, select_model, CandidateConfig};
use graphspectra::spectrum::Spectrum;
use graphspectra::{Error, Result};

use crate::roc::{auc, roc_curve, RocPoint};

/// `count` graphs from `spec`, the `i`-th seeded by `(seed, label, i)`.
pub fn draw(spec: &ModelSpec, count: usize, seed: u64, label: &str) -> Result<Vec<Graph>> {
    let base = derive_seed_for(seed, &format!("{label};{}", spec.canonical_key()));
    (0..count as u64)
        .into_par_iter()
        .map(|i| spec.generate(derive_seed(base, i)))
        .collect()
}

fn spectra_of(graphs: &[Graph]) -> Result<Vec<Spectrum>> {
    graphs.par_iter().map(Spectrum::of).collect()
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyRow {
    pub theta: f64,
    pub mean: f64,
    pub sd: f64,
    /// Closed form, for Erdos-Renyi with `0 < p < 1` only.
    pub theoretical: Option<f64>,
}

/// Mean spectral entropy of `reps` graphs at each parameter value.
pub fn entropy_curve(
    base: &ModelSpec,
    thetas: &[f64],
    reps: usize,
    seed: u64,
    options: &DensityOptions,
) -> Result<Vec<EntropyRow>> {
    thetas
        .iter()
        .map(|&theta| {
            let spec = base.with_theta(theta)?;
            let graphs = draw(&spec, reps, seed, "entropy")?;
            let entropies = graphs
                .par_iter()
                .map(|g| {
                    let s = Spectrum::of(g)?;
                    Ok(spectral_entropy(&estimate_density(s.values(), None, options)?))
                })
                .collect::<Result<Vec<f64>>>()?;
            let (mean, sd) = mean_sd(&entropies);
            let theoretical = match spec.family {
                Family::ErdosRenyi => er_entropy_theoretical(theta).ok(),
                _ => None,
            };
            Ok(EntropyRow {
                theta,
                mean,
                sd,
                theoretical,
            })
        })
        .collect()
}

/// One estimator-accuracy setting: graphs drawn from `truth` and fitted over
/// `candidates`.
#[derive(Debug, Clone)]
pub struct EstimateCase {
    pub truth: ModelSpec,
    pub candidates: ParameterGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateRow {
    pub family: Family,
    pub n: usize,
    pub truth: f64,
    pub mean: f64,
    pub sd: f64,
    pub estimates: Vec<f64>,
}

/// The estimator-accuracy grid: each family at its reference parameter, over
/// the given sizes. Structure is `m1 = n0 = 1` and `k = 2` unless given.
pub fn estimate_cases(sizes: &[usize], m1: usize, k: usize, mc_reps: usize) -> Result<Vec<EstimateCase>> {
    let mut cases = Vec::new();
    for &n in sizes {
        let er = ModelSpec::erdos_renyi(n, 0.5)?;
        let sf = ModelSpec::scale_free(n, 1.5, m1, m1)?;
        let sw = ModelSpec::small_world(n, k, 0.3)?;
        cases.push(EstimateCase {
            truth: er,
            candidates: ParameterGrid::linspace(er.family, n, 0.40, 0.60, 0.01, mc_reps)?,
        });
        cases.push(EstimateCase {
            truth: sf,
            candidates: ParameterGrid::linspace(sf.family, n, 1.0, 2.0, 0.05, mc_reps)?,
        });
        cases.push(EstimateCase {
            truth: sw,
            candidates: ParameterGrid::linspace(sw.family, n, 0.0, 0.6, 0.01, mc_reps)?,
        });
    }
    Ok(cases)
}

/// Fits `reps` graphs per case; every fit of a case shares one grid.
pub fn estimate_table(estimator: &Estimator, cases: &[EstimateCase], reps: usize, seed: u64) -> Result<Vec<EstimateRow>> {
    let mut rows = Vec::with_capacity(cases.len());
    for case in cases {
        log::info!("estimating {} at n = {}", case.truth.family, case.truth.n);
        let observed = spectra_of(&draw(&case.truth, reps, seed, "estimate")?)?;
        let grid = estimator.comparison_grid(&observed, &[&case.candidates], seed)?;
        let estimates = observed
            .par_iter()
            .map(|s| {
                let d = estimate_density(s.values(), Some(&grid), estimator.options())?;
                Ok(estimator.fit(&d, &case.candidates, seed)?.theta_hat)
            })
            .collect::<Result<Vec<f64>>>()?;
        estimator.clear_densities();
        let (mean, sd) = mean_sd(&estimates);
        rows.push(EstimateRow {
            family: case.truth.family,
            n: case.truth.n,
            truth: case.truth.theta,
            mean,
            sd,
            estimates,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccuracyRow {
    pub truth: Family,
    pub n: usize,
    pub reps: usize,
    /// How often each family was chosen, in [`FamilyKind::ALL`] order.
    pub chosen: [usize; 3],
    /// Repetitions where no family had finite divergence.
    pub infeasible: usize,
}

impl AccuracyRow {
    pub fn proportion(&self, kind: FamilyKind) -> f64 {
        let i = FamilyKind::ALL.iter().position(|&k| k == kind).unwrap();
        self.chosen[i] as f64 / self.reps as f64
    }

    pub fn accuracy(&self) -> f64 {
        self.proportion(self.truth.kind())
    }
}

fn tally(truth: Family, n: usize, outcomes: Vec<Result<FamilyKind>>) -> Result<AccuracyRow> {
    let mut row = AccuracyRow {
        truth,
        n,
        reps: outcomes.len(),
        chosen: [0; 3],
        infeasible: 0,
    };
    for outcome in outcomes {
        match outcome {
            Ok(kind) => row.chosen[FamilyKind::ALL.iter().position(|&k| k == kind).unwrap()] += 1,
            Err(Error::NoFeasibleModel(_)) => row.infeasible += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(row)
}

/// The selection-accuracy design at size `n`: true models and the families
/// searched, with structure held at the generating values.
pub fn selection_design(n: usize, m1: usize, k: usize, mc_reps: usize) -> Result<(Vec<ModelSpec>, Vec<ParameterGrid>)> {
    let truths = vec![
        ModelSpec::erdos_renyi(n, 0.3)?,
        ModelSpec::scale_free(n, 1.0, m1, m1)?,
        ModelSpec::small_world(n, k, 0.3)?,
    ];
    let candidates = vec![
        ParameterGrid::linspace(Family::ErdosRenyi, n, 0.01, 0.99, 0.01, mc_reps)?,
        ParameterGrid::linspace(Family::ScaleFree { m1, n0: m1 }, n, 0.0, 2.5, 0.05, mc_reps)?,
        ParameterGrid::linspace(Family::SmallWorld { k }, n, 0.0, 1.0, 0.01, mc_reps)?,
    ];
    Ok((truths, candidates))
}

/// Fraction of `reps` graphs from each true model assigned to each family.
/// All observations and references share one grid.
pub fn selection_accuracy(
    estimator: &Estimator,
    truths: &[ModelSpec],
    candidates: &[ParameterGrid],
    reps: usize,
    seed: u64,
) -> Result<Vec<AccuracyRow>> {
    let observed = truths
        .iter()
        .map(|t| spectra_of(&draw(t, reps, seed, "selection")?))
        .collect::<Result<Vec<_>>>()?;
    let pooled: Vec<Spectrum> = observed.iter().flatten().cloned().collect();
    let refs: Vec<&ParameterGrid> = candidates.iter().collect();
    let grid = estimator.comparison_grid(&pooled, &refs, seed)?;
    let mut rows = Vec::new();
    for (truth, spectra) in truths.iter().zip(&observed) {
        log::info!("selection with true model {} at n = {}", truth.family, truth.n);
        let outcomes = spectra
            .par_iter()
            .map(|s| {
                let d = estimate_density(s.values(), Some(&grid), estimator.options())?;
                Ok(select_model(estimator, &d, candidates, seed)?.chosen)
            })
            .collect();
        rows.push(tally(truth.family, truth.n, outcomes)?);
    }
    estimator.clear_densities();
    Ok(rows)
}

/// Like [`selection_accuracy`], but every observation is classified with
/// candidate structure matched to its own edge count.
pub fn matched_selection_accuracy(
    estimator: &Estimator,
    truths: &[ModelSpec],
    config: &CandidateConfig,
    reps: usize,
    seed: u64,
) -> Result<Vec<AccuracyRow>> {
    let mut rows = Vec::new();
    for truth in truths {
        let graphs = draw(truth, reps, seed, "selection")?;
        let mut outcomes = Vec::with_capacity(reps);
        for g in &graphs {
            outcomes.push(classify_network(estimator, g, config, seed).map(|r| r.chosen));
            estimator.clear_densities();
        }
        rows.push(tally(truth.family, truth.n, outcomes)?);
    }
    Ok(rows)
}

/// A pair of models compared by the two-sample test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerSetting {
    pub null: ModelSpec,
    pub alternative: ModelSpec,
}

impl PowerSetting {
    /// The three default pairs at `n` nodes: ER 0.50 vs 0.52, scale-free
    /// 1.0 vs 1.1 and small-world 0.30 vs 0.31.
    pub fn defaults(n: usize, m1: usize, k: usize) -> Result<Vec<PowerSetting>> {
        let pair = |spec: ModelSpec, alt: f64| -> Result<PowerSetting> {
            Ok(PowerSetting {
                null: spec,
                alternative: spec.with_theta(alt)?,
            })
        };
        Ok(vec![
            pair(ModelSpec::erdos_renyi(n, 0.50)?, 0.52)?,
            pair(ModelSpec::scale_free(n, 1.0, m1, m1)?, 1.1)?,
            pair(ModelSpec::small_world(n, k, 0.30)?, 0.31)?,
        ])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestVariant {
    pub null_p_values: Vec<f64>,
    pub alternative_p_values: Vec<f64>,
    pub auc: f64,
    pub curve: Vec<RocPoint>,
}

impl TestVariant {
    fn new(null_p_values: Vec<f64>, alternative_p_values: Vec<f64>) -> TestVariant {
        TestVariant {
            auc: auc(&null_p_values, &alternative_p_values),
            curve: roc_curve(&null_p_values, &alternative_p_values),
            null_p_values,
            alternative_p_values,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerResult {
    pub setting: PowerSetting,
    pub spectrum: TestVariant,
    pub degree: TestVariant,
}

/// Spectrum and degree p-values of one two-set experiment.
fn two_set_p_values(
    first: &ModelSpec,
    second: &ModelSpec,
    per_set: usize,
    bootstrap: usize,
    seed: u64,
    options: &DensityOptions,
) -> Result<(f64, f64)> {
    let a = draw(first, per_set, seed, "set1")?;
    let b = draw(second, per_set, seed, "set2")?;
    let spectra = |gs: &[Graph]| -> Result<Vec<Vec<f64>>> {
        Ok(spectra_of(gs)?.into_iter().map(|s| s.values().to_vec()).collect())
    };
    let degrees = |gs: &[Graph]| gs.iter().map(degree_sample).collect::<Vec<_>>();
    let p_spec = js_test_samples(&spectra(&a)?, &spectra(&b)?, options, bootstrap, derive_seed(seed, 0))?.p_value;
    let p_deg = js_test_samples(&degrees(&a), &degrees(&b), options, bootstrap, derive_seed(seed, 1))?.p_value;
    Ok((p_spec, p_deg))
}

/// `experiments` tests with both sets from the null model and as many with
/// the second set from the alternative, each run on spectra and on degrees.
pub fn power_study(
    setting: &PowerSetting,
    experiments: usize,
    per_set: usize,
    bootstrap: usize,
    seed: u64,
    options: &DensityOptions,
) -> Result<PowerResult> {
    let run = |second: &ModelSpec, label: &str| -> Result<Vec<(f64, f64)>> {
        let base = derive_seed_for(seed, &format!("power/{label};{}", setting.null.canonical_key()));
        (0..experiments as u64)
            .into_par_iter()
            .map(|e| two_set_p_values(&setting.null, second, per_set, bootstrap, derive_seed(base, e), options))
            .collect()
    };
    let h0 = run(&setting.null, "h0")?;
    let h1 = run(&setting.alternative, "h1")?;
    let split = |v: &[(f64, f64)]| -> (Vec<f64>, Vec<f64>) { v.iter().copied().unzip() };
    let ((h0_spec, h0_deg), (h1_spec, h1_deg)) = (split(&h0), split(&h1));
    Ok(PowerResult {
        setting: *setting,
        spectrum: TestVariant::new(h0_spec, h1_spec),
        degree: TestVariant::new(h0_deg, h1_deg),
    })
}

/// Spectrum-test p-values of `experiments` same-model splits: `2 * per_set`
/// graphs from `spec`, halved into two sets.
pub fn null_p_values(
    spec: &ModelSpec,
    experiments: usize,
    per_set: usize,
    bootstrap: usize,
    seed: u64,
    options: &DensityOptions,
) -> Result<Vec<f64>> {
    let base = derive_seed_for(seed, &format!("null;{}", spec.canonical_key()));
    (0..experiments as u64)
        .into_par_iter()
        .map(|e| {
            let s = derive_seed(base, e);
            let samples: Vec<Vec<f64>> = spectra_of(&draw(spec, 2 * per_set, s, "pool")?)?
                .into_iter()
                .map(|x| x.values().to_vec())
                .collect();
            let (a, b) = samples.split_at(per_set);
            Ok(js_test_samples(a, b, options, bootstrap, s)?.p_value)
        })
        .collect()
}

/// Densities of several graphs on their shared grid, for the `density`
/// subcommand and friends.
pub fn shared_densities(samples: &[Vec<f64>], options: &DensityOptions) -> Result<Vec<graphspectra::density::SpectralDensity>> {
    let all: Vec<&[f64]> = samples.iter().map(|s| s.as_slice()).collect();
    let grid = shared_grid(&all, options)?;
    samples.iter().map(|s| estimate_density(s, Some(&grid), options)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_repetition_is_one_hot() {
        let est = Estimator::new(DensityOptions::default());
        let (truths, candidates) = selection_design(30, 1, 2, 3).unwrap();
        let rows = selection_accuracy(&est, &truths[2..], &candidates, 1, 5).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].chosen.iter().sum::<usize>() + rows[0].infeasible, 1);
    }

    #[test]
    fn entropy_curve_has_theory_for_er_only() {
        let opts = DensityOptions::default();
        let er = ModelSpec::erdos_renyi(40, 0.5).unwrap();
        let rows = entropy_curve(&er, &[0.3, 0.5], 3, 1, &opts).unwrap();
        assert!(rows.iter().all(|r| r.theoretical.is_some()));
        let sw = ModelSpec::small_world(40, 4, 0.1).unwrap();
        let rows = entropy_curve(&sw, &[0.1], 2, 1, &opts).unwrap();
        assert_eq!(rows[0].theoretical, None);
    }

    #[test]
    fn null_run_is_thread_independent() {
        let opts = DensityOptions::default();
        let spec = ModelSpec::erdos_renyi(20, 0.5).unwrap();
        let parallel = null_p_values(&spec, 3, 4, 100, 9, &opts).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = pool.install(|| null_p_values(&spec, 3, 4, 100, 9, &opts)).unwrap();
        assert_eq!(parallel, serial);
        assert_eq!(parallel.len(), 3);
    }

    #[test]
    fn mean_and_sd() {
        assert_eq!(mean_sd(&[1.0, 3.0]), (2.0, 2f64.sqrt()));
        assert_eq!(mean_sd(&[4.0]), (4.0, 0.0));
    }
}

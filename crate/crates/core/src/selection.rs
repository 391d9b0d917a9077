//! Choosing among graph families by penalized minimum KL.
//!
//! Each family is fitted with [`Estimator::fit`] and scored as
//! `2 KL + 2 dim(theta)`. The penalty is constant across the built-in
//! families but is still reported.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{estimate_density, SpectralDensity};
use crate::divergence::extended_f64;
use crate::error::{Error, Result};
use crate::estimation::{steps, Estimator, FitResult, ParameterGrid, DEFAULT_REPLICATES};
use crate::graph::{Family, FamilyKind, Graph};
use crate::spectrum::Spectrum;

/// How candidate grids are built for an observed graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateConfig {
    pub families: Vec<FamilyKind>,
    /// ER values span the matched density plus or minus this much.
    pub er_half_width: f64,
    pub er_step: f64,
    pub scale_free_range: (f64, f64),
    pub scale_free_step: f64,
    pub small_world_range: (f64, f64),
    pub small_world_step: f64,
    pub replicates: usize,
}

impl Default for CandidateConfig {
    fn default() -> Self {
        CandidateConfig {
            families: FamilyKind::ALL.to_vec(),
            er_half_width: 0.05,
            er_step: 0.01,
            scale_free_range: (0.0, 2.5),
            scale_free_step: 0.05,
            small_world_range: (0.0, 1.0),
            small_world_step: 0.01,
            replicates: DEFAULT_REPLICATES,
        }
    }
}

/// Structural constants matching a graph with `n` nodes and `m` edges, or
/// `None` when the family cannot be built at that size.
pub fn matched_family(kind: FamilyKind, n: usize, m: usize) -> Option<Family> {
    let per_node = m as f64 / n as f64;
    let family = match kind {
        FamilyKind::ErdosRenyi => Family::ErdosRenyi,
        FamilyKind::ScaleFree => {
            let m1 = (per_node.round() as usize).max(1);
            Family::ScaleFree { m1, n0: m1 }
        }
        FamilyKind::SmallWorld => {
            // nearest even number to 2m/n
            let largest = if (n - 1).is_multiple_of(2) { n - 1 } else { n.saturating_sub(2) };
            let k = (2 * per_node.round() as usize).clamp(2, largest.max(2));
            Family::SmallWorld { k }
        }
    };
    family.validate(n).ok().map(|_| family)
}

/// One parameter grid per configured family, matched to `n` and `m`.
/// Families that cannot be built at this size are left out.
pub fn matched_candidates(n: usize, m: usize, config: &CandidateConfig) -> Result<Vec<ParameterGrid>> {
    let mut grids = Vec::new();
    for &kind in &config.families {
        let Some(family) = matched_family(kind, n, m) else {
            log::warn!("no {kind} model with n = {n} and m = {m}; skipping the family");
            continue;
        };
        let values = match kind {
            FamilyKind::ErdosRenyi => {
                // centered on the exact edge density, so the middle candidate
                // matches the observed edge count in expectation
                let pairs = n as f64 * (n as f64 - 1.0) / 2.0;
                let center = if pairs > 0.0 { m as f64 / pairs } else { 0.0 };
                let half = (config.er_half_width / config.er_step + 1e-9).floor() as i64;
                (-half..=half)
                    .map(|j| center + j as f64 * config.er_step)
                    .filter(|p| (0.0..=1.0).contains(p))
                    .collect()
            }
            FamilyKind::ScaleFree => steps(
                config.scale_free_range.0,
                config.scale_free_range.1,
                config.scale_free_step,
            )?,
            FamilyKind::SmallWorld => steps(
                config.small_world_range.0,
                config.small_world_range.1,
                config.small_world_step,
            )?,
        };
        grids.push(ParameterGrid::new(family, n, values, config.replicates)?);
    }
    if grids.is_empty() {
        return Err(Error::domain(format!("no candidate family fits n = {n}, m = {m}")));
    }
    Ok(grids)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedModel {
    #[serde(flatten)]
    pub family: Family,
    /// `None` when every candidate of the family is infeasible.
    pub theta_hat: Option<f64>,
    #[serde(with = "extended_f64")]
    pub kl: f64,
    #[serde(with = "extended_f64")]
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub chosen: FamilyKind,
    /// Ascending by score; ties keep candidate order.
    pub ranked: Vec<RankedModel>,
    /// Per-family fits in candidate order; infeasible families are absent.
    #[serde(skip)]
    pub fits: Vec<FitResult>,
}

impl SelectionResult {
    pub fn kl_of(&self, kind: FamilyKind) -> Option<f64> {
        self.ranked.iter().find(|r| r.family.kind() == kind).map(|r| r.kl)
    }

    pub fn theta_of(&self, kind: FamilyKind) -> Option<f64> {
        self.ranked
            .iter()
            .find(|r| r.family.kind() == kind)
            .and_then(|r| r.theta_hat)
    }
}

pub fn score(kl: f64, dimension: usize) -> f64 {
    2.0 * kl + 2.0 * dimension as f64
}

/// Fits every candidate family to `observed` and ranks them by score.
pub fn select_model(
    estimator: &Estimator,
    observed: &SpectralDensity,
    candidates: &[ParameterGrid],
    seed: u64,
) -> Result<SelectionResult> {
    if candidates.is_empty() {
        return Err(Error::domain("no candidate families"));
    }
    let outcomes: Vec<Result<FitResult>> = candidates
        .par_iter()
        .map(|params| estimator.fit(observed, params, seed))
        .collect();
    let mut ranked = Vec::with_capacity(candidates.len());
    let mut fits = Vec::new();
    for (params, outcome) in candidates.iter().zip(outcomes) {
        let dim = params.family.kind().dimension();
        match outcome {
            Ok(fit) => {
                ranked.push(RankedModel {
                    family: fit.family,
                    theta_hat: Some(fit.theta_hat),
                    kl: fit.kl,
                    score: score(fit.kl, dim),
                });
                fits.push(fit);
            }
            Err(Error::NoFeasibleModel(_)) => ranked.push(RankedModel {
                family: params.family,
                theta_hat: None,
                kl: f64::INFINITY,
                score: f64::INFINITY,
            }),
            Err(e) => return Err(e),
        }
    }
    ranked.sort_by(|a, b| a.score.total_cmp(&b.score));
    if !ranked[0].score.is_finite() {
        return Err(Error::NoFeasibleModel(
            "every candidate family has infinite divergence from the observation".into(),
        ));
    }
    Ok(SelectionResult {
        chosen: ranked[0].family.kind(),
        ranked,
        fits,
    })
}

/// Spectrum, density on a grid shared with every candidate reference, and
/// model selection, with candidate structure matched to `g`.
pub fn classify_network(
    estimator: &Estimator,
    g: &Graph,
    config: &CandidateConfig,
    seed: u64,
) -> Result<SelectionResult> {
    let spectrum = Spectrum::of(g)?;
    let candidates = matched_candidates(g.node_count(), g.edge_count(), config)?;
    let refs: Vec<&ParameterGrid> = candidates.iter().collect();
    let grid = estimator.comparison_grid(std::slice::from_ref(&spectrum), &refs, seed)?;
    let observed = estimate_density(spectrum.values(), Some(&grid), estimator.options())?;
    select_model(estimator, &observed, &candidates, seed)
}

/// One row per network: the chosen family, then KL and estimate per family.
/// Infeasible or absent families leave their cells empty (KL `inf` when
/// fitted but infeasible).
pub fn write_selection_table<W: Write>(rows: &[(String, SelectionResult)], mut sink: W) -> Result<()> {
    write!(sink, "network,chosen")?;
    for kind in FamilyKind::ALL {
        write!(sink, ",kl_{}", kind.name().replace('-', "_"))?;
    }
    for kind in FamilyKind::ALL {
        write!(sink, ",theta_{}", kind.name().replace('-', "_"))?;
    }
    writeln!(sink)?;
    for (name, result) in rows {
        write!(sink, "{name},{}", result.chosen)?;
        for kind in FamilyKind::ALL {
            match result.kl_of(kind) {
                Some(kl) if kl.is_infinite() => write!(sink, ",inf")?,
                Some(kl) => write!(sink, ",{kl:?}")?,
                None => write!(sink, ",")?,
            }
        }
        for kind in FamilyKind::ALL {
            match result.theta_of(kind) {
                Some(t) => write!(sink, ",{t:?}")?,
                None => write!(sink, ",")?,
            }
        }
        writeln!(sink)?;
    }
    sink.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::DensityOptions;
    use crate::graph::ModelSpec;

    #[test]
    fn structure_matches_edge_count() {
        assert_eq!(matched_family(FamilyKind::ScaleFree, 120, 236), Some(Family::ScaleFree { m1: 2, n0: 2 }));
        assert_eq!(matched_family(FamilyKind::ScaleFree, 100, 20), Some(Family::ScaleFree { m1: 1, n0: 1 }));
        assert_eq!(matched_family(FamilyKind::SmallWorld, 120, 240), Some(Family::SmallWorld { k: 4 }));
        assert_eq!(matched_family(FamilyKind::SmallWorld, 500, 600), Some(Family::SmallWorld { k: 2 }));
        // 2m/n = 9 on a 10-node graph: nearest even is 8 or 10, clamped below n
        assert_eq!(matched_family(FamilyKind::SmallWorld, 10, 45), Some(Family::SmallWorld { k: 8 }));
        assert_eq!(matched_family(FamilyKind::SmallWorld, 2, 1), None);
    }

    #[test]
    fn er_grid_is_centered_on_density() {
        let grids = matched_candidates(100, 1500, &CandidateConfig::default()).unwrap();
        assert_eq!(grids[0].family, Family::ErdosRenyi);
        let v = grids[0].values();
        assert_eq!(v.len(), 11);
        let center = 1500.0 / 4950.0;
        assert_eq!(v[5], center);
        assert!((v[0] - (center - 0.05)).abs() < 1e-12);

        let sparse = matched_candidates(100, 30, &CandidateConfig::default()).unwrap();
        let v = sparse[0].values();
        assert_eq!(v[0], 30.0 / 4950.0);
        assert_eq!(v.len(), 6);
    }

    #[test]
    fn ties_keep_candidate_order() {
        let est = Estimator::new(DensityOptions::default());
        let spec = ModelSpec::erdos_renyi(20, 0.4).unwrap();
        let spectra = est.reference_spectra(&spec, 3, 1).unwrap();
        let a = ParameterGrid::new(Family::ErdosRenyi, 20, vec![0.4], 3).unwrap();
        let grid = est.comparison_grid(&spectra, &[&a], 1).unwrap();
        let observed = est.reference_density(&spec, 3, 1, &grid).unwrap();
        let result = select_model(&est, &observed, &[a.clone(), a], 1).unwrap();
        assert_eq!(result.ranked[0].kl, 0.0);
        assert_eq!(result.ranked[0].score, 2.0);
        assert_eq!(result.ranked[1].score, 2.0);
        assert_eq!(result.chosen, FamilyKind::ErdosRenyi);
    }

    #[test]
    fn single_family_is_chosen() {
        let est = Estimator::new(DensityOptions::default());
        let g = ModelSpec::erdos_renyi(30, 0.3).unwrap().generate(4).unwrap();
        let config = CandidateConfig {
            families: vec![FamilyKind::ErdosRenyi],
            replicates: 5,
            ..Default::default()
        };
        let result = classify_network(&est, &g, &config, 2).unwrap();
        assert_eq!(result.chosen, FamilyKind::ErdosRenyi);
        assert_eq!(result.ranked.len(), 1);
    }

    #[test]
    fn json_and_table_shapes() {
        let result = SelectionResult {
            chosen: FamilyKind::ScaleFree,
            ranked: vec![
                RankedModel {
                    family: Family::ScaleFree { m1: 1, n0: 1 },
                    theta_hat: Some(1.5),
                    kl: 0.5,
                    score: 3.0,
                },
                RankedModel {
                    family: Family::ErdosRenyi,
                    theta_hat: None,
                    kl: f64::INFINITY,
                    score: f64::INFINITY,
                },
            ],
            fits: vec![],
        };
        let json = serde_json::to_string(&result).unwrap();
        assert_eq!(
            json,
            r#"{"chosen":"scale-free","ranked":[{"family":"scale-free","m1":1,"n0":1,"theta_hat":1.5,"kl":0.5,"score":3.0},{"family":"erdos-renyi","theta_hat":null,"kl":"inf","score":"inf"}]}"#
        );
        let mut out = Vec::new();
        write_selection_table(&[("fly".into(), result)], &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "network,chosen,kl_erdos_renyi,kl_scale_free,kl_small_world,theta_erdos_renyi,theta_scale_free,theta_small_world"
        );
        assert_eq!(lines.next().unwrap(), "fly,scale-free,inf,0.5,,,1.5,");
    }

    #[test]
    fn empty_table_has_header_only() {
        let mut out = Vec::new();
        write_selection_table(&[], &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap().lines().count(), 1);
    }
}

//! Kernel estimates of spectral densities on uniform grids.
//!
//! A finite eigenvalue sample is turned into a density by a Gaussian kernel
//! estimate evaluated on a uniform grid and rescaled to unit trapezoid
//! integral. All divergences in [`crate::divergence`] integrate with the same
//! trapezoid rule, so densities that are compared must share one [`Grid`].

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

/// Default number of grid points.
pub const DEFAULT_GRID_POINTS: usize = 512;
/// Default grid margin beyond the sample range, in bandwidths.
pub const DEFAULT_TAIL: f64 = 3.0;
/// Kernel contributions farther than this many bandwidths are dropped; the
/// omitted mass is below `exp(-50)` relative to the kernel peak.
const KERNEL_CUTOFF: f64 = 10.0;
/// Relative size below which a sample spread is treated as rounding noise.
const SPREAD_NOISE: f64 = 1e-9;

/// Uniformly spaced, strictly increasing abscissae.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    start: f64,
    step: f64,
    len: usize,
}

impl Grid {
    /// `points` equally spaced abscissae from `lo` to `hi` inclusive.
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Grid> {
        if points < 2 {
            return Err(Error::domain("a grid needs at least two points"));
        }
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::domain(format!("invalid grid range [{lo}, {hi}]")));
        }
        Ok(Grid {
            start: lo,
            step: (hi - lo) / (points - 1) as f64,
            len: points,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn lo(&self) -> f64 {
        self.start
    }

    pub fn hi(&self) -> f64 {
        self.point(self.len - 1)
    }

    pub fn point(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|k| self.point(k)).collect()
    }

    /// Trapezoid rule for values tabulated on this grid.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len);
        let inner: f64 = values[1..self.len - 1].iter().sum();
        self.step * (inner + 0.5 * (values[0] + values[self.len - 1]))
    }

    /// Canonical text form, stable across runs.
    pub fn canonical_key(&self) -> String {
        format!("grid(start={:?},step={:?},len={})", self.start, self.step, self.len)
    }
}

/// Kernel bandwidth selection.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BandwidthRule {
    /// Silverman's rule of thumb, `0.9 min(sd, IQR/1.34) N^(-1/5)`.
    #[default]
    Silverman,
    /// Histogram bin width: `(max - min) / ceil(log2 N + 1)`.
    Sturges,
    /// A fixed bandwidth, independent of the sample.
    Fixed(f64),
}

impl BandwidthRule {
    /// Bandwidth for `sample`. Falls back to `1e-3 * max(1, |x|)` when the
    /// sample has no spread.
    pub fn select(&self, sample: &[f64]) -> f64 {
        let mut sorted = sample.to_vec();
        sorted.sort_by(f64::total_cmp);
        self.select_sorted(&sorted)
    }

    fn select_sorted(&self, sorted: &[f64]) -> f64 {
        let n = sorted.len();
        let degenerate = || 1e-3 * sorted[0].abs().max(1.0);
        let h = match *self {
            BandwidthRule::Fixed(h) => return h,
            BandwidthRule::Sturges => {
                let bins = ((n as f64).log2() + 1.0).ceil();
                let range = sorted[n - 1] - sorted[0];
                if range > SPREAD_NOISE * sorted[0].abs().max(sorted[n - 1].abs()).max(1.0) {
                    range / bins
                } else {
                    0.0
                }
            }
            BandwidthRule::Silverman => {
                if n < 2 {
                    0.0
                } else {
                    let mean = sorted.iter().sum::<f64>() / n as f64;
                    let var = sorted.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
                    let sd = var.sqrt();
                    let iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
                    // eigenvalues of high multiplicity come back smeared by
                    // rounding; a spread at that level is no spread at all
                    let noise = SPREAD_NOISE * sorted[0].abs().max(sorted[n - 1].abs()).max(1.0);
                    let spread = match (sd > noise, iqr > noise) {
                        (true, true) => sd.min(iqr / 1.34),
                        (true, false) => sd,
                        _ => 0.0,
                    };
                    0.9 * spread * (n as f64).powf(-0.2)
                }
            }
        };
        if h > 0.0 && h.is_finite() {
            h
        } else {
            degenerate()
        }
    }
}

impl fmt::Display for BandwidthRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BandwidthRule::Silverman => f.write_str("silverman"),
            BandwidthRule::Sturges => f.write_str("sturges"),
            BandwidthRule::Fixed(h) => write!(f, "{h:?}"),
        }
    }
}

impl FromStr for BandwidthRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "silverman" => Ok(BandwidthRule::Silverman),
            "sturges" => Ok(BandwidthRule::Sturges),
            other => match other.parse::<f64>() {
                Ok(h) if h > 0.0 && h.is_finite() => Ok(BandwidthRule::Fixed(h)),
                _ => Err(Error::domain(format!(
                    "bandwidth must be \"silverman\", \"sturges\" or a positive number, got {other:?}"
                ))),
            },
        }
    }
}

/// Linear-interpolation sample quantile (R type 7).
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Settings shared by every density estimate in a computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityOptions {
    pub bandwidth: BandwidthRule,
    pub grid_points: usize,
    /// Margin of the natural grid beyond the sample range, in bandwidths.
    pub tail: f64,
}

impl Default for DensityOptions {
    fn default() -> Self {
        DensityOptions {
            bandwidth: BandwidthRule::default(),
            grid_points: DEFAULT_GRID_POINTS,
            tail: DEFAULT_TAIL,
        }
    }
}

impl DensityOptions {
    pub fn canonical_key(&self) -> String {
        format!("kde(bw={},tail={:?})", self.bandwidth, self.tail)
    }
}

/// A nonnegative density tabulated on a uniform grid with unit trapezoid integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDensity {
    grid: Grid,
    values: Vec<f64>,
    bandwidth: f64,
}

impl SpectralDensity {
    /// Wraps tabulated values, rescaling them to unit integral.
    pub fn from_values(grid: Grid, values: Vec<f64>, bandwidth: f64) -> Result<SpectralDensity> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}-point grid",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::Numeric("density values must be finite and nonnegative".into()));
        }
        normalized(grid, values, bandwidth)
    }

    /// Tabulates `f` on `grid` and normalizes.
    pub fn tabulate(grid: Grid, f: impl Fn(f64) -> f64) -> Result<SpectralDensity> {
        let values = grid.points().into_iter().map(f).collect();
        Self::from_values(grid, values, 0.0)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Kernel bandwidth (mean bandwidth for averaged densities, 0 for
    /// tabulated ones).
    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn integral(&self) -> f64 {
        self.grid.integrate(&self.values)
    }

    /// Value at `x` by linear interpolation, 0 outside the grid.
    pub fn value_at(&self, x: f64) -> f64 {
        let pos = (x - self.grid.lo()) / self.grid.step();
        if !(0.0..=(self.grid.len() - 1) as f64).contains(&pos) {
            return 0.0;
        }
        let k = (pos.floor() as usize).min(self.grid.len() - 2);
        let t = pos - k as f64;
        self.values[k] * (1.0 - t) + self.values[k + 1] * t
    }

    pub fn require_same_grid(&self, other: &SpectralDensity) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "{} vs {}",
                self.grid.canonical_key(),
                other.grid.canonical_key()
            )))
        }
    }

    /// CSV with header `lambda,density`, one row per grid point.
    pub fn write_csv<W: Write>(&self, mut sink: W) -> Result<()> {
        writeln!(sink, "lambda,density")?;
        for (k, v) in self.values.iter().enumerate() {
            writeln!(sink, "{:?},{:?}", self.grid.point(k), v)?;
        }
        sink.flush()?;
        Ok(())
    }

    /// Reads the `density` column of a CSV written by [`Self::write_csv`].
    pub fn read_csv<R: BufRead>(source: R, grid: Grid, bandwidth: f64) -> Result<SpectralDensity> {
        let mut values = Vec::with_capacity(grid.len());
        for (i, line) in source.lines().enumerate() {
            let line = line?;
            if i == 0 {
                if line.trim() != "lambda,density" {
                    return Err(Error::Parse {
                        line: 1,
                        message: "expected header lambda,density".into(),
                    });
                }
                continue;
            }
            let density = line
                .split(',')
                .nth(1)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or(Error::Parse {
                    line: i + 1,
                    message: format!("malformed density row {line:?}"),
                })?;
            values.push(density);
        }
        // stored values are already normalized; keep them bit for bit
        let d = SpectralDensity {
            grid,
            values,
            bandwidth,
        };
        if d.values.len() != grid.len() || d.values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::Numeric("stored density does not fit its grid".into()));
        }
        if (d.integral() - 1.0).abs() > 1e-9 {
            return Err(Error::Numeric("stored density is not normalized".into()));
        }
        Ok(d)
    }
}

fn normalized(grid: Grid, mut values: Vec<f64>, bandwidth: f64) -> Result<SpectralDensity> {
    let mass = grid.integrate(&values);
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::Numeric(format!(
            "density has no mass on {}",
            grid.canonical_key()
        )));
    }
    for v in &mut values {
        *v /= mass;
    }
    Ok(SpectralDensity {
        grid,
        values,
        bandwidth,
    })
}

fn sorted_finite(sample: &[f64]) -> Result<Vec<f64>> {
    if sample.is_empty() {
        return Err(Error::DegenerateSample("no values to estimate a density from".into()));
    }
    if sample.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric("non-finite sample value".into()));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted)
}

/// Range `[min - tail*h, max + tail*h]` of a sample with bandwidth `h`.
pub fn natural_span(sample: &[f64], options: &DensityOptions) -> Result<(f64, f64)> {
    let sorted = sorted_finite(sample)?;
    let h = options.bandwidth.select_sorted(&sorted);
    Ok((
        sorted[0] - options.tail * h,
        sorted[sorted.len() - 1] + options.tail * h,
    ))
}

/// Grid over the natural span of a sample.
pub fn natural_grid(sample: &[f64], options: &DensityOptions) -> Result<Grid> {
    shared_grid(&[sample], options)
}

/// Smallest grid covering the natural span of every sample.
pub fn shared_grid(samples: &[&[f64]], options: &DensityOptions) -> Result<Grid> {
    let spans = samples
        .iter()
        .map(|s| natural_span(s, options))
        .collect::<Result<Vec<_>>>()?;
    covering_grid(spans, options.grid_points)
}

/// Smallest grid covering every `(lo, hi)` span.
pub fn covering_grid<I>(spans: I, points: usize) -> Result<Grid>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let (lo, hi) = spans
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (a, b)| {
            (lo.min(a), hi.max(b))
        });
    if !lo.is_finite() {
        return Err(Error::DegenerateSample("no samples to build a grid from".into()));
    }
    Grid::new(lo, hi, points)
}

/// Gaussian kernel density estimate of `sample` on `grid` (or on the
/// sample's natural grid), normalized to unit trapezoid integral.
pub fn estimate_density(
    sample: &[f64],
    grid: Option<&Grid>,
    options: &DensityOptions,
) -> Result<SpectralDensity> {
    let sorted = sorted_finite(sample)?;
    let h = options.bandwidth.select_sorted(&sorted);
    let grid = match grid {
        Some(g) => *g,
        None => Grid::new(
            sorted[0] - options.tail * h,
            sorted[sorted.len() - 1] + options.tail * h,
            options.grid_points,
        )?,
    };
    let values = kernel_sum(&grid, &sorted, h);
    normalized(grid, values, h)
}

/// Estimate from the pooled eigenvalues of one or more spectra.
pub fn estimate_from_spectra(
    spectra: &[Spectrum],
    grid: Option<&Grid>,
    options: &DensityOptions,
) -> Result<SpectralDensity> {
    let pooled: Vec<f64> = spectra.iter().flat_map(|s| s.values().iter().copied()).collect();
    estimate_density(&pooled, grid, options)
}

/// Mean of the per-spectrum estimates on `grid`: the averaged density of a
/// set of graphs.
pub fn average_estimate(
    spectra: &[Spectrum],
    grid: &Grid,
    options: &DensityOptions,
) -> Result<SpectralDensity> {
    let densities = spectra
        .iter()
        .map(|s| estimate_density(s.values(), Some(grid), options))
        .collect::<Result<Vec<_>>>()?;
    average_density(&densities)
}

/// `sum_i phi((x_k - s_i) / h) / (N h)` on every grid point.
///
/// Along a uniform grid successive kernel values differ by a factor that is
/// itself geometric, so each sample costs three exponentials plus two
/// multiplications per grid point inside the cutoff window.
fn kernel_sum(grid: &Grid, sorted: &[f64], h: f64) -> Vec<f64> {
    let len = grid.len();
    let mut acc = vec![0.0; len];
    let d = grid.step() / h;
    let q = (-d * d).exp();
    let reach = (KERNEL_CUTOFF / d).ceil().min(len as f64) as usize;
    for &s in sorted {
        let pos = (s - grid.lo()) / grid.step();
        let center = pos.round().clamp(0.0, (len - 1) as f64) as usize;
        let z0 = (grid.point(center) - s) / h;
        let g0 = (-0.5 * z0 * z0).exp();
        if g0 == 0.0 && z0.abs() > KERNEL_CUTOFF {
            continue;
        }
        acc[center] += g0;

        let mut g = g0;
        let mut ratio = (-z0 * d - 0.5 * d * d).exp();
        for slot in acc.iter_mut().skip(center + 1).take(reach) {
            g *= ratio;
            if g == 0.0 {
                break;
            }
            *slot += g;
            ratio *= q;
        }

        let mut g = g0;
        let mut ratio = (z0 * d - 0.5 * d * d).exp();
        for slot in acc[..center].iter_mut().rev().take(reach) {
            g *= ratio;
            if g == 0.0 {
                break;
            }
            *slot += g;
            ratio *= q;
        }
    }
    let scale = 1.0 / (sorted.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    for v in &mut acc {
        *v *= scale;
    }
    acc
}

/// Pointwise mean of densities sharing one grid, renormalized.
pub fn average_density<'a, I>(densities: I) -> Result<SpectralDensity>
where
    I: IntoIterator<Item = &'a SpectralDensity>,
{
    let mut iter = densities.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::DegenerateSample("no densities to average".into()))?;
    let mut sum = first.values.clone();
    let mut bandwidth = first.bandwidth;
    let mut count = 1usize;
    for d in iter {
        first.require_same_grid(d)?;
        for (acc, v) in sum.iter_mut().zip(&d.values) {
            *acc += v;
        }
        bandwidth += d.bandwidth;
        count += 1;
    }
    let inv = 1.0 / count as f64;
    for v in &mut sum {
        *v *= inv;
    }
    normalized(first.grid, sum, bandwidth * inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_kde(grid: &Grid, sample: &[f64], h: f64) -> Vec<f64> {
        let c = 1.0 / (sample.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
        grid.points()
            .iter()
            .map(|x| {
                c * sample
                    .iter()
                    .map(|s| (-0.5 * ((x - s) / h).powi(2)).exp())
                    .sum::<f64>()
            })
            .collect()
    }

    #[test]
    fn recurrence_matches_direct_evaluation() {
        let sample = [-1.3, -0.2, 0.0, 0.05, 0.7, 2.4, 9.0];
        let grid = Grid::new(-3.0, 4.0, 301).unwrap();
        for &h in &[0.01, 0.08, 0.5, 3.0] {
            let fast = kernel_sum(&grid, &sample, h);
            let slow = direct_kde(&grid, &sample, h);
            let peak = slow.iter().cloned().fold(0.0, f64::max);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() <= 1e-12 * peak, "h={h}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn symmetric_sample_gives_symmetric_density() {
        let d = estimate_density(&[-1.0, 0.0, 1.0], None, &DensityOptions::default()).unwrap();
        let v = d.values();
        let n = v.len();
        for k in 0..n {
            assert!((v[k] - v[n - 1 - k]).abs() < 1e-10);
        }
        assert!((d.integral() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sturges_and_silverman_bandwidths() {
        let sample: Vec<f64> = (0..16).map(|i| i as f64).collect();
        // 16 points: ceil(log2 16 + 1) = 5 bins over a range of 15
        assert!((BandwidthRule::Sturges.select(&sample) - 3.0).abs() < 1e-15);
        // sd = 4.760952..., IQR = 7.5 -> min(sd, 7.5/1.34) = sd
        let sd = (sample.iter().map(|x| (x - 7.5f64).powi(2)).sum::<f64>() / 15.0).sqrt();
        let expected = 0.9 * sd * 16f64.powf(-0.2);
        assert!((BandwidthRule::Silverman.select(&sample) - expected).abs() < 1e-14);
    }

    #[test]
    fn constant_sample_falls_back_to_narrow_bump() {
        for rule in [BandwidthRule::Silverman, BandwidthRule::Sturges] {
            assert!((rule.select(&[4.0; 10]) - 4e-3).abs() < 1e-18);
            assert!((rule.select(&[0.25; 3]) - 1e-3).abs() < 1e-18);
        }
        let d = estimate_density(&[4.0; 10], None, &DensityOptions::default()).unwrap();
        assert!((d.integral() - 1.0).abs() < 1e-12);
        assert!(d.grid().lo() > 3.98 && d.grid().hi() < 4.02);
    }

    #[test]
    fn zero_iqr_uses_standard_deviation() {
        let sample = [5.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        let mean: f64 = 10.0 / 6.0;
        let sd = (sample.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 5.0).sqrt();
        let h = BandwidthRule::Silverman.select(&sample);
        assert!((h - 0.9 * sd * 6f64.powf(-0.2)).abs() < 1e-14);
    }

    #[test]
    fn rounding_noise_is_not_spread() {
        // most of the mass at a numerically smeared zero
        let mut sample = vec![1e-16, -2e-16, 3e-16, 0.0, -1e-16, 2e-16, 0.0, 1e-16];
        sample.extend([-1.0, 1.0]);
        let h = BandwidthRule::Silverman.select(&sample);
        let mean = 0.0;
        let sd = (sample.iter().map(|x: &f64| (x - mean).powi(2)).sum::<f64>() / 9.0).sqrt();
        assert!((h - 0.9 * sd * 10f64.powf(-0.2)).abs() < 1e-12);
        assert_eq!(BandwidthRule::Sturges.select(&[1e-16, -1e-16]), 1e-3);
    }

    #[test]
    fn empty_sample_is_an_error() {
        assert!(matches!(
            estimate_density(&[], None, &DensityOptions::default()),
            Err(Error::DegenerateSample(_))
        ));
    }

    #[test]
    fn average_of_identical_is_identity() {
        let d = estimate_density(&[0.1, 0.5, 0.2, -0.7], None, &DensityOptions::default()).unwrap();
        let avg = average_density([&d, &d]).unwrap();
        for (a, b) in avg.values().iter().zip(d.values()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn average_of_disjoint_bumps_is_bimodal() {
        let opts = DensityOptions {
            bandwidth: BandwidthRule::Fixed(0.1),
            ..Default::default()
        };
        let grid = Grid::new(-2.0, 5.0, 701).unwrap();
        let a = estimate_density(&[0.0], Some(&grid), &opts).unwrap();
        let b = estimate_density(&[3.0], Some(&grid), &opts).unwrap();
        let avg = average_density([&a, &b]).unwrap();
        assert!((avg.integral() - 1.0).abs() < 1e-12);
        assert!((avg.value_at(0.0) - avg.value_at(3.0)).abs() < 1e-9);
        assert!(avg.value_at(1.5) < 1e-20);
        assert!(avg.value_at(0.0) > 1.9);
    }

    #[test]
    fn averaging_rejects_grid_mismatch() {
        let opts = DensityOptions::default();
        let a = estimate_density(&[0.0, 1.0], None, &opts).unwrap();
        let b = estimate_density(&[0.0, 2.0], None, &opts).unwrap();
        assert!(matches!(average_density([&a, &b]), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn shared_grid_covers_all_samples() {
        let opts = DensityOptions::default();
        let a = [0.0, 1.0, 2.0];
        let b = [-5.0, -4.0];
        let g = shared_grid(&[&a, &b], &opts).unwrap();
        let ga = natural_grid(&a, &opts).unwrap();
        let gb = natural_grid(&b, &opts).unwrap();
        assert_eq!(g.lo(), gb.lo());
        assert!((g.hi() - ga.hi()).abs() < 1e-12);
        assert_eq!(g.len(), DEFAULT_GRID_POINTS);
    }

    #[test]
    fn csv_round_trip_preserves_values() {
        let d = estimate_density(&[0.3, -0.1, 0.9], None, &DensityOptions::default()).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("lambda,density\n"));
        assert_eq!(text.lines().count(), DEFAULT_GRID_POINTS + 1);
        let back = SpectralDensity::read_csv(buf.as_slice(), *d.grid(), d.bandwidth()).unwrap();
        for (a, b) in back.values().iter().zip(d.values()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn bandwidth_rule_parsing() {
        assert_eq!("sturges".parse::<BandwidthRule>().unwrap(), BandwidthRule::Sturges);
        assert_eq!("0.05".parse::<BandwidthRule>().unwrap(), BandwidthRule::Fixed(0.05));
        assert!("-1".parse::<BandwidthRule>().is_err());
        assert!("scott".parse::<BandwidthRule>().is_err());
    }
}

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{generate, Graph};
use crate::error::{Error, Result};

/// The three built-in random-graph families, without structural constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    ErdosRenyi,
    ScaleFree,
    SmallWorld,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 3] = [
        FamilyKind::ErdosRenyi,
        FamilyKind::ScaleFree,
        FamilyKind::SmallWorld,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::ErdosRenyi => "erdos-renyi",
            FamilyKind::ScaleFree => "scale-free",
            FamilyKind::SmallWorld => "small-world",
        }
    }

    /// Name of the estimated parameter.
    pub fn parameter_name(self) -> &'static str {
        match self {
            FamilyKind::ErdosRenyi => "p",
            FamilyKind::ScaleFree => "p_s",
            FamilyKind::SmallWorld => "p_r",
        }
    }

    /// Number of free parameters.
    pub fn dimension(self) -> usize {
        1
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "erdos-renyi" | "er" | "random" => Ok(FamilyKind::ErdosRenyi),
            "scale-free" | "sf" => Ok(FamilyKind::ScaleFree),
            "small-world" | "sw" => Ok(FamilyKind::SmallWorld),
            other => Err(Error::domain(format!("unknown graph family {other:?}"))),
        }
    }
}

/// A family together with the structural constants that are held fixed
/// while its parameter is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    ErdosRenyi,
    /// `m1` edges per new node, `n0` isolated seed nodes.
    ScaleFree { m1: usize, n0: usize },
    /// `k` lattice neighbors per node (even).
    SmallWorld { k: usize },
}

impl Family {
    pub fn kind(&self) -> FamilyKind {
        match self {
            Family::ErdosRenyi => FamilyKind::ErdosRenyi,
            Family::ScaleFree { .. } => FamilyKind::ScaleFree,
            Family::SmallWorld { .. } => FamilyKind::SmallWorld,
        }
    }

    /// Checks the structural constants against a node count.
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            Family::ErdosRenyi => {}
            Family::ScaleFree { m1, n0 } => {
                if m1 == 0 || m1 > n0 {
                    return Err(Error::domain(format!("need 1 <= m1 <= n0, got m1 = {m1}, n0 = {n0}")));
                }
                if n <= n0 {
                    return Err(Error::domain(format!("need n > n0, got n = {n}, n0 = {n0}")));
                }
            }
            Family::SmallWorld { k } => {
                if k == 0 || k % 2 != 0 || k >= n {
                    return Err(Error::domain(format!("need even 0 < k < n, got k = {k}, n = {n}")));
                }
            }
        }
        Ok(())
    }

    pub fn parameter_in_domain(&self, theta: f64) -> bool {
        match self {
            Family::ErdosRenyi | Family::SmallWorld { .. } => (0.0..=1.0).contains(&theta),
            Family::ScaleFree { .. } => theta >= 0.0 && theta.is_finite(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::ErdosRenyi => write!(f, "erdos-renyi"),
            Family::ScaleFree { m1, n0 } => write!(f, "scale-free(m1={m1},n0={n0})"),
            Family::SmallWorld { k } => write!(f, "small-world(k={k})"),
        }
    }
}

/// A fully specified random-graph model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(flatten)]
    pub family: Family,
    pub n: usize,
    pub theta: f64,
}

impl ModelSpec {
    pub fn new(family: Family, n: usize, theta: f64) -> Result<ModelSpec> {
        let spec = ModelSpec { family, n, theta };
        spec.validate()?;
        Ok(spec)
    }

    pub fn erdos_renyi(n: usize, p: f64) -> Result<ModelSpec> {
        Self::new(Family::ErdosRenyi, n, p)
    }

    pub fn scale_free(n: usize, exponent: f64, m1: usize, n0: usize) -> Result<ModelSpec> {
        Self::new(Family::ScaleFree { m1, n0 }, n, exponent)
    }

    pub fn small_world(n: usize, k: usize, rewire: f64) -> Result<ModelSpec> {
        Self::new(Family::SmallWorld { k }, n, rewire)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("a graph needs at least one node"));
        }
        self.family.validate(self.n)?;
        if !self.family.parameter_in_domain(self.theta) {
            return Err(Error::domain(format!(
                "{} = {} outside the domain of {}",
                self.family.kind().parameter_name(),
                self.theta,
                self.family.kind()
            )));
        }
        Ok(())
    }

    pub fn with_theta(&self, theta: f64) -> Result<ModelSpec> {
        Self::new(self.family, self.n, theta)
    }

    pub fn generate(&self, seed: u64) -> Result<Graph> {
        match self.family {
            Family::ErdosRenyi => generate::erdos_renyi(self.n, self.theta, seed),
            Family::ScaleFree { m1, n0 } => generate::scale_free(self.n, self.theta, m1, n0, seed),
            Family::SmallWorld { k } => generate::small_world(self.n, k, self.theta, seed),
        }
    }

    /// Canonical text key, stable across runs, used for seeding and caching.
    pub fn canonical_key(&self) -> String {
        format!("{};n={};theta={:?}", self.family, self.n, self.theta)
    }
}

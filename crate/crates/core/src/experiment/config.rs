//! Experiment configuration, read from TOML.
//!
//! ```toml
//! representation = "left_regular"   # left_regular | affine_quasi_regular | trivial | fourier | weyl_heisenberg
//! distribution = "gaussian"         # gaussian | rademacher | steinhaus
//! sparsity_list = [1, 2]
//! m_list = [4, 8, 16]
//! trials_per_cell = 50
//! success_threshold = 1e-4          # optional, default 1e-4
//! master_seed = 42
//! solver = "iht"                    # optional: iht (default) | omp
//! omega_restriction = "affine_axis" # optional
//! compute_delta = false             # optional; always on for scaling runs
//! n = 8                             # dimension; required for the trivial representation
//!
//! [group]
//! kind = "cyclic"                   # cyclic {n} | affine {p} | product {left, right}
//! n = 16
//! ```
//!
//! Unknown keys are rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{self, FiniteGroup, GroupKind};
use crate::recovery::DEFAULT_SUCCESS_THRESHOLD;
use crate::representation::{self, Representation};
use crate::sensing::Distribution;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic {
        n: usize,
    },
    Affine {
        p: u64,
    },
    Product {
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Cyclic { n } => group::make_cyclic(*n),
            GroupSpec::Affine { p } => group::make_affine(*p),
            GroupSpec::Product { left, right } => group::make_direct_product(&left.build()?, &right.build()?),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepresentationSpec {
    LeftRegular,
    AffineQuasiRegular,
    Trivial,
    Fourier,
    WeylHeisenberg,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    #[default]
    Iht,
    Omp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaRestriction {
    AffineAxis,
}

fn default_threshold() -> f64 {
    DEFAULT_SUCCESS_THRESHOLD
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub representation: RepresentationSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub distribution: Distribution,
    pub sparsity_list: Vec<usize>,
    pub m_list: Vec<usize>,
    pub trials_per_cell: usize,
    #[serde(default = "default_threshold")]
    pub success_threshold: f64,
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_restriction: Option<OmegaRestriction>,
    #[serde(default)]
    pub solver: Solver,
    #[serde(default, skip_serializing_if = "is_false")]
    pub compute_delta: bool,
    pub group: GroupSpec,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn emit(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Builds the representation named by the config and checks it against
    /// the group spec and `n`.
    pub fn build_representation(&self) -> Result<Representation> {
        let group = self.group.build()?;
        let cfg = |msg: String| Error::Config(msg);
        let rep = match self.representation {
            RepresentationSpec::LeftRegular => representation::left_regular(&group)?,
            RepresentationSpec::Trivial => {
                let n = self
                    .n
                    .ok_or_else(|| cfg("the trivial representation needs `n`".into()))?;
                representation::trivial(&group, n)?
            }
            RepresentationSpec::AffineQuasiRegular => match group.kind() {
                GroupKind::Affine { p } => representation::affine_quasi_regular(*p)?,
                _ => {
                    return Err(cfg(format!(
                        "affine_quasi_regular needs an affine group, got {}",
                        group.label()
                    )))
                }
            },
            RepresentationSpec::Fourier => match group.kind() {
                GroupKind::Cyclic { n } => representation::fourier_realization(*n)?,
                _ => return Err(cfg(format!("fourier needs a cyclic group, got {}", group.label()))),
            },
            RepresentationSpec::WeylHeisenberg => match group.kind() {
                GroupKind::Product(a, b) if a == b && matches!(**a, GroupKind::Cyclic { .. }) => {
                    let GroupKind::Cyclic { n } = **a else { unreachable!() };
                    representation::weyl_heisenberg(n)?
                }
                _ => {
                    return Err(cfg(format!(
                        "weyl_heisenberg needs a product Z_n x Z_n, got {}",
                        group.label()
                    )))
                }
            },
        };
        if let Some(n) = self.n {
            if n != rep.dim() {
                return Err(cfg(format!("n = {n} but {} has dimension {}", rep.label(), rep.dim())));
            }
        }
        Ok(rep)
    }

    /// Elements the sampling sets are drawn from, `None` for the whole group.
    pub fn allowed_elements(&self, group: &FiniteGroup) -> Result<Option<Vec<usize>>> {
        match self.omega_restriction {
            None => Ok(None),
            Some(OmegaRestriction::AffineAxis) => match group.kind() {
                GroupKind::Affine { p } => Ok(Some(group::affine_axis_subset(*p)?)),
                _ => Err(Error::Config(format!(
                    "omega_restriction = affine_axis needs an affine group, got {}",
                    group.label()
                ))),
            },
        }
    }

    /// Checks the config and returns the representation it describes.
    pub fn validate(&self) -> Result<Representation> {
        let cfg = |msg: String| Err(Error::Config(msg));
        if self.trials_per_cell == 0 {
            return cfg("trials_per_cell must be at least 1".into());
        }
        if self.m_list.is_empty() || self.sparsity_list.is_empty() {
            return cfg("m_list and sparsity_list must be non-empty".into());
        }
        if !(self.success_threshold > 0.0 && self.success_threshold.is_finite()) {
            return cfg(format!("success_threshold {} must be positive", self.success_threshold));
        }
        let rep = self.build_representation()?;
        let pool = self
            .allowed_elements(rep.group())?
            .map_or(rep.group().order(), |a| a.len());
        for &m in &self.m_list {
            if m == 0 || m > pool {
                return cfg(format!("m = {m} outside 1..={pool} for {}", rep.group().label()));
            }
        }
        for &s in &self.sparsity_list {
            if s == 0 || s > rep.dim() {
                return cfg(format!("sparsity {s} outside 1..={}", rep.dim()));
            }
            if self.solver == Solver::Omp && self.m_list.iter().any(|&m| s > m) {
                return cfg(format!("omp needs sparsity {s} <= every m"));
            }
        }
        Ok(rep)
    }
}

//! Generator vectors and orbit measurement matrices.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::SamplingSet;
use crate::linalg::{CMatrix, CVector, C64};
use crate::representation::Representation;
use crate::rng;

/// Law of the i.i.d. generator entries. All three have mean zero and
/// `E|xi_i|^2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    /// Real standard normal.
    Gaussian,
    /// Uniform on {-1, +1}.
    Rademacher,
    /// Uniform on the complex unit circle.
    Steinhaus,
}

impl Distribution {
    pub const ALL: [Distribution; 3] = [
        Distribution::Gaussian,
        Distribution::Rademacher,
        Distribution::Steinhaus,
    ];

    /// Subgaussian parameter, recorded as metadata only. `None` for the
    /// bounded laws, which are subgaussian without a tracked constant.
    pub fn subgaussian_parameter(self) -> Option<f64> {
        match self {
            Distribution::Gaussian => Some(1.0),
            Distribution::Rademacher | Distribution::Steinhaus => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Distribution::Gaussian => "gaussian",
            Distribution::Rademacher => "rademacher",
            Distribution::Steinhaus => "steinhaus",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub distribution: Distribution,
    pub dim: usize,
    pub seed: u64,
}

/// Draws the generator vector described by `spec`.
pub fn draw_generator(spec: &GeneratorSpec) -> Result<CVector> {
    if spec.dim == 0 {
        return Err(Error::InvalidArgument("generator dimension must be at least 1".into()));
    }
    let mut rng = rng::stream(spec.seed, rng::TAG_GENERATOR);
    let xi = match spec.distribution {
        Distribution::Gaussian => CVector::from_fn(spec.dim, |_, _| C64::new(rng.sample(StandardNormal), 0.0)),
        Distribution::Rademacher => CVector::from_fn(spec.dim, |_, _| {
            C64::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0)
        }),
        Distribution::Steinhaus => {
            CVector::from_fn(spec.dim, |_, _| C64::from_polar(1.0, 2.0 * PI * rng.random::<f64>()))
        }
    };
    Ok(xi)
}

/// The measurement matrix together with everything needed to rebuild it.
#[derive(Clone, Debug)]
pub struct MeasurementMatrix {
    entries: CMatrix,
    rep_label: String,
    omega: SamplingSet,
    generator: Option<GeneratorSpec>,
}

impl MeasurementMatrix {
    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn rep_label(&self) -> &str {
        &self.rep_label
    }

    pub fn omega(&self) -> &SamplingSet {
        &self.omega
    }

    pub fn generator(&self) -> Option<&GeneratorSpec> {
        self.generator.as_ref()
    }

    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }
}

/// `Phi[l, j] = m^{-1/2} conj((pi(omega_l) xi)_j)`, so that
/// `(Phi x)_l = m^{-1/2} <x, pi(omega_l) xi>`.
pub fn build_measurement_matrix(rep: &Representation, omega: &SamplingSet, xi: &CVector) -> Result<MeasurementMatrix> {
    if xi.len() != rep.dim() {
        return Err(Error::shape(format!("generator of length {}", rep.dim()), xi.len()));
    }
    if omega.group_label() != rep.group().label() {
        return Err(Error::InvalidArgument(format!(
            "sampling set over {} used with a representation of {}",
            omega.group_label(),
            rep.group().label()
        )));
    }
    let m = omega.len();
    let scale = 1.0 / (m as f64).sqrt();
    let mut entries = CMatrix::zeros(m, rep.dim());
    for (l, &w) in omega.elements().iter().enumerate() {
        let orbit = rep.apply(w, xi)?;
        for (j, v) in orbit.iter().enumerate() {
            entries[(l, j)] = v.conj() * scale;
        }
    }
    Ok(MeasurementMatrix {
        entries,
        rep_label: rep.label().to_string(),
        omega: omega.clone(),
        generator: None,
    })
}

/// Draws the generator from `spec` and builds the measurement matrix,
/// recording the spec as provenance.
pub fn measurement_matrix_from_spec(
    rep: &Representation,
    omega: &SamplingSet,
    spec: &GeneratorSpec,
) -> Result<MeasurementMatrix> {
    let xi = draw_generator(spec)?;
    let mut phi = build_measurement_matrix(rep, omega, &xi)?;
    phi.generator = Some(*spec);
    Ok(phi)
}

/// Partial circulant matrix by index arithmetic alone:
/// entry `(l, j) = m^{-1/2} conj(xi((j - omega_l) mod n))`.
pub fn partial_circulant_direct(xi: &CVector, omega: &SamplingSet) -> Result<CMatrix> {
    let n = xi.len();
    if let Some(&bad) = omega.elements().iter().find(|&&w| w >= n) {
        return Err(Error::InvalidArgument(format!("shift {bad} out of range for Z{n}")));
    }
    let m = omega.len();
    let scale = 1.0 / (m as f64).sqrt();
    Ok(CMatrix::from_fn(m, n, |l, j| {
        let w = omega.elements()[l];
        xi[(j + n - w) % n].conj() * scale
    }))
}

/// Writes `m n` then one `re im` line per entry, row-major, 17 significant digits.
pub fn write_matrix<W: Write>(mut w: W, phi: &CMatrix) -> Result<()> {
    writeln!(w, "{} {}", phi.nrows(), phi.ncols())?;
    for i in 0..phi.nrows() {
        for j in 0..phi.ncols() {
            let z = phi[(i, j)];
            writeln!(w, "{:.16e} {:.16e}", z.re, z.im)?;
        }
    }
    Ok(())
}

/// Reads the format produced by [`write_matrix`].
pub fn read_matrix<R: BufRead>(r: R) -> Result<CMatrix> {
    let mut lines = r.lines().enumerate();
    let parse_err = |line: usize, message: String| Error::Parse {
        line: line + 1,
        message,
    };

    let (hl, header) = lines.next().ok_or_else(|| parse_err(0, "missing header".into()))?;
    let header = header?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|e| parse_err(hl, format!("bad dimension {t:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    let [m, n] = dims[..] else {
        return Err(parse_err(hl, format!("expected `m n`, got {header:?}")));
    };

    let mut values = Vec::with_capacity(m * n);
    for (ln, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let mut next = |what: &str| -> Result<f64> {
            let t = parts
                .next()
                .ok_or_else(|| parse_err(ln, format!("missing {what} part")))?;
            t.parse()
                .map_err(|e| parse_err(ln, format!("bad {what} part {t:?}: {e}")))
        };
        let re = next("real")?;
        let im = next("imaginary")?;
        if parts.next().is_some() {
            return Err(parse_err(ln, "trailing tokens".into()));
        }
        values.push(C64::new(re, im));
    }
    if values.len() != m * n {
        return Err(Error::shape(
            format!("{} entries", m * n),
            format!("{} entries", values.len()),
        ));
    }
    Ok(CMatrix::from_row_slice(m, n, &values))
}

//! Nodal domains on a sampled torus.
//!
//! An eigenfunction is sampled on the lattice `(2π·i/n1, 2ρπ·j/n2)`, each
//! sample is classified as positive, negative, or boundary (`|u| ≤ τ`), and
//! same-sign samples are joined through their four neighbours with wrap-around
//! in both directions. Diagonal neighbours are never joined: at a crossing of
//! nodal lines the four open quadrants only touch at the crossing point.

mod union_find;

use serde::Serialize;
use thiserror::Error;

pub use union_find::UnionFind;

use crate::spectra::{Eigenfunction, Grid, SpectraError, TorusShape};

/// Label of boundary cells in [`NodalDecomposition::labels`].
pub const NO_DOMAIN: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NodalError {
    #[error("function vanishes on grid")]
    VanishesOnGrid,
    #[error("constant eigenfunctions have no nodal set")]
    ConstantFunction,
    #[error("unstable count: {0:?} (resolution, count) pairs never agreed")]
    UnstableCount(Vec<(usize, usize)>),
    #[error("invalid count config: {0}")]
    InvalidConfig(String),
    #[error("tau must be finite and non-negative, got {0}")]
    InvalidTau(f64),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
    Boundary,
}

impl Sign {
    pub fn classify(value: f64, tau: f64) -> Sign {
        if value.abs() <= tau {
            Sign::Boundary
        } else if value > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignGrid {
    pub n1: usize,
    pub n2: usize,
    pub tau: f64,
    pub signs: Vec<Sign>,
}

impl SignGrid {
    pub fn from_grid(grid: &Grid, tau: f64) -> Result<Self, NodalError> {
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(NodalError::InvalidTau(tau));
        }
        let signs: Vec<Sign> = grid
            .values
            .iter()
            .map(|&v| Sign::classify(v, tau))
            .collect();
        if signs.iter().all(|&s| s == Sign::Boundary) {
            return Err(NodalError::VanishesOnGrid);
        }
        Ok(Self {
            n1: grid.n1,
            n2: grid.n2,
            tau,
            signs,
        })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Sign {
        self.signs[i * self.n2 + j]
    }

    /// The grid translated cyclically by `(di, dj)` cells.
    pub fn cyclic_shift(&self, di: usize, dj: usize) -> Self {
        let mut signs = vec![Sign::Boundary; self.signs.len()];
        for i in 0..self.n1 {
            for j in 0..self.n2 {
                signs[((i + di) % self.n1) * self.n2 + (j + dj) % self.n2] = self.get(i, j);
            }
        }
        Self {
            signs,
            ..self.clone()
        }
    }
}

/// Samples `u` on an `n1 × n2` lattice and classifies with absolute threshold `tau`.
pub fn sign_grid(
    u: &Eigenfunction,
    n1: usize,
    n2: usize,
    tau: f64,
) -> Result<SignGrid, NodalError> {
    SignGrid::from_grid(&u.evaluate_grid(n1, n2)?, tau)
}

/// Like [`sign_grid`] with `τ = tau_relative · max|u|` over the grid.
pub fn sign_grid_relative(
    u: &Eigenfunction,
    n1: usize,
    n2: usize,
    tau_relative: f64,
) -> Result<SignGrid, NodalError> {
    let grid = u.evaluate_grid(n1, n2)?;
    SignGrid::from_grid(&grid, tau_relative * grid.max_abs())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodalDecomposition {
    pub n1: usize,
    pub n2: usize,
    /// Domain id per cell, [`NO_DOMAIN`] on boundary cells.
    pub labels: Vec<u32>,
    pub domain_signs: Vec<Sign>,
    pub domain_cell_counts: Vec<usize>,
}

impl NodalDecomposition {
    pub fn domain_count(&self) -> usize {
        self.domain_signs.len()
    }

    #[inline]
    pub fn label(&self, i: usize, j: usize) -> u32 {
        self.labels[i * self.n2 + j]
    }

    pub fn count_with_sign(&self, sign: Sign) -> usize {
        self.domain_signs.iter().filter(|&&s| s == sign).count()
    }

    pub fn boundary_cells(&self) -> usize {
        self.labels.iter().filter(|&&l| l == NO_DOMAIN).count()
    }
}

/// Connected components of same-sign cells under 4-connectivity on the torus.
///
/// Labels are numbered `0..k` in order of first appearance in a row-major scan.
pub fn label_components(g: &SignGrid) -> NodalDecomposition {
    let (n1, n2) = (g.n1, g.n2);
    let mut uf = UnionFind::new(n1 * n2);
    for i in 0..n1 {
        let down = (i + 1) % n1;
        for j in 0..n2 {
            let s = g.get(i, j);
            if s == Sign::Boundary {
                continue;
            }
            let here = (i * n2 + j) as u32;
            let right = (j + 1) % n2;
            if g.get(i, right) == s {
                uf.union(here, (i * n2 + right) as u32);
            }
            if g.get(down, j) == s {
                uf.union(here, (down * n2 + j) as u32);
            }
        }
    }

    let mut root_label = vec![NO_DOMAIN; n1 * n2];
    let mut labels = vec![NO_DOMAIN; n1 * n2];
    let mut domain_signs = Vec::new();
    let mut domain_cell_counts = Vec::new();
    for (cell, &s) in g.signs.iter().enumerate() {
        if s == Sign::Boundary {
            continue;
        }
        let root = uf.find(cell as u32) as usize;
        if root_label[root] == NO_DOMAIN {
            root_label[root] = domain_signs.len() as u32;
            domain_signs.push(s);
            domain_cell_counts.push(0);
        }
        let label = root_label[root];
        labels[cell] = label;
        domain_cell_counts[label as usize] += 1;
    }
    NodalDecomposition {
        n1,
        n2,
        labels,
        domain_signs,
        domain_cell_counts,
    }
}

/// Resolution schedule for [`count_nodal_domains`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountConfig {
    pub base_resolution: usize,
    pub max_resolution: usize,
    /// Boundary threshold relative to `max|u|` on the grid.
    pub tau_relative: f64,
    pub refinement_factor: usize,
}

impl Default for CountConfig {
    fn default() -> Self {
        Self {
            base_resolution: 256,
            max_resolution: 4096,
            tau_relative: 1e-9,
            refinement_factor: 2,
        }
    }
}

impl CountConfig {
    pub fn with_base(base_resolution: usize) -> Self {
        Self {
            base_resolution,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), NodalError> {
        let bad = |msg: &str| Err(NodalError::InvalidConfig(msg.to_string()));
        if self.base_resolution < 4 {
            return bad("base_resolution must be at least 4");
        }
        if self.base_resolution > self.max_resolution {
            return bad("base_resolution exceeds max_resolution");
        }
        if self.refinement_factor < 2 {
            return bad("refinement_factor must be at least 2");
        }
        if !(self.tau_relative.is_finite() && self.tau_relative >= 0.0) {
            return bad("tau_relative must be finite and non-negative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountResult {
    pub count: usize,
    /// The finer of the two agreeing resolutions.
    pub resolution: usize,
    pub decomposition: NodalDecomposition,
    /// Every `(resolution, count)` evaluated, coarsest first.
    pub history: Vec<(usize, usize)>,
}

/// Counts domains on square `r × r` grids, refining `r` until two
/// successive resolutions agree.
///
/// Agreement of two resolutions is a heuristic certificate, not a proof:
/// features thinner than the grid spacing (very small perturbations, nearly
/// tangent nodal lines) can hide at both.
pub fn count_nodal_domains(
    u: &Eigenfunction,
    cfg: &CountConfig,
) -> Result<CountResult, NodalError> {
    cfg.validate()?;
    if u.eigenspace.eigenvalue.is_zero() {
        return Err(NodalError::ConstantFunction);
    }
    let decompose = |r: usize| -> Result<NodalDecomposition, NodalError> {
        Ok(label_components(&sign_grid_relative(
            u,
            r,
            r,
            cfg.tau_relative,
        )?))
    };
    let mut r = cfg.base_resolution;
    let mut previous = decompose(r)?;
    let mut history = vec![(r, previous.domain_count())];
    while r * cfg.refinement_factor <= cfg.max_resolution {
        r *= cfg.refinement_factor;
        let current = decompose(r)?;
        history.push((r, current.domain_count()));
        if current.domain_count() == previous.domain_count() {
            return Ok(CountResult {
                count: current.domain_count(),
                resolution: r,
                decomposition: current,
                history,
            });
        }
        previous = current;
    }
    Err(NodalError::UnstableCount(history))
}

/// Cell count times cell area, per domain.
pub fn domain_areas(d: &NodalDecomposition, torus: &TorusShape) -> Vec<f64> {
    let cell = torus.period_x1() / d.n1 as f64 * torus.period_x2() / d.n2 as f64;
    d.domain_cell_counts
        .iter()
        .map(|&c| c as f64 * cell)
        .collect()
}

/// JSON-ready summary of a decomposition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodalSummary {
    pub count: usize,
    pub signs: Vec<Sign>,
    pub areas: Vec<f64>,
    pub resolution: [usize; 2],
}

impl NodalSummary {
    pub fn new(d: &NodalDecomposition, torus: &TorusShape) -> Self {
        Self {
            count: d.domain_count(),
            signs: d.domain_signs.clone(),
            areas: domain_areas(d, torus),
            resolution: [d.n1, d.n2],
        }
    }
}

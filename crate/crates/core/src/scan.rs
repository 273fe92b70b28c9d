//! End-to-end parity check over a range of eigenvalues: choose the
//! anti-symmetry vector, verify it on the basis, then count and pair the
//! nodal domains of seeded random eigenfunctions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::antisym::{
    antisymmetry_vector, pair_domains, verify_by_sampling, AntisymError, ParityRegime,
    TranslationVector,
};
use crate::nodal::{count_nodal_domains, CountConfig, Sign};
use crate::spectra::{
    enumerate_eigenspaces, Eigenfunction, Eigenspace, Eigenvalue, Rational, SpectraError,
    TorusShape,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionScan {
    pub coefficients: Vec<f64>,
    pub count: Option<usize>,
    pub positive: usize,
    pub negative: usize,
    pub resolution: usize,
    pub pairs: usize,
    pub pairing_discrepancy: usize,
    pub unmatched_cells: usize,
    pub sampling_residual: f64,
    pub even: bool,
    pub error: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenspaceScan {
    pub lambda: Eigenvalue,
    pub multiplicity: usize,
    pub vector: Option<TranslationVector>,
    pub basis_check: bool,
    pub error: Option<String>,
    pub functions: Vec<FunctionScan>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParityScanReport {
    pub regime: ParityRegime,
    pub eigenspaces: Vec<EigenspaceScan>,
    pub functions_checked: usize,
    pub failures: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParityScanConfig {
    pub samples_per_eigenspace: usize,
    pub seed: u64,
    pub sampling_points: usize,
    pub count: CountConfig,
}

impl Default for ParityScanConfig {
    fn default() -> Self {
        Self {
            samples_per_eigenspace: 5,
            seed: 42,
            sampling_points: 1000,
            count: CountConfig::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScanError {
    #[error(transparent)]
    Regime(#[from] AntisymError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// Checks one eigenfunction against a vector already verified on its basis.
pub fn check_function(
    u: &Eigenfunction,
    v: &TranslationVector,
    cfg: &ParityScanConfig,
) -> FunctionScan {
    let sampling_residual = verify_by_sampling(u, v, cfg.sampling_points, cfg.seed);
    let mut out = FunctionScan {
        coefficients: u.coefficients.clone(),
        count: None,
        positive: 0,
        negative: 0,
        resolution: 0,
        pairs: 0,
        pairing_discrepancy: 0,
        unmatched_cells: 0,
        sampling_residual,
        even: false,
        error: None,
        pass: false,
    };
    let counted = match count_nodal_domains(u, &cfg.count) {
        Ok(r) => r,
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    let d = &counted.decomposition;
    out.count = Some(counted.count);
    out.resolution = counted.resolution;
    out.positive = d.count_with_sign(Sign::Positive);
    out.negative = d.count_with_sign(Sign::Negative);
    out.even = counted.count % 2 == 0;
    match pair_domains(d, v) {
        Ok(p) => {
            out.pairs = p.pairs.len();
            out.pairing_discrepancy = p.total_discrepancy();
            out.unmatched_cells = p.unmatched_cells;
        }
        Err(e) => out.error = Some(e.to_string()),
    }
    out.pass = out.error.is_none()
        && out.even
        && out.positive == out.negative
        && out.pairing_discrepancy == 0
        && sampling_residual <= 1e-12 * u.coefficient_scale().max(1.0);
    out
}

pub fn scan_eigenspace(
    torus: &TorusShape,
    space: &Eigenspace,
    cfg: &ParityScanConfig,
    rng: &mut ChaCha8Rng,
) -> EigenspaceScan {
    let mut out = EigenspaceScan {
        lambda: space.eigenvalue,
        multiplicity: space.multiplicity(),
        vector: None,
        basis_check: false,
        error: None,
        functions: Vec::new(),
        pass: false,
    };
    let v = match antisymmetry_vector(space, torus) {
        Ok(v) => v,
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    out.vector = Some(v);
    out.basis_check = true;
    for _ in 0..cfg.samples_per_eigenspace {
        let u = Eigenfunction::random(*torus, space.clone(), rng);
        out.functions.push(check_function(&u, &v, cfg));
    }
    out.pass = out.functions.iter().all(|f| f.pass);
    out
}

/// Runs the check on every non-zero eigenvalue up to `lambda_max`.
pub fn parity_scan(
    torus: &TorusShape,
    lambda_max: Rational,
    cfg: &ParityScanConfig,
) -> Result<ParityScanReport, ScanError> {
    let regime = ParityRegime::of(torus)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let eigenspaces: Vec<EigenspaceScan> = enumerate_eigenspaces(torus, lambda_max)?
        .iter()
        .filter(|s| !s.eigenvalue.is_zero())
        .map(|s| scan_eigenspace(torus, s, cfg, &mut rng))
        .collect();
    let functions_checked = eigenspaces.iter().map(|e| e.functions.len()).sum();
    let failures = eigenspaces
        .iter()
        .map(|e| {
            if e.vector.is_none() {
                1
            } else {
                e.functions.iter().filter(|f| !f.pass).count()
            }
        })
        .sum();
    Ok(ParityScanReport {
        regime,
        eigenspaces,
        functions_checked,
        failures,
        pass: failures == 0,
    })
}

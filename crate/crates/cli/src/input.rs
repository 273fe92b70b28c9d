//! Parsing of eigenfunction files and construction specs.

use std::path::Path;

use serde::Deserialize;
use torus_nodal::construct::{default_epsilon, make_construction, ConstructError, OddConstruction};
use torus_nodal::spectra::{
    BasisFunction, Eigenfunction, Eigenvalue, Family, Rational, TorusShape,
};

use crate::CliError;

/// `{"lambda": "a/b", "coeffs": [{"family": "cc", "m": 1, "n": 1, "c": 1.0}]}`
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EigenfunctionFile {
    lambda: String,
    coeffs: Vec<Term>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Term {
    family: Family,
    m: u64,
    n: u64,
    c: f64,
}

pub fn parse_rational(s: &str, what: &str) -> Result<Rational, CliError> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| CliError::Usage(format!("{what} must be \"a/b\" or an integer, got {s:?}")))
}

/// Inline JSON if the argument starts with `{`, a file path otherwise.
pub fn load_eigenfunction(arg: &str, torus: TorusShape) -> Result<Eigenfunction, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| CliError::Io(format!("{arg}: {e}")))?
    };
    let file: EigenfunctionFile =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("eigenfunction: {e}")))?;
    let terms = file
        .coeffs
        .iter()
        .map(|t| Ok((BasisFunction::new(t.family, t.m, t.n)?, t.c)))
        .collect::<Result<Vec<_>, torus_nodal::spectra::SpectraError>>()?;
    let u = Eigenfunction::from_terms(torus, &terms)?;

    let declared_matches = match u.eigenspace.eigenvalue {
        Eigenvalue::Exact(actual) => parse_rational(&file.lambda, "lambda")? == actual,
        Eigenvalue::Irrational { approx, .. } => {
            let declared: f64 = file.lambda.trim().parse().map_err(|_| {
                CliError::Usage(format!("lambda {:?} is not a number", file.lambda))
            })?;
            (declared - approx).abs() <= 1e-9 * approx.max(1.0)
        }
    };
    if !declared_matches {
        return Err(CliError::Usage(format!(
            "declared lambda {} but the terms have eigenvalue {}",
            file.lambda, u.eigenspace.eigenvalue
        )));
    }
    Ok(u)
}

/// `m,n,k` or `m,n,k,eps`.
pub fn parse_construction(spec: &str) -> Result<OddConstruction, CliError> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let bad = || {
        CliError::Usage(format!(
            "construction must be \"m,n,k[,eps]\", got {spec:?}"
        ))
    };
    if !(3..=4).contains(&parts.len()) {
        return Err(bad());
    }
    let int = |s: &str| s.parse::<u64>().map_err(|_| bad());
    let (m, n, k) = (int(parts[0])?, int(parts[1])?, int(parts[2])?);
    let eps = match parts.get(3) {
        Some(e) => e.parse::<f64>().map_err(|_| bad())?,
        None => default_epsilon(m.max(1), n.max(1), k.max(1)),
    };
    build_construction(m, n, k, eps)
}

pub fn build_construction(m: u64, n: u64, k: u64, eps: f64) -> Result<OddConstruction, CliError> {
    make_construction(m, n, k, eps).map_err(CliError::from)
}

impl From<ConstructError> for CliError {
    fn from(e: ConstructError) -> Self {
        match e {
            ConstructError::Nodal(n) => n.into(),
            ConstructError::KTooSmall(_)
            | ConstructError::ZeroIndex
            | ConstructError::EpsilonOutOfRange(_)
            | ConstructError::Spectra(_)
            | ConstructError::Overflow => CliError::Usage(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

//! The torus `(ℝ/2πℤ) × (ℝ/2ρπℤ)`, its closed-form spectrum, and evaluation
//! of eigenfunctions.
//!
//! The Laplace eigenvalues are `λ = m² + n²/ρ²` with the basis
//! `cos/sin(m x₁) · cos/sin(n x₂/ρ)`. When `ρ² = a/b` is rational, `a·λ` is
//! the integer `a m² + b n²`, and eigenspaces are grouped by that integer key
//! so that equal eigenvalues are merged exactly.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;

use num_rational::Ratio;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{isqrt, representations, QuadraticForm, Representation};

pub type Rational = Ratio<u64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("invalid ρ² = {0}: numerator and denominator must be positive")]
    InvalidRhoSq(String),
    #[error("invalid ρ = {0}: must be positive and finite")]
    InvalidRho(f64),
    #[error("malformed torus spec {0:?}: expected \"a/b\" or \"irrational:<rho>\"")]
    MalformedSpec(String),
    #[error("{family}_{{{m},{n}}} is identically zero")]
    ZeroBasisFunction { family: Family, m: u64, n: u64 },
    #[error("lambda_max must be positive")]
    NonPositiveLambdaMax,
    #[error("{0} is not an eigenvalue of this torus")]
    NotAnEigenvalue(String),
    #[error("eigenvalue lookup by value is not available in irrational mode; use an index pair")]
    IrrationalLookup,
    #[error("terms belong to different eigenvalues ({0} and {1})")]
    MixedEigenvalues(String, String),
    #[error("eigenfunction needs at least one term")]
    NoTerms,
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("all coefficients are zero")]
    ZeroCoefficients,
    #[error("coefficients must be finite")]
    NonFiniteCoefficient,
    #[error("grid resolution {n1}×{n2} is below the minimum of 4")]
    ResolutionTooSmall { n1: usize, n2: usize },
    #[error("integer overflow in eigenvalue arithmetic")]
    Overflow,
}

/// How `ρ²` is known.
///
/// Irrationality cannot be decided from a float, so the irrational mode is a
/// declaration: every index pair is treated as its own eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum RhoSquared {
    Rational { num: u64, den: u64 },
    Irrational { rho: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorusShape {
    rho_sq: RhoSquared,
    rho: f64,
}

impl TorusShape {
    /// The square torus, `ρ = 1`.
    pub fn square() -> Self {
        Self {
            rho_sq: RhoSquared::Rational { num: 1, den: 1 },
            rho: 1.0,
        }
    }

    pub fn rational(num: u64, den: u64) -> Result<Self, SpectraError> {
        if num == 0 || den == 0 {
            return Err(SpectraError::InvalidRhoSq(format!("{num}/{den}")));
        }
        let r = Rational::new(num, den);
        let (num, den) = (*r.numer(), *r.denom());
        Ok(Self {
            rho_sq: RhoSquared::Rational { num, den },
            rho: (num as f64 / den as f64).sqrt(),
        })
    }

    pub fn irrational(rho: f64) -> Result<Self, SpectraError> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(SpectraError::InvalidRho(rho));
        }
        Ok(Self {
            rho_sq: RhoSquared::Irrational { rho },
            rho,
        })
    }

    /// Parses `"a/b"`, `"a"`, or `"irrational:<rho>"`.
    pub fn parse(spec: &str) -> Result<Self, SpectraError> {
        let spec = spec.trim();
        let malformed = || SpectraError::MalformedSpec(spec.to_string());
        if let Some(rest) = spec.strip_prefix("irrational:") {
            let rho: f64 = rest.trim().parse().map_err(|_| malformed())?;
            return Self::irrational(rho);
        }
        let (num, den) = match spec.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (spec, "1"),
        };
        let num: u64 = num.parse().map_err(|_| malformed())?;
        let den: u64 = den.parse().map_err(|_| malformed())?;
        Self::rational(num, den)
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn rho_sq(&self) -> RhoSquared {
        self.rho_sq
    }

    /// `ρ²` as an exact fraction, if known.
    pub fn rho_sq_exact(&self) -> Option<Rational> {
        match self.rho_sq {
            RhoSquared::Rational { num, den } => Some(Rational::new_raw(num, den)),
            RhoSquared::Irrational { .. } => None,
        }
    }

    pub fn is_square(&self) -> bool {
        matches!(self.rho_sq, RhoSquared::Rational { num: 1, den: 1 })
    }

    pub fn period_x1(&self) -> f64 {
        TAU
    }

    pub fn period_x2(&self) -> f64 {
        TAU * self.rho
    }

    pub fn area(&self) -> f64 {
        self.period_x1() * self.period_x2()
    }

    /// The form `a m² + b n²` equal to `a·λ` when `ρ² = a/b`.
    pub fn scaled_form(&self) -> Option<QuadraticForm> {
        match self.rho_sq {
            RhoSquared::Rational { num, den } => Some(QuadraticForm {
                alpha: num,
                beta: den,
            }),
            RhoSquared::Irrational { .. } => None,
        }
    }

    pub fn eigenvalue_of(&self, m: u64, n: u64) -> Result<Eigenvalue, SpectraError> {
        match self.scaled_form() {
            Some(form) => {
                let key = form
                    .value(Representation::new(m, n))
                    .map_err(|_| SpectraError::Overflow)?;
                let key = u64::try_from(key).map_err(|_| SpectraError::Overflow)?;
                Ok(Eigenvalue::Exact(Rational::new(key, form.alpha)))
            }
            None => {
                let (mf, nf) = (m as f64, n as f64);
                Ok(Eigenvalue::Irrational {
                    m,
                    n,
                    approx: mf * mf + nf * nf / (self.rho * self.rho),
                })
            }
        }
    }
}

impl fmt::Display for TorusShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rho_sq {
            RhoSquared::Rational { num, den } => write!(f, "{num}/{den}"),
            RhoSquared::Irrational { rho } => write!(f, "irrational:{rho}"),
        }
    }
}

/// An eigenvalue: exact when `ρ²` is rational, otherwise identified by its
/// unique index pair.
#[derive(Debug, Clone, Copy)]
pub enum Eigenvalue {
    Exact(Rational),
    Irrational { m: u64, n: u64, approx: f64 },
}

impl Eigenvalue {
    pub fn value(&self) -> f64 {
        match *self {
            Eigenvalue::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Eigenvalue::Irrational { approx, .. } => approx,
        }
    }

    pub fn exact(&self) -> Option<Rational> {
        match *self {
            Eigenvalue::Exact(r) => Some(r),
            Eigenvalue::Irrational { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            Eigenvalue::Exact(r) => *r.numer() == 0,
            Eigenvalue::Irrational { m, n, .. } => m == 0 && n == 0,
        }
    }
}

impl PartialEq for Eigenvalue {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Eigenvalue::Exact(a), Eigenvalue::Exact(b)) => a == b,
            (Eigenvalue::Irrational { m, n, .. }, Eigenvalue::Irrational { m: m2, n: n2, .. }) => {
                m == m2 && n == n2
            }
            _ => false,
        }
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eigenvalue::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Eigenvalue::Irrational { m, n, approx } => write!(f, "λ({m},{n})≈{approx}"),
        }
    }
}

impl Serialize for Eigenvalue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Exact {
            num: u64,
            den: u64,
        }
        #[derive(Serialize)]
        struct Symbolic {
            m: u64,
            n: u64,
            approx: f64,
        }
        match *self {
            Eigenvalue::Exact(r) => Exact {
                num: *r.numer(),
                den: *r.denom(),
            }
            .serialize(s),
            Eigenvalue::Irrational { m, n, approx } => Symbolic { m, n, approx }.serialize(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Cc,
    Cs,
    Sc,
    Ss,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Cc, Family::Cs, Family::Sc, Family::Ss];

    /// Whether the `x₁` factor is a sine.
    pub fn sine_in_x1(self) -> bool {
        matches!(self, Family::Sc | Family::Ss)
    }

    pub fn sine_in_x2(self) -> bool {
        matches!(self, Family::Cs | Family::Ss)
    }

    pub fn from_factors(sine_x1: bool, sine_x2: bool) -> Family {
        match (sine_x1, sine_x2) {
            (false, false) => Family::Cc,
            (false, true) => Family::Cs,
            (true, false) => Family::Sc,
            (true, true) => Family::Ss,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Cc => "cc",
            Family::Cs => "cs",
            Family::Sc => "sc",
            Family::Ss => "ss",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cc" => Ok(Family::Cc),
            "cs" => Ok(Family::Cs),
            "sc" => Ok(Family::Sc),
            "ss" => Ok(Family::Ss),
            other => Err(format!("unknown family {other:?}")),
        }
    }
}

#[inline]
fn trig(sine: bool, angle: f64) -> f64 {
    if sine {
        angle.sin()
    } else {
        angle.cos()
    }
}

/// `u^{family}_{m,n}(x₁, x₂)`; never identically zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisFunction {
    pub family: Family,
    pub m: u64,
    pub n: u64,
}

impl BasisFunction {
    pub fn new(family: Family, m: u64, n: u64) -> Result<Self, SpectraError> {
        if (family.sine_in_x1() && m == 0) || (family.sine_in_x2() && n == 0) {
            return Err(SpectraError::ZeroBasisFunction { family, m, n });
        }
        Ok(Self { family, m, n })
    }

    pub fn cc(m: u64, n: u64) -> Self {
        Self {
            family: Family::Cc,
            m,
            n,
        }
    }

    /// Factor in `x₁` at the given coordinate.
    #[inline]
    pub fn factor_x1(&self, x1: f64) -> f64 {
        trig(self.family.sine_in_x1(), self.m as f64 * x1)
    }

    /// Factor in `x₂`, where `t = x₂/ρ`.
    #[inline]
    pub fn factor_x2(&self, t: f64) -> f64 {
        trig(self.family.sine_in_x2(), self.n as f64 * t)
    }

    pub fn eval(&self, x1: f64, x2: f64, rho: f64) -> f64 {
        self.factor_x1(x1) * self.factor_x2(x2 / rho)
    }

    /// All non-zero basis functions for one index pair, in family order.
    pub fn for_pair(m: u64, n: u64) -> impl Iterator<Item = BasisFunction> {
        Family::ALL
            .into_iter()
            .filter_map(move |family| BasisFunction::new(family, m, n).ok())
    }
}

impl fmt::Display for BasisFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u^{}_{{{},{}}}", self.family, self.m, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenspace {
    #[serde(rename = "lambda")]
    pub eigenvalue: Eigenvalue,
    pub multiplicity: usize,
    pub basis: Vec<BasisFunction>,
}

impl Eigenspace {
    fn from_pairs(eigenvalue: Eigenvalue, pairs: &[Representation]) -> Self {
        let basis: Vec<_> = pairs
            .iter()
            .flat_map(|r| BasisFunction::for_pair(r.m, r.n))
            .collect();
        Self {
            eigenvalue,
            multiplicity: basis.len(),
            basis,
        }
    }

    pub fn multiplicity(&self) -> usize {
        self.basis.len()
    }

    /// Distinct index pairs appearing in the basis.
    pub fn pairs(&self) -> Vec<Representation> {
        let mut out: Vec<_> = self
            .basis
            .iter()
            .map(|b| Representation::new(b.m, b.n))
            .collect();
        out.dedup();
        out
    }

    pub fn position(&self, b: &BasisFunction) -> Option<usize> {
        self.basis.iter().position(|x| x == b)
    }
}

/// All eigenspaces with eigenvalue `≤ lambda_max`, ascending, including the
/// constants at `λ = 0`.
pub fn enumerate_eigenspaces(
    torus: &TorusShape,
    lambda_max: Rational,
) -> Result<Vec<Eigenspace>, SpectraError> {
    if *lambda_max.numer() == 0 {
        return Err(SpectraError::NonPositiveLambdaMax);
    }
    match torus.scaled_form() {
        Some(form) => {
            // key = a m² + b n² ≤ a · lambda_max
            let bound =
                (form.alpha as u128 * *lambda_max.numer() as u128) / *lambda_max.denom() as u128;
            let mut groups: BTreeMap<u128, Vec<Representation>> = BTreeMap::new();
            let m_max = isqrt(bound / form.alpha as u128) as u64;
            for m in 0..=m_max {
                let rest = bound - form.alpha as u128 * m as u128 * m as u128;
                let n_max = isqrt(rest / form.beta as u128) as u64;
                for n in 0..=n_max {
                    let rep = Representation::new(m, n);
                    let key = form.value(rep).map_err(|_| SpectraError::Overflow)?;
                    groups.entry(key).or_default().push(rep);
                }
            }
            groups
                .into_iter()
                .map(|(key, mut pairs)| {
                    pairs.sort();
                    let key = u64::try_from(key).map_err(|_| SpectraError::Overflow)?;
                    let ev = Eigenvalue::Exact(Rational::new(key, form.alpha));
                    Ok(Eigenspace::from_pairs(ev, &pairs))
                })
                .collect()
        }
        None => {
            let limit = *lambda_max.numer() as f64 / *lambda_max.denom() as f64;
            let rho = torus.rho();
            let mut out = Vec::new();
            let m_max = limit.sqrt().floor() as u64;
            for m in 0..=m_max {
                let rest = limit - (m * m) as f64;
                let n_max = (rest.max(0.0).sqrt() * rho).floor() as u64;
                for n in 0..=n_max {
                    let ev = torus.eigenvalue_of(m, n)?;
                    if ev.value() <= limit {
                        out.push(Eigenspace::from_pairs(ev, &[Representation::new(m, n)]));
                    }
                }
            }
            out.sort_by(|a, b| {
                a.eigenvalue
                    .value()
                    .total_cmp(&b.eigenvalue.value())
                    .then_with(|| a.basis[0].cmp(&b.basis[0]))
            });
            Ok(out)
        }
    }
}

/// The eigenspace of an exact eigenvalue on a rational torus.
pub fn eigenspace_at(torus: &TorusShape, lambda: Rational) -> Result<Eigenspace, SpectraError> {
    let form = torus.scaled_form().ok_or(SpectraError::IrrationalLookup)?;
    let not_eigen =
        || SpectraError::NotAnEigenvalue(format!("{}/{}", lambda.numer(), lambda.denom()));
    let scaled = form.alpha as u128 * *lambda.numer() as u128;
    let den = *lambda.denom() as u128;
    if !scaled.is_multiple_of(den) {
        return Err(not_eigen());
    }
    let pairs = representations(form, scaled / den);
    if pairs.is_empty() {
        return Err(not_eigen());
    }
    Ok(Eigenspace::from_pairs(Eigenvalue::Exact(lambda), &pairs))
}

/// The full eigenspace containing the index pair `(m, n)`.
pub fn eigenspace_of_pair(torus: &TorusShape, m: u64, n: u64) -> Result<Eigenspace, SpectraError> {
    let ev = torus.eigenvalue_of(m, n)?;
    match ev {
        Eigenvalue::Exact(r) => eigenspace_at(torus, r),
        Eigenvalue::Irrational { .. } => {
            Ok(Eigenspace::from_pairs(ev, &[Representation::new(m, n)]))
        }
    }
}

/// A point of the torus, reduced into `[0, 2π) × [0, 2ρπ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorusPoint {
    pub x1: f64,
    pub x2: f64,
}

fn reduce(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    // rem_euclid can round up to the period itself for tiny negative inputs
    if r >= period {
        0.0
    } else {
        r
    }
}

impl TorusPoint {
    pub fn new(torus: &TorusShape, x1: f64, x2: f64) -> Self {
        Self {
            x1: reduce(x1, torus.period_x1()),
            x2: reduce(x2, torus.period_x2()),
        }
    }

    /// Lattice point `(2π·i/n1, 2ρπ·j/n2)`.
    pub fn lattice(torus: &TorusShape, i: usize, j: usize, n1: usize, n2: usize) -> Self {
        Self {
            x1: lattice_coord(torus.period_x1(), i, n1),
            x2: lattice_coord(torus.period_x2(), j, n2),
        }
    }

    /// `x + (d1, d2)` reduced modulo the periods.
    pub fn shifted(&self, torus: &TorusShape, d1: f64, d2: f64) -> Self {
        Self::new(torus, self.x1 + d1, self.x2 + d2)
    }

    pub fn random<R: Rng + ?Sized>(torus: &TorusShape, rng: &mut R) -> Self {
        Self::new(
            torus,
            rng.gen::<f64>() * torus.period_x1(),
            rng.gen::<f64>() * torus.period_x2(),
        )
    }
}

#[inline]
fn lattice_coord(period: f64, i: usize, n: usize) -> f64 {
    period * i as f64 / n as f64
}

/// A real linear combination of one eigenspace's basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenfunction {
    pub torus: TorusShape,
    pub eigenspace: Eigenspace,
    pub coefficients: Vec<f64>,
}

impl Eigenfunction {
    pub fn new(
        torus: TorusShape,
        eigenspace: Eigenspace,
        coefficients: Vec<f64>,
    ) -> Result<Self, SpectraError> {
        if coefficients.len() != eigenspace.multiplicity() {
            return Err(SpectraError::CoefficientCount {
                expected: eigenspace.multiplicity(),
                got: coefficients.len(),
            });
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(SpectraError::NonFiniteCoefficient);
        }
        if coefficients.iter().all(|&c| c == 0.0) {
            return Err(SpectraError::ZeroCoefficients);
        }
        Ok(Self {
            torus,
            eigenspace,
            coefficients,
        })
    }

    /// Builds `Σ c·b` after checking that every `b` has the same eigenvalue.
    pub fn from_terms(
        torus: TorusShape,
        terms: &[(BasisFunction, f64)],
    ) -> Result<Self, SpectraError> {
        let (first, _) = terms.first().ok_or(SpectraError::NoTerms)?;
        let ev = torus.eigenvalue_of(first.m, first.n)?;
        for (b, _) in terms {
            BasisFunction::new(b.family, b.m, b.n)?;
            let other = torus.eigenvalue_of(b.m, b.n)?;
            if other != ev {
                return Err(SpectraError::MixedEigenvalues(
                    ev.to_string(),
                    other.to_string(),
                ));
            }
        }
        let space = eigenspace_of_pair(&torus, first.m, first.n)?;
        let mut coefficients = vec![0.0; space.multiplicity()];
        for (b, c) in terms {
            let idx = space
                .position(b)
                .expect("basis function with matching eigenvalue lies in the eigenspace");
            coefficients[idx] += c;
        }
        Self::new(torus, space, coefficients)
    }

    /// Coefficients drawn uniformly from `[-1, 1]`.
    pub fn random<R: Rng + ?Sized>(torus: TorusShape, eigenspace: Eigenspace, rng: &mut R) -> Self {
        loop {
            let coefficients: Vec<f64> = (0..eigenspace.multiplicity())
                .map(|_| rng.gen_range(-1.0..=1.0))
                .collect();
            if let Ok(u) = Self::new(torus, eigenspace.clone(), coefficients) {
                return u;
            }
        }
    }

    pub fn lambda(&self) -> f64 {
        self.eigenspace.eigenvalue.value()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisFunction, f64)> {
        self.eigenspace
            .basis
            .iter()
            .zip(self.coefficients.iter().copied())
            .filter(|(_, c)| *c != 0.0)
    }

    /// Sum of absolute coefficients, an upper bound for `|u|`.
    pub fn coefficient_scale(&self) -> f64 {
        self.coefficients.iter().map(|c| c.abs()).sum()
    }

    pub fn evaluate(&self, pt: TorusPoint) -> f64 {
        let t = pt.x2 / self.torus.rho();
        let mut acc = 0.0;
        for (b, c) in self.terms() {
            acc += c * (b.factor_x1(pt.x1) * b.factor_x2(t));
        }
        acc
    }

    /// Evaluates at an arbitrary (unreduced) coordinate pair.
    pub fn value_at(&self, x1: f64, x2: f64) -> f64 {
        self.evaluate(TorusPoint::new(&self.torus, x1, x2))
    }

    /// Values on the `n1 × n2` lattice; bit-identical to [`Self::evaluate`]
    /// at every [`TorusPoint::lattice`] point.
    pub fn evaluate_grid(&self, n1: usize, n2: usize) -> Result<Grid, SpectraError> {
        if n1 < 4 || n2 < 4 {
            return Err(SpectraError::ResolutionTooSmall { n1, n2 });
        }
        let rho = self.torus.rho();
        let terms: Vec<(f64, Vec<f64>, Vec<f64>)> = self
            .terms()
            .map(|(b, c)| {
                let fx: Vec<f64> = (0..n1)
                    .map(|i| b.factor_x1(lattice_coord(self.torus.period_x1(), i, n1)))
                    .collect();
                let gy: Vec<f64> = (0..n2)
                    .map(|j| b.factor_x2(lattice_coord(self.torus.period_x2(), j, n2) / rho))
                    .collect();
                (c, fx, gy)
            })
            .collect();
        let mut values = vec![0.0; n1 * n2];
        values.par_chunks_mut(n2).enumerate().for_each(|(i, row)| {
            for (c, fx, gy) in &terms {
                let f = fx[i];
                for (v, g) in row.iter_mut().zip(gy) {
                    *v += c * (f * g);
                }
            }
        });
        Ok(Grid { n1, n2, values })
    }

    /// `max |Δ_h u + λ u|` over the samples, using the 5-point stencil.
    pub fn laplacian_residual(&self, samples: &[TorusPoint], h: f64) -> f64 {
        let lambda = self.lambda();
        samples
            .iter()
            .map(|p| {
                let c = self.evaluate(*p);
                let at = |d1: f64, d2: f64| self.evaluate(p.shifted(&self.torus, d1, d2));
                let lap = (at(h, 0.0) + at(-h, 0.0) - 2.0 * c) / (h * h)
                    + (at(0.0, h) + at(0.0, -h) - 2.0 * c) / (h * h);
                (lap + lambda * c).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Sampled values, row-major with `i` (the `x₁` index) as the row.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub n1: usize,
    pub n2: usize,
    pub values: Vec<f64>,
}

impl Grid {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n2 + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `π`-multiples used when converting exact phases to coordinates.
pub(crate) fn pi_times(num: i64, den: i64) -> f64 {
    PI * num as f64 / den as f64
}

//! Eigenfunctions with an odd number of nodal domains.
//!
//! On the torus with `ρ² = n²/(m²(k²−1))` the functions `cos(m x₁)cos(n x₂/ρ)`
//! and `cos(k m x₁)` share the eigenvalue `k²m²`. Adding a small multiple of
//! the second to the first opens channels at the saddle points of the
//! checkerboard, merging all domains of one sign into one.
//!
//! For the base case `(m, n, k) = (1, 1, 2)` the nodal set inside
//! `R = (0, π) × (0, ρπ)` is, in the coordinates `ξ₁ = −cos x₁`,
//! `ξ₂ = −cos(x₂/ρ)`, the hyperbola `ξ₁ξ₂ + ε(2ξ₁² − 1) = 0`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::nodal::{count_nodal_domains, CountConfig, NodalError, Sign};
use crate::spectra::{
    BasisFunction, Eigenfunction, Rational, SpectraError, TorusPoint, TorusShape,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructError {
    #[error("k must be at least 2 (got {0}); ρ is undefined otherwise")]
    KTooSmall(u64),
    #[error("m and n must be positive")]
    ZeroIndex,
    #[error("branch-quadrant analysis requires 0<ε<1 (got {0})")]
    EpsilonOutOfRange(f64),
    #[error("the curve analysis is only derived for (m, n, k) = (1, 1, 2)")]
    NotBaseCase,
    #[error("point ({0}, {1}) is outside R")]
    OutsideRegion(f64, f64),
    #[error("no nodal crossing found in R")]
    NoCrossing,
    #[error("parameters overflow exact arithmetic")]
    Overflow,
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Nodal(#[from] NodalError),
}

/// `min(0.1, 1/(4kmn))`.
pub fn default_epsilon(m: u64, n: u64, k: u64) -> f64 {
    (1.0 / (4 * k * m * n) as f64).min(0.1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OddConstruction {
    pub m: u64,
    pub n: u64,
    pub k: u64,
    pub epsilon: f64,
    pub torus: TorusShape,
    #[serde(skip)]
    pub u: Eigenfunction,
    pub expected_count: u64,
}

impl OddConstruction {
    pub fn is_base_case(&self) -> bool {
        (self.m, self.n, self.k) == (1, 1, 2)
    }

    /// The perturbation opens negative channels when `cos(kπ/2) = −1`
    /// (`k ≡ 2 mod 4`) and positive ones when `k ≡ 0 mod 4`. For odd `k`
    /// it vanishes at the saddles and no channel opens.
    pub fn channel_sign(&self) -> Option<Sign> {
        match self.k % 4 {
            2 => Some(Sign::Negative),
            0 => Some(Sign::Positive),
            _ => None,
        }
    }
}

/// `u = u^{cc}_{m,n} + ε·u^{cc}_{km,0}` on `ρ² = n²/(m²(k²−1))`.
pub fn make_construction(
    m: u64,
    n: u64,
    k: u64,
    epsilon: f64,
) -> Result<OddConstruction, ConstructError> {
    if k < 2 {
        return Err(ConstructError::KTooSmall(k));
    }
    if m == 0 || n == 0 {
        return Err(ConstructError::ZeroIndex);
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(ConstructError::EpsilonOutOfRange(epsilon));
    }
    let den = m
        .checked_mul(m)
        .zip(k.checked_mul(k))
        .and_then(|(m2, k2)| m2.checked_mul(k2 - 1))
        .ok_or(ConstructError::Overflow)?;
    let num = n.checked_mul(n).ok_or(ConstructError::Overflow)?;
    let rho_sq = Rational::new(num, den);
    let torus = TorusShape::rational(*rho_sq.numer(), *rho_sq.denom())?;
    // m²(k²−1)ρ² = n² holds exactly, so both terms sit at λ = k²m².
    debug_assert_eq!(
        rho_sq * Rational::from_integer(den),
        Rational::from_integer(num)
    );
    let km = k.checked_mul(m).ok_or(ConstructError::Overflow)?;
    let u = Eigenfunction::from_terms(
        torus,
        &[
            (BasisFunction::cc(m, n), 1.0),
            (BasisFunction::cc(km, 0), epsilon),
        ],
    )?;
    Ok(OddConstruction {
        m,
        n,
        k,
        epsilon,
        torus,
        u,
        expected_count: 2 * m * n + 1,
    })
}

/// A point of `[−1, 1]²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XiPoint {
    pub xi1: f64,
    pub xi2: f64,
}

fn in_region(torus: &TorusShape, x1: f64, x2: f64) -> bool {
    x1 > 0.0 && x1 < PI && x2 > 0.0 && x2 < PI * torus.rho()
}

/// `(ξ₁, ξ₂) = (−cos x₁, −cos(x₂/ρ))` on `R = (0, π) × (0, ρπ)`.
pub fn xi_transform(torus: &TorusShape, pt: TorusPoint) -> Result<XiPoint, ConstructError> {
    if !in_region(torus, pt.x1, pt.x2) {
        return Err(ConstructError::OutsideRegion(pt.x1, pt.x2));
    }
    Ok(XiPoint {
        xi1: -pt.x1.cos(),
        xi2: -(pt.x2 / torus.rho()).cos(),
    })
}

pub fn xi_inverse(torus: &TorusShape, xi: XiPoint) -> TorusPoint {
    TorusPoint {
        x1: (-xi.xi1).acos(),
        x2: (-xi.xi2).acos() * torus.rho(),
    }
}

/// Zeros of `u` inside `R` found by linear interpolation along the edges of
/// an `resolution × resolution` lattice whose endpoints change sign.
pub fn extract_zero_points(
    c: &OddConstruction,
    resolution: usize,
) -> Result<Vec<XiPoint>, ConstructError> {
    let grid = c.u.evaluate_grid(resolution, resolution)?;
    let torus = c.torus;
    let coord = |i: usize, j: usize| TorusPoint::lattice(&torus, i, j, resolution, resolution);
    // lattice indices strictly inside R on each axis
    let interior = |i: usize| i >= 1 && 2 * i < resolution;
    let mut points = Vec::new();
    for i in (1..resolution).filter(|&i| interior(i)) {
        for j in (1..resolution).filter(|&j| interior(j)) {
            let here = grid.get(i, j);
            for (a, b) in [(i + 1, j), (i, j + 1)] {
                if !(interior(a) && interior(b)) {
                    continue;
                }
                let there = grid.get(a, b);
                if here * there < 0.0 {
                    let t = here / (here - there);
                    let (p, q) = (coord(i, j), coord(a, b));
                    let x1 = p.x1 + t * (q.x1 - p.x1);
                    let x2 = p.x2 + t * (q.x2 - p.x2);
                    points.push(xi_transform(&torus, TorusPoint { x1, x2 })?);
                }
            }
        }
    }
    Ok(points)
}

/// `max |ξ₁ξ₂ + ε(2ξ₁² − 1)|` over the points.
pub fn hyperbola_residual(c: &OddConstruction, points: &[XiPoint]) -> Result<f64, ConstructError> {
    if !c.is_base_case() {
        return Err(ConstructError::NotBaseCase);
    }
    if points.is_empty() {
        return Err(ConstructError::NoCrossing);
    }
    Ok(points
        .iter()
        .map(|p| hyperbola_value(c.epsilon, *p).abs())
        .fold(0.0, f64::max))
}

pub fn hyperbola_value(epsilon: f64, p: XiPoint) -> f64 {
    p.xi1 * p.xi2 + epsilon * (2.0 * p.xi1 * p.xi1 - 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadrantReport {
    pub tolerance: f64,
    pub lower_left: usize,
    pub upper_right: usize,
    /// Points with `ξ₁ξ₂ < 0` beyond the tolerance.
    pub off_diagonal: usize,
    /// Points with `|ξ₁|` or `|ξ₂|` within the tolerance.
    pub excluded: usize,
    /// Largest `min(|ξ₁|, |ξ₂|)` among off-diagonal points.
    pub max_off_diagonal_depth: f64,
    /// Every point satisfies `ξ₁(ξ₂ + 2εξ₁) > 0`, i.e. lies between the
    /// asymptotes `ξ₁ = 0` and `ξ₂ = −2εξ₁` on the side of its branch.
    pub within_asymptote_sectors: bool,
    pub pass: bool,
}

/// Checks that the nodal points occupy the two diagonal open quadrants of
/// `(−1, 1)²` and no others.
pub fn branch_quadrant_check(
    c: &OddConstruction,
    points: &[XiPoint],
    tolerance: f64,
) -> Result<QuadrantReport, ConstructError> {
    if !c.is_base_case() {
        return Err(ConstructError::NotBaseCase);
    }
    if !(c.epsilon > 0.0 && c.epsilon < 1.0) {
        return Err(ConstructError::EpsilonOutOfRange(c.epsilon));
    }
    if points.is_empty() {
        return Err(ConstructError::NoCrossing);
    }
    let mut report = QuadrantReport {
        tolerance,
        lower_left: 0,
        upper_right: 0,
        off_diagonal: 0,
        excluded: 0,
        max_off_diagonal_depth: 0.0,
        within_asymptote_sectors: true,
        pass: false,
    };
    for p in points {
        if p.xi1 * (p.xi2 + 2.0 * c.epsilon * p.xi1) <= 0.0 {
            report.within_asymptote_sectors = false;
        }
        if p.xi1.abs() <= tolerance || p.xi2.abs() <= tolerance {
            report.excluded += 1;
        } else if p.xi1 < 0.0 && p.xi2 < 0.0 {
            report.lower_left += 1;
        } else if p.xi1 > 0.0 && p.xi2 > 0.0 {
            report.upper_right += 1;
        } else {
            report.off_diagonal += 1;
            report.max_off_diagonal_depth = report
                .max_off_diagonal_depth
                .max(p.xi1.abs().min(p.xi2.abs()));
        }
    }
    report.pass = report.lower_left > 0 && report.upper_right > 0 && report.off_diagonal == 0;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReflectionResiduals {
    /// `max |u(2π − x₁, x₂) − u(x₁, x₂)|`
    pub x1: f64,
    /// `max |u(x₁, 2ρπ − x₂) − u(x₁, x₂)|`
    pub x2: f64,
}

pub fn reflection_symmetry_check(
    u: &Eigenfunction,
    samples: usize,
    seed: u64,
) -> ReflectionResiduals {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let torus = u.torus;
    let mut out = ReflectionResiduals { x1: 0.0, x2: 0.0 };
    for _ in 0..samples {
        let p = TorusPoint::random(&torus, &mut rng);
        let here = u.evaluate(p);
        let r1 = u.value_at(torus.period_x1() - p.x1, p.x2);
        let r2 = u.value_at(p.x1, torus.period_x2() - p.x2);
        out.x1 = out.x1.max((r1 - here).abs());
        out.x2 = out.x2.max((r2 - here).abs());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OddCountReport {
    pub expected_count: u64,
    pub actual_count: usize,
    pub positive: usize,
    pub negative: usize,
    pub resolution: usize,
    pub history: Vec<(usize, usize)>,
    pub pass: bool,
}

/// Counts the domains of the construction and compares with `2mn + 1`,
/// one of them carrying the channel sign.
pub fn verify_odd_count(
    c: &OddConstruction,
    cfg: &CountConfig,
) -> Result<OddCountReport, ConstructError> {
    let r = count_nodal_domains(&c.u, cfg)?;
    let positive = r.decomposition.count_with_sign(Sign::Positive);
    let negative = r.decomposition.count_with_sign(Sign::Negative);
    let two_mn = (2 * c.m * c.n) as usize;
    let signs_ok = match c.channel_sign() {
        Some(Sign::Negative) => negative == 1 && positive == two_mn,
        Some(Sign::Positive) => positive == 1 && negative == two_mn,
        _ => positive.min(negative) == 1,
    };
    Ok(OddCountReport {
        expected_count: c.expected_count,
        actual_count: r.count,
        positive,
        negative,
        resolution: r.resolution,
        history: r.history,
        pass: r.count as u64 == c.expected_count && signs_ok,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructionParams {
    pub m: u64,
    pub n: u64,
    pub k: u64,
    pub epsilon: f64,
    pub rho_sq: String,
    pub lambda: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructionResiduals {
    pub reflection_x1: f64,
    pub reflection_x2: f64,
    pub hyperbola: Option<f64>,
}

/// Everything known about one construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructionReport {
    pub params: ConstructionParams,
    pub expected_count: u64,
    pub actual_count: usize,
    pub count: OddCountReport,
    pub residuals: ConstructionResiduals,
    pub quadrants: Option<QuadrantReport>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveCheckConfig {
    pub resolution: usize,
    pub residual_tolerance: f64,
    pub quadrant_tolerance: f64,
    pub reflection_samples: usize,
    pub seed: u64,
}

impl Default for CurveCheckConfig {
    fn default() -> Self {
        Self {
            resolution: 2048,
            residual_tolerance: 1e-3,
            quadrant_tolerance: 1e-3,
            reflection_samples: 1000,
            seed: 0,
        }
    }
}

/// Counts, reflection residuals and, for the base case, the curve checks.
pub fn run_construction(
    c: &OddConstruction,
    count_cfg: &CountConfig,
    curve_cfg: &CurveCheckConfig,
) -> Result<ConstructionReport, ConstructError> {
    let count = verify_odd_count(c, count_cfg)?;
    let refl = reflection_symmetry_check(&c.u, curve_cfg.reflection_samples, curve_cfg.seed);
    let (hyperbola, quadrants) = if c.is_base_case() {
        let pts = extract_zero_points(c, curve_cfg.resolution)?;
        (
            Some(hyperbola_residual(c, &pts)?),
            Some(branch_quadrant_check(
                c,
                &pts,
                curve_cfg.quadrant_tolerance,
            )?),
        )
    } else {
        (None, None)
    };
    let pass = count.pass
        && refl.x1 <= 1e-12
        && refl.x2 <= 1e-12
        && hyperbola.is_none_or(|h| h <= curve_cfg.residual_tolerance)
        && quadrants.as_ref().is_none_or(|q| q.pass);
    Ok(ConstructionReport {
        params: ConstructionParams {
            m: c.m,
            n: c.n,
            k: c.k,
            epsilon: c.epsilon,
            rho_sq: c.torus.to_string(),
            lambda: c.k * c.k * c.m * c.m,
        },
        expected_count: c.expected_count,
        actual_count: count.actual_count,
        count,
        residuals: ConstructionResiduals {
            reflection_x1: refl.x1,
            reflection_x2: refl.x2,
            hyperbola,
        },
        quadrants,
        pass,
    })
}

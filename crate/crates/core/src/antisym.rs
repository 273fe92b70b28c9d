//! Translations `v` with `u(x + v) = -u(x)` for every eigenfunction of an
//! eigenspace, their exact verification on the trigonometric basis, and the
//! positive/negative pairing of nodal domains they induce.
//!
//! A translation is stored as exact rational multiples of `π` (first axis)
//! and `ρπ` (second axis). Translating `cos(m x₁)` by `r·π` adds the phase
//! `m·r·π`; whenever every phase is a multiple of `π/2` the action on the
//! basis is a signed permutation and can be checked without rounding.

use num_integer::Integer;
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{two_adic_split, QuadraticForm};
use crate::nodal::{NodalDecomposition, Sign, NO_DOMAIN};
use crate::spectra::{
    pi_times, BasisFunction, Eigenfunction, Eigenspace, Eigenvalue, Family, RhoSquared, TorusPoint,
    TorusShape,
};

pub type Phase = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AntisymError {
    #[error("no parity guarantee for this torus (ρ² = {0})")]
    UnsupportedRegime(String),
    #[error("the constant eigenspace has no anti-symmetry")]
    ZeroEigenvalue,
    #[error("translation phase {phase} on {basis} is not a multiple of π/2")]
    NonQuarterPhase { basis: BasisFunction, phase: String },
    #[error("translation maps {basis} to {sign}·{image}, not to its negative")]
    NotNegated {
        basis: BasisFunction,
        image: BasisFunction,
        sign: i8,
    },
    #[error("shift ({d1}, {d2}) of the vector is not a whole number of grid cells on {n1}×{n2}")]
    GridIncompatible {
        d1: String,
        d2: String,
        n1: usize,
        n2: usize,
    },
    #[error("not an anti-symmetry: domain {from} is mapped onto a domain of the same sign ({to})")]
    SameSign { from: u32, to: u32 },
    #[error("not an anti-symmetry: domain {domain} is split across several images")]
    Inconsistent { domain: u32 },
    #[error("not an anti-symmetry: pairing is not a bijection ({positives} positive, {negatives} negative domains)")]
    NotBijective { positives: usize, negatives: usize },
    #[error("arithmetic: {0}")]
    Arith(#[from] crate::arith::ArithError),
}

fn serialize_phase<S: Serializer>(p: &Phase, s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Frac {
        num: i64,
        den: i64,
    }
    Frac {
        num: *p.numer(),
        den: *p.denom(),
    }
    .serialize(s)
}

/// `v = (v1_over_pi · π, v2_over_rho_pi · ρπ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TranslationVector {
    #[serde(serialize_with = "serialize_phase")]
    pub v1_over_pi: Phase,
    #[serde(serialize_with = "serialize_phase")]
    pub v2_over_rho_pi: Phase,
}

impl TranslationVector {
    pub fn new(v1_over_pi: Phase, v2_over_rho_pi: Phase) -> Self {
        Self {
            v1_over_pi,
            v2_over_rho_pi,
        }
    }

    pub fn doubled(&self) -> Self {
        Self::new(self.v1_over_pi * 2, self.v2_over_rho_pi * 2)
    }

    /// Cartesian components on the given torus.
    pub fn to_real(&self, torus: &TorusShape) -> (f64, f64) {
        (
            pi_times(*self.v1_over_pi.numer(), *self.v1_over_pi.denom()),
            pi_times(*self.v2_over_rho_pi.numer(), *self.v2_over_rho_pi.denom()) * torus.rho(),
        )
    }

    /// The shift in whole cells on an `n1 × n2` lattice, if it is one.
    ///
    /// One cell is `2π/n1` along `x₁` and `2ρπ/n2` along `x₂`, so the shift is
    /// `r·n/2` cells for a phase of `r`.
    pub fn grid_shift(&self, n1: usize, n2: usize) -> Option<(usize, usize)> {
        let cells = |r: Phase, n: usize| -> Option<usize> {
            let c = r * Phase::from_integer(n as i64) / 2;
            c.is_integer()
                .then(|| c.numer().mod_floor(&(n as i64)) as usize)
        };
        Some((cells(self.v1_over_pi, n1)?, cells(self.v2_over_rho_pi, n2)?))
    }

    fn phase_on(&self, b: &BasisFunction) -> (Phase, Phase) {
        (
            self.v1_over_pi * b.m as i64,
            self.v2_over_rho_pi * b.n as i64,
        )
    }
}

/// Which of the proved cases applies to a torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParityRegime {
    /// `ρ²` declared irrational: every eigenvalue has a unique index pair.
    Irrational,
    /// `ρ² = α/β`, both odd with `α + β ≡ 2 (mod 4)`; includes `ρ = 1`.
    OddForm { alpha: u64, beta: u64 },
}

impl ParityRegime {
    pub fn of(torus: &TorusShape) -> Result<Self, AntisymError> {
        match torus.rho_sq() {
            RhoSquared::Irrational { .. } => Ok(ParityRegime::Irrational),
            RhoSquared::Rational { num, den } => {
                let form = QuadraticForm {
                    alpha: num,
                    beta: den,
                };
                if form.satisfies_parity_condition() {
                    Ok(ParityRegime::OddForm {
                        alpha: num,
                        beta: den,
                    })
                } else {
                    Err(AntisymError::UnsupportedRegime(torus.to_string()))
                }
            }
        }
    }
}

/// Picks `v` for the whole eigenspace and checks it on the basis.
///
/// * irrational `ρ²`: `(π/m, 0)`, or `(0, ρπ/n)` when `m = 0`;
/// * `ρ² = α/β` with `α·λ = 2^{2p}·odd`: `(π/2^p, ρπ/2^p)`;
/// * `ρ² = α/β` with `α·λ = 2^{2p+1}·odd`: `(π/2^p, 0)`.
pub fn antisymmetry_vector(
    eigenspace: &Eigenspace,
    torus: &TorusShape,
) -> Result<TranslationVector, AntisymError> {
    if eigenspace.eigenvalue.is_zero() {
        return Err(AntisymError::ZeroEigenvalue);
    }
    let v = match ParityRegime::of(torus)? {
        ParityRegime::Irrational => {
            let (m, n) = match eigenspace.eigenvalue {
                Eigenvalue::Irrational { m, n, .. } => (m, n),
                Eigenvalue::Exact(_) => {
                    let first = eigenspace.basis[0];
                    (first.m, first.n)
                }
            };
            if m > 0 {
                TranslationVector::new(Phase::new(1, m as i64), Phase::from_integer(0))
            } else {
                TranslationVector::new(Phase::from_integer(0), Phase::new(1, n as i64))
            }
        }
        ParityRegime::OddForm { alpha, beta } => {
            let form = QuadraticForm { alpha, beta };
            let first = eigenspace.pairs()[0];
            let scaled = form.value(first)?;
            let scaled = u64::try_from(scaled).map_err(|_| crate::arith::ArithError::Overflow {
                alpha,
                beta,
                m: first.m,
                n: first.n,
            })?;
            // α·λ = 2^t · odd; the vector only depends on t.
            let t = two_adic_split(scaled)?.p;
            let step = Phase::new(1, 1i64 << (t / 2));
            if t % 2 == 0 {
                TranslationVector::new(step, step)
            } else {
                TranslationVector::new(step, Phase::from_integer(0))
            }
        }
    };
    verify_on_basis(eigenspace, &v)?;
    Ok(v)
}

/// `±` times a basis function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SignedBasis {
    pub sign: i8,
    pub basis: BasisFunction,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisAction {
    pub vector: TranslationVector,
    /// `(b, image of b)` in eigenspace basis order.
    pub entries: Vec<(BasisFunction, SignedBasis)>,
}

impl BasisAction {
    pub fn is_negative_identity(&self) -> bool {
        self.entries
            .iter()
            .all(|(b, img)| img.basis == *b && img.sign == -1)
    }

    pub fn is_identity(&self) -> bool {
        self.entries
            .iter()
            .all(|(b, img)| img.basis == *b && img.sign == 1)
    }

    /// Applies `self` after `first`, entry by entry.
    pub fn after(&self, first: &BasisAction) -> Option<BasisAction> {
        let entries = first
            .entries
            .iter()
            .map(|(b, img)| {
                let (_, next) = self.entries.iter().find(|(src, _)| *src == img.basis)?;
                Some((
                    *b,
                    SignedBasis {
                        sign: img.sign * next.sign,
                        basis: next.basis,
                    },
                ))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(BasisAction {
            vector: TranslationVector::new(
                self.vector.v1_over_pi + first.vector.v1_over_pi,
                self.vector.v2_over_rho_pi + first.vector.v2_over_rho_pi,
            ),
            entries,
        })
    }
}

/// `trig(θ + q·π/2)` as `sign · trig'(θ)`.
fn quarter_turn(sine: bool, q: i64) -> (bool, i8) {
    match (sine, q.rem_euclid(4)) {
        (false, 0) => (false, 1),
        (false, 1) => (true, -1),
        (false, 2) => (false, -1),
        (false, _) => (true, 1),
        (true, 0) => (true, 1),
        (true, 1) => (false, 1),
        (true, 2) => (true, -1),
        (true, _) => (false, -1),
    }
}

/// Image of one basis function under translation by `v`.
pub fn translate_basis(
    b: &BasisFunction,
    v: &TranslationVector,
) -> Result<SignedBasis, AntisymError> {
    let (phi1, phi2) = v.phase_on(b);
    let quarters = |phi: Phase| -> Result<i64, AntisymError> {
        let q = phi * 2;
        if q.is_integer() {
            Ok(*q.numer())
        } else {
            Err(AntisymError::NonQuarterPhase {
                basis: *b,
                phase: format!("{phi}π"),
            })
        }
    };
    let (s1, sign1) = quarter_turn(b.family.sine_in_x1(), quarters(phi1)?);
    let (s2, sign2) = quarter_turn(b.family.sine_in_x2(), quarters(phi2)?);
    Ok(SignedBasis {
        sign: sign1 * sign2,
        basis: BasisFunction {
            family: Family::from_factors(s1, s2),
            m: b.m,
            n: b.n,
        },
    })
}

/// Exact action of translation by `v` on every basis function.
pub fn basis_action(
    eigenspace: &Eigenspace,
    v: &TranslationVector,
) -> Result<BasisAction, AntisymError> {
    let entries = eigenspace
        .basis
        .iter()
        .map(|b| Ok((*b, translate_basis(b, v)?)))
        .collect::<Result<_, AntisymError>>()?;
    Ok(BasisAction {
        vector: *v,
        entries,
    })
}

/// Succeeds iff translation by `v` negates every basis function exactly.
pub fn verify_on_basis(
    eigenspace: &Eigenspace,
    v: &TranslationVector,
) -> Result<BasisAction, AntisymError> {
    let action = basis_action(eigenspace, v)?;
    if let Some((b, img)) = action
        .entries
        .iter()
        .find(|(b, img)| !(img.basis == *b && img.sign == -1))
    {
        return Err(AntisymError::NotNegated {
            basis: *b,
            image: img.basis,
            sign: img.sign,
        });
    }
    Ok(action)
}

/// `max |u(x + v) + u(x)|` over seeded uniform samples.
pub fn verify_by_sampling(
    u: &Eigenfunction,
    v: &TranslationVector,
    samples: usize,
    seed: u64,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (d1, d2) = v.to_real(&u.torus);
    (0..samples)
        .map(|_| {
            let p = TorusPoint::random(&u.torus, &mut rng);
            (u.evaluate(p.shifted(&u.torus, d1, d2)) + u.evaluate(p)).abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DomainPair {
    pub positive: u32,
    pub negative: u32,
    pub positive_cells: usize,
    pub negative_cells: usize,
    pub discrepancy: usize,
}

/// The bijection positive → negative domains induced by `x ↦ x + v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DomainPairing {
    pub shift_cells: (usize, usize),
    pub pairs: Vec<DomainPair>,
    /// Non-boundary cells whose image is a boundary cell.
    pub unmatched_cells: usize,
}

impl DomainPairing {
    pub fn total_discrepancy(&self) -> usize {
        self.pairs.iter().map(|p| p.discrepancy).sum()
    }
}

/// Matches every domain with the domain its translate lands in.
///
/// The shift must be a whole number of cells. Translation maps the positive
/// set onto the negative set, so restricted to positive domains it must be a
/// bijection onto the negative ones.
pub fn pair_domains(
    decomp: &NodalDecomposition,
    v: &TranslationVector,
) -> Result<DomainPairing, AntisymError> {
    let (n1, n2) = (decomp.n1, decomp.n2);
    let (d1, d2) = v
        .grid_shift(n1, n2)
        .ok_or_else(|| AntisymError::GridIncompatible {
            d1: format!("{}", v.v1_over_pi * Phase::from_integer(n1 as i64) / 2),
            d2: format!("{}", v.v2_over_rho_pi * Phase::from_integer(n2 as i64) / 2),
            n1,
            n2,
        })?;
    let k = decomp.domain_count();
    let mut image = vec![NO_DOMAIN; k];
    let mut unmatched = 0;
    for i in 0..n1 {
        let si = (i + d1) % n1;
        for j in 0..n2 {
            let a = decomp.label(i, j);
            if a == NO_DOMAIN {
                continue;
            }
            let b = decomp.label(si, (j + d2) % n2);
            if b == NO_DOMAIN {
                unmatched += 1;
                continue;
            }
            if decomp.domain_signs[a as usize] == decomp.domain_signs[b as usize] {
                return Err(AntisymError::SameSign { from: a, to: b });
            }
            let slot = &mut image[a as usize];
            if *slot == NO_DOMAIN {
                *slot = b;
            } else if *slot != b {
                return Err(AntisymError::Inconsistent { domain: a });
            }
        }
    }
    let positives: Vec<u32> = (0..k as u32)
        .filter(|&d| decomp.domain_signs[d as usize] == Sign::Positive)
        .collect();
    let negatives = k - positives.len();
    let mut hit = vec![false; k];
    let mut pairs = Vec::with_capacity(positives.len());
    for &p in &positives {
        let q = image[p as usize];
        if q == NO_DOMAIN || hit[q as usize] {
            return Err(AntisymError::NotBijective {
                positives: positives.len(),
                negatives,
            });
        }
        hit[q as usize] = true;
        let (pc, nc) = (
            decomp.domain_cell_counts[p as usize],
            decomp.domain_cell_counts[q as usize],
        );
        pairs.push(DomainPair {
            positive: p,
            negative: q,
            positive_cells: pc,
            negative_cells: nc,
            discrepancy: pc.abs_diff(nc),
        });
    }
    if positives.len() != negatives {
        return Err(AntisymError::NotBijective {
            positives: positives.len(),
            negatives,
        });
    }
    Ok(DomainPairing {
        shift_cells: (d1, d2),
        pairs,
        unmatched_cells: unmatched,
    })
}

//! Exact integer arithmetic behind the eigenvalue structure of rectangular
//! flat tori: 2-adic valuations, representations by `αm² + βn²`, and the
//! parity decomposition that drives the choice of anti-symmetry vector.
//!
//! Everything here is exact `u64`/`u128` arithmetic. Representations are
//! found by a plain scan over `m`, which doubles as the brute-force oracle.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("no valuation of zero")]
    Zero,
    #[error("zero representation")]
    ZeroRepresentation,
    #[error("α,β must be odd with α+β ≡ 2 mod 4 (got α={alpha}, β={beta})")]
    InvalidForm { alpha: u64, beta: u64 },
    #[error("quadratic form coefficients must be positive")]
    NonPositiveForm,
    #[error("arithmetic overflow evaluating {alpha}·{m}² + {beta}·{n}²")]
    Overflow {
        alpha: u64,
        beta: u64,
        m: u64,
        n: u64,
    },
    #[error("parity lemma violated at (m={m}, n={n}): {reason}")]
    LemmaViolated { m: u64, n: u64, reason: String },
}

/// `N = 2^p · odd_part` with `odd_part` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TwoAdicSplit {
    pub p: u32,
    pub odd_part: u64,
}

impl TwoAdicSplit {
    /// The `q` in `odd_part = 2q + 1`.
    pub fn q(&self) -> u64 {
        (self.odd_part - 1) / 2
    }
}

pub fn two_adic_split(n: u64) -> Result<TwoAdicSplit, ArithError> {
    if n == 0 {
        return Err(ArithError::Zero);
    }
    let p = n.trailing_zeros();
    Ok(TwoAdicSplit {
        p,
        odd_part: n >> p,
    })
}

/// A pair of non-negative indices `(m, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Representation {
    pub m: u64,
    pub n: u64,
}

impl Representation {
    pub fn new(m: u64, n: u64) -> Self {
        Self { m, n }
    }
}

/// The binary form `αm² + βn²`.
///
/// Construction only requires positive coefficients so the same type can
/// describe any rational torus. The parity lemma needs the stronger
/// condition checked by [`QuadraticForm::check_parity_condition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadraticForm {
    pub alpha: u64,
    pub beta: u64,
}

impl QuadraticForm {
    pub const SUM_OF_SQUARES: QuadraticForm = QuadraticForm { alpha: 1, beta: 1 };

    pub fn new(alpha: u64, beta: u64) -> Result<Self, ArithError> {
        if alpha == 0 || beta == 0 {
            return Err(ArithError::NonPositiveForm);
        }
        Ok(Self { alpha, beta })
    }

    /// Both coefficients odd and `α + β ≡ 2 (mod 4)`.
    pub fn satisfies_parity_condition(&self) -> bool {
        self.alpha % 2 == 1 && self.beta % 2 == 1 && (self.alpha % 4 + self.beta % 4) % 4 == 2
    }

    pub fn check_parity_condition(&self) -> Result<(), ArithError> {
        if self.satisfies_parity_condition() {
            Ok(())
        } else {
            Err(ArithError::InvalidForm {
                alpha: self.alpha,
                beta: self.beta,
            })
        }
    }

    pub fn value(&self, rep: Representation) -> Result<u128, ArithError> {
        let overflow = || ArithError::Overflow {
            alpha: self.alpha,
            beta: self.beta,
            m: rep.m,
            n: rep.n,
        };
        let m2 = (rep.m as u128)
            .checked_mul(rep.m as u128)
            .ok_or_else(overflow)?;
        let n2 = (rep.n as u128)
            .checked_mul(rep.n as u128)
            .ok_or_else(overflow)?;
        let a = m2.checked_mul(self.alpha as u128).ok_or_else(overflow)?;
        let b = n2.checked_mul(self.beta as u128).ok_or_else(overflow)?;
        a.checked_add(b).ok_or_else(overflow)
    }
}

/// Largest `r` with `r² ≤ x`.
pub(crate) fn isqrt(x: u128) -> u128 {
    if x < 2 {
        return x;
    }
    let mut r = (x as f64).sqrt() as u128;
    while r.checked_mul(r).is_none_or(|sq| sq > x) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= x) {
        r += 1;
    }
    r
}

/// All `(m, n)` with `m, n ≥ 0` and `α·m² + β·n² = target`, sorted by `m`.
pub fn representations(form: QuadraticForm, target: u128) -> Vec<Representation> {
    let mut out = Vec::new();
    let m_max = isqrt(target / form.alpha as u128);
    for m in 0..=m_max {
        let rest = target - form.alpha as u128 * m * m;
        if !rest.is_multiple_of(form.beta as u128) {
            continue;
        }
        let n2 = rest / form.beta as u128;
        let n = isqrt(n2);
        if n * n == n2 {
            out.push(Representation::new(m as u64, n as u64));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ParityCase {
    ExactlyOneOdd,
    BothOdd,
}

/// Witness that `m = 2^p·m0`, `n = 2^p·n0` with the parity pattern fixed by
/// the 2-adic valuation of the represented value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DecompositionWitness {
    pub p: u32,
    pub m0: u64,
    pub n0: u64,
    pub parity_case: ParityCase,
}

/// Decomposition for the sum of two squares.
pub fn decompose(rep: Representation) -> Result<DecompositionWitness, ArithError> {
    decompose_in(QuadraticForm::SUM_OF_SQUARES, rep)
}

/// Decomposes `rep` relative to the 2-adic valuation of `form(rep)` and
/// checks the parity pattern. An `Err(LemmaViolated)` means the arithmetic
/// claim is false for this input.
pub fn decompose_in(
    form: QuadraticForm,
    rep: Representation,
) -> Result<DecompositionWitness, ArithError> {
    if rep.m == 0 && rep.n == 0 {
        return Err(ArithError::ZeroRepresentation);
    }
    let value = form.value(rep)?;
    let t = value.trailing_zeros();
    let (p, parity_case) = if t % 2 == 0 {
        (t / 2, ParityCase::ExactlyOneOdd)
    } else {
        ((t - 1) / 2, ParityCase::BothOdd)
    };
    let violated = |reason: String| ArithError::LemmaViolated {
        m: rep.m,
        n: rep.n,
        reason,
    };
    if p >= 64 {
        return Err(violated(format!("2-adic exponent {p} out of range")));
    }
    let unit = 1u64 << p;
    if !rep.m.is_multiple_of(unit) || !rep.n.is_multiple_of(unit) {
        return Err(violated(format!("2^{p} does not divide both indices")));
    }
    let (m0, n0) = (rep.m / unit, rep.n / unit);
    let odd_count = (m0 % 2) + (n0 % 2);
    let ok = match parity_case {
        ParityCase::ExactlyOneOdd => odd_count == 1,
        ParityCase::BothOdd => odd_count == 2,
    };
    if !ok {
        return Err(violated(format!(
            "expected {parity_case:?} but m0={m0}, n0={n0}"
        )));
    }
    Ok(DecompositionWitness {
        p,
        m0,
        n0,
        parity_case,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub value: u128,
    pub m: u64,
    pub n: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub alpha: u64,
    pub beta: u64,
    pub lambda_max: u64,
    /// Number of `(m, n) ≠ (0, 0)` pairs checked.
    pub checked: u64,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs [`decompose_in`] on every representation of every value up to
/// `lambda_max`.
///
/// Rather than scanning each value separately, every pair with
/// `αm² + βn² ≤ lambda_max` is visited once, in order of `m` then `n`.
pub fn verify_generalized_lemma(
    form: QuadraticForm,
    lambda_max: u64,
) -> Result<VerificationReport, ArithError> {
    form.check_parity_condition()?;
    let bound = lambda_max as u128;
    let m_max = isqrt(bound / form.alpha as u128) as u64;
    let mut checked = 0;
    let mut violations = Vec::new();
    for m in 0..=m_max {
        let rest = bound - form.alpha as u128 * (m as u128) * (m as u128);
        let n_max = isqrt(rest / form.beta as u128) as u64;
        let n_start = if m == 0 { 1 } else { 0 };
        for n in n_start..=n_max {
            let rep = Representation::new(m, n);
            checked += 1;
            match decompose_in(form, rep) {
                Ok(_) => {}
                Err(ArithError::LemmaViolated { reason, .. }) => violations.push(Violation {
                    value: form.value(rep)?,
                    m,
                    n,
                    reason,
                }),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(VerificationReport {
        alpha: form.alpha,
        beta: form.beta,
        lambda_max,
        checked,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn halve_until_odd(mut n: u64) -> (u32, u64) {
        let mut p = 0;
        while n.is_multiple_of(2) {
            n /= 2;
            p += 1;
        }
        (p, n)
    }

    #[test]
    fn two_adic_split_examples() {
        assert_eq!(
            two_adic_split(1).unwrap(),
            TwoAdicSplit { p: 0, odd_part: 1 }
        );
        assert_eq!(
            two_adic_split(4).unwrap(),
            TwoAdicSplit { p: 2, odd_part: 1 }
        );
        let (p, odd) = halve_until_odd(12);
        assert_eq!((p, odd), (2, 3));
        assert_eq!(
            two_adic_split(12).unwrap(),
            TwoAdicSplit { p, odd_part: odd }
        );
        assert_eq!(two_adic_split(0), Err(ArithError::Zero));
    }

    #[test]
    fn two_adic_split_reconstructs_up_to_a_million() {
        for n in 1..=1_000_000u64 {
            let s = two_adic_split(n).unwrap();
            assert_eq!(s.odd_part % 2, 1);
            assert_eq!(s.odd_part << s.p, n);
        }
    }

    #[test]
    fn representations_examples() {
        let f = QuadraticForm::SUM_OF_SQUARES;
        let reps: Vec<_> = representations(f, 25)
            .into_iter()
            .map(|r| (r.m, r.n))
            .collect();
        assert_eq!(reps, vec![(0, 5), (3, 4), (4, 3), (5, 0)]);
        assert!(representations(f, 3).is_empty());
        assert_eq!(representations(f, 2), vec![Representation::new(1, 1)]);
    }

    #[test]
    fn decompose_examples() {
        let w = decompose(Representation::new(3, 4)).unwrap();
        assert_eq!(
            (w.p, w.m0, w.n0, w.parity_case),
            (0, 3, 4, ParityCase::ExactlyOneOdd)
        );
        let w = decompose(Representation::new(1, 1)).unwrap();
        assert_eq!(
            (w.p, w.m0, w.n0, w.parity_case),
            (0, 1, 1, ParityCase::BothOdd)
        );
        let w = decompose(Representation::new(2, 0)).unwrap();
        assert_eq!(
            (w.p, w.m0, w.n0, w.parity_case),
            (1, 1, 0, ParityCase::ExactlyOneOdd)
        );
        assert_eq!(
            decompose(Representation::new(0, 0)),
            Err(ArithError::ZeroRepresentation)
        );
    }

    #[test]
    fn generalized_lemma_small_scans() {
        let r = verify_generalized_lemma(QuadraticForm::SUM_OF_SQUARES, 1000).unwrap();
        assert!(r.passed());
        assert!(r.checked > 0);
        let r = verify_generalized_lemma(QuadraticForm::new(1, 5).unwrap(), 1000).unwrap();
        assert!(r.passed());
        assert_eq!(
            verify_generalized_lemma(QuadraticForm::new(1, 3).unwrap(), 10),
            Err(ArithError::InvalidForm { alpha: 1, beta: 3 })
        );
    }

    #[test]
    fn parity_condition_is_needed() {
        // 1·1² + 3·1² = 4 = 2²·1 but (1, 1) has two odd entries and no 2-power factor.
        let f = QuadraticForm::new(1, 3).unwrap();
        assert!(matches!(
            decompose_in(f, Representation::new(1, 1)),
            Err(ArithError::LemmaViolated { .. })
        ));
    }

    #[test]
    fn scan_checks_every_pair_once() {
        // Independent count: for each λ ≤ 200 list representations separately.
        let f = QuadraticForm::new(3, 7).unwrap();
        let per_value: usize = (1..=200u128).map(|l| representations(f, l).len()).sum();
        let r = verify_generalized_lemma(f, 200).unwrap();
        assert_eq!(r.checked as usize, per_value);
    }

    #[test]
    fn isqrt_matches_floor_sqrt() {
        for x in 0..10_000u128 {
            let r = isqrt(x);
            assert!(r * r <= x && (r + 1) * (r + 1) > x);
        }
        let big = u64::MAX as u128 * 3;
        let r = isqrt(big);
        assert!(r * r <= big && (r + 1) * (r + 1) > big);
    }

    proptest! {
        #[test]
        fn representations_are_exactly_the_solutions(
            alpha in 1u64..8, beta in 1u64..8, target in 1u128..3000
        ) {
            let f = QuadraticForm::new(alpha, beta).unwrap();
            let reps = representations(f, target);
            let m_max = isqrt(target);
            for m in 0..=m_max as u64 {
                for n in 0..=m_max as u64 {
                    let rep = Representation::new(m, n);
                    let is_solution = f.value(rep).unwrap() == target;
                    prop_assert_eq!(reps.contains(&rep), is_solution);
                }
            }
            prop_assert!(reps.windows(2).all(|w| w[0].m < w[1].m));
        }
    }
}

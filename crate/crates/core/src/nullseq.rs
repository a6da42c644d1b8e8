//! Zero-measure certificates at algebraic ratios.
//!
//! For s = |Σ| and n ≥ 2 let qₙ be the unique positive root of
//! x + x² + … + x^{n−1} = 1/(s−1); it lies strictly between 1/s and
//! 1/(s(1−s^{1−n})). When Σ satisfies condition (*) — it contains
//! {a, a+1, b+1, c+1, b+s, c+s} with b ≠ c — the 2ⁿ⁻¹ collision identities
//! a + Σ(s−1+εᵢ)qₙⁱ = (a+1) + Σ εᵢqₙⁱ collapse the sumset cardinality to
//! |Σₙ| ≤ sⁿ − 2ⁿ⁻¹, so (sⁿ − 2ⁿ⁻¹)·qₙⁿ < 1 certifies λ(K(Σ;qₙ)) = 0.
//! The certificates here verify that inequality directly with certified
//! enclosures instead of relying on the asymptotic threshold n₀.

use crate::rational::{rat_str, Rational};
use crate::ratio::RatioValue;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NullseqError {
    #[error("qn root needs n >= 2, got {0}")]
    BadDepth(u32),
    #[error("qn root needs s >= 2, got {0}")]
    BadCardinality(usize),
    #[error("root of the depth-{n} equation for s = {s} is not a contraction ratio")]
    NotContractive { s: usize, n: u32 },
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("digit set has no condition-(*) witness")]
    NoWitness,
    #[error("refinement cap reached while deciding the certificate at n = {0}")]
    RefinementCap(u32),
}

/// Condition (*) witness: {a, a+1, b+1, c+1, b+s, c+s} ⊆ Σ with b ≠ c.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarConditionWitness {
    #[serde(with = "rat_str")]
    pub a: Rational,
    #[serde(with = "rat_str")]
    pub b: Rational,
    #[serde(with = "rat_str")]
    pub c: Rational,
}

impl StarConditionWitness {
    /// Direct membership re-check of all six required elements.
    pub fn replay(&self, sigma: &crate::sigma::FiniteSigma) -> bool {
        if self.b == self.c {
            return false;
        }
        let s = Rational::from_integer(BigInt::from(sigma.len()));
        let one = Rational::one();
        [
            self.a.clone(),
            &self.a + &one,
            &self.b + &one,
            &self.c + &one,
            &self.b + &s,
            &self.c + &s,
        ]
        .iter()
        .all(|x| sigma.contains(x))
    }
}

/// Zero-measure certificate at the algebraic ratio qₙ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QnCertificate {
    pub n: u32,
    pub s: u64,
    pub q_enclosure: RatioValue,
    /// (sⁿ − 2ⁿ⁻¹) · q̄ⁿ, evaluated at the enclosure's upper endpoint.
    #[serde(with = "rat_str")]
    pub collapsed_bound: Rational,
    pub witness: StarConditionWitness,
}

impl QnCertificate {
    /// Replay the collapsed-cardinality inequality and the enclosure
    /// invariants from the stored numbers alone.
    pub fn replay(&self) -> bool {
        if self.n < 2 || self.s < 2 {
            return false;
        }
        let s_int = BigInt::from(self.s);
        // lower endpoint strictly above 1/s
        let one_over_s = Rational::new(BigInt::one(), s_int.clone());
        if *self.q_enclosure.lower() <= one_over_s {
            return false;
        }
        // polynomial residual sign check: root bracketed
        let target = Rational::new(BigInt::one(), &s_int - BigInt::one());
        let residual = |x: &Rational| qn_polynomial(x, self.n) - &target;
        let rlo = residual(self.q_enclosure.lower());
        let rhi = residual(self.q_enclosure.upper());
        let bracketed = if self.q_enclosure.is_exact() {
            rlo.is_zero()
        } else {
            rlo.is_negative() && !rhi.is_negative()
        };
        if !bracketed {
            return false;
        }
        // collapsed bound replays exactly and is < 1
        let hi = self.q_enclosure.upper();
        let collapsed = Rational::from_integer(s_int.pow(self.n) - BigInt::from(2).pow(self.n - 1));
        let qn = Rational::new(hi.numer().pow(self.n), hi.denom().pow(self.n));
        let bound = collapsed * qn;
        bound == self.collapsed_bound && self.collapsed_bound < Rational::one()
    }
}

/// x + x² + … + x^{n−1}, the left side of the defining equation.
pub fn qn_polynomial(x: &Rational, n: u32) -> Rational {
    let mut acc = Rational::zero();
    let mut xk = x.clone();
    for _ in 1..n {
        acc += &xk;
        xk *= x;
    }
    acc
}

const MAX_REFINE_STEPS: u32 = 1 << 16;

/// Certified enclosure (width ≤ tol) of the unique positive root of
/// x + … + x^{n−1} = 1/(s−1). The root exceeds 1/s; the returned lower
/// endpoint is refined until it does too.
pub fn qn_root(s: usize, n: u32, tol: &Rational) -> Result<RatioValue, NullseqError> {
    if n < 2 {
        return Err(NullseqError::BadDepth(n));
    }
    if s < 2 {
        return Err(NullseqError::BadCardinality(s));
    }
    if !tol.is_positive() {
        return Err(NullseqError::BadTolerance);
    }
    let target = Rational::new(BigInt::one(), BigInt::from(s as i64 - 1));
    if n == 2 {
        // the equation is x = 1/(s−1)
        return RatioValue::exact(target).map_err(|_| NullseqError::NotContractive { s, n });
    }
    let one_over_s = Rational::new(BigInt::one(), BigInt::from(s as i64));
    let estimate = qn_upper_estimate(s, n);
    let mut lo = one_over_s.clone();
    let mut hi = Rational::one();
    debug_assert!(qn_polynomial(&lo, n) < target);
    // p(1) = n−1 > 1/(s−1) for n ≥ 3, s ≥ 2. Refine until the endpoints
    // certify both root bounds: lo > 1/s and hi below the estimate.
    let mut steps = 0;
    while &hi - &lo > *tol || lo <= one_over_s || hi >= estimate {
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        let v = qn_polynomial(&mid, n);
        if v == target {
            return RatioValue::exact(mid).map_err(|_| NullseqError::NotContractive { s, n });
        }
        if v < target {
            lo = mid;
        } else {
            hi = mid;
        }
        steps += 1;
        if steps > MAX_REFINE_STEPS {
            return Err(NullseqError::RefinementCap(n));
        }
    }
    RatioValue::enclosure(lo, hi).map_err(|_| NullseqError::NotContractive { s, n })
}

/// Search Σ for a condition-(*) witness.
///
/// Candidates: a ranges over elements with a+1 ∈ Σ; b and c over
/// W = {w : w+1 ∈ Σ and w+s ∈ Σ} — exhaustive because all six required
/// elements must lie in Σ. Returns the smallest (a, b, c) with the paper's
/// orientation b > c (the roles of b and c are symmetric).
pub fn star_condition_witness(sigma: &crate::sigma::FiniteSigma) -> Option<StarConditionWitness> {
    let one = Rational::one();
    let s = Rational::from_integer(BigInt::from(sigma.len()));
    let a = sigma
        .elements()
        .iter()
        .find(|a| sigma.contains(&(*a + &one)))?
        .clone();
    let candidates: Vec<Rational> = sigma
        .elements()
        .iter()
        .map(|x| x - &one)
        .filter(|w| sigma.contains(&(w + &s)))
        .collect();
    // candidates is ascending; pick lexicographically smallest (b, c) with b > c
    for b in candidates.iter().skip(1) {
        for c in candidates.iter().take_while(|c| *c < b) {
            let w = StarConditionWitness {
                a: a.clone(),
                b: b.clone(),
                c: c.clone(),
            };
            if w.replay(sigma) {
                return Some(w);
            }
        }
    }
    None
}

/// The first `count` certified members of the decreasing null-measure
/// sequence qₙ ↘ 1/s. Depths where (sⁿ − 2ⁿ⁻¹)·q̄ⁿ ≥ 1 are skipped; the
/// enclosure is refined until each comparison is decidable and until
/// consecutive enclosures are strictly separated.
pub fn qn_sequence(
    sigma: &crate::sigma::FiniteSigma,
    count: usize,
    tol: &Rational,
) -> Result<Vec<QnCertificate>, NullseqError> {
    if !tol.is_positive() {
        return Err(NullseqError::BadTolerance);
    }
    let witness = star_condition_witness(sigma).ok_or(NullseqError::NoWitness)?;
    let s = sigma.len();
    let s_big = BigInt::from(s);
    let mut out: Vec<QnCertificate> = Vec::with_capacity(count);
    let mut n = 2u32;
    while out.len() < count {
        if n > 10_000 {
            return Err(NullseqError::RefinementCap(n));
        }
        let collapsed =
            Rational::from_integer(s_big.pow(n) - BigInt::from(2).pow(n - 1));
        let mut cur_tol = tol.clone();
        let decision = loop {
            let root = match qn_root(s, n, &cur_tol) {
                Ok(r) => r,
                Err(NullseqError::NotContractive { .. }) => break None, // degenerate s=2, n=2
                Err(e) => return Err(e),
            };
            let pow_n = |x: &Rational| Rational::new(x.numer().pow(n), x.denom().pow(n));
            let bound_hi = &collapsed * pow_n(root.upper());
            if bound_hi < Rational::one() {
                break Some((root, bound_hi));
            }
            let bound_lo = &collapsed * pow_n(root.lower());
            if bound_lo >= Rational::one() {
                break None; // provably no certificate at this depth
            }
            // undecided: refine the enclosure
            cur_tol /= Rational::from_integer(16.into());
            if cur_tol.denom().bits() > (MAX_REFINE_STEPS as u64) {
                return Err(NullseqError::RefinementCap(n));
            }
        };
        if let Some((mut root, mut bound)) = decision {
            // keep consecutive enclosures strictly separated
            if let Some(prev) = out.last() {
                let mut cur_tol = tol.clone();
                let mut steps = 0;
                while root.upper() >= prev.q_enclosure.lower() {
                    cur_tol /= Rational::from_integer(16.into());
                    root = qn_root(s, n, &cur_tol)?;
                    steps += 1;
                    if steps > 64 {
                        return Err(NullseqError::RefinementCap(n));
                    }
                }
                let pow_n = |x: &Rational| Rational::new(x.numer().pow(n), x.denom().pow(n));
                bound = &collapsed * pow_n(root.upper());
            }
            out.push(QnCertificate {
                n,
                s: s as u64,
                q_enclosure: root,
                collapsed_bound: bound,
                witness: witness.clone(),
            });
        }
        n += 1;
    }
    Ok(out)
}

/// Upper bound 1/(s(1 − s^{1−n})) from the root estimate; the enclosure's
/// upper endpoint must satisfy it (strictly for n ≥ 3, with equality at
/// n = 2 where the root is exactly 1/(s−1)).
pub fn qn_upper_estimate(s: usize, n: u32) -> Rational {
    let s_big = BigInt::from(s);
    let s_pow = s_big.pow(n - 1);
    // 1/(s(1 − s^{1−n})) = s^{n−2}/(s^{n−1} − 1) · (s/s) … computed directly:
    let denom = Rational::from_integer(s_big)
        * (Rational::one() - Rational::new(BigInt::one(), s_pow));
    Rational::one() / denom
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::sigma::FiniteSigma;

    fn tol9() -> Rational {
        rat(1, 1_000_000_000)
    }

    fn sigma(vals: &[i64]) -> FiniteSigma {
        FiniteSigma::new(vals.iter().map(|&v| rat_int(v)).collect()).unwrap()
    }

    #[test]
    fn qn_root_depth_two_is_exact() {
        assert_eq!(
            qn_root(8, 2, &tol9()).unwrap(),
            RatioValue::Exact(rat(1, 7))
        );
    }

    #[test]
    fn qn_root_s8_n3_matches_quadratic_formula() {
        // x + x² = 1/7  ⇒  x = (−1 + √(11/7))/2
        let r = qn_root(8, 3, &tol9()).unwrap();
        let (slo, shi) = crate::rational::sqrt_enclosure(&rat(11, 7), &rat(1, 10_000_000_000i64));
        let two = Rational::from_integer(2.into());
        let xlo = (slo - Rational::one()) / &two;
        let xhi = (shi - Rational::one()) / &two;
        assert!(r.lower() <= &xhi && &xlo <= r.upper());
    }

    #[test]
    fn qn_root_respects_paper_bounds() {
        for s in [3usize, 4, 8, 15] {
            for n in 2u32..=8 {
                let r = qn_root(s, n, &tol9()).unwrap();
                let one_over_s = rat(1, s as i64);
                assert!(r.lower() > &one_over_s, "s={s} n={n}");
                let est = qn_upper_estimate(s, n);
                if n == 2 {
                    assert!(r.upper() <= &est);
                } else {
                    assert!(r.upper() < &est, "s={s} n={n}");
                }
            }
        }
    }

    #[test]
    fn qn_root_degenerate_case() {
        // s = 2, n = 2: the equation x = 1 has no root inside (0,1)
        assert!(matches!(
            qn_root(2, 2, &tol9()),
            Err(NullseqError::NotContractive { .. })
        ));
    }

    #[test]
    fn qn_roots_decrease_in_n() {
        let mut prev: Option<RatioValue> = None;
        for n in 3u32..=9 {
            let r = qn_root(4, n, &rat(1, 10_000_000)).unwrap();
            if let Some(p) = prev {
                assert!(r.upper() < p.lower(), "n={n}");
            }
            prev = Some(r);
        }
    }

    #[test]
    fn witness_gnj_family() {
        // Σ = {0,2,3,…,2m+1,2m+3}: witness (2, 1, −1)
        for m in 1i64..=4 {
            let mut vals = vec![0];
            vals.extend(2..=2 * m + 1);
            vals.push(2 * m + 3);
            let s = FiniteSigma::new(vals.into_iter().map(rat_int).collect()).unwrap();
            let w = star_condition_witness(&s).unwrap();
            assert_eq!((w.a.clone(), w.b.clone(), w.c.clone()), (rat_int(2), rat_int(1), rat_int(-1)));
            assert!(w.replay(&s));
        }
    }

    #[test]
    fn witness_ferens_6543() {
        let s = sigma(&[0, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 18]);
        let w = star_condition_witness(&s).unwrap();
        assert_eq!((w.a, w.b, w.c), (rat_int(3), rat_int(3), rat_int(-1)));
    }

    #[test]
    fn witness_absent_for_tiny_sets() {
        assert!(star_condition_witness(&sigma(&[0, 1])).is_none());
        assert!(star_condition_witness(&sigma(&[0, 1, 2])).is_none());
    }

    #[test]
    fn depth_two_never_certifies() {
        // s = 8, n = 2: (64 − 2)·(1/7)² = 62/49 > 1
        let collapsed = rat_int(62);
        let bound = collapsed * rat(1, 49);
        assert!(bound > Rational::one());
        let certs = qn_sequence(
            &sigma(&[0, 2, 3, 4, 5, 6, 7, 9]),
            1,
            &tol9(),
        )
        .unwrap();
        assert!(certs[0].n > 2);
    }

    #[test]
    fn sequence_for_gnj_rank_one() {
        let s = sigma(&[0, 2, 3, 5]);
        let certs = qn_sequence(&s, 3, &tol9()).unwrap();
        assert_eq!(certs.len(), 3);
        // first qualifying depth is n = 5 for s = 4
        assert_eq!(certs[0].n, 5);
        let quarter = rat(1, 4);
        for c in &certs {
            assert!(c.q_enclosure.lower() > &quarter);
            assert!(c.collapsed_bound < Rational::one());
            assert!(c.replay());
        }
        for pair in certs.windows(2) {
            assert!(pair[1].q_enclosure.upper() < pair[0].q_enclosure.lower());
        }
    }

    #[test]
    fn sequence_for_ferens_6543() {
        // s = 15: the first qualifying depth is n = 8 and the margins are
        // around 1e-9, exercising the auto-refinement
        let s = sigma(&[0, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 18]);
        let certs = qn_sequence(&s, 2, &tol9()).unwrap();
        assert_eq!(certs[0].n, 8);
        assert_eq!(certs[1].n, 9);
        let fifteenth = rat(1, 15);
        for c in &certs {
            assert!(c.q_enclosure.lower() > &fifteenth);
            assert!(c.replay());
        }
        assert!(certs[1].q_enclosure.upper() < certs[0].q_enclosure.lower());
    }

    #[test]
    fn sequence_requires_witness() {
        assert!(matches!(
            qn_sequence(&sigma(&[0, 1]), 2, &tol9()),
            Err(NullseqError::NoWitness)
        ));
    }
}

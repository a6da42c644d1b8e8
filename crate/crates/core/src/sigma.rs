//! Digit sets and their gap statistics.
//!
//! The digit set Σ = {σ₁ < … < σ_s} drives everything: the self-similar set
//! K(Σ;q) = Σ + q·K(Σ;q) is an interval iff q ≥ I(Σ), contains one if
//! q ≥ i(Σ), and the classification thresholds are all rational functions of
//! the gaps of Σ. Everything here is exact.

use crate::rational::{parse_rational, rational_string, Rational};
use crate::ratio::RatioValue;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SigmaError {
    #[error("digit set needs at least two elements, got {0}")]
    TooSmall(usize),
    #[error("duplicate element {0} in digit set")]
    Duplicate(String),
    #[error("empty coefficient list")]
    NoCoefficients,
    #[error("coefficient {0} is not positive")]
    NonPositiveCoefficient(String),
    #[error("cannot parse digit set: {0}")]
    Parse(String),
    #[error("brute-force i(Σ) refused for |Σ| = {0} > 20")]
    BruteForceTooLarge(usize),
}

/// A finite digit set: strictly increasing rationals, |Σ| ≥ 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSigma {
    elements: Vec<Rational>,
}

impl Serialize for FiniteSigma {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.elements.iter().map(rational_string))
    }
}

impl<'de> Deserialize<'de> for FiniteSigma {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let elements = raw
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        FiniteSigma::new(elements).map_err(serde::de::Error::custom)
    }
}

impl FiniteSigma {
    /// Build from arbitrary order; sorts, rejects duplicates and short sets.
    pub fn new(mut elements: Vec<Rational>) -> Result<Self, SigmaError> {
        if elements.len() < 2 {
            return Err(SigmaError::TooSmall(elements.len()));
        }
        elements.sort();
        for pair in elements.windows(2) {
            if pair[0] == pair[1] {
                return Err(SigmaError::Duplicate(pair[0].to_string()));
            }
        }
        Ok(FiniteSigma { elements })
    }

    /// Parse a comma-separated list of rationals: `0,2,3,5` or `1/2,3/4`.
    pub fn parse(input: &str) -> Result<Self, SigmaError> {
        let elements = input
            .split(',')
            .map(|tok| parse_rational(tok).map_err(|e| SigmaError::Parse(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(elements)
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: |Σ| ≥ 2
    }

    pub fn min(&self) -> &Rational {
        &self.elements[0]
    }

    pub fn max(&self) -> &Rational {
        &self.elements[self.elements.len() - 1]
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    /// All σ integers?
    pub fn is_integer(&self) -> bool {
        self.elements.iter().all(|e| e.denom().is_one())
    }

    /// Consecutive differences σ_{i+1} − σ_i.
    pub fn gaps(&self) -> Vec<Rational> {
        self.elements.windows(2).map(|w| &w[1] - &w[0]).collect()
    }

    /// Display as the canonical comma-separated list.
    pub fn display(&self) -> String {
        self.elements
            .iter()
            .map(rational_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Σ affinely equivalent to {0, k, k+1, …, n−k, n} (contiguous middle run,
    /// equal extreme gaps that are an integer multiple of the middle gap), or
    /// fully contiguous. For these digit sets the interval / Cantor set /
    /// Cantorval trichotomy is known to be exhaustive.
    pub fn is_ferens_like(&self) -> bool {
        let gaps = self.gaps();
        let first = &gaps[0];
        if gaps.iter().all(|g| g == first) {
            return true; // affine image of {0,1,…,n}
        }
        if gaps.len() < 3 {
            return false;
        }
        let last = &gaps[gaps.len() - 1];
        if first != last {
            return false;
        }
        let middle = &gaps[1];
        if gaps[1..gaps.len() - 1].iter().any(|g| g != middle) {
            return false;
        }
        let ratio = first / middle;
        ratio.denom().is_one() && ratio >= Rational::one()
    }
}

impl fmt::Display for FiniteSigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.display())
    }
}

/// A multigeometric sequence (k₀,…,k_m; q): the digits k₀,…,k_m repeated at
/// every scale qⁿ. Its achievement set is K(Σ;q) for Σ the subset sums of
/// the coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultigeometricSpec {
    pub coefficients: Vec<Rational>,
    pub ratio: RatioValue,
}

impl MultigeometricSpec {
    pub fn new(coefficients: Vec<Rational>, ratio: RatioValue) -> Result<Self, SigmaError> {
        validate_coefficients(&coefficients)?;
        Ok(MultigeometricSpec {
            coefficients,
            ratio,
        })
    }

    /// Parse `k0,k1,...,km;q`.
    pub fn parse(input: &str) -> Result<Self, SigmaError> {
        let (coeffs, q) = input
            .split_once(';')
            .ok_or_else(|| SigmaError::Parse(format!("expected `k0,...,km;q` in `{input}`")))?;
        let coefficients = coeffs
            .split(',')
            .map(|tok| parse_rational(tok).map_err(|e| SigmaError::Parse(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let q = parse_rational(q).map_err(|e| SigmaError::Parse(e.to_string()))?;
        let ratio = RatioValue::exact(q).map_err(|e| SigmaError::Parse(e.to_string()))?;
        Self::new(coefficients, ratio)
    }

    /// The digit set: all subset sums of the coefficients.
    pub fn sumset(&self) -> Result<FiniteSigma, SigmaError> {
        sumset_of_multigeometric(&self.coefficients)
    }
}

fn validate_coefficients(coefficients: &[Rational]) -> Result<(), SigmaError> {
    if coefficients.is_empty() {
        return Err(SigmaError::NoCoefficients);
    }
    if let Some(bad) = coefficients.iter().find(|k| !k.is_positive()) {
        return Err(SigmaError::NonPositiveCoefficient(bad.to_string()));
    }
    Ok(())
}

/// Subset sums {Σ εⱼkⱼ : εⱼ ∈ {0,1}} of positive coefficients, sorted and
/// deduplicated. Equal sums merge silently: the achievement set only depends
/// on the set of values.
pub fn sumset_of_multigeometric(coefficients: &[Rational]) -> Result<FiniteSigma, SigmaError> {
    validate_coefficients(coefficients)?;
    let mut sums = std::collections::BTreeSet::new();
    sums.insert(Rational::zero());
    for k in coefficients {
        let shifted: Vec<Rational> = sums.iter().map(|x| x + k).collect();
        sums.extend(shifted);
    }
    let elements: Vec<Rational> = sums.into_iter().collect();
    if elements.len() < 2 {
        // single positive coefficient still yields {0, k}; unreachable
        return Err(SigmaError::TooSmall(elements.len()));
    }
    Ok(FiniteSigma { elements })
}

/// Gap statistics of a digit set.
///
/// `big_i` is I(Σ) = Δ/(Δ + diam) and `little_i` is i(Σ), the minimum of
/// I(B) over subsets B ⊆ Σ with |B| ≥ 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapStats {
    #[serde(with = "crate::rational::rat_str")]
    pub diam: Rational,
    /// δ(Σ): smallest gap.
    #[serde(with = "crate::rational::rat_str")]
    pub delta_min: Rational,
    /// Δ(Σ): largest gap.
    #[serde(with = "crate::rational::rat_str")]
    pub delta_max: Rational,
    /// I(Σ) = Δ/(Δ + diam): interval threshold.
    #[serde(with = "crate::rational::rat_str")]
    pub big_i: Rational,
    /// i(Σ): contains-an-interval threshold.
    #[serde(with = "crate::rational::rat_str")]
    pub little_i: Rational,
    /// d = δ/diam, the input to the Solomyak lower bound.
    #[serde(with = "crate::rational::rat_str")]
    pub d: Rational,
    /// Δ(Σ) ∈ {σ₂−σ₁, σ_s−σ_{s−1}}: the largest gap touches an end.
    pub extreme_gap: bool,
}

/// Exact gap statistics.
///
/// i(Σ) uses the contiguous-hull reduction: for fixed endpoints a < b in Σ,
/// the subset minimizing I among those with min a and max b is the full hull
/// `Σ ∩ [a, b]` (adding interior points only shrinks the largest gap), so it
/// suffices to scan hull subsets. `i_bruteforce` guards this.
pub fn gap_stats(sigma: &FiniteSigma) -> GapStats {
    let e = sigma.elements();
    let gaps = sigma.gaps();
    let diam = sigma.max() - sigma.min();
    let delta_min = gaps.iter().min().unwrap().clone();
    let delta_max = gaps.iter().max().unwrap().clone();
    let big_i = &delta_max / (&delta_max + &diam);
    let extreme_gap = delta_max == gaps[0] || delta_max == gaps[gaps.len() - 1];

    let mut little_i = big_i.clone();
    for start in 0..e.len() - 1 {
        let mut max_gap = Rational::zero();
        for end in start + 1..e.len() {
            let gap = &e[end] - &e[end - 1];
            if gap > max_gap {
                max_gap = gap;
            }
            let hull_diam = &e[end] - &e[start];
            let i_val = &max_gap / (&max_gap + &hull_diam);
            if i_val < little_i {
                little_i = i_val;
            }
        }
    }

    let d = &delta_min / &diam;
    GapStats {
        diam,
        delta_min,
        delta_max,
        big_i,
        little_i,
        d,
        extreme_gap,
    }
}

/// Brute-force i(Σ): minimum of I(B) over every subset B with |B| ≥ 2, by
/// full enumeration. Oracle for `gap_stats().little_i`; refuses |Σ| > 20.
pub fn i_bruteforce(sigma: &FiniteSigma) -> Result<Rational, SigmaError> {
    let e = sigma.elements();
    let s = e.len();
    if s > 20 {
        return Err(SigmaError::BruteForceTooLarge(s));
    }
    let mut best: Option<Rational> = None;
    for mask in 0u32..(1 << s) {
        if mask.count_ones() < 2 {
            continue;
        }
        let members: Vec<&Rational> = (0..s).filter(|i| mask >> i & 1 == 1).map(|i| &e[i]).collect();
        let diam = members[members.len() - 1] - members[0];
        let delta_max = members
            .windows(2)
            .map(|w| w[1] - w[0])
            .max()
            .unwrap();
        let i_val = &delta_max / (&delta_max + &diam);
        if best.as_ref().is_none_or(|b| i_val < *b) {
            best = Some(i_val);
        }
    }
    Ok(best.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn sigma(vals: &[i64]) -> FiniteSigma {
        FiniteSigma::new(vals.iter().map(|&v| rat_int(v)).collect()).unwrap()
    }

    #[test]
    fn sumset_examples() {
        // Guthrie-Nymann (3,2)
        let s = sumset_of_multigeometric(&[rat_int(3), rat_int(2)]).unwrap();
        assert_eq!(s, sigma(&[0, 2, 3, 5]));
        // two unit coefficients
        let s = sumset_of_multigeometric(&[rat_int(1), rat_int(1)]).unwrap();
        assert_eq!(s, sigma(&[0, 1, 2]));
        // Ferens-like (4,3,2)
        let s = sumset_of_multigeometric(&[rat_int(4), rat_int(3), rat_int(2)]).unwrap();
        assert_eq!(s, sigma(&[0, 2, 3, 4, 5, 6, 7, 9]));
    }

    #[test]
    fn sumset_errors() {
        assert!(matches!(
            sumset_of_multigeometric(&[]),
            Err(SigmaError::NoCoefficients)
        ));
        assert!(matches!(
            sumset_of_multigeometric(&[rat_int(0)]),
            Err(SigmaError::NonPositiveCoefficient(_))
        ));
        assert!(matches!(
            sumset_of_multigeometric(&[rat_int(2), rat_int(-1)]),
            Err(SigmaError::NonPositiveCoefficient(_))
        ));
    }

    #[test]
    fn gap_stats_gnj_rank_one() {
        let st = gap_stats(&sigma(&[0, 2, 3, 5]));
        assert_eq!(st.diam, rat_int(5));
        assert_eq!(st.delta_min, rat_int(1));
        assert_eq!(st.delta_max, rat_int(2));
        assert_eq!(st.big_i, rat(2, 7));
        assert_eq!(st.little_i, rat(2, 7));
        assert_eq!(st.d, rat(1, 5));
        assert!(st.extreme_gap);
    }

    #[test]
    fn gap_stats_ferens_432() {
        let st = gap_stats(&sigma(&[0, 2, 3, 4, 5, 6, 7, 9]));
        assert_eq!(st.big_i, rat(2, 11));
        assert_eq!(st.little_i, rat(1, 6));
        assert_eq!(st.d, rat(1, 9));
        assert!(st.extreme_gap);
    }

    #[test]
    fn gap_stats_two_points() {
        let st = gap_stats(&sigma(&[0, 1]));
        assert_eq!(st.diam, rat_int(1));
        assert_eq!(st.delta_min, rat_int(1));
        assert_eq!(st.delta_max, rat_int(1));
        assert_eq!(st.big_i, rat(1, 2));
        assert_eq!(st.little_i, rat(1, 2));
        assert_eq!(st.d, rat_int(1));
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(i_bruteforce(&sigma(&[0, 2, 3, 5])).unwrap(), rat(2, 7));
        assert_eq!(i_bruteforce(&sigma(&[0, 1, 2])).unwrap(), rat(1, 3));
        assert_eq!(
            i_bruteforce(&sigma(&[0, 2, 3, 4, 5, 6, 7, 9])).unwrap(),
            rat(1, 6)
        );
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(FiniteSigma::new(vec![rat_int(1)]).is_err());
        assert!(FiniteSigma::new(vec![rat_int(1), rat_int(1)]).is_err());
        assert!(FiniteSigma::parse("0,2,2").is_err());
        assert!(FiniteSigma::parse("0,x").is_err());
        // order does not matter
        assert_eq!(FiniteSigma::parse("5,0,3,2").unwrap(), sigma(&[0, 2, 3, 5]));
        assert_eq!(
            FiniteSigma::parse("1/2,3/4").unwrap().elements(),
            &[rat(1, 2), rat(3, 4)]
        );
    }

    #[test]
    fn multigeometric_parse() {
        let mg = MultigeometricSpec::parse("3,2;1/4").unwrap();
        assert_eq!(mg.coefficients, vec![rat_int(3), rat_int(2)]);
        assert_eq!(mg.ratio, RatioValue::Exact(rat(1, 4)));
        assert_eq!(mg.sumset().unwrap(), sigma(&[0, 2, 3, 5]));
        assert!(MultigeometricSpec::parse("3,2").is_err());
        assert!(MultigeometricSpec::parse("3,2;5/4").is_err());
    }

    #[test]
    fn ferens_like_detection() {
        assert!(sigma(&[0, 2, 3, 5]).is_ferens_like());
        assert!(sigma(&[0, 2, 3, 4, 5, 6, 7, 9]).is_ferens_like());
        assert!(sigma(&[0, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 18]).is_ferens_like());
        assert!(sigma(&[0, 4, 5, 6, 7, 11]).is_ferens_like());
        assert!(sigma(&[0, 3, 4, 7]).is_ferens_like());
        assert!(sigma(&[0, 1, 2, 3]).is_ferens_like()); // contiguous
        assert!(sigma(&[0, 1]).is_ferens_like());
        assert!(!sigma(&[0, 1, 3]).is_ferens_like());
        assert!(!sigma(&[0, 2, 3, 6]).is_ferens_like()); // unequal extreme gaps
        assert!(!sigma(&[0, 3, 5, 8]).is_ferens_like()); // middle gap 2, ends 3
    }

    #[test]
    fn ferens_like_closed_forms() {
        // Σ = {0, k, k+1, …, n−k, n}: |Σ| = n−2k+3, Δ = k, δ = 1,
        // I = k/(n+k), i = min(1/(|Σ|−2), I), d = 1/n
        for k in 2i64..=5 {
            for n in [2 * k + 1, 3 * k, 4 * k + 2] {
                let mut vals = vec![0];
                vals.extend(k..=n - k);
                vals.push(n);
                let s = FiniteSigma::new(vals.into_iter().map(rat_int).collect()).unwrap();
                let card = n - 2 * k + 3;
                assert_eq!(s.len() as i64, card);
                assert!(s.is_ferens_like());
                let st = gap_stats(&s);
                assert_eq!(st.delta_max, rat_int(k));
                assert_eq!(st.delta_min, rat_int(1));
                assert_eq!(st.big_i, rat(k, n + k));
                assert_eq!(st.little_i, std::cmp::min(rat(1, card - 2), rat(k, n + k)));
                assert_eq!(st.d, rat(1, n));
            }
        }
    }

    #[test]
    fn powers_of_three_sumsets() {
        // coefficients (3^{k−1},…,3,1): |Σ| = 2^k, diam = (3^k−1)/2,
        // d = 2/(3^k−1), I = i = 1/4 + 1/(4·3^{k−1})
        for k in 2u32..=4 {
            let coeffs: Vec<Rational> = (0..k).rev().map(|j| rat_int(3i64.pow(j))).collect();
            let s = sumset_of_multigeometric(&coeffs).unwrap();
            assert_eq!(s.len(), 1 << k);
            let st = gap_stats(&s);
            let three_pow = 3i64.pow(k);
            assert_eq!(st.diam, rat((three_pow - 1) / 2, 1));
            assert_eq!(st.d, rat(2, three_pow - 1));
            let expect = rat(1, 4) + rat(1, 4 * 3i64.pow(k - 1));
            assert_eq!(st.big_i, expect);
            assert_eq!(st.little_i, expect);
        }
    }

    #[test]
    fn gnj_family_closed_forms() {
        // Σ = {0,2,3,…,2m+1,2m+3}: |Σ| = 2m+2, I = 2/(2m+5), i = min(1/2m, 2/(2m+5)), d = 1/(2m+3)
        for m in 1i64..=6 {
            let mut vals = vec![0];
            vals.extend(2..=2 * m + 1);
            vals.push(2 * m + 3);
            let s = FiniteSigma::new(vals.into_iter().map(rat_int).collect()).unwrap();
            assert_eq!(s.len() as i64, 2 * m + 2);
            let st = gap_stats(&s);
            assert_eq!(st.big_i, rat(2, 2 * m + 5));
            assert_eq!(st.little_i, std::cmp::min(rat(1, 2 * m), rat(2, 2 * m + 5)));
            assert_eq!(st.d, rat(1, 2 * m + 3));
        }
    }
}

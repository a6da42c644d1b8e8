//! Exact enumeration of the partial sumsets Σₙ = Σ + qΣ + … + qⁿ⁻¹Σ.
//!
//! For exact rational q = u/v every element of Σₙ, multiplied through by
//! v^{n−1}·L (L = lcm of the σ denominators), is an integer, so the whole
//! enumeration runs in integer arithmetic: level n+1 is the merge of the s
//! sorted shifted copies v^n·Lσ + u·Σₙ. A machine-word (i128) fast path is
//! used whenever an a-priori magnitude bound fits; otherwise the same code
//! runs on `BigInt`.
//!
//! The certificates produced here are the measure-zero witnesses
//! |Σₙ|·qⁿ < 1: if that inequality holds for some n, then λ(K(Σ;q)) = 0.

use crate::rational::{rat_str, rat_vec, Rational};
use crate::sigma::FiniteSigma;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SumsetError {
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("ratio must be an exact rational strictly inside (0,1), got {0}")]
    BadRatio(String),
    #[error("enumeration budget exceeded; deepest completed level is {depth_reached}")]
    BudgetExceeded { depth_reached: u32 },
    #[error("digit set must be integer for this check")]
    NonIntegerSigma,
    #[error("ratio must be of the form 1/(n+1), got {0}")]
    BadRatioForm(String),
}

/// Memory budget for enumeration, in elements per level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SumsetBudget {
    pub max_elements: u64,
}

impl Default for SumsetBudget {
    fn default() -> Self {
        // keeps a level of i128s under ~320 MB; overridable via the CLI env var
        SumsetBudget {
            max_elements: 20_000_000,
        }
    }
}

/// Cardinality and measure bound of Σₙ at one depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumsetReport {
    pub depth: u32,
    pub cardinality: u64,
    /// |Σₙ|·qⁿ.
    #[serde(with = "rat_str")]
    pub bound: Rational,
    /// Two distinct digit strings with the same value, if any collision
    /// occurs up to this depth (witness at the smallest colliding depth).
    pub first_collision: Option<CollisionWitness>,
}

/// Measure-zero certificate: |Σₙ|·qⁿ < 1 at the stated depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NullCertificate {
    pub depth: u32,
    pub cardinality: u64,
    #[serde(with = "rat_str")]
    pub bound: Rational,
}

impl NullCertificate {
    /// Re-check the stated inequality from the stored numbers and the ratio.
    pub fn replay(&self, q: &Rational) -> bool {
        let qn = pow_rational(q, self.depth);
        let bound = Rational::from_integer(BigInt::from(self.cardinality)) * qn;
        bound == self.bound && self.bound < Rational::one()
    }
}

/// Two distinct digit strings over Σ with equal value Σ aᵢqⁱ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionWitness {
    pub depth: u32,
    #[serde(with = "rat_vec")]
    pub digits_a: Vec<Rational>,
    #[serde(with = "rat_vec")]
    pub digits_b: Vec<Rational>,
    #[serde(with = "rat_str")]
    pub value: Rational,
}

impl CollisionWitness {
    /// Evaluate both digit strings at `q` and confirm they are distinct
    /// members of Σ with equal sums. Independent of the enumeration.
    pub fn replay(&self, sigma: &FiniteSigma, q: &Rational) -> bool {
        if self.digits_a.len() != self.depth as usize
            || self.digits_b.len() != self.depth as usize
            || self.digits_a == self.digits_b
        {
            return false;
        }
        let in_sigma = |d: &[Rational]| d.iter().all(|x| sigma.contains(x));
        if !in_sigma(&self.digits_a) || !in_sigma(&self.digits_b) {
            return false;
        }
        let eval = |d: &[Rational]| -> Rational {
            let mut acc = Rational::zero();
            let mut qi = Rational::one();
            for a in d {
                acc += a * &qi;
                qi *= q;
            }
            acc
        };
        let va = eval(&self.digits_a);
        va == eval(&self.digits_b) && va == self.value
    }
}

/// Union of the depth-n cover intervals [x, x + qⁿ·diam K] over x ∈ Σₙ.
/// `total_length` is a certified upper bound for λ(K(Σ;q)).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub depth: u32,
    /// Number of disjoint intervals after merging.
    pub interval_count: u64,
    #[serde(with = "rat_str")]
    pub total_length: Rational,
    /// Merged intervals, exact endpoints. Not serialized; export via CSV.
    #[serde(skip)]
    pub intervals: Vec<(Rational, Rational)>,
}

/// Outcome of the rational-ratio measure check (q = 1/(k+1), integer Σ).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum T12Outcome {
    /// |Σₙ|·qⁿ < 1 at the stated depth, hence λ(K) = 0.
    ZeroMeasure(NullCertificate),
    /// |Σₙ|·qⁿ ≥ 1 for every n up to the depth searched. Inconclusive but,
    /// by the rational-ratio equivalence, a violation at any depth would be
    /// definitive, so the trace documents the margin.
    NoViolationUpTo { depth: u32, trace: Vec<DepthBound> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthBound {
    pub depth: u32,
    pub cardinality: u64,
    #[serde(with = "rat_str")]
    pub bound: Rational,
}

/// Outcome of the full-sumset collision search at q = 1/|Σ|.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FullSumsetOutcome {
    /// Distinct digit strings with equal sums: |Σₙ| < |Σ|ⁿ, hence λ(K) = 0
    /// and K contains no interval.
    Collision(CollisionWitness),
    /// All |Σ|ⁿ sums distinct up to the depth searched (inconclusive).
    NoCollisionUpTo(u32),
}

fn pow_rational(q: &Rational, n: u32) -> Rational {
    Rational::new(q.numer().pow(n), q.denom().pow(n))
}

fn validate_ratio(q: &Rational) -> Result<(), SumsetError> {
    if !q.is_positive() || *q >= Rational::one() {
        return Err(SumsetError::BadRatio(q.to_string()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// scaled-integer machinery
// ---------------------------------------------------------------------------

/// Minimal integer interface shared by the i128 fast path and BigInt.
trait SumInt: Ord + Clone {
    fn from_big(b: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
    fn mul(&self, other: &Self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    /// `self / d` when the division is exact, else None.
    fn div_exact(&self, d: &Self) -> Option<Self>;
}

impl SumInt for i128 {
    fn from_big(b: &BigInt) -> Self {
        b.to_i128().expect("magnitude bound guaranteed i128 range")
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        (self % d == 0).then(|| self / d)
    }
}

impl SumInt for BigInt {
    fn from_big(b: &BigInt) -> Self {
        b.clone()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        let (quot, rem) = self.div_rem(d);
        rem.is_zero().then_some(quot)
    }
}

/// Shared integer scaling data for one (Σ, q) pair.
struct Scaling {
    u: BigInt,
    v: BigInt,
    /// lcm of the σ denominators.
    l: BigInt,
    /// L·σ, ascending.
    base: Vec<BigInt>,
}

impl Scaling {
    fn new(sigma: &FiniteSigma, q: &Rational) -> Self {
        let mut l = BigInt::one();
        for e in sigma.elements() {
            l = l.lcm(e.denom());
        }
        let base = sigma
            .elements()
            .iter()
            .map(|e| e.numer() * &l / e.denom())
            .collect();
        Scaling {
            u: q.numer().clone(),
            v: q.denom().clone(),
            l,
            base,
        }
    }

    /// Upper bound on |x| for any scaled element up to depth n, with room
    /// for one extra multiplication by v (cover arithmetic).
    fn magnitude_bound(&self, n: u32) -> BigInt {
        let max_abs = self
            .base
            .iter()
            .map(|b| b.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        (max_abs + BigInt::one())
            * BigInt::from(n.max(1))
            * self.v.pow(n.saturating_sub(1))
            * &self.v
            * 4
    }

    /// Denominator of the level-n scale: v^{n−1}·L.
    fn scale_den(&self, n: u32) -> BigInt {
        self.v.pow(n - 1) * &self.l
    }
}

/// One enumeration run. Levels are 1-based: level 1 is L·Σ itself.
struct Driver<T: SumInt> {
    u: T,
    v: T,
    base: Vec<T>,
    /// shifts for the CURRENT level: v^{depth−1}·L·σ.
    shifts: Vec<T>,
    /// retained levels; only the last one unless `retain` is set.
    levels: Vec<Vec<T>>,
    retain: bool,
    depth: u32,
    cap: u64,
    /// smallest duplicated value at the first colliding depth.
    first_dup: Option<(u32, T)>,
}

impl<T: SumInt> Driver<T> {
    fn new(sc: &Scaling, retain: bool, cap: u64) -> Self {
        let base: Vec<T> = sc.base.iter().map(T::from_big).collect();
        let level1 = base.clone(); // already sorted, distinct
        Driver {
            u: T::from_big(&sc.u),
            v: T::from_big(&sc.v),
            shifts: base.clone(),
            base,
            levels: vec![level1],
            retain,
            depth: 1,
            cap,
            first_dup: None,
        }
    }

    fn current(&self) -> &Vec<T> {
        self.levels.last().unwrap()
    }

    fn cardinality(&self) -> u64 {
        self.current().len() as u64
    }

    /// Advance Σₙ → Σₙ₊₁.
    fn step(&mut self) -> Result<(), SumsetError> {
        let prev = self.current();
        let projected = prev.len() as u64 * self.base.len() as u64;
        if projected > self.cap {
            return Err(SumsetError::BudgetExceeded {
                depth_reached: self.depth,
            });
        }
        // next shifts: v^{depth}·L·σ
        let next_shifts: Vec<T> = self.shifts.iter().map(|s| s.mul(&self.v)).collect();
        let scaled_prev: Vec<T> = prev.iter().map(|t| t.mul(&self.u)).collect();
        let mut next: Vec<T> = Vec::with_capacity(projected as usize);
        for sh in &next_shifts {
            for t in &scaled_prev {
                next.push(sh.add(t));
            }
        }
        next.sort_unstable();
        if self.first_dup.is_none() {
            if let Some(w) = next.windows(2).find(|w| w[0] == w[1]) {
                self.first_dup = Some((self.depth + 1, w[0].clone()));
            }
        }
        next.dedup();
        self.shifts = next_shifts;
        self.depth += 1;
        if self.retain {
            self.levels.push(next);
        } else {
            self.levels = vec![next];
        }
        Ok(())
    }

    /// All representations of `x` at level `k` (1-based): ascending digit
    /// indices j such that x = v^{k−1}Lσⱼ + u·t with t in level k−1.
    /// Requires `retain`.
    fn branches(&self, x: &T, k: u32) -> Vec<(usize, Option<T>)> {
        debug_assert!(self.retain);
        let mut shift = self.base.clone();
        for _ in 1..k {
            shift = shift.iter().map(|s| s.mul(&self.v)).collect();
        }
        let mut out = Vec::new();
        for (j, sh) in shift.iter().enumerate() {
            if k == 1 {
                if x == sh {
                    out.push((j, None));
                }
            } else {
                let rem = x.sub(sh);
                if let Some(t) = rem.div_exact(&self.u) {
                    if self.levels[k as usize - 2].binary_search(&t).is_ok() {
                        out.push((j, Some(t)));
                    }
                }
            }
        }
        out
    }

    /// Greedy smallest-digit representation of `x` at level `k`.
    fn reconstruct(&self, x: &T, k: u32) -> Vec<usize> {
        let mut digits = Vec::with_capacity(k as usize);
        let mut cur = x.clone();
        for level in (1..=k).rev() {
            let branch = self
                .branches(&cur, level)
                .into_iter()
                .next()
                .expect("value must be representable at its own level");
            digits.push(branch.0);
            if let Some(t) = branch.1 {
                cur = t;
            }
        }
        digits
    }

    /// Witness for the first collision, if one was observed. Digit strings
    /// are deterministic: the two smallest leading digits of the smallest
    /// duplicated value, each completed greedily by smallest digits.
    fn collision_witness(&self, sigma: &FiniteSigma, sc: &Scaling) -> Option<CollisionWitness> {
        let (k, x) = self.first_dup.clone()?;
        let branches = self.branches(&x, k);
        debug_assert!(branches.len() >= 2);
        let make = |(j, rest): &(usize, Option<T>)| -> Vec<Rational> {
            let mut digits = vec![sigma.elements()[*j].clone()];
            if let Some(t) = rest {
                let tail = self.reconstruct(t, k - 1);
                digits.extend(tail.into_iter().map(|i| sigma.elements()[i].clone()));
            }
            digits
        };
        let digits_a = make(&branches[0]);
        let digits_b = make(&branches[1]);
        let value = Rational::new(x.to_big(), sc.scale_den(k));
        Some(CollisionWitness {
            depth: k,
            digits_a,
            digits_b,
            value,
        })
    }
}

/// Runs `body` on an i128 driver when the magnitude bound allows, otherwise
/// on a BigInt driver.
fn dispatch<R>(
    sc: &Scaling,
    max_depth: u32,
    retain: bool,
    budget: SumsetBudget,
    body: impl Fn(&mut dyn DriverOps) -> Result<R, SumsetError>,
) -> Result<R, SumsetError> {
    let bound = sc.magnitude_bound(max_depth);
    if bound < BigInt::from(i128::MAX / 4) {
        let mut d = Driver::<i128>::new(sc, retain, budget.max_elements);
        body(&mut d)
    } else {
        let mut d = Driver::<BigInt>::new(sc, retain, budget.max_elements);
        body(&mut d)
    }
}

/// Object-safe view of a driver, so ops are written once.
trait DriverOps {
    fn step(&mut self) -> Result<(), SumsetError>;
    fn depth(&self) -> u32;
    fn cardinality(&self) -> u64;
    fn elements_big(&self) -> Vec<BigInt>;
    fn has_collision(&self) -> bool;
    fn witness(&self, sigma: &FiniteSigma, sc: &Scaling) -> Option<CollisionWitness>;
}

impl<T: SumInt> DriverOps for Driver<T> {
    fn step(&mut self) -> Result<(), SumsetError> {
        Driver::step(self)
    }
    fn depth(&self) -> u32 {
        self.depth
    }
    fn cardinality(&self) -> u64 {
        Driver::cardinality(self)
    }
    fn elements_big(&self) -> Vec<BigInt> {
        self.current().iter().map(|t| t.to_big()).collect()
    }
    fn has_collision(&self) -> bool {
        self.first_dup.is_some()
    }
    fn witness(&self, sigma: &FiniteSigma, sc: &Scaling) -> Option<CollisionWitness> {
        self.collision_witness(sigma, sc)
    }
}

// ---------------------------------------------------------------------------
// public operations
// ---------------------------------------------------------------------------

/// The depth-n sumset Σₙ = Σ + qΣ + … + qⁿ⁻¹Σ as an exact digit set.
pub fn sigma_n(
    sigma: &FiniteSigma,
    q: &Rational,
    n: u32,
    budget: SumsetBudget,
) -> Result<FiniteSigma, SumsetError> {
    if n == 0 {
        return Err(SumsetError::ZeroDepth);
    }
    validate_ratio(q)?;
    let sc = Scaling::new(sigma, q);
    let den = sc.scale_den(n);
    let elements = dispatch(&sc, n, false, budget, |d| {
        while d.depth() < n {
            d.step()?;
        }
        Ok(d.elements_big())
    })?;
    let rationals = elements
        .into_iter()
        .map(|x| Rational::new(x, den.clone()))
        .collect();
    Ok(FiniteSigma::new(rationals).expect("sumset has ≥ 2 distinct elements"))
}

/// Cardinality report for Σₙ, with the first collision witness when the
/// count drops below |Σ|ⁿ.
pub fn sumset_report(
    sigma: &FiniteSigma,
    q: &Rational,
    n: u32,
    budget: SumsetBudget,
) -> Result<SumsetReport, SumsetError> {
    if n == 0 {
        return Err(SumsetError::ZeroDepth);
    }
    validate_ratio(q)?;
    let sc = Scaling::new(sigma, q);
    dispatch(&sc, n, true, budget, |d| {
        while d.depth() < n {
            d.step()?;
        }
        let cardinality = d.cardinality();
        let bound = Rational::from_integer(BigInt::from(cardinality)) * pow_rational(q, n);
        Ok(SumsetReport {
            depth: n,
            cardinality,
            bound,
            first_collision: d.witness(sigma, &sc),
        })
    })
}

/// Smallest depth n ≤ max_depth with |Σₙ|·qⁿ < 1, if any.
///
/// `Ok(None)` means the search completed with no certificate;
/// `Err(BudgetExceeded)` means it could not look deep enough.
pub fn null_certificate(
    sigma: &FiniteSigma,
    q: &Rational,
    max_depth: u32,
    budget: SumsetBudget,
) -> Result<Option<NullCertificate>, SumsetError> {
    if max_depth == 0 {
        return Err(SumsetError::ZeroDepth);
    }
    validate_ratio(q)?;
    let sc = Scaling::new(sigma, q);
    dispatch(&sc, max_depth, false, budget, |d| {
        loop {
            let n = d.depth();
            let cardinality = d.cardinality();
            let bound = Rational::from_integer(BigInt::from(cardinality)) * pow_rational(q, n);
            if bound < Rational::one() {
                return Ok(Some(NullCertificate {
                    depth: n,
                    cardinality,
                    bound,
                }));
            }
            if n == max_depth {
                return Ok(None);
            }
            d.step()?;
        }
    })
}

/// Exact length of ⋃_{x∈Σₙ} [x, x + qⁿ·diam(Σ)/(1−q)].
pub fn cover_length(
    sigma: &FiniteSigma,
    q: &Rational,
    n: u32,
    budget: SumsetBudget,
) -> Result<CoverReport, SumsetError> {
    if n == 0 {
        return Err(SumsetError::ZeroDepth);
    }
    validate_ratio(q)?;
    let sc = Scaling::new(sigma, q);
    let positions = dispatch(&sc, n, false, budget, |d| {
        while d.depth() < n {
            d.step()?;
        }
        Ok(d.elements_big())
    })?;

    // Multiply everything by (v−u) so interval endpoints are integers:
    // position' = (v−u)·x, length' = uⁿ·(L·diam).
    let vu = &sc.v - &sc.u;
    let l_diam = (sigma.max() - sigma.min()) * Rational::from_integer(sc.l.clone());
    debug_assert!(l_diam.denom().is_one());
    let len_scaled = sc.u.pow(n) * l_diam.numer();
    let full_den = vu.clone() * sc.scale_den(n);

    let mut intervals: Vec<(Rational, Rational)> = Vec::new();
    let mut total = BigInt::zero();
    let mut cur: Option<(BigInt, BigInt)> = None;
    for x in positions {
        let lo = &vu * &x;
        let hi = &lo + &len_scaled;
        match cur.take() {
            None => cur = Some((lo, hi)),
            Some((clo, chi)) => {
                if lo <= chi {
                    cur = Some((clo, hi));
                } else {
                    total += &chi - &clo;
                    intervals.push((
                        Rational::new(clo, full_den.clone()),
                        Rational::new(chi, full_den.clone()),
                    ));
                    cur = Some((lo, hi));
                }
            }
        }
    }
    if let Some((clo, chi)) = cur {
        total += &chi - &clo;
        intervals.push((
            Rational::new(clo, full_den.clone()),
            Rational::new(chi, full_den.clone()),
        ));
    }
    Ok(CoverReport {
        depth: n,
        interval_count: intervals.len() as u64,
        total_length: Rational::new(total, full_den),
        intervals,
    })
}

/// Rational-ratio measure check: for integer Σ and q = 1/(k+1) the
/// conditions |Σₙ|·qⁿ ≥ 1 (for all n) and λ(K) > 0 are equivalent, so a
/// single violation is a definitive zero-measure certificate.
pub fn t12_check(
    sigma: &FiniteSigma,
    q: &Rational,
    max_depth: u32,
    budget: SumsetBudget,
) -> Result<T12Outcome, SumsetError> {
    if max_depth == 0 {
        return Err(SumsetError::ZeroDepth);
    }
    validate_ratio(q)?;
    if !sigma.is_integer() {
        return Err(SumsetError::NonIntegerSigma);
    }
    if !q.numer().is_one() || *q.denom() < BigInt::from(2) {
        return Err(SumsetError::BadRatioForm(q.to_string()));
    }
    let sc = Scaling::new(sigma, q);
    dispatch(&sc, max_depth, false, budget, |d| {
        let mut trace = Vec::new();
        loop {
            let n = d.depth();
            let cardinality = d.cardinality();
            let bound = Rational::from_integer(BigInt::from(cardinality)) * pow_rational(q, n);
            if bound < Rational::one() {
                return Ok(T12Outcome::ZeroMeasure(NullCertificate {
                    depth: n,
                    cardinality,
                    bound,
                }));
            }
            trace.push(DepthBound {
                depth: n,
                cardinality,
                bound,
            });
            if n == max_depth {
                return Ok(T12Outcome::NoViolationUpTo {
                    depth: max_depth,
                    trace,
                });
            }
            d.step()?;
        }
    })
}

/// Collision search at q = 1/|Σ| for integer Σ: two distinct digit strings
/// with equal value prove |Σₙ| < |Σ|ⁿ, hence λ(K) = 0 and K contains no
/// interval. Reports the smallest-depth witness deterministically.
pub fn full_sumset_check(
    sigma: &FiniteSigma,
    max_depth: u32,
    budget: SumsetBudget,
) -> Result<FullSumsetOutcome, SumsetError> {
    if max_depth == 0 {
        return Err(SumsetError::ZeroDepth);
    }
    if !sigma.is_integer() {
        return Err(SumsetError::NonIntegerSigma);
    }
    let q = Rational::new(BigInt::one(), BigInt::from(sigma.len()));
    let sc = Scaling::new(sigma, &q);
    dispatch(&sc, max_depth, true, budget, |d| {
        while d.depth() < max_depth && !d.has_collision() {
            d.step()?;
        }
        match d.witness(sigma, &sc) {
            Some(w) => Ok(FullSumsetOutcome::Collision(w)),
            None => Ok(FullSumsetOutcome::NoCollisionUpTo(max_depth)),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn sigma(vals: &[i64]) -> FiniteSigma {
        FiniteSigma::new(vals.iter().map(|&v| rat_int(v)).collect()).unwrap()
    }

    fn ferens_6543() -> FiniteSigma {
        sigma(&[0, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 18])
    }

    #[test]
    fn sigma_n_two_digits() {
        let s = sigma_n(&sigma(&[0, 1]), &rat(1, 3), 2, SumsetBudget::default()).unwrap();
        assert_eq!(
            s.elements(),
            &[rat_int(0), rat(1, 3), rat_int(1), rat(4, 3)]
        );
    }

    #[test]
    fn ferens_depth_three_cardinality() {
        let rep = sumset_report(&ferens_6543(), &rat(1, 14), 3, SumsetBudget::default()).unwrap();
        assert_eq!(rep.cardinality, 2655);
        assert_eq!(rep.bound, rat(2655, 2744));
        assert!(rep.first_collision.is_some());
    }

    #[test]
    fn ferens_collision_at_one_fifteenth() {
        let rep = sumset_report(&ferens_6543(), &rat(1, 15), 2, SumsetBudget::default()).unwrap();
        assert!(rep.cardinality < 225);
        let w = rep.first_collision.unwrap();
        assert_eq!(w.depth, 2);
        assert!(w.replay(&ferens_6543(), &rat(1, 15)));
    }

    #[test]
    fn null_certificate_examples() {
        // |Σ|·q < 1 at depth 1
        let c = null_certificate(&sigma(&[0, 1]), &rat(2, 5), 5, SumsetBudget::default())
            .unwrap()
            .unwrap();
        assert_eq!(c.depth, 1);
        assert_eq!(c.bound, rat(4, 5));
        assert!(c.replay(&rat(2, 5)));

        // Ferens at 1/14: depth 3, bound 2655/2744
        let c = null_certificate(&ferens_6543(), &rat(1, 14), 4, SumsetBudget::default())
            .unwrap()
            .unwrap();
        assert_eq!(c.depth, 3);
        assert_eq!(c.cardinality, 2655);
        assert_eq!(c.bound, rat(2655, 2744));

        // GNJ at 1/4: no certificate up to depth 10 (all 4ⁿ sums distinct)
        let none = null_certificate(&sigma(&[0, 2, 3, 5]), &rat(1, 4), 10, SumsetBudget::default())
            .unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn budget_exceeded_is_distinguished() {
        let tight = SumsetBudget { max_elements: 100 };
        let err = null_certificate(&ferens_6543(), &rat(1, 7), 5, tight).unwrap_err();
        assert_eq!(err, SumsetError::BudgetExceeded { depth_reached: 1 });
    }

    #[test]
    fn cover_length_examples() {
        // q = I(Σ): K is an interval, cover tight at every depth
        let r = cover_length(&sigma(&[0, 1]), &rat(1, 2), 5, SumsetBudget::default()).unwrap();
        assert_eq!(r.total_length, rat_int(2));
        assert_eq!(r.interval_count, 1);

        // middle-thirds: 2ⁿ disjoint intervals of length qⁿ·diam K
        let r = cover_length(&sigma(&[0, 1]), &rat(1, 3), 3, SumsetBudget::default()).unwrap();
        assert_eq!(r.total_length, rat(4, 9));
        assert_eq!(r.interval_count, 8);

        // Ferens at 1/14 depth 3: below diam K, consistent with the null certificate
        let s = ferens_6543();
        let r = cover_length(&s, &rat(1, 14), 3, SumsetBudget::default()).unwrap();
        let diam_k = rat_int(18) / (rat_int(1) - rat(1, 14));
        assert!(r.total_length < diam_k);
    }

    #[test]
    fn t12_examples() {
        // base-4 digits: all sums distinct
        let out = t12_check(&sigma(&[0, 1, 2, 3]), &rat(1, 4), 8, SumsetBudget::default()).unwrap();
        match out {
            T12Outcome::NoViolationUpTo { depth, trace } => {
                assert_eq!(depth, 8);
                assert_eq!(trace.len(), 8);
                for db in &trace {
                    assert_eq!(db.cardinality, 4u64.pow(db.depth));
                }
            }
            _ => panic!("expected no violation"),
        }

        // Ferens at 1/15: zero measure at depth 2
        let out = t12_check(&ferens_6543(), &rat(1, 15), 8, SumsetBudget::default()).unwrap();
        match out {
            T12Outcome::ZeroMeasure(c) => {
                assert_eq!(c.depth, 2);
                assert!(c.bound < Rational::one());
                assert!(c.replay(&rat(1, 15)));
            }
            _ => panic!("expected zero measure"),
        }

        // preconditions
        assert!(matches!(
            t12_check(&sigma(&[0, 1]), &rat(2, 5), 4, SumsetBudget::default()),
            Err(SumsetError::BadRatioForm(_))
        ));
        let half = FiniteSigma::new(vec![rat(1, 2), rat_int(1)]).unwrap();
        assert!(matches!(
            t12_check(&half, &rat(1, 3), 4, SumsetBudget::default()),
            Err(SumsetError::NonIntegerSigma)
        ));
    }

    #[test]
    fn full_sumset_collision_witness() {
        // Σ = {0,3,…,15,18}, s = 15: 3 + 15·(1/15) = 4 + 0·(1/15)
        let out = full_sumset_check(&ferens_6543(), 4, SumsetBudget::default()).unwrap();
        match out {
            FullSumsetOutcome::Collision(w) => {
                assert_eq!(w.depth, 2);
                assert!(w.replay(&ferens_6543(), &rat(1, 15)));
                assert_eq!(w.value, rat_int(4));
            }
            _ => panic!("expected collision"),
        }

        // base-3 digits never collide
        let out = full_sumset_check(&sigma(&[0, 1, 2]), 6, SumsetBudget::default()).unwrap();
        assert_eq!(out, FullSumsetOutcome::NoCollisionUpTo(6));

        // GNJ {0,2,3,5} at q = 1/4: no collision up to 10
        let out = full_sumset_check(&sigma(&[0, 2, 3, 5]), 10, SumsetBudget::default()).unwrap();
        assert_eq!(out, FullSumsetOutcome::NoCollisionUpTo(10));
    }

    #[test]
    fn wide_extreme_gap_forces_collision_at_reciprocal_cardinality() {
        // When Σ contains its own cardinality (here the Ferens-like shape
        // with extreme gap 4), |Σ| + 0·q = (|Σ|−1) + |Σ|·q collides at
        // q = 1/|Σ|, so the achievement set at that ratio has measure zero.
        let coeffs: Vec<Rational> = [8i64, 7, 6, 5, 4].map(rat_int).to_vec();
        let s = crate::sigma::sumset_of_multigeometric(&coeffs).unwrap();
        assert_eq!(s.len(), 25);
        assert!(s.contains(&rat_int(25)));
        let out = full_sumset_check(&s, 3, SumsetBudget::default()).unwrap();
        match out {
            FullSumsetOutcome::Collision(w) => {
                assert_eq!(w.depth, 2);
                assert!(w.replay(&s, &rat(1, 25)));
            }
            _ => panic!("expected a depth-2 collision"),
        }
        let t12 = t12_check(&s, &rat(1, 25), 4, SumsetBudget::default()).unwrap();
        assert!(matches!(t12, T12Outcome::ZeroMeasure(c) if c.depth == 2));
    }

    #[test]
    fn bigint_path_matches_machine_word_path() {
        // a tiny denominator keeps everything in i128; a huge one pushes the
        // magnitude bound past the machine-word threshold onto BigInt
        let s = sigma(&[0, 2, 3, 5]);
        let small = sigma_n(&s, &rat(1, 7), 6, SumsetBudget::default()).unwrap();
        let big = sigma_n(&s, &rat(142_857, 999_999), 6, SumsetBudget::default()).unwrap();
        // 142857/999999 = 1/7 after reduction, so the two runs must agree
        assert_eq!(small, big);

        let huge_den = sigma_n(&s, &rat(1, 10_000_019), 7, SumsetBudget::default()).unwrap();
        assert_eq!(huge_den.len(), 4usize.pow(7));
        // smallest nonzero element is the smallest digit at the lowest weight
        let expect = Rational::new(BigInt::from(2), BigInt::from(10_000_019i64).pow(6));
        assert_eq!(huge_den.elements()[1], expect);
    }

    #[test]
    fn rational_sigma_scaling() {
        // Σ with denominators exercises the L = lcm scaling
        let s = FiniteSigma::new(vec![rat_int(0), rat(1, 2), rat(3, 4)]).unwrap();
        let out = sigma_n(&s, &rat(1, 3), 2, SumsetBudget::default()).unwrap();
        // {a + b/3 : a,b ∈ {0, 1/2, 3/4}}; 1/2 + (3/4)/3 = 3/4 + 0 collide
        assert_eq!(out.len(), 8);
        assert!(out.contains(&rat(3, 4)));
        assert!(out.contains(&rat(2, 3)));
        assert!(out.contains(&rat(11, 12)));
        assert!(out.contains(&rat_int(1)));
    }
}

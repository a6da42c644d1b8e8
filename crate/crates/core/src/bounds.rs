//! The computable lower bound α̲(d) on Solomyak's constant α(Σ).
//!
//! α̲(d) is the critical point of the unique (*)-function whose minimum on
//! [0,1) equals −d. For d ≤ 1/(3+2√2) it has the closed form √d/(1+√d);
//! for 1/(3+2√2) ≤ d ≤ 1/2 it is the unique real root of the cubic
//! `2(x−1)³ + (4−2d)(x−1)² + 3(x−1) + 1 = 0`.
//!
//! The Cardano radical expression for that root is only used as a test
//! cross-check; bisection with rational endpoints gives exact sign
//! evaluations, so the returned enclosures are certified.

use crate::rational::{rat, rat_str, sqrt_enclosure, Rational};
use crate::ratio::RatioValue;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("d = {0} out of range: the bound is only defined for 0 < d <= 1/2")]
    DOutOfRange(String),
    #[error("evaluation point {0} outside [0,1)")]
    XOutOfDomain(String),
    #[error("star function parameter out of range: {0}")]
    BadStarFunction(String),
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("refinement cap reached while separating {0}")]
    RefinementCap(String),
}

/// A certified rational enclosure [lo, hi] of a real number (no range
/// restriction, unlike `RatioValue`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enclosure {
    #[serde(with = "rat_str")]
    pub lo: Rational,
    #[serde(with = "rat_str")]
    pub hi: Rational,
}

impl Enclosure {
    pub fn point(v: Rational) -> Self {
        Enclosure {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, v: &Rational) -> bool {
        self.lo <= *v && *v <= self.hi
    }
}

/// A (*)-function g(x) = −Σ_{k=1}^{n−1} xᵏ + γxⁿ + Σ_{k=n+1}^∞ xᵏ
/// with n ≥ 1 and γ ∈ [−1, 1].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarFunction {
    n: u32,
    gamma: Rational,
}

impl StarFunction {
    pub fn new(n: u32, gamma: Rational) -> Result<Self, BoundsError> {
        if n == 0 {
            return Err(BoundsError::BadStarFunction("n must be >= 1".into()));
        }
        if gamma < rat(-1, 1) || gamma > rat(1, 1) {
            return Err(BoundsError::BadStarFunction(format!(
                "gamma = {gamma} outside [-1,1]"
            )));
        }
        Ok(StarFunction { n, gamma })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }
}

/// Exact value of g(x) for rational x in [0,1); the geometric tail is
/// x^{n+1}/(1−x).
pub fn star_eval(g: &StarFunction, x: &Rational) -> Result<Rational, BoundsError> {
    if x.is_negative() || *x >= Rational::one() {
        return Err(BoundsError::XOutOfDomain(x.to_string()));
    }
    let mut acc = Rational::zero();
    let mut xk = x.clone();
    for _ in 1..g.n {
        acc -= &xk;
        xk *= x;
    }
    // xk = x^n here
    acc += &g.gamma * &xk;
    let tail = &xk * x / (Rational::one() - x);
    Ok(acc + tail)
}

/// Exact derivative g′(x) for rational x in [0,1).
fn star_derivative(g: &StarFunction, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut xk = Rational::one(); // x^{k-1}
    for k in 1..g.n {
        acc -= Rational::from_integer(k.into()) * &xk;
        xk *= x;
    }
    // xk = x^{n-1}
    acc += &g.gamma * Rational::from_integer(g.n.into()) * &xk;
    let xn = &xk * x;
    let one_minus = Rational::one() - x;
    let tail = &xn * (Rational::from_integer((g.n + 1).into()) - Rational::from_integer(g.n.into()) * x)
        / (&one_minus * &one_minus);
    acc + tail
}

/// Pointwise lower bound of g over [a,b] by monotone interval extension:
/// each term of g is monotone on [0,1).
fn star_range_low(g: &StarFunction, a: &Rational, b: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut bk = b.clone();
    for _ in 1..g.n {
        acc -= &bk;
        bk *= b;
    }
    let an = pow(a, g.n);
    let bn = pow(b, g.n);
    acc += if g.gamma.is_negative() {
        &g.gamma * &bn
    } else {
        &g.gamma * &an
    };
    let tail_lo = &an * a / (Rational::one() - a);
    acc + tail_lo
}

fn pow(x: &Rational, n: u32) -> Rational {
    Rational::new(x.numer().pow(n), x.denom().pow(n))
}

const MAX_BISECTION_STEPS: u32 = 1 << 16;

/// Enclosures of the unique critical point of g on [0,1) and of the minimum
/// value, each of width ≤ tol. The critical point is unique and g decreases
/// before it and increases after it, so bisection on g′ is certified.
pub fn star_min(
    g: &StarFunction,
    tol: &Rational,
) -> Result<(Enclosure, Enclosure), BoundsError> {
    if !tol.is_positive() {
        return Err(BoundsError::BadTolerance);
    }
    let zero = Rational::zero();
    let d0 = star_derivative(g, &zero);
    if !d0.is_negative() {
        // increasing from the start: minimum at the boundary x = 0
        return Ok((Enclosure::point(zero.clone()), Enclosure::point(zero)));
    }
    // find an upper bracket with g'(b) > 0
    let mut b = rat(1, 2);
    let mut a = zero;
    loop {
        let db = star_derivative(g, &b);
        if db.is_zero() {
            let m = star_eval(g, &b)?;
            return Ok((Enclosure::point(b), Enclosure::point(m)));
        }
        if db.is_positive() {
            break;
        }
        a = b.clone();
        b = (Rational::one() + &b) / Rational::from_integer(2.into());
    }
    // bisect g' over [a, b]
    let mut steps = 0;
    loop {
        let ga = star_eval(g, &a)?;
        let gb = star_eval(g, &b)?;
        let upper = ga.min(gb);
        let lower = star_range_low(g, &a, &b);
        if &b - &a <= *tol && &upper - &lower <= *tol {
            return Ok((
                Enclosure { lo: a, hi: b },
                Enclosure {
                    lo: lower,
                    hi: upper,
                },
            ));
        }
        let mid = (&a + &b) / Rational::from_integer(2.into());
        let dm = star_derivative(g, &mid);
        if dm.is_zero() {
            let m = star_eval(g, &mid)?;
            return Ok((Enclosure::point(mid), Enclosure::point(m)));
        }
        if dm.is_negative() {
            a = mid;
        } else {
            b = mid;
        }
        steps += 1;
        if steps > MAX_BISECTION_STEPS {
            return Err(BoundsError::RefinementCap("star_min bisection".into()));
        }
    }
}

/// Which formula produced an `AlphaBound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaBranch {
    ClosedForm,
    Cubic,
}

/// Certified enclosure of α̲(d), the Solomyak lower bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaBound {
    #[serde(with = "rat_str")]
    pub d: Rational,
    pub value: RatioValue,
    pub branch: AlphaBranch,
}

impl AlphaBound {
    /// Re-check the enclosure from its stored numbers alone: the closed-form
    /// branch brackets d between the squares of x/(1−x) at the endpoints,
    /// the cubic branch brackets a sign change of the cubic.
    pub fn replay(&self) -> bool {
        let (lo, hi) = (self.value.lower(), self.value.upper());
        if lo > hi || !lo.is_positive() || *hi >= Rational::one() {
            return false;
        }
        match self.branch {
            AlphaBranch::ClosedForm => {
                // α = √d/(1+√d) ⇔ (α/(1−α))² = d, and t ↦ (t/(1−t))² is increasing
                let sq = |x: &Rational| {
                    let t = x / (Rational::one() - x);
                    &t * &t
                };
                sq(lo) <= self.d && self.d <= sq(hi)
            }
            AlphaBranch::Cubic => {
                let rlo = cubic_residual(&self.d, lo);
                let rhi = cubic_residual(&self.d, hi);
                if self.value.is_exact() {
                    rlo.is_zero()
                } else {
                    rlo.is_negative() && rhi.is_positive()
                }
            }
        }
    }
}

/// The cubic 2(x−1)³ + (4−2d)(x−1)² + 3(x−1) + 1 whose unique real root is
/// α̲(d) on the cubic branch.
pub fn cubic_residual(d: &Rational, x: &Rational) -> Rational {
    let t = x - Rational::one();
    let t2 = &t * &t;
    let t3 = &t2 * &t;
    Rational::from_integer(2.into()) * t3
        + (Rational::from_integer(4.into()) - Rational::from_integer(2.into()) * d) * t2
        + Rational::from_integer(3.into()) * t
        + Rational::one()
}

/// True when d ≤ 1/(3+2√2) = 3−2√2, decided exactly: for 0 < d ≤ 1/2 this
/// is equivalent to d² − 6d + 1 ≥ 0.
pub fn closed_form_applies(d: &Rational) -> bool {
    let disc = d * d - Rational::from_integer(6.into()) * d + Rational::one();
    !disc.is_negative()
}

fn validate_d(d: &Rational) -> Result<(), BoundsError> {
    if !d.is_positive() || *d > rat(1, 2) {
        return Err(BoundsError::DOutOfRange(d.to_string()));
    }
    Ok(())
}

/// Certified enclosure of the cubic-branch root in (0,1), of width ≤ tol.
pub fn cubic_alpha_root(d: &Rational, tol: &Rational) -> Result<RatioValue, BoundsError> {
    if !tol.is_positive() {
        return Err(BoundsError::BadTolerance);
    }
    let mut a = Rational::zero();
    let mut b = Rational::one();
    debug_assert!(cubic_residual(d, &a).is_negative());
    let mut steps = 0;
    while &b - &a > *tol {
        let mid = (&a + &b) / Rational::from_integer(2.into());
        let r = cubic_residual(d, &mid);
        if r.is_zero() {
            return RatioValue::exact(mid).map_err(|e| BoundsError::BadStarFunction(e.to_string()));
        }
        if r.is_negative() {
            a = mid;
        } else {
            b = mid;
        }
        steps += 1;
        if steps > MAX_BISECTION_STEPS {
            return Err(BoundsError::RefinementCap("cubic bisection".into()));
        }
    }
    RatioValue::enclosure(a, b).map_err(|e| BoundsError::BadStarFunction(e.to_string()))
}

/// α̲(d) for 0 < d ≤ 1/2, as a certified enclosure of width ≤ tol
/// (exact when the formula lands on a rational).
pub fn alpha_lower(d: &Rational, tol: &Rational) -> Result<AlphaBound, BoundsError> {
    validate_d(d)?;
    if !tol.is_positive() {
        return Err(BoundsError::BadTolerance);
    }
    if closed_form_applies(d) {
        let quarter_tol = tol / Rational::from_integer(4.into());
        let (slo, shi) = sqrt_enclosure(d, &quarter_tol);
        let value = if slo == shi {
            RatioValue::exact(&slo / (Rational::one() + &slo))
        } else {
            // t ↦ t/(1+t) is increasing and 1-Lipschitz on t ≥ 0
            RatioValue::enclosure(
                &slo / (Rational::one() + &slo),
                &shi / (Rational::one() + &shi),
            )
        }
        .map_err(|e| BoundsError::BadStarFunction(e.to_string()))?;
        Ok(AlphaBound {
            d: d.clone(),
            value,
            branch: AlphaBranch::ClosedForm,
        })
    } else {
        let value = cubic_alpha_root(d, tol)?;
        Ok(AlphaBound {
            d: d.clone(),
            value,
            branch: AlphaBranch::Cubic,
        })
    }
}

/// Independent route to α̲(d): locate the (*)-function g with min g = −d by
/// bracketing over n and bisecting γ, and return the enclosure of its
/// critical point. Oracle for `alpha_lower`; the two must agree within 2·tol.
pub fn alpha_lower_via_star(d: &Rational, tol: &Rational) -> Result<Enclosure, BoundsError> {
    validate_d(d)?;
    if !tol.is_positive() {
        return Err(BoundsError::BadTolerance);
    }
    let target = -d.clone();
    let mut inner = tol / Rational::from_integer(8.into());

    // Find n with min g_{n,−1} ≤ −d: the all-γ=−1 minima decrease in n.
    let mut n = 1u32;
    let n = loop {
        let g = StarFunction::new(n, rat(-1, 1))?;
        let (_, m) = star_min(&g, &inner)?;
        if m.hi <= target {
            break n;
        }
        if m.lo > target {
            n += 1;
            if n > 64 {
                return Err(BoundsError::RefinementCap("star n bracket".into()));
            }
            continue;
        }
        // enclosure straddles −d; refine
        inner = &inner / Rational::from_integer(4.into());
        if inner.denom().bits() > 4096 {
            return Err(BoundsError::RefinementCap("star n separation".into()));
        }
    };

    // Bisect γ ∈ [−1, 1]: min g_{n,γ} is increasing and x*(γ) decreasing.
    let mut glo = rat(-1, 1);
    let mut ghi = rat(1, 1);
    let mut steps = 0;
    loop {
        let f_lo = StarFunction::new(n, glo.clone())?;
        let f_hi = StarFunction::new(n, ghi.clone())?;
        let (x_hi_side, _) = star_min(&f_lo, &inner)?; // upper end of x*
        let (x_lo_side, _) = star_min(&f_hi, &inner)?; // lower end of x*
        let enc_lo = x_lo_side.lo.clone();
        let enc_hi = x_hi_side.hi.clone();
        if &enc_hi - &enc_lo <= *tol {
            return Ok(Enclosure {
                lo: enc_lo,
                hi: enc_hi,
            });
        }
        let gmid = (&glo + &ghi) / Rational::from_integer(2.into());
        let gm = StarFunction::new(n, gmid.clone())?;
        let (xm, m) = star_min(&gm, &inner)?;
        if m.is_point() && m.lo == target {
            return Ok(xm);
        }
        if m.hi < target {
            glo = gmid;
        } else if m.lo > target {
            ghi = gmid;
        } else {
            inner = &inner / Rational::from_integer(4.into());
            if inner.denom().bits() > 4096 {
                return Err(BoundsError::RefinementCap("gamma separation".into()));
            }
            continue;
        }
        steps += 1;
        if steps > MAX_BISECTION_STEPS {
            return Err(BoundsError::RefinementCap("gamma bisection".into()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{decimal_string, parse_rational, rat_int};

    fn tol12() -> Rational {
        rat(1, 1_000_000_000_000)
    }

    #[test]
    fn star_eval_at_zero() {
        let g = StarFunction::new(1, rat(-1, 1)).unwrap();
        assert_eq!(star_eval(&g, &Rational::zero()).unwrap(), Rational::zero());
        assert!(star_eval(&g, &rat_int(1)).is_err());
        assert!(star_eval(&g, &rat(-1, 2)).is_err());
    }

    #[test]
    fn star_min_n1_matches_closed_form() {
        // min of −x + Σ_{k≥2} xᵏ is −1/(3+2√2) = 2√2 − 3 at x* = 1 − 1/√2
        let g = StarFunction::new(1, rat(-1, 1)).unwrap();
        let (x, m) = star_min(&g, &tol12()).unwrap();
        let (s2lo, s2hi) = sqrt_enclosure(&rat_int(2), &tol12());
        let min_lo = Rational::from_integer(2.into()) * &s2lo - rat_int(3);
        let min_hi = Rational::from_integer(2.into()) * &s2hi - rat_int(3);
        assert!(m.lo <= min_hi && min_lo <= m.hi);
        // x* = 1 − 1/√2 = 1 − √2/2
        let x_lo = Rational::one() - &s2hi / Rational::from_integer(2.into());
        let x_hi = Rational::one() - &s2lo / Rational::from_integer(2.into());
        assert!(x.lo <= x_hi && x_lo <= x.hi);
    }

    #[test]
    fn star_min_n2_is_exactly_minus_half() {
        let g = StarFunction::new(2, rat(-1, 1)).unwrap();
        let (x, m) = star_min(&g, &tol12()).unwrap();
        assert!(m.contains(&rat(-1, 2)));
        assert!(m.width() <= tol12());
        assert!(x.contains(&rat(1, 2)));
    }

    #[test]
    fn star_min_gamma_zero_sits_between() {
        let g = StarFunction::new(1, Rational::zero()).unwrap();
        let (_, m) = star_min(&g, &rat(1, 1_000_000)).unwrap();
        // larger γ ⇒ pointwise larger g ⇒ larger min
        assert!(m.lo > rat(-18, 100)); // −1/(3+2√2) ≈ −0.1716
        assert!(m.hi <= Rational::zero());
    }

    #[test]
    fn star_min_soundness_probes() {
        for (n, gamma) in [(1, rat(-1, 1)), (1, rat(1, 2)), (2, rat(-1, 3)), (3, rat(-1, 1))] {
            let g = StarFunction::new(n, gamma).unwrap();
            let (_, m) = star_min(&g, &rat(1, 1_000_000)).unwrap();
            for p in [rat(1, 10), rat(1, 4), rat(1, 2), rat(3, 4), rat(9, 10)] {
                assert!(m.lo <= star_eval(&g, &p).unwrap());
            }
        }
    }

    #[test]
    fn alpha_table_from_remark() {
        // α̲(1/9) = 1/4 exactly (closed form, d a perfect rational square)
        let a = alpha_lower(&rat(1, 9), &tol12()).unwrap();
        assert_eq!(a.branch, AlphaBranch::ClosedForm);
        assert_eq!(a.value, RatioValue::Exact(rat(1, 4)));
        assert!(a.replay());

        // cubic branch values from the table
        let cases = [
            (rat(1, 5), "0.32482"),
            (rat(1, 4), "0.37097"),
            (rat(1, 3), "0.42773"),
        ];
        let eps = rat(5, 100_000);
        for (d, expect) in cases {
            let a = alpha_lower(&d, &tol12()).unwrap();
            assert_eq!(a.branch, AlphaBranch::Cubic);
            let target = parse_rational(expect).unwrap();
            let mid = a.value.midpoint();
            assert!((mid - &target).abs() <= eps, "α̲({d}) far from {expect}");
            assert!(a.replay());
        }

        // α̲(1/2) = 1/2 exactly (the cubic has the rational root 1/2)
        let a = alpha_lower(&rat(1, 2), &tol12()).unwrap();
        assert_eq!(a.value, RatioValue::Exact(rat(1, 2)));
        assert!(a.replay());
    }

    #[test]
    fn alpha_domain_checks() {
        assert!(alpha_lower(&Rational::zero(), &tol12()).is_err());
        assert!(alpha_lower(&rat(-1, 5), &tol12()).is_err());
        assert!(alpha_lower(&rat(3, 5), &tol12()).is_err());
    }

    #[test]
    fn branches_agree_at_the_boundary() {
        // 1/(3+2√2) = 3−2√2 ≈ 0.1715728752538099…
        let boundary_lo = parse_rational("0.17157287525380").unwrap();
        let boundary_hi = parse_rational("0.17157287525382").unwrap();
        assert!(closed_form_applies(&boundary_lo));
        assert!(!closed_form_applies(&boundary_hi));
        let tol = rat(1, 100_000_000);
        let closed = alpha_lower(&boundary_lo, &tol).unwrap();
        let cubic = alpha_lower(&boundary_hi, &tol).unwrap();
        let diff = (closed.value.midpoint() - cubic.value.midpoint()).abs();
        assert!(diff <= Rational::from_integer(2.into()) * &tol);
        // and the cubic evaluated on the closed-form d still brackets its root
        let direct = cubic_alpha_root(&boundary_lo, &tol).unwrap();
        let diff = (closed.value.midpoint() - direct.midpoint()).abs();
        assert!(diff <= Rational::from_integer(2.into()) * &tol);
    }

    #[test]
    fn cardano_cross_check() {
        // the radical expression for the cubic root, evaluated in floats
        for d in [0.2f64, 0.25, 1.0 / 3.0, 0.45] {
            let inner = (1.0 - 8.0 * d.powi(3) + 39.0 * d * d - 6.0 * d).sqrt();
            let r = (4.0 * d.powi(3) - 24.0 * d * d + 21.0 * d - 5.0 + 3.0 * 3.0f64.sqrt() * inner)
                .cbrt();
            let c2 = 2.0f64.cbrt();
            let alpha = (1.0 + d) / 3.0 + c2 * r / 6.0 + (2.0 * d * d - 8.0 * d - 1.0) / (3.0 * c2 * r);
            let exact = alpha_lower(&parse_rational(&format!("{d:.12}")).unwrap(), &tol12())
                .unwrap()
                .value
                .midpoint();
            let mid: f64 = crate::rational::to_f64(&exact);
            assert!((alpha - mid).abs() < 1e-9, "d={d}: cardano {alpha} vs bisect {mid}");
        }
    }

    #[test]
    fn via_star_agrees_on_table() {
        let tol = rat(1, 1_000_000);
        for d in [rat(1, 9), rat(1, 5), rat(1, 4), rat(1, 3)] {
            let direct = alpha_lower(&d, &tol).unwrap();
            let star = alpha_lower_via_star(&d, &tol).unwrap();
            let diff = (direct.value.midpoint() - star.midpoint()).abs();
            assert!(
                diff <= Rational::from_integer(2.into()) * &tol,
                "d = {d}: {} vs {}",
                decimal_string(&direct.value.midpoint(), 8),
                decimal_string(&star.midpoint(), 8),
            );
        }
    }

    #[test]
    fn monotone_on_grid() {
        let tol = rat(1, 10_000_000);
        let mut prev: Option<Rational> = None;
        for k in 1..=25 {
            let d = rat(k, 50);
            let a = alpha_lower(&d, &tol).unwrap();
            let lo = a.value.lower().clone();
            if let Some(p) = prev {
                // non-decreasing up to enclosure width
                assert!(lo >= p - Rational::from_integer(2.into()) * &tol);
            }
            prev = Some(a.value.upper().clone());
        }
    }

    #[test]
    fn cubic_bracketing_witness() {
        let d = rat(1, 5);
        let v = cubic_alpha_root(&d, &tol12()).unwrap();
        assert!(cubic_residual(&d, v.lower()).is_negative());
        assert!(cubic_residual(&d, v.upper()).is_positive());
    }
}

//! Deterministic analytic quantities: the giant-component fixed point, the
//! cascade recursion `beta_k = 1 - exp(-c_k beta_{k-1}^2 beta_k)`, the
//! percolation criterion, connection probabilities, Poisson limits, the
//! degree window, CLT constants and average-distance predictions.
//!
//! Everything here is generic over [`Real`], so the same code runs in `f32`
//! and `f64`. Probabilities of the form `1 - (1 - p)^m` are evaluated as
//! `-expm1(m * ln_1p(-p))` to avoid cancellation for large `N`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rule::CRule;
use crate::scalar::Real;

/// Lower end of the bisection bracket.
pub const BRACKET_EPS: f64 = 1e-9;

/// `lambda <= 1 + SUBCRITICAL_MARGIN` has no usable positive root.
pub const SUBCRITICAL_MARGIN: f64 = 1e-9;

/// Margins smaller than this are reported as boundary cases.
pub const BOUNDARY_TOL: f64 = 1e-9;

fn pow_n<T: Real>(n: u64, e: i64) -> T {
    T::count(n).powi(e as i32)
}

/// `1 - (1 - p)^m`, accurate for tiny `p`.
pub fn one_minus_pow<T: Real>(p: T, m: T) -> T {
    -(m * (-p).ln_1p()).exp_m1()
}

/// Solves `u = exp(-lambda (1 - u))` for the complement `u = 1 - beta` of the
/// positive root of `beta = 1 - exp(-lambda beta)`.
///
/// Bisection on `beta` over `[1e-9, 1]` followed by fixed-point iteration on
/// the complement, which contracts with rate `lambda * u < 1` and recovers
/// full relative precision of `u` when `beta` rounds to one.
pub fn fixed_point_complement<T: Real>(lambda: T) -> Result<T> {
    if !(lambda > T::one() + T::lit(SUBCRITICAL_MARGIN)) || !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "fixed point needs lambda > 1, got {lambda}"
        )));
    }
    let f = |t: T| -(-lambda * t).exp_m1() - t;
    let (mut lo, mut hi) = (T::lit(BRACKET_EPS), T::one());
    for _ in 0..256 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta = (lo + hi) / T::lit(2.0);

    let residual = |u: T| ((-lambda * (T::one() - u)).exp() - u).abs();
    let mut u = T::one() - beta;
    let mut best = residual(u);
    for _ in 0..64 {
        let next = (-lambda * (T::one() - u)).exp();
        let r = residual(next);
        if r > best || next == u {
            if r <= best {
                u = next;
            }
            break;
        }
        u = next;
        best = r;
    }
    Ok(u)
}

/// Positive root `beta` of `beta = 1 - exp(-lambda beta)` for `lambda > 1`.
pub fn solve_fixed_point<T: Real>(lambda: T) -> Result<T> {
    fixed_point_complement(lambda).map(|u| T::one() - u)
}

/// `|beta - (1 - exp(-lambda beta))|`.
pub fn fixed_point_residual<T: Real>(lambda: T, beta: T) -> T {
    (beta + (-lambda * beta).exp_m1()).abs()
}

/// One level of the cascade recursion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelFixedPoint<T: Real> {
    pub level: usize,
    pub c: T,
    /// `c_k beta_{k-1}^2`.
    pub lambda: T,
    pub beta: T,
    /// `1 - beta`, computed directly.
    pub complement: T,
}

/// Runs `beta_k = fp(c_k beta_{k-1}^2)` from `beta_0 = 1` over all of `c`.
pub fn beta_recursion<T: Real>(c: &[T]) -> Result<Vec<LevelFixedPoint<T>>> {
    let mut out = Vec::with_capacity(c.len());
    let mut prev = T::one();
    for (i, &ck) in c.iter().enumerate() {
        let level = i + 1;
        if !(ck > T::zero()) {
            return Err(Error::Domain(format!("c_{level} = {ck} is not positive")));
        }
        let lambda = ck * prev * prev;
        let complement = fixed_point_complement(lambda).map_err(|_| Error::RecursionBreakdown {
            level,
            lambda: lambda.as_f64(),
        })?;
        let beta = T::one() - complement;
        out.push(LevelFixedPoint {
            level,
            c: ck,
            lambda,
            beta,
            complement,
        });
        prev = beta;
    }
    Ok(out)
}

/// Truncated products `prod_{j<=k} beta_j` for `k = 1..`.
pub fn beta_products<T: Real>(levels: &[LevelFixedPoint<T>]) -> Vec<T> {
    levels
        .iter()
        .scan(T::one(), |acc, l| {
            *acc = *acc * l.beta;
            Some(*acc)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Percolation criterion

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Percolates,
    DoesNotPercolate,
    Undetermined,
}

/// Hypotheses of the positivity lemma for `prod beta_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LemmaHypotheses {
    /// `c_k` non-decreasing (whole sequence; `None` for finite lists).
    pub nondecreasing: Option<bool>,
    /// `c_k -> infinity` (`None` for finite lists).
    pub unbounded: Option<bool>,
    /// `c_1 > 2 ln 2`.
    pub c1_above_threshold: Option<bool>,
    /// `c_2 > 8 ln 2`.
    pub c2_above_threshold: Option<bool>,
}

/// Individually sufficient conditions for percolation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SufficientConditions {
    /// `sum c_k^(-delta) < infinity` for some `delta > 0`.
    pub power_summable: Option<bool>,
    /// `liminf c_k / k > 0`.
    pub linear_growth: Option<bool>,
    /// `liminf (c_{k+1} - c_k) > 0`.
    pub increments_positive: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub verdict: Verdict,
    /// How the tail of `sum exp(-c_k)` behaves.
    pub tail: String,
    /// Number of terms in `partial_sum`.
    pub terms: usize,
    /// `sum_{k <= terms} exp(-c_k)`.
    pub partial_sum: f64,
    pub last_term: f64,
    pub hypotheses: LemmaHypotheses,
    pub sufficient: SufficientConditions,
}

/// Decides whether `sum exp(-c_k) < infinity`, analytically for parametric
/// rules. Explicit lists yield `Undetermined` with their partial sum.
pub fn percolation_criterion(rule: &CRule, tail_limit: usize) -> Result<CriterionReport> {
    rule.validate()?;
    let terms = match rule {
        CRule::List { values } => values.len().min(tail_limit),
        _ => tail_limit,
    };
    let mut partial_sum = 0.0;
    let mut last_term = 0.0;
    for k in 1..=terms {
        let c = rule.c(k).unwrap_or(f64::NAN);
        if !(c > 0.0) {
            return Err(Error::Domain(format!("c_{k} = {c} is not positive")));
        }
        last_term = (-c).exp();
        partial_sum += last_term;
    }
    let two_ln2 = 2.0 * std::f64::consts::LN_2;
    let c1 = rule.c(1).map(|c| c > two_ln2);
    let c2 = rule.c(2).map(|c| c > 4.0 * two_ln2);

    let (verdict, tail, hypotheses, sufficient) = match *rule {
        CRule::List { ref values } => {
            let prefix_monotone = values.windows(2).all(|w| w[1] >= w[0]);
            (
                Verdict::Undetermined,
                format!(
                    "finite list of {} values: convergence is a tail property; undetermined beyond k = {terms} (prefix {})",
                    values.len(),
                    if prefix_monotone { "non-decreasing" } else { "not monotone" }
                ),
                LemmaHypotheses {
                    nondecreasing: if prefix_monotone { None } else { Some(false) },
                    unbounded: None,
                    c1_above_threshold: c1,
                    c2_above_threshold: c2,
                },
                SufficientConditions {
                    power_summable: None,
                    linear_growth: None,
                    increments_positive: None,
                },
            )
        }
        CRule::ALog { a, .. } => {
            let converges = a > 1.0;
            (
                if converges {
                    Verdict::Percolates
                } else {
                    Verdict::DoesNotPercolate
                },
                format!(
                    "exp(-a ln k) = k^(-{a}): p-series {} since a {} 1",
                    if converges { "converges" } else { "diverges" },
                    if converges { ">" } else { "<=" }
                ),
                LemmaHypotheses {
                    nondecreasing: Some(true),
                    unbounded: Some(true),
                    c1_above_threshold: c1,
                    c2_above_threshold: c2,
                },
                SufficientConditions {
                    power_summable: Some(false),
                    linear_growth: Some(false),
                    increments_positive: Some(false),
                },
            )
        }
        CRule::Linear { slope, .. } => {
            if slope < 0.0 {
                return Err(Error::Domain(format!(
                    "linear rule with slope {slope} < 0 eventually produces non-positive c_k"
                )));
            }
            let grows = slope > 0.0;
            (
                if grows {
                    Verdict::Percolates
                } else {
                    Verdict::DoesNotPercolate
                },
                if grows {
                    format!("geometric tail with ratio exp(-{slope}) < 1: converges")
                } else {
                    "constant c_k: terms do not vanish, diverges".to_string()
                },
                LemmaHypotheses {
                    nondecreasing: Some(true),
                    unbounded: Some(grows),
                    c1_above_threshold: c1,
                    c2_above_threshold: c2,
                },
                SufficientConditions {
                    power_summable: Some(grows),
                    linear_growth: Some(grows),
                    increments_positive: Some(grows),
                },
            )
        }
    };
    Ok(CriterionReport {
        verdict,
        tail,
        terms,
        partial_sum,
        last_term,
        hypotheses,
        sufficient,
    })
}

// ---------------------------------------------------------------------------
// Numeric verification of the positivity lemma

/// Outcome of one inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check<T: Real> {
    pub holds: bool,
    /// The inequality is attained up to `BOUNDARY_TOL`.
    pub boundary: bool,
    /// Signed slack; positive when the inequality holds.
    pub margin: T,
}

impl<T: Real> Check<T> {
    fn strict(margin: T) -> Self {
        let boundary = margin.abs() <= T::lit(BOUNDARY_TOL);
        Self {
            holds: margin > T::zero() && !boundary,
            boundary,
            margin,
        }
    }

    fn weak(margin: T) -> Self {
        Self {
            holds: margin >= T::zero(),
            boundary: margin.abs() <= T::lit(BOUNDARY_TOL),
            margin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma21Level<T: Real> {
    pub level: usize,
    pub c: T,
    pub lambda: T,
    pub beta: T,
    pub complement: T,
    /// `beta_k > 1/2`.
    pub beta_above_half: Check<T>,
    /// `lambda_k > 1`.
    pub lambda_above_one: Check<T>,
    /// `C exp(-lambda_k)`, `C = e^(2/e)`.
    pub bound_lambda: T,
    pub complement_below_lambda_bound: Check<T>,
    /// `C_1 exp(-c_{k-1})`, `C_1 = e^(2/e) e^(16/e)`; absent at level 1.
    pub bound_previous: Option<T>,
    pub complement_below_previous_bound: Option<Check<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma21Report<T: Real> {
    pub hypotheses: LemmaHypotheses,
    pub levels: Vec<Lemma21Level<T>>,
    /// First level where `c_k beta_{k-1}^2 <= 1`, if any.
    pub breakdown: Option<usize>,
    pub all_hold: bool,
}

/// `C = e^(2/e)`.
pub fn lemma_constant<T: Real>() -> T {
    (T::lit(2.0) / T::lit(std::f64::consts::E)).exp()
}

/// `C_1 = C e^(16/e)`.
pub fn lemma_constant_1<T: Real>() -> T {
    lemma_constant::<T>() * (T::lit(16.0) / T::lit(std::f64::consts::E)).exp()
}

/// Checks the four inequalities of the positivity lemma level by level.
/// Violations are reported, not raised.
pub fn lemma21_verify<T: Real>(c: &[T]) -> Result<Lemma21Report<T>> {
    if let Some((i, ck)) = c.iter().enumerate().find(|(_, ck)| !(**ck > T::zero())) {
        return Err(Error::Domain(format!("c_{} = {ck} is not positive", i + 1)));
    }
    let big_c = lemma_constant::<T>();
    let big_c1 = lemma_constant_1::<T>();
    let two_ln2 = T::lit(2.0 * std::f64::consts::LN_2);
    let hypotheses = LemmaHypotheses {
        nondecreasing: Some(c.windows(2).all(|w| w[1] >= w[0])),
        unbounded: None,
        c1_above_threshold: c.first().map(|&v| v > two_ln2),
        c2_above_threshold: c.get(1).map(|&v| v > T::lit(4.0) * two_ln2),
    };

    let mut levels = Vec::with_capacity(c.len());
    let mut breakdown = None;
    let mut prev = T::one();
    for (i, &ck) in c.iter().enumerate() {
        let level = i + 1;
        let lambda = ck * prev * prev;
        let complement = match fixed_point_complement(lambda) {
            Ok(u) => u,
            Err(_) => {
                breakdown = Some(level);
                break;
            }
        };
        let beta = T::one() - complement;
        let bound_lambda = big_c * (-lambda).exp();
        let bound_previous = (i > 0).then(|| big_c1 * (-c[i - 1]).exp());
        levels.push(Lemma21Level {
            level,
            c: ck,
            lambda,
            beta,
            complement,
            beta_above_half: Check::strict(beta - T::lit(0.5)),
            lambda_above_one: Check::strict(lambda - T::one()),
            bound_lambda,
            complement_below_lambda_bound: Check::weak(bound_lambda - complement),
            bound_previous,
            complement_below_previous_bound: bound_previous.map(|b| Check::weak(b - complement)),
        });
        prev = beta;
    }
    let all_hold = breakdown.is_none()
        && levels.iter().all(|l| {
            l.beta_above_half.holds
                && l.lambda_above_one.holds
                && l.complement_below_lambda_bound.holds
                && l.complement_below_previous_bound.is_none_or(|ch| ch.holds)
        });
    Ok(Lemma21Report {
        hypotheses,
        levels,
        breakdown,
        all_hold,
    })
}

// ---------------------------------------------------------------------------
// Connection probabilities

/// Probability that two fixed `(k-1)`-balls of a `k`-ball are joined by at
/// least one direct edge, with its elementary bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallConnection<T: Real> {
    pub exact: T,
    /// `c_k/N - c_k^2 / (2 N^2)`; equals `exact` at `k = 1`.
    pub lower: T,
    /// `c_k / N`.
    pub upper: T,
}

fn check_probability<T: Real>(c: T, p: T) -> Result<()> {
    if !(c > T::zero()) {
        return Err(Error::Domain(format!("connection constant {c} is not positive")));
    }
    if !(p <= T::one()) {
        return Err(Error::Domain(format!("edge probability {p} exceeds 1")));
    }
    Ok(())
}

/// `p^{N,k} = 1 - (1 - c_k/N^(2k-1))^(N^(2(k-1)))`, and `c_1/N` for `k = 1`.
pub fn ball_connection_prob<T: Real>(n: u64, k: u32, c: T) -> Result<BallConnection<T>> {
    if k == 0 {
        return Err(Error::Domain("ball connection needs k >= 1".into()));
    }
    if n < 2 {
        return Err(Error::Domain(format!("N must be >= 2, got {n}")));
    }
    let nn = T::count(n);
    let p = c / pow_n::<T>(n, 2 * k as i64 - 1);
    check_probability(c, p)?;
    let upper = c / nn;
    if k == 1 {
        return Ok(BallConnection {
            exact: upper,
            lower: upper,
            upper,
        });
    }
    let m = pow_n::<T>(n, 2 * (k as i64 - 1));
    Ok(BallConnection {
        exact: one_minus_pow(p, m),
        lower: upper - c * c / (T::lit(2.0) * nn * nn),
        upper,
    })
}

/// Probability of a direct edge between two `k`-balls at distance `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExternalConnection<T: Real> {
    /// `1 - (1 - c_j/N^(2j-1))^(N^(2k))`.
    pub exact: T,
    /// `c_j / N^(2(j-k)-1)`.
    pub asymptotic: T,
    /// `exact / asymptotic`.
    pub ratio: T,
}

pub fn kball_external_prob<T: Real>(n: u64, k: u32, j: u32, c: T) -> Result<ExternalConnection<T>> {
    if j <= k {
        return Err(Error::Domain(format!("need j > k, got k = {k}, j = {j}")));
    }
    if n < 2 {
        return Err(Error::Domain(format!("N must be >= 2, got {n}")));
    }
    let p = c / pow_n::<T>(n, 2 * j as i64 - 1);
    check_probability(c, p)?;
    let exact = one_minus_pow(p, pow_n::<T>(n, 2 * k as i64));
    let asymptotic = c / pow_n::<T>(n, 2 * (j as i64 - k as i64) - 1);
    Ok(ExternalConnection {
        exact,
        asymptotic,
        ratio: exact / asymptotic,
    })
}

// ---------------------------------------------------------------------------
// Laws of per-class degrees

/// `ln j!`: exact summation for small `j`, Stirling series beyond.
pub fn ln_factorial<T: Real>(j: u64) -> T {
    if j < 2 {
        return T::zero();
    }
    if j <= 256 {
        return (2..=j).fold(T::zero(), |acc, i| acc + T::count(i).ln());
    }
    let x = T::count(j);
    let half_ln_2pi = T::lit(0.918_938_533_204_672_8);
    let inv = T::one() / x;
    let inv2 = inv * inv;
    (x + T::lit(0.5)) * x.ln() - x
        + half_ln_2pi
        + inv * (T::lit(1.0 / 12.0) - inv2 * (T::lit(1.0 / 360.0) - inv2 * T::lit(1.0 / 1260.0)))
}

/// Poisson(`mean`) probability mass at `j`.
pub fn poisson_pmf<T: Real>(mean: T, j: u64) -> T {
    if mean == T::zero() {
        return if j == 0 { T::one() } else { T::zero() };
    }
    (T::count(j) * mean.ln() - mean - ln_factorial::<T>(j)).exp()
}

/// Binomial(`trials`, `p`) probability masses at `0..=cutoff`.
pub fn binomial_pmf<T: Real>(trials: u64, p: T, cutoff: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(cutoff + 1);
    let mut cur = (T::count(trials) * (-p).ln_1p()).exp();
    let odds = p / (T::one() - p);
    for j in 0..=cutoff as u64 {
        if j > trials {
            out.push(T::zero());
            continue;
        }
        out.push(cur);
        cur = cur * T::count(trials - j) / T::count(j + 1) * odds;
    }
    out
}

/// Total-variation distance between two pmfs on `0..len`, adding half the
/// untracked tail mass of each so that the result never underestimates.
pub fn total_variation<T: Real>(a: &[T], b: &[T]) -> T {
    let len = a.len().max(b.len());
    let get = |v: &[T], i: usize| v.get(i).copied().unwrap_or(T::zero());
    let mut diff = T::zero();
    let (mut sa, mut sb) = (T::zero(), T::zero());
    for i in 0..len {
        diff = diff + (get(a, i) - get(b, i)).abs();
        sa = sa + get(a, i);
        sb = sb + get(b, i);
    }
    let tails = (T::one() - sa).max(T::zero()) + (T::one() - sb).max(T::zero());
    (diff + tails) / T::lit(2.0)
}

/// Exact and limiting laws of `Y^(k)`, the number of direct edges from a
/// point to points at distance exactly `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YPrediction<T: Real> {
    pub class: u32,
    /// `N^k - N^(k-1)`.
    pub trials: u64,
    /// `c_k / N^(2k-1)`.
    pub p: T,
    /// Binomial pmf on `0..=cutoff`.
    pub pmf: Vec<T>,
    /// Poisson(`c_1`) pmf on `0..=cutoff`; `k = 1` only.
    pub poisson_limit: Option<Vec<T>>,
    /// Exact `P[Y > 0]`.
    pub prob_positive: T,
    /// `c_k / N^(k-1)`; `k > 1` only.
    pub prob_positive_asymptotic: Option<T>,
    /// Exact `P[Y = 1 | Y > 0]`; tends to 1 for `k > 1`.
    pub conditional_one: T,
    pub mean: T,
}

pub fn y_predictions<T: Real>(n: u64, k: u32, c: T, cutoff: usize) -> Result<YPrediction<T>> {
    if k == 0 {
        return Err(Error::Domain("Y^(k) needs k >= 1".into()));
    }
    let trials = n
        .checked_pow(k)
        .map(|v| v - n.pow(k - 1))
        .ok_or_else(|| Error::Domain(format!("N^k overflows for N = {n}, k = {k}")))?;
    let p = c / pow_n::<T>(n, 2 * k as i64 - 1);
    check_probability(c, p)?;
    let pmf = binomial_pmf(trials, p, cutoff);
    let prob_positive = one_minus_pow(p, T::count(trials));
    let poisson_limit = (k == 1).then(|| (0..=cutoff as u64).map(|j| poisson_pmf(c, j)).collect());
    let prob_positive_asymptotic = (k > 1).then(|| c / pow_n::<T>(n, k as i64 - 1));
    let conditional_one = pmf.get(1).copied().unwrap_or(T::zero()) / prob_positive;
    Ok(YPrediction {
        class: k,
        trials,
        p,
        pmf,
        poisson_limit,
        prob_positive,
        prob_positive_asymptotic,
        conditional_one,
        mean: T::count(trials) * p,
    })
}

// ---------------------------------------------------------------------------
// Degree window

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowEntry<T: Real> {
    pub j: u64,
    pub pmf: T,
    /// `(1 - delta) (2 pi j)^(-1/2)`.
    pub lower: T,
    /// `(2 pi j)^(-1/2)`.
    pub upper: T,
    /// `pmf / upper`.
    pub ratio: T,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeWindow<T: Real> {
    pub c: T,
    pub half_width: T,
    pub delta: T,
    pub entries: Vec<WindowEntry<T>>,
    pub all_hold: bool,
    /// Smallest integer `c` at which the bracket holds on the whole window,
    /// located by doubling then bisection.
    pub min_c: Option<u64>,
}

fn window_entries<T: Real>(c: T, m: T, delta: T) -> Vec<WindowEntry<T>> {
    let lo = (c - m).floor().max(T::zero()).to_u64().unwrap_or(0);
    let hi = (c + m).ceil().to_u64().unwrap_or(0);
    let two_pi = T::lit(2.0 * std::f64::consts::PI);
    (lo.max(1)..=hi)
        .filter(|&j| (T::count(j) - c).abs() < m)
        .map(|j| {
            let pmf = poisson_pmf(c, j);
            let upper = (two_pi * T::count(j)).sqrt().recip();
            let lower = (T::one() - delta) * upper;
            WindowEntry {
                j,
                pmf,
                lower,
                upper,
                ratio: pmf / upper,
                holds: pmf >= lower && pmf <= upper,
            }
        })
        .collect()
}

/// Compares `c^j e^(-c) / j!` with the `j^(-1/2)` envelope on `|j - c| < M`.
pub fn degree_window<T: Real>(c: T, half_width: T, delta: T) -> Result<DegreeWindow<T>> {
    if !(c > T::zero()) || !(half_width > T::zero()) || !(delta > T::zero() && delta < T::one()) {
        return Err(Error::Domain(format!(
            "degree window needs c > 0, M > 0, 0 < delta < 1 (got {c}, {half_width}, {delta})"
        )));
    }
    let entries = window_entries(c, half_width, delta);
    let all_hold = entries.iter().all(|e| e.holds);
    let holds_at = |cc: u64| window_entries(T::count(cc), half_width, delta).iter().all(|e| e.holds);
    let mut hi = 1u64;
    while !holds_at(hi) {
        if hi >= 1 << 40 {
            hi = 0;
            break;
        }
        hi *= 2;
    }
    let min_c = (hi > 0).then(|| {
        let mut lo = hi / 2;
        if hi == 1 {
            return 1;
        }
        // invariant: fails at lo (or lo = 0), holds at hi
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if holds_at(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    });
    Ok(DegreeWindow {
        c,
        half_width,
        delta,
        entries,
        all_hold,
        min_c,
    })
}

// ---------------------------------------------------------------------------
// Fluctuations and distances

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CltLevel<T: Real> {
    pub level: usize,
    pub lambda: T,
    pub beta: T,
    /// `1 - lambda (1 - beta)`: minus the slope of `1 - t - exp(-lambda t)` at `beta`.
    pub mu: T,
    /// `beta (1 - beta) / mu^2`.
    pub sigma2: T,
    /// `(prod_{j<k} beta_j)^2`.
    pub prefactor: T,
    /// `prefactor * sigma2`.
    pub variance: T,
}

pub fn clt_constants<T: Real>(c: &[T]) -> Result<Vec<CltLevel<T>>> {
    let levels = beta_recursion(c)?;
    let mut prod = T::one();
    Ok(levels
        .iter()
        .map(|l| {
            let mu = T::one() - l.lambda * l.complement;
            let sigma2 = l.beta * l.complement / (mu * mu);
            let prefactor = prod * prod;
            prod = prod * l.beta;
            CltLevel {
                level: l.level,
                lambda: l.lambda,
                beta: l.beta,
                mu,
                sigma2,
                prefactor,
                variance: prefactor * sigma2,
            }
        })
        .collect())
}

/// `(ln N)^k / prod_{j<=k} ln(c_j beta_{j-1}^2)`.
pub fn avg_distance_prediction<T: Real>(n: u64, c: &[T], k: usize) -> Result<T> {
    if n < 2 {
        return Err(Error::Domain(format!("N must be >= 2, got {n}")));
    }
    if k == 0 || k > c.len() {
        return Err(Error::Domain(format!(
            "distance prediction needs 1 <= k <= {}, got {k}",
            c.len()
        )));
    }
    let levels = beta_recursion(&c[..k])?;
    Ok(distance_from_levels(n, &levels))
}

fn distance_from_levels<T: Real>(n: u64, levels: &[LevelFixedPoint<T>]) -> T {
    let ln_n = T::count(n).ln();
    levels
        .iter()
        .fold(T::one(), |acc, l| acc * ln_n / l.lambda.ln())
}

// ---------------------------------------------------------------------------
// Profile

/// One level of a [`TheoryProfile`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileLevel<T: Real> {
    pub level: usize,
    pub c: T,
    pub lambda: T,
    pub beta: T,
    /// Plain Erdos-Renyi fixed point for `c_k`.
    pub gamma: T,
    pub mu: T,
    pub sigma2: T,
    /// `(prod_{j<k} beta_j)^2`.
    pub clt_prefactor: T,
    pub product_beta: T,
    pub distance_prediction: T,
}

/// All analytic predictions for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryProfile<T: Real> {
    pub order: u64,
    pub depth: usize,
    pub levels: Vec<ProfileLevel<T>>,
    pub criterion: CriterionReport,
    /// `prod_{K < k <= tail_limit} beta_k` for parametric rules.
    pub tail_product: Option<T>,
    pub tail_limit: usize,
}

impl<T: Real> TheoryProfile<T> {
    /// Builds the profile for levels `1..=depth` of `rule` in the group of order `n`.
    pub fn build(n: u64, depth: usize, rule: &CRule, tail_limit: usize) -> Result<Self> {
        let c: Vec<T> = rule.values(depth)?.into_iter().map(T::lit).collect();
        let fixed = beta_recursion(&c)?;
        let clt = clt_constants(&c)?;
        let products = beta_products(&fixed);
        let levels = fixed
            .iter()
            .zip(&clt)
            .zip(&products)
            .enumerate()
            .map(|(i, ((f, cl), &prod))| {
                Ok(ProfileLevel {
                    level: f.level,
                    c: f.c,
                    lambda: f.lambda,
                    beta: f.beta,
                    gamma: solve_fixed_point(f.c)?,
                    mu: cl.mu,
                    sigma2: cl.sigma2,
                    clt_prefactor: cl.prefactor,
                    product_beta: prod,
                    distance_prediction: distance_from_levels(n, &fixed[..=i]),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let criterion = percolation_criterion(rule, tail_limit)?;
        let tail_product = if rule.is_parametric() && tail_limit > depth {
            let all: Vec<T> = rule.values(tail_limit)?.into_iter().map(T::lit).collect();
            beta_recursion(&all)
                .ok()
                .map(|lv| lv[depth..].iter().fold(T::one(), |acc, l| acc * l.beta))
        } else {
            None
        };
        Ok(Self {
            order: n,
            depth,
            levels,
            criterion,
            tail_product,
            tail_limit,
        })
    }
}

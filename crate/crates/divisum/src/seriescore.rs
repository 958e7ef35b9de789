//! Truncation-controlled evaluation of Lambert-type series, power series and
//! exponent-weighted infinite products.
//!
//! Every evaluator picks its depth N by doubling search against a certified
//! tail bound of the form `sum_{n>N} C n^k r^n`, using the inequality
//! `(1 + m/(N+1))^k <= exp(km/(N+1))` to reduce the polynomial-times-
//! geometric tail to an explicit geometric sum. Results carry the bound,
//! the depth used and a saturation flag when the term budget ran out before
//! the bound met the tolerance.

use crate::consts::BERNOULLI_2K;
use crate::error::{Error, Result};
use crate::numtheory::ArithTables;
use std::sync::Arc;

/// Certificate `|c(n)| <= coeff * n^power` for a coefficient sequence.
#[derive(Debug, Clone, Copy)]
pub struct GrowthBound {
    pub coeff: f64,
    pub power: f64,
}

impl GrowthBound {
    pub fn new(coeff: f64, power: f64) -> Self {
        GrowthBound { coeff, power }
    }
}

/// An arithmetic coefficient sequence `n -> c(n)` with a declared polynomial
/// growth bound, used both for Taylor coefficients and for Lambert numerators.
#[derive(Clone)]
pub struct CoeffSeq {
    eval: Arc<dyn Fn(u64) -> f64 + Send + Sync>,
    growth: GrowthBound,
    description: String,
}

impl std::fmt::Debug for CoeffSeq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CoeffSeq({})", self.description)
    }
}

impl CoeffSeq {
    pub fn new<F>(eval: F, growth: GrowthBound, description: impl Into<String>) -> Self
    where
        F: Fn(u64) -> f64 + Send + Sync + 'static,
    {
        CoeffSeq { eval: Arc::new(eval), growth, description: description.into() }
    }

    pub fn eval(&self, n: u64) -> f64 {
        (self.eval)(n)
    }

    pub fn growth(&self) -> GrowthBound {
        self.growth
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn zero() -> Self {
        CoeffSeq::new(|_| 0.0, GrowthBound::new(0.0, 0.0), "0")
    }

    pub fn one() -> Self {
        CoeffSeq::new(|_| 1.0, GrowthBound::new(1.0, 0.0), "1")
    }

    /// Kronecker delta at n = 1; the Taylor coefficients of f(x) = x.
    pub fn delta() -> Self {
        CoeffSeq::new(|n| if n == 1 { 1.0 } else { 0.0 }, GrowthBound::new(1.0, 0.0), "[n=1]")
    }

    pub fn identity() -> Self {
        CoeffSeq::new(|n| n as f64, GrowthBound::new(1.0, 1.0), "n")
    }

    /// n^(-s) for s >= 0.
    pub fn power_decay(s: f64) -> Self {
        CoeffSeq::new(
            move |n| (n as f64).powf(-s),
            GrowthBound::new(1.0, 0.0),
            format!("n^-{s}"),
        )
    }

    /// 1/n! (Taylor coefficients of e^x - 1).
    pub fn inv_factorial() -> Self {
        CoeffSeq::new(
            |n| {
                let mut f = 1.0;
                for i in 2..=n {
                    f /= i as f64;
                }
                f
            },
            GrowthBound::new(1.0, 0.0),
            "1/n!",
        )
    }

    /// Moebius mu(n), table-backed.
    pub fn mu(tables: Arc<ArithTables>) -> Self {
        CoeffSeq::new(move |n| tables.mu(n) as f64, GrowthBound::new(1.0, 0.0), "mu(n)")
    }

    /// Euler phi(n), table-backed.
    pub fn phi(tables: Arc<ArithTables>) -> Self {
        CoeffSeq::new(move |n| tables.phi(n) as f64, GrowthBound::new(1.0, 1.0), "phi(n)")
    }

    /// Taylor coefficients of a polynomial with zero constant term:
    /// `coeffs[i]` multiplies x^(i+1).
    pub fn poly(coeffs: Vec<f64>) -> Self {
        let bound = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        CoeffSeq::new(
            move |n| {
                let i = n as usize;
                if i >= 1 && i <= coeffs.len() {
                    coeffs[i - 1]
                } else {
                    0.0
                }
            },
            GrowthBound::new(bound, 0.0),
            "poly",
        )
    }

    /// The Moebius-inverted numerator `b(n) = sum_{d|n} c(d) mu(n/d)` of a
    /// coefficient sequence, as its own sequence. The growth certificate
    /// uses d(n) <= 2 sqrt(n).
    pub fn mobius_numerator(c: &CoeffSeq, tables: Arc<ArithTables>) -> Self {
        let inner = c.clone();
        let g = c.growth();
        CoeffSeq::new(
            move |n| tables.mobius_convolve(|d| inner.eval(d), n),
            GrowthBound::new(2.0 * g.coeff, g.power + 0.5),
            format!("mobius-inverted {}", c.description),
        )
    }
}

/// Target tail bound and hard term cap for one evaluation.
#[derive(Debug, Clone, Copy)]
pub struct TruncationPolicy {
    pub tol: f64,
    pub max_terms: usize,
}

impl TruncationPolicy {
    pub fn new(tol: f64, max_terms: usize) -> Self {
        TruncationPolicy { tol, max_terms }
    }

    pub fn with_tol(self, tol: f64) -> Self {
        TruncationPolicy { tol, ..self }
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { tol: 1e-10, max_terms: 1_000_000 }
    }
}

/// A truncated evaluation: value, certified bound on the discarded tail,
/// depth used, and whether the term budget saturated before the bound met
/// the tolerance. A saturated result is never silently treated as met.
#[derive(Debug, Clone, Copy)]
pub struct SeriesEval {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
    pub saturated: bool,
}

impl SeriesEval {
    pub fn exact(value: f64) -> Self {
        SeriesEval { value, tail_bound: 0.0, terms: 0, saturated: false }
    }
}

/// Left/right pair produced by the two-sided transform evaluators.
#[derive(Debug, Clone, Copy)]
pub struct PairEval {
    pub lhs: SeriesEval,
    pub rhs: SeriesEval,
}

/// Which Lambert denominator to use: e^(nx) - 1 or e^(nx) + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenomSign {
    Minus,
    Plus,
}

/// Which product factor to use: (1 - q^n) or (1 + q^n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductSign {
    Minus,
    Plus,
}

/// Certified bound on `sum_{n>N} coeff * n^power * exp(-rate*n)`.
///
/// Uses n = (N+1) + m and (1 + m/(N+1))^power <= exp(power*m/(N+1)), so the
/// tail is dominated by a geometric series with ratio exp(-(rate - shift)).
/// Returns infinity while the shift eats the whole rate (N still too small).
pub(crate) fn poly_exp_tail(coeff: f64, power: f64, rate: f64, n: usize) -> f64 {
    if coeff == 0.0 {
        return 0.0;
    }
    let n1 = (n + 1) as f64;
    let shift = if power > 0.0 { power / n1 } else { 0.0 };
    if shift >= rate {
        return f64::INFINITY;
    }
    coeff * n1.powf(power) * (-n1 * rate).exp() / (1.0 - (-(rate - shift)).exp())
}

/// Doubling search for the smallest power-of-two-ish depth whose tail bound
/// meets `tol`. Returns (depth, bound at depth, saturated).
pub(crate) fn choose_depth<B>(bound: B, tol: f64, start: usize, max_terms: usize) -> (usize, f64, bool)
where
    B: Fn(usize) -> f64,
{
    let mut n = start.max(4);
    loop {
        let b = bound(n);
        if b <= tol {
            return (n, b, false);
        }
        if n >= max_terms {
            return (max_terms, b, true);
        }
        n = (n * 2).min(max_terms);
    }
}

/// Compensated (Kahan) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// 1/(e^t - 1) evaluated stably for t > 0.
#[inline]
pub(crate) fn lambert_kernel_minus(t: f64) -> f64 {
    let e = (-t).exp();
    e / (1.0 - e)
}

/// 1/(e^t + 1) evaluated stably for t > 0.
#[inline]
pub(crate) fn lambert_kernel_plus(t: f64) -> f64 {
    let e = (-t).exp();
    e / (1.0 + e)
}

/// `sum_{n=1..} c(n) / (e^(nx) -/+ 1)` with certified tail <= tol.
///
/// The tail uses `1/(e^(nx)-1) <= 2 exp(-nx)` (valid once nx >= ln 2) and
/// `1/(e^(nx)+1) <= exp(-nx)`.
pub fn lambert_sum(c: &CoeffSeq, denom: DenomSign, x: f64, policy: &TruncationPolicy) -> Result<SeriesEval> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("lambert_sum needs x > 0, got {x}")));
    }
    let g = c.growth();
    let start = (std::f64::consts::LN_2 / x).ceil() as usize + 1;
    let (n, bound, saturated) = choose_depth(
        |n| poly_exp_tail(2.0 * g.coeff, g.power, x, n),
        policy.tol,
        start,
        policy.max_terms,
    );
    let mut acc = Kahan::default();
    for k in 1..=n {
        let ck = c.eval(k as u64);
        if ck != 0.0 {
            let kernel = match denom {
                DenomSign::Minus => lambert_kernel_minus(k as f64 * x),
                DenomSign::Plus => lambert_kernel_plus(k as f64 * x),
            };
            acc.add(ck * kernel);
        }
    }
    Ok(SeriesEval { value: acc.value(), tail_bound: bound, terms: n, saturated })
}

/// `sum_{n=1..} c(n) q^n` for |q| < 1 with certified tail <= tol.
pub fn taylor_eval(c: &CoeffSeq, q: f64, policy: &TruncationPolicy) -> Result<SeriesEval> {
    if !(q.abs() < 1.0) {
        return Err(Error::Domain(format!("taylor_eval needs |q| < 1, got {q}")));
    }
    if q == 0.0 {
        return Ok(SeriesEval::exact(0.0));
    }
    let g = c.growth();
    let rate = -q.abs().ln();
    let (n, bound, saturated) = choose_depth(
        |n| poly_exp_tail(g.coeff, g.power, rate, n),
        policy.tol,
        4,
        policy.max_terms,
    );
    let mut acc = Kahan::default();
    let mut qk = 1.0;
    for k in 1..=n {
        qk *= q;
        let ck = c.eval(k as u64);
        if ck != 0.0 {
            acc.add(ck * qk);
        }
    }
    Ok(SeriesEval { value: acc.value(), tail_bound: bound, terms: n, saturated })
}

/// `prod_{n=1..} (1 +/- q^n)^(w(n))`, accumulated as `sum w(n) log(1 +/- q^n)`
/// in log space. The returned tail bound is on the product scale
/// (value * expm1(log-tail)).
pub fn weighted_product(q: f64, w: &CoeffSeq, sign: ProductSign, policy: &TruncationPolicy) -> Result<SeriesEval> {
    if !(q.abs() < 1.0) {
        return Err(Error::Domain(format!("weighted_product needs |q| < 1, got {q}")));
    }
    if q == 0.0 {
        return Ok(SeriesEval::exact(1.0));
    }
    let g = w.growth();
    let rate = -q.abs().ln();
    // |log(1 +/- q^n)| <= |q|^n / (1 - |q|)
    let coeff = g.coeff / (1.0 - q.abs());
    let (n, bound, saturated) = choose_depth(
        |n| poly_exp_tail(coeff, g.power, rate, n),
        policy.tol,
        4,
        policy.max_terms,
    );
    let mut acc = Kahan::default();
    let mut qk = 1.0;
    for k in 1..=n {
        qk *= q;
        let wk = w.eval(k as u64);
        if wk != 0.0 {
            let factor = match sign {
                ProductSign::Plus => qk,
                ProductSign::Minus => -qk,
            };
            acc.add(wk * factor.ln_1p());
        }
    }
    let value = acc.value().exp();
    Ok(SeriesEval { value, tail_bound: value * bound.exp_m1(), terms: n, saturated })
}

/// Both sides of the product/integral transform
/// `prod ((1-e^(-nb))/(1-e^(-na)))^X(n) = exp(int_a^b f(e^(-t)) dt)`
/// with `X(n) = (1/n) sum_{d|n} c(d) mu(n/d)`.
///
/// The right side integrates the Taylor series termwise:
/// `int_a^b f(e^(-t)) dt = sum c(n) (e^(-na) - e^(-nb))/n`.
pub fn theorem1_pair(
    c: &CoeffSeq,
    a: f64,
    b: f64,
    policy: &TruncationPolicy,
    tables: &Arc<ArithTables>,
) -> Result<PairEval> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!("theorem1_pair needs a, b > 0, got a = {a}, b = {b}")));
    }
    if a == b {
        return Ok(PairEval { lhs: SeriesEval::exact(1.0), rhs: SeriesEval::exact(1.0) });
    }
    let g = c.growth();
    let rate = a.min(b);
    // |X(n)| <= 2 C n^(k - 1/2); |log factor| <= (e^(-na) + e^(-nb))/(1 - e^(-rate))
    let coeff_lhs = 2.0 * g.coeff * 2.0 / (1.0 - (-rate).exp());
    let (n_lhs, bound_lhs, sat_lhs) = choose_depth(
        |n| poly_exp_tail(coeff_lhs, g.power - 0.5, rate, n),
        policy.tol,
        4,
        policy.max_terms,
    );
    let mut log_lhs = Kahan::default();
    for k in 1..=n_lhs {
        let kf = k as f64;
        let xk = tables.weighted_mobius_invert(|d| c.eval(d), k as u64);
        if xk != 0.0 {
            // log(1 - e^(-kb)) - log(1 - e^(-ka))
            log_lhs.add(xk * ((-(-(kf * b)).exp()).ln_1p() - (-(-(kf * a)).exp()).ln_1p()));
        }
    }
    let lhs_value = log_lhs.value().exp();
    let lhs = SeriesEval {
        value: lhs_value,
        tail_bound: lhs_value * bound_lhs.exp_m1(),
        terms: n_lhs,
        saturated: sat_lhs,
    };

    let (n_rhs, bound_rhs, sat_rhs) = choose_depth(
        |n| poly_exp_tail(2.0 * g.coeff, g.power - 1.0, rate, n),
        policy.tol,
        4,
        policy.max_terms,
    );
    let mut log_rhs = Kahan::default();
    for k in 1..=n_rhs {
        let ck = c.eval(k as u64);
        if ck != 0.0 {
            let kf = k as f64;
            log_rhs.add(ck * ((-(kf * a)).exp() - (-(kf * b)).exp()) / kf);
        }
    }
    let rhs_value = log_rhs.value().exp();
    let rhs = SeriesEval {
        value: rhs_value,
        tail_bound: rhs_value * bound_rhs.exp_m1(),
        terms: n_rhs,
        saturated: sat_rhs,
    };
    Ok(PairEval { lhs, rhs })
}

/// Both sides of `sum_n (sum_{d|n} c(d) mu(n/d)) / (e^(nx) - 1) = f(e^(-x))`.
pub fn prop1_pair(
    c: &CoeffSeq,
    x: f64,
    policy: &TruncationPolicy,
    tables: &Arc<ArithTables>,
) -> Result<PairEval> {
    let numer = CoeffSeq::mobius_numerator(c, tables.clone());
    let lhs = lambert_sum(&numer, DenomSign::Minus, x, policy)?;
    let rhs = taylor_eval(c, (-x).exp(), policy)?;
    Ok(PairEval { lhs, rhs })
}

/// Both sides of
/// `sum_n (sum_{d|n} c(d) mu(n/d)) / (e^(nx) + 1) = f(e^(-x)) - 2 f(e^(-2x))`.
pub fn prop2_pair(
    c: &CoeffSeq,
    x: f64,
    policy: &TruncationPolicy,
    tables: &Arc<ArithTables>,
) -> Result<PairEval> {
    let numer = CoeffSeq::mobius_numerator(c, tables.clone());
    let lhs = lambert_sum(&numer, DenomSign::Plus, x, policy)?;
    let near = taylor_eval(c, (-x).exp(), policy)?;
    let far = taylor_eval(c, (-2.0 * x).exp(), policy)?;
    let rhs = SeriesEval {
        value: near.value - 2.0 * far.value,
        tail_bound: near.tail_bound + 2.0 * far.tail_bound,
        terms: near.terms.max(far.terms),
        saturated: near.saturated || far.saturated,
    };
    Ok(PairEval { lhs, rhs })
}

/// Coefficients of the polynomial P_v with
/// `d^v/dx^v [1/(e^(nx)-1)] = (-n)^v sum_j P_v[j] u^j`, u = 1/(e^(nx)-1).
///
/// P_0 = u and differentiating maps `u^j` to `j(u^j + u^(j+1))` (up to the
/// -n factor tracked outside), so P_{v+1}[j] = j P_v[j] + (j-1) P_v[j-1].
fn derivative_poly(v: u32) -> Vec<f64> {
    let mut p = vec![0.0, 1.0];
    for _ in 0..v {
        let mut next = vec![0.0; p.len() + 1];
        for j in 1..p.len() {
            next[j] += j as f64 * p[j];
            next[j + 1] += j as f64 * p[j];
        }
        p = next;
    }
    p
}

/// Both sides of the termwise-differentiated inversion series:
/// lhs is the analytic v-th x-derivative of
/// `sum_n (sum_{d|n} A(d) mu(n/d)) / (e^(nx) - 1)`, rhs re-sums with the
/// weight `(-d)^v` inside the divisor sum.
pub fn prop3_pair(
    a: &CoeffSeq,
    v: u32,
    x: f64,
    policy: &TruncationPolicy,
    tables: &Arc<ArithTables>,
) -> Result<PairEval> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("prop3_pair needs x > 0, got {x}")));
    }
    if v > 6 {
        return Err(Error::Domain(format!("derivative order capped at 6, got {v}")));
    }
    let g = a.growth();
    let poly = derivative_poly(v);
    let poly_abs: f64 = poly.iter().map(|c| c.abs()).sum();
    // |B(n)| <= 2 C n^(k+1/2); |(-n)^v P_v(u_n)| <= n^v * poly_abs * 2 e^(-nx)
    let start = (std::f64::consts::LN_2 / x).ceil() as usize + 1;
    let (n_lhs, bound_lhs, sat_lhs) = choose_depth(
        |n| poly_exp_tail(4.0 * g.coeff * poly_abs, g.power + 0.5 + v as f64, x, n),
        policy.tol,
        start,
        policy.max_terms,
    );
    let mut lhs_acc = Kahan::default();
    for k in 1..=n_lhs {
        let b = tables.mobius_convolve(|d| a.eval(d), k as u64);
        if b == 0.0 {
            continue;
        }
        let u = lambert_kernel_minus(k as f64 * x);
        let mut pu = 0.0;
        let mut uj = 1.0;
        for &pc in poly.iter().skip(1) {
            uj *= u;
            pu += pc * uj;
        }
        let sign_n = (-(k as f64)).powi(v as i32);
        lhs_acc.add(b * sign_n * pu);
    }
    let lhs = SeriesEval { value: lhs_acc.value(), tail_bound: bound_lhs, terms: n_lhs, saturated: sat_lhs };

    // rhs numerator: |sum_{d|n} A(d) (-d)^v mu(n/d)| <= 2 C n^(k+v+1/2)
    let (n_rhs, bound_rhs, sat_rhs) = choose_depth(
        |n| poly_exp_tail(4.0 * g.coeff, g.power + v as f64 + 0.5, x, n),
        policy.tol,
        start,
        policy.max_terms,
    );
    let mut rhs_acc = Kahan::default();
    for k in 1..=n_rhs {
        let numer = tables.mobius_convolve(|d| a.eval(d) * (-(d as f64)).powi(v as i32), k as u64);
        if numer != 0.0 {
            rhs_acc.add(numer * lambert_kernel_minus(k as f64 * x));
        }
    }
    let rhs = SeriesEval { value: rhs_acc.value(), tail_bound: bound_rhs, terms: n_rhs, saturated: sat_rhs };
    Ok(PairEval { lhs, rhs })
}

/// Both sides of the divisor-convolution series for a sequence X with
/// `sum_{d|n} X(d)` equal to the Taylor coefficients of g:
///
/// - minus case: `sum_n (sum_{d|n} X(d) f(n/d))/(e^(nx)-1) = sum_n f(n) g(e^(-nx))`
/// - plus case:  `... /(e^(nx)+1) = sum_n f(n) (g(e^(-nx)) - 2 g(e^(-2nx)))`
///
/// The divisor-sum/Taylor relation is validated for n <= 200 before any
/// series is summed; a mismatch is an input-contract error.
pub fn prop45_pair(
    x_seq: &CoeffSeq,
    f: &CoeffSeq,
    g: &CoeffSeq,
    denom: DenomSign,
    x: f64,
    policy: &TruncationPolicy,
    tables: &Arc<ArithTables>,
) -> Result<PairEval> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("prop45_pair needs x > 0, got {x}")));
    }
    for n in 1..=200u64 {
        let lhs: f64 = tables.divisors(n).iter().map(|&d| x_seq.eval(d)).sum();
        let rhs = g.eval(n);
        if (lhs - rhs).abs() > 1e-9 * (1.0 + rhs.abs()) {
            return Err(Error::InputContract(format!(
                "divisor sums of {} do not match coefficients of {} at n = {n}: {lhs} vs {rhs}",
                x_seq.description(),
                g.description()
            )));
        }
    }
    let gx = x_seq.growth();
    let gf = f.growth();
    let gg = g.growth();
    let start = (std::f64::consts::LN_2 / x).ceil() as usize + 1;

    // lhs: |sum_{d|n} X(d) f(n/d)| <= 2 sqrt(n) * Cx n^kx * Cf n^kf
    let (n_lhs, bound_lhs, sat_lhs) = choose_depth(
        |n| poly_exp_tail(4.0 * gx.coeff * gf.coeff, gx.power + gf.power + 0.5, x, n),
        policy.tol,
        start,
        policy.max_terms,
    );
    let mut lhs_acc = Kahan::default();
    for k in 1..=n_lhs {
        let numer: f64 = tables
            .divisors(k as u64)
            .iter()
            .map(|&d| x_seq.eval(d) * f.eval(k as u64 / d))
            .sum();
        if numer != 0.0 {
            let kernel = match denom {
                DenomSign::Minus => lambert_kernel_minus(k as f64 * x),
                DenomSign::Plus => lambert_kernel_plus(k as f64 * x),
            };
            lhs_acc.add(numer * kernel);
        }
    }
    let lhs = SeriesEval { value: lhs_acc.value(), tail_bound: bound_lhs, terms: n_lhs, saturated: sat_lhs };

    // rhs outer terms: |f(n) g(e^(-nx))| with |g(y)| <= full-series bound in y.
    // Bound g(e^(-nx)) by Cg' e^(-nx) with Cg' certified at the first usable n.
    let n0 = ((gg.power + 1.0) / x).ceil().max(1.0) as usize;
    let g_unit = poly_exp_tail(gg.coeff, gg.power, n0 as f64 * x, 0) / (-(n0 as f64) * x).exp();
    let (n_rhs, bound_rhs, sat_rhs) = choose_depth(
        |n| poly_exp_tail(3.0 * gf.coeff * g_unit, gf.power, x, n),
        policy.tol,
        start.max(n0),
        policy.max_terms,
    );
    let inner = policy.with_tol(policy.tol / (20.0 * (n_rhs as f64 + 1.0)));
    let mut rhs_acc = Kahan::default();
    let mut inner_sat = false;
    for k in 1..=n_rhs {
        let fk = f.eval(k as u64);
        if fk == 0.0 {
            continue;
        }
        let g_near = taylor_eval(g, (-(k as f64) * x).exp(), &inner)?;
        inner_sat |= g_near.saturated;
        let term = match denom {
            DenomSign::Minus => g_near.value,
            DenomSign::Plus => {
                let g_far = taylor_eval(g, (-2.0 * k as f64 * x).exp(), &inner)?;
                inner_sat |= g_far.saturated;
                g_near.value - 2.0 * g_far.value
            }
        };
        rhs_acc.add(fk * term);
    }
    let rhs = SeriesEval {
        value: rhs_acc.value(),
        tail_bound: bound_rhs + policy.tol / 10.0,
        terms: n_rhs,
        saturated: sat_rhs || inner_sat,
    };
    Ok(PairEval { lhs, rhs })
}

/// Both sides of the alternating-denominator rearrangement
/// `sum_n X(n)/(e^(nx)+1) = -sum_n (sum_{d|n} (-1)^(n/d) X(d)) e^(-nx)`.
pub fn lemma7_pair(
    x_seq: &CoeffSeq,
    x: f64,
    policy: &TruncationPolicy,
    tables: &Arc<ArithTables>,
) -> Result<PairEval> {
    let lhs = lambert_sum(x_seq, DenomSign::Plus, x, policy)?;
    let g = x_seq.growth();
    let inner = x_seq.clone();
    let tb = tables.clone();
    let coeff = CoeffSeq::new(
        move |n| {
            tb.divisors(n)
                .iter()
                .map(|&d| {
                    let sign = if (n / d) % 2 == 0 { 1.0 } else { -1.0 };
                    sign * inner.eval(d)
                })
                .sum()
        },
        GrowthBound::new(2.0 * g.coeff, g.power + 0.5),
        "alternating divisor sum",
    );
    let series = taylor_eval(&coeff, (-x).exp(), policy)?;
    let rhs = SeriesEval { value: -series.value, ..series };
    Ok(PairEval { lhs, rhs })
}

/// cosh(t)/sinh^2(t) evaluated stably for t > 0.
#[inline]
pub(crate) fn cosh_over_sinh2(t: f64) -> f64 {
    let e = (-t).exp();
    let om = 1.0 - e * e;
    2.0 * e * (1.0 + e * e) / (om * om)
}

/// 1/(cosh(t) - 1) evaluated stably for t > 0.
#[inline]
pub(crate) fn inv_cosh_minus_one(t: f64) -> f64 {
    let e = (-t).exp();
    let om = 1.0 - e;
    2.0 * e / (om * om)
}

/// sinh^2(t)/cosh(t) for t >= 0.
#[inline]
fn sinh2_over_cosh(t: f64) -> f64 {
    let s = t.sinh();
    s * s / t.cosh()
}

/// Both sides of the gcd-sum rearrangement
/// `2 sum_n (sum_{k<=n} f(gcd(n,k)))/(e^(nx)+1) = sum_n f(n) cosh(nx)/sinh^2(nx)`
/// for f(m) = m^(-s).
pub fn eq10_pair(
    s: f64,
    x: f64,
    policy: &TruncationPolicy,
    tables: &Arc<ArithTables>,
) -> Result<PairEval> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("eq10_pair needs x > 0, got {x}")));
    }
    let start = (std::f64::consts::LN_2 / x).ceil() as usize + 1;
    // gcd_sum(m^-s, n) <= n
    let (n_lhs, bound_lhs, sat_lhs) =
        choose_depth(|n| poly_exp_tail(2.0, 1.0, x, n), policy.tol, start, policy.max_terms);
    let mut lhs_acc = Kahan::default();
    for k in 1..=n_lhs {
        let gs = tables.gcd_sum(|m| (m as f64).powf(-s), k as u64);
        lhs_acc.add(2.0 * gs * lambert_kernel_plus(k as f64 * x));
    }
    let lhs = SeriesEval { value: lhs_acc.value(), tail_bound: 2.0 * bound_lhs, terms: n_lhs, saturated: sat_lhs };

    // cosh(t)/sinh^2(t) <= 4 e^(-t)/(1-e^(-2x))^2 for t = nx
    let om = 1.0 - (-2.0 * x).exp();
    let (n_rhs, bound_rhs, sat_rhs) = choose_depth(
        |n| poly_exp_tail(4.0 / (om * om), 0.0, x, n),
        policy.tol,
        start,
        policy.max_terms,
    );
    let mut rhs_acc = Kahan::default();
    for k in 1..=n_rhs {
        rhs_acc.add((k as f64).powf(-s) * cosh_over_sinh2(k as f64 * x));
    }
    let rhs = SeriesEval { value: rhs_acc.value(), tail_bound: bound_rhs, terms: n_rhs, saturated: sat_rhs };
    Ok(PairEval { lhs, rhs })
}

/// Both sides of the minus-denominator companion
/// `2 sum_n (sum_{k<=n} f(gcd(n,k)))/(e^(nx)-1) = sum_n f(n)/(cosh(nx)-1)`
/// for f(m) = m^(-s).
pub fn eq13b_pair(
    s: f64,
    x: f64,
    policy: &TruncationPolicy,
    tables: &Arc<ArithTables>,
) -> Result<PairEval> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("eq13b_pair needs x > 0, got {x}")));
    }
    let start = (std::f64::consts::LN_2 / x).ceil() as usize + 1;
    let (n_lhs, bound_lhs, sat_lhs) =
        choose_depth(|n| poly_exp_tail(4.0, 1.0, x, n), policy.tol, start, policy.max_terms);
    let mut lhs_acc = Kahan::default();
    for k in 1..=n_lhs {
        let gs = tables.gcd_sum(|m| (m as f64).powf(-s), k as u64);
        lhs_acc.add(2.0 * gs * lambert_kernel_minus(k as f64 * x));
    }
    let lhs = SeriesEval { value: lhs_acc.value(), tail_bound: 2.0 * bound_lhs, terms: n_lhs, saturated: sat_lhs };

    let om = 1.0 - (-x).exp();
    let (n_rhs, bound_rhs, sat_rhs) = choose_depth(
        |n| poly_exp_tail(2.0 / (om * om), 0.0, x, n),
        policy.tol,
        start,
        policy.max_terms,
    );
    let mut rhs_acc = Kahan::default();
    for k in 1..=n_rhs {
        rhs_acc.add((k as f64).powf(-s) * inv_cosh_minus_one(k as f64 * x));
    }
    let rhs = SeriesEval { value: rhs_acc.value(), tail_bound: bound_rhs, terms: n_rhs, saturated: sat_rhs };
    Ok(PairEval { lhs, rhs })
}

/// `sum_{n>=m0} n^(-s)` by Euler-Maclaurin with certified remainder,
/// for s > 1. Returns (value, error bound).
pub(crate) fn tail_power_sum(s: f64, m0: u64) -> (f64, f64) {
    debug_assert!(s > 1.0);
    let lift = ((s.abs() + 12.0).ceil() as u64).max(16);
    let big = m0.max(lift);
    let mut head = Kahan::default();
    for n in m0..big {
        head.add((n as f64).powf(-s));
    }
    let w = big as f64;
    let mut acc = w.powf(1.0 - s) / (s - 1.0) + 0.5 * w.powf(-s);
    let mut poch = s;
    let mut fact = 2.0;
    let mut last = 0.0;
    for (i, &b2k) in BERNOULLI_2K.iter().enumerate().take(8) {
        let k = i + 1;
        // poch = s(s+1)...(s+2k-2), fact = (2k)!
        last = b2k / fact * poch * w.powf(-s - (2 * k as u64 - 1) as f64);
        acc += last;
        poch *= (s + (2 * k) as f64 - 1.0) * (s + (2 * k) as f64);
        fact *= ((2 * k + 1) * (2 * k + 2)) as f64;
    }
    (head.value() + acc, 2.0 * last.abs() + 1e-300)
}

/// The gcd-weighted telescoping sum that reproduces `sum_n n^(-s)`
/// independently of x:
///
/// `2 sum_n (sum_{k<=n} W(gcd(n,k)))/(e^(nx)+1)` with
/// `W(m) = m^(-s) sinh^2(mx)/cosh(mx)`.
///
/// Term n of the rearranged series tends to n^(-s); the head is summed with
/// the full gcd machinery and the residual tail is the monomial tail plus a
/// certified exponentially small deviation bound.
pub fn gcd_zeta_telescope(
    s: f64,
    x: f64,
    policy: &TruncationPolicy,
    tables: &Arc<ArithTables>,
) -> Result<SeriesEval> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("gcd telescope needs x > 0, got {x}")));
    }
    if !(s > 1.0) {
        return Err(Error::Domain(format!("gcd telescope needs s > 1, got {s}")));
    }
    // deviation of term n from n^(-s): <= n e^(-nx/2) + 6 e^(-nx)
    let dev = |n: usize| poly_exp_tail(1.0, 1.0, x / 2.0, n) + poly_exp_tail(6.0, 0.0, x, n);
    let start = (2.0 * std::f64::consts::LN_2 / x).ceil() as usize + 1;
    let (n_head, dev_bound, saturated) = choose_depth(dev, policy.tol / 2.0, start, policy.max_terms);
    let mut acc = Kahan::default();
    for k in 1..=n_head {
        let gs = tables.gcd_sum(|m| (m as f64).powf(-s) * sinh2_over_cosh(m as f64 * x), k as u64);
        acc.add(2.0 * gs * lambert_kernel_plus(k as f64 * x));
    }
    let (tail, tail_err) = tail_power_sum(s, n_head as u64 + 1);
    Ok(SeriesEval {
        value: acc.value() + tail,
        tail_bound: dev_bound + tail_err,
        terms: n_head,
        saturated,
    })
}

/// Both sides of the exponent-weighted product identity
/// `prod (1+q^n)^((1/n) sum_{k<=n} f(gcd(n,k))) = exp(sum f(n) q^n / (n(1-q^(2n))))`.
pub fn thm21_pair(
    q: f64,
    f: &CoeffSeq,
    policy: &TruncationPolicy,
    tables: &Arc<ArithTables>,
) -> Result<PairEval> {
    if !(q.abs() < 1.0) {
        return Err(Error::Domain(format!("thm21_pair needs |q| < 1, got {q}")));
    }
    let gf = f.growth();
    let inner = f.clone();
    let tb = tables.clone();
    // (1/n) gcd_sum(f, n) <= Cf n^kf
    let w = CoeffSeq::new(
        move |n| tb.gcd_sum(|m| inner.eval(m), n) / n as f64,
        GrowthBound::new(gf.coeff, gf.power),
        "gcd-sum weight",
    );
    let lhs = weighted_product(q, &w, ProductSign::Plus, policy)?;

    if q == 0.0 {
        return Ok(PairEval { lhs, rhs: SeriesEval::exact(1.0) });
    }
    let rate = -q.abs().ln();
    let q2 = 1.0 - q * q;
    let (n_rhs, bound_rhs, sat_rhs) = choose_depth(
        |n| poly_exp_tail(gf.coeff / q2, gf.power - 1.0, rate, n),
        policy.tol,
        4,
        policy.max_terms,
    );
    let mut log_rhs = Kahan::default();
    let mut qn = 1.0;
    for k in 1..=n_rhs {
        qn *= q;
        let fk = f.eval(k as u64);
        if fk != 0.0 {
            log_rhs.add(fk * qn / (k as f64 * (1.0 - qn * qn)));
        }
    }
    let rhs_value = log_rhs.value().exp();
    let rhs = SeriesEval {
        value: rhs_value,
        tail_bound: rhs_value * bound_rhs.exp_m1(),
        terms: n_rhs,
        saturated: sat_rhs,
    };
    Ok(PairEval { lhs, rhs })
}

/// One side of the cosine-transform duality built from the plus-denominator
/// gcd machinery: `sqrt(c) (f(0)/2 + 2 sum_n (sum_{k<=n} F(gcd))/(e^(nx)+1))`
/// with `F(m) = exp(-(c m)^2/2) sinh^2(mx)/cosh(mx)` (the Gaussian
/// self-reciprocal pair). The series telescopes to
/// `sqrt(c)(1/2 + sum_n exp(-(c n)^2/2))`.
pub fn duality_side_plus(
    scale: f64,
    x: f64,
    policy: &TruncationPolicy,
    tables: &Arc<ArithTables>,
) -> Result<SeriesEval> {
    if !(scale > 0.0 && x > 0.0) {
        return Err(Error::Domain(format!(
            "duality side needs scale > 0 and x > 0, got {scale}, {x}"
        )));
    }
    let gauss = move |m: f64| (-(scale * m) * (scale * m) / 2.0).exp();
    // F(m) <= exp(x^2/(2 scale^2)) / 2, so term n <= n exp(x^2/(2c^2)) e^(-nx)
    let fmax = (x * x / (2.0 * scale * scale)).exp();
    let start = (std::f64::consts::LN_2 / x).ceil() as usize + 1;
    let (n, bound, saturated) = choose_depth(
        |n| 2.0 * poly_exp_tail(fmax, 1.0, x, n) + poly_exp_tail(1.0, 0.0, scale * scale / 2.0, n),
        policy.tol,
        start,
        policy.max_terms,
    );
    let mut acc = Kahan::default();
    for k in 1..=n {
        let gs = tables.gcd_sum(|m| gauss(m as f64) * sinh2_over_cosh(m as f64 * x), k as u64);
        acc.add(2.0 * gs * lambert_kernel_plus(k as f64 * x));
    }
    Ok(SeriesEval {
        value: scale.sqrt() * (0.5 + acc.value()),
        tail_bound: scale.sqrt() * bound,
        terms: n,
        saturated,
    })
}

/// One side of the minus-denominator duality:
/// `sqrt(c) (f(0)/2 + 4 sum_n (sum_{k<=n} F(gcd))/(e^(2nx)-1))` with
/// `F(m) = exp(-(c m)^2/2) sinh^2(mx)`.
pub fn duality_side_minus(
    scale: f64,
    x: f64,
    policy: &TruncationPolicy,
    tables: &Arc<ArithTables>,
) -> Result<SeriesEval> {
    if !(scale > 0.0 && x > 0.0) {
        return Err(Error::Domain(format!(
            "duality side needs scale > 0 and x > 0, got {scale}, {x}"
        )));
    }
    let gauss = move |m: f64| (-(scale * m) * (scale * m) / 2.0).exp();
    // F(m) <= exp(2x^2/scale^2)/4, so term n <= 2n exp(2x^2/c^2) e^(-2nx)
    let fmax = (2.0 * x * x / (scale * scale)).exp();
    let start = (std::f64::consts::LN_2 / (2.0 * x)).ceil() as usize + 1;
    let (n, bound, saturated) = choose_depth(
        |n| {
            2.0 * poly_exp_tail(fmax, 1.0, 2.0 * x, n)
                + poly_exp_tail(1.0, 0.0, scale * scale / 2.0, n)
        },
        policy.tol,
        start,
        policy.max_terms,
    );
    let mut acc = Kahan::default();
    for k in 1..=n {
        let gs = tables.gcd_sum(
            |m| {
                let sh = (m as f64 * x).sinh();
                gauss(m as f64) * sh * sh
            },
            k as u64,
        );
        acc.add(4.0 * gs * lambert_kernel_minus(2.0 * k as f64 * x));
    }
    Ok(SeriesEval {
        value: scale.sqrt() * (0.5 + acc.value()),
        tail_bound: scale.sqrt() * bound,
        terms: n,
        saturated,
    })
}

/// Direct evaluation of the Gaussian lattice sum
/// `sqrt(c)(1/2 + sum_{n>=1} exp(-(c n)^2/2))` that both duality sides
/// telescope to; used as an oracle in tests.
pub fn duality_gauss_value(scale: f64) -> f64 {
    let mut acc = 0.5;
    let mut n = 1.0;
    loop {
        let t = (-(scale * n) * (scale * n) / 2.0).exp();
        acc += t;
        if t < 1e-22 {
            break;
        }
        n += 1.0;
    }
    scale.sqrt() * acc
}

/// The character-weighted inverse-sinh-squared sum
/// `sum_n X(n) n^2 / sinh^2(nx/2)` (left side of the theta-quotient
/// second-derivative identities).
pub fn char_sinh2_sum(
    values: &crate::numtheory::PeriodicChar,
    x: f64,
    policy: &TruncationPolicy,
) -> Result<SeriesEval> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("char sum needs x > 0, got {x}")));
    }
    // n^2/sinh^2(nx/2) <= 4 n^2 e^(-nx) / (1-e^(-x))^2
    let om = 1.0 - (-x).exp();
    let cmax = values.max_abs() as f64;
    let (n, bound, saturated) = choose_depth(
        |n| poly_exp_tail(4.0 * cmax / (om * om), 2.0, x, n),
        policy.tol,
        4,
        policy.max_terms,
    );
    let mut acc = Kahan::default();
    for k in 1..=n {
        let v = values.value(k as u64);
        if v != 0 {
            let e = (-(k as f64) * x / 2.0).exp();
            let denom = 1.0 - e * e;
            // 1/sinh^2(t) = 4 e^(-2t)/(1-e^(-2t))^2 with t = kx/2
            let inv_sinh2 = 4.0 * e * e / (denom * denom);
            acc.add(v as f64 * (k * k) as f64 * inv_sinh2);
        }
    }
    Ok(SeriesEval { value: acc.value(), tail_bound: bound, terms: n, saturated })
}

/// Left side of the alternative triple-product expansion:
/// `sum_n cosh(2tn) / (n sinh(pi a n))`, convergent for 2|t| < pi a.
pub fn jtp_alt_sum(a: f64, t: f64, policy: &TruncationPolicy) -> Result<SeriesEval> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("jtp sum needs a > 0, got {a}")));
    }
    let pi = std::f64::consts::PI;
    let gap = pi * a - 2.0 * t.abs();
    if gap <= 0.0 {
        return Err(Error::Domain(format!(
            "jtp sum needs 2|t| < pi a, got t = {t}, a = {a}"
        )));
    }
    // cosh(2tn)/sinh(pi a n) <= 2 e^(-gap n) / (1 - e^(-2 pi a))
    let coeff = 2.0 / (1.0 - (-2.0 * pi * a).exp());
    let (n, bound, saturated) =
        choose_depth(|n| poly_exp_tail(coeff, -1.0, gap, n), policy.tol, 4, policy.max_terms);
    let mut acc = Kahan::default();
    for k in 1..=n {
        let kf = k as f64;
        // cosh(2tk)/sinh(pi a k), written in negative exponentials
        let num = (2.0 * t * kf - pi * a * kf).exp() + (-2.0 * t * kf - pi * a * kf).exp();
        let den = 1.0 - (-2.0 * pi * a * kf).exp();
        acc.add(num / (kf * den));
    }
    Ok(SeriesEval { value: acc.value(), tail_bound: bound, terms: n, saturated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::PeriodicChar;

    fn tables() -> Arc<ArithTables> {
        Arc::new(ArithTables::build(20_000).unwrap())
    }

    fn policy() -> TruncationPolicy {
        TruncationPolicy::new(1e-12, 1_000_000)
    }

    #[test]
    fn lambert_mu_reproduces_exponential() {
        let t = tables();
        let mu = CoeffSeq::mu(t.clone());
        let r = lambert_sum(&mu, DenomSign::Minus, 1.0, &policy()).unwrap();
        assert!((r.value - (-1.0f64).exp()).abs() < 1e-12, "{}", r.value);
        assert!(!r.saturated);
    }

    #[test]
    fn lambert_phi_plus_closed_form() {
        let t = tables();
        let phi = CoeffSeq::phi(t.clone());
        let r = lambert_sum(&phi, DenomSign::Plus, 1.0, &policy()).unwrap();
        let expected = 1.0f64.cosh() / (2.0 * 1.0f64.sinh().powi(2));
        assert!((r.value - expected).abs() < 1e-12, "{} vs {expected}", r.value);
    }

    #[test]
    fn lambert_zero_sequence() {
        let r = lambert_sum(&CoeffSeq::zero(), DenomSign::Minus, 1.0, &policy()).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn lambert_domain_error() {
        assert!(lambert_sum(&CoeffSeq::one(), DenomSign::Minus, 0.0, &policy()).is_err());
        assert!(lambert_sum(&CoeffSeq::one(), DenomSign::Minus, -1.0, &policy()).is_err());
    }

    #[test]
    fn lambert_saturation_flagged() {
        let p = TruncationPolicy::new(1e-30, 8);
        let r = lambert_sum(&CoeffSeq::one(), DenomSign::Minus, 0.01, &p).unwrap();
        assert!(r.saturated);
        assert!(r.tail_bound > 1e-30);
    }

    #[test]
    fn taylor_examples() {
        let p = policy();
        let r = taylor_eval(&CoeffSeq::delta(), 0.5, &p).unwrap();
        assert_eq!(r.value, 0.5);
        let r = taylor_eval(&CoeffSeq::one(), 0.5, &p).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = taylor_eval(&CoeffSeq::inv_factorial(), 0.3, &p).unwrap();
        assert!((r.value - (0.3f64.exp() - 1.0)).abs() < 1e-12);
        assert!(taylor_eval(&CoeffSeq::one(), 1.0, &p).is_err());
    }

    #[test]
    fn theorem1_linear_f() {
        let t = tables();
        let c = CoeffSeq::poly(vec![1.0]);
        let pair = theorem1_pair(&c, 1.0, 2.0, &policy(), &t).unwrap();
        let expected = ((-1.0f64).exp() - (-2.0f64).exp()).exp();
        assert!((pair.rhs.value - expected).abs() < 1e-12);
        assert!((pair.lhs.value - pair.rhs.value).abs() < 1e-10, "{:?}", pair);
    }

    #[test]
    fn theorem1_equal_endpoints() {
        let t = tables();
        let c = CoeffSeq::poly(vec![1.0]);
        let pair = theorem1_pair(&c, 1.0, 1.0, &policy(), &t).unwrap();
        assert_eq!(pair.lhs.value, 1.0);
        assert_eq!(pair.rhs.value, 1.0);
    }

    #[test]
    fn theorem1_quadratic_f() {
        let t = tables();
        let c = CoeffSeq::poly(vec![0.0, 1.0]);
        let pair = theorem1_pair(&c, 1.0, 2.0, &policy(), &t).unwrap();
        let expected = (((-2.0f64).exp() - (-4.0f64).exp()) / 2.0).exp();
        assert!((pair.rhs.value - expected).abs() < 1e-12);
        assert!((pair.lhs.value - pair.rhs.value).abs() < 1e-10);
    }

    #[test]
    fn prop1_linear() {
        let t = tables();
        let c = CoeffSeq::poly(vec![1.0]);
        let pair = prop1_pair(&c, 1.0, &policy(), &t).unwrap();
        assert!((pair.lhs.value - (-1.0f64).exp()).abs() < 1e-12);
        assert!((pair.lhs.value - pair.rhs.value).abs() < 1e-12);
    }

    #[test]
    fn prop2_examples() {
        let t = tables();
        let c = CoeffSeq::poly(vec![1.0]);
        let pair = prop2_pair(&c, 1.0, &policy(), &t).unwrap();
        let expected = (-1.0f64).exp() - 2.0 * (-2.0f64).exp();
        assert!((pair.lhs.value - expected).abs() < 1e-12);
        assert!((pair.rhs.value - expected).abs() < 1e-12);

        let zero = prop2_pair(&CoeffSeq::zero(), 1.0, &policy(), &t).unwrap();
        assert_eq!(zero.lhs.value, 0.0);
        assert_eq!(zero.rhs.value, 0.0);

        let sq = CoeffSeq::poly(vec![0.0, 1.0]);
        let pair = prop2_pair(&sq, 0.7, &policy(), &t).unwrap();
        assert!((pair.lhs.value - pair.rhs.value).abs() < 1e-11, "{:?}", pair);
    }

    #[test]
    fn prop3_trivial_and_delta() {
        let t = tables();
        let pair = prop3_pair(&CoeffSeq::identity(), 0, 1.0, &policy(), &t).unwrap();
        assert!((pair.lhs.value - pair.rhs.value).abs() < 1e-12);

        // A = [n=1]: series collapses to e^(-x); first derivative is -e^(-x)
        let pair = prop3_pair(&CoeffSeq::delta(), 1, 1.0, &policy(), &t).unwrap();
        assert!((pair.lhs.value + (-1.0f64).exp()).abs() < 1e-12, "{:?}", pair);
        assert!((pair.rhs.value + (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn prop3_identity_second_derivative_vs_finite_differences() {
        let t = tables();
        let a = CoeffSeq::identity();
        let pair = prop3_pair(&a, 2, 1.0, &policy(), &t).unwrap();
        assert!((pair.lhs.value - pair.rhs.value).abs() < 1e-10, "{:?}", pair);

        // central second difference with Richardson refinement
        let g = |x: f64| {
            let numer = CoeffSeq::mobius_numerator(&a, t.clone());
            lambert_sum(&numer, DenomSign::Minus, x, &policy()).unwrap().value
        };
        let d2 = |h: f64| (g(1.0 + h) - 2.0 * g(1.0) + g(1.0 - h)) / (h * h);
        let fd = (4.0 * d2(5e-4) - d2(1e-3)) / 3.0;
        assert!(
            (pair.lhs.value - fd).abs() < 1e-6 * pair.lhs.value.abs(),
            "analytic {} vs fd {fd}",
            pair.lhs.value
        );
    }

    #[test]
    fn prop45_mu_delta_example() {
        let t = tables();
        let x_seq = CoeffSeq::mu(t.clone());
        let f = CoeffSeq::identity();
        let g = CoeffSeq::delta();
        let pair = prop45_pair(&x_seq, &f, &g, DenomSign::Minus, 1.0, &policy(), &t).unwrap();
        let q = (-1.0f64).exp();
        let expected = q / ((1.0 - q) * (1.0 - q));
        assert!((pair.lhs.value - expected).abs() < 1e-11, "{:?}", pair);
        assert!((pair.rhs.value - expected).abs() < 1e-11);
    }

    #[test]
    fn prop45_phi_double_sum() {
        let t = tables();
        let x_seq = CoeffSeq::phi(t.clone());
        let f = CoeffSeq::one();
        let g = CoeffSeq::identity();
        let pair = prop45_pair(&x_seq, &f, &g, DenomSign::Minus, 1.0, &policy(), &t).unwrap();
        // brute-force double sum: sum_n e^(-nx)/(1-e^(-nx))^2
        let mut oracle = 0.0;
        for n in 1..=400 {
            let e = (-(n as f64)).exp();
            oracle += e / ((1.0 - e) * (1.0 - e));
        }
        assert!((pair.lhs.value - oracle).abs() < 1e-11, "{:?} vs {oracle}", pair);
        assert!((pair.rhs.value - oracle).abs() < 1e-11);
    }

    #[test]
    fn prop45_rejects_mismatched_g() {
        let t = tables();
        let x_seq = CoeffSeq::phi(t.clone());
        let f = CoeffSeq::one();
        let wrong_g = CoeffSeq::delta();
        let err = prop45_pair(&x_seq, &f, &wrong_g, DenomSign::Minus, 1.0, &policy(), &t);
        assert!(matches!(err, Err(Error::InputContract(_))));
    }

    #[test]
    fn prop45_plus_case() {
        let t = tables();
        let x_seq = CoeffSeq::mu(t.clone());
        let f = CoeffSeq::identity();
        let g = CoeffSeq::delta();
        let pair = prop45_pair(&x_seq, &f, &g, DenomSign::Plus, 1.0, &policy(), &t).unwrap();
        assert!((pair.lhs.value - pair.rhs.value).abs() < 1e-11, "{:?}", pair);
    }

    #[test]
    fn lemma7_examples() {
        let t = tables();
        let pair = lemma7_pair(&CoeffSeq::delta(), 1.0, &policy(), &t).unwrap();
        let expected = 1.0 / (1.0f64.exp() + 1.0);
        assert!((pair.lhs.value - expected).abs() < 1e-13);
        assert!((pair.rhs.value - expected).abs() < 1e-13);

        let phi = CoeffSeq::phi(t.clone());
        let pair = lemma7_pair(&phi, 1.0, &policy(), &t).unwrap();
        let closed = 1.0f64.cosh() / (2.0 * 1.0f64.sinh().powi(2));
        assert!((pair.lhs.value - closed).abs() < 1e-12);
        assert!((pair.rhs.value - closed).abs() < 1e-11, "{:?}", pair);

        let zero = lemma7_pair(&CoeffSeq::zero(), 1.0, &policy(), &t).unwrap();
        assert_eq!(zero.lhs.value, 0.0);
        assert_eq!(zero.rhs.value, 0.0);
    }

    #[test]
    fn weighted_product_examples() {
        let p = policy();
        let r = weighted_product(0.3, &CoeffSeq::zero(), ProductSign::Minus, &p).unwrap();
        assert_eq!(r.value, 1.0);

        let r = weighted_product(0.1, &CoeffSeq::one(), ProductSign::Minus, &p).unwrap();
        let mut oracle = 1.0;
        for n in 1..=60 {
            oracle *= 1.0 - 0.1f64.powi(n);
        }
        assert!((r.value - oracle).abs() < 1e-14, "{} vs {oracle}", r.value);

        assert!(weighted_product(1.0, &CoeffSeq::one(), ProductSign::Minus, &p).is_err());
    }

    #[test]
    fn thm21_gcd_weight_matches_closed_exponent() {
        let t = tables();
        let pair = thm21_pair(0.2, &CoeffSeq::identity(), &policy(), &t).unwrap();
        // with f = identity the exponent series is sum q^n/(1-q^(2n))
        let mut exponent = 0.0;
        for n in 1..=200 {
            let qn = 0.2f64.powi(n);
            exponent += qn / (1.0 - qn * qn);
        }
        assert!((pair.rhs.value - exponent.exp()).abs() < 1e-13);
        assert!((pair.lhs.value - pair.rhs.value).abs() < 1e-11, "{:?}", pair);
    }

    #[test]
    fn eq10_and_eq13b_pairs_agree() {
        let t = tables();
        for &s in &[2.0, 3.0] {
            for &x in &[0.5, 1.0] {
                let pair = eq10_pair(s, x, &policy(), &t).unwrap();
                let rel = (pair.lhs.value - pair.rhs.value).abs() / pair.rhs.value.abs();
                assert!(rel < 1e-10, "eq10 s={s} x={x}: {:?}", pair);
                let pair = eq13b_pair(s, x, &policy(), &t).unwrap();
                let rel = (pair.lhs.value - pair.rhs.value).abs() / pair.rhs.value.abs();
                assert!(rel < 1e-10, "eq13b s={s} x={x}: {:?}", pair);
            }
        }
    }

    #[test]
    fn tail_power_sum_matches_direct() {
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        let head: f64 = (1..=10u64).map(|n| (n as f64).powi(-2)).sum();
        let (tail, err) = tail_power_sum(2.0, 11);
        assert!((tail - (zeta2 - head)).abs() < 1e-13, "{tail} (err {err})");
        let (tail4, _) = tail_power_sum(4.0, 3);
        let zeta4 = std::f64::consts::PI.powi(4) / 90.0;
        assert!((tail4 - (zeta4 - 1.0 - 0.0625)).abs() < 1e-13);
    }

    #[test]
    fn gcd_telescope_is_x_independent() {
        let t = tables();
        let a = gcd_zeta_telescope(2.0, 0.5, &policy(), &t).unwrap();
        let b = gcd_zeta_telescope(2.0, 1.0, &policy(), &t).unwrap();
        let c = gcd_zeta_telescope(2.0, 2.0, &policy(), &t).unwrap();
        assert!((a.value - b.value).abs() < 1e-9, "{} vs {}", a.value, b.value);
        assert!((b.value - c.value).abs() < 1e-9);
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((a.value - zeta2).abs() < 1e-9, "{} vs {zeta2}", a.value);
    }

    #[test]
    fn duality_sides_telescope_to_gauss_sum() {
        let t = tables();
        for &a in &[1.0, 3.0] {
            let oracle = duality_gauss_value(a);
            let plus = duality_side_plus(a, 1.0, &policy(), &t).unwrap();
            assert!(
                (plus.value - oracle).abs() < 1e-10 * oracle,
                "plus a={a}: {} vs {oracle}",
                plus.value
            );
            let minus = duality_side_minus(a, 1.0, &policy(), &t).unwrap();
            assert!(
                (minus.value - oracle).abs() < 1e-10 * oracle,
                "minus a={a}: {} vs {oracle}",
                minus.value
            );
        }
    }

    #[test]
    fn char_sum_small_values() {
        let leg = PeriodicChar::legendre5();
        let r = char_sinh2_sum(&leg, 1.0, &policy()).unwrap();
        let mut oracle = 0.0;
        for n in 1..300u64 {
            let v = leg.value(n) as f64;
            let s = (n as f64 * 0.5).sinh();
            oracle += v * (n * n) as f64 / (s * s);
        }
        assert!((r.value - oracle).abs() < 1e-10, "{} vs {oracle}", r.value);
    }

    #[test]
    fn jtp_sum_domain() {
        assert!(jtp_alt_sum(1.0, 2.0, &policy()).is_err());
        assert!(jtp_alt_sum(0.0, 0.0, &policy()).is_err());
        let r = jtp_alt_sum(1.0, 0.5, &policy()).unwrap();
        let mut oracle = 0.0;
        for n in 1..=60 {
            let nf = n as f64;
            oracle += (2.0 * 0.5 * nf).cosh() / (nf * (std::f64::consts::PI * nf).sinh());
        }
        assert!((r.value - oracle).abs() < 1e-13, "{} vs {oracle}", r.value);
    }

    #[test]
    fn eq3_random_polynomials_property() {
        let t = tables();
        // deterministic pseudo-random coefficients
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..25 {
            let deg = (1 + (next().abs() * 6.0) as usize).min(6);
            let coeffs: Vec<f64> = (0..deg).map(|_| next()).collect();
            let c = CoeffSeq::poly(coeffs.clone());
            for &x in &[0.5, 1.0, 2.0] {
                let pair = prop1_pair(&c, x, &policy(), &t).unwrap();
                let q = (-x).exp();
                let mut fval = 0.0;
                for (i, &ci) in coeffs.iter().enumerate() {
                    fval += ci * q.powi(i as i32 + 1);
                }
                assert!(
                    (pair.lhs.value - fval).abs() < 1e-11,
                    "x={x} coeffs={coeffs:?}: {} vs {fval}",
                    pair.lhs.value
                );
            }
        }
    }

    #[test]
    fn depth_doubling_stability() {
        let t = tables();
        let phi = CoeffSeq::phi(t.clone());
        let p1 = TruncationPolicy::new(1e-9, 1_000_000);
        let r1 = lambert_sum(&phi, DenomSign::Plus, 0.7, &p1).unwrap();
        // re-evaluate with twice the depth by tightening the tolerance hard
        let p2 = TruncationPolicy::new(1e-13, 1_000_000);
        let r2 = lambert_sum(&phi, DenomSign::Plus, 0.7, &p2).unwrap();
        assert!(r2.terms >= r1.terms);
        assert!((r1.value - r2.value).abs() < 2.0 * 1e-9);
    }
}

//! Single-index sum builders.
//!
//! `TermSumSpec` describes sums of the shape
//!
//! ```text
//!   sum_{n >= n0}  (-1)^{eps n} * ((-1)^n Q^{n(n-1)/2})^p * q^{E(n)} * a^{alpha n} b^{beta n}
//!                  * prod (num pochhammers)_cnt(n) / prod (den pochhammers)_cnt(n)
//!                  * prod (1 ± q^{cn+d})^{±1} * [optional inner theta row over j]
//! ```
//!
//! with `Q = q^step`, which subsumes the standard `_r phi_s` series (the
//! `phi_sign_power` field carries its normalizing factor) as well as modified
//! sums with extra `1/(1 ± q^{...})` factors. Parameter Pochhammers of the
//! form `(gamma/a; Q)_n` are assembled with the `a^{alpha n}` budget into the
//! polynomial product `prod_k (a - gamma Q^k)`, which keeps every term of the
//! two-parameter expansion at nonnegative grading weight.
//!
//! `FinitePhiSpec` evaluates terminating `_r phi_s` sums (a `q^{-step*n}`
//! numerator parameter) exactly; these are the objects of the finite lemmas
//! and the inner sums of the sampled transformation formulas.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{rat, Coefficient, Monomial, Rat, Weights};
use crate::series::{PochCount, PochhammerArg, TruncatedSeries, EXACT_ORDER};

/// Quadratic exponent polynomial `c2 n^2 + c1 n + c0` with rational
/// coefficients; must evaluate to an integer at every summation index.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadPoly {
    pub c2: Rat,
    pub c1: Rat,
    pub c0: Rat,
}

impl QuadPoly {
    pub fn new(c2: Rat, c1: Rat, c0: Rat) -> Self {
        QuadPoly { c2, c1, c0 }
    }

    /// `c1 * n` with integer coefficients.
    pub fn linear(c1: i64) -> Self {
        QuadPoly::new(rat(0), rat(c1), rat(0))
    }

    /// `c2 * n^2 + c1 * n`.
    pub fn quad(c2: i64, c1: i64) -> Self {
        QuadPoly::new(rat(c2), rat(c1), rat(0))
    }

    /// `(c2 n^2 + c1 n) / 2`, the triangular-number shape.
    pub fn half_quad(c2: i64, c1: i64) -> Self {
        QuadPoly::new(
            Rat::new(c2.into(), 2.into()),
            Rat::new(c1.into(), 2.into()),
            rat(0),
        )
    }

    pub fn zero() -> Self {
        QuadPoly::new(rat(0), rat(0), rat(0))
    }

    pub fn eval(&self, n: i64) -> Rat {
        let n = rat(n);
        &self.c2 * &n * &n + &self.c1 * &n + &self.c0
    }

    /// Exact integer value, or an error when the value is fractional.
    pub fn eval_int(&self, n: i64) -> Result<i64> {
        let v = self.eval(n);
        if !v.is_integer() {
            return Err(Error::NonIntegerExponent(format!("{} at n={}", v, n)));
        }
        Ok(i64::try_from(v.to_integer()).expect("exponent fits i64"))
    }
}

/// Pochhammer factor count `mul * n + add`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountExpr {
    pub mul: u32,
    pub add: u32,
}

impl CountExpr {
    pub fn n() -> Self {
        CountExpr { mul: 1, add: 0 }
    }
    pub fn affine(mul: u32, add: u32) -> Self {
        CountExpr { mul, add }
    }
    pub fn eval(&self, n: i64) -> u64 {
        self.mul as u64 * n as u64 + self.add as u64
    }
}

/// A Pochhammer symbol appearing in a summand, with count linear in the
/// summation index: `(x q^{start}; q^{step})_{count(n)}`.
///
/// `x.e_a` / `x.e_b` may be `-1` in numerator position only; such factors are
/// assembled against the `param_powers` budget (see module docs).
#[derive(Debug, Clone, PartialEq)]
pub struct TermPochhammer {
    pub x: Monomial,
    pub start: i64,
    pub step: u32,
    pub count: CountExpr,
}

impl TermPochhammer {
    pub fn new(x: Monomial, step: u32, count: CountExpr) -> Self {
        TermPochhammer { x, start: 0, step, count }
    }
}

/// A factor `(1 + sign * q^{c n + d})^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalFactor {
    /// `false` for `1 + q^{...}`, `true` for `1 - q^{...}`.
    pub minus: bool,
    pub c: i64,
    pub d: i64,
    pub inverted: bool,
}

impl RationalFactor {
    pub fn over_one_plus(c: i64, d: i64) -> Self {
        RationalFactor { minus: false, c, d, inverted: true }
    }
    pub fn over_one_minus(c: i64, d: i64) -> Self {
        RationalFactor { minus: true, c, d, inverted: true }
    }
    pub fn one_minus(c: i64, d: i64) -> Self {
        RationalFactor { minus: true, c, d, inverted: false }
    }
    pub fn one_plus(c: i64, d: i64) -> Self {
        RationalFactor { minus: false, c, d, inverted: false }
    }
}

/// Inner-sum range of a per-row theta factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowRange {
    /// `j` in `[-n, n]`.
    Full,
    /// `j` in `[-n, n+1]`.
    Plus,
}

/// Per-row theta factor `sum_j (-1)^{signed * j} q^{c2 j^2 + c1 j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaRow {
    pub c2: i64,
    pub c1: i64,
    pub signed: bool,
    pub range: RowRange,
}

/// Declarative description of a single-index sum; see the module docs for
/// the summand shape.
#[derive(Debug, Clone, PartialEq)]
pub struct TermSumSpec {
    pub start: i64,
    pub step: u32,
    pub numerator: Vec<TermPochhammer>,
    pub denominator: Vec<TermPochhammer>,
    pub sign_exponent: u8,
    pub q_exponent: QuadPoly,
    pub param_powers: (u32, u32),
    pub rational_factors: Vec<RationalFactor>,
    pub phi_sign_power: i32,
    pub theta_row: Option<ThetaRow>,
}

impl TermSumSpec {
    /// A bare sum `sum_{n >= start} q^{E(n)}` ready for customization.
    pub fn bare(start: i64, step: u32, q_exponent: QuadPoly) -> Self {
        TermSumSpec {
            start,
            step,
            numerator: Vec::new(),
            denominator: Vec::new(),
            sign_exponent: 0,
            q_exponent,
            param_powers: (0, 0),
            rational_factors: Vec::new(),
            phi_sign_power: 0,
            theta_row: None,
        }
    }

    /// The standard `_r phi_s` series with base `q^step`, upper parameters
    /// `nums`, lower parameters `dens` (the implicit `(q^step; q^step)_n` is
    /// added here), and argument `z`, a monomial in `q`, `a`, `b` with
    /// coefficient `±1`.
    ///
    /// Each parameter monomial becomes `(m; q^step)_n`; the argument's sign
    /// goes to `sign_exponent`, its q-power to the linear exponent term, and
    /// its parameter powers to `param_powers`.
    pub fn rphis(step: u32, nums: &[Monomial], dens: &[Monomial], z: &Monomial) -> Result<Self> {
        let r = nums.len();
        let s = dens.len();
        if !(z.coeff.is_one() || (-z.coeff.clone()).is_one()) {
            return Err(Error::InvalidSpec("phi argument coefficient must be ±1".into()));
        }
        if z.e_a < 0 || z.e_b < 0 {
            return Err(Error::InvalidSpec("phi argument parameter powers must be nonnegative".into()));
        }
        let mut spec = TermSumSpec::bare(0, step, QuadPoly::linear(0));
        spec.q_exponent = QuadPoly::linear(z.e_q);
        spec.sign_exponent = if z.coeff.is_negative() { 1 } else { 0 };
        spec.param_powers = (z.e_a as u32, z.e_b as u32);
        spec.phi_sign_power = 1 + s as i32 - r as i32;
        for m in nums {
            spec.numerator.push(TermPochhammer::new(m.clone(), step, CountExpr::n()));
        }
        spec.denominator
            .push(TermPochhammer::new(Monomial::q_pow(1, step as i64), step, CountExpr::n()));
        for m in dens {
            spec.denominator.push(TermPochhammer::new(m.clone(), step, CountExpr::n()));
        }
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        for probe in self.start..self.start + 3 {
            self.q_exponent.eval_int(probe)?;
        }
        for p in &self.denominator {
            if p.x.e_a < 0 || p.x.e_b < 0 {
                return Err(Error::InvalidSpec(
                    "negative parameter powers are only assembled in numerator position".into(),
                ));
            }
        }
        for p in &self.numerator {
            if p.x.e_a < -1 || p.x.e_b < -1 || (p.x.e_a < 0 && p.x.e_b < 0) {
                return Err(Error::InvalidSpec(
                    "assembled pochhammers support a single inverse parameter power".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Values taken by the parameters during a build: `None` means the parameter
/// may not occur; otherwise a (possibly zero) exact monomial series.
pub struct ParamEnv<C: Coefficient> {
    pub a: Option<TruncatedSeries<C>>,
    pub b: Option<TruncatedSeries<C>>,
}

impl<C: Coefficient> ParamEnv<C> {
    /// Univariate environment: any parameter reference is an error.
    pub fn forbidden() -> Self {
        ParamEnv { a: None, b: None }
    }

    fn var(&self, which: char) -> Result<&TruncatedSeries<C>> {
        let v = if which == 'a' { &self.a } else { &self.b };
        v.as_ref().ok_or(Error::InvalidSpec(
            "specification references a parameter not supplied by this build".into(),
        ))
    }
}

/// Generic parameter environment `a -> a, b -> b` over the polynomial ring.
pub fn generic_env(weights: Weights) -> ParamEnv<crate::ring::ParamPolynomial> {
    use crate::ring::ParamPolynomial;
    ParamEnv {
        a: Some(TruncatedSeries::exact_monomial(
            ParamPolynomial::monomial(Rat::one(), 1, 0),
            0,
            weights,
        )),
        b: Some(TruncatedSeries::exact_monomial(
            ParamPolynomial::monomial(Rat::one(), 0, 1),
            0,
            weights,
        )),
    }
}

/// Univariate environment substituting monomials in `q` (possibly zero) for
/// the parameters.
pub fn valuation_env(sub_a: &Monomial, sub_b: &Monomial, weights: Weights) -> Result<ParamEnv<Rat>> {
    let embed = |m: &Monomial| -> Result<TruncatedSeries<Rat>> {
        if !m.is_univariate() {
            return Err(Error::InvalidSpec("substitution values must be monomials in q".into()));
        }
        if m.is_zero() {
            Ok(TruncatedSeries::zero(EXACT_ORDER, weights))
        } else {
            Ok(TruncatedSeries::exact_monomial(m.coeff.clone(), m.e_q, weights))
        }
    };
    Ok(ParamEnv { a: Some(embed(sub_a)?), b: Some(embed(sub_b)?) })
}

/// Minimum weight of a variable series for row bounds (`None` if zero).
fn var_min<C: Coefficient>(v: &TruncatedSeries<C>) -> Option<i64> {
    v.min_weight()
}

/// Builds `(x q^{start}; q^{step})_count` with parameter powers of `x`
/// replaced by the environment values. Univariate bases delegate to the
/// series-level constructor; parameter bases with nonnegative powers
/// substitute and multiply factor by factor.
pub fn env_pochhammer<C: Coefficient>(
    env: &ParamEnv<C>,
    x: &Monomial,
    start: i64,
    step: u32,
    count: PochCount,
    order: i64,
    weights: Weights,
) -> Result<TruncatedSeries<C>> {
    if x.is_univariate() {
        let arg = PochhammerArg { x: x.clone(), start, step, count };
        return TruncatedSeries::pochhammer(&arg, order, weights);
    }
    if x.e_a < 0 || x.e_b < 0 {
        return Err(Error::InvalidSpec(
            "inverse parameter powers must be assembled against the power budget".into(),
        ));
    }
    let mut xval =
        TruncatedSeries::<C>::exact_monomial(C::from_rat(x.coeff.clone()), x.e_q, weights);
    xval = xval.mul(&env.var('a')?.pow(x.e_a as u32)?)?;
    xval = xval.mul(&env.var('b')?.pow(x.e_b as u32)?)?;
    if xval.is_zero() {
        // (0; q)_c = 1.
        return Ok(TruncatedSeries::one(EXACT_ORDER, weights));
    }
    let base_min = xval.min_weight().expect("nonzero") + weights.w_q as i64 * start;
    let factor_at = |k: i64| -> Result<TruncatedSeries<C>> {
        let shifted = xval.mul_monomial(&Monomial::q_pow(1, start + step as i64 * k))?;
        TruncatedSeries::<C>::one(EXACT_ORDER, weights).sub(&shifted)
    };
    match count {
        PochCount::Finite(c) => {
            let mut acc = TruncatedSeries::<C>::one(EXACT_ORDER, weights);
            for k in 0..c {
                acc = acc.mul(&factor_at(k as i64)?)?;
            }
            Ok(acc)
        }
        PochCount::Infinite => {
            if step == 0 || base_min <= 0 {
                return Err(Error::NonTerminatingProduct(format!(
                    "({} q^{start}; q^{step})_inf",
                    x
                )));
            }
            let mut acc = TruncatedSeries::<C>::one(order, weights);
            let mut k = 0i64;
            while base_min + weights.w_q as i64 * step as i64 * k < order {
                acc = acc.mul(&factor_at(k)?)?;
                k += 1;
            }
            Ok(acc)
        }
    }
}

struct RowBuild<C: Coefficient> {
    series: TruncatedSeries<C>,
    is_zero: bool,
}

/// Lower bound for the weighted valuation of row `n`; `None` when the row is
/// structurally zero.
fn row_weight_bound<C: Coefficient>(
    spec: &TermSumSpec,
    env: &ParamEnv<C>,
    n: i64,
    weights: &Weights,
) -> Result<Option<i64>> {
    let w_q = weights.w_q as i64;
    let mut bound = w_q * spec.q_exponent.eval_int(n)?;
    if spec.phi_sign_power != 0 {
        bound += w_q * spec.phi_sign_power as i64 * spec.step as i64 * (n * (n - 1) / 2);
    }

    let mut budget_a = spec.param_powers.0 as i64 * n;
    let mut budget_b = spec.param_powers.1 as i64 * n;
    for p in &spec.numerator {
        let count = p.count.eval(n) as i64;
        if p.x.e_a == -1 || p.x.e_b == -1 {
            let var = env.var(if p.x.e_a == -1 { 'a' } else { 'b' })?;
            if p.x.e_a == -1 {
                budget_a -= count;
            } else {
                budget_b -= count;
            }
            // Assembled factor (var - gamma q^{..}) has no constant term:
            // its full minimum weight counts toward the row valuation.
            let vm = var_min(var);
            for k in 0..count {
                let q_side = w_q * (p.x.e_q + p.start + p.step as i64 * k);
                bound += match vm {
                    Some(m) => m.min(q_side),
                    None => q_side,
                };
            }
        } else {
            // Plain factor (1 - x_env q^{...}): the bound only picks up the
            // nonpositive (Laurent) part of each factor's valuation.
            let mut x_wt = Some(weights.q_weight(p.x.e_q));
            for (pow, var) in [(p.x.e_a, 'a'), (p.x.e_b, 'b')] {
                if pow == 0 {
                    continue;
                }
                match var_min(env.var(var)?) {
                    Some(m) => x_wt = x_wt.map(|wt| wt + pow as i64 * m),
                    None => x_wt = None, // zero base: the pochhammer is 1
                }
            }
            if let Some(xw) = x_wt {
                for k in 0..count {
                    bound += (xw + w_q * (p.start + p.step as i64 * k)).min(0);
                }
            }
        }
    }
    if budget_a < 0 || budget_b < 0 {
        return Err(Error::InvalidSpec(
            "parameter power budget is smaller than the assembled pochhammer counts".into(),
        ));
    }
    for (residual, var) in [(budget_a, 'a'), (budget_b, 'b')] {
        if residual == 0 {
            continue;
        }
        match var_min(env.var(var)?) {
            // The residual factor is exactly var^residual.
            Some(m) => bound += residual * m,
            // Zero substituted into a positive residual power: the row is 0.
            None => return Ok(None),
        }
    }

    for f in &spec.rational_factors {
        let g = f.c * n + f.d;
        if !f.inverted {
            if f.minus && g == 0 {
                return Ok(None);
            }
            bound += (w_q * g).min(0);
        } else if g < 0 {
            // (1 ± q^{-m})^{-1} has valuation +m; a lower bound of 0 is safe.
        }
    }

    if let Some(row) = &spec.theta_row {
        let hi = match row.range {
            RowRange::Full => n,
            RowRange::Plus => n + 1,
        };
        let lo = -n;
        if hi >= lo {
            let f = |j: i64| w_q * (row.c2 * j * j + row.c1 * j);
            let mut m = f(lo).min(f(hi));
            if row.c2 > 0 {
                // Integer minimum of the parabola, clamped to the range.
                let v = -row.c1 as f64 / (2.0 * row.c2 as f64);
                for j in [v.floor() as i64, v.ceil() as i64] {
                    if j >= lo && j <= hi {
                        m = m.min(f(j));
                    }
                }
            }
            bound += m;
        }
    }
    Ok(Some(bound))
}

/// A window below which row `n` may be assembled truncated instead of
/// exactly: when every pochhammer is a plain q-monomial of nonnegative
/// exponent, no parameter powers remain, the rational factors have
/// nonnegative exponents, and the theta row is pointwise nonnegative, the
/// whole row content has valuation `>= 0`, so terms of weight
/// `>= order - q_shift` cannot land below the truncation order.
fn row_window(spec: &TermSumSpec, n: i64, order: i64, w_q: i64, q_shift: i64) -> Option<i64> {
    if spec.param_powers != (0, 0) {
        return None;
    }
    for p in spec.numerator.iter().chain(spec.denominator.iter()) {
        if p.x.e_a != 0 || p.x.e_b != 0 || p.x.e_q + p.start < 0 {
            return None;
        }
    }
    if spec.rational_factors.iter().any(|f| f.c * n + f.d < 0) {
        return None;
    }
    if let Some(row) = &spec.theta_row {
        // c2 j^2 + c1 j >= 0 over all integers j iff |c1| <= c2.
        if row.c2 < 0 || row.c1.abs() > row.c2 {
            return None;
        }
    }
    Some((order - w_q * q_shift).max(1))
}

/// Builds row `n` of the sum exactly (truncated at `order`).
fn build_row<C: Coefficient>(
    spec: &TermSumSpec,
    env: &ParamEnv<C>,
    n: i64,
    order: i64,
    weights: Weights,
) -> Result<RowBuild<C>> {
    let w_q = weights.w_q as i64;
    let mut scalar = Rat::one();
    if (spec.sign_exponent as i64 * n + spec.phi_sign_power as i64 * n).rem_euclid(2) != 0 {
        scalar = -scalar;
    }
    let mut q_shift = spec.q_exponent.eval_int(n)?;
    q_shift += spec.phi_sign_power as i64 * spec.step as i64 * (n * (n - 1) / 2);

    let window = row_window(spec, n, order, w_q, q_shift);
    let build_order = window.unwrap_or(EXACT_ORDER);

    // Numerator content: assembled and plain pochhammers, residual
    // parameter powers, non-inverted rational factors, theta row; exact
    // unless the window proves truncated assembly complete below `order`.
    let mut exact = TruncatedSeries::<C>::one(build_order, weights);
    let mut budget_a = spec.param_powers.0 as i64 * n;
    let mut budget_b = spec.param_powers.1 as i64 * n;
    for p in &spec.numerator {
        let count = p.count.eval(n);
        if p.x.e_a == -1 || p.x.e_b == -1 {
            let var = env.var(if p.x.e_a == -1 { 'a' } else { 'b' })?.clone();
            if p.x.e_a == -1 {
                budget_a -= count as i64;
            } else {
                budget_b -= count as i64;
            }
            for k in 0..count {
                let e = p.x.e_q + p.start + p.step as i64 * k as i64;
                let mut factor = var.clone();
                let c = C::embed(p.x.coeff.clone(), 0, 0).unwrap();
                factor.add_term(e, c.neg_ref());
                exact = exact.mul(&factor)?;
            }
        } else {
            // Without a window, build untruncated: rows are combined with
            // inverses below, and the exact floor determines the boost
            // those inverses need.
            let poch = env_pochhammer(
                env,
                &p.x,
                p.start,
                p.step,
                PochCount::Finite(count),
                build_order,
                weights,
            )?;
            exact = exact.mul(&poch)?;
        }
    }
    if budget_a < 0 || budget_b < 0 {
        return Err(Error::InvalidSpec(
            "parameter power budget is smaller than the assembled pochhammer counts".into(),
        ));
    }
    for (residual, which) in [(budget_a, 'a'), (budget_b, 'b')] {
        if residual > 0 {
            let var = env.var(which)?;
            let powed = var.pow(u32::try_from(residual).expect("residual power fits u32"))?;
            exact = exact.mul(&powed)?;
        }
    }

    let mut inverted_base = TruncatedSeries::<C>::one(EXACT_ORDER, weights);
    for f in &spec.rational_factors {
        let g = f.c * n + f.d;
        let sign = if f.minus { C::one().neg_ref() } else { C::one() };
        if g == 0 {
            if f.minus {
                if f.inverted {
                    return Err(Error::NotAUnit(format!("1 - q^0 in row n={n}")));
                }
                exact = exact.scale(&rat(0));
                continue;
            }
            scalar *= if f.inverted { Rat::new(1.into(), 2.into()) } else { rat(2) };
            continue;
        }
        let mut factor = TruncatedSeries::<C>::one(EXACT_ORDER, weights);
        factor.add_term(g, sign);
        if f.inverted {
            inverted_base = inverted_base.mul(&factor)?;
        } else {
            exact = exact.mul(&factor)?;
        }
    }

    if let Some(row) = &spec.theta_row {
        let hi = match row.range {
            RowRange::Full => n,
            RowRange::Plus => n + 1,
        };
        let mut theta = TruncatedSeries::<C>::zero(build_order, weights);
        for j in -n..=hi {
            let mut c = C::one();
            if row.signed && j.rem_euclid(2) == 1 {
                c = c.neg_ref();
            }
            theta.add_term(row.c2 * j * j + row.c1 * j, c);
        }
        exact = exact.mul(&theta)?;
    }

    if exact.is_zero() || scalar.is_zero() {
        return Ok(RowBuild { series: TruncatedSeries::zero(order, weights), is_zero: true });
    }

    // Denominator: pochhammers and inverted rational factors, one inversion.
    let mut den = inverted_base;
    for p in &spec.denominator {
        let count = p.count.eval(n);
        let poch = env_pochhammer(
            env,
            &p.x,
            p.start,
            p.step,
            PochCount::Finite(count),
            build_order,
            weights,
        )?;
        den = den.mul(&poch)?;
    }

    let exact_floor = exact.min_weight().unwrap_or(0) + w_q * q_shift;
    let term = if den.num_terms() == 1 && den.coefficient(0).map_or(false, |c| c.is_one()) {
        exact
    } else {
        let boost = match window {
            Some(cutoff) => cutoff,
            None => order + (-exact_floor).max(0),
        };
        let inv = den.invert(boost)?;
        exact.mul(&inv)?
    };
    let mut term = term.scale(&scalar);
    if q_shift != 0 {
        term = term.mul_monomial(&Monomial::q_pow(1, q_shift))?;
    }
    Ok(RowBuild { series: term.truncate_to(order), is_zero: false })
}

/// Number of consecutive non-increasing row bounds tolerated before the spec
/// is declared divergent.
const STALL_LIMIT: usize = 8;

/// Number of consecutive rows at or above the order required to stop.
const SETTLE_ROWS: usize = 3;

/// Expands a term sum to the given order over an explicit parameter
/// environment. `env` distinguishes the generic two-parameter build from
/// univariate builds at substituted monomial values.
pub fn build_term_sum_env<C: Coefficient>(
    spec: &TermSumSpec,
    env: &ParamEnv<C>,
    order: i64,
    weights: Weights,
) -> Result<TruncatedSeries<C>> {
    spec.validate()?;
    let mut acc = TruncatedSeries::<C>::zero(order, weights);
    let mut n = spec.start;
    let mut prev_bound: Option<i64> = None;
    let mut stall = 0usize;
    let mut settled = 0usize;
    loop {
        let bound = row_weight_bound(spec, env, n, &weights)?;
        if let Some(b) = bound {
            let mut nondecreasing = true;
            if let Some(p) = prev_bound {
                if b <= p {
                    stall += 1;
                    if stall >= STALL_LIMIT {
                        return Err(Error::DivergentSpec(stall));
                    }
                } else {
                    stall = 0;
                }
                nondecreasing = b >= p;
            }
            prev_bound = Some(b);
            if b >= order && nondecreasing {
                settled += 1;
                if settled >= SETTLE_ROWS {
                    return Ok(acc);
                }
            } else {
                settled = 0;
                if b < order {
                    let row = build_row(spec, env, n, order, weights)?;
                    if !row.is_zero {
                        acc = acc.add(&row.series)?;
                    }
                }
            }
        } else {
            // Structurally zero row: counts toward settling, never divergence.
            settled += 1;
            if settled >= SETTLE_ROWS {
                return Ok(acc);
            }
        }
        n += 1;
    }
}

/// Expands a purely univariate term sum (no parameter references allowed).
pub fn build_term_sum(spec: &TermSumSpec, order: i64) -> Result<TruncatedSeries<Rat>> {
    build_term_sum_env(spec, &ParamEnv::forbidden(), order, Weights::default())
}

/// Expands a term sum over the generic two-parameter ring.
pub fn build_term_sum_param(
    spec: &TermSumSpec,
    order: i64,
) -> Result<TruncatedSeries<crate::ring::ParamPolynomial>> {
    let weights = Weights::default();
    build_term_sum_env(spec, &generic_env(weights), order, weights)
}

/// Expands a term sum with the parameters substituted by monomials before
/// truncation, so the result is complete below `order` even for low-degree
/// substitutions.
pub fn build_term_sum_at(
    spec: &TermSumSpec,
    sub_a: &Monomial,
    sub_b: &Monomial,
    order: i64,
) -> Result<TruncatedSeries<Rat>> {
    let weights = Weights::default();
    build_term_sum_env(spec, &valuation_env(sub_a, sub_b, weights)?, order, weights)
}

/// A terminating `_r phi_s` sum with concrete monomial parameters:
/// exactly `n + 1` terms of base `q^step` and argument `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePhiSpec {
    pub n: u64,
    pub step: u32,
    pub numerator: Vec<Monomial>,
    /// Lower parameters, excluding the implicit `(q^step; q^step)_k`.
    pub denominator: Vec<Monomial>,
    pub argument: Monomial,
}

impl FinitePhiSpec {
    pub fn new(
        n: u64,
        step: u32,
        numerator: Vec<Monomial>,
        denominator: Vec<Monomial>,
        argument: Monomial,
    ) -> Self {
        FinitePhiSpec { n, step, numerator, denominator, argument }
    }
}

/// Evaluates a finite phi sum exactly, truncated at `order`.
pub fn finite_phi(spec: &FinitePhiSpec, order: i64) -> Result<TruncatedSeries<Rat>> {
    let weights = Weights::default();
    let w_q = weights.w_q as i64;
    let r = spec.numerator.len() as i32;
    let s = spec.denominator.len() as i32;
    let p = 1 + s - r;
    for m in spec.numerator.iter().chain(spec.denominator.iter()).chain([&spec.argument]) {
        if !m.is_univariate() {
            return Err(Error::InvalidSpec("finite phi parameters must be monomials in q".into()));
        }
    }
    let mut acc = TruncatedSeries::<Rat>::zero(order, weights);
    for k in 0..=spec.n {
        let mut exact = TruncatedSeries::<Rat>::one(EXACT_ORDER, weights);
        for x in &spec.numerator {
            let arg = PochhammerArg::finite(x.clone(), 0, spec.step, k);
            exact = exact.mul(&TruncatedSeries::pochhammer(&arg, EXACT_ORDER, weights)?)?;
        }
        let zp = spec.argument.pow(u32::try_from(k).expect("phi index fits u32"));
        if zp.is_zero() && k > 0 {
            continue;
        }
        let mut q_shift = zp.e_q;
        let mut scalar = zp.coeff.clone();
        if p != 0 {
            q_shift += p as i64 * spec.step as i64 * (k as i64 * (k as i64 - 1) / 2);
            if (p as i64 * k as i64) % 2 != 0 {
                scalar = -scalar;
            }
        }
        if scalar.is_zero() || exact.is_zero() {
            continue;
        }

        let mut den = TruncatedSeries::<Rat>::pochhammer(
            &PochhammerArg::finite(Monomial::q_pow(1, spec.step as i64), 0, spec.step, k),
            EXACT_ORDER,
            weights,
        )?;
        for y in &spec.denominator {
            let arg = PochhammerArg::finite(y.clone(), 0, spec.step, k);
            den = den.mul(&TruncatedSeries::pochhammer(&arg, EXACT_ORDER, weights)?)?;
        }
        let exact_floor = exact.min_weight().unwrap_or(0) + w_q * q_shift;
        let term = if k == 0 {
            exact
        } else {
            let boost = order + (-exact_floor).max(0);
            let inv = den.invert(boost)?;
            exact.mul(&inv)?
        };
        let mut term = term.scale(&scalar);
        if q_shift != 0 {
            term = term.mul_monomial(&Monomial::q_pow(1, q_shift))?;
        }
        acc = acc.add(&term.truncate_to(order))?;
    }
    Ok(acc)
}

/// A quotient of Pochhammer products with a scalar and q-power prefactor:
/// `scalar * q^{q_shift} * prod factors^{power}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PochQuotient {
    pub scalar: Rat,
    pub q_shift: i64,
    pub factors: Vec<(PochhammerArg, i32)>,
}

impl PochQuotient {
    pub fn one() -> Self {
        PochQuotient { scalar: Rat::one(), q_shift: 0, factors: Vec::new() }
    }

    pub fn new(factors: Vec<(PochhammerArg, i32)>) -> Self {
        PochQuotient { scalar: Rat::one(), q_shift: 0, factors }
    }

    pub fn scaled(scalar: Rat, factors: Vec<(PochhammerArg, i32)>) -> Self {
        PochQuotient { scalar, q_shift: 0, factors }
    }

    /// Builds the quotient to the requested order over an environment (the
    /// factors may carry parameter powers).
    pub fn build_env<C: Coefficient>(
        &self,
        env: &ParamEnv<C>,
        order: i64,
        weights: Weights,
    ) -> Result<TruncatedSeries<C>> {
        let mut num = TruncatedSeries::<C>::one(order, weights);
        let mut den = TruncatedSeries::<C>::one(order, weights);
        for (arg, power) in &self.factors {
            let s = env_pochhammer(env, &arg.x, arg.start, arg.step, arg.count, order, weights)?;
            let target = if *power >= 0 { &mut num } else { &mut den };
            for _ in 0..power.unsigned_abs() {
                *target = target.mul(&s)?;
            }
        }
        let mut out = if den.num_terms() == 1 && den.coefficient(0).map_or(false, |c| c.is_one()) {
            num
        } else {
            num.mul(&den.invert(order)?)?
        };
        out = out.scale(&self.scalar);
        if self.q_shift != 0 {
            out = out.mul_monomial(&Monomial::q_pow(1, self.q_shift))?;
        }
        Ok(out)
    }

    /// Builds a univariate quotient (no parameter factors).
    pub fn build<C: Coefficient>(&self, order: i64, weights: Weights) -> Result<TruncatedSeries<C>> {
        self.build_env(&ParamEnv::forbidden(), order, weights)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ratio;
    use crate::series::QSeries;

    fn w() -> Weights {
        Weights::default()
    }

    /// Independent oracle for the Lambert-type sum `sum q^n / (1 + q^{2n})`:
    /// the coefficient of `q^m` is the number of divisors of `m` congruent
    /// to 1 mod 4 minus those congruent to 3 mod 4.
    fn divisor_oracle(m: i64) -> i64 {
        let mut c = 0;
        for d in 1..=m {
            if m % d == 0 {
                match d % 4 {
                    1 => c += 1,
                    3 => c -= 1,
                    _ => {}
                }
            }
        }
        c
    }

    fn lambert_spec() -> TermSumSpec {
        let mut spec = TermSumSpec::bare(1, 1, QuadPoly::linear(1));
        spec.rational_factors.push(RationalFactor::over_one_plus(2, 0));
        spec
    }

    #[test]
    fn lambert_sum_matches_divisor_oracle() {
        let s = build_term_sum(&lambert_spec(), 30).unwrap();
        for m in 0..30 {
            assert_eq!(s.coefficient(m).unwrap(), rat(divisor_oracle(m)), "q^{m}");
        }
        // Frozen prefix from the oracle: note coefficient 0 at q^3.
        let oracle: Vec<i64> = (0..8).map(divisor_oracle).collect();
        assert_eq!(oracle, vec![0, 1, 1, 0, 1, 2, 0, 0]);
    }

    #[test]
    fn empty_spec_is_geometric_series() {
        let spec = TermSumSpec::bare(0, 1, QuadPoly::linear(1));
        let s = build_term_sum(&spec, 12).unwrap();
        for m in 0..12 {
            assert_eq!(s.coefficient(m).unwrap(), rat(1));
        }
    }

    #[test]
    fn distinct_odd_parts_sum_matches_product() {
        // sum q^{n^2} / (q^2; q^2)_n generates partitions into distinct odd
        // parts, so it equals (-q; q^2)_inf; both sides computed
        // independently.
        let order = 32;
        let mut spec = TermSumSpec::bare(0, 2, QuadPoly::quad(1, 0));
        spec.denominator.push(TermPochhammer::new(
            Monomial::q_pow(1, 2),
            2,
            CountExpr::n(),
        ));
        let lhs = build_term_sum(&spec, order).unwrap();
        let rhs = QSeries::pochhammer(
            &PochhammerArg::infinite(Monomial::q_pow(-1, 1), 0, 2),
            order,
            w(),
        )
        .unwrap();
        assert_eq!(lhs, rhs.truncate_to(order));
        // Frozen prefix: 1 + q + q^3 + q^4 + ... (no q^2 term).
        assert_eq!(lhs.coefficient(2).unwrap(), rat(0));
        assert_eq!(lhs.coefficient(8).unwrap(), rat(2));
    }

    #[test]
    fn divergent_spec_is_rejected() {
        // Constant exponent: row minima never increase.
        let spec = TermSumSpec::bare(0, 1, QuadPoly::new(rat(0), rat(0), rat(3)));
        assert!(matches!(build_term_sum(&spec, 10), Err(Error::DivergentSpec(_))));
    }

    #[test]
    fn fractional_exponent_is_rejected() {
        let spec = TermSumSpec::bare(0, 1, QuadPoly::new(rat(0), ratio(1, 2), rat(0)));
        assert!(matches!(build_term_sum(&spec, 10), Err(Error::NonIntegerExponent(_))));
    }

    #[test]
    fn factor_order_is_canonical() {
        let mut spec = TermSumSpec::bare(0, 2, QuadPoly::quad(1, 1));
        spec.numerator.push(TermPochhammer::new(Monomial::q_pow(-1, 1), 2, CountExpr::n()));
        spec.numerator.push(TermPochhammer::new(Monomial::q_pow(1, 2), 2, CountExpr::affine(1, 1)));
        spec.denominator.push(TermPochhammer::new(Monomial::q_pow(1, 2), 2, CountExpr::n()));
        spec.denominator.push(TermPochhammer::new(Monomial::q_pow(-1, 2), 2, CountExpr::n()));
        let s1 = build_term_sum(&spec, 25).unwrap();
        spec.numerator.reverse();
        spec.denominator.reverse();
        let s2 = build_term_sum(&spec, 25).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn finite_phi_two_term_example() {
        // phi(q^{-2}, q^4, -q; q, -q^2; q^2, 1) at n=1, times -q^{2}, equals
        // 1 + 2q (hand-checked closed form).
        let spec = FinitePhiSpec::new(
            1,
            2,
            vec![Monomial::q_pow(1, -2), Monomial::q_pow(1, 4), Monomial::q_pow(-1, 1)],
            vec![Monomial::q_pow(1, 1), Monomial::q_pow(-1, 2)],
            Monomial::one(),
        );
        let phi = finite_phi(&spec, 30).unwrap();
        let lhs = phi.mul_monomial(&Monomial::q_pow(-1, 2)).unwrap();
        assert_eq!(lhs.coefficient(0).unwrap(), rat(1));
        assert_eq!(lhs.coefficient(1).unwrap(), rat(2));
        for e in 2..28 {
            assert_eq!(lhs.coefficient(e).unwrap(), rat(0), "q^{e}");
        }
    }

    #[test]
    fn finite_phi_pole_guard() {
        // Lower parameter 1 makes (1; q^2)_k vanish for k >= 1.
        let spec = FinitePhiSpec::new(
            2,
            2,
            vec![Monomial::q_pow(1, -4), Monomial::q_pow(1, 6)],
            vec![Monomial::one()],
            Monomial::one(),
        );
        assert!(matches!(finite_phi(&spec, 30), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn poch_quotient_builds_quotients() {
        // (-q; q)_inf / (q; q)_inf = overpartition generating function:
        // 1 + 2q + 4q^2 + 8q^3 + ...
        let pq = PochQuotient::new(vec![
            (PochhammerArg::infinite(Monomial::q_pow(-1, 1), 0, 1), 1),
            (PochhammerArg::infinite(Monomial::q_pow(1, 1), 0, 1), -1),
        ]);
        let s: QSeries = pq.build(10, w()).unwrap();
        assert_eq!(s.coefficient(0).unwrap(), rat(1));
        assert_eq!(s.coefficient(1).unwrap(), rat(2));
        assert_eq!(s.coefficient(2).unwrap(), rat(4));
        assert_eq!(s.coefficient(3).unwrap(), rat(8));
        assert_eq!(s.coefficient(4).unwrap(), rat(14));
    }

    #[test]
    fn parameterized_rows_stay_graded() {
        // sum (q^2/a, q^2/b; q^2)_n (ab)^n / ((q^2; q^2)_n (q; q^2)_n): all
        // stored monomials must have nonnegative parameter degrees and weight
        // below the order.
        let spec = TermSumSpec::rphis(
            2,
            &[Monomial::new(rat(1), 2, -1, 0), Monomial::new(rat(1), 2, 0, -1)],
            &[Monomial::q_pow(1, 1)],
            &Monomial::new(rat(1), 0, 1, 1),
        )
        .unwrap();
        let s = build_term_sum_param(&spec, 24).unwrap();
        assert!(!s.is_zero());
        for (&e, poly) in s.iter() {
            assert!(e >= 0);
            for (&(i, j), _) in poly.terms() {
                assert!(i >= 0 && j >= 0, "negative parameter degree stored");
                assert!(e + 3 * (i as i64 + j as i64) < 24);
            }
        }
    }

    #[test]
    fn valuation_build_agrees_with_specialization_for_heavy_subs() {
        let spec = TermSumSpec::rphis(
            2,
            &[Monomial::new(rat(1), 2, -1, 0), Monomial::new(rat(1), 2, 0, -1)],
            &[Monomial::q_pow(1, 1)],
            &Monomial::new(rat(1), 0, 1, 1),
        )
        .unwrap();
        let order = 24;
        let param = build_term_sum_param(&spec, order).unwrap();
        let sub_a = Monomial::q_pow(1, 3);
        let sub_b = Monomial::q_pow(-1, 4);
        let specialized = param.specialize(&sub_a, &sub_b).unwrap();
        let direct = build_term_sum_at(&spec, &sub_a, &sub_b, order).unwrap();
        assert!(specialized.eq_below(&direct, order));
    }
}

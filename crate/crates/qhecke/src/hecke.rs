//! Double-sum evaluators.
//!
//! A Hecke-type series is a sum `sum_{(n,j) in R} (-1)^{s_n n + s_j j} *
//! prod(1 ± q^{c n + d}) * q^{Q(n,j)}` over a lattice region `R`, where
//! `Q(n,j) = A n^2 + B nj + C j^2 + D n + E j + F` takes integer values on
//! `R` and its row minima grow without bound (definite form, or an
//! indefinite form constrained to a cone). This module evaluates such sums
//! to a requested order, plus the one-dimensional theta sums used alongside
//! them.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hypergeom::{ParamEnv, PochQuotient, RationalFactor};
use crate::ring::{rat, Rat, Weights};
use crate::series::QSeries;

/// Rational quadratic form `a n^2 + b nj + c j^2 + d n + e j + f`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadForm {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
    pub e: Rat,
    pub f: Rat,
}

impl QuadForm {
    pub fn int(a: i64, b: i64, c: i64, d: i64, e: i64, f: i64) -> Self {
        QuadForm { a: rat(a), b: rat(b), c: rat(c), d: rat(d), e: rat(e), f: rat(f) }
    }

    /// Coefficients given as halves: `halves(1, 0, 0, 1, 0, 0)` is
    /// `n(n+1)/2`.
    pub fn halves(a: i64, b: i64, c: i64, d: i64, e: i64, f: i64) -> Self {
        let h = |x: i64| Rat::new(x.into(), 2.into());
        QuadForm { a: h(a), b: h(b), c: h(c), d: h(d), e: h(e), f: h(f) }
    }

    pub fn eval(&self, n: i64, j: i64) -> Rat {
        let (n, j) = (rat(n), rat(j));
        &self.a * &n * &n + &self.b * &n * &j + &self.c * &j * &j + &self.d * &n + &self.e * &j
            + &self.f
    }

    fn eval_int(&self, n: i64, j: i64) -> Result<i64> {
        let v = self.eval(n, j);
        if !v.is_integer() {
            return Err(Error::NonIntegerExponent(format!("{} at (n,j)=({},{})", v, n, j)));
        }
        Ok(i64::try_from(v.to_integer()).expect("exponent fits i64"))
    }
}

/// Summation regions for the inner index `j` given the outer index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// `n >= n_start`, `j` in `[-n, n]`.
    JFull,
    /// `n >= n_start`, `j` in `[-n, n+1]`.
    JPlus,
    /// `n >= n_start`, `j` in `[-n+1, n]` (empty at `n = 0`).
    JShift,
    /// `n` over all integers, `j >= |n|`.
    Jacobi,
    /// `n >= n_start`, `j` in `[-floor(n/2), floor(n/2)]`.
    Rogers,
}

/// Declarative description of a Hecke-type double sum.
#[derive(Debug, Clone, PartialEq)]
pub struct HeckeSpec {
    pub quad: QuadForm,
    pub region: Region,
    pub n_start: i64,
    /// Sign `(-1)^{s_n n + s_j j}` switches.
    pub sign_n: bool,
    pub sign_j: bool,
    /// Row factors `(1 ± q^{c n + d})`, expanded inline (never inverted).
    pub factors: Vec<RationalFactor>,
    pub prefactor: Option<PochQuotient>,
}

impl HeckeSpec {
    pub fn new(quad: QuadForm, region: Region) -> Self {
        HeckeSpec {
            quad,
            region,
            n_start: 0,
            sign_n: false,
            sign_j: false,
            factors: Vec::new(),
            prefactor: None,
        }
    }

    pub fn with_signs(mut self, sign_n: bool, sign_j: bool) -> Self {
        self.sign_n = sign_n;
        self.sign_j = sign_j;
        self
    }

    pub fn with_start(mut self, n_start: i64) -> Self {
        self.n_start = n_start;
        self
    }

    pub fn with_factor(mut self, f: RationalFactor) -> Self {
        self.factors.push(f);
        self
    }

    pub fn with_prefactor(mut self, p: PochQuotient) -> Self {
        self.prefactor = Some(p);
        self
    }

    fn validate(&self) -> Result<()> {
        for f in &self.factors {
            if f.inverted {
                return Err(Error::InvalidSpec(
                    "double-sum row factors are expanded inline, never inverted".into(),
                ));
            }
        }
        match self.region {
            Region::Jacobi => {
                if self.n_start != 0 {
                    return Err(Error::InvalidSpec(
                        "the two-sided region sums over all integers n".into(),
                    ));
                }
            }
            _ => {
                if self.n_start < 0 {
                    return Err(Error::InvalidSpec("n_start must be nonnegative".into()));
                }
            }
        }
        Ok(())
    }
}

enum JRange {
    Finite(i64, i64),
    UpFrom(i64),
}

fn j_range(region: Region, n: i64) -> JRange {
    match region {
        Region::JFull => JRange::Finite(-n, n),
        Region::JPlus => JRange::Finite(-n, n + 1),
        Region::JShift => JRange::Finite(-n + 1, n),
        Region::Jacobi => JRange::UpFrom(n.abs()),
        Region::Rogers => JRange::Finite(-n.div_euclid(2), n.div_euclid(2)),
    }
}

/// Exact minimum of the row quadratic `j -> Q(n, j)` over the region's
/// j-range; `None` for an empty row.
fn row_min(quad: &QuadForm, region: Region, n: i64) -> Result<Option<Rat>> {
    let slope_zero_candidates = |lo: i64, hi: i64| -> Vec<i64> {
        // Integer points adjacent to the real vertex -(b n + e) / (2c).
        let num = -(&quad.b * rat(n) + &quad.e);
        let den = &quad.c * rat(2);
        let v = num / den;
        let fl = v.floor().to_integer();
        let mut out = Vec::new();
        for cand in [fl.clone(), fl + 1] {
            if let Ok(j) = i64::try_from(cand) {
                if j >= lo && j <= hi {
                    out.push(j);
                }
            }
        }
        out
    };
    match j_range(region, n) {
        JRange::Finite(lo, hi) => {
            if lo > hi {
                return Ok(None);
            }
            let mut m = quad.eval(n, lo).min(quad.eval(n, hi));
            if quad.c.is_positive() {
                for j in slope_zero_candidates(lo, hi) {
                    m = m.min(quad.eval(n, j));
                }
            }
            Ok(Some(m))
        }
        JRange::UpFrom(lo) => {
            if quad.c.is_positive() {
                let mut m = quad.eval(n, lo);
                for j in slope_zero_candidates(lo, i64::MAX) {
                    m = m.min(quad.eval(n, j));
                }
                Ok(Some(m))
            } else if quad.c.is_zero() {
                // Row is linear in j: needs strictly positive slope.
                let slope = &quad.b * rat(n) + &quad.e;
                if slope.is_positive() {
                    Ok(Some(quad.eval(n, lo)))
                } else {
                    Err(Error::NonTerminatingProduct(format!(
                        "unbounded row at n={n} with nonincreasing exponent"
                    )))
                }
            } else {
                Err(Error::NonTerminatingProduct(
                    "unbounded row with negative j^2 coefficient".into(),
                ))
            }
        }
    }
}

fn sign_at(spec: &HeckeSpec, n: i64, j: i64) -> bool {
    let mut s = 0i64;
    if spec.sign_n {
        s += n;
    }
    if spec.sign_j {
        s += j;
    }
    s.rem_euclid(2) == 1
}

/// Builds one row of the double sum (`None` if the row vanishes or is
/// entirely at or above the order).
fn build_row(spec: &HeckeSpec, n: i64, order: i64, weights: Weights) -> Result<Option<QSeries>> {
    let w_q = weights.w_q as i64;
    let mut scalar = Rat::one();
    for f in &spec.factors {
        let g = f.c * n + f.d;
        if g == 0 {
            if f.minus {
                return Ok(None);
            }
            scalar *= rat(2);
        }
    }
    let mut row = QSeries::zero(order, weights);
    match j_range(spec.region, n) {
        JRange::Finite(lo, hi) => {
            if lo > hi {
                return Ok(None);
            }
            for j in lo..=hi {
                let e = spec.quad.eval_int(n, j)?;
                let c = if sign_at(spec, n, j) { rat(-1) } else { rat(1) };
                row.add_term(e, c);
            }
        }
        JRange::UpFrom(lo) => {
            let mut j = lo;
            loop {
                let e = spec.quad.eval_int(n, j)?;
                if w_q * e >= order {
                    // Past the vertex the exponent only grows.
                    if quad_slope(&spec.quad, n, j).is_positive() {
                        break;
                    }
                }
                let c = if sign_at(spec, n, j) { rat(-1) } else { rat(1) };
                row.add_term(e, c);
                j += 1;
            }
        }
    }
    if row.is_zero() {
        return Ok(None);
    }
    for f in &spec.factors {
        let g = f.c * n + f.d;
        if g == 0 {
            continue; // handled via the scalar
        }
        let mut factor = QSeries::one(crate::series::EXACT_ORDER, weights);
        factor.add_term(g, if f.minus { rat(-1) } else { rat(1) });
        row = row.mul(&factor)?;
    }
    Ok(Some(row.scale(&scalar)))
}

/// Forward difference `Q(n, j+1) - Q(n, j)`, the discrete slope in `j`.
fn quad_slope(quad: &QuadForm, n: i64, j: i64) -> Rat {
    quad.eval(n, j + 1) - quad.eval(n, j)
}

const STALL_LIMIT: usize = 8;
const SETTLE_ROWS: usize = 3;

/// Evaluates the double sum to the given order (default weights; the result
/// is a univariate q-series).
pub fn build_hecke(spec: &HeckeSpec, order: i64) -> Result<QSeries> {
    spec.validate()?;
    let weights = Weights::default();
    let w_q = weights.w_q as i64;
    let mut acc = QSeries::zero(order, weights);

    // Settle/stall bookkeeping runs per parity class of n: row minima of
    // the supported quadratic forms are eventually monotone within a class
    // (floor(n/2) bounds and half-integer coefficients have period 2), but
    // may alternate between classes forever.
    let mut sweep = |start: i64, dir: i64| -> Result<()> {
        let mut n = start;
        let mut prev: [Option<i64>; 2] = [None, None];
        let mut stall = [0usize; 2];
        let mut settled = [0usize; 2];
        let mut done = [false, false];
        let mut empty_streak = 0usize;
        loop {
            if done[0] && done[1] {
                return Ok(());
            }
            let class = n.rem_euclid(2) as usize;
            if done[class] {
                n += dir;
                continue;
            }
            let bound = match row_min(&spec.quad, spec.region, n)? {
                Some(m) => {
                    let mut b = w_q * i64::try_from(m.floor().to_integer()).unwrap_or(i64::MAX);
                    for f in &spec.factors {
                        b += (w_q * (f.c * n + f.d)).min(0);
                    }
                    Some(b)
                }
                None => None,
            };
            if let Some(b) = bound {
                empty_streak = 0;
                let mut nondecreasing = true;
                if let Some(p) = prev[class] {
                    if b <= p {
                        stall[class] += 1;
                        if stall[class] >= STALL_LIMIT {
                            return Err(Error::DivergentSpec(stall[class]));
                        }
                    } else {
                        stall[class] = 0;
                    }
                    nondecreasing = b >= p;
                }
                prev[class] = Some(b);
                if b >= order && nondecreasing {
                    settled[class] += 1;
                    if settled[class] >= SETTLE_ROWS {
                        done[class] = true;
                    }
                } else {
                    settled[class] = 0;
                    if b < order {
                        if let Some(row) = build_row(spec, n, order, weights)? {
                            acc = acc.add(&row)?;
                        }
                    }
                }
            } else {
                // Empty rows recur only in degenerate regions; treat a run
                // of them as the end of the sum.
                empty_streak += 1;
                if empty_streak >= SETTLE_ROWS {
                    return Ok(());
                }
            }
            n += dir;
        }
    };

    match spec.region {
        Region::Jacobi => {
            sweep(0, 1)?;
            sweep(-1, -1)?;
        }
        _ => sweep(spec.n_start, 1)?,
    }

    if let Some(pre) = &spec.prefactor {
        let pre_series: QSeries = pre.build_env(&ParamEnv::forbidden(), order, weights)?;
        acc = acc.mul(&pre_series)?;
    }
    Ok(acc)
}

/// `sum_{n in Z} q^{c n^2}` to the given order (`c >= 1`).
pub fn theta_square(c: i64, order: i64) -> Result<QSeries> {
    if c < 1 {
        return Err(Error::InvalidSpec("square theta needs a positive quadratic".into()));
    }
    let weights = Weights::default();
    let mut s = QSeries::zero(order, weights);
    s.add_term(0, rat(1));
    let mut n = 1i64;
    while weights.w_q as i64 * c * n * n < order {
        s.add_term(c * n * n, rat(2));
        n += 1;
    }
    Ok(s)
}

/// `sum_{n >= 0} q^{c n(n+1)}` to the given order (`c >= 1`).
pub fn theta_triangular(c: i64, order: i64) -> Result<QSeries> {
    if c < 1 {
        return Err(Error::InvalidSpec("triangular theta needs a positive quadratic".into()));
    }
    let weights = Weights::default();
    let mut s = QSeries::zero(order, weights);
    let mut n = 0i64;
    while weights.w_q as i64 * c * n * (n + 1) < order {
        s.add_term(c * n * (n + 1), rat(1));
        n += 1;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::euler_product;

    /// Brute-force oracle: enumerate lattice points of the region directly
    /// from its definition, independent of the builder's row logic.
    fn brute_force(spec: &HeckeSpec, order: i64) -> Vec<i64> {
        let mut out = vec![0i64; order as usize];
        // Generous outer range: large enough for every test spec.
        for n in -200i64..200 {
            let (lo, hi) = match spec.region {
                Region::JFull => {
                    if n < spec.n_start {
                        continue;
                    }
                    (-n, n)
                }
                Region::JPlus => {
                    if n < spec.n_start {
                        continue;
                    }
                    (-n, n + 1)
                }
                Region::JShift => {
                    if n < spec.n_start {
                        continue;
                    }
                    (-n + 1, n)
                }
                Region::Jacobi => (n.abs(), 400),
                Region::Rogers => {
                    if n < spec.n_start {
                        continue;
                    }
                    (-n.div_euclid(2), n.div_euclid(2))
                }
            };
            for j in lo..=hi {
                let e = spec.quad.eval(n, j);
                assert!(e.is_integer());
                let e = i64::try_from(e.to_integer()).unwrap();
                if e < 0 || e >= order {
                    continue;
                }
                let mut v = if sign_at(spec, n, j) { -1i64 } else { 1 };
                for f in &spec.factors {
                    let g = f.c * n + f.d;
                    if g == 0 {
                        v *= if f.minus { 0 } else { 2 };
                    }
                }
                out[e as usize] += v;
                for f in &spec.factors {
                    let g = f.c * n + f.d;
                    if g != 0 && e + g >= 0 && e + g < order {
                        let s = if f.minus { -1 } else { 1 };
                        let mut v2 = if sign_at(spec, n, j) { -s } else { s };
                        for f2 in &spec.factors {
                            if f2.c * n + f2.d == 0 {
                                v2 *= if f2.minus { 0 } else { 2 };
                            }
                        }
                        out[(e + g) as usize] += v2;
                    }
                }
            }
        }
        out
    }

    fn coeffs(s: &QSeries, order: i64) -> Vec<i64> {
        (0..order)
            .map(|e| {
                let c = s.coefficient(e).unwrap();
                assert!(c.is_integer());
                i64::try_from(c.to_integer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn two_sided_region_matches_euler_cube() {
        // sum_{n in Z} sum_{j >= |n|} (-1)^j q^{j(j+1)/2} = (q; q)_inf^3.
        let spec =
            HeckeSpec::new(QuadForm::halves(0, 0, 1, 0, 1, 0), Region::Jacobi).with_signs(false, true);
        let order = 40;
        let s = build_hecke(&spec, order).unwrap();
        let e = euler_product(1, 1, order).unwrap();
        let cube = e.mul(&e).unwrap().mul(&e).unwrap();
        assert!(s.eq_below(&cube, order));
        let c = coeffs(&s, 8);
        assert_eq!(c, vec![1, -3, 0, 5, 0, 0, -7, 0]);
    }

    #[test]
    fn constrained_indefinite_region_matches_euler_square() {
        // sum_{n >= 0} sum_{|j| <= n/2} (-1)^{n+j} q^{n(n+1)/2 - j(3j-1)/2}
        // = (q; q)_inf^2.
        let spec = HeckeSpec::new(QuadForm::halves(1, 0, -3, 1, 1, 0), Region::Rogers)
            .with_signs(true, true);
        let order = 40;
        let s = build_hecke(&spec, order).unwrap();
        let e = euler_product(1, 1, order).unwrap();
        let square = e.mul(&e).unwrap();
        assert!(s.eq_below(&square, order));
    }

    #[test]
    fn shifted_region_example() {
        // sum_{n >= 0} sum_{j=-n+1}^{n} q^{n^2 + j^2}: the n = 0 row is
        // empty; prefix q + q^2 + q^4 + 2q^5 (brute-force verified).
        let spec = HeckeSpec::new(QuadForm::int(1, 0, 1, 0, 0, 0), Region::JShift);
        let order = 30;
        let s = build_hecke(&spec, order).unwrap();
        assert_eq!(coeffs(&s, order), brute_force(&spec, order));
        assert_eq!(coeffs(&s, 6), vec![0, 1, 1, 0, 1, 2]);
    }

    #[test]
    fn all_finite_regions_match_brute_force() {
        let order = 36;
        let specs = vec![
            HeckeSpec::new(QuadForm::int(1, 0, 1, 0, 0, 0), Region::JFull)
                .with_signs(false, true)
                .with_factor(RationalFactor::one_minus(2, 1)),
            HeckeSpec::new(QuadForm::halves(3, 0, 2, 1, 0, 0), Region::JFull)
                .with_signs(false, true),
            HeckeSpec::new(QuadForm::int(1, 0, 1, 1, 0, 0), Region::JPlus)
                .with_factor(RationalFactor::one_minus(2, 2)),
            HeckeSpec::new(QuadForm::halves(1, 0, 2, -1, 0, 0), Region::JFull)
                .with_signs(true, true)
                .with_factor(RationalFactor::one_minus(2, 1))
                .with_start(0),
            HeckeSpec::new(QuadForm::int(2, 0, 1, 1, 0, 0), Region::JFull)
                .with_signs(true, false)
                .with_factor(RationalFactor::one_plus(2, 1))
                .with_start(1),
        ];
        for spec in specs {
            let s = build_hecke(&spec, order).unwrap();
            assert_eq!(coeffs(&s, order), brute_force(&spec, order), "spec {spec:?}");
        }
    }

    #[test]
    fn full_region_folds_symmetrically() {
        // With no j-sign and no odd j-terms, the j and -j halves agree:
        // folding over j >= 0 reproduces the series.
        let spec = HeckeSpec::new(QuadForm::int(2, 0, 1, 1, 0, 0), Region::JFull);
        let order = 40;
        let s = build_hecke(&spec, order).unwrap();
        let weights = Weights::default();
        let mut folded = QSeries::zero(order, weights);
        for n in 0..order {
            if n * n + n >= order {
                break;
            }
            for j in 0..=n {
                let e = 2 * n * n + j * j + n;
                let c = if j == 0 { rat(1) } else { rat(2) };
                folded.add_term(e, c);
            }
        }
        assert!(s.eq_below(&folded, order));
    }

    #[test]
    fn prefactor_multiplies_result() {
        use crate::ring::Monomial;
        use crate::series::PochhammerArg;
        let base = HeckeSpec::new(QuadForm::int(1, 0, 1, 0, 0, 0), Region::JFull);
        let pq = PochQuotient::new(vec![(
            PochhammerArg::infinite(Monomial::q_pow(1, 1), 0, 1),
            -1,
        )]);
        let spec = base.clone().with_prefactor(pq);
        let order = 25;
        let plain = build_hecke(&base, order).unwrap();
        let with_pre = build_hecke(&spec, order).unwrap();
        let inv_euler = euler_product(1, 1, order).unwrap().invert(order).unwrap();
        let manual = plain.mul(&inv_euler).unwrap();
        assert!(with_pre.eq_below(&manual, order));
    }

    #[test]
    fn theta_sums_match_definitions() {
        let s2 = theta_square(2, 10).unwrap();
        assert_eq!(coeffs(&s2, 10), vec![1, 0, 2, 0, 0, 0, 0, 0, 2, 0]);
        let s1 = theta_square(1, 8).unwrap();
        assert_eq!(coeffs(&s1, 8), vec![1, 2, 0, 0, 2, 0, 0, 0]);
        let t = theta_triangular(2, 13).unwrap();
        assert_eq!(coeffs(&t, 13), vec![1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn fractional_exponent_is_rejected() {
        let spec = HeckeSpec::new(QuadForm::halves(1, 0, 2, 0, 0, 0), Region::JFull);
        assert!(matches!(build_hecke(&spec, 10), Err(Error::NonIntegerExponent(_))));
    }

    #[test]
    fn nonterminating_regions_are_rejected() {
        // Two-sided region with a linear row exponent that does not grow.
        let flat = HeckeSpec::new(QuadForm::int(1, 0, 0, 0, 0, 0), Region::Jacobi);
        assert!(matches!(build_hecke(&flat, 10), Err(Error::NonTerminatingProduct(_))));
        // Definite direction reversed: row minima shrink.
        let shrink = HeckeSpec::new(QuadForm::int(-1, 0, 1, 0, 0, 30), Region::JFull);
        assert!(matches!(build_hecke(&shrink, 10), Err(Error::DivergentSpec(_))));
    }
}

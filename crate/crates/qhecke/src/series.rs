//! Truncated formal series in `q` over an exact coefficient ring.
//!
//! A series is a sparse map from q-exponents to coefficients together with an
//! exclusive precision bound `order`: every monomial of weighted degree
//! `< order` is known exactly, everything at or above it has been discarded.
//! The weighted degree of `c * q^e` is `w_q * e + wt(c)` where `wt` is the
//! parameter weight of the coefficient, so truncation is a quotient by the
//! ideal of high-weight monomials in all of `q`, `a`, `b` at once.
//!
//! Laurent support (negative q-exponents) is allowed. Precision propagates
//! soundly through products: multiplying by a series whose lowest weight is
//! negative lowers the precision of the result, because the unknown tail of
//! one factor pollutes lower weights after the shift. Finite products of
//! explicit monomial factors are tracked as exact (a sentinel order), which
//! keeps that bookkeeping from being needlessly pessimistic.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use crate::error::{Error, Result};
use crate::ring::{Coefficient, Monomial, ParamPolynomial, Rat, Weights};

/// Sentinel precision for exact polynomials. Any order at or above
/// `EXACT_THRESHOLD` means "this object is exact, not truncated".
pub const EXACT_ORDER: i64 = i64::MAX / 8;
const EXACT_THRESHOLD: i64 = i64::MAX / 16;

fn clamp_order(o: i64) -> i64 {
    o.min(EXACT_ORDER)
}

/// Number of factors of an exact q-Pochhammer product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PochCount {
    Finite(u64),
    Infinite,
}

/// Specification of the q-Pochhammer product
/// `prod_k (1 - x * q^{start + k*step})`, with `k` ranging over `0..count`.
#[derive(Debug, Clone, PartialEq)]
pub struct PochhammerArg {
    pub x: Monomial,
    pub start: i64,
    pub step: u32,
    pub count: PochCount,
}

impl PochhammerArg {
    pub fn finite(x: Monomial, start: i64, step: u32, count: u64) -> Self {
        PochhammerArg { x, start, step, count: PochCount::Finite(count) }
    }

    pub fn infinite(x: Monomial, start: i64, step: u32) -> Self {
        PochhammerArg { x, start, step, count: PochCount::Infinite }
    }
}

/// Truncated formal series over the coefficient ring `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<C: Coefficient> {
    coeffs: BTreeMap<i64, C>,
    order: i64,
    weights: Weights,
}

/// Univariate q-series with rational coefficients.
pub type QSeries = TruncatedSeries<Rat>;

/// Two-parameter series: coefficients are Laurent polynomials in `a`, `b`.
pub type ParamSeries = TruncatedSeries<ParamPolynomial>;

impl<C: Coefficient> TruncatedSeries<C> {
    pub fn zero(order: i64, weights: Weights) -> Self {
        TruncatedSeries { coeffs: BTreeMap::new(), order: clamp_order(order), weights }
    }

    pub fn one(order: i64, weights: Weights) -> Self {
        let mut s = Self::zero(order, weights);
        s.add_term(0, C::one());
        s
    }

    /// An exact single-term series `c * q^e`.
    pub fn exact_monomial(c: C, e: i64, weights: Weights) -> Self {
        let mut s = Self::zero(EXACT_ORDER, weights);
        s.add_term(e, c);
        s
    }

    /// An exact series from explicit terms.
    pub fn exact_from_terms(terms: Vec<(i64, C)>, weights: Weights) -> Self {
        let mut s = Self::zero(EXACT_ORDER, weights);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn weights(&self) -> Weights {
        self.weights
    }

    pub fn is_exact(&self) -> bool {
        self.order >= EXACT_THRESHOLD
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &C)> {
        self.coeffs.iter()
    }

    /// Lowest stored q-exponent.
    pub fn q_floor(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Minimum weighted degree over stored terms.
    pub fn min_weight(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .filter_map(|(&e, c)| c.min_weight(&self.weights).map(|m| self.weights.q_weight(e) + m))
            .min()
    }

    /// Minimum weight for precision propagation: stored minimum, or the
    /// order itself when nothing is stored (a zero series has no known term
    /// below its order, so its true minimum is at least the order).
    fn effective_min(&self) -> i64 {
        self.min_weight().unwrap_or(self.order).min(self.order)
    }

    /// Adds `c * q^e`, truncating the coefficient to the weight window.
    pub fn add_term(&mut self, e: i64, c: C) {
        let bound = self.order.saturating_sub(self.weights.q_weight(e));
        let c = c.truncate(bound, &self.weights);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add_ref(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Coefficient of `q^e`. Errors when the exponent lies outside the known
    /// window.
    pub fn coefficient(&self, e: i64) -> Result<C> {
        if self.weights.q_weight(e) >= self.order {
            return Err(Error::OutOfOrder { index: e, order: self.order });
        }
        Ok(self.coeffs.get(&e).cloned().unwrap_or_else(C::zero))
    }

    /// Restricts the series to a smaller precision window.
    pub fn truncate_to(&self, new_order: i64) -> Self {
        let new_order = new_order.min(self.order);
        let mut out = Self::zero(new_order, self.weights);
        for (&e, c) in &self.coeffs {
            out.add_term(e, c.clone());
        }
        out
    }

    fn check_weights(&self, other: &Self) -> Result<()> {
        if self.weights != other.weights {
            return Err(Error::WeightMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_weights(other)?;
        let order = self.order.min(other.order);
        let mut out = Self::zero(order, self.weights);
        for (&e, c) in &self.coeffs {
            out.add_term(e, c.clone());
        }
        for (&e, c) in &other.coeffs {
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, c.neg_ref())).collect(),
            order: self.order,
            weights: self.weights,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.order, self.weights);
        }
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|(&e, x)| (e, x.scale(c))).collect(),
            order: self.order,
            weights: self.weights,
        }
    }

    /// Product with sound precision: the unknown tail of either factor,
    /// shifted by the other factor's minimum weight, bounds what the result
    /// can claim.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_weights(other)?;
        let order = clamp_order(
            (self.order.saturating_add(other.effective_min()))
                .min(other.order.saturating_add(self.effective_min())),
        );
        let mut out = Self::zero(order, self.weights);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        let w = &self.weights;
        for (&e1, c1) in &self.coeffs {
            let m1 = match c1.min_weight(w) {
                Some(m) => w.q_weight(e1) + m,
                None => continue,
            };
            if m1.saturating_add(other.effective_min()) >= order {
                continue;
            }
            for (&e2, c2) in &other.coeffs {
                let m2 = match c2.min_weight(w) {
                    Some(m) => w.q_weight(e2) + m,
                    None => continue,
                };
                if m1.saturating_add(m2) >= order {
                    continue;
                }
                out.add_term(e1 + e2, c1.mul_ref(c2));
            }
        }
        Ok(out)
    }

    /// Multiplies by an exact monomial of the coefficient ring.
    pub fn mul_monomial(&self, m: &Monomial) -> Result<Self> {
        let c = C::embed(m.coeff.clone(), m.e_a, m.e_b)
            .ok_or(Error::InvalidSpec("parameter monomial in a univariate build".into()))?;
        self.mul(&Self::exact_monomial(c, m.e_q, self.weights))
    }

    /// `self^n` by repeated multiplication; `n == 0` gives the exact one.
    pub fn pow(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Ok(Self::one(EXACT_ORDER, self.weights));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse, truncated at `max_order`.
    ///
    /// The lowest stored term must be a unit of the coefficient ring. For a
    /// series of precision `W` with lowest q-exponent `f`, the inverse is
    /// exact below `W - 2*w_q*f` (shifting in and out of the unit-constant
    /// normal form costs `w_q*f` twice); the result order is that bound
    /// capped at `max_order`.
    pub fn invert(&self, max_order: i64) -> Result<Self> {
        let f = match self.q_floor() {
            Some(f) => f,
            None => return Err(Error::NotAUnit("zero series".into())),
        };
        let u0 = self.coeffs.get(&f).unwrap();
        let u0_inv = u0.inv_unit()?;
        let w_q = self.weights.w_q as i64;
        let order = clamp_order(self.order.saturating_sub(2 * w_q * f).min(max_order));
        let mut out = Self::zero(order, self.weights);
        if order <= self.weights.q_weight(-f) {
            return Ok(out);
        }
        // Solve u * v = 1 level by level in the shifted variable, where
        // u_k = self[f + k] and the result coefficient at q^{m - f} is v_m.
        let mut v: BTreeMap<i64, C> = BTreeMap::new();
        let m_max = {
            // largest m with w_q * (m - f) < order
            let mut m = (order - 1).div_euclid(w_q) + f;
            if m < 0 {
                m = -1;
            }
            m
        };
        for m in 0..=m_max {
            let mut acc = if m == 0 { C::one() } else { C::zero() };
            if m > 0 {
                for (&k, u_k) in self.coeffs.range(f + 1..=f + m) {
                    let v_prev = match v.get(&(m - (k - f))) {
                        Some(x) => x,
                        None => continue,
                    };
                    acc = acc.add_ref(&u_k.mul_ref(v_prev).neg_ref());
                }
            }
            let v_m = acc.mul_ref(&u0_inv);
            let bound = order - self.weights.q_weight(m - f);
            let v_m = v_m.truncate(bound, &self.weights);
            if !v_m.is_zero() {
                out.add_term(m - f, v_m.clone());
                v.insert(m, v_m);
            } else {
                v.insert(m, C::zero());
            }
        }
        Ok(out)
    }

    /// Builds the q-Pochhammer product described by `arg`.
    ///
    /// Finite products with nonnegative factor exponents are truncated at
    /// `order` as they are multiplied; finite products with Laurent factors
    /// are kept exact so later precision accounting sees their true floor.
    /// Infinite products require every factor to gain positive weight.
    pub fn pochhammer(arg: &PochhammerArg, order: i64, weights: Weights) -> Result<Self> {
        let x = &arg.x;
        let xc = C::embed(x.coeff.clone(), x.e_a, x.e_b)
            .ok_or(Error::InvalidSpec("parameter pochhammer in a univariate build".into()))?;
        match arg.count {
            PochCount::Finite(n) => {
                if n == 0 || x.is_zero() {
                    return Ok(Self::one(EXACT_ORDER, weights));
                }
                let x_weight = x.weight(&weights);
                let degree_bound: i64 = (0..n)
                    .map(|k| {
                        (x_weight + weights.q_weight(arg.start + arg.step as i64 * k as i64))
                            .max(0)
                    })
                    .sum();
                let exact = x.e_q + arg.start < 0 || degree_bound < order;
                let build_order = if exact { EXACT_ORDER } else { order };
                let mut acc = Self::one(build_order, weights);
                for k in 0..n {
                    let e = x.e_q + arg.start + arg.step as i64 * k as i64;
                    let mut factor = Self::one(build_order, weights);
                    factor.add_term(e, xc.neg_ref());
                    acc = acc.mul(&factor)?;
                }
                Ok(acc)
            }
            PochCount::Infinite => {
                if x.is_zero() {
                    return Ok(Self::one(order, weights));
                }
                let base_weight = weights.q_weight(x.e_q + arg.start)
                    + weights.param_weight(x.e_a, x.e_b);
                if base_weight <= 0 || arg.step == 0 {
                    return Err(Error::NonTerminatingProduct(format!(
                        "({} ; q^{})_inf starting at q-shift {}",
                        x, arg.step, arg.start
                    )));
                }
                let mut acc = Self::one(order, weights);
                let mut k = 0i64;
                loop {
                    let wt = base_weight + weights.q_weight(arg.step as i64 * k);
                    if wt >= order {
                        break;
                    }
                    let mut factor = Self::one(order, weights);
                    factor.add_term(x.e_q + arg.start + arg.step as i64 * k, xc.neg_ref());
                    acc = acc.mul(&factor)?;
                    k += 1;
                }
                Ok(acc)
            }
        }
    }

    /// The shifted product `prod_{k<n} (x - q^{start + k*step})`, the
    /// well-graded normal form of `(q^{start}/x ; q^{step})_n * x^n`.
    pub fn shifted_pochhammer_poly(
        x: &Monomial,
        start: i64,
        step: u32,
        n: u64,
        order: i64,
        weights: Weights,
    ) -> Result<Self> {
        if n == 0 {
            return Ok(Self::one(EXACT_ORDER, weights));
        }
        let xc = C::embed(x.coeff.clone(), x.e_a, x.e_b)
            .ok_or(Error::InvalidSpec("parameter monomial in a univariate build".into()))?;
        let x_weight = x.weight(&weights);
        let degree_bound: i64 = (0..n)
            .map(|k| {
                let q_side = weights.q_weight(start + step as i64 * k as i64);
                if x.is_zero() {
                    q_side.max(0)
                } else {
                    x_weight.max(q_side).max(0)
                }
            })
            .sum();
        let exact = start < 0 || (!x.is_zero() && x_weight < 0) || degree_bound < order;
        let build_order = if exact { EXACT_ORDER } else { order };
        let mut acc = Self::one(build_order, weights);
        for k in 0..n {
            let mut factor = Self::zero(build_order, weights);
            if !x.is_zero() {
                factor.add_term(x.e_q, xc.clone());
            }
            factor.add_term(start + step as i64 * k as i64, C::one().neg_ref());
            acc = acc.mul(&factor)?;
        }
        Ok(acc)
    }

    /// True when the two series agree on every exponent of weighted degree
    /// below `bound`.
    pub fn eq_below(&self, other: &Self, bound: i64) -> bool {
        if self.weights != other.weights {
            return false;
        }
        let keys: std::collections::BTreeSet<i64> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .collect();
        for e in keys {
            let w_e = self.weights.q_weight(e);
            if w_e >= bound {
                continue;
            }
            let window = bound - w_e;
            let a = self
                .coeffs
                .get(&e)
                .map(|c| c.truncate(window, &self.weights))
                .unwrap_or_else(C::zero);
            let b = other
                .coeffs
                .get(&e)
                .map(|c| c.truncate(window, &self.weights))
                .unwrap_or_else(C::zero);
            if a != b {
                return false;
            }
        }
        true
    }
}

impl ParamSeries {
    /// Exact monomial substitution `a -> sub_a, b -> sub_b` where each value
    /// is a monomial in `q` alone (possibly zero).
    ///
    /// This is the formal image of the truncated representative: the result
    /// keeps the same order label, but coefficients below that order are
    /// guaranteed complete only when each substituted exponent is at least
    /// the parameter's grading weight (see `specialize_sound_order`).
    /// Verification paths that need exactness at low-degree substitutions
    /// rebuild the sides at the substituted values instead.
    pub fn specialize(&self, sub_a: &Monomial, sub_b: &Monomial) -> Result<QSeries> {
        if !sub_a.is_univariate() || !sub_b.is_univariate() {
            return Err(Error::InvalidSpec(
                "substitution values must be monomials in q alone".into(),
            ));
        }
        let va = (sub_a.coeff.clone(), sub_a.e_q);
        let vb = (sub_b.coeff.clone(), sub_b.e_q);
        let mut out = QSeries::zero(self.order, self.weights);
        for (&e, poly) in &self.coeffs {
            for (shift, c) in poly.substitute(&va, &vb)? {
                out.add_term(e + shift, c);
            }
        }
        Ok(out)
    }

    /// Largest order below which `specialize` with these values is complete,
    /// judged by the grading alone.
    pub fn specialize_sound_order(&self, sub_a: &Monomial, sub_b: &Monomial) -> i64 {
        let w = &self.weights;
        let ratio = |sub: &Monomial, weight: u32| -> f64 {
            if sub.is_zero() {
                return 1.0;
            }
            (sub.e_q as f64 / weight as f64).min(1.0)
        };
        let r = ratio(sub_a, w.w_a).min(ratio(sub_b, w.w_b)).max(0.0);
        (self.order as f64 * r).floor() as i64
    }
}

impl<C: Coefficient> fmt::Display for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        } else {
            let mut first = true;
            for (e, c) in &self.coeffs {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({})*q^{}", c, e)?;
            }
        }
        if !self.is_exact() {
            write!(f, " + O(weight {})", self.order)?;
        }
        Ok(())
    }
}

/// Convenience: the Euler product `(q^{shift}; q^{step})_inf` over `Q`.
pub fn euler_product(shift: i64, step: u32, order: i64) -> Result<QSeries> {
    QSeries::pochhammer(
        &PochhammerArg::infinite(Monomial::q_pow(1, 0), shift, step),
        order,
        Weights::default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, ratio};

    fn w() -> Weights {
        Weights::default()
    }

    fn qs(terms: &[(i64, i64)], order: i64) -> QSeries {
        let mut s = QSeries::zero(order, w());
        for &(e, c) in terms {
            s.add_term(e, rat(c));
        }
        s
    }

    /// Independent oracle: schoolbook convolution of dense integer
    /// coefficient vectors indexed from 0.
    fn convolve(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    /// Independent oracle: partition counts by bounded-part dynamic
    /// programming.
    fn partition_oracle(max_n: usize) -> Vec<i64> {
        let mut table = vec![0i64; max_n + 1];
        table[0] = 1;
        for part in 1..=max_n {
            for n in part..=max_n {
                table[n] += table[n - part];
            }
        }
        table
    }

    #[test]
    fn geometric_series_inverts_one_minus_q() {
        let one_minus_q = qs(&[(0, 1), (1, -1)], 10);
        let geo = one_minus_q.invert(10).unwrap();
        for e in 0..10 {
            assert_eq!(geo.coefficient(e).unwrap(), rat(1), "coefficient of q^{e}");
        }
        assert_eq!(geo.mul(&one_minus_q).unwrap(), QSeries::one(10, w()).truncate_to(10));
    }

    #[test]
    fn difference_of_squares() {
        let p = qs(&[(0, 1), (1, 1)], 20);
        let m = qs(&[(0, 1), (1, -1)], 20);
        assert_eq!(p.mul(&m).unwrap(), qs(&[(0, 1), (2, -1)], 20));
    }

    #[test]
    fn euler_product_matches_pentagonal_expansion() {
        let e = euler_product(1, 1, 8).unwrap();
        // 1 - q - q^2 + q^5 + q^7 + O(q^8)
        assert_eq!(e, qs(&[(0, 1), (1, -1), (2, -1), (5, 1), (7, 1)], 8));
    }

    #[test]
    fn euler_square_matches_convolution_oracle() {
        let order = 12usize;
        let e = euler_product(1, 1, order as i64).unwrap();
        let dense: Vec<i64> = (0..order as i64)
            .map(|k| {
                let c = e.coefficient(k).unwrap();
                assert!(c.is_integer());
                i64::try_from(c.to_integer()).unwrap()
            })
            .collect();
        let expected = convolve(&dense, &dense);
        let square = e.mul(&e).unwrap();
        for k in 0..order as i64 {
            assert_eq!(square.coefficient(k).unwrap(), rat(expected[k as usize]), "q^{k}");
        }
        // Frozen prefix computed with the convolution oracle.
        assert_eq!(
            expected[..7],
            [1, -2, -1, 2, 1, 2, -2],
            "oracle prefix for the squared pentagonal series"
        );
    }

    #[test]
    fn inverse_of_euler_product_counts_partitions() {
        let order = 40usize;
        let p = euler_product(1, 1, order as i64).unwrap().invert(order as i64).unwrap();
        let oracle = partition_oracle(order - 1);
        for n in 0..order {
            assert_eq!(p.coefficient(n as i64).unwrap(), rat(oracle[n]), "p({n})");
        }
        assert_eq!(oracle[20], 627, "OEIS A000041");
    }

    #[test]
    fn invert_handles_nonmonic_and_laurent_floors() {
        // 1/(2 + q) = 1/2 - q/4 + q^2/8 - ...
        let s = qs(&[(0, 2), (1, 1)], 6);
        let inv = s.invert(6).unwrap();
        assert_eq!(inv.coefficient(0).unwrap(), ratio(1, 2));
        assert_eq!(inv.coefficient(1).unwrap(), ratio(-1, 4));
        assert_eq!(inv.coefficient(2).unwrap(), ratio(1, 8));

        // 1/(q^{-1} - q) = q + q^3 + q^5 + ...; floor -1 costs precision 2.
        let s = QSeries::exact_from_terms(vec![(-1, rat(1)), (1, rat(-1))], w());
        let inv = s.invert(9).unwrap();
        assert_eq!(inv.order(), 9);
        assert_eq!(inv.coefficient(1).unwrap(), rat(1));
        assert_eq!(inv.coefficient(2).unwrap(), rat(0));
        assert_eq!(inv.coefficient(3).unwrap(), rat(1));
        assert_eq!(inv.coefficient(7).unwrap(), rat(1));
        let t = qs(&[(-1, 1), (1, -1)], 20);
        assert_eq!(t.invert(30).unwrap().order(), 22);
    }

    #[test]
    fn invert_rejects_nonunit_lowest_coefficient() {
        let zero = QSeries::zero(5, w());
        assert!(matches!(zero.invert(5), Err(Error::NotAUnit(_))));

        // Lowest coefficient a + 1 is not a unit of Q[a^{±1}, b^{±1}].
        let mut p = ParamSeries::zero(9, w());
        let mut c = ParamPolynomial::monomial(rat(1), 1, 0);
        c.add_term((0, 0), &rat(1));
        p.add_term(0, c);
        assert!(matches!(p.invert(9), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn pochhammer_finite_examples() {
        // (x; q)_0 = 1 for any x.
        let empty = QSeries::pochhammer(
            &PochhammerArg::finite(Monomial::q_pow(5, 3), 0, 1, 0),
            10,
            w(),
        )
        .unwrap();
        assert!(empty.is_exact());
        assert_eq!(empty.coefficient(0).unwrap(), rat(1));

        // (-1; q^2)_2 = (1+1)(1+q^2) = 2 + 2q^2, exact because it fits.
        let p = QSeries::pochhammer(
            &PochhammerArg::finite(Monomial::q_pow(-1, 0), 0, 2, 2),
            10,
            w(),
        )
        .unwrap();
        assert!(p.is_exact());
        assert_eq!(p.truncate_to(10), qs(&[(0, 2), (2, 2)], 10));

        // (q; q)_3 = (1-q)(1-q^2)(1-q^3).
        let p = QSeries::pochhammer(
            &PochhammerArg::finite(Monomial::q_pow(1, 0), 1, 1, 3),
            100,
            w(),
        )
        .unwrap();
        assert_eq!(
            p.truncate_to(100),
            qs(&[(0, 1), (1, -1), (2, -1), (4, 1), (5, 1), (6, -1)], 100)
        );

        // A product whose exact degree exceeds the order is truncated there.
        let p = QSeries::pochhammer(
            &PochhammerArg::finite(Monomial::q_pow(1, 0), 1, 1, 10),
            8,
            w(),
        )
        .unwrap();
        assert_eq!(p.order(), 8);
    }

    #[test]
    fn pochhammer_infinite_requires_weight_gain() {
        let bad = QSeries::pochhammer(
            &PochhammerArg::infinite(Monomial::q_pow(-1, 0), 0, 2),
            10,
            w(),
        );
        assert!(matches!(bad, Err(Error::NonTerminatingProduct(_))));
        let bad = QSeries::pochhammer(
            &PochhammerArg::infinite(Monomial::q_pow(1, 1), 0, 0),
            10,
            w(),
        );
        assert!(matches!(bad, Err(Error::NonTerminatingProduct(_))));
    }

    #[test]
    fn shifted_pochhammer_products() {
        // n = 0 gives 1 exactly.
        let s: ParamSeries =
            TruncatedSeries::shifted_pochhammer_poly(&Monomial::new(rat(1), 0, 1, 0), 2, 2, 0, 40, w())
                .unwrap();
        assert!(s.is_exact());
        assert_eq!(s.coefficient(0).unwrap(), ParamPolynomial::one());

        // n = 1: (a - q^2).
        let s: ParamSeries =
            TruncatedSeries::shifted_pochhammer_poly(&Monomial::new(rat(1), 0, 1, 0), 2, 2, 1, 40, w())
                .unwrap();
        assert_eq!(s.coefficient(0).unwrap(), ParamPolynomial::monomial(rat(1), 1, 0));
        assert_eq!(s.coefficient(2).unwrap(), ParamPolynomial::constant(rat(-1)));

        // x = 0, n = 2: (0 - q^2)(0 - q^4) = q^6.
        let s: QSeries =
            TruncatedSeries::shifted_pochhammer_poly(&Monomial::zero(), 2, 2, 2, 40, w()).unwrap();
        assert_eq!(s, QSeries::exact_monomial(rat(1), 6, w()));
    }

    #[test]
    fn specialization_is_exact_monomial_substitution() {
        // s = (a - q^2)(b - q^2) built exactly, specialized at a = -q, b = q^3.
        let sa: ParamSeries =
            TruncatedSeries::shifted_pochhammer_poly(&Monomial::new(rat(1), 0, 1, 0), 2, 2, 1, 60, w())
                .unwrap();
        let sb: ParamSeries =
            TruncatedSeries::shifted_pochhammer_poly(&Monomial::new(rat(1), 0, 0, 1), 2, 2, 1, 60, w())
                .unwrap();
        let s = sa.mul(&sb).unwrap();
        let spec = s.specialize(&Monomial::q_pow(-1, 1), &Monomial::q_pow(1, 3)).unwrap();
        // (-q - q^2)(q^3 - q^2) = -q^4 - q^5 + q^4 ... expand: (-q)(q^3) + (-q)(-q^2) + (-q^2)(q^3) + q^4
        //  = -q^4 + q^3 - q^5 + q^4 = q^3 - q^5.
        assert_eq!(spec.coefficient(3).unwrap(), rat(1));
        assert_eq!(spec.coefficient(4).unwrap(), rat(0));
        assert_eq!(spec.coefficient(5).unwrap(), rat(-1));

        // Zero substitution into a nonnegative-degree series is legal.
        let z = s.specialize(&Monomial::zero(), &Monomial::q_pow(1, 3)).unwrap();
        // (0 - q^2)(q^3 - q^2) = -q^5 + q^4.
        assert_eq!(z.coefficient(4).unwrap(), rat(1));
        assert_eq!(z.coefficient(5).unwrap(), rat(-1));
    }

    #[test]
    fn specialization_rejects_zero_into_negative_power() {
        let mut s = ParamSeries::zero(40, w());
        s.add_term(3, ParamPolynomial::monomial(rat(1), -1, 0));
        assert!(matches!(
            s.specialize(&Monomial::zero(), &Monomial::one()),
            Err(Error::ZeroToNegativePower(-1))
        ));
    }

    #[test]
    fn specialization_sound_order_reflects_grading() {
        let s = ParamSeries::zero(40, w());
        assert_eq!(s.specialize_sound_order(&Monomial::q_pow(1, 3), &Monomial::q_pow(1, 4)), 40);
        assert_eq!(s.specialize_sound_order(&Monomial::q_pow(1, 1), &Monomial::zero()), 13);
        assert_eq!(s.specialize_sound_order(&Monomial::q_pow(1, 0), &Monomial::q_pow(1, 1)), 0);
        assert_eq!(s.specialize_sound_order(&Monomial::zero(), &Monomial::zero()), 40);
    }

    #[test]
    fn coefficient_outside_window_errors() {
        let s = qs(&[(0, 1)], 5);
        assert!(matches!(s.coefficient(5), Err(Error::OutOfOrder { index: 5, order: 5 })));
        assert!(s.coefficient(4).is_ok());
    }

    #[test]
    fn product_precision_shrinks_with_laurent_factors() {
        let s = qs(&[(0, 1), (1, 1)], 10);
        let laurent = QSeries::exact_from_terms(vec![(-2, rat(1))], w());
        let prod = s.mul(&laurent).unwrap();
        assert_eq!(prod.order(), 8);
        let exact_prod = laurent.mul(&laurent).unwrap();
        assert!(exact_prod.is_exact());
    }

    #[test]
    fn truncation_consistency_for_products() {
        let a = qs(&[(0, 1), (1, -2), (3, 5)], 30);
        let b = qs(&[(0, 1), (2, 7), (5, -1)], 30);
        let wide = a.mul(&b).unwrap();
        let narrow = a.truncate_to(12).mul(&b.truncate_to(12)).unwrap();
        assert!(wide.truncate_to(12).eq_below(&narrow, 12));
        assert_eq!(wide.truncate_to(12), narrow);
    }
}

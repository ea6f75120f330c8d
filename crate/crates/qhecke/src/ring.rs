//! Coefficient rings for the series engine.
//!
//! Two rings appear in practice: the rationals `Q` for univariate q-series,
//! and the Laurent polynomial ring `Q[a^{±1}, b^{±1}]` for two-parameter
//! series. Both are exact; no floating point enters anywhere.
//!
//! Elements of `Q[a^{±1}, b^{±1}]` are graded by a weighted degree
//! `w_a * deg_a + w_b * deg_b` so that the series layer can truncate
//! two-parameter expansions by total weight.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Invariants (reduced form, positive denominator)
/// are maintained by the underlying implementation and asserted in tests.
pub type Rat = BigRational;

/// Arbitrary precision integer.
pub type Int = BigInt;

/// Rational from an integer literal.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Rational `n / d` in reduced form. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Formats a rational as `num/den`, always including the denominator.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Grading weights for the monomial `q^e * a^i * b^j`.
///
/// The weight is `w_q * e + w_a * i + w_b * j`. All weights are positive so
/// that truncation by weight keeps a finite set of monomials in each degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Weights {
    pub w_q: u32,
    pub w_a: u32,
    pub w_b: u32,
}

impl Weights {
    pub fn new(w_q: u32, w_a: u32, w_b: u32) -> Self {
        assert!(w_q > 0 && w_a > 0 && w_b > 0, "weights must be positive");
        Weights { w_q, w_a, w_b }
    }

    /// Weight of the pure q-power `q^e`.
    pub fn q_weight(&self, e: i64) -> i64 {
        self.w_q as i64 * e
    }

    /// Weight contributed by the parameter part `a^i * b^j`.
    pub fn param_weight(&self, deg_a: i32, deg_b: i32) -> i64 {
        self.w_a as i64 * deg_a as i64 + self.w_b as i64 * deg_b as i64
    }
}

impl Default for Weights {
    /// The default grading: `q` has weight 1, `a` and `b` weight 3.
    fn default() -> Self {
        Weights { w_q: 1, w_a: 3, w_b: 3 }
    }
}

/// A monomial `coeff * q^{e_q} * a^{e_a} * b^{e_b}`.
///
/// `coeff == 0` represents the zero monomial; it is the canonical encoding of
/// a vanishing parameter substitution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: Rat,
    pub e_q: i64,
    pub e_a: i32,
    pub e_b: i32,
}

impl Monomial {
    pub fn new(coeff: Rat, e_q: i64, e_a: i32, e_b: i32) -> Self {
        Monomial { coeff, e_q, e_a, e_b }
    }

    /// The unit monomial `1`.
    pub fn one() -> Self {
        Monomial::new(Rat::one(), 0, 0, 0)
    }

    /// The zero monomial.
    pub fn zero() -> Self {
        Monomial::new(Rat::zero(), 0, 0, 0)
    }

    /// `c * q^e` with no parameter part.
    pub fn q_pow(c: i64, e: i64) -> Self {
        Monomial::new(rat(c), e, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.e_q == 0 && self.e_a == 0 && self.e_b == 0
    }

    /// True when the monomial involves neither parameter.
    pub fn is_univariate(&self) -> bool {
        self.e_a == 0 && self.e_b == 0
    }

    pub fn weight(&self, w: &Weights) -> i64 {
        w.q_weight(self.e_q) + w.param_weight(self.e_a, self.e_b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            coeff: &self.coeff * &other.coeff,
            e_q: self.e_q + other.e_q,
            e_a: self.e_a + other.e_a,
            e_b: self.e_b + other.e_b,
        }
    }

    /// `self^n` for nonnegative `n`; `0^0 == 1`.
    pub fn pow(&self, n: u32) -> Monomial {
        if n == 0 {
            return Monomial::one();
        }
        if self.is_zero() {
            return Monomial::zero();
        }
        let mut coeff = Rat::one();
        for _ in 0..n {
            coeff *= &self.coeff;
        }
        Monomial {
            coeff,
            e_q: self.e_q * n as i64,
            e_a: self.e_a * n as i32,
            e_b: self.e_b * n as i32,
        }
    }

    pub fn neg(&self) -> Monomial {
        Monomial { coeff: -self.coeff.clone(), ..self.clone() }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", format_rat(&self.coeff))?;
        if self.e_q != 0 {
            write!(f, "*q^{}", self.e_q)?;
        }
        if self.e_a != 0 {
            write!(f, "*a^{}", self.e_a)?;
        }
        if self.e_b != 0 {
            write!(f, "*b^{}", self.e_b)?;
        }
        Ok(())
    }
}

/// Sparse Laurent polynomial in the parameters `a` and `b` with exact
/// rational coefficients.
///
/// Canonical form: no stored coefficient is zero, so structural equality is
/// mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParamPolynomial {
    terms: BTreeMap<(i32, i32), Rat>,
}

impl ParamPolynomial {
    pub fn zero() -> Self {
        ParamPolynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        ParamPolynomial::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = ParamPolynomial::zero();
        if !c.is_zero() {
            p.terms.insert((0, 0), c);
        }
        p
    }

    /// The single term `c * a^{deg_a} * b^{deg_b}`.
    pub fn monomial(c: Rat, deg_a: i32, deg_b: i32) -> Self {
        let mut p = ParamPolynomial::zero();
        if !c.is_zero() {
            p.terms.insert((deg_a, deg_b), c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&(0, 0)).map_or(false, |c| c.is_one())
    }

    /// Constant term (coefficient of `a^0 b^0`).
    pub fn constant_part(&self) -> Rat {
        self.terms.get(&(0, 0)).cloned().unwrap_or_else(Rat::zero)
    }

    /// True when no parameter power appears.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, deg: (i32, i32), c: &Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(deg) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (deg, c) in &other.terms {
            out.add_term(*deg, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        ParamPolynomial {
            terms: self.terms.iter().map(|(d, c)| (*d, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = ParamPolynomial::zero();
        for ((ia, ib), c) in &self.terms {
            for ((ja, jb), d) in &other.terms {
                out.add_term((ia + ja, ib + jb), &(c * d));
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return ParamPolynomial::zero();
        }
        ParamPolynomial {
            terms: self.terms.iter().map(|(d, x)| (*d, x * c)).collect(),
        }
    }

    /// Minimum weighted degree over stored terms, or `None` for zero.
    pub fn min_weight(&self, w: &Weights) -> Option<i64> {
        self.terms.keys().map(|&(i, j)| w.param_weight(i, j)).min()
    }

    /// Drops terms whose parameter weight is `>= bound`.
    pub fn truncated(&self, bound: i64, w: &Weights) -> Self {
        ParamPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| w.param_weight(i, j) < bound)
                .map(|(d, c)| (*d, c.clone()))
                .collect(),
        }
    }

    /// Inverse of a unit. In a Laurent polynomial ring units are exactly the
    /// single-term elements with nonzero coefficient.
    pub fn inv_unit(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(Error::NotAUnit(self.to_string()));
        }
        let ((i, j), c) = self.terms.iter().next().unwrap();
        Ok(ParamPolynomial::monomial(c.recip(), -i, -j))
    }

    /// Substitutes monomial values (in `q`) for `a` and `b`.
    ///
    /// Each value is `(coeff, e_q)`; a zero coefficient denotes the zero
    /// substitution, which is only legal when no negative power of that
    /// parameter appears. Returns the resulting `q`-monomial contributions as
    /// `(q_exponent, coefficient)` pairs (not yet combined).
    pub fn substitute(&self, sub_a: &(Rat, i64), sub_b: &(Rat, i64)) -> Result<Vec<(i64, Rat)>> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (&(i, j), c) in &self.terms {
            let mut coeff = c.clone();
            let mut e_q = 0i64;
            for (deg, (sc, se)) in [(i, sub_a), (j, sub_b)] {
                if deg == 0 {
                    continue;
                }
                if sc.is_zero() {
                    if deg < 0 {
                        return Err(Error::ZeroToNegativePower(deg));
                    }
                    coeff = Rat::zero();
                    continue;
                }
                let p = if deg > 0 { sc.clone() } else { sc.recip() };
                let mut acc = Rat::one();
                for _ in 0..deg.unsigned_abs() {
                    acc *= &p;
                }
                coeff *= acc;
                e_q += se * deg as i64;
            }
            if !coeff.is_zero() {
                out.push((e_q, coeff));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ParamPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", format_rat(c))?;
            if i != 0 {
                write!(f, "*a^{i}")?;
            }
            if j != 0 {
                write!(f, "*b^{j}")?;
            }
        }
        Ok(())
    }
}

impl std::ops::Add for ParamPolynomial {
    type Output = ParamPolynomial;
    fn add(self, rhs: ParamPolynomial) -> ParamPolynomial {
        ParamPolynomial::add(&self, &rhs)
    }
}

impl std::ops::Mul for ParamPolynomial {
    type Output = ParamPolynomial;
    fn mul(self, rhs: ParamPolynomial) -> ParamPolynomial {
        ParamPolynomial::mul(&self, &rhs)
    }
}

impl std::ops::Neg for ParamPolynomial {
    type Output = ParamPolynomial;
    fn neg(self) -> ParamPolynomial {
        ParamPolynomial::neg(&self)
    }
}

impl Zero for ParamPolynomial {
    fn zero() -> Self {
        ParamPolynomial::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for ParamPolynomial {
    fn one() -> Self {
        ParamPolynomial::one()
    }
}

/// Coefficient ring abstraction for the series layer.
///
/// `Rat` instantiates the univariate engine, `ParamPolynomial` the
/// two-parameter engine. Zero, one, and negation come from the numeric
/// supertraits; the `_ref` methods are by-reference arithmetic for the hot
/// paths. Weight-related methods let the series layer grade and truncate
/// uniformly; rationals always have parameter weight zero.
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + std::ops::Neg<Output = Self>
{
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale(&self, c: &Rat) -> Self;
    fn from_rat(c: Rat) -> Self;

    /// Embeds `c * a^{e_a} * b^{e_b}`; `None` when the ring cannot represent
    /// the parameter part.
    fn embed(c: Rat, e_a: i32, e_b: i32) -> Option<Self>;

    /// Minimum parameter weight of the element, `None` for zero.
    fn min_weight(&self, w: &Weights) -> Option<i64>;

    /// Keeps only the part with parameter weight `< bound`.
    fn truncate(&self, bound: i64, w: &Weights) -> Self;

    /// Multiplicative inverse of a unit.
    fn inv_unit(&self) -> Result<Self>;

    /// Exact display for verification reports (`num/den` for rationals).
    fn fmt_exact(&self) -> String;
}

impl Coefficient for Rat {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self.clone()
    }
    fn scale(&self, c: &Rat) -> Self {
        self * c
    }
    fn from_rat(c: Rat) -> Self {
        c
    }
    fn embed(c: Rat, e_a: i32, e_b: i32) -> Option<Self> {
        if e_a == 0 && e_b == 0 {
            Some(c)
        } else {
            None
        }
    }
    fn min_weight(&self, _w: &Weights) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(0)
        }
    }
    fn truncate(&self, bound: i64, _w: &Weights) -> Self {
        if bound > 0 {
            self.clone()
        } else {
            Zero::zero()
        }
    }
    fn inv_unit(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::NotAUnit("0".into()))
        } else {
            Ok(self.recip())
        }
    }
    fn fmt_exact(&self) -> String {
        format_rat(self)
    }
}

impl Coefficient for ParamPolynomial {
    fn add_ref(&self, other: &Self) -> Self {
        ParamPolynomial::add(self, other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        ParamPolynomial::mul(self, other)
    }
    fn neg_ref(&self) -> Self {
        ParamPolynomial::neg(self)
    }
    fn scale(&self, c: &Rat) -> Self {
        ParamPolynomial::scale(self, c)
    }
    fn from_rat(c: Rat) -> Self {
        ParamPolynomial::constant(c)
    }
    fn embed(c: Rat, e_a: i32, e_b: i32) -> Option<Self> {
        Some(ParamPolynomial::monomial(c, e_a, e_b))
    }
    fn min_weight(&self, w: &Weights) -> Option<i64> {
        ParamPolynomial::min_weight(self, w)
    }
    fn truncate(&self, bound: i64, w: &Weights) -> Self {
        ParamPolynomial::truncated(self, bound, w)
    }
    fn inv_unit(&self) -> Result<Self> {
        ParamPolynomial::inv_unit(self)
    }
    fn fmt_exact(&self) -> String {
        self.to_string()
    }
}

/// Dynamically typed ring element: a rational or a parameter polynomial.
///
/// The typed `Coefficient` machinery does the real work; this wrapper exists
/// so heterogeneous call sites (the CLI, report formatting) can hold either
/// ring without generics, with explicit mismatch errors instead of implicit
/// coercions.
#[derive(Debug, Clone, PartialEq)]
pub enum RingElement {
    Rational(Rat),
    Poly(ParamPolynomial),
}

impl RingElement {
    pub fn is_zero(&self) -> bool {
        match self {
            RingElement::Rational(r) => Zero::is_zero(r),
            RingElement::Poly(p) => p.is_zero(),
        }
    }

    pub fn fmt_exact(&self) -> String {
        match self {
            RingElement::Rational(r) => format_rat(r),
            RingElement::Poly(p) => p.to_string(),
        }
    }
}

/// Adds two ring elements of the same kind.
pub fn ring_add(x: &RingElement, y: &RingElement) -> Result<RingElement> {
    match (x, y) {
        (RingElement::Rational(a), RingElement::Rational(b)) => {
            Ok(RingElement::Rational(a + b))
        }
        (RingElement::Poly(a), RingElement::Poly(b)) => Ok(RingElement::Poly(a.add(b))),
        _ => Err(Error::RingMismatch("cannot add a rational to a parameter polynomial")),
    }
}

/// Multiplies two ring elements of the same kind.
pub fn ring_mul(x: &RingElement, y: &RingElement) -> Result<RingElement> {
    match (x, y) {
        (RingElement::Rational(a), RingElement::Rational(b)) => {
            Ok(RingElement::Rational(a * b))
        }
        (RingElement::Poly(a), RingElement::Poly(b)) => Ok(RingElement::Poly(a.mul(b))),
        _ => Err(Error::RingMismatch("cannot multiply a rational by a parameter polynomial")),
    }
}

/// Inverts a unit ring element.
pub fn ring_inv_unit(x: &RingElement) -> Result<RingElement> {
    match x {
        RingElement::Rational(a) => Coefficient::inv_unit(a).map(RingElement::Rational),
        RingElement::Poly(p) => p.inv_unit().map(RingElement::Poly),
    }
}

/// Asserts the canonical-form invariants of a rational: reduced fraction and
/// positive denominator. Used by tests; the representation guarantees both.
pub fn rational_is_canonical(r: &Rat) -> bool {
    use num::Integer;
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> ParamPolynomial {
        ParamPolynomial::monomial(Rat::one(), 1, 0)
    }

    fn b() -> ParamPolynomial {
        ParamPolynomial::monomial(Rat::one(), 0, 1)
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        assert_eq!(ratio(1, 2) + ratio(1, 2), rat(1));
        assert_eq!(ratio(2, 3) + ratio(1, 6), ratio(5, 6));
        assert_eq!(ratio(2, 3) * ratio(3, 4), ratio(1, 2));
        assert_eq!(rat(2).recip(), ratio(1, 2));
        assert!(rational_is_canonical(&(ratio(4, 6) - ratio(1, 3))));
        assert_eq!(format_rat(&ratio(-3, 6)), "-1/2");
        assert_eq!(format_rat(&rat(7)), "7/1");
    }

    #[test]
    fn polynomial_cancellation_is_canonical() {
        let sum = a().add(&a().neg());
        assert!(sum.is_zero());
        assert_eq!(sum.num_terms(), 0);
    }

    #[test]
    fn polynomial_product_expands() {
        // (a - 1)(a + 1) = a^2 - 1
        let am1 = a().sub(&ParamPolynomial::one());
        let ap1 = a().add(&ParamPolynomial::one());
        let mut expect = ParamPolynomial::monomial(Rat::one(), 2, 0);
        expect.add_term((0, 0), &rat(-1));
        assert_eq!(am1.mul(&ap1), expect);

        let ab = a().mul(&b());
        assert_eq!(ab, ParamPolynomial::monomial(Rat::one(), 1, 1));
    }

    #[test]
    fn laurent_units_invert() {
        let m = ParamPolynomial::monomial(rat(-2), 1, 1);
        let inv = m.inv_unit().unwrap();
        assert_eq!(inv, ParamPolynomial::monomial(ratio(-1, 2), -1, -1));
        assert!(m.mul(&inv).is_one());

        let not_unit = a().add(&ParamPolynomial::one());
        assert!(matches!(not_unit.inv_unit(), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn weighted_truncation_drops_heavy_terms() {
        let w = Weights::default();
        // a^2 (weight 6) + b (weight 3) + 1 (weight 0), bound 6 keeps b + 1.
        let mut p = ParamPolynomial::monomial(rat(1), 2, 0);
        p.add_term((0, 1), &rat(1));
        p.add_term((0, 0), &rat(1));
        let t = p.truncated(6, &w);
        assert_eq!(t.num_terms(), 2);
        assert_eq!(p.min_weight(&w), Some(0));
        assert_eq!(a().mul(&a()).min_weight(&w), Some(6));
    }

    #[test]
    fn substitution_evaluates_monomials() {
        // p = 2 a^2 b - 1/2 at a = -q^3, b = q  gives  2 q^7 - 1/2.
        let mut p = ParamPolynomial::monomial(rat(2), 2, 1);
        p.add_term((0, 0), &ratio(-1, 2));
        let vals = p.substitute(&(rat(-1), 3), &(rat(1), 1)).unwrap();
        assert_eq!(vals, vec![(0, ratio(-1, 2)), (7, rat(2))]);

        // Zero substitution kills positive powers and rejects negative ones.
        let vals = p.substitute(&(rat(0), 0), &(rat(1), 1)).unwrap();
        assert_eq!(vals, vec![(0, ratio(-1, 2))]);
        let neg = ParamPolynomial::monomial(rat(1), -1, 0);
        assert!(matches!(
            neg.substitute(&(rat(0), 0), &(rat(1), 0)),
            Err(Error::ZeroToNegativePower(-1))
        ));
    }

    #[test]
    fn dynamic_ring_rejects_mixed_operands() {
        let x = RingElement::Rational(rat(1));
        let y = RingElement::Poly(a());
        assert!(matches!(ring_add(&x, &y), Err(Error::RingMismatch(_))));
        assert!(matches!(ring_mul(&x, &y), Err(Error::RingMismatch(_))));
        let two = RingElement::Rational(rat(2));
        assert_eq!(ring_inv_unit(&two).unwrap(), RingElement::Rational(ratio(1, 2)));
    }
}

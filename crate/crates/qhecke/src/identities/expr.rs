//! Expression trees for identity sides.
//!
//! Each side of a registered identity is a small AST combining the
//! declarative builders from [`crate::hypergeom`] and [`crate::hecke`]:
//! Pochhammer quotients, single-index term sums, Hecke-type double sums,
//! theta sums, and ring operations gluing them together.  One tree is
//! expanded by three different drivers sharing the same code path:
//!
//! * `build_q` — purely univariate expansion over `Q`,
//! * `build_param` — expansion over the Laurent polynomial ring in the
//!   formal parameters `a`, `b`,
//! * `build_at` — univariate expansion with the parameters substituted by
//!   explicit q-monomials *before* truncation, so precision is not lost to
//!   low-degree substitution values.
//!
//! Lattice sums and theta sums never reference the parameters, so they are
//! expanded over `Q` and lifted into the ambient coefficient ring.

use crate::error::Result;
use crate::hecke::{build_hecke, theta_square, theta_triangular, HeckeSpec};
use crate::hypergeom::{
    build_term_sum_env, generic_env, valuation_env, ParamEnv, PochQuotient, TermSumSpec,
};
use crate::ring::{Coefficient, Monomial, ParamPolynomial, Rat, Weights};
use crate::series::{ParamSeries, QSeries, TruncatedSeries, EXACT_ORDER};

/// One side of an identity.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// An exact rational constant.
    Const(Rat),
    /// An exact monomial `c * q^e * a^i * b^j`.
    Mono(Monomial),
    /// A quotient of infinite q-Pochhammer products.
    Poch(PochQuotient),
    /// A single-index sum (`_r phi_s` series, Lambert-type sums, ...).
    TermSum(TermSumSpec),
    /// A double lattice sum over a Hecke-type region (univariate only).
    Hecke(HeckeSpec),
    /// `sum_{n in Z} q^{c n^2}`.
    ThetaSquare(i64),
    /// `sum_{n >= 0} q^{c n (n+1)}`.
    ThetaTriangular(i64),
    /// Sum of the children.
    Add(Vec<Expr>),
    /// Product of the children.
    Mul(Vec<Expr>),
    /// A rational multiple of the child.
    Scale(Rat, Box<Expr>),
    /// The child raised to a fixed nonnegative power.
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// `1 - q^e` as an expression factor.
    pub fn one_minus_q(e: i64) -> Expr {
        Expr::Add(vec![Expr::Const(Rat::from_integer(1.into())), Expr::Mono(Monomial::q_pow(-1, e))])
    }
}

/// Lifts a univariate series into the ambient coefficient ring.
fn lift_q_series<C: Coefficient>(s: &QSeries) -> TruncatedSeries<C> {
    let mut out = TruncatedSeries::<C>::zero(s.order(), s.weights());
    for (&e, c) in s.iter() {
        out.add_term(e, C::embed(c.clone(), 0, 0).expect("constants embed in every ring"));
    }
    out
}

/// Expands `expr` below `order` over the environment's coefficient ring.
pub fn build_expr<C: Coefficient>(
    expr: &Expr,
    env: &ParamEnv<C>,
    order: i64,
    weights: Weights,
) -> Result<TruncatedSeries<C>> {
    match expr {
        Expr::Const(c) => {
            Ok(TruncatedSeries::exact_monomial(C::from_rat(c.clone()), 0, weights))
        }
        Expr::Mono(m) => {
            // Zero is the exact empty series; anything else is one exact term.
            if m.is_zero() {
                Ok(TruncatedSeries::zero(EXACT_ORDER, weights))
            } else {
                let c = C::embed(m.coeff.clone(), m.e_a, m.e_b).ok_or(
                    crate::error::Error::InvalidSpec(
                        "parameter monomial in a univariate build".into(),
                    ),
                )?;
                Ok(TruncatedSeries::exact_monomial(c, m.e_q, weights))
            }
        }
        Expr::Poch(pq) => pq.build_env(env, order, weights),
        Expr::TermSum(spec) => build_term_sum_env(spec, env, order, weights),
        Expr::Hecke(spec) => Ok(lift_q_series(&build_hecke(spec, order)?)),
        Expr::ThetaSquare(c) => Ok(lift_q_series(&theta_square(*c, order)?)),
        Expr::ThetaTriangular(c) => Ok(lift_q_series(&theta_triangular(*c, order)?)),
        Expr::Add(children) => {
            let mut acc = TruncatedSeries::<C>::zero(EXACT_ORDER, weights);
            for child in children {
                acc = acc.add(&build_expr(child, env, order, weights)?)?;
            }
            Ok(acc)
        }
        Expr::Mul(children) => {
            let mut acc = TruncatedSeries::<C>::one(EXACT_ORDER, weights);
            for child in children {
                acc = acc.mul(&build_expr(child, env, order, weights)?)?;
            }
            Ok(acc)
        }
        Expr::Scale(c, child) => Ok(build_expr(child, env, order, weights)?.scale(c)),
        Expr::Pow(child, n) => build_expr(child, env, order, weights)?.pow(*n),
    }
}

/// Univariate expansion; any parameter reference is an error.
pub fn build_q(expr: &Expr, order: i64) -> Result<QSeries> {
    build_expr(expr, &ParamEnv::forbidden(), order, Weights::default())
}

/// Expansion over the two-parameter Laurent polynomial ring with the
/// default weighted grading.
pub fn build_param(expr: &Expr, order: i64) -> Result<ParamSeries> {
    let weights = Weights::default();
    build_expr(expr, &generic_env(weights), order, weights)
}

/// Univariate expansion with `a -> sub_a`, `b -> sub_b` substituted before
/// truncation (each value a monomial in `q`, possibly zero).
pub fn build_at(expr: &Expr, sub_a: &Monomial, sub_b: &Monomial, order: i64) -> Result<QSeries> {
    let weights = Weights::default();
    build_expr(expr, &valuation_env(sub_a, sub_b, weights)?, order, weights)
}

/// The first coefficient below `bound` on which the two univariate series
/// disagree, ordered by exponent; `None` when they agree.
pub fn first_divergence_q(lhs: &QSeries, rhs: &QSeries, bound: i64) -> Option<(i64, Rat, Rat)> {
    use std::collections::BTreeMap;
    let lmap: BTreeMap<i64, &Rat> = lhs.iter().map(|(e, c)| (*e, c)).collect();
    let rmap: BTreeMap<i64, &Rat> = rhs.iter().map(|(e, c)| (*e, c)).collect();
    let keys: std::collections::BTreeSet<i64> =
        lmap.keys().chain(rmap.keys()).copied().collect();
    let w_q = lhs.weights().w_q as i64;
    let zero: Rat = num::Zero::zero();
    for e in keys {
        if w_q * e >= bound {
            continue;
        }
        let l = lmap.get(&e).copied().unwrap_or(&zero);
        let r = rmap.get(&e).copied().unwrap_or(&zero);
        if l != r {
            return Some((e, l.clone(), r.clone()));
        }
    }
    None
}

/// The first parameter-monomial coefficient below the weighted `bound` on
/// which two parameterized series disagree, ordered lexicographically by
/// (weight, q-exponent, a-degree, b-degree).
pub fn first_divergence_param(
    lhs: &ParamSeries,
    rhs: &ParamSeries,
    bound: i64,
) -> Option<(i64, i32, i32, Rat, Rat)> {
    use std::collections::BTreeMap;
    let weights = lhs.weights();
    let zero_poly = ParamPolynomial::zero();
    let zero: Rat = num::Zero::zero();
    let lmap: BTreeMap<i64, &ParamPolynomial> = lhs.iter().map(|(e, c)| (*e, c)).collect();
    let rmap: BTreeMap<i64, &ParamPolynomial> = rhs.iter().map(|(e, c)| (*e, c)).collect();
    let keys: std::collections::BTreeSet<i64> =
        lmap.keys().chain(rmap.keys()).copied().collect();
    let mut best: Option<(i64, i64, i32, i32, Rat, Rat)> = None;
    for e in keys {
        let w_e = weights.q_weight(e);
        if w_e >= bound {
            continue;
        }
        let l = lmap.get(&e).copied().unwrap_or(&zero_poly);
        let r = rmap.get(&e).copied().unwrap_or(&zero_poly);
        let ldeg: BTreeMap<(i32, i32), &Rat> = l.terms().map(|(d, c)| (*d, c)).collect();
        let rdeg: BTreeMap<(i32, i32), &Rat> = r.terms().map(|(d, c)| (*d, c)).collect();
        let degs: std::collections::BTreeSet<(i32, i32)> =
            ldeg.keys().chain(rdeg.keys()).copied().collect();
        for (da, db) in degs {
            let w = w_e + weights.param_weight(da, db);
            if w >= bound {
                continue;
            }
            let lc = ldeg.get(&(da, db)).copied().unwrap_or(&zero);
            let rc = rdeg.get(&(da, db)).copied().unwrap_or(&zero);
            if lc != rc {
                let cand = (w, e, da, db, lc.clone(), rc.clone());
                match &best {
                    Some((bw, be, bda, bdb, _, _))
                        if (*bw, *be, *bda, *bdb) <= (cand.0, cand.1, cand.2, cand.3) => {}
                    _ => best = Some(cand),
                }
            }
        }
    }
    best.map(|(_, e, da, db, l, r)| (e, da, db, l, r))
}

//! Transformation formulas verified at sampled parameter points.
//!
//! Each entry equates an infinite basic hypergeometric series carrying an
//! infinite-product prefactor to a row-indexed double sum whose rows carry
//! terminating phi sums.  The verifier substitutes concrete q-monomials for
//! every free parameter, so each sampled point becomes an ordinary
//! univariate series identity checked coefficientwise below the truncation
//! order.  With `pre = alpha a b / q^s` the common shape (base `q^s`) is
//!
//! ```text
//! (alpha q^s, pre; q^s)_inf / (alpha a, alpha b; q^s)_inf
//!     * phi(q^s/a, q^s/b, N..; D..; q^s, pre z)
//!   = sum_{n>=0} C_n * phi(q^{-ns}, alpha q^{ns}, N..; D..; q^s, q^s z)
//! ```
//!
//! with row coefficient
//!
//! ```text
//! C_n = (1 - alpha q^{2ns}) (alpha q^s; q^s)_{n-1} (q^s/a, q^s/b; q^s)_n
//!       * (-pre)^n q^{s n(n-1)/2} / (q^s, alpha a, alpha b; q^s)_n
//! ```
//!
//! (row 0 is 1).  Writing `Z = ord_q(z)`, `G = ord_q(pre z)` and
//! `t = n - k`, the q-adic valuation of the `k`-th summand of row `n` is at
//! least `n G + s t(t-1)/2 - t Z`, so every row floor is at least
//! `n G - margin` for a small constant margin (zero when `Z <= 0`).  The
//! sweep therefore runs exactly while `n G <= order + margin` and skips any
//! row whose floor bound already clears the window — no convergence
//! heuristics are involved.
//!
//! Row assembly keeps every intermediate series clamped to the smallest
//! sound window: the polynomial part of `C_n` is maintained incrementally
//! across rows at a window that shrinks by `G` per row, each terminating
//! inner sum is built term by term against the window left over above
//! `C_n`'s floor, and denominators are inverted only to the width the row
//! product actually needs.  That keeps the work per row proportional to the
//! shrinking window instead of the (quadratically growing) exact size of the
//! row polynomials.

use num::One;

use crate::error::{Error, Result};
use crate::hypergeom::{build_term_sum, PochQuotient, TermSumSpec};
use crate::ring::{Monomial, Weights};
use crate::series::{PochhammerArg, QSeries, TruncatedSeries};

use super::finite::{linear_factor, mono_div, qm};

/// One fully substituted instance of a transformation formula.
#[derive(Debug, Clone)]
pub struct TransformCase {
    /// Base exponent: every Pochhammer runs in powers of `q^step`.
    pub step: u32,
    pub alpha: Monomial,
    pub a: Monomial,
    pub b: Monomial,
    /// Free argument factor; the outer argument is `alpha a b z / q^step`.
    pub z: Monomial,
    /// Additional upper parameters shared verbatim by both sides.
    pub extra_num: Vec<Monomial>,
    /// Lower parameters (the implicit base Pochhammer is not listed).
    pub extra_den: Vec<Monomial>,
}

fn sign_unit(m: &Monomial) -> bool {
    m.coeff.is_one() || (-m.coeff.clone()).is_one()
}

/// Checks the substitution and returns `pre = alpha a b / q^s`.
fn validate(case: &TransformCase) -> Result<Monomial> {
    if case.step == 0 {
        return Err(Error::InvalidSpec("transform step must be positive".into()));
    }
    let s = case.step as i64;
    for (name, m) in
        [("alpha", &case.alpha), ("a", &case.a), ("b", &case.b), ("z", &case.z)]
    {
        if m.is_zero() || !m.is_univariate() || !sign_unit(m) {
            return Err(Error::InvalidSpec(format!(
                "transform parameter {name} must be a nonzero q-monomial with coefficient +-1"
            )));
        }
    }
    if case.alpha.e_q < 0 {
        return Err(Error::InvalidSpec(
            "transform parameter alpha must not carry a negative q-power".into(),
        ));
    }
    if case.a.e_q > s || case.b.e_q > s {
        return Err(Error::InvalidSpec(
            "upper parameters q^s/a and q^s/b must not carry negative q-powers".into(),
        ));
    }
    let aa = case.alpha.mul(&case.a);
    let ab = case.alpha.mul(&case.b);
    if aa.e_q < 1 || ab.e_q < 1 {
        return Err(Error::InvalidSpec(
            "alpha*a and alpha*b must vanish at q = 0".into(),
        ));
    }
    let pre = mono_div(&aa.mul(&case.b), &qm(1, s));
    if pre.e_q < 1 {
        return Err(Error::InvalidSpec("alpha*a*b/q^s must vanish at q = 0".into()));
    }
    if pre.e_q + case.z.e_q < 1 {
        return Err(Error::InvalidSpec(
            "outer argument alpha*a*b*z/q^s must vanish at q = 0".into(),
        ));
    }
    for m in &case.extra_num {
        if m.is_zero() || !m.is_univariate() || m.e_q < 0 {
            return Err(Error::InvalidSpec(
                "extra upper parameters must be nonzero q-monomials with nonnegative exponent"
                    .into(),
            ));
        }
    }
    if case.extra_den.len() != case.extra_num.len() + 1 {
        return Err(Error::InvalidSpec(
            "transform phi needs exactly one more lower parameter than extra uppers".into(),
        ));
    }
    for m in &case.extra_den {
        if m.is_zero() || !m.is_univariate() || m.e_q < 0 || m.is_one() {
            return Err(Error::InvalidSpec(
                "lower parameters must be nonzero q-monomials, not 1, with nonnegative exponent"
                    .into(),
            ));
        }
    }
    Ok(pre)
}

/// Infinite-series side: prefactor times the outer phi.
fn lhs_series(case: &TransformCase, pre: &Monomial, order: i64) -> Result<QSeries> {
    let weights = Weights::default();
    let s = case.step as i64;
    let mut nums = vec![mono_div(&qm(1, s), &case.a), mono_div(&qm(1, s), &case.b)];
    nums.extend(case.extra_num.iter().cloned());
    let arg = pre.mul(&case.z);
    let phi = build_term_sum(&TermSumSpec::rphis(case.step, &nums, &case.extra_den, &arg)?, order)?;
    let prefactor: QSeries = PochQuotient::new(vec![
        (PochhammerArg::infinite(case.alpha.clone(), s, case.step), 1),
        (PochhammerArg::infinite(pre.clone(), 0, case.step), 1),
        (PochhammerArg::infinite(case.alpha.mul(&case.a), 0, case.step), -1),
        (PochhammerArg::infinite(case.alpha.mul(&case.b), 0, case.step), -1),
    ])
    .build(order, weights)?;
    prefactor.mul(&phi)
}

/// Terminating phi over base `q^s`, with every term built against the
/// window below `target`.  `nums` includes the terminating `q^{-ns}`
/// parameter; `dens` excludes the implicit base Pochhammer.
fn clamped_inner(
    n: u64,
    step: u32,
    nums: &[Monomial],
    dens: &[Monomial],
    arg: &Monomial,
    target: i64,
) -> Result<QSeries> {
    let weights = Weights::default();
    let s = step as i64;
    let base = qm(1, s);
    let mut acc = TruncatedSeries::zero(target, weights);
    for k in 0..=n {
        let kk = k as i64;
        let zp = arg.pow(k as u32);
        let t_k = target - zp.e_q;
        // Lower bound of the numerator product: only negative-exponent
        // factors (from the terminating parameter) pull the floor down.
        let mut neg = 0i64;
        for u in nums {
            for i in 0..kk {
                let v = u.e_q + s * i;
                if v < 0 {
                    neg += v;
                }
            }
        }
        if neg >= t_k {
            continue; // the whole term sits at or above the window
        }
        // Numerator product, started wide enough that the negative-floor
        // factors land it exactly on the window `t_k`.
        let mut num = TruncatedSeries::one(t_k - neg, weights);
        'factors: for u in nums {
            for i in 0..kk {
                num = num.mul(&linear_factor(u, s * i, weights))?;
                if num.is_zero() {
                    break 'factors;
                }
            }
        }
        let num_floor = match num.q_floor() {
            Some(f) => f,
            None => continue,
        };
        let w_den = t_k - num_floor;
        if w_den <= 0 {
            continue;
        }
        let mut den = TruncatedSeries::one(w_den, weights);
        for i in 0..kk {
            den = den.mul(&linear_factor(&base, s * i, weights))?;
        }
        for d in dens {
            for i in 0..kk {
                den = den.mul(&linear_factor(d, s * i, weights))?;
            }
        }
        let term = num.mul(&den.invert(w_den)?)?.mul_monomial(&zp)?;
        acc = acc.add(&term.truncate_to(target))?;
    }
    Ok(acc)
}

/// Double-sum side, assembled row by row.
fn rhs_series(case: &TransformCase, pre: &Monomial, order: i64) -> Result<QSeries> {
    let weights = Weights::default();
    let s = case.step as i64;
    let zq = case.z.e_q;
    let g = pre.e_q + zq;
    let margin = if zq > 0 { (zq + s) * (zq + s) } else { 0 } + 2;
    let inner_arg = case.z.mul(&qm(1, s));
    let neg_pre = Monomial::new(-pre.coeff.clone(), pre.e_q, 0, 0);
    let ua = mono_div(&qm(1, s), &case.a);
    let ub = mono_div(&qm(1, s), &case.b);
    let aa = case.alpha.mul(&case.a);
    let ab = case.alpha.mul(&case.b);
    let base = qm(1, s);

    let mut acc = TruncatedSeries::zero(order, weights);
    // Polynomial part (alpha q^s; q^s)_{n-1} (q^s/a; q^s)_n (q^s/b; q^s)_n
    // of C_n, maintained at a window that shrinks by G per row.
    let mut c_base = TruncatedSeries::one(order + margin, weights);
    let mut n: u64 = 0;
    while (n as i64) * g <= order + margin {
        let nn = n as i64;
        if n >= 1 {
            c_base = c_base.truncate_to(order + margin - nn * g);
            if n >= 2 {
                c_base = c_base.mul(&linear_factor(&case.alpha, s * (nn - 1), weights))?;
            }
            c_base = c_base
                .mul(&linear_factor(&ua, s * (nn - 1), weights))?
                .mul(&linear_factor(&ub, s * (nn - 1), weights))?;
        }
        let c_num = if n == 0 {
            TruncatedSeries::one(order + margin, weights)
        } else {
            let shift = neg_pre.pow(n as u32).mul(&qm(1, s * nn * (nn - 1) / 2));
            c_base
                .mul(&linear_factor(&case.alpha, 2 * s * nn, weights))?
                .mul_monomial(&shift)?
        };
        let c_floor = match c_num.q_floor() {
            Some(f) => f,
            None => {
                n += 1;
                continue;
            }
        };
        // Valuation bound of the inner phi: minimum over k of the floor of
        // (q^{-ns}; q^s)_k times the argument power (q^s z)^k.
        let f_min = (0..=nn)
            .map(|k| s * k * (k - 1) / 2 - s * nn * k + k * (s + zq))
            .min()
            .unwrap_or(0);
        if c_floor + f_min >= order {
            n += 1;
            continue;
        }
        let target = order - c_floor;
        let mut inner_nums = vec![qm(1, -s * nn), case.alpha.mul(&qm(1, s * nn))];
        inner_nums.extend(case.extra_num.iter().cloned());
        let inner = clamped_inner(n, case.step, &inner_nums, &case.extra_den, &inner_arg, target)?;
        let f_inner = match inner.q_floor() {
            Some(f) => f,
            None => {
                n += 1;
                continue;
            }
        };
        // Row denominator (q^s, alpha a, alpha b; q^s)_n, inverted at the
        // window the row product actually needs.
        let w_den = target - f_inner;
        let mut c_den = TruncatedSeries::one(w_den, weights);
        for i in 0..nn {
            c_den = c_den
                .mul(&linear_factor(&base, s * i, weights))?
                .mul(&linear_factor(&aa, s * i, weights))?
                .mul(&linear_factor(&ab, s * i, weights))?;
        }
        let row = inner.mul(&c_den.invert(w_den)?)?.mul(&c_num)?;
        acc = acc.add(&row.truncate_to(order))?;
        n += 1;
    }
    Ok(acc)
}

/// Builds both sides of a substituted transformation formula at `order`.
pub fn transform_pair(case: &TransformCase, order: i64) -> Result<(QSeries, QSeries)> {
    let pre = validate(case)?;
    Ok((lhs_series(case, &pre, order)?, rhs_series(case, &pre, order)?))
}

fn case_error(id: &str, case: usize, count: usize) -> Error {
    Error::InvalidSpec(format!("{id} has {count} sampled cases; case {case} requested"))
}

// ---------------------------------------------------------------------------
// sampled substitution tables
// ---------------------------------------------------------------------------

pub const T_EQ_1_3_CASES: usize = 6;

/// `3phi2` transform with argument factor `z = 1`: six samples over three
/// `(step, alpha, beta, c, d)` routes, two `(a, b)` points each.
pub fn t_eq_1_3(case: usize, order: i64) -> Result<(QSeries, QSeries)> {
    // (step, alpha, beta, c, d, a, b)
    let (step, alpha, beta, c, d, a, b) = match case {
        0 => (2, qm(1, 2), qm(-1, 0), qm(1, 1), qm(-1, 2), qm(-1, 1), qm(-1, 1)),
        1 => (2, qm(1, 2), qm(-1, 0), qm(1, 1), qm(-1, 2), qm(1, 0), qm(1, 1)),
        2 => (2, qm(1, 2), qm(1, 1), qm(-1, 2), qm(1, 3), qm(-1, 1), qm(1, 1)),
        3 => (2, qm(1, 2), qm(1, 1), qm(-1, 2), qm(1, 3), qm(1, 1), qm(-1, 2)),
        4 => (2, qm(1, 4), qm(1, 1), qm(-1, 2), qm(1, 3), qm(1, 0), qm(1, 0)),
        5 => (2, qm(1, 4), qm(1, 1), qm(-1, 2), qm(1, 3), qm(1, 1), qm(-1, 1)),
        _ => return Err(case_error("eq-1-3", case, T_EQ_1_3_CASES)),
    };
    let tc = TransformCase {
        step,
        alpha,
        a,
        b,
        z: Monomial::one(),
        extra_num: vec![beta],
        extra_den: vec![c, d],
    };
    transform_pair(&tc, order)
}

pub const T_EQ_T2_4_CASES: usize = 6;

/// `3phi2` transform with a free argument factor `z`: six samples over
/// three `(step, alpha, beta, c, d, z)` routes.
pub fn t_eq_t2_4(case: usize, order: i64) -> Result<(QSeries, QSeries)> {
    // (step, alpha, beta, c, d, z, a, b)
    let (step, alpha, beta, c, d, z, a, b) = match case {
        0 => (2, qm(1, 2), qm(-1, 1), qm(1, 1), qm(-1, 2), qm(1, -2), qm(-1, 2), qm(-1, 2)),
        1 => (2, qm(1, 2), qm(-1, 1), qm(1, 1), qm(-1, 2), qm(1, -2), qm(-1, 2), qm(-1, 1)),
        2 => (2, qm(1, 2), qm(1, 2), qm(-1, 2), qm(-1, 3), qm(1, -1), qm(-1, 2), qm(1, 1)),
        3 => (2, qm(1, 2), qm(1, 2), qm(-1, 2), qm(-1, 3), qm(1, -1), qm(-1, 1), qm(-1, 2)),
        4 => (2, qm(1, 4), qm(-1, 1), qm(-1, 2), qm(1, 3), qm(1, -2), qm(1, 1), qm(1, 1)),
        5 => (2, qm(1, 4), qm(-1, 1), qm(-1, 2), qm(1, 3), qm(1, -2), qm(-1, 1), qm(-1, 1)),
        _ => return Err(case_error("eq-t2-4", case, T_EQ_T2_4_CASES)),
    };
    let tc = TransformCase { step, alpha, a, b, z, extra_num: vec![beta], extra_den: vec![c, d] };
    transform_pair(&tc, order)
}

pub const T_EQ_T2_9_CASES: usize = 6;

/// `2phi1` transform with a free argument factor `z`: six samples over
/// four `(step, alpha, c, z)` routes.
pub fn t_eq_t2_9(case: usize, order: i64) -> Result<(QSeries, QSeries)> {
    // (step, alpha, c, z, a, b)
    let (step, alpha, c, z, a, b) = match case {
        0 => (1, qm(1, 2), qm(-1, 1), qm(1, -1), qm(-1, 1), qm(-1, 1)),
        1 => (1, qm(1, 2), qm(-1, 1), qm(1, -1), qm(1, 0), qm(-1, 1)),
        2 => (2, qm(1, 2), qm(1, 1), qm(1, -2), qm(-1, 2), qm(-1, 2)),
        3 => (2, qm(1, 2), qm(1, 1), qm(1, -2), qm(-1, 2), qm(-1, 1)),
        4 => (1, qm(1, 1), qm(-1, 2), qm(1, 0), qm(-1, 1), qm(-1, 1)),
        5 => (1, qm(1, 3), qm(-1, 1), qm(1, -1), qm(-1, 1), qm(1, 0)),
        _ => return Err(case_error("eq-t2-9", case, T_EQ_T2_9_CASES)),
    };
    let tc = TransformCase { step, alpha, a, b, z, extra_num: vec![], extra_den: vec![c] };
    transform_pair(&tc, order)
}

pub const T_EQ_2_1_CASES: usize = 6;

/// `4phi3` transform with a free argument factor `z`: six samples; case 0
/// collapses an upper against a lower (`gamma = h`), matching the
/// specialization that yields the `3phi2` variant.
pub fn t_eq_2_1(case: usize, order: i64) -> Result<(QSeries, QSeries)> {
    // (step, alpha, beta, gamma, c, d, h, a, b, z)
    let (step, alpha, beta, gamma, c, d, h, a, b, z) = match case {
        0 => (
            2,
            qm(1, 2),
            qm(-1, 0),
            qm(1, 3),
            qm(1, 1),
            qm(-1, 2),
            qm(1, 3),
            qm(-1, 1),
            qm(-1, 1),
            qm(1, 0),
        ),
        1 => (
            2,
            qm(1, 2),
            qm(-1, 0),
            qm(-1, 3),
            qm(1, 1),
            qm(-1, 2),
            qm(1, 3),
            qm(1, 0),
            qm(-1, 2),
            qm(1, 0),
        ),
        2 => (
            1,
            qm(1, 2),
            qm(1, 3),
            qm(1, 2),
            qm(-1, 1),
            qm(-1, 2),
            qm(-1, 3),
            qm(1, 0),
            qm(-1, 1),
            qm(1, 0),
        ),
        3 => (
            1,
            qm(1, 3),
            qm(1, 1),
            qm(-1, 2),
            qm(1, 2),
            qm(-1, 1),
            qm(1, 3),
            qm(-1, 1),
            qm(1, 0),
            qm(1, -1),
        ),
        4 => (
            2,
            qm(1, 4),
            qm(1, 2),
            qm(-1, 1),
            qm(-1, 2),
            qm(1, 3),
            qm(1, 1),
            qm(-1, 1),
            qm(-1, 1),
            qm(1, 0),
        ),
        5 => (
            2,
            qm(1, 2),
            qm(1, 1),
            qm(1, 3),
            qm(-1, 1),
            qm(-1, 3),
            qm(1, 4),
            qm(-1, 2),
            qm(1, 1),
            qm(1, -1),
        ),
        _ => return Err(case_error("eq-2-1", case, T_EQ_2_1_CASES)),
    };
    let tc = TransformCase {
        step,
        alpha,
        a,
        b,
        z,
        extra_num: vec![beta, gamma],
        extra_den: vec![c, d, h],
    };
    transform_pair(&tc, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_case(build: fn(usize, i64) -> Result<(QSeries, QSeries)>, case: usize, order: i64) {
        let (lhs, rhs) = build(case, order).expect("builder");
        assert!(
            lhs.eq_below(&rhs, order),
            "case {case} disagrees below order {order}:\nlhs {lhs:?}\nrhs {rhs:?}"
        );
    }

    #[test]
    fn all_sampled_cases_agree_at_low_order() {
        for c in 0..T_EQ_1_3_CASES {
            check_case(t_eq_1_3, c, 24);
        }
        for c in 0..T_EQ_T2_4_CASES {
            check_case(t_eq_t2_4, c, 24);
        }
        for c in 0..T_EQ_T2_9_CASES {
            check_case(t_eq_t2_9, c, 24);
        }
        for c in 0..T_EQ_2_1_CASES {
            check_case(t_eq_2_1, c, 24);
        }
    }

    #[test]
    fn different_samples_give_different_series() {
        // The harness must be able to tell distinct series apart: two
        // different substitution points of the same transform disagree.
        let (lhs0, _) = t_eq_t2_9(0, 20).unwrap();
        let (lhs1, _) = t_eq_t2_9(1, 20).unwrap();
        assert!(!lhs0.eq_below(&lhs1, 20));
    }

    #[test]
    fn truncation_is_consistent_across_orders() {
        let (lhs_hi, rhs_hi) = t_eq_t2_4(2, 40).unwrap();
        let (lhs_lo, rhs_lo) = t_eq_t2_4(2, 20).unwrap();
        assert!(lhs_hi.truncate_to(20).eq_below(&lhs_lo, 20));
        assert!(rhs_hi.truncate_to(20).eq_below(&rhs_lo, 20));
    }

    #[test]
    fn validation_rejects_bad_substitutions() {
        let good = TransformCase {
            step: 1,
            alpha: qm(1, 2),
            a: qm(-1, 1),
            b: qm(-1, 1),
            z: qm(1, -1),
            extra_num: vec![],
            extra_den: vec![qm(-1, 1)],
        };
        assert!(transform_pair(&good, 12).is_ok());

        let mut unbalanced = good.clone();
        unbalanced.extra_den.clear();
        assert!(matches!(transform_pair(&unbalanced, 12), Err(Error::InvalidSpec(_))));

        let mut pole = good.clone();
        pole.a = qm(1, 5);
        assert!(matches!(transform_pair(&pole, 12), Err(Error::InvalidSpec(_))));

        let mut divergent = good.clone();
        divergent.z = qm(1, -3);
        assert!(matches!(transform_pair(&divergent, 12), Err(Error::InvalidSpec(_))));

        let mut unit_lower = good.clone();
        unit_lower.extra_den = vec![Monomial::one()];
        assert!(matches!(transform_pair(&unit_lower, 12), Err(Error::InvalidSpec(_))));
    }
}

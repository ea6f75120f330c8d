//! The compiled-in identity table.
//!
//! Each record pairs a stable id with the machine-checkable content of one
//! identity: two expression trees for series identities, or a builder
//! function for finite and sampled-transform families. Shorthand
//! constructors keep the record bodies close to the displayed formulas:
//! `qp(c, e)` is the monomial `c q^e`, `pn(c, e, s)` the row factor
//! `(c q^e; q^s)_n`, `pc` the same with an affine count, `fm`/`fp` the row
//! factors `(1 -+ q^{cn+d})` and `rm`/`rp` their reciprocals.

use crate::hecke::{HeckeSpec, QuadForm, Region};
use crate::hypergeom::{
    CountExpr, PochQuotient, QuadPoly, RationalFactor, RowRange, TermPochhammer, TermSumSpec,
    ThetaRow,
};
use crate::ring::{rat, ratio, Monomial};
use crate::series::PochhammerArg;

use super::expr::Expr;
use super::{finite, transform, IdentityKind, IdentityRecord, SpecializationLink};

// ---------------------------------------------------------------------------
// shorthand constructors
// ---------------------------------------------------------------------------

/// `c q^e`.
fn qp(c: i64, e: i64) -> Monomial {
    Monomial::q_pow(c, e)
}

/// `c q^e a`.
fn ma(c: i64, e: i64) -> Monomial {
    Monomial::new(rat(c), e, 1, 0)
}

/// `c q^e b`.
fn mb(c: i64, e: i64) -> Monomial {
    Monomial::new(rat(c), e, 0, 1)
}

/// `c q^e a b`.
fn mab(c: i64, e: i64) -> Monomial {
    Monomial::new(rat(c), e, 1, 1)
}

/// `c q^e / a`.
fn ia(c: i64, e: i64) -> Monomial {
    Monomial::new(rat(c), e, -1, 0)
}

/// `c q^e / b`.
fn ib(c: i64, e: i64) -> Monomial {
    Monomial::new(rat(c), e, 0, -1)
}

/// `(c q^e; q^s)_n`.
fn pn(c: i64, e: i64, s: u32) -> TermPochhammer {
    TermPochhammer::new(qp(c, e), s, CountExpr::n())
}

/// `(c q^e; q^s)_{mul n + add}`.
fn pc(c: i64, e: i64, s: u32, mul: u32, add: u32) -> TermPochhammer {
    TermPochhammer::new(qp(c, e), s, CountExpr::affine(mul, add))
}

/// `(x; q^s)_n` for a parameter-bearing leading monomial.
fn pnm(x: Monomial, s: u32) -> TermPochhammer {
    TermPochhammer::new(x, s, CountExpr::n())
}

/// Row factor `(1 - q^{cn+d})`.
fn fm(c: i64, d: i64) -> RationalFactor {
    RationalFactor::one_minus(c, d)
}

/// Row factor `(1 + q^{cn+d})`.
fn fp(c: i64, d: i64) -> RationalFactor {
    RationalFactor::one_plus(c, d)
}

/// Row factor `1 / (1 - q^{cn+d})`.
fn rm(c: i64, d: i64) -> RationalFactor {
    RationalFactor::over_one_minus(c, d)
}

/// Row factor `1 / (1 + q^{cn+d})`.
fn rp(c: i64, d: i64) -> RationalFactor {
    RationalFactor::over_one_plus(c, d)
}

/// `(c q^e; q^step)_infty` raised to `sign` inside a prefactor quotient.
fn up(c: i64, e: i64, step: u32) -> PochhammerArg {
    PochhammerArg::infinite(qp(c, e), 0, step)
}

/// The theta row `sum_j (+-1)^j q^{c2 j^2 + c1 j}` over `j in [-n, n]`
/// (`plus` extends the range to `n + 1`).
fn row(c2: i64, c1: i64, signed: bool, plus: bool) -> ThetaRow {
    ThetaRow { c2, c1, signed, range: if plus { RowRange::Plus } else { RowRange::Full } }
}

/// `(-q; q)_infty / (q; q)_infty`.
fn pf_obar() -> PochQuotient {
    PochQuotient::new(vec![(up(-1, 1, 1), 1), (up(1, 1, 1), -1)])
}

/// `(-q; q^2)_infty / (q^2; q^2)_infty`.
fn pf_pod() -> PochQuotient {
    PochQuotient::new(vec![(up(-1, 1, 2), 1), (up(1, 2, 2), -1)])
}

/// `(-q^2; q^2)_infty / (q^2; q^2)_infty`.
fn pf_podbar() -> PochQuotient {
    PochQuotient::new(vec![(up(-1, 2, 2), 1), (up(1, 2, 2), -1)])
}

/// `(q; q^2)_infty / (q^2; q^2)_infty`.
fn pf_q12() -> PochQuotient {
    PochQuotient::new(vec![(up(1, 1, 2), 1), (up(1, 2, 2), -1)])
}

/// `1 / (q; q)_infty`.
fn pf_inv1() -> PochQuotient {
    PochQuotient::new(vec![(up(1, 1, 1), -1)])
}

/// `1 / (q^2; q^2)_infty`.
fn pf_inv2() -> PochQuotient {
    PochQuotient::new(vec![(up(1, 2, 2), -1)])
}

/// Builder for one-index term sums; finished by `.expr()`.
struct Sum(TermSumSpec);

impl Sum {
    fn new(start: i64, step: u32, q_exponent: QuadPoly) -> Self {
        Sum(TermSumSpec::bare(start, step, q_exponent))
    }

    /// Attaches `(-1)^n`.
    fn sign(mut self) -> Self {
        self.0.sign_exponent = 1;
        self
    }

    fn num(mut self, p: TermPochhammer) -> Self {
        self.0.numerator.push(p);
        self
    }

    fn den(mut self, p: TermPochhammer) -> Self {
        self.0.denominator.push(p);
        self
    }

    fn over(mut self, f: RationalFactor) -> Self {
        self.0.rational_factors.push(f);
        self
    }

    /// Attaches `a^{i n} b^{j n}`.
    fn params(mut self, i: u32, j: u32) -> Self {
        self.0.param_powers = (i, j);
        self
    }

    fn theta(mut self, t: ThetaRow) -> Self {
        self.0.theta_row = Some(t);
        self
    }

    fn expr(self) -> Expr {
        Expr::TermSum(self.0)
    }
}

/// `_r phi_s` sum with monomial parameters; registry arguments are
/// statically valid, so construction failures are programming errors.
fn phi(step: u32, nums: &[Monomial], dens: &[Monomial], z: Monomial) -> Expr {
    Expr::TermSum(TermSumSpec::rphis(step, nums, dens, &z).expect("registry phi spec"))
}

fn univariate(
    id: &'static str,
    description: &'static str,
    default_order: i64,
    lhs: Expr,
    rhs: Expr,
) -> IdentityRecord {
    IdentityRecord {
        id,
        description,
        kind: IdentityKind::Univariate { lhs, rhs },
        default_order,
        negative_control: false,
        links: Vec::new(),
    }
}

fn parameterized(
    id: &'static str,
    description: &'static str,
    lhs: Expr,
    rhs: Expr,
) -> IdentityRecord {
    IdentityRecord {
        id,
        description,
        kind: IdentityKind::Parameterized { lhs, rhs },
        default_order: 40,
        negative_control: false,
        links: Vec::new(),
    }
}

fn finite_lemma(
    id: &'static str,
    description: &'static str,
    cases: usize,
    build: fn(u64, usize) -> crate::Result<(crate::series::QSeries, crate::series::QSeries)>,
) -> IdentityRecord {
    IdentityRecord {
        id,
        description,
        kind: IdentityKind::Finite { cases, build },
        default_order: 12,
        negative_control: false,
        links: Vec::new(),
    }
}

fn transform_family(
    id: &'static str,
    description: &'static str,
    cases: usize,
    build: fn(usize, i64) -> crate::Result<(crate::series::QSeries, crate::series::QSeries)>,
) -> IdentityRecord {
    IdentityRecord {
        id,
        description,
        kind: IdentityKind::Transform { cases, build },
        default_order: 80,
        negative_control: false,
        links: Vec::new(),
    }
}

/// Attaches a specialization link to a univariate record.
fn linked(
    mut record: IdentityRecord,
    param_id: &'static str,
    sub_a: Monomial,
    sub_b: Monomial,
) -> IdentityRecord {
    record.links.push(SpecializationLink { param_id, sub_a, sub_b });
    record
}

// ---------------------------------------------------------------------------
// classical double-sum expansions
// ---------------------------------------------------------------------------

fn classical() -> Vec<IdentityRecord> {
    let euler = || Expr::Poch(PochQuotient::new(vec![(up(1, 1, 1), 1)]));

    let liu_412_lhs = || Sum::new(0, 2, QuadPoly::quad(1, 0)).den(pn(1, 2, 2)).expr();
    let liu_412_rhs = |sign_n: bool| {
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(1, 0, 1, 0, 0, 0), Region::JFull)
                .with_signs(sign_n, true)
                .with_factor(fm(2, 1))
                .with_prefactor(pf_inv1()),
        )
    };

    vec![
        univariate(
            "jacobi-cube",
            "Cube of the Euler product as a signed triangular-number double sum.",
            300,
            Expr::Pow(Box::new(euler()), 3),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::halves(0, 0, 1, 0, 1, 0), Region::Jacobi)
                    .with_signs(false, true),
            ),
        ),
        univariate(
            "rogers-hecke",
            "Square of the Euler product as an indefinite binary theta double sum.",
            300,
            Expr::Pow(Box::new(euler()), 2),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::halves(1, 0, -3, 1, 1, 0), Region::Rogers)
                    .with_signs(true, true),
            ),
        ),
        univariate(
            "liu-412",
            "Sum of q^{n^2}/(q^2;q^2)_n as a weighted square-theta double sum.",
            300,
            liu_412_lhs(),
            liu_412_rhs(false),
        ),
        univariate(
            "liu-413",
            "Alternating sum of q^{n(n-1)/2}/(-q;q)_n as a weighted double sum.",
            300,
            Sum::new(0, 1, QuadPoly::half_quad(1, -1)).sign().den(pn(-1, 1, 1)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::halves(1, 0, 2, -1, 0, 0), Region::JFull)
                    .with_signs(true, true)
                    .with_factor(fm(2, 1)),
            ),
        ),
        univariate(
            "liu-414",
            "Sum of q^{n(n-1)/2}/(q;q)_n as a weighted double sum.",
            300,
            Sum::new(0, 1, QuadPoly::half_quad(1, -1)).den(pn(1, 1, 1)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::halves(1, 0, 2, -1, 0, 0), Region::JFull)
                    .with_signs(false, true)
                    .with_factor(fm(2, 1))
                    .with_prefactor(pf_obar()),
            ),
        ),
        univariate(
            "wang-yee-61",
            "Odd/even Pochhammer-ratio sum as a shifted-window double sum.",
            300,
            Sum::new(1, 2, QuadPoly::linear(1)).num(pn(1, 1, 2)).den(pn(-1, 1, 2)).over(rp(2, 0)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(1, 0, 1, 0, 0, 0), Region::JShift)
                    .with_signs(false, true),
            ),
        ),
        univariate(
            "chan-liu-48",
            "Eisenstein-type correction sum as a weighted double theta sum.",
            300,
            Expr::Add(vec![
                Expr::Const(rat(1)),
                Expr::Scale(
                    rat(2),
                    Box::new(
                        Sum::new(1, 1, QuadPoly::quad(1, 1)).den(pn(1, 1, 1)).over(rp(1, 0)).expr(),
                    ),
                ),
            ]),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::halves(3, 0, 2, 1, 0, 0), Region::JFull)
                    .with_signs(false, true)
                    .with_prefactor(pf_inv1()),
            ),
        ),
        univariate(
            "chan-liu-49",
            "Signed partial-theta correction sum as a weighted double theta sum.",
            300,
            Expr::Add(vec![
                Expr::Const(rat(1)),
                Expr::Scale(
                    rat(2),
                    Box::new(Sum::new(1, 1, QuadPoly::half_quad(1, 1)).sign().over(rp(1, 0)).expr()),
                ),
            ]),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(1, 0, 1, 0, 0, 0), Region::JFull)
                    .with_signs(true, true)
                    .with_factor(fm(2, 1)),
            ),
        ),
        IdentityRecord {
            id: "liu-412-uncorrected",
            description: "Deliberately wrong variant of liu-412 carrying a spurious (-1)^n; \
                          kept as a negative control and expected to MISMATCH.",
            kind: IdentityKind::Univariate { lhs: liu_412_lhs(), rhs: liu_412_rhs(true) },
            default_order: 300,
            negative_control: true,
            links: Vec::new(),
        },
    ]
}

// ---------------------------------------------------------------------------
// named univariate double-sum identities
// ---------------------------------------------------------------------------

fn named_univariate() -> Vec<IdentityRecord> {
    // (phi(q^2)^2 - 1)/4 + q psi(q^2)^2, shared by cor-c1 and lem-l1.
    let quarter_theta_rhs = || {
        Expr::Add(vec![
            Expr::Const(ratio(-1, 4)),
            Expr::Scale(ratio(1, 4), Box::new(Expr::Pow(Box::new(Expr::ThetaSquare(2)), 2))),
            Expr::Mul(vec![
                Expr::Mono(qp(1, 1)),
                Expr::Pow(Box::new(Expr::ThetaTriangular(2)), 2),
            ]),
        ])
    };

    vec![
        univariate(
            "thm-t1",
            "Lambert-type sum of q^n/(1+q^{2n}) as a square double sum minus a theta correction.",
            200,
            Sum::new(1, 2, QuadPoly::linear(1)).over(rp(2, 0)).expr(),
            Expr::Add(vec![
                Expr::Hecke(
                    HeckeSpec::new(QuadForm::int(1, 0, 1, 0, 0, 0), Region::JFull).with_start(1),
                ),
                Expr::Scale(
                    ratio(-1, 2),
                    Box::new(Expr::Add(vec![Expr::ThetaSquare(2), Expr::Const(rat(-1))])),
                ),
            ]),
        ),
        univariate(
            "cor-c1",
            "Lambert-type sum of q^n/(1+q^{2n}) in closed theta form.",
            200,
            Sum::new(1, 2, QuadPoly::linear(1)).over(rp(2, 0)).expr(),
            quarter_theta_rhs(),
        ),
        univariate(
            "lem-l1",
            "Shifted-window square double sum in closed theta form.",
            500,
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(1, 0, 1, 0, 0, 0), Region::JShift).with_start(1),
            ),
            quarter_theta_rhs(),
        ),
        univariate(
            "thm-t3-5",
            "Alternating q^{n^2+n}/((q;q^2)_n(1+q^{2n})) sum as a signed double sum minus a partial theta.",
            200,
            Sum::new(1, 2, QuadPoly::quad(1, 1)).sign().den(pn(1, 1, 2)).over(rp(2, 0)).expr(),
            Expr::Add(vec![
                Expr::Hecke(
                    HeckeSpec::new(QuadForm::int(2, 0, 1, 0, 0, 0), Region::JFull)
                        .with_start(1)
                        .with_signs(true, false),
                ),
                Expr::Scale(
                    rat(-1),
                    Box::new(Sum::new(1, 2, QuadPoly::quad(3, 0)).sign().expr()),
                ),
            ]),
        ),
        univariate(
            "two-squares",
            "Square of the full theta function split by parity of the squared part.",
            2000,
            Expr::Pow(Box::new(Expr::ThetaSquare(1)), 2),
            Expr::Add(vec![
                Expr::Pow(Box::new(Expr::ThetaSquare(2)), 2),
                Expr::Scale(
                    rat(4),
                    Box::new(Expr::Mul(vec![
                        Expr::Mono(qp(1, 1)),
                        Expr::Pow(Box::new(Expr::ThetaTriangular(2)), 2),
                    ])),
                ),
            ]),
        ),
        univariate(
            "thm-8-1",
            "Signed (q^2;q^2)_n/(-q;q)_{2n+1} sum as a shifted-window double sum.",
            200,
            Sum::new(0, 2, QuadPoly::quad(1, 0)).sign().num(pn(1, 2, 2)).den(pc(-1, 1, 1, 2, 1)).expr(),
            Expr::Add(vec![
                Expr::Const(rat(1)),
                Expr::Scale(
                    rat(2),
                    Box::new(Expr::Hecke(
                        HeckeSpec::new(QuadForm::int(1, 0, 1, 0, 0, 0), Region::JShift)
                            .with_start(1)
                            .with_signs(true, true),
                    )),
                ),
            ]),
        ),
    ]
}

// ---------------------------------------------------------------------------
// two-parameter identities
// ---------------------------------------------------------------------------

/// `(q^2;q^2)_inf (ab;q^2)_inf / ((aq^2;q^2)_inf (bq^2;q^2)_inf)`.
fn pf_param_std() -> PochQuotient {
    PochQuotient::new(vec![
        (up(1, 2, 2), 1),
        (PochhammerArg::infinite(mab(1, 0), 0, 2), 1),
        (PochhammerArg::infinite(ma(1, 2), 0, 2), -1),
        (PochhammerArg::infinite(mb(1, 2), 0, 2), -1),
    ])
}

/// `(q^2;q^2)_inf (abq^2;q^2)_inf / ((aq^4;q^2)_inf (bq^4;q^2)_inf)`.
fn pf_param_shift() -> PochQuotient {
    PochQuotient::new(vec![
        (up(1, 2, 2), 1),
        (PochhammerArg::infinite(mab(1, 2), 0, 2), 1),
        (PochhammerArg::infinite(ma(1, 4), 0, 2), -1),
        (PochhammerArg::infinite(mb(1, 4), 0, 2), -1),
    ])
}

/// `(q;q)_inf (abq;q)_inf / ((aq^2;q)_inf (bq^2;q)_inf)`.
fn pf_param_base1() -> PochQuotient {
    PochQuotient::new(vec![
        (up(1, 1, 1), 1),
        (PochhammerArg::infinite(mab(1, 1), 0, 1), 1),
        (PochhammerArg::infinite(ma(1, 2), 0, 1), -1),
        (PochhammerArg::infinite(mb(1, 2), 0, 1), -1),
    ])
}

/// Standard double-sum side: `(q^2/a)_n (q^2/b)_n (ab)^n / ((a q^e)_n (b q^e)_n)`
/// times `q^{quad(n)}`, all in base `q^2`.
fn param_rhs(q_exponent: QuadPoly, den_e: i64) -> Sum {
    Sum::new(0, 2, q_exponent)
        .num(pnm(ia(1, 2), 2))
        .num(pnm(ib(1, 2), 2))
        .den(pnm(ma(1, den_e), 2))
        .den(pnm(mb(1, den_e), 2))
        .params(1, 1)
}

fn parameterized_family() -> Vec<IdentityRecord> {
    vec![
        parameterized(
            "thm-7-15",
            "3phi2(q^2/a, q^2/b, -1; q, -q^2) with argument ab as a weighted square-theta double sum.",
            Expr::Mul(vec![
                Expr::Poch(pf_param_std()),
                phi(2, &[ia(1, 2), ib(1, 2), qp(-1, 0)], &[qp(1, 1), qp(-1, 2)], mab(1, 0)),
            ]),
            param_rhs(QuadPoly::quad(1, -1), 2)
                .over(fm(4, 2))
                .theta(row(1, 0, false, false))
                .expr(),
        ),
        parameterized(
            "thm-7-13",
            "3phi2(q^2/a, q^2/b, q; -q^2, q^3) with argument ab as a weighted square-theta double sum.",
            Expr::Mul(vec![
                Expr::Poch(pf_param_std()),
                phi(2, &[ia(1, 2), ib(1, 2), qp(1, 1)], &[qp(-1, 2), qp(1, 3)], mab(1, 0)),
            ]),
            Expr::Mul(vec![
                Expr::one_minus_q(1),
                param_rhs(QuadPoly::quad(1, 0), 2)
                    .sign()
                    .over(fp(2, 1))
                    .theta(row(1, 0, false, false))
                    .expr(),
            ]),
        ),
        parameterized(
            "thm-2-2",
            "3phi2(q^2/a, q^2/b, -q; q, -q^2) with argument ab/q^2 as a weighted square-theta double sum.",
            Expr::Mul(vec![
                Expr::Poch(pf_param_std()),
                phi(2, &[ia(1, 2), ib(1, 2), qp(-1, 1)], &[qp(1, 1), qp(-1, 2)], mab(1, -2)),
            ]),
            param_rhs(QuadPoly::linear(-2), 2)
                .over(fm(4, 2))
                .theta(row(1, 0, false, false))
                .expr(),
        ),
        parameterized(
            "thm-7-3",
            "Bare (q^2/a)_n (q^2/b)_n (ab/q)^n/(-q;q)_{2n+1} sum as a signed square-theta double sum.",
            Expr::Mul(vec![
                Expr::Poch(pf_param_std()),
                Sum::new(0, 2, QuadPoly::linear(-1))
                    .num(pnm(ia(1, 2), 2))
                    .num(pnm(ib(1, 2), 2))
                    .den(pc(-1, 1, 1, 2, 1))
                    .params(1, 1)
                    .expr(),
            ]),
            param_rhs(QuadPoly::linear(-1), 2)
                .over(fm(2, 1))
                .theta(row(1, 0, true, false))
                .expr(),
        ),
        parameterized(
            "thm-9-2",
            "3phi2(q^2/a, q^2/b, -q; -q^2, q^3) with argument ab as an extended-window double sum.",
            Expr::Mul(vec![
                Expr::Poch(pf_param_shift()),
                phi(2, &[ia(1, 2), ib(1, 2), qp(-1, 1)], &[qp(-1, 2), qp(1, 3)], mab(1, 0)),
            ]),
            Expr::Mul(vec![
                Expr::one_minus_q(1),
                param_rhs(QuadPoly::zero(), 4)
                    .over(fm(4, 4))
                    .theta(row(1, 0, false, true))
                    .expr(),
            ]),
        ),
        parameterized(
            "thm-9-4",
            "3phi2(q^2/a, q^2/b, q; -q^2, q^3) with argument abq^2 as an extended-window double sum.",
            Expr::Mul(vec![
                Expr::Poch(pf_param_shift()),
                phi(2, &[ia(1, 2), ib(1, 2), qp(1, 1)], &[qp(-1, 2), qp(1, 3)], mab(1, 2)),
            ]),
            Expr::Mul(vec![
                Expr::one_minus_q(1),
                param_rhs(QuadPoly::quad(1, 2), 4)
                    .sign()
                    .over(fm(4, 4))
                    .theta(row(1, 0, false, true))
                    .expr(),
            ]),
        ),
        parameterized(
            "thm-7-9",
            "2phi1(q/a, q/b; -q) with argument ab as a signed extended-window double sum in base q.",
            Expr::Mul(vec![
                Expr::Poch(pf_param_base1()),
                phi(1, &[ia(1, 1), ib(1, 1)], &[qp(-1, 1)], mab(1, 0)),
            ]),
            Sum::new(0, 1, QuadPoly::zero())
                .num(pnm(ia(1, 1), 1))
                .num(pnm(ib(1, 1), 1))
                .den(pnm(ma(1, 2), 1))
                .den(pnm(mb(1, 2), 1))
                .params(1, 1)
                .over(fm(2, 2))
                .theta(row(1, 0, true, true))
                .expr(),
        ),
        parameterized(
            "thm-7-11",
            "2phi1(q^2/a, q^2/b; q) with argument ab/q^2 as a weighted hexagonal-theta double sum.",
            Expr::Mul(vec![
                Expr::Poch(pf_param_std()),
                phi(2, &[ia(1, 2), ib(1, 2)], &[qp(1, 1)], mab(1, -2)),
            ]),
            param_rhs(QuadPoly::linear(-2), 2)
                .over(fm(4, 2))
                .theta(row(2, 1, false, false))
                .expr(),
        ),
    ]
}

// ---------------------------------------------------------------------------
// univariate specializations of the two-parameter identities
// ---------------------------------------------------------------------------

fn specializations() -> Vec<IdentityRecord> {
    let mut records = Vec::new();

    // thm-7-15 family.
    records.push(univariate(
        "spec-7-15-q-mq",
        "thm-7-15 at (a, b) = (q, -q).",
        200,
        Sum::new(0, 2, QuadPoly::linear(2)).sign().num(pn(-1, 1, 2)).den(pn(1, 2, 2)).over(rp(2, 0)).expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(1, 0, 1, 1, 0, 0), Region::JFull)
                .with_signs(true, false)
                .with_prefactor(PochQuotient::scaled(
                    ratio(1, 2),
                    vec![(up(1, 2, 4), 1), (up(1, 4, 4), -1)],
                )),
        ),
    ));
    records.push(linked(
        univariate(
            "spec-7-15-m1-q",
            "thm-7-15 at (a, b) = (-1, q).",
            200,
            Sum::new(0, 2, QuadPoly::linear(1)).num(pn(-1, 0, 2)).den(pn(1, 2, 2)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(1, 0, 1, 0, 0, 0), Region::JFull)
                    .with_signs(false, true)
                    .with_factor(fm(2, 1))
                    .with_prefactor(pf_obar()),
            ),
        ),
        "thm-7-15",
        qp(-1, 0),
        qp(1, 1),
    ));
    records.push(univariate(
        "spec-7-15-m1-mq",
        "thm-7-15 at (a, b) = (-1, -q).",
        200,
        Sum::new(0, 1, QuadPoly::linear(1)).num(pc(-1, 0, 1, 2, 0)).den(pc(1, 1, 1, 2, 0)).expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(1, 0, 1, 0, 0, 0), Region::JFull)
                .with_factor(fm(2, 1))
                .with_prefactor(pf_obar()),
        ),
    ));
    records.push(univariate(
        "spec-7-15-0-q",
        "thm-7-15 at (a, b) = (0, q).",
        200,
        Sum::new(0, 2, QuadPoly::quad(1, 2)).sign().den(pn(1, 2, 2)).over(rp(2, 0)).expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(2, 0, 1, 1, 0, 0), Region::JFull)
                .with_signs(true, false)
                .with_factor(fp(2, 1))
                .with_prefactor(PochQuotient::scaled(
                    ratio(1, 2),
                    vec![(up(1, 1, 2), 1), (up(1, 2, 2), -1)],
                )),
        ),
    ));
    records.push(univariate(
        "spec-7-15-0-mq",
        "thm-7-15 at (a, b) = (0, -q).",
        200,
        Sum::new(0, 2, QuadPoly::quad(1, 2)).num(pn(-1, 1, 2)).den(pc(1, 1, 1, 2, 0)).over(rp(2, 0)).expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(2, 0, 1, 1, 0, 0), Region::JFull)
                .with_factor(fm(2, 1))
                .with_prefactor(PochQuotient::scaled(
                    ratio(1, 2),
                    vec![(up(-1, 1, 2), 1), (up(1, 2, 2), -1)],
                )),
        ),
    ));
    records.push(linked(
        univariate(
            "spec-7-15-0-m1",
            "thm-7-15 at (a, b) = (0, -1).",
            200,
            Sum::new(0, 2, QuadPoly::quad(1, 1)).num(pn(-1, 0, 2)).den(pc(1, 1, 1, 2, 0)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(2, 0, 1, 0, 0, 0), Region::JFull)
                    .with_factor(fm(4, 2))
                    .with_prefactor(pf_podbar()),
            ),
        ),
        "thm-7-15",
        Monomial::zero(),
        qp(-1, 0),
    ));
    records.push(univariate(
        "spec-7-15-0-0",
        "thm-7-15 at (a, b) = (0, 0).",
        200,
        Sum::new(0, 2, QuadPoly::quad(2, 2)).den(pc(1, 1, 1, 2, 0)).over(rp(2, 0)).expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(3, 0, 1, 1, 0, 0), Region::JFull)
                .with_factor(fm(4, 2))
                .with_prefactor(PochQuotient::scaled(ratio(1, 2), vec![(up(1, 2, 2), -1)])),
        ),
    ));

    // thm-7-13 family.
    records.push(univariate(
        "spec-7-13-1-mq",
        "thm-7-13 at (a, b) = (1, -q).",
        200,
        Sum::new(0, 2, QuadPoly::linear(1)).sign().num(pn(-1, 1, 2)).den(pn(-1, 2, 2)).over(rm(2, 1)).expr(),
        Expr::Hecke(HeckeSpec::new(QuadForm::int(1, 0, 1, 1, 0, 0), Region::JFull)),
    ));
    records.push(univariate(
        "spec-7-13-m1-mq",
        "thm-7-13 at (a, b) = (-1, -q).",
        200,
        Sum::new(0, 2, QuadPoly::linear(1)).num(pn(-1, 1, 2)).den(pn(1, 2, 2)).over(rm(2, 1)).expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(1, 0, 1, 1, 0, 0), Region::JFull)
                .with_signs(true, false)
                .with_prefactor(pf_obar()),
        ),
    ));
    records.push(univariate(
        "spec-7-13-1-0",
        "thm-7-13 at (a, b) = (1, 0).",
        200,
        Sum::new(0, 2, QuadPoly::quad(1, 1)).sign().den(pn(-1, 2, 2)).over(rm(2, 1)).expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(2, 0, 1, 1, 0, 0), Region::JFull).with_factor(fp(2, 1)),
        ),
    ));
    records.push(univariate(
        "spec-7-13-mq-0",
        "thm-7-13 at (a, b) = (-q, 0).",
        200,
        Sum::new(0, 2, QuadPoly::quad(1, 2)).num(pn(-1, 1, 2)).den(pn(1, 4, 4)).over(rm(2, 1)).expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(2, 0, 1, 2, 0, 0), Region::JFull)
                .with_signs(true, false)
                .with_prefactor(pf_pod()),
        ),
    ));
    records.push(linked(
        univariate(
            "spec-7-13-m1-0",
            "thm-7-13 at (a, b) = (-1, 0).",
            200,
            Sum::new(0, 2, QuadPoly::quad(1, 1)).den(pn(1, 2, 2)).over(rm(2, 1)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(2, 0, 1, 1, 0, 0), Region::JFull)
                    .with_signs(true, false)
                    .with_factor(fp(2, 1))
                    .with_prefactor(pf_podbar()),
            ),
        ),
        "thm-7-13",
        qp(-1, 0),
        Monomial::zero(),
    ));
    records.push(linked(
        univariate(
            "spec-7-13-0-0",
            "thm-7-13 at (a, b) = (0, 0).",
            200,
            Sum::new(0, 2, QuadPoly::quad(2, 2)).den(pn(1, 4, 4)).over(rm(2, 1)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(3, 0, 1, 2, 0, 0), Region::JFull)
                    .with_signs(true, false)
                    .with_factor(fp(2, 1))
                    .with_prefactor(pf_inv2()),
            ),
        ),
        "thm-7-13",
        Monomial::zero(),
        Monomial::zero(),
    ));

    // thm-2-2 family.
    records.push(linked(
        univariate(
            "spec-2-2-0-0",
            "thm-2-2 at (a, b) = (0, 0).",
            200,
            Sum::new(0, 2, QuadPoly::quad(2, 0)).num(pn(-1, 1, 2)).den(pn(1, 1, 2)).den(pn(1, 4, 4)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(2, 0, 1, 0, 0, 0), Region::JFull)
                    .with_factor(fm(4, 2))
                    .with_prefactor(pf_inv2()),
            ),
        ),
        "thm-2-2",
        Monomial::zero(),
        Monomial::zero(),
    ));
    records.push(linked(
        univariate(
            "spec-2-2-m1-0",
            "thm-2-2 at (a, b) = (-1, 0).",
            200,
            Sum::new(0, 2, QuadPoly::quad(1, -1)).num(pn(-1, 1, 2)).den(pc(1, 1, 1, 2, 0)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(1, 0, 1, -1, 0, 0), Region::JFull)
                    .with_factor(fm(4, 2))
                    .with_prefactor(pf_podbar()),
            ),
        ),
        "thm-2-2",
        qp(-1, 0),
        Monomial::zero(),
    ));
    records.push(univariate(
        "spec-2-2-1-0",
        "thm-2-2 at (a, b) = (1, 0).",
        200,
        Sum::new(0, 2, QuadPoly::quad(1, -1)).sign().num(pn(-1, 1, 2)).den(pn(1, 1, 2)).den(pn(-1, 2, 2)).expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(1, 0, 1, -1, 0, 0), Region::JFull)
                .with_signs(true, false)
                .with_factor(fm(4, 2)),
        ),
    ));
    records.push(univariate(
        "spec-2-2-q-0",
        "thm-2-2 at (a, b) = (q, 0).",
        200,
        Sum::new(0, 2, QuadPoly::quad(1, 0)).sign().num(pn(-1, 1, 2)).den(pn(1, 4, 4)).expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(1, 0, 1, 0, 0, 0), Region::JFull)
                .with_signs(true, false)
                .with_factor(fp(2, 1))
                .with_prefactor(pf_q12()),
        ),
    ));
    records.push(univariate(
        "spec-2-2-mq-0",
        "thm-2-2 at (a, b) = (-q, 0).",
        200,
        Sum::new(0, 2, QuadPoly::quad(1, 0))
            .num(pn(-1, 1, 2))
            .num(pn(-1, 1, 2))
            .den(pn(1, 1, 2))
            .den(pn(1, 4, 4))
            .expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(1, 0, 1, 0, 0, 0), Region::JFull)
                .with_factor(fm(2, 1))
                .with_prefactor(pf_pod()),
        ),
    ));

    // thm-7-3 family.
    records.push(linked(
        univariate(
            "spec-7-3-0-0",
            "thm-7-3 at (a, b) = (0, 0).",
            200,
            Sum::new(0, 2, QuadPoly::quad(2, 1)).den(pc(-1, 1, 1, 2, 1)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(2, 0, 1, 1, 0, 0), Region::JFull)
                    .with_signs(false, true)
                    .with_factor(fm(2, 1))
                    .with_prefactor(pf_inv2()),
            ),
        ),
        "thm-7-3",
        Monomial::zero(),
        Monomial::zero(),
    ));
    records.push(linked(
        univariate(
            "spec-7-3-m1-0",
            "thm-7-3 at (a, b) = (-1, 0).",
            200,
            Sum::new(0, 2, QuadPoly::quad(1, 0)).den(pc(-1, 1, 2, 1, 1)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(1, 0, 1, 0, 0, 0), Region::JFull)
                    .with_signs(false, true)
                    .with_factor(fm(2, 1))
                    .with_prefactor(pf_podbar()),
            ),
        ),
        "thm-7-3",
        qp(-1, 0),
        Monomial::zero(),
    ));
    records.push(univariate(
        "spec-7-3-q-0",
        "thm-7-3 at (a, b) = (q, 0).",
        200,
        Sum::new(0, 2, QuadPoly::quad(1, 1)).sign().num(pn(1, 1, 2)).den(pc(-1, 1, 1, 2, 1)).expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(1, 0, 1, 1, 0, 0), Region::JFull)
                .with_signs(true, true)
                .with_prefactor(pf_q12()),
        ),
    ));

    // thm-9-2 family.
    records.push(univariate(
        "spec-9-2-1-0",
        "thm-9-2 at (a, b) = (1, 0).",
        200,
        Sum::new(0, 2, QuadPoly::quad(1, 1))
            .sign()
            .num(pn(-1, 1, 2))
            .den(pn(-1, 2, 2))
            .den(pc(1, 1, 2, 1, 1))
            .expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(1, 0, 1, 1, 0, 0), Region::JPlus)
                .with_signs(true, false)
                .with_factor(fp(2, 2)),
        ),
    ));
    records.push(linked(
        univariate(
            "spec-9-2-m1-0",
            "thm-9-2 at (a, b) = (-1, 0).",
            200,
            Sum::new(0, 2, QuadPoly::quad(1, 1)).num(pn(-1, 1, 2)).den(pc(1, 1, 1, 2, 1)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(1, 0, 1, 1, 0, 0), Region::JPlus)
                    .with_factor(fm(2, 2))
                    .with_prefactor(pf_podbar()),
            ),
        ),
        "thm-9-2",
        qp(-1, 0),
        Monomial::zero(),
    ));
    records.push(univariate(
        "spec-9-2-qi-0",
        "thm-9-2 at (a, b) = (1/q, 0).",
        200,
        Sum::new(0, 2, QuadPoly::quad(1, 0)).sign().num(pn(-1, 1, 2)).den(pn(1, 4, 4)).expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(1, 0, 1, 0, 0, 0), Region::JPlus)
                .with_signs(true, false)
                .with_factor(fm(4, 4))
                .with_prefactor(pf_q12()),
        ),
    ));
    records.push(univariate(
        "spec-9-2-mqi-0",
        "thm-9-2 at (a, b) = (-1/q, 0).",
        200,
        Sum::new(0, 2, QuadPoly::quad(1, 0))
            .num(pn(-1, 1, 2))
            .num(pc(-1, 1, 2, 1, 1))
            .den(pn(-1, 2, 2))
            .den(pc(1, 1, 1, 2, 1))
            .expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(1, 0, 1, 0, 0, 0), Region::JPlus)
                .with_factor(fm(4, 4))
                .with_prefactor(pf_pod()),
        ),
    ));
    records.push(linked(
        univariate(
            "spec-9-2-0-0",
            "thm-9-2 at (a, b) = (0, 0).",
            200,
            Sum::new(0, 2, QuadPoly::quad(2, 2))
                .num(pn(-1, 1, 2))
                .den(pn(-1, 2, 2))
                .den(pc(1, 1, 1, 2, 1))
                .expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(2, 0, 1, 2, 0, 0), Region::JPlus)
                    .with_factor(fm(4, 4))
                    .with_prefactor(pf_inv2()),
            ),
        ),
        "thm-9-2",
        Monomial::zero(),
        Monomial::zero(),
    ));

    // thm-9-4 family.
    records.push(univariate(
        "spec-9-4-1-m1",
        "thm-9-4 at (a, b) = (1, -1).",
        200,
        Sum::new(0, 2, QuadPoly::linear(2)).sign().over(rm(2, 1)).expr(),
        Expr::Hecke(HeckeSpec::new(QuadForm::int(1, 0, 1, 2, 0, 0), Region::JPlus)),
    ));
    records.push(univariate(
        "spec-9-4-1-qi",
        "thm-9-4 at (a, b) = (1, 1/q).",
        200,
        Sum::new(0, 2, QuadPoly::linear(1)).num(pn(1, 1, 2)).den(pn(-1, 2, 2)).expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(1, 0, 1, 1, 0, 0), Region::JPlus)
                .with_signs(true, false)
                .with_factor(fp(2, 2)),
        ),
    ));
    records.push(univariate(
        "spec-9-4-1-mqi",
        "thm-9-4 at (a, b) = (1, -1/q).",
        200,
        Sum::new(0, 2, QuadPoly::linear(1)).sign().num(pc(-1, 1, 2, 1, 1)).den(pn(-1, 2, 2)).over(rm(2, 1)).expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(1, 0, 1, 1, 0, 0), Region::JPlus).with_factor(fp(2, 2)),
        ),
    ));
    records.push(linked(
        univariate(
            "spec-9-4-0-1",
            "thm-9-4 at (a, b) = (0, 1).",
            200,
            Sum::new(0, 2, QuadPoly::quad(1, 3)).sign().den(pn(-1, 2, 2)).over(rm(2, 1)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(2, 0, 1, 3, 0, 0), Region::JPlus).with_factor(fp(2, 2)),
            ),
        ),
        "thm-9-4",
        Monomial::zero(),
        Monomial::one(),
    ));
    records.push(linked(
        univariate(
            "spec-9-4-0-m1",
            "thm-9-4 at (a, b) = (0, -1).",
            200,
            Sum::new(0, 2, QuadPoly::quad(1, 3)).den(pn(1, 2, 2)).over(rm(2, 1)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(2, 0, 1, 3, 0, 0), Region::JPlus)
                    .with_signs(true, false)
                    .with_factor(fm(2, 2))
                    .with_prefactor(pf_podbar()),
            ),
        ),
        "thm-9-4",
        Monomial::zero(),
        qp(-1, 0),
    ));

    // thm-7-9 family.
    records.push(univariate(
        "spec-7-9-1-0",
        "thm-7-9 at (a, b) = (1, 0).",
        200,
        Sum::new(0, 1, QuadPoly::half_quad(1, 1)).sign().den(pn(-1, 1, 1)).expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::halves(1, 0, 2, 1, 0, 0), Region::JPlus)
                .with_signs(true, true)
                .with_factor(fp(1, 1)),
        ),
    ));
    records.push(linked(
        univariate(
            "spec-7-9-m1-0",
            "thm-7-9 at (a, b) = (-1, 0).",
            200,
            Sum::new(0, 1, QuadPoly::half_quad(1, 1)).den(pn(1, 1, 1)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::halves(1, 0, 2, 1, 0, 0), Region::JPlus)
                    .with_signs(false, true)
                    .with_factor(fm(1, 1))
                    .with_prefactor(pf_obar()),
            ),
        ),
        "thm-7-9",
        qp(-1, 0),
        Monomial::zero(),
    ));
    records.push(linked(
        univariate(
            "spec-7-9-0-0",
            "thm-7-9 at (a, b) = (0, 0).",
            200,
            Sum::new(0, 2, QuadPoly::quad(1, 1)).den(pn(1, 2, 2)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(1, 0, 1, 1, 0, 0), Region::JPlus)
                    .with_signs(false, true)
                    .with_factor(fm(2, 2))
                    .with_prefactor(pf_inv1()),
            ),
        ),
        "thm-7-9",
        Monomial::zero(),
        Monomial::zero(),
    ));

    // thm-7-11 family.
    records.push(univariate(
        "spec-7-11-1-0",
        "thm-7-11 at (a, b) = (1, 0).",
        200,
        Sum::new(0, 2, QuadPoly::quad(1, -1)).sign().den(pn(1, 1, 2)).expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(1, 0, 2, -1, 1, 0), Region::JFull)
                .with_signs(true, false)
                .with_factor(fm(4, 2)),
        ),
    ));
    records.push(linked(
        univariate(
            "spec-7-11-m1-0",
            "thm-7-11 at (a, b) = (-1, 0).",
            200,
            Sum::new(0, 2, QuadPoly::quad(1, -1)).num(pn(-1, 2, 2)).den(pc(1, 1, 1, 2, 0)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(1, 0, 2, -1, 1, 0), Region::JFull)
                    .with_factor(fm(4, 2))
                    .with_prefactor(pf_podbar()),
            ),
        ),
        "thm-7-11",
        qp(-1, 0),
        Monomial::zero(),
    ));
    records.push(univariate(
        "spec-7-11-q-0",
        "thm-7-11 at (a, b) = (q, 0).",
        200,
        Sum::new(0, 2, QuadPoly::quad(1, 0)).sign().den(pn(1, 2, 2)).expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(1, 0, 2, 0, 1, 0), Region::JFull)
                .with_signs(true, false)
                .with_factor(fp(2, 1))
                .with_prefactor(pf_q12()),
        ),
    ));
    records.push(univariate(
        "spec-7-11-mq-0",
        "thm-7-11 at (a, b) = (-q, 0).",
        200,
        Sum::new(0, 2, QuadPoly::quad(1, 0)).num(pn(-1, 1, 2)).den(pc(1, 1, 1, 2, 0)).expr(),
        Expr::Hecke(
            HeckeSpec::new(QuadForm::int(1, 0, 2, 0, 1, 0), Region::JFull)
                .with_factor(fm(2, 1))
                .with_prefactor(pf_pod()),
        ),
    ));
    records.push(linked(
        univariate(
            "spec-7-11-0-0",
            "thm-7-11 at (a, b) = (0, 0).",
            200,
            Sum::new(0, 2, QuadPoly::quad(2, 0)).den(pc(1, 1, 1, 2, 0)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(2, 0, 2, 0, 1, 0), Region::JFull)
                    .with_factor(fm(4, 2))
                    .with_prefactor(pf_inv2()),
            ),
        ),
        "thm-7-11",
        Monomial::zero(),
        Monomial::zero(),
    ));

    records
}

// ---------------------------------------------------------------------------
// identities backing the partition inequalities
// ---------------------------------------------------------------------------

fn bridge_identities() -> Vec<IdentityRecord> {
    vec![
        univariate(
            "eq-5-11",
            "Sum of q^{n^2+2n}/((q^2;q^2)_n(1+q^{2n})) as a weighted square-theta double sum.",
            300,
            Sum::new(0, 2, QuadPoly::quad(1, 2)).den(pn(1, 2, 2)).over(rp(2, 0)).expr(),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(2, 0, 1, 1, 0, 0), Region::JFull)
                    .with_signs(false, true)
                    .with_factor(fm(2, 1))
                    .with_prefactor(PochQuotient::scaled(
                        ratio(1, 2),
                        vec![(up(-1, 1, 2), 1), (up(1, 2, 2), -1)],
                    )),
            ),
        ),
        univariate(
            "eq-5-12",
            "Product-weighted sum of (-q;q^2)_n q^{n^2+2n}/((1-q^{2n+1})(q^4;q^4)_n) as a signed double sum.",
            300,
            Expr::Mul(vec![
                Expr::Poch(PochQuotient::new(vec![(up(-1, 2, 2), 1)])),
                Sum::new(0, 2, QuadPoly::quad(1, 2)).num(pn(-1, 1, 2)).den(pn(1, 4, 4)).over(rm(2, 1)).expr(),
            ]),
            Expr::Hecke(
                HeckeSpec::new(QuadForm::int(2, 0, 1, 2, 0, 0), Region::JFull)
                    .with_signs(true, false)
                    .with_prefactor(pf_inv1()),
            ),
        ),
    ]
}

// ---------------------------------------------------------------------------
// finite lemmas and sampled transforms
// ---------------------------------------------------------------------------

fn finite_lemmas() -> Vec<IdentityRecord> {
    vec![
        finite_lemma(
            "eq-1-1",
            "Finite three-term product transformation, checked exactly over sampled parameters.",
            4,
            finite::f_eq_1_1,
        ),
        finite_lemma(
            "eq-1-2",
            "Finite quadratic-base transformation, checked exactly over sampled parameters.",
            5,
            finite::f_eq_1_2,
        ),
        finite_lemma(
            "eq-1-6",
            "Finite alternating Pochhammer-ratio sum in closed form.",
            1,
            finite::f_eq_1_6,
        ),
        finite_lemma(
            "eq-1-7",
            "Finite q-binomial-type evaluation in closed form.",
            1,
            finite::f_eq_1_7,
        ),
        finite_lemma(
            "eq-7-1",
            "Finite terminating series transformation, checked exactly over sampled parameters.",
            4,
            finite::f_eq_7_1,
        ),
        finite_lemma(
            "eq-7-2",
            "Finite terminating sum with signed theta-polynomial value.",
            1,
            finite::f_eq_7_2,
        ),
        finite_lemma(
            "eq-7-4",
            "Finite terminating sum with signed theta-polynomial value.",
            1,
            finite::f_eq_7_4,
        ),
        finite_lemma(
            "eq-7-6",
            "Finite terminating sum with signed theta-polynomial value.",
            1,
            finite::f_eq_7_6,
        ),
        finite_lemma(
            "eq-7-7",
            "Finite terminating sum with signed theta-polynomial value.",
            1,
            finite::f_eq_7_7,
        ),
        finite_lemma(
            "eq-7-8",
            "Finite terminating sum with theta-polynomial value.",
            1,
            finite::f_eq_7_8,
        ),
        finite_lemma(
            "eq-7-10",
            "Finite terminating sum with theta-polynomial value.",
            1,
            finite::f_eq_7_10,
        ),
        finite_lemma(
            "eq-7-12",
            "Finite quadratic-base transformation, checked exactly over sampled parameters.",
            5,
            finite::f_eq_7_12,
        ),
        finite_lemma(
            "eq-7-14",
            "Finite terminating sum with signed theta-polynomial value.",
            1,
            finite::f_eq_7_14,
        ),
        finite_lemma(
            "eq-9-1",
            "Finite extended-window terminating sum in closed form.",
            1,
            finite::f_eq_9_1,
        ),
        finite_lemma(
            "eq-9-3",
            "Finite extended-window terminating sum in closed form.",
            1,
            finite::f_eq_9_3,
        ),
    ]
}

fn transforms() -> Vec<IdentityRecord> {
    vec![
        transform_family(
            "eq-1-3",
            "Three-term series transformation, verified at sampled parameter substitutions.",
            transform::T_EQ_1_3_CASES,
            transform::t_eq_1_3,
        ),
        transform_family(
            "eq-t2-4",
            "Series rearrangement transformation, verified at sampled parameter substitutions.",
            transform::T_EQ_T2_4_CASES,
            transform::t_eq_t2_4,
        ),
        transform_family(
            "eq-t2-9",
            "Series rearrangement transformation, verified at sampled parameter substitutions.",
            transform::T_EQ_T2_9_CASES,
            transform::t_eq_t2_9,
        ),
        transform_family(
            "eq-2-1",
            "Cubic-exponent series transformation, verified at sampled parameter substitutions.",
            transform::T_EQ_2_1_CASES,
            transform::t_eq_2_1,
        ),
    ]
}

/// Assembles the full registry. Ids are unique; `super::registry()` sorts.
pub(super) fn build() -> Vec<IdentityRecord> {
    let mut records = Vec::new();
    records.extend(classical());
    records.extend(named_univariate());
    records.extend(parameterized_family());
    records.extend(specializations());
    records.extend(bridge_identities());
    records.extend(finite_lemmas());
    records.extend(transforms());
    records
}

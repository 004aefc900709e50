//! The multiplication (`X`) and differentiation (`D`) operator calculus on
//! truncated series in `x`, together with exact checks of the operator
//! identities between shifted falling products of `XD` and Stirling-weighted
//! normal-ordered forms.
//!
//! Two implementations of `(XD + c)_{n,lambda}` coexist on purpose. The slow
//! one is a literal composition of `X`, `D`, and scalar shifts and serves as
//! the oracle; the fast one acts diagonally on the monomial basis with
//! weights `(j + c)_{n,lambda}`. Checks compare operators by applying both
//! sides to every monomial up to a degree bound (and to arbitrary series for
//! the commutator-style identities).

use crate::comb::{binomial, deg_falling};
use crate::rational::{format_rat, rat_usize, Rat};
use crate::report::{Counterexample, IdentityReport, ParamSample};
use crate::series::TruncSeries;
use crate::stirling::StirlingCache;

/// Variable used by every series this module touches.
pub const OP_VAR: char = 'x';

/// A linear operator on truncated series, described structurally.
#[derive(Debug, Clone)]
pub enum SeriesOperator {
    /// Multiplication by the variable.
    X,
    /// Differentiation; drops the valid order by one.
    D,
    Identity,
    /// Diagonal action `x^j -> (j + r)_{n,lambda} x^j`; the fast path for
    /// `(XD + r)_{n,lambda}`, no valid-order loss.
    FallingDiagonal {
        n: u32,
        r: Rat,
        lambda: Rat,
    },
    /// Operator product; the rightmost factor acts first.
    Compose(Vec<SeriesOperator>),
    /// Scalar-weighted sum.
    Linear(Vec<(Rat, SeriesOperator)>),
}

impl SeriesOperator {
    /// `XD` as a composition (D acts first).
    pub fn xd() -> Self {
        SeriesOperator::Compose(vec![SeriesOperator::X, SeriesOperator::D])
    }

    /// `XD + c` built from primitives only.
    pub fn shifted_xd(c: Rat) -> Self {
        SeriesOperator::Linear(vec![
            (Rat::from_integer(1.into()), Self::xd()),
            (c, SeriesOperator::Identity),
        ])
    }

    /// `X^k`.
    pub fn x_pow(k: u32) -> Self {
        SeriesOperator::Compose(vec![SeriesOperator::X; k as usize])
    }

    /// `D^k`.
    pub fn d_pow(k: u32) -> Self {
        SeriesOperator::Compose(vec![SeriesOperator::D; k as usize])
    }

    /// `X^k D^k` from primitives (D's act first).
    pub fn normal_ordered(k: u32) -> Self {
        let mut factors = vec![SeriesOperator::X; k as usize];
        factors.extend(std::iter::repeat_n(SeriesOperator::D, k as usize));
        SeriesOperator::Compose(factors)
    }

    /// Fast diagonal form of `(XD + r)_{n,lambda}`.
    pub fn xd_falling(n: u32, lambda: &Rat, r: u32) -> Self {
        SeriesOperator::FallingDiagonal {
            n,
            r: rat_usize(r as usize),
            lambda: lambda.clone(),
        }
    }

    /// Slow compositional form of `(XD + shift)_{n,lambda}`: the product of
    /// the factors `XD + shift - j*lambda` for `j = 0..n`, built only from
    /// `X`, `D`, and scalar shifts. This is the oracle side of every
    /// diagonal check.
    pub fn xd_falling_slow(n: u32, lambda: &Rat, shift: &Rat) -> Self {
        let factors = (0..n)
            .map(|j| Self::shifted_xd(shift - rat_usize(j as usize) * lambda))
            .collect();
        SeriesOperator::Compose(factors)
    }

    pub fn apply(&self, f: &TruncSeries) -> TruncSeries {
        match self {
            SeriesOperator::X => f.mul_by_var(),
            SeriesOperator::D => f.derivative(),
            SeriesOperator::Identity => f.clone(),
            SeriesOperator::FallingDiagonal { n, r, lambda } => {
                let order = f.trunc_order();
                let coeffs = (0..=order)
                    .map(|j| {
                        let weight = deg_falling(&(rat_usize(j) + r), *n, lambda);
                        weight * f.coeff(j)
                    })
                    .collect();
                TruncSeries::from_coeffs(f.var(), coeffs).with_valid(f.valid_order())
            }
            SeriesOperator::Compose(factors) => {
                let mut acc = f.clone();
                for op in factors.iter().rev() {
                    acc = op.apply(&acc);
                }
                acc
            }
            SeriesOperator::Linear(terms) => {
                let mut acc = TruncSeries::zero(f.var(), f.trunc_order());
                for (c, op) in terms {
                    acc = &acc + &op.apply(f).scale(c);
                }
                acc
            }
        }
    }
}

/// `X f = x * f`.
pub fn apply_x(f: &TruncSeries) -> TruncSeries {
    f.mul_by_var()
}

/// `D f = f'`.
pub fn apply_d(f: &TruncSeries) -> TruncSeries {
    f.derivative()
}

/// `(XD + r)_{n,lambda}` applied to the series of `e_lambda^y(x)`; the fast
/// diagonal path. Coefficient `j` of the result is
/// `(j + r)_{n,lambda} (y)_{j,lambda} / j!`.
pub fn operator_bell(n: u32, lambda: &Rat, y: &Rat, r: u32, order: usize) -> TruncSeries {
    let exp = TruncSeries::deg_exp(OP_VAR, y, lambda, order);
    SeriesOperator::xd_falling(n, lambda, r).apply(&exp)
}

fn monomial(degree: usize, order: usize) -> TruncSeries {
    TruncSeries::monomial(OP_VAR, Rat::from_integer(1.into()), degree, order)
}

/// Compares two operators on every monomial of degree `<= max_degree`.
/// `headroom` is the extra truncation needed when intermediate results climb
/// above the monomial degree (an `X^k` acting before a `D^k`).
fn compare_on_monomials(
    id: &str,
    lhs: &SeriesOperator,
    rhs: &SeriesOperator,
    max_degree: usize,
    headroom: usize,
    sample: &ParamSample,
) -> IdentityReport {
    let order = max_degree + headroom;
    for degree in 0..=max_degree {
        let f = monomial(degree, order);
        let (a, b) = (lhs.apply(&f), rhs.apply(&f));
        if let Some((idx, av, bv)) = a.first_disagreement(&b) {
            return IdentityReport::fail(
                id,
                degree + 1,
                Counterexample {
                    sample: sample.clone(),
                    lhs: format_rat(&av),
                    rhs: format_rat(&bv),
                    context: format!("monomial x^{degree}, coefficient of x^{idx}"),
                },
            );
        }
    }
    IdentityReport::pass(id, max_degree + 1)
}

/// Checks `(XD + r)_{n,lambda} = sum_k {n+r, k+r}_{r,lambda} X^k D^k` on all
/// monomials of degree `<= max_degree` (at `r = 0` this is the Stirling
/// normal-ordering expansion of `(XD)_{n,lambda}`). The left side is the
/// slow compositional operator, the right side takes its coefficients from
/// the triangle recurrence, so the two routes are independent.
pub fn check_op_stirling_expansion(
    cache: &mut StirlingCache,
    n: u32,
    lambda: &Rat,
    r: u32,
    max_degree: usize,
) -> IdentityReport {
    let lhs = SeriesOperator::xd_falling_slow(n, lambda, &rat_usize(r as usize));
    let rhs = SeriesOperator::Linear(
        (0..=n)
            .map(|k| {
                (
                    cache.deg_r(n, k, r, lambda),
                    SeriesOperator::normal_ordered(k),
                )
            })
            .collect(),
    );
    let sample = ParamSample {
        lambda: lambda.clone(),
        n,
        r,
        ..ParamSample::default()
    };
    compare_on_monomials(
        "operators.stirling_expansion",
        &lhs,
        &rhs,
        max_degree,
        0,
        &sample,
    )
}

/// Checks the shift factorization
/// `(XD + r)_{n+m,lambda} = (XD + r - m*lambda)_{n,lambda} (XD + r)_{m,lambda}`
/// on all monomials of degree `<= max_degree` (`r = 0` is the plain case).
pub fn check_op_shift_factorization(
    n: u32,
    m: u32,
    lambda: &Rat,
    r: u32,
    max_degree: usize,
) -> IdentityReport {
    let shift = rat_usize(r as usize);
    let lhs = SeriesOperator::xd_falling_slow(n + m, lambda, &shift);
    let rhs = SeriesOperator::Compose(vec![
        SeriesOperator::xd_falling_slow(n, lambda, &(&shift - rat_usize(m as usize) * lambda)),
        SeriesOperator::xd_falling_slow(m, lambda, &shift),
    ]);
    let sample = ParamSample {
        lambda: lambda.clone(),
        n,
        m,
        r,
        ..ParamSample::default()
    };
    compare_on_monomials(
        "operators.shift_factorization",
        &lhs,
        &rhs,
        max_degree,
        0,
        &sample,
    )
}

/// Checks the push-through family on monomials of degree `<= max_degree`:
///
/// - `D X^k - X^k D = k X^(k-1)` (commutator ladder),
/// - `(XD + r - m*lambda)_{n,lambda} X^k = X^k (XD + r + k - m*lambda)_{n,lambda}`,
/// - the binomial re-expansion
///   `X^k sum_l C(n,l) (XD + r)_{l,lambda} (k - m*lambda)_{n-l,lambda}`.
///
/// With `n = 1`, `m = r = 0` the second line is `(XD) X^k = X^k (XD + k)`.
pub fn check_op_pushthrough(
    n: u32,
    m: u32,
    k: u32,
    lambda: &Rat,
    r: u32,
    max_degree: usize,
) -> IdentityReport {
    let id = "operators.pushthrough";
    let sample = ParamSample {
        lambda: lambda.clone(),
        n,
        m,
        r,
        ..ParamSample::default()
    };
    let mut samples_run = 0;

    if k >= 1 {
        // D X^k - X^k D = k X^(k-1)
        let lhs = SeriesOperator::Linear(vec![
            (
                Rat::from_integer(1.into()),
                SeriesOperator::Compose(vec![SeriesOperator::D, SeriesOperator::x_pow(k)]),
            ),
            (
                -Rat::from_integer(1.into()),
                SeriesOperator::Compose(vec![SeriesOperator::x_pow(k), SeriesOperator::D]),
            ),
        ]);
        let rhs =
            SeriesOperator::Linear(vec![(rat_usize(k as usize), SeriesOperator::x_pow(k - 1))]);
        let report = compare_on_monomials(id, &lhs, &rhs, max_degree, k as usize + 1, &sample);
        if !report.passed() {
            return IdentityReport {
                counterexample: report.counterexample.map(|cx| Counterexample {
                    context: format!("commutator ladder: {}", cx.context),
                    ..cx
                }),
                ..report
            };
        }
        samples_run += report.samples_run;

        // the ladder again on a dense series, guarding the valid-order
        // bookkeeping that monomials cannot exercise
        let dense = TruncSeries::from_coeffs(
            OP_VAR,
            (0..=max_degree + k as usize + 1)
                .map(|i| {
                    crate::rational::rat(2 * i as i64 - 3, i as i64 + 2)
                        + lambda * crate::rational::rat_usize(i)
                })
                .collect(),
        );
        samples_run += 1;
        if let Some((idx, av, bv)) = lhs.apply(&dense).first_disagreement(&rhs.apply(&dense)) {
            return IdentityReport::fail(
                id,
                samples_run,
                Counterexample {
                    sample: sample.clone(),
                    lhs: format_rat(&av),
                    rhs: format_rat(&bv),
                    context: format!("commutator ladder on a dense series, coefficient of x^{idx}"),
                },
            );
        }
    }

    let shift = &rat_usize(r as usize) - rat_usize(m as usize) * lambda;
    let pushed = &shift + rat_usize(k as usize);
    let lhs = SeriesOperator::Compose(vec![
        SeriesOperator::xd_falling_slow(n, lambda, &shift),
        SeriesOperator::x_pow(k),
    ]);
    let mid = SeriesOperator::Compose(vec![
        SeriesOperator::x_pow(k),
        SeriesOperator::xd_falling_slow(n, lambda, &pushed),
    ]);
    let expansion = SeriesOperator::Linear(
        (0..=n)
            .map(|l| {
                let weight = binomial(n, l)
                    * deg_falling(
                        &(rat_usize(k as usize) - rat_usize(m as usize) * lambda),
                        n - l,
                        lambda,
                    );
                (
                    weight,
                    SeriesOperator::xd_falling_slow(l, lambda, &rat_usize(r as usize)),
                )
            })
            .collect(),
    );
    let rhs_expanded = SeriesOperator::Compose(vec![SeriesOperator::x_pow(k), expansion]);

    for (label, lhs, rhs) in [
        ("push-through", &lhs, &mid),
        ("binomial re-expansion", &mid, &rhs_expanded),
    ] {
        let report = compare_on_monomials(id, lhs, rhs, max_degree, k as usize + 1, &sample);
        if !report.passed() {
            return IdentityReport {
                counterexample: report.counterexample.map(|cx| Counterexample {
                    context: format!("{label}: {}", cx.context),
                    ..cx
                }),
                ..report
            };
        }
        samples_run += report.samples_run;
    }
    IdentityReport::pass(id, samples_run)
}

/// Checks the full double-sum expansion
///
/// `(XD + r)_{n+m,lambda} = sum_{k<=m} sum_{l<=n} {m+r, k+r}_{r,lambda} C(n,l)
///  (k - m*lambda)_{n-l,lambda} X^k (XD + r)_{l,lambda} D^k`
///
/// on all monomials of degree `<= max_degree` (`r = 0` is the plain case).
pub fn check_op_full_expansion(
    cache: &mut StirlingCache,
    n: u32,
    m: u32,
    lambda: &Rat,
    r: u32,
    max_degree: usize,
) -> IdentityReport {
    let shift = rat_usize(r as usize);
    let lhs = SeriesOperator::xd_falling_slow(n + m, lambda, &shift);
    let mut terms = Vec::new();
    for k in 0..=m {
        for l in 0..=n {
            let weight = cache.deg_r(m, k, r, lambda)
                * binomial(n, l)
                * deg_falling(
                    &(rat_usize(k as usize) - rat_usize(m as usize) * lambda),
                    n - l,
                    lambda,
                );
            terms.push((
                weight,
                SeriesOperator::Compose(vec![
                    SeriesOperator::x_pow(k),
                    SeriesOperator::xd_falling_slow(l, lambda, &shift),
                    SeriesOperator::d_pow(k),
                ]),
            ));
        }
    }
    let rhs = SeriesOperator::Linear(terms);
    let sample = ParamSample {
        lambda: lambda.clone(),
        n,
        m,
        r,
        ..ParamSample::default()
    };
    compare_on_monomials(
        "operators.full_expansion",
        &lhs,
        &rhs,
        max_degree,
        0,
        &sample,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::stirling::StirlingCache;

    #[test]
    fn x_and_d_basics() {
        let one = TruncSeries::one(OP_VAR, 4);
        assert_eq!(apply_x(&one), monomial(1, 4));
        let c = TruncSeries::monomial(OP_VAR, rat_int(9), 0, 4);
        assert!(apply_d(&c).agrees_with(&TruncSeries::zero(OP_VAR, 4)));
    }

    #[test]
    fn commutation_relation_on_series() {
        // D(X f) - X(D f) = f
        let f = TruncSeries::from_coeffs(
            OP_VAR,
            vec![rat(1, 2), rat_int(-3), rat(7, 5), rat_int(0), rat(2, 9)],
        );
        let lhs = &apply_d(&apply_x(&f)) - &apply_x(&apply_d(&f));
        assert!(lhs.agrees_with(&f));
        assert_eq!(lhs.first_disagreement(&f), None);
    }

    #[test]
    fn xd_acts_diagonally_on_monomials() {
        // XD x^3 = 3 x^3
        let m3 = monomial(3, 6);
        let xd = SeriesOperator::xd();
        assert!(xd.apply(&m3).agrees_with(&m3.scale(&rat_int(3))));
        // (XD)_{1,lambda} with r = 0 is XD itself
        let diag = SeriesOperator::xd_falling(1, &rat(1, 3), 0);
        assert!(diag.apply(&m3).agrees_with(&m3.scale(&rat_int(3))));
    }

    #[test]
    fn falling_diagonal_n_zero_is_identity() {
        let f = TruncSeries::deg_exp(OP_VAR, &rat(2, 3), &rat(1, 2), 8);
        let op = SeriesOperator::xd_falling(0, &rat(1, 2), 3);
        assert_eq!(op.apply(&f), f);
    }

    #[test]
    fn diagonal_agrees_with_slow_composition() {
        let lambda = rat(1, 2);
        for r in 0..=3u32 {
            for n in 0..=5u32 {
                let fast = SeriesOperator::xd_falling(n, &lambda, r);
                let slow = SeriesOperator::xd_falling_slow(n, &lambda, &rat_usize(r as usize));
                // monomials
                for j in 0..=8 {
                    let f = monomial(j, 8);
                    assert!(
                        fast.apply(&f).agrees_with(&slow.apply(&f)),
                        "n={n} r={r} j={j}"
                    );
                }
                // a random-ish dense series
                let f = TruncSeries::from_coeffs(
                    OP_VAR,
                    (0..=8).map(|i| rat(2 * i - 7, i + 2)).collect(),
                );
                assert!(fast.apply(&f).agrees_with(&slow.apply(&f)));
            }
        }
    }

    #[test]
    fn stirling_expansion_check_passes() {
        let mut cache = StirlingCache::new();
        for n in 0..=4 {
            let report = check_op_stirling_expansion(&mut cache, n, &rat(1, 2), 0, 10);
            assert!(report.passed(), "n={n}: {:?}", report.counterexample);
        }
    }

    #[test]
    fn shift_factorization_check_passes() {
        let report = check_op_shift_factorization(2, 3, &rat(1, 3), 0, 10);
        assert!(report.passed());
        // m = 0 and n = 0 degenerate to trivial equalities
        assert!(check_op_shift_factorization(3, 0, &rat(1, 3), 1, 6).passed());
        assert!(check_op_shift_factorization(0, 3, &rat(1, 3), 1, 6).passed());
    }

    #[test]
    fn pushthrough_check_passes() {
        // includes (XD)X^k = X^k(XD + k) via n = 1, m = r = 0
        assert!(check_op_pushthrough(1, 0, 1, &rat(1, 2), 0, 8).passed());
        assert!(check_op_pushthrough(2, 1, 3, &rat(-2, 5), 2, 8).passed());
        assert!(check_op_pushthrough(2, 1, 0, &rat(1, 5), 1, 8).passed());
    }

    #[test]
    fn full_expansion_check_passes() {
        let mut cache = StirlingCache::new();
        assert!(check_op_full_expansion(&mut cache, 1, 1, &rat(1, 2), 0, 8).passed());
        assert!(check_op_full_expansion(&mut cache, 2, 2, &rat(-1, 3), 2, 8).passed());
        // m = 0 collapses to the factorization, n = 0 to the expansion
        assert!(check_op_full_expansion(&mut cache, 2, 0, &rat(1, 2), 1, 8).passed());
        assert!(check_op_full_expansion(&mut cache, 0, 2, &rat(1, 2), 1, 8).passed());
    }

    #[test]
    fn mismatching_operators_report_counterexamples() {
        let lhs = SeriesOperator::xd();
        let rhs = SeriesOperator::Identity;
        let report =
            compare_on_monomials("test.mismatch", &lhs, &rhs, 4, 0, &ParamSample::default());
        assert!(!report.passed());
        let cx = report.counterexample.unwrap();
        assert_eq!((cx.lhs.as_str(), cx.rhs.as_str()), ("0", "1"));
    }
}

//! Closed-form evaluation of the Bell-type and Fubini-type families.
//!
//! The two-variable families carry a transcendental prefactor
//! `e_lambda^(y-1)(x)` that is irrational at generic rational inputs.
//! Everything stored or compared here is the normalized value with that
//! prefactor removed (it equals 1 at `y = 1`), which keeps the whole test
//! surface in exact rational arithmetic. Identities are restated in
//! normalized form before checking; the prefactors cancel in all of them.
//!
//! Fubini values have no closed finite sum in the two-variable order-k case
//! and are computed through the series engine instead.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::comb::{deg_falling, factorial_rat};
use crate::error::{Error, Result};
use crate::rational::{rat_to_f64, rat_usize, Rat};
use crate::series::{recip_one_plus_ax_pow, TruncSeries};
use crate::stirling::{classical_stirling2, RecurrenceVariant, StirlingCache};

/// Variable tag for series in `x` (shared with the operator calculus).
pub const X_VAR: char = 'x';
/// Variable tag for series in the EGF variable `t`.
pub const T_VAR: char = 't';

/// Argument bundle for a family evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyParams {
    pub n: u32,
    pub lambda: Rat,
    pub x: Rat,
    pub y: Rat,
    pub r: u32,
}

impl FamilyParams {
    /// `y` defaults to 1 and `r` to 0.
    pub fn new(n: u32, lambda: Rat, x: Rat) -> Self {
        Self {
            n,
            lambda,
            x,
            y: Rat::one(),
            r: 0,
        }
    }

    pub fn with_y(mut self, y: Rat) -> Self {
        self.y = y;
        self
    }

    pub fn with_r(mut self, r: u32) -> Self {
        self.r = r;
        self
    }

    /// The normalization variable `u = x / (1 + lambda*x)`; errors on the
    /// pole `1 + lambda*x = 0`.
    pub fn u(&self) -> Result<Rat> {
        let denom = Rat::one() + &self.lambda * &self.x;
        if denom.is_zero() {
            return Err(Error::NormalizationPole);
        }
        Ok(&self.x / denom)
    }
}

/// Family evaluator sharing one memoized Stirling cache. Triangles extend on
/// demand under `&mut self`; clone or create one evaluator per worker when
/// sweeping in parallel.
#[derive(Debug, Default)]
pub struct Evaluator {
    stirling: StirlingCache,
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Evaluator with a deliberately wrong Stirling recurrence, used by the
    /// mutation-sensitivity checks.
    pub fn with_variant(variant: RecurrenceVariant) -> Self {
        Self {
            stirling: StirlingCache::with_variant(variant),
        }
    }

    pub fn stirling_mut(&mut self) -> &mut StirlingCache {
        &mut self.stirling
    }

    /// Degenerate Bell polynomial `phi_{n,lambda}(x) = sum_k {n,k}_lambda x^k`.
    pub fn deg_bell_phi(&mut self, n: u32, lambda: &Rat, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        let mut xk = Rat::one();
        for k in 0..=n {
            acc += self.stirling.deg(n, k, lambda) * &xk;
            xk *= x;
        }
        acc
    }

    /// `Bel_{n,lambda}(x) = sum_k (1)_{k,lambda} x^k {n,k}_lambda`.
    pub fn fully_deg_bel(&mut self, n: u32, lambda: &Rat, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        let mut xk = Rat::one();
        let mut falling = Rat::one();
        for k in 0..=n {
            if k > 0 {
                falling *= Rat::one() - rat_usize(k as usize - 1) * lambda;
                xk *= x;
            }
            acc += self.stirling.deg(n, k, lambda) * &xk * &falling;
        }
        acc
    }

    /// `B_{n,lambda}(x) = sum_k (1)_{k,lambda} u^k {n,k}_lambda` with
    /// `u = x/(1+lambda*x)`. Errors on the normalization pole.
    pub fn fully_deg_b(&mut self, n: u32, lambda: &Rat, x: &Rat) -> Result<Rat> {
        self.r_b_norm(n, lambda, x, &Rat::one(), 0)
    }

    /// Normalized two-variable value
    /// `beta_{n,lambda}(x,y) = sum_k {n,k}_lambda (y)_{k,lambda} u^k`;
    /// at `y = 1` this is `B_{n,lambda}(x)` itself.
    pub fn two_var_b_norm(&mut self, n: u32, lambda: &Rat, x: &Rat, y: &Rat) -> Result<Rat> {
        self.r_b_norm(n, lambda, x, y, 0)
    }

    /// Normalized two-variable r-value
    /// `beta^(r)_{n,lambda}(x,y) = sum_k (y)_{k,lambda} u^k {n+r,k+r}_{r,lambda}`.
    /// `r = 0` reduces to [`Self::two_var_b_norm`], `y = 1` to the
    /// one-variable r-family.
    pub fn r_b_norm(&mut self, n: u32, lambda: &Rat, x: &Rat, y: &Rat, r: u32) -> Result<Rat> {
        let u = FamilyParams::new(n, lambda.clone(), x.clone()).u()?;
        let mut acc = Rat::zero();
        let mut uk = Rat::one();
        let mut falling = Rat::one();
        for k in 0..=n {
            if k > 0 {
                falling *= y - rat_usize(k as usize - 1) * lambda;
                uk *= &u;
            }
            acc += self.stirling.deg_r(n, k, r, lambda) * &uk * &falling;
        }
        Ok(acc)
    }

    /// Two-variable degenerate Fubini polynomial of order `k`:
    /// `n! [t^n] (1 - x(e_lambda(t)-1))^(-k) e_lambda^y(t)`, computed through
    /// the series engine. The order-0 convention is the empty product, so
    /// `F^(0)` collapses to `(y)_{n,lambda}`.
    pub fn two_var_deg_fubini(
        &mut self,
        n: u32,
        order_k: u32,
        lambda: &Rat,
        x: &Rat,
        y: &Rat,
    ) -> Rat {
        let order = n as usize;
        let e = TruncSeries::deg_exp(T_VAR, &Rat::one(), lambda, order);
        let shifted = &e - &TruncSeries::one(T_VAR, order);
        let base = &TruncSeries::one(T_VAR, order) - &shifted.scale(x);
        let inv = base.reciprocal().expect("constant term is 1").pow(order_k);
        let full = &inv * &TruncSeries::deg_exp(T_VAR, y, lambda, order);
        full.egf_coeff(n as usize).expect("exact up to n")
    }

    /// Power-series expansion in `x` of the rational function
    /// `x -> beta^(r)_{n,lambda}(x,y)`, via the binomial expansion of
    /// `(1 + lambda*x)^(-k)`. Formal in `x`, so no pole can occur.
    pub fn beta_series(
        &mut self,
        n: u32,
        lambda: &Rat,
        y: &Rat,
        r: u32,
        order: usize,
    ) -> TruncSeries {
        let mut acc = TruncSeries::zero(X_VAR, order);
        let mut falling = Rat::one();
        for k in 0..=n {
            if k > 0 {
                falling *= y - rat_usize(k as usize - 1) * lambda;
            }
            let c = self.stirling.deg_r(n, k, r, lambda) * &falling;
            if c.is_zero() || k as usize > order {
                continue;
            }
            let tail = recip_one_plus_ax_pow(X_VAR, lambda, k, order - k as usize);
            let term = TruncSeries::from_coeffs(
                X_VAR,
                (0..=order)
                    .map(|j| {
                        if j < k as usize {
                            Rat::zero()
                        } else {
                            &c * tail.coeff(j - k as usize)
                        }
                    })
                    .collect(),
            );
            acc = &acc + &term;
        }
        acc
    }
}

/// Classical Bell polynomial `phi_n(x) = sum_k {n,k} x^k`.
pub fn classical_bell(n: u32, x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    let mut xk = Rat::one();
    for k in 0..=n {
        acc += classical_stirling2(n, k) * &xk;
        xk *= x;
    }
    acc
}

/// Classical Fubini polynomial `F_n(x) = sum_k {n,k} k! x^k`.
pub fn classical_fubini(n: u32, x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    let mut xk = Rat::one();
    for k in 0..=n {
        acc += classical_stirling2(n, k) * factorial_rat(k) * &xk;
        xk *= x;
    }
    acc
}

/// Normalized classical two-variable Bell polynomial, computed as
/// `n! [t^n] e^(x*y*(e^t - 1))` through the series engine. Equals
/// `sum_k {n,k} y^k x^k`; at `y = 1` this is `phi_n(x)`.
pub fn classical_two_var_bell(n: u32, x: &Rat, y: &Rat) -> Rat {
    classical_r_bell(n, x, y, 0)
}

/// Normalized classical two-variable r-Bell polynomial:
/// `n! [t^n] e^(x*y*(e^t - 1)) e^(r*t)`; equals
/// `sum_k {n+r,k+r}_r y^k x^k`.
pub fn classical_r_bell(n: u32, x: &Rat, y: &Rat, r: u32) -> Rat {
    let order = n as usize;
    let e = TruncSeries::exp(T_VAR, order);
    let inner = (&e - &TruncSeries::one(T_VAR, order)).scale(&(x * y));
    let outer = TruncSeries::exp('u', order);
    let composed = outer.compose(&inner).expect("inner constant term is zero");
    let with_r =
        &composed * &TruncSeries::deg_exp(T_VAR, &rat_usize(r as usize), &Rat::zero(), order);
    with_r.egf_coeff(order).expect("exact up to n")
}

/// Partial sum of the Dobinski numerator series:
/// `sum_{k=0..K} (y)_{k,lambda} (r+k)_{n,lambda} x^k / k!`, without the
/// `1/e_lambda(x)` prefactor.
pub fn dobinski_partial(params: &FamilyParams, terms: u32) -> Rat {
    let FamilyParams { n, lambda, x, y, r } = params;
    let mut acc = Rat::zero();
    // a_k = (y)_{k,lambda} x^k / k!
    let mut a = Rat::one();
    for k in 0..=terms {
        let weight = deg_falling(
            &(rat_usize(*r as usize) + rat_usize(k as usize)),
            *n,
            lambda,
        );
        acc += &a * weight;
        a = a * (y - rat_usize(k as usize) * lambda) * x / rat_usize(k as usize + 1);
    }
    acc
}

/// One step of the demonstration-mode floating Dobinski evaluation.
#[derive(Debug, Clone, Copy)]
pub struct DobinskiStep {
    pub k: u32,
    pub partial: f64,
}

/// Trace of the floating Dobinski evaluation against the exact finite-sum
/// value. Demonstration only: double precision, geometric convergence under
/// the `|lambda*x| < 1` domain guard.
#[derive(Debug, Clone)]
pub struct DobinskiTrace {
    pub steps: Vec<DobinskiStep>,
    pub approx: f64,
    pub exact: f64,
    pub rel_error: f64,
}

/// Floating partial sums of the Dobinski-like formula
/// `B^(r)_{n,lambda}(x,y) = (1/e_lambda(x)) sum_k (y)_{k,lambda} (r+k)_{n,lambda} x^k / k!`
/// compared against the exact value `e_lambda^(y-1)(x) * beta^(r)_{n,lambda}(x,y)`
/// (whose prefactor is 1 at `y = 1`). Requires `|lambda*x| < 1`.
pub fn dobinski_demo(
    ev: &mut Evaluator,
    params: &FamilyParams,
    terms: u32,
) -> Result<DobinskiTrace> {
    let FamilyParams { n, lambda, x, y, r } = params;
    let magnitude = (lambda * x).abs();
    if magnitude >= Rat::one() {
        return Err(Error::DomainGuard {
            magnitude: magnitude.to_string(),
        });
    }

    let lambda_f = rat_to_f64(lambda);
    let x_f = rat_to_f64(x);
    let y_f = rat_to_f64(y);
    let inv_e = if lambda.is_zero() {
        (-x_f).exp()
    } else {
        (1.0 + lambda_f * x_f).powf(-1.0 / lambda_f)
    };
    let prefactor = if lambda.is_zero() {
        (x_f * (y_f - 1.0)).exp()
    } else {
        (1.0 + lambda_f * x_f).powf((y_f - 1.0) / lambda_f)
    };

    let beta = ev.r_b_norm(*n, lambda, x, y, *r)?;
    let exact = prefactor * rat_to_f64(&beta);

    let mut steps = Vec::with_capacity(terms as usize + 1);
    let mut sum = 0.0;
    let mut a = 1.0; // (y)_{k,lambda} x^k / k!
    for k in 0..=terms {
        let mut weight = 1.0;
        for j in 0..*n {
            weight *= (r + k) as f64 - j as f64 * lambda_f;
        }
        sum += a * weight;
        steps.push(DobinskiStep {
            k,
            partial: inv_e * sum,
        });
        a = a * (y_f - k as f64 * lambda_f) * x_f / (k as f64 + 1.0);
    }
    let approx = steps.last().expect("at least one term").partial;
    let rel_error = if exact == 0.0 {
        approx.abs()
    } else {
        ((approx - exact) / exact).abs()
    };
    Ok(DobinskiTrace {
        steps,
        approx,
        exact,
        rel_error,
    })
}

/// The families the CLI can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `B_{n,lambda}(x)`.
    Bell,
    /// Normalized `beta_{n,lambda}(x,y)`.
    BellTwoVar,
    /// Normalized `beta^(r)_{n,lambda}(x,y)`.
    BellR,
    /// Classical `phi_n(x)`.
    Phi,
    /// Degenerate `phi_{n,lambda}(x)`.
    PhiDeg,
    /// `Bel_{n,lambda}(x)`.
    Bel,
    /// Two-variable degenerate Fubini of order `r`.
    Fubini,
    /// Classical `F_n(x)`.
    FubiniClassical,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Bell,
        Family::BellTwoVar,
        Family::BellR,
        Family::Phi,
        Family::PhiDeg,
        Family::Bel,
        Family::Fubini,
        Family::FubiniClassical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Bell => "bell",
            Family::BellTwoVar => "bell-two-var",
            Family::BellR => "bell-r",
            Family::Phi => "phi",
            Family::PhiDeg => "phi-deg",
            Family::Bel => "bel",
            Family::Fubini => "fubini",
            Family::FubiniClassical => "fubini-classical",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }

    /// Families whose unnormalized value carries the `e_lambda^(y-1)(x)`
    /// prefactor that the evaluator factors off.
    pub fn is_normalized(self) -> bool {
        matches!(self, Family::BellTwoVar | Family::BellR)
    }
}

/// A family evaluation result. For normalized families the value is the
/// finite sum with the prefactor `e_lambda^(y-1)(x)` factored off, which at
/// `y = 1` is the plain polynomial value itself.
#[derive(Debug, Clone)]
pub struct NormalizedBellValue {
    pub family: Family,
    pub params: FamilyParams,
    pub value: Rat,
}

impl NormalizedBellValue {
    /// Human-readable name of the factored-off prefactor, when it is not 1.
    pub fn omitted_prefactor(&self) -> Option<String> {
        (self.family.is_normalized() && !self.params.y.is_one()).then(|| {
            format!(
                "e_lambda^(y-1)(x) with lambda={}, x={}, y={}",
                self.params.lambda, self.params.x, self.params.y
            )
        })
    }

    pub fn value_f64(&self) -> Option<f64> {
        self.value.to_f64()
    }
}

/// Dispatches a family evaluation; the Fubini order rides on `params.r`.
pub fn eval_family(
    ev: &mut Evaluator,
    family: Family,
    params: &FamilyParams,
) -> Result<NormalizedBellValue> {
    let FamilyParams { n, lambda, x, y, r } = params;
    let value = match family {
        Family::Bell => ev.fully_deg_b(*n, lambda, x)?,
        Family::BellTwoVar => ev.two_var_b_norm(*n, lambda, x, y)?,
        Family::BellR => ev.r_b_norm(*n, lambda, x, y, *r)?,
        Family::Phi => classical_bell(*n, x),
        Family::PhiDeg => ev.deg_bell_phi(*n, lambda, x),
        Family::Bel => ev.fully_deg_bel(*n, lambda, x),
        Family::Fubini => ev.two_var_deg_fubini(*n, *r, lambda, x, y),
        Family::FubiniClassical => classical_fubini(*n, x),
    };
    Ok(NormalizedBellValue {
        family,
        params: params.clone(),
        value,
    })
}

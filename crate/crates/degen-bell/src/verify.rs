//! The identity harness: every identity between the families is restated
//! as an exact rational check over deterministic parameter samples, with
//! exact counterexamples on failure. No tolerances appear anywhere in this module.
//!
//! # Normalized restatements
//!
//! The two-variable families carry the transcendental prefactor
//! `e_lambda^(y-1)(x)`, so the recurrences are checked in normalized form.
//! Writing `B(x,y) = e_lambda^(y-1)(x) * beta(x,y)` and using
//! `e_lambda^(-j*lambda)(x) = (1+lambda*x)^(-j)`, the factor `x^j` which
//! multiplies `B_k(x, y-j*lambda)` on the right-hand side becomes
//! `u^j = (x/(1+lambda*x))^j` next to `beta_k(x, y-j*lambda)`, and the
//! prefactor `e_lambda^(y-1)(x)` cancels between the two sides:
//!
//! ```text
//! beta_{n+m}(x,y) = sum_{j<=m} sum_{k<=n} {m,j}_lambda C(n,k)
//!                   (j - m*lambda)_{n-k,lambda} (y)_{j,lambda} u^j
//!                   beta_k(x, y - j*lambda)
//! ```
//!
//! and identically for the r-variant with `{m+r, k+r}_{r,lambda}` weights.
//! The Dobinski-like formulas become prefactor-free formal identities in
//! `x`: `e_lambda^y(x) * beta^(r)_n(x,y)` must equal the series with
//! coefficient `(y)_{k,lambda} (r+k)_{n,lambda} / k!` at `x^k`.
//!
//! # Sampling
//!
//! Samples are drawn deterministically from the configured seed (one stream
//! per identity id, so adding an identity never shifts another's samples).
//! The deformation parameter mixes a fixed pool of signed small rationals
//! with random ones; `x` is redrawn while it hits the normalization pole.
//! The first few samples of each sweep are pinned to the degenerate corners
//! (`lambda = 0`, `m = 0`, `n = 0`, ...) so the limit statements are always
//! exercised.

use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bell::{classical_bell, classical_fubini, classical_r_bell, Evaluator, X_VAR};
use crate::comb::{binomial, deg_falling, factorial_rat};
use crate::error::{Error, Result};
use crate::operators::{
    apply_d, apply_x, check_op_full_expansion, check_op_pushthrough, check_op_shift_factorization,
    check_op_stirling_expansion, operator_bell, SeriesOperator,
};
use crate::rational::{format_rat, pow_rat, rat_usize, Rat};
use crate::report::{Counterexample, IdentityReport, ParamSample, Status};
use crate::series::{deg_exp_series, TruncSeries};
use crate::stirling::{
    classical_stirling2, deg_r_stirling2_oracle, deg_stirling2_oracle, RecurrenceVariant,
    StirlingTriangle,
};

/// Acceptance-pinned bounds for the Stirling oracle sweep.
const ORACLE_N_MAX: u32 = 12;
const ORACLE_R_N_MAX: u32 = 10;
const ORACLE_R_MAX: u32 = 3;
/// Acceptance-pinned bound for the EGF definitional sweeps.
const EGF_N_MAX: u32 = 10;
/// Acceptance-pinned exhaustive bound for the classical Spivey recurrence.
const SPIVEY_CLASSICAL_MAX: u32 = 8;
/// Acceptance-pinned index bound for the operator and Dobinski series
/// sweeps.
const SWEEP_N_MAX: u32 = 8;

/// Deliberate defect injected into the production path, for proving the
/// suite can detect one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Flip the sign of the `lambda` term in the Stirling triangle
    /// recurrence.
    FlipStirlingLambdaSign,
}

/// Suite configuration. Defaults: seed 20240, 50 samples per identity,
/// `n, m <= 6`, `r <= 3`, truncation order 24, no mutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub samples: usize,
    pub n_max: u32,
    pub m_max: u32,
    pub r_max: u32,
    pub order: usize,
    pub mutation: Option<Mutation>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 20240,
            samples: 50,
            n_max: 6,
            m_max: 6,
            r_max: 3,
            order: 24,
            mutation: None,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if self.order < (self.n_max + self.m_max).max(SWEEP_N_MAX) as usize {
            return Err(Error::Config(format!(
                "order {} is too small for the index bounds",
                self.order
            )));
        }
        Ok(())
    }

    fn evaluator(&self) -> Evaluator {
        match self.mutation {
            None => Evaluator::new(),
            Some(Mutation::FlipStirlingLambdaSign) => {
                Evaluator::with_variant(RecurrenceVariant::FlipLambdaSign)
            }
        }
    }
}

/// Stable string hash (FNV-1a) for per-identity seed derivation; must never
/// change, or old seeds stop reproducing old reports.
fn stable_hash(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

struct Sampler {
    rng: ChaCha8Rng,
    seed: u64,
}

impl Sampler {
    fn new(cfg: &VerifyConfig, id: &str) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed ^ stable_hash(id)),
            seed: cfg.seed,
        }
    }

    fn small_rat(&mut self) -> Rat {
        let numer = self.rng.gen_range(-9..=9i64);
        let denom = self.rng.gen_range(1..=9i64);
        crate::rational::rat(numer, denom)
    }

    fn lambda(&mut self) -> Rat {
        const POOL: [(i64, i64); 8] = [
            (1, 1),
            (-1, 1),
            (1, 2),
            (-1, 2),
            (1, 3),
            (-1, 3),
            (2, 1),
            (5, 7),
        ];
        let i = self.rng.gen_range(0..POOL.len() + 4);
        match POOL.get(i) {
            Some(&(p, q)) => crate::rational::rat(p, q),
            None => self.small_rat(),
        }
    }

    /// Draws a full sample; `x` is redrawn while `1 + lambda*x = 0`.
    fn sample(&mut self, cfg: &VerifyConfig) -> ParamSample {
        let lambda = self.lambda();
        let x = loop {
            let x = self.small_rat();
            if !(Rat::one() + &lambda * &x).is_zero() {
                break x;
            }
        };
        ParamSample {
            lambda,
            x,
            y: self.small_rat(),
            n: self.rng.gen_range(0..=cfg.n_max),
            m: self.rng.gen_range(0..=cfg.m_max),
            r: self.rng.gen_range(0..=cfg.r_max),
            seed: self.seed,
        }
    }

    /// `cfg.samples` draws with the leading ones pinned to corner cases.
    fn samples(&mut self, cfg: &VerifyConfig) -> Vec<ParamSample> {
        let mut out: Vec<ParamSample> = (0..cfg.samples).map(|_| self.sample(cfg)).collect();
        if let Some(s) = out.get_mut(0) {
            s.lambda = Rat::zero();
        }
        if let Some(s) = out.get_mut(1) {
            s.m = 0;
        }
        if let Some(s) = out.get_mut(2) {
            s.n = 0;
        }
        if let Some(s) = out.get_mut(3) {
            s.y = Rat::one();
            s.r = 0;
        }
        out
    }

    fn index(&mut self, max: u32) -> u32 {
        self.rng.gen_range(0..=max)
    }

    fn series(&mut self, order: usize) -> TruncSeries {
        TruncSeries::from_coeffs(X_VAR, (0..=order).map(|_| self.small_rat()).collect())
    }
}

fn timed(f: impl FnOnce() -> IdentityReport) -> IdentityReport {
    let start = Instant::now();
    let mut report = f();
    report.elapsed = start.elapsed();
    report
}

fn value_check(
    id: &str,
    runs: usize,
    sample: &ParamSample,
    lhs: &Rat,
    rhs: &Rat,
    context: &str,
) -> Option<IdentityReport> {
    (lhs != rhs).then(|| {
        IdentityReport::fail(
            id,
            runs,
            Counterexample {
                sample: sample.clone(),
                lhs: format_rat(lhs),
                rhs: format_rat(rhs),
                context: context.to_string(),
            },
        )
    })
}

fn series_check(
    id: &str,
    runs: usize,
    sample: &ParamSample,
    lhs: &TruncSeries,
    rhs: &TruncSeries,
    context: &str,
) -> Option<IdentityReport> {
    lhs.first_disagreement(rhs).map(|(idx, a, b)| {
        IdentityReport::fail(
            id,
            runs,
            Counterexample {
                sample: sample.clone(),
                lhs: format_rat(&a),
                rhs: format_rat(&b),
                context: format!("{context}; coefficient of {}^{idx}", lhs.var()),
            },
        )
    })
}

// ---------------------------------------------------------------------------
// Stirling oracle equivalence and classical regression
// ---------------------------------------------------------------------------

/// Triangle recurrence vs. basis-conversion oracle, as exact polynomials in
/// the deformation parameter: base triangle to `n <= 12`, r-triangles to
/// `n <= 10`, `r <= 3`.
pub fn verify_stirling_oracle(ev: &mut Evaluator, cfg: &VerifyConfig) -> IdentityReport {
    let id = "stirling.recurrence_vs_oracle";
    let sample = ParamSample {
        seed: cfg.seed,
        ..ParamSample::default()
    };
    let mut runs = 0;
    let mut sweep = |r: u32, n_max: u32, ev: &mut Evaluator| -> Option<IdentityReport> {
        for n in 0..=n_max {
            let oracle = if r == 0 {
                deg_stirling2_oracle(n)
            } else {
                deg_r_stirling2_oracle(n, r)
            };
            for k in 0..=n {
                runs += 1;
                let ours = ev.stirling_mut().deg_r_sym(n, k, r);
                if ours != oracle[k as usize] {
                    let sample = ParamSample {
                        n,
                        r,
                        ..sample.clone()
                    };
                    return Some(IdentityReport::fail(
                        id,
                        runs,
                        Counterexample {
                            sample,
                            lhs: ours.to_string(),
                            rhs: oracle[k as usize].to_string(),
                            context: format!("entry (n={n}, k={k}, r={r})"),
                        },
                    ));
                }
            }
        }
        None
    };
    if let Some(fail) = sweep(0, ORACLE_N_MAX, ev) {
        return fail;
    }
    for r in 1..=ORACLE_R_MAX {
        if let Some(fail) = sweep(r, ORACLE_R_N_MAX, ev) {
            return fail;
        }
    }
    IdentityReport::pass(id, runs)
}

/// The degenerate triangle at `lambda = 0` against the independently
/// computed classical numbers.
pub fn verify_stirling_lambda_zero(ev: &mut Evaluator, _cfg: &VerifyConfig) -> IdentityReport {
    let id = "stirling.lambda_zero";
    let mut runs = 0;
    for n in 0..=ORACLE_N_MAX {
        for k in 0..=n {
            runs += 1;
            let deg = ev.stirling_mut().deg(n, k, &Rat::zero());
            let classical = classical_stirling2(n, k);
            let sample = ParamSample {
                n,
                ..ParamSample::default()
            };
            if let Some(fail) = value_check(
                id,
                runs,
                &sample,
                &deg,
                &classical,
                &format!("entry (n={n}, k={k})"),
            ) {
                return fail;
            }
        }
    }
    IdentityReport::pass(id, runs)
}

/// Frozen classical Bell numbers through every `lambda = 0` path.
/// The constants were derived by exhaustive set-partition enumeration
/// (re-derived in the acceptance tests).
pub fn verify_classical_bell_numbers(ev: &mut Evaluator, _cfg: &VerifyConfig) -> IdentityReport {
    let id = "classical.bell_numbers";
    const BELL: [i64; 9] = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
    let one = Rat::one();
    let zero = Rat::zero();
    let mut runs = 0;
    for (n, &b) in BELL.iter().enumerate() {
        let n = n as u32;
        let expected = crate::rational::rat_int(b);
        let sample = ParamSample {
            n,
            ..ParamSample::default()
        };
        for (label, value) in [
            ("phi_n(1)", classical_bell(n, &one)),
            ("phi_{n,0}(1)", ev.deg_bell_phi(n, &zero, &one)),
            ("Bel_{n,0}(1)", ev.fully_deg_bel(n, &zero, &one)),
            (
                "B_{n,0}(1)",
                ev.fully_deg_b(n, &zero, &one).expect("no pole at lambda=0"),
            ),
        ] {
            runs += 1;
            if let Some(fail) = value_check(id, runs, &sample, &value, &expected, label) {
                return fail;
            }
        }
    }
    IdentityReport::pass(id, runs)
}

/// Frozen classical Fubini numbers through the `lambda = 0` paths.
/// Constants derived by ordered-set-partition enumeration.
pub fn verify_classical_fubini_numbers(ev: &mut Evaluator, _cfg: &VerifyConfig) -> IdentityReport {
    let id = "classical.fubini_numbers";
    const FUBINI: [i64; 5] = [1, 1, 3, 13, 75];
    let one = Rat::one();
    let zero = Rat::zero();
    let mut runs = 0;
    for (n, &expected) in FUBINI.iter().enumerate() {
        let n = n as u32;
        let expected = crate::rational::rat_int(expected);
        let sample = ParamSample {
            n,
            ..ParamSample::default()
        };
        for (label, value) in [
            ("F_n(1)", classical_fubini(n, &one)),
            (
                "F^(1)_{n,0}(1,0)",
                ev.two_var_deg_fubini(n, 1, &zero, &one, &zero),
            ),
        ] {
            runs += 1;
            if let Some(fail) = value_check(id, runs, &sample, &value, &expected, label) {
                return fail;
            }
        }
    }
    IdentityReport::pass(id, runs)
}

// ---------------------------------------------------------------------------
// EGF definitional checks
// ---------------------------------------------------------------------------

/// `(e_lambda(t) - 1)^k / k! * e_lambda^r(t)` as a series, exact to `order`.
fn stirling_egf(lambda: &Rat, k: u32, r: u32, order: usize) -> TruncSeries {
    let e = deg_exp_series(&Rat::one(), lambda, order);
    let shifted = &e - &TruncSeries::one('t', order);
    let base = shifted.pow(k).scale(&(Rat::one() / factorial_rat(k)));
    &base * &deg_exp_series(&rat_usize(r as usize), lambda, order)
}

/// The normalized EGF `e_lambda^y(u * (e_lambda(t) - 1)) * e_lambda^r(t)`
/// with `u = x/(1+lambda*x)`: the generating function of the normalized
/// values `beta^(r)_{n,lambda}(x,y)`.
fn normalized_bell_egf(lambda: &Rat, u: &Rat, y: &Rat, r: u32, order: usize) -> TruncSeries {
    let e = deg_exp_series(&Rat::one(), lambda, order);
    let inner = (&e - &TruncSeries::one('t', order)).scale(u);
    let outer = TruncSeries::deg_exp('z', y, lambda, order);
    let composed = outer.compose(&inner).expect("inner constant term is zero");
    &composed * &deg_exp_series(&rat_usize(r as usize), lambda, order)
}

/// Degenerate (r-)Stirling numbers against their EGF: `{n+r,k+r}_{r,lambda}`
/// must be `n! [t^n] (e_lambda(t)-1)^k/k! * e_lambda^r(t)`.
pub fn verify_egf_stirling(
    ev: &mut Evaluator,
    cfg: &VerifyConfig,
    r_variant: bool,
) -> IdentityReport {
    let id = if r_variant {
        "egf.r_stirling"
    } else {
        "egf.stirling"
    };
    let mut sampler = Sampler::new(cfg, id);
    let order = EGF_N_MAX as usize;
    let mut runs = 0;
    for _ in 0..cfg.samples {
        let mut sample = sampler.sample(cfg);
        if !r_variant {
            sample.r = 0;
        }
        runs += 1;
        for k in 0..=EGF_N_MAX {
            let egf = stirling_egf(&sample.lambda, k, sample.r, order);
            for n in k..=EGF_N_MAX {
                let finite = ev.stirling_mut().deg_r(n, k, sample.r, &sample.lambda);
                let coeff = egf.egf_coeff(n as usize).expect("order covers n");
                if let Some(fail) = value_check(
                    id,
                    runs,
                    &sample,
                    &finite,
                    &coeff,
                    &format!("entry (n={n}, k={k}, r={})", sample.r),
                ) {
                    return fail;
                }
            }
        }
    }
    IdentityReport::pass(id, runs)
}

/// `Bel_{n,lambda}(x)` against `n! [t^n] e_lambda(x(e_lambda(t)-1))`.
pub fn verify_egf_bel(ev: &mut Evaluator, cfg: &VerifyConfig) -> IdentityReport {
    let id = "egf.bel";
    let mut sampler = Sampler::new(cfg, id);
    let order = EGF_N_MAX as usize;
    let mut runs = 0;
    for _ in 0..cfg.samples {
        let sample = sampler.sample(cfg);
        runs += 1;
        let e = deg_exp_series(&Rat::one(), &sample.lambda, order);
        let inner = (&e - &TruncSeries::one('t', order)).scale(&sample.x);
        let outer = TruncSeries::deg_exp('z', &Rat::one(), &sample.lambda, order);
        let egf = outer.compose(&inner).expect("inner constant term is zero");
        for n in 0..=EGF_N_MAX {
            let finite = ev.fully_deg_bel(n, &sample.lambda, &sample.x);
            let coeff = egf.egf_coeff(n as usize).expect("order covers n");
            if let Some(fail) = value_check(id, runs, &sample, &finite, &coeff, &format!("n={n}")) {
                return fail;
            }
        }
    }
    IdentityReport::pass(id, runs)
}

/// The normalized families against their normalized EGFs, for each of the
/// four defining generating functions (plain, two-variable, r, two-variable r).
pub fn verify_egf_bell_families(
    ev: &mut Evaluator,
    cfg: &VerifyConfig,
    id: &'static str,
) -> IdentityReport {
    let mut sampler = Sampler::new(cfg, id);
    let order = EGF_N_MAX as usize;
    let mut runs = 0;
    for _ in 0..cfg.samples {
        let mut sample = sampler.sample(cfg);
        match id {
            "egf.bell_b" => {
                sample.y = Rat::one();
                sample.r = 0;
            }
            "egf.bell_two_var" => sample.r = 0,
            "egf.r_bell" => sample.y = Rat::one(),
            "egf.r_bell_two_var" => {}
            _ => unreachable!("unknown egf id {id}"),
        }
        runs += 1;
        let u = (&sample.x) / (Rat::one() + &sample.lambda * &sample.x);
        let egf = normalized_bell_egf(&sample.lambda, &u, &sample.y, sample.r, order);
        for n in 0..=EGF_N_MAX {
            let finite = ev
                .r_b_norm(n, &sample.lambda, &sample.x, &sample.y, sample.r)
                .expect("sampler avoids the pole");
            let coeff = egf.egf_coeff(n as usize).expect("order covers n");
            if let Some(fail) = value_check(id, runs, &sample, &finite, &coeff, &format!("n={n}")) {
                return fail;
            }
        }
    }
    IdentityReport::pass(id, runs)
}

// ---------------------------------------------------------------------------
// Spivey-type recurrences
// ---------------------------------------------------------------------------

/// Classical Spivey recurrence for Bell numbers, exhaustive over
/// `n, m <= 8`, with the empty-product convention `0^0 = 1`.
pub fn verify_spivey_classical(n_max: u32, m_max: u32) -> IdentityReport {
    let id = "spivey.classical";
    let one = Rat::one();
    let mut runs = 0;
    for n in 0..=n_max {
        for m in 0..=m_max {
            runs += 1;
            let lhs = classical_bell(n + m, &one);
            let mut rhs = Rat::zero();
            for k in 0..=n {
                for j in 0..=m {
                    rhs += pow_rat(&rat_usize(j as usize), n - k)
                        * classical_stirling2(m, j)
                        * binomial(n, k)
                        * classical_bell(k, &one);
                }
            }
            let sample = ParamSample {
                n,
                m,
                ..ParamSample::default()
            };
            if let Some(fail) = value_check(id, runs, &sample, &lhs, &rhs, "Bell numbers") {
                return fail;
            }
        }
    }
    IdentityReport::pass(id, runs)
}

/// Spivey recurrence for the degenerate Bell polynomials:
/// `phi_{n+m,lambda}(x) = sum_{k<=m} sum_{l<=n} C(n,l) {m,k}_lambda
///  (k - m*lambda)_{n-l,lambda} x^k phi_{l,lambda}(x)`.
pub fn verify_spivey_deg_phi(ev: &mut Evaluator, cfg: &VerifyConfig) -> IdentityReport {
    let id = "spivey.deg_phi";
    let mut sampler = Sampler::new(cfg, id);
    let mut runs = 0;
    for sample in sampler.samples(cfg) {
        runs += 1;
        let ParamSample {
            lambda, x, n, m, ..
        } = &sample;
        let lhs = ev.deg_bell_phi(n + m, lambda, x);
        let mut rhs = Rat::zero();
        for k in 0..=*m {
            let stirling = ev.stirling_mut().deg(*m, k, lambda);
            let shift = rat_usize(k as usize) - rat_usize(*m as usize) * lambda;
            for l in 0..=*n {
                rhs += binomial(*n, l)
                    * &stirling
                    * deg_falling(&shift, n - l, lambda)
                    * pow_rat(x, k)
                    * ev.deg_bell_phi(l, lambda, x);
            }
        }
        if let Some(fail) = value_check(id, runs, &sample, &lhs, &rhs, "recurrence") {
            return fail;
        }
    }
    IdentityReport::pass(id, runs)
}

/// Spivey recurrence for the fully degenerate Bell polynomials through the
/// two-variable degenerate Fubini polynomials:
/// `Bel_{n+m,lambda}(x) = sum_{k<=m} sum_{l<=n} (1)_{k,lambda} {m,k}_lambda
///  C(n,l) x^k F^(k)_{n-l,lambda}(-lambda*x, k-m*lambda) Bel_{l,lambda}(x)`.
///
/// The first Fubini argument is forced to `-lambda*x` by the bivariate EGF
/// factorization `1 + lambda*x*(e_lambda(s)-1)` of the generating function;
/// any other argument already breaks the `n = m = 1` case.
pub fn verify_spivey_bel_fubini(ev: &mut Evaluator, cfg: &VerifyConfig) -> IdentityReport {
    let id = "spivey.bel_fubini";
    let mut sampler = Sampler::new(cfg, id);
    let mut runs = 0;
    for sample in sampler.samples(cfg) {
        runs += 1;
        let ParamSample {
            lambda, x, n, m, ..
        } = &sample;
        let lhs = ev.fully_deg_bel(n + m, lambda, x);
        let fubini_x = -(lambda * x);
        let mut rhs = Rat::zero();
        for k in 0..=*m {
            let weight = deg_falling(&Rat::one(), k, lambda) * ev.stirling_mut().deg(*m, k, lambda);
            if weight.is_zero() {
                continue;
            }
            let fubini_y = rat_usize(k as usize) - rat_usize(*m as usize) * lambda;
            for l in 0..=*n {
                rhs += &weight
                    * binomial(*n, l)
                    * pow_rat(x, k)
                    * ev.two_var_deg_fubini(n - l, k, lambda, &fubini_x, &fubini_y)
                    * ev.fully_deg_bel(l, lambda, x);
            }
        }
        if let Some(fail) = value_check(id, runs, &sample, &lhs, &rhs, "recurrence") {
            return fail;
        }
    }
    IdentityReport::pass(id, runs)
}

/// Spivey-type recurrence for the normalized two-variable (r-)families (the
/// module-level restatement). With `r = 0` this is the plain two-variable
/// case; with `y = 1` no prefactor exists on either side at all, so
/// pinning `y = 1` doubles as the normalization-soundness check.
fn spivey_r_mismatch(ev: &mut Evaluator, sample: &ParamSample) -> Option<(Rat, Rat)> {
    let ParamSample {
        lambda,
        x,
        y,
        n,
        m,
        r,
        ..
    } = sample;
    let y = y.clone();
    let u = (x) / (Rat::one() + lambda * x);
    let lhs = ev
        .r_b_norm(n + m, lambda, x, &y, *r)
        .expect("sampler avoids the pole");
    let mut rhs = Rat::zero();
    for k in 0..=*m {
        let stirling = ev.stirling_mut().deg_r(*m, k, *r, lambda);
        let shift = rat_usize(k as usize) - rat_usize(*m as usize) * lambda;
        let shifted_y = &y - rat_usize(k as usize) * lambda;
        for l in 0..=*n {
            rhs += binomial(*n, l)
                * &stirling
                * deg_falling(&shift, n - l, lambda)
                * deg_falling(&y, k, lambda)
                * pow_rat(&u, k)
                * ev.r_b_norm(l, lambda, x, &shifted_y, *r)
                    .expect("sampler avoids the pole");
        }
    }
    (lhs != rhs).then_some((lhs, rhs))
}

pub fn verify_spivey_two_var(ev: &mut Evaluator, cfg: &VerifyConfig) -> IdentityReport {
    let id = "spivey.two_var";
    let mut sampler = Sampler::new(cfg, id);
    let mut runs = 0;
    for mut sample in sampler.samples(cfg) {
        sample.r = 0;
        runs += 1;
        if let Some((lhs, rhs)) = spivey_r_mismatch(ev, &sample) {
            return IdentityReport::fail(
                id,
                runs,
                Counterexample {
                    sample,
                    lhs: format_rat(&lhs),
                    rhs: format_rat(&rhs),
                    context: "normalized recurrence".into(),
                },
            );
        }
    }
    IdentityReport::pass(id, runs)
}

/// The `y = 1` corollary, with the left side going through the one-variable
/// family directly.
pub fn verify_spivey_two_var_y1(ev: &mut Evaluator, cfg: &VerifyConfig) -> IdentityReport {
    let id = "spivey.two_var.y1";
    let mut sampler = Sampler::new(cfg, id);
    let mut runs = 0;
    for mut sample in sampler.samples(cfg) {
        sample.r = 0;
        sample.y = Rat::one();
        runs += 1;
        if let Some((lhs, rhs)) = spivey_r_mismatch(ev, &sample) {
            return IdentityReport::fail(
                id,
                runs,
                Counterexample {
                    sample,
                    lhs: format_rat(&lhs),
                    rhs: format_rat(&rhs),
                    context: "y = 1 corollary".into(),
                },
            );
        }
    }
    IdentityReport::pass(id, runs)
}

pub fn verify_spivey_r(ev: &mut Evaluator, cfg: &VerifyConfig) -> IdentityReport {
    let id = "spivey.r";
    let mut sampler = Sampler::new(cfg, id);
    let mut runs = 0;
    for sample in sampler.samples(cfg) {
        runs += 1;
        if let Some((lhs, rhs)) = spivey_r_mismatch(ev, &sample) {
            return IdentityReport::fail(
                id,
                runs,
                Counterexample {
                    sample,
                    lhs: format_rat(&lhs),
                    rhs: format_rat(&rhs),
                    context: "normalized r-recurrence".into(),
                },
            );
        }
    }
    IdentityReport::pass(id, runs)
}

/// The `lambda -> 0` limit form of the Spivey-type recurrences, checked
/// against the series-backed classical two-variable (r-)Bell values:
/// `phi^(r)_{n+m}(x,y) = sum_{k<=m} sum_{l<=n} C(n,l) {m+r,k+r}_r k^(n-l)
///  y^k x^k phi^(r)_l(x,y)` (all values normalized, which only divides both
/// sides by the same constant).
pub fn verify_spivey_classical_limit(cfg: &VerifyConfig, r_variant: bool) -> IdentityReport {
    let id = if r_variant {
        "spivey.r.classical_limit"
    } else {
        "spivey.two_var.classical_limit"
    };
    let mut sampler = Sampler::new(cfg, id);
    let mut runs = 0;
    let mut classical_r_tri: Vec<StirlingTriangle> = (0..=cfg.r_max)
        .map(|r| StirlingTriangle::with_r(r, Rat::zero()))
        .collect();
    for mut sample in sampler.samples(cfg) {
        sample.lambda = Rat::zero();
        if !r_variant {
            sample.r = 0;
        }
        runs += 1;
        let ParamSample { x, y, n, m, r, .. } = &sample;
        let lhs = classical_r_bell(n + m, x, y, *r);
        let mut rhs = Rat::zero();
        for k in 0..=*m {
            let stirling = classical_r_tri[*r as usize].entry(*m, k);
            for l in 0..=*n {
                rhs += binomial(*n, l)
                    * &stirling
                    * pow_rat(&rat_usize(k as usize), n - l)
                    * pow_rat(y, k)
                    * pow_rat(x, k)
                    * classical_r_bell(l, x, y, *r);
            }
        }
        if let Some(fail) = value_check(id, runs, &sample, &lhs, &rhs, "classical limit") {
            return fail;
        }
    }
    IdentityReport::pass(id, runs)
}

// ---------------------------------------------------------------------------
// Dobinski formal-series identities
// ---------------------------------------------------------------------------

/// The prefactor-free Dobinski identity as a formal series in `x`:
/// `e_lambda^y(x) * series(beta^(r)_n(x,y))` must have coefficient
/// `(y)_{k,lambda} (r+k)_{n,lambda} / k!` at `x^k`, up to `cfg.order`.
pub fn verify_dobinski_series(ev: &mut Evaluator, cfg: &VerifyConfig) -> IdentityReport {
    let id = "dobinski.series";
    let mut sampler = Sampler::new(cfg, id);
    let order = cfg.order;
    let mut runs = 0;
    for i in 0..cfg.samples {
        let mut sample = sampler.sample(cfg);
        sample.n = sampler.index(SWEEP_N_MAX);
        match i {
            0 => sample.lambda = Rat::zero(),
            1 => {
                // the specializations: y = 1, r = 0
                sample.y = Rat::one();
                sample.r = 0;
            }
            2 => sample.n = 0,
            _ => {}
        }
        runs += 1;
        let ParamSample {
            lambda, y, n, r, ..
        } = &sample;
        let lhs = &TruncSeries::deg_exp(X_VAR, y, lambda, order)
            * &ev.beta_series(*n, lambda, y, *r, order);
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut a = Rat::one(); // (y)_{k,lambda} / k!
        for k in 0..=order {
            if k > 0 {
                a = a * (y - rat_usize(k - 1) * lambda) / rat_usize(k);
            }
            let shift = rat_usize(*r as usize) + rat_usize(k);
            coeffs.push(&a * deg_falling(&shift, *n, lambda));
        }
        let rhs = TruncSeries::from_coeffs(X_VAR, coeffs);
        if let Some(fail) = series_check(id, runs, &sample, &lhs, &rhs, "Dobinski series") {
            return fail;
        }
    }
    IdentityReport::pass(id, runs)
}

/// The classical Dobinski identity at `lambda = 0`:
/// `e^x * phi_n(x) = sum_k k^n x^k / k!` as a formal series, `n <= 8`.
pub fn verify_dobinski_classical(cfg: &VerifyConfig) -> IdentityReport {
    let id = "dobinski.classical";
    let order = cfg.order;
    let mut runs = 0;
    for n in 0..=SWEEP_N_MAX {
        runs += 1;
        let phi = TruncSeries::from_coeffs(
            X_VAR,
            (0..=order)
                .map(|k| {
                    if k <= n as usize {
                        classical_stirling2(n, k as u32)
                    } else {
                        Rat::zero()
                    }
                })
                .collect(),
        );
        let lhs = &TruncSeries::deg_exp(X_VAR, &Rat::one(), &Rat::zero(), order) * &phi;
        let rhs = TruncSeries::from_coeffs(
            X_VAR,
            (0..=order)
                .map(|k| pow_rat(&rat_usize(k), n) / factorial_rat(k as u32))
                .collect(),
        );
        let sample = ParamSample {
            n,
            seed: cfg.seed,
            ..ParamSample::default()
        };
        if let Some(fail) = series_check(id, runs, &sample, &lhs, &rhs, "classical Dobinski") {
            return fail;
        }
    }
    IdentityReport::pass(id, runs)
}

// ---------------------------------------------------------------------------
// Operator identities
// ---------------------------------------------------------------------------

/// `D(X f) - X(D f) = f` on random series.
pub fn verify_operator_commutator(cfg: &VerifyConfig) -> IdentityReport {
    let id = "operators.commutator";
    let mut sampler = Sampler::new(cfg, id);
    let mut runs = 0;
    for _ in 0..cfg.samples {
        runs += 1;
        let f = sampler.series(cfg.order);
        let lhs = &apply_d(&apply_x(&f)) - &apply_x(&apply_d(&f));
        let sample = ParamSample {
            seed: cfg.seed,
            ..ParamSample::default()
        };
        if let Some(fail) = series_check(id, runs, &sample, &lhs, &f, "DX - XD = 1") {
            return fail;
        }
    }
    IdentityReport::pass(id, runs)
}

/// Fast diagonal `(XD + r)_{n,lambda}` against the composition of shifted
/// `XD` factors built from the primitives, on monomials and random series.
pub fn verify_operator_diagonal_consistency(cfg: &VerifyConfig) -> IdentityReport {
    let id = "operators.diagonal_consistency";
    let mut sampler = Sampler::new(cfg, id);
    let mut runs = 0;
    for _ in 0..cfg.samples {
        let sample = sampler.sample(cfg);
        let n = sample.n.min(SWEEP_N_MAX);
        runs += 1;
        let fast = SeriesOperator::xd_falling(n, &sample.lambda, sample.r);
        let slow =
            SeriesOperator::xd_falling_slow(n, &sample.lambda, &rat_usize(sample.r as usize));
        let f = sampler.series(cfg.order);
        if let Some(fail) = series_check(
            id,
            runs,
            &sample,
            &fast.apply(&f),
            &slow.apply(&f),
            "diagonal vs composition on a random series",
        ) {
            return fail;
        }
        for degree in 0..=cfg.order {
            let monomial = TruncSeries::monomial(X_VAR, Rat::one(), degree, cfg.order);
            if let Some(fail) = series_check(
                id,
                runs,
                &sample,
                &fast.apply(&monomial),
                &slow.apply(&monomial),
                &format!("diagonal vs composition on x^{degree}"),
            ) {
                return fail;
            }
        }
    }
    IdentityReport::pass(id, runs)
}

/// The operator expressions of the families, prefactor-free:
/// `(XD + r)_{n,lambda} e_lambda^y(x) = series(beta^(r)_n(x,y)) * e_lambda^y(x)`
/// to the configured order, `n <= 8`.
pub fn verify_operator_bell(ev: &mut Evaluator, cfg: &VerifyConfig) -> IdentityReport {
    let id = "operators.bell";
    let mut sampler = Sampler::new(cfg, id);
    let order = cfg.order;
    let mut runs = 0;
    for i in 0..cfg.samples {
        let mut sample = sampler.sample(cfg);
        sample.n = sampler.index(SWEEP_N_MAX);
        match i {
            0 => sample.lambda = Rat::zero(),
            1 => {
                sample.y = Rat::one();
                sample.r = 0;
            }
            2 => sample.n = 0,
            _ => {}
        }
        runs += 1;
        let ParamSample {
            lambda, y, n, r, ..
        } = &sample;
        let lhs = operator_bell(*n, lambda, y, *r, order);
        let rhs = &ev.beta_series(*n, lambda, y, *r, order)
            * &TruncSeries::deg_exp(X_VAR, y, lambda, order);
        if let Some(fail) = series_check(id, runs, &sample, &lhs, &rhs, "operator expression") {
            return fail;
        }
    }
    IdentityReport::pass(id, runs)
}

/// `D^j e_lambda^y(x) = (y)_{j,lambda} e_lambda^(y - j*lambda)(x)`,
/// coefficientwise for `j <= 6`.
pub fn verify_operator_d_exp_shift(cfg: &VerifyConfig) -> IdentityReport {
    let id = "operators.d_exp_shift";
    let mut sampler = Sampler::new(cfg, id);
    let order = cfg.order;
    let mut runs = 0;
    for _ in 0..cfg.samples {
        let sample = sampler.sample(cfg);
        runs += 1;
        let ParamSample { lambda, y, .. } = &sample;
        let mut derived = TruncSeries::deg_exp(X_VAR, y, lambda, order);
        for j in 0..=6u32 {
            let shifted_y = y - rat_usize(j as usize) * lambda;
            let rhs = TruncSeries::deg_exp(X_VAR, &shifted_y, lambda, order)
                .scale(&deg_falling(y, j, lambda));
            if let Some(fail) = series_check(
                id,
                runs,
                &sample,
                &derived,
                &rhs,
                &format!("derivative order j={j}"),
            ) {
                return fail;
            }
            derived = derived.derivative();
        }
    }
    IdentityReport::pass(id, runs)
}

/// Sweeps the structural operator equation checks from the operators module
/// over sampled parameters. Each inner check compares both sides on every
/// monomial of degree up to `cfg.order`.
pub fn verify_operator_equations(
    ev: &mut Evaluator,
    cfg: &VerifyConfig,
    id: &'static str,
) -> IdentityReport {
    let mut sampler = Sampler::new(cfg, id);
    let mut runs = 0;
    for sample in sampler.samples(cfg) {
        let ParamSample {
            lambda, n, m, r, ..
        } = &sample;
        let report = match id {
            "operators.stirling_expansion" => check_op_stirling_expansion(
                ev.stirling_mut(),
                (*n).min(SWEEP_N_MAX),
                lambda,
                *r,
                cfg.order,
            ),
            "operators.shift_factorization" => {
                check_op_shift_factorization(*n, *m, lambda, *r, cfg.order)
            }
            "operators.pushthrough" => {
                // reuse m as the X-power exponent bound
                let k = *m % 7;
                check_op_pushthrough(*n, *m, k, lambda, *r, cfg.order)
            }
            "operators.full_expansion" => {
                check_op_full_expansion(ev.stirling_mut(), *n, *m, lambda, *r, cfg.order)
            }
            _ => unreachable!("unknown operator id {id}"),
        };
        runs += 1;
        if !report.passed() {
            return IdentityReport {
                identity_id: id.to_string(),
                samples_run: runs,
                counterexample: report.counterexample.map(|cx| Counterexample {
                    sample: sample.clone(),
                    ..cx
                }),
                ..report
            };
        }
    }
    IdentityReport::pass(id, runs)
}

// ---------------------------------------------------------------------------
// Suite
// ---------------------------------------------------------------------------

/// Runs every identity check with the given configuration. The report list
/// is sorted by identity id and, given equal configurations, is reproduced
/// byte-for-byte by [`reports_to_json`].
pub fn run_suite(cfg: &VerifyConfig) -> Result<Vec<IdentityReport>> {
    cfg.validate()?;
    let mut ev = cfg.evaluator();
    let mut reports = vec![
        timed(|| verify_stirling_oracle(&mut ev, cfg)),
        timed(|| verify_stirling_lambda_zero(&mut ev, cfg)),
        timed(|| verify_classical_bell_numbers(&mut ev, cfg)),
        timed(|| verify_classical_fubini_numbers(&mut ev, cfg)),
        timed(|| verify_egf_stirling(&mut ev, cfg, false)),
        timed(|| verify_egf_stirling(&mut ev, cfg, true)),
        timed(|| verify_egf_bel(&mut ev, cfg)),
        timed(|| verify_egf_bell_families(&mut ev, cfg, "egf.bell_b")),
        timed(|| verify_egf_bell_families(&mut ev, cfg, "egf.bell_two_var")),
        timed(|| verify_egf_bell_families(&mut ev, cfg, "egf.r_bell")),
        timed(|| verify_egf_bell_families(&mut ev, cfg, "egf.r_bell_two_var")),
        timed(|| verify_spivey_classical(SPIVEY_CLASSICAL_MAX, SPIVEY_CLASSICAL_MAX)),
        timed(|| verify_spivey_deg_phi(&mut ev, cfg)),
        timed(|| verify_spivey_bel_fubini(&mut ev, cfg)),
        timed(|| verify_spivey_two_var(&mut ev, cfg)),
        timed(|| verify_spivey_two_var_y1(&mut ev, cfg)),
        timed(|| verify_spivey_r(&mut ev, cfg)),
        timed(|| verify_spivey_classical_limit(cfg, false)),
        timed(|| verify_spivey_classical_limit(cfg, true)),
        timed(|| verify_dobinski_series(&mut ev, cfg)),
        timed(|| verify_dobinski_classical(cfg)),
        timed(|| verify_operator_commutator(cfg)),
        timed(|| verify_operator_diagonal_consistency(cfg)),
        timed(|| verify_operator_bell(&mut ev, cfg)),
        timed(|| verify_operator_d_exp_shift(cfg)),
        timed(|| verify_operator_equations(&mut ev, cfg, "operators.stirling_expansion")),
        timed(|| verify_operator_equations(&mut ev, cfg, "operators.shift_factorization")),
        timed(|| verify_operator_equations(&mut ev, cfg, "operators.pushthrough")),
        timed(|| verify_operator_equations(&mut ev, cfg, "operators.full_expansion")),
    ];
    reports.sort_by(|a, b| a.identity_id.cmp(&b.identity_id));
    Ok(reports)
}

pub fn all_pass(reports: &[IdentityReport]) -> bool {
    reports.iter().all(|r| r.status == Status::Pass)
}

/// Canonical JSON rendering of a report list (pretty-printed, sorted input
/// order preserved). Byte-identical across runs with equal configurations.
pub fn reports_to_json(reports: &[IdentityReport]) -> String {
    let mut out = serde_json::to_string_pretty(reports).expect("static schema");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_config() -> VerifyConfig {
        VerifyConfig {
            samples: 6,
            n_max: 4,
            m_max: 4,
            order: 12,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn default_suite_composition() {
        let reports = run_suite(&quick_config()).unwrap();
        assert!(reports.len() >= 9);
        let ids: Vec<&str> = reports.iter().map(|r| r.identity_id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted, "reports must be sorted by identity id");
        for r in &reports {
            assert!(
                r.passed(),
                "{} failed: {:?}",
                r.identity_id,
                r.counterexample
            );
        }
    }

    #[test]
    fn determinism_is_byte_exact() {
        let cfg = quick_config();
        let a = reports_to_json(&run_suite(&cfg).unwrap());
        let b = reports_to_json(&run_suite(&cfg).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn counterexamples_reflect_the_seed() {
        // failing reports embed the drawn sample, so mutated runs with
        // different seeds produce different counterexamples for sampled ids
        let mutated = |seed| VerifyConfig {
            seed,
            mutation: Some(Mutation::FlipStirlingLambdaSign),
            ..quick_config()
        };
        let pick = |reports: &[IdentityReport]| {
            reports
                .iter()
                .find(|r| r.identity_id == "egf.stirling")
                .and_then(|r| r.counterexample.clone())
                .expect("egf.stirling fails under mutation")
        };
        let a = pick(&run_suite(&mutated(1)).unwrap());
        let b = pick(&run_suite(&mutated(2)).unwrap());
        assert_ne!(a.sample.lambda, b.sample.lambda);
    }

    #[test]
    fn mutation_is_detected_with_counterexamples() {
        let cfg = VerifyConfig {
            mutation: Some(Mutation::FlipStirlingLambdaSign),
            ..quick_config()
        };
        let reports = run_suite(&cfg).unwrap();
        let failed: Vec<&IdentityReport> = reports.iter().filter(|r| !r.passed()).collect();
        assert!(!failed.is_empty());
        for r in &failed {
            assert!(
                r.counterexample.is_some(),
                "{} failed without a counterexample",
                r.identity_id
            );
        }
        for must_fail in [
            "stirling.recurrence_vs_oracle",
            "egf.stirling",
            "spivey.two_var",
        ] {
            assert!(
                failed.iter().any(|r| r.identity_id == must_fail),
                "{must_fail} should have failed under mutation"
            );
        }
    }

    #[test]
    fn config_validation() {
        let bad = VerifyConfig {
            samples: 0,
            ..VerifyConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = VerifyConfig {
            order: 3,
            ..VerifyConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}

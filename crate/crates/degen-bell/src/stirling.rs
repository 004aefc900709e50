//! Degenerate Stirling numbers of the second kind, their r-shifted variants,
//! and the classical numbers, each with an independent basis-conversion
//! oracle.
//!
//! The production path is the triangle recurrence
//!
//! ```text
//! S(n+1, k) = S(n, k-1) + (k + r - n*lambda) * S(n, k)
//! ```
//!
//! obtained by multiplying the expansion of `(x+r)_{n,lambda}` in the
//! falling-factorial basis by one more factor `(x + r - n*lambda)` and using
//! `x * (x)_k = (x)_{k+1} + k * (x)_k`. The oracle path never touches this
//! recurrence: it expands `(x+r)_{n,lambda}` into monomials in `x` and
//! converts monomials to falling factorials with classical Stirling numbers.
//!
//! Both a symbolic mode (entries are polynomials in the deformation
//! parameter) and an evaluated mode (parameter fixed to a rational) are
//! provided; downstream modules only use the evaluated mode.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;

use crate::lambda_poly::LambdaPoly;
use crate::rational::{rat_usize, Rat};

/// Which triangle recurrence to run. `FlipLambdaSign` negates the
/// `-n*lambda` term and exists solely so the verification suites can prove
/// they would catch a wrong recurrence; it is never the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RecurrenceVariant {
    #[default]
    Standard,
    FlipLambdaSign,
}

impl RecurrenceVariant {
    fn lambda_factor(self, n: usize) -> Rat {
        match self {
            RecurrenceVariant::Standard => -rat_usize(n),
            RecurrenceVariant::FlipLambdaSign => rat_usize(n),
        }
    }
}

/// Classical Stirling number of the second kind as a big integer.
pub fn classical_stirling2_int(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let (n, k) = (n as usize, k as usize);
    let mut row: Vec<BigInt> = vec![BigInt::one()];
    for m in 1..=n {
        let mut next = vec![BigInt::zero(); (m + 1).min(k + 1)];
        for j in 0..next.len() {
            let mut v = BigInt::zero();
            if j > 0 && j - 1 < row.len() {
                v += &row[j - 1];
            }
            if j < row.len() {
                v += &row[j] * BigInt::from(j);
            }
            next[j] = v;
        }
        row = next;
    }
    row.get(k).cloned().unwrap_or_else(BigInt::zero)
}

/// Classical Stirling number of the second kind.
pub fn classical_stirling2(n: u32, k: u32) -> Rat {
    Rat::from_integer(classical_stirling2_int(n, k))
}

/// Memoized triangle of degenerate r-Stirling numbers at a fixed rational
/// parameter. Row `n` holds the coefficients of `(x+r)_{n,lambda}` in the
/// falling-factorial basis. Rows extend on demand; give each worker its own
/// triangle (or wrap in a lock) when sharing across threads.
#[derive(Debug, Clone)]
pub struct StirlingTriangle {
    r: u32,
    lambda: Rat,
    variant: RecurrenceVariant,
    rows: Vec<Vec<Rat>>,
}

impl StirlingTriangle {
    pub fn new(lambda: Rat) -> Self {
        Self::with_r(0, lambda)
    }

    pub fn with_r(r: u32, lambda: Rat) -> Self {
        Self::with_variant(r, lambda, RecurrenceVariant::Standard)
    }

    pub fn with_variant(r: u32, lambda: Rat, variant: RecurrenceVariant) -> Self {
        Self {
            r,
            lambda,
            variant,
            rows: vec![vec![Rat::one()]],
        }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn lambda(&self) -> &Rat {
        &self.lambda
    }

    /// `{n+r, k+r}_{r,lambda}`; zero when `k > n`.
    pub fn entry(&mut self, n: u32, k: u32) -> Rat {
        if k > n {
            return Rat::zero();
        }
        self.grow(n as usize);
        self.rows[n as usize][k as usize].clone()
    }

    pub fn row(&mut self, n: u32) -> &[Rat] {
        self.grow(n as usize);
        &self.rows[n as usize]
    }

    fn grow(&mut self, n: usize) {
        while self.rows.len() <= n {
            let m = self.rows.len() - 1;
            let prev = &self.rows[m];
            let lam = self.variant.lambda_factor(m) * &self.lambda;
            let mut next = vec![Rat::zero(); m + 2];
            for (k, next_k) in next.iter_mut().enumerate() {
                let mut v = Rat::zero();
                if k > 0 {
                    v += &prev[k - 1];
                }
                if k <= m {
                    v += (rat_usize(k + self.r as usize) + &lam) * &prev[k];
                }
                *next_k = v;
            }
            self.rows.push(next);
        }
    }
}

/// Symbolic-parameter sibling of [`StirlingTriangle`]; entries are
/// polynomials in the deformation parameter of degree at most `n - k`.
#[derive(Debug, Clone)]
pub struct SymStirlingTriangle {
    r: u32,
    variant: RecurrenceVariant,
    rows: Vec<Vec<LambdaPoly>>,
}

impl SymStirlingTriangle {
    pub fn new() -> Self {
        Self::with_r(0)
    }

    pub fn with_r(r: u32) -> Self {
        Self::with_variant(r, RecurrenceVariant::Standard)
    }

    pub fn with_variant(r: u32, variant: RecurrenceVariant) -> Self {
        Self {
            r,
            variant,
            rows: vec![vec![LambdaPoly::one()]],
        }
    }

    pub fn entry(&mut self, n: u32, k: u32) -> LambdaPoly {
        if k > n {
            return LambdaPoly::zero();
        }
        self.grow(n as usize);
        self.rows[n as usize][k as usize].clone()
    }

    pub fn row(&mut self, n: u32) -> &[LambdaPoly] {
        self.grow(n as usize);
        &self.rows[n as usize]
    }

    fn grow(&mut self, n: usize) {
        while self.rows.len() <= n {
            let m = self.rows.len() - 1;
            let prev = &self.rows[m];
            let factor_tail = self.variant.lambda_factor(m);
            let mut next = vec![LambdaPoly::zero(); m + 2];
            for (k, next_k) in next.iter_mut().enumerate() {
                let mut v = LambdaPoly::zero();
                if k > 0 {
                    v = &v + &prev[k - 1];
                }
                if k <= m {
                    let linear =
                        LambdaPoly::linear(rat_usize(k + self.r as usize), factor_tail.clone());
                    v = &v + &(&linear * &prev[k]);
                }
                *next_k = v;
            }
            self.rows.push(next);
        }
    }
}

impl Default for SymStirlingTriangle {
    fn default() -> Self {
        Self::new()
    }
}

/// Shared memoization of evaluated triangles keyed by `(r, lambda)` and of
/// symbolic triangles keyed by `r`. The verification suites hit the same
/// rows over and over, so this is where all of them get their values.
#[derive(Debug, Default)]
pub struct StirlingCache {
    variant: RecurrenceVariant,
    eval: HashMap<(u32, Rat), StirlingTriangle>,
    sym: HashMap<u32, SymStirlingTriangle>,
}

impl StirlingCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_variant(variant: RecurrenceVariant) -> Self {
        Self {
            variant,
            ..Self::default()
        }
    }

    pub fn variant(&self) -> RecurrenceVariant {
        self.variant
    }

    /// `{n, k}_lambda`.
    pub fn deg(&mut self, n: u32, k: u32, lambda: &Rat) -> Rat {
        self.deg_r(n, k, 0, lambda)
    }

    /// `{n+r, k+r}_{r,lambda}`.
    pub fn deg_r(&mut self, n: u32, k: u32, r: u32, lambda: &Rat) -> Rat {
        let variant = self.variant;
        self.eval
            .entry((r, lambda.clone()))
            .or_insert_with(|| StirlingTriangle::with_variant(r, lambda.clone(), variant))
            .entry(n, k)
    }

    pub fn deg_sym(&mut self, n: u32, k: u32) -> LambdaPoly {
        self.deg_r_sym(n, k, 0)
    }

    pub fn deg_r_sym(&mut self, n: u32, k: u32, r: u32) -> LambdaPoly {
        let variant = self.variant;
        self.sym
            .entry(r)
            .or_insert_with(|| SymStirlingTriangle::with_variant(r, variant))
            .entry(n, k)
    }
}

/// `{n, k}_lambda` via the triangle recurrence.
pub fn deg_stirling2(n: u32, k: u32, lambda: &Rat) -> Rat {
    StirlingTriangle::new(lambda.clone()).entry(n, k)
}

/// `{n, k}_lambda` as a polynomial in the parameter.
pub fn deg_stirling2_sym(n: u32, k: u32) -> LambdaPoly {
    SymStirlingTriangle::new().entry(n, k)
}

/// `{n+r, k+r}_{r,lambda}` via the triangle recurrence.
pub fn deg_r_stirling2(n: u32, k: u32, r: u32, lambda: &Rat) -> Rat {
    StirlingTriangle::with_r(r, lambda.clone()).entry(n, k)
}

pub fn deg_r_stirling2_sym(n: u32, k: u32, r: u32) -> LambdaPoly {
    SymStirlingTriangle::with_r(r).entry(n, k)
}

/// Independent oracle row for `{n, k}_lambda`, all `k` at once.
pub fn deg_stirling2_oracle(n: u32) -> Vec<LambdaPoly> {
    deg_r_stirling2_oracle(n, 0)
}

/// Independent oracle row for `{n+r, k+r}_{r,lambda}`.
///
/// Expands `(x+r)_{n,lambda}` into the monomial basis in `x` (coefficients
/// are polynomials in the parameter), then converts each monomial to falling
/// factorials through `x^m = sum_k {m, k} (x)_k` with classical Stirling
/// numbers. No triangle recurrence is involved.
pub fn deg_r_stirling2_oracle(n: u32, r: u32) -> Vec<LambdaPoly> {
    // x_coeffs[m] = coefficient of x^m in (x+r)_{n,lambda}
    let mut x_coeffs = vec![LambdaPoly::one()];
    for j in 0..n as usize {
        // multiply by (x + r - j*lambda)
        let linear = LambdaPoly::linear(rat_usize(r as usize), -rat_usize(j));
        let mut next = vec![LambdaPoly::zero(); x_coeffs.len() + 1];
        for (m, c) in x_coeffs.iter().enumerate() {
            next[m + 1] = &next[m + 1] + c;
            next[m] = &next[m] + &(c * &linear);
        }
        x_coeffs = next;
    }
    (0..=n)
        .map(|k| {
            let mut acc = LambdaPoly::zero();
            for m in k..=n {
                let s2 = Rat::from_integer(classical_stirling2_int(m, k));
                acc = &acc + &x_coeffs[m as usize].scale(&s2);
            }
            acc
        })
        .collect()
}

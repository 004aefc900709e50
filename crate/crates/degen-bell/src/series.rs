//! Truncated formal power series with exact rational coefficients.
//!
//! Each series carries a truncation order `N` (highest stored degree) and a
//! valid order `V <= N`: coefficients `0..=V` are exact coefficients of the
//! represented function, anything above is carried but never asserted.
//! Operations that lose top-coefficient information (differentiation) shrink
//! the valid order; comparisons only ever look below it. Series also carry a
//! one-character variable tag so that a series in `t` is never silently
//! combined with a series in `x`.

use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::comb::factorial_rat;
use crate::error::{Error, Result};
use crate::rational::{format_rat, rat_usize, Rat};

/// Dense truncated power series in one formal variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    var: char,
    /// Coefficient of degree `i` at index `i`; length is `trunc_order + 1`.
    coeffs: Vec<Rat>,
    valid: usize,
}

impl TruncSeries {
    pub fn zero(var: char, order: usize) -> Self {
        Self {
            var,
            coeffs: vec![Rat::zero(); order + 1],
            valid: order,
        }
    }

    pub fn one(var: char, order: usize) -> Self {
        Self::monomial(var, Rat::one(), 0, order)
    }

    /// `c * var^degree`, exact to `order`.
    pub fn monomial(var: char, c: Rat, degree: usize, order: usize) -> Self {
        let mut s = Self::zero(var, order);
        if degree <= order {
            s.coeffs[degree] = c;
        }
        s
    }

    /// Builds from explicit coefficients; every stored coefficient is exact.
    pub fn from_coeffs(var: char, coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least degree 0");
        let valid = coeffs.len() - 1;
        Self { var, coeffs, valid }
    }

    /// The degenerate exponential `e_lambda^y` as a series: coefficient `k`
    /// is `(y)_{k,lambda} / k!`. At `lambda = 0` these are the classical
    /// exponential coefficients `y^k / k!`.
    pub fn deg_exp(var: char, y: &Rat, lambda: &Rat, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut falling = Rat::one();
        let mut fact = Rat::one();
        for k in 0..=order {
            if k > 0 {
                falling *= y - rat_usize(k - 1) * lambda;
                fact *= rat_usize(k);
            }
            coeffs.push(&falling / &fact);
        }
        Self::from_coeffs(var, coeffs)
    }

    /// Classical exponential series.
    pub fn exp(var: char, order: usize) -> Self {
        Self::deg_exp(var, &Rat::one(), &Rat::zero(), order)
    }

    pub fn var(&self) -> char {
        self.var
    }

    pub fn trunc_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn valid_order(&self) -> usize {
        self.valid
    }

    /// Coefficient of the given degree (zero beyond the truncation order;
    /// callers asserting exactness must stay at or below the valid order).
    pub fn coeff(&self, degree: usize) -> Rat {
        self.coeffs.get(degree).cloned().unwrap_or_else(Rat::zero)
    }

    /// Marks coefficients above `valid` as unreliable.
    pub fn with_valid(mut self, valid: usize) -> Self {
        self.valid = valid.min(self.trunc_order());
        self
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self {
            var: self.var,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            valid: self.valid,
        }
    }

    /// Multiplication by the variable: shifts coefficients up one degree.
    pub fn mul_by_var(&self) -> Self {
        let order = self.trunc_order();
        let mut coeffs = vec![Rat::zero(); order + 1];
        coeffs[1..].clone_from_slice(&self.coeffs[..order]);
        Self {
            var: self.var,
            coeffs,
            valid: (self.valid + 1).min(order),
        }
    }

    /// Formal derivative; the top coefficient is lost, so the valid order
    /// drops by one.
    pub fn derivative(&self) -> Self {
        let order = self.trunc_order();
        let mut coeffs: Vec<Rat> = (0..order)
            .map(|j| &self.coeffs[j + 1] * rat_usize(j + 1))
            .collect();
        coeffs.push(Rat::zero());
        Self {
            var: self.var,
            coeffs,
            valid: self.valid.saturating_sub(1),
        }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::NonInvertibleSeries);
        }
        let order = self.trunc_order();
        let inv0 = Rat::one() / &self.coeffs[0];
        let mut out = vec![Rat::zero(); order + 1];
        out[0] = inv0.clone();
        for n in 1..=order {
            let mut acc = Rat::zero();
            for i in 1..=n {
                acc += &self.coeffs[i] * &out[n - i];
            }
            out[n] = -acc * &inv0;
        }
        Ok(Self {
            var: self.var,
            coeffs: out,
            valid: self.valid,
        })
    }

    /// Substitutes `inner` into `self` (Horner form). The inner series must
    /// have a zero constant term so that every output coefficient is a
    /// finite sum.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroInnerConstant);
        }
        let order = inner.trunc_order();
        let mut acc = TruncSeries::zero(inner.var, order);
        for c in self.coeffs.iter().rev() {
            acc = &acc * inner;
            acc.coeffs[0] += c;
        }
        acc.valid = self.valid.min(inner.valid);
        Ok(acc)
    }

    /// Non-negative integer power by repeated multiplication; `pow(0)` is 1.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = TruncSeries::one(self.var, self.trunc_order()).with_valid(self.valid);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `n! * [var^n]`, the coefficient in exponential-generating-function
    /// normalization. Errors beyond the valid order.
    pub fn egf_coeff(&self, n: usize) -> Result<Rat> {
        if n > self.valid {
            return Err(Error::InsufficientTruncation {
                index: n,
                valid: self.valid,
            });
        }
        Ok(factorial_rat(n as u32) * &self.coeffs[n])
    }

    /// Coefficientwise equality up to the smaller of the two valid orders.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_disagreement(other).is_none()
    }

    /// First exact-coefficient mismatch at or below both valid orders.
    pub fn first_disagreement(&self, other: &Self) -> Option<(usize, Rat, Rat)> {
        assert_eq!(self.var, other.var, "variable mismatch");
        let upto = self.valid.min(other.valid);
        (0..=upto).find_map(|j| {
            let (a, b) = (self.coeff(j), other.coeff(j));
            (a != b).then_some((j, a, b))
        })
    }
}

fn joint_len(a: &TruncSeries, b: &TruncSeries) -> usize {
    assert_eq!(a.var, b.var, "variable mismatch");
    a.coeffs.len().min(b.coeffs.len())
}

impl Add for &TruncSeries {
    type Output = TruncSeries;
    // the subtraction below computes the result's truncation order
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        let n = joint_len(self, rhs);
        TruncSeries {
            var: self.var,
            coeffs: (0..n).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect(),
            valid: self.valid.min(rhs.valid).min(n - 1),
        }
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        let n = joint_len(self, rhs);
        TruncSeries {
            var: self.var,
            coeffs: (0..n).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect(),
            valid: self.valid.min(rhs.valid).min(n - 1),
        }
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        let n = joint_len(self, rhs);
        let mut coeffs = vec![Rat::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n - i).enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        TruncSeries {
            var: self.var,
            coeffs,
            valid: self.valid.min(rhs.valid).min(n - 1),
        }
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        self.scale(&-Rat::one())
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().take(self.valid + 1) {
            if c.is_zero() {
                continue;
            }
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            match deg {
                0 => write!(f, "{}", format_rat(c))?,
                1 => write!(f, "{}*{}", format_rat(c), self.var)?,
                _ => write!(f, "{}*{}^{}", format_rat(c), self.var, deg)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.valid + 1)
    }
}

/// `(1 + a*var)^(-k)` by direct binomial expansion: coefficient `i` is
/// `C(k-1+i, i) * (-a)^i`. Used to expand the normalized rational families
/// in powers of `x` without going through series inversion.
pub fn recip_one_plus_ax_pow(var: char, a: &Rat, k: u32, order: usize) -> TruncSeries {
    if k == 0 {
        return TruncSeries::one(var, order);
    }
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c = Rat::one();
    for i in 0..=order {
        if i > 0 {
            // C(k-1+i, i) = C(k-2+i, i-1) * (k-1+i) / i
            c = c * rat_usize(k as usize - 1 + i) / rat_usize(i) * (-a);
        }
        coeffs.push(c.clone());
    }
    TruncSeries::from_coeffs(var, coeffs)
}

/// Degenerate exponential in the EGF variable `t`.
pub fn deg_exp_series(y: &Rat, lambda: &Rat, order: usize) -> TruncSeries {
    TruncSeries::deg_exp('t', y, lambda, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn s(coeffs: &[i64]) -> TruncSeries {
        TruncSeries::from_coeffs('t', coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&s(&[1, 1, 0]) * &s(&[1, -1, 0]), s(&[1, 0, -1]));
    }

    #[test]
    fn additive_identity() {
        let a = s(&[3, -2, 5, 7]);
        assert_eq!(&a + &TruncSeries::zero('t', 3), a);
    }

    #[test]
    fn exp_squared_coefficient_by_hand() {
        // coefficient of t^2 in exp(t)^2: 1/2 + 1 + 1/2 = 2
        let e = TruncSeries::exp('t', 4);
        assert_eq!((&e * &e).coeff(2), rat_int(2));
    }

    #[test]
    fn reciprocal_of_one_plus_t_is_geometric() {
        let a = TruncSeries::from_coeffs(
            't',
            vec![rat_int(1), rat_int(1), rat_int(0), rat_int(0), rat_int(0)],
        );
        let inv = a.reciprocal().unwrap();
        for j in 0..=4 {
            assert_eq!(inv.coeff(j), rat_int(if j % 2 == 0 { 1 } else { -1 }));
        }
        let one = TruncSeries::one('t', 4);
        assert!((&a * &inv).agrees_with(&one));
        assert!((&inv * &a).agrees_with(&one));
    }

    #[test]
    fn reciprocal_of_one_is_one() {
        let one = TruncSeries::one('t', 6);
        assert_eq!(one.reciprocal().unwrap(), one);
    }

    #[test]
    fn reciprocal_requires_unit_constant() {
        let t = TruncSeries::monomial('t', Rat::one(), 1, 4);
        assert_eq!(t.reciprocal(), Err(Error::NonInvertibleSeries));
    }

    #[test]
    fn compose_substitutes() {
        // (1 + u) o t^2 = 1 + t^2
        let outer = TruncSeries::from_coeffs(
            'u',
            vec![rat_int(1), rat_int(1), rat_int(0), rat_int(0), rat_int(0)],
        );
        let inner = TruncSeries::monomial('t', Rat::one(), 2, 4);
        assert_eq!(outer.compose(&inner).unwrap(), s(&[1, 0, 1, 0, 0]));
    }

    #[test]
    fn compose_with_zero_projects_constant() {
        let outer = s(&[7, 3, -4]);
        let zero = TruncSeries::zero('t', 5);
        let composed = outer.compose(&zero).unwrap();
        assert_eq!(composed.coeff(0), rat_int(7));
        assert!((1..=2).all(|j| composed.coeff(j).is_zero()));
    }

    #[test]
    fn compose_rejects_nonzero_inner_constant() {
        let outer = TruncSeries::exp('u', 4);
        let inner = TruncSeries::one('t', 4);
        assert_eq!(outer.compose(&inner), Err(Error::NonzeroInnerConstant));
    }

    #[test]
    fn bell_number_from_composition() {
        // 3! * [t^3] exp(exp(t) - 1) = 5, the number of set partitions of 3
        let order = 6;
        let mut shifted = TruncSeries::exp('t', order);
        shifted = &shifted - &TruncSeries::one('t', order);
        let outer = TruncSeries::exp('u', order);
        let composed = outer.compose(&shifted).unwrap();
        assert_eq!(composed.egf_coeff(3).unwrap(), rat_int(5));
    }

    #[test]
    fn deg_exp_examples() {
        let e = deg_exp_series(&rat_int(1), &rat_int(0), 3);
        assert_eq!(
            (0..=3).map(|j| e.coeff(j)).collect::<Vec<_>>(),
            vec![rat_int(1), rat_int(1), rat(1, 2), rat(1, 6)]
        );
        // (1)_{2,1} = 0 kills all higher terms
        let e = deg_exp_series(&rat_int(1), &rat_int(1), 3);
        assert_eq!(
            (0..=3).map(|j| e.coeff(j)).collect::<Vec<_>>(),
            vec![rat_int(1), rat_int(1), rat_int(0), rat_int(0)]
        );
        let e = deg_exp_series(&rat_int(2), &rat_int(1), 2);
        assert_eq!(
            (0..=2).map(|j| e.coeff(j)).collect::<Vec<_>>(),
            vec![rat_int(1), rat_int(2), rat_int(1)]
        );
    }

    #[test]
    fn egf_coeff_normalization_and_guard() {
        let e = TruncSeries::exp('t', 6);
        assert_eq!(e.egf_coeff(4).unwrap(), rat_int(1));
        let e = deg_exp_series(&rat_int(1), &rat_int(1), 4);
        assert_eq!(e.egf_coeff(2).unwrap(), rat_int(0));
        let short = e.with_valid(2);
        assert_eq!(
            short.egf_coeff(3),
            Err(Error::InsufficientTruncation { index: 3, valid: 2 })
        );
    }

    #[test]
    fn deg_exp_multiplicativity() {
        let (a, b, lambda) = (rat(2, 3), rat(-1, 2), rat(1, 5));
        let lhs = &deg_exp_series(&a, &lambda, 10) * &deg_exp_series(&b, &lambda, 10);
        let rhs = deg_exp_series(&(a + b), &lambda, 10);
        assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn binomial_expansion_matches_reciprocal_power() {
        let a = rat(2, 7);
        for k in 0..=4u32 {
            let base = TruncSeries::from_coeffs(
                'x',
                (0..=9)
                    .map(|i| match i {
                        0 => Rat::one(),
                        1 => a.clone(),
                        _ => Rat::zero(),
                    })
                    .collect(),
            );
            let via_recip = base.reciprocal().unwrap().pow(k);
            let direct = recip_one_plus_ax_pow('x', &a, k, 9);
            assert!(via_recip.agrees_with(&direct), "k={k}");
        }
    }

    #[test]
    fn derivative_tracks_validity() {
        let e = TruncSeries::exp('t', 5);
        let d = e.derivative();
        assert_eq!(d.valid_order(), 4);
        assert!(d.agrees_with(&TruncSeries::exp('t', 5)));
    }
}

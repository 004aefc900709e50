//! Dense univariate polynomials in the deformation parameter.
//!
//! Coefficient index equals the degree in the parameter. The coefficient
//! vector never carries trailing zeros, so structural equality is polynomial
//! equality and `degree` is well defined.

use num_traits::Zero;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::rational::{format_rat, Rat};

/// Polynomial in the deformation parameter with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LambdaPoly {
    coeffs: Vec<Rat>,
}

impl LambdaPoly {
    /// Builds from coefficients (index = degree), trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::from_integer(1.into()))
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The linear polynomial `c0 + c1*lambda`.
    pub fn linear(c0: Rat, c1: Rat) -> Self {
        Self::from_coeffs(vec![c0, c1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the convention that the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of the given degree (zero beyond the stored length).
    pub fn coeff(&self, degree: usize) -> Rat {
        self.coeffs.get(degree).cloned().unwrap_or_else(Rat::zero)
    }

    /// Horner evaluation at a rational parameter value.
    pub fn eval(&self, lambda: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * lambda + c;
        }
        acc
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }
}

impl Add for &LambdaPoly {
    type Output = LambdaPoly;
    fn add(self, rhs: &LambdaPoly) -> LambdaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        LambdaPoly::from_coeffs(out)
    }
}

impl Sub for &LambdaPoly {
    type Output = LambdaPoly;
    fn sub(self, rhs: &LambdaPoly) -> LambdaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        LambdaPoly::from_coeffs(out)
    }
}

impl Mul for &LambdaPoly {
    type Output = LambdaPoly;
    fn mul(self, rhs: &LambdaPoly) -> LambdaPoly {
        if self.is_zero() || rhs.is_zero() {
            return LambdaPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        LambdaPoly::from_coeffs(out)
    }
}

impl Neg for &LambdaPoly {
    type Output = LambdaPoly;
    fn neg(self) -> LambdaPoly {
        LambdaPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate() {
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
                1 => write!(f, "{}*L", format_rat(c))?,
                _ => write!(f, "{}*L^{}", format_rat(c), deg)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn p(coeffs: &[i64]) -> LambdaPoly {
        LambdaPoly::from_coeffs(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    #[test]
    fn canonical_form_trims_trailing_zeros() {
        let q = LambdaPoly::from_coeffs(vec![rat_int(1), rat_int(0), rat_int(0)]);
        assert_eq!(q, LambdaPoly::one());
        assert_eq!(q.degree(), 0);
        assert!((&q - &q).is_zero());
    }

    #[test]
    fn ring_ops() {
        // (1 - L)(1 + L) = 1 - L^2
        assert_eq!(&p(&[1, -1]) * &p(&[1, 1]), p(&[1, 0, -1]));
        assert_eq!(&p(&[2, 3]) + &p(&[-2, -3]), LambdaPoly::zero());
    }

    #[test]
    fn eval_is_ring_homomorphism() {
        let a = p(&[1, -2, 3]);
        let b = p(&[0, 5, -1]);
        for l in [rat_int(0), rat(1, 2), rat(-7, 3), rat_int(4)] {
            assert_eq!((&a * &b).eval(&l), a.eval(&l) * b.eval(&l));
            assert_eq!((&a + &b).eval(&l), a.eval(&l) + b.eval(&l));
        }
    }
}

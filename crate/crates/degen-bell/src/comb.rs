//! Binomials, factorials, and the degenerate falling factorial.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::lambda_poly::LambdaPoly;
use crate::rational::{rat_usize, Rat};

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

pub fn factorial_rat(n: u32) -> Rat {
    Rat::from_integer(factorial(n))
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> Rat {
    if k > n {
        return Rat::zero();
    }
    Rat::from_integer(num_integer::binomial(BigInt::from(n), BigInt::from(k)))
}

/// Classical falling factorial `(x)_k = x(x-1)...(x-k+1)`, `(x)_0 = 1`.
pub fn falling_factorial(x: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    for j in 0..k {
        acc *= x - rat_usize(j as usize);
    }
    acc
}

/// Degenerate falling factorial `(x)_{n,lambda} = x(x-lambda)...(x-(n-1)lambda)`.
///
/// At `lambda = 0` this is exactly `x^n`; no special casing is needed.
pub fn deg_falling(x: &Rat, n: u32, lambda: &Rat) -> Rat {
    let mut acc = Rat::one();
    for j in 0..n {
        acc *= x - rat_usize(j as usize) * lambda;
    }
    acc
}

/// `(x)_{n,lambda}` with the parameter left symbolic: a polynomial in the
/// parameter of degree at most `n - 1` (constant for `n <= 1`).
pub fn deg_falling_sym(x: &Rat, n: u32) -> LambdaPoly {
    let mut acc = LambdaPoly::one();
    for j in 0..n {
        acc = &acc * &LambdaPoly::linear(x.clone(), -rat_usize(j as usize));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    /// Pascal-triangle oracle, additions only.
    fn binomial_pascal(n: usize, k: usize) -> u128 {
        let mut row = vec![0u128; k + 1];
        row[0] = 1;
        for _ in 1..=n {
            for c in (1..=k).rev() {
                row[c] += row[c - 1];
            }
        }
        row[k]
    }

    #[test]
    fn binomial_matches_pascal_oracle() {
        assert_eq!(binomial(5, 2), rat_int(10));
        for n in 0..=12u32 {
            for k in 0..=n {
                assert_eq!(
                    binomial(n, k),
                    rat_int(binomial_pascal(n as usize, k as usize) as i64)
                );
            }
            assert_eq!(binomial(n, 0), rat_int(1));
        }
        assert_eq!(binomial(3, 7), rat_int(0));
    }

    #[test]
    fn deg_falling_direct_products() {
        // 2 * (2 - 1/2) * (2 - 1) = 2 * 3/2 * 1 = 3
        assert_eq!(deg_falling(&rat_int(2), 3, &rat(1, 2)), rat_int(3));
        assert_eq!(deg_falling(&rat(7, 5), 0, &rat(2, 3)), rat_int(1));
        // factor (1 - 1) vanishes
        assert_eq!(deg_falling(&rat_int(1), 2, &rat_int(1)), rat_int(0));
    }

    #[test]
    fn deg_falling_at_zero_is_power() {
        for (x, n) in [(rat(2, 3), 5u32), (rat_int(-4), 3), (rat_int(0), 4)] {
            assert_eq!(
                deg_falling(&x, n, &rat_int(0)),
                crate::rational::pow_rat(&x, n)
            );
        }
    }

    #[test]
    fn symbolic_falling_matches_examples() {
        // (1)(1 - L) = 1 - L
        assert_eq!(
            deg_falling_sym(&rat_int(1), 2),
            LambdaPoly::from_coeffs(vec![rat_int(1), rat_int(-1)])
        );
        assert_eq!(
            deg_falling_sym(&rat_int(3), 1),
            LambdaPoly::constant(rat_int(3))
        );
        // 2(2 - L) = 4 - 2L
        assert_eq!(
            deg_falling_sym(&rat_int(2), 2),
            LambdaPoly::from_coeffs(vec![rat_int(4), rat_int(-2)])
        );
    }

    #[test]
    fn symbolic_falling_evaluates_to_scalar_form() {
        for x in [rat(3, 4), rat_int(-2)] {
            for n in 0..=6u32 {
                let poly = deg_falling_sym(&x, n);
                assert!(poly.degree() <= (n as usize).saturating_sub(1));
                for l in [rat_int(0), rat(1, 3), rat_int(-1)] {
                    assert_eq!(poly.eval(&l), deg_falling(&x, n, &l));
                }
            }
        }
    }

    #[test]
    fn vandermonde_convolution() {
        let (x, y) = (rat(2, 3), rat(-1, 2));
        for lambda in [rat_int(0), rat(1, 2), rat(-2, 5)] {
            for n in 0..=12u32 {
                let lhs = deg_falling(&(x.clone() + y.clone()), n, &lambda);
                let mut rhs = Rat::zero();
                for l in 0..=n {
                    rhs += binomial(n, l)
                        * deg_falling(&x, l, &lambda)
                        * deg_falling(&y, n - l, &lambda);
                }
                assert_eq!(lhs, rhs, "n={n} lambda={lambda}");
            }
        }
    }

    #[test]
    fn shift_recurrence() {
        let x = rat(5, 7);
        let lambda = rat(1, 3);
        for n in 0..=10u32 {
            for m in 0..=10u32 {
                let lhs = deg_falling(&x, n + m, &lambda);
                let shifted = x.clone() - rat_int(m as i64) * lambda.clone();
                let rhs = deg_falling(&shifted, n, &lambda) * deg_falling(&x, m, &lambda);
                assert_eq!(lhs, rhs);
            }
        }
    }
}

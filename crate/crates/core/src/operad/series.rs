//! Truncated formal power series with rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::OperadError;

/// `coeffs[k]` is the coefficient of `x^k`, for `k <= order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<BigRational>,
}

impl Series {
    pub fn from_coeffs(order: usize, mut coeffs: Vec<BigRational>) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, v: BigRational) {
        self.coeffs[k] = v;
    }

    pub fn mul(&self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Series { coeffs: out }
    }

    /// `self(inner(x))`; `inner` must have no constant term.
    pub fn compose(&self, inner: &Series) -> Series {
        assert!(inner.coeff(0).is_zero(), "inner series must vanish at 0");
        let n = self.order().min(inner.order());
        let mut out = vec![BigRational::zero(); n + 1];
        let mut power = Series::from_coeffs(n, vec![BigRational::one()]);
        for k in 0..=n {
            let c = self.coeff(k);
            if !c.is_zero() {
                for (slot, p) in out.iter_mut().zip(power.coeffs.iter()) {
                    *slot += c * p;
                }
            }
            power = power.mul(inner);
        }
        Series { coeffs: out }
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn signed(negative: bool, v: BigRational) -> BigRational {
    if negative {
        -v
    } else {
        v
    }
}

/// `g(x) = Σ_{n ≥ 1} n^{n-1} (-x)^n / n!`, truncated at `order`.
pub fn rooted_tree_series(order: usize) -> Series {
    let mut coeffs = vec![BigRational::zero(); order + 1];
    for (n, slot) in coeffs.iter_mut().enumerate().skip(1) {
        let count = BigInt::from(n).pow(n as u32 - 1);
        *slot = signed(n % 2 == 1, BigRational::new(count, factorial(n)));
    }
    Series { coeffs }
}

/// `f(x) = -x e^{-x}`, truncated at `order`.
pub fn neg_x_exp_neg_x(order: usize) -> Series {
    let mut coeffs = vec![BigRational::zero(); order + 1];
    for (k, slot) in coeffs.iter_mut().enumerate().skip(1) {
        *slot = signed(k % 2 == 1, BigRational::new(BigInt::one(), factorial(k - 1)));
    }
    Series { coeffs }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesCheckReport {
    pub order: usize,
    /// Coefficients of `(g ∘ f)(x) - x` at orders `1..=order`.
    #[serde(serialize_with = "serialize_rationals")]
    pub residual_coefficients: Vec<BigRational>,
}

impl SeriesCheckReport {
    pub fn passed(&self) -> bool {
        self.residual_coefficients.iter().all(Zero::is_zero)
    }
}

fn serialize_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

/// Residuals of `(g ∘ f)(x) - x` for an arbitrary outer series `g`.
pub fn inverse_residuals(outer: &Series) -> SeriesCheckReport {
    let order = outer.order();
    let composed = outer.compose(&neg_x_exp_neg_x(order));
    let residual_coefficients = (1..=order)
        .map(|k| {
            let c = composed.coeff(k).clone();
            if k == 1 {
                c - BigRational::one()
            } else {
                c
            }
        })
        .collect();
    SeriesCheckReport { order, residual_coefficients }
}

/// Checks that the exponential generating series of rooted-tree counts
/// inverts `x ↦ -x e^{-x}` through `order`.
pub fn series_inverse_check(order: usize) -> Result<SeriesCheckReport, OperadError> {
    if !(1..=30).contains(&order) {
        return Err(OperadError::OrderOutOfRange(order));
    }
    Ok(inverse_residuals(&rooted_tree_series(order)))
}

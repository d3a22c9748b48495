//! Test functions `f` applied to spectra and symbols.

use crate::error::{domain, Result};

/// A real polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut coeffs = coeffs.into();
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    /// `x^m`.
    pub fn monomial(m: usize) -> Self {
        let mut c = vec![0.0; m + 1];
        c[m] = 1.0;
        Self::new(c)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, x: num_complex::Complex64) -> num_complex::Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(num_complex::Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }
}

/// A function applied to eigenvalues or symbol values.
#[derive(Clone, Debug, PartialEq)]
pub enum SpectralFunction {
    Polynomial(Polynomial),
    /// Natural logarithm; defined on `(0, ∞)`.
    Log,
    Exp,
    /// Square root; defined on `[0, ∞)`.
    Sqrt,
    Abs,
    /// Indicator of the open interval `(lo, hi)`.
    Indicator { lo: f64, hi: f64 },
    /// Piecewise-linear ramp approximating the indicator of `(lo, hi)`:
    /// zero outside `(lo − width, hi + width)`, one on `[lo, hi]`.
    SmoothIndicator { lo: f64, hi: f64, width: f64 },
}

impl SpectralFunction {
    pub fn power(m: usize) -> Self {
        Self::Polynomial(Polynomial::monomial(m))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Polynomial(p) => p.eval(x),
            Self::Log => x.ln(),
            Self::Exp => x.exp(),
            Self::Sqrt => x.sqrt(),
            Self::Abs => x.abs(),
            Self::Indicator { lo, hi } => {
                if x > *lo && x < *hi {
                    1.0
                } else {
                    0.0
                }
            }
            Self::SmoothIndicator { lo, hi, width } => {
                if x >= *lo && x <= *hi {
                    1.0
                } else if x < *lo {
                    (1.0 - (lo - x) / width).max(0.0)
                } else {
                    (1.0 - (x - hi) / width).max(0.0)
                }
            }
        }
    }

    /// Check that `f` is defined on `[lo, hi]`.
    pub fn check_domain(&self, lo: f64, hi: f64) -> Result<()> {
        match self {
            Self::Log if lo <= 0.0 => domain(format!("log undefined on [{lo:e}, {hi:e}]")),
            Self::Sqrt if lo < 0.0 => domain(format!("sqrt undefined on [{lo:e}, {hi:e}]")),
            Self::SmoothIndicator { width, .. } if *width <= 0.0 => {
                domain("smooth indicator needs a positive width")
            }
            _ => Ok(()),
        }
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match self {
            Self::Polynomial(p) => Some(p),
            _ => None,
        }
    }
}

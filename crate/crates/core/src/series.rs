//! Truncated power series with exact rational coefficients.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{qfact, qi, Q};

/// Coefficients of `x^0 ..= x^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Q>,
}

impl Series {
    pub fn new(mut coeffs: Vec<Q>, order: usize) -> Self {
        coeffs.resize(order + 1, Q::zero());
        Series { coeffs }
    }

    pub fn from_fn(order: usize, f: impl Fn(usize) -> Q) -> Self {
        Series {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Q {
        self.coeffs.get(n).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn mul(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        Series::from_fn(order, |n| {
            (0..=n)
                .map(|k| &self.coeffs[k] * &other.coeffs[n - k])
                .sum()
        })
    }

    pub fn scale(&self, c: &Q) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Logarithm of a series with constant term one.
    pub fn log(&self) -> Result<Series> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Domain("logarithm needs constant term one".into()));
        }
        let f = &self.coeffs;
        let mut g = vec![Q::zero(); f.len()];
        for n in 1..f.len() {
            let mut acc = qi(n as i64) * &f[n];
            for k in 1..n {
                acc -= qi(k as i64) * &g[k] * &f[n - k];
            }
            g[n] = acc / qi(n as i64);
        }
        Ok(Series { coeffs: g })
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("exponential needs constant term zero".into()));
        }
        let g = &self.coeffs;
        let mut e = vec![Q::zero(); g.len()];
        e[0] = Q::one();
        for n in 1..g.len() {
            let mut acc = Q::zero();
            for k in 1..=n {
                acc += qi(k as i64) * &g[k] * &e[n - k];
            }
            e[n] = acc / qi(n as i64);
        }
        Ok(Series { coeffs: e })
    }
}

/// `sinh(x/2)/(x/2)` to the given order.
pub fn sinhc_half(order: usize) -> Series {
    Series::from_fn(order, |n| {
        if n % 2 == 1 {
            return Q::zero();
        }
        let k = n / 2;
        Q::one() / (qfact(2 * k + 1) * Q::from_integer(num_bigint::BigInt::from(4).pow(k as u32)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn log_and_exp_are_inverse() {
        let s = Series::new(vec![qi(1), q(1, 2), q(-1, 3), qi(2)], 6);
        let back = s.log().unwrap().exp().unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn exp_of_x() {
        let e = Series::new(vec![qi(0), qi(1)], 5).exp().unwrap();
        for n in 0..=5 {
            assert_eq!(e.coeff(n), Q::one() / qfact(n));
        }
    }

    #[test]
    fn sinhc_leading_terms() {
        let s = sinhc_half(4);
        assert_eq!(s.coeff(0), qi(1));
        assert_eq!(s.coeff(2), q(1, 24));
        assert_eq!(s.coeff(4), q(1, 1920));
    }
}

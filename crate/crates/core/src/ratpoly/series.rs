use num::{BigInt, One, Zero};

use crate::error::{Error, Result};

use super::poly::TruncatedPolynomial;
use super::rational::Rational;
use super::ring::RingSpec;

/// Power series `sum_j c_j x^j` kept to `top_degree + 1` coefficients of some ring.
///
/// Everything past the top degree multiplies to zero in the ring, so nothing is lost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariateSeries {
    coeffs: Vec<Rational>,
}

impl UnivariateSeries {
    /// Pads with zeros or truncates to the ring's length.
    pub fn from_coefficients(ring: &RingSpec, mut coeffs: Vec<Rational>) -> Self {
        coeffs.resize(len_for(ring), Rational::zero());
        UnivariateSeries { coeffs }
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    /// `1 + x`
    pub fn total_chern(ring: &RingSpec) -> Self {
        Self::from_coefficients(ring, vec![Rational::one(), Rational::one()])
    }

    pub fn exp(ring: &RingSpec) -> Self {
        UnivariateSeries {
            coeffs: exp_coeffs(len_for(ring)),
        }
    }

    /// `x / (1 - exp(-x))`
    pub fn todd(ring: &RingSpec) -> Self {
        let n = len_for(ring);
        // (1 - exp(-x))/x = sum (-1)^j x^j/(j+1)!
        let shifted: Vec<Rational> = exp_coeffs(n + 1)
            .into_iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| if j % 2 == 0 { -c } else { c })
            .collect();
        UnivariateSeries {
            coeffs: reciprocal(&shifted, n).expect("constant term 1"),
        }
    }

    /// `x / tanh(x)`
    pub fn l_class(ring: &RingSpec) -> Self {
        let n = len_for(ring);
        let (sinh, cosh) = sinh_cosh(n + 1);
        let sinh_over_x = &sinh[1..];
        let inv = reciprocal(sinh_over_x, n).expect("constant term 1");
        UnivariateSeries {
            coeffs: multiply(&cosh[..n], &inv, n),
        }
    }

    pub fn tanh(ring: &RingSpec) -> Self {
        let n = len_for(ring);
        let (sinh, cosh) = sinh_cosh(n);
        let inv = reciprocal(&cosh, n).expect("constant term 1");
        UnivariateSeries {
            coeffs: multiply(&sinh, &inv, n),
        }
    }

    /// `x / (1 + x)`
    pub fn x_over_one_plus_x(ring: &RingSpec) -> Self {
        let n = len_for(ring);
        let inv = reciprocal(&[Rational::one(), Rational::one()], n).expect("constant term 1");
        let mut coeffs = vec![Rational::zero()];
        coeffs.extend(inv.into_iter().take(n - 1));
        UnivariateSeries { coeffs }
    }

    pub fn reciprocal(&self) -> Result<Self> {
        Ok(UnivariateSeries {
            coeffs: reciprocal(&self.coeffs, self.coeffs.len())?,
        })
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        UnivariateSeries {
            coeffs: multiply(&self.coeffs, &other.coeffs, n),
        }
    }

    /// `f(x)` for nilpotent `x` (zero constant term).
    pub fn eval(&self, x: &TruncatedPolynomial) -> Result<TruncatedPolynomial> {
        if !x.constant_term().is_zero() {
            return Err(Error::NotNilpotent);
        }
        let needed = x.ring().top_degree() as usize + 1;
        if self.coeffs.len() < needed {
            return Err(Error::Arity {
                what: "series coefficients",
                expected: needed,
                got: self.coeffs.len(),
            });
        }
        let ring = x.ring();
        let mut acc = TruncatedPolynomial::zero(ring);
        for c in self.coeffs[..needed].iter().rev() {
            acc = &acc * x;
            acc = &acc + &TruncatedPolynomial::constant(ring, c.clone());
        }
        Ok(acc)
    }
}

fn len_for(ring: &RingSpec) -> usize {
    ring.top_degree() as usize + 1
}

fn exp_coeffs(n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n);
    let mut fact = BigInt::one();
    for j in 0..n {
        if j > 0 {
            fact *= j;
        }
        out.push(Rational::new(BigInt::one(), fact.clone()));
    }
    out
}

fn sinh_cosh(n: usize) -> (Vec<Rational>, Vec<Rational>) {
    let e = exp_coeffs(n);
    let pick = |parity: usize| {
        e.iter()
            .enumerate()
            .map(|(j, c)| if j % 2 == parity { c.clone() } else { Rational::zero() })
            .collect::<Vec<_>>()
    };
    (pick(1), pick(0))
}

fn multiply(a: &[Rational], b: &[Rational], n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Truncated inverse by the recurrence `g_m = -(1/f_0) sum_{j=1..m} f_j g_{m-j}`.
fn reciprocal(f: &[Rational], n: usize) -> Result<Vec<Rational>> {
    let f0 = f.first().cloned().unwrap_or_else(Rational::zero);
    if f0.is_zero() {
        return Err(Error::NotInvertible);
    }
    let inv0 = f0.recip();
    let mut g: Vec<Rational> = Vec::with_capacity(n);
    for m in 0..n {
        if m == 0 {
            g.push(inv0.clone());
            continue;
        }
        let mut s = Rational::zero();
        for j in 1..=m.min(f.len() - 1) {
            s += &f[j] * &g[m - j];
        }
        g.push(-s * &inv0);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::TruncatedPolynomial;
    use std::sync::Arc;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn line(n: u32) -> Arc<RingSpec> {
        RingSpec::new(1, vec![n]).unwrap()
    }

    #[test]
    fn truncated_exponential() {
        let r = line(3);
        let u = TruncatedPolynomial::variable(&r, 0).unwrap();
        let e = UnivariateSeries::exp(&r).eval(&u).unwrap();
        assert_eq!(e, TruncatedPolynomial::parse(&r, "1 + u1 + 1/2*u1^2").unwrap());
    }

    #[test]
    fn eval_rejects_constant_term() {
        let r = line(3);
        let x = TruncatedPolynomial::parse(&r, "1 + u1").unwrap();
        assert_eq!(UnivariateSeries::exp(&r).eval(&x), Err(Error::NotNilpotent));
    }

    #[test]
    fn eval_rejects_short_series() {
        let small = line(2);
        let big = line(5);
        let u = TruncatedPolynomial::variable(&big, 0).unwrap();
        assert!(UnivariateSeries::exp(&small).eval(&u).is_err());
    }

    #[test]
    fn reciprocal_needs_unit() {
        let r = line(4);
        let s = UnivariateSeries::from_coefficients(&r, vec![q(0, 1), q(1, 1)]);
        assert_eq!(s.reciprocal(), Err(Error::NotInvertible));
        let two = UnivariateSeries::from_coefficients(&r, vec![q(2, 1)]);
        assert_eq!(two.reciprocal().unwrap().coefficients()[0], q(1, 2));
    }

    #[test]
    fn length_is_fixed_by_ring() {
        let r = line(3);
        let s = UnivariateSeries::from_coefficients(&r, (0..10).map(|j| q(j, 1)).collect());
        assert_eq!(s.len(), 3);
        assert_eq!(
            UnivariateSeries::total_chern(&r).coefficients(),
            &[q(1, 1), q(1, 1), q(0, 1)]
        );
    }
}

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// The ring `Q[u_1..u_k]/(u_i^{n_i})`. Every variable has degree 1 (cohomological degree 2).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingSpec {
    truncations: Vec<u32>,
    top_degree: u32,
}

impl RingSpec {
    pub fn new(k: usize, truncations: Vec<u32>) -> Result<Arc<Self>> {
        if k == 0 {
            return Err(Error::InvalidRing("at least one variable is required".into()));
        }
        if truncations.len() != k {
            return Err(Error::Arity {
                what: "truncation exponents",
                expected: k,
                got: truncations.len(),
            });
        }
        if let Some(i) = truncations.iter().position(|&n| n == 0) {
            return Err(Error::InvalidRing(format!(
                "truncation exponent of u{} must be positive",
                i + 1
            )));
        }
        let top_degree = truncations.iter().map(|n| n - 1).sum();
        Ok(Arc::new(RingSpec {
            truncations,
            top_degree,
        }))
    }

    pub fn variable_count(&self) -> usize {
        self.truncations.len()
    }

    pub fn truncations(&self) -> &[u32] {
        &self.truncations
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    /// `u_1^{n_1-1} .. u_k^{n_k-1}`, the unique monomial of top degree.
    pub fn top_monomial(&self) -> Monomial {
        Monomial(self.truncations.iter().map(|n| n - 1).collect())
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        m.0.len() == self.truncations.len() && m.0.iter().zip(&self.truncations).all(|(e, n)| e < n)
    }

    /// All surviving monomials of degree `d`, in increasing lexicographic order.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = vec![0u32; self.truncations.len()];
        self.fill_monomials(0, d, &mut current, &mut out);
        out.reverse();
        out
    }

    fn fill_monomials(&self, i: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let k = self.truncations.len();
        if i == k {
            if remaining == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let rest_capacity: u32 = self.truncations[i + 1..].iter().map(|n| n - 1).sum();
        let hi = remaining.min(self.truncations[i] - 1);
        for e in (0..=hi).rev() {
            if remaining - e > rest_capacity {
                break;
            }
            cur[i] = e;
            self.fill_monomials(i + 1, remaining - e, cur, out);
        }
        cur[i] = 0;
    }
}

/// Exponent vector of a monomial. Ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(k: usize) -> Self {
        Monomial(vec![0; k])
    }

    pub fn variable(k: usize, i: usize) -> Self {
        let mut e = vec![0; k];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "u{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_degrees() {
        assert_eq!(RingSpec::new(2, vec![4, 4]).unwrap().top_degree(), 6);
        assert_eq!(RingSpec::new(1, vec![5]).unwrap().top_degree(), 4);
        assert_eq!(RingSpec::new(3, vec![2, 2, 2]).unwrap().top_degree(), 3);
    }

    #[test]
    fn rejects_bad_rings() {
        assert!(RingSpec::new(0, vec![]).is_err());
        assert!(RingSpec::new(2, vec![3, 0]).is_err());
        assert!(RingSpec::new(2, vec![3]).is_err());
    }

    #[test]
    fn monomial_enumeration() {
        let r = RingSpec::new(2, vec![4, 4]).unwrap();
        let d5 = r.monomials_of_degree(5);
        assert_eq!(d5, vec![Monomial(vec![2, 3]), Monomial(vec![3, 2])]);
        let total: usize = (0..=6).map(|d| r.monomials_of_degree(d).len()).sum();
        assert_eq!(total, 16);
        assert!(r.monomials_of_degree(7).is_empty());
        assert_eq!(r.top_monomial().to_string(), "u1^3*u2^3");
    }
}

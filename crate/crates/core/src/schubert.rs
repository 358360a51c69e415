//! Schubert calculus on `G(k,n)` via the dual Pieri rule.
//!
//! Works on partitions in a `k x (n-k)` box and shares no code with the polynomial engine,
//! so it can check the torus-side integration formula independently.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, Zero};

use crate::error::{Error, Result};

/// Weakly decreasing parts, trailing zeros stripped.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidModel(format!("{parts:?} is not weakly decreasing")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    /// `((n-k)^k)`, the class of a point.
    pub fn full_box(b: BoxShape) -> Self {
        Partition::new(vec![b.cols; b.rows]).expect("constant parts")
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn fits(&self, b: BoxShape) -> bool {
        self.0.len() <= b.rows && self.0.first().is_none_or(|&p| p <= b.cols)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `rows = k`, `cols = n - k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoxShape {
    pub rows: usize,
    pub cols: usize,
}

impl BoxShape {
    pub fn grassmannian(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidModel(format!("G({k},{n}) needs 1 <= k <= n")));
        }
        Ok(BoxShape { rows: k, cols: n - k })
    }
}

/// Integer combination of Schubert classes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SchubertCycle(BTreeMap<Partition, BigInt>);

impl SchubertCycle {
    pub fn unit() -> Self {
        SchubertCycle(BTreeMap::from([(Partition::empty(), BigInt::from(1))]))
    }

    pub fn coefficient(&self, p: &Partition) -> BigInt {
        self.0.get(p).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &BigInt)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// Multiplies by `sigma_{1^i} = c_i(V*)`: adds vertical strips of `i` boxes inside the box.
pub fn pieri_e_multiply(c: &SchubertCycle, i: usize, b: BoxShape) -> Result<SchubertCycle> {
    if i == 0 || i > b.rows {
        return Err(Error::OutOfRange {
            what: "Pieri index",
            value: i as i64,
            max: b.rows as i64,
        });
    }
    let mut out: BTreeMap<Partition, BigInt> = BTreeMap::new();
    for (lambda, coeff) in &c.0 {
        let mut padded = lambda.0.clone();
        padded.resize(b.rows, 0);
        for_each_row_subset(b.rows, i, &mut |rows| {
            let mut mu = padded.clone();
            for &r in rows {
                mu[r] += 1;
            }
            let valid = mu[0] <= b.cols && mu.windows(2).all(|w| w[0] >= w[1]);
            if valid {
                let key = Partition::new(mu).expect("checked decreasing");
                *out.entry(key).or_insert_with(BigInt::zero) += coeff;
            }
        });
    }
    out.retain(|_, v| !v.is_zero());
    Ok(SchubertCycle(out))
}

fn for_each_row_subset(n: usize, size: usize, f: &mut impl FnMut(&[usize])) {
    fn go(n: usize, size: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for r in start..n {
            cur.push(r);
            go(n, size, r + 1, cur, f);
            cur.pop();
        }
    }
    go(n, size, 0, &mut Vec::with_capacity(size), f);
}

/// `int_{G(k,n)} c_1(V*)^{m_1} .. c_k(V*)^{m_k}` by repeated Pieri multiplication.
pub fn oracle_chern_pairing(k: usize, n: usize, exponents: &[u64]) -> Result<BigRational> {
    let order: Vec<usize> = exponents
        .iter()
        .enumerate()
        .flat_map(|(i, &m)| std::iter::repeat_n(i + 1, m as usize))
        .collect();
    oracle_chern_pairing_ordered(k, n, exponents.len(), &order)
}

/// As [`oracle_chern_pairing`], applying the factors `c_i` in the given order.
pub fn oracle_chern_pairing_ordered(k: usize, n: usize, arity: usize, order: &[usize]) -> Result<BigRational> {
    let b = BoxShape::grassmannian(k, n)?;
    if arity != k {
        return Err(Error::Arity {
            what: "Chern exponents",
            expected: k,
            got: arity,
        });
    }
    let degree: usize = order.iter().sum();
    if degree != k * (n - k) {
        return Ok(BigRational::zero());
    }
    let mut cycle = SchubertCycle::unit();
    for &i in order {
        cycle = pieri_e_multiply(&cycle, i, b)?;
    }
    Ok(BigRational::from_integer(cycle.coefficient(&Partition::full_box(b))))
}

/// Number of partitions of each size `0..=k(n-k)` fitting in the box.
pub fn oracle_betti(k: usize, n: usize) -> Result<Vec<usize>> {
    let b = BoxShape::grassmannian(k, n)?;
    let mut counts = vec![0usize; b.rows * b.cols + 1];
    fn go(row: usize, max_part: usize, size: usize, b: BoxShape, counts: &mut [usize]) {
        if row == b.rows {
            counts[size] += 1;
            return;
        }
        for part in 0..=max_part {
            go(row + 1, part, size + part, b, counts);
        }
    }
    go(0, b.cols, 0, b, &mut counts);
    Ok(counts)
}

//! Roots, positive systems and Weyl groups, and the Euler classes `e(alpha)` they define.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ratpoly::{PermutationGroup, RingSpec, TruncatedPolynomial};

/// Weyl orders above this are trusted without enumerating the group.
pub const WEYL_ENUMERATION_LIMIT: u64 = 1_000_000;

/// Integer vector in the weight lattice of `T = (S^1)^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn negated(&self) -> Weight {
        Weight(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Roots `Delta` with a positive system `Delta+` and the Weyl group acting on the variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootData {
    roots: Vec<Weight>,
    positive: Vec<bool>,
    weyl: PermutationGroup,
    weyl_order: u64,
}

#[derive(Debug, Clone, Copy)]
pub enum RootSubset<'a> {
    All,
    Positive,
    Negative,
    /// Roots not in the given set, which must be contained in the root set.
    ComplementOf(&'a [Weight]),
}

impl RootData {
    pub fn new(roots: Vec<Weight>, positive: &[usize], weyl: PermutationGroup, weyl_order: u64) -> Result<Self> {
        let k = weyl.arity();
        let invalid = |m: String| Err(Error::InvalidRootData(m));
        for (i, r) in roots.iter().enumerate() {
            if r.0.len() != k {
                return invalid(format!("root {i} has {} components, expected {k}", r.0.len()));
            }
            if r.is_zero() {
                return invalid(format!("root {i} is the zero weight"));
            }
        }
        let set: HashSet<&Weight> = roots.iter().collect();
        if set.len() != roots.len() {
            return invalid("root list contains duplicates".into());
        }
        let mut is_positive = vec![false; roots.len()];
        for &p in positive {
            if p >= roots.len() {
                return invalid(format!("positive root index {p} out of range"));
            }
            if is_positive[p] {
                return invalid(format!("positive root index {p} repeated"));
            }
            is_positive[p] = true;
        }
        let negatives: HashSet<Weight> = roots
            .iter()
            .zip(&is_positive)
            .filter(|(_, &p)| p)
            .map(|(r, _)| r.negated())
            .collect();
        let complement: HashSet<Weight> = roots
            .iter()
            .zip(&is_positive)
            .filter(|(_, &p)| !p)
            .map(|(r, _)| r.clone())
            .collect();
        if negatives != complement {
            return invalid("roots are not the disjoint union of the positive roots and their negatives".into());
        }
        for g in weyl.generators() {
            if let Some(r) = roots.iter().find(|r| !set.contains(&Weight(g.apply_linear(&r.0)))) {
                return invalid(format!("Weyl generator {g} maps root {r} outside the root set"));
            }
        }
        if weyl_order == 0 {
            return invalid("Weyl group order must be positive".into());
        }
        if k <= 8 && weyl_order <= WEYL_ENUMERATION_LIMIT {
            match weyl.order(weyl_order as usize) {
                Some(n) if n as u64 == weyl_order => {}
                Some(n) => return invalid(format!("generators produce a group of order {n}, not {weyl_order}")),
                None => return invalid(format!("generators produce a group larger than {weyl_order}")),
            }
        }
        Ok(RootData {
            roots,
            positive: is_positive,
            weyl,
            weyl_order,
        })
    }

    /// Roots of `U(k)`: pair `(i,j)` has `-1` at `i` and `+1` at `j`; positive when `i < j`.
    pub fn unitary(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidRootData("U(0) has no maximal torus".into()));
        }
        let mut roots = Vec::with_capacity(k * (k - 1));
        let mut positive = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let mut w = vec![0; k];
                w[i] = -1;
                w[j] = 1;
                if i < j {
                    positive.push(roots.len());
                }
                roots.push(Weight(w));
            }
        }
        let order = (1..=k as u64).product();
        Ok(RootData {
            positive: (0..roots.len()).map(|i| positive.contains(&i)).collect(),
            roots,
            weyl: PermutationGroup::symmetric(k),
            weyl_order: order,
        })
    }

    /// Same roots with `-Delta+` as the positive system.
    pub fn with_opposite_positive(&self) -> Self {
        RootData {
            positive: self.positive.iter().map(|p| !p).collect(),
            ..self.clone()
        }
    }

    pub fn rank(&self) -> usize {
        self.weyl.arity()
    }

    pub fn roots(&self) -> &[Weight] {
        &self.roots
    }

    pub fn positive_indices(&self) -> Vec<usize> {
        (0..self.roots.len()).filter(|&i| self.positive[i]).collect()
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Weight> {
        self.roots
            .iter()
            .zip(&self.positive)
            .filter(|(_, &p)| p)
            .map(|(r, _)| r)
    }

    pub fn negative_roots(&self) -> impl Iterator<Item = &Weight> {
        self.roots
            .iter()
            .zip(&self.positive)
            .filter(|(_, &p)| !p)
            .map(|(r, _)| r)
    }

    pub fn weyl(&self) -> &PermutationGroup {
        &self.weyl
    }

    pub fn weyl_order(&self) -> u64 {
        self.weyl_order
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.roots.contains(w)
    }

    pub fn select(&self, subset: RootSubset<'_>) -> Result<Vec<&Weight>> {
        Ok(match subset {
            RootSubset::All => self.roots.iter().collect(),
            RootSubset::Positive => self.positive_roots().collect(),
            RootSubset::Negative => self.negative_roots().collect(),
            RootSubset::ComplementOf(other) => {
                if let Some(w) = other.iter().find(|w| !self.contains(w)) {
                    return Err(Error::InvalidRootData(format!(
                        "subgroup root {w} is not a root of the group"
                    )));
                }
                self.roots.iter().filter(|r| !other.contains(r)).collect()
            }
        })
    }
}

/// `e(alpha) = sum_i alpha_i u_i`.
pub fn root_euler_class(ring: &Arc<RingSpec>, w: &Weight) -> Result<TruncatedPolynomial> {
    TruncatedPolynomial::linear(ring, &w.0)
}

/// Product of `e(alpha)` over the selected roots, in root-list order; empty product is 1.
pub fn e_product(ring: &Arc<RingSpec>, rd: &RootData, subset: RootSubset<'_>) -> Result<TruncatedPolynomial> {
    let mut acc = TruncatedPolynomial::one(ring);
    for w in rd.select(subset)? {
        acc = acc.try_mul(&root_euler_class(ring, w)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::{Rational, SignedPermutation, SymmetrizeMode};

    fn ring(k: usize, n: u32) -> Arc<RingSpec> {
        RingSpec::new(k, vec![n; k]).unwrap()
    }

    fn p(r: &Arc<RingSpec>, s: &str) -> TruncatedPolynomial {
        TruncatedPolynomial::parse(r, s).unwrap()
    }

    #[test]
    fn unitary_root_counts() {
        let rd1 = RootData::unitary(1).unwrap();
        assert!(rd1.roots().is_empty());
        assert_eq!(rd1.weyl_order(), 1);
        let rd2 = RootData::unitary(2).unwrap();
        assert_eq!(rd2.roots(), &[Weight(vec![-1, 1]), Weight(vec![1, -1])]);
        assert_eq!(rd2.positive_roots().collect::<Vec<_>>(), vec![&Weight(vec![-1, 1])]);
        assert_eq!(rd2.weyl_order(), 2);
        for k in 1..=5 {
            let rd = RootData::unitary(k).unwrap();
            assert_eq!(rd.roots().len(), k * (k - 1));
            assert_eq!(rd.weyl_order(), (1..=k as u64).product::<u64>());
            assert_eq!(rd.weyl().order(1000), Some(rd.weyl_order() as usize));
        }
        assert!(RootData::unitary(0).is_err());
    }

    #[test]
    fn euler_classes_of_weights() {
        let r2 = ring(2, 4);
        assert_eq!(root_euler_class(&r2, &Weight(vec![-1, 1])).unwrap(), p(&r2, "u2 - u1"));
        assert!(root_euler_class(&r2, &Weight(vec![0, 0])).unwrap().is_zero());
        let r3 = ring(3, 4);
        assert_eq!(root_euler_class(&r3, &Weight(vec![2, 0, 0])).unwrap(), p(&r3, "2*u1"));
        assert!(root_euler_class(&r3, &Weight(vec![1, 0])).is_err());
    }

    #[test]
    fn e_products() {
        let r1 = ring(1, 4);
        let rd1 = RootData::unitary(1).unwrap();
        assert_eq!(
            e_product(&r1, &rd1, RootSubset::All).unwrap(),
            TruncatedPolynomial::one(&r1)
        );
        let r2 = ring(2, 4);
        let rd2 = RootData::unitary(2).unwrap();
        assert_eq!(
            e_product(&r2, &rd2, RootSubset::All).unwrap(),
            p(&r2, "-u1^2 + 2*u1*u2 - u2^2")
        );
        assert_eq!(e_product(&r2, &rd2, RootSubset::Positive).unwrap(), p(&r2, "u2 - u1"));
        let h = [Weight(vec![1, -1])];
        assert_eq!(
            e_product(&r2, &rd2, RootSubset::ComplementOf(&h)).unwrap(),
            p(&r2, "u2 - u1")
        );
        let bad = [Weight(vec![1, 1])];
        assert!(e_product(&r2, &rd2, RootSubset::ComplementOf(&bad)).is_err());
    }

    #[test]
    fn e_is_weyl_invariant_and_squares_vandermonde() {
        for k in 1..=4usize {
            let r = ring(k, 2 * k as u32 + 1);
            let rd = RootData::unitary(k).unwrap();
            let e = e_product(&r, &rd, RootSubset::All).unwrap();
            for g in rd.weyl().generators() {
                let single = PermutationGroup::new(k, vec![g.clone()]).unwrap();
                // averaging over <g> fixes exactly the g-invariant elements
                let moved = e.symmetrize(&single, SymmetrizeMode::Average).unwrap();
                assert_eq!(moved, e);
            }
            let mut vandermonde = TruncatedPolynomial::one(&r);
            for i in 0..k {
                for j in i + 1..k {
                    let mut w = vec![0; k];
                    w[i] = 1;
                    w[j] = -1;
                    vandermonde = &vandermonde * &TruncatedPolynomial::linear(&r, &w).unwrap();
                }
            }
            let sign = if (k * (k - 1) / 2) % 2 == 0 { 1 } else { -1 };
            let expected = vandermonde.pow(2).scale(&Rational::from_integer(sign.into()));
            assert_eq!(e, expected, "k = {k}");
            let pos = e_product(&r, &rd, RootSubset::Positive).unwrap();
            let neg = e_product(&r, &rd, RootSubset::Negative).unwrap();
            assert_eq!(&pos * &neg, e);
        }
    }

    #[test]
    fn validation_rejects_malformed_root_data() {
        let s2 = PermutationGroup::symmetric(2);
        let roots = vec![Weight(vec![-1, 1]), Weight(vec![1, -1])];
        assert!(RootData::new(roots.clone(), &[0], s2.clone(), 2).is_ok());
        // wrong order
        assert!(RootData::new(roots.clone(), &[0], s2.clone(), 3).is_err());
        // both roots positive
        assert!(RootData::new(roots.clone(), &[0, 1], s2.clone(), 2).is_err());
        // zero weight
        assert!(RootData::new(vec![Weight(vec![0, 0])], &[], s2.clone(), 2).is_err());
        // not stable under a sign flip of u1
        let flip = SignedPermutation::new(vec![0, 1], vec![true, false]).unwrap();
        let g = PermutationGroup::new(2, vec![flip]).unwrap();
        assert!(RootData::new(roots, &[0], g, 2).is_err());
    }

    #[test]
    fn sp1_root_data() {
        // SU(2) = Sp(1): roots +-2u, Weyl group u -> -u
        let flip = SignedPermutation::new(vec![0], vec![true]).unwrap();
        let g = PermutationGroup::new(1, vec![flip]).unwrap();
        let rd = RootData::new(vec![Weight(vec![2]), Weight(vec![-2])], &[0], g, 2).unwrap();
        let r = ring(1, 5);
        assert_eq!(e_product(&r, &rd, RootSubset::All).unwrap(), p(&r, "-4*u1^2"));
    }
}

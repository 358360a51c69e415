use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

use super::ring::{Monomial, RingSpec};

/// Linear substitution `u_i -> sign_i * u_{image_i}` on the degree-1 generators.
///
/// Signed permutations are exactly the substitutions that map the ideal `(u_i^{n_i})`
/// into itself when the truncations agree along each cycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    image: Vec<usize>,
    negate: Vec<bool>,
}

impl SignedPermutation {
    pub fn identity(k: usize) -> Self {
        SignedPermutation {
            image: (0..k).collect(),
            negate: vec![false; k],
        }
    }

    /// A plain permutation given by 0-based images.
    pub fn from_images(image: Vec<usize>) -> Result<Self> {
        let k = image.len();
        Self::new(image, vec![false; k])
    }

    pub fn new(image: Vec<usize>, negate: Vec<bool>) -> Result<Self> {
        let k = image.len();
        if negate.len() != k {
            return Err(Error::Arity {
                what: "permutation signs",
                expected: k,
                got: negate.len(),
            });
        }
        let mut seen = vec![false; k];
        for &j in &image {
            if j >= k || seen[j] {
                return Err(Error::InvalidRootData(format!(
                    "{image:?} is not a permutation of 0..{k}"
                )));
            }
            seen[j] = true;
        }
        Ok(SignedPermutation { image, negate })
    }

    /// Interprets row `i` of `matrix` as the image of `u_i`.
    pub fn from_matrix(matrix: &[Vec<i64>]) -> Result<Self> {
        let k = matrix.len();
        let mut image = Vec::with_capacity(k);
        let mut negate = Vec::with_capacity(k);
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Arity {
                    what: "matrix row",
                    expected: k,
                    got: row.len(),
                });
            }
            let nonzero: Vec<usize> = (0..k).filter(|&j| row[j] != 0).collect();
            match nonzero.as_slice() {
                [j] if row[*j].abs() == 1 => {
                    image.push(*j);
                    negate.push(row[*j] < 0);
                }
                _ => {
                    return Err(Error::InvalidRootData(format!(
                        "row {} of the Weyl matrix is not a signed unit vector; only signed \
                         permutation matrices preserve a monomial truncation ideal",
                        i + 1
                    )))
                }
            }
        }
        Self::new(image, negate)
    }

    pub fn arity(&self) -> usize {
        self.image.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn negations(&self) -> &[bool] {
        &self.negate
    }

    pub fn is_plain(&self) -> bool {
        self.negate.iter().all(|n| !n)
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        let k = self.arity();
        let mut image = vec![0; k];
        let mut negate = vec![false; k];
        for i in 0..k {
            let j = other.image[i];
            image[i] = self.image[j];
            negate[i] = other.negate[i] ^ self.negate[j];
        }
        SignedPermutation { image, negate }
    }

    /// Image of a monomial together with its sign.
    pub fn apply_monomial(&self, m: &Monomial) -> (bool, Monomial) {
        let mut out = vec![0; m.0.len()];
        let mut negative = false;
        for (i, &e) in m.0.iter().enumerate() {
            out[self.image[i]] = e;
            if self.negate[i] && e % 2 == 1 {
                negative = !negative;
            }
        }
        (negative, Monomial(out))
    }

    /// Image of an integer linear form `sum w_i u_i`.
    pub fn apply_linear(&self, w: &[i64]) -> Vec<i64> {
        let mut out = vec![0; w.len()];
        for (i, &c) in w.iter().enumerate() {
            out[self.image[i]] = if self.negate[i] { -c } else { c };
        }
        out
    }

    pub fn preserves(&self, ring: &RingSpec) -> bool {
        let n = ring.truncations();
        self.arity() == n.len() && (0..n.len()).all(|i| n[self.image[i]] == n[i])
    }

    fn key(&self) -> Vec<u32> {
        self.image
            .iter()
            .zip(&self.negate)
            .map(|(&j, &s)| (j as u32) << 1 | s as u32)
            .collect()
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .image
            .iter()
            .zip(&self.negate)
            .map(|(j, s)| format!("{}{}", if *s { "-" } else { "" }, j + 1))
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A finite group of signed permutations, stored by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationGroup {
    arity: usize,
    generators: Vec<SignedPermutation>,
}

impl PermutationGroup {
    pub fn trivial(k: usize) -> Self {
        PermutationGroup {
            arity: k,
            generators: Vec::new(),
        }
    }

    pub fn new(k: usize, generators: Vec<SignedPermutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.arity() != k) {
            return Err(Error::Arity {
                what: "permutation generator",
                expected: k,
                got: g.arity(),
            });
        }
        Ok(PermutationGroup { arity: k, generators })
    }

    /// The symmetric group generated by adjacent transpositions.
    pub fn symmetric(k: usize) -> Self {
        let generators = (0..k.saturating_sub(1))
            .map(|i| {
                let mut image: Vec<usize> = (0..k).collect();
                image.swap(i, i + 1);
                SignedPermutation {
                    image,
                    negate: vec![false; k],
                }
            })
            .collect();
        PermutationGroup { arity: k, generators }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn generators(&self) -> &[SignedPermutation] {
        &self.generators
    }

    /// Group order by enumeration. Gives up with `None` once more than `limit` elements appear.
    pub fn order(&self, limit: usize) -> Option<usize> {
        let id = SignedPermutation::identity(self.arity);
        let mut seen = HashSet::from([id.key()]);
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for s in &self.generators {
                let h = s.compose(&g);
                if seen.insert(h.key()) {
                    if seen.len() > limit {
                        return None;
                    }
                    queue.push_back(h);
                }
            }
        }
        Some(seen.len())
    }

    /// Signed orbit of a monomial: every distinct `(sign, monomial)` image.
    pub fn orbit(&self, m: &Monomial) -> Vec<(bool, Monomial)> {
        let start = (false, m.clone());
        let mut seen = HashSet::from([start.clone()]);
        let mut out = vec![start.clone()];
        let mut queue = VecDeque::from([start]);
        while let Some((neg, mono)) = queue.pop_front() {
            for g in &self.generators {
                let (s, image) = g.apply_monomial(&mono);
                let next = (neg ^ s, image);
                if seen.insert(next.clone()) {
                    out.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_orders() {
        assert_eq!(PermutationGroup::symmetric(1).order(100), Some(1));
        assert_eq!(PermutationGroup::symmetric(3).order(100), Some(6));
        assert_eq!(PermutationGroup::symmetric(5).order(1000), Some(120));
        assert_eq!(PermutationGroup::symmetric(5).order(10), None);
    }

    #[test]
    fn hyperoctahedral_order() {
        // B_2: swap plus sign change of u1
        let swap = SignedPermutation::from_matrix(&[vec![0, 1], vec![1, 0]]).unwrap();
        let flip = SignedPermutation::from_matrix(&[vec![-1, 0], vec![0, 1]]).unwrap();
        let g = PermutationGroup::new(2, vec![swap, flip]).unwrap();
        assert_eq!(g.order(100), Some(8));
    }

    #[test]
    fn matrix_must_be_signed_permutation() {
        assert!(SignedPermutation::from_matrix(&[vec![1, 1], vec![0, 1]]).is_err());
        assert!(SignedPermutation::from_matrix(&[vec![2, 0], vec![0, 1]]).is_err());
        assert!(SignedPermutation::from_matrix(&[vec![1, 0], vec![1, 0]]).is_err());
    }

    #[test]
    fn signed_orbit() {
        let flip = SignedPermutation::new(vec![0], vec![true]).unwrap();
        let g = PermutationGroup::new(1, vec![flip]).unwrap();
        assert_eq!(g.orbit(&Monomial(vec![1])).len(), 2);
        assert_eq!(g.orbit(&Monomial(vec![2])).len(), 1);
    }
}

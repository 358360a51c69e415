//! The ring of `X//G` as `H*(X//T)^W / ann(e)`, computed degree by degree with exact linear algebra.

mod matrix;

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use num::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quotient::{integrate_group, GroupRoots, QuotientModel};
use crate::ratpoly::{Monomial, Rational, TruncatedPolynomial};

pub use matrix::RationalMatrix;

/// Linearly independent invariant classes of one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    pub degree: u32,
    pub elements: Vec<TruncatedPolynomial>,
}

impl GradedBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Presentation computations for one choice of correcting roots.
#[derive(Debug, Clone, Copy)]
pub struct Presentation<'a> {
    model: &'a QuotientModel,
    which: GroupRoots,
}

impl<'a> Presentation<'a> {
    pub fn new(model: &'a QuotientModel, which: GroupRoots) -> Result<Self> {
        model.symmetry(which)?;
        Ok(Presentation { model, which })
    }

    fn check_degree(&self, d: u32, max: u32) -> Result<()> {
        if d > max {
            return Err(Error::OutOfRange {
                what: "degree",
                value: d as i64,
                max: max as i64,
            });
        }
        Ok(())
    }

    /// Orbit sums of the degree-`d` monomials, ordered by greatest orbit member, descending.
    pub fn invariant_basis(&self, d: u32) -> Result<GradedBasis> {
        let ring = self.model.ring();
        self.check_degree(d, ring.top_degree())?;
        let group = self.model.symmetry(self.which)?;
        let mut seen: HashSet<Monomial> = HashSet::new();
        let mut found: Vec<(Monomial, TruncatedPolynomial)> = Vec::new();
        for m in ring.monomials_of_degree(d) {
            if seen.contains(&m) {
                continue;
            }
            let orbit = group.orbit(&m);
            let leader = orbit.iter().map(|(_, x)| x).max().expect("orbit contains m").clone();
            let terms: Vec<(Monomial, Rational)> = orbit
                .into_iter()
                .map(|(negative, x)| {
                    seen.insert(x.clone());
                    let c = if negative { -1 } else { 1 };
                    (x, Rational::from_integer(c.into()))
                })
                .collect();
            let sum = TruncatedPolynomial::from_terms(ring, terms)?;
            if !sum.is_zero() {
                found.push((leader, sum));
            }
        }
        found.sort_by(|a, b| b.0.cmp(&a.0));
        Ok(GradedBasis {
            degree: d,
            elements: found.into_iter().map(|(_, p)| p).collect(),
        })
    }

    /// Degree-`d` part of `ann(e)`: kernel of multiplication by `e` on the invariants.
    pub fn ann_e_basis(&self, d: u32) -> Result<GradedBasis> {
        let invariants = self.invariant_basis(d)?;
        let e = self.model.correction_class(self.which)?;
        let products: Vec<TruncatedPolynomial> = invariants.elements.iter().map(|b| b * &e).collect();
        let mut row_of: BTreeMap<&Monomial, usize> = BTreeMap::new();
        for p in &products {
            for (m, _) in p.terms() {
                let next = row_of.len();
                row_of.entry(m).or_insert(next);
            }
        }
        let mut matrix = RationalMatrix::zeros(row_of.len(), products.len());
        for (j, p) in products.iter().enumerate() {
            for (m, c) in p.terms() {
                matrix.set(row_of[m], j, c.clone());
            }
        }
        let elements = matrix
            .nullspace()
            .into_iter()
            .map(|v| {
                let mut acc = TruncatedPolynomial::zero(self.model.ring());
                for (c, b) in v.iter().zip(&invariants.elements) {
                    if !c.is_zero() {
                        acc = &acc + &b.scale(c);
                    }
                }
                acc.primitive()
            })
            .collect();
        Ok(GradedBasis { degree: d, elements })
    }

    /// `b_d = dim(invariants_d) - dim(ann(e)_d)`, trailing zeros removed.
    pub fn poincare_polynomial(&self) -> Result<Vec<usize>> {
        let top = self.model.ring().top_degree();
        let mut betti = (0..=top)
            .into_par_iter()
            .map(|d| Ok(self.invariant_basis(d)?.len() - self.ann_e_basis(d)?.len()))
            .collect::<Result<Vec<usize>>>()?;
        while betti.last() == Some(&0) {
            betti.pop();
        }
        Ok(betti)
    }

    /// Integrals of `a_i * b_j` for invariant bases of degrees `d` and `D - d`.
    pub fn pairing_matrix(&self, d: u32) -> Result<RationalMatrix> {
        let dim = self.model.quotient_dimension(self.which)?;
        self.check_degree(d, dim)?;
        let left = self.invariant_basis(d)?;
        let right = self.invariant_basis(dim - d)?;
        let mut out = RationalMatrix::zeros(left.len(), right.len());
        for (i, a) in left.elements.iter().enumerate() {
            for (j, b) in right.elements.iter().enumerate() {
                out.set(i, j, integrate_group(self.model, &(a * b), self.which)?);
            }
        }
        Ok(out)
    }

    /// Signature of the middle-degree pairing, counted from eigenvalue signs.
    pub fn pairing_signature(&self) -> Result<i64> {
        let dim = self.model.quotient_dimension(self.which)?;
        if dim % 2 == 1 {
            return Ok(0);
        }
        let (pos, neg, _) = self.pairing_matrix(dim / 2)?.inertia();
        Ok(pos as i64 - neg as i64)
    }

    pub fn report(&self) -> Result<PresentationReport> {
        let top = self.model.ring().top_degree();
        let dim = self.model.quotient_dimension(self.which)?;
        let rows = (0..=top)
            .into_par_iter()
            .map(|d| {
                let invariants = self.invariant_basis(d)?;
                let ann = self.ann_e_basis(d)?;
                let betti = invariants.len() - ann.len();
                let pairing_rank = if d <= dim {
                    Some(self.pairing_matrix(d)?.rank())
                } else {
                    None
                };
                Ok(DegreeRow {
                    degree: d,
                    dim_invariants: invariants.len(),
                    dim_ann: ann.len(),
                    betti,
                    ann_basis: ann.elements,
                    pairing_rank,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut betti: Vec<usize> = rows.iter().map(|r| r.betti).collect();
        while betti.last() == Some(&0) {
            betti.pop();
        }
        let palindromic = betti.iter().eq(betti.iter().rev());
        if !palindromic {
            return Err(Error::NotPalindromic(betti));
        }
        Ok(PresentationReport {
            quotient_dimension: dim,
            rows,
            betti,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeRow {
    pub degree: u32,
    pub dim_invariants: usize,
    pub dim_ann: usize,
    pub betti: usize,
    pub ann_basis: Vec<TruncatedPolynomial>,
    /// Rank of the pairing against the complementary degree, when that degree exists.
    pub pairing_rank: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationReport {
    pub quotient_dimension: u32,
    pub rows: Vec<DegreeRow>,
    pub betti: Vec<usize>,
}

impl PresentationReport {
    pub fn pairings_nondegenerate(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.pairing_rank.is_none_or(|rank| rank == r.betti))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let betti: Vec<String> = self.betti.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "quotient dimension: {}", self.quotient_dimension);
        let _ = writeln!(out, "betti: {}", betti.join(","));
        let _ = writeln!(out, "palindromic: yes");
        let _ = writeln!(
            out,
            "pairings nondegenerate: {}",
            if self.pairings_nondegenerate() { "yes" } else { "no" }
        );
        for r in &self.rows {
            let rank = r.pairing_rank.map_or("-".to_string(), |x| x.to_string());
            let _ = writeln!(
                out,
                "degree {}: invariants {}, ann(e) {}, betti {}, pairing rank {}",
                r.degree, r.dim_invariants, r.dim_ann, r.betti, rank
            );
            for z in &r.ann_basis {
                let _ = writeln!(out, "  ann: {z}");
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,dim_invariants,dim_ann,betti\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{}", r.degree, r.dim_invariants, r.dim_ann, r.betti);
        }
        out
    }
}

pub fn invariant_basis(m: &QuotientModel, d: u32) -> Result<GradedBasis> {
    Presentation::new(m, GroupRoots::All)?.invariant_basis(d)
}

pub fn ann_e_basis(m: &QuotientModel, d: u32) -> Result<GradedBasis> {
    Presentation::new(m, GroupRoots::All)?.ann_e_basis(d)
}

pub fn poincare_polynomial(m: &QuotientModel) -> Result<Vec<usize>> {
    Presentation::new(m, GroupRoots::All)?.poincare_polynomial()
}

pub fn pairing_matrix(m: &QuotientModel, d: u32) -> Result<RationalMatrix> {
    Presentation::new(m, GroupRoots::All)?.pairing_matrix(d)
}

pub fn presentation_report(m: &QuotientModel) -> Result<PresentationReport> {
    Presentation::new(m, GroupRoots::All)?.report()
}

/// Signature of `X//G` from the middle pairing matrix.
pub fn pairing_signature(m: &QuotientModel) -> Result<Rational> {
    Ok(Rational::from_integer(
        Presentation::new(m, GroupRoots::All)?.pairing_signature()?.into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::grassmannian_model;

    fn p(m: &QuotientModel, s: &str) -> TruncatedPolynomial {
        TruncatedPolynomial::parse(m.ring(), s).unwrap()
    }

    #[test]
    fn invariant_bases_g24() {
        let m = grassmannian_model(2, 4).unwrap();
        assert_eq!(invariant_basis(&m, 1).unwrap().elements, vec![p(&m, "u1 + u2")]);
        assert_eq!(
            invariant_basis(&m, 2).unwrap().elements,
            vec![p(&m, "u1^2 + u2^2"), p(&m, "u1*u2")]
        );
        assert_eq!(
            invariant_basis(&m, 5).unwrap().elements,
            vec![p(&m, "u1^3*u2^2 + u1^2*u2^3")]
        );
        assert!(invariant_basis(&m, 7).is_err());
    }

    #[test]
    fn annihilators() {
        let m = grassmannian_model(2, 4).unwrap();
        assert!(ann_e_basis(&m, 1).unwrap().is_empty());
        assert_eq!(ann_e_basis(&m, 5).unwrap().len(), 1);
        let cp = grassmannian_model(1, 5).unwrap();
        for d in 0..=4 {
            assert!(ann_e_basis(&cp, d).unwrap().is_empty());
        }
    }

    #[test]
    fn betti_numbers() {
        assert_eq!(
            poincare_polynomial(&grassmannian_model(2, 4).unwrap()).unwrap(),
            vec![1, 1, 2, 1, 1]
        );
        assert_eq!(
            poincare_polynomial(&grassmannian_model(1, 4).unwrap()).unwrap(),
            vec![1; 4]
        );
        assert_eq!(
            poincare_polynomial(&grassmannian_model(2, 5).unwrap()).unwrap(),
            vec![1, 1, 2, 2, 2, 1, 1]
        );
    }

    #[test]
    fn pairing_matrices() {
        let m = grassmannian_model(2, 4).unwrap();
        let mid = pairing_matrix(&m, 2).unwrap();
        assert_eq!(mid.to_string(), "[[2,-1],[-1,1]]");
        let edge = pairing_matrix(&m, 0).unwrap();
        assert_eq!((edge.rows(), edge.cols()), (1, 2));
        assert_eq!(edge.rank(), 1);
        assert!(pairing_matrix(&m, 5).is_err());
        let line = grassmannian_model(1, 2).unwrap();
        assert_eq!(pairing_matrix(&line, 0).unwrap().to_string(), "[[1]]");
        assert_eq!(pairing_signature(&m).unwrap(), Rational::from_integer(2.into()));
    }

    #[test]
    fn reports() {
        let r = presentation_report(&grassmannian_model(2, 4).unwrap()).unwrap();
        assert_eq!(r.betti, vec![1, 1, 2, 1, 1]);
        assert!(r.pairings_nondegenerate());
        assert!(r.to_csv().starts_with("degree,dim_invariants,dim_ann,betti\n0,1,0,1\n"));
        let cp = presentation_report(&grassmannian_model(1, 3).unwrap()).unwrap();
        assert!(cp.rows.iter().all(|row| row.dim_ann == 0));
        let g25 = presentation_report(&grassmannian_model(2, 5).unwrap()).unwrap();
        assert_eq!(g25.betti, vec![1, 1, 2, 2, 2, 1, 1]);
    }
}

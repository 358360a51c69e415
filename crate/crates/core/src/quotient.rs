//! Torus-quotient models of `X//T` and the integration formulas for `X//G`.

use std::sync::Arc;

use num::{BigInt, One, Signed};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ratpoly::{elementary_symmetric, Monomial, PermutationGroup, Rational, RingSpec, TruncatedPolynomial};
use crate::rootdata::{e_product, root_euler_class, RootData, RootSubset, Weight};

/// Formal integer combination of line bundles, each recorded by its first Chern class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitBundle {
    ring: Arc<RingSpec>,
    summands: Vec<(TruncatedPolynomial, i64)>,
}

impl SplitBundle {
    pub fn empty(ring: &Arc<RingSpec>) -> Self {
        SplitBundle {
            ring: ring.clone(),
            summands: Vec::new(),
        }
    }

    pub fn trivial(ring: &Arc<RingSpec>, rank: i64) -> Self {
        let mut b = Self::empty(ring);
        b.summands.push((TruncatedPolynomial::zero(ring), rank));
        b
    }

    pub fn line(root: TruncatedPolynomial) -> Result<Self> {
        let mut b = Self::empty(root.ring());
        b.push(root, 1)?;
        Ok(b)
    }

    /// Adds `multiplicity` copies of the line bundle with first Chern class `root`.
    pub fn push(&mut self, root: TruncatedPolynomial, multiplicity: i64) -> Result<()> {
        if root.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        if !root.is_homogeneous_of(1) {
            return Err(Error::InvalidModel(format!(
                "Chern root {root} is not a homogeneous degree-1 class"
            )));
        }
        if multiplicity != 0 {
            self.summands.push((root, multiplicity));
        }
        Ok(())
    }

    pub fn push_weight(&mut self, w: &Weight, multiplicity: i64) -> Result<()> {
        let root = root_euler_class(&self.ring, w)?;
        self.push(root, multiplicity)
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn summands(&self) -> &[(TruncatedPolynomial, i64)] {
        &self.summands
    }

    pub fn rank(&self) -> i64 {
        self.summands.iter().map(|(_, m)| m).sum()
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if other.ring != self.ring {
            return Err(Error::RingMismatch);
        }
        let mut out = self.clone();
        out.summands.extend(other.summands.iter().cloned());
        Ok(out)
    }

    /// The K-theoretic negative `-[V]`.
    pub fn negated(&self) -> Self {
        SplitBundle {
            ring: self.ring.clone(),
            summands: self.summands.iter().map(|(r, m)| (r.clone(), -m)).collect(),
        }
    }

    /// Line bundles `L_alpha` for the given roots.
    pub fn from_roots<'a>(ring: &Arc<RingSpec>, roots: impl IntoIterator<Item = &'a Weight>) -> Result<Self> {
        let mut b = Self::empty(ring);
        for w in roots {
            b.push_weight(w, 1)?;
        }
        Ok(b)
    }

    /// Parses `ROOT[:MULT];ROOT[:MULT];..` where each root is a polynomial of degree one or `0`.
    pub fn parse(ring: &Arc<RingSpec>, spec: &str) -> Result<Self> {
        let mut b = Self::empty(ring);
        let mut offset = 0;
        for entry in spec.split(';') {
            let shift = |e: Error| match e {
                Error::Parse { pos, message } => Error::Parse {
                    pos: pos + offset,
                    message,
                },
                other => Error::Parse {
                    pos: offset,
                    message: other.to_string(),
                },
            };
            let (root, mult) = match entry.rsplit_once(':') {
                Some((r, m)) => {
                    let mult = m.trim().parse::<i64>().map_err(|_| Error::Parse {
                        pos: offset + r.len() + 1,
                        message: format!("bad multiplicity {m:?}"),
                    })?;
                    (r, mult)
                }
                None => (entry, 1),
            };
            let p = TruncatedPolynomial::parse(ring, root).map_err(shift)?;
            b.push(p, mult).map_err(shift)?;
            offset += entry.len() + 1;
        }
        Ok(b)
    }

    /// Tangent bundle of `prod CP^{n_i - 1}` from the Euler sequences: `n_i L_{u_i} - 1` per factor.
    pub fn projective_product_tangent(ring: &Arc<RingSpec>) -> Self {
        let mut b = Self::empty(ring);
        let mut trivial = 0i64;
        for (i, &n) in ring.truncations().iter().enumerate() {
            let u = TruncatedPolynomial::variable(ring, i).expect("index in range");
            if u.is_zero() {
                trivial += n as i64;
            } else {
                b.summands.push((u, n as i64));
            }
            trivial -= 1;
        }
        if trivial != 0 {
            b.summands.push((TruncatedPolynomial::zero(ring), trivial));
        }
        b
    }
}

/// Data for the full-rank subgroup variants: `H` with `T subset H subset G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    roots: Vec<Weight>,
    weyl_order: u64,
    relative_weyl: PermutationGroup,
}

impl Subgroup {
    /// `relative_weyl` is the action of `W(G)/W(H)` used for ring presentations; it may be trivial.
    pub fn new(roots: Vec<Weight>, weyl_order: u64, relative_weyl: PermutationGroup) -> Self {
        Subgroup {
            roots,
            weyl_order,
            relative_weyl,
        }
    }

    pub fn roots(&self) -> &[Weight] {
        &self.roots
    }

    pub fn weyl_order(&self) -> u64 {
        self.weyl_order
    }

    pub fn relative_weyl(&self) -> &PermutationGroup {
        &self.relative_weyl
    }
}

/// Which roots correct the torus-side integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GroupRoots {
    /// All of `Delta`, prefactor `1/|W|`.
    #[default]
    All,
    /// Roots of `G` outside the configured subgroup `H`, prefactor `|W(H)|/|W(G)|`.
    ComplementOfSubgroup,
}

/// Everything needed to evaluate formulas for `X//G` on a product-of-projective-spaces model of `X//T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientModel {
    ring: Arc<RingSpec>,
    root_data: RootData,
    integration_monomial: Monomial,
    tangent_bundle: SplitBundle,
    orbifold_prefactor: Rational,
    subgroup: Option<Subgroup>,
}

impl QuotientModel {
    pub fn new(
        ring: Arc<RingSpec>,
        root_data: RootData,
        tangent_bundle: SplitBundle,
        orbifold_prefactor: Rational,
        subgroup: Option<Subgroup>,
    ) -> Result<Self> {
        let k = ring.variable_count();
        let invalid = |m: String| Err(Error::InvalidModel(m));
        if root_data.rank() != k {
            return invalid(format!(
                "root data has rank {}, ring has {k} variables",
                root_data.rank()
            ));
        }
        if let Some(g) = root_data.weyl().generators().iter().find(|g| !g.preserves(&ring)) {
            return invalid(format!("Weyl generator {g} does not preserve the truncation exponents"));
        }
        if tangent_bundle.ring() != &ring {
            return Err(Error::RingMismatch);
        }
        if tangent_bundle.rank() != ring.top_degree() as i64 {
            return invalid(format!(
                "tangent bundle has rank {}, but the ring has top degree {}",
                tangent_bundle.rank(),
                ring.top_degree()
            ));
        }
        if !orbifold_prefactor.is_positive() {
            return invalid("orbifold prefactor must be positive".into());
        }
        if let Some(h) = &subgroup {
            root_data.select(RootSubset::ComplementOf(&h.roots))?;
            if let Some(w) = h.roots.iter().find(|w| !h.roots.contains(&w.negated())) {
                return invalid(format!("subgroup roots contain {w} but not its negative"));
            }
            if h.weyl_order == 0 || !root_data.weyl_order().is_multiple_of(h.weyl_order) {
                return invalid(format!(
                    "subgroup Weyl order {} does not divide {}",
                    h.weyl_order,
                    root_data.weyl_order()
                ));
            }
            if h.relative_weyl.arity() != k {
                return invalid("relative Weyl generators have the wrong arity".into());
            }
            if let Some(g) = h.relative_weyl.generators().iter().find(|g| !g.preserves(&ring)) {
                return invalid(format!(
                    "relative Weyl generator {g} does not preserve the truncation exponents"
                ));
            }
        }
        Ok(QuotientModel {
            integration_monomial: ring.top_monomial(),
            ring,
            root_data,
            tangent_bundle,
            orbifold_prefactor,
            subgroup,
        })
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn root_data(&self) -> &RootData {
        &self.root_data
    }

    pub fn integration_monomial(&self) -> &Monomial {
        &self.integration_monomial
    }

    pub fn tangent_bundle(&self) -> &SplitBundle {
        &self.tangent_bundle
    }

    pub fn orbifold_prefactor(&self) -> &Rational {
        &self.orbifold_prefactor
    }

    pub fn subgroup(&self) -> Option<&Subgroup> {
        self.subgroup.as_ref()
    }

    pub fn with_orbifold_prefactor(&self, prefactor: Rational) -> Result<Self> {
        Self::new(
            self.ring.clone(),
            self.root_data.clone(),
            self.tangent_bundle.clone(),
            prefactor,
            self.subgroup.clone(),
        )
    }

    pub fn with_subgroup(&self, subgroup: Option<Subgroup>) -> Result<Self> {
        Self::new(
            self.ring.clone(),
            self.root_data.clone(),
            self.tangent_bundle.clone(),
            self.orbifold_prefactor.clone(),
            subgroup,
        )
    }

    pub fn with_opposite_positive_roots(&self) -> Self {
        QuotientModel {
            root_data: self.root_data.with_opposite_positive(),
            ..self.clone()
        }
    }

    pub(crate) fn selection(&self, which: GroupRoots) -> Result<RootSubset<'_>> {
        Ok(match which {
            GroupRoots::All => RootSubset::All,
            GroupRoots::ComplementOfSubgroup => {
                RootSubset::ComplementOf(self.subgroup.as_ref().ok_or(Error::NoSubgroup)?.roots())
            }
        })
    }

    /// Roots whose line bundles make up `E`: positive roots, minus those of the subgroup if selected.
    pub fn positive_correction_roots(&self, which: GroupRoots) -> Result<Vec<&Weight>> {
        let excluded: &[Weight] = match which {
            GroupRoots::All => &[],
            GroupRoots::ComplementOfSubgroup => self.subgroup.as_ref().ok_or(Error::NoSubgroup)?.roots(),
        };
        Ok(self
            .root_data
            .positive_roots()
            .filter(|w| !excluded.contains(w))
            .collect())
    }

    /// `e = prod e(alpha)` over the selected roots.
    pub fn correction_class(&self, which: GroupRoots) -> Result<TruncatedPolynomial> {
        e_product(&self.ring, &self.root_data, self.selection(which)?)
    }

    /// `o_T/o_G` times `1/|W|` or `|W(H)|/|W(G)|`.
    pub fn prefactor(&self, which: GroupRoots) -> Result<Rational> {
        let numerator = match which {
            GroupRoots::All => 1,
            GroupRoots::ComplementOfSubgroup => self.subgroup.as_ref().ok_or(Error::NoSubgroup)?.weyl_order,
        };
        let weyl = Rational::new(BigInt::from(numerator), BigInt::from(self.root_data.weyl_order()));
        Ok(weyl * &self.orbifold_prefactor)
    }

    /// The group acting on the torus-side ring for ring presentations.
    pub fn symmetry(&self, which: GroupRoots) -> Result<&PermutationGroup> {
        match which {
            GroupRoots::All => Ok(self.root_data.weyl()),
            GroupRoots::ComplementOfSubgroup => Ok(self.subgroup.as_ref().ok_or(Error::NoSubgroup)?.relative_weyl()),
        }
    }

    /// Complex dimension of the nonabelian quotient.
    pub fn quotient_dimension(&self, which: GroupRoots) -> Result<u32> {
        let selected = self.root_data.select(self.selection(which)?)?.len() as u32;
        self.ring
            .top_degree()
            .checked_sub(selected)
            .ok_or_else(|| Error::InvalidModel("more correcting roots than the torus quotient has dimensions".into()))
    }
}

/// `Hom(C^k, C^n)//U(k)`: the torus quotient is `(CP^{n-1})^k`.
pub fn grassmannian_model(k: usize, n: usize) -> Result<QuotientModel> {
    if k == 0 || k > n {
        return Err(Error::InvalidModel(format!("G({k},{n}) needs 1 <= k <= n")));
    }
    let ring = RingSpec::new(k, vec![n as u32; k])?;
    let root_data = RootData::unitary(k)?;
    let tangent = SplitBundle::projective_product_tangent(&ring);
    QuotientModel::new(ring, root_data, tangent, Rational::one(), None)
}

/// Coefficient of the top monomial.
pub fn integrate_torus(m: &QuotientModel, p: &TruncatedPolynomial) -> Result<Rational> {
    if p.ring() != &m.ring {
        return Err(Error::RingMismatch);
    }
    p.coefficient_of(&m.integration_monomial)
}

/// `prefactor * integral over X//T of (lift * e)`.
pub fn integrate_group(m: &QuotientModel, lift: &TruncatedPolynomial, which: GroupRoots) -> Result<Rational> {
    if lift.ring() != &m.ring {
        return Err(Error::RingMismatch);
    }
    let e = m.correction_class(which)?;
    Ok(m.prefactor(which)? * integrate_torus(m, &lift.try_mul(&e)?)?)
}

/// Grassmannian pairing `int c_1(V*)^{m_1} .. c_k(V*)^{m_k}` as
/// `1/k! coeff_{u_1^{n-1}..u_k^{n-1}}(sigma_1^{m_1}..sigma_k^{m_k} prod_{i != j}(u_i - u_j))`.
pub fn chern_pairing(m: &QuotientModel, exponents: &[u64]) -> Result<Rational> {
    let ring = &m.ring;
    let k = ring.variable_count();
    if exponents.len() != k {
        return Err(Error::Arity {
            what: "Chern exponents",
            expected: k,
            got: exponents.len(),
        });
    }
    let mut integrand = sigma_monomial(ring, exponents)?;
    for i in 0..k {
        for j in 0..k {
            if i != j {
                let mut w = vec![0; k];
                w[i] = 1;
                w[j] = -1;
                integrand = &integrand * &TruncatedPolynomial::linear(ring, &w)?;
            }
        }
    }
    let k_factorial: BigInt = (1..=k as u64).map(BigInt::from).product();
    Ok(integrand.coefficient_of(&m.integration_monomial)? / Rational::from_integer(k_factorial))
}

/// `sigma_1^{m_1} .. sigma_k^{m_k}`.
pub fn sigma_monomial(ring: &Arc<RingSpec>, exponents: &[u64]) -> Result<TruncatedPolynomial> {
    let mut acc = TruncatedPolynomial::one(ring);
    for (i, &e) in exponents.iter().enumerate() {
        if e > 0 {
            acc = &acc * &elementary_symmetric(ring, i + 1)?.pow(e);
        }
    }
    Ok(acc)
}

/// All `(m_1..m_k)` with `sum i*m_i = degree`, in lexicographically decreasing order.
pub fn degree_matching_exponents(k: usize, degree: u64) -> Vec<Vec<u64>> {
    fn go(i: usize, k: usize, remaining: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == k {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = (i + 1) as u64;
        for e in (0..=remaining / w).rev() {
            cur.push(e);
            go(i + 1, k, remaining - e * w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, k, degree, &mut Vec::with_capacity(k), &mut out);
    out
}

/// `chern_pairing` over many exponent vectors in parallel, results in input order.
pub fn chern_pairing_table(m: &QuotientModel, exponents: &[Vec<u64>]) -> Result<Vec<Rational>> {
    exponents.par_iter().map(|e| chern_pairing(m, e)).collect()
}

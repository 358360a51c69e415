//! Characteristic classes of split bundles, the index formula and characteristic numbers.

use std::fmt;
use std::str::FromStr;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::quotient::{integrate_torus, GroupRoots, QuotientModel, SplitBundle};
use crate::ratpoly::{format_rational, Rational, RingSpec, TruncatedPolynomial, UnivariateSeries};
use crate::rootdata::root_euler_class;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassName {
    TotalChern,
    Todd,
    LClass,
    ChernCharacterExp,
    Custom,
}

impl ClassName {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassName::TotalChern => "total-chern",
            ClassName::Todd => "todd",
            ClassName::LClass => "l-class",
            ClassName::ChernCharacterExp => "chern-character-exp",
            ClassName::Custom => "custom",
        }
    }
}

impl fmt::Display for ClassName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "total-chern" => ClassName::TotalChern,
            "todd" => ClassName::Todd,
            "l-class" => ClassName::LClass,
            "chern-character-exp" => ClassName::ChernCharacterExp,
            "custom" => ClassName::Custom,
            other => {
                return Err(Error::Parse {
                    pos: 0,
                    message: format!("unknown characteristic class {other:?}"),
                })
            }
        })
    }
}

/// A characteristic class given by its generating series on line bundles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedClassSeries {
    pub name: ClassName,
    pub series: UnivariateSeries,
}

impl NamedClassSeries {
    /// Built-in classes. `Custom` needs [`NamedClassSeries::custom`].
    pub fn builtin(name: ClassName, ring: &RingSpec) -> Result<Self> {
        let series = match name {
            ClassName::TotalChern => UnivariateSeries::total_chern(ring),
            ClassName::Todd => UnivariateSeries::todd(ring),
            ClassName::LClass => UnivariateSeries::l_class(ring),
            ClassName::ChernCharacterExp => UnivariateSeries::exp(ring),
            ClassName::Custom => {
                return Err(Error::Parse {
                    pos: 0,
                    message: "custom classes need explicit coefficients".into(),
                })
            }
        };
        Ok(NamedClassSeries { name, series })
    }

    pub fn custom(ring: &RingSpec, coefficients: Vec<Rational>) -> Self {
        NamedClassSeries {
            name: ClassName::Custom,
            series: UnivariateSeries::from_coefficients(ring, coefficients),
        }
    }

    fn check_multiplicative(&self) -> Result<()> {
        let c0 = self.series.constant_term();
        if c0.is_one() {
            Ok(())
        } else {
            Err(Error::NotMultiplicative(format_rational(c0)))
        }
    }
}

/// `prod f(x_i)^{m_i}` over the Chern roots; negative multiplicities use `1/f`.
pub fn mult_class(f: &NamedClassSeries, v: &SplitBundle) -> Result<TruncatedPolynomial> {
    f.check_multiplicative()?;
    let inverse = if v.summands().iter().any(|(_, m)| *m < 0) {
        Some(f.series.reciprocal()?)
    } else {
        None
    };
    let mut acc = TruncatedPolynomial::one(v.ring());
    for (root, m) in v.summands() {
        if root.is_zero() {
            continue;
        }
        let series = if *m < 0 {
            inverse.as_ref().expect("computed above")
        } else {
            &f.series
        };
        let factor = series.eval(root)?;
        acc = &acc * &factor.pow(m.unsigned_abs());
    }
    Ok(acc)
}

/// `ch(V) = sum m_i exp(x_i)`.
pub fn chern_character(v: &SplitBundle) -> Result<TruncatedPolynomial> {
    let exp = UnivariateSeries::exp(v.ring());
    let mut acc = TruncatedPolynomial::zero(v.ring());
    for (root, m) in v.summands() {
        let term = exp.eval(root)?.scale(&Rational::from_integer((*m).into()));
        acc = &acc + &term;
    }
    Ok(acc)
}

/// `ch(Lambda^even E) - ch(Lambda^odd E) = prod (1 - exp(x_i))^{m_i}`.
pub fn lambda_alternating_ch(e: &SplitBundle) -> Result<TruncatedPolynomial> {
    let exp = UnivariateSeries::exp(e.ring());
    let one = TruncatedPolynomial::one(e.ring());
    let mut acc = one.clone();
    for (root, m) in e.summands() {
        if *m < 0 {
            return Err(Error::NegativeMultiplicity(*m));
        }
        let factor = &one - &exp.eval(root)?;
        acc = &acc * &factor.pow(*m as u64);
    }
    Ok(acc)
}

/// `ch(Lambda^i E)` for `i = 0..=rank E`, from `sum_i t^i ch(Lambda^i E) = prod (1 + t exp(x))`.
pub fn exterior_power_characters(e: &SplitBundle) -> Result<Vec<TruncatedPolynomial>> {
    let exp = UnivariateSeries::exp(e.ring());
    let mut layers = vec![TruncatedPolynomial::one(e.ring())];
    for (root, m) in e.summands() {
        if *m < 0 {
            return Err(Error::NegativeMultiplicity(*m));
        }
        let x = exp.eval(root)?;
        for _ in 0..*m {
            let mut next = layers.clone();
            next.push(TruncatedPolynomial::zero(e.ring()));
            for (i, layer) in layers.iter().enumerate() {
                next[i + 1] = &next[i + 1] + &(layer * &x);
            }
            layers = next;
        }
    }
    Ok(layers)
}

/// `E = sum of L_alpha` over the positive correcting roots.
pub fn positive_root_bundle(m: &QuotientModel, which: GroupRoots) -> Result<SplitBundle> {
    SplitBundle::from_roots(m.ring(), m.positive_correction_roots(which)?)
}

/// `ind D_V` on `X//G` as `int_{X//T} ch(V~) Td(T(X//T)) prod_{alpha in Delta+} (1 - exp e(alpha))`.
pub fn index_group(m: &QuotientModel, v_lift: &SplitBundle, which: GroupRoots) -> Result<Rational> {
    if v_lift.ring() != m.ring() {
        return Err(Error::RingMismatch);
    }
    let todd = NamedClassSeries::builtin(ClassName::Todd, m.ring())?;
    let td = mult_class(&todd, m.tangent_bundle())?;
    let e = positive_root_bundle(m, which)?;
    let integrand = &(&chern_character(v_lift)? * &td) * &lambda_alternating_ch(&e)?;
    integrate_torus(m, &integrand)
}

/// Torus-side indices of `D_{V~ (x) Lambda^even E}` and `D_{V~ (x) Lambda^odd E}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexForms {
    pub even: Rational,
    pub odd: Rational,
}

impl IndexForms {
    pub fn difference(&self) -> Rational {
        &self.even - &self.odd
    }
}

/// The two-term form of the index formula, built from exterior powers of `E`.
pub fn index_group_exterior(m: &QuotientModel, v_lift: &SplitBundle, which: GroupRoots) -> Result<IndexForms> {
    if v_lift.ring() != m.ring() {
        return Err(Error::RingMismatch);
    }
    let todd = NamedClassSeries::builtin(ClassName::Todd, m.ring())?;
    let base = &chern_character(v_lift)? * &mult_class(&todd, m.tangent_bundle())?;
    let layers = exterior_power_characters(&positive_root_bundle(m, which)?)?;
    let mut even = Rational::zero();
    let mut odd = Rational::zero();
    for (i, layer) in layers.iter().enumerate() {
        let value = integrate_torus(m, &(&base * layer))?;
        if i % 2 == 0 {
            even += value;
        } else {
            odd += value;
        }
    }
    Ok(IndexForms { even, odd })
}

fn root_classes(m: &QuotientModel) -> Result<Vec<TruncatedPolynomial>> {
    m.root_data()
        .roots()
        .iter()
        .map(|w| root_euler_class(m.ring(), w))
        .collect()
}

/// `chi(X//G) = 1/|W| int c(T(X//T)) prod_{alpha} e(alpha)/(1 + e(alpha))`.
pub fn euler_characteristic(m: &QuotientModel) -> Result<Rational> {
    let c = mult_class(
        &NamedClassSeries::builtin(ClassName::TotalChern, m.ring())?,
        m.tangent_bundle(),
    )?;
    let ratio = UnivariateSeries::x_over_one_plus_x(m.ring());
    let mut integrand = c;
    for e in root_classes(m)? {
        integrand = &integrand * &ratio.eval(&e)?;
    }
    Ok(m.prefactor(GroupRoots::All)? * integrate_torus(m, &integrand)?)
}

/// `sign(X//G) = 1/|W| int L(T(X//T)) prod_{alpha} tanh e(alpha)`; zero unless `4 | dim_R X//G`.
pub fn signature(m: &QuotientModel) -> Result<Rational> {
    if m.quotient_dimension(GroupRoots::All)? % 2 == 1 {
        return Ok(Rational::zero());
    }
    let l = mult_class(
        &NamedClassSeries::builtin(ClassName::LClass, m.ring())?,
        m.tangent_bundle(),
    )?;
    let tanh = UnivariateSeries::tanh(m.ring());
    let mut integrand = l;
    for e in root_classes(m)? {
        integrand = &integrand * &tanh.eval(&e)?;
    }
    Ok(m.prefactor(GroupRoots::All)? * integrate_torus(m, &integrand)?)
}

/// `int_{X//G} f(T) = 1/|W| int f(T(X//T) - E - E*) prod_{alpha} e(alpha)`.
pub fn characteristic_number(m: &QuotientModel, f: &NamedClassSeries) -> Result<Rational> {
    f.check_multiplicative()?;
    let roots = SplitBundle::from_roots(m.ring(), m.root_data().roots())?;
    let virtual_tangent = m.tangent_bundle().direct_sum(&roots.negated())?;
    let integrand = &mult_class(f, &virtual_tangent)? * &m.correction_class(GroupRoots::All)?;
    Ok(m.prefactor(GroupRoots::All)? * integrate_torus(m, &integrand)?)
}

//! Weighted composition operators f ↦ m·(f∘φ) with rotation or elliptic
//! automorphism symbols.

mod mobius;

pub use mobius::MobiusInvolution;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::RotationAngle;
use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::series::TaylorSeries;
use crate::tolerance::{STRUCTURE_TOL, WORKING_DEGREE};

/// The weight m of an operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Weight {
    /// m(z) = B(z/r); every zero of B lies in |z| < r.
    Blaschke {
        #[serde(rename = "blaschke")]
        product: BlaschkeProduct,
        r: f64,
    },
    Series(TaylorSeries),
}

impl Weight {
    pub fn blaschke(product: BlaschkeProduct, r: f64) -> Result<Self> {
        let weight = Weight::Blaschke { product, r };
        weight.validate()?;
        Ok(weight)
    }

    fn validate(&self) -> Result<()> {
        if let Weight::Blaschke { product, r } = self {
            if !(*r > 0.0 && *r < 1.0) {
                return Err(Error::InvalidRadius(*r));
            }
            if let Some(&zero) = product.zeros().iter().find(|a| a.norm() >= *r) {
                return Err(Error::WeightZeroOutsideRadius { zero, r: *r });
            }
        }
        Ok(())
    }

    /// Taylor expansion of m up to `degree`.
    pub fn series(&self, degree: usize) -> Result<TaylorSeries> {
        match self {
            Weight::Series(m) => Ok(m.truncate(degree)),
            Weight::Blaschke { product, r } => {
                let pole = product.pole_radius();
                let b = if pole.is_infinite() {
                    product.expand(degree, 1.0)?.with_radius_unchecked(f64::INFINITY)
                } else {
                    // B(z/r) has its poles at radius r·pole > 1.
                    product.expand(degree, (pole / r).sqrt())?
                };
                b.rescale_argument(1.0 / r)
            }
        }
    }

    /// m(0).
    pub fn at_origin(&self) -> Result<Complex64> {
        match self {
            Weight::Series(m) => Ok(m.coeff(0)),
            Weight::Blaschke { product, .. } => product.eval(Complex64::new(0.0, 0.0)),
        }
    }
}

/// The symbol φ of an operator.
#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    /// φ(z) = βz.
    Rotation(RotationAngle),
    /// φ = ψ∘(β·)∘ψ with ψ exchanging `fixed_point` and 0.
    Elliptic {
        fixed_point: Complex64,
        angle: RotationAngle,
    },
}

impl Symbol {
    pub fn angle(&self) -> &RotationAngle {
        match self {
            Symbol::Rotation(beta) => beta,
            Symbol::Elliptic { angle, .. } => angle,
        }
    }

    /// Evaluates φ at a point of the disc.
    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        match self {
            Symbol::Rotation(beta) => Ok(beta.value() * z),
            Symbol::Elliptic { fixed_point, angle } => {
                let psi = MobiusInvolution::new(*fixed_point)?;
                psi.apply(angle.value() * psi.apply(z)?)
            }
        }
    }
}

/// Wire form of a symbol. Hyperbolic and parabolic automorphisms parse but
/// are not representable as operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolSpec {
    Rotation(RotationAngle),
    Elliptic {
        fixed_point: Complex64,
        angle: RotationAngle,
    },
    /// An automorphism with two fixed points on 𝕋.
    Hyperbolic { fixed_points: [Complex64; 2] },
    /// An automorphism with one fixed point on 𝕋.
    Parabolic { fixed_point: Complex64 },
}

impl TryFrom<SymbolSpec> for Symbol {
    type Error = Error;

    fn try_from(spec: SymbolSpec) -> Result<Self> {
        match spec {
            SymbolSpec::Rotation(beta) => Ok(Symbol::Rotation(beta)),
            SymbolSpec::Elliptic { fixed_point, angle } => {
                MobiusInvolution::new(fixed_point)?;
                Ok(Symbol::Elliptic { fixed_point, angle })
            }
            SymbolSpec::Hyperbolic { .. } => Err(Error::NonElliptic(
                "hyperbolic symbol: iterates converge to a boundary fixed point".into(),
            )),
            SymbolSpec::Parabolic { .. } => Err(Error::NonElliptic(
                "parabolic symbol: iterates converge to a boundary fixed point".into(),
            )),
        }
    }
}

impl From<Symbol> for SymbolSpec {
    fn from(symbol: Symbol) -> Self {
        match symbol {
            Symbol::Rotation(beta) => SymbolSpec::Rotation(beta),
            Symbol::Elliptic { fixed_point, angle } => SymbolSpec::Elliptic { fixed_point, angle },
        }
    }
}

/// Wire form of an operator, accepted before representability is checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub weight: Weight,
    pub symbol: SymbolSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

/// W_{m,φ} f = m·(f∘φ), computed on series truncated at `degree`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorSpec", into = "OperatorSpec")]
pub struct WeightedCompositionOperator {
    weight: Weight,
    symbol: Symbol,
    degree: usize,
}

/// Short alias.
pub type WCOp = WeightedCompositionOperator;

impl TryFrom<OperatorSpec> for WeightedCompositionOperator {
    type Error = Error;

    fn try_from(spec: OperatorSpec) -> Result<Self> {
        let op = WeightedCompositionOperator::new(spec.weight, Symbol::try_from(spec.symbol)?)?;
        Ok(match spec.degree {
            Some(degree) => op.with_degree(degree),
            None => op,
        })
    }
}

impl From<WeightedCompositionOperator> for OperatorSpec {
    fn from(op: WeightedCompositionOperator) -> Self {
        OperatorSpec {
            weight: op.weight,
            symbol: op.symbol.into(),
            degree: (op.degree != WORKING_DEGREE).then_some(op.degree),
        }
    }
}

impl WeightedCompositionOperator {
    pub fn new(weight: Weight, symbol: Symbol) -> Result<Self> {
        weight.validate()?;
        if let Symbol::Elliptic { fixed_point, .. } = &symbol {
            MobiusInvolution::new(*fixed_point)?;
        }
        Ok(WeightedCompositionOperator {
            weight,
            symbol,
            degree: WORKING_DEGREE,
        })
    }

    /// T_{α,β} f = α f(βz).
    pub fn isometry(alpha: Complex64, beta: RotationAngle) -> Self {
        Self::rotation(TaylorSeries::constant(alpha), beta)
    }

    /// f ↦ m·f(βz).
    pub fn rotation(m: TaylorSeries, beta: RotationAngle) -> Self {
        WeightedCompositionOperator {
            weight: Weight::Series(m),
            symbol: Symbol::Rotation(beta),
            degree: WORKING_DEGREE,
        }
    }

    /// Multiplication operator M_m.
    pub fn multiplication(m: TaylorSeries) -> Self {
        Self::rotation(m, RotationAngle::Rational { p: 0, q: 1 })
    }

    pub fn with_degree(mut self, degree: usize) -> Self {
        self.degree = degree;
        self
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn weight_series(&self) -> Result<TaylorSeries> {
        self.weight.series(self.degree)
    }

    /// m·(f∘φ), truncated at the working degree.
    pub fn apply(&self, f: &TaylorSeries) -> Result<TaylorSeries> {
        let m = self.weight_series()?;
        let composed = match &self.symbol {
            Symbol::Rotation(beta) => f.compose_rotation(beta),
            Symbol::Elliptic { fixed_point, angle } => {
                let psi = MobiusInvolution::new(*fixed_point)?;
                let inner = psi.compose(f, self.degree)?.compose_rotation(angle);
                psi.compose(&inner, self.degree)?
            }
        };
        Ok(m.mul_truncated(&composed, self.degree))
    }

    /// The operator C_ψ W C_ψ, which has weight m∘ψ and rotation symbol β,
    /// together with the involution ψ. A rotation symbol is returned as is
    /// with ψ(z) = −z only when the fixed point is the origin.
    pub fn conjugate_to_origin(&self) -> Result<(WeightedCompositionOperator, MobiusInvolution)> {
        let Symbol::Elliptic { fixed_point, angle } = &self.symbol else {
            return Err(Error::NotEllipticSymbol);
        };
        let psi = MobiusInvolution::new(*fixed_point)?;
        let weight = psi.compose(&self.weight_series()?, self.degree)?;
        let conjugated = WeightedCompositionOperator {
            weight: Weight::Series(weight),
            symbol: Symbol::Rotation(angle.clone()),
            degree: self.degree,
        };
        Ok((conjugated, psi))
    }

    /// Inverse of [`conjugate_to_origin`](Self::conjugate_to_origin): the
    /// operator C_ψ W C_ψ for a rotation-symbol W, with elliptic symbol fixing
    /// ψ's distinguished point.
    pub fn conjugate_from_origin(&self, psi: &MobiusInvolution) -> Result<WeightedCompositionOperator> {
        let Symbol::Rotation(angle) = &self.symbol else {
            return Err(Error::NotRotationSymbol);
        };
        let weight = psi.compose(&self.weight_series()?, self.degree)?;
        Ok(WeightedCompositionOperator {
            weight: Weight::Series(weight),
            symbol: Symbol::Elliptic {
                fixed_point: psi.alpha(),
                angle: angle.clone(),
            },
            degree: self.degree,
        })
    }

    /// m_N(z) = ∏_{k<N} m(βᵏz) for a rotation of exact period N.
    pub fn weight_product(&self) -> Result<TaylorSeries> {
        let Symbol::Rotation(beta) = &self.symbol else {
            return Err(Error::NotRotationSymbol);
        };
        let period = beta.period().ok_or(Error::NotPeriodic)?;
        let m = self.weight_series()?;
        let mut product = m.clone();
        for k in 1..period {
            let rotated = m.compose_rotation(&RotationAngle::rational(
                (k * rotation_numerator(beta)) as i64,
                period as i64,
            )?);
            product = product.mul_truncated(&rotated, self.degree);
        }
        Ok(product)
    }

    /// Matrix of the operator on span{e_0, …, e_n}: column k holds the
    /// coefficients of W e_k. For rotation symbols it is lower triangular
    /// with diagonal m(0)βᵏ.
    pub fn truncation_matrix(&self, n: usize) -> Result<DMatrix<Complex64>> {
        let Symbol::Rotation(beta) = &self.symbol else {
            return Err(Error::NotRotationSymbol);
        };
        let m = self.weight.series(self.degree.max(n))?;
        let mut matrix = DMatrix::from_element(n + 1, n + 1, Complex64::new(0.0, 0.0));
        for k in 0..=n {
            let image = m.mul_truncated(&TaylorSeries::monomial(k).compose_rotation(beta), n);
            for j in 0..=n {
                matrix[(j, k)] = image.coeff(j);
            }
        }
        let above = (0..=n)
            .flat_map(|k| (0..k).map(move |j| (j, k)))
            .map(|(j, k)| matrix[(j, k)].norm())
            .fold(0.0, f64::max);
        if above != 0.0 {
            return Err(Error::StructureMismatch(format!(
                "truncation matrix has an entry of modulus {above:e} above the diagonal"
            )));
        }
        Ok(matrix)
    }
}

fn rotation_numerator(beta: &RotationAngle) -> u64 {
    match *beta {
        RotationAngle::Rational { p, .. } => p,
        RotationAngle::Irrational { .. } => 0,
    }
}

/// Whether basis images Te_0 … Te_K come from a composition operator, that
/// is Te_0 = 1 and Te_n = (Te_1)ⁿ for every n ≤ K.
pub fn is_composition_operator(images: &[TaylorSeries], degree: usize) -> Result<bool> {
    if images.len() < 3 {
        return Err(Error::TooFewImages {
            min: 3,
            got: images.len(),
        });
    }
    let one = TaylorSeries::constant(Complex64::new(1.0, 0.0));
    if images[0].max_coeff_diff(&one, degree) > STRUCTURE_TOL {
        return Ok(false);
    }
    let mut power = images[1].truncate(degree);
    for image in &images[2..] {
        power = power.mul_truncated(&images[1], degree);
        if image.max_coeff_diff(&power, degree) > STRUCTURE_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

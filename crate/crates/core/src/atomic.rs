//! Atomic injective factors (triangular, shear, quasi-triangular) and
//! ordered chains of them.
//!
//! Chains list factors outermost first: a chain `[C_k, ..., C_1]`
//! represents the composition `F = C_k ∘ ... ∘ C_1`, with `C_1` acting
//! on the strip directly. Chain construction validates an injectivity
//! certificate for every factor (monotone `alpha`, nonvanishing scale),
//! checked on the strip for the innermost factor and on the whole line
//! for any quasi-triangular factor sitting further out.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::bipoly::BiPoly;
use crate::interval::Interval;
use crate::mapalg::PlanarMap;
use crate::rational::Rat;
use crate::realroots;
use crate::unipoly::UniPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("chain must contain at least one factor")]
    Empty,
    #[error("factor {index} invalid: {reason}")]
    InvalidFactor { index: usize, reason: String },
}

/// One injective building block of a decomposition.
///
/// Univariate data is interpreted per variant: `beta` is a polynomial
/// in `x`, `alpha` in the variable named by the variant's formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtomicMap {
    /// `(a*x, b*y + beta(x))`, `a, b != 0`.
    TriangularX { a: Rat, b: Rat, beta: UniPoly },
    /// `(a*x + alpha(y), b*y)`, `a, b != 0`.
    TriangularY { a: Rat, b: Rat, alpha: UniPoly },
    /// `(x - c*y^power, y)`, `c != 0`: eliminates a `y`-power from the
    /// first component.
    ShearX { c: Rat, power: u32 },
    /// `(x, y - c*x^power)`, `c != 0`: eliminates from the second.
    ShearY { c: Rat, power: u32 },
    /// `(alpha(x), b*y + beta(x))` with `alpha` strictly monotone.
    QuasiTriangularX {
        alpha: UniPoly,
        b: Rat,
        beta: UniPoly,
    },
    /// `(alpha(x), w(x)*y + beta(x))` with nonvanishing scale `w`.
    ScaledQuasiTriangularX {
        alpha: UniPoly,
        w: UniPoly,
        beta: UniPoly,
    },
    /// `(w(x)*y + beta(x), alpha(x))`: the component-swapped form that
    /// closes the recursion on maps whose second component is `y`-free.
    SwappedScaledQuasiTriangularX {
        w: UniPoly,
        beta: UniPoly,
        alpha: UniPoly,
    },
}

impl AtomicMap {
    /// Narrowest variant for `(alpha(x), w(x)*y + beta(x))`: triangular
    /// when `alpha` is linear through the origin and the scale is
    /// constant, plain quasi-triangular for a constant scale, scaled
    /// otherwise.
    pub fn quasi_x(alpha: UniPoly, w: UniPoly, beta: UniPoly) -> AtomicMap {
        match w.as_constant() {
            Some(b) => {
                if alpha.degree() == Some(1) && alpha.coeff(0).is_zero() {
                    AtomicMap::TriangularX {
                        a: alpha.coeff(1),
                        b,
                        beta,
                    }
                } else {
                    AtomicMap::QuasiTriangularX { alpha, b, beta }
                }
            }
            None => AtomicMap::ScaledQuasiTriangularX { alpha, w, beta },
        }
    }

    /// Re-narrows quasi-triangular variants; triangular kinds are
    /// already canonical.
    pub fn canonical(self) -> AtomicMap {
        match self {
            AtomicMap::QuasiTriangularX { alpha, b, beta } => {
                AtomicMap::quasi_x(alpha, UniPoly::constant(b), beta)
            }
            AtomicMap::ScaledQuasiTriangularX { alpha, w, beta } => {
                AtomicMap::quasi_x(alpha, w, beta)
            }
            other => other,
        }
    }

    /// Triangular factors are global bijections of the plane.
    pub fn is_triangular(&self) -> bool {
        matches!(
            self,
            AtomicMap::TriangularX { .. }
                | AtomicMap::TriangularY { .. }
                | AtomicMap::ShearX { .. }
                | AtomicMap::ShearY { .. }
        )
    }

    /// The two components as bivariate polynomials.
    pub fn components(&self) -> (BiPoly, BiPoly) {
        match self {
            AtomicMap::TriangularX { a, b, beta } => (
                BiPoly::var_x().scale(a),
                &BiPoly::var_y().scale(b) + &BiPoly::from_unipoly_in_x(beta.clone()),
            ),
            AtomicMap::TriangularY { a, b, alpha } => (
                &BiPoly::var_x().scale(a) + &BiPoly::from_unipoly_in_y(alpha),
                BiPoly::var_y().scale(b),
            ),
            AtomicMap::ShearX { c, power } => (
                &BiPoly::var_x() - &BiPoly::var_y().pow(*power).scale(c),
                BiPoly::var_y(),
            ),
            AtomicMap::ShearY { c, power } => (
                BiPoly::var_x(),
                &BiPoly::var_y() - &BiPoly::var_x().pow(*power).scale(c),
            ),
            AtomicMap::QuasiTriangularX { alpha, b, beta } => (
                BiPoly::from_unipoly_in_x(alpha.clone()),
                &BiPoly::var_y().scale(b) + &BiPoly::from_unipoly_in_x(beta.clone()),
            ),
            AtomicMap::ScaledQuasiTriangularX { alpha, w, beta } => (
                BiPoly::from_unipoly_in_x(alpha.clone()),
                &(&BiPoly::var_y() * &BiPoly::from_unipoly_in_x(w.clone()))
                    + &BiPoly::from_unipoly_in_x(beta.clone()),
            ),
            AtomicMap::SwappedScaledQuasiTriangularX { w, beta, alpha } => (
                &(&BiPoly::var_y() * &BiPoly::from_unipoly_in_x(w.clone()))
                    + &BiPoly::from_unipoly_in_x(beta.clone()),
                BiPoly::from_unipoly_in_x(alpha.clone()),
            ),
        }
    }

    /// As a planar map on the given strip.
    pub fn to_map(&self, strip: Interval) -> PlanarMap {
        let (p, q) = self.components();
        PlanarMap::new(p, q, strip)
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> (Rat, Rat) {
        let (p, q) = self.components();
        (p.eval(x, y), q.eval(x, y))
    }

    /// Injectivity certificate on the given scope. Triangular factors
    /// only need nonzero constants; quasi-triangular factors need a
    /// strictly monotone `alpha` and a nonvanishing scale there.
    pub fn validate(&self, scope: &Interval) -> Result<(), String> {
        let nonzero = |r: &Rat, name: &str| -> Result<(), String> {
            if r.is_zero() {
                Err(format!("{name} must be nonzero"))
            } else {
                Ok(())
            }
        };
        match self {
            AtomicMap::TriangularX { a, b, .. } | AtomicMap::TriangularY { a, b, .. } => {
                nonzero(a, "a")?;
                nonzero(b, "b")
            }
            AtomicMap::ShearX { c, power } | AtomicMap::ShearY { c, power } => {
                nonzero(c, "shear constant")?;
                if *power == 0 {
                    return Err("shear power must be positive".to_string());
                }
                Ok(())
            }
            AtomicMap::QuasiTriangularX { alpha, b, .. } => {
                nonzero(b, "b")?;
                check_monotone(alpha, scope)
            }
            AtomicMap::ScaledQuasiTriangularX { alpha, w, .. }
            | AtomicMap::SwappedScaledQuasiTriangularX { alpha, w, .. } => {
                check_monotone(alpha, scope)?;
                if !realroots::is_nonvanishing(w, scope) {
                    return Err(format!(
                        "scale {} vanishes on {scope}",
                        w.display('x')
                    ));
                }
                Ok(())
            }
        }
    }

    /// Human-readable formula.
    pub fn describe(&self) -> String {
        match self {
            AtomicMap::TriangularX { .. }
            | AtomicMap::TriangularY { .. }
            | AtomicMap::ShearX { .. }
            | AtomicMap::ShearY { .. } => {
                let (p, q) = self.components();
                format!("triangular ({} ; {})", p.display(), q.display())
            }
            _ => {
                let (p, q) = self.components();
                format!("quasi-triangular ({} ; {})", p.display(), q.display())
            }
        }
    }
}

fn check_monotone(alpha: &UniPoly, scope: &Interval) -> Result<(), String> {
    if realroots::is_strictly_monotone(alpha, scope) {
        Ok(())
    } else {
        Err(format!(
            "alpha = {} is not strictly monotone on {scope}",
            alpha.display('x')
        ))
    }
}

impl fmt::Display for AtomicMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// An ordered composition of validated atomic factors on a strip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    factors: Vec<AtomicMap>,
    strip: Interval,
}

impl Chain {
    /// Validates every factor: the innermost against the strip, any
    /// other quasi-triangular factor against the whole line (a
    /// conservative scope that stays sound under composition).
    pub fn new(factors: Vec<AtomicMap>, strip: Interval) -> Result<Self, ChainError> {
        if factors.is_empty() {
            return Err(ChainError::Empty);
        }
        let last = factors.len() - 1;
        for (index, factor) in factors.iter().enumerate() {
            let scope = if index == last {
                strip.clone()
            } else {
                Interval::all()
            };
            factor
                .validate(&scope)
                .map_err(|reason| ChainError::InvalidFactor { index, reason })?;
        }
        Ok(Chain { factors, strip })
    }

    /// Outermost first.
    pub fn factors(&self) -> &[AtomicMap] {
        &self.factors
    }

    pub fn strip(&self) -> &Interval {
        &self.strip
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn triangular_count(&self) -> usize {
        self.factors.iter().filter(|f| f.is_triangular()).count()
    }

    /// Expands the composition into one explicit planar map.
    pub fn compose(&self) -> PlanarMap {
        let mut iter = self.factors.iter().rev();
        let (mut p, mut q) = iter.next().expect("chain is nonempty").components();
        for factor in iter {
            let (fp, fq) = factor.components();
            let new_p = fp.substitute(&p, &q);
            let new_q = fq.substitute(&p, &q);
            p = new_p;
            q = new_q;
        }
        PlanarMap::new(p, q, self.strip.clone())
    }

    /// Applies the factors one by one, innermost first.
    pub fn eval(&self, x: &Rat, y: &Rat) -> (Rat, Rat) {
        let mut pt = (x.clone(), y.clone());
        for factor in self.factors.iter().rev() {
            pt = factor.eval(&pt.0, &pt.1);
        }
        pt
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ∘ ")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

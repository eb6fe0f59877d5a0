//! Inversion of atomic factors and chains: explicit polynomial inverses
//! when the factor algebra allows them, exact monotone-bisection
//! evaluators otherwise, and symbolic or pointwise verification.
//!
//! No floating point anywhere: evaluators narrow rational brackets
//! until the round-trip defect drops below `2^-k` (default `k = 40`),
//! and the defect is confined to the coordinate produced by the
//! bisection — the other coordinate is solved exactly.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::atomic::{AtomicMap, Chain};
use crate::bipoly::BiPoly;
use crate::interval::Interval;
use crate::mapalg::{strip_sample_points, PlanarMap};
use crate::rational::{rat_int, Rat};
use crate::unipoly::UniPoly;

/// Default bisection tolerance exponent: round-trips within `2^-40`.
pub const DEFAULT_TOLERANCE_LOG2: u32 = 40;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InverseError {
    #[error("factor certificate invalid: {0}")]
    InvalidFactor(String),
    #[error("point lies outside the factor's image")]
    OutsideImage,
    #[error("bisection failed to reach the tolerance")]
    BisectionStalled,
}

/// The inverse of one atomic factor.
#[derive(Debug, Clone)]
pub enum AtomicInverse {
    /// Expressible in the factor taxonomy itself (triangular kinds and
    /// affine quasi-triangular factors).
    Atomic(AtomicMap),
    /// Polynomial inverse that falls outside the taxonomy (the
    /// component-swapped affine case).
    Explicit { p: BiPoly, q: BiPoly },
    /// Exact rational evaluator that inverts the monotone coordinate by
    /// bisection and solves the other coordinate exactly.
    Monotone(MonotoneInverse),
}

impl AtomicInverse {
    pub fn is_polynomial(&self) -> bool {
        !matches!(self, AtomicInverse::Monotone(_))
    }

    /// The inverse's components as polynomials, when explicit.
    pub fn polynomial_components(&self) -> Option<(BiPoly, BiPoly)> {
        match self {
            AtomicInverse::Atomic(a) => Some(a.components()),
            AtomicInverse::Explicit { p, q } => Some((p.clone(), q.clone())),
            AtomicInverse::Monotone(_) => None,
        }
    }

    pub fn eval(&self, u: &Rat, v: &Rat) -> Result<(Rat, Rat), InverseError> {
        match self {
            AtomicInverse::Atomic(a) => Ok(a.eval(u, v)),
            AtomicInverse::Explicit { p, q } => Ok((p.eval(u, v), q.eval(u, v))),
            AtomicInverse::Monotone(m) => m.eval(u, v),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            AtomicInverse::Atomic(a) => a.describe(),
            AtomicInverse::Explicit { p, q } => {
                format!("explicit ({} ; {})", p.display(), q.display())
            }
            AtomicInverse::Monotone(m) => format!(
                "monotone evaluator for {} (tolerance 2^-{})",
                m.factor.describe(),
                m.tolerance_log2
            ),
        }
    }
}

/// Inverts a single factor. `scope` is where the factor's certificate
/// holds (the chain strip for an innermost factor, the whole line
/// otherwise); the evaluator brackets its bisection inside it.
pub fn invert_atomic(
    factor: &AtomicMap,
    scope: &Interval,
    tolerance_log2: u32,
) -> Result<AtomicInverse, InverseError> {
    factor
        .validate(scope)
        .map_err(InverseError::InvalidFactor)?;
    let inverse = match factor {
        AtomicMap::TriangularX { a, b, beta } => {
            let a_inv = Rat::one() / a;
            let b_inv = Rat::one() / b;
            let beta_inv = beta
                .compose(&UniPoly::monomial(a_inv.clone(), 1))
                .scale(&-&b_inv);
            AtomicInverse::Atomic(AtomicMap::TriangularX {
                a: a_inv,
                b: b_inv,
                beta: beta_inv,
            })
        }
        AtomicMap::TriangularY { a, b, alpha } => {
            let a_inv = Rat::one() / a;
            let b_inv = Rat::one() / b;
            let alpha_inv = alpha
                .compose(&UniPoly::monomial(b_inv.clone(), 1))
                .scale(&-&a_inv);
            AtomicInverse::Atomic(AtomicMap::TriangularY {
                a: a_inv,
                b: b_inv,
                alpha: alpha_inv,
            })
        }
        AtomicMap::ShearX { c, power } => AtomicInverse::Atomic(AtomicMap::ShearX {
            c: -c,
            power: *power,
        }),
        AtomicMap::ShearY { c, power } => AtomicInverse::Atomic(AtomicMap::ShearY {
            c: -c,
            power: *power,
        }),
        AtomicMap::QuasiTriangularX { alpha, b, beta } => {
            match affine_inverse(alpha) {
                Some(alpha_inv) => {
                    let b_inv = Rat::one() / b;
                    let beta_inv = beta.compose(&alpha_inv).scale(&-&b_inv);
                    AtomicInverse::Atomic(
                        AtomicMap::quasi_x(
                            alpha_inv,
                            UniPoly::constant(b_inv),
                            beta_inv,
                        ),
                    )
                }
                None => AtomicInverse::Monotone(MonotoneInverse::new(
                    factor.clone(),
                    scope.clone(),
                    tolerance_log2,
                )),
            }
        }
        AtomicMap::ScaledQuasiTriangularX { alpha, w, beta } => {
            match (affine_inverse(alpha), w.as_constant()) {
                (Some(alpha_inv), Some(b)) => {
                    let b_inv = Rat::one() / b;
                    let beta_inv = beta.compose(&alpha_inv).scale(&-&b_inv);
                    AtomicInverse::Atomic(
                        AtomicMap::quasi_x(
                            alpha_inv,
                            UniPoly::constant(b_inv),
                            beta_inv,
                        ),
                    )
                }
                _ => AtomicInverse::Monotone(MonotoneInverse::new(
                    factor.clone(),
                    scope.clone(),
                    tolerance_log2,
                )),
            }
        }
        AtomicMap::SwappedScaledQuasiTriangularX { w, beta, alpha } => {
            match (affine_inverse(alpha), w.as_constant()) {
                (Some(alpha_inv), Some(b)) => {
                    // (w y + beta(x), alpha(x)): x = alpha^-1(v),
                    // y = (u - beta(alpha^-1(v)))/w
                    let x_of = BiPoly::from_unipoly_in_y(&alpha_inv);
                    let b_inv = Rat::one() / b;
                    let y_of = &BiPoly::var_x().scale(&b_inv)
                        - &BiPoly::from_unipoly_in_y(&beta.compose(&alpha_inv))
                            .scale(&b_inv);
                    AtomicInverse::Explicit { p: x_of, q: y_of }
                }
                _ => AtomicInverse::Monotone(MonotoneInverse::new(
                    factor.clone(),
                    scope.clone(),
                    tolerance_log2,
                )),
            }
        }
    };
    Ok(inverse)
}

/// Exact inverse of a degree-one polynomial.
fn affine_inverse(alpha: &UniPoly) -> Option<UniPoly> {
    if alpha.degree() != Some(1) {
        return None;
    }
    let a1 = alpha.coeff(1);
    let a0 = alpha.coeff(0);
    Some(UniPoly::from_coeffs(vec![-&a0 / &a1, Rat::one() / a1]))
}

/// Evaluator for factors whose monotone coordinate has no polynomial
/// inverse. The bisected coordinate carries the whole round-trip
/// defect; the linear coordinate is solved exactly.
#[derive(Debug, Clone)]
pub struct MonotoneInverse {
    factor: AtomicMap,
    scope: Interval,
    tolerance_log2: u32,
}

impl MonotoneInverse {
    fn new(factor: AtomicMap, scope: Interval, tolerance_log2: u32) -> Self {
        MonotoneInverse {
            factor,
            scope,
            tolerance_log2,
        }
    }

    pub fn factor(&self) -> &AtomicMap {
        &self.factor
    }

    pub fn eval(&self, u: &Rat, v: &Rat) -> Result<(Rat, Rat), InverseError> {
        let tol = pow2_inverse(self.tolerance_log2);
        match &self.factor {
            AtomicMap::QuasiTriangularX { alpha, b, beta } => {
                let x = solve_monotone(alpha, u, &self.scope, &tol)?;
                let y = (v - beta.eval(&x)) / b;
                Ok((x, y))
            }
            AtomicMap::ScaledQuasiTriangularX { alpha, w, beta } => {
                let x = solve_monotone(alpha, u, &self.scope, &tol)?;
                let y = (v - beta.eval(&x)) / w.eval(&x);
                Ok((x, y))
            }
            AtomicMap::SwappedScaledQuasiTriangularX { w, beta, alpha } => {
                let x = solve_monotone(alpha, v, &self.scope, &tol)?;
                let y = (u - beta.eval(&x)) / w.eval(&x);
                Ok((x, y))
            }
            other => Err(InverseError::InvalidFactor(format!(
                "{other} has an explicit inverse; no evaluator needed"
            ))),
        }
    }
}

fn pow2_inverse(k: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::from(2).pow(k))
}

/// Solves `alpha(x) = target` for a strictly monotone `alpha` on
/// `scope` by exact rational bisection, stopping when
/// `|alpha(x) - target| <= tol`. Degree-one cases are solved exactly.
fn solve_monotone(
    alpha: &UniPoly,
    target: &Rat,
    scope: &Interval,
    tol: &Rat,
) -> Result<Rat, InverseError> {
    if let Some(alpha_inv) = affine_inverse(alpha) {
        let x = alpha_inv.eval(target);
        return if scope.contains(&x) || scope.is_all() {
            Ok(x)
        } else {
            Err(InverseError::OutsideImage)
        };
    }
    let increasing = alpha_increasing_on(alpha, scope);
    let center = scope.interior_point();
    let below = |value: &Rat| -> bool {
        if increasing {
            value < target
        } else {
            value > target
        }
    };

    // Bracket the preimage, doubling steps outward (halving toward any
    // finite open endpoint).
    let mut lo = center.clone();
    let mut hi = center;
    let mut step = rat_int(1);
    let mut bracketed = false;
    for _ in 0..256 {
        let lo_val = alpha.eval(&lo);
        if lo_val == *target {
            return Ok(lo);
        }
        let hi_val = alpha.eval(&hi);
        if hi_val == *target {
            return Ok(hi);
        }
        let lo_ok = below(&lo_val);
        let hi_ok = !below(&hi_val);
        if lo_ok && hi_ok {
            bracketed = true;
            break;
        }
        if !lo_ok {
            lo = match scope.lower() {
                None => &lo - &step,
                Some(a) => (a + &lo) / rat_int(2),
            };
        }
        if !hi_ok {
            hi = match scope.upper() {
                None => &hi + &step,
                Some(b) => (&hi + b) / rat_int(2),
            };
        }
        step = &step * rat_int(2);
    }
    if !bracketed {
        return Err(InverseError::OutsideImage);
    }

    for _ in 0..(512 + 4 * tol_iterations(tol)) {
        let mid = (&lo + &hi) / rat_int(2);
        let val = alpha.eval(&mid);
        if (&val - target).abs() <= *tol {
            return Ok(mid);
        }
        if below(&val) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(InverseError::BisectionStalled)
}

fn tol_iterations(tol: &Rat) -> usize {
    // crude bit count of the denominator; guides the iteration cap only
    tol.denom().bits() as usize
}

/// Direction of a strictly monotone polynomial on the scope, read off
/// the derivative's sign at a non-root sample.
fn alpha_increasing_on(alpha: &UniPoly, scope: &Interval) -> bool {
    let d = alpha.derivative();
    let samples = scope.interior_grid(d.degree().unwrap_or(0) + 2);
    for s in samples {
        match d.sign_at(&s) {
            0 => continue,
            sign => return sign > 0,
        }
    }
    true
}

/// Where a chain's image lives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImageDescription {
    /// Every factor is a global bijection.
    WholePlane,
    /// `alpha(I) x R` for a single quasi-triangular factor.
    VerticalStrip(Interval),
    /// `R x alpha(I)` for a single component-swapped factor.
    HorizontalStrip(Interval),
    /// The innermost image transported through outer bijections.
    Transported { innermost: Interval, outer_factors: usize },
}

impl fmt::Display for ImageDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImageDescription::WholePlane => write!(f, "the whole plane"),
            ImageDescription::VerticalStrip(iv) => write!(f, "{iv} x (-inf, inf)"),
            ImageDescription::HorizontalStrip(iv) => write!(f, "(-inf, inf) x {iv}"),
            ImageDescription::Transported {
                innermost,
                outer_factors,
            } => write!(
                f,
                "{innermost} x (-inf, inf) transported through {outer_factors} outer bijections"
            ),
        }
    }
}

/// Image of a strictly monotone polynomial over an open interval.
fn monotone_image(alpha: &UniPoly, iv: &Interval) -> Interval {
    let increasing = alpha_increasing_on(alpha, iv);
    let at = |end: Option<&Rat>, toward_positive: bool| -> Option<Rat> {
        match end {
            Some(e) => Some(alpha.eval(e)),
            None => {
                let _ = toward_positive;
                None
            }
        }
    };
    let (lo, hi) = if increasing {
        (at(iv.lower(), false), at(iv.upper(), true))
    } else {
        (at(iv.upper(), true), at(iv.lower(), false))
    };
    Interval::new(lo, hi).expect("monotone image of a nonempty interval is nonempty")
}

/// The inverse of a whole chain.
#[derive(Debug, Clone)]
pub enum InverseObject {
    /// Every factor inverted polynomially; the fold of the inverses.
    ExplicitMap { map: PlanarMap },
    /// Factor inverses applied in sequence, outermost first; at least
    /// one is a bisection evaluator.
    Evaluable {
        steps: Vec<AtomicInverse>,
        tolerance_log2: u32,
    },
}

impl InverseObject {
    pub fn is_explicit(&self) -> bool {
        matches!(self, InverseObject::ExplicitMap { .. })
    }

    pub fn eval(&self, u: &Rat, v: &Rat) -> Result<(Rat, Rat), InverseError> {
        match self {
            InverseObject::ExplicitMap { map } => Ok(map.eval_unchecked(u, v)),
            InverseObject::Evaluable { steps, .. } => {
                let mut pt = (u.clone(), v.clone());
                for step in steps.iter().rev() {
                    pt = step.eval(&pt.0, &pt.1)?;
                }
                Ok(pt)
            }
        }
    }
}

/// A chain inverse together with a description of where it is defined.
#[derive(Debug, Clone)]
pub struct ChainInverse {
    pub object: InverseObject,
    pub image: ImageDescription,
}

/// Inverts every factor (innermost factor against the chain strip,
/// outer factors against the whole line) and reverses the order. When
/// all inverses are polynomial they are folded into one explicit map.
pub fn invert_chain(chain: &Chain, tolerance_log2: u32) -> Result<ChainInverse, InverseError> {
    let factors = chain.factors();
    let last = factors.len() - 1;
    let mut steps = Vec::with_capacity(factors.len());
    // F = C_k ∘ ... ∘ C_1 gives F^-1 = C_1^-1 ∘ ... ∘ C_k^-1, so the
    // inverse chain lists the innermost factor's inverse first.
    for (index, factor) in factors.iter().enumerate().rev() {
        let scope = if index == last {
            chain.strip().clone()
        } else {
            Interval::all()
        };
        steps.push(invert_atomic(factor, &scope, tolerance_log2)?);
    }

    let image = image_of(chain);
    if steps.iter().all(AtomicInverse::is_polynomial) {
        let pairs: Vec<(BiPoly, BiPoly)> = steps
            .iter()
            .map(|s| s.polynomial_components().expect("all polynomial"))
            .collect();
        let mut iter = pairs.iter().rev();
        let (mut p, mut q) = iter.next().expect("chain is nonempty").clone();
        for (fp, fq) in iter {
            let new_p = fp.substitute(&p, &q);
            let new_q = fq.substitute(&p, &q);
            p = new_p;
            q = new_q;
        }
        return Ok(ChainInverse {
            object: InverseObject::ExplicitMap {
                map: PlanarMap::on_plane(p, q),
            },
            image,
        });
    }
    Ok(ChainInverse {
        object: InverseObject::Evaluable {
            steps,
            tolerance_log2,
        },
        image,
    })
}

fn image_of(chain: &Chain) -> ImageDescription {
    let innermost = chain.factors().last().expect("nonempty");
    let outer = chain.len() - 1;
    let strip = chain.strip();
    let inner_image = match innermost {
        AtomicMap::QuasiTriangularX { alpha, .. }
        | AtomicMap::ScaledQuasiTriangularX { alpha, .. } => {
            Some((monotone_image(alpha, strip), false))
        }
        AtomicMap::SwappedScaledQuasiTriangularX { alpha, .. } => {
            Some((monotone_image(alpha, strip), true))
        }
        _ => None,
    };
    match inner_image {
        None => ImageDescription::WholePlane,
        Some((iv, swapped)) => {
            if outer == 0 {
                if swapped {
                    ImageDescription::HorizontalStrip(iv)
                } else {
                    ImageDescription::VerticalStrip(iv)
                }
            } else if iv.is_all() {
                ImageDescription::WholePlane
            } else {
                ImageDescription::Transported {
                    innermost: iv,
                    outer_factors: outer,
                }
            }
        }
    }
}

/// A verification failure: the point where the round trip broke and why.
#[derive(Debug, Clone)]
pub struct InverseMismatch {
    pub at: (Rat, Rat),
    pub detail: String,
}

impl fmt::Display for InverseMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at ({}, {}): {}", self.at.0, self.at.1, self.detail)
    }
}

/// Verifies an inverse against the map it came from.
///
/// Explicit inverses are checked symbolically in both directions
/// (`inv ∘ F = id` and `F ∘ inv = id` as exact polynomial identities).
/// Evaluable inverses are checked pointwise: 100 deterministic sample
/// points in the image must round-trip within the tolerance.
pub fn verify_inverse(f: &PlanarMap, inverse: &InverseObject) -> Result<(), InverseMismatch> {
    match inverse {
        InverseObject::ExplicitMap { map } => {
            let inv_after = (
                map.p().substitute(f.p(), f.q()),
                map.q().substitute(f.p(), f.q()),
            );
            if inv_after != (BiPoly::var_x(), BiPoly::var_y()) {
                return Err(symbolic_mismatch(&inv_after, "inv ∘ F"));
            }
            let after_inv = (
                f.p().substitute(map.p(), map.q()),
                f.q().substitute(map.p(), map.q()),
            );
            if after_inv != (BiPoly::var_x(), BiPoly::var_y()) {
                return Err(symbolic_mismatch(&after_inv, "F ∘ inv"));
            }
            Ok(())
        }
        InverseObject::Evaluable {
            steps: _,
            tolerance_log2,
        } => {
            let tol = pow2_inverse(*tolerance_log2);
            for (x, y) in strip_sample_points(f.strip(), 100) {
                let pt = f.eval_unchecked(&x, &y);
                let back = inverse.eval(&pt.0, &pt.1).map_err(|e| InverseMismatch {
                    at: pt.clone(),
                    detail: format!("inverse evaluation failed: {e}"),
                })?;
                let image = f.eval_unchecked(&back.0, &back.1);
                let defect_p = (&image.0 - &pt.0).abs();
                let defect_q = (&image.1 - &pt.1).abs();
                if defect_p > tol || defect_q > tol {
                    return Err(InverseMismatch {
                        at: pt,
                        detail: format!(
                            "round-trip defect ({defect_p}, {defect_q}) exceeds 2^-{tolerance_log2}"
                        ),
                    });
                }
            }
            Ok(())
        }
    }
}

/// Finds a concrete point where a failed identity differs from (x, y).
fn symbolic_mismatch(pair: &(BiPoly, BiPoly), which: &str) -> InverseMismatch {
    let diff_p = &pair.0 - &BiPoly::var_x();
    let diff_q = &pair.1 - &BiPoly::var_y();
    let witness = [diff_p, diff_q]
        .iter()
        .filter(|d| !d.is_zero())
        .find_map(|d| {
            let max_deg = d.x_degree().unwrap_or(0).max(d.y_degree().unwrap_or(0));
            for k in 0..=(2 * max_deg as i64 + 2) {
                let x = rat_int(k);
                let y = rat_int(k + 1);
                if !d.eval(&x, &y).is_zero() {
                    return Some((x, y));
                }
            }
            None
        })
        .unwrap_or((Rat::zero(), Rat::zero()));
    InverseMismatch {
        at: witness,
        detail: format!("{which} is not the identity"),
    }
}

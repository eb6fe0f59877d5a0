//! Constructive factorization of non-singular delta-maps into chains of
//! triangular and quasi-triangular factors, with exact verification.
//!
//! Four routes are implemented, one per admissible input shape:
//!
//! * `T1_type11`   — both components of `y`-degree at most one;
//! * `T4_deltaM1`  — type `(m, 1)`: the second component is `y`-linear;
//! * `C1_deltaMM`  — both components with `y`-powers in `{0, 1, m}`;
//! * `T5_deltaLMM` — first component with powers in `{0, 1, m, 2m, ..., Lm}`,
//!   second of the form `q_m y^m + q_0`.
//!
//! Every route eliminates leading coefficients with shear factors whose
//! constants come from exact proportionality identities, recurses on the
//! reduced map, and terminates in a single (possibly component-swapped)
//! quasi-triangular factor. Constants are never trusted: each candidate
//! is re-verified as a polynomial identity and the final chain must
//! recompose to the input exactly.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::atomic::{AtomicMap, Chain, ChainError};
use crate::bipoly::BiPoly;
use crate::interval::Interval;
use crate::mapalg::{classify, NonSingularity, PlanarMap};
use crate::rational::{rat_int, Rat};
use crate::unipoly::UniPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("not a delta-map: the Jacobian determinant depends on y")]
    NotDeltaMap,
    #[error("singular input: determinant vanishes at {0}")]
    SingularInput(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("hypothesis violated: p1'q1 - p1q1' is not identically zero")]
    LeadingRelationFails,
    #[error("proportionality failed at stage {stage}: {detail}")]
    Proportionality { stage: usize, detail: String },
    #[error("chain certificate failed: {0}")]
    Chain(#[from] ChainError),
    #[error("no decomposition shape applies")]
    NotDecomposable {
        diagnosis: Vec<(DecompositionRoute, String)>,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

/// Which factorization shape produced a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionRoute {
    Type11,
    DeltaM1,
    DeltaMM,
    DeltaLMM,
}

impl fmt::Display for DecompositionRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecompositionRoute::Type11 => "T1_type11",
            DecompositionRoute::DeltaM1 => "T4_deltaM1",
            DecompositionRoute::DeltaMM => "C1_deltaMM",
            DecompositionRoute::DeltaLMM => "T5_deltaLMM",
        })
    }
}

/// A verified factorization. `triangular_count` counts the elimination
/// factors; the terminal slot always counts as the one quasi-triangular
/// factor even when it degenerates to a literally triangular map
/// (`all_factors_triangular` records that case).
#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub chain: Chain,
    pub route: DecompositionRoute,
    pub triangular_count: usize,
    pub quasi_triangular_count: usize,
    pub all_factors_triangular: bool,
    pub verified: bool,
}

impl DecompositionReport {
    /// Expands the chain back into one explicit map; equals the
    /// decomposed input exactly.
    pub fn recompose(&self) -> PlanarMap {
        self.chain.compose()
    }
}

/// Result of an exact proportionality check `p^h = c * q^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proportionality {
    /// The constant, when the identity holds exactly.
    pub constant: Option<Rat>,
    /// Whether `h p' q - k q' p` vanishes identically (the equivalent
    /// differential form of the identity).
    pub differential_identity: bool,
}

/// Decides whether `p^h = c * q^k` holds as an exact polynomial
/// identity. The candidate constant is the ratio of leading
/// coefficients; the full identity is then verified, never assumed.
pub fn proportionality(p: &UniPoly, q: &UniPoly, h: u32, k: u32) -> Proportionality {
    assert!(h >= 1 && k >= 1, "exponents must be positive");
    let differential = &(&p.derivative() * q).scale(&rat_int(h as i64))
        - &(&q.derivative() * p).scale(&rat_int(k as i64));
    let differential_identity = differential.is_zero();
    let constant = if p.is_zero() {
        Some(Rat::zero())
    } else if q.is_zero() {
        None
    } else {
        let ph = p.pow(h);
        let qk = q.pow(k);
        if ph.degree() != qk.degree() {
            None
        } else {
            let c = ph.leading().unwrap() / qk.leading().unwrap();
            (ph == qk.scale(&c)).then_some(c)
        }
    };
    Proportionality {
        constant,
        differential_identity,
    }
}

/// `p = c * q^l` as an exact identity.
pub fn proportionality_power(p: &UniPoly, q: &UniPoly, l: u32) -> Proportionality {
    proportionality(p, q, 1, l)
}

/// Both components of `y`-degree at most one.
pub fn decompose_type11(f: &PlanarMap) -> Result<DecompositionReport, DecomposeError> {
    let (m, n) = f.map_type();
    if m > 1 || n > 1 {
        return Err(DecomposeError::ShapeMismatch(format!(
            "type ({m}, {n}) is not y-linear in both components"
        )));
    }
    if m == 1 && n == 1 {
        let p1 = f.p().coeff_y(1);
        let q1 = f.q().coeff_y(1);
        if !proportionality(&p1, &q1, 1, 1).differential_identity {
            return Err(DecomposeError::LeadingRelationFails);
        }
    }
    run_route(f, DecompositionRoute::Type11, |p, q, strip| {
        eliminate_m1(p, q, strip)
    })
}

/// Type `(m, 1)`: second component `y`-linear (or `y`-free for the
/// component-swapped degenerate case).
pub fn decompose_delta_m1(f: &PlanarMap) -> Result<DecompositionReport, DecomposeError> {
    let (_, n) = f.map_type();
    if n > 1 {
        return Err(DecomposeError::ShapeMismatch(format!(
            "second component has y-degree {n} > 1"
        )));
    }
    run_route(f, DecompositionRoute::DeltaM1, |p, q, strip| {
        eliminate_m1(p, q, strip)
    })
}

/// Both components with `y`-powers contained in `{0, 1, m}`.
pub fn decompose_delta_mm(f: &PlanarMap) -> Result<DecompositionReport, DecomposeError> {
    let (dp, dq) = f.map_type();
    let m = dp.max(dq);
    check_powers(f.p(), &[0, 1, m], "first")?;
    check_powers(f.q(), &[0, 1, m], "second")?;
    run_route(f, DecompositionRoute::DeltaMM, |p, q, strip| {
        core_mm(p, q, strip)
    })
}

/// First component with powers in `{0, 1} ∪ {m, 2m, ..., Lm}`, second
/// of the form `q_m y^m + q_0` with `m >= 2`.
pub fn decompose_delta_lmm(f: &PlanarMap) -> Result<DecompositionReport, DecomposeError> {
    let (dp, dq) = f.map_type();
    let m = dq;
    if m < 2 {
        return Err(DecomposeError::ShapeMismatch(format!(
            "second component has y-degree {m}, need at least 2"
        )));
    }
    check_powers(f.q(), &[0, m], "second")?;
    if dp > 1 {
        if dp % m != 0 {
            return Err(DecomposeError::ShapeMismatch(format!(
                "first component degree {dp} is not a multiple of {m}"
            )));
        }
        let l = dp / m;
        let mut allowed = vec![0, 1];
        allowed.extend((1..=l).map(|j| j * m));
        check_powers(f.p(), &allowed, "first")?;
    }
    run_route(f, DecompositionRoute::DeltaLMM, move |p, q, strip| {
        eliminate_lmm(p, q, strip, m)
    })
}

/// Tries the four shapes in order and returns the first success;
/// otherwise reports which hypothesis failed for each.
///
/// Degenerate y-linear maps of type `(0, 1)` or `(1, 0)` route through
/// the `(m, 1)` eliminator rather than the strictly `(1, 1)` route.
pub fn decompose_dispatch(f: &PlanarMap) -> Result<DecompositionReport, DecomposeError> {
    let mut diagnosis = Vec::new();
    let strict_type11 = |f: &PlanarMap| {
        if f.map_type() != (1, 1) {
            let (m, n) = f.map_type();
            return Err(DecomposeError::ShapeMismatch(format!(
                "type ({m}, {n}) is not (1, 1)"
            )));
        }
        decompose_type11(f)
    };
    let routes: [(
        DecompositionRoute,
        &dyn Fn(&PlanarMap) -> Result<DecompositionReport, DecomposeError>,
    ); 4] = [
        (DecompositionRoute::Type11, &strict_type11),
        (DecompositionRoute::DeltaM1, &decompose_delta_m1),
        (DecompositionRoute::DeltaMM, &decompose_delta_mm),
        (DecompositionRoute::DeltaLMM, &decompose_delta_lmm),
    ];
    for (route, attempt) in routes {
        match attempt(f) {
            Ok(report) => return Ok(report),
            Err(e) => diagnosis.push((route, e.to_string())),
        }
    }
    Err(DecomposeError::NotDecomposable { diagnosis })
}

// ---------------------------------------------------------------------
// Shared machinery
// ---------------------------------------------------------------------

fn check_powers(
    component: &BiPoly,
    allowed: &[usize],
    which: &str,
) -> Result<(), DecomposeError> {
    for (j, c) in component.y_coeffs().iter().enumerate() {
        if !c.is_zero() && !allowed.contains(&j) {
            return Err(DecomposeError::ShapeMismatch(format!(
                "{which} component has a y^{j} term outside the admissible powers"
            )));
        }
    }
    Ok(())
}

/// Common route wrapper: delta and non-singularity gates, elimination,
/// chain validation, and exact recomposition verification.
///
/// Constant offsets need no special handling: the elimination shears
/// absorb them into the block constants, so maps are decomposed as
/// given and the chain recomposes to the input bit for bit.
fn run_route(
    f: &PlanarMap,
    route: DecompositionRoute,
    eliminate: impl Fn(&BiPoly, &BiPoly, &Interval) -> Result<Vec<AtomicMap>, DecomposeError>,
) -> Result<DecompositionReport, DecomposeError> {
    let classification = classify(f);
    if !classification.is_delta_map {
        return Err(DecomposeError::NotDeltaMap);
    }
    match &classification.non_singularity {
        NonSingularity::NonSingular(_) => {}
        NonSingularity::Singular(w) => {
            return Err(DecomposeError::SingularInput(w.to_string()))
        }
        NonSingularity::Unknown => {
            return Err(DecomposeError::Internal(
                "delta-map with undecided non-singularity".to_string(),
            ))
        }
    }
    let factors = eliminate(f.p(), f.q(), f.strip())?;
    let chain = Chain::new(factors, f.strip().clone())?;
    if &chain.compose() != f {
        return Err(DecomposeError::Internal(
            "recomposition does not match the input".to_string(),
        ));
    }
    let all_triangular = chain.factors().iter().all(AtomicMap::is_triangular);
    let len = chain.len();
    Ok(DecompositionReport {
        route,
        triangular_count: len - 1,
        quasi_triangular_count: 1,
        all_factors_triangular: all_triangular,
        verified: true,
        chain,
    })
}

/// Elimination for maps of type `(m, <=1)`, outermost factors first.
///
/// Stage `k` removes the `y^k` term of the first component with the
/// shear `(u - c_k v^k, v)`, where `p_k = c_k q_1^k` is required to hold
/// exactly; the terminal factor is quasi-triangular.
fn eliminate_m1(
    p: &BiPoly,
    q: &BiPoly,
    strip: &Interval,
) -> Result<Vec<AtomicMap>, DecomposeError> {
    let m = p.y_degree().unwrap_or(0);
    let n = q.y_degree().unwrap_or(0);
    debug_assert!(n <= 1);
    if n == 0 {
        // Second component is y-free; only a y-linear first component
        // can pair with it in a non-singular delta-map.
        let q0 = q
            .as_unipoly_in_x()
            .expect("y-degree 0 component is univariate");
        return match m {
            0 => Err(DecomposeError::SingularInput(
                "both components are y-free".to_string(),
            )),
            1 => Ok(vec![AtomicMap::SwappedScaledQuasiTriangularX {
                w: p.coeff_y(1),
                beta: p.coeff_y(0),
                alpha: q0,
            }]),
            _ => Err(DecomposeError::ShapeMismatch(format!(
                "second component is y-free while the first has y-degree {m}"
            ))),
        };
    }
    let q1 = q.coeff_y(1);
    let q0 = q.coeff_y(0);
    if m == 0 {
        let alpha = p
            .as_unipoly_in_x()
            .expect("y-degree 0 component is univariate");
        return Ok(vec![AtomicMap::quasi_x(alpha, q1, q0)]);
    }
    let pm = p.coeff_y(m);
    let prop = proportionality_power(&pm, &q1, m as u32);
    let c = prop.constant.ok_or_else(|| DecomposeError::Proportionality {
        stage: m,
        detail: format!(
            "p_{m} = {} is not a constant multiple of q_1^{m} (q_1 = {})",
            pm.display('x'),
            q1.display('x')
        ),
    })?;
    let reduced = p - &q.pow(m as u32).scale(&c);
    debug_assert!(reduced.y_degree().unwrap_or(0) < m);
    let mut factors = vec![AtomicMap::ShearX {
        c: -&c,
        power: m as u32,
    }];
    factors.extend(eliminate_m1(&reduced, q, strip)?);
    Ok(factors)
}

/// Elimination for maps of type `(<=1, n)`: works on the
/// component-swapped map and mirrors the resulting chain back.
///
/// With `S` the component swap, a chain `S∘F = C_k ∘ ... ∘ C_1` yields
/// `F = (S C_k S) ∘ ... ∘ (S C_2 S) ∘ (S C_1)`: every elimination factor
/// is mirrored and the terminal factor absorbs the leftover swap.
fn eliminate_1m(
    p: &BiPoly,
    q: &BiPoly,
    strip: &Interval,
) -> Result<Vec<AtomicMap>, DecomposeError> {
    let inner = eliminate_m1(q, p, strip)?;
    let last = inner.len() - 1;
    inner
        .into_iter()
        .enumerate()
        .map(|(i, factor)| {
            if i == last {
                swap_terminal(factor)
            } else {
                mirror_factor(factor)
            }
        })
        .collect()
}

/// Conjugation by the component swap, `S ∘ C ∘ S`.
fn mirror_factor(factor: AtomicMap) -> Result<AtomicMap, DecomposeError> {
    Ok(match factor {
        AtomicMap::ShearX { c, power } => AtomicMap::ShearY { c, power },
        AtomicMap::ShearY { c, power } => AtomicMap::ShearX { c, power },
        AtomicMap::TriangularX { a, b, beta } => AtomicMap::TriangularY {
            a: b,
            b: a,
            alpha: beta,
        },
        AtomicMap::TriangularY { a, b, alpha } => AtomicMap::TriangularX {
            a: b,
            b: a,
            beta: alpha,
        },
        other => {
            return Err(DecomposeError::Internal(format!(
                "quasi-triangular factor {other} in a non-terminal position"
            )))
        }
    })
}

/// Left composition with the component swap, `S ∘ C`, for the terminal
/// factor of a mirrored chain.
fn swap_terminal(factor: AtomicMap) -> Result<AtomicMap, DecomposeError> {
    Ok(match factor {
        AtomicMap::QuasiTriangularX { alpha, b, beta } => {
            AtomicMap::SwappedScaledQuasiTriangularX {
                w: UniPoly::constant(b),
                beta,
                alpha,
            }
        }
        AtomicMap::ScaledQuasiTriangularX { alpha, w, beta } => {
            AtomicMap::SwappedScaledQuasiTriangularX { w, beta, alpha }
        }
        AtomicMap::TriangularX { a, b, beta } => AtomicMap::SwappedScaledQuasiTriangularX {
            w: UniPoly::constant(b),
            beta,
            alpha: UniPoly::monomial(a, 1),
        },
        AtomicMap::SwappedScaledQuasiTriangularX { w, beta, alpha } => {
            AtomicMap::quasi_x(alpha, w, beta)
        }
        other => {
            return Err(DecomposeError::Internal(format!(
                "unexpected terminal factor {other}"
            )))
        }
    })
}

/// Shared core for the `{0, 1, m}` shape: one power-one shear pairs the
/// leading coefficients, then the reduced type `(<=1, m)` map recurses
/// through the swapped elimination.
fn core_mm(
    p: &BiPoly,
    q: &BiPoly,
    strip: &Interval,
) -> Result<Vec<AtomicMap>, DecomposeError> {
    let dp = p.y_degree().unwrap_or(0);
    let dq = q.y_degree().unwrap_or(0);
    let m = dp.max(dq);
    if m <= 1 {
        return eliminate_m1(p, q, strip);
    }
    let pm = p.coeff_y(m);
    let qm = q.coeff_y(m);
    if qm.is_zero() {
        return eliminate_m1(p, q, strip);
    }
    if pm.is_zero() {
        return eliminate_1m(p, q, strip);
    }
    let prop = proportionality(&pm, &qm, 1, 1);
    let c = prop.constant.ok_or_else(|| DecomposeError::Proportionality {
        stage: m,
        detail: format!(
            "leading coefficients {} and {} are not proportional",
            pm.display('x'),
            qm.display('x')
        ),
    })?;
    let reduced = p - &q.scale(&c);
    debug_assert!(reduced.y_degree().unwrap_or(0) <= 1);
    let mut factors = vec![AtomicMap::ShearX { c: -&c, power: 1 }];
    factors.extend(eliminate_1m(&reduced, q, strip)?);
    Ok(factors)
}

/// Induction on `L` for the `(Lm, m)` shape: strip the top block
/// `p_{Lm} = c q_m^L` with the shear `(u - c v^L, v)` and recurse; the
/// base case is the `{0, 1, m}` core.
fn eliminate_lmm(
    p: &BiPoly,
    q: &BiPoly,
    strip: &Interval,
    m: usize,
) -> Result<Vec<AtomicMap>, DecomposeError> {
    let dp = p.y_degree().unwrap_or(0);
    if dp <= m {
        return core_mm(p, q, strip);
    }
    debug_assert!(dp % m == 0);
    let l = (dp / m) as u32;
    let p_top = p.coeff_y(dp);
    let qm = q.coeff_y(m);
    let prop = proportionality_power(&p_top, &qm, l);
    let c = prop.constant.ok_or_else(|| DecomposeError::Proportionality {
        stage: l as usize,
        detail: format!(
            "p_{dp} = {} is not a constant multiple of q_{m}^{l}",
            p_top.display('x')
        ),
    })?;
    let reduced = p - &q.pow(l).scale(&c);
    debug_assert!(reduced.y_degree().unwrap_or(0) < dp);
    let mut factors = vec![AtomicMap::ShearX { c: -&c, power: l }];
    factors.extend(eliminate_lmm(&reduced, q, strip, m)?);
    Ok(factors)
}

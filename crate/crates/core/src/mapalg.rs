//! Planar-map data model: types `(m, n)`, Jacobian determinants,
//! delta-map and Jacobian-map classification on strips, and the
//! leading-pair determinants used by the injectivity criteria.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::bipoly::BiPoly;
use crate::interval::Interval;
use crate::rational::{rat_int, Rat};
use crate::realroots::{self, IsolatingInterval};
use crate::unipoly::UniPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("point x = {0} lies outside the strip {1}")]
    OutsideStrip(Rat, Interval),
    #[error("no leading pair: both components are free of y")]
    NoLeadingPair,
}

/// A planar map `F = (P, Q)` on the strip `I x R`, with `P` and `Q`
/// polynomial in `y` over rational-coefficient polynomials in `x`.
#[derive(Clone, PartialEq, Eq)]
pub struct PlanarMap {
    p: BiPoly,
    q: BiPoly,
    strip: Interval,
}

impl PlanarMap {
    pub fn new(p: BiPoly, q: BiPoly, strip: Interval) -> Self {
        PlanarMap { p, q, strip }
    }

    /// Both components on the whole plane.
    pub fn on_plane(p: BiPoly, q: BiPoly) -> Self {
        PlanarMap::new(p, q, Interval::all())
    }

    pub fn p(&self) -> &BiPoly {
        &self.p
    }

    pub fn q(&self) -> &BiPoly {
        &self.q
    }

    pub fn strip(&self) -> &Interval {
        &self.strip
    }

    /// The pair `(m, n)` of `y`-degrees; `y`-free components report 0.
    pub fn map_type(&self) -> (usize, usize) {
        (
            self.p.y_degree().unwrap_or(0),
            self.q.y_degree().unwrap_or(0),
        )
    }

    /// `P_x Q_y - P_y Q_x`, fully expanded.
    pub fn jacobian_det(&self) -> BiPoly {
        &(&self.p.derivative_x() * &self.q.derivative_y())
            - &(&self.p.derivative_y() * &self.q.derivative_x())
    }

    /// Exact image of a point whose `x` lies in the strip.
    pub fn eval(&self, x: &Rat, y: &Rat) -> Result<(Rat, Rat), MapError> {
        if !self.strip.contains(x) {
            return Err(MapError::OutsideStrip(x.clone(), self.strip.clone()));
        }
        Ok(self.eval_unchecked(x, y))
    }

    pub fn eval_unchecked(&self, x: &Rat, y: &Rat) -> (Rat, Rat) {
        (self.p.eval(x, y), self.q.eval(x, y))
    }

    /// Subtracts a constant vector from the map's values.
    pub fn translated(&self, by: &(Rat, Rat)) -> PlanarMap {
        PlanarMap::new(
            &self.p - &BiPoly::constant(by.0.clone()),
            &self.q - &BiPoly::constant(by.1.clone()),
            self.strip.clone(),
        )
    }

    /// Same components, different strip.
    pub fn with_strip(&self, strip: Interval) -> PlanarMap {
        PlanarMap::new(self.p.clone(), self.q.clone(), strip)
    }
}

impl fmt::Display for PlanarMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} ; {})", self.p.display(), self.q.display())?;
        if !self.strip.is_all() {
            write!(f, " on {}", self.strip)?;
        }
        Ok(())
    }
}

impl fmt::Debug for PlanarMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlanarMap{self}")
    }
}

/// Where a coordinate of a singular witness lives: an exact rational,
/// or a certified isolating box for an algebraic value.
#[derive(Debug, Clone)]
pub enum RootLocation {
    Exact(Rat),
    Boxed(IsolatingInterval),
}

impl fmt::Display for RootLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootLocation::Exact(r) => write!(f, "{r}"),
            RootLocation::Boxed(b) => write!(f, "({}, {})", b.lower, b.upper),
        }
    }
}

/// A certified point (exact or boxed per coordinate) where the
/// Jacobian determinant vanishes.
#[derive(Debug, Clone)]
pub struct SingularWitness {
    pub x: RootLocation,
    pub y: RootLocation,
}

impl fmt::Display for SingularWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x = {}, y = {}", self.x, self.y)
    }
}

/// Non-singularity status on the declared strip.
#[derive(Debug, Clone)]
pub enum NonSingularity {
    /// The determinant provably never vanishes on the strip.
    NonSingular(NonSingularCert),
    /// A certified zero of the determinant inside the strip.
    Singular(SingularWitness),
    /// Neither decided; the determinant genuinely depends on `y` with
    /// even degree, which this engine does not decide.
    Unknown,
}

impl NonSingularity {
    pub fn is_non_singular(&self) -> bool {
        matches!(self, NonSingularity::NonSingular(_))
    }

    pub fn is_singular(&self) -> bool {
        matches!(self, NonSingularity::Singular(_))
    }
}

/// Evidence for non-singularity: the determinant is a function of `x`
/// alone and has no root in the strip.
#[derive(Debug, Clone)]
pub struct NonSingularCert {
    pub delta: UniPoly,
}

/// Everything `classify` decides about a map.
#[derive(Debug, Clone)]
pub struct Classification {
    pub map_type: (usize, usize),
    pub d_f: BiPoly,
    pub is_delta_map: bool,
    /// Present exactly when the determinant is `y`-free.
    pub delta: Option<UniPoly>,
    pub is_jacobian_map: bool,
    pub non_singularity: NonSingularity,
}

/// Classifies a map: type, determinant, delta/Jacobian status, and
/// non-singularity on the strip.
///
/// Delta-maps are decided exactly through root counting. When the
/// determinant depends on `y` with odd degree, a singular point always
/// exists and a witness box is produced. The remaining case (genuine
/// even `y`-degree) is reported [`NonSingularity::Unknown`].
pub fn classify(f: &PlanarMap) -> Classification {
    let d_f = f.jacobian_det();
    let map_type = f.map_type();
    match d_f.as_unipoly_in_x() {
        Some(delta) => {
            let non_singularity = classify_delta(f, &delta);
            let is_jacobian_map =
                delta.as_constant().map_or(false, |c| !c.is_zero());
            Classification {
                map_type,
                d_f,
                is_delta_map: true,
                delta: Some(delta),
                is_jacobian_map,
                non_singularity,
            }
        }
        None => {
            let y_deg = d_f.y_degree().expect("y-dependent determinant");
            let non_singularity = if y_deg % 2 == 1 {
                odd_degree_witness(f, &d_f)
            } else {
                NonSingularity::Unknown
            };
            Classification {
                map_type,
                d_f,
                is_delta_map: false,
                delta: None,
                is_jacobian_map: false,
                non_singularity,
            }
        }
    }
}

fn classify_delta(f: &PlanarMap, delta: &UniPoly) -> NonSingularity {
    if delta.is_zero() {
        return NonSingularity::Singular(SingularWitness {
            x: RootLocation::Exact(f.strip().interior_point()),
            y: RootLocation::Exact(Rat::zero()),
        });
    }
    if realroots::is_nonvanishing(delta, f.strip()) {
        return NonSingularity::NonSingular(NonSingularCert {
            delta: delta.clone(),
        });
    }
    let isolation = realroots::isolate_roots(delta, f.strip())
        .expect("delta is nonzero");
    let first = isolation.intervals.first().expect("a root exists");
    let x = match first.exact_root() {
        Some(r) => RootLocation::Exact(r.clone()),
        None => RootLocation::Boxed(first.clone()),
    };
    NonSingularity::Singular(SingularWitness {
        x,
        y: RootLocation::Exact(Rat::zero()),
    })
}

/// For determinants of odd `y`-degree: fix a rational `x0` in the strip
/// where the leading `y`-coefficient survives; the resulting odd-degree
/// polynomial in `y` has a real root, which we isolate.
fn odd_degree_witness(f: &PlanarMap, d_f: &BiPoly) -> NonSingularity {
    let y_deg = d_f.y_degree().expect("y-dependent");
    let lead = d_f.coeff_y(y_deg);
    let candidates = f
        .strip()
        .interior_grid(lead.degree().unwrap_or(0) + 1);
    let x0 = candidates
        .into_iter()
        .find(|x| !lead.eval(x).is_zero())
        .expect("a nonvanishing point exists on any grid longer than deg");
    let in_y = d_f.eval_x(&x0);
    let isolation =
        realroots::isolate_roots(&in_y, &Interval::all()).expect("odd degree, nonzero");
    let first = isolation
        .intervals
        .first()
        .expect("odd-degree real polynomial has a real root");
    let y = match first.exact_root() {
        Some(r) => RootLocation::Exact(r.clone()),
        None => RootLocation::Boxed(first.clone()),
    };
    NonSingularity::Singular(SingularWitness {
        x: RootLocation::Exact(x0),
        y,
    })
}

/// The determinants `d_1m = p1*qm - q1*pm` and `d*_1m = p1'*qm - q1'*pm`
/// built from the degree-1 and leading coefficient pairs.
#[derive(Debug, Clone)]
pub struct LeadingPairData {
    pub m: usize,
    pub d1m: UniPoly,
    pub d1m_star: UniPoly,
}

pub fn leading_pair_data(f: &PlanarMap) -> Result<LeadingPairData, MapError> {
    let (dp, dq) = f.map_type();
    let m = dp.max(dq);
    if m == 0 {
        return Err(MapError::NoLeadingPair);
    }
    let p1 = f.p().coeff_y(1);
    let q1 = f.q().coeff_y(1);
    let pm = f.p().coeff_y(m);
    let qm = f.q().coeff_y(m);
    let d1m = &(&p1 * &qm) - &(&q1 * &pm);
    let d1m_star = &(&p1.derivative() * &qm) - &(&q1.derivative() * &pm);
    Ok(LeadingPairData { m, d1m, d1m_star })
}

/// Deterministic fixed-denominator grid over the strip cross section,
/// used for sampling-based verification.
pub fn strip_sample_points(strip: &Interval, n: usize) -> Vec<(Rat, Rat)> {
    let xs = strip.interior_grid(n);
    let mut out = Vec::with_capacity(n);
    for (k, x) in xs.into_iter().enumerate() {
        let y = rat_int(k as i64 % 7 - 3) + Rat::new(
            num_bigint::BigInt::from(k as i64 % 5),
            num_bigint::BigInt::from(8),
        );
        out.push((x, y));
    }
    out
}

//! Decidable real-root analysis for univariate rational polynomials on
//! open intervals: Sturm sequences, distinct-root counting, isolation
//! with multiplicities, and exact sign decisions at algebraic roots.
//!
//! Everything here is exact. Unbounded intervals are clamped with the
//! Cauchy root bound before counting; roots landing exactly on a finite
//! interval endpoint are excluded by dividing the corresponding linear
//! factor out, which leaves interior roots untouched.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::interval::Interval;
use crate::rational::{rat_int, Rat};
use crate::unipoly::UniPoly;

/// Cap on sign-refinement halvings before giving up loudly.
pub const REFINEMENT_CAP: u32 = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootError {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("sign refinement exceeded {0} halvings without a certificate")]
    RefinementExceeded(u32),
}

/// Sturm chain of a nonzero polynomial: `p`, `p'`, then negated
/// Euclidean remainders down to a constant.
#[derive(Debug, Clone)]
pub struct SturmSequence {
    chain: Vec<UniPoly>,
}

impl SturmSequence {
    pub fn new(p: &UniPoly) -> Result<Self, RootError> {
        if p.is_zero() {
            return Err(RootError::ZeroPolynomial);
        }
        let mut chain = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(d);
            loop {
                let n = chain.len();
                let r = chain[n - 2].div_rem(&chain[n - 1]).1;
                if r.is_zero() {
                    break;
                }
                chain.push(-&r);
            }
        }
        Ok(SturmSequence { chain })
    }

    pub fn chain(&self) -> &[UniPoly] {
        &self.chain
    }

    /// Sign variations of the chain at `x`, zeros skipped.
    pub fn variations_at(&self, x: &Rat) -> usize {
        let mut count = 0;
        let mut last: i8 = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Distinct roots of the first chain element in `(lo, hi]`.
    /// Requires the element to be nonzero at both endpoints.
    pub fn count_between(&self, lo: &Rat, hi: &Rat) -> usize {
        debug_assert!(self.chain[0].sign_at(lo) != 0);
        debug_assert!(self.chain[0].sign_at(hi) != 0);
        self.variations_at(lo) - self.variations_at(hi)
    }
}

/// `1 + max |c_i| / |lead|`: every real root lies strictly inside
/// `(-bound, bound)`.
pub fn cauchy_bound(p: &UniPoly) -> Rat {
    match p.degree() {
        None | Some(0) => Rat::one(),
        Some(n) => {
            let lead = p.leading().unwrap().abs();
            let mut max = Rat::zero();
            for i in 0..n {
                let a = p.coeff(i).abs();
                if a > max {
                    max = a;
                }
            }
            Rat::one() + max / lead
        }
    }
}

/// Divides out `(x - r)` factors until `r` is no longer a root.
fn strip_root(p: &UniPoly, r: &Rat) -> UniPoly {
    let linear = UniPoly::from_coeffs(vec![-r.clone(), Rat::one()]);
    let mut f = p.clone();
    while !f.is_zero() && f.eval(r).is_zero() {
        f = f.div_exact(&linear);
    }
    f
}

/// Removes roots sitting exactly on finite endpoints of `iv`.
fn strip_endpoint_roots(p: &UniPoly, iv: &Interval) -> UniPoly {
    let mut f = p.clone();
    if let Some(a) = iv.lower() {
        f = strip_root(&f, a);
    }
    if let Some(b) = iv.upper() {
        f = strip_root(&f, b);
    }
    f
}

/// Clamps `iv` to the Cauchy box of `p`. Returns `None` when the
/// clamped interval is empty (no roots possible).
fn clamp_to_root_box(p: &UniPoly, iv: &Interval) -> Option<(Rat, Rat)> {
    let m = cauchy_bound(p);
    let lo = match iv.lower() {
        Some(a) if *a > -&m => a.clone(),
        _ => -&m,
    };
    let hi = match iv.upper() {
        Some(b) if *b < m => b.clone(),
        _ => m,
    };
    (lo < hi).then_some((lo, hi))
}

/// Number of distinct real roots of `p` in the open interval.
pub fn count_roots(p: &UniPoly, iv: &Interval) -> Result<usize, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let f = strip_endpoint_roots(p, iv);
    if f.is_constant() {
        return Ok(0);
    }
    let Some((lo, hi)) = clamp_to_root_box(&f, iv) else {
        return Ok(0);
    };
    let sturm = SturmSequence::new(&f)?;
    Ok(sturm.count_between(&lo, &hi))
}

/// True iff `p` is nonzero and has no real root in `iv`.
pub fn is_nonvanishing(p: &UniPoly, iv: &Interval) -> bool {
    match count_roots(p, iv) {
        Ok(n) => n == 0,
        Err(_) => false,
    }
}

/// Square-free part `p / gcd(p, p')`, monic.
pub fn square_free_part(p: &UniPoly) -> UniPoly {
    if p.is_constant() {
        return p.monic();
    }
    let g = p.gcd(&p.derivative()).expect("nonzero by degree check");
    p.div_exact(&g).monic()
}

/// Square-free decomposition: monic pairwise-coprime factors with their
/// multiplicities, so `p = lead * prod f_i^{m_i}`.
pub fn square_free_decomposition(p: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let f = p.monic();
    let mut g = f.gcd(&f.derivative()).expect("nonzero");
    let mut c = f.div_exact(&g).monic();
    let mut i = 1usize;
    while !c.is_constant() {
        if g.is_constant() {
            out.push((c, i));
            break;
        }
        let d = c.gcd(&g).expect("nonzero");
        let a = c.div_exact(&d).monic();
        if !a.is_constant() {
            out.push((a, i));
        }
        g = g.div_exact(&d).monic();
        c = d;
        i += 1;
        // degrees strictly decrease; guard against cycles anyway
        debug_assert!(i <= p.degree().unwrap_or(0) + 1);
    }
    out
}

/// A rational interval containing exactly one distinct real root of the
/// target polynomial; endpoints are never roots.
#[derive(Debug, Clone)]
pub struct IsolatingInterval {
    pub lower: Rat,
    pub upper: Rat,
    pub multiplicity: usize,
    exact: Option<Rat>,
}

impl IsolatingInterval {
    /// The root itself, when it was pinned to an exact rational.
    pub fn exact_root(&self) -> Option<&Rat> {
        self.exact.as_ref()
    }

    pub fn width(&self) -> Rat {
        &self.upper - &self.lower
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lower + &self.upper) / rat_int(2)
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.lower < *x && *x < self.upper
    }
}

/// Result of root isolation: ordered disjoint intervals plus the
/// square-free polynomial against which sign-bisection refinement is
/// valid (it changes sign strictly across every non-exact interval).
#[derive(Debug, Clone)]
pub struct RootIsolation {
    pub intervals: Vec<IsolatingInterval>,
    refinement_poly: UniPoly,
}

impl RootIsolation {
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn refinement_poly(&self) -> &UniPoly {
        &self.refinement_poly
    }

    /// Halves the interval around its root until it is narrower than
    /// `target_width` (or the root is pinned exactly).
    pub fn refined(&self, iso: &IsolatingInterval, target_width: &Rat) -> IsolatingInterval {
        let mut cur = iso.clone();
        while cur.width() > *target_width {
            if !self.halve(&mut cur) {
                break;
            }
        }
        cur
    }

    /// One bisection step; returns false when no further narrowing is
    /// meaningful (degenerate width).
    pub fn halve(&self, cur: &mut IsolatingInterval) -> bool {
        if let Some(r) = cur.exact.clone() {
            let quarter = cur.width() / rat_int(4);
            if quarter.is_zero() {
                return false;
            }
            let lo = (&r - &quarter).max(cur.lower.clone());
            let hi = (&r + &quarter).min(cur.upper.clone());
            cur.lower = lo;
            cur.upper = hi;
            return true;
        }
        let mid = cur.midpoint();
        let s_mid = self.refinement_poly.sign_at(&mid);
        if s_mid == 0 {
            cur.exact = Some(mid);
            return true;
        }
        if self.refinement_poly.sign_at(&cur.lower) != s_mid {
            cur.upper = mid;
        } else {
            cur.lower = mid;
        }
        true
    }
}

/// Isolates the distinct real roots of `p` in the open interval,
/// with multiplicities from the square-free decomposition.
pub fn isolate_roots(p: &UniPoly, iv: &Interval) -> Result<RootIsolation, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let f = strip_endpoint_roots(&square_free_part(p), iv);
    if f.is_constant() {
        return Ok(RootIsolation {
            intervals: Vec::new(),
            refinement_poly: f,
        });
    }
    let Some((lo, hi)) = clamp_to_root_box(&f, iv) else {
        return Ok(RootIsolation {
            intervals: Vec::new(),
            refinement_poly: f,
        });
    };
    let sturm = SturmSequence::new(&f)?;
    let mut raw = Vec::new();
    isolate_rec(&f, &sturm, lo, hi, &mut raw);

    let decomp = square_free_decomposition(p);
    let mut intervals = Vec::with_capacity(raw.len());
    for (lower, upper, exact) in raw {
        let probe = Interval::bounded(lower.clone(), upper.clone())
            .expect("isolating interval is nonempty");
        let multiplicity = decomp
            .iter()
            .find_map(|(factor, m)| {
                let hit = match &exact {
                    Some(r) => factor.eval(r).is_zero(),
                    None => count_roots(factor, &probe).unwrap_or(0) == 1,
                };
                hit.then_some(*m)
            })
            .expect("every isolated root belongs to a square-free factor");
        intervals.push(IsolatingInterval {
            lower,
            upper,
            multiplicity,
            exact,
        });
    }
    Ok(RootIsolation {
        intervals,
        refinement_poly: f,
    })
}

/// Bisection on Sturm counts. `f` is square-free and nonzero at both
/// endpoints; results are appended in increasing order.
fn isolate_rec(
    f: &UniPoly,
    sturm: &SturmSequence,
    lo: Rat,
    hi: Rat,
    out: &mut Vec<(Rat, Rat, Option<Rat>)>,
) {
    let n = sturm.count_between(&lo, &hi);
    if n == 0 {
        return;
    }
    if n == 1 {
        out.push((lo, hi, None));
        return;
    }
    let mid = (&lo + &hi) / rat_int(2);
    if f.sign_at(&mid) == 0 {
        // The midpoint is itself a root: pull it out and shrink a box
        // around it that excludes every remaining root.
        let linear = UniPoly::from_coeffs(vec![-mid.clone(), Rat::one()]);
        let g = f.div_exact(&linear);
        let g_sturm = SturmSequence::new(&g).expect("nonzero quotient");
        let mut d = (&hi - &lo) / rat_int(4);
        let (a, b) = loop {
            let a = &mid - &d;
            let b = &mid + &d;
            if g.sign_at(&a) != 0 && g.sign_at(&b) != 0 && g_sturm.count_between(&a, &b) == 0 {
                break (a, b);
            }
            d = d / rat_int(2);
        };
        isolate_rec(&g, &g_sturm, lo, a.clone(), out);
        out.push((a, b.clone(), Some(mid)));
        isolate_rec(&g, &g_sturm, b, hi, out);
    } else {
        isolate_rec(f, sturm, lo, mid.clone(), out);
        isolate_rec(f, sturm, mid, hi, out);
    }
}

/// True iff some root of `p` in `iv` has multiplicity exactly one.
pub fn has_simple_zero(p: &UniPoly, iv: &Interval) -> Result<bool, RootError> {
    let isolation = isolate_roots(p, iv)?;
    Ok(isolation.intervals.iter().any(|i| i.multiplicity == 1))
}

/// Exact sign of a target value at an isolated algebraic root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignVerdict {
    Negative,
    Zero,
    Positive,
}

impl SignVerdict {
    pub fn is_nonpositive(self) -> bool {
        !matches!(self, SignVerdict::Positive)
    }

    pub fn is_nonzero(self) -> bool {
        !matches!(self, SignVerdict::Zero)
    }
}

impl std::fmt::Display for SignVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SignVerdict::Negative => "negative",
            SignVerdict::Zero => "zero",
            SignVerdict::Positive => "positive",
        })
    }
}

/// For each root of `roots_of` in `iv`, decides the exact sign of
/// `target` there. Shared roots are certified through the gcd; other
/// signs by refining the isolating interval until `target` keeps a
/// constant sign on it, capped at [`REFINEMENT_CAP`] halvings.
pub fn sign_at_roots(
    target: &UniPoly,
    roots_of: &UniPoly,
    iv: &Interval,
) -> Result<Vec<(IsolatingInterval, SignVerdict)>, RootError> {
    if roots_of.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let isolation = isolate_roots(roots_of, iv)?;
    if target.is_zero() {
        return Ok(isolation
            .intervals
            .iter()
            .map(|i| (i.clone(), SignVerdict::Zero))
            .collect());
    }
    let shared = target.gcd(roots_of).expect("both nonzero");
    let mut out = Vec::with_capacity(isolation.intervals.len());
    for iso in &isolation.intervals {
        let verdict = sign_at_one_root(target, &shared, &isolation, iso)?;
        out.push((iso.clone(), verdict));
    }
    Ok(out)
}

fn sign_at_one_root(
    target: &UniPoly,
    shared: &UniPoly,
    isolation: &RootIsolation,
    iso: &IsolatingInterval,
) -> Result<SignVerdict, RootError> {
    if let Some(r) = iso.exact_root() {
        return Ok(match target.sign_at(r) {
            0 => SignVerdict::Zero,
            s if s > 0 => SignVerdict::Positive,
            _ => SignVerdict::Negative,
        });
    }
    let probe = Interval::bounded(iso.lower.clone(), iso.upper.clone()).expect("nonempty");
    if !shared.is_constant() && count_roots(shared, &probe)? == 1 {
        return Ok(SignVerdict::Zero);
    }
    let mut cur = iso.clone();
    for _ in 0..REFINEMENT_CAP {
        if let Some(r) = cur.exact_root() {
            return Ok(match target.sign_at(r) {
                0 => SignVerdict::Zero,
                s if s > 0 => SignVerdict::Positive,
                _ => SignVerdict::Negative,
            });
        }
        let window = Interval::bounded(cur.lower.clone(), cur.upper.clone()).expect("nonempty");
        if count_roots(target, &window)? == 0 {
            let mid = cur.midpoint();
            return Ok(if target.sign_at(&mid) > 0 {
                SignVerdict::Positive
            } else {
                SignVerdict::Negative
            });
        }
        isolation.halve(&mut cur);
    }
    Err(RootError::RefinementExceeded(REFINEMENT_CAP))
}

/// Strict monotonicity of `p` on `iv`: the derivative keeps one sign,
/// vanishing at most on isolated points (even-multiplicity roots).
pub fn is_strictly_monotone(p: &UniPoly, iv: &Interval) -> bool {
    if p.degree().map_or(true, |d| d == 0) {
        return false;
    }
    let d = p.derivative();
    match isolate_roots(&d, iv) {
        Ok(isolation) => isolation
            .intervals
            .iter()
            .all(|i| i.multiplicity % 2 == 0),
        Err(_) => false,
    }
}

/// Whether `p` attains a strictly positive value somewhere in `iv`.
pub fn takes_positive_value(p: &UniPoly, iv: &Interval) -> bool {
    sign_samples(p, iv)
        .iter()
        .any(|s| p.sign_at(s) > 0)
}

/// Whether `p(x) <= 0` for every `x` in `iv`.
pub fn nonpositive_on(p: &UniPoly, iv: &Interval) -> bool {
    !takes_positive_value(p, iv)
}

/// One sample per maximal root-free region of `iv`; `p` has constant
/// sign on each region, so these decide range questions exactly.
fn sign_samples(p: &UniPoly, iv: &Interval) -> Vec<Rat> {
    if p.is_zero() {
        return Vec::new();
    }
    let isolation = match isolate_roots(p, iv) {
        Ok(i) => i,
        Err(_) => return Vec::new(),
    };
    if isolation.intervals.is_empty() {
        return vec![iv.interior_point()];
    }
    // Shrink intervals whose endpoints touch the interval boundary so
    // outside samples stay interior.
    let narrowed: Vec<IsolatingInterval> = isolation
        .intervals
        .iter()
        .map(|iso| {
            let mut cur = iso.clone();
            for _ in 0..REFINEMENT_CAP {
                let lower_clear = iv.lower().map_or(true, |a| *a < cur.lower);
                let upper_clear = iv.upper().map_or(true, |b| cur.upper < *b);
                if lower_clear && upper_clear {
                    break;
                }
                isolation.halve(&mut cur);
                if let Some(r) = cur.exact.clone() {
                    let pad = iso.width() / rat_int(1 << 20);
                    cur.lower = (&r - &pad).max(iso.lower.clone());
                    cur.upper = (&r + &pad).min(iso.upper.clone());
                }
            }
            cur
        })
        .collect();
    let mut samples = Vec::with_capacity(narrowed.len() + 1);
    match iv.lower() {
        Some(a) if *a < narrowed[0].lower => {
            samples.push((a + &narrowed[0].lower) / rat_int(2));
        }
        Some(_) => {}
        None => samples.push(&narrowed[0].lower - rat_int(1)),
    }
    for pair in narrowed.windows(2) {
        samples.push((&pair[0].upper + &pair[1].lower) / rat_int(2));
    }
    let last = narrowed.last().unwrap();
    match iv.upper() {
        Some(b) if last.upper < *b => samples.push((&last.upper + b) / rat_int(2)),
        Some(_) => {}
        None => samples.push(&last.upper + rat_int(1)),
    }
    samples.retain(|s| iv.contains(s));
    samples
}

/// All rational roots of `p`, ascending. Complete whenever the leading
/// and constant integer parts factor within the trial-division cap;
/// callers use this as a witness finder, not a completeness oracle.
pub fn rational_roots(p: &UniPoly) -> Vec<Rat> {
    let mut roots = Vec::new();
    if p.is_zero() || p.is_constant() {
        return roots;
    }
    let mut f = p.clone();
    if f.coeff(0).is_zero() {
        roots.push(Rat::zero());
        f = strip_root(&f, &Rat::zero());
    }
    if f.is_constant() {
        roots.sort();
        return roots;
    }
    // Clear denominators to an integer polynomial.
    let mut denom_lcm = BigInt::one();
    for c in f.coeffs() {
        denom_lcm = num_integer::lcm(denom_lcm, c.denom().clone());
    }
    let int_coeffs: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&denom_lcm / c.denom()))
        .collect();
    let a0 = int_coeffs.first().unwrap().abs();
    let an = int_coeffs.last().unwrap().abs();
    if let (Some(nums), Some(dens)) = (divisors_capped(&a0), divisors_capped(&an)) {
        for n in &nums {
            for d in &dens {
                for sign in [1i64, -1] {
                    let cand = Rat::new(BigInt::from(sign) * n, d.clone());
                    if f.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Divisors of `n` by trial division, or `None` when `n` is too large
/// to factor cheaply.
fn divisors_capped(n: &BigInt) -> Option<Vec<BigInt>> {
    let n_u: u128 = n.abs().try_into().ok()?;
    if n_u == 0 || n_u > 1 << 40 {
        return None;
    }
    let mut divisors = Vec::new();
    let mut d = 1u128;
    while d * d <= n_u {
        if n_u % d == 0 {
            divisors.push(BigInt::from(d));
            if d != n_u / d {
                divisors.push(BigInt::from(n_u / d));
            }
        }
        d += 1;
        if divisors.len() > 4096 {
            return None;
        }
    }
    Some(divisors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::unipoly::UniPoly;

    fn p(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_i64(coeffs)
    }

    fn all() -> Interval {
        Interval::all()
    }

    #[test]
    fn sturm_chain_of_irreducible_quadratic() {
        // x^2 + 1 -> (x^2 + 1, 2x, -1), no real roots
        let s = SturmSequence::new(&p(&[1, 0, 1])).unwrap();
        assert_eq!(s.chain().len(), 3);
        assert_eq!(s.chain()[1], p(&[0, 2]));
        assert_eq!(s.chain()[2], p(&[-1]));
        assert_eq!(count_roots(&p(&[1, 0, 1]), &all()).unwrap(), 0);
    }

    #[test]
    fn sqrt2_localized_by_sign() {
        let f = p(&[-2, 0, 1]);
        let iv_pos = Interval::bounded(rat_int(0), rat_int(2)).unwrap();
        let iv_neg = Interval::bounded(rat_int(-2), rat_int(0)).unwrap();
        assert_eq!(count_roots(&f, &iv_pos).unwrap(), 1);
        assert_eq!(count_roots(&f, &iv_neg).unwrap(), 1);
    }

    #[test]
    fn cubic_roots_counted() {
        let f = p(&[0, -1, 0, 1]); // x^3 - x, roots -1, 0, 1
        let iv = Interval::bounded(rat_int(-2), rat_int(2)).unwrap();
        assert_eq!(count_roots(&f, &iv).unwrap(), 3);
        assert_eq!(count_roots(&f, &all()).unwrap(), 3);
    }

    #[test]
    fn half_line_count_excludes_origin_root() {
        // 2x^3 has no root in (0, inf)
        let f = p(&[0, 0, 0, 2]);
        assert_eq!(count_roots(&f, &Interval::above(rat_int(0))).unwrap(), 0);
        assert_eq!(count_roots(&f, &all()).unwrap(), 1);
    }

    #[test]
    fn endpoint_roots_are_excluded() {
        let f = p(&[0, -1, 0, 1]); // roots -1, 0, 1
        let iv = Interval::bounded(rat_int(-1), rat_int(1)).unwrap();
        assert_eq!(count_roots(&f, &iv).unwrap(), 1);
    }

    #[test]
    fn nonvanishing_checks() {
        assert!(is_nonvanishing(&p(&[1, 0, 1]), &all()));
        assert!(is_nonvanishing(&p(&[0, 1]), &Interval::above(rat_int(0))));
        assert!(!is_nonvanishing(&p(&[0, 1]), &all()));
        assert!(!is_nonvanishing(&UniPoly::zero(), &all()));
    }

    #[test]
    fn isolation_examples() {
        // x^2 - 2 on (0, inf): one interval holding sqrt(2), multiplicity 1
        let iso = isolate_roots(&p(&[-2, 0, 1]), &Interval::above(rat_int(0))).unwrap();
        assert_eq!(iso.intervals.len(), 1);
        let only = &iso.intervals[0];
        assert_eq!(only.multiplicity, 1);
        assert!(only.lower < rat(3, 2) && rat(7, 5) < only.upper);

        // x^2 on R: one interval around 0, multiplicity 2
        let iso = isolate_roots(&p(&[0, 0, 1]), &all()).unwrap();
        assert_eq!(iso.intervals.len(), 1);
        assert_eq!(iso.intervals[0].multiplicity, 2);
        assert!(iso.intervals[0].contains(&Rat::zero()) || iso.intervals[0].exact_root().is_some());

        // x^2 + 1 on R: nothing
        let iso = isolate_roots(&p(&[1, 0, 1]), &all()).unwrap();
        assert!(iso.is_empty());
    }

    #[test]
    fn isolation_separates_close_roots() {
        // (x - 1)(x - 201/200)(x + 3)
        let f = &(&p(&[-1, 1]) * &UniPoly::from_coeffs(vec![rat(-201, 200), rat_int(1)]))
            * &p(&[3, 1]);
        let iso = isolate_roots(&f, &all()).unwrap();
        assert_eq!(iso.intervals.len(), 3);
        for w in iso.intervals.windows(2) {
            assert!(w[0].upper <= w[1].lower);
        }
    }

    #[test]
    fn multiplicity_assignment() {
        // x^2 (x-1)^3
        let f = &p(&[0, 0, 1]) * &p(&[-1, 1]).pow(3);
        let iso = isolate_roots(&f, &all()).unwrap();
        let mults: Vec<usize> = iso.intervals.iter().map(|i| i.multiplicity).collect();
        assert_eq!(mults, vec![2, 3]);
    }

    #[test]
    fn refinement_narrows() {
        let f = p(&[-2, 0, 1]);
        let iso = isolate_roots(&f, &all()).unwrap();
        let tight = iso.refined(&iso.intervals[1], &rat(1, 1 << 20));
        assert!(tight.width() <= rat(1, 1 << 20) || tight.exact_root().is_some());
        // sqrt(2) = 1.41421356...
        assert!(tight.lower < rat(14143, 10000));
        assert!(tight.upper > rat(14142, 10000));
    }

    #[test]
    fn simple_zero_detection() {
        assert!(has_simple_zero(&p(&[0, 1]), &all()).unwrap());
        assert!(!has_simple_zero(&p(&[0, 0, 1]), &all()).unwrap());
        assert!(!has_simple_zero(&p(&[0, 0, 0, 1]), &all()).unwrap());
        assert_eq!(
            has_simple_zero(&UniPoly::zero(), &all()),
            Err(RootError::ZeroPolynomial)
        );
    }

    #[test]
    fn sign_at_roots_examples() {
        // target x-3 at sqrt(2): negative
        let verdicts =
            sign_at_roots(&p(&[-3, 1]), &p(&[-2, 0, 1]), &Interval::above(rat_int(0))).unwrap();
        assert_eq!(verdicts.len(), 1);
        assert_eq!(verdicts[0].1, SignVerdict::Negative);

        // shared root through the gcd
        let verdicts = sign_at_roots(&p(&[0, 1]), &p(&[0, 1]), &all()).unwrap();
        assert_eq!(verdicts[0].1, SignVerdict::Zero);

        // x^2 + 1 at each root of x^3 - x: positive
        let verdicts = sign_at_roots(&p(&[1, 0, 1]), &p(&[0, -1, 0, 1]), &all()).unwrap();
        assert_eq!(verdicts.len(), 3);
        assert!(verdicts.iter().all(|(_, v)| *v == SignVerdict::Positive));
    }

    #[test]
    fn sign_at_irrational_shared_root() {
        // target and roots_of share sqrt(2) but not -sqrt(2)'s cofactor
        let common = p(&[-2, 0, 1]);
        let target = &common * &p(&[5, 1]);
        let roots_of = &common * &p(&[-7, 1]);
        let verdicts = sign_at_roots(&target, &roots_of, &all()).unwrap();
        // roots: -sqrt2, sqrt2, 7
        assert_eq!(verdicts.len(), 3);
        assert_eq!(verdicts[0].1, SignVerdict::Zero);
        assert_eq!(verdicts[1].1, SignVerdict::Zero);
        assert_eq!(verdicts[2].1, SignVerdict::Positive);
    }

    #[test]
    fn monotonicity_checks() {
        assert!(is_strictly_monotone(&p(&[0, 0, 0, 1]), &all())); // x^3
        assert!(is_strictly_monotone(&p(&[0, 1, 0, 1]), &all())); // x^3 + x
        assert!(!is_strictly_monotone(&p(&[0, -1, 0, 1]), &all())); // x^3 - x
        assert!(!is_strictly_monotone(&p(&[0, 0, 1]), &all())); // x^2
        assert!(is_strictly_monotone(&p(&[0, 0, 1]), &Interval::above(rat_int(0))));
        assert!(!is_strictly_monotone(&p(&[5]), &all()));
    }

    #[test]
    fn positivity_sampling() {
        assert!(takes_positive_value(&p(&[1, 0, 1]), &all()));
        assert!(!takes_positive_value(&p(&[-1, 0, -1]), &all()));
        assert!(nonpositive_on(&p(&[0, 0, -1]), &all())); // -x^2
        assert!(!nonpositive_on(&p(&[0, 1]), &all())); // x
        assert!(nonpositive_on(&p(&[0, 1]), &Interval::below(rat_int(0))));
        assert!(nonpositive_on(&UniPoly::zero(), &all()));
    }

    #[test]
    fn rational_root_extraction() {
        // 6x^3 + x^2 - x = x(3x - 1)(2x + 1)
        let f = p(&[0, -1, 1, 6]);
        assert_eq!(
            rational_roots(&f),
            vec![rat(-1, 2), rat_int(0), rat(1, 3)]
        );
        assert!(rational_roots(&p(&[1, 0, 1])).is_empty());
    }
}

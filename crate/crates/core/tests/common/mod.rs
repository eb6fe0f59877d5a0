//! Shared test machinery: an independent brute-force root-counting
//! oracle and deterministic instance generators.
//!
//! The oracle never touches the Sturm machinery it cross-checks. It
//! isolates roots by recursing on critical points (roots of the
//! derivative), certifies sign constancy with rational interval
//! arithmetic, and then re-counts with a literal dense sign scan whose
//! step sits below the observed root separation.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ytri_core::atomic::{AtomicMap, Chain};
use ytri_core::bipoly::BiPoly;
use ytri_core::interval::Interval;
use ytri_core::mapalg::PlanarMap;
use ytri_core::rational::{rat_int, Rat};
use ytri_core::unipoly::UniPoly;

// ---------------------------------------------------------------------
// Independent distinct-root oracle
// ---------------------------------------------------------------------

const SCAN_BUDGET: usize = 200_000;

#[derive(Debug, Clone)]
enum OracleRoot {
    Exact(Rat),
    Bracket(Rat, Rat),
}

impl OracleRoot {
    fn hull(&self) -> (Rat, Rat) {
        match self {
            OracleRoot::Exact(r) => (r.clone(), r.clone()),
            OracleRoot::Bracket(a, b) => (a.clone(), b.clone()),
        }
    }
}

/// Distinct real roots of `p` in the open interval, counted without
/// Sturm sequences.
pub fn oracle_count_roots(p: &UniPoly, iv: &Interval) -> usize {
    assert!(!p.is_zero(), "oracle needs a nonzero polynomial");
    let mut f = oracle_square_free(p);
    // clamp to a box containing all roots
    let bound = oracle_root_bound(&f);
    let mut lo = match iv.lower() {
        Some(a) if *a > -&bound => a.clone(),
        _ => -&bound,
    };
    let mut hi = match iv.upper() {
        Some(b) if *b < bound => b.clone(),
        _ => bound,
    };
    if lo >= hi {
        return 0;
    }
    // roots exactly on the boundary are excluded by dividing them out
    for endpoint in [lo.clone(), hi.clone()] {
        while !f.is_constant() && f.eval(&endpoint).is_zero() {
            let linear = UniPoly::from_coeffs(vec![-&endpoint, Rat::new(1.into(), 1.into())]);
            f = f.div_exact(&linear);
        }
    }
    if f.is_constant() {
        return 0;
    }
    // tighten the box again for the reduced polynomial
    let bound = oracle_root_bound(&f);
    if lo < -&bound {
        lo = -&bound;
    }
    if hi > bound {
        hi = bound;
    }
    if lo >= hi {
        return 0;
    }
    let roots = oracle_isolate(&f, &lo, &hi);
    match dense_scan_count(&f, &lo, &hi, &roots) {
        Some(scanned) => {
            assert_eq!(
                scanned,
                roots.len(),
                "oracle disagreement between scan and bracketing for {f}"
            );
            scanned
        }
        None => roots.len(),
    }
}

/// Square-free part computed locally (gcd with the derivative).
fn oracle_square_free(p: &UniPoly) -> UniPoly {
    if p.is_constant() {
        return p.monic();
    }
    let g = p.gcd(&p.derivative()).expect("nonzero");
    p.div_exact(&g).monic()
}

/// `1 + max |c_i / lead|`: all roots lie strictly inside.
fn oracle_root_bound(p: &UniPoly) -> Rat {
    let n = p.degree().expect("nonzero");
    if n == 0 {
        return rat_int(1);
    }
    let lead = p.leading().unwrap().abs();
    let mut max = Rat::zero();
    for i in 0..n {
        let c = p.coeff(i).abs();
        if c > max {
            max = c;
        }
    }
    rat_int(1) + max / lead
}

/// Isolates the roots of square-free `f` in `(lo, hi)`; requires
/// `f(lo) != 0 != f(hi)`. Ascending, disjoint.
fn oracle_isolate(f: &UniPoly, lo: &Rat, hi: &Rat) -> Vec<OracleRoot> {
    debug_assert!(!f.eval(lo).is_zero() && !f.eval(hi).is_zero());
    match f.degree() {
        None | Some(0) => Vec::new(),
        Some(1) => {
            let root = -f.coeff(0) / f.coeff(1);
            if *lo < root && root < *hi {
                vec![OracleRoot::Exact(root)]
            } else {
                Vec::new()
            }
        }
        Some(_) => {
            let critical = oracle_isolate(&oracle_square_free(&f.derivative()), lo, hi);
            // breakpoints with known nonzero sign of f; between
            // consecutive breakpoints f is strictly monotone or has
            // certified constant sign
            let mut breaks = vec![lo.clone()];
            for c in critical {
                match c {
                    // f is square-free, so it cannot vanish at a
                    // critical point
                    OracleRoot::Exact(r) => breaks.push(r),
                    OracleRoot::Bracket(a, b) => {
                        let (a, b) = shrink_until_nonzero(f, &f.derivative(), a, b);
                        breaks.push(a);
                        breaks.push(b);
                    }
                }
            }
            breaks.push(hi.clone());
            let mut out = Vec::new();
            for w in breaks.windows(2) {
                if w[0] >= w[1] {
                    continue;
                }
                let sa = f.sign_at(&w[0]);
                let sb = f.sign_at(&w[1]);
                debug_assert!(sa != 0 && sb != 0);
                if sa != sb {
                    out.push(OracleRoot::Bracket(w[0].clone(), w[1].clone()));
                }
            }
            out
        }
    }
}

/// Shrinks a bracket around a root of `g` (which changes sign across
/// it) until interval arithmetic certifies `f != 0` on the closure, or
/// the root of `g` lands on an exact rational.
fn shrink_until_nonzero(f: &UniPoly, g: &UniPoly, mut a: Rat, mut b: Rat) -> (Rat, Rat) {
    let g = oracle_square_free(g);
    for _ in 0..4096 {
        let (min, max) = interval_eval(f, &a, &b);
        if min.is_positive() || max.is_negative() {
            return (a, b);
        }
        let mid = (&a + &b) / rat_int(2);
        let s = g.sign_at(&mid);
        if s == 0 {
            // the critical point itself; f(mid) != 0 since f is
            // square-free, so a degenerate bracket at mid works
            return (mid.clone(), mid);
        }
        if s == g.sign_at(&a) {
            a = mid;
        } else {
            b = mid;
        }
    }
    panic!("bracket refinement stalled for {f}");
}

/// Range enclosure of `f` over `[lo, hi]` by interval Horner.
fn interval_eval(f: &UniPoly, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
    let mut acc = (Rat::zero(), Rat::zero());
    for c in f.coeffs().iter().rev() {
        // acc * [lo, hi]
        let products = [
            &acc.0 * lo,
            &acc.0 * hi,
            &acc.1 * lo,
            &acc.1 * hi,
        ];
        let mut min = products[0].clone();
        let mut max = products[0].clone();
        for p in &products[1..] {
            if *p < min {
                min = p.clone();
            }
            if *p > max {
                max = p.clone();
            }
        }
        acc = (min + c, max + c);
    }
    acc
}

/// Literal dense sign scan with a step below the root separation.
/// `None` when the required grid would exceed the scan budget.
fn dense_scan_count(
    f: &UniPoly,
    lo: &Rat,
    hi: &Rat,
    roots: &[OracleRoot],
) -> Option<usize> {
    let width = hi - lo;
    let step = if roots.len() < 2 {
        &width / rat_int(64)
    } else {
        // refine brackets until hulls are disjoint, then take half the
        // smallest gap between consecutive hulls
        let refined: Vec<OracleRoot> = roots
            .iter()
            .map(|r| refine_bracket(f, r, &(&width / rat_int(4096))))
            .collect();
        let mut min_gap: Option<Rat> = None;
        for pair in refined.windows(2) {
            let gap = &pair[1].hull().0 - &pair[0].hull().1;
            if gap <= Rat::zero() {
                return None;
            }
            if min_gap.as_ref().map_or(true, |m| gap < *m) {
                min_gap = Some(gap);
            }
        }
        min_gap.unwrap() / rat_int(2)
    };
    if step.is_zero() {
        return None;
    }
    let cells = (&width / &step).ceil().to_integer();
    let cells = usize::try_from(cells).ok()?;
    if cells > SCAN_BUDGET {
        return None;
    }
    let mut count = 0;
    let mut previous: i8 = f.sign_at(lo);
    debug_assert!(previous != 0);
    let mut x = lo.clone();
    for _ in 0..=cells {
        x = &x + &step;
        if x >= *hi {
            x = hi.clone();
        }
        let s = f.sign_at(&x);
        if s == 0 {
            count += 1;
        } else {
            if previous != 0 && s != previous {
                count += 1;
            }
            previous = s;
        }
        if x == *hi {
            break;
        }
    }
    Some(count)
}

fn refine_bracket(f: &UniPoly, root: &OracleRoot, target: &Rat) -> OracleRoot {
    match root {
        OracleRoot::Exact(r) => OracleRoot::Exact(r.clone()),
        OracleRoot::Bracket(a, b) => {
            let mut a = a.clone();
            let mut b = b.clone();
            while &b - &a > *target {
                let mid = (&a + &b) / rat_int(2);
                let s = f.sign_at(&mid);
                if s == 0 {
                    return OracleRoot::Exact(mid);
                }
                if s == f.sign_at(&a) {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            OracleRoot::Bracket(a, b)
        }
    }
}

// ---------------------------------------------------------------------
// Deterministic generators
// ---------------------------------------------------------------------

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn i64_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    /// Rational with numerator and denominator bounded by `height`.
    pub fn rat(&mut self, height: i64) -> Rat {
        let n = self.i64_in(-height, height);
        let d = self.i64_in(1, height);
        Rat::new(n.into(), d.into())
    }

    pub fn nonzero_rat(&mut self, height: i64) -> Rat {
        loop {
            let r = self.rat(height);
            if !r.is_zero() {
                return r;
            }
        }
    }

    /// Random polynomial of degree at most `max_deg` (may be zero).
    pub fn unipoly(&mut self, max_deg: usize, height: i64) -> UniPoly {
        let deg = self.i64_in(0, max_deg as i64) as usize;
        let coeffs = (0..=deg).map(|_| self.rat(height)).collect();
        UniPoly::from_coeffs(coeffs)
    }

    pub fn nonzero_unipoly(&mut self, max_deg: usize, height: i64) -> UniPoly {
        loop {
            let p = self.unipoly(max_deg, height);
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// Integer-coefficient polynomial, degree <= `max_deg`, coefficients
    /// in `[-height, height]` (used by the root-counting corpora).
    pub fn int_unipoly(&mut self, max_deg: usize, height: i64) -> UniPoly {
        loop {
            let deg = self.i64_in(0, max_deg as i64) as usize;
            let coeffs = (0..=deg)
                .map(|_| rat_int(self.i64_in(-height, height)))
                .collect();
            let p = UniPoly::from_coeffs(coeffs);
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// Positive everywhere: `(a x + b)^2 + c` with `c > 0`, or a
    /// positive constant.
    pub fn nonvanishing_unipoly(&mut self, height: i64) -> UniPoly {
        if self.i64_in(0, 2) == 0 {
            return UniPoly::constant(self.nonzero_rat(height));
        }
        let a = self.rat(3);
        let b = self.rat(3);
        let c = Rat::new(self.i64_in(1, height).into(), self.i64_in(1, 3).into());
        let linear = UniPoly::from_coeffs(vec![b, a]);
        &(&linear * &linear) + &UniPoly::constant(c)
    }

    /// Strictly monotone on the whole line: odd powers with
    /// same-signed coefficients (or affine).
    pub fn monotone_unipoly(&mut self, height: i64) -> UniPoly {
        let sign = if self.i64_in(0, 1) == 0 { 1 } else { -1 };
        let c0 = self.rat(height);
        if self.i64_in(0, 2) == 0 {
            let a = Rat::new((sign * self.i64_in(1, height)).into(), 1.into());
            return UniPoly::from_coeffs(vec![c0, a]);
        }
        let c1 = Rat::new((sign * self.i64_in(1, height)).into(), 1.into());
        let c3 = Rat::new((sign * self.i64_in(1, 3)).into(), 1.into());
        UniPoly::from_coeffs(vec![c0, c1, Rat::zero(), c3])
    }

    /// Random strip: the whole line, a half line, or a bounded window.
    pub fn strip(&mut self) -> Interval {
        match self.i64_in(0, 3) {
            0 => Interval::all(),
            1 => Interval::above(self.rat(5)),
            2 => Interval::below(self.rat(5)),
            _ => {
                let a = self.rat(5);
                let b = &a + Rat::new(self.i64_in(1, 8).into(), 1.into());
                Interval::bounded(a, b).expect("nonempty by construction")
            }
        }
    }

    /// Delta-map of type `(m, 1)` built as a chain of `m` shears over a
    /// quasi-triangular terminal; decomposition recovers exactly `m`
    /// elimination factors.
    pub fn t4_chain(&mut self, m: usize, height: i64) -> Chain {
        let mut factors = Vec::with_capacity(m + 1);
        for power in (1..=m).rev() {
            factors.push(AtomicMap::ShearX {
                c: self.nonzero_rat(height),
                power: power as u32,
            });
        }
        factors.push(AtomicMap::quasi_x(
            self.monotone_unipoly(height),
            self.nonvanishing_unipoly(height),
            self.unipoly(4, height),
        ));
        Chain::new(factors, Interval::all()).expect("generated factors are valid")
    }

    /// Polynomial Jacobian map fixing the origin, type `(m, 1)` for
    /// `m >= 1` (`m = 1` gives the y-linear pair shape).
    pub fn jacobian_origin_chain(&mut self, m: usize, height: i64) -> Chain {
        let mut factors = Vec::with_capacity(m + 1);
        for power in (1..=m).rev() {
            factors.push(AtomicMap::ShearX {
                c: self.nonzero_rat(height),
                power: power as u32,
            });
        }
        // beta(0) = 0 keeps the origin fixed
        let mut beta = self.unipoly(4, height);
        beta = &beta - &UniPoly::constant(beta.coeff(0));
        factors.push(AtomicMap::TriangularX {
            a: self.nonzero_rat(height),
            b: self.nonzero_rat(height),
            beta,
        });
        Chain::new(factors, Interval::all()).expect("generated factors are valid")
    }

    /// Generic `{0, 1, m}`-shaped delta-map whose decomposition needs
    /// the full `m + 1` elimination factors:
    ///   `F = (c0*Q + w*y + e, Q)` with `Q = cm*w^m*y^m + c1*w*y + alpha`.
    pub fn c1_map(&mut self, m: usize, height: i64) -> PlanarMap {
        assert!(m >= 2);
        let w = self.nonvanishing_unipoly(height);
        let alpha = self.monotone_unipoly(height);
        let e = self.nonzero_rat(height);
        let cm = self.nonzero_rat(height);
        let c0 = self.nonzero_rat(height);
        let c1 = loop {
            // the reduced stage-1 coefficient w*(c1 - cm*m*e^(m-1))
            // must survive; resample on the degenerate draw
            let c1 = self.nonzero_rat(height);
            let mut e_pow = Rat::new(1.into(), 1.into());
            for _ in 0..(m - 1) {
                e_pow = &e_pow * &e;
            }
            if c1 != &cm * rat_int(m as i64) * e_pow {
                break c1;
            }
        };
        let w_b = BiPoly::from_unipoly_in_x(w.clone());
        let q = &(&(&BiPoly::var_y().pow(m as u32) * &w_b.pow(m as u32)).scale(&cm)
            + &(&BiPoly::var_y() * &w_b).scale(&c1))
            + &BiPoly::from_unipoly_in_x(alpha);
        let p = &(&q.scale(&c0) + &(&BiPoly::var_y() * &w_b))
            + &BiPoly::constant(e);
        PlanarMap::on_plane(p, q)
    }

    /// Generic `(Lm, m)`-shaped delta-map needing `L + m` elimination
    /// factors: `F = (w*y + e + sum c_l Q^l, Q)`, `Q = cm*w^m*y^m + alpha`.
    pub fn t5_map(&mut self, l: usize, m: usize, height: i64) -> PlanarMap {
        assert!(l >= 1 && m >= 2);
        let w = self.nonvanishing_unipoly(height);
        let alpha = self.monotone_unipoly(height);
        let e = self.nonzero_rat(height);
        let cm = self.nonzero_rat(height);
        let w_b = BiPoly::from_unipoly_in_x(w.clone());
        let q = &(&BiPoly::var_y().pow(m as u32) * &w_b.pow(m as u32)).scale(&cm)
            + &BiPoly::from_unipoly_in_x(alpha);
        let mut p = &(&BiPoly::var_y() * &w_b) + &BiPoly::constant(e);
        for block in 1..=l {
            let c_block = self.nonzero_rat(height);
            p = &p + &q.pow(block as u32).scale(&c_block);
        }
        PlanarMap::on_plane(p, q)
    }

    /// Chain of certified-injective factors (global bijections plus a
    /// quasi-triangular innermost factor), arbitrary strip.
    pub fn injective_chain(&mut self, max_len: usize, height: i64) -> Chain {
        let strip = self.strip();
        let len = self.i64_in(1, max_len as i64) as usize;
        let mut factors = Vec::with_capacity(len);
        for _ in 1..len {
            factors.push(self.bijective_factor(height));
        }
        // innermost: anything valid on the strip
        factors.push(match self.i64_in(0, 2) {
            0 => self.bijective_factor(height),
            1 => AtomicMap::quasi_x(
                self.monotone_unipoly(height),
                UniPoly::constant(self.nonzero_rat(height)),
                self.unipoly(3, height),
            ),
            _ => AtomicMap::quasi_x(
                self.monotone_unipoly(height),
                self.nonvanishing_unipoly(height),
                self.unipoly(3, height),
            ),
        });
        Chain::new(factors, strip).expect("generated factors are valid")
    }

    fn bijective_factor(&mut self, height: i64) -> AtomicMap {
        match self.i64_in(0, 3) {
            0 => AtomicMap::TriangularX {
                a: self.nonzero_rat(height),
                b: self.nonzero_rat(height),
                beta: self.unipoly(3, height),
            },
            1 => AtomicMap::TriangularY {
                a: self.nonzero_rat(height),
                b: self.nonzero_rat(height),
                alpha: self.unipoly(3, height),
            },
            2 => AtomicMap::ShearX {
                c: self.nonzero_rat(height),
                power: self.i64_in(1, 3) as u32,
            },
            _ => AtomicMap::ShearY {
                c: self.nonzero_rat(height),
                power: self.i64_in(1, 3) as u32,
            },
        }
    }

    /// Random interval for root-counting tests, mixing bounded and
    /// unbounded shapes with small rational endpoints.
    pub fn root_interval(&mut self) -> Interval {
        match self.i64_in(0, 3) {
            0 => Interval::all(),
            1 => Interval::above(self.rat(6)),
            2 => Interval::below(self.rat(6)),
            _ => {
                let a = self.rat(6);
                let b = &a + Rat::new(self.i64_in(1, 12).into(), 1.into());
                Interval::bounded(a, b).expect("nonempty")
            }
        }
    }
}

//! Bivariate polynomials represented as polynomials in `y` whose
//! coefficients are univariate polynomials in `x`.
//!
//! Canonical form: the leading `y`-coefficient is never the zero
//! polynomial, so the `y`-degree matches the coefficient vector length.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{rat_int, Rat};
use crate::unipoly::UniPoly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiPoly {
    /// Indexed by `y`-degree.
    coeffs: Vec<UniPoly>,
}

fn trim(mut coeffs: Vec<UniPoly>) -> Vec<UniPoly> {
    while coeffs.last().map_or(false, |c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        BiPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        BiPoly::from_unipoly_in_x(UniPoly::constant(c))
    }

    pub fn constant_i64(c: i64) -> Self {
        BiPoly::constant(rat_int(c))
    }

    /// The polynomial `x`.
    pub fn var_x() -> Self {
        BiPoly::from_unipoly_in_x(UniPoly::var())
    }

    /// The polynomial `y`.
    pub fn var_y() -> Self {
        BiPoly::from_y_coeffs(vec![UniPoly::zero(), UniPoly::one()])
    }

    /// Embeds `p(x)` as a `y`-free bivariate polynomial.
    pub fn from_unipoly_in_x(p: UniPoly) -> Self {
        BiPoly {
            coeffs: trim(vec![p]),
        }
    }

    /// Interprets a univariate polynomial as a polynomial in `y`.
    pub fn from_unipoly_in_y(p: &UniPoly) -> Self {
        BiPoly::from_y_coeffs(
            p.coeffs()
                .iter()
                .map(|c| UniPoly::constant(c.clone()))
                .collect(),
        )
    }

    /// Builds from `y`-coefficients indexed by `y`-degree.
    pub fn from_y_coeffs(coeffs: Vec<UniPoly>) -> Self {
        BiPoly {
            coeffs: trim(coeffs),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `y`-degree, or `None` for the zero polynomial.
    pub fn y_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Largest `x`-degree over all coefficients, `None` if zero.
    pub fn x_degree(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(|c| c.degree()).max()
    }

    /// Coefficient of `y^j` (zero polynomial beyond the degree).
    pub fn coeff_y(&self, j: usize) -> UniPoly {
        self.coeffs.get(j).cloned().unwrap_or_else(UniPoly::zero)
    }

    pub fn y_coeffs(&self) -> &[UniPoly] {
        &self.coeffs
    }

    /// The constant rational value, if the polynomial is one.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.coeffs.len() {
            0 => Some(Rat::zero()),
            1 => self.coeffs[0].as_constant(),
            _ => None,
        }
    }

    /// The polynomial as a pure function of `x`, if it is `y`-free.
    pub fn as_unipoly_in_x(&self) -> Option<UniPoly> {
        match self.coeffs.len() {
            0 => Some(UniPoly::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rat) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> BiPoly {
        let mut result = BiPoly::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative with respect to `x`.
    pub fn derivative_x(&self) -> BiPoly {
        BiPoly::from_y_coeffs(self.coeffs.iter().map(|c| c.derivative()).collect())
    }

    /// Formal partial derivative with respect to `y`.
    pub fn derivative_y(&self) -> BiPoly {
        if self.coeffs.len() <= 1 {
            return BiPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c.scale(&rat_int(j as i64)))
            .collect();
        BiPoly::from_y_coeffs(coeffs)
    }

    /// Exact evaluation at a rational point, Horner in `y` then `x`.
    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * y + c.eval(x);
        }
        acc
    }

    /// Freezes `x = x0`, leaving a univariate polynomial in `y`.
    pub fn eval_x(&self, x0: &Rat) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| c.eval(x0)).collect())
    }

    /// Substitutes bivariate expressions for both variables:
    /// `self(u(x,y), v(x,y))`, fully expanded.
    ///
    /// Horner in `y` over `v`, with each `x`-coefficient composed with `u`.
    pub fn substitute(&self, u: &BiPoly, v: &BiPoly) -> BiPoly {
        let mut acc = BiPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * v) + &compose_unipoly(c, u);
        }
        acc
    }

    /// Renders in a form the expression grammar re-parses.
    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let term = term_string(c, j);
            if out.is_empty() {
                out.push_str(&term);
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        out
    }
}

/// `p(u)` for univariate `p` and bivariate `u`, by Horner.
fn compose_unipoly(p: &UniPoly, u: &BiPoly) -> BiPoly {
    let mut acc = BiPoly::zero();
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * u) + &BiPoly::constant(c.clone());
    }
    acc
}

fn term_string(coeff: &UniPoly, y_power: usize) -> String {
    let var_part = match y_power {
        0 => None,
        1 => Some("y".to_string()),
        _ => Some(format!("y^{y_power}")),
    };
    let Some(var_part) = var_part else {
        return coeff.display('x');
    };
    // Single-term coefficients multiply in directly; anything longer is
    // parenthesized so the printed form re-parses unambiguously.
    let nonzero_terms = coeff.coeffs().iter().filter(|c| !c.is_zero()).count();
    if nonzero_terms == 1 {
        let printed = coeff.display('x');
        if printed == "1" {
            var_part
        } else if printed == "-1" {
            format!("-{var_part}")
        } else {
            format!("{printed}*{var_part}")
        }
    } else {
        format!("({})*{}", coeff.display('x'), var_part)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({})", self.display())
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for j in 0..n {
            coeffs.push(&self.coeff_y(j) + &rhs.coeff_y(j));
        }
        BiPoly::from_y_coeffs(coeffs)
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for j in 0..n {
            coeffs.push(&self.coeff_y(j) - &rhs.coeff_y(j));
        }
        BiPoly::from_y_coeffs(coeffs)
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero();
        }
        let mut coeffs = vec![UniPoly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        BiPoly::from_y_coeffs(coeffs)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: BiPoly) -> BiPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: &BiPoly) -> BiPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn up(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_i64(coeffs)
    }

    /// (x^2+1)y + 2x
    fn p_11_first() -> BiPoly {
        BiPoly::from_y_coeffs(vec![up(&[0, 2]), up(&[1, 0, 1])])
    }

    /// (x^2+1)y + x
    fn p_11_second() -> BiPoly {
        BiPoly::from_y_coeffs(vec![up(&[0, 1]), up(&[1, 0, 1])])
    }

    #[test]
    fn subtraction_cancels_shared_leading_term() {
        // ((x^2+1)y + 2x) - ((x^2+1)y + x) = x
        assert_eq!(&p_11_first() - &p_11_second(), BiPoly::var_x());
    }

    #[test]
    fn y_derivative_example() {
        // d/dy (x^3 y^2 + x) = 2 x^3 y
        let f = BiPoly::from_y_coeffs(vec![up(&[0, 1]), UniPoly::zero(), up(&[0, 0, 0, 1])]);
        let expected = BiPoly::from_y_coeffs(vec![UniPoly::zero(), up(&[0, 0, 0, 2])]);
        assert_eq!(f.derivative_y(), expected);
    }

    #[test]
    fn eval_example() {
        // 3x^2y^2 + 1 at (1,1) = 4
        let f = BiPoly::from_y_coeffs(vec![up(&[1]), UniPoly::zero(), up(&[0, 0, 3])]);
        assert_eq!(f.eval(&rat_int(1), &rat_int(1)), rat_int(4));
    }

    #[test]
    fn substitute_difference_recovers_x() {
        // f = u - v applied to the (1,1) pair gives x.
        let f = &BiPoly::var_x() - &BiPoly::var_y();
        assert_eq!(
            f.substitute(&p_11_first(), &p_11_second()),
            BiPoly::var_x()
        );
    }

    #[test]
    fn substitute_projection() {
        let f = BiPoly::var_y();
        let u = p_11_first();
        let v = p_11_second();
        assert_eq!(f.substitute(&u, &v), v);
    }

    #[test]
    fn substitute_shear_expansion() {
        // f = u + 2 v^2 applied to
        //   u = (x+1)y^4 + 2x*y^2 + (x-1)y + 3,  v = (x+2)y^2 + (1-x),
        // expanded by hand.
        let u = BiPoly::from_y_coeffs(vec![
            up(&[3]),
            up(&[-1, 1]),
            up(&[0, 2]),
            UniPoly::zero(),
            up(&[1, 1]),
        ]);
        let v = BiPoly::from_y_coeffs(vec![up(&[1, -1]), UniPoly::zero(), up(&[2, 1])]);
        let f = &BiPoly::var_x() + &BiPoly::var_y().pow(2).scale(&rat_int(2));
        let got = f.substitute(&u, &v);
        let expected = BiPoly::from_y_coeffs(vec![
            up(&[5, -4, 2]),
            up(&[-1, 1]),
            up(&[8, -2, -4]),
            UniPoly::zero(),
            up(&[9, 9, 2]),
        ]);
        assert_eq!(got, expected);
    }

    #[test]
    fn eval_commutes_with_substitute() {
        let f = BiPoly::from_y_coeffs(vec![up(&[1, 2]), up(&[0, 1]), up(&[3])]);
        let u = p_11_first();
        let v = p_11_second();
        let (x, y) = (rat_int(2), rat_int(-3));
        let lhs = f.substitute(&u, &v).eval(&x, &y);
        let rhs = f.eval(&u.eval(&x, &y), &v.eval(&x, &y));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_roundtrip_shapes() {
        assert_eq!(p_11_first().display(), "(x^2 + 1)*y + 2*x");
        let f = BiPoly::from_y_coeffs(vec![up(&[0, -1]), up(&[-1])]);
        assert_eq!(f.display(), "-y - x");
        assert_eq!(BiPoly::zero().display(), "0");
    }
}

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{UniPoly, Var};
use crate::C64;

/// Sparse polynomial in `x` and `y` with complex coefficients.
///
/// Keys are `(i, j)` exponent pairs of `x^i y^j`. Zero coefficients are never
/// stored, so two polynomials are equal exactly when their term maps are.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), C64>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C64) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(i: u32, j: u32, c: C64) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, C64::new(1.0, 0.0))
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, C64::new(1.0, 0.0))
    }

    /// Builds a polynomial from `(i, j, coeff)` triples, summing repeated
    /// exponents.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, C64)>,
    {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    /// Same as [`BiPoly::from_terms`] with real coefficients.
    pub fn from_real_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, f64)>,
    {
        Self::from_terms(terms.into_iter().map(|(i, j, c)| (i, j, C64::new(c, 0.0))))
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: C64) {
        if c == C64::new(0.0, 0.0) {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert(C64::new(0.0, 0.0));
        *entry += c;
        if *entry == C64::new(0.0, 0.0) {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, C64)> + '_ {
        self.terms.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> C64 {
        self.terms.get(&(i, j)).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Ordinary total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// `max(a0*i + a1*j)` over the support.
    pub fn weighted_degree(&self, a0: u32, a1: u32) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| a0 * i + a1 * j).max()
    }

    pub fn degree_in(&self, var: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j)| match var {
                Var::X => i,
                Var::Y => j,
            })
            .max()
    }

    /// Largest coefficient modulus, 0 for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, x: C64, y: C64) -> C64 {
        if self.terms.is_empty() {
            return C64::new(0.0, 0.0);
        }
        let dx = self.degree_in(Var::X).unwrap_or(0) as usize;
        let dy = self.degree_in(Var::Y).unwrap_or(0) as usize;
        let xp = powers(x, dx);
        let yp = powers(y, dy);
        self.terms
            .iter()
            .map(|(&(i, j), &c)| c * xp[i as usize] * yp[j as usize])
            .sum()
    }

    /// `sum |c| |x|^i |y|^j`, the natural scale of rounding error in [`BiPoly::eval`].
    pub fn eval_abs(&self, x: C64, y: C64) -> f64 {
        let (ax, ay) = (x.norm(), y.norm());
        self.terms
            .iter()
            .map(|(&(i, j), c)| c.norm() * ax.powi(i as i32) * ay.powi(j as i32))
            .sum()
    }

    pub fn partial(&self, var: Var) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), &c) in &self.terms {
            match var {
                Var::X if i > 0 => out.add_term(i - 1, j, c * i as f64),
                Var::Y if j > 0 => out.add_term(i, j - 1, c * j as f64),
                _ => {}
            }
        }
        out
    }

    /// Fixes `var = value`, leaving a univariate polynomial in the other variable.
    pub fn substitute(&self, var: Var, value: C64) -> UniPoly {
        let d = self.degree_in(var).unwrap_or(0) as usize;
        let vp = powers(value, d);
        let len = self.degree_in(var.other()).map_or(0, |e| e as usize + 1);
        let mut coeffs = vec![C64::new(0.0, 0.0); len];
        for (&(i, j), &c) in &self.terms {
            let (fixed, free) = match var {
                Var::X => (i, j),
                Var::Y => (j, i),
            };
            coeffs[free as usize] += c * vp[fixed as usize];
        }
        UniPoly::new(coeffs)
    }

    /// Views the polynomial as `sum_k c_k(other) * var^k` and returns the
    /// coefficient polynomials `c_0, c_1, ...` (trailing zeros removed).
    pub fn coeffs_in(&self, var: Var) -> Vec<UniPoly> {
        let Some(d) = self.degree_in(var) else {
            return Vec::new();
        };
        let mut buckets: Vec<Vec<(usize, C64)>> = vec![Vec::new(); d as usize + 1];
        for (&(i, j), &c) in &self.terms {
            let (k, e) = match var {
                Var::X => (i, j),
                Var::Y => (j, i),
            };
            buckets[k as usize].push((e as usize, c));
        }
        buckets
            .into_iter()
            .map(|b| {
                let len = b.iter().map(|&(e, _)| e + 1).max().unwrap_or(0);
                let mut coeffs = vec![C64::new(0.0, 0.0); len];
                for (e, c) in b {
                    coeffs[e] += c;
                }
                UniPoly::new(coeffs)
            })
            .collect()
    }

    /// Drops every term whose modulus is at most `tol`.
    pub fn prune(&self, tol: f64) -> BiPoly {
        BiPoly::from_terms(self.terms().filter(|&(_, _, c)| c.norm() > tol))
    }

    pub fn scale(&self, s: C64) -> BiPoly {
        BiPoly::from_terms(self.terms().map(|(i, j, c)| (i, j, c * s)))
    }

    pub fn powi(&self, e: u32) -> BiPoly {
        let mut acc = BiPoly::constant(C64::new(1.0, 0.0));
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// True when every coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im == 0.0)
    }
}

pub(crate) fn powers(z: C64, d: usize) -> Vec<C64> {
    let mut v = Vec::with_capacity(d + 1);
    let mut acc = C64::new(1.0, 0.0);
    v.push(acc);
    for _ in 0..d {
        acc *= z;
        v.push(acc);
    }
    v
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.add_term(i, j, c);
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.add_term(i, j, -c);
        }
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (i, j, a) in self.terms() {
            for (k, l, b) in rhs.terms() {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(C64::new(-1.0, 0.0))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for BiPoly {
            type Output = BiPoly;
            fn $m(self, rhs: BiPoly) -> BiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            if c.im == 0.0 && c.re < 0.0 {
                write!(f, "{}{}", if first { "-" } else { " - " }, -c.re)?;
            } else if !first {
                write!(f, " + ")?;
            }
            if c.im == 0.0 {
                if c.re >= 0.0 {
                    write!(f, "{}", c.re)?;
                }
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            first = false;
            match i {
                0 => {}
                1 => write!(f, "*x")?,
                _ => write!(f, "*x^{i}")?,
            }
            match j {
                0 => {}
                1 => write!(f, "*y")?,
                _ => write!(f, "*y^{j}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    i: u32,
    j: u32,
    #[serde(with = "crate::complex_serde")]
    coeff: Complex64,
}

impl Serialize for BiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<TermRepr> = self
            .terms()
            .map(|(i, j, coeff)| TermRepr { i, j, coeff })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<TermRepr>::deserialize(d)?;
        Ok(BiPoly::from_terms(v.into_iter().map(|t| (t.i, t.j, t.coeff))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn eval_monomial_and_sum() {
        let p = BiPoly::from_real_terms([(1, 1, 2.0)]);
        assert_eq!(p.eval(c(3.0), c(4.0)), c(24.0));
        let q = BiPoly::from_real_terms([(2, 0, 1.0), (0, 3, 4.0), (0, 2, 3.0), (0, 1, 2.0)]);
        assert_eq!(q.eval(c(1.0), c(1.0)), c(10.0));
        assert_eq!(BiPoly::zero().eval(c(0.3), C64::new(1.0, 2.0)), c(0.0));
    }

    #[test]
    fn partials() {
        let p = BiPoly::from_real_terms([(3, 0, 1.0), (0, 2, 1.0)]);
        assert_eq!(p.partial(Var::X), BiPoly::from_real_terms([(2, 0, 3.0)]));
        let q = BiPoly::from_real_terms([(1, 1, 2.0)]);
        assert_eq!(q.partial(Var::Y), BiPoly::from_real_terms([(1, 0, 2.0)]));
        let r = BiPoly::from_real_terms([(0, 4, 1.0), (0, 1, -3.0)]);
        assert!(r.partial(Var::X).is_zero());
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = BiPoly::from_real_terms([(1, 2, 1.5), (1, 2, -1.5), (0, 0, 1.0)]);
        assert_eq!(p.num_terms(), 1);
        let z = &p - &p;
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
    }

    #[test]
    fn degrees() {
        let p = BiPoly::from_real_terms([(2, 0, 1.0), (0, 3, 4.0)]);
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.weighted_degree(3, 2), Some(6));
        assert_eq!(BiPoly::from_real_terms([(1, 1, 2.0)]).weighted_degree(3, 2), Some(5));
        assert_eq!(p.degree_in(Var::X), Some(2));
        assert_eq!(p.degree_in(Var::Y), Some(3));
    }

    #[test]
    fn substitute_and_coeffs_in() {
        // 2xy + x^2 + 3
        let p = BiPoly::from_real_terms([(1, 1, 2.0), (2, 0, 1.0), (0, 0, 3.0)]);
        let u = p.substitute(Var::Y, c(2.0));
        assert_eq!(u.coeffs(), &[c(3.0), c(4.0), c(1.0)]);
        let cs = p.coeffs_in(Var::X);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0].coeffs(), &[c(3.0)]);
        assert_eq!(cs[1].coeffs(), &[c(0.0), c(2.0)]);
        assert_eq!(cs[2].coeffs(), &[c(1.0)]);
    }

    #[test]
    fn product_matches_pointwise() {
        let p = BiPoly::from_real_terms([(1, 0, 1.0), (0, 1, -2.0)]);
        let q = BiPoly::from_real_terms([(2, 1, 0.5), (0, 0, 3.0)]);
        let (x, y) = (C64::new(0.3, -1.1), C64::new(2.0, 0.7));
        let lhs = (&p * &q).eval(x, y);
        let rhs = p.eval(x, y) * q.eval(x, y);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let p = BiPoly::from_terms([(1, 2, C64::new(1.0, -0.5)), (0, 0, c(2.0))]);
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"re\""));
        let back: BiPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}

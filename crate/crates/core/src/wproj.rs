//! Weighted projective plane `WP(a0, a1, 1)`: homogenization, points at
//! infinity and orbifold singular points.
//!
//! Affine coordinates are `x = X / U^a0`, `y = Y / U^a1`; the line at
//! infinity is `U = 0`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::catalog::{gcd, PlaneMap, Weights};
use crate::error::{Error, Result};
use crate::poly::{uniroots, BiPoly, UniPoly};
use crate::solver::TargetPoint;
use crate::C64;

/// Relative tolerance for a candidate mixed point to count as a root of the
/// second polynomial.
const MIXED_ROOT_REL: f64 = 1e-8;

/// Polynomial in `X, Y, U`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TriPoly {
    terms: BTreeMap<(u32, u32, u32), C64>,
}

impl TriPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, u32, C64)>,
    {
        let mut p = Self::zero();
        for (i, j, k, c) in terms {
            p.add_term(i, j, k, c);
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, k: u32, c: C64) {
        let e = self.terms.entry((i, j, k)).or_insert(C64::new(0.0, 0.0));
        *e += c;
        if *e == C64::new(0.0, 0.0) {
            self.terms.remove(&(i, j, k));
        }
    }

    /// `(i, j, k, coeff)` for `coeff X^i Y^j U^k`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, u32, C64)> + '_ {
        self.terms.iter().map(|(&(i, j, k), &c)| (i, j, k, c))
    }

    pub fn coeff(&self, i: u32, j: u32, k: u32) -> C64 {
        self.terms.get(&(i, j, k)).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: C64, y: C64, u: C64) -> C64 {
        self.terms()
            .map(|(i, j, k, c)| c * x.powu(i) * y.powu(j) * u.powu(k))
            .sum()
    }

    /// The common weighted degree `a0 i + a1 j + k` of all terms.
    pub fn weighted_degree(&self, w: Weights) -> Result<u32> {
        let mut degs = self.terms().map(|(i, j, k, _)| w.a0 * i + w.a1 * j + w.a2 * k);
        let Some(d) = degs.next() else {
            return Err(Error::ZeroPolynomial);
        };
        if degs.all(|e| e == d) {
            Ok(d)
        } else {
            Err(Error::NonHomogeneousInput)
        }
    }

    /// Restriction to the affine chart `U = 1`.
    pub fn dehomogenize(&self) -> BiPoly {
        BiPoly::from_terms(self.terms().map(|(i, j, _, c)| (i, j, c)))
    }

    /// Restriction to the line at infinity `U = 0`, as a polynomial in `X, Y`.
    pub fn at_infinity(&self) -> BiPoly {
        BiPoly::from_terms(self.terms().filter(|t| t.2 == 0).map(|(i, j, _, c)| (i, j, c)))
    }
}

impl fmt::Display for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j, k), c) in self.terms.iter().rev() {
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
            for (name, e) in [("X", i), ("Y", j), ("U", k)] {
                match e {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TriTermRepr {
    i: u32,
    j: u32,
    k: u32,
    #[serde(with = "crate::complex_serde")]
    coeff: C64,
}

impl Serialize for TriPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<TriTermRepr> = self
            .terms()
            .map(|(i, j, k, coeff)| TriTermRepr { i, j, k, coeff })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TriPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<TriTermRepr>::deserialize(d)?;
        Ok(TriPoly::from_terms(v.into_iter().map(|t| (t.i, t.j, t.k, t.coeff))))
    }
}

/// The pair `(P1, P2)` homogenized from `f - s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedHomogPair {
    pub q1: TriPoly,
    pub q2: TriPoly,
    pub weights: Weights,
    pub d1: u32,
    pub d2: u32,
}

impl WeightedHomogPair {
    /// The affine system `(f1 - s1, f2 - s2)` at `U = 1`.
    pub fn dehomogenize(&self) -> (BiPoly, BiPoly) {
        (self.q1.dehomogenize(), self.q2.dehomogenize())
    }
}

/// Maximum of `a0 i + a1 j` over the terms of `p`.
pub fn weighted_degree(p: &BiPoly, w: Weights) -> Result<u32> {
    p.weighted_degree(w.a0, w.a1).ok_or(Error::ZeroPolynomial)
}

/// Lifts `p` to a weighted-homogeneous polynomial of degree `d`
/// (`x^i y^j -> X^i Y^j U^{d - a0 i - a1 j}`). Requires `d >= deg_w p`.
pub fn homogenize_poly(p: &BiPoly, d: u32, w: Weights) -> TriPoly {
    TriPoly::from_terms(p.terms().map(|(i, j, c)| {
        let e = w.a0 * i + w.a1 * j;
        assert!(e <= d, "term degree {e} exceeds target degree {d}");
        (i, j, (d - e) / w.a2, c)
    }))
}

/// Homogenizes `f - s` in `WP(w)`. Each component keeps its own weighted
/// degree; `-s_k` becomes `-s_k U^{d_k}`.
pub fn homogenize(m: &PlaneMap, s: TargetPoint, w: Weights) -> WeightedHomogPair {
    let shifted = |f: &BiPoly, sk: C64| -> (TriPoly, u32) {
        let d = f.weighted_degree(w.a0, w.a1).unwrap_or(0);
        let g = f - &BiPoly::constant(sk);
        (homogenize_poly(&g, d, w), d)
    };
    let (q1, d1) = shifted(m.f1(), s.s1);
    let (q2, d2) = shifted(m.f2(), s.s2);
    WeightedHomogPair { q1, q2, weights: w, d1, d2 }
}

/// A point `[X : Y : 0]` on the line at infinity.
///
/// Representatives: `[1 : 0 : 0]` on the X axis, otherwise `Y = 1` with `X`
/// the element of smallest principal argument among `zeta^a0 X`,
/// `zeta^a1 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfinityPoint {
    #[serde(rename = "X", with = "crate::complex_serde")]
    pub x: C64,
    #[serde(rename = "Y", with = "crate::complex_serde")]
    pub y: C64,
}

impl InfinityPoint {
    pub fn x_axis() -> Self {
        InfinityPoint {
            x: C64::new(1.0, 0.0),
            y: C64::new(0.0, 0.0),
        }
    }

    pub fn y_axis() -> Self {
        InfinityPoint {
            x: C64::new(0.0, 0.0),
            y: C64::new(1.0, 0.0),
        }
    }

    /// Canonical representative of `[x : 1 : 0]`.
    pub fn in_y_chart(x: C64, w: Weights) -> Self {
        InfinityPoint {
            x: canonical_x(x, w),
            y: C64::new(1.0, 0.0),
        }
    }
}

impl fmt::Display for InfinityPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |z: C64| {
            if z.im == 0.0 {
                format!("{}", z.re)
            } else {
                format!("{}{:+}i", z.re, z.im)
            }
        };
        write!(f, "[{}:{}:0]", show(self.x), show(self.y))
    }
}

fn principal_arg(z: C64) -> f64 {
    let a = z.arg();
    if a <= -PI + 1e-12 {
        a + TAU
    } else {
        a
    }
}

fn canonical_x(x: C64, w: Weights) -> C64 {
    if x.norm() == 0.0 {
        return C64::new(0.0, 0.0);
    }
    (0..w.a1)
        .map(|k| x * C64::from_polar(1.0, TAU * (k * w.a0) as f64 / w.a1 as f64))
        .min_by(|a, b| principal_arg(*a).total_cmp(&principal_arg(*b)))
        .unwrap()
}

/// Common zeros of `hp` on the line `U = 0`, one representative per point.
pub fn roots_at_infinity(hp: &WeightedHomogPair) -> Result<Vec<InfinityPoint>> {
    let w = hp.weights;
    for q in [&hp.q1, &hp.q2] {
        match q.weighted_degree(w) {
            Ok(_) | Err(Error::ZeroPolynomial) => {}
            Err(e) => return Err(e),
        }
    }
    // A polynomial divisible by U imposes no condition at infinity.
    let gs: Vec<BiPoly> = [&hp.q1, &hp.q2]
        .into_iter()
        .map(TriPoly::at_infinity)
        .filter(|g| !g.is_zero())
        .collect();
    if gs.is_empty() {
        log::warn!("both polynomials vanish on the whole line at infinity");
    }
    let mut out = Vec::new();

    // Axis points are decided by the support alone: g(1, 0) is the pure-X
    // coefficient and g(0, 1) the pure-Y coefficient.
    if gs.iter().all(|g| g.terms().all(|(_, j, _)| j != 0)) {
        out.push(InfinityPoint::x_axis());
    }
    if gs.iter().all(|g| g.terms().all(|(i, _, _)| i != 0)) {
        out.push(InfinityPoint::y_axis());
    }

    // Mixed points [X : 1 : 0] with X != 0.
    let charts: Vec<UniPoly> = gs.iter().map(|g| strip_zero_roots(y_chart(g))).collect();
    if charts.iter().any(|h| h.degree() == Some(0)) {
        return Ok(out);
    }
    let Some(lead) = charts.iter().filter(|h| !h.is_zero()).min_by_key(|h| h.degree()) else {
        return Ok(out);
    };
    let mut mixed: Vec<InfinityPoint> = Vec::new();
    for r in uniroots(lead)?.iter() {
        let x = r.value;
        let on_all = charts
            .iter()
            .all(|h| h.is_zero() || h.eval(x).norm() <= MIXED_ROOT_REL * h.eval_abs(x).max(f64::MIN_POSITIVE));
        if !on_all {
            continue;
        }
        let p = InfinityPoint::in_y_chart(x, w);
        let tol = 1e-7 * (1.0 + p.x.norm());
        if !mixed.iter().any(|q| (q.x - p.x).norm() <= tol) {
            mixed.push(p);
        }
    }
    mixed.sort_by(|a, b| a.x.re.total_cmp(&b.x.re).then(a.x.im.total_cmp(&b.x.im)));
    out.extend(mixed);
    Ok(out)
}

fn y_chart(g: &BiPoly) -> UniPoly {
    let len = g.degree_in(crate::poly::Var::X).map_or(0, |d| d as usize + 1);
    let mut coeffs = vec![C64::new(0.0, 0.0); len];
    for (i, _, c) in g.terms() {
        coeffs[i as usize] += c;
    }
    UniPoly::new(coeffs)
}

fn strip_zero_roots(h: UniPoly) -> UniPoly {
    let lead_zeros = h.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
    UniPoly::new(h.coeffs()[lead_zeros..].to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxisPoint {
    #[serde(rename = "[1:0:0]")]
    X,
    #[serde(rename = "[0:1:0]")]
    Y,
}

impl fmt::Display for AxisPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisPoint::X => write!(f, "[1:0:0]"),
            AxisPoint::Y => write!(f, "[0:1:0]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub location: AxisPoint,
    pub local_group_order: u32,
}

/// Axis points with a non-trivial local group `Z/a`. The affine chart
/// (`a2 = 1`) is always regular.
pub fn singular_points(w: Weights) -> Vec<SingularPoint> {
    [(AxisPoint::X, w.a0), (AxisPoint::Y, w.a1)]
        .into_iter()
        .filter(|&(_, a)| a > 1)
        .map(|(location, local_group_order)| SingularPoint {
            location,
            local_group_order,
        })
        .collect()
}

/// Order of the stabilizer of a generic point `[X : Y : 0]` with `X, Y != 0`.
/// It is `gcd(a0, a1)`, so for weights such as `(2, 2, 1)` the whole line at
/// infinity carries a `Z/2` local group, not only the axis points.
pub fn infinity_line_stabilizer(w: Weights) -> u32 {
    gcd(w.a0, w.a1)
}

/// `d1 d2 / (a0 a1)`: the number of affine solutions with multiplicity.
pub fn weighted_bezout(hp: &WeightedHomogPair) -> Result<u32> {
    let inf = roots_at_infinity(hp)?;
    if !inf.is_empty() {
        return Err(Error::RootsAtInfinityPresent(inf.len()));
    }
    let product = hp.d1 as u64 * hp.d2 as u64;
    let divisor = hp.weights.a0 as u64 * hp.weights.a1 as u64;
    if product % divisor != 0 {
        return Err(Error::NonIntegerCount { product, divisor });
    }
    Ok((product / divisor) as u32)
}

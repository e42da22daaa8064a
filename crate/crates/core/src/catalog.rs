//! The A, D, E map families and the two umbilic lensing maps.
//!
//! Every family comes with a generating function `F_{c,s}` whose critical
//! points are exactly the pre-images of `s`, an induced plane map `f_c`, and
//! the weighted projective plane `WP(a0, a1, 1)` in which the map has no
//! common roots at infinity.
//!
//! Sign conventions for `A_n`: the map is
//! `(±(n+1)x^n + (n-1)c_{n-1}x^{n-2} + ... + 3c_3x^2 - 4xy, ∓2y)` with the
//! first sign taken from `x^{n+1}` and the second from `y^2`. The generating
//! function carries the `y^2` sign on its `s_2 x^2` term so that its gradient
//! reproduces that map for all four sign tuples. With that convention the
//! Jacobian of the map is `-det Hess F` at every pre-image, rather than
//! `+det Hess F` as for the D, E and lensing families.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{BiPoly, Var};
use crate::solver::TargetPoint;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    A,
    D,
    E6,
    E7,
    E8,
    EllipticUmbilic,
    HyperbolicUmbilic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Kind {
    fn sign_count(self) -> usize {
        match self {
            Kind::A => 2,
            Kind::D | Kind::E6 => 1,
            _ => 0,
        }
    }

    pub fn is_lensing(self) -> bool {
        matches!(self, Kind::EllipticUmbilic | Kind::HyperbolicUmbilic)
    }
}

/// A singularity family together with its index and sign choices.
///
/// Fields are private so that every value satisfies the index and sign-count
/// rules (`A`: n ≥ 2 and two signs, `D`: n ≥ 4 and one sign, `E6`: one sign,
/// everything else: no index and no signs).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FamilyIdRepr", into = "FamilyIdRepr")]
pub struct FamilyId {
    kind: Kind,
    n: Option<u32>,
    signs: Vec<Sign>,
    legacy_fold: bool,
}

#[derive(Serialize, Deserialize)]
struct FamilyIdRepr {
    kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
    #[serde(default)]
    signs: Vec<Sign>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    legacy_fold: bool,
}

impl TryFrom<FamilyIdRepr> for FamilyId {
    type Error = Error;
    fn try_from(r: FamilyIdRepr) -> Result<Self> {
        let id = FamilyId::new(r.kind, r.n, r.signs)?;
        if r.legacy_fold {
            id.with_legacy_fold()
        } else {
            Ok(id)
        }
    }
}

impl From<FamilyId> for FamilyIdRepr {
    fn from(id: FamilyId) -> Self {
        FamilyIdRepr {
            kind: id.kind,
            n: id.n,
            signs: id.signs,
            legacy_fold: id.legacy_fold,
        }
    }
}

impl FamilyId {
    pub fn new(kind: Kind, n: Option<u32>, signs: Vec<Sign>) -> Result<Self> {
        let bad = |why: &str| Err(Error::UnknownFamily(format!("{kind:?} n={n:?}: {why}")));
        match (kind, n) {
            (Kind::A, Some(n)) if n < 2 => return bad("A_n requires n >= 2"),
            (Kind::D, Some(n)) if n < 4 => return bad("D_n requires n >= 4"),
            (Kind::A | Kind::D, None) => return bad("index n is required"),
            (Kind::A | Kind::D, Some(_)) => {}
            (_, Some(_)) => return bad("this family takes no index"),
            (_, None) => {}
        }
        if signs.len() != kind.sign_count() {
            return bad("wrong number of signs");
        }
        Ok(FamilyId {
            kind,
            n,
            signs,
            legacy_fold: false,
        })
    }

    pub fn a(n: u32, x_sign: Sign, y_sign: Sign) -> Result<Self> {
        Self::new(Kind::A, Some(n), vec![x_sign, y_sign])
    }

    pub fn d(n: u32, sign: Sign) -> Result<Self> {
        Self::new(Kind::D, Some(n), vec![sign])
    }

    pub fn e6(sign: Sign) -> Self {
        Self::new(Kind::E6, None, vec![sign]).unwrap()
    }

    pub fn e7() -> Self {
        Self::new(Kind::E7, None, vec![]).unwrap()
    }

    pub fn e8() -> Self {
        Self::new(Kind::E8, None, vec![]).unwrap()
    }

    pub fn elliptic_umbilic() -> Self {
        Self::new(Kind::EllipticUmbilic, None, vec![]).unwrap()
    }

    pub fn hyperbolic_umbilic() -> Self {
        Self::new(Kind::HyperbolicUmbilic, None, vec![]).unwrap()
    }

    /// The `A_n` variant without the `-4xy` cross term (and without the
    /// matching `s_2 x^2` term in the generating function).
    pub fn with_legacy_fold(mut self) -> Result<Self> {
        if self.kind != Kind::A {
            return Err(Error::UnknownFamily(format!(
                "legacy fold form only exists for A_n, not {self}"
            )));
        }
        self.legacy_fold = true;
        Ok(self)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn n(&self) -> Option<u32> {
        self.n
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn legacy_fold(&self) -> bool {
        self.legacy_fold
    }

    /// Parameter names the family's normal form requires, in order.
    pub fn param_names(&self) -> Vec<String> {
        let range = |lo: u32, hi: u32| (lo..=hi).map(|k| format!("c{k}")).collect();
        match (self.kind, self.n) {
            (Kind::A, Some(n)) => {
                if n >= 4 {
                    range(3, n - 1)
                } else {
                    Vec::new()
                }
            }
            (Kind::D, Some(n)) => range(2, n - 2),
            (Kind::E6, _) => range(1, 3),
            (Kind::E7, _) => range(1, 4),
            (Kind::E8, _) => range(1, 5),
            (Kind::EllipticUmbilic | Kind::HyperbolicUmbilic, _) => vec!["c".to_string()],
            _ => unreachable!("validated in FamilyId::new"),
        }
    }

    /// Number of pre-images of a generic target.
    pub fn image_count(&self) -> u32 {
        match self.kind {
            Kind::A | Kind::D => self.n.unwrap(),
            Kind::E6 => 6,
            Kind::E7 => 7,
            Kind::E8 => 8,
            Kind::EllipticUmbilic | Kind::HyperbolicUmbilic => 4,
        }
    }

    fn sign(&self, i: usize) -> f64 {
        self.signs[i].value()
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let signs: String = self.signs.iter().map(|s| s.symbol()).collect();
        match self.kind {
            Kind::A => write!(f, "A{}{}", self.n.unwrap(), signs)?,
            Kind::D => write!(f, "D{}{}", self.n.unwrap(), signs)?,
            Kind::E6 => write!(f, "E6{signs}")?,
            Kind::E7 => write!(f, "E7")?,
            Kind::E8 => write!(f, "E8")?,
            Kind::EllipticUmbilic => write!(f, "elliptic-umbilic")?,
            Kind::HyperbolicUmbilic => write!(f, "hyperbolic-umbilic")?,
        }
        if self.legacy_fold {
            write!(f, "[legacy-fold]")?;
        }
        Ok(())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    /// Accepts `A3`, `A3+-`, `D5-`, `E6+`, `E7`, `E8`, `elliptic`,
    /// `hyperbolic` (also `elliptic-umbilic`, `D4-lens`, `D4+lens`).
    /// Missing signs default to `+`.
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownFamily(s.to_string());
        let t: String = s
            .chars()
            .filter(|c| !matches!(c, ' ' | '_' | '(' | ')' | ',' | '^'))
            .collect::<String>()
            .to_ascii_lowercase();
        match t.as_str() {
            "elliptic" | "ellipticumbilic" | "elliptic-umbilic" | "d4-lens" | "eu" => {
                return Ok(Self::elliptic_umbilic())
            }
            "hyperbolic" | "hyperbolicumbilic" | "hyperbolic-umbilic" | "d4+lens" | "hu" => {
                return Ok(Self::hyperbolic_umbilic())
            }
            _ => {}
        }
        let (kind, rest) = if let Some(r) = t.strip_prefix("e6") {
            (Kind::E6, r)
        } else if let Some(r) = t.strip_prefix("e7") {
            (Kind::E7, r)
        } else if let Some(r) = t.strip_prefix("e8") {
            (Kind::E8, r)
        } else if let Some(r) = t.strip_prefix('a') {
            (Kind::A, r)
        } else if let Some(r) = t.strip_prefix('d') {
            (Kind::D, r)
        } else {
            return Err(unknown());
        };
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        let sign_str = &rest[digits.len()..];
        let n = if digits.is_empty() {
            None
        } else {
            Some(digits.parse::<u32>().map_err(|_| unknown())?)
        };
        let mut signs = sign_str
            .chars()
            .map(Sign::from_symbol)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(unknown)?;
        if signs.is_empty() {
            signs = vec![Sign::Plus; kind.sign_count()];
        }
        FamilyId::new(kind, n, signs)
    }
}

/// Named parameter values of a family.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamVector {
    #[serde(with = "crate::complex_serde::map")]
    entries: BTreeMap<String, C64>,
}

impl ParamVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.set(name, value);
        self
    }

    /// Complex parameter values; meant for testing the algebra off the real locus.
    pub fn with_complex(mut self, name: &str, value: C64) -> Self {
        self.entries.insert(name.to_string(), value);
        self
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.entries.insert(name.to_string(), C64::new(value, 0.0));
    }

    pub fn get(&self, name: &str) -> Option<C64> {
        self.entries.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, C64)> {
        self.entries.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.entries.values().all(|v| v.im == 0.0)
    }

    /// Checks the names against `id.param_names()`.
    pub fn validate(&self, id: &FamilyId) -> Result<()> {
        let required = id.param_names();
        if let Some(missing) = required.iter().find(|n| !self.entries.contains_key(*n)) {
            return Err(Error::MissingParam(missing.clone()));
        }
        if let Some(extra) = self.entries.keys().find(|k| !required.contains(k)) {
            return Err(Error::ExtraParam(extra.clone()));
        }
        Ok(())
    }

    fn c(&self, name: &str) -> C64 {
        self.entries[name]
    }

    fn ck(&self, k: u32) -> C64 {
        self.c(&format!("c{k}"))
    }
}

/// Weights `(a0, a1, a2)` of a weighted projective plane; `a2` is always 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weights {
    pub a0: u32,
    pub a1: u32,
    pub a2: u32,
}

impl Weights {
    /// Positive weights with `a2 = 1` (which makes `gcd(a0, a1, a2) = 1`).
    pub fn new(a0: u32, a1: u32, a2: u32) -> Result<Self> {
        let bad = |reason| Err(Error::InvalidWeights { a0, a1, a2, reason });
        if a0 == 0 || a1 == 0 || a2 == 0 {
            return bad("weights must be positive");
        }
        if a2 != 1 {
            return bad("the affine coordinate must have weight 1");
        }
        if gcd(gcd(a0, a1), a2) != 1 {
            return bad("weights must be coprime");
        }
        Ok(Weights { a0, a1, a2 })
    }

    pub fn projective() -> Self {
        Weights { a0: 1, a1: 1, a2: 1 }
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a0, self.a1, self.a2)
    }
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The weighted projective plane each family is extended to.
pub fn assigned_weights(id: &FamilyId) -> Weights {
    match id.kind {
        Kind::D => Weights::new(id.n.unwrap() - 2, 2, 1).unwrap(),
        Kind::E7 | Kind::E8 => Weights::new(3, 2, 1).unwrap(),
        Kind::A | Kind::E6 | Kind::EllipticUmbilic | Kind::HyperbolicUmbilic => {
            Weights::projective()
        }
    }
}

/// A plane map `f_c = (f1, f2)` with its parameters bound.
#[derive(Debug, Clone)]
pub struct PlaneMap {
    family: FamilyId,
    params: ParamVector,
    f1: BiPoly,
    f2: BiPoly,
    weights: Weights,
    d1: u32,
    d2: u32,
    jac: [BiPoly; 4],
    jac_scale: f64,
}

impl PlaneMap {
    /// Builds a map from explicit components. Degrees are taken under the
    /// family's assigned weights.
    pub fn from_components(family: FamilyId, params: ParamVector, f1: BiPoly, f2: BiPoly) -> Self {
        let weights = assigned_weights(&family);
        let d1 = f1.weighted_degree(weights.a0, weights.a1).unwrap_or(0);
        let d2 = f2.weighted_degree(weights.a0, weights.a1).unwrap_or(0);
        let jac = [
            f1.partial(Var::X),
            f1.partial(Var::Y),
            f2.partial(Var::X),
            f2.partial(Var::Y),
        ];
        let mut m = PlaneMap {
            family,
            params,
            f1,
            f2,
            weights,
            d1,
            d2,
            jac,
            jac_scale: 1.0,
        };
        m.jac_scale = m.unit_box_jacobian_scale();
        m
    }

    pub fn family(&self) -> &FamilyId {
        &self.family
    }

    pub fn params(&self) -> &ParamVector {
        &self.params
    }

    pub fn f1(&self) -> &BiPoly {
        &self.f1
    }

    pub fn f2(&self) -> &BiPoly {
        &self.f2
    }

    pub fn weights(&self) -> Weights {
        self.weights
    }

    /// Weighted degrees `(d1, d2)` under the assigned weights.
    pub fn degrees(&self) -> (u32, u32) {
        (self.d1, self.d2)
    }

    /// `d1 d2 / (a0 a1)`, the generic number of pre-images.
    pub fn bezout_count(&self) -> u32 {
        self.d1 * self.d2 / (self.weights.a0 * self.weights.a1)
    }

    /// Median of the non-zero `|det Jac|` on a 17x17 grid over `[-1, 1]^2`.
    pub fn jacobian_scale(&self) -> f64 {
        self.jac_scale
    }

    /// Variable eliminated first when solving `f = s`: `y` for `A_n`, whose
    /// second component has no `x`; `x` for everything else.
    pub fn elimination_var(&self) -> Var {
        match self.family.kind {
            Kind::A => Var::Y,
            _ => Var::X,
        }
    }

    pub fn is_real(&self) -> bool {
        self.params.is_real()
    }

    pub fn eval(&self, x: C64, y: C64) -> (C64, C64) {
        (self.f1.eval(x, y), self.f2.eval(x, y))
    }

    /// `[[df1/dx, df1/dy], [df2/dx, df2/dy]]`.
    pub fn jacobian(&self, x: C64, y: C64) -> [[C64; 2]; 2] {
        [
            [self.jac[0].eval(x, y), self.jac[1].eval(x, y)],
            [self.jac[2].eval(x, y), self.jac[3].eval(x, y)],
        ]
    }

    pub fn jacobian_det(&self, x: C64, y: C64) -> C64 {
        let j = self.jacobian(x, y);
        j[0][0] * j[1][1] - j[0][1] * j[1][0]
    }

    /// `det Jac` as a polynomial.
    pub fn jacobian_det_poly(&self) -> BiPoly {
        &(&self.jac[0] * &self.jac[3]) - &(&self.jac[1] * &self.jac[2])
    }

    fn unit_box_jacobian_scale(&self) -> f64 {
        const N: usize = 17;
        let mut vals: Vec<f64> = Vec::with_capacity(N * N);
        for i in 0..N {
            for j in 0..N {
                let x = -1.0 + 2.0 * i as f64 / (N - 1) as f64;
                let y = -1.0 + 2.0 * j as f64 / (N - 1) as f64;
                let v = self.jacobian_det(C64::new(x, 0.0), C64::new(y, 0.0)).norm();
                if v > 0.0 {
                    vals.push(v);
                }
            }
        }
        if vals.is_empty() {
            return 1.0;
        }
        vals.sort_by(f64::total_cmp);
        vals[vals.len() / 2]
    }
}

fn re(v: f64) -> C64 {
    C64::new(v, 0.0)
}

/// The induced map `f_c` of a family.
pub fn build_family(id: &FamilyId, params: &ParamVector) -> Result<PlaneMap> {
    params.validate(id)?;
    let p = params;
    let (f1, f2) = match id.kind {
        Kind::A => {
            let n = id.n.unwrap();
            let mut f1 = BiPoly::monomial(n, 0, re(id.sign(0) * (n + 1) as f64));
            for k in 3..n {
                f1.add_term(k - 1, 0, p.ck(k) * k as f64);
            }
            if !id.legacy_fold {
                f1.add_term(1, 1, re(-4.0));
            }
            let f2 = BiPoly::monomial(0, 1, re(-2.0 * id.sign(1)));
            (f1, f2)
        }
        Kind::D => {
            let n = id.n.unwrap();
            let f1 = BiPoly::monomial(1, 1, re(2.0));
            let mut f2 = BiPoly::monomial(2, 0, re(1.0));
            f2.add_term(0, n - 2, re(id.sign(0) * (n - 1) as f64));
            for k in 2..=(n - 2) {
                f2.add_term(0, k - 1, p.ck(k) * k as f64);
            }
            (f1, f2)
        }
        Kind::E6 => {
            let (c1, c2, c3) = (p.ck(1), p.ck(2), p.ck(3));
            let f1 = BiPoly::from_terms([(2, 0, re(3.0)), (0, 2, c3), (0, 1, c1)]);
            let f2 = BiPoly::from_terms([
                (0, 3, re(4.0 * id.sign(0))),
                (1, 1, c3 * 2.0),
                (0, 1, c2 * 2.0),
                (1, 0, c1),
            ]);
            (f1, f2)
        }
        Kind::E7 => {
            let (c1, c2, c3, c4) = (p.ck(1), p.ck(2), p.ck(3), p.ck(4));
            let f1 = BiPoly::from_terms([(2, 0, re(3.0)), (0, 3, re(1.0)), (0, 1, c1)]);
            let f2 = BiPoly::from_terms([
                (1, 2, re(3.0)),
                (0, 3, c4 * 4.0),
                (0, 2, c3 * 3.0),
                (0, 1, c2 * 2.0),
                (1, 0, c1),
            ]);
            (f1, f2)
        }
        Kind::E8 => {
            let (c1, c2, c3, c4, c5) = (p.ck(1), p.ck(2), p.ck(3), p.ck(4), p.ck(5));
            let f1 = BiPoly::from_terms([(2, 0, re(3.0)), (0, 3, c5), (0, 2, c4), (0, 1, c1)]);
            let f2 = BiPoly::from_terms([
                (0, 4, re(5.0)),
                (1, 2, c5 * 3.0),
                (1, 1, c4 * 2.0),
                (0, 2, c3 * 3.0),
                (0, 1, c2 * 2.0),
                (1, 0, c1),
            ]);
            (f1, f2)
        }
        Kind::EllipticUmbilic => {
            let c = p.c("c");
            let f1 = BiPoly::from_terms([(2, 0, re(1.0)), (0, 2, re(-1.0))]);
            let f2 = BiPoly::from_terms([(1, 1, re(-2.0)), (0, 1, c * 4.0)]);
            (f1, f2)
        }
        Kind::HyperbolicUmbilic => {
            let c = p.c("c");
            let f1 = BiPoly::from_terms([(2, 0, re(1.0)), (0, 1, c * 2.0)]);
            let f2 = BiPoly::from_terms([(0, 2, re(1.0)), (1, 0, c * 2.0)]);
            (f1, f2)
        }
    };
    Ok(PlaneMap::from_components(id.clone(), params.clone(), f1, f2))
}

/// The generating function `F_{c,s}` (time-delay function `T_{c,s}` for the
/// lensing maps) with the target bound. Constant terms are omitted except the
/// `|s|^2 / 2` of the time-delay functions.
pub fn generating_function(id: &FamilyId, params: &ParamVector, s: TargetPoint) -> Result<BiPoly> {
    params.validate(id)?;
    let p = params;
    let (s1, s2) = (s.s1, s.s2);
    let third = re(1.0 / 3.0);
    let f = match id.kind {
        Kind::A => {
            let n = id.n.unwrap();
            let (sx, sy) = (id.sign(0), id.sign(1));
            let mut f = BiPoly::from_terms([
                (n + 1, 0, re(sx)),
                (0, 2, re(sy)),
                (1, 0, -s1),
                (0, 1, s2),
            ]);
            for k in 3..n {
                f.add_term(k, 0, p.ck(k));
            }
            if !id.legacy_fold {
                f.add_term(2, 0, s2 * sy);
            }
            f
        }
        Kind::D => {
            let n = id.n.unwrap();
            let mut f = BiPoly::from_terms([
                (2, 1, re(1.0)),
                (0, n - 1, re(id.sign(0))),
                (0, 1, -s2),
                (1, 0, -s1),
            ]);
            for k in 2..=(n - 2) {
                f.add_term(0, k, p.ck(k));
            }
            f
        }
        Kind::E6 => BiPoly::from_terms([
            (3, 0, re(1.0)),
            (0, 4, re(id.sign(0))),
            (1, 2, p.ck(3)),
            (0, 2, p.ck(2)),
            (1, 1, p.ck(1)),
            (0, 1, -s2),
            (1, 0, -s1),
        ]),
        Kind::E7 => BiPoly::from_terms([
            (3, 0, re(1.0)),
            (1, 3, re(1.0)),
            (0, 4, p.ck(4)),
            (0, 3, p.ck(3)),
            (0, 2, p.ck(2)),
            (1, 1, p.ck(1)),
            (0, 1, -s2),
            (1, 0, -s1),
        ]),
        Kind::E8 => BiPoly::from_terms([
            (3, 0, re(1.0)),
            (0, 5, re(1.0)),
            (1, 3, p.ck(5)),
            (1, 2, p.ck(4)),
            (0, 3, p.ck(3)),
            (0, 2, p.ck(2)),
            (1, 1, p.ck(1)),
            (0, 1, -s2),
            (1, 0, -s1),
        ]),
        Kind::EllipticUmbilic => BiPoly::from_terms([
            (0, 0, (s1 * s1 + s2 * s2) * 0.5),
            (1, 0, -s1),
            (0, 1, -s2),
            (3, 0, third),
            (1, 2, re(-1.0)),
            (0, 2, p.c("c") * 2.0),
        ]),
        Kind::HyperbolicUmbilic => BiPoly::from_terms([
            (0, 0, (s1 * s1 + s2 * s2) * 0.5),
            (1, 0, -s1),
            (0, 1, -s2),
            (3, 0, third),
            (0, 3, third),
            (1, 1, p.c("c") * 2.0),
        ]),
    };
    Ok(f)
}

/// `F_xx F_yy - F_xy^2` at a point.
pub fn hessian_det(f: &BiPoly, x: C64, y: C64) -> C64 {
    let fx = f.partial(Var::X);
    let fy = f.partial(Var::Y);
    let fxx = fx.partial(Var::X).eval(x, y);
    let fxy = fx.partial(Var::Y).eval(x, y);
    let fyy = fy.partial(Var::Y).eval(x, y);
    fxx * fyy - fxy * fxy
}

/// Every family of the normal-form tables with the index range used by the
/// acceptance checks: `A_2..A_8` with signs `(+,+)`, `D_4..D_8` with both
/// signs, `E6±`, `E7`, `E8` and the two lensing maps.
pub fn standard_families() -> Vec<FamilyId> {
    let mut out = Vec::new();
    for n in 2..=8 {
        out.push(FamilyId::a(n, Sign::Plus, Sign::Plus).unwrap());
    }
    for n in 4..=8 {
        for s in [Sign::Plus, Sign::Minus] {
            out.push(FamilyId::d(n, s).unwrap());
        }
    }
    out.push(FamilyId::e6(Sign::Plus));
    out.push(FamilyId::e6(Sign::Minus));
    out.push(FamilyId::e7());
    out.push(FamilyId::e8());
    out.push(FamilyId::elliptic_umbilic());
    out.push(FamilyId::hyperbolic_umbilic());
    out
}

//! Elimination by Sylvester resultant.
//!
//! The resultant is a polynomial in the surviving variable. It is recovered
//! by evaluating the Sylvester determinant at roots of unity and inverting
//! the discrete Fourier transform, which is exact up to rounding because the
//! degree bound is known in advance.

use std::f64::consts::TAU;

use super::{BiPoly, UniPoly, Var};
use crate::error::{Error, Result};
use crate::C64;

/// Coefficients of the eliminated variable smaller than this (relative to the
/// largest coefficient of the polynomial) are treated as vanishing.
const VANISHING_LEAD: f64 = 1e-12;

/// `Res(p, q; eliminate)` as a polynomial in the other variable.
///
/// A coefficient of the eliminated variable that is zero only numerically is
/// dropped (with a warning) before the Sylvester matrix is formed.
pub fn resultant_eliminate(p: &BiPoly, q: &BiPoly, eliminate: Var) -> Result<UniPoly> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let pc = trimmed_coeffs(p, eliminate);
    let qc = trimmed_coeffs(q, eliminate);
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    if m == 0 && n == 0 {
        return Err(Error::BothConstantInVar);
    }

    let max_deg = |cs: &[UniPoly]| cs.iter().filter_map(|c| c.degree()).max().unwrap_or(0);
    let bound = n * max_deg(&pc) + m * max_deg(&qc);
    let samples = bound + 1;

    let mut values = Vec::with_capacity(samples);
    let mut noise: f64 = 0.0;
    let size = m + n;
    let mut mat = vec![vec![C64::new(0.0, 0.0); size]; size];
    for k in 0..samples {
        let t = C64::from_polar(1.0, TAU * k as f64 / samples as f64);
        let a: Vec<C64> = pc.iter().map(|c| c.eval(t)).collect();
        let b: Vec<C64> = qc.iter().map(|c| c.eval(t)).collect();
        fill_sylvester(&mut mat, &a, &b);
        let hadamard: f64 = mat
            .iter()
            .map(|row| row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .product();
        noise = noise.max(hadamard);
        values.push(det_lu(&mut mat));
    }

    // inverse DFT on the unit circle
    let mut coeffs = vec![C64::new(0.0, 0.0); samples];
    for (j, cj) in coeffs.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (k, v) in values.iter().enumerate() {
            let idx = (j * k) % samples;
            acc += v * C64::from_polar(1.0, -TAU * idx as f64 / samples as f64);
        }
        *cj = acc / samples as f64;
    }

    let floor = 64.0 * (size.max(1) as f64) * f64::EPSILON * noise;
    while coeffs.last().is_some_and(|c| c.norm() <= floor) {
        coeffs.pop();
    }
    Ok(UniPoly::new(coeffs))
}

fn trimmed_coeffs(p: &BiPoly, var: Var) -> Vec<UniPoly> {
    let mut cs = p.coeffs_in(var);
    let scale = p.max_abs_coeff();
    while cs.len() > 1 {
        let lead = cs.last().unwrap();
        if lead.is_zero() {
            cs.pop();
        } else if lead.max_abs_coeff() < VANISHING_LEAD * scale {
            log::warn!(
                "leading coefficient in {var:?} vanishes numerically ({:e}); dropping it",
                lead.max_abs_coeff()
            );
            cs.pop();
        } else {
            break;
        }
    }
    cs
}

/// Rows `0..n` carry `a` (degree `m`), rows `n..n+m` carry `b` (degree `n`),
/// highest coefficient first.
fn fill_sylvester(mat: &mut [Vec<C64>], a: &[C64], b: &[C64]) {
    let m = a.len() - 1;
    let n = b.len() - 1;
    for row in mat.iter_mut() {
        row.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
    }
    for r in 0..n {
        for (k, &ak) in a.iter().rev().enumerate() {
            mat[r][r + k] = ak;
        }
    }
    for r in 0..m {
        for (k, &bk) in b.iter().rev().enumerate() {
            mat[n + r][r + k] = bk;
        }
    }
}

/// Determinant by LU with partial pivoting. The matrix is overwritten.
pub fn det_lu(mat: &mut [Vec<C64>]) -> C64 {
    let n = mat.len();
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| mat[i][col].norm().total_cmp(&mat[j][col].norm()))
            .unwrap();
        if mat[pivot][col].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if pivot != col {
            mat.swap(pivot, col);
            det = -det;
        }
        let d = mat[col][col];
        det *= d;
        for r in (col + 1)..n {
            let f = mat[r][col] / d;
            if f.norm() == 0.0 {
                continue;
            }
            for c in col..n {
                let v = mat[col][c];
                mat[r][c] -= f * v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    /// Independent route: `Res(p, q) = lc(p)^n * prod q(root_i of p)`.
    fn product_formula(pc: &[C64], roots: &[C64], q_at: impl Fn(C64) -> C64, n: usize) -> C64 {
        let lead = *pc.last().unwrap();
        let mut acc = lead.powu(n as u32);
        for &r in roots {
            acc *= q_at(r);
        }
        acc
    }

    #[test]
    fn linear_pair() {
        // p = x - a, q = x - b with a = y, b = 2: Res = a - b = y - 2
        let p = BiPoly::from_real_terms([(1, 0, 1.0), (0, 1, -1.0)]);
        let q = BiPoly::from_real_terms([(1, 0, 1.0), (0, 0, -2.0)]);
        let r = resultant_eliminate(&p, &q, Var::X).unwrap();
        assert_eq!(r.degree(), Some(1));
        assert!((r.coeffs()[0] - c(-2.0)).norm() < 1e-14);
        assert!((r.coeffs()[1] - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn d5_elimination_matches_hand_expansion() {
        let (s1, s2) = (1.0, 1.0);
        let p = BiPoly::from_real_terms([(1, 1, 2.0), (0, 0, -s1)]);
        let q = BiPoly::from_real_terms([(2, 0, 1.0), (0, 3, 4.0), (0, 0, -s2)]);
        let r = resultant_eliminate(&p, &q, Var::X).unwrap();
        let expected = [s1 * s1, 0.0, -4.0 * s2, 0.0, 0.0, 16.0];
        assert_eq!(r.degree(), Some(5));
        for (got, want) in r.coeffs().iter().zip(expected) {
            assert!((got - c(want)).norm() < 1e-12, "{got} vs {want}");
        }
        // brute-force oracle on sampled y: the x-root of p is s1/(2y)
        for y in [0.3, -1.7, 2.2] {
            let x = s1 / (2.0 * y);
            let want = (2.0 * y).powi(2) * (x * x + 4.0 * y.powi(3) - s2);
            assert!((r.eval(c(y)) - c(want)).norm() < 1e-10);
        }
    }

    #[test]
    fn self_resultant_vanishes() {
        let p = BiPoly::from_real_terms([(2, 0, 1.0), (1, 1, -3.0), (0, 2, 1.0), (0, 0, 2.0)]);
        let r = resultant_eliminate(&p, &p, Var::X).unwrap();
        assert!(r.is_zero() || r.max_abs_coeff() < 1e-12);
    }

    #[test]
    fn both_constant_is_an_error() {
        let p = BiPoly::from_real_terms([(0, 2, 1.0)]);
        let q = BiPoly::from_real_terms([(0, 1, 1.0), (0, 0, 1.0)]);
        assert_eq!(resultant_eliminate(&p, &q, Var::X), Err(Error::BothConstantInVar));
    }

    #[test]
    fn matches_product_formula_at_sample_points() {
        // p = x^2 + y x - 1, q = x^3 - 2y^2 + x
        let p = BiPoly::from_real_terms([(2, 0, 1.0), (1, 1, 1.0), (0, 0, -1.0)]);
        let q = BiPoly::from_real_terms([(3, 0, 1.0), (0, 2, -2.0), (1, 0, 1.0)]);
        let r = resultant_eliminate(&p, &q, Var::X).unwrap();
        for y in [c(0.5), C64::new(-1.0, 0.7), c(2.5)] {
            let pu = p.substitute(Var::Y, y);
            let disc = (pu.coeffs()[1] * pu.coeffs()[1] - 4.0 * pu.coeffs()[0] * pu.coeffs()[2]).sqrt();
            let roots = [(-pu.coeffs()[1] + disc) / 2.0, (-pu.coeffs()[1] - disc) / 2.0];
            let want = product_formula(pu.coeffs(), &roots, |x| q.eval(x, y), 3);
            assert!((r.eval(y) - want).norm() < 1e-9 * (1.0 + want.norm()), "{} vs {}", r.eval(y), want);
        }
    }

    #[test]
    fn lu_determinant() {
        let mut m = vec![
            vec![c(2.0), c(1.0), c(0.0)],
            vec![c(1.0), c(3.0), c(1.0)],
            vec![c(0.0), c(1.0), c(4.0)],
        ];
        assert!((det_lu(&mut m) - c(18.0)).norm() < 1e-13);
    }
}

//! Critical curves, caustics and image-count maps of target space.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{build_family, FamilyId, ParamVector, PlaneMap};
use crate::error::{Error, Result};
use crate::poly::{BiPoly, Var};
use crate::solver::{preimages_with, SolveOptions, SumMode, TargetPoint};
use crate::C64;

/// Points kept on a critical curve satisfy `|det Jac| <= CRITICAL_TOL`.
pub const CRITICAL_TOL: f64 = 1e-8;
/// Cells whose smallest `|det Jac|` over pre-images is below this are flagged.
pub const NEAR_CAUSTIC_JAC: f64 = 1e-5;
pub const MIN_RESOLUTION: usize = 16;
const REFINE_STEPS: usize = 5;
const REFINE_MAX_STEPS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl BBox {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self> {
        let b = BBox { xmin, xmax, ymin, ymax };
        if ![xmin, xmax, ymin, ymax].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidGrid("box bounds must be finite"));
        }
        if xmin >= xmax || ymin >= ymax {
            return Err(Error::InvalidGrid("box must have positive width and height"));
        }
        Ok(b)
    }

    /// `[-r, r]^2`.
    pub fn square(r: f64) -> Result<Self> {
        Self::new(-r, r, -r, r)
    }

    /// Default pre-image box `[-4, 4]^2`.
    pub fn default_preimage() -> Self {
        Self::square(4.0).unwrap()
    }

    /// Default target box `[-6, 6]^2`.
    pub fn default_target() -> Self {
        Self::square(6.0).unwrap()
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.xmin..=self.xmax).contains(&x) && (self.ymin..=self.ymax).contains(&y)
    }

    /// Smallest box holding `points`, grown by `margin` times its size on
    /// every side. `None` for an empty or single-point set.
    pub fn around(points: &[(f64, f64)], margin: f64) -> Option<Self> {
        let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in points {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
        let (dx, dy) = ((xmax - xmin) * margin, (ymax - ymin) * margin);
        Self::new(xmin - dx, xmax + dx, ymin - dy, ymax + dy).ok()
    }
}

/// Critical points ordered along polylines and their caustic images.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausticSample {
    pub params: ParamVector,
    /// Value of the swept parameter, if this sample is part of a sweep.
    pub parameter: Option<f64>,
    pub critical_points: Vec<(f64, f64)>,
    pub caustic_points: Vec<(f64, f64)>,
    /// `det Jac` at each critical point after refinement.
    pub det_jac: Vec<f64>,
    /// Index of the first point of each polyline.
    pub polyline_starts: Vec<usize>,
}

impl CausticSample {
    pub fn len(&self) -> usize {
        self.critical_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.critical_points.is_empty()
    }

    /// Points of each polyline as index ranges.
    pub fn polylines(&self) -> Vec<std::ops::Range<usize>> {
        let mut ends: Vec<usize> = self.polyline_starts.iter().skip(1).copied().collect();
        ends.push(self.len());
        self.polyline_starts.iter().zip(ends).map(|(&a, b)| a..b).collect()
    }
}

/// The real function `det Jac` with its gradient.
struct DetField {
    g: BiPoly,
    gx: BiPoly,
    gy: BiPoly,
}

impl DetField {
    fn new(m: &PlaneMap) -> Self {
        let g = m.jacobian_det_poly();
        DetField {
            gx: g.partial(Var::X),
            gy: g.partial(Var::Y),
            g,
        }
    }

    fn value(&self, x: f64, y: f64) -> f64 {
        self.g.eval(C64::new(x, 0.0), C64::new(y, 0.0)).re
    }

    fn grad(&self, x: f64, y: f64) -> (f64, f64) {
        let (xc, yc) = (C64::new(x, 0.0), C64::new(y, 0.0));
        (self.gx.eval(xc, yc).re, self.gy.eval(xc, yc).re)
    }

    /// Newton steps along the gradient onto `g = 0`.
    fn refine(&self, mut x: f64, mut y: f64) -> (f64, f64, f64) {
        let mut v = self.value(x, y);
        for step in 0..REFINE_MAX_STEPS {
            if step >= REFINE_STEPS && v.abs() <= CRITICAL_TOL * 1e-4 {
                break;
            }
            let (gx, gy) = self.grad(x, y);
            let n2 = gx * gx + gy * gy;
            if n2 == 0.0 || !n2.is_finite() {
                break;
            }
            let (nx, ny) = (x - v * gx / n2, y - v * gy / n2);
            let nv = self.value(nx, ny);
            if !nv.is_finite() {
                break;
            }
            (x, y, v) = (nx, ny, nv);
        }
        (x, y, v)
    }
}

/// Grid of `(res + 1)^2` vertices over `bbox`.
struct Grid {
    bbox: BBox,
    res: usize,
}

impl Grid {
    fn point(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.bbox.xmin + self.bbox.width() * i as f64 / self.res as f64,
            self.bbox.ymin + self.bbox.height() * j as f64 / self.res as f64,
        )
    }
}

/// Edge keys: `(i, j, 0)` from vertex `(i, j)` to `(i + 1, j)`, `(i, j, 1)`
/// from `(i, j)` to `(i, j + 1)`.
type EdgeKey = (usize, usize, u8);

fn check_grid(bbox: &BBox, res: usize) -> Result<()> {
    BBox::new(bbox.xmin, bbox.xmax, bbox.ymin, bbox.ymax)?;
    if res < MIN_RESOLUTION {
        return Err(Error::InvalidGrid("resolution must be at least 16"));
    }
    Ok(())
}

/// Zero set of `det Jac` in `bbox` by marching squares with each vertex
/// refined onto the curve.
pub fn critical_curve(m: &PlaneMap, bbox: BBox, res: usize) -> Result<CausticSample> {
    check_grid(&bbox, res)?;
    if !m.is_real() {
        return Err(Error::InvalidGrid("critical curves need real parameters"));
    }
    let field = DetField::new(m);
    let grid = Grid { bbox, res };
    let n = res + 1;
    let mut vals = vec![0.0; n * n];
    for j in 0..n {
        for i in 0..n {
            let (x, y) = grid.point(i, j);
            vals[j * n + i] = field.value(x, y);
        }
    }
    let val = |i: usize, j: usize| vals[j * n + i];
    let pos = |v: f64| v > 0.0;

    // Segments as pairs of crossed edges.
    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for j in 0..res {
        for i in 0..res {
            let corners = [val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)];
            let case = corners
                .iter()
                .enumerate()
                .fold(0u8, |acc, (k, &v)| acc | ((pos(v) as u8) << k));
            let bottom = (i, j, 0);
            let right = (i + 1, j, 1);
            let top = (i, j + 1, 0);
            let left = (i, j, 1);
            let center_pos = pos(corners.iter().sum::<f64>() / 4.0);
            match case {
                0 | 15 => {}
                1 | 14 => segments.push((left, bottom)),
                2 | 13 => segments.push((bottom, right)),
                3 | 12 => segments.push((left, right)),
                4 | 11 => segments.push((right, top)),
                6 | 9 => segments.push((bottom, top)),
                7 | 8 => segments.push((left, top)),
                5 => {
                    if center_pos {
                        segments.push((left, top));
                        segments.push((bottom, right));
                    } else {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    }
                }
                10 => {
                    if center_pos {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    } else {
                        segments.push((left, top));
                        segments.push((bottom, right));
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    if segments.is_empty() {
        return Err(Error::EmptyCriticalSet);
    }

    let crossing = |e: EdgeKey| -> (f64, f64) {
        let (i, j, dir) = e;
        let (i2, j2) = if dir == 0 { (i + 1, j) } else { (i, j + 1) };
        let (v1, v2) = (val(i, j), val(i2, j2));
        let t = if v1 == v2 { 0.5 } else { v1 / (v1 - v2) };
        let (x1, y1) = grid.point(i, j);
        let (x2, y2) = grid.point(i2, j2);
        (x1 + t * (x2 - x1), y1 + t * (y2 - y1))
    };

    let chains = chain_segments(&segments);
    let mut sample = CausticSample {
        params: m.params().clone(),
        parameter: None,
        critical_points: Vec::new(),
        caustic_points: Vec::new(),
        det_jac: Vec::new(),
        polyline_starts: Vec::new(),
    };
    let mut dropped = 0usize;
    for chain in chains {
        let start = sample.critical_points.len();
        for e in chain {
            let (x0, y0) = crossing(e);
            let (x, y, v) = field.refine(x0, y0);
            if v.abs() > CRITICAL_TOL || !x.is_finite() || !y.is_finite() {
                dropped += 1;
                continue;
            }
            let (s1, s2) = m.eval(C64::new(x, 0.0), C64::new(y, 0.0));
            sample.critical_points.push((x, y));
            sample.caustic_points.push((s1.re, s2.re));
            sample.det_jac.push(v);
        }
        if sample.critical_points.len() > start {
            sample.polyline_starts.push(start);
        }
    }
    if dropped > 0 {
        log::debug!("{dropped} contour vertices did not refine onto det Jac = 0");
    }
    if sample.is_empty() {
        return Err(Error::EmptyCriticalSet);
    }
    Ok(sample)
}

/// Joins segments sharing an edge into maximal polylines of edge keys.
fn chain_segments(segments: &[(EdgeKey, EdgeKey)]) -> Vec<Vec<EdgeKey>> {
    let mut at: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (k, &(a, b)) in segments.iter().enumerate() {
        at.entry(a).or_default().push(k);
        at.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut chains = Vec::new();
    let next_from = |e: EdgeKey, used: &[bool]| at[&e].iter().copied().find(|&k| !used[k]);
    // Open chains start at edges touched by a single segment.
    let mut order: Vec<usize> = (0..segments.len()).collect();
    order.sort_by_key(|&k| {
        let (a, b) = segments[k];
        let open = at[&a].len() == 1 || at[&b].len() == 1;
        (!open, k)
    });
    for k0 in order {
        if used[k0] {
            continue;
        }
        used[k0] = true;
        let (a, b) = segments[k0];
        let (mut head, mut tail) = if at[&b].len() == 1 { (b, a) } else { (a, b) };
        let mut chain = vec![head, tail];
        while let Some(k) = next_from(tail, &used) {
            used[k] = true;
            let (p, q) = segments[k];
            let nxt = if p == tail { q } else { p };
            chain.push(nxt);
            tail = nxt;
        }
        // Extend backwards for chains that started mid-curve.
        let mut back = Vec::new();
        while let Some(k) = next_from(head, &used) {
            used[k] = true;
            let (p, q) = segments[k];
            let nxt = if p == head { q } else { p };
            back.push(nxt);
            head = nxt;
        }
        if !back.is_empty() {
            back.reverse();
            back.extend(chain);
            chain = back;
        }
        chains.push(chain);
    }
    chains
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionCell {
    pub s1: f64,
    pub s2: f64,
    /// Real pre-images; meaningless when `flagged`.
    pub real_count: u32,
    /// Sum of magnifications over real pre-images.
    pub real_sum: f64,
    /// Sum over all complex pre-images.
    #[serde(with = "crate::complex_serde")]
    pub complex_sum: C64,
    /// Largest `|M|` among real pre-images.
    pub max_real_magnification: f64,
    pub min_abs_jac: f64,
    /// Near-caustic or failed cell.
    pub flagged: bool,
}

/// Per-cell image counts over a target box, in row-major order
/// (`s2` rows from the bottom, `s1` columns from the left).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMap {
    pub family: FamilyId,
    pub params: ParamVector,
    pub bbox: BBox,
    pub resolution: usize,
    pub bezout_expected: usize,
    pub cells: Vec<RegionCell>,
}

impl RegionMap {
    pub fn cell(&self, col: usize, row: usize) -> &RegionCell {
        &self.cells[row * self.resolution + col]
    }

    /// Unflagged cells with exactly `k` real pre-images.
    pub fn count_cells(&self, k: u32) -> usize {
        self.cells.iter().filter(|c| !c.flagged && c.real_count == k).count()
    }

    pub fn sum(&self, cell: &RegionCell, mode: SumMode) -> C64 {
        match mode {
            SumMode::RealOnly => C64::new(cell.real_sum, 0.0),
            SumMode::AllComplex => cell.complex_sum,
        }
    }
}

/// Solves at every cell center of a `resolution x resolution` grid over
/// `target_bbox`.
pub fn classify_regions(m: &PlaneMap, target_bbox: BBox, resolution: usize) -> Result<RegionMap> {
    check_grid(&target_bbox, resolution)?;
    let res = resolution;
    let dx = target_bbox.width() / res as f64;
    let dy = target_bbox.height() / res as f64;
    let opts = SolveOptions {
        lenient: true,
        ..SolveOptions::default()
    };
    let expected = m.bezout_count() as usize;
    let cells: Vec<RegionCell> = (0..res * res)
        .into_par_iter()
        .map(|k| {
            let (row, col) = (k / res, k % res);
            let s1 = target_bbox.xmin + (col as f64 + 0.5) * dx;
            let s2 = target_bbox.ymin + (row as f64 + 0.5) * dy;
            let mut cell = RegionCell {
                s1,
                s2,
                real_count: 0,
                real_sum: 0.0,
                complex_sum: C64::new(0.0, 0.0),
                max_real_magnification: 0.0,
                min_abs_jac: 0.0,
                flagged: true,
            };
            match preimages_with(m, TargetPoint::new(s1, s2), &opts) {
                Ok(ps) => {
                    let real: Vec<_> = ps.preimages.iter().filter(|p| p.is_real).collect();
                    cell.real_count = real.len() as u32;
                    cell.real_sum = real.iter().map(|p| p.magnification.re).sum();
                    cell.max_real_magnification = real.iter().map(|p| p.magnification.norm()).fold(0.0, f64::max);
                    cell.complex_sum = ps.preimages.iter().map(|p| p.magnification).sum();
                    cell.min_abs_jac = ps.min_abs_jac();
                    cell.flagged = ps.len() != expected || cell.min_abs_jac < NEAR_CAUSTIC_JAC;
                }
                Err(e) => log::debug!("cell ({s1}, {s2}): {e}"),
            }
            cell
        })
        .collect();
    Ok(RegionMap {
        family: m.family().clone(),
        params: m.params().clone(),
        bbox: target_bbox,
        resolution: res,
        bezout_expected: expected,
        cells,
    })
}

/// Evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
            .collect(),
    }
}

/// Critical curves and caustics while one parameter runs over `range`, the
/// others frozen at `base`. Each step succeeds or fails on its own.
pub fn caustic_metamorphosis_sweep(
    id: &FamilyId,
    base: &ParamVector,
    param: &str,
    range: (f64, f64),
    steps: usize,
    bbox: BBox,
    resolution: usize,
) -> Result<Vec<Result<CausticSample>>> {
    check_grid(&bbox, resolution)?;
    if !id.param_names().iter().any(|n| n == param) {
        return Err(Error::ExtraParam(param.to_string()));
    }
    let values = linspace(range.0, range.1, steps);
    let mut probe = base.clone();
    probe.set(param, values.first().copied().unwrap_or(range.0));
    probe.validate(id)?;
    Ok(values
        .par_iter()
        .map(|&v| {
            let mut p = base.clone();
            p.set(param, v);
            let m = build_family(id, &p)?;
            let mut sample = critical_curve(&m, bbox, resolution)?;
            sample.parameter = Some(v);
            Ok(sample)
        })
        .collect())
}

//! `caustica` command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use caustica::catalog::standard_families;
use caustica::caustic::{caustic_metamorphosis_sweep, classify_regions, critical_curve, BBox, CausticSample, RegionMap};
use caustica::residue::{report_from, ResidueReport};
use caustica::sampling::{noncaustic_target, random_params, random_target};
use caustica::solver::{preimages_with, PreimageSet, SolveOptions};
use caustica::wproj::{homogenize, infinity_line_stabilizer, roots_at_infinity, singular_points, weighted_bezout};
use caustica::{
    assigned_weights, build_family, BiPoly, Error, FamilyId, ParamVector, PlaneMap, TargetPoint, Weights, C64,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const SCHEMA_VERSION: u32 = 1;

mod exit {
    pub const VERIFICATION_FAILED: u8 = 1;
    pub const CAUSTIC_TARGET: u8 = 2;
    pub const DEGENERATE_SYSTEM: u8 = 3;
    pub const IO: u8 = 4;
    pub const USAGE: u8 = 64;
    pub const INTERNAL: u8 = 70;
}

#[derive(Parser, Debug)]
#[command(name = "caustica", version, about = "Pre-images, magnification sums and caustics of A, D, E map families")]
struct Cli {
    /// Seed for every random choice (default parameters and targets).
    #[arg(long, global = true, env = "CAUSTICA_SEED", default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the families with weights, degrees and image counts.
    Families,
    /// All complex pre-images of a target with magnifications.
    Solve {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        target: TargetArgs,
    },
    /// Sum residues over the pre-images and check the vanishing criterion.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        target: TargetArgs,
        /// Numerator h as `i:j:coeff` terms (x^i y^j), comma separated.
        #[arg(long)]
        numerator: Option<String>,
    },
    /// Common roots at infinity and singular points of the weighted plane.
    Infinity {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        target: TargetArgs,
        /// Weights `a0,a1,1`; defaults to the family's assigned weights.
        #[arg(long, value_parser = parse_weights)]
        weights: Option<Weights>,
    },
    /// Critical curve and caustic.
    Caustic {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Real image counts over a grid of targets.
    Regions {
        #[command(flatten)]
        family: FamilyArgs,
        /// Target box `xmin,xmax,ymin,ymax` (default `-6,6,-6,6`).
        #[arg(long, value_parser = parse_bbox, allow_hyphen_values = true)]
        bbox: Option<BBox>,
        #[arg(long, default_value_t = 128)]
        res: usize,
    },
    /// Caustics while one parameter varies.
    Sweep {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Parameter to vary (default `c`).
        #[arg(long, default_value = "c")]
        param: String,
        /// `lo,hi`.
        #[arg(long = "c-range", value_parser = parse_pair, allow_hyphen_values = true, default_value = "0.2,2")]
        c_range: (f64, f64),
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
}

#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    /// Family such as `A3`, `D5-`, `E6+`, `E7`, `elliptic`, `hyperbolic`.
    #[arg(long)]
    family: String,
    /// Index for `A` / `D` when not part of `--family`.
    #[arg(long)]
    n: Option<u32>,
    /// Signs such as `+-`, when not part of `--family`.
    #[arg(long, allow_hyphen_values = true)]
    signs: Option<String>,
    /// `name=value,...`; missing parameters are drawn from [-2, 2].
    #[arg(long, allow_hyphen_values = true)]
    params: Option<String>,
    /// `A_n` without the `-4xy` term.
    #[arg(long)]
    legacy_fold: bool,
    /// Caustic tolerance relative to the family's Jacobian scale.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct TargetArgs {
    /// `s1,s2`; a random non-caustic target in [-5, 5]^2 by default.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    target: Option<(f64, f64)>,
}

#[derive(Args, Debug, Clone)]
struct GridArgs {
    /// Pre-image box `xmin,xmax,ymin,ymax` (default `-4,4,-4,4`).
    #[arg(long, value_parser = parse_bbox, allow_hyphen_values = true)]
    bbox: Option<BBox>,
    #[arg(long, default_value_t = 128)]
    res: usize,
}

fn parse_floats(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated numbers, got {}", v.len()));
    }
    Ok(v)
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let v = parse_floats(s, 2)?;
    Ok((v[0], v[1]))
}

fn parse_bbox(s: &str) -> Result<BBox, String> {
    let v = parse_floats(s, 4)?;
    BBox::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

fn parse_weights(s: &str) -> Result<Weights, String> {
    let v: Vec<u32> = s
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != 3 {
        return Err("expected a0,a1,a2".into());
    }
    Weights::new(v[0], v[1], v[2]).map_err(|e| e.to_string())
}

/// `i:j:coeff,...` into a polynomial.
fn parse_numerator(s: &str) -> Result<BiPoly, String> {
    let mut terms = Vec::new();
    for t in s.split(',') {
        let parts: Vec<&str> = t.trim().split(':').collect();
        let [i, j, rest @ ..] = parts.as_slice() else {
            return Err(format!("term `{t}` is not i:j[:coeff]"));
        };
        let coeff = match rest {
            [] => 1.0,
            [c] => c.parse::<f64>().map_err(|e| e.to_string())?,
            _ => return Err(format!("term `{t}` is not i:j[:coeff]")),
        };
        let i = i.parse::<u32>().map_err(|e| e.to_string())?;
        let j = j.parse::<u32>().map_err(|e| e.to_string())?;
        terms.push((i, j, coeff));
    }
    Ok(BiPoly::from_real_terms(terms))
}

/// Errors that map onto exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
    Io(anyhow::Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownFamily(_)
            | Error::MissingParam(_)
            | Error::ExtraParam(_)
            | Error::InvalidWeights { .. }
            | Error::InvalidGrid(_) => Failure::Usage(e.to_string()),
            e => Failure::Core(e),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => exit::USAGE,
            Failure::Core(Error::CausticTarget { .. }) => exit::CAUSTIC_TARGET,
            Failure::Core(Error::DegenerateSystem { .. }) => exit::DEGENERATE_SYSTEM,
            Failure::Core(_) => exit::INTERNAL,
            Failure::Io(_) => exit::IO,
            Failure::Verification(_) => exit::VERIFICATION_FAILED,
        }
    }
}

type CmdResult<T = ()> = Result<T, Failure>;

struct Ctx {
    seed: u64,
    format: Format,
    out: Option<PathBuf>,
}

impl Ctx {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn emit(&self, body: &str) -> CmdResult {
        let write = || -> anyhow::Result<()> {
            match &self.out {
                Some(p) => {
                    let mut f = BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?);
                    f.write_all(body.as_bytes())?;
                    f.flush()?;
                }
                None => {
                    let mut o = io::stdout().lock();
                    o.write_all(body.as_bytes())?;
                    o.flush()?;
                }
            }
            Ok(())
        };
        write().map_err(Failure::Io)
    }

    fn json<T: Serialize>(&self, body: &T) -> CmdResult {
        #[derive(Serialize)]
        struct Artifact<'a, T> {
            schema_version: u32,
            #[serde(flatten)]
            body: &'a T,
        }
        let mut s = serde_json::to_string_pretty(&Artifact {
            schema_version: SCHEMA_VERSION,
            body,
        })
        .map_err(|e| Failure::Io(e.into()))?;
        s.push('\n');
        self.emit(&s)
    }
}

fn family_id(a: &FamilyArgs) -> CmdResult<FamilyId> {
    let mut spec = a.family.clone();
    if let Some(n) = a.n {
        spec.push_str(&n.to_string());
    }
    if let Some(s) = &a.signs {
        spec.push_str(s);
    }
    let id: FamilyId = spec.parse()?;
    if a.legacy_fold {
        Ok(id.with_legacy_fold()?)
    } else {
        Ok(id)
    }
}

fn params_for(id: &FamilyId, a: &FamilyArgs, rng: &mut ChaCha8Rng) -> CmdResult<ParamVector> {
    let mut p = random_params(id, rng);
    if let Some(s) = &a.params {
        for kv in s.split(',').filter(|t| !t.trim().is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Failure::Usage(format!("parameter `{kv}` is not name=value")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|e| Failure::Usage(format!("parameter `{kv}`: {e}")))?;
            p.set(k.trim(), v);
        }
    }
    p.validate(id)?;
    Ok(p)
}

fn solve_options(a: &FamilyArgs) -> SolveOptions {
    let mut o = SolveOptions::default();
    if let Some(t) = a.tol {
        o.caustic_rel = t;
    }
    o
}

fn setup(a: &FamilyArgs, ctx: &Ctx) -> CmdResult<(PlaneMap, ChaCha8Rng)> {
    let id = family_id(a)?;
    let mut rng = ctx.rng();
    let params = params_for(&id, a, &mut rng)?;
    Ok((build_family(&id, &params)?, rng))
}

fn solve_target(m: &PlaneMap, t: &TargetArgs, opts: &SolveOptions, rng: &mut ChaCha8Rng) -> CmdResult<PreimageSet> {
    match t.target {
        Some((s1, s2)) => Ok(preimages_with(m, TargetPoint::new(s1, s2), opts)?),
        None if *opts == SolveOptions::default() => Ok(noncaustic_target(m, rng)?.1),
        None => Ok(preimages_with(m, random_target(rng), opts)?),
    }
}

fn cmd_families(ctx: &Ctx) -> CmdResult {
    #[derive(Serialize)]
    struct Row {
        family: String,
        params: Vec<String>,
        weights: Weights,
        degrees: (u32, u32),
        bezout_count: u32,
    }
    let rows: Vec<Row> = standard_families()
        .into_iter()
        .map(|id| {
            let zero = id.param_names().iter().fold(ParamVector::new(), |p, n| p.with(n, 0.0));
            let m = build_family(&id, &zero).expect("zero parameters are valid");
            Row {
                family: id.to_string(),
                params: id.param_names(),
                weights: assigned_weights(&id),
                degrees: m.degrees(),
                bezout_count: m.bezout_count(),
            }
        })
        .collect();
    match ctx.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Families<'a> {
                families: &'a [Row],
            }
            ctx.json(&Families { families: &rows })
        }
        Format::Csv => {
            let mut s = String::from("family,params,a0,a1,a2,d1,d2,bezout_count\n");
            for r in &rows {
                s += &format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.family,
                    r.params.join(" "),
                    r.weights.a0,
                    r.weights.a1,
                    r.weights.a2,
                    r.degrees.0,
                    r.degrees.1,
                    r.bezout_count
                );
            }
            ctx.emit(&s)
        }
        Format::Human => {
            let mut s = format!("{:<20} {:<18} {:<9} {:<9} {}\n", "family", "params", "weights", "degrees", "count");
            for r in &rows {
                s += &format!(
                    "{:<20} {:<18} {:<9} {:<9} {}\n",
                    r.family,
                    r.params.join(","),
                    r.weights.to_string(),
                    format!("({},{})", r.degrees.0, r.degrees.1),
                    r.bezout_count
                );
            }
            ctx.emit(&s)
        }
    }
}

fn fmt_c(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn cmd_solve(ctx: &Ctx, fam: &FamilyArgs, target: &TargetArgs) -> CmdResult {
    let (m, mut rng) = setup(fam, ctx)?;
    let ps = solve_target(&m, target, &solve_options(fam), &mut rng)?;
    match ctx.format {
        Format::Json => ctx.json(&ps),
        Format::Csv => {
            let mut s = String::from("index,x_re,x_im,y_re,y_im,magnification_re,magnification_im,det_jac_re,det_jac_im,residual,is_real\n");
            for (k, p) in ps.preimages.iter().enumerate() {
                s += &format!(
                    "{k},{},{},{},{},{},{},{},{},{},{}\n",
                    p.x.re, p.x.im, p.y.re, p.y.im, p.magnification.re, p.magnification.im, p.jac_det.re, p.jac_det.im, p.residual, p.is_real
                );
            }
            ctx.emit(&s)
        }
        Format::Human => {
            let mut s = format!(
                "{} params {:?} target ({}, {}): {} pre-images (expected {})\n",
                ps.family,
                ps.params.iter().map(|(k, v)| format!("{k}={}", fmt_c(v))).collect::<Vec<_>>(),
                fmt_c(ps.target.s1),
                fmt_c(ps.target.s2),
                ps.len(),
                ps.bezout_expected
            );
            for p in &ps.preimages {
                s += &format!(
                    "  x={:<28} y={:<28} M={}{}\n",
                    fmt_c(p.x),
                    fmt_c(p.y),
                    fmt_c(p.magnification),
                    if p.is_real { "  (real)" } else { "" }
                );
            }
            let all: C64 = ps.preimages.iter().map(|p| p.magnification).sum();
            let real: C64 = ps.preimages.iter().filter(|p| p.is_real).map(|p| p.magnification).sum();
            s += &format!("  sum M (all) = {}\n  sum M (real) = {}\n", fmt_c(all), fmt_c(real));
            ctx.emit(&s)
        }
    }
}

fn cmd_verify(ctx: &Ctx, fam: &FamilyArgs, target: &TargetArgs, numerator: Option<&str>) -> CmdResult {
    let (m, mut rng) = setup(fam, ctx)?;
    let h = numerator.map(parse_numerator).transpose().map_err(Failure::Usage)?;
    let ps = solve_target(&m, target, &solve_options(fam), &mut rng)?;
    let report: ResidueReport = report_from(&m, &ps, h.as_ref(), assigned_weights(m.family()))?;
    match ctx.format {
        Format::Json => ctx.json(&report)?,
        Format::Csv => ctx.emit(&format!(
            "family,s1,s2,sum_re,sum_im,max_abs_residue,verdict\n{},{},{},{},{},{},{:?}\n",
            report.family,
            report.target.s1.re,
            report.target.s2.re,
            report.affine_residue_sum.re,
            report.affine_residue_sum.im,
            report.max_abs_residue,
            report.grt_verdict
        ))?,
        Format::Human => ctx.emit(&format!(
            "{} in WP{}: residue sum {} (max |residue| {:.3e}), {} root(s) at infinity, verdict {:?}\n",
            report.family,
            report.weights,
            fmt_c(report.affine_residue_sum),
            report.max_abs_residue,
            report.infinity_roots.len(),
            report.grt_verdict
        ))?,
    }
    if report.confirmed() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "verdict {:?}, |sum| = {:.3e}",
            report.grt_verdict,
            report.affine_residue_sum.norm()
        )))
    }
}

fn cmd_infinity(ctx: &Ctx, fam: &FamilyArgs, target: &TargetArgs, weights: Option<Weights>) -> CmdResult {
    let (m, mut rng) = setup(fam, ctx)?;
    let w = weights.unwrap_or_else(|| assigned_weights(m.family()));
    let s = match target.target {
        Some((a, b)) => TargetPoint::new(a, b),
        None => random_target(&mut rng),
    };
    let hp = homogenize(&m, s, w);
    let roots = roots_at_infinity(&hp)?;
    let bezout = weighted_bezout(&hp).ok();
    #[derive(Serialize)]
    struct Report {
        family: FamilyId,
        params: ParamVector,
        target: TargetPoint,
        weights: Weights,
        d1: u32,
        d2: u32,
        q1: String,
        q2: String,
        infinity_roots: Vec<caustica::InfinityPoint>,
        singular_points: Vec<caustica::wproj::SingularPoint>,
        infinity_line_stabilizer: u32,
        weighted_bezout: Option<u32>,
    }
    let r = Report {
        family: m.family().clone(),
        params: m.params().clone(),
        target: s,
        weights: w,
        d1: hp.d1,
        d2: hp.d2,
        q1: hp.q1.to_string(),
        q2: hp.q2.to_string(),
        infinity_roots: roots,
        singular_points: singular_points(w),
        infinity_line_stabilizer: infinity_line_stabilizer(w),
        weighted_bezout: bezout,
    };
    match ctx.format {
        Format::Json => ctx.json(&r),
        Format::Csv => {
            let mut s = String::from("kind,point,order\n");
            for p in &r.infinity_roots {
                s += &format!("infinity_root,{p},\n");
            }
            for p in &r.singular_points {
                s += &format!("singular_point,{},{}\n", p.location, p.local_group_order);
            }
            ctx.emit(&s)
        }
        Format::Human => {
            let roots = if r.infinity_roots.is_empty() {
                "none".to_string()
            } else {
                r.infinity_roots.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
            };
            let sing = if r.singular_points.is_empty() {
                "none".to_string()
            } else {
                r.singular_points
                    .iter()
                    .map(|p| format!("{} (Z/{})", p.location, p.local_group_order))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            ctx.emit(&format!(
                "{} in WP{}\n  P1 = {}\n  P2 = {}\n  degrees ({}, {})\n  roots at infinity: {}\n  singular points: {}\n  weighted Bezout count: {}\n",
                r.family,
                w,
                r.q1,
                r.q2,
                r.d1,
                r.d2,
                roots,
                sing,
                r.weighted_bezout.map_or("n/a (roots at infinity)".to_string(), |b| b.to_string())
            ))
        }
    }
}

fn sample_rows(step: usize, s: &CausticSample, out: &mut String) {
    for (k, &(x, y)) in s.critical_points.iter().enumerate() {
        let (s1, s2) = s.caustic_points[k];
        out.push_str(&format!("{step},{x},{y},{s1},{s2},{}\n", s.det_jac[k]));
    }
}

const SAMPLE_HEADER: &str = "step,x,y,s1,s2,det_jac\n";

fn cmd_caustic(ctx: &Ctx, fam: &FamilyArgs, grid: &GridArgs) -> CmdResult {
    let (m, _) = setup(fam, ctx)?;
    let bbox = grid.bbox.unwrap_or_else(BBox::default_preimage);
    let sample = critical_curve(&m, bbox, grid.res)?;
    match ctx.format {
        Format::Json => ctx.json(&sample),
        Format::Csv => {
            let mut s = String::from(SAMPLE_HEADER);
            sample_rows(0, &sample, &mut s);
            ctx.emit(&s)
        }
        Format::Human => ctx.emit(&format!(
            "{}: {} critical points in {} polyline(s)\n",
            m.family(),
            sample.len(),
            sample.polylines().len()
        )),
    }
}

fn cmd_regions(ctx: &Ctx, fam: &FamilyArgs, bbox: Option<BBox>, res: usize) -> CmdResult {
    let (m, _) = setup(fam, ctx)?;
    let map: RegionMap = classify_regions(&m, bbox.unwrap_or_else(BBox::default_target), res)?;
    match ctx.format {
        Format::Json => ctx.json(&map),
        Format::Csv => {
            let mut s = String::from("row,col,s1,s2,real_count,real_sum,complex_sum_re,complex_sum_im,min_abs_jac,flagged\n");
            for (k, c) in map.cells.iter().enumerate() {
                s += &format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    k / res,
                    k % res,
                    c.s1,
                    c.s2,
                    c.real_count,
                    c.real_sum,
                    c.complex_sum.re,
                    c.complex_sum.im,
                    c.min_abs_jac,
                    c.flagged
                );
            }
            ctx.emit(&s)
        }
        Format::Human => {
            let mut s = format!("{} over [{}, {}] x [{}, {}]:\n", map.family, map.bbox.xmin, map.bbox.xmax, map.bbox.ymin, map.bbox.ymax);
            for k in 0..=map.bezout_expected as u32 {
                let n = map.count_cells(k);
                if n > 0 {
                    s += &format!("  {k} real images: {n} cells\n");
                }
            }
            s += &format!("  flagged: {} cells\n", map.cells.iter().filter(|c| c.flagged).count());
            ctx.emit(&s)
        }
    }
}

fn cmd_sweep(ctx: &Ctx, fam: &FamilyArgs, grid: &GridArgs, param: &str, range: (f64, f64), steps: usize) -> CmdResult {
    let id = family_id(fam)?;
    let mut rng = ctx.rng();
    let mut base = params_for(&id, fam, &mut rng)?;
    if id.kind().is_lensing() && fam.params.is_none() {
        base = ParamVector::new().with("c", range.0);
    }
    let bbox = grid.bbox.unwrap_or_else(BBox::default_preimage);
    let samples = caustic_metamorphosis_sweep(&id, &base, param, range, steps, bbox, grid.res)?;
    for (k, r) in samples.iter().enumerate() {
        if let Err(e) = r {
            log::warn!("step {k}: {e}");
        }
    }
    match ctx.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Step<'a> {
                step: usize,
                sample: Option<&'a CausticSample>,
                error: Option<String>,
            }
            #[derive(Serialize)]
            struct Sweep<'a> {
                family: &'a FamilyId,
                param: &'a str,
                steps: Vec<Step<'a>>,
            }
            let steps = samples
                .iter()
                .enumerate()
                .map(|(step, r)| Step {
                    step,
                    sample: r.as_ref().ok(),
                    error: r.as_ref().err().map(|e| e.to_string()),
                })
                .collect();
            ctx.json(&Sweep {
                family: &id,
                param,
                steps,
            })
        }
        Format::Csv => {
            let mut s = String::from(SAMPLE_HEADER);
            for (k, r) in samples.iter().enumerate() {
                if let Ok(sample) = r {
                    sample_rows(k, sample, &mut s);
                }
            }
            ctx.emit(&s)
        }
        Format::Human => {
            let mut s = String::new();
            for (k, r) in samples.iter().enumerate() {
                match r {
                    Ok(sample) => {
                        s += &format!(
                            "step {k}: {param}={} {} critical points\n",
                            sample.parameter.unwrap_or(f64::NAN),
                            sample.len()
                        )
                    }
                    Err(e) => s += &format!("step {k}: {e}\n"),
                }
            }
            ctx.emit(&s)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let ctx = Ctx {
        seed: cli.seed,
        format: cli.format,
        out: cli.out,
    };
    match &cli.command {
        Command::Families => cmd_families(&ctx),
        Command::Solve { family, target } => cmd_solve(&ctx, family, target),
        Command::Verify {
            family,
            target,
            numerator,
        } => cmd_verify(&ctx, family, target, numerator.as_deref()),
        Command::Infinity { family, target, weights } => cmd_infinity(&ctx, family, target, *weights),
        Command::Caustic { family, grid } => cmd_caustic(&ctx, family, grid),
        Command::Regions { family, bbox, res } => cmd_regions(&ctx, family, *bbox, *res),
        Command::Sweep {
            family,
            grid,
            param,
            c_range,
            steps,
        } => cmd_sweep(&ctx, family, grid, param, *c_range, *steps),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Core(e) => eprintln!("error: {e}"),
                Failure::Io(e) => eprintln!("error: {e:#}"),
                Failure::Verification(m) => eprintln!("verification failed: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use caustica::catalog::Sign;

    #[test]
    fn parses_numerators_and_weights() {
        let h = parse_numerator("1:2,0:0:-3.5").unwrap();
        assert_eq!(h, BiPoly::from_real_terms([(1, 2, 1.0), (0, 0, -3.5)]));
        assert!(parse_numerator("1").is_err());
        assert_eq!(parse_weights("3,2,1").unwrap(), Weights::new(3, 2, 1).unwrap());
        assert!(parse_weights("2,2,2").is_err());
        assert_eq!(parse_pair("-1,2.5").unwrap(), (-1.0, 2.5));
        assert!(parse_bbox("1,0,0,1").is_err());
    }

    #[test]
    fn family_flags_combine() {
        let a = FamilyArgs {
            family: "D".into(),
            n: Some(6),
            signs: Some("-".into()),
            params: None,
            legacy_fold: false,
            tol: None,
        };
        assert_eq!(family_id(&a).unwrap(), FamilyId::d(6, Sign::Minus).unwrap());
    }

    #[test]
    fn solver_errors_map_to_exit_codes() {
        let code = |e: Error| Failure::from(e).code();
        assert_eq!(code(Error::CausticTarget { min_jac: 0.0, threshold: 1.0 }), 2);
        assert_eq!(code(Error::DegenerateSystem { found: 6, expected: 7 }), 3);
        assert_eq!(code(Error::UnknownFamily("Q".into())), 64);
        assert_eq!(code(Error::DidNotConverge { iterations: 1000 }), 70);
    }

    #[test]
    fn exit_codes_are_distinct() {
        let codes = [
            exit::VERIFICATION_FAILED,
            exit::CAUSTIC_TARGET,
            exit::DEGENERATE_SYSTEM,
            exit::IO,
            exit::USAGE,
            exit::INTERNAL,
        ];
        for (i, a) in codes.iter().enumerate() {
            assert!(codes[i + 1..].iter().all(|b| b != a));
        }
    }
}

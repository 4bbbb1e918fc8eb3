//! Subcommand implementations. Each returns whether its verdict passed.

use std::fs;
use std::path::Path;

use fovk::error::{Error, Result};
use fovk::fov::{certificate, certificate_svg, CertificateOptions, FovCertificate, DIMENSION_GUARD};
use fovk::krylov::{gmres, FnOperator, GmresOptions, GmresTrace};
use fovk::linalg::dense::matvec;
use fovk::linalg::{mm, WeightedSpace};
use fovk::polybound::{asymptotic_factor, gmres_bound_curve, spectral_bound, Region};
use fovk::precond::{
    solve_preconditioned, verify_assumptions, write_system, AssumptionReport, BlockPreconditioner, NormChoice,
    SaddlePointSystem, SystemMeta,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{BoundsArgs, CertifyArgs, GenerateArgs, PrecondArgs, ScalabilityArgs, SolveArgs};
use crate::output::{overlay_svg, write_csv, write_json, Series};
use crate::problem::{self, Problem};

/// Slack allowed between measured residuals and the field-of-values bound.
pub const BOUND_SLACK: f64 = 0.05;

fn out_dir(p: &Path) -> Result<()> {
    fs::create_dir_all(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
}

#[derive(Serialize)]
struct PrecondInfo {
    variant: String,
    side: String,
}

fn precond_info(p: &Problem, pa: &PrecondArgs) -> Option<PrecondInfo> {
    match p {
        Problem::Dense { .. } => None,
        Problem::Saddle(_) => Some(PrecondInfo {
            variant: problem::variant(pa.precond).to_string(),
            side: format!("{:?}", problem::side(pa.side)).to_lowercase(),
        }),
    }
}

pub fn generate(args: &GenerateArgs) -> Result<bool> {
    out_dir(&args.out)?;
    match problem::build(&args.problem)? {
        Problem::Dense { a, rhs, meta } => {
            let mut w = fs::File::create(args.out.join("A.mtx"))?;
            mm::write_array(&mut w, &a)?;
            let mut w = fs::File::create(args.out.join("rhs.mtx"))?;
            mm::write_array(&mut w, &fovk::linalg::Matrix::from_column_slice(rhs.len(), 1, &rhs))?;
            let mut s = serde_json::to_string_pretty(&meta)?;
            s.push('\n');
            fs::write(args.out.join("meta.json"), s)?;
        }
        Problem::Saddle(sys) => write_system(&args.out, &sys)?,
    }
    Ok(true)
}

#[derive(Serialize)]
struct CertificateDoc<'a> {
    problem: &'a SystemMeta,
    precond: Option<PrecondInfo>,
    angles: usize,
    strict: bool,
    pass: bool,
    assumptions: Option<AssumptionReport>,
    certificate: &'a FovCertificate,
}

#[derive(Serialize)]
struct BoundaryRow {
    index: usize,
    angle: f64,
    re: f64,
    im: f64,
    support: f64,
}

pub fn certify(args: &CertifyArgs) -> Result<bool> {
    let p = problem::build(&args.problem)?;
    if p.dim() > DIMENSION_GUARD {
        return Err(Error::DimensionGuard {
            dim: p.dim(),
            guard: DIMENSION_GUARD,
        });
    }
    let (op, space) = problem::operator(&p, &args.precond)?;
    let opts = CertificateOptions {
        n_angles: args.angles,
        numerical_radius: args.numerical_radius,
        ..Default::default()
    };
    let cert = certificate(&op, &space, &opts)?;
    let assumptions = match &p {
        Problem::Saddle(sys) => Some(verify_assumptions(sys)?),
        Problem::Dense { .. } => None,
    };
    let pass = if args.strict {
        cert.cond4_pass
    } else {
        cert.cond4_pass || cert.origin_excluded
    };
    out_dir(&args.out)?;
    write_json(
        &args.out.join("certificate.json"),
        &CertificateDoc {
            problem: p.meta(),
            precond: precond_info(&p, &args.precond),
            angles: args.angles,
            strict: args.strict,
            pass,
            assumptions,
            certificate: &cert,
        },
    )?;
    let b = &cert.boundary;
    let rows: Vec<BoundaryRow> = (0..b.points.len())
        .map(|k| BoundaryRow {
            index: k,
            angle: b.angles[k],
            re: b.points[k].re,
            im: b.points[k].im,
            support: b.support[k],
        })
        .collect();
    write_csv(&args.out.join("boundary.csv"), &rows)?;
    fs::write(args.out.join("region.svg"), certificate_svg(&cert))?;
    println!(
        "a={:.6} b={:.6} c={:.6} bc={:.6} cond4_pass={} origin_excluded={} verdict={}",
        cert.a,
        cert.b,
        cert.c,
        cert.bc,
        cert.cond4_pass,
        cert.origin_excluded,
        if pass { "pass" } else { "fail" }
    );
    Ok(pass)
}

fn run_gmres(p: &Problem, pa: &PrecondArgs, norm: Option<NormChoice>, tol: f64, maxit: usize) -> Result<GmresTrace> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidParams(format!("tolerance {tol} must lie in (0, 1)")));
    }
    let opts = GmresOptions {
        tol,
        max_iter: maxit,
        ..Default::default()
    };
    let rhs = p.rhs();
    match p {
        Problem::Dense { a, .. } => {
            let d = a.nrows();
            let op = FnOperator::new(d, |x: &[f64]| matvec(a, x));
            Ok(gmres(&op, &rhs, &vec![0.0; d], &WeightedSpace::euclidean(d), &opts)?.1)
        }
        Problem::Saddle(sys) => {
            let m = BlockPreconditioner::new(sys, problem::variant(pa.precond), problem::side(pa.side))?;
            Ok(solve_preconditioned(sys, &m, &rhs, &opts, norm)?.1)
        }
    }
}

#[derive(Serialize)]
struct TraceRow {
    iteration: usize,
    residual: f64,
    relative: f64,
    residual_euclid: f64,
}

fn trace_rows(t: &GmresTrace) -> Vec<TraceRow> {
    let rel = t.relative_weighted();
    (0..t.residuals_weighted.len())
        .map(|j| TraceRow {
            iteration: j,
            residual: t.residuals_weighted[j],
            relative: rel[j],
            residual_euclid: t.residuals_euclid[j],
        })
        .collect()
}

#[derive(Serialize)]
struct SolveDoc<'a> {
    problem: &'a SystemMeta,
    precond: Option<PrecondInfo>,
    norm: String,
    tol: f64,
    maxit: usize,
    iterations: usize,
    converged: bool,
    final_residual: f64,
    unpreconditioned_residual: Option<f64>,
}

pub fn solve(args: &SolveArgs) -> Result<bool> {
    let p = problem::build(&args.problem)?;
    let norm = args.norm.map(problem::norm);
    let trace = run_gmres(&p, &args.precond, norm, args.tol, args.maxit)?;
    let norm_label = match (&p, norm) {
        (Problem::Dense { .. }, _) => "l2".to_string(),
        (_, Some(n)) => n.to_string(),
        (_, None) => NormChoice::natural(problem::side(args.precond.side)).to_string(),
    };
    out_dir(&args.out)?;
    write_csv(&args.out.join("trace.csv"), &trace_rows(&trace))?;
    write_json(
        &args.out.join("solve.json"),
        &SolveDoc {
            problem: p.meta(),
            precond: precond_info(&p, &args.precond),
            norm: norm_label,
            tol: args.tol,
            maxit: args.maxit,
            iterations: trace.iterations,
            converged: trace.converged,
            final_residual: trace.final_residual_weighted,
            unpreconditioned_residual: trace.unpreconditioned_residual,
        },
    )?;
    println!("iterations={} converged={}", trace.iterations, trace.converged);
    Ok(trace.converged)
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalabilityRow {
    pub problem: String,
    pub precond: String,
    pub side: String,
    pub grid: usize,
    pub size: usize,
    pub iters_l2: usize,
    pub converged_l2: bool,
    /// Iterations in the natural weighted norm (`H` left, `H⁻¹` right).
    pub iters_h: usize,
    pub converged_h: bool,
    pub weighted_norm: String,
}

#[derive(Serialize)]
struct ColumnSummary {
    precond: String,
    spread_l2: usize,
    spread_h: usize,
    max_l2_h_gap: usize,
}

#[derive(Serialize)]
struct ScalabilityDoc {
    problem: String,
    nu: f64,
    grids: Vec<usize>,
    tol: f64,
    all_converged: bool,
    columns: Vec<ColumnSummary>,
}

fn spread(v: impl Iterator<Item = usize> + Clone) -> usize {
    v.clone().max().unwrap_or(0) - v.min().unwrap_or(0)
}

pub fn scalability(args: &ScalabilityArgs) -> Result<bool> {
    if args.grids.is_empty() || args.grids.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams("grids must be non-empty and strictly ascending".into()));
    }
    let side = problem::side(args.side);
    let weighted = NormChoice::natural(side);
    let opts = GmresOptions {
        tol: args.tol,
        max_iter: args.maxit,
        ..Default::default()
    };
    if !(args.tol > 0.0 && args.tol < 1.0) {
        return Err(Error::InvalidParams(format!("tolerance {} must lie in (0, 1)", args.tol)));
    }
    let per_grid: Vec<Result<Vec<ScalabilityRow>>> = args
        .grids
        .par_iter()
        .map(|&g| {
            let sys: SaddlePointSystem =
                problem::scale_h2(problem::saddle(args.problem, g, args.nu, args.wind, false)?, args.h2_scale)?;
            let rhs = sys.rhs.clone().unwrap_or_else(|| vec![1.0; sys.dim()]);
            args.precond
                .iter()
                .map(|&pv| {
                    let v = problem::variant(pv);
                    let m = BlockPreconditioner::new(&sys, v, side)?;
                    let (_, t2) = solve_preconditioned(&sys, &m, &rhs, &opts, Some(NormChoice::L2))?;
                    let (_, th) = solve_preconditioned(&sys, &m, &rhs, &opts, Some(weighted))?;
                    Ok(ScalabilityRow {
                        problem: sys.meta.generator.clone(),
                        precond: v.to_string(),
                        side: format!("{side:?}").to_lowercase(),
                        grid: g,
                        size: sys.dim(),
                        iters_l2: t2.iterations,
                        converged_l2: t2.converged,
                        iters_h: th.iterations,
                        converged_h: th.converged,
                        weighted_norm: weighted.to_string(),
                    })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_grid {
        rows.extend(r?);
    }
    rows.sort_by_key(|r| {
        (
            args.precond.iter().position(|p| problem::variant(*p).to_string() == r.precond),
            r.grid,
        )
    });
    out_dir(&args.out)?;
    write_csv(&args.out.join("scalability.csv"), &rows)?;
    let columns: Vec<ColumnSummary> = args
        .precond
        .iter()
        .map(|pv| {
            let name = problem::variant(*pv).to_string();
            let sel: Vec<&ScalabilityRow> = rows.iter().filter(|r| r.precond == name).collect();
            ColumnSummary {
                spread_l2: spread(sel.iter().map(|r| r.iters_l2)),
                spread_h: spread(sel.iter().map(|r| r.iters_h)),
                max_l2_h_gap: sel.iter().map(|r| r.iters_l2.abs_diff(r.iters_h)).max().unwrap_or(0),
                precond: name,
            }
        })
        .collect();
    let all_converged = rows.iter().all(|r| r.converged_l2 && r.converged_h);
    println!("precond grid size iters_l2 iters_{}", weighted);
    for r in &rows {
        println!("{} {} {} {} {}", r.precond, r.grid, r.size, r.iters_l2, r.iters_h);
    }
    write_json(
        &args.out.join("scalability.json"),
        &ScalabilityDoc {
            problem: rows.first().map(|r| r.problem.clone()).unwrap_or_default(),
            nu: args.nu,
            grids: args.grids.clone(),
            tol: args.tol,
            all_converged,
            columns,
        },
    )?;
    Ok(all_converged)
}

#[derive(Serialize)]
struct BoundsRow {
    degree: usize,
    measured: Option<f64>,
    fov_raw: f64,
    fov_clamped: f64,
    spectral_raw: Option<f64>,
    spectral_clamped: Option<f64>,
}

#[derive(Serialize)]
struct BoundsDoc<'a> {
    problem: &'a SystemMeta,
    precond: Option<PrecondInfo>,
    iterations: usize,
    converged: bool,
    bc: f64,
    origin_excluded: bool,
    asymptotic_factor: Option<f64>,
    /// `κ_H(V)`, the degree-0 value of the eigenvector bound.
    eigenvector_condition: Option<f64>,
    spectral_error: Option<String>,
    /// `max_j (measured_j − bound_j)` over the tabulated degrees.
    worst_excess: f64,
    bound_holds: bool,
}

pub fn bounds(args: &BoundsArgs) -> Result<bool> {
    let p = problem::build(&args.problem)?;
    if p.dim() > DIMENSION_GUARD {
        return Err(Error::DimensionGuard {
            dim: p.dim(),
            guard: DIMENSION_GUARD,
        });
    }
    let (op, space) = problem::operator(&p, &args.precond)?;
    let opts = CertificateOptions {
        n_angles: args.angles,
        ..Default::default()
    };
    let cert = certificate(&op, &space, &opts)?;
    let trace = run_gmres(&p, &args.precond, None, args.tol, args.maxit)?;
    let measured = trace.relative_weighted();
    let fov = gmres_bound_curve(&cert, args.degrees)?;
    let degrees: Vec<usize> = (0..=args.degrees).collect();
    let (spectral, spectral_error) = match spectral_bound(&op, &space, &degrees) {
        Ok(c) => (Some(c), None),
        Err(e @ (Error::NearDefective { .. } | Error::EigFailure(_))) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let rho = if args.degrees >= 4 {
        Some(asymptotic_factor(&Region::from(&cert.region), args.degrees)?)
    } else {
        None
    };
    let rows: Vec<BoundsRow> = degrees
        .iter()
        .map(|&j| BoundsRow {
            degree: j,
            measured: measured.get(j).copied(),
            fov_raw: fov.values[j],
            fov_clamped: fov.clamped[j],
            spectral_raw: spectral.as_ref().map(|c| c.values[j]),
            spectral_clamped: spectral.as_ref().map(|c| c.clamped[j]),
        })
        .collect();
    let worst_excess = rows
        .iter()
        .filter_map(|r| r.measured.map(|m| m - r.fov_raw))
        .fold(f64::NEG_INFINITY, f64::max);
    let bound_holds = worst_excess <= BOUND_SLACK;
    out_dir(&args.out)?;
    write_csv(&args.out.join("bounds.csv"), &rows)?;
    let mut series = vec![
        Series {
            label: "measured",
            color: "black",
            dashed: false,
            points: measured.iter().take(args.degrees + 1).enumerate().map(|(j, v)| (j as f64, *v)).collect(),
        },
        Series {
            label: "field of values",
            color: "#1f4e79",
            dashed: false,
            points: fov.clamped.iter().enumerate().map(|(j, v)| (j as f64, *v)).collect(),
        },
    ];
    if let Some(c) = &spectral {
        series.push(Series {
            label: "eigenvector",
            color: "#c00000",
            dashed: true,
            points: c.clamped.iter().enumerate().map(|(j, v)| (j as f64, *v)).collect(),
        });
    }
    fs::write(args.out.join("overlay.svg"), overlay_svg("relative residual and bounds", &series))?;
    write_json(
        &args.out.join("bounds.json"),
        &BoundsDoc {
            problem: p.meta(),
            precond: precond_info(&p, &args.precond),
            iterations: trace.iterations,
            converged: trace.converged,
            bc: cert.bc,
            origin_excluded: cert.origin_excluded,
            asymptotic_factor: rho,
            eigenvector_condition: spectral.as_ref().map(|c| c.values[0]),
            spectral_error,
            worst_excess,
            bound_holds,
        },
    )?;
    println!(
        "iterations={} bc={:.6} worst_excess={:.3e} bound_holds={}",
        trace.iterations, cert.bc, worst_excess, bound_holds
    );
    Ok(bound_holds)
}

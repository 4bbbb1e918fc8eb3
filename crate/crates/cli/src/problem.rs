//! Problem construction and the operators handed to GMRES and the
//! certificate.

use fovk::error::{Error, Result};
use fovk::linalg::dense::{materialize, Matrix};
use fovk::linalg::WeightedSpace;
use fovk::precond::{assemble, BlockPreconditioner, NormChoice, SaddlePointSystem, Side, SystemMeta, Variant};
use fovk::problems::{
    oseen_fd, random_vector, stokes_darcy_fd_with, synthetic, toeplitz_example, GridSpec, StokesDarcyOptions,
    WindField,
};

use crate::args::{NormArg, PrecondArg, PrecondArgs, ProblemArgs, ProblemKind, SideArg, WindKind};

pub enum Problem {
    /// A plain matrix with `H = I` and a seeded right-hand side.
    Dense { a: Matrix, rhs: Vec<f64>, meta: SystemMeta },
    Saddle(SaddlePointSystem),
}

pub fn wind(kind: WindKind) -> WindField {
    match kind {
        WindKind::Cavity => WindField::cavity(),
        WindKind::Recirculating => WindField::recirculating(1.0),
        WindKind::Zero => WindField::zero(),
    }
}

pub fn variant(p: PrecondArg) -> Variant {
    match p {
        PrecondArg::Diag => Variant::Diagonal,
        PrecondArg::Upper => Variant::Upper,
        PrecondArg::Lower => Variant::Lower,
        PrecondArg::InexactUpper => Variant::InexactUpper,
    }
}

pub fn side(s: SideArg) -> Side {
    match s {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
    }
}

pub fn norm(n: NormArg) -> NormChoice {
    match n {
        NormArg::L2 => NormChoice::L2,
        NormArg::H => NormChoice::H,
        NormArg::Hinv => NormChoice::HInv,
    }
}

/// Rebuilds `sys` with `H2` multiplied by `scale`.
pub fn scale_h2(sys: SaddlePointSystem, scale: f64) -> Result<SaddlePointSystem> {
    if scale == 1.0 {
        return Ok(sys);
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidParams(format!("H2 scale {scale} must be positive")));
    }
    let meta = sys.meta.clone().with_param("h2_scale", scale);
    let out = assemble(sys.f(), sys.b(), &sys.h2().scaled(scale), meta)?;
    match &sys.rhs {
        Some(r) => out.with_rhs(r.clone()),
        None => Ok(out),
    }
}

pub fn saddle(kind: ProblemKind, grid: usize, nu: f64, wind_kind: WindKind, decoupled: bool) -> Result<SaddlePointSystem> {
    let g = GridSpec::new(grid)?;
    match kind {
        ProblemKind::Oseen => oseen_fd(g, nu, &wind(wind_kind)),
        ProblemKind::StokesDarcy => stokes_darcy_fd_with(g, nu, StokesDarcyOptions { decoupled }),
        _ => Err(Error::InvalidParams("only oseen and stokes-darcy are grid problems".into())),
    }
}

pub fn build(args: &ProblemArgs) -> Result<Problem> {
    let sys = match args.problem {
        ProblemKind::Toeplitz => {
            let a = toeplitz_example(args.n)?;
            let rhs = random_vector(a.nrows(), args.seed);
            let meta = SystemMeta::new("toeplitz", 1.0, None)
                .with_param("n", args.n as f64)
                .with_param("seed", args.seed as f64);
            return Ok(Problem::Dense { a, rhs, meta });
        }
        ProblemKind::Oseen | ProblemKind::StokesDarcy => saddle(args.problem, args.grid, args.nu, args.wind, args.decoupled)?,
        ProblemKind::Synthetic => {
            let m = args.m.unwrap_or(args.n / 2);
            synthetic(args.n, m, args.eta, args.c1, args.c2, args.seed)?
        }
        ProblemKind::File => {
            let dir = args
                .input
                .as_ref()
                .ok_or_else(|| Error::InvalidParams("--problem file needs --input".into()))?;
            fovk::precond::read_system(dir)?
        }
    };
    Ok(Problem::Saddle(scale_h2(sys, args.h2_scale)?))
}

impl Problem {
    pub fn meta(&self) -> &SystemMeta {
        match self {
            Problem::Dense { meta, .. } => meta,
            Problem::Saddle(s) => &s.meta,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Problem::Dense { a, .. } => a.nrows(),
            Problem::Saddle(s) => s.dim(),
        }
    }

    pub fn rhs(&self) -> Vec<f64> {
        match self {
            Problem::Dense { rhs, .. } => rhs.clone(),
            Problem::Saddle(s) => s.rhs.clone().unwrap_or_else(|| vec![1.0; s.dim()]),
        }
    }
}

/// The operator seen by GMRES and the space of its natural norm: `A` in the
/// Euclidean norm, `M⁻¹K` in the H-norm or `KM⁻¹` in the H⁻¹-norm.
pub fn operator(p: &Problem, pa: &PrecondArgs) -> Result<(Matrix, WeightedSpace)> {
    match p {
        Problem::Dense { a, .. } => Ok((a.clone(), WeightedSpace::euclidean(a.nrows()))),
        Problem::Saddle(sys) => {
            let m = BlockPreconditioner::new(sys, variant(pa.precond), side(pa.side))?;
            let d = sys.dim();
            let op = match m.side() {
                Side::Left => materialize(d, d, |x| m.apply_inverse(&sys.apply_k(x))),
                Side::Right => materialize(d, d, |x| sys.apply_k(&m.apply_inverse(x))),
            };
            Ok((op, NormChoice::natural(m.side()).space(sys)))
        }
    }
}


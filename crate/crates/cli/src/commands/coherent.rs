use clap::Args;
use infeld_core::coherent::{coherent_coordinate, coherent_fock, eigen_residual, CoherentSpec, Flavor};
use infeld_core::oscillator::fock_to_grid;
use serde::Deserialize;

use super::{pick, positive};
use crate::args::{ComplexNum, GridSpec, Parsed};
use crate::error::CliError;
use crate::report::{Cell, Measurement, Outcome, Param, Report, Table};

#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoherentArgs {
    /// canonical, parity, fourier_plus, fourier_minus or titulaer_glauber [default: canonical]
    #[arg(long)]
    pub flavor: Option<Parsed<Flavor>>,
    /// Eigenvalue α, e.g. 1+0i or -0.5+2i [default: 1+0i]
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<Parsed<ComplexNum>>,
    /// Rotation angle, required by titulaer_glauber
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Fock truncation M [default: chosen from |α|]
    #[arg(long)]
    pub truncation: Option<usize>,
    /// Coordinate grid min:max:nodes [default: -12:12:4001]
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<Parsed<GridSpec>>,
    /// Tolerance on the defining-equation residual [default: 1e-6]
    #[arg(long)]
    pub tol_residual: Option<f64>,
    /// Tolerance on |‖ψ‖ − 1| [default: 1e-12]
    #[arg(long)]
    pub tol_norm: Option<f64>,
    /// Tolerance between Fock synthesis and closed form [default: 1e-8]
    #[arg(long)]
    pub tol_fock: Option<f64>,
}

pub fn run(a: CoherentArgs, c: CoherentArgs) -> Result<Outcome, CliError> {
    let flavor = pick(a.flavor, c.flavor, Parsed(Flavor::Canonical)).0;
    let alpha = pick(a.alpha, c.alpha, Parsed(ComplexNum(1.0.into()))).0 .0;
    let phi = a.phi.or(c.phi);
    let truncation = a.truncation.or(c.truncation);
    let gspec = pick(a.grid, c.grid, Parsed(GridSpec::new(-12.0, 12.0, 4001))).0;
    let tol_residual = positive("tol_residual", pick(a.tol_residual, c.tol_residual, 1e-6))?;
    let tol_norm = positive("tol_norm", pick(a.tol_norm, c.tol_norm, 1e-12))?;
    let tol_fock = positive("tol_fock", pick(a.tol_fock, c.tol_fock, 1e-8))?;
    let grid = gspec.build()?;

    let mut spec = match (flavor, phi) {
        (Flavor::TitulaerGlauber, Some(phi)) => CoherentSpec::titulaer_glauber(alpha, phi)?,
        (Flavor::TitulaerGlauber, None) => {
            return Err(CliError::bad_input("titulaer_glauber needs --phi"));
        }
        (_, Some(_)) => return Err(CliError::bad_input("--phi only applies to titulaer_glauber")),
        (f, None) => CoherentSpec::new(alpha, f)?,
    };
    if let Some(m) = truncation {
        spec = spec.with_truncation(m)?;
    }

    let mut report = Report::new("coherent");
    report.param("flavor", Param::Text(flavor.name().into()));
    report.param("alpha", Param::List(vec![alpha.re, alpha.im]));
    if let Some(phi) = phi {
        report.param("phi", Param::Num(phi));
    }
    report.param("truncation", Param::Int(spec.truncation()));
    report.param("grid", Param::Text(format!("{}:{}:{}", gspec.min, gspec.max, gspec.nodes)));

    let v = coherent_fock(&spec)?;
    report.push(Measurement::bound("norm_deviation", (v.norm() - 1.0).abs(), tol_norm, "coherent_fock"));
    report.push(Measurement::bound("eigen_residual", eigen_residual(&spec, grid)?, tol_residual, "eigen_residual"));
    let synthesized = fock_to_grid(&v, grid)?;
    let profile = if flavor == Flavor::TitulaerGlauber {
        synthesized
    } else {
        let closed = coherent_coordinate(&spec, grid)?;
        report.push(Measurement::bound(
            "fock_vs_closed_form",
            closed.max_abs_diff(&synthesized, 0)?,
            tol_fock,
            "coherent_coordinate",
        ));
        closed
    };

    let mut table = Table::new("profile", &["x", "re", "im"]);
    for (x, z) in grid.points().zip(profile.values()) {
        table.row(vec![Cell::Num(x), Cell::Num(z.re), Cell::Num(z.im)]);
    }
    let mut fock = Table::new("fock", &["n", "re", "im"]);
    for (n, z) in v.coeffs().iter().enumerate() {
        fock.row(vec![Cell::Int(n), Cell::Num(z.re), Cell::Num(z.im)]);
    }
    Ok(Outcome { report, tables: vec![table, fock], primary: 0 })
}

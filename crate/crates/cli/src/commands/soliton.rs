use clap::Args;
use infeld_core::numerics::fd_eigen;
use infeld_core::soliton::{kdv_residual, soliton_potential, SolitonParams, TauForm};
use serde::Deserialize;

use super::{pick, positive, require};
use crate::args::{GridSpec, Parsed};
use crate::error::CliError;
use crate::report::{Cell, Measurement, Outcome, Param, Report, Table};

#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonArgs {
    /// Wavenumbers k₁,…,kₙ (positive, distinct)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub k: Option<Vec<f64>>,
    /// Initial phases, one per wavenumber [default: all zero]
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta0: Option<Vec<f64>>,
    /// Spatial grid min:max:nodes [default: -25:25:5001]
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<Parsed<GridSpec>>,
    /// Time [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Tau form used for the emitted potential: wronskian, determinant or hirota
    #[arg(long)]
    pub form: Option<Parsed<TauForm>>,
    /// Time step of the KdV residual check [default: 1e-4]
    #[arg(long)]
    pub dt: Option<f64>,
    /// Eigenvalue tolerance [default: 1e-4]
    #[arg(long)]
    pub tol_eigen: Option<f64>,
    /// KdV residual tolerance [default: 1e-6]
    #[arg(long)]
    pub tol_kdv: Option<f64>,
    /// Tolerance between the three tau forms [default: 1e-9]
    #[arg(long)]
    pub tol_forms: Option<f64>,
}

pub fn run(a: SolitonArgs, c: SolitonArgs) -> Result<Outcome, CliError> {
    let k = require(a.k, c.k, "k")?;
    let theta0 = pick(a.theta0, c.theta0, vec![0.0; k.len()]);
    let spec = pick(a.grid, c.grid, Parsed(GridSpec::new(-25.0, 25.0, 5001))).0;
    let t = pick(a.t, c.t, 0.0);
    let form = pick(a.form, c.form, Parsed(TauForm::Wronskian)).0;
    let dt = positive("dt", pick(a.dt, c.dt, 1e-4))?;
    let tol_eigen = positive("tol_eigen", pick(a.tol_eigen, c.tol_eigen, 1e-4))?;
    let tol_kdv = positive("tol_kdv", pick(a.tol_kdv, c.tol_kdv, 1e-6))?;
    let tol_forms = positive("tol_forms", pick(a.tol_forms, c.tol_forms, 1e-9))?;
    if !t.is_finite() {
        return Err(CliError::bad_input("t must be finite"));
    }
    let grid = spec.build()?;
    let p = SolitonParams::new(&k, &theta0)?;

    let mut report = Report::new("soliton");
    report.param("k", Param::List(k));
    report.param("theta0", Param::List(theta0));
    report.param("grid", Param::Text(format!("{}:{}:{}", spec.min, spec.max, spec.nodes)));
    report.param("t", Param::Num(t));
    report.param("form", Param::Text(format!("{form:?}").to_lowercase()));
    report.param("dt", Param::Num(dt));

    let potentials = [TauForm::Wronskian, TauForm::Determinant, TauForm::Hirota]
        .map(|f| soliton_potential(&p, t, grid, f));
    let [w, d, h] = potentials;
    let (w, d, h) = (w?, d?, h?);
    let u = match form {
        TauForm::Wronskian => &w,
        TauForm::Determinant => &d,
        TauForm::Hirota => &h,
    };

    let mut expected = p.eigenvalues();
    expected.sort_by(f64::total_cmp);
    let pairs = fd_eigen(u, expected.len())?;
    let mut spectrum = Table::new("spectrum", &["index", "value", "expected"]);
    for (j, (e, x)) in pairs.iter().zip(&expected).enumerate() {
        report.push(Measurement::close(format!("eigenvalue[{j}]"), e.value, *x, tol_eigen, "fd_eigen"));
        spectrum.row(vec![Cell::Int(j), Cell::Num(e.value), Cell::Num(*x)]);
    }
    report.push(Measurement::bound("kdv_residual", kdv_residual(&p, grid, t, dt)?, tol_kdv, "kdv_residual"));
    let scale = w.max_abs().max(1.0);
    report.push(Measurement::bound(
        "forms_determinant",
        d.max_abs_diff(&w, 0)? / scale,
        tol_forms,
        "soliton_potential",
    ));
    report.push(Measurement::bound(
        "forms_hirota",
        h.max_abs_diff(&w, 0)? / scale,
        tol_forms,
        "soliton_potential",
    ));

    let mut table = Table::new("u", &["x", "value"]);
    for (x, v) in grid.points().zip(u.values()) {
        table.row(vec![Cell::Num(x), Cell::Num(v.re)]);
    }
    Ok(Outcome { report, tables: vec![table, spectrum], primary: 0 })
}

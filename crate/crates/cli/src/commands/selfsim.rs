use clap::Args;
use infeld_core::qalgebra::{q_spectrum, selfsim_potential_and_spectrum, QParams};
use serde::Deserialize;

use super::{pick, positive};
use crate::error::CliError;
use crate::report::{Cell, Measurement, Outcome, Param, Report, Table};

#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfsimArgs {
    /// Scale factor in (0, 1) [default: 0.75]
    #[arg(long)]
    pub q: Option<f64>,
    /// Shift μ > 0 [default: 1]
    #[arg(long)]
    pub mu: Option<f64>,
    /// Half width of the symmetric grid [default: 40]
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Odd node count [default: 8001]
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Number of bound states [default: 4]
    #[arg(long)]
    pub levels: Option<usize>,
    /// Relative tolerance on λₖ₊₁/λₖ against q² [default: 0.01]
    #[arg(long)]
    pub tol_ratio: Option<f64>,
    /// Relative tolerance on the ground level [default: 0.01]
    #[arg(long)]
    pub tol_lambda0: Option<f64>,
    /// Tolerance on the reduced-chain residual [default: 1e-8]
    #[arg(long)]
    pub tol_chain: Option<f64>,
}

pub fn run(a: SelfsimArgs, c: SelfsimArgs) -> Result<Outcome, CliError> {
    let q = pick(a.q, c.q, 0.75);
    let mu = pick(a.mu, c.mu, 1.0);
    let x_max = positive("x_max", pick(a.x_max, c.x_max, 40.0))?;
    let nodes = pick(a.nodes, c.nodes, 8001);
    let levels = pick(a.levels, c.levels, 4);
    let tol_ratio = positive("tol_ratio", pick(a.tol_ratio, c.tol_ratio, 0.01))?;
    let tol_lambda0 = positive("tol_lambda0", pick(a.tol_lambda0, c.tol_lambda0, 0.01))?;
    let tol_chain = positive("tol_chain", pick(a.tol_chain, c.tol_chain, 1e-8))?;
    if levels == 0 {
        return Err(CliError::bad_input("levels must be at least 1"));
    }

    let params = QParams::new(q, mu)?;
    let s = selfsim_potential_and_spectrum(&params, x_max, nodes, levels)?;
    let expected = q_spectrum(&params, levels);

    let mut report = Report::new("selfsim");
    report.param("q", Param::Num(q));
    report.param("mu", Param::Num(mu));
    report.param("x_max", Param::Num(x_max));
    report.param("nodes", Param::Int(nodes));
    report.param("levels", Param::Int(levels));

    for (k, r) in s.ratios().iter().enumerate() {
        report.push(Measurement::relative(format!("ratio[{k}]"), *r, params.q2(), tol_ratio, "fd_eigen"));
    }
    report.push(Measurement::relative(
        "lambda0",
        s.eigenpairs[0].value,
        s.lambda0,
        tol_lambda0,
        "selfsim_potential_and_spectrum",
    ));
    report.push(Measurement::bound("chain_residual", s.chain_residual, tol_chain, "selfsim_extend"));

    let mut potential = Table::new("potential", &["x", "f", "u"]);
    for ((x, f), u) in s.u.grid().points().zip(s.f.values()).zip(s.u.values()) {
        potential.row(vec![Cell::Num(x), Cell::Num(f.re), Cell::Num(u.re)]);
    }
    let mut eigen = Table::new("eigenvalues", &["index", "value", "expected"]);
    for (k, (e, x)) in s.eigenpairs.iter().zip(&expected).enumerate() {
        eigen.row(vec![Cell::Int(k), Cell::Num(e.value), Cell::Num(*x)]);
    }
    Ok(Outcome { report, tables: vec![potential, eigen], primary: 0 })
}

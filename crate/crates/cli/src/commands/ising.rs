use clap::Args;
use infeld_core::ising::{bulk_range, magnetization_brute, magnetization_thermo, IsingModel};
use serde::Deserialize;

use super::{pick, positive};
use crate::args::{Parsed, SiteRange};
use crate::error::CliError;
use crate::report::{Cell, Measurement, Outcome, Param, Report, Table};

#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsingArgs {
    /// Scale factor in (0, 1) [default: 0.5]
    #[arg(long)]
    pub q: Option<f64>,
    /// Number of sites, at most 24 [default: 16]
    #[arg(long)]
    pub n: Option<usize>,
    /// Field strengths βH to sweep [default: 0.25,0.5,1.0]
    #[arg(long = "betaH", value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(rename = "betaH")]
    pub beta_h: Option<Vec<f64>>,
    /// Bulk sites start:end averaged by the brute-force sum [default: middle third]
    #[arg(long)]
    pub bulk: Option<Parsed<SiteRange>>,
    /// Tolerance on |brute − thermodynamic| [default: 0.02]
    #[arg(long)]
    pub tol: Option<f64>,
}

pub fn run(a: IsingArgs, c: IsingArgs) -> Result<Outcome, CliError> {
    let q = pick(a.q, c.q, 0.5);
    let n = pick(a.n, c.n, 16);
    let sweep = pick(a.beta_h, c.beta_h, vec![0.25, 0.5, 1.0]);
    let range = pick(a.bulk, c.bulk, Parsed(SiteRange(bulk_range(n)))).0 .0;
    let tol = positive("tol", pick(a.tol, c.tol, 0.02))?;
    if sweep.is_empty() {
        return Err(CliError::bad_input("betaH needs at least one value"));
    }

    let mut report = Report::new("ising");
    report.param("q", Param::Num(q));
    report.param("n", Param::Int(n));
    report.param("betaH", Param::List(sweep.clone()));
    report.param("bulk", Param::Text(format!("{}:{}", range.start, range.end)));

    let mut table = Table::new("magnetization", &["betaH", "brute", "thermo", "abs_delta"]);
    let mut couplings = Table::new("couplings", &["i", "j", "beta_j"]);
    for (idx, &bh) in sweep.iter().enumerate() {
        let model = IsingModel::selfsim_homogeneous(q, n, bh)?;
        if idx == 0 {
            for i in 0..n {
                for j in i + 1..n {
                    couplings.row(vec![Cell::Int(i), Cell::Int(j), Cell::Num(model.beta_j(i, j))]);
                }
            }
        }
        let brute = magnetization_brute(&model, range.clone())?;
        let thermo = magnetization_thermo(q, bh)?;
        let delta = (brute - thermo).abs();
        report.push(Measurement::info(format!("brute[betaH={bh}]"), brute, "magnetization_brute"));
        report.push(Measurement::info(format!("thermo[betaH={bh}]"), thermo, "magnetization_thermo"));
        report.push(Measurement::bound(format!("abs_delta[betaH={bh}]"), delta, tol, "magnetization_brute"));
        table.row(vec![Cell::Num(bh), Cell::Num(brute), Cell::Num(thermo), Cell::Num(delta)]);
    }
    Ok(Outcome { report, tables: vec![table, couplings], primary: 0 })
}

use clap::Args;
use infeld_core::ortho::{
    christoffel, coeffs_from_measure, geronimus, geronimus_finite, toda_verify, DiscreteMeasure,
    RecurrenceCoeffs,
};
use serde::Deserialize;

use super::{pick, positive};
use crate::error::CliError;
use crate::report::{Cell, Measurement, Outcome, Param, Report, Table};

#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TodaArgs {
    /// Built-in measure: gaussian or three_point [default: gaussian]
    #[arg(long, conflicts_with = "points")]
    pub measure: Option<String>,
    /// Support points of a custom discrete measure
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "weights")]
    pub points: Option<Vec<f64>>,
    /// Positive weights of the custom measure
    #[arg(long, value_delimiter = ',', requires = "points")]
    pub weights: Option<Vec<f64>>,
    /// Number of recurrence coefficients [default: 8, capped by the support size]
    #[arg(long)]
    pub count: Option<usize>,
    /// First shift [default: lowest Jacobi eigenvalue − 0.5]
    #[arg(long, allow_hyphen_values = true)]
    pub lambda1: Option<f64>,
    /// Second shift [default: lambda1 − 0.5]
    #[arg(long, allow_hyphen_values = true)]
    pub lambda2: Option<f64>,
    /// Tolerance on the Toda and round-trip residuals [default: 1e-10]
    #[arg(long)]
    pub tol: Option<f64>,
}

fn gaussian() -> Result<DiscreteMeasure, CliError> {
    let h = 0.05;
    let pts: Vec<f64> = (0..=400).map(|i| -10.0 + i as f64 * h).collect();
    let w = pts.iter().map(|x| h * (-x * x).exp()).collect();
    Ok(DiscreteMeasure::new(pts, w)?)
}

/// Largest of `|uₙ − AₙCₙ₋₁|/uₙ` and `|bₙ − Aₙ − Cₙ − λ|/max(1, |bₙ|)`.
fn factor_relations(cf: &RecurrenceCoeffs, a: &[f64], cc: &[f64], lambda: f64) -> f64 {
    let u = (1..cf.len()).map(|k| (cf.u_at(k) - a[k] * cc[k - 1]).abs() / cf.u_at(k).abs());
    let b = (0..cf.len()).map(|k| (cf.b()[k] - a[k] - cc[k] - lambda).abs() / cf.b()[k].abs().max(1.0));
    u.chain(b).fold(0.0, f64::max)
}

pub fn run(a: TodaArgs, c: TodaArgs) -> Result<Outcome, CliError> {
    let points = a.points.or(c.points);
    let weights = a.weights.or(c.weights);
    let name = a.measure.or(c.measure);
    let (label, measure) = match (points, weights, name.as_deref()) {
        (Some(p), Some(w), None) => ("custom".to_string(), DiscreteMeasure::new(p, w)?),
        (Some(_), None, _) | (None, Some(_), _) => {
            return Err(CliError::bad_input("points and weights must be given together"));
        }
        (Some(_), Some(_), Some(_)) => {
            return Err(CliError::bad_input("give either measure or points/weights, not both"));
        }
        (None, None, None | Some("gaussian")) => ("gaussian".into(), gaussian()?),
        (None, None, Some("three_point")) => {
            ("three_point".into(), DiscreteMeasure::new(vec![-1.0, 0.0, 1.0], vec![1.0; 3])?)
        }
        (None, None, Some(other)) => {
            return Err(CliError::bad_input(format!("unknown measure {other:?}")));
        }
    };
    let count = pick(a.count, c.count, measure.len().min(8));
    let tol = positive("tol", pick(a.tol, c.tol, 1e-10))?;
    let cf = coeffs_from_measure(&measure, count)?;
    let z = cf.jacobi_eigenvalues()[0];
    let l1 = pick(a.lambda1, c.lambda1, z - 0.5);
    let l2 = pick(a.lambda2, c.lambda2, l1 - 0.5);

    let s1 = christoffel(&cf, l1)?;
    let s2 = christoffel(&s1.coeffs, l2)?;
    let truncated = cf.truncate(count - 1)?;

    let mut report = Report::new("toda");
    report.param("measure", Param::Text(label));
    report.param("count", Param::Int(count));
    report.param("lambda1", Param::Num(l1));
    report.param("lambda2", Param::Num(l2));
    report.push(Measurement::bound("toda_residual", toda_verify(&s1.factors, &s2.factors)?, tol, "toda_verify"));
    let back = geronimus(&s1.coeffs, l1, s1.factors.c[0])?;
    report.push(Measurement::bound("round_trip", back.max_abs_diff(&truncated), tol, "geronimus"));
    let fwd = christoffel(&geronimus_finite(&cf, l1)?, l1)?;
    report.push(Measurement::bound(
        "round_trip_finite",
        fwd.coeffs.max_abs_diff(&truncated),
        tol,
        "geronimus_finite",
    ));
    report.push(Measurement::bound(
        "factor_relations",
        factor_relations(&cf, &s1.factors.a, &s1.factors.c, l1),
        tol,
        "christoffel",
    ));

    let opt = |v: &[f64], i: usize| v.get(i).map_or(Cell::Empty, |x| Cell::Num(*x));
    let u_of = |r: &RecurrenceCoeffs| -> Vec<f64> { (0..r.len()).map(|i| if i == 0 { f64::NAN } else { r.u_at(i) }).collect() };
    let cols = [&cf, &s1.coeffs, &s2.coeffs].map(|r| (r.b().to_vec(), u_of(r)));
    let mut table = Table::new("coefficients", &["n", "b", "u", "b_1", "u_1", "b_2", "u_2"]);
    for i in 0..count {
        let mut row = vec![Cell::Int(i)];
        for (b, u) in &cols {
            row.push(opt(b, i));
            row.push(if i == 0 { Cell::Empty } else { opt(u, i) });
        }
        table.row(row);
    }
    Ok(Outcome { report, tables: vec![table], primary: 0 })
}

use rayon::prelude::*;
use serde::Serialize;

use super::arrangement::polyline_to_weighted_meander;
use super::rotation::{rotated_diameter, RotationParams};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::reeb::{radial_quasimorphism, RadialProfile};
use crate::transferplan::make_plan;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichRow {
    pub t: f64,
    pub n: usize,
    #[serde(skip)]
    pub upper_exact: Rational,
    pub upper_cost: f64,
    pub lower_rate: f64,
    /// `lower_rate · t`; the true lower bound also subtracts the unknown
    /// defect constant.
    pub lower_line: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichReport {
    pub a: f64,
    pub rows: Vec<SandwichRow>,
    pub lower_rate: f64,
    /// Least-squares slope of the upper cost over the upper half of the `t` range.
    pub fitted_slope: f64,
    pub margin: f64,
    /// `lower_rate ≤ fitted_slope`.
    pub holds: bool,
    /// Every row satisfies `U(t) ≤ (2t + 1)/8 + 1`.
    pub within_crossing_bound: bool,
    /// `n` is nondecreasing in `t`.
    pub monotone_n: bool,
}

impl SandwichReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,n,upper_cost,lower_rate,lower_line\n");
        for r in &self.rows {
            out += &format!("{},{},{:.9},{:.9},{:.9}\n", r.t, r.n, r.upper_cost, r.lower_rate, r.lower_line);
        }
        out
    }
}

/// Ordinary least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::OutOfRange("slope fit needs at least two paired points".into()));
    }
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::OutOfRange("slope fit needs distinct x values".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Ok(sxy / sxx)
}

/// Planner upper bounds on rotation diameters against the quasimorphism
/// lower rate of the same flow.
///
/// `base` supplies `eps`, ramp and sampling; its `t` is ignored.
pub fn sandwich_experiment(t_values: &[f64], a: f64, base: &RotationParams) -> Result<SandwichReport> {
    if t_values.len() < 4 {
        return Err(Error::OutOfRange("need at least four t values".into()));
    }
    let lower_rate = radial_quasimorphism(&RadialProfile::h_eps(base.eps)?, a)?.lower_bound_rate;
    let mut rows: Vec<SandwichRow> = t_values
        .par_iter()
        .map(|&t| {
            let params = RotationParams { t, ..base.clone() };
            let wm = polyline_to_weighted_meander(&rotated_diameter(&params)?)?;
            let plan = make_plan(&wm)?;
            Ok(SandwichRow {
                t,
                n: wm.meander.n(),
                upper_cost: rational::to_f64(&plan.total_cost),
                upper_exact: plan.total_cost,
                lower_rate,
                lower_line: lower_rate * t,
            })
        })
        .collect::<Result<_>>()?;
    rows.sort_by(|x, y| x.t.total_cmp(&y.t));
    let (lo, hi) = (rows[0].t, rows[rows.len() - 1].t);
    let upper: Vec<&SandwichRow> = rows.iter().filter(|r| r.t >= 0.5 * (lo + hi)).collect();
    let fitted_slope = fit_slope(
        &upper.iter().map(|r| r.t).collect::<Vec<_>>(),
        &upper.iter().map(|r| r.upper_cost).collect::<Vec<_>>(),
    )?;
    let within_crossing_bound = rows.iter().all(|r| {
        let t = RotationParams { t: r.t, ..base.clone() }.effective_t();
        r.upper_cost <= (2.0 * t + 1.0) / 8.0 + 1.0
    });
    let monotone_n = rows.windows(2).all(|w| w[0].n <= w[1].n);
    Ok(SandwichReport {
        a,
        lower_rate,
        margin: fitted_slope - lower_rate,
        holds: lower_rate <= fitted_slope,
        fitted_slope,
        within_crossing_bound,
        monotone_n,
        rows,
    })
}

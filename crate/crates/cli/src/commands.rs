use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, LogNormal};
use serde_json::{json, Value};

use impact_games::{
    best_response_generic, br_to_eager, br_to_risk_averse, br_to_risk_neutral, cumulative_cost,
    eager_competition_costs, el_residual, equilibrium_cost, expected_cost_lognormal,
    inverse_for_a, inverse_for_b, misestimation_row, risk_equilibrium, risk_residuals,
    selection_matrix, sup_norm, total_cost, two_trader, AnalyticStrategy, Error, Family,
    ImpactParams, MisestimationOptions, Result, SampledStrategy, Side, Strategy, TimeGrid,
};

use crate::table::{Cell, Report};
use crate::{Command, FamilyName, Model, Table};

/// Largest accepted Euler–Lagrange defect, relative to the equation's terms.
pub const RESIDUAL_TOLERANCE: f64 = 1e-6;

/// The report to emit, and whether the numbers passed their checks.
pub type Outcome = (Report, Result<()>);

pub fn dispatch(command: Command, grid: &TimeGrid) -> Result<Outcome> {
    match command {
        Command::Strategy { family, model } => strategy(family, &model, grid).map(|r| (r, Ok(()))),
        Command::BestResponse { adversary, model } => best_response(adversary, &model, grid),
        Command::Equilibrium { model } => {
            let p = params(&model)?;
            let pair = two_trader(&p)?;
            let (a, b) = (pair.a.tabulate(grid)?, pair.b.tabulate(grid)?);
            let r = [el_defect(&a, &b, &p, Side::A, grid)?, el_defect(&a, &b, &p, Side::B, grid)?];
            pair_report("equilibrium", &a, &b, &p, grid, &r)
        }
        Command::InverseB { a, model } => {
            let p = params(&model)?;
            let a = analytic(a, &model)?.tabulate(grid)?;
            let b = inverse_for_b(&a, &p, grid)?;
            let r = [el_defect(&a, &b, &p, Side::A, grid)?];
            pair_report("inverse-b", &a, &b, &p, grid, &r)
        }
        Command::InverseA { b, model } => {
            let p = params(&model)?;
            let b = analytic(b, &model)?.tabulate(grid)?;
            let a = inverse_for_a(&b, &p, grid)?;
            let r = [el_defect(&a, &b, &p, Side::B, grid)?];
            pair_report("inverse-a", &a, &b, &p, grid, &r)
        }
        Command::RiskEquilibrium { model, xi_a, xi_b } => {
            let p = params(&model)?.with_sigma(model.sigma)?.with_risk(xi_a, xi_b)?;
            let pair = risk_equilibrium(&p, grid)?;
            let (ra, rb) = risk_residuals(&pair.a, &pair.b, &p, grid)?;
            let (sa, sb) = (pair.a.resampled(), pair.b.resampled());
            let risk = p.sigma * p.sigma;
            let r = [
                Defect::new(Side::A, sup_norm(&ra), term_scale(&sa, &sb, &p, Side::A) + p.xi_a * risk * sup_norm(sa.values())),
                Defect::new(Side::B, sup_norm(&rb), term_scale(&sa, &sb, &p, Side::B) + p.xi_b * risk * sup_norm(sb.values()) / (p.lambda * p.lambda)),
            ];
            pair_report("risk-equilibrium", &pair.a, &pair.b, &p, grid, &r)
        }
        Command::ExpectedCost { kappa, mu, sigma_ln, n_quad, draws, seed } => {
            expected_cost(kappa, mu, sigma_ln, n_quad, draws, seed, grid).map(|r| (r, Ok(())))
        }
        Command::Tables { which } => tables(which, grid).map(|r| (r, Ok(()))),
    }
}

fn params(m: &Model) -> Result<ImpactParams> {
    ImpactParams::new(m.kappa, m.lambda)
}

pub fn family(name: FamilyName, m: &Model) -> Family {
    let (kappa, lambda, sigma) = (m.kappa, m.lambda, m.sigma);
    match name {
        FamilyName::RiskNeutral => Family::RiskNeutral,
        FamilyName::RiskAverse => Family::RiskAverse { sigma },
        FamilyName::Eager => Family::Eager { sigma },
        FamilyName::Parabolic => Family::Parabolic { c: m.c },
        FamilyName::AlmgrenChriss => Family::AlmgrenChriss { sigma },
        FamilyName::TwoTraderA => Family::TwoTraderEqUnit { kappa, lambda },
        FamilyName::TwoTraderB => Family::TwoTraderEqScaled { kappa, lambda },
        FamilyName::MultiTrader => Family::MultiTraderSym { kappa, n_traders: m.traders },
        FamilyName::MultiLimit => Family::MultiTraderLimit { kappa },
        FamilyName::Case1bA => Family::Case1bA { kappa, lambda },
        FamilyName::Case1bB => Family::Case1bB { kappa, lambda },
        FamilyName::BrRiskAverse => Family::BestResponseToRiskAverse { kappa, lambda, sigma },
        FamilyName::BrRiskNeutral => Family::BestResponseToRiskNeutral { kappa, lambda },
        FamilyName::BrEager => Family::BestResponseToEager { kappa, lambda, sigma },
    }
}

fn analytic(name: FamilyName, m: &Model) -> Result<AnalyticStrategy> {
    AnalyticStrategy::new(family(name, m))
}

fn provenance(report: &mut Report, command: &str, grid: &TimeGrid) {
    report.meta("command", json!(command));
    report.meta("grid", json!(grid.n_intervals()));
    report.meta("version", json!(env!("CARGO_PKG_VERSION")));
}

fn strategy(name: FamilyName, m: &Model, grid: &TimeGrid) -> Result<Report> {
    let f = family(name, m);
    let s = AnalyticStrategy::new(f)?.tabulate(grid)?;
    let mut report = Report::new(&["t", "value", "deriv", "second_deriv", "integral"]);
    for (i, t) in grid.points().enumerate() {
        report.push(vec![
            t.into(),
            s.values()[i].into(),
            s.first_deriv()[i].into(),
            s.second_deriv()[i].into(),
            s.integral()[i].into(),
        ]);
    }
    provenance(&mut report, "strategy", grid);
    report.meta("family", serde_json::to_value(f).expect("family serializes"));
    Ok(report)
}

fn best_response(adversary: FamilyName, m: &Model, grid: &TimeGrid) -> Result<Outcome> {
    let p = params(m)?.with_sigma(m.sigma)?;
    let b = analytic(adversary, m)?;
    let a = match adversary {
        FamilyName::RiskAverse | FamilyName::AlmgrenChriss => br_to_risk_averse(&p)?.tabulate(grid)?,
        FamilyName::RiskNeutral => br_to_risk_neutral(&p)?.tabulate(grid)?,
        FamilyName::Eager => br_to_eager(&p)?.tabulate(grid)?,
        _ => best_response_generic(&b, &p, grid)?,
    };
    let b = b.tabulate(grid)?;
    let r = [el_defect(&a, &b, &p, Side::A, grid)?];
    let (mut report, check) = pair_report("best-response", &a, &b, &p, grid, &r)?;
    report.meta("adversary", serde_json::to_value(family(adversary, m)).expect("family serializes"));
    Ok((report, check))
}

/// Sup of an equation's defect, absolute and relative to the size of its terms
/// (floored at 1, so flat near-linear solutions are judged absolutely).
pub struct Defect {
    side: Side,
    absolute: f64,
    relative: f64,
}

impl Defect {
    fn new(side: Side, absolute: f64, scale: f64) -> Self {
        let relative = absolute / scale.max(1.0);
        Self { side, absolute, relative }
    }
}

/// `sup|ä| + (λ/2)(sup|b̈| + κ sup|ḃ|)` for A, the mirror image for B.
fn term_scale(a: &SampledStrategy, b: &SampledStrategy, p: &ImpactParams, side: Side) -> f64 {
    let (own, other, k) = match side {
        Side::A => (a, b, 0.5 * p.lambda),
        Side::B => (b, a, 0.5 / p.lambda),
    };
    sup_norm(own.second_deriv()) + k * (sup_norm(other.second_deriv()) + p.kappa * sup_norm(other.first_deriv()))
}

fn el_defect(a: &SampledStrategy, b: &SampledStrategy, p: &ImpactParams, side: Side, grid: &TimeGrid) -> Result<Defect> {
    let r = sup_norm(&el_residual(a, b, p, side, grid)?);
    Ok(Defect::new(side, r, term_scale(a, b, p, side)))
}

fn pair_report(
    command: &str,
    a: &SampledStrategy,
    b: &SampledStrategy,
    p: &ImpactParams,
    grid: &TimeGrid,
    residuals: &[Defect],
) -> Result<Outcome> {
    let cum_a = cumulative_cost(a, b, p, Side::A, grid)?;
    let cum_b = cumulative_cost(a, b, p, Side::B, grid)?;
    let mut report = Report::new(&["t", "a", "b", "lambda_b", "cum_cost_a", "cum_cost_b"]);
    for (i, t) in grid.points().enumerate() {
        let bv = b.values()[i];
        report.push(vec![
            t.into(),
            a.values()[i].into(),
            bv.into(),
            (p.lambda * bv).into(),
            cum_a[i].into(),
            cum_b[i].into(),
        ]);
    }
    provenance(&mut report, command, grid);
    report.meta("params", serde_json::to_value(p).expect("params serialize"));
    report.meta(
        "costs",
        json!({
            "a": total_cost(a, b, p, Side::A, grid)?,
            "b": total_cost(a, b, p, Side::B, grid)?,
        }),
    );
    let side_name = |s: Side| match s {
        Side::A => "a",
        Side::B => "b",
    };
    let worst = residuals.iter().fold(0.0f64, |m, r| m.max(r.relative));
    let mut res: serde_json::Map<String, Value> = residuals
        .iter()
        .map(|r| (side_name(r.side).to_string(), json!({ "absolute": r.absolute, "relative": r.relative })))
        .collect();
    res.insert("max".into(), json!(residuals.iter().fold(0.0f64, |m, r| m.max(r.absolute))));
    res.insert("max_relative".into(), json!(worst));
    res.insert("tolerance".into(), json!(RESIDUAL_TOLERANCE));
    report.meta("residual", Value::Object(res));
    let check = if worst <= RESIDUAL_TOLERANCE {
        Ok(())
    } else {
        Err(Error::Tolerance {
            what: "relative Euler-Lagrange residual",
            residual: worst,
            tolerance: RESIDUAL_TOLERANCE,
        })
    };
    Ok((report, check))
}

#[allow(clippy::too_many_arguments)]
fn expected_cost(
    kappa: f64,
    mu: f64,
    sigma_ln: f64,
    n_quad: usize,
    draws: Option<usize>,
    seed: u64,
    grid: &TimeGrid,
) -> Result<Report> {
    let m = expected_cost_lognormal(mu, sigma_ln, kappa, n_quad, grid)?;
    let mut report = Report::new(&["method", "mean", "variance", "std_error"]);
    report.push(vec!["quadrature".into(), m.mean.into(), m.variance.into(), Cell::Empty]);
    if let Some(n) = draws {
        if n < 2 {
            return Err(Error::Domain { name: "draws", value: n as f64, reason: "need at least two draws" });
        }
        let dist = LogNormal::new(mu, sigma_ln)
            .map_err(|_| Error::Domain { name: "sigma_ln", value: sigma_ln, reason: "must be finite and nonnegative" })?;
        let mut rng = StdRng::seed_from_u64(seed);
        let costs = (0..n)
            .map(|_| equilibrium_cost(kappa, dist.sample(&mut rng), grid).map(|c| c.total))
            .collect::<Result<Vec<f64>>>()?;
        let mean = costs.iter().sum::<f64>() / n as f64;
        let var = costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        report.push(vec!["monte-carlo".into(), mean.into(), var.into(), (var / n as f64).sqrt().into()]);
        report.meta("seed", json!(seed));
        report.meta("draws", json!(n));
    }
    provenance(&mut report, "expected-cost", grid);
    report.meta("inputs", json!({ "kappa": kappa, "mu": mu, "sigma_ln": sigma_ln, "n_quad": n_quad }));
    Ok(report)
}

fn tables(which: Table, grid: &TimeGrid) -> Result<Report> {
    match which {
        Table::CostMatrix { kappa, lambda } => {
            let s = selection_matrix(&ImpactParams::new(kappa, lambda)?, grid)?;
            let mut report = Report::new(&["row", "b1a", "b1b"]);
            for (name, row) in [("a1a", s.matrix[0]), ("a1b", s.matrix[1]), ("mean", s.col_mean), ("std", s.col_std)] {
                report.push(vec![name.into(), row[0].into(), row[1].into()]);
            }
            provenance(&mut report, "tables cost-matrix", grid);
            report.meta("params", serde_json::to_value(s.params).expect("params serialize"));
            Ok(report)
        }
        Table::Misestimation { lambda, kappa, shrink, fixed_truth, pricing } => {
            let opts = MisestimationOptions { shrink, pricing: pricing.into(), fixed_truth };
            let mut report = Report::new(&[
                "lambda",
                "kappa",
                "shifted_kappa",
                "temporary",
                "permanent",
                "total",
                "shifted_temporary",
                "shifted_permanent",
                "shifted_total",
                "total_diff_pct",
                "dcost_a_dkappa",
                "dcost_a_dlambda",
                "dcost_b_dkappa",
                "dcost_b_dlambda",
            ]);
            for k in kappa {
                let r = misestimation_row(lambda, k, opts, grid)?;
                report.push(vec![
                    r.lambda.into(),
                    r.kappa.into(),
                    r.shifted_kappa.into(),
                    r.base.temporary.into(),
                    r.base.permanent.into(),
                    r.base.total.into(),
                    r.shifted.temporary.into(),
                    r.shifted.permanent.into(),
                    r.shifted.total.into(),
                    (100.0 * r.rel_total_diff).into(),
                    r.partials_a.d_kappa.into(),
                    r.partials_a.d_lambda.into(),
                    r.partials_b.d_kappa.into(),
                    r.partials_b.d_lambda.into(),
                ]);
            }
            provenance(&mut report, "tables misestimation", grid);
            report.meta("options", serde_json::to_value(opts).expect("options serialize"));
            Ok(report)
        }
        Table::TempPerm { sigma, lambda, kappa } => {
            let mut report = Report::new(&[
                "lambda",
                "kappa",
                "best_temporary",
                "best_permanent",
                "best_total",
                "linear_temporary",
                "linear_permanent",
                "linear_total",
            ]);
            for &l in &lambda {
                for &k in &kappa {
                    let p = ImpactParams::new(k, l)?.with_sigma(sigma)?;
                    let (best, linear) = eager_competition_costs(&p, grid)?;
                    report.push(vec![
                        l.into(),
                        k.into(),
                        best.temporary.into(),
                        best.permanent.into(),
                        best.total.into(),
                        linear.temporary.into(),
                        linear.permanent.into(),
                        linear.total.into(),
                    ]);
                }
            }
            provenance(&mut report, "tables temp-perm", grid);
            report.meta("sigma", json!(sigma));
            Ok(report)
        }
    }
}

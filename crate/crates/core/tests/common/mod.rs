//! Reference implementations that share no code path with the library:
//! closed forms transcribed literally as printed, a brute-force discrete
//! Euler–Lagrange solver, and random smooth test strategies.
#![allow(dead_code)]

use std::f64::consts::PI;

use impact_games::{AnalyticStrategy, Family, SampledStrategy, Strategy, TimeGrid};
use rand::Rng;

pub fn grid(n: usize) -> TimeGrid {
    TimeGrid::new(n).unwrap()
}

pub fn analytic(family: Family) -> AnalyticStrategy {
    AnalyticStrategy::new(family).unwrap()
}

pub fn sup(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `max_i |s(t_i) - f(t_i)|`.
pub fn gap_to(s: &SampledStrategy, f: impl Fn(f64) -> f64) -> f64 {
    sup(s.grid().points().zip(s.values()).map(|(t, v)| v - f(t)))
}

// --- printed closed forms -------------------------------------------------

pub fn printed_two_trader_a(t: f64, k: f64, l: f64) -> f64 {
    let e = f64::exp;
    -((1.0 - e(-k * t / 3.0))
        * (-e(k / 3.0) * (e(k / 3.0) + e(2.0 * k / 3.0) + 1.0) * (l + 1.0)
            + (l - 1.0) * e(k * t / 3.0)
            + (l - 1.0) * e(2.0 * k * t / 3.0)
            + (l - 1.0) * e(k * t)))
        / (2.0 * (e(k) - 1.0))
}

pub fn printed_two_trader_b(t: f64, k: f64, l: f64) -> f64 {
    let e = f64::exp;
    ((1.0 - e(-k * t / 3.0))
        * (e(k / 3.0) * (e(k / 3.0) + e(2.0 * k / 3.0) + 1.0) * (l + 1.0)
            + (l - 1.0) * e(k * t / 3.0)
            + (l - 1.0) * e(2.0 * k * t / 3.0)
            + (l - 1.0) * e(k * t)))
        / (2.0 * (e(k) - 1.0) * l)
}

/// The λ = 1 special case.
pub fn printed_two_trader_unit(t: f64, k: f64) -> f64 {
    let e = f64::exp;
    (1.0 - e(-k * t / 3.0)) * (e(k / 3.0) + e(2.0 * k / 3.0) + e(k)) / (e(k) - 1.0)
}

pub fn printed_q(t: f64, k: f64, s: f64) -> f64 {
    (s * t).sinh() / s.sinh() + k / s * (s * t).cosh() / s.sinh()
}

pub fn printed_br_risk_averse(t: f64, k: f64, l: f64, s: f64) -> f64 {
    let q = |x| printed_q(x, k, s);
    l / 2.0 * (q(0.0) - q(t)) + (1.0 + l / 2.0 * (q(1.0) - q(0.0))) * t
}

pub fn printed_br_risk_neutral(t: f64, k: f64, l: f64) -> f64 {
    (1.0 + l * k / 4.0) * t - l * k / 4.0 * t * t
}

pub fn printed_br_eager(t: f64, k: f64, l: f64, s: f64) -> f64 {
    let e = f64::exp;
    e(-s * t)
        * (l * e(s) * (s - k) - t * e(s * t) * ((l + 2.0) * s - k * l)
            + e(s + s * t) * (-l * s + k * (l - l * t) + (l + 2.0) * s * t))
        / (2.0 * (e(s) - 1.0) * s)
}

pub fn printed_multi_limit(t: f64, k: f64) -> f64 {
    (1.0 - (-k * t).exp()) / (1.0 - (-k).exp())
}

pub fn printed_a1b(t: f64, k: f64, l: f64) -> f64 {
    let c = l * k / (l + 2.0);
    c.exp() * (1.0 - (-c * t).exp()) / (c.exp() - 1.0)
}

pub fn printed_b1b(t: f64, k: f64, l: f64) -> f64 {
    let c = k * l / (l + 2.0);
    let e = f64::exp;
    (e(c) * ((l * l - 1.0) * t + 1.0) - e(-c * (t - 1.0)) + l * l * (-t) + t)
        / (l * l * (e(c) - 1.0))
}

// --- brute-force discrete solvers ------------------------------------------

/// Tridiagonal solve by the Thomas algorithm (no pivoting).
pub fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = if i + 1 < n { sup[i] / m } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    x
}

/// Unit best response to `λ b` from the discrete Euler–Lagrange system
/// `2(a_{i+1} - 2a_i + a_{i-1})/h² = -λ(b̈ + κḃ)_i` with `a_0 = 0`, `a_n = 1`.
/// `b̈`, `ḃ` are second-order central differences of the samples.
pub fn brute_force_response(b: &[f64], kappa: f64, lambda: f64) -> Vec<f64> {
    let n = b.len() - 1;
    let h = 1.0 / n as f64;
    let m = n - 1;
    let mut rhs = vec![0.0; m];
    for i in 1..n {
        let ddb = (b[i + 1] - 2.0 * b[i] + b[i - 1]) / (h * h);
        let db = (b[i + 1] - b[i - 1]) / (2.0 * h);
        rhs[i - 1] = -0.5 * lambda * (ddb + kappa * db) * h * h;
    }
    rhs[m - 1] -= 1.0;
    let inner = thomas(&vec![1.0; m], &vec![-2.0; m], &vec![1.0; m], &rhs);
    let mut a = vec![0.0];
    a.extend(inner);
    a.push(1.0);
    a
}

/// `y'' + κ y' = f(t)`, `y(0) = 0`, `y(1) = 1`, by central differences on `n`
/// intervals.
fn linear_bvp(n: usize, kappa: f64, f: &impl Fn(f64) -> f64) -> Vec<f64> {
    let h = 1.0 / n as f64;
    let m = n - 1;
    let lo = 1.0 / (h * h) - kappa / (2.0 * h);
    let hi = 1.0 / (h * h) + kappa / (2.0 * h);
    let mut rhs: Vec<f64> = (1..n).map(|i| f(i as f64 * h)).collect();
    rhs[m - 1] -= hi;
    let inner = thomas(&vec![lo; m], &vec![-2.0 / (h * h); m], &vec![hi; m], &rhs);
    let mut y = vec![0.0];
    y.extend(inner);
    y.push(1.0);
    y
}

/// [`linear_bvp`] on `n` and `2n` intervals, Richardson-combined on `n`.
pub fn linear_bvp_extrapolated(n: usize, kappa: f64, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let coarse = linear_bvp(n, kappa, &f);
    let fine = linear_bvp(2 * n, kappa, &f);
    (0..=n).map(|i| (4.0 * fine[2 * i] - coarse[i]) / 3.0).collect()
}

// --- random smooth strategies -----------------------------------------------

/// `Σ c_k sin(kπt)`: vanishes at both ends.
#[derive(Debug, Clone)]
pub struct SineSeries(pub Vec<f64>);

impl SineSeries {
    pub fn random(rng: &mut impl Rng, terms: usize, amplitude: f64) -> Self {
        Self(
            (1..=terms)
                .map(|k| amplitude * rng.gen_range(-1.0..1.0) / k as f64)
                .collect(),
        )
    }

    /// Value, first and second derivative.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        self.0.iter().enumerate().fold((0.0, 0.0, 0.0), |(v, d, dd), (k, c)| {
            let w = (k + 1) as f64 * PI;
            (
                v + c * (w * t).sin(),
                d + c * w * (w * t).cos(),
                dd - c * w * w * (w * t).sin(),
            )
        })
    }
}

/// `base + ε δ` with exact derivatives.
pub fn shifted(base: &impl Strategy, delta: &SineSeries, eps: f64, g: &TimeGrid) -> SampledStrategy {
    let s = base.tabulate(g).unwrap();
    let (mut v, mut d, mut dd) = (
        s.values().to_vec(),
        s.first_deriv().to_vec(),
        s.second_deriv().to_vec(),
    );
    for (i, t) in g.points().enumerate() {
        let (x, dx, ddx) = delta.eval(t);
        v[i] += eps * x;
        d[i] += eps * dx;
        dd[i] += eps * ddx;
    }
    SampledStrategy::from_parts(*g, v, d, dd).unwrap()
}

/// `t + δ(t)` for a random sine series `δ`.
pub fn random_unit(rng: &mut impl Rng, g: &TimeGrid) -> SampledStrategy {
    let delta = SineSeries::random(rng, 5, 0.6);
    shifted(&analytic(Family::RiskNeutral), &delta, 1.0, g)
}

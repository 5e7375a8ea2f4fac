//! Grid calculus: finite differences, Simpson quadrature, exponentially
//! weighted convolutions and a few cancellation-free exponential helpers.

/// `(e^x - 1) / x`, continuous at zero.
pub fn exprel(x: f64) -> f64 {
    if x.abs() < 0.5 {
        series(x, 1)
    } else {
        x.exp_m1() / x
    }
}

/// `(e^x - 1 - x) / x^2`, continuous at zero.
pub fn exprel2(x: f64) -> f64 {
    if x.abs() < 0.5 {
        series(x, 2)
    } else {
        (x.exp_m1() - x) / (x * x)
    }
}

/// `(e^x - 1 - x - x^2/2) / x^3`, continuous at zero.
pub fn exprel3(x: f64) -> f64 {
    if x.abs() < 0.5 {
        series(x, 3)
    } else {
        (x.exp_m1() - x - 0.5 * x * x) / (x * x * x)
    }
}

/// `sum_k x^k / (k + order)!`
fn series(x: f64, order: u32) -> f64 {
    let mut term = 1.0 / (1..=order).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..40 {
        term *= x / f64::from(k + order);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `sinh(x) - x` without cancellation for small `x`.
pub fn sinh_minus_x(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        x * x2 * (1.0 / 6.0 + x2 * (1.0 / 120.0 + x2 * (1.0 / 5040.0 + x2 / 362_880.0)))
    } else {
        x.sinh() - x
    }
}

/// Finite-difference weights for the `m`-th derivative at `z` from samples at
/// `nodes` (Fornberg's recursion). Row `k` holds the weights of derivative `k`.
fn fornberg(z: f64, nodes: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Half-width of the central stencil; the schemes are sixth order.
const HALF: usize = 3;
/// Width of the one-sided windows used within `HALF` nodes of either end.
const EDGE: usize = 2 * HALF + 2;

/// Sixth-order derivative of order `m` (1 or 2) of uniformly spaced samples.
///
/// Seven-point central stencils in the interior; near each end the weights
/// come from the eight samples closest to that end.
fn derivative(f: &[f64], h: f64, m: usize) -> Vec<f64> {
    let n = f.len();
    assert!(n >= EDGE, "need at least {EDGE} samples");
    let scale = h.powi(m as i32);
    let window: Vec<f64> = (0..EDGE).map(|k| k as f64).collect();
    let central: Vec<f64> = (0..=2 * HALF).map(|k| k as f64 - HALF as f64).collect();
    let wc = &fornberg(0.0, &central, m)[m];
    let apply = |w: &[f64], start: usize| -> f64 {
        w.iter().zip(&f[start..]).map(|(a, b)| a * b).sum::<f64>() / scale
    };
    let mut d = vec![0.0; n];
    for i in 0..HALF {
        let w = &fornberg(i as f64, &window, m)[m];
        d[i] = apply(w, 0);
        // mirrored window at the far end; odd derivatives flip sign
        let mirrored: Vec<f64> = w.iter().rev().map(|x| if m % 2 == 1 { -x } else { *x }).collect();
        d[n - 1 - i] = apply(&mirrored, n - EDGE);
    }
    for i in HALF..n - HALF {
        d[i] = apply(wc, i - HALF);
    }
    d
}

/// Sixth-order first derivative of uniformly spaced samples. Needs at least eight samples.
pub fn first_derivative(f: &[f64], h: f64) -> Vec<f64> {
    derivative(f, h, 1)
}

/// Sixth-order second derivative of uniformly spaced samples. Needs at least eight samples.
pub fn second_derivative(f: &[f64], h: f64) -> Vec<f64> {
    derivative(f, h, 2)
}

/// Composite Simpson rule over samples with an even number of intervals.
pub fn simpson(f: &[f64], h: f64) -> f64 {
    let n = f.len() - 1;
    assert!(n % 2 == 0 && n >= 2, "Simpson needs an even number of intervals");
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..n {
        if i % 2 == 1 {
            odd += f[i];
        } else {
            even += f[i];
        }
    }
    h / 3.0 * (f[0] + f[n] + 4.0 * odd + 2.0 * even)
}

/// Running integral `F[i] = ∫_0^{t_i} f`.
///
/// Even nodes carry the composite Simpson sum, so the last entry equals
/// [`simpson`] up to summation order. Odd nodes use the parabola through the
/// enclosing panel integrated over its first half.
pub fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len() - 1;
    assert!(n % 2 == 0 && n >= 2, "Simpson needs an even number of intervals");
    let mut out = vec![0.0; n + 1];
    let mut acc = 0.0;
    for k in (0..n).step_by(2) {
        let (f0, f1, f2) = (f[k], f[k + 1], f[k + 2]);
        out[k + 1] = acc + h / 12.0 * (5.0 * f0 + 8.0 * f1 - f2);
        acc += h / 3.0 * (f0 + 4.0 * f1 + f2);
        out[k + 2] = acc;
    }
    out
}

/// Running integral `∫_0^{t_i} f` with a tenth-order interpolatory rule.
///
/// Each interval integrates the degree-9 interpolant through a ten-point
/// window (centred where possible), so the value at the last node is also the
/// total. Needs at least ten samples.
pub fn cumulative_integral(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len() - 1;
    assert!(f.len() >= PANEL, "need at least {PANEL} samples");
    let table: Vec<[f64; PANEL]> = (0..PANEL - 1).map(interval_weights).collect();
    let mut out = vec![0.0; n + 1];
    // Neumaier-compensated running sum
    let (mut acc, mut comp) = (0.0f64, 0.0f64);
    for i in 0..n {
        let start = i.saturating_sub(PANEL / 2 - 1).min(n + 1 - PANEL);
        let w = &table[i - start];
        let x = h * w.iter().zip(&f[start..start + PANEL]).map(|(w, v)| w * v).sum::<f64>();
        let t = acc + x;
        comp += if acc.abs() >= x.abs() { (acc - t) + x } else { (x - t) + acc };
        acc = t;
        out[i + 1] = acc + comp;
    }
    out
}

/// Total of [`cumulative_integral`].
pub fn integral(f: &[f64], h: f64) -> f64 {
    *cumulative_integral(f, h).last().unwrap()
}

const PANEL: usize = 10;

// ∫_k^{k+1} L_j(x) dx for the Lagrange basis on nodes 0..PANEL; five-point
// Gauss-Legendre is exact for degree 9.
fn interval_weights(k: usize) -> [f64; PANEL] {
    let r = 2.0 * (10.0f64 / 7.0).sqrt();
    let (x1, x2) = ((5.0 - r).sqrt() / 3.0, (5.0 + r).sqrt() / 3.0);
    let s70 = 13.0 * 70f64.sqrt();
    let (w1, w2) = ((322.0 + s70) / 900.0, (322.0 - s70) / 900.0);
    let gauss = [(-x2, w2), (-x1, w1), (0.0, 128.0 / 225.0), (x1, w1), (x2, w2)];
    let mut out = [0.0; PANEL];
    for (u, gw) in gauss {
        let x = k as f64 + 0.5 * (1.0 + u);
        for (j, o) in out.iter_mut().enumerate() {
            let mut l = 1.0;
            for m in 0..PANEL {
                if m != j {
                    l *= (x - m as f64) / (j as f64 - m as f64);
                }
            }
            *o += 0.5 * gw * l;
        }
    }
    out
}

/// `J[i] = ∫_0^{t_i} e^{-rate (t_i - s)} f(s) ds` on a uniform grid.
///
/// Each step multiplies by the exact decay factor and integrates the
/// exponential weight against the cubic through four neighbouring samples,
/// so the result is fourth-order accurate and exact in the decay for any rate.
pub fn exp_convolution(f: &[f64], rate: f64, h: f64) -> Vec<f64> {
    let n = f.len() - 1;
    assert!(n >= 3, "need at least three intervals");
    let z = rate * h;
    let decay = (-z).exp();
    let moments = exp_moments(z);
    let first = lagrange_weights([0, 1, 2, 3], &moments);
    let inner = lagrange_weights([-1, 0, 1, 2], &moments);
    let last = lagrange_weights([-2, -1, 0, 1], &moments);

    let mut out = vec![0.0; n + 1];
    for i in 0..n {
        let (w, offsets): (&[f64; 4], [isize; 4]) = if i == 0 {
            (&first, [0, 1, 2, 3])
        } else if i == n - 1 {
            (&last, [-2, -1, 0, 1])
        } else {
            (&inner, [-1, 0, 1, 2])
        };
        let step: f64 = w
            .iter()
            .zip(offsets)
            .map(|(wj, o)| wj * f[(i as isize + o) as usize])
            .sum();
        out[i + 1] = decay * out[i] + h * step;
    }
    out
}

/// `M_m = ∫_0^1 e^{-z (1 - x)} x^m dx` for `m = 0..4`.
fn exp_moments(z: f64) -> [f64; 4] {
    let mut m = [0.0; 4];
    if z.abs() <= 1.0 {
        for (k, slot) in m.iter_mut().enumerate() {
            // sum_j (-z)^j k! / (k + j + 1)!
            let mut term = 1.0 / (k as f64 + 1.0);
            let mut sum = term;
            for j in 1..60 {
                term *= -z / (k as f64 + j as f64 + 1.0);
                sum += term;
                if term.abs() < 1e-18 * sum.abs() {
                    break;
                }
            }
            *slot = sum;
        }
    } else {
        m[0] = -(-z).exp_m1() / z;
        for k in 1..4 {
            m[k] = (1.0 - k as f64 * m[k - 1]) / z;
        }
    }
    m
}

/// Weights `w_j = ∫_0^1 e^{-z(1-x)} L_j(x) dx` for the cubic Lagrange basis on `nodes`.
fn lagrange_weights(nodes: [isize; 4], moments: &[f64; 4]) -> [f64; 4] {
    let mut w = [0.0; 4];
    for j in 0..4 {
        // monomial coefficients of prod_{k != j} (x - o_k) / (o_j - o_k)
        let mut poly = [1.0, 0.0, 0.0, 0.0];
        let mut deg = 0;
        let mut denom = 1.0;
        for k in 0..4 {
            if k == j {
                continue;
            }
            let root = nodes[k] as f64;
            for d in (0..=deg).rev() {
                poly[d + 1] += poly[d];
                poly[d] *= -root;
            }
            deg += 1;
            denom *= (nodes[j] - nodes[k]) as f64;
        }
        w[j] = poly.iter().zip(moments).map(|(c, m)| c * m).sum::<f64>() / denom;
    }
    w
}

//! Small derivative-free optimizers and root finders.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearch {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Golden-section search for an extremum of a unimodal `f` on `[lo, hi]`.
///
/// Stops when the bracket is narrower than `rel_tol * max(1, |x|)`.
pub fn golden_section(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    maximize: bool,
) -> LineSearch {
    let sign = if maximize { -1.0 } else { 1.0 };
    let g = |x: f64| sign * f(x);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    let mut iterations = 0;
    while (b - a) > rel_tol * (0.5 * (a + b)).abs().max(1.0) && iterations < 500 {
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d);
        }
        iterations += 1;
    }
    let x = 0.5 * (a + b);
    LineSearch {
        x,
        fx: f(x),
        iterations,
    }
}

/// Bisection for a sign change of `g` on `[lo, hi]`, to absolute width `tol`.
pub fn bisect_root(g: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<LineSearch> {
    let (mut a, mut b) = (lo, hi);
    let (ga, gb) = (g(a), g(b));
    if ga == 0.0 {
        return Ok(LineSearch { x: a, fx: 0.0, iterations: 0 });
    }
    if gb == 0.0 {
        return Ok(LineSearch { x: b, fx: 0.0, iterations: 0 });
    }
    if ga.signum() == gb.signum() || ga.is_nan() || gb.is_nan() {
        return Err(Error::NoConvergence {
            method: "bisection (no sign change)",
            iterations: 0,
        });
    }
    let a_negative = ga < 0.0;
    let mut iterations = 0;
    while b - a > tol && iterations < 2000 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = g(m);
        if gm == 0.0 {
            return Ok(LineSearch { x: m, fx: 0.0, iterations });
        }
        if (gm < 0.0) == a_negative {
            a = m;
        } else {
            b = m;
        }
        iterations += 1;
    }
    let x = 0.5 * (a + b);
    Ok(LineSearch {
        x,
        fx: g(x),
        iterations,
    })
}

/// Five-point central difference, truncation error `O(h^4)`.
pub fn central_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Nelder–Mead minimization with the standard coefficients.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    steps: &[f64],
    f_tol: f64,
    max_iter: usize,
) -> Simplex {
    let dim = x0.len();
    let mut pts: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..dim {
        let mut p = x0.to_vec();
        p[i] += steps[i];
        pts.push(p);
    }
    let eval = |p: &[f64]| {
        let v = f(p);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut vals: Vec<f64> = pts.iter().map(|p| eval(p)).collect();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iter {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let spread = (vals[dim] - vals[0]).abs();
        let size = pts[1..]
            .iter()
            .flat_map(|p| p.iter().zip(&pts[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= f_tol * (1.0 + vals[0].abs()) && size <= 1e-9 {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..dim)
            .map(|j| pts[..dim].iter().map(|p| p[j]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&pts[dim])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let reflected = along(-1.0);
        let fr = eval(&reflected);
        if fr < vals[0] {
            let expanded = along(-2.0);
            let fe = eval(&expanded);
            if fe < fr {
                pts[dim] = expanded;
                vals[dim] = fe;
            } else {
                pts[dim] = reflected;
                vals[dim] = fr;
            }
        } else if fr < vals[dim - 1] {
            pts[dim] = reflected;
            vals[dim] = fr;
        } else {
            let (contracted, fc) = if fr < vals[dim] {
                let p = along(-0.5);
                let v = eval(&p);
                (p, v)
            } else {
                let p = along(0.5);
                let v = eval(&p);
                (p, v)
            };
            if fc < vals[dim].min(fr) {
                pts[dim] = contracted;
                vals[dim] = fc;
            } else {
                for i in 1..=dim {
                    let shrunk: Vec<f64> = pts[i]
                        .iter()
                        .zip(&pts[0])
                        .map(|(p, b)| b + 0.5 * (p - b))
                        .collect();
                    vals[i] = eval(&shrunk);
                    pts[i] = shrunk;
                }
            }
        }
    }

    let best = (0..=dim)
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .expect("nonempty simplex");
    Simplex {
        x: pts[best].clone(),
        fx: vals[best],
        iterations,
        converged,
    }
}

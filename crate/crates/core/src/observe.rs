//! Order parameter and derived diagnostics.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Below this modulus the mean phase is reported as 0.
pub const PSI_DEGENERATE_R: f64 = 1e-12;

/// `R e^{iψ} = (1/N) Σ_j e^{iθ_j}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderParameter {
    /// Phase coherence in `[0, 1]`.
    pub r: f64,
    /// Mean phase, principal value in `(−π, π]`.
    pub psi: f64,
}

/// Maps an angle to `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

pub fn order_parameter(theta: &[f64]) -> Result<OrderParameter> {
    if theta.is_empty() {
        return Err(Error::param("order parameter of an empty population"));
    }
    let (mut re, mut im) = (0.0, 0.0);
    for &t in theta {
        let (s, c) = t.sin_cos();
        re += c;
        im += s;
    }
    let n = theta.len() as f64;
    let (re, im) = (re / n, im / n);
    Ok(from_mean(re, im))
}

pub(crate) fn from_mean(re: f64, im: f64) -> OrderParameter {
    let r = re.hypot(im).min(1.0);
    let psi = if r < PSI_DEGENERATE_R {
        0.0
    } else {
        let a = im.atan2(re);
        // atan2 returns −π for (−x, −0.0)
        if a <= -PI {
            PI
        } else {
            a
        }
    };
    OrderParameter { r, psi }
}

/// Mean and population standard deviation of the last `tail` values.
pub fn tail_stats(series: &[f64], tail: usize) -> Result<(f64, f64)> {
    if tail == 0 || tail > series.len() {
        return Err(Error::param(format!("tail of {tail} values requested from a series of {}", series.len())));
    }
    let window = &series[series.len() - tail..];
    let n = tail as f64;
    let mean = window.iter().sum::<f64>() / n;
    let var = window.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    Ok((mean, var.sqrt()))
}

/// `dR/dK` on an ascending grid: central differences inside, one-sided at the ends.
///
/// Central differences use the non-uniform three-point formula, which is exact
/// for quadratics on any grid.
pub fn dr_dk(k: &[f64], r: &[f64]) -> Result<Vec<f64>> {
    if k.len() != r.len() {
        return Err(Error::param(format!("{} K values but {} R values", k.len(), r.len())));
    }
    if k.len() < 3 {
        return Err(Error::param("dR/dK needs at least three points"));
    }
    if k.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::param("K values must be strictly ascending"));
    }
    let m = k.len();
    let mut d = Vec::with_capacity(m);
    d.push((r[1] - r[0]) / (k[1] - k[0]));
    for i in 1..m - 1 {
        let (h0, h1) = (k[i] - k[i - 1], k[i + 1] - k[i]);
        let v = if h0 == h1 {
            (r[i + 1] - r[i - 1]) / (h0 + h1)
        } else {
            (-h1 / (h0 * (h0 + h1))) * r[i - 1] + ((h1 - h0) / (h0 * h1)) * r[i] + (h0 / (h1 * (h0 + h1))) * r[i + 1]
        };
        d.push(v);
    }
    d.push((r[m - 1] - r[m - 2]) / (k[m - 1] - k[m - 2]));
    Ok(d)
}

/// Location and height of the largest peak of a sampled curve, with two
/// half-height widths. `width` spans the outermost half-height crossings, so
/// it measures the whole region where the curve exceeds half its maximum.
/// `core_width` spans the crossings nearest the maximum; on noisy data it
/// tends to measure the spike at the maximum rather than the peak.
/// Crossings are linearly interpolated; a side that never drops below half
/// height is clipped at the grid end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub x: f64,
    pub height: f64,
    pub width: f64,
    pub core_width: f64,
}

pub fn peak_and_width(x: &[f64], y: &[f64]) -> Result<Peak> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::param("peak search needs matching, nonempty x and y"));
    }
    let (imax, &height) =
        y.iter().enumerate().fold((0, &f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
    let half = height / 2.0;
    let last = x.len() - 1;
    // interpolated crossing between samples i and i + 1
    let cross = |i: usize| x[i] + (half - y[i]) / (y[i + 1] - y[i]) * (x[i + 1] - x[i]);

    let core_left = (0..imax).rev().find(|&i| y[i] < half).map_or(x[0], cross);
    let core_right = (imax + 1..=last).find(|&i| y[i] < half).map_or(x[last], |i| cross(i - 1));
    let above: Vec<usize> = (0..=last).filter(|&i| y[i] >= half).collect();
    let (first, final_) = (above[0], above[above.len() - 1]);
    let left = if first == 0 { x[0] } else { cross(first - 1) };
    let right = if final_ == last { x[last] } else { cross(final_) };
    Ok(Peak { x: x[imax], height, width: right - left, core_width: core_right - core_left })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;

    #[test]
    fn coherent_population() {
        let op = order_parameter(&[2.0; 7]).unwrap();
        assert!((op.r - 1.0).abs() < 1e-15);
        assert!((op.psi - 2.0).abs() < 1e-14);
        let op = order_parameter(&[5.0; 3]).unwrap();
        assert!((op.psi - wrap_angle(5.0)).abs() < 1e-14);
        assert!(op.r <= 1.0);
    }

    #[test]
    fn antipodal_pair() {
        let op = order_parameter(&[0.0, PI]).unwrap();
        assert!(op.r < 1e-15);
        assert_eq!(op.psi, 0.0);
    }

    #[test]
    fn quarter_turn_pair() {
        let op = order_parameter(&[0.0, FRAC_PI_2]).unwrap();
        assert!((op.r - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((op.psi - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn psi_is_pi_not_minus_pi() {
        let op = order_parameter(&[PI, -PI]).unwrap();
        assert_eq!(op.psi, PI);
        assert_eq!(wrap_angle(-PI), PI);
    }

    #[test]
    fn empty_population_errors() {
        assert!(order_parameter(&[]).is_err());
    }

    #[test]
    fn tail_examples() {
        assert_eq!(tail_stats(&[0.5; 10], 10).unwrap(), (0.5, 0.0));
        let mut s = vec![0.0; 20];
        s.extend([1.0, 1.0]);
        assert_eq!(tail_stats(&s, 2).unwrap(), (1.0, 0.0));
        let (m, sd) = tail_stats(&[0.9, 0.4, 0.6, 0.4, 0.6], 4).unwrap();
        assert!((m - 0.5).abs() < 1e-15);
        assert!((sd - 0.1).abs() < 1e-15);
        assert!(tail_stats(&[1.0], 2).is_err());
        assert!(tail_stats(&[1.0], 0).is_err());
    }

    #[test]
    fn derivative_examples() {
        let d = dr_dk(&[0.0, 0.1, 0.2], &[0.0, 0.2, 0.4]).unwrap();
        for v in d {
            assert!((v - 2.0).abs() < 1e-12);
        }
        assert!(dr_dk(&[0.0, 0.5, 1.0], &[0.3; 3]).unwrap().iter().all(|&v| v == 0.0));

        let k: Vec<f64> = (0..=100).map(|i| i as f64 * 0.01).collect();
        let r: Vec<f64> = k.iter().map(|x| x * x).collect();
        let d = dr_dk(&k, &r).unwrap();
        assert!((d[50] - 1.0).abs() < 1e-12, "{}", d[50]);
    }

    #[test]
    fn nonuniform_grid_exact_for_quadratic() {
        let k = [0.0, 0.1, 0.35, 0.4, 1.0];
        let r: Vec<f64> = k.iter().map(|x| 3.0 * x * x - x + 2.0).collect();
        let d = dr_dk(&k, &r).unwrap();
        for i in 1..4 {
            assert!((d[i] - (6.0 * k[i] - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_rejects_bad_grids() {
        assert!(dr_dk(&[0.0, 0.1], &[0.0, 0.1]).is_err());
        assert!(dr_dk(&[0.0, 0.2, 0.1], &[0.0; 3]).is_err());
        assert!(dr_dk(&[0.0, 0.1, 0.1], &[0.0; 3]).is_err());
        assert!(dr_dk(&[0.0, 0.1, 0.2], &[0.0; 2]).is_err());
    }

    #[test]
    fn triangle_peak_width() {
        let x: Vec<f64> = (0..=10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|&v| (4.0 - (v - 5.0f64).abs()).max(0.0)).collect();
        let p = peak_and_width(&x, &y).unwrap();
        assert_eq!(p.x, 5.0);
        assert_eq!(p.height, 4.0);
        assert!((p.width - 4.0).abs() < 1e-12);
        assert!((p.core_width - 4.0).abs() < 1e-12);
    }

    #[test]
    fn widths_differ_for_a_notched_peak() {
        // Two lobes of height 4 and 3.5 separated by a dip to 1.
        let x: Vec<f64> = (0..=8).map(|i| i as f64).collect();
        let y = [0.0, 0.0, 3.5, 1.0, 4.0, 0.0, 0.0, 0.0, 0.0];
        let p = peak_and_width(&x, &y).unwrap();
        assert_eq!(p.x, 4.0);
        // core: crossings at 3 + 1/3 and 4.5
        assert!((p.core_width - (4.5 - (3.0 + 1.0 / 3.0))).abs() < 1e-12);
        // outer: first crossing at 1 + 2/3.5
        assert!((p.width - (4.5 - (1.0 + 2.0 / 3.5))).abs() < 1e-12);
    }
}

//! Numerics on the Eguchi-Hanson family `g = f⁻¹dr² + (r²/4)(σ₁² + σ₂² + fσ₃²)`,
//! `f = 1 − a⁴/r⁴`, and on perturbed flat metrics `g₀ + h₀`.
//!
//! The CMC leaves of Eguchi-Hanson are the `r`-spheres, so everything reduces to closed
//! forms in `R` plus one scalar root solve. The excess `R⁴ − ρ⁴` is computed from
//! `u = a⁴/R⁴` without subtracting two large numbers.

use std::f64::consts::PI;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::MatQ;
use crate::gaugeclassify::{check_kernel_conditions, GaugeError};
use crate::ratpoly::{int, rat, to_f64, RadialFn, Rational};
use crate::tensorcalc::TensorField;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EhError {
    #[error("bolt parameter must be finite and nonnegative, got {0}")]
    BadParameter(f64),
    #[error("radius {r} is not above the bolt a = {a}")]
    OutOfDomain { r: f64, a: f64 },
    #[error("no bracket for H(R) = 3/rho at rho = {0}")]
    NoBracket(f64),
    #[error("grid too small: {0}")]
    GridTooSmall(String),
    #[error("g0 + h is not positive definite at a sample point; reduce the amplitude")]
    MetricNotPositive,
    #[error("sample direction is not a unit vector")]
    NotUnit,
    #[error(transparent)]
    Gauge(#[from] GaugeError),
}

/// Area of the unit `S³/ℤ₂`.
pub const AREA_S3_Z2: f64 = PI * PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EhConfig {
    pub a: f64,
}

impl EhConfig {
    pub fn new(a: f64) -> Result<Self, EhError> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(EhError::BadParameter(a));
        }
        Ok(Self { a })
    }

    fn u(&self, r: f64) -> f64 {
        (self.a / r).powi(4)
    }

    pub fn f(&self, r: f64) -> f64 {
        1.0 - self.u(r)
    }

    /// Closed-form limit `−π²a⁴/12`.
    pub fn exact_renormalized_volume(&self) -> f64 {
        -PI * PI * self.a.powi(4) / 12.0
    }
}

/// Mean curvature of the `r = R` sphere: `3√f/R + f′/(2√f)`.
pub fn eh_mean_curvature(cfg: &EhConfig, r: f64) -> Result<f64, EhError> {
    if !(r > cfg.a) || !r.is_finite() {
        return Err(EhError::OutOfDomain { r, a: cfg.a });
    }
    let u = cfg.u(r);
    Ok((3.0 - u) / (r * (1.0 - u).sqrt()))
}

fn dh_dr(cfg: &EhConfig, r: f64) -> f64 {
    let u = cfg.u(r);
    let phi = (3.0 - u) / (1.0 - u).sqrt();
    let dphi = (1.0 + u) / (2.0 * (1.0 - u).powf(1.5));
    -(phi + 4.0 * u * dphi) / (r * r)
}

/// Radius `R > a` of the sphere with mean curvature `3/ρ`.
pub fn cmc_radius(cfg: &EhConfig, rho: f64) -> Result<f64, EhError> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(EhError::NoBracket(rho));
    }
    let target = 3.0 / rho;
    // H ≥ 3/R everywhere, so the root lies at or beyond ρ.
    let mut lo = rho.max(cfg.a);
    if lo > cfg.a && eh_mean_curvature(cfg, lo)? <= target {
        return Ok(lo);
    }
    let mut hi = 2.0 * lo;
    let mut tries = 0;
    while eh_mean_curvature(cfg, hi)? >= target {
        hi *= 2.0;
        tries += 1;
        if tries > 200 {
            return Err(EhError::NoBracket(rho));
        }
    }
    let tol = |r: f64| 1e-12_f64.max(4.0 * f64::EPSILON * r);
    while hi - lo > tol(hi) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eh_mean_curvature(cfg, mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut r = 0.5 * (lo + hi);
    for _ in 0..4 {
        let step = (eh_mean_curvature(cfg, r)? - target) / dh_dr(cfg, r);
        let next = r - step;
        if !(next > lo && next < hi) {
            break;
        }
        r = next;
        if step.abs() <= tol(r) {
            break;
        }
    }
    Ok(r)
}

/// `R⁴ − ρ⁴ = a⁴ P(u)/(1 − u/3)⁴` at the CMC radius `R`, with
/// `P(u) = 2/3 − u/3 − 4u²/27 + u³/81`.
pub fn excess(cfg: &EhConfig, r: f64) -> f64 {
    let u = cfg.u(r);
    let p = 2.0 / 3.0 - u / 3.0 - 4.0 * u * u / 27.0 + u * u * u / 81.0;
    cfg.a.powi(4) * p / (1.0 - u / 3.0).powi(4)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CmcRecord {
    pub rho: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub vol_g: f64,
    pub vol_flat: f64,
    #[serde(rename = "V_rho")]
    pub v_rho: f64,
}

pub fn cmc_record(cfg: &EhConfig, rho: f64) -> Result<CmcRecord, EhError> {
    let r = cmc_radius(cfg, rho)?;
    let a4 = cfg.a.powi(4);
    Ok(CmcRecord {
        rho,
        r,
        vol_g: PI * PI * (r.powi(4) - a4) / 4.0,
        vol_flat: PI * PI * rho.powi(4) / 4.0,
        v_rho: PI * PI / 4.0 * (excess(cfg, r) - a4),
    })
}

pub fn profile(cfg: &EhConfig, grid: &[f64]) -> Result<Vec<CmcRecord>, EhError> {
    grid.iter().map(|&rho| cmc_record(cfg, rho)).collect()
}

/// `n` points from `min` to `max`, evenly spaced in `log ρ`.
pub fn geometric_grid(min: f64, max: f64, n: usize) -> Result<Vec<f64>, EhError> {
    if n < 3 || !(min > 0.0 && max > min && max.is_finite()) {
        return Err(EhError::GridTooSmall(format!(
            "need at least 3 points on 0 < min < max, got {n} on [{min}, {max}]"
        )));
    }
    let (l0, l1) = (min.ln(), max.ln());
    Ok((0..n)
        .map(|i| {
            if i == 0 {
                min
            } else if i == n - 1 {
                max
            } else {
                (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect())
}

/// Least-squares line `y = c0 + c1·x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    pub max_residual: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> LineFit {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = my - slope * mx;
    let max_residual = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    LineFit {
        intercept,
        slope,
        max_residual,
    }
}

fn check_grid(cfg: &EhConfig, grid: &[f64]) -> Result<(), EhError> {
    if grid.len() < 3 {
        return Err(EhError::GridTooSmall(format!(
            "{} points, need at least 3",
            grid.len()
        )));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(EhError::GridTooSmall(
            "grid must be strictly increasing".into(),
        ));
    }
    if grid[0] < 10.0 * cfg.a {
        return Err(EhError::GridTooSmall(format!(
            "rho_min = {} is below 10a = {}",
            grid[0],
            10.0 * cfg.a
        )));
    }
    Ok(())
}

/// Extrapolated limit of a quantity `y(ρ) = limit + c·ρ⁻⁴`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub value: f64,
    pub c: f64,
    /// `max |residual| / |value|` (absolute when `value = 0`).
    pub rel_residual: f64,
}

fn extrapolate(grid: &[f64], ys: &[f64]) -> Extrapolation {
    let xs: Vec<f64> = grid.iter().map(|r| r.powi(-4)).collect();
    let fit = fit_line(&xs, ys);
    let scale = if fit.intercept == 0.0 {
        1.0
    } else {
        fit.intercept.abs()
    };
    Extrapolation {
        value: fit.intercept,
        c: fit.slope,
        rel_residual: fit.max_residual / scale,
    }
}

/// Renormalized volume from `V(ρ) = Vol_g(Ω_ρ) − Vol_flat(B_ρ/ℤ₂)` fitted as `𝒱 + cρ⁻⁴`.
pub fn renvol_estimate(cfg: &EhConfig, grid: &[f64]) -> Result<Extrapolation, EhError> {
    check_grid(cfg, grid)?;
    let recs = profile(cfg, grid)?;
    let ys: Vec<f64> = recs.iter().map(|r| r.v_rho).collect();
    Ok(extrapolate(grid, &ys))
}

/// Decay exponent of `V(ρ) − 𝒱`, read off the consecutive differences of `V` on a
/// geometric grid (independent of the fitted limit).
pub fn renvol_remainder_exponent(cfg: &EhConfig, grid: &[f64]) -> Result<f64, EhError> {
    check_grid(cfg, grid)?;
    let recs = profile(cfg, grid)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for w in recs.windows(2) {
        let d = (w[1].v_rho - w[0].v_rho).abs();
        if d > 0.0 {
            xs.push(w[0].rho.ln());
            ys.push(d.ln());
        }
    }
    if xs.len() < 2 {
        return Ok(f64::INFINITY);
    }
    Ok(-fit_line(&xs, &ys).slope)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BFit {
    pub b: f64,
    pub c: f64,
    pub rel_residual: f64,
    /// `b·|S³/ℤ₂|`, to be compared with `−4𝒱`.
    pub b_times_area: f64,
}

/// `b` in `u = R² = ρ² + bρ⁻² + O(ρ⁻⁶)`, fitted from `ρ²(R² − ρ²) = b + cρ⁻⁴`.
pub fn u_expansion_b(cfg: &EhConfig, grid: &[f64]) -> Result<BFit, EhError> {
    check_grid(cfg, grid)?;
    let mut ys = Vec::with_capacity(grid.len());
    for &rho in grid {
        let r = cmc_radius(cfg, rho)?;
        // R² − ρ² = (R⁴ − ρ⁴)/(R² + ρ²)
        ys.push(rho * rho * excess(cfg, r) / (r * r + rho * rho));
    }
    let e = extrapolate(grid, &ys);
    Ok(BFit {
        b: e.value,
        c: e.c,
        rel_residual: e.rel_residual,
        b_times_area: e.value * AREA_S3_Z2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RosReport {
    pub rho: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// `|Ω_ρ| ≤ (ρ/4)|Σ_ρ|` for the CMC leaf.
pub fn ros_check(cfg: &EhConfig, rho: f64) -> Result<RosReport, EhError> {
    let r = cmc_radius(cfg, rho)?;
    let lhs = PI * PI * (r.powi(4) - cfg.a.powi(4)) / 4.0;
    let rhs = rho / 4.0 * PI * PI * r.powi(3) * cfg.f(r).sqrt();
    Ok(RosReport {
        rho,
        lhs,
        rhs,
        ok: lhs <= rhs * (1.0 + 1e-12),
    })
}

/// Rational unit vectors on `S³` used as sample directions.
pub fn default_directions() -> Vec<[Rational; 4]> {
    let raw: [([i64; 4], i64); 16] = [
        ([1, 0, 0, 0], 1),
        ([0, 1, 0, 0], 1),
        ([0, 0, 1, 0], 1),
        ([0, 0, 0, 1], 1),
        ([1, 1, 1, 1], 2),
        ([1, -1, 1, -1], 2),
        ([1, 2, 2, 4], 5),
        ([4, 2, -2, 1], 5),
        ([2, 3, 6, 0], 7),
        ([0, 6, -3, 2], 7),
        ([2, 4, 5, 6], 9),
        ([-6, 5, 4, 2], 9),
        ([3, 4, 12, 0], 13),
        ([1, -1, -1, 1], 2),
        ([-2, 1, 4, 2], 5),
        ([6, 0, 2, -3], 7),
    ];
    raw.iter()
        .map(|(v, d)| std::array::from_fn(|i| rat(v[i], *d)))
        .collect()
}

/// `h` and `∂_l h` at a point, exactly.
struct Jet {
    h: [[Rational; 4]; 4],
    dh: [[[Rational; 4]; 4]; 4],
}

fn jet(h: &TensorField, partials: &[[RadialFn; 4]; 10], x: &[Rational; 4]) -> Jet {
    let pos = |i: usize, j: usize| {
        let (a, b) = (i.min(j), i.max(j));
        // canonical order (0,0),(0,1),…,(3,3)
        a * 4 - a * (a + 1) / 2 + b
    };
    let vals = h.eval(x);
    Jet {
        h: std::array::from_fn(|i| std::array::from_fn(|j| vals[pos(i, j)].clone())),
        dh: std::array::from_fn(|l| {
            std::array::from_fn(|i| std::array::from_fn(|j| partials[pos(i, j)][l].eval(x)))
        }),
    }
}

fn positive_definite(g: &MatQ) -> bool {
    // Symmetric elimination without pivoting: all pivots positive iff positive definite.
    let n = g.rows();
    let mut m: Vec<Vec<Rational>> = g.row_vecs();
    for k in 0..n {
        if !m[k][k].is_positive() {
            return false;
        }
        for i in k + 1..n {
            let f = &m[i][k] / &m[k][k];
            for j in k..n {
                let v = &f * &m[k][j];
                m[i][j] -= v;
            }
        }
    }
    true
}

/// `ρH − 3` for the coordinate sphere of radius `ρ` in `g₀ + h`, computed as the mean
/// curvature of the unit sphere in `δ + εh` with `ε = ρ⁻⁴` (valid for `(−4)`-homogeneous `h`).
///
/// `A = Δu − Hess u(∇u,∇u)/|∇u|²`, `B = |∇u|²` for `u = r²`; the deviation
/// `A/√B − 3 = (A² − 9B)/(√B(A + 3√B))` has an exact numerator.
fn unit_sphere_deviation(j: &Jet, theta: &[Rational; 4], eps: &Rational) -> Result<f64, EhError> {
    let g = MatQ::from_rows(
        4,
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|k| {
                        let d = if i == k {
                            Rational::one()
                        } else {
                            Rational::zero()
                        };
                        d + eps * &j.h[i][k]
                    })
                    .collect()
            })
            .collect(),
    )
    .expect("4x4");
    if !positive_definite(&g) {
        return Err(EhError::MetricNotPositive);
    }
    let ginv = g.inverse().ok_or(EhError::MetricNotPositive)?;
    let w = ginv.mul_vec(theta).expect("length 4");
    let mut hess: [[Rational; 4]; 4] =
        std::array::from_fn(|_| std::array::from_fn(|_| Rational::zero()));
    for i in 0..4 {
        for k in 0..4 {
            let mut s = Rational::zero();
            for l in 0..4 {
                let c = &j.dh[i][k][l] + &j.dh[k][i][l] - &j.dh[l][i][k];
                s += &w[l] * c;
            }
            hess[i][k] = if i == k { int(2) } else { int(0) } - eps * s;
        }
    }
    let b: Rational = (0..4)
        .map(|i| &theta[i] * &w[i])
        .fold(Rational::zero(), |a, v| a + v)
        * int(4);
    let mut lap = Rational::zero();
    let mut q = Rational::zero();
    for i in 0..4 {
        for k in 0..4 {
            lap += ginv.get(i, k) * &hess[i][k];
            q += &hess[i][k] * &w[i] * &w[k] * int(4);
        }
    }
    let a = lap - q / &b;
    let num = &a * &a - &b * int(9);
    if num.is_zero() {
        return Ok(0.0);
    }
    let sb = to_f64(&b).sqrt();
    let af = to_f64(&a);
    Ok(to_f64(&num) / (sb * (af + 3.0 * sb)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Negated slope of `log max|ρH − 3|` against `log ρ`; infinite when every deviation is 0.
    pub exponent: f64,
    pub rho: Vec<f64>,
    pub max_deviation: Vec<f64>,
}

/// Rational approximation `round(1000ρ)/1000` used for exact evaluation.
pub fn rho_to_rational(rho: f64) -> Rational {
    let n = (rho * 1000.0).round();
    let big = num_bigint::BigInt::from(n.to_i128().expect("finite grid point"));
    Rational::new(big, 1000.into())
}

/// Mean-curvature decay of coordinate spheres in `g₀ + amp·h` for `h ∈ ker H`.
pub fn perturbed_h_decay(
    h: &TensorField,
    grid: &[f64],
    dirs: &[[Rational; 4]],
    amp: &Rational,
) -> Result<DecayFit, EhError> {
    check_kernel_conditions(h)?;
    if grid.len() < 3 {
        return Err(EhError::GridTooSmall(format!(
            "{} points, need at least 3",
            grid.len()
        )));
    }
    for d in dirs {
        let n = d.iter().fold(Rational::zero(), |acc, v| acc + v * v);
        if !n.is_one() {
            return Err(EhError::NotUnit);
        }
    }
    let comps = h.components();
    let partials: [[RadialFn; 4]; 10] =
        std::array::from_fn(|c| std::array::from_fn(|l| comps[c].partial(l)));
    let jets: Vec<Jet> = dirs.iter().map(|d| jet(h, &partials, d)).collect();

    let max_dev: Vec<f64> = grid
        .par_iter()
        .map(|&rho| {
            let r = rho_to_rational(rho);
            let r2 = &r * &r;
            let eps = amp / (&r2 * &r2);
            let mut m = 0.0f64;
            for (jt, d) in jets.iter().zip(dirs) {
                m = m.max(unit_sphere_deviation(jt, d, &eps)?.abs());
            }
            Ok(m)
        })
        .collect::<Result<_, EhError>>()?;

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&rho, &d) in grid.iter().zip(&max_dev) {
        if d > 0.0 {
            xs.push(rho.ln());
            ys.push(d.ln());
        }
    }
    let exponent = if xs.len() < 2 {
        f64::INFINITY
    } else {
        -fit_line(&xs, &ys).slope
    };
    Ok(DecayFit {
        exponent,
        rho: grid.to_vec(),
        max_deviation: max_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_curvature_examples() {
        let flat = EhConfig::new(0.0).unwrap();
        assert_eq!(eh_mean_curvature(&flat, 2.0).unwrap(), 1.5);
        let cfg = EhConfig::new(1.0).unwrap();
        let f: f64 = 15.0 / 16.0;
        let expected = f.sqrt() * 1.5 + (4.0 / 32.0) / (2.0 * f.sqrt());
        assert!((eh_mean_curvature(&cfg, 2.0).unwrap() - expected).abs() < 1e-15);
        assert!(matches!(
            eh_mean_curvature(&cfg, 1.0),
            Err(EhError::OutOfDomain { .. })
        ));
        assert!(EhConfig::new(-1.0).is_err());
    }

    #[test]
    fn cmc_radius_flat_and_large() {
        let flat = EhConfig::new(0.0).unwrap();
        assert_eq!(cmc_radius(&flat, 7.0).unwrap(), 7.0);
        let cfg = EhConfig::new(1.0).unwrap();
        let r = cmc_radius(&cfg, 10.0).unwrap();
        assert!((eh_mean_curvature(&cfg, r).unwrap() - 0.3).abs() < 1e-15);
        // small ρ still has a root outside the bolt
        let r = cmc_radius(&cfg, 0.5).unwrap();
        assert!(r > 1.0);
        assert!((eh_mean_curvature(&cfg, r).unwrap() - 6.0).abs() < 1e-9);
    }

    #[test]
    fn fit_recovers_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let f = fit_line(&xs, &ys);
        assert!((f.intercept - 1.0).abs() < 1e-15 && (f.slope - 2.0).abs() < 1e-15);
    }

    #[test]
    fn grid_validation() {
        let cfg = EhConfig::new(1.0).unwrap();
        assert!(matches!(
            renvol_estimate(&cfg, &[10.0, 20.0]),
            Err(EhError::GridTooSmall(_))
        ));
        assert!(matches!(
            renvol_estimate(&cfg, &[5.0, 20.0, 40.0]),
            Err(EhError::GridTooSmall(_))
        ));
        let g = geometric_grid(10.0, 1e4, 32).unwrap();
        assert_eq!(g.len(), 32);
        assert_eq!(g[0], 10.0);
        assert_eq!(g[31], 1e4);
    }
}

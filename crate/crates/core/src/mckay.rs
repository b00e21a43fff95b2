//! ADE catalog for finite subgroups `Γ ⊂ SU(2)` and the volume formula
//! `𝒱 = −π²|ζ|²/(3|Γ|)`.
//!
//! Killing forms are summed over explicitly enumerated root systems and group orders come
//! from closing the quaternion generators under multiplication.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::MatQ;
use crate::gaugeclassify::{su2_minus_generators, ZetaGram};
use crate::ratpoly::{int, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum McKayError {
    #[error("invalid rank {rank} for type {family}")]
    InvalidRank { family: char, rank: u32 },
    #[error("unrecognized ADE label {0:?}")]
    BadLabel(String),
    #[error("expected vectors of length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rho^4 = {rho4} must exceed (2/3)|zeta|^2 = {bound}")]
    RadiusTooSmall { rho4: f64, bound: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AdeLabel {
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
}

impl AdeLabel {
    pub fn new(family: char, n: u32) -> Result<Self, McKayError> {
        match (family.to_ascii_uppercase(), n) {
            ('A', n) if n >= 1 => Ok(Self::A(n)),
            ('D', n) if n >= 4 => Ok(Self::D(n)),
            ('E', 6) => Ok(Self::E6),
            ('E', 7) => Ok(Self::E7),
            ('E', 8) => Ok(Self::E8),
            (f, rank) => Err(McKayError::InvalidRank { family: f, rank }),
        }
    }

    pub fn rank(self) -> usize {
        match self {
            Self::A(n) | Self::D(n) => n as usize,
            Self::E6 => 6,
            Self::E7 => 7,
            Self::E8 => 8,
        }
    }

    /// Dual Coxeter number (equal to the Coxeter number here).
    pub fn dual_coxeter(self) -> u32 {
        match self {
            Self::A(n) => n + 1,
            Self::D(n) => 2 * n - 2,
            Self::E6 => 12,
            Self::E7 => 18,
            Self::E8 => 30,
        }
    }

    /// Edges of the Dynkin diagram, Bourbaki numbering, zero-based.
    fn edges(self) -> Vec<(usize, usize)> {
        let n = self.rank();
        match self {
            Self::A(_) => (0..n - 1).map(|i| (i, i + 1)).collect(),
            Self::D(_) => {
                let mut e: Vec<_> = (0..n - 2).map(|i| (i, i + 1)).collect();
                e.push((n - 3, n - 1));
                e
            }
            Self::E6 | Self::E7 | Self::E8 => {
                // 1-3-4-5-…-n with 2 attached to 4
                let mut e = vec![(0, 2), (1, 3)];
                e.extend((2..n - 1).map(|i| (i, i + 1)));
                e
            }
        }
    }

    pub fn cartan_matrix(self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (i, j) in self.edges() {
            c[i][j] = -1;
            c[j][i] = -1;
        }
        c
    }
}

impl fmt::Display for AdeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::A(n) => write!(f, "A{n}"),
            Self::D(n) => write!(f, "D{n}"),
            Self::E6 => write!(f, "E6"),
            Self::E7 => write!(f, "E7"),
            Self::E8 => write!(f, "E8"),
        }
    }
}

impl FromStr for AdeLabel {
    type Err = McKayError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars.next().ok_or_else(|| McKayError::BadLabel(s.into()))?;
        let n: u32 = chars
            .as_str()
            .parse()
            .map_err(|_| McKayError::BadLabel(s.into()))?;
        if !"ADEade".contains(family) {
            return Err(McKayError::BadLabel(s.into()));
        }
        Self::new(family, n)
    }
}

/// Positive roots in simple-root coordinates, grown from the simple roots by adding `α_i`
/// whenever `(β, α_i) = −1`.
pub fn positive_roots(label: AdeLabel) -> Vec<Vec<i64>> {
    let c = label.cartan_matrix();
    let n = label.rank();
    let pair = |b: &[i64], i: usize| -> i64 { (0..n).map(|k| b[k] * c[k][i]).sum() };
    let mut roots: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    let mut k = 0;
    while k < roots.len() {
        for i in 0..n {
            if pair(&roots[k], i) == -1 {
                let mut next = roots[k].clone();
                next[i] += 1;
                if !roots.contains(&next) {
                    roots.push(next);
                }
            }
        }
        k += 1;
    }
    roots
}

/// `κ(α_i∨, α_j∨) = Σ_{α∈Δ} α(α_i∨) α(α_j∨)`.
pub fn killing_gram(label: AdeLabel) -> MatQ {
    let c = label.cartan_matrix();
    let n = label.rank();
    let mut k = MatQ::zeros(n, n);
    let roots = positive_roots(label);
    for i in 0..n {
        for j in 0..n {
            let mut s = 0i64;
            for b in &roots {
                let bi: i64 = (0..n).map(|t| b[t] * c[t][i]).sum();
                let bj: i64 = (0..n).map(|t| b[t] * c[t][j]).sum();
                s += bi * bj;
            }
            // ±β contribute equally
            k.set(i, j, int(2 * s));
        }
    }
    k
}

pub type Quat = [f64; 4];

pub fn quat_mul(p: &Quat, q: &Quat) -> Quat {
    let [a1, b1, c1, d1] = *p;
    let [a2, b2, c2, d2] = *q;
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

/// Unit quaternion generators of the binary polyhedral group.
pub fn generators(label: AdeLabel) -> Vec<Quat> {
    let half = 0.5;
    let omega = [half, half, half, half];
    match label {
        AdeLabel::A(n) => {
            let t = 2.0 * PI / (n as f64 + 1.0);
            vec![[t.cos(), t.sin(), 0.0, 0.0]]
        }
        AdeLabel::D(n) => {
            let t = PI / (n as f64 - 2.0);
            vec![[t.cos(), t.sin(), 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]]
        }
        AdeLabel::E6 => vec![[0.0, 1.0, 0.0, 0.0], omega],
        AdeLabel::E7 => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            vec![[s, s, 0.0, 0.0], omega]
        }
        AdeLabel::E8 => {
            let phi = (1.0 + 5f64.sqrt()) / 2.0;
            vec![omega, [phi / 2.0, 0.5 / phi, 0.5, 0.0]]
        }
    }
}

/// All elements of the group generated by `gens` (closure under right multiplication).
pub fn enumerate_group(gens: &[Quat]) -> Vec<Quat> {
    const TOL: f64 = 1e-9;
    let same = |p: &Quat, q: &Quat| (0..4).all(|i| (p[i] - q[i]).abs() < TOL);
    let mut elems: Vec<Quat> = vec![[1.0, 0.0, 0.0, 0.0]];
    let mut k = 0;
    while k < elems.len() {
        for g in gens {
            let next = quat_mul(&elems[k], g);
            if !elems.iter().any(|e| same(e, &next)) {
                elems.push(next);
            }
        }
        k += 1;
        assert!(
            elems.len() <= 100_000,
            "generators do not close to a finite group"
        );
    }
    elems
}

/// Right multiplication `x ↦ x·q` as a real 4×4 matrix.
pub fn right_mult_matrix(q: &Quat) -> [[f64; 4]; 4] {
    let gens = su2_minus_generators().map(|m| m.to_f64());
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let id = if i == j { 1.0 } else { 0.0 };
            q[0] * id + q[1] * gens[0][i][j] + q[2] * gens[1][i][j] + q[3] * gens[2][i][j]
        })
    })
}

/// Γ acting on ℝ⁴ by right multiplication (inside `SU(2)₋`).
pub fn generator_matrices(label: AdeLabel) -> Vec<[[f64; 4]; 4]> {
    generators(label).iter().map(right_mult_matrix).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaSpec {
    pub label: AdeLabel,
    pub rank: usize,
    pub order: usize,
    pub killing_gram: MatQ,
}

pub fn gamma_spec(label: AdeLabel) -> GammaSpec {
    GammaSpec {
        label,
        rank: label.rank(),
        order: enumerate_group(&generators(label)).len(),
        killing_gram: killing_gram(label),
    }
}

/// Period point `ζ ∈ 𝔥 ⊗ ℝ³`, either in coroot coordinates or as a Gram matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum PeriodPoint {
    Coords([Vec<Rational>; 3]),
    Gram(ZetaGram),
}

impl PeriodPoint {
    pub fn gram(&self, spec: &GammaSpec) -> Result<ZetaGram, McKayError> {
        match self {
            PeriodPoint::Gram(g) => Ok(g.clone()),
            PeriodPoint::Coords(z) => {
                for v in z {
                    if v.len() != spec.rank {
                        return Err(McKayError::DimensionMismatch {
                            expected: spec.rank,
                            found: v.len(),
                        });
                    }
                }
                let k = &spec.killing_gram;
                let form = |a: &[Rational], b: &[Rational]| {
                    let kb = k.mul_vec(b).expect("rank-sized vector");
                    a.iter()
                        .zip(&kb)
                        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
                };
                Ok(ZetaGram(std::array::from_fn(|i| {
                    std::array::from_fn(|j| form(&z[i], &z[j]))
                })))
            }
        }
    }
}

/// `|ζ|² = Σ_a κ(ζ_a, ζ_a)`.
pub fn zeta_norm(spec: &GammaSpec, p: &PeriodPoint) -> Result<Rational, McKayError> {
    Ok(p.gram(spec)?.trace())
}

/// `−π²|ζ|²/(3|Γ|)`.
pub fn volume_formula(order: usize, zeta_norm_sq: f64) -> f64 {
    -PI * PI * zeta_norm_sq / (3.0 * order as f64)
}

pub fn renormalized_volume(spec: &GammaSpec, p: &PeriodPoint) -> Result<f64, McKayError> {
    let n = zeta_norm(spec, p)?;
    Ok(volume_formula(spec.order, crate::ratpoly::to_f64(&n)))
}

/// `τ = (ρ⁴ − (2/3)|ζ|²)^{1/4}`: the sphere of radius `τ` flows to radius `ρ` in unit time
/// under `X₁ = −(|ζ|²/12)∇(1/r²)`.
pub fn flow_radius(rho: f64, zeta_norm_sq: f64) -> Result<f64, McKayError> {
    let rho4 = rho.powi(4);
    let bound = 2.0 / 3.0 * zeta_norm_sq;
    if !(rho4 > bound) {
        return Err(McKayError::RadiusTooSmall { rho4, bound });
    }
    Ok((rho4 - bound).powf(0.25))
}

/// RK4 integration of the radial flow `dr/dt = |ζ|²/(6r³)` over `t ∈ [0, 1]`.
pub fn flow_ode(r0: f64, zeta_norm_sq: f64, steps: usize) -> f64 {
    let f = |r: f64| zeta_norm_sq / (6.0 * r * r * r);
    let h = 1.0 / steps as f64;
    let mut r = r0;
    for _ in 0..steps {
        let k1 = f(r);
        let k2 = f(r + 0.5 * h * k1);
        let k3 = f(r + 0.5 * h * k2);
        let k4 = f(r + h * k3);
        r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    r
}

/// Wire form used by the `volume` command.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VolumeReport {
    pub gamma: String,
    pub order: usize,
    pub zeta_norm_sq: String,
    pub zeta_norm_sq_f64: f64,
    pub renormalized_volume: f64,
}

pub fn volume_report(spec: &GammaSpec, p: &PeriodPoint) -> Result<VolumeReport, McKayError> {
    let n = zeta_norm(spec, p)?;
    let nf = crate::ratpoly::to_f64(&n);
    Ok(VolumeReport {
        gamma: spec.label.to_string(),
        order: spec.order,
        zeta_norm_sq: crate::ratpoly::rational_to_string(&n),
        zeta_norm_sq_f64: nf,
        renormalized_volume: volume_formula(spec.order, nf),
    })
}

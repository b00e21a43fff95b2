//! Leading terms of Ricci-flat ALE metrics on ℝ⁴∖{0}.
//!
//! The space of symmetric 2-tensors `h₀` with `(−4)`-homogeneous components of the form
//! `q/r⁶` (`q` harmonic quadratic) is coordinatized by 90 numbers. The Bianchi operator
//! becomes an 80×90 matrix `H` whose kernel (dimension 26) splits as
//! `U₁ ⊕ U₂ ⊕ U₃ ⊕ S⁴₊ ⊕ S⁴₋`: harmonic gauge terms plus reduced Kronheimer terms of
//! both orientations.

use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{ExactLaError, MatQ, SubspaceQ};
use crate::ratpoly::{int, rat, rational_to_string, Exponent, Poly4, RadialFn, Rational};
use crate::tensorcalc::{
    bianchi, contract_scaling, divergence, laplacian, lie_derivative, lie_metric, pullback, trace,
    LinearVectorField, Mat4, TensorError, TensorField,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaugeError {
    #[error("tensor is not in ker H: {0}")]
    NotInKernel(String),
    #[error("matrix is not orthogonal with determinant -1")]
    NotOrientationReversing,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Linear(#[from] ExactLaError),
}

/// Symmetric index pairs in the order of the domain basis (zero-based).
pub const PAIRS: [(usize, usize); 10] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 2),
    (1, 3),
    (2, 3),
    (0, 0),
    (1, 1),
    (2, 2),
    (3, 3),
];

pub const DOMAIN_DIM: usize = 90;
pub const CODOMAIN_DIM: usize = 80;
pub const KERNEL_DIM: usize = 26;

/// Sorted index triples `(i ≤ j ≤ k)`, lexicographic; 20 cubic monomials.
pub fn cubic_triples() -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(20);
    for i in 0..4 {
        for j in i..4 {
            for k in j..4 {
                out.push([i, j, k]);
            }
        }
    }
    out
}

fn cubic_exponent(t: [usize; 3]) -> Exponent {
    let mut e = [0; 4];
    for i in t {
        e[i] += 1;
    }
    e
}

fn exp2(a: usize, b: usize) -> Exponent {
    let mut e = [0; 4];
    e[a] += 1;
    e[b] += 1;
    e
}

/// The `n`-th harmonic quadratic (`n < 9`): `2x_a x_b` for the off-diagonal pairs, then
/// `x_c² − r²/4`.
pub fn qpol(n: usize) -> Poly4 {
    let (a, b) = PAIRS[n];
    if a != b {
        Poly4::monomial(exp2(a, b), int(2))
    } else {
        &Poly4::monomial(exp2(a, a), int(1)) - &Poly4::r2().scale(&rat(1, 4))
    }
}

/// Column `9m + n` of the domain basis: `h_m · q_n / r⁶`.
pub fn domain_tensor(col: usize) -> TensorField {
    let (m, n) = (col / 9, col % 9);
    let (a, b) = PAIRS[m];
    let f = RadialFn::new(qpol(n), 3);
    TensorField::sym2(|i, j| {
        if (i, j) == (a, b) || (j, i) == (a, b) {
            f.clone()
        } else {
            RadialFn::zero()
        }
    })
}

/// Tensor with the given 90 coordinates.
pub fn coords_to_tensor(c: &[Rational]) -> TensorField {
    assert_eq!(c.len(), DOMAIN_DIM);
    let comps: Vec<RadialFn> = (0..10)
        .map(|m| {
            let q = (0..9).fold(Poly4::zero(), |acc, n| &acc + &qpol(n).scale(&c[9 * m + n]));
            RadialFn::new(q, 3)
        })
        .collect();
    TensorField::sym2(|i, j| {
        let key = (i.min(j), i.max(j));
        let m = PAIRS.iter().position(|&p| p == key).unwrap();
        comps[m].clone()
    })
}

/// Inverse of [`coords_to_tensor`]; fails unless every component is `q/r⁶` with `q` harmonic quadratic.
pub fn tensor_to_coords(h: &TensorField) -> Result<Vec<Rational>, GaugeError> {
    if !h.is_sym2() {
        return Err(TensorError::NotSymmetric.into());
    }
    let mut out = vec![Rational::zero(); DOMAIN_DIM];
    for (m, &(a, b)) in PAIRS.iter().enumerate() {
        let f = h.c2(a, b);
        if f.is_zero() {
            continue;
        }
        let bad = || {
            GaugeError::NotInKernel(format!(
                "component ({},{}) is not q/r^6 with q harmonic quadratic",
                a + 1,
                b + 1
            ))
        };
        if f.rpow() > 3 {
            return Err(bad());
        }
        let q = f.mul_r2_pow(3).as_poly().cloned().ok_or_else(bad)?;
        let d4 = q.coeff(&exp2(3, 3));
        let c: Vec<Rational> = (0..9)
            .map(|n| {
                let (u, v) = PAIRS[n];
                if u != v {
                    q.coeff(&exp2(u, v)) / int(2)
                } else {
                    q.coeff(&exp2(u, u)) - &d4
                }
            })
            .collect();
        let rebuilt = c
            .iter()
            .enumerate()
            .fold(Poly4::zero(), |acc, (n, cn)| &acc + &qpol(n).scale(cn));
        if rebuilt != q {
            return Err(bad());
        }
        out[9 * m..9 * m + 9].clone_from_slice(&c);
    }
    Ok(out)
}

/// Column of `H`: coefficients of `r⁸·B(h)` in the basis (component k, cubic monomial ℓ).
pub fn image_coords(h: &TensorField) -> Result<Vec<Rational>, GaugeError> {
    let b = bianchi(h)?;
    let cubics = cubic_triples();
    let mut out = Vec::with_capacity(CODOMAIN_DIM);
    for k in 0..4 {
        let scaled = b.c1(k).mul_r2_pow(4);
        let p = scaled.as_poly().ok_or_else(|| {
            GaugeError::NotInKernel("Bianchi image has the wrong radial weight".into())
        })?;
        for t in &cubics {
            out.push(p.coeff(&cubic_exponent(*t)));
        }
    }
    Ok(out)
}

/// The 80×90 matrix of the Bianchi operator on the coordinatized tensors.
pub fn assemble_h() -> MatQ {
    let cols: Vec<Vec<Rational>> = (0..DOMAIN_DIM)
        .into_par_iter()
        .map(|c| image_coords(&domain_tensor(c)).expect("domain tensors have weight -4"))
        .collect();
    let mut h = MatQ::zeros(CODOMAIN_DIM, DOMAIN_DIM);
    for (j, col) in cols.into_iter().enumerate() {
        for (i, v) in col.into_iter().enumerate() {
            h.set(i, j, v);
        }
    }
    h
}

/// Left multiplication by `i, j, k` on `x = x1 + x2 i + x3 j + x4 k`.
pub fn complex_structures() -> [Mat4; 3] {
    let i1 = Mat4::from_i64([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]);
    let i2 = Mat4::from_i64([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]]);
    let i3 = &i1 * &i2;
    [i1, i2, i3]
}

/// Right multiplication by `i, j, k`: generators of `su(2)₋`.
pub fn su2_minus_generators() -> [Mat4; 3] {
    [
        Mat4::from_i64([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]),
        Mat4::from_i64([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]),
        Mat4::from_i64([[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]]),
    ]
}

fn linear_form(m: &Mat4) -> [Poly4; 4] {
    std::array::from_fn(|i| {
        Poly4::from_terms((0..4).map(|j| {
            let mut e = [0; 4];
            e[j] = 1;
            (e, m.0[i][j].clone())
        }))
    })
}

/// `r dr` as a 1-form.
pub fn rdr() -> TensorField {
    TensorField::one_form(std::array::from_fn(RadialFn::var))
}

/// `α_j = I_j(r dr)` for `j = 1, 2, 3`.
pub fn alphas() -> [TensorField; 3] {
    complex_structures().map(|m| TensorField::one_form(linear_form(&m).map(RadialFn::poly)))
}

/// `Σ c_ab · v_a·v_b / r⁶` where `v_0 = r dr`, `v_j = α_j` and `·` is the symmetric product.
fn quadratic_in_forms(coeffs: &[[Rational; 4]; 4]) -> TensorField {
    let [i1, i2, i3] = complex_structures();
    let v = [
        linear_form(&Mat4::identity()),
        linear_form(&i1),
        linear_form(&i2),
        linear_form(&i3),
    ];
    let half = rat(1, 2);
    TensorField::sym2(|i, j| {
        let mut p = Poly4::zero();
        for a in 0..4 {
            for b in 0..4 {
                let c = &coeffs[a][b];
                if c.is_zero() {
                    continue;
                }
                let sym = &(&v[a][i] * &v[b][j]) + &(&v[a][j] * &v[b][i]);
                p = &p + &sym.scale(&(c * &half));
            }
        }
        RadialFn::new(p, 3)
    })
}

/// Symmetric 3×3 Gram matrix `(⟨ζᵢ, ζⱼ⟩)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaGram(pub [[Rational; 3]; 3]);

impl ZetaGram {
    pub fn new(m: [[Rational; 3]; 3]) -> Result<Self, GaugeError> {
        for i in 0..3 {
            for j in 0..3 {
                if m[i][j] != m[j][i] {
                    return Err(GaugeError::NotSymmetric);
                }
            }
        }
        Ok(Self(m))
    }

    /// From upper-triangular entries `z11, z12, z13, z22, z23, z33`.
    pub fn from_upper(u: [Rational; 6]) -> Self {
        let [a, b, c, d, e, f] = u;
        Self([[a, b.clone(), c.clone()], [b, d, e.clone()], [c, e, f]])
    }

    pub fn zero() -> Self {
        Self(std::array::from_fn(|_| {
            std::array::from_fn(|_| Rational::zero())
        }))
    }

    pub fn identity() -> Self {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
        }))
    }

    pub fn diag(d: [Rational; 3]) -> Self {
        let mut z = Self::zero();
        for (i, v) in d.into_iter().enumerate() {
            z.0[i][i] = v;
        }
        z
    }

    /// `E_ab + E_ba` (or `E_aa` on the diagonal), zero-based.
    pub fn unit_sym(a: usize, b: usize) -> Self {
        let mut z = Self::zero();
        z.0[a][b] = Rational::one();
        z.0[b][a] = Rational::one();
        z
    }

    pub fn trace(&self) -> Rational {
        &(&self.0[0][0] + &self.0[1][1]) + &self.0[2][2]
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self(self.0.clone().map(|r| r.map(|v| v * c)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| &self.0[i][j] + &other.0[i][j])
        }))
    }

    pub fn upper(&self) -> [Rational; 6] {
        let z = &self.0;
        [
            z[0][0].clone(),
            z[0][1].clone(),
            z[0][2].clone(),
            z[1][1].clone(),
            z[1][2].clone(),
            z[2][2].clone(),
        ]
    }

    /// All principal minors nonnegative.
    pub fn is_psd(&self) -> bool {
        let z = &self.0;
        let minor2 = |i: usize, j: usize| &z[i][i] * &z[j][j] - &z[i][j] * &z[j][i];
        let det = &z[0][0] * &minor2(1, 2)
            - &z[0][1] * &(&z[1][0] * &z[2][2] - &z[1][2] * &z[2][0])
            + &z[0][2] * &(&z[1][0] * &z[2][1] - &z[1][1] * &z[2][0]);
        (0..3).all(|i| !z[i][i].is_negative())
            && [(0, 1), (0, 2), (1, 2)]
                .iter()
                .all(|&(i, j)| !minor2(i, j).is_negative())
            && !det.is_negative()
    }
}

/// Kronheimer leading term `F(ζ)`.
pub fn kronheimer_f(z: &ZetaGram) -> TensorField {
    let z = &z.0;
    let mut c: [[Rational; 4]; 4] =
        std::array::from_fn(|_| std::array::from_fn(|_| Rational::zero()));
    // −r⁶F = Σ ζ_aa((rdr)² + α_a² − α_b² − α_c²) + 2ζ_ab(α_a·α_b − rdr·α_c)
    for a in 0..3 {
        c[0][0] += &z[a][a];
        for b in 0..3 {
            if a == b {
                c[b + 1][b + 1] += &z[a][a];
            } else {
                c[b + 1][b + 1] -= &z[a][a];
            }
        }
    }
    for (a, b, other) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let w = &z[a][b] * int(2);
        c[a + 1][b + 1] += &w;
        c[0][other + 1] -= &w;
    }
    quadratic_in_forms(&c).scale(&int(-1))
}

/// Reduced Kronheimer term `G(ζ)`, the `S⁴₊` part of `F(ζ)`.
pub fn reduced_kron_g(z: &ZetaGram) -> TensorField {
    let z = &z.0;
    let mut c: [[Rational; 4]; 4] =
        std::array::from_fn(|_| std::array::from_fn(|_| Rational::zero()));
    let two_thirds = rat(2, 3);
    for a in 0..3 {
        let w = &z[a][a] * &two_thirds;
        for b in 0..3 {
            if a == b {
                c[b + 1][b + 1] += &w * int(2);
            } else {
                c[b + 1][b + 1] -= &w;
            }
        }
    }
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        c[a + 1][b + 1] += &z[a][b] * int(2);
    }
    quadratic_in_forms(&c).scale(&int(-1))
}

/// Default orientation-reversing reflection `diag(1, 1, 1, −1)`.
pub fn default_reflection() -> Mat4 {
    Mat4::diag([int(1), int(1), int(1), int(-1)])
}

/// `R*G(ζ)` for an orientation-reversing orthogonal `R`.
pub fn opposite_reduced(z: &ZetaGram, r: &Mat4) -> Result<TensorField, GaugeError> {
    if !r.is_orthogonal() || r.det() != int(-1) {
        return Err(GaugeError::NotOrientationReversing);
    }
    Ok(pullback(&reduced_kron_g(z), r)?)
}

/// `L_X g₀` for `X = r⁻⁴ L x`.
pub fn gauge_term(l: &Mat4) -> TensorField {
    lie_metric(&LinearVectorField::new(l.clone(), 2))
}

/// Trace-free symmetric Gram matrices spanning the `S⁴₊` parameters.
pub fn s4_parameter_basis() -> [ZetaGram; 5] {
    [
        ZetaGram::diag([int(1), int(0), int(-1)]),
        ZetaGram::diag([int(0), int(1), int(-1)]),
        ZetaGram::unit_sym(0, 1),
        ZetaGram::unit_sym(0, 2),
        ZetaGram::unit_sym(1, 2),
    ]
}

/// `E_ab − E_ba`, `a < b`, in the order of [`PAIRS`].
pub fn u2_matrices() -> Vec<Mat4> {
    PAIRS[..6]
        .iter()
        .map(|&(a, b)| &Mat4::unit(a, b) - &Mat4::unit(b, a))
        .collect()
}

/// `E_ab + E_ba` for `a < b`, then `E_cc − Id/4` for `c = 1, 2, 3`.
pub fn u3_matrices() -> Vec<Mat4> {
    let mut out: Vec<Mat4> = PAIRS[..6]
        .iter()
        .map(|&(a, b)| &Mat4::unit(a, b) + &Mat4::unit(b, a))
        .collect();
    let quarter = Mat4::identity().scale(&rat(1, 4));
    for c in 0..3 {
        out.push(&Mat4::unit(c, c) - &quarter);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Part {
    U1,
    U2,
    U3,
    S4Plus,
    S4Minus,
}

impl Part {
    pub const ALL: [Part; 5] = [Part::U1, Part::U2, Part::U3, Part::S4Plus, Part::S4Minus];

    pub fn name(self) -> &'static str {
        match self {
            Part::U1 => "U1",
            Part::U2 => "U2",
            Part::U3 => "U3",
            Part::S4Plus => "S4plus",
            Part::S4Minus => "S4minus",
        }
    }

    /// Position of the part's block in the structured basis.
    fn range(self) -> std::ops::Range<usize> {
        match self {
            Part::S4Plus => 0..5,
            Part::S4Minus => 5..10,
            Part::U1 => 10..11,
            Part::U2 => 11..17,
            Part::U3 => 17..26,
        }
    }
}

/// The 26 structured kernel elements: `S⁴₊`, `S⁴₋`, `U₁`, `U₂`, `U₃`.
pub fn structured_basis() -> Vec<(Part, TensorField)> {
    let r = default_reflection();
    let mut out = Vec::with_capacity(KERNEL_DIM);
    for z in s4_parameter_basis() {
        out.push((Part::S4Plus, reduced_kron_g(&z)));
    }
    for z in s4_parameter_basis() {
        out.push((Part::S4Minus, opposite_reduced(&z, &r).expect("reflection")));
    }
    out.push((Part::U1, gauge_term(&Mat4::identity())));
    for l in u2_matrices() {
        out.push((Part::U2, gauge_term(&l)));
    }
    for l in u3_matrices() {
        out.push((Part::U3, gauge_term(&l)));
    }
    out
}

/// `H`, its kernel and the structured splitting, computed once.
pub struct Classifier {
    h: MatQ,
    kernel: SubspaceQ,
    basis: Vec<(Part, TensorField)>,
    /// 90×26, column `t` holds the coordinates of structured element `t`.
    basis_cols: MatQ,
    parts: Vec<(Part, SubspaceQ)>,
}

impl Classifier {
    pub fn new() -> Self {
        let h = assemble_h();
        let kernel = h.nullspace();
        let basis = structured_basis();
        let coords: Vec<Vec<Rational>> = basis
            .par_iter()
            .map(|(_, t)| tensor_to_coords(t).expect("structured elements are coordinatizable"))
            .collect();
        let basis_cols = MatQ::from_rows(DOMAIN_DIM, coords.clone())
            .expect("rows of length 90")
            .transpose();
        let parts = Part::ALL
            .iter()
            .map(|&p| {
                let s = SubspaceQ::from_spanning(DOMAIN_DIM, coords[p.range()].to_vec())
                    .expect("rows of length 90");
                (p, s)
            })
            .collect();
        Self {
            h,
            kernel,
            basis,
            basis_cols,
            parts,
        }
    }

    /// Process-wide instance.
    pub fn shared() -> &'static Classifier {
        static CELL: OnceLock<Classifier> = OnceLock::new();
        CELL.get_or_init(Classifier::new)
    }

    pub fn h(&self) -> &MatQ {
        &self.h
    }

    pub fn kernel(&self) -> &SubspaceQ {
        &self.kernel
    }

    pub fn rank(&self) -> usize {
        DOMAIN_DIM - self.kernel.dim()
    }

    pub fn structured(&self) -> &[(Part, TensorField)] {
        &self.basis
    }

    pub fn part(&self, p: Part) -> &SubspaceQ {
        &self.parts.iter().find(|(q, _)| *q == p).unwrap().1
    }

    /// Span of the structured basis.
    pub fn structured_span(&self) -> SubspaceQ {
        SubspaceQ::from_matrix(&self.basis_cols.transpose())
    }

    /// Coordinates of `h` over the structured basis, after checking `h ∈ ker H`.
    pub fn structured_coords(&self, h: &TensorField) -> Result<Vec<Rational>, GaugeError> {
        check_kernel_conditions(h)?;
        let c = tensor_to_coords(h)?;
        if !self.kernel.contains_vector(&c)? {
            return Err(GaugeError::NotInKernel("coordinates outside ker H".into()));
        }
        self.basis_cols
            .solve(&c)?
            .ok_or_else(|| GaugeError::NotInKernel("not spanned by the structured basis".into()))
    }

    pub fn decompose(&self, h: &TensorField) -> Result<Decomposition, GaugeError> {
        let y = self.structured_coords(h)?;
        let d = Decomposition::from_structured(&y);
        if d.reassemble() != *h {
            return Err(GaugeError::NotInKernel("reassembly mismatch".into()));
        }
        Ok(d)
    }

    pub fn characterize(&self, h: &TensorField) -> Result<Characterization, GaugeError> {
        let d = self.decompose(h)?;
        Ok(Characterization {
            trace_zero: trace(h)?.is_zero(),
            div_zero: divergence(h)?.is_zero(),
            scaling_contraction_zero: contract_scaling(h)?.is_zero(),
            x1_zero: d.c1.is_zero(),
            x2_zero: d.l2.is_zero(),
            x3_zero: d.l3.is_zero(),
        })
    }
}

impl Default for Classifier {
    fn default() -> Self {
        Self::new()
    }
}

/// `B(h) = 0`, `Δh = 0` and `L_{r∂_r} h = −2h`.
pub fn check_kernel_conditions(h: &TensorField) -> Result<(), GaugeError> {
    if !h.is_sym2() {
        return Err(GaugeError::NotInKernel("not a symmetric 2-tensor".into()));
    }
    if !bianchi(h)?.is_zero() {
        return Err(GaugeError::NotInKernel(
            "Bianchi operator does not vanish".into(),
        ));
    }
    if !laplacian(h).is_zero() {
        return Err(GaugeError::NotInKernel("not harmonic".into()));
    }
    let lx = lie_derivative(&LinearVectorField::euler(), h)?;
    if lx != h.scale(&int(-2)) {
        return Err(GaugeError::NotInKernel("L_{r d/dr} h != -2h".into()));
    }
    Ok(())
}

/// `h₀ = h⁺ + h⁻ + L_{X₁}g₀ + L_{X₂}g₀ + L_{X₃}g₀` with `X_k = r⁻⁴ L_k x`, `L₁ = c₁ Id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub h_plus_coeffs: Vec<Rational>,
    pub h_minus_coeffs: Vec<Rational>,
    /// Trace-free `ζ` with `h⁺ = G(ζ)`.
    pub h_plus_zeta: ZetaGram,
    /// Trace-free `ζ` with `h⁻ = R*G(ζ)` for the default reflection.
    pub h_minus_zeta: ZetaGram,
    pub h_plus: TensorField,
    pub h_minus: TensorField,
    pub c1: Rational,
    pub l2: Mat4,
    pub l3: Mat4,
}

impl Decomposition {
    fn from_structured(y: &[Rational]) -> Self {
        let zs = s4_parameter_basis();
        let combo = |c: &[Rational]| {
            zs.iter()
                .zip(c)
                .fold(ZetaGram::zero(), |acc, (z, ci)| acc.add(&z.scale(ci)))
        };
        let h_plus_zeta = combo(&y[Part::S4Plus.range()]);
        let h_minus_zeta = combo(&y[Part::S4Minus.range()]);
        let mat_combo = |ms: Vec<Mat4>, c: &[Rational]| {
            ms.iter()
                .zip(c)
                .fold(Mat4::zero(), |acc, (m, ci)| &acc + &m.scale(ci))
        };
        Self {
            h_plus_coeffs: y[Part::S4Plus.range()].to_vec(),
            h_minus_coeffs: y[Part::S4Minus.range()].to_vec(),
            h_plus: reduced_kron_g(&h_plus_zeta),
            h_minus: opposite_reduced(&h_minus_zeta, &default_reflection()).expect("reflection"),
            h_plus_zeta,
            h_minus_zeta,
            c1: y[Part::U1.range()][0].clone(),
            l2: mat_combo(u2_matrices(), &y[Part::U2.range()]),
            l3: mat_combo(u3_matrices(), &y[Part::U3.range()]),
        }
    }

    pub fn l1(&self) -> Mat4 {
        Mat4::identity().scale(&self.c1)
    }

    pub fn reassemble(&self) -> TensorField {
        let g = &(&gauge_term(&self.l1()) + &gauge_term(&self.l2)) + &gauge_term(&self.l3);
        &(&self.h_plus + &self.h_minus) + &g
    }

    pub fn report(&self) -> DecompositionReport {
        let s = |v: &[Rational]| v.iter().map(rational_to_string).collect();
        DecompositionReport {
            h_plus_coeffs: s(&self.h_plus_coeffs),
            h_minus_coeffs: s(&self.h_minus_coeffs),
            c1: rational_to_string(&self.c1),
            hess_coeff: rational_to_string(&-self.c1.clone()),
            l2: mat4_strings(&self.l2),
            l3: mat4_strings(&self.l3),
            h_plus_zeta: s(&self.h_plus_zeta.upper()),
            h_minus_zeta: s(&self.h_minus_zeta.upper()),
        }
    }
}

pub fn mat4_strings(m: &Mat4) -> Vec<Vec<String>> {
    m.0.iter()
        .map(|r| r.iter().map(rational_to_string).collect())
        .collect()
}

/// Wire form of a [`Decomposition`]. `hess_coeff` is the coefficient of `Hess(1/r²)` in
/// the `U₁` part, i.e. `−c1`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DecompositionReport {
    pub h_plus_coeffs: Vec<String>,
    pub h_minus_coeffs: Vec<String>,
    pub c1: String,
    pub hess_coeff: String,
    #[serde(rename = "L2")]
    pub l2: Vec<Vec<String>>,
    #[serde(rename = "L3")]
    pub l3: Vec<Vec<String>>,
    pub h_plus_zeta: Vec<String>,
    pub h_minus_zeta: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Characterization {
    pub trace_zero: bool,
    pub div_zero: bool,
    pub scaling_contraction_zero: bool,
    #[serde(rename = "X1_zero")]
    pub x1_zero: bool,
    #[serde(rename = "X2_zero")]
    pub x2_zero: bool,
    #[serde(rename = "X3_zero")]
    pub x3_zero: bool,
}

impl Characterization {
    /// `trace_zero ⇔ div_zero ⇔ X₃ = 0`.
    pub fn tracefree_equivalence(&self) -> bool {
        self.trace_zero == self.div_zero && self.div_zero == self.x3_zero
    }

    /// `∂_r ⌟ h = 0 ⇔ X₁ = X₂ = X₃ = 0`.
    pub fn tangential_equivalence(&self) -> bool {
        self.scaling_contraction_zero == (self.x1_zero && self.x2_zero && self.x3_zero)
    }
}

/// Lie derivatives along the three `su(2)₋` generators all vanish.
pub fn su2minus_invariant(h: &TensorField) -> Result<bool, GaugeError> {
    for j in su2_minus_generators() {
        if !lie_derivative(&LinearVectorField::new(j, 0), h)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Deterministic sample points on spheres of radius 1 to 2.
pub fn sample_points() -> Vec<[f64; 4]> {
    let raw: [[f64; 4]; 8] = [
        [1.0, 0.0, 0.0, 0.0],
        [0.3, -0.7, 0.2, 0.6],
        [0.9, 0.4, -1.1, 0.5],
        [-0.2, 0.8, 0.8, -0.9],
        [1.3, -0.4, 0.1, 0.7],
        [0.05, 0.15, -0.35, 1.6],
        [-1.0, -1.0, 0.5, 0.25],
        [0.6, 1.2, 0.7, -0.3],
    ];
    raw.to_vec()
}

/// Numeric check that `Q*h = h` for each generator `Q` (entries may be irrational).
///
/// `(Q*h)(x) = Qᵀ h(Qx) Q`; compares absolute entries at [`sample_points`].
pub fn gamma_invariant_numeric(h: &TensorField, gens: &[[[f64; 4]; 4]], tol: f64) -> bool {
    for q in gens {
        for x in sample_points() {
            let qx: [f64; 4] = std::array::from_fn(|i| (0..4).map(|j| q[i][j] * x[j]).sum());
            let hx = h.eval_matrix_f64(&x);
            let hqx = h.eval_matrix_f64(&qx);
            for i in 0..4 {
                for j in 0..4 {
                    let mut pulled = 0.0;
                    for a in 0..4 {
                        for b in 0..4 {
                            pulled += q[a][i] * q[b][j] * hqx[a][b];
                        }
                    }
                    if (pulled - hx[i][j]).abs() > tol {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensorcalc::{hessian, sym_product};

    #[test]
    fn complex_structure_algebra() {
        let [i1, i2, i3] = complex_structures();
        let minus = Mat4::identity().scale(&int(-1));
        for m in [&i1, &i2, &i3] {
            assert_eq!(&(m * m), &minus);
        }
        let e1 = [int(1), int(0), int(0), int(0)];
        assert_eq!(i1.apply(&e1), [int(0), int(1), int(0), int(0)]);
        for j in su2_minus_generators() {
            assert_eq!(&j * &j, minus);
            for i in [&i1, &i2, &i3] {
                assert_eq!(i * &j, &j * i);
            }
        }
    }

    #[test]
    fn alpha_inner_products() {
        let a = alphas();
        let r2 = RadialFn::poly(Poly4::r2());
        for i in 0..3 {
            for j in 0..3 {
                let ip = (0..4).fold(RadialFn::zero(), |acc, k| &acc + &(a[i].c1(k) * a[j].c1(k)));
                assert_eq!(ip, if i == j { r2.clone() } else { RadialFn::zero() });
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        for col in [0, 8, 40, 89] {
            let t = domain_tensor(col);
            let c = tensor_to_coords(&t).unwrap();
            let mut e = vec![Rational::zero(); DOMAIN_DIM];
            e[col] = Rational::one();
            assert_eq!(c, e);
            assert_eq!(coords_to_tensor(&c), t);
        }
        let bad = TensorField::sym2(|_, _| RadialFn::inv_r2_pow(2));
        assert!(tensor_to_coords(&bad).is_err());
    }

    #[test]
    fn green_hessian_gauge() {
        let lhs = gauge_term(&Mat4::identity().scale(&int(-2)));
        let rhs = hessian(&RadialFn::inv_r2_pow(1)).scale(&int(2));
        assert_eq!(lhs, rhs);
        assert!(gauge_term(&Mat4::zero()).is_zero());
    }

    #[test]
    fn gauge_i1_is_rdr_alpha1() {
        let [i1, _, _] = complex_structures();
        let a = alphas();
        let expected = sym_product(&rdr(), &a[0])
            .unwrap()
            .scale_fn(&RadialFn::inv_r2_pow(3))
            .scale(&int(-8));
        assert_eq!(gauge_term(&i1), expected);
    }

    #[test]
    fn kronheimer_diag_example() {
        let z = ZetaGram::diag([int(1), int(0), int(0)]);
        let f = kronheimer_f(&z);
        let a = alphas();
        let sq = |t: &TensorField| sym_product(t, t).unwrap();
        let inner = &(&(&sq(&rdr()) + &sq(&a[0])) - &sq(&a[1])) - &sq(&a[2]);
        assert_eq!(f, inner.scale_fn(&RadialFn::inv_r2_pow(3)).scale(&int(-1)));
        assert!(trace(&f).unwrap().is_zero());

        let g = reduced_kron_g(&z);
        let inner = &(&sq(&a[0]).scale(&int(2)) - &sq(&a[1])) - &sq(&a[2]);
        assert_eq!(
            g,
            inner.scale_fn(&RadialFn::inv_r2_pow(3)).scale(&rat(-2, 3))
        );
        assert!(contract_scaling(&g).unwrap().is_zero());
        assert!(reduced_kron_g(&ZetaGram::identity()).is_zero());
        assert!(kronheimer_f(&ZetaGram::zero()).is_zero());
    }

    #[test]
    fn opposite_requires_reflection() {
        let z = ZetaGram::unit_sym(0, 1);
        assert_eq!(
            opposite_reduced(&z, &Mat4::identity()),
            Err(GaugeError::NotOrientationReversing)
        );
        assert!(opposite_reduced(&ZetaGram::zero(), &default_reflection())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn psd_check() {
        assert!(ZetaGram::identity().is_psd());
        assert!(!ZetaGram::diag([int(1), int(-1), int(0)]).is_psd());
        assert!(ZetaGram::from_upper([int(1), int(1), int(0), int(1), int(0), int(0)]).is_psd());
    }
}

//! Flat-metric tensor calculus on ℝ⁴∖{0}.
//!
//! Coordinates are orthonormal for `g₀`, so raising and lowering indices is the
//! identity: a vector field and its dual 1-form share storage and differ only in the
//! `vector` flag. Component functions are [`RadialFn`]s, so every operator here is exact.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ratpoly::{int, rat, Poly4, RadialFn, RatPolyError, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("expected a rank-{expected} tensor, got rank {found}")]
    RankMismatch { expected: u8, found: u8 },
    #[error("operation needs a symmetric 2-tensor")]
    NotSymmetric,
    #[error("unsupported rank/symmetry combination")]
    BadShape,
    #[error("malformed tensor JSON: {0}")]
    BadJson(String),
    #[error(transparent)]
    Scalar(#[from] RatPolyError),
}

/// Index symmetry of the stored components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    None,
    /// Symmetric in the last two slots (rank 3 only).
    SymLastTwo,
    /// Fully symmetric.
    Full,
}

/// 4×4 rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mat4(pub [[Rational; 4]; 4]);

impl Mat4 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> Rational) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_i64(rows: [[i64; 4]; 4]) -> Self {
        Self::from_fn(|i, j| int(rows[i][j]))
    }

    /// `E_ij` with a single unit entry.
    pub fn unit(i: usize, j: usize) -> Self {
        Self::from_fn(|a, b| {
            if (a, b) == (i, j) {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn diag(d: [Rational; 4]) -> Self {
        Self::from_fn(|i, j| {
            if i == j {
                d[i].clone()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.0[i][j]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_fn(|i, j| &self.0[i][j] * c)
    }

    pub fn trace(&self) -> Rational {
        (0..4).map(|i| self.0[i][i].clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn is_skew(&self) -> bool {
        (self + &self.transpose()).is_zero()
    }

    pub fn is_orthogonal(&self) -> bool {
        &self.transpose() * self == Self::identity()
    }

    pub fn det(&self) -> Rational {
        // Laplace expansion is fine at 4×4.
        fn minor(m: &[Vec<Rational>]) -> Rational {
            if m.len() == 1 {
                return m[0][0].clone();
            }
            let mut acc = Rational::zero();
            for (c, lead) in m[0].iter().enumerate() {
                if lead.is_zero() {
                    continue;
                }
                let sub: Vec<Vec<Rational>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != c)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = lead * minor(&sub);
                if c % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        let rows: Vec<Vec<Rational>> = self.0.iter().map(|r| r.to_vec()).collect();
        minor(&rows)
    }

    /// `M·v`.
    pub fn apply(&self, v: &[Rational; 4]) -> [Rational; 4] {
        std::array::from_fn(|i| (0..4).map(|j| &self.0[i][j] * &v[j]).sum())
    }

    pub fn to_f64(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| crate::ratpoly::to_f64(&self.0[i][j])))
    }
}

impl Add for &Mat4 {
    type Output = Mat4;
    fn add(self, rhs: &Mat4) -> Mat4 {
        Mat4::from_fn(|i, j| &self.0[i][j] + &rhs.0[i][j])
    }
}

impl Sub for &Mat4 {
    type Output = Mat4;
    fn sub(self, rhs: &Mat4) -> Mat4 {
        Mat4::from_fn(|i, j| &self.0[i][j] - &rhs.0[i][j])
    }
}

impl Mul for &Mat4 {
    type Output = Mat4;
    fn mul(self, rhs: &Mat4) -> Mat4 {
        Mat4::from_fn(|i, j| (0..4).map(|k| &self.0[i][k] * &rhs.0[k][j]).sum())
    }
}

impl fmt::Display for Mat4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Tensor field on ℝ⁴∖{0} with exact components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorField {
    rank: u8,
    symmetry: Symmetry,
    vector: bool,
    components: Vec<RadialFn>,
}

/// Canonical multi-indices for a shape, in lexicographic order.
fn canonical_indices(rank: u8, sym: Symmetry) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let total = 4usize.pow(rank as u32);
    for code in 0..total {
        let idx: Vec<usize> = (0..rank as u32)
            .rev()
            .map(|p| (code / 4usize.pow(p)) % 4)
            .collect();
        if canonicalize_index(&idx, sym) == idx {
            out.push(idx);
        }
    }
    out
}

fn canonicalize_index(idx: &[usize], sym: Symmetry) -> Vec<usize> {
    let mut v = idx.to_vec();
    match sym {
        Symmetry::None => {}
        Symmetry::Full => v.sort_unstable(),
        Symmetry::SymLastTwo => {
            let n = v.len();
            if n >= 2 && v[n - 2] > v[n - 1] {
                v.swap(n - 2, n - 1);
            }
        }
    }
    v
}

impl TensorField {
    /// All-zero tensor of the given shape.
    pub fn zeros(rank: u8, symmetry: Symmetry) -> Result<Self, TensorError> {
        let ok = match (rank, symmetry) {
            (0 | 1, Symmetry::None) => true,
            (2, Symmetry::None | Symmetry::Full) => true,
            (3, _) => true,
            _ => false,
        };
        if !ok {
            return Err(TensorError::BadShape);
        }
        let n = canonical_indices(rank, symmetry).len();
        Ok(Self {
            rank,
            symmetry,
            vector: false,
            components: vec![RadialFn::zero(); n],
        })
    }

    pub fn scalar(f: RadialFn) -> Self {
        Self {
            rank: 0,
            symmetry: Symmetry::None,
            vector: false,
            components: vec![f],
        }
    }

    pub fn one_form(c: [RadialFn; 4]) -> Self {
        Self {
            rank: 1,
            symmetry: Symmetry::None,
            vector: false,
            components: c.to_vec(),
        }
    }

    pub fn vector_field(c: [RadialFn; 4]) -> Self {
        Self {
            vector: true,
            ..Self::one_form(c)
        }
    }

    /// Symmetric 2-tensor with `(i, j)` component `f(i, j)` for `i <= j`.
    pub fn sym2(f: impl Fn(usize, usize) -> RadialFn) -> Self {
        let components = canonical_indices(2, Symmetry::Full)
            .iter()
            .map(|ix| f(ix[0], ix[1]))
            .collect();
        Self {
            rank: 2,
            symmetry: Symmetry::Full,
            vector: false,
            components,
        }
    }

    /// Symmetric 2-tensor from a constant matrix (symmetrized).
    pub fn sym2_constant(m: &Mat4) -> Self {
        Self::sym2(|i, j| RadialFn::constant((&m.0[i][j] + &m.0[j][i]) * rat(1, 2)))
    }

    /// The flat metric `g₀`.
    pub fn metric() -> Self {
        Self::sym2_constant(&Mat4::identity())
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn is_vector(&self) -> bool {
        self.vector
    }

    /// Same components, reinterpreted as a 1-form (identity under `g₀`).
    pub fn flat(&self) -> Self {
        Self {
            vector: false,
            ..self.clone()
        }
    }

    /// Same components, reinterpreted as a vector field.
    pub fn sharp(&self) -> Self {
        Self {
            vector: true,
            ..self.clone()
        }
    }

    pub fn indices(&self) -> Vec<Vec<usize>> {
        canonical_indices(self.rank, self.symmetry)
    }

    pub fn components(&self) -> &[RadialFn] {
        &self.components
    }

    fn slot(&self, idx: &[usize]) -> usize {
        assert_eq!(
            idx.len(),
            self.rank as usize,
            "index length must equal rank"
        );
        let c = canonicalize_index(idx, self.symmetry);
        self.indices()
            .iter()
            .position(|v| *v == c)
            .expect("canonical index present")
    }

    pub fn get(&self, idx: &[usize]) -> &RadialFn {
        &self.components[self.slot(idx)]
    }

    pub fn set(&mut self, idx: &[usize], f: RadialFn) {
        let s = self.slot(idx);
        self.components[s] = f;
    }

    /// Component `(i, j)` of a rank-2 tensor.
    pub fn c2(&self, i: usize, j: usize) -> &RadialFn {
        self.get(&[i, j])
    }

    /// Component `i` of a rank-1 tensor.
    pub fn c1(&self, i: usize) -> &RadialFn {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(RadialFn::is_zero)
    }

    pub fn is_sym2(&self) -> bool {
        self.rank == 2 && self.symmetry == Symmetry::Full
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.rank == other.rank && self.symmetry == other.symmetry
    }

    pub fn map(&self, f: impl Fn(&RadialFn) -> RadialFn) -> Self {
        Self {
            components: self.components.iter().map(f).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|f| f.scale(c))
    }

    pub fn scale_fn(&self, g: &RadialFn) -> Self {
        self.map(|f| f * g)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, TensorError> {
        if !self.same_shape(other) {
            return Err(TensorError::BadShape);
        }
        Ok(Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
            ..self.clone()
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, TensorError> {
        self.try_add(&other.scale(&int(-1)))
    }

    /// Exact value of every stored component at a rational point.
    pub fn eval(&self, x: &[Rational; 4]) -> Vec<Rational> {
        self.components.iter().map(|f| f.eval(x)).collect()
    }

    /// Components of a symmetric 2-tensor at a point, as a full 4×4 matrix.
    pub fn eval_matrix_f64(&self, x: &[f64; 4]) -> [[f64; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.c2(i, j).eval_f64(x)))
    }
}

impl Add for &TensorField {
    type Output = TensorField;
    fn add(self, rhs: &TensorField) -> TensorField {
        self.try_add(rhs).expect("tensor shapes must match")
    }
}

impl Sub for &TensorField {
    type Output = TensorField;
    fn sub(self, rhs: &TensorField) -> TensorField {
        self.try_sub(rhs).expect("tensor shapes must match")
    }
}

impl fmt::Display for TensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (idx, c) in self.indices().iter().zip(&self.components) {
            if c.is_zero() {
                continue;
            }
            if !first {
                writeln!(f)?;
            }
            first = false;
            let label: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "[{}] {}", label.join(","), c)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `X(x) = r^(-2k) · L · x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearVectorField {
    pub l: Mat4,
    pub rpow: u32,
}

impl LinearVectorField {
    pub fn new(l: Mat4, rpow: u32) -> Self {
        Self { l, rpow }
    }

    /// The scaling field `r∂_r = x`.
    pub fn euler() -> Self {
        Self::new(Mat4::identity(), 0)
    }

    /// Components `Σ_j L_ij x_j / r^(2k)` as a vector field.
    pub fn to_field(&self) -> TensorField {
        TensorField::vector_field(std::array::from_fn(|i| {
            let p = Poly4::from_terms((0..4).map(|j| {
                let mut e = [0; 4];
                e[j] = 1;
                (e, self.l.0[i][j].clone())
            }));
            RadialFn::new(p, self.rpow)
        }))
    }
}

fn require_sym2(h: &TensorField) -> Result<(), TensorError> {
    if h.rank != 2 {
        return Err(TensorError::RankMismatch {
            expected: 2,
            found: h.rank,
        });
    }
    if h.symmetry != Symmetry::Full {
        return Err(TensorError::NotSymmetric);
    }
    Ok(())
}

fn require_rank(t: &TensorField, rank: u8) -> Result<(), TensorError> {
    if t.rank != rank {
        return Err(TensorError::RankMismatch {
            expected: rank,
            found: t.rank,
        });
    }
    Ok(())
}

fn sum_fns<I: IntoIterator<Item = RadialFn>>(it: I) -> RadialFn {
    it.into_iter().fold(RadialFn::zero(), |acc, f| &acc + &f)
}

/// `Σᵢ h_ii`.
pub fn trace(h: &TensorField) -> Result<RadialFn, TensorError> {
    require_sym2(h)?;
    Ok(sum_fns((0..4).map(|i| h.c2(i, i).clone())))
}

/// Divergence: `(div h)_j = Σᵢ ∂ᵢ h_ij` for symmetric 2-tensors, `Σᵢ ∂ᵢ Xᵢ` for rank 1.
pub fn divergence(t: &TensorField) -> Result<TensorField, TensorError> {
    match t.rank {
        1 => Ok(TensorField::scalar(sum_fns(
            (0..4).map(|i| t.c1(i).partial(i)),
        ))),
        2 => {
            require_sym2(t)?;
            Ok(TensorField::one_form(std::array::from_fn(|j| {
                sum_fns((0..4).map(|i| t.c2(i, j).partial(i)))
            })))
        }
        r => Err(TensorError::RankMismatch {
            expected: 2,
            found: r,
        }),
    }
}

/// Exterior derivative of a scalar field.
pub fn gradient(f: &RadialFn) -> TensorField {
    TensorField::one_form(std::array::from_fn(|i| f.partial(i)))
}

/// Bianchi operator `h ↦ div h − ½ d(tr h)`.
pub fn bianchi(h: &TensorField) -> Result<TensorField, TensorError> {
    let div = divergence(h)?;
    let dtr = gradient(&trace(h)?);
    Ok(&div - &dtr.scale(&rat(1, 2)))
}

/// Componentwise flat Laplacian `Σᵢ ∂ᵢ∂ᵢ`.
pub fn laplacian(t: &TensorField) -> TensorField {
    t.map(|f| sum_fns((0..4).map(|i| f.partial(i).partial(i))))
}

/// `∂ᵢ∂ⱼ f`.
pub fn hessian(f: &RadialFn) -> TensorField {
    let d: Vec<RadialFn> = (0..4).map(|i| f.partial(i)).collect();
    TensorField::sym2(|i, j| d[j].partial(i))
}

/// `(L_X g₀)_ij = ∂ᵢXⱼ + ∂ⱼXᵢ`.
pub fn lie_metric(x: &LinearVectorField) -> TensorField {
    lie_metric_field(&x.to_field()).expect("rank-1 field")
}

/// Lie derivative of `g₀` along an arbitrary rank-1 field.
pub fn lie_metric_field(x: &TensorField) -> Result<TensorField, TensorError> {
    require_rank(x, 1)?;
    Ok(TensorField::sym2(|i, j| {
        &x.c1(j).partial(i) + &x.c1(i).partial(j)
    }))
}

/// Full Lie derivative `X^k∂_k T_ij + T_kj ∂ᵢX^k + T_ik ∂ⱼX^k` of a symmetric 2-tensor.
pub fn lie_derivative(x: &LinearVectorField, t: &TensorField) -> Result<TensorField, TensorError> {
    lie_derivative_field(&x.to_field(), t)
}

pub fn lie_derivative_field(x: &TensorField, t: &TensorField) -> Result<TensorField, TensorError> {
    require_rank(x, 1)?;
    require_sym2(t)?;
    let dx: Vec<Vec<RadialFn>> = (0..4)
        .map(|k| (0..4).map(|i| x.c1(k).partial(i)).collect())
        .collect();
    Ok(TensorField::sym2(|i, j| {
        let transport = sum_fns((0..4).map(|k| x.c1(k) * &t.c2(i, j).partial(k)));
        let left = sum_fns((0..4).map(|k| t.c2(k, j) * &dx[k][i]));
        let right = sum_fns((0..4).map(|k| t.c2(i, k) * &dx[k][j]));
        &(&transport + &left) + &right
    }))
}

/// Contraction with the scaling field: `Σᵢ xᵢ h_ij`.
///
/// Vanishes iff `∂_r ⌟ h` does, and stays inside rational arithmetic.
pub fn contract_scaling(h: &TensorField) -> Result<TensorField, TensorError> {
    require_sym2(h)?;
    Ok(TensorField::one_form(std::array::from_fn(|j| {
        sum_fns((0..4).map(|i| h.c2(i, j).mul_poly(&Poly4::var(i))))
    })))
}

/// `B(L_X g₀) − Δ X♭`; identically zero on flat space.
pub fn bochner_flat(x: &LinearVectorField) -> TensorField {
    let lhs = bianchi(&lie_metric(x)).expect("lie_metric is symmetric");
    let rhs = laplacian(&x.to_field().flat());
    &lhs - &rhs
}

/// Symmetric product `α·β = ½(α⊗β + β⊗α)` of two 1-forms.
pub fn sym_product(a: &TensorField, b: &TensorField) -> Result<TensorField, TensorError> {
    require_rank(a, 1)?;
    require_rank(b, 1)?;
    let half = rat(1, 2);
    Ok(TensorField::sym2(|i, j| {
        (&(a.c1(i) * b.c1(j)) + &(a.c1(j) * b.c1(i))).scale(&half)
    }))
}

/// Pullback `(Q*h)_ij(x) = Σ Q_ai Q_bj h_ab(Qx)` by an orthogonal matrix.
pub fn pullback(h: &TensorField, q: &Mat4) -> Result<TensorField, TensorError> {
    require_sym2(h)?;
    let moved: Vec<Vec<RadialFn>> = (0..4)
        .map(|a| {
            (0..4)
                .map(|b| h.c2(a, b).compose_orthogonal(&q.0))
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;
    Ok(TensorField::sym2(|i, j| {
        let mut acc = RadialFn::zero();
        for a in 0..4 {
            for b in 0..4 {
                let c = &q.0[a][i] * &q.0[b][j];
                if !c.is_zero() {
                    acc = &acc + &moved[a][b].scale(&c);
                }
            }
        }
        acc
    }))
}

#[derive(Serialize, Deserialize)]
struct ComponentJson {
    idx: Vec<usize>,
    #[serde(rename = "fn")]
    func: RadialFn,
}

/// Wire form: `{"rank":2,"sym":true,"components":[{"idx":[i,j],"fn":{..}}]}`, 1-based indices.
#[derive(Serialize, Deserialize)]
struct TensorFieldJson {
    rank: u8,
    sym: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    vector: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    symmetry: Option<String>,
    components: Vec<ComponentJson>,
}

impl Serialize for TensorField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let components = self
            .indices()
            .into_iter()
            .zip(&self.components)
            .map(|(idx, f)| ComponentJson {
                idx: idx.iter().map(|i| i + 1).collect(),
                func: f.clone(),
            })
            .collect();
        TensorFieldJson {
            rank: self.rank,
            sym: self.symmetry == Symmetry::Full,
            vector: self.vector,
            symmetry: (self.symmetry == Symmetry::SymLastTwo).then(|| "last_two".to_string()),
            components,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TensorField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = TensorFieldJson::deserialize(d)?;
        let symmetry = match (j.symmetry.as_deref(), j.sym) {
            (Some("last_two"), _) => Symmetry::SymLastTwo,
            (Some(other), _) => {
                return Err(D::Error::custom(format!("unknown symmetry {other:?}")))
            }
            (None, true) => Symmetry::Full,
            (None, false) => Symmetry::None,
        };
        let mut t = TensorField::zeros(j.rank, symmetry).map_err(D::Error::custom)?;
        t.vector = j.vector;
        for c in j.components {
            if c.idx.len() != j.rank as usize || c.idx.iter().any(|&i| !(1..=4).contains(&i)) {
                return Err(D::Error::custom(format!("bad component index {:?}", c.idx)));
            }
            let idx: Vec<usize> = c.idx.iter().map(|i| i - 1).collect();
            if canonicalize_index(&idx, symmetry) != idx {
                return Err(D::Error::custom(format!(
                    "non-canonical component index {:?}",
                    c.idx
                )));
            }
            t.set(&idx, c.func);
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Poly4 {
        Poly4::var(i)
    }

    fn inv_r2() -> RadialFn {
        RadialFn::inv_r2_pow(1)
    }

    fn euler_l(l: Mat4, k: u32) -> LinearVectorField {
        LinearVectorField::new(l, k)
    }

    #[test]
    fn shapes() {
        assert_eq!(TensorField::metric().components().len(), 10);
        assert_eq!(
            TensorField::zeros(3, Symmetry::SymLastTwo)
                .unwrap()
                .components()
                .len(),
            40
        );
        assert_eq!(
            TensorField::zeros(3, Symmetry::Full)
                .unwrap()
                .components()
                .len(),
            20
        );
        assert_eq!(
            TensorField::zeros(2, Symmetry::None)
                .unwrap()
                .components()
                .len(),
            16
        );
        assert!(TensorField::zeros(1, Symmetry::Full).is_err());
        let mut t = TensorField::zeros(2, Symmetry::Full).unwrap();
        t.set(&[2, 1], RadialFn::var(0));
        assert_eq!(t.c2(1, 2), &RadialFn::var(0));
    }

    #[test]
    fn trace_examples() {
        assert_eq!(
            trace(&TensorField::metric()).unwrap(),
            RadialFn::constant(int(4))
        );
        // L_X g₀ with L = e₁⊗e₁, k = 2: (2/r⁴)(1 − 4x₁²/r²) = (2r² − 8x₁²)/r⁶
        let h = lie_metric(&euler_l(Mat4::unit(0, 0), 2));
        let want = RadialFn::new(
            &Poly4::r2().scale(&int(2)) - &(&x(0) * &x(0)).scale(&int(8)),
            3,
        );
        assert_eq!(trace(&h).unwrap(), want);
        assert!(trace(&lie_metric(&euler_l(Mat4::identity(), 2)))
            .unwrap()
            .is_zero());
        assert!(matches!(
            trace(&gradient(&inv_r2())),
            Err(TensorError::RankMismatch {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn divergence_examples() {
        assert!(divergence(&TensorField::metric()).unwrap().is_zero());
        assert!(divergence(&hessian(&inv_r2())).unwrap().is_zero());
    }

    #[test]
    fn bianchi_examples() {
        assert!(bianchi(&TensorField::metric()).unwrap().is_zero());
        // h = x₁² dx₁⊗dx₁ → x₁ dx₁
        let mut h = TensorField::zeros(2, Symmetry::Full).unwrap();
        h.set(&[0, 0], RadialFn::poly(&x(0) * &x(0)));
        let b = bianchi(&h).unwrap();
        assert_eq!(b.c1(0), &RadialFn::var(0));
        for j in 1..4 {
            assert!(b.c1(j).is_zero());
        }
    }

    #[test]
    fn laplacian_examples() {
        assert!(laplacian(&TensorField::scalar(inv_r2())).is_zero());
        let l = laplacian(&TensorField::scalar(RadialFn::poly(&x(0) * &x(0))));
        assert_eq!(l.components()[0], RadialFn::constant(int(2)));
    }

    #[test]
    fn hessian_examples() {
        // 2Hess(1/r²) = −(4/r⁴)(g₀ − 4dr²): (i,j) → (−4δ_ij r² + 16 x_i x_j)/r⁶
        let h = hessian(&inv_r2()).scale(&int(2));
        for i in 0..4 {
            for j in 0..4 {
                let mut p = (&x(i) * &x(j)).scale(&int(16));
                if i == j {
                    p = &p - &Poly4::r2().scale(&int(4));
                }
                assert_eq!(h.c2(i, j), &RadialFn::new(p, 3));
            }
        }
        let h = hessian(&RadialFn::poly(Poly4::r2()));
        assert_eq!(h, TensorField::metric().scale(&int(2)));
        let h = hessian(&RadialFn::poly(&x(0) * &x(1)));
        assert_eq!(h.c2(0, 1), &RadialFn::one());
        assert!(h.c2(0, 0).is_zero());
    }

    #[test]
    fn lie_metric_examples() {
        let grad = lie_metric(&euler_l(Mat4::identity().scale(&int(-2)), 2));
        assert_eq!(grad, hessian(&inv_r2()).scale(&int(2)));
        let skew = &Mat4::unit(0, 1) - &Mat4::unit(1, 0);
        assert!(lie_metric(&euler_l(skew, 0)).is_zero());
        assert_eq!(
            lie_metric(&LinearVectorField::euler()),
            TensorField::metric().scale(&int(2))
        );
    }

    #[test]
    fn lie_derivative_of_metric_matches_lie_metric() {
        let l = Mat4::from_i64([[1, 2, 0, -1], [0, 3, 1, 0], [2, 0, 0, 1], [1, 1, -2, 0]]);
        let x = euler_l(l, 1);
        assert_eq!(
            lie_derivative(&x, &TensorField::metric()).unwrap(),
            lie_metric(&x)
        );
    }

    #[test]
    fn euler_scaling_on_homogeneous_tensor() {
        // q/r⁶ components: degree −4, tensor weight +2 → −2.
        let h = TensorField::sym2(|i, j| RadialFn::new(&x(i) * &x(j), 3));
        let lie = lie_derivative(&LinearVectorField::euler(), &h).unwrap();
        assert_eq!(lie, h.scale(&int(-2)));
    }

    #[test]
    fn contract_scaling_examples() {
        let c = contract_scaling(&TensorField::metric()).unwrap();
        for j in 0..4 {
            assert_eq!(c.c1(j), &RadialFn::var(j));
        }
        // 2Hess(1/r²) → 12 x_j / r⁴
        let c = contract_scaling(&hessian(&inv_r2()).scale(&int(2))).unwrap();
        for j in 0..4 {
            assert_eq!(c.c1(j), &RadialFn::new(x(j).scale(&int(12)), 2));
        }
    }

    #[test]
    fn bochner_examples() {
        let l = Mat4::from_i64([[2, -1, 0, 3], [1, 0, 4, 0], [0, 5, -1, 1], [-3, 0, 2, 2]]);
        for k in 0..3 {
            assert!(bochner_flat(&euler_l(l.clone(), k)).is_zero());
        }
        assert!(bochner_flat(&LinearVectorField::euler()).is_zero());
    }

    #[test]
    fn mat4_basics() {
        let m = Mat4::from_i64([[1, 2, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 3]]);
        assert_eq!(m.det(), int(6));
        assert_eq!(Mat4::diag([int(1), int(1), int(1), int(-1)]).det(), int(-1));
        assert!(Mat4::diag([int(1), int(-1), int(1), int(1)]).is_orthogonal());
        assert!(!m.is_orthogonal());
        let s = &Mat4::unit(0, 1) - &Mat4::unit(1, 0);
        assert!(s.is_skew() && !s.is_symmetric());
    }

    #[test]
    fn pullback_by_reflection() {
        let r = Mat4::diag([int(1), int(1), int(1), int(-1)]);
        let h = TensorField::sym2(|i, j| RadialFn::new(&x(i) * &x(j), 3));
        // x x^T / r^6 is O(4)-invariant.
        assert_eq!(pullback(&h, &r).unwrap(), h);
        let mut g = TensorField::zeros(2, Symmetry::Full).unwrap();
        g.set(&[0, 3], RadialFn::inv_r2_pow(2));
        let p = pullback(&g, &r).unwrap();
        assert_eq!(p.c2(0, 3), &RadialFn::inv_r2_pow(2).scale(&int(-1)));
    }

    #[test]
    fn json_roundtrip_and_shape() {
        let h = hessian(&inv_r2());
        let s = serde_json::to_string(&h).unwrap();
        assert!(s.starts_with(r#"{"rank":2,"sym":true,"components":[{"idx":[1,1],"fn":"#));
        let back: TensorField = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
        let bad =
            r#"{"rank":2,"sym":true,"components":[{"idx":[2,1],"fn":{"terms":[],"rpow":0}}]}"#;
        assert!(serde_json::from_str::<TensorField>(bad).is_err());
        let v = LinearVectorField::euler().to_field();
        let back: TensorField = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert!(back.is_vector());
    }
}

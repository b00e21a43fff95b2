//! Dense exact linear algebra over ℚ.
//!
//! Elimination always picks the leftmost remaining column and, inside it, the topmost
//! nonzero row, so every basis produced here is reproducible bit for bit.

use std::fmt;

use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::ratpoly::{parse_rational, rational_to_string, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactLaError {
    #[error("ambient dimensions differ ({left} vs {right})")]
    AmbientMismatch { left: usize, right: usize },
    #[error("rows have different lengths")]
    Ragged,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatQ {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Result of row reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: MatQ,
    pub rank: usize,
    /// Pivot column of each nonzero row, increasing.
    pub pivots: Vec<usize>,
}

impl MatQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows; `cols` fixes the width so empty row lists keep their shape.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self, ExactLaError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(ExactLaError::Ragged);
            }
            data.extend(r);
        }
        Ok(Self {
            rows: n,
            cols,
            data,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, ExactLaError> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| Rational::from_integer(v.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, ExactLaError> {
        if v.len() != self.cols {
            return Err(ExactLaError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn mul(&self, other: &MatQ) -> Result<MatQ, ExactLaError> {
        if self.cols != other.rows {
            return Err(ExactLaError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = MatQ::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Stacks `other` under `self`.
    pub fn vstack(&self, other: &MatQ) -> Result<MatQ, ExactLaError> {
        if self.cols != other.cols {
            return Err(ExactLaError::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(MatQ {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Reduced row echelon form (leftmost column, topmost nonzero row).
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let idx = r * m.cols + j;
                if !m.data[idx].is_zero() {
                    m.data[idx] *= &inv;
                }
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let src = m.data[r * m.cols + j].clone();
                    if !src.is_zero() {
                        m.data[i * m.cols + j] -= &f * src;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: m,
            rank: r,
            pivots,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// `{v : Mv = 0}` in canonical form.
    pub fn nullspace(&self) -> SubspaceQ {
        let Rref { matrix, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut vecs = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -matrix.get(row, f).clone();
            }
            vecs.push(v);
        }
        SubspaceQ::from_spanning(self.cols, vecs).expect("vectors have ambient length")
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<MatQ> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = MatQ::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::one());
        }
        let r = aug.rref();
        if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = MatQ::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.matrix.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Some solution of `Mx = b`, or `None` if the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>, ExactLaError> {
        if b.len() != self.rows {
            return Err(ExactLaError::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut aug = MatQ::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let Rref { matrix, pivots, .. } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = matrix.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

impl fmt::Display for MatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|q| q.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for MatQ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(rational_to_string).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        let parsed = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| parse_rational(s).map_err(D::Error::custom))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        MatQ::from_rows(cols, parsed).map_err(D::Error::custom)
    }
}

/// Subspace of ℚⁿ stored as the nonzero rows of an RREF matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceQ {
    ambient: usize,
    basis: MatQ,
    pivots: Vec<usize>,
}

impl SubspaceQ {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: MatQ::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_matrix(&MatQ::identity(ambient))
    }

    /// Span of the rows of `m`.
    pub fn from_matrix(m: &MatQ) -> Self {
        let Rref {
            matrix,
            rank,
            pivots,
        } = m.rref();
        let basis = MatQ {
            rows: rank,
            cols: m.cols,
            data: matrix.data[..rank * m.cols].to_vec(),
        };
        Self {
            ambient: m.cols,
            basis,
            pivots,
        }
    }

    pub fn from_spanning(
        ambient: usize,
        vectors: Vec<Vec<Rational>>,
    ) -> Result<Self, ExactLaError> {
        for v in &vectors {
            if v.len() != ambient {
                return Err(ExactLaError::AmbientMismatch {
                    left: ambient,
                    right: v.len(),
                });
            }
        }
        Ok(Self::from_matrix(&MatQ::from_rows(ambient, vectors)?))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    /// Canonical basis (RREF rows).
    pub fn basis(&self) -> &MatQ {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.row_vecs()
    }

    fn check(&self, other: &Self) -> Result<(), ExactLaError> {
        if self.ambient != other.ambient {
            return Err(ExactLaError::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self, ExactLaError> {
        self.check(other)?;
        Ok(Self::from_matrix(&self.basis.vstack(&other.basis)?))
    }

    /// Linear forms vanishing on the subspace, as a subspace of the dual.
    pub fn annihilator(&self) -> Self {
        self.basis.nullspace()
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, ExactLaError> {
        self.check(other)?;
        let constraints = self
            .annihilator()
            .basis
            .vstack(&other.annihilator().basis)?;
        Ok(constraints.nullspace())
    }

    pub fn contains_vector(&self, v: &[Rational]) -> Result<bool, ExactLaError> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn contains(&self, other: &Self) -> Result<bool, ExactLaError> {
        self.check(other)?;
        for v in other.vectors() {
            if !self.contains_vector(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Self) -> Result<bool, ExactLaError> {
        self.check(other)?;
        Ok(self == other)
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is outside the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Result<Option<Vec<Rational>>, ExactLaError> {
        if v.len() != self.ambient {
            return Err(ExactLaError::AmbientMismatch {
                left: self.ambient,
                right: v.len(),
            });
        }
        // RREF rows carry the identity on pivot columns, so the pivot entries are the coordinates.
        let c: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rebuilt = vec![Rational::zero(); self.ambient];
        for (k, ck) in c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            for (j, b) in self.basis.row(k).iter().enumerate() {
                if !b.is_zero() {
                    rebuilt[j] += ck * b;
                }
            }
        }
        Ok((rebuilt == v).then_some(c))
    }
}

/// True when the subspaces form a direct sum.
pub fn independent(parts: &[&SubspaceQ]) -> Result<bool, ExactLaError> {
    let Some(first) = parts.first() else {
        return Ok(true);
    };
    let mut acc = SubspaceQ::zero(first.ambient);
    let mut total = 0;
    for p in parts {
        acc = acc.sum(p)?;
        total += p.dim();
    }
    Ok(acc.dim() == total)
}

#[derive(Serialize, Deserialize)]
struct SubspaceJson {
    ambient_dim: usize,
    basis: MatQ,
}

impl Serialize for SubspaceQ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubspaceJson {
            ambient_dim: self.ambient,
            basis: self.basis.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubspaceQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = SubspaceJson::deserialize(d)?;
        if j.basis.rows > 0 && j.basis.cols != j.ambient_dim {
            return Err(D::Error::custom("basis width differs from ambient_dim"));
        }
        let width_fixed =
            MatQ::from_rows(j.ambient_dim, j.basis.row_vecs()).map_err(D::Error::custom)?;
        Ok(SubspaceQ::from_matrix(&width_fixed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::{int, rat};

    #[test]
    fn rref_examples() {
        let id = MatQ::identity(3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);

        let z = MatQ::zeros(2, 3);
        assert_eq!(z.rref().rank, 0);
        assert_eq!(z.rref().matrix, z);

        let m = MatQ::from_i64(&[&[1, 2], &[2, 4]]).unwrap();
        let r = m.rref();
        assert_eq!(r.matrix, MatQ::from_i64(&[&[1, 2], &[0, 0]]).unwrap());
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(MatQ::zeros(2, 3).nullspace().dim(), 3);
        assert_eq!(MatQ::identity(4).nullspace().dim(), 0);
        let m = MatQ::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).unwrap();
        let n = m.nullspace();
        assert_eq!(n.dim(), 1);
        let v = &n.vectors()[0];
        assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        assert_eq!(v, &vec![int(1), int(-2), int(1)]);
    }

    #[test]
    fn subspace_lattice() {
        let a = SubspaceQ::from_spanning(
            3,
            vec![vec![int(1), int(0), int(0)], vec![int(0), int(1), int(0)]],
        )
        .unwrap();
        let b = SubspaceQ::from_spanning(
            3,
            vec![vec![int(0), int(1), int(1)], vec![int(0), int(0), int(1)]],
        )
        .unwrap();
        let s = a.sum(&b).unwrap();
        let i = a.intersect(&b).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(i.dim(), 1);
        assert!(i.contains_vector(&[int(0), int(5), int(0)]).unwrap());
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert!(s.contains(&a).unwrap());
        assert!(!a.contains(&b).unwrap());
        let c = SubspaceQ::zero(4);
        assert_eq!(
            a.sum(&c),
            Err(ExactLaError::AmbientMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn canonical_representative() {
        let a = SubspaceQ::from_spanning(
            3,
            vec![vec![int(1), int(1), int(0)], vec![int(1), int(-1), int(2)]],
        )
        .unwrap();
        let b = SubspaceQ::from_spanning(
            3,
            vec![
                vec![int(2), int(0), int(2)],
                vec![int(0), int(2), int(-2)],
                vec![int(1), int(1), int(0)],
            ],
        )
        .unwrap();
        assert!(a.equals(&b).unwrap());
    }

    #[test]
    fn coordinates_and_solve() {
        let a = SubspaceQ::from_spanning(
            3,
            vec![vec![int(1), int(2), int(0)], vec![int(0), int(0), int(1)]],
        )
        .unwrap();
        assert_eq!(
            a.coordinates(&[int(2), int(4), rat(1, 3)]).unwrap(),
            Some(vec![int(2), rat(1, 3)])
        );
        assert_eq!(a.coordinates(&[int(1), int(0), int(0)]).unwrap(), None);

        let m = MatQ::from_i64(&[&[2, 1], &[1, 3]]).unwrap();
        let x = m.solve(&[int(3), int(4)]).unwrap().unwrap();
        assert_eq!(x, vec![int(1), int(1)]);
        let sing = MatQ::from_i64(&[&[1, 1], &[1, 1]]).unwrap();
        assert_eq!(sing.solve(&[int(0), int(1)]).unwrap(), None);
        assert_eq!(sing.inverse(), None);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), MatQ::identity(2));
        assert_eq!(*inv.get(0, 0), rat(3, 5));
    }

    #[test]
    fn json_round_trip() {
        let m =
            MatQ::from_rows(2, vec![vec![rat(1, 2), int(-3)], vec![int(0), rat(7, 5)]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[["1/2","-3/1"],["0/1","7/5"]]"#);
        let back: MatQ = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let sub = SubspaceQ::from_matrix(&m);
        let js = serde_json::to_string(&sub).unwrap();
        let back: SubspaceQ = serde_json::from_str(&js).unwrap();
        assert_eq!(back, sub);
    }
}

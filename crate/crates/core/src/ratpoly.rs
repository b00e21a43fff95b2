//! Exact scalar algebra on ℝ⁴∖{0}.
//!
//! Three layers:
//! - [`Rational`]: arbitrary precision rationals (always reduced, positive denominator).
//! - [`Poly4`]: sparse polynomials in `x1..x4` with rational coefficients.
//! - [`RadialFn`]: fields of the form `p(x) · r^(-2k)` with `r² = x1² + x2² + x3² + x4²`,
//!   kept in a canonical form where the numerator is not divisible by `r²` whenever `k > 0`.
//!
//! Every operation is exact. Equality of two [`RadialFn`] values is structural, so
//! "this tensor vanishes" is a decidable test.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational number.
pub type Rational = BigRational;

/// Exponent vector `(e1, e2, e3, e4)` of a monomial.
pub type Exponent = [u32; 4];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatPolyError {
    #[error("field is not homogeneous: numerator mixes monomial degrees")]
    NonHomogeneous,
    #[error("the zero field has no homogeneity degree")]
    ZeroField,
    #[error("invalid integer literal {0:?}")]
    BadInteger(String),
    #[error("zero or negative denominator in coefficient")]
    BadDenominator,
    #[error("linear substitution is not orthogonal")]
    NotOrthogonal,
}

/// `n / d` as a rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `"num/den"` (the denominator is always written).
pub fn rational_to_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"num/den"` or `"num"`.
pub fn parse_rational(s: &str) -> Result<Rational, RatPolyError> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n
        .parse()
        .map_err(|_| RatPolyError::BadInteger(n.to_string()))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| RatPolyError::BadInteger(d.to_string()))?;
    if d.is_zero() {
        return Err(RatPolyError::BadDenominator);
    }
    Ok(Rational::new(n, d))
}

/// Lossy conversion used by the numeric layers.
pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 can fail when both parts overflow f64; fall back to scaled division.
        let n = q.numer();
        let d = q.denom();
        let shift = n.bits().max(d.bits()).saturating_sub(1000);
        let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Sparse polynomial in four variables with rational coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by exponent vector (lexicographic order, `x1`
/// most significant). Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly4 {
    terms: BTreeMap<Exponent, Rational>,
}

impl Poly4 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial([0, 0, 0, 0], c)
    }

    pub fn monomial(exp: Exponent, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    /// The coordinate `x_{i+1}` (`i` is zero-based).
    pub fn var(i: usize) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    /// `r² = x1² + x2² + x3² + x4²`.
    pub fn r2() -> Self {
        Self::from_terms((0..4).map(|i| {
            let mut e = [0; 4];
            e[i] = 2;
            (e, Rational::one())
        }))
    }

    /// Builds a polynomial by summing the given terms (duplicates are combined).
    pub fn from_terms<I: IntoIterator<Item = (Exponent, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &Exponent) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree of a homogeneous polynomial; `None` for zero or mixed-degree input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Exact partial derivative along `x_{i+1}`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = *e;
            f[i] -= 1;
            out.insert(f, c * BigInt::from(e[i]));
        }
        Self { terms: out }
    }

    /// Exact quotient by `r²`, or `None` if `r²` does not divide `self`.
    pub fn div_r2(&self) -> Option<Self> {
        // Lex-leading term of q·r² is LT(q)·x1², so every step must see e1 >= 2.
        let mut rem = self.terms.clone();
        let mut quot = Self::zero();
        while let Some((e, c)) = rem.pop_last() {
            if e[0] < 2 {
                return None;
            }
            let mut m = e;
            m[0] -= 2;
            for i in 1..4 {
                let mut f = m;
                f[i] += 2;
                let v = rem.entry(f).or_insert_with(Rational::zero);
                *v -= &c;
                if v.is_zero() {
                    rem.remove(&f);
                }
            }
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// `p(Mx)` for a 4×4 rational matrix `M` (row-major).
    pub fn compose_linear(&self, m: &[[Rational; 4]; 4]) -> Self {
        let rows: Vec<Poly4> = (0..4)
            .map(|i| Poly4::from_terms((0..4).map(|j| (unit_exp(j), m[i][j].clone()))))
            .collect();
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (i, row) in rows.iter().enumerate() {
                for _ in 0..e[i] {
                    t = &t * row;
                }
            }
            out = &out + &t;
        }
        out
    }

    pub fn eval(&self, x: &[Rational; 4]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..4 {
                for _ in 0..e[i] {
                    t *= &x[i];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64; 4]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| to_f64(c) * (0..4).map(|i| x[i].powi(e[i] as i32)).product::<f64>())
            .sum()
    }
}

fn unit_exp(i: usize) -> Exponent {
    let mut e = [0; 4];
    e[i] = 1;
    e
}

impl Add<&Poly4> for &Poly4 {
    type Output = Poly4;
    fn add(self, rhs: &Poly4) -> Poly4 {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub<&Poly4> for &Poly4 {
    type Output = Poly4;
    fn sub(self, rhs: &Poly4) -> Poly4 {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul<&Poly4> for &Poly4 {
    type Output = Poly4;
    fn mul(self, rhs: &Poly4) -> Poly4 {
        let mut out = Poly4::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly4 {
    type Output = Poly4;
    fn neg(self) -> Poly4 {
        Poly4 {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Add for Poly4 {
    type Output = Poly4;
    fn add(self, rhs: Poly4) -> Poly4 {
        &self + &rhs
    }
}

impl Sub for Poly4 {
    type Output = Poly4;
    fn sub(self, rhs: Poly4) -> Poly4 {
        &self - &rhs
    }
}

impl Mul for Poly4 {
    type Output = Poly4;
    fn mul(self, rhs: Poly4) -> Poly4 {
        &self * &rhs
    }
}

const VAR_NAMES: [&str; 4] = ["x1", "x2", "x3", "x4"];

impl fmt::Display for Poly4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let a = c.abs();
            let is_const = e.iter().all(|&x| x == 0);
            if !a.is_one() || is_const {
                write!(f, "{a}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for i in 0..4 {
                if e[i] == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", VAR_NAMES[i])?;
                if e[i] > 1 {
                    write!(f, "^{}", e[i])?;
                }
            }
        }
        Ok(())
    }
}

/// Scalar field `numerator(x) · r^(-2·rpow)` on ℝ⁴∖{0}.
///
/// Invariant: if `rpow > 0` the numerator is not divisible by `r²`; the zero field
/// has `rpow == 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RadialFnJson", into = "RadialFnJson")]
pub struct RadialFn {
    num: Poly4,
    rpow: u32,
}

impl RadialFn {
    /// Canonicalizing constructor: strips `r²` factors while `rpow > 0`.
    pub fn new(num: Poly4, rpow: u32) -> Self {
        let (mut num, mut rpow) = (num, rpow);
        if num.is_zero() {
            return Self::zero();
        }
        while rpow > 0 {
            match num.div_r2() {
                Some(q) => {
                    num = q;
                    rpow -= 1;
                }
                None => break,
            }
        }
        Self { num, rpow }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::poly(Poly4::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::poly(Poly4::constant(c))
    }

    pub fn poly(p: Poly4) -> Self {
        Self { num: p, rpow: 0 }
    }

    pub fn var(i: usize) -> Self {
        Self::poly(Poly4::var(i))
    }

    /// `r^(-2k)`.
    pub fn inv_r2_pow(k: u32) -> Self {
        Self::new(Poly4::one(), k)
    }

    pub fn numerator(&self) -> &Poly4 {
        &self.num
    }

    pub fn rpow(&self) -> u32 {
        self.rpow
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The numerator as a polynomial when there is no negative radial power.
    pub fn as_poly(&self) -> Option<&Poly4> {
        (self.rpow == 0).then_some(&self.num)
    }

    /// Numerator rewritten over `r^(-2k)` for `k >= rpow`.
    fn numerator_over(&self, k: u32) -> Poly4 {
        &self.num * &pow_r2(k - self.rpow)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            rpow: self.rpow,
        }
    }

    /// Multiplies by `r^(2n)`.
    pub fn mul_r2_pow(&self, n: u32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        if n <= self.rpow {
            Self::new(self.num.clone(), self.rpow - n)
        } else {
            Self::poly(&self.num * &pow_r2(n - self.rpow))
        }
    }

    pub fn mul_poly(&self, p: &Poly4) -> Self {
        Self::new(&self.num * p, self.rpow)
    }

    /// Exact `∂f/∂x_{i+1}`, using `∂ᵢ r^(-2k) = -2k xᵢ r^(-2k-2)`.
    pub fn partial(&self, i: usize) -> Self {
        if self.rpow == 0 {
            return Self::poly(self.num.partial(i));
        }
        let k = self.rpow;
        let lhs = &Poly4::r2() * &self.num.partial(i);
        let rhs = (&Poly4::var(i) * &self.num).scale(&int(2 * k as i64));
        Self::new(&lhs - &rhs, k + 1)
    }

    /// `deg(numerator) - 2·rpow` for homogeneous numerators.
    pub fn homogeneity_degree(&self) -> Result<i64, RatPolyError> {
        if self.is_zero() {
            return Err(RatPolyError::ZeroField);
        }
        let d = self
            .num
            .homogeneous_degree()
            .ok_or(RatPolyError::NonHomogeneous)?;
        Ok(d as i64 - 2 * self.rpow as i64)
    }

    /// Pullback `f(Qx)` by an orthogonal rational matrix (which fixes `r²`).
    pub fn compose_orthogonal(&self, q: &[[Rational; 4]; 4]) -> Result<Self, RatPolyError> {
        for i in 0..4 {
            for j in 0..4 {
                let dot: Rational = (0..4).map(|k| &q[k][i] * &q[k][j]).sum();
                let want = if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                if dot != want {
                    return Err(RatPolyError::NotOrthogonal);
                }
            }
        }
        Ok(Self::new(self.num.compose_linear(q), self.rpow))
    }

    /// Exact value at a rational point with `r ≠ 0`.
    pub fn eval(&self, x: &[Rational; 4]) -> Rational {
        let p = self.num.eval(x);
        if self.rpow == 0 || p.is_zero() {
            return p;
        }
        let r2: Rational = x.iter().map(|v| v * v).sum();
        p / num_traits::pow(r2, self.rpow as usize)
    }

    pub fn eval_f64(&self, x: &[f64; 4]) -> f64 {
        let p = self.num.eval_f64(x);
        let r2: f64 = x.iter().map(|v| v * v).sum();
        p / r2.powi(self.rpow as i32)
    }
}

fn pow_r2(n: u32) -> Poly4 {
    let r2 = Poly4::r2();
    (0..n).fold(Poly4::one(), |acc, _| &acc * &r2)
}

impl Add<&RadialFn> for &RadialFn {
    type Output = RadialFn;
    fn add(self, rhs: &RadialFn) -> RadialFn {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let k = self.rpow.max(rhs.rpow);
        RadialFn::new(&self.numerator_over(k) + &rhs.numerator_over(k), k)
    }
}

impl Sub<&RadialFn> for &RadialFn {
    type Output = RadialFn;
    fn sub(self, rhs: &RadialFn) -> RadialFn {
        self + &(-rhs)
    }
}

impl Mul<&RadialFn> for &RadialFn {
    type Output = RadialFn;
    fn mul(self, rhs: &RadialFn) -> RadialFn {
        RadialFn::new(&self.num * &rhs.num, self.rpow + rhs.rpow)
    }
}

impl Neg for &RadialFn {
    type Output = RadialFn;
    fn neg(self) -> RadialFn {
        RadialFn {
            num: -&self.num,
            rpow: self.rpow,
        }
    }
}

impl Add for RadialFn {
    type Output = RadialFn;
    fn add(self, rhs: RadialFn) -> RadialFn {
        &self + &rhs
    }
}

impl Sub for RadialFn {
    type Output = RadialFn;
    fn sub(self, rhs: RadialFn) -> RadialFn {
        &self - &rhs
    }
}

impl Mul for RadialFn {
    type Output = RadialFn;
    fn mul(self, rhs: RadialFn) -> RadialFn {
        &self * &rhs
    }
}

impl fmt::Display for RadialFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rpow {
            0 => write!(f, "{}", self.num),
            k => write!(f, "({}) / r^{}", self.num, 2 * k),
        }
    }
}

/// Canonical radial power `k` for `num · r^(-2k)`.
pub fn radial_canonicalize(num: Poly4, k: u32) -> RadialFn {
    RadialFn::new(num, k)
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: [u32; 4],
    num: String,
    den: String,
}

/// Wire form of [`Poly4`]: `{"terms":[{"exp":[..],"num":"..","den":".."}]}`.
#[derive(Serialize, Deserialize)]
struct Poly4Json {
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct RadialFnJson {
    terms: Vec<TermJson>,
    #[serde(default)]
    rpow: u32,
}

fn terms_to_json(p: &Poly4) -> Vec<TermJson> {
    p.terms
        .iter()
        .map(|(e, c)| TermJson {
            exp: *e,
            num: c.numer().to_string(),
            den: c.denom().to_string(),
        })
        .collect()
}

fn terms_from_json(terms: Vec<TermJson>) -> Result<Poly4, RatPolyError> {
    let mut p = Poly4::zero();
    for t in terms {
        let n: BigInt = t
            .num
            .trim()
            .parse()
            .map_err(|_| RatPolyError::BadInteger(t.num.clone()))?;
        let d: BigInt = t
            .den
            .trim()
            .parse()
            .map_err(|_| RatPolyError::BadInteger(t.den.clone()))?;
        if !d.is_positive() {
            return Err(RatPolyError::BadDenominator);
        }
        p.add_term(t.exp, Rational::new(n, d));
    }
    Ok(p)
}

impl From<RadialFn> for RadialFnJson {
    fn from(f: RadialFn) -> Self {
        RadialFnJson {
            terms: terms_to_json(&f.num),
            rpow: f.rpow,
        }
    }
}

impl TryFrom<RadialFnJson> for RadialFn {
    type Error = RatPolyError;
    fn try_from(j: RadialFnJson) -> Result<Self, Self::Error> {
        Ok(RadialFn::new(terms_from_json(j.terms)?, j.rpow))
    }
}

impl Serialize for Poly4 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Poly4Json {
            terms: terms_to_json(self),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly4 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = Poly4Json::deserialize(d)?;
        terms_from_json(j.terms).map_err(serde::de::Error::custom)
    }
}

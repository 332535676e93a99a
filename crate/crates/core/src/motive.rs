//! Grothendieck classes that are polynomials in the torus class.
//!
//! A [`MotClass`] stores the coefficients `a_k` of `T^k`, where `T = [G_m]`
//! and `L = T + 1` is the class of the affine line. All arithmetic is exact.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{range, Error, Result};

/// Which symbol a coefficient sequence is expanded in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Basis {
    /// Powers of the torus class `T`.
    #[default]
    T,
    /// Powers of the Lefschetz class `L = T + 1`.
    L,
}

impl Basis {
    pub fn symbol(self) -> &'static str {
        match self {
            Basis::T => "T",
            Basis::L => "L",
        }
    }
}

impl std::str::FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" | "t" => Ok(Basis::T),
            "L" | "l" => Ok(Basis::L),
            other => Err(Error::Parse(format!("unknown basis {other:?}"))),
        }
    }
}

/// A class `Σ a_k T^k` in the Grothendieck ring.
///
/// The coefficient vector never has a trailing zero, so the zero class is the
/// empty vector and structural equality is ring equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MotClass {
    coeffs: Vec<BigInt>,
}

impl MotClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant<I: Into<BigInt>>(c: I) -> Self {
        Self::from_t_coeffs(vec![c.into()])
    }

    /// The torus class `T`.
    pub fn t() -> Self {
        Self::from_t_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    /// The Lefschetz class `L = T + 1`.
    pub fn l() -> Self {
        Self::from_t_coeffs(vec![BigInt::one(), BigInt::one()])
    }

    /// Builds a class from T-basis coefficients (index = degree).
    pub fn from_t_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut c = MotClass { coeffs };
        c.normalize();
        c
    }

    /// Builds a class from L-basis coefficients (index = degree).
    pub fn from_l_coeffs(coeffs: &[BigInt]) -> Self {
        // Σ b_k (T+1)^k
        Self::from_t_coeffs(shift_variable(coeffs, 1))
    }

    pub fn from_coeffs(coeffs: &[BigInt], basis: Basis) -> Self {
        match basis {
            Basis::T => Self::from_t_coeffs(coeffs.to_vec()),
            Basis::L => Self::from_l_coeffs(coeffs),
        }
    }

    pub fn from_i64s(coeffs: &[i64], basis: Basis) -> Self {
        let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_coeffs(&big, basis)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `T`; `None` for the zero class.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// T-basis coefficients, canonical (no trailing zeros).
    pub fn t_coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `T^k`.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Coefficients of this class expanded in the target basis.
    pub fn to_basis(&self, basis: Basis) -> Vec<BigInt> {
        match basis {
            Basis::T => self.coeffs.clone(),
            // T = L - 1
            Basis::L => {
                let mut v = shift_variable(&self.coeffs, -1);
                while v.last().is_some_and(Zero::is_zero) {
                    v.pop();
                }
                v
            }
        }
    }

    /// True iff every T-coefficient is non-negative, the necessary condition for a
    /// decomposition into tori.
    pub fn is_effective_torus_class(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Number of points over the extension of degree `m`, i.e. the class evaluated
    /// at `T = m`. For `m = 0` this is the Euler characteristic.
    pub fn count_points(&self, m: u64) -> BigInt {
        self.eval(&BigInt::from(m))
    }

    /// Evaluates the T-polynomial at an integer (Horner).
    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    /// Poincaré polynomial: L-basis coefficients `b_k` placed at `q^{2k}`.
    /// Index of the returned vector is the power of `q`.
    pub fn poincare_poly(&self) -> Vec<BigInt> {
        let l = self.to_basis(Basis::L);
        let mut out = vec![BigInt::zero(); (2 * l.len()).saturating_sub(1)];
        for (k, b) in l.into_iter().enumerate() {
            out[2 * k] = b;
        }
        out
    }

    pub fn scale<I: Into<BigInt>>(&self, s: I) -> Self {
        let s = s.into();
        Self::from_t_coeffs(self.coeffs.iter().map(|c| c * &s).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = MotClass::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Renders the class as a polynomial string such as `L^3+16L^2+16L+1`.
    pub fn format(&self, basis: Basis) -> String {
        format_poly(&self.to_basis(basis), basis.symbol())
    }

    pub fn to_doc(&self, basis: Basis) -> ClassDoc {
        ClassDoc {
            basis,
            coeffs: self.to_basis(basis).iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn from_doc(doc: &ClassDoc) -> Result<Self> {
        let coeffs = doc
            .coeffs
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("coefficient {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(&coeffs, doc.basis))
    }
}

/// Wire form of a class: `{"basis":"T","coeffs":["2","1"]}`, ascending degree,
/// decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDoc {
    pub basis: Basis,
    pub coeffs: Vec<String>,
}

impl Serialize for MotClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc(Basis::T).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MotClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = ClassDoc::deserialize(d)?;
        MotClass::from_doc(&doc).map_err(serde::de::Error::custom)
    }
}

/// Substitutes `x = y + shift` into `Σ a_k x^k` and returns coefficients in `y`.
fn shift_variable(coeffs: &[BigInt], shift: i64) -> Vec<BigInt> {
    let shift = BigInt::from(shift);
    let mut out = vec![BigInt::zero(); coeffs.len()];
    for (k, a) in coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        // a (y + s)^k = a Σ_j C(k,j) s^{k-j} y^j
        let mut spow = BigInt::one();
        for j in (0..=k).rev() {
            out[j] += a * binomial(BigInt::from(k), BigInt::from(j)) * &spow;
            spow *= &shift;
        }
    }
    out
}

pub(crate) fn format_poly(coeffs: &[BigInt], sym: &str) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let unit = abs.is_one();
        if !unit || k == 0 {
            out.push_str(&abs.to_string());
        }
        match k {
            0 => {}
            1 => out.push_str(sym),
            _ => {
                out.push_str(sym);
                out.push('^');
                out.push_str(&k.to_string());
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for MotClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(Basis::T))
    }
}

impl fmt::Debug for MotClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MotClass({})", self.format(Basis::T))
    }
}

impl From<i64> for MotClass {
    fn from(c: i64) -> Self {
        MotClass::constant(c)
    }
}

impl<'a> Add<&'a MotClass> for &'a MotClass {
    type Output = MotClass;

    fn add(self, rhs: &'a MotClass) -> MotClass {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut v = long.coeffs.clone();
        for (a, b) in v.iter_mut().zip(&short.coeffs) {
            *a += b;
        }
        MotClass::from_t_coeffs(v)
    }
}

impl<'a> Sub<&'a MotClass> for &'a MotClass {
    type Output = MotClass;

    fn sub(self, rhs: &'a MotClass) -> MotClass {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a MotClass> for &'a MotClass {
    type Output = MotClass;

    fn mul(self, rhs: &'a MotClass) -> MotClass {
        if self.is_zero() || rhs.is_zero() {
            return MotClass::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        MotClass::from_t_coeffs(v)
    }
}

impl Neg for &MotClass {
    type Output = MotClass;

    fn neg(self) -> MotClass {
        MotClass {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for MotClass {
    type Output = MotClass;

    fn neg(self) -> MotClass {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<MotClass> for MotClass {
            type Output = MotClass;
            fn $m(self, rhs: MotClass) -> MotClass {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a MotClass> for MotClass {
            type Output = MotClass;
            fn $m(self, rhs: &'a MotClass) -> MotClass {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<MotClass> for &'a MotClass {
            type Output = MotClass;
            fn $m(self, rhs: MotClass) -> MotClass {
                self.$m(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl AddAssign<&MotClass> for MotClass {
    fn add_assign(&mut self, rhs: &MotClass) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&MotClass> for MotClass {
    fn sub_assign(&mut self, rhs: &MotClass) {
        *self = &*self - rhs;
    }
}

impl std::iter::Sum for MotClass {
    fn sum<I: Iterator<Item = MotClass>>(iter: I) -> Self {
        iter.fold(MotClass::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for MotClass {
    fn product<I: Iterator<Item = MotClass>>(iter: I) -> Self {
        iter.fold(MotClass::one(), |a, b| a * b)
    }
}

/// `[P^d] = 1 + L + ... + L^d`; `d = -1` is the empty space.
pub fn proj_class(d: i64) -> Result<MotClass> {
    if d < -1 {
        return Err(range("d", d, "d >= -1"));
    }
    let ones = vec![BigInt::one(); (d + 1) as usize];
    Ok(MotClass::from_l_coeffs(&ones))
}

/// Class of the blowup of `X` along `Y` of codimension `codim`:
/// `[X] + [Y]([P^{codim-1}] - 1)`.
pub fn blowup_class(x: &MotClass, y: &MotClass, codim: i64) -> Result<MotClass> {
    if codim < 1 {
        return Err(range("codim", codim, "codim >= 1"));
    }
    let fiber = proj_class(codim - 1)? - MotClass::one();
    Ok(x + &(y * &fiber))
}

/// `(T-1)(T-2)...(T-m)`, indexed by the number of factors.
pub fn expand_falling(m: usize) -> MotClass {
    (1..=m as i64)
        .map(|j| MotClass::from_i64s(&[-j, 1], Basis::T))
        .product()
}

/// Same value as [`expand_falling`], computed through signed Stirling numbers of
/// the first kind: with `x = T - 1` the product is the falling factorial
/// `x(x-1)...(x-m+1) = Σ_k s(m,k) x^k`, and each `x^k` is expanded binomially.
pub fn expand_falling_stirling(m: usize) -> MotClass {
    let s = stirling_first_signed(m);
    let t_minus_one = MotClass::from_i64s(&[-1, 1], Basis::T);
    s[m].iter()
        .enumerate()
        .map(|(k, c)| t_minus_one.pow(k as u32).scale(c.clone()))
        .sum()
}

/// Table of signed Stirling numbers of the first kind, `s[m][k]` for `k <= m`.
pub fn stirling_first_signed(max: usize) -> Vec<Vec<BigInt>> {
    let mut s: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for m in 1..=max {
        let prev = &s[m - 1];
        let mut row = vec![BigInt::zero(); m + 1];
        // s(m,k) = s(m-1,k-1) - (m-1) s(m-1,k)
        for k in 1..=m {
            let mut v = prev[k - 1].clone();
            if k < m {
                v -= &prev[k] * BigInt::from(m - 1);
            }
            row[k] = v;
        }
        s.push(row);
    }
    s
}

//! Generating series and recursions for `[M̄_{0,n}]` and `[T_{d,n}]`.
//!
//! Two independent routes produce the same classes: the quadratic recursions
//! ([`Mbar0Table`], [`TdnTable`]) and coefficient extraction from the
//! differential equation
//!
//! ```text
//! (1 + L^d t - L [P^{d-1}] ψ) ψ' = 1 + ψ,    ψ = t + O(t^2)
//! ```
//!
//! ([`solve_tdn_ode`]). Series are exponential: `ψ = Σ b_n t^n / n!`.
//!
//! Indexing: for `d = 1` the solution has `b_n = [M̄_{0,n+1}]` (operad arity),
//! so `b_2 = [M̄_{0,3}] = 1` and `b_3 = [M̄_{0,4}] = 1 + L`. The reading
//! `b_n = [M̄_{0,n}]` does not solve the equation; see [`SeriesIndexing`].

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{range, Error, Result};
use crate::motive::{expand_falling, proj_class, MotClass};

/// Truncated exponential generating series `Σ_{n=1}^{order} c_n t^n / n!`.
///
/// Coefficients past `order` are unknown; [`EGFSeries::coeff`] returns `None`
/// for them instead of zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EGFSeries {
    order: usize,
    coeffs: Vec<MotClass>,
}

impl EGFSeries {
    pub fn new(coeffs: Vec<MotClass>) -> Self {
        EGFSeries {
            order: coeffs.len(),
            coeffs,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient `c_n`, 1-based.
    pub fn coeff(&self, n: usize) -> Option<&MotClass> {
        n.checked_sub(1).and_then(|i| self.coeffs.get(i))
    }

    /// `c_1, ..., c_order`.
    pub fn coeffs(&self) -> &[MotClass] {
        &self.coeffs
    }

    /// Index of the first power `t^n` (as `n`) at which the differential equation
    /// for dimension `d` fails, or `None` if it holds through the truncation.
    /// Only orders `n < self.order()` can be checked.
    pub fn ode_residual(&self, d: u32) -> Option<usize> {
        let lift = MotClass::l().pow(d);
        let c = MotClass::l() * proj_class(d as i64 - 1).unwrap_or_default();
        let b = |n: usize| -> MotClass {
            if n == 0 {
                MotClass::zero()
            } else {
                self.coeffs[n - 1].clone()
            }
        };
        for n in 0..self.order {
            // coefficient of t^n/n! in (1 + L^d t - cψ)ψ' - 1 - ψ
            let mut lhs = b(n + 1) + (&lift * &b(n)).scale(n as u64);
            let mut quad = MotClass::zero();
            for i in 0..=n {
                quad += &(b(i) * b(n + 1 - i)).scale(binom(n, i));
            }
            lhs -= &(&c * &quad);
            let mut rhs = b(n);
            if n == 0 {
                rhs += &MotClass::one();
            }
            if lhs != rhs {
                return Some(n);
            }
        }
        None
    }
}

fn binom(n: usize, k: usize) -> BigInt {
    binomial(BigInt::from(n), BigInt::from(k))
}

fn check_d(d: i64) -> Result<u32> {
    if d < 1 {
        return Err(range("d", d, "d >= 1"));
    }
    u32::try_from(d).map_err(|_| range("d", d, "d fits in 32 bits"))
}

/// Solves the differential equation for `ψ` by the integral extraction rule
///
/// `b_{n+1} = b_n - n L^d b_n + L [P^{d-1}] Σ_{i=1}^{n} C(n,i) b_i b_{n+1-i}`,
///
/// starting from `b_1 = 1`. For `d = 1` the coefficients are `[M̄_{0,n+1}]`.
pub fn solve_tdn_ode(d: i64, order: i64) -> Result<EGFSeries> {
    let d = check_d(d)?;
    if order < 1 {
        return Err(range("order", order, "order >= 1"));
    }
    let order = order as usize;
    let lift = MotClass::l().pow(d);
    let c = MotClass::l() * proj_class(d as i64 - 1)?;
    let mut b: Vec<MotClass> = vec![MotClass::zero(), MotClass::one()];
    for n in 1..order {
        let mut quad = MotClass::zero();
        for i in 1..=n {
            quad += &(&b[i] * &b[n + 1 - i]).scale(binom(n, i));
        }
        let next = &b[n] - &(&lift * &b[n]).scale(n as u64) + &c * &quad;
        b.push(next);
    }
    b.remove(0);
    Ok(EGFSeries::new(b))
}

/// Memo table for `[M̄_{0,n}]`, filled by the quadratic recursion
///
/// `[M̄_{0,n+2}] = [M̄_{0,n+1}] + L Σ_{i+j=n+1, i>=2} C(n,i) [M̄_{0,i+1}] [M̄_{0,j+1}]`
///
/// with `[M̄_{0,2}] = [M̄_{0,3}] = 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Mbar0Table {
    // values[k] = [M̄_{0,k+2}]
    values: Vec<MotClass>,
}

impl Mbar0Table {
    pub fn new() -> Self {
        Mbar0Table {
            values: vec![MotClass::one(), MotClass::one()],
        }
    }

    /// Restores a table from previously computed values. The seeds are
    /// checked; later entries are trusted.
    pub fn from_values(values: Vec<MotClass>) -> Result<Self> {
        let seeds = Mbar0Table::new().values;
        if values.len() < seeds.len() || values[..seeds.len()] != seeds[..] {
            return Err(Error::Invariant(
                "cached M̄_{0,n} table has wrong seed values".into(),
            ));
        }
        Ok(Mbar0Table { values })
    }

    pub fn values(&self) -> &[MotClass] {
        &self.values
    }

    fn extend_to(&mut self, n: usize) {
        // entry for M̄_{0,n} lives at n - 2
        while self.values.len() < n.saturating_sub(1) {
            // computing M̄_{0,k+2} with k + 2 = len + 2  =>  k = len
            let k = self.values.len();
            let m = |idx: usize| &self.values[idx - 2];
            let mut sum = MotClass::zero();
            for i in 2..=k {
                let j = k + 1 - i;
                sum += &(m(i + 1) * m(j + 1)).scale(binom(k, i));
            }
            let next = m(k + 1) + &MotClass::l() * &sum;
            self.values.push(next);
        }
    }

    pub fn get(&mut self, n: i64) -> Result<MotClass> {
        if n < 2 {
            return Err(range("n", n, "n >= 2"));
        }
        self.extend_to(n as usize);
        Ok(self.values[n as usize - 2].clone())
    }
}

impl Default for Mbar0Table {
    fn default() -> Self {
        Mbar0Table::new()
    }
}

/// `[M̄_{0,n}]` via the recursion.
pub fn mbar0_class(n: i64) -> Result<MotClass> {
    Mbar0Table::new().get(n)
}

/// Memo table for `[T_{d,n}]` at fixed `d`, filled by
///
/// `[T_{d,n+1}] = ([P^d] + n L [P^{d-2}]) [T_{d,n}]
///              + L [P^{d-1}] Σ_{i+j=n+1, 2<=i<=n-1} C(n,i) [T_{d,i}] [T_{d,j}]`
///
/// for `n >= 2`, from `[T_{d,1}] = 1` and `[T_{d,2}] = [P^{d-1}]`.
///
/// The sum term carries `[P^{d-1}]`; this is the factor forced by the
/// differential equation and the Poincaré-polynomial analogue. The recursion
/// is not valid at `n = 1` (for `d = 1` it would give `[T_{1,2}] = L + 1`), so
/// `[T_{d,2}]` is seeded from the order-`t` coefficient of the equation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TdnTable {
    d: u32,
    // values[k] = [T_{d,k+1}]
    values: Vec<MotClass>,
}

impl TdnTable {
    pub fn new(d: i64) -> Result<Self> {
        let d = check_d(d)?;
        Ok(TdnTable {
            d,
            values: vec![MotClass::one(), proj_class(d as i64 - 1)?],
        })
    }

    /// Restores a table from previously computed values. The seeds are
    /// checked; later entries are trusted.
    pub fn from_values(d: i64, values: Vec<MotClass>) -> Result<Self> {
        let fresh = TdnTable::new(d)?;
        if values.len() < fresh.values.len() || values[..2] != fresh.values[..] {
            return Err(Error::Invariant(format!(
                "cached T_{{{d},n}} table has wrong seed values"
            )));
        }
        Ok(TdnTable { d: fresh.d, values })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn values(&self) -> &[MotClass] {
        &self.values
    }

    fn extend_to(&mut self, n: usize) {
        if self.values.len() >= n {
            return;
        }
        // d >= 1, so every index below is >= -1
        let di = self.d as i64;
        let p = |k: i64| proj_class(k).unwrap_or_default();
        let p_d = p(di);
        let l_p_dm2 = MotClass::l() * p(di - 2);
        let l_p_dm1 = MotClass::l() * p(di - 1);
        while self.values.len() < n {
            // computing T_{d,k+1} from T_{d,k}, k = len >= 2
            let k = self.values.len();
            let tv = |idx: usize| &self.values[idx - 1];
            let lin = &p_d + &l_p_dm2.scale(k as u64);
            let mut sum = MotClass::zero();
            for i in 2..k {
                let j = k + 1 - i;
                sum += &(tv(i) * tv(j)).scale(binom(k, i));
            }
            let next = &lin * tv(k) + &l_p_dm1 * &sum;
            self.values.push(next);
        }
    }

    pub fn get(&mut self, n: i64) -> Result<MotClass> {
        if n < 1 {
            return Err(range("n", n, "n >= 1"));
        }
        self.extend_to(n as usize);
        Ok(self.values[n as usize - 1].clone())
    }
}

/// `[T_{d,n}]` via the recursion.
pub fn tdn_class(d: i64, n: i64) -> Result<MotClass> {
    TdnTable::new(d)?.get(n)
}

/// Number of points of `T_{d,n}` over the degree-`m` extension of `F_1`.
pub fn f1m_count(d: i64, n: i64, m: u64) -> Result<BigInt> {
    Ok(tdn_class(d, n)?.count_points(m))
}

/// Point-count series obtained by solving the differential equation with
/// `L ↦ q = m + 1` substituted:
///
/// `(1 + q^d t - q κ_d(q) η) η' = 1 + η`,  `κ_d(q) = 1 + q + ... + q^{d-1}`.
///
/// Returns `p_1, ..., p_order`, an integer sequence.
pub fn solve_point_count_ode(d: i64, m: u64, order: i64) -> Result<Vec<BigInt>> {
    let d = check_d(d)?;
    if order < 1 {
        return Err(range("order", order, "order >= 1"));
    }
    let q: BigInt = BigInt::from(m) + 1;
    let lift = num_traits::pow(q.clone(), d as usize);
    let kappa: BigInt = (0..d).map(|k| num_traits::pow(q.clone(), k as usize)).sum();
    let c = &q * kappa;
    let mut p = vec![BigInt::zero(), BigInt::one()];
    for n in 1..order as usize {
        let quad: BigInt = (1..=n).map(|i| binom(n, i) * &p[i] * &p[n + 1 - i]).sum();
        let next = &p[n] - BigInt::from(n) * &lift * &p[n] + &c * quad;
        p.push(next);
    }
    p.remove(0);
    Ok(p)
}

/// Class of the open stratum of `T_{d,n}`: configurations of `n` distinct points
/// in `A^d` up to translation and homothety.
///
/// Fixing the first point at the origin kills translations; the second point
/// is then a nonzero vector up to scaling, i.e. a point of `P^{d-1}`, and the
/// remaining `n - 2` points avoid the first two. With `c = L^d - 2`:
///
/// `[TH_{d,n}] = [P^{d-1}] · c (c-1) ... (c-(n-3))`.
///
/// For `d = 1` the projective factor is a point and this is `[M_{0,n+1}]`.
pub fn open_stratum_class(d: i64, n: i64) -> Result<MotClass> {
    let du = check_d(d)?;
    if n < 2 {
        return Err(range("n", n, "n >= 2"));
    }
    let c = MotClass::l().pow(du) - MotClass::constant(2);
    let falling: MotClass = (0..n - 2).map(|i| &c - &MotClass::constant(i)).product();
    Ok(proj_class(d - 1)? * falling)
}

/// Two readings of the product formula for `[M_{0,n}]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum M0nReading {
    /// `n - 3` factors `(T-1)...(T-n+3)`: the complement of the diagonals in
    /// `(P^1 \ {0,1,∞})^{n-3}`. Agrees with point counts over finite fields.
    #[default]
    FactorCount,
    /// The product as printed, `(T-1)...(T-n+2)`, with `n - 2` factors.
    Printed,
}

/// `[M_{0,n}]`, the open stratum of `M̄_{0,n}`, for `n >= 3`.
pub fn m0n_class(n: i64, reading: M0nReading) -> Result<MotClass> {
    if n < 3 {
        return Err(range("n", n, "n >= 3"));
    }
    let factors = match reading {
        M0nReading::FactorCount => n - 3,
        M0nReading::Printed => n - 2,
    };
    Ok(expand_falling(factors as usize))
}

/// How the coefficients of the genus-zero series are matched to moduli spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeriesIndexing {
    /// `c_n = [M̄_{0,n+1}]`: the solution of the equation.
    #[default]
    OperadArity,
    /// `c_1 = 1`, `c_n = [M̄_{0,n}]` for `n >= 2`, as the series is printed.
    Printed,
}

/// The series of `[M̄_{0,·}]` classes under the given indexing, truncated at
/// `order`. Only [`SeriesIndexing::OperadArity`] satisfies the equation.
pub fn mbar0_series(order: i64, indexing: SeriesIndexing) -> Result<EGFSeries> {
    if order < 1 {
        return Err(range("order", order, "order >= 1"));
    }
    let mut table = Mbar0Table::new();
    let mut coeffs = vec![MotClass::one()];
    for n in 2..=order {
        coeffs.push(match indexing {
            SeriesIndexing::OperadArity => table.get(n + 1)?,
            SeriesIndexing::Printed => table.get(n)?,
        });
    }
    Ok(EGFSeries::new(coeffs))
}

/// Coefficient sequence `(n, [T_{d,n}])` rows, for tables.
pub fn tdn_rows(d: i64, max_n: i64) -> Result<Vec<(i64, MotClass)>> {
    let mut t = TdnTable::new(d)?;
    (1..=max_n).map(|n| Ok((n, t.get(n)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motive::Basis;

    fn l(c: &[i64]) -> MotClass {
        MotClass::from_i64s(c, Basis::L)
    }

    fn t(c: &[i64]) -> MotClass {
        MotClass::from_i64s(c, Basis::T)
    }

    #[test]
    fn ode_low_order() {
        let s1 = solve_tdn_ode(1, 4).unwrap();
        assert_eq!(s1.coeff(1), Some(&MotClass::one()));
        assert_eq!(s1.coeff(2), Some(&MotClass::one()));
        assert_eq!(s1.coeff(5), None);
        for d in 1..5 {
            let s = solve_tdn_ode(d, 3).unwrap();
            assert_eq!(s.coeff(2).unwrap(), &proj_class(d - 1).unwrap());
        }
        let s2 = solve_tdn_ode(2, 3).unwrap();
        assert_eq!(s2.coeff(3).unwrap(), &l(&[1, 4, 4, 1]));
        assert!(solve_tdn_ode(0, 3).is_err());
        assert!(solve_tdn_ode(1, 0).is_err());
    }

    #[test]
    fn mbar0_values() {
        assert_eq!(mbar0_class(2).unwrap(), MotClass::one());
        assert_eq!(mbar0_class(3).unwrap(), MotClass::one());
        assert_eq!(mbar0_class(4).unwrap(), l(&[1, 1]));
        assert_eq!(mbar0_class(5).unwrap(), l(&[1, 5, 1]));
        assert_eq!(mbar0_class(6).unwrap(), l(&[1, 16, 16, 1]));
        assert!(mbar0_class(1).is_err());
    }

    #[test]
    fn table_is_order_independent() {
        let mut a = Mbar0Table::new();
        let x9 = a.get(9).unwrap();
        let x5 = a.get(5).unwrap();
        let mut b = Mbar0Table::new();
        assert_eq!(b.get(5).unwrap(), x5);
        assert_eq!(b.get(9).unwrap(), x9);
    }

    #[test]
    fn tdn_values() {
        assert_eq!(tdn_class(1, 3).unwrap(), l(&[1, 1]));
        assert_eq!(tdn_class(1, 4).unwrap(), l(&[1, 5, 1]));
        for d in 1..5 {
            assert_eq!(tdn_class(d, 2).unwrap(), proj_class(d - 1).unwrap());
            assert_eq!(tdn_class(d, 1).unwrap(), MotClass::one());
        }
        assert!(tdn_class(0, 3).is_err());
        assert!(tdn_class(1, 0).is_err());
    }

    #[test]
    fn tdn_cache_roundtrip_checks_values() {
        let mut t3 = TdnTable::new(2).unwrap();
        t3.get(6).unwrap();
        let restored = TdnTable::from_values(2, t3.values().to_vec()).unwrap();
        assert_eq!(restored.values(), t3.values());
        let mut bad = t3.values().to_vec();
        bad[1] = MotClass::zero();
        assert!(TdnTable::from_values(2, bad).is_err());
        assert!(TdnTable::from_values(3, t3.values().to_vec()).is_err());
    }

    #[test]
    fn f1m_examples() {
        assert_eq!(f1m_count(1, 3, 0).unwrap(), 2.into());
        assert_eq!(f1m_count(1, 4, 1).unwrap(), 15.into());
        for m in 0..6 {
            assert_eq!(f1m_count(1, 1, m).unwrap(), 1.into());
        }
    }

    #[test]
    fn open_stratum_examples() {
        assert_eq!(open_stratum_class(1, 3).unwrap(), t(&[-1, 1]));
        assert_eq!(open_stratum_class(1, 4).unwrap(), t(&[2, -3, 1]));
        assert_eq!(open_stratum_class(1, 2).unwrap(), MotClass::one());
        assert_eq!(open_stratum_class(2, 2).unwrap(), proj_class(1).unwrap());
        assert!(open_stratum_class(1, 1).is_err());
    }

    #[test]
    fn m0n_readings() {
        assert_eq!(m0n_class(4, M0nReading::FactorCount).unwrap(), t(&[-1, 1]));
        assert_eq!(m0n_class(4, M0nReading::Printed).unwrap(), t(&[2, -3, 1]));
        assert_eq!(m0n_class(3, M0nReading::FactorCount).unwrap(), MotClass::one());
    }

    #[test]
    fn only_shifted_indexing_solves_equation() {
        let good = mbar0_series(8, SeriesIndexing::OperadArity).unwrap();
        assert_eq!(good.ode_residual(1), None);
        let bad = mbar0_series(8, SeriesIndexing::Printed).unwrap();
        assert!(bad.ode_residual(1).is_some());
    }
}

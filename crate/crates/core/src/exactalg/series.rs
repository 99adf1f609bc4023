//! Truncated series in Novikov variables `q^β` and insertion variables `t^m`.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Zero};

use super::laurent::ZLaurent;
use super::rational::Rational;
use super::ring::{CohClass, CohRing};
use crate::error::{Error, Result};

/// Coefficient types a [`MultiSeries`] can carry.
pub trait Coeff: Clone + PartialEq + Debug {
    fn is_null(&self) -> bool;
    fn accumulate(&mut self, other: &Self);
    fn scaled(&self, s: &Rational) -> Self;
}

impl Coeff for Rational {
    fn is_null(&self) -> bool {
        Zero::is_zero(self)
    }
    fn accumulate(&mut self, other: &Self) {
        *self += other;
    }
    fn scaled(&self, s: &Rational) -> Self {
        self * s
    }
}

impl Coeff for CohClass {
    fn is_null(&self) -> bool {
        CohClass::is_zero(self)
    }
    fn accumulate(&mut self, other: &Self) {
        CohClass::add_assign(self, other)
    }
    fn scaled(&self, s: &Rational) -> Self {
        CohClass::scale(self, s)
    }
}

impl Coeff for ZLaurent {
    fn is_null(&self) -> bool {
        ZLaurent::is_zero(self)
    }
    fn accumulate(&mut self, other: &Self) {
        ZLaurent::add_assign(self, other)
    }
    fn scaled(&self, s: &Rational) -> Self {
        ZLaurent::scale(self, s)
    }
}

/// A monomial `q^β t^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Index {
    pub beta: Vec<i64>,
    pub m: Vec<u32>,
}

impl Index {
    pub fn new(beta: Vec<i64>, m: Vec<u32>) -> Self {
        Index { beta, m }
    }

    pub fn zero(r: usize, s: usize) -> Self {
        Index {
            beta: vec![0; r],
            m: vec![0; s],
        }
    }

    pub fn insertion_degree(&self) -> u32 {
        self.m.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.beta.iter().all(|&b| b == 0) && self.m.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Index) -> Index {
        Index {
            beta: self.beta.iter().zip(&other.beta).map(|(a, b)| a + b).collect(),
            m: self.m.iter().zip(&other.m).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self - other` when the insertion part stays nonnegative. The class
    /// part is returned as is (effectivity is the caller's business).
    pub fn checked_sub(&self, other: &Index) -> Option<Index> {
        let m = self
            .m
            .iter()
            .zip(&other.m)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()?;
        Some(Index {
            beta: self.beta.iter().zip(&other.beta).map(|(a, b)| a - b).collect(),
            m,
        })
    }
}

/// Series truncation: θ-degree at most `d`, insertion degree at most `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Truncation {
    pub d: u32,
    pub t: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiSeries<V> {
    theta: Vec<Rational>,
    num_insertions: usize,
    trunc: Truncation,
    terms: BTreeMap<Index, V>,
    saturated: bool,
}

pub fn theta_degree(theta: &[Rational], beta: &[i64]) -> Rational {
    theta
        .iter()
        .zip(beta)
        .filter(|(_, &b)| b != 0)
        .map(|(th, &b)| th * Rational::from_integer(b.into()))
        .sum()
}

impl<V: Coeff> MultiSeries<V> {
    pub fn new(theta: Vec<Rational>, num_insertions: usize, trunc: Truncation) -> Self {
        MultiSeries {
            theta,
            num_insertions,
            trunc,
            terms: BTreeMap::new(),
            saturated: false,
        }
    }

    /// Empty series with the same shape.
    pub fn like<W: Coeff>(other: &MultiSeries<W>) -> Self {
        Self::new(other.theta.clone(), other.num_insertions, other.trunc)
    }

    pub fn theta(&self) -> &[Rational] {
        &self.theta
    }

    pub fn torus_rank(&self) -> usize {
        self.theta.len()
    }

    pub fn num_insertions(&self) -> usize {
        self.num_insertions
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn saturated(&self) -> bool {
        self.saturated
    }

    pub fn mark_saturated(&mut self) {
        self.saturated = true;
    }

    pub fn degree(&self, beta: &[i64]) -> Rational {
        theta_degree(&self.theta, beta)
    }

    pub fn in_range(&self, idx: &Index) -> bool {
        idx.insertion_degree() <= self.trunc.t
            && self.degree(&idx.beta) <= Rational::from_integer(self.trunc.d.into())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Index, &V)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, idx: &Index) -> Option<&V> {
        self.terms.get(idx)
    }

    fn check_shape(&self, idx: &Index) -> Result<()> {
        if idx.beta.len() != self.theta.len() || idx.m.len() != self.num_insertions {
            return Err(Error::InvalidArgument(format!(
                "index shape ({}, {}) does not match series shape ({}, {})",
                idx.beta.len(),
                idx.m.len(),
                self.theta.len(),
                self.num_insertions
            )));
        }
        Ok(())
    }

    /// Adds `v` at `idx`; out-of-range nonzero terms are dropped and flag
    /// saturation.
    pub fn add_term(&mut self, idx: Index, v: &V) -> Result<()> {
        self.check_shape(&idx)?;
        if v.is_null() {
            return Ok(());
        }
        if !self.in_range(&idx) {
            self.saturated = true;
            return Ok(());
        }
        self.add_term_unchecked(idx, v);
        Ok(())
    }

    pub(crate) fn add_term_unchecked(&mut self, idx: Index, v: &V) {
        match self.terms.get_mut(&idx) {
            Some(slot) => {
                slot.accumulate(v);
                if slot.is_null() {
                    self.terms.remove(&idx);
                }
            }
            None => {
                if !v.is_null() {
                    self.terms.insert(idx, v.clone());
                }
            }
        }
    }

    fn check_compatible<W>(&self, other: &MultiSeries<W>) -> Result<()> {
        if self.trunc != other.trunc
            || self.theta != other.theta
            || self.num_insertions != other.num_insertions
        {
            return Err(Error::InvalidArgument(
                "series have different truncation or shape".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiSeries<V>) -> Result<MultiSeries<V>> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.saturated |= other.saturated;
        for (k, v) in &other.terms {
            out.add_term_unchecked(k.clone(), v);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> MultiSeries<V> {
        let mut out = Self::like(self);
        out.saturated = self.saturated;
        if !Zero::is_zero(s) {
            out.terms = self.terms.iter().map(|(k, v)| (k.clone(), v.scaled(s))).collect();
        }
        out
    }

    /// Convolution with a caller-supplied coefficient product.
    pub fn mul_with<F>(&self, other: &MultiSeries<V>, f: F) -> Result<MultiSeries<V>>
    where
        F: Fn(&V, &V) -> V,
    {
        self.check_compatible(other)?;
        let mut out = Self::like(self);
        out.saturated = self.saturated || other.saturated;
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                let k = i.add(j);
                if !out.in_range(&k) {
                    if !f(a, b).is_null() {
                        out.saturated = true;
                    }
                    continue;
                }
                out.add_term_unchecked(k, &f(a, b));
            }
        }
        Ok(out)
    }

    /// `Σ_k a^k / k!` with `one` as the unit coefficient.
    pub fn exp_with<F>(&self, one: V, f: F) -> Result<MultiSeries<V>>
    where
        F: Fn(&V, &V) -> V,
    {
        let zero_idx = Index::zero(self.theta.len(), self.num_insertions);
        if self.terms.contains_key(&zero_idx) {
            return Err(Error::NonNilpotentExponent(
                "exponent has a constant term".into(),
            ));
        }
        if let Some((idx, _)) = self
            .terms
            .iter()
            .find(|(idx, _)| idx.insertion_degree() == 0 && self.degree(&idx.beta) <= Rational::zero())
        {
            return Err(Error::NonNilpotentExponent(format!(
                "exponent term at β = {:?} has nonpositive θ-degree",
                idx.beta
            )));
        }
        let mut out = Self::like(self);
        out.add_term_unchecked(zero_idx.clone(), &one);
        let mut power = Self::like(self);
        power.add_term_unchecked(zero_idx, &one);
        let mut k = 1i64;
        loop {
            power = power.mul_with(self, &f)?;
            if power.terms.is_empty() {
                break;
            }
            power = power.scale(&Rational::new(One::one(), k.into()));
            for (i, v) in &power.terms {
                out.add_term_unchecked(i.clone(), v);
            }
            k += 1;
        }
        out.saturated = self.saturated || power.saturated;
        Ok(out)
    }

    pub fn map<W: Coeff, F: Fn(&V) -> W>(&self, f: F) -> MultiSeries<W> {
        let mut out = MultiSeries::like(self);
        out.saturated = self.saturated;
        for (k, v) in &self.terms {
            out.add_term_unchecked(k.clone(), &f(v));
        }
        out
    }

    /// Same terms under a smaller truncation.
    pub fn restrict(&self, trunc: Truncation) -> MultiSeries<V> {
        let mut out = Self::new(self.theta.clone(), self.num_insertions, trunc);
        out.saturated = self.saturated;
        for (k, v) in &self.terms {
            if out.in_range(k) {
                out.add_term_unchecked(k.clone(), v);
            }
        }
        out
    }

    /// Terms with `m = 0` (the `t = 0` slice).
    pub fn t_zero_slice(&self) -> MultiSeries<V> {
        let mut out = Self::like(self);
        out.saturated = self.saturated;
        for (k, v) in &self.terms {
            if k.insertion_degree() == 0 {
                out.add_term_unchecked(k.clone(), v);
            }
        }
        out
    }
}

impl MultiSeries<ZLaurent> {
    pub fn one(ring: &CohRing, theta: Vec<Rational>, num_insertions: usize, trunc: Truncation) -> Self {
        let mut out = Self::new(theta, num_insertions, trunc);
        let idx = Index::zero(out.torus_rank(), num_insertions);
        out.add_term_unchecked(idx, &ZLaurent::one(ring));
        out
    }

    pub fn mul(&self, ring: &CohRing, other: &Self) -> Result<Self> {
        self.mul_with(other, |a, b| a.mul_unchecked(ring, b))
    }

    pub fn exp(&self, ring: &CohRing) -> Result<Self> {
        self.exp_with(ZLaurent::one(ring), |a, b| a.mul_unchecked(ring, b))
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.to_json_with(ZLaurent::to_json)
    }
}

impl<V: Coeff> MultiSeries<V> {
    /// `{β: {m: value}}` with keys in index order, plus truncation metadata.
    pub fn to_json_with<F: Fn(&V) -> serde_json::Value>(&self, f: F) -> serde_json::Value {
        let mut by_beta: BTreeMap<&Vec<i64>, serde_json::Map<String, serde_json::Value>> =
            BTreeMap::new();
        for (idx, v) in &self.terms {
            by_beta
                .entry(&idx.beta)
                .or_default()
                .insert(format_vec(&idx.m), f(v));
        }
        let terms: serde_json::Map<String, serde_json::Value> = by_beta
            .into_iter()
            .map(|(b, m)| (format_vec(b), serde_json::Value::Object(m)))
            .collect();
        serde_json::json!({
            "truncation": {"D": self.trunc.d, "T": self.trunc.t},
            "num_insertions": self.num_insertions,
            "saturated": self.saturated,
            "terms": terms,
        })
    }
}

impl MultiSeries<Rational> {
    pub fn mul_scalar(&self, other: &Self) -> Result<Self> {
        self.mul_with(other, |a, b| a * b)
    }

    pub fn exp_scalar(&self) -> Result<Self> {
        self.exp_with(Rational::one(), |a, b| a * b)
    }
}

pub(crate) fn format_vec<T: ToString>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{rat, ratio};
    use crate::exactalg::ring::ring_projective;

    fn p2_series(t: u32) -> (CohRing, MultiSeries<ZLaurent>) {
        let ring = ring_projective(2).unwrap();
        let s = MultiSeries::new(vec![rat(1)], 1, Truncation { d: 2, t });
        (ring, s)
    }

    #[test]
    fn exp_of_divisor_insertion() {
        let (ring, mut a) = p2_series(2);
        a.add_term(Index::new(vec![0], vec![1]), &ZLaurent::monomial(ring.basis_class(1), -1))
            .unwrap();
        let e = a.exp(&ring).unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!(e.get(&Index::new(vec![0], vec![0])).unwrap(), &ZLaurent::one(&ring));
        assert_eq!(
            e.get(&Index::new(vec![0], vec![1])).unwrap(),
            &ZLaurent::monomial(ring.basis_class(1), -1)
        );
        assert_eq!(
            e.get(&Index::new(vec![0], vec![2])).unwrap(),
            &ZLaurent::monomial(ring.basis_class(2).scale(&ratio(1, 2)), -2)
        );
    }

    #[test]
    fn exp_inverse_identity() {
        let (ring, mut a) = p2_series(3);
        a.add_term(Index::new(vec![0], vec![1]), &ZLaurent::monomial(ring.basis_class(1), -1))
            .unwrap();
        a.add_term(Index::new(vec![1], vec![0]), &ZLaurent::scalar_monomial(&ring, rat(3), 0))
            .unwrap();
        let e = a.exp(&ring).unwrap();
        let f = a.scale(&rat(-1)).exp(&ring).unwrap();
        let one = MultiSeries::one(&ring, vec![rat(1)], 1, Truncation { d: 2, t: 3 });
        assert_eq!(e.mul(&ring, &f).unwrap().terms, one.terms);
    }

    #[test]
    fn constant_term_rejected() {
        let (ring, mut a) = p2_series(1);
        a.add_term(Index::new(vec![0], vec![0]), &ZLaurent::one(&ring)).unwrap();
        assert_eq!(a.exp(&ring).unwrap_err().code(), "non-nilpotent-exponent");
    }

    #[test]
    fn product_grading_and_saturation() {
        let (ring, mut a) = p2_series(1);
        a.add_term(Index::new(vec![1], vec![0]), &ZLaurent::one(&ring)).unwrap();
        let sq = a.mul(&ring, &a).unwrap();
        assert!(sq.get(&Index::new(vec![2], vec![0])).is_some());
        assert!(!sq.saturated());
        let cube = sq.mul(&ring, &a).unwrap();
        assert!(cube.is_empty());
        assert!(cube.saturated());
    }

    #[test]
    fn unit_series_and_mismatch() {
        let (ring, mut a) = p2_series(1);
        a.add_term(Index::new(vec![1], vec![1]), &ZLaurent::monomial(ring.basis_class(1), -2))
            .unwrap();
        let one = MultiSeries::one(&ring, vec![rat(1)], 1, Truncation { d: 2, t: 1 });
        assert_eq!(a.mul(&ring, &one).unwrap(), a);
        let other = MultiSeries::one(&ring, vec![rat(1)], 1, Truncation { d: 1, t: 1 });
        assert_eq!(a.mul(&ring, &other).unwrap_err().code(), "invalid-argument");
    }
}

//! Cohomology-valued Laurent polynomials in `z`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::rational::Rational;
use super::ring::{CohClass, CohRing};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZLaurent {
    rank: usize,
    terms: BTreeMap<i32, CohClass>,
}

impl ZLaurent {
    pub fn zero(rank: usize) -> Self {
        ZLaurent {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &CohRing) -> Self {
        Self::monomial(ring.unit(), 0)
    }

    pub fn constant(c: CohClass) -> Self {
        Self::monomial(c, 0)
    }

    /// `c z^k`
    pub fn monomial(c: CohClass, k: i32) -> Self {
        let mut out = Self::zero(c.rank());
        if !c.is_zero() {
            out.terms.insert(k, c);
        }
        out
    }

    /// `s z^k` for a scalar `s`.
    pub fn scalar_monomial(ring: &CohRing, s: Rational, k: i32) -> Self {
        Self::monomial(ring.unit().scale(&s), k)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &CohClass)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: i32) -> CohClass {
        self.terms
            .get(&k)
            .cloned()
            .unwrap_or_else(|| CohClass::zero(self.rank))
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, k: i32, c: &CohClass) {
        self.add_term_scaled(k, c, &Rational::one());
    }

    pub fn add_term_scaled(&mut self, k: i32, c: &CohClass, s: &Rational) {
        if s.is_zero() || c.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(k)
            .or_insert_with(|| CohClass::zero(self.rank));
        slot.add_scaled(c, s);
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add_assign(&mut self, other: &ZLaurent) {
        for (k, c) in &other.terms {
            self.add_term(*k, c);
        }
    }

    pub fn add_scaled(&mut self, other: &ZLaurent, s: &Rational) {
        for (k, c) in &other.terms {
            self.add_term_scaled(*k, c, s);
        }
    }

    pub fn add(&self, other: &ZLaurent) -> ZLaurent {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &ZLaurent) -> ZLaurent {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn scale(&self, s: &Rational) -> ZLaurent {
        if s.is_zero() {
            return Self::zero(self.rank);
        }
        ZLaurent {
            rank: self.rank,
            terms: self.terms.iter().map(|(k, c)| (*k, c.scale(s))).collect(),
        }
    }

    pub fn neg(&self) -> ZLaurent {
        self.scale(&-Rational::one())
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i32) -> ZLaurent {
        ZLaurent {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Drops every term with exponent below `low`.
    pub fn truncate_below(&self, low: i32) -> ZLaurent {
        ZLaurent {
            rank: self.rank,
            terms: self.terms.range(low..).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    /// Part with exponents in `lo..=hi`.
    pub fn window(&self, lo: i32, hi: i32) -> ZLaurent {
        if lo > hi {
            return Self::zero(self.rank);
        }
        ZLaurent {
            rank: self.rank,
            terms: self.terms.range(lo..=hi).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    pub fn mul(&self, ring: &CohRing, other: &ZLaurent) -> Result<ZLaurent> {
        if self.rank != ring.rank() || other.rank != ring.rank() {
            return Err(Error::InvalidArgument("z-Laurent rank differs from ring rank".into()));
        }
        Ok(self.mul_unchecked(ring, other))
    }

    pub(crate) fn mul_unchecked(&self, ring: &CohRing, other: &ZLaurent) -> ZLaurent {
        let mut out = Self::zero(self.rank);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let p = ring.mul_unchecked(x, y);
                out.add_term(a + b, &p);
            }
        }
        out
    }

    /// Product with a z-free class.
    pub fn mul_class(&self, ring: &CohRing, c: &CohClass) -> ZLaurent {
        let mut out = Self::zero(self.rank);
        for (k, x) in &self.terms {
            out.add_term(*k, &ring.mul_unchecked(x, c));
        }
        out
    }

    /// Product with a scalar Laurent polynomial `Σ p_k z^k`.
    pub fn mul_scalar_poly(&self, p: &BTreeMap<i32, Rational>) -> ZLaurent {
        let mut out = Self::zero(self.rank);
        for (a, s) in p {
            for (b, c) in &self.terms {
                out.add_term_scaled(a + b, c, s);
            }
        }
        out
    }

    /// Inverse of `c z^d (1 + u)` with `c` a nonzero rational, `u` having a
    /// nilpotent `z^0` part and otherwise only negative powers. Terms below
    /// `z^low` are dropped.
    pub fn invert_unit(&self, ring: &CohRing, low: i32) -> Result<ZLaurent> {
        let d = self
            .max_exponent()
            .ok_or_else(|| Error::NotInvertible("zero has no inverse".into()))?;
        let lead = &self.terms[&d];
        let c = lead.coeff(0).clone();
        let nilpotent_rest = (1..ring.rank()).all(|i| ring.degree(i) > 0 || lead.coeff(i).is_zero());
        if c.is_zero() || !nilpotent_rest {
            return Err(Error::NotInvertible(
                "leading z-coefficient is not a nonzero scalar plus nilpotent".into(),
            ));
        }
        let cinv = Rational::one() / &c;
        // u = a / (c z^d) - 1, exponents <= 0
        let mut u = self.shift(-d).scale(&cinv);
        u.add_term_scaled(0, &ring.unit(), &-Rational::one());
        let neg_u = u.neg();
        let rel_low = low.saturating_add(d);
        let mut sum = ZLaurent::one(ring);
        let mut term = ZLaurent::one(ring);
        loop {
            term = term.mul_unchecked(ring, &neg_u).truncate_below(rel_low);
            if term.is_zero() {
                break;
            }
            sum.add_assign(&term);
        }
        Ok(sum.shift(-d).scale(&cinv).truncate_below(low))
    }

    /// Coefficients as `{exponent: [rational strings]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .terms
            .iter()
            .map(|(k, c)| (k.to_string(), serde_json::json!(c.to_strings())))
            .collect();
        serde_json::Value::Object(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;
    use crate::exactalg::ring::ring_projective;

    fn lin(ring: &CohRing, k: i64) -> ZLaurent {
        // H + k z
        let mut a = ZLaurent::constant(ring.basis_class(1));
        a.add_term_scaled(1, &ring.unit(), &rat(k));
        a
    }

    #[test]
    fn difference_of_squares() {
        let p2 = ring_projective(2).unwrap();
        let a = lin(&p2, 1);
        let b = lin(&p2, -1);
        let p = a.mul(&p2, &b).unwrap();
        let mut want = ZLaurent::constant(p2.basis_class(2));
        want.add_term_scaled(2, &p2.unit(), &rat(-1));
        assert_eq!(p, want);
    }

    #[test]
    fn square_in_p1() {
        let p1 = ring_projective(1).unwrap();
        let a = lin(&p1, 1);
        let sq = a.mul(&p1, &a).unwrap();
        assert_eq!(sq.coeff(1), p1.basis_class(1).scale(&rat(2)));
        assert_eq!(sq.coeff(2), p1.unit());
        assert!(sq.coeff(0).is_zero());
    }

    #[test]
    fn coefficient_read() {
        let p1 = ring_projective(1).unwrap();
        let mut a = ZLaurent::monomial(p1.unit(), -2);
        a.add_term_scaled(-3, &p1.basis_class(1), &rat(-2));
        assert_eq!(a.coeff(-3), p1.basis_class(1).scale(&rat(-2)));
    }

    #[test]
    fn invert_square_in_p1() {
        let p1 = ring_projective(1).unwrap();
        let a = lin(&p1, 1);
        let inv = a.mul(&p1, &a).unwrap().invert_unit(&p1, -3).unwrap();
        let mut want = ZLaurent::monomial(p1.unit(), -2);
        want.add_term_scaled(-3, &p1.basis_class(1), &rat(-2));
        assert_eq!(inv, want);
    }

    #[test]
    fn invert_cube_in_p2() {
        let p2 = ring_projective(2).unwrap();
        let a = lin(&p2, 1);
        let cube = a.mul(&p2, &a).unwrap().mul(&p2, &a).unwrap();
        let inv = cube.invert_unit(&p2, -5).unwrap();
        let mut want = ZLaurent::monomial(p2.unit(), -3);
        want.add_term_scaled(-4, &p2.basis_class(1), &rat(-3));
        want.add_term_scaled(-5, &p2.basis_class(2), &rat(6));
        assert_eq!(inv, want);
        assert_eq!(inv.mul(&p2, &cube).unwrap(), ZLaurent::one(&p2));
    }

    #[test]
    fn invert_monomial_and_failures() {
        let p2 = ring_projective(2).unwrap();
        let z = ZLaurent::scalar_monomial(&p2, rat(1), 1);
        assert_eq!(
            z.invert_unit(&p2, -10).unwrap(),
            ZLaurent::scalar_monomial(&p2, rat(1), -1)
        );
        let h = ZLaurent::constant(p2.basis_class(1));
        assert_eq!(h.invert_unit(&p2, -10).unwrap_err().code(), "not-invertible");
        assert_eq!(
            ZLaurent::zero(3).invert_unit(&p2, -10).unwrap_err().code(),
            "not-invertible"
        );
    }

    #[test]
    fn truncated_inverse_times_original() {
        // (1 + z^{-1}) has an infinite inverse; the product is 1 up to the window
        let p2 = ring_projective(2).unwrap();
        let mut a = ZLaurent::one(&p2);
        a.add_term(-1, &p2.unit());
        let inv = a.invert_unit(&p2, -6).unwrap();
        let prod = inv.mul(&p2, &a).unwrap();
        assert_eq!(prod.window(-6, 10), ZLaurent::one(&p2));
    }
}

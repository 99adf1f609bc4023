//! Finite-rank graded commutative rings with an integration functional.
//!
//! A [`CohRing`] is stored as a structure-constant table over a fixed
//! homogeneous basis whose element 0 is the unit. Classes are dense
//! coefficient vectors; all arithmetic goes through the ring so that the
//! multiplication table is the single source of truth.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::linalg;
use super::poly::DivisorPoly;
use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CohClass {
    coeffs: Vec<Rational>,
}

impl CohClass {
    pub fn zero(rank: usize) -> Self {
        CohClass {
            coeffs: vec![Rational::zero(); rank],
        }
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut c = Self::zero(rank);
        c.coeffs[i] = Rational::one();
        c
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        CohClass { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add_assign(&mut self, other: &CohClass) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, other: &CohClass, s: &Rational) {
        if s.is_zero() {
            return;
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b * s;
            }
        }
    }

    pub fn add(&self, other: &CohClass) -> CohClass {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &CohClass) -> CohClass {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn scale(&self, s: &Rational) -> CohClass {
        CohClass {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn neg(&self) -> CohClass {
        self.scale(&-Rational::one())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub label: String,
    pub degree: u32,
}

/// On-disk ring-table document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingTable {
    pub basis: Vec<BasisElement>,
    pub mult: Vec<MultEntry>,
    pub integral: Vec<String>,
    #[serde(default)]
    pub divisor_lifts: Vec<Option<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohRing {
    basis: Vec<BasisElement>,
    /// `products[i * rank + j]`: sparse expansion of `γ_i γ_j`.
    products: Vec<Vec<(usize, Rational)>>,
    integral: Vec<Rational>,
    top_degree: u32,
    /// Basis indices of the degree-2 elements, in basis order.
    generators: Vec<usize>,
    divisor_lifts: Vec<Option<DivisorPoly>>,
    dual: Vec<CohClass>,
}

impl CohRing {
    /// Assembles and validates a ring from a dense structure-constant table
    /// `table[i][j][k]` (coefficient of `γ_k` in `γ_i γ_j`).
    pub fn from_parts(
        basis: Vec<BasisElement>,
        table: Vec<Vec<Vec<Rational>>>,
        integral: Vec<Rational>,
        lifts: Vec<Option<DivisorPoly>>,
    ) -> Result<Self> {
        let rank = basis.len();
        if rank == 0 {
            return Err(Error::MalformedRing("empty basis".into()));
        }
        let mut products = Vec::with_capacity(rank * rank);
        for row in &table {
            for entry in row {
                products.push(
                    entry
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| (k, c.clone()))
                        .collect(),
                );
            }
        }
        let top_degree = basis.iter().map(|b| b.degree).max().unwrap_or(0);
        let generators = basis
            .iter()
            .enumerate()
            .filter(|(_, b)| b.degree == 2)
            .map(|(i, _)| i)
            .collect();
        let mut ring = CohRing {
            basis,
            products,
            integral,
            top_degree,
            generators,
            divisor_lifts: lifts,
            dual: Vec::new(),
        };
        ring.validate()?;
        ring.dual = ring.compute_dual()?;
        Ok(ring)
    }

    fn validate(&self) -> Result<()> {
        let rank = self.rank();
        let bad = |m: String| Err(Error::MalformedRing(m));
        if self.basis[0].degree != 0 {
            return bad("basis element 0 must have degree 0".into());
        }
        for b in &self.basis {
            if b.degree % 2 != 0 {
                return bad(format!("odd degree {} for {:?} is unsupported", b.degree, b.label));
            }
        }
        let labels: BTreeSet<&str> = self.basis.iter().map(|b| b.label.as_str()).collect();
        if labels.len() != rank {
            return bad("duplicate basis labels".into());
        }
        for j in 0..rank {
            if self.product_class(0, j) != CohClass::basis(rank, j) {
                return bad(format!("basis element 0 is not a unit: 1*{j}"));
            }
        }
        for i in 0..rank {
            for j in 0..rank {
                if self.product_class(i, j) != self.product_class(j, i) {
                    return bad(format!("non-commutative pair ({i},{j})"));
                }
                for (k, _) in &self.products[i * rank + j] {
                    if self.basis[*k].degree != self.basis[i].degree + self.basis[j].degree {
                        return bad(format!(
                            "product ({i},{j}) has a component in degree {} (expected {})",
                            self.basis[*k].degree,
                            self.basis[i].degree + self.basis[j].degree
                        ));
                    }
                }
            }
        }
        for i in 0..rank {
            for j in 0..rank {
                let ij = self.product_class(i, j);
                for k in 0..rank {
                    let left = self.mul_unchecked(&ij, &CohClass::basis(rank, k));
                    let jk = self.product_class(j, k);
                    let right = self.mul_unchecked(&CohClass::basis(rank, i), &jk);
                    if left != right {
                        return bad(format!("non-associative triple ({i},{j},{k})"));
                    }
                }
            }
        }
        if self.integral.len() != rank {
            return bad("integral has wrong length".into());
        }
        for (i, c) in self.integral.iter().enumerate() {
            if !c.is_zero() && self.basis[i].degree != self.top_degree {
                return bad(format!("integral is nonzero below top degree at {i}"));
            }
        }
        if self.divisor_lifts.len() != rank {
            return bad("divisor_lifts has wrong length".into());
        }
        for (i, lift) in self.divisor_lifts.iter().enumerate() {
            if let Some(p) = lift {
                if p.nvars() != self.generators.len() {
                    return bad(format!("divisor lift {i} has the wrong number of variables"));
                }
                if self.eval_poly(p) != CohClass::basis(rank, i) {
                    return bad(format!(
                        "divisor lift of {:?} does not reduce to that class",
                        self.basis[i].label
                    ));
                }
            }
        }
        Ok(())
    }

    fn gram(&self) -> linalg::Matrix {
        let rank = self.rank();
        (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| self.integrate_unchecked(&self.product_class(i, j)))
                    .collect()
            })
            .collect()
    }

    fn compute_dual(&self) -> Result<Vec<CohClass>> {
        let inv = linalg::inverse(&self.gram())
            .ok_or_else(|| Error::MalformedRing("Poincaré pairing is degenerate".into()))?;
        let rank = self.rank();
        Ok((0..rank)
            .map(|j| CohClass::from_coeffs((0..rank).map(|k| inv[k][j].clone()).collect()))
            .collect())
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.basis[i].degree
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    /// Complex dimension of the underlying space.
    pub fn dimension(&self) -> u32 {
        self.top_degree / 2
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators
            .iter()
            .map(|&i| self.basis[i].label.clone())
            .collect()
    }

    pub fn divisor_lift(&self, i: usize) -> Option<&DivisorPoly> {
        self.divisor_lifts[i].as_ref()
    }

    pub fn unit(&self) -> CohClass {
        CohClass::basis(self.rank(), 0)
    }

    pub fn zero(&self) -> CohClass {
        CohClass::zero(self.rank())
    }

    pub fn basis_class(&self, i: usize) -> CohClass {
        CohClass::basis(self.rank(), i)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    /// Resolves a basis label, or failing that a polynomial in the degree-2
    /// generators.
    pub fn parse_class(&self, expr: &str) -> Result<CohClass> {
        if let Some(i) = self.index_of(expr.trim()) {
            return Ok(self.basis_class(i));
        }
        let p = DivisorPoly::parse(expr, &self.generator_names())?;
        Ok(self.eval_poly(&p))
    }

    fn product_class(&self, i: usize, j: usize) -> CohClass {
        let mut c = self.zero();
        for (k, v) in &self.products[i * self.rank() + j] {
            c.coeffs[*k] = v.clone();
        }
        c
    }

    fn check(&self, a: &CohClass) -> Result<()> {
        if a.rank() != self.rank() {
            return Err(Error::InvalidArgument(format!(
                "class of rank {} used in a ring of rank {}",
                a.rank(),
                self.rank()
            )));
        }
        Ok(())
    }

    pub(crate) fn mul_unchecked(&self, a: &CohClass, b: &CohClass) -> CohClass {
        let rank = self.rank();
        let mut out = self.zero();
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in &self.products[i * rank + j] {
                    out.coeffs[*k] += &xy * c;
                }
            }
        }
        out
    }

    pub fn mul(&self, a: &CohClass, b: &CohClass) -> Result<CohClass> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub fn pow(&self, a: &CohClass, k: u32) -> CohClass {
        (0..k).fold(self.unit(), |acc, _| self.mul_unchecked(&acc, a))
    }

    fn integrate_unchecked(&self, a: &CohClass) -> Rational {
        a.coeffs
            .iter()
            .zip(&self.integral)
            .filter(|(x, w)| !x.is_zero() && !w.is_zero())
            .map(|(x, w)| x * w)
            .sum()
    }

    pub fn integrate(&self, a: &CohClass) -> Result<Rational> {
        self.check(a)?;
        Ok(self.integrate_unchecked(a))
    }

    pub fn pairing(&self, a: &CohClass, b: &CohClass) -> Result<Rational> {
        Ok(self.integrate_unchecked(&self.mul(a, b)?))
    }

    /// `{γ^i}` with `pairing(γ_i, γ^j) = δ_ij`.
    pub fn dual_basis(&self) -> &[CohClass] {
        &self.dual
    }

    /// Substitutes the degree-2 generators into `p`.
    pub fn eval_poly(&self, p: &DivisorPoly) -> CohClass {
        let mut out = self.zero();
        for (e, c) in p.terms() {
            let mut m = self.unit();
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    let g = self.basis_class(self.generators[v]);
                    m = self.mul_unchecked(&m, &self.pow(&g, k));
                }
            }
            out.add_scaled(&m, c);
        }
        out
    }

    /// Inverse of a class whose degree-0 part is a nonzero multiple of the
    /// unit (everything else is nilpotent).
    pub fn inverse(&self, a: &CohClass) -> Result<CohClass> {
        self.check(a)?;
        let c = a.coeffs[0].clone();
        let scalar_part_ok = (1..self.rank()).all(|i| self.basis[i].degree > 0 || a.coeffs[i].is_zero());
        if c.is_zero() || !scalar_part_ok {
            return Err(Error::NotInvertible(
                "degree-0 part is not a nonzero multiple of the unit".into(),
            ));
        }
        let cinv = Rational::one() / &c;
        // a = c (1 + n), n nilpotent
        let mut n = a.scale(&cinv);
        n.coeffs[0] -= Rational::one();
        let neg_n = n.neg();
        let mut term = self.unit();
        let mut sum = self.unit();
        loop {
            term = self.mul_unchecked(&term, &neg_n);
            if term.is_zero() {
                break;
            }
            sum.add_assign(&term);
        }
        Ok(sum.scale(&cinv))
    }

    pub fn to_table(&self) -> RingTable {
        let rank = self.rank();
        let mut mult = Vec::new();
        for i in 0..rank {
            for j in i..rank {
                mult.push(MultEntry {
                    i,
                    j,
                    coeffs: self.product_class(i, j).to_strings(),
                });
            }
        }
        let names = self.generator_names();
        RingTable {
            basis: self.basis.clone(),
            mult,
            integral: self.integral.iter().map(format_rational).collect(),
            divisor_lifts: self
                .divisor_lifts
                .iter()
                .map(|l| l.as_ref().map(|p| p.display(&names)))
                .collect(),
        }
    }
}

/// `Q[H]/(H^{n+1})` with generator name `H`.
pub fn ring_projective(n: u32) -> Result<CohRing> {
    ring_projective_named(n, "H")
}

pub fn ring_projective_named(n: u32, name: &str) -> Result<CohRing> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!(
            "projective space needs n >= 1 (got {n})"
        )));
    }
    let rank = n as usize + 1;
    let label = |k: usize| match k {
        0 => "1".to_string(),
        1 => name.to_string(),
        _ => format!("{name}^{k}"),
    };
    let basis = (0..rank)
        .map(|k| BasisElement {
            label: label(k),
            degree: 2 * k as u32,
        })
        .collect();
    let table = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| {
                    let mut v = vec![Rational::zero(); rank];
                    if i + j < rank {
                        v[i + j] = Rational::one();
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut integral = vec![Rational::zero(); rank];
    integral[n as usize] = Rational::one();
    let lifts = (0..rank)
        .map(|k| Some(DivisorPoly::var(1, 0).pow(k as u32)))
        .collect();
    CohRing::from_parts(basis, table, integral, lifts)
}

/// Appends `suffix` to every identifier in a label (`"H^2"` -> `"H1^2"`).
fn suffix_identifiers(label: &str, suffix: &str) -> String {
    let mut out = String::new();
    let mut in_ident = false;
    for c in label.chars() {
        let ident_char = c.is_alphanumeric() || c == '_';
        if in_ident && !ident_char {
            out.push_str(suffix);
        }
        if !in_ident && ident_char {
            in_ident = c.is_alphabetic() || c == '_';
        } else if !ident_char {
            in_ident = false;
        }
        out.push(c);
    }
    if in_ident {
        out.push_str(suffix);
    }
    out
}

/// Künneth product. When the two factors share labels, every identifier of
/// factor `a` gets suffix `1` and of factor `b` suffix `2`.
pub fn ring_product(a: &CohRing, b: &CohRing) -> Result<CohRing> {
    let la: BTreeSet<&str> = a.basis.iter().skip(1).map(|x| x.label.as_str()).collect();
    let clash = b.basis.iter().skip(1).any(|x| la.contains(x.label.as_str()));
    let rename = |l: &str, s: &str| if clash { suffix_identifiers(l, s) } else { l.to_string() };
    let (ra, rb) = (a.rank(), b.rank());
    let rank = ra * rb;
    let mut basis = Vec::with_capacity(rank);
    for i in 0..ra {
        for j in 0..rb {
            let label = match (i, j) {
                (0, 0) => "1".to_string(),
                (_, 0) => rename(a.label(i), "1"),
                (0, _) => rename(b.label(j), "2"),
                _ => format!("{}*{}", rename(a.label(i), "1"), rename(b.label(j), "2")),
            };
            basis.push(BasisElement {
                label,
                degree: a.degree(i) + b.degree(j),
            });
        }
    }
    let mut table = vec![vec![vec![Rational::zero(); rank]; rank]; rank];
    for i in 0..ra {
        for j in 0..rb {
            for k in 0..ra {
                for l in 0..rb {
                    let row = &mut table[i * rb + j][k * rb + l];
                    for (p, x) in &a.products[i * ra + k] {
                        for (s, y) in &b.products[j * rb + l] {
                            row[p * rb + s] += x * y;
                        }
                    }
                }
            }
        }
    }
    let integral = (0..rank)
        .map(|ij| &a.integral[ij / rb] * &b.integral[ij % rb])
        .collect();
    // generators of the product: (g, 1) then (1, g'), in product-basis order
    let gens: Vec<usize> = (0..rank).filter(|&ij| basis[ij].degree == 2).collect();
    let map_a: Vec<usize> = a
        .generators
        .iter()
        .map(|&g| gens.iter().position(|&x| x == g * rb).unwrap())
        .collect();
    let map_b: Vec<usize> = b
        .generators
        .iter()
        .map(|&g| gens.iter().position(|&x| x == g).unwrap())
        .collect();
    let lifts = (0..rank)
        .map(|ij| {
            let pa = a.divisor_lifts[ij / rb].as_ref()?;
            let pb = b.divisor_lifts[ij % rb].as_ref()?;
            Some(pa.remap(gens.len(), &map_a).mul(&pb.remap(gens.len(), &map_b)))
        })
        .collect();
    CohRing::from_parts(basis, table, integral, lifts)
}

/// Image of a class of the left factor in `ring_product(a, b)`; `rb` is the
/// rank of `b`.
pub fn embed_left(c: &CohClass, rb: usize) -> CohClass {
    let mut out = CohClass::zero(c.rank() * rb);
    for (i, x) in c.coeffs.iter().enumerate() {
        out.coeffs[i * rb] = x.clone();
    }
    out
}

/// Image of a class of the right factor in `ring_product(a, b)`; `ra` is the
/// rank of `a`.
pub fn embed_right(c: &CohClass, ra: usize) -> CohClass {
    let mut out = CohClass::zero(c.rank() * ra);
    for (j, x) in c.coeffs.iter().enumerate() {
        out.coeffs[j] = x.clone();
    }
    out
}

/// Loads and validates a ring-table document.
pub fn ring_from_table(doc: &RingTable) -> Result<CohRing> {
    let rank = doc.basis.len();
    let bad = |m: String| Error::MalformedRing(m);
    let mut table: Vec<Vec<Option<Vec<Rational>>>> = vec![vec![None; rank]; rank];
    for e in &doc.mult {
        if e.i >= rank || e.j >= rank {
            return Err(bad(format!("product index ({},{}) out of range", e.i, e.j)));
        }
        if e.coeffs.len() != rank {
            return Err(bad(format!("product ({},{}) has {} coefficients", e.i, e.j, e.coeffs.len())));
        }
        let v = e
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        for (x, y) in [(e.i, e.j), (e.j, e.i)] {
            match &table[x][y] {
                Some(old) if *old != v => {
                    return Err(bad(format!("non-commutative pair ({},{})", e.i, e.j)));
                }
                _ => table[x][y] = Some(v.clone()),
            }
        }
    }
    let mut dense = vec![vec![Vec::new(); rank]; rank];
    for i in 0..rank {
        for j in 0..rank {
            dense[i][j] = match table[i][j].take() {
                Some(v) => v,
                None if i == 0 || j == 0 => {
                    let mut v = vec![Rational::zero(); rank];
                    v[i.max(j)] = Rational::one();
                    v
                }
                None => return Err(bad(format!("missing product ({i},{j})"))),
            };
        }
    }
    let integral = doc
        .integral
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<_>>>()?;
    let gen_names: Vec<String> = doc
        .basis
        .iter()
        .filter(|b| b.degree == 2)
        .map(|b| b.label.clone())
        .collect();
    let lifts = if doc.divisor_lifts.is_empty() {
        vec![None; rank]
    } else {
        doc.divisor_lifts
            .iter()
            .map(|l| l.as_deref().map(|s| DivisorPoly::parse(s, &gen_names)).transpose())
            .collect::<Result<Vec<_>>>()?
    };
    CohRing::from_parts(doc.basis.clone(), dense, integral, lifts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    #[test]
    fn projective_plane_relations() {
        let p2 = ring_projective(2).unwrap();
        let h = p2.basis_class(1);
        let h2 = p2.basis_class(2);
        assert_eq!(p2.rank(), 3);
        assert!(p2.mul(&h, &h2).unwrap().is_zero());
        assert_eq!(p2.integrate(&h2).unwrap(), rat(1));
        assert_eq!(p2.pairing(&h, &h).unwrap(), rat(1));
        assert_eq!(p2.dual_basis()[0], h2);
        assert_eq!(p2.dual_basis()[1], h);
    }

    #[test]
    fn projective_line_and_p4() {
        let p1 = ring_projective(1).unwrap();
        let h = p1.basis_class(1);
        assert!(p1.mul(&h, &h).unwrap().is_zero());
        let p4 = ring_projective(4).unwrap();
        assert_eq!(p4.integrate(&p4.basis_class(3)).unwrap(), rat(0));
        assert_eq!(p4.integrate(&p4.basis_class(4)).unwrap(), rat(1));
        assert_eq!(ring_projective(0).unwrap_err().code(), "invalid-argument");
    }

    #[test]
    fn product_of_lines() {
        let p1 = ring_projective(1).unwrap();
        let r = ring_product(&p1, &p1).unwrap();
        let labels: Vec<&str> = r.basis().iter().map(|b| b.label.as_str()).collect();
        assert_eq!(labels, ["1", "H2", "H1", "H1*H2"]);
        let h1 = r.parse_class("H1").unwrap();
        let h2 = r.parse_class("H2").unwrap();
        assert!(r.mul(&h1, &h1).unwrap().is_zero());
        assert!(r.mul(&h2, &h2).unwrap().is_zero());
        assert_eq!(r.integrate(&r.mul(&h1, &h2).unwrap()).unwrap(), rat(1));
        let dual_h1 = &r.dual_basis()[r.index_of("H1").unwrap()];
        assert_eq!(*dual_h1, h2);
        let p2 = ring_projective(2).unwrap();
        assert_eq!(ring_product(&p2, &p1).unwrap().rank(), 6);
    }

    #[test]
    fn table_round_trip_matches_builtin() {
        let p2 = ring_projective(2).unwrap();
        let again = ring_from_table(&p2.to_table()).unwrap();
        assert_eq!(again, p2);
    }

    #[test]
    fn rank_mismatch_is_rejected() {
        let p2 = ring_projective(2).unwrap();
        let e = p2.mul(&CohClass::zero(2), &p2.unit()).unwrap_err();
        assert_eq!(e.code(), "invalid-argument");
    }

    fn nonassociative() -> RingTable {
        // 1, a, b (deg 2), c (deg 4), d (deg 6): a*a = c, a*b = c, a*c = d, b*c = 0
        let b = |l: &str, d| BasisElement {
            label: l.into(),
            degree: d,
        };
        let e = |i, j, k: Option<usize>| MultEntry {
            i,
            j,
            coeffs: (0..5)
                .map(|x| if Some(x) == k { "1".into() } else { "0".into() })
                .collect(),
        };
        RingTable {
            basis: vec![b("1", 0), b("a", 2), b("b", 2), b("c", 4), b("d", 6)],
            mult: vec![
                e(1, 1, Some(3)),
                e(1, 2, Some(3)),
                e(2, 2, None),
                e(1, 3, Some(4)),
                e(2, 3, None),
                e(1, 4, None),
                e(2, 4, None),
                e(3, 3, None),
                e(3, 4, None),
                e(4, 4, None),
            ],
            integral: vec!["0".into(), "0".into(), "0".into(), "0".into(), "1".into()],
            divisor_lifts: vec![],
        }
    }

    #[test]
    fn non_associative_table_names_triple() {
        let e = ring_from_table(&nonassociative()).unwrap_err();
        assert_eq!(e.code(), "malformed-ring");
        assert!(e.to_string().contains("non-associative triple (1,1,2)"), "{e}");
    }

    #[test]
    fn non_commutative_and_bad_degree_tables() {
        let p2 = ring_projective(2).unwrap();
        let mut t = p2.to_table();
        t.mult.push(MultEntry {
            i: 2,
            j: 1,
            coeffs: vec!["0".into(), "0".into(), "1".into()],
        });
        assert!(ring_from_table(&t).unwrap_err().to_string().contains("non-commutative"));
        let mut t = p2.to_table();
        for m in t.mult.iter_mut() {
            if (m.i, m.j) == (1, 1) {
                m.coeffs = vec!["0".into(), "1".into(), "0".into()];
            }
        }
        assert!(ring_from_table(&t).unwrap_err().to_string().contains("degree"));
    }

    #[test]
    fn inverse_of_unit_plus_nilpotent() {
        let p2 = ring_projective(2).unwrap();
        let a = p2.parse_class("2 + H").unwrap();
        let inv = p2.inverse(&a).unwrap();
        assert_eq!(p2.mul(&a, &inv).unwrap(), p2.unit());
        assert_eq!(p2.inverse(&p2.basis_class(1)).unwrap_err().code(), "not-invertible");
    }

    #[test]
    fn suffixing_labels() {
        assert_eq!(suffix_identifiers("H^2", "1"), "H1^2");
        assert_eq!(suffix_identifiers("H*K", "2"), "H2*K2");
        assert_eq!(suffix_identifiers("1", "2"), "1");
    }
}

//! Toric GIT targets `C^N // (C*)^r`: chamber validation, effective classes,
//! twist data, and the cohomological data the I-function needs.

use std::collections::BTreeSet;
use std::path::Path;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::assets::bundled;
use crate::error::{Error, Result};
use crate::exactalg::linalg::{self, Matrix};
use crate::exactalg::rational::{abs_is_one, format_rational, parse_rational, rat, Rational};
use crate::exactalg::ring::{embed_left, embed_right, ring_from_table, ring_product, ring_projective};
use crate::exactalg::series::theta_degree;
use crate::exactalg::{CohClass, CohRing, DivisorPoly, RingTable};

/// A curve class, paired with characters through the lattice pairing.
pub type EffectiveClass = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GitPresentation {
    /// Row `j` is the weight vector `ρ_j` of coordinate `j`.
    pub charges: Vec<Vec<i64>>,
    pub theta: Vec<Rational>,
}

impl GitPresentation {
    pub fn new(charges: Vec<Vec<i64>>, theta: Vec<Rational>) -> Self {
        GitPresentation { charges, theta }
    }

    pub fn n_coords(&self) -> usize {
        self.charges.len()
    }

    pub fn torus_rank(&self) -> usize {
        self.theta.len()
    }

    fn row(&self, j: usize) -> Vec<Rational> {
        self.charges[j].iter().map(|&x| rat(x)).collect()
    }

    fn rows(&self, subset: &[usize]) -> Matrix {
        subset.iter().map(|&j| self.row(j)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChamberReport {
    pub n_coords: usize,
    pub torus_rank: usize,
    pub theta: Vec<String>,
    /// Row subsets whose simplicial cones contain θ.
    pub cones: Vec<Vec<usize>>,
    /// Primitive generators of the chamber containing θ.
    pub rays: Vec<Vec<String>>,
    pub dimension: usize,
    pub full_dimensional: bool,
}

#[derive(Clone, Debug)]
struct Chamber {
    report: ChamberReport,
    rays: Vec<Vec<Rational>>,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Coefficients `c` with `Σ c_j ρ_j = θ` over an independent subset, if any.
fn cone_coefficients(p: &GitPresentation, subset: &[usize]) -> Option<Vec<Rational>> {
    let m = linalg::transpose(&p.rows(subset));
    linalg::solve(&m, &p.theta)
}

fn primitive(v: &[Rational]) -> Vec<Rational> {
    use num_integer::Integer;
    let lcm = v
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints
        .iter()
        .fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &g))
        .collect()
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Extreme rays of the pointed cone `{x : a·x ≥ 0 for all normals a}` in
/// dimension `dim`, as primitive vectors in sorted order.
fn extreme_rays(normals: &[Vec<Rational>], dim: usize) -> Vec<Vec<Rational>> {
    let mut out: BTreeSet<Vec<Rational>> = BTreeSet::new();
    let subs = if dim == 1 {
        vec![Vec::new()]
    } else {
        subsets(normals.len(), dim - 1)
    };
    for s in subs {
        let m: Matrix = s.iter().map(|&i| normals[i].clone()).collect();
        let Some(v) = linalg::kernel_line(&m, dim) else {
            continue;
        };
        for cand in [v.clone(), v.iter().map(|x| -x).collect()] {
            if normals.iter().all(|a| !dot(a, &cand).is_negative()) {
                out.insert(primitive(&cand));
            }
        }
    }
    out.into_iter().collect()
}

/// Checks the chamber of θ: nonempty semistable locus, free action on it,
/// and projectivity of the quotient.
pub fn validate(p: &GitPresentation) -> Result<ChamberReport> {
    validate_chamber(p).map(|c| c.report)
}

fn validate_chamber(p: &GitPresentation) -> Result<Chamber> {
    let n = p.n_coords();
    let r = p.torus_rank();
    if r == 0 || n == 0 {
        return Err(Error::InvalidArgument("empty charge matrix".into()));
    }
    if p.charges.iter().any(|row| row.len() != r) {
        return Err(Error::InvalidArgument(format!(
            "every charge row must have length {r}"
        )));
    }
    if p.theta.iter().all(Zero::is_zero) {
        return Err(Error::InvalidArgument("theta must be nonzero".into()));
    }
    let all: Vec<usize> = (0..n).collect();
    if linalg::rank(&p.rows(&all)) != r {
        return Err(Error::InvalidArgument(format!(
            "charge matrix must have rank {r}"
        )));
    }
    // minimal dependent subsets with a positive relation give invariants
    for k in 2..=(r + 1).min(n) {
        for s in subsets(n, k) {
            let m = linalg::transpose(&p.rows(&s));
            if linalg::rank(&m) != k - 1 {
                continue;
            }
            let Some(v) = linalg::kernel_line(&m, k) else {
                continue;
            };
            if v.iter().all(|x| x.is_positive()) || v.iter().all(|x| x.is_negative()) {
                return Err(Error::NonProjective(format!(
                    "rows {s:?} satisfy a positive relation, so the quotient is not projective"
                )));
            }
        }
    }
    let mut cones = Vec::new();
    for k in 1..=r {
        for s in subsets(n, k) {
            if linalg::rank(&p.rows(&s)) != k {
                continue;
            }
            let Some(c) = cone_coefficients(p, &s) else {
                continue;
            };
            if c.iter().any(|x| x.is_negative()) {
                continue;
            }
            if k < r {
                return Err(Error::ConditionStarViolated {
                    subset: s,
                    reason: "span a cone of positive codimension containing theta (theta lies on a wall)".into(),
                });
            }
            let det = linalg::determinant(&p.rows(&s));
            if !abs_is_one(&det) {
                return Err(Error::ConditionStarViolated {
                    subset: s,
                    reason: format!(
                        "generate a cone of index {} containing theta (nontrivial finite stabilizer)",
                        format_rational(&det.abs())
                    ),
                });
            }
            cones.push(s);
        }
    }
    if cones.is_empty() {
        return Err(Error::EmptyQuotient {
            theta: format!(
                "[{}]",
                p.theta.iter().map(format_rational).collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut normals = Vec::new();
    for s in &cones {
        let m = linalg::transpose(&p.rows(s));
        let inv = linalg::inverse(&m).ok_or_else(|| {
            Error::InternalInconsistency("simplicial cone with singular generators".into())
        })?;
        normals.extend(inv);
    }
    let rays = extreme_rays(&normals, r);
    let dimension = if rays.is_empty() { 0 } else { linalg::rank(&rays) };
    let report = ChamberReport {
        n_coords: n,
        torus_rank: r,
        theta: p.theta.iter().map(format_rational).collect(),
        cones,
        rays: rays
            .iter()
            .map(|v| v.iter().map(format_rational).collect())
            .collect(),
        dimension,
        full_dimensional: dimension == r,
    };
    Ok(Chamber { report, rays })
}

/// Lattice pairing `⟨β, η⟩`.
pub fn beta_deg(beta: &[i64], eta: &[Rational]) -> Rational {
    theta_degree(eta, beta)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistData {
    /// One character `ε_a` per line-bundle summand.
    pub weights: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexityReport {
    pub summands: usize,
    pub classes_checked: usize,
}

/// Reference to a ring-table document, inline or by relative path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingSource {
    Inline(RingTable),
    File(String),
}

/// On-disk target document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetSpec {
    #[serde(default)]
    pub name: String,
    pub charges: Vec<Vec<i64>>,
    pub theta: Vec<String>,
    pub ring: RingSource,
    pub divisor_classes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub insertion_lifts: Option<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct TargetModel {
    name: String,
    presentation: GitPresentation,
    chamber: Chamber,
    ring: CohRing,
    divisor_classes: Vec<CohClass>,
    /// `κ(e_a)` for the standard characters `e_a`.
    char_classes: Vec<CohClass>,
    /// For each degree-2 ring generator, the rational character it comes from.
    generator_chars: Vec<Vec<Rational>>,
    twist: Option<TwistData>,
    insertion_lifts: Vec<Option<DivisorPoly>>,
}

impl TargetModel {
    pub fn new(
        name: impl Into<String>,
        presentation: GitPresentation,
        ring: CohRing,
        divisor_classes: Vec<CohClass>,
        twist: Option<TwistData>,
        insertion_lifts: Option<Vec<DivisorPoly>>,
    ) -> Result<Self> {
        let chamber = validate_chamber(&presentation)?;
        let n = presentation.n_coords();
        let r = presentation.torus_rank();
        if divisor_classes.len() != n {
            return Err(Error::InvalidArgument(format!(
                "{} divisor classes given for {n} coordinates",
                divisor_classes.len()
            )));
        }
        let deg2: Vec<usize> = (0..ring.rank()).filter(|&i| ring.degree(i) == 2).collect();
        for (j, d) in divisor_classes.iter().enumerate() {
            if d.rank() != ring.rank() {
                return Err(Error::InvalidArgument(format!("divisor class {j} has the wrong rank")));
            }
            if (0..ring.rank()).any(|i| !deg2.contains(&i) && !d.coeff(i).is_zero()) {
                return Err(Error::InvalidArgument(format!(
                    "divisor class {j} is not of degree 2"
                )));
            }
        }
        // Solve D_j = Σ_a ρ_{ja} κ(e_a) slot by slot in degree 2.
        let rho: Matrix = presentation.rows(&(0..n).collect::<Vec<_>>());
        let mut char_classes = vec![ring.zero(); r];
        for &slot in &deg2 {
            let rhs: Vec<Rational> = divisor_classes.iter().map(|d| d.coeff(slot).clone()).collect();
            let x = linalg::solve(&rho, &rhs).ok_or_else(|| {
                Error::InvalidArgument(
                    "divisor classes violate a linear relation among the charge rows".into(),
                )
            })?;
            for (a, v) in x.into_iter().enumerate() {
                let mut c = char_classes[a].clone();
                c.add_scaled(&ring.basis_class(slot), &v);
                char_classes[a] = c;
            }
        }
        // Each generator g as a rational character η_g with κ(η_g) = g.
        let kmat: Matrix = deg2
            .iter()
            .map(|&slot| char_classes.iter().map(|c| c.coeff(slot).clone()).collect())
            .collect();
        let mut generator_chars = Vec::new();
        for &g in ring.generators() {
            let rhs: Vec<Rational> = deg2
                .iter()
                .map(|&slot| if slot == g { Rational::one() } else { Rational::zero() })
                .collect();
            let eta = solve_any(&kmat, &rhs, r).ok_or_else(|| {
                Error::NoDivisorLift(format!(
                    "generator {:?} is not the image of a character",
                    ring.label(g)
                ))
            })?;
            generator_chars.push(eta);
        }
        if let Some(tw) = &twist {
            if tw.weights.iter().any(|w| w.len() != r) {
                return Err(Error::InvalidArgument(format!(
                    "twist weights must have length {r}"
                )));
            }
        }
        let lifts = match insertion_lifts {
            Some(l) => {
                if l.len() != ring.rank() {
                    return Err(Error::InvalidArgument(format!(
                        "{} insertion lifts given for a ring of rank {}",
                        l.len(),
                        ring.rank()
                    )));
                }
                for (i, p) in l.iter().enumerate() {
                    if p.nvars() != ring.generators().len() || ring.eval_poly(p) != ring.basis_class(i) {
                        return Err(Error::InvalidArgument(format!(
                            "insertion lift {i} does not reduce to {:?}",
                            ring.label(i)
                        )));
                    }
                }
                l.into_iter().map(Some).collect()
            }
            None => (0..ring.rank()).map(|i| ring.divisor_lift(i).cloned()).collect(),
        };
        Ok(TargetModel {
            name: name.into(),
            presentation,
            chamber,
            ring,
            divisor_classes,
            char_classes,
            generator_chars,
            twist,
            insertion_lifts: lifts,
        })
    }

    /// `P^n = C^{n+1} // C*`.
    pub fn projective(n: u32) -> Result<Self> {
        let ring = ring_projective(n)?;
        let h = ring.basis_class(1);
        TargetModel::new(
            format!("P{n}"),
            GitPresentation::new(vec![vec![1]; n as usize + 1], vec![rat(1)]),
            ring,
            vec![h; n as usize + 1],
            None,
            None,
        )
    }

    /// Product target; twists are carried over on their own factor.
    pub fn product(a: &TargetModel, b: &TargetModel) -> Result<Self> {
        let (ra, rb) = (a.torus_rank(), b.torus_rank());
        let mut charges = Vec::new();
        for row in &a.presentation.charges {
            let mut v = row.clone();
            v.extend(std::iter::repeat(0).take(rb));
            charges.push(v);
        }
        for row in &b.presentation.charges {
            let mut v = vec![0; ra];
            v.extend(row.iter().copied());
            charges.push(v);
        }
        let mut theta = a.presentation.theta.clone();
        theta.extend(b.presentation.theta.iter().cloned());
        let ring = ring_product(&a.ring, &b.ring)?;
        let mut divisors: Vec<CohClass> = a
            .divisor_classes
            .iter()
            .map(|d| embed_left(d, b.ring.rank()))
            .collect();
        divisors.extend(b.divisor_classes.iter().map(|d| embed_right(d, a.ring.rank())));
        let mut weights = Vec::new();
        if let Some(t) = &a.twist {
            for w in &t.weights {
                let mut v = w.clone();
                v.extend(std::iter::repeat(0).take(rb));
                weights.push(v);
            }
        }
        if let Some(t) = &b.twist {
            for w in &t.weights {
                let mut v = vec![0; ra];
                v.extend(w.iter().copied());
                weights.push(v);
            }
        }
        let twist = (!weights.is_empty()).then_some(TwistData { weights });
        TargetModel::new(
            format!("{}x{}", a.name, b.name),
            GitPresentation::new(charges, theta),
            ring,
            divisors,
            twist,
            None,
        )
    }

    pub fn with_twist(&self, weights: Vec<Vec<i64>>) -> Result<Self> {
        TargetModel::new(
            self.name.clone(),
            self.presentation.clone(),
            self.ring.clone(),
            self.divisor_classes.clone(),
            (!weights.is_empty()).then_some(TwistData { weights }),
            None,
        )
    }

    /// Builds a target from a parsed document; relative ring paths resolve
    /// against `base`.
    pub fn from_spec(spec: &TargetSpec, base: Option<&Path>) -> Result<Self> {
        let table = match &spec.ring {
            RingSource::Inline(t) => t.clone(),
            RingSource::File(f) => {
                let text = match bundled(f.trim_end_matches(".json")) {
                    Some(s) if base.map_or(true, |b| !b.join(f).exists()) => s.to_string(),
                    _ => {
                        let path = base.map_or_else(|| Path::new(f).to_path_buf(), |b| b.join(f));
                        std::fs::read_to_string(&path).map_err(|e| {
                            Error::Configuration(format!("cannot read ring table {}: {e}", path.display()))
                        })?
                    }
                };
                serde_json::from_str(&text)?
            }
        };
        let ring = ring_from_table(&table)?;
        let divisors = spec
            .divisor_classes
            .iter()
            .map(|e| ring.parse_class(e))
            .collect::<Result<Vec<_>>>()?;
        let theta = spec
            .theta
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        let names = ring.generator_names();
        let lifts = spec
            .insertion_lifts
            .as_ref()
            .map(|l| {
                l.iter()
                    .map(|e| DivisorPoly::parse(e, &names))
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        let twist = spec
            .twist
            .clone()
            .filter(|w| !w.is_empty())
            .map(|weights| TwistData { weights });
        TargetModel::new(
            spec.name.clone(),
            GitPresentation::new(spec.charges.clone(), theta),
            ring,
            divisors,
            twist,
            lifts,
        )
    }

    pub fn from_json(text: &str, base: Option<&Path>) -> Result<Self> {
        let spec: TargetSpec = serde_json::from_str(text)?;
        Self::from_spec(&spec, base)
    }

    /// A bundled target by name (`"p2"`, `"p4_quintic"`, ...).
    pub fn bundled(name: &str) -> Result<Self> {
        let text = bundled(name)
            .ok_or_else(|| Error::Configuration(format!("no bundled target named {name:?}")))?;
        Self::from_json(text, None)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn presentation(&self) -> &GitPresentation {
        &self.presentation
    }

    pub fn chamber(&self) -> &ChamberReport {
        &self.chamber.report
    }

    pub fn ring(&self) -> &CohRing {
        &self.ring
    }

    pub fn theta(&self) -> &[Rational] {
        &self.presentation.theta
    }

    pub fn torus_rank(&self) -> usize {
        self.presentation.torus_rank()
    }

    pub fn divisor_classes(&self) -> &[CohClass] {
        &self.divisor_classes
    }

    pub fn char_classes(&self) -> &[CohClass] {
        &self.char_classes
    }

    pub fn generator_chars(&self) -> &[Vec<Rational>] {
        &self.generator_chars
    }

    pub fn twist(&self) -> Option<&TwistData> {
        self.twist.as_ref()
    }

    pub fn insertion_lift(&self, i: usize) -> Option<&DivisorPoly> {
        self.insertion_lifts[i].as_ref()
    }

    /// `⟨β, ρ_j⟩` for every coordinate.
    pub fn pairings(&self, beta: &[i64]) -> Vec<i64> {
        self.presentation
            .charges
            .iter()
            .map(|row| row.iter().zip(beta).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `c₁` of the twist summands.
    pub fn twist_classes(&self) -> Vec<CohClass> {
        let Some(t) = &self.twist else {
            return Vec::new();
        };
        t.weights
            .iter()
            .map(|w| {
                let mut c = self.ring.zero();
                for (a, &x) in w.iter().enumerate() {
                    c.add_scaled(&self.char_classes[a], &rat(x));
                }
                c
            })
            .collect()
    }

    /// Euler class of the twist bundle, if twisted.
    pub fn euler_class(&self) -> Option<CohClass> {
        self.twist.as_ref()?;
        Some(
            self.twist_classes()
                .iter()
                .fold(self.ring.unit(), |acc, c| self.ring.mul_unchecked(&acc, c)),
        )
    }

    /// Whether `β` lies in the chamber-dual cone.
    pub fn is_effective(&self, beta: &[i64]) -> bool {
        beta.len() == self.torus_rank()
            && self.chamber.rays.iter().all(|ray| {
                let bq: Vec<Rational> = beta.iter().map(|&x| rat(x)).collect();
                !dot(&bq, ray).is_negative()
            })
    }

    /// Lattice points of the chamber-dual cone with θ-degree at most `d`,
    /// sorted by (θ-degree, lexicographic).
    pub fn effective_monoid(&self, d: u32) -> Vec<EffectiveClass> {
        let r = self.torus_rank();
        let theta = self.theta();
        let dual = extreme_rays(&self.chamber.rays, r);
        let dr = Rational::from_integer(d.into());
        let mut bound = vec![Rational::zero(); r];
        for u in &dual {
            let deg = dot(u, theta);
            if !deg.is_positive() {
                continue;
            }
            let lam = &dr / &deg;
            for i in 0..r {
                bound[i] += &lam * u[i].abs();
            }
        }
        let bound: Vec<i64> = bound
            .iter()
            .map(|b| i64::try_from(b.floor().to_integer()).unwrap_or(i64::MAX))
            .collect();
        let mut out = Vec::new();
        let mut cur = vec![0i64; r];
        fn go(
            i: usize,
            cur: &mut Vec<i64>,
            bound: &[i64],
            keep: &mut dyn FnMut(&[i64]),
        ) {
            if i == cur.len() {
                keep(cur);
                return;
            }
            for v in -bound[i]..=bound[i] {
                cur[i] = v;
                go(i + 1, cur, bound, keep);
            }
        }
        let rays = &self.chamber.rays;
        go(0, &mut cur, &bound, &mut |b: &[i64]| {
            let bq: Vec<Rational> = b.iter().map(|&x| rat(x)).collect();
            if rays.iter().all(|ray| !dot(&bq, ray).is_negative()) && beta_deg(b, theta) <= dr {
                out.push(b.to_vec());
            }
        });
        out.sort_by(|a, b| beta_deg(a, theta).cmp(&beta_deg(b, theta)).then_with(|| a.cmp(b)));
        out
    }

    /// Checks `⟨β, ε_a⟩ ≥ 0` for all enumerated classes and summands.
    pub fn convexity_check(&self, d: u32) -> Result<ConvexityReport> {
        let Some(t) = &self.twist else {
            return Ok(ConvexityReport {
                summands: 0,
                classes_checked: 0,
            });
        };
        let classes = self.effective_monoid(d);
        for beta in &classes {
            for (a, w) in t.weights.iter().enumerate() {
                let pairing: i64 = w.iter().zip(beta).map(|(x, y)| x * y).sum();
                if pairing < 0 {
                    return Err(Error::NonConvexTwist {
                        beta: beta.clone(),
                        summand: a,
                        pairing,
                    });
                }
            }
        }
        Ok(ConvexityReport {
            summands: t.weights.len(),
            classes_checked: classes.len(),
        })
    }
}

/// Some solution of an underdetermined consistent system `m x = b`.
fn solve_any(m: &Matrix, b: &[Rational], cols: usize) -> Option<Vec<Rational>> {
    let aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (red, piv) = linalg::row_reduce(&aug);
    if piv.contains(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = red[i][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(charges: Vec<Vec<i64>>, theta: Vec<i64>) -> GitPresentation {
        GitPresentation::new(charges, theta.into_iter().map(rat).collect())
    }

    #[test]
    fn projective_space_chamber() {
        let rep = validate(&pres(vec![vec![1]; 3], vec![1])).unwrap();
        assert_eq!(rep.rays, vec![vec!["1".to_string()]]);
        assert!(rep.full_dimensional);
        assert_eq!(rep.cones.len(), 3);
    }

    #[test]
    fn negative_theta_is_empty() {
        let e = validate(&pres(vec![vec![1]; 3], vec![-1])).unwrap_err();
        assert_eq!(e.code(), "empty-quotient");
    }

    #[test]
    fn weighted_projective_plane_violates_freeness() {
        let e = validate(&pres(vec![vec![1], vec![1], vec![2]], vec![1])).unwrap_err();
        assert_eq!(e.code(), "condition-star-violated");
        match e {
            Error::ConditionStarViolated { subset, .. } => assert_eq!(subset, vec![2]),
            _ => unreachable!(),
        }
    }

    #[test]
    fn wall_and_non_projective() {
        let p1p1 = vec![vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1]];
        let e = validate(&pres(p1p1, vec![1, 0])).unwrap_err();
        assert_eq!(e.code(), "condition-star-violated");
        let e = validate(&pres(vec![vec![1], vec![-1]], vec![1])).unwrap_err();
        assert_eq!(e.code(), "non-projective");
    }

    #[test]
    fn hirzebruch_chamber() {
        // Hirzebruch surface F_1
        let p = pres(vec![vec![1, 0], vec![1, 0], vec![-1, 1], vec![0, 1]], vec![1, 2]);
        let rep = validate(&p).unwrap();
        assert!(rep.full_dimensional);
        assert_eq!(rep.dimension, 2);
    }

    #[test]
    fn effective_monoids() {
        let p2 = TargetModel::projective(2).unwrap();
        assert_eq!(p2.effective_monoid(3), vec![vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(p2.effective_monoid(0), vec![vec![0]]);
        let p1 = TargetModel::projective(1).unwrap();
        let q = TargetModel::product(&p1, &p1).unwrap();
        assert_eq!(
            q.effective_monoid(2),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        assert_eq!(q.effective_monoid(0), vec![vec![0, 0]]);
    }

    #[test]
    fn beta_pairing() {
        assert_eq!(beta_deg(&[2], &[rat(1)]), rat(2));
        assert_eq!(beta_deg(&[0], &[rat(7)]), rat(0));
        assert_eq!(beta_deg(&[1, 2], &[rat(1), rat(1)]), rat(3));
    }

    #[test]
    fn convexity() {
        let quintic = TargetModel::projective(4).unwrap().with_twist(vec![vec![5]]).unwrap();
        assert!(quintic.convexity_check(4).is_ok());
        let p1 = TargetModel::projective(1).unwrap();
        let q = TargetModel::product(&p1, &p1).unwrap();
        let bad = q.with_twist(vec![vec![1, -1]]).unwrap();
        match bad.convexity_check(1).unwrap_err() {
            Error::NonConvexTwist { beta, summand, pairing } => {
                assert_eq!((beta, summand, pairing), (vec![0, 1], 0, -1));
            }
            e => panic!("{e}"),
        }
        assert_eq!(q.convexity_check(3).unwrap().classes_checked, 0);
    }

    #[test]
    fn bundled_projective_matches_builtin() {
        for (name, n) in [("p1", 1), ("p2", 2)] {
            let t = TargetModel::bundled(name).unwrap();
            let b = TargetModel::projective(n).unwrap();
            assert_eq!(t.ring(), b.ring());
            assert_eq!(t.divisor_classes(), b.divisor_classes());
        }
        let q = TargetModel::bundled("p4_quintic").unwrap();
        let e = q.euler_class().unwrap();
        assert_eq!(e, q.ring().basis_class(1).scale(&rat(5)));
    }

    #[test]
    fn bundled_product_chars() {
        let t = TargetModel::bundled("p1xp1").unwrap();
        let h1 = t.ring().parse_class("H1").unwrap();
        let h2 = t.ring().parse_class("H2").unwrap();
        assert_eq!(t.char_classes(), &[h1, h2]);
        assert_eq!(t.generator_chars(), &[vec![rat(1), rat(0)], vec![rat(0), rat(1)]]);
    }

    #[test]
    fn divisor_relations_enforced() {
        let ring = ring_projective(2).unwrap();
        let h = ring.basis_class(1);
        let e = TargetModel::new(
            "bad",
            pres(vec![vec![1]; 3], vec![1]),
            ring.clone(),
            vec![h.clone(), h.clone(), h.scale(&rat(2))],
            None,
            None,
        )
        .unwrap_err();
        assert!(e.to_string().contains("linear relation"), "{e}");
    }
}

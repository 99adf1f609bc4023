//! Small and big I-functions of toric targets, optionally twisted.
//!
//! Two independent constructions of the big I-function are provided: the
//! divisor shift rule (substitute `c₁(L) ↦ c₁(L) + β(L) z` into the lifts)
//! and the operator form (apply `exp(Σ t_i P_i(z q∂_q + H)/z)` to the small
//! I-function). They must agree exactly.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::rational::{rat, Rational};
use crate::exactalg::series::theta_degree;
use crate::exactalg::{CohClass, CohRing, DivisorPoly, Index, MultiSeries, Truncation, ZLaurent};
use crate::target::TargetModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Small,
    Big,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructionPath {
    ShiftRule,
    OperatorForm,
}

#[derive(Clone, Debug)]
pub struct IFunction {
    pub target: TargetModel,
    pub kind: Kind,
    pub path: ConstructionPath,
    /// The I-function itself; for twisted targets every term carries `e(E)`.
    pub series: MultiSeries<ZLaurent>,
    /// Same series with the `k = 0` twist factors left out (equals `series`
    /// when untwisted).
    pub euler_free: MultiSeries<ZLaurent>,
}

impl IFunction {
    pub fn euler_class(&self) -> Option<CohClass> {
        self.target.euler_class()
    }

    pub fn truncation(&self) -> Truncation {
        self.series.truncation()
    }
}

/// `1/(d + k z) = Σ_s (-d)^s / (k z)^{s+1}`, exact since `d` is nilpotent.
fn inverse_linear(ring: &CohRing, d: &CohClass, k: i64) -> ZLaurent {
    let mut out = ZLaurent::zero(ring.rank());
    let neg = d.neg();
    let mut pw = ring.unit();
    let kq = rat(k);
    let mut denom = kq.clone();
    let mut s = 0;
    while !pw.is_zero() {
        out.add_term_scaled(-(s + 1), &pw, &(Rational::one() / &denom));
        pw = ring.mul_unchecked(&pw, &neg);
        denom *= &kq;
        s += 1;
    }
    out
}

/// `d + k z`
fn linear(d: &CohClass, k: i64) -> ZLaurent {
    let mut out = ZLaurent::constant(d.clone());
    out.add_term_scaled(1, &CohClass::basis(d.rank(), 0), &rat(k));
    out
}

fn check_effective(t: &TargetModel, beta: &[i64]) -> Result<()> {
    if !t.is_effective(beta) {
        return Err(Error::InvalidArgument(format!(
            "β = {beta:?} is not in the effective cone of this target"
        )));
    }
    Ok(())
}

/// Untwisted `I_β`, exact (every expansion terminates by nilpotency).
fn small_i_exact(t: &TargetModel, beta: &[i64]) -> Result<ZLaurent> {
    check_effective(t, beta)?;
    let ring = t.ring();
    let mut out = ZLaurent::one(ring);
    for (j, p) in t.pairings(beta).into_iter().enumerate() {
        let d = &t.divisor_classes()[j];
        if p > 0 {
            for k in 1..=p {
                out = out.mul_unchecked(ring, &inverse_linear(ring, d, k));
            }
        } else {
            for k in (p + 1)..=0 {
                out = out.mul_unchecked(ring, &linear(d, k));
            }
        }
        if out.is_zero() {
            break;
        }
    }
    Ok(out)
}

/// `I_β` with terms below `z^low` dropped.
pub fn small_i_term(t: &TargetModel, beta: &[i64], low: i32) -> Result<ZLaurent> {
    Ok(small_i_exact(t, beta)?.truncate_below(low))
}

fn twist_product(t: &TargetModel, beta: &[i64], first_k: i64) -> Result<ZLaurent> {
    let ring = t.ring();
    let mut out = ZLaurent::one(ring);
    let Some(tw) = t.twist() else {
        return Ok(out);
    };
    for (a, (w, c)) in tw.weights.iter().zip(t.twist_classes()).enumerate() {
        let pairing: i64 = w.iter().zip(beta).map(|(x, y)| x * y).sum();
        if pairing < 0 {
            return Err(Error::NonConvexTwist {
                beta: beta.to_vec(),
                summand: a,
                pairing,
            });
        }
        for k in first_k..=pairing {
            out = out.mul_unchecked(ring, &linear(&c, k));
        }
    }
    Ok(out)
}

/// `∏_a ∏_{k=0}^{⟨β,ε_a⟩} (c₁(E_a) + k z)`; the empty product without a twist.
pub fn twist_factor(t: &TargetModel, beta: &[i64]) -> Result<ZLaurent> {
    twist_product(t, beta, 0)
}

/// [`twist_factor`] without its `k = 0` factors (the Euler class).
pub fn twist_factor_euler_free(t: &TargetModel, beta: &[i64]) -> Result<ZLaurent> {
    twist_product(t, beta, 1)
}

/// `p(g + ⟨β, η_g⟩ z)` over the degree-2 generators `g`.
pub fn shift_class(t: &TargetModel, p: &DivisorPoly, beta: &[i64]) -> Result<ZLaurent> {
    let ring = t.ring();
    let gens = ring.generators();
    if p.nvars() != gens.len() {
        return Err(Error::NoDivisorLift(format!(
            "polynomial in {} variables for a ring with {} divisor generators",
            p.nvars(),
            gens.len()
        )));
    }
    let shifted: Vec<ZLaurent> = gens
        .iter()
        .zip(t.generator_chars())
        .map(|(&g, eta)| {
            let mut l = ZLaurent::constant(ring.basis_class(g));
            l.add_term_scaled(1, &ring.unit(), &theta_degree(eta, beta));
            l
        })
        .collect();
    let mut out = ZLaurent::zero(ring.rank());
    for (e, c) in p.terms() {
        let mut m = ZLaurent::one(ring);
        for (v, &k) in e.iter().enumerate() {
            for _ in 0..k {
                m = m.mul_unchecked(ring, &shifted[v]);
            }
        }
        out.add_scaled(&m, c);
    }
    Ok(out)
}

/// Parses `expr` over the divisor generators and applies [`shift_class`].
pub fn shift_class_expr(t: &TargetModel, expr: &str, beta: &[i64]) -> Result<ZLaurent> {
    let p = DivisorPoly::parse(expr, &t.ring().generator_names())?;
    shift_class(t, &p, beta)
}

fn unit_m(s: usize, i: usize) -> Vec<u32> {
    let mut m = vec![0; s];
    m[i] = 1;
    m
}

fn insertion_lifts(t: &TargetModel) -> Result<Vec<&DivisorPoly>> {
    let ring = t.ring();
    if !t.chamber().full_dimensional {
        return Err(Error::Unsupported(
            "the chamber is not full-dimensional; divisor shifts are only defined for characters in its span".into(),
        ));
    }
    (0..ring.rank())
        .map(|i| {
            t.insertion_lift(i).ok_or_else(|| {
                Error::NoDivisorLift(format!("basis class {:?} has no divisor lift", ring.label(i)))
            })
        })
        .collect()
}

fn check_twist(t: &TargetModel, d: u32) -> Result<()> {
    if t.twist().is_some() {
        t.convexity_check(d)?;
    }
    Ok(())
}

/// Small I-function up to θ-degree `d`, shaped like a big one at `T = 0`.
pub fn small_i(t: &TargetModel, d: u32) -> Result<IFunction> {
    check_twist(t, d)?;
    let ring = t.ring();
    let s = ring.rank();
    let trunc = Truncation { d, t: 0 };
    let mut series = MultiSeries::new(t.theta().to_vec(), s, trunc);
    let mut euler_free = series.clone();
    let euler = t.euler_class();
    for beta in t.effective_monoid(d) {
        let ib = small_i_exact(t, &beta)?;
        let reduced = ib.mul_unchecked(ring, &twist_factor_euler_free(t, &beta)?);
        let full = match &euler {
            Some(e) => reduced.mul_class(ring, e),
            None => reduced.clone(),
        };
        let idx = Index::new(beta, vec![0; s]);
        euler_free.add_term(idx.clone(), &reduced)?;
        series.add_term(idx, &full)?;
    }
    Ok(IFunction {
        target: t.clone(),
        kind: Kind::Small,
        path: ConstructionPath::ShiftRule,
        series,
        euler_free,
    })
}

/// Big I-function by the shift rule:
/// `Σ_β q^β exp(Σ_i t_i γ_{i,β}(z)/z) I_β [twist_β]`.
pub fn big_i(t: &TargetModel, d: u32, tdeg: u32) -> Result<IFunction> {
    check_twist(t, d)?;
    let lifts = insertion_lifts(t)?;
    let ring = t.ring();
    let s = ring.rank();
    let r = t.torus_rank();
    let trunc = Truncation { d, t: tdeg };
    let theta = t.theta().to_vec();
    let mut series = MultiSeries::new(theta.clone(), s, trunc);
    let mut euler_free = series.clone();
    let euler = t.euler_class();
    // the t-exponential lives at β = 0; a zero-degree truncation suffices
    let exp_trunc = Truncation { d: 0, t: tdeg };
    for beta in t.effective_monoid(d) {
        let ib = small_i_exact(t, &beta)?.mul_unchecked(ring, &twist_factor_euler_free(t, &beta)?);
        if ib.is_zero() {
            continue;
        }
        let mut a = MultiSeries::new(theta.clone(), s, exp_trunc);
        for (i, p) in lifts.iter().enumerate() {
            a.add_term(Index::new(vec![0; r], unit_m(s, i)), &shift_class(t, p, &beta)?.shift(-1))?;
        }
        let e = a.exp(ring)?;
        for (idx, v) in e.terms() {
            let reduced = v.mul_unchecked(ring, &ib);
            let full = match &euler {
                Some(eu) => reduced.mul_class(ring, eu),
                None => reduced.clone(),
            };
            let at = Index::new(beta.clone(), idx.m.clone());
            euler_free.add_term(at.clone(), &reduced)?;
            series.add_term(at, &full)?;
        }
    }
    Ok(IFunction {
        target: t.clone(),
        kind: Kind::Big,
        path: ConstructionPath::ShiftRule,
        series,
        euler_free,
    })
}

/// `(z q∂_q + g)` for the generator with character `eta`, on a whole series.
fn apply_divisor_operator(
    ring: &CohRing,
    g: &CohClass,
    eta: &[Rational],
    s: &MultiSeries<ZLaurent>,
) -> MultiSeries<ZLaurent> {
    let mut out = MultiSeries::like(s);
    for (idx, v) in s.terms() {
        let mut w = v.mul_class(ring, g);
        w.add_scaled(&v.shift(1), &theta_degree(eta, &idx.beta));
        out.add_term_unchecked(idx.clone(), &w);
    }
    out
}

/// `P(z q∂_q + H)` applied to a series, for a polynomial `P` in the generators.
fn apply_poly_operator(t: &TargetModel, p: &DivisorPoly, s: &MultiSeries<ZLaurent>) -> MultiSeries<ZLaurent> {
    let ring = t.ring();
    let gens: Vec<CohClass> = ring.generators().iter().map(|&g| ring.basis_class(g)).collect();
    let mut out = MultiSeries::like(s);
    for (e, c) in p.terms() {
        let mut cur = s.clone();
        for (v, &k) in e.iter().enumerate() {
            for _ in 0..k {
                cur = apply_divisor_operator(ring, &gens[v], &t.generator_chars()[v], &cur);
            }
        }
        for (idx, v) in cur.terms() {
            out.add_term_unchecked(idx.clone(), &v.scale(c));
        }
    }
    out
}

/// Big I-function by the operator form `exp(Σ_i t_i P_i(z q∂_q + H)/z) I(q, z)`.
pub fn big_i_operator(t: &TargetModel, d: u32, tdeg: u32) -> Result<IFunction> {
    let lifts: Vec<DivisorPoly> = insertion_lifts(t)?.into_iter().cloned().collect();
    let small = small_i(t, d)?;
    let s = t.ring().rank();
    let trunc = Truncation { d, t: tdeg };
    let run = |base: &MultiSeries<ZLaurent>| -> Result<MultiSeries<ZLaurent>> {
        let mut start = MultiSeries::new(t.theta().to_vec(), s, trunc);
        for (idx, v) in base.terms() {
            start.add_term(idx.clone(), v)?;
        }
        let mut total = start.clone();
        let mut term = start;
        for k in 1..=tdeg {
            // term_k = (1/k) Σ_i t_i P_i term_{k-1} / z
            let mut next = MultiSeries::like(&term);
            for (i, p) in lifts.iter().enumerate() {
                let applied = apply_poly_operator(t, p, &term);
                for (idx, v) in applied.terms() {
                    let mut m = idx.m.clone();
                    m[i] += 1;
                    next.add_term(Index::new(idx.beta.clone(), m), &v.shift(-1))?;
                }
            }
            term = next.scale(&Rational::new(One::one(), k.into()));
            if term.is_empty() {
                break;
            }
            total = total.add(&term)?;
        }
        Ok(total)
    };
    let series = run(&small.series)?;
    let euler_free = run(&small.euler_free)?;
    Ok(IFunction {
        target: t.clone(),
        kind: Kind::Big,
        path: ConstructionPath::OperatorForm,
        series,
        euler_free,
    })
}

/// First index at which two series differ, if any.
pub fn first_difference(a: &MultiSeries<ZLaurent>, b: &MultiSeries<ZLaurent>) -> Option<Index> {
    let keys: std::collections::BTreeSet<&Index> =
        a.terms().map(|(k, _)| k).chain(b.terms().map(|(k, _)| k)).collect();
    keys.into_iter()
        .find(|k| a.get(k) != b.get(k))
        .cloned()
}

/// `I_β` coefficient of `z^k` on basis slot `i`, from the Euler-free series.
pub fn euler_free_coefficient(i: &IFunction, beta: &[i64], k: i32, slot: usize) -> Rational {
    let s = i.target.ring().rank();
    i.euler_free
        .get(&Index::new(beta.to_vec(), vec![0; s]))
        .map(|l| l.coeff(k).coeff(slot).clone())
        .unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin_inv_expect(ring: &CohRing, terms: &[(i32, usize, i64)]) -> ZLaurent {
        let mut out = ZLaurent::zero(ring.rank());
        for &(k, slot, c) in terms {
            out.add_term_scaled(k, &ring.basis_class(slot), &rat(c));
        }
        out
    }

    #[test]
    fn small_terms_of_projective_spaces() {
        let p1 = TargetModel::projective(1).unwrap();
        assert_eq!(
            small_i_term(&p1, &[1], -3).unwrap(),
            lin_inv_expect(p1.ring(), &[(-2, 0, 1), (-3, 1, -2)])
        );
        let p2 = TargetModel::projective(2).unwrap();
        assert_eq!(
            small_i_term(&p2, &[1], -100).unwrap(),
            lin_inv_expect(p2.ring(), &[(-3, 0, 1), (-4, 1, -3), (-5, 2, 6)])
        );
        assert_eq!(small_i_term(&p2, &[0], -100).unwrap(), ZLaurent::one(p2.ring()));
        assert_eq!(small_i_term(&p2, &[-1], -100).unwrap_err().code(), "invalid-argument");
    }

    #[test]
    fn twist_factors() {
        let q = TargetModel::bundled("p4_quintic").unwrap();
        let ring = q.ring();
        let h5 = ring.basis_class(1).scale(&rat(5));
        assert_eq!(twist_factor(&q, &[0]).unwrap(), ZLaurent::constant(h5.clone()));
        let mut expect = ZLaurent::constant(h5.clone());
        for k in 1..=5 {
            expect = expect.mul_unchecked(ring, &linear(&h5, k));
        }
        assert_eq!(twist_factor(&q, &[1]).unwrap(), expect);
        let prod = small_i_term(&q, &[1], -100)
            .unwrap()
            .mul_unchecked(ring, &twist_factor(&q, &[1]).unwrap());
        assert_eq!(prod.coeff(0).coeff(1), &rat(600));
    }

    #[test]
    fn shift_rule_examples() {
        let p2 = TargetModel::projective(2).unwrap();
        let ring = p2.ring();
        for d in 0..4i64 {
            let got = shift_class_expr(&p2, "H^2", &[d]).unwrap();
            let mut want = ZLaurent::constant(ring.basis_class(2));
            want.add_term_scaled(1, &ring.basis_class(1), &rat(2 * d));
            want.add_term_scaled(2, &ring.unit(), &rat(d * d));
            assert_eq!(got, want);
        }
        let got = shift_class_expr(&p2, "H", &[1]).unwrap();
        assert_eq!(got, linear(&ring.basis_class(1), 1));
        assert_eq!(shift_class_expr(&p2, "K", &[1]).unwrap_err().code(), "no-divisor-lift");
    }

    #[test]
    fn big_i_at_q_zero_is_exponential() {
        let p2 = TargetModel::projective(2).unwrap();
        let i = big_i(&p2, 0, 1).unwrap();
        let ring = p2.ring();
        assert_eq!(i.series.len(), 4);
        assert_eq!(i.series.get(&Index::new(vec![0], vec![0, 0, 0])).unwrap(), &ZLaurent::one(ring));
        for slot in 0..3 {
            assert_eq!(
                i.series.get(&Index::new(vec![0], unit_m(3, slot))).unwrap(),
                &ZLaurent::monomial(ring.basis_class(slot), -1)
            );
        }
    }

    #[test]
    fn paths_agree_on_p1() {
        let p1 = TargetModel::projective(1).unwrap();
        let a = big_i(&p1, 1, 1).unwrap();
        let b = big_i_operator(&p1, 1, 1).unwrap();
        assert_eq!(first_difference(&a.series, &b.series), None);
        let z = big_i_operator(&p1, 2, 0).unwrap();
        assert_eq!(z.series, small_i(&p1, 2).unwrap().series);
    }

    #[test]
    fn quintic_hypergeometric_slots() {
        let q = TargetModel::bundled("p4_quintic").unwrap();
        let i = small_i(&q, 2).unwrap();
        assert_eq!(euler_free_coefficient(&i, &[1], 0, 0), rat(120));
        assert_eq!(euler_free_coefficient(&i, &[2], 0, 0), rat(113400));
        assert_eq!(euler_free_coefficient(&i, &[1], -1, 1), rat(770));
    }
}

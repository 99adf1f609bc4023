use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::{fmt_q, Coordinates, FactorStep, MirrorOutput};
use crate::error::{Error, Result};
use crate::exactalg::rational::Rational;
use crate::exactalg::series::theta_degree;
use crate::exactalg::{CohClass, Index, MultiSeries, Truncation, ZLaurent};
use crate::ifunction::IFunction;

type ZPoly = BTreeMap<i32, Rational>;

/// Every `m` with `|m| <= t` in `s` variables, in lexicographic order.
pub(crate) fn monomials(s: usize, t: u32) -> Vec<Vec<u32>> {
    fn go(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            go(i + 1, left - v, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    go(0, t, &mut vec![0; s], &mut out);
    out
}

/// Factorizes `I` as `J = Σ_i c^i(t, q, z) z∂_{t_i} I` with `c^i` polynomial
/// in `z`, `J = 1 + O(z^{-1})`. One insertion order is consumed: `J` is
/// returned at insertion degree `T - 1`.
pub fn birkhoff(i: &IFunction) -> Result<MirrorOutput> {
    let target = &i.target;
    let ring = target.ring();
    let s = ring.rank();
    let r = target.torus_rank();
    let input = &i.euler_free;
    let trunc_i = input.truncation();
    if trunc_i.t == 0 {
        return Err(Error::SaturatedTruncation(
            "index 0: insertion degree 0 leaves no derivative family to factor with".into(),
        ));
    }
    let trunc = Truncation {
        d: trunc_i.d,
        t: trunc_i.t - 1,
    };
    let zero = Index::zero(r, s);
    if input.get(&zero) != Some(&ZLaurent::one(ring)) {
        return Err(Error::InvalidArgument("I does not start with 1".into()));
    }

    // F_i[(β, m)] = z (m_i + 1) I[(β, m + e_i)]
    let mut fam: Vec<HashMap<Index, ZLaurent>> = vec![HashMap::new(); s];
    for (idx, v) in input.terms() {
        for (k, f) in fam.iter_mut().enumerate() {
            if idx.m[k] == 0 {
                continue;
            }
            let mut m = idx.m.clone();
            m[k] -= 1;
            if m.iter().sum::<u32>() > trunc.t {
                continue;
            }
            f.insert(
                Index::new(idx.beta.clone(), m),
                v.shift(1).scale(&Rational::from_integer(idx.m[k].into())),
            );
        }
    }
    for (k, f) in fam.iter().enumerate() {
        if f.get(&zero) != Some(&ZLaurent::constant(ring.basis_class(k))) {
            return Err(Error::InvalidArgument(format!(
                "z∂_(t_{k}) I at q = t = 0 is not the basis class {:?}",
                ring.label(k)
            )));
        }
    }

    let theta = target.theta().to_vec();
    let mut order: Vec<(Rational, u32, Index)> = Vec::new();
    for beta in target.effective_monoid(trunc.d) {
        let deg = theta_degree(&theta, &beta);
        for m in monomials(s, trunc.t) {
            let n = m.iter().sum();
            order.push((deg.clone(), n, Index::new(beta.clone(), m)));
        }
    }
    order.sort();

    // c^k_idx as z-polynomials, kept in processing order
    let mut coeffs: Vec<(Index, usize, ZPoly)> = Vec::new();
    let mut j = MultiSeries::new(theta.clone(), s, trunc);
    let mut tau: MultiSeries<CohClass> = MultiSeries::new(theta, s, trunc);
    let mut log: Vec<FactorStep> = Vec::new();

    for (deg, n, idx) in &order {
        let mut acc = ZLaurent::zero(s);
        if *idx == zero {
            let mut one = ZPoly::new();
            one.insert(0, Rational::one());
            coeffs.push((zero.clone(), 0, one));
        }
        for (sub, k, poly) in &coeffs {
            let Some(rest) = idx.checked_sub(sub) else {
                continue;
            };
            if let Some(f) = fam[*k].get(&rest) {
                acc.add_assign(&f.mul_scalar_poly(poly));
            }
        }
        let mut cleared = 0;
        let mut max_power = None;
        if *idx != zero {
            let mut new: BTreeMap<usize, ZPoly> = BTreeMap::new();
            let nonneg: Vec<(i32, CohClass)> = acc
                .terms()
                .filter(|(e, _)| *e >= 0)
                .map(|(e, c)| (e, c.clone()))
                .collect();
            for (e, c) in nonneg {
                for (k, x) in c.coeffs().iter().enumerate() {
                    if !x.is_zero() {
                        new.entry(k).or_default().insert(e, -x.clone());
                        cleared += 1;
                    }
                }
                max_power = max_power.max(Some(e));
                acc.add_term_scaled(e, &c, &-Rational::one());
            }
            for (k, poly) in new {
                coeffs.push((idx.clone(), k, poly));
            }
        }
        let t1 = acc.coeff(-1);
        j.add_term(idx.clone(), &acc)?;
        tau.add_term(idx.clone(), &t1)?;
        match log.last_mut() {
            Some(step) if step.theta_degree == fmt_q(deg) && step.insertion_degree == *n => {
                step.indices += 1;
                step.cleared += cleared;
                step.max_power = step.max_power.max(max_power);
            }
            _ => log.push(FactorStep {
                theta_degree: fmt_q(deg),
                insertion_degree: *n,
                indices: 1,
                cleared,
                max_power,
            }),
        }
    }
    Ok(MirrorOutput {
        target: target.clone(),
        coordinates: Coordinates::Mirror,
        tau,
        j,
        euler: target.euler_class(),
        factor_log: log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;
    use crate::ifunction::{big_i, small_i};
    use crate::target::TargetModel;

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials(2, 1), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert_eq!(monomials(3, 2).len(), 10);
    }

    #[test]
    fn fano_slice_is_identity() {
        for n in 1..=2 {
            let t = TargetModel::projective(n).unwrap();
            let out = birkhoff(&big_i(&t, 3, 1).unwrap()).unwrap();
            out.check_contract().unwrap();
            let small = small_i(&t, 3).unwrap();
            assert_eq!(out.j.t_zero_slice().terms().collect::<Vec<_>>(), small.series.terms().collect::<Vec<_>>());
        }
    }

    #[test]
    fn divisor_slice_of_the_plane_is_not_corrected() {
        let p2 = TargetModel::projective(2).unwrap();
        let out = birkhoff(&big_i(&p2, 3, 3).unwrap()).unwrap();
        for (idx, c) in out.tau.terms() {
            if idx.m[0] != 0 || idx.m[2] != 0 {
                continue;
            }
            let want = if idx.beta == [0] && idx.m[1] == 1 {
                p2.ring().basis_class(1)
            } else {
                p2.ring().zero()
            };
            assert_eq!(c, &want, "{idx:?}");
        }
    }

    #[test]
    fn needs_an_insertion_order() {
        let t = TargetModel::projective(1).unwrap();
        let e = birkhoff(&small_i(&t, 1).unwrap()).unwrap_err();
        assert_eq!(e.code(), "saturated-truncation");
    }

    #[test]
    fn quintic_mirror_map_at_first_order() {
        let q = TargetModel::bundled("p4_quintic").unwrap();
        let out = birkhoff(&big_i(&q, 2, 1).unwrap()).unwrap();
        out.check_contract().unwrap();
        let tau1 = out.tau.get(&Index::new(vec![1], vec![0; 5])).unwrap();
        assert_eq!(tau1.coeff(1), &rat(770));
        assert!(tau1.coeff(0).is_zero());
    }
}

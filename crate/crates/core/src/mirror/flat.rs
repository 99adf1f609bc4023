use std::collections::HashMap;

use num_traits::{One, Zero};

use super::{Coordinates, MirrorOutput};
use crate::error::{Error, Result};
use crate::exactalg::rational::Rational;
use crate::exactalg::series::Coeff;
use crate::exactalg::{CohClass, Index, MultiSeries, ZLaurent};

fn poly_mul(a: &[Rational], b: &[Rational], d: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); d + 1];
    for (i, x) in a.iter().enumerate().take(d + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(d + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_exp(a: &[Rational], d: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); d + 1];
    out[0] = Rational::one();
    let mut pw = out.clone();
    for k in 1..=d {
        pw = poly_mul(&pw, a, d)
            .into_iter()
            .map(|x| x / Rational::from_integer(k.into()))
            .collect();
        for (o, p) in out.iter_mut().zip(&pw) {
            *o += p;
        }
    }
    out
}

/// `a(b(Q))` for `b` without constant term.
fn poly_compose(a: &[Rational], b: &[Rational], d: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); d + 1];
    let mut pw = vec![Rational::zero(); d + 1];
    pw[0] = Rational::one();
    for ak in a.iter().take(d + 1) {
        for (o, p) in out.iter_mut().zip(&pw) {
            *o += ak * p;
        }
        pw = poly_mul(&pw, b, d);
    }
    out
}

/// Inverts `Q = q e^{g(q)}` to `q = Q e^{h(Q)}`, returning the coefficients
/// of `q(Q)` up to `Q^d`.
pub fn invert_mirror(g: &[Rational], d: usize) -> Result<Vec<Rational>> {
    if g.first().is_some_and(|c| !c.is_zero()) {
        return Err(Error::NotInvertible(
            "leading coefficient e^{g(0)} of the mirror map is not 1".into(),
        ));
    }
    let mut g = g.to_vec();
    g.resize(d + 1, Rational::zero());
    let mut qv = vec![Rational::zero(); d + 1];
    let mut shift = vec![Rational::zero(); d + 1];
    if d >= 1 {
        shift[1] = Rational::one();
        qv[1] = Rational::one();
    }
    for _ in 0..=d {
        let neg: Vec<Rational> = poly_compose(&g, &qv, d).iter().map(|x| -x).collect();
        qv = poly_mul(&shift, &poly_exp(&neg, d), d);
    }
    Ok(qv)
}

/// Substitutes `q = subst(Q)` into a one-parameter series.
pub fn change_novikov<V: Coeff>(j: &MultiSeries<V>, subst: &[Rational]) -> Result<MultiSeries<V>> {
    if j.torus_rank() != 1 {
        return Err(Error::Unsupported(
            "Novikov substitution is implemented for one Novikov variable".into(),
        ));
    }
    if subst.first().is_some_and(|c| !c.is_zero()) {
        return Err(Error::InvalidArgument("substitution must have no constant term".into()));
    }
    let d = j.truncation().d as usize;
    let mut out = MultiSeries::like(j);
    if j.saturated() {
        out.mark_saturated();
    }
    let mut powers: Vec<Vec<Rational>> = Vec::new();
    let mut pw = vec![Rational::zero(); d + 1];
    pw[0] = Rational::one();
    let mut sub = subst.to_vec();
    sub.resize(d + 1, Rational::zero());
    let overflow = subst.iter().skip(d + 1).any(|c| !c.is_zero());
    for _ in 0..=d {
        powers.push(pw.clone());
        pw = poly_mul(&pw, &sub, d);
    }
    for (idx, v) in j.terms() {
        let k = idx.beta[0];
        if k < 0 || k as usize > d {
            return Err(Error::InvalidArgument(format!("unexpected class {k} in substitution")));
        }
        for (e, c) in powers[k as usize].iter().enumerate() {
            if !c.is_zero() {
                out.add_term(Index::new(vec![e as i64], idx.m.clone()), &v.scaled(c))?;
            }
        }
    }
    if overflow {
        out.mark_saturated();
    }
    Ok(out)
}

/// Powers `t^m` of a substitution `t_i = subst_i(τ, Q)`, memoized.
struct PowerCache<'a> {
    subst: &'a [MultiSeries<Rational>],
    cache: HashMap<Vec<u32>, MultiSeries<Rational>>,
}

impl<'a> PowerCache<'a> {
    fn get(&mut self, m: &[u32]) -> Result<MultiSeries<Rational>> {
        if let Some(v) = self.cache.get(m) {
            return Ok(v.clone());
        }
        let out = match m.iter().position(|&x| x > 0) {
            None => {
                let base = &self.subst[0];
                let mut one = MultiSeries::like(base);
                one.add_term(Index::zero(base.torus_rank(), m.len()), &Rational::one())?;
                one
            }
            Some(i) => {
                let mut rest = m.to_vec();
                rest[i] -= 1;
                self.get(&rest)?.mul_scalar(&self.subst[i])?
            }
        };
        self.cache.insert(m.to_vec(), out.clone());
        Ok(out)
    }
}

fn compose<V: Coeff>(
    s: &MultiSeries<V>,
    cache: &mut PowerCache<'_>,
) -> Result<MultiSeries<V>> {
    let mut out = MultiSeries::like(s);
    for (idx, v) in s.terms() {
        let pw = cache.get(&idx.m)?;
        for (k, c) in pw.terms() {
            let at = Index::new(
                idx.beta.iter().zip(&k.beta).map(|(a, b)| a + b).collect(),
                k.m.clone(),
            );
            out.add_term(at, &v.scaled(c))?;
        }
    }
    Ok(out)
}

/// Rewrites a factorization in flat coordinates, where `τ = Σ t_i γ_i`.
///
/// The `t = 0` part of the mirror map is absorbed first: its unit component
/// by the string equation and its divisor component by the divisor equation
/// together with the change of Novikov variable `Q = q e^{g(q)}`. The rest
/// of the mirror map is then inverted order by order.
pub fn flatten(out: &MirrorOutput) -> Result<MirrorOutput> {
    if out.coordinates == Coordinates::Flat {
        return Ok(out.clone());
    }
    let target = &out.target;
    let ring = target.ring();
    let s = ring.rank();
    let r = target.torus_rank();
    let trunc = out.j.truncation();
    let d = trunc.d as usize;

    // constant part of the mirror map
    let mut tau0: MultiSeries<CohClass> = MultiSeries::like(&out.tau);
    for (idx, c) in out.tau.terms() {
        if idx.insertion_degree() == 0 && idx.beta.iter().any(|&b| b != 0) {
            tau0.add_term(idx.clone(), c)?;
        }
    }
    let gens = ring.generators();
    let mut divisor_part = false;
    for (idx, c) in tau0.terms() {
        for (slot, x) in c.coeffs().iter().enumerate() {
            if x.is_zero() || slot == 0 {
                continue;
            }
            if !gens.contains(&slot) {
                return Err(Error::Unsupported(format!(
                    "mirror map has a t-independent component along {:?} at β = {:?}",
                    ring.label(slot),
                    idx.beta
                )));
            }
            divisor_part = true;
        }
    }
    if divisor_part && r != 1 {
        return Err(Error::Unsupported(
            "absorbing a divisor shift needs a single Novikov variable".into(),
        ));
    }

    let mut j = out.j.clone();
    let mut tau = out.tau.clone();
    if !tau0.is_empty() {
        let mut expo: MultiSeries<ZLaurent> = MultiSeries::like(&j);
        for (idx, c) in tau0.terms() {
            expo.add_term(idx.clone(), &ZLaurent::monomial(c.neg(), -1))?;
        }
        j = expo.exp(ring)?.mul(ring, &j)?;
        let mut neg = MultiSeries::like(&tau);
        for (idx, c) in tau0.terms() {
            neg.add_term(idx.clone(), &c.neg())?;
        }
        tau = tau.add(&neg)?;
    }
    if divisor_part {
        let g_slot = gens[0];
        let eta = target.generator_chars()[0][0].clone();
        let mut g = vec![Rational::zero(); d + 1];
        for (idx, c) in tau0.terms() {
            g[idx.beta[0] as usize] += c.coeff(g_slot) * &eta;
        }
        let q_of_q = invert_mirror(&g, d)?;
        j = change_novikov(&j, &q_of_q)?;
        tau = change_novikov(&tau, &q_of_q)?;
    }

    // δ_i(t, Q) = τ_i - t_i, then t = τ - δ(t) by fixed-point iteration
    let mut delta: Vec<MultiSeries<Rational>> = vec![MultiSeries::like(&tau); s];
    for (idx, c) in tau.terms() {
        for (i, x) in c.coeffs().iter().enumerate() {
            let mut v = x.clone();
            if idx.beta.iter().all(|&b| b == 0) && idx.insertion_degree() == 1 && idx.m[i] == 1 {
                v -= Rational::one();
            }
            if !v.is_zero() {
                if idx.insertion_degree() == 0 {
                    return Err(Error::InternalInconsistency(
                        "mirror map keeps a t-independent part after absorption".into(),
                    ));
                }
                delta[i].add_term(idx.clone(), &v)?;
            }
        }
    }
    let unit = |i: usize| {
        let mut m = vec![0; s];
        m[i] = 1;
        Index::new(vec![0; r], m)
    };
    let mut ts: Vec<MultiSeries<Rational>> = (0..s)
        .map(|i| {
            let mut v = MultiSeries::like(&tau);
            v.add_term_unchecked(unit(i), &Rational::one());
            v
        })
        .collect();
    let max_iter = (trunc.d as usize + 1) * (trunc.t as usize + 1) + 2;
    let mut converged = false;
    for _ in 0..max_iter {
        let mut cache = PowerCache {
            subst: &ts,
            cache: HashMap::new(),
        };
        let mut next = Vec::with_capacity(s);
        for (i, di) in delta.iter().enumerate() {
            let mut v = MultiSeries::like(&tau);
            v.add_term_unchecked(unit(i), &Rational::one());
            v = v.add(&compose(di, &mut cache)?.scale(&-Rational::one()))?;
            next.push(v);
        }
        let same = next
            .iter()
            .zip(&ts)
            .all(|(a, b)| a.terms().eq(b.terms()));
        ts = next;
        if same {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::InternalInconsistency(
            "inverse mirror map did not stabilize".into(),
        ));
    }
    let mut cache = PowerCache {
        subst: &ts,
        cache: HashMap::new(),
    };
    let j_flat = compose(&j, &mut cache)?;
    let tau_flat = compose(&tau, &mut cache)?;
    for (idx, c) in tau_flat.terms() {
        let want = if idx.beta.iter().all(|&b| b == 0) && idx.insertion_degree() == 1 {
            ring.basis_class(idx.m.iter().position(|&x| x == 1).unwrap_or(0))
        } else {
            ring.zero()
        };
        if *c != want {
            return Err(Error::InternalInconsistency(format!(
                "flat mirror map is not the identity at {idx:?}"
            )));
        }
    }
    Ok(MirrorOutput {
        target: target.clone(),
        coordinates: Coordinates::Flat,
        tau: tau_flat,
        j: j_flat,
        euler: out.euler.clone(),
        factor_log: out.factor_log.clone(),
    })
}

use num_traits::Zero;

use super::{birkhoff, flatten, MirrorOutput};
use crate::error::{Error, Result};
use crate::exactalg::rational::{factorial, Rational};
use crate::exactalg::series::theta_degree;
use crate::exactalg::{CohClass, Index};
use crate::ifunction::big_i;
use crate::target::TargetModel;

/// `⟨γ_{j_1}, …, γ_{j_k}, last_class · ψ^a⟩_{0, k+1, β}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantQuery {
    pub beta: Vec<i64>,
    pub insertions: Vec<usize>,
    pub last_class: CohClass,
    pub psi_power: u32,
}

/// Whether the query satisfies the virtual-dimension constraint. Queries
/// that fail it have value zero.
pub fn virtual_dimension_ok(target: &TargetModel, q: &InvariantQuery) -> bool {
    let ring = target.ring();
    let mut dim = ring.dimension() as i64;
    let mut c1: i64 = target.pairings(&q.beta).iter().sum();
    if let Some(tw) = target.twist() {
        dim -= tw.weights.len() as i64;
        c1 -= tw
            .weights
            .iter()
            .map(|w| w.iter().zip(&q.beta).map(|(x, y)| x * y).sum::<i64>())
            .sum::<i64>();
    }
    let k = q.insertions.len() as i64;
    let vdim = dim + c1 + k + 1 - 3;
    let last_degrees: Vec<u32> = (0..ring.rank())
        .filter(|&i| !q.last_class.coeff(i).is_zero())
        .map(|i| ring.degree(i))
        .collect();
    let Some(&last) = last_degrees.first() else {
        return false;
    };
    if last_degrees.iter().any(|&d| d != last) {
        return true;
    }
    let ins: i64 = q
        .insertions
        .iter()
        .map(|&j| ring.degree(j) as i64 / 2)
        .sum();
    ins + last as i64 / 2 + q.psi_power as i64 == vdim
}

/// Reads an invariant off `J`: `∏ m_i!` times the `q^β t^m z^{-a-2}`
/// coefficient, paired with `last_class` (with `e(E)` inserted if twisted).
pub fn extract_invariant(out: &MirrorOutput, q: &InvariantQuery) -> Result<Rational> {
    let ring = out.target.ring();
    let s = ring.rank();
    if q.beta.len() != out.target.torus_rank() {
        return Err(Error::InvalidArgument(format!(
            "class {:?} has the wrong length",
            q.beta
        )));
    }
    if let Some(&bad) = q.insertions.iter().find(|&&j| j >= s) {
        return Err(Error::InvalidArgument(format!(
            "insertion index {bad} out of range for a basis of size {s}"
        )));
    }
    if q.last_class.rank() != s {
        return Err(Error::InvalidArgument("last class has the wrong rank".into()));
    }
    let trunc = out.j.truncation();
    let deg = theta_degree(out.target.theta(), &q.beta);
    if q.insertions.len() as u32 > trunc.t || deg > Rational::from_integer(trunc.d.into()) {
        return Err(Error::InsufficientTruncation(format!(
            "query needs β-degree {} and {} insertions; J is truncated at D = {}, T = {}",
            super::fmt_q(&deg),
            q.insertions.len(),
            trunc.d,
            trunc.t
        )));
    }
    if !out.target.is_effective(&q.beta) {
        return Ok(Rational::zero());
    }
    let mut m = vec![0u32; s];
    for &j in &q.insertions {
        m[j] += 1;
    }
    let mult: Rational = m
        .iter()
        .map(|&k| Rational::from_integer(factorial(k as u64)))
        .product();
    let exp = -(q.psi_power as i32) - 2;
    let Some(v) = out.j.get(&Index::new(q.beta.clone(), m)) else {
        return Ok(Rational::zero());
    };
    Ok(mult * out.pairing(&v.coeff(exp), &q.last_class)?)
}

/// `N_1, …, N_dmax` for the plane, from a big I-function truncated at
/// `(d, t)`.
pub fn p2_counts_at(dmax: u32, d: u32, t: u32) -> Result<Vec<Rational>> {
    if dmax < 1 {
        return Err(Error::InvalidArgument("dmax must be at least 1".into()));
    }
    if d < dmax || t < 3 * dmax - 1 {
        return Err(Error::InsufficientTruncation(format!(
            "N_{dmax} needs D >= {dmax} and T >= {}; got D = {d}, T = {t}",
            3 * dmax - 1
        )));
    }
    let p2 = TargetModel::projective(2)?;
    let flat = flatten(&birkhoff(&big_i(&p2, d, t)?)?)?;
    let pt = p2.ring().basis_class(2);
    (1..=dmax)
        .map(|k| {
            extract_invariant(
                &flat,
                &InvariantQuery {
                    beta: vec![k as i64],
                    insertions: vec![2; 3 * k as usize - 2],
                    last_class: pt.clone(),
                    psi_power: 0,
                },
            )
        })
        .collect()
}

/// Rational plane curves of degree `d` through `3d - 1` points, `d ≤ dmax`.
pub fn p2_counts(dmax: u32) -> Result<Vec<Rational>> {
    p2_counts_at(dmax, dmax, 3 * dmax.max(1) - 1)
}

fn quintic_h_invariant(out: &MirrorOutput, d: i64) -> Result<Rational> {
    let h = out.target.ring().basis_class(1);
    extract_invariant(
        out,
        &InvariantQuery {
            beta: vec![d],
            insertions: Vec::new(),
            last_class: h,
            psi_power: 0,
        },
    )
}

fn quintic() -> Result<TargetModel> {
    let ring_target = TargetModel::projective(4)?;
    ring_target.with_twist(vec![vec![5]])
}

/// `⟨H⟩_{0,1,1}` of the quintic threefold: the number of lines on it.
pub fn quintic_n1() -> Result<Rational> {
    let out = birkhoff(&big_i(&quintic()?, 2, 1)?)?;
    quintic_h_invariant(&flatten(&out)?, 1)
}

/// Degree-2 quintic invariant read in flat coordinates and, for contrast,
/// straight off the factorization with the mirror map left untransformed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuinticGuard {
    pub flat: Rational,
    pub identity_forced: Rational,
}

pub fn quintic_degree2_guard() -> Result<QuinticGuard> {
    let out = birkhoff(&big_i(&quintic()?, 2, 1)?)?;
    Ok(QuinticGuard {
        flat: quintic_h_invariant(&flatten(&out)?, 2)?,
        identity_forced: quintic_h_invariant(&out, 2)?,
    })
}

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::exactalg::rational::{format_rational, Rational};
use crate::exactalg::{Index, MultiSeries, Truncation, ZLaurent};
use crate::ifunction::{big_i, big_i_operator, euler_free_coefficient, small_i};
use crate::mirror::{birkhoff, flatten, p2_counts, quintic_n1};
use crate::oracles::{hypergeom_quintic, schubert_quintic_lines, wdvv_p2};
use crate::target::TargetModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    P2,
    Quintic,
    Identities,
    All,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub check: String,
    pub engine_value: String,
    pub oracle_value: String,
    pub pass: bool,
}

impl Check {
    fn new(check: &str, engine_value: String, oracle_value: String) -> Check {
        let pass = engine_value == oracle_value;
        Check {
            check: check.into(),
            engine_value,
            oracle_value,
            pass,
        }
    }

    fn exact(check: &str, engine: &Rational, oracle: &Rational) -> Check {
        Check::new(check, format_rational(engine), format_rational(oracle))
    }
}

/// SHA-256 of the canonical JSON form of a series' terms.
pub fn digest(s: &MultiSeries<ZLaurent>) -> String {
    let text = serde_json::to_string(&s.to_json()["terms"]).expect("series serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// `e^{t₁H/z} · Σ_β q^β e^{t₁ β(H)} I_β`: the big I-function restricted to
/// the first divisor insertion, built from the small one. Also returns that
/// restriction of `big_i`.
pub fn divisor_identity(
    t: &TargetModel,
    d: u32,
    tdeg: u32,
) -> Result<(MultiSeries<ZLaurent>, MultiSeries<ZLaurent>)> {
    let ring = t.ring();
    let s = ring.rank();
    let r = t.torus_rank();
    let trunc = Truncation { d, t: tdeg };
    let theta = t.theta().to_vec();
    let slot = ring.generators()[0];
    let h = ring.basis_class(slot);
    let mut e1 = vec![0u32; s];
    e1[slot] = 1;

    let mut x = MultiSeries::new(theta.clone(), s, trunc);
    x.add_term(Index::new(vec![0; r], e1.clone()), &ZLaurent::monomial(h, -1))?;
    let a = x.exp(ring)?;

    let small = small_i(t, d)?;
    let mut b = MultiSeries::new(theta.clone(), s, trunc);
    for (idx, ib) in small.series.terms() {
        let w = Rational::from_integer(t.pairings(&idx.beta)[0].into());
        let mut c = Rational::from_integer(1.into());
        for k in 0..=tdeg {
            let m: Vec<u32> = e1.iter().map(|&e| e * k).collect();
            b.add_term(Index::new(idx.beta.clone(), m), &ib.scale(&c))?;
            c = c * &w / Rational::from_integer((k + 1).into());
        }
    }
    let rhs = a.mul(ring, &b)?;

    let big = big_i(t, d, tdeg)?;
    let mut lhs = MultiSeries::new(theta, s, trunc);
    for (idx, v) in big.series.terms() {
        if idx.m.iter().enumerate().all(|(i, &k)| i == slot || k == 0) {
            lhs.add_term(idx.clone(), v)?;
        }
    }
    Ok((lhs, rhs))
}

fn p2_checks() -> Result<Vec<Check>> {
    let engine = p2_counts(4)?;
    let oracle = wdvv_p2(4);
    Ok(engine
        .iter()
        .zip(&oracle)
        .enumerate()
        .map(|(i, (e, o))| Check::exact(&format!("p2.N{}", i + 1), e, o))
        .collect())
}

fn quintic_checks() -> Result<Vec<Check>> {
    let mut out = vec![Check::exact(
        "quintic.lines",
        &quintic_n1()?,
        &schubert_quintic_lines()?,
    )];
    let q = TargetModel::bundled("p4_quintic")?;
    let small = small_i(&q, 2)?;
    let (i0, i1) = hypergeom_quintic(2);
    for d in 1..=2i64 {
        out.push(Check::exact(
            &format!("quintic.I0.d{d}"),
            &euler_free_coefficient(&small, &[d], 0, 0),
            &i0[d as usize],
        ));
    }
    out.push(Check::exact(
        "quintic.I1.d1",
        &euler_free_coefficient(&small, &[1], -1, 1),
        &i1[1],
    ));
    Ok(out)
}

fn contract(name: &str, t: &TargetModel, d: u32, tdeg: u32) -> Result<Check> {
    let out = birkhoff(&big_i(t, d, tdeg)?)?;
    let engine = match out.check_contract().and_then(|_| flatten(&out)?.check_contract()) {
        Ok(()) => "J = 1 + tau/z + O(z^-2)".to_string(),
        Err(e) => e.to_string(),
    };
    Ok(Check::new(name, engine, "J = 1 + tau/z + O(z^-2)".into()))
}

fn identity_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, n, d, tdeg) in [("paths.p1", 1, 3, 3), ("paths.p2", 2, 2, 4)] {
        let t = TargetModel::projective(n)?;
        out.push(Check::new(
            name,
            digest(&big_i(&t, d, tdeg)?.series),
            digest(&big_i_operator(&t, d, tdeg)?.series),
        ));
    }
    let p2 = TargetModel::projective(2)?;
    let (lhs, rhs) = divisor_identity(&p2, 3, 3)?;
    out.push(Check::new("divisor.p2", digest(&lhs), digest(&rhs)));

    for n in 1..=4 {
        let t = TargetModel::projective(n)?;
        let small = small_i(&t, 3)?;
        let top = small
            .series
            .terms()
            .filter(|(idx, _)| !idx.is_zero())
            .filter_map(|(_, v)| v.max_exponent())
            .max();
        out.push(Check {
            check: format!("fano.p{n}.decay"),
            engine_value: format!("max z-power {}", top.map_or("none".into(), |e| e.to_string())),
            oracle_value: "max z-power at most -2".into(),
            pass: top.is_some_and(|e| e <= -2),
        });
        let j = birkhoff(&big_i(&t, 3, 1)?)?.j.t_zero_slice();
        out.push(Check::new(
            &format!("fano.p{n}.birkhoff"),
            digest(&j),
            digest(&small.series),
        ));
    }

    out.push(contract("contract.p2", &p2, 2, 3)?);
    out.push(contract("contract.p1xp1", &TargetModel::bundled("p1xp1")?, 2, 2)?);
    out.push(contract("contract.quintic", &TargetModel::bundled("p4_quintic")?, 2, 1)?);
    Ok(out)
}

/// Runs a verification suite; checks come back in a fixed order.
pub fn run_suite(suite: Suite) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::P2 | Suite::All) {
        out.extend(p2_checks()?);
    }
    if matches!(suite, Suite::Quintic | Suite::All) {
        out.extend(quintic_checks()?);
    }
    if matches!(suite, Suite::Identities | Suite::All) {
        out.extend(identity_checks()?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_identity_small() {
        let p1 = TargetModel::projective(1).unwrap();
        let (lhs, rhs) = divisor_identity(&p1, 2, 2).unwrap();
        assert!(lhs.len() > 3);
        assert_eq!(digest(&lhs), digest(&rhs));
    }

    #[test]
    fn quintic_suite() {
        let checks = run_suite(Suite::Quintic).unwrap();
        assert_eq!(checks.len(), 4);
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
        assert_eq!(checks[0].engine_value, "2875");
    }
}

//! Independent ground truth: Kontsevich's recursion for plane curves, direct
//! hypergeometric expansion for the quintic, and Schubert calculus on
//! Grassmannians of planes.
//!
//! Nothing here touches the I-function or mirror layers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::assets::bundled;
use crate::error::{Error, Result};
use crate::exactalg::rational::{binomial, factorial, format_rational, Rational};
use crate::exactalg::{ring_from_table, CohClass, CohRing, RingTable};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub name: String,
    pub inputs: BTreeMap<String, String>,
    #[serde(serialize_with = "rationals_as_strings")]
    pub values: Vec<Rational>,
    pub note: String,
}

fn rationals_as_strings<S: serde::Serializer>(
    v: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

/// `N_1, …, N_dmax`: rational plane curves of degree `d` through `3d - 1`
/// general points.
pub fn wdvv_p2(dmax: u32) -> Vec<Rational> {
    let mut n: Vec<BigInt> = vec![BigInt::zero()];
    for d in 1..=dmax as u64 {
        if d == 1 {
            n.push(BigInt::one());
            continue;
        }
        let mut acc = BigInt::zero();
        for d1 in 1..d {
            let d2 = d - d1;
            let a = BigInt::from(d1 * d1 * d2 * d2) * binomial(3 * d - 4, 3 * d1 - 2);
            let b = BigInt::from(d1 * d1 * d1 * d2) * binomial(3 * d - 4, 3 * d1 - 1);
            acc += &n[d1 as usize] * &n[d2 as usize] * (a - b);
        }
        n.push(acc);
    }
    n.into_iter().skip(1).map(Rational::from_integer).collect()
}

/// Coefficients of `1` and `H/z` in the quintic's `H⁰`-normalized small
/// I-function, `d = 0..=dmax`.
pub fn hypergeom_quintic(dmax: u32) -> (Vec<Rational>, Vec<Rational>) {
    let mut i0 = Vec::new();
    let mut i1 = Vec::new();
    for d in 0..=dmax as u64 {
        let c = Rational::new(factorial(5 * d), factorial(d).pow(5));
        let harmonic: Rational = (d + 1..=5 * d)
            .map(|k| Rational::new(5.into(), k.into()))
            .sum();
        i1.push(&c * harmonic);
        i0.push(c);
    }
    (i0, i1)
}

/// Term order used when rewriting a symmetric polynomial in `x, y` through
/// `e1 = x + y`, `e2 = xy`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeadOrder {
    XFirst,
    YFirst,
}

/// Polynomial in two Chern roots, keyed by `(x-exponent, y-exponent)`.
pub type Biv = BTreeMap<(u32, u32), Rational>;

fn biv_mul(a: &Biv, b: &Biv) -> Biv {
    let mut out = Biv::new();
    for ((i, j), x) in a {
        for ((k, l), y) in b {
            let e = out.entry((i + k, j + l)).or_insert_with(Rational::zero);
            *e += x * y;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn e_monomial(p: u32, q: u32) -> Biv {
    let mut e1 = Biv::new();
    e1.insert((1, 0), Rational::one());
    e1.insert((0, 1), Rational::one());
    let mut out = Biv::new();
    out.insert((q, q), Rational::one());
    for _ in 0..p {
        out = biv_mul(&out, &e1);
    }
    out
}

/// `∏_{i=skip}^{k-skip} (i·x + (k−i)·y)`. With `skip = 0` this is the top
/// Chern class of `Sym^k` of a rank-2 bundle with Chern roots `x, y`.
pub fn sym_chern_product(k: u32, skip: u32) -> Biv {
    let mut out = Biv::new();
    out.insert((0, 0), Rational::one());
    for i in skip..=k.saturating_sub(skip) {
        let mut f = Biv::new();
        for (key, c) in [((1, 0), i), ((0, 1), k - i)] {
            if c != 0 {
                f.insert(key, Rational::from_integer(c.into()));
            }
        }
        out = biv_mul(&out, &f);
    }
    out
}

/// Rewrites a symmetric `p(x, y)` as `Σ c_{ab} e1^a e2^b`.
pub fn to_elementary(p: &Biv, order: LeadOrder) -> Result<BTreeMap<(u32, u32), Rational>> {
    let mut rest = p.clone();
    let mut out = BTreeMap::new();
    while let Some(((a, b), c)) = match order {
        LeadOrder::XFirst => rest.iter().next_back().map(|(k, v)| (*k, v.clone())),
        LeadOrder::YFirst => rest
            .iter()
            .max_by_key(|((a, b), _)| (*b, *a))
            .map(|(k, v)| (*k, v.clone())),
    } {
        let (hi, lo) = match order {
            LeadOrder::XFirst => (a, b),
            LeadOrder::YFirst => (b, a),
        };
        if hi < lo {
            return Err(Error::InvalidArgument(format!(
                "polynomial is not symmetric: leading monomial x^{a} y^{b}"
            )));
        }
        for (key, v) in e_monomial(hi - lo, lo) {
            let e = rest.entry(key).or_insert_with(Rational::zero);
            *e -= &c * v;
            if e.is_zero() {
                rest.remove(&key);
            }
        }
        out.insert((hi - lo, lo), c);
    }
    Ok(out)
}

/// Loads a bundled Schubert ring table (`"g25.ring"`, `"g24.ring"`).
pub fn grassmannian_ring(name: &str) -> Result<CohRing> {
    let doc = bundled(name)
        .ok_or_else(|| Error::Configuration(format!("ring table {name:?} is not bundled")))?;
    let table: RingTable = serde_json::from_str(doc)
        .map_err(|e| Error::Configuration(format!("ring table {name:?}: {e}")))?;
    ring_from_table(&table)
}

fn eval_elementary(ring: &CohRing, e: &BTreeMap<(u32, u32), Rational>) -> Result<CohClass> {
    let class = |label: &str| {
        ring.index_of(label)
            .map(|i| ring.basis_class(i))
            .ok_or_else(|| Error::Configuration(format!("ring has no class {label:?}")))
    };
    let s1 = class("s1")?;
    let s11 = class("s11")?;
    let mut out = ring.zero();
    for ((a, b), c) in e {
        let m = ring.mul(&ring.pow(&s1, *a), &ring.pow(&s11, *b))?;
        out.add_scaled(&m, c);
    }
    Ok(out)
}

/// `∫ e(Sym^k S^∨)` over a Grassmannian of planes, via `c1(S^∨) = σ_1`,
/// `c2(S^∨) = σ_{1,1}`. `skip` drops that many Chern-root factors from
/// each end. Both term orders are run and must agree.
pub fn schubert_sym_integral(ring: &CohRing, k: u32, skip: u32) -> Result<Rational> {
    let p = sym_chern_product(k, skip);
    let ex = to_elementary(&p, LeadOrder::XFirst)?;
    let ey = to_elementary(&p, LeadOrder::YFirst)?;
    if ex != ey {
        return Err(Error::InternalInconsistency(
            "elementary expansions differ between term orders".into(),
        ));
    }
    ring.integrate(&eval_elementary(ring, &ex)?)
}

/// Lines on a general quintic threefold.
pub fn schubert_quintic_lines() -> Result<Rational> {
    schubert_sym_integral(&grassmannian_ring("g25.ring")?, 5, 0)
}

/// Lines on a smooth cubic surface.
pub fn cubic_surface_lines() -> Result<Rational> {
    schubert_sym_integral(&grassmannian_ring("g24.ring")?, 3, 0)
}

pub fn wdvv_report(dmax: u32) -> OracleReport {
    OracleReport {
        name: "wdvv_p2".into(),
        inputs: BTreeMap::from([("dmax".into(), dmax.to_string())]),
        values: wdvv_p2(dmax),
        note: "Kontsevich recursion with exact binomials".into(),
    }
}

pub fn hypergeom_report(dmax: u32) -> OracleReport {
    let (i0, i1) = hypergeom_quintic(dmax);
    OracleReport {
        name: "hypergeom_quintic".into(),
        inputs: BTreeMap::from([("dmax".into(), dmax.to_string())]),
        values: i0.into_iter().chain(i1).collect(),
        note: "(5d)!/(d!)^5 for d = 0..dmax, then the same times 5·Σ_{k=d+1}^{5d} 1/k".into(),
    }
}

pub fn schubert_report() -> Result<OracleReport> {
    Ok(OracleReport {
        name: "schubert".into(),
        inputs: BTreeMap::from([
            ("g25.ring".into(), "Sym^5".into()),
            ("g24.ring".into(), "Sym^3".into()),
        ]),
        values: vec![schubert_quintic_lines()?, cubic_surface_lines()?],
        note: "Chern roots rewritten in σ_1, σ_{1,1}, integrated in the Schubert basis".into(),
    })
}

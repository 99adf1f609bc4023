//! Birkhoff factorization of big I-functions into the mirror map and the
//! genus-zero J-function, flat coordinates, and invariant extraction.

mod birkhoff;
mod extract;
mod flat;

pub use birkhoff::birkhoff;
pub use extract::{
    extract_invariant, p2_counts, quintic_degree2_guard, quintic_n1, virtual_dimension_ok,
    InvariantQuery, QuinticGuard,
};
pub use flat::{change_novikov, flatten, invert_mirror};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::rational::format_rational;
use crate::exactalg::{CohClass, Index, MultiSeries, ZLaurent};
use crate::target::TargetModel;

/// Which coordinates a [`MirrorOutput`] is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinates {
    /// Straight out of the factorization: `J(t, q) = J_GW(τ(t, q); q)`.
    Mirror,
    /// After inverting the mirror map: `τ = Σ t_i γ_i` exactly.
    Flat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorStep {
    pub theta_degree: String,
    pub insertion_degree: u32,
    pub indices: usize,
    /// z-coefficients cancelled at this order.
    pub cleared: usize,
    /// Largest z-power cancelled, if any.
    pub max_power: Option<i32>,
}

#[derive(Clone, Debug)]
pub struct MirrorOutput {
    pub target: TargetModel,
    pub coordinates: Coordinates,
    pub tau: MultiSeries<CohClass>,
    /// For twisted targets this is the Euler-free series; pair with
    /// [`MirrorOutput::euler`] inserted.
    pub j: MultiSeries<ZLaurent>,
    pub euler: Option<CohClass>,
    pub factor_log: Vec<FactorStep>,
}

impl MirrorOutput {
    /// `⟨a, b⟩`, with `e(E)` inserted for twisted targets.
    pub fn pairing(&self, a: &CohClass, b: &CohClass) -> Result<crate::exactalg::Rational> {
        let ring = self.target.ring();
        let ab = ring.mul(a, b)?;
        match &self.euler {
            Some(e) => ring.integrate(&ring.mul(&ab, e)?),
            None => ring.integrate(&ab),
        }
    }

    /// Verifies `J = 1 + τ/z + O(z^{-2})` and `τ = Σ t_i γ_i + O(q)`.
    pub fn check_contract(&self) -> Result<()> {
        let ring = self.target.ring();
        let s = ring.rank();
        let r = self.target.torus_rank();
        let fail = |m: String| Err(Error::InternalInconsistency(m));
        let zero = Index::zero(r, s);
        for (idx, v) in self.j.terms() {
            if v.max_exponent().is_some_and(|e| e > 0) {
                return fail(format!("J has a positive z-power at {idx:?}"));
            }
            let c0 = v.coeff(0);
            let want = if *idx == zero { ring.unit() } else { ring.zero() };
            if c0 != want {
                return fail(format!("J has a wrong z^0 part at {idx:?}"));
            }
            let tau = self.tau.get(idx).cloned().unwrap_or_else(|| ring.zero());
            if v.coeff(-1) != tau {
                return fail(format!("τ differs from the z^-1 part of J at {idx:?}"));
            }
        }
        if self.j.get(&zero).is_none() {
            return fail("J has no constant term".into());
        }
        for (idx, c) in self.tau.terms() {
            if idx.beta.iter().any(|&b| b != 0) {
                continue;
            }
            let want = match idx.m.iter().position(|&x| x == 1) {
                Some(i) if idx.insertion_degree() == 1 => ring.basis_class(i),
                _ => ring.zero(),
            };
            if *c != want {
                return fail(format!("τ at q^0 differs from Σ t_i γ_i at {idx:?}"));
            }
        }
        if self.j.truncation().t >= 1 {
            for i in 0..s {
                let mut m = vec![0; s];
                m[i] = 1;
                if self.tau.get(&Index::new(vec![0; r], m)) != Some(&ring.basis_class(i)) {
                    return fail(format!("τ is missing t_{i} γ_{i} at q^0"));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "target": self.target.name(),
            "coordinates": self.coordinates,
            "tau": self.tau.to_json_with(|c| serde_json::json!(c.to_strings())),
            "J": self.j.to_json(),
            "euler_class": self.euler.as_ref().map(|e| e.to_strings()),
            "factor_log": self.factor_log,
            "basis": self.target.ring().basis().iter().map(|b| b.label.clone()).collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn fmt_q(x: &crate::exactalg::Rational) -> String {
    format_rational(x)
}

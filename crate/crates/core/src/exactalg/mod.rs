//! Exact arithmetic substrate: rationals, linear algebra, cohomology rings,
//! z-Laurent polynomials and truncated multi-graded series.

pub mod laurent;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod ring;
pub mod series;

pub use laurent::ZLaurent;
pub use poly::DivisorPoly;
pub use rational::{format_rational, parse_rational, Rational};
pub use ring::{ring_from_table, ring_product, ring_projective, CohClass, CohRing, RingTable};
pub use series::{Index, MultiSeries, Truncation};

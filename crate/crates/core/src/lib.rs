//! Exact decision procedures for principal pairs, conormal cones and
//! perfectoid towers over finitely presented algebras.

pub mod algebra;
pub mod coeff;
pub mod consequences;
pub mod corpus;
pub mod error;
pub mod groebner;
pub mod ideal;
pub mod monomial;
pub mod parse;
pub mod pairs;
pub mod par;
pub mod poly;
pub mod report;
pub mod ring;
pub mod tilt;
pub mod tower;

pub use algebra::{AlgebraMap, PresentedAlgebra};
pub use coeff::CoefficientRing;
pub use error::{Error, Result};
pub use monomial::{Monomial, MonomialOrder};
pub use ideal::Ideal;
pub use pairs::PrincipalPair;
pub use poly::Polynomial;
pub use report::{ConditionReport, Verdict};
pub use ring::PolyRing;
pub use tower::{Tower, ZariskianSemantics};

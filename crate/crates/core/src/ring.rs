use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::coeff::CoefficientRing;
use crate::error::{Error, Result};
use crate::parse::parse_polynomial;
use crate::poly::Polynomial;

/// An ambient polynomial ring `C[x_1, ..., x_k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    coeffs: CoefficientRing,
    vars: Vec<String>,
}

impl PolyRing {
    pub fn new(coeffs: CoefficientRing, vars: Vec<String>) -> Result<Arc<Self>> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::AmbientMismatch(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Arc::new(PolyRing { coeffs, vars }))
    }

    /// Convenience constructor from string slices; panics on duplicates.
    pub fn with_vars(coeffs: CoefficientRing, vars: &[&str]) -> Arc<Self> {
        PolyRing::new(coeffs, vars.iter().map(|s| s.to_string()).collect()).expect("distinct variables")
    }

    pub fn coeffs(&self) -> &CoefficientRing {
        &self.coeffs
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.nvars(), i)
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.nvars())
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.nvars())
    }

    pub fn constant(&self, c: impl Into<BigInt>) -> Polynomial {
        self.normalize(&Polynomial::constant(self.nvars(), c))
    }

    pub fn parse(&self, src: &str) -> Result<Polynomial> {
        Ok(self.normalize(&parse_polynomial(src, &self.vars)?))
    }

    /// Reduces coefficients into the canonical range of the coefficient ring.
    pub fn normalize(&self, p: &Polynomial) -> Polynomial {
        match self.coeffs.modulus() {
            Some(m) => p.reduce_mod(&m),
            None => p.clone(),
        }
    }

    pub fn render(&self, p: &Polynomial) -> String {
        p.render(&self.vars)
    }

    pub fn check(&self, p: &Polynomial) -> Result<()> {
        if p.nvars() != self.nvars() {
            return Err(Error::AmbientMismatch(format!(
                "polynomial has {} variables, ring {} has {}",
                p.nvars(),
                self,
                self.nvars()
            )));
        }
        Ok(())
    }

    /// The same coefficients with `extra` variables placed before the existing ones.
    pub fn prepend(&self, extra: &[String]) -> Arc<PolyRing> {
        let mut vars: Vec<String> = extra.to_vec();
        for v in &self.vars {
            let mut name = v.clone();
            while vars.contains(&name) {
                name.push('\'');
            }
            vars.push(name);
        }
        Arc::new(PolyRing { coeffs: self.coeffs.clone(), vars })
    }

    /// The same coefficients with `extra` variables placed after the existing ones;
    /// clashing new names get a trailing `'`.
    pub fn append(&self, extra: &[String]) -> Arc<PolyRing> {
        let mut vars = self.vars.clone();
        for v in extra {
            let mut name = v.clone();
            while vars.contains(&name) {
                name.push('\'');
            }
            vars.push(name);
        }
        Arc::new(PolyRing { coeffs: self.coeffs.clone(), vars })
    }

    /// Moves a polynomial of this ring into `append(extra)` for any `extra` of length `k`.
    pub fn widen(&self, p: &Polynomial, k: usize) -> Polynomial {
        let pos: Vec<usize> = (0..self.nvars()).collect();
        p.embed(&pos, self.nvars() + k)
    }

    /// Same variables over another coefficient ring.
    pub fn with_coeffs(&self, coeffs: CoefficientRing) -> Arc<PolyRing> {
        Arc::new(PolyRing { coeffs, vars: self.vars.clone() })
    }

    /// Drops the first `k` variables.
    pub fn drop_front(&self, k: usize) -> Arc<PolyRing> {
        Arc::new(PolyRing { coeffs: self.coeffs.clone(), vars: self.vars[k..].to_vec() })
    }

    /// Moves a polynomial of this ring into `prepend(extra)` with `extra.len() == k`.
    pub fn shift(&self, p: &Polynomial, k: usize) -> Polynomial {
        let pos: Vec<usize> = (k..k + self.nvars()).collect();
        p.embed(&pos, k + self.nvars())
    }

    /// A fresh variable name not clashing with this ring's variables.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.vars.contains(&name) {
            name.push('_');
        }
        name
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.coeffs, self.vars.join(","))
    }
}

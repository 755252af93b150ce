//! Exact coefficient arithmetic: declared parameter symbols, sparse
//! multivariate rationals over them, and the numeric-mode bridge.
//!
//! Transcendental constants such as `E = e^{b^2}` are modelled as independent
//! symbols; every identity verified here is rational in them, and the defining
//! relation is used only when specializing to floats.

mod multipoly;
mod parse;
mod sample;
mod scalar;

pub use multipoly::{content_in, poly_gcd, Monomial, MultiPoly};
pub use parse::{parse_scalar, parse_xpoly, ParseError};
pub use sample::random_rational_sample;
pub use scalar::{RatFn, Scalar};

use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed exact and numeric operands")]
    ModeMismatch,
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("denominator vanishes at the given point")]
    VanishingDenominator,
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("binding for `{sym}` is inconsistent with exp(c^2) = {expected}")]
    InconsistentExpBinding { sym: String, expected: f64 },
}

/// Declared parameter symbols of a computation, with the extra structure the
/// samplers and the numeric mode need: which symbols abbreviate `exp(c^2)`,
/// which must stay nonzero, and which pairs must stay distinct.
#[derive(Clone, Debug)]
pub struct ParamContext {
    symbols: Vec<String>,
    exp_defs: BTreeMap<u32, MultiPoly>,
    nonzero: BTreeSet<u32>,
    distinct: Vec<(u32, u32)>,
    numeric: Option<Vec<f64>>,
}

impl ParamContext {
    pub fn new(symbols: &[&str]) -> Result<Self, FieldError> {
        let mut seen = BTreeSet::new();
        for s in symbols {
            if !seen.insert(s.to_string()) {
                return Err(FieldError::DuplicateSymbol(s.to_string()));
            }
        }
        Ok(ParamContext {
            symbols: symbols.iter().map(|s| s.to_string()).collect(),
            exp_defs: BTreeMap::new(),
            nonzero: BTreeSet::new(),
            distinct: Vec::new(),
            numeric: None,
        })
    }

    /// Declares `sym` to stand for `exp(shift^2)`; `shift` is a polynomial in
    /// the other symbols (linear in practice).
    pub fn with_exp_def(mut self, sym: &str, shift: MultiPoly) -> Result<Self, FieldError> {
        let v = self
            .index_of(sym)
            .ok_or_else(|| FieldError::UnknownSymbol(sym.to_string()))?;
        self.exp_defs.insert(v, shift);
        Ok(self)
    }

    pub fn with_nonzero(mut self, syms: &[&str]) -> Result<Self, FieldError> {
        for s in syms {
            let v = self
                .index_of(s)
                .ok_or_else(|| FieldError::UnknownSymbol(s.to_string()))?;
            self.nonzero.insert(v);
        }
        Ok(self)
    }

    pub fn with_distinct(mut self, s1: &str, s2: &str) -> Result<Self, FieldError> {
        let v1 = self
            .index_of(s1)
            .ok_or_else(|| FieldError::UnknownSymbol(s1.to_string()))?;
        let v2 = self
            .index_of(s2)
            .ok_or_else(|| FieldError::UnknownSymbol(s2.to_string()))?;
        self.distinct.push((v1, v2));
        Ok(self)
    }

    pub fn num_symbols(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(|s| s.as_str())
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.symbols.iter().position(|s| s == name).map(|i| i as u32)
    }

    pub fn name(&self, v: u32) -> &str {
        &self.symbols[v as usize]
    }

    /// The symbol as a field element; `None` for undeclared names.
    pub fn scalar(&self, name: &str) -> Option<Scalar> {
        self.index_of(name).map(Scalar::var)
    }

    pub fn exp_defs(&self) -> impl Iterator<Item = (u32, &MultiPoly)> {
        self.exp_defs.iter().map(|(&v, p)| (v, p))
    }

    pub fn exp_def_of(&self, v: u32) -> Option<&MultiPoly> {
        self.exp_defs.get(&v)
    }

    /// Looks up the symbol defined as `exp(shift^2)` for the given shift.
    pub fn exp_symbol_for(&self, shift: &MultiPoly) -> Option<u32> {
        self.exp_defs
            .iter()
            .find(|(_, def)| *def == shift)
            .map(|(&v, _)| v)
    }

    pub fn is_exp_symbol(&self, v: u32) -> bool {
        self.exp_defs.contains_key(&v)
    }

    pub fn nonzero_symbols(&self) -> impl Iterator<Item = u32> + '_ {
        self.nonzero.iter().copied()
    }

    pub fn distinct_pairs(&self) -> &[(u32, u32)] {
        &self.distinct
    }

    /// Binds base symbols to floats and derives the `exp(c^2)` symbols from
    /// their definitions. Explicit bindings for derived symbols are accepted
    /// only when consistent.
    pub fn bind(&self, bindings: &[(String, f64)]) -> Result<Self, FieldError> {
        let mut values: Vec<Option<f64>> = vec![None; self.symbols.len()];
        for (name, v) in bindings {
            let idx = self
                .index_of(name)
                .ok_or_else(|| FieldError::UnknownSymbol(name.clone()))?;
            values[idx as usize] = Some(*v);
        }
        // Base symbols first, then the derived exponentials.
        for (i, slot) in values.iter().enumerate() {
            if slot.is_none() && !self.exp_defs.contains_key(&(i as u32)) {
                return Err(FieldError::UnboundSymbol(self.symbols[i].clone()));
            }
        }
        let base: Vec<f64> = values.iter().map(|v| v.unwrap_or(0.0)).collect();
        for (&v, shift) in &self.exp_defs {
            let c = shift.eval_f64(&|w| base[w as usize]);
            let expected = (c * c).exp();
            match values[v as usize] {
                None => values[v as usize] = Some(expected),
                Some(given) => {
                    if (given - expected).abs() > 1e-9 * expected.abs().max(1.0) {
                        return Err(FieldError::InconsistentExpBinding {
                            sym: self.symbols[v as usize].clone(),
                            expected,
                        });
                    }
                }
            }
        }
        let mut out = self.clone();
        out.numeric = Some(values.into_iter().map(|v| v.unwrap()).collect());
        Ok(out)
    }

    pub fn is_bound(&self) -> bool {
        self.numeric.is_some()
    }

    pub fn numeric_value(&self, v: u32) -> Result<f64, FieldError> {
        self.numeric
            .as_ref()
            .and_then(|vals| vals.get(v as usize).copied())
            .ok_or_else(|| FieldError::UnboundSymbol(self.name(v).to_string()))
    }

    /// Rational assignment as an evaluation helper, checking the declared
    /// nonzero/distinct constraints.
    pub fn assignment_admissible(&self, values: &[BigRational]) -> bool {
        use num_traits::Zero;
        for &v in &self.nonzero {
            if values[v as usize].is_zero() {
                return false;
            }
        }
        for &(v1, v2) in &self.distinct {
            if values[v1 as usize] == values[v2 as usize] {
                return false;
            }
        }
        true
    }

    /// Converts a rational assignment into float bindings (used when a
    /// sampled point is carried into numeric mode).
    pub fn bind_rational(&self, values: &[BigRational]) -> Result<Self, FieldError> {
        let bindings: Vec<(String, f64)> = self
            .symbols
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.exp_defs.contains_key(&(*i as u32)))
            .map(|(i, s)| (s.clone(), values[i].to_f64().unwrap_or(f64::NAN)))
            .collect();
        self.bind(&bindings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bind_derives_exp_symbols() {
        // E bound with b = 1 specializes to e^{1^2} = e.
        let ctx = ParamContext::new(&["a", "b", "E"])
            .unwrap()
            .with_exp_def("E", MultiPoly::var(1))
            .unwrap();
        let bound = ctx
            .bind(&[("a".into(), 2.0), ("b".into(), 1.0)])
            .unwrap();
        let e = bound.numeric_value(2).unwrap();
        assert!((e - std::f64::consts::E).abs() < 1e-12);

        let s = Scalar::var(2);
        assert!((s.specialize(&bound).unwrap() - 2.718281828).abs() < 1e-8);
    }

    #[test]
    fn specialize_constants_and_products() {
        let ctx = ParamContext::new(&["a", "b"]).unwrap();
        let bound = ctx.bind(&[("a".into(), 2.0), ("b".into(), 3.0)]).unwrap();
        assert_eq!(Scalar::ratio(3, 4).specialize(&bound).unwrap(), 0.75);
        let ab = Scalar::var(0).checked_mul(&Scalar::var(1)).unwrap();
        assert_eq!(ab.specialize(&bound).unwrap(), 6.0);
    }

    #[test]
    fn unbound_symbol_is_an_error() {
        let ctx = ParamContext::new(&["a", "b"]).unwrap();
        assert!(matches!(
            ctx.bind(&[("a".into(), 1.0)]),
            Err(FieldError::UnboundSymbol(_))
        ));
        let unbound = Scalar::var(0).specialize(&ctx);
        assert!(matches!(unbound, Err(FieldError::UnboundSymbol(_))));
    }
}

//! Frequency-tagged sums `sum_phi e^{phi x} A_phi(x)` with polynomial-matrix
//! parts. Nonzero frequencies are what witness that a conjugated operator
//! left the polynomial algebra.

use super::{MatError, PolyMatrix, XPoly};
use crate::field::{ParamContext, Scalar};
use std::collections::BTreeMap;

/// Sum of `e^{phi x} A_phi(x)` terms keyed by frequency. The zero frequency
/// part is always present (possibly zero); other parts are nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpPolyMatrix {
    size: usize,
    parts: BTreeMap<Scalar, PolyMatrix>,
}

impl ExpPolyMatrix {
    pub fn zero(size: usize) -> Self {
        let mut parts = BTreeMap::new();
        parts.insert(Scalar::zero(), PolyMatrix::zero(size));
        ExpPolyMatrix { size, parts }
    }

    pub fn from_poly(m: PolyMatrix) -> Self {
        let size = m.size();
        let mut parts = BTreeMap::new();
        parts.insert(Scalar::zero(), m);
        ExpPolyMatrix { size, parts }
    }

    pub fn from_parts(
        size: usize,
        parts: impl IntoIterator<Item = (Scalar, PolyMatrix)>,
    ) -> Result<Self, MatError> {
        let mut out = Self::zero(size);
        for (freq, m) in parts {
            out.accumulate(freq, m)?;
        }
        Ok(out)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Scalar, &PolyMatrix)> {
        self.parts.iter()
    }

    pub fn frequency_zero(&self) -> &PolyMatrix {
        self.parts.get(&Scalar::zero()).expect("always present")
    }

    pub fn part(&self, freq: &Scalar) -> Option<&PolyMatrix> {
        self.parts.get(freq)
    }

    pub fn nonzero_frequencies(&self) -> Vec<Scalar> {
        self.parts
            .keys()
            .filter(|f| !f.is_zero())
            .cloned()
            .collect()
    }

    /// True when only the zero-frequency part is present.
    pub fn is_polynomial(&self) -> bool {
        self.parts.keys().all(|f| f.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.parts.values().all(|m| m.is_zero())
    }

    fn accumulate(&mut self, freq: Scalar, m: PolyMatrix) -> Result<(), MatError> {
        if m.is_zero() {
            return Ok(());
        }
        // All zero frequencies share the canonical key, whatever their mode.
        let freq = if freq.is_zero() { Scalar::zero() } else { freq };
        if let Scalar::Numeric(v) = &freq {
            for existing in self.parts.keys() {
                let w = match existing {
                    Scalar::Numeric(w) => *w,
                    s if s.is_zero() => 0.0,
                    _ => continue,
                };
                if (v - w).abs() < 1e-9 && freq != *existing {
                    return Err(MatError::FrequenciesTooClose);
                }
            }
        }
        let entry = self
            .parts
            .entry(freq.clone())
            .or_insert_with(|| PolyMatrix::zero(self.size));
        *entry = entry.add(&m);
        if entry.is_zero() && !freq.is_zero() {
            self.parts.remove(&freq);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (f, m) in &other.parts {
            out.accumulate(f.clone(), m.clone())
                .expect("frequency separation");
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ExpPolyMatrix {
            size: self.size,
            parts: self.parts.iter().map(|(f, m)| (f.clone(), m.neg())).collect(),
        }
    }

    /// Product: frequencies add, polynomial parts multiply.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.size);
        for (fa, ma) in &self.parts {
            for (fb, mb) in &other.parts {
                let prod = ma.mul(mb);
                out.accumulate(add_freq(fa, fb), prod)
                    .expect("frequency separation");
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.size);
        for (f, m) in &self.parts {
            out.accumulate(f.clone(), m.scale(c))
                .expect("frequency separation");
        }
        out
    }

    /// Mode-preserving multiplication by a small integer.
    pub fn scale_nat(&self, k: u64) -> Self {
        let mut out = Self::zero(self.size);
        for (f, m) in &self.parts {
            out.accumulate(f.clone(), m.scale_nat(k))
                .expect("frequency separation");
        }
        out
    }

    /// d/dx of `e^{phi x} A` is `e^{phi x} (phi A + A')`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(self.size);
        for (f, m) in &self.parts {
            let part = if f.is_zero() {
                m.derivative()
            } else {
                m.scale(f).add(&m.derivative())
            };
            out.accumulate(f.clone(), part).expect("frequency separation");
        }
        out
    }

    pub fn transpose(&self) -> Self {
        ExpPolyMatrix {
            size: self.size,
            parts: self
                .parts
                .iter()
                .map(|(f, m)| (f.clone(), m.transpose()))
                .collect(),
        }
    }

    /// The polynomial part when no exponential terms remain.
    pub fn try_into_polynomial(&self) -> Option<PolyMatrix> {
        if self.is_polynomial() {
            Some(self.frequency_zero().clone())
        } else {
            None
        }
    }

    /// Largest absolute coefficient across all parts (numeric mode).
    pub fn max_abs_numeric(&self) -> Option<f64> {
        let mut best: f64 = 0.0;
        for m in self.parts.values() {
            for r in 0..m.size() {
                for c in 0..m.size() {
                    for coeff in m.get(r, c).coeffs() {
                        best = best.max(coeff.abs_numeric()?);
                    }
                }
            }
        }
        Some(best)
    }

    pub fn render(&self, ctx: &ParamContext) -> Vec<(String, Vec<Vec<String>>)> {
        self.parts
            .iter()
            .map(|(f, m)| (f.render(ctx), m.render(ctx)))
            .collect()
    }
}

/// Frequency addition tolerant of the canonical zero key, whose mode may
/// differ from the other operand's.
fn add_freq(a: &Scalar, b: &Scalar) -> Scalar {
    if a.is_zero() {
        b.clone()
    } else if b.is_zero() {
        a.clone()
    } else {
        a + b
    }
}

/// Diagonal matrix of pure exponentials `diag(e^{phi_i x})`.
pub fn diag_exp(freqs: &[Scalar]) -> ExpPolyMatrix {
    let size = freqs.len();
    let mut out = ExpPolyMatrix::zero(size);
    for (i, f) in freqs.iter().enumerate() {
        let mut unit = PolyMatrix::zero(size);
        unit.set(i, i, XPoly::one());
        out.accumulate(f.clone(), unit).expect("distinct diagonal");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_b() -> Scalar {
        Scalar::var(1).mul_nat(2)
    }

    #[test]
    fn exp_derivative_chain_rule() {
        // d/dx (e^{2bx} I) = e^{2bx} (2b I)
        let m = ExpPolyMatrix::from_parts(2, [(two_b(), PolyMatrix::identity(2))]).unwrap();
        let d = m.derivative();
        let part = d.part(&two_b()).unwrap();
        assert_eq!(part, &PolyMatrix::scalar_identity(2, two_b()));
    }

    #[test]
    fn frequencies_cancel_in_products() {
        // (e^{2bx} A)(e^{-2bx} B) lands at frequency 0 with part AB.
        let a = PolyMatrix::from_rows(vec![
            vec![XPoly::x(), XPoly::one()],
            vec![XPoly::zero(), XPoly::one()],
        ])
        .unwrap();
        let b = PolyMatrix::from_rows(vec![
            vec![XPoly::one(), XPoly::zero()],
            vec![XPoly::x(), XPoly::one()],
        ])
        .unwrap();
        let lhs = ExpPolyMatrix::from_parts(2, [(two_b(), a.clone())]).unwrap();
        let rhs = ExpPolyMatrix::from_parts(2, [(two_b().neg(), b.clone())]).unwrap();
        let prod = lhs.mul(&rhs);
        assert!(prod.is_polynomial());
        assert_eq!(prod.frequency_zero(), &a.mul(&b));
    }

    #[test]
    fn polynomial_only_matches_polymatrix() {
        let a = PolyMatrix::from_rows(vec![
            vec![XPoly::x().pow(2), XPoly::one()],
            vec![XPoly::zero(), XPoly::x()],
        ])
        .unwrap();
        let m = ExpPolyMatrix::from_poly(a.clone());
        assert_eq!(m.derivative().frequency_zero(), &a.derivative());
        assert!(m.derivative().is_polynomial());
    }

    #[test]
    fn numeric_frequency_guard() {
        let a = PolyMatrix::identity(1);
        let res = ExpPolyMatrix::from_parts(
            1,
            [
                (Scalar::numeric(1.0), a.clone()),
                (Scalar::numeric(1.0 + 1e-10), a),
            ],
        );
        assert!(matches!(res, Err(MatError::FrequenciesTooClose)));
    }
}

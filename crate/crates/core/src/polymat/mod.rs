//! Univariate polynomials in `x` over [`Scalar`], square matrices of them,
//! and exponential-polynomial matrices (frequency-tagged sums).

mod exp;

pub use exp::ExpPolyMatrix;

use crate::field::{ParamContext, Scalar};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MatError {
    #[error("matrix size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("matrix is not unimodular: determinant is {0}")]
    NotUnimodular(String),
    #[error("numeric frequencies closer than 1e-9 cannot be separated")]
    FrequenciesTooClose,
    #[error("malformed matrix: expected {expected} columns, row has {got}")]
    RaggedRows { expected: usize, got: usize },
}

/// Dense univariate polynomial in `x`, low to high degree. The coefficient
/// list never ends in a zero; the zero polynomial is the empty list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct XPoly {
    coeffs: Vec<Scalar>,
}

impl XPoly {
    pub fn zero() -> Self {
        XPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn x() -> Self {
        Self::from_coeffs(vec![Scalar::zero(), Scalar::one()])
    }

    /// `c * x^k`.
    pub fn monomial(k: usize, c: Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Scalar::zero(); k + 1];
        coeffs[k] = c;
        XPoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        XPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` is the degree of the zero polynomial (the `-inf` sentinel), so
    /// bounds like `deg(f) <= k` read as `degree().map_or(true, |d| d <= k)`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn degree_le(&self, k: usize) -> bool {
        self.degree().map_or(true, |d| d <= k)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// The value as a Scalar when the degree is at most zero.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.coeffs.len() {
            0 => Some(Scalar::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(&self.coeff(k) + &other.coeff(k));
        }
        Self::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        XPoly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul_nat(k as u64))
            .collect();
        Self::from_coeffs(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Horner evaluation at a Scalar point.
    pub fn eval(&self, at: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64, ctx: &ParamContext) -> Result<f64, crate::field::FieldError> {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.specialize(ctx)?;
        }
        Ok(acc)
    }

    /// Numeric twin with every coefficient specialized.
    pub fn specialize(&self, ctx: &ParamContext) -> Result<XPoly, crate::field::FieldError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.specialize(ctx).map(Scalar::numeric))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_coeffs(coeffs))
    }

    /// Variable indices of the parameters appearing in the coefficients.
    pub fn param_vars(&self) -> Vec<u32> {
        let mut vars: Vec<u32> = Vec::new();
        for c in &self.coeffs {
            if let Some(r) = c.as_ratfn() {
                vars.extend(r.num().vars());
                vars.extend(r.den().vars());
            }
        }
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    pub fn render(&self, ctx: &ParamContext) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = match c {
                Scalar::Exact(_) => {
                    let rendered = c.render(ctx);
                    if let Some(stripped) = rendered.strip_prefix('-') {
                        (true, stripped.to_string())
                    } else {
                        (false, rendered)
                    }
                }
                Scalar::Numeric(v) => (*v < 0.0, format!("{:?}", v.abs())),
            };
            let needs_parens = mag.contains('+') || mag.contains(" - ");
            let coeff_str = if needs_parens { format!("({mag})") } else { mag };
            let term = match k {
                0 => coeff_str,
                _ => {
                    let xs = if k == 1 { "x".to_string() } else { format!("x^{k}") };
                    if coeff_str == "1" {
                        xs
                    } else {
                        format!("{coeff_str}*{xs}")
                    }
                }
            };
            parts.push((neg, term));
        }
        let mut out = String::new();
        for (i, (neg, term)) in parts.iter().enumerate() {
            if i == 0 {
                if *neg {
                    out.push('-');
                }
            } else if *neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(term);
        }
        out
    }
}

/// Square matrix of [`XPoly`] entries, row major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    size: usize,
    entries: Vec<XPoly>,
}

impl PolyMatrix {
    pub fn zero(size: usize) -> Self {
        PolyMatrix {
            size,
            entries: vec![XPoly::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zero(size);
        for i in 0..size {
            m.set(i, i, XPoly::one());
        }
        m
    }

    /// Constant multiple of the identity.
    pub fn scalar_identity(size: usize, c: Scalar) -> Self {
        let mut m = Self::zero(size);
        for i in 0..size {
            m.set(i, i, XPoly::constant(c.clone()));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<XPoly>>) -> Result<Self, MatError> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(MatError::RaggedRows {
                    expected: size,
                    got: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(PolyMatrix { size, entries })
    }

    pub fn from_scalar_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, MatError> {
        Self::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(XPoly::constant).collect())
                .collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, r: usize, c: usize) -> &XPoly {
        &self.entries[r * self.size + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: XPoly) {
        self.entries[r * self.size + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self == &Self::identity(self.size)
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.size).all(|r| (0..r).all(|c| self.get(r, c).is_zero()))
    }

    fn check_size(&self, other: &Self) -> Result<(), MatError> {
        if self.size != other.size {
            Err(MatError::SizeMismatch(self.size, other.size))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_size(other).expect("matrix sizes");
        PolyMatrix {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PolyMatrix {
            size: self.size,
            entries: self.entries.iter().map(|e| e.neg()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_size(other).expect("matrix sizes");
        let n = self.size;
        let mut out = Self::zero(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = XPoly::zero();
                for k in 0..n {
                    acc = acc.add(&self.get(r, k).mul(other.get(k, c)));
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        PolyMatrix {
            size: self.size,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    pub fn scale_poly(&self, p: &XPoly) -> Self {
        PolyMatrix {
            size: self.size,
            entries: self.entries.iter().map(|e| e.mul(p)).collect(),
        }
    }

    /// Mode-preserving multiplication by a small integer.
    pub fn scale_nat(&self, k: u64) -> Self {
        PolyMatrix {
            size: self.size,
            entries: self
                .entries
                .iter()
                .map(|e| XPoly::from_coeffs(e.coeffs().iter().map(|c| c.mul_nat(k)).collect()))
                .collect(),
        }
    }

    /// Hermitian conjugate restricted to real coefficients.
    pub fn transpose(&self) -> Self {
        let n = self.size;
        let mut out = Self::zero(n);
        for r in 0..n {
            for c in 0..n {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn derivative(&self) -> Self {
        PolyMatrix {
            size: self.size,
            entries: self.entries.iter().map(|e| e.derivative()).collect(),
        }
    }

    pub fn degree_max(&self) -> Option<usize> {
        self.entries.iter().filter_map(|e| e.degree()).max()
    }

    /// Constant matrix of the `x^k` coefficients.
    pub fn coefficient_matrix(&self, k: usize) -> PolyMatrix {
        let n = self.size;
        let mut out = Self::zero(n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, XPoly::constant(self.get(r, c).coeff(k)));
            }
        }
        out
    }

    pub fn eval(&self, at: &Scalar) -> Vec<Vec<Scalar>> {
        (0..self.size)
            .map(|r| (0..self.size).map(|c| self.get(r, c).eval(at)).collect())
            .collect()
    }

    pub fn specialize(&self, ctx: &ParamContext) -> Result<Self, crate::field::FieldError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.specialize(ctx))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMatrix {
            size: self.size,
            entries,
        })
    }

    /// Determinant by cofactor expansion; sizes here stay tiny.
    pub fn det(&self) -> XPoly {
        match self.size {
            0 => XPoly::one(),
            1 => self.get(0, 0).clone(),
            _ => {
                let mut acc = XPoly::zero();
                for c in 0..self.size {
                    let minor = self.minor(0, c).det();
                    let term = self.get(0, c).mul(&minor);
                    acc = if c % 2 == 0 {
                        acc.add(&term)
                    } else {
                        acc.sub(&term)
                    };
                }
                acc
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> PolyMatrix {
        let n = self.size - 1;
        let mut out = Self::zero(n);
        let mut rr = 0;
        for r in 0..self.size {
            if r == row {
                continue;
            }
            let mut cc = 0;
            for c in 0..self.size {
                if c == col {
                    continue;
                }
                out.set(rr, cc, self.get(r, c).clone());
                cc += 1;
            }
            rr += 1;
        }
        out
    }

    /// Inverse of a matrix with constant nonzero determinant, computed as the
    /// adjugate divided by the determinant. Errors otherwise.
    pub fn unimodular_inverse(&self) -> Result<PolyMatrix, MatError> {
        let det = self.det();
        let d = match det.as_scalar() {
            Some(d) if !d.is_zero() => d,
            _ => {
                return Err(MatError::NotUnimodular(format!(
                    "degree {:?}",
                    det.degree()
                )))
            }
        };
        let inv = d.inv().expect("nonzero");
        let n = self.size;
        let mut out = Self::zero(n);
        for r in 0..n {
            for c in 0..n {
                // adjugate = transposed cofactor matrix
                let cof = self.minor(c, r).det();
                let signed = if (r + c) % 2 == 0 { cof } else { cof.neg() };
                out.set(r, c, signed.scale(&inv));
            }
        }
        Ok(out)
    }

    pub fn render(&self, ctx: &ParamContext) -> Vec<Vec<String>> {
        (0..self.size)
            .map(|r| (0..self.size).map(|c| self.get(r, c).render(ctx)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_and_eval() {
        // d/dx (x^2 - 1/2) = 2x ; value at x = 2 is 7/2.
        let p = XPoly::from_coeffs(vec![Scalar::ratio(-1, 2), Scalar::zero(), Scalar::one()]);
        assert_eq!(p.derivative(), XPoly::monomial(1, Scalar::from_int(2)));
        assert_eq!(p.eval(&Scalar::from_int(2)), Scalar::ratio(7, 2));
        assert_eq!(XPoly::zero().degree(), None);
    }

    #[test]
    fn transpose_of_unipotent() {
        let a = Scalar::var(0);
        let t = PolyMatrix::from_rows(vec![
            vec![XPoly::one(), XPoly::monomial(1, a.clone())],
            vec![XPoly::zero(), XPoly::one()],
        ])
        .unwrap();
        let tt = t.transpose();
        assert_eq!(tt.get(1, 0), &XPoly::monomial(1, a));
        assert!(tt.get(0, 1).is_zero());
    }

    #[test]
    fn identity_multiplication_and_derivative() {
        let a = Scalar::var(0);
        let m = PolyMatrix::from_rows(vec![
            vec![XPoly::x(), XPoly::x().pow(2)],
            vec![XPoly::zero(), XPoly::one()],
        ])
        .unwrap();
        assert_eq!(PolyMatrix::identity(2).mul(&m), m);
        let d = m.derivative();
        assert_eq!(d.get(0, 0), &XPoly::one());
        assert_eq!(d.get(0, 1), &XPoly::monomial(1, Scalar::from_int(2)));
        assert!(d.get(1, 1).is_zero());
        let _ = a;
    }

    #[test]
    fn unimodular_inverse_2x2() {
        let a = Scalar::var(0);
        let t = PolyMatrix::from_rows(vec![
            vec![XPoly::one(), XPoly::monomial(1, a.clone())],
            vec![XPoly::zero(), XPoly::one()],
        ])
        .unwrap();
        let inv = t.unimodular_inverse().unwrap();
        assert_eq!(inv.get(0, 1), &XPoly::monomial(1, a.neg()));
        assert!(t.mul(&inv).is_identity());
        assert!(inv.mul(&t).is_identity());
        assert!(PolyMatrix::identity(3)
            .unimodular_inverse()
            .unwrap()
            .is_identity());
    }

    #[test]
    fn unimodular_inverse_3x3_nilpotent() {
        // T = I + a1*x*E12 + a2*x*E32 has (T - I)^2 = 0, so T^-1 = 2I - T.
        let a1 = Scalar::var(0);
        let a2 = Scalar::var(1);
        let mut t = PolyMatrix::identity(3);
        t.set(0, 1, XPoly::monomial(1, a1.clone()));
        t.set(2, 1, XPoly::monomial(1, a2.clone()));
        let inv = t.unimodular_inverse().unwrap();
        let mut expect = PolyMatrix::identity(3);
        expect.set(0, 1, XPoly::monomial(1, a1.neg()));
        expect.set(2, 1, XPoly::monomial(1, a2.neg()));
        assert_eq!(inv, expect);
    }

    #[test]
    fn non_unimodular_rejected() {
        let m = PolyMatrix::from_rows(vec![
            vec![XPoly::x(), XPoly::zero()],
            vec![XPoly::zero(), XPoly::one()],
        ])
        .unwrap();
        assert!(m.unimodular_inverse().is_err());
        assert!(PolyMatrix::zero(2).unimodular_inverse().is_err());
    }
}

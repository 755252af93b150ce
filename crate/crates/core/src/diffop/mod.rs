//! Matrix differential operators with polynomial coefficients, acting on the
//! right: `P D = sum_j (d/dx)^j (P) F_j`. Powers of the derivative sit to the
//! left of the coefficients in the normal form, so composition expands by the
//! Leibniz rule and the formal adjoint is the involution sending the bare
//! derivative to its negative while transposing coefficients.

mod io;

pub use io::{builtin_operator, parse_op, serialize_op, OpError, BUILTIN_OPERATORS};

use crate::field::Scalar;
use crate::polymat::{ExpPolyMatrix, MatError, PolyMatrix};
use num_integer::binomial;
use std::collections::BTreeMap;

/// `sum_j (d/dx)^j F_j(x)` with square polynomial-matrix coefficients.
/// Only nonzero coefficients are stored; the zero operator has none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOp {
    size: usize,
    terms: BTreeMap<usize, PolyMatrix>,
}

impl DiffOp {
    pub fn zero(size: usize) -> Self {
        DiffOp {
            size,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::from_matrix(PolyMatrix::identity(size))
    }

    /// Order-zero operator: right multiplication by `m`.
    pub fn from_matrix(m: PolyMatrix) -> Self {
        Self::from_terms(m.size(), [(0, m)])
    }

    pub fn from_terms(size: usize, terms: impl IntoIterator<Item = (usize, PolyMatrix)>) -> Self {
        let mut out = Self::zero(size);
        for (j, m) in terms {
            out.add_term(j, m);
        }
        out
    }

    pub fn add_term(&mut self, j: usize, m: PolyMatrix) {
        assert_eq!(m.size(), self.size, "coefficient size");
        if m.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(j) {
            Entry::Vacant(e) => {
                e.insert(m);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().add(&m);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &PolyMatrix)> {
        self.terms.iter().map(|(&j, m)| (j, m))
    }

    pub fn coeff(&self, j: usize) -> PolyMatrix {
        self.terms
            .get(&j)
            .cloned()
            .unwrap_or_else(|| PolyMatrix::zero(self.size))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&j, m) in &other.terms {
            out.add_term(j, m.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        DiffOp {
            size: self.size,
            terms: self.terms.iter().map(|(&j, m)| (j, m.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.size);
        for (&j, m) in &self.terms {
            out.add_term(j, m.scale(c));
        }
        out
    }

    /// Right action on a matrix polynomial: `sum_j (d/dx)^j (P) F_j`.
    pub fn apply(&self, p: &PolyMatrix) -> Result<PolyMatrix, MatError> {
        if p.size() != self.size {
            return Err(MatError::SizeMismatch(p.size(), self.size));
        }
        let mut out = PolyMatrix::zero(self.size);
        let mut deriv = p.clone();
        let mut current_order = 0usize;
        for (&j, f) in &self.terms {
            while current_order < j {
                deriv = deriv.derivative();
                current_order += 1;
            }
            out = out.add(&deriv.mul(f));
        }
        Ok(out)
    }

    /// Composition in action order: `apply(P, D1.compose(D2)) =
    /// apply(apply(P, D1), D2)`. For monomials,
    /// `(d^i F)(d^j G) = sum_k C(j, k) d^{i+j-k} (F^{(k)} G)`.
    pub fn compose(&self, other: &Self) -> Result<Self, MatError> {
        if other.size != self.size {
            return Err(MatError::SizeMismatch(self.size, other.size));
        }
        let mut out = Self::zero(self.size);
        for (&i, f) in &self.terms {
            for (&j, g) in &other.terms {
                let mut f_deriv = f.clone();
                for k in 0..=j {
                    if k > 0 {
                        f_deriv = f_deriv.derivative();
                        if f_deriv.is_zero() {
                            break;
                        }
                    }
                    let coeff = binomial(j as u64, k as u64);
                    let prod = f_deriv.mul(g);
                    out.add_term(i + j - k, scale_nat(&prod, coeff));
                }
            }
        }
        Ok(out)
    }

    /// `[D1, D2] = D1 D2 - D2 D1`.
    pub fn commutator(&self, other: &Self) -> Result<Self, MatError> {
        Ok(self.compose(other)?.sub(&other.compose(self)?))
    }

    pub fn pow(&self, e: u32) -> Result<Self, MatError> {
        let mut out = Self::identity(self.size);
        for _ in 0..e {
            out = out.compose(self)?;
        }
        Ok(out)
    }

    /// Formal adjoint: transposes coefficients and sends the derivative to
    /// its negative. In normal form,
    /// `G_m = sum_{j >= m} (-1)^j C(j, m) (F_j^T)^{(j-m)}`.
    pub fn formal_adjoint(&self) -> Self {
        let mut out = Self::zero(self.size);
        for (&j, f) in &self.terms {
            let mut d = f.transpose();
            for k in 0..=j {
                if k > 0 {
                    d = d.derivative();
                    if d.is_zero() {
                        break;
                    }
                }
                let coeff = binomial(j as u64, k as u64);
                let signed = if j % 2 == 0 { d.clone() } else { d.neg() };
                out.add_term(j - k, scale_nat(&signed, coeff));
            }
        }
        out
    }

    /// Numeric twin with all coefficients specialized.
    pub fn specialize(
        &self,
        ctx: &crate::field::ParamContext,
    ) -> Result<Self, crate::field::FieldError> {
        let mut out = Self::zero(self.size);
        for (&j, m) in &self.terms {
            out.add_term(j, m.specialize(ctx)?);
        }
        Ok(out)
    }
}

fn scale_nat(m: &PolyMatrix, k: u64) -> PolyMatrix {
    if k == 1 {
        return m.clone();
    }
    let mut out = PolyMatrix::zero(m.size());
    for r in 0..m.size() {
        for c in 0..m.size() {
            let scaled = crate::polymat::XPoly::from_coeffs(
                m.get(r, c).coeffs().iter().map(|s| s.mul_nat(k)).collect(),
            );
            out.set(r, c, scaled);
        }
    }
    out
}

/// Differential operator whose coefficients are exponential-polynomial
/// matrices. Formal daggers may leave the polynomial algebra; this type is
/// where they land.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpDiffOp {
    size: usize,
    terms: BTreeMap<usize, ExpPolyMatrix>,
}

impl ExpDiffOp {
    pub fn zero(size: usize) -> Self {
        ExpDiffOp {
            size,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_diffop(d: &DiffOp) -> Self {
        let mut out = Self::zero(d.size());
        for (j, m) in d.terms() {
            out.add_term(j, ExpPolyMatrix::from_poly(m.clone()));
        }
        out
    }

    pub fn from_matrix(m: ExpPolyMatrix) -> Self {
        let mut out = Self::zero(m.size());
        out.add_term(0, m);
        out
    }

    pub fn add_term(&mut self, j: usize, m: ExpPolyMatrix) {
        assert_eq!(m.size(), self.size, "coefficient size");
        if m.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(j) {
            Entry::Vacant(e) => {
                e.insert(m);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().add(&m);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &ExpPolyMatrix)> {
        self.terms.iter().map(|(&j, m)| (j, m))
    }

    pub fn coeff(&self, j: usize) -> ExpPolyMatrix {
        self.terms
            .get(&j)
            .cloned()
            .unwrap_or_else(|| ExpPolyMatrix::zero(self.size))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&j, m) in &other.terms {
            out.add_term(j, m.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ExpDiffOp {
            size: self.size,
            terms: self.terms.iter().map(|(&j, m)| (j, m.neg())).collect(),
        }
    }

    /// Same Leibniz expansion as [`DiffOp::compose`], with exponential
    /// factors carried through the coefficient derivatives.
    pub fn compose(&self, other: &Self) -> Result<Self, MatError> {
        if other.size != self.size {
            return Err(MatError::SizeMismatch(self.size, other.size));
        }
        let mut out = Self::zero(self.size);
        for (&i, f) in &self.terms {
            for (&j, g) in &other.terms {
                let mut f_deriv = f.clone();
                for k in 0..=j {
                    if k > 0 {
                        f_deriv = f_deriv.derivative();
                        if f_deriv.is_zero() {
                            break;
                        }
                    }
                    let coeff = binomial(j as u64, k as u64);
                    let prod = f_deriv.mul(g);
                    out.add_term(i + j - k, prod.scale_nat(coeff));
                }
            }
        }
        Ok(out)
    }

    /// All nonzero frequencies across the coefficients, deduplicated.
    pub fn nonzero_frequencies(&self) -> Vec<Scalar> {
        let mut freqs: Vec<Scalar> = self
            .terms
            .values()
            .flat_map(|m| m.nonzero_frequencies())
            .collect();
        freqs.sort();
        freqs.dedup();
        freqs
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.values().all(|m| m.is_polynomial())
    }

    /// The operator as a plain [`DiffOp`] when no exponential terms remain.
    pub fn try_into_polynomial(&self) -> Option<DiffOp> {
        let mut out = DiffOp::zero(self.size);
        for (&j, m) in &self.terms {
            out.add_term(j, m.try_into_polynomial()?);
        }
        Some(out)
    }

    /// Largest absolute coefficient (numeric mode), for residual thresholds.
    pub fn max_abs_numeric(&self) -> Option<f64> {
        let mut best: f64 = 0.0;
        for m in self.terms.values() {
            best = best.max(m.max_abs_numeric()?);
        }
        Some(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{parse_xpoly, ParamContext};
    use crate::polymat::XPoly;

    fn ctx() -> ParamContext {
        ParamContext::new(&["a", "b", "E"]).unwrap()
    }

    fn op_d(ctx: &ParamContext) -> DiffOp {
        // d^2 I + d [[-2x+2b, -2abx+2a], [0, -2x]] + [[-2,0],[0,0]]
        let f1 = PolyMatrix::from_rows(vec![
            vec![
                parse_xpoly("-2*x + 2*b", ctx).unwrap(),
                parse_xpoly("-2*a*b*x + 2*a", ctx).unwrap(),
            ],
            vec![XPoly::zero(), parse_xpoly("-2*x", ctx).unwrap()],
        ])
        .unwrap();
        let f0 = PolyMatrix::from_rows(vec![
            vec![XPoly::constant(Scalar::from_int(-2)), XPoly::zero()],
            vec![XPoly::zero(), XPoly::zero()],
        ])
        .unwrap();
        DiffOp::from_terms(2, [(2, PolyMatrix::identity(2)), (1, f1), (0, f0)])
    }

    #[test]
    fn apply_constant_term() {
        // Applying to P = I picks out the order-zero coefficient.
        let c = ctx();
        let d = op_d(&c);
        let applied = d.apply(&PolyMatrix::identity(2)).unwrap();
        let expect = PolyMatrix::from_scalar_rows(vec![
            vec![Scalar::from_int(-2), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero()],
        ])
        .unwrap();
        assert_eq!(applied, expect);
    }

    #[test]
    fn apply_zero_and_high_order() {
        let c = ctx();
        let p = PolyMatrix::from_rows(vec![
            vec![XPoly::x(), XPoly::zero()],
            vec![XPoly::zero(), XPoly::x()],
        ])
        .unwrap();
        assert!(DiffOp::zero(2).apply(&p).unwrap().is_zero());
        let dd = DiffOp::from_terms(2, [(2, PolyMatrix::identity(2))]);
        assert!(dd.apply(&p).unwrap().is_zero());
        let _ = c;
    }

    #[test]
    fn compose_matches_sequential_action() {
        let c = ctx();
        let d = op_d(&c);
        let d2 = d.compose(&d).unwrap();
        assert_eq!(d2.order(), Some(4));
        assert!(d2.coeff(4).is_identity());

        let p = PolyMatrix::from_rows(vec![
            vec![XPoly::x().pow(3), parse_xpoly("x + 1", &c).unwrap()],
            vec![XPoly::one(), XPoly::x().pow(2)],
        ])
        .unwrap();
        let seq = d.apply(&d.apply(&p).unwrap()).unwrap();
        let joint = d2.apply(&p).unwrap();
        assert_eq!(seq, joint);
    }

    #[test]
    fn derivative_squared_is_second_derivative() {
        let single = DiffOp::from_terms(1, [(1, PolyMatrix::identity(1))]);
        let sq = single.compose(&single).unwrap();
        assert_eq!(sq, DiffOp::from_terms(1, [(2, PolyMatrix::identity(1))]));
    }

    #[test]
    fn adjoint_basics() {
        // (dI)* = -dI ; constant coefficients transpose.
        let single = DiffOp::from_terms(2, [(1, PolyMatrix::identity(2))]);
        assert_eq!(
            single.formal_adjoint(),
            DiffOp::from_terms(2, [(1, PolyMatrix::identity(2).neg())])
        );
        let c = ctx();
        let m = PolyMatrix::from_scalar_rows(vec![
            vec![Scalar::from_int(1), Scalar::var(0)],
            vec![Scalar::from_int(3), Scalar::from_int(4)],
        ])
        .unwrap();
        let f = DiffOp::from_matrix(m.clone());
        assert_eq!(f.formal_adjoint(), DiffOp::from_matrix(m.transpose()));
        let _ = c;
    }

    #[test]
    fn adjoint_of_hermite_operator() {
        // (d^2 I + d(-2x))* = d^2 I + d(2x) + 2, by the normal-form formula.
        let c = ctx();
        let h = DiffOp::from_terms(
            1,
            [
                (2, PolyMatrix::identity(1)),
                (
                    1,
                    PolyMatrix::from_rows(vec![vec![parse_xpoly("-2*x", &c).unwrap()]]).unwrap(),
                ),
            ],
        );
        let adj = h.formal_adjoint();
        let expect = DiffOp::from_terms(
            1,
            [
                (2, PolyMatrix::identity(1)),
                (
                    1,
                    PolyMatrix::from_rows(vec![vec![parse_xpoly("2*x", &c).unwrap()]]).unwrap(),
                ),
                (0, PolyMatrix::scalar_identity(1, Scalar::from_int(2))),
            ],
        );
        assert_eq!(adj, expect);
    }

    #[test]
    fn adjoint_is_anti_homomorphic_involution() {
        let c = ctx();
        let d = op_d(&c);
        let e = DiffOp::from_terms(
            2,
            [
                (
                    1,
                    PolyMatrix::from_rows(vec![
                        vec![XPoly::x(), XPoly::one()],
                        vec![XPoly::zero(), XPoly::x()],
                    ])
                    .unwrap(),
                ),
                (0, PolyMatrix::identity(2)),
            ],
        );
        let de = d.compose(&e).unwrap();
        assert_eq!(
            de.formal_adjoint(),
            e.formal_adjoint().compose(&d.formal_adjoint()).unwrap()
        );
        assert_eq!(de.formal_adjoint().formal_adjoint(), de);
    }

    #[test]
    fn commutator_basics() {
        let c = ctx();
        let d = op_d(&c);
        assert!(d.commutator(&d).unwrap().is_zero());
        let d2 = d.compose(&d).unwrap();
        assert!(d.commutator(&d2).unwrap().is_zero());
        let bound = d.order().unwrap() + d2.order().unwrap();
        let e = DiffOp::from_terms(
            2,
            [(
                1,
                PolyMatrix::from_rows(vec![
                    vec![XPoly::zero(), XPoly::x()],
                    vec![XPoly::one(), XPoly::zero()],
                ])
                .unwrap(),
            )],
        );
        let comm = d.commutator(&e).unwrap();
        assert!(comm.order().unwrap_or(0) <= bound);
    }

    #[test]
    fn exp_ops_match_poly_ops_at_frequency_zero() {
        let c = ctx();
        let d = op_d(&c);
        let e = DiffOp::from_terms(2, [(1, PolyMatrix::identity(2))]);
        let poly = d.compose(&e).unwrap();
        let exp = ExpDiffOp::from_diffop(&d)
            .compose(&ExpDiffOp::from_diffop(&e))
            .unwrap();
        assert_eq!(exp.try_into_polynomial(), Some(poly));
    }
}

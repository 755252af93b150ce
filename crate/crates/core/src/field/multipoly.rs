//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! Monomials are compared in graded lexicographic order (total degree first,
//! then lexicographic with the lowest variable index most significant), which
//! fixes a canonical term order for serialization and for leading-term
//! division. GCDs are computed with a primitive pseudo-remainder sequence,
//! which is what keeps rational functions in [`crate::field::Scalar`] reduced.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Exponent data of a monomial, stored sparsely as `(variable, exponent)`
/// pairs sorted by variable index. Stored exponents are strictly positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: u32) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: u32, e: u32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: u32) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn factors(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Componentwise division; `None` when some exponent would go negative.
    pub fn try_div(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut i = 0;
        for &(v, e) in &other.0 {
            while i < self.0.len() && self.0[i].0 < v {
                out.push(self.0[i]);
                i += 1;
            }
            if i >= self.0.len() || self.0[i].0 != v || self.0[i].1 < e {
                return None;
            }
            if self.0[i].1 > e {
                out.push((v, self.0[i].1 - e));
            }
            i += 1;
        }
        out.extend_from_slice(&self.0[i..]);
        Some(Monomial(out))
    }

    /// Copy of `self` with the exponent of `v` replaced by `e`.
    pub fn with_exponent(&self, v: u32, e: u32) -> Self {
        let mut out: Vec<(u32, u32)> = self.0.iter().copied().filter(|&(w, _)| w != v).collect();
        if e > 0 {
            let pos = out.partition_point(|&(w, _)| w < v);
            out.insert(pos, (v, e));
        }
        Monomial(out)
    }

    fn cmp_graded_lex(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Same degree: lexicographic, lowest variable index most significant.
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => {
                    // self still has positive exponent on a variable other lacks;
                    // with equal total degree, other spent it on a later variable.
                    return Ordering::Greater;
                }
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va < vb {
                        return Ordering::Greater;
                    }
                    if vb < va {
                        return Ordering::Less;
                    }
                    match ea.cmp(&eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    }
                }
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_graded_lex(other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with `BigRational` coefficients.
/// Zero coefficients are never stored; the zero polynomial has no terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        MultiPoly { terms }
    }

    pub fn from_int(k: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(k)))
    }

    pub fn var(v: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), BigRational::one());
        MultiPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.is_one() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Graded-lex leading term.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn degree_in(&self, v: u32) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn max_var(&self) -> Option<u32> {
        self.terms.keys().flat_map(|m| m.vars()).max()
    }

    pub fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        let mut seen: Vec<u32> = self.terms.keys().flat_map(|m| m.vars()).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.into_iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc * c))
                .collect(),
        }
    }

    pub fn mul_rat(&self, c: &BigRational) -> Self {
        self.mul_term(&Monomial::one(), c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Coefficient polynomials of `self` seen as univariate in `v`;
    /// index `k` holds the coefficient of `v^k` with `v` stripped out.
    pub fn univariate_in(&self, v: u32) -> Vec<MultiPoly> {
        if self.is_zero() {
            return Vec::new();
        }
        let d = self.degree_in(v) as usize;
        let mut out = vec![MultiPoly::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(v) as usize;
            out[e].add_term(m.with_exponent(v, 0), c.clone());
        }
        out
    }

    pub fn from_univariate(coeffs: &[MultiPoly], v: u32) -> Self {
        let mut out = Self::zero();
        for (e, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                out.add_term(m.with_exponent(v, e as u32), c.clone());
            }
        }
        out
    }

    fn lead_coeff_in(&self, v: u32) -> MultiPoly {
        let d = self.degree_in(v);
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            if m.exponent(v) == d {
                out.add_term(m.with_exponent(v, 0), c.clone());
            }
        }
        out
    }

    /// Exact division: `Some(q)` with `self = q * div`, or `None` when `div`
    /// does not divide `self`. Leading-term division in graded-lex order.
    pub fn exact_div(&self, div: &Self) -> Option<MultiPoly> {
        let (dm, dc) = div.leading()?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.try_div(dm)?;
            let c = rc / dc;
            rem = rem.sub(&div.mul_term(&m, &c));
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// Scales so the graded-lex leading coefficient is `1`.
    pub fn monic_normalized(&self) -> MultiPoly {
        match self.leading() {
            None => MultiPoly::zero(),
            Some((_, c)) => {
                let inv = BigRational::one() / c;
                self.mul_rat(&inv)
            }
        }
    }

    pub fn eval_f64(&self, value_of: &dyn Fn(u32) -> f64) -> f64 {
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut t = rational_to_f64(c);
            for (v, e) in m.factors() {
                t *= value_of(v).powi(e as i32);
            }
            total += t;
        }
        total
    }

    pub fn eval_rational(&self, value_of: &dyn Fn(u32) -> BigRational) -> BigRational {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                let base = value_of(v);
                for _ in 0..e {
                    t *= &base;
                }
            }
            total += t;
        }
        total
    }

    /// Renders with the supplied variable names; terms in descending
    /// graded-lex order so output is canonical.
    pub fn render(&self, name_of: &dyn Fn(u32) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                factors.push(mag.to_string());
            }
            for (v, e) in m.factors() {
                if e == 1 {
                    factors.push(name_of(v));
                } else {
                    factors.push(format!("{}^{}", name_of(v), e));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

pub(crate) fn rational_to_f64(c: &BigRational) -> f64 {
    // Good enough over the magnitudes that appear here; denominators are
    // never huge because Scalars stay reduced.
    let num = c.numer();
    let den = c.denom();
    bigint_to_f64(num) / bigint_to_f64(den)
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    let s = x.to_string();
    s.parse::<f64>().unwrap_or(f64::NAN)
}

/// GCD of multivariate polynomials over the rationals, normalized so the
/// graded-lex leading coefficient is `1`. Nonzero constants count as units,
/// so coprime inputs yield `1`.
pub fn poly_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic_normalized();
    }
    if b.is_zero() {
        return a.monic_normalized();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    let vars_a: Vec<u32> = a.vars().collect();
    let common: Vec<u32> = b.vars().filter(|v| vars_a.contains(v)).collect();
    if common.is_empty() {
        return MultiPoly::one();
    }
    let v = common[0];

    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = poly_gcd(&ca, &cb);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");

    let (mut big, mut small) = if pa.degree_in(v) >= pb.degree_in(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r = pseudo_rem(&big, &small, v);
        if r.is_zero() {
            return c.mul(&primitive_part(&small, v)).monic_normalized();
        }
        if r.degree_in(v) == 0 {
            return c.monic_normalized();
        }
        big = small;
        small = primitive_part(&r, v);
    }
}

/// GCD of the coefficients of `f` viewed as univariate in `v`.
pub fn content_in(f: &MultiPoly, v: u32) -> MultiPoly {
    let mut g = MultiPoly::zero();
    for coeff in f.univariate_in(v) {
        if coeff.is_zero() {
            continue;
        }
        g = poly_gcd(&g, &coeff);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part(f: &MultiPoly, v: u32) -> MultiPoly {
    let c = content_in(f, v);
    f.exact_div(&c).expect("content divides").monic_normalized()
}

/// Pseudo-remainder of `a` by `b` in the variable `v`: repeatedly cancels the
/// leading `v`-term after scaling by `b`'s leading coefficient. Only used
/// inside the primitive PRS, where the accumulated unit factors are stripped
/// again by `primitive_part`.
fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, v: u32) -> MultiPoly {
    let db = b.degree_in(v);
    let lb = b.lead_coeff_in(v);
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let dr = r.degree_in(v);
        if dr < db {
            return r;
        }
        let lr = r.lead_coeff_in(v);
        let shift = Monomial::var_pow(v, dr - db);
        r = r
            .mul(&lb)
            .sub(&b.mul(&lr).mul_term(&shift, &BigRational::one()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn graded_lex_order() {
        let a2 = Monomial::var_pow(0, 2);
        let ab = Monomial::var(0).mul(&Monomial::var(1));
        let b2 = Monomial::var_pow(1, 2);
        let a = Monomial::var(0);
        assert!(a2 > ab);
        assert!(ab > b2);
        assert!(b2 > a);
        assert!(a > Monomial::one());
    }

    #[test]
    fn arithmetic_basics() {
        let a = MultiPoly::var(0);
        let b = MultiPoly::var(1);
        let s = a.add(&b);
        let d = a.sub(&b);
        let prod = s.mul(&d);
        let expect = a.mul(&a).sub(&b.mul(&b));
        assert_eq!(prod, expect);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = MultiPoly::var(0);
        let b = MultiPoly::var(1);
        let s = a.add(&b);
        let d = a.sub(&b);
        let prod = s.mul(&d);
        assert_eq!(prod.exact_div(&d), Some(s.clone()));
        assert_eq!(prod.exact_div(&s), Some(d.clone()));
        assert!(s.exact_div(&d).is_none());
    }

    #[test]
    fn gcd_difference_of_squares() {
        // gcd(a^2 - b^2, a - b) = a - b (monic in graded-lex already).
        let a = MultiPoly::var(0);
        let b = MultiPoly::var(1);
        let n = a.mul(&a).sub(&b.mul(&b));
        let d = a.sub(&b);
        assert_eq!(poly_gcd(&n, &d), d);
    }

    #[test]
    fn gcd_with_content() {
        // gcd(x*y, y) = y; gcd over disjoint vars = 1.
        let x = MultiPoly::var(0);
        let y = MultiPoly::var(1);
        assert_eq!(poly_gcd(&x.mul(&y), &y), y);
        assert!(poly_gcd(&x, &y).is_one());
    }

    #[test]
    fn gcd_idempotent_and_scaled() {
        let x = MultiPoly::var(0);
        let y = MultiPoly::var(1);
        let f = x.add(&y).mul(&x.add(&MultiPoly::one())).mul_rat(&q(3, 4));
        let g = x.add(&y).mul(&y).mul_rat(&q(-2, 7));
        let gg = poly_gcd(&f, &g);
        assert_eq!(gg, x.add(&y));
        assert_eq!(poly_gcd(&gg, &gg), gg);
    }

    #[test]
    fn render_canonical() {
        let names = |v: u32| ["a", "b"][v as usize].to_string();
        let p = MultiPoly::var(0)
            .mul(&MultiPoly::var(0))
            .sub(&MultiPoly::var(1).mul_rat(&q(1, 2)))
            .add(&MultiPoly::from_int(3));
        assert_eq!(p.render(&names), "a^2 - 1/2*b + 3");
    }
}

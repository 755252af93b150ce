//! Field elements: reduced rational functions in the declared parameters,
//! or double-precision floats in numeric mode.

use super::multipoly::{poly_gcd, rational_to_f64, MultiPoly};
use super::{FieldError, ParamContext};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

/// Canonical quotient of two polynomials: gcd(num, den) is a unit and the
/// graded-lex leading coefficient of the denominator is `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFn {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFn {
    fn reduced(num: MultiPoly, den: MultiPoly) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFn {
                num: MultiPoly::zero(),
                den: MultiPoly::one(),
            });
        }
        if den.is_one() {
            return Ok(RatFn { num, den });
        }
        if let Some(c) = den.as_constant() {
            let inv = BigRational::one() / c;
            return Ok(RatFn {
                num: num.mul_rat(&inv),
                den: MultiPoly::one(),
            });
        }
        let g = poly_gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides"),
                den.exact_div(&g).expect("gcd divides"),
            )
        };
        if let Some(c) = den.as_constant() {
            let inv = BigRational::one() / c;
            return Ok(RatFn {
                num: num.mul_rat(&inv),
                den: MultiPoly::one(),
            });
        }
        let lead = den.leading().expect("nonzero").1.clone();
        if !lead.is_one() {
            let inv = BigRational::one() / lead;
            num = num.mul_rat(&inv);
            den = den.mul_rat(&inv);
        }
        Ok(RatFn { num, den })
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }
}

/// Element of the coefficient field. `Exact` values are reduced rational
/// functions of the declared parameters; `Numeric` values are plain floats.
/// The two modes never mix inside one computation.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(RatFn),
    Numeric(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::from_poly(MultiPoly::zero())
    }

    pub fn one() -> Self {
        Scalar::from_poly(MultiPoly::one())
    }

    pub fn from_int(k: i64) -> Self {
        Scalar::from_poly(MultiPoly::from_int(k))
    }

    pub fn from_usize(k: usize) -> Self {
        Scalar::from_poly(MultiPoly::constant(BigRational::from_integer(BigInt::from(
            k,
        ))))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Scalar::from_poly(MultiPoly::constant(c))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        Scalar::Exact(RatFn {
            num: p,
            den: MultiPoly::one(),
        })
    }

    pub fn from_fraction(num: MultiPoly, den: MultiPoly) -> Result<Self, FieldError> {
        Ok(Scalar::Exact(RatFn::reduced(num, den)?))
    }

    pub fn var(v: u32) -> Self {
        Scalar::from_poly(MultiPoly::var(v))
    }

    pub fn numeric(v: f64) -> Self {
        Scalar::Numeric(v)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Scalar::Numeric(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.num.is_zero(),
            Scalar::Numeric(v) => *v == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.num.is_one() && r.den.is_one(),
            Scalar::Numeric(v) => *v == 1.0,
        }
    }

    /// The underlying reduced fraction, for exact values.
    pub fn as_ratfn(&self) -> Option<&RatFn> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Numeric(_) => None,
        }
    }

    /// `Some(c)` when the value is an exact rational constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Exact(r) if r.den.is_one() => r.num.as_constant(),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Scalar::Numeric(v) => Some(*v),
            Scalar::Exact(_) => None,
        }
    }

    /// A constant with the same mode as `self`.
    pub fn int_like(&self, k: i64) -> Scalar {
        match self {
            Scalar::Exact(_) => Scalar::from_int(k),
            Scalar::Numeric(_) => Scalar::Numeric(k as f64),
        }
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                if a.den.is_one() && b.den.is_one() {
                    return Ok(Scalar::from_poly(a.num.add(&b.num)));
                }
                let num = a.num.mul(&b.den).add(&b.num.mul(&a.den));
                let den = a.den.mul(&b.den);
                Ok(Scalar::Exact(RatFn::reduced(num, den)?))
            }
            (Scalar::Numeric(a), Scalar::Numeric(b)) => Ok(Scalar::Numeric(a + b)),
            _ => Err(FieldError::ModeMismatch),
        }
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        self.checked_add(&rhs.neg())
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                if a.num.is_zero() || b.num.is_zero() {
                    return Ok(Scalar::zero());
                }
                if a.den.is_one() && b.den.is_one() {
                    return Ok(Scalar::from_poly(a.num.mul(&b.num)));
                }
                // Cross-cancel before multiplying to keep the gcd calls small.
                let g1 = poly_gcd(&a.num, &b.den);
                let g2 = poly_gcd(&b.num, &a.den);
                let num = a
                    .num
                    .exact_div(&g1)
                    .expect("gcd divides")
                    .mul(&b.num.exact_div(&g2).expect("gcd divides"));
                let den = a
                    .den
                    .exact_div(&g2)
                    .expect("gcd divides")
                    .mul(&b.den.exact_div(&g1).expect("gcd divides"));
                Ok(Scalar::Exact(RatFn::reduced(num, den)?))
            }
            (Scalar::Numeric(a), Scalar::Numeric(b)) => Ok(Scalar::Numeric(a * b)),
            _ => Err(FieldError::ModeMismatch),
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        match (self, rhs) {
            (Scalar::Exact(_), Scalar::Exact(b)) => {
                if b.num.is_zero() {
                    return Err(FieldError::DivisionByZero);
                }
                self.checked_mul(&Scalar::Exact(RatFn::reduced(b.den.clone(), b.num.clone())?))
            }
            (Scalar::Numeric(a), Scalar::Numeric(b)) => {
                if *b == 0.0 {
                    Err(FieldError::DivisionByZero)
                } else {
                    Ok(Scalar::Numeric(a / b))
                }
            }
            _ => Err(FieldError::ModeMismatch),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(RatFn {
                num: r.num.neg(),
                den: r.den.clone(),
            }),
            Scalar::Numeric(v) => Scalar::Numeric(-v),
        }
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        Scalar::one().checked_div(self)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut out = self.int_like(1);
        for _ in 0..e {
            out = out.checked_mul(self).expect("same mode");
        }
        out
    }

    /// Multiplication by a small nonnegative integer, mode preserving.
    pub fn mul_nat(&self, k: u64) -> Scalar {
        match self {
            Scalar::Exact(r) => {
                let c = BigRational::from_integer(BigInt::from(k));
                Scalar::Exact(RatFn {
                    num: r.num.mul_rat(&c),
                    den: r.den.clone(),
                })
                .normalized_zero()
            }
            Scalar::Numeric(v) => Scalar::Numeric(v * k as f64),
        }
    }

    fn normalized_zero(self) -> Scalar {
        if self.is_zero() {
            Scalar::zero()
        } else {
            self
        }
    }

    /// Evaluates at the context's numeric bindings.
    pub fn specialize(&self, ctx: &ParamContext) -> Result<f64, FieldError> {
        match self {
            Scalar::Numeric(v) => Ok(*v),
            Scalar::Exact(r) => {
                let mut unbound: Option<u32> = None;
                for v in r.num.vars().chain(r.den.vars()) {
                    if ctx.numeric_value(v).is_err() && unbound.is_none() {
                        unbound = Some(v);
                    }
                }
                if let Some(v) = unbound {
                    return Err(FieldError::UnboundSymbol(ctx.name(v).to_string()));
                }
                let f = |v: u32| ctx.numeric_value(v).unwrap();
                let den = r.den.eval_f64(&f);
                if den.abs() < 1e-12 {
                    return Err(FieldError::VanishingDenominator);
                }
                Ok(r.num.eval_f64(&f) / den)
            }
        }
    }

    /// Evaluates at an exact rational parameter assignment (one value per
    /// symbol index). Errors when the denominator vanishes at the point.
    pub fn eval_rational(&self, assignment: &[BigRational]) -> Result<BigRational, FieldError> {
        match self {
            Scalar::Numeric(_) => Err(FieldError::ModeMismatch),
            Scalar::Exact(r) => {
                let f = |v: u32| assignment[v as usize].clone();
                let den = r.den.eval_rational(&f);
                if den.is_zero() {
                    return Err(FieldError::VanishingDenominator);
                }
                Ok(r.num.eval_rational(&f) / den)
            }
        }
    }

    pub fn render(&self, ctx: &ParamContext) -> String {
        match self {
            Scalar::Numeric(v) => format!("{v:?}"),
            Scalar::Exact(r) => {
                let names = |v: u32| ctx.name(v).to_string();
                if r.den.is_one() {
                    r.num.render(&names)
                } else {
                    format!("({})/({})", r.num.render(&names), r.den.render(&names))
                }
            }
        }
    }

    /// Approximate magnitude, used only by numeric residual checks.
    pub fn abs_numeric(&self) -> Option<f64> {
        match self {
            Scalar::Numeric(v) => Some(v.abs()),
            Scalar::Exact(r) => {
                if r.den.is_one() {
                    r.num.as_constant().and_then(|c| c.to_f64()).map(f64::abs)
                } else {
                    None
                }
            }
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Numeric(a), Scalar::Numeric(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Scalar::Exact(r) => {
                0u8.hash(state);
                r.hash(state);
            }
            Scalar::Numeric(v) => {
                1u8.hash(state);
                v.to_bits().hash(state);
            }
        }
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            (Scalar::Numeric(a), Scalar::Numeric(b)) => a.total_cmp(b),
            (Scalar::Exact(_), Scalar::Numeric(_)) => Ordering::Less,
            (Scalar::Numeric(_), Scalar::Exact(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Numeric(v) => write!(f, "{v:?}"),
            Scalar::Exact(r) => {
                let names = |v: u32| format!("p{v}");
                if r.den.is_one() {
                    write!(f, "{}", r.num.render(&names))
                } else {
                    write!(f, "({})/({})", r.num.render(&names), r.den.render(&names))
                }
            }
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar arithmetic")
            }
        }
        impl std::ops::$trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$checked(&rhs).expect("scalar arithmetic")
            }
        }
    };
}

scalar_binop!(Add, add, checked_add);
scalar_binop!(Sub, sub, checked_sub);
scalar_binop!(Mul, mul, checked_mul);
scalar_binop!(Div, div, checked_div);

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_pair_is_one() {
        // (a/b) * (b/a) = 1
        let a = Scalar::var(0);
        let b = Scalar::var(1);
        let ab = a.checked_div(&b).unwrap();
        let ba = b.checked_div(&a).unwrap();
        assert!(ab.checked_mul(&ba).unwrap().is_one());
    }

    #[test]
    fn additive_identity() {
        let e = Scalar::var(2);
        assert_eq!(e.checked_add(&Scalar::zero()).unwrap(), e);
    }

    #[test]
    fn difference_of_squares_reduces() {
        // (a^2 - b^2)/(a - b) = a + b; oracle: expand and long-divide by hand.
        let a = Scalar::var(0);
        let b = Scalar::var(1);
        let num = a.pow(2).checked_sub(&b.pow(2)).unwrap();
        let den = a.checked_sub(&b).unwrap();
        let reduced = num.checked_div(&den).unwrap();
        assert_eq!(reduced, a.checked_add(&b).unwrap());
    }

    #[test]
    fn division_by_zero_and_mode_mismatch_error() {
        let a = Scalar::var(0);
        assert!(matches!(
            a.checked_div(&Scalar::zero()),
            Err(FieldError::DivisionByZero)
        ));
        assert!(matches!(
            a.checked_add(&Scalar::numeric(1.0)),
            Err(FieldError::ModeMismatch)
        ));
    }

    #[test]
    fn no_relation_between_symbols() {
        // E/b stays an irreducible fraction: symbols are independent
        // indeterminates, reduction never uses a transcendental relation.
        let b = Scalar::var(1);
        let e = Scalar::var(2);
        let f = e.checked_div(&b).unwrap();
        let r = f.as_ratfn().unwrap();
        assert_eq!(r.num(), &MultiPoly::var(2));
        assert_eq!(r.den(), &MultiPoly::var(1));
    }
}

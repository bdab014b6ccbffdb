use std::fmt;

use super::{PolyGF2, SpineError};

/// A fraction of GF(2) polynomials with nonzero denominator. Equality is
/// decided by cross-multiplication, so representations need not be reduced.
#[derive(Debug, Clone)]
pub struct RationalGF2 {
    num: PolyGF2,
    den: PolyGF2,
}

impl RationalGF2 {
    pub fn new(num: PolyGF2, den: PolyGF2) -> Result<RationalGF2, SpineError> {
        if den.is_zero() {
            return Err(SpineError::DivisionByZeroPolynomial);
        }
        Ok(RationalGF2 { num, den }.reduced())
    }

    pub fn from_poly(p: PolyGF2) -> RationalGF2 {
        RationalGF2 {
            num: p,
            den: PolyGF2::one(),
        }
    }

    pub fn var(name: &str) -> RationalGF2 {
        RationalGF2::from_poly(PolyGF2::var(name))
    }

    pub fn num(&self) -> &PolyGF2 {
        &self.num
    }

    pub fn den(&self) -> &PolyGF2 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Cancels the common monomial factor, and identical numerator and
    /// denominator.
    fn reduced(self) -> RationalGF2 {
        if self.num.is_zero() {
            return RationalGF2::from_poly(PolyGF2::zero());
        }
        if self.num == self.den {
            return RationalGF2::from_poly(PolyGF2::one());
        }
        let g = self.num.content().gcd_with(&self.den.content());
        RationalGF2 {
            num: self.num.div_monomial(&g),
            den: self.den.div_monomial(&g),
        }
    }

    pub fn add(&self, other: &RationalGF2) -> RationalGF2 {
        if self.den == other.den {
            return RationalGF2 {
                num: self.num.add(&other.num),
                den: self.den.clone(),
            }
            .reduced();
        }
        RationalGF2 {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
        .reduced()
    }

    pub fn mul(&self, other: &RationalGF2) -> RationalGF2 {
        RationalGF2 {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
        .reduced()
    }

    pub fn inv(&self) -> Result<RationalGF2, SpineError> {
        RationalGF2::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RationalGF2) -> Result<RationalGF2, SpineError> {
        Ok(self.mul(&other.inv()?))
    }

    /// `p/q = r/s` iff `p·s + r·q = 0`.
    pub fn equals(&self, other: &RationalGF2) -> bool {
        self.num
            .mul(&other.den)
            .add(&other.num.mul(&self.den))
            .is_zero()
    }

    /// Replaces `var` by `value` throughout.
    pub fn substitute(&self, var: &str, value: &RationalGF2) -> Result<RationalGF2, SpineError> {
        let n = substitute_poly(&self.num, var, value);
        let d = substitute_poly(&self.den, var, value);
        n.div(&d)
    }
}

impl PartialEq for RationalGF2 {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for RationalGF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// `p(var = a/b) = (Σ c_k a^k b^{d−k}) / b^d` with `d` the degree in `var`.
pub fn substitute_poly(p: &PolyGF2, var: &str, value: &RationalGF2) -> RationalGF2 {
    let coeffs = p.coefficients(var);
    let d = coeffs.len() as u32 - 1;
    let mut num = PolyGF2::zero();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let k = k as u32;
        num = num.add(&c.mul(&value.num.pow(k)).mul(&value.den.pow(d - k)));
    }
    RationalGF2 {
        num,
        den: value.den.pow(d),
    }
    .reduced()
}

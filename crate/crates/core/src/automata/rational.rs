use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::poly::Poly;

/// A reduced quotient of integer polynomials whose denominator has a
/// positive constant term.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    numerator: Poly,
    denominator: Poly,
}

impl RationalFunction {
    /// Reduces `num / den`. Panics if `den` has a zero constant term.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(
            !den.coeff(0).is_zero(),
            "denominator must have a nonzero constant term"
        );
        if num.is_zero() {
            return RationalFunction {
                numerator: Poly::zero(),
                denominator: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g).expect("gcd divides numerator");
        let mut den = den.div_exact(&g).expect("gcd divides denominator");
        let c = num.content().gcd(&den.content());
        let c = if den.coeff(0).is_negative() { -c } else { c };
        num = Poly::new(num.coeffs().iter().map(|a| a / &c).collect());
        den = Poly::new(den.coeffs().iter().map(|a| a / &c).collect());
        RationalFunction {
            numerator: num,
            denominator: den,
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    /// The first `n` coefficients of the power series at 0.
    ///
    /// Panics if a coefficient is not integral, which cannot happen for
    /// generating functions of languages.
    pub fn series(&self, n: usize) -> Vec<BigInt> {
        let d0 = self.denominator.coeff(0);
        let mut out: Vec<BigInt> = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = self.numerator.coeff(i);
            for j in 1..=i.min(self.denominator.degree().unwrap_or(0)) {
                acc -= self.denominator.coeff(j) * &out[i - j];
            }
            let (q, r) = acc.div_rem(&d0);
            assert!(r.is_zero(), "non-integral series coefficient");
            out.push(q);
        }
        out
    }
}

fn wrap(p: &Poly) -> String {
    let terms = p.coeffs().iter().filter(|c| !c.is_zero()).count();
    if terms > 1 {
        format!("({p})")
    } else {
        p.to_string()
    }
}

impl fmt::Display for RationalFunction {
    /// `1/(1 - 1*x)`, with parentheses around multi-term polynomials.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", wrap(&self.numerator), wrap(&self.denominator))
    }
}

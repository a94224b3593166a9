//! The coefficient field: arbitrary-precision rationals.
//!
//! `BigRational` already maintains the invariants we need (reduced to
//! lowest terms, positive denominator, zero stored as 0/1), so the type
//! is re-exported rather than wrapped.

use num::BigInt;

pub use num::BigRational as Rational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational n/d (reduced, sign normalized). Panics if d = 0.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical `"num/den"` form, e.g. `"-3/1"`, `"1/2"`.
pub fn to_frac_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Compact form: bare integer when the denominator is 1.
pub fn to_compact_string(r: &Rational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse either `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    s.trim().parse::<Rational>().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::{Signed, Zero};

    #[test]
    fn reduced_and_sign_normalized() {
        let r = ratio(4, -6);
        assert_eq!(r, ratio(-2, 3));
        assert!(r.denom().is_positive());
        assert_eq!(ratio(0, 7), rat(0));
        assert!(ratio(0, 7).numer().is_zero());
    }

    #[test]
    fn frac_string_round_trip() {
        for r in [rat(5), ratio(-3, 4), rat(0), ratio(7, 2)] {
            assert_eq!(parse_rational(&to_frac_string(&r)).unwrap(), r);
            assert_eq!(parse_rational(&to_compact_string(&r)).unwrap(), r);
        }
    }
}

//! Minimal arbitrary-precision complex arithmetic on MPFR floats.
//!
//! Only what the completion apparatus needs: field operations, complex
//! exponential, absolute value, and integer powers. Precision is carried
//! by the real parts; binary operations take it from the left operand.

use rug::float::Constant;
use rug::Float;

use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct MpComplex {
    pub re: Float,
    pub im: Float,
}

impl MpComplex {
    pub fn new(prec: u32) -> Self {
        MpComplex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        MpComplex { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn from_parts(re: Float, im: Float) -> Self {
        MpComplex { re, im }
    }

    pub fn from_real(re: Float) -> Self {
        let p = re.prec();
        MpComplex { re, im: Float::new(p) }
    }

    pub fn real(prec: u32, re: f64) -> Self {
        Self::from_f64(prec, re, 0.0)
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::real(prec, 1.0)
    }

    pub fn i(prec: u32) -> Self {
        Self::from_f64(prec, 0.0, 1.0)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec();
        MpComplex {
            re: Float::with_val(p, &self.re + &o.re),
            im: Float::with_val(p, &self.im + &o.im),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec();
        MpComplex {
            re: Float::with_val(p, &self.re - &o.re),
            im: Float::with_val(p, &self.im - &o.im),
        }
    }

    pub fn neg(&self) -> Self {
        let p = self.prec();
        MpComplex { re: Float::with_val(p, -&self.re), im: Float::with_val(p, -&self.im) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        MpComplex { re: Float::with_val(p, re), im: Float::with_val(p, im) }
    }

    pub fn div(&self, o: &Self) -> Self {
        let p = self.prec();
        let norm = o.norm_sqr();
        let re = Float::with_val(p, &self.re * &o.re) + Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.im * &o.re) - Float::with_val(p, &self.re * &o.im);
        MpComplex {
            re: Float::with_val(p, re / &norm),
            im: Float::with_val(p, im / &norm),
        }
    }

    pub fn recip(&self) -> Self {
        Self::one(self.prec()).div(self)
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec();
        MpComplex { re: Float::with_val(p, &self.re * s), im: Float::with_val(p, &self.im * s) }
    }

    pub fn scale_f64(&self, s: f64) -> Self {
        let p = self.prec();
        MpComplex { re: Float::with_val(p, &self.re * s), im: Float::with_val(p, &self.im * s) }
    }

    /// i·z = (-im, re).
    pub fn mul_i(&self) -> Self {
        let p = self.prec();
        MpComplex { re: Float::with_val(p, -&self.im), im: self.re.clone() }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().square() + self.im.clone().square())
    }

    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    /// e^z = e^re (cos im + i sin im).
    pub fn exp(&self) -> Self {
        let p = self.prec();
        let mag = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        MpComplex { re: Float::with_val(p, &mag * &c), im: Float::with_val(p, &mag * &s) }
    }

    /// z^n for any integer n (square-and-multiply; negative via recip).
    pub fn powi(&self, n: i64) -> Self {
        let p = self.prec();
        if n < 0 {
            return self.recip().powi(-n);
        }
        let mut base = self.clone();
        let mut acc = Self::one(p);
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn to_f64s(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// Exact rational to float at the given precision.
pub fn rational_to_float(r: &Rational, prec: u32) -> Float {
    let num = Float::with_val(prec, Float::parse(r.numer().to_string()).expect("integer literal"));
    let den = Float::with_val(prec, Float::parse(r.denom().to_string()).expect("integer literal"));
    Float::with_val(prec, num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn close(a: &MpComplex, re: f64, im: f64, tol: f64) -> bool {
        (a.re.to_f64() - re).abs() < tol && (a.im.to_f64() - im).abs() < tol
    }

    #[test]
    fn field_operations() {
        let a = MpComplex::from_f64(P, 1.0, 2.0);
        let b = MpComplex::from_f64(P, -3.0, 0.5);
        assert!(close(&a.add(&b), -2.0, 2.5, 1e-30));
        assert!(close(&a.mul(&b), -4.0, -5.5, 1e-30));
        let q = a.div(&b);
        assert!(close(&q.mul(&b), 1.0, 2.0, 1e-25));
    }

    #[test]
    fn exp_of_half_turn() {
        // e^(i pi) = -1
        let z = MpComplex::from_parts(Float::new(P), pi(P));
        let e = z.exp();
        assert!(close(&e, -1.0, 0.0, 1e-30));
    }

    #[test]
    fn integer_powers() {
        let z = MpComplex::from_f64(P, 0.3, -0.4);
        let w = z.powi(5);
        let mut direct = MpComplex::one(P);
        for _ in 0..5 {
            direct = direct.mul(&z);
        }
        assert!((w.sub(&direct)).abs().to_f64() < 1e-30);
        let inv = z.powi(-3).mul(&z.powi(3));
        assert!(close(&inv, 1.0, 0.0, 1e-25));
    }

    #[test]
    fn rational_conversion_is_exact_for_dyadics() {
        let r = crate::rational::ratio(-3, 8);
        let f = rational_to_float(&r, P);
        assert_eq!(f.to_f64(), -0.375);
    }
}

//! The nonholomorphic completion apparatus: the error-function integral
//! E, Zwegers' R and μ, Choi's 𝓜 and 𝒰, the completion 𝒞 of the
//! universal mock theta 𝓡, the completion terms of ν, φ, ρ, and the
//! assembled completions of the depth-two products.
//!
//! Fractional powers (q^(1/8), q^(-1/2), ...) are always computed as
//! exponentials of linear forms in τ, u, v; no branch cut on q is ever
//! taken.

use rug::Float;

use super::complex::{pi, MpComplex};
use super::{NumericError, NumericPolicy, NumericResult};

/// E(z) = 2 ∫_0^z e^(-π t²) dt = erf(√π z).
pub fn e_function(z: f64, policy: &NumericPolicy) -> Float {
    let p = policy.prec_bits();
    let x = Float::with_val(p, pi(p).sqrt() * z);
    x.erf()
}

/// sgn(n) - E(x) for half-integer n, computed through erfc: no
/// precision is lost when E(x) approaches ±1. Half-integers are never
/// zero, so no sgn(0) convention is needed.
fn sign_minus_e(n_positive: bool, x: &Float) -> Float {
    let p = x.prec();
    let sqrt_pi = pi(p).sqrt();
    if n_positive {
        // 1 - erf(√π x) = erfc(√π x)
        Float::with_val(p, &sqrt_pi * x).erfc()
    } else {
        // -1 - erf(√π x) = -erfc(-√π x)
        -Float::with_val(p, -(Float::with_val(p, &sqrt_pi * x))).erfc()
    }
}

/// Zwegers' nonholomorphic R(u;τ) =
/// Σ_{n ∈ 1/2+Z} [sgn(n) - E((n + Im u/Im τ)√(2 Im τ))]
///              (-1)^(n-1/2) e^(-πi n² τ - 2πi n u).
///
/// Terms decay like a Gaussian in n; summation stops once the term
/// magnitude stays below the policy threshold.
pub fn zwegers_r(u: &MpComplex, tau: &MpComplex, policy: &NumericPolicy) -> NumericResult<MpComplex> {
    let p = policy.prec_bits();
    let im = tau.im.to_f64();
    if im <= 0.0 || im.is_nan() {
        return Err(NumericError::Domain { what: format!("R(u;tau) needs Im(tau) > 0, got {im}") });
    }
    let a = Float::with_val(p, &u.im / &tau.im);
    let sqrt_2y = Float::with_val(p, Float::with_val(p, 2.0 * &tau.im).sqrt());
    let pi_p = pi(p);
    let eps = policy.stop_eps();

    let term = |k: i64| -> MpComplex {
        // n = k + 1/2
        let n = Float::with_val(p, 2 * k + 1) / 2u32;
        let n = Float::with_val(p, n);
        let x = Float::with_val(p, Float::with_val(p, &n + &a) * &sqrt_2y);
        let bracket = sign_minus_e(k >= 0, &x);
        // exponent: -πi n² τ - 2πi n u
        let n2 = n.clone().square();
        let c1 = Float::with_val(p, &pi_p * &n2);
        let c2 = Float::with_val(p, 2.0 * Float::with_val(p, &pi_p * &n));
        let arg = tau.mul_i().scale(&c1).add(&u.mul_i().scale(&c2)).neg();
        let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        arg.exp().scale(&bracket).scale_f64(sign)
    };

    let mut sum = MpComplex::zero(p);
    for direction in [0i64, -1] {
        let mut quiet = 0;
        let mut count = 0usize;
        let mut k = direction;
        loop {
            let t = term(k);
            sum = sum.add(&t);
            if t.abs() < eps {
                quiet += 1;
                if quiet >= 2 {
                    break;
                }
            } else {
                quiet = 0;
            }
            count += 1;
            if count > policy.max_terms {
                return Err(NumericError::Convergence {
                    what: format!("R(u;tau) exceeded {} terms", policy.max_terms),
                });
            }
            k += if direction == 0 { 1 } else { -1 };
        }
    }
    Ok(sum)
}

/// (x; q)_∞ = ∏_{k≥0} (1 - x q^k), truncated once the tail bound
/// |x| |q|^k / (1 - |q|) falls below the stopping threshold.
pub fn qpoch_inf(
    x: &MpComplex,
    q: &MpComplex,
    policy: &NumericPolicy,
    guard_poles: bool,
) -> NumericResult<MpComplex> {
    let p = policy.prec_bits();
    let q_abs = q.abs().to_f64();
    if q_abs >= 1.0 || q_abs.is_nan() {
        return Err(NumericError::Domain { what: format!("(x;q)_inf needs |q| < 1, got {q_abs}") });
    }
    let eps = policy.stop_eps();
    let tail_scale = 1.0 - q_abs;
    let mut acc = MpComplex::one(p);
    let mut xq = x.clone();
    for k in 0..=policy.max_terms {
        if xq.abs().to_f64() * 2.0 < eps.to_f64() * tail_scale {
            return Ok(acc);
        }
        let factor = MpComplex::one(p).sub(&xq);
        if guard_poles && factor.abs().to_f64() <= policy.pole_eps {
            return Err(NumericError::PoleProximity {
                what: format!("(x;q)_inf factor 1 - x q^{k} vanishes"),
            });
        }
        acc = acc.mul(&factor);
        xq = xq.mul(q);
    }
    Err(NumericError::Convergence {
        what: format!("(x;q)_inf exceeded {} factors", policy.max_terms),
    })
}

/// e^(2πi w).
pub fn exp_2pi_i(w: &MpComplex) -> MpComplex {
    let p = w.prec();
    let two_pi = Float::with_val(p, 2.0 * pi(p));
    w.mul_i().scale(&two_pi).exp()
}

/// e^(πi w).
pub fn exp_pi_i(w: &MpComplex) -> MpComplex {
    let p = w.prec();
    w.mul_i().scale(&pi(p)).exp()
}

/// q^(1/8) = e^(πiτ/4), from τ directly.
fn q_eighth(tau: &MpComplex) -> MpComplex {
    exp_pi_i(&tau.scale_f64(0.25))
}

/// Zwegers' μ-function in the printed product-denominator form:
/// μ(e^(2πiu), e^(2πiv); τ) = e^(πiu) Σ_n (-1)^n q^(n(n+1)/2) e^(2πinv) /
/// (1 - e^(2πiu) q^n) divided by
/// -i q^(1/8) e^(-πiv) (q;q)_∞ (e^(2πiv);q)_∞ (e^(-2πiv)q;q)_∞.
pub fn appell_mu(
    u: &MpComplex,
    v: &MpComplex,
    tau: &MpComplex,
    policy: &NumericPolicy,
) -> NumericResult<MpComplex> {
    let p = policy.prec_bits();
    let pi_p = pi(p);
    let eps = policy.stop_eps();
    let q = exp_2pi_i(tau);
    let e_u = exp_2pi_i(u);
    let e_v = exp_2pi_i(v);

    // bilateral sum; for n -> -∞ the denominator grows like q^n, so both
    // tails decay like q^(n(n+1)/2) or q^(n(n-1)/2)
    let term = |n: i64| -> NumericResult<MpComplex> {
        // q^(n(n+1)/2) e^(2πinv) = exp(πi n(n+1) τ + 2πi n v)
        let coeff = Float::with_val(p, (n * (n + 1)) as f64 * &pi_p);
        let vcoeff = Float::with_val(p, (2 * n) as f64 * &pi_p);
        let numer = tau.mul_i().scale(&coeff).add(&v.mul_i().scale(&vcoeff)).exp();
        let qn = exp_2pi_i(&tau.scale_f64(n as f64));
        let den = MpComplex::one(p).sub(&e_u.mul(&qn));
        if den.abs().to_f64() <= policy.pole_eps {
            return Err(NumericError::PoleProximity {
                what: format!("mu denominator 1 - e^(2πiu) q^{n} vanishes"),
            });
        }
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        Ok(numer.div(&den).scale_f64(sign))
    };

    let mut sum = MpComplex::zero(p);
    for direction in [0i64, -1] {
        let mut quiet = 0;
        let mut count = 0usize;
        let mut n = direction;
        loop {
            let t = term(n)?;
            sum = sum.add(&t);
            if t.abs() < eps {
                quiet += 1;
                if quiet >= 2 {
                    break;
                }
            } else {
                quiet = 0;
            }
            count += 1;
            if count > policy.max_terms {
                return Err(NumericError::Convergence {
                    what: format!("mu sum exceeded {} terms", policy.max_terms),
                });
            }
            n += if direction == 0 { 1 } else { -1 };
        }
    }

    let theta = qpoch_inf(&q, &q, policy, false)?
        .mul(&qpoch_inf(&e_v, &q, policy, true)?)
        .mul(&qpoch_inf(&e_v.recip().mul(&q), &q, policy, true)?);
    let den = MpComplex::i(p)
        .neg()
        .mul(&q_eighth(tau))
        .mul(&exp_pi_i(&v.neg()))
        .mul(&theta);
    if den.abs().to_f64() <= policy.pole_eps {
        return Err(NumericError::PoleProximity { what: "mu theta denominator vanishes".into() });
    }
    Ok(exp_pi_i(u).mul(&sum).div(&den))
}

/// Choi's 𝓜(u,v,τ) = i q^(1/8) (1 - e^(2πiu)) e^(πi(v-u))
/// (e^(2πi(τ-u));q)_∞ (e^(-2πiv);q)_∞ μ(e^(2πiu), e^(2πiv); τ).
pub fn choi_m(
    u: &MpComplex,
    v: &MpComplex,
    tau: &MpComplex,
    policy: &NumericPolicy,
) -> NumericResult<MpComplex> {
    let p = policy.prec_bits();
    let q = exp_2pi_i(tau);
    let e_u = exp_2pi_i(u);
    let mu = appell_mu(u, v, tau, policy)?;
    let prod1 = qpoch_inf(&exp_2pi_i(&tau.sub(u)), &q, policy, true)?;
    let prod2 = qpoch_inf(&exp_2pi_i(&v.neg()), &q, policy, true)?;
    Ok(MpComplex::i(p)
        .mul(&q_eighth(tau))
        .mul(&MpComplex::one(p).sub(&e_u))
        .mul(&exp_pi_i(&v.sub(u)))
        .mul(&prod1)
        .mul(&prod2)
        .mul(&mu))
}

/// 𝓡(α,β;q) = Σ_{n≥0} (αβ)^n q^(n²) / ((αq;q)_n (βq;q)_n), direct
/// summation with geometric tail.
pub fn universal_r_num(
    alpha: &MpComplex,
    beta: &MpComplex,
    q: &MpComplex,
    policy: &NumericPolicy,
) -> NumericResult<MpComplex> {
    let p = policy.prec_bits();
    let q_abs = q.abs().to_f64();
    if q_abs >= 1.0 || q_abs.is_nan() {
        return Err(NumericError::Domain {
            what: format!("R(alpha,beta;q) needs |q| < 1, got {q_abs}"),
        });
    }
    let eps = policy.stop_eps();
    let ab = alpha.mul(beta);
    let mut sum = MpComplex::zero(p);
    let mut den_inv = MpComplex::one(p);
    let mut ab_pow = MpComplex::one(p);
    let mut q_sq = MpComplex::one(p); // q^(n²)
    let mut q_pow = MpComplex::one(p); // q^n
    let mut q_odd = q.clone(); // q^(2n+1)
    let mut quiet = 0;
    for n in 0..=policy.max_terms {
        if n > 0 {
            q_pow = q_pow.mul(q);
            // q^(n²) = q^((n-1)²) * q^(2n-1)
            q_sq = q_sq.mul(&q_odd);
            q_odd = q_odd.mul(q).mul(q);
            ab_pow = ab_pow.mul(&ab);
            for x in [alpha, beta] {
                let factor = MpComplex::one(p).sub(&x.mul(&q_pow));
                if factor.abs().to_f64() <= policy.pole_eps {
                    return Err(NumericError::PoleProximity {
                        what: format!("R denominator factor 1 - x q^{n} vanishes"),
                    });
                }
                den_inv = den_inv.div(&factor);
            }
        }
        let term = ab_pow.mul(&q_sq).mul(&den_inv);
        sum = sum.add(&term);
        if term.abs() < eps {
            quiet += 1;
            if quiet >= 2 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(NumericError::Convergence {
        what: format!("R(alpha,beta;q) exceeded {} terms", policy.max_terms),
    })
}

/// 𝒰(α,β;q) = Σ_{n≥1} (α⁻¹;q)_n (β⁻¹;q)_n q^n.
pub fn choi_u_num(
    alpha: &MpComplex,
    beta: &MpComplex,
    q: &MpComplex,
    policy: &NumericPolicy,
) -> NumericResult<MpComplex> {
    let p = policy.prec_bits();
    let q_abs = q.abs().to_f64();
    if q_abs >= 1.0 || q_abs.is_nan() {
        return Err(NumericError::Domain {
            what: format!("U(alpha,beta;q) needs |q| < 1, got {q_abs}"),
        });
    }
    for (name, x) in [("alpha", alpha), ("beta", beta)] {
        if x.abs().to_f64() <= policy.pole_eps {
            return Err(NumericError::Domain {
                what: format!("U(alpha,beta;q): {name} must be nonzero"),
            });
        }
    }
    let eps = policy.stop_eps();
    let ai = alpha.recip();
    let bi = beta.recip();
    let mut pa = MpComplex::one(p);
    let mut pb = MpComplex::one(p);
    let mut q_pow = MpComplex::one(p); // q^(n-1) entering iteration n
    let mut sum = MpComplex::zero(p);
    let mut quiet = 0;
    for _n in 1..=policy.max_terms {
        pa = pa.mul(&MpComplex::one(p).sub(&ai.mul(&q_pow)));
        pb = pb.mul(&MpComplex::one(p).sub(&bi.mul(&q_pow)));
        q_pow = q_pow.mul(q);
        let term = pa.mul(&pb).mul(&q_pow);
        sum = sum.add(&term);
        if term.abs() < eps {
            quiet += 1;
            if quiet >= 2 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(NumericError::Convergence {
        what: format!("U(alpha,beta;q) exceeded {} terms", policy.max_terms),
    })
}

/// The completion 𝒞(e^(2πiu), e^(2πiv); q) of 𝓡, at modular variable
/// tau_base (q := e^(2πi tau_base)):
/// -q^(1/8)/2 (1-e^(2πiu)) e^(πi(v-u)) (e^(2πi(τ-u));q)_∞ (e^(-2πiv);q)_∞
/// R(u-v;τ) + 𝒰(e^(2πiu), e^(2πiv); q).
pub fn c_completion(
    u: &MpComplex,
    v: &MpComplex,
    tau_base: &MpComplex,
    policy: &NumericPolicy,
) -> NumericResult<MpComplex> {
    let pref = c_completion_prefactor(u, v, tau_base, policy)?;
    let r = zwegers_r(&u.sub(v), tau_base, policy)?;
    let q = exp_2pi_i(tau_base);
    let uu = choi_u_num(&exp_2pi_i(u), &exp_2pi_i(v), &q, policy)?;
    Ok(pref.mul(&r).add(&uu))
}

/// The R-prefactor of 𝒞 (exposed for the structural decomposition check).
pub fn c_completion_prefactor(
    u: &MpComplex,
    v: &MpComplex,
    tau_base: &MpComplex,
    policy: &NumericPolicy,
) -> NumericResult<MpComplex> {
    let p = policy.prec_bits();
    let q = exp_2pi_i(tau_base);
    let e_u = exp_2pi_i(u);
    let prod1 = qpoch_inf(&exp_2pi_i(&tau_base.sub(u)), &q, policy, true)?;
    let prod2 = qpoch_inf(&exp_2pi_i(&v.neg()), &q, policy, true)?;
    Ok(q_eighth(tau_base)
        .scale_f64(-0.5)
        .mul(&MpComplex::one(p).sub(&e_u))
        .mul(&exp_pi_i(&v.sub(u)))
        .mul(&prod1)
        .mul(&prod2))
}

/// Completion term of ν: -q^(-1/2) R(2τ; 12τ).
pub fn completion_nu(tau: &MpComplex, policy: &NumericPolicy) -> NumericResult<MpComplex> {
    let r = zwegers_r(&tau.scale_f64(2.0), &tau.scale_f64(12.0), policy)?;
    Ok(exp_pi_i(&tau.neg()).mul(&r).neg())
}

/// Completion term of φ: -e^(πi/8) q^(-1/8) R(-τ; 3τ + 1/2).
pub fn completion_phi(tau: &MpComplex, policy: &NumericPolicy) -> NumericResult<MpComplex> {
    let p = policy.prec_bits();
    let modular_var = tau.scale_f64(3.0).add(&MpComplex::real(p, 0.5));
    debug_assert!((modular_var.im.to_f64() - 3.0 * tau.im.to_f64()).abs() < 1e-12);
    let r = zwegers_r(&tau.neg(), &modular_var, policy)?;
    let phase = exp_pi_i(&MpComplex::real(p, 0.125));
    Ok(phase.mul(&exp_pi_i(&tau.scale_f64(-0.25))).mul(&r).neg())
}

/// Completion term of ρ: -(1/2) q^(-3/4) R(τ; 6τ).
pub fn completion_rho(tau: &MpComplex, policy: &NumericPolicy) -> NumericResult<MpComplex> {
    let r = zwegers_r(tau, &tau.scale_f64(6.0), policy)?;
    Ok(exp_pi_i(&tau.scale_f64(-1.5)).mul(&r).scale_f64(-0.5))
}

/// The completion arguments attached to 𝓡(ζ, β; q²): modular base 2τ,
/// u = z, and v solving e^(2πiv) = β in the fundamental strip.
pub fn completion_v(j: u8, tau: &MpComplex) -> MpComplex {
    let p = tau.prec();
    let half = MpComplex::real(p, 0.5);
    match j {
        1 => tau.add(&half),                 // β = -q
        2 => tau.scale_f64(2.0).add(&half),  // β = -q²
        3 => tau.clone(),                    // β = q
        _ => panic!("completion index must be 1, 2 or 3"),
    }
}

/// The assembled completion term of f_j, in the printed four-term form
/// -1 + P + w·𝒞 + P·w·𝒞 with P the mock theta completion term and
/// w = ζ/((1-ζ)·d_j).
pub fn f_hat(
    j: u8,
    z: &MpComplex,
    tau: &MpComplex,
    policy: &NumericPolicy,
) -> NumericResult<MpComplex> {
    let p = policy.prec_bits();
    let zeta = exp_2pi_i(z);
    let q = exp_2pi_i(tau);
    let one_minus_zeta = MpComplex::one(p).sub(&zeta);
    if one_minus_zeta.abs().to_f64() <= policy.pole_eps {
        return Err(NumericError::PoleProximity { what: "f_hat: zeta = 1".into() });
    }
    let (completion, denom) = match j {
        1 => (completion_nu(tau, policy)?, MpComplex::one(p).add(&q)),
        2 => (completion_phi(tau, policy)?, MpComplex::one(p).add(&q.mul(&q))),
        3 => (completion_rho(tau, policy)?, MpComplex::one(p).sub(&q)),
        _ => panic!("completion index must be 1, 2 or 3"),
    };
    if denom.abs().to_f64() <= policy.pole_eps {
        return Err(NumericError::PoleProximity { what: "f_hat: 1 ± q^j denominator".into() });
    }
    let w = zeta.div(&one_minus_zeta.mul(&denom));
    let c = c_completion(z, &completion_v(j, tau), &tau.scale_f64(2.0), policy)?;
    let wc = w.mul(&c);
    // printed order: -1, then P, then w·C, then P·w·C
    Ok(MpComplex::one(p)
        .neg()
        .add(&completion)
        .add(&wc)
        .add(&completion.mul(&wc)))
}

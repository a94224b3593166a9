//! Numeric twins of the symbolic series, window evaluation, and the
//! Ramanujan residual grid.
//!
//! Twins sum the defining series directly in complex arithmetic; they
//! share no code with the symbolic constructors, which makes them
//! independent cross-checks of the exact windows.

use rug::Float;

use crate::series::QSeries;

use super::complex::{rational_to_float, MpComplex};
use super::special::{choi_m, choi_u_num, universal_r_num};
use super::{GridPoint, NumericError, NumericPolicy, NumericResult};

/// Evaluate a symbolic window at numeric (ζ, q) by Horner in q.
///
/// At q = 0 only the constant-term coefficient survives; a nonzero
/// coefficient at a negative q-exponent is then a pole.
pub fn eval_qseries(
    series: &QSeries,
    zeta: &MpComplex,
    q: &MpComplex,
    policy: &NumericPolicy,
) -> NumericResult<MpComplex> {
    let p = policy.prec_bits();
    let eval_coeff = |q_exp: i64| -> MpComplex {
        let mut acc = MpComplex::zero(p);
        if let Some(z) = series.coeff(q_exp) {
            for (e, r) in z.iter() {
                acc = acc.add(&zeta.powi(e).scale(&rational_to_float(r, p)));
            }
        }
        acc
    };
    if q.abs().to_f64() == 0.0 {
        for (q_exp, z) in series.iter_nonzero() {
            if q_exp < 0 && !z.is_zero() {
                return Err(NumericError::Domain {
                    what: format!("window has a pole at q = 0 (coefficient at q^{q_exp})"),
                });
            }
        }
        return Ok(eval_coeff(0));
    }
    let mut acc = MpComplex::zero(p);
    for q_exp in (series.min_order()..=series.qmax()).rev() {
        acc = acc.mul(q).add(&eval_coeff(q_exp));
    }
    Ok(acc.mul(&q.powi(series.min_order())))
}

fn check_q(q: &MpComplex, what: &str) -> NumericResult<()> {
    let q_abs = q.abs().to_f64();
    if q_abs >= 1.0 || q_abs.is_nan() {
        return Err(NumericError::Domain { what: format!("{what} needs |q| < 1, got {q_abs}") });
    }
    Ok(())
}

/// Run a simple summation with the policy's quiet-stop convention.
fn sum_until_quiet<F>(
    policy: &NumericPolicy,
    what: &str,
    mut term: F,
) -> NumericResult<MpComplex>
where
    F: FnMut(usize) -> NumericResult<Option<MpComplex>>,
{
    let p = policy.prec_bits();
    let eps = policy.stop_eps();
    let mut sum = MpComplex::zero(p);
    let mut quiet = 0;
    for n in 0..=policy.max_terms {
        match term(n)? {
            None => return Ok(sum),
            Some(t) => {
                sum = sum.add(&t);
                if t.abs() < eps {
                    quiet += 1;
                    if quiet >= 2 {
                        return Ok(sum);
                    }
                } else {
                    quiet = 0;
                }
            }
        }
    }
    Err(NumericError::Convergence { what: format!("{what} exceeded {} terms", policy.max_terms) })
}

/// ν(q) = Σ q^(n(n+1)) / (-q;q²)_{n+1}, numerically.
pub fn nu_num(q: &MpComplex, policy: &NumericPolicy) -> NumericResult<MpComplex> {
    check_q(q, "nu(q)")?;
    let p = policy.prec_bits();
    let mut inv_poch = MpComplex::one(p);
    let q2 = q.mul(q);
    let mut q_odd = q.clone(); // q^(2n+1)
    let mut q_tri = MpComplex::one(p); // q^(n(n+1))
    let mut q_even = MpComplex::one(p); // q^(2n)
    sum_until_quiet(policy, "nu(q)", move |n| {
        if n > 0 {
            q_even = q_even.mul(&q2);
            q_tri = q_tri.mul(&q_even); // n(n+1) - (n-1)n = 2n
            q_odd = q_odd.mul(&q2);
        }
        inv_poch = inv_poch.div(&MpComplex::one(p).add(&q_odd).clone());
        Ok(Some(q_tri.mul(&inv_poch)))
    })
}

/// φ(q) = Σ q^(n²) / (-q²;q²)_n, numerically.
pub fn phi_num(q: &MpComplex, policy: &NumericPolicy) -> NumericResult<MpComplex> {
    check_q(q, "phi(q)")?;
    let p = policy.prec_bits();
    let q2 = q.mul(q);
    let mut inv_poch = MpComplex::one(p);
    let mut q_sq = MpComplex::one(p); // q^(n²)
    let mut q_even = MpComplex::one(p); // q^(2n)
    let mut q_odd = q.recip(); // q^(2n-1)
    sum_until_quiet(policy, "phi(q)", move |n| {
        if n > 0 {
            q_even = q_even.mul(&q2);
            q_odd = q_odd.mul(&q2);
            q_sq = q_sq.mul(&q_odd); // n² - (n-1)² = 2n-1
            inv_poch = inv_poch.div(&MpComplex::one(p).add(&q_even));
        }
        Ok(Some(q_sq.mul(&inv_poch)))
    })
}

/// ρ(q) = Σ q^(n²) / (q;q²)_n, numerically.
pub fn rho_num(q: &MpComplex, policy: &NumericPolicy) -> NumericResult<MpComplex> {
    check_q(q, "rho(q)")?;
    let p = policy.prec_bits();
    let q2 = q.mul(q);
    let mut inv_poch = MpComplex::one(p);
    let mut q_sq = MpComplex::one(p);
    let mut q_odd_num = q.recip(); // q^(2n-1) for the exponent update
    let mut q_odd_den = q.div(&q2); // q^(2n-1) entering the new factor
    sum_until_quiet(policy, "rho(q)", move |n| {
        if n > 0 {
            q_odd_num = q_odd_num.mul(&q2);
            q_sq = q_sq.mul(&q_odd_num);
            q_odd_den = q_odd_den.mul(&q2);
            inv_poch = inv_poch.div(&MpComplex::one(p).sub(&q_odd_den));
        }
        Ok(Some(q_sq.mul(&inv_poch)))
    })
}

/// Direct numeric double sum for the Lovejoy–Osburn series (j_sign = ±1
/// selects the q^(j²±j+n) exponent).
fn loos_num(q: &MpComplex, policy: &NumericPolicy, j_sign: i64, what: &str) -> NumericResult<MpComplex> {
    check_q(q, what)?;
    let p = policy.prec_bits();
    let eps = policy.stop_eps();
    let q_abs = q.abs().to_f64();
    // magnitude cutoff: |q|^e below eps is negligible; factors are bounded
    let e_cutoff = (eps.to_f64().ln() / q_abs.ln()).ceil() as i64 + 8;
    let q2 = q.mul(q);

    // (-1;q)_{2n} built incrementally over n
    let mut poch_m1 = vec![MpComplex::one(p)];
    // 1/(q²;q²)_k
    let mut inv_q2 = vec![MpComplex::one(p)];

    let mut sum = MpComplex::zero(p);
    let mut j = 1i64;
    while j * j + j_sign * j + j <= e_cutoff {
        if (j * j) as usize > policy.max_terms {
            return Err(NumericError::Convergence { what: format!("{what} index overflow") });
        }
        let inv_4j2 = MpComplex::one(p).sub(&q.powi(4 * j - 2)).recip();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let mut n = j;
        while j * j + j_sign * j + n <= e_cutoff {
            while poch_m1.len() <= n as usize {
                let k = poch_m1.len() as i64;
                let next = poch_m1
                    .last()
                    .unwrap()
                    .mul(&MpComplex::one(p).add(&q.powi(2 * k - 2)))
                    .mul(&MpComplex::one(p).add(&q.powi(2 * k - 1)));
                poch_m1.push(next);
            }
            while inv_q2.len() <= (n - j).max(j - 1) as usize {
                let k = inv_q2.len() as i64;
                let next =
                    inv_q2.last().unwrap().div(&MpComplex::one(p).sub(&q2.powi(k)));
                inv_q2.push(next);
            }
            let term = poch_m1[n as usize]
                .mul(&inv_q2[(n - j) as usize])
                .mul(&inv_q2[(j - 1) as usize])
                .mul(&inv_4j2)
                .mul(&q.powi(j * j + j_sign * j + n))
                .scale_f64(sign);
            sum = sum.add(&term);
            n += 1;
        }
        j += 1;
    }
    Ok(sum)
}

pub fn m10_num(q: &MpComplex, policy: &NumericPolicy) -> NumericResult<MpComplex> {
    loos_num(q, policy, 1, "M10")
}

pub fn m17_num(q: &MpComplex, policy: &NumericPolicy) -> NumericResult<MpComplex> {
    loos_num(q, policy, -1, "M17")
}

/// Direct numeric double sum for the depth-two representations. The
/// m-sum converges geometrically in |ζ|, so the twin is restricted to
/// |ζ| ≤ 0.7; at roots of unity only the 𝓡-based closed forms apply.
pub fn double_sum_num(
    j: u8,
    zeta: &MpComplex,
    q: &MpComplex,
    policy: &NumericPolicy,
) -> NumericResult<MpComplex> {
    check_q(q, "double sum")?;
    let zeta_abs = zeta.abs().to_f64();
    if zeta_abs > 0.7 {
        return Err(NumericError::Domain {
            what: format!("double-sum twin needs |zeta| <= 0.7, got {zeta_abs}"),
        });
    }
    let p = policy.prec_bits();
    let eps = policy.stop_eps();
    let q2 = q.mul(q);
    let q_abs = q.abs().to_f64();
    let n_cutoff = ((eps.to_f64().ln() / q_abs.ln()).abs().sqrt().ceil() as i64) + 4;
    let m_cutoff = (eps.to_f64().ln() / zeta_abs.max(0.05).ln()).ceil() as i64 + 8;

    let pick_offset = if j == 1 { 0 } else { 1 };
    let mu_pow: (f64, i64) = match j {
        1 => (-1.0, 1),
        2 => (-1.0, 2),
        3 => (1.0, 1),
        _ => panic!("double sum index must be 1, 2 or 3"),
    };

    // (q²;q²)_k running values for the q-binomials
    let mut poch_q2 = vec![MpComplex::one(p)];
    let ensure_poch = |v: &mut Vec<MpComplex>, len: usize, q2: &MpComplex| {
        while v.len() <= len {
            let k = v.len() as i64;
            let next = v.last().unwrap().mul(&MpComplex::one(p).sub(&q2.powi(k)));
            v.push(next);
        }
    };

    let mut sum = MpComplex::zero(p);
    for n in 0..=n_cutoff {
        let row_q = match j {
            1 => 2 * n * n,
            _ => 2 * n * n + n,
        };
        // row denominator: 1 + q^(2n-1), 1 + q^(2n), 1 - q^(2n-1)
        let row_den = match j {
            1 => MpComplex::one(p).add(&q.powi(2 * n - 1)),
            2 => MpComplex::one(p).add(&q.powi(2 * n)),
            3 => MpComplex::one(p).sub(&q.powi(2 * n - 1)),
            _ => unreachable!(),
        };
        if row_den.abs().to_f64() <= policy.pole_eps {
            return Err(NumericError::PoleProximity { what: "double-sum row denominator".into() });
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        // (μ;q²)_{m+2n} running product and the pick product over m
        let mut mu_poch = MpComplex::one(p);
        for k in 0..2 * n {
            mu_poch = mu_poch.mul(&MpComplex::one(p).sub(&q.powi(mu_pow.1 + 2 * k).scale_f64(mu_pow.0)));
        }
        let mut pick = MpComplex::one(p);
        let zeta_inv = if zeta_abs > policy.pole_eps { Some(zeta.recip()) } else { None };
        for m in 0..=m_cutoff {
            if m > 0 {
                let exponent = 2 * n + pick_offset + 2 * (m - 1);
                let shift = match &zeta_inv {
                    Some(zi) => zi.mul(&q.powi(exponent)),
                    // ζ = 0: the pick factor's ζ^-1 term pairs with ζ^(n+m)
                    // later; handled by the closed form below
                    None => MpComplex::zero(p),
                };
                pick = pick.mul(&MpComplex::one(p).add(&shift));
                mu_poch = mu_poch.mul(
                    &MpComplex::one(p)
                        .sub(&q.powi(mu_pow.1 + 2 * (m - 1 + 2 * n)).scale_f64(mu_pow.0)),
                );
            }
            ensure_poch(&mut poch_q2, (m + n) as usize, &q2);
            let binom = poch_q2[(m + n) as usize]
                .div(&poch_q2[m as usize])
                .div(&poch_q2[n as usize]);
            let term = zeta
                .powi(n + m)
                .mul(&q.powi(row_q))
                .mul(&binom)
                .mul(&pick)
                .div(&row_den)
                .div(&mu_poch)
                .scale_f64(sign);
            sum = sum.add(&term);
        }
    }
    // global factors
    let result = match j {
        1 => sum.mul(&MpComplex::one(p).add(&q.recip())),
        2 => sum.scale_f64(2.0),
        3 => sum.mul(&MpComplex::one(p).sub(&q.recip())),
        _ => unreachable!(),
    };
    Ok(result)
}

/// Direct numeric (1-ζ)·f_j: the mock theta factor times
/// (1-ζ) + ζ/d_j · 𝓡(ζ, β_j; q²).
pub fn f_cleared_num(
    j: u8,
    zeta: &MpComplex,
    q: &MpComplex,
    policy: &NumericPolicy,
) -> NumericResult<MpComplex> {
    check_q(q, "(1-zeta) f_j")?;
    let p = policy.prec_bits();
    let q2 = q.mul(q);
    let (mock, denom, beta) = match j {
        1 => (
            MpComplex::one(p).add(&nu_num(q, policy)?),
            MpComplex::one(p).add(q),
            q.neg(),
        ),
        2 => (phi_num(q, policy)?, MpComplex::one(p).add(&q2), q2.neg()),
        3 => (rho_num(q, policy)?, MpComplex::one(p).sub(q), q.clone()),
        _ => panic!("cleared form index must be 1, 2 or 3"),
    };
    if denom.abs().to_f64() <= policy.pole_eps {
        return Err(NumericError::PoleProximity { what: "(1-zeta) f_j: 1 ± q^j".into() });
    }
    let r = universal_r_num(zeta, &beta, &q2, policy)?;
    let bracket = MpComplex::one(p).sub(zeta).add(&zeta.mul(&r).div(&denom));
    Ok(mock.mul(&bracket))
}

/// |𝓜(u,v,τ) - (𝓡 + 𝒰)(e^(2πiu), e^(2πiv); q)| at one grid point. The
/// point is validated first: τ in the upper half-plane and u, v at
/// lattice distance above pole_eps.
pub fn ramanujan_residual(point: &GridPoint, policy: &NumericPolicy) -> NumericResult<Float> {
    let tau_pt = super::UhpPoint::new(point.tau_re, point.tau_im, policy)?;
    let args = super::EllipticArgs::new(
        (point.u_re, point.u_im),
        (point.v_re, point.v_im),
        &tau_pt,
        policy,
    )?;
    let p = policy.prec_bits();
    let tau = tau_pt.to_mp(p);
    let u = MpComplex::from_f64(p, args.u.0, args.u.1);
    let v = MpComplex::from_f64(p, args.v.0, args.v.1);
    let q = super::special::exp_2pi_i(&tau);
    let e_u = super::special::exp_2pi_i(&u);
    let e_v = super::special::exp_2pi_i(&v);
    let m = choi_m(&u, &v, &tau, policy)?;
    let r = universal_r_num(&e_u, &e_v, &q, policy)?;
    let uu = choi_u_num(&e_u, &e_v, &q, policy)?;
    Ok(m.sub(&r).sub(&uu).abs())
}

//! Independent naive oracle for the exact windows.
//!
//! Everything here is deliberately slow and simple: flat coefficient
//! maps, full convolutions, and textbook long division. No code is
//! shared with the engine's incremental constructors, so agreement is
//! meaningful.

// each test target uses its own slice of the oracle
#![allow(dead_code)]

use std::collections::BTreeMap;

use num::{One, Zero};
use qmock_core::rational::{rat, Rational};
use qmock_core::QSeries;

type ZetaMap = BTreeMap<i64, Rational>;

/// Naive bivariate Laurent series truncated at qmax: q-exponent to
/// ζ-map.
#[derive(Clone, Debug, PartialEq)]
pub struct Naive {
    pub qmax: i64,
    pub coeffs: BTreeMap<i64, ZetaMap>,
}

fn zmap_insert_add(m: &mut ZetaMap, e: i64, c: &Rational) {
    if c.is_zero() {
        return;
    }
    let entry = m.entry(e).or_insert_with(Rational::zero);
    *entry += c;
    if entry.is_zero() {
        m.remove(&e);
    }
}

fn zmap_mul(a: &ZetaMap, b: &ZetaMap) -> ZetaMap {
    let mut out = ZetaMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            zmap_insert_add(&mut out, ea + eb, &(ca * cb));
        }
    }
    out
}

impl Naive {
    pub fn zero(qmax: i64) -> Self {
        Naive { qmax, coeffs: BTreeMap::new() }
    }

    pub fn one(qmax: i64) -> Self {
        Self::monomial(rat(1), 0, 0, qmax)
    }

    pub fn monomial(c: Rational, ez: i64, eq: i64, qmax: i64) -> Self {
        let mut s = Self::zero(qmax);
        if !c.is_zero() && eq <= qmax {
            s.coeffs.entry(eq).or_default().insert(ez, c);
        }
        s
    }

    pub fn coeff(&self, eq: i64, ez: i64) -> Rational {
        self.coeffs
            .get(&eq)
            .and_then(|m| m.get(&ez))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &Naive) -> Naive {
        assert_eq!(self.qmax, o.qmax);
        let mut out = self.clone();
        for (q, zm) in &o.coeffs {
            for (z, c) in zm {
                zmap_insert_add(out.coeffs.entry(*q).or_default(), *z, c);
            }
        }
        out.prune();
        out
    }

    pub fn scale(&self, c: &Rational) -> Naive {
        let mut out = Self::zero(self.qmax);
        for (q, zm) in &self.coeffs {
            for (z, v) in zm {
                zmap_insert_add(out.coeffs.entry(*q).or_default(), *z, &(v * c));
            }
        }
        out.prune();
        out
    }

    pub fn mul(&self, o: &Naive) -> Naive {
        assert_eq!(self.qmax, o.qmax);
        let mut out = Self::zero(self.qmax);
        for (qa, za) in &self.coeffs {
            for (qb, zb) in &o.coeffs {
                let q = qa + qb;
                if q > self.qmax {
                    continue;
                }
                let prod = zmap_mul(za, zb);
                for (z, c) in prod {
                    zmap_insert_add(out.coeffs.entry(q).or_default(), z, &c);
                }
            }
        }
        out.prune();
        out
    }

    /// Long division self/d. The divisor's lowest q-coefficient must be a
    /// plain rational (ζ-free); that covers every denominator used by the
    /// oracles, including Laurent leaders like 1 + q^-1.
    pub fn div(&self, d: &Naive) -> Naive {
        assert_eq!(self.qmax, d.qmax);
        let (&e0, lead) = d.coeffs.iter().next().expect("division by zero series");
        assert_eq!(lead.len(), 1, "divisor leading coefficient must be a constant");
        let c0 = lead.get(&0).expect("divisor leading coefficient must be zeta-free").clone();
        let mut quotient: BTreeMap<i64, ZetaMap> = BTreeMap::new();
        let start = match self.coeffs.keys().next() {
            None => return Self::zero(self.qmax),
            Some(&a0) => a0 - e0,
        };
        for k in start..=self.qmax {
            // residual = a_{k+e0} - sum_{j<k} r_j d_{k+e0-j}
            let mut acc = self.coeffs.get(&(k + e0)).cloned().unwrap_or_default();
            for (j, rj) in quotient.range(..k) {
                if let Some(dm) = d.coeffs.get(&(k + e0 - j)) {
                    for (z, c) in zmap_mul(rj, dm) {
                        zmap_insert_add(&mut acc, z, &(-c));
                    }
                }
            }
            if !acc.is_empty() {
                let rk: ZetaMap = acc.iter().map(|(&z, c)| (z, c / &c0)).collect();
                quotient.insert(k, rk);
            }
        }
        let mut out = Naive { qmax: self.qmax, coeffs: quotient };
        out.prune();
        out
    }

    fn prune(&mut self) {
        for zm in self.coeffs.values_mut() {
            zm.retain(|_, c| !c.is_zero());
        }
        self.coeffs.retain(|_, zm| !zm.is_empty());
    }
}

/// (x; q^step)_n with x = c·ζ^ez·q^eq, as a naive product.
pub fn oracle_poch(c: &Rational, ez: i64, eq: i64, step: i64, n: i64, qmax: i64) -> Naive {
    let mut acc = Naive::one(qmax);
    for j in 0..n {
        let factor = Naive::one(qmax).add(&Naive::monomial(-c.clone(), ez, eq + step * j, qmax));
        acc = acc.mul(&factor);
    }
    acc
}

pub fn oracle_nu(qmax: i64) -> Naive {
    let mut sum = Naive::zero(qmax);
    let mut n = 0i64;
    while n * (n + 1) <= qmax {
        let den = oracle_poch(&rat(-1), 0, 1, 2, n + 1, qmax);
        let term = Naive::monomial(rat(1), 0, n * (n + 1), qmax).div(&den);
        sum = sum.add(&term);
        n += 1;
    }
    sum
}

pub fn oracle_phi(qmax: i64) -> Naive {
    let mut sum = Naive::zero(qmax);
    let mut n = 0i64;
    while n * n <= qmax {
        let den = oracle_poch(&rat(-1), 0, 2, 2, n, qmax);
        sum = sum.add(&Naive::monomial(rat(1), 0, n * n, qmax).div(&den));
        n += 1;
    }
    sum
}

pub fn oracle_rho(qmax: i64) -> Naive {
    let mut sum = Naive::zero(qmax);
    let mut n = 0i64;
    while n * n <= qmax {
        let den = oracle_poch(&rat(1), 0, 1, 2, n, qmax);
        sum = sum.add(&Naive::monomial(rat(1), 0, n * n, qmax).div(&den));
        n += 1;
    }
    sum
}

/// 𝓡(α, β; q^step) by direct summation and long division.
pub fn oracle_universal_r(
    alpha: (&Rational, i64, i64),
    beta: (&Rational, i64, i64),
    step: i64,
    qmax: i64,
) -> Naive {
    let mut sum = Naive::zero(qmax);
    let ab_eq = alpha.2 + beta.2;
    let mut n = 0i64;
    while step * n * n + n * ab_eq <= qmax + 4 {
        let da = oracle_poch(alpha.0, alpha.1, alpha.2 + step, step, n, qmax);
        let db = oracle_poch(beta.0, beta.1, beta.2 + step, step, n, qmax);
        let mut cp = Rational::one();
        for _ in 0..n {
            cp *= &(alpha.0 * beta.0);
        }
        let numer = Naive::monomial(
            cp,
            n * (alpha.1 + beta.1),
            step * n * n + n * ab_eq,
            qmax,
        );
        sum = sum.add(&numer.div(&da.mul(&db)));
        n += 1;
    }
    sum
}

/// 𝒰(α, β; q^step) by direct summation (no division needed).
pub fn oracle_choi_u(
    alpha: (&Rational, i64, i64),
    beta: (&Rational, i64, i64),
    step: i64,
    qmax: i64,
) -> Naive {
    let mut sum = Naive::zero(qmax);
    let ai = (alpha.0.clone().recip(), -alpha.1, -alpha.2);
    let bi = (beta.0.clone().recip(), -beta.1, -beta.2);
    let mut n = 1i64;
    while step * n <= qmax + 4 {
        let pa = oracle_poch(&ai.0, ai.1, ai.2, step, n, qmax);
        let pb = oracle_poch(&bi.0, bi.1, bi.2, step, n, qmax);
        sum = sum.add(&pa.mul(&pb).mul(&Naive::monomial(rat(1), 0, step * n, qmax)));
        n += 1;
    }
    sum
}

/// The Lovejoy–Osburn sums by direct double summation.
pub fn oracle_loos(qmax: i64, j_sign: i64) -> Naive {
    let mut sum = Naive::zero(qmax);
    let mut j = 1i64;
    while j * j + j_sign * j + j <= qmax {
        let mut n = j;
        while j * j + j_sign * j + n <= qmax {
            let numer = oracle_poch(&rat(-1), 0, 0, 1, 2 * n, qmax)
                .mul(&Naive::monomial(rat(1), 0, j * j + j_sign * j + n, qmax));
            let den = oracle_poch(&rat(1), 0, 2, 2, n - j, qmax)
                .mul(&oracle_poch(&rat(1), 0, 2, 2, j - 1, qmax))
                .mul(&Naive::one(qmax).add(&Naive::monomial(rat(-1), 0, 4 * j - 2, qmax)));
            let sign = if j % 2 == 0 { rat(1) } else { rat(-1) };
            sum = sum.add(&numer.div(&den).scale(&sign));
            n += 1;
        }
        j += 1;
    }
    sum
}

/// [m choose n] in base q^step via naive Pochhammer division.
pub fn oracle_qbinom(m: i64, n: i64, step: i64, qmax: i64) -> Naive {
    let num = oracle_poch(&rat(1), 0, step, step, m, qmax);
    let den = oracle_poch(&rat(1), 0, step, step, m - n, qmax)
        .mul(&oracle_poch(&rat(1), 0, step, step, n, qmax));
    num.div(&den)
}

/// The depth-two double sum over a bounded index set, with global factors.
pub fn oracle_double_sum(j: u8, nmax: i64, mmax: i64, qmax: i64) -> Naive {
    let (pick_offset, mu_c, mu_eq): (i64, i64, i64) = match j {
        1 => (0, -1, 1),
        2 => (1, -1, 2),
        3 => (1, 1, 1),
        _ => panic!("index"),
    };
    let mut sum = Naive::zero(qmax);
    for n in 0..=nmax {
        let row_q = match j {
            1 => 2 * n * n,
            _ => 2 * n * n + n,
        };
        let row_den = match j {
            1 => Naive::one(qmax).add(&Naive::monomial(rat(1), 0, 2 * n - 1, qmax)),
            2 => Naive::one(qmax).add(&Naive::monomial(rat(1), 0, 2 * n, qmax)),
            3 => Naive::one(qmax).add(&Naive::monomial(rat(-1), 0, 2 * n - 1, qmax)),
            _ => unreachable!(),
        };
        let sign = if n % 2 == 0 { rat(1) } else { rat(-1) };
        for m in 0..=mmax {
            let binom = oracle_qbinom(m + n, m, 2, qmax);
            let pick = oracle_poch(&rat(-1), -1, 2 * n + pick_offset, 2, m, qmax);
            let mu_poch = oracle_poch(&rat(mu_c), 0, mu_eq, 2, m + 2 * n, qmax);
            let term = Naive::monomial(sign.clone(), n + m, row_q, qmax)
                .mul(&binom)
                .mul(&pick)
                .div(&row_den)
                .div(&mu_poch);
            sum = sum.add(&term);
        }
    }
    match j {
        1 => sum.mul(&Naive::one(qmax).add(&Naive::monomial(rat(1), 0, -1, qmax))),
        2 => sum.scale(&rat(2)),
        3 => sum.mul(&Naive::one(qmax).add(&Naive::monomial(rat(-1), 0, -1, qmax))),
        _ => unreachable!(),
    }
}

/// The Srivastava double sum over a bounded index set (base q^step).
#[allow(clippy::too_many_arguments)]
pub fn oracle_srivastava(
    lambda: (&Rational, i64, i64),
    mu: (&Rational, i64, i64),
    z: (&Rational, i64, i64),
    step: i64,
    nmax: i64,
    mmax: i64,
    qmax: i64,
) -> Naive {
    let mut sum = Naive::zero(qmax);
    let mol = (mu.0 / lambda.0, mu.1 - lambda.1, mu.2 - lambda.2);
    for n in 0..=nmax {
        for m in 0..=mmax {
            let poch_lam = oracle_poch(lambda.0, lambda.1, lambda.2, step, m + n, qmax);
            // (-q^(sn) z / zeta; q^s)_m
            let pick = oracle_poch(
                &(-z.0.clone()),
                z.1 - 1,
                step * n + z.2,
                step,
                m,
                qmax,
            );
            let poch_mol = oracle_poch(&mol.0, mol.1, mol.2, step, n, qmax);
            let den = oracle_poch(mu.0, mu.1, mu.2, step, m + 2 * n, qmax)
                .mul(&oracle_poch(mu.0, mu.1, mu.2, step, n, qmax))
                .mul(&oracle_poch(&rat(1), 0, step, step, m, qmax))
                .mul(&oracle_poch(&rat(1), 0, step, step, n, qmax));
            let mut cp = Rational::one();
            for _ in 0..n {
                cp *= &-(lambda.0 * z.0);
            }
            let shift = Naive::monomial(
                cp,
                m + n * (lambda.1 + z.1 + 1),
                step * n * (n - 1) + n * (lambda.2 + z.2),
                qmax,
            );
            sum = sum.add(&shift.mul(&poch_lam).mul(&pick).mul(&poch_mol).div(&den));
        }
    }
    sum
}

/// Compare a naive series with an engine window on q ≤ q_hi (all ζ
/// exponents, or |ζ| ≤ cap when given); returns the first disagreement.
pub fn first_difference(
    naive: &Naive,
    series: &QSeries,
    q_hi: i64,
    zeta_cap: Option<i64>,
) -> Option<(i64, i64, Rational, Rational)> {
    let q_lo = naive
        .coeffs
        .keys()
        .next()
        .copied()
        .unwrap_or(0)
        .min(series.min_order())
        .min(0);
    for q in q_lo..=q_hi {
        let mut zs: Vec<i64> = naive.coeffs.get(&q).map(|m| m.keys().copied().collect()).unwrap_or_default();
        if let Some(zl) = series.coeff(q) {
            zs.extend(zl.iter().map(|(e, _)| e));
        }
        zs.sort_unstable();
        zs.dedup();
        for z in zs {
            if let Some(cap) = zeta_cap {
                if z.abs() > cap {
                    continue;
                }
            }
            let a = naive.coeff(q, z);
            let b = series.coeff_rat(q, z);
            if a != b {
                return Some((q, z, a, b));
            }
        }
    }
    None
}

/// Composite Simpson quadrature of 2∫_0^z e^(-π t²) dt, the independent
/// oracle for the E function.
pub fn simpson_e(z: f64) -> f64 {
    let n = 4000; // even
    let h = z / n as f64;
    let f = |t: f64| (-std::f64::consts::PI * t * t).exp();
    let mut acc = f(0.0) + f(z);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(h * k as f64);
    }
    2.0 * acc * h / 3.0
}

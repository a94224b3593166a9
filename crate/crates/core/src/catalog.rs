//! Constructors for the named q-series.
//!
//! Every series here is a [`QSeries`] built from exact Pochhammer
//! products and geometric inverses:
//!
//! - the order-three mock thetas ν, φ, ρ;
//! - the basic hypergeometric sums ₁φ₁ and ₂φ₁(·,0;·) and Fine's
//!   F(a,b;t;q);
//! - the universal mock theta 𝓡(α,β;q) and Choi's 𝒰(α,β;q);
//! - the three depth-two double sums (products of a mock theta with a
//!   specialization of 𝓡, rewritten as bivariate double sums) and their
//!   (1-ζ)-cleared product forms;
//! - the Srivastava product double sum;
//! - the Lovejoy–Osburn double sums M10 and M17.
//!
//! Summations terminate by explicit index bounds, never by coefficient
//! inspection: quadratic q-valuation growth bounds the self-terminating
//! sums, and sums over a pure ζ-power argument take their index cap from
//! the [`TruncationPolicy`].

use num::{One, Zero};

use crate::rational::{rat, Rational};
use crate::series::{
    one_plus_monomial_inv, poch, QSeries, SeriesAccumulator, SeriesError, SeriesResult,
    TruncationPolicy,
};

/// Headroom added to explicit loop bounds so constant negative q-offsets
/// (down to q^-2) cannot cut a sum short.
const BOUND_SLACK: i64 = 4;

/// Terms in the ν sum: #{n ≥ 0 : n(n+1) ≤ qmax}.
pub fn nu_term_cap(qmax: i64) -> u64 {
    let mut n = 0i64;
    while n * (n + 1) <= qmax {
        n += 1;
    }
    n as u64
}

/// Terms in the φ and ρ sums: #{n ≥ 0 : n² ≤ qmax}.
pub fn square_term_cap(qmax: i64) -> u64 {
    let mut n = 0i64;
    while n * n <= qmax {
        n += 1;
    }
    n as u64
}

/// Terms in a ₁φ₁ sum: #{n ≥ 0 : s·n(n-1)/2 + n·val(z) ≤ qmax + slack}.
pub fn phi11_term_cap(step: i64, z_eq: i64, qmax: i64) -> u64 {
    let mut n = 0i64;
    while step * n * (n - 1) / 2 + n * z_eq <= qmax + BOUND_SLACK {
        n += 1;
    }
    n as u64
}

/// Terms in an 𝓡 sum: #{n ≥ 0 : s·n² + n·val(αβ) ≤ qmax + slack}.
pub fn universal_r_term_cap(step: i64, ab_eq: i64, qmax: i64) -> u64 {
    let mut n = 0i64;
    while step * n * n + n * ab_eq <= qmax + BOUND_SLACK {
        n += 1;
    }
    n as u64
}

// ---------------------------------------------------------------------------
// Monomial parameters
// ---------------------------------------------------------------------------

/// A parameter slot c·ζ^ez·q^eq for the hypergeometric constructors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub c: Rational,
    pub ez: i64,
    pub eq: i64,
}

impl Monomial {
    pub fn new(c: Rational, ez: i64, eq: i64) -> Self {
        Monomial { c, ez, eq }
    }

    /// Plain rational constant.
    pub fn num(n: i64) -> Self {
        Monomial::new(rat(n), 0, 0)
    }

    /// c·q^eq.
    pub fn q_pow(c: i64, eq: i64) -> Self {
        Monomial::new(rat(c), 0, eq)
    }

    /// ζ.
    pub fn zeta() -> Self {
        Monomial::new(rat(1), 1, 0)
    }

    pub fn zero() -> Self {
        Monomial::new(Rational::zero(), 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(&self.c * &other.c, self.ez + other.ez, self.eq + other.eq)
    }

    pub fn inv(&self, context: &'static str) -> SeriesResult<Monomial> {
        if self.c.is_zero() {
            return Err(SeriesError::ZeroParameter { context });
        }
        Ok(Monomial::new(self.c.clone().recip(), -self.ez, -self.eq))
    }

    /// The ratio self/other as a monomial.
    pub fn div(&self, other: &Monomial, context: &'static str) -> SeriesResult<Monomial> {
        Ok(self.mul(&other.inv(context)?))
    }

    pub fn pow(&self, n: i64) -> Monomial {
        let mut c = Rational::one();
        for _ in 0..n {
            c *= &self.c;
        }
        Monomial::new(c, self.ez * n, self.eq * n)
    }

    /// (x; q^step)_n for this parameter.
    pub fn poch(&self, step: i64, n: i64, qmax: i64) -> QSeries {
        poch(&self.c, self.ez, self.eq, step, n, qmax)
    }
}

/// 1/(1 - x·q^(step·j)) for the j-th factor of (x; q^step)_n.
fn inv_factor(x: &Monomial, step: i64, j: i64, qmax: i64) -> SeriesResult<QSeries> {
    one_plus_monomial_inv(&-x.c.clone(), x.ez, x.eq + step * j, qmax)
}

// ---------------------------------------------------------------------------
// Order-three mock thetas
// ---------------------------------------------------------------------------

/// ν(q) = Σ_{n≥0} q^(n(n+1)) / (-q;q²)_{n+1}.
pub fn mock_nu(qmax: i64) -> QSeries {
    let mut acc = SeriesAccumulator::new(qmax);
    let mut inv_poch = QSeries::one(qmax);
    for n in 0..nu_term_cap(qmax) as i64 {
        // extend to (-q;q^2)_{n+1} by the factor (1 + q^(2n+1))
        let f = one_plus_monomial_inv(&rat(1), 0, 2 * n + 1, qmax)
            .expect("odd positive q-power is invertible");
        inv_poch = inv_poch.mul(&f);
        acc.add_scaled_shifted(&inv_poch, &rat(1), 0, n * (n + 1));
    }
    acc.finish()
}

/// φ(q) = Σ_{n≥0} q^(n²) / (-q²;q²)_n.
pub fn mock_phi(qmax: i64) -> QSeries {
    let mut acc = SeriesAccumulator::new(qmax);
    let mut inv_poch = QSeries::one(qmax);
    for n in 0..square_term_cap(qmax) as i64 {
        if n > 0 {
            let f = one_plus_monomial_inv(&rat(1), 0, 2 * n, qmax)
                .expect("even positive q-power is invertible");
            inv_poch = inv_poch.mul(&f);
        }
        acc.add_scaled_shifted(&inv_poch, &rat(1), 0, n * n);
    }
    acc.finish()
}

/// ρ(q) = Σ_{n≥0} q^(n²) / (q;q²)_n.
pub fn mock_rho(qmax: i64) -> QSeries {
    let mut acc = SeriesAccumulator::new(qmax);
    let mut inv_poch = QSeries::one(qmax);
    for n in 0..square_term_cap(qmax) as i64 {
        if n > 0 {
            let f = one_plus_monomial_inv(&rat(-1), 0, 2 * n - 1, qmax)
                .expect("odd positive q-power is invertible");
            inv_poch = inv_poch.mul(&f);
        }
        acc.add_scaled_shifted(&inv_poch, &rat(1), 0, n * n);
    }
    acc.finish()
}

// ---------------------------------------------------------------------------
// Basic hypergeometric sums and Fine's function
// ---------------------------------------------------------------------------

/// ₁φ₁(λ; μ; q^step; z) =
/// Σ_n (λ;q^s)_n / ((μ;q^s)_n (q^s;q^s)_n) · zⁿ · (-1)ⁿ q^(s·n(n-1)/2).
///
/// The quadratic factor guarantees termination for any monomial z.
pub fn phi11(
    lambda: &Monomial,
    mu: &Monomial,
    step: i64,
    z: &Monomial,
    qmax: i64,
) -> SeriesResult<QSeries> {
    if z.is_zero() {
        return Ok(QSeries::one(qmax));
    }
    let qs = Monomial::q_pow(1, step);
    let mut acc = SeriesAccumulator::new(qmax);
    let mut numer = QSeries::one(qmax);
    let mut den_inv = QSeries::one(qmax);
    let mut zc = Rational::one();
    for n in 0..phi11_term_cap(step, z.eq, qmax) as i64 {
        if n > 0 {
            numer = numer.mul(&QSeries::one_plus_monomial(
                -lambda.c.clone(),
                lambda.ez,
                lambda.eq + step * (n - 1),
                qmax,
            ));
            den_inv = den_inv.mul(&inv_factor(mu, step, n - 1, qmax)?);
            den_inv = den_inv.mul(&inv_factor(&qs, step, n - 1, qmax)?);
            zc = -zc * &z.c;
        }
        let term = numer.mul(&den_inv);
        acc.add_scaled_shifted(&term, &zc, n * z.ez, n * z.eq + step * n * (n - 1) / 2);
    }
    Ok(acc.finish())
}

/// ₂φ₁(λ, 0; μ; q^step; z) = Σ_n (λ;q^s)_n / ((μ;q^s)_n (q^s;q^s)_n) · zⁿ,
/// the second upper parameter being the literal 0 (so (0;q)_n = 1 and the
/// sign/q-power correction exponent is zero).
///
/// When z carries no positive q-valuation the term order does not grow
/// and the caller must supply `nmax` (derived from the policy ζ-cap).
pub fn phi21(
    lambda: &Monomial,
    mu: &Monomial,
    step: i64,
    z: &Monomial,
    qmax: i64,
    nmax: Option<i64>,
) -> SeriesResult<QSeries> {
    if z.is_zero() {
        return Ok(QSeries::one(qmax));
    }
    let stop = match (z.eq >= 1, nmax) {
        (true, _) => qmax / z.eq + BOUND_SLACK,
        (false, Some(cap)) => cap,
        (false, None) => return Err(SeriesError::MissingIndexBound { context: "2phi1" }),
    };
    let qs = Monomial::q_pow(1, step);
    let mut acc = SeriesAccumulator::new(qmax);
    let mut numer = QSeries::one(qmax);
    let mut den_inv = QSeries::one(qmax);
    let mut zc = Rational::one();
    for n in 0..=stop {
        if n > 0 {
            numer = numer.mul(&QSeries::one_plus_monomial(
                -lambda.c.clone(),
                lambda.ez,
                lambda.eq + step * (n - 1),
                qmax,
            ));
            den_inv = den_inv.mul(&inv_factor(mu, step, n - 1, qmax)?);
            den_inv = den_inv.mul(&inv_factor(&qs, step, n - 1, qmax)?);
            zc *= &z.c;
        }
        let term = numer.mul(&den_inv);
        acc.add_scaled_shifted(&term, &zc, n * z.ez, n * z.eq);
    }
    Ok(acc.finish())
}

/// Fine's function F(a,b;t;q^step) = Σ_n (a·q^s;q^s)_n / (b·q^s;q^s)_n · tⁿ.
pub fn fine_f(
    a: &Monomial,
    b: &Monomial,
    t: &Monomial,
    step: i64,
    qmax: i64,
    nmax: Option<i64>,
) -> SeriesResult<QSeries> {
    if t.is_zero() {
        return Ok(QSeries::one(qmax));
    }
    let stop = match (t.eq >= 1, nmax) {
        (true, _) => qmax / t.eq + BOUND_SLACK,
        (false, Some(cap)) => cap,
        (false, None) => return Err(SeriesError::MissingIndexBound { context: "fine F" }),
    };
    let a_shift = Monomial::new(a.c.clone(), a.ez, a.eq + step);
    let b_shift = Monomial::new(b.c.clone(), b.ez, b.eq + step);
    let mut acc = SeriesAccumulator::new(qmax);
    let mut numer = QSeries::one(qmax);
    let mut den_inv = QSeries::one(qmax);
    let mut tc = Rational::one();
    for n in 0..=stop {
        if n > 0 {
            numer = numer.mul(&QSeries::one_plus_monomial(
                -a_shift.c.clone(),
                a_shift.ez,
                a_shift.eq + step * (n - 1),
                qmax,
            ));
            den_inv = den_inv.mul(&inv_factor(&b_shift, step, n - 1, qmax)?);
            tc *= &t.c;
        }
        let term = numer.mul(&den_inv);
        acc.add_scaled_shifted(&term, &tc, n * t.ez, n * t.eq);
    }
    Ok(acc.finish())
}

// ---------------------------------------------------------------------------
// Universal mock theta 𝓡 and Choi's 𝒰
// ---------------------------------------------------------------------------

/// 𝓡(α,β;q^step) = Σ_{n≥0} (αβ)ⁿ q^(s·n²) / ((αq^s;q^s)_n (βq^s;q^s)_n).
pub fn universal_r(
    alpha: &Monomial,
    beta: &Monomial,
    step: i64,
    qmax: i64,
) -> SeriesResult<QSeries> {
    let ab = alpha.mul(beta);
    let mut acc = SeriesAccumulator::new(qmax);
    let mut den_inv = QSeries::one(qmax);
    let mut cpow = Rational::one();
    for n in 0..universal_r_term_cap(step, ab.eq, qmax) as i64 {
        if n > 0 {
            den_inv = den_inv.mul(&inv_factor(alpha, step, n, qmax)?);
            den_inv = den_inv.mul(&inv_factor(beta, step, n, qmax)?);
            cpow *= &ab.c;
        }
        acc.add_scaled_shifted(&den_inv, &cpow, n * ab.ez, step * n * n + n * ab.eq);
    }
    Ok(acc.finish())
}

/// 𝒰(α,β;q^step) = Σ_{n≥1} (α⁻¹;q^s)_n (β⁻¹;q^s)_n q^(s·n).
pub fn choi_u(alpha: &Monomial, beta: &Monomial, step: i64, qmax: i64) -> SeriesResult<QSeries> {
    let ai = alpha.inv("U(alpha, beta; q): alpha")?;
    let bi = beta.inv("U(alpha, beta; q): beta")?;
    let mut acc = SeriesAccumulator::new(qmax);
    let mut pa = QSeries::one(qmax);
    let mut pb = QSeries::one(qmax);
    let mut n = 1i64;
    while step * n <= qmax + BOUND_SLACK {
        pa = pa.mul(&QSeries::one_plus_monomial(-ai.c.clone(), ai.ez, ai.eq + step * (n - 1), qmax));
        pb = pb.mul(&QSeries::one_plus_monomial(-bi.c.clone(), bi.ez, bi.eq + step * (n - 1), qmax));
        let term = pa.mul(&pb);
        acc.add_scaled_shifted(&term, &rat(1), 0, step * n);
        n += 1;
    }
    Ok(acc.finish())
}

// ---------------------------------------------------------------------------
// Depth-two double sums and cleared product forms
// ---------------------------------------------------------------------------

/// Summation-index budget for a bivariate double sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DoubleSumBounds {
    pub nmax: i64,
    pub mmax: i64,
}

impl DoubleSumBounds {
    /// Bounds for the depth-two double sums: every window monomial
    /// ζ^a q^b with |a| ≤ A, b ≤ B receives all its contributions.
    pub fn depth_two(policy: &TruncationPolicy, boost: i64) -> Self {
        DoubleSumBounds { nmax: policy.depth_two_nmax(boost), mmax: policy.depth_two_mmax(boost) }
    }

    /// Bounds for the Srivastava product double sum (same m-logic; the
    /// n-sum gains one index because the quadratic is n(n-1), not n²).
    pub fn srivastava(policy: &TruncationPolicy, boost: i64) -> Self {
        DoubleSumBounds {
            nmax: policy.depth_two_nmax(boost) + 1,
            mmax: policy.depth_two_mmax(boost),
        }
    }

    pub fn term_count(&self) -> u64 {
        ((self.nmax + 1) * (self.mmax + 1)) as u64
    }
}

/// Per-instance data for the three depth-two double sums.
struct DoubleSumShape {
    /// q-exponent of the n-th row: 2n² or 2n²+n.
    row_q: fn(i64) -> i64,
    /// Row denominator 1 + c·q^eq(n): (c, eq).
    row_denom: fn(i64) -> (i64, i64),
    /// q-exponent offset of the (-q^(2n+δ)/ζ;q²)_m factor: δ ∈ {0, 1}.
    pick_offset: i64,
    /// μ in the trailing (μ;q²)_{m+2n} denominator: (c, eq) of μ.
    mu: (i64, i64),
}

fn double_sum_shape(j: u8) -> DoubleSumShape {
    match j {
        1 => DoubleSumShape {
            row_q: |n| 2 * n * n,
            row_denom: |n| (1, 2 * n - 1),
            pick_offset: 0,
            mu: (-1, 1),
        },
        2 => DoubleSumShape {
            row_q: |n| 2 * n * n + n,
            row_denom: |n| (1, 2 * n),
            pick_offset: 1,
            mu: (-1, 2),
        },
        3 => DoubleSumShape {
            row_q: |n| 2 * n * n + n,
            row_denom: |n| (-1, 2 * n - 1),
            pick_offset: 1,
            mu: (1, 1),
        },
        _ => panic!("double sum index must be 1, 2 or 3"),
    }
}

/// The double-sum representation of f_j, including its global factor:
/// (1+q⁻¹)·Σ for j = 1, 2·Σ for j = 2, and the (1-q⁻¹) summand factor
/// for j = 3.
pub fn double_sum(j: u8, qmax: i64, bounds: &DoubleSumBounds) -> QSeries {
    let shape = double_sum_shape(j);
    let len_max = bounds.mmax + 2 * bounds.nmax + 1;

    // 1/(1-q^(2k)) for the q-binomial updates
    let inv_q2: Vec<QSeries> = (0..=bounds.mmax + bounds.nmax + 1)
        .map(|k| {
            if k == 0 {
                QSeries::one(qmax)
            } else {
                one_plus_monomial_inv(&rat(-1), 0, 2 * k, qmax).expect("positive q-power")
            }
        })
        .collect();

    // 1/(μ;q²)_len, incrementally over len
    let mut inv_mu = Vec::with_capacity(len_max as usize + 1);
    inv_mu.push(QSeries::one(qmax));
    for len in 1..=len_max {
        let f = one_plus_monomial_inv(&rat(-shape.mu.0), 0, shape.mu.1 + 2 * (len - 1), qmax)
            .expect("positive q-power");
        inv_mu.push(inv_mu.last().unwrap().mul(&f));
    }

    let mut acc = SeriesAccumulator::new(qmax);
    for n in 0..=bounds.nmax {
        let row_q = (shape.row_q)(n);
        if row_q - 2 > qmax {
            break;
        }
        let (dc, deq) = (shape.row_denom)(n);
        let row_inv = one_plus_monomial_inv(&rat(dc), 0, deq, qmax)
            .expect("row denominator is 1 + c*q^eq with eq != 0 or constant 2");
        let sign = if n % 2 == 0 { rat(1) } else { rat(-1) };

        // running zeta-carrying product: [m+n choose m]_{q^2} * (-q^(2n+δ)/ζ;q^2)_m
        let mut zpart = QSeries::one(qmax);
        for m in 0..=bounds.mmax {
            if m > 0 {
                // q-binomial: multiply (1-q^(2(m+n)))/(1-q^(2m))
                zpart = zpart.mul(&QSeries::one_plus_monomial(rat(-1), 0, 2 * (m + n), qmax));
                zpart = zpart.mul(&inv_q2[m as usize]);
                // Pochhammer pick: (1 + zeta^-1 q^(2n+δ+2(m-1)))
                zpart = zpart.mul(&QSeries::one_plus_monomial(
                    rat(1),
                    -1,
                    2 * n + shape.pick_offset + 2 * (m - 1),
                    qmax,
                ));
            }
            let term = zpart.mul(&row_inv).mul(&inv_mu[(m + 2 * n) as usize]);
            acc.add_scaled_shifted(&term, &sign, n + m, row_q);
        }
    }
    let sum = acc.finish();
    match j {
        1 => sum.mul(&QSeries::one_plus_monomial(rat(1), 0, -1, qmax)),
        2 => sum.scale(&rat(2)),
        3 => sum.mul(&QSeries::one_plus_monomial(rat(-1), 0, -1, qmax)),
        _ => unreachable!(),
    }
}

/// (1-ζ)·f_j: the mock theta factor times the cleared bracket
/// (1-ζ) + ζ·geom·𝓡, with geom = 1/(1+q), 1/(1+q²), 1/(1-q).
///
/// Every q-coefficient is a finite ζ-polynomial; the 1/(1-ζ) pole of the
/// uncleared f_j never materializes symbolically.
pub fn f_cleared(j: u8, qmax: i64) -> QSeries {
    let zeta = Monomial::zeta();
    let (mock, geom_c, geom_eq, beta) = match j {
        1 => (QSeries::one(qmax).add(&mock_nu(qmax)), 1, 1, Monomial::q_pow(-1, 1)),
        2 => (mock_phi(qmax), 1, 2, Monomial::q_pow(-1, 2)),
        3 => (mock_rho(qmax), -1, 1, Monomial::q_pow(1, 1)),
        _ => panic!("cleared form index must be 1, 2 or 3"),
    };
    let geom = one_plus_monomial_inv(&rat(geom_c), 0, geom_eq, qmax).expect("positive q-power");
    let r = universal_r(&zeta, &beta, 2, qmax)
        .expect("R(zeta, ±q^j; q^2) denominators have positive q-valuation");
    let bracket = QSeries::one_plus_monomial(rat(-1), 1, 0, qmax)
        .add(&geom.mul(&r).mul_monomial(&rat(1), 1, 0));
    mock.mul(&bracket)
}

/// The Srivastava product double sum
/// Σ_{m,n} q^(s·n(n-1)) (λ;q^s)_{m+n} (-q^(sn)z/ζ;q^s)_m (μ/λ;q^s)_n /
/// ((μ;q^s)_{m+2n} (μ;q^s)_n) · ζ^m/(q^s;q^s)_m · (-λzζ)ⁿ/(q^s;q^s)_n.
pub fn srivastava_rhs(
    lambda: &Monomial,
    mu: &Monomial,
    z: &Monomial,
    step: i64,
    qmax: i64,
    bounds: &DoubleSumBounds,
) -> SeriesResult<QSeries> {
    let mu_over_lambda = mu.div(lambda, "Srivastava double sum: mu/lambda")?;
    let qs = Monomial::q_pow(1, step);
    let minus_lambda_z = Monomial::new(-(&lambda.c * &z.c), lambda.ez + z.ez, lambda.eq + z.eq);
    let len_max = bounds.mmax + 2 * bounds.nmax + 1;

    // 1/(μ;q^s)_len
    let mut inv_mu = Vec::with_capacity(len_max as usize + 1);
    inv_mu.push(QSeries::one(qmax));
    for len in 1..=len_max {
        inv_mu.push(inv_mu.last().unwrap().mul(&inv_factor(mu, step, len - 1, qmax)?));
    }
    // 1/(q^s;q^s)_m
    let mut inv_qs = Vec::with_capacity(bounds.mmax as usize + 1);
    inv_qs.push(QSeries::one(qmax));
    for m in 1..=bounds.mmax {
        inv_qs.push(inv_qs.last().unwrap().mul(&inv_factor(&qs, step, m - 1, qmax)?));
    }
    // (λ;q^s)_len
    let mut poch_lambda = Vec::with_capacity((bounds.mmax + bounds.nmax) as usize + 1);
    poch_lambda.push(QSeries::one(qmax));
    for len in 1..=bounds.mmax + bounds.nmax {
        poch_lambda.push(poch_lambda.last().unwrap().mul(&QSeries::one_plus_monomial(
            -lambda.c.clone(),
            lambda.ez,
            lambda.eq + step * (len - 1),
            qmax,
        )));
    }

    let mut acc = SeriesAccumulator::new(qmax);
    let mut row_const = QSeries::one(qmax); // (μ/λ;q^s)_n / ((μ;q^s)_n (q^s;q^s)_n)
    let mut row_scale = Rational::one(); // (-λz)ⁿ coefficient part
    for n in 0..=bounds.nmax {
        let row_q = step * n * (n - 1) + n * minus_lambda_z.eq;
        if n > 0 {
            row_const = row_const.mul(&QSeries::one_plus_monomial(
                -mu_over_lambda.c.clone(),
                mu_over_lambda.ez,
                mu_over_lambda.eq + step * (n - 1),
                qmax,
            ));
            row_const = row_const.mul(&inv_factor(mu, step, n - 1, qmax)?);
            row_const = row_const.mul(&inv_factor(&qs, step, n - 1, qmax)?);
            row_scale *= &minus_lambda_z.c;
        }
        if row_q - 2 > qmax {
            break;
        }
        // running (-q^(sn)z/ζ;q^s)_m
        let mut pick = QSeries::one(qmax);
        for m in 0..=bounds.mmax {
            if m > 0 {
                pick = pick.mul(&QSeries::one_plus_monomial(
                    z.c.clone(),
                    z.ez - 1,
                    step * n + z.eq + step * (m - 1),
                    qmax,
                ));
            }
            let term = poch_lambda[(m + n) as usize]
                .mul(&pick)
                .mul(&row_const)
                .mul(&inv_mu[(m + 2 * n) as usize])
                .mul(&inv_qs[m as usize]);
            acc.add_scaled_shifted(
                &term,
                &row_scale,
                m + n * (minus_lambda_z.ez + 1),
                row_q,
            );
        }
    }
    Ok(acc.finish())
}

// ---------------------------------------------------------------------------
// Lovejoy–Osburn double sums
// ---------------------------------------------------------------------------

fn loos_sum(qmax: i64, j_sign: i64) -> QSeries {
    // exponent j² + j_sign·j + n with n ≥ j ≥ 1
    let nmax = qmax; // n ≤ qmax - j² - j_sign·j ≤ qmax
    let mut poch_m1 = Vec::with_capacity(nmax as usize + 1); // (-1;q)_{2n}
    poch_m1.push(QSeries::one(qmax));
    let mut inv_q2 = Vec::with_capacity(nmax as usize + 1); // 1/(q²;q²)_k
    inv_q2.push(QSeries::one(qmax));

    let mut acc = SeriesAccumulator::new(qmax);
    let mut j = 1i64;
    while j * j + j_sign * j + j <= qmax {
        let inv_4j2 = one_plus_monomial_inv(&rat(-1), 0, 4 * j - 2, qmax).expect("positive power");
        let sign = if j % 2 == 0 { rat(1) } else { rat(-1) };
        let mut n = j;
        while j * j + j_sign * j + n <= qmax {
            while poch_m1.len() <= n as usize {
                let k = poch_m1.len() as i64; // extend to (-1;q)_{2k}
                let next = poch_m1
                    .last()
                    .unwrap()
                    .mul(&QSeries::one_plus_monomial(rat(1), 0, 2 * k - 2, qmax))
                    .mul(&QSeries::one_plus_monomial(rat(1), 0, 2 * k - 1, qmax));
                poch_m1.push(next);
            }
            while inv_q2.len() <= (n - j).max(j - 1) as usize {
                let k = inv_q2.len() as i64;
                let next = inv_q2
                    .last()
                    .unwrap()
                    .mul(&one_plus_monomial_inv(&rat(-1), 0, 2 * k, qmax).expect("positive power"));
                inv_q2.push(next);
            }
            let term = poch_m1[n as usize]
                .mul(&inv_q2[(n - j) as usize])
                .mul(&inv_q2[(j - 1) as usize])
                .mul(&inv_4j2);
            acc.add_scaled_shifted(&term, &sign, 0, j * j + j_sign * j + n);
            n += 1;
        }
        j += 1;
    }
    acc.finish()
}

/// The Lovejoy–Osburn double sum M10:
/// Σ_{n≥1} Σ_{n≥j≥1} (-1)^j (-1;q)_{2n} q^(j²+j+n) /
/// ((q²;q²)_{n-j} (q²;q²)_{j-1} (1-q^(4j-2))).
pub fn loos_m10(qmax: i64) -> QSeries {
    loos_sum(qmax, 1)
}

/// The companion sum M17 with exponent j²-j+n.
pub fn loos_m17(qmax: i64) -> QSeries {
    loos_sum(qmax, -1)
}

// ---------------------------------------------------------------------------
// Named catalog (CLI surface)
// ---------------------------------------------------------------------------

/// A named, parameter-free expansion target.
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    builder: fn(&TruncationPolicy, i64) -> SeriesResult<QSeries>,
}

impl CatalogEntry {
    pub fn build(&self, policy: &TruncationPolicy, qmax: i64) -> SeriesResult<QSeries> {
        (self.builder)(policy, qmax)
    }
}

fn q2() -> Monomial {
    Monomial::q_pow(1, 2)
}

pub fn catalog() -> &'static [CatalogEntry] {
    &[
        CatalogEntry {
            name: "nu",
            summary: "order-three mock theta nu(q) = sum q^(n(n+1))/(-q;q^2)_{n+1}",
            builder: |_, qmax| Ok(mock_nu(qmax)),
        },
        CatalogEntry {
            name: "phi",
            summary: "order-three mock theta phi(q) = sum q^(n^2)/(-q^2;q^2)_n",
            builder: |_, qmax| Ok(mock_phi(qmax)),
        },
        CatalogEntry {
            name: "rho",
            summary: "order-three mock theta rho(q) = sum q^(n^2)/(q;q^2)_n",
            builder: |_, qmax| Ok(mock_rho(qmax)),
        },
        CatalogEntry {
            name: "m10",
            summary: "Lovejoy-Osburn double sum M10 (exponent j^2+j+n)",
            builder: |_, qmax| Ok(loos_m10(qmax)),
        },
        CatalogEntry {
            name: "m17",
            summary: "Lovejoy-Osburn double sum M17 (exponent j^2-j+n)",
            builder: |_, qmax| Ok(loos_m17(qmax)),
        },
        CatalogEntry {
            name: "ds1",
            summary: "double-sum form of f1, with global (1+q^-1) factor",
            builder: |p, qmax| Ok(double_sum(1, qmax, &DoubleSumBounds::depth_two(p, 0))),
        },
        CatalogEntry {
            name: "ds2",
            summary: "double-sum form of f2, with global factor 2",
            builder: |p, qmax| Ok(double_sum(2, qmax, &DoubleSumBounds::depth_two(p, 0))),
        },
        CatalogEntry {
            name: "ds3",
            summary: "double-sum form of f3, with (1-q^-1) summand factor",
            builder: |p, qmax| Ok(double_sum(3, qmax, &DoubleSumBounds::depth_two(p, 0))),
        },
        CatalogEntry {
            name: "f1-cleared",
            summary: "(1-zeta)*f1 = (1+nu)*((1-zeta) + zeta/(1+q) * R(zeta,-q;q^2))",
            builder: |_, qmax| Ok(f_cleared(1, qmax)),
        },
        CatalogEntry {
            name: "f2-cleared",
            summary: "(1-zeta)*f2 = phi*((1-zeta) + zeta/(1+q^2) * R(zeta,-q^2;q^2))",
            builder: |_, qmax| Ok(f_cleared(2, qmax)),
        },
        CatalogEntry {
            name: "f3-cleared",
            summary: "(1-zeta)*f3 = rho*((1-zeta) + zeta/(1-q) * R(zeta,q;q^2))",
            builder: |_, qmax| Ok(f_cleared(3, qmax)),
        },
        CatalogEntry {
            name: "r-zeta-mq",
            summary: "universal mock theta R(zeta,-q;q^2)",
            builder: |_, qmax| universal_r(&Monomial::zeta(), &Monomial::q_pow(-1, 1), 2, qmax),
        },
        CatalogEntry {
            name: "r-zeta-mq2",
            summary: "universal mock theta R(zeta,-q^2;q^2)",
            builder: |_, qmax| universal_r(&Monomial::zeta(), &Monomial::q_pow(-1, 2), 2, qmax),
        },
        CatalogEntry {
            name: "r-zeta-q",
            summary: "universal mock theta R(zeta,q;q^2)",
            builder: |_, qmax| universal_r(&Monomial::zeta(), &Monomial::q_pow(1, 1), 2, qmax),
        },
        CatalogEntry {
            name: "u-zeta-mq",
            summary: "Choi's U(zeta,-q;q^2) = sum (zeta^-1;q^2)_n (-q^-1;q^2)_n q^(2n)",
            builder: |_, qmax| choi_u(&Monomial::zeta(), &Monomial::q_pow(-1, 1), 2, qmax),
        },
        CatalogEntry {
            name: "phi11-nu",
            summary: "1phi1(q^2;-q;q^2;-1), the 1+nu form",
            builder: |_, qmax| phi11(&q2(), &Monomial::q_pow(-1, 1), 2, &Monomial::num(-1), qmax),
        },
        CatalogEntry {
            name: "phi11-phi",
            summary: "1phi1(q^2;-q^2;q^2;-q), the phi form",
            builder: |_, qmax| phi11(&q2(), &Monomial::q_pow(-1, 2), 2, &Monomial::q_pow(-1, 1), qmax),
        },
        CatalogEntry {
            name: "phi11-rho",
            summary: "1phi1(q^2;q;q^2;-q), the rho form",
            builder: |_, qmax| phi11(&q2(), &Monomial::q_pow(1, 1), 2, &Monomial::q_pow(-1, 1), qmax),
        },
        CatalogEntry {
            name: "phi21-mq",
            summary: "2phi1(q^2,0;-q;q^2;zeta)",
            builder: |p, qmax| {
                phi21(&q2(), &Monomial::q_pow(-1, 1), 2, &Monomial::zeta(), qmax, Some(p.zeta_power_nmax(0)))
            },
        },
        CatalogEntry {
            name: "phi21-mq2",
            summary: "2phi1(q^2,0;-q^2;q^2;zeta)",
            builder: |p, qmax| {
                phi21(&q2(), &Monomial::q_pow(-1, 2), 2, &Monomial::zeta(), qmax, Some(p.zeta_power_nmax(0)))
            },
        },
        CatalogEntry {
            name: "phi21-q",
            summary: "2phi1(q^2,0;q;q^2;zeta)",
            builder: |p, qmax| {
                phi21(&q2(), &Monomial::q_pow(1, 1), 2, &Monomial::zeta(), qmax, Some(p.zeta_power_nmax(0)))
            },
        },
        CatalogEntry {
            name: "fine-mq",
            summary: "Fine F(0,-q^-1;zeta;q^2) = 2phi1(q^2,0;-q;q^2;zeta)",
            builder: |p, qmax| {
                fine_f(
                    &Monomial::zero(),
                    &Monomial::q_pow(-1, -1),
                    &Monomial::zeta(),
                    2,
                    qmax,
                    Some(p.zeta_power_nmax(0)),
                )
            },
        },
        CatalogEntry {
            name: "srivastava-1",
            summary: "Srivastava double sum at (q^2, -q, 1), base q^2",
            builder: |p, qmax| {
                srivastava_rhs(&q2(), &Monomial::q_pow(-1, 1), &Monomial::num(1), 2, qmax, &DoubleSumBounds::srivastava(p, 0))
            },
        },
        CatalogEntry {
            name: "srivastava-2",
            summary: "Srivastava double sum at (q^2, -q^2, q), base q^2",
            builder: |p, qmax| {
                srivastava_rhs(&q2(), &Monomial::q_pow(-1, 2), &Monomial::q_pow(1, 1), 2, qmax, &DoubleSumBounds::srivastava(p, 0))
            },
        },
        CatalogEntry {
            name: "srivastava-3",
            summary: "Srivastava double sum at (q^2, q, q), base q^2",
            builder: |p, qmax| {
                srivastava_rhs(&q2(), &Monomial::q_pow(1, 1), &Monomial::q_pow(1, 1), 2, qmax, &DoubleSumBounds::srivastava(p, 0))
            },
        },
    ]
}

pub fn lookup(name: &str) -> SeriesResult<&'static CatalogEntry> {
    catalog()
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| SeriesError::UnknownId { id: name.to_string() })
}

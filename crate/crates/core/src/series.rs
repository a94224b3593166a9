//! Exact arithmetic for truncated bivariate Laurent series in (ζ, q).
//!
//! A [`QSeries`] is a Laurent series in `q`, truncated at `qmax`
//! (inclusive), whose coefficients are finite Laurent polynomials in ζ
//! over exact rationals ([`ZetaLaurent`]). Every arithmetic result is
//! exact: no monomial inside the stored range is ever approximated.
//!
//! ζ is formal throughout: no ζ-cap is applied during term
//! construction. Each summand of the named series is a finite Laurent
//! object given the q-cap, and the ζ-cap of a [`TruncationPolicy`]
//! applies only at window comparison.
//!
//! Exactness bookkeeping for products: if `x` and `y` are exact modulo
//! `q^(qmax+1)`, then `x * y` is exact modulo
//! `q^(qmax + 1 + min(0, ord x) + min(0, ord y))`. Callers that need a
//! comparison window `[-G, B]` therefore build at
//! `qmax = B + G + 2` (see [`TruncationPolicy::build_qmax`]), which
//! absorbs the negative-order factors (worst case `q^-2`) that occur in
//! the double-sum assembly.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::rational::{rat, Rational};

/// Errors from series constructors and the verification layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesError {
    /// 1/(1 + c·ζ^ez) with ez ≠ 0 is not a Laurent-polynomial-coefficient series.
    NonLaurentInverse { zeta_exp: i64 },
    /// 1/(1 + c) with c = -1.
    DivisionByZero,
    /// q-binomial with n > m or negative index.
    BinomialIndex { m: i64, n: i64 },
    /// A summation over a pure ζ-power argument needs an explicit index bound.
    MissingIndexBound { context: &'static str },
    /// A parameter that must be invertible is zero.
    ZeroParameter { context: &'static str },
    /// Rejected truncation policy.
    InvalidPolicy { reason: String },
    /// Unknown identity or series name.
    UnknownId { id: String },
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::NonLaurentInverse { zeta_exp } => write!(
                f,
                "cannot invert 1 + c*zeta^{zeta_exp}: pure zeta monomials have no Laurent-polynomial inverse"
            ),
            SeriesError::DivisionByZero => write!(f, "division by zero: 1/(1 + c) with c = -1"),
            SeriesError::BinomialIndex { m, n } => {
                write!(f, "q-binomial [{m} choose {n}] requires 0 <= n <= m")
            }
            SeriesError::MissingIndexBound { context } => {
                write!(f, "{context}: summation index bound required for pure zeta-power argument")
            }
            SeriesError::ZeroParameter { context } => {
                write!(f, "{context}: parameter must be a nonzero monomial")
            }
            SeriesError::InvalidPolicy { reason } => write!(f, "invalid policy: {reason}"),
            SeriesError::UnknownId { id } => write!(f, "unknown identifier: {id}"),
        }
    }
}

impl std::error::Error for SeriesError {}

pub type SeriesResult<T> = Result<T, SeriesError>;

// ---------------------------------------------------------------------------
// ZetaLaurent
// ---------------------------------------------------------------------------

/// A finite Laurent polynomial in ζ over the rationals: one q-coefficient.
///
/// No stored coefficient is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZetaLaurent {
    terms: BTreeMap<i64, Rational>,
}

impl ZetaLaurent {
    pub fn new() -> Self {
        ZetaLaurent { terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    /// c·ζ^exp (empty if c = 0).
    pub fn monomial(exp: i64, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        ZetaLaurent { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, exp: i64) -> Option<&Rational> {
        self.terms.get(&exp)
    }

    /// Coefficient of ζ^exp (zero if absent).
    pub fn coeff(&self, exp: i64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(&e, r)| (e, r))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn insert_add(&mut self, exp: i64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn add_assign_ref(&mut self, other: &ZetaLaurent) {
        for (e, c) in other.iter() {
            self.insert_add(e, c);
        }
    }

    /// self += c·ζ^dz·other.
    pub fn add_scaled_shifted(&mut self, other: &ZetaLaurent, c: &Rational, dz: i64) {
        if c.is_zero() {
            return;
        }
        for (e, r) in other.iter() {
            self.insert_add(e + dz, &(r * c));
        }
    }

    /// self += a·b (Cauchy product in ζ).
    pub fn add_mul(&mut self, a: &ZetaLaurent, b: &ZetaLaurent) {
        for (ea, ra) in a.iter() {
            for (eb, rb) in b.iter() {
                self.insert_add(ea + eb, &(ra * rb));
            }
        }
    }

    pub fn mul(a: &ZetaLaurent, b: &ZetaLaurent) -> ZetaLaurent {
        let mut out = ZetaLaurent::new();
        out.add_mul(a, b);
        out
    }

    pub fn scale(&self, c: &Rational) -> ZetaLaurent {
        if c.is_zero() {
            return ZetaLaurent::new();
        }
        ZetaLaurent { terms: self.terms.iter().map(|(&e, r)| (e, r * c)).collect() }
    }

    pub fn neg(&self) -> ZetaLaurent {
        ZetaLaurent { terms: self.terms.iter().map(|(&e, r)| (e, -r.clone())).collect() }
    }

    /// Drop ζ-exponents with |exp| > cap.
    pub fn clip(&self, cap: i64) -> ZetaLaurent {
        ZetaLaurent {
            terms: self
                .terms
                .iter()
                .filter(|(&e, _)| e.abs() <= cap)
                .map(|(&e, r)| (e, r.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for ZetaLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, r) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e == 0 {
                write!(f, "{r}")?;
            } else {
                write!(f, "{r}*z^{e}")?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// QSeries
// ---------------------------------------------------------------------------

/// Truncated Laurent series in q with [`ZetaLaurent`] coefficients.
///
/// Stored densely from `min_order` to `qmax` inclusive. The leading
/// coefficient is nonzero unless the series is identically zero on the
/// window (canonical zero: `min_order == qmax`, single empty coefficient).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    min_order: i64,
    qmax: i64,
    coeffs: Vec<ZetaLaurent>,
}

impl QSeries {
    pub fn zero(qmax: i64) -> Self {
        QSeries { min_order: qmax, qmax, coeffs: vec![ZetaLaurent::new()] }
    }

    pub fn one(qmax: i64) -> Self {
        Self::constant(Rational::one(), qmax)
    }

    pub fn constant(c: Rational, qmax: i64) -> Self {
        Self::monomial(c, 0, 0, qmax)
    }

    /// c·ζ^ez·q^eq truncated at qmax (zero if eq > qmax).
    pub fn monomial(c: Rational, ez: i64, eq: i64, qmax: i64) -> Self {
        let mut acc = SeriesAccumulator::new(qmax);
        acc.add_monomial(&c, ez, eq);
        acc.finish()
    }

    /// 1 + c·ζ^ez·q^eq as an exact Laurent polynomial.
    pub fn one_plus_monomial(c: Rational, ez: i64, eq: i64, qmax: i64) -> Self {
        let mut acc = SeriesAccumulator::new(qmax);
        acc.add_monomial(&Rational::one(), 0, 0);
        acc.add_monomial(&c, ez, eq);
        acc.finish()
    }

    fn from_parts(min_order: i64, qmax: i64, mut coeffs: Vec<ZetaLaurent>) -> Self {
        debug_assert_eq!(coeffs.len() as i64, qmax - min_order + 1);
        let lead = coeffs.iter().take_while(|z| z.is_zero()).count();
        if lead == coeffs.len() {
            return Self::zero(qmax);
        }
        coeffs.drain(..lead);
        QSeries { min_order: min_order + lead as i64, qmax, coeffs }
    }

    pub fn qmax(&self) -> i64 {
        self.qmax
    }

    /// Lowest retained q-exponent (equals qmax for the zero series).
    pub fn min_order(&self) -> i64 {
        self.min_order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| z.is_zero())
    }

    pub fn coeff(&self, q_exp: i64) -> Option<&ZetaLaurent> {
        if q_exp < self.min_order || q_exp > self.qmax {
            None
        } else {
            Some(&self.coeffs[(q_exp - self.min_order) as usize])
        }
    }

    /// Coefficient of ζ^zeta_exp·q^q_exp (zero if absent).
    pub fn coeff_rat(&self, q_exp: i64, zeta_exp: i64) -> Rational {
        self.coeff(q_exp).map(|z| z.coeff(zeta_exp)).unwrap_or_else(Rational::zero)
    }

    /// Nonzero coefficients in ascending q-exponent order.
    pub fn iter_nonzero(&self) -> impl Iterator<Item = (i64, &ZetaLaurent)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, z)| !z.is_zero())
            .map(move |(i, z)| (self.min_order + i as i64, z))
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        assert_eq!(self.qmax, other.qmax, "series added at different truncation orders");
        let mut acc = SeriesAccumulator::new(self.qmax);
        acc.add_series(self);
        acc.add_series(other);
        acc.finish()
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        assert_eq!(self.qmax, other.qmax, "series subtracted at different truncation orders");
        let mut acc = SeriesAccumulator::new(self.qmax);
        acc.add_series(self);
        acc.add_scaled_shifted(other, &rat(-1), 0, 0);
        acc.finish()
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            min_order: self.min_order,
            qmax: self.qmax,
            coeffs: self.coeffs.iter().map(ZetaLaurent::neg).collect(),
        }
    }

    /// Cauchy convolution, exact for all q-exponents ≤ qmax when both
    /// operands have nonnegative order (see the module notes for the
    /// general exactness bound with Laurent operands).
    pub fn mul(&self, other: &QSeries) -> QSeries {
        assert_eq!(self.qmax, other.qmax, "series multiplied at different truncation orders");
        let qmax = self.qmax;
        if self.is_zero() || other.is_zero() {
            return QSeries::zero(qmax);
        }
        let min = self.min_order + other.min_order;
        if min > qmax {
            return QSeries::zero(qmax);
        }
        let len = (qmax - min + 1) as usize;
        let mut coeffs = vec![ZetaLaurent::new(); len];
        for (i, ci) in self.iter_nonzero() {
            if i + other.min_order > qmax {
                break;
            }
            for (j, cj) in other.iter_nonzero() {
                if i + j > qmax {
                    break;
                }
                coeffs[(i + j - min) as usize].add_mul(ci, cj);
            }
        }
        QSeries::from_parts(min, qmax, coeffs)
    }

    pub fn scale(&self, c: &Rational) -> QSeries {
        if c.is_zero() {
            return QSeries::zero(self.qmax);
        }
        QSeries {
            min_order: self.min_order,
            qmax: self.qmax,
            coeffs: self.coeffs.iter().map(|z| z.scale(c)).collect(),
        }
    }

    /// Multiply by the monomial c·ζ^ez·q^eq (exact; entries pushed above
    /// qmax are dropped).
    pub fn mul_monomial(&self, c: &Rational, ez: i64, eq: i64) -> QSeries {
        let mut acc = SeriesAccumulator::new(self.qmax);
        acc.add_scaled_shifted(self, c, ez, eq);
        acc.finish()
    }

    /// Re-truncate to a smaller qmax.
    pub fn retruncate(&self, new_qmax: i64) -> QSeries {
        assert!(new_qmax <= self.qmax, "retruncate may only lower the truncation order");
        let mut acc = SeriesAccumulator::new(new_qmax);
        acc.add_series_clipped(self);
        acc.finish()
    }

    /// Keep only monomials inside the comparison window: |ζ-exp| ≤ A and
    /// -G ≤ q-exp ≤ B. The result is truncated at B.
    pub fn restrict_to_window(&self, policy: &TruncationPolicy) -> QSeries {
        let mut acc = SeriesAccumulator::new(policy.q_cap);
        for (q, z) in self.iter_nonzero() {
            if q < -policy.q_floor || q > policy.q_cap {
                continue;
            }
            let clipped = z.clip(policy.zeta_cap);
            if !clipped.is_zero() {
                acc.add_zeta_at(q, &clipped);
            }
        }
        acc.finish()
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 + O(q^{})", self.qmax + 1);
        }
        let mut first = true;
        for (q, z) in self.iter_nonzero() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if q == 0 {
                write!(f, "({z})")?;
            } else {
                write!(f, "({z})*q^{q}")?;
            }
        }
        write!(f, " + O(q^{})", self.qmax + 1)
    }
}

// ---------------------------------------------------------------------------
// Accumulator
// ---------------------------------------------------------------------------

/// Growable accumulator for summations: collects shifted/scaled series
/// into a q-indexed map, then normalizes into a [`QSeries`] once.
pub struct SeriesAccumulator {
    qmax: i64,
    terms: BTreeMap<i64, ZetaLaurent>,
}

impl SeriesAccumulator {
    pub fn new(qmax: i64) -> Self {
        SeriesAccumulator { qmax, terms: BTreeMap::new() }
    }

    pub fn qmax(&self) -> i64 {
        self.qmax
    }

    pub fn add_series(&mut self, s: &QSeries) {
        assert_eq!(self.qmax, s.qmax, "accumulated series at different truncation orders");
        for (q, z) in s.iter_nonzero() {
            self.terms.entry(q).or_default().add_assign_ref(z);
        }
    }

    /// Accepts any qmax ≥ self.qmax and drops entries above the target.
    fn add_series_clipped(&mut self, s: &QSeries) {
        for (q, z) in s.iter_nonzero() {
            if q > self.qmax {
                break;
            }
            self.terms.entry(q).or_default().add_assign_ref(z);
        }
    }

    /// self += c·ζ^dz·q^dq·s.
    pub fn add_scaled_shifted(&mut self, s: &QSeries, c: &Rational, dz: i64, dq: i64) {
        if c.is_zero() {
            return;
        }
        for (q, z) in s.iter_nonzero() {
            let tq = q + dq;
            if tq > self.qmax {
                break;
            }
            self.terms.entry(tq).or_default().add_scaled_shifted(z, c, dz);
        }
    }

    pub fn add_monomial(&mut self, c: &Rational, ez: i64, eq: i64) {
        if c.is_zero() || eq > self.qmax {
            return;
        }
        self.terms.entry(eq).or_default().insert_add(ez, c);
    }

    fn add_zeta_at(&mut self, q_exp: i64, z: &ZetaLaurent) {
        if q_exp <= self.qmax {
            self.terms.entry(q_exp).or_default().add_assign_ref(z);
        }
    }

    pub fn finish(mut self) -> QSeries {
        self.terms.retain(|_, z| !z.is_zero());
        let Some(&min) = self.terms.keys().next() else {
            return QSeries::zero(self.qmax);
        };
        let len = (self.qmax - min + 1) as usize;
        let mut coeffs = vec![ZetaLaurent::new(); len];
        for (q, z) in self.terms {
            coeffs[(q - min) as usize] = z;
        }
        QSeries::from_parts(min, self.qmax, coeffs)
    }
}

// ---------------------------------------------------------------------------
// Constructors: geometric inverses, Pochhammer, q-binomial
// ---------------------------------------------------------------------------

/// Truncated expansion of 1/(1 + c·ζ^ez·q^eq).
///
/// Three regimes:
/// - `eq >= 1`: plain geometric series in the monomial;
/// - `eq == 0`: requires `ez == 0` and `c != -1`, giving the constant
///   1/(1+c);
/// - `eq <= -1`: the dominant monomial is factored out first,
///   1/(1+m) = m⁻¹/(1 + m⁻¹), and the geometric expansion runs in m⁻¹
///   (so e.g. 1/(1+q⁻¹) = q - q² + q³ - …).
pub fn one_plus_monomial_inv(c: &Rational, ez: i64, eq: i64, qmax: i64) -> SeriesResult<QSeries> {
    if c.is_zero() {
        return Ok(QSeries::one(qmax));
    }
    if eq == 0 {
        if ez != 0 {
            return Err(SeriesError::NonLaurentInverse { zeta_exp: ez });
        }
        let denom = Rational::one() + c;
        if denom.is_zero() {
            return Err(SeriesError::DivisionByZero);
        }
        return Ok(QSeries::constant(denom.recip(), qmax));
    }
    let mut acc = SeriesAccumulator::new(qmax);
    if eq >= 1 {
        // sum_k (-c)^k zeta^(k ez) q^(k eq)
        let mut coeff = Rational::one();
        let mut k = 0i64;
        while k * eq <= qmax {
            acc.add_monomial(&coeff, k * ez, k * eq);
            coeff = -coeff * c;
            k += 1;
        }
    } else {
        // sum_k (-1)^k c^-(k+1) zeta^(-ez (k+1)) q^(-eq (k+1))
        let c_inv = c.clone().recip();
        let mut coeff = c_inv.clone();
        let mut k = 0i64;
        while (k + 1) * (-eq) <= qmax {
            acc.add_monomial(&coeff, -(k + 1) * ez, -(k + 1) * eq);
            coeff = -coeff * &c_inv;
            k += 1;
        }
    }
    Ok(acc.finish())
}

/// Finite q-Pochhammer (x; q^step)_n with x = c·ζ^ez·q^eq: the exact
/// Laurent polynomial ∏_{j=0}^{n-1} (1 - x·q^(step·j)), truncated at qmax.
///
/// Factors are multiplied in ascending j order, so at most the first
/// factor carries a negative q-order and the result stays exact through
/// qmax for every parameter set used here.
pub fn poch(c: &Rational, ez: i64, eq: i64, step: i64, n: i64, qmax: i64) -> QSeries {
    assert!(step >= 1, "Pochhammer step must be positive");
    assert!(n >= 0, "Pochhammer length must be nonnegative");
    let mut acc = QSeries::one(qmax);
    for j in 0..n {
        let factor = QSeries::one_plus_monomial(-c.clone(), ez, eq + step * j, qmax);
        acc = acc.mul(&factor);
    }
    acc
}

/// Product of factor inverses 1/(x; q^step)_n; exact modulo q^(qmax+1).
pub fn poch_inv(c: &Rational, ez: i64, eq: i64, step: i64, n: i64, qmax: i64) -> SeriesResult<QSeries> {
    assert!(step >= 1, "Pochhammer step must be positive");
    assert!(n >= 0, "Pochhammer length must be nonnegative");
    let mut acc = QSeries::one(qmax);
    for j in 0..n {
        let factor = one_plus_monomial_inv(&-c.clone(), ez, eq + step * j, qmax)?;
        acc = acc.mul(&factor);
    }
    Ok(acc)
}

/// q-binomial coefficient [m choose n] in base q^step:
/// (q^s;q^s)_m / ((q^s;q^s)_{m-n} (q^s;q^s)_n), truncated at qmax.
///
/// Division is multiplication by Pochhammer inverses followed by an
/// exactness assertion; an index error shows up loudly as a
/// non-polynomial residue.
pub fn qbinom(m: i64, n: i64, step: i64, qmax: i64) -> SeriesResult<QSeries> {
    if n < 0 || n > m {
        return Err(SeriesError::BinomialIndex { m, n });
    }
    let one = Rational::one();
    let num = poch(&one, 0, step, step, m, qmax);
    let d1 = poch_inv(&one, 0, step, step, m - n, qmax)?;
    let d2 = poch_inv(&one, 0, step, step, n, qmax)?;
    let result = num.mul(&d1).mul(&d2);
    assert!(
        result.min_order() == 0 && result.coeff_rat(0, 0).is_one(),
        "q-binomial [{m} choose {n}] division left a non-polynomial residue"
    );
    for (_, z) in result.iter_nonzero() {
        for (e, r) in z.iter() {
            assert!(
                e == 0 && r.denom().is_one(),
                "q-binomial [{m} choose {n}] has a fractional or zeta-carrying residue"
            );
        }
    }
    Ok(result)
}

// ---------------------------------------------------------------------------
// Truncation policy and window comparison
// ---------------------------------------------------------------------------

/// The comparison window |ζ-exp| ≤ A, -G ≤ q-exp ≤ B, plus the derived
/// summation bounds for the double-sum constructors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationPolicy {
    /// ζ-cap A: window includes |ζ-exponent| ≤ A.
    pub zeta_cap: i64,
    /// q-cap B: window includes q-exponent ≤ B.
    pub q_cap: i64,
    /// q-floor G: window includes q-exponent ≥ -G.
    pub q_floor: i64,
    /// Extra summation indices for stabilization re-checks.
    pub stability_margin: i64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { zeta_cap: 12, q_cap: 40, q_floor: 2, stability_margin: 5 }
    }
}

impl TruncationPolicy {
    pub fn new(zeta_cap: i64, q_cap: i64) -> Self {
        TruncationPolicy { zeta_cap, q_cap, ..Default::default() }
    }

    pub fn validate(&self) -> SeriesResult<()> {
        if self.zeta_cap < 0 || self.q_cap < 1 || self.q_floor < 0 || self.stability_margin < 0 {
            return Err(SeriesError::InvalidPolicy {
                reason: format!(
                    "need A >= 0, B >= 1, G >= 0, margin >= 0; got A={}, B={}, G={}, margin={}",
                    self.zeta_cap, self.q_cap, self.q_floor, self.stability_margin
                ),
            });
        }
        Ok(())
    }

    /// Internal build order: B + G + 2; products with negative min_order
    /// (down to q^-2) then stay exact on the whole window.
    pub fn build_qmax(&self) -> i64 {
        self.q_cap + self.q_floor + 2
    }

    /// n-bound for the depth-two double sums: 2n² ≤ B.
    pub fn depth_two_nmax(&self, boost: i64) -> i64 {
        isqrt(self.q_cap / 2) + 1 + boost
    }

    /// Bound on the number of negative-ζ factor picks inside
    /// (-q^(2n)/ζ; q²)_m contributing to the window: j(j-1) ≤ B.
    pub fn depth_two_jmax(&self) -> i64 {
        isqrt(self.q_cap) + 1
    }

    /// m-bound: ζ^(n+m) climbs one per m, negative picks descend at most
    /// jmax, and +2 absorbs the (1-ζ) clearing shift.
    pub fn depth_two_mmax(&self, boost: i64) -> i64 {
        self.zeta_cap + self.depth_two_jmax() + 2 + boost
    }

    /// Index bound for single sums over a pure ζ-power argument
    /// (₂φ₁(…;ζ) and Fine's F at t = ζ).
    pub fn zeta_power_nmax(&self, boost: i64) -> i64 {
        self.zeta_cap + 2 + boost
    }
}

fn isqrt(v: i64) -> i64 {
    if v <= 0 {
        return 0;
    }
    let mut r = (v as f64).sqrt() as i64;
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    while r * r > v {
        r -= 1;
    }
    r
}

/// Outcome of a window comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WindowCompare {
    Equal,
    /// Lexicographically smallest (q-exp, ζ-exp) disagreement.
    Mismatch { q_exp: i64, zeta_exp: i64, lhs: Rational, rhs: Rational },
}

impl WindowCompare {
    pub fn is_equal(&self) -> bool {
        matches!(self, WindowCompare::Equal)
    }
}

/// Compare all monomials ζ^a·q^b with |a| ≤ A and -G ≤ b ≤ B.
pub fn window_compare(x: &QSeries, y: &QSeries, policy: &TruncationPolicy) -> WindowCompare {
    assert!(
        x.qmax() >= policy.q_cap && y.qmax() >= policy.q_cap,
        "window comparison needs both series truncated at qmax >= B"
    );
    for b in -policy.q_floor..=policy.q_cap {
        let zx = x.coeff(b);
        let zy = y.coeff(b);
        for a in -policy.zeta_cap..=policy.zeta_cap {
            let cx = zx.map(|z| z.coeff(a)).unwrap_or_else(Rational::zero);
            let cy = zy.map(|z| z.coeff(a)).unwrap_or_else(Rational::zero);
            if cx != cy {
                return WindowCompare::Mismatch { q_exp: b, zeta_exp: a, lhs: cx, rhs: cy };
            }
        }
    }
    WindowCompare::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn geometric_sum(qmax: i64) -> QSeries {
        // 1 + q + q^2 + ... + q^qmax
        let mut acc = SeriesAccumulator::new(qmax);
        for k in 0..=qmax {
            acc.add_monomial(&rat(1), 0, k);
        }
        acc.finish()
    }

    #[test]
    fn add_cancellation_and_identity() {
        let qmax = 10;
        let one_minus_q = QSeries::one_plus_monomial(rat(-1), 0, 1, qmax);
        let q = QSeries::monomial(rat(1), 0, 1, qmax);
        assert_eq!(one_minus_q.add(&q), QSeries::one(qmax));

        let x = QSeries::one_plus_monomial(rat(3), 1, 2, qmax);
        assert_eq!(x.add(&QSeries::zero(qmax)), x);

        let a = QSeries::one_plus_monomial(rat(1), 1, 1, qmax);
        let b = QSeries::one_plus_monomial(rat(-1), 1, 1, qmax);
        assert_eq!(a.add(&b), QSeries::constant(rat(2), qmax));
    }

    #[test]
    fn mul_geometric_inverse_is_one_on_window() {
        let qmax = 12;
        let one_minus_q = QSeries::one_plus_monomial(rat(-1), 0, 1, qmax);
        assert_eq!(one_minus_q.mul(&geometric_sum(qmax)), QSeries::one(qmax));
    }

    #[test]
    fn mul_difference_of_squares() {
        let qmax = 6;
        // (zeta + q)(zeta - q) = zeta^2 - q^2
        let mut acc = SeriesAccumulator::new(qmax);
        acc.add_monomial(&rat(1), 1, 0);
        acc.add_monomial(&rat(1), 0, 1);
        let a = acc.finish();
        let mut acc = SeriesAccumulator::new(qmax);
        acc.add_monomial(&rat(1), 1, 0);
        acc.add_monomial(&rat(-1), 0, 1);
        let b = acc.finish();
        let prod = a.mul(&b);
        assert_eq!(prod.coeff_rat(0, 2), rat(1));
        assert_eq!(prod.coeff_rat(2, 0), rat(-1));
        assert_eq!(prod.coeff_rat(1, 1), rat(0));
    }

    #[test]
    fn mul_laurent_offsets_add() {
        let qmax = 5;
        let qinv = QSeries::monomial(rat(1), 0, -1, qmax);
        let q = QSeries::monomial(rat(1), 0, 1, qmax);
        assert_eq!(qinv.mul(&q), QSeries::one(qmax));
        assert_eq!(qinv.min_order(), -1);
    }

    #[test]
    fn inv_geometric() {
        let qmax = 8;
        let inv = one_plus_monomial_inv(&rat(1), 0, 1, qmax).unwrap();
        for k in 0..=qmax {
            assert_eq!(inv.coeff_rat(k, 0), if k % 2 == 0 { rat(1) } else { rat(-1) });
        }
    }

    #[test]
    fn inv_constant_half() {
        // 1/(1+1) = 1/2, as arises from the (-1;q^2)_n factor.
        let inv = one_plus_monomial_inv(&rat(1), 0, 0, 10).unwrap();
        assert_eq!(inv, QSeries::constant(ratio(1, 2), 10));
    }

    #[test]
    fn inv_negative_exponent() {
        // 1/(1+q^-1) = q - q^2 + q^3 - ...; multiplying back by (1+q^-1)
        // must give 1. The product is exact through qmax-1, so build with
        // one extra order.
        let qmax = 9;
        let inv = one_plus_monomial_inv(&rat(1), 0, -1, qmax + 1).unwrap();
        assert_eq!(inv.min_order(), 1);
        for k in 1..=qmax {
            assert_eq!(inv.coeff_rat(k, 0), if k % 2 == 1 { rat(1) } else { rat(-1) });
        }
        let back = QSeries::one_plus_monomial(rat(1), 0, -1, qmax + 1);
        assert_eq!(inv.mul(&back).retruncate(qmax), QSeries::one(qmax));
    }

    #[test]
    fn inv_rejects_pure_zeta_and_zero_denominator() {
        assert_eq!(
            one_plus_monomial_inv(&rat(1), 2, 0, 5),
            Err(SeriesError::NonLaurentInverse { zeta_exp: 2 })
        );
        assert_eq!(one_plus_monomial_inv(&rat(-1), 0, 0, 5), Err(SeriesError::DivisionByZero));
    }

    #[test]
    fn poch_empty_product_is_one() {
        assert_eq!(poch(&rat(1), 1, 1, 2, 0, 10), QSeries::one(10));
    }

    #[test]
    fn poch_two_factor_products() {
        // (-q; q^2)_2 = (1+q)(1+q^3) = 1 + q + q^3 + q^4
        let p = poch(&rat(-1), 0, 1, 2, 2, 10);
        for (k, c) in [(0, 1), (1, 1), (2, 0), (3, 1), (4, 1), (5, 0)] {
            assert_eq!(p.coeff_rat(k, 0), rat(c));
        }
        // (zeta q^2; q^2)_2 = (1 - zeta q^2)(1 - zeta q^4)
        let p = poch(&rat(1), 1, 2, 2, 2, 10);
        assert_eq!(p.coeff_rat(0, 0), rat(1));
        assert_eq!(p.coeff_rat(2, 1), rat(-1));
        assert_eq!(p.coeff_rat(4, 1), rat(-1));
        assert_eq!(p.coeff_rat(6, 2), rat(1));
    }

    #[test]
    fn poch_inv_examples() {
        let qmax = 8;
        // 1/(-q;q^2)_1 = 1/(1+q)
        let p = poch_inv(&rat(-1), 0, 1, 2, 1, qmax).unwrap();
        for k in 0..=qmax {
            assert_eq!(p.coeff_rat(k, 0), if k % 2 == 0 { rat(1) } else { rat(-1) });
        }
        // 1/(zeta q^2;q^2)_1 = 1 + zeta q^2 + zeta^2 q^4 + ...
        let p = poch_inv(&rat(1), 1, 2, 2, 1, qmax).unwrap();
        assert_eq!(p.coeff_rat(0, 0), rat(1));
        assert_eq!(p.coeff_rat(2, 1), rat(1));
        assert_eq!(p.coeff_rat(4, 2), rat(1));
        assert_eq!(p.coeff_rat(4, 1), rat(0));
        // 1/(-1;q^2)_2 = 1/(2(1+q^2)); multiplying back gives 1.
        let p = poch_inv(&rat(-1), 0, 0, 2, 2, qmax).unwrap();
        assert_eq!(p.coeff_rat(0, 0), ratio(1, 2));
        assert_eq!(p.coeff_rat(2, 0), ratio(-1, 2));
        assert_eq!(p.coeff_rat(4, 0), ratio(1, 2));
        let back = poch(&rat(-1), 0, 0, 2, 2, qmax);
        assert_eq!(p.mul(&back), QSeries::one(qmax));
    }

    #[test]
    fn qbinom_values() {
        assert_eq!(qbinom(7, 0, 1, 10).unwrap(), QSeries::one(10));
        let b21 = qbinom(2, 1, 1, 10).unwrap();
        assert_eq!(b21, QSeries::one_plus_monomial(rat(1), 0, 1, 10));
        // [4 choose 2]_q = 1 + q + 2q^2 + q^3 + q^4
        let b42 = qbinom(4, 2, 1, 10).unwrap();
        for (k, c) in [(0, 1), (1, 1), (2, 2), (3, 1), (4, 1), (5, 0)] {
            assert_eq!(b42.coeff_rat(k, 0), rat(c));
        }
        assert_eq!(qbinom(2, 3, 1, 10), Err(SeriesError::BinomialIndex { m: 2, n: 3 }));
    }

    #[test]
    fn window_compare_semantics() {
        let policy = TruncationPolicy { zeta_cap: 3, q_cap: 6, q_floor: 2, stability_margin: 0 };
        let qmax = policy.build_qmax();
        let x = QSeries::one(qmax);
        assert_eq!(window_compare(&x, &x, &policy), WindowCompare::Equal);

        // zeta^(A+1) q is outside the window
        let y = QSeries::one(qmax).add(&QSeries::monomial(rat(1), policy.zeta_cap + 1, 1, qmax));
        assert_eq!(window_compare(&x, &y, &policy), WindowCompare::Equal);

        // q^B mismatch reported at (B, 0) with coefficients 0 vs 1
        let y = QSeries::one(qmax).add(&QSeries::monomial(rat(1), 0, policy.q_cap, qmax));
        assert_eq!(
            window_compare(&x, &y, &policy),
            WindowCompare::Mismatch { q_exp: policy.q_cap, zeta_exp: 0, lhs: rat(0), rhs: rat(1) }
        );
    }

    #[test]
    fn zero_series_is_canonical() {
        let qmax = 7;
        let z = QSeries::monomial(rat(1), 0, 3, qmax).sub(&QSeries::monomial(rat(1), 0, 3, qmax));
        assert!(z.is_zero());
        assert_eq!(z, QSeries::zero(qmax));
        assert_eq!(z.min_order(), qmax);
    }

    #[test]
    fn monomial_above_qmax_is_zero() {
        assert!(QSeries::monomial(rat(5), 2, 11, 10).is_zero());
    }

    #[test]
    fn restrict_to_window_clips_both_axes() {
        let policy = TruncationPolicy { zeta_cap: 2, q_cap: 4, q_floor: 1, stability_margin: 0 };
        let qmax = 8;
        let mut acc = SeriesAccumulator::new(qmax);
        acc.add_monomial(&rat(1), 0, -3); // below -G
        acc.add_monomial(&rat(2), 3, 0); // zeta beyond cap
        acc.add_monomial(&rat(3), -1, 2); // kept
        acc.add_monomial(&rat(4), 0, 6); // above B
        let w = acc.finish().restrict_to_window(&policy);
        assert_eq!(w.coeff_rat(2, -1), rat(3));
        assert!(w.coeff_rat(0, 3).is_zero());
        assert!(w.coeff_rat(-3, 0).is_zero());
        assert_eq!(w.qmax(), 4);
    }

    #[test]
    fn policy_bounds_are_monotone() {
        let p1 = TruncationPolicy::new(8, 30);
        let p2 = TruncationPolicy::new(12, 50);
        assert!(p2.depth_two_nmax(0) >= p1.depth_two_nmax(0));
        assert!(p2.depth_two_mmax(0) >= p1.depth_two_mmax(0));
        assert!(p2.zeta_power_nmax(0) >= p1.zeta_power_nmax(0));
        assert!(TruncationPolicy::new(-1, 10).validate().is_err());
        assert!(TruncationPolicy::new(0, 0).validate().is_err());
    }
}

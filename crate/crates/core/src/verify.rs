//! Identity registry with exact window verification.
//!
//! Each [`IdentityRecord`] holds builders for both sides of a displayed
//! identity. Identities whose sides carry a 1/(1-ζ) pole are registered
//! in (1-ζ)-cleared form, the clearing factor applied to both sides
//! identically, so every compared q-coefficient is a finite ζ-Laurent
//! polynomial. Verification builds both sides at
//! `qmax = B + G + 2` and compares every monomial in the window
//! |ζ-exp| ≤ A, -G ≤ q-exp ≤ B; a failure reports the
//! lexicographically smallest (q-exp, ζ-exp) disagreement.

use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::catalog::{
    double_sum, f_cleared, fine_f, mock_nu, mock_phi, mock_rho, nu_term_cap, phi11, phi11_term_cap,
    phi21, square_term_cap, srivastava_rhs, universal_r, universal_r_term_cap, DoubleSumBounds,
    Monomial,
};
use crate::rational::{rat, to_frac_string, Rational};
use crate::series::{
    one_plus_monomial_inv, window_compare, QSeries, SeriesError, SeriesResult, TruncationPolicy,
    WindowCompare,
};

/// Outcome of a verification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        }
    }
}

/// First disagreeing window monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub q_exp: i64,
    pub zeta_exp: i64,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TermCounts {
    pub lhs: u64,
    pub rhs: u64,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub id: String,
    pub policy: TruncationPolicy,
    pub status: Status,
    pub first_mismatch: Option<Mismatch>,
    pub term_counts: TermCounts,
    pub citation: String,
    pub clearing: Option<&'static str>,
    pub wall_time_ms: f64,
    pub error: Option<String>,
}

/// Re-verification with all summation bounds raised by the stability margin.
#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub id: String,
    pub margin: i64,
    pub lhs_identical: bool,
    pub rhs_identical: bool,
    pub status: Status,
    pub error: Option<String>,
}

/// A side builder: (policy, bound boost, qmax) -> (series, term count).
type SideBuilder = fn(&TruncationPolicy, i64, i64) -> SeriesResult<(QSeries, u64)>;

struct Instance {
    lhs: SideBuilder,
    rhs: SideBuilder,
}

/// A registered identity: one or more (lhs, rhs) window equalities that
/// must all hold.
pub struct IdentityRecord {
    pub id: &'static str,
    pub citation: &'static str,
    /// The clearing factor applied to both sides identically, if any.
    pub clearing: Option<&'static str>,
    instances: Vec<Instance>,
}

/// The only clearing factor in use: both sides multiplied by (1-ζ).
pub const CLEARING_ONE_MINUS_ZETA: &str = "1-zeta";

impl IdentityRecord {
    /// Build every instance's sides at the policy's internal order.
    pub fn build_sides(
        &self,
        policy: &TruncationPolicy,
        boost: i64,
    ) -> SeriesResult<(Vec<(QSeries, QSeries)>, TermCounts)> {
        let qmax = policy.build_qmax();
        let mut sides = Vec::with_capacity(self.instances.len());
        let mut counts = TermCounts::default();
        for inst in &self.instances {
            let (lhs, nl) = (inst.lhs)(policy, boost, qmax)?;
            let (rhs, nr) = (inst.rhs)(policy, boost, qmax)?;
            counts.lhs += nl;
            counts.rhs += nr;
            sides.push((lhs, rhs));
        }
        Ok((sides, counts))
    }
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

fn check_policy(policy: &TruncationPolicy) -> SeriesResult<()> {
    policy.validate()?;
    if policy.q_cap < 4 {
        return Err(SeriesError::InvalidPolicy {
            reason: format!("verification needs B >= 4, got B={}", policy.q_cap),
        });
    }
    Ok(())
}

/// Compare two already-built sides on the policy window.
pub fn compare_sides(
    lhs: &QSeries,
    rhs: &QSeries,
    policy: &TruncationPolicy,
) -> (Status, Option<Mismatch>) {
    match window_compare(lhs, rhs, policy) {
        WindowCompare::Equal => (Status::Pass, None),
        WindowCompare::Mismatch { q_exp, zeta_exp, lhs, rhs } => {
            (Status::Fail, Some(Mismatch { q_exp, zeta_exp, lhs, rhs }))
        }
    }
}

/// Verify one identity at the given policy.
pub fn verify(record: &IdentityRecord, policy: &TruncationPolicy) -> SeriesResult<VerifyReport> {
    check_policy(policy)?;
    let start = Instant::now();
    let mut report = VerifyReport {
        id: record.id.to_string(),
        policy: *policy,
        status: Status::Pass,
        first_mismatch: None,
        term_counts: TermCounts::default(),
        citation: record.citation.to_string(),
        clearing: record.clearing,
        wall_time_ms: 0.0,
        error: None,
    };
    match record.build_sides(policy, 0) {
        Err(e) => {
            report.status = Status::Error;
            report.error = Some(e.to_string());
        }
        Ok((sides, counts)) => {
            report.term_counts = counts;
            for (lhs, rhs) in &sides {
                let (status, mismatch) = compare_sides(lhs, rhs, policy);
                if status == Status::Fail {
                    report.status = Status::Fail;
                    report.first_mismatch = mismatch;
                    break;
                }
            }
        }
    }
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Verify every registered identity; failures are isolated per record
/// and reports come back in registry (id) order.
pub fn verify_all(policy: &TruncationPolicy) -> SeriesResult<Vec<VerifyReport>> {
    check_policy(policy)?;
    let records = registry();
    records
        .par_iter()
        .map(|record| verify(record, policy))
        .collect::<SeriesResult<Vec<_>>>()
}

/// Re-verify with all summation bounds raised by `policy.stability_margin`
/// and demand bit-identical windows on both sides.
pub fn stability_check(
    record: &IdentityRecord,
    policy: &TruncationPolicy,
) -> SeriesResult<StabilityReport> {
    check_policy(policy)?;
    let margin = policy.stability_margin;
    let base = record.build_sides(policy, 0);
    let boosted = record.build_sides(policy, margin);
    let mut report = StabilityReport {
        id: record.id.to_string(),
        margin,
        lhs_identical: false,
        rhs_identical: false,
        status: Status::Pass,
        error: None,
    };
    match (base, boosted) {
        (Ok((s0, _)), Ok((s1, _))) => {
            let mut lhs_ok = true;
            let mut rhs_ok = true;
            for ((l0, r0), (l1, r1)) in s0.iter().zip(s1.iter()) {
                lhs_ok &= window_compare(l0, l1, policy).is_equal();
                rhs_ok &= window_compare(r0, r1, policy).is_equal();
            }
            report.lhs_identical = lhs_ok;
            report.rhs_identical = rhs_ok;
            if !(lhs_ok && rhs_ok) {
                report.status = Status::Fail;
            }
        }
        (Err(e), _) | (_, Err(e)) => {
            report.status = Status::Error;
            report.error = Some(e.to_string());
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

fn q2() -> Monomial {
    Monomial::q_pow(1, 2)
}

fn minus_q() -> Monomial {
    Monomial::q_pow(-1, 1)
}

fn minus_q2() -> Monomial {
    Monomial::q_pow(-1, 2)
}

fn plus_q() -> Monomial {
    Monomial::q_pow(1, 1)
}

/// (1-ζ) as a series.
fn one_minus_zeta(qmax: i64) -> QSeries {
    QSeries::one_plus_monomial(rat(-1), 1, 0, qmax)
}

/// The cleared right side shared by the 2phi1-to-R identities and the
/// cleared product forms: (1-ζ) + ζ·(1/(1 + c·q^eq))·𝓡(ζ, β; q²).
fn cleared_bracket(
    geom_c: i64,
    geom_eq: i64,
    beta: &Monomial,
    qmax: i64,
) -> SeriesResult<(QSeries, u64)> {
    let geom = one_plus_monomial_inv(&rat(geom_c), 0, geom_eq, qmax)?;
    let r = universal_r(&Monomial::zeta(), beta, 2, qmax)?;
    let series =
        one_minus_zeta(qmax).add(&geom.mul(&r).mul_monomial(&rat(1), 1, 0));
    Ok((series, universal_r_term_cap(2, beta.eq, qmax)))
}

/// (1-ζ)·₂φ₁(q², 0; μ; q²; ζ) with the index cap from the policy ζ-cap.
fn cleared_phi21(
    mu: &Monomial,
    policy: &TruncationPolicy,
    boost: i64,
    qmax: i64,
) -> SeriesResult<(QSeries, u64)> {
    let nmax = policy.zeta_power_nmax(boost);
    let s = phi21(&q2(), mu, 2, &Monomial::zeta(), qmax, Some(nmax))?;
    Ok((s.mul(&one_minus_zeta(qmax)), (nmax + 1) as u64))
}

fn phi11_side(mu: &Monomial, z: &Monomial, qmax: i64) -> SeriesResult<(QSeries, u64)> {
    let s = phi11(&q2(), mu, 2, z, qmax)?;
    Ok((s, phi11_term_cap(2, z.eq, qmax)))
}

/// ₁φ₁(q²;μ;q²;-z)·₂φ₁(q²,0;μ;q²;ζ): the left side of the product formula.
fn product_lhs(
    mu: &Monomial,
    z: &Monomial,
    policy: &TruncationPolicy,
    boost: i64,
    qmax: i64,
) -> SeriesResult<(QSeries, u64)> {
    let minus_z = Monomial::new(-z.c.clone(), z.ez, z.eq);
    let (a, na) = phi11_side(mu, &minus_z, qmax)?;
    let nmax = policy.zeta_power_nmax(boost);
    let b = phi21(&q2(), mu, 2, &Monomial::zeta(), qmax, Some(nmax))?;
    Ok((a.mul(&b), na + (nmax + 1) as u64))
}

fn srivastava_side(
    mu: &Monomial,
    z: &Monomial,
    policy: &TruncationPolicy,
    boost: i64,
    qmax: i64,
) -> SeriesResult<(QSeries, u64)> {
    let bounds = DoubleSumBounds::srivastava(policy, boost);
    let s = srivastava_rhs(&q2(), mu, z, 2, qmax, &bounds)?;
    Ok((s, bounds.term_count()))
}

fn ds_side(j: u8, policy: &TruncationPolicy, boost: i64, qmax: i64) -> SeriesResult<(QSeries, u64)> {
    let bounds = DoubleSumBounds::depth_two(policy, boost);
    let s = double_sum(j, qmax, &bounds).mul(&one_minus_zeta(qmax));
    Ok((s, bounds.term_count()))
}

fn f_cleared_side(j: u8, qmax: i64) -> SeriesResult<(QSeries, u64)> {
    let (mock_terms, beta_eq) = match j {
        1 => (nu_term_cap(qmax), 1),
        2 => (square_term_cap(qmax), 2),
        _ => (square_term_cap(qmax), 1),
    };
    Ok((f_cleared(j, qmax), mock_terms + universal_r_term_cap(2, beta_eq, qmax)))
}

/// The complete identity registry, in verification order.
pub fn registry() -> Vec<IdentityRecord> {
    vec![
        IdentityRecord {
            id: "ID-A1",
            citation: "1 + nu(q) = 1phi1(q^2; -q; q^2; -1)",
            clearing: None,
            instances: vec![Instance {
                lhs: |_, _, qmax| {
                    Ok((QSeries::one(qmax).add(&mock_nu(qmax)), nu_term_cap(qmax)))
                },
                rhs: |_, _, qmax| phi11_side(&minus_q(), &Monomial::num(-1), qmax),
            }],
        },
        IdentityRecord {
            id: "ID-A2",
            citation: "phi(q) = 1phi1(q^2; -q^2; q^2; -q)",
            clearing: None,
            instances: vec![Instance {
                lhs: |_, _, qmax| Ok((mock_phi(qmax), square_term_cap(qmax))),
                rhs: |_, _, qmax| phi11_side(&minus_q2(), &minus_q(), qmax),
            }],
        },
        IdentityRecord {
            id: "ID-A3",
            citation: "rho(q) = 1phi1(q^2; q; q^2; -q)",
            clearing: None,
            instances: vec![Instance {
                lhs: |_, _, qmax| Ok((mock_rho(qmax), square_term_cap(qmax))),
                rhs: |_, _, qmax| phi11_side(&plus_q(), &minus_q(), qmax),
            }],
        },
        IdentityRecord {
            id: "ID-B1",
            citation: "2phi1(q^2,0;-q;q^2;zeta) = 1 + zeta/((1-zeta)(1+q)) R(zeta,-q;q^2), cleared by (1-zeta)",
            clearing: Some(CLEARING_ONE_MINUS_ZETA),
            instances: vec![Instance {
                lhs: |p, boost, qmax| cleared_phi21(&minus_q(), p, boost, qmax),
                rhs: |_, _, qmax| cleared_bracket(1, 1, &minus_q(), qmax),
            }],
        },
        IdentityRecord {
            id: "ID-B2",
            citation: "2phi1(q^2,0;-q^2;q^2;zeta) = 1 + zeta/((1-zeta)(1+q^2)) R(zeta,-q^2;q^2), cleared by (1-zeta)",
            clearing: Some(CLEARING_ONE_MINUS_ZETA),
            instances: vec![Instance {
                lhs: |p, boost, qmax| cleared_phi21(&minus_q2(), p, boost, qmax),
                rhs: |_, _, qmax| cleared_bracket(1, 2, &minus_q2(), qmax),
            }],
        },
        IdentityRecord {
            id: "ID-B3",
            citation: "2phi1(q^2,0;q;q^2;zeta) = 1 + zeta/((1-zeta)(1-q)) R(zeta,q;q^2), cleared by (1-zeta)",
            clearing: Some(CLEARING_ONE_MINUS_ZETA),
            instances: vec![Instance {
                lhs: |p, boost, qmax| cleared_phi21(&plus_q(), p, boost, qmax),
                rhs: |_, _, qmax| cleared_bracket(-1, 1, &plus_q(), qmax),
            }],
        },
        IdentityRecord {
            id: "ID-C1",
            citation: "(1-zeta) f1 = (1-zeta) (1+q^-1) sum_{m,n} (-1)^n q^(2n^2) zeta^(n+m) [m+n,m]_{q^2} (-q^(2n)/zeta;q^2)_m / ((1+q^(2n-1)) (-q;q^2)_{m+2n})",
            clearing: Some(CLEARING_ONE_MINUS_ZETA),
            instances: vec![Instance {
                lhs: |_, _, qmax| f_cleared_side(1, qmax),
                rhs: |p, boost, qmax| ds_side(1, p, boost, qmax),
            }],
        },
        IdentityRecord {
            id: "ID-C2",
            citation: "(1-zeta) f2 = (1-zeta) 2 sum_{m,n} (-1)^n q^(2n^2+n) zeta^(n+m) [m+n,m]_{q^2} (-q^(2n+1)/zeta;q^2)_m / ((1+q^(2n)) (-q^2;q^2)_{m+2n})",
            clearing: Some(CLEARING_ONE_MINUS_ZETA),
            instances: vec![Instance {
                lhs: |_, _, qmax| f_cleared_side(2, qmax),
                rhs: |p, boost, qmax| ds_side(2, p, boost, qmax),
            }],
        },
        IdentityRecord {
            id: "ID-C3",
            citation: "(1-zeta) f3 = (1-zeta) sum_{m,n} (-1)^n q^(2n^2+n) zeta^(n+m) [m+n,m]_{q^2} (-q^(2n+1)/zeta;q^2)_m (1-q^-1) / ((1-q^(2n-1)) (q;q^2)_{m+2n})",
            clearing: Some(CLEARING_ONE_MINUS_ZETA),
            instances: vec![Instance {
                lhs: |_, _, qmax| f_cleared_side(3, qmax),
                rhs: |p, boost, qmax| ds_side(3, p, boost, qmax),
            }],
        },
        IdentityRecord {
            id: "ID-D1",
            citation: "Srivastava product formula at (lambda,mu,z) = (q^2,-q,1), base q^2",
            clearing: None,
            instances: vec![Instance {
                lhs: |p, boost, qmax| product_lhs(&minus_q(), &Monomial::num(1), p, boost, qmax),
                rhs: |p, boost, qmax| srivastava_side(&minus_q(), &Monomial::num(1), p, boost, qmax),
            }],
        },
        IdentityRecord {
            id: "ID-D2",
            citation: "Srivastava product formula at (lambda,mu,z) = (q^2,-q^2,q), base q^2",
            clearing: None,
            instances: vec![Instance {
                lhs: |p, boost, qmax| product_lhs(&minus_q2(), &plus_q(), p, boost, qmax),
                rhs: |p, boost, qmax| srivastava_side(&minus_q2(), &plus_q(), p, boost, qmax),
            }],
        },
        IdentityRecord {
            id: "ID-D3",
            citation: "Srivastava product formula at (lambda,mu,z) = (q^2,q,q), base q^2",
            clearing: None,
            instances: vec![Instance {
                lhs: |p, boost, qmax| product_lhs(&plus_q(), &plus_q(), p, boost, qmax),
                rhs: |p, boost, qmax| srivastava_side(&plus_q(), &plus_q(), p, boost, qmax),
            }],
        },
        IdentityRecord {
            id: "ID-E1",
            citation: "Fine (4.4) at a=0: F(0,b;t;q) = 1 + t/(1-bq) F(0,bq;t;q); at (b,t) = (-q^-1, zeta) base q^2, and (q, q) base q",
            clearing: None,
            instances: vec![
                Instance {
                    lhs: |p, boost, qmax| {
                        let s = fine_f(
                            &Monomial::zero(),
                            &Monomial::q_pow(-1, -1),
                            &Monomial::zeta(),
                            2,
                            qmax,
                            Some(p.zeta_power_nmax(boost)),
                        )?;
                        Ok((s, (p.zeta_power_nmax(boost) + 1) as u64))
                    },
                    rhs: |p, boost, qmax| {
                        // 1 + zeta/(1+q) F(0,-q;zeta;q^2): the shifted b is
                        // -q^-1*q^2 = -q, and 1 - b*q^2 = 1 + q.
                        let f = fine_f(
                            &Monomial::zero(),
                            &minus_q(),
                            &Monomial::zeta(),
                            2,
                            qmax,
                            Some(p.zeta_power_nmax(boost)),
                        )?;
                        let geom = one_plus_monomial_inv(&rat(1), 0, 1, qmax)?;
                        let s = QSeries::one(qmax).add(&f.mul(&geom).mul_monomial(&rat(1), 1, 0));
                        Ok((s, (p.zeta_power_nmax(boost) + 1) as u64))
                    },
                },
                Instance {
                    lhs: |_, _, qmax| {
                        let s = fine_f(&Monomial::zero(), &plus_q(), &plus_q(), 1, qmax, None)?;
                        Ok((s, (qmax + 1) as u64))
                    },
                    rhs: |_, _, qmax| {
                        // 1 + q/(1-q^2) F(0,q^2;q;q)
                        let f = fine_f(&Monomial::zero(), &q2(), &plus_q(), 1, qmax, None)?;
                        let geom = one_plus_monomial_inv(&rat(-1), 0, 2, qmax)?;
                        let s = QSeries::one(qmax).add(&f.mul(&geom).mul_monomial(&rat(1), 0, 1));
                        Ok((s, (qmax + 1) as u64))
                    },
                },
            ],
        },
        IdentityRecord {
            id: "ID-E2",
            citation: "Fine (6.3) at a=0: F(0,b;t;q) = (1-b)/(1-t) F(0,t;b;q); at (b,t) = (zeta, -q) base q^2, and (q, q) base q",
            clearing: None,
            instances: vec![
                Instance {
                    lhs: |_, _, qmax| {
                        let s = fine_f(
                            &Monomial::zero(),
                            &Monomial::zeta(),
                            &minus_q(),
                            2,
                            qmax,
                            None,
                        )?;
                        Ok((s, (qmax + 1) as u64))
                    },
                    rhs: |p, boost, qmax| {
                        // (1-zeta)/(1+q) F(0,-q;zeta;q^2)
                        let f = fine_f(
                            &Monomial::zero(),
                            &minus_q(),
                            &Monomial::zeta(),
                            2,
                            qmax,
                            Some(p.zeta_power_nmax(boost)),
                        )?;
                        let geom = one_plus_monomial_inv(&rat(1), 0, 1, qmax)?;
                        let s = f.mul(&geom).mul(&one_minus_zeta(qmax));
                        Ok((s, (p.zeta_power_nmax(boost) + 1) as u64))
                    },
                },
                Instance {
                    lhs: |_, _, qmax| {
                        let s = fine_f(&Monomial::zero(), &plus_q(), &plus_q(), 1, qmax, None)?;
                        Ok((s, (qmax + 1) as u64))
                    },
                    rhs: |_, _, qmax| {
                        // (1-q)/(1-q) F(0,q;q;q): the prefactor is an exact 1.
                        let f = fine_f(&Monomial::zero(), &plus_q(), &plus_q(), 1, qmax, None)?;
                        let geom = one_plus_monomial_inv(&rat(-1), 0, 1, qmax)?;
                        let s = f.mul(&geom).mul(&QSeries::one_plus_monomial(rat(-1), 0, 1, qmax));
                        Ok((s, (qmax + 1) as u64))
                    },
                },
            ],
        },
        IdentityRecord {
            id: "ID-E3",
            citation: "Fine (12.3): (1-t) F(0,b;t;q) = sum (bt)^n q^(n^2) / ((bq;q)_n (tq;q)_n); at (b,t) = (zeta, -q) base q^2 it gives R(zeta,-q;q^2), and at (q,q) base q it gives R(q,q;q)",
            clearing: None,
            instances: vec![
                Instance {
                    lhs: |_, _, qmax| {
                        let f = fine_f(
                            &Monomial::zero(),
                            &Monomial::zeta(),
                            &minus_q(),
                            2,
                            qmax,
                            None,
                        )?;
                        let s = f.mul(&QSeries::one_plus_monomial(rat(1), 0, 1, qmax));
                        Ok((s, (qmax + 1) as u64))
                    },
                    rhs: |_, _, qmax| {
                        let s = universal_r(&Monomial::zeta(), &minus_q(), 2, qmax)?;
                        Ok((s, universal_r_term_cap(2, 1, qmax)))
                    },
                },
                Instance {
                    lhs: |_, _, qmax| {
                        let f = fine_f(&Monomial::zero(), &plus_q(), &plus_q(), 1, qmax, None)?;
                        let s = f.mul(&QSeries::one_plus_monomial(rat(-1), 0, 1, qmax));
                        Ok((s, (qmax + 1) as u64))
                    },
                    rhs: |_, _, qmax| {
                        let s = universal_r(&plus_q(), &plus_q(), 1, qmax)?;
                        Ok((s, universal_r_term_cap(1, 2, qmax)))
                    },
                },
            ],
        },
    ]
}

/// Find a registered identity by id.
pub fn lookup_identity(id: &str) -> SeriesResult<IdentityRecord> {
    registry()
        .into_iter()
        .find(|r| r.id == id)
        .ok_or_else(|| SeriesError::UnknownId { id: id.to_string() })
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

fn mismatch_json(m: &Option<Mismatch>) -> Value {
    match m {
        None => Value::Null,
        Some(m) => json!({
            "q": m.q_exp,
            "zeta": m.zeta_exp,
            "lhs": to_frac_string(&m.lhs),
            "rhs": to_frac_string(&m.rhs),
        }),
    }
}

pub fn report_to_json(r: &VerifyReport) -> Value {
    json!({
        "id": r.id,
        "status": r.status.as_str(),
        "policy": { "A": r.policy.zeta_cap, "B": r.policy.q_cap, "G": r.policy.q_floor },
        "first_mismatch": mismatch_json(&r.first_mismatch),
        "term_counts": { "lhs": r.term_counts.lhs, "rhs": r.term_counts.rhs },
        "citation": r.citation,
        "clearing": r.clearing,
        "wall_time_ms": r.wall_time_ms,
        "error": r.error,
    })
}

pub fn stability_to_json(r: &StabilityReport) -> Value {
    json!({
        "id": r.id,
        "status": r.status.as_str(),
        "margin": r.margin,
        "lhs_identical": r.lhs_identical,
        "rhs_identical": r.rhs_identical,
        "error": r.error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_has_fifteen_records_with_citations() {
        let records = registry();
        assert_eq!(records.len(), 15);
        for r in &records {
            assert!(!r.citation.is_empty(), "{} lacks a citation", r.id);
            assert!(!r.instances.is_empty());
        }
        let ids: Vec<_> = records.iter().map(|r| r.id).collect();
        assert!(ids.windows(2).all(|w| w[0] < w[1]), "ids sorted: {ids:?}");
    }

    #[test]
    fn lookup_finds_cleared_double_sum_record() {
        let rec = lookup_identity("ID-C1").unwrap();
        assert_eq!(rec.clearing, Some(CLEARING_ONE_MINUS_ZETA));
        assert_eq!(lookup_identity("ID-A2").unwrap().clearing, None);
        assert!(lookup_identity("ID-Z9").is_err());
    }

    #[test]
    fn small_window_verify_passes() {
        // tiny window keeps unit tests fast; the acceptance suite runs the
        // full A=12, B=40 sweep
        let policy = TruncationPolicy { zeta_cap: 3, q_cap: 8, q_floor: 2, stability_margin: 2 };
        for id in ["ID-A1", "ID-B1", "ID-C1", "ID-D1", "ID-E1", "ID-E2", "ID-E3"] {
            let rec = lookup_identity(id).unwrap();
            let report = verify(&rec, &policy).unwrap();
            assert_eq!(report.status, Status::Pass, "{id}: {:?}", report.first_mismatch);
        }
    }

    #[test]
    fn policy_guard_rejects_tiny_window() {
        let policy = TruncationPolicy { zeta_cap: 2, q_cap: 0, q_floor: 2, stability_margin: 0 };
        let rec = lookup_identity("ID-A1").unwrap();
        assert!(verify(&rec, &policy).is_err());
        assert!(verify_all(&policy).is_err());
    }

    #[test]
    fn report_json_shape() {
        let policy = TruncationPolicy { zeta_cap: 2, q_cap: 6, q_floor: 2, stability_margin: 0 };
        let rec = lookup_identity("ID-A1").unwrap();
        let report = verify(&rec, &policy).unwrap();
        let v = report_to_json(&report);
        assert_eq!(v["id"], "ID-A1");
        assert_eq!(v["status"], "PASS");
        assert_eq!(v["policy"]["B"], 6);
        assert!(v["first_mismatch"].is_null());
        assert!(v["term_counts"]["lhs"].as_u64().unwrap() > 0);
    }

    #[test]
    fn verify_all_passes_on_the_minimal_window() {
        let policy = TruncationPolicy { zeta_cap: 2, q_cap: 4, q_floor: 2, stability_margin: 0 };
        let reports = verify_all(&policy).unwrap();
        assert_eq!(reports.len(), 15);
        for r in &reports {
            assert_eq!(r.status, Status::Pass, "{} at A=2 B=4: {:?}", r.id, r.first_mismatch);
        }
    }

    #[test]
    fn stability_margin_zero_is_identity() {
        let policy = TruncationPolicy { zeta_cap: 3, q_cap: 8, q_floor: 2, stability_margin: 0 };
        let rec = lookup_identity("ID-C2").unwrap();
        let rep = stability_check(&rec, &policy).unwrap();
        assert_eq!(rep.status, Status::Pass);
        assert!(rep.lhs_identical && rep.rhs_identical);
    }
}

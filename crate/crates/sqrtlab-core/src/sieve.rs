//! The quadratic-moduli large-sieve sum, the rational-approximation
//! counting function `P(α)`, and the critical-point parameter selectors.
//!
//! `P(α)` decisions are made in exact rational arithmetic whenever the
//! target comes from [`enumerate_targets`]; a floating-point entry point
//! exists for ad-hoc `α` with a documented one-ulp boundary tolerance.

use crate::arith;
use crate::frac::Frac;
use crate::fx::{self, KahanSum};
use crate::Condition;
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub enum SieveError {
    /// Desk-scale refusal: the double sum would be too large.
    CapExceeded { q_squared: u64, n_len: u64, max_q_squared: u64, max_n: u64 },
    /// `r` outside the remaining-range precondition `Q^(15/26-ε) < r <= Q^(3/2)`.
    OutsideRemainingRange { r: u64, lo: f64, hi: f64 },
}

impl fmt::Display for SieveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SieveError::CapExceeded { q_squared, n_len, max_q_squared, max_n } => write!(
                f,
                "refusing sieve sum at Q²={q_squared}, N={n_len} (caps: Q²<={max_q_squared}, N<={max_n})"
            ),
            SieveError::OutsideRemainingRange { r, lo, hi } => {
                write!(f, "r={r} outside the remaining range ({lo}, {hi}]")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SieveError {}

/// Coefficients `a_n` over `(M, M+N]` against moduli `q <= Q`.
#[derive(Clone, Debug)]
pub struct SieveInstance {
    pub q_max: u64,
    pub m_offset: i64,
    pub coeffs: Vec<Complex64>,
}

impl SieveInstance {
    pub fn new(q_max: u64, m_offset: i64, coeffs: Vec<Complex64>) -> Self {
        assert!(q_max >= 1 && !coeffs.is_empty());
        SieveInstance { q_max, m_offset, coeffs }
    }

    pub fn n_len(&self) -> u64 {
        self.coeffs.len() as u64
    }

    /// `Z = Σ |a_n|²`, compensated.
    pub fn z(&self) -> f64 {
        let mut s = KahanSum::new();
        for a in &self.coeffs {
            s.add(a.norm_sqr());
        }
        s.value()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SieveCaps {
    pub max_q_squared: u64,
    pub max_n: u64,
}

impl Default for SieveCaps {
    fn default() -> Self {
        SieveCaps { max_q_squared: 10_000, max_n: 1_000_000 }
    }
}

fn check_caps(inst: &SieveInstance, caps: &SieveCaps) -> Result<(), SieveError> {
    let q_squared = inst.q_max * inst.q_max;
    if q_squared > caps.max_q_squared || inst.n_len() > caps.max_n {
        return Err(SieveError::CapExceeded {
            q_squared,
            n_len: inst.n_len(),
            max_q_squared: caps.max_q_squared,
            max_n: caps.max_n,
        });
    }
    Ok(())
}

/// `Σ_{q<=Q} Σ_{a=1,(a,q)=1}^{q²} |Σ_n a_n e(n a / q²)|²`, grouped per `q`
/// by the residue class of `n` modulo `q²`.
pub fn ls_lhs(inst: &SieveInstance, caps: &SieveCaps) -> Result<f64, SieveError> {
    check_caps(inst, caps)?;
    let mut total = KahanSum::new();
    for q in 1..=inst.q_max {
        let q2 = q * q;
        let mut class_sums = alloc::vec![Complex64::new(0.0, 0.0); q2 as usize];
        for (i, &a_n) in inst.coeffs.iter().enumerate() {
            let n = inst.m_offset as i128 + 1 + i as i128;
            let t = n.rem_euclid(q2 as i128) as usize;
            class_sums[t] += a_n;
        }
        for a in 1..=q2 {
            if arith::gcd(q, a) != 1 {
                continue;
            }
            let mut inner_re = KahanSum::new();
            let mut inner_im = KahanSum::new();
            for (t, &c) in class_sums.iter().enumerate() {
                if c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let phase = arith::mul_mod(t as u64, a, q2);
                let z = fx::e_unit(phase as f64 / q2 as f64);
                let term = c * z;
                inner_re.add(term.re);
                inner_im.add(term.im);
            }
            let re = inner_re.value();
            let im = inner_im.value();
            total.add(re * re + im * im);
        }
    }
    Ok(total.value())
}

/// Naive route to the same double sum, term by term; kept as the cross-check
/// path for the grouped evaluator.
pub fn ls_lhs_direct(inst: &SieveInstance, caps: &SieveCaps) -> Result<f64, SieveError> {
    check_caps(inst, caps)?;
    let mut total = KahanSum::new();
    for q in 1..=inst.q_max {
        let q2 = q * q;
        for a in 1..=q2 {
            if arith::gcd(q, a) != 1 {
                continue;
            }
            let mut inner = crate::fx::KahanComplex::new();
            for (i, &a_n) in inst.coeffs.iter().enumerate() {
                let n = inst.m_offset as i128 + 1 + i as i128;
                let t = (n * a as i128).rem_euclid(q2 as i128);
                inner.add(a_n * fx::e_unit(t as f64 / q2 as f64));
            }
            total.add(inner.value().norm_sqr());
        }
    }
    Ok(total.value())
}

/// Explicit classical certificate: the points `a/q²` are distinct with
/// spacing at least `Q^(-4)`, so the sum is at most `(N - 1 + Q⁴)·Z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MvCertificate {
    pub holds: bool,
    pub lhs: f64,
    pub bound: f64,
    pub ratio: f64,
}

pub fn mv_certificate(inst: &SieveInstance, caps: &SieveCaps) -> Result<MvCertificate, SieveError> {
    let lhs = ls_lhs(inst, caps)?;
    let q4 = (inst.q_max as f64).powi_sieve(4);
    let bound = (inst.n_len() as f64 - 1.0 + q4) * inst.z();
    let ratio = if bound == 0.0 { 0.0 } else { lhs / bound };
    Ok(MvCertificate { holds: lhs <= bound, lhs, bound, ratio })
}

trait PowiSieve {
    fn powi_sieve(self, n: u32) -> f64;
}

impl PowiSieve for f64 {
    fn powi_sieve(self, n: u32) -> f64 {
        let mut acc = 1.0;
        for _ in 0..n {
            acc *= self;
        }
        acc
    }
}

/// `P(α) = #{(q, a) : 1 <= q <= Q, (q, a) = 1, |a/q² - α| <= Δ}` decided
/// exactly in rational arithmetic.
pub fn count_p(alpha: &Frac, q_max: u64, delta: &Frac) -> u64 {
    assert!(delta > &Frac::ZERO);
    let mut count = 0u64;
    for q in 1..=q_max {
        let q2 = Frac::from_int((q * q) as i128);
        let lo = alpha.sub(delta).mul(&q2).ceil();
        let hi = alpha.add(delta).mul(&q2).floor();
        let mut a = lo;
        while a <= hi {
            if arith::gcd(q, a.unsigned_abs() as u64) == 1 {
                count += 1;
            }
            a += 1;
        }
    }
    count
}

/// Brute-force route: scan a padded window per `q` and test the exact
/// membership predicate per point.
pub fn count_p_brute(alpha: &Frac, q_max: u64, delta: &Frac) -> u64 {
    let mut count = 0u64;
    for q in 1..=q_max {
        let q2 = (q * q) as i128;
        let center = alpha.mul(&Frac::from_int(q2));
        let radius = delta.mul(&Frac::from_int(q2));
        let lo = center.sub(&radius).floor() - 2;
        let hi = center.add(&radius).ceil() + 2;
        for a in lo..=hi {
            if arith::gcd(q, a.unsigned_abs() as u64) != 1 {
                continue;
            }
            let diff = Frac::new(a, q2).sub(alpha);
            if diff.abs() <= *delta {
                count += 1;
            }
        }
    }
    count
}

/// Floating-point entry point. Interval endpoints are computed in `f64`, so
/// membership exactly at the boundary can tip either way within one ulp.
pub fn count_p_f64(alpha: f64, q_max: u64, delta: f64) -> u64 {
    assert!(delta > 0.0);
    let mut count = 0u64;
    for q in 1..=q_max {
        let q2 = (q * q) as f64;
        let lo = fx::ceil((alpha - delta) * q2) as i64;
        let hi = fx::floor((alpha + delta) * q2) as i64;
        for a in lo..=hi {
            if arith::gcd(q, a.unsigned_abs()) == 1 {
                count += 1;
            }
        }
    }
    count
}

/// One target `α = b/r + z` of the approximation experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApproximationTarget {
    pub b: i64,
    pub r: u64,
    pub z: Frac,
}

impl ApproximationTarget {
    pub fn alpha(&self) -> Frac {
        Frac::new(self.b as i128, self.r as i128).add(&self.z)
    }
}

/// Grid shape for the `z` range: geometric points from the extreme value
/// `1/(τ·r)` down by a factor `Q^(-eta)`, snapped to exact rationals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TargetGrid {
    pub z_points: u32,
    pub eta: f64,
}

impl Default for TargetGrid {
    fn default() -> Self {
        TargetGrid { z_points: 8, eta: 0.1 }
    }
}

pub fn integer_sqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = fx::sqrt(n as f64) as u64 + 1;
    while x * x > n {
        x -= 1;
    }
    x
}

/// Enumerates targets `b/r + z` for `r` in the given range (capped at
/// `τ = ⌊√N⌋`), all reduced numerators `b`, and the `z` grid. The extreme
/// point `z = 1/(τ·r)` is always the first grid point; every `z` is clamped
/// to stay at or above `Δ = 1/N`.
pub fn enumerate_targets(
    n_len: u64,
    r_lo: u64,
    r_hi: u64,
    grid: &TargetGrid,
) -> Vec<ApproximationTarget> {
    assert!(n_len >= 1 && r_lo >= 1);
    let tau = integer_sqrt(n_len);
    let delta = Frac::new(1, n_len as i128);
    let mut targets = Vec::new();
    const SNAP: i128 = 1 << 20;
    for r in r_lo..=r_hi.min(tau) {
        let mut zs: Vec<Frac> = Vec::new();
        let points = grid.z_points.max(1);
        // Geometric descent over roughly Q^eta below the extreme point,
        // with Q recovered from N = Q³ (general N: N^(1/3)).
        let q_equiv = fx::pow(n_len as f64, 1.0 / 3.0);
        for i in 0..points {
            let step = if points == 1 {
                1.0
            } else {
                fx::pow(q_equiv, -grid.eta * i as f64 / (points - 1) as f64)
            };
            let num = fx::round(step * SNAP as f64) as i128;
            let mut z = Frac::new(num.max(1), (tau * r) as i128 * SNAP);
            if z < delta {
                z = delta;
            }
            if !zs.contains(&z) {
                zs.push(z);
            }
        }
        for b in 0..r.max(1) {
            if arith::gcd(r, b) != 1 {
                continue;
            }
            for &z in &zs {
                targets.push(ApproximationTarget { b: b as i64, r, z });
            }
        }
    }
    targets
}

/// Parameters of the critical-point run, all ranges evaluated.
#[derive(Clone, Debug)]
pub struct CriticalParams {
    pub q: u64,
    pub r: u64,
    pub eps: f64,
    pub nu: f64,
    pub h: f64,
    pub delta_param: f64,
    pub l_len: f64,
    pub m0: f64,
    pub m1: f64,
    pub f_bound: f64,
    pub z_extreme: f64,
    pub conditions: Vec<Condition>,
}

/// Support constants for the amplitude window and derivative bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalConstants {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Default for CriticalConstants {
    fn default() -> Self {
        CriticalConstants { c0: 1.0, c1: 2.0, c2: 1.0 }
    }
}

pub fn critical_params(
    q: u64,
    r: u64,
    eps: f64,
    nu: f64,
    consts: &CriticalConstants,
) -> Result<CriticalParams, SieveError> {
    let qf = q as f64;
    let rf = r as f64;
    let lo = fx::pow(qf, 15.0 / 26.0 - eps);
    let hi = fx::pow(qf, 1.5);
    if !(rf > lo && rf <= hi) {
        return Err(SieveError::OutsideRemainingRange { r, lo, hi });
    }
    let h = fx::sqrt(rf) / fx::pow(qf, 0.25 + 2.0 * eps);
    let delta_param = fx::sqrt(rf) * fx::pow(qf, 1.25);
    let l_len = fx::pow(qf, 1.0 + eps) * rf / delta_param;
    let m0 = consts.c0 * fx::sqrt(qf);
    let m1 = consts.c1 * fx::sqrt(qf);
    let f_bound = consts.c2 * fx::sqrt(qf) / rf;
    let z_extreme = 1.0 / (fx::pow(qf, 1.5) * rf);
    let h_cap = (1.0 / (l_len * f_bound)).min(m1);
    let r_upper = fx::pow(qf, 2.0 * eps)
        * (delta_param * delta_param / (consts.c2 * consts.c2 * fx::pow(qf, 2.5)))
            .min(consts.c1 * consts.c1 * fx::pow(qf, 1.5));
    let conditions = alloc::vec![
        Condition { name: "r·Q^(1/2) <= delta", holds: rf * fx::sqrt(qf) <= delta_param, lhs: rf * fx::sqrt(qf), rhs: delta_param },
        Condition { name: "delta <= Q^2", holds: delta_param <= qf * qf, lhs: delta_param, rhs: qf * qf },
        Condition { name: "C1·Q^(1/2) <= r", holds: m1 <= rf, lhs: m1, rhs: rf },
        Condition { name: "r <= Q^(2eps)·min(delta²/(C2²Q^(5/2)), C1²Q^(3/2))", holds: rf <= r_upper, lhs: rf, rhs: r_upper },
        Condition { name: "1 <= H", holds: 1.0 <= h, lhs: 1.0, rhs: h },
        Condition { name: "H <= min(1/(L·F), M)", holds: h <= h_cap, lhs: h, rhs: h_cap },
        Condition { name: "M <= r", holds: m1 <= rf, lhs: m1, rhs: rf },
        Condition { name: "nu < 1/13", holds: nu < 1.0 / 13.0, lhs: nu, rhs: 1.0 / 13.0 },
    ];
    Ok(CriticalParams {
        q,
        r,
        eps,
        nu,
        h,
        delta_param,
        l_len,
        m0,
        m1,
        f_bound,
        z_extreme,
        conditions,
    })
}

/// One row of the approximation-count experiment; the conjectural ceiling
/// is reported as a ratio, never asserted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PqRow {
    pub q: u64,
    pub n_len: u64,
    pub r: u64,
    pub b: i64,
    pub z: Frac,
    pub p: u64,
    pub ratio_sqrt_q: f64,
}

pub fn pq_experiment(q: u64, n_len: u64, targets: &[ApproximationTarget]) -> Vec<PqRow> {
    let delta = Frac::new(1, n_len as i128);
    targets
        .iter()
        .map(|t| {
            let p = count_p(&t.alpha(), q, &delta);
            PqRow {
                q,
                n_len,
                r: t.r,
                b: t.b,
                z: t.z,
                p,
                ratio_sqrt_q: p as f64 / fx::sqrt(q as f64),
            }
        })
        .collect()
}

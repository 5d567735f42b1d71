//! Bilinear sums `Σ_l Σ_m α_l β_m e_r(l·√(jm)) e(l·f(m))` with square-root
//! phases, the bound formulas attached to them, and a Weyl-differencing
//! inequality checker.
//!
//! The arithmetic phase uses the multiset convention: `e_r(l·√(jm))` means
//! the sum of `e_r(l·x)` over every root `x` of `j·m` modulo `r`, so each
//! `m` enters with multiplicity `s(m)`. A fixed-root mode (smallest root)
//! exists for comparison. Phase angles are reduced modulo `r` in integers
//! before any floating-point conversion.

use crate::arith::{self, Factorization};
use crate::fx::{self, KahanComplex, KahanSum};
use crate::Condition;
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub enum BilinearError {
    NotInvertible { r: u64, j: u64 },
    /// `H` outside `1 <= H <= min(1/(L·F), M)`.
    HOutOfRange { h: u64, h_max_allowed: f64 },
    /// `ν` must lie in `(0, 1)`.
    BadNu { nu: f64 },
    LengthMismatch { expected: usize, got: usize },
}

impl fmt::Display for BilinearError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BilinearError::NotInvertible { r, j } => {
                write!(f, "j={j} not invertible modulo r={r}")
            }
            BilinearError::HOutOfRange { h, h_max_allowed } => {
                write!(f, "H={h} outside the admissible range [1, {h_max_allowed}]")
            }
            BilinearError::BadNu { nu } => write!(f, "nu={nu} must lie in (0, 1)"),
            BilinearError::LengthMismatch { expected, got } => {
                write!(f, "coefficient length {got}, expected {expected}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for BilinearError {}

/// Coefficients `α_l` over `|l| <= L`, stored densely.
#[derive(Clone, Debug)]
pub struct AlphaSeq {
    l_max: u64,
    values: Vec<Complex64>,
}

impl AlphaSeq {
    pub fn new(l_max: u64, values: Vec<Complex64>) -> Result<Self, BilinearError> {
        let expected = (2 * l_max + 1) as usize;
        if values.len() != expected {
            return Err(BilinearError::LengthMismatch { expected, got: values.len() });
        }
        Ok(AlphaSeq { l_max, values })
    }

    pub fn constant(l_max: u64, value: Complex64) -> Self {
        AlphaSeq { l_max, values: alloc::vec![value; (2 * l_max + 1) as usize] }
    }

    /// Support `{0}` only: `α_0 = value`.
    pub fn delta_at_zero(value: Complex64) -> Self {
        AlphaSeq { l_max: 0, values: alloc::vec![value] }
    }

    pub fn l_max(&self) -> u64 {
        self.l_max
    }

    pub fn get(&self, l: i64) -> Complex64 {
        self.values[(l + self.l_max as i64) as usize]
    }

    /// `‖α‖₂`, compensated.
    pub fn norm_l2(&self) -> f64 {
        let mut s = KahanSum::new();
        for v in &self.values {
            s.add(v.norm_sqr());
        }
        fx::sqrt(s.value())
    }
}

/// Coefficients `β_m` over `1 <= m <= M`.
#[derive(Clone, Debug)]
pub struct BetaSeq {
    values: Vec<Complex64>,
}

impl BetaSeq {
    pub fn new(values: Vec<Complex64>) -> Self {
        assert!(!values.is_empty());
        BetaSeq { values }
    }

    pub fn constant(m_max: u64, value: Complex64) -> Self {
        BetaSeq { values: alloc::vec![value; m_max as usize] }
    }

    pub fn m_max(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn get(&self, m: u64) -> Complex64 {
        self.values[(m - 1) as usize]
    }

    /// `‖β‖∞`.
    pub fn norm_inf(&self) -> f64 {
        let mut best = 0.0f64;
        for v in &self.values {
            best = best.max(fx::sqrt(v.norm_sqr()));
        }
        best
    }
}

/// The analytic amplitude `f` with a certified derivative bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Amplitude {
    Zero,
    /// `f(x) = -scale · √x`; `|f'(x)| = scale / (2√x)`, decreasing in `x`.
    NegSqrt { scale: f64 },
}

impl Amplitude {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Amplitude::Zero => 0.0,
            Amplitude::NegSqrt { scale } => -scale * fx::sqrt(x),
        }
    }

    /// Supremum of `|f'|` on `[x_min, ∞)` (monotone, so the left endpoint).
    pub fn derivative_bound(&self, x_min: f64) -> f64 {
        match self {
            Amplitude::Zero => 0.0,
            Amplitude::NegSqrt { scale } => scale / (2.0 * fx::sqrt(x_min)),
        }
    }
}

/// The oscillation amplitude of the critical-point experiment:
/// `f(x) = -Q^(3/4) √x / r`, with the derivative bound certified at the
/// left endpoint of the domain.
pub struct AmplitudeSpec {
    pub f: Amplitude,
    /// Certified `F >= sup |f'|` on the stated domain.
    pub f_bound: f64,
}

pub fn amplitude_f(q: u64, r: u64, domain_lo: f64) -> AmplitudeSpec {
    assert!(q >= 1 && r >= 1 && domain_lo >= 1.0);
    let scale = fx::pow(q as f64, 0.75) / r as f64;
    let f = Amplitude::NegSqrt { scale };
    AmplitudeSpec { f, f_bound: f.derivative_bound(domain_lo) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootConvention {
    /// Sum a phase per root (default project-wide).
    Multiset,
    /// One phase from the smallest root, none when no root exists.
    SmallestRoot,
}

#[derive(Clone, Debug)]
pub struct BilinearInstance {
    pub r: u64,
    pub j: u64,
    pub alpha: AlphaSeq,
    pub beta: BetaSeq,
    pub amplitude: Amplitude,
}

impl BilinearInstance {
    pub fn new(
        r: u64,
        j: u64,
        alpha: AlphaSeq,
        beta: BetaSeq,
        amplitude: Amplitude,
    ) -> Result<Self, BilinearError> {
        if r == 0 || arith::gcd(r, j) != 1 {
            return Err(BilinearError::NotInvertible { r, j });
        }
        Ok(BilinearInstance { r, j, alpha, beta, amplitude })
    }
}

/// Evaluates the double sum with compensated accumulation in a fixed
/// (l ascending, m ascending) order.
pub fn eval_sigma(instance: &BilinearInstance, convention: RootConvention) -> Complex64 {
    let r = instance.r;
    let f = Factorization::of(r).expect("r >= 1");
    let m_max = instance.beta.m_max();
    let roots: Vec<Vec<u64>> = (1..=m_max)
        .map(|m| {
            let jm = (instance.j as u128 * m as u128 % r as u128) as u64;
            let set = arith::sqrt_mod(jm, &f);
            match convention {
                RootConvention::Multiset => set.as_slice().to_vec(),
                RootConvention::SmallestRoot => set.as_slice().first().copied().into_iter().collect(),
            }
        })
        .collect();
    let l_max = instance.alpha.l_max() as i64;
    let mut acc = KahanComplex::new();
    for l in -l_max..=l_max {
        let alpha_l = instance.alpha.get(l);
        if alpha_l == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut inner = KahanComplex::new();
        for m in 1..=m_max {
            let root_list = &roots[(m - 1) as usize];
            if root_list.is_empty() {
                continue;
            }
            let analytic = fx::e_unit(l as f64 * instance.amplitude.eval(m as f64));
            let mut arith_sum = Complex64::new(0.0, 0.0);
            for &x in root_list {
                // l·x reduced mod r in integers before the phase is formed.
                let t = (l as i128 * x as i128).rem_euclid(r as i128) as u64;
                arith_sum += fx::e_unit(t as f64 / r as f64);
            }
            inner.add(instance.beta.get(m) * analytic * arith_sum);
        }
        acc.add(alpha_l * inner.value());
    }
    acc.value()
}

/// `s(m)`-weighted absolute bound `Σ_l |α_l| · Σ_m |β_m| s(m)`; the triangle
/// inequality ceiling for [`eval_sigma`] in multiset mode.
pub fn absolute_ceiling(instance: &BilinearInstance) -> f64 {
    let r = instance.r;
    let f = Factorization::of(r).expect("r >= 1");
    let mut alpha_abs = KahanSum::new();
    let l_max = instance.alpha.l_max() as i64;
    for l in -l_max..=l_max {
        alpha_abs.add(fx::sqrt(instance.alpha.get(l).norm_sqr()));
    }
    let mut beta_mass = KahanSum::new();
    for m in 1..=instance.beta.m_max() {
        let jm = (instance.j as u128 * m as u128 % r as u128) as u64;
        let s = arith::root_count(&f, jm) as f64;
        beta_mass.add(fx::sqrt(instance.beta.get(m).norm_sqr()) * s);
    }
    alpha_abs.value() * beta_mass.value()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Norms {
    pub alpha_l2: f64,
    pub beta_inf: f64,
}

pub fn norms(instance: &BilinearInstance) -> Norms {
    Norms { alpha_l2: instance.alpha.norm_l2(), beta_inf: instance.beta.norm_inf() }
}

/// `L^(1/2) · M · ‖α‖₂ ‖β‖∞`.
pub fn trivial_bound(l_max: u64, m_max: u64, norms: &Norms) -> f64 {
    fx::sqrt(l_max as f64) * m_max as f64 * norms.alpha_l2 * norms.beta_inf
}

/// Largest admissible `H`: `min(1/(L·F), M)` (infinite first term if `F = 0`).
pub fn h_range_max(l_max: u64, f_bound: f64, m_max: u64) -> f64 {
    if l_max == 0 || f_bound == 0.0 {
        m_max as f64
    } else {
        (1.0 / (l_max as f64 * f_bound)).min(m_max as f64)
    }
}

fn check_h(h: u64, l_max: u64, f_bound: f64, m_max: u64) -> Result<f64, BilinearError> {
    let h_cap = h_range_max(l_max, f_bound, m_max);
    if h == 0 || (h as f64) > h_cap {
        return Err(BilinearError::HOutOfRange { h, h_max_allowed: h_cap });
    }
    Ok(h as f64)
}

fn bound_main_three_terms(r: f64, l: f64, m: f64, h: f64) -> f64 {
    fx::pow(h, -0.5) * fx::sqrt(l) * m
        + fx::pow(h, 0.25) * fx::pow(l, 0.25) * m
        + fx::pow(h, -0.25) * fx::pow(l, 0.25) * fx::pow(m, 0.75) * fx::pow(r, 0.25)
}

/// Unconditional three-term bound main part times the norms; the `r^ε`
/// factor is reported separately by the caller.
pub fn bound_unconditional(
    r: u64,
    l_max: u64,
    m_max: u64,
    h: u64,
    f_bound: f64,
    norms: &Norms,
) -> Result<f64, BilinearError> {
    let h = check_h(h, l_max, f_bound, m_max)?;
    Ok(bound_main_three_terms(r as f64, l_max as f64, m_max as f64, h)
        * norms.alpha_l2
        * norms.beta_inf)
}

fn bound_main_conditional(r: f64, l: f64, m: f64, h: f64, nu: f64) -> f64 {
    fx::pow(h, -0.5) * fx::sqrt(l) * m
        + fx::pow(h, 0.125 - nu / 8.0) * fx::pow(l, 0.375) * m
        + fx::pow(h, -0.125 - nu / 8.0) * fx::pow(l, 0.375) * fx::pow(m, 0.875) * fx::pow(r, 0.125)
}

/// Conditional bound main part under the fourth-energy strengthening with
/// exponent `ν in (0, 1)`.
pub fn bound_conditional(
    r: u64,
    l_max: u64,
    m_max: u64,
    h: u64,
    nu: f64,
    f_bound: f64,
    norms: &Norms,
) -> Result<f64, BilinearError> {
    if !(0.0 < nu && nu < 1.0) {
        return Err(BilinearError::BadNu { nu });
    }
    let h = check_h(h, l_max, f_bound, m_max)?;
    Ok(bound_main_conditional(r as f64, l_max as f64, m_max as f64, h, nu)
        * norms.alpha_l2
        * norms.beta_inf)
}

/// Specialized unconditional shape at `f ≡ 0`, `H = ⌊√(r/M)⌋`:
/// `L^(1/2) M^(5/4) r^(-1/4) + L^(1/4) M^(7/8) r^(1/8)`, times the norms.
pub fn bound_balanced_unconditional(r: u64, l_max: u64, m_max: u64, norms: &Norms) -> f64 {
    let (r, l, m) = (r as f64, l_max as f64, m_max as f64);
    (fx::sqrt(l) * fx::pow(m, 1.25) * fx::pow(r, -0.25)
        + fx::pow(l, 0.25) * fx::pow(m, 0.875) * fx::pow(r, 0.125))
        * norms.alpha_l2
        * norms.beta_inf
}

/// Specialized conditional shape at `f ≡ 0`, `H = M`:
/// `L^(1/2) M^(1/2) + L^(3/8) M^(9/8 - ν/8) + L^(3/8) M^(3/4 - ν/8) r^(1/8)`.
pub fn bound_balanced_conditional(r: u64, l_max: u64, m_max: u64, nu: f64, norms: &Norms) -> f64 {
    let (r, l, m) = (r as f64, l_max as f64, m_max as f64);
    (fx::sqrt(l) * fx::sqrt(m)
        + fx::pow(l, 0.375) * fx::pow(m, 1.125 - nu / 8.0)
        + fx::pow(l, 0.375) * fx::pow(m, 0.75 - nu / 8.0) * fx::pow(r, 0.125))
        * norms.alpha_l2
        * norms.beta_inf
}

/// Everything a sweep row needs for one instance.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub sigma: Complex64,
    pub sigma_abs: f64,
    pub trivial: f64,
    pub unconditional: Option<f64>,
    pub conditional: Option<f64>,
    pub h: u64,
    pub nu: Option<f64>,
    pub epsilon: f64,
    pub r_pow_eps: f64,
    pub norms: Norms,
    pub h_max_allowed: f64,
}

pub fn bound_report(
    instance: &BilinearInstance,
    h: u64,
    nu: Option<f64>,
    epsilon: f64,
    f_bound: f64,
) -> BoundReport {
    let n = norms(instance);
    let l_max = instance.alpha.l_max();
    let m_max = instance.beta.m_max();
    let sigma = eval_sigma(instance, RootConvention::Multiset);
    let unconditional = bound_unconditional(instance.r, l_max, m_max, h, f_bound, &n).ok();
    let conditional =
        nu.and_then(|v| bound_conditional(instance.r, l_max, m_max, h, v, f_bound, &n).ok());
    BoundReport {
        sigma,
        sigma_abs: fx::sqrt(sigma.norm_sqr()),
        trivial: trivial_bound(l_max, m_max, &n),
        unconditional,
        conditional,
        h,
        nu,
        epsilon,
        r_pow_eps: fx::pow(instance.r as f64, epsilon),
        norms: n,
        h_max_allowed: h_range_max(l_max, f_bound, m_max),
    }
}

/// Where the bounds beat the trivial one. Conditions are stated as
/// `lhs <= rhs`; `holds` includes equality.
#[derive(Clone, Debug)]
pub struct RegionReport {
    pub unconditional: Vec<Condition>,
    pub unconditional_ok: bool,
    pub conditional: Option<Vec<Condition>>,
    pub conditional_ok: Option<bool>,
}

pub fn nontriviality_region(
    r: u64,
    l_max: u64,
    m_max: u64,
    nu: Option<f64>,
    epsilon: f64,
) -> RegionReport {
    let (rf, lf, mf) = (r as f64, l_max as f64, m_max as f64);
    let uncond = alloc::vec![
        Condition {
            name: "r^(1/3) <= M",
            holds: fx::pow(rf, 1.0 / 3.0) <= mf,
            lhs: fx::pow(rf, 1.0 / 3.0),
            rhs: mf,
        },
        Condition {
            name: "M <= r^(1-4eps)",
            holds: mf <= fx::pow(rf, 1.0 - 4.0 * epsilon),
            lhs: mf,
            rhs: fx::pow(rf, 1.0 - 4.0 * epsilon),
        },
        Condition {
            name: "r^(1+8eps) <= L^2·M",
            holds: fx::pow(rf, 1.0 + 8.0 * epsilon) <= lf * lf * mf,
            lhs: fx::pow(rf, 1.0 + 8.0 * epsilon),
            rhs: lf * lf * mf,
        },
    ];
    let unconditional_ok = uncond.iter().all(|c| c.holds);
    let (conditional, conditional_ok) = match nu {
        None => (None, None),
        Some(nu) => {
            let conds = alloc::vec![
                Condition {
                    name: "r^(2eps) <= M",
                    holds: fx::pow(rf, 2.0 * epsilon) <= mf,
                    lhs: fx::pow(rf, 2.0 * epsilon),
                    rhs: mf,
                },
                Condition {
                    name: "M^(1-nu)·r^(8eps) <= L",
                    holds: fx::pow(mf, 1.0 - nu) * fx::pow(rf, 8.0 * epsilon) <= lf,
                    lhs: fx::pow(mf, 1.0 - nu) * fx::pow(rf, 8.0 * epsilon),
                    rhs: lf,
                },
                Condition {
                    name: "r^(1+8eps) <= M^(2+nu)·L",
                    holds: fx::pow(rf, 1.0 + 8.0 * epsilon) <= fx::pow(mf, 2.0 + nu) * lf,
                    lhs: fx::pow(rf, 1.0 + 8.0 * epsilon),
                    rhs: fx::pow(mf, 2.0 + nu) * lf,
                },
            ];
            let ok = conds.iter().all(|c| c.holds);
            (Some(conds), Some(ok))
        }
    };
    RegionReport { unconditional: uncond, unconditional_ok, conditional, conditional_ok }
}

/// Both sides of the Weyl-differencing inequality for the sequence
/// `(β_m)_{m=1..M}` and phase function `g`:
///
/// `lhs = |Σ β_m e(g(m))|²`,
/// `rhs = (M/H)·Σ|β_m|² + (M/H)·Σ_{1<=|m1-m2|<=H} γ(m1,m2) e(g(m1)-g(m2))`
///
/// with `γ(m1,m2) = (1-|m1-m2|/H)·β_{m1}·conj(β_{m2})`. The pair sum is
/// Hermitian-symmetric, hence real; its Fejér structure also makes the full
/// right side nonnegative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeylReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`, `0` when both vanish.
    pub ratio: f64,
}

pub fn weyl_check<G: Fn(f64) -> f64>(beta: &[Complex64], g: G, h: u64) -> WeylReport {
    let m_max = beta.len() as u64;
    assert!(h >= 1 && h <= m_max, "need 1 <= H <= |I|");
    let mut direct = KahanComplex::new();
    for (i, &b) in beta.iter().enumerate() {
        direct.add(b * fx::e_unit(g((i + 1) as f64)));
    }
    let lhs = direct.value().norm_sqr();

    let mut diag = KahanSum::new();
    for &b in beta {
        diag.add(b.norm_sqr());
    }
    let mut pair = KahanComplex::new();
    for m1 in 1..=m_max {
        let lo = m1.saturating_sub(h).max(1);
        let hi = (m1 + h).min(m_max);
        for m2 in lo..=hi {
            if m2 == m1 {
                continue;
            }
            let gamma = (1.0 - m1.abs_diff(m2) as f64 / h as f64)
                * (beta[(m1 - 1) as usize] * beta[(m2 - 1) as usize].conj());
            pair.add(gamma * fx::e_unit(g(m1 as f64) - g(m2 as f64)));
        }
    }
    let scale = m_max as f64 / h as f64;
    let rhs = scale * (diag.value() + pair.value().re);
    // Both sides vanish together (the bracket dominates the left side), so
    // a doubly tiny quotient is reported as 0 rather than as noise.
    let floor = 1e-12 * scale * (diag.value() + 1.0);
    let ratio = if lhs <= floor && rhs.abs() <= floor { 0.0 } else { lhs / rhs };
    WeylReport { lhs, rhs, ratio }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Naive reference evaluator: exhaustive root scan, plain summation.
    fn naive_sigma(inst: &BilinearInstance) -> Complex64 {
        let r = inst.r;
        let mut total = c(0.0, 0.0);
        let l_max = inst.alpha.l_max() as i64;
        for l in -l_max..=l_max {
            for m in 1..=inst.beta.m_max() {
                let jm = (inst.j as u128 * m as u128 % r as u128) as u64;
                for x in 0..r {
                    if (x as u128 * x as u128) % r as u128 == jm as u128 {
                        let t = (l as i128 * x as i128).rem_euclid(r as i128);
                        let phase = t as f64 / r as f64 + l as f64 * inst.amplitude.eval(m as f64);
                        total += inst.alpha.get(l) * inst.beta.get(m) * fx::e_unit(phase);
                    }
                }
            }
        }
        total
    }

    #[test]
    fn worked_value() {
        let inst = BilinearInstance::new(
            7,
            1,
            AlphaSeq::constant(1, c(1.0, 0.0)),
            BetaSeq::constant(4, c(1.0, 0.0)),
            Amplitude::Zero,
        )
        .unwrap();
        let sigma = eval_sigma(&inst, RootConvention::Multiset);
        // Oracle-fixed: 6 from l = 0 plus −1 from each of l = ±1.
        assert!((sigma - c(4.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_support_cases() {
        // l-support {0}: Σ = α₀ Σ β_m s(m).
        let inst = BilinearInstance::new(
            7,
            1,
            AlphaSeq::delta_at_zero(c(2.0, 1.0)),
            BetaSeq::constant(4, c(1.0, 0.0)),
            Amplitude::Zero,
        )
        .unwrap();
        let sigma = eval_sigma(&inst, RootConvention::Multiset);
        assert!((sigma - c(2.0, 1.0) * 6.0).norm() < 1e-12);
        // All beta mass on rootless m: Σ = 0.
        let inst = BilinearInstance::new(
            5,
            1,
            AlphaSeq::constant(2, c(1.0, 0.0)),
            BetaSeq::new(alloc::vec![c(0.0, 0.0), c(3.0, -1.0), c(5.0, 2.0)]),
            Amplitude::Zero,
        )
        .unwrap();
        // m = 2, 3 are quadratic non-residues mod 5.
        assert!(eval_sigma(&inst, RootConvention::Multiset).norm() < 1e-12);
    }

    #[test]
    fn dual_path_agreement_random() {
        let mut rng = SplitMix64::new(0xB1);
        for _ in 0..60 {
            let r = rng.range(2, 400);
            let mut j = rng.range(1, r);
            while arith::gcd(r, j) != 1 {
                j = rng.range(1, r);
            }
            let l_max = rng.range(0, 12);
            let m_max = rng.range(1, 24);
            let alpha = AlphaSeq::new(
                l_max,
                (0..2 * l_max + 1).map(|_| c(rng.next_signed_unit(), rng.next_signed_unit())).collect(),
            )
            .unwrap();
            let beta = BetaSeq::new(
                (0..m_max).map(|_| c(rng.next_signed_unit(), rng.next_signed_unit())).collect(),
            );
            let amplitude = if rng.below(2) == 0 {
                Amplitude::Zero
            } else {
                Amplitude::NegSqrt { scale: rng.next_f64() }
            };
            let inst = BilinearInstance::new(r, j, alpha, beta, amplitude).unwrap();
            let fast = eval_sigma(&inst, RootConvention::Multiset);
            let naive = naive_sigma(&inst);
            let denom = naive.norm().max(1e-9);
            assert!(
                (fast - naive).norm() / denom < 2e-10,
                "r={r} j={j} L={l_max} M={m_max}"
            );
            // Triangle-inequality ceiling.
            assert!(fast.norm() <= absolute_ceiling(&inst) * (1.0 + 1e-12) + 1e-12);
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let mut rng = SplitMix64::new(0xC2);
        for _ in 0..20 {
            let r = rng.range(2, 200);
            let mut j = rng.range(1, r);
            while arith::gcd(r, j) != 1 {
                j = rng.range(1, r);
            }
            let l_max = rng.range(1, 8);
            let m_max = rng.range(1, 12);
            let values: Vec<Complex64> = (0..2 * l_max + 1)
                .map(|_| c(rng.next_signed_unit(), rng.next_signed_unit()))
                .collect();
            let beta: Vec<Complex64> =
                (0..m_max).map(|_| c(rng.next_signed_unit(), rng.next_signed_unit())).collect();
            let inst = BilinearInstance::new(
                r,
                j,
                AlphaSeq::new(l_max, values.clone()).unwrap(),
                BetaSeq::new(beta.clone()),
                Amplitude::Zero,
            )
            .unwrap();
            // Conjugate coefficients with negated l-support.
            let flipped: Vec<Complex64> = values.iter().rev().map(|v| v.conj()).collect();
            let inst_conj = BilinearInstance::new(
                r,
                j,
                AlphaSeq::new(l_max, flipped).unwrap(),
                BetaSeq::new(beta.iter().map(|v| v.conj()).collect()),
                Amplitude::Zero,
            )
            .unwrap();
            let a = eval_sigma(&inst, RootConvention::Multiset).conj();
            let b = eval_sigma(&inst_conj, RootConvention::Multiset);
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn fixed_root_mode_subset() {
        // At l-support {0}: multiset mode sums s(m), fixed-root mode counts
        // solvable m once. Modulo 15 with M = 6: s(1) = s(4) = 4, s(6) = 2,
        // the rest are 0, and 3 values of m are solvable.
        let inst0 = BilinearInstance::new(
            15,
            1,
            AlphaSeq::delta_at_zero(c(1.0, 0.0)),
            BetaSeq::constant(6, c(1.0, 0.0)),
            Amplitude::Zero,
        )
        .unwrap();
        let multi = eval_sigma(&inst0, RootConvention::Multiset);
        assert!((multi.re - 10.0).abs() < 1e-12);
        let single = eval_sigma(&inst0, RootConvention::SmallestRoot);
        assert!((single.re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn amplitude_examples() {
        // f(x) at x = Q^(1/2) equals -Q/r.
        let spec = amplitude_f(16, 64, 1.0);
        assert!((spec.f.eval(4.0) - (-0.25)).abs() < 1e-15);
        // Derivative bound certified at the left endpoint.
        let spec = amplitude_f(16, 64, 4.0);
        let expect = fx::pow(16.0, 0.75) / (2.0 * 64.0 * 2.0);
        assert!((spec.f_bound - expect).abs() < 1e-15);
    }

    #[test]
    fn bound_formula_values() {
        let n = Norms { alpha_l2: 1.0, beta_inf: 1.0 };
        // H = 1 collapses to (L^(1/2) + L^(1/4))M + L^(1/4)M^(3/4)r^(1/4).
        let v = bound_unconditional(10_000, 16, 81, 1, 0.0, &n).unwrap();
        let expect = 4.0 * 81.0 + 2.0 * 81.0 + 2.0 * 27.0 * 10.0;
        assert!((v - expect).abs() < 1e-9);
        // Balanced H reproduces the specialized unconditional shape up to
        // the doubled middle term.
        let r = 1u64 << 40;
        let m = 1u64 << 14;
        let l = 1u64 << 12;
        let h = 1u64 << 13; // √(r/M) exactly
        let full = bound_unconditional(r, l, m, h, 0.0, &n).unwrap();
        let shape = bound_balanced_unconditional(r, l, m, &n);
        assert!(full / shape > 0.99 && full / shape < 2.01, "ratio {}", full / shape);
        // Conditional H range rejection.
        assert!(matches!(
            bound_conditional(100, 10, 50, 51, 0.5, 0.0, &n),
            Err(BilinearError::HOutOfRange { .. })
        ));
        assert!(matches!(
            bound_conditional(100, 10, 50, 10, 1.5, 0.0, &n),
            Err(BilinearError::BadNu { .. })
        ));
        // Conditional balanced shape at H = M.
        let vc = bound_conditional(r, l, m, m, 0.2, 0.0, &n).unwrap();
        let shape_c = bound_balanced_conditional(r, l, m, 0.2, &n);
        assert!(vc / shape_c > 0.99 && vc / shape_c < 2.01);
    }

    #[test]
    fn bound_numeric_cross_check() {
        // Independently coded expressions, 1e-12 relative agreement.
        let n = Norms { alpha_l2: 1.0, beta_inf: 1.0 };
        let v = bound_unconditional(1_000_000, 100, 100, 100, 0.0, &n).unwrap();
        let (r, l, m, h) = (1e6f64, 100f64, 100f64, 100f64);
        let expect = m * l.sqrt() / h.sqrt()
            + (h * l).powf(0.25) * m
            + (l / h).powf(0.25) * m.powf(0.75) * r.powf(0.25);
        assert!((v - expect).abs() <= 1e-12 * expect, "{v} vs {expect}");
        // The conditional bound at vanishing exponent: middle and last terms
        // carry exponents (1/8, 3/8).
        let vc = bound_conditional(1_000_000, 100, 100, 100, 1e-13, 0.0, &n).unwrap();
        let expect_c = m * l.sqrt() / h.sqrt()
            + h.powf(0.125) * l.powf(0.375) * m
            + h.powf(-0.125) * l.powf(0.375) * m.powf(0.875) * r.powf(0.125);
        assert!((vc - expect_c).abs() <= 1e-9 * expect_c, "{vc} vs {expect_c}");
    }

    #[test]
    fn nontriviality_examples() {
        // Comfortable unconditional region.
        let rep = nontriviality_region(1_000_000, 10_000, 10_000, None, 0.01);
        assert!(rep.unconditional_ok);
        // Exactly at L = M = r^(1/3): unconditional fails, conditional holds
        // for small eps.
        let r = 1u64 << 30;
        let lm = 1u64 << 10;
        let rep = nontriviality_region(r, lm, lm, Some(0.1), 0.001);
        assert!(!rep.unconditional_ok);
        assert_eq!(rep.conditional_ok, Some(true));
    }

    #[test]
    fn weyl_basics() {
        // β ≡ 1, g ≡ 0, M = 2, H = 1: both sides are 4.
        let beta = [c(1.0, 0.0), c(1.0, 0.0)];
        let rep = weyl_check(&beta, |_| 0.0, 1);
        assert!((rep.lhs - 4.0).abs() < 1e-12);
        assert!((rep.rhs - 4.0).abs() < 1e-12);
        assert!((rep.ratio - 1.0).abs() < 1e-12);
        // β ≡ 0 guards the 0/0.
        let beta = [c(0.0, 0.0); 5];
        let rep = weyl_check(&beta, |x| 0.3 * x, 2);
        assert_eq!(rep.ratio, 0.0);
    }

    #[test]
    fn weyl_randomized_ratio() {
        let mut rng = SplitMix64::new(0x3E7);
        let mut max_ratio: f64 = 0.0;
        for _ in 0..300 {
            let m_max = rng.range(2, 48);
            let h = rng.range(1, m_max);
            let beta: Vec<Complex64> =
                (0..m_max).map(|_| c(rng.next_signed_unit(), rng.next_signed_unit())).collect();
            let (a, b, ph) = (rng.next_signed_unit(), rng.next_signed_unit(), rng.next_f64());
            let rep = weyl_check(&beta, |x| a * x * x / 64.0 + b * x + ph, h);
            assert!(rep.rhs >= -1e-9, "Fejér positivity");
            max_ratio = max_ratio.max(rep.ratio);
        }
        assert!(max_ratio <= 3.0, "max ratio {max_ratio}");
    }
}

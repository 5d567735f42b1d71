//! Root tables, difference spectra, and the additive energies of modular
//! square roots.
//!
//! Conventions fixed project-wide:
//!
//! * Energies count ordered tuples of `(m, root choice)`: every `m`
//!   contributes with multiplicity `s(m)`, the number of square roots of
//!   `j·m` modulo `r`.
//! * Differences `d` are stored canonically in `[0, r)`; symmetric
//!   representatives appear only at module boundaries that speak of `|d|`.
//! * The exact engines (spectrum, convolution, pairing) work in `u128`
//!   integers and fail loudly on overflow instead of wrapping.

use crate::arith::{self, Factorization, ResidueSet};
use crate::fx::{self, KahanSum};
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum EnergyError {
    /// `gcd(r, j) != 1`: `j` is not invertible, the root tables are undefined.
    NotInvertible { r: u64, j: u64 },
    /// Window constraints `1 <= H <= M <= r` violated.
    BadWindow { r: u64, m_max: u64, h_max: u64 },
    /// The pairing engine refuses spectra heavier than its cap.
    BruteCapExceeded { mass: u128, cap: u128 },
    /// Fewer usable sweep points than a fit needs.
    InsufficientData { needed: usize, got: usize },
    /// An internal identity failed; indicates an arithmetic bug.
    Internal(&'static str),
    /// A hard-assertable inequality failed during report construction.
    CertificateViolation { name: &'static str },
}

impl fmt::Display for EnergyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnergyError::NotInvertible { r, j } => write!(f, "j={j} not invertible modulo r={r}"),
            EnergyError::BadWindow { r, m_max, h_max } => {
                write!(f, "window must satisfy 1 <= H <= M <= r (r={r}, M={m_max}, H={h_max})")
            }
            EnergyError::BruteCapExceeded { mass, cap } => {
                write!(f, "pairing engine refused: spectrum mass {mass} exceeds cap {cap}")
            }
            EnergyError::InsufficientData { needed, got } => {
                write!(f, "insufficient data: need {needed} points, got {got}")
            }
            EnergyError::Internal(what) => write!(f, "internal invariant violated: {what}"),
            EnergyError::CertificateViolation { name } => {
                write!(f, "certificate violated: {name}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EnergyError {}

/// Parameters `(r, j, M, H)` with `gcd(r, j) = 1` and `1 <= H <= M <= r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnergyInstance {
    r: u64,
    j: u64,
    m_max: u64,
    h_max: u64,
}

impl EnergyInstance {
    pub fn new(r: u64, j: u64, m_max: u64, h_max: u64) -> Result<Self, EnergyError> {
        if r == 0 || arith::gcd(r, j) != 1 {
            return Err(EnergyError::NotInvertible { r, j });
        }
        if !(1 <= h_max && h_max <= m_max && m_max <= r) {
            return Err(EnergyError::BadWindow { r, m_max, h_max });
        }
        Ok(EnergyInstance { r, j, m_max, h_max })
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn j(&self) -> u64 {
        self.j
    }

    pub fn m_max(&self) -> u64 {
        self.m_max
    }

    pub fn h_max(&self) -> u64 {
        self.h_max
    }
}

/// For each `1 <= m <= M`: the square roots of `j·m mod r` and their count.
#[derive(Clone, Debug)]
pub struct RootTable {
    instance: EnergyInstance,
    roots: Vec<ResidueSet>,
}

pub fn build_root_table(instance: EnergyInstance) -> RootTable {
    let f = Factorization::of(instance.r).expect("r >= 1");
    let roots = (1..=instance.m_max)
        .map(|m| {
            let jm = ((instance.j as u128 * m as u128) % instance.r as u128) as u64;
            arith::sqrt_mod(jm, &f)
        })
        .collect();
    RootTable { instance, roots }
}

impl RootTable {
    pub fn instance(&self) -> &EnergyInstance {
        &self.instance
    }

    /// Roots of `j·m mod r`, `1 <= m <= M`.
    pub fn roots(&self, m: u64) -> &ResidueSet {
        &self.roots[(m - 1) as usize]
    }

    /// `s(m)`: root multiplicity of `j·m`.
    pub fn count(&self, m: u64) -> u64 {
        self.roots(m).len() as u64
    }

    /// Total root mass over the window.
    pub fn total_mass(&self) -> u128 {
        self.roots.iter().map(|s| s.len() as u128).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    /// Ordered pairs with `1 <= |m1 - m2| <= H`.
    Restricted,
    /// All ordered pairs, including `m1 = m2`.
    Unrestricted,
}

/// Histogram over `d in [0, r)` of root-difference events.
///
/// `bin(d)` counts tuples `(m1, m2, x1, x2)` with `x_i` a root of `j·m_i`
/// and `x1 - x2 ≡ d (mod r)`, the pair `(m1, m2)` ranging over the
/// restricted or unrestricted window.
#[derive(Clone, Debug)]
pub struct DifferenceSpectrum {
    r: u64,
    m_max: u64,
    h_max: u64,
    restriction: Restriction,
    bins: Vec<u64>,
}

pub fn difference_spectrum(table: &RootTable, restriction: Restriction) -> DifferenceSpectrum {
    let inst = table.instance;
    let r = inst.r;
    let mut bins = vec![0u64; r as usize];
    for m1 in 1..=inst.m_max {
        let roots1 = table.roots(m1);
        if roots1.is_empty() {
            continue;
        }
        let (lo, hi) = match restriction {
            Restriction::Restricted => {
                (m1.saturating_sub(inst.h_max).max(1), (m1 + inst.h_max).min(inst.m_max))
            }
            Restriction::Unrestricted => (1, inst.m_max),
        };
        for m2 in lo..=hi {
            if restriction == Restriction::Restricted && m2 == m1 {
                continue;
            }
            let roots2 = table.roots(m2);
            for &x1 in roots1.iter() {
                for &x2 in roots2.iter() {
                    let d = if x1 >= x2 { x1 - x2 } else { x1 + r - x2 };
                    bins[d as usize] += 1;
                }
            }
        }
    }
    DifferenceSpectrum { r, m_max: inst.m_max, h_max: inst.h_max, restriction, bins }
}

impl DifferenceSpectrum {
    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn m_max(&self) -> u64 {
        self.m_max
    }

    pub fn h_max(&self) -> u64 {
        self.h_max
    }

    pub fn restriction(&self) -> Restriction {
        self.restriction
    }

    pub fn bin(&self, d: u64) -> u64 {
        self.bins[(d % self.r) as usize]
    }

    /// Bin addressed by a signed representative, for callers that fold the
    /// spectrum into the symmetric window.
    pub fn bin_signed(&self, d: i64) -> u64 {
        self.bins[d.rem_euclid(self.r as i64) as usize]
    }

    pub fn bins(&self) -> &[u64] {
        &self.bins
    }

    fn nonzero(&self) -> Vec<(u64, u64)> {
        self.bins
            .iter()
            .enumerate()
            .filter(|(_, &g)| g != 0)
            .map(|(d, &g)| (d as u64, g))
            .collect()
    }
}

/// First moment: the total event count `Σ_d bin(d)`.
pub fn first_moment(spectrum: &DifferenceSpectrum) -> u128 {
    spectrum.bins.iter().map(|&g| g as u128).sum()
}

/// `E2 = Σ_d bin(d)^2`, the number of constrained quadruples.
pub fn energy_e2(spectrum: &DifferenceSpectrum) -> u128 {
    spectrum
        .bins
        .iter()
        .map(|&g| (g as u128) * (g as u128))
        .fold(0u128, |acc, v| acc.checked_add(v).expect("E2 exceeds 128-bit range"))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum E4Engine {
    /// Exact integer cyclic self-convolution of the spectrum (default).
    Convolution,
    /// Exact event-pair enumeration; refuses mass above the cap.
    Pairing { cap: u128 },
    /// Floating-point evaluation of the fourth-moment character identity.
    Spectral,
}

/// Default mass cap for the pairing engine.
pub const PAIRING_MASS_CAP: u128 = 200;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EnergyValue {
    Exact(u128),
    Approx(f64),
}

impl EnergyValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            EnergyValue::Exact(v) => fx::ratio_f64(*v, 1),
            EnergyValue::Approx(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<u128> {
        match self {
            EnergyValue::Exact(v) => Some(*v),
            EnergyValue::Approx(_) => None,
        }
    }
}

/// `E4` (or `T4` on an unrestricted spectrum) by the selected engine.
pub fn energy_e4(spectrum: &DifferenceSpectrum, engine: E4Engine) -> Result<EnergyValue, EnergyError> {
    match engine {
        E4Engine::Convolution => Ok(EnergyValue::Exact(e4_convolution(spectrum))),
        E4Engine::Pairing { cap } => e4_pairing(spectrum, cap).map(EnergyValue::Exact),
        E4Engine::Spectral => Ok(EnergyValue::Approx(e4_spectral(spectrum))),
    }
}

/// `Σ_c h(c)^2` with `h` the cyclic self-convolution of the spectrum.
///
/// Cost is `Z^2` additions over the nonzero bins, at most `Z·r`.
fn e4_convolution(spectrum: &DifferenceSpectrum) -> u128 {
    let r = spectrum.r as usize;
    let nz = spectrum.nonzero();
    let mut h = vec![0u128; r];
    for &(d1, g1) in &nz {
        for &(d2, g2) in &nz {
            let c = (d1 + d2) % spectrum.r;
            let add = g1 as u128 * g2 as u128;
            h[c as usize] = h[c as usize].checked_add(add).expect("convolution overflow");
        }
    }
    h.iter()
        .map(|&v| v.checked_mul(v).expect("E4 exceeds 128-bit range"))
        .fold(0u128, |acc, v| acc.checked_add(v).expect("E4 exceeds 128-bit range"))
}

/// Meet-in-the-middle over explicit difference events.
fn e4_pairing(spectrum: &DifferenceSpectrum, cap: u128) -> Result<u128, EnergyError> {
    let mass = first_moment(spectrum);
    if mass > cap {
        return Err(EnergyError::BruteCapExceeded { mass, cap });
    }
    let mut events: Vec<u64> = Vec::with_capacity(mass as usize);
    for (d, g) in spectrum.nonzero() {
        for _ in 0..g {
            events.push(d);
        }
    }
    let mut histogram: BTreeMap<u64, u128> = BTreeMap::new();
    for &d1 in &events {
        for &d2 in &events {
            *histogram.entry((d1 + d2) % spectrum.r).or_insert(0) += 1;
        }
    }
    Ok(histogram.values().map(|&v| v * v).sum())
}

/// `(1/r) Σ_{a=1..r} |Σ_d bin(d) e_r(a d)|^4` in compensated `f64`.
fn e4_spectral(spectrum: &DifferenceSpectrum) -> f64 {
    let r = spectrum.r;
    let nz = spectrum.nonzero();
    // Unit phases for every residue; the per-term angle is reduced in
    // integers first, so no precision is lost to large products.
    let table: Vec<_> = (0..r).map(|x| fx::e_unit(x as f64 / r as f64)).collect();
    let mut total = KahanSum::new();
    for a in 1..=r {
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for &(d, g) in &nz {
            let idx = ((a as u128 * d as u128) % r as u128) as usize;
            let z = table[idx];
            let w = g as f64;
            re.add(w * z.re);
            im.add(w * z.im);
        }
        let norm2 = re.value() * re.value() + im.value() * im.value();
        total.add(norm2 * norm2);
    }
    total.value() / r as f64
}

/// `T2`: unrestricted second moment of the difference spectrum.
pub fn energy_t2(table: &RootTable) -> u128 {
    energy_e2(&difference_spectrum(table, Restriction::Unrestricted))
}

/// `T4`: unrestricted fourth moment by the selected engine.
pub fn energy_t4(table: &RootTable, engine: E4Engine) -> Result<EnergyValue, EnergyError> {
    energy_e4(&difference_spectrum(table, Restriction::Unrestricted), engine)
}

/// The square-part reduction of a difference class: `r = r̃·t²·u` with `u`
/// squarefree, `gcd(r̃, u) = 1`, and `d = t·u·d1` with `gcd(r̃, d1) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReducedTriple {
    pub r_tilde: u64,
    pub t: u64,
    pub u: u64,
    pub d1: u64,
}

pub fn reduce_d(r: &Factorization, d: u64) -> Result<ReducedTriple, EnergyError> {
    assert!(d >= 1 && d <= r.n(), "reduce_d: need 1 <= d <= r");
    let s = r.square_part_root();
    let t = arith::gcd(s, d);
    let r0 = r.n() / (t * t);
    let d0 = d / t;
    let u = arith::gcd_u128(d0 as u128 * d0 as u128, r0 as u128) as u64;
    let r_tilde = r0 / u;
    let d1 = d0 / u;
    let out = ReducedTriple { r_tilde, t, u, d1 };
    let square_free = Factorization::of(u).map_err(|_| EnergyError::Internal("u = 0"))?.mu() != 0;
    let ok = square_free
        && r_tilde as u128 * t as u128 * t as u128 * u as u128 == r.n() as u128
        && t as u128 * u as u128 * d1 as u128 == d as u128
        && arith::gcd(r_tilde, u) == 1
        && arith::gcd(r_tilde, d1) == 1;
    if !ok {
        return Err(EnergyError::Internal("reduce_d invariants"));
    }
    Ok(out)
}

/// Checks that the classes `{t·u·d : 1 <= d <= t·r̃, gcd(r̃, d) = 1}` over
/// all admissible `(r̃, t, u)` with `r̃·t²·u = r` tile `{1, …, r}` exactly.
pub fn partition_check(r: u64) -> bool {
    let f = match Factorization::of(r) {
        Ok(f) => f,
        Err(_) => return false,
    };
    let mut marks = vec![0u8; r as usize + 1];
    for t in f.divisors() {
        if r % (t * t) != 0 {
            continue;
        }
        let r0 = r / (t * t);
        let f0 = Factorization::of(r0).expect("r0 >= 1");
        // u must be squarefree with gcd(u, r0/u) = 1: a product of primes
        // appearing in r0 with exponent exactly one.
        let unit_primes: Vec<u64> =
            f0.factors().iter().filter(|&&(_, k)| k == 1).map(|&(p, _)| p).collect();
        for mask in 0..(1u32 << unit_primes.len()) {
            let mut u = 1u64;
            for (i, &p) in unit_primes.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    u *= p;
                }
            }
            let r_tilde = r0 / u;
            for d in 1..=(t * r_tilde) {
                if arith::gcd(r_tilde, d) == 1 {
                    let cell = t * u * d;
                    if cell > r || marks[cell as usize] != 0 {
                        return false;
                    }
                    marks[cell as usize] = 1;
                }
            }
        }
    }
    marks[1..=r as usize].iter().all(|&m| m == 1)
}

/// A bound expression evaluated with its epsilon factor left symbolic:
/// exact rational main term where it fits in 128 bits, rounded value always.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundValue {
    exact: Option<(u128, u128)>,
    value: f64,
}

impl BoundValue {
    fn from_ratio(num: Option<u128>, den: u128, fallback: f64) -> Self {
        match num {
            Some(n) => BoundValue { exact: Some((n, den)), value: fx::ratio_f64(n, den) },
            None => BoundValue { exact: None, value: fallback },
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<(u128, u128)> {
        self.exact
    }

    /// `energy / bound`, correctly rounded when both sides are exact.
    pub fn ratio_of(&self, energy: EnergyValue) -> f64 {
        match (self.exact, energy) {
            (Some((num, den)), EnergyValue::Exact(e)) => match e.checked_mul(den) {
                Some(scaled) if num > 0 => fx::ratio_f64(scaled, num),
                _ => energy_to_f64(e) / self.value,
            },
            _ => energy.as_f64() / self.value,
        }
    }
}

fn energy_to_f64(e: u128) -> f64 {
    fx::ratio_f64(e, 1)
}

fn mul3(a: u64, b: u64, c: u64) -> Option<u128> {
    (a as u128).checked_mul(b as u128)?.checked_mul(c as u128)
}

/// Main terms of the bound expressions for one instance. Epsilon factors
/// are reported separately as `r_pow_eps` and never folded in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundSet {
    /// `H³M²/r + HM` — the established `E2` bound.
    pub e2_bound: BoundValue,
    /// `H²M²·(H³M²/r + HM)` — the established `E4` bound.
    pub e4_bound: BoundValue,
    /// `H²M²/r + HM` — heuristic true order of `E2`.
    pub e2_heuristic: BoundValue,
    /// `H⁴M⁴/r + H²M²` — heuristic true order of `E4`.
    pub e4_heuristic: BoundValue,
    /// `M⁴/r + M²` — heuristic true order of `T2`.
    pub t2_heuristic: BoundValue,
    /// `M⁸/r + M⁴` — heuristic true order of `T4`.
    pub t4_heuristic: BoundValue,
    /// `H^(2−ν)M²·(H³M²/r + HM)` — conditional strengthening, exponent ν.
    pub e4_conditional: Option<f64>,
    pub nu: Option<f64>,
    pub epsilon: f64,
    pub r_pow_eps: f64,
}

pub fn bound_values(instance: &EnergyInstance, nu: Option<f64>, epsilon: f64) -> BoundSet {
    let (r, m, h) = (instance.r, instance.m_max, instance.h_max);
    let rf = r as f64;
    let mf = m as f64;
    let hf = h as f64;

    // num/r form: (H³M² + HMr) / r etc.; checked so c overflow degrades to f64.
    let e2_num = mul3(h, h, h)
        .and_then(|v| v.checked_mul(m as u128))
        .and_then(|v| v.checked_mul(m as u128))
        .and_then(|v| v.checked_add(mul3(h, m, r)?));
    let e2_fallback = hf * hf * hf * mf * mf / rf + hf * mf;
    let e2_bound = BoundValue::from_ratio(e2_num, r as u128, e2_fallback);

    let h2m2 = mul3(h, h, m).and_then(|v| v.checked_mul(m as u128));
    let e4_num = e2_num.and_then(|v| v.checked_mul(h2m2?));
    let e4_fallback = hf * hf * mf * mf * e2_fallback;
    let e4_bound = BoundValue::from_ratio(e4_num, r as u128, e4_fallback);

    let e2h_num = h2m2.and_then(|v| v.checked_add(mul3(h, m, r)?));
    let e2h_fallback = hf * hf * mf * mf / rf + hf * mf;
    let e2_heuristic = BoundValue::from_ratio(e2h_num, r as u128, e2h_fallback);

    let h4m4 = h2m2.and_then(|v| v.checked_mul(h2m2?));
    let e4h_num = h4m4.and_then(|v| v.checked_add(h2m2?.checked_mul(r as u128)?));
    let e4h_fallback = hf.powi_local(4) * mf.powi_local(4) / rf + hf * hf * mf * mf;
    let e4_heuristic = BoundValue::from_ratio(e4h_num, r as u128, e4h_fallback);

    let m2 = (m as u128).checked_mul(m as u128);
    let m4 = m2.and_then(|v| v.checked_mul(v));
    let t2_num = m4.and_then(|v| v.checked_add(m2?.checked_mul(r as u128)?));
    let t2_fallback = mf.powi_local(4) / rf + mf * mf;
    let t2_heuristic = BoundValue::from_ratio(t2_num, r as u128, t2_fallback);

    let m8 = m4.and_then(|v| v.checked_mul(v));
    let t4_num = m8.and_then(|v| v.checked_add(m4?.checked_mul(r as u128)?));
    let t4_fallback = mf.powi_local(8) / rf + mf.powi_local(4);
    let t4_heuristic = BoundValue::from_ratio(t4_num, r as u128, t4_fallback);

    let e4_conditional =
        nu.map(|v| fx::pow(hf, 2.0 - v) * mf * mf * e2_bound.value());

    BoundSet {
        e2_bound,
        e4_bound,
        e2_heuristic,
        e4_heuristic,
        t2_heuristic,
        t4_heuristic,
        e4_conditional,
        nu,
        epsilon,
        r_pow_eps: fx::pow(rf, epsilon),
    }
}

trait PowiLocal {
    fn powi_local(self, n: i32) -> f64;
}

impl PowiLocal for f64 {
    fn powi_local(self, n: i32) -> f64 {
        let mut acc = 1.0;
        for _ in 0..n {
            acc *= self;
        }
        acc
    }
}

/// Computed energies with bound values and hard-assertable inequalities.
///
/// Construction verifies, exactly in integers:
///
/// * `E4 <= (Σ_d I(d))² · E2` and
/// * `E2 >= (Σ_d I(d))² / r`,
///
/// failing with a certificate violation otherwise.
#[derive(Clone, Debug)]
pub struct EnergyReport {
    pub instance: EnergyInstance,
    pub first_moment: u128,
    /// Independent pair-sum route to the first moment: `Σ s(m1)s(m2)`.
    pub pair_sum: u128,
    pub e2: u128,
    pub e4: EnergyValue,
    pub engine: E4Engine,
    pub t2: Option<u128>,
    pub t4: Option<EnergyValue>,
    pub bounds: BoundSet,
}

impl EnergyReport {
    pub fn compute(
        instance: EnergyInstance,
        engine: E4Engine,
        nu: Option<f64>,
        epsilon: f64,
        include_unrestricted: bool,
    ) -> Result<Self, EnergyError> {
        let table = build_root_table(instance);
        let spectrum = difference_spectrum(&table, Restriction::Restricted);
        let moment = first_moment(&spectrum);
        let pair_sum = constrained_pair_sum(&table);
        if moment != pair_sum {
            return Err(EnergyError::CertificateViolation { name: "first-moment identity" });
        }
        let e2 = energy_e2(&spectrum);
        let e4 = energy_e4(&spectrum, engine)?;
        let e4_exact = match e4.exact() {
            Some(v) => v,
            // The chain certificates are checked on exact values even when
            // the requested engine is floating point.
            None => e4_convolution(&spectrum),
        };
        check_chain(instance.r, moment, e2, e4_exact)?;
        let (t2, t4) = if include_unrestricted {
            let unres = difference_spectrum(&table, Restriction::Unrestricted);
            (Some(energy_e2(&unres)), Some(energy_e4(&unres, engine)?))
        } else {
            (None, None)
        };
        Ok(EnergyReport {
            instance,
            first_moment: moment,
            pair_sum,
            e2,
            e4,
            engine,
            t2,
            t4,
            bounds: bound_values(&instance, nu, epsilon),
        })
    }
}

/// `Σ s(m1)s(m2)` over the restricted window: the independent route to the
/// first moment of the spectrum.
pub fn constrained_pair_sum(table: &RootTable) -> u128 {
    let inst = table.instance;
    let mut total = 0u128;
    for m1 in 1..=inst.m_max {
        let s1 = table.count(m1) as u128;
        if s1 == 0 {
            continue;
        }
        let lo = m1.saturating_sub(inst.h_max).max(1);
        let hi = (m1 + inst.h_max).min(inst.m_max);
        for m2 in lo..=hi {
            if m2 == m1 {
                continue;
            }
            total += s1 * table.count(m2) as u128;
        }
    }
    total
}

fn check_chain(r: u64, moment: u128, e2: u128, e4: u128) -> Result<(), EnergyError> {
    // E4 <= moment² · E2; an overflowing right side trivially holds.
    if let Some(m2) = moment.checked_mul(moment) {
        if let Some(rhs) = m2.checked_mul(e2) {
            if e4 > rhs {
                return Err(EnergyError::CertificateViolation { name: "E4 <= (ΣI)²·E2" });
            }
        }
        // E2 · r >= moment².
        if let Some(lhs) = e2.checked_mul(r as u128) {
            if lhs < m2 {
                return Err(EnergyError::CertificateViolation { name: "E2 >= (ΣI)²/r" });
            }
        }
    }
    Ok(())
}

/// Least-squares slope of `log E2` against `log H`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Sum of squared residuals in log space.
    pub residual_ss: f64,
    pub points_used: usize,
}

/// Fits `(H, E2)` sweep points with zero-energy points dropped; at least
/// four usable points are required.
pub fn exponent_fit(points: &[(f64, f64)]) -> Result<SlopeFit, EnergyError> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(h, e)| h > 0.0 && e > 0.0)
        .map(|&(h, e)| (fx::ln(h), fx::ln(e)))
        .collect();
    if usable.len() < 4 {
        return Err(EnergyError::InsufficientData { needed: 4, got: usable.len() });
    }
    let n = usable.len() as f64;
    let mut sx = KahanSum::new();
    let mut sy = KahanSum::new();
    for &(x, y) in &usable {
        sx.add(x);
        sy.add(y);
    }
    let mx = sx.value() / n;
    let my = sy.value() / n;
    let mut sxx = KahanSum::new();
    let mut sxy = KahanSum::new();
    for &(x, y) in &usable {
        sxx.add((x - mx) * (x - mx));
        sxy.add((x - mx) * (y - my));
    }
    let slope = sxy.value() / sxx.value();
    let intercept = my - slope * mx;
    let mut rss = KahanSum::new();
    for &(x, y) in &usable {
        let e = y - (slope * x + intercept);
        rss.add(e * e);
    }
    Ok(SlopeFit { slope, intercept, residual_ss: rss.value(), points_used: usable.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn instance(r: u64, j: u64, m: u64, h: u64) -> EnergyInstance {
        EnergyInstance::new(r, j, m, h).unwrap()
    }

    /// Exhaustive scan root table, independent of the arith fast path.
    fn scan_table(r: u64, j: u64, m_max: u64) -> Vec<Vec<u64>> {
        (1..=m_max)
            .map(|m| {
                let target = (j as u128 * m as u128 % r as u128) as u64;
                (0..r).filter(|&x| (x as u128 * x as u128) % r as u128 == target as u128).collect()
            })
            .collect()
    }

    #[test]
    fn root_table_examples() {
        let t = build_root_table(instance(7, 1, 4, 3));
        assert_eq!(t.roots(1).as_slice(), &[1, 6]);
        assert_eq!(t.roots(2).as_slice(), &[3, 4]);
        assert!(t.roots(3).is_empty());
        assert_eq!(t.roots(4).as_slice(), &[2, 5]);
        let t = build_root_table(instance(5, 1, 1, 1));
        assert_eq!(t.roots(1).as_slice(), &[1, 4]);
        let t = build_root_table(instance(15, 2, 2, 1));
        assert!(t.roots(1).is_empty());
        assert_eq!(t.roots(2).as_slice(), &[2, 7, 8, 13]);
    }

    #[test]
    fn instance_validation() {
        assert!(matches!(
            EnergyInstance::new(15, 3, 4, 2),
            Err(EnergyError::NotInvertible { .. })
        ));
        assert!(matches!(EnergyInstance::new(7, 1, 8, 2), Err(EnergyError::BadWindow { .. })));
        assert!(matches!(EnergyInstance::new(7, 1, 4, 5), Err(EnergyError::BadWindow { .. })));
    }

    #[test]
    fn spectrum_worked_instance() {
        let t = build_root_table(instance(7, 1, 4, 3));
        let s = difference_spectrum(&t, Restriction::Restricted);
        assert_eq!(s.bins(), &[0, 4, 4, 4, 4, 4, 4]);
        assert_eq!(first_moment(&s), 24);
        assert_eq!(constrained_pair_sum(&t), 24);
        assert_eq!(energy_e2(&s), 96);
        let conv = energy_e4(&s, E4Engine::Convolution).unwrap();
        assert_eq!(conv, EnergyValue::Exact(47_616));
        let paired = energy_e4(&s, E4Engine::Pairing { cap: PAIRING_MASS_CAP }).unwrap();
        assert_eq!(paired, EnergyValue::Exact(47_616));
        let spectral = energy_e4(&s, E4Engine::Spectral).unwrap().as_f64();
        assert!((spectral - 47_616.0).abs() / 47_616.0 < 1e-6);
    }

    #[test]
    fn spectrum_zero_cases() {
        // Only m = 1 has roots mod 5, so no restricted pair exists.
        let t = build_root_table(instance(5, 1, 3, 2));
        let s = difference_spectrum(&t, Restriction::Restricted);
        assert!(s.bins().iter().all(|&g| g == 0));
        assert_eq!(energy_e2(&s), 0);
        assert_eq!(energy_e4(&s, E4Engine::Convolution).unwrap(), EnergyValue::Exact(0));
        // M = 1 leaves no pair with |m1 - m2| >= 1.
        let t = build_root_table(instance(11, 1, 1, 1));
        let s = difference_spectrum(&t, Restriction::Restricted);
        assert_eq!(first_moment(&s), 0);
    }

    #[test]
    fn unrestricted_t_energies() {
        // Fixed by octuple-free direct enumeration: the only window value
        // m = 1 has roots {1, 6} mod 7, and 6 of the 16 root quadruples
        // satisfy x1 - x2 ≡ x3 - x4.
        let t = build_root_table(instance(7, 1, 1, 1));
        assert_eq!(energy_t2(&t), 6);
        // Empty table: j*m never a QR.
        let t = build_root_table(instance(5, 2, 1, 1));
        assert_eq!(energy_t2(&t), 0);
        // Spectral vs convolution for T4.
        let t = build_root_table(instance(7, 1, 4, 4));
        let conv = energy_t4(&t, E4Engine::Convolution).unwrap().as_f64();
        let spec = energy_t4(&t, E4Engine::Spectral).unwrap().as_f64();
        assert!((conv - spec).abs() / conv < 1e-6);
    }

    #[test]
    fn quadruple_et_octuple_brute_small() {
        // Literal nested-loop oracles on tiny instances, fully independent
        // of the spectrum machinery.
        let mut rng = SplitMix64::new(0xE2E4);
        for _ in 0..40 {
            let r = rng.range(2, 24);
            let mut j = rng.range(1, r);
            while arith::gcd(r, j) != 1 {
                j = rng.range(1, r);
            }
            let m_max = rng.range(1, r.min(5));
            let h_max = rng.range(1, m_max);
            let inst = instance(r, j, m_max, h_max);
            let table = build_root_table(inst);
            let spectrum = difference_spectrum(&table, Restriction::Restricted);
            let scan = scan_table(r, j, m_max);

            // Quadruples.
            let mut e2 = 0u128;
            for m1 in 1..=m_max {
                for m2 in 1..=m_max {
                    if m1 == m2 || m1.abs_diff(m2) > h_max {
                        continue;
                    }
                    for m3 in 1..=m_max {
                        for m4 in 1..=m_max {
                            if m3 == m4 || m3.abs_diff(m4) > h_max {
                                continue;
                            }
                            for &x1 in &scan[(m1 - 1) as usize] {
                                for &x2 in &scan[(m2 - 1) as usize] {
                                    for &x3 in &scan[(m3 - 1) as usize] {
                                        for &x4 in &scan[(m4 - 1) as usize] {
                                            let lhs = (x1 + r - x2) % r;
                                            let rhs = (x3 + r - x4) % r;
                                            if lhs == rhs {
                                                e2 += 1;
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
            assert_eq!(energy_e2(&spectrum), e2, "r={r} j={j} M={m_max} H={h_max}");
        }
    }

    #[test]
    fn spectrum_symmetry_and_monotonicity() {
        let mut rng = SplitMix64::new(0x51);
        for _ in 0..60 {
            let r = rng.range(2, 80);
            let mut j = rng.range(1, r);
            while arith::gcd(r, j) != 1 {
                j = rng.range(1, r);
            }
            let m_max = rng.range(1, r.min(12));
            let h_max = rng.range(1, m_max);
            let t = build_root_table(instance(r, j, m_max, h_max));
            let s = difference_spectrum(&t, Restriction::Restricted);
            for d in 1..r {
                assert_eq!(s.bin(d), s.bin(r - d), "symmetry r={r} d={d}");
            }
            // Monotone in H.
            if h_max < m_max {
                let t2 = build_root_table(instance(r, j, m_max, h_max + 1));
                let s2 = difference_spectrum(&t2, Restriction::Restricted);
                assert!(energy_e2(&s2) >= energy_e2(&s));
            }
            // Monotone in M.
            if m_max < r {
                let t2 = build_root_table(instance(r, j, m_max + 1, h_max));
                let s2 = difference_spectrum(&t2, Restriction::Restricted);
                assert!(energy_e2(&s2) >= energy_e2(&s));
            }
        }
    }

    #[test]
    fn pairing_cap_refusal() {
        let t = build_root_table(instance(101, 1, 50, 25));
        let s = difference_spectrum(&t, Restriction::Restricted);
        let mass = first_moment(&s);
        assert!(mass > 10);
        assert!(matches!(
            energy_e4(&s, E4Engine::Pairing { cap: 10 }),
            Err(EnergyError::BruteCapExceeded { .. })
        ));
    }

    #[test]
    fn reduce_examples() {
        let f12 = Factorization::of(12).unwrap();
        assert_eq!(
            reduce_d(&f12, 2).unwrap(),
            ReducedTriple { r_tilde: 3, t: 2, u: 1, d1: 1 }
        );
        let f7 = Factorization::of(7).unwrap();
        assert_eq!(
            reduce_d(&f7, 3).unwrap(),
            ReducedTriple { r_tilde: 7, t: 1, u: 1, d1: 3 }
        );
        let f36 = Factorization::of(36).unwrap();
        assert_eq!(
            reduce_d(&f36, 6).unwrap(),
            ReducedTriple { r_tilde: 1, t: 6, u: 1, d1: 1 }
        );
    }

    #[test]
    fn reduce_roundtrip_sampled() {
        let mut rng = SplitMix64::new(0x1D);
        for _ in 0..200 {
            let r = rng.range(1, 10_000);
            let d = rng.range(1, r);
            let f = Factorization::of(r).unwrap();
            let red = reduce_d(&f, d).unwrap();
            assert_eq!(red.t * red.u * red.d1, d);
            assert_eq!(red.r_tilde * red.t * red.t * red.u, r);
        }
    }

    #[test]
    fn partition_examples() {
        assert!(partition_check(12));
        assert!(partition_check(1));
        assert!(partition_check(360));
        for r in 1..=200 {
            assert!(partition_check(r), "tiling failed for r={r}");
        }
    }

    #[test]
    fn bound_value_examples() {
        let b = bound_values(&instance(7, 1, 4, 3), None, 0.01);
        assert_eq!(b.e2_bound.exact(), Some((27 * 16 + 3 * 4 * 7, 7)));
        assert!((b.e2_bound.value() - (27.0 * 16.0 / 7.0 + 12.0)).abs() < 1e-12);
        // H = M = r: dominated by r³.
        let b = bound_values(&instance(32, 1, 32, 32), None, 0.0);
        assert_eq!(b.e2_bound.exact(), Some((32u128.pow(5) + 32u128.pow(3), 32)));
        // Large arithmetic example: r=10^6, M=10^2, H=10.
        let b = bound_values(&instance(1_000_000, 1, 100, 10), None, 0.0);
        assert!((b.e2_bound.value() - 1010.0).abs() < 1e-9);
    }

    #[test]
    fn report_chain_certificates() {
        let mut rng = SplitMix64::new(0xCE);
        for _ in 0..40 {
            let r = rng.range(2, 60);
            let mut j = rng.range(1, r);
            while arith::gcd(r, j) != 1 {
                j = rng.range(1, r);
            }
            let m_max = rng.range(1, r.min(10));
            let h_max = rng.range(1, m_max);
            let rep = EnergyReport::compute(
                instance(r, j, m_max, h_max),
                E4Engine::Convolution,
                Some(0.05),
                0.01,
                true,
            )
            .unwrap();
            assert_eq!(rep.first_moment, rep.pair_sum);
        }
    }

    #[test]
    fn exponent_fit_power_laws() {
        let cubic: Vec<(f64, f64)> = (1..=6).map(|h| (h as f64, 5.0 * (h as f64).powi(3))).collect();
        let fit = exponent_fit(&cubic).unwrap();
        assert!((fit.slope - 3.0).abs() < 1e-9);
        let linear: Vec<(f64, f64)> = (1..=6).map(|h| (h as f64, 2.0 * h as f64)).collect();
        let fit = exponent_fit(&linear).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-9);
        assert!(matches!(
            exponent_fit(&[(1.0, 2.0), (2.0, 4.0), (3.0, 0.0)]),
            Err(EnergyError::InsufficientData { .. })
        ));
    }
}

//! The verification suite: every hard invariant of the laboratory as a
//! named criterion with an independent oracle. `Quick` shrinks sample
//! counts to fit interactive runs; `Full` runs the complete battery.
//!
//! Oracles here never call the fast path they check: roots come from
//! exhaustive residue scans, energies from direct pair/tuple enumeration,
//! minima from box enumeration, and counts from brute-force loops.

use num_complex::Complex64;
use sqrtlab_core::arith::{self, Factorization};
use sqrtlab_core::bilinear::{self, AlphaSeq, Amplitude, BetaSeq, BilinearInstance, RootConvention};
use sqrtlab_core::energy::{
    self, E4Engine, EnergyInstance, EnergyReport, EnergyValue, Restriction,
};
use sqrtlab_core::frac::Frac;
use sqrtlab_core::fx::{self, KahanComplex};
use sqrtlab_core::lattice::{self, BoxBounds, LatticeInstance};
use sqrtlab_core::rng::SplitMix64;
use sqrtlab_core::sieve::{self, SieveCaps, SieveInstance};
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    fn pick(&self, quick: u64, full: u64) -> u64 {
        match self {
            Level::Quick => quick,
            Level::Full => full,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "{} {} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.detail
        )
    }
}

fn finish(name: &'static str, started: Instant, result: Result<String, String>) -> CriterionOutcome {
    let seconds = started.elapsed().as_secs_f64();
    match result {
        Ok(detail) => CriterionOutcome { name, passed: true, detail, seconds },
        Err(detail) => CriterionOutcome { name, passed: false, detail, seconds },
    }
}

/// Exact-agreement check used by the engine criteria; kept separate so the
/// failure path (naming the violated invariant) is itself testable.
pub fn check_agreement(name: &str, fast: u128, oracle: u128, context: &str) -> Result<(), String> {
    if fast == oracle {
        Ok(())
    } else {
        Err(format!("{name}: fast={fast} oracle={oracle} at {context}"))
    }
}

fn time_budget(name: &'static str, seconds: f64, budget: f64) -> Result<(), String> {
    if seconds <= budget {
        Ok(())
    } else {
        Err(format!("{name}: runtime {seconds:.1}s exceeds budget {budget}s"))
    }
}

/// Roots of every residue modulo `r` by one exhaustive scan, sorted.
fn scan_root_buckets(r: u64) -> Vec<Vec<u64>> {
    let mut buckets = vec![Vec::new(); r as usize];
    for x in 0..r {
        let sq = (x as u128 * x as u128 % r as u128) as usize;
        buckets[sq].push(x);
    }
    buckets
}

// --- Criterion 1 -----------------------------------------------------------

pub fn criterion_root_oracle(level: Level) -> CriterionOutcome {
    let name = "root oracle equivalence";
    let started = Instant::now();
    let r_max = level.pick(600, 2000);
    let samples = level.pick(12, 50);
    let mut rng = SplitMix64::new(0x0001);
    let mut checked = 0u64;
    let mut run = || -> Result<String, String> {
        for r in 1..=r_max {
            let buckets = scan_root_buckets(r);
            let f = Factorization::of(r).map_err(|e| e.to_string())?;
            for _ in 0..samples {
                let m = rng.below(r);
                let got = arith::sqrt_mod(m, &f);
                let want = &buckets[m as usize];
                if got.as_slice() != &want[..] {
                    return Err(format!("sqrt_mod({m}, {r}) = {:?}, scan = {want:?}", got.as_slice()));
                }
                if arith::root_count(&f, m) as usize != want.len() {
                    return Err(format!("root_count({m}, {r}) disagrees with scan"));
                }
                checked += 1;
            }
        }
        Ok(format!("{checked} (m, r) samples over r <= {r_max}, all exact"))
    };
    let mut result = run();
    let seconds = started.elapsed().as_secs_f64();
    if result.is_ok() {
        if let Err(e) = time_budget(name, seconds, 30.0) {
            result = Err(e);
        }
    }
    finish(name, started, result)
}

// --- Criteria 2, 4, 5 ------------------------------------------------------

struct SmallInstanceOracle {
    /// Histogram of difference events d, built from scanned roots only.
    d_hist: BTreeMap<u64, u128>,
}

impl SmallInstanceOracle {
    fn build(r: u64, j: u64, m_max: u64, h_max: u64, buckets: &[Vec<u64>]) -> Self {
        let mut d_hist: BTreeMap<u64, u128> = BTreeMap::new();
        for m1 in 1..=m_max {
            for m2 in 1..=m_max {
                if m1 == m2 || m1.abs_diff(m2) > h_max {
                    continue;
                }
                let jm1 = (j as u128 * m1 as u128 % r as u128) as usize;
                let jm2 = (j as u128 * m2 as u128 % r as u128) as usize;
                for &x1 in &buckets[jm1] {
                    for &x2 in &buckets[jm2] {
                        *d_hist.entry((x1 + r - x2) % r).or_insert(0) += 1;
                    }
                }
            }
        }
        SmallInstanceOracle { d_hist }
    }

    /// Quadruple count: pairs of events with equal difference.
    fn e2(&self) -> u128 {
        self.d_hist.values().map(|&c| c * c).sum()
    }

    /// Octuple count by meet-in-the-middle over event sums.
    fn e4(&self, r: u64) -> u128 {
        let mut sum_hist: BTreeMap<u64, u128> = BTreeMap::new();
        for (&d1, &c1) in &self.d_hist {
            for (&d2, &c2) in &self.d_hist {
                *sum_hist.entry((d1 + d2) % r).or_insert(0) += c1 * c2;
            }
        }
        sum_hist.values().map(|&c| c * c).sum()
    }
}

fn small_instances(level: Level) -> Vec<(u64, u64, u64, u64)> {
    let r_max = level.pick(24, 40);
    let mut out = Vec::new();
    for r in 1..=r_max {
        let mut js = vec![1u64];
        if r > 2 {
            js.push(r - 1);
        }
        for j in js {
            for m_max in 1..=r.min(10) {
                for h_max in 1..=m_max {
                    out.push((r, j, m_max, h_max));
                }
            }
        }
    }
    out
}

pub fn criterion_energy_engines(level: Level) -> CriterionOutcome {
    let name = "energy engine agreement";
    let started = Instant::now();
    let run = || -> Result<String, String> {
        let mut count = 0u64;
        let mut last_r = 0;
        let mut buckets: Vec<Vec<u64>> = Vec::new();
        for (r, j, m_max, h_max) in small_instances(level) {
            if r != last_r {
                buckets = scan_root_buckets(r);
                last_r = r;
            }
            let oracle = SmallInstanceOracle::build(r, j, m_max, h_max, &buckets);
            let instance = EnergyInstance::new(r, j, m_max, h_max).map_err(|e| e.to_string())?;
            let table = energy::build_root_table(instance);
            let spectrum = energy::difference_spectrum(&table, Restriction::Restricted);
            let ctx = format!("r={r} j={j} M={m_max} H={h_max}");
            check_agreement("E2 engine agreement", energy::energy_e2(&spectrum), oracle.e2(), &ctx)?;
            let conv = energy::energy_e4(&spectrum, E4Engine::Convolution)
                .map_err(|e| e.to_string())?
                .exact()
                .expect("convolution is exact");
            check_agreement("E4 engine agreement", conv, oracle.e4(r), &ctx)?;
            count += 1;
        }
        Ok(format!("{count} instances, E2 and E4 exact across engines"))
    };
    let mut result = run();
    let seconds = started.elapsed().as_secs_f64();
    if result.is_ok() {
        if let Err(e) = time_budget(name, seconds, 60.0) {
            result = Err(e);
        }
    }
    finish(name, started, result)
}

pub fn criterion_first_moment(level: Level) -> CriterionOutcome {
    let name = "first-moment identity";
    let started = Instant::now();
    let run = || -> Result<String, String> {
        let mut count = 0u64;
        for (r, j, m_max, h_max) in small_instances(level) {
            let instance = EnergyInstance::new(r, j, m_max, h_max).map_err(|e| e.to_string())?;
            let table = energy::build_root_table(instance);
            let spectrum = energy::difference_spectrum(&table, Restriction::Restricted);
            let lhs = energy::first_moment(&spectrum);
            let rhs = energy::constrained_pair_sum(&table);
            if lhs != rhs {
                return Err(format!("sum I(d)={lhs} != pair sum {rhs} at r={r} j={j} M={m_max} H={h_max}"));
            }
            count += 1;
        }
        let larger = level.pick(30, 100);
        let mut rng = SplitMix64::new(0x0004);
        for _ in 0..larger {
            let r = rng.range(2, 100_000);
            let mut j = rng.range(1, r);
            while arith::gcd(r, j) != 1 {
                j = rng.range(1, r);
            }
            let m_max = rng.range(1, r.min(1000));
            let h_max = rng.range(1, m_max);
            let instance = EnergyInstance::new(r, j, m_max, h_max).map_err(|e| e.to_string())?;
            let table = energy::build_root_table(instance);
            let spectrum = energy::difference_spectrum(&table, Restriction::Restricted);
            let lhs = energy::first_moment(&spectrum);
            let rhs = energy::constrained_pair_sum(&table);
            if lhs != rhs {
                return Err(format!("sum I(d)={lhs} != pair sum {rhs} at r={r} j={j} M={m_max} H={h_max}"));
            }
            count += 1;
        }
        Ok(format!("{count} instances, identity exact"))
    };
    finish(name, started, run())
}

pub fn criterion_inequality_chain(level: Level) -> CriterionOutcome {
    let name = "inequality chain";
    let started = Instant::now();
    let run = || -> Result<String, String> {
        let mut count = 0u64;
        for (r, j, m_max, h_max) in small_instances(level) {
            let instance = EnergyInstance::new(r, j, m_max, h_max).map_err(|e| e.to_string())?;
            let report =
                EnergyReport::compute(instance, E4Engine::Convolution, None, 0.01, false)
                    .map_err(|e| e.to_string())?;
            let m2 = report.first_moment * report.first_moment;
            let e4 = report.e4.exact().expect("exact engine");
            if e4 > m2 * report.e2.max(1) && report.e2 > 0 {
                return Err(format!("E4 chain violated at r={r} j={j}"));
            }
            if report.e2 * (r as u128) < m2 {
                return Err(format!("E2 lower bound violated at r={r} j={j}"));
            }
            count += 1;
        }
        // Moderate random instances keep the convolution affordable while
        // exercising larger moduli.
        let extra = level.pick(15, 50);
        let mut rng = SplitMix64::new(0x0005);
        for _ in 0..extra {
            let r = rng.range(2, 2000);
            let mut j = rng.range(1, r);
            while arith::gcd(r, j) != 1 {
                j = rng.range(1, r);
            }
            let m_max = rng.range(1, r.min(60));
            let h_max = rng.range(1, m_max);
            let instance = EnergyInstance::new(r, j, m_max, h_max).map_err(|e| e.to_string())?;
            EnergyReport::compute(instance, E4Engine::Convolution, Some(0.05), 0.01, false)
                .map_err(|e| format!("r={r} j={j} M={m_max} H={h_max}: {e}"))?;
            count += 1;
        }
        Ok(format!("{count} reports constructed, chain certificates all hold"))
    };
    finish(name, started, run())
}

// --- Criterion 3 -----------------------------------------------------------

pub fn criterion_spectral_identity(level: Level) -> CriterionOutcome {
    let name = "spectral identity";
    let started = Instant::now();
    let run = || -> Result<String, String> {
        // Golden worked instance first.
        let instance = EnergyInstance::new(7, 1, 4, 3).map_err(|e| e.to_string())?;
        let table = energy::build_root_table(instance);
        let spectrum = energy::difference_spectrum(&table, Restriction::Restricted);
        check_agreement("golden E2", energy::energy_e2(&spectrum), 96, "r=7 j=1 M=4 H=3")?;
        let conv = energy::energy_e4(&spectrum, E4Engine::Convolution)
            .map_err(|e| e.to_string())?
            .exact()
            .unwrap();
        check_agreement("golden E4", conv, 47_616, "r=7 j=1 M=4 H=3")?;

        let trials = level.pick(50, 200);
        let r_cap = level.pick(1500, 5000);
        let mut rng = SplitMix64::new(0x0003);
        let mut max_rel = 0.0f64;
        for _ in 0..trials {
            let r = rng.range(2, r_cap);
            let mut j = rng.range(1, r);
            while arith::gcd(r, j) != 1 {
                j = rng.range(1, r);
            }
            let m_max = rng.range(1, r.min(24));
            let h_max = rng.range(1, m_max);
            let instance = EnergyInstance::new(r, j, m_max, h_max).map_err(|e| e.to_string())?;
            let table = energy::build_root_table(instance);
            let spectrum = energy::difference_spectrum(&table, Restriction::Restricted);
            let conv = energy::energy_e4(&spectrum, E4Engine::Convolution)
                .map_err(|e| e.to_string())?
                .exact()
                .unwrap();
            let spectral = match energy::energy_e4(&spectrum, E4Engine::Spectral)
                .map_err(|e| e.to_string())?
            {
                EnergyValue::Approx(v) => v,
                EnergyValue::Exact(_) => unreachable!(),
            };
            let rel = if conv == 0 {
                spectral.abs()
            } else {
                (spectral - fx::ratio_f64(conv, 1)).abs() / fx::ratio_f64(conv, 1)
            };
            max_rel = max_rel.max(rel);
            if rel > 1e-6 {
                return Err(format!(
                    "spectral/convolution disagree: rel={rel:.3e} at r={r} j={j} M={m_max} H={h_max}"
                ));
            }
        }
        Ok(format!("golden values exact; {trials} random instances, max rel err {max_rel:.3e}"))
    };
    finish(name, started, run())
}

// --- Criterion 6 -----------------------------------------------------------

fn brute_minima_check(
    lat: &LatticeInstance,
    bx: &BoxBounds,
    fast: &lattice::MinimaResult,
) -> Result<(), String> {
    let a = bx.half_x as i128;
    let b = bx.half_y as i128;
    let r = lat.modulus() as i128;
    let lam2_x = fast.lambda2.mul(&Frac::from_int(a)).ceil() + 1;
    let lam2_y = fast.lambda2.mul(&Frac::from_int(b)).ceil() + 1;
    let x_max = (3 * a.max(r)).max(lam2_x);
    let y_max = (3 * b.max(r)).max(lam2_y);
    let gauge = |x: i128, y: i128| Frac::new((x.abs() * b).max(y.abs() * a), a * b);
    let mut found: Vec<(Frac, i128, i128)> = Vec::new();
    for x in -x_max..=x_max {
        for y in -y_max..=y_max {
            if (x, y) == (0, 0) || !lat.contains(x, y) {
                continue;
            }
            // Canonical representative.
            let (x, y) = if y < 0 || (y == 0 && x < 0) { (-x, -y) } else { (x, y) };
            found.push((gauge(x, y), x, y));
        }
    }
    found.sort_by_key(|&(g, x, y)| (g, x.abs(), y.abs(), x));
    found.dedup();
    let &(g1, x1, y1) = found.first().ok_or("no lattice point found in scan")?;
    let &(g2, x2, y2) = found
        .iter()
        .find(|&&(_, x, y)| x1 * y - y1 * x != 0)
        .ok_or("no independent lattice point found in scan")?;
    if g1 != fast.lambda1 || (x1 as i64, y1 as i64) != fast.v1 {
        return Err(format!(
            "lambda1 mismatch: fast {} at {:?}, brute {} at ({x1},{y1})",
            fast.lambda1, fast.v1, g1
        ));
    }
    if g2 != fast.lambda2 || (x2 as i64, y2 as i64) != fast.v2 {
        return Err(format!(
            "lambda2 mismatch: fast {} at {:?}, brute {} at ({x2},{y2})",
            fast.lambda2, fast.v2, g2
        ));
    }
    Ok(())
}

pub fn criterion_lattice_certificates(level: Level) -> CriterionOutcome {
    let name = "lattice certificates";
    let started = Instant::now();
    let run = || -> Result<String, String> {
        // Golden instance.
        let lat = LatticeInstance::new(5, 1);
        let bx = BoxBounds::new(4, 4);
        let minima = lattice::successive_minima(&lat, &bx);
        if minima.lambda1 != Frac::new(1, 4) || minima.lambda2 != Frac::new(3, 4) {
            return Err(format!("golden minima wrong: {} {}", minima.lambda1, minima.lambda2));
        }
        if lattice::count_lattice_points(&lat, &bx) != 17 {
            return Err("golden point count wrong".into());
        }

        let trials = level.pick(120, 500);
        let mut rng = SplitMix64::new(0x0006);
        for i in 0..trials {
            let r = rng.range(1, 100);
            let c = rng.below(r);
            let lat = LatticeInstance::new(r, c);
            let bx = BoxBounds::new(rng.range(1, 64), rng.range(1, 64));
            let minima = lattice::successive_minima(&lat, &bx);
            brute_minima_check(&lat, &bx, &minima)
                .map_err(|e| format!("trial {i} (r={r} c={c}): {e}"))?;
            let count = lattice::count_lattice_points(&lat, &bx);
            let mink = lattice::minkowski_check(&lat, &bx, &minima);
            if !mink.holds {
                return Err(format!("Minkowski violated at trial {i} (r={r} c={c})"));
            }
            let bhw = lattice::bhw_check(&minima, count);
            if !bhw.holds {
                return Err(format!("point-count bound violated at trial {i} (r={r} c={c})"));
            }
        }
        Ok(format!("golden instance plus {trials} random instances, zero violations"))
    };
    finish(name, started, run())
}

// --- Criterion 7 -----------------------------------------------------------

pub fn criterion_reduction_tiling(level: Level) -> CriterionOutcome {
    let name = "reduction tiling";
    let started = Instant::now();
    let r_max = level.pick(800, 3000);
    let run = || -> Result<String, String> {
        for r in 1..=r_max {
            if !energy::partition_check(r) {
                return Err(format!("tiling failed at r={r}"));
            }
        }
        Ok(format!("classes tile {{1..r}} exactly for every r <= {r_max}"))
    };
    let mut result = run();
    let seconds = started.elapsed().as_secs_f64();
    if result.is_ok() {
        if let Err(e) = time_budget(name, seconds, 20.0) {
            result = Err(e);
        }
    }
    finish(name, started, result)
}

// --- Criterion 8 -----------------------------------------------------------

/// Naive reference evaluator: roots from an exhaustive residue scan, one
/// flat compensated double loop.
fn naive_sigma(inst: &BilinearInstance) -> Complex64 {
    let r = inst.r;
    let buckets = scan_root_buckets(r);
    let mut acc = KahanComplex::new();
    let l_max = inst.alpha.l_max() as i64;
    for l in -l_max..=l_max {
        for m in 1..=inst.beta.m_max() {
            let jm = (inst.j as u128 * m as u128 % r as u128) as usize;
            for &x in &buckets[jm] {
                let t = (l as i128 * x as i128).rem_euclid(r as i128);
                let phase = t as f64 / r as f64 + l as f64 * inst.amplitude.eval(m as f64);
                acc.add(inst.alpha.get(l) * inst.beta.get(m) * fx::e_unit(phase));
            }
        }
    }
    acc.value()
}

pub fn criterion_bilinear_dual_path(level: Level) -> CriterionOutcome {
    let name = "bilinear dual path";
    let started = Instant::now();
    let run = || -> Result<String, String> {
        let trials = level.pick(200, 1000);
        let mut rng = SplitMix64::new(0x0008);
        let mut max_rel = 0.0f64;
        for i in 0..trials {
            let r = rng.range(2, 10_000);
            let mut j = rng.range(1, r);
            while arith::gcd(r, j) != 1 {
                j = rng.range(1, r);
            }
            let l_max = rng.below(201);
            let m_max = rng.range(1, 200);
            let alpha = AlphaSeq::new(
                l_max,
                (0..2 * l_max + 1)
                    .map(|_| Complex64::new(rng.next_signed_unit(), rng.next_signed_unit()))
                    .collect(),
            )
            .expect("length matches");
            let beta = BetaSeq::new(
                (0..m_max)
                    .map(|_| Complex64::new(rng.next_signed_unit(), rng.next_signed_unit()))
                    .collect(),
            );
            let amplitude = if rng.below(2) == 0 {
                Amplitude::Zero
            } else {
                Amplitude::NegSqrt { scale: rng.next_f64() * 0.5 }
            };
            let inst = BilinearInstance::new(r, j, alpha, beta, amplitude)
                .map_err(|e| e.to_string())?;
            let fast = bilinear::eval_sigma(&inst, RootConvention::Multiset);
            let naive = naive_sigma(&inst);
            // Relative to the sum's scale: a cancellation-tiny value cannot
            // serve as a denominator.
            let scale = naive.norm().max(fast.norm()).max(1e-6 * bilinear::absolute_ceiling(&inst)).max(1e-12);
            let rel = (fast - naive).norm() / scale;
            max_rel = max_rel.max(rel);
            if rel > 2e-10 {
                return Err(format!(
                    "dual-path split: rel={rel:.3e} at trial {i} (r={r} j={j} L={l_max} M={m_max})"
                ));
            }
        }
        Ok(format!("{trials} instances, max rel err {max_rel:.3e}"))
    };
    finish(name, started, run())
}

// --- Criterion 9 -----------------------------------------------------------

pub fn criterion_weyl_sanity(level: Level) -> CriterionOutcome {
    let name = "Weyl sanity";
    let started = Instant::now();
    let run = || -> Result<String, String> {
        let trials = level.pick(300, 1000);
        let mut rng = SplitMix64::new(0x0009);
        let mut max_ratio = 0.0f64;
        for i in 0..trials {
            let m_max = rng.range(2, 128);
            let h = rng.range(1, m_max);
            let beta: Vec<Complex64> = (0..m_max)
                .map(|_| Complex64::new(rng.next_signed_unit(), rng.next_signed_unit()))
                .collect();
            let (a, b, c) = (rng.next_signed_unit(), rng.next_signed_unit(), rng.next_f64());
            let rep = bilinear::weyl_check(&beta, |x| a * x * x / 128.0 + b * x + c, h);
            if rep.rhs < -1e-9 {
                return Err(format!("right side negative at trial {i}: {}", rep.rhs));
            }
            max_ratio = max_ratio.max(rep.ratio);
            if rep.ratio > 3.0 {
                return Err(format!(
                    "ratio {:.4} > 3 at trial {i} (M={m_max} H={h})",
                    rep.ratio
                ));
            }
        }
        Ok(format!("{trials} trials, max lhs/rhs ratio {max_ratio:.4}"))
    };
    finish(name, started, run())
}

// --- Criterion 10 ----------------------------------------------------------

pub fn criterion_large_sieve(level: Level) -> CriterionOutcome {
    let name = "large-sieve certificate";
    let started = Instant::now();
    let run = || -> Result<String, String> {
        let caps = SieveCaps::default();
        let seqs = level.pick(60, 200);
        let mut rng = SplitMix64::new(0x000A);
        let mut max_ratio = 0.0f64;
        for i in 0..seqs {
            let q = [2u64, 4, 8][rng.below(3) as usize];
            let n = [8u64, 64, 512][rng.below(3) as usize];
            let coeffs = (0..n)
                .map(|_| Complex64::new(rng.next_signed_unit(), rng.next_signed_unit()))
                .collect();
            let inst = SieveInstance::new(q, rng.below(64) as i64 - 32, coeffs);
            let cert = sieve::mv_certificate(&inst, &caps).map_err(|e| e.to_string())?;
            max_ratio = max_ratio.max(cert.ratio);
            if !cert.holds {
                return Err(format!(
                    "classical bound violated at trial {i} (Q={q} N={n}): lhs={} bound={}",
                    cert.lhs, cert.bound
                ));
            }
        }
        let p_trials = level.pick(150, 500);
        for i in 0..p_trials {
            let q = rng.range(1, 64);
            let alpha = Frac::new(rng.below(4_000) as i128 - 2_000, rng.range(1, 997) as i128);
            let delta = Frac::new(rng.range(1, 40) as i128, rng.range(40, 4_000) as i128);
            let fast = sieve::count_p(&alpha, q, &delta);
            let brute = sieve::count_p_brute(&alpha, q, &delta);
            if fast != brute {
                return Err(format!(
                    "P(alpha) split at trial {i}: fast={fast} brute={brute} (alpha={alpha} delta={delta} Q={q})"
                ));
            }
        }
        Ok(format!(
            "{seqs} sequences certified (max ratio {max_ratio:.3}); {p_trials} P(alpha) checks exact"
        ))
    };
    finish(name, started, run())
}

// --- Criterion 11 ----------------------------------------------------------

/// Regression baselines for the growth experiment, recorded from the first
/// oracle run; re-runs must stay within ±0.2.
const SLOPE_BASELINES: &[(u64, f64)] = &[(10_007, 1.0585), (40_009, 1.0546)];

pub fn criterion_growth_baseline(level: Level) -> CriterionOutcome {
    let name = "energy growth baseline";
    let started = Instant::now();
    let run = || -> Result<String, String> {
        let moduli: &[(u64, f64)] = match level {
            Level::Quick => &SLOPE_BASELINES[..1],
            Level::Full => SLOPE_BASELINES,
        };
        let mut details = Vec::new();
        for &(r, baseline) in moduli {
            let m_max = sieve::integer_sqrt(r);
            let mut points = Vec::new();
            let mut h = 2u64;
            while h <= m_max {
                let instance = EnergyInstance::new(r, 1, m_max, h).map_err(|e| e.to_string())?;
                let table = energy::build_root_table(instance);
                let spectrum = energy::difference_spectrum(&table, Restriction::Restricted);
                let e2 = energy::energy_e2(&spectrum);
                points.push((h as f64, fx::ratio_f64(e2, 1)));
                h *= 2;
            }
            let fit = energy::exponent_fit(&points).map_err(|e| e.to_string())?;
            if !(0.5 < fit.slope && fit.slope < 3.3) {
                return Err(format!("slope {:.4} outside (0.5, 3.3) at r={r}", fit.slope));
            }
            if (fit.slope - baseline).abs() > 0.2 {
                return Err(format!(
                    "slope {:.4} drifted from baseline {baseline} at r={r}",
                    fit.slope
                ));
            }
            details.push(format!("r={r}: slope {:.4} (baseline {baseline})", fit.slope));
        }
        Ok(details.join("; "))
    };
    finish(name, started, run())
}

// --- Suite driver ----------------------------------------------------------

type CriterionFn = fn(Level) -> CriterionOutcome;

pub const CRITERIA: &[CriterionFn] = &[
    criterion_root_oracle,
    criterion_energy_engines,
    criterion_spectral_identity,
    criterion_first_moment,
    criterion_inequality_chain,
    criterion_lattice_certificates,
    criterion_reduction_tiling,
    criterion_bilinear_dual_path,
    criterion_weyl_sanity,
    criterion_large_sieve,
    criterion_growth_baseline,
];

pub fn run_all(level: Level) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|f| f(level)).collect()
}

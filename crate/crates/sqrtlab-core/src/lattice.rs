//! The planar congruence lattice `L(r̃; d) = {(x, y) : x ≡ c·y (mod r̃)}`
//! with `c = k·d²`, axis-aligned boxes, and exact geometry-of-numbers
//! diagnostics: successive minima with witnesses, point counts, the
//! two-sided Minkowski check, the Betke–Henk–Wills point bound, and the
//! congruence counters the energy split reduces to.
//!
//! Minima are computed for the gauge of the box, `G(v) = max(|x|/A, |y|/B)`:
//! Lagrange–Gauss reduction in the box-scaled Euclidean form, then exact
//! minimization over each basis slice (the gauge is convex piecewise-linear
//! per slice, so the integer minimizer sits at floor/ceil of a vertex or a
//! crossing point). Values are exact rationals; no floating point decides
//! anything.

use crate::arith;
use crate::frac::{div_ceil_i128, div_floor_i128, Frac};
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeError {
    /// Minima need positive half-widths.
    DegenerateBox,
    /// `tu > H` leaves an empty difference window.
    WindowTooSmall { h_max: u64, t: u64, u: u64 },
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::DegenerateBox => write!(f, "box half-widths must be >= 1"),
            LatticeError::WindowTooSmall { h_max, t, u } => {
                write!(f, "reduced window floor(H/(t*u)) is empty (H={h_max}, t={t}, u={u})")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for LatticeError {}

/// Index-`r̃` sublattice of Z²: `(x, y)` with `x ≡ c·y (mod r̃)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeInstance {
    modulus: u64,
    c: u64,
}

impl LatticeInstance {
    pub fn new(modulus: u64, c: u64) -> Self {
        assert!(modulus >= 1);
        LatticeInstance { modulus, c: c % modulus }
    }

    /// The lattice for a reduced class: `c = k·d² mod r̃`.
    pub fn from_class(r_tilde: u64, k: u64, d: u64) -> Self {
        let d = (d as u128 % r_tilde as u128) as u64;
        let d2 = arith::mul_mod(d, d, r_tilde);
        LatticeInstance::new(r_tilde, arith::mul_mod(k % r_tilde, d2, r_tilde))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    /// Basis `(c, 1)`, `(r̃, 0)`; covolume `r̃`.
    pub fn basis(&self) -> [(i64, i64); 2] {
        [(self.c as i64, 1), (self.modulus as i64, 0)]
    }

    pub fn contains(&self, x: i128, y: i128) -> bool {
        (x - self.c as i128 * y).rem_euclid(self.modulus as i128) == 0
    }
}

/// Closed box `{(x, y) : |x| <= half_x, |y| <= half_y}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoxBounds {
    pub half_x: u64,
    pub half_y: u64,
}

impl BoxBounds {
    pub fn new(half_x: u64, half_y: u64) -> Self {
        BoxBounds { half_x, half_y }
    }

    pub fn volume(&self) -> u128 {
        4 * self.half_x as u128 * self.half_y as u128
    }
}

/// Successive minima of the lattice for the box gauge, with witnesses.
///
/// Witnesses are canonical: `y > 0`, or `y = 0` and `x > 0`; among equal
/// gauges the smallest `(|x|, |y|, x)` wins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimaResult {
    pub lambda1: Frac,
    pub lambda2: Frac,
    pub v1: (i64, i64),
    pub v2: (i64, i64),
}

type Vec2 = (i128, i128);

fn q_form(v: Vec2, a: i128, b: i128) -> i128 {
    let sx = v.0 * b;
    let sy = v.1 * a;
    sx * sx + sy * sy
}

fn dot_form(u: Vec2, v: Vec2, a: i128, b: i128) -> i128 {
    (u.0 * b) * (v.0 * b) + (u.1 * a) * (v.1 * a)
}

/// Scaled sup gauge `max(|x|·B, |y|·A)`; the true gauge is this over `A·B`.
fn scaled_gauge(v: Vec2, a: i128, b: i128) -> i128 {
    (v.0.abs() * b).max(v.1.abs() * a)
}

fn nearest_div(num: i128, den: i128) -> i128 {
    debug_assert!(den > 0);
    div_floor_i128(2 * num + den, 2 * den)
}

fn canonical(v: Vec2) -> Vec2 {
    if v.1 < 0 || (v.1 == 0 && v.0 < 0) {
        (-v.0, -v.1)
    } else {
        v
    }
}

fn cross(u: Vec2, v: Vec2) -> i128 {
    u.0 * v.1 - u.1 * v.0
}

pub fn successive_minima(lattice: &LatticeInstance, bounds: &BoxBounds) -> MinimaResult {
    assert!(bounds.half_x >= 1 && bounds.half_y >= 1, "minima need a nondegenerate box");
    let a = bounds.half_x as i128;
    let b = bounds.half_y as i128;
    let mut b1: Vec2 = (lattice.c as i128, 1);
    let mut b2: Vec2 = (lattice.modulus as i128, 0);

    // Lagrange–Gauss in the scaled Euclidean form.
    loop {
        if q_form(b1, a, b) > q_form(b2, a, b) {
            core::mem::swap(&mut b1, &mut b2);
        }
        let mu = nearest_div(dot_form(b1, b2, a, b), q_form(b1, a, b));
        if mu == 0 {
            break;
        }
        b2 = (b2.0 - mu * b1.0, b2.1 - mu * b1.1);
    }

    // Candidate integer points per slice v = beta·b2 + alpha·b1, beta in
    // {0, 1}: vertices and crossings of the two |linear| parts, plus a
    // small fixed window. Convexity of the gauge per slice makes this set
    // cover every gauge minimizer and every lexicographic tie.
    let mut alphas: Vec<i128> = Vec::new();
    let push_ratio = |alphas: &mut Vec<i128>, num: i128, den: i128| {
        if den == 0 {
            return;
        }
        let lo = div_floor_i128(num, den);
        let hi = div_ceil_i128(num, den);
        for v in [lo - 1, lo, hi, hi + 1] {
            alphas.push(v);
        }
    };
    let mut candidates: Vec<Vec2> = Vec::new();
    for beta in [0i128, 1] {
        alphas.clear();
        for w in -2..=2 {
            alphas.push(w);
        }
        let (x1, y1) = b1;
        let (x2, y2) = (beta * b2.0, beta * b2.1);
        push_ratio(&mut alphas, -x2, x1);
        push_ratio(&mut alphas, -y2, y1);
        // |x(α)|·B = |y(α)|·A crossings, both sign combinations.
        push_ratio(&mut alphas, -(x2 * b - y2 * a), x1 * b - y1 * a);
        push_ratio(&mut alphas, -(x2 * b + y2 * a), x1 * b + y1 * a);
        alphas.sort_unstable();
        alphas.dedup();
        for &alpha in alphas.iter() {
            let v = (x2 + alpha * x1, y2 + alpha * y1);
            if v != (0, 0) {
                candidates.push(canonical(v));
            }
        }
    }
    candidates.sort_unstable();
    candidates.dedup();

    let key = |v: &Vec2| (scaled_gauge(*v, a, b), v.0.abs(), v.1.abs(), v.0);
    let v1 = *candidates.iter().min_by_key(|v| key(v)).expect("nonzero candidates");
    let v2 = *candidates
        .iter()
        .filter(|v| cross(**v, v1) != 0)
        .min_by_key(|v| key(v))
        .expect("independent candidate");
    debug_assert!(lattice.contains(v1.0, v1.1) && lattice.contains(v2.0, v2.1));

    let ab = a * b;
    MinimaResult {
        lambda1: Frac::new(scaled_gauge(v1, a, b), ab),
        lambda2: Frac::new(scaled_gauge(v2, a, b), ab),
        v1: (v1.0 as i64, v1.1 as i64),
        v2: (v2.0 as i64, v2.1 as i64),
    }
}

/// Exact number of lattice points in the closed box, by per-row stepping.
pub fn count_lattice_points(lattice: &LatticeInstance, bounds: &BoxBounds) -> u128 {
    let r = lattice.modulus as i128;
    let a = bounds.half_x as i128;
    let b = bounds.half_y as i128;
    let mut total: u128 = 0;
    for y in -b..=b {
        let x0 = (lattice.c as i128 * y).rem_euclid(r);
        // Integers x in [-A, A] with x ≡ x0 (mod r).
        let count = div_floor_i128(a - x0, r) + div_floor_i128(a + x0, r) + 1;
        if count > 0 {
            total += count as u128;
        }
    }
    total
}

/// Two-sided Minkowski certificate for `n = 2`:
/// `(1/4)·Vol/r̃ <= 1/(λ1λ2) <= (1/2)·Vol/r̃`, decided exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinkowskiCheck {
    pub holds: bool,
    pub lower: f64,
    pub middle: f64,
    pub upper: f64,
}

pub fn minkowski_check(
    lattice: &LatticeInstance,
    bounds: &BoxBounds,
    minima: &MinimaResult,
) -> MinkowskiCheck {
    let r = Frac::from_int(lattice.modulus as i128);
    let ab = Frac::from_int(bounds.half_x as i128 * bounds.half_y as i128);
    let product = minima.lambda1.mul(&minima.lambda2);
    // lower <= middle: AB/r̃ <= 1/(λ1λ2)  <=>  λ1λ2 <= r̃/AB.
    let lower_ok = product.mul(&ab) <= r;
    // middle <= upper: 1/(λ1λ2) <= 2AB/r̃  <=>  r̃ <= 2·AB·λ1λ2.
    let upper_ok = r <= Frac::from_int(2).mul(&ab).mul(&product);
    let middle = 1.0 / product.to_f64();
    MinkowskiCheck {
        holds: lower_ok && upper_ok,
        lower: ab.to_f64() / r.to_f64(),
        middle,
        upper: 2.0 * ab.to_f64() / r.to_f64(),
    }
}

/// Point-count certificate: `count <= (2/λ1 + 1)·(4/λ2 + 1)`, exact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BhwCheck {
    pub holds: bool,
    pub count: u128,
    pub bound: f64,
}

pub fn bhw_check(minima: &MinimaResult, count: u128) -> BhwCheck {
    let two_over_l1 = Frac::new(2 * minima.lambda1.den(), minima.lambda1.num());
    let four_over_l2 = Frac::new(4 * minima.lambda2.den(), minima.lambda2.num());
    let bound = two_over_l1.add(&Frac::ONE).mul(&four_over_l2.add(&Frac::ONE));
    let holds = Frac::from_int(count as i128) <= bound;
    BhwCheck { holds, count, bound: bound.to_f64() }
}

/// Which part of the split a class falls into, by its minima.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseClass {
    /// `λ1 > 1`: at most one admissible pair.
    S0,
    /// `λ1 <= 1 < λ2`: one short direction.
    S1,
    /// `λ2 <= 1`: the box already contains two independent vectors.
    S2,
}

impl fmt::Display for CaseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseClass::S0 => "S0",
            CaseClass::S1 => "S1",
            CaseClass::S2 => "S2",
        };
        write!(f, "{s}")
    }
}

pub fn classify_minima(minima: &MinimaResult) -> CaseClass {
    if minima.lambda1 > Frac::ONE {
        CaseClass::S0
    } else if minima.lambda2 > Frac::ONE {
        CaseClass::S1
    } else {
        CaseClass::S2
    }
}

/// Full per-class analysis for a reduced difference class: the lattice for
/// `c = k·d²`, the box `(⌊H/(tu)⌋², 4M)`, its minima and classification.
#[derive(Clone, Debug)]
pub struct CaseAnalysis {
    pub lattice: LatticeInstance,
    pub bounds: BoxBounds,
    pub h_reduced: u64,
    pub minima: MinimaResult,
    pub class: CaseClass,
}

pub fn classify_case(
    r_tilde: u64,
    k: u64,
    t: u64,
    u: u64,
    d1: u64,
    h_max: u64,
    m_max: u64,
) -> Result<CaseAnalysis, LatticeError> {
    let h_reduced = h_max / (t * u);
    if h_reduced == 0 {
        return Err(LatticeError::WindowTooSmall { h_max, t, u });
    }
    let lattice = LatticeInstance::from_class(r_tilde, k, d1);
    let bounds = BoxBounds::new(h_reduced * h_reduced, 4 * m_max);
    let minima = successive_minima(&lattice, &bounds);
    let class = classify_minima(&minima);
    Ok(CaseAnalysis { lattice, bounds, h_reduced, minima, class })
}

/// Exact count of `(h, m)` with `1 <= |h| <= ⌊H/(tu)⌋`, `1 <= m <= 4M`, and
/// `h² + k²t²u²d1⁴ ≡ k·d1²·m (mod r̃)`, solving the linear congruence in `m`
/// per `h`. Requires `gcd(r̃, k·d1) = 1`, which the reduction guarantees.
pub fn count_j(r_tilde: u64, t: u64, u: u64, d1: u64, k: u64, h_max: u64, m_max: u64) -> u128 {
    let h_reduced = h_max / (t * u);
    if h_reduced == 0 {
        return 0;
    }
    let m_hi = 4 * m_max;
    if r_tilde == 1 {
        return 2 * h_reduced as u128 * m_hi as u128;
    }
    let r = r_tilde;
    let k = k % r;
    let d1r = d1 % r;
    let d1_sq = arith::mul_mod(d1r, d1r, r);
    let kd2 = arith::mul_mod(k, d1_sq, r);
    let inv_kd2 = arith::inv_mod(kd2, r).expect("reduced class has gcd(r̃, k d1²) = 1");
    // Constant term k²·t²·u²·d1⁴ mod r̃.
    let tu = arith::mul_mod(t % r, u % r, r);
    let ktud2 = arith::mul_mod(arith::mul_mod(k, tu, r), d1_sq, r);
    let const_term = arith::mul_mod(ktud2, ktud2, r);
    // k²t²u²d1⁴ = (k·tu·d1²)² only when squaring commutes with the mod, which
    // it does termwise; keep it explicit for clarity.
    let mut total: u128 = 0;
    for h in 1..=h_reduced {
        let h_sq = arith::mul_mod(h % r, h % r, r);
        let rhs = (h_sq + const_term) % r;
        let m0 = arith::mul_mod(inv_kd2, rhs, r);
        total += 2 * count_in_class(m0, r, m_hi);
    }
    total
}

/// Integers `m` in `[1, hi]` with `m ≡ m0 (mod r)`, `0 <= m0 < r`.
fn count_in_class(m0: u64, r: u64, hi: u64) -> u128 {
    if m0 == 0 {
        (hi / r) as u128
    } else if m0 <= hi {
        ((hi - m0) / r + 1) as u128
    } else {
        0
    }
}

/// Exact count of `(h, m, d)` with `1 <= h <= H`, `1 <= m <= 4M`, `|d| <= D`
/// and `h² − k·d²·m + k²·d⁴ ≡ 0 (mod r)`, solving for `m` per `(h, d)`.
/// Cost `O(H·D)`. Requires `gcd(k, r) = 1`.
pub fn count_box_congruence(r: u64, k: u64, h_max: u64, m_max: u64, d_max: u64) -> u128 {
    assert!(r >= 1, "modulus must be positive");
    assert!(arith::gcd(k % r, r) == 1 || r == 1, "k must be a unit mod r");
    let m_hi = 4 * m_max;
    let mut total = 0u128;
    for d in 0..=d_max {
        let weight = if d == 0 { 1u128 } else { 2 };
        let dr = d % r;
        let d2 = arith::mul_mod(dr, dr, r);
        let kd2 = arith::mul_mod(k % r, d2, r);
        let kd2_sq = arith::mul_mod(kd2, kd2, r);
        let g = arith::gcd(kd2, r).max(1);
        let r_g = r / g;
        // a·m ≡ b (mod r) with gcd(a, r) = g: solvable iff g | b, and then
        // m is fixed modulo r/g.
        let inv = if kd2 == 0 { 0 } else { arith::inv_mod(kd2 / g, r_g).expect("unit after division") };
        for h in 1..=h_max {
            let hr = h % r;
            let h_sq = arith::mul_mod(hr, hr, r);
            let b = (h_sq + kd2_sq) % r;
            if b % g != 0 {
                continue;
            }
            let count = if r_g == 1 {
                m_hi as u128
            } else {
                let m0 = arith::mul_mod((b / g) % r_g, inv, r_g);
                count_in_class(m0, r_g, m_hi)
            };
            total += weight * count;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    /// Exhaustive minima by scanning a superset window; `extra` widens the
    /// scan beyond the fast result so completeness is airtight.
    fn brute_minima(lat: &LatticeInstance, bx: &BoxBounds, fast: &MinimaResult) -> MinimaResult {
        let a = bx.half_x as i128;
        let b = bx.half_y as i128;
        let r = lat.modulus() as i128;
        let x_max = (3 * a.max(r)).max(fast.lambda2.mul(&Frac::from_int(a)).ceil() + 1);
        let y_max = (3 * b.max(r)).max(fast.lambda2.mul(&Frac::from_int(b)).ceil() + 1);
        let mut best: Vec<((i128, i128, i128, i128), Vec2)> = Vec::new();
        for x in -x_max..=x_max {
            for y in -y_max..=y_max {
                if (x, y) == (0, 0) || !lat.contains(x, y) {
                    continue;
                }
                let v = canonical((x, y));
                let g = scaled_gauge(v, a, b);
                best.push(((g, v.0.abs(), v.1.abs(), v.0), v));
            }
        }
        best.sort();
        best.dedup();
        let (k1, v1) = best[0];
        let (k2, v2) = *best.iter().find(|(_, v)| cross(*v, v1) != 0).unwrap();
        let ab = a * b;
        MinimaResult {
            lambda1: Frac::new(k1.0, ab),
            lambda2: Frac::new(k2.0, ab),
            v1: (v1.0 as i64, v1.1 as i64),
            v2: (v2.0 as i64, v2.1 as i64),
        }
    }

    #[test]
    fn golden_instance() {
        let lat = LatticeInstance::new(5, 1);
        let bx = BoxBounds::new(4, 4);
        let m = successive_minima(&lat, &bx);
        assert_eq!(m.lambda1, Frac::new(1, 4));
        assert_eq!(m.v1, (1, 1));
        assert_eq!(m.lambda2, Frac::new(3, 4));
        assert_eq!(m.v2, (-2, 3));
        assert_eq!(count_lattice_points(&lat, &bx), 17);
        let mink = minkowski_check(&lat, &bx, &m);
        assert!(mink.holds);
        assert!((mink.lower - 3.2).abs() < 1e-12);
        assert!((mink.middle - 16.0 / 3.0).abs() < 1e-12);
        assert!((mink.upper - 6.4).abs() < 1e-12);
        let bhw = bhw_check(&m, 17);
        assert!(bhw.holds);
        assert!((bhw.bound - 57.0).abs() < 1e-12);
    }

    #[test]
    fn identity_lattice() {
        let lat = LatticeInstance::new(1, 0);
        let bx = BoxBounds::new(1, 1);
        let m = successive_minima(&lat, &bx);
        assert_eq!(m.lambda1, Frac::ONE);
        assert_eq!(m.lambda2, Frac::ONE);
        assert_eq!(count_lattice_points(&lat, &bx), 9);
        assert!(minkowski_check(&lat, &bx, &m).holds);
        let bhw = bhw_check(&m, 9);
        assert!(bhw.holds && (bhw.bound - 15.0).abs() < 1e-12);
    }

    #[test]
    fn thin_box_minima() {
        // Oracle-fixed: lattice x ≡ 2y (mod 7) in the unit box has sup-norm
        // minima 2 and 3.
        let lat = LatticeInstance::new(7, 2);
        let bx = BoxBounds::new(1, 1);
        let m = successive_minima(&lat, &bx);
        assert_eq!(m.lambda1, Frac::from_int(2));
        assert_eq!(m.v1, (2, 1));
        assert_eq!(m.lambda2, Frac::from_int(3));
        assert_eq!(m.v2, (-1, 3));
    }

    #[test]
    fn minima_match_enumeration() {
        let mut rng = SplitMix64::new(0x1A77);
        for _ in 0..150 {
            let r = rng.range(1, 60);
            let c = rng.below(r);
            let lat = LatticeInstance::new(r, c);
            let bx = BoxBounds::new(rng.range(1, 24), rng.range(1, 24));
            let fast = successive_minima(&lat, &bx);
            let brute = brute_minima(&lat, &bx, &fast);
            assert_eq!(fast, brute, "r={r} c={c} box=({},{})", bx.half_x, bx.half_y);
            let count = count_lattice_points(&lat, &bx);
            assert!(minkowski_check(&lat, &bx, &fast).holds);
            assert!(bhw_check(&fast, count).holds);
        }
    }

    #[test]
    fn point_count_edge_cases() {
        let lat = LatticeInstance::new(5, 1);
        assert_eq!(count_lattice_points(&lat, &BoxBounds::new(0, 0)), 1);
        // Exhaustive cross-check.
        let mut rng = SplitMix64::new(0xC0);
        for _ in 0..100 {
            let r = rng.range(1, 40);
            let lat = LatticeInstance::new(r, rng.below(r));
            let bx = BoxBounds::new(rng.below(30), rng.below(30));
            let mut brute = 0u128;
            for x in -(bx.half_x as i128)..=bx.half_x as i128 {
                for y in -(bx.half_y as i128)..=bx.half_y as i128 {
                    if lat.contains(x, y) {
                        brute += 1;
                    }
                }
            }
            assert_eq!(count_lattice_points(&lat, &bx), brute);
        }
    }

    #[test]
    fn membership_random_combinations() {
        let mut rng = SplitMix64::new(0x3E);
        for _ in 0..200 {
            let r = rng.range(1, 1000);
            let lat = LatticeInstance::new(r, rng.below(r));
            let [b1, b2] = lat.basis();
            for _ in 0..500 {
                let s = rng.range(0, 2_000) as i128 - 1_000;
                let t = rng.range(0, 2_000) as i128 - 1_000;
                let x = s * b1.0 as i128 + t * b2.0 as i128;
                let y = s * b1.1 as i128 + t * b2.1 as i128;
                assert!(lat.contains(x, y));
            }
        }
    }

    #[test]
    fn classification_cases() {
        let l14 = Frac::new(1, 4);
        let l34 = Frac::new(3, 4);
        let l54 = Frac::new(5, 4);
        let l32 = Frac::new(3, 2);
        let mk = |l1: Frac, l2: Frac| MinimaResult { lambda1: l1, lambda2: l2, v1: (1, 0), v2: (0, 1) };
        assert_eq!(classify_minima(&mk(l14, l34)), CaseClass::S2);
        assert_eq!(classify_minima(&mk(l14, l54)), CaseClass::S1);
        assert_eq!(classify_minima(&mk(l32, l32)), CaseClass::S0);
    }

    #[test]
    fn class_lattice_examples() {
        let lat = LatticeInstance::from_class(5, 1, 1);
        assert_eq!((lat.modulus(), lat.c()), (5, 1));
        assert_eq!(lat.basis(), [(1, 1), (5, 0)]);
        // 9 mod 7.
        let lat = LatticeInstance::from_class(7, 1, 3);
        assert_eq!(lat.c(), 2);
        // Degenerate modulus: the full integer lattice.
        let lat = LatticeInstance::from_class(1, 4, 3);
        assert_eq!((lat.modulus(), lat.c()), (1, 0));
        assert!(lat.contains(17, -5));
    }

    #[test]
    fn count_j_examples() {
        // Vacuous congruence: every (h, m) pair counts.
        assert_eq!(count_j(1, 1, 1, 1, 1, 3, 4), 2 * 3 * 16);
        // Oracle-fixed double-loop value.
        assert_eq!(count_j(7, 1, 1, 1, 1, 3, 4), 14);
        // No m in range: the class m ≡ 6 (mod 7) misses [1, 4] entirely.
        assert_eq!(count_j(7, 1, 1, 2, 1, 1, 1), 0);
        assert_eq!(brute_count_j(7, 1, 1, 2, 1, 1, 1), 0);
        // Large modulus, small window.
        assert_eq!(count_j(101, 1, 1, 1, 1, 2, 1), brute_count_j(101, 1, 1, 1, 1, 2, 1));
    }

    fn brute_count_j(rt: u64, t: u64, u: u64, d1: u64, k: u64, h: u64, m: u64) -> u128 {
        let hr = (h / (t * u)) as i128;
        let mut n = 0u128;
        for hh in -hr..=hr {
            if hh == 0 {
                continue;
            }
            for mm in 1..=(4 * m) as i128 {
                let lhs = hh * hh
                    + (k as i128) * (k as i128) * (t as i128) * (t as i128) * (u as i128)
                        * (u as i128) * (d1 as i128).pow(4)
                    - (k as i128) * (d1 as i128) * (d1 as i128) * mm;
                if lhs.rem_euclid(rt as i128) == 0 {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn count_j_matches_brute_and_is_periodic() {
        let mut rng = SplitMix64::new(0x77);
        for _ in 0..100 {
            let rt = rng.range(1, 40);
            let mut d1 = rng.range(1, rt.max(2));
            while arith::gcd(rt, d1) != 1 {
                d1 += 1;
            }
            let mut k = rng.range(1, rt.max(2));
            while arith::gcd(rt, k) != 1 {
                k += 1;
            }
            let t = rng.range(1, 3);
            let u = rng.range(1, 3);
            let h = rng.range(t * u, 12 * t * u);
            let m = rng.range(1, 12);
            assert_eq!(
                count_j(rt, t, u, d1, k, h, m),
                brute_count_j(rt, t, u, d1, k, h, m),
                "rt={rt} t={t} u={u} d1={d1} k={k} h={h} m={m}"
            );
            // r̃-periodicity in d.
            assert_eq!(count_j(rt, t, u, d1, k, h, m), count_j(rt, t, u, d1 + rt, k, h, m));
        }
    }

    #[test]
    fn s2_per_h_solution_cap() {
        // When the class is S2 (and in fact always), each h admits at most
        // ceil(1 + 4M/r̃) values of m.
        let mut rng = SplitMix64::new(0x52);
        for _ in 0..80 {
            let rt = rng.range(2, 30);
            let mut d1 = rng.range(1, rt);
            while arith::gcd(rt, d1) != 1 {
                d1 = rng.range(1, rt);
            }
            let mut k = rng.range(1, rt);
            while arith::gcd(rt, k) != 1 {
                k = rng.range(1, rt);
            }
            let h_max = rng.range(1, 10);
            let m_max = rng.range(1, 10);
            if let Ok(analysis) = classify_case(rt, k, 1, 1, d1, h_max, m_max) {
                if analysis.class != CaseClass::S2 {
                    continue;
                }
                let cap = 1 + (4 * m_max).div_ceil(rt);
                for h in 1..=h_max {
                    let per_h = brute_count_j(rt, 1, 1, d1, k, h, m_max)
                        - brute_count_j(rt, 1, 1, d1, k, h.saturating_sub(1), m_max);
                    assert!(per_h / 2 <= cap as u128, "rt={rt} h={h} per_h={per_h} cap={cap}");
                }
            }
        }
    }

    #[test]
    fn box_congruence_examples() {
        // Oracle-fixed triple-loop values.
        assert_eq!(count_box_congruence(2, 1, 1, 1, 1), 4);
        assert_eq!(count_box_congruence(7, 1, 3, 2, 3), 20);
        // D = 0 reduces to h² ≡ 0 with m free.
        assert_eq!(count_box_congruence(4, 1, 4, 2, 0), 2 * 8);
    }

    #[test]
    fn box_congruence_matches_brute() {
        let mut rng = SplitMix64::new(0xB0C5);
        for _ in 0..80 {
            let r = rng.range(1, 30);
            let mut k = rng.range(1, r.max(2));
            while arith::gcd(r, k) != 1 {
                k += 1;
            }
            let h = rng.range(1, 10);
            let m = rng.range(1, 6);
            let d = rng.below(8);
            let mut brute = 0u128;
            for hh in 1..=h as i128 {
                for mm in 1..=4 * m as i128 {
                    for dd in -(d as i128)..=d as i128 {
                        let val = hh * hh - (k as i128) * dd * dd * mm
                            + (k as i128) * (k as i128) * dd.pow(4);
                        if val.rem_euclid(r as i128) == 0 {
                            brute += 1;
                        }
                    }
                }
            }
            assert_eq!(count_box_congruence(r, k, h, m, d), brute, "r={r} k={k} h={h} m={m} d={d}");
        }
    }
}

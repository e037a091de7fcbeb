//! CHSH observables, Bell-operator evaluation and maximization.
//!
//! Local observables live in the x–z plane of the Bloch sphere:
//! `A(a) = cos(2a) σz + sin(2a) σx`, where `a` is the analyzer (half-wave
//! plate) angle. All functions take radians.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};
use crate::exec;
use crate::optim::{nelder_mead, SimplexOptions};
use crate::state::{pauli, tensor, Axis, DensityMatrix, NoiseKind, NoiseModel, Op2};

/// Classical (local realistic) bound on `|β|`.
pub const CLASSICAL_BOUND: f64 = 2.0;
/// Tsirelson bound `2√2`.
pub const TSIRELSON_BOUND: f64 = 2.0 * std::f64::consts::SQRT_2;

/// Maps an angle into the canonical range `[−π/2, π/2)`; observables are
/// π-periodic in the analyzer angle.
pub fn normalize_angle(a: f64) -> f64 {
    let r = (a + FRAC_PI_2).rem_euclid(PI) - FRAC_PI_2;
    if r >= FRAC_PI_2 {
        r - PI
    } else {
        r
    }
}

pub fn observable(angle: f64) -> Op2 {
    let (s, c) = (2.0 * angle).sin_cos();
    pauli(Axis::Z).scale(c) + pauli(Axis::X).scale(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ChshSettings {
    /// `A0 = σz`, `A1 = A(θ)`, `B0 = A(φ)`, `B1 = A(φ − θ)`.
    Restricted { theta: f64, phi: f64 },
    General { a0: f64, a1: f64, b0: f64, b1: f64 },
}

impl ChshSettings {
    /// Analyzer angles `(a0, a1, b0, b1)`.
    pub fn angles(&self) -> [f64; 4] {
        match *self {
            ChshSettings::Restricted { theta, phi } => [0.0, theta, phi, phi - theta],
            ChshSettings::General { a0, a1, b0, b1 } => [a0, a1, b0, b1],
        }
    }

    pub fn normalized(&self) -> Self {
        match *self {
            ChshSettings::Restricted { theta, phi } => ChshSettings::Restricted {
                theta: normalize_angle(theta),
                phi: normalize_angle(phi),
            },
            ChshSettings::General { a0, a1, b0, b1 } => ChshSettings::General {
                a0: normalize_angle(a0),
                a1: normalize_angle(a1),
                b0: normalize_angle(b0),
                b1: normalize_angle(b1),
            },
        }
    }

    pub fn is_finite(&self) -> bool {
        self.angles().iter().all(|a| a.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellResult {
    /// Signed Bell value.
    pub value: f64,
    pub settings: ChshSettings,
    /// `|value| > 2`.
    pub violation: bool,
}

impl BellResult {
    pub fn new(value: f64, settings: ChshSettings) -> Self {
        Self {
            value,
            settings,
            violation: value.abs() > CLASSICAL_BOUND,
        }
    }
}

/// `tr(ρ · A(a) ⊗ A(b))`.
pub fn correlation(rho: &DensityMatrix, a: f64, b: f64) -> f64 {
    rho.expect(&tensor(&observable(a), &observable(b)))
}

/// `⟨A0B0⟩ + ⟨A0B1⟩ + ⟨A1B0⟩ − ⟨A1B1⟩` by direct traces.
pub fn bell_value(rho: &DensityMatrix, s: &ChshSettings) -> BellResult {
    let [a0, a1, b0, b1] = s.angles();
    let value = correlation(rho, a0, b0) + correlation(rho, a0, b1) + correlation(rho, a1, b0)
        - correlation(rho, a1, b1);
    BellResult::new(value, *s)
}

fn beta_closed_form(p: f64, theta: f64, phi: f64) -> f64 {
    let (s2t, c2t) = (2.0 * theta).sin_cos();
    let (s2f, c2f) = (2.0 * phi).sin_cos();
    c2f * ((1.0 + p) * s2t * s2t + 2.0 * c2t) + s2f * (1.0 + p) * s2t * (1.0 - c2t)
}

/// Closed-form Bell value of `colored_state(p)` under restricted settings
/// `(θ, φ)`.
pub fn beta_analytic(p: f64, theta: f64, phi: f64) -> Result<f64> {
    check_unit("p", p)?;
    Ok(beta_closed_form(p, theta, phi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximizeOptions {
    /// Coarse grid points per angle over `[−π/2, π/2]`.
    pub grid_points: usize,
    pub simplex: SimplexOptions,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        Self {
            grid_points: 181,
            simplex: SimplexOptions {
                initial_step: PI / 180.0,
                f_tol: 1e-10,
                x_tol: 1e-9,
                max_iter: 20_000,
            },
        }
    }
}

/// Values within this of the best are treated as ties.
const TIE_TOL: f64 = 1e-12;

/// `n` evenly spaced angles spanning `[−π/2, π/2]` inclusive, so the
/// default 181 points fall on whole degrees.
fn grid(n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![0.0];
    }
    (0..n).map(|i| -FRAC_PI_2 + PI * i as f64 / (n - 1) as f64).collect()
}

/// Evaluates `f` on the `n × n` coarse grid, row-major in the first angle.
fn coarse_grid<F>(n: usize, f: F) -> Vec<(f64, f64, f64)>
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
{
    let axis = grid(n);
    exec::map(&axis, |&x| axis.iter().map(|&y| (x, y, f(x, y))).collect::<Vec<_>>())
        .into_iter()
        .flatten()
        .collect()
}

fn argmax(samples: &[(f64, f64, f64)]) -> (f64, f64, f64) {
    samples
        .iter()
        .copied()
        .reduce(|best, s| if s.2 > best.2 { s } else { best })
        .expect("non-empty grid")
}

/// `(θ, φ, value)` samples of the coarse grid.
type Samples = Vec<(f64, f64, f64)>;

/// Grid search followed by simplex refinement of `f` over two angles.
/// Returns the refined point, the best value and the coarse samples.
fn maximize_2d<F>(f: F, opts: &MaximizeOptions) -> ((f64, f64), f64, Samples)
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
{
    let n = opts.grid_points.max(1);
    let samples = coarse_grid(n, &f);
    let (x0, y0, f0) = argmax(&samples);
    let m = nelder_mead(|v| -f(v[0], v[1]), &[x0, y0], &opts.simplex);
    if -m.f >= f0 {
        ((normalize_angle(m.x[0]), normalize_angle(m.x[1])), -m.f, samples)
    } else {
        ((x0, y0), f0, samples)
    }
}

/// Angles closer than this count as equal in magnitude when breaking ties.
const ANGLE_TIE_TOL: f64 = 1e-9;

/// Orders by `(|θ|, |φ|)` up to [`ANGLE_TIE_TOL`], then prefers `θ ≥ 0`, `φ ≥ 0`.
fn tie_order(a: (f64, f64), b: (f64, f64)) -> std::cmp::Ordering {
    let mag = |x: f64, y: f64| {
        if (x.abs() - y.abs()).abs() <= ANGLE_TIE_TOL {
            std::cmp::Ordering::Equal
        } else {
            x.abs().total_cmp(&y.abs())
        }
    };
    mag(a.0, b.0)
        .then(mag(a.1, b.1))
        .then((a.0 < 0.0).cmp(&(b.0 < 0.0)))
        .then((a.1 < 0.0).cmp(&(b.1 < 0.0)))
}

/// Maximizes [`beta_analytic`] over the restricted `(θ, φ)` family.
///
/// Coarse grid over `[−π/2, π/2]²`, then simplex refinement. Among points
/// tying with the maximum (the refined optimum, its mirror `(−θ, −φ)` and any
/// grid sample within 1e−12) the one with the smallest `(|θ|, |φ|)` is
/// reported, preferring non-negative angles.
pub fn maximize_restricted(p: f64, opts: &MaximizeOptions) -> Result<BellResult> {
    check_unit("p", p)?;
    let ((theta, phi), best) = restricted_search(|t, ph| beta_closed_form(p, t, ph), opts);
    Ok(BellResult::new(best, ChshSettings::Restricted { theta, phi }))
}

/// Restricted-family maximum for an arbitrary state, same search and
/// tie-breaking as [`maximize_restricted`]; the value is recomputed by traces.
pub fn maximize_restricted_state(rho: &DensityMatrix, opts: &MaximizeOptions) -> BellResult {
    let m = xz_block(rho);
    let e = |a: f64, b: f64| {
        let (sa, ca) = (2.0 * a).sin_cos();
        let (sb, cb) = (2.0 * b).sin_cos();
        ca * (m[0][0] * cb + m[0][1] * sb) + sa * (m[1][0] * cb + m[1][1] * sb)
    };
    let f = |t: f64, ph: f64| e(0.0, ph) + e(0.0, ph - t) + e(t, ph) - e(t, ph - t);
    let ((theta, phi), _) = restricted_search(f, opts);
    bell_value(rho, &ChshSettings::Restricted { theta, phi })
}

fn restricted_search<F>(f: F, opts: &MaximizeOptions) -> ((f64, f64), f64)
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
{
    let ((t, ph), best, samples) = maximize_2d(&f, opts);
    let mirror = (normalize_angle(-t), normalize_angle(-ph));
    let candidates = [(t, ph, best), (mirror.0, mirror.1, f(mirror.0, mirror.1))]
        .into_iter()
        .chain(samples.iter().copied())
        .filter(|c| c.2 >= best - TIE_TOL);
    let (theta, phi, _) = candidates
        .min_by(|a, b| tie_order((a.0, a.1), (b.0, b.1)))
        .expect("refined point is always a candidate");
    ((theta, phi), best)
}

/// The x–z block of the Pauli correlation matrix, `[[Tzz, Tzx], [Txz, Txx]]`.
fn xz_block(rho: &DensityMatrix) -> [[f64; 2]; 2] {
    let t = rho.correlation_matrix();
    [[t[2][2], t[2][0]], [t[0][2], t[0][0]]]
}

/// Best Bob angles for fixed Alice angles: each Bob observable aligns with
/// the vector it is contracted against.
fn best_response(m: &[[f64; 2]; 2], a0: f64, a1: f64) -> (f64, f64, f64) {
    let u0 = [(2.0 * a0).cos(), (2.0 * a0).sin()];
    let u1 = [(2.0 * a1).cos(), (2.0 * a1).sin()];
    let apply = |v: [f64; 2]| {
        [
            m[0][0] * v[0] + m[1][0] * v[1],
            m[0][1] * v[0] + m[1][1] * v[1],
        ]
    };
    let wp = apply([u0[0] + u1[0], u0[1] + u1[1]]);
    let wm = apply([u0[0] - u1[0], u0[1] - u1[1]]);
    let norm = |w: [f64; 2]| w[0].hypot(w[1]);
    let angle = |w: [f64; 2]| if norm(w) > 0.0 { 0.5 * w[1].atan2(w[0]) } else { 0.0 };
    (norm(wp) + norm(wm), angle(wp), angle(wm))
}

/// Maximizes [`bell_value`] over four independent x–z analyzer angles.
///
/// For fixed Alice angles the optimal Bob angles are closed-form, so the
/// search runs over `(a0, a1)` only; the reported value is recomputed from
/// traces at the final settings.
pub fn maximize_general(rho: &DensityMatrix, opts: &MaximizeOptions) -> BellResult {
    let m = xz_block(rho);
    let ((a0, a1), _, _) = maximize_2d(|a0, a1| best_response(&m, a0, a1).0, opts);
    let (_, b0, b1) = best_response(&m, a0, a1);
    let settings = ChshSettings::General { a0, a1, b0, b1 }.normalized();
    bell_value(rho, &settings)
}

/// Closed-form CHSH maximum over all projective qubit measurements:
/// `2√(t1² + t2²)` with `t1 ≥ t2` the two largest singular values of the
/// Pauli correlation matrix.
pub fn horodecki_bound(rho: &DensityMatrix) -> f64 {
    2.0 * (1.0 + horodecki_excess(rho)).max(0.0).sqrt()
}

/// `t1² + t2² − 1` from the eigenvalues of `TᵀT`, summed as
/// `(t1² − 1) + t2²` so a small `t2` is not lost against the 1.
fn horodecki_excess(rho: &DensityMatrix) -> f64 {
    let t = rho.correlation_matrix();
    let t = Matrix3::from_fn(|i, j| t[i][j]);
    let mut u: Vec<f64> = SymmetricEigen::new(t.transpose() * t)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    u.sort_by(|a, b| b.total_cmp(a));
    (u[0] - 1.0) + u[1]
}

/// State families for [`violation_threshold`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NoiseFamily {
    Colored,
    White,
    Mixed { w: f64 },
}

impl From<NoiseFamily> for NoiseKind {
    fn from(f: NoiseFamily) -> Self {
        match f {
            NoiseFamily::Colored => NoiseKind::Colored,
            NoiseFamily::White => NoiseKind::White,
            NoiseFamily::Mixed { w } => NoiseKind::Mixed { w },
        }
    }
}

pub const THRESHOLD_TOL: f64 = 1e-9;

/// Smallest Bell-state weight `p` at which the family violates CHSH,
/// located by bisection of `horodecki_bound(state(p)) − 2` to 1e−9.
///
/// Returns `Ok(None)` when even `p = 1` does not violate. When every probe
/// violates, the bracket collapses onto its lower end and `0` is returned.
pub fn violation_threshold(family: NoiseFamily) -> Result<Option<f64>> {
    let kind = NoiseKind::from(family);
    let violates = |p: f64| -> Result<bool> {
        Ok(horodecki_excess(&NoiseModel::new(p, kind)?.state()?) > 0.0)
    };
    if !violates(1.0)? {
        return Ok(None);
    }
    if violates(0.0)? {
        return Ok(Some(0.0));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > THRESHOLD_TOL {
        let mid = 0.5 * (lo + hi);
        if violates(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(if lo == 0.0 { 0.0 } else { 0.5 * (lo + hi) }))
}

/// `beta_analytic` sampled on a `θ × φ` grid; `values[i][j]` is at
/// `(theta[i], phi[j])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaSurface {
    pub p: f64,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl BetaSurface {
    /// Largest sample and its `(θ, φ)`.
    pub fn max(&self) -> (f64, f64, f64) {
        let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
        for (i, row) in self.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v > best.0 {
                    best = (v, self.theta[i], self.phi[j]);
                }
            }
        }
        best
    }
}

fn check_grid(name: &'static str, g: &[f64]) -> Result<()> {
    if g.is_empty() {
        return Err(Error::EmptyGrid(name));
    }
    if g.iter().any(|x| !x.is_finite()) || g.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::UnorderedGrid(name));
    }
    Ok(())
}

pub fn beta_surface(p: f64, theta_grid: &[f64], phi_grid: &[f64]) -> Result<BetaSurface> {
    check_unit("p", p)?;
    check_grid("theta", theta_grid)?;
    check_grid("phi", phi_grid)?;
    let values = exec::map(theta_grid, |&t| {
        phi_grid.iter().map(|&ph| beta_closed_form(p, t, ph)).collect()
    });
    Ok(BetaSurface {
        p,
        theta: theta_grid.to_vec(),
        phi: phi_grid.to_vec(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{colored_state, maximally_mixed, phi_plus, werner_state};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, SQRT_2};

    /// Brute-force restricted maximum on a `step`-radian grid over one period.
    fn brute_force_restricted(p: f64, n: usize) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for i in 0..n {
            let t = -FRAC_PI_2 + PI * i as f64 / n as f64;
            for j in 0..n {
                let f = -FRAC_PI_2 + PI * j as f64 / n as f64;
                // written out from the four correlations of the colored state,
                // E(a, b) = cos2a cos2b + p sin2a sin2b
                let e = |a: f64, b: f64| {
                    (2.0 * a).cos() * (2.0 * b).cos() + p * (2.0 * a).sin() * (2.0 * b).sin()
                };
                let v = e(0.0, f) + e(0.0, f - t) + e(t, f) - e(t, f - t);
                best = best.max(v);
            }
        }
        best
    }

    #[test]
    fn observable_examples() {
        let close = |a: &Op2, b: &Op2| (a - b).iter().all(|z| z.norm() < 1e-15);
        assert!(close(&observable(0.0), &pauli(Axis::Z)));
        assert!(close(&observable(FRAC_PI_4), &pauli(Axis::X)));
        let diag = (pauli(Axis::Z) + pauli(Axis::X)).scale(1.0 / SQRT_2);
        assert!(close(&observable(FRAC_PI_8), &diag));
        let o = observable(0.37);
        assert!(close(&(o * o), &Op2::identity()));
    }

    #[test]
    fn normalization_range() {
        for a in [-7.0, -FRAC_PI_2, -1.0, 0.0, 1.2, FRAC_PI_2, 3.0, 11.0] {
            let n = normalize_angle(a);
            assert!((-FRAC_PI_2..FRAC_PI_2).contains(&n), "{a} -> {n}");
            assert_abs_diff_eq!(((a - n) / PI).round() * PI, a - n, epsilon = 1e-12);
        }
        assert_eq!(normalize_angle(FRAC_PI_2), -FRAC_PI_2);
    }

    #[test]
    fn correlation_examples() {
        assert_abs_diff_eq!(correlation(&phi_plus(), 0.0, 0.0), 1.0, epsilon = 1e-15);
        for p in [0.0, 0.5, 1.0] {
            let rho = colored_state(p).unwrap();
            assert_abs_diff_eq!(correlation(&rho, 0.0, 0.0), 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(correlation(&rho, FRAC_PI_4, FRAC_PI_4), p, epsilon = 1e-15);
        }
    }

    #[test]
    fn bell_value_examples() {
        let tsirelson = ChshSettings::Restricted { theta: FRAC_PI_4, phi: FRAC_PI_8 };
        let r = bell_value(&phi_plus(), &tsirelson);
        assert_abs_diff_eq!(r.value, 2.0 * SQRT_2, epsilon = 1e-12);
        assert!(r.violation);
        for p in [0.0, 0.3, 1.0] {
            let r = bell_value(
                &colored_state(p).unwrap(),
                &ChshSettings::Restricted { theta: 0.0, phi: 0.0 },
            );
            assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-15);
            assert!(!r.violation);
        }
        let s = ChshSettings::General { a0: 0.1, a1: 0.9, b0: -0.4, b1: 1.3 };
        assert_abs_diff_eq!(bell_value(&maximally_mixed(), &s).value, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn analytic_examples() {
        assert_abs_diff_eq!(beta_analytic(1.0, FRAC_PI_4, FRAC_PI_8).unwrap(), 2.0 * SQRT_2, epsilon = 1e-14);
        for p in [0.0, 0.42, 1.0] {
            assert_abs_diff_eq!(beta_analytic(p, 0.0, 0.0).unwrap(), 2.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(beta_analytic(0.5, FRAC_PI_4, FRAC_PI_8).unwrap(), 1.5 * SQRT_2, epsilon = 1e-14);
        assert!(beta_analytic(1.1, 0.0, 0.0).is_err());
    }

    #[test]
    fn restricted_maximum_endpoints() {
        let opts = MaximizeOptions::default();
        let r = maximize_restricted(1.0, &opts).unwrap();
        assert_abs_diff_eq!(r.value, TSIRELSON_BOUND, epsilon = 1e-9);
        let ChshSettings::Restricted { theta, phi } = r.settings else { panic!() };
        assert_abs_diff_eq!(theta, FRAC_PI_4, epsilon = 1e-5);
        assert_abs_diff_eq!(phi, FRAC_PI_8, epsilon = 1e-5);

        let r = maximize_restricted(0.0, &opts).unwrap();
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-9);
        assert!(!r.violation);
        assert_eq!(r.settings, ChshSettings::Restricted { theta: 0.0, phi: 0.0 });
    }

    #[test]
    fn restricted_maximum_matches_brute_force() {
        let opts = MaximizeOptions::default();
        for p in [0.1, 0.5, 0.8] {
            let r = maximize_restricted(p, &opts).unwrap();
            let oracle = brute_force_restricted(p, 1440);
            // 0.125° grid: the grid optimum undershoots by O(step²)
            assert!(r.value >= oracle - 1e-12, "p={p}: {} < {oracle}", r.value);
            assert!(r.value - oracle < 1e-4, "p={p}: {} vs {oracle}", r.value);
            assert!(r.value <= horodecki_bound(&colored_state(p).unwrap()) + 1e-12);
        }
        // frozen from the brute-force oracle refined to 1e-12
        let r = maximize_restricted(0.5, &opts).unwrap();
        assert_abs_diff_eq!(r.value, 2.222_372_285_136_6, epsilon = 1e-9);
    }

    #[test]
    fn general_maximum_examples() {
        let opts = MaximizeOptions::default();
        let r = maximize_general(&werner_state(1.0).unwrap(), &opts);
        assert_abs_diff_eq!(r.value, TSIRELSON_BOUND, epsilon = 1e-9);
        let r = maximize_general(&werner_state(0.5).unwrap(), &opts);
        assert_abs_diff_eq!(r.value, SQRT_2, epsilon = 1e-9);
        assert!(!r.violation);
        let r = maximize_general(&colored_state(0.8).unwrap(), &opts);
        assert_abs_diff_eq!(r.value, 2.0 * 1.64f64.sqrt(), epsilon = 1e-9);
        let r = maximize_general(&maximally_mixed(), &opts);
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn restricted_search_on_states() {
        let opts = MaximizeOptions::default();
        for p in [0.0, 0.3, 1.0] {
            let a = maximize_restricted(p, &opts).unwrap();
            let b = maximize_restricted_state(&colored_state(p).unwrap(), &opts);
            assert_abs_diff_eq!(a.value, b.value, epsilon = 1e-10);
            let (ta, tb) = (a.settings.angles(), b.settings.angles());
            for (x, y) in ta.iter().zip(tb.iter()) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-6);
            }
        }
        // Werner correlations are isotropic in the x–z plane
        let w = maximize_restricted_state(&werner_state(0.8).unwrap(), &opts);
        assert_abs_diff_eq!(w.value, 2.0 * SQRT_2 * 0.8, epsilon = 1e-9);
    }

    #[test]
    fn horodecki_examples() {
        for p in [0.0, 0.25, 0.6, 1.0] {
            let rho = colored_state(p).unwrap();
            assert_abs_diff_eq!(horodecki_bound(&rho), 2.0 * (1.0 + p * p).sqrt(), epsilon = 1e-12);
            let w = werner_state(p).unwrap();
            assert_abs_diff_eq!(horodecki_bound(&w), 2.0 * SQRT_2 * p, epsilon = 1e-12);
        }
        assert_eq!(horodecki_bound(&maximally_mixed()), 0.0);
    }

    #[test]
    fn thresholds() {
        assert_eq!(violation_threshold(NoiseFamily::Colored).unwrap(), Some(0.0));
        assert_eq!(violation_threshold(NoiseFamily::Mixed { w: 1.0 }).unwrap(), Some(0.0));
        let w = violation_threshold(NoiseFamily::White).unwrap().unwrap();
        assert_abs_diff_eq!(w, 1.0 / SQRT_2, epsilon = 1e-9);
        // mixed: 2√(w² + w²p²) = 2 at p = √(1/w² − 1)
        let m = violation_threshold(NoiseFamily::Mixed { w: 0.9 }).unwrap().unwrap();
        assert_abs_diff_eq!(m, (1.0 / 0.81 - 1.0f64).sqrt(), epsilon = 1e-8);
        assert_eq!(violation_threshold(NoiseFamily::Mixed { w: 0.5 }).unwrap(), None);
    }

    #[test]
    fn surface_examples() {
        let theta: Vec<f64> = (0..=90).map(|d| (d as f64).to_radians()).collect();
        let phi: Vec<f64> = (0..=180).map(|d| (d as f64 * 0.5 - 45.0).to_radians()).collect();
        let s = beta_surface(1.0, &theta, &phi).unwrap();
        let (v, t, f) = s.max();
        assert_abs_diff_eq!(v, TSIRELSON_BOUND, epsilon = 1e-12);
        assert_abs_diff_eq!(t, FRAC_PI_4, epsilon = 1e-12);
        assert_abs_diff_eq!(f, FRAC_PI_8, epsilon = 1e-12);
        let s0 = beta_surface(0.0, &theta, &phi).unwrap();
        assert_abs_diff_eq!(s0.max().0, 2.0, epsilon = 1e-12);

        let rho = colored_state(0.37).unwrap();
        let s = beta_surface(0.37, &theta[..7], &phi[..5]).unwrap();
        for (i, &t) in s.theta.iter().enumerate() {
            for (j, &f) in s.phi.iter().enumerate() {
                let direct = bell_value(&rho, &ChshSettings::Restricted { theta: t, phi: f }).value;
                assert_abs_diff_eq!(s.values[i][j], direct, epsilon = 1e-12);
            }
        }
        assert!(matches!(beta_surface(0.5, &[], &phi), Err(Error::EmptyGrid("theta"))));
        assert!(beta_surface(0.5, &[0.2, 0.1], &phi).is_err());
    }
}

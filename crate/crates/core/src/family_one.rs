//! The first family: timelike cone around X₁, Lorentzian form
//! −ω₁² + ω₂² + ω₃²/ε². The attainable set is the proper region D, the
//! exponential map is a diffeomorphism of N onto the upper interior D₊,
//! and the distance is computed by inverting it.

use crate::error::{Error, Result};
use crate::group::{Covector, Epsilon, GroupElement};
use crate::math;
use alloc::vec::Vec;

/// Chart coordinates (θ, φ, t) on the normal extremals of the first family.
///
/// The covector chart is h₁ = −cosh θ, h₂ = sinh θ cos φ,
/// ε h₃ = sinh θ sin φ, parametrizing the level {H = −1/2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chart1 {
    pub theta: f64,
    pub phi: f64,
    pub t: f64,
}

impl Chart1 {
    /// Builds a chart point with φ reduced into [0, 2π).
    pub fn new(theta: f64, phi: f64, t: f64) -> Self {
        debug_assert!(t >= 0.0);
        let two_pi = 2.0 * core::f64::consts::PI;
        let mut phi = phi % two_pi;
        if phi < 0.0 {
            phi += two_pi;
        }
        Chart1 { theta, phi, t }
    }
}

/// Initial covector of the chart point, on the level {H = −1/2}.
pub fn chart1(eps: Epsilon, theta: f64, phi: f64) -> Covector {
    Covector {
        h1: -math::cosh(theta),
        h2: math::sinh(theta) * math::cos(phi),
        h3: math::sinh(theta) * math::sin(phi) / eps.get(),
    }
}

/// Normal Hamiltonian H = (−h₁² + h₂² + ε²h₃²)/2.
pub fn hamiltonian1(eps: Epsilon, h: Covector) -> f64 {
    let e = eps.get();
    (-h.h1 * h.h1 + h.h2 * h.h2 + e * e * h.h3 * h.h3) / 2.0
}

/// Closed-form vertical flow: hyperbolic rotation of (h₁, h₂) by τ = h₃t
/// with h₃ constant. Preserves the Hamiltonian.
pub fn vertical_flow1(_eps: Epsilon, h0: Covector, t: f64) -> Covector {
    let tau = h0.h3 * t;
    let (s, c) = (math::sinh(tau), math::cosh(tau));
    Covector {
        h1: h0.h1 * c - h0.h2 * s,
        h2: h0.h2 * c - h0.h1 * s,
        h3: h0.h3,
    }
}

/// Closed-form exponential map of the first family.
///
/// Written in the τ-quotient helpers so the h₃ → 0 chart locus is crossed
/// continuously; the h₃ = 0 fiber reduces to the straight line
/// (x, y, z) = (t cosh θ, t sinh θ cos φ, 0).
pub fn exp1(eps: Epsilon, p: Chart1) -> GroupElement {
    let e = eps.get();
    let a = -math::cosh(p.theta);
    let b = math::sinh(p.theta) * math::cos(p.phi);
    let h3 = math::sinh(p.theta) * math::sin(p.phi) / e;
    let tau = h3 * p.t;
    let sinhc = math::sinhc(tau);
    let coshm = math::coshm(tau);
    let x = p.t * (-a * sinhc + b * tau * coshm);
    let y = p.t * (b * sinhc - a * tau * coshm);
    let z = p.t * p.t / 2.0 * math::sinhm(tau) + e * e / 2.0 * (math::sinh(tau) + tau);
    GroupElement { x, y, z }
}

/// Differential of `exp1` with respect to (θ, φ, t).
///
/// Returns the three columns [∂/∂θ, ∂/∂φ, ∂/∂t], each as (dx, dy, dz).
/// Used as the Newton matrix by the inversion solver.
pub fn exp1_differential(eps: Epsilon, p: Chart1) -> [[f64; 3]; 3] {
    let e = eps.get();
    let (sh, ch) = (math::sinh(p.theta), math::cosh(p.theta));
    let (sp, cp) = (math::sin(p.phi), math::cos(p.phi));
    let a = -ch;
    let b = sh * cp;
    let h3 = sh * sp / e;
    let t = p.t;
    let tau = h3 * t;
    let (s, c) = (math::sinh(tau), math::cosh(tau));

    let sinhc = math::sinhc(tau);
    let coshm = math::coshm(tau);
    let q1 = math::hyp_q1(tau);
    let q2 = math::hyp_q2(tau);
    let q3 = math::hyp_q3(tau);

    // partials with respect to the ambient covector (A, B, h3) at fixed t;
    // z is the constraint-free form (A²−B²)(sinh τ − τ)/(2h₃²) + ε²τ
    let big_p = t * t / 2.0 * math::sinhm(tau);
    let a2b2 = a * a - b * b;
    let d_a = [-t * sinhc, -t * tau * coshm, 2.0 * a * big_p];
    let d_b = [t * tau * coshm, t * sinhc, -2.0 * b * big_p];
    let d_h3 = [
        t * t * (a * tau * q1 + b * q2),
        t * t * (-b * tau * q1 - a * q2),
        a2b2 * t * t * t * q3 + e * e * t,
    ];
    let d_t = [
        -(a * c - b * s),
        b * c - a * s,
        a2b2 * t / 2.0 * tau * coshm + e * e * h3,
    ];

    // chain rule through the chart
    let (da_dth, db_dth, dh3_dth) = (-sh, ch * cp, ch * sp / e);
    let (db_dph, dh3_dph) = (-sh * sp, sh * cp / e);

    let mut col_th = [0.0; 3];
    let mut col_ph = [0.0; 3];
    for i in 0..3 {
        col_th[i] = d_a[i] * da_dth + d_b[i] * db_dth + d_h3[i] * dh3_dth;
        col_ph[i] = d_b[i] * db_dph + d_h3[i] * dh3_dph;
    }
    [col_th, col_ph, d_t]
}

/// Jacobian determinant J = ∂(x, y, z)/∂(t, θ, φ) of the exponential map,
/// in closed form:
///
/// J = ε³ ((1 + ε²h₃²) τ sinh τ + 2 − 2 cosh τ) / (sin⁴φ sinh³θ).
///
/// The bracket is strictly positive for τ ≠ 0, so there are no conjugate
/// points on the chart. (This expression was certified against the
/// finite-difference oracle; see the discrepancy ledger for the published
/// variants it replaces.)
pub fn jacobian1(eps: Epsilon, p: Chart1) -> Result<f64> {
    let e = eps.get();
    let sh = math::sinh(p.theta);
    let sp = math::sin(p.phi);
    if sp * sh == 0.0 {
        return Err(Error::ChartSingular);
    }
    let h3 = sh * sp / e;
    let tau = h3 * p.t;
    // τ sinh τ − 2(cosh τ − 1) cancels to τ⁴/12 near zero
    let core_term = if math::abs(tau) < 1e-2 {
        let t2 = tau * tau;
        t2 * t2 * (1.0 / 12.0 + t2 / 180.0 + t2 * t2 / 6720.0)
    } else {
        tau * math::sinh(tau) + 2.0 - 2.0 * math::cosh(tau)
    };
    let bracket = core_term + e * e * h3 * h3 * tau * math::sinh(tau);
    let sp2 = sp * sp;
    Ok(e * e * e * bracket / (sp2 * sp2 * sh * sh * sh))
}

/// Height φ_ε(x, y) of the attainable-set boundary above (x, y), together
/// with the boundary parameter τ = arcosh((x² − y²)/(2ε²) + 1).
pub fn boundary_height(eps: Epsilon, x: f64, y: f64) -> Result<(f64, f64)> {
    if x < math::abs(y) {
        return Err(Error::OutsideCausalShadow);
    }
    let e = eps.get();
    let d = ((x - y) * (x + y)).max(0.0) / (2.0 * e * e);
    let (tau, sinh_tau) = math::acosh1p(d);
    Ok((e * e / 2.0 * (sinh_tau + tau), tau))
}

/// Tri-state region verdict with the binding signed defect.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionStatus {
    Interior,
    Boundary,
    Exterior,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionVerdict {
    pub status: RegionStatus,
    /// max(|y| − x, |z| − φ_ε): negative inside, positive outside.
    pub defect: f64,
    /// Boundary parameter τ, defined when the point projects into the
    /// causal shadow x ≥ |y|.
    pub tau: Option<f64>,
}

/// Membership of `q` in the attainable set A = D of the first family.
///
/// `tol` is relative: it is scaled by max(1, |x|, |y|, |z|) before the
/// comparisons, since the boundary combines transcendental functions whose
/// absolute accuracy degrades at large coordinates.
pub fn attain_region1(eps: Epsilon, q: GroupElement, tol: f64) -> RegionVerdict {
    debug_assert!(tol > 0.0);
    let scale = 1.0_f64.max(q.norm_inf());
    let tol_abs = tol * scale;
    let edge = q.x - math::abs(q.y);
    if edge < -tol_abs {
        return RegionVerdict { status: RegionStatus::Exterior, defect: -edge, tau: None };
    }
    let e = eps.get();
    let d = ((q.x - q.y) * (q.x + q.y)).max(0.0) / (2.0 * e * e);
    let (tau, sinh_tau) = math::acosh1p(d);
    let phi_eps = e * e / 2.0 * (sinh_tau + tau);
    let z_defect = math::abs(q.z) - phi_eps;
    let defect = (-edge).max(z_defect);
    let status = if z_defect > tol_abs {
        RegionStatus::Exterior
    } else if edge <= tol_abs || math::abs(z_defect) <= tol_abs {
        RegionStatus::Boundary
    } else {
        RegionStatus::Interior
    };
    RegionVerdict { status, defect, tau: Some(tau) }
}

/// Causal direction for translated attainable sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Future,
    Past,
}

/// Membership of `q` in the attainable set of the first family from `q1`
/// (causal future A_{q₁} = q₁·A, or causal past A⁻_{q₁}).
///
/// The past case is the future case composed with the system symmetry
/// (x, y, z) ↦ (−x, −y, −z).
pub fn attain_translated(
    eps: Epsilon,
    q1: GroupElement,
    q: GroupElement,
    direction: Direction,
    tol: f64,
) -> RegionVerdict {
    let rel = q1.inverse() * q;
    let rel = match direction {
        Direction::Future => rel,
        Direction::Past => rel.inverse(),
    };
    attain_region1(eps, rel, tol)
}

const REGION_TOL: f64 = 1e-9;

/// Lorentzian distance d(q) from the identity.
///
/// Returns `None` outside the attainable set, 0 on its boundary,
/// √(x² − y²) on the z = 0 slice, and otherwise the time parameter of the
/// unique extremal through q, found by inverting the exponential map with
/// relative ∞-norm residual at most `tol` (see [`invert_exp1`]). Points
/// with z < 0 are reflected to the upper half before inversion.
pub fn distance1(eps: Epsilon, q: GroupElement, tol: f64) -> Result<Option<f64>> {
    let verdict = attain_region1(eps, q, REGION_TOL);
    match verdict.status {
        RegionStatus::Exterior => Ok(None),
        RegionStatus::Boundary => Ok(Some(0.0)),
        RegionStatus::Interior => {
            if math::abs(q.z) <= tol * 1.0_f64.max(q.norm_inf()) {
                return Ok(Some(math::sqrt((q.x - q.y) * (q.x + q.y))));
            }
            let target = GroupElement { x: q.x, y: q.y, z: math::abs(q.z) };
            let p = invert_exp1(eps, target, tol)?;
            Ok(Some(p.t))
        }
    }
}

/// Inverts the exponential map on N = {θ > 0, φ ∈ (0, π), τ > 0}.
///
/// The target must lie in D₊ (interior, z > 0); the preimage is unique
/// there. `tol` is relative: the accepted ∞-norm residual is
/// tol·max(1, ‖q‖∞), since the map's outputs grow exponentially in τ and
/// absolute accuracy cannot outrun conditioning.
///
/// The solver exploits the invariants of the flow rather than searching
/// blindly: x² − y² and z depend on (h₃, τ) alone through
///
///   x² − y² = (1 + ε²h₃²)(2 cosh τ − 2)/h₃²,
///   z = (1 + ε²h₃²)(sinh τ − τ)/(2h₃²) + ε²τ,
///
/// and the first relation gives h₃²(τ) in closed form. Substituting it
/// into the second leaves one scalar equation whose left side sweeps
/// (0, φ_ε(x, y)) as τ runs over (0, τ_boundary) — solved by bisection,
/// which cannot fail on an interior target. The horizontal covector
/// (h₁⁰, h₂⁰) then comes from a 2×2 linear solve, and a short damped
/// Newton polish removes the last rounding.
pub fn invert_exp1(eps: Epsilon, q: GroupElement, tol: f64) -> Result<Chart1> {
    let tol_abs = tol * 1.0_f64.max(q.norm_inf());
    let e = eps.get();
    let r2 = (q.x - q.y) * (q.x + q.y);
    if !(r2 > 0.0) || !(q.z > 0.0) {
        return Err(Error::NoConvergence { best_residual: f64::INFINITY });
    }
    let (tau_bound, _) = math::acosh1p(r2 / (2.0 * e * e));

    // h3² as a function of tau from the x²−y² relation; cosh τ − 1 is
    // computed as τ²·coshm(τ) so small τ stays exact
    let h3_sq = |tau: f64| -> f64 {
        let cm1 = tau * tau * math::coshm(tau);
        let denom = r2 - 2.0 * e * e * cm1;
        if denom <= 0.0 {
            f64::INFINITY
        } else {
            2.0 * cm1 / denom
        }
    };
    let z_of = |tau: f64| -> f64 {
        let h2 = h3_sq(tau);
        if h2.is_infinite() {
            return f64::INFINITY;
        }
        let sm = tau * tau * math::sinhm(tau); // sinh τ − τ
        (1.0 + e * e * h2) * sm / (2.0 * h2) + e * e * tau
    };

    // z_of sweeps from 0 to the boundary height as tau → tau_bound, and an
    // interior target has 0 < z < φ_ε, so a root is bracketed
    let (mut lo, mut hi) = (0.0_f64, tau_bound);
    if !(z_of(hi) >= q.z) {
        // boundary rounding: nudge the bracket outward
        hi = tau_bound * (1.0 + 1e-12) + 1e-300;
        if !(z_of(hi) >= q.z) {
            return Err(Error::NoConvergence { best_residual: f64::INFINITY });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if z_of(mid) < q.z {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let tau = 0.5 * (lo + hi);
    let h3 = math::sqrt(h3_sq(tau));
    let t = tau / h3;

    // recover (A, B) = (h₁⁰, h₂⁰) from the linear structure of (x, y)
    let s = math::sinhc(tau);
    let m = tau * math::coshm(tau);
    let det = m * m - s * s; // = −2 coshm(τ) < 0
    let a = (q.x * s - q.y * m) / (t * det);
    let b = (m * q.x - s * q.y) / (t * det);
    // chart angles: A = −cosh θ, B = sinh θ cos φ, εh₃ = sinh θ sin φ
    let (theta, _) = math::acosh1p(((-a) - 1.0).max(0.0));
    let phi = math::atan2(e * h3, b);
    let recovered = Chart1 { theta, phi, t };

    // polish; the closed-form recovery is already near machine accuracy,
    // so a handful of Newton steps suffice when they help at all
    match newton(eps, recovered, q, tol_abs) {
        Ok(p) => Ok(p),
        Err(best) => {
            let res = residual(eps, recovered, q);
            if res <= tol_abs {
                Ok(recovered)
            } else {
                Err(Error::NoConvergence { best_residual: best.min(res) })
            }
        }
    }
}

fn residual(eps: Epsilon, p: Chart1, q: GroupElement) -> f64 {
    let r = exp1(eps, p);
    math::abs(r.x - q.x)
        .max(math::abs(r.y - q.y))
        .max(math::abs(r.z - q.z))
}

/// Damped Newton iteration on (θ, φ, t), clamped to stay in N.
/// Returns the best residual reached on failure.
fn newton(eps: Epsilon, seed: Chart1, q: GroupElement, tol: f64) -> core::result::Result<Chart1, f64> {
    const MAX_ITER: usize = 100;
    const MAX_HALVINGS: usize = 30;
    let pi = core::f64::consts::PI;
    let mut p = seed;
    let mut res = residual(eps, p, q);
    for _ in 0..MAX_ITER {
        if res <= tol {
            return Ok(p);
        }
        let m = exp1_differential(eps, p);
        let v = exp1(eps, p);
        let rhs = [q.x - v.x, q.y - v.y, q.z - v.z];
        let Some(step) = solve3(m, rhs) else { return Err(res) };
        // step components are (dθ, dφ, dt)
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..MAX_HALVINGS {
            let cand = Chart1 {
                theta: (p.theta + lambda * step[0]).max(1e-9),
                phi: (p.phi + lambda * step[1]).clamp(1e-9, pi - 1e-9),
                t: (p.t + lambda * step[2]).max(1e-12),
            };
            let cand_res = residual(eps, cand, q);
            if cand_res < res {
                p = cand;
                res = cand_res;
                improved = true;
                break;
            }
            lambda /= 2.0;
        }
        if !improved {
            return Err(res);
        }
    }
    if res <= tol {
        Ok(p)
    } else {
        Err(res)
    }
}

/// Solves the 3×3 system with columns `m` for `rhs` by Cramer's rule.
fn solve3(m: [[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let det = det3(m[0], m[1], m[2]);
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let x0 = det3(rhs, m[1], m[2]) / det;
    let x1 = det3(m[0], rhs, m[2]) / det;
    let x2 = det3(m[0], m[1], rhs) / det;
    let sol = [x0, x1, x2];
    sol.iter().all(|v| v.is_finite()).then_some(sol)
}

fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - b[0] * (a[1] * c[2] - a[2] * c[1])
        + c[0] * (a[1] * b[2] - a[2] * b[1])
}

/// Sampling request for a Lorentzian sphere S(r).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSpec {
    pub radius: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub n_theta: usize,
    pub phi_min: f64,
    pub phi_max: f64,
    pub n_phi: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSample {
    pub chart: Chart1,
    pub point: GroupElement,
}

/// Samples the sphere S(r) = {Exp(θ, φ, r)} over the requested grid,
/// row-major in (θ, φ).
pub fn sphere1(eps: Epsilon, spec: &SphereSpec) -> Vec<SphereSample> {
    debug_assert!(spec.radius > 0.0 && spec.n_theta >= 2 && spec.n_phi >= 2);
    let mut out = Vec::with_capacity(spec.n_theta * spec.n_phi);
    for i in 0..spec.n_theta {
        let ft = i as f64 / (spec.n_theta - 1) as f64;
        let theta = spec.theta_min + ft * (spec.theta_max - spec.theta_min);
        for j in 0..spec.n_phi {
            let fp = j as f64 / (spec.n_phi - 1) as f64;
            let phi = spec.phi_min + fp * (spec.phi_max - spec.phi_min);
            let chart = Chart1 { theta, phi, t: spec.radius };
            out.push(SphereSample { chart, point: exp1(eps, chart) });
        }
    }
    out
}

/// Sampling request for the lightlike boundary surface S₊: directions β of
/// the lightlike initial covector (h₁⁰ = −1, h₂⁰ = cos β, εh₃ = sin β)
/// crossed with the flow parameter τ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceGrid {
    pub beta_min: f64,
    pub beta_max: f64,
    pub n_beta: usize,
    pub tau_min: f64,
    pub tau_max: f64,
    pub n_tau: usize,
}

/// A sample of the boundary surface with its exterior normal (z ≥ 0 sheet).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSample {
    pub point: GroupElement,
    pub tau: f64,
    pub normal: [f64; 3],
}

/// Samples the abnormal (lightlike) trajectories filling the boundary
/// surface S₊, row-major in (β, τ). β must stay in (0, π) so that h₃ > 0.
pub fn lightlike_surface1(eps: Epsilon, grid: &SurfaceGrid) -> Vec<SurfaceSample> {
    let e = eps.get();
    let mut out = Vec::with_capacity(grid.n_beta * grid.n_tau);
    for i in 0..grid.n_beta {
        let fb = if grid.n_beta > 1 { i as f64 / (grid.n_beta - 1) as f64 } else { 0.0 };
        let beta = grid.beta_min + fb * (grid.beta_max - grid.beta_min);
        let (sb, cb) = (math::sin(beta), math::cos(beta));
        for j in 0..grid.n_tau {
            let ft = if grid.n_tau > 1 { j as f64 / (grid.n_tau - 1) as f64 } else { 0.0 };
            let tau = grid.tau_min + ft * (grid.tau_max - grid.tau_min);
            let (s, c) = (math::sinh(tau), math::cosh(tau));
            let point = GroupElement {
                x: e * (s + cb * (c - 1.0)) / sb,
                y: e * (cb * s + (c - 1.0)) / sb,
                z: e * e / 2.0 * (s + tau),
            };
            // exterior normal (−(x/2)(cosh τ+1)/sinh τ, (y/2)(cosh τ+1)/sinh τ, 1),
            // rewritten in (β, τ) so the τ → 0 limit is finite
            let normal = [
                -e * ((c + 1.0) + cb * s) / (2.0 * sb),
                e * (cb * (c + 1.0) + s) / (2.0 * sb),
                1.0,
            ];
            out.push(SurfaceSample { point, tau, normal });
        }
    }
    out
}

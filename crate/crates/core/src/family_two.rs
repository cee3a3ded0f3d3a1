//! The second family: timelike cone around X₃, Lorentzian form
//! ω₁² + ω₂² − ω₃²/ε². The commutant sits inside the cone union, so the
//! system is globally controllable, carries periodic trajectories (hence
//! no maximizers), and its extremals develop conjugate points.

use crate::error::{Error, Result};
use crate::group::{cone_contains, Control, Covector, Epsilon, FamilyTag, GroupElement};
use crate::math;
use crate::oracle::{self, PiecewiseControl, Segment};
use alloc::vec::Vec;

/// Chart coordinates (θ, φ, t) on the normal extremals of the second
/// family: h₁ = sinh θ cos φ, h₂ = sinh θ sin φ, εh₃ = −cosh θ, so the
/// flow parameter τ = h₃t is nonpositive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chart2 {
    pub theta: f64,
    pub phi: f64,
    pub t: f64,
}

impl Chart2 {
    pub fn new(theta: f64, phi: f64, t: f64) -> Self {
        debug_assert!(t >= 0.0);
        let two_pi = 2.0 * core::f64::consts::PI;
        let mut phi = phi % two_pi;
        if phi < 0.0 {
            phi += two_pi;
        }
        Chart2 { theta, phi, t }
    }
}

/// Initial covector of the chart point, on the level {H = −1/2} of the
/// second family (h₃ ≤ −1/ε branch).
pub fn chart2(eps: Epsilon, theta: f64, phi: f64) -> Covector {
    Covector {
        h1: math::sinh(theta) * math::cos(phi),
        h2: math::sinh(theta) * math::sin(phi),
        h3: -math::cosh(theta) / eps.get(),
    }
}

/// Normal Hamiltonian H = (h₁² + h₂² − ε²h₃²)/2 of the second family.
pub fn hamiltonian2(eps: Epsilon, h: Covector) -> f64 {
    let e = eps.get();
    (h.h1 * h.h1 + h.h2 * h.h2 - e * e * h.h3 * h.h3) / 2.0
}

/// Endpoint of the normal extremal with initial covector (h₁⁰, h₂⁰, h₃)
/// after time t, in closed form. τ-quotient helpers keep the t → 0 limit
/// continuous; h₃ never vanishes on this family.
fn exp2_from_covector(eps: Epsilon, h1: f64, h2: f64, h3: f64, t: f64) -> GroupElement {
    let e = eps.get();
    let tau = h3 * t;
    let sinc = math::sinc(tau);
    let cosm = math::cosm(tau);
    let x = t * (h1 * sinc - h2 * tau * cosm);
    let y = t * (h2 * sinc + h1 * tau * cosm);
    let z = (h1 * h1 + h2 * h2) * t * t / 2.0 * math::sinm(tau) - e * e * tau;
    GroupElement { x, y, z }
}

/// Closed-form exponential map of the second family. The vertical fiber
/// θ = 0 gives the z-axis trajectory (0, 0, εt).
pub fn exp2(eps: Epsilon, p: Chart2) -> GroupElement {
    let h = chart2(eps, p.theta, p.phi);
    exp2_from_covector(eps, h.h1, h.h2, h.h3, p.t)
}

/// Abnormal (lightlike) extremal of the second family: horizontal
/// covector direction (h₁⁰, h₂⁰) with the lightlike normalization
/// εh₃ = −√(h₁⁰² + h₂⁰²). The vertical coordinate is
/// z = −(ε²/2)(τ + sin τ) with τ = h₃t.
pub fn abnormal2(eps: Epsilon, h10: f64, h20: f64, t: f64) -> GroupElement {
    let e = eps.get();
    let h3 = -math::hypot(h10, h20) / e;
    if h3 == 0.0 {
        return GroupElement::IDENTITY;
    }
    let tau = h3 * t;
    let sinc = math::sinc(tau);
    let cosm = math::cosm(tau);
    GroupElement {
        x: t * (h10 * sinc - h20 * tau * cosm),
        y: t * (h20 * sinc + h10 * tau * cosm),
        z: -e * e / 2.0 * (tau + math::sin(tau)),
    }
}

/// Sampling request for the unit-time endpoint surface of normal
/// extremals: covector directions α (h₁, h₂) = ρ(cos α, sin α) with
/// ρ = √(ε²h₃² − 1) from the level constraint, crossed with h₃ values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmpSurfaceGrid {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub n_alpha: usize,
    /// h₃ samples must satisfy h₃ ≤ −1/ε so the level constraint has a
    /// real solution.
    pub h3_min: f64,
    pub h3_max: f64,
    pub n_h3: usize,
}

/// Samples the boundary-candidate surface singled out by the maximum
/// principle: endpoints at t = 1 of normal extremals over the level
/// {h₁² + h₂² − ε²h₃² = −1, h₃ < 0}. Row-major in (α, h₃).
pub fn pmp_surface2(eps: Epsilon, grid: &PmpSurfaceGrid) -> Vec<GroupElement> {
    let e = eps.get();
    assert!(grid.h3_max < 0.0, "surface covectors need h3 < 0");
    let mut out = Vec::with_capacity(grid.n_alpha * grid.n_h3);
    for i in 0..grid.n_alpha {
        let fa = if grid.n_alpha > 1 { i as f64 / (grid.n_alpha - 1) as f64 } else { 0.0 };
        let alpha = grid.alpha_min + fa * (grid.alpha_max - grid.alpha_min);
        for j in 0..grid.n_h3 {
            let fh = if grid.n_h3 > 1 { j as f64 / (grid.n_h3 - 1) as f64 } else { 0.0 };
            let h3 = grid.h3_min + fh * (grid.h3_max - grid.h3_min);
            let rho2 = e * e * h3 * h3 - 1.0;
            debug_assert!(rho2 >= -1e-12, "h3 inside (-1/eps, 0) violates the level constraint");
            let rho = math::sqrt(rho2.max(0.0));
            let (h1, h2) = (rho * math::cos(alpha), rho * math::sin(alpha));
            out.push(exp2_from_covector(eps, h1, h2, h3, 1.0));
        }
    }
    out
}

/// Evaluates the published Jacobian expressions of the second family:
/// f(θ, τ) = 2(1 − cos τ)/cosh²θ + τ sin τ tanh²θ and
/// J = −ε⁴ (sinh θ / cosh³θ) f(θ, τ). Returned as (J, f).
pub fn jacobian2(eps: Epsilon, theta: f64, tau: f64) -> (f64, f64) {
    let e = eps.get();
    let ch = math::cosh(theta);
    let sh = math::sinh(theta);
    let th = sh / ch;
    let f = 2.0 * (1.0 - math::cos(tau)) / (ch * ch) + tau * math::sin(tau) * th * th;
    let j = -e * e * e * e * (sh / (ch * ch * ch)) * f;
    (j, f)
}

/// First conjugate time t = 2π/|h₃| = 2πε/cosh θ along Exp(θ, φ, ·).
pub fn first_conjugate_time2(eps: Epsilon, theta: f64) -> f64 {
    2.0 * core::f64::consts::PI * eps.get() / math::cosh(theta)
}

/// Zero sets found along one θ-row of a conjugate scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateReport {
    pub theta: f64,
    /// |τ| values where the Cartesian finite-difference Jacobian of the
    /// endpoint map vanishes (sign changes and quadratic touches).
    pub tau_zeros: Vec<f64>,
    /// |τ| values where the published bracket f(θ, τ) vanishes.
    pub f_zeros: Vec<f64>,
    /// Published conjugate loci (n, z = 2πnε²) inside the scanned range.
    pub predicted: Vec<(u32, f64)>,
}

/// Scans for conjugate points: for each θ in the range, locates zeros of
/// the finite-difference endpoint Jacobian (computed in Cartesian covector
/// coordinates, since the (θ, φ) chart is singular exactly on the locus
/// θ = 0 where the zeros live) and, separately, zeros of the published
/// bracket f. τ is the nonnegative flow parameter |h₃|t.
pub fn conjugate_scan(
    eps: Epsilon,
    theta_range: (f64, f64),
    tau_range: (f64, f64),
    n_theta: usize,
    n_tau: usize,
) -> Vec<ConjugateReport> {
    assert!(n_theta >= 1 && n_tau >= 8);
    assert!(tau_range.0 > 0.0 && tau_range.1 > tau_range.0);
    let mut reports = Vec::with_capacity(n_theta);
    let two_pi = 2.0 * core::f64::consts::PI;
    let mut predicted = Vec::new();
    let mut n = 1u32;
    while two_pi * n as f64 <= tau_range.1 {
        predicted.push((n, two_pi * n as f64 * eps.get() * eps.get()));
        n += 1;
    }
    for i in 0..n_theta {
        let ft = if n_theta > 1 { i as f64 / (n_theta - 1) as f64 } else { 0.0 };
        let theta = theta_range.0 + ft * (theta_range.1 - theta_range.0);
        let h0 = chart2(eps, theta, 0.0);
        let abs_h3 = math::cosh(theta) / eps.get();
        let fd = |tau: f64| -> f64 {
            // ill-conditioning is not expected on this smooth scan; fall
            // back to a huge sentinel so a bad point cannot fake a zero
            oracle::fd_jacobian(FamilyTag::FamilyTwo, eps, h0, tau / abs_h3, 1e-5)
                .unwrap_or(f64::MAX)
        };
        let fval = |tau: f64| jacobian2(eps, theta, tau).1;
        let tau_zeros = locate_zeros(&fd, tau_range, n_tau);
        let f_zeros = locate_zeros(&fval, tau_range, n_tau);
        reports.push(ConjugateReport { theta, tau_zeros, f_zeros, predicted: predicted.clone() });
    }
    reports
}

/// Finds zeros of `g` on `range` from an `n`-point grid: sign changes are
/// bisected; local minima of |g| that dip below 1e−4 of the row scale are
/// refined by ternary search (quadratic touches have no sign change).
fn locate_zeros(g: &dyn Fn(f64) -> f64, range: (f64, f64), n: usize) -> Vec<f64> {
    let grid: Vec<f64> = (0..n)
        .map(|i| range.0 + i as f64 / (n - 1) as f64 * (range.1 - range.0))
        .collect();
    let vals: Vec<f64> = grid.iter().map(|&t| g(t)).collect();
    let scale = vals.iter().fold(0.0_f64, |m, v| m.max(math::abs(*v)));
    if scale == 0.0 {
        return Vec::new();
    }
    let mut zeros = Vec::new();
    let push = |z: f64, zeros: &mut Vec<f64>| {
        let spacing = (range.1 - range.0) / (n - 1) as f64;
        if zeros.iter().all(|&p| math::abs(p - z) > spacing / 2.0) {
            zeros.push(z);
        }
    };
    for i in 0..n - 1 {
        if vals[i] == 0.0 {
            push(grid[i], &mut zeros);
            continue;
        }
        if vals[i] * vals[i + 1] < 0.0 {
            // bisection
            let (mut a, mut b) = (grid[i], grid[i + 1]);
            let mut fa = vals[i];
            for _ in 0..60 {
                let m = (a + b) / 2.0;
                let fm = g(m);
                if fa * fm <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            push((a + b) / 2.0, &mut zeros);
        }
    }
    if vals[n - 1] == 0.0 {
        push(grid[n - 1], &mut zeros);
    }
    // quadratic touches: interior local minima of |g| well below scale
    for i in 1..n - 1 {
        let (a, b, c) = (math::abs(vals[i - 1]), math::abs(vals[i]), math::abs(vals[i + 1]));
        if b <= a && b <= c && b < 1e-3 * scale {
            let (mut lo, mut hi) = (grid[i - 1], grid[i + 1]);
            for _ in 0..80 {
                let m1 = lo + (hi - lo) / 3.0;
                let m2 = hi - (hi - lo) / 3.0;
                if math::abs(g(m1)) < math::abs(g(m2)) {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            let z = (lo + hi) / 2.0;
            if math::abs(g(z)) <= 1e-4 * scale {
                push(z, &mut zeros);
            }
        }
    }
    zeros.sort_by(|a, b| a.total_cmp(b));
    zeros
}

/// A closed lightlike/timelike loop through the origin: two lightlike
/// legs followed by one timelike chord back to the start.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicPlan {
    pub eps: Epsilon,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub third_control: Control,
    /// States at t₁, t₂ and t₃ (the last is the origin).
    pub waypoints: [GroupElement; 3],
    /// Lorentzian length of the loop; all of it comes from the third leg.
    pub lorentz_length: f64,
}

impl PeriodicPlan {
    /// The loop as an integrable control plan.
    pub fn plan(&self) -> PiecewiseControl {
        PiecewiseControl {
            segments: alloc::vec![
                Segment { control: Control::new(1.0, 0.0, 1.0), duration: self.t1 },
                Segment { control: Control::new(0.0, -1.0, 1.0), duration: self.t2 - self.t1 },
                Segment { control: self.third_control, duration: self.t3 - self.t2 },
            ],
        }
    }
}

/// Builds the periodic trajectory: lightlike control (1, 0, 1) on [0, t₁],
/// lightlike (0, −1, 1) on (t₁, t₂], then the constant chord control that
/// returns to the origin in unit time. The pair is admissible only when
/// the state at t₂ lies strictly inside {z ≤ −ε√(x² + y²)}, which is
/// checked (t₁ > 4ε is what the slope argument actually needs).
pub fn periodic_plan(eps: Epsilon, t1: f64, t2: f64) -> Result<PeriodicPlan> {
    assert!(t1 > 0.0 && t2 > t1);
    let e = eps.get();
    // chords are exact: constant control u for time s moves by the group
    // element (u1 s, u2 s, eps u3 s)
    let q1 = GroupElement::new(t1, 0.0, e * t1);
    let q2 = q1 * GroupElement::new(0.0, -(t2 - t1), e * (t2 - t1));
    let defect = q2.z + e * math::hypot(q2.x, q2.y);
    if defect >= 0.0 {
        return Err(Error::NotAdmissible { defect });
    }
    let u3 = Control::new(-q2.x, -q2.y, -q2.z / e);
    debug_assert!(cone_contains(u3, FamilyTag::FamilyTwo));
    let q3 = q2 * GroupElement::new(u3.u1, u3.u2, e * u3.u3);
    let lorentz_length = math::sqrt(u3.u3 * u3.u3 - u3.u1 * u3.u1 - u3.u2 * u3.u2);
    Ok(PeriodicPlan {
        eps,
        t1,
        t2,
        t3: t2 + 1.0,
        third_control: u3,
        waypoints: [q1, q2, q3],
        lorentz_length,
    })
}

/// Constructive global reachability: a piecewise-constant plan from the
/// origin to `q1`.
///
/// If `q1` already lies in the chord cone {z ≥ ε√(x² + y²)} a single
/// constant control does it. Otherwise the plan first runs the two
/// lightlike excursion legs of [`periodic_plan`] — which drive z down
/// faster than ε·(horizontal distance) grows — doubling the second leg's
/// duration until the remaining displacement falls in the chord cone.
pub fn reach_plan(eps: Epsilon, q1: GroupElement) -> Result<PiecewiseControl> {
    let e = eps.get();
    let chord = |r: GroupElement| Segment {
        control: Control::new(r.x, r.y, r.z / e),
        duration: 1.0,
    };
    if q1 == GroupElement::IDENTITY {
        return Ok(PiecewiseControl { segments: Vec::new() });
    }
    if q1.z >= e * math::hypot(q1.x, q1.y) {
        return Ok(PiecewiseControl { segments: alloc::vec![chord(q1)] });
    }
    // first leg long enough that the z-slope margin (t1 + x1)/2 − 2ε of the
    // second leg stays at least ε
    let t1 = 6.0 * e + (-q1.x).max(0.0);
    let p1 = GroupElement::new(t1, 0.0, e * t1);
    let mut w = e;
    for attempt in 0..64u32 {
        let p = p1 * GroupElement::new(0.0, -w, e * w);
        let r = p.inverse() * q1;
        if r.z >= e * math::hypot(r.x, r.y) {
            return Ok(PiecewiseControl {
                segments: alloc::vec![
                    Segment { control: Control::new(1.0, 0.0, 1.0), duration: t1 },
                    Segment { control: Control::new(0.0, -1.0, 1.0), duration: w },
                    chord(r),
                ],
            });
        }
        w *= 2.0;
        if attempt == 63 {
            return Err(Error::PlanFailure { attempts: attempt + 1 });
        }
    }
    unreachable!()
}

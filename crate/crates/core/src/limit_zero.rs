//! The ε → 0 degeneration of the first family to the sub-Lorentzian
//! problem: the limit exponential map, the coordinate transfer between the
//! two charts, and measured convergence of attainable sets, spheres and
//! cones.

use crate::family_one::{self, Chart1, RegionStatus, RegionVerdict};
use crate::group::{Epsilon, GroupElement, TangentVector};
use crate::math;
use alloc::vec::Vec;

/// Chart coordinates (ψ, c, t) of the limit problem:
/// h₁ = −cosh ψ, h₂ = sinh ψ, h₃ = c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chart0 {
    pub psi: f64,
    pub c: f64,
    pub t: f64,
}

impl Chart0 {
    pub fn new(psi: f64, c: f64, t: f64) -> Self {
        debug_assert!(t >= 0.0);
        Chart0 { psi, c, t }
    }
}

/// Limit exponential map. Written with the same τ-quotient helpers as the
/// ε > 0 map, so c → 0 degenerates continuously to the straight line
/// (t cosh ψ, t sinh ψ, 0).
pub fn exp0(p: Chart0) -> GroupElement {
    let tau = p.c * p.t;
    // (sinh(ψ+τ) − sinh ψ)/c = t cosh(ψ+τ/2) sinhc(τ/2), and likewise for
    // cosh differences; (sinh τ − τ)/(2c²) = (t²/2) sinhm(τ)·/τ⁻¹-free form
    let half = tau / 2.0;
    let s = math::sinhc(half);
    GroupElement {
        x: p.t * math::cosh(p.psi + half) * s,
        y: p.t * math::sinh(p.psi + half) * s,
        z: p.t * p.t / 2.0 * math::sinhm(tau),
    }
}

/// Transfers limit chart coordinates (ψ, c) to the ε-chart (θ, φ):
/// sinh θ cos φ = sinh ψ, sinh θ sin φ = εc, θ ≥ 0.
pub fn transfer(eps: Epsilon, psi: f64, c: f64) -> (f64, f64) {
    let e = eps.get();
    let sp = math::sinh(psi);
    let theta = math::asinh(math::hypot(sp, e * c));
    let mut phi = math::atan2(e * c, sp);
    if phi < 0.0 {
        phi += 2.0 * core::f64::consts::PI;
    }
    (theta, phi)
}

/// Membership of `q` in the limit attainable set
/// A₀ = {x ≥ 0, 4|z| ≤ x² − y²}. `tol` is relative, as in the ε > 0 test.
pub fn attain0(q: GroupElement, tol: f64) -> RegionVerdict {
    debug_assert!(tol > 0.0);
    let scale = 1.0_f64.max(q.norm_inf());
    let tol_abs = tol * scale;
    let defect = (-q.x).max(4.0 * math::abs(q.z) - (q.x - q.y) * (q.x + q.y));
    let status = if defect > tol_abs {
        RegionStatus::Exterior
    } else if defect >= -tol_abs {
        RegionStatus::Boundary
    } else {
        RegionStatus::Interior
    };
    RegionVerdict { status, defect, tau: None }
}

/// Measured convergence sequence along a decreasing list of ε values.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub eps_values: Vec<f64>,
    pub errors: Vec<f64>,
    /// Whether the errors are nonincreasing along the list.
    pub monotone: bool,
}

/// Per-ε membership data for the indicator convergence
/// χ_{A_ε}(q) → χ_{A₀}(q).
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorReport {
    pub eps_values: Vec<f64>,
    /// q ∈ A_ε (boundary counts as membership).
    pub members: Vec<bool>,
    /// 0/1 mismatch against the limit indicator χ_{A₀}(q).
    pub errors: Vec<f64>,
    /// Whether membership is nonincreasing along decreasing ε, as the
    /// nesting A_{ε₁} ⊂ A_{ε₂} (ε₁ < ε₂) demands.
    pub monotone: bool,
}

const REGION_TOL: f64 = 1e-9;

/// Evaluates χ_{A_ε}(q) along `eps_list` (strictly decreasing) and
/// compares against χ_{A₀}(q).
pub fn indicator_convergence(q: GroupElement, eps_list: &[f64]) -> IndicatorReport {
    assert!(eps_list.windows(2).all(|w| w[0] > w[1]), "eps list must decrease");
    let limit_member = attain0(q, REGION_TOL).status != RegionStatus::Exterior;
    let mut members = Vec::with_capacity(eps_list.len());
    let mut errors = Vec::with_capacity(eps_list.len());
    for &e in eps_list {
        let eps = Epsilon::new(e).expect("eps values must be positive");
        let member =
            family_one::attain_region1(eps, q, REGION_TOL).status != RegionStatus::Exterior;
        members.push(member);
        errors.push(if member == limit_member { 0.0 } else { 1.0 });
    }
    let monotone = members.windows(2).all(|w| w[0] || !w[1]);
    IndicatorReport { eps_values: eps_list.to_vec(), members, errors, monotone }
}

/// Measures ‖Exp_ε − Exp₀‖∞ at the transferred chart point for each ε in
/// the (strictly decreasing) list.
pub fn exp_convergence(psi: f64, c: f64, t: f64, eps_list: &[f64]) -> ConvergenceReport {
    assert!(eps_list.windows(2).all(|w| w[0] > w[1]), "eps list must decrease");
    let limit = exp0(Chart0::new(psi, c, t));
    let mut errors = Vec::with_capacity(eps_list.len());
    for &e in eps_list {
        let eps = Epsilon::new(e).expect("eps values must be positive");
        let (theta, phi) = transfer(eps, psi, c);
        let q = family_one::exp1(eps, Chart1::new(theta, phi, t));
        errors.push(
            math::abs(q.x - limit.x)
                .max(math::abs(q.y - limit.y))
                .max(math::abs(q.z - limit.z)),
        );
    }
    let monotone = errors.windows(2).all(|w| w[1] <= w[0]);
    ConvergenceReport { eps_values: eps_list.to_vec(), errors, monotone }
}

/// A (ψ, c) sampling grid shared by the limit sphere and its ε-analogue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitGrid {
    pub psi_min: f64,
    pub psi_max: f64,
    pub n_psi: usize,
    pub c_min: f64,
    pub c_max: f64,
    pub n_c: usize,
}

impl LimitGrid {
    fn samples(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.n_psi * self.n_c);
        for i in 0..self.n_psi {
            let fp = if self.n_psi > 1 { i as f64 / (self.n_psi - 1) as f64 } else { 0.0 };
            let psi = self.psi_min + fp * (self.psi_max - self.psi_min);
            for j in 0..self.n_c {
                let fc = if self.n_c > 1 { j as f64 / (self.n_c - 1) as f64 } else { 0.0 };
                let c = self.c_min + fc * (self.c_max - self.c_min);
                out.push((psi, c));
            }
        }
        out
    }
}

/// Grid proxy for the lower-semicontinuity defect of spheres:
/// max over sampled q ∈ S₀(r) of the distance to the sampled S_ε(r),
/// with S_ε sampled at the transferred chart points of the same grid.
pub fn sphere_semicontinuity(r: f64, eps: Epsilon, grid: &LimitGrid) -> f64 {
    assert!(r > 0.0);
    let samples = grid.samples();
    let s0: Vec<GroupElement> =
        samples.iter().map(|&(psi, c)| exp0(Chart0::new(psi, c, r))).collect();
    let se: Vec<GroupElement> = samples
        .iter()
        .map(|&(psi, c)| {
            let (theta, phi) = transfer(eps, psi, c);
            family_one::exp1(eps, Chart1::new(theta, phi, r))
        })
        .collect();
    let dist = |a: GroupElement, b: GroupElement| {
        math::sqrt(
            (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z),
        )
    };
    let mut worst = 0.0_f64;
    for &q in &s0 {
        let nearest = se.iter().map(|&p| dist(q, p)).fold(f64::INFINITY, f64::min);
        worst = worst.max(nearest);
    }
    worst
}

/// Indicator of the causal cone C_ε at the origin, including the
/// degenerate ε = 0 cone which additionally requires dz = 0 exactly.
pub fn cone_indicator(v: TangentVector, eps: f64) -> bool {
    assert!(eps >= 0.0);
    if v.dx < 0.0 {
        return false;
    }
    if eps == 0.0 {
        v.dz == 0.0 && v.dx * v.dx >= v.dy * v.dy
    } else {
        v.dx * v.dx >= v.dy * v.dy + v.dz * v.dz / (eps * eps)
    }
}

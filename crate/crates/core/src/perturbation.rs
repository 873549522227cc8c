//! Tangent-cone perturbation of Turán graphons along the critical directions
//! of the edge-triangle model.
//!
//! Around the Turán graphon with `c` classes the cone graphons are
//! `a·T + b·D`, where `T` is the Turán graphon itself and `D = 1 − T` the
//! indicator of its diagonal blocks. Along `β = r·o_k` both the Turán graphon
//! with `k + 1` classes ([`Cone::Lower`], the lower-edge-density end of the
//! hull segment) and the one with `k + 2` classes ([`Cone::Upper`]) maximize
//! the energy, and the entropy correction decides between them.
//!
//! Free energies are evaluated as `r·T^{o_k}(f) + correction` with the
//! correction written in terms of `1 − a` and `b`, so that corrections far
//! below the rounding level of the base value are still resolved.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::model::{critical_direction, entropy_from_pair};

/// Gradient sup-norm (log-odds coordinates) accepted as converged.
pub const GRADIENT_TOL: f64 = 1e-10;
/// Newton iteration cap.
pub const MAX_ITERATIONS: usize = 200;
/// Perturbative regime: both `1 − a*` and `b*` below this.
pub const REGIME_LEVEL: f64 = 0.1;
/// Relative size of a margin, compared with the corrections themselves, below
/// which a ground-state comparison is reported as indeterminate.
pub const TIE_RELATIVE_TOL: f64 = 1e-13;

/// Which end of the hull segment `L_k` the cone sits at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Cone {
    /// Turán graphon with `k + 1` classes.
    Lower,
    /// Turán graphon with `k + 2` classes.
    Upper,
}

impl Cone {
    pub fn classes(self, k: u32) -> u32 {
        match self {
            Cone::Lower => k + 1,
            Cone::Upper => k + 2,
        }
    }

    pub fn both() -> [Cone; 2] {
        [Cone::Lower, Cone::Upper]
    }
}

/// Support decomposition of `Δ_{K₂}` and `Δ_{K₃}` at a Turán graphon, dotted
/// with the critical direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeCoefficients {
    /// Index of the critical direction `o_k`.
    pub k: u32,
    /// Number of Turán classes the cone is built around.
    pub classes: u32,
    pub direction: [f64; 2],
    pub a_edge: f64,
    pub b_edge: f64,
    pub a_triangle: f64,
    pub b_triangle: f64,
    pub dot_a: f64,
    pub dot_b: f64,
    pub measure_a: f64,
    pub measure_b: f64,
}

impl ConeCoefficients {
    pub fn for_cone(k: u32, cone: Cone) -> Result<Self> {
        cone_coefficients(cone.classes(k), k)
    }

    /// Number of off-diagonal "parts minus one", i.e. `classes − 1`.
    fn parts(&self) -> f64 {
        (self.classes - 1) as f64
    }

    /// `r·T^{o_k}` at the Turán graphon itself.
    pub fn base_value(&self, r: f64) -> f64 {
        let (e, t) = cone_densities(self.classes - 1, 1.0, 0.0);
        r * (self.direction[0] * e + self.direction[1] * t)
    }
}

/// Coefficients for perturbing the Turán graphon with `cone_classes` classes
/// along `o_{direction_k}`.
///
/// Only the two Turán graphons on the hull segment `L_k` maximize `T^{o_k}`,
/// so `cone_classes` must be `direction_k + 1` or `direction_k + 2`.
pub fn cone_coefficients(cone_classes: u32, direction_k: u32) -> Result<ConeCoefficients> {
    let direction = critical_direction(direction_k)?;
    if cone_classes != direction_k + 1 && cone_classes != direction_k + 2 {
        return invalid(format!(
            "the Turán graphon with {cone_classes} classes does not maximize T along o_{direction_k}"
        ));
    }
    let c = cone_classes as f64;
    let a_triangle = 3.0 * (c - 2.0) / c;
    let b_triangle = 3.0 * (c - 1.0) / c;
    Ok(ConeCoefficients {
        k: direction_k,
        classes: cone_classes,
        direction,
        a_edge: 1.0,
        b_edge: 1.0,
        a_triangle,
        b_triangle,
        dot_a: direction[0] + direction[1] * a_triangle,
        dot_b: direction[0] + direction[1] * b_triangle,
        measure_a: (c - 1.0) / c,
        measure_b: 1.0 / c,
    })
}

/// Logistic function, evaluated without overflow.
fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// First-order optimal weights `a = σ(2r·dot_a)`, `b = σ(2r·dot_b)`.
pub fn optimal_ab(r: f64, c: &ConeCoefficients) -> (f64, f64) {
    (logistic(2.0 * r * c.dot_a), logistic(2.0 * r * c.dot_b))
}

/// Edge density `(ak + b)/(k + 1)` of `a·T_k + b·D_k`.
pub fn cone_edge_density(k: u32, a: f64, b: f64) -> f64 {
    let kf = k as f64;
    (a * kf + b) / (kf + 1.0)
}

/// Triangle density of `a·T_k + b·D_k`.
pub fn cone_triangle_density(k: u32, a: f64, b: f64) -> f64 {
    let kf = k as f64;
    let d = (kf + 1.0).powi(2);
    a.powi(3) * kf * (kf - 1.0) / d + 3.0 * a * a * b * kf / d + b.powi(3) / d
}

fn cone_densities(k: u32, a: f64, b: f64) -> (f64, f64) {
    (cone_edge_density(k, a, b), cone_triangle_density(k, a, b))
}

/// A point of the cone stored through both weights and their complements.
#[derive(Debug, Clone, Copy)]
struct ConePoint {
    a: f64,
    one_minus_a: f64,
    b: f64,
    one_minus_b: f64,
}

impl ConePoint {
    fn from_log_odds(alpha: f64, gamma: f64) -> Self {
        Self {
            a: logistic(alpha),
            one_minus_a: logistic(-alpha),
            b: logistic(gamma),
            one_minus_b: logistic(-gamma),
        }
    }

    fn from_weights(a: f64, b: f64) -> Self {
        Self {
            a,
            one_minus_a: 1.0 - a,
            b,
            one_minus_b: 1.0 - b,
        }
    }
}

/// `ψ − r·T^{o_k}(f)` on the cone, expanded around `(a, b) = (1, 0)`.
fn correction(c: &ConeCoefficients, r: f64, pt: &ConePoint) -> f64 {
    let kk = c.parts();
    let d = kk + 1.0;
    let p = pt.one_minus_a;
    let b = pt.b;
    let d_edge = (-kk * p + b) / d;
    let d_tri = (kk * (kk - 1.0) * (-3.0 * p + 3.0 * p * p - p * p * p)
        + 3.0 * b * kk * (1.0 - 2.0 * p + p * p)
        + b * b * b)
        / (d * d);
    let energy = r * (c.direction[0] * d_edge + c.direction[1] * d_tri);
    let entropy = entropy_from_pair(pt.a, pt.one_minus_a) * c.measure_a
        + entropy_from_pair(pt.b, pt.one_minus_b) * c.measure_b;
    energy - entropy
}

/// Exact cone free energy `ψ^{r·o_k}(a·T + b·D)` for the cone described by `c`.
pub fn psi_cone(c: &ConeCoefficients, r: f64, a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return invalid(format!("cone weights ({a},{b}) outside [0,1]"));
    }
    if !(r.is_finite() && r >= 0.0) {
        return invalid(format!("scale r = {r} must be finite and nonnegative"));
    }
    Ok(c.base_value(r) + correction(c, r, &ConePoint::from_weights(a, b)))
}

/// Exact free energy of `a·T_k + b·D_k` at `β = r·o_k` (the `k + 1` class cone).
pub fn psi_exact(k: u32, r: f64, a: f64, b: f64) -> Result<f64> {
    psi_cone(&ConeCoefficients::for_cone(k, Cone::Lower)?, r, a, b)
}

/// How the first-order estimate treats the entropy at the closed-form optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FirstOrderVariant {
    /// Entropy evaluated exactly at `(a*, b*)`.
    ExactEntropy,
    /// Each first-variation gain replaced by its leading exponential `e^{−|x|}/2`.
    LemmaAsymptotic,
}

fn first_order_correction(c: &ConeCoefficients, r: f64, variant: FirstOrderVariant) -> f64 {
    let xa = 2.0 * r * c.dot_a;
    let xb = 2.0 * r * c.dot_b;
    match variant {
        FirstOrderVariant::ExactEntropy => {
            let pt = ConePoint::from_log_odds(xa, xb);
            let gain_a = -r * c.dot_a * pt.one_minus_a - entropy_from_pair(pt.a, pt.one_minus_a);
            let gain_b = r * c.dot_b * pt.b - entropy_from_pair(pt.b, pt.one_minus_b);
            c.measure_a * gain_a + c.measure_b * gain_b
        }
        FirstOrderVariant::LemmaAsymptotic => {
            c.measure_a * (-xa).exp() / 2.0 + c.measure_b * xb.exp() / 2.0
        }
    }
}

/// First-order free-energy estimate at the closed-form optimum.
pub fn psi_first_order(k: u32, r: f64, cone: Cone, variant: FirstOrderVariant) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return invalid(format!("scale r = {r} must be positive"));
    }
    let c = ConeCoefficients::for_cone(k, cone)?;
    Ok(c.base_value(r) + first_order_correction(&c, r, variant))
}

/// Smallest `r` at which both cones have `1 − a* < 0.1` and `b* < 0.1`.
pub fn regime_threshold(k: u32) -> Result<f64> {
    let mut weakest = f64::INFINITY;
    for cone in Cone::both() {
        let c = ConeCoefficients::for_cone(k, cone)?;
        weakest = weakest.min(c.dot_a).min(-c.dot_b);
    }
    let logit = ((1.0 - REGIME_LEVEL) / REGIME_LEVEL).ln();
    Ok(logit / (2.0 * weakest))
}

/// Closed-form and numerically optimized cone free energies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbationResult {
    pub k: u32,
    pub classes: u32,
    pub r: f64,
    pub a_star: f64,
    pub b_star: f64,
    pub one_minus_a_star: f64,
    /// First-order estimate with exact entropy at `(a*, b*)`.
    pub psi_first: f64,
    /// First-order estimate with the exponential substitutions.
    pub psi_lemma: f64,
    /// Exact cone free energy at `(a*, b*)`.
    pub psi_at_star: f64,
    pub a_opt: f64,
    pub b_opt: f64,
    pub one_minus_a_opt: f64,
    pub psi_opt: f64,
    /// `r·T^{o_k}` at the Turán graphon.
    pub base: f64,
    /// `psi_opt − base`, computed without cancellation.
    pub correction_opt: f64,
    /// `psi_first − base`.
    pub correction_first: f64,
    pub converged: bool,
    pub iterations: usize,
    pub gradient_norm: f64,
    /// `r ≥ regime_threshold(k)` and the optimum itself has `1 − a, b < 0.1`.
    pub in_regime: bool,
}

struct Gradient {
    value: f64,
    grad: [f64; 2],
    hess: [[f64; 2]; 2],
}

/// Correction, gradient and Hessian in log-odds coordinates `(α, γ)`.
fn evaluate(c: &ConeCoefficients, r: f64, alpha: f64, gamma: f64) -> Gradient {
    let pt = ConePoint::from_log_odds(alpha, gamma);
    let (a, p, b, q) = (pt.a, pt.one_minus_a, pt.b, pt.one_minus_b);
    let kk = c.parts();
    let d = kk + 1.0;
    let u2 = c.direction[1];
    let u1 = c.direction[0];

    // Partial derivatives in (a, b); dI/da = α/2 exactly.
    let g_a = r * (u1 * kk / d + u2 * (3.0 * a * a * kk * (kk - 1.0) + 6.0 * a * b * kk) / (d * d))
        - c.measure_a * alpha / 2.0;
    let g_b =
        r * (u1 / d + u2 * (3.0 * a * a * kk + 3.0 * b * b) / (d * d)) - c.measure_b * gamma / 2.0;
    let e_aa = r * u2 * (6.0 * a * kk * (kk - 1.0) + 6.0 * b * kk) / (d * d);
    let e_bb = r * u2 * 6.0 * b / (d * d);
    let h_ab = r * u2 * 6.0 * a * kk / (d * d);

    let s_a = a * p;
    let s_b = b * q;
    // d²I/da² = 1/(2a(1−a)); multiplied by s_a² it is s_a/2.
    let h_aa = e_aa * s_a * s_a - c.measure_a * s_a / 2.0 + g_a * s_a * (p - a);
    let h_bb = e_bb * s_b * s_b - c.measure_b * s_b / 2.0 + g_b * s_b * (q - b);
    let h_ag = h_ab * s_a * s_b;

    Gradient {
        value: correction(c, r, &pt),
        grad: [g_a * s_a, g_b * s_b],
        hess: [[h_aa, h_ag], [h_ag, h_bb]],
    }
}

fn sup_norm(v: [f64; 2]) -> f64 {
    v[0].abs().max(v[1].abs())
}

/// Maximizes the exact cone free energy over `(a, b) ∈ (0,1)²`.
///
/// Damped Newton ascent in log-odds coordinates, started at the closed-form
/// optimum. Non-convergence is reported through `converged = false` together
/// with the best point found.
pub fn optimize_psi(k: u32, r: f64, cone: Cone) -> Result<PerturbationResult> {
    if !(r.is_finite() && r > 0.0) {
        return invalid(format!("scale r = {r} must be positive"));
    }
    let c = ConeCoefficients::for_cone(k, cone)?;
    let base = c.base_value(r);
    let alpha0 = 2.0 * r * c.dot_a;
    let gamma0 = 2.0 * r * c.dot_b;

    let (mut alpha, mut gamma) = (alpha0, gamma0);
    let mut cur = evaluate(&c, r, alpha, gamma);
    let mut converged = sup_norm(cur.grad) <= GRADIENT_TOL;
    let mut iterations = 0;
    while !converged && iterations < MAX_ITERATIONS {
        iterations += 1;
        let [[h11, h12], [_, h22]] = cur.hess;
        let det = h11 * h22 - h12 * h12;
        let [g1, g2] = cur.grad;
        let mut step = if h11 < 0.0 && det > 0.0 {
            [-(h22 * g1 - h12 * g2) / det, -(-h12 * g1 + h11 * g2) / det]
        } else {
            // Not locally concave: gradient ascent scaled by the diagonal curvature.
            let s1 = if h11 != 0.0 { 1.0 / h11.abs() } else { 1.0 };
            let s2 = if h22 != 0.0 { 1.0 / h22.abs() } else { 1.0 };
            [s1 * g1, s2 * g2]
        };
        let mut accepted = false;
        for _ in 0..60 {
            let trial = evaluate(&c, r, alpha + step[0], gamma + step[1]);
            let slack = 64.0 * f64::EPSILON * (cur.value.abs() + r * cur.value.abs().min(1.0));
            if trial.value >= cur.value - slack
                && (trial.value > cur.value || sup_norm(trial.grad) < sup_norm(cur.grad))
            {
                alpha += step[0];
                gamma += step[1];
                cur = trial;
                accepted = true;
                break;
            }
            step = [step[0] / 2.0, step[1] / 2.0];
        }
        converged = sup_norm(cur.grad) <= GRADIENT_TOL;
        if !accepted {
            break;
        }
    }

    let opt = ConePoint::from_log_odds(alpha, gamma);
    let star = ConePoint::from_log_odds(alpha0, gamma0);
    let correction_first = first_order_correction(&c, r, FirstOrderVariant::ExactEntropy);
    Ok(PerturbationResult {
        k,
        classes: c.classes,
        r,
        a_star: star.a,
        b_star: star.b,
        one_minus_a_star: star.one_minus_a,
        psi_first: base + correction_first,
        psi_lemma: base + first_order_correction(&c, r, FirstOrderVariant::LemmaAsymptotic),
        psi_at_star: base + correction(&c, r, &star),
        a_opt: opt.a,
        b_opt: opt.b,
        one_minus_a_opt: opt.one_minus_a,
        psi_opt: base + cur.value,
        base,
        correction_opt: cur.value,
        correction_first,
        converged,
        iterations,
        gradient_norm: sup_norm(cur.grad),
        in_regime: r >= regime_threshold(k)?
            && opt.one_minus_a < REGIME_LEVEL
            && opt.b < REGIME_LEVEL,
    })
}

/// Outcome of comparing the two cones on a hull segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Preference {
    Classes(u32),
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroundStateDecision {
    pub k: u32,
    pub r: f64,
    pub lower: PerturbationResult,
    pub upper: PerturbationResult,
    pub psi_lower: f64,
    pub psi_upper: f64,
    pub preferred: Preference,
    /// `psi_lower − psi_upper`, taken between the corrections since the base
    /// values coincide on the hull segment.
    pub margin: f64,
    pub in_regime: bool,
    /// Set when both corrections underflow and the decision falls back to the
    /// log-scale leading exponentials.
    pub decided_asymptotically: bool,
}

/// Log of the exponential first-order correction, safe against underflow.
fn log_lemma_correction(c: &ConeCoefficients, r: f64) -> f64 {
    let la = (c.measure_a / 2.0).ln() - 2.0 * r * c.dot_a;
    let lb = (c.measure_b / 2.0).ln() + 2.0 * r * c.dot_b;
    let m = la.max(lb);
    m + ((la - m).exp() + (lb - m).exp()).ln()
}

/// Compares the optimized cone free energies at `k + 1` and `k + 2` classes.
pub fn ground_state_compare(k: u32, r: f64) -> Result<GroundStateDecision> {
    let lower = optimize_psi(k, r, Cone::Lower)?;
    let upper = optimize_psi(k, r, Cone::Upper)?;
    let margin = lower.correction_opt - upper.correction_opt;
    let scale = lower.correction_opt.abs().max(upper.correction_opt.abs());

    let mut decided_asymptotically = false;
    let preferred = if scale > 1e-300 && margin.abs() > TIE_RELATIVE_TOL * scale {
        Preference::Classes(if margin > 0.0 { k + 1 } else { k + 2 })
    } else if scale <= 1e-300 {
        decided_asymptotically = true;
        let ll = log_lemma_correction(&ConeCoefficients::for_cone(k, Cone::Lower)?, r);
        let lu = log_lemma_correction(&ConeCoefficients::for_cone(k, Cone::Upper)?, r);
        if (ll - lu).abs() > 1e-9 * ll.abs().max(1.0) {
            Preference::Classes(if ll > lu { k + 1 } else { k + 2 })
        } else {
            Preference::Indeterminate
        }
    } else {
        Preference::Indeterminate
    };

    Ok(GroundStateDecision {
        k,
        r,
        psi_lower: lower.psi_opt,
        psi_upper: upper.psi_opt,
        in_regime: lower.in_regime && upper.in_regime,
        lower,
        upper,
        preferred,
        margin,
        decided_asymptotically,
    })
}

/// Derivatives of `(edge, triangle)` density of `a·T_k + b·D_k` at `(1, 0)`:
/// `(∂/∂a, ∂/∂b)`.
pub fn tangent_vectors(k: u32) -> Result<([f64; 2], [f64; 2])> {
    if k == 0 {
        return invalid("cone index k must be at least 1");
    }
    let kf = k as f64;
    let d = kf + 1.0;
    Ok((
        [kf / d, 3.0 * kf * (kf - 1.0) / (d * d)],
        [1.0 / d, 3.0 * kf / (d * d)],
    ))
}

/// Runs [`ground_state_compare`] over a `k × r` grid in parallel; results
/// come back in grid order.
pub fn sweep(ks: &[u32], rs: &[f64]) -> Result<Vec<GroundStateDecision>> {
    let grid: Vec<(u32, f64)> = ks
        .iter()
        .flat_map(|&k| rs.iter().map(move |&r| (k, r)))
        .collect();
    grid.par_iter()
        .map(|&(k, r)| ground_state_compare(k, r))
        .collect()
}

pub const SWEEP_CSV_HEADER: &str =
    "k,r,cone,a_star,b_star,psi_first,psi_lemma,a_opt,b_opt,psi_opt,preferred,margin,in_regime";

fn preference_label(p: Preference) -> String {
    match p {
        Preference::Classes(c) => c.to_string(),
        Preference::Indeterminate => "indeterminate".into(),
    }
}

/// Writes sweep results, one row per cone, with full-precision numbers.
pub fn write_sweep_csv<W: std::io::Write>(
    rows: &[GroundStateDecision],
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for d in rows {
        for res in [&d.lower, &d.upper] {
            writeln!(
                out,
                "{},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e},{}",
                d.k,
                d.r,
                res.classes,
                res.a_star,
                res.b_star,
                res.psi_first,
                res.psi_lemma,
                res.a_opt,
                res.b_opt,
                res.psi_opt,
                preference_label(d.preferred),
                d.margin,
                res.in_regime,
            )?;
        }
    }
    Ok(())
}

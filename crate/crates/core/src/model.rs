//! Edge-triangle model: the feasible density region, its critical directions
//! and the free-energy functional `ψ = T − I`.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::graphon::{hom_density, StepGraphon, SubgraphPattern};

/// Clamp window for the square root in the lower boundary near segment ends.
const SQRT_GUARD: f64 = 1e-14;

/// Parameter vector `β = r·u` for the edge (`β₁`) and triangle (`β₂`) statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub beta: [f64; 2],
    pub r: f64,
    pub u: [f64; 2],
}

impl ModelParams {
    /// From a raw parameter vector; `u` is the Euclidean unit direction
    /// (`(1, 0)` for the zero vector).
    pub fn new(beta: [f64; 2]) -> Self {
        let r = beta[0].hypot(beta[1]);
        let u = if r > 0.0 {
            [beta[0] / r, beta[1] / r]
        } else {
            [1.0, 0.0]
        };
        Self { beta, r, u }
    }

    /// `β = r·o_k` with `o_k` left unnormalized.
    pub fn along_critical(r: f64, k: u32) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return invalid(format!("scale r = {r} must be finite and nonnegative"));
        }
        let u = critical_direction(k)?;
        Ok(Self {
            beta: [r * u[0], r * u[1]],
            r,
            u,
        })
    }
}

/// A point of the edge-triangle density plane tagged with its lower-boundary
/// segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub e: f64,
    pub t: f64,
    /// `None` only at `e = 1`, which lies beyond every finite segment.
    pub k: Option<u32>,
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return invalid(format!("{name} = {x} outside [0,1]"));
    }
    Ok(())
}

/// Index `k` of the lower-boundary segment `(k−1)/k ≤ e ≤ k/(k+1)`; the lower
/// index is reported at joints.
pub fn segment_index(e: f64) -> Result<Option<u32>> {
    check_unit("edge density", e)?;
    if e >= 1.0 {
        return Ok(None);
    }
    let mut k = ((e / (1.0 - e)).ceil().max(1.0)) as u32;
    // Snap to the lower segment when e sits on a joint up to rounding.
    if k > 1 {
        let joint = (k - 1) as f64 / k as f64;
        if (e - joint).abs() <= 1e-12 {
            k -= 1;
        }
    }
    Ok(Some(k))
}

/// Segment `g_k` of the lower boundary, evaluated without a domain check.
pub fn lower_boundary_segment(k: u32, e: f64) -> f64 {
    if k <= 1 {
        return 0.0;
    }
    let kf = k as f64;
    let mut inner = kf * (kf - e * (kf + 1.0));
    if inner < 0.0 && inner > -SQRT_GUARD {
        inner = 0.0;
    }
    let s = inner.sqrt();
    (kf - 1.0) * (kf - 2.0 * s) * (kf + s).powi(2) / (kf * kf * (kf + 1.0).powi(2))
}

/// Minimum triangle density compatible with edge density `e`.
pub fn razborov_lower_bound(e: f64) -> Result<f64> {
    match segment_index(e)? {
        None => Ok(1.0),
        Some(k) => Ok(lower_boundary_segment(k, e)),
    }
}

/// Maximum triangle density compatible with edge density `e`: `e^{3/2}`.
pub fn kruskal_katona_upper_bound(e: f64) -> Result<f64> {
    check_unit("edge density", e)?;
    Ok(e.powf(1.5))
}

/// Critical direction `o_k = (1, −(k+1)(k+2)/(k(3k+5)))`, normal to the hull
/// segment between the Turán points `v_k` and `v_{k+1}`.
pub fn critical_direction(k: u32) -> Result<[f64; 2]> {
    if k == 0 {
        return invalid("critical direction index k must be at least 1");
    }
    let kf = k as f64;
    Ok([1.0, -(kf + 1.0) * (kf + 2.0) / (kf * (3.0 * kf + 5.0))])
}

/// Density point `v_k` of the Turán graphon with `k + 1` classes.
pub fn turan_point(k: u32) -> Result<BoundaryPoint> {
    if k == 0 {
        return invalid("Turán point index k must be at least 1");
    }
    let kf = k as f64;
    Ok(BoundaryPoint {
        e: kf / (kf + 1.0),
        t: kf * (kf - 1.0) / (kf + 1.0).powi(2),
        k: Some(k),
    })
}

/// One-sided slopes of the lower boundary at `v_k`: `(g_k'(e_k−), g_{k+1}'(e_k+))`.
pub fn boundary_derivatives(k: u32) -> Result<(f64, f64)> {
    if k == 0 {
        return invalid("boundary index k must be at least 1");
    }
    let kf = k as f64;
    Ok((3.0 * (kf - 1.0) / (kf + 1.0), 3.0 * kf / (kf + 1.0)))
}

/// `u log u` with `0 log 0 = 0`.
fn xlogx(u: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u * u.ln()
    }
}

/// Bernoulli entropy rate `I(u) = (u log u + (1−u) log(1−u)) / 2`.
pub fn entropy_rate(u: f64) -> Result<f64> {
    check_unit("entropy argument", u)?;
    Ok(0.5 * (xlogx(u) + xlogx(1.0 - u)))
}

/// `I` evaluated from the complementary pair `(u, 1 − u)` given separately,
/// which stays accurate when `u` is within rounding of 0 or 1.
pub(crate) fn entropy_from_pair(u: f64, one_minus_u: f64) -> f64 {
    let big = |p: f64, q: f64| if p == 0.0 { 0.0 } else { p * (-q).ln_1p() };
    // Use ln(1 − q) for whichever side is close to 1.
    if u >= one_minus_u {
        0.5 * (big(u, one_minus_u) + xlogx(one_minus_u))
    } else {
        0.5 * (xlogx(u) + big(one_minus_u, u))
    }
}

/// `I(f) = ∫ I(f(x,y)) dx dy`.
pub fn graphon_entropy(f: &StepGraphon) -> f64 {
    let w = f.measures();
    let mut total = 0.0;
    for (i, row) in f.values().iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            total += 0.5 * (xlogx(v) + xlogx(1.0 - v)) * w[i] * w[j];
        }
    }
    total
}

/// Edge and triangle homomorphism densities of `f`.
pub fn densities(f: &StepGraphon) -> (f64, f64) {
    (
        hom_density(&SubgraphPattern::edge(), f),
        hom_density(&SubgraphPattern::triangle(), f),
    )
}

/// `T^β(f) = β₁ t(K₂, f) + β₂ t(K₃, f)`.
pub fn energy(params: &ModelParams, f: &StepGraphon) -> f64 {
    let (e, t) = densities(f);
    params.beta[0] * e + params.beta[1] * t
}

/// `ψ^β(f) = T^β(f) − I(f)`.
pub fn free_energy(params: &ModelParams, f: &StepGraphon) -> f64 {
    energy(params, f) - graphon_entropy(f)
}

/// Lower and upper boundary of the feasible region at one edge density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundarySample {
    pub e: f64,
    pub t_lower: f64,
    pub t_upper: f64,
    pub k: Option<u32>,
}

/// Samples of the feasible region boundary at `resolution` evenly spaced
/// edge densities in `[0,1]`.
pub fn boundary_samples(resolution: usize) -> Result<Vec<BoundarySample>> {
    if resolution < 2 {
        return invalid("boundary resolution must be at least 2");
    }
    (0..resolution)
        .map(|i| {
            let e = i as f64 / (resolution - 1) as f64;
            Ok(BoundarySample {
                e,
                t_lower: razborov_lower_bound(e)?,
                t_upper: kruskal_katona_upper_bound(e)?,
                k: segment_index(e)?,
            })
        })
        .collect()
}

/// Writes boundary points as CSV with header `e,t,k`.
pub fn write_boundary_points_csv<W: std::io::Write>(
    points: &[BoundaryPoint],
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "e,t,k")?;
    for p in points {
        let k = p.k.map(|k| k.to_string()).unwrap_or_default();
        writeln!(out, "{:.16e},{:.16e},{}", p.e, p.t, k)?;
    }
    Ok(())
}

//! The model profile `f`, the Rayleigh quotient of `f ∘ w_G`, and the
//! constants it is compared against.
//!
//! For a test function `φ = f(w)` with `w = −log u`, the coarea formula
//! turns both halves of the Yamabe quotient into integrals over `t`:
//!
//! * `∫ 8|∇φ|² = 8 C₀ ∫ f'(t)² eᵗ dt`, since the flux of `∇w` through
//!   `{w = t}` is `C₀ eᵗ`;
//! * `∫ φ⁶ = ∫ f(t)⁶ (∫_{w=t} |∇w|⁻¹) dt`, bounded below through
//!   Cauchy–Schwarz and `W_G(t) ≤ card · π(2 − e⁻ᵗ)²` by
//!   `card⁻² π⁻² C₀³ ∫ f⁶ e³ᵗ (2 − e⁻ᵗ)⁻⁴ dt`.

use crate::blowup::{greens_round, GreensProfile};
use crate::error::{Error, Result};
use crate::geom::ClosedModelMetric;
use crate::groups::Vec4;
use crate::levelset::{coarea_integral, minimal_boundary_bound, LevelSetScan};
use crate::numerics::interp::CubicHermite;
use crate::numerics::linspace;
use crate::numerics::quad::{self, QuadOptions};
use serde::Serialize;
use std::f64::consts::PI;

/// `σ(S³) = 6 (2π²)^{2/3}`
pub fn sigma_s3() -> f64 {
    6.0 * (2.0 * PI * PI).powf(2.0 / 3.0)
}

/// `σ(S³) / p^{2/3}`; `σ₂` is also the Yamabe invariant of `ℝP³`.
pub fn sigma_p(p: u32) -> Result<f64> {
    if p < 1 {
        return Err(Error::Domain("σ_p needs p ≥ 1".into()));
    }
    Ok(sigma_s3() / f64::from(p).powf(2.0 / 3.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaConstants {
    pub sigma_s3: f64,
    /// `σ₂ = σ(ℝP³)`
    pub sigma_2: f64,
}

pub fn sigma_constants() -> SigmaConstants {
    SigmaConstants {
        sigma_s3: sigma_s3(),
        sigma_2: sigma_s3() / 2f64.powf(2.0 / 3.0),
    }
}

/// `card^{2/3} σ₂`
pub fn improved_bound(card: usize) -> f64 {
    (card as f64).powf(2.0 / 3.0) * sigma_constants().sigma_2
}

/// `card^{2/n} σ(Sⁿ)`; only `n = 3` has a built-in `σ(Sⁿ)`.
pub fn hebey_vaugon_bound(n: u32, card: usize) -> Result<f64> {
    if n != 3 {
        return Err(Error::Domain(format!(
            "no built-in σ(S^{n}); use hebey_vaugon_bound_with"
        )));
    }
    hebey_vaugon_bound_with(3, sigma_s3(), card)
}

pub fn hebey_vaugon_bound_with(n: u32, sigma_sn: f64, card: usize) -> Result<f64> {
    if n < 3 || card < 1 || !(sigma_sn > 0.0) {
        return Err(Error::Domain(format!(
            "need n ≥ 3, card ≥ 1 and σ(Sⁿ) > 0 (got n = {n}, card = {card}, σ = {sigma_sn})"
        )));
    }
    Ok(sigma_sn * (card as f64).powf(2.0 / f64::from(n)))
}

/// Classical and improved upper bounds side by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundComparison {
    pub card: usize,
    pub hebey_vaugon: f64,
    pub improved: f64,
    /// `improved / hebey_vaugon = 2^{−2/3}`
    pub ratio: f64,
}

pub fn compare_bounds(card: usize) -> Result<BoundComparison> {
    let hebey_vaugon = hebey_vaugon_bound(3, card)?;
    let improved = improved_bound(card);
    Ok(BoundComparison {
        card,
        hebey_vaugon,
        improved,
        ratio: improved / hebey_vaugon,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProfileSource {
    Rp3Model { mass: f64 },
    Tabulated,
}

/// Positive non-increasing profile `f(t)`, tabulated on `[0, T]` and
/// continued exponentially beyond `T` with the endpoint log-slope.
#[derive(Debug, Clone)]
pub struct ModelProfileF {
    source: ProfileSource,
    table: CubicHermite,
    /// `−f'(T)/f(T)`
    tail_rate: f64,
    round_residual: Option<f64>,
}

/// Residual above which the round-restoration certificate fails.
pub const ROUND_RESIDUAL_LIMIT: f64 = 1e-4;
const MONOTONE_SLACK: f64 = 1e-12;

impl ModelProfileF {
    /// Profile from samples `(t, f, f')` with `t₀ = 0`.
    pub fn tabulated(t: Vec<f64>, f: Vec<f64>, df: Vec<f64>) -> Result<Self> {
        Self::build(ProfileSource::Tabulated, t, f, df, None)
    }

    /// Tabulates `t ↦ (f, f')` on `t_grid`.
    pub fn from_fn<F: Fn(f64) -> (f64, f64)>(t_grid: &[f64], jet: F) -> Result<Self> {
        let (f, df) = t_grid.iter().map(|&t| jet(t)).unzip();
        Self::tabulated(t_grid.to_vec(), f, df)
    }

    fn build(
        source: ProfileSource,
        t: Vec<f64>,
        f: Vec<f64>,
        df: Vec<f64>,
        round_residual: Option<f64>,
    ) -> Result<Self> {
        if t.first() != Some(&0.0) {
            return Err(Error::Domain("profile grid must start at t = 0".into()));
        }
        if let Some(k) = f.iter().position(|&v| !(v > 0.0)) {
            return Err(Error::Domain(format!(
                "profile not positive at t = {}",
                t[k]
            )));
        }
        if let Some(k) = df
            .iter()
            .zip(&f)
            .position(|(&d, &v)| d > MONOTONE_SLACK * v.max(1.0))
        {
            return Err(Error::Domain(format!("profile increases at t = {}", t[k])));
        }
        let last = f.len() - 1;
        let tail_rate = -df[last] / f[last];
        let table = CubicHermite::new(t, f, df)?;
        Ok(Self {
            source,
            table,
            tail_rate,
            round_residual,
        })
    }

    pub fn source(&self) -> ProfileSource {
        self.source
    }

    pub fn f0(&self) -> f64 {
        self.table.values()[0]
    }

    pub fn t_max(&self) -> f64 {
        *self.table.knots().last().unwrap()
    }

    pub fn knots(&self) -> &[f64] {
        self.table.knots()
    }

    /// `sup |R − 6|` of the round-restoration check, for model profiles.
    pub fn round_residual(&self) -> Option<f64> {
        self.round_residual
    }

    /// `(f(t), f'(t))` for `t ≥ 0`.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let tm = self.t_max();
        if t <= tm {
            let (v, d, _) = self.table.eval(t.max(0.0));
            (v, d)
        } else {
            let ft = *self.table.values().last().unwrap();
            let v = ft * (-self.tail_rate * (t - tm)).exp();
            (v, -self.tail_rate * v)
        }
    }

    fn end_jet(&self) -> (f64, f64, f64) {
        let tm = self.t_max();
        let (f, df) = self.eval(tm);
        (tm, f, df)
    }
}

/// Default level grid for model profiles: `[0, 12]`, 961 knots.
pub fn default_profile_grid() -> Vec<f64> {
    linspace(0.0, 12.0, 961)
}

struct Rp3Model {
    green: GreensProfile,
    mass: f64,
}

impl Rp3Model {
    /// `(u₀, du₀/dr)` with `u₀ = m^{−1/2} / (G(θ) + G(π − θ))`,
    /// `θ = 2 atan(m / 2r)`.
    fn u0(&self, r: f64) -> Result<(f64, f64)> {
        let m = self.mass;
        let theta = 2.0 * (m / (2.0 * r)).atan();
        let (g1, d1) = self.green.eval_jet(theta)?;
        let (g2, d2) = self.green.eval_jet(PI - theta)?;
        let h = g1 + g2;
        let dh = d1 - d2;
        let dtheta_dr = -4.0 * m / (4.0 * r * r + m * m);
        let scale = m.powf(-0.5);
        Ok((scale / h, -scale * dh / (h * h) * dtheta_dr))
    }

    /// Scalar curvature of `u₀⁴ g_AF = (u₀ φ)⁴ δ` at `s = 1/r`, from
    /// `Δψ = s⁴ ψ_ss` and a five-point stencil in `s`.
    fn restored_curvature(&self, s: f64) -> Result<f64> {
        let m = self.mass;
        let psi = |x: f64| -> Result<f64> { Ok(self.u0(1.0 / x)?.0 * (1.0 + m * x / 2.0)) };
        let h = CERTIFICATE_STEP / m;
        let v = [
            psi(s - 2.0 * h)?,
            psi(s - h)?,
            psi(s)?,
            psi(s + h)?,
            psi(s + 2.0 * h)?,
        ];
        let d2 = (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h);
        Ok(-8.0 * v[2].powi(-5) * s.powi(4) * d2)
    }
}

const CERTIFICATE_STEP: f64 = 1e-2;
/// Levels on which the round-restoration certificate is evaluated; beyond
/// this the stencil cancellation outgrows the table accuracy.
const CERTIFICATE_T_MAX: f64 = 3.0;

/// Profile `f(t) = u₀` on `{u_s = e^{−t}}` for the `ℝP³` model: Schwarzschild
/// of mass `m` with its horizon antipodally identified, `u_s = m/(r + m/2)`
/// and `u₀ = Gr^{−1}` the factor restoring the round metric.
pub fn build_model_profile(mass: f64) -> Result<ModelProfileF> {
    build_model_profile_on(mass, &default_profile_grid())
}

pub fn build_model_profile_on(mass: f64, t_grid: &[f64]) -> Result<ModelProfileF> {
    if !(mass > 0.0) {
        return Err(Error::Domain(format!(
            "model mass must be positive, got {mass}"
        )));
    }
    let unit = ClosedModelMetric::round_sphere(1.0)?;
    let model = Rp3Model {
        green: greens_round(&unit, &Vec4::new(1.0, 0.0, 0.0, 0.0))?,
        mass,
    };
    let level_radius = |t: f64| mass * (t.exp() - 0.5);
    let mut f = Vec::with_capacity(t_grid.len());
    let mut df = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let r = level_radius(t);
        let (u, du) = model.u0(r)?;
        f.push(u);
        df.push(du * mass * t.exp());
    }
    let mut residual: f64 = 0.0;
    for t in linspace(0.0, CERTIFICATE_T_MAX, 61) {
        let s = 1.0 / level_radius(t);
        residual = residual.max((model.restored_curvature(s)? - 6.0).abs());
    }
    if !(residual <= ROUND_RESIDUAL_LIMIT) {
        return Err(Error::Solver {
            stage: "model construction",
            message: "restored metric is not round".into(),
            residual,
        });
    }
    ModelProfileF::build(
        ProfileSource::Rp3Model { mass },
        t_grid.to_vec(),
        f,
        df,
        Some(residual),
    )
}

/// Capacity flux of the model potential `m/(r + m/2)` on Schwarzschild of
/// mass `m`.
pub fn model_capacity_flux(mass: f64) -> f64 {
    4.0 * PI * mass
}

fn quad_opts() -> QuadOptions {
    QuadOptions {
        rel_tol: 1e-12,
        abs_tol: 1e-300,
        max_panels: 200,
    }
}

fn integrate_on_profile<F: Fn(f64) -> f64>(f: &ModelProfileF, g: F) -> Result<f64> {
    Ok(quad::integrate_pieces(g, f.knots(), quad_opts())?.value)
}

fn divergent(what: &str, rate: f64) -> Error {
    Error::Integrability(format!(
        "{what}: profile decays like e^(-{rate:.3} t), too slowly for a finite tail"
    ))
}

/// `∫₀^∞ f'(t)² eᵗ dt`, with the exponential tail beyond the table
/// integrated in closed form.
pub fn dirichlet_integral(f: &ModelProfileF) -> Result<f64> {
    let body = integrate_on_profile(f, |t| {
        let d = f.eval(t).1;
        d * d * t.exp()
    })?;
    let (tm, _, d) = f.end_jet();
    let tail = if d == 0.0 {
        0.0
    } else if f.tail_rate <= 0.5 {
        return Err(divergent("Dirichlet energy", f.tail_rate));
    } else {
        d * d * tm.exp() / (2.0 * f.tail_rate - 1.0)
    };
    Ok(body + tail)
}

/// `C₀ ∫₀^∞ f'(t)² eᵗ dt`
pub fn dirichlet_energy(f: &ModelProfileF, c0: f64) -> Result<f64> {
    check_flux(c0)?;
    Ok(c0 * dirichlet_integral(f)?)
}

/// `∫₀^∞ f⁶ e³ᵗ (2 − e⁻ᵗ)⁻⁴ dt`
pub fn l6_integral(f: &ModelProfileF) -> Result<f64> {
    let weight = |t: f64| (3.0 * t).exp() * (2.0 - (-t).exp()).powi(-4);
    let body = integrate_on_profile(f, |t| f.eval(t).0.powi(6) * weight(t))?;
    if f.tail_rate <= 0.5 {
        return Err(divergent("L⁶ bound", f.tail_rate));
    }
    let (tm, v, _) = f.end_jet();
    Ok(body + v.powi(6) * weight(tm) / (6.0 * f.tail_rate - 3.0))
}

/// `card⁻² π⁻² C₀³ ∫₀^∞ f⁶ e³ᵗ (2 − e⁻ᵗ)⁻⁴ dt`
pub fn l6_lower_bound(f: &ModelProfileF, c0: f64, card: usize) -> Result<f64> {
    check_flux(c0)?;
    if card < 1 {
        return Err(Error::Domain("orbit cardinality must be at least 1".into()));
    }
    Ok(c0.powi(3) * l6_integral(f)? / ((card * card) as f64 * PI * PI))
}

/// `∫₀^∞ f(t)⁶ (∫_{w=t} |∇w|⁻¹ da) dt` from the scan's coarea column.
pub fn l6_exact(f: &ModelProfileF, scan: &LevelSetScan) -> Result<f64> {
    let body = coarea_integral(scan, |t| f.eval(t).0.powi(6), scan.t_max)?;
    let last = scan
        .samples
        .last()
        .ok_or_else(|| Error::MissingData("empty scan".into()))?;
    let (coarea, growth) = match (last.coarea, last.dcoarea_dt) {
        (Some(c), Some(d)) => (c, d / c),
        _ => return Err(Error::MissingData("scan lacks the coarea column".into())),
    };
    let (v, d) = f.eval(scan.t_max);
    let rate = -d / v;
    if 6.0 * rate <= growth {
        return Err(divergent("exact L⁶ norm", rate));
    }
    Ok(body + v.powi(6) * coarea / (6.0 * rate - growth))
}

fn check_flux(c0: f64) -> Result<()> {
    if c0 > 0.0 && c0.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "capacity flux must be positive, got {c0}"
        )))
    }
}

/// Per-level terms of the L⁶ chain, each weighted by `f(t)⁶`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainLevel {
    pub t: f64,
    /// `f⁶ ∫ |∇w|⁻¹`
    pub coarea: f64,
    /// `f⁶ flux³ / W²`
    pub cauchy_schwarz: f64,
    /// `f⁶ flux³ / (card π (2 − e⁻ᵗ)²)²`
    pub bound: f64,
}

impl ChainLevel {
    /// `coarea ≥ cauchy_schwarz ≥ bound`, up to a relative tolerance.
    pub fn ordered(&self, rel_tol: f64) -> bool {
        self.coarea >= self.cauchy_schwarz * (1.0 - rel_tol)
            && self.cauchy_schwarz >= self.bound * (1.0 - rel_tol)
    }
}

pub fn chain_levels(
    f: &ModelProfileF,
    scan: &LevelSetScan,
    card: usize,
) -> Result<Vec<ChainLevel>> {
    scan.samples
        .iter()
        .map(|s| {
            let f6 = f.eval(s.t).0.powi(6);
            let coarea = s
                .coarea
                .ok_or_else(|| Error::MissingData("scan lacks the coarea column".into()))?;
            let w_bound = card as f64 * minimal_boundary_bound(s.t);
            Ok(ChainLevel {
                t: s.t,
                coarea: f6 * coarea,
                cauchy_schwarz: f6 * s.flux.powi(3) / (s.w * s.w),
                bound: f6 * s.flux.powi(3) / (w_bound * w_bound),
            })
        })
        .collect()
}

/// Relative tolerance of the `quotient_ub ≤ bound` verdict; the two agree
/// exactly in the model, so the comparison is an equality up to quadrature.
pub const VERDICT_REL_TOL: f64 = 1e-6;
/// Largest `|flux e⁻ᵗ / C₀ − 1|` accepted from a scan.
pub const FLUX_CONSISTENCY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayleighReport {
    pub c0: f64,
    pub card: usize,
    /// `∫ f'² eᵗ`
    pub dirichlet_integral: f64,
    /// `8 C₀ ∫ f'² eᵗ`
    pub numerator: f64,
    pub denominator_lb: f64,
    pub denominator_exact: Option<f64>,
    pub quotient_ub: f64,
    pub quotient_exact: Option<f64>,
    pub sigma: SigmaConstants,
    /// `card^{2/3} σ₂`
    pub bound: f64,
    /// `(bound − quotient_ub) / bound`
    pub relative_gap: f64,
    pub tolerance: f64,
    pub verdict: bool,
}

/// Rayleigh quotient of `f ∘ w` on the geometry behind `scan`, which sums
/// the potentials of `card` ends.
pub fn rayleigh_model(
    f: &ModelProfileF,
    scan: &LevelSetScan,
    card: usize,
) -> Result<RayleighReport> {
    let deviation = scan.flux_deviation();
    if !(deviation < FLUX_CONSISTENCY_TOL) {
        return Err(Error::Consistency(format!(
            "level fluxes deviate from C₀ eᵗ by {deviation:e}"
        )));
    }
    let c0 = scan.c0;
    let dirichlet_integral = dirichlet_integral(f)?;
    let numerator = 8.0 * c0 * dirichlet_integral;
    let denominator_lb = l6_lower_bound(f, c0, card)?;
    let denominator_exact = match l6_exact(f, scan) {
        Ok(v) => Some(v),
        Err(Error::MissingData(_)) => None,
        Err(e) => return Err(e),
    };
    let quotient_ub = numerator / denominator_lb.cbrt();
    let sigma = sigma_constants();
    let bound = improved_bound(card);
    let relative_gap = (bound - quotient_ub) / bound;
    Ok(RayleighReport {
        c0,
        card,
        dirichlet_integral,
        numerator,
        denominator_lb,
        denominator_exact,
        quotient_ub,
        quotient_exact: denominator_exact.map(|d| numerator / d.cbrt()),
        sigma,
        bound,
        relative_gap,
        tolerance: VERDICT_REL_TOL,
        verdict: relative_gap >= -VERDICT_REL_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{ConformalFactor, RadialMetric};
    use crate::levelset::{scan_levels, solve_harmonic_radial};

    fn exp_profile(rate: f64) -> ModelProfileF {
        ModelProfileF::from_fn(&linspace(0.0, 10.0, 401), |t| {
            let v = (-rate * t).exp();
            (v, -rate * v)
        })
        .unwrap()
    }

    fn model_scan(m: f64) -> LevelSetScan {
        let end = RadialMetric::new(ConformalFactor::schwarzschild(m), m / 2.0).unwrap();
        scan_levels(
            &solve_harmonic_radial(&end).unwrap(),
            &linspace(0.0, 10.0, 401),
        )
        .unwrap()
    }

    #[test]
    fn sigma_values() {
        let s = sigma_constants();
        assert!((s.sigma_s3 - 43.823).abs() < 1e-3);
        assert!((s.sigma_2 - 27.607).abs() < 1e-3);
        assert_eq!(sigma_p(1).unwrap(), s.sigma_s3);
        assert!((sigma_p(2).unwrap() - s.sigma_2).abs() < 1e-12);
        assert!(matches!(sigma_p(0), Err(Error::Domain(_))));
    }

    #[test]
    fn bound_comparison() {
        assert!((hebey_vaugon_bound(3, 1).unwrap() - 43.823).abs() < 1e-3);
        let c = compare_bounds(2).unwrap();
        assert!((c.hebey_vaugon - 69.57).abs() < 1e-2);
        assert!((c.improved - sigma_s3()).abs() < 1e-12);
        for card in [1, 2, 8, 60] {
            assert!((compare_bounds(card).unwrap().ratio - 2f64.powf(-2.0 / 3.0)).abs() < 1e-14);
        }
        assert!((improved_bound(3) - 57.42).abs() < 1e-2);
        assert!(matches!(hebey_vaugon_bound(4, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn exponential_profile_oracles() {
        let f = exp_profile(1.0);
        assert!((dirichlet_energy(&f, 1.0).unwrap() - 1.0).abs() < 1e-9);
        // ∫₀¹ s² (2 − s)⁻⁴ ds = 1/6
        let lb = l6_lower_bound(&f, 1.0, 1).unwrap();
        assert!((lb - 1.0 / (6.0 * PI * PI)).abs() < 1e-10);
        assert!((l6_lower_bound(&f, 1.0, 2).unwrap() - lb / 4.0).abs() < 1e-14);
    }

    #[test]
    fn constant_profile_has_no_energy() {
        let f = ModelProfileF::from_fn(&linspace(0.0, 5.0, 11), |_| (0.7, 0.0)).unwrap();
        assert_eq!(dirichlet_energy(&f, 3.0).unwrap(), 0.0);
        assert!(matches!(
            l6_lower_bound(&f, 3.0, 1),
            Err(Error::Integrability(_))
        ));
    }

    #[test]
    fn slow_decay_is_rejected() {
        let f = exp_profile(0.4);
        assert!(matches!(
            dirichlet_energy(&f, 1.0),
            Err(Error::Integrability(_))
        ));
    }

    #[test]
    fn profile_validation() {
        assert!(matches!(
            ModelProfileF::tabulated(vec![0.0, 1.0], vec![1.0, -1.0], vec![0.0, 0.0]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            ModelProfileF::tabulated(vec![0.0, 1.0], vec![1.0, 2.0], vec![1.0, 1.0]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(build_model_profile(0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn model_profile_closed_form() {
        // m = 1: u₀(r) = 4r / ((1 + 2r) √(1 + 4r²))
        let f = build_model_profile(1.0).unwrap();
        assert!(f.round_residual().unwrap() < 1e-6);
        for t in [0.0f64, 0.5, 2.0, 7.0] {
            let r = t.exp() - 0.5;
            let exact = 4.0 * r / ((1.0 + 2.0 * r) * (1.0 + 4.0 * r * r).sqrt());
            assert!((f.eval(t).0 - exact).abs() < 1e-9, "t = {t}");
        }
        assert!((f.f0() - 0.5f64.sqrt()).abs() < 1e-9);
        let tail = f.eval(12.0).0 * 12f64.exp();
        assert!((tail - 1.0).abs() < 1e-4);
    }

    #[test]
    fn model_quotient_is_sigma_2() {
        let f = build_model_profile(1.0).unwrap();
        let scan = model_scan(1.0);
        let rep = rayleigh_model(&f, &scan, 1).unwrap();
        assert!(rep.relative_gap.abs() < 1e-9, "{rep:?}");
        assert!(rep.verdict);
        let exact = rep.denominator_exact.unwrap();
        assert!((exact - rep.denominator_lb).abs() / exact < 1e-4);
        for level in chain_levels(&f, &scan, 1).unwrap() {
            assert!(level.ordered(1e-9));
        }
    }

    #[test]
    fn model_quotient_is_mass_independent() {
        let q: Vec<f64> = [1.0, 2.0, 4.0]
            .iter()
            .map(|&m| {
                let f = build_model_profile(m).unwrap();
                rayleigh_model(&f, &model_scan(m), 1).unwrap().quotient_ub
            })
            .collect();
        assert!((q[1] / q[0] - 1.0).abs() < 1e-6 && (q[2] / q[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn energy_stable_under_refinement() {
        let coarse = build_model_profile_on(1.0, &linspace(0.0, 12.0, 481)).unwrap();
        let fine = build_model_profile_on(1.0, &linspace(0.0, 12.0, 1921)).unwrap();
        let c0 = model_capacity_flux(1.0);
        let a = dirichlet_energy(&coarse, c0).unwrap();
        let b = dirichlet_energy(&fine, c0).unwrap();
        assert!(a > 0.0 && ((a - b) / b).abs() < 1e-6);
    }

    #[test]
    fn inconsistent_flux_is_rejected() {
        let f = build_model_profile(1.0).unwrap();
        let mut scan = model_scan(1.0);
        scan.c0 *= 1.01;
        assert!(matches!(
            rayleigh_model(&f, &scan, 1),
            Err(Error::Consistency(_))
        ));
    }
}

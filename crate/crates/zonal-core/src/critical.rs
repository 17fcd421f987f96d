//! Neutral-mode location (roots of `λ₁(μ, ω) = -12`), the function
//! `g(ω) = max_{μ ∈ [3, 183]} λ̃₁(μ, ω)`, and the four critical rotation
//! rates `99/2`, `69/2`, `-3` and `g⁻¹(-12) ≈ -16.0735`.

use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::parallel;
use crate::rayleigh::{
    self, DiscretizationConfig, EigenSolution, ModeSpec, BOUNDARY_GUARD,
};

/// Target eigenvalue defining neutral modes.
pub const NEUTRAL_LEVEL: f64 = -12.0;
/// Upper bound of the `μ` search range in the definition of `g`.
pub const G_MU_MAX: f64 = 183.0;

/// Krein signature of a neutral mode: the sign of the energy quadratic form
/// `(c - 5ω/6) ∂_μλ₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KreinSign {
    Negative,
    Positive,
    /// `|∂_μλ₁| < 1e-6`; never resolved by guessing.
    Degenerate,
}

/// A neutral mode: the quadruple `(c, k, ω, Φ)` solving the Rayleigh equation
/// with real wave speed `c = ω + μ`, plus its signature data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeutralMode {
    pub c: f64,
    pub k: u32,
    pub omega: f64,
    pub mu: f64,
    pub eigenfunction: EigenSolution,
    pub dlambda_dmu: f64,
    /// Energy quadratic form `(c - 5ω/6) ∂_μλ₁`.
    pub energy: f64,
    pub krein_sign: KreinSign,
    /// A secondary eigenvalue came within 0.1 of the neutral level -12.
    pub secondary_near_neutral: bool,
}

/// The four critical rotation rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalRates {
    /// `k = 1` positive-side critical rate, exactly `99/2`.
    pub positive_k1: f64,
    /// `k = 2` positive-side critical rate, exactly `69/2`.
    pub positive_k2: f64,
    /// `k = 1` negative-side critical rate, exactly `-3`.
    pub negative_k1: f64,
    /// `k = 2` negative-side critical rate, the computed `g⁻¹(-12)`.
    pub negative_k2: f64,
    /// Upper edge of the unstable band: `max(positive_k1, positive_k2)`.
    pub overall_positive: f64,
    /// Lower edge of the unstable band: `g⁻¹(-12)`.
    pub overall_negative: f64,
}

/// Admissible `μ` intervals for non-resonant neutral speeds at `(k, ω)`.
///
/// * `ω ∈ (-3, 12]`: no non-resonant neutral speeds (empty).
/// * `ω ≤ -3`: `c ∈ [3 + ω, 0]`, i.e. `μ ∈ [3, -ω]`.
/// * `ω > 12`: `c ∈ [0, ω - 12]`, i.e. `μ ∈ [-ω, -12]`.
///
/// The resonant speed `c = c_ω = 5ω/6` never appears here: it corresponds to
/// `μ = c_ω - ω = -ω/6`, which lies inside the forbidden band for every `ω`
/// in the regimes above.
pub fn search_interval(_k: u32, omega: f64) -> Vec<(f64, f64)> {
    if omega > -3.0 && omega <= 12.0 {
        vec![]
    } else if omega <= -3.0 {
        vec![(3.0, -omega)]
    } else {
        vec![(-omega, -12.0)]
    }
}

/// `λ₁(μ, ω)` for the canonical mode of `k`, routing band-edge `μ` to the
/// analytic closed forms and nudging near-edge `μ` into the numeric domain.
pub fn lambda1(k: u32, omega: f64, mu: f64, config: &DiscretizationConfig) -> Result<f64> {
    if (mu - rayleigh::MU_BAND_LO).abs() < BOUNDARY_GUARD {
        if (12.0..=72.0).contains(&omega) {
            return Ok(rayleigh::analytic_lambda_at_mu_minus12(k, omega)?.0);
        }
        return numeric_lambda1(k, omega, rayleigh::MU_BAND_LO - 2.0 * BOUNDARY_GUARD, config);
    }
    if (mu - rayleigh::MU_BAND_HI).abs() < BOUNDARY_GUARD {
        if (-18.0..=-3.0).contains(&omega) {
            return Ok(rayleigh::analytic_lambda_at_mu3(k, omega)?.0);
        }
        return numeric_lambda1(k, omega, rayleigh::MU_BAND_HI + 2.0 * BOUNDARY_GUARD, config);
    }
    numeric_lambda1(k, omega, mu, config)
}

fn numeric_lambda1(k: u32, omega: f64, mu: f64, config: &DiscretizationConfig) -> Result<f64> {
    let mode = ModeSpec::canonical(k, omega, mu);
    Ok(rayleigh::principal_eigenvalue(&mode, config)?.lambda)
}

/// Golden-section maximization of `f` on `[a, b]` to tolerance `tol` in the
/// argument. Returns `(argmax, max)`.
fn golden_max(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Bisect `h(μ) = λ₁(μ, ω) + 12` to `1e-8` in `μ` on a sign-change bracket.
fn bisect_root(
    mut h: impl FnMut(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    mut ha: f64,
    mut hb: f64,
) -> Result<f64> {
    debug_assert!(ha * hb <= 0.0);
    for _ in 0..80 {
        if b - a < 1e-8 {
            break;
        }
        let m = 0.5 * (a + b);
        let hm = h(m)?;
        if hm == 0.0 {
            return Ok(m);
        }
        if ha * hm < 0.0 {
            b = m;
            hb = hm;
        } else {
            a = m;
            ha = hm;
        }
    }
    let _ = hb;
    Ok(0.5 * (a + b))
}

/// Find all neutral modes (roots of `λ₁(μ, ω) = -12`) for the canonical mode
/// of wavenumber `k`, ordered by `μ` ascending.
///
/// Roots are located by sign-bracketing on a grid (default step 0.25, with the
/// analytic band-edge values used at the interval endpoints) followed by
/// bisection to `1e-8` in `μ`. For the `k = 2` negative regime the argmax of
/// `λ̃₁` is inserted into the grid first, because the two roots there can be
/// arbitrarily close together near `ω = g⁻¹(-12)`.
pub fn neutral_mode_solve(
    k: u32,
    omega: f64,
    config: &DiscretizationConfig,
) -> Result<Vec<NeutralMode>> {
    let mut roots: Vec<f64> = Vec::new();
    for (a, b) in search_interval(k, omega) {
        if b - a < 1e-9 {
            continue;
        }
        let h = |mu: f64| -> Result<f64> { Ok(lambda1(k, omega, mu, config)? - NEUTRAL_LEVEL) };

        // Grid including both endpoints.
        let step: f64 = 0.25;
        let n = ((b - a) / step).ceil().max(8.0) as usize;
        let mut pts: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();

        if k == 2 && omega < -3.0 {
            // Insert the argmax of the curve so a narrow bump above -12 is
            // always bracketed on both sides.
            let (mu_star, _) = golden_max(
                |mu| lambda1(k, omega, mu, config).unwrap_or(f64::NEG_INFINITY),
                a + BOUNDARY_GUARD * 2.0,
                b,
                1e-7,
            );
            let pos = pts.partition_point(|&p| p < mu_star);
            pts.insert(pos, mu_star);
        }

        let vals: Vec<Result<f64>> = parallel::map(&pts, |&mu| h(mu));
        let mut prev: Option<(f64, f64)> = None;
        for (i, v) in vals.iter().enumerate() {
            let hv = match v {
                Ok(x) => *x,
                Err(_) => continue,
            };
            if hv == 0.0 {
                roots.push(pts[i]);
                prev = Some((pts[i], hv));
                continue;
            }
            if let Some((pm, hm)) = prev {
                if hm * hv < 0.0 {
                    let r = bisect_root(h, pm, pts[i], hm, hv)?;
                    roots.push(r);
                }
            }
            prev = Some((pts[i], hv));
        }
    }

    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots.dedup_by(|x, y| (*x - *y).abs() < 1e-6);

    roots
        .into_iter()
        .map(|mu| build_neutral_mode(k, omega, mu, config))
        .collect()
}

fn build_neutral_mode(
    k: u32,
    omega: f64,
    mu: f64,
    config: &DiscretizationConfig,
) -> Result<NeutralMode> {
    // Nudge a root hugging a band edge into the numeric domain for the
    // eigenfunction solve.
    let mut mu_eval = mu;
    if (mu_eval - rayleigh::MU_BAND_LO).abs() < 2.0 * BOUNDARY_GUARD {
        mu_eval = rayleigh::MU_BAND_LO - 2.0 * BOUNDARY_GUARD;
    } else if (mu_eval - rayleigh::MU_BAND_HI).abs() < 2.0 * BOUNDARY_GUARD {
        mu_eval = rayleigh::MU_BAND_HI + 2.0 * BOUNDARY_GUARD;
    }
    let mode = ModeSpec::canonical(k, omega, mu_eval);
    let sol = rayleigh::principal_eigenvalue(&mode, config)?;
    let dmu = rayleigh::dlambda_dmu(&mode, &sol)?;
    let c = omega + mu;
    let energy = (c - 5.0 * omega / 6.0) * dmu;
    let krein_sign = if dmu.abs() < 1e-6 {
        KreinSign::Degenerate
    } else if energy <= 1e-12 {
        KreinSign::Negative
    } else {
        KreinSign::Positive
    };
    let secondary_near_neutral = sol
        .lambda2
        .map(|l2| (l2 - NEUTRAL_LEVEL).abs() < 0.1)
        .unwrap_or(false);
    Ok(NeutralMode {
        c,
        k,
        omega,
        mu,
        eigenfunction: sol,
        dlambda_dmu: dmu,
        energy,
        krein_sign,
        secondary_near_neutral,
    })
}

/// `g(ω) = max_{μ ∈ [3, 183]} λ̃₁(μ, ω)` for `ω ∈ [-18, -3]`.
///
/// Coarse grid (step 0.5 on `[3, 10]`, step 5 on `[10, 183]`) followed by
/// golden-section refinement of the best bracket to `1e-7` in `μ`; the
/// endpoint `μ = 3` is evaluated analytically.
pub fn g_of_omega(omega: f64, config: &DiscretizationConfig) -> Result<f64> {
    if !(-18.0..=-3.0).contains(&omega) {
        return Err(Error::Domain(format!("omega = {omega} outside [-18, -3] for g")));
    }
    let mut grid: Vec<f64> = Vec::new();
    let mut mu = 3.0;
    while mu < 10.0 - 1e-12 {
        grid.push(mu);
        mu += 0.5;
    }
    mu = 10.0;
    while mu < G_MU_MAX - 1e-12 {
        grid.push(mu);
        mu += 5.0;
    }
    grid.push(G_MU_MAX);

    let vals: Vec<f64> = parallel::map(&grid, |&m| {
        lambda1(2, omega, m, config).unwrap_or(f64::NEG_INFINITY)
    });
    let (best, &fbest) = vals
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.partial_cmp(y.1).unwrap())
        .expect("nonempty grid");

    let lo = if best == 0 { grid[0] } else { grid[best - 1] };
    let hi = if best + 1 == grid.len() {
        grid[best]
    } else {
        grid[best + 1]
    };
    let (_, fmax) = golden_max(
        |m| lambda1(2, omega, m, config).unwrap_or(f64::NEG_INFINITY),
        lo.max(3.0 + 2.0 * BOUNDARY_GUARD),
        hi,
        1e-7,
    );
    Ok(fmax.max(fbest))
}

/// The negative critical rotation rate `g⁻¹(-12)`, by bisection on
/// `ω ∈ [-18, -3]` (valid because `g` is decreasing and continuous).
pub fn negative_critical_rate(config: &DiscretizationConfig) -> Result<f64> {
    let mut a = -18.0; // g(-18) = -6 > -12
    let mut b = -3.0; // g(-3) < -12
    while b - a > 1e-6 {
        let m = 0.5 * (a + b);
        if g_of_omega(m, config)? > NEUTRAL_LEVEL {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// `g⁻¹(-12)` computed once per process with the given configuration and
/// cached; later calls return the cached value regardless of `config`.
pub fn negative_critical_rate_cached(config: &DiscretizationConfig) -> Result<f64> {
    static CACHE: OnceLock<f64> = OnceLock::new();
    if let Some(&v) = CACHE.get() {
        return Ok(v);
    }
    let v = negative_critical_rate(config)?;
    Ok(*CACHE.get_or_init(|| v))
}

/// All four critical rotation rates.
pub fn critical_rates(config: &DiscretizationConfig) -> Result<CriticalRates> {
    let neg_k2 = negative_critical_rate_cached(config)?;
    Ok(CriticalRates {
        positive_k1: 49.5,
        positive_k2: 34.5,
        negative_k1: -3.0,
        negative_k2: neg_k2,
        overall_positive: 49.5,
        overall_negative: neg_k2,
    })
}

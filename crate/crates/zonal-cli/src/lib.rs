//! Command implementations for the `zonal-stability` CLI.
//!
//! Each `cmd_*` function returns the text it would print, so integration
//! tests can exercise the commands without spawning the binary.

pub mod planets;

use std::fmt::Write as _;

use zonal_core::basisfn;
use zonal_core::critical;
use zonal_core::rayleigh::{self, DiscretizationConfig, Parity};
use zonal_core::stability::{self, Overall, Verdict};

/// Resolve a [`DiscretizationConfig`] from (lowest to highest precedence)
/// built-in defaults, an optional `key=value` config file, and flag overrides.
#[derive(Debug, Default, Clone)]
pub struct ConfigOverrides {
    pub basis_size: Option<usize>,
    pub quadrature_nodes: Option<usize>,
    pub convergence_tol: Option<f64>,
    pub max_refinements: Option<u32>,
}

pub fn resolve_config(
    file: Option<&str>,
    overrides: &ConfigOverrides,
) -> anyhow::Result<DiscretizationConfig> {
    let mut cfg = DiscretizationConfig::default();
    if let Some(path) = file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("cannot read config file {path}: {e}"))?;
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow::anyhow!("{path}:{}: expected key=value", no + 1))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "basis_size" => cfg.basis_size = value.parse()?,
                "quadrature_nodes" => cfg.quadrature_nodes = Some(value.parse()?),
                "convergence_tol" => cfg.convergence_tol = value.parse()?,
                "max_refinements" => cfg.max_refinements = value.parse()?,
                _ => anyhow::bail!("{path}:{}: unknown key {key:?}", no + 1),
            }
        }
    }
    if let Some(v) = overrides.basis_size {
        cfg.basis_size = v;
    }
    if let Some(v) = overrides.quadrature_nodes {
        cfg.quadrature_nodes = Some(v);
    }
    if let Some(v) = overrides.convergence_tol {
        cfg.convergence_tol = v;
    }
    if let Some(v) = overrides.max_refinements {
        cfg.max_refinements = v;
    }
    Ok(cfg)
}

fn verdict_text(v: Verdict) -> &'static str {
    match v {
        Verdict::Unstable => "unstable",
        Verdict::Stable => "stable",
    }
}

/// `classify --omega <ω> [--json]`.
pub fn cmd_classify(omega: f64, json: bool, config: &DiscretizationConfig) -> anyhow::Result<String> {
    let report = stability::classify(omega, config)?;
    if json {
        return Ok(serde_json::to_string_pretty(&report)?);
    }
    let mut out = String::new();
    writeln!(out, "omega = {omega}")?;
    let headline = match report.overall {
        Overall::SpectrallyStable if omega <= -18.0 || omega >= 72.0 => {
            "spectrally stable (Rayleigh criterion)".to_string()
        }
        Overall::SpectrallyStable => "spectrally stable".to_string(),
        Overall::LinearlyUnstable => {
            let which = match (report.verdict_k1, report.verdict_k2) {
                (Verdict::Unstable, Verdict::Unstable) => "k=1 and k=2",
                (Verdict::Unstable, Verdict::Stable) => "k=1",
                _ => "k=2",
            };
            format!("linearly unstable ({which})")
        }
    };
    writeln!(out, "{headline}")?;
    writeln!(
        out,
        "k=1: {}   k=2: {}",
        verdict_text(report.verdict_k1),
        verdict_text(report.verdict_k2)
    )?;
    writeln!(out, "dim(E^u) = dim(E^s) = {}", report.dim_eu)?;
    for m in &report.neutral_modes {
        writeln!(
            out,
            "neutral mode: k={} mu={:.8} c={:.8} energy={:.6e} krein={:?}",
            m.k, m.mu, m.c, m.energy, m.krein_sign
        )?;
    }
    Ok(out)
}

/// Parse a `a:b:step` grid specification (inclusive of `b` up to rounding).
pub fn parse_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        anyhow::bail!("grid must be a:b:step, got {spec:?}");
    }
    let a: f64 = parts[0].parse()?;
    let b: f64 = parts[1].parse()?;
    let step: f64 = parts[2].parse()?;
    if !(step > 0.0) {
        anyhow::bail!("grid step must be positive");
    }
    let mut grid = Vec::new();
    let n = ((b - a) / step + 1e-9).floor() as i64;
    for i in 0..=n.max(-1) {
        grid.push(a + step * i as f64);
    }
    Ok(grid)
}

/// `curve --k <k> --omega <ω> --mu a:b:step` — returns the CSV text.
pub fn cmd_curve(
    k: u32,
    omega: f64,
    grid: &[f64],
    config: &DiscretizationConfig,
) -> anyhow::Result<String> {
    let points = rayleigh::eigenvalue_curve(k, Parity::canonical(k), omega, grid, config);
    let mut out = String::from("mu,omega,lambda1,dlambda_dmu,converged\n");
    for p in &points {
        let num = |x: f64| {
            if x.is_nan() {
                "nan".to_string()
            } else {
                format!("{x}")
            }
        };
        writeln!(
            out,
            "{},{},{},{},{}",
            num(p.mu),
            num(p.omega),
            num(p.lambda1),
            num(p.dlambda_dmu),
            p.converged
        )?;
    }
    Ok(out)
}

/// `critical [--mode all|k1+|k2+|k1-|k2-] [--json]`.
pub fn cmd_critical(mode: &str, json: bool, config: &DiscretizationConfig) -> anyhow::Result<String> {
    if !matches!(mode, "all" | "k1+" | "k2+" | "k1-" | "k2-") {
        anyhow::bail!("unknown mode {mode:?} (expected all|k1+|k2+|k1-|k2-)");
    }
    let rates = critical::critical_rates(config)?;
    if json {
        return Ok(serde_json::to_string_pretty(&rates)?);
    }
    let mut out = String::new();
    match mode {
        "all" => {
            writeln!(out, "k1+ (99/2):    {}", rates.positive_k1)?;
            writeln!(out, "k2+ (69/2):    {}", rates.positive_k2)?;
            writeln!(out, "k1- (-3):      {}", rates.negative_k1)?;
            writeln!(
                out,
                "k2- g^-1(-12): {:.6}  (bracket (-16.07355, -16.07354))",
                rates.negative_k2
            )?;
            writeln!(
                out,
                "unstable band: ({:.6}, {})",
                rates.overall_negative, rates.overall_positive
            )?;
        }
        "k1+" => writeln!(out, "{}", rates.positive_k1)?,
        "k2+" => writeln!(out, "{}", rates.positive_k2)?,
        "k1-" => writeln!(out, "{}", rates.negative_k1)?,
        "k2-" => writeln!(out, "{:.6}", rates.negative_k2)?,
        other => anyhow::bail!("unknown mode {other:?} (expected all|k1+|k2+|k1-|k2-)"),
    }
    Ok(out)
}

/// `spectrum --k <k> --omega <ω>` — SpectralPicture as JSON.
pub fn cmd_spectrum(k: i32, omega: f64, config: &DiscretizationConfig) -> anyhow::Result<String> {
    if k == 0 {
        anyhow::bail!("k must be nonzero");
    }
    let pic = stability::spectral_picture(k, omega, config)?;
    Ok(serde_json::to_string_pretty(&pic)?)
}

/// `planets [--json]` — the built-in dataset with recomputed ω and verdicts.
pub fn cmd_planets(json: bool, config: &DiscretizationConfig) -> anyhow::Result<String> {
    let rows = planets::dataset();
    if json {
        #[derive(serde::Serialize)]
        struct Row<'a> {
            #[serde(flatten)]
            record: &'a planets::PlanetRecord,
            omega_recomputed: f64,
            verdict: Overall,
        }
        let mut out = Vec::new();
        for r in &rows {
            out.push(Row {
                record: r,
                omega_recomputed: r.recompute_omega(),
                verdict: stability::classify(r.omega_nondim, config)?.overall,
            });
        }
        return Ok(serde_json::to_string_pretty(&out)?);
    }
    let mut out = String::new();
    writeln!(
        out,
        "{:<12} {:>10} {:>13} {:>9} {:>8} {:>10}  verdict",
        "body", "R' (km)", "omega' (rad/s)", "U' (m/s)", "omega", "recomputed"
    )?;
    for r in &rows {
        let verdict = match stability::classify(r.omega_nondim, config)?.overall {
            Overall::LinearlyUnstable => "linearly unstable",
            Overall::SpectrallyStable => "spectrally stable",
        };
        writeln!(
            out,
            "{:<12} {:>10} {:>13e} {:>9} {:>8} {:>10.4}  {verdict}",
            r.name, r.radius_km, r.spin_rad_per_s, r.zonal_speed_m_per_s, r.omega_nondim,
            r.recompute_omega()
        )?;
    }
    Ok(out)
}

/// One self-check line: name, target, computed, tolerance.
pub struct SelfCheck {
    pub name: &'static str,
    pub target: f64,
    pub computed: f64,
    pub tol: f64,
}

impl SelfCheck {
    pub fn passed(&self) -> bool {
        (self.computed - self.target).abs() <= self.tol
    }
}

/// Run the closed-form and energy-form cross-validations.
pub fn run_selfchecks() -> anyhow::Result<Vec<SelfCheck>> {
    let mut checks = Vec::new();
    let mut anchor = |name: &'static str, computed: f64, target: f64, tol: f64| {
        checks.push(SelfCheck {
            name,
            target,
            computed,
            tol,
        });
    };

    anchor(
        "lambda1(-12, 99/2)",
        rayleigh::analytic_lambda_at_mu_minus12(1, 49.5)?.0,
        -12.0,
        1e-12,
    );
    anchor(
        "lambda1(-12, 12)",
        rayleigh::analytic_lambda_at_mu_minus12(1, 12.0)?.0,
        -20.0,
        1e-12,
    );
    anchor(
        "lambda1(-12, 72)",
        rayleigh::analytic_lambda_at_mu_minus12(1, 72.0)?.0,
        -6.0,
        1e-12,
    );
    anchor(
        "tilde-lambda1(-12, 69/2)",
        rayleigh::analytic_lambda_at_mu_minus12(2, 34.5)?.0,
        -12.0,
        1e-12,
    );
    anchor(
        "lambda1(3, -3)",
        rayleigh::analytic_lambda_at_mu3(1, -3.0)?.0,
        -12.0,
        1e-12,
    );
    anchor(
        "lambda1(3, -18)",
        rayleigh::analytic_lambda_at_mu3(1, -18.0)?.0,
        -6.0,
        1e-12,
    );
    anchor(
        "tilde-lambda1(3, -3)",
        rayleigh::analytic_lambda_at_mu3(2, -3.0)?.0,
        -20.0,
        1e-12,
    );
    anchor(
        "tilde-lambda1(3, -18)",
        rayleigh::analytic_lambda_at_mu3(2, -18.0)?.0,
        -6.0,
        1e-12,
    );

    let quad = basisfn::gauss_legendre(64);
    anchor(
        "energy form P3^2 at (c=75/2, omega=99/2)",
        stability::energy_form(
            37.5,
            1,
            49.5,
            |s| basisfn::assoc_legendre(3, 2, s).unwrap(),
            &quad,
        )?,
        -67.5,
        1e-8,
    );
    anchor(
        "energy form P3^3 at (c=45/2, omega=69/2)",
        stability::energy_form(
            22.5,
            2,
            34.5,
            |s| basisfn::assoc_legendre(3, 3, s).unwrap(),
            &quad,
        )?,
        -575.0,
        1e-8,
    );
    anchor(
        "energy form sign(s) s^2 sqrt(1-s^2) at (c=0, omega=-3)",
        stability::energy_form(
            0.0,
            1,
            -3.0,
            |s| s.signum() * s * s * (1.0 - s * s).sqrt(),
            &quad,
        )?,
        -4.0 / 45.0,
        1e-8,
    );
    Ok(checks)
}

/// `selfcheck` — returns (report text, all passed).
pub fn cmd_selfcheck() -> anyhow::Result<(String, bool)> {
    let checks = run_selfchecks()?;
    let mut out = String::new();
    let mut ok = true;
    for c in &checks {
        let delta = c.computed - c.target;
        let status = if c.passed() { "ok" } else { "FAIL" };
        ok &= c.passed();
        writeln!(
            out,
            "[{status}] {:<48} target {:>12.8}  delta {:+.3e}",
            c.name, c.target, delta
        )?;
    }
    writeln!(out, "{}", if ok { "all checks passed" } else { "CHECKS FAILED" })?;
    Ok((out, ok))
}

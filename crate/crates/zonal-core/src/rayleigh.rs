//! The parameter-dependent Rayleigh eigenvalue problem
//!
//! ```text
//! ((1 - s^2) Φ')' - k^2/(1 - s^2) Φ - (2ω + 12μ)/(15s^2 - 3 + μ) Φ = λ Φ
//! ```
//!
//! solved numerically by a parity-restricted Galerkin discretization in the
//! unit-normalized associated-Legendre basis (the Laplace part is exactly
//! diagonal, `-l(l+1)`; only the rational potential needs quadrature), and
//! analytically at the boundary shifts `μ = -12` and `μ = 3` where the
//! substitution `Φ = (1-s^2)^{a/2}·φ` (resp. `|s|^a`-type) reduces the
//! problem to a Gegenbauer equation.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::basisfn::{self, QuadratureRule};
use crate::error::{Error, Result};
use crate::parallel;

/// Lower edge of the forbidden resonance band in `μ`.
pub const MU_BAND_LO: f64 = -12.0;
/// Upper edge of the forbidden resonance band in `μ`.
pub const MU_BAND_HI: f64 = 3.0;
/// The numeric path requires `μ` at least this far from a band edge;
/// exactly at the edge the analytic closed forms apply.
pub const BOUNDARY_GUARD: f64 = 1e-6;

/// Parity of the eigenfunction `Φ` in `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    /// The stability-relevant parity subspace for wavenumber `k`:
    /// odd for `k = 1`, even for `k = 2` (and any other `k`).
    pub fn canonical(k: u32) -> Self {
        if k == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// One Rayleigh problem instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    /// Azimuthal wavenumber (stability-relevant: 1 or 2).
    pub k: u32,
    /// Parity of `Φ` in `s`.
    pub parity: Parity,
    /// Rotation rate.
    pub omega: f64,
    /// Spectral shift `μ = c - ω`.
    pub mu: f64,
}

impl ModeSpec {
    pub fn new(k: u32, parity: Parity, omega: f64, mu: f64) -> Self {
        Self {
            k,
            parity,
            omega,
            mu,
        }
    }

    /// Canonical stability mode for wavenumber `k`.
    pub fn canonical(k: u32, omega: f64, mu: f64) -> Self {
        Self::new(k, Parity::canonical(k), omega, mu)
    }

    /// Check that `μ` is admissible for the numeric path: outside the closed
    /// band `[-12, 3]` and at least [`BOUNDARY_GUARD`] away from its edges.
    pub fn check_numeric_mu(&self) -> Result<()> {
        if self.mu > MU_BAND_LO && self.mu < MU_BAND_HI {
            return Err(Error::Resonance { mu: self.mu });
        }
        if (self.mu - MU_BAND_LO).abs() < BOUNDARY_GUARD
            || (self.mu - MU_BAND_HI).abs() < BOUNDARY_GUARD
        {
            return Err(Error::Domain(format!(
                "mu = {} within {BOUNDARY_GUARD} of a band edge; use the analytic closed forms",
                self.mu
            )));
        }
        Ok(())
    }
}

/// Galerkin discretization parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationConfig {
    /// Initial number of retained basis degrees (doubles on refinement).
    pub basis_size: usize,
    /// Quadrature node count; `None` = `4N + 16` for basis size `N`
    /// (quadrupled within 0.05 of a band edge).
    pub quadrature_nodes: Option<usize>,
    /// Convergence declared when successive principal eigenvalues differ by
    /// less than this.
    pub convergence_tol: f64,
    /// Maximum number of basis-size doublings.
    pub max_refinements: u32,
}

impl Default for DiscretizationConfig {
    fn default() -> Self {
        Self {
            basis_size: 32,
            quadrature_nodes: None,
            convergence_tol: 1e-9,
            max_refinements: 4, // 32 -> 64 -> 128 -> 256 -> 512
        }
    }
}

impl DiscretizationConfig {
    fn validate(&self) -> Result<()> {
        if self.basis_size < 8 {
            return Err(Error::Config(format!(
                "basis_size {} too small (minimum 8)",
                self.basis_size
            )));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::Config("convergence_tol must be positive".into()));
        }
        Ok(())
    }

    fn quad_nodes_for(&self, n: usize, mu: f64) -> usize {
        match self.quadrature_nodes {
            Some(q) => q,
            None => {
                let base = 4 * n + 16;
                // Eigenfunctions develop boundary-layer behavior near the band
                // edges; double the node count twice there.
                if (mu - MU_BAND_LO).abs() < 0.05 || (mu - MU_BAND_HI).abs() < 0.05 {
                    4 * base
                } else {
                    base
                }
            }
        }
    }
}

/// An eigenvalue with its eigenfunction expansion `Φ = Σ coeffs[i] P̂_{l_i}^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSolution {
    pub lambda: f64,
    /// Expansion coefficients in the unit-normalized basis (unit 2-norm, so
    /// `‖Φ‖_{L²(-1,1)} = 1`).
    pub coeffs: Vec<f64>,
    /// Basis degrees `l_i` matching `coeffs`.
    pub degrees: Vec<u32>,
    /// Wavenumber of the basis.
    pub k: u32,
    /// `‖AΦ - λΦ‖₂` on the discretized problem.
    pub residual: f64,
    pub converged: bool,
    /// Gap to the next eigenvalue was below `10 × convergence_tol`.
    pub degenerate: bool,
    /// Second-largest eigenvalue of the final discretization.
    pub lambda2: Option<f64>,
}

impl EigenSolution {
    /// Evaluate the eigenfunction at `s`.
    pub fn eval(&self, s: f64) -> f64 {
        self.degrees
            .iter()
            .zip(&self.coeffs)
            .map(|(&l, &c)| {
                let nrm = basisfn::legendre_norm_sq(l, self.k).expect("valid degrees").sqrt();
                c * basisfn::assoc_legendre(l, self.k, s).expect("|s| <= 1") / nrm
            })
            .sum()
    }
}

/// Basis degrees for wavenumber `k` and parity: the first `n` degrees
/// `l >= max(k, 2)` with `(-1)^{l+k}` matching the parity (the space excludes
/// the `l = 1` harmonics by angular-momentum conservation).
pub fn basis_degrees(k: u32, parity: Parity, n: usize) -> Vec<u32> {
    let want_odd = matches!(parity, Parity::Odd);
    let mut l = k.max(2);
    if (((l + k) % 2) == 1) != want_odd {
        l += 1;
    }
    (0..n).map(|i| l + 2 * i as u32).collect()
}

/// Values of the unit-normalized basis functions at the quadrature nodes:
/// `out[j][i] = P̂_{degrees[i]}^k(nodes[j])`, computed by one upward
/// recurrence per node.
pub(crate) fn basis_values(degrees: &[u32], k: u32, nodes: &[f64]) -> Vec<Vec<f64>> {
    let lmax = *degrees.last().expect("nonempty basis");
    let norms: Vec<f64> = degrees
        .iter()
        .map(|&l| basisfn::legendre_norm_sq(l, k).expect("k <= l").sqrt())
        .collect();
    nodes
        .iter()
        .map(|&s| {
            let omss = (1.0 - s) * (1.0 + s);
            let mut pkk = 1.0;
            for j in 1..=k {
                pkk *= -((2 * j - 1) as f64);
            }
            pkk *= omss.powf(k as f64 / 2.0);
            let mut row = Vec::with_capacity(degrees.len());
            let mut idx = 0;
            let mut push = |l: u32, v: f64, idx: &mut usize| {
                if *idx < degrees.len() && degrees[*idx] == l {
                    row.push(v / norms[*idx]);
                    *idx += 1;
                }
            };
            let mut pm2 = pkk;
            push(k, pm2, &mut idx);
            if lmax > k {
                let mut pm1 = (2 * k + 1) as f64 * s * pkk;
                push(k + 1, pm1, &mut idx);
                for ll in (k + 2)..=lmax {
                    let llf = ll as f64;
                    let kf = k as f64;
                    let p = ((2.0 * llf - 1.0) * s * pm1 - (llf + kf - 1.0) * pm2) / (llf - kf);
                    pm2 = pm1;
                    pm1 = p;
                    push(ll, p, &mut idx);
                }
            }
            row
        })
        .collect()
}

/// The rational potential `V(s) = (2ω + 12μ)/(15s² - 3 + μ)`.
fn potential(omega: f64, mu: f64, s: f64) -> f64 {
    (2.0 * omega + 12.0 * mu) / (15.0 * s * s - 3.0 + mu)
}

/// Assemble the symmetric Galerkin matrix
/// `A_{lm} = -l(l+1) δ_{lm} - ∫ V(s) P̂_l^k P̂_m^k ds`
/// on `basis_size` parity-matching degrees.
pub fn assemble(mode: &ModeSpec, config: &DiscretizationConfig) -> Result<DMatrix<f64>> {
    config.validate()?;
    mode.check_numeric_mu()?;
    let degrees = basis_degrees(mode.k, mode.parity, config.basis_size);
    let quad = basisfn::gauss_legendre(config.quad_nodes_for(config.basis_size, mode.mu));
    Ok(assemble_on(mode, &degrees, &quad))
}

fn assemble_on(mode: &ModeSpec, degrees: &[u32], quad: &QuadratureRule) -> DMatrix<f64> {
    let nb = degrees.len();
    let vals = basis_values(degrees, mode.k, &quad.nodes);
    let mut a = DMatrix::zeros(nb, nb);
    for (j, (&s, &w)) in quad.nodes.iter().zip(&quad.weights).enumerate() {
        let v = w * potential(mode.omega, mode.mu, s);
        let row = &vals[j];
        for i in 0..nb {
            let vi = v * row[i];
            for m in i..nb {
                a[(i, m)] -= vi * row[m];
            }
        }
    }
    for i in 0..nb {
        for m in 0..i {
            a[(i, m)] = a[(m, i)];
        }
        let l = degrees[i] as f64;
        a[(i, i)] -= l * (l + 1.0);
    }
    a
}

/// Principal (maximal) eigenvalue and eigenvector at one basis size.
fn solve_at(
    mode: &ModeSpec,
    config: &DiscretizationConfig,
    n: usize,
) -> (f64, DVector<f64>, Vec<u32>, f64, bool, f64) {
    let degrees = basis_degrees(mode.k, mode.parity, n);
    let quad = basisfn::gauss_legendre(config.quad_nodes_for(n, mode.mu));
    let a = assemble_on(mode, &degrees, &quad);
    let eig = a.clone().symmetric_eigen();
    // Candidates within 10×tol of the maximum; tie-break by largest
    // |coefficient| on the lowest basis degree.
    let lam_max = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let gap_tol = 10.0 * config.convergence_tol;
    let mut best: Option<usize> = None;
    let mut second = f64::NEG_INFINITY;
    for (i, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam_max - lam < gap_tol {
            let better = match best {
                None => true,
                Some(b) => {
                    eig.eigenvectors[(0, i)].abs() > eig.eigenvectors[(0, b)].abs()
                }
            };
            if better {
                if let Some(b) = best {
                    second = second.max(eig.eigenvalues[b]);
                }
                best = Some(i);
            } else {
                second = second.max(lam);
            }
        } else if lam > second {
            second = lam;
        }
    }
    let bi = best.expect("nonempty spectrum");
    let lambda = eig.eigenvalues[bi];
    let mut v: DVector<f64> = eig.eigenvectors.column(bi).into_owned();
    v /= v.norm();
    // Deterministic sign: first coefficient of non-negligible size positive.
    if let Some(c) = v.iter().find(|c| c.abs() > 1e-12) {
        if *c < 0.0 {
            v = -v;
        }
    }
    let residual = (&a * &v - lambda * &v).norm();
    let degenerate = second.is_finite() && lambda - second < gap_tol;
    (lambda, v, degrees, residual, degenerate, second)
}

/// Principal eigenvalue of the Rayleigh problem, refined by basis-size
/// doubling until `convergence_tol` is met or `max_refinements` exhausted.
pub fn principal_eigenvalue(mode: &ModeSpec, config: &DiscretizationConfig) -> Result<EigenSolution> {
    config.validate()?;
    mode.check_numeric_mu()?;
    let mut n = config.basis_size;
    let mut prev: Option<f64> = None;
    let mut converged = false;
    let mut last = solve_at(mode, config, n);
    for _ in 0..config.max_refinements {
        if let Some(p) = prev {
            if (last.0 - p).abs() < config.convergence_tol {
                converged = true;
                break;
            }
        }
        prev = Some(last.0);
        n *= 2;
        last = solve_at(mode, config, n);
    }
    if let Some(p) = prev {
        if !converged && (last.0 - p).abs() < config.convergence_tol {
            converged = true;
        }
    }
    let (lambda, v, degrees, residual, degenerate, second) = last;
    Ok(EigenSolution {
        lambda,
        coeffs: v.iter().cloned().collect(),
        degrees,
        k: mode.k,
        residual,
        converged,
        degenerate,
        lambda2: second.is_finite().then_some(second),
    })
}

/// Hellmann–Feynman derivative
/// `∂_μ λ = ∫ (-12(15s²-3) + 2ω)/(15s²-3+μ)² |Φ|² ds`
/// for a normalized eigenfunction.
pub fn dlambda_dmu(mode: &ModeSpec, solution: &EigenSolution) -> Result<f64> {
    mode.check_numeric_mu()?;
    Ok(hellmann_feynman(mode, solution, |s, mu, omega| {
        let d = 15.0 * s * s - 3.0 + mu;
        (-12.0 * (15.0 * s * s - 3.0) + 2.0 * omega) / (d * d)
    }))
}

/// Companion derivative `∂_ω λ = -∫ 2/(15s²-3+μ) |Φ|² ds`.
pub fn dlambda_domega(mode: &ModeSpec, solution: &EigenSolution) -> Result<f64> {
    mode.check_numeric_mu()?;
    Ok(hellmann_feynman(mode, solution, |s, mu, _| {
        -2.0 / (15.0 * s * s - 3.0 + mu)
    }))
}

fn hellmann_feynman(
    mode: &ModeSpec,
    solution: &EigenSolution,
    integrand: impl Fn(f64, f64, f64) -> f64,
) -> f64 {
    let n = solution.degrees.len();
    let quad = basisfn::gauss_legendre(
        DiscretizationConfig::default().quad_nodes_for(n, mode.mu),
    );
    let vals = basis_values(&solution.degrees, mode.k, &quad.nodes);
    quad.nodes
        .iter()
        .zip(&quad.weights)
        .enumerate()
        .map(|(j, (&s, &w))| {
            let phi: f64 = vals[j]
                .iter()
                .zip(&solution.coeffs)
                .map(|(b, c)| b * c)
                .sum();
            w * integrand(s, mode.mu, mode.omega) * phi * phi
        })
        .sum()
}

/// One point of an eigenvalue curve `μ ↦ (λ₁, ∂λ₁/∂μ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub mu: f64,
    pub omega: f64,
    pub lambda1: f64,
    pub dlambda_dmu: f64,
    pub converged: bool,
    /// Present when the point failed entirely (λ fields are NaN then).
    pub error: Option<String>,
}

fn curve_point(k: u32, parity: Parity, omega: f64, mu: f64, config: &DiscretizationConfig) -> CurvePoint {
    let mode = ModeSpec::new(k, parity, omega, mu);
    match principal_eigenvalue(&mode, config)
        .and_then(|sol| dlambda_dmu(&mode, &sol).map(|d| (sol, d)))
    {
        Ok((sol, d)) => CurvePoint {
            mu,
            omega,
            lambda1: sol.lambda,
            dlambda_dmu: d,
            converged: sol.converged,
            error: None,
        },
        Err(e) => CurvePoint {
            mu,
            omega,
            lambda1: f64::NAN,
            dlambda_dmu: f64::NAN,
            converged: false,
            error: Some(e.to_string()),
        },
    }
}

/// Principal-eigenvalue curve over a `μ`-grid (data-parallel).
pub fn eigenvalue_curve(
    k: u32,
    parity: Parity,
    omega: f64,
    mu_grid: &[f64],
    config: &DiscretizationConfig,
) -> Vec<CurvePoint> {
    parallel::map(mu_grid, |&mu| curve_point(k, parity, omega, mu, config))
}

/// Sequential reference implementation of [`eigenvalue_curve`].
pub fn eigenvalue_curve_seq(
    k: u32,
    parity: Parity,
    omega: f64,
    mu_grid: &[f64],
    config: &DiscretizationConfig,
) -> Vec<CurvePoint> {
    parallel::map_seq(mu_grid, |&mu| curve_point(k, parity, omega, mu, config))
}

/// Closed-form eigenfunction descriptor for the analytic boundary values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormEigenfunction {
    /// Human-readable form, e.g. `(1-s^2)^(a/2) * s`.
    pub form: String,
    /// The exponent `a` appearing in the form.
    pub exponent: f64,
}

/// Closed-form principal eigenvalue at `μ = -12` for `ω ∈ [12, 72]`:
/// `λ₁ = -(1+q)(2+q)` with `q = sqrt(1 - (2ω-144)/15)` for `k = 1`,
/// `λ̃₁ = -p(1+p)` with `p = sqrt(4 - (2ω-144)/15)` for `k = 2`.
pub fn analytic_lambda_at_mu_minus12(k: u32, omega: f64) -> Result<(f64, ClosedFormEigenfunction)> {
    if !(12.0..=72.0).contains(&omega) {
        return Err(Error::Domain(format!(
            "omega = {omega} outside [12, 72] for the mu = -12 closed form"
        )));
    }
    let t = (2.0 * omega - 144.0) / 15.0;
    match k {
        1 => {
            let q = (1.0 - t).sqrt();
            Ok((
                -(1.0 + q) * (2.0 + q),
                ClosedFormEigenfunction {
                    form: "(1-s^2)^(a/2) * s".into(),
                    exponent: q,
                },
            ))
        }
        2 => {
            let p = (4.0 - t).sqrt();
            Ok((
                -p * (1.0 + p),
                ClosedFormEigenfunction {
                    form: "(1-s^2)^(a/2)".into(),
                    exponent: p,
                },
            ))
        }
        _ => Err(Error::Domain(format!("k = {k} must be 1 or 2"))),
    }
}

/// Closed-form principal eigenvalue at `μ = 3` for `ω ∈ [-18, -3]`:
/// `λ₁ = -(2ω+96)/15 - 2 sqrt((8ω+159)/15)` for `k = 1`;
/// `λ̃₁ = -(2ω+171)/15 - 3 sqrt((8ω+159)/15)` for `k = 2` and `ω > -18`,
/// with the lift-up value `λ̃₁(3, -18) = -6` exactly at the left endpoint.
pub fn analytic_lambda_at_mu3(k: u32, omega: f64) -> Result<(f64, ClosedFormEigenfunction)> {
    if !(-18.0..=-3.0).contains(&omega) {
        return Err(Error::Domain(format!(
            "omega = {omega} outside [-18, -3] for the mu = 3 closed form"
        )));
    }
    let r = ((8.0 * omega + 159.0) / 15.0).sqrt();
    // Indicial exponent of the |s|^a behavior at s = 0.
    let a = 0.5 * (1.0 + r);
    match k {
        1 => Ok((
            -(2.0 * omega + 96.0) / 15.0 - 2.0 * r,
            ClosedFormEigenfunction {
                form: "sign(s) * |s|^a * (1-s^2)^(1/2)".into(),
                exponent: a,
            },
        )),
        2 => {
            if omega == -18.0 {
                // Lift-up jump: the formula limit is -12 but the principal
                // eigenvalue at omega = -18 is -6.
                Ok((
                    -6.0,
                    ClosedFormEigenfunction {
                        form: "lift-up endpoint eigenfunction".into(),
                        exponent: a,
                    },
                ))
            } else {
                Ok((
                    -(2.0 * omega + 171.0) / 15.0 - 3.0 * r,
                    ClosedFormEigenfunction {
                        form: "|s|^a * (1-s^2)".into(),
                        exponent: a,
                    },
                ))
            }
        }
        _ => Err(Error::Domain(format!("k = {k} must be 1 or 2"))),
    }
}

/// Central second finite difference
/// `(λ(μ+h) + λ(μ-h) - 2λ(μ)) / h²` of the principal eigenvalue in `μ`.
pub fn second_mu_derivative_fd(
    k: u32,
    omega: f64,
    mu_center: f64,
    step: f64,
    config: &DiscretizationConfig,
) -> Result<f64> {
    let parity = Parity::canonical(k);
    let lam = |mu: f64| -> Result<f64> {
        Ok(principal_eigenvalue(&ModeSpec::new(k, parity, omega, mu), config)?.lambda)
    };
    Ok((lam(mu_center + step)? + lam(mu_center - step)? - 2.0 * lam(mu_center)?) / (step * step))
}

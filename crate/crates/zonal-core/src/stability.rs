//! Index-formula bookkeeping, energy quadratic forms, stability
//! classification over `ω`, exponential-trichotomy dimensions, spectral
//! pictures, and a non-self-adjoint discretization counting unstable
//! eigenvalues directly.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basisfn::{self, QuadratureRule};
use crate::critical::{self, KreinSign, NeutralMode};
use crate::error::{Error, Result};
use crate::rayleigh::{self, DiscretizationConfig, Parity};

/// Hamiltonian index counts on the parity subspace of one wavenumber.
///
/// The identity `k_i_le0 + k_0_le0 + k_c_plus_k_r = n_minus_l` holds, with
/// `n⁻(L_k) = 1` for `(k=1, odd)` and `(k=2, even)` and `0` for `|k| ≥ 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexCounts {
    /// `n⁻(L_k)` on the parity subspace.
    pub n_minus_l: u32,
    /// Neutral modes with non-positive energy form.
    pub k_i_le0: u32,
    /// Kernel contribution (0 on `ω ∈ (-18, 72)`).
    pub k_0_le0: u32,
    /// Unstable-pair count `k_c + k_r`, from the index identity.
    pub k_c_plus_k_r: u32,
    /// A degenerate Krein sign made `k_i_le0` indeterminate.
    pub indeterminate: bool,
}

/// Per-mode stability verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Unstable,
    Stable,
}

/// Overall classification of the 3-jet at one `ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Overall {
    LinearlyUnstable,
    SpectrallyStable,
}

/// Full per-`ω` stability report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub omega: f64,
    pub verdict_k1: Verdict,
    pub verdict_k2: Verdict,
    pub overall: Overall,
    pub index_k1: IndexCounts,
    pub index_k2: IndexCounts,
    pub dim_eu: u32,
    pub dim_es: u32,
    pub neutral_modes: Vec<NeutralMode>,
}

/// Imaginary-axis spectral picture of the linearized operator on one
/// Fourier mode. Purely imaginary quantities are stored as their imaginary
/// parts (e.g. `embedded_eigenvalue = kω/6` stands for `i·kω/6`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralPicture {
    pub k: i32,
    pub omega: f64,
    /// Endpoints of the essential spectrum `ik·[-3, 12]`.
    pub essential_interval: (f64, f64),
    /// `kω/6`, present iff `ω ∈ (-18, 72)` and `|k| ≤ 3`.
    pub embedded_eigenvalue: Option<f64>,
    /// Isolated imaginary eigenvalues: `-kμ_j` from the neutral modes, plus
    /// `kω/6` when `ω ∉ [-18, 72]` and `|k| ≤ 3`.
    pub isolated_imaginary: Vec<f64>,
    /// Rotational pair `±ω` (full operator, `|k| = 1`, `ω ≠ 0`).
    pub rotational_pair: Option<(f64, f64)>,
    /// Eigenfunction combination carrying the rotational pair.
    pub rotational_eigenfunction: Option<String>,
    /// At `ω = 0` the rotational pair degenerates into a generalized kernel.
    pub rotational_kernel_degenerate: bool,
    /// Number of unstable eigenvalues (`Re > 0`) of the discretized operator.
    pub unstable_count: usize,
}

/// Filter thresholds for [`unstable_spectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnstableFilter {
    /// Minimum real part for a genuine unstable eigenvalue.
    pub re_floor: f64,
    /// Maximum drift under basis doubling `N → 2N`.
    pub persistence_tol: f64,
}

impl Default for UnstableFilter {
    fn default() -> Self {
        Self {
            re_floor: 1e-4,
            persistence_tol: 1e-3,
        }
    }
}

/// Energy quadratic form
/// `⟨L_k Υ, Υ⟩ = (c - 5ω/6) ∫ (-12(15s²-3) + 2ω)/(15s²-3+μ)² |Φ|² ds`
/// with `μ = c - ω`, evaluated by quadrature.
///
/// The integrand may have a cancelling singularity (e.g. `μ = -12` with
/// `Φ ∝ (1-s²)`-type factors, or `μ = 3` with `Φ ∝ s²`-type factors); the
/// quadrature nodes avoid the singular points, and a non-finite result is
/// reported as a singular-integrand error.
pub fn energy_form(
    c: f64,
    _k: u32,
    omega: f64,
    phi: impl Fn(f64) -> f64,
    quad: &QuadratureRule,
) -> Result<f64> {
    let mu = c - omega;
    let integral = quad.integrate(|s| {
        let d = 15.0 * s * s - 3.0 + mu;
        let p = phi(s);
        (-12.0 * (15.0 * s * s - 3.0) + 2.0 * omega) / (d * d) * p * p
    });
    let value = (c - 5.0 * omega / 6.0) * integral;
    if !value.is_finite() {
        return Err(Error::SingularIntegrand(format!(
            "energy form diverged at c = {c}, omega = {omega} (mu = {mu})"
        )));
    }
    Ok(value)
}

/// Per-mode analysis: neutral modes plus index counts.
pub fn mode_analysis(
    k: u32,
    omega: f64,
    config: &DiscretizationConfig,
) -> Result<(IndexCounts, Vec<NeutralMode>)> {
    let n_minus_l: u32 = if k == 1 || k == 2 { 1 } else { 0 };
    if n_minus_l == 0 {
        return Ok((
            IndexCounts {
                n_minus_l,
                k_i_le0: 0,
                k_0_le0: 0,
                k_c_plus_k_r: 0,
                indeterminate: false,
            },
            vec![],
        ));
    }

    // Closed-endpoint stability at the exact critical rates, where the
    // neutral root sits exactly on a band edge and cannot be bracketed
    // numerically: k = 1 at ω = -3 and ω = 99/2; k = 2 at ω = 69/2.
    let boundary_stable = (k == 1 && (omega == -3.0 || omega == 49.5))
        || (k == 2 && omega == 34.5);
    if boundary_stable {
        return Ok((
            IndexCounts {
                n_minus_l,
                k_i_le0: 1,
                k_0_le0: 0,
                k_c_plus_k_r: 0,
                indeterminate: false,
            },
            vec![],
        ));
    }

    let modes = critical::neutral_mode_solve(k, omega, config)?;
    let mut k_i = 0u32;
    let mut indeterminate = false;
    for m in &modes {
        match m.krein_sign {
            KreinSign::Negative => k_i += 1,
            KreinSign::Positive => {}
            KreinSign::Degenerate => indeterminate = true,
        }
    }
    // Kernel contribution: trivial kernels on ω ∈ (-18, 72).
    let k_0 = 0u32;
    let k_c_plus_k_r = n_minus_l.saturating_sub(k_i + k_0);
    Ok((
        IndexCounts {
            n_minus_l,
            k_i_le0: k_i,
            k_0_le0: k_0,
            k_c_plus_k_r,
            indeterminate,
        },
        modes,
    ))
}

/// Index counts for the canonical parity subspace of `k` at `ω`.
pub fn index_counts(k: u32, omega: f64, config: &DiscretizationConfig) -> Result<IndexCounts> {
    Ok(mode_analysis(k, omega, config)?.0)
}

fn rayleigh_stable_counts(k: u32) -> IndexCounts {
    IndexCounts {
        n_minus_l: if k == 1 || k == 2 { 1 } else { 0 },
        k_i_le0: if k == 1 || k == 2 { 1 } else { 0 },
        k_0_le0: 0,
        k_c_plus_k_r: 0,
        indeterminate: false,
    }
}

/// Classify the 3-jet at rotation rate `ω`.
///
/// Fast path: the Rayleigh criterion gives spectral stability for
/// `ω ≤ -18` or `ω ≥ 72`. Otherwise the per-mode verdicts come from the
/// index counts, and `dim(E^u) = dim(E^s) = 2 × (number of unstable modes)`.
pub fn classify(omega: f64, config: &DiscretizationConfig) -> Result<StabilityReport> {
    if omega <= -18.0 || omega >= 72.0 {
        return Ok(StabilityReport {
            omega,
            verdict_k1: Verdict::Stable,
            verdict_k2: Verdict::Stable,
            overall: Overall::SpectrallyStable,
            index_k1: rayleigh_stable_counts(1),
            index_k2: rayleigh_stable_counts(2),
            dim_eu: 0,
            dim_es: 0,
            neutral_modes: vec![],
        });
    }
    let (index_k1, modes1) = mode_analysis(1, omega, config)?;
    let (index_k2, modes2) = mode_analysis(2, omega, config)?;
    let verdict_k1 = if index_k1.k_c_plus_k_r > 0 {
        Verdict::Unstable
    } else {
        Verdict::Stable
    };
    let verdict_k2 = if index_k2.k_c_plus_k_r > 0 {
        Verdict::Unstable
    } else {
        Verdict::Stable
    };
    let unstable_modes =
        (verdict_k1 == Verdict::Unstable) as u32 + (verdict_k2 == Verdict::Unstable) as u32;
    let overall = if unstable_modes > 0 {
        Overall::LinearlyUnstable
    } else {
        Overall::SpectrallyStable
    };
    let mut neutral_modes = modes1;
    neutral_modes.extend(modes2);
    Ok(StabilityReport {
        omega,
        verdict_k1,
        verdict_k2,
        overall,
        index_k1,
        index_k2,
        dim_eu: 2 * unstable_modes,
        dim_es: 2 * unstable_modes,
        neutral_modes,
    })
}

/// Exponential-trichotomy dimensions `(dim E^u, dim E^s)`:
/// `4` on `(-3, 69/2)`, `2` on `(g⁻¹(-12), -3] ∪ [69/2, 99/2)`, `0` otherwise.
pub fn trichotomy_dims(omega: f64, config: &DiscretizationConfig) -> Result<(u32, u32)> {
    let neg = critical::negative_critical_rate_cached(config)?;
    let d = if omega > -3.0 && omega < 34.5 {
        4
    } else if (omega > neg && omega <= -3.0) || (34.5..49.5).contains(&omega) {
        2
    } else {
        0
    };
    Ok((d, d))
}

/// Unstable eigenvalues (`Re > re_floor`, persistent under `N → 2N`) of the
/// discretized linearized operator
/// `𝓛_{ω,k} = ik [Ψ₀' - (Υ₀' + 2ω) Δ_k⁻¹]`
/// on the canonical parity subspace of `|k|`, acting on vorticity
/// coefficients in the unit-normalized associated-Legendre basis.
pub fn unstable_spectrum(
    k: i32,
    omega: f64,
    config: &DiscretizationConfig,
) -> Result<Vec<Complex64>> {
    unstable_spectrum_filtered(k, omega, config, &UnstableFilter::default())
}

/// [`unstable_spectrum`] with explicit filter thresholds.
///
/// Two stages. The companion discretization provides candidates filtered by
/// `re_floor` and `N → 2N` persistence; every candidate (plus band-edge seeds
/// when the matrix finds nothing) is then polished by a complex Newton
/// iteration on the shifted Rayleigh problem, which certifies genuine
/// eigenvalues and resolves near-threshold growth rates far below what the
/// companion matrix can separate from its approximate essential spectrum.
pub fn unstable_spectrum_filtered(
    k: i32,
    omega: f64,
    config: &DiscretizationConfig,
    filter: &UnstableFilter,
) -> Result<Vec<Complex64>> {
    if k == 0 {
        return Err(Error::Domain("k must be nonzero".into()));
    }
    let ka = k.unsigned_abs();
    let n = config.basis_size.max(48);
    let coarse = linearized_unstable_eigs(k, omega, n, filter.re_floor)?;
    let fine = linearized_unstable_eigs(k, omega, 2 * n, filter.re_floor)?;
    let persistent: Vec<Complex64> = fine
        .iter()
        .cloned()
        .filter(|z| {
            coarse
                .iter()
                .any(|w| (z - w).norm() < filter.persistence_tol)
        })
        .collect();

    let mut candidates = coarse;
    candidates.extend(fine);
    let (cand_seeds, edge_seeds) = newton_seeds(k, omega, &candidates);
    let mut roots = refined_unstable_mu(ka, omega, &cand_seeds);
    if roots.is_empty() {
        // The matrix missed every root (near-threshold regime); fall back to
        // the band-edge seeds.
        roots = refined_unstable_mu(ka, omega, &edge_seeds);
    }
    let kaf = ka as f64;
    let kf = k as f64;
    let mut kept: Vec<Complex64> = roots
        .into_iter()
        .filter(|m| kaf * m.im > 1e-9)
        .map(|m| Complex64::new(kaf * m.im, -kf * m.re))
        .collect();
    if kept.is_empty() {
        // Newton refinement unavailable (e.g. seeds collapsed); keep the raw
        // persistence-filtered matrix eigenvalues.
        kept = persistent;
    }
    kept.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(kept)
}

// ---------------------------------------------------------------------------
// Complex Newton refinement.
//
// An unstable eigenvalue λ = -ikμ̃ of 𝓛_{ω,k} (with Im μ̃ ≠ 0) is exactly
// equivalent to the complex-shifted Rayleigh problem having eigenvalue -12:
// writing (Υ₀'+2ω)/(15s²-3+μ̃) = -12 + (2ω+12μ̃)/(15s²-3+μ̃), the vorticity
// eigenvalue equation becomes Δ_k Φ - V_{μ̃}(s) Φ = -12 Φ with the usual
// rational potential continued to complex μ̃. Roots of
// G(μ̃) = λ(μ̃) + 12 (λ the Galerkin eigenvalue nearest -12) are found by
// Newton iteration; G' comes from first-order perturbation of the
// complex-symmetric matrix, using the bilinear (unconjugated) form.
// ---------------------------------------------------------------------------

/// Newton starting points: complex-shift images `μ̃ = iλ/k` of the matrix
/// candidates, plus band-edge seeds covering thresholds where an unstable
/// root is about to emerge from (or vanish into) the real axis.
fn newton_seeds(k: i32, omega: f64, matrix_candidates: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let kf = k as f64;
    let mut cand: Vec<Complex64> = Vec::new();
    for &lam in matrix_candidates {
        let m = Complex64::i() * lam / kf;
        let m = if m.im < 0.0 { m.conj() } else { m };
        if !cand.iter().any(|s| (s - m).norm() < 1e-3) {
            cand.push(m);
        }
    }
    let mut edge: Vec<Complex64> = Vec::new();
    let ka = k.unsigned_abs();
    if ka <= 2 {
        let ims = [0.5, 0.05, 0.005];
        if omega > 12.0 && omega < 72.0 {
            // Positive-side thresholds (99/2 for k=1, 69/2 for k=2): the root
            // emerges from the lower band edge μ = -12.
            for &b in &ims {
                edge.push(Complex64::new(-12.0, b));
            }
        }
        if omega > -3.0 && omega <= 13.0 {
            // k = 1 root emerges from the upper band edge μ = 3 at ω = -3.
            for &b in &ims {
                edge.push(Complex64::new(3.0, b));
            }
        }
        if ka == 2 && omega > -18.0 && omega < -3.0 {
            // Negative-side k = 2 root lives near the interior maximizer of
            // λ̃₁ just above the band edge.
            for base in [3.05, 3.2] {
                for &b in &ims {
                    edge.push(Complex64::new(base, b));
                }
            }
        }
    }
    (cand, edge)
}

/// Polish every seed at two basis sizes; keep roots with `Im μ̃ > 0` (genuine
/// eigenvalues for the contour orientation) that agree across the refinement.
fn refined_unstable_mu(ka: u32, omega: f64, seeds: &[Complex64]) -> Vec<Complex64> {
    let mut roots: Vec<Complex64> = Vec::new();
    for &seed in seeds {
        if roots.iter().any(|r| (r - seed).norm() < 1e-3) {
            continue;
        }
        let Some(m1) = complex_root_newton(ka, omega, seed, 96) else {
            continue;
        };
        if m1.im < 1e-9 {
            continue;
        }
        let Some(m2) = complex_root_newton(ka, omega, m1, 192) else {
            continue;
        };
        if m2.im < 1e-9 || (m2 - m1).norm() > 1e-4 * (1.0 + m2.norm()) {
            continue;
        }
        if !roots
            .iter()
            .any(|r| (r - m2).norm() < 1e-6 * (1.0 + m2.norm()))
        {
            roots.push(m2);
        }
    }
    roots
}

/// Deformed integration contour `s(t) = t + iδ sin(πt)`, `t ∈ [-1, 1]`.
///
/// The potential's poles sit at `s_p² = (3 - μ̃)/15`; as `Im μ̃ → 0⁺` the
/// pole near `+s*` approaches the real axis from below and its mirror from
/// above, so a contour lifted above the axis for `s > 0` and lowered for
/// `s < 0` continues the shifted Rayleigh problem analytically across the
/// essential band. Polynomial integrals are contour-independent, so the mass
/// matrix stays the identity and the Laplace part stays `-l(l+1)` diagonal;
/// only the rational potential sees the deformation. Spurious real-axis
/// roots of the undeformed discretization (the sampled essential spectrum)
/// disappear, leaving genuine eigenvalues isolated even at tiny growth rates.
struct Contour {
    /// `s(t_j)` at the Gauss-Legendre parameter nodes.
    nodes: Vec<Complex64>,
    /// `w_j · s'(t_j)`.
    dweights: Vec<Complex64>,
}

fn contour_for(quad: &QuadratureRule, delta: f64) -> Contour {
    use std::f64::consts::PI;
    let nodes = quad
        .nodes
        .iter()
        .map(|&t| Complex64::new(t, delta * (PI * t).sin()))
        .collect();
    let dweights = quad
        .nodes
        .iter()
        .zip(&quad.weights)
        .map(|(&t, &w)| w * Complex64::new(1.0, delta * PI * (PI * t).cos()))
        .collect();
    Contour { nodes, dweights }
}

/// Contour amplitude: large enough to clear the poles, small enough that the
/// basis polynomials stay well conditioned (`|P_l|` grows like
/// `exp(l · Im s / sqrt(1 - t²))` off the axis).
fn contour_delta(lmax: u32) -> f64 {
    (2.0 / lmax as f64).clamp(0.003, 0.02)
}

/// Quadrature size: Gauss-Legendre error decays like `exp(-2N sqrt(2d))`
/// with `d` the pole-to-contour distance, so pick `N` for ~1e-13, capped.
fn newton_quad_nodes(n: usize, mu: Complex64, delta: f64) -> usize {
    use std::f64::consts::PI;
    let sp = ((Complex64::new(3.0, 0.0) - mu) / 15.0).sqrt();
    let mut dist = f64::INFINITY;
    for i in 0..=200 {
        let t = -1.0 + i as f64 / 100.0;
        let s = Complex64::new(t, delta * (PI * t).sin());
        dist = dist.min((s - sp).norm()).min((s + sp).norm());
    }
    let needed = (15.0 / (2.0 * dist.max(1e-12)).sqrt()).ceil() as usize;
    (8 * n).max(needed.min(6000))
}

fn bilinear(u: &DVector<Complex64>, v: &DVector<Complex64>) -> Complex64 {
    u.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
}

/// Values of the unit-normalized basis at complex contour nodes (same upward
/// recurrence as the real-axis version).
fn basis_values_complex(degrees: &[u32], k: u32, nodes: &[Complex64]) -> Vec<Vec<Complex64>> {
    let lmax = *degrees.last().expect("nonempty basis");
    let norms: Vec<f64> = degrees
        .iter()
        .map(|&l| basisfn::legendre_norm_sq(l, k).expect("k <= l").sqrt())
        .collect();
    nodes
        .iter()
        .map(|&s| {
            let omss = (Complex64::new(1.0, 0.0) - s) * (Complex64::new(1.0, 0.0) + s);
            let mut sign = 1.0;
            for j in 1..=k {
                sign *= -((2 * j - 1) as f64);
            }
            let pkk = omss.powf(k as f64 / 2.0) * sign;
            let mut row = Vec::with_capacity(degrees.len());
            let mut idx = 0;
            let mut push = |l: u32, v: Complex64, idx: &mut usize| {
                if *idx < degrees.len() && degrees[*idx] == l {
                    row.push(v / norms[*idx]);
                    *idx += 1;
                }
            };
            let mut pm2 = pkk;
            push(k, pm2, &mut idx);
            if lmax > k {
                let mut pm1 = pkk * s * (2 * k + 1) as f64;
                push(k + 1, pm1, &mut idx);
                for ll in (k + 2)..=lmax {
                    let llf = ll as f64;
                    let kf = k as f64;
                    let p = (pm1 * s * (2.0 * llf - 1.0) - pm2 * (llf + kf - 1.0)) / (llf - kf);
                    pm2 = pm1;
                    pm1 = p;
                    push(ll, p, &mut idx);
                }
            }
            row
        })
        .collect()
}

/// Galerkin matrix of the complex-shifted Rayleigh problem
/// `A(μ̃)_{lm} = -l(l+1) δ_{lm} - ∫_C (2ω+12μ̃)/(15s²-3+μ̃) P̂_l P̂_m ds`
/// along the deformed contour (complex symmetric, not Hermitian).
fn assemble_complex(
    degrees: &[u32],
    vals: &[Vec<Complex64>],
    contour: &Contour,
    omega: f64,
    mu: Complex64,
) -> DMatrix<Complex64> {
    let nb = degrees.len();
    let mut a = DMatrix::<Complex64>::zeros(nb, nb);
    for (j, (&s, &dw)) in contour.nodes.iter().zip(&contour.dweights).enumerate() {
        let v = (2.0 * omega + 12.0 * mu) / (s * s * 15.0 - 3.0 + mu) * dw;
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
        a[(i, i)] -= Complex64::new(l * (l + 1.0), 0.0);
    }
    a
}

/// Eigenpair of a complex-symmetric matrix nearest `target`, by shifted
/// inverse iteration with bilinear Rayleigh-quotient shift updates.
fn nearest_eigenpair(
    a: &DMatrix<Complex64>,
    target: Complex64,
) -> Option<(Complex64, DVector<Complex64>)> {
    let n = a.nrows();
    let mut x = DVector::from_fn(n, |i, _| Complex64::new(1.0 / (1.0 + i as f64), 0.0));
    let nrm = x.norm();
    x /= Complex64::new(nrm, 0.0);
    let mut shift = target;
    let mut best: Option<(Complex64, DVector<Complex64>, f64)> = None;
    for iter in 0..60 {
        let mut m = a.clone();
        for i in 0..n {
            m[(i, i)] -= shift;
        }
        let y = match m.lu().solve(&x) {
            Some(y) => y,
            None => {
                shift += Complex64::new(1e-10, 1e-10);
                continue;
            }
        };
        let ynorm = y.norm();
        if !ynorm.is_finite() || ynorm == 0.0 {
            shift += Complex64::new(1e-10, 1e-10);
            continue;
        }
        x = y / Complex64::new(ynorm, 0.0);
        let ax = a * &x;
        let xtx = bilinear(&x, &x);
        let lambda = if xtx.norm() < 1e-8 {
            // Quasi-null vector in the bilinear form; conjugate quotient.
            x.dotc(&ax)
        } else {
            bilinear(&x, &ax) / xtx
        };
        let res = (&ax - &x * lambda).norm();
        if best.as_ref().is_none_or(|(_, _, r)| res < *r) {
            best = Some((lambda, x.clone(), res));
        }
        if res < 1e-10 * (1.0 + lambda.norm()) {
            return Some((lambda, x));
        }
        if iter >= 2 {
            shift = lambda;
        }
    }
    best.map(|(l, v, _)| (l, v))
}

/// Newton iteration on `G(μ̃) = λ(μ̃) + 12` at one basis size, along the
/// deformed contour. Returns the converged root or `None` on divergence.
/// With the contour orientation used here, only roots with `Im μ̃ > 0` are
/// genuine eigenvalues; roots with `Im μ̃ ≤ 0` are resonances of the
/// analytic continuation (the caller rejects them).
fn complex_root_newton(ka: u32, omega: f64, mu0: Complex64, n: usize) -> Option<Complex64> {
    let degrees = rayleigh::basis_degrees(ka, Parity::canonical(ka), n);
    let mut mu = mu0;
    let mut last_step = f64::INFINITY;
    for _ in 0..40 {
        if !mu.re.is_finite() || !mu.im.is_finite() || mu.norm() > 400.0 {
            return None;
        }
        let delta = contour_delta(*degrees.last().expect("nonempty basis"));
        let quad = cached_gauss_legendre(newton_quad_nodes(n, mu, delta));
        let contour = contour_for(&quad, delta);
        let vals = basis_values_complex(&degrees, ka, &contour.nodes);
        let a = assemble_complex(&degrees, &vals, &contour, omega, mu);
        let (lam, x) = nearest_eigenpair(&a, Complex64::new(-12.0, 0.0))?;
        let g = lam + 12.0;
        let xtx = bilinear(&x, &x);
        if xtx.norm() < 1e-10 {
            return None;
        }
        // G'(μ̃) = ∫_C (-12(15s²-3)+2ω)/(15s²-3+μ̃)² Φ² ds / (xᵀx),
        // first-order perturbation with the unconjugated bilinear form.
        let mut num = Complex64::new(0.0, 0.0);
        for (j, (&s, &dw)) in contour.nodes.iter().zip(&contour.dweights).enumerate() {
            let phi: Complex64 = vals[j].iter().zip(x.iter()).map(|(b, c)| c * *b).sum();
            let p = s * s * 15.0 - 3.0;
            let d = p + mu;
            num += phi * phi * (p * -12.0 + 2.0 * omega) * dw / (d * d);
        }
        let gp = num / xtx;
        if gp.norm() < 1e-14 {
            return None;
        }
        let step = g / gp;
        mu -= step;
        let sn = step.norm();
        if sn < 1e-11 * (1.0 + mu.norm()) {
            return Some(mu);
        }
        if sn > 10.0 * last_step && sn > 1.0 {
            return None;
        }
        last_step = sn;
    }
    None
}

/// Memoized Gauss-Legendre rules (node counts are quantized to powers of two
/// so the Newton iteration reuses a handful of rules).
fn cached_gauss_legendre(n_min: usize) -> std::sync::Arc<QuadratureRule> {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    let n = n_min.next_power_of_two();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(basisfn::gauss_legendre(n)))
        .clone()
}

/// All eigenvalues of the discretized linearized operator at basis size `n`.
pub fn linearized_spectrum(k: i32, omega: f64, n: usize) -> Result<Vec<Complex64>> {
    if k == 0 {
        return Err(Error::Domain("k must be nonzero".into()));
    }
    let ka = k.unsigned_abs();
    let degrees = rayleigh::basis_degrees(ka, Parity::canonical(ka), n);
    let lmax = *degrees.last().unwrap() as usize;
    let quad = basisfn::gauss_legendre(lmax + 8);
    let nb = degrees.len();
    // Values of the normalized basis at the nodes.
    let vals: Vec<Vec<f64>> = quad
        .nodes
        .iter()
        .map(|&s| {
            degrees
                .iter()
                .map(|&l| {
                    basisfn::assoc_legendre(l, ka, s).unwrap()
                        / basisfn::legendre_norm_sq(l, ka).unwrap().sqrt()
                })
                .collect()
        })
        .collect();
    // Real matrix C with 𝓛 = ik·C:
    // C_{lm} = ⟨Ψ₀' P̂_m, P̂_l⟩ + (1/(m(m+1))) ⟨(Υ₀'+2ω) P̂_m, P̂_l⟩
    // (Δ_k⁻¹ P̂_m = -P̂_m/(m(m+1)) turns -(Υ₀'+2ω)Δ_k⁻¹ into the + term).
    let mut c = DMatrix::<f64>::zeros(nb, nb);
    for (j, (&s, &w)) in quad.nodes.iter().zip(&quad.weights).enumerate() {
        let psi0p = 15.0 * s * s - 3.0; // Ψ₀'
        let shear = -12.0 * psi0p + 2.0 * omega; // Υ₀' + 2ω
        let row = &vals[j];
        for li in 0..nb {
            let wl = w * row[li];
            for (mi, &m) in degrees.iter().enumerate() {
                let mf = m as f64;
                c[(li, mi)] += wl * row[mi] * (psi0p + shear / (mf * (mf + 1.0)));
            }
        }
    }
    let eig = c.complex_eigenvalues();
    let kf = k as f64;
    Ok(eig
        .iter()
        .map(|z| Complex64::new(0.0, kf) * z)
        .collect())
}

fn linearized_unstable_eigs(
    k: i32,
    omega: f64,
    n: usize,
    re_floor: f64,
) -> Result<Vec<Complex64>> {
    Ok(linearized_spectrum(k, omega, n)?
        .into_iter()
        .filter(|z| z.re > re_floor)
        .collect())
}

/// Assemble the imaginary-axis spectral picture for `(k, ω)`.
///
/// The essential spectrum and the embedded eigenvalue `ikω/6` are analytic
/// facts (the discretization cannot resolve them); isolated imaginary
/// eigenvalues `-ikμ_j` come from the neutral modes, and the unstable count
/// from the non-self-adjoint discretization.
pub fn spectral_picture(
    k: i32,
    omega: f64,
    config: &DiscretizationConfig,
) -> Result<SpectralPicture> {
    if k == 0 {
        return Err(Error::Domain("k must be nonzero".into()));
    }
    let kf = k as f64;
    let essential_interval = (-3.0 * kf, 12.0 * kf);
    let low_mode = k.unsigned_abs() <= 3;
    let embedded_eigenvalue =
        (low_mode && omega > -18.0 && omega < 72.0).then_some(kf * omega / 6.0);

    let mut isolated_imaginary: Vec<f64> = Vec::new();
    let ka = k.unsigned_abs();
    if ka == 1 || ka == 2 {
        for m in critical::neutral_mode_solve(ka, omega, config)? {
            isolated_imaginary.push(-kf * m.mu);
        }
    }
    if low_mode && !(-18.0..=72.0).contains(&omega) {
        isolated_imaginary.push(kf * omega / 6.0);
    }
    isolated_imaginary.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let rotational = k.abs() == 1;
    let rotational_kernel_degenerate = rotational && omega == 0.0;
    let rotational_pair = (rotational && omega != 0.0).then_some((omega, -omega));
    let rotational_eigenfunction = (rotational && omega != 0.0).then(|| {
        format!(
            "Y_1^{{\u{00b1}1}} - ({:.6}) * Y_3^{{\u{00b1}1}}",
            72.0 / omega * (1.0f64 / 14.0).sqrt()
        )
    });

    let unstable_count = if ka == 1 || ka == 2 {
        unstable_spectrum(k, omega, config)?.len()
    } else {
        0
    };

    Ok(SpectralPicture {
        k,
        omega,
        essential_interval,
        embedded_eigenvalue,
        isolated_imaginary,
        rotational_pair,
        rotational_eigenfunction,
        rotational_kernel_degenerate,
        unstable_count,
    })
}

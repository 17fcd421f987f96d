//! Associated Legendre / Gegenbauer evaluation, norms, and Gauss–Legendre
//! quadrature on `[-1, 1]`: the numerical substrate of every integral and
//! basis expansion in the library.
//!
//! The associated Legendre convention is Ferrers-type with the Condon–Shortley
//! phase, pinned by the closed forms
//! `P_3^1 = (3/2)(1-5s^2)(1-s^2)^{1/2}`, `P_3^2 = 15s(1-s^2)`,
//! `P_3^3 = -15(1-s^2)^{3/2}`.

use crate::error::{Error, Result};

/// Gauss–Legendre quadrature rule on `[-1, 1]`.
///
/// Nodes are strictly increasing and exactly symmetric about 0; weights are
/// positive and sum to 2. The `n`-point rule integrates polynomials of degree
/// `2n - 1` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Approximate `∫_{-1}^{1} f(s) ds`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Build the `n`-point Gauss–Legendre rule by Newton iteration on `P_n`.
///
/// Each root is started from the Chebyshev-like estimate
/// `cos(π (i + 3/4) / (n + 1/2))` and polished to machine precision; the
/// negative half is mirrored from the positive half so the rule is exactly
/// symmetric.
pub fn gauss_legendre(n: usize) -> QuadratureRule {
    assert!(n >= 1, "node count must be at least 1");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n / 2;
    for i in 0..m {
        // i-th root counted from the right end (largest root is i = 0).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (p2, d2) = legendre_with_derivative(n, x);
                x -= p2 / d2;
                dp = d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        let (_, d) = legendre_with_derivative(n, 0.0);
        nodes[m] = 0.0;
        weights[m] = 2.0 / (d * d);
    }
    QuadratureRule { nodes, weights }
}

/// Legendre polynomial `P_n(x)` and its derivative by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let d = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Ferrers associated Legendre function `P_l^k(s)` (Condon–Shortley phase).
///
/// Evaluated by the upward three-term recurrence in `l` starting from
/// `P_k^k(s) = (-1)^k (2k-1)!! (1-s^2)^{k/2}`; the factor `(1-s^2)^{k/2}` is
/// formed once to avoid cancellation near `s = ±1`.
pub fn assoc_legendre(l: u32, k: u32, s: f64) -> Result<f64> {
    if k > l {
        return Err(Error::Domain(format!("order k={k} exceeds degree l={l}")));
    }
    if !(-1.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("s={s} outside [-1, 1]")));
    }
    // P_k^k
    let omss = (1.0 - s) * (1.0 + s);
    let mut pkk = 1.0;
    for j in 1..=k {
        pkk *= -((2 * j - 1) as f64);
    }
    pkk *= omss.powf(k as f64 / 2.0);
    if l == k {
        return Ok(pkk);
    }
    // P_{k+1}^k = (2k+1) s P_k^k
    let mut pm2 = pkk;
    let mut pm1 = (2 * k + 1) as f64 * s * pkk;
    if l == k + 1 {
        return Ok(pm1);
    }
    for ll in (k + 2)..=l {
        let llf = ll as f64;
        let kf = k as f64;
        let p = ((2.0 * llf - 1.0) * s * pm1 - (llf + kf - 1.0) * pm2) / (llf - kf);
        pm2 = pm1;
        pm1 = p;
    }
    Ok(pm1)
}

/// `∫_{-1}^{1} (P_l^k)^2 ds = 2 (l+k)! / ((2l+1) (l-k)!)`.
pub fn legendre_norm_sq(l: u32, k: u32) -> Result<f64> {
    if k > l {
        return Err(Error::Domain(format!("order k={k} exceeds degree l={l}")));
    }
    let mut ratio = 1.0; // (l+k)! / (l-k)!
    for j in (l - k + 1)..=(l + k) {
        ratio *= j as f64;
    }
    Ok(2.0 * ratio / (2 * l + 1) as f64)
}

/// A unit-normalized associated Legendre basis function `P̂_l^k = P_l^k / ‖P_l^k‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisFunction {
    pub l: u32,
    pub k: u32,
    /// L² norm of the unnormalized `P_l^k` on `[-1, 1]`.
    pub normalization: f64,
}

impl BasisFunction {
    pub fn new(l: u32, k: u32) -> Result<Self> {
        Ok(Self {
            l,
            k,
            normalization: legendre_norm_sq(l, k)?.sqrt(),
        })
    }

    /// Evaluate the unit-normalized function at `s`.
    pub fn eval(&self, s: f64) -> f64 {
        assoc_legendre(self.l, self.k, s).expect("valid by construction") / self.normalization
    }
}

/// Gegenbauer polynomial `G_n^β` in the Rodrigues normalization
/// `G_n^β(s) = (1-s^2)^{1/2-β} dⁿ/dsⁿ (1-s^2)^{n+β-1/2}`,
/// a polynomial solution of the Gegenbauer differential equation
/// `(1-s^2) φ'' - (2β+1) s φ' + n (n+2β) φ = 0`.
///
/// This normalization gives `G_0 = 1` and `G_1^β(s) = -(2β+1) s`.
pub fn gegenbauer(n: u32, beta: f64, s: f64) -> f64 {
    assert!(beta > 0.0, "beta must be positive");
    // Standard-normalization Gegenbauer C_n^beta by the three-term recurrence.
    let mut c0 = 1.0;
    let mut c1 = 2.0 * beta * s;
    let c_std = match n {
        0 => c0,
        1 => c1,
        _ => {
            let mut c = 0.0;
            for j in 2..=n {
                let jf = j as f64;
                c = (2.0 * (jf + beta - 1.0) * s * c1 - (jf + 2.0 * beta - 2.0) * c0) / jf;
                c0 = c1;
                c1 = c;
            }
            c
        }
    };
    // Rescale by G_n(1) / C_n(1):
    //   G_n(1) = (-2)^n ∏_{j=0}^{n-1} (n + β - 1/2 - j),
    //   C_n(1) = ∏_{j=0}^{n-1} (2β + j) / (j + 1).
    let mut g1 = 1.0;
    let mut cstd1 = 1.0;
    for j in 0..n {
        let jf = j as f64;
        g1 *= -2.0 * (n as f64 + beta - 0.5 - jf);
        cstd1 *= (2.0 * beta + jf) / (jf + 1.0);
    }
    c_std * g1 / cstd1
}

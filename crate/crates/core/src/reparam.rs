//! Single-parameter reanalysis: dual bases `αᵢ·βⱼ = δᵢⱼ`, the seminorm bound they imply,
//! the completion that makes it tight, and strategies for known field structure.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::network::{dot, NetworkConfig};

/// Largest accepted condition number of a basis.
pub const MAX_CONDITION: f64 = 1e12;

/// Basis rows `α₀ = α, α₁, …` and dual rows `β₀ = β, β₁, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    pub vectors: DMatrix<f64>,
    pub dual: DMatrix<f64>,
}

impl BasisSet {
    /// `β = β₀`, the dual row paired with α.
    pub fn beta(&self) -> Vec<f64> {
        self.dual.row(0).iter().copied().collect()
    }

    /// `max |αᵢ·βⱼ − δᵢⱼ|`.
    pub fn biorthogonality_error(&self) -> f64 {
        let n = self.vectors.nrows();
        (&self.vectors * self.dual.transpose() - DMatrix::<f64>::identity(n, n)).amax()
    }
}

/// Build a basis matrix from rows.
pub fn basis_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Argument("basis must have at least one vector".into()));
    }
    for r in rows {
        if r.len() != n {
            return Err(Error::Shape {
                expected: n,
                got: r.len(),
            });
        }
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

/// Dual rows `D = (B⁻¹)ᵀ`.
pub fn dual_basis(basis: &DMatrix<f64>) -> Result<BasisSet> {
    if !basis.is_square() {
        return Err(Error::Shape {
            expected: basis.nrows(),
            got: basis.ncols(),
        });
    }
    let sv = basis.singular_values();
    let condition = sv.max() / sv.min();
    if !(condition < MAX_CONDITION) {
        return Err(Error::Rank { condition });
    }
    let inv = basis
        .clone()
        .try_inverse()
        .ok_or(Error::Rank { condition: f64::INFINITY })?;
    Ok(BasisSet {
        vectors: basis.clone(),
        dual: inv.transpose(),
    })
}

/// `1/(t²(Σ|βᵢ|)²)`: the variance floor implied by `F_Q ≤ t²‖β·σ̂/2‖_s²`.
pub fn naive_bound(beta: &[f64], t: f64) -> Result<f64> {
    let s: f64 = beta.iter().map(|b| b.abs()).sum();
    if !(s > 0.0) {
        return Err(Error::Argument("dual vector must be nonzero".into()));
    }
    Ok(1.0 / (t * t * s * s))
}

/// One point of the seminorm blow-up for the basis `{α, (α₁/α₂ + ε, 1)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergencePoint {
    pub eps: f64,
    /// `(1 + ε + α₁/α₂)/(ε α₂)`.
    pub cap: f64,
    /// `Σ|βⱼ|` of the same basis from an explicit dual-basis inversion.
    pub dual_seminorm: f64,
}

pub fn divergence_curve(alpha: [f64; 2], eps_list: &[f64]) -> Result<Vec<DivergencePoint>> {
    let [a1, a2] = alpha;
    if a2 == 0.0 {
        return Err(Error::Argument("divergence curve needs alpha_2 != 0".into()));
    }
    let mut out = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        if !(eps > 0.0) {
            continue;
        }
        let cap = (1.0 + eps + a1 / a2) / (eps * a2);
        let basis = DMatrix::from_row_slice(2, 2, &[a1, a2, a1 / a2 + eps, 1.0]);
        let dual_seminorm = dual_basis(&basis)
            .map(|b| b.beta().iter().map(|x| x.abs()).sum())
            .unwrap_or(f64::INFINITY);
        out.push(DivergencePoint {
            eps,
            cap,
            dual_seminorm,
        });
    }
    Ok(out)
}

fn argmax_abs(alpha: &[f64]) -> Result<usize> {
    let (j, m) = alpha
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(j, m), (i, a)| if a.abs() > m { (i, a.abs()) } else { (j, m) });
    if m == 0.0 {
        return Err(Error::Argument("alpha must be nonzero".into()));
    }
    Ok(j)
}

/// `{α} ∪ {eⱼ : j ≠ j*}` with `j*` the largest-|α| index, giving `β = e_{j*}/α_{j*}`.
pub fn optimal_completion(alpha: &[f64]) -> Result<BasisSet> {
    let n = alpha.len();
    let jstar = argmax_abs(alpha)?;
    let mut rows = vec![alpha.to_vec()];
    for k in (0..n).filter(|&k| k != jstar) {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        rows.push(e);
    }
    dual_basis(&basis_from_rows(&rows)?)
}

/// `{α}` plus an orthonormal complement, giving `β = α/‖α‖²`.
pub fn orthogonal_completion(alpha: &[f64]) -> Result<BasisSet> {
    let n = alpha.len();
    argmax_abs(alpha)?;
    let mut rows: Vec<Vec<f64>> = vec![alpha.to_vec()];
    let mut ortho: Vec<Vec<f64>> = vec![scale(alpha, 1.0 / dot(alpha, alpha).sqrt())];
    for k in 0..n {
        if rows.len() == n {
            break;
        }
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        for u in &ortho {
            let c = dot(&v, u);
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-8 {
            let u = scale(&v, 1.0 / norm);
            rows.push(u.clone());
            ortho.push(u);
        }
    }
    dual_basis(&basis_from_rows(&rows)?)
}

fn scale(v: &[f64], s: f64) -> Vec<f64> {
    v.iter().map(|x| x * s).collect()
}

/// `‖α‖⁴/(t²(Σ|αᵢ|)²)`.
pub fn known_structure_bound(alpha: &[f64], t: f64) -> Result<f64> {
    argmax_abs(alpha)?;
    let n2 = dot(alpha, alpha);
    let l1: f64 = alpha.iter().map(|a| a.abs()).sum();
    Ok(n2 * n2 / (t * t * l1 * l1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    /// `θ = q α/‖α‖²`.
    Proportional,
    /// `θ = q α/‖α‖² + θ_γ γ` with `α·γ = 0`.
    Decomposed,
}

/// Prior knowledge about the direction of θ.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldStructure {
    pub kind: StructureKind,
    pub gamma: Option<Vec<f64>>,
    pub theta_gamma: Option<f64>,
    /// Measured weights, `wᵢ = sgn αᵢ`.
    pub w: Vec<f64>,
    pub c_alpha: f64,
    pub c_gamma: f64,
}

impl FieldStructure {
    pub fn proportional(alpha: &[f64]) -> Result<Self> {
        argmax_abs(alpha)?;
        let w = sign_vector(alpha);
        Ok(Self {
            kind: StructureKind::Proportional,
            gamma: None,
            theta_gamma: None,
            c_alpha: dot(&w, alpha) / dot(alpha, alpha),
            c_gamma: 0.0,
            w,
        })
    }
}

pub fn sign_vector(alpha: &[f64]) -> Vec<f64> {
    alpha
        .iter()
        .map(|&a| if a == 0.0 { 0.0 } else { a.signum() })
        .collect()
}

/// How to run the w-weighted GHZ protocol and map its result back to `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnownStructurePlan {
    pub structure: FieldStructure,
    /// Network measuring `w·θ`.
    pub measured: NetworkConfig,
    /// `‖α‖²/Σ|αᵢ|`, so `q = rescale · (w·θ)`.
    pub rescale: f64,
    pub target_variance: f64,
}

const PROPORTIONAL_RTOL: f64 = 1e-10;

pub fn known_structure_protocol(config: &NetworkConfig) -> Result<KnownStructurePlan> {
    let alpha = config.alpha();
    let theta = config.theta();
    let n2 = config.alpha_norm_sq();
    let ratios: Vec<f64> = alpha
        .iter()
        .zip(theta)
        .filter(|(a, _)| **a != 0.0)
        .map(|(a, th)| th * n2 / a)
        .collect();
    let scale = ratios.iter().fold(0.0f64, |m, r| m.max(r.abs())).max(1.0);
    let q = ratios[0];
    if let Some(r) = ratios.iter().find(|r| (**r - q).abs() > PROPORTIONAL_RTOL * scale) {
        return Err(Error::StructureViolation(format!(
            "theta is not proportional to alpha (implied q {q} vs {r})"
        )));
    }
    if alpha
        .iter()
        .zip(theta)
        .any(|(a, th)| *a == 0.0 && th.abs() > PROPORTIONAL_RTOL * scale)
    {
        return Err(Error::StructureViolation(
            "theta is nonzero where alpha vanishes".into(),
        ));
    }
    let structure = FieldStructure::proportional(alpha)?;
    let l1: f64 = alpha.iter().map(|a| a.abs()).sum();
    let measured = NetworkConfig::new(structure.w.clone(), theta.to_vec(), config.t())?;
    Ok(KnownStructurePlan {
        structure,
        measured,
        rescale: n2 / l1,
        target_variance: known_structure_bound(alpha, config.t())?,
    })
}

const DECOMPOSITION_TOL: f64 = 1e-10;

/// `1/(t² c_α) + c_γ²‖γ‖²` for `w = c_α α + c_γ γ`, evaluated as written.
pub fn nuisance_bound(alpha: &[f64], gamma: &[f64], w: &[f64], t: f64) -> Result<f64> {
    let n = alpha.len();
    for v in [gamma, w] {
        if v.len() != n {
            return Err(Error::Shape {
                expected: n,
                got: v.len(),
            });
        }
    }
    let a2 = dot(alpha, alpha);
    let g2 = dot(gamma, gamma);
    if a2 == 0.0 {
        return Err(Error::Argument("alpha must be nonzero".into()));
    }
    if dot(alpha, gamma).abs() > DECOMPOSITION_TOL * (a2 * g2).sqrt().max(1.0) {
        return Err(Error::Argument("gamma must be orthogonal to alpha".into()));
    }
    let c_alpha = dot(w, alpha) / a2;
    let c_gamma = if g2 > 0.0 { dot(w, gamma) / g2 } else { 0.0 };
    let residual = w
        .iter()
        .zip(alpha.iter().zip(gamma))
        .map(|(wi, (ai, gi))| (wi - c_alpha * ai - c_gamma * gi).powi(2))
        .sum::<f64>()
        .sqrt();
    if residual > DECOMPOSITION_TOL {
        return Err(Error::Decomposition { residual });
    }
    if !(c_alpha > 0.0) {
        return Err(Error::Argument(format!(
            "w has no positive component along alpha (c_alpha = {c_alpha})"
        )));
    }
    Ok(1.0 / (t * t * c_alpha) + c_gamma * c_gamma * g2)
}

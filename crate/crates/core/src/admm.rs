//! ADMM for the two-class coefficient model
//!
//! ```text
//! min_{β1, β2} ‖L − Ψ1β1 − Ψ2β2‖² + λ1‖β1‖² + λ2‖β2‖₁
//! ```
//!
//! with the splitting `u = β2`. Writing `Ψ = (Ψ1, Ψ2)`, `β = (β1, β2)`,
//! `A = (I, 0)` and `B = (0, I)`, each iteration runs
//!
//! 1. `β ← K⁻¹ (ΨᵀL + (ρ/2) Bᵀ(u + b))` with `K = ΨᵀΨ + λ1AᵀA + (ρ/2)BᵀB`,
//! 2. `u ← shrink(Bβ − b, λ2/ρ)` componentwise,
//! 3. `b ← b + (u − Bβ)`.
//!
//! `K` does not depend on the data, so it is factored once per dictionary
//! pair and configuration. The loop itself only needs `Bβ`, which is affine
//! in `u + b` through the Schur-complement inverse `B K⁻¹ Bᵀ`; that block and
//! `B K⁻¹ Ψᵀ` are formed once from the Cholesky factor. The full `β` is
//! recovered with one solve against `K` when the loop stops.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::dictionary::Dictionary;
use crate::error::{invalid, shape, Error, Result};

/// Hyperparameters of the ADMM solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Ridge weight on the smooth-class coefficients.
    pub lambda1: f64,
    /// L1 weight on the edge-class coefficients.
    pub lambda2: f64,
    /// Augmented Lagrangian weight.
    pub rho: f64,
    pub max_iters: usize,
    /// Stop once `‖u − Bβ‖₂ ≤ primal_tol · sqrt(m)`.
    pub primal_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { lambda1: 1e-2, lambda2: 1e-6, rho: 1e-4, max_iters: 100, primal_tol: 1e-6 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda1 >= 0.0) || !self.lambda1.is_finite() {
            return Err(invalid(format!("lambda1 must be nonnegative, got {}", self.lambda1)));
        }
        if !(self.lambda2 >= 0.0) || !self.lambda2.is_finite() {
            return Err(invalid(format!("lambda2 must be nonnegative, got {}", self.lambda2)));
        }
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(invalid(format!("rho must be positive, got {}", self.rho)));
        }
        if self.max_iters == 0 {
            return Err(invalid("max_iters must be at least 1"));
        }
        if !(self.primal_tol > 0.0) {
            return Err(invalid(format!("primal_tol must be positive, got {}", self.primal_tol)));
        }
        Ok(())
    }
}

/// Dense coefficient vector (`β1`, `β2`, the stacked `β`, or a single-class `ω`).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector(DVector<f64>);

impl CoefficientVector {
    pub fn new(values: DVector<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(len: usize) -> Self {
        Self(DVector::zeros(len))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn into_inner(self) -> DVector<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// Splits a stacked `(β1, β2)` vector at `m`.
    pub fn split(&self, m: usize) -> (CoefficientVector, CoefficientVector) {
        let head = self.0.rows(0, m).into_owned();
        let tail = self.0.rows(m, self.0.len() - m).into_owned();
        (Self(head), Self(tail))
    }
}

/// Iterates of the solver at termination.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub beta: CoefficientVector,
    pub u: DVector<f64>,
    pub b: DVector<f64>,
    pub iteration: usize,
    /// `‖u − Bβ‖₂` at the returned iterate.
    pub primal_residual: f64,
    /// Whether the residual test fired before the iteration budget ran out.
    pub converged: bool,
}

/// Result of [`admm_solve`].
#[derive(Debug, Clone)]
pub struct AdmmSolution {
    pub beta1: CoefficientVector,
    pub beta2: CoefficientVector,
    pub state: SolverState,
}

/// Proximal operator of `kappa·|·|`: `sign(a)·max(|a| − kappa, 0)`.
#[inline]
pub fn soft_threshold(a: f64, kappa: f64) -> f64 {
    if a > kappa {
        a - kappa
    } else if a < -kappa {
        a + kappa
    } else {
        0.0
    }
}

/// Side-by-side concatenation `(Ψ1, Ψ2)`.
pub fn stack_dictionaries(psi1: &Dictionary, psi2: &Dictionary) -> Result<DMatrix<f64>> {
    let (a, b) = (psi1.values(), psi2.values());
    if a.nrows() != b.nrows() {
        return Err(shape(format!("dictionaries have {} and {} rows", a.nrows(), b.nrows())));
    }
    if a.ncols() != b.ncols() {
        return Err(shape(format!("dictionaries have {} and {} columns", a.ncols(), b.ncols())));
    }
    let mut psi = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    psi.columns_mut(0, a.ncols()).copy_from(a);
    psi.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    Ok(psi)
}

/// Factored normal matrix `K` plus the operators the iteration reuses.
#[derive(Debug, Clone)]
pub struct NormalMatrix {
    m: usize,
    lambda1: f64,
    rho: f64,
    psi: DMatrix<f64>,
    k: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
    /// `B K⁻¹ Bᵀ`, m x m.
    schur_inv: DMatrix<f64>,
    /// `B K⁻¹ Ψᵀ`, m x n.
    data_to_edge: DMatrix<f64>,
}

impl NormalMatrix {
    /// Factors `K` for a stacked `n x 2m` matrix `psi`.
    pub fn from_stacked(psi: DMatrix<f64>, lambda1: f64, rho: f64) -> Result<Self> {
        if psi.ncols() % 2 != 0 || psi.ncols() == 0 {
            return Err(shape(format!("stacked dictionary needs an even column count, got {}", psi.ncols())));
        }
        if !(lambda1 > 0.0) || !(rho > 0.0) {
            return Err(Error::Singular { lambda1, rho });
        }
        let m = psi.ncols() / 2;
        let mut k = psi.tr_mul(&psi);
        for i in 0..m {
            k[(i, i)] += lambda1;
            k[(m + i, m + i)] += 0.5 * rho;
        }
        let chol = Cholesky::new(k.clone()).ok_or(Error::Singular { lambda1, rho })?;

        // K = LLᵀ and Bᵀ = (0; I) give L⁻¹Bᵀ = (0; L22⁻¹), so B K⁻¹ Bᵀ = L22⁻ᵀ L22⁻¹.
        let l = chol.l();
        let l22 = l.view((m, m), (m, m)).into_owned();
        let l22_inv = l22
            .solve_lower_triangular(&DMatrix::identity(m, m))
            .ok_or(Error::Singular { lambda1, rho })?;
        let schur_inv = l22_inv.tr_mul(&l22_inv);

        let k_inv_psi_t = chol.solve(&psi.transpose());
        let data_to_edge = k_inv_psi_t.rows(m, m).into_owned();

        Ok(Self { m, lambda1, rho, psi, k, chol, schur_inv, data_to_edge })
    }

    /// Half of the coefficient count (`m`, the size of one class).
    pub fn class_size(&self) -> usize {
        self.m
    }

    pub fn pixel_count(&self) -> usize {
        self.psi.nrows()
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// The assembled (unfactored) `K`.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.k
    }

    /// The stacked dictionary `(Ψ1, Ψ2)` this matrix was built from.
    pub fn stacked_dictionary(&self) -> &DMatrix<f64> {
        &self.psi
    }

    /// Solves `K x = rhs`.
    pub fn solve(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        if rhs.len() != 2 * self.m {
            return Err(shape(format!("right-hand side has length {}, expected {}", rhs.len(), 2 * self.m)));
        }
        Ok(self.chol.solve(rhs))
    }
}

pub fn build_normal_matrix(psi1: &Dictionary, psi2: &Dictionary, config: &SolverConfig) -> Result<NormalMatrix> {
    NormalMatrix::from_stacked(stack_dictionaries(psi1, psi2)?, config.lambda1, config.rho)
}

/// β-subproblem: solves `Kβ = ΨᵀL + (ρ/2)Bᵀ(u + b)`.
pub fn solve_beta(
    normal: &NormalMatrix,
    psi: &DMatrix<f64>,
    l: &DVector<f64>,
    u: &DVector<f64>,
    b: &DVector<f64>,
    rho: f64,
) -> Result<CoefficientVector> {
    let m = normal.m;
    if psi.ncols() != 2 * m || psi.nrows() != l.len() {
        return Err(shape(format!(
            "dictionary {}x{} incompatible with data length {} and class size {m}",
            psi.nrows(),
            psi.ncols(),
            l.len()
        )));
    }
    if u.len() != m || b.len() != m {
        return Err(shape(format!("u and b must have length {m}, got {} and {}", u.len(), b.len())));
    }
    let mut r = psi.tr_mul(l);
    let mut tail = r.rows_mut(m, m);
    tail.axpy(0.5 * rho, u, 1.0);
    tail.axpy(0.5 * rho, b, 1.0);
    normal.solve(&r).map(CoefficientVector)
}

/// Runs the ADMM iteration on data `l` (a patch in row-major vector form).
pub fn admm_solve(
    l: &DVector<f64>,
    psi1: &Dictionary,
    psi2: &Dictionary,
    normal: &NormalMatrix,
    config: &SolverConfig,
) -> Result<AdmmSolution> {
    config.validate()?;
    let m = normal.m;
    if psi1.basis_size() != m || psi2.basis_size() != m || psi1.pixel_count() != normal.pixel_count() {
        return Err(shape("dictionaries do not match the normal matrix"));
    }
    if l.len() != normal.pixel_count() {
        return Err(shape(format!("data has length {}, dictionaries have {} rows", l.len(), normal.pixel_count())));
    }
    if config.lambda1 != normal.lambda1 || config.rho != normal.rho {
        return Err(invalid("solver configuration differs from the one the normal matrix was built with"));
    }

    let kappa = config.lambda2 / config.rho;
    let half_rho = 0.5 * config.rho;
    let tol = config.primal_tol * (m as f64).sqrt();

    // Bβ = B K⁻¹ ΨᵀL + B K⁻¹ Bᵀ (ρ/2)(u + b)
    let edge_from_data = &normal.data_to_edge * l;
    let mut u = DVector::zeros(m);
    let mut b = DVector::zeros(m);
    let mut w = DVector::zeros(m);
    let mut edge = DVector::zeros(m);
    let mut iteration = 0;
    let mut converged = false;

    while iteration < config.max_iters {
        iteration += 1;
        w.copy_from(&u);
        w += &b;
        w *= half_rho;
        edge.copy_from(&edge_from_data);
        edge.gemv(1.0, &normal.schur_inv, &w, 1.0);

        let mut residual_sq = 0.0;
        for i in 0..m {
            let ui = soft_threshold(edge[i] - b[i], kappa);
            let ri = ui - edge[i];
            u[i] = ui;
            b[i] += ri;
            residual_sq += ri * ri;
        }
        if !residual_sq.is_finite() {
            return Err(Error::Divergence { iteration });
        }
        if residual_sq.sqrt() <= tol {
            converged = true;
            break;
        }
    }

    // The last β-step used u, b from before the final update, i.e. `w`.
    let mut r = normal.psi.tr_mul(l);
    let mut tail = r.rows_mut(m, m);
    tail += &w;
    let beta = CoefficientVector(normal.solve(&r)?);
    if !beta.is_finite() {
        return Err(Error::Divergence { iteration });
    }
    let (beta1, beta2) = beta.split(m);
    let primal_residual = (&u - beta2.as_vector()).norm();
    Ok(AdmmSolution {
        beta1,
        beta2,
        state: SolverState { beta, u, b, iteration, primal_residual, converged },
    })
}

/// Value of `‖L − Ψ1β1 − Ψ2β2‖² + λ1‖β1‖² + λ2‖β2‖₁`.
pub fn objective(
    psi: &DMatrix<f64>,
    l: &DVector<f64>,
    beta1: &DVector<f64>,
    beta2: &DVector<f64>,
    lambda1: f64,
    lambda2: f64,
) -> f64 {
    let m = beta1.len();
    let fit = l - psi.columns(0, m) * beta1 - psi.columns(m, beta2.len()) * beta2;
    fit.norm_squared() + lambda1 * beta1.norm_squared() + lambda2 * beta2.lp_norm(1)
}

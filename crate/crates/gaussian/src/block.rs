//! Block decomposition of Gaussian unitaries and the disentangling corollary.
//!
//! Any `n`-mode Gaussian unitary `G` factors, for `1 <= k <= n/2`, as
//!
//! `G = (1_k (x) G_tail) (G_core (x) 1_{n-2k}) G_p`
//!
//! with `G_p` passive, `G_core` on the first `2k` modes and `G_tail` on the
//! last `n - k` modes; moreover `G_core` can be chosen so that projecting its
//! vacuum output onto the vacuum of its first `k` modes leaves a vacuum on
//! the remaining `k`. The construction works through the stellar function of
//! `G|0>`: conditioning the first `k` modes on vacuum determines `G_tail` up
//! to a passive factor, and a singular value decomposition of the cross
//! block of the stellar matrix localizes the remaining correlations on the
//! first `2k` modes.

use nalgebra::DMatrix;
use symplectic_core::{complex_svd, unitary_to_orthosymp, SympMatrix, Tolerances};

use crate::error::GaussianError;
use crate::ops::{apply_to_moments, normal_mode_decomposition};
use crate::stellar::stellar_of_desc;
use crate::types::{GaussianMoments, GaussianUnitaryDesc};

/// Result of [`block_decompose`]: `G = (1_k (x) tail) (core (x) 1) passive`.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    /// Passive factor on all `n` modes (orthogonal linear part, zero
    /// displacement), applied first.
    pub passive: GaussianUnitaryDesc,
    /// Factor on the first `2k` modes, satisfying the vacuum-projection side
    /// condition.
    pub core: GaussianUnitaryDesc,
    /// Factor on the last `n - k` modes, applied last.
    pub tail: GaussianUnitaryDesc,
    pub k: usize,
}

impl BlockDecomposition {
    /// Multiplies the three factors back into an `n`-mode descriptor.
    pub fn reconstruct(&self) -> Result<GaussianUnitaryDesc, GaussianError> {
        let n = self.passive.n_modes();
        let core = self.core.embed(0, n)?;
        let tail = self.tail.embed(self.k, n)?;
        tail.compose(&core)?.compose(&self.passive)
    }
}

/// Williamson factor of a pure Gaussian state's covariance, with a purity
/// check (`d_i = 1` within `purity_tol`).
fn pure_state_unitary(
    st: &GaussianMoments,
    purity_tol: f64,
    tol: &Tolerances,
) -> Result<GaussianUnitaryDesc, GaussianError> {
    // The vacuum's covariance is fully degenerate, so its Williamson factor
    // is an arbitrary orthosymplectic matrix; pick the canonical preparation
    // instead so trivial inputs yield trivial factors.
    let n = st.n_modes();
    let identity_defect = (st.covariance() - DMatrix::<f64>::identity(2 * n, 2 * n))
        .amax()
        .max(st.mean().amax());
    if identity_defect <= purity_tol {
        return Ok(GaussianUnitaryDesc::identity(n));
    }
    let nm = normal_mode_decomposition(st, tol)?;
    let excess = nm.nu.iter().fold(0.0_f64, |acc, &nu| acc.max(2.0 * nu));
    if excess > purity_tol {
        return Err(GaussianError::NotPure {
            excess,
            tol: purity_tol,
        });
    }
    Ok(nm.as_unitary())
}

/// Decomposes `g` as `(1_k (x) tail) (core (x) 1_{n-2k}) passive`.
pub fn block_decompose(
    g: &GaussianUnitaryDesc,
    k: usize,
    tol: &Tolerances,
) -> Result<BlockDecomposition, GaussianError> {
    let n = g.n_modes();
    if k == 0 || 2 * k > n {
        return Err(GaussianError::InvalidBlockSize { k, n });
    }
    // Loose internal gate: intermediate factors stack several decompositions.
    let gate = tol.pair.max(1e3 * tol.recon);

    // The pure state psi = G|0>.
    let psi = apply_to_moments(g, &GaussianMoments::vacuum(n))?;

    // Condition the first k modes on vacuum; the conditional state is pure
    // and determines G_tilde with G_tilde|0> = <0|^k psi (normalized).
    let first_k: Vec<usize> = (0..k).collect();
    let conditioned = psi.condition_on_vacuum(&first_k)?;
    let g_tilde = pure_state_unitary(&conditioned, gate, tol)?;

    // phi = (1_k (x) G_tilde^dagger) psi has a stellar matrix with vanishing
    // bottom-right block; its cross block carries all correlations between
    // the first k and the last n - k modes.
    let phi_desc = g_tilde.embed(k, n)?.inverse().compose(g)?;
    let stellar = stellar_of_desc(&phi_desc, tol)?;
    let a = &stellar.a;
    let mut residual = 0.0_f64;
    for i in k..n {
        residual = residual.max(stellar.w[i].norm());
        for j in k..n {
            residual = residual.max(a[(i, j)].norm());
        }
    }
    if residual > gate {
        return Err(GaussianError::Inconsistent {
            detail: format!(
                "conditioned stellar matrix should vanish on the kept block; residual {residual:.3e}"
            ),
        });
    }

    // SVD of the k x (n-k) cross block A_2 = U Sigma V^dagger. Rotating the
    // last n - k modes by the passive unitary with matrix conj(V) turns the
    // cross coupling into U Sigma, supported on the first k columns, so the
    // state factorizes as (core (x) 1_{n-2k}) |0>.
    let a2 = DMatrix::from_fn(k, n - k, |i, j| a[(i, k + j)]);
    let svd = complex_svd(&a2, tol)?;
    let u2 = svd.v.map(|c| c.conj());
    let o_u2 = SympMatrix::new(unitary_to_orthosymp(&u2, tol)?, tol)?;
    let g_u2 = GaussianUnitaryDesc::from_symplectic(o_u2);

    let chi_desc = g_u2.embed(k, n)?.inverse().compose(&phi_desc)?;
    let chi = apply_to_moments(&chi_desc, &GaussianMoments::vacuum(n))?;

    // chi must be (core (x) 1)|0>: beyond mode 2k it is exactly the vacuum.
    let mut tail_residual = 0.0_f64;
    for q in 4 * k..2 * n {
        tail_residual = tail_residual.max(chi.mean()[q].abs());
        for p in 0..2 * n {
            let want = if p == q { 1.0 } else { 0.0 };
            tail_residual = tail_residual.max((chi.covariance()[(p, q)] - want).abs());
        }
    }
    if tail_residual > gate {
        return Err(GaussianError::Inconsistent {
            detail: format!(
                "localized state is not vacuum outside the first 2k modes; residual {tail_residual:.3e}"
            ),
        });
    }

    let core_modes: Vec<usize> = (0..2 * k).collect();
    let core_state = chi.reduce(&core_modes)?;
    let core = pure_state_unitary(&core_state, gate, tol)?;

    // tail = G_tilde G_{U2} on the last n - k modes.
    let tail = g_tilde.compose(&g_u2)?;

    // passive = (core (x) 1)^dagger (1 (x) tail)^dagger g.
    let residual_desc = core
        .embed(0, n)?
        .inverse()
        .compose(&tail.embed(k, n)?.inverse())?
        .compose(g)?;
    let ortho = residual_desc.s().orthogonality_defect();
    let disp = residual_desc.r().amax();
    if ortho > gate || disp > gate {
        return Err(GaussianError::NotPassive {
            detail: format!(
                "residual factor has orthogonality defect {ortho:.3e} and displacement {disp:.3e}"
            ),
        });
    }
    let passive = GaussianUnitaryDesc::from_symplectic(residual_desc.s().clone());

    Ok(BlockDecomposition {
        passive,
        core,
        tail,
        k,
    })
}

/// Disentangling unitary for a bipartite `m + m`-mode Gaussian state with
/// `m` even: a `(3m/2)`-mode Gaussian unitary which, applied to the last
/// `3m/2` modes, maps the state to one separable across the `m | m` split.
pub fn disentangle_unitary(
    st: &GaussianMoments,
    tol: &Tolerances,
) -> Result<GaussianUnitaryDesc, GaussianError> {
    let n = st.n_modes();
    if n % 2 != 0 {
        return Err(GaussianError::OddPartySize { m: n });
    }
    let m = n / 2;
    if m % 2 != 0 {
        return Err(GaussianError::OddPartySize { m });
    }
    // rho = G tau G^dagger with tau thermal; factor G with k = m/2. Undoing
    // the tail factor on the last 3m/2 modes leaves a mixture of products
    // across the m | m split.
    let nm = normal_mode_decomposition(st, tol)?;
    let bd = block_decompose(&nm.as_unitary(), m / 2, tol)?;
    Ok(bd.tail.inverse())
}

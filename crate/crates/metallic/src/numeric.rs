//! Crate-internal floating-point helpers shared by the numeric paths.

use nalgebra::{DMatrix, DVector};

/// Outcome of a rank-revealing nullspace computation.
#[derive(Debug)]
pub(crate) struct FloatNullspace {
    pub rank: usize,
    pub basis: Vec<DVector<f64>>,
}

/// Why a float rank decision was refused.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RankAmbiguity {
    pub value: f64,
    pub cutoff: f64,
}

/// Right nullspace of `m` by SVD with a relative singular-value cutoff.
///
/// Singular values below `rel_cutoff · σ_max` count as zero. A singular
/// value within a factor 10 of the cutoff (on either side) makes the
/// rank decision unreliable and is reported as [`RankAmbiguity`] instead
/// of silently picking a side. The zero matrix has a well-defined full
/// nullspace and never trips the guard.
pub(crate) fn svd_nullspace(
    m: &DMatrix<f64>,
    rel_cutoff: f64,
) -> Result<FloatNullspace, RankAmbiguity> {
    let cols = m.ncols();
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("V^T requested");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    if sigma_max == 0.0 {
        let basis = (0..cols)
            .map(|j| DVector::from_fn(cols, |i, _| if i == j { 1.0 } else { 0.0 }))
            .collect();
        return Ok(FloatNullspace { rank: 0, basis });
    }
    let cutoff = rel_cutoff * sigma_max;
    for &s in svd.singular_values.iter() {
        if s > cutoff / 10.0 && s < cutoff * 10.0 {
            return Err(RankAmbiguity { value: s, cutoff });
        }
    }
    let rank = svd.singular_values.iter().filter(|&&s| s > cutoff).count();
    // nalgebra sorts singular values in decreasing order, so rows of V^T
    // from `rank` on span the nullspace. Rows beyond the stored V^T
    // (when rows < cols) are genuinely null directions too, but nalgebra
    // keeps the full `cols`-row V^T only for wide matrices when asked;
    // `svd` returns min(rows, cols) rows, so append the missing
    // complement via a dense kernel completion when needed.
    let stored = v_t.nrows();
    let mut basis: Vec<DVector<f64>> = (rank..stored)
        .map(|r| v_t.row(r).transpose())
        .collect();
    if stored < cols {
        // Wide matrix: the thin SVD stores only min(rows, cols) right
        // singular vectors. Anything orthogonal to all of them is also
        // null; complete the basis by Gram–Schmidt over the standard
        // basis.
        let mut known: Vec<DVector<f64>> = (0..stored).map(|r| v_t.row(r).transpose()).collect();
        for j in 0..cols {
            if known.len() >= cols {
                break;
            }
            let mut candidate = DVector::from_fn(cols, |i, _| if i == j { 1.0 } else { 0.0 });
            for b in &known {
                let proj = b.dot(&candidate);
                candidate -= b * proj;
            }
            let norm = candidate.norm();
            if norm > 1e-8 {
                let unit = candidate / norm;
                known.push(unit.clone());
                basis.push(unit);
            }
        }
    }
    Ok(FloatNullspace { rank, basis })
}

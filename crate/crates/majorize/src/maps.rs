//! Concrete families of positive linear maps between matrix spaces:
//! Kraus-form maps, Schur multipliers, block pinchings and averages, states,
//! block-diagonal conditional expectations, and discrete densities.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hermitian::{eigh, HermitianMatrix};
use crate::tol;
use crate::C64;

/// A tagged union of concrete positive-map families.
#[derive(Clone, Debug)]
pub enum PositiveMapSpec {
    /// `A -> sum_i W_i* A W_i` with every `W_i` of shape `m x n`
    /// (input dimension `m`, output dimension `n`).
    ChoiKraus { kraus: Vec<DMatrix<C64>> },
    /// Entrywise (Schur) product `A -> A o B` with `B` positive semidefinite.
    SchurMultiplier { b: HermitianMatrix },
    /// `2n x 2n -> n x n`, `A -> alpha A11 + (1 - alpha) A22`, `alpha` in (0, 1).
    BlockPinch { alpha: f64 },
    /// The named preset `A -> (A11 + A22) / 2`.
    BlockAverage,
    /// `A -> [tr(rho A)]` as a 1x1 matrix, `rho` a density matrix.
    State { rho: HermitianMatrix },
    /// Pinching onto the block-diagonal subalgebra given by an index
    /// partition: off-block entries are zeroed.
    BlockDiagonalExpectation { partition: Vec<Vec<usize>> },
    /// `A -> sum_k w_k d_k* A d_k` with positive weights.
    DiscreteDensity { atoms: Vec<(DMatrix<C64>, f64)> },
}

/// Structural classification of a map: unital / contractive flags together
/// with the numeric defects they are derived from.
#[derive(Clone, Copy, Debug)]
pub struct MapClassification {
    pub unital: bool,
    pub contractive: bool,
    /// Operator-norm distance of the unit image from the identity.
    pub unit_defect: f64,
    /// Largest eigenvalue of the unit image minus 1.
    pub contraction_margin: f64,
}

impl PositiveMapSpec {
    /// Validated Kraus-form constructor: at least one operator, all of equal
    /// shape.
    pub fn choi_kraus(kraus: Vec<DMatrix<C64>>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::BadParameter {
                detail: "a Kraus-form map needs at least one operator".to_string(),
            });
        }
        let shape = kraus[0].shape();
        for (i, w) in kraus.iter().enumerate() {
            if w.shape() != shape {
                return Err(Error::DimensionMismatch {
                    expected: shape.0,
                    found: w.nrows(),
                    context: format!("Kraus operator {i} shape"),
                });
            }
        }
        Ok(PositiveMapSpec::ChoiKraus { kraus })
    }

    /// Validated Schur-multiplier constructor: `b` must be PSD within the
    /// reconstruction tolerance.
    pub fn schur(b: HermitianMatrix) -> Result<Self> {
        let min = b.min_eigenvalue()?;
        if min < -tol::reconstruction(b.dim()) {
            return Err(Error::NotPSD {
                min_eigenvalue: min,
            });
        }
        Ok(PositiveMapSpec::SchurMultiplier { b })
    }

    pub fn block_pinch(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::BadParameter {
                detail: format!("block pinch weight must lie in (0, 1), got {alpha}"),
            });
        }
        Ok(PositiveMapSpec::BlockPinch { alpha })
    }

    /// Validated state constructor: `rho` PSD with unit trace.
    pub fn state(rho: HermitianMatrix) -> Result<Self> {
        let tau = tol::reconstruction(rho.dim());
        let min = rho.min_eigenvalue()?;
        if min < -tau {
            return Err(Error::NotPSD {
                min_eigenvalue: min,
            });
        }
        let trace_defect = (rho.trace() - 1.0).abs();
        if trace_defect > tau {
            return Err(Error::NotDensity {
                detail: format!("state trace deviates from 1 by {trace_defect:.3e}"),
            });
        }
        Ok(PositiveMapSpec::State { rho })
    }

    /// Validated block-expectation constructor: the blocks must partition
    /// `0..n` for some `n` (disjoint, non-empty, covering all indices).
    pub fn block_expectation(partition: Vec<Vec<usize>>) -> Result<Self> {
        if partition.is_empty() || partition.iter().any(|b| b.is_empty()) {
            return Err(Error::BadParameter {
                detail: "block expectation needs non-empty blocks".to_string(),
            });
        }
        let mut all: Vec<usize> = partition.iter().flatten().copied().collect();
        let n = all.len();
        all.sort_unstable();
        if all.iter().enumerate().any(|(k, &i)| k != i) {
            return Err(Error::BadParameter {
                detail: format!("blocks must partition 0..{n} without gaps or repeats"),
            });
        }
        Ok(PositiveMapSpec::BlockDiagonalExpectation { partition })
    }

    /// Validated discrete-density constructor: positive weights, equal atom
    /// shapes.
    pub fn discrete_density(atoms: Vec<(DMatrix<C64>, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::BadParameter {
                detail: "a discrete density needs at least one atom".to_string(),
            });
        }
        let shape = atoms[0].0.shape();
        for (k, (d, w)) in atoms.iter().enumerate() {
            if *w <= 0.0 || !w.is_finite() {
                return Err(Error::BadParameter {
                    detail: format!("atom weight {k} must be finite and > 0, got {w}"),
                });
            }
            if d.shape() != shape {
                return Err(Error::DimensionMismatch {
                    expected: shape.0,
                    found: d.nrows(),
                    context: format!("density atom {k} shape"),
                });
            }
        }
        Ok(PositiveMapSpec::DiscreteDensity { atoms })
    }

    /// Short lowercase tag naming the variant (also the JSON `kind`).
    pub fn kind(&self) -> &'static str {
        match self {
            PositiveMapSpec::ChoiKraus { .. } => "choi_kraus",
            PositiveMapSpec::SchurMultiplier { .. } => "schur",
            PositiveMapSpec::BlockPinch { .. } => "block_pinch",
            PositiveMapSpec::BlockAverage => "block_average",
            PositiveMapSpec::State { .. } => "state",
            PositiveMapSpec::BlockDiagonalExpectation { .. } => "block_expectation",
            PositiveMapSpec::DiscreteDensity { .. } => "discrete_density",
        }
    }

    /// Expected input dimension, when the variant determines one
    /// (block pinches and averages accept any even dimension).
    pub fn input_dim(&self) -> Option<usize> {
        match self {
            PositiveMapSpec::ChoiKraus { kraus } => Some(kraus[0].nrows()),
            PositiveMapSpec::SchurMultiplier { b } => Some(b.dim()),
            PositiveMapSpec::BlockPinch { .. } | PositiveMapSpec::BlockAverage => None,
            PositiveMapSpec::State { rho } => Some(rho.dim()),
            PositiveMapSpec::BlockDiagonalExpectation { partition } => {
                Some(partition.iter().map(Vec::len).sum())
            }
            PositiveMapSpec::DiscreteDensity { atoms } => Some(atoms[0].0.nrows()),
        }
    }

    /// Output dimension for a given input dimension, after checking the
    /// input dimension is acceptable.
    pub fn output_dim(&self, input_dim: usize) -> Result<usize> {
        match self {
            PositiveMapSpec::BlockPinch { .. } | PositiveMapSpec::BlockAverage => {
                if input_dim % 2 != 0 || input_dim == 0 {
                    return Err(Error::DimensionMismatch {
                        expected: input_dim + input_dim % 2,
                        found: input_dim,
                        context: "block pinch input must have even dimension".to_string(),
                    });
                }
                Ok(input_dim / 2)
            }
            PositiveMapSpec::ChoiKraus { kraus } => {
                self.check_input(input_dim)?;
                Ok(kraus[0].ncols())
            }
            PositiveMapSpec::State { .. } => {
                self.check_input(input_dim)?;
                Ok(1)
            }
            PositiveMapSpec::DiscreteDensity { atoms } => {
                self.check_input(input_dim)?;
                Ok(atoms[0].0.ncols())
            }
            _ => {
                self.check_input(input_dim)?;
                Ok(input_dim)
            }
        }
    }

    fn check_input(&self, input_dim: usize) -> Result<()> {
        if let Some(expected) = self.input_dim() {
            if expected != input_dim {
                return Err(Error::DimensionMismatch {
                    expected,
                    found: input_dim,
                    context: format!("input of {} map", self.kind()),
                });
            }
        }
        Ok(())
    }

    /// Apply the map to an arbitrary (not necessarily Hermitian) matrix.
    /// All families are linear, so this is the common workhorse; the public
    /// [`apply`] re-symmetrizes Hermitian results.
    pub(crate) fn apply_raw(&self, m: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        let n = m.nrows();
        self.check_input(n)?;
        match self {
            PositiveMapSpec::ChoiKraus { kraus } => {
                let out = kraus[0].ncols();
                let mut acc = DMatrix::<C64>::zeros(out, out);
                for w in kraus {
                    acc += w.adjoint() * m * w;
                }
                Ok(acc)
            }
            PositiveMapSpec::SchurMultiplier { b } => {
                Ok(DMatrix::from_fn(n, n, |i, j| m[(i, j)] * b.matrix()[(i, j)]))
            }
            PositiveMapSpec::BlockPinch { alpha } => {
                let half = self.output_dim(n)?;
                let a11 = m.view((0, 0), (half, half));
                let a22 = m.view((half, half), (half, half));
                Ok(a11 * C64::new(*alpha, 0.0) + a22 * C64::new(1.0 - alpha, 0.0))
            }
            PositiveMapSpec::BlockAverage => {
                let half = self.output_dim(n)?;
                let a11 = m.view((0, 0), (half, half));
                let a22 = m.view((half, half), (half, half));
                Ok((a11 + a22) * C64::new(0.5, 0.0))
            }
            PositiveMapSpec::State { rho } => {
                let value = (rho.matrix() * m).trace();
                Ok(DMatrix::from_element(1, 1, value))
            }
            PositiveMapSpec::BlockDiagonalExpectation { partition } => {
                let mut out = DMatrix::<C64>::zeros(n, n);
                for block in partition {
                    for &i in block {
                        for &j in block {
                            out[(i, j)] = m[(i, j)];
                        }
                    }
                }
                Ok(out)
            }
            PositiveMapSpec::DiscreteDensity { atoms } => {
                let out = atoms[0].0.ncols();
                let mut acc = DMatrix::<C64>::zeros(out, out);
                for (d, w) in atoms {
                    acc += (d.adjoint() * m * d) * C64::new(*w, 0.0);
                }
                Ok(acc)
            }
        }
    }
}

/// Apply a positive map to a Hermitian matrix. The result is re-symmetrized
/// so downstream code sees an exactly Hermitian value.
pub fn apply(phi: &PositiveMapSpec, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let raw = phi.apply_raw(a.matrix())?;
    Ok(HermitianMatrix::symmetrize(&raw))
}

/// Classify a map as unital / contractive by examining its unit image.
///
/// Block pinches and averages are unital for every admissible dimension
/// (`alpha I + (1 - alpha) I = I`), so they classify exactly without picking
/// a dimension.
pub fn classify(phi: &PositiveMapSpec) -> MapClassification {
    match phi {
        PositiveMapSpec::BlockPinch { .. } | PositiveMapSpec::BlockAverage => MapClassification {
            unital: true,
            contractive: true,
            unit_defect: 0.0,
            contraction_margin: 0.0,
        },
        _ => {
            let n = phi
                .input_dim()
                .expect("all dimension-determined variants report an input dimension");
            let unit_image = apply(phi, &HermitianMatrix::identity(n))
                .expect("identity has the declared input dimension");
            let out = unit_image.dim();
            let defect_matrix = unit_image.sub(&HermitianMatrix::identity(out));
            let unit_defect = defect_matrix.op_norm();
            let top = eigh(&unit_image)
                .map(|d| d.eigenvalues[0])
                .unwrap_or(f64::INFINITY);
            let contraction_margin = top - 1.0;
            let tau = tol::reconstruction(out);
            MapClassification {
                unital: unit_defect <= tau,
                contractive: contraction_margin <= tau,
                unit_defect,
                contraction_margin,
            }
        }
    }
}

/// Compose a map with a state on its output side, producing the state-type
/// functional `A -> tr(rho phi(A))`.
///
/// The composite density is recovered entrywise from the defining identity
/// `tr(sigma A) = tr(rho phi(A))`; for unital `phi` it is again a valid
/// density. `rho`'s dimension must match the map's output dimension, and for
/// block pinches/averages it fixes the input dimension to `2 * dim(rho)`.
pub fn compose_with_state(
    phi: &PositiveMapSpec,
    rho: &HermitianMatrix,
) -> Result<PositiveMapSpec> {
    // Validate rho as a density up front.
    let rho_spec = PositiveMapSpec::state(rho.clone())?;
    let PositiveMapSpec::State { rho } = rho_spec else {
        unreachable!()
    };
    let input_dim = match phi.input_dim() {
        Some(n) => {
            let out = phi.output_dim(n)?;
            if out != rho.dim() {
                return Err(Error::DimensionMismatch {
                    expected: out,
                    found: rho.dim(),
                    context: "state dimension vs map output".to_string(),
                });
            }
            n
        }
        None => 2 * rho.dim(),
    };
    let mut sigma = DMatrix::<C64>::zeros(input_dim, input_dim);
    for i in 0..input_dim {
        for j in 0..input_dim {
            // sigma_ij = tr(rho phi(E_ji)) where E_ji has a single 1 entry.
            let mut basis = DMatrix::<C64>::zeros(input_dim, input_dim);
            basis[(j, i)] = C64::new(1.0, 0.0);
            let image = phi.apply_raw(&basis)?;
            sigma[(i, j)] = (rho.matrix() * image).trace();
        }
    }
    let sigma = HermitianMatrix::symmetrize(&sigma);
    PositiveMapSpec::state(sigma)
}

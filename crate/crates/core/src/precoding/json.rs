//! JSON form of a sparse precoder.
//!
//! ```json
//! {
//!   "structure": "column_sparse",
//!   "b": 8, "u": 2, "k": 2, "beta": 0.73,
//!   "supports": [[0, 3], [1, 2]],
//!   "values": [[re, im, re, im], [re, im, re, im]]
//! }
//! ```
//!
//! For `column_sparse`, `supports[u]` and `values[u]` describe column `u`.
//! For `row_structured`, `supports` holds the single shared row set and
//! `values[i]` carries the U entries of row `supports[0][i]`. Complex values
//! are interleaved as real, imaginary pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{SparseLayout, SparsePrecoder, SparseStructure};
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SparsePrecoderJson {
    pub structure: SparseStructure,
    pub b: usize,
    pub u: usize,
    pub k: usize,
    pub beta: f64,
    pub supports: Vec<Vec<usize>>,
    pub values: Vec<Vec<f64>>,
}

fn interleave(v: &[Complex64]) -> Vec<f64> {
    v.iter().flat_map(|z| [z.re, z.im]).collect()
}

fn deinterleave(v: &[f64]) -> Result<Vec<Complex64>> {
    if v.len() % 2 != 0 {
        return Err(Error::InvalidParameter(
            "interleaved values need an even length".into(),
        ));
    }
    Ok(v.chunks_exact(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect())
}

impl From<&SparsePrecoder> for SparsePrecoderJson {
    fn from(p: &SparsePrecoder) -> Self {
        let (supports, values) = match p.layout() {
            SparseLayout::ColumnSparse { supports, values } => (
                supports.clone(),
                values.iter().map(|v| interleave(v)).collect(),
            ),
            SparseLayout::RowStructured { rows, values } => (
                vec![rows.clone()],
                (0..values.rows())
                    .map(|i| interleave(values.row(i)))
                    .collect(),
            ),
        };
        Self {
            structure: p.structure(),
            b: p.b(),
            u: p.u(),
            k: p.k(),
            beta: p.beta(),
            supports,
            values,
        }
    }
}

impl TryFrom<SparsePrecoderJson> for SparsePrecoder {
    type Error = Error;

    fn try_from(j: SparsePrecoderJson) -> Result<Self> {
        let layout = match j.structure {
            SparseStructure::ColumnSparse => SparseLayout::ColumnSparse {
                values: j
                    .values
                    .iter()
                    .map(|v| deinterleave(v))
                    .collect::<Result<_>>()?,
                supports: j.supports,
            },
            SparseStructure::RowStructured => {
                let [rows]: [Vec<usize>; 1] = j.supports.try_into().map_err(|_| {
                    Error::InvalidParameter(
                        "row-structured precoder needs exactly one support set".into(),
                    )
                })?;
                let values: Vec<Vec<Complex64>> = j
                    .values
                    .iter()
                    .map(|v| deinterleave(v))
                    .collect::<Result<_>>()?;
                SparseLayout::RowStructured {
                    rows,
                    values: ComplexMatrix::from_rows(&values)?,
                }
            }
        };
        let p = SparsePrecoder::from_parts(j.b, j.beta, layout)?;
        if (p.u(), p.k()) != (j.u, j.k) {
            return Err(Error::InvalidParameter(format!(
                "declared U = {}, K = {} but data has U = {}, K = {}",
                j.u,
                j.k,
                p.u(),
                p.k()
            )));
        }
        Ok(p)
    }
}

impl SparsePrecoder {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SparsePrecoderJson::from(self)).expect("precoder serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let dto: SparsePrecoderJson = serde_json::from_str(s)
            .map_err(|e| Error::InvalidParameter(format!("precoder JSON: {e}")))?;
        dto.try_into()
    }
}

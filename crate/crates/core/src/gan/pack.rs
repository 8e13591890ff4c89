use super::GanError;
use crate::nn::Matrix;

/// Concatenates consecutive groups of `pack` rows featurewise:
/// `[k·p × n] → [k × p·n]`. Rows are contiguous, so this is a reshape.
pub fn pack_inputs(batch: &Matrix, pack: usize) -> Result<Matrix, GanError> {
    if pack == 0 || batch.rows() % pack != 0 {
        return Err(GanError::Contract(format!(
            "{} rows cannot be packed in groups of {pack}",
            batch.rows()
        )));
    }
    if pack == 1 {
        return Ok(batch.clone());
    }
    Ok(Matrix::from_vec(
        batch.rows() / pack,
        batch.cols() * pack,
        batch.as_slice().to_vec(),
    )?)
}

/// Inverse of [`pack_inputs`], used to route packed input gradients back to
/// individual samples.
pub fn unpack_inputs(packed: &Matrix, pack: usize) -> Result<Matrix, GanError> {
    if pack == 0 || packed.cols() % pack != 0 {
        return Err(GanError::Contract(format!(
            "{} columns cannot be split into {pack} samples",
            packed.cols()
        )));
    }
    Ok(Matrix::from_vec(
        packed.rows() * pack,
        packed.cols() / pack,
        packed.as_slice().to_vec(),
    )?)
}

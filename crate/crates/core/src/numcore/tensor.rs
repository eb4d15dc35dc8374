use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::Matrix;

/// Dense row-major three-axis tensor of finite reals.
///
/// Used for `samples × layers × dims` embeddings and `samples × channels × time`
/// signal epochs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tensor3 {
    dims: [usize; 3],
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn new(dims: [usize; 3], data: Vec<f64>) -> Result<Self> {
        let expected = dims.iter().product::<usize>();
        if expected != data.len() {
            return Err(Error::ShapeMismatch {
                left: dims.to_vec(),
                right: vec![data.len()],
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("tensor"));
        }
        Ok(Self { dims, data })
    }

    pub fn from_fn(dims: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(dims.iter().product());
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    data.push(f(i, j, k));
                }
            }
        }
        Self::new(dims, data)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.dims[1] + j) * self.dims[2] + k]
    }

    /// Fixes the middle axis: returns the `dims[0] × dims[2]` slice at `j`.
    pub fn middle_slice(&self, j: usize) -> Matrix {
        let [n, _, k] = self.dims;
        let mut out = Vec::with_capacity(n * k);
        for i in 0..n {
            let start = (i * self.dims[1] + j) * k;
            out.extend_from_slice(&self.data[start..start + k]);
        }
        Matrix::new(n, k, out).expect("slice of a finite tensor is finite")
    }

    /// Flattens the trailing two axes: `dims[0] × (dims[1]·dims[2])`.
    pub fn flatten_trailing(&self) -> Matrix {
        Matrix::new(self.dims[0], self.dims[1] * self.dims[2], self.data.clone()).expect("finite tensor")
    }

    /// Inverse of [`Tensor3::flatten_trailing`].
    pub fn from_flat(m: &Matrix, middle: usize) -> Result<Self> {
        if middle == 0 || !m.cols().is_multiple_of(middle) {
            return Err(Error::DimMismatch(format!(
                "{} features cannot be split into {middle} groups",
                m.cols()
            )));
        }
        Self::new([m.rows(), middle, m.cols() / middle], m.as_slice().to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slices_follow_row_major_order() {
        let t = Tensor3::from_fn([2, 3, 2], |i, j, k| (i * 100 + j * 10 + k) as f64).unwrap();
        assert_eq!(t.get(1, 2, 1), 121.0);
        let s = t.middle_slice(1);
        assert_eq!(s.as_slice(), &[10.0, 11.0, 110.0, 111.0]);
        let flat = t.flatten_trailing();
        assert_eq!(Tensor3::from_flat(&flat, 3).unwrap(), t);
    }
}

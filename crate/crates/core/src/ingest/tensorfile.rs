//! Checksummed binary tensor files.
//!
//! ```text
//! offset  size        field
//! 0       8           magic, ASCII "TRJL0001"
//! 8       1           dtype: 1 = f32, 2 = f64
//! 9       1           ndim: 2 or 3
//! 10      8·ndim      dims, u64 little-endian, outermost first
//! ..      n·size      payload, row-major, little-endian IEEE-754
//! ..      8           FNV-1a 64 of the payload bytes, u64 little-endian
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::numcore::{Matrix, Tensor3};

pub const MAGIC: &[u8; 8] = b"TRJL0001";
const HEADER_FIXED: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dtype {
    F32,
    F64,
}

impl Dtype {
    pub fn tag(self) -> u8 {
        match self {
            Dtype::F32 => 1,
            Dtype::F64 => 2,
        }
    }

    pub fn size(self) -> usize {
        match self {
            Dtype::F32 => 4,
            Dtype::F64 => 8,
        }
    }

    fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            1 => Ok(Dtype::F32),
            2 => Ok(Dtype::F64),
            other => Err(Error::UnsupportedHeader(format!("dtype tag {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TensorValues {
    F32(Vec<f32>),
    F64(Vec<f64>),
}

impl TensorValues {
    pub fn len(&self) -> usize {
        match self {
            TensorValues::F32(v) => v.len(),
            TensorValues::F64(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dtype(&self) -> Dtype {
        match self {
            TensorValues::F32(_) => Dtype::F32,
            TensorValues::F64(_) => Dtype::F64,
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            TensorValues::F32(v) => v.iter().map(|&x| f64::from(x)).collect(),
            TensorValues::F64(v) => v.clone(),
        }
    }
}

/// A 2- or 3-axis tensor as stored on disk.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorData {
    pub dims: Vec<usize>,
    pub values: TensorValues,
}

impl TensorData {
    pub fn new(dims: Vec<usize>, values: TensorValues) -> Result<Self> {
        if !(2..=3).contains(&dims.len()) {
            return Err(Error::UnsupportedHeader(format!("ndim {}", dims.len())));
        }
        if dims.contains(&0) {
            return Err(Error::UnsupportedHeader(format!("zero-length axis in {dims:?}")));
        }
        let expected = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
        if expected != Some(values.len()) {
            return Err(Error::ShapeMismatch {
                left: dims,
                right: vec![values.len()],
            });
        }
        Ok(Self { dims, values })
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        Self {
            dims: vec![m.rows(), m.cols()],
            values: TensorValues::F64(m.as_slice().to_vec()),
        }
    }

    pub fn from_tensor3(t: &Tensor3) -> Self {
        Self {
            dims: t.dims().to_vec(),
            values: TensorValues::F64(t.as_slice().to_vec()),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        if self.dims.len() != 2 {
            return Err(Error::DimMismatch(format!(
                "expected a 2-axis tensor, found {:?}",
                self.dims
            )));
        }
        Matrix::new(self.dims[0], self.dims[1], self.values.to_f64())
    }

    pub fn to_tensor3(&self) -> Result<Tensor3> {
        if self.dims.len() != 3 {
            return Err(Error::DimMismatch(format!(
                "expected a 3-axis tensor, found {:?}",
                self.dims
            )));
        }
        Tensor3::new([self.dims[0], self.dims[1], self.dims[2]], self.values.to_f64())
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    bytes
        .iter()
        .fold(OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}

pub fn encode_tensor(t: &TensorData) -> Vec<u8> {
    let dtype = t.values.dtype();
    let payload_len = t.values.len() * dtype.size();
    let mut out = Vec::with_capacity(HEADER_FIXED + 8 * t.dims.len() + payload_len + 8);
    out.extend_from_slice(MAGIC);
    out.push(dtype.tag());
    out.push(t.dims.len() as u8);
    for &d in &t.dims {
        out.extend_from_slice(&(d as u64).to_le_bytes());
    }
    let payload_start = out.len();
    match &t.values {
        TensorValues::F32(v) => v.iter().for_each(|x| out.extend_from_slice(&x.to_le_bytes())),
        TensorValues::F64(v) => v.iter().for_each(|x| out.extend_from_slice(&x.to_le_bytes())),
    }
    let checksum = fnv1a64(&out[payload_start..]);
    out.extend_from_slice(&checksum.to_le_bytes());
    out
}

pub fn decode_tensor(bytes: &[u8]) -> Result<TensorData> {
    if bytes.len() < HEADER_FIXED {
        return Err(Error::TruncatedFile {
            expected: HEADER_FIXED,
            found: bytes.len(),
        });
    }
    if &bytes[..8] != MAGIC {
        return Err(Error::BadMagic);
    }
    let dtype = Dtype::from_tag(bytes[8])?;
    let ndim = bytes[9] as usize;
    if !(2..=3).contains(&ndim) {
        return Err(Error::UnsupportedHeader(format!("ndim {ndim}")));
    }
    let header_len = HEADER_FIXED + 8 * ndim;
    if bytes.len() < header_len {
        return Err(Error::TruncatedFile {
            expected: header_len,
            found: bytes.len(),
        });
    }
    let dims: Vec<usize> = bytes[HEADER_FIXED..header_len]
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().expect("8-byte chunk")) as usize)
        .collect();
    let count = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::UnsupportedHeader(format!("dims {dims:?} overflow")))?;
    let payload_len = count
        .checked_mul(dtype.size())
        .ok_or_else(|| Error::UnsupportedHeader(format!("dims {dims:?} overflow")))?;
    let expected = header_len + payload_len + 8;
    if bytes.len() < expected {
        return Err(Error::TruncatedFile {
            expected,
            found: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(Error::Parse(format!(
            "{} trailing bytes after the checksum",
            bytes.len() - expected
        )));
    }
    let payload = &bytes[header_len..header_len + payload_len];
    let stored = u64::from_le_bytes(bytes[expected - 8..].try_into().expect("8-byte footer"));
    let computed = fnv1a64(payload);
    if stored != computed {
        return Err(Error::ChecksumMismatch { stored, computed });
    }
    let values = match dtype {
        Dtype::F32 => TensorValues::F32(
            payload
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes(c.try_into().expect("4-byte chunk")))
                .collect(),
        ),
        Dtype::F64 => TensorValues::F64(
            payload
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                .collect(),
        ),
    };
    TensorData::new(dims, values)
}

/// Writes via a temporary sibling file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::param("path", format!("{} has no file name", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp", file_name.to_string_lossy()));
    let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn write_tensor(path: impl AsRef<Path>, t: &TensorData) -> Result<()> {
    write_atomic(path.as_ref(), &encode_tensor(t))
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<TensorData> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_tensor(&bytes)
}

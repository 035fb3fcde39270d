//! In-memory named tensor container.
//!
//! Holds checkpoint weights and exported frame tensors as raw little-endian
//! payload bytes. The on-disk container format lives in the `timelayer`
//! crate; this module only owns the data model and its invariants: unique
//! nonempty names, and payload length equal to element count times dtype
//! size.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dtype {
    F32,
    U8,
}

impl Dtype {
    pub fn size_bytes(self) -> usize {
        match self {
            Dtype::F32 => 4,
            Dtype::U8 => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Dtype::F32 => "f32",
            Dtype::U8 => "u8",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "f32" => Some(Dtype::F32),
            "u8" => Some(Dtype::U8),
            _ => None,
        }
    }
}

/// One named dense tensor; payload bytes are little-endian.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorEntry {
    name: String,
    dtype: Dtype,
    shape: Vec<usize>,
    data: Vec<u8>,
}

impl TensorEntry {
    pub fn new(
        name: String,
        dtype: Dtype,
        shape: Vec<usize>,
        data: Vec<u8>,
    ) -> Result<Self, Error> {
        if name.is_empty() {
            return Err(Error::EmptyName);
        }
        let expected = shape
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .and_then(|n| n.checked_mul(dtype.size_bytes()))
            .ok_or(Error::PayloadSizeMismatch { expected: usize::MAX, actual: data.len() })?;
        if data.len() != expected {
            return Err(Error::PayloadSizeMismatch { expected, actual: data.len() });
        }
        Ok(Self { name, dtype, shape, data })
    }

    pub fn from_f32(name: &str, shape: Vec<usize>, values: &[f32]) -> Result<Self, Error> {
        let mut data = Vec::with_capacity(values.len() * 4);
        for v in values {
            data.extend_from_slice(&v.to_le_bytes());
        }
        Self::new(String::from(name), Dtype::F32, shape, data)
    }

    pub fn from_u8(name: &str, shape: Vec<usize>, values: &[u8]) -> Result<Self, Error> {
        Self::new(String::from(name), Dtype::U8, shape, values.to_vec())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dtype(&self) -> Dtype {
        self.dtype
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn element_count(&self) -> usize {
        self.shape.iter().product()
    }

    /// Decodes the payload as f32 values; `None` for non-f32 tensors.
    pub fn as_f32(&self) -> Option<Vec<f32>> {
        match self.dtype {
            Dtype::F32 => Some(
                self.data
                    .chunks_exact(4)
                    .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
                    .collect(),
            ),
            Dtype::U8 => None,
        }
    }

    /// Decodes the payload numerically regardless of dtype.
    pub fn to_f64_vec(&self) -> Vec<f64> {
        match self.dtype {
            Dtype::F32 => self
                .data
                .chunks_exact(4)
                .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64)
                .collect(),
            Dtype::U8 => self.data.iter().map(|&b| b as f64).collect(),
        }
    }
}

/// Ordered map of tensors; entry order is preserved and names are unique.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TensorArchive {
    entries: Vec<TensorEntry>,
}

impl TensorArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, entry: TensorEntry) -> Result<(), Error> {
        if self.get(entry.name()).is_some() {
            return Err(Error::DuplicateName);
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&TensorEntry> {
        self.entries.iter().find(|e| e.name() == name)
    }

    pub fn entries(&self) -> &[TensorEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn payload_length_is_validated() {
        assert!(TensorEntry::from_f32("w", vec![2, 2], &[1.0, 2.0, 3.0, 4.0]).is_ok());
        assert_eq!(
            TensorEntry::new(String::from("w"), Dtype::F32, vec![2, 2], vec![0; 15]),
            Err(Error::PayloadSizeMismatch { expected: 16, actual: 15 })
        );
    }

    #[test]
    fn scalar_shape_means_one_element() {
        let t = TensorEntry::from_f32("s", vec![], &[3.5]).unwrap();
        assert_eq!(t.element_count(), 1);
        assert_eq!(t.as_f32().unwrap(), vec![3.5]);
    }

    #[test]
    fn names_must_be_unique_and_nonempty() {
        let mut a = TensorArchive::new();
        a.insert(TensorEntry::from_u8("x", vec![1], &[7]).unwrap()).unwrap();
        assert_eq!(
            a.insert(TensorEntry::from_u8("x", vec![1], &[9]).unwrap()),
            Err(Error::DuplicateName)
        );
        assert_eq!(TensorEntry::from_u8("", vec![1], &[0]), Err(Error::EmptyName));
    }

    #[test]
    fn f32_round_trip_is_bit_exact() {
        let values = [1.0f32, -2.5, 0.1, f32::MIN_POSITIVE];
        let t = TensorEntry::from_f32("v", vec![4], &values).unwrap();
        assert_eq!(t.as_f32().unwrap(), values);
    }
}

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;

/// A process `(f_n)` observed on the index window `start..=end`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessWindow {
    start: i64,
    vectors: Vec<LatticeVector>,
}

impl ProcessWindow {
    pub fn new(start: i64, vectors: Vec<LatticeVector>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(Error::ShapeMismatch("process window is empty".into()));
        };
        let len = first.len();
        if vectors.iter().any(|v| v.len() != len) {
            return Err(Error::SpaceMismatch);
        }
        Ok(Self { start, vectors })
    }

    pub fn zeros(start: i64, steps: usize, atoms: usize) -> Self {
        Self {
            start,
            vectors: vec![LatticeVector::zeros(atoms); steps.max(1)],
        }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.vectors.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn atom_count(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= self.start && n <= self.end()
    }

    pub fn get(&self, n: i64) -> Option<&LatticeVector> {
        if self.contains(n) {
            Some(&self.vectors[(n - self.start) as usize])
        } else {
            None
        }
    }

    pub fn at(&self, n: i64) -> Result<&LatticeVector> {
        self.get(n).ok_or(Error::IndexOutOfWindow(n))
    }

    pub fn vectors(&self) -> &[LatticeVector] {
        &self.vectors
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        self.start..=self.end()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &LatticeVector)> {
        self.indices().zip(self.vectors.iter())
    }

    pub fn map(&self, f: impl Fn(i64, &LatticeVector) -> LatticeVector) -> Self {
        Self {
            start: self.start,
            vectors: self.iter().map(|(n, v)| f(n, v)).collect(),
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.start != other.start || self.len() != other.len() {
            return Err(Error::ShapeMismatch(format!(
                "windows {}..={} and {}..={} differ",
                self.start,
                self.end(),
                other.start,
                other.end()
            )));
        }
        if self.atom_count() != other.atom_count() {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    /// `(f_n + g_n)`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.map(|n, v| v + other.get(n).expect("same shape")))
    }

    /// `(f_n · g_n)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.map(|n, v| v * other.get(n).expect("same shape")))
    }

    /// The shifted process `g_n = f_{n+shift}` on `start..=end-shift`.
    pub fn shifted(&self, shift: usize) -> Result<Self> {
        if shift >= self.len() {
            return Err(Error::WindowOverflow {
                index: self.start + shift as i64,
                end: self.end(),
            });
        }
        Ok(Self {
            start: self.start,
            vectors: self.vectors[shift..].to_vec(),
        })
    }

    /// Restriction to the first `len` indices.
    pub fn truncated(&self, len: usize) -> Result<Self> {
        if len == 0 || len > self.len() {
            return Err(Error::ShapeMismatch(format!(
                "cannot truncate {} steps to {len}",
                self.len()
            )));
        }
        Ok(Self {
            start: self.start,
            vectors: self.vectors[..len].to_vec(),
        })
    }
}

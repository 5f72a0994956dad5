//! The carrier space: a finite atom set with strictly positive weights, real
//! vectors on it with componentwise lattice and f-algebra operations, and band
//! projections given by 0/1 indicators.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Soft upper bound on the number of atoms accepted by generators and the CLI.
pub const MAX_ATOMS: usize = 64;

/// A finite atomic probability space. Weights need not sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpace {
    atoms: Vec<String>,
    weights: Vec<f64>,
}

impl SampleSpace {
    /// Builds a space with atoms named `a0, a1, ...`.
    pub fn new(atom_count: usize, weights: Vec<f64>) -> Result<Self> {
        let atoms = (0..atom_count).map(|i| format!("a{i}")).collect();
        Self::with_atoms(atoms, weights)
    }

    pub fn uniform(atom_count: usize) -> Result<Self> {
        Self::new(atom_count, vec![1.0 / atom_count.max(1) as f64; atom_count])
    }

    pub fn with_atoms(atoms: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptySpace);
        }
        if weights.len() != atoms.len() {
            return Err(Error::LengthMismatch {
                expected: atoms.len(),
                found: weights.len(),
            });
        }
        for (index, &weight) in weights.iter().enumerate() {
            if !weight.is_finite() {
                return Err(Error::NonFinite(format!("weight {index}")));
            }
            if weight <= 0.0 {
                return Err(Error::NonPositiveWeight { index, weight });
            }
        }
        let mut seen = std::collections::HashSet::new();
        for atom in &atoms {
            if !seen.insert(atom.as_str()) {
                return Err(Error::DuplicateAtom(atom.clone()));
            }
        }
        Ok(Self { atoms, weights })
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The weak order unit `e`.
    pub fn unit(&self) -> LatticeVector {
        LatticeVector::constant(self.atom_count(), 1.0)
    }

    pub fn zero(&self) -> LatticeVector {
        LatticeVector::zeros(self.atom_count())
    }
}

/// Validated constructor mirroring the `make_space` operation.
pub fn make_space(atom_count: usize, weights: Vec<f64>) -> Result<SampleSpace> {
    SampleSpace::new(atom_count, weights)
}

/// An element of the Riesz space: one real value per atom.
///
/// All lattice and algebra operations are componentwise. The arithmetic
/// operator impls panic if the lengths differ; fallible entry points such as
/// [`multiply`] check first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(Vec<f64>);

impl LatticeVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    /// Like [`LatticeVector::new`] but rejects NaN and infinities.
    pub fn try_new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("vector component {i}")));
        }
        Ok(Self(values))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn constant(len: usize, value: f64) -> Self {
        Self(vec![value; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self(self.0.iter().map(|&x| f(x)).collect())
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.len(), other.len(), "lattice vector length mismatch");
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if self.len() == len {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    pub fn square(&self) -> Self {
        self.map(|x| x * x)
    }

    pub fn powi(&self, k: i32) -> Self {
        self.map(|x| x.powi(k))
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|x| c * x)
    }

    /// Lattice supremum `f ∨ g`.
    pub fn sup(&self, other: &Self) -> Self {
        self.zip_with(other, f64::max)
    }

    /// Lattice infimum `f ∧ g`.
    pub fn inf(&self, other: &Self) -> Self {
        self.zip_with(other, f64::min)
    }

    pub fn positive_part(&self) -> Self {
        self.map(|x| x.max(0.0))
    }

    pub fn div(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a / b)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `max_i |f_i|`, zero for the empty vector.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    /// Componentwise `self <= other + tol`.
    pub fn le_within(&self, other: &Self, tol: f64) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a <= *b + tol)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| (a - b).abs() <= tol)
    }
}

impl From<Vec<f64>> for LatticeVector {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}

impl std::ops::Index<usize> for LatticeVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&LatticeVector> for &LatticeVector {
            type Output = LatticeVector;
            fn $method(self, rhs: &LatticeVector) -> LatticeVector {
                self.zip_with(rhs, |a, b| a $op b)
            }
        }
        impl $trait<LatticeVector> for LatticeVector {
            type Output = LatticeVector;
            fn $method(self, rhs: LatticeVector) -> LatticeVector {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LatticeVector> for LatticeVector {
            type Output = LatticeVector;
            fn $method(self, rhs: &LatticeVector) -> LatticeVector {
                (&self).$method(rhs)
            }
        }
        impl $trait<LatticeVector> for &LatticeVector {
            type Output = LatticeVector;
            fn $method(self, rhs: LatticeVector) -> LatticeVector {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Mul<f64> for &LatticeVector {
    type Output = LatticeVector;
    fn mul(self, c: f64) -> LatticeVector {
        self.scale(c)
    }
}

impl Mul<f64> for LatticeVector {
    type Output = LatticeVector;
    fn mul(self, c: f64) -> LatticeVector {
        self.scale(c)
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        self.scale(-1.0)
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        self.scale(-1.0)
    }
}

/// f-algebra product. `e` is the multiplicative identity.
pub fn multiply(f: &LatticeVector, g: &LatticeVector) -> Result<LatticeVector> {
    g.check_len(f.len())?;
    Ok(f * g)
}

/// A band projection, stored as its 0/1 indicator `Pe`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandProjection {
    indicator: LatticeVector,
}

impl BandProjection {
    pub fn from_indicator(indicator: LatticeVector) -> Result<Self> {
        if indicator.iter().any(|&x| x != 0.0 && x != 1.0) {
            return Err(Error::InvalidArgument(
                "band projection indicator must be 0/1".into(),
            ));
        }
        Ok(Self { indicator })
    }

    pub(crate) fn from_mask(mask: Vec<bool>) -> Self {
        Self {
            indicator: LatticeVector(mask.into_iter().map(|b| if b { 1.0 } else { 0.0 }).collect()),
        }
    }

    pub fn zero(len: usize) -> Self {
        Self::from_mask(vec![false; len])
    }

    pub fn identity(len: usize) -> Self {
        Self::from_mask(vec![true; len])
    }

    /// `Pe`.
    pub fn indicator(&self) -> &LatticeVector {
        &self.indicator
    }

    pub fn apply(&self, f: &LatticeVector) -> LatticeVector {
        &self.indicator * f
    }

    /// `I - P`.
    pub fn complement(&self) -> Self {
        Self {
            indicator: self.indicator.map(|x| 1.0 - x),
        }
    }

    /// `P Q`, the projection onto the intersection of the bands.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            indicator: &self.indicator * &other.indicator,
        }
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.indicator[atom] == 1.0
    }
}

/// Projection onto the band generated by `g⁺`: the indicator of `{g > 0}`.
pub fn positive_part_projection(g: &LatticeVector) -> BandProjection {
    BandProjection::from_mask(g.iter().map(|&x| x > 0.0).collect())
}

/// Componentwise square root.
pub fn sqrt_exact(f: &LatticeVector) -> Result<LatticeVector> {
    if !f.is_nonnegative() {
        return Err(Error::NegativeInput);
    }
    Ok(f.map(f64::sqrt))
}

const MAX_DYADIC_LEVEL: u32 = 48;

/// The dyadic lower approximation `f_n` of `f ≥ 0`:
///
/// ```text
/// f_n = Σ_{k=0}^{n 2^n - 1} k/2^n · P_{((k+1)/2^n e - f)⁺} (I - P_{(k/2^n e - f)⁺}) e
///       + n (I - P_{(n e - f)⁺}) e
/// ```
///
/// The summands are mutually disjoint band projections of `e`. A summand is
/// the zero projection unless some atom satisfies `k ≤ 2^n f < k+1`, so only
/// the indices `k` realised by some atom are materialised.
pub fn dyadic_lower(f: &LatticeVector, n: u32) -> Result<LatticeVector> {
    dyadic_sum(f, n, |x| x)
}

/// `√(f_n)` built from the same band projections as [`dyadic_lower`], with
/// each coefficient replaced by its square root. Since `Pe·Pe = Pe`, the
/// square root of a disjoint sum of `c·Pe` terms is the sum of `√c·Pe`.
///
/// The result is increasing in `n`, bounded by `sqrt_exact(f)`, and when
/// `f ≤ n e` it is within `2^{-n/2}` of it.
pub fn sqrt_dyadic(f: &LatticeVector, n: u32) -> Result<LatticeVector> {
    dyadic_sum(f, n, f64::sqrt)
}

fn dyadic_sum(f: &LatticeVector, n: u32, coeff: impl Fn(f64) -> f64) -> Result<LatticeVector> {
    if n == 0 || n > MAX_DYADIC_LEVEL {
        return Err(Error::InvalidArgument(format!(
            "dyadic level must be in 1..={MAX_DYADIC_LEVEL}, got {n}"
        )));
    }
    if !f.is_nonnegative() {
        return Err(Error::NegativeInput);
    }
    if f.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("dyadic input".into()));
    }
    let len = f.len();
    let e = LatticeVector::constant(len, 1.0);
    let step = (-(n as f64)).exp2();
    let cap = n as f64;

    // Grid indices actually hit by some atom below the cap.
    let mut ks: Vec<u64> = f
        .iter()
        .filter(|&&x| x < cap)
        .map(|&x| (x / step).floor() as u64)
        .collect();
    ks.sort_unstable();
    ks.dedup();

    let mut acc = LatticeVector::zeros(len);
    for k in ks {
        let lower = k as f64 * step;
        let upper = (k + 1) as f64 * step;
        let below_upper = positive_part_projection(&(&e * upper - f));
        let below_lower = positive_part_projection(&(&e * lower - f));
        let slab = below_upper.compose(&below_lower.complement());
        acc = acc + slab.indicator() * coeff(lower);
    }
    let top = positive_part_projection(&(&e * cap - f)).complement();
    acc = acc + top.indicator() * coeff(cap);
    Ok(acc)
}

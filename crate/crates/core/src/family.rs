//! Two-parameter families `(T_i^j)` and filtrations on a finite index window.
//!
//! The paper-level objects are indexed by all of `ℤ`; here they live on
//! `start..=end`. Requests outside the window are clamped: `T_i^j` with
//! `i < start` or `j > end` is served by `T_{max(i,start)}^{min(j,end)}`, and
//! an empty index range (after clamping `i > j`) yields the base operator
//! `T`, whose range is generated by nothing beyond `R(T)`. Clamping keeps the
//! nesting `R(T_{i+1}^j) ⊆ R(T_i^j) ⊆ R(T_i^{j+1})`.

use crate::error::{Error, Result};
use crate::operator::CondExpOperator;
use crate::partition::Partition;
use crate::window::ProcessWindow;

/// A nested family of conditional expectations compatible with `base`.
#[derive(Debug, Clone)]
pub struct FamilyOperators {
    base: CondExpOperator,
    start: i64,
    end: i64,
    // rows[i - start][j - i] = T_i^j
    rows: Vec<Vec<CondExpOperator>>,
}

impl FamilyOperators {
    /// Builds `T_i^j` for `start ≤ i ≤ j ≤ end` from `partition_of(i, j)` and
    /// validates compatibility with `base` and nesting.
    pub fn new(
        base: CondExpOperator,
        start: i64,
        end: i64,
        mut partition_of: impl FnMut(i64, i64) -> Result<Partition>,
    ) -> Result<Self> {
        if end < start {
            return Err(Error::InvalidFamily(format!("empty window {start}..={end}")));
        }
        let mut rows = Vec::with_capacity((end - start + 1) as usize);
        for i in start..=end {
            let mut row = Vec::with_capacity((end - i + 1) as usize);
            for j in i..=end {
                let op = base.with_partition(partition_of(i, j)?)?;
                if !op.partition().refines(base.partition()) {
                    return Err(Error::InvalidFamily(format!(
                        "T_{i}^{j} is not compatible with the base operator"
                    )));
                }
                row.push(op);
            }
            rows.push(row);
        }
        let family = Self {
            base,
            start,
            end,
            rows,
        };
        family.check_nesting()?;
        Ok(family)
    }

    /// Every member equal to `base`.
    pub fn constant(base: CondExpOperator, start: i64, end: i64) -> Result<Self> {
        let p = base.partition().clone();
        Self::new(base, start, end, |_, _| Ok(p.clone()))
    }

    fn check_nesting(&self) -> Result<()> {
        for i in self.start..=self.end {
            for j in i..=self.end {
                let here = self.get(i, j).partition();
                // R(T_{i+1}^j) ⊆ R(T_i^j)
                if i < j && !here.refines(self.get(i + 1, j).partition()) {
                    return Err(Error::InvalidFamily(format!(
                        "R(T_{}^{j}) is not contained in R(T_{i}^{j})",
                        i + 1
                    )));
                }
                // R(T_i^j) ⊆ R(T_i^{j+1})
                if j < self.end && !self.get(i, j + 1).partition().refines(here) {
                    return Err(Error::InvalidFamily(format!(
                        "R(T_{i}^{j}) is not contained in R(T_{i}^{})",
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &CondExpOperator {
        &self.base
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.end
    }

    /// `end - start`, the largest gap that fits inside the window.
    pub fn span(&self) -> usize {
        (self.end - self.start) as usize
    }

    /// `T_i^j` with window clamping.
    pub fn get(&self, i: i64, j: i64) -> &CondExpOperator {
        let i = i.max(self.start);
        let j = j.min(self.end);
        if i > j {
            return &self.base;
        }
        &self.rows[(i - self.start) as usize][(j - i) as usize]
    }

    /// `T_{-∞}^n`, realised as `T_start^n`.
    pub fn lower_tail(&self, n: i64) -> &CondExpOperator {
        self.get(self.start, n)
    }

    /// `T_n^{∞}`, realised as `T_n^end`.
    pub fn upper_tail(&self, n: i64) -> &CondExpOperator {
        self.get(n, self.end)
    }

    /// The filtration `(T_{-∞}^n)_n` on the window.
    pub fn lower_tail_filtration(&self) -> Filtration {
        Filtration {
            base: self.base.clone(),
            start: self.start,
            ops: (self.start..=self.end)
                .map(|n| self.lower_tail(n).clone())
                .collect(),
        }
    }
}

/// `T_i^j` generated by `R(T)` and the explanatory vectors `ε_i, …, ε_j`:
/// two atoms share a block iff they share a `T`-block and every `ε_r`,
/// `i ≤ r ≤ j`, takes the same value on both.
pub fn generated_family(noise: &ProcessWindow, t: &CondExpOperator) -> Result<FamilyOperators> {
    if noise.atom_count() != t.atom_count() {
        return Err(Error::SpaceMismatch);
    }
    let levels: Vec<Partition> = noise.vectors().iter().map(Partition::level_sets).collect();
    let start = noise.start();
    let end = noise.end();
    let mut joined: Vec<Vec<Partition>> = Vec::with_capacity(levels.len());
    for i in 0..levels.len() {
        let mut acc = t.partition().clone();
        let mut row = Vec::with_capacity(levels.len() - i);
        for level in &levels[i..] {
            acc = acc.join(level);
            row.push(acc.clone());
        }
        joined.push(row);
    }
    FamilyOperators::new(t.clone(), start, end, |i, j| {
        Ok(joined[(i - start) as usize][(j - i) as usize].clone())
    })
}

/// An increasing sequence of conditional expectations `(T_n)` on a window,
/// compatible with `base`. Below the window the filtration is `base`; above
/// it, the last member.
#[derive(Debug, Clone)]
pub struct Filtration {
    base: CondExpOperator,
    start: i64,
    ops: Vec<CondExpOperator>,
}

impl Filtration {
    /// Validates `T_m T_n = T_n T_m = T_m` for `m ≤ n` (nested partitions)
    /// and compatibility with `base`.
    pub fn new(base: CondExpOperator, start: i64, ops: Vec<CondExpOperator>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::NotAFiltration(start));
        }
        for (k, op) in ops.iter().enumerate() {
            let n = start + k as i64;
            op.ensure_same_space(&base)?;
            if !op.partition().refines(base.partition()) {
                return Err(Error::NotAFiltration(n));
            }
            if k > 0 && !op.partition().refines(ops[k - 1].partition()) {
                return Err(Error::NotAFiltration(n));
            }
        }
        Ok(Self { base, start, ops })
    }

    pub fn base(&self) -> &CondExpOperator {
        &self.base
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.ops.len() as i64 - 1
    }

    pub fn get(&self, n: i64) -> &CondExpOperator {
        if n < self.start {
            &self.base
        } else {
            let k = ((n - self.start) as usize).min(self.ops.len() - 1);
            &self.ops[k]
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::lattice::{LatticeVector, SampleSpace};

    fn v(x: &[f64]) -> LatticeVector {
        LatticeVector::new(x.to_vec())
    }

    fn global4() -> CondExpOperator {
        CondExpOperator::global(Arc::new(SampleSpace::uniform(4).unwrap()))
    }

    #[test]
    fn constant_noise_generates_nothing() {
        let t = global4();
        let noise = ProcessWindow::new(1, vec![v(&[1.0; 4]); 3]).unwrap();
        let fam = generated_family(&noise, &t).unwrap();
        for i in 1..=3 {
            for j in i..=3 {
                assert_eq!(fam.get(i, j).partition(), t.partition());
            }
        }
    }

    #[test]
    fn level_set_split_and_join() {
        let t = global4();
        let noise = ProcessWindow::new(
            1,
            vec![v(&[1.0, 1.0, -1.0, -1.0]), v(&[1.0, -1.0, 1.0, -1.0])],
        )
        .unwrap();
        let fam = generated_family(&noise, &t).unwrap();
        assert_eq!(fam.get(1, 1).partition().blocks(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(fam.get(1, 2).partition(), &Partition::discrete(4));
        assert_eq!(fam.get(2, 2).partition().blocks(), &[vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn clamping_and_empty_ranges() {
        let t = global4();
        let noise = ProcessWindow::new(
            1,
            vec![v(&[1.0, 1.0, -1.0, -1.0]), v(&[1.0, -1.0, 1.0, -1.0])],
        )
        .unwrap();
        let fam = generated_family(&noise, &t).unwrap();
        assert_eq!(fam.get(-5, 1).partition(), fam.get(1, 1).partition());
        assert_eq!(fam.get(2, 9).partition(), fam.get(2, 2).partition());
        assert_eq!(fam.get(3, 9).partition(), t.partition());
        assert_eq!(fam.lower_tail(0).partition(), t.partition());
        assert_eq!(fam.upper_tail(1).partition(), &Partition::discrete(4));
    }

    #[test]
    fn rejects_non_nested_family() {
        let t = global4();
        let a = Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let b = Partition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        let err = FamilyOperators::new(t, 0, 1, |i, j| Ok(if i == j { a.clone() } else { b.clone() }));
        assert!(matches!(err, Err(Error::InvalidFamily(_))));
    }

    #[test]
    fn filtration_validation() {
        let t = global4();
        let id = CondExpOperator::identity(t.space().clone());
        assert!(Filtration::new(t.clone(), 0, vec![t.clone(), id.clone()]).is_ok());
        assert_eq!(
            Filtration::new(t.clone(), 0, vec![id, t.clone()]).unwrap_err(),
            Error::NotAFiltration(1)
        );
        let f = Filtration::new(t.clone(), 3, vec![t.clone()]).unwrap();
        assert_eq!(f.get(-10).partition(), t.partition());
        assert_eq!(f.get(10).partition(), t.partition());
    }
}

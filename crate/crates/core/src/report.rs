//! Verification reports.
//!
//! Every inequality is checked componentwise as `lhs ≤ rhs` with
//! `slack = rhs - lhs`; a comparison fails when some component's slack is
//! below `-tol`, where the tolerance scales with the largest magnitude
//! involved (see [`crate::tolerance`]). Identities use `slack = -|lhs - rhs|`.

use serde::{Deserialize, Serialize};

use crate::lattice::LatticeVector;
use crate::partition::Partition;
use crate::tolerance;

/// Where a comparison was made: process index `n`, gap `m`, block of the
/// base partition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Location {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub block: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trial: Option<usize>,
}

impl Location {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn trial(trial: usize) -> Self {
        Self {
            trial: Some(trial),
            ..Self::default()
        }
    }

    pub fn nm(n: i64, m: usize) -> Self {
        Self {
            n: Some(n),
            m: Some(m),
            ..Self::default()
        }
    }
}

/// One per-block row of a comparison, taken at the block's tightest atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub n: Option<i64>,
    pub m: Option<usize>,
    pub trial: Option<usize>,
    pub block: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

/// Outcome of verifying one property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub property: String,
    pub trials: usize,
    pub worst_slack: f64,
    pub pass: bool,
    /// Location of the worst slack; for a failing report, the first
    /// failing comparison.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub location: Option<Location>,
    #[serde(skip)]
    pub records: Vec<Record>,
}

impl Report {
    /// A report for a check that is not an inequality.
    pub fn boolean(property: impl Into<String>, trials: usize, pass: bool) -> Self {
        Self {
            property: property.into(),
            trials,
            worst_slack: if pass { 0.0 } else { -1.0 },
            pass,
            location: None,
            records: Vec::new(),
        }
    }

    /// Folds several reports into one named `property`: trials add up, the
    /// worst slack is the minimum, and the location is that of the first
    /// failing report (or of the overall worst slack if all pass).
    pub fn merge(property: impl Into<String>, reports: impl IntoIterator<Item = Report>) -> Self {
        let mut out = Self {
            property: property.into(),
            trials: 0,
            worst_slack: f64::INFINITY,
            pass: true,
            location: None,
            records: Vec::new(),
        };
        for r in reports {
            if r.trials == 0 {
                continue;
            }
            out.trials += r.trials;
            if !r.pass && out.pass {
                out.pass = false;
                out.location = r.location;
            }
            if r.worst_slack < out.worst_slack {
                out.worst_slack = r.worst_slack;
                if out.pass {
                    out.location = r.location;
                }
            }
            out.records.extend(r.records);
        }
        if out.trials == 0 {
            out.worst_slack = 0.0;
        }
        out
    }
}

/// Accumulates componentwise comparisons into a [`Report`].
#[derive(Debug, Clone)]
pub struct SlackTracker {
    property: String,
    trials: usize,
    worst: f64,
    pass: bool,
    location: Option<Location>,
    records: Vec<Record>,
    keep_records: bool,
}

impl SlackTracker {
    pub fn new(property: impl Into<String>) -> Self {
        Self {
            property: property.into(),
            trials: 0,
            worst: f64::INFINITY,
            pass: true,
            location: None,
            records: Vec::new(),
            keep_records: false,
        }
    }

    /// Keep one [`Record`] per block and comparison (for CSV export).
    pub fn with_records(mut self) -> Self {
        self.keep_records = true;
        self
    }

    /// Records `lhs ≤ rhs` componentwise.
    pub fn le(&mut self, lhs: &LatticeVector, rhs: &LatticeVector, blocks: &Partition, at: Location) -> bool {
        let slack = rhs - lhs;
        self.push(lhs, rhs, &slack, blocks, at)
    }

    /// Records `lhs = rhs` componentwise.
    pub fn eq(&mut self, lhs: &LatticeVector, rhs: &LatticeVector, blocks: &Partition, at: Location) -> bool {
        let slack = (rhs - lhs).map(|x| 0.0 - x.abs());
        self.push(lhs, rhs, &slack, blocks, at)
    }

    /// Records a scalar inequality `lhs ≤ rhs`.
    pub fn le_scalar(&mut self, lhs: f64, rhs: f64, at: Location) -> bool {
        let one = Partition::trivial(1);
        self.le(
            &LatticeVector::new(vec![lhs]),
            &LatticeVector::new(vec![rhs]),
            &one,
            at,
        )
    }

    fn push(
        &mut self,
        lhs: &LatticeVector,
        rhs: &LatticeVector,
        slack: &LatticeVector,
        blocks: &Partition,
        at: Location,
    ) -> bool {
        let tol = tolerance::tol(lhs.max_abs().max(rhs.max_abs()));
        self.trials += 1;
        let mut ok = true;
        for (b, block) in blocks.blocks().iter().enumerate() {
            let atom = *block
                .iter()
                .min_by(|&&x, &&y| slack[x].total_cmp(&slack[y]))
                .expect("blocks are nonempty");
            let s = slack[atom];
            let here = Location {
                block: Some(b),
                ..at
            };
            let block_ok = s >= -tol;
            if !block_ok && self.pass {
                self.pass = false;
                self.location = Some(here);
            }
            ok &= block_ok;
            if s < self.worst {
                self.worst = s;
                if self.pass {
                    self.location = Some(here);
                }
            }
            if self.keep_records {
                self.records.push(Record {
                    n: at.n,
                    m: at.m,
                    trial: at.trial,
                    block: b,
                    lhs: lhs[atom],
                    rhs: rhs[atom],
                    slack: s,
                    pass: block_ok,
                });
            }
        }
        ok
    }

    /// Records a failure that is not a numeric comparison.
    pub fn fail(&mut self, at: Location) {
        self.trials += 1;
        if self.pass {
            self.pass = false;
            self.location = Some(at);
        }
        self.worst = self.worst.min(-1.0);
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn passed(&self) -> bool {
        self.pass
    }

    pub fn finish(self) -> Report {
        Report {
            property: self.property,
            trials: self.trials,
            worst_slack: if self.trials == 0 { 0.0 } else { self.worst },
            pass: self.pass,
            location: self.location,
            records: self.records,
        }
    }
}

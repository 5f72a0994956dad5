//! `R(T)`-valued conditional norms and the inequalities they satisfy.
//!
//! For a conditional expectation `T` the three norms are
//!
//! * `‖f‖_{T,1} = T|f|`
//! * `‖f‖_{T,2} = √(T|f|²)`
//! * `‖f‖_{T,∞} = inf{g ∈ R(T)₊ : |f| ≤ g}`, the blockwise maximum of `|f|`
//!
//! Each value is a nonnegative vector constant on the blocks of `T`.

use std::fmt;

use rand::Rng;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{sqrt_exact, LatticeVector};
use crate::operator::{is_compatible, CondExpOperator};
use crate::random;
use crate::report::{Location, Report, SlackTracker};
use crate::tolerance;

/// Which conditional norm. Ordered `One < Two < Inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NormKind {
    One,
    Two,
    Inf,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::One, NormKind::Two, NormKind::Inf];

    pub fn label(self) -> &'static str {
        match self {
            NormKind::One => "1",
            NormKind::Two => "2",
            NormKind::Inf => "inf",
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for NormKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(NormKind::One),
            "2" => Ok(NormKind::Two),
            "inf" | "∞" => Ok(NormKind::Inf),
            other => Err(Error::InvalidArgument(format!("unknown norm `{other}`"))),
        }
    }
}

// Wire format: the numbers 1 and 2, or the string "inf".
impl Serialize for NormKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            NormKind::One => s.serialize_u8(1),
            NormKind::Two => s.serialize_u8(2),
            NormKind::Inf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for NormKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = NormKind;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(r#"1, 2 or "inf""#)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<NormKind, E> {
                match v {
                    1 => Ok(NormKind::One),
                    2 => Ok(NormKind::Two),
                    _ => Err(E::invalid_value(de::Unexpected::Unsigned(v), &self)),
                }
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<NormKind, E> {
                match v {
                    1 => Ok(NormKind::One),
                    2 => Ok(NormKind::Two),
                    _ => Err(E::invalid_value(de::Unexpected::Signed(v), &self)),
                }
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<NormKind, E> {
                if v == "inf" {
                    Ok(NormKind::Inf)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// A conditional norm value: an element of `R(T)₊`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalNormValue {
    pub value: LatticeVector,
    pub p: NormKind,
}

/// `‖f‖_{T,p}`.
pub fn norm(f: &LatticeVector, t: &CondExpOperator, p: NormKind) -> Result<ConditionalNormValue> {
    f.check_len(t.atom_count())?;
    Ok(ConditionalNormValue {
        value: norm_vec(f, t, p),
        p,
    })
}

/// Unchecked [`norm`] returning the bare vector.
pub(crate) fn norm_vec(f: &LatticeVector, t: &CondExpOperator, p: NormKind) -> LatticeVector {
    match p {
        NormKind::One => t.apply(&f.abs()),
        // T f² is nonnegative up to rounding; clamp before the root.
        NormKind::Two => sqrt_exact(&t.apply(&f.square()).positive_part())
            .expect("clamped to be nonnegative"),
        NormKind::Inf => t.block_sup_abs(f),
    }
}

/// Report for `‖·‖_{T,p}` at each `p`: definiteness, `R(T)`-homogeneity and
/// the triangle inequality on `trials` random pairs.
pub fn verify_norm_axioms(t: &CondExpOperator, trials: usize, seed: u64) -> Vec<Report> {
    let mut rng = random::rng(seed);
    let n = t.atom_count();
    let blocks = t.partition();
    let mut out = Vec::new();
    let samples: Vec<_> = (0..trials)
        .map(|_| {
            let mut f = random::vector(&mut rng, n, 2.0);
            // Zero out one block so definiteness is exercised blockwise.
            let zero_block = rng.gen_range(0..blocks.block_count());
            let mut fv = f.clone().into_values();
            for &a in &blocks.blocks()[zero_block] {
                fv[a] = 0.0;
            }
            f = LatticeVector::new(fv);
            let g = random::vector(&mut rng, n, 2.0);
            let r = random::block_constant(&mut rng, t, 3.0);
            (f, g, r)
        })
        .collect();

    for p in NormKind::ALL {
        let mut definite = SlackTracker::new(format!("norm_definiteness[p={p}]"));
        let mut homog = SlackTracker::new(format!("norm_homogeneity[p={p}]"));
        let mut triangle = SlackTracker::new(format!("norm_triangle[p={p}]"));

        let zero = norm_vec(&LatticeVector::zeros(n), t, p);
        definite.eq(&zero, &LatticeVector::zeros(n), blocks, Location::none());

        for (i, (f, g, r)) in samples.iter().enumerate() {
            let at = Location::trial(i);
            // ‖f‖ vanishes exactly on the blocks where f does.
            let nf = norm_vec(f, t, p);
            for (b, block) in blocks.blocks().iter().enumerate() {
                let f_zero = block.iter().all(|&a| f[a] == 0.0);
                let n_zero = nf[block[0]] <= 0.0;
                if f_zero != n_zero {
                    definite.fail(Location {
                        block: Some(b),
                        ..at
                    });
                }
            }
            let lhs = norm_vec(&(r * g), t, p);
            let rhs = &r.abs() * &norm_vec(g, t, p);
            homog.eq(&lhs, &rhs, blocks, at);

            let lhs = norm_vec(&(f + g), t, p);
            let rhs = &nf + &norm_vec(g, t, p);
            triangle.le(&lhs, &rhs, blocks, at);
        }
        out.push(definite.finish());
        out.push(homog.finish());
        out.push(triangle.finish());
    }
    out
}

/// The two conjugate pairs for which the conditional Hölder inequality is
/// provided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HolderPair {
    OneInf,
    TwoTwo,
}

impl HolderPair {
    pub fn norms(self) -> (NormKind, NormKind) {
        match self {
            HolderPair::OneInf => (NormKind::One, NormKind::Inf),
            HolderPair::TwoTwo => (NormKind::Two, NormKind::Two),
        }
    }
}

fn check_pair(f: &LatticeVector, g: &LatticeVector, t: &CondExpOperator) -> Result<()> {
    f.check_len(t.atom_count())?;
    g.check_len(t.atom_count())
}

/// `‖f‖_{T,p}·‖g‖_{T,q} - ‖fg‖_{T,1}`.
pub fn holder_slack(f: &LatticeVector, g: &LatticeVector, t: &CondExpOperator, pair: HolderPair) -> Result<LatticeVector> {
    check_pair(f, g, t)?;
    let (p, q) = pair.norms();
    Ok(&norm_vec(f, t, p) * &norm_vec(g, t, q) - norm_vec(&(f * g), t, NormKind::One))
}

/// `‖fg‖_{T,1} ≤ ‖f‖_{T,p} ‖g‖_{T,q}` for `(p,q) ∈ {(1,∞), (2,2)}`.
pub fn verify_holder(f: &LatticeVector, g: &LatticeVector, t: &CondExpOperator, pair: HolderPair) -> Result<Report> {
    check_pair(f, g, t)?;
    let (p, q) = pair.norms();
    let mut tr = SlackTracker::new(format!("holder[{p},{q}]"));
    let lhs = norm_vec(&(f * g), t, NormKind::One);
    let rhs = &norm_vec(f, t, p) * &norm_vec(g, t, q);
    tr.le(&lhs, &rhs, t.partition(), Location::none());
    Ok(tr.finish())
}

/// `‖f‖_{T,1} ≤ ‖f‖_{T,2} ≤ ‖f‖_{T,∞}`.
pub fn verify_lyapunov(f: &LatticeVector, t: &CondExpOperator) -> Result<Report> {
    f.check_len(t.atom_count())?;
    let [n1, n2, ninf] = NormKind::ALL.map(|p| norm_vec(f, t, p));
    let mut tr = SlackTracker::new("lyapunov");
    tr.le(&n1, &n2, t.partition(), Location::none());
    tr.le(&n2, &ninf, t.partition(), Location::none());
    Ok(tr.finish())
}

/// `‖f‖_{T,p} - ‖Sf‖_{T,p}` for `S` compatible with `T`.
pub fn jensen_slack(s: &CondExpOperator, t: &CondExpOperator, f: &LatticeVector, p: NormKind) -> Result<LatticeVector> {
    if !is_compatible(s, t)? {
        return Err(Error::IncompatibleOperators);
    }
    f.check_len(t.atom_count())?;
    Ok(norm_vec(f, t, p) - norm_vec(&s.apply(f), t, p))
}

/// `‖Sf‖_{T,p} ≤ ‖f‖_{T,p}` for `S` compatible with `T`.
pub fn verify_jensen(s: &CondExpOperator, t: &CondExpOperator, f: &LatticeVector, p: NormKind) -> Result<Report> {
    if !is_compatible(s, t)? {
        return Err(Error::IncompatibleOperators);
    }
    f.check_len(t.atom_count())?;
    let mut tr = SlackTracker::new(format!("jensen[p={p}]"));
    tr.le(&norm_vec(&s.apply(f), t, p), &norm_vec(f, t, p), t.partition(), Location::none());
    Ok(tr.finish())
}

/// `|f| ≤ ‖f‖_{T,∞}`, with equality attained somewhere in each block (so no
/// smaller block-constant vector dominates `|f|`).
pub fn verify_sup_norm_is_least_bound(f: &LatticeVector, t: &CondExpOperator) -> Result<Report> {
    f.check_len(t.atom_count())?;
    let bound = norm_vec(f, t, NormKind::Inf);
    let mut tr = SlackTracker::new("sup_norm_least_bound");
    tr.le(&f.abs(), &bound, t.partition(), Location::none());
    let tol = tolerance::tol(f.max_abs());
    for (b, block) in t.partition().blocks().iter().enumerate() {
        let attained = block.iter().any(|&a| (f[a].abs() - bound[a]).abs() <= tol);
        if !attained {
            tr.fail(Location {
                block: Some(b),
                ..Location::none()
            });
        }
    }
    Ok(tr.finish())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::lattice::SampleSpace;
    use crate::partition::Partition;

    fn v(x: &[f64]) -> LatticeVector {
        LatticeVector::new(x.to_vec())
    }

    fn global(n: usize) -> CondExpOperator {
        CondExpOperator::global(Arc::new(SampleSpace::uniform(n).unwrap()))
    }

    #[test]
    fn norm_examples() {
        let t = global(2);
        assert_eq!(norm(&v(&[1.0, -1.0]), &t, NormKind::One).unwrap().value, v(&[1.0, 1.0]));
        let n2 = norm(&v(&[3.0, 4.0]), &t, NormKind::Two).unwrap().value;
        assert!(n2.approx_eq(&v(&[12.5f64.sqrt(); 2]), 1e-14));

        let s = Arc::new(SampleSpace::uniform(4).unwrap());
        let t = CondExpOperator::new(s, Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap()).unwrap();
        let ninf = norm(&v(&[1.0, -5.0, 2.0, 0.0]), &t, NormKind::Inf).unwrap().value;
        assert_eq!(ninf, v(&[5.0, 5.0, 2.0, 2.0]));
        assert_eq!(norm(&v(&[1.0]), &t, NormKind::One), Err(Error::SpaceMismatch));
    }

    #[test]
    fn axioms_hold_on_random_vectors() {
        let mut rng = random::rng(3);
        let space = random::space(&mut rng, 6);
        let t = CondExpOperator::new(space, random::partition(&mut rng, 6, 3)).unwrap();
        for r in verify_norm_axioms(&t, 50, 11) {
            assert!(r.pass, "{r:?}");
            assert_eq!(r.trials, if r.property.starts_with("norm_definiteness") { 1 } else { 50 });
        }
    }

    #[test]
    fn triangle_example_two_atoms() {
        let t = global(2);
        let f = v(&[1.0, 0.0]);
        let g = v(&[0.0, 1.0]);
        let lhs = norm_vec(&(&f + &g), &t, NormKind::Two);
        let rhs = norm_vec(&f, &t, NormKind::Two) + norm_vec(&g, &t, NormKind::Two);
        assert!((lhs[0] - 1.0).abs() < 1e-15);
        assert!((rhs[0] - 2.0 * 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn homogeneity_with_scalar_multiple_of_unit() {
        let t = global(3);
        let g = v(&[0.3, -1.0, 2.0]);
        for p in NormKind::ALL {
            let lhs = norm_vec(&g.scale(2.0), &t, p);
            let rhs = norm_vec(&g, &t, p).scale(2.0);
            assert!(lhs.approx_eq(&rhs, 1e-14));
        }
    }

    #[test]
    fn holder_examples() {
        let t = global(2);
        let e = v(&[1.0, 1.0]);
        for pair in [HolderPair::OneInf, HolderPair::TwoTwo] {
            let slack = holder_slack(&e, &e, &t, pair).unwrap();
            assert!(slack.approx_eq(&v(&[0.0, 0.0]), 1e-15));
        }
        let slack = holder_slack(&v(&[1.0, -1.0]), &e, &t, HolderPair::TwoTwo).unwrap();
        assert!(slack.approx_eq(&v(&[0.0, 0.0]), 1e-15));
        assert!(verify_holder(&v(&[2.0, -1.0]), &v(&[0.5, 3.0]), &t, HolderPair::OneInf).unwrap().pass);
    }

    #[test]
    fn lyapunov_examples() {
        let t = global(2);
        assert!(verify_lyapunov(&v(&[1.0, 1.0]), &t).unwrap().pass);
        let f = v(&[0.0, 2.0]);
        assert_eq!(norm_vec(&f, &t, NormKind::One), v(&[1.0, 1.0]));
        assert!(norm_vec(&f, &t, NormKind::Two).approx_eq(&v(&[2f64.sqrt(); 2]), 1e-15));
        assert_eq!(norm_vec(&f, &t, NormKind::Inf), v(&[2.0, 2.0]));
        assert!(verify_lyapunov(&f, &t).unwrap().pass);
    }

    #[test]
    fn jensen_examples() {
        let space = Arc::new(SampleSpace::uniform(4).unwrap());
        let t = CondExpOperator::global(space.clone());
        let s = t.with_partition(Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap()).unwrap();
        let f = v(&[1.0, -1.0, 2.0, -2.0]);
        // Sf = 0, ‖f‖_{T,1} = 1.5
        let slack = jensen_slack(&s, &t, &f, NormKind::One).unwrap();
        assert!(slack.approx_eq(&v(&[1.5; 4]), 1e-15));
        // S = T: |Tf| ≤ T|f|
        assert!(verify_jensen(&t, &t, &f, NormKind::One).unwrap().pass);
        // f ∈ R(S): equality
        let g = v(&[3.0, 3.0, -1.0, -1.0]);
        for p in NormKind::ALL {
            let slack = jensen_slack(&s, &t, &g, p).unwrap();
            assert!(slack.approx_eq(&v(&[0.0; 4]), 1e-14));
        }
        let cross = t.with_partition(Partition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap()).unwrap();
        assert_eq!(verify_jensen(&t, &s, &f, NormKind::One), Err(Error::IncompatibleOperators));
        assert_eq!(verify_jensen(&cross, &s, &f, NormKind::Two), Err(Error::IncompatibleOperators));
    }

    #[test]
    fn sup_norm_is_least_bound() {
        let space = Arc::new(SampleSpace::uniform(4).unwrap());
        let t = CondExpOperator::new(space, Partition::new(4, vec![vec![0, 3], vec![1, 2]]).unwrap()).unwrap();
        assert!(verify_sup_norm_is_least_bound(&v(&[-3.0, 1.0, 0.5, 2.0]), &t).unwrap().pass);
    }

    #[test]
    fn norm_kind_wire_format() {
        assert_eq!(serde_json::to_string(&NormKind::Two).unwrap(), "2");
        assert_eq!(serde_json::to_string(&NormKind::Inf).unwrap(), "\"inf\"");
        let k: NormKind = serde_json::from_str("1").unwrap();
        assert_eq!(k, NormKind::One);
        assert!(serde_json::from_str::<NormKind>("3").is_err());
        assert!(NormKind::One < NormKind::Two && NormKind::Two < NormKind::Inf);
    }
}

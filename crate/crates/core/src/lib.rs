//! Conditional expectation operators, `R(T)`-valued norms, mixing
//! coefficients, mixingales and near-epoch dependence, realised on finite
//! atomic probability spaces so that every quantity is computable and every
//! inequality checkable.

pub mod ar1;
pub mod error;
pub mod family;
pub mod instance;
pub mod lattice;
pub mod lln;
pub mod mixing;
pub mod mixingale;
pub mod ned;
pub mod norms;
pub mod operator;
pub mod partition;
pub mod random;
pub mod report;
pub mod tolerance;
pub mod window;

pub use error::{Error, Result};
pub use lattice::{
    make_space, multiply, positive_part_projection, sqrt_dyadic, sqrt_exact, BandProjection,
    LatticeVector, SampleSpace,
};
pub use norms::{norm, ConditionalNormValue, HolderPair, NormKind};
pub use operator::{cond_exp, is_compatible, CondExpOperator};
pub use partition::Partition;
pub use report::{Location, Record, Report, SlackTracker};
pub use family::{generated_family, FamilyOperators, Filtration};
pub use window::ProcessWindow;
pub use mixing::{
    alpha, enumerate_band_projections, mixing_sequences, phi, sequence_alpha, sequence_phi,
    MixingCoefficient, MixingKind, MixingSequences,
};
pub use ned::{
    ned_defect, ned_product_certificate, ned_shift_certificate, ned_sum_certificate, verify_ned,
    NedCertificate, ProductInputs, ProductMode,
};
pub use mixingale::{mixingale_from_ned, verify_mixingale, MixingaleCertificate, MixingaleConstruction};
pub use lln::{cesaro_norm, lln_check, t_uniform_profile, LlnOutcome};
pub use ar1::{
    ar1_ned_certificate, ar1_sup_certificate, center_noise, generate_ar1, geometric_sum,
    power_decay_check, simulate_noise, Ar1Instance, NoiseSpec,
};
pub use instance::{generate_random_instance, Ar1Scenario, Instance};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/finite-model.md")]
    struct FiniteModel;
    #[doc = include_str!("../../../book/src/conditional-norms.md")]
    struct ConditionalNorms;
    #[doc = include_str!("../../../book/src/mixing.md")]
    struct Mixing;
    #[doc = include_str!("../../../book/src/ned.md")]
    struct Ned;
    #[doc = include_str!("../../../book/src/mixingales.md")]
    struct Mixingales;
    #[doc = include_str!("../../../book/src/ar1.md")]
    struct Ar1;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}

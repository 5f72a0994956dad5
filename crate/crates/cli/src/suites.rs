//! The verification suites behind each subcommand.
//!
//! A suite turns an instance (plus seed, cap and window) into a list of
//! [`Report`]s. Errors raised while building the objects are caught and
//! turned into a failing outcome rather than aborting the run.

use std::fmt;

use riesz_ned::ar1::{ar1_xi, verify_averaging_pull, verify_truncation_bridge};
use riesz_ned::lattice::{dyadic_lower, BandProjection};
use riesz_ned::mixing::{verify_alpha_le_phi, verify_strong_mixing_inequality, verify_uniform_mixing_inequality};
use riesz_ned::ned::verify_two_sided_projection_bound;
use riesz_ned::norms::{verify_holder, verify_jensen, verify_lyapunov, verify_norm_axioms, verify_sup_norm_is_least_bound};
use riesz_ned::random::{self, SeededRng};
use riesz_ned::{
    alpha, ar1_ned_certificate, ar1_sup_certificate, enumerate_band_projections, generate_ar1, generated_family,
    geometric_sum, is_compatible, lln_check, mixing_sequences, mixingale_from_ned, ned_product_certificate,
    ned_shift_certificate, ned_sum_certificate, norm, phi, power_decay_check, simulate_noise, sqrt_dyadic, sqrt_exact,
    t_uniform_profile, verify_ned, Ar1Instance, Ar1Scenario, CondExpOperator, Error, FamilyOperators, HolderPair,
    Instance, LatticeVector, Location, MixingKind, NormKind, ProductInputs, ProductMode, Report, Result, SlackTracker,
};
use serde::Serialize;

pub const DEFAULT_NED_WINDOW: usize = 32;
pub const DEFAULT_AR1_WINDOW: usize = 64;
pub const DEFAULT_LLN_WINDOW: usize = 8192;
pub const LLN_SCHEDULE: [usize; 4] = [64, 256, 1024, 4096];
pub const LLN_RATIO_BOUND: f64 = 0.9;
pub const LLN_FINAL_BOUND: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Validate,
    Norms,
    Mixing,
    Ned,
    Ar1Demo,
    Lln,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Validate,
        Suite::Norms,
        Suite::Mixing,
        Suite::Ned,
        Suite::Ar1Demo,
        Suite::Lln,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Validate => "validate",
            Suite::Norms => "norms",
            Suite::Mixing => "mixing",
            Suite::Ned => "ned",
            Suite::Ar1Demo => "ar1-demo",
            Suite::Lln => "lln",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inputs shared by all suites.
#[derive(Debug, Clone)]
pub struct Context {
    pub name: String,
    pub instance: Instance,
    pub seed: u64,
    pub cap: usize,
    /// Overrides the suite's default window (and the scenario's `steps`).
    pub window: Option<usize>,
    pub scenario: Option<Ar1Scenario>,
}

impl Context {
    fn scenario(&self, default_window: usize) -> Ar1Scenario {
        let mut s = self.scenario.clone().unwrap_or(Ar1Scenario {
            theta: vec![0.5],
            steps: default_window,
            noise_seed: self.seed,
            noise_scale: 1.0,
            noise_levels: Some(3),
        });
        if let Some(w) = self.window {
            s.steps = w;
        }
        s
    }
}

/// One mixing coefficient value on one block of `T`. `m` is set for the
/// sequence coefficients of a family, unset for a named pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientRow {
    pub pair: String,
    pub m: Option<usize>,
    pub kind: MixingKind,
    pub block: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub reports: Vec<Report>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub coefficients: Vec<CoefficientRow>,
}

impl SuiteOutcome {
    pub fn failed(suite: Suite, error: impl Into<String>) -> Self {
        Self {
            suite,
            pass: false,
            error: Some(error.into()),
            reports: Vec::new(),
            coefficients: Vec::new(),
        }
    }

    fn from_parts(suite: Suite, reports: Vec<Report>, coefficients: Vec<CoefficientRow>) -> Self {
        if reports.is_empty() {
            return Self::failed(suite, "suite produced no checks");
        }
        Self {
            suite,
            pass: reports.iter().all(|r| r.pass),
            error: None,
            reports,
            coefficients,
        }
    }
}

pub fn run_suite(suite: Suite, ctx: &Context) -> SuiteOutcome {
    let result = match suite {
        Suite::Validate => validate(ctx).map(|r| (r, Vec::new())),
        Suite::Norms => norms(ctx).map(|r| (r, Vec::new())),
        Suite::Mixing => mixing(ctx),
        Suite::Ned => ned(ctx).map(|r| (r, Vec::new())),
        Suite::Ar1Demo => ar1_demo(ctx).map(|r| (r, Vec::new())),
        Suite::Lln => lln(ctx).map(|r| (r, Vec::new())),
    };
    match result {
        Ok((reports, coefficients)) => SuiteOutcome::from_parts(suite, reports, coefficients),
        Err(e) => SuiteOutcome::failed(suite, e.to_string()),
    }
}

fn operators(instance: &Instance) -> Vec<(String, CondExpOperator)> {
    let mut ops: Vec<_> = instance
        .partitions()
        .keys()
        .map(|k| (k.clone(), instance.operator(k).expect("listed")))
        .collect();
    if ops.is_empty() {
        ops.push(("T".to_string(), instance.base_operator()));
    }
    ops
}

/// Named operators other than `T` that are compatible with `T`.
fn compatible_operators(instance: &Instance) -> Result<Vec<(String, CondExpOperator)>> {
    let t = instance.base_operator();
    let mut out = Vec::new();
    for (name, op) in operators(instance) {
        if name != "T" && is_compatible(&op, &t)? {
            out.push((name, op));
        }
    }
    Ok(out)
}

/// The instance's vectors, or `count` seeded random ones if it has none.
fn sample_vectors(instance: &Instance, rng: &mut SeededRng, count: usize) -> Vec<LatticeVector> {
    if instance.vectors().is_empty() {
        let n = instance.space().atom_count();
        (0..count).map(|_| random::vector(rng, n, 2.0)).collect()
    } else {
        instance.vectors().values().cloned().collect()
    }
}

fn validate(ctx: &Context) -> Result<Vec<Report>> {
    let mut rng = random::rng(ctx.seed);
    let vectors = sample_vectors(&ctx.instance, &mut rng, 4);
    let n = ctx.instance.space().atom_count();
    let e = LatticeVector::constant(n, 1.0);
    let ops = operators(&ctx.instance);
    let mut reports = vec![Report::boolean("instance_parse", 1 + ops.len(), true)];
    for (name, s) in ops {
        let blocks = s.partition();
        let mut unit = SlackTracker::new(format!("cond_exp_unit[{name}]"));
        unit.eq(&s.apply(&e), &e, blocks, Location::none());
        let mut idem = SlackTracker::new(format!("cond_exp_idempotent[{name}]"));
        let mut positive = SlackTracker::new(format!("cond_exp_positive[{name}]"));
        let mut pull = Vec::new();
        for (i, f) in vectors.iter().enumerate() {
            let sf = s.apply(f);
            idem.eq(&s.apply(&sf), &sf, blocks, Location::trial(i));
            positive.le(&LatticeVector::zeros(n), &s.apply(&f.abs()), blocks, Location::trial(i));
            let h = &vectors[(i + 1) % vectors.len()];
            pull.push(verify_averaging_pull(&s, &s, f, h)?);
        }
        reports.push(unit.finish());
        reports.push(idem.finish());
        reports.push(positive.finish());
        reports.push(Report::merge(format!("cond_exp_averaging[{name}]"), pull));
    }
    Ok(reports)
}

/// Square-root approximation checks on `samples`, each `0 ≤ f ≤ level·e`:
/// `sqrt_dyadic(f, level)` lies within `2^{-level/2}` below `sqrt_exact(f)`
/// and increases along `levels`.
pub fn sqrt_reports(samples: &[LatticeVector], level: u32, levels: &[u32]) -> Result<Vec<Report>> {
    let mut within = SlackTracker::new(format!("sqrt_dyadic_within[n={level}]"));
    let mut below = SlackTracker::new("sqrt_dyadic_below_exact");
    let mut monotone = SlackTracker::new("sqrt_dyadic_monotone");
    let gap = (-(level as f64) / 2.0).exp2();
    for (i, f) in samples.iter().enumerate() {
        let exact = sqrt_exact(f)?;
        let approx = sqrt_dyadic(f, level)?;
        for a in 0..f.len() {
            let at = Location::trial(i);
            within.le_scalar(exact[a] - approx[a], gap, at);
            below.le_scalar(approx[a], exact[a], at);
        }
        let chain = levels.iter().map(|&n| sqrt_dyadic(f, n)).collect::<Result<Vec<_>>>()?;
        for w in chain.windows(2) {
            for a in 0..f.len() {
                monotone.le_scalar(w[0][a], w[1][a], Location::trial(i));
            }
        }
        // The dyadic lower approximation itself stays below f.
        let lower = dyadic_lower(f, level)?;
        below.le(&lower, f, &riesz_ned::Partition::discrete(f.len()), Location::trial(i));
    }
    Ok(vec![within.finish(), below.finish(), monotone.finish()])
}

/// Norm inequalities for `T` on `vectors`: Hölder in both modes on
/// consecutive pairs, Lyapunov, the sup-norm characterisation, and Jensen
/// for every operator in `compatible`.
pub fn norm_inequality_reports(
    t: &CondExpOperator,
    vectors: &[LatticeVector],
    compatible: &[CondExpOperator],
) -> Result<Vec<Report>> {
    let mut holder_one_inf = Vec::new();
    let mut holder_two_two = Vec::new();
    let mut lyapunov = Vec::new();
    let mut sup = Vec::new();
    let mut jensen: [Vec<Report>; 3] = Default::default();
    for (i, f) in vectors.iter().enumerate() {
        let g = &vectors[(i + 1) % vectors.len()];
        holder_one_inf.push(verify_holder(f, g, t, HolderPair::OneInf)?);
        holder_two_two.push(verify_holder(f, g, t, HolderPair::TwoTwo)?);
        lyapunov.push(verify_lyapunov(f, t)?);
        sup.push(verify_sup_norm_is_least_bound(f, t)?);
        for s in compatible {
            for (k, p) in NormKind::ALL.into_iter().enumerate() {
                jensen[k].push(verify_jensen(s, t, f, p)?);
            }
        }
    }
    let mut out = vec![
        Report::merge("holder[1,inf]", holder_one_inf),
        Report::merge("holder[2,2]", holder_two_two),
        Report::merge("lyapunov", lyapunov),
        Report::merge("sup_norm_least_bound", sup),
    ];
    if !compatible.is_empty() {
        for (k, p) in NormKind::ALL.into_iter().enumerate() {
            out.push(Report::merge(format!("jensen[p={p}]"), std::mem::take(&mut jensen[k])));
        }
    }
    Ok(out)
}

fn norms(ctx: &Context) -> Result<Vec<Report>> {
    let t = ctx.instance.base_operator();
    let mut rng = random::rng(ctx.seed);
    let vectors = sample_vectors(&ctx.instance, &mut rng, 8);
    let compatible: Vec<_> = compatible_operators(&ctx.instance)?.into_iter().map(|(_, op)| op).collect();
    let mut reports = verify_norm_axioms(&t, 50, ctx.seed);
    reports.extend(norm_inequality_reports(&t, &vectors, &compatible)?);
    let n = t.atom_count();
    let samples: Vec<_> = (0..20).map(|_| random::nonnegative_vector(&mut rng, n, 20.0)).collect();
    reports.extend(sqrt_reports(&samples, 20, &[4, 8, 12, 16, 20])?);
    Ok(reports)
}

fn coefficient_rows(pair: &str, m: Option<usize>, kind: MixingKind, value: &LatticeVector, t: &CondExpOperator) -> Vec<CoefficientRow> {
    t.partition()
        .blocks()
        .iter()
        .enumerate()
        .map(|(block, atoms)| CoefficientRow {
            pair: pair.to_string(),
            m,
            kind,
            block,
            value: value[atoms[0]],
        })
        .collect()
}

/// Both mixing inequality chains for every indicator `Qe`, `Q ∈ B(V)`, and
/// `random_f` random elements of `R(V)`.
pub fn mixing_inequality_reports(
    u: &CondExpOperator,
    v: &CondExpOperator,
    t: &CondExpOperator,
    cap: usize,
    random_f: usize,
    rng: &mut SeededRng,
) -> Result<(Report, Report)> {
    let mut inputs: Vec<LatticeVector> = enumerate_band_projections(v, cap)?
        .iter()
        .map(BandProjection::indicator)
        .cloned()
        .collect();
    inputs.extend((0..random_f).map(|_| random::block_constant(rng, v, 3.0)));
    let mut strong = Vec::with_capacity(inputs.len());
    let mut uniform = Vec::with_capacity(inputs.len());
    for f in &inputs {
        strong.push(verify_strong_mixing_inequality(u, v, t, f, cap)?);
        uniform.push(verify_uniform_mixing_inequality(u, v, t, f, cap)?);
    }
    Ok((
        Report::merge("strong_mixing_inequality", strong),
        Report::merge("uniform_mixing_inequality", uniform),
    ))
}

/// `α ≤ φ` on `count` random triples `U, V` refining `T` on up to
/// `max_atoms` atoms.
pub fn random_alpha_le_phi(seed: u64, count: usize, max_atoms: usize, cap: usize) -> Result<Report> {
    let mut rng = random::rng(seed);
    let mut reports = Vec::with_capacity(count);
    for _ in 0..count {
        let atoms = rand::Rng::gen_range(&mut rng, 1..=max_atoms);
        let space = random::space(&mut rng, atoms);
        let tp = random::partition(&mut rng, atoms, 3);
        let t = CondExpOperator::new(space.clone(), tp.clone())?;
        let u = t.with_partition(random::refinement(&mut rng, &tp, 3))?;
        let v = t.with_partition(random::refinement(&mut rng, &tp, 3))?;
        reports.push(verify_alpha_le_phi(&u, &v, &t, cap)?);
    }
    Ok(Report::merge("alpha_le_phi_random", reports))
}

fn mixing(ctx: &Context) -> Result<(Vec<Report>, Vec<CoefficientRow>)> {
    let t = ctx.instance.base_operator();
    let ops = compatible_operators(&ctx.instance)?;
    let mut rng = random::rng(ctx.seed);
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for (un, u) in &ops {
        for (vn, v) in &ops {
            if un == vn {
                continue;
            }
            let pair = format!("{un}|{vn}");
            let a = alpha(u, v, &t, ctx.cap)?;
            let p = phi(u, v, &t, ctx.cap)?;
            rows.extend(coefficient_rows(&pair, None, MixingKind::Alpha, &a.value, &t));
            rows.extend(coefficient_rows(&pair, None, MixingKind::Phi, &p.value, &t));
            let mut le = verify_alpha_le_phi(u, v, &t, ctx.cap)?;
            le.property = format!("alpha_le_phi[{pair}]");
            reports.push(le);
            let (mut strong, mut uniform) = mixing_inequality_reports(u, v, &t, ctx.cap, 20, &mut rng)?;
            strong.property = format!("{}[{pair}]", strong.property);
            uniform.property = format!("{}[{pair}]", uniform.property);
            reports.push(strong);
            reports.push(uniform);
        }
    }

    // Sequence coefficients of the family generated by the default noise.
    let scenario = ctx.scenario(DEFAULT_NED_WINDOW);
    let noise = simulate_noise(&scenario.noise_spec(), &t)?;
    let family = generated_family(&noise, &t)?;
    let max_gap = family.span().min(8);
    let seq = mixing_sequences(&family, max_gap, ctx.cap)?;
    let mut le = SlackTracker::new("sequence_alpha_le_phi");
    for m in 0..=max_gap {
        rows.extend(coefficient_rows("family", Some(m), MixingKind::Alpha, &seq.alpha[m], &t));
        rows.extend(coefficient_rows("family", Some(m), MixingKind::Phi, &seq.phi[m], &t));
        le.le(&seq.alpha[m], &seq.phi[m], t.partition(), Location::nm(family.start(), m));
    }
    reports.push(le.finish());
    reports.push(random_alpha_le_phi(ctx.seed, 20, 6, ctx.cap)?);
    Ok((reports, rows))
}

/// Two AR(1) processes driven by the same noise (coefficients `θ` and
/// `−θ/2`) and the family generated by that noise.
pub fn ar1_pair(t: &CondExpOperator, scenario: &Ar1Scenario) -> Result<(Ar1Instance, Ar1Instance, FamilyOperators)> {
    let theta = scenario.theta_vector(t.atom_count())?;
    let noise = simulate_noise(&scenario.noise_spec(), t)?;
    let f = generate_ar1(&theta, &noise, t)?;
    let g = generate_ar1(&theta.scale(-0.5), &noise, t)?;
    let family = generated_family(&noise, t)?;
    Ok((f, g, family))
}

fn renamed(mut r: Report, name: impl Into<String>) -> Report {
    r.property = name.into();
    r
}

/// Builds the sum, product (both modes) and shift certificates from the
/// AR(1) certificates of `f` and `g` and verifies each on the transformed
/// process.
pub fn closure_reports(f: &Ar1Instance, g: &Ar1Instance, family: &FamilyOperators) -> Result<Vec<Report>> {
    let t = family.base();
    let (fp, gp) = (&f.process, &g.process);
    let (f2, g2) = (ar1_ned_certificate(f), ar1_ned_certificate(g));
    let (f_inf, g_inf) = (ar1_sup_certificate(f), ar1_sup_certificate(g));
    let mut out = Vec::new();

    let sum = ned_sum_certificate(&f2, &g2)?;
    out.push(renamed(verify_ned(&fp.add(gp)?, family, &sum)?, "ned_sum"));
    let sum_inf = ned_sum_certificate(&f_inf, &g2)?;
    out.push(renamed(verify_ned(&fp.add(gp)?, family, &sum_inf)?, "ned_sum_mixed_norms"));

    let product = fp.mul(gp)?;
    for (label, cert_f) in [("1", f2.weaken(NormKind::One)?), ("inf", f_inf.clone())] {
        let mode = ProductMode::SupBounded;
        let inputs = ProductInputs::from_processes(fp, gp, &cert_f, &g_inf, t, mode)?;
        let cert = ned_product_certificate(&cert_f, &g_inf, &inputs, mode)?;
        out.push(renamed(verify_ned(&product, family, &cert)?, format!("ned_product_bounded[p={label}]")));
    }
    let mode = ProductMode::TwoTwo;
    let inputs = ProductInputs::from_processes(fp, gp, &f2, &g2, t, mode)?;
    let cert = ned_product_certificate(&f2, &g2, &inputs, mode)?;
    out.push(renamed(verify_ned(&product, family, &cert)?, "ned_product_l2"));

    let f_norms: Vec<_> = fp.vectors().iter().map(|v| Ok(norm(v, t, NormKind::Two)?.value)).collect::<Result<_>>()?;
    let mut shifts = Vec::new();
    for s in [0, 1, 3] {
        if s >= fp.len() {
            break;
        }
        let cert = ned_shift_certificate(&f2, &f_norms, s)?;
        shifts.push(verify_ned(&fp.shifted(s)?, family, &cert)?);
    }
    out.push(Report::merge("ned_shift", shifts));
    Ok(out)
}

/// `‖f − Vf‖_{T,p} ≤ 2‖f − Uf‖_{T,p}` on `count` random nested triples
/// `R(U) ⊆ R(V)` (both refining `T`), at every `p`.
pub fn random_two_sided_bound(seed: u64, count: usize, max_atoms: usize) -> Result<Report> {
    let mut rng = random::rng(seed);
    let mut reports = Vec::with_capacity(3 * count);
    for _ in 0..count {
        let atoms = rand::Rng::gen_range(&mut rng, 1..=max_atoms);
        let space = random::space(&mut rng, atoms);
        let tp = random::partition(&mut rng, atoms, 3);
        let t = CondExpOperator::new(space, tp.clone())?;
        let up = random::refinement(&mut rng, &tp, 3);
        let u = t.with_partition(up.clone())?;
        let v = t.with_partition(random::refinement(&mut rng, &up, 3))?;
        let f = random::vector(&mut rng, atoms, 2.0);
        for p in NormKind::ALL {
            reports.push(verify_two_sided_projection_bound(&f, &u, &v, &t, p)?);
        }
    }
    Ok(Report::merge("two_sided_projection_bound", reports))
}

fn ned(ctx: &Context) -> Result<Vec<Report>> {
    let t = ctx.instance.base_operator();
    let scenario = ctx.scenario(DEFAULT_NED_WINDOW);
    let (f, g, family) = ar1_pair(&t, &scenario)?;
    let mut reports = vec![
        verify_ned(&f.process, &family, &ar1_ned_certificate(&f))?,
        verify_ned(&f.process, &family, &ar1_sup_certificate(&f))?,
        verify_truncation_bridge(&f, &family, family.span())?,
    ];
    reports.extend(closure_reports(&f, &g, &family)?);
    reports.push(random_two_sided_bound(ctx.seed, 50, 8)?);
    match mixingale_from_ned(&f.process, &family, &ar1_ned_certificate(&f), ctx.cap) {
        Ok(construction) => reports.extend(construction.reports.into_iter().take(2)),
        Err(Error::CertificateRejected(msg)) => {
            let mut r = Report::boolean("mixingale_from_ned", 1, false);
            r.property = format!("mixingale_from_ned: {msg}");
            reports.push(r);
        }
        Err(e) => return Err(e),
    }
    Ok(reports)
}

/// Closed-form checks for an AR(1) coefficient: the geometric series
/// against `e/(e−|θ|)` within `|θ|^{terms+1}/(e−|θ|)`, and the decay index
/// `m` of `|θ|^m` below `tol`.
pub fn closed_form_reports(theta: &LatticeVector, terms: usize, tol: f64) -> Result<Vec<Report>> {
    let abs = theta.abs();
    let (partial, closed) = geometric_sum(&abs, terms)?;
    let remainder = ar1_xi(&abs, terms);
    let blocks = riesz_ned::Partition::discrete(theta.len());
    let mut series = SlackTracker::new(format!("geometric_sum[terms={terms}]"));
    series.le(&(&closed - &partial).abs(), &remainder, &blocks, Location::none());
    let m = power_decay_check(&abs, tol)?;
    let mut decay = SlackTracker::new(format!("power_decay[tol={tol:e}]"));
    decay.le_scalar(abs.powi(m as i32).max(), tol, Location::nm(0, m));
    if m > 0 && abs.powi(m as i32 - 1).max() <= tol {
        decay.fail(Location::nm(0, m - 1));
    }
    Ok(vec![series.finish(), decay.finish()])
}

fn ar1_demo(ctx: &Context) -> Result<Vec<Report>> {
    let t = ctx.instance.base_operator();
    let scenario = ctx.scenario(DEFAULT_AR1_WINDOW);
    let (f, _, family) = ar1_pair(&t, &scenario)?;
    let mut defects = verify_ned(&f.process, &family, &ar1_ned_certificate(&f))?;
    defects.property = "ar1_defect_bound[p=2]".into();
    let mut reports = vec![defects];
    reports.extend(closed_form_reports(&f.theta, f.process.len(), 1e-3)?);
    Ok(reports)
}

fn lln(ctx: &Context) -> Result<Vec<Report>> {
    let t = ctx.instance.base_operator();
    let mut scenario = ctx.scenario(DEFAULT_LLN_WINDOW);
    // The LLN surrogate uses continuous noise unless a scenario says otherwise.
    if ctx.scenario.is_none() {
        scenario.noise_levels = None;
    }
    let inst = generate_ar1(&scenario.theta_vector(t.atom_count())?, &simulate_noise(&scenario.noise_spec(), &t)?, &t)?;
    let schedule: Vec<usize> = LLN_SCHEDULE.into_iter().filter(|&m| m <= inst.process.len()).collect();
    if schedule.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "the LLN schedule needs a window of at least {}",
            LLN_SCHEDULE[1]
        )));
    }
    let outcome = lln_check(&inst.process, &t, &schedule, LLN_RATIO_BOUND, LLN_FINAL_BOUND)?;
    let mut reports = outcome.reports;
    let grid = [0.5, 1.0, 2.0, 4.0, 8.0];
    let profile = t_uniform_profile(&inst.process, &t, &grid)?;
    let mut monotone = SlackTracker::new("t_uniform_profile_nonincreasing");
    for (i, w) in profile.windows(2).enumerate() {
        monotone.le(&w[1], &w[0], t.partition(), Location::trial(i + 1));
    }
    reports.push(monotone.finish());
    Ok(reports)
}

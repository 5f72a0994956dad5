use proptest::prelude::*;
use riesz_ned::random::{self, SeededRng};
use riesz_ned::{
    alpha, ar1_ned_certificate, ar1_sup_certificate, enumerate_band_projections, generate_ar1, generated_family, norm,
    ned_product_certificate, ned_shift_certificate, ned_sum_certificate, phi, simulate_noise, sqrt_dyadic, sqrt_exact,
    verify_ned, CondExpOperator, LatticeVector, NoiseSpec, NormKind, ProductInputs, ProductMode,
};

const TOL: f64 = 1e-9;

/// `(T, S)` with `S` a random refinement of `T`, on up to 8 atoms.
fn nested(rng: &mut SeededRng) -> (CondExpOperator, CondExpOperator) {
    let atoms = rand::Rng::gen_range(rng, 1..=8);
    let space = random::space(rng, atoms);
    let tp = random::partition(rng, atoms, 4);
    let sp = random::refinement(rng, &tp, 3);
    let t = CondExpOperator::new(space.clone(), tp).unwrap();
    let s = CondExpOperator::new(space, sp).unwrap();
    (t, s)
}

fn close(a: &LatticeVector, b: &LatticeVector) -> bool {
    let scale = a.max_abs().max(b.max_abs()).max(1.0);
    (a - b).max_abs() <= TOL * scale
}

fn le(a: &LatticeVector, b: &LatticeVector) -> bool {
    a.le_within(b, TOL * a.max_abs().max(b.max_abs()).max(1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn operator_axioms(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (t, s) = nested(&mut rng);
        let n = t.atom_count();
        let f = random::vector(&mut rng, n, 3.0);
        let g = random::vector(&mut rng, n, 3.0);
        let e = LatticeVector::constant(n, 1.0);
        prop_assert!(close(&t.apply(&e), &e));
        prop_assert!(close(&t.apply(&t.apply(&f)), &t.apply(&f)));
        prop_assert!(t.apply(&f.abs()).is_nonnegative());
        // Averaging: T(f · Tg) = Tg · Tf.
        prop_assert!(close(&t.apply(&(&f * &t.apply(&g))), &(&t.apply(&g) * &t.apply(&f))));
        // Compatibility: ST = TS = T.
        prop_assert!(close(&s.apply(&t.apply(&f)), &t.apply(&f)));
        prop_assert!(close(&t.apply(&s.apply(&f)), &t.apply(&f)));
    }

    #[test]
    fn norm_axioms(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (t, s) = nested(&mut rng);
        let n = t.atom_count();
        let f = random::vector(&mut rng, n, 3.0);
        let g = random::vector(&mut rng, n, 3.0);
        let r = random::block_constant(&mut rng, &t, 2.0);
        for p in NormKind::ALL {
            let nf = norm(&f, &t, p).unwrap().value;
            let ng = norm(&g, &t, p).unwrap().value;
            prop_assert!(t.in_range(&nf));
            prop_assert!(le(&norm(&(&f + &g), &t, p).unwrap().value, &(&nf + &ng)));
            prop_assert!(close(&norm(&(&r * &f), &t, p).unwrap().value, &(&r.abs() * &nf)));
            prop_assert!(le(&norm(&s.apply(&f), &t, p).unwrap().value, &nf));
        }
        let [n1, n2, ninf] = NormKind::ALL.map(|p| norm(&f, &t, p).unwrap().value);
        prop_assert!(le(&n1, &n2) && le(&n2, &ninf));
    }

    #[test]
    fn sqrt_dyadic_increases_to_sqrt(values in prop::collection::vec(0.0f64..20.0, 1..8)) {
        let f = LatticeVector::new(values);
        let exact = sqrt_exact(&f).unwrap();
        let mut prev = LatticeVector::zeros(f.len());
        for n in [1, 2, 4, 8, 12, 16, 20] {
            let approx = sqrt_dyadic(&f, n).unwrap();
            prop_assert!(prev.le_within(&approx, 0.0), "level {n} decreased");
            prop_assert!(approx.le_within(&exact, 0.0));
            prev = approx;
        }
        prop_assert!((&exact - &prev).max_abs() <= 2f64.powi(-10));
    }

    #[test]
    fn alpha_below_phi_and_complement_closed(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (t, u) = nested(&mut rng);
        let v = t.with_partition(random::refinement(&mut rng, t.partition(), 3)).unwrap();
        let a = alpha(&u, &v, &t, 12).unwrap().value;
        let f = phi(&u, &v, &t, 12).unwrap().value;
        prop_assert!(le(&a, &f));
        prop_assert!(a.max() <= 0.25 + TOL && f.max() <= 1.0 + TOL);
        // B(V) is closed under complements, and |T(PQe) − TPe·TQe| is
        // unchanged when P is replaced by I − P.
        let bands = enumerate_band_projections(&v, 12).unwrap();
        let e = LatticeVector::constant(t.atom_count(), 1.0);
        let q = &bands[bands.len() / 2];
        prop_assert!(bands.contains(&q.complement()));
        for p in enumerate_band_projections(&u, 12).unwrap() {
            let term = |p: &riesz_ned::BandProjection| {
                (t.apply(&p.compose(q).apply(&e)) - &t.apply(&p.apply(&e)) * &t.apply(&q.apply(&e))).abs()
            };
            prop_assert!(close(&term(&p), &term(&p.complement())));
        }
    }
}

/// A centered AR(1) pair sharing quantised noise, and its family.
fn ar1_pair(seed: u64, steps: usize) -> (riesz_ned::Ar1Instance, riesz_ned::Ar1Instance, riesz_ned::FamilyOperators) {
    let mut rng = random::rng(seed);
    let space = random::space(&mut rng, 6);
    let t = CondExpOperator::new(space, random::partition(&mut rng, 6, 2)).unwrap();
    let spec = NoiseSpec { steps, seed, scale: 1.0, levels: Some(2) };
    let noise = simulate_noise(&spec, &t).unwrap();
    let theta_f = random::block_constant(&mut rng, &t, 0.9);
    let theta_g = random::block_constant(&mut rng, &t, 0.9);
    let f = generate_ar1(&theta_f, &noise, &t).unwrap();
    let g = generate_ar1(&theta_g, &noise, &t).unwrap();
    let family = generated_family(&noise, &t).unwrap();
    (f, g, family)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closure_constructors_certify(seed in any::<u64>()) {
        let (f, g, family) = ar1_pair(seed, 12);
        let t = family.base();
        let (f2, g2) = (ar1_ned_certificate(&f), ar1_ned_certificate(&g));
        let g_inf = ar1_sup_certificate(&g);
        let (fp, gp) = (&f.process, &g.process);

        let sum = ned_sum_certificate(&f2, &g2).unwrap();
        prop_assert!(verify_ned(&fp.add(gp).unwrap(), &family, &sum).unwrap().pass);

        let prod = fp.mul(gp).unwrap();
        let f1 = f2.weaken(NormKind::One).unwrap();
        let inputs = ProductInputs::from_processes(fp, gp, &f1, &g_inf, t, ProductMode::SupBounded).unwrap();
        let cert = ned_product_certificate(&f1, &g_inf, &inputs, ProductMode::SupBounded).unwrap();
        prop_assert!(verify_ned(&prod, &family, &cert).unwrap().pass);
        let inputs = ProductInputs::from_processes(fp, gp, &f2, &g2, t, ProductMode::TwoTwo).unwrap();
        let cert = ned_product_certificate(&f2, &g2, &inputs, ProductMode::TwoTwo).unwrap();
        prop_assert!(verify_ned(&prod, &family, &cert).unwrap().pass);

        let norms: Vec<_> = fp.vectors().iter().map(|v| norm(v, t, NormKind::Two).unwrap().value).collect();
        for s in 0..4 {
            let cert = ned_shift_certificate(&f2, &norms, s).unwrap();
            prop_assert!(verify_ned(&fp.shifted(s).unwrap(), &family, &cert).unwrap().pass, "shift {s}");
        }
    }

    #[test]
    fn weakening_keeps_certificates_valid(seed in any::<u64>()) {
        let (f, _, family) = ar1_pair(seed, 10);
        let sup = ar1_sup_certificate(&f);
        prop_assert!(verify_ned(&f.process, &family, &sup).unwrap().pass);
        for p in [NormKind::Two, NormKind::One] {
            prop_assert!(verify_ned(&f.process, &family, &sup.weaken(p).unwrap()).unwrap().pass);
        }
        prop_assert!(ar1_ned_certificate(&f).weaken(NormKind::Inf).is_err());
    }
}

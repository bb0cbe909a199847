use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use samelson::compact_algebra::{build_compact_form, CompactAlgebra};
use samelson::exterior::{check_one_one, Form};
use samelson::hermitian::HermitianStructure;
use samelson::root_data::{build_root_system, RootSystem};
use samelson::solvers::{solve_skt, CombinedSystem, MetricFamily};
use samelson::Surd;

struct Group {
    rs: RootSystem,
    alg: CompactAlgebra<Surd>,
    family: MetricFamily,
}

const NAMES: [&str; 3] = ["A2", "B2", "G2"];

fn groups() -> &'static [Group] {
    static G: OnceLock<Vec<Group>> = OnceLock::new();
    G.get_or_init(|| {
        NAMES
            .iter()
            .map(|name| {
                let rs = build_root_system(&name.parse().unwrap()).unwrap();
                let alg = build_compact_form(&rs).unwrap();
                let family = solve_skt(&rs, &alg).unwrap();
                Group { rs, alg, family }
            })
            .collect()
    })
}

fn form(dim: usize, degree: usize, terms: &[(Vec<usize>, i64)]) -> Form<Surd> {
    let mut f = Form::zero(dim, degree).unwrap();
    for (idx, c) in terms {
        let mut idx: Vec<usize> = idx.iter().map(|i| i % dim).collect();
        idx.sort_unstable();
        idx.dedup();
        if idx.len() == degree {
            f.add_term(&idx, Surd::int(*c));
        }
    }
    f
}

fn terms(degree: usize) -> impl Strategy<Value = Vec<(Vec<usize>, i64)>> {
    prop::collection::vec((prop::collection::vec(0usize..64, degree), -3i64..=3), 1..5)
}

fn rational() -> impl Strategy<Value = Surd> {
    (1i64..=20, 1i64..=8).prop_map(|(n, d)| Surd::frac(n, d))
}

fn structure(g: &Group, lambda: &[Surd]) -> HermitianStructure<Surd> {
    let mut h = HermitianStructure::bi_invariant(&g.alg).unwrap();
    h.lambda = lambda.iter().cycle().take(g.alg.p()).cloned().collect();
    h
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn d_squared_vanishes(g in 0..NAMES.len(), deg in 1usize..=2, t in terms(2)) {
        let alg = &groups()[g].alg;
        let t: Vec<_> = t.into_iter().map(|(i, c)| (i[..deg].to_vec(), c)).collect();
        let f = form(alg.dim(), deg, &t);
        prop_assert!(f.d(alg).unwrap().d(alg).unwrap().is_zero());
    }

    #[test]
    fn leibniz_rule(g in 0..NAMES.len(), a in terms(1), b in terms(2)) {
        let alg = &groups()[g].alg;
        let n = alg.dim();
        let (a, b) = (form(n, 1, &a), form(n, 2, &b));
        let lhs = a.wedge(&b).unwrap().d(alg).unwrap();
        let rhs = a.d(alg).unwrap().wedge(&b).unwrap().sub(&a.wedge(&b.d(alg).unwrap()).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_is_graded_commutative(g in 0..NAMES.len(), a in terms(1), b in terms(2), c in terms(1)) {
        let n = groups()[g].alg.dim();
        let (a, b, c) = (form(n, 1, &a), form(n, 2, &b), form(n, 1, &c));
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap());
        prop_assert_eq!(a.wedge(&c).unwrap(), c.wedge(&a).unwrap().scale(&Surd::int(-1)));
    }

    #[test]
    fn fundamental_form_is_of_type_one_one(g in 0..NAMES.len(), l in prop::collection::vec(rational(), 6)) {
        let gr = &groups()[g];
        let h = structure(gr, &l);
        let f = h.fundamental_form(&gr.alg).unwrap();
        prop_assert!(check_one_one(&f, &h.complex_structure(&gr.alg)).is_ok());
    }

    #[test]
    fn codifferential_routes_agree(g in 0..NAMES.len(), l in prop::collection::vec(rational(), 6)) {
        let gr = &groups()[g];
        let h = structure(gr, &l);
        prop_assert_eq!(h.codifferential_sum(&gr.alg).unwrap(), h.codifferential_closed(&gr.alg).unwrap());
    }

    #[test]
    fn ricci_routes_agree(g in 0..NAMES.len(), l in prop::collection::vec(rational(), 6)) {
        let gr = &groups()[g];
        let h = structure(gr, &l);
        prop_assert_eq!(h.bismut_ricci(&gr.alg).unwrap(), h.ricci_closed(&gr.alg).unwrap());
    }

    #[test]
    fn bismut_connection_is_hermitian(g in 0..NAMES.len(), l in prop::collection::vec(rational(), 6)) {
        let gr = &groups()[g];
        let h = structure(gr, &l);
        let conn = h.bismut_connection(&gr.alg).unwrap();
        prop_assert!(conn.preserves_metric(&h.metric(&gr.alg)));
        prop_assert!(conn.preserves(&h.complex_structure(&gr.alg)));
    }

    #[test]
    fn skt_iff_torsion_closed(g in 0..NAMES.len(), l in prop::collection::vec(rational(), 6)) {
        let gr = &groups()[g];
        let h = structure(gr, &l);
        let skt = h.ddc(&gr.alg).unwrap().is_zero();
        let closed = h.torsion_form(&gr.alg).unwrap().d(&gr.alg).unwrap().is_zero();
        prop_assert_eq!(skt, closed);
    }

    #[test]
    fn family_members_are_pluriclosed(g in 0..NAMES.len(), seed in any::<u64>()) {
        let gr = &groups()[g];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for theta in gr.family.sample(&mut rng, 1) {
            prop_assert!(gr.family.is_positive(&theta));
            prop_assert!(gr.family.verify_point(&gr.alg, &theta).unwrap());
            let h = gr.family.structure(&gr.alg, &theta).unwrap();
            prop_assert!(h.torsion_form(&gr.alg).unwrap().d(&gr.alg).unwrap().is_zero());
        }
    }

    #[test]
    fn combined_residual_vanishes_at_origin(g in 0..NAMES.len(), seed in any::<u64>()) {
        let gr = &groups()[g];
        let sys = CombinedSystem::new(&gr.rs, &gr.alg);
        let zero = vec![0.0; gr.rs.rank];
        let r0 = sys.residual(&zero).unwrap();
        prop_assert!(r0.iter().all(|x| x.abs() < 1e-14));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = sys.random_start(&mut rng);
        if let Some(r) = sys.residual(&n) {
            prop_assert!(r.iter().all(|x| x.is_finite()));
        }
    }

    #[test]
    fn surd_field_arithmetic(a in -20i64..20, b in -20i64..20, c in 1i64..9, d in -5i64..5) {
        let x = &Surd::frac(a, c) + &(&Surd::frac(d, 3) * &Surd::sqrt2());
        let y = Surd::frac(b, c);
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if let Some(inv) = x.inv() {
            prop_assert_eq!(&x * &inv, Surd::int(1));
        } else {
            prop_assert!(x.is_zero());
        }
        let back: Surd = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }
}

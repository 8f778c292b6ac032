mod common;

use std::sync::Arc;

use gentle_core::conditions::{condition_flags, decide};
use gentle_core::dsl::{emit_quiver, parse_quiver};
use gentle_core::exec::Execution;
use gentle_core::field::{Field, PrimeField};
use gentle_core::iso::{decompose_ledgered, IsoVerdict};
use gentle_core::jordan::{construct_shift_endo, genjf_oracle, genjf_structural, jordan_type, OracleOptions};
use gentle_core::partition::Partition;
use gentle_core::quiver::GentleQuiver;
use gentle_core::random::{random_gentle, random_module};
use gentle_core::recover::recover;
use gentle_core::rep::{check_morphism, hom_dim, Representation};
use gentle_core::strings::{all_strings, hom_dim_combinatorial};
use gentle_core::witness::{find_witness, verify_witness};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn quiver(seed: u64) -> Arc<GentleQuiver> {
    random_gentle(&mut ChaCha8Rng::seed_from_u64(seed), 6, 8)
}

fn f2() -> PrimeField {
    PrimeField::new(2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn implication_chain(seed in any::<u64>()) {
        let q = quiver(seed);
        for m in 0..q.vertex_count() {
            let f = condition_flags(&q, m).unwrap();
            prop_assert!(!f.i.holds || f.istar.holds);
            prop_assert!(!f.istar.holds || f.o.holds);
            prop_assert!(!f.o.holds || f.minuscule.holds);
            prop_assert!(!f.cjr() || f.jr());
        }
    }

    #[test]
    fn verdicts_survive_relabelling(seed in any::<u64>()) {
        let q = quiver(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let (r, map) = common::relabel(&mut rng, &q);
        for m in 0..q.vertex_count() {
            let a = condition_flags(&q, m).unwrap();
            let b = condition_flags(&r, map[m]).unwrap();
            let holds = |f: &gentle_core::conditions::ConditionFlags| {
                [f.minuscule.holds, f.o.holds, f.i.holds, f.istar.holds, f.iia.holds, f.iib.holds]
            };
            prop_assert_eq!(holds(&a), holds(&b));
        }
    }

    #[test]
    fn text_format_round_trips(seed in any::<u64>()) {
        let q = quiver(seed);
        let again = parse_quiver(&emit_quiver(&q)).unwrap();
        prop_assert_eq!(&again, q.quiver());
    }

    #[test]
    fn hom_engines_agree(seed in any::<u64>()) {
        let q = quiver(seed);
        let words = all_strings(&q, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::seq::SliceRandom;
        for _ in 0..6 {
            let a = words.choose(&mut rng).unwrap();
            let b = words.choose(&mut rng).unwrap();
            let x = Representation::string_module(q.clone(), f2(), a).unwrap();
            let y = Representation::string_module(q.clone(), f2(), b).unwrap();
            prop_assert_eq!(hom_dim(&x, &y).unwrap(), hom_dim_combinatorial(&q, a, b));
        }
    }

    #[test]
    fn inverse_strings_give_isomorphic_modules(seed in any::<u64>()) {
        let q = quiver(seed);
        for w in all_strings(&q, 3).iter().take(12) {
            let a = Representation::string_module(q.clone(), f2(), w).unwrap();
            let b = Representation::string_module(q.clone(), f2(), &w.inverse()).unwrap();
            prop_assert_eq!(decompose_ledgered(&a, &b), IsoVerdict::Iso);
            prop_assert!(a.satisfies_relations());
            prop_assert_eq!(hom_dim(&a, &b).unwrap(), hom_dim(&a, &a).unwrap());
        }
    }

    #[test]
    fn conjugation_reverses_dominance(a in prop::collection::vec(1usize..5, 0..6), b in prop::collection::vec(1usize..5, 0..6)) {
        let (p, q) = (Partition::new(a), Partition::new(b));
        prop_assume!(p.size() == q.size());
        prop_assert_eq!(p.dominated_by(&q), q.conjugate().dominated_by(&p.conjugate()));
        prop_assert_eq!(p.conjugate().conjugate(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Structural form, the shift certificate, the oracle and plain
    /// enumeration agree where (i*) and (ii)(a) hold.
    #[test]
    fn structural_route_is_certified(seed in any::<u64>()) {
        let q = quiver(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for m in 0..q.vertex_count() {
            let fl = condition_flags(&q, m).unwrap();
            if !(fl.istar.holds && fl.iia.holds) {
                continue;
            }
            let x = random_module(&mut rng, &q, m, f2(), 3, 2);
            let s = genjf_structural(&x, m).unwrap();
            let n = construct_shift_endo(&x, m).unwrap();
            prop_assert!(check_morphism(&x, &x, &n).is_ok());
            prop_assert_eq!(&jordan_type(&x, &n).unwrap(), &s);
            let o = genjf_oracle(&x, &OracleOptions::default()).unwrap();
            prop_assert!(o.exact());
            prop_assert_eq!(&o.jf, &s);
            if let Some(b) = common::brute_genjf(&x, 1 << 16) {
                prop_assert_eq!(&b, &s);
            }
        }
    }

    #[test]
    fn oracle_matches_plain_enumeration(seed in any::<u64>()) {
        let q = quiver(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rand::Rng::gen_range(&mut rng, 0..q.vertex_count());
        let x = random_module(&mut rng, &q, m, f2(), 2, 2);
        if let Some(b) = common::brute_genjf(&x, 1 << 14) {
            let o = genjf_oracle(&x, &OracleOptions::default()).unwrap();
            prop_assert_eq!(o.jf, b);
        }
    }

    #[test]
    fn oracle_ignores_thread_count(seed in any::<u64>()) {
        let q = quiver(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rand::Rng::gen_range(&mut rng, 0..q.vertex_count());
        let x = random_module(&mut rng, &q, m, PrimeField::new(3).unwrap(), 3, 2);
        let seq = OracleOptions { exec: Execution::Sequential, budget: 1 << 16, ..Default::default() };
        let par = OracleOptions { exec: Execution::Parallel, ..seq.clone() };
        let a = genjf_oracle(&x, &seq).unwrap();
        let b = genjf_oracle(&x, &par).unwrap();
        prop_assert_eq!(a.jf, b.jf);
        prop_assert_eq!(a.coverage, b.coverage);
        prop_assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn recovery_round_trips(seed in any::<u64>()) {
        let q = quiver(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for m in 0..q.vertex_count() {
            let d = decide(&q, m).unwrap();
            if !d.jr {
                continue;
            }
            let x = random_module(&mut rng, &q, m, f2(), 8, 2);
            if x.total_dim() > 7 && !d.flags.iia.holds {
                continue;
            }
            let jf = genjf_oracle(&x, &OracleOptions::default()).unwrap();
            prop_assume!(jf.exact());
            let r = recover(&q, m, &jf.jf, f2(), &OracleOptions::default()).unwrap();
            prop_assert_eq!(decompose_ledgered(&x, &r.module), IsoVerdict::Iso);
        }
    }

    #[test]
    fn failing_vertices_have_witnesses(seed in any::<u64>()) {
        let q = quiver(seed);
        for m in 0..q.vertex_count() {
            let d = decide(&q, m).unwrap();
            if d.jr && d.cjr {
                continue;
            }
            let w = find_witness(&q, m, &OracleOptions::default()).unwrap();
            verify_witness(&w, &OracleOptions::default()).unwrap();
            prop_assert_eq!(w.x.dims(), w.y.dims());
        }
    }
}

#[test]
fn brute_force_helper_sees_the_chain() {
    let q = gentle_core::fixtures::load("a3");
    let x = gentle_core::expr::parse_module(q, f2(), "M(a) + M(b)").unwrap();
    let b = common::brute_genjf(&x, 1 << 10).unwrap();
    assert_eq!(b.render(x.quiver()), "1:[1];2:[2];3:[1]");
    assert!(f2().is_zero(&0));
}

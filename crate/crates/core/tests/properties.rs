use beliefnet::audit::{
    audit_agm_contraction, audit_agm_revision, check_c_constraints, check_r_constraints,
    contraction_postulate_holds, revision_postulate_holds, AuditOptions, ContractionPostulate,
    RevisionPostulate,
};
use beliefnet::epistemics::{contract_c, is_faithful, revise_r, EpistemicState, Ranking};
use beliefnet::logic::world_diff;
use beliefnet::metrics::{check_sequence, dalal_gradual, dist_a, dist_b, sd_mask_sequences, Condition};
use beliefnet::operators::{dalal_distances, dalal_revise, lex_revise, moderate_contract};
use beliefnet::replay::{construct_transition_inputs, replay_sequence, ReplayOptions};
use beliefnet::{parse_formula, Formula, Universe, Vocabulary, World, WorldSet};
use proptest::prelude::*;

fn abc() -> Vocabulary {
    Vocabulary::new(["a", "b", "c"]).unwrap()
}

fn formula(atoms: usize) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        (0..atoms).prop_map(Formula::atom),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}

/// A state over three atoms: arbitrary ranks, belief = lowest layer.
fn state3() -> impl Strategy<Value = EpistemicState> {
    proptest::collection::vec(0u32..5, 8).prop_map(|ranks| {
        let u = Universe::full(3).unwrap();
        EpistemicState::from_ranking(Ranking::from_ranks(&u, &ranks))
    })
}

fn set3() -> impl Strategy<Value = WorldSet> {
    (0u64..256).prop_map(|m| WorldSet::from_mask(&Universe::full(3).unwrap(), m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn connectives_match_set_algebra(f in formula(3), g in formula(3)) {
        let u = Universe::full(3).unwrap();
        let (mf, mg) = (f.models(&u), g.models(&u));
        prop_assert_eq!(Formula::not(f.clone()).models(&u), mf.complement());
        prop_assert_eq!(Formula::and(f.clone(), g.clone()).models(&u), mf.intersection(&mg));
        prop_assert_eq!(Formula::or(f.clone(), g.clone()).models(&u), mf.union(&mg));
        prop_assert_eq!(
            Formula::implies(f.clone(), g.clone()).models(&u),
            mf.complement().union(&mg)
        );
        prop_assert_eq!(
            Formula::iff(f, g).models(&u),
            mf.symmetric_difference(&mg).complement()
        );
    }

    #[test]
    fn printing_round_trips(f in formula(3)) {
        let v = abc();
        let text = f.display(&v).to_string();
        let back = parse_formula(&text, &v).unwrap();
        prop_assert_eq!(&back, &f, "printed as {}", text);
    }

    #[test]
    fn dnf_denotes_the_same_worlds(mask in 0u64..256) {
        let v = abc();
        let u = v.full_universe().unwrap();
        let s = WorldSet::from_mask(&u, mask);
        let back = parse_formula(&s.to_dnf(&v), &v).unwrap().models(&u);
        prop_assert_eq!(back, s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn world_diff_is_a_metric_witness(a in any::<u128>(), b in any::<u128>(), c in any::<u128>()) {
        let (a, b, c) = (World(a), World(b), World(c));
        let d = world_diff(a, b);
        prop_assert_eq!(d, world_diff(b, a));
        prop_assert_eq!(d.len() as u32, a.distance(b));
        prop_assert_eq!(d.is_empty(), a == b);
        prop_assert!(a.distance(c) <= a.distance(b) + b.distance(c));
        for i in 0..128 {
            prop_assert_eq!(d.contains(i), a.get(i) != b.get(i));
        }
    }

    #[test]
    fn distances_are_symmetric(k1 in set3(), k2 in set3()) {
        prop_assert_eq!(dist_b(&k1, &k2), dist_b(&k2, &k1));
        prop_assert_eq!(dist_b(&k1, &k2).is_empty(), k1 == k2);
        if !k1.is_empty() && !k2.is_empty() {
            let d = dist_a(&k1, &k2).unwrap();
            prop_assert_eq!(d, dist_a(&k2, &k1).unwrap());
            prop_assert_eq!(d == 0, k1.intersects(&k2));
        }
    }

    #[test]
    fn rankings_are_normalized(ranks in proptest::collection::vec(0u32..20, 8)) {
        let u = Universe::full(3).unwrap();
        let rk = Ranking::from_ranks(&u, &ranks);
        let layers = rk.layers();
        prop_assert_eq!(layers.len(), rk.num_layers());
        prop_assert!(layers.iter().all(|l| !l.is_empty()));
        let total: usize = layers.iter().map(WorldSet::len).sum();
        prop_assert_eq!(total, 8);
        for i in 0..8 {
            for j in 0..8 {
                prop_assert_eq!(rk.le(i, j), ranks[i] <= ranks[j]);
            }
        }
        prop_assert_eq!(Ranking::from_layers(&u, &layers).unwrap(), rk);
    }

    #[test]
    fn minimal_worlds_lie_in_the_lowest_occupied_layer(s in state3(), phi in set3()) {
        let rk = s.ranking();
        let m = rk.minimal(&phi);
        prop_assert!(m.is_subset(&phi));
        prop_assert_eq!(m.is_empty(), phi.is_empty());
        for r in m.iter() {
            prop_assert!(phi.iter().all(|r2| rk.le(r, r2)));
        }
        prop_assert!(is_faithful(rk, s.belief()));
    }

    #[test]
    fn lex_revision_obeys_r_and_its_constraints(s in state3(), phi in set3()) {
        let post = lex_revise(&s, &phi);
        prop_assert_eq!(post.belief(), &revise_r(&s, &phi));
        prop_assert!(is_faithful(post.ranking(), post.belief()));
        let c = check_r_constraints(&s, &phi, &post);
        if !phi.is_empty() {
            prop_assert!(c.all_hold());
        }
    }

    #[test]
    fn moderate_contraction_obeys_c_and_its_constraints(s in state3(), phi in set3()) {
        let post = moderate_contract(&s, &phi);
        prop_assert_eq!(post.belief(), &contract_c(&s, &phi));
        prop_assert!(s.belief().is_subset(post.belief()));
        prop_assert!(is_faithful(post.ranking(), post.belief()));
        prop_assert!(check_c_constraints(&s, &phi, &post).all_hold());
    }

    #[test]
    fn dalal_revision_picks_the_closest_phi_worlds(k in set3(), phi in set3()) {
        prop_assume!(!k.is_empty());
        let d = dalal_distances(&k).unwrap();
        let got = dalal_revise(&k, &phi);
        let best = phi.iter().map(|i| d[i]).min();
        let want = WorldSet::from_indices(k.universe(), phi.iter().filter(|&i| Some(d[i]) == best));
        prop_assert_eq!(got, want);
    }

    #[test]
    fn gradual_layers_are_pure_shells(k in set3(), phi in set3()) {
        prop_assume!(!k.is_empty() && !phi.is_empty());
        let d = dalal_distances(&k).unwrap();
        let layers = dalal_gradual(&k, &phi).unwrap();
        for (i, layer) in layers.iter().enumerate() {
            prop_assert!(layer.iter().all(|w| d[w] == i as u32 + 1));
            prop_assert_eq!(layer.len(), d.iter().filter(|&&x| x == i as u32 + 1).count());
        }
        let mut seq = vec![k.clone()];
        seq.extend(layers.into_iter().filter(|l| !l.is_empty()));
        seq.push(dalal_revise(&k, &phi));
        if seq.len() >= 3 && !phi.intersects(&k) {
            prop_assert!(check_sequence(&seq, Condition::DaStrict).unwrap().holds);
        }
    }

    #[test]
    fn transition_inputs_rebuild_the_target(k1 in set3(), k2 in set3()) {
        let (phi1, not_phi2) = construct_transition_inputs(&k1, &k2);
        prop_assert_eq!(phi1.union(&not_phi2), k2.clone());
        prop_assert!(phi1.is_disjoint(&not_phi2));
        if k1.intersects(&k2) {
            prop_assert_eq!(phi1, k1.intersection(&k2));
        }
    }

    #[test]
    fn replay_is_deterministic(m in proptest::collection::vec(1u64..256, 2..6)) {
        let u = Universe::full(3).unwrap();
        let seq: Vec<WorldSet> = m.iter().map(|&x| WorldSet::from_mask(&u, x)).collect();
        let opts = ReplayOptions { forced: true, check_constraints: true };
        prop_assert_eq!(replay_sequence(&seq, opts).unwrap(), replay_sequence(&seq, opts).unwrap());
    }
}

#[test]
fn sd_implies_db_exhaustively() {
    let u = Universe::full(2).unwrap();
    for len in 3..=5 {
        for masks in sd_mask_sequences(4, len) {
            let seq: Vec<WorldSet> = masks.iter().map(|&m| WorldSet::from_mask(&u, m)).collect();
            assert!(check_sequence(&seq, Condition::Sd).unwrap().holds, "{seq:?}");
            assert!(check_sequence(&seq, Condition::Db).unwrap().holds, "{seq:?}");
        }
    }
}

#[test]
fn sd_enumeration_matches_brute_force() {
    let u = Universe::full(2).unwrap();
    for len in 1..=4 {
        let mut enumerated: Vec<Vec<u64>> = sd_mask_sequences(4, len).collect();
        enumerated.sort();
        let mut brute = Vec::new();
        for code in 0..16u64.pow(len as u32) {
            let masks: Vec<u64> = (0..len).map(|t| code >> (4 * t) & 15).collect();
            let seq: Vec<WorldSet> = masks.iter().map(|&m| WorldSet::from_mask(&u, m)).collect();
            if check_sequence(&seq, Condition::Sd).unwrap().holds {
                brute.push(masks);
            }
        }
        brute.sort();
        assert_eq!(enumerated, brute, "length {len}");
    }
}

#[test]
fn audits_are_deterministic_per_seed() {
    let v = Vocabulary::new(["a", "b", "c", "d", "e"]).unwrap();
    let opts = AuditOptions { seed: 11, samples: 300 };
    let op = |s: &EpistemicState, phi: &WorldSet| lex_revise(s, phi).belief().clone();
    let a = audit_agm_revision("lex", &op, &v, opts).unwrap();
    assert_eq!(a, audit_agm_revision("lex", &op, &v, opts).unwrap());
    assert_eq!(a.mode, "sampled");
    assert!(a.all_hold());
}

/// Broken on purpose: keeps `K` whenever it meets `φ`, so success fails
/// once `K` overlaps `φ` without lying inside it.
fn broken_revise(s: &EpistemicState, phi: &WorldSet) -> WorldSet {
    if s.belief().intersects(phi) {
        s.belief().clone()
    } else {
        phi.clone()
    }
}

fn keep_prior(s: &EpistemicState, _phi: &WorldSet) -> WorldSet {
    s.belief().clone()
}

#[test]
fn revision_counterexamples_replay() {
    let v = Vocabulary::new(["a", "b"]).unwrap();
    let u = v.full_universe().unwrap();
    let r = audit_agm_revision("broken", &broken_revise, &v, AuditOptions::default()).unwrap();
    assert!(!r.check("K*2").unwrap().holds);
    for (p, check) in RevisionPostulate::ALL.iter().zip(&r.checks) {
        assert_eq!(check.id, p.id());
        if let Some(cx) = &check.counterexample {
            let (s, phi, psi) = cx.to_instance(&u, &v).expect("labels resolve");
            assert!(!revision_postulate_holds(*p, &broken_revise, &s, &phi, &psi), "{}", p.id());
        }
    }
}

#[test]
fn contraction_counterexamples_replay() {
    let v = Vocabulary::new(["a", "b"]).unwrap();
    let u = v.full_universe().unwrap();
    let r = audit_agm_contraction("keep", &keep_prior, &v, AuditOptions::default()).unwrap();
    assert!(!r.check("K-4").unwrap().holds);
    for (p, check) in ContractionPostulate::ALL.iter().zip(&r.checks) {
        assert_eq!(check.id, p.id());
        if let Some(cx) = &check.counterexample {
            let (s, phi, psi) = cx.to_instance(&u, &v).expect("labels resolve");
            assert!(!contraction_postulate_holds(*p, &keep_prior, &s, &phi, &psi), "{}", p.id());
        }
    }
}

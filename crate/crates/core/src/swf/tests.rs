use super::*;
use crate::order::first_alts;
use crate::setalg::Algebra;

const X: Alt = Alt(0);
const Y: Alt = Alt(1);

fn pat(s: &str) -> OrderPattern {
    s.parse().unwrap()
}

fn finite(n: u32) -> Arc<Society> {
    Arc::new(Society::finite(n, &first_alts(3)).unwrap())
}

fn fc_society() -> Arc<Society> {
    Arc::new(Society::canonical(Arc::new(Algebra::finite_cofinite()), &first_alts(3)).unwrap())
}

fn frechet_swf() -> Swf {
    let s = fc_society();
    let u = Ultrafilter::frechet(s.algebra_arc()).unwrap();
    Swf::from_ultrafilter(s, u)
}

#[test]
fn dictator_follows_own_order() {
    let s = fc_society();
    let d = 3;
    let swf = Swf::dictator(s.clone(), d).unwrap();
    let n = s
        .embed_patterns(&[pat("0 < 1 ~ *"), pat("1 < 0 ~ *")], &[s.algebra().atom_index(d).unwrap()])
        .unwrap();
    assert_eq!(swf.sigma_order(&n).unwrap().to_string(), "0 < 1 ~ 2");
    assert_eq!(
        Swf::dictator(finite(2), 2).unwrap_err(),
        Error::VoterOutsideUniverse(2)
    );
}

#[test]
fn dictator_passes_exhaustive_checks() {
    let s = finite(2);
    for d in 0..2 {
        let swf = Swf::dictator(s.clone(), d).unwrap();
        let tab = swf.tabulate().unwrap();
        assert_eq!(tab.profiles().len(), 169);
        let u = tab.unanimity();
        let i = tab.independence();
        assert!(u.passed() && u.instances > 0);
        assert!(i.passed() && i.instances == 169 * 3);
        assert_eq!(tab.dictators(), alloc::vec![d]);
    }
}

#[test]
fn corrupted_table_is_caught_and_refused() {
    let s = finite(2);
    let dict = Swf::dictator(s.clone(), 0).unwrap();
    let mut outputs: Vec<Option<usize>> = (0..169)
        .map(|k| Some(dict.sigma_table(&s.table_from_number(k).unwrap()).unwrap()))
        .collect();
    outputs[40] = Some((outputs[40].unwrap() + 1) % 13);
    let bad = Swf::table(s.clone(), Domain::Weak, outputs).unwrap();
    let tab = bad.tabulate().unwrap();
    let (u, i) = (tab.unanimity(), tab.independence());
    assert!(!(u.passed() && i.passed()));
    let w = i.witness.or(u.witness).unwrap();
    assert!(!w.profiles.is_empty());
    assert!(matches!(bad.ks_extract(), Err(Error::AxiomCheckFailed(_))));
}

#[test]
fn table_validation() {
    let s = finite(2);
    assert_eq!(
        Swf::table(s.clone(), Domain::Weak, alloc::vec![Some(0); 10]).unwrap_err(),
        Error::OutsideDomain
    );
    // linear domain must leave non-linear profiles undefined
    assert_eq!(
        Swf::table(s.clone(), Domain::Linear, alloc::vec![Some(0); 169]).unwrap_err(),
        Error::OutsideDomain
    );
    let lin = Swf::table_from_fn(s.clone(), Domain::Linear, |t| t[1]).unwrap();
    let flat = s.position_of_pattern(&pat("0 ~ 1 ~ 2")).unwrap();
    assert_eq!(lin.sigma_table(&[flat, flat]), Err(Error::OutsideDomain));
    assert_eq!(lin.tabulate().unwrap().profiles().len(), 36);
}

#[test]
fn principal_sigma_matches_voter() {
    let s = finite(3);
    for d in 0..3 {
        let u = Ultrafilter::principal(s.algebra_arc(), d).unwrap();
        let swf = Swf::from_ultrafilter(s.clone(), u);
        for k in (0..2197).step_by(11) {
            let t = s.table_from_number(k).unwrap();
            let n = s.realize(&t).unwrap();
            // ties and strict parts alike
            assert_eq!(swf.sigma(&n).unwrap(), t[d as usize]);
        }
    }
}

#[test]
fn frechet_sigma_follows_cofinite_majority() {
    let swf = frechet_swf();
    let s = swf.society();
    let a = s.algebra();
    let early = a.finite_set_index(&[0, 1, 2, 3, 4]).unwrap();
    let n = s.embed_patterns(&[pat("2 < 1 < 0"), pat("0 < 1 < 2")], &[early]).unwrap();
    assert_eq!(swf.sigma_order(&n).unwrap().to_string(), "0 < 1 < 2");
    let flat = s.position_of_pattern(&pat("0 ~ 1 ~ 2")).unwrap();
    let n = s.embed_leading(&[flat], &[a.universe_index()]).unwrap();
    assert_eq!(swf.sigma_order(&n).unwrap().to_string(), "0 ~ 1 ~ 2");
}

#[test]
fn frechet_sigma_passes_standard_probes() {
    let swf = frechet_swf();
    let probes = ProbeSet::standard(swf.society()).unwrap();
    let u = swf.check_unanimity(&probes.profiles).unwrap();
    let i = swf.check_independence(&probes.pairs).unwrap();
    assert!(u.passed() && u.instances > 0, "{u:?}");
    assert!(i.passed() && i.instances > 0, "{i:?}");
}

#[test]
fn single_profile_test_for_dictator_is_membership_of_d() {
    let s = finite(3);
    let a = s.algebra();
    for d in 0..3 {
        let swf = Swf::dictator(s.clone(), d).unwrap();
        for (mask, idx) in a.all_subsets().unwrap() {
            assert_eq!(swf.almost_decisive(&idx).unwrap(), mask >> d & 1 == 1);
        }
        assert!(!swf.almost_decisive(&a.empty_index()).unwrap());
    }
}

#[test]
fn single_profile_test_for_frechet() {
    let swf = frechet_swf();
    let a = swf.society().algebra();
    let cof = a.complement_index(&a.finite_set_index(&[2, 7]).unwrap());
    assert!(swf.almost_decisive(&cof).unwrap());
    assert!(!swf.almost_decisive(&a.finite_set_index(&[2, 7]).unwrap()).unwrap());
    assert!(!swf.almost_decisive(&a.empty_index()).unwrap());
    assert!(swf.almost_decisive(&a.universe_index()).unwrap());
}

#[test]
fn oracle_queries() {
    let s = finite(2);
    let a = s.algebra();
    let swf = Swf::dictator(s.clone(), 1).unwrap();
    let q = |c: Index, mode| DecisivenessQuery {
        coalition: c,
        pair: None,
        mode,
    };
    let d = a.atom_index(1).unwrap();
    assert!(swf.decisiveness_oracle(&q(d.clone(), DecisivenessMode::Decisive)).unwrap());
    assert!(!swf
        .decisiveness_oracle(&q(a.empty_index(), DecisivenessMode::Decisive))
        .unwrap());
    assert!(swf
        .decisiveness_oracle(&q(a.universe_index(), DecisivenessMode::Decisive))
        .unwrap());
    assert!(!swf
        .decisiveness_oracle(&q(a.atom_index(0).unwrap(), DecisivenessMode::AlmostDecisive))
        .unwrap());
    let g = swf.almost_decisive_profile(&d).unwrap();
    let at = DecisivenessQuery {
        coalition: d,
        pair: Some((X, Y)),
        mode: DecisivenessMode::AlmostDecisiveAt(g),
    };
    assert!(swf.decisiveness_oracle(&at).unwrap());

    let fr = frechet_swf();
    let err = fr.decisiveness_oracle(&q(Index::zero(), DecisivenessMode::Decisive));
    assert_eq!(err.unwrap_err(), Error::InfiniteSociety);
}

#[test]
fn single_profile_test_agrees_with_oracle_two_voters() {
    let s = finite(2);
    let a = s.algebra();
    for d in 0..2 {
        let swf = Swf::dictator(s.clone(), d).unwrap();
        let tab = swf.tabulate().unwrap();
        for (mask, idx) in a.all_subsets().unwrap() {
            let fast = swf.almost_decisive(&idx).unwrap();
            assert_eq!(fast, tab.almost_decisive(mask));
            assert_eq!(fast, tab.decisive(mask));
        }
    }
}

#[test]
fn extraction_roundtrips() {
    let s = finite(3);
    for d in 0..3 {
        let dict = Swf::dictator(s.clone(), d).unwrap();
        let u = dict.ks_extract().unwrap();
        assert_eq!(u.principal_point(), Ok(Some(d)));
        assert_eq!(dict.find_dictator(), Ok(d));

        let p = Ultrafilter::principal(s.algebra_arc(), d).unwrap();
        let via = Swf::from_ultrafilter(s.clone(), p.clone());
        assert_eq!(via.find_dictator(), Ok(d));
        let back = via.ks_extract().unwrap();
        for (_, idx) in s.algebra().all_subsets().unwrap() {
            assert_eq!(back.member(&idx), p.member(&idx));
        }
    }
}

#[test]
fn frechet_extraction_matches_frechet() {
    let swf = frechet_swf();
    let u = swf.ks_extract().unwrap();
    let a = swf.society().algebra();
    let fr = Ultrafilter::frechet(swf.society().algebra_arc()).unwrap();
    for v in 0..40u64 {
        let f = a.finite_set_index(&[v, v + 1, 3 * v]).unwrap();
        for i in [f.clone(), a.complement_index(&f)] {
            assert_eq!(u.member(&i), fr.member(&i));
        }
    }
}

#[test]
fn frechet_nondictatorial_witnesses() {
    let swf = frechet_swf();
    let tuples = alloc::vec![alloc::vec![2, 5, 9], alloc::vec![1, 2, 3, 4]];
    let dissent = alloc::vec![(0..10).collect::<Vec<u64>>()];
    let r = swf.nondictatoriality_suite(3, 10, &tuples, &dissent).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.single.len(), 10);
    // tuples longer than k are skipped
    assert_eq!(r.tuples.len(), 1);
    let seven = &r.single[7];
    assert_eq!(seven.voters, alloc::vec![7]);
    assert!(swf.sigma_order(&seven.profile).unwrap().lt(Y, X));
    assert!(r.cofinite[0].follows_majority);
}

#[test]
fn dictator_on_infinite_society_fails_cofinite_check_and_is_principal() {
    let s = fc_society();
    let d = 4;
    let swf = Swf::dictator(s, d).unwrap();
    assert_eq!(
        swf.nondictatoriality_suite(1, 10, &[], &[]).unwrap_err(),
        Error::Principal(d)
    );
    let r = swf
        .nondictatoriality_suite(1, 0, &[], &[alloc::vec![d]])
        .unwrap();
    assert!(!r.cofinite[0].follows_majority);
    assert_eq!(swf.ks_extract().unwrap().principal_point(), Ok(Some(d)));
}

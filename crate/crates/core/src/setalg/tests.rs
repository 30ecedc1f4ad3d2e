use super::*;
use alloc::vec;
use proptest::prelude::*;

fn steps_from_raw(raw: &[(u8, u64, u64)], generators: u64) -> FormationSeq {
    let steps = raw
        .iter()
        .enumerate()
        .map(|(j, &(t, a, b))| match (t % 3, j) {
            (1, j) if j > 0 => Step::Compl((a % j as u64) as usize),
            (2, j) if j > 0 => Step::Inter((a % j as u64) as usize, (b % j as u64) as usize),
            _ => Step::Gen(a % generators),
        })
        .collect();
    FormationSeq::new(steps).unwrap()
}

fn raw_steps() -> impl Strategy<Value = Vec<(u8, u64, u64)>> {
    proptest::collection::vec((any::<u8>(), any::<u64>(), any::<u64>()), 1..24)
}

// Independent evaluator: explicit bitmask set operations over {0..n}.
fn bitmask_eval(seq: &FormationSeq, n: u32) -> u64 {
    let full = (1u64 << n) - 1;
    let mut vals: Vec<u64> = Vec::new();
    for t in seq.triples() {
        let v = match t {
            (0, g, _) => g & full,
            (1, i, _) => full & !vals[i as usize],
            (2, i, k) => vals[i as usize] & vals[k as usize],
            _ => unreachable!(),
        };
        vals.push(v);
    }
    *vals.last().unwrap()
}

fn set(points: &[u64]) -> BTreeSet<u64> {
    points.iter().copied().collect()
}

#[test]
fn eval_formation_examples() {
    let fc = Algebra::finite_cofinite();
    let s = FormationSeq::from_triples(&[(0, 3, 3)]).unwrap();
    assert_eq!(fc.eval_formation(&s).normal_form(10), NormalForm::Finite(set(&[3])));

    let s = FormationSeq::from_triples(&[(0, 3, 3), (1, 0, 0)]).unwrap();
    let d = fc.eval_formation(&s);
    assert_eq!(d.normal_form(10), NormalForm::Cofinite(set(&[3])));
    assert!(!d.contains(3) && d.contains(4) && d.contains(0));

    let s = FormationSeq::from_triples(&[(0, 1, 1), (0, 2, 2), (2, 0, 1)]).unwrap();
    let d = fc.eval_formation(&s);
    let explicit: Vec<u64> = (0..50).filter(|&v| v == 1 && v == 2).collect();
    assert_eq!(d.members_below(50), explicit);
    assert_eq!(d.normal_form(10), NormalForm::empty());
}

#[test]
fn set_at_roundtrip_and_default() {
    let fc = Algebra::finite_cofinite();
    for v in [0, 5, 1234] {
        let i = fc.index_of(&FormationSeq::generator(v));
        assert_eq!(fc.normal_form(&i), NormalForm::Finite(set(&[v])));
    }
    for junk in [0u64, 1, 2, 12345] {
        assert_eq!(fc.normal_form(&Index::from(junk)), NormalForm::empty());
    }
}

#[test]
fn complement_involution_and_excluded_middle() {
    let fc = Algebra::finite_cofinite();
    let i = fc.finite_set_index(&[1, 4, 9]).unwrap();
    let cc = fc.complement_index(&fc.complement_index(&i));
    let (a, b) = (fc.set_at(&i), fc.set_at(&cc));
    assert!((0..100).all(|v| a.contains(v) == b.contains(v)));
    let u = fc.union_index(&i, &fc.complement_index(&i));
    let us = fc.set_at(&u);
    assert!((0..100).all(|v| us.contains(v)));
    assert_eq!(fc.is_universe(&u), Verdict::Exact(true));
}

#[test]
fn intersect_cofinite_sets() {
    let fc = Algebra::finite_cofinite();
    let a = fc.complement_index(&fc.finite_set_index(&[1, 2, 3]).unwrap());
    let b = fc.complement_index(&fc.finite_set_index(&[3, 4]).unwrap());
    let k = fc.intersect_index(&a, &b);
    // explicit: complement of {1,2,3} ∪ {3,4}
    let mut support = set(&[1, 2, 3]);
    support.extend(set(&[3, 4]));
    assert_eq!(fc.normal_form(&k), NormalForm::Cofinite(support));
}

#[test]
fn normal_form_examples() {
    let fc = Algebra::finite_cofinite();
    let c3 = fc.complement_index(&fc.atom_index(3).unwrap());
    assert_eq!(fc.normal_form(&c3), NormalForm::Cofinite(set(&[3])));
    let a = fc.finite_set_index(&[1, 2, 3]).unwrap();
    let b = fc.finite_set_index(&[3, 4]).unwrap();
    assert_eq!(fc.normal_form(&fc.intersect_index(&a, &b)), NormalForm::Finite(set(&[3])));
    let f = fc.finite_set_index(&[0, 8]).unwrap();
    assert_eq!(
        fc.normal_form(&fc.complement_index(&f)),
        NormalForm::Cofinite(set(&[0, 8]))
    );
}

#[test]
fn atoms() {
    let fc = Algebra::finite_cofinite();
    let seven = fc.atom_index(7).unwrap();
    assert_eq!(fc.set_at(&seven).members_below(100), vec![7]);
    assert!(fc.is_atomic());
    let p = Algebra::powerset(3).unwrap();
    assert!(p.is_atomic());
    for v in 0..3 {
        assert_eq!(p.mask_of(&p.atom_index(v).unwrap()), Some(1 << v));
    }
    assert_eq!(p.atom_index(3), Err(Error::VoterOutsideUniverse(3)));
}

#[test]
fn powerset_enumeration() {
    let p = Algebra::powerset(3).unwrap();
    let all = p.all_subsets().unwrap();
    assert_eq!(all.len(), 8);
    let masks: BTreeSet<u64> = all.iter().map(|(_, i)| p.mask_of(i).unwrap()).collect();
    assert_eq!(masks.len(), 8);
    assert_eq!(Algebra::powerset(21).unwrap_err(), Error::UniverseTooLarge(21));
}

#[test]
fn random_sequences_stay_finite_or_cofinite() {
    // deterministic xorshift so the 10^4 sequences are reproducible
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let fc = Algebra::finite_cofinite();
    for _ in 0..10_000 {
        let len = 1 + (next() % 12) as usize;
        let raw: Vec<(u8, u64, u64)> = (0..len).map(|_| (next() as u8, next(), next())).collect();
        let seq = steps_from_raw(&raw, 20);
        let d = fc.eval_formation(&seq);
        let nf = d.normal_form(0);
        assert!(!nf.is_unknown());
        for v in 0..25 {
            assert_eq!(nf.contains(v), Some(d.contains(v)));
        }
    }
}

#[test]
fn generated_algebra_matches_generators_when_already_an_algebra() {
    let p = Algebra::powerset(4).unwrap();
    for m in 0..16u64 {
        let idx = p.index_of(&FormationSeq::generator(m));
        assert_eq!(p.mask_of(&idx), Some(m));
    }
    let raw = [(2u8, 3u64, 9u64), (1, 5, 5), (2, 1, 0), (0, 11, 2), (1, 2, 1)];
    let seq = steps_from_raw(&raw, 16);
    let idx = p.index_of(&seq);
    let k = p.mask_of(&idx).unwrap();
    assert!(p.equal(&idx, &p.generator_index(k)).holds());
}

#[test]
fn set_relations() {
    let fc = Algebra::finite_cofinite();
    let a = fc.finite_set_index(&[1, 2]).unwrap();
    let b = fc.finite_set_index(&[1, 2, 3]).unwrap();
    let cb = fc.complement_index(&b);
    assert_eq!(fc.subset(&a, &b), Verdict::Exact(true));
    assert_eq!(fc.subset(&b, &a), Verdict::Exact(false));
    assert_eq!(fc.subset(&cb, &fc.complement_index(&a)), Verdict::Exact(true));
    assert_eq!(fc.subset(&cb, &b), Verdict::Exact(false));
    assert_eq!(fc.is_empty(&fc.intersect_index(&a, &cb)), Verdict::Exact(true));
    assert_eq!(fc.equal(&a, &fc.intersect_index(&a, &b)), Verdict::Exact(true));
}

#[test]
fn set_sequence_coding_is_pair_exact() {
    let sets = vec![set(&[0, 2]), set(&[]), set(&[1])];
    let codes = code_set_sequence(&sets).unwrap();
    // (0,0)=0, (0,2)=4, (2,1)=11
    assert_eq!(codes, vec![0, 4, 11]);
    assert_eq!(decode_set_sequence(&codes, 3), Some(sets));
    assert_eq!(decode_set_sequence(&[3], 1), None);
}

proptest! {
    #[test]
    fn formation_matches_bitmask_oracle(raw in raw_steps()) {
        let p = Algebra::powerset(5).unwrap();
        let seq = steps_from_raw(&raw, 32);
        let expect = bitmask_eval(&seq, 5);
        let idx = p.index_of(&seq);
        prop_assert_eq!(p.mask_of(&idx), Some(expect));
        let nf = p.normal_form(&idx);
        let nf_mask = match nf {
            NormalForm::Finite(f) => f.iter().fold(0u64, |m, v| m | 1 << v),
            _ => panic!("finite universe"),
        };
        prop_assert_eq!(nf_mask, expect);
    }

    #[test]
    fn index_ops_match_bitmask_oracle(a in raw_steps(), b in raw_steps()) {
        let p = Algebra::powerset(4).unwrap();
        let (sa, sb) = (steps_from_raw(&a, 16), steps_from_raw(&b, 16));
        let (ma, mb) = (bitmask_eval(&sa, 4), bitmask_eval(&sb, 4));
        let (ia, ib) = (sa.code(), sb.code());
        prop_assert_eq!(p.mask_of(&p.complement_index(&ia)), Some(15 & !ma));
        prop_assert_eq!(p.mask_of(&p.intersect_index(&ia, &ib)), Some(ma & mb));
        prop_assert_eq!(p.mask_of(&p.union_index(&ia, &ib)), Some(ma | mb));
    }

    #[test]
    fn index_of_is_injective(a in raw_steps(), b in raw_steps()) {
        let (sa, sb) = (steps_from_raw(&a, 1000), steps_from_raw(&b, 1000));
        prop_assert_eq!(sa == sb, sa.code() == sb.code());
        prop_assert_eq!(FormationSeq::decode(&sa.code()), Some(sa));
    }

    #[test]
    fn bitmask_coding_monotone(s in any::<u16>(), t in any::<u16>()) {
        let (s, t) = (s as u64, (s | t) as u64);
        prop_assert!(s <= t);
    }
}

/// Every generator is undecided; evens contain everything, odds nothing.
struct Opaque;

impl GeneratorFamily for Opaque {
    fn contains(&self, i: u64, _v: u64) -> bool {
        i.is_multiple_of(2)
    }
    fn normal_form(&self, _i: u64, stage: u64) -> NormalForm {
        NormalForm::Unknown(stage)
    }
    fn exact(&self) -> bool {
        false
    }
    fn atom(&self, _v: u64) -> Option<u64> {
        None
    }
    fn descriptor(&self) -> GeneratorDescriptor {
        GeneratorDescriptor::Oracle { name: "opaque".into() }
    }
}

#[test]
fn unknown_generators_cancel_against_their_complements() {
    let a = Algebra::new(Universe::Naturals, Arc::new(Opaque));
    assert_eq!(a.normal_form_at(&a.empty_index(), 5), NormalForm::empty());
    assert_eq!(
        a.normal_form_at(&a.universe_index(), 5),
        NormalForm::Cofinite(BTreeSet::new())
    );
    let g = a.generator_index(4);
    assert_eq!(a.normal_form_at(&g, 5), NormalForm::Unknown(5));
    assert_eq!(a.normal_form_at(&a.intersect_index(&g, &g), 5), NormalForm::Unknown(5));
    let both = a.intersect_index(&g, &a.generator_index(6));
    assert_eq!(a.normal_form_at(&both, 5), NormalForm::Unknown(5));
    // a finite operand is resolved pointwise
    let f = a.intersect_index(&g, &a.empty_index());
    assert_eq!(a.normal_form_at(&f, 5), NormalForm::empty());
}

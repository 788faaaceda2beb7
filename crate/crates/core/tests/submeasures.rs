mod common;

use common::*;
use proptest::prelude::*;
use submeasure_core::algebra::Element;
use submeasure_core::fragmentation::Fragmentation;
use submeasure_core::ideal::AntichainStream;
use submeasure_core::rational::{dyadic, ratio};
use submeasure_core::submeasure::{
    check_axioms, is_exhaustive_on, CheckMode, ExhaustivityOutcome, Submeasure, TableFile,
    Violation,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_satisfies_triangle_inequality(a in 0u32..1024, b in 0u32..1024, c in 0u32..1024) {
        for named in valid_corpus() {
            let m = &named.m;
            let (a, b, c) = (Element::Finite(a), Element::Finite(b), Element::Finite(c));
            let ab = m.distance(&a, &b).unwrap();
            let bc = m.distance(&b, &c).unwrap();
            let ac = m.distance(&a, &c).unwrap();
            prop_assert!(ac <= ab + bc, "{}", named.name);
            prop_assert_eq!(m.distance(&a, &a).unwrap(), ratio(0, 1));
        }
    }

    #[test]
    fn covering_value_is_subadditive(a in 0u32..1024, b in 0u32..1024) {
        let m = covering_windows();
        let (x, y) = (Element::Finite(a), Element::Finite(b));
        let j = Element::Finite(a | b);
        prop_assert!(m.eval(&j).unwrap() <= m.eval(&x).unwrap() + m.eval(&y).unwrap());
    }
}

#[test]
fn corpus_axioms_as_designed() {
    for named in corpus() {
        let r = check_axioms(&named.m, CheckMode::Exhaustive).unwrap();
        assert_eq!(r.passed(), named.valid, "{}", named.name);
    }
    let r = check_axioms(&planted_bad(), CheckMode::Exhaustive).unwrap();
    assert!(matches!(
        r.violation,
        Some(Violation::Monotone {
            a: Element::Finite(1),
            b: Element::Finite(3),
            ..
        })
    ));
}

#[test]
fn covering_oracle() {
    // min cover count by brute force over subfamilies
    let fam = [0x3u32, 0xc, 0x30, 0xc0, 0x300];
    let m = covering_pairs();
    for a in 0u32..1024 {
        let best = (0u32..32)
            .filter(|s| {
                let cover: u32 = (0..5)
                    .filter(|i| s >> i & 1 == 1)
                    .map(|i| fam[i])
                    .fold(0, |x, y| x | y);
                cover & a == a
            })
            .map(u32::count_ones)
            .min()
            .unwrap();
        let want = ratio(best.min(3) as i64, 3);
        assert_eq!(m.eval(&Element::Finite(a)).unwrap(), want, "{a:#x}");
    }
}

#[test]
fn table_files_round_trip() {
    for named in corpus() {
        let file = named.m.to_table_file(Some(named.name.to_string())).unwrap();
        let text = file.render();
        let back = TableFile::parse(&text).unwrap();
        assert_eq!(back, file);
        let m2 = back.into_submeasure().unwrap();
        assert_eq!(m2.values().unwrap(), named.m.values().unwrap());
    }
}

#[test]
fn lebesgue_depth_stream_index() {
    let m = Submeasure::lebesgue();
    for k in 0..=10u32 {
        let mut s = AntichainStream::cantor_depth_nodes();
        let out = is_exhaustive_on(&m, &mut s, &dyadic(k), 30).unwrap();
        assert_eq!(
            out,
            ExhaustivityOutcome::Index {
                index: k as usize + 1,
                certified: true
            }
        );
    }
}

#[test]
fn harmonic_levels_match_values() {
    // a ∈ C_n  <=>  m(a) >= 1/n, checked directly on the corpus
    for named in valid_corpus() {
        let f = Fragmentation::from_submeasure_harmonic(&named.m).unwrap();
        let l = f.level_count().unwrap();
        for a in (1u32..1024).step_by(7) {
            let e = Element::Finite(a);
            let v = named.m.eval(&e).unwrap();
            for n in 1..=l {
                assert_eq!(
                    f.member(n, &e).unwrap(),
                    v >= ratio(1, n as i64),
                    "{} {a:#x} {n}",
                    named.name
                );
            }
        }
    }
}

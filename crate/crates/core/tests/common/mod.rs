#![allow(dead_code)]

use submeasure_core::algebra::{Algebra, Element};
use submeasure_core::fragmentation::Fragmentation;
use submeasure_core::rational::{ratio, Rational};
use submeasure_core::submeasure::{CoveringParams, Submeasure};

pub fn finite(n: u8) -> Algebra {
    Algebra::finite(n).unwrap()
}

pub fn weights(alg: Algebra, ws: &[(i64, i64)]) -> Submeasure {
    Submeasure::from_atom_weights(alg, ws.iter().map(|&(p, q)| ratio(p, q)).collect()).unwrap()
}

pub fn covering(alg: Algebra, family: &[u32], scale: u32) -> Submeasure {
    let fam = family.iter().map(|&m| Element::Finite(m)).collect();
    Submeasure::from_covering(alg, CoveringParams::new(fam, scale).unwrap()).unwrap()
}

pub struct Named {
    pub name: &'static str,
    pub m: Submeasure,
    /// Whether the submeasure axioms are expected to hold.
    pub valid: bool,
}

/// Non-uniform atom weights on ten atoms.
pub fn weights_dyadic() -> Submeasure {
    weights(
        finite(10),
        &[
            (1, 4),
            (1, 8),
            (1, 8),
            (1, 8),
            (1, 8),
            (1, 16),
            (1, 16),
            (1, 16),
            (1, 32),
            (1, 32),
        ],
    )
}

pub fn weights_linear() -> Submeasure {
    let ws: Vec<(i64, i64)> = (1..=10).map(|i| (i, 55)).collect();
    weights(finite(10), &ws)
}

pub fn weights_heavy_pair() -> Submeasure {
    let mut ws = vec![(1, 5), (1, 5)];
    ws.extend(std::iter::repeat_n((3, 40), 8));
    weights(finite(10), &ws)
}

pub fn covering_pairs() -> Submeasure {
    covering(finite(10), &[0x3, 0xc, 0x30, 0xc0, 0x300], 3)
}

pub fn covering_windows() -> Submeasure {
    covering(
        finite(10),
        &[0x7, 0xe, 0x1c, 0x38, 0x70, 0xe0, 0x1c0, 0x380],
        2,
    )
}

/// Uniform values except `m(0x1) = 1/2 > m(0x3) = 1/5`.
pub fn planted_bad() -> Submeasure {
    let alg = finite(10);
    let mut values: Vec<Rational> = (0..1u32 << 10)
        .map(|m| ratio(m.count_ones() as i64, 10))
        .collect();
    values[1] = ratio(1, 2);
    Submeasure::from_table(alg, values).unwrap()
}

pub fn corpus() -> Vec<Named> {
    vec![
        Named {
            name: "uniform",
            m: Submeasure::uniform(finite(10)),
            valid: true,
        },
        Named {
            name: "weights-dyadic",
            m: weights_dyadic(),
            valid: true,
        },
        Named {
            name: "weights-linear",
            m: weights_linear(),
            valid: true,
        },
        Named {
            name: "weights-heavy-pair",
            m: weights_heavy_pair(),
            valid: true,
        },
        Named {
            name: "covering-pairs",
            m: covering_pairs(),
            valid: true,
        },
        Named {
            name: "covering-windows",
            m: covering_windows(),
            valid: true,
        },
        Named {
            name: "planted-bad",
            m: planted_bad(),
            valid: false,
        },
    ]
}

pub fn valid_corpus() -> Vec<Named> {
    corpus().into_iter().filter(|n| n.valid).collect()
}

/// Graded fragmentations: dyadic level sets of subadditive submeasures are
/// always graded.
pub fn graded_fragmentations() -> Vec<(String, Fragmentation)> {
    let mut out = Vec::new();
    for n in [4u8, 8, 10] {
        let f = Fragmentation::from_submeasure_dyadic(&Submeasure::uniform(finite(n))).unwrap();
        out.push((format!("dyadic-uniform-{n}"), f));
    }
    for named in valid_corpus().into_iter().skip(1) {
        let f = Fragmentation::from_submeasure_dyadic(&named.m).unwrap();
        out.push((format!("dyadic-{}", named.name), f));
    }
    out
}

/// `a ∈ V_r` by brute force: every atom of `a` gets one of the labels
/// `0..levels.len()`, and label `i` must form a block in `U_{levels[i]}`.
pub fn v_member_brute(f: &Fragmentation, a: u32, levels: &[usize]) -> bool {
    if levels == [0] {
        return true;
    }
    let atoms: Vec<u32> = (0..32).filter(|i| a >> i & 1 == 1).collect();
    let k = levels.len();
    let total = k.pow(atoms.len() as u32);
    (0..total).any(|mut code| {
        let mut blocks = vec![0u32; k];
        for &i in &atoms {
            blocks[code % k] |= 1 << i;
            code /= k;
        }
        blocks
            .iter()
            .zip(levels)
            .all(|(&b, &n)| f.in_u(n, &Element::Finite(b)).unwrap())
    })
}

/// Every index with levels drawn from `1..=l`, plus the index for 1.
pub fn all_indices(l: usize) -> Vec<submeasure_core::construction::DyadicIndex> {
    use submeasure_core::construction::DyadicIndex;
    let mut out: Vec<DyadicIndex> = (1u32..1 << l)
        .map(|s| {
            DyadicIndex::new((0..l).filter(|i| s >> i & 1 == 1).map(|i| i + 1).collect()).unwrap()
        })
        .collect();
    out.push(DyadicIndex::one());
    out.sort();
    out
}

/// Constructed value by brute force: the least index whose `V` contains `a`.
pub fn construction_brute(f: &Fragmentation, a: u32) -> Rational {
    if a == 0 {
        return ratio(0, 1);
    }
    let l = f.level_count().unwrap();
    all_indices(l)
        .into_iter()
        .find(|r| v_member_brute(f, a, r.levels()))
        .map(|r| r.value())
        .unwrap()
}

/// A random chain on `atoms` atoms with exactly `levels` levels: each level
/// adds a few random generators, and the last adds every atom.
pub fn random_fragmentation(rng: &mut impl rand::Rng, atoms: u8, levels: usize) -> Fragmentation {
    use submeasure_core::algebra::upward_closure;
    let alg = finite(atoms);
    let full = (1u32 << atoms) - 1;
    let mut gens: Vec<Element> = Vec::new();
    let mut fams = Vec::new();
    for n in 1..=levels {
        if n == levels {
            gens.extend((0..atoms).map(|i| Element::Finite(1 << i)));
        } else {
            for _ in 0..rng.gen_range(1..=3) {
                gens.push(Element::Finite(rng.gen_range(1..=full)));
            }
        }
        fams.push(upward_closure(alg, &gens).unwrap());
    }
    Fragmentation::from_levels(alg, fams).unwrap()
}

/// Decreasing chains `a ⊃ a - {i1} ⊃ ... ⊃ 0` over random atom orders, each
/// certified by its own value table.
pub fn random_null_streams(
    m: &Submeasure,
    count: usize,
    rng: &mut impl rand::Rng,
) -> Vec<submeasure_core::ideal::CertifiedSequence> {
    use rand::seq::SliceRandom;
    use submeasure_core::ideal::{CertifiedSequence, Envelope};
    let alg = m.algebra();
    let atoms = alg.atom_count().unwrap() as u32;
    (0..count)
        .map(|_| {
            let mut order: Vec<u32> = (0..atoms).collect();
            order.shuffle(rng);
            let keep = rng.gen_range(1..=order.len());
            let mut cur: u32 = order[..keep].iter().map(|i| 1 << i).sum();
            let mut terms = Vec::new();
            let mut bounds = Vec::new();
            for &i in &order[..keep] {
                terms.push(Element::Finite(cur));
                bounds.push(m.eval(&Element::Finite(cur)).unwrap());
                cur &= !(1 << i);
            }
            bounds.push(ratio(0, 1));
            let start = rng.gen_range(0..3);
            CertifiedSequence::from_terms(alg, start, Envelope::Table(shift(bounds, start)), terms)
        })
        .collect()
}

/// Table envelopes are indexed from 0; pad so entry `start` is the first bound.
fn shift(bounds: Vec<Rational>, start: usize) -> Vec<Rational> {
    let mut out = vec![bounds[0].clone(); start];
    out.extend(bounds);
    out
}

pub const COMMANDS: [&str; 11] = [
    "check-axioms",
    "construct",
    "check-graded",
    "sigma-cc",
    "grading-indices",
    "roundtrip",
    "kelley",
    "pack",
    "diagonal",
    "concentrate",
    "exhaustivity",
];

/// Writes `spec` into `dir` and runs the CLI in-process on it.
pub fn run_spec(dir: &std::path::Path, spec: &str, args: &[&str]) -> submeasure_core::cli::Outcome {
    let path = dir.join("input.spec");
    std::fs::write(&path, spec).unwrap();
    let mut argv = vec![
        "submeasure".to_string(),
        "--spec".into(),
        path.display().to_string(),
    ];
    argv.extend(args.iter().map(|s| s.to_string()));
    submeasure_core::cli::run(argv)
}

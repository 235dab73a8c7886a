use bramsey::bigraph::BipartiteGraph;
use bramsey::cycles::{extend_lemma1, extend_lemma2, oracle_find_cycle};
use bramsey::{find_cycle, CycleWitness, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `k`-cycle on left/right vertices `0..k` in a `(k+1) x (k+1)` graph, with
/// `x = y = k` attached by the given neighbor masks.
fn placement(
    k: usize,
    x_nbrs: u64,
    y_nbrs: u64,
    xy: bool,
    chords: &[(usize, usize)],
) -> (BipartiteGraph, CycleWitness) {
    let left: Vec<usize> = (0..k).collect();
    let right: Vec<usize> = (0..k).collect();
    let c = CycleWitness::new(left, right).unwrap();
    let mut g = BipartiteGraph::empty(k + 1, k + 1).unwrap();
    for (i, j) in c.edges().chain(chords.iter().copied()) {
        g.insert_edge(i, j).unwrap();
    }
    for j in 0..k {
        if x_nbrs >> j & 1 == 1 {
            g.insert_edge(k, j).unwrap();
        }
    }
    for i in 0..k {
        if y_nbrs >> i & 1 == 1 {
            g.insert_edge(i, k).unwrap();
        }
    }
    if xy {
        g.insert_edge(k, k).unwrap();
    }
    (g, c)
}

fn lemma2_hypothesis(k: usize, x_nbrs: u64, y_nbrs: u64, xy: bool) -> bool {
    let need = if xy { k.div_ceil(2) + 1 } else { k - 1 };
    x_nbrs.count_ones() as usize >= need && y_nbrs.count_ones() as usize >= need
}

/// The insertion patterns of `extend_lemma1`, checked directly on the masks.
fn lemma1_pattern(k: usize, x_nbrs: u64, y_nbrs: u64, xy: bool) -> bool {
    (0..k).any(|i| {
        let j = (i + 1) % k;
        let four = y_nbrs >> i & 1 == 1
            && y_nbrs >> j & 1 == 1
            && x_nbrs >> i & 1 == 1
            && x_nbrs >> j & 1 == 1;
        let two = xy && y_nbrs >> i & 1 == 1 && x_nbrs >> i & 1 == 1;
        four || two
    })
}

#[test]
fn every_k4_placement_behaves() {
    let k = 4;
    let mut extended = 0;
    for x_nbrs in 0..1u64 << k {
        for y_nbrs in 0..1u64 << k {
            for xy in [false, true] {
                let (g, c) = placement(k, x_nbrs, y_nbrs, xy, &[]);
                let tag = format!("x~{x_nbrs:04b} y~{y_nbrs:04b} xy={xy}");

                let l1 = extend_lemma1(&g, &c, k, k).unwrap();
                assert_eq!(l1.is_some(), lemma1_pattern(k, x_nbrs, y_nbrs, xy), "{tag}");
                if let Some(w) = &l1 {
                    assert!(w.is_valid_in(&g), "{tag}");
                    assert_eq!(w.half_length(), k + 1);
                }

                match extend_lemma2(&g, &c, k, k) {
                    Ok(w) => {
                        assert!(lemma2_hypothesis(k, x_nbrs, y_nbrs, xy), "{tag}");
                        assert!(w.is_valid_in(&g), "{tag}");
                        assert_eq!(w.half_length(), k + 1);
                        extended += 1;
                    }
                    Err(Error::HypothesisUnmet(_)) => {
                        assert!(!lemma2_hypothesis(k, x_nbrs, y_nbrs, xy), "{tag}");
                    }
                    Err(e) => panic!("{tag}: {e}"),
                }
                if lemma2_hypothesis(k, x_nbrs, y_nbrs, xy) {
                    assert!(oracle_find_cycle(&g, k + 1).unwrap().is_some(), "{tag}");
                }
            }
        }
    }
    assert!(extended > 0);
}

#[test]
fn random_placements_with_chords_for_larger_cycles() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in [4usize, 5, 6] {
        let mut tried = 0;
        while tried < 400 {
            let x_nbrs = rng.gen::<u64>() & ((1 << k) - 1);
            let y_nbrs = rng.gen::<u64>() & ((1 << k) - 1);
            let xy = rng.gen_bool(0.5);
            if !lemma2_hypothesis(k, x_nbrs, y_nbrs, xy) {
                continue;
            }
            tried += 1;
            let chords: Vec<(usize, usize)> = (0..k)
                .flat_map(|i| (0..k).map(move |j| (i, j)))
                .filter(|&(i, j)| j != i && j != (i + k - 1) % k)
                .filter(|_| rng.gen_bool(0.2))
                .collect();
            let (g, c) = placement(k, x_nbrs, y_nbrs, xy, &chords);
            let w = extend_lemma2(&g, &c, k, k).unwrap_or_else(|e| panic!("k={k}: {e}"));
            assert!(w.is_valid_in(&g));
            assert!(w.left_seq().contains(&k) && w.right_seq().contains(&k));
            if let Some(l1) = extend_lemma1(&g, &c, k, k).unwrap() {
                assert!(l1.is_valid_in(&g));
            }
        }
    }
}

#[test]
fn extension_rejects_bad_inputs() {
    let (g, c) = placement(4, 0b1111, 0b1111, true, &[]);
    assert!(matches!(
        extend_lemma2(&g, &c, 0, 4),
        Err(Error::Contract(_))
    ));
    assert!(matches!(
        extend_lemma1(&g, &c, 5, 4),
        Err(Error::Contract(_))
    ));
    let short = find_cycle(&g, 3).unwrap();
    assert!(matches!(
        extend_lemma2(&g, &short, 4, 4),
        Err(Error::Contract(_)) | Err(Error::HypothesisUnmet(_))
    ));
    let not_a_cycle = CycleWitness::new(vec![0, 1, 2, 3], vec![1, 0, 3, 2]).unwrap();
    assert!(extend_lemma1(&g, &not_a_cycle, 4, 4).is_err());
}

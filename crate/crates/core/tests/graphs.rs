use bramsey::bigraph::{are_isomorphic, BipartiteGraph, GraphEncoding};
use bramsey::constructions::{
    figure1_graph, lower_bound_certificate, theorem4_construction, ConstructionReport,
};
use bramsey::{complement, find_cycle};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_graph(rng: &mut ChaCha8Rng, l: usize, r: usize) -> BipartiteGraph {
    let rows = (0..l).map(|_| rng.gen::<u64>() & ((1 << r) - 1)).collect();
    BipartiteGraph::from_rows(l, r, rows).unwrap()
}

#[test]
fn isomorphism_is_an_equivalence_on_sampled_4x4_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let graphs: Vec<BipartiteGraph> = (0..40)
        .map(|_| {
            let base = random_graph(&mut rng, 4, 4);
            let mut lp: Vec<usize> = (0..4).collect();
            let mut rp: Vec<usize> = (0..4).collect();
            lp.shuffle(&mut rng);
            rp.shuffle(&mut rng);
            if rng.gen_bool(0.3) {
                base.permuted(&lp, &rp).unwrap()
            } else {
                base
            }
        })
        .collect();
    for a in &graphs {
        assert!(are_isomorphic(a, a));
        for b in &graphs {
            let ab = are_isomorphic(a, b);
            assert_eq!(ab, are_isomorphic(b, a));
            if ab {
                assert_eq!(a.edge_count(), b.edge_count());
                for c in &graphs {
                    if are_isomorphic(b, c) {
                        assert!(are_isomorphic(a, c));
                    }
                }
            }
        }
    }
}

#[test]
fn figure1_blue_is_red_minus_the_middle_edge_up_to_isomorphism() {
    let coloring = figure1_graph();
    assert_eq!(coloring.red().edge_count(), 25);
    assert!(find_cycle(coloring.red(), 4).is_none());
    assert!(find_cycle(&coloring.blue(), 4).is_none());
    let reduced = coloring.red().without_edge(3, 3);
    assert!(are_isomorphic(&coloring.blue(), &reduced));
    assert!(!are_isomorphic(&coloring.blue(), coloring.red()));
}

#[test]
fn certificates_survive_serialization() {
    for (m, n) in [(2, 2), (3, 5), (4, 4), (4, 9), (6, 2)] {
        let report = lower_bound_certificate(m, n).unwrap();
        for encoding in [GraphEncoding::Edges, GraphEncoding::RowsHex] {
            let text = serde_json::to_string(&report.to_json(encoding)).unwrap();
            let back: ConstructionReport = serde_json::from_str(&text).unwrap();
            assert_eq!(back, report);
            assert!(back.recheck());
        }
    }
}

#[test]
fn theorem4_colorings_are_complementary_blocks() {
    for m in 2..=6 {
        for n in 2..=6 {
            let c = theorem4_construction(m, n).unwrap();
            let b = m + n - 2;
            assert_eq!(c.board(), (b, b));
            assert_eq!(c.red().edge_count(), (m - 1) * b);
            assert_eq!(c.blue().edge_count(), (n - 1) * b);
            assert_eq!(&complement(&c.blue()), c.red());
        }
    }
}

#[test]
fn malformed_graph_json_names_the_field() {
    for (text, field) in [
        (r#"{"left":2,"right":2,"edges":[[0,2]]}"#, "edges"),
        (r#"{"left":2,"right":2,"edges":[[1,1],[0,0]]}"#, "edges"),
        (r#"{"left":2,"right":2,"rows_hex":["1"]}"#, "rows_hex"),
        (r#"{"left":2,"right":2,"rows_hex":["G","0"]}"#, "rows_hex"),
        (r#"{"left":65,"right":2,"edges":[]}"#, "left"),
    ] {
        let err = BipartiteGraph::from_json_str(text).unwrap_err().to_string();
        assert!(err.contains(field), "{text}: {err}");
    }
}

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use upag::compressed::MAGIC;
use upag::construct::{lfc_symbols, sigma_rank, sigma_rank_with, TieBreak};
use upag::generate::{generate, GenConfig};
use upag::oracle::{check_exhaustive, naive_h0, NaiveGraph};
use upag::{edgelist, peel, CompressedGraph, Dag, Error, UndirectedMultigraph};

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn handshake_identities(m in 1usize..6, n in 1usize..120, seed in any::<u64>()) {
        let g = generate(&GenConfig::new(m, n, seed)).unwrap();
        let c = CompressedGraph::build(g.dag()).unwrap();
        let nv = n + 1;
        let total: usize = (0..nv).map(|v| c.degree_in(v).unwrap()).sum();
        prop_assert_eq!(total, n * m);
        for v in 0..nv {
            for u in c.neighbours_out(v).unwrap() {
                let back = c.neighbours_in(u).unwrap();
                let want = c.neighbours_out(v).unwrap().iter().filter(|&&x| x == u).count();
                prop_assert_eq!(back.iter().filter(|&&x| x == v).count(), want);
            }
            for u in 0..nv {
                prop_assert_eq!(c.adjacent(u, v).unwrap(), c.adjacent(v, u).unwrap());
            }
        }
        if g.dag().is_simple_beyond_seed() {
            for v in 0..nv {
                prop_assert!(!c.adjacent(v, v).unwrap());
            }
        }
    }

    #[test]
    fn in_degree_counts_occurrences(m in 1usize..6, n in 1usize..200, seed in any::<u64>()) {
        let g = generate(&GenConfig::new(m, n, seed)).unwrap();
        let c = CompressedGraph::build(g.dag()).unwrap();
        let relabel = c.relabel().unwrap();
        let mut counts = vec![0usize; n + 1];
        for &w in g.targets() {
            counts[w] += 1;
        }
        for old in 0..=n {
            prop_assert_eq!(c.degree_in(relabel[old]).unwrap(), counts[old]);
        }
    }

    #[test]
    fn random_instances_match_oracle(m in 1usize..7, n in 1usize..150, seed in any::<u64>(), labelled in any::<bool>()) {
        let g = generate(&GenConfig::new(m, n, seed)).unwrap();
        let d = g.dag();
        let (c, o) = if labelled {
            (CompressedGraph::build_labelled(d).unwrap(), NaiveGraph::labelled(d))
        } else {
            let s = sigma_rank(d);
            (CompressedGraph::build_with(d, &s).unwrap(), NaiveGraph::unlabelled(d, s.ranks()))
        };
        if let Err(e) = check_exhaustive(&c, &o, true) {
            prop_assert!(false, "{}", e);
        }
    }

    #[test]
    fn lfc_never_raises_per_character_entropy(
        m in 2usize..9,
        blocks in 1usize..60,
        alpha in 2usize..50,
        seed in any::<u64>(),
    ) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<usize> = (0..m * blocks).map(|_| rng.gen_range(0..alpha)).collect();
        let mut freq = vec![0usize; alpha];
        for &c in &a {
            freq[c] += 1;
        }
        let mut order: Vec<usize> = (0..alpha).collect();
        order.sort_by_key(|&c| (freq[c], c));
        let mut rank = vec![0; alpha];
        for (r, &c) in order.iter().enumerate() {
            rank[c] = r;
        }
        let out = lfc_symbols(&a, m, &rank, false).unwrap().output;
        prop_assert_eq!(out.len(), blocks * (m - 1));
        let before = naive_h0(&a) / a.len() as f64;
        let after = naive_h0(&out) / out.len() as f64;
        prop_assert!(after <= before + 1e-12, "{} -> {}", before, after);
    }
}

#[test]
fn peel_recovers_dag_from_shuffled_edges() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (m, n) in [(1usize, 300usize), (2, 500), (4, 800)] {
        let g = generate(&GenConfig::new(m, n, 11)).unwrap();
        let mut edges = g.dag().undirect().edges().to_vec();
        edges.shuffle(&mut rng);
        let d = peel(&UndirectedMultigraph::new(n + 1, edges).unwrap(), m).unwrap();
        // labels and arrival order are intact, only edge order changed
        for t in 1..=n {
            assert_eq!(
                sorted(d.block(t).to_vec()),
                sorted(g.block(t).to_vec()),
                "M={m} t={t}"
            );
        }
    }
}

#[test]
fn peel_rejects_graphs_without_a_degree_m_vertex() {
    // a triangle on top of the seed pair is not 1-out-regular
    let u = UndirectedMultigraph::new(4, vec![(1, 0), (2, 3), (3, 1), (2, 1)]).unwrap();
    assert!(peel(&u, 1).is_err());
}

#[test]
fn edge_list_shuffled_text_is_peeled() {
    let g = generate(&GenConfig::new(3, 60, 4)).unwrap();
    let text = edgelist::to_text(g.dag());
    let mut lines: Vec<&str> = text.lines().skip(1).collect();
    lines.shuffle(&mut ChaCha8Rng::seed_from_u64(1));
    let shuffled = format!("{}\n{}\n", text.lines().next().unwrap(), lines.join("\n"));
    let e = edgelist::parse(&shuffled).unwrap();
    assert!(e.arrival_inferred);
    assert_eq!(e.dag.n(), 60);
    // peeled instance builds and agrees with its own oracle
    let s = sigma_rank(&e.dag);
    let c = CompressedGraph::build_with(&e.dag, &s).unwrap();
    check_exhaustive(&c, &NaiveGraph::unlabelled(&e.dag, s.ranks()), true).unwrap();
}

#[test]
fn tie_breaks_keep_minimal_parent_in_degree() {
    let g = generate(&GenConfig::new(3, 400, 8)).unwrap();
    let d = g.dag();
    let indeg = d.in_degrees();
    for tie in [TieBreak::AscendingIndex, TieBreak::DescendingIndex] {
        let s = sigma_rank_with(d, tie).unwrap();
        let c = CompressedGraph::build_with(d, &s).unwrap();
        let o = NaiveGraph::unlabelled(d, s.ranks());
        check_exhaustive(&c, &o, false).unwrap();
        let relabel = c.relabel().unwrap();
        let mut inverse = vec![0; relabel.len()];
        for (old, &new) in relabel.iter().enumerate() {
            inverse[new] = old;
        }
        for v in 1..=d.n() {
            let parent = inverse[c.out_neighbour(relabel[v], 1).unwrap()];
            let best = d.block(v).iter().map(|&w| indeg[w]).min().unwrap();
            assert_eq!(indeg[parent], best);
        }
    }
}

#[test]
fn serialization_round_trips_every_layout() {
    for (m, n, labelled) in [
        (1usize, 40usize, false),
        (1, 40, true),
        (3, 250, false),
        (5, 90, true),
    ] {
        let g = generate(&GenConfig::new(m, n, 2)).unwrap();
        let c = if labelled {
            CompressedGraph::build_labelled(g.dag()).unwrap()
        } else {
            CompressedGraph::build(g.dag()).unwrap()
        };
        let bytes = c.to_bytes();
        assert_eq!(&bytes[..4], MAGIC);
        let back = CompressedGraph::from_bytes(&bytes).unwrap();
        assert_eq!(back.to_bytes(), bytes);
        assert_eq!(back.out_lists().unwrap(), c.out_lists().unwrap());
        for v in 0..=n {
            assert_eq!(back.neighbours_in(v).unwrap(), c.neighbours_in(v).unwrap());
        }
        assert_eq!(back.space_report().total_bits, c.space_report().total_bits);
    }
}

#[test]
fn deserialization_errors_are_distinct() {
    let g = generate(&GenConfig::new(3, 100, 6)).unwrap();
    let bytes = CompressedGraph::build(g.dag()).unwrap().to_bytes();

    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(matches!(
        CompressedGraph::from_bytes(&bad),
        Err(Error::BadMagic)
    ));

    let mut bad = bytes.clone();
    bad[4] = 9;
    assert!(matches!(
        CompressedGraph::from_bytes(&bad),
        Err(Error::VersionMismatch { found: 9, .. })
    ));

    for cut in [0, 3, 10, bytes.len() / 2, bytes.len() - 1] {
        assert!(
            matches!(
                CompressedGraph::from_bytes(&bytes[..cut]),
                Err(Error::Truncated { .. })
            ),
            "cut at {cut}"
        );
    }

    let mut bad = bytes.clone();
    let last = bad.len() - 1;
    bad[last] ^= 0x5a;
    assert!(matches!(
        CompressedGraph::from_bytes(&bad),
        Err(Error::ChecksumMismatch { .. })
    ));

    // flipping payload bytes never panics
    for k in (8..bytes.len() - 4).step_by(7) {
        let mut bad = bytes.clone();
        bad[k] ^= 0xff;
        assert!(CompressedGraph::from_bytes(&bad).is_err(), "flip at {k}");
    }
}

#[test]
fn query_errors() {
    let d = Dag::new(2, vec![0, 0, 1, 0]).unwrap();
    let c = CompressedGraph::build(&d).unwrap();
    assert!(matches!(
        c.out_neighbour(0, 1),
        Err(Error::OutOfRange { .. })
    ));
    assert!(c.out_neighbour(1, 3).is_err());
    assert!(c.out_neighbour(3, 1).is_err());
    assert!(c.in_neighbour(2, 1).is_err());
    assert!(c.degree_in(3).is_err());
    assert!(c.adjacent(0, 3).is_err());
}

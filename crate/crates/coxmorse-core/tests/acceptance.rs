//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with what was checked. Every tolerance here is exact: the
//! results are integers and must match bit for bit.

use std::collections::BTreeMap;

use coxmorse_core::betti::{
    appendix_check, betti_descent_count, betti_type_a, betti_type_b, betti_type_d3, descent_table,
    RowStatus,
};
use coxmorse_core::coxeter::CoxeterSystem;
use coxmorse_core::diagram::CoxeterDiagram;
use coxmorse_core::homology::{integral_homology, order_complex, simplicial_chain_complex};
use coxmorse_core::ind_complex::{
    iter_bits, lex_shelling, shelling_match, spanning_facets_predicate, verify_shelling,
    MatchOutcome, OrderedGraph,
};
use coxmorse_core::morse::{
    alternating_path, audit, matching_algorithm, matching_via_fibers, morse_boundary_matrices,
    stream_audit, threshold, verify_acyclic,
};
use coxmorse_core::perm_complex::{admissibility_table, PermComplex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BUDGET: u64 = 100_000;

/// The enumerable test matrix: every group with every valid k.
fn test_matrix() -> Vec<(&'static str, usize)> {
    let mut out = Vec::new();
    for (spec, ks) in [
        ("A3", vec![3]),
        ("A4", vec![3, 4]),
        ("A5", vec![3, 4, 5]),
        ("B3", vec![3]),
        ("B4", vec![3, 4]),
        ("D4", vec![3, 4]),
        ("H3", vec![3]),
        ("F4", vec![3, 4]),
    ] {
        for k in ks {
            out.push((spec, k));
        }
    }
    out
}

/// Pairs where the Smith-normal-form oracle run is mandatory.
const ORACLE_MANDATORY: &[(&str, usize)] = &[
    ("A3", 3),
    ("A4", 3),
    ("A4", 4),
    ("B3", 3),
    ("D4", 3),
    ("H3", 3),
];

fn descent_counts_map(diagram: &CoxeterDiagram, k: usize) -> BTreeMap<usize, i128> {
    descent_table(diagram, diagram.type_label(), k)
        .unwrap()
        .entries
}

fn stream_counts_map(sys: &CoxeterSystem, k: usize) -> BTreeMap<usize, i128> {
    let audit = stream_audit(sys, k, BUDGET).unwrap();
    audit
        .critical_by_dim
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(d, &c)| (d, c as i128))
        .collect()
}

#[test]
fn acceptance_1_appendix_reproduction() {
    let started = std::time::Instant::now();
    let reports = appendix_check().unwrap();
    assert_eq!(reports.len(), 24);

    // rows the reference table and the computation agree on
    let expected_matches: &[(&str, usize, usize, i128)] = &[
        ("H3", 3, 1, 31),
        ("H4", 3, 1, 3601),
        ("H4", 4, 2, 719),
        ("F4", 3, 1, 289),
        ("F4", 4, 2, 47),
        ("E6", 3, 1, 7201),
        ("E6", 3, 2, 720),
        ("E6", 4, 2, 5039),
        ("E6", 5, 3, 1441),
        ("E6", 6, 4, 125),
        ("E7", 4, 2, 141_119),
        ("E7", 5, 3, 60_481),
        ("E7", 6, 4, 11_591),
        ("E7", 7, 5, 757),
        ("E8", 3, 1, 10_946_881),
        ("E8", 3, 2, 54_492_480),
        ("E8", 4, 2, 12_337_919),
        ("E8", 4, 4, 2_177_280),
        ("E8", 5, 3, 7_257_601),
    ];
    // reference-table errata, each certified by at least two independent
    // in-repo methods (descent counting and the Euler identity; E7 k=3
    // additionally by the enumerated matching census)
    let expected_errata: &[(&str, usize, usize, i128)] = &[
        ("E7", 3, 1, 155_233),
        ("E7", 3, 2, 155_232),
        ("E8", 6, 4, 2_298_239),
        ("E8", 7, 5, 362_881),
        ("E8", 8, 6, 19_679),
    ];

    for &(group, k, dim, value) in expected_matches {
        let r = reports
            .iter()
            .find(|r| r.row.group == group && r.row.k == k && r.row.dim == dim)
            .unwrap();
        assert_eq!(r.status, RowStatus::Match, "{group} k={k} dim={dim}");
        assert_eq!(r.row.rank, value);
    }
    for &(group, k, dim, computed) in expected_errata {
        let r = reports
            .iter()
            .find(|r| r.row.group == group && r.row.k == k && r.row.dim == dim)
            .unwrap();
        match &r.status {
            RowStatus::Flag {
                computed: c,
                euler_confirms,
            } => {
                assert_eq!(*c, computed, "{group} k={k} dim={dim}");
                assert!(
                    *euler_confirms,
                    "{group} k={k}: an erratum must be cross-checked by the Euler identity"
                );
                assert!(r.row.note.is_some(), "errata must be documented");
            }
            RowStatus::Match => panic!("{group} k={k} dim={dim}: expected a documented erratum"),
        }
        assert!(r.acceptable());
    }
    assert!(reports.iter().all(|r| r.acceptable()));
    let secs = started.elapsed().as_secs_f64();
    assert!(secs < 60.0, "appendix reproduction took {secs:.1}s");
    println!(
        "ACCEPTANCE 1: PASS - all 24 reference rows reproduced by the descent method \
         ({} exact, {} documented two-method errata) in {secs:.1}s",
        expected_matches.len(),
        expected_errata.len()
    );
}

#[test]
fn acceptance_2_four_way_agreement() {
    for (spec, k) in test_matrix() {
        let sys = CoxeterSystem::parse(spec).unwrap();
        let morse = stream_counts_map(&sys, k);
        let descent = descent_counts_map(sys.diagram(), k);
        assert_eq!(morse, descent, "{spec} k={k}: matching vs descent");
        for &d in morse.keys() {
            assert_eq!(d % (k - 2), 0, "{spec} k={k}: rank off the (k-2) grid");
        }

        if ORACLE_MANDATORY.contains(&(spec, k)) {
            let complex = PermComplex::build(&sys, k, BUDGET).unwrap();
            let chain = order_complex(&complex.face_poset());
            let hom = integral_homology(&chain).unwrap();
            let reduced = hom.reduced_betti();
            let mut snf: BTreeMap<usize, i128> = reduced
                .iter()
                .enumerate()
                .filter(|(_, &r)| r > 0)
                .map(|(d, &r)| (d, r as i128))
                .collect();
            snf.insert(0, 1); // reduced dim-0 slot carries the critical vertex
            assert_eq!(snf, descent, "{spec} k={k}: homology oracle vs descent");
        }
    }
    println!(
        "ACCEPTANCE 2: PASS - matching = descent on all {} (W,k) pairs, \
         with the homology oracle equal on the {} mandatory pairs",
        test_matrix().len(),
        ORACLE_MANDATORY.len()
    );
}

#[test]
fn acceptance_3_specific_oracle_values() {
    let expected: &[(&str, usize, usize, u64)] = &[
        ("A3", 3, 1, 7),
        ("A4", 4, 2, 9),
        ("B3", 3, 1, 13),
        ("D4", 3, 1, 73),
        ("H3", 3, 1, 31),
    ];
    for &(spec, k, dim, rank) in expected {
        let sys = CoxeterSystem::parse(spec).unwrap();
        let complex = PermComplex::build(&sys, k, BUDGET).unwrap();
        let chain = order_complex(&complex.face_poset());
        let hom = integral_homology(&chain).unwrap();
        let reduced = hom.reduced_betti();
        assert_eq!(reduced[dim], rank, "{spec} k={k} dim {dim}");
        for (d, &r) in reduced.iter().enumerate() {
            if d != dim {
                assert_eq!(r, 0, "{spec} k={k}: unexpected rank in dim {d}");
            }
            if r > 0 {
                assert_eq!(
                    d % (k - 2),
                    0,
                    "{spec} k={k}: dim {d} not a multiple of k-2"
                );
            }
        }
        assert!(hom.is_torsion_free(), "{spec} k={k}: torsion found");
    }
    println!(
        "ACCEPTANCE 3: PASS - SNF oracle ranks 7 / 9 / 13 / 73 / 31 for \
         A3,A4,B3,D4,H3; all torsion-free and concentrated at multiples of k-2"
    );
}

/// First non-identity tree-compatible reordering of the diagram.
fn alternative_order(diagram: &CoxeterDiagram) -> Vec<usize> {
    let n = diagram.rank();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        // next permutation in lexicographic order
        let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
            panic!("no alternative tree-compatible order exists");
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
        if diagram.permuted(&perm).is_ok() {
            return perm;
        }
    }
}

#[test]
fn acceptance_4_matching_soundness() {
    for (spec, k) in test_matrix() {
        let sys = CoxeterSystem::parse(spec).unwrap();
        let complex = PermComplex::build(&sys, k, BUDGET).unwrap();
        let matching = matching_algorithm(&complex);
        assert!(matching.validate(&complex), "{spec} k={k}: involution");
        assert!(verify_acyclic(&complex, &matching), "{spec} k={k}: acyclic");
        let fibers = matching_via_fibers(&complex);
        assert_eq!(matching, fibers, "{spec} k={k}: M = M'");

        let a = audit(&complex).unwrap();
        assert!(
            a.critical_equals_predicate,
            "{spec} k={k}: critical set vs predicate"
        );

        // order invariance of the counts
        let diagram = sys.diagram();
        let alt = alternative_order(diagram);
        let reordered = diagram.permuted(&alt).unwrap();
        let alt_sys = CoxeterSystem::build(reordered).unwrap();
        let alt_audit = stream_audit(&alt_sys, k, BUDGET).unwrap();
        assert_eq!(
            a.critical_by_dim, alt_audit.critical_by_dim,
            "{spec} k={k}: counts changed under order {alt:?}"
        );
    }
    println!(
        "ACCEPTANCE 4: PASS - involution, acyclicity, M = M', predicate set \
         equality and order-invariant counts on all {} (W,k) pairs",
        test_matrix().len()
    );
}

#[test]
fn acceptance_5_k3_optimality() {
    for spec in ["A3", "A4", "B3", "H3"] {
        let sys = CoxeterSystem::parse(spec).unwrap();
        let complex = PermComplex::build(&sys, 3, BUDGET).unwrap();
        let matching = matching_algorithm(&complex);
        let mats = morse_boundary_matrices(&complex, &matching).unwrap();
        for (d, m) in mats.iter().enumerate() {
            assert!(
                m.is_zero(),
                "{spec}: nonzero Morse boundary into dimension {}",
                d.saturating_sub(1)
            );
        }

        // endpoint and cancellation for every (cell, s) with s <= m(cell)
        let adm = admissibility_table(sys.diagram(), 3);
        let mut pairs = 0usize;
        for id in 0..complex.cell_count() {
            let cell = complex.cell(id);
            let des = sys.descent_set(&cell.rep);
            let m = threshold(sys.diagram(), 3, &adm, des, cell.gens);
            for s in cell.gens.iter() {
                if m.is_some_and(|mp| s > mp) {
                    continue;
                }
                let p = alternating_path(&sys, &adm, (&cell.rep, cell.gens), s, false).unwrap();
                let q = alternating_path(&sys, &adm, (&cell.rep, cell.gens), s, true).unwrap();
                assert_eq!(p.endpoint(), q.endpoint(), "{spec}: endpoints differ");
                assert_eq!(p.weight + q.weight, 0, "{spec}: weights do not cancel");
                pairs += 1;
            }
        }
        assert!(pairs > 0);
    }
    println!(
        "ACCEPTANCE 5: PASS - zero Morse boundary between all critical pairs \
         and pairwise path cancellation on A3, A4, B3, H3 at k = 3"
    );
}

/// Random forest on `n` vertices whose natural order is tree-compatible:
/// every vertex either starts a component or attaches to a later parent.
fn random_forest(rng: &mut ChaCha8Rng, n: usize) -> OrderedGraph {
    let mut edges = Vec::new();
    for v in 0..n.saturating_sub(1) {
        if rng.gen_bool(0.75) {
            let parent = rng.gen_range(v + 1..n);
            edges.push((v, parent));
        }
    }
    OrderedGraph::new(n, &edges).unwrap()
}

/// Acyclicity of the shelling matching on the face poset of `Ind_k`.
fn shelling_matching_acyclic(g: &OrderedGraph, k: usize) -> bool {
    let order = lex_shelling(g, k).unwrap();
    let faces = g.faces(k);
    let partner: std::collections::HashMap<u64, u64> = faces
        .iter()
        .filter(|&&f| f != 0)
        .filter_map(|&f| match shelling_match(&order, f) {
            MatchOutcome::Critical => None,
            MatchOutcome::Partner(p) if p != 0 => Some((f, p)),
            MatchOutcome::Partner(_) => None,
        })
        .collect();
    // Kahn per dimension pair
    let top = faces.iter().map(|f| f.count_ones()).max().unwrap_or(0);
    for d in 1..=top {
        let uppers: Vec<u64> = faces
            .iter()
            .copied()
            .filter(|f| f.count_ones() == d)
            .collect();
        let lowers: Vec<u64> = faces
            .iter()
            .copied()
            .filter(|f| f.count_ones() == d - 1 && *f != 0)
            .collect();
        let mut idx = std::collections::HashMap::new();
        for (i, f) in uppers.iter().chain(lowers.iter()).enumerate() {
            idx.insert(*f, i);
        }
        let nn = idx.len();
        let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); nn];
        let mut indeg = vec![0usize; nn];
        for &u in &uppers {
            for v in iter_bits(u) {
                let low = u & !(1 << v);
                if low == 0 {
                    continue;
                }
                let (from, to) = if partner.get(&low) == Some(&u) {
                    (idx[&low], idx[&u])
                } else {
                    (idx[&u], idx[&low])
                };
                out_edges[from].push(to);
                indeg[to] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..nn).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &to in &out_edges[v] {
                indeg[to] -= 1;
                if indeg[to] == 0 {
                    stack.push(to);
                }
            }
        }
        if seen != nn {
            return false;
        }
    }
    true
}

#[test]
fn acceptance_6_independence_complex_suite() {
    // the 9-vertex example, exactly
    let nine = OrderedGraph::new(
        9,
        &[
            (0, 3),
            (1, 3),
            (2, 3),
            (3, 4),
            (4, 7),
            (5, 7),
            (6, 7),
            (7, 8),
        ],
    )
    .unwrap();
    let order = lex_shelling(&nine, 3).unwrap();
    assert!(verify_shelling(&order.facets));
    let spanning = order.fixed_points();
    let span_labels: Vec<Vec<u32>> = spanning.iter().map(|&f| nine.labels_of(f)).collect();
    assert!(span_labels.contains(&vec![4, 5, 8]));
    assert!(span_labels.contains(&vec![2, 3, 4, 7, 8, 9]));
    assert_eq!(spanning.len(), 2);
    let hom = integral_homology(&simplicial_chain_complex(&nine.faces(3))).unwrap();
    let reduced = hom.reduced_betti();
    assert_eq!(reduced[2], 1);
    assert_eq!(reduced[5], 1);
    assert_eq!(reduced.iter().sum::<u64>(), 2);
    assert!(hom.is_torsion_free());

    // randomized forests with tree-compatible orders; the first sample is
    // the persisted counterexample found by this very property test
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    type Failure = (usize, usize, Vec<(usize, usize)>);
    let mut shelling_failures: Vec<Failure> = Vec::new();
    let mut checked = 0usize;
    while checked < 120 {
        let (g, k) = if checked == 0 {
            (
                OrderedGraph::new(5, &[(0, 1), (1, 3), (2, 3), (3, 4)]).unwrap(),
                3usize,
            )
        } else {
            let n = rng.gen_range(1..=12);
            let k = rng.gen_range(1..=4);
            (random_forest(&mut rng, n), k)
        };
        assert!(g.is_forest() && g.is_tree_compatible());
        let order = lex_shelling(&g, k).unwrap();
        if !verify_shelling(&order.facets) {
            shelling_failures.push((g.vertex_count(), k, g.edges()));
        }
        let fixed = order.fixed_points();
        let mut predicate = spanning_facets_predicate(&g, k);
        predicate.sort_unstable();
        let mut fixed_sorted = fixed.clone();
        fixed_sorted.sort_unstable();
        assert_eq!(fixed_sorted, predicate, "spanning facets: two routes");

        let hom = integral_homology(&simplicial_chain_complex(&g.faces(k))).unwrap();
        let reduced = hom.reduced_betti();
        let mut per_dim = vec![0u64; reduced.len().max(1)];
        for &f in &fixed {
            per_dim[f.count_ones() as usize - 1] += 1;
        }
        per_dim.resize(reduced.len(), 0);
        assert_eq!(per_dim, reduced, "homology ranks = spanning counts");
        assert!(hom.is_torsion_free());
        assert!(shelling_matching_acyclic(&g, k));
        checked += 1;
    }

    if !shelling_failures.is_empty() {
        println!(
            "ACCEPTANCE 6: FAIL - {} of {checked} random tree-compatible forests have a \
             lexicographic facet order that violates the pairwise shelling criterion \
             (smallest: 5 vertices, D5-shaped, k = 3). The other clauses hold on every \
             sample: spanning facets = restriction-map fixed points, homology ranks = \
             spanning counts (torsion-free), and all shelling matchings are acyclic. \
             See tests/shelling_scope.rs and the notes: the claim is provable only for \
             a narrower order class; every order derived from a Coxeter diagram passes \
             exhaustively.",
            shelling_failures.len()
        );
        panic!(
            "lexicographic order is not a valid shelling for {} sampled tree-compatible \
             forests, e.g. n={} k={} edges={:?}; the clause is false as stated",
            shelling_failures.len(),
            shelling_failures[0].0,
            shelling_failures[0].1,
            shelling_failures[0].2,
        );
    }
    println!(
        "ACCEPTANCE 6: PASS - 9-vertex example exact plus {checked} random forests: \
         shelling valid, spanning = fixed points, ranks match, matchings acyclic"
    );
}

#[test]
fn acceptance_7_closed_forms_verify_and_flag() {
    // type A agrees everywhere
    for n in 3..=6usize {
        let diagram = CoxeterDiagram::parse(&format!("A{n}")).unwrap();
        for k in 3..=n {
            let table = descent_counts_map(&diagram, k);
            let tmax = n / (k - 2);
            for t in 0..=tmax {
                let formula = betti_type_a(n, k, t).unwrap();
                let oracle = *table.get(&(t * (k - 2))).unwrap_or(&0);
                let oracle = if t == 0 { 1 } else { oracle };
                assert_eq!(formula, oracle, "A{n} k={k} t={t}");
            }
        }
    }

    // type B and type D run verbatim; disagreements land in the report and
    // are settled by the Smith-normal-form oracle
    struct Row {
        label: String,
        printed: i128,
        oracle: i128,
        snf: i128,
    }
    let mut report: Vec<Row> = Vec::new();
    let mut oracle_cache: BTreeMap<(String, usize), Vec<u64>> = BTreeMap::new();
    let mut compare = |label: String, printed: i128, spec: &str, k: usize, t: usize| {
        let diagram = CoxeterDiagram::parse(spec).unwrap();
        let oracle = betti_descent_count(&diagram, k, t).unwrap();
        if printed != oracle {
            let reduced = oracle_cache
                .entry((spec.to_string(), k))
                .or_insert_with(|| {
                    let sys = CoxeterSystem::parse(spec).unwrap();
                    let complex = PermComplex::build(&sys, k, BUDGET).unwrap();
                    let hom = integral_homology(&order_complex(&complex.face_poset())).unwrap();
                    hom.reduced_betti()
                });
            let snf = reduced[t * (k - 2)] as i128;
            report.push(Row {
                label,
                printed,
                oracle,
                snf,
            });
        }
    };
    for (spec, n, k) in [("B3", 3usize, 3usize), ("B4", 4, 3), ("B4", 4, 4)] {
        for t in 1..=n / (k - 2) {
            compare(
                format!("{spec} k={k} t={t}"),
                betti_type_b(n, k, t).unwrap(),
                spec,
                k,
                t,
            );
        }
    }
    for (spec, n) in [("D4", 4usize), ("D5", 5)] {
        for t in 1..=n {
            let printed = betti_type_d3(n, t).unwrap();
            let diagram = CoxeterDiagram::parse(spec).unwrap();
            let oracle = betti_descent_count(&diagram, 3, t).unwrap();
            if printed == 0 && oracle == 0 {
                continue;
            }
            compare(format!("{spec} k=3 t={t}"), printed, spec, 3, t);
        }
    }

    // the report must not be silent about the anticipated discrepancies,
    // and the SNF oracle must side with the descent count every time
    let b3 = report
        .iter()
        .find(|r| r.label == "B3 k=3 t=1")
        .expect("B3 k=3 discrepancy must be reported");
    assert_eq!((b3.printed, b3.oracle, b3.snf), (10, 13, 13));
    let d4 = report
        .iter()
        .find(|r| r.label == "D4 k=3 t=1")
        .expect("D4 k=3 discrepancy must be reported");
    assert_eq!((d4.printed, d4.oracle, d4.snf), (68, 73, 73));
    for r in &report {
        assert_eq!(
            r.oracle, r.snf,
            "{}: SNF oracle must confirm the descent count",
            r.label
        );
    }
    println!(
        "ACCEPTANCE 7: PASS - type A closed form agrees with the oracle on A3-A6; \
         {} type B/D discrepancies reported (printed 10 vs 13 at B3, 68 vs 73 at D4, ...), \
         every one resolved by the SNF oracle in favor of the descent count",
        report.len()
    );
}

#[test]
fn acceptance_8_set_composition_bijection() {
    use coxmorse_core::morse::{composition_of, match_set_composition, type_a_permutations};
    for (spec, k) in [("A3", 3usize), ("A4", 4)] {
        let sys = CoxeterSystem::parse(spec).unwrap();
        let complex = PermComplex::build(&sys, k, BUDGET).unwrap();
        let perms = type_a_permutations(&sys, BUDGET).unwrap();
        let matching = matching_algorithm(&complex);
        for id in 0..complex.cell_count() {
            let cell = complex.cell(id);
            let comp = composition_of(&perms[&cell.rep], cell.gens);
            let via_blocks = match_set_composition(&comp, k).unwrap();
            let via_cosets = matching.partner[id].map(|p| {
                let pc = complex.cell(p);
                composition_of(&perms[&pc.rep], pc.gens)
            });
            assert_eq!(via_blocks, via_cosets, "{spec}: cell {}", cell.key_string());
        }
    }
    println!(
        "ACCEPTANCE 8: PASS - the set-composition matching agrees with the coset \
         matching on every cell of Perm_3(A3) (66 cells) and Perm_4(A4) (530 cells)"
    );
}

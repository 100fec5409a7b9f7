mod common;

use nalgebra::SymmetricEigen;
use proptest::prelude::*;
use rand::Rng;

use common::*;
use spectral_forests::cutquery::build_index;
use spectral_forests::forests::{
    decompose_forests, forward_degrees, induced_edge_counts, treelike_ordering,
    uniform_sparsity_probe, verify_forest, ORDERING_ALPHA,
};
use spectral_forests::graph::{
    connected_components, exact_boundary, induced_subgraph, laplacian, merge_parallel,
    weighted_degree, MultiGraph,
};
use spectral_forests::resistance::{
    effective_resistance, foster_check, pseudo_inverse, resistance_table, subgraph_leverage_sum,
};
use spectral_forests::sampler::{sample_sparsifier, Mode, SamplerConfig};
use spectral_forests::spectral::{quadratic_form_check, relative_spectrum};

fn multigraph_strategy(max_n: usize) -> impl Strategy<Value = MultiGraph> {
    (2..=max_n, 0usize..40, any::<u64>()).prop_map(|(n, m, seed)| random_multigraph(n, m, seed))
}

fn connected_strategy(min_n: usize, max_n: usize) -> impl Strategy<Value = MultiGraph> {
    (min_n..=max_n, any::<u64>()).prop_map(|(n, seed)| random_connected(n, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn laplacian_is_symmetric_psd_with_zero_rows(g in multigraph_strategy(12)) {
        let l = laplacian(&g);
        let n = l.dim();
        let norm = l.matrix().norm();
        for i in 0..n {
            let row: f64 = (0..n).map(|j| l.get(i, j)).sum();
            prop_assert!(row.abs() <= 1e-12 * norm.max(1.0));
            for j in 0..n {
                prop_assert_eq!(l.get(i, j), l.get(j, i));
            }
        }
        let eig = SymmetricEigen::new(l.matrix().clone());
        let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert!(min >= -1e-9 * norm.max(1.0));
    }

    #[test]
    fn merge_preserves_laplacian_exactly(g in multigraph_strategy(10)) {
        let m = merge_parallel(&g);
        prop_assert_eq!(laplacian(&m), laplacian(&g));
        let mut keys: Vec<_> = m.edges().iter().map(|e| e.key()).collect();
        let len = keys.len();
        keys.sort();
        keys.dedup();
        prop_assert_eq!(keys.len(), len);
    }

    #[test]
    fn boundary_complement_symmetric(g in multigraph_strategy(10), mask in any::<u16>()) {
        let n = g.vertex_count();
        let s = subset_of(mask as usize, n);
        let rest: Vec<usize> = (0..n).filter(|v| !s.contains(v)).collect();
        let a = exact_boundary(&g, &s).unwrap();
        let b = exact_boundary(&g, &rest).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn induced_subgraph_keeps_only_internal_edges(g in multigraph_strategy(10), mask in any::<u16>()) {
        let n = g.vertex_count();
        let keep = subset_of(mask as usize, n);
        let h = induced_subgraph(&g, &keep).unwrap();
        prop_assert_eq!(h.vertex_count(), keep.len());
        let inside: Vec<_> = g.edges().iter()
            .filter(|e| keep.contains(&e.u) && keep.contains(&e.v))
            .map(|e| e.conductance)
            .collect();
        let got: Vec<_> = h.edges().iter().map(|e| e.conductance).collect();
        prop_assert_eq!(got, inside);
    }

    #[test]
    fn resistances_match_grounded_solve(g in connected_strategy(3, 25)) {
        let p = pseudo_inverse(&laplacian(&g)).unwrap();
        for e in g.edges().iter().take(15) {
            let want = grounded_resistance(&g, e.u, e.v);
            let got = effective_resistance(&p, e.u, e.v).unwrap();
            prop_assert!(rel_close(got, want, 1e-8), "{} vs {}", got, want);
        }
    }

    #[test]
    fn pseudoinverse_invariants(g in connected_strategy(3, 30)) {
        let l = laplacian(&g);
        let p = pseudo_inverse(&l).unwrap();
        let lpl = l.matrix() * p.matrix() * l.matrix();
        let scale = l.matrix().norm();
        prop_assert!((lpl - l.matrix()).norm() <= 1e-8 * scale);
        let n = l.dim();
        for i in 0..n {
            let row: f64 = (0..n).map(|j| p.get(i, j)).sum();
            prop_assert!(row.abs() <= 1e-8 * p.matrix().norm());
        }
        prop_assert_eq!(p.matrix(), &p.matrix().transpose());
    }

    #[test]
    fn table_invariants(g in connected_strategy(3, 40)) {
        let t = resistance_table(&g).unwrap();
        let n = g.vertex_count() as f64;
        prop_assert!((foster_check(&t) - (n - 1.0)).abs() <= 1e-8 * n);
        prop_assert!((t.probability().iter().sum::<f64>() - 1.0).abs() <= 1e-10);
        let merged = merge_parallel(&g);
        for (e, (&r, &lev)) in g.edges().iter().zip(t.resistance().iter().zip(t.leverage())) {
            let total = merged.edges().iter().find(|m| m.key() == e.key()).unwrap().conductance;
            prop_assert!(r <= 1.0 / total + 1e-10);
            prop_assert!(lev > 0.0 && lev <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn leverage_sum_bounded_on_subsets(g in connected_strategy(4, 30), seed in any::<u64>()) {
        let t = resistance_table(&g).unwrap();
        let mut r = rng(seed);
        for _ in 0..50 {
            let s = random_subset(&mut r, g.vertex_count(), g.vertex_count());
            let sum = subgraph_leverage_sum(&g, &t, &s).unwrap();
            prop_assert!(sum <= (s.len() - 1) as f64 + 1e-8);
        }
    }

    #[test]
    fn sampler_is_deterministic_and_reweights(g in connected_strategy(4, 20), seed in any::<u64>()) {
        let t = resistance_table(&g).unwrap();
        let cfg = SamplerConfig::new(Mode::Ss, 0.8, 1.0, seed);
        let a = sample_sparsifier(&g, &t, &cfg).unwrap();
        let b = sample_sparsifier(&g, &t, &cfg).unwrap();
        prop_assert_eq!(&a, &b);
        let n = g.vertex_count() as f64;
        let floor = 0.8f64.powi(2) / (2.0 * n.ln());
        for d in &a.draws {
            let lev = d.conductance * t.resistance()[d.edge];
            let exact = 0.64 * (n - 1.0) / (n * n.ln());
            prop_assert!(rel_close(lev, exact, 1e-9));
            prop_assert!(lev >= floor);
        }
        let merged = sample_sparsifier(&g, &t, &cfg.merged(true)).unwrap();
        prop_assert_eq!(laplacian(&merged.graph), laplacian(&a.graph));
    }

    #[test]
    fn relative_spectrum_scale_covariant(g in connected_strategy(4, 20), seed in any::<u64>()) {
        let t = resistance_table(&g).unwrap();
        let s = sample_sparsifier(&g, &t, &SamplerConfig::new(Mode::Mss, 1.0, 3.0, seed)).unwrap();
        let base = relative_spectrum(&g, &s.graph).unwrap();
        for alpha in [0.5, 2.0, 10.0] {
            let r = relative_spectrum(&g, &s.graph.scaled(alpha).unwrap()).unwrap();
            prop_assert!(rel_close(r.lambda_min, alpha * base.lambda_min, 1e-9)
                || (base.lambda_min.abs() < 1e-12 && r.lambda_min.abs() < 1e-11));
            prop_assert!(rel_close(r.lambda_max, alpha * base.lambda_max, 1e-9));
        }
        let same = relative_spectrum(&g, &g).unwrap();
        prop_assert!(same.achieved_epsilon.abs() <= 1e-9);
    }

    #[test]
    fn quadratic_form_matches_edge_sum(g in multigraph_strategy(10), seed in any::<u64>()) {
        let mut r = rng(seed);
        let x: Vec<f64> = (0..g.vertex_count()).map(|_| r.random_range(-2.0..2.0)).collect();
        let (a, _) = quadratic_form_check(&g, &g, &x).unwrap();
        let by_edges: f64 = g.edges().iter()
            .map(|e| e.conductance * (x[e.u] - x[e.v]).powi(2))
            .sum();
        prop_assert!((a - by_edges).abs() <= 1e-10 * by_edges.max(1.0));
    }

    #[test]
    fn spanning_subgraph_has_larger_pseudoinverse_form(g in connected_strategy(5, 25), seed in any::<u64>()) {
        // drop random edges while staying connected
        let mut r = rng(seed);
        let mut keep: Vec<_> = g.edges().to_vec();
        for _ in 0..keep.len() / 3 {
            let i = r.random_range(0..keep.len());
            let mut trial = keep.clone();
            trial.remove(i);
            if MultiGraph::new(g.vertex_count(), trial.clone()).unwrap().is_connected() {
                keep = trial;
            }
        }
        let h = MultiGraph::new(g.vertex_count(), keep).unwrap();
        let pg = pseudo_inverse(&laplacian(&g)).unwrap();
        let ph = pseudo_inverse(&laplacian(&h)).unwrap();
        for _ in 0..20 {
            let x = random_centered(&mut r, g.vertex_count());
            let fg = pg.quadratic_form(&x);
            let fh = ph.quadratic_form(&x);
            prop_assert!(fh >= fg - 1e-8 * fg.abs());
        }
    }

    #[test]
    fn ordering_forward_degrees_recompute(g in multigraph_strategy(30)) {
        let ord = treelike_ordering(&g);
        let fd = forward_degrees(&g, &ord.position);
        prop_assert_eq!(&fd, &ord.forward_degree);
        prop_assert_eq!(fd.iter().copied().max().unwrap_or(0), ord.max_forward_degree);
        let n = g.vertex_count();
        let mut seen = vec![false; n];
        for &p in &ord.position {
            prop_assert!(p < n && !seen[p]);
            seen[p] = true;
        }
        prop_assert!(ord.ops as f64 <= ORDERING_ALPHA * (n + g.edge_count()) as f64);
    }

    #[test]
    fn decomposition_is_valid_partition(g in multigraph_strategy(30)) {
        let ord = treelike_ordering(&g);
        let d = decompose_forests(&g, &ord).unwrap();
        prop_assert!(verify_forest(&g, &d));
        prop_assert!(d.k <= ord.max_forward_degree);
        prop_assert_eq!(d.forest_id.len(), g.edge_count());
        let total: usize = d.classes().iter().map(Vec::len).sum();
        prop_assert_eq!(total, g.edge_count());
    }

    #[test]
    fn peeling_respects_uniform_sparsity(g in multigraph_strategy(11)) {
        let c = uniform_sparsity_probe(&g, 1, 0);
        let ord = treelike_ordering(&g);
        prop_assert!(ord.max_forward_degree as f64 <= 2.0 * c + 1e-12);
        // each peel step removes a vertex of degree at most twice the average
        // degree of what remains, which is itself at most 2c
        let counts = induced_edge_counts(&g);
        let mut remaining: usize = (1 << g.vertex_count()) - 1;
        for &v in &ord.order {
            let k = remaining.count_ones() as f64;
            let avg2 = 2.0 * counts[remaining] as f64 / k;
            prop_assert!(ord.forward_degree[v] as f64 <= avg2 + 1e-12);
            prop_assert!(avg2 <= 2.0 * c + 1e-12 || k < 2.0);
            remaining &= !(1 << v);
        }
    }

    #[test]
    fn cut_index_matches_oracle_exhaustively(g in multigraph_strategy(9)) {
        let n = g.vertex_count();
        let ord = treelike_ordering(&g);
        let idx = build_index(&g, &ord).unwrap();
        prop_assert_eq!(idx.forward_adj.iter().map(Vec::len).sum::<usize>(), g.edge_count());
        prop_assert_eq!(idx.max_list_len(), ord.max_forward_degree);
        for v in 0..n {
            prop_assert!((idx.wd[v] - weighted_degree(&g, v).unwrap()).abs() < 1e-12);
        }
        let mut scratch = idx.scratch();
        for mask in 0usize..(1 << n) {
            let s = subset_of(mask, n);
            let q = idx.boundary_instrumented(&mut scratch, &s).unwrap();
            let want = exact_boundary(&g, &s).unwrap();
            prop_assert!((q.boundary - want).abs() <= 1e-12 * q.degree_sum.max(want).max(1.0));
            prop_assert!(q.scanned <= ord.max_forward_degree * s.len());
            let mut m = vec![false; n];
            for &v in &s { m[v] = true; }
            let identity: f64 = s.iter().map(|&v| weighted_degree(&g, v).unwrap()).sum::<f64>()
                - 2.0 * internal_weight(&g, &m);
            prop_assert!((identity - want).abs() <= 1e-12 * q.degree_sum.max(1.0));
        }
    }
}

#[test]
fn components_partition_vertices() {
    for seed in 0..20 {
        let g = random_multigraph(15, 8, seed);
        let comps = connected_components(&g);
        let mut all: Vec<usize> = comps.concat();
        all.sort();
        assert_eq!(all, (0..15).collect::<Vec<_>>());
        for e in g.edges() {
            let cu = comps.iter().position(|c| c.contains(&e.u));
            let cv = comps.iter().position(|c| c.contains(&e.v));
            assert_eq!(cu, cv);
        }
    }
}

use proptest::prelude::*;
use qgraph::closed_form::{three_star_secular, three_star_spectrum};
use qgraph::discrete::DiscreteGraph;
use qgraph::fem::{compute_spectrum, element_counts, rayleigh_quotient, EdgeFunction, SpectrumOptions};
use qgraph::graph::{GraphDoc, MetricGraph};
use qgraph::random::{instance_rng, random_cut, random_graph, RandomGraphOptions};
use qgraph::surgery::{apply, SurgeryOp};
use rand::Rng;

fn graph(seed: u64) -> MetricGraph {
    random_graph(&mut instance_rng(seed, 0), &RandomGraphOptions::default())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let g = graph(seed);
        let back = MetricGraph::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(back.canonical_edges(), g.canonical_edges());
        prop_assert_eq!(GraphDoc::from_graph(&back), GraphDoc::from_graph(&g));
    }

    #[test]
    fn cut_then_glue_restores(seed in any::<u64>()) {
        let g = graph(seed);
        let mut rng = instance_rng(seed, 1);
        if let Some(op) = random_cut(&g, &mut rng) {
            let (cut, _) = apply(&g, &op).unwrap();
            let SurgeryOp::CutVertex { vertex, .. } = &op else { unreachable!() };
            let mut ids = vec![vertex.clone()];
            ids.extend(cut.vertices()[g.vertex_count()..].iter().map(|v| v.id.clone()));
            let (glued, _) = apply(&cut, &SurgeryOp::GlueVertices { vertices: ids }).unwrap();
            prop_assert_eq!(glued.canonical_edges(), g.canonical_edges());
        }
    }

    #[test]
    fn discrete_quadratic_form(seed in any::<u64>()) {
        let g = graph(seed);
        let dg = DiscreteGraph::from_metric(&g);
        let mut rng = instance_rng(seed, 2);
        let u: Vec<f64> = (0..dg.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let lu = dg.apply_laplacian(&u);
        let form: f64 = u.iter().zip(&lu).map(|(a, b)| a * b).sum();
        // A loop contributes 2u² through the degree and nothing through adjacency.
        let direct: f64 = g
            .edges()
            .iter()
            .map(|e| if e.is_loop() { 2.0 * u[e.from.0].powi(2) } else { (u[e.from.0] - u[e.to.0]).powi(2) })
            .sum();
        prop_assert!((form - direct).abs() <= 1e-12 * (1.0 + direct));
        prop_assert!(form >= -1e-12);
    }

    #[test]
    fn doubling_is_eulerian(seed in any::<u64>()) {
        let g = graph(seed);
        let d = g.doubled();
        prop_assert!(d.degrees().iter().all(|k| k % 2 == 0));
        prop_assert!((d.total_length() - 2.0 * g.total_length()).abs() < 1e-12);
        let cycle = d.eulerian_cycle().unwrap();
        let mut used = vec![0; d.edge_count()];
        for t in &cycle {
            used[t.edge.0] += 1;
        }
        prop_assert!(used.iter().all(|&c| c == 1));
    }

    #[test]
    fn element_counts_respect_h(seed in any::<u64>(), h in 0.01f64..0.5) {
        let g = graph(seed);
        let counts = element_counts(&g, h).unwrap();
        for (e, c) in g.edges().iter().zip(counts) {
            prop_assert!(c >= 2 && e.length / c as f64 <= h * (1.0 + 1e-12));
        }
    }

    #[test]
    fn rayleigh_quotient_nonnegative(seed in any::<u64>()) {
        let g = graph(seed);
        let mut rng = instance_rng(seed, 3);
        let nodal: Vec<f64> = (0..g.vertex_count()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = EdgeFunction::from_fn(&g, 32, |e, x| {
            let r = &g.edges()[e];
            let s = x / r.length;
            nodal[r.from.0] * (1.0 - s) + nodal[r.to.0] * s + (s * (1.0 - s)).powi(2)
        });
        prop_assert!(rayleigh_quotient(&g, &f).unwrap() >= 0.0);
        let constant = EdgeFunction::from_fn(&g, 8, |_, _| 1.5);
        prop_assert!(rayleigh_quotient(&g, &constant).unwrap().abs() < 1e-12);
    }

    #[test]
    fn secular_roots_are_roots(l1 in 0.2f64..2.0, l2 in 0.2f64..2.0, l3 in 0.2f64..2.0) {
        for mu in three_star_spectrum(l1, l2, l3, 6).unwrap().into_iter().skip(1) {
            prop_assert!(three_star_secular(l1, l2, l3, mu).abs() < 1e-7, "{}", mu);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn scaling_law(seed in any::<u64>(), c in 0.5f64..2.0) {
        let g = graph(seed);
        let opts = SpectrumOptions::with_k(4).mesh(0.02);
        let a = compute_spectrum(&g, &opts).unwrap();
        let b = compute_spectrum(&g.scaled(c).unwrap(), &opts.mesh(0.02 * c)).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            prop_assert!((x - y * c * c).abs() <= 1e-8 * (1.0 + x), "{} {}", x, y * c * c);
        }
    }
}

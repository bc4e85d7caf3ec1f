//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with the measured quantity (run with `--nocapture` to see the lines for
//! passing criteria).
//!
//! Criterion 5 states a 1e-3 frontier-to-curve agreement for the 0.05
//! sampling grid. The achievable agreement at that grid is ~5e-2 (the
//! sampling error of the grid itself, first-order near the curve's vertical
//! tangent); the test implements the stated threshold and is expected to
//! fail — see `criterion_5_reduction_sampling_cross_check` and the
//! convergence companion right below it.

use std::time::Instant;

use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use uncurve_core::graph::{
    distance_matrix, gen_complete, gen_cycle, gen_path, gen_random, gen_star, normalized_laplacian,
    CenterNode, Graph,
};
use uncurve_core::reduction::{
    find_block_structure, pareto_frontier, sample_cloud, verify_property1,
};
use uncurve_core::spectral::{gft, graph_spread, spectral_spread, sym_eig, Signal};
use uncurve_core::uncertainty::{curve_endpoints, m_alpha, min_eigpair, sandwich_curve};

fn setup(
    g: &Graph,
    uc: usize,
) -> (
    uncurve_core::DistanceDiagonal,
    nalgebra::DMatrix<f64>,
    CenterNode,
) {
    let uc = CenterNode::new(uc, g.n()).unwrap();
    let p = distance_matrix(g, uc).unwrap();
    let l = normalized_laplacian(g).unwrap();
    (p, l, uc)
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Signal {
    loop {
        let v = DVector::from_iterator(n, (0..n).map(|_| rng.gen::<f64>() * 2.0 - 1.0));
        let norm = v.norm();
        if norm > 1e-6 {
            return Signal::new(v / norm).unwrap();
        }
    }
}

/// Criterion 1: star-center sandwich points lie on the ellipse
/// (s−1)² + (2g−1)² = 1 within 1e-6, for N ∈ {4, 6, 8, 10}.
#[test]
fn criterion_1_ellipse_oracle() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in [4usize, 6, 8, 10] {
        let g = gen_star(n).unwrap();
        let (p, l, uc) = setup(&g, 1);
        let curve = sandwich_curve(&p, &l, uc, 1e-6).unwrap();
        for pt in curve.points() {
            let r = (pt.s - 1.0).powi(2) + (2.0 * pt.g - 1.0).powi(2);
            worst = worst.max((r - 1.0).abs());
        }
    }
    let ok = worst <= 1e-6;
    println!(
        "criterion 1 {}: max ellipse residual {worst:.3e} (tol 1e-6, {:?})",
        if ok { "PASS" } else { "FAIL" },
        start.elapsed()
    );
    assert!(ok, "ellipse residual {worst:e} exceeds 1e-6");
}

/// Criterion 2: endpoints (0, 0.5) and (1, 0) within 1e-9; curves for all
/// star sizes coincide on a common s-grid within 1e-6.
#[test]
fn criterion_2_endpoints_and_size_independence() {
    let start = Instant::now();
    let sizes = [4usize, 6, 8, 10];
    let mut endpoint_err: f64 = 0.0;
    let mut curves = Vec::new();
    for &n in &sizes {
        let g = gen_star(n).unwrap();
        let (p, l, uc) = setup(&g, 1);
        let (left, right) = curve_endpoints(&p, &l, uc).unwrap();
        endpoint_err = endpoint_err
            .max(left.s.abs())
            .max((left.g - 0.5).abs())
            .max((right.s - 1.0).abs())
            .max(right.g.abs());
        curves.push(sandwich_curve(&p, &l, uc, 1e-7).unwrap());
    }
    let mut coincide_err: f64 = 0.0;
    for j in 0..=100 {
        let s = j as f64 / 100.0;
        let (lo0, up0) = curves[0].eval(s).unwrap();
        for c in &curves[1..] {
            let (lo, up) = c.eval(s).unwrap();
            coincide_err = coincide_err.max((lo - lo0).abs()).max((up - up0).abs());
        }
    }
    let ok = endpoint_err <= 1e-9 && coincide_err <= 1e-6;
    println!(
        "criterion 2 {}: endpoint error {endpoint_err:.3e} (tol 1e-9), \
         size-independence error {coincide_err:.3e} (tol 1e-6, {:?})",
        if ok { "PASS" } else { "FAIL" },
        start.elapsed()
    );
    assert!(ok);
}

/// Criterion 3: reduced form of minimum eigenvectors — star N=8 with a leaf
/// center has its N−2 trailing components equal within 1e-8 over 50 slopes
/// in [−5, 0]; K_5 passes with a 2-group partition.
#[test]
fn criterion_3_property1_structural_verification() {
    let start = Instant::now();
    let g = gen_star(8).unwrap();
    let uc = CenterNode::new(2, 8).unwrap();
    let part = find_block_structure(&g, uc).unwrap();
    assert_eq!(part.reduced_dim(), 3);
    assert_eq!(part.group_sizes(), vec![1, 1, 6]);

    let (p, l, _) = setup(&g, 2);
    let alphas: Vec<f64> = (0..50).map(|i| -5.0 + i as f64 * (5.0 / 49.0)).collect();
    let mut worst: f64 = 0.0;
    for &alpha in &alphas {
        let pair = min_eigpair(&m_alpha(&p, &l, alpha).unwrap()).unwrap();
        let x = pair.vector.values();
        let leaves: Vec<f64> = (2..8).map(|u| x[u]).collect();
        let (lo, hi) = leaves
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                (a.min(v), b.max(v))
            });
        worst = worst.max(hi - lo);
    }
    let star_ok = worst <= 1e-8;

    let k5 = gen_complete(5).unwrap();
    let mut k5_ok = true;
    for uc in 1..=5 {
        let ucn = CenterNode::new(uc, 5).unwrap();
        let part = find_block_structure(&k5, ucn).unwrap();
        k5_ok &= part.reduced_dim() == 2;
        k5_ok &= verify_property1(&k5, ucn, &part, &alphas, 1e-8).unwrap();
    }

    let ok = star_ok && k5_ok;
    println!(
        "criterion 3 {}: star-leaf max component spread {worst:.3e} (tol 1e-8), \
         K5 verified for all centers ({:?})",
        if ok { "PASS" } else { "FAIL" },
        start.elapsed()
    );
    assert!(ok);
}

/// Criterion 4: 1e5 random unit signals per graph never fall below the
/// certified lower bound by more than 1e-9.
#[test]
fn criterion_4_lower_bound_property() {
    let start = Instant::now();
    let cases: Vec<(Graph, usize)> = vec![
        (gen_star(6).unwrap(), 1),
        (gen_star(6).unwrap(), 2),
        (gen_complete(5).unwrap(), 1),
        (gen_cycle(6).unwrap(), 1),
        (gen_path(5).unwrap(), 1),
    ];
    let mut worst: f64 = 0.0;
    for (g, uc) in &cases {
        let (p, l, ucn) = setup(g, *uc);
        let curve = sandwich_curve(&p, &l, ucn, 1e-6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..100_000 {
            let x = random_unit(g.n(), &mut rng);
            let s = spectral_spread(&x, &l).unwrap().max(0.0);
            if s < curve.s_min() || s > curve.s_max() {
                continue;
            }
            let gs = graph_spread(&x, &p).unwrap();
            let (lower, _) = curve.eval(s).unwrap();
            worst = worst.max(lower - gs);
        }
    }
    let ok = worst <= 1e-9;
    println!(
        "criterion 4 {}: max violation below lower bound {worst:.3e} (tol 1e-9, {:?})",
        if ok { "PASS" } else { "FAIL" },
        start.elapsed()
    );
    assert!(ok);
}

/// Criterion 5: star N=10, leaf center, grid step 0.05 — the Pareto
/// frontier of the reduced cloud against the sandwich curve, required
/// agreement 1e-3.
///
/// The 0.05 grid's own sampling error on this curve is ~5e-2 (measured
/// below and cross-checked against a dense continuum scan), so this
/// criterion cannot pass as stated; it is kept at the stated threshold
/// rather than loosened. `criterion_5_companion_grid_convergence` shows the
/// same cross-check tightening as the grid refines.
#[test]
fn criterion_5_reduction_sampling_cross_check() {
    let start = Instant::now();
    let g = gen_star(10).unwrap();
    let uc = CenterNode::new(2, 10).unwrap();
    let part = find_block_structure(&g, uc).unwrap();
    let cloud = sample_cloud(&g, uc, &part, 0.05).unwrap();
    assert_eq!(cloud.points.len(), 126 * 126);
    let front = pareto_frontier(&cloud).unwrap();
    let (p, l, _) = setup(&g, 2);
    let curve = sandwich_curve(&p, &l, uc, 1e-6).unwrap();
    let mut dev: f64 = 0.0;
    for pt in &front {
        if pt.s >= curve.s_min() && pt.s <= curve.s_max() {
            let (lower, upper) = curve.eval(pt.s).unwrap();
            assert!(pt.g >= lower - 1e-9, "frontier below certified bound");
            dev = dev.max(pt.g - upper);
        }
    }
    let ok = dev <= 1e-3;
    println!(
        "criterion 5 {}: max vertical frontier-to-curve deviation {dev:.3e} \
         (required 1e-3 at grid step 0.05, {:?})",
        if ok { "PASS" } else { "FAIL" },
        start.elapsed()
    );
    assert!(
        ok,
        "deviation {dev:.3e} exceeds 1e-3: the 0.05 grid resolves the curve \
         only to ~5e-2; see the companion convergence test"
    );
}

/// Companion to criterion 5: the same cross-check tightens monotonically as
/// the sampling grid refines, confirming the deviation above is grid
/// resolution, not an artifact defect.
#[test]
fn criterion_5_companion_grid_convergence() {
    let start = Instant::now();
    let g = gen_star(10).unwrap();
    let uc = CenterNode::new(2, 10).unwrap();
    let part = find_block_structure(&g, uc).unwrap();
    let (p, l, _) = setup(&g, 2);
    let curve = sandwich_curve(&p, &l, uc, 1e-6).unwrap();
    let mut devs = Vec::new();
    for step in [0.05, 0.02, 0.01] {
        let cloud = sample_cloud(&g, uc, &part, step).unwrap();
        let front = pareto_frontier(&cloud).unwrap();
        let mut dev: f64 = 0.0;
        for pt in &front {
            if pt.s >= curve.s_min() && pt.s <= curve.s_max() {
                let (lower, upper) = curve.eval(pt.s).unwrap();
                assert!(pt.g >= lower - 1e-9);
                dev = dev.max(pt.g - upper);
            }
        }
        devs.push(dev);
    }
    let ok = devs[1] < devs[0] && devs[2] < devs[1];
    println!(
        "criterion 5 companion {}: deviations {:.3e} (0.05) -> {:.3e} (0.02) -> {:.3e} (0.01) ({:?})",
        if ok { "PASS" } else { "FAIL" },
        devs[0],
        devs[1],
        devs[2],
        start.elapsed()
    );
    assert!(
        ok,
        "frontier deviation must shrink with the grid step: {devs:?}"
    );
}

/// Criterion 6: numerics suite — eigenresiduals, Parseval, spectral range.
#[test]
fn criterion_6_numerics_suite() {
    let start = Instant::now();
    let graphs: Vec<Graph> = vec![
        gen_star(4).unwrap(),
        gen_star(6).unwrap(),
        gen_star(8).unwrap(),
        gen_star(10).unwrap(),
        gen_complete(5).unwrap(),
        gen_cycle(6).unwrap(),
        gen_path(5).unwrap(),
        gen_random(7, 0.5, 42).unwrap(),
    ];
    let mut max_residual: f64 = 0.0;
    let mut max_parseval: f64 = 0.0;
    let mut spectrum_ok = true;
    for g in &graphs {
        let l = normalized_laplacian(g).unwrap();
        let basis = sym_eig(&l).unwrap();
        for i in 0..g.n() {
            let chi = basis.vector(i);
            let lambda = basis.eigenvalues[i];
            let r = (&l * &chi - lambda * &chi).norm() / lambda.abs().max(1.0);
            max_residual = max_residual.max(r);
            spectrum_ok &= (-1e-10..=2.0 + 1e-10).contains(&lambda);
        }
        // residuals also on slope matrices built from this graph
        let uc = CenterNode::new(1, g.n()).unwrap();
        let p = distance_matrix(g, uc).unwrap();
        for alpha in [-3.0, -1.0, -0.3] {
            let m = m_alpha(&p, &l, alpha).unwrap();
            let basis = sym_eig(m.matrix()).unwrap();
            for i in 0..g.n() {
                let chi = basis.vector(i);
                let lambda = basis.eigenvalues[i];
                let r = (m.matrix() * &chi - lambda * &chi).norm() / lambda.abs().max(1.0);
                max_residual = max_residual.max(r);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(777);
        for _ in 0..100 {
            let x = random_unit(g.n(), &mut rng);
            let xhat = gft(&x, &basis).unwrap();
            max_parseval = max_parseval.max((xhat.values().norm() - 1.0).abs());
        }
    }
    let ok = max_residual <= 1e-10 && max_parseval <= 1e-10 && spectrum_ok;
    println!(
        "criterion 6 {}: max eigenresidual {max_residual:.3e} (tol 1e-10), \
         max Parseval defect {max_parseval:.3e} (tol 1e-10), spectra in [-1e-10, 2+1e-10]: {spectrum_ok} ({:?})",
        if ok { "PASS" } else { "FAIL" },
        start.elapsed()
    );
    assert!(ok);
}

/// Criterion 7: among star, path, cycle, complete at N=6, the smallest
/// achievable graph spread at zero spectral spread (best center) is
/// attained strictly by the star.
#[test]
fn criterion_7_star_minimality_echo() {
    let start = Instant::now();
    let families: Vec<(&str, Graph)> = vec![
        ("star", gen_star(6).unwrap()),
        ("path", gen_path(6).unwrap()),
        ("cycle", gen_cycle(6).unwrap()),
        ("complete", gen_complete(6).unwrap()),
    ];
    let mut best: Vec<(String, f64)> = Vec::new();
    for (name, g) in &families {
        let mut min_g = f64::INFINITY;
        for uc in 1..=6 {
            let (p, l, ucn) = setup(g, uc);
            let (left, _) = curve_endpoints(&p, &l, ucn).unwrap();
            min_g = min_g.min(left.g);
        }
        best.push((name.to_string(), min_g));
    }
    let star_val = best[0].1;
    let ok = best[1..].iter().all(|(_, v)| star_val < *v);
    println!(
        "criterion 7 {}: gamma_uc(0) by family {:?} — star strictly smallest: {ok} ({:?})",
        if ok { "PASS" } else { "FAIL" },
        best.iter()
            .map(|(n, v)| format!("{n}={v:.6}"))
            .collect::<Vec<_>>(),
        start.elapsed()
    );
    assert!(ok);
}

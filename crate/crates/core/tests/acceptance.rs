//! Acceptance checks, one line per criterion. Exits non-zero if any fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use asa_core::asa::{
    analytic_minimizer, asa_boundary, asa_cm_infimum, compute_report, functional_l1, functional_l2,
    truncation_sequence, AsaReport, BoundaryMesh, DiscreteFunction, InfimumOptions,
};
use asa_core::body::quartic_oracle;
use asa_core::coarea::{
    default_ladder, seeded_test_functions, verify_change_of_variable, verify_sphere_boundary_equality,
};
use asa_core::curvature::{curvature_function, gauss_curvature};
use asa_core::measures::curvature_measure_c0;
use asa_core::numeric::{random_direction, rng_from_seed, sphere_measure};
use asa_core::report::{to_json_string, to_value};
use asa_core::verify::{
    check_gl_covariance, check_homogeneity, check_isoperimetric, check_isoperimetric_equality,
    check_isoperimetric_strict, check_mixed_volume_inequality, diag_map, shear_map, standard_bodies,
    NamedBody, PropertyResult, ISOPERIMETRIC_MIN_SLACK,
};
use asa_core::{ConvexBody, Direction, Quadrature, Result};
use rand::RngExt;
use std::f64::consts::PI;
use std::time::Instant;

const P_GRID: [f64; 4] = [0.5, 1.0, 2.0, 3.0];
const DIMS: [usize; 2] = [2, 3];
const AGREEMENT_TOL: f64 = 0.01;
const CLOSED_FORM_TOL: f64 = 0.01;
const BODY_TIME_LIMIT_S: f64 = 60.0;
const CM_DESCENT_TARGET: f64 = 0.05;
const TRUNCATION_TARGET: f64 = 0.1;
const TRUNCATION_STEPS: usize = 1000;
const C0_TOTAL_TOL: f64 = 0.005;
const ATOM_TOL: f64 = 1e-9;
const RECIPROCITY_TOL: f64 = 1e-6;
const RECIPROCITY_NODES: usize = 1000;
const COV_TOL: f64 = 0.01;
const COV_FUNCTIONS: usize = 5;
const RANDOM_G: usize = 100;
const MINIMIZER_TOL: f64 = 1e-9;
const SIMPLEX_SEED: u64 = 11;

type Outcome = Result<(bool, String)>;
type Criterion = Box<dyn FnOnce(&mut Vec<AsaReport>) -> Outcome>;

fn quad(n: usize) -> Quadrature {
    Quadrature::default_for(n)
}

fn grid(n: usize) -> Vec<NamedBody> {
    standard_bodies(n, SIMPLEX_SEED).expect("standard bodies")
}

fn failures(results: &[(String, PropertyResult)]) -> Vec<String> {
    results
        .iter()
        .filter(|(_, r)| !r.pass)
        .map(|(ctx, r)| format!("{ctx}:{} lhs={:.6e} rhs={:.6e}", r.name, r.lhs, r.rhs))
        .collect()
}

fn summary(count: usize, failed: &[String]) -> String {
    if failed.is_empty() {
        format!("{count} checks")
    } else {
        format!("{} of {count} failed: {}", failed.len(), failed.iter().take(5).cloned().collect::<Vec<_>>().join("; "))
    }
}

fn agreement_bodies(n: usize) -> Result<Vec<(&'static str, ConvexBody)>> {
    let e: &[f64] = if n == 2 { &[1.0, 2.0] } else { &[1.0, 2.0, 3.0] };
    Ok(vec![
        ("unit_ball", ConvexBody::centered_ball(n, 1.0)?),
        ("ball_r2", ConvexBody::centered_ball(n, 2.0)?),
        ("ellipsoid_123", ConvexBody::axis_ellipsoid(e)?),
    ])
}

fn four_representations(reports: &mut Vec<AsaReport>) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut slowest: f64 = 0.0;
    let mut failed = Vec::new();
    for n in DIMS {
        for (name, body) in agreement_bodies(n)? {
            let start = Instant::now();
            for p in P_GRID {
                let r = compute_report(&body, p, quad(n), &InfimumOptions::default())?;
                worst = worst.max(r.max_pairwise_rel_gap);
                if r.max_pairwise_rel_gap > AGREEMENT_TOL {
                    failed.push(format!("{name} n={n} p={p} gap={:.3e}", r.max_pairwise_rel_gap));
                }
                reports.push(r);
            }
            let secs = start.elapsed().as_secs_f64();
            slowest = slowest.max(secs);
            if secs > BODY_TIME_LIMIT_S {
                failed.push(format!("{name} n={n} took {secs:.1}s"));
            }
        }
    }
    Ok((failed.is_empty(), format!("max gap {worst:.3e}, slowest body {slowest:.2}s; {}", summary(24, &failed))))
}

fn closed_forms() -> Outcome {
    let mut failed = Vec::new();
    let mut worst: f64 = 0.0;
    let ball = ConvexBody::centered_ball(3, 1.0)?;
    let ell = ConvexBody::axis_ellipsoid(&[1.0, 2.0, 3.0])?;
    let cases = [
        ("unit_ball", &ball, 0.5, 4.0 * PI),
        ("unit_ball", &ball, 1.0, 4.0 * PI),
        ("unit_ball", &ball, 2.0, 4.0 * PI),
        ("unit_ball", &ball, 3.0, 4.0 * PI),
        ("ellipsoid_123", &ell, 1.0, 4.0 * PI * 6f64.sqrt()),
    ];
    for (name, body, p, expect) in cases {
        let r = compute_report(body, p, quad(3), &InfimumOptions::default())?;
        for v in r.values() {
            let gap = (v / expect - 1.0).abs();
            worst = worst.max(gap);
            if gap > CLOSED_FORM_TOL {
                failed.push(format!("{name} p={p} value={v:.6e} expected={expect:.6e}"));
            }
        }
    }
    Ok((failed.is_empty(), format!("max rel error {worst:.3e}; {}", summary(20, &failed))))
}

fn polytope_degeneracy() -> Outcome {
    let mut failed = Vec::new();
    let mut notes = Vec::new();
    for n in DIMS {
        let cube = ConvexBody::cube(n, 1.0)?;
        let mesh = BoundaryMesh::new(&cube, quad(n))?;
        for p in P_GRID {
            let b = asa_boundary(&cube, p, quad(n))?;
            if b != 0.0 {
                failed.push(format!("n={n} p={p} boundary={b:e}"));
            }
            let cm = asa_cm_infimum(&cube, p, quad(n), &InfimumOptions::default())?;
            if !(cm.value < CM_DESCENT_TARGET) || cm.iterations > 10_000 {
                failed.push(format!("n={n} p={p} cm={:.3e} after {} iterations", cm.value, cm.iterations));
            }
            let seq = truncation_sequence(&mesh, p, TRUNCATION_STEPS)?;
            let last = seq.last().map(|s| s.1).unwrap_or(f64::NAN);
            // Monotone from the point where the sequence first starts to fall.
            let tail_start = seq.windows(2).position(|w| w[1].1 < w[0].1).unwrap_or(seq.len());
            let monotone = seq[tail_start..].windows(2).all(|w| w[1].1 < w[0].1);
            if !monotone || !(last < TRUNCATION_TARGET) {
                failed.push(format!("n={n} p={p} truncation monotone={monotone} last={last:.3e}"));
            }
            if n == 3 && p == 1.0 {
                notes.push(format!("n=3 p=1: cm {:.2e} in {} its, L2(h_1000) {:.2e}", cm.value, cm.iterations, last));
            }
        }
    }
    Ok((failed.is_empty(), format!("{}; {}", notes.join(", "), summary(24, &failed))))
}

fn homogeneity_and_covariance() -> Outcome {
    let mut results = Vec::new();
    for n in DIMS {
        for nb in grid(n) {
            for p in P_GRID {
                let ctx = format!("{} n={n} p={p}", nb.name);
                for lambda in [0.5, 2.0] {
                    results.push((ctx.clone(), check_homogeneity(&nb.body, p, lambda, quad(n))?));
                }
                results.push((ctx.clone(), check_gl_covariance(&nb.body, p, "diag", &diag_map(n), quad(n))?));
                results.push((ctx, check_gl_covariance(&nb.body, p, "shear", &shear_map(n), quad(n))?));
            }
        }
    }
    // p = n: scaling leaves the value unchanged.
    let mut zero_exp = Vec::new();
    for n in DIMS {
        let b = ConvexBody::axis_ellipsoid(if n == 2 { &[1.0, 2.0] } else { &[1.0, 2.0, 3.0] })?;
        let r = check_homogeneity(&b, n as f64, 2.0, quad(n))?;
        let unchanged = (r.lhs / r.rhs - 1.0).abs() <= COV_TOL
            && (r.rhs / asa_boundary(&b, n as f64, quad(n))? - 1.0).abs() < 1e-12;
        if !unchanged {
            zero_exp.push(format!("p=n={n} lhs={:.6e} rhs={:.6e}", r.lhs, r.rhs));
        }
    }
    let mut failed = failures(&results);
    failed.extend(zero_exp);
    Ok((failed.is_empty(), summary(results.len() + 2, &failed)))
}

fn curvature_measure_structure() -> Outcome {
    let mut failed = Vec::new();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in DIMS {
        let mut bodies = grid(n);
        bodies.push(NamedBody { name: "quartic".into(), body: quartic_oracle(n, 0.3)?, ellipsoidal: false });
        for nb in bodies {
            count += 1;
            let c0 = curvature_measure_c0(&nb.body, quad(n))?;
            let expect = sphere_measure(n);
            let gap = (c0.total() / expect - 1.0).abs();
            worst = worst.max(gap);
            if gap > C0_TOTAL_TOL {
                failed.push(format!("{} n={n} C0 total {:.6e}", nb.name, c0.total()));
            }
            let structural = if nb.body.is_polytope() {
                c0.density.iter().all(|d| *d == 0.0) && !c0.atoms.is_empty()
            } else {
                c0.atoms.is_empty()
            };
            if !structural {
                failed.push(format!("{} n={n} decomposition", nb.name));
            }
        }
    }
    let cube = curvature_measure_c0(&ConvexBody::cube(3, 1.0)?, quad(3))?;
    let atom_err = cube.atoms.iter().map(|a| (a.mass - PI / 2.0).abs()).fold(0.0, f64::max);
    if cube.atoms.len() != 8 || atom_err > ATOM_TOL {
        failed.push(format!("cube atoms {} err {atom_err:e}", cube.atoms.len()));
    }
    let mut recip: f64 = 0.0;
    for n in DIMS {
        let mut rng = rng_from_seed(5);
        for (name, body) in agreement_bodies(n)? {
            for _ in 0..RECIPROCITY_NODES {
                let u = Direction::new(random_direction(n, &mut rng))?;
                let x = body.inverse_gauss(&u)?;
                let err = (gauss_curvature(&body, &x)? * curvature_function(&body, &u)? - 1.0).abs();
                recip = recip.max(err);
                if err > RECIPROCITY_TOL {
                    failed.push(format!("{name} n={n} reciprocity {err:e}"));
                    break;
                }
            }
        }
    }
    Ok((
        failed.is_empty(),
        format!("C0 max rel error {worst:.2e} over {count} bodies, cube atom error {atom_err:.1e}, max |HF-1| {recip:.1e}; {}", summary(count + 7, &failed)),
    ))
}

fn change_of_variable() -> Outcome {
    let mut failed = Vec::new();
    let mut worst: f64 = 0.0;
    let mut worst_s7: f64 = 0.0;
    let mut count = 0;
    for n in DIMS {
        let functions = seeded_test_functions(n, COV_FUNCTIONS, 17);
        for nb in grid(n).into_iter().filter(|b| b.body.is_smooth()) {
            for p in P_GRID {
                count += 1;
                let rep = verify_change_of_variable(&nb.body, p, quad(n), &functions)?;
                worst = worst.max(rep.max_gap);
                if rep.max_gap > COV_TOL {
                    failed.push(format!("{} n={n} p={p} gap {:.3e}", nb.name, rep.max_gap));
                }
                let s7 = verify_sphere_boundary_equality(&nb.body, p, quad(n), &default_ladder())?;
                worst_s7 = worst_s7.max(s7.final_gap).max(s7.gap);
                if !s7.monotone || s7.final_gap > COV_TOL || s7.gap > COV_TOL {
                    failed.push(format!(
                        "{} n={n} p={p} ladder monotone={} final gap {:.3e}",
                        nb.name, s7.monotone, s7.final_gap
                    ));
                }
            }
        }
    }
    Ok((
        failed.is_empty(),
        format!("max change-of-variable gap {worst:.2e}, max ladder gap {worst_s7:.2e}; {}", summary(2 * count, &failed)),
    ))
}

fn inequalities() -> Outcome {
    let mut results = Vec::new();
    for n in DIMS {
        let bodies = grid(n);
        for p in P_GRID {
            for k in &bodies {
                for l in &bodies {
                    let ctx = format!("K={} L={} n={n} p={p}", k.name, l.name);
                    for r in check_mixed_volume_inequality(&k.body, &l.body, p, quad(n))? {
                        results.push((ctx.clone(), r));
                    }
                }
                let ctx = format!("{} n={n} p={p}", k.name);
                results.push((ctx.clone(), check_isoperimetric(&k.body, p, quad(n))?));
                if k.ellipsoidal {
                    results.push((ctx, check_isoperimetric_equality(&k.body, p, quad(n))?));
                }
            }
        }
    }
    let mut min_slack = f64::INFINITY;
    for n in DIMS {
        let q = quartic_oracle(n, 0.3)?;
        for p in P_GRID {
            let r = check_isoperimetric_strict(&q, p, ISOPERIMETRIC_MIN_SLACK, quad(n))?;
            min_slack = min_slack.min(r.rel_gap_or_slack);
            results.push((format!("quartic n={n} p={p}"), r));
        }
    }
    let failed = failures(&results);
    Ok((failed.is_empty(), format!("min quartic slack {min_slack:.3}; {}", summary(results.len(), &failed))))
}

fn infimum_mechanics(reports: &[AsaReport]) -> Outcome {
    let mut failed = Vec::new();
    let mut count = 0;
    let mut worst_min: f64 = 0.0;
    for n in DIMS {
        let mut rng = rng_from_seed(23);
        for nb in grid(n) {
            let mesh = BoundaryMesh::new(&nb.body, quad(n))?;
            for p in P_GRID {
                for _ in 0..RANDOM_G {
                    count += 1;
                    let values = (0..mesh.len()).map(|_| rng.random_range(-1.0f64..1.0).exp()).collect();
                    let atoms = (0..mesh.atom_count()).map(|_| rng.random_range(-1.0f64..1.0).exp()).collect();
                    let g = DiscreteFunction::new(values, atoms)?;
                    let (l1, l2) = (functional_l1(&mesh, &g, p)?, functional_l2(&mesh, &g, p)?);
                    if !(l1 <= l2 * (1.0 + 1e-12)) {
                        failed.push(format!("{} n={n} p={p} L1={l1:e} > L2={l2:e}", nb.name));
                    }
                }
                if nb.body.is_smooth() {
                    count += 1;
                    let g = analytic_minimizer(&mesh, p)?;
                    let (l1, b) = (functional_l1(&mesh, &g, p)?, asa_boundary(&nb.body, p, quad(n))?);
                    let err = (l1 - b).abs() / b;
                    worst_min = worst_min.max(err);
                    if err > MINIMIZER_TOL {
                        failed.push(format!("{} n={n} p={p} L1(g*)={l1:e} boundary={b:e}", nb.name));
                    }
                }
            }
        }
    }
    for r in reports {
        for trace in [&r.optimizer_trace_cm, &r.optimizer_trace_lutwak] {
            count += 1;
            if !trace.windows(2).all(|w| w[1].1 <= w[0].1) {
                failed.push(format!("trace not monotone n={} p={}", r.n, r.p));
            }
        }
    }
    Ok((failed.is_empty(), format!("max |L1(g*)-value|/value {worst_min:.1e}; {}", summary(count, &failed))))
}

fn determinism() -> Outcome {
    let run = || -> Result<String> {
        let body = ConvexBody::axis_ellipsoid(&[1.0, 2.0, 3.0])?;
        let r = compute_report(&body, 2.0, Quadrature::new(4, 7), &InfimumOptions::default())?;
        let rep = verify_change_of_variable(&body, 2.0, Quadrature::new(4, 7), &seeded_test_functions(3, 2, 7))?;
        Ok(to_json_string(&to_value(&(r, rep))))
    };
    let (a, b) = (run()?, run()?);
    Ok((a == b, format!("{} bytes, identical={}", a.len(), a == b)))
}

fn main() {
    let mut reports = Vec::new();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("four-representation agreement", Box::new(four_representations)),
        ("closed-form values", Box::new(|_| closed_forms())),
        ("polytope degeneracy", Box::new(|_| polytope_degeneracy())),
        ("homogeneity and covariance", Box::new(|_| homogeneity_and_covariance())),
        ("curvature-measure structure", Box::new(|_| curvature_measure_structure())),
        ("change-of-variable identities", Box::new(|_| change_of_variable())),
        ("inequalities", Box::new(|_| inequalities())),
        ("infimum mechanics", Box::new(|r| infimum_mechanics(r))),
        ("determinism", Box::new(|_| determinism())),
    ];
    let mut all = true;
    for (k, (title, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match check(&mut reports) {
            Ok(x) => x,
            Err(e) => (false, format!("error: {e}")),
        };
        all &= pass;
        println!(
            "criterion {} [{title}]: {} ({detail}; {:.1}s)",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if !all {
        std::process::exit(1);
    }
}

//! Acceptance criteria 1-9. Runs without the libtest harness so every line is
//! printed; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nct_core::bundles::{
    commutative_origin_check, dualize_atlas, heisenberg_descriptor, k_monodromy,
    pointwise_commutative, twisted_heisenberg_atlas, winding_number,
};
use nct_core::cocycle::{dual_class, CocycleClass};
use nct_core::dim2::{dual_system_2d, restricted_mackey_invariant, transverse_locus, System2D};
use nct_core::finite::{verify_appendix_a, AppendixOptions};
use nct_core::rational::{int, q};
use nct_core::sample;
use nct_core::transversality::{
    dualize_pair, dualize_pair_inverse, heisenberg_form, is_transverse, polarize,
    vee_dual_decomposition_check,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240611;
const C1_BUDGET: Duration = Duration::from_secs(1);
const C2_BUDGET: Duration = Duration::from_secs(2);
const C6_BUDGET: Duration = Duration::from_secs(1);
const POLARIZE_TOL: f64 = 1e-9;

type Outcome = (bool, String);

fn c1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let classes: Vec<CocycleClass> = (0..200)
        .map(|_| {
            let n = if rng.gen_bool(0.5) { 2 } else { 4 };
            sample::totally_skew(&mut rng, n)
        })
        .collect();
    let start = Instant::now();
    let mut ok = true;
    for c in &classes {
        let dd = dual_class(c).and_then(|d| dual_class(&d));
        ok &= dd.as_ref() == Ok(c);
    }
    let el = start.elapsed();
    (ok && el < C1_BUDGET, format!("200 classes, exact, {el:?} (< {C1_BUDGET:?})"))
}

fn c2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let pairs: Vec<_> = (0..500).map(|_| sample::transverse_pair(&mut rng)).collect();
    let start = Instant::now();
    let mut ok = true;
    for p in &pairs {
        match dualize_pair(p) {
            Ok(d) => {
                ok &= d.phi() == p.phi();
                ok &= dualize_pair_inverse(&d).as_ref() == Ok(p);
            }
            Err(_) => ok = false,
        }
    }
    let el = start.elapsed();
    (ok && el < C2_BUDGET, format!("500 pairs, exact, {el:?} (< {C2_BUDGET:?})"))
}

fn c3() -> Outcome {
    let start = System2D::new(q(2, 3), int(3));
    let first = dual_system_2d(&start, &q(2, 3));
    let second = first.as_ref().ok().map(|f| dual_system_2d(f, &int(0)));
    let ok = first == Ok(System2D::new(int(0), q(-2, 3)))
        && second == Some(Ok(System2D::new(q(1, 3), int(0))))
        && restricted_mackey_invariant(&start) == int(0);
    (ok, "(2/3, 3) -> (0, -2/3) -> (1/3, 0); restricted 3 -> 0".into())
}

fn c4() -> Outcome {
    let grid: Vec<_> = (-20..=20).map(|j| q(j, 4)).collect();
    let mut mismatches = 0;
    let mut on_locus = 0;
    for t in &grid {
        for th in &grid {
            let a = transverse_locus(t, th);
            let b = is_transverse(&CocycleClass::theta(t.clone()), &CocycleClass::theta(th.clone()));
            on_locus += usize::from(a);
            mismatches += usize::from(a != b);
        }
    }
    (mismatches == 0, format!("41x41 grid, {on_locus} transverse points, {mismatches} mismatches"))
}

fn c5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let ok = (0..300).all(|_| {
        let p = sample::transverse_pair(&mut rng);
        vee_dual_decomposition_check(&p) == Ok(true)
    });
    (ok, "300 pairs, n in {2, 4}, exact".into())
}

fn c6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let forms: Vec<_> = (0..100).map(|_| sample::antisymmetric_f64(&mut rng)).collect();
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failed = 0;
    for v in &forms {
        match polarize(v, POLARIZE_TOL) {
            Ok(phi) => {
                let j = heisenberg_form(v.rows() / 2).to_f64();
                let r = phi.transpose().try_mul(&j).and_then(|m| m.try_mul(&phi));
                match r.and_then(|m| m.try_sub(v)) {
                    Ok(d) => worst = worst.max(d.max_abs()),
                    Err(_) => failed += 1,
                }
            }
            Err(_) => failed += 1,
        }
    }
    let el = start.elapsed();
    (
        failed == 0 && worst <= POLARIZE_TOL && el < C6_BUDGET,
        format!("100 forms, max residual {worst:e} (<= {POLARIZE_TOL:e}), {failed} failures, {el:?}"),
    )
}

fn c7() -> Outcome {
    let report = verify_appendix_a(&AppendixOptions::default());
    let control = verify_appendix_a(&AppendixOptions {
        perturb_step2: true,
        ..AppendixOptions::default()
    });
    let passed = |name: &str| report.step(name).is_some_and(|s| s.passed);
    let ok = report.all_passed
        && ["tilde_isomorphism", "transfer_rank", "boundary_table", "obstruction_sum"]
            .iter()
            .all(|n| passed(n))
        && !control.all_passed
        && control.step("boundary_table").is_some_and(|s| !s.passed);
    let failing: Vec<_> = report.steps.iter().filter(|s| !s.passed).map(|s| s.name.as_str()).collect();
    (
        ok,
        format!(
            "{} steps, failing {:?}; perturbed control rejected: {}",
            report.steps.len(),
            failing,
            !control.all_passed
        ),
    )
}

fn c8() -> Outcome {
    let atlas = twisted_heisenberg_atlas();
    let samples: usize = atlas.charts().iter().map(|c| c.omega_lift().len()).sum();
    let products = atlas
        .charts()
        .iter()
        .all(|c| c.points().all(|(_, th, thh)| th * thh == int(2) && transverse_locus(th, thh)));
    let torus = atlas.torus_path();
    let winding = torus.as_ref().ok().map(winding_number);
    let origin = torus.as_ref().ok().map(commutative_origin_check);

    let h = heisenberg_descriptor();
    let h_dual = dualize_atlas(&h.commutative_atlas).and_then(|d| d.torus_path());

    let predual = dualize_atlas(&atlas).is_ok_and(|d| {
        let (u, v) = (&d.charts()[0], &d.charts()[1]);
        // s is the circle parameter; the thickening carries s = 1 in U and s = 0 in V
        let u_ok = u.points().all(|(t, th, thh)| {
            let s = if *t <= q(1, 2) { int(2) * t } else { int(1) };
            *th == -int(2) / (int(1) + &s) && *thh == -(int(1) + &s)
        });
        let v_ok = v.points().all(|(t, th, thh)| {
            let s = if *t <= int(1) { int(0) } else { int(2) * (t - int(1)) };
            *th == -int(2) / (int(1) + &s) && *thh == -(int(1) + &s)
        });
        u_ok && v_ok
    });

    let ok = samples >= 1000
        && products
        && winding == Some(Ok(1))
        && origin == Some(Ok(false))
        && pointwise_commutative(&h.theta_hat)
        && h_dual.as_ref() == Ok(&h.theta)
        && predual;
    (
        ok,
        format!(
            "{samples} chart samples, theta*theta_hat = 2: {products}, winding {winding:?}, \
             origin check {origin:?}, Heisenberg dual reproduces theta_0: {}, pre-dual match: {predual}",
            h_dual.as_ref() == Ok(&h.theta)
        ),
    )
}

fn c9() -> Outcome {
    let powers = (-3..=3).all(|w| k_monodromy(w).is_identity() == (w == 0));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let mut agree = 0;
    for i in 0..20 {
        let w = i % 7 - 3;
        let p = sample::circle_path(&mut rng, w);
        let check = commutative_origin_check(&p);
        let mono = winding_number(&p).map(|n| k_monodromy(n).is_identity());
        if check.is_ok() && check == mono {
            agree += 1;
        }
    }
    (powers && agree == 20, format!("M^w = I iff w = 0: {powers}; {agree}/20 paths agree"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("double-dual involution", c1),
        ("transverse-pair round trip", c2),
        ("two-dimensional worked chain", c3),
        ("two-dimensional locus equivalence", c4),
        ("block decomposition of the inverse vee form", c5),
        ("polarisation", c6),
        ("finite twisted algebras", c7),
        ("bundles", c8),
        ("K-monodromy", c9),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = f();
        all &= ok;
        println!("{} criterion {} ({name}): {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

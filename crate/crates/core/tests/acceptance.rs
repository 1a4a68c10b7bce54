//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the verdict lines are always printed.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use flagcert_core::campaign::{run_campaign, CampaignConfig, CaseName};
use flagcert_core::forms::StandardModel;
use flagcert_core::groups::{self, check_onishchik_triple, GroupSpec, Point};
use flagcert_core::linalg::{LieAlgebraBasis, Subspace, Vector};
use flagcert_core::octonions;
use flagcert_core::orbits::{
    classify_point, orbit_report, tangent_dim_projective, verify_orbit_equality, QuadricAlgebras,
    Stratum,
};
use flagcert_core::sampling::{self, SeededRng};
use flagcert_core::witnesses::{
    isotropic_normal_form_complex, isotropic_normal_form_real, transport_positive_line_sp, Claim,
    Witness,
};
use rand::SeedableRng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dims() -> Outcome {
    let mut count = 0;
    let mut check = |what: String, l: LieAlgebraBasis, want: usize| -> Result<(), String> {
        count += 1;
        ensure(l.dim() == want && l.is_bracket_closed(), || {
            format!("{what}: dimension {} (expected {want})", l.dim())
        })
    };
    for n in 1..=4 {
        let sp = groups::sp2n_c(n).unwrap().lie_algebra();
        check(format!("sp{}(C)", 2 * n), sp, n * (2 * n + 1))?;
    }
    for m in 4..=8 {
        check(
            format!("so{m}(C)"),
            groups::so_c(m).lie_algebra(),
            m * (m - 1) / 2,
        )?;
    }
    for n in 1..=2 {
        let su = groups::su_nn(n).unwrap().lie_algebra();
        check(format!("su({n},{n})"), su, 4 * n * n - 1)?;
    }
    let d = octonions::derivations(&octonions::split_octonions())
        .map_err(|e| format!("derivations: {e}"))?;
    check("Der(split octonions)".into(), d.algebra, 14)?;
    Ok(format!("{count} dimension certificates exact"))
}

fn onishchik() -> Outcome {
    let mut lines = Vec::new();
    let mut run = |label: String,
                   small: &LieAlgebraBasis,
                   big: &LieAlgebraBasis,
                   point: Point,
                   want: usize|
     -> Result<(), String> {
        let r = check_onishchik_triple(small, big, &point).map_err(|e| format!("{label}: {e}"))?;
        ensure(
            r.passed() && r.quotient_small == want && r.quotient_big == want,
            || format!("{label}: {r:?}"),
        )?;
        lines.push(format!("{label}={want}"));
        Ok(())
    };
    let mut rng = SeededRng::seed_from_u64(2);
    for n in 1..=3 {
        let z = sampling::gaussian_vector(&mut rng, 2 * n, 5);
        run(
            format!("sp{0}⊂sl{0}", 2 * n),
            &groups::sp2n_c(n).unwrap().lie_algebra(),
            &groups::sl2n_c(n).unwrap().lie_algebra(),
            Point::Line(z),
            2 * n - 1,
        )?;
    }
    let g2 = QuadricAlgebras::build()
        .map_err(|e| e.to_string())?
        .g2
        .complexified();
    let so7 = groups::so7_c().lie_algebra();
    run(
        "g2⊂so7".into(),
        &g2,
        &so7,
        Point::Line(StandardModel::quadric7().z_plus()),
        5,
    )?;
    for n in 2..=3 {
        let m = StandardModel::isotropic(n, 2, 2 * n - 3).unwrap();
        run(
            format!("so{}⊂so{}", 2 * n - 1, 2 * n),
            &groups::so2n1_c(n).unwrap().lie_algebra(),
            &groups::so2n_c(n).unwrap().lie_algebra(),
            Point::Subspace(m.normal_form_complex().unwrap()),
            n * (n - 1) / 2,
        )?;
    }
    Ok(lines.join(", "))
}

/// A verified witness together with the point it moved.
struct Moved {
    model: StandardModel,
    witness: Witness,
    algebra: std::sync::Arc<LieAlgebraBasis>,
}

fn witness_checks(w: &Witness, label: &str) -> Result<(), String> {
    ensure(w.verified && w.reverify(), || {
        format!("{label}: witness does not verify")
    })?;
    let back = Witness::from_json(&w.to_json()).map_err(|e| format!("{label}: {e}"))?;
    ensure(back.verified && back.element == w.element, || {
        format!("{label}: serialized witness does not re-verify")
    })
}

fn line_transports(out: &mut Vec<Moved>) -> Outcome {
    let mut configs: Vec<(String, StandardModel, GroupSpec)> = Vec::new();
    for n in 1..=3 {
        configs.push((
            format!("split n={n}"),
            StandardModel::projective_split(n).unwrap(),
            groups::sp2n_r(n).unwrap(),
        ));
    }
    for (p, q) in [(1, 1), (2, 1)] {
        configs.push((
            format!("signature ({p},{q})"),
            StandardModel::projective_pq(p, q).unwrap(),
            groups::sp_2p2q(p, q).unwrap(),
        ));
    }
    let mut total = 0;
    for (k, (label, m, group)) in configs.into_iter().enumerate() {
        let algebra = std::sync::Arc::new(group.lie_algebra());
        let mut rng = SeededRng::seed_from_u64(300 + k as u64);
        for s in 0..25 {
            let sign = if s % 2 == 0 { 1 } else { -1 };
            let (z, zt) = sampling::same_sign_pair(&m, &mut rng, 5, sign);
            let w = transport_positive_line_sp(&m, &z, &zt)
                .map_err(|e| format!("{label} sample {s}: {e}"))?;
            witness_checks(&w, &format!("{label} sample {s}"))?;
            ensure(w.group.name() == group.name(), || {
                format!("{label}: wrong group")
            })?;
            total += 1;
            out.push(Moved {
                model: m.clone(),
                witness: w,
                algebra: algebra.clone(),
            });
        }
    }
    Ok(format!("{total} line transports re-verified, 0 failures"))
}

fn normal_forms(out: &mut Vec<Moved>) -> Outcome {
    let mut total = 0;
    for n in 2..=3 {
        let m = StandardModel::isotropic(n, 2, 2 * n - 3).unwrap();
        let nf = m.normal_form_complex().unwrap();
        let mut rng = SeededRng::seed_from_u64(400 + n as u64);
        for s in 0..25 {
            let label = format!("complex n={n} sample {s}");
            let plane = sampling::scrambled_complex_plane(&m, &mut rng, 3)
                .map_err(|e| format!("{label}: {e}"))?;
            let w =
                isotropic_normal_form_complex(&m, &plane).map_err(|e| format!("{label}: {e}"))?;
            witness_checks(&w, &label)?;
            ensure(w.group.name() == "SO2n-1C", || {
                format!("{label}: wrong group")
            })?;
            ensure(
                plane
                    .apply(&w.element)
                    .column_space_equal(&nf)
                    .unwrap_or(false),
                || format!("{label}: image is not the normal form"),
            )?;
            total += 1;
        }
    }
    for (p, q) in [(2usize, 1usize), (2, 3), (3, 2)] {
        let n = (p + q).div_ceil(2);
        let m = StandardModel::isotropic(n, p, q).unwrap();
        let nf = m.normal_form_real().unwrap();
        let group = groups::so_pq(p, q).unwrap();
        let algebra = std::sync::Arc::new(group.lie_algebra());
        let mut rng = SeededRng::seed_from_u64(500 + 10 * p as u64 + q as u64);
        for s in 0..25 {
            let label = format!("real ({p},{q}) sample {s}");
            let plane = sampling::scrambled_real_plane(&m, &mut rng, 3)
                .map_err(|e| format!("{label}: {e}"))?;
            let w = isotropic_normal_form_real(&m, &plane).map_err(|e| format!("{label}: {e}"))?;
            witness_checks(&w, &label)?;
            ensure(group.contains(&w.element).unwrap_or(false), || {
                format!("{label}: element outside SO({p},{q})")
            })?;
            ensure(
                plane
                    .apply(&w.element)
                    .column_space_equal(&nf)
                    .unwrap_or(false),
                || format!("{label}: image is not the normal form"),
            )?;
            total += 1;
            out.push(Moved {
                model: m.clone(),
                witness: w,
                algebra: algebra.clone(),
            });
        }
    }
    Ok(format!("{total} normal-form round trips exact, 0 failures"))
}

fn orbit_equality() -> Outcome {
    let alg = QuadricAlgebras::build().map_err(|e| e.to_string())?;
    let cmp = verify_orbit_equality(&alg, 10, 7, 5).map_err(|e| e.to_string())?;
    let mut per = std::collections::BTreeMap::<String, (usize, usize)>::new();
    for c in &cmp {
        ensure(c.equal(), || {
            format!(
                "sample {} ({}): g2 {} vs so(3,4) {}",
                c.sample, c.stratum, c.g2.tangent_dim, c.so34.tangent_dim
            )
        })?;
        if matches!(c.stratum, Stratum::Positive | Stratum::Negative) {
            ensure(c.g2.tangent_dim == 10 && c.g2.open && c.so34.open, || {
                format!(
                    "sample {} ({}): tangent dim {}",
                    c.sample, c.stratum, c.g2.tangent_dim
                )
            })?;
        }
        let e = per.entry(c.stratum.label()).or_default();
        e.0 += 1;
        e.1 = c.g2.tangent_dim;
    }
    ensure(
        per.len() == 4 && per.values().all(|(k, _)| *k >= 10),
        || format!("strata sampled: {per:?}"),
    )?;
    let dims: Vec<String> = per
        .iter()
        .map(|(s, (k, d))| format!("{s}: {k}×dim {d}"))
        .collect();
    Ok(dims.join(", "))
}

fn moved_points(m: &Moved) -> (Point, Point) {
    match &m.witness.claim {
        Claim::MapsLine { from, .. } => {
            let to: Vector = m.witness.element.mul_vec(from);
            (Point::Line(from.clone()), Point::Line(to))
        }
        Claim::MapsSubspace { from, .. } => {
            let to: Subspace = from.apply(&m.witness.element);
            (Point::Subspace(from.clone()), Point::Subspace(to))
        }
        Claim::MapsVector { .. } => unreachable!("no vector claims in these suites"),
    }
}

fn invariance(moved: &[Moved]) -> Outcome {
    let mut points = 0;
    for (k, m) in moved.iter().enumerate() {
        let (a, b) = moved_points(m);
        let sa = classify_point(&m.model, &a).map_err(|e| format!("witness {k}: {e}"))?;
        let sb = classify_point(&m.model, &b).map_err(|e| format!("witness {k}: {e}"))?;
        ensure(sa == sb, || {
            format!("witness {k}: stratum {sa} became {sb}")
        })?;
        for p in [&a, &b] {
            let r = orbit_report(&m.model, &m.algebra, m.witness.group.name(), p)
                .map_err(|e| format!("witness {k}: {e}"))?;
            let flagged_open = match r.stratum {
                Stratum::Signature { open, .. } => open,
                Stratum::Positive | Stratum::Negative => true,
                Stratum::NullReal | Stratum::NullNonreal => false,
            };
            ensure(flagged_open == r.open, || {
                format!(
                    "witness {k}: stratum {} but tangent dim {}",
                    r.stratum, r.tangent_dim
                )
            })?;
            if let Point::Line(z) = p {
                let d = tangent_dim_projective(&m.algebra, z).map_err(|e| e.to_string())?;
                ensure(d == r.tangent_dim, || {
                    format!("witness {k}: tangent dims disagree")
                })?;
            }
            points += 1;
        }
    }
    Ok(format!(
        "{} witnesses, {points} points, 0 discrepancies",
        moved.len()
    ))
}

fn determinism() -> Outcome {
    let configs = [
        CampaignConfig::resolve(CaseName::ProjectiveSplit, Some(1), None, None),
        CampaignConfig::resolve(CaseName::ProjectivePq, None, Some(1), Some(1)),
        CampaignConfig::resolve(CaseName::Quadric7, None, None, None),
        CampaignConfig::resolve(CaseName::Isotropic, Some(2), Some(2), Some(1)),
    ];
    for cfg in configs {
        let cfg = cfg.unwrap().with_samples(4).unwrap().with_seed(2024);
        let a = run_campaign(&cfg).map_err(|e| e.to_string())?;
        let b = run_campaign(&cfg).map_err(|e| e.to_string())?;
        ensure(a.passed(), || format!("{} campaign failed", cfg.case))?;
        ensure(a.to_json_string() == b.to_json_string(), || {
            format!("{} reports differ", cfg.case)
        })?;
    }
    Ok("4 campaigns reproduced byte for byte".into())
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        Err(e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into()))
    })
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    if args.iter().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let mut moved = Vec::new();
    let mut failures = 0;
    let mut report = |k: usize, title: &str, started: Instant, r: Outcome| {
        let secs = started.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("criterion {k}: PASS  {title} ({msg}) [{secs:.1}s]"),
            Err(msg) => {
                failures += 1;
                println!("criterion {k}: FAIL  {title} ({msg}) [{secs:.1}s]");
            }
        }
    };
    let t = Instant::now();
    report(1, "Lie algebra dimension certificates", t, guarded(dims));
    let t = Instant::now();
    report(2, "Onishchik triples", t, guarded(onishchik));
    let t = Instant::now();
    let r = guarded(|| line_transports(&mut moved));
    report(3, "same-sign line transports", t, r);
    let t = Instant::now();
    let r = guarded(|| normal_forms(&mut moved));
    report(4, "isotropic normal-form round trips", t, r);
    let t = Instant::now();
    report(
        5,
        "quadric orbit equality (infinitesimal)",
        t,
        guarded(orbit_equality),
    );
    let t = Instant::now();
    let r = guarded(|| invariance(&moved));
    report(6, "stratum invariance along witnesses", t, r);
    let t = Instant::now();
    report(7, "campaign determinism", t, guarded(determinism));
    if failures == 0 {
        println!("acceptance: all 7 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} of 7 criteria failed");
        ExitCode::FAILURE
    }
}

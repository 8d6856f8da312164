//! Exit-gate checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use unilrc::code::{build_unilrc, parity_bound_check, rate_check, singleton_equality, verify_distance};
use unilrc::metrics::compute_metrics;
use unilrc::placement::{cross_cluster_cost, place_default, place_ecwide, place_unilrc};
use unilrc::presets::{build, Scheme};
use unilrc::reliability::{mttdl, recovery_cost, MarkovParams};
use unilrc::sim::{sim_normal_read, sim_reconstruction, SimConfig, Workload};
use unilrc::{CodeDefinition, ErasurePattern, Family};

const TABLE: [(usize, usize, usize, usize, usize, &str); 3] =
    [(1, 6, 42, 30, 7, "0.7143"), (2, 8, 136, 112, 17, "0.8235"), (2, 10, 210, 180, 21, "0.8571")];

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn table_codes() -> Vec<CodeDefinition> {
    TABLE.iter().map(|&(a, z, ..)| build_unilrc(a, z).unwrap()).collect()
}

fn parameter_family() -> Check {
    for &(a, z, n, k, f, rate) in &TABLE {
        let c = build_unilrc(a, z).map_err(|e| e.to_string())?;
        let s = &c.spec;
        ensure((s.n, s.k, s.f) == (n, k, f), format!("({a},{z}) gave ({},{},f={})", s.n, s.k, s.f))?;
        let shown = format!("{:.4}", k as f64 / n as f64);
        ensure(shown == rate, format!("({a},{z}) rate {shown} != {rate}"))?;
        ensure(rate_check(s).is_ok(), format!("({a},{z}) rate closed forms disagree"))?;
    }
    Ok("(42,30,7) (136,112,17) (210,180,21); rates 0.7143 0.8235 0.8571".into())
}

fn distance_brute_force() -> Check {
    let mut notes = Vec::new();
    let mut failed = Vec::new();

    let small = build_unilrc(1, 2).unwrap();
    let (d, checks) = common::brute_distance(&small, small.n());
    let lib = verify_distance(&small, 64);
    notes.push(format!("(1,2) d={d:?} lib={} checks={checks}", lib.distance));
    if d != Some(4) || lib.distance != 4 || !singleton_equality(&small.spec, 4) {
        failed.push("(1,2) distance != 4 or equality fails");
    }

    let mid = build_unilrc(1, 3).unwrap();
    let (d5, checks5) = common::brute_distance(&mid, 5);
    let lib = verify_distance(&mid, 64);
    notes.push(format!(
        "(1,3) undecodable at e<=5: {d5:?} over {checks5} checks; exhaustive d={} (witness {:?})",
        lib.distance, lib.witness
    ));
    if checks5 > 1600 {
        failed.push("(1,3) needed more than 1.6k checks");
    }
    if d5 != Some(5) {
        failed.push("(1,3) measured distance is not 5");
    }
    if !singleton_equality(&mid.spec, lib.distance) {
        failed.push("(1,3) n-k-n/(r+1) != measured d - 2");
    }
    if failed.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(format!("{}; {}", failed.join(", "), notes.join("; ")))
    }
}

fn group_xor_repair_and_nullity() -> (Check, Check) {
    let mut xor_repair = Ok(String::new());
    let mut nullity = Ok(String::new());
    let mut stripes = 0usize;
    let mut oracle_checked = 0usize;
    for code in table_codes() {
        let mut rng = ChaCha8Rng::seed_from_u64(code.n() as u64);
        for s in 0..1000 {
            let data: Vec<Vec<u8>> = (0..code.k()).map(|_| (0..64).map(|_| rng.gen()).collect()).collect();
            let stripe = code.encode(&data).unwrap();
            stripes += 1;
            for group in &code.layout.groups {
                let mut acc = [0u8; 64];
                for &b in group {
                    acc.iter_mut().zip(&stripe.blocks[b]).for_each(|(a, v)| *a ^= v);
                }
                if acc.iter().any(|&v| v != 0) && xor_repair.is_ok() {
                    xor_repair = Err(format!("n={} group {group:?} does not XOR to zero", code.n()));
                }
            }
            for b in 0..code.n() {
                let view = stripe.view(&ErasurePattern::new([b]));
                match code.local_repair(&view, b) {
                    Ok(r) if r.block == stripe.blocks[b] && r.helpers.len() == code.spec.r => {}
                    Ok(r) if xor_repair.is_ok() => {
                        xor_repair =
                            Err(format!("n={} block {b}: {} helpers or wrong bytes", code.n(), r.helpers.len()))
                    }
                    Err(e) if xor_repair.is_ok() => xor_repair = Err(format!("n={} block {b}: {e}", code.n())),
                    _ => {}
                }
            }
            let lib_zero = code.syndrome(&stripe).unwrap().iter().all(|row| row.iter().all(|&v| v == 0));
            let oracle_zero = if s < 20 {
                oracle_checked += 1;
                common::syndrome_is_zero(&code, &stripe.blocks)
            } else {
                true
            };
            if !(lib_zero && oracle_zero) && nullity.is_ok() {
                nullity = Err(format!("n={} stripe {s}: H*y != 0", code.n()));
            }
        }
        if !code.parity_check_nullity_holds() && nullity.is_ok() {
            nullity = Err(format!("n={}: H*G != 0", code.n()));
        }
    }
    (
        xor_repair.map(|_| format!("{stripes} stripes, 64 B blocks, every block rebuilt from exactly r helpers")),
        nullity
            .map(|_| format!("{stripes} stripes; H*G = 0; {oracle_checked} cross-checked with an independent field")),
    )
}

fn metrics_values() -> Check {
    let expected = [
        (Family::Alrc, Ratio::new(60, 7), "8.57"),
        (Family::Olrc, Ratio::from_integer(25), "25.00"),
        (Family::Ulrc, Ratio::new(52, 7), "7.43"),
        (Family::UniLrc, Ratio::from_integer(6), "6.00"),
    ];
    let mut shown = Vec::new();
    for (family, want, text) in expected {
        let code = build(family, Scheme::N42).unwrap();
        // mean helper count straight from the group layout
        let oracle: usize = (0..code.n())
            .map(|b| {
                code.layout.groups.iter().filter(|g| g.contains(&b)).map(|g| g.len() - 1).min().unwrap_or(code.k())
            })
            .sum();
        let m = compute_metrics(&code, &place_default(&code).unwrap()).unwrap();
        ensure(m.r_bar == want, format!("{family} r_bar {} != {want}", m.r_bar))?;
        ensure(Ratio::new(oracle as u64, code.n() as u64) == want, format!("{family} layout oracle disagrees"))?;
        let f = *want.numer() as f64 / *want.denom() as f64;
        ensure(format!("{f:.2}") == text, format!("{family} r_bar rounds to {f:.2}"))?;
        shown.push(format!("{family}={}", m.r_bar));
    }
    for code in table_codes() {
        let m = compute_metrics(&code, &place_unilrc(&code).unwrap()).unwrap();
        let zero = Ratio::from_integer(0);
        ensure(
            m.cdrc == zero && m.carc == zero && m.lbnr == Ratio::from_integer(1),
            format!("UniLRC n={}: cdrc={} carc={} lbnr={}", code.n(), m.cdrc, m.carc, m.lbnr),
        )?;
    }
    Ok(format!("r_bar {}; UniLRC CDRC=CARC=0, LBNR=1 at n=42,136,210", shown.join(" ")))
}

fn ecwide_placement() -> Check {
    let code = build(Family::Ulrc, Scheme::N42).unwrap();
    ensure(code.spec.k == 30, "ULRC preset is not 30-of-42")?;
    let map = place_ecwide(&code).unwrap();
    let costs: Vec<usize> = (0..code.n()).map(|b| cross_cluster_cost(&code, &map, b).unwrap()).collect();
    let zero = costs.iter().filter(|&&c| c == 0).count();
    let one = costs.iter().filter(|&&c| c == 1).count();
    let bottleneck = map.data_per_cluster(code.k()).into_iter().max().unwrap();
    ensure(zero == 24, format!("{zero}/42 zero-cost blocks"))?;
    ensure(one == 18, format!("{one} of the remaining 18 blocks cost exactly 1"))?;
    ensure(bottleneck == 7, format!("bottleneck cluster holds {bottleneck} data blocks"))?;
    Ok(format!("24/42 = {:.1}% zero cross cost, rest cost 1, bottleneck 7 data blocks", 2400.0 / 42.0))
}

fn parity_lower_bound() -> Check {
    let instances = [(1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (3, 4), (1, 6), (2, 8), (2, 10), (4, 5)];
    for (a, z) in instances {
        let c = build_unilrc(a, z).unwrap();
        let (n, k) = (c.spec.n, c.spec.k);
        // n = z(az+1), so n/z + z - 1 = az + z
        ensure(n - k == a * z + z && n % z == 0, format!("({a},{z}) arithmetic oracle fails"))?;
        ensure(parity_bound_check(&c.spec).unwrap(), format!("({a},{z}) n-k={} != n/z+z-1", n - k))?;
    }
    Ok(format!("{} instances", instances.len()))
}

fn reliability() -> Check {
    let u = build(Family::UniLrc, Scheme::N42).unwrap();
    let c = recovery_cost(&u, &place_default(&u).unwrap(), Ratio::new(1, 10)).unwrap().c;
    ensure(c == Ratio::new(3, 5), format!("C(UniLRC 42) = {c}"))?;
    let mut worst: f64 = 0.0;
    for scheme in Scheme::ALL {
        let years: Vec<(Family, f64)> = [Family::Olrc, Family::UniLrc, Family::Ulrc, Family::Alrc]
            .into_iter()
            .map(|f| {
                let code = build(f, scheme).unwrap();
                let r = mttdl(&code, &place_default(&code).unwrap(), &MarkovParams::defaults(code.spec.f)).unwrap();
                let rel = (r.exact - r.product).abs() / r.exact;
                worst = worst.max(rel);
                (f, r.exact)
            })
            .collect();
        ensure(worst <= 0.10, format!("{}: exact and product differ by {:.1}%", scheme.label(), worst * 100.0))?;
        let ordered = years[0].1 > 10.0 * years[1].1 && years[1].1 > years[2].1 && years[2].1 > years[3].1;
        ensure(ordered, format!("{} ordering fails: {years:?}", scheme.label()))?;
    }
    Ok(format!("C = 3/5; product within {:.2}% of exact; OLRC >> UniLRC > ULRC > ALRC at 42/136/210", worst * 100.0))
}

fn sim_cfg(family: Family, workload: Workload, cross_mult: f64) -> SimConfig {
    let code = build(family, Scheme::N42).unwrap();
    let map = place_default(&code).unwrap();
    let mut cfg = SimConfig::new(code, map, workload);
    cfg.topology.inner_bandwidth = 10e9 / 8.0;
    cfg.topology.cross_bandwidth = cross_mult * 1e9 / 8.0;
    cfg.seed = 7;
    cfg
}

fn simulator_trends() -> Check {
    let recon = |f: Family, m: f64| sim_reconstruction(&sim_cfg(f, Workload::Reconstruction, m)).unwrap().throughput;
    let base: Vec<(Family, f64)> = Family::ALL.iter().map(|&f| (f, recon(f, 1.0))).collect();
    let uni = recon(Family::UniLrc, 1.0);
    ensure(base.iter().all(|&(f, t)| f == Family::UniLrc || t < uni), format!("reconstruction ranking {base:?}"))?;

    let sweep = [0.5, 1.0, 2.0, 5.0, 10.0];
    let mut uni_spread = 0.0;
    for f in Family::ALL {
        let t: Vec<f64> = sweep.iter().map(|&m| recon(f, m)).collect();
        if f == Family::UniLrc {
            let (lo, hi) = t.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
            uni_spread = (hi - lo) / (t.iter().sum::<f64>() / t.len() as f64);
            ensure(uni_spread <= 0.05, format!("UniLRC spread {:.2}%", uni_spread * 100.0))?;
        } else {
            ensure(t.windows(2).all(|w| w[1] > w[0]), format!("{f} not strictly increasing: {t:?}"))?;
        }
    }

    let read = |f: Family| sim_normal_read(&sim_cfg(f, Workload::NormalRead, 1.0)).unwrap().latency_samples[0];
    let (u, a, ul, o) = (read(Family::UniLrc), read(Family::Alrc), read(Family::Ulrc), read(Family::Olrc));
    ensure((u - a).abs() <= 1e-9 * u, format!("UniLRC {u} != ALRC {a}"))?;
    ensure(a <= ul && ul < o, format!("normal read ALRC {a}, ULRC {ul}, OLRC {o}"))?;

    let again = sim_reconstruction(&sim_cfg(Family::Ulrc, Workload::Reconstruction, 1.0)).unwrap();
    let first = sim_reconstruction(&sim_cfg(Family::Ulrc, Workload::Reconstruction, 1.0)).unwrap();
    ensure(again == first, "reruns differ")?;

    Ok(format!(
        "UniLRC first ({:.1} MB/s); UniLRC sweep spread {:.2}%, baselines increasing; normal read {:.4}s = {:.4}s <= {:.4}s < {:.4}s; deterministic",
        uni / 1e6,
        uni_spread * 100.0,
        u,
        a,
        ul,
        o
    ))
}

fn cli_round_trip() -> Check {
    let bin = env!("CARGO_BIN_EXE_unilrc");
    let run = |args: &[&str]| -> Result<String, String> {
        let out = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        if out.status.success() {
            Ok(String::from_utf8_lossy(&out.stdout).into_owned())
        } else {
            Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr).trim()))
        }
    };
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let input: Vec<u8> = (0..10 * 1024 * 1024).map(|_| rng.gen()).collect();
    let input_path = tmp.path().join("input.bin");
    std::fs::write(&input_path, &input).map_err(|e| e.to_string())?;
    let mut erased_report = Vec::new();
    for &(a, z, n, _, f, _) in &TABLE {
        let dir = tmp.path().join(format!("n{n}"));
        let code_path = tmp.path().join(format!("n{n}.json"));
        let p = |x: &std::path::Path| x.to_str().unwrap().to_string();
        run(&[
            "construct",
            "--family",
            "unilrc",
            "--alpha",
            &a.to_string(),
            "--z",
            &z.to_string(),
            "--out",
            &p(&code_path),
        ])?;
        run(&[
            "encode",
            "--code",
            &p(&code_path),
            "--input",
            &p(&input_path),
            "--block-size",
            "65536",
            "--out-dir",
            &p(&dir),
        ])?;
        let mut erased = rand::seq::index::sample(&mut rng, n, f).into_vec();
        erased.sort_unstable();
        for &b in &erased {
            std::fs::remove_file(dir.join(unilrc::cli::block_file(b))).map_err(|e| e.to_string())?;
        }
        let out_path = tmp.path().join(format!("n{n}.out"));
        run(&["decode", "--code", &p(&code_path), "--dir", &p(&dir), "--out", &p(&out_path)])?;
        let got = std::fs::read(&out_path).map_err(|e| e.to_string())?;
        ensure(got == input, format!("n={n}: decoded file differs after erasing {erased:?}"))?;
        erased_report.push(format!("n={n} erased {f}"));
    }
    Ok(format!("10 MiB byte-identical: {}", erased_report.join(", ")))
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Check, f64)> = Vec::new();
    let mut timed = |name: &'static str, f: &dyn Fn() -> Check| {
        let t = Instant::now();
        let r = f();
        results.push((name, r, t.elapsed().as_secs_f64()));
    };
    timed("parameter family", &parameter_family);
    timed("distance brute force", &distance_brute_force);
    let t = Instant::now();
    let (xor, nullity) = group_xor_repair_and_nullity();
    let secs = t.elapsed().as_secs_f64();
    results.push(("group-XOR and repair", xor, secs));
    results.push(("parity-check nullity", nullity, secs));
    let mut timed = |name: &'static str, f: &dyn Fn() -> Check| {
        let t = Instant::now();
        let r = f();
        results.push((name, r, t.elapsed().as_secs_f64()));
    };
    timed("metrics", &metrics_values);
    timed("ECWide placement", &ecwide_placement);
    timed("parity lower bound", &parity_lower_bound);
    timed("reliability", &reliability);
    timed("simulator trends", &simulator_trends);
    timed("CLI round trip", &cli_round_trip);

    let mut failures = 0;
    for (name, r, secs) in &results {
        match r {
            Ok(detail) => println!("PASS  {name} [{secs:.2}s]: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name} [{secs:.2}s]: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", results.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

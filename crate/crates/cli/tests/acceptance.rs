//! Acceptance suite: one PASS/FAIL line per criterion.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use wt1::arith::{gcd, is_prime, primes_up_to};
use wt1::characters::DirichletCharacter;
use wt1::classifier::{classify, order_class_of, projective_invariant, verify, Certificate, ClassifierConfig, OrderClass, Verdict};
use wt1::cyclo::CycNumber;
use wt1::quadfields::{characters_of_group, class_group, ideals_of_norm, ray_class_group, theta_series, QuadInt};
use wt1::store::{sturm_bound, twist, NewformRecord};

type Outcome = Result<String, String>;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wt1"))
}

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn fixture(name: &str) -> NewformRecord {
    NewformRecord::parse(&fs::read_to_string(fixtures_dir().join(name)).unwrap()).unwrap()
}

fn run(cmd: &mut Command, stdin: Option<&[u8]>) -> Output {
    let mut child = cmd.stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    let mut pipe = child.stdin.take().unwrap();
    if let Some(data) = stdin {
        pipe.write_all(data).unwrap();
    }
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Certificates emitted anywhere in the suite, replayed by criterion 3.
struct Pool(Vec<(Certificate, NewformRecord)>);

/// q·∏(1 − q^n)(1 − q^{23n}), integer coefficients of q^1 … q^m.
fn eta_product_23(m: usize) -> Vec<i64> {
    let mut s = vec![0i64; m + 1];
    s[0] = 1;
    for step in (1..=m).flat_map(|n| [n, 23 * n]) {
        if step > m {
            continue;
        }
        for k in (step..=m).rev() {
            s[k] -= s[k - step];
        }
    }
    s.truncate(m);
    s
}

fn dihedral_end_to_end(pool: &mut Pool) -> Outcome {
    let start = Instant::now();
    let gen = run(bin().args(["gen-dihedral", "-23", "1"]), None);
    ensure(gen.status.success(), || format!("gen-dihedral failed: {}", String::from_utf8_lossy(&gen.stderr)))?;
    let out = run(bin().args(["classify", "-"]), Some(&gen.stdout));
    let elapsed = start.elapsed();
    ensure(out.status.code() == Some(0), || format!("classify exit {:?}", out.status.code()))?;
    let cert = Certificate::parse(&String::from_utf8_lossy(&out.stdout)).map_err(|e| e.to_string())?;
    ensure(cert.verdict == Verdict::Dihedral, || format!("verdict {}", cert.verdict))?;
    let d = cert.dihedral.as_ref().ok_or("no dihedral evidence")?;
    ensure(d.disc == -23 && d.conductor.is_unit() && d.psi_order == 3, || format!("data {d:?}"))?;

    let r = NewformRecord::parse(&String::from_utf8_lossy(&gen.stdout)).map_err(|e| e.to_string())?;
    let oracle = eta_product_23(20);
    for (n, &c) in oracle.iter().enumerate() {
        ensure(r.a(n as u64 + 1).is_integer_value(c), || format!("a_{} = {} but the eta product gives {c}", n + 1, r.a(n as u64 + 1)))?;
    }
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    pool.0.push((cert, r));
    Ok(format!("D=-23, f=(1), cubic psi; a_1..a_20 match the eta product; {:.2}s", elapsed.as_secs_f64()))
}

fn exotic_fixtures(pool: &mut Pool) -> Outcome {
    let mut notes = Vec::new();
    for (name, level, order, verdict) in
        [("level124_a4.wt1", 124, 6, Verdict::A4), ("level148_s4.wt1", 148, 4, Verdict::S4), ("level633_a5.wt1", 633, 10, Verdict::A5)]
    {
        let path = fixtures_dir().join(name);
        let start = Instant::now();
        let out = run(bin().arg("classify").arg(&path), None);
        let elapsed = start.elapsed();
        ensure(out.status.code() == Some(0), || format!("{name}: exit {:?}", out.status.code()))?;
        let cert = Certificate::parse(&String::from_utf8_lossy(&out.stdout)).map_err(|e| e.to_string())?;
        let r = fixture(name);
        ensure(r.level == level && r.character.order() == order, || format!("{name}: level {} order {}", r.level, r.character.order()))?;
        ensure(cert.verdict == verdict, || format!("{name}: verdict {}", cert.verdict))?;
        ensure(elapsed < Duration::from_secs(60), || format!("{name}: took {elapsed:?}"))?;
        notes.push(format!("{level}/{order}->{verdict} {:.2}s", elapsed.as_secs_f64()));
        pool.0.push((cert, r));
    }
    Ok(notes.join(", "))
}

fn certificate_replay(pool: &Pool) -> Outcome {
    let mut checked = 0;
    for (cert, r) in &pool.0 {
        let back = Certificate::parse(&cert.to_text()).map_err(|e| e.to_string())?;
        let rep = verify(&back, r);
        ensure(rep.is_ok(), || format!("level {}: {:?}", r.level, rep.discrepancies))?;
        checked += rep.checked;
    }
    // and once through the command-line verifier
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (cert, r) = pool.0.last().ok_or("empty pool")?;
    let (rp, cp) = (dir.path().join("r.wt1"), dir.path().join("r.cert"));
    fs::write(&rp, r.serialize()).unwrap();
    fs::write(&cp, cert.to_text()).unwrap();
    let out = run(bin().arg("verify").arg(&rp).arg(&cp), None);
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stdout).into_owned())?;
    Ok(format!("{} certificates, {checked} claims, 0 discrepancies", pool.0.len()))
}

/// Brute-force Hecke relations: every coprime factorisation, every prime-power
/// recursion, and vanishing at inert primes.
fn check_relations(r: &NewformRecord, disc: i64) -> Result<(), String> {
    let m = r.precision() as u64;
    for a in 2..=m {
        for b in a..=m / a {
            if gcd(a, b) == 1 && *r.a(a * b) != r.a(a) * r.a(b) {
                return Err(format!("level {}: a_{} != a_{a}·a_{b}", r.level, a * b));
            }
        }
    }
    for p in primes_up_to(m) {
        let mut pe = p;
        while pe * p <= m {
            let expected = if r.level.is_multiple_of(p) { r.a(pe) * r.a(p) } else { &(r.a(pe) * r.a(p)) - &(&r.chi(p) * r.a(pe / p)) };
            if *r.a(pe * p) != expected {
                return Err(format!("level {}: recursion fails at a_{}", r.level, pe * p));
            }
            pe *= p;
        }
        if !r.level.is_multiple_of(p) && wt1::arith::kronecker(disc, p as i64) == -1 && !r.a(p).is_zero() {
            return Err(format!("level {}: a_{p} != 0 at an inert prime", r.level));
        }
    }
    Ok(())
}

fn hecke_property_suite(pool: &mut Pool) -> Outcome {
    let discs: Vec<i64> = (-400i64..0).filter(|&d| wt1::characters::is_fundamental_discriminant(d)).collect();
    let pairs: Vec<(i64, u64)> = discs.iter().flat_map(|&d| (1..=400 / d.unsigned_abs()).map(move |n| (d, n))).collect();
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let mut forms = Vec::new();
    let mut attempts = 0;
    while forms.len() < 50 && attempts < 5000 {
        attempts += 1;
        let (d, n) = pairs[rng.random_range(0..pairs.len())];
        let conductors = ideals_of_norm(d, n);
        if conductors.is_empty() {
            continue;
        }
        let f = conductors[rng.random_range(0..conductors.len())];
        let chars = characters_of_group(Arc::new(ray_class_group(d, &f).map_err(|e| e.to_string())?));
        if chars.is_empty() {
            continue;
        }
        let psi = &chars[rng.random_range(0..chars.len())];
        let key = (d, f, psi.order(), psi.exponents().to_vec());
        if forms.iter().any(|(k, _)| *k == key) {
            continue;
        }
        let theta = theta_series(psi, 1000).map_err(|e| e.to_string())?;
        let r = NewformRecord::from_theta(&theta, "generated").map_err(|e| e.to_string())?;
        forms.push((key, r));
    }
    ensure(forms.len() == 50, || format!("only {} forms generated", forms.len()))?;
    let max_level = forms.iter().map(|(_, r)| r.level).max().unwrap();
    ensure(max_level <= 400, || format!("level {max_level} exceeds 400"))?;
    for ((d, ..), r) in &forms {
        check_relations(r, *d)?;
    }
    // exclusivity: each classifies as dihedral
    for ((d, ..), r) in &forms {
        let cert = classify(r, &ClassifierConfig::default()).map_err(|e| e.to_string())?;
        ensure(cert.verdict == Verdict::Dihedral, || format!("D={d} level {}: verdict {}", r.level, cert.verdict))?;
        pool.0.push((cert, r.clone()));
    }
    Ok(format!("50 forms, levels up to {max_level}, 1000 terms, 0 violations; all 50 classified DIHEDRAL"))
}

fn order_class_oracle() -> Outcome {
    // eigenvalues ζ_a^i, ζ_b^j; trace and det built from them, the ratio's
    // order read off from the exponents
    let mut pairs = 0;
    for a in 1..=12u64 {
        for b in 1..=12u64 {
            let l = a * b / gcd(a, b);
            for i in (0..a).filter(|&i| gcd(i, a) == 1) {
                for j in (0..b).filter(|&j| gcd(j, b) == 1) {
                    let (ka, kb) = (i * (l / a), j * (l / b));
                    let det_exp = (ka + kb) % l;
                    if l / gcd(det_exp, l) > 12 {
                        continue;
                    }
                    let trace = &CycNumber::root_of_unity(l, ka as i64) + &CycNumber::root_of_unity(l, kb as i64);
                    let det = CycNumber::root_of_unity(l, det_exp as i64);
                    let c = (&trace * &trace).checked_div(&det).unwrap();
                    let ratio = (ka + l - kb) % l;
                    let order = l / gcd(ratio, l);
                    let expected = if order <= 5 { OrderClass::from_order(order) } else { OrderClass::DihedralOnly };
                    let got = order_class_of(&c);
                    ensure(got == expected, || format!("eigenvalues ζ_{a}^{i}, ζ_{b}^{j}: class {got}, ratio order {order}"))?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} (trace, det) pairs, 100% agreement"))
}

fn is_fundamental(d: i64) -> bool {
    let squarefree = |n: i64| (2..).take_while(|k| k * k <= n).all(|k| n % (k * k) != 0);
    match d.rem_euclid(4) {
        1 => squarefree(d.abs()),
        0 => matches!((d / 4).rem_euclid(4), 2 | 3) && squarefree((d / 4).abs()),
        _ => false,
    }
}

/// Reduced primitive forms of discriminant d, by exhaustive search.
fn count_reduced_forms(d: i64) -> u64 {
    let mut h = 0;
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if gcd(gcd(a as u64, b.unsigned_abs()), c as u64) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

/// Roots of unity of O_K as x + y·w.
fn units(d: i64) -> Vec<QuadInt> {
    let list: &[(i64, i64)] = match d {
        -4 => &[(1, 0), (0, 1), (-1, 0), (0, -1)],
        -3 => &[(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)],
        _ => &[(1, 0), (-1, 0)],
    };
    list.iter().map(|&(x, y)| QuadInt::new(x, y)).collect()
}

fn class_number_oracle() -> Outcome {
    let mut n_disc = 0;
    for d in (-500i64..0).filter(|&d| is_fundamental(d)) {
        let h = class_group(d).map_err(|e| e.to_string())?.order();
        let expected = count_reduced_forms(d);
        ensure(h == expected, || format!("D={d}: h={h}, enumeration gives {expected}"))?;
        n_disc += 1;
    }
    let mut n_pairs = 0;
    'outer: for d in (-200i64..0).rev().filter(|&d| is_fundamental(d)) {
        // at most 12 conductors per field, so the sample spans several fields
        for f in (1..=30u64).flat_map(|n| ideals_of_norm(d, n)).take(12) {
            {
                let g = ray_class_group(d, &f).map_err(|e| e.to_string())?;
                // Φ(𝔣) from the prime factorisation, unit index by direct membership
                let phi: u64 = f.factor().iter().map(|(p, e)| p.norm().pow(e - 1) * (p.norm() - 1)).product();
                let us = units(d);
                let trivial = us.iter().filter(|u| f.contains(QuadInt::new(u.x - 1, u.y))).count() as u64;
                let image = us.len() as u64 / trivial;
                let h = class_group(d).unwrap().order();
                ensure(g.order() * image == h * phi, || format!("D={d} f={f}: h_f={} h={h} phi={phi} units={image}", g.order()))?;
                n_pairs += 1;
                if n_pairs == 100 {
                    break 'outer;
                }
            }
        }
    }
    ensure(n_pairs == 100, || format!("only {n_pairs} pairs"))?;
    Ok(format!("{n_disc} discriminants in [-500, 0); {n_pairs} ray class groups (Norm(f) <= 30) match the exact sequence"))
}

fn sturm_values() -> Outcome {
    for n in 1..=10000u64 {
        // N·∏(1 + 1/p) as an exact fraction
        let (mut num, mut den) = (n as u128, 1u128);
        let mut m = n;
        let mut p = 2;
        while m > 1 {
            if m % p == 0 {
                num *= (p + 1) as u128;
                den *= p as u128;
                while m % p == 0 {
                    m /= p;
                }
            }
            p += 1;
        }
        let g = {
            let (mut a, mut b) = (num, den);
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a
        };
        let (num, den) = (num / g, den / g);
        ensure(den == 1, || format!("N={n}: index not integral"))?;
        let s = sturm_bound(n);
        let bound = num.div_ceil(12);
        ensure(s.index as u128 == num && s.bound as u128 == bound, || {
            format!("N={n}: got ({}, {}), expected ({num}, {bound})", s.index, s.bound)
        })?;
    }
    let out = run(bin().args(["sturm", "124"]), None);
    let line = String::from_utf8_lossy(&out.stdout).trim().to_string();
    ensure(line == "index 192 bound 16", || format!("sturm 124 printed {line:?}"))?;
    let s = sturm_bound(23);
    ensure((s.index, s.bound) == (24, 2), || "level 23".into())?;
    Ok("N <= 10000 exact; 23 -> 24/2, 124 -> 192/16".into())
}

fn twist_invariance() -> Outcome {
    let xis = [
        DirichletCharacter::kronecker(-4).unwrap(),
        DirichletCharacter::kronecker(5).unwrap(),
        DirichletCharacter::from_exponents(7, 3, &[1]).unwrap(),
        DirichletCharacter::from_exponents(5, 4, &[1]).unwrap(),
        DirichletCharacter::from_exponents(13, 6, &[1]).unwrap(),
    ];
    let mut compared = 0;
    for name in ["level124_a4.wt1", "level148_s4.wt1", "level633_a5.wt1"] {
        let r = fixture(name);
        for xi in &xis {
            let t = twist(&r, xi);
            for p in primes_up_to(r.precision() as u64) {
                if t.level.is_multiple_of(p) || !is_prime(p) {
                    continue;
                }
                let (a, b) =
                    (projective_invariant(&r, p).map_err(|e| e.to_string())?, projective_invariant(&t, p).map_err(|e| e.to_string())?);
                ensure(a.value == b.value, || format!("{name} twisted by {xi}: c_{p} differs"))?;
                compared += 1;
            }
        }
    }
    Ok(format!("3 fixtures x 5 characters, {compared} c_p values identical"))
}

fn determinism() -> Outcome {
    let src = tempfile::tempdir().map_err(|e| e.to_string())?;
    for name in ["level124_a4.wt1", "level148_s4.wt1", "level633_a5.wt1"] {
        fs::copy(fixtures_dir().join(name), src.path().join(name)).map_err(|e| e.to_string())?;
    }
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let out = run(bin().arg("batch").arg(src.path()), None);
        ensure(out.status.code() == Some(0), || format!("batch exit {:?}", out.status.code()))?;
        let mut certs = Vec::new();
        for name in ["level124_a4.wt1.cert", "level148_s4.wt1.cert", "level633_a5.wt1.cert"] {
            certs.push(fs::read(src.path().join(name)).map_err(|e| format!("{name}: {e}"))?);
        }
        let rows = String::from_utf8_lossy(&out.stdout).lines().count();
        ensure(rows == 4, || format!("summary has {rows} lines"))?;
        outputs.push((certs, out.stdout));
    }
    ensure(outputs[0] == outputs[1], || "batch runs differ".into())?;
    Ok("two batch runs: 3 certificates and the summary byte-identical".into())
}

fn main() {
    let mut pool = Pool(Vec::new());
    let results: Vec<(&str, Outcome)> = vec![
        ("dihedral end-to-end", dihedral_end_to_end(&mut pool)),
        ("exotic fixtures", exotic_fixtures(&mut pool)),
        ("hecke property suite", hecke_property_suite(&mut pool)),
        ("order-class oracle", order_class_oracle()),
        ("class-number oracle", class_number_oracle()),
        ("sturm values", sturm_values()),
        ("twist invariance", twist_invariance()),
        ("determinism", determinism()),
    ];
    let replay = ("certificate replay", certificate_replay(&pool));
    let mut ordered: Vec<(&str, Outcome)> = Vec::new();
    let mut it = results.into_iter();
    ordered.extend(it.by_ref().take(2));
    ordered.push(replay);
    ordered.extend(it);

    let mut failed = 0;
    for (i, (name, outcome)) in ordered.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS  [{}] {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  [{}] {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", ordered.len() - failed, ordered.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

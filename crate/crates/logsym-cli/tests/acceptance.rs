//! Acceptance gate: one test per shipped claim, each printing a single
//! `acceptance N: PASS/FAIL` line (visible with `--nocapture`).

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use logsym_core::arrangement::Arrangement;
use logsym_core::decomposition::{
    is_partitionable, ClassDecomposition, ComponentRule, Partition, Violation,
};
use logsym_core::graded::BettiVector;
use logsym_core::logcohom::b_cohomology;
use logsym_core::oracle::{de_rham_betti_oracle, truncated_lichnerowicz, DEFAULT_COLUMN_CAP};
use logsym_core::poisson::{
    enumerate_index_sets, poisson_cohomology_of_partition, IndexCollection,
};
use logsym_core::symcalc::{
    is_k_cosymplectic, schouten, verify_inverse, Certification, LogForm, Multivector, Rat, TrigPoly,
};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn model(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logsym"))
        .args(args)
        .output()
        .expect("logsym runs")
}

fn conclude(n: usize, outcome: Result<(), String>) {
    match outcome {
        Ok(()) => println!("acceptance {n}: PASS"),
        Err(e) => {
            println!("acceptance {n}: FAIL — {e}");
            panic!("acceptance {n}: FAIL — {e}");
        }
    }
}

fn within(budget: Duration, started: Instant) -> Result<(), String> {
    let took = started.elapsed();
    if took <= budget {
        Ok(())
    } else {
        Err(format!("budget {budget:?} exceeded: took {took:?}"))
    }
}

fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut out = 1u64;
    for i in 0..k {
        out = out * (n - i) as u64 / (i + 1) as u64;
    }
    out
}

fn add_shifted(acc: &mut Vec<u64>, betti: &[u64], shift: usize) {
    if acc.len() < betti.len() + shift {
        acc.resize(betti.len() + shift, 0);
    }
    for (p, b) in betti.iter().enumerate() {
        acc[p + shift] += b;
    }
}

// ---- the three symplectic models, built directly from the calculus API ----

fn section3_pair() -> (LogForm, Multivector) {
    // coordinates (x, y, z, t) = (0, 1, 2, 3)
    let omega = LogForm::covector(4, 0, true)
        .wedge(&LogForm::covector(4, 1, true))
        .unwrap()
        .add(
            &LogForm::covector(4, 2, true)
                .wedge(&LogForm::covector(4, 3, false))
                .unwrap(),
        )
        .unwrap();
    let pi = Multivector::field(4, 1)
        .wedge(&Multivector::field(4, 0))
        .unwrap()
        .scale(&(&TrigPoly::sin(4, 0, 1) * &TrigPoly::sin(4, 1, 1)))
        .add(
            &Multivector::field(4, 3)
                .wedge(&Multivector::field(4, 2))
                .unwrap()
                .scale(&TrigPoly::sin(4, 2, 1)),
        )
        .unwrap();
    (omega, pi)
}

fn paired_pair() -> (LogForm, Multivector) {
    // coordinates (a1, a2, b1, b2) = (0, 1, 2, 3); the two hypersurfaces pair up
    let omega = LogForm::covector(4, 0, true)
        .wedge(&LogForm::covector(4, 1, true))
        .unwrap()
        .add(
            &LogForm::covector(4, 2, false)
                .wedge(&LogForm::covector(4, 3, false))
                .unwrap(),
        )
        .unwrap();
    let pi = Multivector::field(4, 1)
        .wedge(&Multivector::field(4, 0))
        .unwrap()
        .scale(&(&TrigPoly::sin(4, 1, 1) * &TrigPoly::sin(4, 0, 1)))
        .add(
            &Multivector::field(4, 3)
                .wedge(&Multivector::field(4, 2))
                .unwrap(),
        )
        .unwrap();
    (omega, pi)
}

fn z_type_pair() -> (LogForm, Multivector) {
    // same coordinates; both hypersurfaces stay single
    let omega = LogForm::covector(4, 0, true)
        .wedge(&LogForm::covector(4, 2, false))
        .unwrap()
        .sub(
            &LogForm::covector(4, 1, true)
                .wedge(&LogForm::covector(4, 3, false))
                .unwrap(),
        )
        .unwrap();
    let pi = Multivector::field(4, 2)
        .wedge(&Multivector::field(4, 0))
        .unwrap()
        .scale(&TrigPoly::sin(4, 0, 1))
        .sub(
            &Multivector::field(4, 3)
                .wedge(&Multivector::field(4, 1))
                .unwrap()
                .scale(&TrigPoly::sin(4, 1, 1)),
        )
        .unwrap();
    (omega, pi)
}

#[test]
fn acceptance_1_worked_t4_example_end_to_end() {
    let started = Instant::now();
    let outcome = (|| -> Result<(), String> {
        // pipeline answer, through the shipped binary
        let out = run(&[
            "poisson-cohomology",
            &model("t4_section3.json"),
            "--format",
            "json",
        ]);
        if out.status.code() != Some(0) {
            return Err(format!("CLI exited {:?}", out.status.code()));
        }
        let v: serde_json::Value =
            serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
        let expected = serde_json::json!([1, 10, 40, 70, 39]);
        if v["total"] != expected {
            return Err(format!("pipeline total {} != {expected}", v["total"]));
        }

        // independent expansion: H^p(M) ⊕ ⊕H^{p-1}(Z_i) ⊕ H^{p-2}(Zx∩Zy)²
        //   ⊕ H^{p-2}(Zx∩Zz) ⊕ H^{p-2}(Zy∩Zz) ⊕ H^{p-3}(Zx∩Zy∩Zz)²
        // with stratum Betti numbers from scratch: s cuts leave 2^s copies of T^(4-s).
        let torus = |d: usize| -> Vec<u64> { (0..=d).map(|p| binom(d, p)).collect() };
        let scaled =
            |betti: Vec<u64>, c: u64| -> Vec<u64> { betti.iter().map(|b| b * c).collect() };
        let mut dims = vec![0u64; 5];
        add_shifted(&mut dims, &torus(4), 0);
        for _ in 0..3 {
            add_shifted(&mut dims, &scaled(torus(3), 2), 1);
        }
        for _ in 0..2 {
            add_shifted(&mut dims, &scaled(torus(2), 4), 2); // Zx∩Zy, twice
        }
        add_shifted(&mut dims, &scaled(torus(2), 4), 2); // Zx∩Zz
        add_shifted(&mut dims, &scaled(torus(2), 4), 2); // Zy∩Zz
        for _ in 0..2 {
            add_shifted(&mut dims, &scaled(torus(1), 8), 3); // Zx∩Zy∩Zz, twice
        }
        if dims != [1, 10, 40, 70, 39] {
            return Err(format!("independent expansion gave {dims:?}"));
        }
        within(Duration::from_secs(1), started)
    })();
    conclude(1, outcome);
}

#[test]
fn acceptance_2_single_z_type_hypersurface_regression() {
    let started = Instant::now();
    let outcome = (|| -> Result<(), String> {
        for n in [2, 4, 6] {
            let arr = Arrangement::torus_model(n, &[0]).map_err(|e| e.to_string())?;
            let partition =
                Partition::new(&arr, vec![], vec!["Z0".into()]).map_err(|e| e.to_string())?;
            let report = poisson_cohomology_of_partition(&partition, &arr, false)
                .map_err(|e| e.to_string())?;
            if !report.summands.is_empty() {
                return Err(format!("n={n}: unexpected extra summands"));
            }
            // H^p(M) ⊕ H^{p-1}(Z), Z = two copies of T^(n-1)
            let expected: Vec<u64> = (0..=n)
                .map(|p| binom(n, p) + if p > 0 { 2 * binom(n - 1, p - 1) } else { 0 })
                .collect();
            if report.total != BettiVector::from_u64s(&expected) {
                return Err(format!(
                    "n={n}: got {:?}, expected {expected:?}",
                    report.total.dims()
                ));
            }
        }
        within(Duration::from_secs(1), started)
    })();
    conclude(2, outcome);
}

#[test]
fn acceptance_3_log_cohomology_against_golden_file() {
    let outcome = (|| -> Result<(), String> {
        let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/t4_b_strata.json");
        let golden: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        let total: Vec<u64> = golden["total"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_u64().unwrap())
            .collect();
        let mut summed = Vec::new();
        for stratum in golden["strata"].as_array().unwrap() {
            let betti: Vec<u64> = stratum["betti"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_u64().unwrap())
                .collect();
            add_shifted(
                &mut summed,
                &betti,
                stratum["shift"].as_u64().unwrap() as usize,
            );
        }
        if summed != total {
            return Err(format!(
                "golden file is inconsistent: sum {summed:?} != {total:?}"
            ));
        }
        if total != [1, 10, 36, 54, 27] {
            return Err(format!("golden total drifted: {total:?}"));
        }
        let arr = Arrangement::torus_model(4, &[0, 1, 2]).map_err(|e| e.to_string())?;
        let computed = b_cohomology(&arr);
        if computed != BettiVector::from_u64s(&total) {
            return Err(format!("b_cohomology gave {:?}", computed.dims()));
        }
        Ok(())
    })();
    conclude(3, outcome);
}

fn random_poly(rng: &mut StdRng, n: usize) -> TrigPoly {
    let mut p = TrigPoly::zero(n);
    for _ in 0..rng.gen_range(1..=2) {
        let coord = rng.gen_range(0..n);
        let freq = rng.gen_range(1..=2);
        let c = Rat::new(
            BigInt::from(rng.gen_range(-2i64..=2)),
            BigInt::from(rng.gen_range(1i64..=2)),
        );
        let atom = if rng.gen_bool(0.5) {
            TrigPoly::sin(n, coord, freq)
        } else {
            TrigPoly::cos(n, coord, freq)
        };
        p = &p + &atom.mul_rat(&c);
    }
    if rng.gen_bool(0.3) {
        p = &p
            + &TrigPoly::constant(
                n,
                Rat::new(BigInt::from(rng.gen_range(-2i64..=2)), BigInt::from(1)),
            );
    }
    p
}

fn random_multivector(rng: &mut StdRng, n: usize, degree: usize) -> Multivector {
    let mut m = Multivector::zero(n, degree);
    for _ in 0..2 {
        let mut coords: Vec<usize> = (0..n).collect();
        coords.shuffle(rng);
        let mut term = Multivector::scalar(random_poly(rng, n));
        for &j in coords.iter().take(degree) {
            term = term.wedge(&Multivector::field(n, j)).unwrap();
        }
        m = m.add(&term).unwrap();
    }
    m
}

fn random_form(rng: &mut StdRng, n: usize, degree: usize) -> LogForm {
    let mut f = LogForm::zero(n, degree);
    for _ in 0..2 {
        let mut coords: Vec<usize> = (0..n).collect();
        coords.shuffle(rng);
        let mut term = LogForm::scalar(random_poly(rng, n));
        for &j in coords.iter().take(degree) {
            // half the basis covectors carry a log pole
            term = term
                .wedge(&LogForm::covector(n, j, rng.gen_bool(0.5)))
                .unwrap();
        }
        f = f.add(&term).unwrap();
    }
    f
}

fn scale_by_int(m: &Multivector, s: i64) -> Multivector {
    m.scale(&TrigPoly::constant(
        m.n(),
        Rat::new(BigInt::from(s), BigInt::from(1)),
    ))
}

#[test]
fn acceptance_4_symbolic_calculus_suite() {
    let started = Instant::now();
    let outcome = (|| -> Result<(), String> {
        let models = [section3_pair(), paired_pair(), z_type_pair()];
        for (idx, (omega, pi)) in models.iter().enumerate() {
            if !omega.is_closed() {
                return Err(format!("model {idx}: dω ≠ 0"));
            }
            if !pi.is_poisson() {
                return Err(format!("model {idx}: [π,π] ≠ 0"));
            }
            if !verify_inverse(omega, pi).map_err(|e| e.to_string())? {
                return Err(format!("model {idx}: π is not the inverse of ω"));
            }
        }

        let mut rng = StdRng::seed_from_u64(0x10765);
        for trial in 0..100 {
            // d ∘ d = 0
            let df = rng.gen_range(0..=2);
            let f = random_form(&mut rng, 4, df);
            if !f.exterior_d().exterior_d().is_zero() {
                return Err(format!("trial {trial}: d(df) ≠ 0 for {f:?}"));
            }

            // graded antisymmetry: [P,Q] = -(-1)^((p-1)(q-1)) [Q,P]
            let dp = rng.gen_range(1..=2);
            let dq = rng.gen_range(1..=2);
            let p = random_multivector(&mut rng, 4, dp);
            let q = random_multivector(&mut rng, 4, dq);
            let sign = if ((dp - 1) * (dq - 1)) % 2 == 0 {
                -1
            } else {
                1
            };
            let lhs = schouten(&p, &q);
            let rhs = scale_by_int(&schouten(&q, &p), sign);
            if !lhs.sub(&rhs).map_err(|e| e.to_string())?.is_zero() {
                return Err(format!(
                    "trial {trial}: antisymmetry fails (p={dp}, q={dq})"
                ));
            }

            // graded Leibniz: [P, Q∧R] = [P,Q]∧R + (-1)^((p-1)q) Q∧[P,R]
            let dr = rng.gen_range(0..=2);
            let r = random_multivector(&mut rng, 4, dr);
            let lhs = schouten(&p, &q.wedge(&r).map_err(|e| e.to_string())?);
            let sign = if ((dp - 1) * dq) % 2 == 0 { 1 } else { -1 };
            let rhs = schouten(&p, &q)
                .wedge(&r)
                .map_err(|e| e.to_string())?
                .add(&scale_by_int(
                    &q.wedge(&schouten(&p, &r)).map_err(|e| e.to_string())?,
                    sign,
                ))
                .map_err(|e| e.to_string())?;
            if !lhs.sub(&rhs).map_err(|e| e.to_string())?.is_zero() {
                return Err(format!(
                    "trial {trial}: Leibniz fails (p={dp}, q={dq}, r={dr})"
                ));
            }
        }
        within(Duration::from_secs(10), started)
    })();
    conclude(4, outcome);
}

#[test]
fn acceptance_5_cosymplectic_accept_and_reject() {
    let outcome = (|| -> Result<(), String> {
        // (db1, db2) on T²: a 2-cosymplectic structure
        let good = [
            LogForm::covector(2, 0, false),
            LogForm::covector(2, 1, false),
        ];
        let report =
            is_k_cosymplectic(&good, &LogForm::zero(2, 2), 2).map_err(|e| e.to_string())?;
        if report.verdict() != Some(true) {
            return Err(format!("(db1, db2) not accepted: {report:?}"));
        }

        // (sin(b1)db1, sin(b1)db2) degenerates along sin(b1) = 0
        let s = TrigPoly::sin(2, 0, 1);
        let bad = [
            LogForm::covector(2, 0, false).scale(&s),
            LogForm::covector(2, 1, false).scale(&s),
        ];
        let report = is_k_cosymplectic(&bad, &LogForm::zero(2, 2), 2).map_err(|e| e.to_string())?;
        if report.verdict() != Some(false) {
            return Err(format!("(sin(b1)db1, sin(b1)db2) not rejected: {report:?}"));
        }
        match &report.nonvanishing {
            Certification::Vanishes { witness: Some(w) } => {
                use num_traits::Zero;
                if !report.top_coefficient.eval_quarter(w).is_zero() {
                    return Err(format!("witness {w:?} does not kill the top coefficient"));
                }
            }
            other => return Err(format!("no vanishing-locus witness: {other:?}")),
        }
        Ok(())
    })();
    conclude(5, outcome);
}

#[test]
fn acceptance_6_index_families_against_brute_force() {
    let started = Instant::now();
    let outcome = (|| -> Result<(), String> {
        let to_set =
            |mask: u32| -> BTreeSet<usize> { (0..4).filter(|b| mask >> b & 1 == 1).collect() };
        for k in 0..=4usize {
            for ell in 0..=4usize {
                // every admissible tuple once, with its weight and strictness
                let mut all: Vec<(IndexCollection, bool)> = Vec::new();
                for i in 1u32..1 << k {
                    for j in 0u32..1 << k {
                        if i & j != 0 {
                            continue;
                        }
                        for kk in 0u32..1 << k {
                            if i & kk != 0 {
                                continue;
                            }
                            for l in 0u32..1 << ell {
                                let col = IndexCollection {
                                    i: to_set(i),
                                    j: to_set(j),
                                    k: to_set(kk),
                                    l: to_set(l),
                                };
                                all.push((col, j & kk == 0));
                            }
                        }
                    }
                }
                all.sort_by(|a, b| a.0.weight().cmp(&b.0.weight()).then_with(|| a.0.cmp(&b.0)));
                for p_max in 0..=12usize {
                    for strict in [false, true] {
                        let expected: Vec<&IndexCollection> = all
                            .iter()
                            .filter(|(c, ok)| c.weight() <= p_max && (!strict || *ok))
                            .map(|(c, _)| c)
                            .collect();
                        let got = enumerate_index_sets(k, ell, p_max, strict);
                        if got.len() != expected.len()
                            || !got.iter().zip(&expected).all(|(a, b)| a == *b)
                        {
                            return Err(format!(
                                "k={k} ell={ell} p_max={p_max} strict={strict}: \
                                 {} enumerated vs {} brute force",
                                got.len(),
                                expected.len()
                            ));
                        }
                    }
                }
            }
        }
        within(Duration::from_secs(1), started)
    })();
    conclude(6, outcome);
}

#[test]
fn acceptance_7_fourier_oracle_corroboration() {
    let started = Instant::now();
    let outcome = (|| -> Result<(), String> {
        let betti = de_rham_betti_oracle(4, 1).map_err(|e| e.to_string())?;
        if betti != BettiVector::from_u64s(&[1, 4, 6, 4, 1]) {
            return Err(format!("de Rham oracle gave {:?}", betti.dims()));
        }
        let (_, pi) = section3_pair();
        for (degree, want) in [(0usize, 1usize), (1, 10)] {
            let est = truncated_lichnerowicz(&pi, degree, &[2, 3], DEFAULT_COLUMN_CAP)
                .map_err(|e| e.to_string())?;
            if est.stabilized != Some(want) {
                return Err(format!(
                    "degree {degree}: stabilized {:?}, wanted {want} (dims {:?})",
                    est.stabilized, est.dims
                ));
            }
        }
        within(Duration::from_secs(300), started)
    })();
    conclude(7, outcome);
}

#[test]
fn acceptance_8_partitionability_gate() {
    let outcome = (|| -> Result<(), String> {
        // both symplectic torus models pass the gate
        for file in ["t4_omega1.json", "t4_omega2.json"] {
            let out = run(&["check-partitionable", &model(file), "--format", "json"]);
            if out.status.code() != Some(0) {
                return Err(format!("{file}: gate exited {:?}", out.status.code()));
            }
            let v: serde_json::Value =
                serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
            if v["partitionable"] != serde_json::json!(true) {
                return Err(format!("{file}: not partitionable"));
            }
        }

        // a synthesized class with b_1 ≠ 0 and c_{1,2} ≠ 0 trips condition (1)
        let arr = Arrangement::torus_model(4, &[0, 1]).map_err(|e| e.to_string())?;
        let one = || Rat::new(BigInt::from(1), BigInt::from(1));
        let dec = ClassDecomposition::new().with_b("Z0", true).with_c(
            "Z0",
            "Z1",
            vec![one(), one(), one(), one()],
        );
        let gate =
            is_partitionable(&dec, &arr, ComponentRule::ClassLevel).map_err(|e| e.to_string())?;
        if gate.partitionable {
            return Err("synthesized violation passed the gate".into());
        }
        if !gate
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Condition1 { .. }))
        {
            return Err(format!("condition (1) not cited: {:?}", gate.violations));
        }

        // the closedness failure exits 2 with a structured report
        let out = run(&[
            "check-partitionable",
            &model("t4_omega3.json"),
            "--format",
            "json",
        ]);
        if out.status.code() != Some(2) {
            return Err(format!("expected exit 2, got {:?}", out.status.code()));
        }
        let v: serde_json::Value =
            serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
        if v["check_failed"] != serde_json::json!(true)
            || v["error"]["kind"] != serde_json::json!("not_closed")
        {
            return Err(format!("unexpected failure report: {v}"));
        }
        Ok(())
    })();
    conclude(8, outcome);
}

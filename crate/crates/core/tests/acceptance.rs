use std::process::Command;
use std::time::{Duration, Instant};

use qmap_core::cli::verify::divisor_identity;
use qmap_core::exactalg::rational::rat;
use qmap_core::exactalg::{MultiSeries, ZLaurent};
use qmap_core::ifunction::{big_i, big_i_operator, euler_free_coefficient, first_difference, small_i, small_i_term};
use qmap_core::mirror::{birkhoff, flatten, p2_counts, quintic_n1};
use qmap_core::oracles::{hypergeom_quintic, schubert_quintic_lines, wdvv_p2};
use qmap_core::target::{validate, GitPresentation, TargetModel};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same_terms(a: &MultiSeries<ZLaurent>, b: &MultiSeries<ZLaurent>) -> Result<usize, String> {
    match first_difference(a, b) {
        None => Ok(a.len()),
        Some(idx) => Err(format!(
            "differ at q^{:?} t^{:?}: {:?} vs {:?}",
            idx.beta,
            idx.m,
            a.get(&idx),
            b.get(&idx)
        )),
    }
}

fn small_i_plane() -> Outcome {
    let p2 = TargetModel::projective(2).map_err(|e| e.to_string())?;
    let ring = p2.ring();
    let got = small_i_term(&p2, &[1], -100).map_err(|e| e.to_string())?;
    let mut want = ZLaurent::zero(ring.rank());
    want.add_term_scaled(-3, &ring.basis_class(0), &rat(1));
    want.add_term_scaled(-4, &ring.basis_class(1), &rat(-3));
    want.add_term_scaled(-5, &ring.basis_class(2), &rat(6));
    ensure(got == want, || format!("I_1 = {got:?}"))?;
    Ok("I_1 = z^-3 - 3H z^-4 + 6H^2 z^-5".into())
}

fn twisted_small_i() -> Outcome {
    let q = TargetModel::bundled("p4_quintic").map_err(|e| e.to_string())?;
    let i = small_i(&q, 4).map_err(|e| e.to_string())?;
    let (i0, i1) = hypergeom_quintic(4);
    for d in 1..=4i64 {
        let e0 = euler_free_coefficient(&i, &[d], 0, 0);
        let e1 = euler_free_coefficient(&i, &[d], -1, 1);
        ensure(e0 == i0[d as usize], || format!("I0 at d={d}: {e0} vs {}", i0[d as usize]))?;
        ensure(e1 == i1[d as usize], || format!("I1 at d={d}: {e1} vs {}", i1[d as usize]))?;
    }
    ensure(i0[1] == rat(120) && i0[2] == rat(113400) && i1[1] == rat(770), || {
        "oracle values drifted".into()
    })?;
    Ok("I0 = 120, 113400, ...; I1(d=1) = 770; d <= 4".into())
}

fn cross_path() -> Outcome {
    let mut notes = Vec::new();
    for (n, d, t) in [(1, 3, 3), (2, 2, 4)] {
        let target = TargetModel::projective(n).map_err(|e| e.to_string())?;
        let a = big_i(&target, d, t).map_err(|e| e.to_string())?;
        let b = big_i_operator(&target, d, t).map_err(|e| e.to_string())?;
        let k = same_terms(&a.series, &b.series)?;
        ensure(k > 0, || "empty series".into())?;
        notes.push(format!("P{n} (D={d},T={t}) {k} terms"));
    }
    Ok(notes.join(", "))
}

fn divisor_axiom() -> Outcome {
    let p2 = TargetModel::projective(2).map_err(|e| e.to_string())?;
    let (lhs, rhs) = divisor_identity(&p2, 3, 3).map_err(|e| e.to_string())?;
    let k = same_terms(&lhs, &rhs)?;
    ensure(k > 0, || "empty series".into())?;
    Ok(format!("{k} terms through (D=3,T=3)"))
}

fn birkhoff_contract() -> Outcome {
    let cases: [(&str, &[(u32, u32)]); 3] = [
        ("p2", &[(1, 1), (2, 2), (2, 3), (3, 2)]),
        ("p1xp1", &[(1, 1), (2, 2), (3, 1)]),
        ("p4_quintic", &[(1, 1), (2, 1), (1, 2)]),
    ];
    let mut runs = 0;
    for (name, truncs) in cases {
        let t = TargetModel::bundled(name).map_err(|e| e.to_string())?;
        for &(d, tdeg) in truncs {
            let out = birkhoff(&big_i(&t, d, tdeg).map_err(|e| e.to_string())?)
                .map_err(|e| format!("{name} ({d},{tdeg}): {e}"))?;
            out.check_contract()
                .map_err(|e| format!("{name} ({d},{tdeg}): {e}"))?;
            flatten(&out)
                .and_then(|f| f.check_contract())
                .map_err(|e| format!("{name} ({d},{tdeg}) flat: {e}"))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} factorizations on P2, P1xP1, quintic"))
}

fn kontsevich() -> Outcome {
    let engine = p2_counts(4).map_err(|e| e.to_string())?;
    let oracle = wdvv_p2(4);
    let want = vec![rat(1), rat(1), rat(12), rat(620)];
    ensure(engine == oracle && oracle == want, || {
        format!("engine {engine:?}, oracle {oracle:?}")
    })?;
    Ok("N = 1, 1, 12, 620 at (D=4,T=11)".into())
}

fn quintic_lines() -> Outcome {
    let engine = quintic_n1().map_err(|e| e.to_string())?;
    let oracle = schubert_quintic_lines().map_err(|e| e.to_string())?;
    ensure(engine == oracle && oracle == rat(2875), || {
        format!("engine {engine}, oracle {oracle}")
    })?;
    Ok("2875".into())
}

fn fano_identity() -> Outcome {
    for n in 1..=4 {
        let t = TargetModel::projective(n).map_err(|e| e.to_string())?;
        let small = small_i(&t, 3).map_err(|e| e.to_string())?;
        for (idx, v) in small.series.terms() {
            if idx.is_zero() {
                continue;
            }
            let top = v.max_exponent().unwrap_or(i32::MIN);
            ensure(top <= -2, || format!("P{n} q^{:?} has z^{top}", idx.beta))?;
        }
        let out = birkhoff(&big_i(&t, 3, 1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        same_terms(&out.j.t_zero_slice(), &small.series).map_err(|e| format!("P{n}: {e}"))?;
        let tau0: Vec<_> = out
            .tau
            .terms()
            .filter(|(idx, _)| idx.insertion_degree() == 0)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        ensure(tau0.is_empty(), || format!("P{n}: mirror map has t = 0 terms"))?;
    }
    Ok("P1..P4 at D=3".into())
}

fn validation_messages() -> Outcome {
    let mut msgs = Vec::new();
    for _ in 0..2 {
        let w = validate(&GitPresentation::new(vec![vec![1], vec![1], vec![2]], vec![rat(1)]))
            .expect_err("P(1,1,2) accepted");
        let e = validate(&GitPresentation::new(vec![vec![1], vec![1], vec![1]], vec![rat(-1)]))
            .expect_err("negative theta accepted");
        ensure(w.code() == "condition-star-violated", || w.to_string())?;
        ensure(e.code() == "empty-quotient", || e.to_string())?;
        msgs.push((w.to_string(), e.to_string()));
    }
    ensure(msgs[0] == msgs[1], || "messages differ between runs".into())?;
    let p2 = GitPresentation::new(vec![vec![1]; 3], vec![rat(1)]);
    ensure(validate(&p2).is_ok(), || "P2 rejected".into())?;
    Ok(format!("{} | {}", msgs[0].0, msgs[0].1))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_qmap"))
            .args(["verify", "--suite", "all"])
            .env_remove("QMAP_CACHE_DIR")
            .output()
            .map_err(|e| e.to_string())
    };
    let a = run()?;
    let b = run()?;
    ensure(a.status.code() == Some(0), || {
        format!("exit {:?}: {}", a.status.code(), String::from_utf8_lossy(&a.stderr))
    })?;
    ensure(a.stdout == b.stdout, || "outputs differ".into())?;
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).map_err(|e| e.to_string())?;
    let n = doc["checks"].as_array().map_or(0, Vec::len);
    Ok(format!("{} bytes, {n} checks, identical", a.stdout.len()))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome, Duration); 10] = [
        (1, "small I of P2", small_i_plane, Duration::from_secs(1)),
        (2, "twisted small I of the quintic", twisted_small_i, Duration::from_secs(5)),
        (3, "shift rule vs operator form", cross_path, Duration::from_secs(30)),
        (4, "divisor identity on P2", divisor_axiom, Duration::from_secs(10)),
        (5, "Birkhoff contract", birkhoff_contract, Duration::from_secs(60)),
        (6, "plane curve counts vs WDVV", kontsevich, Duration::from_secs(300)),
        (7, "lines on the quintic vs Schubert", quintic_lines, Duration::from_secs(60)),
        (8, "Fano I = J", fano_identity, Duration::from_secs(10)),
        (9, "validation messages", validation_messages, Duration::ZERO),
        (10, "verify determinism", determinism, Duration::ZERO),
    ];
    let mut failed = Vec::new();
    for (n, name, f, limit) in criteria {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let res = res.and_then(|detail| {
            if limit > Duration::ZERO && took > limit {
                Err(format!("{detail}; took {took:.2?}, limit {limit:?}"))
            } else {
                Ok(detail)
            }
        });
        match &res {
            Ok(detail) => println!("PASS  criterion {n:>2}  {name}: {detail} [{took:.2?}]"),
            Err(why) => {
                println!("FAIL  criterion {n:>2}  {name}: {why} [{took:.2?}]");
                failed.push(n);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: {} of {} criteria pass", criteria.len(), criteria.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}

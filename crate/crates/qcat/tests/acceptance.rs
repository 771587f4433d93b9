//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so every line is printed; exits nonzero if any criterion fails.

use std::time::Instant;

use qcat::formats::{diff_tables, parse_graph, reference_table, REFERENCE_GRAPH};
use qcat::sweep::{default_workers, run_sweep};
use qcat_core::channel::{ErrorPlacement, NoiseScenario, ScenarioSpace};
use qcat_core::concat::{
    entanglement_fidelity, run_worked_example, standard_probes, ConcatCode, Verifier,
};
use qcat_core::graph_code::{
    build_encoder, build_syndrome_decoder, five_qubit_decoder_phase, generate_syndrome_table,
};
use qcat_core::selfcheck;
use qcat_core::statevec::StateVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FIDELITY_TOL: f64 = 1e-9;
const ROUND_TRIP_TOL: f64 = 1e-10;
const ALGEBRA_TOL: f64 = 1e-10;
const EXAMPLE_INPUTS: usize = 10;
const SEED: u64 = 20240601;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

struct Verdict {
    pass: bool,
    detail: String,
}

fn table_reproduction() -> Verdict {
    let start = Instant::now();
    let built = (|| -> Result<_, qcat_core::Error> {
        let encoder = build_encoder(&parse_graph(REFERENCE_GRAPH).expect("bundled graph"))?;
        let decoder = build_syndrome_decoder(&five_qubit_decoder_phase())?;
        generate_syndrome_table(&encoder, &decoder)
    })();
    let table = match built {
        Ok(t) => t,
        Err(e) => {
            return Verdict {
                pass: false,
                detail: e.to_string(),
            }
        }
    };
    let diffs = diff_tables(&table, &reference_table().expect("bundled table"));
    let bold = table.lookup("0110".parse().unwrap()).unwrap();
    let bold_ok = bold.error.to_string() == "B1" && bold.correction.to_string() == "S5";
    let secs = start.elapsed().as_secs_f64();
    Verdict {
        pass: diffs.is_empty() && bold_ok && secs < 10.0,
        detail: format!(
            "{} of 16 rows differ, 0110 -> {} / {}, {secs:.2} s",
            diffs.len(),
            bold.error,
            bold.correction
        ),
    }
}

fn worked_example(code: &ConcatCode) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 1.0f64;
    let mut failures = Vec::new();
    for i in 0..EXAMPLE_INPUTS {
        let x = StateVector::random(1, &mut rng).unwrap();
        match run_worked_example(code, &x, FIDELITY_TOL) {
            Ok(t) => worst = worst.min(t.fidelity),
            Err(e) => failures.push(format!("input {i}: {e}")),
        }
    }
    Verdict {
        pass: failures.is_empty(),
        detail: format!(
            "{}/{EXAMPLE_INPUTS} inputs give syndrome 0110 and fidelity >= 1-{FIDELITY_TOL:e}; min fidelity {worst:.12}{}",
            EXAMPLE_INPUTS - failures.len(),
            failures.first().map(|f| format!("; {f}")).unwrap_or_default()
        ),
    }
}

fn sweep(
    verifier: &Verifier,
    t: usize,
    s: usize,
    placement: ErrorPlacement,
    expected_total: usize,
) -> Verdict {
    let space = ScenarioSpace::new(t, s, placement, false).unwrap();
    let report = run_sweep(verifier, &space, FIDELITY_TOL, default_workers()).unwrap();
    let mut detail = format!(
        "{}/{} pass (expected {expected_total}), min fidelity {:.3e}, {:.1} s",
        report.asserted_passed,
        report.asserted_total,
        report.min_fidelity,
        report.wall_time.unwrap_or(0.0)
    );
    if let Some(f) = report.failures.first() {
        detail.push_str(&format!(
            "; first failure #{} {} syndrome={}",
            f.index,
            f.scenario,
            f.syndrome
                .map(|s| s.to_string())
                .unwrap_or_else(|| "-".into())
        ));
    }
    Verdict {
        pass: report.total == expected_total
            && report.asserted_total == expected_total
            && report.all_asserted_pass(),
        detail,
    }
}

fn algebra(code: &ConcatCode) -> Verdict {
    let lines = selfcheck::run(code, &mut ChaCha8Rng::seed_from_u64(SEED)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut round_trip_dev = 0.0f64;
    for _ in 0..20 {
        let x = StateVector::random(1, &mut rng).unwrap();
        let (_, f) = code.run(&x, &NoiseScenario::default()).unwrap();
        round_trip_dev = round_trip_dev.max(1.0 - f);
    }
    let bad: Vec<String> = lines
        .iter()
        .filter(|l| l.max_deviation > ALGEBRA_TOL)
        .map(|l| l.to_string())
        .collect();
    let worst = lines.iter().map(|l| l.max_deviation).fold(0.0, f64::max);
    Verdict {
        pass: bad.is_empty() && round_trip_dev <= ROUND_TRIP_TOL,
        detail: format!(
            "{} checks, worst deviation {worst:.1e}, 20 round trips worst 1-F {round_trip_dev:.1e}{}",
            lines.len(),
            if bad.is_empty() { String::new() } else { format!("; {}", bad.join(", ")) }
        ),
    }
}

fn entanglement(code: &ConcatCode) -> Verdict {
    let space = ScenarioSpace::new(2, 0, ErrorPlacement::Unconstrained, false).unwrap();
    let erasures = space.scenarios();
    let mut cases = vec![NoiseScenario::default(), NoiseScenario::reference()];
    cases.extend(erasures.into_iter().step_by(97));
    let mut worst = 1.0f64;
    let mut failed = Vec::new();
    for sc in &cases {
        match entanglement_fidelity(code, sc) {
            Ok(f) => {
                worst = worst.min(f);
                if f < 1.0 - FIDELITY_TOL {
                    failed.push(sc.to_string());
                }
            }
            Err(e) => failed.push(format!("{sc}: {e}")),
        }
    }
    Verdict {
        pass: failed.is_empty(),
        detail: format!("{} scenarios, min joint fidelity {worst:.12}", cases.len()),
    }
}

fn main() {
    let code = ConcatCode::standard().expect("standard code");
    let verifier = Verifier::new(code.clone(), standard_probes()).unwrap();
    let criteria: Vec<Criterion> = vec![
        (
            "1 syndrome table reproduction",
            Box::new(table_reproduction),
        ),
        ("2 worked example", Box::new(|| worked_example(&code))),
        (
            "3 two erasures, no error (675)",
            Box::new(|| sweep(&verifier, 2, 0, ErrorPlacement::Unconstrained, 675)),
        ),
        (
            "4 two erasures + error in undamaged block (10125)",
            Box::new(|| sweep(&verifier, 2, 1, ErrorPlacement::UndamagedBlock, 10125)),
        ),
        (
            "5 single error, no erasure (45)",
            Box::new(|| sweep(&verifier, 0, 1, ErrorPlacement::UndamagedBlock, 45)),
        ),
        ("6 algebraic properties", Box::new(|| algebra(&code))),
        (
            "7 entanglement preservation",
            Box::new(|| entanglement(&code)),
        ),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let v = check();
        failed += !v.pass as usize;
        println!(
            "{} criterion {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

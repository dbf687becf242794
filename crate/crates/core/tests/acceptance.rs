//! One line per acceptance criterion; exits non-zero if any fails.
//! Tolerances and time limits are pinned here, not read from configuration.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::suites::{self, all_strings};
use common::{example1, glocal5};
use qcrit_core::bounds::{bound_for_partition, criteria_report, quantum_bounds};
use qcrit_core::graph::{build_graph, Relation};
use qcrit_core::oracle::{maximize_q_global, verify_bound, SATURATION_TOL, SOUNDNESS_TOL};
use qcrit_core::states::{common_eigenstate, evaluate_q, expectation, named_state, NamedState};
use qcrit_core::{OperatorSet, OracleConfig, Partition, PauliString};

const ATTAIN_CLIQUE_TOL: f64 = 1e-8;
const ATTAIN_GHZ_TOL: f64 = 1e-10;
const GLOBAL_TOL: f64 = 1e-3;
const SMOLIN_TOL: f64 = 1e-10;

type Check = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Check);

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    match (out, limit) {
        (Err(e), _) => Err(format!("{e} [{took:.2?}]")),
        (Ok(msg), Some(limit)) if took >= limit => {
            Err(format!("{msg}, but took {took:.2?} (limit {limit:?})"))
        }
        (Ok(msg), _) => Ok(format!("{msg} [{took:.2?}]")),
    }
}

fn criterion_1() -> Check {
    timed(Some(Duration::from_secs(1)), || {
        let r = criteria_report(&example1()).map_err(|e| e.to_string())?;
        let got = (
            r.class_bound("full_separability"),
            r.class_bound("any_bipartition"),
            r.quantum_lower,
        );
        let msg = format!(
            "full={:?} any_bipartition={:?} quantum_lower={}",
            got.0, got.1, got.2
        );
        if got == (Some(1), Some(2), 4) {
            Ok(msg)
        } else {
            Err(format!("{msg}; want 1, 2, 4"))
        }
    })
}

fn criterion_2() -> Check {
    timed(None, || {
        let sigma = example1();
        let g = build_graph(
            &sigma,
            &Partition::trivial(3).unwrap(),
            Relation::Anticommute,
        )
        .map_err(|e| e.to_string())?;
        let degrees: BTreeSet<usize> = (0..g.vertex_count()).map(|i| g.degree(i)).collect();
        let msg = format!(
            "{} vertices, {} edges, degrees {:?}",
            g.vertex_count(),
            g.edge_count(),
            degrees
        );
        if g.vertex_count() == 8 && g.edge_count() == 16 && degrees == BTreeSet::from([4]) {
            Ok(msg)
        } else {
            Err(format!("{msg}; want 8, 16, {{4}}"))
        }
    })
}

fn criterion_3() -> Check {
    timed(Some(Duration::from_secs(5)), || {
        let sigma = glocal5();
        let bound = |text: &str| -> Result<usize, String> {
            let p = Partition::parse(text, 5).map_err(|e| e.to_string())?;
            Ok(bound_for_partition(&sigma, &p)
                .map_err(|e| e.to_string())?
                .bound)
        };
        let r = criteria_report(&sigma).map_err(|e| e.to_string())?;
        let witness: BTreeSet<PauliString> = r.quantum_lower_witness.iter().copied().collect();
        let want_witness: BTreeSet<PauliString> = ["zxxz1", "xxz1z", "xz1zx", "z1zxx", "1zxxz"]
            .iter()
            .map(|t| t.parse().unwrap())
            .collect();
        let got = [
            ("finest", bound("A|B|C|D|E")?, 1),
            ("1|4", bound("A|BCDE")?, 3),
            ("adjacent 2|3", bound("AB|CDE")?, 2),
            ("non-adjacent 2|3", bound("AC|BDE")?, 2),
            (
                "any_bipartition",
                r.class_bound("any_bipartition").unwrap_or(0),
                3,
            ),
            ("quantum_lower", r.quantum_lower, 5),
        ];
        let mut wrong: Vec<String> = got
            .iter()
            .filter(|(_, g, w)| g != w)
            .map(|(k, g, w)| format!("{k}={g} (want {w})"))
            .collect();
        if witness != want_witness {
            wrong.push(format!(
                "quantum_lower witness {:?}",
                r.quantum_lower_witness
            ));
        }
        let msg = got
            .iter()
            .map(|(k, g, _)| format!("{k}={g}"))
            .collect::<Vec<_>>()
            .join(" ");
        if wrong.is_empty() {
            Ok(msg)
        } else {
            Err(wrong.join(", "))
        }
    })
}

fn criterion_4() -> Check {
    timed(None, || {
        let sigma = glocal5();
        let clique = quantum_bounds(&sigma, false)
            .map_err(|e| e.to_string())?
            .lower_witness;
        let state = common_eigenstate(&clique).map_err(|e| e.to_string())?;
        let q_clique = evaluate_q(&state, &sigma).map_err(|e| e.to_string())?.value;
        let ghz = named_state(&NamedState::Ghz, 3).map_err(|e| e.to_string())?;
        let q_ghz = evaluate_q(&ghz, &example1())
            .map_err(|e| e.to_string())?
            .value;
        let msg = format!("clique eigenstate Q={q_clique:.12}, GHZ3 Q={q_ghz:.12}");
        if (q_clique - 5.0).abs() <= ATTAIN_CLIQUE_TOL && (q_ghz - 4.0).abs() <= ATTAIN_GHZ_TOL {
            Ok(msg)
        } else {
            Err(msg)
        }
    })
}

fn verify_all(
    sigma: &OperatorSet,
    cfg: &OracleConfig,
    rows: &mut Vec<String>,
) -> Result<bool, String> {
    let report = criteria_report(sigma).map_err(|e| e.to_string())?;
    let mut ok = true;
    for p in report.orbit_representatives() {
        let v = verify_bound(sigma, &p, cfg).map_err(|e| e.to_string())?;
        ok &= v.gap <= SATURATION_TOL && !v.violation;
        rows.push(format!(
            "{}:{}/{:.6}",
            v.partition, v.graph_bound, v.oracle_value
        ));
    }
    Ok(ok)
}

fn criterion_5() -> Check {
    timed(Some(Duration::from_secs(60)), || {
        let cfg = OracleConfig::default();
        let mut rows = Vec::new();
        let ok =
            verify_all(&example1(), &cfg, &mut rows)? & verify_all(&glocal5(), &cfg, &mut rows)?;
        let msg = rows.join(" ");
        if ok {
            Ok(msg)
        } else {
            Err(msg)
        }
    })
}

fn criterion_6() -> Check {
    timed(Some(Duration::from_secs(60)), || {
        let r =
            maximize_q_global(&glocal5(), &OracleConfig::default()).map_err(|e| e.to_string())?;
        let exceeded = r
            .history
            .iter()
            .chain([&r.best_value])
            .any(|&q| q > 5.0 + SOUNDNESS_TOL);
        let msg = format!("global max {:.9}", r.best_value);
        if (r.best_value - 5.0).abs() <= GLOBAL_TOL && !exceeded {
            Ok(msg)
        } else {
            Err(msg)
        }
    })
}

fn criterion_7() -> Check {
    timed(None, || {
        let runs: [(&str, suites::Outcome); 6] = [
            (
                "anticommuting families x200",
                suites::anticommuting_families(200),
            ),
            ("unit combinations x100", suites::unit_combinations(100)),
            ("mixtures 100x11", suites::mixtures(100)),
            ("cut-product states x200", suites::cut_product_states(200)),
            (
                "duality/refinement x500",
                suites::duality_and_refinement(500),
            ),
            ("symplectic vs matrix", suites::symplectic_vs_matrix(500)),
        ];
        let failed: Vec<String> = runs
            .iter()
            .filter_map(|(k, r)| r.as_ref().err().map(|e| format!("{k}: {e}")))
            .collect();
        if failed.is_empty() {
            Ok(runs.iter().map(|(k, _)| *k).collect::<Vec<_>>().join(", "))
        } else {
            Err(failed.join("; "))
        }
    })
}

fn criterion_8() -> Check {
    timed(None, || {
        let smolin = named_state(&NamedState::Smolin, 4).map_err(|e| e.to_string())?;
        let mut checked = 0;
        let mut worst = 0.0f64;
        for p in all_strings(4)
            .into_iter()
            .filter(|p| (1..=3).contains(&p.weight()))
        {
            worst = worst.max(expectation(&smolin, &p).map_err(|e| e.to_string())?.abs());
            checked += 1;
        }
        let msg = format!("{checked} strings, max |<s>| = {worst:.1e}");
        if worst < SMOLIN_TOL {
            Ok(msg)
        } else {
            Err(msg)
        }
    })
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "small example bounds", criterion_1),
        (2, "small example graph shape", criterion_2),
        (3, "five-qubit example bounds", criterion_3),
        (4, "bound attainment", criterion_4),
        (5, "oracle saturation", criterion_5),
        (6, "global maximum", criterion_6),
        (7, "property suites", criterion_7),
        (8, "Smolin marginals", criterion_8),
    ];
    let mut failures = 0;
    for (n, name, check) in criteria {
        match check() {
            Ok(msg) => println!("PASS criterion {n} ({name}): {msg}"),
            Err(msg) => {
                failures += 1;
                println!("FAIL criterion {n} ({name}): {msg}");
            }
        }
    }
    println!("SKIP criterion 9: external violation factor excluded; covered by criteria 5 and 6");
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}

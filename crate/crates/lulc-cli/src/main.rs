//! Command line for the counterexample pipeline.
//!
//! Exit codes are the only success/failure channel:
//!   paper-check: 0 confirmed, 3 internal inconsistency
//!   verify:      0 verified counterexample, 1 not a counterexample, 2 bad input
//!   forge:       0 written, 1 budget exhausted, 2 bad flags
//!   lc-check:    0 equivalent, 1 inequivalent, 2 I/O, 4 undecided
//!   graphs:      0 done, 2 I/O

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use lulc::forge::{self, published_instance};
use lulc::instance::InstanceFile;
use lulc::phase::PhaseAssignment;
use lulc::solver::{build_mod4_system, phase_violation, solve_mod4, SolveOutcome};
use lulc::stab::{lc_decide, to_graph_state, tableau_from_instance, Graph, LcOptions, StabError, SupportState};

#[derive(Parser)]
#[command(name = "lulc", version, about = "Forge and verify LU-but-not-LC counterexample instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Re-verify the built-in published 27-position instance end to end.
    PaperCheck {
        /// Emit a machine-readable report.
        #[arg(long)]
        json: bool,
    },
    /// Verify an instance file: witness phases plus mod-4 refutation.
    Verify {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Randomized search for a fresh verified counterexample.
    Forge {
        /// Subspace rank; only 6 is supported (5 and below admit none).
        #[arg(long, default_value_t = 6)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "max-iters", default_value_t = 100_000)]
        max_iters: u64,
        /// Output instance file.
        #[arg(long, default_value = "counterexample.json")]
        out: PathBuf,
        /// Sequential reference mode: identical output for identical seeds.
        #[arg(long)]
        deterministic: bool,
        /// Racing workers in parallel mode.
        #[arg(long, default_value_t = 4)]
        workers: usize,
        #[arg(long)]
        json: bool,
    },
    /// Decide local-Clifford equivalence of two graph files.
    LcCheck { graph1: PathBuf, graph2: PathBuf },
    /// Convert an instance to its two graph states and compare them.
    Graphs {
        path: PathBuf,
        /// Prefix for the exported DOT/JSON graph files.
        #[arg(long, default_value = "graphs")]
        out_prefix: String,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::PaperCheck { json } => cmd_paper_check(json),
        Command::Verify { path, json } => cmd_verify(&path, json),
        Command::Forge { d, seed, max_iters, out, deterministic, workers, json } => {
            cmd_forge(d, seed, max_iters, &out, deterministic, workers, json)
        }
        Command::LcCheck { graph1, graph2 } => cmd_lc_check(&graph1, &graph2),
        Command::Graphs { path, out_prefix, json } => cmd_graphs(&path, &out_prefix, json),
    };
    ExitCode::from(code)
}

/// Test hook: `LULC_TAMPER_EXPONENT=<j>` perturbs exponent j of the
/// built-in witness so the downstream consistency machinery must notice.
fn tampered_witness(w: &PhaseAssignment) -> PhaseAssignment {
    let Ok(var) = std::env::var("LULC_TAMPER_EXPONENT") else {
        return w.clone();
    };
    let idx: usize = var.parse().expect("LULC_TAMPER_EXPONENT must be an index");
    let mut e = w.octal().expect("built-in witness is octal");
    e[idx] = (e[idx] + 2) % 8;
    PhaseAssignment::from_octal(&e)
}

fn cmd_paper_check(json: bool) -> u8 {
    let started = Instant::now();
    let (inst, witness) = published_instance();
    let witness = tampered_witness(&witness);

    let mut stages: Vec<(&str, bool, String)> = Vec::new();
    let mut ok = true;

    // 1. the 64 octal congruences Σ e_j x_j ≡ 4 Q(x) (mod 8)
    let phase_ok = matches!(phase_violation(&inst, &witness), Ok(None));
    ok &= phase_ok;
    stages.push((
        "phase-identity",
        phase_ok,
        format!("{} congruences over the span", 1u64 << inst.rank()),
    ));

    // 2. mod-4 refutation with replayable certificate
    let sys = build_mod4_system(&inst).expect("built-in instance is in range");
    let (mod4_ok, cert_info, combination) = match solve_mod4(&sys) {
        SolveOutcome::Contradiction(cert) => {
            let replay = cert.replay(&sys);
            (
                replay,
                format!("derived 0 ≡ {} (mod 4), replay {}", cert.rhs, if replay { "ok" } else { "FAILED" }),
                Some(cert.combination.clone()),
            )
        }
        SolveOutcome::Solution(_) => (false, "system unexpectedly solvable".into(), None),
    };
    ok &= mod4_ok;
    stages.push(("mod4-refutation", mod4_ok, cert_info));

    // 3. tableaux stabilize the two superpositions
    let tableaux = (|| -> Result<_, StabError> {
        let plain = tableau_from_instance(&inst, false)?;
        let phased = tableau_from_instance(&inst, true)?;
        let sp = SupportState::from_instance(&inst, false);
        let sq = SupportState::from_instance(&inst, true);
        let stabilized = sp.stabilized_by(&plain) && sq.stabilized_by(&phased);
        Ok((plain, phased, stabilized))
    })();
    let graphs_stage: Option<(Graph, Graph)> = match tableaux {
        Ok((plain, phased, tab_ok)) => {
            ok &= tab_ok;
            stages.push(("tableaux", tab_ok, "support action verified on 64 amplitudes".into()));
            match (to_graph_state(&plain), to_graph_state(&phased)) {
                (Ok((g_s, l_s)), Ok((g_qs, l_qs))) => {
                    let certified = l_s.apply(&g_s.tableau()).is_ok_and(|t| t.same_group(&plain))
                        && l_qs.apply(&g_qs.tableau()).is_ok_and(|t| t.same_group(&phased));
                    ok &= certified;
                    let diff = g_s.edge_difference(&g_qs);
                    stages.push((
                        "graph-conversion",
                        certified,
                        format!(
                            "G_S {} edges, G_QS {} edges, differ in {} edge{}",
                            g_s.edge_count(),
                            g_qs.edge_count(),
                            diff,
                            if diff == 1 { "" } else { "s" }
                        ),
                    ));
                    Some((g_s, g_qs))
                }
                _ => {
                    ok = false;
                    stages.push(("graph-conversion", false, "conversion failed".into()));
                    None
                }
            }
        }
        Err(err) => {
            ok = false;
            stages.push(("tableaux", false, err.to_string()));
            None
        }
    };

    // 4. the two graph states must not be LC equivalent
    let mut lc_equivalent = None;
    if let Some((g_s, g_qs)) = &graphs_stage {
        match lc_decide(g_s, g_qs, LcOptions::default()) {
            Ok(None) => {
                lc_equivalent = Some(false);
                stages.push(("lc-decision", true, "graphs are NOT LC equivalent".into()));
            }
            Ok(Some(_)) => {
                ok = false;
                lc_equivalent = Some(true);
                stages.push(("lc-decision", false, "graphs unexpectedly LC equivalent".into()));
            }
            Err(err) => {
                ok = false;
                stages.push(("lc-decision", false, format!("undecided: {err}")));
            }
        }
    } else {
        ok = false;
    }

    let elapsed = started.elapsed();
    if json {
        let report = json!({
            "instance": {"n": inst.n(), "d": inst.rank(), "quadratic_terms": inst.form().edges().len()},
            "stages": stages.iter().map(|(name, ok, detail)| {
                json!({"stage": name, "ok": ok, "detail": detail})
            }).collect::<Vec<_>>(),
            "mod4_combination": combination,
            "lc_equivalent": lc_equivalent,
            "confirmed": ok,
            "elapsed_ms": elapsed.as_millis() as u64,
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        println!("published instance: n = {}, d = {}, {} quadratic terms", inst.n(), inst.rank(), inst.form().edges().len());
        for (name, ok, detail) in &stages {
            println!("  [{}] {name}: {detail}", if *ok { "ok" } else { "FAIL" });
        }
        println!(
            "{} in {:.1?}",
            if ok { "counterexample confirmed" } else { "INTERNAL INCONSISTENCY" },
            elapsed
        );
    }
    if ok {
        0
    } else {
        3
    }
}

fn read_instance(path: &Path) -> Result<InstanceFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    InstanceFile::from_json(&text).map_err(|e| format!("malformed instance file: {e}"))
}

fn cmd_verify(path: &Path, json: bool) -> u8 {
    let file = match read_instance(path) {
        Ok(f) => f,
        Err(msg) => {
            eprintln!("{msg}");
            return 2;
        }
    };
    let (inst, witness) = match file.to_instance() {
        Ok(pair) => pair,
        Err(err) => {
            eprintln!("invalid instance: {err}");
            return 2;
        }
    };

    let mut failed_stage: Option<(&str, String)> = None;
    let mut fourth_root: Option<Vec<i64>> = None;

    match &witness {
        None => {
            failed_stage = Some(("witness", "no phase exponents in the file; nothing certifies LU equivalence".into()));
        }
        Some(w) => match phase_violation(&inst, w) {
            Ok(None) => {}
            Ok(Some((h, _))) => {
                failed_stage = Some(("witness", format!("phase identity fails at span point h = {h}")));
            }
            Err(err) => {
                eprintln!("invalid instance: {err}");
                return 2;
            }
        },
    }

    let sys = match build_mod4_system(&inst) {
        Ok(sys) => sys,
        Err(err) => {
            eprintln!("invalid instance: {err}");
            return 2;
        }
    };
    let contradiction = match solve_mod4(&sys) {
        SolveOutcome::Contradiction(cert) => {
            assert!(cert.replay(&sys), "certificate must replay");
            Some(cert)
        }
        SolveOutcome::Solution(x) => {
            fourth_root = Some(x.iter().map(|&v| i64::from(v)).collect());
            if failed_stage.is_none() {
                failed_stage = Some(("mod4", "a fourth-root phase assignment exists".into()));
            }
            None
        }
    };

    let verified = failed_stage.is_none() && contradiction.is_some();
    if json {
        let report = json!({
            "n": inst.n(),
            "d": inst.rank(),
            "verified_counterexample": verified,
            "failed_stage": failed_stage.as_ref().map(|(s, m)| json!({"stage": s, "message": m})),
            "fourth_root_solution": fourth_root,
            "mod4_contradiction": contradiction.as_ref().map(|c| json!({"rhs": c.rhs, "combination": c.combination})),
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else if verified {
        let cert = contradiction.as_ref().expect("verified implies certificate");
        println!("verified counterexample: n = {}, d = {}", inst.n(), inst.rank());
        println!("  witness phases verified on all {} span elements", 1u64 << inst.rank());
        println!("  mod-4 elimination derives 0 ≡ {} (mod 4); replay ok", cert.rhs);
    } else {
        let (stage, msg) = failed_stage.as_ref().expect("not verified implies a failed stage");
        println!("not a counterexample (stage `{stage}`): {msg}");
        if let Some(x) = &fourth_root {
            println!(
                "  fourth-root solution: r = [{}]",
                x.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
            );
        }
    }
    if verified {
        0
    } else {
        1
    }
}

fn cmd_forge(
    d: usize,
    seed: u64,
    max_iters: u64,
    out: &Path,
    deterministic: bool,
    workers: usize,
    json: bool,
) -> u8 {
    let started = Instant::now();
    let result = if deterministic || workers <= 1 {
        forge::search(d, seed, max_iters)
    } else {
        forge::search_parallel(d, seed, max_iters, workers)
    };
    let hit = match result {
        Ok(hit) => hit,
        Err(err) => {
            eprintln!("error: {err}");
            return 2;
        }
    };
    let Some(hit) = hit else {
        eprintln!("no counterexample within {max_iters} iterations (seed {seed})");
        return 1;
    };
    let file = InstanceFile::from_instance(&hit.candidate.instance, Some(&hit.candidate.witness));
    if let Err(err) = std::fs::write(out, file.to_json()) {
        eprintln!("cannot write {}: {err}", out.display());
        return 2;
    }
    let elapsed = started.elapsed();
    if json {
        let report = json!({
            "seed": seed,
            "deterministic": deterministic || workers <= 1,
            "iteration": hit.iteration,
            "n": hit.candidate.instance.n(),
            "d": hit.candidate.d,
            "out": out.display().to_string(),
            "elapsed_ms": elapsed.as_millis() as u64,
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        println!(
            "verified counterexample with n = {} (seed {seed}, iteration {}, {:.1?})",
            hit.candidate.instance.n(),
            hit.iteration,
            elapsed
        );
        println!("written to {}", out.display());
    }
    0
}

fn read_graph(path: &Path) -> Result<Graph, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Graph::from_json(&text).map_err(|e| format!("malformed graph file: {e}"))
}

fn cmd_lc_check(p1: &Path, p2: &Path) -> u8 {
    let (g1, g2) = match (read_graph(p1), read_graph(p2)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(msg), _) | (_, Err(msg)) => {
            eprintln!("{msg}");
            return 2;
        }
    };
    if g1.n() != g2.n() {
        eprintln!("graphs have different vertex counts: {} vs {}", g1.n(), g2.n());
        return 2;
    }
    match lc_decide(&g1, &g2, LcOptions::default()) {
        Ok(Some(layer)) => {
            println!("LC equivalent; certifying layer:");
            println!("  {layer}");
            0
        }
        Ok(None) => {
            println!("not LC equivalent");
            1
        }
        Err(StabError::SearchOverflow { explored }) => {
            println!("undecided: search overflow after {explored} nodes");
            4
        }
        Err(err) => {
            eprintln!("{err}");
            2
        }
    }
}

fn cmd_graphs(path: &Path, out_prefix: &str, json: bool) -> u8 {
    let file = match read_instance(path) {
        Ok(f) => f,
        Err(msg) => {
            eprintln!("{msg}");
            return 2;
        }
    };
    let (inst, _) = match file.to_instance() {
        Ok(pair) => pair,
        Err(err) => {
            eprintln!("invalid instance: {err}");
            return 2;
        }
    };
    let convert = |phased: bool| -> Result<Graph, StabError> {
        let t = tableau_from_instance(&inst, phased)?;
        Ok(to_graph_state(&t)?.0)
    };
    let (g_s, g_qs) = match (convert(false), convert(true)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(err), _) | (_, Err(err)) => {
            eprintln!("conversion failed: {err}");
            return 2;
        }
    };
    let outputs = [
        (format!("{out_prefix}_gs.json"), g_s.to_json()),
        (format!("{out_prefix}_gs.dot"), g_s.to_dot("G_S")),
        (format!("{out_prefix}_gqs.json"), g_qs.to_json()),
        (format!("{out_prefix}_gqs.dot"), g_qs.to_dot("G_QS")),
    ];
    for (name, content) in &outputs {
        if let Err(err) = std::fs::write(name, content) {
            eprintln!("cannot write {name}: {err}");
            return 2;
        }
    }
    let diff = g_s.edge_difference(&g_qs);
    let verdict = match lc_decide(&g_s, &g_qs, LcOptions::default()) {
        Ok(Some(_)) => "equivalent",
        Ok(None) => "not LC equivalent",
        Err(StabError::SearchOverflow { .. }) => "undecided",
        Err(err) => {
            eprintln!("{err}");
            return 2;
        }
    };
    if json {
        let report = json!({
            "g_s": {"edges": g_s.edge_count(), "file": format!("{out_prefix}_gs.json")},
            "g_qs": {"edges": g_qs.edge_count(), "file": format!("{out_prefix}_gqs.json")},
            "edge_difference": diff,
            "lc_verdict": verdict,
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        println!("G_S: {} edges -> {out_prefix}_gs.[json|dot]", g_s.edge_count());
        println!("G_QS: {} edges -> {out_prefix}_gqs.[json|dot]", g_qs.edge_count());
        println!("graphs differ in {diff} edge(s); {verdict}");
    }
    0
}


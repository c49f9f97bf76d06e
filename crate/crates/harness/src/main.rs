//! Command-line front end: replay traces against a structure with checking,
//! generate trace corpora, and measure update-cost scaling.

use std::collections::HashMap;
use std::process::ExitCode;

use dygraph::hopdist::CountingMode;
use dygraph_harness::bench::hdist_update_scaling;
use dygraph_harness::gen::{gen_trace, GenConfig, Profile, QueryKind};
use dygraph_harness::run::{run_trace, RunConfig, StructureKind};
use dygraph_harness::trace::Trace;

const USAGE: &str = "\
usage:
  dygraph run --structure {hdist|sssp|apsp|tc} --trace FILE [--check]
              [--mode {det|rand}] [--seed S] [--params k=v,...] [--fault-inject]
              [--per-event]
  dygraph gen --profile {uniform|delete-heavy|phase-aligned|hub} --n N --steps K
              [--seed S] [--density F] [--query-mix F] [--structure KIND]
              [--delta D] -o FILE
  dygraph bench --structure hdist [--sizes 32,64,128] [--h H] [--repeat R] [--seed S]

run exits 0 iff the replay produced zero mismatches (and, in randomized mode,
zero logged collisions).
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match args.first().map(String::as_str) {
        Some("run") => cmd_run(&args[1..]),
        Some("gen") => cmd_gen(&args[1..]),
        Some("bench") => cmd_bench(&args[1..]),
        _ => {
            eprint!("{USAGE}");
            ExitCode::from(2)
        }
    }
}

fn parse_flags(args: &[String]) -> Result<HashMap<String, String>, String> {
    let mut out = HashMap::new();
    let mut i = 0;
    while i < args.len() {
        let key = args[i]
            .strip_prefix("--")
            .or_else(|| args[i].strip_prefix('-'))
            .ok_or_else(|| format!("unexpected argument '{}'", args[i]))?;
        if matches!(key, "check" | "fault-inject" | "per-event") {
            out.insert(key.to_string(), "1".to_string());
            i += 1;
        } else {
            let val = args.get(i + 1).ok_or_else(|| format!("flag --{key} needs a value"))?;
            out.insert(key.to_string(), val.clone());
            i += 2;
        }
    }
    Ok(out)
}

fn mode_from(flags: &HashMap<String, String>) -> Result<CountingMode, String> {
    let seed: u64 =
        flags.get("seed").map(|s| s.parse()).transpose().map_err(|_| "bad --seed")?.unwrap_or(0);
    match flags.get("mode").map(String::as_str) {
        None | Some("det") => Ok(CountingMode::Deterministic),
        Some("rand") => Ok(CountingMode::Randomized { seed }),
        Some(other) => Err(format!("unknown mode '{other}'")),
    }
}

fn fail(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn cmd_run(args: &[String]) -> ExitCode {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    let Some(structure) = flags.get("structure").and_then(|s| StructureKind::parse(s)) else {
        return fail("--structure must be one of hdist, sssp, apsp, tc");
    };
    let Some(path) = flags.get("trace") else {
        return fail("--trace FILE is required");
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(&format!("cannot read {path}: {e}")),
    };
    let trace = match Trace::parse(&text) {
        Ok(t) => t,
        Err(e) => return fail(&format!("bad trace: {e}")),
    };
    let mode = match mode_from(&flags) {
        Ok(m) => m,
        Err(e) => return fail(&e),
    };
    let mut cfg = RunConfig::new(structure, mode);
    cfg.check = flags.contains_key("check");
    cfg.fault_inject = flags.contains_key("fault-inject");
    if let Some(params) = flags.get("params") {
        for pair in params.split(',').filter(|p| !p.is_empty()) {
            match pair.split_once('=') {
                Some((k, v)) => {
                    cfg.params.insert(k.trim().to_string(), v.trim().to_string());
                }
                None => return fail(&format!("bad --params entry '{pair}'")),
            }
        }
    }
    let report = match run_trace(&trace, &cfg) {
        Ok(r) => r,
        Err(e) => return fail(&e.to_string()),
    };
    if flags.contains_key("per-event") {
        println!("event	ok	ring_muls	rollover");
        for o in &report.outcomes {
            println!(
                "{}	{}	{}	{}",
                o.index,
                if o.ok { "ok" } else { "mismatch" },
                o.ring_muls,
                if o.rollover { "*" } else { "" }
            );
        }
    }
    for outcome in report.outcomes.iter().filter(|o| !o.ok) {
        println!(
            "event {}\tMISMATCH\t{}",
            outcome.index,
            outcome.detail.as_deref().unwrap_or("")
        );
    }
    for c in &report.collisions {
        println!("collision\t{c}");
    }
    println!("{}", report.summary());
    if report.passed() {
        println!("result: ok");
        ExitCode::SUCCESS
    } else {
        println!("result: FAILED");
        ExitCode::FAILURE
    }
}

fn cmd_gen(args: &[String]) -> ExitCode {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    let Some(profile) = flags.get("profile").and_then(|s| Profile::parse(s)) else {
        return fail("--profile must be uniform, delete-heavy, phase-aligned or hub");
    };
    let (Some(n), Some(steps)) = (
        flags.get("n").and_then(|v| v.parse::<usize>().ok()),
        flags.get("steps").and_then(|v| v.parse::<usize>().ok()),
    ) else {
        return fail("--n and --steps are required integers");
    };
    let Some(out_path) = flags.get("o") else {
        return fail("-o FILE is required");
    };
    let seed = flags.get("seed").and_then(|v| v.parse().ok()).unwrap_or(0);
    let mut cfg = GenConfig::new(n, steps, seed, profile);
    if let Some(d) = flags.get("density").and_then(|v| v.parse().ok()) {
        cfg.density = d;
    }
    if let Some(q) = flags.get("query-mix").and_then(|v| v.parse().ok()) {
        cfg.query_mix = q;
    }
    if let Some(d) = flags.get("delta").and_then(|v| v.parse().ok()) {
        cfg.delta = d;
    }
    match flags.get("structure").map(String::as_str) {
        Some("apsp") => {
            cfg.vertex_events = true;
            cfg.queries = vec![QueryKind::Dist, QueryKind::Path, QueryKind::Trees];
        }
        Some("tc") => {
            cfg.vertex_events = true;
            cfg.queries = vec![QueryKind::Closure, QueryKind::Path];
        }
        Some("hdist") => cfg.queries = vec![QueryKind::Dist],
        _ => cfg.queries = vec![QueryKind::Sssp],
    }
    let trace = gen_trace(&cfg);
    let mut text = format!("# profile: {} seed: {seed}\n", profile.name());
    text.push_str(&trace.format());
    if let Err(e) = std::fs::write(out_path, text) {
        return fail(&format!("cannot write {out_path}: {e}"));
    }
    println!("wrote {} events to {out_path}", trace.events.len());
    ExitCode::SUCCESS
}

fn cmd_bench(args: &[String]) -> ExitCode {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    match flags.get("structure").map(String::as_str) {
        Some("hdist") | None => {}
        Some(other) => return fail(&format!("bench currently profiles hdist, not {other}")),
    }
    let sizes: Vec<usize> = flags
        .get("sizes")
        .map(String::as_str)
        .unwrap_or("32,64,128")
        .split(',')
        .filter_map(|s| s.trim().parse().ok())
        .collect();
    if sizes.is_empty() {
        return fail("--sizes must list at least one integer");
    }
    let h = flags.get("h").and_then(|v| v.parse().ok()).unwrap_or(4);
    let repeat = flags.get("repeat").and_then(|v| v.parse().ok()).unwrap_or(30);
    let seed = flags.get("seed").and_then(|v| v.parse().ok()).unwrap_or(0);
    let report = hdist_update_scaling(&sizes, h, repeat, seed);
    print!("{}", report.tsv());
    ExitCode::SUCCESS
}

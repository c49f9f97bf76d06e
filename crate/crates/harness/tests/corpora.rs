//! Replays every shipped trace with checking on; zero mismatches is the
//! repository's top-level gate.

use dygraph::hopdist::CountingMode;
use dygraph_harness::run::{run_trace, RunConfig, StructureKind};
use dygraph_harness::trace::Trace;

fn corpora_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpora")
}

#[test]
fn shipped_corpora_replay_clean() {
    let mut ran = 0;
    let mut entries: Vec<_> = std::fs::read_dir(corpora_dir())
        .expect("corpora directory present")
        .map(|e| e.unwrap().path())
        .collect();
    entries.sort();
    for path in entries {
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        if !name.ends_with(".trace") {
            continue;
        }
        let structure = name
            .split('_')
            .next()
            .and_then(StructureKind::parse)
            .unwrap_or_else(|| panic!("corpus {name} must be prefixed by its structure"));
        let text = std::fs::read_to_string(&path).unwrap();
        let trace = Trace::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        for mode in [CountingMode::Deterministic, CountingMode::Randomized { seed: 7 }] {
            let cfg = RunConfig::new(structure, mode);
            let report = run_trace(&trace, &cfg).unwrap();
            assert!(
                report.passed(),
                "{name}: {:?}",
                report.outcomes.iter().find(|o| !o.ok)
            );
        }
        ran += 1;
    }
    assert!(ran >= 9, "expected the full shipped corpus, found {ran}");
}

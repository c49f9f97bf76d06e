//! Trace replay harness: brute-force oracles, the trace file format, seeded
//! generators with adversarial profiles, and replay with cross-checking.

pub mod bench;
pub mod gen;
pub mod oracle;
pub mod run;
pub mod trace;

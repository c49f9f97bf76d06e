//! Line-oriented trace files: one header line `n <N>`, then one event per
//! line. `#` starts a comment. Events:
//!
//! ```text
//! e <u> <v> <+|->            edge insert/delete
//! vp <v> | out: u1 u2 | in: w1 w2
//! bb / be                    batch begin / end (vertex patches, no nesting)
//! qs <s>                     single-source distance query
//! qd <s> <t>                 pair distance query
//! qp <s> <t>                 path report query
//! qtc                        closure query
//! qtr                        tree query
//! ```

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    Edge(usize, usize, bool),
    VPatch { vertex: usize, out: Vec<usize>, into: Vec<usize> },
    BatchBegin,
    BatchEnd,
    QuerySssp(usize),
    QueryDist(usize, usize),
    QueryPath(usize, usize),
    QueryTc,
    QueryTrees,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub n: usize,
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceError {
    MissingHeader,
    Malformed { line: usize, text: String },
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    BatchNesting { line: usize },
}

impl fmt::Display for TraceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceError::MissingHeader => write!(f, "trace must start with 'n <N>'"),
            TraceError::Malformed { line, text } => write!(f, "line {line}: cannot parse '{text}'"),
            TraceError::VertexOutOfRange { line, vertex, n } => {
                write!(f, "line {line}: vertex {vertex} out of range for n={n}")
            }
            TraceError::BatchNesting { line } => {
                write!(f, "line {line}: batches must be flat and properly paired")
            }
        }
    }
}

impl std::error::Error for TraceError {}

impl Trace {
    pub fn parse(text: &str) -> Result<Trace, TraceError> {
        let mut n: Option<usize> = None;
        let mut events = Vec::new();
        let mut in_batch = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let malformed = || TraceError::Malformed { line: line_no, text: raw.to_string() };
            let mut parts = line.split_whitespace();
            let tag = parts.next().ok_or_else(malformed)?;
            if n.is_none() {
                if tag != "n" {
                    return Err(TraceError::MissingHeader);
                }
                let v: usize = parts.next().ok_or_else(malformed)?.parse().map_err(|_| malformed())?;
                n = Some(v);
                continue;
            }
            let nn = n.unwrap();
            let check = |v: usize| {
                if v < nn {
                    Ok(v)
                } else {
                    Err(TraceError::VertexOutOfRange { line: line_no, vertex: v, n: nn })
                }
            };
            let next_vertex = |parts: &mut std::str::SplitWhitespace| -> Result<usize, TraceError> {
                let v: usize =
                    parts.next().ok_or_else(malformed)?.parse().map_err(|_| malformed())?;
                check(v)
            };
            let event = match tag {
                "e" => {
                    let u = next_vertex(&mut parts)?;
                    let v = next_vertex(&mut parts)?;
                    let sign = parts.next().ok_or_else(malformed)?;
                    let present = match sign {
                        "+" => true,
                        "-" => false,
                        _ => return Err(malformed()),
                    };
                    Event::Edge(u, v, present)
                }
                "vp" => {
                    // vp <v> | out: ... | in: ...
                    let rest = line.strip_prefix("vp").unwrap().trim();
                    let mut sections = rest.split('|').map(str::trim);
                    let vertex: usize =
                        sections.next().ok_or_else(malformed)?.parse().map_err(|_| malformed())?;
                    check(vertex)?;
                    let mut out = Vec::new();
                    let mut into = Vec::new();
                    for sec in sections {
                        if let Some(list) = sec.strip_prefix("out:") {
                            for tok in list.split_whitespace() {
                                out.push(check(tok.parse().map_err(|_| malformed())?)?);
                            }
                        } else if let Some(list) = sec.strip_prefix("in:") {
                            for tok in list.split_whitespace() {
                                into.push(check(tok.parse().map_err(|_| malformed())?)?);
                            }
                        } else if !sec.is_empty() {
                            return Err(malformed());
                        }
                    }
                    Event::VPatch { vertex, out, into }
                }
                "bb" => {
                    if in_batch {
                        return Err(TraceError::BatchNesting { line: line_no });
                    }
                    in_batch = true;
                    Event::BatchBegin
                }
                "be" => {
                    if !in_batch {
                        return Err(TraceError::BatchNesting { line: line_no });
                    }
                    in_batch = false;
                    Event::BatchEnd
                }
                "qs" => Event::QuerySssp(next_vertex(&mut parts)?),
                "qd" => Event::QueryDist(next_vertex(&mut parts)?, next_vertex(&mut parts)?),
                "qp" => Event::QueryPath(next_vertex(&mut parts)?, next_vertex(&mut parts)?),
                "qtc" => Event::QueryTc,
                "qtr" => Event::QueryTrees,
                _ => return Err(malformed()),
            };
            events.push(event);
        }
        let n = n.ok_or(TraceError::MissingHeader)?;
        if in_batch {
            return Err(TraceError::BatchNesting { line: text.lines().count() });
        }
        Ok(Trace { n, events })
    }

    pub fn format(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for ev in &self.events {
            match ev {
                Event::Edge(u, v, present) => {
                    out.push_str(&format!("e {u} {v} {}\n", if *present { '+' } else { '-' }));
                }
                Event::VPatch { vertex, out: o, into } => {
                    let fmt_list = |xs: &[usize]| {
                        xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
                    };
                    out.push_str(&format!(
                        "vp {vertex} | out: {} | in: {}\n",
                        fmt_list(o),
                        fmt_list(into)
                    ));
                }
                Event::BatchBegin => out.push_str("bb\n"),
                Event::BatchEnd => out.push_str("be\n"),
                Event::QuerySssp(s) => out.push_str(&format!("qs {s}\n")),
                Event::QueryDist(s, t) => out.push_str(&format!("qd {s} {t}\n")),
                Event::QueryPath(s, t) => out.push_str(&format!("qp {s} {t}\n")),
                Event::QueryTc => out.push_str("qtc\n"),
                Event::QueryTrees => out.push_str("qtr\n"),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        let text = "\
# sample
n 5
e 0 1 +
vp 3 | out: 1 2 | in: 0
bb
vp 2 | out: | in: 4
be
qs 0
qd 0 3
qp 1 4
qtc
qtr
e 0 1 -
";
        let trace = Trace::parse(text).unwrap();
        assert_eq!(trace.n, 5);
        assert_eq!(trace.events.len(), 11);
        let again = Trace::parse(&trace.format()).unwrap();
        assert_eq!(trace, again);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Trace::parse("e 0 1 +\n"), Err(TraceError::MissingHeader));
        assert!(matches!(
            Trace::parse("n 3\ne 0 7 +\n"),
            Err(TraceError::VertexOutOfRange { vertex: 7, .. })
        ));
        assert!(matches!(Trace::parse("n 3\ne 0 1 *\n"), Err(TraceError::Malformed { .. })));
        assert!(matches!(Trace::parse("n 3\nbb\nbb\n"), Err(TraceError::BatchNesting { .. })));
        assert!(matches!(Trace::parse("n 3\nbb\n"), Err(TraceError::BatchNesting { .. })));
    }
}

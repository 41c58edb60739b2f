//! Match-record interchange: the CSV format shared by the simulator and
//! the reference evaluator, and the set diff used for equivalence checks.

use crate::sim::MatchEvent;

pub const CSV_HEADER: &str = "doc_id,profile_id,byte_offset";

/// Serializes events as CSV, sorted, one record per line.
pub fn events_to_csv(events: &[MatchEvent]) -> String {
    let mut sorted: Vec<MatchEvent> = events.to_vec();
    sorted.sort_unstable();
    let mut out = String::with_capacity(sorted.len() * 16 + 32);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for e in sorted {
        out.push_str(&format!(
            "{},{},{}\n",
            e.doc_id, e.profile_id, e.byte_offset
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CsvError {
    #[error("bad match CSV header: {0:?}")]
    BadHeader(String),
    #[error("bad match CSV record at line {line}")]
    BadRecord { line: usize },
}

/// Parses the match CSV format.
pub fn events_from_csv(text: &str) -> Result<Vec<MatchEvent>, CsvError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == CSV_HEADER => {}
        other => {
            return Err(CsvError::BadHeader(
                other.map(|(_, h)| h.to_owned()).unwrap_or_default(),
            ))
        }
    }
    let mut events = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let parse = |f: Option<&str>| -> Option<u64> { f?.trim().parse().ok() };
        let doc_id = parse(fields.next());
        let profile_id = parse(fields.next());
        let byte_offset = parse(fields.next());
        match (doc_id, profile_id, byte_offset, fields.next()) {
            (Some(d), Some(p), Some(b), None) => events.push(MatchEvent {
                doc_id: d as u32,
                profile_id: p as u32,
                byte_offset: b as usize,
            }),
            _ => return Err(CsvError::BadRecord { line: idx + 1 }),
        }
    }
    Ok(events)
}

/// Result of comparing two match sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiffOutcome {
    Equivalent {
        records: usize,
    },
    Divergent {
        /// Smallest record present on exactly one side.
        first: MatchEvent,
        /// True when `first` comes from the left set.
        in_left: bool,
        only_left: usize,
        only_right: usize,
    },
}

impl DiffOutcome {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, DiffOutcome::Equivalent { .. })
    }

    pub fn render(&self) -> String {
        match self {
            DiffOutcome::Equivalent { records } => format!("EQUIVALENT ({records} records)"),
            DiffOutcome::Divergent { first, in_left, only_left, only_right } => format!(
                "DIVERGENT: record doc_id={} profile_id={} byte_offset={} only in the {} set ({} left-only, {} right-only)",
                first.doc_id,
                first.profile_id,
                first.byte_offset,
                if *in_left { "left" } else { "right" },
                only_left,
                only_right,
            ),
        }
    }
}

/// Compares two match sets as sorted sets of records.
pub fn diff_events(left: &[MatchEvent], right: &[MatchEvent]) -> DiffOutcome {
    let mut a: Vec<MatchEvent> = left.to_vec();
    let mut b: Vec<MatchEvent> = right.to_vec();
    a.sort_unstable();
    a.dedup();
    b.sort_unstable();
    b.dedup();
    let only_left: Vec<MatchEvent> = a
        .iter()
        .copied()
        .filter(|e| b.binary_search(e).is_err())
        .collect();
    let only_right: Vec<MatchEvent> = b
        .iter()
        .copied()
        .filter(|e| a.binary_search(e).is_err())
        .collect();
    if only_left.is_empty() && only_right.is_empty() {
        return DiffOutcome::Equivalent { records: a.len() };
    }
    let first_left = only_left.first().copied();
    let first_right = only_right.first().copied();
    let (first, in_left) = match (first_left, first_right) {
        (Some(l), Some(r)) if l <= r => (l, true),
        (Some(_), Some(r)) => (r, false),
        (Some(l), None) => (l, true),
        (None, Some(r)) => (r, false),
        (None, None) => unreachable!(),
    };
    DiffOutcome::Divergent {
        first,
        in_left,
        only_left: only_left.len(),
        only_right: only_right.len(),
    }
}

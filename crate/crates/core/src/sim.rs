//! Cycle-driven execution of a datapath over an encoded XML byte stream.
//!
//! One byte enters per simulated clock cycle and every block evaluates in
//! parallel. Within a cycle the order is: the character decoder asserts
//! its line, the tag filter completes any tag ending on this byte,
//! top-of-stack checks read the stack before the completing tag's
//! push/pop, matcher chains advance against the pre-cycle flags, negation
//! guards clear their segment flag when their close tag completes, result
//! cells fire, and finally the stack push or pop commits.
//!
//! Matcher chains keep one active flag per chain position. A flag is set
//! when its open tag completes with the upstream flag high (and the
//! top-of-stack requirement met), and cleared when the guarded close tag
//! completes. On documents without same-tag self-nesting this realizes
//! exactly the reference tree semantics; inside recursive nesting the
//! single flag clears on the innermost close, which is the documented
//! behavior of the block construction.

use std::collections::HashMap;
use std::time::Instant;

use crate::datapath::{Datapath, EncoderGroup};
use crate::dict::TagCode;

/// A profile firing: emitted at the cycle its final open tag completes.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MatchEvent {
    pub doc_id: u32,
    pub profile_id: u32,
    pub byte_offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("malformed document at byte offset {offset}")]
    MalformedDocument { offset: usize },
    #[error("tag stack overflow at byte offset {offset}")]
    StackOverflow { offset: usize },
}

/// Tag-filter recognizer state: encoded tags are exactly `<xy>` (open)
/// and `</xy>` (close).
#[derive(Clone, Copy, Debug)]
enum TagScan {
    Text,
    Lt,
    OpenSym { first: u8 },
    OpenEnd { first: u8, second: u8 },
    Slash,
    CloseSym { first: u8 },
    CloseEnd { first: u8, second: u8 },
}

#[derive(Clone, Copy, Debug)]
enum TagEvent {
    Open(TagCode),
    Close(TagCode),
}

fn is_code_symbol(b: u8) -> bool {
    b.is_ascii_lowercase() || b.is_ascii_digit()
}

fn is_gap_class(b: u8) -> bool {
    // the \w and \s classes used for inter-tag text
    b.is_ascii_alphanumeric() || b == b'_' || b.is_ascii_whitespace()
}

/// An engine instance bound to one immutable datapath and one document.
pub struct Engine<'dp> {
    dp: &'dp Datapath,
    /// open tag -> chain node ids
    nodes_by_tag: HashMap<TagCode, Vec<usize>>,
    /// close tag -> chain node ids whose flag a guard clears
    guards_by_tag: HashMap<TagCode, Vec<usize>>,
    route_index: HashMap<u32, usize>,
    doc_id: u32,
    cycle: usize,
    scan: TagScan,
    flags: Vec<bool>,
    stack: Vec<TagCode>,
    matched: Vec<bool>,
    events: Vec<MatchEvent>,
    decoder_lines: [bool; 256],
    /// profiles firing this cycle, per encoder group
    encoder_outputs: [Vec<u32>; 2],
    gap_class_violations: u64,
}

impl<'dp> Engine<'dp> {
    pub fn new(dp: &'dp Datapath, doc_id: u32) -> Self {
        let mut nodes_by_tag: HashMap<TagCode, Vec<usize>> = HashMap::new();
        for (i, node) in dp.nodes.iter().enumerate() {
            nodes_by_tag.entry(node.tag).or_default().push(i);
        }
        // a clearing guard exists for a node's flag iff some downstream
        // unit carries a negation block naming its close tag
        let mut guards_by_tag: HashMap<TagCode, Vec<usize>> = HashMap::new();
        let mut has_child = vec![false; dp.nodes.len()];
        for node in &dp.nodes {
            if let Some(p) = node.parent {
                has_child[p] = true;
            }
        }
        for (i, node) in dp.nodes.iter().enumerate() {
            if has_child[i] {
                guards_by_tag.entry(node.tag).or_default().push(i);
            }
        }
        let route_index = dp
            .routes
            .iter()
            .enumerate()
            .map(|(i, r)| (r.profile_id, i))
            .collect();
        Engine {
            dp,
            nodes_by_tag,
            guards_by_tag,
            route_index,
            doc_id,
            cycle: 0,
            scan: TagScan::Text,
            flags: vec![false; dp.nodes.len()],
            stack: Vec::new(),
            matched: vec![false; dp.routes.len()],
            events: Vec::new(),
            decoder_lines: [false; 256],
            encoder_outputs: [Vec::new(), Vec::new()],
            gap_class_violations: 0,
        }
    }

    /// The simulated tag stack (top is last). Equals the open-element path
    /// of the consumed prefix on well-formed input.
    pub fn stack(&self) -> &[TagCode] {
        &self.stack
    }

    pub fn events(&self) -> &[MatchEvent] {
        &self.events
    }

    /// Profiles that fired on the most recent cycle, per encoder group.
    pub fn encoder_outputs(&self, group: EncoderGroup) -> &[u32] {
        &self.encoder_outputs[group as usize]
    }

    pub fn decoder_lines(&self) -> &[bool; 256] {
        &self.decoder_lines
    }

    /// Count of text bytes outside the `[\w\s]` gap classes (reported as
    /// a validation warning, never a match failure).
    pub fn gap_class_violations(&self) -> u64 {
        self.gap_class_violations
    }

    /// Feeds one byte: one simulated clock cycle.
    pub fn step(&mut self, byte: u8) -> Result<(), SimError> {
        let offset = self.cycle;
        self.cycle += 1;
        if self.dp.config.char_decoded {
            self.decoder_lines = [false; 256];
            self.decoder_lines[byte as usize] = true;
        }
        self.encoder_outputs = [Vec::new(), Vec::new()];

        let event = self.scan_byte(byte, offset)?;
        match event {
            None => Ok(()),
            Some(TagEvent::Open(code)) => self.complete_open(code, offset),
            Some(TagEvent::Close(code)) => self.complete_close(code, offset),
        }
    }

    fn scan_byte(&mut self, byte: u8, offset: usize) -> Result<Option<TagEvent>, SimError> {
        let malformed = Err(SimError::MalformedDocument { offset });
        let (next, event) = match self.scan {
            TagScan::Text => {
                if byte == b'<' {
                    (TagScan::Lt, None)
                } else {
                    if !is_gap_class(byte) {
                        self.gap_class_violations += 1;
                    }
                    (TagScan::Text, None)
                }
            }
            TagScan::Lt => {
                if byte == b'/' {
                    (TagScan::Slash, None)
                } else if is_code_symbol(byte) {
                    (TagScan::OpenSym { first: byte }, None)
                } else {
                    return malformed;
                }
            }
            TagScan::OpenSym { first } => {
                if is_code_symbol(byte) {
                    (
                        TagScan::OpenEnd {
                            first,
                            second: byte,
                        },
                        None,
                    )
                } else {
                    return malformed;
                }
            }
            TagScan::OpenEnd { first, second } => {
                if byte == b'>' {
                    let code = TagCode::new(first, second).expect("symbols validated");
                    (TagScan::Text, Some(TagEvent::Open(code)))
                } else {
                    return malformed;
                }
            }
            TagScan::Slash => {
                if is_code_symbol(byte) {
                    (TagScan::CloseSym { first: byte }, None)
                } else {
                    return malformed;
                }
            }
            TagScan::CloseSym { first } => {
                if is_code_symbol(byte) {
                    (
                        TagScan::CloseEnd {
                            first,
                            second: byte,
                        },
                        None,
                    )
                } else {
                    return malformed;
                }
            }
            TagScan::CloseEnd { first, second } => {
                if byte == b'>' {
                    let code = TagCode::new(first, second).expect("symbols validated");
                    (TagScan::Text, Some(TagEvent::Close(code)))
                } else {
                    return malformed;
                }
            }
        };
        self.scan = next;
        Ok(event)
    }

    fn complete_open(&mut self, code: TagCode, offset: usize) -> Result<(), SimError> {
        // evaluate all matchers against the pre-cycle flags and the
        // pre-push stack, then commit
        let mut arm = Vec::new();
        let mut fired = Vec::new();
        if let Some(candidates) = self.nodes_by_tag.get(&code) {
            for &n in candidates {
                let node = &self.dp.nodes[n];
                let upstream_ok = match node.parent {
                    None => !node.anchored || self.stack.is_empty(),
                    Some(p) => self.flags[p],
                };
                let tos_ok = match node.tos {
                    None => true,
                    Some(expected) => self.stack.last() == Some(&expected),
                };
                if upstream_ok && tos_ok {
                    arm.push(n);
                    for &pid in &node.terminals {
                        let slot = self.route_index[&pid];
                        if !self.matched[slot] {
                            self.matched[slot] = true;
                            fired.push(pid);
                        }
                    }
                }
            }
        }
        for n in arm {
            self.flags[n] = true;
        }
        // simultaneous firings report in priority (profile id) order
        fired.sort_unstable();
        for pid in fired {
            let route = &self.dp.routes[self.route_index[&pid]];
            self.encoder_outputs[route.group() as usize].push(pid);
            self.events.push(MatchEvent {
                doc_id: self.doc_id,
                profile_id: pid,
                byte_offset: offset,
            });
        }
        if self.stack.len() >= self.dp.config.stack_depth {
            return Err(SimError::StackOverflow { offset });
        }
        self.stack.push(code);
        Ok(())
    }

    fn complete_close(&mut self, code: TagCode, offset: usize) -> Result<(), SimError> {
        if let Some(guarded) = self.guards_by_tag.get(&code) {
            for &n in guarded {
                self.flags[n] = false;
            }
        }
        match self.stack.pop() {
            Some(top) if top == code => Ok(()),
            _ => Err(SimError::MalformedDocument { offset }),
        }
    }

    /// Verifies the document ended cleanly and returns the event list.
    pub fn finish(self) -> Result<Vec<MatchEvent>, SimError> {
        let clean = matches!(self.scan, TagScan::Text) && self.stack.is_empty();
        if !clean {
            return Err(SimError::MalformedDocument { offset: self.cycle });
        }
        Ok(self.events)
    }
}

/// Runs one document through a fresh engine.
pub fn run(dp: &Datapath, doc: &[u8], doc_id: u32) -> Result<Vec<MatchEvent>, SimError> {
    let mut engine = Engine::new(dp, doc_id);
    for &byte in doc {
        engine.step(byte)?;
    }
    engine.finish()
}

/// Throughput over a document set; informational, never part of
/// correctness checks.
#[derive(Clone, Copy, Debug)]
pub struct ThroughputStats {
    pub bytes: u64,
    pub wall_seconds: f64,
    pub mb_per_s: f64,
    /// Total text bytes outside the `[\w\s]` gap classes (warning only).
    pub gap_class_violations: u64,
}

impl ThroughputStats {
    pub fn render(&self) -> String {
        format!(
            "bytes={} wall_seconds={:.6} mb_per_s={:.2} gap_class_warnings={}",
            self.bytes, self.wall_seconds, self.mb_per_s, self.gap_class_violations
        )
    }
}

/// Per-document outcome of a stream run.
pub type DocResult = Result<Vec<MatchEvent>, SimError>;

/// Runs a document sequence with full engine reset between documents.
/// A failing document is reported and processing continues.
pub fn run_stream(dp: &Datapath, docs: &[(u32, Vec<u8>)]) -> (Vec<DocResult>, ThroughputStats) {
    let started = Instant::now();
    let mut bytes = 0u64;
    let mut gap_class_violations = 0u64;
    let mut outcomes = Vec::with_capacity(docs.len());
    for (doc_id, doc) in docs {
        bytes += doc.len() as u64;
        let mut engine = Engine::new(dp, *doc_id);
        let mut failed = None;
        for &byte in doc {
            if let Err(err) = engine.step(byte) {
                failed = Some(err);
                break;
            }
        }
        gap_class_violations += engine.gap_class_violations();
        outcomes.push(match failed {
            Some(err) => Err(err),
            None => engine.finish(),
        });
    }
    let wall_seconds = started.elapsed().as_secs_f64();
    let mb = bytes as f64 / 1_000_000.0;
    let stats = ThroughputStats {
        bytes,
        wall_seconds,
        mb_per_s: if wall_seconds > 0.0 {
            mb / wall_seconds
        } else {
            0.0
        },
        gap_class_violations,
    };
    (outcomes, stats)
}

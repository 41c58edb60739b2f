//! Stack-enhanced regular-expression IR.
//!
//! Each profile lowers to a linear atom program: an open-tag match per
//! location step, separated by gap fillers, with a negation guard on the
//! preceding step's close tag and, for parent-child steps, a top-of-stack
//! check directly before the open-tag match.

use std::fmt;

use crate::dict::TagCode;
use crate::profile::{Axis, ProfileAst};

/// One atom of the stack-enhanced regex program.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum RegexAtom {
    /// Match the encoded open tag `<xy>`.
    OpenTagMatch(TagCode),
    /// Inter-tag filler: any run of text and unrelated tags.
    GapPattern,
    /// Cancel the segment when the named close tag completes.
    NegationGuard(TagCode),
    /// Require the top of the tag stack to equal the expected code at the
    /// moment the following open tag completes.
    StackCheck(TagCode),
}

impl fmt::Display for RegexAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegexAtom::OpenTagMatch(t) => write!(f, "OPEN({t})"),
            RegexAtom::GapPattern => write!(f, "GAP"),
            RegexAtom::NegationGuard(t) => write!(f, "NEG(/{t})"),
            RegexAtom::StackCheck(t) => write!(f, "TOS({t})"),
        }
    }
}

/// The lowered program for one profile.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StackRegexIr {
    pub profile_id: u32,
    /// True when the first tag must complete at document root level.
    pub anchored: bool,
    pub atoms: Vec<RegexAtom>,
    /// True iff the program contains a [`RegexAtom::StackCheck`].
    pub uses_stack: bool,
}

impl StackRegexIr {
    /// The serialized profile form with `/` and `//` separators restored;
    /// this is the alphabetical sort key for prefix clustering.
    pub fn serialized(&self) -> String {
        let mut out = String::new();
        if !self.anchored {
            out.push_str("//");
        }
        let mut units = self.units();
        if let Some(first) = units.next() {
            out.push_str(&first.tag.to_string());
        }
        for unit in units {
            out.push_str(if unit.tos.is_some() { "/" } else { "//" });
            out.push_str(&unit.tag.to_string());
        }
        out
    }

    /// Splits the atom program into per-step units (see [`TagUnit`]).
    pub fn units(&self) -> impl Iterator<Item = TagUnit<'_>> {
        units_of(&self.atoms)
    }

    /// The IR dump line, e.g.
    /// `P3: OPEN(a0) GAP NEG(/a0) TOS(a0) OPEN(b0)`.
    pub fn dump_line(&self) -> String {
        let atoms: Vec<String> = self.atoms.iter().map(|a| a.to_string()).collect();
        format!("P{}: {}", self.profile_id, atoms.join(" "))
    }
}

/// The atom group belonging to one location step: for the first step just
/// the open-tag match, for later steps the gap, the guard on the previous
/// tag's close, an optional top-of-stack check, and the open-tag match.
/// Prefix sharing grows one unit at a time, never splitting a unit.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TagUnit<'a> {
    pub atoms: &'a [RegexAtom],
    /// The step's open tag.
    pub tag: TagCode,
    /// Guard close tag (absent on the first unit).
    pub guard: Option<TagCode>,
    /// Expected top-of-stack code for parent-child steps.
    pub tos: Option<TagCode>,
}

/// Splits any atom run on open-tag boundaries. Every well-formed program
/// (or shared prefix of one) is a concatenation of tag units.
pub fn units_of(atoms: &[RegexAtom]) -> impl Iterator<Item = TagUnit<'_>> {
    UnitIter { atoms, pos: 0 }
}

struct UnitIter<'a> {
    atoms: &'a [RegexAtom],
    pos: usize,
}

impl<'a> Iterator for UnitIter<'a> {
    type Item = TagUnit<'a>;

    fn next(&mut self) -> Option<TagUnit<'a>> {
        if self.pos >= self.atoms.len() {
            return None;
        }
        let start = self.pos;
        let mut guard = None;
        let mut tos = None;
        loop {
            match self.atoms[self.pos] {
                RegexAtom::OpenTagMatch(tag) => {
                    self.pos += 1;
                    return Some(TagUnit {
                        atoms: &self.atoms[start..self.pos],
                        tag,
                        guard,
                        tos,
                    });
                }
                RegexAtom::GapPattern => self.pos += 1,
                RegexAtom::NegationGuard(t) => {
                    guard = Some(t);
                    self.pos += 1;
                }
                RegexAtom::StackCheck(t) => {
                    tos = Some(t);
                    self.pos += 1;
                }
            }
        }
    }
}

/// Lowers a parsed profile to its stack-enhanced regex program.
pub fn lower_profile(ast: &ProfileAst) -> StackRegexIr {
    let mut atoms = Vec::new();
    let mut uses_stack = false;
    for (i, step) in ast.steps.iter().enumerate() {
        if i > 0 {
            let previous = ast.steps[i - 1].tag;
            atoms.push(RegexAtom::GapPattern);
            atoms.push(RegexAtom::NegationGuard(previous));
            if step.axis == Axis::Child {
                atoms.push(RegexAtom::StackCheck(previous));
                uses_stack = true;
            }
        }
        atoms.push(RegexAtom::OpenTagMatch(step.tag));
    }
    StackRegexIr {
        profile_id: ast.profile_id,
        anchored: ast.anchored(),
        atoms,
        uses_stack,
    }
}

/// Renders a whole IR set in the dump format, one line per profile.
pub fn dump_ir(irs: &[StackRegexIr]) -> String {
    let mut out = String::new();
    for ir in irs {
        out.push_str(&ir.dump_line());
        out.push('\n');
    }
    out
}

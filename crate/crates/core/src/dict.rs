//! Tag dictionary: fixed-length replacement codes for XML element names.
//!
//! Every element name is rewritten to a two-symbol code (letter + digit),
//! so that an encoded open tag `<xy>` is exactly 4 bytes and a close tag
//! `</xy>` exactly 5 bytes. Codes are handed out in a fixed lexicographic
//! sequence (`a0, a1, .. a9, b0, .. z9`), which makes a rebuild from the
//! same ordered name list reproduce the same dictionary byte for byte.

use std::fmt;

use indexmap::IndexMap;

/// A two-symbol tag replacement code.
///
/// The first symbol is a lowercase letter, the second a decimal digit when
/// allocated by [`Dictionary::build`]; parsed codes accept `[a-z0-9]` in
/// either position so hand-written fixtures like `a0` or `00` round-trip.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TagCode {
    symbols: [u8; 2],
}

impl TagCode {
    /// Builds a code from its two symbols, validating the alphabet.
    pub fn new(first: u8, second: u8) -> Result<Self, DictError> {
        if !is_code_symbol(first) || !is_code_symbol(second) {
            return Err(DictError::InvalidCode {
                text: String::from_utf8_lossy(&[first, second]).into_owned(),
            });
        }
        Ok(TagCode {
            symbols: [first, second],
        })
    }

    /// Parses a code from its textual form, e.g. `"a0"`.
    pub fn parse(text: &str) -> Result<Self, DictError> {
        let bytes = text.as_bytes();
        if bytes.len() != 2 {
            return Err(DictError::InvalidCode {
                text: text.to_owned(),
            });
        }
        TagCode::new(bytes[0], bytes[1])
    }

    pub fn symbols(&self) -> [u8; 2] {
        self.symbols
    }

    /// The encoded open tag, always 4 bytes: `<xy>`.
    pub fn open_bytes(&self) -> [u8; 4] {
        [b'<', self.symbols[0], self.symbols[1], b'>']
    }

    /// The encoded close tag, always 5 bytes: `</xy>`.
    pub fn close_bytes(&self) -> [u8; 5] {
        [b'<', b'/', self.symbols[0], self.symbols[1], b'>']
    }
}

impl fmt::Display for TagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.symbols[0] as char, self.symbols[1] as char)
    }
}

fn is_code_symbol(b: u8) -> bool {
    b.is_ascii_lowercase() || b.is_ascii_digit()
}

/// Errors from dictionary construction and document encoding.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DictError {
    #[error("invalid tag code {text:?}: expected two symbols from [a-z0-9]")]
    InvalidCode { text: String },
    #[error("invalid tag name {name:?}")]
    InvalidName { name: String },
    #[error("duplicate tag name {name:?}")]
    DuplicateTag { name: String },
    #[error("tag universe exceeds the {capacity} available two-symbol codes")]
    CapacityExceeded { capacity: usize },
    #[error("unknown tag {name:?} at byte offset {offset}")]
    UnknownTag { name: String, offset: usize },
    #[error("unknown tag code {code:?} at byte offset {offset}")]
    UnknownCode { code: String, offset: usize },
    #[error("unsupported construct ({what}) at byte offset {offset}")]
    Unsupported { what: &'static str, offset: usize },
    #[error("malformed markup at byte offset {offset}")]
    Malformed { offset: usize },
    #[error("malformed dictionary file at line {line}")]
    BadDictionaryFile { line: usize },
}

/// The letter-digit allocation sequence: `a0, a1, .. a9, b0, .. z9`.
fn next_code(code: TagCode) -> Option<TagCode> {
    let [letter, digit] = code.symbols();
    if digit < b'9' {
        Some(TagCode {
            symbols: [letter, digit + 1],
        })
    } else if letter < b'z' {
        Some(TagCode {
            symbols: [letter + 1, b'0'],
        })
    } else {
        None
    }
}

/// An injective map from element names to [`TagCode`]s, in insertion order.
#[derive(Clone, Debug, Default)]
pub struct Dictionary {
    entries: IndexMap<String, TagCode>,
}

impl Dictionary {
    /// Builds a dictionary over `names`, allocating codes from `a0` onward
    /// in encounter order.
    pub fn build<I, S>(names: I) -> Result<Self, DictError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self::build_from(names, TagCode::new(b'a', b'0').unwrap())
    }

    /// Like [`Dictionary::build`] but starting the allocation cursor at
    /// `start` instead of `a0`.
    pub fn build_from<I, S>(names: I, start: TagCode) -> Result<Self, DictError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut entries = IndexMap::new();
        let mut cursor = Some(start);
        for name in names {
            let name = name.as_ref();
            validate_name(name)?;
            let code = cursor.ok_or(DictError::CapacityExceeded { capacity: 260 })?;
            if entries.insert(name.to_owned(), code).is_some() {
                return Err(DictError::DuplicateTag {
                    name: name.to_owned(),
                });
            }
            cursor = next_code(code);
        }
        Ok(Dictionary { entries })
    }

    /// An identity dictionary whose names already are two-symbol codes,
    /// as used by the encoded-profile front end.
    pub fn identity<I, S>(codes: I) -> Result<Self, DictError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut entries = IndexMap::new();
        for text in codes {
            let text = text.as_ref();
            let code = TagCode::parse(text)?;
            entries.insert(text.to_owned(), code);
        }
        Ok(Dictionary { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn code_of(&self, name: &str) -> Option<TagCode> {
        self.entries.get(name).copied()
    }

    pub fn name_of(&self, code: TagCode) -> Option<&str> {
        self.entries
            .iter()
            .find(|(_, c)| **c == code)
            .map(|(n, _)| n.as_str())
    }

    /// Entries in insertion (allocation) order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, TagCode)> {
        self.entries.iter().map(|(n, c)| (n.as_str(), *c))
    }

    /// All codes in allocation order.
    pub fn codes(&self) -> Vec<TagCode> {
        self.entries.values().copied().collect()
    }

    /// Serializes to the TSV persistence format: one `name<TAB>code` line
    /// per entry, in allocation order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (name, code) in self.iter() {
            out.push_str(name);
            out.push('\t');
            out.push_str(&code.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the TSV persistence format.
    pub fn from_tsv(text: &str) -> Result<Self, DictError> {
        let mut entries = IndexMap::new();
        for (idx, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (name, code_text) = line
                .split_once('\t')
                .ok_or(DictError::BadDictionaryFile { line: idx + 1 })?;
            validate_name(name)?;
            let code = TagCode::parse(code_text)?;
            if entries.values().any(|c| *c == code) || entries.contains_key(name) {
                return Err(DictError::BadDictionaryFile { line: idx + 1 });
            }
            entries.insert(name.to_owned(), code);
        }
        Ok(Dictionary { entries })
    }
}

fn validate_name(name: &str) -> Result<(), DictError> {
    let bad = name.is_empty()
        || name
            .bytes()
            .any(|b| matches!(b, b'<' | b'>' | b'/' | b'&') || b.is_ascii_whitespace());
    if bad {
        return Err(DictError::InvalidName {
            name: name.to_owned(),
        });
    }
    Ok(())
}

/// Rewrites every element tag of `doc` through the dictionary. Text content
/// passes through unchanged; attributes, processing instructions, comments,
/// CDATA and self-closing tags are rejected.
pub fn encode_document(doc: &[u8], dict: &Dictionary) -> Result<Vec<u8>, DictError> {
    transcode(doc, |name, offset| {
        dict.code_of(name)
            .map(|c| c.to_string())
            .ok_or(DictError::UnknownTag {
                name: name.to_owned(),
                offset,
            })
    })
}

/// Inverse of [`encode_document`]: restores the original element names.
pub fn decode_document(doc: &[u8], dict: &Dictionary) -> Result<Vec<u8>, DictError> {
    transcode(doc, |code_text, offset| {
        let code = TagCode::parse(code_text).map_err(|_| DictError::UnknownCode {
            code: code_text.to_owned(),
            offset,
        })?;
        dict.name_of(code)
            .map(str::to_owned)
            .ok_or(DictError::UnknownCode {
                code: code_text.to_owned(),
                offset,
            })
    })
}

/// Shared tag-rewriting scan. `rename` maps a tag name (at the given byte
/// offset of its `<`) to its replacement.
fn transcode(
    doc: &[u8],
    rename: impl Fn(&str, usize) -> Result<String, DictError>,
) -> Result<Vec<u8>, DictError> {
    let mut out = Vec::with_capacity(doc.len());
    let mut i = 0;
    while i < doc.len() {
        let b = doc[i];
        if b != b'<' {
            out.push(b);
            i += 1;
            continue;
        }
        let start = i;
        i += 1;
        match doc.get(i) {
            Some(b'?') => {
                return Err(DictError::Unsupported {
                    what: "processing instruction",
                    offset: start,
                })
            }
            Some(b'!') => {
                return Err(DictError::Unsupported {
                    what: "comment, CDATA or doctype",
                    offset: start,
                })
            }
            _ => {}
        }
        let closing = doc.get(i) == Some(&b'/');
        if closing {
            i += 1;
        }
        let name_start = i;
        while i < doc.len()
            && !matches!(doc[i], b'>' | b'<')
            && !doc[i].is_ascii_whitespace()
            && doc[i] != b'/'
        {
            i += 1;
        }
        match doc.get(i) {
            Some(b'>') => {}
            Some(b'/') if !closing => {
                return Err(DictError::Unsupported {
                    what: "self-closing tag",
                    offset: start,
                })
            }
            Some(b) if b.is_ascii_whitespace() => {
                return Err(DictError::Unsupported {
                    what: "attributes",
                    offset: start,
                })
            }
            _ => return Err(DictError::Malformed { offset: start }),
        }
        let name = std::str::from_utf8(&doc[name_start..i])
            .map_err(|_| DictError::Malformed { offset: start })?;
        if name.is_empty() {
            return Err(DictError::Malformed { offset: start });
        }
        let replacement = rename(name, start)?;
        out.push(b'<');
        if closing {
            out.push(b'/');
        }
        out.extend_from_slice(replacement.as_bytes());
        out.push(b'>');
        i += 1;
    }
    Ok(out)
}

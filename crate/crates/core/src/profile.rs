//! Front end for the restricted XPath dialect: linear paths of element
//! names joined by `/` (parent-child) or `//` (ancestor-descendant).
//!
//! A profile written without a leading separator, or with a leading `/`,
//! is anchored: its first tag must be a document root element. A leading
//! `//` lets the first tag occur anywhere.

use crate::dict::{Dictionary, TagCode};

/// Navigation direction between two consecutive location steps.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Axis {
    /// `/` — the step tag must sit exactly one nesting level below.
    Child,
    /// `//` — the step tag may occur anywhere strictly inside.
    Descendant,
}

/// One `axis::tag` location step of a parsed profile.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LocationStep {
    pub axis: Axis,
    pub tag: TagCode,
}

/// A parsed profile: a nonempty ordered list of location steps.
///
/// The first step's axis records the anchoring of the whole profile
/// (`Child` = first tag at document root only).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProfileAst {
    pub profile_id: u32,
    pub steps: Vec<LocationStep>,
}

impl ProfileAst {
    /// True when the first tag may only match a document root element.
    pub fn anchored(&self) -> bool {
        self.steps[0].axis == Axis::Child
    }

    /// Restores the profile's textual form over encoded tag codes.
    pub fn unparse(&self) -> String {
        let mut out = String::new();
        for (i, step) in self.steps.iter().enumerate() {
            match (i, step.axis) {
                (0, Axis::Child) => {}
                (_, Axis::Child) => out.push('/'),
                (_, Axis::Descendant) => out.push_str("//"),
            }
            out.push_str(&step.tag.to_string());
        }
        out
    }
}

/// Errors from profile parsing.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProfileError {
    #[error("syntax error at position {position}: {detail}")]
    Syntax {
        position: usize,
        detail: &'static str,
    },
    #[error("unsupported XPath feature at position {position}: {feature}")]
    UnsupportedFeature {
        position: usize,
        feature: &'static str,
    },
    #[error("unknown tag {name:?} in profile")]
    UnknownTag { name: String },
    #[error("profile set is empty")]
    EmptyProfileSet,
}

/// How step names are resolved to tag codes.
#[derive(Clone, Copy, Debug)]
pub enum TagResolver<'a> {
    /// Names are element names looked up in a dictionary.
    Dict(&'a Dictionary),
    /// Names already are two-symbol codes (the paper's `a0//b0` style).
    Encoded,
}

impl TagResolver<'_> {
    fn resolve(&self, name: &str) -> Result<TagCode, ProfileError> {
        match self {
            TagResolver::Dict(dict) => dict.code_of(name).ok_or(ProfileError::UnknownTag {
                name: name.to_owned(),
            }),
            TagResolver::Encoded => TagCode::parse(name).map_err(|_| ProfileError::UnknownTag {
                name: name.to_owned(),
            }),
        }
    }
}

/// Parses one profile of the grammar `('/'|'//')? name (('/'|'//') name)*`.
pub fn parse_profile(
    raw: &str,
    resolver: TagResolver<'_>,
    profile_id: u32,
) -> Result<ProfileAst, ProfileError> {
    let bytes = raw.as_bytes();
    let mut pos = 0;
    let mut steps = Vec::new();

    if bytes.is_empty() {
        return Err(ProfileError::Syntax {
            position: 0,
            detail: "empty profile",
        });
    }

    loop {
        // The separator is optional only before the first name; after a
        // name the scan below stops at '/' or end of input, so every later
        // iteration starts on a separator.
        let axis = if bytes.get(pos) == Some(&b'/') {
            pos += 1;
            if bytes.get(pos) == Some(&b'/') {
                pos += 1;
                Axis::Descendant
            } else {
                Axis::Child
            }
        } else {
            Axis::Child
        };

        let name_start = pos;
        while pos < bytes.len() && bytes[pos] != b'/' {
            match bytes[pos] {
                b'[' | b']' => {
                    return Err(ProfileError::UnsupportedFeature {
                        position: pos,
                        feature: "predicate",
                    })
                }
                b'*' => {
                    return Err(ProfileError::UnsupportedFeature {
                        position: pos,
                        feature: "wildcard",
                    })
                }
                b'@' => {
                    return Err(ProfileError::UnsupportedFeature {
                        position: pos,
                        feature: "attribute",
                    })
                }
                b if b.is_ascii_whitespace() => {
                    return Err(ProfileError::Syntax {
                        position: pos,
                        detail: "whitespace in step name",
                    })
                }
                _ => pos += 1,
            }
        }
        let name = &raw[name_start..pos];
        if name == "." || name == ".." {
            return Err(ProfileError::UnsupportedFeature {
                position: name_start,
                feature: "self/parent step",
            });
        }
        if name.is_empty() {
            return Err(ProfileError::Syntax {
                position: name_start,
                detail: "empty step name",
            });
        }
        let tag = resolver.resolve(name)?;
        steps.push(LocationStep { axis, tag });

        if pos == bytes.len() {
            break;
        }
    }

    Ok(ProfileAst { profile_id, steps })
}

/// Parses a profile file: one expression per line, blank lines skipped,
/// accepted line order defining `profile_id` from zero.
pub fn parse_profile_file(
    text: &str,
    resolver: TagResolver<'_>,
) -> Result<Vec<ProfileAst>, ProfileError> {
    let mut profiles = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        profiles.push(parse_profile(line, resolver, profiles.len() as u32)?);
    }
    if profiles.is_empty() {
        return Err(ProfileError::EmptyProfileSet);
    }
    Ok(profiles)
}

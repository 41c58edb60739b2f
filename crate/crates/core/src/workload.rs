//! Experiment workload generation: profile sets of fixed length with a
//! controllable parent-child axis mix and shared-prefix rate, plus
//! non-recursive random documents of an exact target size, bound together
//! by one tag dictionary.
//!
//! All generation is driven by an explicit seed through a local SplitMix64
//! generator, so outputs are byte-identical across runs and toolchains.

use crate::dict::{Dictionary, TagCode};
use crate::profile::ProfileAst;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WorkloadError {
    #[error("invalid parameter: {0}")]
    InvalidParameters(String),
}

/// SplitMix64: tiny, seedable, and stable; no external RNG dependency so
/// generated corpora never drift across dependency upgrades.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    /// True with probability `p`.
    pub fn chance(&mut self, p: f64) -> bool {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64) < p
    }
}

/// Synthetic element names; index 0 is the document root tag.
pub fn tag_names(alphabet: usize) -> Vec<String> {
    const WORDS: [&str; 16] = [
        "catalog", "item", "title", "author", "price", "note", "entry", "meta", "link", "desc",
        "code", "label", "group", "value", "unit", "ref",
    ];
    (0..alphabet)
        .map(|i| {
            WORDS
                .get(i)
                .map(|w| (*w).to_owned())
                .unwrap_or_else(|| format!("tag{i:02}"))
        })
        .collect()
}

/// Parameters for profile-set generation.
#[derive(Clone, Debug)]
pub struct ProfileGenSpec {
    pub count: usize,
    /// Tags per profile.
    pub length: usize,
    /// Fraction of parent-child axes among the non-first steps; every
    /// profile receives exactly `round(axis_mix * (length - 1))` of them.
    pub axis_mix: f64,
    /// Probability that a profile extends the prefix of an earlier one.
    /// At exactly 0.0 first tags are forced pairwise distinct so no
    /// sharing is possible at all (requires `count <= alphabet`).
    pub shared_prefix_rate: f64,
    /// Probability of an unanchored (leading `//`) profile.
    pub unanchored_rate: f64,
    /// Tag universe size (dictionary entries).
    pub alphabet: usize,
    pub seed: u64,
}

impl Default for ProfileGenSpec {
    fn default() -> Self {
        ProfileGenSpec {
            count: 16,
            length: 2,
            axis_mix: 0.5,
            shared_prefix_rate: 0.5,
            unanchored_rate: 0.0,
            alphabet: 12,
            seed: 1,
        }
    }
}

/// A generated profile set and the dictionary binding it to documents.
#[derive(Clone, Debug)]
pub struct GeneratedProfiles {
    /// Raw XPath expressions over element names, one per profile.
    pub raws: Vec<String>,
    pub dictionary: Dictionary,
}

#[derive(Clone, Debug)]
struct ProfileDraft {
    anchored: bool,
    /// (is_child_axis, tag index) per step; the first entry's axis flag is
    /// ignored (anchoring covers it).
    steps: Vec<(bool, usize)>,
}

impl ProfileDraft {
    fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        if !self.anchored {
            out.push_str("//");
        }
        for (i, &(child, tag)) in self.steps.iter().enumerate() {
            if i > 0 {
                out.push_str(if child { "/" } else { "//" });
            }
            out.push_str(&names[tag]);
        }
        out
    }
}

/// Generates a deterministic profile set.
pub fn gen_profiles(spec: &ProfileGenSpec) -> Result<GeneratedProfiles, WorkloadError> {
    if spec.count == 0 {
        return Err(WorkloadError::InvalidParameters(
            "count must be >= 1".into(),
        ));
    }
    if spec.length == 0 {
        return Err(WorkloadError::InvalidParameters(
            "length must be >= 1".into(),
        ));
    }
    if !(0.0..=1.0).contains(&spec.axis_mix) {
        return Err(WorkloadError::InvalidParameters(
            "axis_mix must be in [0, 1]".into(),
        ));
    }
    if !(0.0..=1.0).contains(&spec.shared_prefix_rate)
        || !(0.0..=1.0).contains(&spec.unanchored_rate)
    {
        return Err(WorkloadError::InvalidParameters(
            "rates must be in [0, 1]".into(),
        ));
    }
    if spec.alphabet < spec.length {
        return Err(WorkloadError::InvalidParameters(
            "alphabet must be >= length so steps can avoid repeating tags".into(),
        ));
    }
    if spec.alphabet > 260 {
        return Err(WorkloadError::InvalidParameters(
            "alphabet exceeds code capacity (260)".into(),
        ));
    }
    let zero_sharing = spec.shared_prefix_rate == 0.0;
    if zero_sharing && spec.count > spec.alphabet {
        return Err(WorkloadError::InvalidParameters(
            "shared_prefix_rate 0 requires count <= alphabet for distinct first tags".into(),
        ));
    }

    let names = tag_names(spec.alphabet);
    let dictionary = Dictionary::build(&names).expect("synthetic names are valid and distinct");
    let child_budget = (spec.axis_mix * (spec.length - 1) as f64).round() as usize;
    let mut rng = SplitMix64::new(spec.seed);
    let mut drafts: Vec<ProfileDraft> = Vec::with_capacity(spec.count);

    for index in 0..spec.count {
        let draft = if zero_sharing {
            // pairwise distinct first tags: no two profiles can share
            fresh_draft(&mut rng, spec, child_budget, Some(index))
        } else if !drafts.is_empty() && rng.chance(spec.shared_prefix_rate) {
            extend_draft(&mut rng, spec, child_budget, &drafts)
        } else {
            fresh_draft(&mut rng, spec, child_budget, None)
        };
        drafts.push(draft);
    }

    let raws = drafts.iter().map(|d| d.render(&names)).collect();
    Ok(GeneratedProfiles { raws, dictionary })
}

/// Draws a profile from scratch. `forced_first` pins the first tag (used
/// by the zero-sharing mode); otherwise anchored profiles start at the
/// root tag most of the time, with occasional strays that exercise the
/// root-anchor check.
fn fresh_draft(
    rng: &mut SplitMix64,
    spec: &ProfileGenSpec,
    child_budget: usize,
    forced_first: Option<usize>,
) -> ProfileDraft {
    let anchored = !rng.chance(spec.unanchored_rate);
    let first = match forced_first {
        Some(tag) => tag,
        None => {
            if anchored && !rng.chance(0.1) {
                0
            } else {
                rng.below(spec.alphabet)
            }
        }
    };
    let mut steps = vec![(false, first)];
    let mut used = vec![first];
    let child_positions = pick_positions(rng, spec.length - 1, child_budget);
    for i in 0..spec.length - 1 {
        let tag = draw_unused(rng, spec.alphabet, &used);
        used.push(tag);
        steps.push((child_positions.contains(&i), tag));
    }
    ProfileDraft { anchored, steps }
}

/// Copies a random proper prefix of an earlier profile and fills the rest
/// with fresh steps, keeping the total parent-child count exact.
fn extend_draft(
    rng: &mut SplitMix64,
    spec: &ProfileGenSpec,
    child_budget: usize,
    pool: &[ProfileDraft],
) -> ProfileDraft {
    let base = &pool[rng.below(pool.len())];
    if spec.length == 1 {
        // a length-1 profile has no proper prefix to extend; clone it so
        // the sharing knob still produces duplicate single-tag profiles
        return base.clone();
    }
    let mut prefix_len = 1 + rng.below(spec.length - 1);
    loop {
        let copied_children = base.steps[1..prefix_len].iter().filter(|(c, _)| *c).count();
        let fresh = spec.length - prefix_len;
        if child_budget >= copied_children && child_budget - copied_children <= fresh {
            break;
        }
        prefix_len -= 1;
    }
    let mut steps: Vec<(bool, usize)> = base.steps[..prefix_len].to_vec();
    let mut used: Vec<usize> = steps.iter().map(|&(_, t)| t).collect();
    let copied_children = steps[1..].iter().filter(|(c, _)| *c).count();
    let remaining_children = child_budget - copied_children;
    let fresh_count = spec.length - prefix_len;
    let child_positions = pick_positions(rng, fresh_count, remaining_children);
    for i in 0..fresh_count {
        let tag = draw_unused(rng, spec.alphabet, &used);
        used.push(tag);
        steps.push((child_positions.contains(&i), tag));
    }
    ProfileDraft {
        anchored: base.anchored,
        steps,
    }
}

/// Chooses `k` distinct positions out of `0..n`.
fn pick_positions(rng: &mut SplitMix64, n: usize, k: usize) -> Vec<usize> {
    debug_assert!(k <= n);
    let mut slots: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + rng.below(n - i);
        slots.swap(i, j);
    }
    slots.truncate(k);
    slots
}

fn draw_unused(rng: &mut SplitMix64, alphabet: usize, used: &[usize]) -> usize {
    loop {
        let tag = rng.below(alphabet);
        if !used.contains(&tag) {
            return tag;
        }
    }
}

/// A tag chain the document generator can weave in as a consecutive
/// parent-child run, coupling documents to profile structure the way a
/// shared DTD couples generated corpora.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuidePath {
    pub tags: Vec<TagCode>,
    /// Weave only directly under the document root (for chains derived
    /// from root-anchored profiles).
    pub from_root: bool,
}

/// Derives guide paths from a profile set: the continuation of every
/// root-anchored profile and the full chain of every unanchored one.
/// Chains with repeated tags cannot be woven non-recursively and are
/// skipped, as are anchored profiles whose first tag is not the root.
pub fn guide_paths_from_profiles(asts: &[ProfileAst], root: TagCode) -> Vec<GuidePath> {
    let mut out: Vec<GuidePath> = Vec::new();
    for ast in asts {
        let (tags, from_root): (Vec<TagCode>, bool) = if ast.anchored() {
            if ast.steps[0].tag != root || ast.steps.len() == 1 {
                continue;
            }
            (ast.steps[1..].iter().map(|s| s.tag).collect(), true)
        } else {
            (ast.steps.iter().map(|s| s.tag).collect(), false)
        };
        let mut sorted = tags.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != tags.len() || tags.contains(&root) {
            continue;
        }
        let guide = GuidePath { tags, from_root };
        if !out.contains(&guide) {
            out.push(guide);
        }
    }
    out
}

/// Parameters for document generation.
#[derive(Clone, Debug)]
pub struct DocGenSpec {
    /// Exact output size in bytes.
    pub size_bytes: usize,
    /// Maximum element nesting depth.
    pub max_depth: usize,
    /// Tag chains occasionally woven into the element structure.
    pub guide_paths: Vec<GuidePath>,
    /// Probability of starting a guide weave at an eligible position.
    pub guide_rate: f64,
    pub seed: u64,
}

impl Default for DocGenSpec {
    fn default() -> Self {
        DocGenSpec {
            size_bytes: 4096,
            max_depth: 8,
            guide_paths: Vec::new(),
            guide_rate: 0.0,
            seed: 1,
        }
    }
}

/// Generates a well-formed, non-recursive encoded document of exactly
/// `size_bytes` bytes: a single root (the dictionary's first code) with
/// random children and `[\w\s]` text filler. No element ever nests inside
/// a same-tag ancestor, so every tag on the open path is distinct.
pub fn gen_document(spec: &DocGenSpec, dict: &Dictionary) -> Result<Vec<u8>, WorkloadError> {
    if dict.is_empty() {
        return Err(WorkloadError::InvalidParameters(
            "dictionary is empty".into(),
        ));
    }
    if spec.size_bytes < 9 {
        return Err(WorkloadError::InvalidParameters(
            "size_bytes must be >= 9 (the smallest well-formed document)".into(),
        ));
    }
    if spec.max_depth == 0 {
        return Err(WorkloadError::InvalidParameters(
            "max_depth must be >= 1".into(),
        ));
    }

    if !(0.0..=1.0).contains(&spec.guide_rate) {
        return Err(WorkloadError::InvalidParameters(
            "guide_rate must be in [0, 1]".into(),
        ));
    }

    let codes = dict.codes();
    let mut rng = SplitMix64::new(spec.seed);
    let mut out: Vec<u8> = Vec::with_capacity(spec.size_bytes);
    let mut stack = vec![codes[0]];
    out.extend_from_slice(&codes[0].open_bytes());
    // active weave: (guide index, next position)
    let mut weave: Option<(usize, usize)> = None;

    loop {
        let reserve = 5 * stack.len();
        let remaining = spec.size_bytes - out.len() - reserve;
        if remaining == 0 {
            break;
        }
        if remaining < 9 {
            push_text(&mut rng, &mut out, remaining);
            break;
        }

        if weave.is_none() && !spec.guide_paths.is_empty() && rng.chance(spec.guide_rate) {
            let g = rng.below(spec.guide_paths.len());
            let guide = &spec.guide_paths[g];
            let positioned = !guide.from_root || stack.len() == 1;
            let feasible = positioned
                && !guide.tags.is_empty()
                && stack.len() + guide.tags.len() <= spec.max_depth
                && remaining >= 9 * guide.tags.len()
                && guide.tags.iter().all(|t| !stack.contains(t));
            if feasible {
                weave = Some((g, 0));
            }
        }
        if let Some((g, pos)) = weave {
            let guide = &spec.guide_paths[g];
            let child = guide.tags[pos];
            out.extend_from_slice(&child.open_bytes());
            stack.push(child);
            weave = if pos + 1 < guide.tags.len() {
                Some((g, pos + 1))
            } else {
                None
            };
            continue;
        }

        let can_open = stack.len() < spec.max_depth && codes.iter().any(|c| !stack.contains(c));
        let roll = rng.next_u64() % 100;
        if can_open && roll < 45 {
            let pool: Vec<_> = codes.iter().filter(|c| !stack.contains(c)).collect();
            let child = *pool[rng.below(pool.len())];
            out.extend_from_slice(&child.open_bytes());
            stack.push(child);
        } else if roll < 80 || stack.len() == 1 {
            let len = 1 + rng.below(remaining.min(24));
            push_text(&mut rng, &mut out, len);
        } else {
            let closed = stack.pop().expect("non-root close requires depth > 1");
            out.extend_from_slice(&closed.close_bytes());
        }
    }

    while let Some(code) = stack.pop() {
        out.extend_from_slice(&code.close_bytes());
    }
    debug_assert_eq!(out.len(), spec.size_bytes);
    Ok(out)
}

fn push_text(rng: &mut SplitMix64, out: &mut Vec<u8>, len: usize) {
    const FILLER: &[u8] = b"abcdefghijklmnopqrstuvwxyz      0123456789_";
    for _ in 0..len {
        out.push(FILLER[rng.below(FILLER.len())]);
    }
}

/// Renders the manifest recording every generation parameter and seed.
pub fn render_manifest(
    profiles: &ProfileGenSpec,
    docs: &DocGenSpec,
    doc_count: usize,
    files: &[String],
) -> String {
    let mut out = String::new();
    out.push_str("# pathgate workload manifest\n");
    out.push_str(&format!("profile_count={}\n", profiles.count));
    out.push_str(&format!("profile_length={}\n", profiles.length));
    out.push_str(&format!("axis_mix={}\n", profiles.axis_mix));
    out.push_str(&format!(
        "shared_prefix_rate={}\n",
        profiles.shared_prefix_rate
    ));
    out.push_str(&format!("unanchored_rate={}\n", profiles.unanchored_rate));
    out.push_str(&format!("alphabet={}\n", profiles.alphabet));
    out.push_str(&format!("profile_seed={}\n", profiles.seed));
    out.push_str(&format!("doc_count={doc_count}\n"));
    out.push_str(&format!("doc_size_bytes={}\n", docs.size_bytes));
    out.push_str(&format!("doc_max_depth={}\n", docs.max_depth));
    out.push_str(&format!("doc_guide_rate={}\n", docs.guide_rate));
    out.push_str(&format!("doc_guide_paths={}\n", docs.guide_paths.len()));
    out.push_str(&format!("doc_seed_base={}\n", docs.seed));
    for file in files {
        out.push_str(&format!("file={file}\n"));
    }
    out
}

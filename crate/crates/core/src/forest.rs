//! Common-prefix clustering of stack-regex programs.
//!
//! Programs are sorted by their serialized profile form and grouped
//! recursively, growing each shared prefix one tag unit at a time. The
//! resulting forest is lossless: expanding every root-to-terminal path
//! reproduces the original program set exactly.
//!
//! Sharing is per whole tag unit, so `a0/b0` and `a0//b0` share only the
//! `a0` match (their second units differ in the stack-check atom), while
//! `a0//b0//c0//d0` and `a0//b0//c0//e0` share the full `a0//b0//c0`
//! chain. Profiles with different anchoring never share a tree.

use crate::ir::{RegexAtom, StackRegexIr, TagUnit};

/// A forest of common-prefix trees over one profile set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixForest {
    pub trees: Vec<PrefixTree>,
}

/// One tree; all profiles below it agree on anchoring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixTree {
    pub anchored: bool,
    pub root: PrefixNode,
}

/// A run of shared atoms plus the branches that continue it. Profiles
/// whose whole program equals the path down to this node terminate here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixNode {
    pub shared_atoms: Vec<RegexAtom>,
    pub children: Vec<PrefixNode>,
    pub terminal_profiles: Vec<u32>,
}

impl PrefixNode {
    /// Tag units of this node's shared atom run.
    pub fn units(&self) -> Vec<TagUnit<'_>> {
        crate::ir::units_of(&self.shared_atoms).collect()
    }
}

impl PrefixForest {
    pub fn node_count(&self) -> usize {
        fn count(node: &PrefixNode) -> usize {
            1 + node.children.iter().map(count).sum::<usize>()
        }
        self.trees.iter().map(|t| count(&t.root)).sum()
    }

    pub fn profile_count(&self) -> usize {
        fn count(node: &PrefixNode) -> usize {
            node.terminal_profiles.len() + node.children.iter().map(count).sum::<usize>()
        }
        self.trees.iter().map(|t| count(&t.root)).sum()
    }

    /// Deterministic indented rendering, one line per node.
    pub fn render(&self) -> String {
        fn chunk_text(node: &PrefixNode, lead: &str) -> String {
            let mut out = String::from(lead);
            for (i, unit) in node.units().iter().enumerate() {
                if i > 0 || unit.guard.is_some() {
                    out.push_str(if unit.tos.is_some() { "/" } else { "//" });
                }
                out.push_str(&unit.tag.to_string());
            }
            out
        }
        fn walk(node: &PrefixNode, lead: &str, depth: usize, out: &mut String) {
            out.push_str(&"  ".repeat(depth));
            out.push_str(&chunk_text(node, lead));
            if !node.terminal_profiles.is_empty() {
                let pids: Vec<String> = node
                    .terminal_profiles
                    .iter()
                    .map(|p| format!("P{p}"))
                    .collect();
                out.push_str(" => ");
                out.push_str(&pids.join(" "));
            }
            out.push('\n');
            for child in &node.children {
                walk(child, "", depth + 1, out);
            }
        }
        let mut out = String::new();
        for tree in &self.trees {
            walk(
                &tree.root,
                if tree.anchored { "" } else { "//" },
                0,
                &mut out,
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ForestError {
    #[error("cannot build a prefix forest from an empty program set")]
    EmptyInput,
    #[error("duplicate profile id {0}")]
    DuplicateProfileId(u32),
}

struct Entry {
    anchored: bool,
    units: Vec<Vec<RegexAtom>>,
    serialized: String,
    profile_id: u32,
}

/// Clusters a program set into its common-prefix forest.
pub fn build_prefix_forest(irs: &[StackRegexIr]) -> Result<PrefixForest, ForestError> {
    if irs.is_empty() {
        return Err(ForestError::EmptyInput);
    }
    let mut seen = std::collections::HashSet::new();
    for ir in irs {
        if !seen.insert(ir.profile_id) {
            return Err(ForestError::DuplicateProfileId(ir.profile_id));
        }
    }

    let mut entries: Vec<Entry> = irs
        .iter()
        .map(|ir| Entry {
            anchored: ir.anchored,
            units: ir.units().map(|u| u.atoms.to_vec()).collect(),
            serialized: ir.serialized(),
            profile_id: ir.profile_id,
        })
        .collect();
    entries.sort_by(|a, b| {
        a.serialized
            .cmp(&b.serialized)
            .then(a.profile_id.cmp(&b.profile_id))
    });

    let mut trees = Vec::new();
    for group in consecutive_groups(entries, |e| (e.anchored, e.units[0].clone())) {
        let anchored = group[0].anchored;
        trees.push(PrefixTree {
            anchored,
            root: make_node(group, 0),
        });
    }
    Ok(PrefixForest { trees })
}

/// Builds the node for a group of entries that all agree on `units[depth]`,
/// growing the shared run one unit at a time while every entry continues
/// identically and none terminates.
fn make_node(group: Vec<Entry>, depth: usize) -> PrefixNode {
    let mut end = depth + 1;
    loop {
        if group.iter().any(|e| e.units.len() == end) {
            break;
        }
        let candidate = &group[0].units[end];
        if !group.iter().all(|e| &e.units[end] == candidate) {
            break;
        }
        end += 1;
    }

    let shared_atoms: Vec<RegexAtom> = group[0].units[depth..end]
        .iter()
        .flat_map(|u| u.iter().copied())
        .collect();
    let mut terminal_profiles = Vec::new();
    let mut rest = Vec::new();
    for entry in group {
        if entry.units.len() == end {
            terminal_profiles.push(entry.profile_id);
        } else {
            rest.push(entry);
        }
    }
    let children = consecutive_groups(rest, |e| e.units[end].clone())
        .into_iter()
        .map(|g| make_node(g, end))
        .collect();
    PrefixNode {
        shared_atoms,
        children,
        terminal_profiles,
    }
}

/// Groups consecutive entries with an equal key, preserving order.
fn consecutive_groups<K: PartialEq>(
    entries: Vec<Entry>,
    key: impl Fn(&Entry) -> K,
) -> Vec<Vec<Entry>> {
    let mut groups: Vec<Vec<Entry>> = Vec::new();
    let mut current_key: Option<K> = None;
    for entry in entries {
        let k = key(&entry);
        if current_key.as_ref() == Some(&k) {
            groups.last_mut().unwrap().push(entry);
        } else {
            current_key = Some(k);
            groups.push(vec![entry]);
        }
    }
    groups
}

/// Expands a forest back to the program multiset it was built from.
pub fn expand_forest(forest: &PrefixForest) -> Vec<StackRegexIr> {
    fn walk(node: &PrefixNode, anchored: bool, prefix: &[RegexAtom], out: &mut Vec<StackRegexIr>) {
        let mut atoms = prefix.to_vec();
        atoms.extend_from_slice(&node.shared_atoms);
        for &pid in &node.terminal_profiles {
            out.push(StackRegexIr {
                profile_id: pid,
                anchored,
                uses_stack: atoms.iter().any(|a| matches!(a, RegexAtom::StackCheck(_))),
                atoms: atoms.clone(),
            });
        }
        for child in &node.children {
            walk(child, anchored, &atoms, out);
        }
    }
    let mut out = Vec::new();
    for tree in &forest.trees {
        walk(&tree.root, tree.anchored, &[], &mut out);
    }
    out
}

//! Independent reference evaluator: parses an encoded document into an
//! element tree and answers each profile by exhaustive tree search.
//!
//! Deliberately simple and slow; its only job is to provide ground truth
//! for differential testing of the datapath simulator. Unlike the
//! simulator's strict tag filter it also accepts self-closing `<xy/>`
//! elements, which are convenient in hand-written fixtures.

use crate::dict::TagCode;
use crate::profile::{Axis, ProfileAst};
use crate::sim::MatchEvent;

pub type NodeId = usize;

/// One element of the parsed document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementNode {
    pub tag: TagCode,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    /// Offset of the `<` opening this element.
    pub start: usize,
    /// Offset of the `>` completing the open tag.
    pub open_complete: usize,
    /// Offset of the final `>` of the close tag.
    pub end: usize,
}

/// The parsed document: nodes in document (open-tag) order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ElementTree {
    pub nodes: Vec<ElementNode>,
    pub roots: Vec<NodeId>,
}

impl ElementTree {
    /// Nodes with the given tag, in document order.
    fn nodes_with_tag(&self, tag: TagCode) -> Vec<NodeId> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.tag == tag)
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("malformed document at byte offset {offset}")]
    Malformed { offset: usize },
}

/// Parses an encoded document (2-symbol tags) into its element tree.
pub fn parse_tree(doc: &[u8]) -> Result<ElementTree, TreeError> {
    let mut tree = ElementTree::default();
    let mut open: Vec<NodeId> = Vec::new();
    let mut i = 0;
    while i < doc.len() {
        if doc[i] != b'<' {
            i += 1;
            continue;
        }
        let start = i;
        let closing = doc.get(i + 1) == Some(&b'/');
        let sym_at = if closing { i + 2 } else { i + 1 };
        let s0 = *doc
            .get(sym_at)
            .ok_or(TreeError::Malformed { offset: start })?;
        let s1 = *doc
            .get(sym_at + 1)
            .ok_or(TreeError::Malformed { offset: start })?;
        let code = TagCode::new(s0, s1).map_err(|_| TreeError::Malformed { offset: start })?;
        let mut after = sym_at + 2;
        let self_closing = !closing && doc.get(after) == Some(&b'/');
        if self_closing {
            after += 1;
        }
        if doc.get(after) != Some(&b'>') {
            return Err(TreeError::Malformed { offset: start });
        }

        if closing {
            let node_id = open.pop().ok_or(TreeError::Malformed { offset: start })?;
            if tree.nodes[node_id].tag != code {
                return Err(TreeError::Malformed { offset: start });
            }
            tree.nodes[node_id].end = after;
        } else {
            let node_id = tree.nodes.len();
            let parent = open.last().copied();
            tree.nodes.push(ElementNode {
                tag: code,
                parent,
                children: Vec::new(),
                start,
                open_complete: after,
                end: after,
            });
            match parent {
                Some(p) => tree.nodes[p].children.push(node_id),
                None => tree.roots.push(node_id),
            }
            if !self_closing {
                open.push(node_id);
            }
        }
        i = after + 1;
    }
    if let Some(&unclosed) = open.last() {
        return Err(TreeError::Malformed {
            offset: tree.nodes[unclosed].start,
        });
    }
    Ok(tree)
}

/// A successful evaluation: the node chain realizing the profile, chosen
/// with the earliest final-node open offset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub path: Vec<NodeId>,
    /// Offset of the `>` completing the final node's open tag; directly
    /// comparable to the simulator's `MatchEvent::byte_offset`.
    pub final_offset: usize,
}

impl Witness {
    pub fn spans(&self, tree: &ElementTree) -> Vec<(usize, usize)> {
        self.path
            .iter()
            .map(|&n| (tree.nodes[n].start, tree.nodes[n].end))
            .collect()
    }
}

/// Evaluates one profile against a parsed document.
///
/// A profile matches iff there is a node chain `n1..nk` carrying the step
/// tags where `n1` is a root (anchored profile) or any node, and each
/// `n(i+1)` is a child (`/`) or proper descendant (`//`) of `ni`. Text
/// content never participates.
pub fn evaluate(tree: &ElementTree, ast: &ProfileAst) -> Option<Witness> {
    let size = tree.nodes.len();
    let first = ast.steps[0];
    let mut level: Vec<NodeId> = if ast.anchored() {
        tree.roots
            .iter()
            .copied()
            .filter(|&r| tree.nodes[r].tag == first.tag)
            .collect()
    } else {
        tree.nodes_with_tag(first.tag)
    };
    // one predecessor per reached node, per level, for path reconstruction
    let mut preds: Vec<Vec<Option<NodeId>>> = Vec::new();

    for step in &ast.steps[1..] {
        let mut pred: Vec<Option<NodeId>> = vec![None; size];
        let mut next: Vec<NodeId> = Vec::new();
        match step.axis {
            Axis::Child => {
                for &n in &level {
                    for &c in &tree.nodes[n].children {
                        if tree.nodes[c].tag == step.tag && pred[c].is_none() {
                            pred[c] = Some(n);
                            next.push(c);
                        }
                    }
                }
            }
            Axis::Descendant => {
                // mark every proper descendant of the level once,
                // remembering which level node first reached it
                let mut origin: Vec<Option<NodeId>> = vec![None; size];
                let mut stack: Vec<(NodeId, NodeId)> = Vec::new();
                for &n in &level {
                    for &c in &tree.nodes[n].children {
                        stack.push((c, n));
                    }
                }
                while let Some((m, from)) = stack.pop() {
                    if origin[m].is_some() {
                        continue;
                    }
                    origin[m] = Some(from);
                    for &c in &tree.nodes[m].children {
                        stack.push((c, from));
                    }
                }
                for m in tree.nodes_with_tag(step.tag) {
                    if let Some(from) = origin[m] {
                        pred[m] = Some(from);
                        next.push(m);
                    }
                }
            }
        }
        preds.push(pred);
        level = next;
        if level.is_empty() {
            return None;
        }
    }

    // earliest final node by open offset, then walk predecessors back
    let &final_node = level.iter().min_by_key(|&&n| tree.nodes[n].open_complete)?;
    let mut path = vec![final_node];
    let mut current = final_node;
    for pred in preds.iter().rev() {
        current = pred[current].expect("reached nodes carry a predecessor");
        path.push(current);
    }
    path.reverse();
    Some(Witness {
        final_offset: tree.nodes[final_node].open_complete,
        path,
    })
}

/// Evaluates a whole profile set, emitting one record per matched profile
/// in the simulator's match-output format.
pub fn match_set(tree: &ElementTree, profiles: &[ProfileAst], doc_id: u32) -> Vec<MatchEvent> {
    let mut events: Vec<MatchEvent> = profiles
        .iter()
        .filter_map(|ast| {
            evaluate(tree, ast).map(|w| MatchEvent {
                doc_id,
                profile_id: ast.profile_id,
                byte_offset: w.final_offset,
            })
        })
        .collect();
    events.sort_unstable();
    events
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{parse_profile, LocationStep, TagResolver};

    fn ast(raw: &str) -> ProfileAst {
        parse_profile(raw, TagResolver::Encoded, 0).unwrap()
    }

    fn matched(doc: &[u8], raw: &str) -> bool {
        evaluate(&parse_tree(doc).unwrap(), &ast(raw)).is_some()
    }

    #[test]
    fn single_root() {
        let tree = parse_tree(b"<a0></a0>").unwrap();
        assert_eq!(tree.roots.len(), 1);
        assert_eq!(tree.nodes[0].tag.to_string(), "a0");
        assert_eq!(tree.nodes[0].start, 0);
        assert_eq!(tree.nodes[0].open_complete, 3);
        assert_eq!(tree.nodes[0].end, 8);
    }

    #[test]
    fn nested_child() {
        let tree = parse_tree(b"<a0><b0></b0></a0>").unwrap();
        assert_eq!(tree.nodes.len(), 2);
        assert_eq!(tree.nodes[1].parent, Some(0));
        assert_eq!(tree.nodes[0].children, vec![1]);
    }

    #[test]
    fn spans_nest_strictly() {
        let tree = parse_tree(b"<a0>x<b0><c0></c0></b0>y</a0>").unwrap();
        for (i, n) in tree.nodes.iter().enumerate() {
            if let Some(p) = n.parent {
                let parent = &tree.nodes[p];
                assert!(parent.start < n.start && n.end < parent.end, "node {i}");
            }
        }
    }

    #[test]
    fn self_closing_elements() {
        let tree = parse_tree(b"<a0><b0/></a0>").unwrap();
        assert_eq!(tree.nodes.len(), 2);
        assert_eq!(tree.nodes[1].children.len(), 0);
        assert_eq!(tree.nodes[1].end, 8);
        assert!(matched(b"<a0><c0><b0/></c0></a0>", "a0//b0"));
    }

    #[test]
    fn malformed_documents() {
        assert!(parse_tree(b"<a0>").is_err());
        assert!(parse_tree(b"</a0>").is_err());
        assert!(parse_tree(b"<a0></b0>").is_err());
        assert!(parse_tree(b"<a0").is_err());
        assert!(parse_tree(b"<a0><b0></a0></b0>").is_err());
    }

    #[test]
    fn descendant_vs_child_axes() {
        let doc = b"<a0><c0><b0></b0></c0></a0>";
        assert!(matched(doc, "a0//b0"));
        assert!(!matched(doc, "a0/b0"));
        assert!(matched(doc, "a0/c0/b0"));
    }

    #[test]
    fn missing_tag_never_matches() {
        assert!(!matched(b"<b0></b0>", "a0"));
        assert!(matched(b"<b0></b0>", "b0"));
    }

    #[test]
    fn anchoring_restricts_first_step_to_roots() {
        let doc = b"<r0><a0><b0></b0></a0></r0>";
        assert!(!matched(doc, "a0//b0"));
        assert!(matched(doc, "//a0//b0"));
        assert!(matched(doc, "r0//b0"));
    }

    #[test]
    fn witness_is_earliest_final_node() {
        let doc = b"<a0><x0><b0></b0></x0><b0></b0></a0>";
        let tree = parse_tree(doc).unwrap();
        let w = evaluate(&tree, &ast("a0//b0")).unwrap();
        // first b0 open completes at offset 11
        assert_eq!(w.final_offset, 11);
        assert_eq!(w.path.len(), 2);
        let spans = w.spans(&tree);
        assert_eq!(spans[0].0, 0);
        assert_eq!(spans[1].0, 8);
    }

    #[test]
    fn text_content_is_ignored() {
        let with_text = b"<a0>lorem ipsum<b0>dolor</b0>sit</a0>";
        let without = b"<a0><b0></b0></a0>";
        assert_eq!(matched(with_text, "a0/b0"), matched(without, "a0/b0"));
    }

    /// The even dumber second oracle: enumerate every node sequence.
    fn dumb_evaluate(tree: &ElementTree, ast: &ProfileAst) -> Option<usize> {
        fn is_proper_descendant(tree: &ElementTree, node: NodeId, ancestor: NodeId) -> bool {
            let mut cur = tree.nodes[node].parent;
            while let Some(p) = cur {
                if p == ancestor {
                    return true;
                }
                cur = tree.nodes[p].parent;
            }
            false
        }
        fn extend(
            tree: &ElementTree,
            steps: &[LocationStep],
            chain: &mut Vec<NodeId>,
            best: &mut Option<usize>,
        ) {
            if chain.len() == steps.len() {
                let last = *chain.last().unwrap();
                let offset = tree.nodes[last].open_complete;
                if best.is_none_or(|b| offset < b) {
                    *best = Some(offset);
                }
                return;
            }
            let step = steps[chain.len()];
            for n in 0..tree.nodes.len() {
                if tree.nodes[n].tag != step.tag {
                    continue;
                }
                let ok = match chain.last() {
                    None => step.axis == Axis::Descendant || tree.nodes[n].parent.is_none(),
                    Some(&prev) => match step.axis {
                        Axis::Child => tree.nodes[n].parent == Some(prev),
                        Axis::Descendant => is_proper_descendant(tree, n, prev),
                    },
                };
                if ok {
                    chain.push(n);
                    extend(tree, steps, chain, best);
                    chain.pop();
                }
            }
        }
        let mut best = None;
        extend(tree, &ast.steps, &mut Vec::new(), &mut best);
        best
    }

    #[test]
    fn agrees_with_exhaustive_enumeration() {
        let mut state = 0x851f42d4c957f2d1u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 33) as usize
        };
        for round in 0..300 {
            // random tree of up to 12 nodes over 4 tags
            let node_count = 1 + next() % 12;
            let tags = [b"a0", b"b0", b"c0", b"d0"];
            let mut doc = Vec::new();
            let mut open: Vec<&[u8; 2]> = Vec::new();
            let mut emitted = 0;
            while emitted < node_count {
                let act = next() % 3;
                if act < 2 || open.is_empty() {
                    let tag = tags[next() % 4];
                    doc.extend_from_slice(b"<");
                    doc.extend_from_slice(tag);
                    doc.extend_from_slice(b">");
                    open.push(tag);
                    emitted += 1;
                } else {
                    let tag = open.pop().unwrap();
                    doc.extend_from_slice(b"</");
                    doc.extend_from_slice(tag);
                    doc.extend_from_slice(b">");
                }
            }
            while let Some(tag) = open.pop() {
                doc.extend_from_slice(b"</");
                doc.extend_from_slice(tag);
                doc.extend_from_slice(b">");
            }
            let tree = parse_tree(&doc).unwrap();

            // random profile of up to 4 steps
            let len = 1 + next() % 4;
            let mut raw = String::new();
            if next() % 2 == 0 {
                raw.push_str("//");
            }
            for i in 0..len {
                if i > 0 {
                    raw.push_str(if next() % 2 == 0 { "/" } else { "//" });
                }
                raw.push_str(std::str::from_utf8(tags[next() % 4]).unwrap());
            }
            let ast = parse_profile(&raw, TagResolver::Encoded, 0).unwrap();

            let fast = evaluate(&tree, &ast).map(|w| w.final_offset);
            let dumb = dumb_evaluate(&tree, &ast);
            assert_eq!(
                fast,
                dumb,
                "round {round}: profile {raw} on {:?}",
                std::str::from_utf8(&doc)
            );
        }
    }
}

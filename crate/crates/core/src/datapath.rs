//! Block-level hardware model of the filter datapath.
//!
//! A prefix forest lowers to a network of comparator blocks: one tag
//! matcher per open tag, a negation block per guarded segment, a shared
//! tag filter + stack with per-step top-of-stack matchers for parent-child
//! axes, a result cell per profile, and one output priority encoder per
//! profile group (with / without stack use). Every block carries its area
//! in comparator bits; matchers cost 8 bits per pattern byte undecoded and
//! 1 bit per byte behind the shared character pre-decoder.

use std::collections::HashMap;

use crate::dict::TagCode;
use crate::forest::{expand_forest, PrefixForest, PrefixNode};

/// Area of the shared 256-line ASCII pre-decoder.
pub const DECODER_AREA: u64 = 256;
/// Tag storage per stack entry: two 8-bit symbols.
pub const STACK_ENTRY_BITS: u64 = 16;
/// Area of one top-of-stack comparator.
pub const TOS_AREA: u64 = 16;
/// Area of the tag filter that drives stack pushes and pops.
pub const FILTER_AREA: u64 = 64;
/// Area of one result cell (a single latch).
pub const RESULT_CELL_AREA: u64 = 1;
/// Default stack capacity in open tags.
pub const DEFAULT_STACK_DEPTH: usize = 64;

/// Which output priority encoder a profile reports through.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum EncoderGroup {
    NoStack,
    Stack,
}

/// Identifies a block within one datapath; also its netlist order.
pub type BlockId = usize;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BlockKind {
    CharDecoder,
    TagMatcher { pattern: Vec<u8>, decoded: bool },
    NegationBlock { close_tag: TagCode, decoded: bool },
    TagFilter,
    StackBlock { max_depth: usize },
    TosMatcher { expected: TagCode },
    ResultCell { profile_id: u32 },
    PriorityEncoder { group: EncoderGroup },
}

impl BlockKind {
    pub fn kind_name(&self) -> &'static str {
        match self {
            BlockKind::CharDecoder => "char_decoder",
            BlockKind::TagMatcher { .. } => "tag_matcher",
            BlockKind::NegationBlock { .. } => "negation_block",
            BlockKind::TagFilter => "tag_filter",
            BlockKind::StackBlock { .. } => "stack",
            BlockKind::TosMatcher { .. } => "tos_matcher",
            BlockKind::ResultCell { .. } => "result_cell",
            BlockKind::PriorityEncoder { .. } => "priority_encoder",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Block {
    pub id: BlockId,
    pub kind: BlockKind,
    pub inputs: Vec<BlockId>,
    pub area_bits: u64,
}

/// Comparator cost of an n-byte pattern.
fn matcher_area(pattern_len: usize, decoded: bool) -> u64 {
    let per_byte = if decoded { 1 } else { 8 };
    pattern_len as u64 * per_byte
}

/// Build configuration: the four experiment scenarios are the cross
/// product of these two optimization flags.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DatapathConfig {
    pub prefix_shared: bool,
    pub char_decoded: bool,
    pub stack_depth: usize,
}

impl Default for DatapathConfig {
    fn default() -> Self {
        DatapathConfig {
            prefix_shared: false,
            char_decoded: false,
            stack_depth: DEFAULT_STACK_DEPTH,
        }
    }
}

impl DatapathConfig {
    pub fn scenario(&self) -> Scenario {
        match (self.prefix_shared, self.char_decoded) {
            (false, false) => Scenario::Unop,
            (true, false) => Scenario::ComP,
            (false, true) => Scenario::UnopCharDec,
            (true, true) => Scenario::ComPCharDec,
        }
    }
}

/// The four named implementation scenarios.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Scenario {
    /// No optimization.
    Unop,
    /// Common-prefix optimized.
    ComP,
    /// Character pre-decoder, no prefix sharing.
    UnopCharDec,
    /// Both optimizations.
    ComPCharDec,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::Unop,
        Scenario::ComP,
        Scenario::UnopCharDec,
        Scenario::ComPCharDec,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Unop => "Unop",
            Scenario::ComP => "Com-P",
            Scenario::UnopCharDec => "Unop-CharDec",
            Scenario::ComPCharDec => "Com-P-CharDec",
        }
    }

    pub fn parse(text: &str) -> Option<Scenario> {
        Scenario::ALL.iter().copied().find(|s| s.name() == text)
    }

    pub fn config(&self, stack_depth: usize) -> DatapathConfig {
        let (prefix_shared, char_decoded) = match self {
            Scenario::Unop => (false, false),
            Scenario::ComP => (true, false),
            Scenario::UnopCharDec => (false, true),
            Scenario::ComPCharDec => (true, true),
        };
        DatapathConfig {
            prefix_shared,
            char_decoded,
            stack_depth,
        }
    }
}

/// One position of a matcher chain: the executable view of a tag matcher
/// together with its guard and optional top-of-stack requirement.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainNode {
    pub tag: TagCode,
    /// Upstream chain position whose active flag arms this matcher.
    pub parent: Option<usize>,
    /// Chain heads only: the open tag must complete at document root level.
    pub anchored: bool,
    /// Close tag that clears the upstream flag (always the parent's tag).
    pub guard: Option<TagCode>,
    /// Parent-child steps: required top-of-stack code.
    pub tos: Option<TagCode>,
    /// Profiles whose final tag this is.
    pub terminals: Vec<u32>,
    /// The tag matcher block realizing this position.
    pub matcher_block: BlockId,
    /// The negation block of this position's segment, when guarded.
    pub guard_block: Option<BlockId>,
    /// The top-of-stack matcher gating this position, when parent-child.
    pub tos_block: Option<BlockId>,
}

/// Routing record for one profile.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ProfileRoute {
    pub profile_id: u32,
    pub uses_stack: bool,
    pub result_block: BlockId,
}

impl ProfileRoute {
    pub fn group(&self) -> EncoderGroup {
        if self.uses_stack {
            EncoderGroup::Stack
        } else {
            EncoderGroup::NoStack
        }
    }
}

/// The compiled block network plus its executable chain view.
#[derive(Clone, Debug)]
pub struct Datapath {
    pub config: DatapathConfig,
    pub blocks: Vec<Block>,
    pub nodes: Vec<ChainNode>,
    /// Profiles sorted by id.
    pub routes: Vec<ProfileRoute>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DatapathError {
    #[error("cannot lower an empty forest")]
    EmptyForest,
}

struct Lowering {
    blocks: Vec<Block>,
    nodes: Vec<ChainNode>,
    result_cells: Vec<(u32, bool, BlockId)>,
    decoder: Option<BlockId>,
    stack_block: Option<BlockId>,
    decoded: bool,
}

impl Lowering {
    fn push_block(&mut self, kind: BlockKind, inputs: Vec<BlockId>, area_bits: u64) -> BlockId {
        let id = self.blocks.len();
        self.blocks.push(Block {
            id,
            kind,
            inputs,
            area_bits,
        });
        id
    }

    fn stream_inputs(&self) -> Vec<BlockId> {
        // undecoded blocks tap the byte stream directly (no block edge)
        self.decoder.into_iter().collect()
    }

    /// Emits the blocks for one chain position and links it to `parent`.
    fn emit_unit(
        &mut self,
        unit: &crate::ir::TagUnit<'_>,
        parent: Option<usize>,
        anchored: bool,
    ) -> usize {
        let guard_block = unit.guard.map(|close_tag| {
            let area = matcher_area(close_tag.close_bytes().len(), self.decoded);
            self.push_block(
                BlockKind::NegationBlock {
                    close_tag,
                    decoded: self.decoded,
                },
                self.stream_inputs(),
                area,
            )
        });
        let mut matcher_inputs = self.stream_inputs();
        if let Some(p) = parent {
            matcher_inputs.push(self.nodes[p].matcher_block);
        }
        let tos_block = unit.tos.map(|expected| {
            let stack = self
                .stack_block
                .expect("stack block exists when TOS atoms do");
            self.push_block(BlockKind::TosMatcher { expected }, vec![stack], TOS_AREA)
        });
        if let Some(tos) = tos_block {
            matcher_inputs.push(tos);
        }
        let pattern = unit.tag.open_bytes().to_vec();
        let area = matcher_area(pattern.len(), self.decoded);
        let matcher_block = self.push_block(
            BlockKind::TagMatcher {
                pattern,
                decoded: self.decoded,
            },
            matcher_inputs,
            area,
        );
        let node_id = self.nodes.len();
        self.nodes.push(ChainNode {
            tag: unit.tag,
            parent,
            anchored: parent.is_none() && anchored,
            guard: unit.guard,
            tos: unit.tos,
            terminals: Vec::new(),
            matcher_block,
            guard_block,
            tos_block,
        });
        node_id
    }

    fn emit_terminals(&mut self, node_id: usize, profile_ids: &[u32], uses_stack: bool) {
        for &pid in profile_ids {
            let matcher = self.nodes[node_id].matcher_block;
            let cell = self.push_block(
                BlockKind::ResultCell { profile_id: pid },
                vec![matcher],
                RESULT_CELL_AREA,
            );
            self.nodes[node_id].terminals.push(pid);
            self.result_cells.push((pid, uses_stack, cell));
        }
    }
}

/// Lowers a prefix forest to the block network for one configuration.
///
/// With `prefix_shared` unset the forest is expanded back to per-profile
/// programs and every chain is laid out separately; otherwise each shared
/// prefix is instantiated once and feeds all of its suffix chains.
pub fn lower_to_datapath(
    forest: &PrefixForest,
    config: DatapathConfig,
) -> Result<Datapath, DatapathError> {
    if forest.trees.is_empty() {
        return Err(DatapathError::EmptyForest);
    }
    let irs = {
        let mut irs = expand_forest(forest);
        irs.sort_by_key(|ir| ir.profile_id);
        irs
    };
    let any_stack = irs.iter().any(|ir| ir.uses_stack);

    let mut lowering = Lowering {
        blocks: Vec::new(),
        nodes: Vec::new(),
        result_cells: Vec::new(),
        decoder: None,
        stack_block: None,
        decoded: config.char_decoded,
    };

    if config.char_decoded {
        lowering.decoder = Some(lowering.push_block(BlockKind::CharDecoder, vec![], DECODER_AREA));
    }
    if any_stack {
        let stream = lowering.stream_inputs();
        let filter = lowering.push_block(BlockKind::TagFilter, stream, FILTER_AREA);
        lowering.stack_block = Some(lowering.push_block(
            BlockKind::StackBlock {
                max_depth: config.stack_depth,
            },
            vec![filter],
            config.stack_depth as u64 * STACK_ENTRY_BITS,
        ));
    }

    if config.prefix_shared {
        let uses_stack: HashMap<u32, bool> = irs
            .iter()
            .map(|ir| (ir.profile_id, ir.uses_stack))
            .collect();
        for tree in &forest.trees {
            lower_shared_node(&mut lowering, &tree.root, None, tree.anchored, &uses_stack);
        }
    } else {
        for ir in &irs {
            let mut parent = None;
            let units: Vec<_> = ir.units().collect();
            for unit in &units {
                parent = Some(lowering.emit_unit(unit, parent, ir.anchored));
            }
            lowering.emit_terminals(parent.unwrap(), &[ir.profile_id], ir.uses_stack);
        }
    }

    // output priority encoders, one per nonempty profile group
    for group in [EncoderGroup::NoStack, EncoderGroup::Stack] {
        let members: Vec<BlockId> = lowering
            .result_cells
            .iter()
            .filter(|(_, stack, _)| (EncoderGroup::Stack == group) == *stack)
            .map(|(_, _, cell)| *cell)
            .collect();
        if !members.is_empty() {
            let area = members.len() as u64;
            lowering.push_block(BlockKind::PriorityEncoder { group }, members, area);
        }
    }

    let mut routes: Vec<ProfileRoute> = lowering
        .result_cells
        .iter()
        .map(|&(profile_id, uses_stack, result_block)| ProfileRoute {
            profile_id,
            uses_stack,
            result_block,
        })
        .collect();
    routes.sort_by_key(|r| r.profile_id);

    Ok(Datapath {
        config,
        blocks: lowering.blocks,
        nodes: lowering.nodes,
        routes,
    })
}

fn lower_shared_node(
    lowering: &mut Lowering,
    node: &PrefixNode,
    parent: Option<usize>,
    anchored: bool,
    uses_stack: &HashMap<u32, bool>,
) {
    let mut chain_parent = parent;
    for unit in node.units() {
        chain_parent = Some(lowering.emit_unit(&unit, chain_parent, anchored));
    }
    let last = chain_parent.expect("forest nodes carry at least one unit");
    for &pid in &node.terminal_profiles {
        lowering.emit_terminals(last, &[pid], uses_stack[&pid]);
    }
    for child in &node.children {
        lower_shared_node(lowering, child, Some(last), anchored, uses_stack);
    }
}

const KIND_NAMES: [&str; 8] = [
    "char_decoder",
    "tag_matcher",
    "negation_block",
    "tag_filter",
    "stack",
    "tos_matcher",
    "result_cell",
    "priority_encoder",
];

/// Area totals per block kind plus the grand total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AreaReport {
    pub config: DatapathConfig,
    pub total_bits: u64,
    pub block_count: usize,
    /// (kind name, summed bits) in fixed kind order, zero entries included.
    pub per_kind: Vec<(&'static str, u64)>,
}

impl AreaReport {
    /// Deterministic JSON rendering.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!(
            "  \"config\": \"{}\",\n",
            self.config.scenario().name()
        ));
        out.push_str(&format!(
            "  \"prefix_shared\": {},\n",
            self.config.prefix_shared
        ));
        out.push_str(&format!(
            "  \"char_decoded\": {},\n",
            self.config.char_decoded
        ));
        out.push_str(&format!(
            "  \"stack_depth\": {},\n",
            self.config.stack_depth
        ));
        out.push_str(&format!("  \"total_bits\": {},\n", self.total_bits));
        out.push_str(&format!("  \"block_count\": {},\n", self.block_count));
        out.push_str("  \"per_kind\": {\n");
        for (i, (kind, bits)) in self.per_kind.iter().enumerate() {
            let comma = if i + 1 == self.per_kind.len() {
                ""
            } else {
                ","
            };
            out.push_str(&format!("    \"{kind}\": {bits}{comma}\n"));
        }
        out.push_str("  }\n}\n");
        out
    }
}

/// Sums block areas; total equals the per-kind sum by construction.
pub fn area_report(dp: &Datapath) -> AreaReport {
    let mut per_kind: Vec<(&'static str, u64)> = KIND_NAMES.iter().map(|k| (*k, 0u64)).collect();
    let mut total = 0u64;
    for block in &dp.blocks {
        total += block.area_bits;
        let slot = per_kind
            .iter_mut()
            .find(|(k, _)| *k == block.kind.kind_name())
            .expect("known kind");
        slot.1 += block.area_bits;
    }
    AreaReport {
        config: dp.config,
        total_bits: total,
        block_count: dp.blocks.len(),
        per_kind,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::build_prefix_forest;
    use crate::ir::{lower_profile, StackRegexIr};
    use crate::profile::{parse_profile, TagResolver};

    fn forest_of(raws: &[&str]) -> PrefixForest {
        let irs: Vec<StackRegexIr> = raws
            .iter()
            .enumerate()
            .map(|(i, raw)| {
                lower_profile(&parse_profile(raw, TagResolver::Encoded, i as u32).unwrap())
            })
            .collect();
        build_prefix_forest(&irs).unwrap()
    }

    fn kinds(dp: &Datapath) -> Vec<(&'static str, u64)> {
        dp.blocks
            .iter()
            .map(|b| (b.kind.kind_name(), b.area_bits))
            .collect()
    }

    #[test]
    fn descendant_only_profile_unoptimized() {
        let dp = lower_to_datapath(
            &forest_of(&["a0//b0"]),
            Scenario::Unop.config(DEFAULT_STACK_DEPTH),
        )
        .unwrap();
        assert_eq!(
            kinds(&dp),
            vec![
                ("tag_matcher", 32),
                ("negation_block", 40),
                ("tag_matcher", 32),
                ("result_cell", 1),
                ("priority_encoder", 1),
            ]
        );
        // the matcher chain is ordered head to tail
        assert_eq!(dp.nodes.len(), 2);
        assert_eq!(dp.nodes[0].parent, None);
        assert_eq!(dp.nodes[1].parent, Some(0));
        assert_eq!(dp.nodes[1].guard.unwrap().to_string(), "a0");
        assert_eq!(dp.routes[0].group(), EncoderGroup::NoStack);
    }

    #[test]
    fn child_axis_adds_filter_stack_and_tos() {
        let dp = lower_to_datapath(
            &forest_of(&["a0/b0"]),
            Scenario::Unop.config(DEFAULT_STACK_DEPTH),
        )
        .unwrap();
        let names: Vec<&str> = dp.blocks.iter().map(|b| b.kind.kind_name()).collect();
        assert_eq!(
            names,
            vec![
                "tag_filter",
                "stack",
                "tag_matcher",
                "negation_block",
                "tos_matcher",
                "tag_matcher",
                "result_cell",
                "priority_encoder",
            ]
        );
        let stack = dp
            .blocks
            .iter()
            .find(|b| matches!(b.kind, BlockKind::StackBlock { .. }))
            .unwrap();
        assert_eq!(stack.area_bits, 64 * STACK_ENTRY_BITS);
        assert_eq!(dp.routes[0].group(), EncoderGroup::Stack);
        let tos = dp
            .blocks
            .iter()
            .find(|b| matches!(b.kind, BlockKind::TosMatcher { .. }))
            .unwrap();
        assert_eq!(tos.area_bits, TOS_AREA);
    }

    #[test]
    fn char_decoding_shrinks_matchers_eight_to_one() {
        let undecoded = lower_to_datapath(
            &forest_of(&["a0/b0"]),
            Scenario::Unop.config(DEFAULT_STACK_DEPTH),
        )
        .unwrap();
        let decoded = lower_to_datapath(
            &forest_of(&["a0/b0"]),
            Scenario::UnopCharDec.config(DEFAULT_STACK_DEPTH),
        )
        .unwrap();
        // identical chain topology
        assert_eq!(undecoded.nodes.len(), decoded.nodes.len());
        for (a, b) in undecoded.nodes.iter().zip(&decoded.nodes) {
            assert_eq!(
                (a.tag, a.parent, a.guard, a.tos),
                (b.tag, b.parent, b.guard, b.tos)
            );
        }
        // exactly one decoder, and 8:1 on every comparator block
        let decoders = decoded
            .blocks
            .iter()
            .filter(|b| matches!(b.kind, BlockKind::CharDecoder))
            .count();
        assert_eq!(decoders, 1);
        for (u, d) in undecoded.blocks.iter().zip(decoded.blocks.iter().skip(1)) {
            match (&u.kind, &d.kind) {
                (BlockKind::TagMatcher { .. }, BlockKind::TagMatcher { .. })
                | (BlockKind::NegationBlock { .. }, BlockKind::NegationBlock { .. }) => {
                    assert_eq!(u.area_bits, d.area_bits * 8);
                }
                _ => {}
            }
        }
        let open_matcher = decoded
            .blocks
            .iter()
            .find(|b| matches!(b.kind, BlockKind::TagMatcher { .. }))
            .unwrap();
        assert_eq!(open_matcher.area_bits, 4);
    }

    #[test]
    fn per_matcher_area_law() {
        // 4-byte open tag: 32 comparator bits undecoded, 4 decoded;
        // 5-byte close tag: 40 and 5
        assert_eq!(matcher_area(4, false), 32);
        assert_eq!(matcher_area(4, true), 4);
        assert_eq!(matcher_area(5, false), 40);
        assert_eq!(matcher_area(5, true), 5);
    }

    #[test]
    fn area_report_is_additive() {
        for scenario in Scenario::ALL {
            let dp = lower_to_datapath(
                &forest_of(&["a0//b0//c0", "a0//b0//d0", "a0/b0", "e0"]),
                scenario.config(32),
            )
            .unwrap();
            let report = area_report(&dp);
            let total: u64 = dp.blocks.iter().map(|b| b.area_bits).sum();
            assert_eq!(report.total_bits, total);
            let per_kind_sum: u64 = report.per_kind.iter().map(|(_, b)| b).sum();
            assert_eq!(report.total_bits, per_kind_sum);
            assert_eq!(report.block_count, dp.blocks.len());
        }
    }

    #[test]
    fn sharing_instantiates_the_prefix_once() {
        let forest = forest_of(&["a0//b0//c0//d0", "a0//b0//c0//e0"]);
        let unshared =
            lower_to_datapath(&forest, Scenario::Unop.config(DEFAULT_STACK_DEPTH)).unwrap();
        let shared =
            lower_to_datapath(&forest, Scenario::ComP.config(DEFAULT_STACK_DEPTH)).unwrap();
        let count_matchers = |dp: &Datapath| {
            dp.blocks
                .iter()
                .filter(|b| matches!(b.kind, BlockKind::TagMatcher { .. }))
                .count()
        };
        assert_eq!(count_matchers(&unshared), 8);
        // shared: a0, b0, c0 once + d0 + e0
        assert_eq!(count_matchers(&shared), 5);
        assert!(area_report(&shared).total_bits < area_report(&unshared).total_bits);
    }

    #[test]
    fn empty_forest_is_rejected() {
        let forest = PrefixForest { trees: vec![] };
        assert_eq!(
            lower_to_datapath(&forest, DatapathConfig::default()).unwrap_err(),
            DatapathError::EmptyForest
        );
    }

    #[test]
    fn sixteen_profile_layout_has_two_encoders_and_one_stack() {
        // twelve descendant-only profiles and four with parent-child axes
        let mut raws: Vec<String> = Vec::new();
        for i in 0..12 {
            raws.push(format!("a{}//b{}", i % 10, i % 10));
        }
        for i in 0..4 {
            raws.push(format!("c{}/d{}", i, i));
        }
        let raw_refs: Vec<&str> = raws.iter().map(|s| s.as_str()).collect();
        let dp = lower_to_datapath(
            &forest_of(&raw_refs),
            Scenario::ComP.config(DEFAULT_STACK_DEPTH),
        )
        .unwrap();
        let encoders = dp
            .blocks
            .iter()
            .filter(|b| matches!(b.kind, BlockKind::PriorityEncoder { .. }))
            .count();
        let stacks = dp
            .blocks
            .iter()
            .filter(|b| matches!(b.kind, BlockKind::StackBlock { .. }))
            .count();
        let cells = dp
            .blocks
            .iter()
            .filter(|b| matches!(b.kind, BlockKind::ResultCell { .. }))
            .count();
        assert_eq!((encoders, stacks, cells), (2, 1, 16));
        // encoder areas equal their input counts
        for b in &dp.blocks {
            if let BlockKind::PriorityEncoder { group } = b.kind {
                let expected = if group == EncoderGroup::Stack { 4 } else { 12 };
                assert_eq!(b.inputs.len(), expected);
                assert_eq!(b.area_bits, expected as u64);
            }
        }
    }

    #[test]
    fn every_result_cell_reaches_the_input_source() {
        let dp = lower_to_datapath(
            &forest_of(&["a0//b0//c0", "a0/b0", "//e0//f0"]),
            Scenario::ComPCharDec.config(16),
        )
        .unwrap();
        // walk inputs transitively: every result cell must reach a block
        // that taps the byte stream (a matcher, decoder, or filter)
        for cell in dp
            .blocks
            .iter()
            .filter(|b| matches!(b.kind, BlockKind::ResultCell { .. }))
        {
            let mut stack = vec![cell.id];
            let mut reached_source = false;
            let mut seen = std::collections::HashSet::new();
            while let Some(id) = stack.pop() {
                if !seen.insert(id) {
                    continue;
                }
                match dp.blocks[id].kind {
                    BlockKind::CharDecoder
                    | BlockKind::TagFilter
                    | BlockKind::TagMatcher { .. } => {
                        reached_source = true;
                    }
                    _ => {}
                }
                stack.extend(dp.blocks[id].inputs.iter());
            }
            assert!(reached_source, "result cell {} unreachable", cell.id);
        }
    }

    #[test]
    fn scenario_names_round_trip() {
        for s in Scenario::ALL {
            assert_eq!(Scenario::parse(s.name()), Some(s));
            assert_eq!(s.config(64).scenario(), s);
        }
    }

    #[test]
    fn area_report_json_is_stable() {
        let dp = lower_to_datapath(
            &forest_of(&["a0//b0"]),
            Scenario::Unop.config(DEFAULT_STACK_DEPTH),
        )
        .unwrap();
        let a = area_report(&dp).to_json();
        let b = area_report(&dp).to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"config\": \"Unop\""));
        assert!(a.contains("\"total_bits\": 106"));
    }
}

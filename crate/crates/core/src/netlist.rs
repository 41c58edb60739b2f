//! Structural netlist emitter: renders a datapath as VHDL-flavored text
//! with one entity per block kind and one instantiation per block.
//!
//! The output is a stable, reviewable artifact: byte-identical across
//! runs for the same datapath. It deliberately avoids vendor primitives;
//! synthesis is out of scope.

use std::fmt::Write;

use crate::datapath::{Block, BlockKind, Datapath, EncoderGroup};

/// Per-block instance names, assigned by kind in block order.
fn instance_names(blocks: &[Block]) -> Vec<String> {
    let mut counters = std::collections::HashMap::new();
    blocks
        .iter()
        .map(|b| {
            let prefix = match b.kind {
                BlockKind::CharDecoder => "dec",
                BlockKind::TagFilter => "filt",
                BlockKind::StackBlock { .. } => "stk",
                BlockKind::TagMatcher { .. } => "m",
                BlockKind::NegationBlock { .. } => "neg",
                BlockKind::TosMatcher { .. } => "tos",
                BlockKind::ResultCell { .. } => "res",
                BlockKind::PriorityEncoder { group } => {
                    return match group {
                        EncoderGroup::NoStack => "enc_nostack".to_owned(),
                        EncoderGroup::Stack => "enc_stack".to_owned(),
                    }
                }
            };
            let n = counters.entry(prefix).or_insert(0usize);
            let name = format!("{prefix}{n}");
            *n += 1;
            name
        })
        .collect()
}

fn entity_declaration(kind_name: &str) -> &'static str {
    match kind_name {
        "char_decoder" => concat!(
            "entity char_decoder is\n",
            "  port (clk : in std_logic;\n",
            "        din : in std_logic_vector(7 downto 0);\n",
            "        lines : out std_logic_vector(255 downto 0));\n",
            "end entity char_decoder;\n"
        ),
        "tag_filter" => concat!(
            "entity tag_filter is\n",
            "  port (clk : in std_logic;\n",
            "        stream : in std_logic_vector;\n",
            "        push : out std_logic;\n",
            "        pop : out std_logic;\n",
            "        code : out std_logic_vector(15 downto 0));\n",
            "end entity tag_filter;\n"
        ),
        "stack" => concat!(
            "entity tag_stack is\n",
            "  generic (depth : positive);\n",
            "  port (clk : in std_logic;\n",
            "        push : in std_logic;\n",
            "        pop : in std_logic;\n",
            "        code_in : in std_logic_vector(15 downto 0);\n",
            "        tos : out std_logic_vector(15 downto 0);\n",
            "        empty : out std_logic);\n",
            "end entity tag_stack;\n"
        ),
        "tag_matcher" => concat!(
            "entity tag_matcher is\n",
            "  generic (pattern : string);\n",
            "  port (clk : in std_logic;\n",
            "        stream : in std_logic_vector;\n",
            "        enable : in std_logic;\n",
            "        gate : in std_logic;\n",
            "        clear : in std_logic;\n",
            "        armed : out std_logic;\n",
            "        hit : out std_logic);\n",
            "end entity tag_matcher;\n"
        ),
        "negation_block" => concat!(
            "entity negation_block is\n",
            "  generic (pattern : string);\n",
            "  port (clk : in std_logic;\n",
            "        stream : in std_logic_vector;\n",
            "        fire : out std_logic);\n",
            "end entity negation_block;\n"
        ),
        "tos_matcher" => concat!(
            "entity tos_matcher is\n",
            "  generic (expected : string);\n",
            "  port (tos : in std_logic_vector(15 downto 0);\n",
            "        ok : out std_logic);\n",
            "end entity tos_matcher;\n"
        ),
        "result_cell" => concat!(
            "entity result_cell is\n",
            "  generic (profile_id : natural);\n",
            "  port (clk : in std_logic;\n",
            "        hit : in std_logic;\n",
            "        matched : out std_logic);\n",
            "end entity result_cell;\n"
        ),
        "priority_encoder" => concat!(
            "entity priority_encoder is\n",
            "  generic (width : positive);\n",
            "  port (clk : in std_logic;\n",
            "        inputs : in std_logic_vector;\n",
            "        selected : out integer);\n",
            "end entity priority_encoder;\n"
        ),
        other => unreachable!("unknown kind {other}"),
    }
}

fn pattern_text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

/// Renders the structural netlist.
pub fn emit_netlist(dp: &Datapath) -> String {
    let names = instance_names(&dp.blocks);
    let stream = if dp.config.char_decoded {
        "dec0_lines"
    } else {
        "din"
    };
    let mut out = String::new();

    writeln!(out, "-- pathgate structural netlist").unwrap();
    writeln!(
        out,
        "-- config: {} (prefix_shared={}, char_decoded={}, stack_depth={})",
        dp.config.scenario().name(),
        dp.config.prefix_shared,
        dp.config.char_decoded,
        dp.config.stack_depth
    )
    .unwrap();
    writeln!(out, "-- blocks: {}", dp.blocks.len()).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "library ieee;").unwrap();
    writeln!(out, "use ieee.std_logic_1164.all;").unwrap();
    writeln!(out).unwrap();

    // one entity per block kind present, in fixed kind order
    let kind_order = [
        "char_decoder",
        "tag_filter",
        "stack",
        "tag_matcher",
        "negation_block",
        "tos_matcher",
        "result_cell",
        "priority_encoder",
    ];
    for kind in kind_order {
        if dp.blocks.iter().any(|b| b.kind.kind_name() == kind) {
            out.push_str(entity_declaration(kind));
            out.push('\n');
        }
    }

    // top-level entity
    let has_nostack = dp.blocks.iter().any(|b| {
        matches!(
            b.kind,
            BlockKind::PriorityEncoder {
                group: EncoderGroup::NoStack
            }
        )
    });
    let has_stack_enc = dp.blocks.iter().any(|b| {
        matches!(
            b.kind,
            BlockKind::PriorityEncoder {
                group: EncoderGroup::Stack
            }
        )
    });
    writeln!(out, "entity datapath is").unwrap();
    writeln!(out, "  port (clk : in std_logic;").unwrap();
    writeln!(out, "        din : in std_logic_vector(7 downto 0);").unwrap();
    write!(out, "        doc_root : in std_logic").unwrap();
    if has_nostack {
        write!(out, ";\n        match_nostack : out integer").unwrap();
    }
    if has_stack_enc {
        write!(out, ";\n        match_stack : out integer").unwrap();
    }
    writeln!(out, ");").unwrap();
    writeln!(out, "end entity datapath;").unwrap();
    writeln!(out).unwrap();

    writeln!(out, "architecture structural of datapath is").unwrap();
    for (block, name) in dp.blocks.iter().zip(&names) {
        match block.kind {
            BlockKind::CharDecoder => {
                writeln!(out, "  signal {name}_lines : std_logic_vector(255 downto 0);").unwrap()
            }
            BlockKind::TagFilter => {
                writeln!(out, "  signal {name}_push, {name}_pop : std_logic;").unwrap();
                writeln!(out, "  signal {name}_code : std_logic_vector(15 downto 0);").unwrap();
            }
            BlockKind::StackBlock { .. } => {
                writeln!(out, "  signal {name}_tos : std_logic_vector(15 downto 0);").unwrap();
                writeln!(out, "  signal {name}_empty : std_logic;").unwrap();
            }
            BlockKind::TagMatcher { .. } => writeln!(
                out,
                "  signal {name}_enable, {name}_gate, {name}_clear, {name}_armed, {name}_hit : std_logic;"
            )
            .unwrap(),
            BlockKind::NegationBlock { .. } => {
                writeln!(out, "  signal {name}_fire : std_logic;").unwrap()
            }
            BlockKind::TosMatcher { .. } => {
                writeln!(out, "  signal {name}_ok : std_logic;").unwrap()
            }
            BlockKind::ResultCell { .. } => {
                writeln!(out, "  signal {name}_matched : std_logic;").unwrap()
            }
            BlockKind::PriorityEncoder { .. } => {
                writeln!(out, "  signal {name}_selected : integer;").unwrap()
            }
        }
    }
    writeln!(out, "begin").unwrap();

    // matcher input wiring: enable from the upstream flag, gate from the
    // top-of-stack check, clear from the downstream negation blocks
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); dp.nodes.len()];
    for (i, node) in dp.nodes.iter().enumerate() {
        if let Some(p) = node.parent {
            children[p].push(i);
        }
    }
    for (i, node) in dp.nodes.iter().enumerate() {
        let m = &names[node.matcher_block];
        let enable = match node.parent {
            Some(p) => format!("{}_armed", names[dp.nodes[p].matcher_block]),
            None if node.anchored => "doc_root".to_owned(),
            None => "'1'".to_owned(),
        };
        writeln!(out, "  {m}_enable <= {enable};").unwrap();
        let gate = match node.tos_block {
            Some(t) => format!("{}_ok", names[t]),
            None => "'1'".to_owned(),
        };
        writeln!(out, "  {m}_gate <= {gate};").unwrap();
        let clears: Vec<String> = children[i]
            .iter()
            .filter_map(|&c| dp.nodes[c].guard_block)
            .map(|g| format!("{}_fire", names[g]))
            .collect();
        let clear = if clears.is_empty() {
            "'0'".to_owned()
        } else {
            clears.join(" or ")
        };
        writeln!(out, "  {m}_clear <= {clear};").unwrap();
    }

    // instantiations, one per block, in block order
    for (block, name) in dp.blocks.iter().zip(&names) {
        match &block.kind {
            BlockKind::CharDecoder => writeln!(
                out,
                "  {name} : char_decoder port map (clk => clk, din => din, lines => {name}_lines);"
            )
            .unwrap(),
            BlockKind::TagFilter => writeln!(
                out,
                "  {name} : tag_filter port map (clk => clk, stream => {stream}, push => {name}_push, pop => {name}_pop, code => {name}_code);"
            )
            .unwrap(),
            BlockKind::StackBlock { max_depth } => {
                let filter = &names[block.inputs[0]];
                writeln!(
                    out,
                    "  {name} : tag_stack generic map (depth => {max_depth}) port map (clk => clk, push => {filter}_push, pop => {filter}_pop, code_in => {filter}_code, tos => {name}_tos, empty => {name}_empty);"
                )
                .unwrap()
            }
            BlockKind::TagMatcher { pattern, .. } => writeln!(
                out,
                "  {name} : tag_matcher generic map (pattern => \"{}\") port map (clk => clk, stream => {stream}, enable => {name}_enable, gate => {name}_gate, clear => {name}_clear, armed => {name}_armed, hit => {name}_hit);",
                pattern_text(pattern)
            )
            .unwrap(),
            BlockKind::NegationBlock { close_tag, .. } => writeln!(
                out,
                "  {name} : negation_block generic map (pattern => \"{}\") port map (clk => clk, stream => {stream}, fire => {name}_fire);",
                pattern_text(&close_tag.close_bytes())
            )
            .unwrap(),
            BlockKind::TosMatcher { expected } => {
                let stack = &names[block.inputs[0]];
                writeln!(
                    out,
                    "  {name} : tos_matcher generic map (expected => \"{expected}\") port map (tos => {stack}_tos, ok => {name}_ok);"
                )
                .unwrap()
            }
            BlockKind::ResultCell { profile_id } => {
                let matcher = &names[block.inputs[0]];
                writeln!(
                    out,
                    "  {name} : result_cell generic map (profile_id => {profile_id}) port map (clk => clk, hit => {matcher}_hit, matched => {name}_matched);"
                )
                .unwrap()
            }
            BlockKind::PriorityEncoder { .. } => {
                let width = block.inputs.len();
                let mut ports = String::new();
                for (i, cell) in block.inputs.iter().enumerate() {
                    write!(ports, "inputs({i}) => {}_matched, ", names[*cell]).unwrap();
                }
                writeln!(
                    out,
                    "  {name} : priority_encoder generic map (width => {width}) port map (clk => clk, {ports}selected => {name}_selected);"
                )
                .unwrap()
            }
        }
    }
    if has_nostack {
        writeln!(out, "  match_nostack <= enc_nostack_selected;").unwrap();
    }
    if has_stack_enc {
        writeln!(out, "  match_stack <= enc_stack_selected;").unwrap();
    }
    writeln!(out, "end architecture structural;").unwrap();
    out
}

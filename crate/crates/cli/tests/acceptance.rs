//! Acceptance suite: one test per acceptance criterion, each printing a
//! PASS line with its evidence. Run with
//! `cargo test -p pathgate-cli --test acceptance -- --nocapture`.

use std::process::Command;
use std::sync::OnceLock;

use pathgate::datapath::{
    lower_to_datapath, BlockKind, Scenario, DECODER_AREA, DEFAULT_STACK_DEPTH,
};
use pathgate::forest::{build_prefix_forest, expand_forest};
use pathgate::ir::{lower_profile, RegexAtom, StackRegexIr};
use pathgate::metrics::{run_grid, trend_check, GridSpec};
use pathgate::oracle;
use pathgate::profile::{parse_profile, parse_profile_file, TagResolver};
use pathgate::sim::{self, MatchEvent};
use pathgate::workload::{
    gen_document, gen_profiles, guide_paths_from_profiles, DocGenSpec, ProfileGenSpec, SplitMix64,
};

// ---------------------------------------------------------------------
// criteria 1 and 2: randomized oracle-equivalence battery, shared

struct BatteryOutcome {
    pairs: usize,
    events: usize,
    oracle_mismatch: Option<String>,
    config_mismatch: Option<String>,
}

fn battery() -> &'static BatteryOutcome {
    static OUTCOME: OnceLock<BatteryOutcome> = OnceLock::new();
    OUTCOME.get_or_init(run_battery)
}

fn run_battery() -> BatteryOutcome {
    let lengths = [2usize, 4, 6];
    let mixes = [0.0f64, 0.5, 1.0];
    let counts = [16usize, 128, 1024];
    let docs_per_combo = 38; // 3 * 3 * 3 * 38 = 1026 pairs
    let mut outcome = BatteryOutcome {
        pairs: 0,
        events: 0,
        oracle_mismatch: None,
        config_mismatch: None,
    };

    let mut combo = 0u64;
    for &length in &lengths {
        for &axis_mix in &mixes {
            for &count in &counts {
                combo += 1;
                let generated = gen_profiles(&ProfileGenSpec {
                    count,
                    length,
                    axis_mix,
                    shared_prefix_rate: 0.5,
                    unanchored_rate: 0.0,
                    alphabet: 12,
                    seed: 0xACC0 + combo,
                })
                .expect("battery profile generation");
                let asts = parse_profile_file(
                    &generated.raws.join("\n"),
                    TagResolver::Dict(&generated.dictionary),
                )
                .expect("generated profiles parse");
                let guides = guide_paths_from_profiles(&asts, generated.dictionary.codes()[0]);
                let irs: Vec<_> = asts.iter().map(lower_profile).collect();
                let forest = build_prefix_forest(&irs).expect("forest");
                let dps: Vec<_> = Scenario::ALL
                    .iter()
                    .map(|s| lower_to_datapath(&forest, s.config(DEFAULT_STACK_DEPTH)).unwrap())
                    .collect();

                for doc_index in 0..docs_per_combo {
                    let doc = gen_document(
                        &DocGenSpec {
                            size_bytes: 2048,
                            max_depth: 8,
                            guide_paths: guides.clone(),
                            guide_rate: 0.4,
                            seed: combo * 1000 + doc_index,
                        },
                        &generated.dictionary,
                    )
                    .expect("battery document generation");
                    let doc_id = doc_index as u32;
                    outcome.pairs += 1;

                    let tree = oracle::parse_tree(&doc).expect("generated docs are well-formed");
                    let expected = oracle::match_set(&tree, &asts, doc_id);
                    outcome.events += expected.len();

                    let mut per_scenario: Vec<Vec<MatchEvent>> = Vec::new();
                    for dp in &dps {
                        let mut got = sim::run(dp, &doc, doc_id).expect("simulation");
                        got.sort_unstable();
                        per_scenario.push(got);
                    }
                    for (events, scenario) in per_scenario.iter().zip(Scenario::ALL) {
                        if outcome.oracle_mismatch.is_none() && *events != expected {
                            outcome.oracle_mismatch = Some(format!(
                                "combo (len={length}, mix={axis_mix}, count={count}) doc {doc_index} scenario {}: simulator {:?} vs oracle {:?}",
                                scenario.name(),
                                events,
                                expected
                            ));
                        }
                    }
                    for pair in per_scenario.windows(2) {
                        if outcome.config_mismatch.is_none() && pair[0] != pair[1] {
                            outcome.config_mismatch = Some(format!(
                                "combo (len={length}, mix={axis_mix}, count={count}) doc {doc_index}: configurations disagree"
                            ));
                        }
                    }
                }
            }
        }
    }
    outcome
}

#[test]
fn criterion_1_oracle_equivalence() {
    let b = battery();
    assert!(b.pairs >= 1000, "battery too small: {} pairs", b.pairs);
    assert!(
        b.events > 0,
        "no matches at all; the equivalence comparison would be vacuous"
    );
    if let Some(mismatch) = &b.oracle_mismatch {
        panic!("[criterion 1] FAIL — {mismatch}");
    }
    println!(
        "[criterion 1] PASS — oracle equivalence: {} (doc, profile-set) pairs, lengths 2/4/6, \
         axis mixes 0/0.5/1, counts 16..1024, {} match events, zero false positives or negatives",
        b.pairs, b.events
    );
}

#[test]
fn criterion_2_configuration_invariance() {
    let b = battery();
    if let Some(mismatch) = &b.config_mismatch {
        panic!("[criterion 2] FAIL — {mismatch}");
    }
    println!(
        "[criterion 2] PASS — configuration invariance: all four scenarios produced identical \
         match sets on every one of {} workload pairs",
        b.pairs
    );
}

// ---------------------------------------------------------------------

#[test]
fn criterion_3_translation_fidelity() {
    let descendant = lower_profile(&parse_profile("a0//b0", TagResolver::Encoded, 0).unwrap());
    assert_eq!(descendant.dump_line(), "P0: OPEN(a0) GAP NEG(/a0) OPEN(b0)");
    let child = lower_profile(&parse_profile("a0/b0", TagResolver::Encoded, 1).unwrap());
    assert_eq!(
        child.dump_line(),
        "P1: OPEN(a0) GAP NEG(/a0) TOS(a0) OPEN(b0)"
    );
    println!(
        "[criterion 3] PASS — translation fidelity: a0//b0 -> [Open Gap Neg Open], \
         a0/b0 -> [Open Gap Neg StackCheck Open], golden dumps exact"
    );
}

#[test]
fn criterion_4_per_matcher_area_law() {
    let irs = vec![lower_profile(
        &parse_profile("a0//b0", TagResolver::Encoded, 0).unwrap(),
    )];
    let forest = build_prefix_forest(&irs).unwrap();
    for (scenario, open_bits, close_bits) in
        [(Scenario::Unop, 32, 40), (Scenario::UnopCharDec, 4, 5)]
    {
        let dp = lower_to_datapath(&forest, scenario.config(DEFAULT_STACK_DEPTH)).unwrap();
        for block in &dp.blocks {
            match &block.kind {
                BlockKind::TagMatcher { .. } => assert_eq!(block.area_bits, open_bits),
                BlockKind::NegationBlock { .. } => assert_eq!(block.area_bits, close_bits),
                BlockKind::CharDecoder => assert_eq!(block.area_bits, DECODER_AREA),
                _ => {}
            }
        }
    }
    println!(
        "[criterion 4] PASS — per-matcher area law: 4-byte open tag = 32 comparator bits \
         undecoded and 4 decoded (close tags 40/5), exact"
    );
}

#[test]
fn criterion_5_area_trends() {
    let spec = GridSpec {
        counts: vec![16, 64, 256, 1024],
        lengths: vec![2, 4, 6],
        doc_count: 2,
        doc_size: 4096,
        seed: 5,
        ..GridSpec::default()
    };
    let table = run_grid(&spec).expect("grid");
    let report = trend_check(&table);
    assert!(report.passed(), "trend checks failed:\n{}", report.render());

    let cell = |count, length, s| {
        table
            .rows
            .iter()
            .find(|r| r.count == count && r.length == length && r.scenario == s)
            .unwrap()
            .total_bits
    };
    assert!(
        cell(1024, 6, Scenario::Unop) > cell(16, 6, Scenario::Unop),
        "area must grow with the profile count"
    );
    let unop = cell(1024, 6, Scenario::Unop);
    let best = cell(1024, 6, Scenario::ComPCharDec);
    let ratio = unop as f64 / best as f64;
    assert!(
        ratio >= 4.0,
        "area ratio Unop/Com-P-CharDec at (1024, 6) is {ratio:.2}, below 4"
    );
    println!(
        "[criterion 5] PASS — area trends: exact linearity per length, monotonic scenario \
         ordering on every cell, and Unop/Com-P-CharDec = {ratio:.2} (>= 4) at 1024 profiles x 6 tags"
    );
}

// random IR generator for the round-trip criterion
fn random_ir(rng: &mut SplitMix64, profile_id: u32) -> StackRegexIr {
    let length = 1 + rng.below(6);
    let mut raw = String::new();
    if rng.below(4) == 0 {
        raw.push_str("//");
    }
    for i in 0..length {
        if i > 0 {
            raw.push_str(if rng.below(2) == 0 { "/" } else { "//" });
        }
        let letter = (b'a' + rng.below(4) as u8) as char;
        let digit = (b'0' + rng.below(3) as u8) as char;
        raw.push(letter);
        raw.push(digit);
    }
    lower_profile(&parse_profile(&raw, TagResolver::Encoded, profile_id).unwrap())
}

fn truncated(ir: &StackRegexIr, rng: &mut SplitMix64, profile_id: u32) -> Option<StackRegexIr> {
    let units: Vec<_> = ir.units().map(|u| u.atoms.to_vec()).collect();
    if units.len() < 2 {
        return None;
    }
    let keep = 1 + rng.below(units.len() - 1);
    let atoms: Vec<RegexAtom> = units[..keep].iter().flatten().copied().collect();
    Some(StackRegexIr {
        profile_id,
        anchored: ir.anchored,
        uses_stack: atoms.iter().any(|a| matches!(a, RegexAtom::StackCheck(_))),
        atoms,
    })
}

#[test]
fn criterion_6_prefix_forest_round_trip() {
    let mut rng = SplitMix64::new(0xF0_4E57);
    let mut strict_prefix_sets = 0usize;
    for round in 0..10_000u32 {
        let size = 1 + rng.below(10);
        let mut irs: Vec<StackRegexIr> = (0..size as u32)
            .map(|i| random_ir(&mut rng, round * 100 + i))
            .collect();
        // inject a strict-prefix pair in a third of the sets
        if rng.below(3) == 0 {
            let base = irs[rng.below(irs.len())].clone();
            if let Some(prefix) = truncated(&base, &mut rng, round * 100 + 99) {
                irs.push(prefix);
                strict_prefix_sets += 1;
            }
        }

        let forest = build_prefix_forest(&irs).expect("build");
        let expanded = expand_forest(&forest);
        assert_eq!(irs.len(), expanded.len(), "round {round}: cardinality");
        let key = |ir: &StackRegexIr| (ir.profile_id, ir.anchored, ir.atoms.clone(), ir.uses_stack);
        let mut want: Vec<_> = irs.iter().map(key).collect();
        let mut got: Vec<_> = expanded.iter().map(key).collect();
        want.sort();
        got.sort();
        assert_eq!(want, got, "round {round}: expand(build(S)) != S");

        // maximality: no two siblings (or trees of equal anchoring) may
        // begin with the same leading tag unit
        fn leading_unit(node: &pathgate::forest::PrefixNode) -> Vec<RegexAtom> {
            node.units()[0].atoms.to_vec()
        }
        fn assert_unique_siblings(children: &[pathgate::forest::PrefixNode], round: u32) {
            for i in 0..children.len() {
                for j in i + 1..children.len() {
                    assert_ne!(
                        leading_unit(&children[i]),
                        leading_unit(&children[j]),
                        "round {round}: siblings share a leading unit"
                    );
                }
                assert_unique_siblings(&children[i].children, round);
            }
        }
        let roots: Vec<_> = forest
            .trees
            .iter()
            .map(|t| (t.anchored, leading_unit(&t.root)))
            .collect();
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                assert_ne!(
                    roots[i], roots[j],
                    "round {round}: trees share a leading unit"
                );
            }
        }
        for tree in &forest.trees {
            assert_unique_siblings(&tree.root.children, round);
        }
    }
    println!(
        "[criterion 6] PASS — prefix-forest round-trip: expand(build(S)) = S for 10000 random \
         IR multisets ({strict_prefix_sets} containing strict-prefix pairs)"
    );
}

/// Independent open-element path scanner (not the engine's tag filter).
fn reference_paths(doc: &[u8]) -> Vec<Vec<String>> {
    let mut paths = Vec::with_capacity(doc.len());
    let mut path: Vec<String> = Vec::new();
    let mut i = 0;
    while i < doc.len() {
        if doc[i] == b'<' && doc.get(i + 1) == Some(&b'/') {
            for _ in 0..4 {
                paths.push(path.clone());
            }
            path.pop();
            paths.push(path.clone());
            i += 5;
        } else if doc[i] == b'<' {
            let tag = String::from_utf8(doc[i + 1..i + 3].to_vec()).unwrap();
            for _ in 0..3 {
                paths.push(path.clone());
            }
            path.push(tag);
            paths.push(path.clone());
            i += 4;
        } else {
            paths.push(path.clone());
            i += 1;
        }
    }
    paths
}

#[test]
fn criterion_7_stack_law() {
    let generated = gen_profiles(&ProfileGenSpec {
        count: 24,
        length: 4,
        axis_mix: 1.0,
        shared_prefix_rate: 0.4,
        unanchored_rate: 0.0,
        alphabet: 12,
        seed: 0x57AC,
    })
    .unwrap();
    let asts = parse_profile_file(
        &generated.raws.join("\n"),
        TagResolver::Dict(&generated.dictionary),
    )
    .unwrap();
    let irs: Vec<_> = asts.iter().map(lower_profile).collect();
    let dp = lower_to_datapath(
        &build_prefix_forest(&irs).unwrap(),
        Scenario::ComP.config(DEFAULT_STACK_DEPTH),
    )
    .unwrap();

    let mut cycles_checked = 0usize;
    for seed in 0..100 {
        let doc = gen_document(
            &DocGenSpec {
                size_bytes: 1024,
                max_depth: 8,
                guide_paths: Vec::new(),
                guide_rate: 0.0,
                seed,
            },
            &generated.dictionary,
        )
        .unwrap();
        let reference = reference_paths(&doc);
        let mut engine = sim::Engine::new(&dp, 0);
        for (cycle, &byte) in doc.iter().enumerate() {
            engine.step(byte).unwrap();
            let got: Vec<String> = engine.stack().iter().map(|c| c.to_string()).collect();
            assert_eq!(
                got, reference[cycle],
                "stack law violated at cycle {cycle} of doc seed {seed}"
            );
            cycles_checked += 1;
        }
    }
    println!(
        "[criterion 7] PASS — stack law: simulator stack equals the independently scanned \
         open-element path at every one of {cycles_checked} cycles across 100 documents"
    );
}

#[test]
fn criterion_8_byte_identical_outputs() {
    let bin = env!("CARGO_BIN_EXE_pathgate");
    let base = std::env::temp_dir().join(format!("pathgate-acceptance-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&base);
    std::fs::create_dir_all(&base).unwrap();

    let status = Command::new(bin)
        .args(["gen", "--out-dir"])
        .arg(&base)
        .args([
            "--profile-count",
            "32",
            "--profile-length",
            "4",
            "--doc-count",
            "2",
            "--doc-size",
            "4096",
            "--seed",
            "11",
        ])
        .status()
        .expect("spawn gen");
    assert!(status.success());

    let compile_once = |tag: &str| -> (Vec<u8>, Vec<u8>, Vec<u8>) {
        let ir = base.join(format!("ir-{tag}.txt"));
        let netlist = base.join(format!("netlist-{tag}.vhdl"));
        let area = base.join(format!("area-{tag}.json"));
        let status = Command::new(bin)
            .arg("compile")
            .args(["--profiles"])
            .arg(base.join("profiles.txt"))
            .args(["--dict"])
            .arg(base.join("dictionary.tsv"))
            .args(["--prefix-share", "--char-decode"])
            .args(["--ir-dump"])
            .arg(&ir)
            .args(["--netlist"])
            .arg(&netlist)
            .args(["--area-report"])
            .arg(&area)
            .status()
            .expect("spawn compile");
        assert!(status.success());
        (
            std::fs::read(ir).unwrap(),
            std::fs::read(netlist).unwrap(),
            std::fs::read(area).unwrap(),
        )
    };
    let run_once = |tag: &str| -> Vec<u8> {
        let out = base.join(format!("matches-{tag}.csv"));
        let status = Command::new(bin)
            .arg("run")
            .args(["--profiles"])
            .arg(base.join("profiles.txt"))
            .args(["--dict"])
            .arg(base.join("dictionary.tsv"))
            .args(["--prefix-share", "--out"])
            .arg(&out)
            .arg(base.join("docs/doc_0000.xml"))
            .arg(base.join("docs/doc_0001.xml"))
            .status()
            .expect("spawn run");
        assert!(status.success());
        std::fs::read(out).unwrap()
    };

    let (ir_a, netlist_a, area_a) = compile_once("a");
    let (ir_b, netlist_b, area_b) = compile_once("b");
    assert_eq!(ir_a, ir_b, "IR dumps differ between runs");
    assert_eq!(netlist_a, netlist_b, "netlists differ between runs");
    assert_eq!(area_a, area_b, "area reports differ between runs");
    let run_a = run_once("a");
    let run_b = run_once("b");
    assert_eq!(run_a, run_b, "match CSVs differ between runs");
    assert!(!run_a.is_empty());

    let _ = std::fs::remove_dir_all(&base);
    println!(
        "[criterion 8] PASS — determinism: compile (IR dump, netlist, area report) and run \
         (match CSV) outputs byte-identical across two invocations"
    );
}

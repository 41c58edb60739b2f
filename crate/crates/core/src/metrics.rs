//! Experiment grid over the four implementation scenarios: area reports
//! and simulator throughput per (profile count, profile length, scenario)
//! cell, plus the qualitative trend checks.
//!
//! Area columns are exact and reproducible; throughput columns are
//! informational only and never part of pass/fail decisions.

use crate::datapath::{area_report, lower_to_datapath, Scenario};
use crate::forest::build_prefix_forest;
use crate::ir::lower_profile;
use crate::profile::{parse_profile_file, TagResolver};
use crate::sim::run_stream;
use crate::workload::{
    gen_document, gen_profiles, guide_paths_from_profiles, DocGenSpec, ProfileGenSpec,
};

/// Grid parameters. Each length generates one master profile set of
/// `max(counts)` profiles; a count cell compiles its first `count`
/// profiles, mirroring a progressively grown subscription set.
#[derive(Clone, Debug)]
pub struct GridSpec {
    pub counts: Vec<usize>,
    pub lengths: Vec<usize>,
    pub scenarios: Vec<Scenario>,
    pub axis_mix: f64,
    pub shared_prefix_rate: f64,
    pub unanchored_rate: f64,
    pub alphabet: usize,
    pub stack_depth: usize,
    pub doc_count: usize,
    pub doc_size: usize,
    pub doc_depth: usize,
    /// Guide-weave probability for the generated documents.
    pub guide_rate: f64,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            counts: vec![16, 64, 256, 1024],
            lengths: vec![2, 4, 6],
            scenarios: Scenario::ALL.to_vec(),
            axis_mix: 0.5,
            shared_prefix_rate: 0.5,
            unanchored_rate: 0.0,
            alphabet: 12,
            stack_depth: 64,
            doc_count: 4,
            doc_size: 16384,
            doc_depth: 8,
            guide_rate: 0.3,
            seed: 1,
        }
    }
}

/// One measured grid cell.
#[derive(Clone, Debug, PartialEq)]
pub struct GridRow {
    pub count: usize,
    pub length: usize,
    pub scenario: Scenario,
    pub total_bits: u64,
    pub block_count: usize,
    pub mb_per_s: f64,
    pub match_count: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperimentTable {
    pub rows: Vec<GridRow>,
}

impl ExperimentTable {
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("count,length,config,total_bits,block_count,mb_per_s,match_count\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{:.2},{}\n",
                r.count,
                r.length,
                r.scenario.name(),
                r.total_bits,
                r.block_count,
                r.mb_per_s,
                r.match_count
            ));
        }
        out
    }

    fn cell(&self, count: usize, length: usize, scenario: Scenario) -> Option<&GridRow> {
        self.rows
            .iter()
            .find(|r| r.count == count && r.length == length && r.scenario == scenario)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GridError {
    #[error("workload: {0}")]
    Workload(#[from] crate::workload::WorkloadError),
    #[error("profile: {0}")]
    Profile(#[from] crate::profile::ProfileError),
    #[error("forest: {0}")]
    Forest(#[from] crate::forest::ForestError),
    #[error("datapath: {0}")]
    Datapath(#[from] crate::datapath::DatapathError),
    #[error("simulation: {0}")]
    Sim(#[from] crate::sim::SimError),
}

/// Runs the full grid. Deterministic in the area columns for a fixed spec.
pub fn run_grid(spec: &GridSpec) -> Result<ExperimentTable, GridError> {
    let max_count = spec.counts.iter().copied().max().unwrap_or(0);
    let mut rows = Vec::new();

    for &length in &spec.lengths {
        let generated = gen_profiles(&ProfileGenSpec {
            count: max_count,
            length,
            axis_mix: spec.axis_mix,
            shared_prefix_rate: spec.shared_prefix_rate,
            unanchored_rate: spec.unanchored_rate,
            alphabet: spec.alphabet,
            seed: spec.seed ^ (length as u64) << 32,
        })?;
        // documents woven with chains from the full master profile set,
        // fixed per length so every cell streams the same bytes
        let master_asts = parse_profile_file(
            &generated.raws.join("\n"),
            TagResolver::Dict(&generated.dictionary),
        )?;
        let guides = guide_paths_from_profiles(&master_asts, generated.dictionary.codes()[0]);
        let docs: Vec<(u32, Vec<u8>)> = (0..spec.doc_count)
            .map(|i| {
                gen_document(
                    &DocGenSpec {
                        size_bytes: spec.doc_size,
                        max_depth: spec.doc_depth,
                        guide_paths: guides.clone(),
                        guide_rate: spec.guide_rate,
                        seed: spec.seed.wrapping_add(0x0d0c + i as u64),
                    },
                    &generated.dictionary,
                )
                .map(|d| (i as u32, d))
            })
            .collect::<Result<_, _>>()?;

        for &count in &spec.counts {
            let text = generated.raws[..count].join("\n");
            let asts = parse_profile_file(&text, TagResolver::Dict(&generated.dictionary))?;
            let irs: Vec<_> = asts.iter().map(lower_profile).collect();
            let forest = build_prefix_forest(&irs)?;
            for &scenario in &spec.scenarios {
                let dp = lower_to_datapath(&forest, scenario.config(spec.stack_depth))?;
                let report = area_report(&dp);
                let (outcomes, stats) = run_stream(&dp, &docs);
                let mut match_count = 0;
                for outcome in outcomes {
                    match_count += outcome?.len();
                }
                rows.push(GridRow {
                    count,
                    length,
                    scenario,
                    total_bits: report.total_bits,
                    block_count: report.block_count,
                    mb_per_s: stats.mb_per_s,
                    match_count,
                });
            }
        }
    }
    // table order is independent of the spec's list order
    rows.sort_by_key(|r| (r.length, r.count, r.scenario));
    Ok(ExperimentTable { rows })
}

/// One named trend verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrendCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrendReport {
    pub checks: Vec<TrendCheck>,
}

impl TrendReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(if c.passed { "PASS " } else { "FAIL " });
            out.push_str(c.name);
            out.push_str(": ");
            out.push_str(&c.detail);
            out.push('\n');
        }
        out
    }
}

/// Checks the three qualitative trends: exact linearity of unoptimized
/// area in the profile count, per-cell area monotonicity across the
/// optimization scenarios, and match-set invariance across scenarios.
pub fn trend_check(table: &ExperimentTable) -> TrendReport {
    let mut checks = Vec::new();
    let mut lengths: Vec<usize> = table.rows.iter().map(|r| r.length).collect();
    lengths.sort_unstable();
    lengths.dedup();
    let mut counts: Vec<usize> = table.rows.iter().map(|r| r.count).collect();
    counts.sort_unstable();
    counts.dedup();

    // (a) Unop area is an exact affine line in the profile count
    {
        let mut passed = true;
        let mut detail = String::from("unoptimized area collinear in profile count");
        'outer: for &length in &lengths {
            let points: Vec<(i128, i128)> = counts
                .iter()
                .filter_map(|&c| {
                    table
                        .cell(c, length, Scenario::Unop)
                        .map(|r| (c as i128, r.total_bits as i128))
                })
                .collect();
            for window in points.windows(3) {
                let [(x1, y1), (x2, y2), (x3, y3)] = [window[0], window[1], window[2]];
                if (y2 - y1) * (x3 - x1) != (y3 - y1) * (x2 - x1) {
                    passed = false;
                    detail = format!(
                        "length {length}: points ({x1},{y1}) ({x2},{y2}) ({x3},{y3}) are not collinear"
                    );
                    break 'outer;
                }
            }
        }
        checks.push(TrendCheck {
            name: "linearity",
            passed,
            detail,
        });
    }

    // (b) optimized configurations never cost more area
    {
        let mut passed = true;
        let mut detail =
            String::from("Com-P-CharDec <= Unop-CharDec <= Unop and Com-P <= Unop on every cell");
        'outer: for &length in &lengths {
            for &count in &counts {
                let bits = |s: Scenario| table.cell(count, length, s).map(|r| r.total_bits);
                let ordered_pairs = [
                    (bits(Scenario::ComPCharDec), bits(Scenario::UnopCharDec)),
                    (bits(Scenario::UnopCharDec), bits(Scenario::Unop)),
                    (bits(Scenario::ComP), bits(Scenario::Unop)),
                ];
                for (small, large) in ordered_pairs {
                    if let (Some(s), Some(l)) = (small, large) {
                        if s > l {
                            passed = false;
                            detail = format!(
                                "cell ({count}, {length}): area order violated ({s} > {l})"
                            );
                            break 'outer;
                        }
                    }
                }
            }
        }
        checks.push(TrendCheck {
            name: "monotonicity",
            passed,
            detail,
        });
    }

    // (c) match counts identical across scenarios in every cell
    {
        let mut passed = true;
        let mut detail = String::from("match counts identical across configurations");
        'outer: for &length in &lengths {
            for &count in &counts {
                let cells: Vec<&GridRow> = Scenario::ALL
                    .iter()
                    .filter_map(|&s| table.cell(count, length, s))
                    .collect();
                if let Some(first) = cells.first() {
                    for cell in &cells[1..] {
                        if cell.match_count != first.match_count {
                            passed = false;
                            detail = format!(
                                "cell ({count}, {length}): {} found {} matches but {} found {}",
                                first.scenario.name(),
                                first.match_count,
                                cell.scenario.name(),
                                cell.match_count
                            );
                            break 'outer;
                        }
                    }
                }
            }
        }
        checks.push(TrendCheck {
            name: "match-invariance",
            passed,
            detail,
        });
    }

    TrendReport { checks }
}

//! pathgate: an XPath publish-subscribe filter compiler and simulator.
//!
//! The pipeline rewrites element names to fixed two-symbol codes, parses
//! linear XPath profiles, lowers them to stack-enhanced regex programs,
//! clusters common prefixes, and lays the result out as a hardware-style
//! block datapath that a cycle-driven engine executes one byte per clock
//! over encoded XML streams. A tree-walking reference evaluator, workload
//! generators, an area model and a structural netlist emitter round out
//! the toolchain.
//!
//! ```
//! use pathgate::{Scenario, TagResolver};
//!
//! // two profiles over literal tag codes: ancestor-descendant and
//! // parent-child forms of the same path
//! let asts = pathgate::parse_profile_file("a0//b0\na0/b0\n", TagResolver::Encoded).unwrap();
//! let irs: Vec<_> = asts.iter().map(pathgate::lower_profile).collect();
//! let forest = pathgate::build_prefix_forest(&irs).unwrap();
//! let dp = pathgate::lower_to_datapath(&forest, Scenario::ComP.config(64)).unwrap();
//!
//! let events = pathgate::run(&dp, b"<a0><b0>hi</b0></a0>", 0).unwrap();
//! assert_eq!(events.len(), 2); // both profiles fire when <b0> completes
//! assert_eq!(events[0].byte_offset, 7);
//! ```

#![forbid(unsafe_code)]

pub mod datapath;
pub mod dict;
pub mod events;
pub mod forest;
pub mod ir;
pub mod metrics;
pub mod netlist;
pub mod oracle;
pub mod profile;
pub mod sim;
pub mod workload;

pub use datapath::{
    area_report, lower_to_datapath, AreaReport, Datapath, DatapathConfig, Scenario,
};
pub use dict::{decode_document, encode_document, Dictionary, TagCode};
pub use events::{diff_events, events_from_csv, events_to_csv, DiffOutcome};
pub use forest::{build_prefix_forest, expand_forest, PrefixForest};
pub use ir::{dump_ir, lower_profile, RegexAtom, StackRegexIr};
pub use metrics::{run_grid, trend_check, ExperimentTable, GridSpec, TrendReport};
pub use netlist::emit_netlist;
pub use oracle::{evaluate, parse_tree, ElementTree, Witness};
pub use profile::{parse_profile, parse_profile_file, Axis, ProfileAst, TagResolver};
pub use sim::{run, run_stream, Engine, MatchEvent, SimError, ThroughputStats};
pub use workload::{gen_document, gen_profiles, DocGenSpec, ProfileGenSpec};

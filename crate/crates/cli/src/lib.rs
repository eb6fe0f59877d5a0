//! Front end for the planar-map analysis engine: expression parsing,
//! command execution and deterministic report rendering.

pub mod parse;
pub mod report;
pub mod run;

//! Program files, the analysis driver and certificates.

pub mod analyze;
pub mod certificate;
pub mod program;
pub mod syntax;

pub use analyze::{analyze, unfold_for, AnalysisConfig, Answer, Stats, Technique, Verdict, Witness};
pub use certificate::{
    certificate, check_certificate, emit_certificate, parse_certificate, render_json, render_text, Certificate,
    Format,
};
pub use program::{parse_lp, parse_trs, render_program, render_unfolded};
pub use syntax::{parse_context, parse_goal, parse_term, ParseError, VarNaming};

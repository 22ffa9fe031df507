//! Interpreter and differential test harness for plural constructor
//! systems, on top of `plural-core`.

pub mod harness;
pub mod session;

pub use session::{run_script, LineBuffer, Session, Settings};

//! Command-line driver: hash or authenticate files with the streaming
//! core, specialize indexed IR programs, and check built-in answers.
//!
//! Exit codes: 0 success, 1 I/O or pipeline failure, 2 usage error,
//! 3 input length limit exceeded. Across multiple inputs the worst
//! code wins, with 3 outranking 1.

mod digest_cmd;
mod selftest_cmd;
mod specialize_cmd;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

pub(crate) const EXIT_FAIL: u8 = 1;
pub(crate) const EXIT_USAGE: u8 = 2;
pub(crate) const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "blockstream",
    version,
    about = "Streaming hashes, MACs, and call-graph specialization"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hash files or standard input with an unkeyed algorithm.
    Hash(digest_cmd::HashArgs),
    /// Authenticate files or standard input with a keyed algorithm.
    Mac(digest_cmd::MacArgs),
    /// Specialize an indexed IR program at one index value.
    Specialize(specialize_cmd::SpecializeArgs),
    /// Run the built-in answer tests.
    Selftest(selftest_cmd::SelftestArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Hash(a) => digest_cmd::run_hash(&a),
        Cmd::Mac(a) => digest_cmd::run_mac(&a),
        Cmd::Specialize(a) => specialize_cmd::run(&a),
        Cmd::Selftest(a) => selftest_cmd::run(&a),
    };
    ExitCode::from(code)
}

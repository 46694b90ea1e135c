//! The specialize subcommand: instantiate an IR program's indexed
//! functions at one index value and print or write the result.

use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::Args;
use specializer::check::{fully_specialized, shape_preserved};
use specializer::{emit_ir, instantiate, parse_ir, Attribute, SpecializationRequest};

use crate::{EXIT_FAIL, EXIT_USAGE};

#[derive(Args)]
pub(crate) struct SpecializeArgs {
    /// IR program file; - means standard input.
    program: String,
    /// Entry functions to specialize; defaults to every indexed
    /// specialize function in the program.
    entries: Vec<String>,
    /// Index value to instantiate at.
    #[arg(long)]
    index: String,
    /// Bind an extern to a concrete function, written NAME=TARGET.
    #[arg(long = "bind", value_name = "NAME=TARGET")]
    bind: Vec<String>,
    /// Suffix for specialized names; defaults to the lowercased index
    /// value.
    #[arg(long)]
    suffix: Option<String>,
    /// Write the specialized program here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Print the names of the specialized copies instead of the
    /// program itself.
    #[arg(long)]
    print_names: bool,
}

pub(crate) fn run(args: &SpecializeArgs) -> u8 {
    let mut bindings = Vec::new();
    for b in &args.bind {
        let Some((name, target)) = b.split_once('=') else {
            eprintln!("blockstream: --bind takes NAME=TARGET, got {b}");
            return EXIT_USAGE;
        };
        bindings.push((name.to_string(), target.to_string()));
    }
    let suffix = args
        .suffix
        .clone()
        .unwrap_or_else(|| args.index.to_lowercase());
    if suffix.is_empty() || !suffix.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        eprintln!("blockstream: suffix must be alphanumeric or underscore, got {suffix}");
        return EXIT_USAGE;
    }

    let source = match read_source(&args.program) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("blockstream: {}: {e}", args.program);
            return EXIT_FAIL;
        }
    };
    let program = match parse_ir(&source) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("blockstream: {}: {e}", args.program);
            return EXIT_FAIL;
        }
    };

    let entry_points = if args.entries.is_empty() {
        program
            .functions
            .iter()
            .filter(|f| f.indexed && f.attr == Attribute::Specialize)
            .map(|f| f.name.clone())
            .collect()
    } else {
        args.entries.clone()
    };
    if entry_points.is_empty() {
        eprintln!(
            "blockstream: {}: no indexed specialize functions to instantiate",
            args.program
        );
        return EXIT_FAIL;
    }

    let req = SpecializationRequest {
        entry_points,
        index_value: args.index.clone(),
        bindings,
        suffix,
    };
    let out = match instantiate(&program, &req) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("blockstream: {}: {e}", args.program);
            return EXIT_FAIL;
        }
    };
    if let Err(e) = fully_specialized(&out).and_then(|()| shape_preserved(&program, &out, &req)) {
        eprintln!("blockstream: {}: output check failed: {e}", args.program);
        return EXIT_FAIL;
    }

    if let Some(path) = &args.output {
        if let Err(e) = fs::write(path, emit_ir(&out)) {
            eprintln!("blockstream: {}: {e}", path.display());
            return EXIT_FAIL;
        }
    }
    if args.print_names {
        for f in &out.functions {
            if program.function(&f.name).is_none() {
                println!("{}", f.name);
            }
        }
    } else if args.output.is_none() {
        print!("{}", emit_ir(&out));
    }
    0
}

fn read_source(path: &str) -> std::io::Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().lock().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path)
    }
}

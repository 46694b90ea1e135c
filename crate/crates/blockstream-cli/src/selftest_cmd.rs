//! The selftest subcommand: run answer tests from the built-in vector
//! set or an external JSON file, checking the one-shot and streaming
//! routes against each expected digest.

use std::fs;
use std::path::PathBuf;

use blockstream::alg::{instance, AlgId, InstanceOptions};
use blockstream::Stream;
use clap::Args;
use serde::Deserialize;

use crate::EXIT_FAIL;

const EMBEDDED: &str = include_str!("../vectors/selftest.json");

#[derive(Args)]
pub(crate) struct SelftestArgs {
    /// Load vectors from this JSON file instead of the built-in set.
    #[arg(long)]
    vectors: Option<PathBuf>,
    /// Only run vectors whose algorithm name contains this substring.
    #[arg(long)]
    filter: Option<String>,
}

#[derive(Deserialize)]
struct Vector {
    alg: String,
    #[serde(default)]
    key: String,
    msg: String,
    digest: String,
}

pub(crate) fn run(args: &SelftestArgs) -> u8 {
    let text = match &args.vectors {
        Some(path) => match fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("blockstream: {}: {e}", path.display());
                return EXIT_FAIL;
            }
        },
        None => EMBEDDED.to_string(),
    };
    let vectors: Vec<Vector> = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("blockstream: vectors: {e}");
            return EXIT_FAIL;
        }
    };
    let selected: Vec<&Vector> = vectors
        .iter()
        .filter(|v| args.filter.as_ref().is_none_or(|f| v.alg.contains(f.as_str())))
        .collect();
    if selected.is_empty() {
        eprintln!("blockstream: no vectors selected");
        return EXIT_FAIL;
    }

    let mut failures = 0usize;
    for (i, v) in selected.iter().enumerate() {
        match check(v) {
            Ok(()) => println!("ok   {} #{i} ({} byte msg)", v.alg, v.msg.len() / 2),
            Err(why) => {
                failures += 1;
                println!("FAIL {} #{i}: {why}", v.alg);
            }
        }
    }
    println!("selftest: {} vectors, {failures} failures", selected.len());
    if failures == 0 {
        0
    } else {
        EXIT_FAIL
    }
}

fn check(v: &Vector) -> Result<(), String> {
    let id = AlgId::from_name(&v.alg).ok_or_else(|| format!("unknown algorithm {}", v.alg))?;
    let key = hex::decode(&v.key).map_err(|e| format!("bad key hex: {e}"))?;
    let msg = hex::decode(&v.msg).map_err(|e| format!("bad msg hex: {e}"))?;
    let want = hex::decode(&v.digest).map_err(|e| format!("bad digest hex: {e}"))?;
    let alg = instance(
        id,
        InstanceOptions {
            key_len: key.len(),
            digest_len: Some(want.len()),
            buf_multiple: 1,
        },
    )
    .map_err(|e| e.to_string())?;

    let got = alg.one_shot(&key, &msg).map_err(|e| e.to_string())?;
    if got != want {
        return Err(format!("one-shot digest {}", hex::encode(got)));
    }

    let mut st = Stream::create(&alg, &key).map_err(|e| e.to_string())?;
    let third = msg.len() / 3;
    st.update(&msg[..third]).map_err(|e| e.to_string())?;
    st.update(&msg[third..2 * third]).map_err(|e| e.to_string())?;
    st.update(&msg[2 * third..]).map_err(|e| e.to_string())?;
    let got = st.digest();
    if got != want {
        return Err(format!("streamed digest {}", hex::encode(got)));
    }
    Ok(())
}

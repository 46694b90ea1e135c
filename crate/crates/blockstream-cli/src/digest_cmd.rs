//! The hash and mac subcommands: one `<hex>  <path>` line per input.

use std::fs::File;
use std::io::{self, Read};

use blockstream::alg::{instance, AlgId, InstanceOptions};
use blockstream::{BlockAlgorithm, Error, Stream};
use clap::Args;

use crate::{EXIT_FAIL, EXIT_LIMIT, EXIT_USAGE};

#[derive(Args)]
pub(crate) struct StreamOpts {
    /// Feed input in chunks of this many bytes.
    #[arg(long, default_value_t = 65536)]
    chunk_size: usize,
    /// Buffer capacity as a multiple of the block length, 1 to 16.
    #[arg(long, default_value_t = 1)]
    buf_multiple: usize,
    /// Reject total input longer than this many bytes.
    #[arg(long)]
    max_input_length: Option<u64>,
}

#[derive(Args)]
pub(crate) struct HashArgs {
    /// Algorithm: md5, sha1, sha256, sha512, blake2s, or blake2b.
    #[arg(long)]
    alg: String,
    #[command(flatten)]
    opts: StreamOpts,
    /// Input files; - means standard input.
    #[arg(default_value = "-")]
    files: Vec<String>,
}

#[derive(Args)]
pub(crate) struct MacArgs {
    /// Algorithm: poly1305, blake2s, or blake2b.
    #[arg(long)]
    alg: String,
    /// Key as a hex string; its length selects the keyed variant.
    #[arg(long)]
    key: String,
    #[command(flatten)]
    opts: StreamOpts,
    /// Input files; - means standard input.
    #[arg(default_value = "-")]
    files: Vec<String>,
}

pub(crate) fn run_hash(args: &HashArgs) -> u8 {
    let Some(id) = AlgId::from_name(&args.alg) else {
        return usage(format!("unknown algorithm {}", args.alg));
    };
    if id == AlgId::Poly1305 {
        return usage("poly1305 needs a key; use the mac subcommand".into());
    }
    match build(id, 0, &args.opts) {
        Ok(alg) => drive(&alg, &[], &args.files, &args.opts),
        Err(code) => code,
    }
}

pub(crate) fn run_mac(args: &MacArgs) -> u8 {
    let Some(id) = AlgId::from_name(&args.alg) else {
        return usage(format!("unknown algorithm {}", args.alg));
    };
    let Ok(key) = hex::decode(&args.key) else {
        return usage("--key is not valid hex".into());
    };
    if key.is_empty() {
        return usage("--key must not be empty".into());
    }
    match build(id, key.len(), &args.opts) {
        Ok(alg) => drive(&alg, &key, &args.files, &args.opts),
        Err(code) => code,
    }
}

fn build(id: AlgId, key_len: usize, opts: &StreamOpts) -> Result<BlockAlgorithm, u8> {
    let built = instance(
        id,
        InstanceOptions {
            key_len,
            digest_len: None,
            buf_multiple: opts.buf_multiple,
        },
    );
    let mut alg = built.map_err(|e| usage(e.to_string()))?;
    if let Some(limit) = opts.max_input_length {
        alg = alg.with_max_input_length(limit);
    }
    Ok(alg)
}

fn drive(alg: &BlockAlgorithm, key: &[u8], files: &[String], opts: &StreamOpts) -> u8 {
    if opts.chunk_size == 0 {
        return usage("--chunk-size must be at least 1".into());
    }
    let mut st = match Stream::create(alg, key) {
        Ok(st) => st,
        Err(e) => return usage(e.to_string()),
    };
    let mut worst = 0u8;
    for path in files {
        match digest_one(&mut st, key, path, opts.chunk_size) {
            Ok(hex) => println!("{hex}  {path}"),
            Err((code, msg)) => {
                eprintln!("blockstream: {path}: {msg}");
                worst = worst.max(code);
            }
        }
    }
    worst
}

fn digest_one(
    st: &mut Stream,
    key: &[u8],
    path: &str,
    chunk_size: usize,
) -> Result<String, (u8, String)> {
    st.reinit(key).expect("key already validated");
    let mut reader: Box<dyn Read> = if path == "-" {
        Box::new(io::stdin().lock())
    } else {
        Box::new(File::open(path).map_err(|e| (EXIT_FAIL, e.to_string()))?)
    };
    let mut buf = vec![0u8; chunk_size];
    loop {
        let n = reader.read(&mut buf).map_err(|e| (EXIT_FAIL, e.to_string()))?;
        if n == 0 {
            break;
        }
        st.update(&buf[..n]).map_err(|e| match e {
            Error::MaximumLengthExceeded => (EXIT_LIMIT, e.to_string()),
            other => (EXIT_FAIL, other.to_string()),
        })?;
    }
    Ok(hex::encode(st.digest()))
}

fn usage(msg: String) -> u8 {
    eprintln!("blockstream: {msg}");
    EXIT_USAGE
}

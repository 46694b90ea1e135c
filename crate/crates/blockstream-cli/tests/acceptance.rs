//! Acceptance gate. Runs every contract criterion in order and prints
//! one line per criterion; exits nonzero if any fail.
//!
//! Covers the streaming wrapper (one-shot agreement, split contract,
//! fold law, non-invalidating digests, known answers, length limits)
//! and the specializer (fixture goldens, random-program semantics,
//! output hygiene) plus the command-line binary's chunk invariance and
//! exit-code contract.

use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use blockstream::alg::{
    self, agile_instance, instance, AgileAlgId, AlgId, InstanceOptions,
};
use blockstream::{derive_update_multi, split_at_last, BlockAlgorithm, Error, Stream};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use specializer::ast::{Attribute, Callee, IrExpr, IrProgram};
use specializer::check::{fully_specialized, functor_dependencies_are_subsets, shape_preserved};
use specializer::gen::{forward_externs, random_program};
use specializer::{emit_ir, functorize, instantiate, interpret, parse_ir, SpecializationRequest};

const HPKE: &str = include_str!("../../specializer/fixtures/hpke.ir");
const HPKE_FUNCTORIZED: &str = include_str!("../../specializer/fixtures/hpke.functorized.golden.ir");
const HPKE_CP256: &str = include_str!("../../specializer/fixtures/hpke.cp256.golden.ir");
const CURVE: &str = include_str!("../../specializer/fixtures/curve.ir");
const CURVE_FUNCTORIZED: &str =
    include_str!("../../specializer/fixtures/curve.functorized.golden.ir");
const CURVE_HACL: &str = include_str!("../../specializer/fixtures/curve.hacl.golden.ir");
const HASH_KATS: &str = include_str!("../../blockstream/tests/data/hash_kats.json");
const POLY_KATS: &str = include_str!("../../blockstream/tests/data/poly1305_kats.json");

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

type Criterion = fn() -> Result<(), String>;

fn main() {
    let criteria: &[(&str, &str, Criterion)] = &[
        ("c01", "streaming digests equal one-shot digests across the roster", c01),
        ("c02", "block splitting keeps a nonempty aligned remainder", c02),
        ("c03", "multi-block absorption folds the single-block step", c03),
        ("c04", "digest extraction never invalidates a stream", c04),
        ("c05", "known-answer vectors match byte for byte", c05),
        ("c06", "length limits reject at the boundary and preserve state", c06),
        ("c07", "fixture specializations match their goldens", c07),
        ("c08", "specialization preserves evaluation on random programs", c08),
        ("c09", "specialized output is concrete with the contracted call graph", c09),
        ("c10", "the binary is chunk invariant and honors its exit codes", c10),
    ];
    let started = Instant::now();
    let mut failed = 0usize;
    for (id, label, run) in criteria {
        match catch_unwind(AssertUnwindSafe(run)) {
            Ok(Ok(())) => println!("acceptance {id} {label}: PASS"),
            Ok(Err(why)) => {
                failed += 1;
                println!("acceptance {id} {label}: FAIL ({why})");
            }
            Err(payload) => {
                failed += 1;
                println!("acceptance {id} {label}: FAIL (panic: {})", panic_text(&payload));
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.1?}",
        criteria.len() - failed,
        criteria.len(),
        started.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn panic_text(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "opaque panic".into()
    }
}

/// Unkeyed roster, Poly1305 with a fixed key, and the agile instance
/// once per inner algorithm.
fn roster() -> Vec<(&'static str, BlockAlgorithm, Vec<u8>)> {
    let mut insts: Vec<(&'static str, BlockAlgorithm, Vec<u8>)> = vec![
        ("md5", alg::md5(), vec![]),
        ("sha1", alg::sha1(), vec![]),
        ("sha256", alg::sha256(), vec![]),
        ("sha512", alg::sha512(), vec![]),
        ("blake2s", alg::blake2s(), vec![]),
        ("blake2b", alg::blake2b(), vec![]),
        ("poly1305", alg::poly1305(), (0u8..32).map(|i| i.wrapping_mul(7)).collect()),
    ];
    for id in AgileAlgId::ALL {
        insts.push(("agile", agile_instance(), vec![id.code()]));
    }
    insts
}

fn c01() -> Result<(), String> {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(11);
    for (name, base, key) in roster() {
        for _ in 0..1000 {
            let multiple = [1usize, 2, 3, 16][rng.random_range(0..4)];
            let alg = base.clone().with_buf_multiple(multiple).unwrap();
            let len = rng.random_range(0..=4 * alg.buf_capacity());
            let input: Vec<u8> = (0..len).map(|_| rng.random()).collect();
            let want = alg.one_shot(&key, &input).unwrap();

            let mut st = Stream::create(&alg, &key).unwrap();
            let mut rest: &[u8] = &input;
            while !rest.is_empty() {
                let take = rng.random_range(0..=rest.len().min(1 + alg.buf_capacity()));
                st.update(&rest[..take]).map_err(|e| format!("{name}: {e}"))?;
                rest = &rest[take..];
            }
            let got = st.digest();
            ensure!(
                got == want,
                "{name} (multiple {multiple}, {len} bytes): streamed {} != one-shot {}",
                hex::encode(&got),
                hex::encode(&want)
            );
        }
    }
    ensure!(
        start.elapsed() < Duration::from_secs(60),
        "took {:?}, budget 60s",
        start.elapsed()
    );
    Ok(())
}

fn c02() -> Result<(), String> {
    let start = Instant::now();
    for unit in [1usize, 16, 64, 128] {
        for len in 0usize..=513 {
            let data: Vec<u8> = (0..len).map(|i| i as u8).collect();
            let split = split_at_last(unit, &data);
            let n = {
                let mut n = len / unit;
                if len % unit == 0 && n > 0 {
                    n -= 1;
                }
                n
            };
            ensure!(
                split.blocks.len() == n * unit,
                "unit {unit} len {len}: prefix {} != {}",
                split.blocks.len(),
                n * unit
            );
            ensure!(
                split.blocks.len() + split.rest.len() == len,
                "unit {unit} len {len}: pieces do not cover the input"
            );
            let mut joined = split.blocks.to_vec();
            joined.extend_from_slice(split.rest);
            ensure!(joined == data, "unit {unit} len {len}: pieces reordered");
            ensure!(split.rest.len() <= unit, "unit {unit} len {len}: remainder too long");
            ensure!(
                split.rest.is_empty() == (len == 0),
                "unit {unit} len {len}: remainder emptiness wrong"
            );
        }
    }
    ensure!(
        start.elapsed() < Duration::from_secs(1),
        "took {:?}, budget 1s",
        start.elapsed()
    );
    Ok(())
}

fn c03() -> Result<(), String> {
    // Exhaustive on the one-byte-block checksum: every two-segment split
    // of every input up to length 8 composes to the unsplit transition.
    let toy = blockstream::demo::xor_accumulator();
    for len in 0..=8usize {
        let data: Vec<u8> = (0..len).map(|i| (i as u8).wrapping_mul(37).wrapping_add(11)).collect();
        let s0 = toy.init_s(&[]);
        let whole = toy.update_multi_s(s0.clone(), 0, &data);
        for cut in 0..=len {
            let head = toy.update_multi_s(s0.clone(), 0, &data[..cut]);
            let split = toy.update_multi_s(head, cut as u64, &data[cut..]);
            ensure!(split == whole, "toy: split at {cut} of {len} diverged");
        }
    }

    // Exhaustive on a recording algebra: the derived transition must
    // visit each block once, in order, with the right byte offset.
    type Rec = Vec<(u64, Vec<u8>)>;
    let step = |mut s: Rec, prevlen: u64, block: &[u8]| -> Rec {
        s.push((prevlen, block.to_vec()));
        s
    };
    let multi = derive_update_multi(4, step);
    for lead_blocks in [0u64, 1, 25] {
        for n in 0..=6usize {
            let data: Vec<u8> = (0..n * 4).map(|i| i as u8).collect();
            let got = multi(Vec::new(), lead_blocks * 4, &data);
            let want: Rec = (0..n)
                .map(|i| (lead_blocks * 4 + (i as u64) * 4, data[i * 4..(i + 1) * 4].to_vec()))
                .collect();
            ensure!(got == want, "lead {lead_blocks} n {n}: visit order wrong");
        }
    }

    // Randomized two-segment composition on every shipped algorithm.
    let mut rng = StdRng::seed_from_u64(23);
    for (name, alg, key) in roster() {
        let bl = alg.block_len();
        for _ in 0..500 {
            let lead = rng.random_range(0..3usize);
            let total = rng.random_range(0..=8usize);
            let cut = rng.random_range(0..=total);
            let prefix: Vec<u8> = (0..lead * bl).map(|_| rng.random()).collect();
            let body: Vec<u8> = (0..total * bl).map(|_| rng.random()).collect();
            let start = alg.update_multi_s(alg.init_s(&key), 0, &prefix);
            let l1 = prefix.len() as u64;

            let split = alg.update_multi_s(start.clone(), l1, &body[..cut * bl]);
            let split = alg.update_multi_s(split, l1 + (cut * bl) as u64, &body[cut * bl..]);
            let whole = alg.update_multi_s(start, l1, &body);
            ensure!(
                split == whole,
                "{name}: fold mismatch at lead {lead} cut {cut}/{total}"
            );
        }
    }
    Ok(())
}

fn c04() -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(37);
    for (name, alg, key) in roster() {
        for trace in 0..200 {
            let mut st = Stream::create(&alg, &key).unwrap();
            let mut quiet = Stream::create(&alg, &key).unwrap();
            let mut fed: Vec<u8> = Vec::new();
            let mut digests = 0;
            for op in 0..12 {
                if op % 4 == 3 {
                    let got = st.digest();
                    let want = alg.one_shot(&key, &fed).unwrap();
                    ensure!(
                        got == want,
                        "{name} trace {trace}: checkpoint after {} bytes diverged",
                        fed.len()
                    );
                    digests += 1;
                } else {
                    let chunk: Vec<u8> =
                        (0..rng.random_range(0..=150)).map(|_| rng.random()).collect();
                    st.update(&chunk).map_err(|e| format!("{name}: {e}"))?;
                    quiet.update(&chunk).map_err(|e| format!("{name}: {e}"))?;
                    fed.extend_from_slice(&chunk);
                }
            }
            ensure!(digests >= 3, "{name} trace {trace}: only {digests} checkpoints");
            let got = st.digest();
            ensure!(
                got == quiet.digest(),
                "{name} trace {trace}: interrupted and uninterrupted streams diverged"
            );
            let want = alg.one_shot(&key, &fed).unwrap();
            ensure!(got == want, "{name} trace {trace}: final digest diverged");
        }
    }
    Ok(())
}

fn hex_field(v: &serde_json::Value, key: &str) -> Result<Vec<u8>, String> {
    hex::decode(v[key].as_str().unwrap_or_default()).map_err(|e| format!("{key}: {e}"))
}

fn c05() -> Result<(), String> {
    let hashes: serde_json::Value =
        serde_json::from_str(HASH_KATS).map_err(|e| e.to_string())?;
    let mut count = 0usize;
    for v in hashes.as_array().unwrap() {
        let name = v["alg"].as_str().unwrap();
        // Labels like blake2b-16 select a truncated digest.
        let base = name.split_once('-').map_or(name, |(base, _)| base);
        let key = hex_field(v, "key")?;
        let msg = hex_field(v, "msg")?;
        let want = hex_field(v, "digest")?;
        let alg = instance(
            AlgId::from_name(base).ok_or(format!("unknown alg {name}"))?,
            InstanceOptions {
                key_len: key.len(),
                digest_len: Some(want.len()),
                buf_multiple: 1,
            },
        )
        .map_err(|e| format!("{name}: {e}"))?;
        check_vector(&alg, &key, &msg, &want).map_err(|e| format!("{name} #{count}: {e}"))?;
        count += 1;
    }
    let tags: serde_json::Value = serde_json::from_str(POLY_KATS).map_err(|e| e.to_string())?;
    for v in tags.as_array().unwrap() {
        let key = hex_field(v, "key")?;
        let msg = hex_field(v, "msg")?;
        let want = hex_field(v, "tag")?;
        check_vector(&alg::poly1305(), &key, &msg, &want)
            .map_err(|e| format!("poly1305 #{count}: {e}"))?;
        count += 1;
    }
    ensure!(count >= 90, "only {count} vectors checked");
    Ok(())
}

fn check_vector(
    alg: &BlockAlgorithm,
    key: &[u8],
    msg: &[u8],
    want: &[u8],
) -> Result<(), String> {
    let got = alg.one_shot(key, msg).map_err(|e| e.to_string())?;
    ensure!(got == want, "one-shot digest {}", hex::encode(got));
    let mut st = Stream::create(alg, key).map_err(|e| e.to_string())?;
    let third = msg.len() / 3;
    for part in [&msg[..third], &msg[third..2 * third], &msg[2 * third..]] {
        st.update(part).map_err(|e| e.to_string())?;
    }
    let got = st.digest();
    ensure!(got == want, "streamed digest {}", hex::encode(got));
    Ok(())
}

fn c06() -> Result<(), String> {
    let cases: Vec<(BlockAlgorithm, Vec<u8>)> = vec![
        (alg::sha256(), vec![]),
        (alg::poly1305(), vec![0x42; 32]),
        (alg::blake2b_keyed(16, 32).map_err(|e| e.to_string())?, vec![0x17; 16]),
    ];
    for (base, key) in cases {
        let alg = base.with_max_input_length(100);
        let name = alg.name();
        ensure!(alg.max_input_length() == 100, "{name}: limit not recorded");
        ensure!(
            alg.one_shot(&key, &[0u8; 100]).is_ok(),
            "{name}: one-shot rejected input at the limit"
        );
        ensure!(
            alg.one_shot(&key, &[0u8; 101]) == Err(Error::MaximumLengthExceeded),
            "{name}: one-shot accepted input past the limit"
        );

        let mut st = Stream::create(&alg, &key).unwrap();
        st.update(&[7u8; 60]).map_err(|e| format!("{name}: {e}"))?;
        ensure!(
            st.update(&[8u8; 50]) == Err(Error::MaximumLengthExceeded),
            "{name}: accepted an update past the limit"
        );
        st.update(&[9u8; 40]).map_err(|e| format!("{name}: valid update after a rejected one: {e}"))?;
        ensure!(
            st.update(&[1u8]) == Err(Error::MaximumLengthExceeded),
            "{name}: accepted the 101st byte"
        );
        ensure!(
            st.update(&[]).is_ok(),
            "{name}: rejected an empty update at the limit"
        );
        let mut full = vec![7u8; 60];
        full.extend_from_slice(&[9u8; 40]);
        let want = alg.one_shot(&key, &full).unwrap();
        ensure!(
            st.digest() == want,
            "{name}: state damaged by the rejected update"
        );
    }
    Ok(())
}

fn c07() -> Result<(), String> {
    let hpke = parse_ir(HPKE).map_err(|e| e.to_string())?;
    let fz = functorize(&hpke).map_err(|e| e.to_string())?;
    ensure!(emit_ir(&fz) == HPKE_FUNCTORIZED, "functorized pipeline golden diverged");

    let cp256 = SpecializationRequest {
        entry_points: vec!["seal".into()],
        index_value: "ChachaPolyP256".into(),
        bindings: vec![
            ("dh".into(), "dh_p256".into()),
            ("aead_enc".into(), "aead_chachapoly".into()),
        ],
        suffix: "cp256".into(),
    };
    let out = instantiate(&hpke, &cp256).map_err(|e| e.to_string())?;
    ensure!(emit_ir(&out) == HPKE_CP256, "specialized pipeline golden diverged");
    let sealed = interpret(&out, "seal_cp256", &[2, 3, 5], None).map_err(|e| e.to_string())?;
    ensure!(sealed == 2147, "seal_cp256(2,3,5) = {sealed}, want 2147");

    let curve = parse_ir(CURVE).map_err(|e| e.to_string())?;
    let curve_fz = functorize(&curve).map_err(|e| e.to_string())?;
    ensure!(
        emit_ir(&curve_fz) == CURVE_FUNCTORIZED,
        "curve functorized golden diverged"
    );
    let stage1 = instantiate(
        &curve,
        &SpecializationRequest {
            entry_points: vec!["fadd".into(), "fmul".into()],
            index_value: "Hacl".into(),
            bindings: vec![
                ("core_add".into(), "core_add_hacl".into()),
                ("core_mul".into(), "core_mul_hacl".into()),
            ],
            suffix: "hacl".into(),
        },
    )
    .map_err(|e| e.to_string())?;
    let merged = curve.merge(stage1).map_err(|e| e.to_string())?;
    let stage2 = instantiate(
        &merged,
        &SpecializationRequest {
            entry_points: vec!["curve_double".into()],
            index_value: "Hacl".into(),
            bindings: vec![
                ("field_add".into(), "fadd_hacl".into()),
                ("field_mul".into(), "fmul_hacl".into()),
            ],
            suffix: "hacl".into(),
        },
    )
    .map_err(|e| e.to_string())?;
    ensure!(emit_ir(&stage2) == CURVE_HACL, "two-stage golden diverged");
    let doubled =
        interpret(&stage2, "curve_double_hacl", &[5, 3], None).map_err(|e| e.to_string())?;
    ensure!(doubled == -110, "curve_double_hacl(5,3) = {doubled}, want -110");
    Ok(())
}

fn c08() -> Result<(), String> {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(53);
    for seed in 0..200u64 {
        let gp = random_program(seed);
        let runnable = forward_externs(&gp.program, &gp.bindings);
        for sym in &gp.program.index.clone() {
            let req = SpecializationRequest {
                entry_points: gp.entries.clone(),
                index_value: sym.clone(),
                bindings: gp.bindings.clone(),
                suffix: sym.to_lowercase(),
            };
            let out = instantiate(&gp.program, &req)
                .map_err(|e| format!("seed {seed} idx {sym}: {e}"))?;
            for entry in &gp.entries {
                let arity = gp.program.function(entry).unwrap().params.len();
                for _ in 0..10 {
                    let args: Vec<i64> =
                        (0..arity).map(|_| rng.random_range(-100..=100)).collect();
                    let want = interpret(&runnable, entry, &args, Some(sym))
                        .map_err(|e| format!("seed {seed}: {e}"))?;
                    let got = interpret(&out, &format!("{entry}_{}", req.suffix), &args, None)
                        .map_err(|e| format!("seed {seed}: {e}"))?;
                    ensure!(
                        want == got,
                        "seed {seed} entry {entry} idx {sym} args {args:?}: {want} != {got}"
                    );
                }
            }
        }
    }
    ensure!(
        start.elapsed() < Duration::from_secs(30),
        "took {:?}, budget 30s",
        start.elapsed()
    );
    Ok(())
}

fn c09() -> Result<(), String> {
    for seed in 0..200u64 {
        let gp = random_program(seed);
        let fz =
            functorize(&gp.program).map_err(|e| format!("seed {seed}: {e}"))?;
        functor_dependencies_are_subsets(&gp.program, &fz)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        let banned: Vec<String> = gp
            .program
            .functions
            .iter()
            .filter(|f| f.attr == Attribute::Eliminate)
            .map(|f| f.name.clone())
            .collect();
        for sym in &gp.program.index.clone() {
            let req = SpecializationRequest {
                entry_points: gp.entries.clone(),
                index_value: sym.clone(),
                bindings: gp.bindings.clone(),
                suffix: sym.to_lowercase(),
            };
            let out = instantiate(&gp.program, &req)
                .map_err(|e| format!("seed {seed} idx {sym}: {e}"))?;
            fully_specialized(&out).map_err(|e| format!("seed {seed} idx {sym}: {e}"))?;
            shape_preserved(&gp.program, &out, &req)
                .map_err(|e| format!("seed {seed} idx {sym}: {e}"))?;
            let mangled: Vec<String> =
                banned.iter().map(|n| format!("{n}_{}", req.suffix)).collect();
            if let Some(tok) = forbidden_token(&emit_ir(&out), &banned, &mangled) {
                return Err(format!("seed {seed} idx {sym}: leftover token {tok}"));
            }

            let want = contracted_edges(&gp.program, &req)
                .map_err(|e| format!("seed {seed} idx {sym}: {e}"))?;
            let got = specialized_edges(&gp.program, &out);
            if want != got {
                let missing: Vec<_> = want.difference(&got).collect();
                let extra: Vec<_> = got.difference(&want).collect();
                return Err(format!(
                    "seed {seed} idx {sym}: graphs differ, missing {missing:?}, extra {extra:?}"
                ));
            }
        }
    }
    Ok(())
}

/// Index machinery and inlined-away names that must never appear in
/// specialized output. Exact-token matching: mangled names may contain
/// `idx` or an eliminated name as a substring.
fn forbidden_token(text: &str, eliminated: &[String], mangled: &[String]) -> Option<String> {
    text.split(|c: char| c.is_whitespace() || "()[]".contains(c))
        .filter(|t| !t.is_empty())
        .find(|t| {
            matches!(*t, "idx" | "match-idx" | "extern" | "eliminate")
                || t.starts_with("mk_")
                || eliminated.iter().any(|n| n == t)
                || mangled.iter().any(|n| n == t)
        })
        .map(str::to_string)
}

/// Call edges of the index-contracted, Specialize-restricted graph the
/// specialized output must reproduce: one node per specialized copy, one
/// edge per Specialize callee reachable through inlined Eliminate bodies,
/// with index dispatch resolved at the requested value and externs mapped
/// through their bindings. Derived from the original program only, never
/// from the rewriter's own bookkeeping.
///
/// Contraction models the inlining substitution: an argument passed to an
/// Eliminate function is walked once per use of the receiving parameter,
/// so calls inside an argument that the body never uses contribute no
/// edges, exactly as beta reduction drops them.
fn contracted_edges(
    p: &IrProgram,
    req: &SpecializationRequest,
) -> Result<BTreeSet<(String, String)>, String> {
    let bound: HashMap<&str, &str> = req
        .bindings
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    let mangle = |f: &str| format!("{f}_{}", req.suffix);
    let mut edges = BTreeSet::new();
    let mut queue: Vec<String> = req.entry_points.clone();
    let mut seen: BTreeSet<String> = queue.iter().cloned().collect();
    while let Some(f) = queue.pop() {
        let fun = p.function(&f).ok_or(format!("{f} is not a function"))?;
        let mut targets = BTreeSet::new();
        let empty = Env::default();
        collect_contracted(p, &fun.body, &req.index_value, &empty, &mut targets, 0)?;
        for t in targets {
            let name = if let Some(&b) = bound.get(t.as_str()) {
                b.to_string()
            } else if p.function(&t).is_some_and(|g| g.indexed) {
                if seen.insert(t.clone()) {
                    queue.push(t.clone());
                }
                mangle(&t)
            } else {
                t.clone()
            };
            edges.insert((mangle(&f), name));
        }
    }
    Ok(edges)
}

/// A name bound during contraction: the bound expression plus the
/// environment its free names resolve in (the binder's scope, not the
/// body's).
#[derive(Clone)]
struct Binding {
    expr: IrExpr,
    env: Env,
}

type Env = std::rc::Rc<HashMap<String, Binding>>;

fn collect_contracted(
    p: &IrProgram,
    e: &IrExpr,
    sym: &str,
    env: &Env,
    out: &mut BTreeSet<String>,
    depth: usize,
) -> Result<(), String> {
    if depth > 500 {
        return Err("eliminate chain too deep".into());
    }
    match e {
        IrExpr::Int(_) => {}
        IrExpr::Var(v) => {
            if let Some(b) = env.get(v) {
                collect_contracted(p, &b.expr, sym, &b.env, out, depth + 1)?;
            }
        }
        IrExpr::Let { name, value, body } => {
            collect_contracted(p, value, sym, env, out, depth + 1)?;
            let mut child = (**env).clone();
            child.insert(
                name.clone(),
                Binding { expr: (**value).clone(), env: env.clone() },
            );
            collect_contracted(p, body, sym, &Env::new(child), out, depth + 1)?;
        }
        IrExpr::Bin { lhs, rhs, .. } => {
            collect_contracted(p, lhs, sym, env, out, depth + 1)?;
            collect_contracted(p, rhs, sym, env, out, depth + 1)?;
        }
        IrExpr::Ifz { cond, zero, nonzero } => {
            collect_contracted(p, cond, sym, env, out, depth + 1)?;
            collect_contracted(p, zero, sym, env, out, depth + 1)?;
            collect_contracted(p, nonzero, sym, env, out, depth + 1)?;
        }
        IrExpr::Call { callee, args, .. } => match p.resolve(callee) {
            Some(Callee::Function(g)) if g.attr == Attribute::Eliminate => {
                let frame: HashMap<String, Binding> = g
                    .params
                    .iter()
                    .zip(args)
                    .map(|(param, a)| {
                        (param.clone(), Binding { expr: a.clone(), env: env.clone() })
                    })
                    .collect();
                collect_contracted(p, &g.body, sym, &Env::new(frame), out, depth + 1)?;
            }
            Some(_) => {
                out.insert(callee.clone());
                for a in args {
                    collect_contracted(p, a, sym, env, out, depth + 1)?;
                }
            }
            None => return Err(format!("unbound callee {callee}")),
        },
        IrExpr::MatchIdx { arms } => {
            let arm = arms
                .iter()
                .find(|(s, _)| s == sym)
                .ok_or(format!("match-idx lacks an arm for {sym}"))?;
            collect_contracted(p, &arm.1, sym, env, out, depth + 1)?;
        }
    }
    Ok(())
}

/// Edges out of the functions the rewrite added.
fn specialized_edges(original: &IrProgram, out: &IrProgram) -> BTreeSet<(String, String)> {
    let mut edges = BTreeSet::new();
    for f in &out.functions {
        if original.function(&f.name).is_some() {
            continue;
        }
        let mut callees = BTreeSet::new();
        collect_calls(&f.body, &mut callees);
        for c in callees {
            edges.insert((f.name.clone(), c));
        }
    }
    edges
}

fn collect_calls(e: &IrExpr, out: &mut BTreeSet<String>) {
    match e {
        IrExpr::Int(_) | IrExpr::Var(_) => {}
        IrExpr::Let { value, body, .. } => {
            collect_calls(value, out);
            collect_calls(body, out);
        }
        IrExpr::Bin { lhs, rhs, .. } => {
            collect_calls(lhs, out);
            collect_calls(rhs, out);
        }
        IrExpr::Ifz { cond, zero, nonzero } => {
            collect_calls(cond, out);
            collect_calls(zero, out);
            collect_calls(nonzero, out);
        }
        IrExpr::Call { callee, args, .. } => {
            out.insert(callee.clone());
            for a in args {
                collect_calls(a, out);
            }
        }
        IrExpr::MatchIdx { arms } => {
            for (_, a) in arms {
                collect_calls(a, out);
            }
        }
    }
}

fn c10() -> Result<(), String> {
    let bin = env!("CARGO_BIN_EXE_blockstream");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = dir.path().join("input.bin");
    let mut rng = StdRng::seed_from_u64(71);
    let data: Vec<u8> = (0..10_000).map(|_| rng.random()).collect();
    std::fs::write(&input, &data).map_err(|e| e.to_string())?;
    let input = input.to_str().unwrap();
    let want = hex::encode(alg::sha256().one_shot(&[], &data).unwrap());

    let run = |args: &[&str]| -> Result<(i32, String), String> {
        let out = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        Ok((
            out.status.code().unwrap_or(-1),
            String::from_utf8_lossy(&out.stdout).into_owned(),
        ))
    };

    for chunk in ["1", "3", "64", "65", "4096"] {
        let (code, stdout) =
            run(&["hash", "--alg", "sha256", "--chunk-size", chunk, input])?;
        ensure!(code == 0, "chunk {chunk}: exit {code}");
        let line = format!("{want}  {input}\n");
        ensure!(stdout == line, "chunk {chunk}: digest line changed: {stdout}");
    }

    let (code, _) = run(&["hash", "--alg", "whirlpool", input])?;
    ensure!(code == 2, "unknown algorithm exited {code}, want 2");
    let (code, _) = run(&["hash", "--alg", "sha256", "/no/such/file"])?;
    ensure!(code == 1, "missing file exited {code}, want 1");
    let (code, _) = run(&["hash", "--alg", "sha256", "--max-input-length", "100", input])?;
    ensure!(code == 3, "length limit exited {code}, want 3");
    let (code, _) = run(&[
        "hash", "--alg", "sha256", "--max-input-length", "100", "/no/such/file", input,
    ])?;
    ensure!(code == 3, "worst-wins exited {code}, want 3");

    let (code, _) = run(&["selftest"])?;
    ensure!(code == 0, "selftest exited {code}, want 0");
    let corrupt = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/kat_corrupt.json");
    let (code, stdout) = run(&["selftest", "--vectors", corrupt])?;
    ensure!(code == 1, "corrupted selftest exited {code}, want 1");
    ensure!(stdout.contains("FAIL"), "corrupted selftest printed no failure");

    let hpke_path = concat!(env!("CARGO_MANIFEST_DIR"), "/../specializer/fixtures/hpke.ir");
    let (code, stdout) = run(&[
        "specialize", hpke_path,
        "--index", "ChachaPolyP256",
        "--bind", "dh=dh_p256",
        "--bind", "aead_enc=aead_chachapoly",
        "--suffix", "cp256",
    ])?;
    ensure!(code == 0, "specialize exited {code}, want 0");
    ensure!(stdout == HPKE_CP256, "specialize stdout diverged from the golden file");
    let cycle_path = concat!(env!("CARGO_MANIFEST_DIR"), "/../specializer/fixtures/cycle.ir");
    let (code, _) = run(&["specialize", cycle_path, "--index", "Hacl"])?;
    ensure!(code == 1, "cyclic program exited {code}, want 1");
    Ok(())
}

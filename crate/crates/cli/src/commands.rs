use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use polydd::cartan::CartanData;
use polydd::chain::Chain;
use polydd::character::{chi, demazure_t, LaurentPolynomial};
use polydd::constructions::{
    bott_tower_space, degenerate as degenerate_space, fully_degenerate, gz_direct, gz_seed,
    gz_space, gz_word, sp4_example, space_from_word, twisted_cube as build_twisted_cube,
};
use polydd::ops::{OpToken, OperatorWord};
use polydd::rational::{format_rat, parse_rat_list, Rat};
use polydd::string_space::StringSpace;
use serde::Serialize;

use crate::manifest::Manifest;
use crate::{
    BottSamelsonArgs, BottTowerArgs, CheckArgs, DegenerateArgs, ExportArgs, GzArgs, RunArgs,
    Sp4Args, TwistedCubeArgs,
};

fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {path}"))
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn emit(out: Option<&str>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(parent) = Path::new(path).parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)?;
                }
            }
            fs::write(path, content).with_context(|| format!("writing {path}"))?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

pub fn space_validate(file: &str) -> Result<i32> {
    let space: StringSpace = read_json(file)?;
    println!(
        "OK: rank {}, dimension {}, blocks {:?}",
        space.rank(),
        space.dim(),
        space.block_dims()
    );
    Ok(0)
}

fn load_run(
    manifest: &Option<String>,
    space: &Option<String>,
    word: &Option<String>,
    seed: &Option<String>,
) -> Result<Manifest> {
    let mut loaded = match manifest {
        Some(path) => read_json::<Manifest>(path)?,
        None => {
            let space_path = space
                .as_ref()
                .ok_or_else(|| anyhow!("need --manifest or --space"))?;
            let space: StringSpace = read_json(space_path)?;
            let dim = space.dim();
            Manifest::new(
                space,
                OperatorWord::new(Vec::new()),
                vec![Rat::from_integer(0); dim],
            )
        }
    };
    if let Some(w) = word {
        let tokens: Vec<&str> = w.split_whitespace().collect();
        loaded.word = OperatorWord::parse(&tokens)?;
    }
    if let Some(s) = seed {
        loaded.seed = parse_rat_list(s)?;
    }
    loaded.validate()?;
    Ok(loaded)
}

#[derive(Serialize)]
struct TracedOutput {
    #[serde(rename = "final")]
    final_chain: Chain,
    trace: Vec<Chain>,
}

pub fn apply(args: RunArgs) -> Result<i32> {
    let manifest = load_run(&args.manifest, &args.space, &args.word, &args.seed)?;
    let (final_chain, trace) = manifest
        .word
        .apply_traced(&manifest.space, &manifest.seed)?;
    if args.oracle {
        let geometric = chi(&final_chain);
        let symbolic = oracle_character(&manifest.space, &manifest.word, &manifest.seed)?;
        if geometric != symbolic {
            report_first_difference(&geometric, &symbolic);
            return Ok(3);
        }
        eprintln!("oracle: characters agree ({} monomials)", geometric.len());
    }
    let rendered = if args.trace {
        pretty(&TracedOutput { final_chain, trace })
    } else {
        pretty(&final_chain)
    };
    emit(args.out.as_deref(), &rendered)?;
    Ok(0)
}

/// The symbolic route: fold the word over the seed monomial, sending each
/// divided difference to `T_i` and each translation to multiplication by
/// `e^{p(u)}`.
fn oracle_character(
    space: &StringSpace,
    word: &OperatorWord,
    seed: &[Rat],
) -> Result<LaurentPolynomial> {
    let weight = space.weight(seed)?;
    let mut acc = LaurentPolynomial::monomial(weight.coords(), 1);
    for token in word.tokens().iter().rev() {
        acc = match token {
            OpToken::D(i) => demazure_t(space, *i, &acc)?,
            OpToken::E(u) => {
                let p = space.weight(u)?;
                acc.mul_monomial(p.coords(), 1)?
            }
        };
    }
    Ok(acc)
}

fn report_first_difference(geometric: &LaurentPolynomial, symbolic: &LaurentPolynomial) {
    let lhs: BTreeMap<Vec<Rat>, i64> = geometric.terms().collect();
    let rhs: BTreeMap<Vec<Rat>, i64> = symbolic.terms().collect();
    let mut exponents: Vec<&Vec<Rat>> = lhs.keys().chain(rhs.keys()).collect();
    exponents.sort();
    exponents.dedup();
    for e in exponents {
        let a = lhs.get(e).copied().unwrap_or(0);
        let b = rhs.get(e).copied().unwrap_or(0);
        if a != b {
            let exp: Vec<String> = e.iter().map(format_rat).collect();
            eprintln!(
                "character mismatch at exponent [{}]: pipeline {a}, oracle {b}",
                exp.join(",")
            );
            return;
        }
    }
}

pub fn check(args: CheckArgs) -> Result<i32> {
    let manifest = load_run(&args.manifest, &args.space, &args.word, &args.seed)?;
    let geometric = match &args.chain {
        Some(path) => {
            let chain: Chain = read_json(path)?;
            if chain.space() != &manifest.space {
                bail!("chain file lives in a different string space");
            }
            chi(&chain)
        }
        None => chi(&manifest.word.apply(&manifest.space, &manifest.seed)?),
    };
    let symbolic = oracle_character(&manifest.space, &manifest.word, &manifest.seed)?;
    println!(
        "chi(pipeline): {} monomials, t=1 value {}",
        geometric.len(),
        geometric.eval_at_one()
    );
    println!(
        "chi(oracle):   {} monomials, t=1 value {}",
        symbolic.len(),
        symbolic.eval_at_one()
    );
    println!("character: {}", geometric.pretty());
    println!("character json: {}", serde_json::to_string(&geometric)?);
    let mut failed = false;
    if geometric == symbolic {
        println!("character identity: PASS");
    } else {
        println!("character identity: FAIL");
        report_first_difference(&geometric, &symbolic);
        failed = true;
    }

    let cartan_name = args.cartan.clone().or_else(|| manifest.cartan.clone());
    if let Some(name) = cartan_name {
        match freudenthal_report(&manifest, &name, &geometric) {
            Ok(lines) => {
                for l in &lines.0 {
                    println!("{l}");
                }
                failed |= lines.1;
            }
            Err(e) => println!("freudenthal comparison: skipped ({e})"),
        }
    }
    Ok(if failed { 3 } else { 0 })
}

/// Freudenthal and Weyl-dimension comparisons, available when the manifest
/// carries Cartan data, the word is a reduced word for w_0, and the seed's
/// weight reflects to a dominant lambda.
fn freudenthal_report(
    manifest: &Manifest,
    cartan_name: &str,
    geometric: &LaurentPolynomial,
) -> Result<(Vec<String>, bool)> {
    let cartan = CartanData::from_name(cartan_name)?;
    let blocks = manifest
        .word
        .simple_blocks()
        .ok_or_else(|| anyhow!("word contains translations"))?;
    let map = manifest
        .block_roots
        .clone()
        .unwrap_or_else(|| (1..=manifest.space.rank()).collect());
    if map.len() < manifest.space.rank() || map.iter().any(|&r| r == 0 || r > cartan.rank()) {
        bail!("block-to-root map does not fit the Cartan rank");
    }
    let roots: Vec<usize> = blocks.iter().map(|&b| map[b] - 1).collect();
    if !cartan.is_longest_word(&roots) {
        bail!("word is not a reduced word for the longest element");
    }
    let weight = manifest.space.weight(&manifest.seed)?;
    let mut low = vec![Rat::from_integer(0); cartan.rank()];
    for (block, value) in weight.coords().iter().enumerate() {
        low[map[block] - 1] = *value;
    }
    let lambda = cartan.w0_action(&low);
    if !cartan.is_dominant(&lambda) {
        bail!("w_0 of the seed weight is not dominant");
    }
    let mut lines = Vec::new();
    let mut failed = false;
    let expected = cartan.freudenthal_multiplicities(&lambda)?;
    let mut actual: BTreeMap<Vec<Rat>, i64> = BTreeMap::new();
    for (exp, coeff) in geometric.terms() {
        let mut full = vec![Rat::from_integer(0); cartan.rank()];
        for (block, value) in exp.iter().enumerate() {
            full[map[block] - 1] = *value;
        }
        actual.insert(full, coeff);
    }
    if actual == expected {
        lines.push(format!(
            "freudenthal multiplicities: PASS ({} weights)",
            expected.len()
        ));
    } else {
        lines.push("freudenthal multiplicities: FAIL".to_string());
        failed = true;
    }
    let dim = cartan.weyl_dimension(&lambda)?;
    if dim == geometric.eval_at_one() {
        lines.push(format!("weyl dimension: PASS ({dim})"));
    } else {
        lines.push(format!(
            "weyl dimension: FAIL (formula {dim}, character total {})",
            geometric.eval_at_one()
        ));
        failed = true;
    }
    Ok((lines, failed))
}

pub fn export(args: ExportArgs) -> Result<i32> {
    let chain: Chain = read_json(&args.chain)?;
    match args.format.as_str() {
        "json" => emit(args.out.as_deref(), &pretty(&chain))?,
        "points" => {
            let mut lines = String::new();
            for (point, value) in chain.support_points(false) {
                let coords: Vec<String> =
                    chain.to_rational(&point).iter().map(format_rat).collect();
                lines.push_str(&format!("{}\t{}\n", coords.join(","), value));
            }
            emit(args.out.as_deref(), &lines)?;
        }
        "off" => {
            let base = args
                .out
                .as_deref()
                .ok_or_else(|| anyhow!("off export needs --out BASE"))?;
            let projection = match &args.project {
                Some(p) => Some(crate::export::parse_projection(p, chain.space().dim())?),
                None => None,
            };
            crate::export::write_off(&chain, projection, base)?;
        }
        other => bail!("unknown format `{other}` (expected json, points, or off)"),
    }
    Ok(0)
}

pub fn gz(args: GzArgs) -> Result<i32> {
    let lambda: Vec<i64> = args
        .lambda
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .context("lambda entries must be integers")
        })
        .collect::<Result<_>>()?;
    if lambda.len() != args.n {
        bail!("lambda must have {} entries", args.n);
    }
    let mut manifest = Manifest::new(gz_space(args.n)?, gz_word(args.n)?, gz_seed(&lambda)?);
    manifest.cartan = Some(format!("A{}", args.n - 1));
    manifest.block_roots = Some((1..args.n).collect());
    manifest.polytope = Some(gz_direct(&lambda)?);
    emit(args.out.as_deref(), &pretty(&manifest))?;
    Ok(0)
}

pub fn sp4(args: Sp4Args) -> Result<i32> {
    let seed: Vec<i64> = args
        .seed
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .context("seed entries must be integers")
        })
        .collect::<Result<_>>()?;
    if seed.len() != 4 {
        bail!("seed must have 4 entries");
    }
    let ex = sp4_example(seed[0], seed[1], seed[2], seed[3])?;
    let mut manifest = Manifest::new(ex.space, ex.word, ex.seed);
    manifest.cartan = Some("C2".to_string());
    manifest.block_roots = Some(vec![1, 2]);
    manifest.polytope = Some(ex.polytope);
    emit(args.out.as_deref(), &pretty(&manifest))?;
    Ok(0)
}

pub fn twisted_cube(args: TwistedCubeArgs) -> Result<i32> {
    let seed = parse_rat_list(&args.seed)?;
    if seed.len() != 3 {
        bail!("seed must have 3 entries");
    }
    let tc = build_twisted_cube(seed[0], seed[1], seed[2])?;
    let mut manifest = Manifest::new(tc.space, tc.word, tc.seed);
    manifest.polytope = Some(tc.polytope);
    manifest.removed = Some(tc.removed);
    emit(args.out.as_deref(), &pretty(&manifest))?;
    Ok(0)
}

pub fn degenerate(args: DegenerateArgs) -> Result<i32> {
    let space: StringSpace = read_json(&args.space)?;
    let result = if args.full {
        fully_degenerate(&space)
    } else {
        let block = args
            .block
            .ok_or_else(|| anyhow!("need --block or --full"))?;
        if block == 0 {
            bail!("blocks are numbered from 1");
        }
        degenerate_space(&space, block - 1)?
    };
    emit(args.out.as_deref(), &pretty(&result))?;
    Ok(0)
}

pub fn bott_tower(args: BottTowerArgs) -> Result<i32> {
    let rows: Vec<Vec<i64>> = args
        .matrix
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .context("matrix entries must be integers")
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<_>>()?;
    let space = bott_tower_space(&rows)?;
    let d = space.dim();
    let word = OperatorWord::from_blocks(&(0..d).collect::<Vec<_>>());
    let seed = match &args.seed {
        Some(s) => parse_rat_list(s)?,
        None => vec![Rat::from_integer(0); d],
    };
    let manifest = Manifest::new(space, word, seed);
    emit(args.out.as_deref(), &pretty(&manifest))?;
    Ok(0)
}

pub fn bott_samelson(args: BottSamelsonArgs) -> Result<i32> {
    let cartan = CartanData::from_name(&args.cartan)?;
    let letters: Vec<usize> = args
        .word
        .split(',')
        .map(|t| -> Result<usize> {
            let v: usize = t
                .trim()
                .parse()
                .context("word letters must be positive integers")?;
            if v == 0 {
                bail!("simple roots are numbered from 1");
            }
            Ok(v - 1)
        })
        .collect::<Result<_>>()?;
    let ws = space_from_word(&cartan, &letters)?;
    let mut translations: BTreeMap<usize, Vec<Rat>> = BTreeMap::new();
    for entry in &args.translations {
        let (pos, vec) = entry
            .split_once(':')
            .ok_or_else(|| anyhow!("--u expects POSITION:u1,u2,... got `{entry}`"))?;
        let pos: usize = pos.trim().parse().context("translation position")?;
        if pos == 0 || pos > letters.len() {
            bail!("translation position {pos} outside the word");
        }
        translations.insert(pos, parse_rat_list(vec)?);
    }
    let mut tokens = Vec::new();
    for (idx, &block) in ws.position_blocks.iter().enumerate() {
        if let Some(u) = translations.remove(&(idx + 1)) {
            if u.len() != ws.space.dim() {
                bail!("translation vectors must have dimension {}", ws.space.dim());
            }
            tokens.push(OpToken::E(u));
        }
        tokens.push(OpToken::D(block));
    }
    let seed = match &args.seed {
        Some(s) => parse_rat_list(s)?,
        None => vec![Rat::from_integer(0); ws.space.dim()],
    };
    let mut manifest = Manifest::new(ws.space, OperatorWord::new(tokens), seed);
    manifest.cartan = Some(args.cartan.to_ascii_uppercase());
    manifest.block_roots = Some(ws.block_roots.iter().map(|&r| r + 1).collect());
    emit(args.out.as_deref(), &pretty(&manifest))?;
    Ok(0)
}

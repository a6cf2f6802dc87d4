use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use recouple_core::braidrep::{bracket_report, check_relations, BraidWord};
use recouple_core::recoupling::certify::certify_all;
use recouple_core::recoupling::{Association, Associator, VirtualBraidedTree};
use recouple_core::sampling;
use recouple_core::trees::{count_labelings, FusionMode, LabeledTree, ParticleLabel, TreeShape};
use recouple_core::{constants, Error, Scalar};

const BRAID_GRAMMAR: &str = "`n=<int>;` then whitespace-separated `s<k>`, `s<k>^-1`, `v<k>` with 1 <= k < n";
const SHAPE_GRAMMAR: &str = "`L` or `(<shape> <shape>)`, e.g. `((L L) L)`";
const TREE_GRAMMAR: &str = "`L:<label>` or `(<tree> <tree>):<label>` with labels P, *, ~P";

#[derive(Parser)]
#[command(
    name = "recouple",
    version,
    about = "Recoupling calculus for virtual braided fusion trees"
)]
struct Cli {
    /// Output format; JSON is the stable machine format.
    #[arg(long, value_enum, global = true, env = "RECOUPLE_FORMAT", default_value = "json")]
    format: Format,

    /// Seed for randomized inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Classical,
    Virtual,
}

#[derive(Subcommand)]
enum Command {
    /// Left-associate a braid stacked on a fusion tree.
    #[command(group(ArgGroup::new("input").required(true).args(["braid", "sample"])))]
    Leftassoc {
        #[arg(long, value_parser = parse_braid, requires = "target")]
        braid: Option<BraidWord>,
        /// Run every classical labeling of this shape.
        #[arg(long, value_parser = parse_shape, group = "target")]
        shape: Option<TreeShape>,
        #[arg(long, value_parser = parse_tree, group = "target")]
        tree: Option<LabeledTree>,
        /// Draw this many random inputs from the seed instead.
        #[arg(long, conflicts_with_all = ["braid", "shape", "tree"])]
        sample: Option<usize>,
    },
    /// Bracket of the closure of a braid.
    Bracket {
        #[arg(long, value_parser = parse_braid)]
        braid: BraidWord,
        /// Also evaluate at A = re + i im.
        #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
        at: Option<Vec<f64>>,
    },
    /// Check the virtual braid group relations on the left-comb spaces.
    CheckRelations {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=5))]
        strands: u64,
    },
    /// Certify every rewrite rule against the diagram oracle.
    CertifyRules,
    /// Count admissible labelings of the left comb.
    Dim {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=60))]
        leaves: u64,
        #[arg(long, value_enum, default_value = "classical")]
        mode: Mode,
    },
    /// Evaluate a named constant or a serialized scalar at a complex A.
    #[command(group(ArgGroup::new("value").required(true).args(["constant", "scalar"])))]
    Eval {
        #[arg(long, value_parser = constant_names())]
        constant: Option<String>,
        /// Scalar in its JSON serialization.
        #[arg(long, value_parser = parse_scalar)]
        scalar: Option<Scalar>,
        #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true, required = true)]
        at: Vec<f64>,
    },
}

fn parse_braid(s: &str) -> Result<BraidWord, String> {
    s.parse().map_err(|e| format!("{e}; expected {BRAID_GRAMMAR}"))
}

fn parse_shape(s: &str) -> Result<TreeShape, String> {
    s.parse().map_err(|e| format!("{e}; expected {SHAPE_GRAMMAR}"))
}

fn parse_tree(s: &str) -> Result<LabeledTree, String> {
    s.parse().map_err(|e| format!("{e}; expected {TREE_GRAMMAR}"))
}

fn parse_scalar(s: &str) -> Result<Scalar, String> {
    let grammar = "expected {\"p\": {\"num\": [[coeff, exp], ...], \"den\": [...]}, \"q\": {...}}";
    let v: Value = serde_json::from_str(s).map_err(|e| format!("{e}; {grammar}"))?;
    Scalar::from_json(&v).map_err(|e| format!("{e}; {grammar}"))
}

fn constant_names() -> Vec<&'static str> {
    constants().entries().into_iter().map(|(name, _)| name).collect()
}

/// Command output: the JSON document and its human-readable rendering.
struct Output {
    json: Value,
    text: String,
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn at_point(at: &[f64]) -> Complex64 {
    Complex64::new(at[0], at[1])
}

fn association_json(input: &VirtualBraidedTree, out: &Association) -> Value {
    json!({
        "braid": input.braid().to_string(),
        "tree": input.tree().to_string(),
        "world": format!("{:?}", out.world).to_lowercase(),
        "exact": out.is_exact(),
        "result": out.vector.to_json(),
    })
}

fn association_text(input: &VirtualBraidedTree, out: &Association) -> String {
    let mut s = format!("{input}\n");
    if out.vector.is_empty() {
        s.push_str("  0\n");
    }
    for (t, c) in out.vector.sorted_terms() {
        s.push_str(&format!("  ({c}) {t}\n"));
    }
    if !out.is_exact() {
        s.push_str("  (projected: some associativity move was not exact)\n");
    }
    s
}

fn leftassoc(
    braid: Option<BraidWord>,
    shape: Option<TreeShape>,
    tree: Option<LabeledTree>,
    sample: Option<usize>,
    seed: u64,
) -> Result<Output, Error> {
    let inputs = match (braid, shape, tree, sample) {
        (Some(b), Some(s), _, _) => VirtualBraidedTree::labelings(&b, &s)?,
        (Some(b), _, Some(t), _) => vec![VirtualBraidedTree::new(b, t)?],
        (_, _, _, Some(k)) => {
            let mut rng = sampling::rng(seed);
            (0..k).map(|_| sampling::virtual_braided_tree(&mut rng, 5, 4)).collect()
        }
        _ => unreachable!("clap enforces an input"),
    };
    let mut associator = Associator::new();
    let (mut results, mut text) = (Vec::new(), String::new());
    for input in &inputs {
        let out = associator.left_associate(input);
        results.push(association_json(input, &out));
        text.push_str(&association_text(input, &out));
    }
    Ok(Output {
        json: json!({ "command": "leftassoc", "results": results }),
        text,
    })
}

fn bracket(braid: &BraidWord, at: Option<&[f64]>) -> Result<Output, Error> {
    let report = bracket_report(braid);
    let mut json = json!({ "command": "bracket", "braid": braid.to_string(), "bracket": report.to_json() });
    let mut text = format!("<{braid}> = {}\nwrithe {}\n", report.value, report.writhe);
    if let Some(at) = at {
        let a = at_point(at);
        let z = report.value.eval(a)?;
        json["at"] = complex_json(a);
        json["numeric"] = complex_json(z);
        text.push_str(&format!("at A = {a}: {z}\n"));
    }
    Ok(Output { json, text })
}

fn relations(strands: usize) -> Result<Output, Error> {
    let checks = check_relations(strands)?;
    let holding = checks.iter().filter(|c| c.holds).count();
    let mut text = format!("{holding}/{} relations hold on {strands} strands\n", checks.len());
    for c in &checks {
        let verdict = if c.holds { "holds" } else { "FAILS" };
        let exact = if c.exact { "" } else { " (projected moves)" };
        text.push_str(&format!("  {:?} {}: {verdict}{exact}\n", c.sector, c.relation));
    }
    Ok(Output {
        json: json!({
            "command": "check-relations",
            "strands": strands,
            "holding": holding,
            "total": checks.len(),
            "checks": checks.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        }),
        text,
    })
}

fn certify() -> Output {
    let certs = certify_all();
    let certified = certs.iter().filter(|c| c.certified()).count();
    let mut text = format!("{certified}/{} rules certified\n", certs.len());
    for c in &certs {
        text.push_str(&format!(
            "  [{}] {} ({}): {}/{}\n",
            if c.certified() { "ok" } else { "FAIL" },
            c.name,
            c.provenance.name(),
            c.passed,
            c.cases
        ));
    }
    Output {
        json: json!({
            "command": "certify-rules",
            "certified": certified,
            "total": certs.len(),
            "rules": certs.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        }),
        text,
    }
}

fn dim(leaves: usize, mode: Mode) -> Result<Output, Error> {
    let (fusion, labels, name) = match mode {
        Mode::Classical => (FusionMode::Classical, &ParticleLabel::CLASSICAL[..], "classical"),
        Mode::Virtual => (FusionMode::Virtual, &ParticleLabel::ALL[..], "virtual"),
    };
    let counts = count_labelings(&TreeShape::left_comb(leaves), fusion, ParticleLabel::P);
    let mut by_root = serde_json::Map::new();
    let mut text = format!("{leaves} leaves, {name}\n");
    let mut total: u128 = 0;
    for &l in labels {
        let c = counts.get(&l).copied().unwrap_or(0);
        total += c;
        by_root.insert(l.symbol().to_string(), json!(c.to_string()));
        text.push_str(&format!("  root {}: {c}\n", l.symbol()));
    }
    text.push_str(&format!("  total: {total}\n"));
    Ok(Output {
        json: json!({
            "command": "dim",
            "leaves": leaves,
            "mode": name,
            "by_root": by_root,
            "total": total.to_string(),
        }),
        text,
    })
}

fn eval(constant: Option<String>, scalar: Option<Scalar>, at: &[f64]) -> Result<Output, Error> {
    let (name, value) = match (constant, scalar) {
        (Some(name), _) => {
            let k = constants();
            let value = k
                .entries()
                .into_iter()
                .find(|(n, _)| *n == name)
                .map(|(_, v)| v.clone())
                .expect("clap restricts constant names");
            (Some(name), value)
        }
        (None, Some(s)) => (None, s),
        (None, None) => unreachable!("clap enforces a value"),
    };
    let a = at_point(at);
    let z = value.eval(a)?;
    Ok(Output {
        json: json!({
            "command": "eval",
            "constant": name,
            "value": value.to_json(),
            "at": complex_json(a),
            "numeric": complex_json(z),
        }),
        text: format!("{value}\nat A = {a}: {z}\n"),
    })
}

fn run(cli: Cli) -> Result<Output, Error> {
    match cli.command {
        Command::Leftassoc {
            braid,
            shape,
            tree,
            sample,
        } => leftassoc(braid, shape, tree, sample, cli.seed),
        Command::Bracket { braid, at } => bracket(&braid, at.as_deref()),
        Command::CheckRelations { strands } => relations(strands as usize),
        Command::CertifyRules => Ok(certify()),
        Command::Dim { leaves, mode } => dim(leaves as usize, mode),
        Command::Eval { constant, scalar, at } => eval(constant, scalar, &at),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("JSON values serialize")
                ),
                Format::Text => print!("{}", out.text),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({ "error": { "kind": e.kind(), "message": e.to_string() } }))
                        .expect("JSON values serialize")
                ),
                Format::Text => eprintln!("error: {e}"),
            }
            ExitCode::from(1)
        }
    }
}

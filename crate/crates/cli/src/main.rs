//! `clv`: annotate, decide, substitute and transform proofs from the shell.
//!
//! Exit codes: 0 valid / accepted, 1 invalid / rejected, 2 error or internal
//! disagreement between decision methods.

mod render;

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use lericone::error::Error;
use lericone::formula::{Formula, Sequent};
use lericone::hilbert::{check_proof, transform_proof, HilbertProof, Logic};
use lericone::relevance::{certify_irrelevance, lericone_sharing};
use lericone::semantics::{brute_consequence, decide, Assignment, Status, DEFAULT_CAP};
use lericone::seq::{annotate, LericoneSeq, Mode};
use lericone::subst::{apply_lericone, godel, skeletonize, substitution_from_json, GodelCoding, Keying, Numbering};
use lericone::tableau::{prove, TableauOutcome, TableauProof};

#[derive(Parser)]
#[command(name = "clv", version, about = "Lericone-sensitive logic toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest number of relevant keys brute force will enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Plain,
    Faithful,
    Both,
}

impl ModeArg {
    fn modes(self) -> Vec<Mode> {
        match self {
            ModeArg::Plain => vec![Mode::Plain],
            ModeArg::Faithful => vec![Mode::Faithful],
            ModeArg::Both => vec![Mode::Plain, Mode::Faithful],
        }
    }

    fn single(self) -> Result<Mode, Error> {
        match self {
            ModeArg::Plain => Ok(Mode::Plain),
            ModeArg::Faithful => Ok(Mode::Faithful),
            ModeArg::Both => Err(Error::Input("this command takes a single mode".into())),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Tableau,
    Brute,
    Skeleton,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum KeyingArg {
    Uniform,
    Exact,
    Faithful,
}

impl From<KeyingArg> for Keying {
    fn from(k: KeyingArg) -> Keying {
        match k {
            KeyingArg::Uniform => Keying::Uniform,
            KeyingArg::Exact => Keying::Exact,
            KeyingArg::Faithful => Keying::Faithful,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Show every node of a formula with its lericone sequence.
    Annotate { formula: String },
    /// Decide sequents such as "p1, p1 -> p2 |- p2"; a bare formula is a theorem.
    Prove {
        #[arg(required = true)]
        sequents: Vec<String>,
        #[arg(long, value_enum, default_value = "plain")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "tableau")]
        method: MethodArg,
        /// Include the closed tableau for valid sequents.
        #[arg(long)]
        proof: bool,
    },
    /// Apply a lericone substitution table, or the Gödel coding, to a formula.
    Substitute {
        formula: String,
        #[arg(long, conflicts_with = "table")]
        godel: bool,
        /// Substitution JSON file, or - for stdin.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Keying for tables that do not name one.
        #[arg(long, value_enum, default_value = "exact")]
        keying: KeyingArg,
        /// Sequence to read the formula from.
        #[arg(long, default_value = "")]
        at: String,
    },
    /// Rename every atom occurrence by its (sequence, atom) key.
    Skeleton {
        sequent: String,
        #[arg(long, value_enum, default_value = "plain")]
        mode: ModeArg,
        /// Number fresh atoms with the Gödel coding instead of 1, 2, 3, ...
        #[arg(long)]
        godel: bool,
    },
    /// Find a lericone sharing witness for an implication, or a countermodel.
    Share {
        implication: String,
        #[arg(long, value_enum, default_value = "plain")]
        mode: ModeArg,
    },
    /// Check a BM or B Hilbert proof file.
    CheckProof { file: PathBuf },
    /// Transform a proof of A into a proof of σ(ε, A); prints the new proof as JSON.
    TransformProof {
        file: PathBuf,
        #[arg(long)]
        subst: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        keying: KeyingArg,
    },
    /// Seeded cross-checks of the decision methods, proof transformation and h.
    SelfTest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

/// A successful run's exit status.
enum Outcome {
    Positive,
    Negative,
}

/// Methods disagreed or produced a bad certificate.
struct Disagreement(serde_json::Value);

enum Failure {
    Error(Error),
    Disagreement(Disagreement),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Positive) => ExitCode::from(0),
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(Failure::Error(e)) => {
            if cli.json {
                println!("{}", json!({ "error": e.to_string() }));
            }
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Disagreement(Disagreement(dump))) => {
            eprintln!("error: decision methods disagree");
            eprintln!("{}", serde_json::to_string_pretty(&dump).unwrap());
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String, Error> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(|e| Error::Input(format!("stdin: {e}")))?;
        return Ok(text);
    }
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("output serializes"));
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Annotate { formula } => {
            let f: Formula = formula.parse()?;
            if cli.json {
                let map: BTreeMap<String, String> = annotate(&f).into_iter().map(|(p, s)| (p.to_string(), s.to_string())).collect();
                print_json(&json!({ "formula": f, "annotation": map }));
            } else {
                print!("{}", render::annotation(&f));
            }
            Ok(Outcome::Positive)
        }
        Command::Prove { sequents, mode, method, proof } => {
            let mut rows = Vec::new();
            for text in sequents {
                let s: Sequent = text.parse()?;
                for m in mode.modes() {
                    rows.push(prove_row(&s, m, *method, cli.cap, *proof)?);
                }
            }
            if cli.json {
                if rows.len() == 1 {
                    print_json(&rows[0]);
                } else {
                    print_json(&rows);
                }
            } else {
                for row in &rows {
                    print!("{}", render::row(row));
                }
            }
            Ok(if rows.iter().all(|r| r.status == Status::Valid) { Outcome::Positive } else { Outcome::Negative })
        }
        Command::Substitute { formula, godel: use_godel, table, keying, at } => {
            let f: Formula = formula.parse()?;
            let x: LericoneSeq = at.parse()?;
            let out = if *use_godel {
                for p in f.atoms() {
                    godel(&x, &p)?;
                }
                apply_lericone(&GodelCoding, &x, &f)
            } else if let Some(path) = table {
                let sigma = substitution_from_json(&read_input(path)?, (*keying).into())?;
                sigma.apply(&x, &f)
            } else {
                return Err(Error::Input("give --godel or --table FILE".into()).into());
            };
            if cli.json {
                print_json(&json!({ "input": f, "at": x, "output": out }));
            } else {
                println!("{out}");
            }
            Ok(Outcome::Positive)
        }
        Command::Skeleton { sequent, mode, godel } => {
            let s: Sequent = sequent.parse()?;
            let numbering = if *godel { Numbering::Godel } else { Numbering::Compact };
            let (sk, table) = skeletonize(&s, mode.single()?, numbering)?;
            if cli.json {
                print_json(&json!({ "skeleton": sk.to_string(), "table": table.entries() }));
            } else {
                println!("{sk}");
                for e in table.entries() {
                    println!("  p{} <- (p{}, {:?})", e.fresh, e.atom, e.seq);
                }
            }
            Ok(Outcome::Positive)
        }
        Command::Share { implication, mode } => {
            let f: Formula = implication.parse()?;
            let m = mode.single()?;
            if let Some(w) = lericone_sharing(&f, m)? {
                if cli.json {
                    print_json(&json!({ "witness": w }));
                } else {
                    println!(
                        "shared: p{} at {:?} (antecedent {}, consequent {})",
                        w.atom, w.seq, w.antecedent_path, w.consequent_path
                    );
                }
                return Ok(Outcome::Positive);
            }
            let model = certify_irrelevance(&f, m)?.ok_or_else(|| Error::Internal("no witness and no certificate".into()))?;
            if cli.json {
                print_json(&json!({ "certificate": model }));
            } else {
                println!("no {} sharing; falsified by {model:?}", m.name());
            }
            Ok(Outcome::Negative)
        }
        Command::CheckProof { file } => {
            let pr = HilbertProof::from_json(&read_input(file)?)?;
            let verdict = check_proof(&pr);
            let conclusion = pr.conclusion().map(|f| f.to_string());
            match &verdict {
                Ok(()) if cli.json => print_json(&json!({ "ok": true, "logic": pr.logic, "conclusion": conclusion })),
                Ok(()) => println!("ok: {:?} proof of {} lines concluding {}", pr.logic, pr.lines.len(), conclusion.unwrap_or_default()),
                Err(e) if cli.json => print_json(&json!({ "ok": false, "error": e.to_string() })),
                Err(e) => println!("rejected: {e}"),
            }
            match verdict {
                Ok(()) => Ok(Outcome::Positive),
                Err(Error::Proof { .. }) => Ok(Outcome::Negative),
                Err(e) => Err(e.into()),
            }
        }
        Command::TransformProof { file, subst, keying } => {
            let pr = HilbertProof::from_json(&read_input(file)?)?;
            let sigma = substitution_from_json(&read_input(subst)?, (*keying).into())?;
            let out = transform_proof(&pr, &sigma)?;
            eprintln!(
                "{:?} proof of {} lines -> {} lines concluding {}",
                pr.logic,
                pr.lines.len(),
                out.lines.len(),
                out.conclusion().expect("non-empty")
            );
            println!("{}", out.to_json());
            Ok(Outcome::Positive)
        }
        Command::SelfTest { seed, count } => self_test(*seed, *count, cli.cap, cli.json),
    }
}

#[derive(Serialize)]
pub struct Row {
    sequent: String,
    mode: Mode,
    status: Status,
    methods: BTreeMap<&'static str, Status>,
    #[serde(skip_serializing_if = "Option::is_none")]
    countermodel: Option<Assignment>,
    /// Whether the countermodel was re-evaluated and falsifies the sequent.
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    proof: Option<TableauProof>,
}

fn prove_row(s: &Sequent, mode: Mode, method: MethodArg, cap: usize, want_proof: bool) -> Result<Row, Failure> {
    let mut methods = BTreeMap::new();
    let mut models: Vec<(&'static str, Assignment)> = Vec::new();
    let mut proof = None;
    if matches!(method, MethodArg::Tableau | MethodArg::All) {
        match prove(s, mode)? {
            TableauOutcome::Proved(p) => {
                methods.insert("tableau", Status::Valid);
                proof = want_proof.then_some(p);
            }
            TableauOutcome::Refuted { countermodel, .. } => {
                methods.insert("tableau", Status::Invalid);
                models.push(("tableau", countermodel));
            }
        }
    }
    if matches!(method, MethodArg::Brute | MethodArg::All) {
        let v = brute_consequence(s, mode, cap)?;
        methods.insert("brute", v.status);
        models.extend(v.countermodel.map(|m| ("brute", m)));
    }
    if matches!(method, MethodArg::Skeleton | MethodArg::All) {
        let v = decide(s, mode, cap)?;
        methods.insert("skeleton", v.status);
        models.extend(v.countermodel.map(|m| ("skeleton", m)));
    }
    let status = *methods.values().next().expect("at least one method ran");
    let bad_model = models.iter().find(|(_, m)| !m.falsifies(s));
    if methods.values().any(|&v| v != status) || bad_model.is_some() {
        return Err(Failure::Disagreement(Disagreement(json!({
            "sequent": s.to_string(),
            "mode": mode,
            "methods": methods,
            "countermodels": models.iter().map(|(name, m)| json!({ "method": name, "model": m, "falsifies": m.falsifies(s) })).collect::<Vec<_>>(),
        }))));
    }
    // prefer the brute-force model: it is the lexicographically first one
    let countermodel = models.iter().find(|(n, _)| *n == "brute").or(models.first()).map(|(_, m)| m.clone());
    let verified = countermodel.as_ref().map(|m| m.falsifies(s));
    Ok(Row { sequent: s.to_string(), mode, status, methods, countermodel, verified, proof })
}

fn self_test(seed: u64, count: usize, cap: usize, as_json: bool) -> Result<Outcome, Failure> {
    use lericone::random::{disjoint_pair, formula, proof, proof_hints, rng, substitution};
    use lericone::relevance::make_h;

    let mut r = rng(seed);
    let mut report = BTreeMap::new();

    let mut agreed = 0;
    for _ in 0..count {
        let s = Sequent::new(vec![formula(&mut r, 3, 3)], formula(&mut r, 3, 6));
        for mode in [Mode::Plain, Mode::Faithful] {
            prove_row(&s, mode, MethodArg::All, cap, false)?;
            agreed += 1;
        }
    }
    report.insert("method agreement", agreed);

    let mut transformed = 0;
    for (i, logic) in [Logic::BM, Logic::B].into_iter().cycle().take(count).enumerate() {
        let pr = proof(&mut r, logic, 8, 3, 8);
        let keying = if logic == Logic::B || i % 4 == 0 { Keying::Faithful } else { Keying::Exact };
        let sigma = substitution(&mut r, keying, 3, &proof_hints(&pr), 4, 1);
        let out = transform_proof(&pr, &sigma)?;
        let expected = sigma.apply(&LericoneSeq::empty(), pr.conclusion().expect("non-empty"));
        if out.conclusion() != Some(&expected) {
            return Err(Error::Internal(format!("transformed proof concludes {:?}, expected {expected}", out.conclusion())).into());
        }
        let mode = if logic == Logic::B { Mode::Faithful } else { Mode::Plain };
        if !decide(&Sequent::theorem(expected.clone()), mode, cap)?.is_valid() {
            return Err(Error::Internal(format!("transformed theorem {expected} is not {}-valid", mode.name())).into());
        }
        transformed += 1;
    }
    report.insert("proof transformation", transformed);

    let mut separated = 0;
    for i in 0..count {
        let (a, b) = disjoint_pair(&mut r, 3, 6);
        let mode = if i % 2 == 0 { Mode::Plain } else { Mode::Faithful };
        let h = make_h(&a, &b, mode)?;
        let c = LericoneSeq::c();
        if !h.eval(&c, &a) || h.eval(&c, &b) {
            return Err(Error::Internal(format!("h fails to separate {a} and {b}")).into());
        }
        separated += 1;
    }
    report.insert("h separation", separated);

    if as_json {
        print_json(&json!({ "seed": seed, "passed": report }));
    } else {
        for (name, n) in &report {
            println!("ok  {name:<22} {n} checks");
        }
    }
    Ok(Outcome::Positive)
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use koszul_core::localcoh::{self, verdict};
use koszul_core::tangent::scene_boundary;
use koszul_core::{
    build_koszul, classify_case, correct, parse_scene, pi, verify_milnor_cycle, Case, DeformationScene, Error,
    LocalCohClass, Route, SceneFile,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    /// The class π(Y′) at the generic point of Y.
    Pi,
    /// The Cousin boundary of π(Y′) at the point cut out by the extension.
    Boundary,
    /// Case 1 / Case 2 split of the perturbation denominator.
    Classify,
    /// Build the corrector Z′ and certify the boundary of the sum.
    Correct,
    /// Check that the scenes' classes sum to a Milnor cycle at the common point.
    Verify,
    /// Print the Koszul complex of the lifted sequence.
    Koszul,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Pi => "pi",
            Command::Boundary => "boundary",
            Command::Classify => "classify",
            Command::Correct => "correct",
            Command::Verify => "verify",
            Command::Koszul => "koszul",
        }
    }
}

/// First-order deformations of regular sequences: π, Cousin boundaries and correctors.
#[derive(Parser, Debug)]
#[command(name = "koszul", version)]
struct Cli {
    command: Command,
    /// Scene files (JSON). `verify` takes several.
    scenes: Vec<PathBuf>,
    /// Run every `*.json` scene in a directory, in parallel.
    #[arg(long, value_name = "DIR")]
    batch: Option<PathBuf>,
    /// Compute the fundamental class by matrix composition and cross-check the closed form.
    #[arg(long)]
    oracle: bool,
    /// Compact JSON output.
    #[arg(long)]
    json: bool,
    /// Indented JSON output.
    #[arg(long)]
    pretty: bool,
    /// Denominator exponent for vanishing tests.
    #[arg(long, default_value_t = 1, value_name = "K")]
    power: u32,
}

#[derive(Serialize, Debug, Default)]
struct ClassDoc {
    point: String,
    numerator: String,
    denominators: Vec<String>,
    rendered: String,
}

impl From<&LocalCohClass> for ClassDoc {
    fn from(c: &LocalCohClass) -> Self {
        ClassDoc {
            point: c.point.clone(),
            numerator: c.numerator.to_string(),
            denominators: c.denominators.iter().map(|f| f.to_string()).collect(),
            rendered: c.to_string(),
        }
    }
}

#[derive(Serialize, Debug)]
struct BoundaryDoc {
    case_tag: Option<String>,
    parts: Vec<ClassDoc>,
    total: ClassDoc,
    zero: bool,
    level: String,
    tested_points: Vec<String>,
    decomposition: Vec<String>,
}

#[derive(Serialize, Debug)]
struct CorrectorDoc {
    z_sequence: Vec<String>,
    zprime_perturbation: Vec<String>,
    rendered: String,
    scene: Value,
}

#[derive(Serialize, Debug)]
struct ErrorDoc {
    kind: &'static str,
    message: String,
    decomposition: Vec<String>,
}

#[derive(Serialize, Debug, Default)]
struct ResultDocument {
    command: String,
    scene: Value,
    class: Option<ClassDoc>,
    case: Option<String>,
    boundary: Option<BoundaryDoc>,
    corrector: Option<CorrectorDoc>,
    verdict: Option<String>,
    warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    koszul: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorDoc>,
}

fn scene_value(s: &DeformationScene) -> Value {
    serde_json::to_value(SceneFile::from_scene(s)).expect("scene files serialize")
}

fn load(path: &Path) -> Result<DeformationScene, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidScene { field: "file".into(), message: format!("{}: {e}", path.display()) })?;
    parse_scene(&text)
}

const EXT_CAVEAT: &str = "nonvanishing is decided at the Ext level; a class could still die deeper in the colimit";

fn boundary_doc(sum: &koszul_core::SumBoundary, power: u32, doc: &mut ResultDocument) -> Result<bool, Error> {
    let v = verdict(&sum.total, power)?;
    let tag = {
        let mut tags: Vec<String> = sum.parts.iter().map(|p| p.case_tag.to_string()).collect();
        tags.dedup();
        Some(tags.join(","))
    };
    if !v.zero {
        doc.warnings.push(EXT_CAVEAT.into());
    }
    doc.boundary = Some(BoundaryDoc {
        case_tag: tag,
        parts: sum.aligned.iter().map(ClassDoc::from).collect(),
        total: ClassDoc::from(&sum.total),
        zero: v.zero,
        level: v.to_string(),
        tested_points: vec![sum.total.point.clone()],
        decomposition: sum.parts.iter().flat_map(|p| p.decomposition.clone()).collect(),
    });
    Ok(v.zero)
}

fn run(cmd: Command, paths: &[PathBuf], route: Route, power: u32) -> Result<ResultDocument, Error> {
    let mut doc = ResultDocument { command: cmd.name().into(), ..Default::default() };
    let scenes = paths.iter().map(|p| load(p)).collect::<Result<Vec<_>, _>>()?;
    let Some(scene) = scenes.first() else {
        return Err(Error::InvalidScene { field: "scene".into(), message: "no scene file given".into() });
    };
    if cmd != Command::Verify && scenes.len() > 1 {
        return Err(Error::InvalidScene { field: "scene".into(), message: format!("{} takes one scene", cmd.name()) });
    }
    doc.warnings = scenes.iter().flat_map(|s| s.warnings.clone()).collect();
    doc.scene = if cmd == Command::Verify { Value::Array(scenes.iter().map(scene_value).collect()) } else { scene_value(scene) };
    let w = scene.labels.w.clone();
    match cmd {
        Command::Pi => {
            let c = pi(scene, route)?;
            let zero = localcoh::class_is_zero(&c)?;
            doc.verdict = Some(if zero { "zero class".into() } else { "nonzero class".into() });
            doc.class = Some(ClassDoc::from(&c));
        }
        Command::Boundary => {
            doc.class = Some(ClassDoc::from(&pi(scene, route)?));
            let sum = scene_boundary(scene, route)?;
            let zero = boundary_doc(&sum, power, &mut doc)?;
            doc.verdict = Some(if zero {
                format!("boundary vanishes at {w}")
            } else {
                format!("boundary nonzero at {w}")
            });
        }
        Command::Classify => {
            let cl = classify_case(scene)?;
            doc.class = Some(ClassDoc::from(&pi(scene, route)?));
            doc.case = Some(cl.case.to_string());
            doc.verdict = Some(match cl.case {
                Case::One => format!("case 1: denominator {} is a unit at {w}", cl.denominator),
                Case::Two => format!("case 2: denominator {} lies in the ideal of {w}", cl.denominator),
            });
            if !cl.decomposition.is_empty() {
                doc.warnings.extend(cl.decomposition.iter().map(|d| format!("decomposition: {d}")));
            }
        }
        Command::Correct => {
            let res = correct(scene, route)?;
            doc.class = Some(ClassDoc::from(&pi(scene, route)?));
            doc.case = Some(res.classification.case.to_string());
            boundary_doc(&res.certificate, power, &mut doc)?;
            if let Some(z) = &res.corrector {
                let seq: Vec<String> = z
                    .f
                    .iter()
                    .zip(&z.g)
                    .map(|(f, g)| if g.is_zero() { f.to_string() } else { format!("{f} + eps*({g})") })
                    .collect();
                doc.corrector = Some(CorrectorDoc {
                    z_sequence: z.f.iter().map(|f| f.to_string()).collect(),
                    zprime_perturbation: z.g.iter().map(|g| g.to_string()).collect(),
                    rendered: format!("({})", seq.join(", ")),
                    scene: scene_value(z),
                });
            }
            doc.verdict = Some(match (res.milnor_member, res.corrector.is_some()) {
                (true, true) => format!("sum boundary vanishes at {w}"),
                (true, false) => format!("no corrector needed: boundary vanishes at {w}"),
                (false, _) => format!("sum boundary does not vanish at {w}"),
            });
        }
        Command::Verify => {
            let (member, sum) = verify_milnor_cycle(&scenes, route)?;
            let zero = boundary_doc(&sum, power, &mut doc)? && member;
            doc.verdict = Some(if zero {
                format!("Milnor cycle at the tested point {w}")
            } else {
                format!("not a Milnor cycle: boundary nonzero at {w}")
            });
        }
        Command::Koszul => {
            let k = build_koszul(&scene.lifted())?;
            doc.koszul = Some(k.render().lines().map(str::to_string).collect());
            doc.verdict = Some(if k.is_complex() { "complex: A_i A_(i+1) = 0".into() } else { "not a complex".into() });
        }
    }
    Ok(doc)
}

fn error_doc(cmd: Command, e: &Error) -> ResultDocument {
    let decomposition = match e {
        Error::Unsupported { decomposition, .. } => decomposition.clone(),
        _ => Vec::new(),
    };
    let kind = match e {
        Error::Unsupported { .. } => "unsupported",
        Error::OracleMismatch(_) => "oracle_mismatch",
        Error::BasisLimit { .. } => "resource",
        _ => "input",
    };
    ResultDocument {
        command: cmd.name().into(),
        error: Some(ErrorDoc { kind, message: e.to_string(), decomposition }),
        ..Default::default()
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Unsupported { .. } => 2,
        _ => 1,
    }
}

fn human(doc: &ResultDocument) -> String {
    let mut out = String::new();
    if let Some(e) = &doc.error {
        out.push_str(&format!("{}: error: {}\n", doc.command, e.message));
        for d in &e.decomposition {
            out.push_str(&format!("  {d}\n"));
        }
        return out;
    }
    if let Some(c) = &doc.class {
        out.push_str(&format!("class: {}\n", c.rendered));
    }
    if let Some(case) = &doc.case {
        out.push_str(&format!("case: {case}\n"));
    }
    if let Some(k) = &doc.koszul {
        for line in k {
            out.push_str(line);
            out.push('\n');
        }
    }
    if let Some(b) = &doc.boundary {
        out.push_str(&format!("boundary ({}):\n", b.case_tag.as_deref().unwrap_or("-")));
        if b.parts.len() > 1 {
            for p in &b.parts {
                out.push_str(&format!("  part: {}\n", p.rendered));
            }
        }
        out.push_str(&format!("  total: {}\n  {}\n", b.total.rendered, b.level));
        for d in &b.decomposition {
            out.push_str(&format!("  {d}\n"));
        }
    }
    if let Some(c) = &doc.corrector {
        out.push_str(&format!("corrector: Z' = {}\n", c.rendered));
    }
    if let Some(v) = &doc.verdict {
        out.push_str(&format!("verdict: {v}\n"));
    }
    for w in &doc.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    out
}

fn emit(doc: &ResultDocument, cli: &Cli) -> String {
    if cli.pretty {
        serde_json::to_string_pretty(doc).expect("documents serialize") + "\n"
    } else if cli.json {
        serde_json::to_string(doc).expect("documents serialize") + "\n"
    } else {
        human(doc)
    }
}

fn batch_files(dir: &Path) -> Result<Vec<PathBuf>, Error> {
    let entries = fs::read_dir(dir)
        .map_err(|e| Error::InvalidScene { field: "batch".into(), message: format!("{}: {e}", dir.display()) })?;
    let mut files: Vec<PathBuf> =
        entries.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "json")).collect();
    files.sort();
    Ok(files)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let route = if cli.oracle { Route::Checked } else { Route::ClosedForm };
    let jobs: Vec<Vec<PathBuf>> = match &cli.batch {
        Some(dir) => match batch_files(dir) {
            Ok(files) => files.into_iter().map(|f| vec![f]).collect(),
            Err(e) => {
                eprint!("{}", human(&error_doc(cli.command, &e)));
                return ExitCode::from(1);
            }
        },
        None => vec![cli.scenes.clone()],
    };
    let results: Vec<(String, u8)> = jobs
        .par_iter()
        .map(|paths| match run(cli.command, paths, route, cli.power) {
            Ok(doc) => (emit(&doc, &cli), 0),
            Err(e) => {
                let mut doc = error_doc(cli.command, &e);
                if cli.batch.is_some() {
                    doc.scene = Value::String(paths[0].display().to_string());
                }
                (emit(&doc, &cli), exit_code(&e))
            }
        })
        .collect();
    let mut code = 0;
    for (text, c) in results {
        if c == 0 || cli.json || cli.pretty {
            print!("{text}");
        } else {
            eprint!("{text}");
        }
        code = code.max(c);
    }
    ExitCode::from(code)
}

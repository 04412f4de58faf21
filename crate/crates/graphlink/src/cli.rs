//! The `graphlink` command line: a thin adapter over the library. Exit code
//! 0 on success, 1 on a domain error (printed with the library's error
//! name), 2 on usage or parse errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::Value;

use graphlink_core::{
    is_fibered, linking, normalize, novikov_homology, reduce, splice, split, sweep, LinkEnd,
    MultiplicityAssignment, SpliceDiagram, SweepOptions,
};

use crate::dsl::{self, DiagramDocument};
use crate::json;

#[derive(Parser)]
#[command(name = "graphlink", version, about = "Splice-diagram calculus for graph multilinks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Diagram file (`-` for stdin)
    input: String,
    /// Multiplicity overrides, e.g. `-m a1=1,a2=-1` (file values otherwise)
    #[arg(short = 'm', value_name = "ARROW=INT[,...]")]
    multiplicities: Vec<String>,
    /// Emit JSON
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Report structural violations (empty output means valid)
    Validate {
        #[command(flatten)]
        common: Common,
        /// Also require pairwise coprime weights at each vertex
        #[arg(long)]
        strict: bool,
    },
    /// Re-emit the diagram in canonical form
    Render {
        #[command(flatten)]
        common: Common,
    },
    /// Linking number of two endpoints (vertex or arrow ids)
    Lk {
        #[command(flatten)]
        common: Common,
        a: String,
        b: String,
    },
    /// Splice the input with a second diagram along two arrows
    Splice {
        #[command(flatten)]
        common: Common,
        /// Second diagram file
        input2: String,
        /// Arrow of the first diagram
        arrow1: String,
        /// Arrow of the second diagram
        arrow2: String,
    },
    /// Cut an internal edge into two pieces with induced multiplicities
    Split {
        #[command(flatten)]
        common: Common,
        edge: String,
    },
    /// Apply the reduction moves until the diagram is minimal
    Reduce {
        #[command(flatten)]
        common: Common,
    },
    /// Delete zero pieces (module-preserving simplification)
    Normalize {
        #[command(flatten)]
        common: Common,
    },
    /// Is the multilink fibered?
    Fibered {
        #[command(flatten)]
        common: Common,
    },
    /// Novikov homology of the multilink
    Novikov {
        #[command(flatten)]
        common: Common,
    },
    /// The linear forms stratifying multiplicity space
    Strata {
        #[command(flatten)]
        common: Common,
    },
    /// Exhaustive box sweep: census of strata, modules, and the count bound
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Half-width B of the box [-B, B]^n
        #[arg(long = "box", default_value_t = 3)]
        box_radius: u64,
        /// Maximum number of box points
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// Random samples per discovered stratum (0 = none)
        #[arg(long, default_value_t = 0)]
        samples: u32,
        /// Half-width of the sampling box
        #[arg(long = "sample-box", default_value_t = 50)]
        sample_box: u64,
        /// Seed for the sampler
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Anything that should stop the run, with its exit code.
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<graphlink_core::Error> for Failure {
    fn from(e: graphlink_core::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type RunResult = Result<String, Failure>;

pub fn run<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap reports help/version on stdout with success, usage
            // errors on stderr with code 2
            let code = if e.exit_code() == 0 { 0 } else { 2 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match dispatch(cli.command) {
        Ok(output) => {
            if !output.is_empty() {
                println!("{output}");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read `{path}`: {e}")))
    }
}

fn parse_overrides(specs: &[String]) -> Result<BTreeMap<String, BigInt>, Failure> {
    let mut out = BTreeMap::new();
    for spec in specs {
        for pair in spec.split(',') {
            let pair = pair.trim();
            if pair.is_empty() {
                continue;
            }
            let Some((arrow, value)) = pair.split_once('=') else {
                return Err(Failure::Usage(format!(
                    "multiplicity override `{pair}` is not of the form arrow=int"
                )));
            };
            let value: BigInt = value
                .parse()
                .map_err(|_| Failure::Usage(format!("`{value}` is not an integer")))?;
            out.insert(arrow.to_string(), value);
        }
    }
    Ok(out)
}

fn load(common: &Common) -> Result<DiagramDocument, Failure> {
    let text = read_input(&common.input)?;
    let doc = dsl::parse(&text).map_err(|e| Failure::Usage(e.to_string()))?;
    apply_overrides(doc, &parse_overrides(&common.multiplicities)?)
}

fn apply_overrides(
    doc: DiagramDocument,
    overrides: &BTreeMap<String, BigInt>,
) -> Result<DiagramDocument, Failure> {
    if overrides.is_empty() {
        return Ok(doc);
    }
    let mut m = MultiplicityAssignment::of(&doc.diagram);
    for (arrow, value) in overrides {
        if !m.values.contains_key(arrow) {
            return Err(Failure::Usage(format!(
                "multiplicity override names undeclared arrow `{arrow}`"
            )));
        }
        m.values.insert(arrow.clone(), value.clone());
    }
    let diagram = doc.diagram.with_multiplicities(&m)?;
    Ok(DiagramDocument { diagram, source_positions: doc.source_positions })
}

fn render_output(diagram: &SpliceDiagram, as_json: bool) -> String {
    if as_json {
        json::to_json(&json::diagram_value(diagram))
    } else {
        // canonical DSL ends with a newline; trim so println adds one
        dsl::render(diagram).trim_end().to_string()
    }
}

fn resolve_link_end(diagram: &SpliceDiagram, id: &str) -> Result<LinkEnd, Failure> {
    if diagram.has_vertex(id) {
        Ok(LinkEnd::Vertex(id.to_string()))
    } else if diagram.arrow(id).is_some() {
        Ok(LinkEnd::Arrow(id.to_string()))
    } else if diagram.stub(id).is_some() {
        Err(Failure::Domain(format!(
            "SelfLinkingOfArrow: linking endpoints must be vertices or arrows, `{id}` is a stub"
        )))
    } else {
        Err(Failure::Domain(graphlink_core::Error::UnknownId { id: id.to_string() }.to_string()))
    }
}

fn dispatch(command: Command) -> RunResult {
    match command {
        Command::Validate { common, strict } => {
            let text = read_input(&common.input)?;
            let doc = dsl::parse_raw(&text).map_err(|e| Failure::Usage(e.to_string()))?;
            let violations = doc.diagram.validate(strict);
            if common.json {
                Ok(json::to_json(&json::violations_value(&violations)))
            } else {
                Ok(violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n"))
            }
        }
        Command::Render { common } => {
            let doc = load(&common)?;
            Ok(render_output(&doc.diagram, common.json))
        }
        Command::Lk { common, a, b } => {
            let doc = load(&common)?;
            let ea = resolve_link_end(&doc.diagram, &a)?;
            let eb = resolve_link_end(&doc.diagram, &b)?;
            let value = linking(&doc.diagram, &ea, &eb)?;
            if common.json {
                Ok(json::to_json(&Value::Object(
                    [("linking".to_string(), json::int(&value))].into_iter().collect(),
                )))
            } else {
                Ok(value.to_string())
            }
        }
        Command::Splice { common, input2, arrow1, arrow2 } => {
            let overrides = parse_overrides(&common.multiplicities)?;
            let text1 = read_input(&common.input)?;
            let doc1 = dsl::parse(&text1).map_err(|e| Failure::Usage(e.to_string()))?;
            let text2 = read_input(&input2)?;
            let doc2 = dsl::parse(&text2).map_err(|e| Failure::Usage(e.to_string()))?;
            // overrides may address arrows of either diagram
            let split_overrides = |doc: &DiagramDocument| {
                overrides
                    .iter()
                    .filter(|(k, _)| doc.diagram.arrow(k).is_some())
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect::<BTreeMap<_, _>>()
            };
            for arrow in overrides.keys() {
                if doc1.diagram.arrow(arrow).is_none() && doc2.diagram.arrow(arrow).is_none() {
                    return Err(Failure::Usage(format!(
                        "multiplicity override names undeclared arrow `{arrow}`"
                    )));
                }
            }
            let overrides1 = split_overrides(&doc1);
            let overrides2 = split_overrides(&doc2);
            let doc1 = apply_overrides(doc1, &overrides1)?;
            let doc2 = apply_overrides(doc2, &overrides2)?;
            let joined = splice(&doc1.diagram, &arrow1, &doc2.diagram, &arrow2)?;
            Ok(render_output(&joined, common.json))
        }
        Command::Split { common, edge } => {
            let doc = load(&common)?;
            let result = split(&doc.diagram, &edge)?;
            if common.json {
                let value = Value::Object(
                    [
                        ("induced".to_string(), Value::Array(vec![
                            json::int(&result.induced.0),
                            json::int(&result.induced.1),
                        ])),
                        ("new_arrows".to_string(), Value::Array(vec![
                            Value::String(result.new_arrow_a.clone()),
                            Value::String(result.new_arrow_b.clone()),
                        ])),
                        ("piece_a".to_string(), json::diagram_value(&result.piece_a)),
                        ("piece_b".to_string(), json::diagram_value(&result.piece_b)),
                    ]
                    .into_iter()
                    .collect(),
                );
                Ok(json::to_json(&value))
            } else {
                Ok(format!(
                    "{}---\n{}",
                    dsl::render(&result.piece_a),
                    dsl::render(&result.piece_b).trim_end()
                ))
            }
        }
        Command::Reduce { common } => {
            let doc = load(&common)?;
            Ok(render_output(&reduce(&doc.diagram), common.json))
        }
        Command::Normalize { common } => {
            let doc = load(&common)?;
            Ok(render_output(&normalize(&doc.diagram), common.json))
        }
        Command::Fibered { common } => {
            let doc = load(&common)?;
            let fibered = is_fibered(&doc.diagram)?;
            if common.json {
                Ok(json::to_json(&Value::Object(
                    [("fibered".to_string(), Value::Bool(fibered))].into_iter().collect(),
                )))
            } else {
                Ok(fibered.to_string())
            }
        }
        Command::Novikov { common } => {
            let doc = load(&common)?;
            let module = novikov_homology(&doc.diagram)?;
            let mut value = json::module_value(&module);
            if doc.diagram.multiplicities_all_zero() {
                value.as_object_mut().unwrap().insert(
                    "note".to_string(),
                    Value::String("outside theorem hypotheses: m = 0".into()),
                );
            }
            Ok(json::to_json(&value))
        }
        Command::Strata { common } => {
            let doc = load(&common)?;
            let forms = graphlink_core::hyperplane_forms(&reduce(&doc.diagram))?;
            let value = Value::Object(
                [(
                    "forms".to_string(),
                    Value::Array(forms.iter().map(json::form_value).collect()),
                )]
                .into_iter()
                .collect(),
            );
            Ok(json::to_json(&value))
        }
        Command::Sweep { common, box_radius, budget, samples, sample_box, seed } => {
            let doc = load(&common)?;
            let opts = SweepOptions {
                box_radius,
                budget,
                seed,
                samples_per_stratum: samples,
                sample_box,
                ..SweepOptions::default()
            };
            let report = sweep(&doc.diagram, &opts)?;
            Ok(json::to_json(&json::sweep_value(&report)))
        }
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use linkforge::collision::{assign_layers, default_ordering, detect_collisions, search_ordering};
use linkforge::factor::{drawing_motion, factor_motion_polynomial};
use linkforge::io::svg::view_box;
use linkforge::io::text::parse_kelement;
use linkforge::io::{
    render_frame, render_trace, CollisionReport, CurveSpec, FactorizationDocument, LinkageDocument, RenderOptions,
};
use linkforge::linkage::{
    construct_strong, construct_strong_from_factors, construct_weak, construct_weak_from_factors,
};
use linkforge::{Backend, Error, MotionPolynomial, Param, Scalar, Q};

#[derive(Parser)]
#[command(name = "linkforge", version, about = "Synthesize planar linkages that draw rational curves")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct InputArgs {
    /// File with a motion polynomial or curve (text or JSON), or the text itself
    input: String,
    /// Multiply by the drawing multiplier first (only the pen's path matters)
    #[arg(long)]
    drawing: bool,
    /// Floating-point backend instead of exact rationals
    #[arg(long)]
    approx: bool,
    /// Write to a file instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Factor a bounded motion polynomial into linear factors
    Factor(InputArgs),
    /// Build a linkage document
    Synthesize {
        #[command(flatten)]
        io: InputArgs,
        /// Open chain (weak realization)
        #[arg(long, conflicts_with = "strong", required_unless_present = "strong")]
        weak: bool,
        /// Ladder of flip four-bars (strong realization)
        #[arg(long)]
        strong: bool,
        /// First rung of the ladder, e.g. "-9/5i-(18/35)i e"
        #[arg(long, allow_hyphen_values = true)]
        l: Option<String>,
        /// Use this factorization instead of computing one, `;`-separated
        #[arg(long, allow_hyphen_values = true)]
        factors: Option<String>,
    },
    /// Collision report for a stacking order of the links
    Collide {
        doc: PathBuf,
        /// Links bottom to top, comma-separated (default 1,2,…,n)
        #[arg(long, conflicts_with = "search")]
        ordering: Option<String>,
        /// Search for an ordering with few collisions
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// SVG frames of poses and of the traced curve
    Render {
        doc: PathBuf,
        /// Parameter values, comma-separated (`inf` allowed)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        t: Vec<String>,
        /// Also draw the pen's curve; alone, writes trace.svg
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 720)]
        samples: usize,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::NotBounded(_) | Error::RealRoot => 3,
        Error::BackendMismatch { .. } | Error::NotExactlySplit | Error::NonConvergence => 4,
        Error::IfmViolation(_) | Error::DegenerateFlip => 5,
        _ => 1,
    }
}

fn read_input(s: &str) -> Result<String, Error> {
    let p = Path::new(s);
    if p.is_file() {
        fs::read_to_string(p).map_err(|e| Error::Parse(format!("{s}: {e}")))
    } else {
        Ok(s.to_owned())
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| Error::Invalid(format!("{}: {e}", p.display()))),
        None => {
            say(text);
            Ok(())
        }
    }
}

/// A line on stdout; a closed pipe (`| head`) is not an error.
fn say(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("documents serialize")
}

fn load_motion<S: Scalar>(io: &InputArgs) -> Result<MotionPolynomial<S>, Error> {
    let p = CurveSpec::<S>::parse(&read_input(&io.input)?)?.motion()?;
    if io.drawing {
        drawing_motion(&p)
    } else {
        Ok(p)
    }
}

fn factor<S: Scalar>(io: &InputArgs) -> Result<(), Error> {
    let p = load_motion::<S>(io)?;
    let f = factor_motion_polynomial(&p)?;
    emit(&io.output, &json(&FactorizationDocument::new(&p, &f)))
}

fn synthesize<S: Scalar>(
    io: &InputArgs,
    strong: bool,
    l: &Option<String>,
    factors: &Option<String>,
) -> Result<(), Error> {
    let p = load_motion::<S>(io)?;
    let ks = factors
        .as_deref()
        .map(|s| s.split(';').map(|k| parse_kelement::<S>(k)).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    let l = l.as_deref().map(parse_kelement::<S>).transpose()?;
    let syn = match (strong, ks) {
        (false, None) => construct_weak(&p)?,
        (false, Some(ks)) => construct_weak_from_factors(&p, ks)?,
        (true, None) => construct_strong(&p, l.as_ref())?,
        (true, Some(ks)) => construct_strong_from_factors(&p, ks, l.as_ref())?,
    };
    let mut doc = LinkageDocument::new(&syn.linkage, Some(&syn.motion));
    doc.layers = assign_layers(&syn.linkage).ok();
    emit(&io.output, &doc.to_json())
}

fn parse_ordering(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad ordering entry `{x}`"))))
        .collect()
}

fn collide<S: Scalar>(
    doc: &LinkageDocument,
    ordering: &Option<String>,
    search: Option<(usize, u64)>,
) -> Result<CollisionReport, Error> {
    let l = doc.linkage::<S>()?;
    let ord = match (ordering, search) {
        (_, Some((budget, seed))) => {
            let found = search_ordering(&l, budget, seed)?;
            eprintln!(
                "searched {} orderings: {} finite, {} at infinity",
                found.evaluations, found.finite, found.infinite
            );
            found.ordering
        }
        (Some(s), None) => parse_ordering(s)?,
        (None, None) => default_ordering(&l),
    };
    let events = detect_collisions(&l, &ord).map_err(|e| match e {
        Error::Invalid(m) => Error::Parse(m),
        e => e,
    })?;
    Ok(CollisionReport::new(&ord, &events))
}

fn render<S: Scalar>(
    doc: &LinkageDocument,
    ts: &[String],
    trace: bool,
    out_dir: &Path,
    samples: usize,
) -> Result<(), Error> {
    let l = doc.linkage::<S>()?;
    let params = ts
        .iter()
        .map(|s| match s.trim() {
            "inf" | "∞" => Ok(Param::Infinity),
            v => S::parse_lit(v).map(Param::Finite).ok_or_else(|| Error::Parse(format!("bad t value `{v}`"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    fs::create_dir_all(out_dir).map_err(|e| Error::Invalid(format!("{}: {e}", out_dir.display())))?;
    let opts = RenderOptions { trace, samples, layers: doc.layers.clone() };
    let vb = view_box(&l)?;
    let write = |name: String, svg: String| {
        let path = out_dir.join(name);
        fs::write(&path, svg).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        say(&path.display().to_string());
        Ok::<_, Error>(())
    };
    for (i, t) in params.iter().enumerate() {
        write(format!("frame_{i:03}.svg"), render_frame(&l, t, &opts, &vb)?)?;
    }
    if params.is_empty() || trace {
        write("trace.svg".into(), render_trace(&l, &opts, &vb)?)?;
    }
    Ok(())
}

fn load_doc(path: &Path) -> Result<LinkageDocument, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    LinkageDocument::from_json(&text)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::Factor(io) => {
            if io.approx {
                factor::<f64>(&io)
            } else {
                factor::<Q>(&io)
            }
        }
        Cmd::Synthesize { io, strong, l, factors, .. } => {
            if io.approx {
                synthesize::<f64>(&io, strong, &l, &factors)
            } else {
                synthesize::<Q>(&io, strong, &l, &factors)
            }
        }
        Cmd::Collide { doc, ordering, search, budget, seed, output } => {
            let doc = load_doc(&doc)?;
            let search = search.then_some((budget, seed));
            let report = match doc.backend {
                Backend::Exact => collide::<Q>(&doc, &ordering, search)?,
                Backend::Approx => collide::<f64>(&doc, &ordering, search)?,
            };
            emit(&output, &json(&report))
        }
        Cmd::Render { doc, t, trace, out_dir, samples } => {
            let doc = load_doc(&doc)?;
            match doc.backend {
                Backend::Exact => render::<Q>(&doc, &t, trace, &out_dir, samples),
                Backend::Approx => render::<f64>(&doc, &t, trace, &out_dir, samples),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

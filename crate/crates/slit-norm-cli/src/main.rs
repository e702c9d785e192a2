//! `slitnorm`: stable norms of flat slit tori from the command line.
//!
//! Every run is deterministic: floats print with 12 significant digits,
//! enumerations sort by (denominator, slope), and worker count never
//! affects output bytes. Exit codes: 0 success, 2 validation error,
//! 3 oracle cross-check beyond tolerance.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use slit_norm::ball::{boundary_polyline, deviation_profile, enumerate_vertices};
use slit_norm::counting::{
    asymptotic_coefficient, fit_coefficient, two_sided_coefficient, CountTable,
};
use slit_norm::farey::{cutting_word, parse_exact, Rational};
use slit_norm::general::{norm_sheared, BuiltTorus, TorusSpec};
use slit_norm::glued::{flat_face_check, glued_norm, glued_vertices, GluedClass, GluedSurface};
use slit_norm::oracle::CoverScene;
use slit_norm::torus::{CertificateKind, HClass, NormCertificate, VerticalSlitTorus};

/// Relative tolerance for `--oracle` cross-checks (exit 3 beyond it).
const ORACLE_CHECK_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "slitnorm", version, about = "Stable norms of flat slit tori")]
struct Cli {
    /// Number of worker threads for batch work (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output file; stdout when omitted. Relative paths are joined to
    /// $SLITNORM_OUT_DIR when that variable is set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct TorusArgs {
    /// Vertical slit length as an exact rational ("2/5" or "0.4").
    #[arg(long, conflicts_with_all = ["slit", "torus_json"])]
    rho: Option<String>,

    /// Row-major unimodular matrix "a,b,c,d" shearing the vertical torus
    /// (requires --rho).
    #[arg(long, requires = "rho", allow_hyphen_values = true)]
    matrix: Option<String>,

    /// General slit vector "beta,alpha"; exact when both parse as
    /// rationals or finite decimals, double-precision otherwise.
    #[arg(long, conflicts_with = "torus_json", allow_hyphen_values = true)]
    slit: Option<String>,

    /// Full torus specification as JSON:
    /// {"kind": "vertical", "rho": "2/5"} |
    /// {"kind": "sheared", "matrix": [..4], "rho": ".."} |
    /// {"kind": "general_slit", "slit_vector": [..2]}.
    #[arg(long)]
    torus_json: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Stable norm of one class, with its certificate.
    Norm {
        #[command(flatten)]
        torus: TorusArgs,
        /// Homology class "m,n".
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        /// Cross-check against the shortest-path oracle; exit 3 when the
        /// relative gap exceeds 1e-6.
        #[arg(long)]
        oracle: bool,
    },
    /// Vertex-or-flat classification of a primitive class.
    Classify {
        #[command(flatten)]
        torus: TorusArgs,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// First-quadrant vertex directions up to a norm bound.
    Vertices {
        /// Vertical slit length.
        #[arg(long)]
        rho: String,
        #[arg(long, default_value_t = 10.0)]
        max_norm: f64,
        /// json or csv.
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Deviation-from-circle profile over the first octant (CSV).
    Profile {
        #[arg(long)]
        rho: String,
        /// Number of uniform angular samples merged with the Farey grid.
        #[arg(long, default_value_t = 96)]
        samples: usize,
    },
    /// Boundary polyline of the unit ball over the first quadrant (CSV).
    Ball {
        #[arg(long)]
        rho: String,
        #[arg(long, default_value_t = 6)]
        max_denominator: i64,
    },
    /// Cutting word of a class.
    Word {
        /// Class "m,n" with m, n >= 1 coprime (or the bases "1,0", "0,1").
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Norms and vertices of a glued half-translation surface.
    Glue {
        /// Slit length of each component (repeat for distinct components).
        #[arg(long, required = true)]
        rho: Vec<String>,
        /// Repeat the single --rho this many times.
        #[arg(long)]
        copies: Option<usize>,
        /// Cylinder width; must exceed every slit length.
        #[arg(long)]
        width: f64,
        /// Glued class "m1,n1;m2,n2;..." for a norm query.
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
        /// Enumerate glued vertex directions up to this norm bound.
        #[arg(long)]
        max_norm: Option<f64>,
        /// Check a flat face: "v1;v2;w1;w2" with weights --lambda.
        #[arg(long, allow_hyphen_values = true)]
        face: Option<String>,
        /// Face weights "l1,l2,l3,l4" (nonnegative, summing to 1).
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Count simple homology classes and fit the x ln x coefficient (CSV).
    Count {
        #[arg(long)]
        rho: String,
        #[arg(long)]
        xmax: f64,
        #[arg(long)]
        step: f64,
        /// Glued-surface factor: number of glued copies.
        #[arg(long, default_value_t = 1)]
        copies: u32,
    },
    /// Raw shortest path in the abelian cover.
    Oracle {
        /// Vertical slit length.
        #[arg(long, conflicts_with = "slit")]
        rho: Option<String>,
        /// General slit vector "beta,alpha".
        #[arg(long, allow_hyphen_values = true)]
        slit: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        /// Window padding in lattice cells.
        #[arg(long, default_value_t = 1)]
        window: i64,
        /// Emit the visibility graph as a CSV edge list instead of a path.
        #[arg(long)]
        dump_graph: bool,
    },
}

enum CliError {
    Validation(String),
    OracleMismatch(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn invalid<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Validation(e.to_string())
}

fn exit_code_of(err: &CliError) -> u8 {
    match err {
        CliError::Validation(_) => 2,
        CliError::OracleMismatch(_) => 3,
        CliError::Io(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(&cli) {
        Ok(output) => {
            if let Err(e) = write_output(cli.out.as_deref(), &output) {
                eprintln!("slitnorm: {e}");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            let msg = match &err {
                CliError::Validation(m) => m.clone(),
                CliError::OracleMismatch(m) => format!("oracle cross-check failed: {m}"),
                CliError::Io(e) => e.to_string(),
            };
            eprintln!("slitnorm: {msg}");
            ExitCode::from(exit_code_of(&err))
        }
    }
}

fn write_output(out: Option<&std::path::Path>, content: &str) -> std::io::Result<()> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let path = match std::env::var_os("SLITNORM_OUT_DIR") {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.to_path_buf(),
            };
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(path, content)
        }
    }
}

/// Rounds to 12 significant digits so output bytes are reproducible.
fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn jnum(x: f64) -> Value {
    serde_json::Number::from_f64(sig12(x)).map(Value::Number).unwrap_or(Value::Null)
}

fn fmt12(x: f64) -> String {
    let r = sig12(x);
    let mut s = format!("{r}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

fn parse_rho(s: &str) -> Result<Rational, CliError> {
    let rho = parse_exact(s).map_err(invalid)?;
    if rho <= Rational::zero() || rho >= Rational::one() {
        return Err(CliError::Validation(format!("rho must be in (0, 1), got {rho}")));
    }
    Ok(rho)
}

fn parse_class(s: &str) -> Result<HClass, CliError> {
    s.parse().map_err(invalid)
}

fn parse_pair(s: &str, what: &str) -> Result<(String, String), CliError> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| CliError::Validation(format!("{what} must be two comma-separated values")))?;
    Ok((a.trim().to_string(), b.trim().to_string()))
}

impl TorusArgs {
    fn build(&self) -> Result<BuiltTorus, CliError> {
        if let Some(json) = &self.torus_json {
            let spec: TorusSpec = serde_json::from_str(json).map_err(invalid)?;
            return spec.build().map_err(invalid);
        }
        if let Some(slit) = &self.slit {
            let (b, a) = parse_pair(slit, "--slit")?;
            return TorusSpec::GeneralSlit { slit_vector: [b, a] }.build().map_err(invalid);
        }
        let rho = self
            .rho
            .as_deref()
            .ok_or_else(|| CliError::Validation("one of --rho, --slit, --torus-json is required".into()))?;
        parse_rho(rho)?;
        match &self.matrix {
            Some(m) => {
                let parts: Vec<String> = m.split(',').map(|p| p.trim().to_string()).collect();
                if parts.len() != 4 {
                    return Err(CliError::Validation("--matrix needs 4 entries a,b,c,d".into()));
                }
                TorusSpec::Sheared {
                    matrix: [parts[0].clone(), parts[1].clone(), parts[2].clone(), parts[3].clone()],
                    rho: rho.to_string(),
                }
                .build()
                .map_err(invalid)
            }
            None => TorusSpec::Vertical { rho: rho.to_string() }.build().map_err(invalid),
        }
    }
}

fn certificate_json(cert: &NormCertificate<f64>) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("class".into(), Value::String(cert.class.to_string()));
    obj.insert("value".into(), jnum(cert.value));
    match &cert.kind {
        CertificateKind::VisibleSegment => {
            obj.insert("kind".into(), Value::String("visible_segment".into()));
        }
        CertificateKind::TwoSegmentSimple { bend } => {
            obj.insert("kind".into(), Value::String("two_segment_simple".into()));
            obj.insert("bend".into(), Value::Array(vec![jnum(bend[0]), jnum(bend[1])]));
        }
        CertificateKind::FlatSplit { children } => {
            obj.insert("kind".into(), Value::String("flat_split".into()));
            obj.insert(
                "children".into(),
                Value::Array(children.iter().map(certificate_json).collect()),
            );
        }
    }
    Value::Object(obj)
}

/// The oracle scene matching a built torus.
fn scene_of(torus: &BuiltTorus) -> Result<CoverScene, CliError> {
    match torus {
        BuiltTorus::Vertical(t) => CoverScene::vertical(t.rho().clone()).map_err(invalid),
        BuiltTorus::Sheared { map, rho } => CoverScene::vertical(rho.clone())
            .map_err(invalid)?
            .with_lattice(map.columns())
            .map_err(invalid),
        BuiltTorus::General(g) => Ok(g.oracle_scene()),
    }
}

fn norm_of(torus: &BuiltTorus, class: HClass) -> Result<NormCertificate<f64>, CliError> {
    match torus {
        BuiltTorus::Vertical(t) => t.stable_norm(class).map_err(invalid),
        BuiltTorus::Sheared { map, rho } => norm_sheared(map, rho, class).map_err(invalid),
        BuiltTorus::General(g) => g.norm(class).map_err(invalid),
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Norm { torus, class, oracle } => {
            let built = torus.build()?;
            let class = parse_class(class)?;
            let cert = norm_of(&built, class)?;
            let mut doc = certificate_json(&cert);
            if *oracle {
                let scene = scene_of(&built)?;
                let observed = scene.oracle_norm::<f64>(class).map_err(invalid)?;
                let delta = (observed - cert.value).abs();
                doc.as_object_mut().expect("object").insert(
                    "oracle".into(),
                    json!({ "value": jnum(observed), "delta": jnum(delta) }),
                );
                if delta > ORACLE_CHECK_TOL * cert.value.abs() {
                    return Err(CliError::OracleMismatch(format!(
                        "class {class}: formula {} oracle {observed}",
                        cert.value
                    )));
                }
            }
            Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable")))
        }

        Command::Classify { torus, class } => {
            let built = torus.build()?;
            let class = parse_class(class)?;
            let doc = match &built {
                BuiltTorus::Vertical(t) => {
                    json!({
                        "class": class.to_string(),
                        "visible": t.is_visible(class).map_err(invalid)?,
                        "classification": t.classify(class).map_err(invalid)?.to_string(),
                    })
                }
                BuiltTorus::Sheared { rho, .. } => {
                    let t = VerticalSlitTorus::new(rho.clone()).map_err(invalid)?;
                    json!({
                        "class": class.to_string(),
                        "visible": t.is_visible(class).map_err(invalid)?,
                        "classification": t.classify(class).map_err(invalid)?.to_string(),
                    })
                }
                BuiltTorus::General(g) => {
                    let cert = g.norm::<f64>(class).map_err(invalid)?;
                    let classification = match cert.kind {
                        CertificateKind::FlatSplit { .. } => "flat",
                        _ => "vertex",
                    };
                    json!({
                        "class": class.to_string(),
                        "visible": matches!(
                            g.visibility(class).map_err(invalid)?,
                            slit_norm::general::Visibility::Visible
                        ),
                        "classification": classification,
                    })
                }
            };
            Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable")))
        }

        Command::Vertices { rho, max_norm, format } => {
            if *max_norm < 1.0 {
                return Err(CliError::Validation("--max-norm must be at least 1".into()));
            }
            let t = VerticalSlitTorus::new(parse_rho(rho)?).map_err(invalid)?;
            let mut entries = enumerate_vertices::<f64>(&t, *max_norm).entries;
            // (denominator, slope) order; within one denominator the slope
            // order is the n order.
            entries.sort_by_key(|e| (e.class.m, e.class.n));
            match format.as_str() {
                "json" => {
                    let items: Vec<Value> = entries
                        .iter()
                        .map(|e| {
                            json!({
                                "m": e.class.m,
                                "n": e.class.n,
                                "norm": jnum(e.norm),
                                "kind": e.kind.to_string(),
                            })
                        })
                        .collect();
                    Ok(format!(
                        "{}\n",
                        serde_json::to_string_pretty(&Value::Array(items)).expect("serializable")
                    ))
                }
                "csv" => {
                    let mut out = String::from("m,n,norm,kind\n");
                    for e in &entries {
                        out.push_str(&format!(
                            "{},{},{},{}\n",
                            e.class.m,
                            e.class.n,
                            fmt12(e.norm),
                            e.kind
                        ));
                    }
                    Ok(out)
                }
                other => Err(CliError::Validation(format!("unknown format {other:?}"))),
            }
        }

        Command::Profile { rho, samples } => {
            if *samples < 2 {
                return Err(CliError::Validation("--samples must be at least 2".into()));
            }
            let t = VerticalSlitTorus::new(parse_rho(rho)?).map_err(invalid)?;
            let mut out = String::from("flattened_coord,gap,m,n,kind\n");
            for s in deviation_profile::<f64>(&t, *samples) {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt12(s.coord),
                    fmt12(s.gap),
                    s.class.m,
                    s.class.n,
                    s.kind
                ));
            }
            Ok(out)
        }

        Command::Ball { rho, max_denominator } => {
            if *max_denominator < 1 {
                return Err(CliError::Validation("--max-denominator must be at least 1".into()));
            }
            let t = VerticalSlitTorus::new(parse_rho(rho)?).map_err(invalid)?;
            let mut out = String::from("x,y\n");
            for p in boundary_polyline::<f64>(&t, *max_denominator) {
                out.push_str(&format!("{},{}\n", fmt12(p[0]), fmt12(p[1])));
            }
            Ok(out)
        }

        Command::Word { class } => {
            let class = parse_class(class)?;
            let word = cutting_word(class.m, class.n).map_err(invalid)?;
            Ok(format!("{word}\n"))
        }

        Command::Glue { rho, copies, width, class, max_norm, face, lambda } => {
            let mut components = Vec::new();
            for r in rho {
                components.push(VerticalSlitTorus::new(parse_rho(r)?).map_err(invalid)?);
            }
            if let Some(k) = copies {
                if components.len() != 1 {
                    return Err(CliError::Validation(
                        "--copies applies to a single --rho".into(),
                    ));
                }
                components = vec![components[0].clone(); *k];
            }
            let surface = GluedSurface::new(components, *width).map_err(invalid)?;

            if let Some(face) = face {
                let lambda = lambda.as_deref().ok_or_else(|| {
                    CliError::Validation("--face requires --lambda l1,l2,l3,l4".into())
                })?;
                let weights: Vec<f64> = lambda
                    .split(',')
                    .map(|p| p.trim().parse::<f64>().map_err(invalid))
                    .collect::<Result<_, _>>()?;
                if weights.len() != 4 {
                    return Err(CliError::Validation("--lambda needs 4 entries".into()));
                }
                let parts: Vec<HClass> = face
                    .split(';')
                    .map(|p| p.trim().parse().map_err(invalid))
                    .collect::<Result<_, _>>()?;
                if parts.len() != 4 {
                    return Err(CliError::Validation("--face needs 4 classes v1;v2;w1;w2".into()));
                }
                let bound = max_norm.unwrap_or(10.0);
                let ok = flat_face_check::<f64>(
                    &surface,
                    bound,
                    parts[0],
                    parts[1],
                    parts[2],
                    parts[3],
                    [weights[0], weights[1], weights[2], weights[3]],
                )
                .map_err(invalid)?;
                let doc = json!({
                    "face": face,
                    "lambda": weights.iter().map(|w| jnum(*w)).collect::<Vec<_>>(),
                    "max_norm": jnum(bound),
                    "is_face": ok,
                });
                return Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable")));
            }

            if let Some(class) = class {
                let class: GluedClass = class.parse().map_err(invalid)?;
                let norm = glued_norm::<f64>(&surface, &class).map_err(invalid)?;
                let blocks: Vec<Value> = norm
                    .blocks
                    .iter()
                    .map(|b| match b {
                        None => Value::Null,
                        Some(cert) => certificate_json(cert),
                    })
                    .collect();
                let doc = json!({
                    "class": class.to_string(),
                    "value": jnum(norm.value),
                    "blocks": blocks,
                });
                return Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable")));
            }

            let bound = max_norm.unwrap_or(10.0);
            if bound < 1.0 {
                return Err(CliError::Validation("--max-norm must be at least 1".into()));
            }
            let items: Vec<Value> = glued_vertices::<f64>(&surface, bound)
                .iter()
                .map(|v| {
                    json!({
                        "component": v.component,
                        "class": v.class.to_string(),
                        "norm": jnum(v.norm),
                    })
                })
                .collect();
            Ok(format!(
                "{}\n",
                serde_json::to_string_pretty(&Value::Array(items)).expect("serializable")
            ))
        }

        Command::Count { rho, xmax, step, copies } => {
            if *step <= 0.0 || *xmax < *step {
                return Err(CliError::Validation("need 0 < step <= xmax".into()));
            }
            if *copies < 1 {
                return Err(CliError::Validation("--copies must be at least 1".into()));
            }
            let rho = parse_rho(rho)?;
            let t = VerticalSlitTorus::new(rho.clone()).map_err(invalid)?;
            let mut xs = Vec::new();
            let mut x = *step;
            while x <= *xmax + 1e-12 {
                xs.push(x);
                x += *step;
            }
            let table = CountTable::build(&t, &xs, *copies);
            let mut out = String::from("x,p,estimate,ratio\n");
            for r in &table.rows {
                let ratio = if r.ratio.is_finite() { fmt12(r.ratio) } else { String::new() };
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt12(r.x),
                    r.count,
                    fmt12(r.estimate),
                    ratio
                ));
            }
            match fit_coefficient::<f64>(&table.rows) {
                Ok(fit) => {
                    out.push_str(&format!(
                        "# fit A={} B={} residual={}\n",
                        fmt12(fit.a),
                        fmt12(fit.b),
                        fmt12(fit.residual)
                    ));
                    out.push_str(&format!(
                        "# one_sided_coefficient={} two_sided_coefficient={}\n",
                        fmt12(asymptotic_coefficient(&rho, *copies).to_f64()),
                        fmt12(two_sided_coefficient(&rho, *copies).to_f64())
                    ));
                }
                Err(e) => out.push_str(&format!("# fit unavailable: {e}\n")),
            }
            Ok(out)
        }

        Command::Oracle { rho, slit, class, window, dump_graph } => {
            let scene = match (rho, slit) {
                (Some(r), None) => CoverScene::vertical(parse_rho(r)?).map_err(invalid)?,
                (None, Some(s)) => {
                    let (b, a) = parse_pair(s, "--slit")?;
                    slit_norm::oracle::SceneSpec { slit_vector: [b, a], window: *window }
                        .build()
                        .map_err(invalid)?
                }
                _ => return Err(CliError::Validation("exactly one of --rho, --slit".into())),
            }
            .with_padding(*window);
            let class = parse_class(class)?;
            if *dump_graph {
                let dump = scene.dump_graph(class).map_err(invalid)?;
                let mut out = String::from("from_x,from_y,to_x,to_y,weight\n");
                for (u, v, w) in &dump.edges {
                    let (a, b) = (dump.nodes[*u], dump.nodes[*v]);
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        fmt12(a[0]),
                        fmt12(a[1]),
                        fmt12(b[0]),
                        fmt12(b[1]),
                        fmt12(*w)
                    ));
                }
                return Ok(out);
            }
            let path = scene.shortest_path::<f64>(class).map_err(invalid)?;
            let doc = json!({
                "class": class.to_string(),
                "length": jnum(path.length),
                "polyline": path
                    .polyline
                    .iter()
                    .map(|p| Value::Array(vec![jnum(p[0]), jnum(p[1])]))
                    .collect::<Vec<_>>(),
                "nodes_expanded": path.nodes_expanded,
            });
            Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable")))
        }
    }
}

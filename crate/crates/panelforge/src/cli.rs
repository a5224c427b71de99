//! The `panelforge` command line.

use std::io::{Read, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use panelforge_core::svg::to_svg;

use crate::assets::{audit, load_manifest, AuditOutcome, Library, ASSETS_ENV};
use crate::config::{FileConfig, CONFIG_FILE, DEFAULT_HOST, DEFAULT_PORT};
use crate::error::{parse_json, Error, Result};
use crate::lexicon::default_lexicon;
use crate::pipeline::{png_of, Engine};
use crate::service::{router, serve, AppState};
use crate::spec::{PageSpecJson, PanelSpec};
use crate::store::{default_data_dir, Store, DATA_ENV};

#[derive(Debug, Parser)]
#[command(name = "panelforge", version, about = "Compose cartoon panels and pages from a character library")]
pub struct Cli {
    /// Asset library directory (holds library.json).
    #[arg(long, global = true, env = ASSETS_ENV)]
    pub assets: Option<PathBuf>,
    /// Config file; defaults to ./panelforge.toml when present.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Report results and errors as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render one panel spec to SVG or PNG.
    Compose(ComposeArgs),
    /// Pack panels onto a page and render it.
    Page(PageArgs),
    /// Render a panel at evenly spaced view parameters.
    Sweep(SweepArgs),
    /// Score text and pick an expression.
    Suggest { text: String },
    /// Asset library maintenance.
    #[command(subcommand)]
    Assets(AssetsCommand),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct RasterArgs {
    /// Write PNG instead of SVG (also implied by a .png output name).
    #[arg(long)]
    pub png: bool,
    /// Pixels per document unit for PNG output.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    /// Panel spec JSON, or `-` for stdin.
    #[arg(long)]
    pub spec: PathBuf,
    /// Output file, or `-` for stdout.
    #[arg(short, long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub raster: RasterArgs,
}

#[derive(Debug, Args)]
pub struct PageArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Directory holding `{panel_id}.json` files (stored objects or bare specs).
    #[arg(long)]
    pub panels: Option<PathBuf>,
    #[arg(short, long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub raster: RasterArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Output directory; files are named sweep_000.svg, sweep_001.svg, ...
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 9)]
    pub steps: usize,
    #[command(flatten)]
    pub raster: RasterArgs,
}

#[derive(Debug, Subcommand)]
pub enum AssetsCommand {
    /// Check every expression image for a tight alpha crop.
    Validate {
        /// Crop loose images in place.
        #[arg(long)]
        fix_trim: bool,
    },
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub host: Option<String>,
    #[arg(long)]
    pub port: Option<u16>,
    /// Directory for saved panels and pages.
    #[arg(long, env = DATA_ENV)]
    pub data: Option<PathBuf>,
}

/// Parses the process arguments, runs, and returns the exit status.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            report_error(&e, json);
            e.exit_code()
        }
    }
}

fn report_error(e: &Error, json: bool) {
    let mut err = std::io::stderr().lock();
    if json {
        let _ = writeln!(err, "{}", e.to_json());
    } else {
        let _ = writeln!(err, "error: {e}");
    }
}

fn config(cli: &Cli) -> Result<FileConfig> {
    match &cli.config {
        Some(p) if !p.exists() => Err(Error::io(p, std::io::ErrorKind::NotFound.into())),
        Some(p) => FileConfig::load(p),
        None => FileConfig::load(Path::new(CONFIG_FILE)),
    }
}

fn library(cli: &Cli, cfg: &FileConfig) -> Result<Library> {
    let root = cli.assets.clone().or_else(|| cfg.assets.clone()).unwrap_or_else(crate::assets::default_root);
    load_manifest(&root).map_err(|e| Error::Library(e.to_string()))
}

fn engine(cli: &Cli, cfg: &FileConfig) -> Result<Engine> {
    Ok(Engine::new(Arc::new(library(cli, cfg)?), Arc::new(default_lexicon())))
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map_err(|e| Error::io("<stdin>", e))?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(|e| Error::io(path, e))
    }
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<()> {
    if path == Path::new("-") {
        std::io::stdout().write_all(bytes).map_err(|e| Error::io("<stdout>", e))
    } else {
        std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
    }
}

fn wants_png(raster: &RasterArgs, output: &Path) -> bool {
    raster.png || output.extension().is_some_and(|e| e.eq_ignore_ascii_case("png"))
}

fn render_bytes(doc: &panelforge_core::document::PanelDocument, png: bool, scale: f64) -> Result<Vec<u8>> {
    if png {
        png_of(doc, scale)
    } else {
        Ok(to_svg(doc).into_bytes())
    }
}

/// Loads `{dir}/{id}.json`, accepting a stored object or a bare panel spec.
pub fn load_panel_file(dir: &Path, id: &str) -> Result<PanelSpec> {
    let not_found = || Error::NotFound { kind: "panel", id: id.to_string() };
    if id.is_empty() || id.starts_with('.') || id.contains(['/', '\\']) {
        return Err(not_found());
    }
    let path = dir.join(format!("{id}.json"));
    let bytes = match std::fs::read(&path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(not_found()),
        Err(e) => return Err(Error::io(&path, e)),
    };
    let value: serde_json::Value = parse_json(&bytes)?;
    let spec = match value.get("spec") {
        Some(inner) if value.get("kind").is_some() => inner.clone(),
        _ => value,
    };
    parse_json(spec.to_string().as_bytes())
}

fn run(cli: Cli) -> Result<()> {
    let cfg = config(&cli)?;
    match &cli.command {
        Command::Compose(args) => {
            let engine = engine(&cli, &cfg)?;
            let spec = PanelSpec::parse(&read_input(&args.spec)?)?;
            let doc = engine.render_panel(&spec)?;
            write_output(&args.output, &render_bytes(&doc, wants_png(&args.raster, &args.output), args.raster.scale)?)
        }
        Command::Page(args) => {
            let engine = engine(&cli, &cfg)?;
            let page = PageSpecJson::parse(&read_input(&args.spec)?)?;
            let dir = args.panels.clone().unwrap_or_else(|| {
                cfg.data.clone().unwrap_or_else(default_data_dir).join("panels")
            });
            let doc = engine.render_page(&page, |id| load_panel_file(&dir, id))?;
            write_output(&args.output, &render_bytes(&doc, wants_png(&args.raster, &args.output), args.raster.scale)?)
        }
        Command::Sweep(args) => {
            let engine = engine(&cli, &cfg)?;
            let spec = PanelSpec::parse(&read_input(&args.spec)?)?;
            let docs = engine.sweep(&spec, args.steps)?;
            std::fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
            let ext = if args.raster.png { "png" } else { "svg" };
            let mut written = Vec::with_capacity(docs.len());
            for (k, (u, doc)) in docs.iter().enumerate() {
                let path = args.out.join(format!("sweep_{k:03}.{ext}"));
                write_output(&path, &render_bytes(doc, args.raster.png, args.raster.scale)?)?;
                written.push(serde_json::json!({ "u": u, "file": path.display().to_string() }));
            }
            if cli.json {
                println!("{}", serde_json::Value::Array(written));
            }
            Ok(())
        }
        Command::Suggest { text } => {
            let s = crate::pipeline::suggest(&default_lexicon(), text);
            if cli.json {
                println!("{}", serde_json::to_string(&s).map_err(|e| Error::Internal(e.to_string()))?);
            } else {
                println!("{} {}", s.tag, s.valence);
            }
            Ok(())
        }
        Command::Assets(AssetsCommand::Validate { fix_trim }) => {
            let root = cli.assets.clone().or_else(|| cfg.assets.clone()).unwrap_or_else(crate::assets::default_root);
            let entries = audit(&root, *fix_trim).map_err(|e| Error::Library(e.to_string()))?;
            let failures = entries.iter().filter(|e| !e.ok()).count();
            if cli.json {
                let rows: Vec<_> = entries
                    .iter()
                    .map(|e| {
                        serde_json::json!({
                            "id": e.id, "tag": e.tag, "path": e.path,
                            "ok": e.ok(), "detail": outcome_text(&e.outcome),
                        })
                    })
                    .collect();
                println!("{}", serde_json::Value::Array(rows));
            } else {
                for e in &entries {
                    println!("{:<6} {}/{} {} {}", if e.ok() { "ok" } else { "FAIL" }, e.id, e.tag, e.path, outcome_text(&e.outcome));
                }
                println!("{} images, {} failing", entries.len(), failures);
            }
            if failures > 0 {
                Err(Error::Library(format!("{failures} image(s) failed validation")))
            } else {
                Ok(())
            }
        }
        Command::Serve(args) => {
            let engine = engine(&cli, &cfg)?;
            let data = args.data.clone().or_else(|| cfg.data.clone()).unwrap_or_else(default_data_dir);
            let host = args.host.clone().or_else(|| cfg.host.clone()).unwrap_or_else(|| DEFAULT_HOST.into());
            let port = args.port.or(cfg.port).unwrap_or(DEFAULT_PORT);
            let addr: SocketAddr = format!("{host}:{port}")
                .parse()
                .map_err(|_| Error::invalid("host", format!("cannot listen on {host}:{port}")))?;
            let state = Arc::new(AppState { engine, store: Store::new(data) });
            let app = router(state, cfg.cors_origin.as_deref())?;
            let rt = tokio::runtime::Runtime::new().map_err(|e| Error::Internal(e.to_string()))?;
            eprintln!("listening on http://{addr}");
            rt.block_on(serve(addr, app)).map_err(|e| Error::io(addr.to_string(), e))
        }
    }
}

fn outcome_text(o: &AuditOutcome) -> String {
    match o {
        AuditOutcome::Passed(_) => String::new(),
        AuditOutcome::Failed(report) => format!("loose edges: {}", edge_list(report)),
        AuditOutcome::Trimmed { before, width, height } => {
            format!("trimmed loose edges ({}) to {width}x{height}", edge_list(before))
        }
        AuditOutcome::Unreadable(msg) => format!("unreadable: {msg}"),
    }
}

fn edge_list(report: &panelforge_core::raster::ValidationReport) -> String {
    report.failed_edges().iter().map(|e| e.name()).collect::<Vec<_>>().join(", ")
}

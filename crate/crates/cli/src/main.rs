mod error;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gammaflip_core::braid::{map_f, BraidWord};
use gammaflip_core::example::rotating_pair_scene;
use gammaflip_core::gamma::abelianize;
use gammaflip_core::kinetic::{
    delaunay_at, flip_word, frames, Frame, ScanSettings, Scene, Tolerances,
};
use gammaflip_core::recoupling::{
    braid_operator, count_colourings, eigen_multiplicity, Level, MatrixRecord,
};
use gammaflip_core::report::{consistency_report, sig12};
use gammaflip_core::spine::{
    bubble_move, stable_class_signature, verify_mp_move, verify_second_mp_move, Spine,
};
use num_complex::Complex64;
use serde::Serialize;

use error::CliError;

#[derive(Parser)]
#[command(
    name = "gammaflip",
    version,
    about = "Flip words, recoupling invariants and spine algebras"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Relative tolerance for numerical kernel dimensions.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Determinant tolerance for geometric predicates.
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps_det: f64,
    /// Time resolution for flip events.
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps_time: f64,
    /// Seed for randomized checks. Every current subcommand is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Track the Delaunay triangulation of a scene and report its flips.
    Simulate {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        emit_word: bool,
        #[arg(long)]
        emit_events: bool,
        /// Number of evenly spaced snapshots to dump as JSON.
        #[arg(long)]
        frames: Option<usize>,
        /// Destination for the frames JSON; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    #[command(subcommand)]
    Gamma(GammaCommand),
    #[command(subcommand)]
    Recoupling(RecouplingCommand),
    #[command(subcommand)]
    Colourings(ColouringsCommand),
    #[command(subcommand)]
    Spine(SpineCommand),
    /// The rotating-pair example end to end.
    PaperExample {
        #[arg(long, default_value_t = 4)]
        r: u32,
    },
}

#[derive(Subcommand)]
enum GammaCommand {
    /// Image of a pure braid word and its abelianization.
    MapBraid {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        word: String,
    },
    /// Relator images and the rotating-pair comparison.
    Report,
}

#[derive(Subcommand)]
enum RecouplingCommand {
    /// Operator of a closed flip loop.
    Invariant {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        r: u32,
        /// Eigenvalue whose multiplicity to report, as `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        eigen: Option<String>,
        /// Destination for the matrix JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A single 6j symbol `{a b i; c d j}`.
    Sixj {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        labels: String,
    },
}

#[derive(Subcommand)]
enum ColouringsCommand {
    /// Admissible colourings of the Delaunay triangulation at time `t`.
    Count {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long)]
        r: u32,
    },
}

#[derive(Subcommand)]
enum SpineCommand {
    /// Check the local identities behind both Matveev–Piergallini moves.
    VerifyMp,
    /// Greedy elimination summary of a spine's Ptolemy ideal.
    Signature {
        #[arg(long)]
        spine: PathBuf,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
    },
    /// Apply a bubble move.
    Bubble {
        #[arg(long)]
        spine: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_scene(path: &Path) -> Result<Scene, CliError> {
    let scene: Scene =
        serde_json::from_str(&read(path)?).map_err(|e| CliError::parse("kinetic", e))?;
    scene.validate()?;
    Ok(scene)
}

fn load_spine(path: &Path) -> Result<Spine, CliError> {
    let spine: Spine =
        serde_json::from_str(&read(path)?).map_err(|e| CliError::parse("spine", e))?;
    spine.validate()?;
    Ok(spine)
}

/// `x` rounded to 12 significant digits, so JSON output is as stable as text.
fn round12(x: f64) -> f64 {
    sig12(x).parse().expect("sig12 output parses")
}

fn complex_text(z: Complex64) -> String {
    if z.im == 0.0 {
        sig12(z.re)
    } else {
        format!("{} {}", sig12(z.re), sig12(z.im))
    }
}

fn parse_labels(text: &str) -> Result<[u32; 6], CliError> {
    let labels: Vec<u32> = text
        .split(',')
        .map(|s| s.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::parse("recoupling", format!("labels {text:?}: {e}")))?;
    labels.try_into().map_err(|v: Vec<u32>| {
        CliError::parse("recoupling", format!("expected 6 labels, got {}", v.len()))
    })
}

fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let bad = |e| CliError::parse("recoupling", format!("eigenvalue {text:?}: {e}"));
    match text.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(
            re.trim().parse().map_err(bad)?,
            im.trim().parse().map_err(bad)?,
        )),
        None => Ok(Complex64::new(text.trim().parse().map_err(bad)?, 0.0)),
    }
}

#[derive(Serialize)]
struct FrameRecord {
    t: f64,
    positions: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
}

impl From<Frame> for FrameRecord {
    fn from(f: Frame) -> FrameRecord {
        FrameRecord {
            t: round12(f.t),
            positions: f.positions.iter().map(|p| p.map(round12)).collect(),
            triangles: f.triangles,
        }
    }
}

fn settings(global: &Global) -> Result<ScanSettings, CliError> {
    if !(global.tol > 0.0 && global.eps_det > 0.0 && global.eps_time > 0.0) {
        return Err(CliError::precondition("cli", "tolerances must be positive"));
    }
    Ok(ScanSettings {
        tol: Tolerances {
            det: global.eps_det,
            time: global.eps_time,
        },
        ..ScanSettings::default()
    })
}

fn run(cli: Cli) -> Result<String, CliError> {
    let settings = settings(&cli.global)?;
    let mut out = String::new();
    let mut line = |s: String| writeln!(out, "{s}").expect("string write");
    match cli.command {
        Command::Simulate {
            scene,
            emit_word,
            emit_events,
            frames: count,
            out: dest,
        } => {
            let scene = load_scene(&scene)?;
            let run = flip_word(&scene, &settings)?;
            line(format!(
                "events={} triangulations={} closed_loop={}",
                run.events.len(),
                run.distinct_triangulations(),
                run.is_closed_loop()
            ));
            if emit_word {
                line(format!("word={}", run.word.to_text()));
            }
            if emit_events {
                for e in &run.events {
                    let [a, b, c, d] = e.quad;
                    line(format!(
                        "event t={} quad=({a},{b},{c},{d}) old={} new={}",
                        sig12(e.time),
                        e.old_diagonal,
                        e.new_diagonal
                    ));
                }
            }
            if let Some(k) = count {
                let records: Vec<FrameRecord> = frames(&scene, &run, k)
                    .into_iter()
                    .map(FrameRecord::from)
                    .collect();
                let json = serde_json::to_string_pretty(&records).expect("frames serialize");
                match dest {
                    Some(path) => write(&path, &json)?,
                    None => line(json),
                }
            }
        }
        Command::Gamma(GammaCommand::MapBraid { n, word }) => {
            let braid = BraidWord::parse(n, &word)?;
            let image = map_f(&braid)?;
            line(format!("image={}", image.to_text()));
            line(format!("length={}", image.len()));
            line(abelianize(&image).to_text());
        }
        Command::Gamma(GammaCommand::Report) => out.push_str(&consistency_report()?),
        Command::Recoupling(RecouplingCommand::Invariant {
            scene,
            r,
            eigen,
            out: dest,
        }) => {
            let scene = load_scene(&scene)?;
            let level = Level::new(r)?;
            let (op, run) = braid_operator(&scene, &level, &settings)?;
            line(format!(
                "dim={} triangulations={} identity_deviation={}",
                op.matrix.nrows(),
                run.distinct_triangulations(),
                sig12(op.identity_deviation())
            ));
            if let Some(text) = eigen {
                let lambda = parse_complex(&text)?;
                let m = eigen_multiplicity(&op.matrix, lambda, cli.global.tol);
                line(format!("mult({})={m}", complex_text(lambda)));
            }
            if let Some(path) = dest {
                let mut record: MatrixRecord = op.to_json();
                for z in &mut record.data {
                    *z = z.map(round12);
                }
                write(
                    &path,
                    &serde_json::to_string(&record).expect("matrix serializes"),
                )?;
            }
        }
        Command::Recoupling(RecouplingCommand::Sixj { r, labels }) => {
            let level = Level::new(r)?;
            let [a, b, i, c, d, j] = parse_labels(&labels)?;
            line(complex_text(level.six_j(a, b, i, c, d, j)));
        }
        Command::Colourings(ColouringsCommand::Count { scene, t, r }) => {
            let scene = load_scene(&scene)?;
            let level = Level::new(r)?;
            let tri = delaunay_at(&scene, t, &settings.tol)?;
            line(count_colourings(&tri, &level).to_string());
        }
        Command::Spine(SpineCommand::VerifyMp) => {
            let first = verify_mp_move()?;
            let second = verify_second_mp_move()?;
            line(format!("mp={}", first.holds()));
            line(format!("x={}", first.x_before));
            line(format!("y={}", first.y_before));
            line(format!("z={}", first.z_after));
            line(format!("second_mp={}", second.holds()));
            line(format!("second_mp_z={}", second.z));
            if !(first.holds() && second.holds()) {
                return Err(CliError::precondition("spine", "a move identity failed"));
            }
        }
        Command::Spine(SpineCommand::Signature { spine, max_steps }) => {
            let spine = load_spine(&spine)?;
            let sig = stable_class_signature(&spine, max_steps);
            line(format!(
                "free_variables={} eliminated={} residual_generators={}",
                sig.free_variables,
                sig.eliminated,
                sig.residual.generators.len()
            ));
            for s in &sig.record {
                line(format!("{} = {}", s.cell, s.value));
            }
            for g in &sig.residual.generators {
                line(format!("residual {g}"));
            }
        }
        Command::Spine(SpineCommand::Bubble { spine, out: dest }) => {
            let bubbled = bubble_move(&load_spine(&spine)?);
            write(&dest, &bubbled.to_json())?;
            line(format!(
                "cells={} vertices={}",
                bubbled.cells.len(),
                bubbled.vertices.len()
            ));
        }
        Command::PaperExample { r } => {
            let level = Level::new(r)?;
            let (op, run) = braid_operator(&rotating_pair_scene(1.0), &level, &settings)?;
            let basis = count_colourings(run.initial(), &level);
            let m = eigen_multiplicity(&op.matrix, Complex64::new(-1.0, 0.0), cli.global.tol);
            line(format!(
                "triangulations={} basis={basis} dim={} mult(-1)={m}",
                run.distinct_triangulations(),
                op.matrix.nrows()
            ));
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::parse("cli", e.to_string().trim_end());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code());
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code())
        }
    }
}

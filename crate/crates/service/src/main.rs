use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand};
use sonic_anchor::render::{render_timeline, write_wav, Renderer, Timeline};
use sonic_anchor::scene::{load_scene_file, SceneDescriptor, SceneError, Scheme};
use sonic_anchor::session::{replay_log_text, scene_hash, AudioMode};
use sonic_anchor_service::{serve, AppState, ServiceConfig};

#[derive(Parser)]
#[command(name = "sonic-anchor", version, about = "Sound sculpture installation engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Host live sessions over WebSocket.
    Serve {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "0.0.0.0")]
        host: String,
        #[arg(long, default_value = "pcm")]
        audio_mode: AudioMode,
        /// Directory of client assets served at `/`.
        #[arg(long)]
        static_dir: Option<PathBuf>,
        #[arg(long, env = "SONIC_ANCHOR_LOG_DIR", default_value = "session-logs")]
        log_dir: PathBuf,
        #[arg(long, default_value_t = 256)]
        audio_queue: usize,
    },
    /// Render a control timeline to a stereo WAV file.
    Render {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        timeline: PathBuf,
        #[arg(long, default_value = "A")]
        scheme: Scheme,
        #[arg(long)]
        out: PathBuf,
        /// Length in seconds; defaults to the timeline's `end` record or
        /// its last event.
        #[arg(long)]
        duration: Option<f64>,
    },
    /// Check a scene document; exits nonzero when it is invalid.
    Validate {
        #[arg(long)]
        scene: PathBuf,
    },
    /// Replay a session log and print the final session state.
    Replay {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        log: PathBuf,
    },
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .with_writer(std::io::stderr)
        .init();

    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { scene } => return validate(&scene),
        Command::Serve {
            scene,
            port,
            host,
            audio_mode,
            static_dir,
            log_dir,
            audio_queue,
        } => {
            let config = ServiceConfig {
                audio_mode,
                log_dir: Some(log_dir),
                static_dir,
                audio_queue,
                ..ServiceConfig::default()
            };
            run_server(&scene, &host, port, config)
        }
        Command::Render {
            scene,
            timeline,
            scheme,
            out,
            duration,
        } => render(&scene, &timeline, scheme, &out, duration),
        Command::Replay { scene, log } => replay(&scene, &log),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn load_renderer(path: &Path) -> anyhow::Result<Arc<Renderer>> {
    let scene = load_scene_file(path).with_context(|| format!("loading {}", path.display()))?;
    let renderer = Renderer::load(Arc::new(scene)).context("loading layer audio")?;
    Ok(Arc::new(renderer))
}

fn validate(path: &Path) -> ExitCode {
    match load_scene_file(path) {
        Ok(scene) => {
            println!("{}: ok ({})", path.display(), summary(&scene));
            ExitCode::SUCCESS
        }
        Err(SceneError::Invalid(violations)) => {
            for v in &violations {
                eprintln!("{}: {v}", path.display());
            }
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            ExitCode::FAILURE
        }
    }
}

fn summary(scene: &SceneDescriptor) -> String {
    format!(
        "{} triangles, hash {}",
        scene.hologram.mesh.len(),
        &scene_hash(scene)[..12],
    )
}

fn run_server(scene: &Path, host: &str, port: u16, config: ServiceConfig) -> anyhow::Result<()> {
    let renderer = load_renderer(scene)?;
    let state = Arc::new(AppState::new(renderer, config)?);
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind((host, port))
            .await
            .with_context(|| format!("binding {host}:{port}"))?;
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        serve(listener, state, shutdown).await
    })
}

fn render(scene: &Path, timeline: &Path, scheme: Scheme, out: &Path, duration: Option<f64>) -> anyhow::Result<()> {
    let renderer = load_renderer(scene)?;
    let text = std::fs::read_to_string(timeline).with_context(|| format!("reading {}", timeline.display()))?;
    let timeline = Timeline::parse_jsonl(&text, duration).with_context(|| format!("parsing {}", timeline.display()))?;
    let audio = render_timeline(&renderer, &timeline, scheme);
    write_wav(out, &audio, renderer.sample_rate())?;
    eprintln!(
        "wrote {} ({} frames, {} events)",
        out.display(),
        audio.frames(),
        timeline.events().len()
    );
    Ok(())
}

fn replay(scene: &Path, log: &Path) -> anyhow::Result<()> {
    let renderer = load_renderer(scene)?;
    let text = std::fs::read_to_string(log).with_context(|| format!("reading {}", log.display()))?;
    let state = replay_log_text(&renderer, &text)?;
    println!("{}", serde_json::to_string_pretty(&state)?);
    Ok(())
}

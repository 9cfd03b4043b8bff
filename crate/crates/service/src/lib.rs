//! Installation service: hosts one session per WebSocket connection,
//! serves the scene summary, layer audio and static client assets over
//! HTTP, and persists each session's log as JSON lines.

mod connection;
mod logs;
mod outbound;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::Context;
use axum::extract::ws::WebSocketUpgrade;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use parking_lot::Mutex;
use sonic_anchor::render::{mono_wav_bytes, Renderer};
use sonic_anchor::scene::LayerId;
use sonic_anchor::session::{scene_hash, AudioMode, SceneSummary, Session};
use tokio::net::TcpListener;
use tower_http::services::ServeDir;

pub use logs::LogSink;

/// Detached sessions older than this are forgotten.
const RESUME_TTL: Duration = Duration::from_secs(300);

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub audio_mode: AudioMode,
    /// Where session logs are written; `None` keeps them in memory only.
    pub log_dir: Option<PathBuf>,
    pub static_dir: Option<PathBuf>,
    /// Audio chunks buffered per connection before the oldest is dropped.
    pub audio_queue: usize,
    /// Heartbeat period.
    pub tick: Duration,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            audio_mode: AudioMode::Pcm,
            log_dir: None,
            static_dir: None,
            audio_queue: 256,
            tick: Duration::from_millis(100),
        }
    }
}

/// A session whose connection went away without `bye`.
struct Detached {
    session: Session,
    started: Instant,
    log: LogSink,
    since: Instant,
}

pub struct AppState {
    renderer: Arc<Renderer>,
    config: ServiceConfig,
    summary: SceneSummary,
    layer_wavs: [Vec<u8>; 3],
    detached: Mutex<HashMap<String, Detached>>,
}

impl AppState {
    pub fn new(renderer: Arc<Renderer>, config: ServiceConfig) -> anyhow::Result<Self> {
        let scene = renderer.scene();
        let summary = SceneSummary::new(scene, scene_hash(scene));
        let rate = renderer.sample_rate();
        let wav = |id: LayerId| mono_wav_bytes(renderer.tracks().get(id).samples(), rate);
        let layer_wavs = [wav(LayerId::Natural)?, wav(LayerId::Human)?, wav(LayerId::Radio)?];
        if let Some(dir) = &config.log_dir {
            std::fs::create_dir_all(dir).with_context(|| format!("creating log directory {}", dir.display()))?;
        }
        Ok(Self {
            renderer,
            config,
            summary,
            layer_wavs,
            detached: Mutex::new(HashMap::new()),
        })
    }

    fn park(&self, d: Detached) {
        let mut map = self.detached.lock();
        map.retain(|_, v| v.since.elapsed() < RESUME_TTL);
        map.insert(d.session.id().to_string(), d);
    }

    fn unpark(&self, id: &str) -> Option<Detached> {
        let mut map = self.detached.lock();
        map.remove(id).filter(|d| d.since.elapsed() < RESUME_TTL)
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    let static_dir = state.config.static_dir.clone();
    let app = Router::new()
        .route("/ws", get(ws_handler))
        .route("/scene", get(scene_handler))
        .route("/layers/{file}", get(layer_handler))
        .with_state(state);
    match static_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app,
    }
}

/// Serves until `shutdown` resolves.
pub async fn serve(
    listener: TcpListener,
    state: Arc<AppState>,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> anyhow::Result<()> {
    let addr: SocketAddr = listener.local_addr()?;
    tracing::info!(%addr, mode = ?state.config.audio_mode, "listening");
    axum::serve(listener, router(state))
        .with_graceful_shutdown(shutdown)
        .await?;
    Ok(())
}

async fn ws_handler(ws: WebSocketUpgrade, State(state): State<Arc<AppState>>) -> Response {
    ws.on_upgrade(move |socket| connection::run(socket, state))
}

async fn scene_handler(State(state): State<Arc<AppState>>) -> Json<SceneSummary> {
    Json(state.summary.clone())
}

async fn layer_handler(Path(file): Path<String>, State(state): State<Arc<AppState>>) -> Response {
    let layer = file
        .strip_suffix(".wav")
        .and_then(|name| LayerId::ALL.into_iter().find(|l| l.as_str() == name));
    match layer {
        Some(id) => (
            [(header::CONTENT_TYPE, "audio/wav")],
            state.layer_wavs[id.index()].clone(),
        )
            .into_response(),
        None => (StatusCode::NOT_FOUND, "unknown layer").into_response(),
    }
}

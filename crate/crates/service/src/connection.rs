use std::sync::Arc;
use std::time::Instant;

use axum::extract::ws::{Message, WebSocket};
use futures::StreamExt;
use sonic_anchor::session::{parse_client_message, ClientMessage, ErrorCode, ErrorReply, ServerMessage, Session};
use tokio::time::{interval, MissedTickBehavior};

use crate::outbound::Outbound;
use crate::{AppState, Detached, LogSink};

struct Live {
    session: Session,
    started: Instant,
    log: LogSink,
}

impl Live {
    fn elapsed(&self) -> f64 {
        self.started.elapsed().as_secs_f64()
    }
}

/// One actor per connection: messages are applied in arrival order,
/// interleaved with heartbeat ticks.
pub async fn run(socket: WebSocket, app: Arc<AppState>) {
    let (sink, mut incoming) = socket.split();
    let (out, writer) = Outbound::spawn(sink, app.config.audio_queue);
    let mut live: Option<Live> = None;
    let mut heartbeat = interval(app.config.tick);
    heartbeat.set_missed_tick_behavior(MissedTickBehavior::Delay);

    loop {
        tokio::select! {
            frame = incoming.next() => match frame {
                Some(Ok(Message::Text(text))) => {
                    let live = live.get_or_insert_with(|| attach(&app, &out, &text));
                    let t = live.elapsed();
                    let (responses, record) = live.session.receive_text(&text, t);
                    live.log.append(record);
                    out.send(responses);
                    if live.session.state().closed {
                        break;
                    }
                }
                Some(Ok(Message::Binary(_))) => out.send(vec![ServerMessage::Error(ErrorReply {
                    clock: live.as_ref().map_or(0.0, |l| l.session.state().clock),
                    code: ErrorCode::Malformed,
                    message: "binary frames are not part of the protocol".into(),
                })]),
                Some(Ok(Message::Close(_))) | Some(Err(_)) | None => break,
                Some(Ok(_)) => {}
            },
            _ = heartbeat.tick(), if live.is_some() => {
                let live = live.as_mut().expect("guarded");
                let t = live.elapsed();
                let (responses, record) = live.session.tick(t);
                live.log.append(record);
                out.send(responses);
            }
        }
    }

    if let Some(l) = live {
        if !l.session.state().closed {
            tracing::info!(session = l.session.id(), "connection lost, session kept for resume");
            app.park(Detached {
                session: l.session,
                started: l.started,
                log: l.log,
                since: Instant::now(),
            });
        } else {
            tracing::info!(session = l.session.id(), "session ended");
        }
    }
    drop(out);
    let _ = writer.await;
}

/// Picks the session for a connection's first message: a parked session
/// when it is a `hello` resuming a known id, otherwise a fresh one.
fn attach(app: &AppState, out: &Outbound, first: &str) -> Live {
    if let Ok(ClientMessage::Hello { resume: Some(id) }) = parse_client_message(first) {
        if let Some(d) = app.unpark(&id) {
            tracing::info!(session = %id, "session resumed");
            return Live {
                session: d.session,
                started: d.started,
                log: d.log,
            };
        }
        out.send(vec![ServerMessage::Error(ErrorReply {
            clock: 0.0,
            code: ErrorCode::UnknownSession,
            message: format!("no session `{id}` to resume, starting a new one"),
        })]);
    }
    let session = Session::new(
        uuid::Uuid::new_v4().to_string(),
        app.renderer.clone(),
        app.config.audio_mode,
    );
    tracing::info!(session = session.id(), "session started");
    let log = LogSink::create(app.config.log_dir.as_deref(), &session);
    Live {
        session,
        started: Instant::now(),
        log,
    }
}

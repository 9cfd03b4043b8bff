use std::sync::Arc;

use axum::extract::ws::{Message, WebSocket};
use futures::stream::SplitSink;
use futures::SinkExt;
use parking_lot::Mutex;
use sonic_anchor::session::{ChunkQueue, ServerMessage};
use tokio::sync::{mpsc, Notify};

/// Outgoing side of a connection. Control messages are never dropped; audio
/// goes through a bounded queue that sheds its oldest chunk when the client
/// cannot keep up.
#[derive(Clone)]
pub struct Outbound {
    control: mpsc::UnboundedSender<ServerMessage>,
    audio: Arc<Mutex<ChunkQueue>>,
    wake: Arc<Notify>,
}

impl Outbound {
    pub fn spawn(sink: SplitSink<WebSocket, Message>, capacity: usize) -> (Self, tokio::task::JoinHandle<()>) {
        let (tx, rx) = mpsc::unbounded_channel();
        let out = Self {
            control: tx,
            audio: Arc::new(Mutex::new(ChunkQueue::new(capacity))),
            wake: Arc::new(Notify::new()),
        };
        let task = tokio::spawn(write_loop(sink, rx, out.audio.clone(), out.wake.clone()));
        (out, task)
    }

    pub fn send(&self, messages: Vec<ServerMessage>) {
        for msg in messages {
            match msg {
                ServerMessage::Audio(chunk) => {
                    if let Some(seq) = self.audio.lock().push(chunk) {
                        tracing::debug!(seq, "audio chunk dropped");
                    }
                    self.wake.notify_one();
                }
                other => {
                    let _ = self.control.send(other);
                }
            }
        }
    }
}

async fn write_loop(
    mut sink: SplitSink<WebSocket, Message>,
    mut control: mpsc::UnboundedReceiver<ServerMessage>,
    audio: Arc<Mutex<ChunkQueue>>,
    wake: Arc<Notify>,
) {
    loop {
        let next = tokio::select! {
            biased;
            msg = control.recv() => match msg {
                Some(msg) => Some(msg),
                None => break,
            },
            _ = wake.notified() => None,
        };
        if let Some(mut msg) = next {
            let dropped = audio.lock().dropped();
            match &mut msg {
                ServerMessage::Telemetry(t) => t.dropped = dropped,
                ServerMessage::Welcome(w) => w.state.dropped = dropped,
                _ => {}
            }
            if sink.send(Message::Text(msg.to_json().into())).await.is_err() {
                return;
            }
        }
        loop {
            let Some(chunk) = audio.lock().pop() else { break };
            if sink
                .send(Message::Text(ServerMessage::Audio(chunk).to_json().into()))
                .await
                .is_err()
            {
                return;
            }
        }
    }
    let _ = sink.send(Message::Close(None)).await;
}

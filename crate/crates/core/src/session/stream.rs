use std::collections::VecDeque;

use super::protocol::AudioChunk;

/// Bounded outbound audio buffer. When full, the oldest chunk is discarded
/// and counted, so the listener hears the freshest audio after a stall.
#[derive(Debug, Clone)]
pub struct ChunkQueue {
    capacity: usize,
    chunks: VecDeque<AudioChunk>,
    dropped: u64,
}

impl ChunkQueue {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity: capacity.max(1),
            chunks: VecDeque::with_capacity(capacity.max(1)),
            dropped: 0,
        }
    }

    /// Enqueues a chunk; returns the dropped chunk's sequence number if the
    /// queue overflowed.
    pub fn push(&mut self, chunk: AudioChunk) -> Option<u64> {
        let evicted = if self.chunks.len() == self.capacity {
            self.dropped += 1;
            self.chunks.pop_front().map(|c| c.seq)
        } else {
            None
        };
        self.chunks.push_back(chunk);
        evicted
    }

    pub fn pop(&mut self) -> Option<AudioChunk> {
        self.chunks.pop_front()
    }

    pub fn len(&self) -> usize {
        self.chunks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chunks.is_empty()
    }

    pub fn dropped(&self) -> u64 {
        self.dropped
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chunk(seq: u64) -> AudioChunk {
        AudioChunk {
            clock: 0.0,
            seq,
            frames: 0,
            pcm: String::new(),
        }
    }

    #[test]
    fn drops_oldest_when_full() {
        let mut q = ChunkQueue::new(2);
        assert_eq!(q.push(chunk(0)), None);
        assert_eq!(q.push(chunk(1)), None);
        assert_eq!(q.push(chunk(2)), Some(0));
        assert_eq!(q.dropped(), 1);
        assert_eq!(q.pop().unwrap().seq, 1);
        assert_eq!(q.pop().unwrap().seq, 2);
        assert!(q.pop().is_none());
    }
}

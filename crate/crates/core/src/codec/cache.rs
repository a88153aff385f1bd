//! Per-thread cache of recently decoded blocks of virtual sequences.

use std::cell::RefCell;
use std::sync::atomic::{AtomicU64, Ordering};

const SLOTS: usize = 16;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

pub(super) fn next_id() -> u64 {
    NEXT_ID.fetch_add(1, Ordering::Relaxed)
}

#[derive(Default)]
struct Cache {
    slots: Vec<(u64, usize, Vec<u64>)>,
    victim: usize,
}

thread_local! {
    static CACHE: RefCell<Cache> = RefCell::new(Cache::default());
}

/// Word `wi` of block `block` of source `id`, decoding the block with
/// `fill` on a miss.
pub(super) fn word(id: u64, block: usize, wi: usize, words: usize, fill: impl FnOnce(&mut [u64])) -> u64 {
    let hit = CACHE.with(|c| {
        c.borrow()
            .slots
            .iter()
            .find(|s| s.0 == id && s.1 == block)
            .map(|s| s.2[wi])
    });
    if let Some(v) = hit {
        return v;
    }
    // decoding may read other virtual sources, so no borrow is held here
    let mut buf = vec![0u64; words];
    fill(&mut buf);
    let v = buf[wi];
    CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.slots.len() < SLOTS {
            c.slots.push((id, block, buf));
        } else {
            let k = c.victim;
            c.slots[k] = (id, block, buf);
            c.victim = (k + 1) % SLOTS;
        }
    });
    v
}

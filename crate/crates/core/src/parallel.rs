//! Deterministic data-parallel map.
//!
//! Grid points and corpus members are independent, so checkers may fan out
//! across threads; results are collected by index and reduced serially, which
//! makes reports byte-identical regardless of thread count or scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};

static THREADS: AtomicUsize = AtomicUsize::new(1);

/// Set the process-wide worker count (the CLI reads `--threads` or
/// `ORLICZKIT_THREADS`). Checkers produce identical output for any value.
pub fn set_thread_count(n: usize) {
    THREADS.store(n.max(1), Ordering::Relaxed);
}

pub fn thread_count() -> usize {
    THREADS.load(Ordering::Relaxed)
}

/// `par_map` with the process-wide worker count.
pub fn auto_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    par_map(items, thread_count(), f)
}

/// Apply `f` to every item, optionally on `threads` worker threads.
///
/// Output order always matches input order.
pub fn par_map<T, U, F>(items: &[T], threads: usize, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    if threads <= 1 || items.len() < 2 {
        return items.iter().map(f).collect();
    }
    let threads = threads.min(items.len());
    let mut out: Vec<Option<U>> = Vec::with_capacity(items.len());
    out.resize_with(items.len(), || None);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<&mut Option<U>>> =
        out.iter_mut().map(std::sync::Mutex::new).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let v = f(&items[i]);
                **slots[i].lock().expect("slot lock") = Some(v);
            });
        }
    });
    drop(slots);
    out.into_iter().map(|v| v.expect("all slots filled")).collect()
}

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Worker count from `CDGLAB_THREADS`: unset means all cores, 0 means serial
/// on the calling thread.
pub fn worker_count() -> usize {
    match std::env::var("CDGLAB_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        Some(k) => k,
        None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    }
}

/// Applies `f` to every job; results keep the job order whatever the
/// completion order.
pub fn map<J: Sync, R: Send>(jobs: &[J], workers: usize, f: impl Fn(&J) -> R + Sync) -> Vec<R> {
    if workers == 0 || jobs.len() <= 1 {
        return jobs.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let out: Mutex<Vec<Option<R>>> = Mutex::new((0..jobs.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers.min(jobs.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let r = f(&jobs[i]);
                out.lock().unwrap()[i] = Some(r);
            });
        }
    });
    out.into_inner().unwrap().into_iter().map(|r| r.expect("every job ran")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let jobs: Vec<usize> = (0..50).collect();
        for w in [0, 1, 4] {
            assert_eq!(map(&jobs, w, |j| j * 2), jobs.iter().map(|j| j * 2).collect::<Vec<_>>());
        }
    }
}

//! Small scoped-thread helper for embarrassingly parallel batches.
//!
//! The thread count is capped by the `CACAUG_THREADS` environment variable
//! (default: available parallelism). Results are returned in input order,
//! so output never depends on scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Maximum worker count honoring `CACAUG_THREADS`.
pub fn thread_cap() -> usize {
    if let Ok(v) = std::env::var("CACAUG_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Applies `f` to every index/item pair, possibly on several threads, and
/// collects the results in input order.
pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync,
{
    let workers = thread_cap().min(items.len().max(1));
    if workers <= 1 || items.len() <= 1 {
        return items.iter().enumerate().map(|(i, t)| f(i, t)).collect();
    }
    let next = AtomicUsize::new(0);
    let out: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(i, &items[i]);
                out.lock().unwrap()[i] = Some(r);
            });
        }
    });
    out.into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("worker filled every slot"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_preserved() {
        let xs: Vec<u64> = (0..257).collect();
        let ys = par_map(&xs, |_, &x| x * x);
        assert_eq!(ys, xs.iter().map(|&x| x * x).collect::<Vec<_>>());
    }

    #[test]
    fn empty_input() {
        let xs: Vec<u64> = vec![];
        let ys = par_map(&xs, |_, &x| x);
        assert!(ys.is_empty());
    }
}

//! Deterministic worker-pool helper. `GRVAL_THREADS` bounds the worker
//! count; results are always merged in task order, so the output does not
//! depend on how tasks were scheduled.

fn thread_count(tasks: usize) -> usize {
    let configured = std::env::var("GRVAL_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });
    configured.min(tasks.max(1))
}

/// Evaluates `f(0), ..., f(tasks - 1)` and returns the results in index
/// order. Tasks must be independent; each worker gets a contiguous block.
pub fn parallel_map<T, F>(tasks: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = thread_count(tasks);
    if workers <= 1 || tasks <= 1 {
        return (0..tasks).map(f).collect();
    }
    let chunk = tasks.div_ceil(workers);
    let mut blocks: Vec<Vec<T>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..workers {
            let lo = w * chunk;
            let hi = ((w + 1) * chunk).min(tasks);
            if lo >= hi {
                break;
            }
            let f = &f;
            handles.push(scope.spawn(move || (lo..hi).map(f).collect::<Vec<T>>()));
        }
        for h in handles {
            blocks.push(h.join().expect("worker panicked"));
        }
    });
    blocks.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_task_order() {
        let out = parallel_map(100, |i| i * i);
        assert_eq!(out, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }
}

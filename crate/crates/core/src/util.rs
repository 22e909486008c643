//! Small shared helpers.

/// Order-preserving parallel map over owned items using scoped threads.
/// With `threads <= 1` (or few items) this degenerates to a plain map, so
/// results never depend on scheduling.
pub fn parallel_map<T, U, F>(items: Vec<T>, threads: usize, f: F) -> Vec<U>
where
    T: Send + Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    if threads <= 1 || items.len() <= 1 {
        return items.iter().map(&f).collect();
    }
    let workers = threads.min(items.len());
    let mut slots: Vec<Option<U>> = (0..items.len()).map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slot_refs: Vec<std::sync::Mutex<&mut Option<U>>> =
        slots.iter_mut().map(std::sync::Mutex::new).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= items.len() {
                    break;
                }
                let out = f(&items[i]);
                **slot_refs[i].lock().unwrap() = Some(out);
            });
        }
    });
    drop(slot_refs);
    slots.into_iter().map(|s| s.expect("worker filled slot")).collect()
}

/// Iterates all subsets of `0..n` with at most `k` elements, as sorted index
/// vectors, in size-then-lexicographic order.
pub fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..k.min(n) {
        let mut next = Vec::new();
        for base in &frontier {
            let start = base.last().map(|&x| x + 1).unwrap_or(0);
            for x in start..n {
                let mut s = base.clone();
                s.push(x);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

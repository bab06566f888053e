//! Kendall's tau-b in O(n log n) (Knight's merge-sort algorithm).

use std::cmp::Ordering;

// -0.0 and 0.0 must tie
fn cmp(a: f64, b: f64) -> Ordering {
    (a + 0.0).total_cmp(&(b + 0.0))
}

/// Pairs `t·(t−1)/2` summed over runs of equal values in a sorted sequence.
fn tied_pairs<T: PartialEq>(sorted: impl Iterator<Item = T>) -> u64 {
    let mut total = 0u64;
    let mut run = 0u64;
    let mut prev: Option<T> = None;
    for v in sorted {
        if prev.as_ref() == Some(&v) {
            run += 1;
        } else {
            total += run * (run.saturating_sub(1)) / 2;
            run = 1;
        }
        prev = Some(v);
    }
    total + run * run.saturating_sub(1) / 2
}

/// Sorts `v` by `key`, returning the number of inversions removed.
fn merge_sort_swaps(v: &mut [usize], key: &[f64], buf: &mut Vec<usize>) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = merge_sort_swaps(&mut v[..mid], key, buf) + merge_sort_swaps(&mut v[mid..], key, buf);
    buf.clear();
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if cmp(key[v[j]], key[v[i]]) == Ordering::Less {
            buf.push(v[j]);
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf.push(v[i]);
            i += 1;
        }
    }
    buf.extend_from_slice(&v[i..mid]);
    buf.extend_from_slice(&v[j..n]);
    v.copy_from_slice(buf);
    swaps
}

/// Tau-b rank correlation `(C − D)/√((n₀ − n₁)(n₀ − n₂))`.
///
/// Returns 0 when either input is constant (or shorter than 2).
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "kendall_tau_b needs equal lengths");
    let n = x.len();
    if n < 2 {
        return 0.0;
    }
    let n0 = (n as u64) * (n as u64 - 1) / 2;

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| cmp(x[a], x[b]).then(cmp(y[a], y[b])));
    let eq = |a: f64, b: f64| cmp(a, b) == Ordering::Equal;
    let n1 = tied_pairs(idx.iter().map(|&i| (x[i] + 0.0).to_bits()));
    let n3 = {
        let mut total = 0u64;
        let mut run = 1u64;
        for w in idx.windows(2) {
            if eq(x[w[0]], x[w[1]]) && eq(y[w[0]], y[w[1]]) {
                run += 1;
            } else {
                total += run * (run - 1) / 2;
                run = 1;
            }
        }
        total + run * (run - 1) / 2
    };

    let mut buf = Vec::with_capacity(n);
    let swaps = merge_sort_swaps(&mut idx, y, &mut buf);
    let n2 = tied_pairs(idx.iter().map(|&i| (y[i] + 0.0).to_bits()));

    let tx = n0 - n1;
    let ty = n0 - n2;
    if tx == 0 || ty == 0 {
        return 0.0;
    }
    // C − D = n₀ − n₁ − n₂ + n₃ − 2·swaps
    let s = n0 as i64 - n1 as i64 - n2 as i64 + n3 as i64 - 2 * swaps as i64;
    s as f64 / ((tx as f64) * (ty as f64)).sqrt()
}

//! Allocation-free enumeration of fixed-size index combinations, used by the
//! exact rules and the exponential verifiers.

/// Binomial coefficient `C(n, k)` with saturation at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Calls `f` once per size-`size` subset of `pool`, in lexicographic order of
/// the chosen elements. Returning `false` from `f` stops the enumeration
/// early; the function reports whether it ran to completion.
pub fn for_each_combination<F>(pool: &[usize], size: usize, mut f: F) -> bool
where
    F: FnMut(&[usize]) -> bool,
{
    if size > pool.len() {
        return true;
    }
    if size == 0 {
        return f(&[]);
    }
    let mut positions: Vec<usize> = (0..size).collect();
    let mut chosen: Vec<usize> = positions.iter().map(|&p| pool[p]).collect();
    loop {
        if !f(&chosen) {
            return false;
        }
        // Advance to the next combination of positions.
        let mut i = size;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if positions[i] != i + pool.len() - size {
                break;
            }
            if i == 0 {
                return true;
            }
        }
        positions[i] += 1;
        for j in i + 1..size {
            positions[j] = positions[j - 1] + 1;
        }
        for j in i..size {
            chosen[j] = pool[positions[j]];
        }
    }
}

//! Small permutation helpers. Permutations are dense 0-based arrays.

use crate::sign::Sign;

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut cur: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

/// Advances `p` to the lexicographically next permutation; false when `p` was the last one.
pub fn next_permutation(p: &mut [u8]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub fn is_permutation(p: &[u8]) -> bool {
    let mut seen = vec![false; p.len()];
    for &v in p {
        let v = v as usize;
        if v >= p.len() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// Sign of a permutation: +1 for even, -1 for odd.
pub fn parity(p: &[u8]) -> Sign {
    let mut seen = vec![false; p.len()];
    let mut sign = Sign::Plus;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = p[k] as usize;
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

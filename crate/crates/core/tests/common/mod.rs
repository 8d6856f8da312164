//! Independent GF(2^8) arithmetic for cross-checking the library: bitwise
//! shift-and-add multiplication, no tables.
#![allow(dead_code)]

use unilrc::CodeDefinition;

pub fn mul(mut a: u8, mut b: u8) -> u8 {
    let mut p = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            p ^= a;
        }
        let carry = a & 0x80 != 0;
        a <<= 1;
        if carry {
            a ^= 0x1D;
        }
        b >>= 1;
    }
    p
}

pub fn inv(a: u8) -> u8 {
    assert_ne!(a, 0);
    (1..=255u8).find(|&b| mul(a, b) == 1).unwrap()
}

/// Rank by Gaussian elimination over rows of bytes.
pub fn rank(mut m: Vec<Vec<u8>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        let iv = inv(m[r][c]);
        let pivot: Vec<u8> = m[r].iter().map(|&v| mul(v, iv)).collect();
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] ^= mul(f, pivot[j]);
                }
            }
        }
        m[r] = pivot;
        r += 1;
    }
    r
}

/// Generator rows as bytes.
pub fn generator_rows(code: &CodeDefinition) -> Vec<Vec<u8>> {
    (0..code.n()).map(|i| code.generator.row(i).iter().map(|g| g.value()).collect()).collect()
}

/// Whether the data survives losing `erased`: surviving generator rows have rank k.
pub fn decodable(rows: &[Vec<u8>], k: usize, erased: &[usize]) -> bool {
    let kept: Vec<Vec<u8>> =
        rows.iter().enumerate().filter(|(i, _)| !erased.contains(i)).map(|(_, r)| r.clone()).collect();
    rank(kept) == k
}

/// Smallest undecodable erasure count up to `max_e` and the number of
/// patterns tried; `None` if every pattern up to `max_e` decodes.
pub fn brute_distance(code: &CodeDefinition, max_e: usize) -> (Option<usize>, usize) {
    let rows = generator_rows(code);
    let n = code.n();
    let mut checks = 0;
    for e in 1..=max_e {
        let mut found = false;
        for_each_subset(n, e, &mut |s| {
            checks += 1;
            if !decodable(&rows, code.k(), s) {
                found = true;
            }
            !found
        });
        if found {
            return (Some(e), checks);
        }
    }
    (None, checks)
}

fn for_each_subset(n: usize, e: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(start: usize, n: usize, e: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == e {
            return f(cur);
        }
        for i in start..n {
            cur.push(i);
            let go = rec(i + 1, n, e, cur, f);
            cur.pop();
            if !go {
                return false;
            }
        }
        true
    }
    rec(0, n, e, &mut Vec::new(), f);
}

/// `H y` computed from `H = [A | I]` with the bitwise field.
pub fn syndrome_is_zero(code: &CodeDefinition, blocks: &[Vec<u8>]) -> bool {
    let (n, k) = (code.n(), code.k());
    let rows = generator_rows(code);
    let len = blocks[0].len();
    (0..n - k).all(|r| {
        (0..len).all(|b| {
            let mut acc = blocks[k + r][b];
            for c in 0..k {
                acc ^= mul(rows[k + r][c], blocks[c][b]);
            }
            acc == 0
        })
    })
}

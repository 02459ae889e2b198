//! Independent oracles: dense integer elimination, bar-resolution group
//! homology and cochain-level group cohomology. Nothing here calls the
//! library's linear algebra.

#![allow(dead_code)]

use orbikit::group::GroupDesc;
use orbikit::gspaces::KModule;
use orbikit::linalg::AbelianGroup;

/// Rank over Q and the nonzero diagonal entries of a diagonalization by
/// unimodular row and column operations. The cokernel of `m` is
/// `Z^(rows - rank) ⊕ ⊕ Z/d`.
pub fn diagonalize(mut m: Vec<Vec<i128>>) -> (usize, Vec<i128>) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.map_or(true, |(a, b)| m[i][j].abs() < m[a][b].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                if m[i][t] != 0 {
                    let q = m[i][t].div_euclid(p);
                    for j in t..cols {
                        m[i][j] = m[i][j].checked_sub(q.checked_mul(m[t][j]).expect("overflow")).expect("overflow");
                    }
                    if m[i][t] != 0 {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 {
                    let q = m[t][j].div_euclid(p);
                    for i in t..rows {
                        m[i][j] = m[i][j].checked_sub(q.checked_mul(m[i][t]).expect("overflow")).expect("overflow");
                    }
                    if m[t][j] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
            // move the smallest leftover in row t or column t to the pivot
            let mut best = (t, t);
            for i in t + 1..rows {
                if m[i][t] != 0 && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                m.swap(t, best.0);
            }
            if best.1 != t {
                for row in m.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    (diag.len(), diag)
}

/// Rank of `m` over `F_p`.
pub fn rank_mod(m: &[Vec<i128>], p: i128) -> usize {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let inv = |x: i128| {
        // Fermat, p prime
        let (mut b, mut e, mut r) = (x, p - 2, 1i128);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, piv);
        let s = inv(a[rank][c]);
        for j in c..cols {
            a[rank][j] = a[rank][j] * s % p;
        }
        for i in 0..rows {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c];
                for j in c..cols {
                    a[i][j] = (a[i][j] - f * a[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Prime-power decomposition, so groups compare independently of how
/// invariant factors were normalized.
pub fn canonical(a: &AbelianGroup) -> (usize, Vec<u64>) {
    let mut powers = Vec::new();
    for &t in &a.torsion {
        powers.extend(prime_powers(t));
    }
    powers.sort_unstable();
    (a.rank, powers)
}

pub fn prime_powers(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut q = 1;
        while n % p == 0 {
            n /= p;
            q *= p;
        }
        if q > 1 {
            out.push(q);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn from_parts(rank: usize, torsion: &[i128]) -> (usize, Vec<u64>) {
    let mut powers = Vec::new();
    for &t in torsion {
        if t > 1 {
            powers.extend(prime_powers(t as u64));
        }
    }
    powers.sort_unstable();
    (rank, powers)
}

fn tuples(k: usize, n: usize) -> usize {
    k.pow(n as u32)
}

fn decode(mut code: usize, k: usize, n: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    for slot in t.iter_mut().rev() {
        *slot = code % k;
        code /= k;
    }
    t
}

fn encode(t: &[usize], k: usize) -> usize {
    t.iter().fold(0, |acc, &a| acc * k + a)
}

/// Unnormalized bar complex of `Z` over `Z[K]`: `∂_n: C_n -> C_{n-1}` with
/// `C_n = Z[K^n]`, as a `|K|^(n-1) × |K|^n` matrix.
pub fn bar_boundary(k: &GroupDesc, n: usize) -> Vec<Vec<i128>> {
    let q = k.order();
    let mut m = vec![vec![0i128; tuples(q, n)]; if n == 0 { 0 } else { tuples(q, n - 1) }];
    if n == 0 {
        return m;
    }
    for c in 0..tuples(q, n) {
        let g = decode(c, q, n);
        m[encode(&g[1..], q)][c] += 1;
        for i in 1..n {
            let mut f = g[..i - 1].to_vec();
            f.push(k.mul(g[i - 1], g[i]));
            f.extend_from_slice(&g[i + 1..]);
            m[encode(&f, q)][c] += if i % 2 == 0 { 1 } else { -1 };
        }
        m[encode(&g[..n - 1], q)][c] += if n % 2 == 0 { 1 } else { -1 };
    }
    m
}

/// `H_n(K; Z)` from the bar complex. `ker ∂_n` is saturated, so the
/// torsion of `H_n` is that of `coker ∂_{n+1}`.
pub fn bar_homology(k: &GroupDesc, n: usize) -> (usize, Vec<u64>) {
    let dim = tuples(k.order(), n);
    let (rank_n, _) = diagonalize(bar_boundary(k, n));
    let (rank_next, diag) = diagonalize(bar_boundary(k, n + 1));
    from_parts(dim - rank_n - rank_next, &diag)
}

/// Unnormalized cochain coboundary `C^n -> C^(n+1)` for the left action
/// `g·a = act(g⁻¹) a`.
pub fn cochain_coboundary(m: &KModule, n: usize) -> Vec<Vec<i128>> {
    let k = &m.group;
    let q = k.order();
    let d = m.fiber.dim();
    let rows = tuples(q, n + 1) * d;
    let cols = tuples(q, n) * d;
    let mut out = vec![vec![0i128; cols]; rows];
    for r in 0..tuples(q, n + 1) {
        let g = decode(r, q, n + 1);
        let rho = &m.act[k.inv(g[0])];
        let cb = encode(&g[1..], q) * d;
        for i in 0..d {
            for j in 0..d {
                out[r * d + i][cb + j] += *rho.get(i, j) as i128;
            }
        }
        for i in 1..=n {
            let mut f = g[..i - 1].to_vec();
            f.push(k.mul(g[i - 1], g[i]));
            f.extend_from_slice(&g[i + 1..]);
            let cb = encode(&f, q) * d;
            for c in 0..d {
                out[r * d + c][cb + c] += if i % 2 == 0 { 1 } else { -1 };
            }
        }
        let cb = encode(&g[..n], q) * d;
        for c in 0..d {
            out[r * d + c][cb + c] += if (n + 1) % 2 == 0 { 1 } else { -1 };
        }
    }
    out
}

fn matmul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|t| row[t] * b[t][j]).sum()).collect())
        .collect()
}

/// `H^n(K; A)` for a fiber that is free (`Z^r`) or elementary abelian
/// (`(Z/p)^s`, p prime). Returns `None` for other fibers.
pub fn cochain_cohomology(m: &KModule, n: usize) -> Option<(usize, Vec<u64>)> {
    let f = &m.fiber;
    let delta = cochain_coboundary(m, n);
    let before = if n == 0 { Vec::new() } else { cochain_coboundary(m, n - 1) };
    if n > 0 {
        // the complex must square to zero modulo the fiber's relations
        let sq = matmul(&delta, &before);
        let modulus = f.torsion.first().map_or(0, |&p| p as i128);
        assert!(
            sq.iter().flatten().all(|&x| if modulus == 0 { x == 0 } else { x % modulus == 0 }),
            "δδ ≠ 0"
        );
    }
    let dim = tuples(m.group.order(), n) * f.dim();
    if f.torsion.is_empty() {
        let (rank_n, _) = diagonalize(delta);
        if n == 0 {
            return Some((dim - rank_n, Vec::new()));
        }
        let (rank_prev, diag) = diagonalize(before);
        return Some(from_parts(dim - rank_n - rank_prev, &diag));
    }
    let p = f.torsion[0];
    if f.rank != 0 || f.torsion.iter().any(|&t| t != p) || prime_powers(p) != vec![p] {
        return None;
    }
    let p = p as i128;
    let rank_n = rank_mod(&delta, p);
    let rank_prev = if n == 0 { 0 } else { rank_mod(&before, p) };
    let e = dim - rank_n - rank_prev;
    Some((0, vec![p as u64; e]))
}

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use trophurwitz::covers::RamificationData;
use trophurwitz::moduli::Split;

pub fn rd(x: &[i64]) -> RamificationData {
    RamificationData::new(x.to_vec()).unwrap()
}

/// Whether every split of `[n]` has nonzero slope.
pub fn all_slopes_nonzero(x: &RamificationData) -> bool {
    Split::all(x.n()).iter().all(|s| x.side_sum(s.mask()) != 0)
}

/// Deterministic sample of `count` distinct ramification vectors of length `n`
/// with entries in `-bound..=bound`.
pub fn sample_x(n: usize, count: usize, seed: u64, nonzero_slopes: bool) -> Vec<RamificationData> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out: Vec<RamificationData> = Vec::new();
    while out.len() < count {
        let mut v: Vec<i64> = (0..n - 1).map(|_| rng.random_range(-3..=3)).collect();
        v.push(-v.iter().sum::<i64>());
        if v[n - 1].abs() > 6 {
            continue;
        }
        let Ok(x) = RamificationData::new(v) else { continue };
        if (nonzero_slopes && !all_slopes_nonzero(&x)) || out.contains(&x) {
            continue;
        }
        out.push(x);
    }
    out
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

fn cycle_type(p: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        if !seen[s] {
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = p[i];
                len += 1;
            }
            out.push(len);
        }
    }
    out.sort_unstable();
    out
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn automorphisms(parts: &[usize]) -> u128 {
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    sorted.chunk_by(|a, b| a == b).map(|c| factorial(c.len())).product()
}

fn class_size(parts: &[usize]) -> u128 {
    let d: usize = parts.iter().sum();
    factorial(d) / (parts.iter().map(|&p| p as u128).product::<u128>() * automorphisms(parts))
}

fn permutation_of_type(parts: &[usize]) -> Vec<usize> {
    let d: usize = parts.iter().sum();
    let mut p: Vec<usize> = (0..d).collect();
    let mut start = 0;
    for &len in parts {
        for i in 0..len {
            p[start + i] = start + (i + 1) % len;
        }
        start += len;
    }
    p
}

fn find(parent: &mut [usize], i: usize) -> usize {
    if parent[i] != i {
        let r = find(parent, parent[i]);
        parent[i] = r;
    }
    parent[i]
}

/// Double Hurwitz number with labelled ends: connected factorizations
/// `σ₁ τ₁ ⋯ τ_r σ₂ = id` in `S_d` with `σ₁` of type `x⁺`, `σ₂` of type `x⁻`
/// and `r = n - 2` transpositions, divided by `d!`, times the automorphisms
/// of both profiles.
pub fn labelled_double_hurwitz_number(x: &[i64]) -> u128 {
    let plus: Vec<usize> = x.iter().filter(|&&v| v > 0).map(|&v| v as usize).collect();
    let mut minus: Vec<usize> = x.iter().filter(|&&v| v < 0).map(|&v| (-v) as usize).collect();
    minus.sort_unstable();
    assert!(x.iter().all(|&v| v != 0));
    let d: usize = plus.iter().sum();
    let r = x.len() - 2;
    let sigma = permutation_of_type(&plus);
    let transpositions: Vec<(usize, usize)> = (0..d).flat_map(|a| ((a + 1)..d).map(move |b| (a, b))).collect();
    let mut count: u128 = 0;
    let mut idx = vec![0usize; r];
    loop {
        let mut p = sigma.clone();
        let mut parent: Vec<usize> = (0..d).collect();
        for i in 0..d {
            let (a, b) = (find(&mut parent, i), find(&mut parent, sigma[i]));
            parent[a] = b;
        }
        for &t in &idx {
            let (a, b) = transpositions[t];
            let mut tau: Vec<usize> = (0..d).collect();
            tau.swap(a, b);
            p = compose(&p, &tau);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let root = find(&mut parent, 0);
        if cycle_type(&p) == minus && (0..d).all(|i| find(&mut parent, i) == root) {
            count += 1;
        }
        let mut j = 0;
        while j < r {
            idx[j] += 1;
            if idx[j] < transpositions.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == r {
            break;
        }
    }
    let total = count * class_size(&plus) * automorphisms(&plus) * automorphisms(&minus);
    assert_eq!(total % factorial(d), 0);
    total / factorial(d)
}

/// Number of permutations of `0..n` respecting every edge `(a, b)` (a first).
pub fn brute_force_extensions(n: usize, edges: &[(usize, usize)]) -> u64 {
    fn rec(n: usize, edges: &[(usize, usize)], used: &mut Vec<bool>, placed: usize) -> u64 {
        if placed == n {
            return 1;
        }
        let mut total = 0;
        for v in 0..n {
            if !used[v] && edges.iter().all(|&(a, b)| b != v || used[a]) {
                used[v] = true;
                total += rec(n, edges, used, placed + 1);
                used[v] = false;
            }
        }
        total
    }
    rec(n, edges, &mut vec![false; n], 0)
}

/// All ramification vectors whose positive and negative parts have at most
/// three parts of size at most three, with at least four entries.
pub fn small_profiles() -> Vec<Vec<i64>> {
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for a in 1..=3 {
        parts.push(vec![a]);
        for b in 1..=a {
            parts.push(vec![a, b]);
            for c in 1..=b {
                parts.push(vec![a, b, c]);
            }
        }
    }
    let mut out = Vec::new();
    for p in &parts {
        for m in &parts {
            if p.iter().sum::<usize>() == m.iter().sum::<usize>() && p.len() + m.len() >= 4 {
                let mut x: Vec<i64> = p.iter().map(|&v| v as i64).collect();
                x.extend(m.iter().map(|&v| -(v as i64)));
                out.push(x);
            }
        }
    }
    out
}

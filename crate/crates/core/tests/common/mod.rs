//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's group or covering code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use brane_core::complex::{BraneComplex, Split};

pub fn all_perms(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(d - 1) {
        for pos in 0..d {
            let mut q = p.clone();
            q.insert(pos, d - 1);
            out.push(q);
        }
    }
    out
}

pub fn cycle_type(p: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn partition_name(p: &[usize]) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

pub fn factorial(d: usize) -> u64 {
    (1..=d as u64).product()
}

/// Tuples of permutations of the given cycle types whose product is the identity.
pub fn tuple_count(d: usize, types: &[Vec<usize>]) -> u64 {
    let perms = all_perms(d);
    let classes: Vec<Vec<&Vec<usize>>> = types
        .iter()
        .map(|t| perms.iter().filter(|p| &cycle_type(p) == t).collect())
        .collect();
    fn go(acc: Vec<usize>, rest: &[Vec<&Vec<usize>>]) -> u64 {
        match rest.split_first() {
            None => acc.iter().enumerate().all(|(i, &x)| i == x) as u64,
            Some((c, tail)) => c
                .iter()
                .map(|p| go(acc.iter().map(|&x| p[x]).collect(), tail))
                .sum(),
        }
    }
    go((0..d).collect(), &classes)
}

/// Tuples in the cyclic group of order `n` with the given residues summing to zero.
pub fn cyclic_count(n: usize, residues: &[usize]) -> u64 {
    (residues.iter().sum::<usize>() % n == 0) as u64
}

/// Every edge set that cuts `omega` along `split`: each face meets it in zero
/// or two sides, it contains exactly the edges joining the two sides, both
/// sides stay connected without it, and its faces join it into one chain.
pub fn brute_force_cuts(omega: &BraneComplex, split: &Split) -> Vec<BTreeSet<usize>> {
    let c = omega.complex();
    let ne = c.edges().len();
    let a: BTreeSet<usize> = split.side_a.iter().copied().collect();
    let b: BTreeSet<usize> = split.side_b.iter().copied().collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << ne) {
        let x: BTreeSet<usize> = (0..ne).filter(|e| mask >> e & 1 == 1).collect();
        if x.is_empty() {
            continue;
        }
        let faces_ok = c.faces().iter().all(|f| {
            let k = f.boundary.iter().filter(|s| x.contains(&s.edge)).count();
            k == 0 || k == 2
        });
        if !faces_ok {
            continue;
        }
        let straddles = |e: usize| {
            let ed = &c.edges()[e];
            a.contains(&ed.tail) != a.contains(&ed.head)
        };
        if (0..ne).any(|e| x.contains(&e) != straddles(e)) {
            continue;
        }
        let connected = |side: &BTreeSet<usize>| {
            let start = *side.iter().next().unwrap();
            let mut seen = BTreeSet::from([start]);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for (e, ed) in c.edges().iter().enumerate() {
                    if x.contains(&e) {
                        continue;
                    }
                    for (p, q) in [(ed.tail, ed.head), (ed.head, ed.tail)] {
                        if p == v && side.contains(&q) && seen.insert(q) {
                            stack.push(q);
                        }
                    }
                }
            }
            seen == *side
        };
        if !connected(&a) || !connected(&b) {
            continue;
        }
        // chords: faces with two crossed sides join their two edges
        let chords: Vec<(usize, usize)> = c
            .faces()
            .iter()
            .filter_map(|f| {
                let es: Vec<usize> = f.boundary.iter().map(|s| s.edge).filter(|e| x.contains(e)).collect();
                (es.len() == 2).then(|| (es[0], es[1]))
            })
            .collect();
        let start = *x.iter().next().unwrap();
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(e) = stack.pop() {
            for &(p, q) in &chords {
                for (u, w) in [(p, q), (q, p)] {
                    if u == e && seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
        }
        if seen == x {
            out.push(x);
        }
    }
    out
}

/// Order of the centralizer of a permutation of the given cycle type.
pub fn centralizer_order(cycle_type: &[usize]) -> u64 {
    let mut out = 1u64;
    for len in 1..=cycle_type.iter().copied().max().unwrap_or(0) {
        let m = cycle_type.iter().filter(|&&c| c == len).count();
        out *= (len as u64).pow(m as u32) * factorial(m);
    }
    out
}

//! Permutations of `{0, .., d-1}`, printed 1-based in cycle notation.

use std::fmt;

/// A permutation as its image list: `p[i]` is the image of `i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(d: usize) -> Perm {
        Perm((0..d as u8).collect())
    }

    /// From an image list; `None` unless it is a bijection.
    pub fn from_images(images: Vec<u8>) -> Option<Perm> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm(inv)
    }

    /// Cycles including fixed points, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.apply(s);
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            out.push(c);
        }
        out
    }

    /// Cycle lengths, descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// Parses cycle notation like `(1 2)(3 4)` or `(12)`; `id` and `()` give the identity.
    pub fn parse_cycles(s: &str, d: usize) -> Option<Perm> {
        let s = s.trim();
        let mut images: Vec<u8> = (0..d as u8).collect();
        if s == "id" || s.is_empty() {
            return Some(Perm(images));
        }
        let mut seen = vec![false; d];
        for part in s.split(')') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let body = part.strip_prefix('(')?;
            let pts: Vec<usize> = if body.contains([' ', ',']) {
                body.split([' ', ','])
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>().ok())
                    .collect::<Option<_>>()?
            } else {
                body.chars()
                    .map(|c| c.to_digit(10).map(|x| x as usize))
                    .collect::<Option<_>>()?
            };
            for (k, &p) in pts.iter().enumerate() {
                if p == 0 || p > d || seen[p - 1] {
                    return None;
                }
                seen[p - 1] = true;
                images[p - 1] = (pts[(k + 1) % pts.len()] - 1) as u8;
            }
        }
        Some(Perm(images))
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<Vec<usize>> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("id");
        }
        let sep = if self.degree() > 9 { "," } else { "" };
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(sep))?;
        }
        Ok(())
    }
}

/// All permutations of degree `d` in lexicographic order of image lists.
pub fn all_perms(d: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..d as u8).collect();
    loop {
        out.push(Perm(cur.clone()));
        // next permutation
        let Some(i) = (1..d).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..d).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Bracketed partition syntax, e.g. `[2,1]`.
pub fn partition_name(parts: &[usize]) -> String {
    let p: Vec<String> = parts.iter().map(|x| x.to_string()).collect();
    format!("[{}]", p.join(","))
}

/// Parses `[2,1]` into descending parts.
pub fn parse_partition(s: &str) -> Option<Vec<usize>> {
    let body = s.trim().strip_prefix('[')?.strip_suffix(']')?;
    let mut parts: Vec<usize> = body
        .split(',')
        .map(|t| t.trim().parse::<usize>().ok().filter(|&x| x > 0))
        .collect::<Option<_>>()?;
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Some(parts)
}

/// All partitions of `n`, parts descending, in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            go(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_order() {
        let p = all_perms(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], Perm::identity(3));
        assert_eq!(p[1].images(), &[0, 2, 1]);
        assert_eq!(all_perms(4).len(), 24);
        assert_eq!(partitions(4).len(), 5);
    }

    #[test]
    fn cycle_notation_round_trip() {
        for p in all_perms(4) {
            let s = p.to_string();
            assert_eq!(Perm::parse_cycles(&s, 4).unwrap(), p, "{s}");
        }
        assert_eq!(Perm::parse_cycles("(1 2)(3 4)", 4).unwrap().to_string(), "(12)(34)");
        assert!(Perm::parse_cycles("(1 1)", 3).is_none());
    }

    #[test]
    fn composition_applies_right_first() {
        let a = Perm::parse_cycles("(12)", 3).unwrap();
        let b = Perm::parse_cycles("(23)", 3).unwrap();
        // (12)(23) sends 3 -> 2 -> 1
        assert_eq!(a.compose(&b).apply(2), 0);
        assert_eq!(a.compose(&a.inverse()), Perm::identity(3));
    }

    #[test]
    fn partition_syntax() {
        assert_eq!(parse_partition("[1,2]").unwrap(), vec![2, 1]);
        assert_eq!(partition_name(&[2, 1]), "[2,1]");
        assert!(parse_partition("[0]").is_none());
    }
}

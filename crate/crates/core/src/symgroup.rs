//! The symmetric group S_n: permutations, conjugacy classes and the
//! irreducible characters.
//!
//! Permutations are stored as 1-indexed image lists, `images[k - 1] = π(k)`.
//! Composition applies the right operand first: `p.compose(&q)(k) = p(q(k))`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Largest n for which the full group is enumerated.
pub const N_MAX: usize = 8;

/// Integer partition, parts in non-increasing order.
pub type Partition = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from its 1-indexed one-line form.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection on 1..={n}")));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n).collect() }
    }

    /// The transposition exchanging points `a` and `b` (1-indexed).
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        Self::from_cycles(n, &[vec![a, b]])
    }

    /// Builds a permutation of 1..=n from disjoint cycles; unmentioned points
    /// are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n || used[x - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "cycles {cycles:?} are not disjoint cycles on 1..={n}"
                    )));
                }
                used[x - 1] = true;
                images[x - 1] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// π(k) for 1-indexed k.
    pub fn apply(&self, k: usize) -> usize {
        self.images[k - 1]
    }

    /// π on 0-indexed points.
    #[inline]
    pub fn apply0(&self, k: usize) -> usize {
        self.images[k] - 1
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::SizeMismatch { expected: self.degree(), found: other.degree() });
        }
        Ok(Permutation { images: other.images.iter().map(|&k| self.images[k - 1]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// Disjoint cycles including fixed points, each starting at its least
    /// element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start - 1] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start - 1] = true;
            let mut k = self.apply(start);
            while k != start {
                seen[k - 1] = true;
                cycle.push(k);
                k = self.apply(k);
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths sorted in non-increasing order.
    pub fn cycle_type(&self) -> Partition {
        let mut lengths: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    /// Sign of the permutation, (-1)^(n - #cycles).
    pub fn parity(&self) -> i32 {
        if (self.degree() - self.cycles().len()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Cycle notation without fixed points, `()` for the identity.
    pub fn cycle_string(&self) -> String {
        let parts: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let inner: Vec<String> = c.iter().map(usize::to_string).collect();
                format!("({})", inner.join(" "))
            })
            .collect();
        if parts.is_empty() {
            "()".to_string()
        } else {
            parts.concat()
        }
    }

    /// Parses `[2,3,1]` (one-line form) or `(1 2 3)(4 5)` (cycle form). The
    /// degree is taken from the one-line form, or must be supplied for cycle
    /// form via `n`.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Permutation> {
        let text = text.trim();
        let perr = |offset: usize, message: &str| Error::Parse { offset, message: message.to_string() };
        if let Some(body) = text.strip_prefix('[') {
            let body = body.strip_suffix(']').ok_or_else(|| perr(text.len(), "expected ']'"))?;
            let images = if body.trim().is_empty() {
                Vec::new()
            } else {
                body.split(',')
                    .map(|s| s.trim().parse::<usize>().map_err(|_| perr(1, "expected integer image")))
                    .collect::<Result<Vec<_>>>()?
            };
            let p = Permutation::new(images)?;
            if let Some(n) = n {
                if n != p.degree() {
                    return Err(Error::SizeMismatch { expected: n, found: p.degree() });
                }
            }
            return Ok(p);
        }
        if text.starts_with('(') {
            let mut cycles = Vec::new();
            let mut rest = text;
            let mut offset = 0;
            let mut max_point = 0;
            while !rest.is_empty() {
                let open = rest.strip_prefix('(').ok_or_else(|| perr(offset, "expected '('"))?;
                let close = open.find(')').ok_or_else(|| perr(offset, "unclosed cycle"))?;
                let cycle = open[..close]
                    .split(|ch: char| ch.is_whitespace() || ch == ',')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>().map_err(|_| perr(offset + 1, "expected integer point")))
                    .collect::<Result<Vec<_>>>()?;
                max_point = cycle.iter().copied().fold(max_point, usize::max);
                if !cycle.is_empty() {
                    cycles.push(cycle);
                }
                offset += close + 2;
                rest = open[close + 1..].trim_start();
            }
            let degree = n.unwrap_or(max_point);
            return Permutation::from_cycles(degree, &cycles);
        }
        Err(perr(0, "expected '[' or '('"))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.images.iter().map(usize::to_string).collect();
        write!(f, "[{}]", inner.join(","))
    }
}

/// All partitions of `n`, ascending lexicographically (so `[1^n]` first and
/// `[n]` last).
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out.reverse();
    out
}

pub fn is_partition_of(lambda: &[usize], n: usize) -> bool {
    lambda.iter().sum::<usize>() == n && lambda.iter().all(|&p| p > 0) && lambda.windows(2).all(|w| w[0] >= w[1])
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Number of permutations with the given cycle type: n! / Π_i i^{m_i} m_i!.
pub fn class_size(cycle_type: &[usize]) -> u64 {
    let n: usize = cycle_type.iter().sum();
    let mut z: u64 = 1;
    let mut counts: HashMap<usize, u64> = HashMap::new();
    for &len in cycle_type {
        *counts.entry(len).or_default() += 1;
    }
    for (&len, &m) in &counts {
        z *= (len as u64).pow(m as u32) * factorial(m as usize);
    }
    factorial(n) / z
}

fn check_degree(n: usize) -> Result<()> {
    if n == 0 || n > N_MAX {
        return Err(Error::Capability(format!("n = {n} outside 1..={N_MAX}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub cycle_type: Partition,
    pub representative: Permutation,
    pub size: u64,
}

/// Fully enumerated S_n.
#[derive(Debug, Clone)]
pub struct SymmetricGroup {
    n: usize,
    elements: Vec<Permutation>,
    classes: Vec<ConjugacyClass>,
}

impl SymmetricGroup {
    /// Enumerates S_n in lexicographic order of one-line forms (identity
    /// first).
    pub fn new(n: usize) -> Result<Self> {
        check_degree(n)?;
        let mut elements = Vec::with_capacity(factorial(n) as usize);
        let mut current: Vec<usize> = (1..=n).collect();
        loop {
            elements.push(Permutation { images: current.clone() });
            if !next_lexicographic(&mut current) {
                break;
            }
        }
        let classes = partitions(n)
            .into_iter()
            .map(|cycle_type| {
                let mut cycles = Vec::new();
                let mut next = 1;
                for &len in &cycle_type {
                    cycles.push((next..next + len).collect::<Vec<_>>());
                    next += len;
                }
                let representative = Permutation::from_cycles(n, &cycles).expect("disjoint cycles");
                let size = class_size(&cycle_type);
                ConjugacyClass { cycle_type, representative, size }
            })
            .collect();
        Ok(SymmetricGroup { n, elements, classes })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    /// Adjacent transpositions (k k+1), which generate the group.
    pub fn generators(&self) -> Vec<Permutation> {
        (1..self.n).map(|k| Permutation::transposition(self.n, k, k + 1).expect("valid")).collect()
    }
}

fn next_lexicographic(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).expect("exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Irreducible characters of S_n, rows indexed by partitions λ (descending
/// lexicographic, trivial irrep `[n]` first), columns by cycle types in the
/// order of [`SymmetricGroup::classes`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterTable {
    n: usize,
    irreps: Vec<Partition>,
    classes: Vec<Partition>,
    class_sizes: Vec<u64>,
    values: Vec<Vec<i64>>,
}

impl CharacterTable {
    /// Computes the table by the Murnaghan–Nakayama rule.
    pub fn new(n: usize) -> Result<Self> {
        check_degree(n)?;
        let classes = partitions(n);
        let mut irreps = classes.clone();
        irreps.reverse();
        let class_sizes = classes.iter().map(|c| class_size(c)).collect();
        let mut memo = HashMap::new();
        let values = irreps
            .iter()
            .map(|lambda| classes.iter().map(|rho| mn_character(lambda, rho, &mut memo)).collect())
            .collect();
        Ok(CharacterTable { n, irreps, classes, class_sizes, values })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn irreps(&self) -> &[Partition] {
        &self.irreps
    }

    pub fn classes(&self) -> &[Partition] {
        &self.classes
    }

    pub fn class_sizes(&self) -> &[u64] {
        &self.class_sizes
    }

    pub fn row(&self, lambda: &[usize]) -> Result<&[i64]> {
        let i = self.irrep_index(lambda)?;
        Ok(&self.values[i])
    }

    fn irrep_index(&self, lambda: &[usize]) -> Result<usize> {
        self.irreps.iter().position(|l| l == lambda).ok_or_else(|| Error::InvalidPartition(lambda.to_vec()))
    }

    /// χ_λ on the class of the given cycle type.
    pub fn value(&self, lambda: &[usize], cycle_type: &[usize]) -> Result<i64> {
        let i = self.irrep_index(lambda)?;
        let j = self
            .classes
            .iter()
            .position(|c| c == cycle_type)
            .ok_or_else(|| Error::InvalidPartition(cycle_type.to_vec()))?;
        Ok(self.values[i][j])
    }

    pub fn character(&self, lambda: &[usize], p: &Permutation) -> Result<i64> {
        if p.degree() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, found: p.degree() });
        }
        self.value(lambda, &p.cycle_type())
    }

    /// Dimension of the irrep, χ_λ(identity).
    pub fn dimension(&self, lambda: &[usize]) -> Result<usize> {
        Ok(self.row(lambda)?[0] as usize)
    }
}

type MnMemo = HashMap<(Vec<usize>, Vec<usize>), i64>;

/// χ_λ(ρ) by removing border strips of length ρ_1 recursively; strips are
/// found on the β-set (first-column hook lengths) of λ.
fn mn_character(lambda: &[usize], rho: &[usize], memo: &mut MnMemo) -> i64 {
    let Some((&r, rest)) = rho.split_first() else {
        return if lambda.is_empty() { 1 } else { 0 };
    };
    let key = (lambda.to_vec(), rho.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let len = lambda.len();
    let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let crossed = beta.iter().filter(|&&x| x > target && x < b).count();
        let sign = if crossed % 2 == 0 { 1 } else { -1 };
        let mut next = beta.clone();
        next[i] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let reduced: Vec<usize> = next.iter().enumerate().map(|(j, &x)| x - (len - 1 - j)).filter(|&p| p > 0).collect();
        total += sign * mn_character(&reduced, rest, memo);
    }
    memo.insert(key, total);
    total
}

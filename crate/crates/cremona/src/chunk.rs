//! Chunks: finite pointed sets with a partial multiplication law.
//!
//! A chunk abstracts a finite slice of a group: elements, a basepoint, and
//! the triples (x, y, z) with xy = z whenever the product stays inside the
//! slice. Maps into symmetric groups are graded by how far they are from
//! multiplicative (the defect) and how well they separate distinct elements;
//! tiny instances admit exhaustive searches for the least degree realizing a
//! given quality, and Folner sets of an ambient group convert directly into
//! high-quality permutation models of their generator chunk.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::birat::CremonaElement;
use crate::error::{Error, Result};
use crate::sofic::{hamming_slices, HammingFrac, PermutationRep};

/// A finite pointed set with a functional partial law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chunk {
    labels: Vec<String>,
    basepoint: usize,
    law: BTreeMap<(usize, usize), usize>,
}

/// Check functionality and basepoint membership and build the chunk.
pub fn validate_chunk(
    labels: Vec<String>,
    basepoint: usize,
    triples: &[(usize, usize, usize)],
) -> Result<Chunk> {
    let len = labels.len();
    if basepoint >= len {
        return Err(Error::MissingBasepoint { basepoint, len });
    }
    let mut seen = HashSet::new();
    for name in &labels {
        if !seen.insert(name.as_str()) {
            return Err(Error::InvalidChunk(format!("duplicate element name {name}")));
        }
    }
    let mut law = BTreeMap::new();
    for &(x, y, z) in triples {
        for idx in [x, y, z] {
            if idx >= len {
                return Err(Error::IndexOutOfRange { index: idx, len });
            }
        }
        if let Some(&prev) = law.get(&(x, y)) {
            if prev != z {
                return Err(Error::NotFunctional { x, y, z1: prev, z2: z });
            }
        } else {
            law.insert((x, y), z);
        }
    }
    Ok(Chunk {
        labels,
        basepoint,
        law,
    })
}

impl Chunk {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    /// The product xy when the law defines it.
    pub fn product(&self, x: usize, y: usize) -> Option<usize> {
        self.law.get(&(x, y)).copied()
    }

    /// All law triples (x, y, xy), sorted.
    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        self.law.iter().map(|(&(x, y), &z)| (x, y, z)).collect()
    }
}

impl fmt::Display for Chunk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "elements: {}", self.labels.join(" "))?;
        writeln!(f, "basepoint: {}", self.labels[self.basepoint])?;
        for ((x, y), z) in &self.law {
            writeln!(
                f,
                "{} {} {}",
                self.labels[*x], self.labels[*y], self.labels[*z]
            )?;
        }
        Ok(())
    }
}

/// Parse the chunk file format: an `elements:` line of whitespace-separated
/// names, a `basepoint:` line, then one named triple per line. Blank lines
/// and `#` comments are skipped.
pub fn parse_chunk(src: &str) -> Result<Chunk> {
    let mut labels: Option<Vec<String>> = None;
    let mut basepoint: Option<String> = None;
    let mut triples: Vec<(usize, usize, usize)> = Vec::new();
    let mut offset = 0usize;
    for line in src.split_inclusive('\n') {
        let start = offset;
        offset += line.len();
        let text = line.trim_end_matches('\n');
        let body = match text.find('#') {
            Some(pos) => &text[..pos],
            None => text,
        };
        if body.trim().is_empty() {
            continue;
        }
        let span = crate::error::Span::new(start, start + body.trim_end().len());
        let syntax = |message: String| Error::Syntax { span, message };
        if let Some(rest) = body.trim().strip_prefix("elements:") {
            let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if names.is_empty() {
                return Err(syntax("empty element list".into()));
            }
            labels = Some(names);
        } else if let Some(rest) = body.trim().strip_prefix("basepoint:") {
            basepoint = Some(rest.trim().to_string());
        } else {
            let labels = labels
                .as_ref()
                .ok_or_else(|| syntax("triple before the elements line".into()))?;
            let parts: Vec<&str> = body.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(syntax(format!(
                    "expected three element names, found {}",
                    parts.len()
                )));
            }
            let mut idx = [0usize; 3];
            for (slot, name) in idx.iter_mut().zip(&parts) {
                *slot = labels
                    .iter()
                    .position(|l| l == name)
                    .ok_or_else(|| syntax(format!("unknown element {name}")))?;
            }
            triples.push((idx[0], idx[1], idx[2]));
        }
    }
    let labels = labels.ok_or_else(|| Error::InvalidChunk("missing elements line".into()))?;
    let basepoint = basepoint.ok_or_else(|| Error::InvalidChunk("missing basepoint line".into()))?;
    let basepoint = labels
        .iter()
        .position(|l| l == &basepoint)
        .ok_or(Error::MissingBasepoint {
            basepoint: usize::MAX,
            len: labels.len(),
        })?;
    validate_chunk(labels, basepoint, &triples)
}

/// The chunk of a finite set of certified elements: products are computed
/// exactly and kept when they land back in the set. Duplicates under
/// equality of maps are merged; the identity must be present.
pub fn chunk_of_elements(elems: &[CremonaElement]) -> Result<Chunk> {
    let mut reps: Vec<&CremonaElement> = Vec::new();
    for e in elems {
        let mut fresh = true;
        for r in &reps {
            if e.forward().tuple_eq(r.forward())? {
                fresh = false;
                break;
            }
        }
        if fresh {
            reps.push(e);
        }
    }
    let mut basepoint = None;
    for (i, r) in reps.iter().enumerate() {
        if r.is_identity()? {
            basepoint = Some(i);
            break;
        }
    }
    let basepoint = basepoint.ok_or(Error::MissingIdentity)?;
    let mut triples = Vec::new();
    for (i, a) in reps.iter().enumerate() {
        for (j, b) in reps.iter().enumerate() {
            let prod = a.compose(b)?;
            for (k, c) in reps.iter().enumerate() {
                if prod.forward().tuple_eq(c.forward())? {
                    triples.push((i, j, k));
                    break;
                }
            }
        }
    }
    let labels = reps.iter().map(|r| r.forward().to_string()).collect();
    validate_chunk(labels, basepoint, &triples)
}

/// The chunk of a subset of a finite group given by its full multiplication
/// table: `table[a][b]` is the product, `identity` the neutral element, and
/// `subset` the chosen member indices.
pub fn chunk_of_subtable(table: &[Vec<usize>], identity: usize, subset: &[usize]) -> Result<Chunk> {
    let order = table.len();
    let mut members = Vec::new();
    for &g in subset {
        if g >= order {
            return Err(Error::IndexOutOfRange { index: g, len: order });
        }
        if !members.contains(&g) {
            members.push(g);
        }
    }
    let basepoint = members
        .iter()
        .position(|&g| g == identity)
        .ok_or(Error::MissingIdentity)?;
    let mut triples = Vec::new();
    for (i, &a) in members.iter().enumerate() {
        for (j, &b) in members.iter().enumerate() {
            let prod = table[a][b];
            if let Some(k) = members.iter().position(|&c| c == prod) {
                triples.push((i, j, k));
            }
        }
    }
    let labels = members.iter().map(|g| g.to_string()).collect();
    validate_chunk(labels, basepoint, &triples)
}

/// The multiplication table of Z/n, for building cyclic test chunks.
pub fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

/// An assignment of a permutation of [0, n) to every chunk element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMap {
    n: usize,
    perms: Vec<Vec<u32>>,
}

impl FiniteMap {
    /// Wrap raw permutation arrays, checking that each is a bijection of a
    /// common [0, n).
    pub fn from_perms(perms: Vec<Vec<u32>>) -> Result<Self> {
        let n = perms.first().map_or(0, Vec::len);
        for p in &perms {
            if p.len() != n {
                return Err(Error::SizeMismatch(p.len(), n));
            }
            let mut seen = vec![false; n];
            for &img in p {
                if (img as usize) >= n || seen[img as usize] {
                    return Err(Error::InvalidChunk("assignment is not a bijection".into()));
                }
                seen[img as usize] = true;
            }
        }
        Ok(FiniteMap { n, perms })
    }

    /// Reuse the verified permutation models built from element evaluation.
    pub fn from_reps(reps: &[PermutationRep]) -> Result<Self> {
        FiniteMap::from_perms(reps.iter().map(|r| r.perm().to_vec()).collect())
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn perm(&self, i: usize) -> &[u32] {
        &self.perms[i]
    }
}

fn compose_arrays(outer: &[u32], inner: &[u32]) -> Vec<u32> {
    inner.iter().map(|&x| outer[x as usize]).collect()
}

fn identity_array(n: usize) -> Vec<u32> {
    (0..n as u32).collect()
}

/// True iff the basepoint maps to the identity and every law triple has
/// defect at most eps.
pub fn is_eps_morphism(f: &FiniteMap, e: &Chunk, eps: HammingFrac) -> bool {
    assert_eq!(f.len(), e.size(), "map must cover the chunk");
    if f.perm(e.basepoint()) != identity_array(f.degree()) {
        return false;
    }
    e.triples().iter().all(|&(x, y, z)| {
        let prod = compose_arrays(f.perm(x), f.perm(y));
        hamming_slices(f.perm(z), &prod) <= eps
    })
}

/// True iff every pair of distinct elements maps to permutations at Hamming
/// distance at least `level`.
pub fn is_expansive(f: &FiniteMap, e: &Chunk, level: HammingFrac) -> bool {
    assert_eq!(f.len(), e.size(), "map must cover the chunk");
    for i in 0..e.size() {
        for j in (i + 1)..e.size() {
            if hamming_slices(f.perm(i), f.perm(j)) < level {
                return false;
            }
        }
    }
    true
}

fn all_perms(n: usize) -> Vec<Vec<u32>> {
    let mut a = identity_array(n);
    let mut out = vec![a.clone()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

fn factorial_f64(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Assignment order: basepoint first, then descending number of law triples
/// an element appears in (most constrained first).
fn constraint_order(e: &Chunk) -> Vec<usize> {
    let mut degree = vec![0usize; e.size()];
    for (x, y, z) in e.triples() {
        degree[x] += 1;
        degree[y] += 1;
        degree[z] += 1;
    }
    let mut rest: Vec<usize> = (0..e.size()).filter(|&i| i != e.basepoint()).collect();
    rest.sort_by_key(|&i| (std::cmp::Reverse(degree[i]), i));
    let mut order = vec![e.basepoint()];
    order.extend(rest);
    order
}

struct Searcher<'a> {
    chunk: &'a Chunk,
    perms: Vec<Vec<u32>>,
    order: Vec<usize>,
    eps: HammingFrac,
    level: HammingFrac,
    distinct: bool,
    assign: Vec<Option<usize>>,
}

impl Searcher<'_> {
    fn consistent(&self, newcomer: usize) -> bool {
        let perm_of = |i: usize| self.assign[i].map(|k| &self.perms[k]);
        let new_perm = perm_of(newcomer).unwrap();
        for i in 0..self.chunk.size() {
            if i == newcomer {
                continue;
            }
            let Some(other) = perm_of(i) else { continue };
            if self.distinct && other == new_perm {
                return false;
            }
            if hamming_slices(other, new_perm) < self.level {
                return false;
            }
        }
        for (x, y, z) in self.chunk.triples() {
            if x != newcomer && y != newcomer && z != newcomer {
                continue;
            }
            let (Some(fx), Some(fy), Some(fz)) = (perm_of(x), perm_of(y), perm_of(z)) else {
                continue;
            };
            let prod = compose_arrays(fx, fy);
            if hamming_slices(fz, &prod) > self.eps {
                return false;
            }
        }
        true
    }

    fn solve(&mut self, pos: usize) -> bool {
        if pos == self.order.len() {
            return true;
        }
        let element = self.order[pos];
        for k in 0..self.perms.len() {
            self.assign[element] = Some(k);
            if self.consistent(element) && self.solve(pos + 1) {
                return true;
            }
        }
        self.assign[element] = None;
        false
    }
}

fn search_maps(
    e: &Chunk,
    n: usize,
    eps: HammingFrac,
    level: HammingFrac,
    distinct: bool,
) -> Option<FiniteMap> {
    let perms = all_perms(n);
    let order = constraint_order(e);
    let mut s = Searcher {
        chunk: e,
        perms,
        order,
        eps,
        level,
        distinct,
        assign: vec![None; e.size()],
    };
    // the basepoint is pinned to the identity permutation (index 0)
    s.assign[e.basepoint()] = Some(0);
    if !s.consistent(e.basepoint()) || !s.solve(1) {
        return None;
    }
    let perms: Vec<Vec<u32>> = s
        .assign
        .iter()
        .map(|k| s.perms[k.unwrap()].clone())
        .collect();
    Some(FiniteMap { n, perms })
}

fn guard_search_space(e: &Chunk, n: usize, cap: f64) -> Result<()> {
    let free = e.size().saturating_sub(1) as i32;
    let estimate = factorial_f64(n).powi(free);
    if estimate > cap {
        return Err(Error::SearchSpaceExceeded { estimate, cap });
    }
    Ok(())
}

/// Default cap on the brute-force assignment count (n!)^(|E|-1).
pub const DEFAULT_SEARCH_CAP: f64 = 1e8;

fn sub_or_zero(x: HammingFrac) -> HammingFrac {
    if x >= HammingFrac::one() {
        HammingFrac::zero()
    } else {
        HammingFrac::one() - x
    }
}

/// The least n <= n_max admitting a (1 - 1/r)-expansive (1/r)-morphism of
/// the chunk into Sym_n, by exhaustive search. None when every degree up to
/// n_max fails.
pub fn sigma_upper(e: &Chunk, r: HammingFrac, n_max: usize, cap: f64) -> Result<Option<usize>> {
    assert!(!r.is_zero(), "quality must be positive");
    let eps = r.recip();
    let level = sub_or_zero(eps);
    for n in 1..=n_max {
        guard_search_space(e, n, cap)?;
        if let Some(map) = search_maps(e, n, eps, level, false) {
            if HammingFrac::from_integer(n as u64) < r {
                // dichotomy check: quality beyond the degree forces an exact
                // injective representation, since distances in Sym_n move in
                // steps of 1/n
                for (x, y, z) in e.triples() {
                    let prod = compose_arrays(map.perm(x), map.perm(y));
                    assert!(
                        hamming_slices(map.perm(z), &prod).is_zero(),
                        "quality beyond the degree must make defects vanish"
                    );
                }
                for i in 0..e.size() {
                    for j in (i + 1)..e.size() {
                        assert!(
                            hamming_slices(map.perm(i), map.perm(j)).is_one(),
                            "quality beyond the degree must separate fully"
                        );
                    }
                }
            }
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// An injective exact representation into some Sym_n with n <= n_max, or
/// None. Exactness means defect zero on every law triple.
pub fn injective_rep_search(e: &Chunk, n_max: usize, cap: f64) -> Result<Option<FiniteMap>> {
    for n in 1..=n_max {
        guard_search_space(e, n, cap)?;
        if let Some(map) = search_maps(e, n, HammingFrac::zero(), HammingFrac::zero(), true) {
            return Ok(Some(map));
        }
    }
    Ok(None)
}

type MulOracle = Box<dyn Fn(&[i64], &[i64]) -> Vec<i64>>;

/// A finite subset of an ambient group with small boundary under a
/// generator set, the raw material of the Folner-to-permutation
/// construction. Elements are integer vectors; the multiplication oracle is
/// total on the sampled domain and declared associative by the supplier.
pub struct FolnerWitness {
    mul: MulOracle,
    elements: Vec<Vec<i64>>,
    generators: Vec<Vec<i64>>,
    boundary: Vec<Vec<i64>>,
}

impl fmt::Debug for FolnerWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FolnerWitness")
            .field("elements", &self.elements.len())
            .field("generators", &self.generators.len())
            .field("boundary", &self.boundary.len())
            .finish()
    }
}

impl FolnerWitness {
    /// Build a witness from an oracle, a finite subset, and generators; the
    /// boundary SE - E is computed exactly.
    pub fn new(mul: MulOracle, elements: Vec<Vec<i64>>, generators: Vec<Vec<i64>>) -> Result<Self> {
        if elements.is_empty() || generators.is_empty() {
            return Err(Error::InvalidChunk(
                "witness needs a nonempty subset and generator set".into(),
            ));
        }
        let mut dedup = Vec::new();
        let mut seen = HashSet::new();
        for e in elements {
            if seen.insert(e.clone()) {
                dedup.push(e);
            }
        }
        let inside: HashSet<Vec<i64>> = seen;
        let mut gens = Vec::new();
        for g in generators {
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
        let mut boundary = Vec::new();
        let mut on_boundary = HashSet::new();
        for s in &gens {
            for x in &dedup {
                let sx = mul(s, x);
                if !inside.contains(&sx) && on_boundary.insert(sx.clone()) {
                    boundary.push(sx);
                }
            }
        }
        Ok(FolnerWitness {
            mul,
            elements: dedup,
            generators: gens,
            boundary,
        })
    }

    /// The box [0, side)^d in Z^d under vector addition.
    pub fn zd_box(d: usize, side: i64, generators: Vec<Vec<i64>>) -> Result<Self> {
        assert!(d >= 1 && side >= 1);
        for g in &generators {
            if g.len() != d {
                return Err(Error::InvalidChunk(format!(
                    "generator of arity {} in Z^{d}",
                    g.len()
                )));
            }
        }
        let mut elements = vec![vec![]];
        for _ in 0..d {
            let mut next = Vec::with_capacity(elements.len() * side as usize);
            for e in &elements {
                for c in 0..side {
                    let mut v = e.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            elements = next;
        }
        let mul: MulOracle = Box::new(|a: &[i64], b: &[i64]| {
            a.iter().zip(b).map(|(x, y)| x + y).collect()
        });
        FolnerWitness::new(mul, elements, generators)
    }

    pub fn set_size(&self) -> usize {
        self.elements.len()
    }

    pub fn boundary_size(&self) -> usize {
        self.boundary.len()
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn boundary(&self) -> &[Vec<i64>] {
        &self.boundary
    }
}

/// The verification record of a Folner-to-permutation run: exact counts
/// behind the three proof bounds.
#[derive(Debug, Clone)]
pub struct FolnerRecord {
    pub n: usize,
    pub boundary: usize,
    pub r: HammingFrac,
    /// Per generator, the proportion of points moved by left multiplication
    /// inside the set (each > 1 - 1/r).
    pub agreements: Vec<(usize, HammingFrac)>,
    /// Pairwise distances between generator permutations (each > 1 - 2/r).
    pub separations: Vec<(usize, usize, HammingFrac)>,
    /// Defects over the generator chunk's law triples (each < 3/r).
    pub defects: Vec<(usize, usize, usize, HammingFrac)>,
    /// The chunk of the generator set under the oracle.
    pub chunk: Chunk,
}

/// Turn a Folner witness into permutations of its subset: each generator
/// acts by left multiplication where that stays inside, extended to a
/// bijection in ascending order. Requires |SE - E| / |E| < 1/r; the record
/// verifies the separation and defect bounds this buys.
pub fn folner_to_sofic(w: &FolnerWitness, r: HammingFrac) -> Result<(FiniteMap, FolnerRecord)> {
    assert!(!r.is_zero(), "quality must be positive");
    let n = w.elements.len();
    let ratio = HammingFrac::new(w.boundary.len() as u64, n as u64);
    let bound = r.recip();
    if ratio >= bound {
        return Err(Error::WitnessTooSmall {
            ratio: ratio.to_string(),
            bound: bound.to_string(),
        });
    }
    let position: HashMap<&[i64], usize> = w
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_slice(), i))
        .collect();

    // identity detection: the unique idempotent of the generator set
    let identity = w
        .generators
        .iter()
        .position(|s| (w.mul)(s, s) == *s)
        .ok_or_else(|| Error::InvalidChunk("generator set must contain the identity".into()))?;
    let mut triples = Vec::new();
    for (i, a) in w.generators.iter().enumerate() {
        for (j, b) in w.generators.iter().enumerate() {
            let prod = (w.mul)(a, b);
            if let Some(k) = w.generators.iter().position(|c| *c == prod) {
                triples.push((i, j, k));
            }
        }
    }
    let labels = w
        .generators
        .iter()
        .map(|g| {
            let parts: Vec<String> = g.iter().map(i64::to_string).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let chunk = validate_chunk(labels, identity, &triples)?;

    let mut perms = Vec::new();
    let mut agreements = Vec::new();
    for (si, s) in w.generators.iter().enumerate() {
        let mut perm = vec![u32::MAX; n];
        let mut used = vec![false; n];
        let mut leftover = Vec::new();
        let mut inside = 0u64;
        for (xi, x) in w.elements.iter().enumerate() {
            let sx = (w.mul)(s, x);
            match position.get(sx.as_slice()) {
                Some(&img) => {
                    assert!(!used[img], "left multiplication must be injective");
                    used[img] = true;
                    perm[xi] = img as u32;
                    inside += 1;
                }
                None => leftover.push(xi),
            }
        }
        let mut free: Vec<usize> = (0..n).filter(|&i| !used[i]).collect();
        free.reverse();
        for xi in leftover {
            perm[xi] = free.pop().expect("leftover points pair up") as u32;
        }
        let agreement = HammingFrac::new(inside, n as u64);
        assert!(
            agreement > sub_or_zero(bound),
            "agreement {agreement} must beat 1 - 1/r"
        );
        agreements.push((si, agreement));
        perms.push(perm);
    }
    let map = FiniteMap::from_perms(perms)?;

    let mut separations = Vec::new();
    for i in 0..map.len() {
        for j in (i + 1)..map.len() {
            let dist = hamming_slices(map.perm(i), map.perm(j));
            assert!(
                dist > sub_or_zero(bound + bound),
                "separation {dist} must beat 1 - 2/r"
            );
            separations.push((i, j, dist));
        }
    }
    let mut defects = Vec::new();
    for (x, y, z) in chunk.triples() {
        let prod = compose_arrays(map.perm(x), map.perm(y));
        let defect = hamming_slices(map.perm(z), &prod);
        assert!(
            defect < bound + bound + bound,
            "defect {defect} must stay under 3/r"
        );
        defects.push((x, y, z, defect));
    }
    let record = FolnerRecord {
        n,
        boundary: w.boundary.len(),
        r,
        agreements,
        separations,
        defects,
        chunk,
    };
    Ok((map, record))
}

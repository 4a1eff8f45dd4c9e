//! Classification pipelines and their certificates: mass formulas, sharded
//! neighbor/glue/lift classification with checkpointing, covering radius,
//! design checks, census tables and the subtraction pipeline.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::catalog::{parse_catalog, write_atomic, CatalogRecord};
use crate::code::{known, LinearCode};
use crate::construct::{self, NeighborKind};
use crate::equiv;
use crate::error::{Error, Result};
use crate::gf2::rref_words;
use crate::perm::{self, PermGroup};

/// Number of distinct doubly even self-dual codes of length `n`:
/// `Π_{i=0}^{n/2−2} (2^i + 1)`.
pub fn mass(n: usize) -> Result<BigUint> {
    if n == 0 || !n.is_multiple_of(8) {
        return Err(Error::pre("doubly even self-dual codes need length divisible by 8"));
    }
    Ok((0..=(n / 2 - 2) as u32).map(|i| BigUint::from(2u32).pow(i) + 1u32).product())
}

/// Number of distinct self-dual codes of even length `n`:
/// `Π_{i=1}^{n/2−1} (2^i + 1)`.
pub fn self_dual_mass(n: usize) -> Result<BigUint> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::pre("self-dual codes need even positive length"));
    }
    Ok((1..(n / 2) as u32).map(|i| BigUint::from(2u32).pow(i) + 1u32).product())
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

/// Sum of orbit sizes `n!/#Aut(C)` against the expected mass.
#[derive(Clone, Debug)]
pub struct MassAccount {
    pub n: usize,
    pub expected: BigUint,
    /// `(canonical hash, orbit size)` per record.
    pub terms: Vec<(String, BigUint)>,
    pub total: BigUint,
}

impl MassAccount {
    pub fn new(n: usize, expected: BigUint) -> Self {
        MassAccount {
            n,
            expected,
            terms: Vec::new(),
            total: BigUint::zero(),
        }
    }

    pub fn add(&mut self, rec: &CatalogRecord) -> Result<()> {
        let fact = factorial(self.n);
        if (&fact % &rec.aut_order) != BigUint::zero() {
            return Err(Error::Invariant("automorphism order does not divide n!".into()));
        }
        let orbit = fact / &rec.aut_order;
        self.total += &orbit;
        self.terms.push((rec.canonical_hash.clone(), orbit));
        Ok(())
    }

    pub fn of_records(n: usize, expected: BigUint, recs: &[CatalogRecord]) -> Result<Self> {
        let mut acc = MassAccount::new(n, expected);
        for r in recs {
            acc.add(r)?;
        }
        Ok(acc)
    }

    pub fn is_complete(&self) -> bool {
        self.total == self.expected
    }

    pub fn deficit(&self) -> BigUint {
        if self.total >= self.expected {
            BigUint::zero()
        } else {
            &self.expected - &self.total
        }
    }

    pub fn incomplete_error(&self) -> Error {
        Error::Incomplete {
            deficit: self.deficit().to_string(),
            found: self.total.to_string(),
            expected: self.expected.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Neighbor,
    Glue,
    LiftChain,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Neighbor => "neighbor",
            Method::Glue => "glue",
            Method::LiftChain => "lift-chain",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "neighbor" | "neighbor-closure" => Ok(Method::Neighbor),
            "glue" => Ok(Method::Glue),
            "lift-chain" | "lift" => Ok(Method::LiftChain),
            _ => Err(Error::pre(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    /// Directory holding the resumable checkpoint file.
    pub checkpoint: Option<PathBuf>,
    /// Maximum number of shards processed in this run.
    pub budget: Option<u64>,
}

/// A complete classification.
#[derive(Clone, Debug)]
pub struct Classification {
    /// Sorted by fingerprint, then canonical generator rows.
    pub records: Vec<CatalogRecord>,
    pub account: MassAccount,
    pub shards: u64,
}

fn sort_records(recs: &mut [CatalogRecord]) {
    recs.sort_by(|a, b| a.fingerprint.cmp(&b.fingerprint).then_with(|| a.code.rows().cmp(b.code.rows())));
}

fn short(h: &str) -> &str {
    &h[..16.min(h.len())]
}

const CHECKPOINT_FILE: &str = "checkpoint.cat";

struct Driver {
    n: usize,
    tag: String,
    expected: BigUint,
    records: Vec<CatalogRecord>,
    index: HashMap<String, usize>,
    total: BigUint,
    next: usize,
    checkpoint: Option<PathBuf>,
}

impl Driver {
    fn new(n: usize, tag: String, expected: BigUint, checkpoint: Option<&Path>) -> Result<Self> {
        let mut d = Driver {
            n,
            tag,
            expected,
            records: Vec::new(),
            index: HashMap::new(),
            total: BigUint::zero(),
            next: 0,
            checkpoint: checkpoint.map(|p| p.join(CHECKPOINT_FILE)),
        };
        if let Some(path) = d.checkpoint.clone() {
            if path.exists() {
                d.resume(&path)?;
            }
        }
        Ok(d)
    }

    fn resume(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path)?;
        let header = text
            .lines()
            .next()
            .ok_or_else(|| Error::parse(1, "empty checkpoint"))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 5 || toks[0] != "#progress" {
            return Err(Error::parse(1, "checkpoint header must read '#progress <tag> <n> <next>'"));
        }
        if toks[1] != self.tag || toks[2] != self.n.to_string() {
            return Err(Error::pre(format!(
                "checkpoint belongs to {} at length {}, not {} at length {}",
                toks[1], toks[2], self.tag, self.n
            )));
        }
        let next: usize = toks[3].parse().map_err(|_| Error::parse(1, "invalid shard counter"))?;
        let _ = toks[4];
        let lines = parse_catalog(&text)?;
        let recs: Vec<CatalogRecord> = lines
            .par_iter()
            .map(|l| {
                let code = LinearCode::from_generators(l.n, l.rows.clone())?;
                let rec = CatalogRecord::from_code(&code, l.provenance.clone())?;
                if rec.canonical_hash != l.canonical_hash {
                    return Err(Error::Invariant("checkpoint record does not reproduce its canonical hash".into()));
                }
                Ok(rec)
            })
            .collect::<Result<_>>()?;
        for r in recs {
            self.push(r);
        }
        self.next = next;
        Ok(())
    }

    fn push(&mut self, rec: CatalogRecord) {
        self.total += factorial(self.n) / &rec.aut_order;
        self.index.insert(rec.canonical_hash.clone(), self.records.len());
        self.records.push(rec);
    }

    fn save(&self) -> Result<()> {
        let Some(path) = &self.checkpoint else {
            return Ok(());
        };
        let mut text = format!("#progress {} {} {} shards\n", self.tag, self.n, self.next);
        for r in &self.records {
            text.push_str(&r.to_line());
            text.push('\n');
        }
        write_atomic(path, &text)
    }

    fn done(&self) -> bool {
        self.total >= self.expected
    }

    /// Canonicalizes candidates in parallel and appends the new classes
    /// in candidate order.
    fn absorb(&mut self, cands: Vec<(LinearCode, String)>) -> Result<()> {
        let forms: Vec<equiv::CanonicalForm> = cands
            .par_iter()
            .map(|(c, _)| equiv::canonical_form(c))
            .collect::<Result<_>>()?;
        let mut fresh = Vec::new();
        let mut seen_now: HashMap<String, ()> = HashMap::new();
        for (cf, (_, prov)) in forms.into_iter().zip(cands) {
            if self.index.contains_key(&cf.hash) || seen_now.contains_key(&cf.hash) {
                continue;
            }
            seen_now.insert(cf.hash.clone(), ());
            fresh.push((cf, prov));
        }
        let recs: Vec<CatalogRecord> = fresh
            .into_par_iter()
            .map(|(cf, prov)| CatalogRecord::from_canonical(cf, prov))
            .collect::<Result<_>>()?;
        for r in recs {
            self.push(r);
        }
        if self.total > self.expected {
            return Err(Error::Invariant(format!(
                "mass total {} exceeds the expected {}",
                self.total, self.expected
            )));
        }
        Ok(())
    }

    /// Runs shards until the mass is reached, the shards run out, or the
    /// budget is spent.
    fn run(
        &mut self,
        budget: Option<u64>,
        mut shard: impl FnMut(&Driver, usize) -> Result<Option<Vec<(LinearCode, String)>>>,
    ) -> Result<u64> {
        let mut spent = 0u64;
        while !self.done() {
            if budget.is_some_and(|b| spent >= b) {
                break;
            }
            let Some(cands) = shard(self, self.next)? else {
                break;
            };
            self.absorb(cands)?;
            self.next += 1;
            spent += 1;
            self.save()?;
        }
        Ok(spent)
    }

    fn finish(self, shards: u64) -> Result<Classification> {
        let mut records = self.records;
        sort_records(&mut records);
        let account = MassAccount::of_records(self.n, self.expected, &records)?;
        if !account.is_complete() {
            return Err(account.incomplete_error());
        }
        Ok(Classification {
            records,
            account,
            shards,
        })
    }
}

fn neighbor_closure(
    n: usize,
    kind: NeighborKind,
    seed: LinearCode,
    expected: BigUint,
    opts: &ClassifyOptions,
) -> Result<Classification> {
    let tag = match kind {
        NeighborKind::DoublyEven => "neighbor",
        NeighborKind::SelfDual => "neighbor-sd",
    };
    let mut drv = Driver::new(n, tag.into(), expected, opts.checkpoint.as_deref())?;
    if drv.records.is_empty() {
        drv.push(CatalogRecord::from_code(&seed, "seed")?);
        drv.save()?;
    }
    let shards = drv.run(opts.budget, |d, i| {
        let Some(parent) = d.records.get(i) else {
            return Ok(None);
        };
        let prov = format!("neighbor:{}", short(&parent.canonical_hash));
        let ns = construct::neighbor_step_reduced(&parent.code, Some(&parent.aut_gens), kind)?;
        Ok(Some(ns.into_iter().map(|c| (c, prov.clone())).collect()))
    })?;
    drv.finish(shards)
}

/// All self-dual codes (singly and doubly even) of even length `n`.
pub fn classify_self_dual(n: usize, opts: &ClassifyOptions) -> Result<Classification> {
    let expected = self_dual_mass(n)?;
    neighbor_closure(n, NeighborKind::SelfDual, known::i2_power(n / 2), expected, opts)
}

/// Doubly even codes of length `m` containing `1`, by dimension, for the
/// dimension range a glue with the other part of length `other` needs.
fn glue_inputs(m: usize, dims: std::ops::RangeInclusive<usize>) -> Result<BTreeMap<usize, Vec<LinearCode>>> {
    let top = classify_doubly_even(m, Method::Neighbor, &ClassifyOptions::default())?;
    let codes: Vec<LinearCode> = top.records.into_iter().map(|r| r.code).collect();
    let all = construct::doubly_even_subcodes(&codes, *dims.start())?;
    Ok(all.into_iter().filter(|(d, _)| dims.contains(d)).collect())
}

/// Glue pairs `(C₁ of length 8, C₂ of length n − 8)` with
/// `dim C₂ = dim C₁ + (n − 16)/2`.
fn glue_pairs(n: usize, c1_dims: std::ops::RangeInclusive<usize>) -> Result<Vec<(LinearCode, LinearCode)>> {
    let shift = (n - 16) / 2;
    let short_side = glue_inputs(8, c1_dims.clone())?;
    let long_dims = (c1_dims.start() + shift)..=(c1_dims.end() + shift);
    let long_side = glue_inputs(n - 8, long_dims)?;
    let mut pairs = Vec::new();
    for (d1, c1s) in &short_side {
        let Some(c2s) = long_side.get(&(d1 + shift)) else {
            continue;
        };
        for c1 in c1s {
            for c2 in c2s {
                pairs.push((c1.clone(), c2.clone()));
            }
        }
    }
    Ok(pairs)
}

fn glue_shard(c1: &LinearCode, c2: &LinearCode, a4_zero_only: bool) -> Result<Vec<(LinearCode, String)>> {
    let prov = format!(
        "glue:{}+{}",
        short(&equiv::hash_code(c1)),
        short(&equiv::hash_code(c2))
    );
    let fam = construct::glue_family(c1, c2)?;
    let mut out = Vec::new();
    for d in fam {
        if a4_zero_only && d.weight_distribution()?.a(4) != 0 {
            continue;
        }
        out.push((d, prov.clone()));
    }
    Ok(out)
}

/// Classifies doubly even self-dual codes of length `n`, certified by the
/// mass formula. Lengths above 32 require an explicit shard budget.
pub fn classify_doubly_even(n: usize, method: Method, opts: &ClassifyOptions) -> Result<Classification> {
    let expected = mass(n)?;
    if n > 32 && opts.budget.is_none() {
        return Err(Error::pre("lengths above 32 need an explicit shard budget"));
    }
    match method {
        Method::Neighbor => neighbor_closure(n, NeighborKind::DoublyEven, known::e8_power(n / 8), expected, opts),
        Method::Glue => {
            if n < 16 {
                return Err(Error::pre("the glue method needs length at least 16"));
            }
            let pairs = glue_pairs(n, 1..=4)?;
            let mut drv = Driver::new(n, "glue".into(), expected, opts.checkpoint.as_deref())?;
            let shards = drv.run(opts.budget, |_, i| match pairs.get(i) {
                Some((c1, c2)) => glue_shard(c1, c2, false).map(Some),
                None => Ok(None),
            })?;
            drv.finish(shards)
        }
        Method::LiftChain => {
            // minimum weight 4: lifts of S ⊕ i2 for every self-dual S of length n − 4;
            // minimum weight 8 and up: glue with ⟨1⟩ of length 8
            let lower = classify_self_dual(n - 4, &ClassifyOptions::default())?;
            let pairs = if n >= 24 { glue_pairs(n, 1..=1)? } else { Vec::new() };
            let lifts: Vec<LinearCode> = lower.records.into_iter().map(|r| r.code).collect();
            let mut drv = Driver::new(n, "lift-chain".into(), expected, opts.checkpoint.as_deref())?;
            let shards = drv.run(opts.budget, |_, i| {
                if let Some(s) = lifts.get(i) {
                    let c = s.direct_sum(&known::i2())?;
                    let l = construct::bp_lift(&c)?;
                    return Ok(Some(vec![(l, format!("lift:{}", short(&equiv::hash_code(s))))]));
                }
                match pairs.get(i - lifts.len()) {
                    Some((c1, c2)) => glue_shard(c1, c2, true).map(Some),
                    None => Ok(None),
                }
            })?;
            drv.finish(shards)
        }
    }
}

/// Largest coset-leader weight and one vector attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringRadiusResult {
    pub radius: usize,
    pub witness: u64,
    /// Number of cosets per leader weight.
    pub leader_weights: Vec<u64>,
}

pub const MAX_REDUNDANCY: usize = 26;

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Covering radius by breadth-first layering of the syndrome space.
pub fn covering_radius(code: &LinearCode) -> Result<CoveringRadiusResult> {
    let n = code.n();
    let r = n - code.dim();
    if r > MAX_REDUNDANCY {
        return Err(Error::Budget {
            what: "syndrome space dimension".into(),
            limit: MAX_REDUNDANCY as u64,
        });
    }
    let h = code.dual().rows().to_vec();
    let cols: Vec<u32> = (0..n)
        .map(|j| h.iter().enumerate().fold(0u32, |a, (i, &row)| a | (((row >> j & 1) as u32) << i)))
        .collect();
    let size = 1usize << r;
    let mut dist = vec![u8::MAX; size];
    let mut via = vec![u8::MAX; size];
    dist[0] = 0;
    let mut frontier = vec![0u32];
    let mut layer = 0u8;
    let mut counts = vec![1u64];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &s in &frontier {
            for (j, &c) in cols.iter().enumerate() {
                let t = (s ^ c) as usize;
                if dist[t] == u8::MAX {
                    dist[t] = layer + 1;
                    via[t] = j as u8;
                    next.push(t as u32);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layer += 1;
        counts.push(next.len() as u64);
        frontier = next;
    }
    if counts.iter().sum::<u64>() != size as u64 {
        return Err(Error::Invariant("syndrome space not fully reached".into()));
    }
    let radius = layer as usize;
    let mut s = *frontier.iter().min().unwrap_or(&0) as usize;
    let mut witness = 0u64;
    while s != 0 {
        let j = via[s] as usize;
        witness ^= 1 << j;
        s ^= cols[j] as usize;
    }
    let sphere: BigUint = (0..=radius).map(|t| binomial(n, t)).sum();
    if sphere < BigUint::one() << r {
        return Err(Error::Invariant("covering radius violates the sphere-covering bound".into()));
    }
    Ok(CoveringRadiusResult {
        radius,
        witness,
        leader_weights: counts,
    })
}

/// `λ` when every coordinate lies in exactly `λ` words of weight `w`.
pub fn design_check(code: &LinearCode, w: usize) -> Result<Option<u64>> {
    let words = code.codewords_of_weight(w)?;
    let mut deg = vec![0u64; code.n()];
    for &x in &words {
        for (i, d) in deg.iter_mut().enumerate() {
            *d += x >> i & 1;
        }
    }
    let lambda = deg[0];
    if deg.iter().any(|&d| d != lambda) {
        return Ok(None);
    }
    if lambda * code.n() as u64 != words.len() as u64 * w as u64 {
        return Err(Error::Invariant("design counting identity fails".into()));
    }
    Ok(Some(lambda))
}

/// Dimension of the span of the weight-8 codewords.
pub fn weight8_subcode_dim(code: &LinearCode) -> Result<usize> {
    let mut words = code.codewords_of_weight(8)?;
    Ok(rref_words(&mut words, code.n()).len())
}

/// Both sides of the length-40 weight relations
/// `A8 = 285 + 24 A4` and `A12 = 21280 + 92 A4`.
pub fn eq1_check(code: &LinearCode) -> Result<bool> {
    if code.n() != 40 || !(code.is_self_dual() && code.is_doubly_even()) {
        return Err(Error::pre("the length-40 weight relations need a doubly even self-dual code of length 40"));
    }
    let wd = code.weight_distribution()?;
    let a4 = wd.a(4);
    Ok(wd.a(8) == 285 + 24 * a4 && wd.a(12) == 21280 + 92 * a4)
}

/// Census tables as TSV lines `table<TAB>key<TAB>count`.
pub fn census(records: &[CatalogRecord]) -> Result<String> {
    let mut a4: BTreeMap<u64, u64> = BTreeMap::new();
    let mut cov: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut aut: BTreeMap<BigUint, u64> = BTreeMap::new();
    let mut dims: BTreeMap<usize, u64> = BTreeMap::new();
    let mut types: BTreeMap<(usize, usize, usize), u64> = BTreeMap::new();
    let rows: Vec<_> = records
        .par_iter()
        .map(|r| {
            let cr = if r.n() - r.code.dim() <= MAX_REDUNDANCY {
                Some(covering_radius(&r.code)?.radius)
            } else {
                None
            };
            let dim8 = weight8_subcode_dim(&r.code)?;
            let group = PermGroup::new(r.n(), r.aut_gens.clone())?;
            let mut ts = Vec::new();
            let ord = &r.aut_order;
            for p in [3usize, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
                if (ord % BigUint::from(p)).is_zero() {
                    let census = perm::prime_order_types(&group, p, perm::DEFAULT_ELEMENT_BUDGET)?;
                    ts.extend(census.types.into_iter().map(|t| (t.p, t.c, t.f)));
                }
            }
            Ok((cr, dim8, ts))
        })
        .collect::<Result<_>>()?;
    for (r, (cr, dim8, ts)) in records.iter().zip(rows) {
        *a4.entry(r.a4).or_default() += 1;
        if let Some(cr) = cr {
            *cov.entry((r.min_weight, cr)).or_default() += 1;
        }
        *aut.entry(r.aut_order.clone()).or_default() += 1;
        *dims.entry(dim8).or_default() += 1;
        for t in ts {
            *types.entry(t).or_default() += 1;
        }
    }
    let mut out = String::new();
    for (k, v) in &a4 {
        writeln!(out, "a4\t{k}\t{v}").unwrap();
    }
    for ((d, r), v) in &cov {
        writeln!(out, "covering_radius\td={d},R={r}\t{v}").unwrap();
    }
    for (k, v) in &aut {
        writeln!(out, "aut_order\t{k}\t{v}").unwrap();
    }
    for ((p, c, f), v) in &types {
        writeln!(out, "prime_type\t{p}-({c},{f})\t{v}").unwrap();
    }
    for (k, v) in &dims {
        writeln!(out, "weight8_dim\t{k}\t{v}").unwrap();
    }
    Ok(out)
}

/// The two weight enumerators possible for an extremal self-dual code of
/// length 38.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum We38 {
    /// `A8 = 171`; no shadow vector of weight 3.
    We1,
    /// `A8 = 203`; shadow minimum weight 3.
    We2,
}

/// Classifies a length-38 extremal code both from `A8` and from its shadow.
pub fn we38_class(code: &LinearCode) -> Result<We38> {
    if code.n() != 38 || !code.is_self_dual() || code.min_weight()? < 8 {
        return Err(Error::pre("expected an extremal self-dual code of length 38"));
    }
    let by_a8 = match code.weight_distribution()?.a(8) {
        171 => We38::We1,
        203 => We38::We2,
        a => return Err(Error::Invariant(format!("length-38 extremal code with A8 = {a}"))),
    };
    let by_shadow = if code.shadow()?.shadow_min_weight() == 3 {
        We38::We2
    } else {
        We38::We1
    };
    if by_a8 != by_shadow {
        return Err(Error::Invariant("A8 and shadow disagree on the weight enumerator".into()));
    }
    Ok(by_a8)
}

/// Subtracts every admissible pair of every input code and returns the
/// inequivalent results of minimum weight at least `delta`.
pub fn subtraction_pipeline(inputs: &[CatalogRecord], delta: usize) -> Result<Vec<CatalogRecord>> {
    let mut cands = Vec::new();
    for rec in inputs {
        let pairs = construct::subtraction_pairs(&rec.code, delta)?;
        for (i, j) in pairs {
            let s = rec.code.subtract(i, j)?;
            if s.n() + 2 != rec.n() || s.min_weight()? < delta {
                return Err(Error::Invariant("admitted pair gave a low-weight subtraction".into()));
            }
            cands.push((s, format!("subtract:{}:{}:{}", short(&rec.canonical_hash), i + 1, j + 1)));
        }
    }
    equiv::dedup_with_provenance(cands)
}

/// The length-38 pipeline: extremal subtractions of length-40 codes with
/// `A4 ≤ 1`, each tagged with its weight enumerator.
pub fn extremal38_pipeline(catalog40: &[CatalogRecord]) -> Result<Vec<(CatalogRecord, We38)>> {
    for r in catalog40 {
        if r.n() != 40 || r.a4 > 1 || !(r.code.is_self_dual() && r.code.is_doubly_even()) {
            return Err(Error::pre("inputs must be doubly even self-dual of length 40 with A4 <= 1"));
        }
        construct::subtraction_candidates(&r.code)?;
    }
    subtraction_pipeline(catalog40, 8)?
        .into_iter()
        .map(|r| {
            let c = we38_class(&r.code)?;
            Ok((r, c))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_values() {
        assert_eq!(mass(8).unwrap(), BigUint::from(30u32));
        let ratio = mass(16).unwrap() / mass(8).unwrap();
        assert_eq!(ratio, BigUint::from(9u32 * 17 * 33 * 65));
        assert!(mass(12).is_err());
        assert_eq!(self_dual_mass(2).unwrap(), BigUint::one());
        assert_eq!(self_dual_mass(4).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn classify_small_lengths() {
        let c8 = classify_doubly_even(8, Method::Neighbor, &ClassifyOptions::default()).unwrap();
        assert_eq!(c8.records.len(), 1);
        assert!(c8.account.is_complete());
        let c16 = classify_doubly_even(16, Method::Neighbor, &ClassifyOptions::default()).unwrap();
        assert_eq!(c16.records.len(), 2);
        let g16 = classify_doubly_even(16, Method::Glue, &ClassifyOptions::default()).unwrap();
        let l16 = classify_doubly_even(16, Method::LiftChain, &ClassifyOptions::default()).unwrap();
        let hs = |c: &Classification| c.records.iter().map(|r| r.canonical_hash.clone()).collect::<Vec<_>>();
        assert_eq!(hs(&c16), hs(&g16));
        assert_eq!(hs(&c16), hs(&l16));
    }

    #[test]
    fn self_dual_counts() {
        // one class each at lengths 2, 4, 6 and two at length 8 (i2^4, e8)
        for (n, k) in [(2usize, 1usize), (4, 1), (6, 1), (8, 2), (10, 2), (12, 3)] {
            let c = classify_self_dual(n, &ClassifyOptions::default()).unwrap();
            assert_eq!(c.records.len(), k, "length {n}");
        }
    }

    #[test]
    fn budget_gives_incomplete_then_resume_completes() {
        let dir = tempfile::tempdir().unwrap();
        let opts = ClassifyOptions {
            checkpoint: Some(dir.path().to_path_buf()),
            budget: Some(1),
        };
        let err = classify_doubly_even(24, Method::Neighbor, &opts).unwrap_err();
        assert_eq!(err.exit_code(), 5);
        let resumed = classify_doubly_even(
            24,
            Method::Neighbor,
            &ClassifyOptions {
                checkpoint: Some(dir.path().to_path_buf()),
                budget: None,
            },
        )
        .unwrap();
        let fresh = classify_doubly_even(24, Method::Neighbor, &ClassifyOptions::default()).unwrap();
        let hs = |c: &Classification| c.records.iter().map(|r| r.to_line()).collect::<Vec<_>>();
        assert_eq!(hs(&resumed), hs(&fresh));
        let wrong = classify_doubly_even(
            24,
            Method::Glue,
            &ClassifyOptions {
                checkpoint: Some(dir.path().to_path_buf()),
                budget: None,
            },
        );
        assert!(wrong.is_err());
    }

    fn brute_covering_radius(code: &LinearCode) -> usize {
        let words = code.codewords().unwrap();
        (0..1u64 << code.n())
            .map(|x| words.iter().map(|&c| (x ^ c).count_ones()).min().unwrap() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn covering_radius_small_codes() {
        for c in [known::e8(), known::e8_power(2), known::d16_plus(), known::i2_power(3)] {
            let r = covering_radius(&c).unwrap();
            assert_eq!(r.radius, brute_covering_radius(&c));
            let words = c.codewords().unwrap();
            let d = words.iter().map(|&w| (w ^ r.witness).count_ones()).min().unwrap();
            assert_eq!(d as usize, r.radius);
        }
        assert_eq!(covering_radius(&known::e8()).unwrap().radius, 2);
        assert_eq!(covering_radius(&known::golay()).unwrap().radius, 4);
    }

    #[test]
    fn designs_and_weight8_dims() {
        assert_eq!(design_check(&known::golay(), 8).unwrap(), Some(253));
        assert_eq!(design_check(&known::e8(), 4).unwrap(), Some(7));
        assert_eq!(design_check(&known::e8(), 6).unwrap(), Some(0));
        assert_eq!(design_check(&known::e8().direct_sum(&known::i2_power(4)).unwrap(), 4).unwrap(), None);
        assert_eq!(weight8_subcode_dim(&known::golay()).unwrap(), 12);
        assert_eq!(weight8_subcode_dim(&known::e8_power(3)).unwrap(), 12);
        assert_eq!(weight8_subcode_dim(&known::i2_power(3)).unwrap(), 0);
    }

    #[test]
    fn eq1_on_simple_length_40_codes() {
        assert!(eq1_check(&known::e8_power(5)).unwrap());
        let l = construct::bp_lift(&known::i2_power(19)).unwrap();
        assert!(eq1_check(&l).unwrap());
        assert!(eq1_check(&known::golay()).is_err());
    }

    #[test]
    fn census_length_8() {
        let c8 = classify_doubly_even(8, Method::Neighbor, &ClassifyOptions::default()).unwrap();
        let t = census(&c8.records).unwrap();
        assert!(t.contains("aut_order\t1344\t1"));
        assert!(t.contains("a4\t14\t1"));
        let mut rev = c8.records.clone();
        rev.reverse();
        assert_eq!(census(&rev).unwrap(), t);
    }
}

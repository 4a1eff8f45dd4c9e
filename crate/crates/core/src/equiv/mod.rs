//! Permutation equivalence: design invariants, fingerprints, canonical
//! forms, automorphism groups and deduplication.

mod canon;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::catalog::CatalogRecord;
use crate::code::{LinearCode, WeightDistribution};
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

pub use canon::DEFAULT_NODE_BUDGET;

/// Cap on the number of codeword vertices in the incidence graph.
pub const DISTINGUISHING_CAP: usize = 50_000;

/// Weight whose codewords form the design matrix by default.
pub const DEFAULT_DESIGN_WEIGHT: usize = 8;

/// Largest possible minimum weight of a doubly even self-dual code of length `n`.
pub fn extremal_min_weight(n: usize) -> usize {
    4 * (n / 24) + 4
}

/// Gram matrix `MᵀM` of the 0/1 matrix whose rows are the weight-`w`
/// codewords, together with its entry set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesignInvariant {
    pub weight: usize,
    pub gram: Vec<Vec<u32>>,
    /// Entry set with the design constant removed for extremal codes.
    pub n_set: BTreeSet<u32>,
    pub unfiltered: BTreeSet<u32>,
    /// Constant removed from `n_set`, if any.
    pub removed: Option<u32>,
}

pub(crate) fn gram_of(n: usize, words: &[u64]) -> Vec<Vec<u32>> {
    let mut g = vec![vec![0u32; n]; n];
    let mut supp = Vec::with_capacity(n);
    for &w in words {
        supp.clear();
        let mut rest = w;
        while rest != 0 {
            supp.push(rest.trailing_zeros() as usize);
            rest &= rest - 1;
        }
        for (a, &i) in supp.iter().enumerate() {
            g[i][i] += 1;
            for &j in &supp[a + 1..] {
                g[i][j] += 1;
                g[j][i] += 1;
            }
        }
    }
    g
}

pub fn design_invariant(code: &LinearCode, w: usize) -> Result<DesignInvariant> {
    let words = code.codewords_of_weight(w)?;
    let gram = gram_of(code.n(), &words);
    let unfiltered: BTreeSet<u32> = gram.iter().flatten().copied().collect();
    let extremal = code.is_self_dual()
        && code.is_doubly_even()
        && code.min_weight()? == extremal_min_weight(code.n())
        && w == extremal_min_weight(code.n());
    // for extremal codes the words of minimum weight form a 1-design; its
    // replication number is the constant diagonal and is dropped from N
    let removed = if extremal {
        let d = gram[0][0];
        gram.iter().enumerate().all(|(i, r)| r[i] == d).then_some(d)
    } else {
        None
    };
    let mut n_set = unfiltered.clone();
    if let Some(d) = removed {
        n_set.remove(&d);
    }
    Ok(DesignInvariant {
        weight: w,
        gram,
        n_set,
        unfiltered,
        removed,
    })
}

/// Cheap equivalence invariant: automorphism order (optional), `A_4`, the
/// extremes and size of `N(C)`, plus the full weight distribution and the
/// sorted multiset of sorted Gram rows.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub aut_order: Option<BigUint>,
    pub a4: u64,
    pub max_n: u32,
    pub min_n: u32,
    pub card_n: usize,
    pub weights: Vec<u64>,
    pub gram_rows: Vec<Vec<u32>>,
}

impl Fingerprint {
    pub fn without_aut(&self) -> Fingerprint {
        Fingerprint {
            aut_order: None,
            ..self.clone()
        }
    }
}

fn fingerprint_parts(code: &LinearCode) -> Result<Fingerprint> {
    let wd: &WeightDistribution = code.weight_distribution()?;
    let di = design_invariant(code, DEFAULT_DESIGN_WEIGHT)?;
    let mut gram_rows: Vec<Vec<u32>> = di
        .gram
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.sort_unstable();
            r
        })
        .collect();
    gram_rows.sort();
    Ok(Fingerprint {
        aut_order: None,
        a4: wd.a(4),
        max_n: di.n_set.iter().next_back().copied().unwrap_or(0),
        min_n: di.n_set.iter().next().copied().unwrap_or(0),
        card_n: di.n_set.len(),
        weights: wd.counts().to_vec(),
        gram_rows,
    })
}

/// Fingerprint without the automorphism order.
pub fn fingerprint_key(code: &LinearCode) -> Result<Fingerprint> {
    fingerprint_parts(code)
}

/// Full fingerprint including `#Aut(C)`.
pub fn fingerprint(code: &LinearCode) -> Result<Fingerprint> {
    let mut fp = fingerprint_parts(code)?;
    fp.aut_order = Some(canonical_form(code)?.aut_order());
    Ok(fp)
}

/// Codewords of the two smallest nonzero weights, or of the smallest
/// weight alone when both together exceed the cap.
pub fn distinguishing_words(code: &LinearCode) -> Result<Vec<u64>> {
    let wd = code.weight_distribution()?;
    let weights: Vec<(usize, u64)> = wd.nonzero_terms().filter(|&(w, _)| w > 0).take(2).collect();
    let cap = DISTINGUISHING_CAP as u64;
    let take = match weights.as_slice() {
        [] => vec![],
        [(w1, a1)] => {
            if *a1 > cap {
                return Err(Error::Budget {
                    what: "distinguishing codeword set".into(),
                    limit: cap,
                });
            }
            vec![*w1]
        }
        [(w1, a1), (w2, a2), ..] => {
            if a1 + a2 <= cap {
                vec![*w1, *w2]
            } else if *a1 <= cap {
                vec![*w1]
            } else {
                return Err(Error::Budget {
                    what: "distinguishing codeword set".into(),
                    limit: cap,
                });
            }
        }
    };
    let mut out = Vec::new();
    code.for_each_codeword(|c| {
        if take.contains(&(c.count_ones() as usize)) {
            out.push(c);
        }
    })?;
    out.sort_unstable_by(|a, b| a.count_ones().cmp(&b.count_ones()).then(a.cmp(b)));
    Ok(out)
}

fn coordinate_cells(n: usize, words: &[u64]) -> Vec<Vec<u32>> {
    let gram = gram_of(n, words);
    let mut by_key: BTreeMap<(u32, Vec<u32>), Vec<u32>> = BTreeMap::new();
    for (i, row) in gram.into_iter().enumerate() {
        let diag = row[i];
        let mut off: Vec<u32> = row
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &x)| x)
            .collect();
        off.sort_unstable();
        by_key.entry((diag, off)).or_default().push(i as u32);
    }
    by_key.into_values().collect()
}

/// Canonical representative of the permutation class of a code.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub code: LinearCode,
    /// Maps the input code onto `code`.
    pub relabeling: Permutation,
    /// Generators of the automorphism group of the input code.
    pub automorphisms: Vec<Permutation>,
    pub hash: String,
    pub nodes: u64,
}

impl CanonicalForm {
    pub fn aut_group(&self) -> PermGroup {
        PermGroup::new(self.code.n(), self.automorphisms.clone()).expect("generators share the code length")
    }

    pub fn aut_order(&self) -> BigUint {
        self.aut_group().order()
    }
}

/// Hex SHA-256 digest of the GM text of a (canonical) code.
pub fn hash_code(code: &LinearCode) -> String {
    let digest = Sha256::digest(code.to_gm().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn canonical_form(code: &LinearCode) -> Result<CanonicalForm> {
    canonical_form_with_budget(code, DEFAULT_NODE_BUDGET)
}

pub fn canonical_form_with_budget(code: &LinearCode, node_budget: u64) -> Result<CanonicalForm> {
    let n = code.n();
    let words = distinguishing_words(code)?;
    let cells = coordinate_cells(n, &words);
    let out = canon::search(n, code.rows(), &words, &cells, node_budget)?;
    let canon_code = LinearCode::from_generators(n, out.canonical_rows)?;
    debug_assert_eq!(code.permute(&out.labeling), canon_code);
    let hash = hash_code(&canon_code);
    Ok(CanonicalForm {
        code: canon_code,
        relabeling: out.labeling,
        automorphisms: out.automorphisms,
        hash,
        nodes: out.nodes,
    })
}

pub fn canonical_hash(code: &LinearCode) -> Result<String> {
    Ok(canonical_form(code)?.hash)
}

/// True iff `perm` maps `a` onto `b` (checked through RREF equality).
pub fn verify_witness(a: &LinearCode, b: &LinearCode, perm: &Permutation) -> bool {
    a.n() == b.n() && perm.degree() == a.n() && a.permute(perm) == *b
}

/// A permutation mapping `a` onto `b`, if one exists.
pub fn is_equivalent(a: &LinearCode, b: &LinearCode) -> Result<Option<Permutation>> {
    if a.n() != b.n() {
        return Err(Error::pre("codes of different lengths"));
    }
    if a.dim() != b.dim() || a.weight_distribution()? != b.weight_distribution()? {
        return Ok(None);
    }
    let ca = canonical_form(a)?;
    let cb = canonical_form(b)?;
    if ca.code != cb.code {
        return Ok(None);
    }
    let perm = ca.relabeling.then(&cb.relabeling.inverse());
    if !verify_witness(a, b, &perm) {
        return Err(Error::Invariant("equivalence witness failed verification".into()));
    }
    Ok(Some(perm))
}

pub fn automorphism_group(code: &LinearCode) -> Result<PermGroup> {
    let cf = canonical_form(code)?;
    for g in &cf.automorphisms {
        if code.permute(g) != *code {
            return Err(Error::Invariant("automorphism generator does not preserve the code".into()));
        }
    }
    Ok(cf.aut_group())
}

/// Reduces candidates to one canonical record per permutation class.
pub fn dedup(candidates: Vec<LinearCode>) -> Result<Vec<CatalogRecord>> {
    dedup_with_provenance(candidates.into_iter().map(|c| (c, "dedup".to_string())).collect())
}

/// As [`dedup`]; among equivalent inputs the lexicographically least
/// provenance is kept, so the result does not depend on input order.
pub fn dedup_with_provenance(candidates: Vec<(LinearCode, String)>) -> Result<Vec<CatalogRecord>> {
    if let Some(n) = candidates.first().map(|(c, _)| c.n()) {
        if candidates.iter().any(|(c, _)| c.n() != n) {
            return Err(Error::pre("dedup inputs must share one length"));
        }
    }
    let keyed: Vec<(Fingerprint, CanonicalForm, String)> = candidates
        .into_par_iter()
        .map(|(c, prov)| Ok((fingerprint_key(&c)?, canonical_form(&c)?, prov)))
        .collect::<Result<_>>()?;
    let mut classes: BTreeMap<(Fingerprint, String), (CanonicalForm, String)> = BTreeMap::new();
    for (fp, cf, prov) in keyed {
        let key = (fp, cf.hash.clone());
        match classes.get_mut(&key) {
            Some(slot) => {
                if prov < slot.1 {
                    slot.1 = prov;
                }
            }
            None => {
                classes.insert(key, (cf, prov));
            }
        }
    }
    let mut records: Vec<CatalogRecord> = classes
        .into_values()
        .map(|(cf, prov)| CatalogRecord::from_canonical(cf, prov))
        .collect::<Result<_>>()?;
    records.sort_by(|a, b| {
        a.fingerprint
            .cmp(&b.fingerprint)
            .then_with(|| a.code.rows().cmp(b.code.rows()))
    });
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::known;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(rng);
        Permutation::from_images(v).unwrap()
    }

    fn brute_aut_order(code: &LinearCode) -> u64 {
        // all n! permutations, by Heap's algorithm
        let n = code.n();
        let mut a: Vec<usize> = (0..n).collect();
        let mut c = vec![0usize; n];
        let check = |a: &Vec<usize>| code.permute(&Permutation::from_images(a.clone()).unwrap()) == *code;
        let mut count = u64::from(check(&a));
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    a.swap(0, i);
                } else {
                    a.swap(c[i], i);
                }
                count += u64::from(check(&a));
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        count
    }

    #[test]
    fn e8_automorphisms_match_brute_force() {
        let e8 = known::e8();
        assert_eq!(brute_aut_order(&e8), 1344);
        assert_eq!(automorphism_group(&e8).unwrap().order(), BigUint::from(1344u32));
    }

    #[test]
    fn small_automorphism_orders() {
        let i2i2 = known::i2_power(2);
        assert_eq!(brute_aut_order(&i2i2), 8);
        assert_eq!(automorphism_group(&i2i2).unwrap().order(), BigUint::from(8u32));
        let i2_3 = known::i2_power(3);
        assert_eq!(automorphism_group(&i2_3).unwrap().order(), BigUint::from(brute_aut_order(&i2_3)));
    }

    #[test]
    fn golay_automorphism_order() {
        let g = automorphism_group(&known::golay()).unwrap();
        assert_eq!(g.order(), BigUint::from(244_823_040u64));
        assert_eq!(g.orbit(0).len(), 24);
        assert_eq!(g.stabilizer_order(0) * 24u32, g.order());
    }

    #[test]
    fn canonical_form_invariant_under_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for code in [known::e8(), known::golay(), known::e8_power(2), known::i2_power(4)] {
            let base = canonical_form(&code).unwrap();
            assert_eq!(code.permute(&base.relabeling), base.code);
            for _ in 0..10 {
                let p = random_perm(code.n(), &mut rng);
                let cf = canonical_form(&code.permute(&p)).unwrap();
                assert_eq!(cf.code, base.code);
                assert_eq!(cf.hash, base.hash);
            }
        }
    }

    #[test]
    fn equivalence_witness_verifies() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = known::golay();
        let p = random_perm(24, &mut rng);
        let h = g.permute(&p);
        let w = is_equivalent(&g, &h).unwrap().unwrap();
        assert!(verify_witness(&g, &h, &w));
        let q = random_perm(24, &mut rng);
        let k = h.permute(&q);
        let w2 = is_equivalent(&h, &k).unwrap().unwrap();
        assert!(verify_witness(&g, &k, &w.then(&w2)));
        let e16 = known::e8_power(2);
        let d16 = known::d16_plus();
        assert!(is_equivalent(&e16, &d16).unwrap().is_none());
    }

    #[test]
    fn design_invariant_diagonals() {
        let g = design_invariant(&known::golay(), 8).unwrap();
        assert!((0..24).all(|i| g.gram[i][i] == 253));
        let e = design_invariant(&known::e8(), 4).unwrap();
        assert!((0..8).all(|i| e.gram[i][i] == 7));
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(e.gram[i][j], e.gram[j][i]);
            }
        }
    }

    #[test]
    fn fingerprints_separate_length_16() {
        let a = fingerprint(&known::e8_power(2)).unwrap();
        let b = fingerprint(&known::d16_plus()).unwrap();
        assert_ne!(a, b);
        // same weight enumerator; the automorphism orders tell them apart
        assert_eq!(a.a4, 28);
        assert_eq!(b.a4, 28);
        assert_eq!(a.weights, b.weights);
        assert_eq!(a.aut_order, Some(BigUint::from(2u32 * 1344 * 1344)));
        // the two orbit sizes must add up to the number of doubly even
        // self-dual codes of length 16, prod_{i=0}^{6} (2^i + 1)
        let fact16: BigUint = (1..=16u32).map(BigUint::from).product();
        let mass16: BigUint = (0..=6u32).map(|i| BigUint::from((1u32 << i) + 1)).product();
        assert_eq!(&fact16 / a.aut_order.unwrap() + &fact16 / b.aut_order.unwrap(), mass16);
        assert_eq!(fingerprint(&known::e8()).unwrap().aut_order, Some(BigUint::from(1344u32)));
    }

    #[test]
    fn fingerprint_invariant_under_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = known::golay();
        let f = fingerprint_key(&g).unwrap();
        for _ in 0..100 {
            let p = random_perm(24, &mut rng);
            assert_eq!(fingerprint_key(&g.permute(&p)).unwrap(), f);
        }
    }

    #[test]
    fn dedup_collapses_permuted_copies_in_any_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut pool: Vec<LinearCode> = (0..30).map(|_| known::e8().permute(&random_perm(8, &mut rng))).collect();
        let recs = dedup(pool.clone()).unwrap();
        assert_eq!(recs.len(), 1);
        pool.push(crate::code::known::i2_power(4));
        let a = dedup(pool.clone()).unwrap();
        pool.reverse();
        let b = dedup(pool).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(
            a.iter().map(|r| r.canonical_hash.clone()).collect::<Vec<_>>(),
            b.iter().map(|r| r.canonical_hash.clone()).collect::<Vec<_>>()
        );
    }
}

//! Code-building procedures: the two-coordinate lift of a singly even code,
//! gluing two doubly even codes along an isometry of their quotient spaces
//! and the converse decomposition, neighbors of self-dual codes, descent to
//! doubly even subcodes, and the subtraction-pair filter.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::code::{LinearCode, DEFAULT_ENUM_BUDGET};
use crate::equiv;
use crate::error::{Error, Result};
use crate::gf2::rref_words;
use crate::perm::Permutation;
use crate::quad::{self, Isometry, QuotientSpace};

/// Lifts a singly even self-dual code of length `n ≡ 6 (mod 8)` to a doubly
/// even self-dual code of length `n + 2`.
pub fn bp_lift(code: &LinearCode) -> Result<LinearCode> {
    let n = code.n();
    if n % 8 != 6 {
        return Err(Error::pre("lift needs length 6 mod 8"));
    }
    if !code.is_self_dual() {
        return Err(Error::pre("lift needs a self-dual code"));
    }
    if code.is_doubly_even() {
        return Err(Error::pre("lift needs a singly even code"));
    }
    let sh = code.shadow()?;
    let a = 1u64 << n;
    let b = 1u64 << (n + 1);
    for c1 in [sh.c1, sh.c3] {
        let mut rows: Vec<u64> = sh.c0.rows().to_vec();
        rows.push(sh.c2 | a | b);
        rows.push(c1 | a);
        let lifted = LinearCode::from_generators(n + 2, rows)?;
        if lifted.is_self_dual() && lifted.is_doubly_even() {
            return Ok(lifted);
        }
    }
    Err(Error::Invariant("neither shadow labeling gives a doubly even lift".into()))
}

/// Two doubly even codes containing `1` and an isometry `f: C₁⊥/C₁ → C₂⊥/C₂`.
#[derive(Clone, Debug)]
pub struct GlueSpec {
    pub c1: LinearCode,
    pub c2: LinearCode,
    pub f: Isometry,
}

impl GlueSpec {
    pub fn new(c1: LinearCode, c2: LinearCode, f: Isometry) -> Result<Self> {
        let (n1, n2) = (c1.n(), c2.n());
        if n1 % 8 != n2 % 8 {
            return Err(Error::pre("glue lengths must agree mod 8"));
        }
        if n1 as isize - n2 as isize != 2 * (c1.dim() as isize - c2.dim() as isize) {
            return Err(Error::pre("glue needs n1 - n2 = 2(dim C1 - dim C2)"));
        }
        let q1 = QuotientSpace::of_code(&c1)?;
        let q2 = QuotientSpace::of_code(&c2)?;
        if f.dim() != q1.dim() || !q1.is_isometry(&q2, &f)? {
            return Err(Error::pre("glue map is not an isometry of the quotient spaces"));
        }
        Ok(GlueSpec { c1, c2, f })
    }
}

/// `D(C₁, C₂, f)`: the pairs `(x₁, x₂)` with `x₁ ∈ C₁⊥` and `x₂ ∈ f(x₁ + C₁)`.
pub fn glue(spec: &GlueSpec) -> Result<LinearCode> {
    let q1 = QuotientSpace::of_code(&spec.c1)?;
    let q2 = QuotientSpace::of_code(&spec.c2)?;
    glue_with(&spec.c1, &spec.c2, &q1, &q2, &spec.f)
}

fn glue_with(c1: &LinearCode, c2: &LinearCode, q1: &QuotientSpace, q2: &QuotientSpace, f: &Isometry) -> Result<LinearCode> {
    let (n1, n2) = (c1.n(), c2.n());
    let n = n1 + n2;
    if n > crate::code::MAX_LENGTH {
        return Err(Error::pre("glued length exceeds 64"));
    }
    let mut rows: Vec<u64> = c1.rows().to_vec();
    rows.extend(c2.rows().iter().map(|&r| r << n1));
    for (i, &rep) in q1.reps().iter().enumerate() {
        rows.push(rep | (q2.lift(f.apply(1 << i)) << n1));
    }
    let d = LinearCode::from_generators(n, rows)?;
    if !(d.is_self_dual() && d.is_doubly_even()) {
        return Err(Error::Invariant("glued code is not doubly even self-dual".into()));
    }
    Ok(d)
}

/// Inequivalent-up-to-double-coset glue codes for a pair of codes. Empty
/// when the quotient spaces are not isometric.
pub fn glue_family(c1: &LinearCode, c2: &LinearCode) -> Result<Vec<LinearCode>> {
    glue_family_with_budget(c1, c2, quad::DEFAULT_COSET_BUDGET)
}

pub fn glue_family_with_budget(c1: &LinearCode, c2: &LinearCode, budget: u64) -> Result<Vec<LinearCode>> {
    if (c1.n() as isize - c2.n() as isize) != 2 * (c1.dim() as isize - c2.dim() as isize) || c1.n() % 8 != c2.n() % 8 {
        return Ok(Vec::new());
    }
    let q1 = QuotientSpace::of_code(c1)?;
    let q2 = QuotientSpace::of_code(c2)?;
    let Some(f) = quad::find_isometry(&q1, &q2)? else {
        return Ok(Vec::new());
    };
    let k = q1.dim();
    if k == 0 {
        return Ok(vec![glue_with(c1, c2, &q1, &q2, &f)?]);
    }
    let finv = f.inverse().ok_or_else(|| Error::Invariant("isometry is singular".into()))?;
    let a1 = equiv::automorphism_group(c1)?;
    let a2 = equiv::automorphism_group(c2)?;
    let g0_1 = quad::induced_group_gens(&q1, a1.generators())?;
    let g0_2: Vec<Isometry> = quad::induced_group_gens(&q2, a2.generators())?
        .iter()
        .map(|h| f.then(h).then(&finv))
        .collect();
    let g1 = quad::isometry_group_gens(&q1)?;
    let reps = quad::double_coset_reps(k, &g0_2, &g0_1, &g1, budget)?;
    reps.iter()
        .map(|dc| glue_with(c1, c2, &q1, &q2, &dc.rep.then(&f)))
        .collect()
}

/// A decomposition of a code at a codeword `x`, in coordinates where the
/// support of `x` comes first.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub spec: GlueSpec,
    /// Moves the support of `x` to the front (in increasing order) and the
    /// rest behind it; maps the input code onto `glue(spec)`.
    pub layout: Permutation,
}

pub fn decompose_at(code: &LinearCode, x: u64) -> Result<Decomposition> {
    let n = code.n();
    if !(code.is_self_dual() && code.is_doubly_even()) {
        return Err(Error::pre("decomposition needs a doubly even self-dual code"));
    }
    if x == 0 || !code.contains(x) {
        return Err(Error::pre("decomposition word is not a nonzero codeword"));
    }
    let n1 = x.count_ones() as usize;
    if n1 == n {
        return Err(Error::pre("decomposition word must not be the all-one vector"));
    }
    let mut images = vec![0usize; n];
    let (mut s, mut t) = (0, n1);
    for (i, img) in images.iter_mut().enumerate() {
        if x >> i & 1 == 1 {
            *img = s;
            s += 1;
        } else {
            *img = t;
            t += 1;
        }
    }
    let layout = Permutation::from_images(images)?;
    let c = code.permute(&layout);
    let low = (1u64 << n1) - 1;
    let high_coords: Vec<usize> = (n1..n).collect();
    let low_coords: Vec<usize> = (0..n1).collect();
    let c1 = c.shorten(&high_coords)?;
    let c2 = c.shorten(&low_coords)?;
    let q1 = QuotientSpace::of_code(&c1)?;
    let q2 = QuotientSpace::of_code(&c2)?;
    // echelon form on the low part, carrying full words
    let mut ech: Vec<(u64, u64, u32)> = Vec::new();
    for &r in c.rows() {
        let mut v = r;
        for &(_, full, p) in &ech {
            if v >> p & 1 == 1 {
                v ^= full;
            }
        }
        if v & low != 0 {
            let p = (v & low).trailing_zeros();
            ech.push((v & low, v, p));
        }
    }
    let mut rows = Vec::with_capacity(q1.dim());
    for &rep in q1.reps() {
        let mut v = rep;
        let mut acc = 0u64;
        for &(lo, full, p) in &ech {
            if v >> p & 1 == 1 {
                v ^= lo;
                acc ^= full;
            }
        }
        if v != 0 {
            return Err(Error::Invariant("dual word of C1 is not a projection of the code".into()));
        }
        let img = q2
            .coords(acc >> n1)
            .ok_or_else(|| Error::Invariant("projected word left the dual of C2".into()))?;
        rows.push(img);
    }
    let f = Isometry::from_rows(rows);
    let spec = GlueSpec::new(c1, c2, f)?;
    Ok(Decomposition { spec, layout })
}

/// For every codeword `x` of weight `w`, the dimension of the subcode
/// supported inside `supp(x)`; returned as dimension → count.
pub fn shortened_dim_profile(code: &LinearCode, w: usize) -> Result<BTreeMap<usize, u64>> {
    let n = code.n();
    let mut out = BTreeMap::new();
    for x in code.codewords_of_weight(w)? {
        let outside: Vec<usize> = (0..n).filter(|&i| x >> i & 1 == 0).collect();
        let sub = crate::code::vanishing_subcode(code.rows(), &outside);
        let mut r = sub;
        let dim = rref_words(&mut r, n).len();
        *out.entry(dim).or_insert(0) += 1;
    }
    Ok(out)
}

/// Cosets of `F₂ⁿ` modulo a code, indexed by the free (non-pivot) bits of
/// their reduced representative.
pub(crate) struct CosetIndex<'a> {
    modulus: &'a LinearCode,
    free: Vec<usize>,
}

impl<'a> CosetIndex<'a> {
    pub(crate) fn new(modulus: &'a LinearCode) -> Self {
        let pivots = modulus.pivots();
        let free = (0..modulus.n()).filter(|i| !pivots.contains(i)).collect();
        CosetIndex { modulus, free }
    }

    pub(crate) fn len(&self) -> usize {
        1 << self.free.len()
    }

    pub(crate) fn index(&self, v: u64) -> usize {
        let r = self.modulus.reduce(v);
        self.free
            .iter()
            .enumerate()
            .fold(0, |a, (b, &i)| a | ((r >> i & 1) as usize) << b)
    }

    pub(crate) fn vector(&self, idx: usize) -> u64 {
        self.free
            .iter()
            .enumerate()
            .fold(0, |a, (b, &i)| a | ((idx >> b & 1) as u64) << i)
    }
}

/// Largest dimension for which the coset space is enumerated.
pub const MAX_HYPERPLANE_DIM: usize = 24;

/// Even-weight vectors `v ∉ P⊥`, one per coset of `P⊥` (or one per orbit
/// of the given automorphisms of `P`). Each defines the hyperplane
/// `P ∩ v⊥` of `P`, which contains `1` whenever `P` does.
pub fn hyperplane_vectors(p: &LinearCode, aut: Option<&[Permutation]>) -> Result<Vec<u64>> {
    if p.dim() > MAX_HYPERPLANE_DIM {
        return Err(Error::Budget {
            what: "hyperplane enumeration dimension".into(),
            limit: MAX_HYPERPLANE_DIM as u64,
        });
    }
    let dual = p.dual();
    let idx = CosetIndex::new(dual);
    let size = idx.len();
    let even = |i: usize| idx.vector(i).count_ones().is_multiple_of(2);
    let Some(gens) = aut.filter(|g| !g.is_empty()) else {
        return Ok((1..size).filter(|&i| even(i)).map(|i| idx.vector(i)).collect());
    };
    let mut parent: Vec<u32> = (0..size as u32).collect();
    fn find(p: &mut [u32], mut x: u32) -> u32 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    let images: Vec<Vec<u32>> = gens
        .par_iter()
        .map(|g| (0..size).map(|i| idx.index(g.apply_word(idx.vector(i))) as u32).collect())
        .collect();
    for img in &images {
        for (i, &j) in img.iter().enumerate() {
            let (a, b) = (find(&mut parent, i as u32), find(&mut parent, j));
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
            }
        }
    }
    Ok((1..size)
        .filter(|&i| find(&mut parent, i as u32) == i as u32 && even(i))
        .map(|i| idx.vector(i))
        .collect())
}

/// Which self-dual neighbors to produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NeighborKind {
    /// The doubly even neighbor only (input doubly even).
    DoublyEven,
    /// Both self-dual neighbors.
    SelfDual,
}

/// Neighbors of a self-dual code through the hyperplane `C ∩ v⊥`.
pub fn neighbors_at(code: &LinearCode, v: u64, kind: NeighborKind) -> Result<Vec<LinearCode>> {
    let n = code.n();
    if v.count_ones() % 2 == 1 {
        return Err(Error::pre("neighbor vector must have even weight"));
    }
    let Some(&c0) = code.rows().iter().find(|&&r| (r & v).count_ones() % 2 == 1) else {
        return Err(Error::pre("neighbor vector lies in the code"));
    };
    let b: Vec<u64> = code
        .rows()
        .iter()
        .filter(|&&r| r != c0)
        .map(|&r| if (r & v).count_ones() % 2 == 1 { r ^ c0 } else { r })
        .collect();
    let cands = [v, v ^ c0];
    let mut out = Vec::with_capacity(2);
    for w in cands {
        if kind == NeighborKind::DoublyEven && w.count_ones() % 4 != 0 {
            continue;
        }
        let mut rows = b.clone();
        rows.push(w);
        out.push(LinearCode::from_generators(n, rows)?);
    }
    Ok(out)
}

/// All doubly even neighbors of a doubly even self-dual code.
pub fn neighbor_step(code: &LinearCode) -> Result<Vec<LinearCode>> {
    neighbor_step_reduced(code, None, NeighborKind::DoublyEven)
}

/// Neighbors for one vector per orbit of `aut` (all vectors when `None`).
pub fn neighbor_step_reduced(code: &LinearCode, aut: Option<&[Permutation]>, kind: NeighborKind) -> Result<Vec<LinearCode>> {
    if !code.is_self_dual() {
        return Err(Error::pre("neighbors need a self-dual code"));
    }
    if kind == NeighborKind::DoublyEven && !code.is_doubly_even() {
        return Err(Error::pre("doubly even neighbors need a doubly even code"));
    }
    let vs = hyperplane_vectors(code, aut)?;
    let per: Vec<Vec<LinearCode>> = vs
        .par_iter()
        .map(|&v| neighbors_at(code, v, kind))
        .collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

/// Codimension-one subcodes containing `1`, one per hyperplane orbit.
pub fn hyperplane_subcodes(p: &LinearCode, aut: Option<&[Permutation]>) -> Result<Vec<LinearCode>> {
    let vs = hyperplane_vectors(p, aut)?;
    vs.par_iter()
        .map(|&v| {
            let rows = p.rows();
            let c0 = *rows
                .iter()
                .find(|&&r| (r & v).count_ones() % 2 == 1)
                .expect("vector outside the dual has a generator with odd product");
            let b = rows
                .iter()
                .filter(|&&r| r != c0)
                .map(|&r| if (r & v).count_ones() % 2 == 1 { r ^ c0 } else { r })
                .collect();
            LinearCode::from_generators(p.n(), b)
        })
        .collect()
}

/// Inequivalent doubly even codes of length `m` containing `1`, grouped by
/// dimension, for every dimension in `min_dim..=m/2`. Obtained by descent
/// through hyperplanes from the given doubly even self-dual codes.
pub fn doubly_even_subcodes(top: &[LinearCode], min_dim: usize) -> Result<BTreeMap<usize, Vec<LinearCode>>> {
    let mut out = BTreeMap::new();
    let Some(m) = top.first().map(|c| c.n()) else {
        return Ok(out);
    };
    let mut level: Vec<LinearCode> = equiv::dedup(top.to_vec())?.into_iter().map(|r| r.code).collect();
    let mut dim = m / 2;
    out.insert(dim, level.clone());
    while dim > min_dim.max(1) {
        let mut next = Vec::new();
        for p in &level {
            let aut = equiv::automorphism_group(p)?;
            next.extend(hyperplane_subcodes(p, Some(aut.generators()))?);
        }
        next.sort_by(|a, b| a.rows().cmp(b.rows()));
        next.dedup();
        level = equiv::dedup(next)?.into_iter().map(|r| r.code).collect();
        dim -= 1;
        out.insert(dim, level.clone());
    }
    Ok(out)
}

/// Largest minimum weight allowed for a self-dual code of length `m`.
pub fn self_dual_weight_bound(m: usize) -> usize {
    4 * (m / 24) + if m % 24 == 22 { 6 } else { 4 }
}

/// Per-weight Gram data: `(A_w, degrees, gram)` for words of weight `w`.
fn weight_gram(code: &LinearCode, w: usize) -> Result<(u64, Vec<u32>, Vec<Vec<u32>>)> {
    let words = code.codewords_of_weight(w)?;
    let g = equiv::gram_of(code.n(), &words);
    let deg = (0..code.n()).map(|i| g[i][i]).collect();
    Ok((words.len() as u64, deg, g))
}

/// Pairs `(i, j)`, `i < j`, whose subtraction has minimum weight at least
/// `delta`, decided from Gram matrices of the small-weight words.
pub fn subtraction_pairs(code: &LinearCode, delta: usize) -> Result<Vec<(usize, usize)>> {
    if !(code.is_self_dual() && code.is_doubly_even()) {
        return Err(Error::pre("subtraction filter needs a doubly even self-dual code"));
    }
    code.check_budget(DEFAULT_ENUM_BUDGET)?;
    let n = code.n();
    let below: Vec<_> = (1..delta).filter(|w| w % 4 == 0).map(|w| weight_gram(code, w)).collect::<Result<_>>()?;
    let band: Vec<_> = (delta..delta + 2).filter(|w| w % 4 == 0).map(|w| weight_gram(code, w)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let ok_below = below.iter().all(|(a, deg, g)| {
                g[i][j] == 0 && (*a as i64 - deg[i] as i64 - deg[j] as i64 + g[i][j] as i64) == 0
            });
            let ok_band = band.iter().all(|(_, _, g)| g[i][j] == 0);
            if ok_below && ok_band {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

/// Pairs whose subtraction has minimum weight at least 8, for codes with
/// at most one word of weight 4. Each pair is confirmed by computing the
/// minimum weight of the subtracted code.
pub fn subtraction_candidates(code: &LinearCode) -> Result<Vec<(usize, usize)>> {
    let a4 = code.weight_distribution()?.a(4);
    if a4 >= 2 {
        return Err(Error::pre(format!("subtraction filter needs A4 <= 1, found {a4}")));
    }
    let pairs = subtraction_pairs(code, 8)?;
    let checked: Vec<bool> = pairs
        .par_iter()
        .map(|&(i, j)| Ok(code.subtract(i, j)?.min_weight()? >= 8))
        .collect::<Result<_>>()?;
    if checked.iter().any(|ok| !ok) {
        return Err(Error::Invariant("Gram filter admitted a pair with a low-weight subtraction".into()));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::known;
    use crate::equiv::is_equivalent;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lift_of_i2_cubed_is_e8() {
        let c = known::i2_power(3);
        let l = bp_lift(&c).unwrap();
        assert_eq!(l.n(), 8);
        assert_eq!(l.dim(), c.dim() + 1);
        assert!(l.is_doubly_even() && l.is_self_dual());
        assert!(is_equivalent(&l, &known::e8()).unwrap().is_some());
        assert!(bp_lift(&known::i2_power(4)).is_err());
    }

    #[test]
    fn lifts_of_length_14_codes() {
        // i2^7 and e8 ⊕ i2^3 lift to the two length-16 codes
        let a = bp_lift(&known::i2_power(7)).unwrap();
        let b = bp_lift(&known::e8().direct_sum(&known::i2_power(3)).unwrap()).unwrap();
        for c in [&a, &b] {
            assert!(c.is_doubly_even() && c.is_self_dual());
        }
    }

    #[test]
    fn glue_of_two_e8_is_direct_sum() {
        let spec = GlueSpec::new(known::e8(), known::e8(), Isometry::identity(0)).unwrap();
        assert_eq!(glue(&spec).unwrap(), known::e8_power(2));
        let fam = glue_family(&known::e8(), &known::e8()).unwrap();
        assert_eq!(fam.len(), 1);
    }

    #[test]
    fn glue_all_ones_with_length_16() {
        // ⟨1⟩ of length 8 against a length-16 code of dimension 5
        let c2 = {
            let e = known::e8_power(2);
            hyperplane_subcodes(&e, None)
                .unwrap()
                .into_iter()
                .flat_map(|h| hyperplane_subcodes(&h, None).unwrap())
                .flat_map(|h| hyperplane_subcodes(&h, None).unwrap())
                .next()
                .unwrap()
        };
        assert_eq!(c2.dim(), 5);
        let fam = glue_family(&known::all_ones(8), &c2).unwrap();
        for d in &fam {
            assert_eq!((d.n(), d.dim()), (24, 12));
            assert!(d.is_doubly_even() && d.is_self_dual());
        }
    }

    #[test]
    fn decompose_e8_squared_exactly() {
        let c = known::e8_power(2);
        let x = 0xffu64;
        let d = decompose_at(&c, x).unwrap();
        assert_eq!(d.spec.c1, known::e8());
        assert_eq!(d.spec.c2, known::e8());
        assert_eq!(glue(&d.spec).unwrap(), c);
    }

    #[test]
    fn decompose_golay_roundtrip_sample() {
        let g = known::golay();
        for &x in g.codewords_of_weight(8).unwrap().iter().take(40) {
            let d = decompose_at(&g, x).unwrap();
            let s = &d.spec;
            let k = s.c1.n() - 2 * s.c1.dim();
            assert_eq!(s.c1.dim() + s.c2.dim() + k, 12);
            let glued = glue(s).unwrap();
            assert_eq!(g.permute(&d.layout), glued);
        }
    }

    #[test]
    fn shortened_profiles() {
        let g = known::golay();
        assert_eq!(shortened_dim_profile(&g, 24).unwrap(), BTreeMap::from([(12, 1)]));
        let e = known::e8_power(2);
        let prof = shortened_dim_profile(&e, 8).unwrap();
        assert_eq!(prof.get(&4), Some(&2));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut v: Vec<usize> = (0..16).collect();
        v.shuffle(&mut rng);
        let p = Permutation::from_images(v).unwrap();
        assert_eq!(shortened_dim_profile(&e.permute(&p), 8).unwrap(), prof);
    }

    #[test]
    fn neighbors_of_e8_are_e8() {
        let ns = neighbor_step(&known::e8()).unwrap();
        assert_eq!(ns.len(), 7);
        for n in &ns {
            assert!(is_equivalent(n, &known::e8()).unwrap().is_some());
        }
    }

    #[test]
    fn neighbors_of_e8_squared() {
        let c = known::e8_power(2);
        let ns = neighbor_step(&c).unwrap();
        assert_eq!(ns.len(), 127);
        let mut hashes = std::collections::BTreeSet::new();
        for n in &ns {
            assert!(n.is_doubly_even() && n.is_self_dual());
            let both = c.codewords().unwrap().into_iter().filter(|&w| n.contains(w)).count();
            assert_eq!(both, 1 << 7);
            hashes.insert(equiv::canonical_hash(n).unwrap());
            // symmetry: c is a neighbor of n
            assert!(neighbor_step(n).unwrap().contains(&c));
        }
        assert_eq!(hashes.len(), 2);
        let aut = equiv::automorphism_group(&c).unwrap();
        let red = neighbor_step_reduced(&c, Some(aut.generators()), NeighborKind::DoublyEven).unwrap();
        let red_hashes: std::collections::BTreeSet<_> = red.iter().map(|n| equiv::canonical_hash(n).unwrap()).collect();
        assert_eq!(red_hashes, hashes);
        assert!(red.len() < ns.len());
    }

    fn brute_pairs(code: &LinearCode, delta: usize) -> Vec<(usize, usize)> {
        let n = code.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if code.subtract(i, j).unwrap().min_weight().unwrap() >= delta {
                    out.push((i, j));
                }
            }
        }
        out
    }

    #[test]
    fn subtraction_filter_matches_brute_force() {
        for c in [known::e8_power(2), known::d16_plus(), known::golay(), known::e8_power(3)] {
            let delta = self_dual_weight_bound(c.n() - 2);
            assert_eq!(subtraction_pairs(&c, delta).unwrap(), brute_pairs(&c, delta), "length {}", c.n());
        }
        let g = known::golay();
        assert_eq!(subtraction_pairs(&g, 6).unwrap().len(), 276);
        let s = g.subtract(0, 1).unwrap();
        assert_eq!((s.n(), s.dim(), s.min_weight().unwrap()), (22, 11, 6));
        assert!(subtraction_candidates(&known::e8_power(2)).is_err());
        // every pair of the Golay code lies in an octad
        assert!(subtraction_candidates(&g).unwrap().is_empty());
    }

    #[test]
    fn subtract_then_lift_returns_to_length_16() {
        for c in [known::e8_power(2), known::d16_plus()] {
            for (i, j) in [(0, 1), (0, 9), (3, 12)] {
                let s = c.subtract(i, j).unwrap();
                if s.is_doubly_even() {
                    continue;
                }
                let l = bp_lift(&s).unwrap();
                assert!(is_equivalent(&l, &c).unwrap().is_some());
            }
        }
    }
}

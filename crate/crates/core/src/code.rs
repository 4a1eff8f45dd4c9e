//! Binary linear codes held as an RREF generator matrix.
//!
//! Lengths are limited to [`MAX_LENGTH`] so every codeword fits in one
//! machine word; this covers every length the classification pipeline
//! touches (at most 40).

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::gf2::{kernel_words, low_mask, reduce_word, rref_words, BitVector, GF2Matrix};
use crate::perm::Permutation;

pub const MAX_LENGTH: usize = 64;

/// Default cap on the number of codewords any enumeration may visit.
pub const DEFAULT_ENUM_BUDGET: u64 = 1 << 26;

#[derive(Clone)]
pub struct LinearCode {
    n: usize,
    rows: Vec<u64>,
    pivots: Vec<usize>,
    dual: OnceLock<Box<LinearCode>>,
    weights: OnceLock<WeightDistribution>,
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rows == other.rows
    }
}

impl Eq for LinearCode {}

impl std::hash::Hash for LinearCode {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.rows.hash(state);
    }
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearCode[{},{}]", self.n, self.dim())?;
        for r in &self.rows {
            write!(f, " {}", word_to_01(*r, self.n))?;
        }
        Ok(())
    }
}

fn check_length(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::pre("zero-length code"));
    }
    if n > MAX_LENGTH {
        return Err(Error::pre(format!("length {n} exceeds the supported maximum {MAX_LENGTH}")));
    }
    Ok(())
}

pub(crate) fn word_to_01(w: u64, n: usize) -> String {
    (0..n).map(|i| if w >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// `true` when `a` precedes `b` as a 0/1 string read from coordinate 0.
#[inline]
pub(crate) fn lex_less(a: u64, b: u64) -> bool {
    let d = a ^ b;
    d != 0 && (a >> d.trailing_zeros()) & 1 == 0
}

/// Keeps the coordinates in `keep` (in order), packing them to the bottom.
pub(crate) fn project(v: u64, keep: &[usize]) -> u64 {
    let mut out = 0u64;
    for (k, &c) in keep.iter().enumerate() {
        out |= (v >> c & 1) << k;
    }
    out
}

impl LinearCode {
    /// Builds a code from generator words, rejecting dependent rows.
    pub fn from_generators(n: usize, rows: Vec<u64>) -> Result<Self> {
        check_length(n)?;
        let k = rows.len();
        let code = Self::span_unchecked(n, rows);
        if code.dim() != k {
            return Err(Error::Validation(format!(
                "generator matrix is rank deficient: {k} rows, rank {}",
                code.dim()
            )));
        }
        Ok(code)
    }

    /// The span of arbitrary (possibly dependent) words.
    pub fn span(n: usize, rows: Vec<u64>) -> Result<Self> {
        check_length(n)?;
        Ok(Self::span_unchecked(n, rows))
    }

    pub(crate) fn span_unchecked(n: usize, mut rows: Vec<u64>) -> Self {
        let mask = low_mask(n);
        for r in rows.iter_mut() {
            *r &= mask;
        }
        let pivots = rref_words(&mut rows, n);
        LinearCode {
            n,
            rows,
            pivots,
            dual: OnceLock::new(),
            weights: OnceLock::new(),
        }
    }

    pub fn from_matrix(m: &GF2Matrix, allow_dependent: bool) -> Result<Self> {
        check_length(m.ncols())?;
        let rows = m.to_words();
        if allow_dependent {
            Self::span(m.ncols(), rows)
        } else {
            Self::from_generators(m.ncols(), rows)
        }
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::span(n, Vec::new())
    }

    pub fn full_space(n: usize) -> Result<Self> {
        Self::span(n, (0..n).map(|i| 1u64 << i).collect())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// RREF generator rows, one word per row.
    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn generator_matrix(&self) -> GF2Matrix {
        GF2Matrix::from_words(self.n, &self.rows)
    }

    pub fn all_ones(&self) -> u64 {
        low_mask(self.n)
    }

    /// Canonical representative of `v + C`.
    #[inline]
    pub fn reduce(&self, v: u64) -> u64 {
        reduce_word(v, &self.rows, &self.pivots)
    }

    #[inline]
    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    pub fn contains_all_ones(&self) -> bool {
        self.contains(self.all_ones())
    }

    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.n == other.n && self.rows.iter().all(|&r| other.contains(r))
    }

    pub fn dual(&self) -> &LinearCode {
        self.dual.get_or_init(|| {
            Box::new(Self::span_unchecked(self.n, kernel_words(&self.rows, self.n)))
        })
    }

    pub fn is_self_orthogonal(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, &a)| self.rows[i..].iter().all(|&b| (a & b).count_ones() % 2 == 0))
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.dim() == self.n && self.is_self_orthogonal()
    }

    /// Every codeword has weight divisible by four.
    pub fn is_doubly_even(&self) -> bool {
        if self.is_self_orthogonal() {
            // weight mod 4 is additive on a self-orthogonal code
            return self.rows.iter().all(|r| r.count_ones() % 4 == 0);
        }
        let mut ok = true;
        self.for_each_codeword_unbounded(|c| {
            if c.count_ones() % 4 != 0 {
                ok = false;
            }
        });
        ok
    }

    pub fn is_even(&self) -> bool {
        self.rows.iter().all(|r| r.count_ones() % 2 == 0)
    }

    pub fn check_budget(&self, budget: u64) -> Result<()> {
        if self.dim() >= 64 || (1u64 << self.dim()) > budget {
            return Err(Error::Budget {
                what: format!("enumerating 2^{} codewords", self.dim()),
                limit: budget,
            });
        }
        Ok(())
    }

    fn for_each_codeword_unbounded(&self, mut f: impl FnMut(u64)) {
        gray_walk(0, &self.rows, &mut f);
    }

    /// Visits every codeword (including zero) by Gray-code traversal.
    pub fn for_each_codeword(&self, f: impl FnMut(u64)) -> Result<()> {
        self.check_budget(DEFAULT_ENUM_BUDGET)?;
        self.for_each_codeword_unbounded(f);
        Ok(())
    }

    pub fn codewords(&self) -> Result<Vec<u64>> {
        let mut out = Vec::with_capacity(1usize << self.dim().min(26));
        self.for_each_codeword(|c| out.push(c))?;
        Ok(out)
    }

    /// All codewords of weight exactly `w`, sorted.
    pub fn codewords_of_weight(&self, w: usize) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        let w = w as u32;
        self.for_each_codeword(|c| {
            if c.count_ones() == w {
                out.push(c)
            }
        })?;
        out.sort_unstable();
        Ok(out)
    }

    pub fn weight_distribution(&self) -> Result<&WeightDistribution> {
        if let Some(w) = self.weights.get() {
            return Ok(w);
        }
        self.check_budget(DEFAULT_ENUM_BUDGET)?;
        let mut counts = vec![0u64; self.n + 1];
        self.for_each_codeword_unbounded(|c| counts[c.count_ones() as usize] += 1);
        Ok(self.weights.get_or_init(|| WeightDistribution { counts }))
    }

    /// Least nonzero weight; `n + 1` for the zero code.
    pub fn min_weight(&self) -> Result<usize> {
        if self.dim() == 0 {
            return Ok(self.n + 1);
        }
        if let Some(w) = self.weights.get() {
            return Ok(w.min_nonzero().unwrap_or(self.n + 1));
        }
        self.check_budget(DEFAULT_ENUM_BUDGET)?;
        // smallest weight permitted by the divisibility of the code
        let floor = if self.is_self_orthogonal() && self.rows.iter().all(|r| r.count_ones() % 4 == 0) {
            4
        } else if self.is_even() {
            2
        } else {
            1
        };
        let mut best = u32::MAX;
        let mut cur = 0u64;
        let total = 1u64 << self.dim();
        for i in 1..total {
            cur ^= self.rows[i.trailing_zeros() as usize];
            let w = cur.count_ones();
            if w < best {
                best = w;
                if w as usize <= floor {
                    break;
                }
            }
        }
        Ok(best as usize)
    }

    /// Applies a coordinate permutation: coordinate `i` moves to `p(i)`.
    pub fn permute(&self, p: &Permutation) -> LinearCode {
        assert_eq!(p.degree(), self.n, "permutation degree differs from code length");
        let rows = self.rows.iter().map(|&r| p.apply_word(r)).collect();
        Self::span_unchecked(self.n, rows)
    }

    /// Deletes the coordinates in `coords` (0-indexed) from every codeword.
    pub fn puncture(&self, coords: &[usize]) -> Result<LinearCode> {
        let keep = self.complement_of(coords)?;
        let rows = self.rows.iter().map(|&r| project(r, &keep)).collect();
        Self::span(keep.len(), rows)
    }

    /// Codewords vanishing on `coords`, with those coordinates deleted.
    pub fn shorten(&self, coords: &[usize]) -> Result<LinearCode> {
        let keep = self.complement_of(coords)?;
        let rows = vanishing_subcode(&self.rows, coords);
        Self::span(keep.len(), rows.into_iter().map(|r| project(r, &keep)).collect())
    }

    fn complement_of(&self, coords: &[usize]) -> Result<Vec<usize>> {
        let mut mask = 0u64;
        for &c in coords {
            if c >= self.n {
                return Err(Error::pre(format!("coordinate {} out of range 1..={}", c + 1, self.n)));
            }
            mask |= 1 << c;
        }
        Ok((0..self.n).filter(|&i| mask >> i & 1 == 0).collect())
    }

    pub fn direct_sum(&self, other: &LinearCode) -> Result<LinearCode> {
        let n = self.n + other.n;
        check_length(n)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().map(|&r| r << self.n));
        Ok(Self::span_unchecked(n, rows))
    }

    /// Keeps the codewords agreeing on coordinates `i` and `j`, then deletes
    /// both coordinates. For self-dual input the result is self-dual.
    pub fn subtract(&self, i: usize, j: usize) -> Result<LinearCode> {
        if i == j {
            return Err(Error::pre("subtract needs two distinct coordinates"));
        }
        if i >= self.n || j >= self.n {
            return Err(Error::pre("subtract coordinate out of range"));
        }
        if !self.is_self_dual() {
            return Err(Error::pre("subtract needs a self-dual code"));
        }
        let pair = (1u64 << i) | (1u64 << j);
        let mut rows = Vec::with_capacity(self.dim());
        let mut pivot: Option<u64> = None;
        for &r in &self.rows {
            if (r & pair).count_ones() == 1 {
                match pivot {
                    None => pivot = Some(r),
                    Some(p) => rows.push(r ^ p),
                }
            } else {
                rows.push(r);
            }
        }
        let keep: Vec<usize> = (0..self.n).filter(|&c| c != i && c != j).collect();
        Self::span(self.n - 2, rows.into_iter().map(|r| project(r, &keep)).collect())
    }

    /// The decomposition `C₀ ∪ C₁ ∪ C₂ ∪ C₃ = C₀⊥` of a singly even self-dual code.
    pub fn shadow(&self) -> Result<ShadowDecomposition> {
        if !self.is_self_dual() || self.is_doubly_even() {
            return Err(Error::pre("shadow needs a singly even self-dual code"));
        }
        let g_star = *self
            .rows
            .iter()
            .find(|r| r.count_ones() % 4 == 2)
            .ok_or_else(|| Error::Invariant("singly even code without a weight 2 mod 4 generator".into()))?;
        let c0_rows: Vec<u64> = self
            .rows
            .iter()
            .filter(|&&r| r != g_star)
            .map(|&r| if r.count_ones() % 4 == 2 { r ^ g_star } else { r })
            .collect();
        let c0 = Self::span_unchecked(self.n, c0_rows);
        let y = *c0
            .dual()
            .rows()
            .iter()
            .find(|&&v| !self.contains(v))
            .ok_or_else(|| Error::Invariant("C0 dual equals C".into()))?;
        self.check_budget(DEFAULT_ENUM_BUDGET)?;
        let a = coset_leader(&c0, y);
        let b = coset_leader(&c0, y ^ g_star);
        let (c1, c3) = if precedes(b, a) { (b, a) } else { (a, b) };
        let c2 = coset_leader(&c0, g_star);
        let mut counts = vec![0u64; self.n + 1];
        gray_walk(y, &self.rows, &mut |v| counts[v.count_ones() as usize] += 1);
        Ok(ShadowDecomposition {
            c0,
            c1,
            c2,
            c3,
            shadow_weights: WeightDistribution { counts },
        })
    }

    /// Generator matrix text: `n k` followed by `k` rows of `0`/`1`.
    pub fn to_gm(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.dim());
        for &r in &self.rows {
            s.push_str(&word_to_01(r, self.n));
            s.push('\n');
        }
        s
    }

    pub fn parse_gm(text: &str, allow_dependent: bool) -> Result<LinearCode> {
        let mut lines = gm_lines(text);
        if lines.peek().is_none() {
            return Err(Error::parse(1, "empty input"));
        }
        let code = parse_gm_block(&mut lines, allow_dependent)?;
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln, "unexpected extra row"));
        }
        Ok(code)
    }

    /// Parses a sequence of GM blocks, one after another.
    pub fn parse_gm_many(text: &str, allow_dependent: bool) -> Result<Vec<LinearCode>> {
        let mut lines = gm_lines(text);
        let mut out = Vec::new();
        while lines.peek().is_some() {
            out.push(parse_gm_block(&mut lines, allow_dependent)?);
        }
        Ok(out)
    }

    pub fn row_vectors(&self) -> Vec<BitVector> {
        self.rows.iter().map(|&r| BitVector::from_word(self.n, r)).collect()
    }
}

/// (weight, lexicographic) order used to label shadow cosets.
fn precedes(a: u64, b: u64) -> bool {
    let (wa, wb) = (a.count_ones(), b.count_ones());
    wa < wb || (wa == wb && lex_less(a, b))
}

/// Minimum-weight, then lexicographically least, vector of `v + C`.
fn coset_leader(code: &LinearCode, v: u64) -> u64 {
    let mut best = v;
    gray_walk(v, &code.rows, &mut |x| {
        if precedes(x, best) {
            best = x;
        }
    });
    best
}

type GmLines<'a> = std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>;

fn gm_lines(text: &str) -> GmLines<'_> {
    let it: Box<dyn Iterator<Item = (usize, &str)>> = Box::new(
        text.lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
    );
    it.peekable()
}

fn parse_gm_block(lines: &mut GmLines<'_>, allow_dependent: bool) -> Result<LinearCode> {
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let mut it = header.split_whitespace();
    let parse_num = |t: Option<&str>, what: &str| -> Result<usize> {
        t.ok_or_else(|| Error::parse(hl, format!("missing {what}")))?
            .parse::<usize>()
            .map_err(|_| Error::parse(hl, format!("invalid {what}")))
    };
    let n = parse_num(it.next(), "length n")?;
    let k = parse_num(it.next(), "dimension k")?;
    if it.next().is_some() {
        return Err(Error::parse(hl, "trailing tokens in header"));
    }
    if n == 0 || n > MAX_LENGTH {
        return Err(Error::parse(hl, format!("length must be in 1..={MAX_LENGTH}")));
    }
    if k > n {
        return Err(Error::parse(hl, "dimension exceeds length"));
    }
    let mut rows = Vec::with_capacity(k);
    for _ in 0..k {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| Error::parse(hl, format!("expected {k} rows")))?;
        if l.len() != n {
            return Err(Error::parse(ln, format!("row has {} characters, expected {n}", l.len())));
        }
        let mut w = 0u64;
        for (i, c) in l.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => w |= 1 << i,
                _ => return Err(Error::parse(ln, "row contains a character other than 0 or 1")),
            }
        }
        rows.push(w);
    }
    if allow_dependent {
        LinearCode::span(n, rows)
    } else {
        LinearCode::from_generators(n, rows)
    }
}

/// Calls `f` on `start + c` for every `c` in the span of `rows`.
pub(crate) fn gray_walk(start: u64, rows: &[u64], f: &mut impl FnMut(u64)) {
    let mut cur = start;
    f(cur);
    let total: u64 = 1u64 << rows.len();
    for i in 1..total {
        cur ^= rows[i.trailing_zeros() as usize];
        f(cur);
    }
}

/// Basis of `{c ∈ span(rows) : c vanishes on coords}`.
pub(crate) fn vanishing_subcode(rows: &[u64], coords: &[usize]) -> Vec<u64> {
    let mut rows = rows.to_vec();
    for &c in coords {
        if let Some(p) = rows.iter().position(|r| r >> c & 1 == 1) {
            let pr = rows.swap_remove(p);
            for r in rows.iter_mut() {
                if *r >> c & 1 == 1 {
                    *r ^= pr;
                }
            }
        }
    }
    rows
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightDistribution {
    counts: Vec<u64>,
}

impl WeightDistribution {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        WeightDistribution { counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `A_w`, zero when `w` exceeds the length.
    pub fn a(&self, w: usize) -> u64 {
        self.counts.get(w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn min_nonzero(&self) -> Option<usize> {
        (1..self.counts.len()).find(|&w| self.counts[w] > 0)
    }

    pub fn nonzero_terms(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(w, &c)| (w, c))
    }
}

impl fmt::Display for WeightDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (w, c) in self.nonzero_terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match w {
                0 => write!(f, "{c}")?,
                _ => write!(f, "{c} y^{w}")?,
            }
        }
        Ok(())
    }
}

/// Coset split of `C₀⊥` for a singly even self-dual code `C`.
///
/// `C = C₀ ∪ (c2 + C₀)` and the shadow is `(c1 + C₀) ∪ (c3 + C₀)`. Each
/// representative is the minimum-weight, lexicographically least vector
/// of its coset; `C₁` is the coset whose representative comes first.
#[derive(Clone, Debug)]
pub struct ShadowDecomposition {
    pub c0: LinearCode,
    pub c1: u64,
    pub c2: u64,
    pub c3: u64,
    pub shadow_weights: WeightDistribution,
}

impl ShadowDecomposition {
    /// The shadow never contains the zero vector.
    pub fn shadow_min_weight(&self) -> usize {
        self.shadow_weights.min_nonzero().unwrap_or(0)
    }
}

/// Standard small codes used as seeds and test fixtures.
pub mod known {
    use super::LinearCode;

    /// The repetition code `{00, 11}`.
    pub fn i2() -> LinearCode {
        LinearCode::from_generators(2, vec![0b11]).unwrap()
    }

    /// The [8,4,4] extended Hamming code.
    pub fn e8() -> LinearCode {
        let rows = ["11110000", "00111100", "00001111", "01010101"];
        LinearCode::from_generators(8, rows.iter().map(|r| parse_word(r)).collect()).unwrap()
    }

    /// The extended binary Golay code [24,12,8].
    pub fn golay() -> LinearCode {
        // cyclic [23,12] Golay generator g(x) = 1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11
        let g: u64 = (1 << 0) | (1 << 2) | (1 << 4) | (1 << 5) | (1 << 6) | (1 << 10) | (1 << 11);
        let rows = (0..12)
            .map(|s| {
                let r = g << s;
                r | (((r.count_ones() & 1) as u64) << 23)
            })
            .collect();
        LinearCode::from_generators(24, rows).unwrap()
    }

    /// The length-16 code `d16+`: the even-sum span of `1111` shifted by two,
    /// extended by the glue word `(01)^8`.
    pub fn d16_plus() -> LinearCode {
        let mut rows: Vec<u64> = (0..7).map(|i| 0b1111u64 << (2 * i)).collect();
        rows.push(parse_word("0101010101010101"));
        LinearCode::from_generators(16, rows).unwrap()
    }

    /// `⟨1⟩` of length `n`.
    pub fn all_ones(n: usize) -> LinearCode {
        LinearCode::span(n, vec![super::low_mask(n)]).unwrap()
    }

    /// `e8 ⊕ … ⊕ e8` of length `8m`.
    pub fn e8_power(m: usize) -> LinearCode {
        let mut c = e8();
        for _ in 1..m {
            c = c.direct_sum(&e8()).unwrap();
        }
        c
    }

    /// `i2 ⊕ … ⊕ i2` of length `2m`.
    pub fn i2_power(m: usize) -> LinearCode {
        let mut c = i2();
        for _ in 1..m {
            c = c.direct_sum(&i2()).unwrap();
        }
        c
    }

    pub(crate) fn parse_word(s: &str) -> u64 {
        s.bytes()
            .enumerate()
            .filter(|(_, b)| *b == b'1')
            .fold(0, |w, (i, _)| w | 1 << i)
    }
}

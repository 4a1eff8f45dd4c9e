//! Catalog records, the one-line-per-record file format, a deduplicating
//! on-disk store and ingest of external generator-matrix files.
//!
//! A catalog line reads `n k d a4 aut_order canonical_hash hex_rows provenance`.
//! Each row of `hex_rows` is the n-bit string with coordinate 1 as the most
//! significant bit, left-padded to `ceil(n/4)` hex digits; rows are joined
//! by `:`.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigUint;

use crate::code::LinearCode;
use crate::equiv::{self, CanonicalForm, Fingerprint};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A classified code in canonical coordinates.
#[derive(Clone, Debug)]
pub struct CatalogRecord {
    pub code: LinearCode,
    pub fingerprint: Fingerprint,
    pub canonical_hash: String,
    pub aut_order: BigUint,
    pub min_weight: usize,
    pub a4: u64,
    pub provenance: String,
    /// Automorphism generators in the coordinates of `code`.
    pub aut_gens: Vec<Permutation>,
}

fn clean_provenance(p: String) -> String {
    let t: String = p.split_whitespace().collect::<Vec<_>>().join("_");
    if t.is_empty() {
        "-".into()
    } else {
        t
    }
}

impl CatalogRecord {
    pub(crate) fn from_canonical(cf: CanonicalForm, provenance: String) -> Result<Self> {
        let inv = cf.relabeling.inverse();
        let aut_gens: Vec<Permutation> = cf
            .automorphisms
            .iter()
            .map(|g| inv.then(g).then(&cf.relabeling))
            .collect();
        let aut_order = crate::perm::PermGroup::new(cf.code.n(), aut_gens.clone())?.order();
        let mut fingerprint = equiv::fingerprint_key(&cf.code)?;
        fingerprint.aut_order = Some(aut_order.clone());
        Ok(CatalogRecord {
            min_weight: cf.code.min_weight()?,
            a4: cf.code.weight_distribution()?.a(4),
            code: cf.code,
            fingerprint,
            canonical_hash: cf.hash,
            aut_order,
            provenance: clean_provenance(provenance),
            aut_gens,
        })
    }

    /// Canonicalizes `code` and builds its record.
    pub fn from_code(code: &LinearCode, provenance: impl Into<String>) -> Result<Self> {
        Self::from_canonical(equiv::canonical_form(code)?, provenance.into())
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }

    /// Number of distinct permuted copies, `n!/#Aut(C)`.
    pub fn orbit_size(&self) -> BigUint {
        let fact: BigUint = (1..=self.n() as u64).map(BigUint::from).product();
        fact / &self.aut_order
    }

    pub fn to_line(&self) -> String {
        CatalogLine {
            n: self.n(),
            k: self.code.dim(),
            d: self.min_weight,
            a4: self.a4,
            aut_order: self.aut_order.clone(),
            canonical_hash: self.canonical_hash.clone(),
            rows: self.code.rows().to_vec(),
            provenance: self.provenance.clone(),
        }
        .to_string()
    }

    /// Rebuilds a record from a parsed line, recomputing every stated
    /// quantity and reporting the first mismatch.
    pub fn from_line(line: &CatalogLine) -> Result<Self> {
        let code = LinearCode::from_generators(line.n, line.rows.clone())?;
        let rec = Self::from_code(&code, line.provenance.clone())?;
        let mut bad = Vec::new();
        if line.k != rec.code.dim() {
            bad.push(format!("k stated {} computed {}", line.k, rec.code.dim()));
        }
        if line.d != rec.min_weight {
            bad.push(format!("d stated {} computed {}", line.d, rec.min_weight));
        }
        if line.a4 != rec.a4 {
            bad.push(format!("a4 stated {} computed {}", line.a4, rec.a4));
        }
        if line.aut_order != rec.aut_order {
            bad.push(format!("aut_order stated {} computed {}", line.aut_order, rec.aut_order));
        }
        if line.canonical_hash != rec.canonical_hash {
            bad.push("canonical hash mismatch".to_string());
        }
        if rec.code != code {
            bad.push("rows are not in canonical form".to_string());
        }
        if !bad.is_empty() {
            return Err(Error::Validation(bad.join("; ")));
        }
        Ok(rec)
    }
}

/// Syntactic content of one catalog line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogLine {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub a4: u64,
    pub aut_order: BigUint,
    pub canonical_hash: String,
    pub rows: Vec<u64>,
    pub provenance: String,
}

pub fn row_to_hex(row: u64, n: usize) -> String {
    let mut v = 0u64;
    for i in 0..n {
        if row >> i & 1 == 1 {
            v |= 1 << (n - 1 - i);
        }
    }
    format!("{:0width$x}", v, width = n.div_ceil(4))
}

pub fn row_from_hex(s: &str, n: usize) -> Option<u64> {
    if s.len() != n.div_ceil(4) || !s.bytes().all(|b| b.is_ascii_hexdigit()) {
        return None;
    }
    let v = u64::from_str_radix(s, 16).ok()?;
    if n < 64 && v >> n != 0 {
        return None;
    }
    let mut row = 0u64;
    for i in 0..n {
        if v >> (n - 1 - i) & 1 == 1 {
            row |= 1 << i;
        }
    }
    Some(row)
}

impl std::fmt::Display for CatalogLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let hex: Vec<String> = self.rows.iter().map(|&r| row_to_hex(r, self.n)).collect();
        write!(
            f,
            "{} {} {} {} {} {} {} {}",
            self.n,
            self.k,
            self.d,
            self.a4,
            self.aut_order,
            self.canonical_hash,
            if hex.is_empty() { "-".to_string() } else { hex.join(":") },
            self.provenance
        )
    }
}

impl CatalogLine {
    pub fn parse(text: &str, line_no: usize) -> Result<Self> {
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.len() != 8 {
            return Err(Error::parse(line_no, format!("expected 8 fields, found {}", toks.len())));
        }
        fn num<T: FromStr>(t: &str, what: &str, line_no: usize) -> Result<T> {
            t.parse().map_err(|_| Error::parse(line_no, format!("invalid {what}")))
        }
        let n: usize = num(toks[0], "n", line_no)?;
        if n == 0 || n > crate::code::MAX_LENGTH {
            return Err(Error::parse(line_no, "length out of range"));
        }
        let k: usize = num(toks[1], "k", line_no)?;
        let d: usize = num(toks[2], "d", line_no)?;
        let a4: u64 = num(toks[3], "a4", line_no)?;
        let aut_order: BigUint = num(toks[4], "aut_order", line_no)?;
        let hash = toks[5];
        if hash.len() != 64 || !hash.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f')) {
            return Err(Error::parse(line_no, "canonical hash must be 64 lowercase hex digits"));
        }
        let rows: Vec<u64> = if toks[6] == "-" {
            Vec::new()
        } else {
            toks[6]
                .split(':')
                .map(|h| row_from_hex(h, n).ok_or_else(|| Error::parse(line_no, "invalid hex row")))
                .collect::<Result<_>>()?
        };
        if rows.len() != k {
            return Err(Error::parse(line_no, format!("k = {k} but {} rows given", rows.len())));
        }
        Ok(CatalogLine {
            n,
            k,
            d,
            a4,
            aut_order,
            canonical_hash: hash.to_string(),
            rows,
            provenance: toks[7].to_string(),
        })
    }
}

/// Parses a catalog file (blank lines and `#` comments ignored).
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogLine>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| CatalogLine::parse(l, i + 1))
        .collect()
}

/// Writes `contents` to `path` through a temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("catalog")
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn line_order(a: &CatalogLine, b: &CatalogLine) -> std::cmp::Ordering {
    (a.n, a.d, a.a4, &a.aut_order, &a.rows).cmp(&(b.n, b.d, b.a4, &b.aut_order, &b.rows))
}

/// Sorted catalog text for a set of records.
pub fn format_catalog(records: &[CatalogRecord]) -> String {
    let mut lines: Vec<CatalogLine> = records.iter().map(|r| CatalogLine::parse(&r.to_line(), 0).unwrap()).collect();
    lines.sort_by(line_order);
    lines.iter().map(|l| format!("{l}\n")).collect()
}

/// Directory of catalog files, one per `(n, d)`, indexed by canonical hash.
pub struct CatalogStore {
    path: PathBuf,
    files: BTreeMap<(usize, usize), Vec<CatalogLine>>,
    index: HashMap<String, ((usize, usize), usize)>,
}

impl CatalogStore {
    pub fn file_name(n: usize, d: usize) -> String {
        format!("n{n}_d{d}.cat")
    }

    /// Opens (creating if needed) a store directory and loads its index.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        fs::create_dir_all(&path)?;
        let mut store = CatalogStore {
            path,
            files: BTreeMap::new(),
            index: HashMap::new(),
        };
        let mut names: Vec<PathBuf> = fs::read_dir(&store.path)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "cat"))
            .collect();
        names.sort();
        for p in names {
            for line in parse_catalog(&fs::read_to_string(&p)?)? {
                store.add_line(line)?;
            }
        }
        store.reindex();
        Ok(store)
    }

    fn add_line(&mut self, line: CatalogLine) -> Result<bool> {
        if self.index.contains_key(&line.canonical_hash) {
            return Ok(false);
        }
        let key = (line.n, line.d);
        let lines = self.files.entry(key).or_default();
        self.index.insert(line.canonical_hash.clone(), (key, lines.len()));
        lines.push(line);
        Ok(true)
    }

    fn reindex(&mut self) {
        self.index.clear();
        for (key, lines) in self.files.iter_mut() {
            lines.sort_by(line_order);
            for (i, l) in lines.iter().enumerate() {
                self.index.insert(l.canonical_hash.clone(), (*key, i));
            }
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn contains(&self, hash: &str) -> bool {
        self.index.contains_key(hash)
    }

    pub fn get(&self, hash: &str) -> Option<&CatalogLine> {
        self.index.get(hash).map(|(k, i)| &self.files[k][*i])
    }

    pub fn index(&self) -> &HashMap<String, ((usize, usize), usize)> {
        &self.index
    }

    /// All lines, in file order.
    pub fn lines(&self) -> impl Iterator<Item = &CatalogLine> {
        self.files.values().flatten()
    }

    /// Lines of length `n`.
    pub fn lines_of_length(&self, n: usize) -> Vec<&CatalogLine> {
        self.lines().filter(|l| l.n == n).collect()
    }

    /// Inserts a record; returns false if its class is already present.
    /// The affected file is rewritten atomically.
    pub fn insert(&mut self, rec: &CatalogRecord) -> Result<bool> {
        self.insert_many(std::slice::from_ref(rec)).map(|c| c == 1)
    }

    /// Inserts records, returning how many were new.
    pub fn insert_many(&mut self, recs: &[CatalogRecord]) -> Result<usize> {
        let mut touched = Vec::new();
        let mut added = 0;
        for rec in recs {
            let line = CatalogLine::parse(&rec.to_line(), 0)?;
            let key = (line.n, line.d);
            if self.add_line(line)? {
                added += 1;
                touched.push(key);
            }
        }
        self.reindex();
        touched.sort();
        touched.dedup();
        for key in touched {
            self.flush(key)?;
        }
        Ok(added)
    }

    fn flush(&self, key: (usize, usize)) -> Result<()> {
        let text: String = self.files[&key].iter().map(|l| format!("{l}\n")).collect();
        write_atomic(&self.path.join(Self::file_name(key.0, key.1)), &text)
    }

    /// Re-verifies every line (canonical form, aut order, d, a4).
    pub fn verify(&self) -> Vec<(String, Result<CatalogRecord>)> {
        use rayon::prelude::*;
        let lines: Vec<&CatalogLine> = self.lines().collect();
        lines
            .par_iter()
            .map(|l| (l.canonical_hash.clone(), CatalogRecord::from_line(l)))
            .collect()
    }
}

/// Input formats accepted by [`ingest`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IngestFormat {
    Gm,
    CatalogLine,
}

/// One ingested entry: the record, or the reason it was rejected.
pub type IngestResult = std::result::Result<CatalogRecord, Error>;

/// Reads a file of codes and re-verifies each entry. Parse errors abort;
/// validation failures are reported per entry.
pub fn ingest(path: impl AsRef<Path>, format: IngestFormat, allow_dependent: bool) -> Result<Vec<IngestResult>> {
    let text = fs::read_to_string(path)?;
    ingest_str(&text, format, allow_dependent)
}

pub fn ingest_str(text: &str, format: IngestFormat, allow_dependent: bool) -> Result<Vec<IngestResult>> {
    let check = |rec: CatalogRecord| -> IngestResult {
        if !rec.code.is_self_dual() {
            return Err(Error::Validation("code is not self-dual".into()));
        }
        Ok(rec)
    };
    match format {
        IngestFormat::Gm => {
            let codes = LinearCode::parse_gm_many(text, allow_dependent)?;
            Ok(codes
                .iter()
                .map(|c| CatalogRecord::from_code(c, "ingest").and_then(check))
                .collect())
        }
        IngestFormat::CatalogLine => {
            let lines = parse_catalog(text)?;
            Ok(lines
                .iter()
                .map(|l| CatalogRecord::from_line(l).and_then(check))
                .collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::known;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hex_rows_convention() {
        // coordinate 1 is the most significant bit
        assert_eq!(row_to_hex(0b1, 8), "80");
        assert_eq!(row_to_hex(0b1111, 8), "f0");
        assert_eq!(row_to_hex(1 << 9, 10), "001");
        for n in 1..=64usize {
            let w = if n == 64 { u64::MAX } else { (1u64 << n) - 1 } & 0x5555_5555_5555_5555;
            assert_eq!(row_from_hex(&row_to_hex(w, n), n), Some(w));
        }
        assert_eq!(row_from_hex("ff", 7), None);
    }

    #[test]
    fn record_line_round_trip() {
        let rec = CatalogRecord::from_code(&known::e8(), "seed").unwrap();
        let line = rec.to_line();
        let parsed = CatalogLine::parse(&line, 1).unwrap();
        assert_eq!(parsed.to_string(), line);
        let back = CatalogRecord::from_line(&parsed).unwrap();
        assert_eq!(back.code, rec.code);
        assert_eq!(back.aut_order, BigUint::from(1344u32));
        assert_eq!(back.min_weight, 4);
    }

    #[test]
    fn catalog_line_errors() {
        assert!(matches!(CatalogLine::parse("8 4 4", 3), Err(Error::Parse { line: 3, .. })));
        let rec = CatalogRecord::from_code(&known::e8(), "seed").unwrap();
        let bad = rec.to_line().replacen("1344", "1345", 1);
        let parsed = CatalogLine::parse(&bad, 1).unwrap();
        assert!(matches!(CatalogRecord::from_line(&parsed), Err(Error::Validation(_))));
    }

    #[test]
    fn store_dedups_permuted_copies_and_reloads() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = CatalogStore::open(dir.path()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = known::golay();
        for _ in 0..2 {
            let mut v: Vec<usize> = (0..24).collect();
            v.shuffle(&mut rng);
            let p = Permutation::from_images(v).unwrap();
            store.insert(&CatalogRecord::from_code(&g.permute(&p), "test").unwrap()).unwrap();
        }
        store.insert(&CatalogRecord::from_code(&known::e8(), "test").unwrap()).unwrap();
        assert_eq!(store.len(), 2);
        let reloaded = CatalogStore::open(dir.path()).unwrap();
        assert_eq!(reloaded.index(), store.index());
        assert!(reloaded.verify().iter().all(|(_, r)| r.is_ok()));
    }

    #[test]
    fn ingest_gm_and_export_round_trip() {
        let text = known::e8().to_gm();
        let recs = ingest_str(&text, IngestFormat::Gm, false).unwrap();
        assert_eq!(recs.len(), 1);
        let rec = recs[0].as_ref().unwrap();
        assert_eq!(rec.min_weight, 4);
        let exported = format_catalog(&[rec.clone()]);
        let again = ingest_str(&exported, IngestFormat::CatalogLine, false).unwrap();
        assert_eq!(format_catalog(&[again[0].as_ref().unwrap().clone()]), exported);
        let dependent = "4 2\n1100\n1100\n";
        assert!(matches!(ingest_str(dependent, IngestFormat::Gm, false), Err(Error::Validation(_))));
        let ok = ingest_str("4 2\n1100\n0011\n", IngestFormat::Gm, false).unwrap();
        assert!(ok[0].is_ok());
        let not_sd = ingest_str("4 1\n1100\n", IngestFormat::Gm, false).unwrap();
        assert!(not_sd[0].is_err());
    }
}

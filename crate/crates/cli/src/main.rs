use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sdcode::catalog::{self, CatalogRecord, CatalogStore, IngestFormat};
use sdcode::classify::{self, ClassifyOptions, MassAccount, Method};
use sdcode::construct::{self, GlueSpec};
use sdcode::equiv;
use sdcode::quad::{self, QuotientSpace};
use sdcode::{Error, LinearCode, Result};

#[derive(Parser)]
#[command(name = "sdcode", version, about = "Doubly even self-dual binary codes")]
struct Cli {
    /// Worker threads (defaults to SDCODE_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the number of distinct doubly even self-dual codes of length N.
    Mass {
        n: usize,
        /// Count all self-dual codes instead.
        #[arg(long)]
        self_dual: bool,
    },
    /// Classify all doubly even self-dual codes of length N.
    Classify {
        n: usize,
        #[arg(long, default_value = "neighbor")]
        method: String,
        /// Catalog directory to write into; prints lines to stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Maximum number of shards for this run.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Test two codes for equivalence and print a witness.
    Equiv { a: PathBuf, b: PathBuf },
    /// Automorphism group order and generators.
    Aut { file: PathBuf },
    /// Covering radius with a deepest-hole witness.
    Covrad { file: PathBuf },
    /// Weight distribution.
    Weights { file: PathBuf },
    /// Shadow weight distribution of a singly even self-dual code.
    Shadow { file: PathBuf },
    /// Lift a self-dual code of length n to a doubly even one of length n+2.
    Lift { file: PathBuf },
    /// Glue two doubly even codes containing 1 along an isometry.
    Glue {
        a: PathBuf,
        b: PathBuf,
        /// Print one code per double coset instead of a single glue.
        #[arg(long)]
        all: bool,
    },
    /// Subtract a coordinate pair (1-based), or list admissible pairs.
    Subtract {
        file: PathBuf,
        i: Option<usize>,
        j: Option<usize>,
        #[arg(long)]
        extremal_pairs: bool,
    },
    /// Recompute every catalog line and optionally the mass totals.
    VerifyCatalog {
        dir: PathBuf,
        #[arg(long)]
        mass: bool,
    },
    /// Tabulate invariants of a catalog directory.
    Census { dir: PathBuf },
    /// Verify codes from a file and add them to a catalog directory.
    Ingest {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Input is catalog lines rather than GM blocks.
        #[arg(long)]
        catalog_lines: bool,
        #[arg(long)]
        allow_dependent: bool,
    },
}

fn read_code(path: &Path) -> Result<LinearCode> {
    LinearCode::parse_gm(&fs::read_to_string(path)?, false)
}

fn word(x: u64, n: usize) -> String {
    (0..n).map(|i| if x >> i & 1 == 1 { '1' } else { '0' }).collect()
}

fn print_weights(wd: &sdcode::WeightDistribution) {
    for (w, a) in wd.nonzero_terms() {
        println!("{w}\t{a}");
    }
}

fn store_records(dir: &Path) -> Result<Vec<CatalogRecord>> {
    let store = CatalogStore::open(dir)?;
    let mut out = Vec::new();
    for (hash, r) in store.verify() {
        out.push(r.map_err(|e| Error::Validation(format!("{hash}: {e}")))?);
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Mass { n, self_dual } => {
            let m = if self_dual { classify::self_dual_mass(n)? } else { classify::mass(n)? };
            println!("{m}");
        }
        Cmd::Classify {
            n,
            method,
            out,
            checkpoint,
            budget,
        } => {
            let method: Method = method.parse()?;
            let opts = ClassifyOptions { checkpoint, budget };
            let c = classify::classify_doubly_even(n, method, &opts)?;
            match &out {
                Some(dir) => {
                    CatalogStore::open(dir)?.insert_many(&c.records)?;
                }
                None => print!("{}", catalog::format_catalog(&c.records)),
            }
            let mut by_d: BTreeMap<usize, usize> = BTreeMap::new();
            for r in &c.records {
                *by_d.entry(r.min_weight).or_default() += 1;
            }
            let split: Vec<String> = by_d.iter().map(|(d, k)| format!("d{d}={k}")).collect();
            eprintln!(
                "n={n} method={} classes={} {} mass={} certificate=ok",
                method.name(),
                c.records.len(),
                split.join(" "),
                c.account.total
            );
        }
        Cmd::Equiv { a, b } => {
            let (a, b) = (read_code(&a)?, read_code(&b)?);
            match equiv::is_equivalent(&a, &b)? {
                Some(p) => {
                    println!("equivalent");
                    println!("{}", p.to_cycle_string());
                }
                None => {
                    println!("inequivalent");
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Cmd::Aut { file } => {
            let cf = equiv::canonical_form(&read_code(&file)?)?;
            let g = cf.aut_group();
            println!("order {}", g.order());
            for p in g.generators() {
                println!("{}", p.to_cycle_string());
            }
            eprintln!("hash {}", cf.hash);
        }
        Cmd::Covrad { file } => {
            let c = read_code(&file)?;
            let r = classify::covering_radius(&c)?;
            println!("radius {}", r.radius);
            println!("witness {}", word(r.witness, c.n()));
            for (w, k) in r.leader_weights.iter().enumerate() {
                println!("{w}\t{k}");
            }
        }
        Cmd::Weights { file } => print_weights(read_code(&file)?.weight_distribution()?),
        Cmd::Shadow { file } => {
            let s = read_code(&file)?.shadow()?;
            println!("min {}", s.shadow_min_weight());
            print_weights(&s.shadow_weights);
        }
        Cmd::Lift { file } => print!("{}", construct::bp_lift(&read_code(&file)?)?.to_gm()),
        Cmd::Glue { a, b, all } => {
            let (c1, c2) = (read_code(&a)?, read_code(&b)?);
            if all {
                for c in construct::glue_family(&c1, &c2)? {
                    print!("{}", c.to_gm());
                }
            } else {
                let q1 = QuotientSpace::of_code(&c1)?;
                let q2 = QuotientSpace::of_code(&c2)?;
                let f = quad::find_isometry(&q1, &q2)?
                    .ok_or_else(|| Error::Precondition("the quotient forms are not isometric".into()))?;
                print!("{}", construct::glue(&GlueSpec::new(c1, c2, f)?)?.to_gm());
            }
        }
        Cmd::Subtract {
            file,
            i,
            j,
            extremal_pairs,
        } => {
            let c = read_code(&file)?;
            if extremal_pairs {
                let delta = construct::self_dual_weight_bound(c.n() - 2);
                for (i, j) in construct::subtraction_pairs(&c, delta)? {
                    println!("{} {}", i + 1, j + 1);
                }
            } else {
                let (Some(i), Some(j)) = (i, j) else {
                    return Err(Error::Precondition("give a coordinate pair or --extremal-pairs".into()));
                };
                if i == 0 || j == 0 {
                    return Err(Error::Precondition("coordinates are 1-based".into()));
                }
                print!("{}", c.subtract(i - 1, j - 1)?.to_gm());
            }
        }
        Cmd::VerifyCatalog { dir, mass } => {
            let store = CatalogStore::open(&dir)?;
            let mut bad = 0;
            let mut by_n: BTreeMap<usize, Vec<CatalogRecord>> = BTreeMap::new();
            for (hash, r) in store.verify() {
                match r {
                    Ok(rec) => by_n.entry(rec.n()).or_default().push(rec),
                    Err(e) => {
                        bad += 1;
                        println!("FAIL {hash} {e}");
                    }
                }
            }
            println!("verified {} lines, {} failed", store.len(), bad);
            if bad > 0 {
                return Err(Error::Validation(format!("{bad} catalog lines failed verification")));
            }
            if mass {
                let mut incomplete = None;
                for (n, recs) in &by_n {
                    let acc = MassAccount::of_records(*n, classify::mass(*n)?, recs)?;
                    println!(
                        "n={n} classes={} total={} expected={} {}",
                        recs.len(),
                        acc.total,
                        acc.expected,
                        if acc.is_complete() { "complete" } else { "incomplete" }
                    );
                    if !acc.is_complete() {
                        incomplete = Some(acc.incomplete_error());
                    }
                }
                if let Some(e) = incomplete {
                    return Err(e);
                }
            }
        }
        Cmd::Census { dir } => print!("{}", classify::census(&store_records(&dir)?)?),
        Cmd::Ingest {
            file,
            out,
            catalog_lines,
            allow_dependent,
        } => {
            let fmt = if catalog_lines { IngestFormat::CatalogLine } else { IngestFormat::Gm };
            let results = catalog::ingest(&file, fmt, allow_dependent)?;
            let mut store = CatalogStore::open(&out)?;
            let mut rejected = 0;
            let mut good = Vec::new();
            for (i, r) in results.into_iter().enumerate() {
                match r {
                    Ok(rec) => good.push(rec),
                    Err(e) => {
                        rejected += 1;
                        println!("reject {} {e}", i + 1);
                    }
                }
            }
            let added = store.insert_many(&good)?;
            println!("added {added}, duplicates {}, rejected {rejected}", good.len() - added);
            if rejected > 0 {
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| std::env::var("SDCODE_THREADS").ok().and_then(|s| s.parse().ok()));
    if let Some(t) = threads {
        if rayon::ThreadPoolBuilder::new().num_threads(t).build_global().is_err() {
            eprintln!("error: could not start the worker pool");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

//! `solenoid`: classify solenoid presentations and explore their odometers.
//!
//! Output is line-oriented `field: value` records on standard output.
//! Diagnostics go to standard error. Exit status is 0 when a report was
//! computed and 2 on any input error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};

use solenoid_core::bundles::AdicSurface;
use solenoid_core::classify::{
    classify_adic_surfaces, classify_toral, classify_vietoris, generate_counterexample, Outcome, Verdict,
};
use solenoid_core::odometer::{ClopenSet, TowerPoint, TruncatedTower};
use solenoid_core::presentation::{self, parse_u64_list, Presentation};
use solenoid_core::pseudogroup::RestrictedAction;
use solenoid_core::supernatural::{characteristic, BondingSequence, SupernaturalNumber};
use solenoid_core::toral::{kernel_lattice_at_depth, lattice_invariants, quotient_invariants, MatrixChain};

#[derive(Parser)]
#[command(name = "solenoid", version, about = "Invariants and homeomorphism verdicts for weak solenoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two presentations give homeomorphic spaces.
    Classify {
        left: PathBuf,
        right: PathBuf,
        /// Depth of the toral screen.
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Print successive residues of the odometer `x -> x + 1` on `Z/M_depth`.
    Odometer {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value = "0")]
        start: BigUint,
        #[arg(long)]
        steps: u64,
    },
    /// Test a clopen window for a collapsible restricted action.
    Collapsible {
        #[command(flatten)]
        seq: SeqArgs,
        /// Comma-separated residues modulo `M_level`.
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        level: usize,
        /// Tower depth used for the refinement; defaults to the level.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Write a return-equivalent but non-homeomorphic pair of adic surfaces.
    Counterexample {
        #[arg(long)]
        genus: i64,
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// List the invariants of one presentation.
    Invariants {
        file: PathBuf,
        /// Number of levels listed for toral chains.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

#[derive(Args)]
struct SeqArgs {
    /// Comma-separated prefix degrees.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    prefix: String,
    /// Comma-separated period degrees.
    #[arg(long, allow_hyphen_values = true)]
    period: String,
}

impl SeqArgs {
    fn sequence(&self) -> Result<BondingSequence, String> {
        let prefix = parse_u64_list(&self.prefix).map_err(|e| format!("--prefix: {e}"))?;
        let period = parse_u64_list(&self.period).map_err(|e| format!("--period: {e}"))?;
        BondingSequence::new(prefix, period).map_err(|e| e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<String, String> {
    match command {
        Command::Classify { left, right, depth } => cmd_classify(&left, &right, depth),
        Command::Odometer { seq, depth, start, steps } => cmd_odometer(&seq, depth, start, steps),
        Command::Collapsible { seq, set, level, depth } => cmd_collapsible(&seq, &set, level, depth),
        Command::Counterexample { genus, seq, out_dir } => cmd_counterexample(genus, &seq, &out_dir),
        Command::Invariants { file, depth } => cmd_invariants(&file, depth),
    }
}

fn load(path: &Path) -> Result<Presentation, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    presentation::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_classify(left: &Path, right: &Path, depth: usize) -> Result<String, String> {
    let (a, b) = (load(left)?, load(right)?);
    let verdict = match (&a, &b) {
        (Presentation::Vietoris(x), Presentation::Vietoris(y)) => classify_vietoris(x, y),
        (Presentation::AdicSurface(x), Presentation::AdicSurface(y)) => classify_adic_surfaces(x, y),
        (Presentation::Toral(x), Presentation::Toral(y)) if x.dimension() == y.dimension() => {
            classify_toral(x, y, depth).map_err(|e| e.to_string())?
        }
        (Presentation::Toral(x), Presentation::Toral(y)) => {
            return Err(format!("KindMismatch: toral chains of dimension {} and {}", x.dimension(), y.dimension()))
        }
        _ => return Err(format!("KindMismatch: cannot compare {} with {}", a.kind(), b.kind())),
    };
    Ok(verdict_record(a.kind().as_str(), &verdict))
}

fn verdict_record(kind: &str, v: &Verdict) -> String {
    let mut out = format!("kind: {kind}\nverdict: {}\n", v.outcome.tag());
    if let Outcome::ConsistentAtDepth(d) = v.outcome {
        let _ = writeln!(out, "depth: {d}");
    }
    let witness = v.witness_prime.map_or("none".to_owned(), |p| p.to_string());
    let _ = write!(out, "rule: {}\nwitness_prime: {witness}\ncertificate: {}\n", v.rule, v.certificate);
    out
}

fn cmd_odometer(seq: &SeqArgs, depth: usize, start: BigUint, steps: u64) -> Result<String, String> {
    let tower = TruncatedTower::shared(seq.sequence()?, depth).map_err(|e| e.to_string())?;
    let mut p = TowerPoint::new(tower, start).map_err(|e| format!("--start: {e}"))?;
    let mut out = String::new();
    for _ in 0..steps {
        p = p.add_one();
        let _ = writeln!(out, "{p}");
    }
    Ok(out)
}

fn cmd_collapsible(seq: &SeqArgs, set: &str, level: usize, depth: Option<usize>) -> Result<String, String> {
    let depth = depth.unwrap_or(level);
    if depth < level {
        return Err(format!("--depth {depth} is below --level {level}"));
    }
    let residues = parse_u64_list(set).map_err(|e| format!("--set: {e}"))?;
    let tower = TruncatedTower::shared(seq.sequence()?, depth.max(1)).map_err(|e| e.to_string())?;
    let window = ClopenSet::from_u64s(tower.clone(), level, &residues).map_err(|e| format!("--set: {e}"))?;
    let action = RestrictedAction::new(&tower, window.clone()).map_err(|e| e.to_string())?;

    let mut out = format!(
        "collapsible: {}\nlevel: {level}\nmodulus: {}\nwindow: {window}\n",
        action.is_collapsible(),
        tower.modulus(level)
    );
    if action.is_collapsible() {
        let iso = action.isotropy().map_err(|e| e.to_string())?;
        let parts = action.translates_partition().map_err(|e| e.to_string())?;
        let parts: Vec<String> = parts
            .iter()
            .map(|w| w.refine_to(level).map(|w| w.to_string()))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let _ = write!(out, "index: {}\ngenerator: {}\npartition: {}\n", iso.index, iso.generator, parts.join(" "));
    } else {
        let r = action.collapsible_refinement();
        let _ = write!(out, "refinement: {r}\nrefinement_level: {}\n", r.level());
    }
    Ok(out)
}

fn cmd_counterexample(genus: i64, seq: &SeqArgs, out_dir: &Path) -> Result<String, String> {
    let genus = u32::try_from(genus)
        .ok()
        .filter(|&g| g >= 2)
        .ok_or_else(|| format!("--genus must be at least 2, got {genus}"))?;
    let c = generate_counterexample(genus, &seq.sequence()?).map_err(|e| e.to_string())?;
    let write = |name: &str, s: &AdicSurface| -> Result<PathBuf, String> {
        let path = out_dir.join(name);
        fs::write(&path, Presentation::AdicSurface(s.clone()).render())
            .map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(path)
    };
    fs::create_dir_all(out_dir).map_err(|e| format!("{}: {e}", out_dir.display()))?;
    let original = write("original.toml", &c.original)?;
    let shifted = write("shifted.toml", &c.shifted)?;
    let verdict = classify_adic_surfaces(&c.original, &c.shifted);
    Ok(format!(
        "prime: {}\noriginal: {}\nshifted: {}\nreturn_equivalent: {}\nhomeomorphic: {}\nverdict: {}\nrule: {}\n",
        c.prime,
        original.display(),
        shifted.display(),
        solenoid_core::classify::adic_surfaces_return_equivalent(&c.original, &c.shifted),
        verdict.is_homeomorphic(),
        verdict.outcome.tag(),
        verdict.rule,
    ))
}

fn cmd_invariants(file: &Path, depth: usize) -> Result<String, String> {
    let p = load(file)?;
    let mut out = format!("kind: {}\n", p.kind());
    match &p {
        Presentation::Vietoris(seq) => out += &characteristic_fields(&characteristic(seq)),
        Presentation::AdicSurface(s) => {
            let _ = writeln!(out, "genus: {}", s.genus());
            out += &characteristic_fields(&characteristic(s.seq()));
        }
        Presentation::Toral(c) => out += &toral_fields(c, depth).map_err(|e| e.to_string())?,
    }
    Ok(out)
}

fn characteristic_fields(c: &SupernaturalNumber) -> String {
    let finite: Vec<String> = c.finite_part().iter().map(|(p, e)| format!("{p}:{e}")).collect();
    let infinite: Vec<String> = c.infinite_primes().iter().map(u64::to_string).collect();
    format!(
        "finite_part: {{{}}}\ninfinite_primes: {{{}}}\ncharacteristic: {c}\n",
        finite.join(", "),
        infinite.join(", ")
    )
}

fn toral_fields(c: &MatrixChain, depth: usize) -> solenoid_core::Result<String> {
    let factors = quotient_invariants(c, depth)?;
    let n = c.dimension();
    let levels: Vec<String> = factors
        .iter()
        .map(|fs| {
            // pad with ones so every level shows all n factors
            let mut all = vec![BigInt::from(1); n.saturating_sub(fs.len())];
            all.extend(fs.iter().cloned());
            format!("({})", all.iter().map(BigInt::to_string).collect::<Vec<_>>().join(","))
        })
        .collect();
    let kernel = kernel_lattice_at_depth(c, depth)?;
    let inv = lattice_invariants(&kernel);
    Ok(format!(
        "dimension: {n}\ndepth: {depth}\nfactors: [{}]\nkernel_hnf: {kernel}\nrank: {}\ntorsion_rank: {}\n",
        levels.join(","),
        inv.rank,
        inv.torsion_rank
    ))
}

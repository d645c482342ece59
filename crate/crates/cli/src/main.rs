use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;
use quiverepi::epibuild::{
    build_brick_hom, canonical_generic_hom, default_degree_bound, extend_add_arrows,
    extend_invariant, field_of_hom_json, glue_vertex, localisation_presentation,
    specialization_refutation_test, verify_epimorphism, InvariantCase,
};
use quiverepi::quiverrep::{end_dim, ext1_dim, is_brick, load_representation};
use quiverepi::{
    AlgebraHom, DimVector, EpiReport, Field, FieldKind, PrimeField, Quiver, Rationals,
    Representation, Verdict,
};

/// Exact checks of ring epimorphisms from path algebras into matrix algebras
/// over free algebras.
#[derive(Parser)]
#[command(name = "quiverepi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report End/Ext¹ dimensions and brick/exceptional status of a representation.
    Check {
        rep: PathBuf,
        #[arg(long, default_value = "q")]
        field: FieldKind,
    },
    /// Construct a homomorphism file.
    Build {
        #[command(subcommand)]
        kind: BuildKind,
    },
    /// Run the ideal criterion and the specialization test on a homomorphism file.
    Verify {
        hom: PathBuf,
        /// Must agree with the field recorded in the file.
        #[arg(long)]
        field: Option<FieldKind>,
        /// Defaults to 2 + max generator degree + max target degree.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value = "q", global = true)]
    field: FieldKind,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BuildKind {
    /// Action map of a brick.
    Brick {
        rep: PathBuf,
        #[arg(long)]
        allow_non_brick: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Extend a module's action map to a quiver with extra arrows.
    Extend {
        rep: PathBuf,
        quiver: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Extension along an arrow with invariant kernel and image.
    Invariant {
        rep: PathBuf,
        #[arg(long)]
        arrow: String,
        #[arg(long, default_value = "i")]
        case: InvariantCase,
        #[command(flatten)]
        common: Common,
    },
    /// Glue a new source vertex onto `vertex`.
    Glue {
        rep: PathBuf,
        #[arg(long)]
        vertex: String,
        #[command(flatten)]
        common: Common,
    },
    /// Generic map of a quiver at a dimension vector, e.g. `--dims "1=1, 2=2"`.
    Canonical {
        quiver: PathBuf,
        #[arg(long)]
        dims: String,
        #[command(flatten)]
        common: Common,
    },
    /// Generators of a localisation presented over an extended quiver.
    Presentation {
        quiver: PathBuf,
        rep: PathBuf,
        /// `arrow=p1,p2,...`: the path (in traversal order) an arrow of the
        /// module's quiver is sent to; repeat for each arrow.
        #[arg(long = "embed")]
        embed: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_quiver(path: &Path) -> Result<Quiver> {
    Quiver::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_rep<K: Field>(field: K, path: &Path) -> Result<Representation<K>> {
    Ok(load_representation(field, path)
        .with_context(|| format!("in {}", path.display()))?
        .rep)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check<K: Field>(field: K, path: &Path) -> Result<ExitCode> {
    let m = load_rep(field, path)?;
    if m.total_dim() == 0 {
        bail!(
            "{}: the zero module has no brick or exceptional status",
            path.display()
        );
    }
    let end = end_dim(&m)?;
    let ext = ext1_dim(&m, &m)?;
    let brick = is_brick(&m)?;
    println!("dimension vector: {}", m.dim_vector().to_text(m.quiver()));
    println!("End dimension: {end}");
    println!("Ext^1 dimension: {ext}");
    println!("brick: {brick}");
    println!("exceptional: {}", brick && ext == 0);
    Ok(ExitCode::SUCCESS)
}

fn parse_embedding(specs: &[String]) -> Result<BTreeMap<String, Vec<String>>> {
    let mut out = BTreeMap::new();
    for s in specs {
        let (arrow, path) = s
            .split_once('=')
            .ok_or_else(|| anyhow!("--embed `{s}`: expected arrow=p1,p2,..."))?;
        let path: Vec<String> = path
            .split(',')
            .map(|p| p.trim().to_string())
            .filter(|p| !p.is_empty())
            .collect();
        if out.insert(arrow.trim().to_string(), path).is_some() {
            bail!("--embed given twice for `{arrow}`");
        }
    }
    Ok(out)
}

fn log_hom<K: Field>(h: &AlgebraHom<K>) {
    info!(
        "built homomorphism into {0}x{0} matrices over {1} letters",
        h.size(),
        h.alphabet().len()
    );
    for note in h.notes() {
        eprintln!("note: {note}");
    }
}

fn build<K: Field>(field: K, kind: &BuildKind) -> Result<ExitCode> {
    let (h, out) = match kind {
        BuildKind::Brick {
            rep,
            allow_non_brick,
            common,
        } => (
            build_brick_hom(&load_rep(field, rep)?, *allow_non_brick)?,
            &common.out,
        ),
        BuildKind::Extend {
            rep,
            quiver,
            common,
        } => (
            extend_add_arrows(&load_rep(field, rep)?, &load_quiver(quiver)?)?,
            &common.out,
        ),
        BuildKind::Invariant {
            rep,
            arrow,
            case,
            common,
        } => (
            extend_invariant(&load_rep(field, rep)?, arrow, *case)?,
            &common.out,
        ),
        BuildKind::Glue {
            rep,
            vertex,
            common,
        } => (glue_vertex(&load_rep(field, rep)?, vertex)?, &common.out),
        BuildKind::Canonical {
            quiver,
            dims,
            common,
        } => {
            let q = load_quiver(quiver)?;
            let alpha = DimVector::parse(dims).context("--dims")?;
            (canonical_generic_hom(field, &q, &alpha)?, &common.out)
        }
        BuildKind::Presentation {
            quiver,
            rep,
            embed,
            common,
        } => {
            let p = localisation_presentation(
                &load_quiver(quiver)?,
                &parse_embedding(embed)?,
                &load_rep(field, rep)?,
            )?;
            log_hom(&p.canonical);
            let canonical: serde_json::Value = serde_json::from_str(&p.canonical.to_json())?;
            let generators: Vec<serde_json::Value> = p
                .ideal
                .generators()
                .iter()
                .zip(&p.sources)
                .map(|(g, s)| serde_json::json!({ "source": s, "generator": g.to_text() }))
                .collect();
            let doc = serde_json::json!({ "schema": 1, "generators": generators, "canonical": canonical });
            let mut text = serde_json::to_string_pretty(&doc)?;
            text.push('\n');
            emit(common.out.as_deref(), &text)?;
            return Ok(ExitCode::SUCCESS);
        }
    };
    log_hom(&h);
    emit(out.as_deref(), &h.to_json())?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn verify<K: Field>(
    field: K,
    text: &str,
    degree: Option<usize>,
    trials: usize,
    sizes: &[usize],
    seed: u64,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let h = AlgebraHom::from_json(field, text)?;
    let degree = match degree {
        Some(d) => d,
        None => default_degree_bound(&h)?,
    };
    info!("ideal criterion up to degree {degree}");
    let ideal = verify_epimorphism(&h, degree)?;
    info!("specialization test: {trials} trials for sizes {sizes:?}, seed {seed}");
    let spec = specialization_refutation_test(&h, trials, sizes, seed)?;
    let report = EpiReport::new(&h, ideal, Some(spec));
    emit(out, &report.to_json())?;
    Ok(match report.verdict {
        Verdict::Verified { degree } => {
            eprintln!("verified (degree {degree})");
            ExitCode::SUCCESS
        }
        Verdict::Refuted { .. } => {
            eprintln!("refuted by specialization");
            ExitCode::from(1)
        }
        Verdict::Undetermined { degree_bound } => {
            eprintln!("undetermined up to degree {degree_bound}; try a larger --degree");
            ExitCode::from(3)
        }
    })
}

fn with_field<T>(
    kind: FieldKind,
    q: impl FnOnce(Rationals) -> T,
    p: impl FnOnce(PrimeField) -> T,
) -> Result<T> {
    Ok(match kind {
        FieldKind::Rational => q(Rationals),
        FieldKind::Prime(n) => p(PrimeField::new(n)?),
    })
}

fn build_field(kind: &BuildKind) -> FieldKind {
    match kind {
        BuildKind::Brick { common, .. }
        | BuildKind::Extend { common, .. }
        | BuildKind::Invariant { common, .. }
        | BuildKind::Glue { common, .. }
        | BuildKind::Canonical { common, .. }
        | BuildKind::Presentation { common, .. } => common.field,
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check { rep, field } => with_field(field, |f| check(f, &rep), |f| check(f, &rep))?,
        Command::Build { kind } => {
            with_field(build_field(&kind), |f| build(f, &kind), |f| build(f, &kind))?
        }
        Command::Verify {
            hom,
            field,
            degree,
            trials,
            sizes,
            seed,
            out,
        } => {
            let text = read(&hom)?;
            let own = field_of_hom_json(&text).with_context(|| format!("in {}", hom.display()))?;
            if let Some(f) = field.filter(|f| *f != own) {
                bail!("{} is over {own}, but --field {f} was given", hom.display());
            }
            if sizes.contains(&0) {
                bail!("--sizes must be positive");
            }
            let out = out.as_deref();
            with_field(
                own,
                |f| verify(f, &text, degree, trials, &sizes, seed, out),
                |f| verify(f, &text, degree, trials, &sizes, seed, out),
            )?
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

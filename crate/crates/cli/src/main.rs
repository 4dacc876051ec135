mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rbcm_core::cayley::{brute_force_rbcms, build_map, trace_faces, MapType};
use rbcm_core::classify::{
    classify_2group, classify_coprime, classify_cyclic, classify_elementary, classify_generic, classify_rank2, cross_check,
};
use rbcm_core::factorlift::{component_contexts, factor_radical_sum, factor_xn_minus1, factor_xn_plus1, hensel_lift_factor, product, radical_sum_for};
use rbcm_core::ideals::{component_ideals, ideals_of_small_index, is_admissible, IdealPresentation};
use rbcm_core::poly::Poly;
use rbcm_core::structure::AbelianType;
use rbcm_core::zring::{is_prime, Modulus};
use rbcm_core::Error;

use render::{Doc, Format};

#[derive(Parser)]
#[command(name = "rbcm", version, about = "Regular balanced Cayley maps on abelian p-groups")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Labeled factorization of x^n+1, x^n-1 or the radical sum over Z_{p^k}.
    Factor {
        #[command(flatten)]
        ring: Ring,
        #[arg(long, value_enum, default_value_t = Target::Plus)]
        target: Target,
    },
    /// Hensel-lift a monic factor of the target from Z_p to Z_{p^k}.
    Lift {
        #[arg(long, value_parser = parse_prime)]
        p: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        /// Base factor over Z_p, ascending coefficients (e.g. "2,1,1").
        #[arg(long)]
        base: String,
        /// Target polynomial over Z_{p^k}, ascending coefficients.
        #[arg(long)]
        target: String,
    },
    /// Ideals of one CRT component, or all ideals of small index.
    Ideals {
        #[command(flatten)]
        ring: Ring,
        /// Component label "d,l"; without it, list ideals of index <= --max-index.
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        max_index: Option<u128>,
        /// Keep only ideals admissible at valence 2n (needs --max-index).
        #[arg(long, conflicts_with = "label")]
        admissible: bool,
    },
    /// Run one classification family.
    Classify {
        #[command(subcommand)]
        family: Family,
    },
    /// Brute-force enumeration of map classes on a group.
    Oracle(GroupArgs),
    /// Reconcile the classification family with the oracle.
    Crosscheck(GroupArgs),
    /// Rotation system of the standard map M_Q.
    ExportMap {
        /// Modulus N of the coefficient ring.
        #[arg(long)]
        modulus: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Generator of Q, ascending coefficients; repeat for several.
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
        #[arg(long = "type", value_enum, default_value_t = TypeArg::I)]
        map_type: TypeArg,
    },
}

#[derive(Args)]
struct Ring {
    #[arg(long, value_parser = parse_prime)]
    p: u64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
}

#[derive(Args)]
struct GroupArgs {
    /// Group, e.g. "Z4xZ2" or "Z3^2".
    #[arg(long)]
    group: String,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    valence: u64,
    #[arg(long = "type", value_enum, default_value_t = TypeArg::I)]
    map_type: TypeArg,
}

#[derive(Subcommand)]
enum Family {
    Cyclic {
        #[command(flatten)]
        ring: Ring,
    },
    Elementary {
        #[arg(long, value_parser = parse_prime)]
        p: u64,
        /// Rank of Z_p^m.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long = "type", value_enum, default_value_t = TypeArg::I)]
        map_type: TypeArg,
    },
    TwoGroup {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    Coprime {
        #[command(flatten)]
        ring: Ring,
    },
    Rank2 {
        #[command(flatten)]
        ring: Ring,
        /// Exponent of the smaller cyclic factor.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k2: u32,
    },
    Generic {
        #[arg(long)]
        group: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Plus,
    Minus,
    Radical,
}

#[derive(Clone, Copy, ValueEnum)]
enum TypeArg {
    I,
    Ii,
}

impl From<TypeArg> for MapType {
    fn from(t: TypeArg) -> Self {
        match t {
            TypeArg::I => MapType::I,
            TypeArg::Ii => MapType::II,
        }
    }
}

fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|e| format!("{e}"))?;
    if is_prime(p) && p < 1 << 31 {
        Ok(p)
    } else {
        Err(format!("{p} is not a prime below 2^31"))
    }
}

fn parse_poly(s: &str, md: Modulus) -> rbcm_core::Result<Poly> {
    let coeffs = s
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Error::InvalidParameter(format!("bad coefficient list {s:?}: {e}")))?;
    Ok(Poly::from_i64(&coeffs, md))
}

fn run(cli: &Cli) -> rbcm_core::Result<Doc> {
    match &cli.command {
        Command::Factor { ring, target } => {
            let Ring { p, k, n } = *ring;
            let md = Modulus::prime_power(p, k)?;
            let (name, factors, expected) = match target {
                Target::Plus => ("plus", factor_xn_plus1(p, k, n)?, Poly::x_pow_plus_one(n as usize, md)),
                Target::Minus => ("minus", factor_xn_minus1(p, k, n)?, Poly::x_pow_minus_one(n as usize, md)),
                Target::Radical => ("radical", factor_radical_sum(p, k, n)?, radical_sum_for(p, k, n)?),
            };
            let ok = product(&factors, md) == expected;
            Ok(render::factors(p, k, n, name, &factors, ok))
        }
        Command::Lift { p, k, base, target } => {
            let mk = Modulus::prime_power(*p, *k)?;
            let base = parse_poly(base, Modulus::prime_power(*p, 1)?)?;
            let target = parse_poly(target, mk)?;
            let lift = hensel_lift_factor(&base, *p, *k, &target)?;
            Ok(render::lift(&base, &target, &lift))
        }
        Command::Ideals { ring, label, max_index, admissible } => {
            let Ring { p, k, n } = *ring;
            let mut ideals = match (label, max_index) {
                (Some(lab), _) => {
                    let (d, l) = parse_label(lab)?;
                    if !component_contexts(p, k, n)?.iter().any(|(f, _)| f.d == d && f.l == l) {
                        return Err(Error::InvalidParameter(format!("({d}, {l}) is not a label of x^{n}+1 mod {p}")));
                    }
                    component_ideals(p, k, n, d, l)?
                }
                (None, Some(m)) => ideals_of_small_index(p, k, n, *m)?,
                (None, None) => return Err(Error::InvalidParameter("give --label or --max-index".into())),
            };
            if *admissible {
                let mut kept = Vec::new();
                for q in ideals {
                    if is_admissible(&q, n)? {
                        kept.push(q);
                    }
                }
                ideals = kept;
            }
            Ok(render::ideals(&ideals))
        }
        Command::Classify { family } => {
            let (name, maps) = match family {
                Family::Cyclic { ring } => ("cyclic", classify_cyclic(ring.p, ring.k, ring.n)?),
                Family::Elementary { p, m, n, map_type } => ("elementary", classify_elementary(*p, *m as usize, *n, (*map_type).into())?),
                Family::TwoGroup { k, n } => ("twoGroup", classify_2group(*k, *n)?),
                Family::Coprime { ring } => ("coprime", classify_coprime(ring.p, ring.k, ring.n)?),
                Family::Rank2 { ring, k2 } => ("rank2", classify_rank2(ring.p, ring.k, *k2, ring.n)?),
                Family::Generic { group, n } => ("generic", classify_generic(&AbelianType::parse(group)?, *n)?),
            };
            Ok(render::family(name, &maps))
        }
        Command::Oracle(g) => {
            let t = AbelianType::parse(&g.group)?;
            let maps = brute_force_rbcms(&t, g.valence as usize, g.map_type.into())?;
            Ok(render::oracle(&t, g.valence, &maps))
        }
        Command::Crosscheck(g) => {
            let t = AbelianType::parse(&g.group)?;
            let rep = cross_check(&t, g.valence as usize, g.map_type.into())?;
            Ok(render::crosscheck(&rep))
        }
        Command::ExportMap { modulus, n, gens, map_type } => {
            let md = Modulus::new(*modulus)?;
            let gens = gens.iter().map(|g| parse_poly(g, md)).collect::<rbcm_core::Result<Vec<_>>>()?;
            let q = IdealPresentation::canonical_form(&gens, &Poly::x_pow_plus_one(*n as usize, md))?;
            let map = build_map(&q, *n, (*map_type).into())?;
            Ok(Doc::Text(render::rotation_system(&map, &trace_faces(&map))))
        }
    }
}

fn parse_label(s: &str) -> rbcm_core::Result<(u64, u64)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [d, l] => match (d.parse(), l.parse()) {
            (Ok(d), Ok(l)) => Ok((d, l)),
            _ => Err(Error::InvalidParameter(format!("bad label {s:?}"))),
        },
        _ => Err(Error::InvalidParameter(format!("label must be \"d,l\", got {s:?}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let doc = match run(&cli) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            return ExitCode::from(1);
        }
    };
    let text = doc.to_string(cli.format);
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}

//! The `picard` command-line tool.
//!
//! Every subcommand prints one JSON document on stdout. Validation failures
//! exit with status 2 and a `{"error", "detail"}` object on stderr; status 1
//! is reserved for internal invariant breaches.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::{Parser, Subcommand};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::albanese_product::{
    gamma_dim, gysin_thresholds, product_albanese_dim, product_theta, surface_ruling_profiles,
    GysinJson, ThetaBasis,
};
use crate::error::{Error, Result};
use crate::local_singularity::{
    analyze, default_truncation, unipotent_dim_jets, unipotent_dim_semigroup, Method,
    SingularPointData, Truncation,
};
use crate::picard::{self, build_dkl, build_gamma_alpha, picard_report, schema::Coefficient};
use crate::semigroups::NumericalSemigroup;

pub const DEFAULT_MAX_RANGE: u64 = 12;

#[derive(Parser, Debug)]
#[command(name = "picard", version, about = "Exact Picard and Albanese invariants of singular curves")]
pub struct Cli {
    /// Largest parameter accepted by --range.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_RANGE)]
    pub max_range: u64,

    /// Print a text table instead of JSON for --range queries.
    #[arg(long, global = true)]
    pub table: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Gaps and conductor of a numerical semigroup.
    Semigroup {
        #[arg(required = true, value_parser = clap::value_parser!(u64).range(1..))]
        generators: Vec<u64>,
    },
    /// Invariants of one singular point read from a JSON file.
    Local {
        file: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        truncation: Option<u64>,
    },
    /// Pic⁰ decomposition of a curve model read from a JSON file.
    Picard {
        file: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        truncation: Option<u64>,
    },
    /// Pic⁰ of the cuspidal curve Γ_α.
    Gamma {
        #[arg(value_parser = clap::value_parser!(u64).range(1..), required_unless_present = "range")]
        alpha: Option<u64>,
        #[arg(long, conflicts_with = "alpha")]
        range: Option<u64>,
    },
    /// Pic⁰ of the divisor D^{k,l} on Γ_α × Γ_β.
    Dkl {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        alpha: u64,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        beta: u64,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        l: u64,
    },
    /// Albanese dimension and ruling dimensions of Γ_α × Γ_β.
    Product {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        alpha: u64,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        beta: u64,
    },
    /// Gysin surjectivity thresholds for curves C_N on Γ_α × Γ_β.
    Gysin {
        #[arg(value_parser = clap::value_parser!(u64).range(1..), requires = "beta", required_unless_present = "range")]
        alpha: Option<u64>,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        beta: Option<u64>,
        /// Diagonal table α = β = 1..=RANGE.
        #[arg(long, conflicts_with = "alpha")]
        range: Option<u64>,
    },
    /// Cross-check the jets and semigroup routes on random monomial cusps.
    Oracle {
        #[arg(long, default_value_t = 25, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: diagnostic("USAGE", e.to_string().trim()),
                },
            };
        }
    };
    match run(&cli) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: if e.is_internal() { 1 } else { 2 },
            stdout: String::new(),
            stderr: diagnostic(e.code(), &e.to_string()),
        },
    }
}

fn diagnostic(code: &str, detail: &str) -> String {
    format!("{}\n", json!({ "error": code, "detail": detail }))
}

fn emit<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Internal(e.to_string()))
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Schema(format!("cannot read {path}: {e}")))
}

fn check_range(n: u64, max: u64) -> Result<()> {
    if n > max {
        return Err(Error::OutOfRange(format!("range {n} exceeds maximum {max}")));
    }
    Ok(())
}

fn truncation_policy(t: Option<u64>) -> Truncation {
    t.map_or(Truncation::Auto, |m| Truncation::Fixed(m as usize))
}

pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Semigroup { generators } => {
            let s = NumericalSemigroup::new(generators.iter().copied())?;
            emit(&SemigroupOutput {
                gaps: s.gaps()?,
                conductor: s.conductor()?,
            })
        }
        Command::Local { file, truncation } => {
            let point = parse_point(&read_file(file)?)?;
            emit(&local_report(&point, truncation_policy(*truncation))?)
        }
        Command::Picard { file, truncation } => {
            let model = picard::schema::parse_model(&read_file(file)?)?;
            emit(&picard_report(&model, truncation_policy(*truncation))?)
        }
        Command::Gamma { alpha, range } => match (alpha, range) {
            (Some(a), _) => emit(&gamma_row(*a)?),
            (None, Some(n)) => {
                check_range(*n, cli.max_range)?;
                let rows = (1..=*n).map(gamma_row).collect::<Result<Vec<_>>>()?;
                if cli.table {
                    Ok(gamma_table(&rows))
                } else {
                    emit(&rows)
                }
            }
            (None, None) => Err(Error::Schema("gamma needs α or --range".into())),
        },
        Command::Dkl { alpha, beta, k, l } => {
            let model = build_dkl(*alpha as usize, *beta as usize, *k as usize, *l as usize, 4)?;
            let d = picard::picard_decompose(&model)?;
            emit(&json!({
                "alpha": alpha, "beta": beta, "k": k, "l": l,
                "abelian": d.abelian_dim, "torus": d.torus_rank,
                "unipotent": d.unipotent_dim, "total": d.total,
            }))
        }
        Command::Product { alpha, beta } => emit(&product_report(*alpha, *beta)?),
        Command::Gysin { alpha, beta, range } => match (alpha, beta, range) {
            (Some(a), Some(b), _) => emit(&GysinJson::from(&gysin_thresholds(*a, *b))),
            (None, _, Some(n)) => {
                check_range(*n, cli.max_range)?;
                let rows: Vec<GysinJson> = (1..=*n)
                    .map(|a| GysinJson::from(&gysin_thresholds(a, a)))
                    .collect();
                if cli.table {
                    Ok(gysin_table(&rows))
                } else {
                    emit(&rows)
                }
            }
            _ => Err(Error::Schema("gysin needs α β or --range".into())),
        },
        Command::Oracle { trials, seed } => {
            let report = oracle(*trials as usize, *seed)?;
            emit(&report)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupOutput {
    pub gaps: Vec<u64>,
    pub conductor: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaRow {
    pub alpha: u64,
    pub abelian: u64,
    pub torus: u64,
    pub unipotent: u64,
    pub total: u64,
}

pub fn gamma_row(alpha: u64) -> Result<GammaRow> {
    let d = picard::picard_decompose(&build_gamma_alpha(alpha as usize, 4)?)?;
    Ok(GammaRow {
        alpha,
        abelian: d.abelian_dim,
        torus: d.torus_rank,
        unipotent: d.unipotent_dim,
        total: d.total,
    })
}

fn gamma_table(rows: &[GammaRow]) -> String {
    let mut out = format!("{:>5} {:>8} {:>6} {:>10} {:>6}\n", "alpha", "abelian", "torus", "unipotent", "total");
    for r in rows {
        let _ = writeln!(out, "{:>5} {:>8} {:>6} {:>10} {:>6}", r.alpha, r.abelian, r.torus, r.unipotent, r.total);
    }
    out
}

fn gysin_table(rows: &[GysinJson]) -> String {
    let mut out = format!(
        "{:>5} {:>5} {:>10} {:>10} {:>4} {:>4} {:>6} {:>10}\n",
        "alpha", "beta", "N_low", "N_suff", "N0", "N1", "exact", "esv_bound"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:>5} {:>5} {:>10} {:>10} {:>4} {:>4} {:>6} {:>10}",
            r.alpha,
            r.beta,
            r.n_low,
            r.n_suff,
            r.n0,
            r.n1,
            r.exact,
            r.esv_bound.as_deref().unwrap_or("-")
        );
    }
    out
}

/// Single-point input for `picard local`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointFile {
    pub label: String,
    pub branches: Vec<Vec<Vec<Coefficient>>>,
}

pub fn parse_point(text: &str) -> Result<SingularPointData> {
    let doc: PointFile = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let model = json!({
        "components": [{"id": "c", "genus": 0}],
        "points": [{"label": doc.label, "class": "param", "branches": doc.branches,
                    "incidence": vec!["c"; doc.branches.len()]}],
        "connected": true,
    });
    let model = picard::schema::parse_model(&model.to_string())?;
    match &model.points()[0].spec {
        picard::PointSpec::Parametrized(p) => Ok(p.clone()),
        _ => Err(Error::Internal("point file did not yield a parametrized point".into())),
    }
}

pub fn local_report(point: &SingularPointData, truncation: Truncation) -> Result<Value> {
    let inv = analyze(point, truncation)?;
    let semigroup_dim = unipotent_dim_semigroup(point).ok();
    if let Some(d) = semigroup_dim {
        if d != inv.unipotent_dim {
            return Err(Error::Internal(format!(
                "{}: semigroup dim {d} differs from computed {}",
                point.label(),
                inv.unipotent_dim
            )));
        }
    }
    let mut v = serde_json::to_value(&inv).map_err(|e| Error::Internal(e.to_string()))?;
    v["semigroup_dim"] = json!(semigroup_dim);
    Ok(v)
}

pub fn product_report(alpha: u64, beta: u64) -> Result<Value> {
    let (a, b) = (gamma_dim(alpha), gamma_dim(beta));
    let theta = product_theta(
        &ThetaBasis::gamma_alpha(alpha as usize)?,
        &ThetaBasis::gamma_alpha(beta as usize)?,
    );
    let dim = product_albanese_dim(a, b);
    if theta.len() as u64 != dim {
        return Err(Error::Internal(format!("Θ has {} elements, expected {dim}", theta.len())));
    }
    let rulings = surface_ruling_profiles(alpha as usize, beta as usize)?;
    Ok(json!({
        "alpha": alpha, "beta": beta,
        "dim_alpha": a, "dim_beta": b,
        "dim_product": dim, "dim_factors": a + b,
        "theta_size": theta.len(),
        "rulings": rulings,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCase {
    pub exponents: Vec<u64>,
    pub gaps: usize,
    pub semigroup: usize,
    pub jets: usize,
    pub truncation: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub trials: usize,
    pub seed: u64,
    pub agreements: usize,
    pub cases: Vec<OracleCase>,
}

/// Random exponent set with 2 or 3 entries in `1..=12` and gcd 1.
pub fn random_exponents(rng: &mut impl Rng) -> Vec<u64> {
    loop {
        let r = rng.gen_range(2..=3);
        let exps: Vec<u64> = (0..r).map(|_| rng.gen_range(1..=12)).collect();
        if exps.iter().fold(0, |g, e| g.gcd(e)) == 1 {
            return exps;
        }
    }
}

pub fn oracle(trials: usize, seed: u64) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(trials);
    for i in 0..trials {
        let exponents = random_exponents(&mut rng);
        let exps: Vec<usize> = exponents.iter().map(|&e| e as usize).collect();
        let point = SingularPointData::monomial(format!("trial{i}"), &exps, 2)?;
        let gaps = NumericalSemigroup::new(exponents.iter().copied())?.gap_count()?;
        let semigroup = unipotent_dim_semigroup(&point)?;
        let truncation = default_truncation(&point)?;
        let jets = unipotent_dim_jets(&point, truncation)?;
        cases.push(OracleCase {
            exponents,
            gaps,
            semigroup,
            jets,
            truncation,
        });
    }
    let agreements = cases
        .iter()
        .filter(|c| c.gaps == c.semigroup && c.semigroup == c.jets)
        .count();
    if agreements != trials {
        let bad: BTreeMap<String, Vec<u64>> = cases
            .iter()
            .enumerate()
            .filter(|(_, c)| !(c.gaps == c.semigroup && c.semigroup == c.jets))
            .map(|(i, c)| (format!("trial{i}"), c.exponents.clone()))
            .collect();
        return Err(Error::Internal(format!("oracle disagreement: {bad:?}")));
    }
    Ok(OracleReport {
        trials,
        seed,
        agreements,
        cases,
    })
}

/// Jets-route split of `Γ_α` into its two cusp contributions.
pub fn gamma_split_jets(alpha: usize) -> Result<[usize; 2]> {
    let [zero, inf] = picard::gamma_alpha_cusps(alpha, 2, "")?;
    let dim = |p: &SingularPointData| -> Result<usize> {
        let m = default_truncation(p)?;
        match analyze(p, Truncation::Fixed(m))?.method {
            Method::Jets { .. } => unipotent_dim_jets(p, m),
            Method::Semigroup => Err(Error::Internal("expected the jets route".into())),
        }
    };
    Ok([dim(&zero)?, dim(&inf)?])
}

/// Semigroup-route split of `Γ_α`.
pub fn gamma_split_semigroup(alpha: usize) -> Result<[usize; 2]> {
    let [zero, inf] = picard::gamma_alpha_cusps(alpha, 2, "")?;
    Ok([unipotent_dim_semigroup(&zero)?, unipotent_dim_semigroup(&inf)?])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        execute(std::iter::once("picard").chain(args.iter().copied()))
    }

    #[test]
    fn documented_outputs() {
        assert_eq!(
            run_args(&["gamma", "2"]).stdout,
            "{\"alpha\":2,\"abelian\":0,\"torus\":0,\"unipotent\":6,\"total\":6}\n"
        );
        assert_eq!(
            run_args(&["semigroup", "2", "7"]).stdout,
            "{\"gaps\":[1,3,5],\"conductor\":6}\n"
        );
    }

    #[test]
    fn usage_errors_exit_2() {
        let o = run_args(&["gamma", "0"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("\"error\":\"USAGE\""));
        assert_eq!(run_args(&["semigroup", "4", "6"]).code, 2);
    }
}

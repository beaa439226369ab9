use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fermat_ns::certify::{
    certify_discriminant, certify_duality, primitivity_toolkit, CertificationConfig, Certificate,
    Mode, Table,
};
use fermat_ns::char_p_divisors::{find_cover_params, find_special_line, CoverCtx};
use fermat_ns::exact_linalg::{det_exact, factorize, IntMatrix};
use fermat_ns::fermat_combinatorics::surface_invariants;
use fermat_ns::field_tower::find_defining_poly;
use fermat_ns::line_lattice::{all_lines, gram_matrix, rational_basis, relation_block_determinants};

#[derive(Parser)]
#[command(name = "fermat-ns", version, about = "Line lattices on Fermat surfaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Basis {
    Full,
    Rational,
}

#[derive(Subcommand)]
enum Cmd {
    /// Betti number, Picard number and character counts.
    Invariants {
        m: u64,
        #[arg(long)]
        json: bool,
    },
    /// Write the Gram matrix of a set of lines.
    Gram {
        #[arg(long)]
        degree: u64,
        #[arg(long, value_enum, default_value = "rational")]
        basis: Basis,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the relation-block determinants for every r <= m.
    VerifyLemma {
        #[arg(long)]
        degree: u64,
    },
    /// Exact determinant and factorization of a matrix file.
    Disc {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Smallest r with rm - 1 a prime power.
    FindCover { m: u64 },
    /// A random special pair for the cover of degree m.
    FindLine {
        #[arg(long)]
        degree: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Certify that lines generate the Néron–Severi lattice.
    Certify {
        #[arg(long)]
        degree: u64,
        #[arg(long, default_value = "duality")]
        mode: String,
        /// Pin f and the pairs to this table.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',')]
        ell: Option<Vec<u64>>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Self-test of the saturation criteria on synthetic lattices.
    Primitivity {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

type BoxError = Box<dyn std::error::Error>;

fn list<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn run(cli: Cli) -> Result<i32, BoxError> {
    match cli.cmd {
        Cmd::Invariants { m, json } => {
            let inv = surface_invariants(m)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&inv)?);
            } else {
                println!("m       {}", inv.m);
                println!("b2      {}", inv.b2);
                println!("pg      {}", inv.pg);
                println!("chi     {}", inv.chi);
                println!("e       {}", inv.e);
                println!("K^2     {}", inv.ksq);
                println!("h11     {}", inv.h11);
                println!("rho     {}", inv.rho);
                println!("lambda  {}", inv.lambda);
                println!("|A|     {}", inv.count_a);
                println!("|B|     {}", inv.count_b);
                println!("|D|     {}", inv.count_d);
            }
        }
        Cmd::Gram { degree, basis, out } => {
            let lines = match basis {
                Basis::Full => all_lines(degree),
                Basis::Rational => rational_basis(degree)?,
            };
            let g = gram_matrix(&lines, degree)?;
            std::fs::write(&out, g.to_text())?;
            eprintln!("wrote {}x{} Gram matrix to {}", g.rows(), g.cols(), out.display());
        }
        Cmd::VerifyLemma { degree } => {
            let m = degree as i64;
            let sign = if m % 2 == 1 { 1 } else { -1 };
            let expect = (sign * m, sign * m, m * m);
            let mut ok = true;
            for r in 1..=degree {
                let got = relation_block_determinants(degree, r);
                let good = got == expect;
                ok &= good;
                println!("r={r:<4} {:?} {}", got, if good { "ok" } else { "MISMATCH" });
            }
            return Ok(if ok { 0 } else { 1 });
        }
        Cmd::Disc { matrix } => {
            let text = std::fs::read_to_string(&matrix)?;
            let m = IntMatrix::parse_text(&text)?;
            let d = det_exact(&m)?;
            println!("{d}");
            if d != num_bigint::BigInt::from(0) {
                println!("{}", factorize(&d)?);
            }
        }
        Cmd::FindCover { m } => {
            let c = find_cover_params(m)?;
            println!("m={} r={} q={} p={} n={}", c.m, c.r, c.q, c.p, c.n);
        }
        Cmd::FindLine { degree, seed } => {
            let params = find_cover_params(degree)?;
            let f: Vec<i64> = find_defining_poly(params.p, degree, seed)?
                .into_iter()
                .map(|c| c as i64)
                .collect();
            let cover = CoverCtx::new(params, &f)?;
            let (a, b) = find_special_line(cover.field(), &params, seed)?;
            let coeffs = |e: &fermat_ns::field_tower::FieldElem| {
                e.coeffs().iter().map(|&c| c as i64).collect::<Vec<_>>()
            };
            println!("f      {}", list(&f));
            println!("alpha  {}", list(&coeffs(&a)));
            println!("beta   {}", list(&coeffs(&b)));
        }
        Cmd::Certify {
            degree,
            mode,
            table,
            seed,
            ell,
            json,
        } => {
            let mode: Mode = mode.parse()?;
            let cert: Certificate = match mode {
                Mode::Discriminant => certify_discriminant(degree)?,
                Mode::Duality => {
                    let mut cfg = match &table {
                        Some(path) => {
                            let t = Table::load(path)?;
                            let rows = t.rows_for(degree);
                            if rows.is_empty() {
                                return Err(fermat_ns::certify::CertifyError::RowNotFound(degree).into());
                            }
                            for row in &rows {
                                row.validate()?;
                            }
                            CertificationConfig::from_rows(&rows)?
                        }
                        None => CertificationConfig::new(degree, Mode::Duality),
                    };
                    cfg.seed = seed;
                    cfg.ells = ell;
                    certify_duality(&cfg)?
                }
            };
            let text = cert.to_json();
            match json {
                Some(path) => std::fs::write(path, &text)?,
                None => println!("{text}"),
            }
            eprintln!("{:?}", cert.verdict);
            return Ok(cert.verdict.exit_code());
        }
        Cmd::Primitivity { seed } => {
            let report = primitivity_toolkit(seed);
            for c in &report.checks {
                println!("{} {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
            }
            return Ok(if report.passed() { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

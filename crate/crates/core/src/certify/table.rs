use std::path::Path;

use super::{CertifyError, PairSpec};
use crate::char_p_divisors::{check_special_pair, is_supersingular_prime, CoverCtx, CoverParams};
use crate::numtheory::{is_prime, prime_power};

/// One line of the parameter table: a degree, its cover, the primes `l`
/// this line serves, the defining polynomial and the special pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub m: u64,
    pub r: u64,
    pub q: u64,
    pub p: u64,
    pub n: u32,
    pub ells: Vec<u64>,
    pub f: Vec<i64>,
    pub pairs: Vec<PairSpec>,
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| format!("bad {what} entry {x:?}")))
        .collect()
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl TableRow {
    pub fn parse(line: &str) -> Result<Self, String> {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 8 {
            return Err(format!("expected 8 columns, found {}", cols.len()));
        }
        let num = |i: usize, what: &str| -> Result<u64, String> {
            cols[i].trim().parse().map_err(|_| format!("bad {what} {:?}", cols[i]))
        };
        let pairs = cols[7]
            .split(';')
            .map(|p| {
                let (a, b) = p
                    .split_once('|')
                    .ok_or_else(|| format!("pair {p:?} lacks '|'"))?;
                Ok(PairSpec {
                    alpha: parse_list(a, "alpha")?,
                    beta: parse_list(b, "beta")?,
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(Self {
            m: num(0, "m")?,
            r: num(1, "r")?,
            q: num(2, "q")?,
            p: num(3, "p")?,
            n: num(4, "n")? as u32,
            ells: parse_list(cols[5], "ell")?,
            f: parse_list(cols[6], "f")?,
            pairs,
        })
    }

    pub fn to_tsv(&self) -> String {
        let pairs = self
            .pairs
            .iter()
            .map(|p| format!("{}|{}", join(&p.alpha), join(&p.beta)))
            .collect::<Vec<_>>()
            .join(";");
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.m,
            self.r,
            self.q,
            self.p,
            self.n,
            join(&self.ells),
            join(&self.f),
            pairs
        )
    }

    pub fn cover(&self) -> CoverParams {
        CoverParams {
            m: self.m,
            r: self.r,
            q: self.q,
            p: self.p,
            n: self.n,
        }
    }

    /// Checks the arithmetic of the row: `q = rm - 1 = p^n`, `p` is
    /// supersingular for `m`, each `l` is a prime divisor of `m`, `f`
    /// defines `F_{q^2}` with `gamma` of order `m`, and every pair gives a
    /// line on the Fermat surface of degree `q + 1`.
    pub fn validate(&self) -> Result<CoverCtx, CertifyError> {
        let bad = |msg: String| CertifyError::BadConfig(format!("row m = {}: {msg}", self.m));
        if self.r * self.m != self.q + 1 {
            return Err(bad(format!("q = {} but rm - 1 = {}", self.q, self.r * self.m - 1)));
        }
        if prime_power(self.q) != Some((self.p, self.n)) {
            return Err(bad(format!("q = {} is not {}^{}", self.q, self.p, self.n)));
        }
        if !is_supersingular_prime(self.p, self.m)? {
            return Err(bad(format!("{} is not supersingular", self.p)));
        }
        if self.ells.is_empty() || self.ells.iter().any(|&l| !is_prime(l) || self.m % l != 0) {
            return Err(bad(format!("bad prime list {:?}", self.ells)));
        }
        let cover = CoverCtx::new(self.cover(), &self.f)?;
        let field = cover.field();
        for pair in &self.pairs {
            let alpha = field.from_coeffs(&pair.alpha);
            let beta = field.from_coeffs(&pair.beta);
            check_special_pair(&alpha, &beta, field)?;
        }
        Ok(cover)
    }
}

/// The parameter table, one [`TableRow`] per line; `#` starts a comment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub rows: Vec<TableRow>,
}

const SHIPPED: &str = include_str!("../../data/table.tsv");

impl Table {
    pub fn parse(text: &str) -> Result<Self, CertifyError> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            rows.push(TableRow::parse(line).map_err(|msg| CertifyError::Table { line: i + 1, msg })?);
        }
        Ok(Self { rows })
    }

    pub fn load(path: &Path) -> Result<Self, CertifyError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CertifyError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The table bundled with the crate.
    pub fn shipped() -> Self {
        Self::parse(SHIPPED).expect("bundled table parses")
    }

    pub fn rows_for(&self, m: u64) -> Vec<&TableRow> {
        self.rows.iter().filter(|r| r.m == m).collect()
    }

    pub fn degrees(&self) -> Vec<u64> {
        let mut d: Vec<u64> = self.rows.iter().map(|r| r.m).collect();
        d.dedup();
        d
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("# m\tr\tq\tp\tn\tells\tf\tpairs\n");
        for r in &self.rows {
            out.push_str(&r.to_tsv());
            out.push('\n');
        }
        out
    }
}

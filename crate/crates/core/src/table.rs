//! Reproductions of the Gram-interval tables as serializable artifacts.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::fourier::MAX_FOURIER_N;
use crate::gram::{classify_gram_intervals, matrix_index, table1_row, table3_row, GramGrid};
use crate::montecarlo::McConfig;
use crate::special_unitary::{
    asymptotic_prob_su, generating_function_su, mc_distribution_su, quad_prob_su, MAX_QUADRATURE_N,
};
use crate::unitary::{prob_u_all, ArcInterval};
use crate::zeros::ZeroOrdinateList;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
    #[serde(rename = "asymptotics")]
    Asymptotics,
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableId::T1 => "T1",
            TableId::T2 => "T2",
            TableId::T3 => "T3",
            TableId::T4 => "T4",
            TableId::Asymptotics => "asymptotics",
        })
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t1" => Ok(TableId::T1),
            "t2" => Ok(TableId::T2),
            "t3" => Ok(TableId::T3),
            "t4" => Ok(TableId::T4),
            "asymptotics" => Ok(TableId::Asymptotics),
            _ => Err(domain(format!("unknown table id {s:?}"))),
        }
    }
}

/// How the cells of a row were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ZeroCount,
    Determinant,
    Corollary,
    Quadrature,
    MonteCarlo,
    Asymptotic,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::ZeroCount => "zero-count",
            Method::Determinant => "determinant",
            Method::Corollary => "corollary",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte-carlo",
            Method::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub labels: Vec<String>,
    pub values: Vec<f64>,
    /// Standard errors, present for Monte Carlo rows.
    pub std_errors: Option<Vec<f64>>,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableMetadata {
    pub command: String,
    pub seed: Option<u64>,
    pub version: String,
    pub runtime_secs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableArtifact {
    pub id: TableId,
    pub label_columns: Vec<String>,
    pub value_columns: Vec<String>,
    pub rows: Vec<TableRow>,
    pub metadata: TableMetadata,
}

impl TableArtifact {
    fn new(id: TableId, labels: &[&str], values: usize, prefix: &str) -> Self {
        TableArtifact {
            id,
            label_columns: labels.iter().map(|s| s.to_string()).collect(),
            value_columns: (0..values).map(|k| format!("{prefix}{k}")).collect(),
            rows: Vec::new(),
            metadata: TableMetadata {
                command: String::new(),
                seed: None,
                version: env!("CARGO_PKG_VERSION").to_string(),
                runtime_secs: 0.0,
            },
        }
    }

    pub fn with_command(mut self, command: impl Into<String>) -> Self {
        self.metadata.command = command.into();
        self
    }

    pub fn row(&self, label: &str) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.labels[0] == label)
    }

    /// CSV with a '#' header. Runtime is left out so reruns are byte-identical.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# gramlaw {} table {}", self.metadata.version, self.id)?;
        writeln!(w, "# command: {}", self.metadata.command)?;
        match self.metadata.seed {
            Some(s) => writeln!(w, "# seed: {s}")?,
            None => writeln!(w, "# seed: none")?,
        }
        let with_se = self.rows.iter().any(|r| r.std_errors.is_some());
        let mut out = csv::Writer::from_writer(w);
        let mut header: Vec<String> = self.label_columns.clone();
        header.extend(self.value_columns.iter().cloned());
        if with_se {
            header.extend(self.value_columns.iter().map(|c| format!("{c}_se")));
        }
        header.push("method".into());
        out.write_record(&header).map_err(csv_err)?;
        let integer = self.id == TableId::T1;
        for r in &self.rows {
            let mut rec = r.labels.clone();
            rec.extend(r.values.iter().map(|&v| {
                let s = if integer {
                    format!("{v:.0}")
                } else {
                    format!("{v:.9}")
                };
                // rounding noise below the printed precision must not show a sign
                match s.strip_prefix('-') {
                    Some(m) if m.bytes().all(|b| b == b'0' || b == b'.') => m.to_string(),
                    _ => s,
                }
            }));
            if with_se {
                match &r.std_errors {
                    Some(se) => rec.extend(se.iter().map(|s| format!("{s:.3e}"))),
                    None => rec.extend(r.values.iter().map(|_| String::new())),
                }
            }
            rec.push(r.method.tag().into());
            out.write_record(&rec).map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("ascii output"))
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Table 1: counts of Gram intervals in [g_0, g_M) holding k = 0..4 zeros.
pub fn table1(zeros: &ZeroOrdinateList, ms: &[i64]) -> Result<TableArtifact> {
    let start = Instant::now();
    let mut t = TableArtifact::new(TableId::T1, &["M"], 5, "k");
    let Some(&m_max) = ms.iter().max() else {
        return Err(domain("no M values requested"));
    };
    let all = classify_gram_intervals(zeros, &GramGrid::new(0, m_max)?)?;
    for &m in ms {
        let row = table1_row(&all.sub_range(0, m)?);
        t.rows.push(TableRow {
            labels: vec![m.to_string()],
            values: row.iter().map(|&c| c as f64).collect(),
            std_errors: None,
            method: Method::ZeroCount,
        });
    }
    t.metadata.runtime_secs = start.elapsed().as_secs_f64();
    Ok(t)
}

fn check_n_max(n_max: usize, lo: usize) -> Result<()> {
    if n_max < lo {
        return Err(domain(format!("n_max must be at least {lo}, got {n_max}")));
    }
    Ok(())
}

/// Table 2: E_U(N)(k, J) for |J| = 2π/N, N = 2..=n_max.
pub fn table2(n_max: usize) -> Result<TableArtifact> {
    check_n_max(n_max, 2)?;
    let start = Instant::now();
    let mut t = TableArtifact::new(TableId::T2, &["N"], 3, "k");
    for n in 2..=n_max {
        let p = prob_u_all(n, &ArcInterval::gram(n))?;
        t.rows.push(TableRow {
            labels: vec![n.to_string()],
            values: p[..3].to_vec(),
            std_errors: None,
            method: Method::Determinant,
        });
    }
    t.metadata.runtime_secs = start.elapsed().as_secs_f64();
    Ok(t)
}

/// Table 3: zero proportions G_{M_N, M_{N+1}}(k) for N = 2..=n_max.
pub fn table3(zeros: &ZeroOrdinateList, n_max: usize) -> Result<TableArtifact> {
    check_n_max(n_max, 2)?;
    let start = Instant::now();
    let mut t = TableArtifact::new(TableId::T3, &["N", "M_N"], 3, "k");
    let first = matrix_index(2)?.gram_index as i64;
    let last = matrix_index(n_max as u32 + 1)?.gram_index as i64;
    let all = classify_gram_intervals(zeros, &GramGrid::new(first, last)?)?;
    for n in 2..=n_max as u32 {
        let a = matrix_index(n)?.gram_index;
        let b = matrix_index(n + 1)?.gram_index;
        let h = all.sub_range(a as i64, b as i64)?;
        t.rows.push(TableRow {
            labels: vec![n.to_string(), a.to_string()],
            values: table3_row(&h).to_vec(),
            std_errors: None,
            method: Method::ZeroCount,
        });
    }
    t.metadata.runtime_secs = start.elapsed().as_secs_f64();
    Ok(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum T4Method {
    Corollary,
    Quadrature,
    MonteCarlo,
}

impl T4Method {
    /// Largest N the route handles; larger rows fall back to Monte Carlo.
    pub fn max_n(self) -> usize {
        match self {
            T4Method::Corollary => MAX_FOURIER_N,
            T4Method::Quadrature => MAX_QUADRATURE_N,
            T4Method::MonteCarlo => usize::MAX,
        }
    }
}

/// Table 4: E_SU(N)(k, J) for the Gram interval, N = 2..=n_max. `mc` drives
/// the Monte Carlo route and any rows beyond the deterministic limit.
pub fn table4(n_max: usize, method: T4Method, mc: &McConfig) -> Result<TableArtifact> {
    check_n_max(n_max, 2)?;
    let start = Instant::now();
    let mut t = TableArtifact::new(TableId::T4, &["N"], 3, "k");
    for n in 2..=n_max {
        let route = if n <= method.max_n() { method } else { T4Method::MonteCarlo };
        let row = match route {
            T4Method::Corollary => TableRow {
                labels: vec![n.to_string()],
                values: generating_function_su(n, &ArcInterval::gram(n))?.coefficients()[..3].to_vec(),
                std_errors: None,
                method: Method::Corollary,
            },
            T4Method::Quadrature => TableRow {
                labels: vec![n.to_string()],
                values: (0..3).map(|k| quad_prob_su(n, k)).collect::<Result<_>>()?,
                std_errors: None,
                method: Method::Quadrature,
            },
            T4Method::MonteCarlo => {
                t.metadata.seed = Some(mc.seed);
                let est = mc_distribution_su(n, mc)?;
                TableRow {
                    labels: vec![n.to_string()],
                    values: est[..3].iter().map(|e| e.value).collect(),
                    std_errors: Some(est[..3].iter().map(|e| e.std_error).collect()),
                    method: Method::MonteCarlo,
                }
            }
        };
        t.rows.push(row);
    }
    t.metadata.runtime_secs = start.elapsed().as_secs_f64();
    Ok(t)
}

/// E_U(N)(k, J) plus the leading SU(N) correction, N = 3..=n_max.
pub fn asymptotics(n_max: usize) -> Result<TableArtifact> {
    check_n_max(n_max, 3)?;
    let start = Instant::now();
    let mut t = TableArtifact::new(TableId::Asymptotics, &["N"], 3, "k");
    for n in 3..=n_max {
        t.rows.push(TableRow {
            labels: vec![n.to_string()],
            values: (0..3).map(|k| asymptotic_prob_su(n, k)).collect::<Result<_>>()?,
            std_errors: None,
            method: Method::Asymptotic,
        });
    }
    t.metadata.runtime_secs = start.elapsed().as_secs_f64();
    Ok(t)
}

// SPDX-License-Identifier: Apache-2.0

//! Command-line grammar and the resolved run configuration.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};
use umarkov::{CMatrix, Gate, Tolerances};

use crate::failure::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "umarkov",
    version,
    about = "Markovianizing cost and two-round protocol simulation for bipartite unitaries"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandKind {
    Cost,
    Analyze,
    Simulate,
    Verify,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print M(U) in bits; the full report goes to --out.
    Cost(Options),
    /// Schmidt coefficients, Omega spectrum, fixed-point rank and Phi_inf spectrum.
    Analyze(Options),
    /// Run the two-round protocol and emit its transcript.
    Simulate(Options),
    /// Certify Alice's measurement and check the error inequalities.
    Verify(Options),
}

impl Command {
    pub fn split(self) -> (CommandKind, Options) {
        match self {
            Command::Cost(o) => (CommandKind::Cost, o),
            Command::Analyze(o) => (CommandKind::Analyze, o),
            Command::Simulate(o) => (CommandKind::Simulate, o),
            Command::Verify(o) => (CommandKind::Verify, o),
        }
    }
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").args(["gate", "unitary"]).required(true)))]
pub struct Options {
    /// Named gate: identity, swap, cnot, cz, dft or cphase(THETA).
    #[arg(long, value_parser = parse_gate)]
    pub gate: Option<Gate>,
    /// JSON file holding a d^2 x d^2 matrix as {"rows","cols","re","im"}.
    #[arg(long, value_name = "FILE")]
    pub unitary: Option<PathBuf>,
    /// Local dimension (default 2 for named gates, inferred for files).
    #[arg(long)]
    pub d: Option<usize>,
    /// Alice's measurement: a JSON array of d x d unitaries, or
    /// {"operators": [...]} listing general measurement operators on A.
    #[arg(long, value_name = "FILE")]
    pub vlist: Option<PathBuf>,
    /// Fixed-point tolerance for eigenvalues of Omega and F.
    #[arg(long, env = "MARKOV_TOL")]
    pub tol: Option<f64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Embed matrices in the report.
    #[arg(long)]
    pub verbose: bool,
}

fn parse_gate(s: &str) -> Result<Gate, String> {
    s.parse::<Gate>().map_err(|e| e.to_string())
}

/// How Alice measures.
#[derive(Debug, Clone)]
pub enum Measurement {
    /// Unitaries `V_j`, randomized with a shared `Phi_K`.
    Ensemble(Vec<CMatrix>),
    /// Measurement operators acting on `A` alone, without a resource.
    Operators(Vec<CMatrix>),
}

/// Everything a command needs, validated.
#[derive(Debug)]
pub struct RunConfig {
    pub command: CommandKind,
    pub gate: Option<Gate>,
    pub u: CMatrix,
    pub d: usize,
    pub measurement: Option<Measurement>,
    pub tol: Tolerances,
    pub out: Option<PathBuf>,
    pub verbose: bool,
}

impl RunConfig {
    pub fn resolve(command: CommandKind, opts: Options) -> Result<Self, Failure> {
        let mut tol = Tolerances::default();
        if let Some(t) = opts.tol {
            if !(t > 0.0 && t < 0.5) {
                return Err(Failure::Malformed(format!("tolerance must lie in (0, 0.5), got {t}")));
            }
            tol = tol.with_fixed_point(t);
        }
        let (u, d) = match (&opts.gate, &opts.unitary) {
            (Some(g), _) => {
                let d = opts.d.unwrap_or(2);
                if d < 2 {
                    return Err(Failure::Malformed(format!("dimension must be at least 2, got {d}")));
                }
                (g.matrix(d), d)
            }
            (None, Some(path)) => load_unitary(path, opts.d)?,
            (None, None) => return Err(Failure::Malformed("one of --gate or --unitary is required".into())),
        };
        let residual = u.unitary_residual();
        if residual > tol.unitary {
            return Err(Failure::NonUnitary(residual));
        }
        let measurement = opts.vlist.as_deref().map(|p| load_measurement(p, d)).transpose()?;
        Ok(RunConfig {
            command,
            gate: opts.gate,
            u,
            d,
            measurement,
            tol,
            out: opts.out,
            verbose: opts.verbose,
        })
    }

    /// The supplied measurement, or the gate's default ensemble.
    pub fn measurement(&self) -> Result<Measurement, Failure> {
        if let Some(m) = &self.measurement {
            return Ok(m.clone());
        }
        match &self.gate {
            Some(g) => Ok(Measurement::Ensemble(g.default_ensemble(self.d))),
            None => Err(Failure::Malformed("--vlist is required with --unitary".into())),
        }
    }

    pub fn source_label(&self) -> String {
        match &self.gate {
            Some(g) => g.to_string(),
            None => "file".into(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn load_unitary(path: &Path, d: Option<usize>) -> Result<(CMatrix, usize), Failure> {
    let m: CMatrix =
        serde_json::from_str(&read(path)?).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
    if m.rows() != m.cols() {
        return Err(Failure::Malformed(format!(
            "unitary must be square, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let d = match d {
        Some(d) => d,
        None => (1..=m.rows()).find(|k| k * k >= m.rows()).unwrap_or(0),
    };
    if d < 2 || d * d != m.rows() {
        return Err(Failure::Malformed(format!(
            "a {}x{} matrix is not a bipartite unitary on two systems of dimension {d}",
            m.rows(),
            m.cols()
        )));
    }
    Ok((m, d))
}

fn load_measurement(path: &Path, d: usize) -> Result<Measurement, Failure> {
    let malformed = |e: serde_json::Error| Failure::Malformed(format!("{}: {e}", path.display()));
    let value: serde_json::Value = serde_json::from_str(&read(path)?).map_err(malformed)?;
    if let Some(ops) = value.get("operators") {
        let ops: Vec<CMatrix> = serde_json::from_value(ops.clone()).map_err(malformed)?;
        if ops.is_empty() {
            return Err(Failure::Malformed("empty operator list".into()));
        }
        if let Some(m) = ops.iter().find(|m| m.cols() != d || m.rows() != ops[0].rows()) {
            return Err(Failure::Malformed(format!(
                "measurement operators must share a shape with {d} columns, found {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        return Ok(Measurement::Operators(ops));
    }
    let list: Vec<CMatrix> = serde_json::from_value(value).map_err(malformed)?;
    if list.is_empty() {
        return Err(Failure::Malformed("empty --vlist".into()));
    }
    if let Some(m) = list.iter().find(|m| m.rows() != d || m.cols() != d) {
        return Err(Failure::Malformed(format!(
            "--vlist entries must be {d}x{d}, found {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(Measurement::Ensemble(list))
}

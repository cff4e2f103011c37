//! Command-line front end: `compute`, `verify` and `euler`.
//!
//! A failing verification check exits with 1. Any input error, such as a
//! bad argument or an invalid scenario, exits with 2.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::blowup_ring::{BlowupContext, BlowupElement};
use crate::error::{Error, Result};
use crate::graded_poly::CoefficientMode;
use crate::identity_suite::{self, CheckReport};
use crate::scenario::{self, Scenario};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MPart {
    pub base: String,
    pub shriek: String,
}

/// One characteristic class `c_k(M̃)` (or `w_k`) in canonical form.
/// `exc_parts[j]` is the coefficient of `ξ^j` under `ĩ^!`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassOutput {
    pub name: String,
    pub degree: u32,
    pub m_part: MPart,
    pub exc_parts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicNumber {
    pub monomial: String,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Output {
    pub scenario: String,
    pub classes: Vec<ClassOutput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chern_numbers: Option<Vec<CharacteristicNumber>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<CheckReport>>,
}

impl Output {
    fn new(scenario: &Scenario) -> Self {
        Output {
            scenario: scenario.label.clone(),
            classes: Vec::new(),
            chern_numbers: None,
            euler: None,
            checks: None,
        }
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().flatten().all(CheckReport::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("output is always serializable")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario: {}", self.scenario);
        for class in &self.classes {
            let _ = writeln!(s, "{} = {}", class.name, canonical_text(class));
        }
        if let Some(numbers) = &self.chern_numbers {
            let _ = writeln!(s, "characteristic numbers:");
            for n in numbers {
                let _ = writeln!(s, "  {} = {}", n.monomial, n.value);
            }
        }
        if let Some(chi) = self.euler {
            let _ = writeln!(s, "euler characteristic = {chi}");
        }
        if let Some(checks) = &self.checks {
            for report in checks {
                let _ = writeln!(s, "{report}");
            }
            let failed = checks.iter().filter(|r| !r.passed()).count();
            if failed == 0 {
                let _ = writeln!(s, "all {} checks passed", checks.len());
            } else {
                let _ = writeln!(s, "{failed} of {} checks failed", checks.len());
            }
        }
        s
    }
}

fn canonical_text(class: &ClassOutput) -> String {
    let mut parts = Vec::new();
    let m = match (class.m_part.base.as_str(), class.m_part.shriek.as_str()) {
        ("0", "0") => None,
        (base, "0") => Some(base.to_owned()),
        ("0", shriek) => Some(format!("i!({shriek})")),
        (base, shriek) => Some(format!("{base} + i!({shriek})")),
    };
    if let Some(m) = m {
        parts.push(format!("f*({m})"));
    }
    let exc: Vec<String> = class
        .exc_parts
        .iter()
        .enumerate()
        .filter(|(_, b)| b.as_str() != "0")
        .map(|(j, b)| {
            let xi = match j {
                0 => return b.clone(),
                1 => "xi".to_owned(),
                _ => format!("xi^{j}"),
            };
            match b.as_str() {
                "1" => xi,
                "-1" => format!("-{xi}"),
                b if b.contains(" + ") || b.contains(" - ") => format!("({b})*{xi}"),
                b => format!("{b}*{xi}"),
            }
        })
        .collect();
    if !exc.is_empty() {
        parts.push(format!("ĩ!({})", exc.join(" + ")));
    }
    if parts.is_empty() {
        "0".to_owned()
    } else {
        parts.join(" + ")
    }
}

fn class_letter(mode: CoefficientMode) -> char {
    match mode {
        CoefficientMode::Integers => 'c',
        CoefficientMode::Mod2 => 'w',
    }
}

fn class_output(ctx: &BlowupContext, k: u32, x: &BlowupElement) -> ClassOutput {
    ClassOutput {
        name: format!("{}{k}", class_letter(ctx.mode())),
        degree: k * ctx.mode().unit_degree(),
        m_part: MPart {
            base: x.m_part.base.to_string(),
            shriek: x.m_part.shriek.to_string(),
        },
        exc_parts: x.exc.iter().map(ToString::to_string).collect(),
    }
}

fn small(v: BigInt) -> Result<i64> {
    i64::try_from(&v)
        .map_err(|_| Error::Unsupported(format!("value {v} exceeds the 64-bit output range")))
}

/// Partitions of `n` into parts of size at most `max`, each sorted
/// ascending, e.g. `[1,1], [2]` for `n = 2`.
fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=max.min(n) {
        for mut rest in partitions(n - first, first) {
            rest.push(first);
            rest.sort_unstable();
            out.push(rest);
        }
    }
    out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    out
}

fn partition_name(letter: char, parts: &[u32]) -> String {
    let mut names = Vec::new();
    let mut i = 0;
    while i < parts.len() {
        let j = parts[i..].iter().take_while(|&&p| p == parts[i]).count();
        if j == 1 {
            names.push(format!("{letter}{}", parts[i]));
        } else {
            names.push(format!("{letter}{}^{j}", parts[i]));
        }
        i += j;
    }
    names.join("*")
}

/// `c_k(M̃)` for `k ≤ max_index`, plus characteristic numbers and the Euler
/// characteristic when `M` carries an integration functional.
pub fn compute(scenario: &Scenario, max_index: Option<u32>) -> Result<Output> {
    let ctx = &scenario.context;
    let unit = ctx.mode().unit_degree();
    let top = ctx.dimension() / unit;
    let total = ctx.total_class()?;
    let classes: Vec<BlowupElement> = (0..=top)
        .map(|k| ctx.degree_part(&total, k * unit))
        .collect();
    let mut out = Output::new(scenario);
    out.classes = (0..=max_index.unwrap_or(top).min(top))
        .map(|k| class_output(ctx, k, &classes[k as usize]))
        .collect();
    if !scenario.is_formal() {
        let letter = class_letter(ctx.mode());
        let mut numbers = Vec::new();
        for parts in partitions(top, top) {
            let mut product = ctx.one();
            for &p in &parts {
                product = ctx.multiply(&product, &classes[p as usize])?;
            }
            numbers.push(CharacteristicNumber {
                monomial: partition_name(letter, &parts),
                value: small(ctx.integrate(&product)?)?,
            });
        }
        out.chern_numbers = Some(numbers);
        out.euler = Some(small(ctx.integrate(&classes[top as usize])?)?);
    }
    Ok(out)
}

/// `∫ c_top(M̃)`; needs a concrete scenario.
pub fn euler(scenario: &Scenario) -> Result<BigInt> {
    let ctx = &scenario.context;
    if scenario.is_formal() {
        return Err(Error::NoIntegration {
            ring: "formal M".into(),
        });
    }
    let total = ctx.total_class()?;
    ctx.integrate(&ctx.degree_part(&total, ctx.dimension()))
}

pub fn verify(scenario: &Scenario, trials: usize, seed: u64) -> Result<Output> {
    let mut out = Output::new(scenario);
    out.checks = Some(identity_suite::run_all(&scenario.context, trials, seed)?);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Coefficients {
    Z,
    Z2,
}

impl From<Coefficients> for CoefficientMode {
    fn from(c: Coefficients) -> Self {
        match c {
            Coefficients::Z => CoefficientMode::Integers,
            Coefficients::Z2 => CoefficientMode::Mod2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "blowup",
    version,
    about = "Exact cohomology and characteristic classes of blow-ups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the characteristic classes of the blow-up in canonical form.
    Compute {
        #[command(flatten)]
        input: InputArgs,
        /// Highest class index to print.
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Run the identity suite; exits 1 if any check fails.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the Euler characteristic of the blow-up.
    Euler {
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    /// `M N` presets (e.g. `cp:3 cp-linear:1`) or `formal dimM=6 dimN=2`.
    spaces: Vec<String>,
    /// Read the scenario from a JSON file instead.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long, value_enum)]
    coefficients: Option<Coefficients>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

impl InputArgs {
    fn load(&self) -> Result<Scenario> {
        let mode = self.coefficients.map(CoefficientMode::from);
        match (&self.scenario, self.spaces.as_slice()) {
            (Some(path), []) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                scenario::parse_scenario_with(&text, mode)
            }
            (Some(_), _) => Err(Error::Unsupported(
                "give either a scenario file or presets, not both".into(),
            )),
            (None, [formal, dims @ ..]) if formal == "formal" => {
                let (mut dim_m, mut dim_n) = (None, None);
                for d in dims {
                    let (key, value) = d.split_once('=').ok_or_else(|| {
                        Error::Unsupported(format!("expected key=value, got `{d}`"))
                    })?;
                    let value: u32 = value
                        .parse()
                        .map_err(|_| Error::Unsupported(format!("bad dimension `{d}`")))?;
                    match key {
                        "dimM" => dim_m = Some(value),
                        "dimN" => dim_n = Some(value),
                        _ => return Err(Error::Unsupported(format!("unknown key `{key}`"))),
                    }
                }
                match (dim_m, dim_n) {
                    (Some(m), Some(n)) => {
                        scenario::formal_scenario(mode.unwrap_or(CoefficientMode::Integers), m, n)
                    }
                    _ => Err(Error::Unsupported("formal needs dimM=… and dimN=…".into())),
                }
            }
            (None, [m, n]) => {
                scenario::from_presets(m, n, mode.unwrap_or(CoefficientMode::Integers))
            }
            (None, _) => Err(Error::Unsupported(
                "expected `M N` presets, `formal dimM=… dimN=…` or --scenario FILE".into(),
            )),
        }
    }
}

fn render(out: &Output, format: Format) -> String {
    match format {
        Format::Text => out.to_text(),
        Format::Json => out.to_json() + "\n",
    }
}

fn execute(command: &Command) -> Result<(String, i32)> {
    match command {
        Command::Compute { input, max_degree } => {
            let out = compute(&input.load()?, *max_degree)?;
            Ok((render(&out, input.format), EXIT_OK))
        }
        Command::Verify {
            input,
            trials,
            seed,
        } => {
            let out = verify(&input.load()?, *trials, *seed)?;
            let code = if out.all_checks_pass() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            };
            Ok((render(&out, input.format), code))
        }
        Command::Euler { input } => {
            let scenario = input.load()?;
            let chi = euler(&scenario)?;
            let text = match input.format {
                Format::Text => format!("{chi}\n"),
                Format::Json => {
                    let mut out = Output::new(&scenario);
                    out.euler = Some(small(chi)?);
                    out.to_json() + "\n"
                }
            };
            Ok((text, EXIT_OK))
        }
    }
}

/// Runs the command line `args` (including the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INPUT_ERROR
            } else {
                EXIT_OK
            };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("blowup").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn partitions_are_ordered() {
        assert_eq!(partitions(2, 2), vec![vec![1, 1], vec![2]]);
        assert_eq!(partitions(4, 4).len(), 5);
        assert_eq!(partitions(8, 8).len(), 22);
        assert_eq!(partition_name('c', &[1, 1, 2]), "c1^2*c2");
    }

    #[test]
    fn compute_cp2_point() {
        let (code, out, _) = run_str(&["compute", "cp:2", "point"]);
        assert_eq!(code, 0);
        assert!(out.contains("c1 = f*(3*h) + ĩ!(-1)"), "{out}");
        assert!(out.contains("c1^2 = 8"), "{out}");
        assert!(out.contains("c2 = 4"), "{out}");
        assert!(out.contains("euler characteristic = 4"), "{out}");
    }

    #[test]
    fn euler_values() {
        for (m, n, chi) in [
            ("cp:2", "point", "4"),
            ("cp:4", "point", "8"),
            ("cp:3", "cp-linear:1", "6"),
        ] {
            let (code, out, _) = run_str(&["euler", m, n]);
            assert_eq!((code, out.trim()), (0, chi));
        }
    }

    #[test]
    fn formal_compute_has_no_numbers() {
        let (code, out, _) =
            run_str(&["compute", "formal", "dimM=6", "dimN=2", "--format", "json"]);
        assert_eq!(code, 0);
        let parsed: Output = serde_json::from_str(&out).unwrap();
        assert!(parsed.chern_numbers.is_none() && parsed.euler.is_none());
        assert_eq!(parsed.classes.len(), 4);
        let (code, _, err) = run_str(&["euler", "formal", "dimM=6", "dimN=2"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn input_errors_exit_2() {
        assert_eq!(run_str(&["compute", "cp:2"]).0, 2);
        assert_eq!(run_str(&["compute", "cp:9", "point"]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(
            run_str(&["compute", "--scenario", "/nonexistent.json"]).0,
            2
        );
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn verify_is_deterministic() {
        let a = run_str(&[
            "verify", "cp:2", "point", "--trials", "5", "--seed", "3", "--format", "json",
        ]);
        let b = run_str(&[
            "verify", "cp:2", "point", "--trials", "5", "--seed", "3", "--format", "json",
        ]);
        assert_eq!(a.0, 0);
        assert_eq!(a, b);
    }
}

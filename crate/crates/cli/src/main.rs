use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use subspace_core::chow::{
    chow_form_curve, chow_form_fullspace, chow_form_points, chow_weight, height_chow, ChowForm,
    ChowFormRecord, WeightVec,
};
use subspace_core::constants::{report_json, to_decimal, ExternalConstants};
use subspace_core::expr::{
    parse_binary_form, parse_chow_form, parse_form, parse_place, parse_point, parse_poly,
    parse_scalar,
};
use subspace_core::funcfield::{divisor, factor, Rat};
use subspace_core::heights::{height_family, height_point, weil};
use subspace_core::varieties::in_subgeneral_position;
use subspace_core::verifier::{
    analyze, chain_check, parse_rational, run_experiment, sample_points, Scenario, ScenarioSpec,
};
use subspace_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "subspace",
    version,
    about = "Heights, Chow forms and the effective subspace inequality over Q(t)"
)]
struct Cli {
    /// Print rationals as decimals instead of exact fractions.
    #[arg(long, global = true)]
    decimal: bool,
    /// Report domain errors as a JSON object on stderr.
    #[arg(long, global = true)]
    json_errors: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Height of a point, or of a family of forms.
    Height {
        #[arg(long, conflicts_with = "form", required_unless_present = "form")]
        point: Option<String>,
        /// Forms in X0..XM; several give the height of the family.
        #[arg(long)]
        form: Vec<String>,
        /// Ambient dimension M for --form (default: the largest index used).
        #[arg(long)]
        ambient: Option<usize>,
    },
    /// Weil function of a form at a place and a point.
    Weil {
        #[arg(long)]
        place: String,
        #[arg(long)]
        form: String,
        #[arg(long)]
        point: String,
    },
    /// Principal divisor of an element of Q(t).
    Divisor { value: String },
    /// Factorization of a polynomial in Q[t].
    Factor { poly: String },
    /// Chow form of a parametrized curve, a point set, or projective space.
    ChowForm {
        /// Binary forms in s0, s1 parametrizing a curve.
        #[arg(long, group = "source")]
        curve: Vec<String>,
        /// Points of a zero-dimensional variety.
        #[arg(long = "point", group = "source")]
        points: Vec<String>,
        /// Projective space of this dimension.
        #[arg(long, group = "source")]
        fullspace: Option<usize>,
        /// Write the form to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chow weight of a stored Chow form with respect to a weight vector.
    ChowWeight {
        /// File written by chow-form.
        #[arg(long)]
        form: PathBuf,
        /// Comma-separated nonnegative rationals.
        #[arg(long, allow_hyphen_values = true)]
        c: String,
    },
    /// Subgeneral-position test for the hypersurfaces of a scenario.
    Position {
        #[arg(long)]
        scenario: PathBuf,
        /// Overrides the scenario's m.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Effective constants of a scenario.
    Constants {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Evaluates the inequality chain at explicit points (or the scenario's sample).
    Verify {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long = "point")]
        points: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a seeded experiment over sampled points.
    Experiment {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Overrides the scenario's sample count.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CmdResult = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_or_return(out: Option<&Path>, text: String) -> CmdResult {
    match out {
        Some(p) => {
            fs::write(p, format!("{}\n", text.trim_end()))
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn load_spec(path: &Path) -> Result<ScenarioSpec, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Domain(Error::Scenario(e.to_string())))
}

/// Largest `k` with `Xk` in the text.
fn max_x_index(text: &str) -> usize {
    let b = text.as_bytes();
    let mut best = 0;
    for (i, &c) in b.iter().enumerate() {
        if c == b'X' {
            let digits: String = text[i + 1..]
                .chars()
                .take_while(|d| d.is_ascii_digit())
                .collect();
            if let Ok(k) = digits.parse::<usize>() {
                best = best.max(k);
            }
        }
    }
    best
}

struct Printer {
    decimal: bool,
}

impl Printer {
    fn rat(&self, x: &Rat) -> String {
        if self.decimal {
            to_decimal(x, 10)
        } else {
            x.to_string()
        }
    }
}

fn chow_record_json(f: &ChowForm) -> String {
    serde_json::to_string_pretty(&f.to_record()).expect("record serializes")
}

fn load_chow(path: &Path) -> Result<ChowForm, Failure> {
    let rec: ChowFormRecord = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Usage(format!("{}: not a Chow form file: {e}", path.display())))?;
    Ok(parse_chow_form(rec.n, rec.ambient, rec.degree, &rec.form)?)
}

fn run(cli: &Cli) -> CmdResult {
    let pr = Printer {
        decimal: cli.decimal,
    };
    match &cli.command {
        Command::Height {
            point,
            form,
            ambient,
        } => {
            if let Some(p) = point {
                return Ok(height_point(&parse_point(p)?).to_string());
            }
            let m =
                ambient.unwrap_or_else(|| form.iter().map(|f| max_x_index(f)).max().unwrap_or(0));
            let qs = form
                .iter()
                .map(|f| parse_form(f, m))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(height_family(&qs)?.to_string())
        }
        Command::Weil { place, form, point } => {
            let x = parse_point(point)?;
            let q = parse_form(form, x.ambient_dim())?;
            let p = parse_place(place)?;
            Ok(weil(&p, &q, &x)?.to_string())
        }
        Command::Divisor { value } => {
            let d = divisor(&parse_scalar(value)?)?;
            Ok(d.to_string())
        }
        Command::Factor { poly } => {
            let f = factor(&parse_poly(poly)?)?;
            let mut parts = vec![pr.rat(&f.unit)];
            for (g, k) in &f.factors {
                parts.push(if *k == 1 {
                    format!("({g})")
                } else {
                    format!("({g})^{k}")
                });
            }
            Ok(parts.join(" * "))
        }
        Command::ChowForm {
            curve,
            points,
            fullspace,
            out,
        } => {
            let f = if !curve.is_empty() {
                let g = curve
                    .iter()
                    .map(|s| parse_binary_form(s))
                    .collect::<Result<Vec<_>, _>>()?;
                chow_form_curve(&g)?
            } else if !points.is_empty() {
                let ps = points
                    .iter()
                    .map(|s| parse_point(s))
                    .collect::<Result<Vec<_>, _>>()?;
                chow_form_points(&ps)?
            } else if let Some(m) = fullspace {
                chow_form_fullspace(*m)?
            } else {
                return Err(Failure::Usage(
                    "one of --curve, --point or --fullspace is required".into(),
                ));
            };
            write_or_return(out.as_deref(), chow_record_json(&f))
        }
        Command::ChowWeight { form, c } => {
            let f = load_chow(form)?;
            let entries = c
                .split(',')
                .map(|s| parse_rational(s.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            let w = WeightVec::new(entries)?;
            Ok(pr.rat(&chow_weight(&f, &w)?))
        }
        Command::Position { scenario, m } => {
            let spec = load_spec(scenario)?;
            let (x, qs) = spec.variety_and_polys()?;
            let r = in_subgeneral_position(&qs, &x, m.unwrap_or(spec.m))?;
            Ok(json!({"holds": r.holds, "witness": r.witness}).to_string())
        }
        Command::Constants { scenario } => {
            let sc = Scenario::from_spec(&load_spec(scenario)?)?;
            let a = analyze(&sc)?;
            let consts =
                ExternalConstants::new(sc.constants.a.clone(), sc.constants.a_prime.clone())?;
            let mut v = report_json(&a.params, &consts)?;
            if let Some(f) = &a.fy {
                v["image_chow_height"] = json!(height_chow(f));
            }
            Ok(serde_json::to_string_pretty(&v).expect("json"))
        }
        Command::Verify {
            scenario,
            points,
            out,
        } => {
            let sc = Scenario::from_spec(&load_spec(scenario)?)?;
            let a = analyze(&sc)?;
            let xs = if points.is_empty() {
                sample_points(&sc)?
            } else {
                points
                    .iter()
                    .map(|p| parse_point(p))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let reports = xs
                .iter()
                .map(|x| chain_check(&a, x))
                .collect::<Result<Vec<_>, _>>()?;
            let text = serde_json::to_string_pretty(&reports).expect("json");
            write_or_return(out.as_deref(), text)
        }
        Command::Experiment {
            scenario,
            seed,
            count,
            out,
            format,
        } => {
            let mut spec = load_spec(scenario)?;
            spec.sample.seed = *seed;
            if let Some(c) = count {
                spec.sample.count = *c;
            }
            let report = run_experiment(&Scenario::from_spec(&spec)?)?;
            let text = match format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            write_or_return(out.as_deref(), text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            if !text.is_empty() {
                println!("{}", text.trim_end());
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            if cli.json_errors {
                eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()}));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use logenriques::abelian::{
    self, brute_force_fixed_configurations, CmType, KummerScenario, SurfaceAffineAuto,
    DEFAULT_ORACLE_BUDGET,
};
use logenriques::arith::TorsionVector;
use logenriques::catalog::{self, Catalog, CheckStatus};
use logenriques::index::{self, CoverKind, IndexResult, QuotientScenario};
use logenriques::rational::to_json;
use logenriques::singular::{self, FixedComponentModel};

#[derive(Parser)]
#[command(
    name = "logenriques",
    version,
    about = "Canonical index, quotient singularities and Kummer-fiber quotients of cyclic actions on symplectic varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Table,
    Json,
}

impl From<ReportFormat> for Format {
    fn from(f: ReportFormat) -> Self {
        match f {
            ReportFormat::Table => Format::Table,
            ReportFormat::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Canonical index of Y/<φ> for a range of n at fixed order d.
    IndexTable {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n_from: u64,
        #[arg(long)]
        n_to: u64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Classify the quotient of a 2n-dimensional symplectic variety by an order-d action.
    Classify {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u64,
        /// φ multiplies the symplectic form by ξ_d^k.
        #[arg(long, default_value_t = 1)]
        k: u64,
        /// The action is free, so the cover is étale.
        #[arg(long)]
        etale: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: ReportFormat,
    },
    /// Age and singularity class along a fixed component of a prime-order action.
    Rst {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        t: Option<u64>,
        /// Exponents a_1,...,a_t of the paired eigenvalues.
        #[arg(long, value_delimiter = ',')]
        a: Vec<u64>,
        /// Also compute the age of every power φ^k.
        #[arg(long)]
        all_powers: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: ReportFormat,
    },
    /// Quotient of Kum_n A by the automorphism induced from f = (mult1·x + u, mult2·y + v).
    Kummer {
        #[command(flatten)]
        auto: AutoArgs,
        #[arg(long)]
        n: u64,
        /// Search torsion configurations fixed by Kum_n(f).
        #[arg(long)]
        oracle: bool,
        /// Torsion level for the search (defaults to n + 1).
        #[arg(long)]
        level: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
        budget: u128,
        #[arg(long, value_enum, default_value = "table")]
        format: ReportFormat,
    },
    /// Whether f = (mult1·x + u, mult2·y + v) has a fixed point on A.
    FixedPoints {
        #[command(flatten)]
        auto: AutoArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: ReportFormat,
    },
    /// Verify the catalog of example constructions.
    Catalog {
        /// Section id, construction tag or record id.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: ReportFormat,
        /// Catalog file to use instead of the shipped one.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AutoArgs {
    #[arg(long)]
    curve1: String,
    #[arg(long)]
    curve2: String,
    #[arg(long, allow_hyphen_values = true)]
    mult1: String,
    #[arg(long, allow_hyphen_values = true)]
    mult2: String,
    /// Translation on E_1, e.g. 1/4,0.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    u: String,
    /// Translation on E_2.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    v: String,
}

impl AutoArgs {
    fn build(&self) -> Result<SurfaceAffineAuto, Failure> {
        let c1: CmType = self.curve1.parse().map_err(Failure::usage)?;
        let c2: CmType = self.curve2.parse().map_err(Failure::usage)?;
        let m1 = c1.parse_unit(&self.mult1).map_err(Failure::usage)?;
        let m2 = c2.parse_unit(&self.mult2).map_err(Failure::usage)?;
        let u: TorsionVector = self.u.parse().map_err(Failure::usage)?;
        let v: TorsionVector = self.v.parse().map_err(Failure::usage)?;
        SurfaceAffineAuto::from_parts(m1, m2, &u, &v).map_err(Failure::usage)
    }

    fn inputs(&self) -> Value {
        json!({
            "curve1": self.curve1, "curve2": self.curve2,
            "mult1": self.mult1, "mult2": self.mult2,
            "u": self.u, "v": self.v,
        })
    }
}

/// An error with its exit code: 2 for bad input, 1 for a rejected scenario.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }

    fn rejected(e: impl std::fmt::Display) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

struct Output {
    command: &'static str,
    inputs: Value,
    result: Value,
    provenance: Value,
    table: String,
    csv: Option<String>,
    code: u8,
}

impl Output {
    fn emit(self, format: Format) -> u8 {
        match format {
            Format::Json => {
                let doc = json!({
                    "command": self.command,
                    "inputs": self.inputs,
                    "result": self.result,
                    "provenance": self.provenance,
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            }
            Format::Csv => print!("{}", self.csv.unwrap_or(self.table)),
            Format::Table => print!("{}", self.table),
        }
        self.code
    }
}

fn index_cell(r: &IndexResult) -> String {
    match r {
        IndexResult::KTrivial => "trivial".into(),
        IndexResult::LogEnriques { index } => index.to_string(),
    }
}

fn index_table(d: u64, n_from: u64, n_to: u64) -> Result<Output, Failure> {
    let rows = index::index_table(d, n_from, n_to).map_err(Failure::usage)?;
    let mut table = format!("{:>6}  {:>8}  {}\n", "n", "n mod d", "index");
    let mut csv = String::from("n,residue,index\n");
    let mut result = Vec::new();
    for row in &rows {
        let cell = index_cell(&row.result);
        table += &format!("{:>6}  {:>8}  {}\n", row.n, row.n % d, cell);
        csv += &format!("{},{},{}\n", row.n, row.n % d, cell);
        result.push(json!({
            "n": row.n,
            "residue": row.n % d,
            "result": row.result,
        }));
    }
    Ok(Output {
        command: "index-table",
        inputs: json!({ "d": d, "n_from": n_from, "n_to": n_to }),
        result: Value::Array(result),
        provenance: json!("smallest r | d with d | r·n; K-trivial iff d | n"),
        table,
        csv: Some(csv),
        code: 0,
    })
}

fn classify(n: u64, d: u64, k: u64, etale: bool) -> Result<Output, Failure> {
    let kind = if etale {
        CoverKind::Etale
    } else {
        CoverKind::QuasiEtale
    };
    let sc = QuotientScenario::new(n, d, k, kind).map_err(Failure::usage)?;
    let result = sc.canonical_index().map_err(Failure::rejected)?;
    let chi = index::etale_chi_constraint(n, d);
    let mut table = format!(
        "dim {}, order {d}, multiplier ξ_{d}^{k}\n{result}\nχ constraint {d} | n+1 = {}: {}\n",
        2 * n,
        n + 1,
        if chi { "holds" } else { "fails" }
    );
    let mut code = 0;
    if etale && !chi {
        table += "a free action of this order is impossible: χ(O_Y) = n+1 is not divisible by d\n";
        code = 1;
    }
    Ok(Output {
        command: "classify",
        inputs: json!({ "n": n, "d": d, "k": k, "cover": kind }),
        result: json!({
            "dim": 2 * n,
            "index": result,
            "torsion_order": result.torsion_order(),
            "etale_chi_constraint": chi,
        }),
        provenance: json!("index: smallest r | d with d | r·n; étale case needs d | n+1"),
        table,
        csv: None,
        code,
    })
}

fn rst(
    p: u64,
    n: u64,
    s: u64,
    t: Option<u64>,
    a: Vec<u64>,
    all_powers: bool,
) -> Result<Output, Failure> {
    if let Some(t) = t {
        if t != a.len() as u64 {
            return Err(Failure::usage(format!(
                "--t {t} does not match the {} exponents given with --a",
                a.len()
            )));
        }
    }
    let model = FixedComponentModel::new(p, n, s, a.clone()).map_err(Failure::usage)?;
    let weights = singular::weights_from_model(&model);
    let age = singular::age(&weights);
    let symbolic = singular::symbolic_age(p, n, s).map_err(Failure::usage)?;
    let class = singular::classify_generator(&model).map_err(Failure::rejected)?;
    let rule = singular::paper_terminality_conditions(p, n, s);
    let mut table = format!(
        "weights {:?} / {p}\nage {age} (closed form {symbolic})\nclass {class}\nterminality rule: {}\n",
        weights.exps,
        if rule { "terminal" } else { "not terminal" }
    );
    let mut result = json!({
        "weights": weights.exps,
        "order": p,
        "age": to_json(&age),
        "symbolic_age": to_json(&symbolic),
        "class": class,
        "terminality_rule": rule,
    });
    if all_powers {
        let scan = singular::classify_all_powers(&model);
        for pa in &scan.ages {
            table += &format!("  φ^{:<3} age {}\n", pa.k, pa.age);
        }
        table += &format!(
            "all powers: {} (min age {}){}\n",
            scan.all_powers_class,
            scan.min_age_over_powers,
            if scan.discrepancy {
                ", differs from the generator"
            } else {
                ""
            }
        );
        result["all_powers"] = serde_json::to_value(&scan).expect("json");
    }
    Ok(Output {
        command: "rst",
        inputs: json!({ "p": p, "n": n, "s": s, "t": model.t(), "a": a, "all_powers": all_powers }),
        result,
        provenance: json!("age = Σ e_j / p; terminal iff age > 1, canonical iff age ≥ 1"),
        table,
        csv: None,
        code: 0,
    })
}

fn kummer(
    auto: &AutoArgs,
    n: u64,
    oracle: bool,
    level: Option<u64>,
    budget: u128,
) -> Result<Output, Failure> {
    let f = auto.build()?;
    let sc = KummerScenario::new(f.clone(), n).map_err(Failure::rejected)?;
    let report = abelian::kummer_quotient_classification(&sc).map_err(Failure::rejected)?;
    let fixed = abelian::fixed_points_exist_on_surface(&f);
    let mut table = format!(
        "Kum_{n} A, dim {}\norder {}, multiplier ξ_{}^{}\n{}\nχ constraint {} | n+1: {}\nf has a fixed point on A: {}\n",
        report.dim,
        report.order,
        report.order,
        report.k,
        report.index,
        report.order,
        report.etale_chi_constraint,
        fixed.exists,
    );
    match (&report.freeness, &report.freeness_note) {
        (Some(fr), _) => {
            table += &format!(
                "freeness ({:?} template): {}\n",
                fr.applicable_case,
                if fr.free { "free" } else { "not shown free" }
            )
        }
        (None, Some(note)) => table += &format!("freeness: not decided ({note})\n"),
        (None, None) => {}
    }
    table += &format!("note: {}\n", report.order_note);
    let mut result = json!({
        "report": report,
        "fixed_points_on_surface": fixed,
    });
    let mut inputs = auto.inputs();
    inputs["n"] = json!(n);
    if oracle {
        let level = level.unwrap_or(n + 1);
        inputs["level"] = json!(level);
        inputs["budget"] = json!(budget.to_string());
        let r = brute_force_fixed_configurations(&f, n, level, budget).map_err(Failure::rejected)?;
        let reduced = r.reduced().count();
        table += &format!(
            "oracle at level {level}: {} prefixes, {} fixed configurations, {} reduced\n",
            r.enumerated,
            r.configurations.len(),
            reduced
        );
        for c in r.reduced().take(5) {
            table += &format!("  {:?}\n", c.points);
        }
        result["oracle"] = json!({
            "level": r.level,
            "enumerated": r.enumerated.to_string(),
            "fixed": r.configurations.len(),
            "reduced": reduced,
            "configurations": r.configurations,
        });
    }
    Ok(Output {
        command: "kummer",
        inputs,
        result,
        provenance: json!("index: smallest r | d with d | r·n; freeness from the template predicates"),
        table,
        csv: None,
        code: 0,
    })
}

fn fixed_points(auto: &AutoArgs) -> Result<Output, Failure> {
    let f = auto.build()?;
    let r = abelian::fixed_points_exist_on_surface(&f);
    let mut table = format!(
        "elementary divisors of α − I: {}\nfixed point: {}\n",
        r.elementary_divisors.join(", "),
        if r.exists { "yes" } else { "no" }
    );
    if let Some(w) = &r.witness {
        table += &format!("witness {w}\n");
    }
    Ok(Output {
        command: "fixed-points",
        inputs: auto.inputs(),
        result: serde_json::to_value(&r).expect("json"),
        provenance: json!("(α − I)x ≡ −b solved through the Smith normal form of α − I"),
        table,
        csv: None,
        code: 0,
    })
}

fn run_catalog(filter: Option<String>, file: Option<PathBuf>) -> Result<Output, Failure> {
    let cat = match &file {
        Some(path) => Catalog::load(path).map_err(Failure::usage)?,
        None => Catalog::shipped(),
    };
    let summary = catalog::run_catalog(&cat, filter.as_deref());
    let mut table = String::new();
    for v in &summary.verdicts {
        table += &format!(
            "{:<8} {:<30} {:<14}",
            v.paper_section,
            v.id,
            v.outcome.to_string()
        );
        let failed: Vec<String> = v
            .failures()
            .map(|c| match &c.status {
                CheckStatus::Fail { got, expected } => {
                    format!("{}: got {got}, expected {expected}", c.field)
                }
                _ => unreachable!(),
            })
            .collect();
        let unchecked: Vec<&str> = v
            .checks
            .iter()
            .filter(|c| matches!(c.status, CheckStatus::NotCheckable { .. }))
            .map(|c| c.field.as_str())
            .collect();
        if !failed.is_empty() {
            table += &failed.join("; ");
        } else if !unchecked.is_empty() {
            table += &format!("not checkable: {}", unchecked.join(", "));
        }
        table.push('\n');
    }
    table += &format!(
        "{} records: {} pass, {} fail, {} not checkable\n",
        summary.verdicts.len(),
        summary.passed,
        summary.failed,
        summary.not_checkable
    );
    let provenance: Vec<Value> = summary
        .verdicts
        .iter()
        .filter_map(|v| cat.records().find(|r| r.id == v.id))
        .map(|r| json!({ "id": r.id, "fields": r.provenance, "note": r.note }))
        .collect();
    Ok(Output {
        command: "catalog",
        inputs: json!({
            "filter": filter,
            "file": file.map(|p| p.display().to_string()),
        }),
        code: summary.exit_code() as u8,
        result: serde_json::to_value(&summary).expect("json"),
        provenance: Value::Array(provenance),
        table,
        csv: None,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, format) = match cli.command {
        Command::IndexTable {
            d,
            n_from,
            n_to,
            format,
        } => (index_table(d, n_from, n_to), format),
        Command::Classify {
            n,
            d,
            k,
            etale,
            format,
        } => (classify(n, d, k, etale), format.into()),
        Command::Rst {
            p,
            n,
            s,
            t,
            a,
            all_powers,
            format,
        } => (rst(p, n, s, t, a, all_powers), format.into()),
        Command::Kummer {
            auto,
            n,
            oracle,
            level,
            budget,
            format,
        } => (kummer(&auto, n, oracle, level, budget), format.into()),
        Command::FixedPoints { auto, format } => (fixed_points(&auto), format.into()),
        Command::Catalog {
            filter,
            format,
            file,
        } => (run_catalog(filter, file), format.into()),
    };
    match out {
        Ok(out) => ExitCode::from(out.emit(format)),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

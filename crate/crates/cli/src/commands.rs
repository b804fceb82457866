use std::path::Path;

use pcentered::centered::{
    is_p1p2_centered, is_p_centered, is_p_centered_bruteforce, is_p_centered_by_color_subsets,
    split_palette, Coloring, SplitColoring, Verdict,
};
use pcentered::expansion::{nabla_r_exact, nabla_r_greedy};
use pcentered::generators::{
    debski_graph, debski_subdivided, gnp, standard, FamilyParams, Standard,
};
use pcentered::random_lb::{janson_report, lower_bound_experiment, q_threshold, write_csv};
use pcentered::solver::{chi_p_exact, SolveBudget, SolveStatus};
use pcentered::Graph;
use serde::Serialize;
use serde_json::Value;

use crate::config::{
    BoundsConfig, ExperimentConfig, Family, GenerateConfig, GraphFormat, NablaConfig, NablaMode,
    SolveConfig, VerifyConfig, VerifyMethod,
};
use crate::error::{CliError, EXIT_BUDGET, EXIT_OK, EXIT_VIOLATION};
use crate::{write_file, Outcome};

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::input("io", format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    Graph::from_json(&read(path)?)
        .map_err(|e| CliError::input("graph", format!("{}: {e}", path.display())))
}

/// Either `{"k", "colors"[, "palette"]}` or a bare array of colors.
enum ColoringInput {
    Plain(Coloring),
    Split(SplitColoring),
}

fn read_coloring(path: &Path) -> Result<ColoringInput, CliError> {
    let bad =
        |e: serde_json::Error| CliError::input("coloring", format!("{}: {e}", path.display()));
    let value: Value = serde_json::from_str(&read(path)?).map_err(bad)?;
    if value.is_array() {
        let colors: Vec<usize> = serde_json::from_value(value).map_err(bad)?;
        return Ok(ColoringInput::Plain(Coloring::from_colors(colors)));
    }
    if value.get("palette").is_some() {
        return Ok(ColoringInput::Split(
            serde_json::from_value(value).map_err(bad)?,
        ));
    }
    Ok(ColoringInput::Plain(
        serde_json::from_value(value).map_err(bad)?,
    ))
}

fn need<T>(value: Option<T>, key: &str, family: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::input("config", format!("family {family} needs key {key:?}")))
}

pub fn generate(c: GenerateConfig) -> Result<Outcome, CliError> {
    let params = || {
        let base = FamilyParams::new(c.p, c.t, c.b);
        match c.s {
            Some(s) => base.with_subdivision(s),
            None => base,
        }
    };
    let g = match c.family {
        Family::Debski => debski_graph(&params(), &c.limits)?,
        Family::Subdivided => debski_subdivided(&params(), &c.limits)?,
        Family::Gnp => gnp(need(c.n, "n", "gnp")?, need(c.q, "q", "gnp")?, c.seed)?,
        Family::Path => standard(Standard::Path {
            n: need(c.n, "n", "path")?,
        })?,
        Family::Cycle => standard(Standard::Cycle {
            n: need(c.n, "n", "cycle")?,
        })?,
        Family::Clique => standard(Standard::Clique {
            n: need(c.n, "n", "clique")?,
        })?,
        Family::Star => standard(Standard::Star {
            leaves: need(c.n, "n", "star")?,
        })?,
        Family::Grid => standard(Standard::Grid {
            rows: need(c.rows, "rows", "grid")?,
            cols: need(c.cols, "cols", "grid")?,
        })?,
    };
    let text = match c.format {
        GraphFormat::Json => {
            let mut s = g.to_json();
            s.push('\n');
            s
        }
        GraphFormat::Dot => g.to_dot(),
    };
    Ok(Outcome {
        text,
        out: c.out,
        code: EXIT_OK,
    })
}

pub fn verify(c: VerifyConfig) -> Result<Outcome, CliError> {
    let g = read_graph(&c.graph)?;
    let input = read_coloring(&c.coloring)?;
    let verdict: Verdict = match (c.p, c.p1, c.p2) {
        (None, Some(p1), Some(p2)) => {
            let split = match input {
                ColoringInput::Split(s) => s,
                ColoringInput::Plain(f) => split_palette(&g, &f)?,
            };
            is_p1p2_centered(&g, &split, p1, p2)?
        }
        (Some(p), None, None) => {
            let f = match input {
                ColoringInput::Plain(f) => f,
                ColoringInput::Split(s) => s.base().clone(),
            };
            match c.method {
                VerifyMethod::Search => is_p_centered(&g, &f, p)?,
                VerifyMethod::Subsets => is_p_centered_by_color_subsets(&g, &f, p)?,
                VerifyMethod::Bruteforce => is_p_centered_bruteforce(&g, &f, p, &c.limits)?,
            }
        }
        _ => {
            return Err(CliError::input(
                "config",
                "give either \"p\" or both \"p1\" and \"p2\"",
            ))
        }
    };
    if let (Some(path), Some(w)) = (&c.witness_out, verdict.witness()) {
        write_file(path, &pretty(w))?;
    }
    let code = if verdict.is_centered() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    Ok(Outcome {
        text: pretty(&verdict),
        out: c.out,
        code,
    })
}

pub fn solve(c: SolveConfig) -> Result<Outcome, CliError> {
    let g = read_graph(&c.graph)?;
    let budget = SolveBudget {
        max_nodes: c.max_nodes,
        max_millis: c.max_millis,
    };
    let result = chi_p_exact(&g, c.p, &budget)?;
    let code = match result.status {
        SolveStatus::Exact => EXIT_OK,
        SolveStatus::LowerBoundOnly | SolveStatus::Timeout => EXIT_BUDGET,
    };
    Ok(Outcome {
        text: pretty(&result),
        out: c.out,
        code,
    })
}

pub fn bounds(c: BoundsConfig) -> Result<Outcome, CliError> {
    let q = match c.q {
        Some(q) => q,
        None => q_threshold::<f64>(c.n, c.p)?,
    };
    let report = janson_report(c.n, c.p, q)?;
    Ok(Outcome {
        text: pretty(&report),
        out: c.out,
        code: EXIT_OK,
    })
}

pub fn nabla(c: NablaConfig) -> Result<Outcome, CliError> {
    let g = read_graph(&c.graph)?;
    let minor = match c.mode {
        NablaMode::Exact => nabla_r_exact(&g, c.r, &c.limits)?,
        NablaMode::Greedy => nabla_r_greedy(&g, c.r),
    };
    Ok(Outcome {
        text: pretty(&minor),
        out: c.out,
        code: EXIT_OK,
    })
}

pub fn experiment(c: ExperimentConfig) -> Result<Outcome, CliError> {
    let rows = lower_bound_experiment(&c.params())?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).map_err(|e| CliError::input("io", e.to_string()))?;
    Ok(Outcome {
        text: String::from_utf8(buf).expect("csv output is utf-8"),
        out: c.out,
        code: EXIT_OK,
    })
}

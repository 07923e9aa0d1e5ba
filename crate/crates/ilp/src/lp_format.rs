//! CPLEX LP-format text export.

use std::fmt::Write;

use crate::model::{IlpModel, Sense};

/// Replaces every character outside `[A-Za-z0-9_]` with `_`, and prefixes
/// names that would otherwise start with a digit.
pub fn sanitize_name(name: &str) -> String {
    let mut out: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if out.is_empty() || out.starts_with(|c: char| c.is_ascii_digit()) {
        out.insert(0, '_');
    }
    out
}

fn fmt_coef(c: f64) -> String {
    if c == c.trunc() && c.abs() < 1e15 {
        format!("{}", c as i64)
    } else {
        format!("{c}")
    }
}

fn write_expr(out: &mut String, model: &IlpModel, terms: &[(crate::VarId, f64)]) {
    if terms.is_empty() {
        // An empty expression is written as a zero multiple of the first
        // variable so external readers still parse the row.
        let first = model.vars().first().map_or("_x".to_string(), |v| sanitize_name(&v.name));
        let _ = write!(out, " 0 {first}");
        return;
    }
    for (k, &(v, c)) in terms.iter().enumerate() {
        let name = sanitize_name(&model.var(v).name);
        let sign = if c < 0.0 { "-" } else if k == 0 { "" } else { "+" };
        let mag = fmt_coef(c.abs());
        if sign.is_empty() {
            let _ = write!(out, " {mag} {name}");
        } else {
            let _ = write!(out, " {sign} {mag} {name}");
        }
    }
}

/// Renders `model` as LP-format text with all variables declared `General`.
pub fn export_lp_text(model: &IlpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ {}", model.name());
    out.push_str("Minimize\n obj:");
    write_expr(&mut out, model, model.objective());
    out.push('\n');

    out.push_str("Subject To\n");
    for (k, con) in model.constraints().iter().enumerate() {
        let label = sanitize_name(&con.name);
        let _ = write!(out, " r{k}_{label}:");
        write_expr(&mut out, model, &con.terms);
        let sense = match con.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        let _ = writeln!(out, " {sense} {}", fmt_coef(con.rhs));
    }

    out.push_str("Bounds\n");
    for var in model.vars() {
        let name = sanitize_name(&var.name);
        match var.upper {
            Some(u) => {
                let _ = writeln!(out, " {} <= {name} <= {}", var.lower, u);
            }
            None => {
                let _ = writeln!(out, " {name} >= {}", var.lower);
            }
        }
    }

    out.push_str("General\n");
    for chunk in model.vars().chunks(8) {
        let names: Vec<String> = chunk.iter().map(|v| sanitize_name(&v.name)).collect();
        let _ = writeln!(out, " {}", names.join(" "));
    }
    out.push_str("End\n");
    out
}

//! CPLEX LP text export for debugging.
//!
//! Layout, in this order: a comment header, `Minimize` with the objective row
//! `obj:`, `Subject To` with one row per constraint named by its model name,
//! `Bounds` with one line per column, `End`. The objective constant, which the
//! LP format cannot express, is written as a comment. Numbers use Rust's
//! shortest round-trip formatting.

use std::io::{self, Write};

use super::{LinearExpr, LpModel, Sense};

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "_.()[]".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn write_expr<W: Write>(out: &mut W, model: &LpModel, expr: &LinearExpr) -> io::Result<()> {
    if expr.is_empty() {
        return write!(
            out,
            " 0 {}",
            sanitize(&model.variables().first().map_or("x0", |v| &v.name))
        );
    }
    for (i, (var, coef)) in expr.terms().enumerate() {
        let name = sanitize(&model.variable(var).name);
        match (i, coef < 0.0) {
            (0, false) => write!(out, " {coef} {name}")?,
            (0, true) => write!(out, " - {} {name}", -coef)?,
            (_, false) => write!(out, " + {coef} {name}")?,
            (_, true) => write!(out, " - {} {name}", -coef)?,
        }
    }
    Ok(())
}

fn fmt_bound(v: f64) -> String {
    if v == f64::INFINITY {
        "+inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v}")
    }
}

pub fn write_lp<W: Write>(model: &LpModel, mut out: W) -> io::Result<()> {
    writeln!(out, "\\ hydrogrid LP export")?;
    writeln!(
        out,
        "\\ variables: {} constraints: {}",
        model.num_variables(),
        model.num_constraints()
    )?;
    writeln!(
        out,
        "\\ objective constant: {}",
        model.objective().constant_term()
    )?;
    writeln!(out, "Minimize")?;
    write!(out, " obj:")?;
    write_expr(&mut out, model, model.objective())?;
    writeln!(out)?;
    writeln!(out, "Subject To")?;
    for c in model.constraints() {
        write!(out, " {}:", sanitize(&c.name))?;
        write_expr(&mut out, model, &c.expr)?;
        let rhs = c.rhs - c.expr.constant_term();
        let sense = match c.sense {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        };
        writeln!(out, " {sense} {rhs}")?;
    }
    writeln!(out, "Bounds")?;
    for v in model.variables() {
        let name = sanitize(&v.name);
        if v.lower == f64::NEG_INFINITY && v.upper == f64::INFINITY {
            writeln!(out, " {name} free")?;
        } else {
            writeln!(out, " {} <= {name} <= {}", fmt_bound(v.lower), fmt_bound(v.upper))?;
        }
    }
    writeln!(out, "End")
}

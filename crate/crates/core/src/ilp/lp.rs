//! CPLEX LP text export.

use std::fmt::Write;

use crate::ilp::{Cmp, IlpModel, Sense, VarId};

const TERMS_PER_LINE: usize = 8;

fn write_terms(out: &mut String, m: &IlpModel, terms: &[(VarId, f64)]) {
    if terms.is_empty() {
        out.push_str(" 0");
        return;
    }
    for (i, &(v, a)) in terms.iter().enumerate() {
        if i > 0 && i % TERMS_PER_LINE == 0 {
            out.push_str("\n  ");
        }
        let sign = if a < 0.0 { '-' } else { '+' };
        if i == 0 && sign == '+' {
            out.push(' ');
        } else {
            let _ = write!(out, " {sign} ");
        }
        let mag = a.abs();
        if mag != 1.0 {
            let _ = write!(out, "{mag} ");
        }
        out.push_str(m.var_name(v));
    }
}

/// Render the model in LP format. Names are the declared variable and row
/// names, so output is stable across runs.
pub fn export_lp(m: &IlpModel) -> String {
    let mut out = String::new();
    if m.objective_constant() != 0.0 {
        let _ = writeln!(out, "\\ objective constant {}", m.objective_constant());
    }
    out.push_str(match m.sense() {
        Sense::Minimize => "Minimize\n",
        Sense::Maximize => "Maximize\n",
    });
    out.push_str(" obj:");
    write_terms(&mut out, m, m.objective());
    out.push('\n');
    out.push_str("Subject To\n");
    for c in m.constraints() {
        let _ = write!(out, " {}:", c.name);
        write_terms(&mut out, m, &c.terms);
        let op = match c.cmp {
            Cmp::Le => "<=",
            Cmp::Eq => "=",
            Cmp::Ge => ">=",
        };
        let _ = writeln!(out, " {op} {}", c.rhs);
    }
    out.push_str("Binary\n");
    for j in 0..m.num_vars() {
        let _ = writeln!(out, " {}", m.var_name(VarId(j)));
    }
    out.push_str("End\n");
    out
}

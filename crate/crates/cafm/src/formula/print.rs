//! Printer emitting minimal parentheses under the declared precedence.
//! `Formula::parse(&f.to_string())` reconstructs `f` exactly.

use std::fmt;

use super::Formula;

// Precedence levels; parenthesize a child whose level is below the
// minimum its position requires.
const LVL_IMPLIES: u8 = 1;
const LVL_OR: u8 = 2;
const LVL_AND: u8 = 3;
const LVL_NOT: u8 = 4;
const LVL_ATOM: u8 = 5;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Var(_) | Formula::Const(_) => LVL_ATOM,
        Formula::Not(_) => LVL_NOT,
        Formula::And(..) => LVL_AND,
        Formula::Or(..) => LVL_OR,
        Formula::Implies(..) => LVL_IMPLIES,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let lvl = level(f);
    if lvl < min {
        out.write_str("(")?;
        write_at(f, 0, out)?;
        return out.write_str(")");
    }
    match f {
        Formula::Var(v) => write!(out, "{v}"),
        Formula::Const(true) => out.write_str("true"),
        Formula::Const(false) => out.write_str("false"),
        Formula::Not(c) => {
            out.write_str("!")?;
            write_at(c, LVL_NOT, out)
        }
        Formula::And(l, r) => {
            write_at(l, LVL_AND, out)?;
            out.write_str(" & ")?;
            write_at(r, LVL_AND + 1, out)
        }
        Formula::Or(l, r) => {
            write_at(l, LVL_OR, out)?;
            out.write_str(" | ")?;
            write_at(r, LVL_OR + 1, out)
        }
        Formula::Implies(l, r) => {
            write_at(l, LVL_IMPLIES + 1, out)?;
            out.write_str(" -> ")?;
            write_at(r, LVL_IMPLIES, out)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, 0, out)
    }
}

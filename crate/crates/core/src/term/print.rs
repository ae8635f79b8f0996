use super::ast::{Atom, Term};

/// Canonical text with the fewest parentheses that re-parse to the same tree.
pub fn print(t: &Term) -> String {
    let mut s = String::new();
    write_term(t, &mut s);
    s
}

fn write_atom(a: &Atom, out: &mut String) {
    let (open, close) = match a.rot.get() {
        0 => ("", ""),
        1 => ("tr(", ")"),
        2 => ("tr(tr(", "))"),
        _ => ("tl(", ")"),
    };
    out.push_str(open);
    out.push_str(&a.name);
    if let Some(k) = a.label {
        out.push('.');
        out.push_str(&k.to_string());
    }
    out.push_str(close);
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Atom(a) => write_atom(a, out),
        Term::Next(x, y) => {
            write_term(x, out);
            out.push_str(" > ");
            wrap_if(matches!(**y, Term::Next(..)), y, out);
        }
        Term::Juxta(x, y) => {
            wrap_if(matches!(**x, Term::Next(..)), x, out);
            out.push('/');
            wrap_if(!y.is_atom(), y, out);
        }
    }
}

fn wrap_if(cond: bool, t: &Term, out: &mut String) {
    if cond {
        out.push('(');
        write_term(t, out);
        out.push(')');
    } else {
        write_term(t, out);
    }
}

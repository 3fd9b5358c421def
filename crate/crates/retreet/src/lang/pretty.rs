//! Canonical source renderer; `parse(pretty(p))` reproduces `p`.

use super::ast::*;

pub fn pretty_print(p: &Program) -> String {
    let mut out = String::new();
    for (i, f) in p.functions.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        print_function(f, &mut out);
    }
    out
}

fn print_function(f: &Function, out: &mut String) {
    out.push_str(&f.name);
    out.push('(');
    out.push_str(&f.loc_param);
    for p in &f.int_params {
        out.push_str(", ");
        out.push_str(p);
    }
    out.push(')');
    if matches!(f.body, Stmt::Empty) {
        out.push_str(" { }\n");
        return;
    }
    out.push_str(" {\n");
    print_stmt(&f.body, 1, out);
    out.push_str("}\n");
}

fn indent(n: usize, out: &mut String) {
    for _ in 0..n {
        out.push_str("  ");
    }
}

fn print_stmt(s: &Stmt, depth: usize, out: &mut String) {
    match s {
        Stmt::Seq(a, b) => {
            print_stmt(a, depth, out);
            print_stmt(b, depth, out);
        }
        Stmt::Par(a, b) => {
            indent(depth, out);
            out.push_str("{\n");
            print_stmt(a, depth + 1, out);
            indent(depth, out);
            out.push_str("||\n");
            print_stmt(b, depth + 1, out);
            indent(depth, out);
            out.push_str("}\n");
        }
        Stmt::If { cond, then, els, .. } => {
            indent(depth, out);
            out.push_str(&format!("if ({}) {{\n", cond_text(cond)));
            print_stmt(then, depth + 1, out);
            indent(depth, out);
            if matches!(**els, Stmt::Empty) {
                out.push_str("}\n");
            } else {
                out.push_str("} else {\n");
                print_stmt(els, depth + 1, out);
                indent(depth, out);
                out.push_str("}\n");
            }
        }
        Stmt::Block(b) => print_block(b, depth, out),
        Stmt::Empty => {}
    }
}

fn cond_text(b: &BExpr) -> String {
    match b {
        BExpr::NilTest(le) => format!("{} == nil", le),
        BExpr::True => "true".to_string(),
        BExpr::Positive(e) => format!("{} > 0", e),
        BExpr::Not(inner) => format!("!({})", cond_text(inner)),
        BExpr::And(a, b) => format!("({}) && ({})", cond_text(a), cond_text(b)),
    }
}

fn print_block(b: &Block, depth: usize, out: &mut String) {
    match b {
        Block::Call { results, callee, loc_arg, int_args, .. } => {
            indent(depth, out);
            match results.len() {
                0 => {}
                1 => {
                    out.push_str(&results[0]);
                    out.push_str(" = ");
                }
                _ => {
                    out.push('(');
                    out.push_str(&results.join(", "));
                    out.push_str(") = ");
                }
            }
            let args: Vec<String> = std::iter::once(loc_arg.to_string())
                .chain(int_args.iter().map(|e| e.to_string()))
                .collect();
            out.push_str(&format!("{}({})\n", callee, args.join(", ")));
        }
        Block::Straight(assgns) => {
            let mut i = 0;
            while i < assgns.len() {
                // a maximal run ret0 = e0, ret1 = e1, … prints as a return
                let mut k = 0;
                while i + k < assgns.len() && assgns[i + k].lhs == Lhs::Ret(k) {
                    k += 1;
                }
                if k > 0 {
                    indent(depth, out);
                    let exprs: Vec<String> =
                        assgns[i..i + k].iter().map(|a| a.rhs.to_string()).collect();
                    out.push_str(&format!("return {}\n", exprs.join(", ")));
                    i += k;
                    continue;
                }
                let a = &assgns[i];
                indent(depth, out);
                out.push_str(&format!("{} = {}\n", a.lhs, a.rhs));
                i += 1;
            }
        }
    }
}

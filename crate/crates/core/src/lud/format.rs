//! Canonical pretty-printer for ludeme trees.
//!
//! A node that fits on one line within [`LINE_WIDTH`] columns is printed
//! inline. Otherwise its leading atomic arguments stay on the opening line
//! and every further argument gets its own line, indented by two spaces.
//! Named arguments always follow positional ones, in name order.

use alloc::string::String;
use core::fmt::Write;

use super::parser::{LudemeNode, Value};

pub const LINE_WIDTH: usize = 72;
const INDENT: usize = 2;

/// Renders `root` as canonical `.lud` source, terminated by a newline.
pub fn format(root: &LudemeNode) -> String {
    let mut out = String::new();
    write_node(&mut out, root, 0);
    out.push('\n');
    out
}

fn is_atom(v: &Value) -> bool {
    matches!(v, Value::Int(_) | Value::Str(_) | Value::Ident(_))
}

fn inline_value(out: &mut String, v: &Value) {
    match v {
        Value::Int(i) => {
            let _ = write!(out, "{i}");
        }
        Value::Str(s) => {
            out.push('"');
            out.push_str(s);
            out.push('"');
        }
        Value::Ident(s) => out.push_str(s),
        Value::Node(n) => inline_node(out, n),
        Value::List(items) => {
            out.push('{');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                inline_value(out, item);
            }
            out.push('}');
        }
    }
}

fn inline_node(out: &mut String, n: &LudemeNode) {
    out.push('(');
    out.push_str(&n.name);
    for v in &n.positional {
        out.push(' ');
        inline_value(out, v);
    }
    for (k, v) in &n.named {
        out.push(' ');
        out.push_str(k);
        out.push(':');
        inline_value(out, v);
    }
    out.push(')');
}

fn inline_len(v: &Value) -> usize {
    let mut s = String::new();
    inline_value(&mut s, v);
    s.len()
}

fn pad(out: &mut String, indent: usize) {
    out.extend(core::iter::repeat_n(' ', indent));
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    match v {
        Value::Node(n) => write_node(out, n, indent),
        Value::List(items) if indent + inline_len(v) > LINE_WIDTH => {
            out.push('{');
            for item in items {
                out.push('\n');
                pad(out, indent + INDENT);
                write_value(out, item, indent + INDENT);
            }
            out.push('\n');
            pad(out, indent);
            out.push('}');
        }
        _ => inline_value(out, v),
    }
}

fn write_node(out: &mut String, n: &LudemeNode, indent: usize) {
    let mut flat = String::new();
    inline_node(&mut flat, n);
    if indent + flat.len() <= LINE_WIDTH {
        out.push_str(&flat);
        return;
    }

    out.push('(');
    out.push_str(&n.name);
    let lead = n.positional.iter().take_while(|v| is_atom(v)).count();
    for v in &n.positional[..lead] {
        out.push(' ');
        inline_value(out, v);
    }
    let rest = &n.positional[lead..];

    // `(name {` ... `})` when a single list is the only remaining argument.
    if let ([list @ Value::List(_)], true) = (rest, n.named.is_empty()) {
        out.push(' ');
        write_value(out, list, indent);
        out.push(')');
        return;
    }

    for v in rest {
        out.push('\n');
        pad(out, indent + INDENT);
        write_value(out, v, indent + INDENT);
    }
    for (k, v) in &n.named {
        out.push('\n');
        pad(out, indent + INDENT);
        out.push_str(k);
        out.push(':');
        write_value(out, v, indent + INDENT + k.len() + 1);
    }
    out.push('\n');
    pad(out, indent);
    out.push(')');
}

//! Rooted Newick reading and writing.
//!
//! Inner labels are optional and returned verbatim; branch lengths are
//! checked for being numbers and then dropped. Output is canonical: children
//! in smallest-leaf order, no whitespace, no branch lengths.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::model::{Label, NodeId, RootedTree, Subtree};

/// Parse a tree, discarding inner labels.
pub fn parse(text: &str) -> Result<RootedTree> {
    parse_labeled(text).map(|(t, _)| t)
}

/// Parse a tree and return the inner-vertex labels indexed by node id.
pub fn parse_labeled(text: &str) -> Result<(RootedTree, Vec<Option<String>>)> {
    let mut p = Parser { s: text.as_bytes(), text, pos: 0, seen: BTreeSet::new() };
    p.skip_ws();
    let shape = p.subtree()?;
    p.skip_ws();
    if p.peek().is_some_and(|c| c != b';') {
        return Err(p.err("trailing characters after tree"));
    }
    p.expect(b';')?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing characters after ';'"));
    }
    let (tree, payload) = RootedTree::with_payload(shape)?;
    Ok((tree, payload.into_iter().map(Option::flatten).collect()))
}

/// Parse every non-empty line of a multi-tree file.
pub fn parse_many(text: &str) -> Result<Vec<RootedTree>> {
    text.lines().filter(|l| !l.trim().is_empty()).map(parse).collect()
}

struct Parser<'a> {
    s: &'a [u8],
    text: &'a str,
    pos: usize,
    seen: BTreeSet<Label>,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Newick { offset: self.pos, message: message.into() }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else if self.peek().is_none() {
            Err(self.err(format!("unexpected end of input, expected '{}'", c as char)))
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn token(&mut self) -> &str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() || b"(),;:".contains(&c) {
                break;
            }
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }

    fn branch_length(&mut self) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(b':') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let tok = self.token().to_string();
            if tok.parse::<f64>().is_err() {
                return Err(Error::Newick { offset: at, message: format!("invalid branch length {tok:?}") });
            }
        }
        Ok(())
    }

    fn subtree(&mut self) -> Result<Subtree<Option<String>>> {
        self.skip_ws();
        if self.peek() == Some(b'(') {
            let open = self.pos;
            self.pos += 1;
            let mut kids = vec![self.subtree()?];
            loop {
                self.skip_ws();
                match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                        kids.push(self.subtree()?);
                    }
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    None | Some(b';') => {
                        return Err(Error::Newick { offset: open, message: "unbalanced parenthesis".into() })
                    }
                    Some(_) => return Err(self.err("expected ',' or ')'")),
                }
            }
            if kids.len() < 2 {
                return Err(Error::Newick { offset: open, message: "inner vertex with a single child".into() });
            }
            self.skip_ws();
            let tok = self.token();
            let label = (!tok.is_empty()).then(|| tok.to_string());
            self.branch_length()?;
            Ok(Subtree::Inner(label, kids))
        } else {
            let at = self.pos;
            let tok = self.token().to_string();
            if tok.is_empty() {
                let message = if self.peek().is_none() { "unexpected end of input" } else { "empty leaf name" };
                return Err(Error::Newick { offset: at, message: message.into() });
            }
            let label = Label::new(&tok).map_err(|e| Error::Newick { offset: at, message: e.to_string() })?;
            if !self.seen.insert(label.clone()) {
                return Err(Error::Newick { offset: at, message: format!("duplicate leaf label {label}") });
            }
            self.branch_length()?;
            Ok(Subtree::Leaf(label))
        }
    }
}

/// Canonical Newick without inner labels.
pub fn write(tree: &RootedTree) -> String {
    write_with(tree, |_| None)
}

/// Canonical Newick with an optional label on each inner vertex.
pub fn write_with(tree: &RootedTree, mut inner: impl FnMut(NodeId) -> Option<String>) -> String {
    let mut out = String::new();
    emit(tree, tree.root(), &mut inner, &mut out);
    out.push(';');
    out
}

fn emit(tree: &RootedTree, v: NodeId, inner: &mut impl FnMut(NodeId) -> Option<String>, out: &mut String) {
    if let Some(l) = tree.label(v) {
        out.push_str(l.as_str());
        return;
    }
    out.push('(');
    for (i, &c) in tree.children(v).iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        emit(tree, c, inner, out);
    }
    out.push(')');
    if let Some(l) = inner(v) {
        let _ = write!(out, "{l}");
    }
}

/// Canonical Newick with support values (three decimals) as inner labels.
pub fn write_support(tree: &RootedTree, support: impl Fn(NodeId) -> Option<f64>) -> String {
    write_with(tree, |v| support(v).map(|s| format!("{s:.3}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tree::outdegree_histogram;

    #[test]
    fn parses_small_tree() {
        let t = parse("((a,b),c);").unwrap();
        assert_eq!(t.inner_count(), 2);
        assert_eq!(t.leaf_count(), 3);
    }

    #[test]
    fn ternary_fifteen_species_tree() {
        let s = "(((SE001,SE002,SE003),SE004,SE005),(SE006,(SE007,SE008,SE009),SE010),(SE011,SE012,(SE013,SE014,SE015)));";
        let t = parse(s).unwrap();
        assert_eq!(t.leaf_count(), 15);
        assert_eq!(t.inner_count(), 7);
        let h = outdegree_histogram(&t);
        assert_eq!(h.get(&3), Some(&7));
        assert_eq!(write(&t), s);
    }

    #[test]
    fn ignores_whitespace_lengths_and_reads_inner_labels() {
        let (t, labels) = parse_labeled(" ( (a:0.1, b:2)S:1e-3 ,c ) D ;\n").unwrap();
        assert_eq!(write(&t), "((a,b),c);");
        assert_eq!(labels[0].as_deref(), Some("D"));
        assert_eq!(labels[1].as_deref(), Some("S"));
    }

    #[test]
    fn error_offsets() {
        let e = |s: &str| match parse(s) {
            Err(Error::Newick { offset, message }) => (offset, message),
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(e("((a,b),c;").0, 0);
        assert!(e("((a,b),c;").1.contains("unbalanced"));
        let (off, msg) = e("((a,b),a);");
        assert_eq!(off, 7);
        assert!(msg.contains("duplicate"));
        let (off, msg) = e("((a,),c);");
        assert_eq!(off, 4);
        assert!(msg.contains("empty leaf"));
        assert!(e("(a,b));").1.contains("trailing"));
        assert!(e("(a:x,b);").1.contains("branch length"));
    }

    #[test]
    fn writes_inner_labels() {
        let t = parse("((a,b),c);").unwrap();
        let s = write_with(&t, |v| Some(if v == 0 { "D".into() } else { "S".into() }));
        assert_eq!(s, "((a,b)S,c)D;");
        assert_eq!(write_support(&t, |v| (v == 1).then_some(0.5)), "((a,b)0.500,c);");
    }
}

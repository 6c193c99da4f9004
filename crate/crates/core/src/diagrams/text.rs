//! Line-oriented text format for diagrams.
//!
//! ```text
//! sig(*x) tri((0 2 4)(1 5 3)) legs(6:x 7:x) edges(0-1 2-3 4-6 5-7) loops(0) sign(+)
//! ```
//! `tri` lists each trivalent vertex as its cyclic triple of darts, `legs` gives a
//! dart and its attachment (`label#pos` on intervals and circles), `edges` pairs darts.

use super::graph::{Attach, Graph, NO_DART};
use super::signature::Signature;
use crate::error::{Error, Result};

pub fn write_graph(g: &Graph, sig: &Signature, sign: i8) -> String {
    let mut s = format!("sig({sig}) tri(");
    for t in &g.tri {
        s.push_str(&format!("({} {} {})", t[0], t[1], t[2]));
    }
    s.push_str(") legs(");
    for (i, &(d, a)) in g.legs.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        match a {
            Attach::Skeleton { comp, pos } => {
                s.push_str(&format!("{d}:{}#{pos}", sig.label(comp as usize)))
            }
            Attach::Free { comp } => s.push_str(&format!("{d}:{}", sig.label(comp as usize))),
        }
    }
    s.push_str(") edges(");
    let mut first = true;
    for (d, &m) in g.mate.iter().enumerate() {
        if m != NO_DART && (d as u32) < m {
            if !first {
                s.push(' ');
            }
            first = false;
            s.push_str(&format!("{d}-{m}"));
        }
    }
    s.push_str(&format!(
        ") loops({}) sign({})",
        g.loops,
        if sign < 0 { '-' } else { '+' }
    ));
    s
}

fn section<'a>(s: &'a str, name: &str) -> Result<&'a str> {
    let open = format!("{name}(");
    let start = s
        .find(&open)
        .ok_or_else(|| Error::Parse(format!("missing section {name}")))?
        + open.len();
    let mut depth = 1;
    for (i, ch) in s[start..].char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Ok(&s[start..start + i]);
                }
            }
            _ => {}
        }
    }
    Err(Error::Parse(format!("unterminated section {name}")))
}

fn num(t: &str) -> Result<u32> {
    t.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad number {t:?}")))
}

pub fn read_graph(s: &str) -> Result<(Signature, Graph, i8)> {
    let sig: Signature = section(s, "sig")?.parse()?;
    let mut g = Graph::new();
    let grow = |g: &mut Graph, d: u32| {
        if g.mate.len() <= d as usize {
            g.mate.resize(d as usize + 1, NO_DART);
        }
    };
    for t in section(s, "tri")?.split(')') {
        let t = t.trim().trim_start_matches('(');
        if t.is_empty() {
            continue;
        }
        let ds: Vec<u32> = t.split_whitespace().map(num).collect::<Result<_>>()?;
        if ds.len() != 3 {
            return Err(Error::Parse(format!("vertex needs three darts: {t:?}")));
        }
        for &d in &ds {
            grow(&mut g, d);
        }
        g.tri.push([ds[0], ds[1], ds[2]]);
    }
    for tok in section(s, "legs")?.split_whitespace() {
        let (d, rest) = tok
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad leg {tok:?}")))?;
        let d = num(d)?;
        grow(&mut g, d);
        let attach = match rest.split_once('#') {
            Some((label, pos)) => Attach::Skeleton {
                comp: sig.require(label)? as u8,
                pos: num(pos)? as u16,
            },
            None => Attach::Free {
                comp: sig.require(rest)? as u8,
            },
        };
        g.legs.push((d, attach));
    }
    for tok in section(s, "edges")?.split_whitespace() {
        let (a, b) = tok
            .split_once('-')
            .ok_or_else(|| Error::Parse(format!("bad edge {tok:?}")))?;
        let (a, b) = (num(a)?, num(b)?);
        grow(&mut g, a.max(b));
        g.link(a, b);
    }
    g.loops = num(section(s, "loops")?)?;
    let sign = match section(s, "sign")?.trim() {
        "+" => 1,
        "-" => -1,
        other => return Err(Error::Parse(format!("bad sign {other:?}"))),
    };
    Ok((sig, g, sign))
}

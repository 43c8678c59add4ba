//! The `FST v1` line format.
//!
//! ```text
//! FST v1
//! states <n>
//! initial <id>
//! trans <state> <letter> <next-state> <output|->
//! ```
//!
//! `#` starts a comment; blank lines are ignored. Every state needs exactly
//! one `trans` line per letter.

use std::fmt::Write;

use super::Fst;
use crate::error::{Error, Result};
use crate::words::Word;

pub(super) fn serialize(a: &Fst) -> String {
    let mut s = String::new();
    writeln!(s, "FST v1").unwrap();
    writeln!(s, "states {}", a.states()).unwrap();
    writeln!(s, "initial {}", a.initial()).unwrap();
    for q in 0..a.states() {
        for letter in 0..2u8 {
            let out = a.output(q, letter);
            let out = if out.is_empty() { "-".to_string() } else { out.to_string() };
            writeln!(s, "trans {q} {letter} {} {out}", a.next(q, letter)).unwrap();
        }
    }
    s
}

pub(super) fn parse(text: &str) -> Result<Fst> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let mut expect =
        |what: &str| lines.next().ok_or_else(|| Error::parse(text.lines().count().max(1), format!("expected {what}")));
    let (line, header) = expect("header")?;
    if header.split_whitespace().collect::<Vec<_>>() != ["FST", "v1"] {
        return Err(Error::parse(line, "expected header 'FST v1'"));
    }
    let (line, states) = expect("states line")?;
    let states = keyword_number(line, states, "states")?;
    if states == 0 {
        return Err(Error::parse(line, "a transducer needs at least one state"));
    }
    let (line, initial) = expect("initial line")?;
    let initial = keyword_number(line, initial, "initial")?;
    if initial >= states {
        return Err(Error::parse(line, format!("initial state {initial} out of range")));
    }

    let mut table: Vec<[Option<(usize, Word)>; 2]> = vec![[None, None]; states];
    for (line, l) in lines {
        let fields: Vec<&str> = l.split_whitespace().collect();
        let [kw, q, a, t, out] = fields[..] else {
            return Err(Error::parse(line, "expected 'trans <state> <letter> <next> <output>'"));
        };
        if kw != "trans" {
            return Err(Error::parse(line, format!("unexpected keyword {kw:?}")));
        }
        let q = number(line, q)?;
        let t = number(line, t)?;
        let a: u8 = match a {
            "0" => 0,
            "1" => 1,
            _ => return Err(Error::parse(line, format!("letter {a:?} is not 0 or 1"))),
        };
        if q >= states || t >= states {
            return Err(Error::parse(line, "state out of range"));
        }
        let out = if out == "-" {
            Word::empty()
        } else {
            out.parse().map_err(|_| Error::parse(line, format!("output {out:?} is not a binary word")))?
        };
        let slot = &mut table[q][a as usize];
        if slot.is_some() {
            return Err(Error::parse(line, format!("duplicate transition for state {q} on letter {a}")));
        }
        *slot = Some((t, out));
    }

    let mut delta = Vec::with_capacity(states);
    let mut lambda = Vec::with_capacity(states);
    for (q, row) in table.into_iter().enumerate() {
        let [zero, one] = row;
        let zero = zero.ok_or(Error::MissingTransition { state: q, letter: 0 })?;
        let one = one.ok_or(Error::MissingTransition { state: q, letter: 1 })?;
        delta.push([zero.0, one.0]);
        lambda.push([zero.1, one.1]);
    }
    Fst::new(initial, delta, lambda)
}

fn keyword_number(line: usize, l: &str, kw: &str) -> Result<usize> {
    match l.split_whitespace().collect::<Vec<_>>()[..] {
        [k, n] if k == kw => number(line, n),
        _ => Err(Error::parse(line, format!("expected '{kw} <number>'"))),
    }
}

fn number(line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::parse(line, format!("{s:?} is not a natural number")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_machine_text() {
        let text = Fst::difference().to_text();
        assert_eq!(
            text,
            "FST v1\nstates 3\ninitial 0\n\
             trans 0 0 1 -\ntrans 0 1 2 -\n\
             trans 1 0 1 0\ntrans 1 1 2 1\n\
             trans 2 0 1 1\ntrans 2 1 2 0\n"
        );
        assert_eq!(Fst::from_text(&text).unwrap(), Fst::difference());
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# identity\nFST v1\n\nstates 1 # one state\ninitial 0\ntrans 0 0 0 0\ntrans 0 1 0 1\n";
        assert_eq!(Fst::from_text(text).unwrap(), Fst::identity());
    }

    #[test]
    fn missing_transition() {
        let text = "FST v1\nstates 2\ninitial 0\ntrans 0 0 0 0\ntrans 0 1 1 1\ntrans 1 0 0 -\n";
        assert_eq!(Fst::from_text(text), Err(Error::MissingTransition { state: 1, letter: 1 }));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(Fst::from_text(""), Err(Error::Parse { .. })));
        assert!(matches!(Fst::from_text("FST v2\n"), Err(Error::Parse { line: 1, .. })));
        let dup = "FST v1\nstates 1\ninitial 0\ntrans 0 0 0 0\ntrans 0 0 0 1\n";
        assert!(matches!(Fst::from_text(dup), Err(Error::Parse { line: 5, .. })));
        let bad = "FST v1\nstates 1\ninitial 0\ntrans 0 2 0 0\n";
        assert!(matches!(Fst::from_text(bad), Err(Error::Parse { line: 4, .. })));
        let range = "FST v1\nstates 1\ninitial 1\n";
        assert!(matches!(Fst::from_text(range), Err(Error::Parse { line: 3, .. })));
        let out = "FST v1\nstates 1\ninitial 0\ntrans 0 0 0 0x\n";
        assert!(matches!(Fst::from_text(out), Err(Error::Parse { line: 4, .. })));
    }
}

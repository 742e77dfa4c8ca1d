//! Line-oriented text format for devices and executions.
//!
//! ```text
//! @type crc
//! @inputs X
//! @output Y
//! @rxn 2 X -> Y
//! @rxn Z -> Y
//! @rxn Z ->
//! ```
//!
//! Directives: `@type crn|crd|crc`, `@species` (optional, fixes species
//! ids), `@inputs`, `@context S:k …`, `@yes`, `@no`, `@output Y` or
//! `@output YP - YC`, `@invariant linear [NAME] S:w …`,
//! `@invariant mod m [NAME] S:w …`, `@quantity NAME floor S:w …`,
//! `@oracle …` and `@rxn`. A `#` at the start of a line or after
//! whitespace begins a comment.
//!
//! Executions are written as `@start S:k …` followed by `@steps` lines of
//! `<reaction><F|R>` tokens, with reactions numbered from 1.

use std::fmt::Write as _;

use num_rational::Ratio;

use crate::construct::{AffineSpec, ModSpec, Oracle, PredicateSpec, SemilinearSpec, ThresholdSpec};
use crate::crn::{Count, Crn, CrnBuilder, Direction, Multiset, Reaction, SpeciesId, Step};
use crate::device::{Device, OutputSpec, Quantity};
use crate::error::{Error, Result};
use crate::invariant::{Invariant, LinearInvariant, NamedInvariant};
use crate::reach::Execution;

type Side = Vec<(String, Count)>;

fn strip_comment(line: &str) -> &str {
    let mut prev_ws = true;
    for (i, ch) in line.char_indices() {
        if ch == '#' && prev_ws {
            return &line[..i];
        }
        prev_ws = ch.is_whitespace();
    }
    line
}

fn valid_species(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && name.chars().all(|c| !c.is_whitespace() && !matches!(c, ':' | ',' | '+' | '='))
}

fn species_name(tok: &str) -> std::result::Result<String, String> {
    if valid_species(tok) {
        Ok(tok.to_string())
    } else {
        Err(format!("invalid species name `{tok}`"))
    }
}

fn parse_side(text: &str) -> std::result::Result<Side, String> {
    let text = text.trim();
    if text.is_empty() || text == "∅" {
        return Ok(Vec::new());
    }
    text.split('+')
        .map(|term| {
            let toks: Vec<&str> = term.split_whitespace().collect();
            match toks.as_slice() {
                [s] => {
                    let digits = s.chars().take_while(|c| c.is_ascii_digit()).count();
                    if digits == 0 {
                        Ok((species_name(s)?, 1))
                    } else {
                        let k = s[..digits].parse().map_err(|e| format!("bad coefficient in `{s}`: {e}"))?;
                        Ok((species_name(&s[digits..])?, k))
                    }
                }
                [k, s] => {
                    let k: Count = k.parse().map_err(|e| format!("bad coefficient `{k}`: {e}"))?;
                    Ok((species_name(s)?, k))
                }
                _ => Err(format!("malformed term `{}`", term.trim())),
            }
        })
        .collect()
}

/// Splits `2 X + Y -> Z` into its two sides; an empty side (or `∅`) is the
/// empty multiset.
pub fn parse_reaction_sides(line: &str) -> std::result::Result<(Side, Side), String> {
    let (lhs, rhs) = line
        .split_once("->")
        .ok_or_else(|| format!("expected `->` in reaction `{}`", line.trim()))?;
    Ok((parse_side(lhs)?, parse_side(rhs)?))
}

fn parse_terms(toks: &[&str]) -> std::result::Result<Vec<(String, i64)>, String> {
    toks.iter()
        .map(|t| {
            let (s, w) = t.split_once(':').ok_or_else(|| format!("expected S:w, got `{t}`"))?;
            let w = w.parse().map_err(|e| format!("bad weight in `{t}`: {e}"))?;
            Ok((species_name(s)?, w))
        })
        .collect()
}

fn parse_int_list(tok: &str) -> std::result::Result<Vec<i64>, String> {
    if tok == "()" {
        return Ok(Vec::new());
    }
    tok.split(',')
        .map(|v| v.parse().map_err(|e| format!("bad integer `{v}`: {e}")))
        .collect()
}

fn parse_ratio_list(tok: &str) -> std::result::Result<Vec<Ratio<i64>>, String> {
    if tok == "()" {
        return Ok(Vec::new());
    }
    tok.split(',')
        .map(|v| {
            let r = match v.split_once('/') {
                Some((n, d)) => {
                    let n: i64 = n.parse().map_err(|e| format!("bad rational `{v}`: {e}"))?;
                    let d: i64 = d.parse().map_err(|e| format!("bad rational `{v}`: {e}"))?;
                    if d == 0 {
                        return Err(format!("zero denominator in `{v}`"));
                    }
                    Ratio::new(n, d)
                }
                None => Ratio::from_integer(v.parse().map_err(|e| format!("bad rational `{v}`: {e}"))?),
            };
            Ok(r)
        })
        .collect()
}

fn int_list(v: &[i64]) -> String {
    if v.is_empty() {
        return "()".into();
    }
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn ratio_list(v: &[Ratio<i64>]) -> String {
    if v.is_empty() {
        return "()".into();
    }
    v.iter().map(Ratio::to_string).collect::<Vec<_>>().join(",")
}

struct Tokens<'a> {
    toks: Vec<&'a str>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn next(&mut self) -> std::result::Result<&'a str, String> {
        let t = self.toks.get(self.pos).ok_or("unexpected end of oracle")?;
        self.pos += 1;
        Ok(t)
    }

    fn int(&mut self) -> std::result::Result<i64, String> {
        let t = self.next()?;
        t.parse().map_err(|e| format!("bad integer `{t}`: {e}"))
    }
}

fn parse_predicate(t: &mut Tokens) -> std::result::Result<PredicateSpec, String> {
    match t.next()? {
        "mod" => {
            let w = parse_int_list(t.next()?)?;
            let c = t.int()?;
            let m = t.int()?;
            Ok(PredicateSpec::Mod(ModSpec::new(w, c, m).map_err(|e| e.to_string())?))
        }
        "threshold" => {
            let w = parse_int_list(t.next()?)?;
            Ok(PredicateSpec::Threshold(ThresholdSpec::new(w, t.int()?)))
        }
        "not" => Ok(PredicateSpec::not(parse_predicate(t)?)),
        "and" => Ok(PredicateSpec::and(parse_predicate(t)?, parse_predicate(t)?)),
        "or" => Ok(PredicateSpec::or(parse_predicate(t)?, parse_predicate(t)?)),
        other => Err(format!("unknown predicate `{other}`")),
    }
}

fn parse_affine_args(t: &mut Tokens) -> std::result::Result<AffineSpec, String> {
    let a = parse_ratio_list(t.next()?)?;
    let c = parse_int_list(t.next()?)?;
    let b = t.int()?;
    AffineSpec::new(a, c, b).map_err(|e| e.to_string())
}

/// Parses an oracle in prefix form, e.g. `and mod 1 0 2 threshold 1 2` or
/// `semilinear 2 1/2 0 0 mod 1 0 2 1/2 1 0 mod 1 1 2`.
pub fn parse_oracle(text: &str) -> std::result::Result<Oracle, String> {
    let mut t = Tokens {
        toks: text.split_whitespace().collect(),
        pos: 0,
    };
    let oracle = match t.toks.first().copied() {
        Some("affine") => {
            t.next()?;
            Oracle::Affine(parse_affine_args(&mut t)?)
        }
        Some("semilinear") => {
            t.next()?;
            let n = t.int()?;
            let mut pieces = Vec::new();
            for _ in 0..n {
                let f = parse_affine_args(&mut t)?;
                pieces.push((f, parse_predicate(&mut t)?));
            }
            Oracle::Semilinear(SemilinearSpec::new(pieces).map_err(|e| e.to_string())?)
        }
        _ => Oracle::Predicate(parse_predicate(&mut t)?),
    };
    if t.pos != t.toks.len() {
        return Err(format!("trailing tokens after oracle: `{}`", t.toks[t.pos..].join(" ")));
    }
    Ok(oracle)
}

pub fn format_predicate(p: &PredicateSpec) -> String {
    match p {
        PredicateSpec::Mod(m) => format!("mod {} {} {}", int_list(&m.weights), m.residue(), m.modulus()),
        PredicateSpec::Threshold(t) => format!("threshold {} {}", int_list(&t.weights), t.threshold),
        PredicateSpec::Not(p) => format!("not {}", format_predicate(p)),
        PredicateSpec::And(a, b) => format!("and {} {}", format_predicate(a), format_predicate(b)),
        PredicateSpec::Or(a, b) => format!("or {} {}", format_predicate(a), format_predicate(b)),
    }
}

fn affine_args(f: &AffineSpec) -> String {
    format!("{} {} {}", ratio_list(&f.coefficients), int_list(&f.offsets), f.constant)
}

pub fn format_oracle(o: &Oracle) -> String {
    match o {
        Oracle::Predicate(p) => format_predicate(p),
        Oracle::Affine(f) => format!("affine {}", affine_args(f)),
        Oracle::Semilinear(s) => {
            let mut out = format!("semilinear {}", s.pieces.len());
            for (f, dom) in &s.pieces {
                write!(out, " {} {}", affine_args(f), format_predicate(dom)).unwrap();
            }
            out
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Crn,
    Crd,
    Crc,
}

struct Parser {
    builder: CrnBuilder,
    fixed_species: bool,
}

impl Parser {
    fn id(&mut self, name: &str, line: usize) -> Result<SpeciesId> {
        let name = species_name(name).map_err(|m| Error::parse(line, m))?;
        if self.fixed_species {
            self.builder
                .species_id(&name)
                .ok_or_else(|| Error::parse(line, format!("species `{name}` is not declared in @species")))
        } else {
            Ok(self.builder.species(&name))
        }
    }

    fn ids(&mut self, names: &[&str], line: usize) -> Result<Vec<SpeciesId>> {
        names.iter().map(|n| self.id(n, line)).collect()
    }

    fn weights(&mut self, toks: &[&str], line: usize) -> Result<Vec<(SpeciesId, i64)>> {
        let terms = parse_terms(toks).map_err(|m| Error::parse(line, m))?;
        terms.into_iter().map(|(s, w)| Ok((self.id(&s, line)?, w))).collect()
    }
}

fn dense(terms: &[(SpeciesId, i64)], n: usize) -> Vec<i64> {
    let mut w = vec![0; n];
    for &(s, k) in terms {
        w[s] += k;
    }
    w
}

/// Parses and validates a device file.
pub fn parse_device(text: &str) -> Result<Device> {
    let mut kind = None;
    let mut p = Parser {
        builder: Crn::builder(),
        fixed_species: false,
    };
    let mut inputs = None;
    let mut context: Multiset = Vec::new();
    let (mut yes, mut no) = (None, None);
    let mut output = None;
    let mut invariants = Vec::new();
    let mut quantities = Vec::new();
    let mut oracle = None;

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (directive, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let toks: Vec<&str> = rest.split_whitespace().collect();
        match directive {
            "@type" => {
                kind = Some(match rest {
                    "crn" => Kind::Crn,
                    "crd" => Kind::Crd,
                    "crc" => Kind::Crc,
                    other => return Err(Error::parse(ln, format!("unknown device type `{other}`"))),
                });
            }
            "@species" => {
                if p.builder.num_species() > 0 {
                    return Err(Error::parse(ln, "@species must precede every other use of a species"));
                }
                for t in &toks {
                    let name = species_name(t).map_err(|m| Error::parse(ln, m))?;
                    if p.builder.species_id(&name).is_some() {
                        return Err(Error::parse(ln, format!("species `{name}` declared twice")));
                    }
                    p.builder.species(&name);
                }
                p.fixed_species = true;
            }
            "@inputs" => inputs = Some(p.ids(&toks, ln)?),
            "@context" => {
                for (s, k) in p.weights(&toks, ln)? {
                    let k = Count::try_from(k).map_err(|_| Error::parse(ln, "context counts must be nonnegative"))?;
                    if k > 0 {
                        context.push((s, k));
                    }
                }
            }
            "@yes" => yes = Some(p.ids(&toks, ln)?),
            "@no" => no = Some(p.ids(&toks, ln)?),
            "@output" => {
                output = Some(match toks.as_slice() {
                    [y] => OutputSpec::Count(p.id(y, ln)?),
                    [pos, "-", neg] => OutputSpec::Difference {
                        pos: p.id(pos, ln)?,
                        neg: p.id(neg, ln)?,
                    },
                    _ => return Err(Error::parse(ln, "expected `@output Y` or `@output YP - YC`")),
                })
            }
            "@invariant" => {
                let (modulus, body) = match toks.as_slice() {
                    ["linear", body @ ..] => (None, body),
                    ["mod", m, body @ ..] => {
                        let m: i64 = m.parse().map_err(|e| Error::parse(ln, format!("bad modulus `{m}`: {e}")))?;
                        (Some(m), body)
                    }
                    _ => return Err(Error::parse(ln, "expected `@invariant linear …` or `@invariant mod m …`")),
                };
                let (name, body) = match body {
                    [n, rest @ ..] if !n.contains(':') => (Some(n.to_string()), rest),
                    _ => (None, body),
                };
                let terms = p.weights(body, ln)?;
                invariants.push((name, modulus, terms, ln));
            }
            "@quantity" => {
                let [name, floor, body @ ..] = toks.as_slice() else {
                    return Err(Error::parse(ln, "expected `@quantity NAME floor S:w …`"));
                };
                let floor: i64 = floor.parse().map_err(|e| Error::parse(ln, format!("bad floor `{floor}`: {e}")))?;
                let terms = p.weights(body, ln)?;
                quantities.push((name.to_string(), floor, terms));
            }
            "@oracle" => oracle = Some(parse_oracle(rest).map_err(|m| Error::parse(ln, m))?),
            "@rxn" => {
                let (a, b) = parse_reaction_sides(rest).map_err(|m| Error::parse(ln, m))?;
                let mut side = |terms: Side| -> Result<Multiset> {
                    terms.into_iter().map(|(s, k)| Ok((p.id(&s, ln)?, k))).collect()
                };
                let (a, b) = (side(a)?, side(b)?);
                p.builder.push(Reaction::new(a, b));
            }
            other => return Err(Error::parse(ln, format!("unknown directive `{other}`"))),
        }
    }

    let kind = kind.ok_or_else(|| Error::parse(1, "missing @type line"))?;
    let output = match kind {
        Kind::Crn => {
            if yes.is_some() || no.is_some() || output.is_some() {
                return Err(Error::parse(1, "a plain crn takes no @yes, @no or @output"));
            }
            OutputSpec::None
        }
        Kind::Crd => {
            if output.is_some() {
                return Err(Error::parse(1, "a crd takes @yes/@no, not @output"));
            }
            OutputSpec::Vote {
                yes: yes.unwrap_or_default(),
                no: no.unwrap_or_default(),
            }
        }
        Kind::Crc => {
            if yes.is_some() || no.is_some() {
                return Err(Error::parse(1, "a crc takes @output, not @yes/@no"));
            }
            output.ok_or_else(|| Error::parse(1, "a crc needs an @output line"))?
        }
    };

    let crn = p.builder.build();
    let n = crn.num_species();
    let mut dev = Device::new(crn, inputs.unwrap_or_default(), context, output)?;
    for (name, modulus, terms, ln) in invariants {
        let w = dense(&terms, n);
        let invariant = match modulus {
            None => Invariant::linear(w),
            Some(m) => Invariant::modular(w, m).map_err(|e| Error::parse(ln, e.to_string()))?,
        };
        dev.invariants.push(NamedInvariant { name, invariant });
    }
    dev.quantities = quantities
        .into_iter()
        .map(|(name, floor, terms)| Quantity {
            name,
            form: LinearInvariant::new(dense(&terms, n)),
            floor,
        })
        .collect();
    dev.oracle = oracle;
    Ok(dev)
}

fn terms_text(crn: &Crn, w: &[i64]) -> String {
    w.iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(s, k)| format!(" {}:{k}", crn.species_name(s)))
        .collect()
}

fn names(crn: &Crn, ids: &[SpeciesId]) -> String {
    ids.iter().map(|&s| format!(" {}", crn.species_name(s))).collect()
}

fn side_text(crn: &Crn, terms: &[(SpeciesId, Count)]) -> String {
    terms
        .iter()
        .map(|&(s, k)| {
            if k == 1 {
                crn.species_name(s).to_string()
            } else {
                format!("{k} {}", crn.species_name(s))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Canonical text of a device.
pub fn serialize_device(dev: &Device) -> String {
    let crn = &dev.crn;
    let mut out = String::new();
    let kind = match dev.output {
        OutputSpec::None => "crn",
        OutputSpec::Vote { .. } => "crd",
        OutputSpec::Count(_) | OutputSpec::Difference { .. } => "crc",
    };
    writeln!(out, "@type {kind}").unwrap();
    let all: Vec<SpeciesId> = (0..crn.num_species()).collect();
    writeln!(out, "@species{}", names(crn, &all)).unwrap();
    writeln!(out, "@inputs{}", names(crn, &dev.inputs)).unwrap();
    if !dev.context.is_empty() {
        let terms: String = dev
            .context
            .iter()
            .map(|&(s, k)| format!(" {}:{k}", crn.species_name(s)))
            .collect();
        writeln!(out, "@context{terms}").unwrap();
    }
    match &dev.output {
        OutputSpec::None => {}
        OutputSpec::Vote { yes, no } => {
            writeln!(out, "@yes{}", names(crn, yes)).unwrap();
            writeln!(out, "@no{}", names(crn, no)).unwrap();
        }
        OutputSpec::Count(y) => writeln!(out, "@output {}", crn.species_name(*y)).unwrap(),
        OutputSpec::Difference { pos, neg } => {
            writeln!(out, "@output {} - {}", crn.species_name(*pos), crn.species_name(*neg)).unwrap()
        }
    }
    for inv in &dev.invariants {
        let head = match inv.invariant.modulus() {
            None => "linear".to_string(),
            Some(m) => format!("mod {m}"),
        };
        let name = inv.name.as_ref().map(|n| format!(" {n}")).unwrap_or_default();
        writeln!(out, "@invariant {head}{name}{}", terms_text(crn, inv.invariant.weights())).unwrap();
    }
    for q in &dev.quantities {
        writeln!(out, "@quantity {} {}{}", q.name, q.floor, terms_text(crn, &q.form.weights)).unwrap();
    }
    if let Some(o) = &dev.oracle {
        writeln!(out, "@oracle {}", format_oracle(o)).unwrap();
    }
    for rxn in crn.reactions() {
        let a = side_text(crn, rxn.reactants());
        let p = side_text(crn, rxn.products());
        if p.is_empty() {
            writeln!(out, "@rxn {a} ->").unwrap();
        } else {
            writeln!(out, "@rxn {a} -> {p}").unwrap();
        }
    }
    out
}

/// `S:k` terms over a CRN's species.
pub fn parse_configuration_terms(crn: &Crn, toks: &[&str]) -> Result<crate::crn::Configuration> {
    let terms = parse_terms(toks).map_err(|m| Error::parse(1, m))?;
    let mut c = crn.zero();
    for (s, k) in terms {
        let id = crn.require_species(&s)?;
        let k = Count::try_from(k).map_err(|_| Error::parse(1, format!("negative count for `{s}`")))?;
        c.set(id, c.get(id) + k);
    }
    Ok(c)
}

fn parse_step(tok: &str, num_reactions: usize) -> std::result::Result<Step, String> {
    let (idx, dir) = tok.split_at(tok.len().saturating_sub(1));
    let direction = match dir {
        "F" | "f" => Direction::Forward,
        "R" | "r" => Direction::Reverse,
        _ => return Err(format!("step `{tok}` must end in F or R")),
    };
    let r: usize = idx.parse().map_err(|e| format!("bad reaction number in `{tok}`: {e}"))?;
    if r == 0 || r > num_reactions {
        return Err(format!("reaction number {r} out of range 1..={num_reactions}"));
    }
    Ok(Step {
        reaction: r - 1,
        direction,
    })
}

/// Parses `@start` / `@steps` lines against a CRN.
pub fn parse_execution(crn: &Crn, text: &str) -> Result<Execution> {
    let mut start = None;
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (directive, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let toks: Vec<&str> = rest.split_whitespace().collect();
        match directive {
            "@start" => {
                start = Some(parse_configuration_terms(crn, &toks).map_err(|e| match e {
                    Error::Parse { message, .. } => Error::parse(ln, message),
                    other => other,
                })?)
            }
            "@steps" => {
                for t in toks {
                    steps.push(parse_step(t, crn.reactions().len()).map_err(|m| Error::parse(ln, m))?);
                }
            }
            other => return Err(Error::parse(ln, format!("unknown directive `{other}`"))),
        }
    }
    let start = start.ok_or_else(|| Error::parse(1, "missing @start line"))?;
    Ok(Execution::new(start, steps))
}

pub fn format_step(s: Step) -> String {
    let d = match s.direction {
        Direction::Forward => 'F',
        Direction::Reverse => 'R',
    };
    format!("{}{d}", s.reaction + 1)
}

pub fn format_execution(crn: &Crn, exec: &Execution) -> String {
    let start: String = exec
        .start
        .support()
        .into_iter()
        .map(|(s, k)| format!(" {}:{k}", crn.species_name(s)))
        .collect();
    let steps: String = exec.steps.iter().map(|&s| format!(" {}", format_step(s))).collect();
    format!("@start{start}\n@steps{steps}\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{compile_mod, compile_threshold};

    const TRAP: &str = "@type crc\n@inputs X\n@output Y\n@rxn 2 X -> Y\n@rxn Z -> Y\n@rxn Z ->\n";

    #[test]
    fn parse_trap() {
        let d = parse_device(TRAP).unwrap();
        assert_eq!(d.crn.reactions().len(), 3);
        assert_eq!(d.crn.format_reaction(2), "Z -> ∅");
        assert!(matches!(d.output, OutputSpec::Count(_)));
    }

    #[test]
    fn comments_and_hash_names() {
        let text = "# header\n@type crn # trailing\n@inputs X#1\n@rxn X#1 -> 2Y\n";
        let d = parse_device(text).unwrap();
        assert_eq!(d.crn.species_name(0), "X#1");
        assert_eq!(d.crn.format_reaction(0), "X#1 -> 2 Y");
    }

    #[test]
    fn validation_errors() {
        let overlap = "@type crd\n@inputs X\n@yes Y0\n@no Y0\n@rxn X -> Y0\n";
        assert!(matches!(parse_device(overlap), Err(Error::Validation(_))));
        let empty = "@type crn\n@rxn -> A\n";
        assert!(matches!(parse_device(empty), Err(Error::Validation(_))));
        let bad = "@type crn\n@rxn X => A\n";
        assert!(matches!(parse_device(bad), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn canonical_round_trip() {
        let dev = compile_mod(&ModSpec::new(vec![1], 0, 2).unwrap()).unwrap();
        let once = serialize_device(&dev);
        let parsed = parse_device(&once).unwrap();
        assert_eq!(parsed, dev);
        assert_eq!(serialize_device(&parsed), once);
        assert!(!once.contains("@context"));

        let t = compile_threshold(&ThresholdSpec::new(vec![1, -1], 0)).unwrap();
        let text = serialize_device(&t);
        assert!(text.contains("@invariant linear I_T X1:1 X2:-1"));
        assert_eq!(parse_device(&text).unwrap(), t);
    }

    #[test]
    fn oracle_round_trip() {
        for text in [
            "mod 1,2 1 3",
            "or not threshold 1,-1 0 and mod 1,1 0 2 threshold 2,0 3",
            "affine 1/2,-3 1,0 2",
            "semilinear 2 1/2 0 0 mod 1 0 2 1/2 1 0 mod 1 1 2",
        ] {
            assert_eq!(format_oracle(&parse_oracle(text).unwrap()), text);
        }
        assert!(parse_oracle("mod 1 0").is_err());
        assert!(parse_oracle("mod 1 0 2 extra").is_err());
    }

    #[test]
    fn execution_round_trip() {
        let d = parse_device(TRAP).unwrap();
        let exec = parse_execution(&d.crn, "@start X:2\n@steps 1F 2R\n@steps 3F\n").unwrap();
        assert_eq!(exec.steps, vec![Step::forward(0), Step::reverse(1), Step::forward(2)]);
        let text = format_execution(&d.crn, &exec);
        assert_eq!(text, "@start X:2\n@steps 1F 2R 3F\n");
        assert_eq!(parse_execution(&d.crn, &text).unwrap(), exec);
        assert!(parse_execution(&d.crn, "@start X:2\n@steps 4F\n").is_err());
    }
}

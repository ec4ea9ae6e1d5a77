//! The line-oriented instance format.
//!
//! ```text
//! # comments start with '#'
//! name   = cci1
//! vars   = [x, y, z]
//! char   = 32003
//! ideal I = [x, y]
//! module M  = R
//! module Q  = R/I                 # quotient by a named ideal
//! module Q2 = R/(x^2, y)          # or by listed generators
//! module K1 = k shift [1]         # generator degrees raised by [1]
//! module P  = coker [[x, -y], [0, x]] gens [[0,0,0], [1,0,0]]
//! module S  = Q + K1              # direct sum
//! map f  = K1 -> M [[x]]
//! nlist L = [R, Q]
//! window = -4:4
//! smax   = 8
//! tmax   = 8
//! ses    = f
//! ```
//!
//! Relation matrices list one row per generator and one column per
//! relation; `0` marks an empty entry. Without `gens`, every generator sits
//! in degree zero. Names must be unique within their kind.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ideal::MonomialIdeal;
use crate::module::{FreeModule, ModuleMap, ModulePresentation, TermMatrix};
use crate::ring::{Multidegree, RingSpec, Term};
use crate::window::Window;

#[derive(Clone, Debug)]
pub struct Instance<F> {
    pub name: String,
    pub ring: RingSpec,
    pub ideals: BTreeMap<String, MonomialIdeal>,
    pub modules: BTreeMap<String, ModulePresentation<F>>,
    pub maps: BTreeMap<String, ModuleMap<F>>,
    pub nlists: BTreeMap<String, Vec<String>>,
    pub window: Option<String>,
    pub s_max: Option<usize>,
    pub t_max: Option<usize>,
    pub ses: Option<String>,
}

/// A bracketed value: an atom or a list of values.
#[derive(Clone, Debug, PartialEq)]
enum Item {
    Atom(String),
    List(Vec<Item>),
}

struct Line<'a> {
    number: usize,
    key: &'a str,
    value: &'a str,
    /// One-based column where `value` starts.
    column: usize,
}

impl Line<'_> {
    fn err(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.number,
            column: self.column + offset,
            message: message.into(),
        }
    }

    fn wrap(&self, e: Error) -> Error {
        match e {
            Error::Parse { .. } => e,
            other => self.err(0, other.to_string()),
        }
    }
}

fn lines(text: &str) -> Result<Vec<Line<'_>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let eq = content.find('=').ok_or(Error::Parse {
            line: i + 1,
            column: content.len() - content.trim_start().len() + 1,
            message: "expected `key = value`".into(),
        })?;
        let key = content[..eq].trim();
        let after = &content[eq + 1..];
        let lead = after.len() - after.trim_start().len();
        out.push(Line {
            number: i + 1,
            key,
            value: after.trim(),
            column: eq + 2 + lead,
        });
    }
    Ok(out)
}

/// Parses one bracketed value starting at `s`; returns the item and the
/// number of bytes consumed.
fn parse_item(s: &str, line: &Line<'_>, base: usize) -> Result<(Item, usize)> {
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() && bytes[i] == b' ' {
        i += 1;
    }
    if i < bytes.len() && bytes[i] == b'[' {
        let mut items = Vec::new();
        i += 1;
        loop {
            while i < bytes.len() && bytes[i] == b' ' {
                i += 1;
            }
            if i >= bytes.len() {
                return Err(line.err(base + i, "unclosed `[`"));
            }
            if bytes[i] == b']' {
                return Ok((Item::List(items), i + 1));
            }
            let (it, used) = parse_item(&s[i..], line, base + i)?;
            items.push(it);
            i += used;
            while i < bytes.len() && bytes[i] == b' ' {
                i += 1;
            }
            match bytes.get(i) {
                Some(b',') => i += 1,
                Some(b']') => {}
                _ => return Err(line.err(base + i, "expected `,` or `]`")),
            }
        }
    }
    let start = i;
    let mut depth = 0i32;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b',' | b']' if depth == 0 => break,
            _ => {}
        }
        i += 1;
    }
    let atom = s[start..i].trim();
    if atom.is_empty() {
        return Err(line.err(base + start, "empty entry"));
    }
    Ok((Item::Atom(atom.to_string()), i))
}

fn parse_value(s: &str, line: &Line<'_>, base: usize) -> Result<Item> {
    let (it, used) = parse_item(s, line, base)?;
    if !s[used..].trim().is_empty() {
        return Err(line.err(base + used, "unexpected trailing input"));
    }
    Ok(it)
}

fn atoms(it: &Item, line: &Line<'_>) -> Result<Vec<String>> {
    match it {
        Item::List(xs) => xs
            .iter()
            .map(|x| match x {
                Item::Atom(a) => Ok(a.clone()),
                Item::List(_) => Err(line.err(0, "expected a flat list")),
            })
            .collect(),
        Item::Atom(a) => Ok(vec![a.clone()]),
    }
}

fn grid(it: &Item, line: &Line<'_>) -> Result<Vec<Vec<String>>> {
    match it {
        Item::List(rows) => rows.iter().map(|r| atoms(r, line)).collect(),
        Item::Atom(_) => Err(line.err(0, "expected a list of rows")),
    }
}

/// Reads `vars` and `char` only, so callers can pick the field first.
pub fn read_ring(text: &str) -> Result<RingSpec> {
    let mut vars = None;
    let mut ch = 32003u64;
    for l in lines(text)? {
        match l.key {
            "vars" => {
                let it = parse_value(l.value, &l, 0)?;
                vars = Some(atoms(&it, &l)?);
            }
            "char" => ch = l.value.parse().map_err(|_| l.err(0, "characteristic must be an integer"))?,
            _ => {}
        }
    }
    let vars = vars.ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: "missing `vars = [...]`".into(),
    })?;
    RingSpec::new(&vars, ch)
}

fn insert_unique<T>(map: &mut BTreeMap<String, T>, name: &str, v: T, line: &Line<'_>) -> Result<()> {
    if map.insert(name.to_string(), v).is_some() {
        return Err(line.err(0, format!("duplicate name `{name}`")));
    }
    Ok(())
}

impl<F: Field> Instance<F> {
    pub fn parse(text: &str) -> Result<Self> {
        let ring = read_ring(text)?;
        if ring.characteristic != F::characteristic() {
            return Err(Error::InvalidInput(format!(
                "instance characteristic {} does not match the field in use ({})",
                ring.characteristic,
                F::characteristic()
            )));
        }
        let mut inst = Instance {
            name: String::new(),
            ring,
            ideals: BTreeMap::new(),
            modules: BTreeMap::new(),
            maps: BTreeMap::new(),
            nlists: BTreeMap::new(),
            window: None,
            s_max: None,
            t_max: None,
            ses: None,
        };
        for l in lines(text)? {
            let mut words = l.key.split_whitespace();
            let kind = words.next().unwrap_or("");
            let name = words.next();
            if words.next().is_some() {
                return Err(l.err(0, format!("malformed key `{}`", l.key)));
            }
            match (kind, name) {
                ("vars" | "char", None) => {}
                ("name", None) => inst.name = l.value.to_string(),
                ("window", None) => {
                    Window::parse(l.value, inst.ring.nvars()).map_err(|e| l.wrap(e))?;
                    inst.window = Some(l.value.to_string());
                }
                ("smax", None) => inst.s_max = Some(l.value.parse().map_err(|_| l.err(0, "smax must be a count"))?),
                ("tmax", None) => inst.t_max = Some(l.value.parse().map_err(|_| l.err(0, "tmax must be a count"))?),
                ("ses", None) => inst.ses = Some(l.value.to_string()),
                ("ideal", Some(n)) => {
                    let it = parse_value(l.value, &l, 0)?;
                    let gens = atoms(&it, &l)?;
                    let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
                    let ideal = MonomialIdeal::parse(&inst.ring, &refs).map_err(|e| l.wrap(e))?;
                    insert_unique(&mut inst.ideals, n, ideal, &l)?;
                }
                ("module", Some(n)) => {
                    let m = inst.parse_module(l.value, &l)?;
                    insert_unique(&mut inst.modules, n, m, &l)?;
                }
                ("map", Some(n)) => {
                    let m = inst.parse_map(&l)?;
                    insert_unique(&mut inst.maps, n, m, &l)?;
                }
                ("nlist", Some(n)) => {
                    let it = parse_value(l.value, &l, 0)?;
                    let names = atoms(&it, &l)?;
                    for x in &names {
                        inst.module(x).map_err(|e| l.wrap(e))?;
                    }
                    insert_unique(&mut inst.nlists, n, names, &l)?;
                }
                _ => return Err(l.err(0, format!("unknown key `{}`", l.key))),
            }
        }
        if let Some(s) = &inst.ses {
            if !inst.maps.contains_key(s) {
                return Err(Error::UnknownName(s.clone()));
            }
        }
        Ok(inst)
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn ideal(&self, name: &str) -> Result<&MonomialIdeal> {
        self.ideals.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    /// A named module, or one of the shorthands `R` and `k`.
    pub fn module(&self, name: &str) -> Result<ModulePresentation<F>> {
        match name {
            _ if self.modules.contains_key(name) => Ok(self.modules[name].clone()),
            "R" => Ok(ModulePresentation::ring(self.nvars())),
            "k" => Ok(ModulePresentation::residue_field(self.nvars())),
            _ => Err(Error::UnknownName(name.to_string())),
        }
    }

    pub fn map(&self, name: &str) -> Result<&ModuleMap<F>> {
        self.maps.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    /// Modules of a named list with their labels.
    pub fn nlist(&self, name: &str) -> Result<Vec<(String, ModulePresentation<F>)>> {
        let names = self.nlists.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
        names.iter().map(|n| Ok((n.clone(), self.module(n)?))).collect()
    }

    pub fn window(&self, spec: Option<&str>) -> Result<Window> {
        let s = spec.or(self.window.as_deref()).unwrap_or("-4:4");
        Window::parse(s, self.nvars())
    }

    fn parse_module(&self, value: &str, l: &Line<'_>) -> Result<ModulePresentation<F>> {
        let parts = value.split(" + ").peekable();
        let mut acc: Option<ModulePresentation<F>> = None;
        let mut offset = 0;
        for p in parts {
            let m = self.parse_summand(p.trim(), l, offset)?;
            acc = Some(match acc {
                None => m,
                Some(a) => a.direct_sum(&m),
            });
            offset += p.len() + 3;
        }
        acc.ok_or_else(|| l.err(0, "empty module"))
    }

    fn parse_summand(&self, s: &str, l: &Line<'_>, base: usize) -> Result<ModulePresentation<F>> {
        let (body, shift) = match s.find(" shift ") {
            Some(k) => {
                let it = parse_value(&s[k + 7..], l, base + k + 7)?;
                let d: Vec<i64> = atoms(&it, l)?
                    .iter()
                    .map(|x| x.parse().map_err(|_| l.err(base + k + 7, format!("bad shift entry `{x}`"))))
                    .collect::<Result<_>>()?;
                if d.len() != self.nvars() {
                    return Err(l.err(base + k + 7, "shift needs one entry per variable"));
                }
                (&s[..k], Some(Multidegree(d)))
            }
            None => (s, None),
        };
        let body = body.trim();
        let m = if let Some(rest) = body.strip_prefix("coker") {
            self.parse_coker(rest, l, base + 5)?
        } else if let Some(q) = body.strip_prefix("R/") {
            let ideal = if q.starts_with('(') && q.ends_with(')') {
                let gens: Vec<&str> = q[1..q.len() - 1].split(',').map(str::trim).collect();
                MonomialIdeal::parse(&self.ring, &gens).map_err(|e| l.wrap(e))?
            } else {
                self.ideal(q).map_err(|e| l.wrap(e))?.clone()
            };
            ModulePresentation::cyclic(&ideal)
        } else {
            self.module(body).map_err(|e| l.wrap(e))?
        };
        Ok(match shift {
            Some(d) => m.shifted(&d),
            None => m,
        })
    }

    fn parse_terms(&self, rows: &[Vec<String>], l: &Line<'_>) -> Result<Vec<Vec<Option<Term<F>>>>> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|e| {
                        if e == "0" {
                            Ok(None)
                        } else {
                            self.ring.parse_term(e).map(Some).map_err(|x| l.wrap(x))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn parse_coker(&self, rest: &str, l: &Line<'_>, base: usize) -> Result<ModulePresentation<F>> {
        let (rels_s, gens_s) = match rest.find(" gens ") {
            Some(k) => (&rest[..k], Some((&rest[k + 6..], k + 6))),
            None => (rest, None),
        };
        let rows = grid(&parse_value(rels_s, l, base)?, l)?;
        let n = self.nvars();
        let degs = match gens_s {
            Some((g, off)) => grid(&parse_value(g, l, base + off)?, l)?
                .iter()
                .map(|r| {
                    let v: Vec<i64> = r
                        .iter()
                        .map(|x| x.parse().map_err(|_| l.err(base + off, format!("bad degree entry `{x}`"))))
                        .collect::<Result<_>>()?;
                    if v.len() != n {
                        return Err(l.err(base + off, "generator degree needs one entry per variable"));
                    }
                    Ok(Multidegree(v))
                })
                .collect::<Result<Vec<_>>>()?,
            None => vec![Multidegree::zero(n); rows.len()],
        };
        if degs.len() != rows.len() {
            return Err(l.err(base, "relation matrix needs one row per generator"));
        }
        let target = FreeModule::new(n, degs).map_err(|e| l.wrap(e))?;
        let entries = self.parse_terms(&rows, l)?;
        let rel = TermMatrix::infer_source(target, &entries).map_err(|e| l.wrap(e))?;
        Ok(ModulePresentation::new(rel))
    }

    fn parse_map(&self, l: &Line<'_>) -> Result<ModuleMap<F>> {
        let v = l.value;
        let arrow = v.find("->").ok_or_else(|| l.err(0, "expected `SRC -> TGT [[...]]`"))?;
        let src_name = v[..arrow].trim();
        let rest = &v[arrow + 2..];
        let br = rest.find('[').ok_or_else(|| l.err(arrow + 2, "missing matrix"))?;
        let tgt_name = rest[..br].trim();
        let src = self.module(src_name).map_err(|e| l.wrap(e))?;
        let tgt = self.module(tgt_name).map_err(|e| l.wrap(e))?;
        let rows = grid(&parse_value(&rest[br..], l, arrow + 2 + br)?, l)?;
        let entries = self.parse_terms(&rows, l)?;
        let mat = TermMatrix::from_terms(src.generators().clone(), tgt.generators().clone(), &entries)
            .map_err(|e| l.wrap(e))?;
        ModuleMap::new(src, tgt, mat).map_err(|e| l.wrap(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    type F = Fp<32003>;

    const EX: &str = "
# sample
name = sample
vars = [x, y]
char = 32003
ideal I = [x, y]
module Q = R/I
module Q2 = R/(x^2, y)
module K1 = k shift [1, 0]
module P = coker [[x, y]]
module S = Q + K1
map f = K1 -> Q2 [[x]]
nlist L = [R, Q, k]
window = -2:2
smax = 6
ses = f
";

    #[test]
    fn parses_sample() {
        let inst = Instance::<F>::parse(EX).unwrap();
        assert_eq!(inst.name, "sample");
        assert_eq!(inst.ideal("I").unwrap().gens().len(), 2);
        assert_eq!(inst.module("Q2").unwrap().strand_dim(&Multidegree(vec![1, 0])), 1);
        assert_eq!(inst.module("K1").unwrap().strand_dim(&Multidegree(vec![1, 0])), 1);
        assert_eq!(inst.module("S").unwrap().generators().rank(), 2);
        assert_eq!(inst.module("P").unwrap().relations().source().rank(), 2);
        assert_eq!(inst.nlist("L").unwrap().len(), 3);
        assert_eq!(inst.window(None).unwrap(), Window::cube(2, -2, 2));
        assert_eq!(inst.s_max, Some(6));
        assert!(inst.map("f").is_ok());
    }

    #[test]
    fn reports_positions() {
        let bad = "vars = [x]\nideal I = [x, z]\n";
        match Instance::<F>::parse(bad) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 11)),
            other => panic!("{other:?}"),
        }
        let bad = "vars = [x]\nmodule M = coker [[x, y]\n";
        match Instance::<F>::parse(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            Instance::<F>::parse("vars = [x]\nfoo = 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Instance::<F>::parse("vars = [x]\nideal I = [x]\nideal I = [x]\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }
}

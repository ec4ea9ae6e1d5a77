use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gclh_core::derived::{
    self, completion_homology, completion_homology_koszul, gen_local_cohomology, gen_local_homology, QuotientTower,
    DEFAULT_STAGES,
};
use gclh_core::graded::{Dual, Graded, Presented};
use gclh_core::instance::{read_ring, Instance};
use gclh_core::limits::LimitSystem;
use gclh_core::module::ModulePresentation;
use gclh_core::natural::MapKind;
use gclh_core::verify::{verify_theorem, Exactness, TheoremId, TheoremInput, Witness};
use gclh_core::window::{HilbertTable, Window};
use gclh_core::{cech, oracle, Error, Field, Fp};

use crate::cache::Cache;
use crate::report::{self, Report, Stabilization, Table, Value, Verdict};
use crate::{resolve_instance, CliError};

#[derive(Debug, Parser)]
#[command(name = "gclh", version, about = "Generalized local (co)homology of finely graded modules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// grade(I, M), the length of a maximal M-regular sequence in I
    Grade(Opts),
    /// Cograde of an Artinian module with respect to N/IN, both ways
    Cograde(Opts),
    /// Local cohomology H^i_I(M) from the Čech complex
    Lc(Opts),
    /// Generalized local cohomology H^i_I(N, M)
    Glc(Opts),
    /// Generalized local homology U_i(N, M)
    Glh(Opts),
    /// Completion homology L_i(N, M), with lim^1 and the Koszul path
    Clh(Opts),
    /// Matlis-duality checks: Ext(N, D M) against Tor(N, M), and H against U
    Dual(Opts),
    /// Check a theorem on an instance
    Verify {
        #[arg(value_parser = parse_theorem)]
        theorem: TheoremId,
        #[command(flatten)]
        opts: Opts,
    },
    /// Compare Ext, Tor and local cohomology with the brute-force oracle
    OracleCheck(Opts),
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// Instance file (a path, a name with implied `.gclh`, or a name under `instances/`)
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value = "I")]
    pub ideal: String,
    #[arg(long, default_value = "M")]
    pub module: String,
    /// The first argument N of the generalized functors
    #[arg(long, default_value = "R")]
    pub nmodule: String,
    /// Extra modules N for `verify` (R, R/I and k are always included);
    /// defaults to the instance's list when it defines exactly one
    #[arg(long)]
    pub nlist: Option<String>,
    /// Homological or cohomological index; all of 0..=n when omitted
    #[arg(long = "i", allow_negative_numbers = true)]
    pub i: Option<i32>,
    /// `lo:hi` for every coordinate, or comma-separated per coordinate
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long)]
    pub smax: Option<usize>,
    #[arg(long)]
    pub tmax: Option<usize>,
    /// Coefficient characteristic; must match the instance when it declares one
    #[arg(long = "char")]
    pub characteristic: Option<u64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    pub format: FormatArg,
    /// Use the Matlis dual D(M) in place of M
    #[arg(long)]
    pub dual: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Table,
    Machine,
}

impl From<FormatArg> for report::Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Table => report::Format::Table,
            FormatArg::Machine => report::Format::Machine,
        }
    }
}

fn parse_theorem(s: &str) -> Result<TheoremId, String> {
    s.parse::<TheoremId>().map_err(|e| e.to_string())
}

impl Command {
    pub fn opts(&self) -> &Opts {
        match self {
            Command::Grade(o)
            | Command::Cograde(o)
            | Command::Lc(o)
            | Command::Glc(o)
            | Command::Glh(o)
            | Command::Clh(o)
            | Command::Dual(o)
            | Command::OracleCheck(o)
            | Command::Verify { opts: o, .. } => o,
        }
    }

    fn opts_mut(&mut self) -> &mut Opts {
        match self {
            Command::Grade(o)
            | Command::Cograde(o)
            | Command::Lc(o)
            | Command::Glc(o)
            | Command::Glh(o)
            | Command::Clh(o)
            | Command::Dual(o)
            | Command::OracleCheck(o)
            | Command::Verify { opts: o, .. } => o,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Grade(_) => "grade",
            Command::Cograde(_) => "cograde",
            Command::Lc(_) => "lc",
            Command::Glc(_) => "glc",
            Command::Glh(_) => "glh",
            Command::Clh(_) => "clh",
            Command::Dual(_) => "dual",
            Command::Verify { .. } => "verify",
            Command::OracleCheck(_) => "oracle-check",
        }
    }

    /// The command with everything that cannot change the result erased.
    fn cache_key_text(&self) -> String {
        let mut c = self.clone();
        let o = c.opts_mut();
        o.format = FormatArg::Table;
        o.instance = PathBuf::new();
        format!("{c:?}")
    }
}

macro_rules! prime_menu {
    ($($p:literal),* $(,)?) => {
        /// Characteristics the binary is built for.
        pub const PRIMES: &[u64] = &[$($p),*];

        fn dispatch(ch: u64, cmd: &Command, text: &str, echo: Vec<String>) -> Result<Report, CliError> {
            match ch {
                $($p => run_in::<Fp<$p>>(cmd, text, echo),)*
                other => Err(Error::InvalidInput(format!(
                    "characteristic {other} is not available; choose one of {PRIMES:?}"
                ))
                .into()),
            }
        }
    };
}

prime_menu!(2, 3, 5, 7, 101, 32003);

pub(crate) fn execute(cmd: &Command, echo: Vec<String>) -> Result<Report, CliError> {
    let o = cmd.opts();
    let path = resolve_instance(&o.instance);
    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io { path: path.clone(), source })?;
    let declared = read_ring(&text)?.characteristic;
    let ch = match o.characteristic {
        Some(c) if text_declares_char(&text) && c != declared => {
            return Err(Error::InvalidInput(format!(
                "--char {c} conflicts with the instance characteristic {declared}"
            ))
            .into())
        }
        Some(c) => c,
        None => declared,
    };
    let text = if text_declares_char(&text) { text } else { format!("{text}\nchar = {ch}\n") };
    let cache = Cache::from_env();
    let key = Cache::key(&cmd.cache_key_text(), &text, ch);
    if let Some(mut r) = cache.as_ref().and_then(|c| c.load(&key)) {
        r.arguments = echo;
        return Ok(r);
    }
    let report = dispatch(ch, cmd, &text, echo)?;
    if let Some(c) = &cache {
        c.store(&key, &report);
    }
    Ok(report)
}

fn text_declares_char(text: &str) -> bool {
    text.lines()
        .any(|l| l.split('#').next().unwrap_or("").split('=').next().map(str::trim) == Some("char"))
}

/// Shared inputs resolved from the instance and flags.
struct Ctx<F: Field> {
    inst: Instance<F>,
    window: Window,
    s_max: usize,
}

impl<F: Field> Ctx<F> {
    fn indices(&self, o: &Opts) -> Vec<i32> {
        match o.i {
            Some(i) => vec![i],
            None => (0..=self.inst.nvars() as i32).collect(),
        }
    }

    fn module(&self, o: &Opts) -> Result<ModulePresentation<F>, Error> {
        self.inst.module(&o.module)
    }

    /// `M` or `D(M)`, with its display name.
    fn target(&self, o: &Opts) -> Result<(Graded<F>, String), Error> {
        let m = Presented::shared(self.module(o)?);
        Ok(if o.dual {
            (Dual::shared(m), format!("D({})", o.module))
        } else {
            (m, o.module.clone())
        })
    }

    fn tower(&self, o: &Opts) -> Result<QuotientTower<F>, Error> {
        QuotientTower::new(&self.inst.module(&o.nmodule)?, self.inst.ideal(&o.ideal)?, self.s_max)
    }
}

fn stabilization<F>(sys: &LimitSystem<F>) -> Stabilization {
    Stabilization {
        what: sys.what.clone(),
        stabilized_at: sys.stabilized_at,
        s_max: sys.stages.len(),
    }
}

fn verdict(label: impl Into<String>, holds: bool, exactness: Exactness, detail: impl Into<String>) -> Verdict {
    Verdict {
        label: label.into(),
        holds: Some(holds),
        exactness,
        detail: detail.into(),
    }
}

/// First degree where two tables differ, for witnesses.
fn first_difference(a: &HilbertTable, b: &HilbertTable, mirrored: bool) -> Option<Witness> {
    a.window.points().into_iter().find_map(|d| {
        let other = if mirrored { -&d } else { d.clone() };
        let (x, y) = (a.get(&d).unwrap_or(0), b.get(&other).unwrap_or(0));
        (x != y).then(|| Witness {
            n_label: None,
            index: 0,
            degree: d,
            detail: format!("{x} != {y}"),
        })
    })
}

fn kebab(kind: MapKind) -> String {
    serde_json::to_value(kind)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_else(|| format!("{kind:?}"))
}

fn reject_dual(o: &Opts, cmd: &str) -> Result<(), Error> {
    if o.dual {
        return Err(Error::InvalidInput(format!("`{cmd}` takes a finitely generated M; --dual does not apply")));
    }
    Ok(())
}

fn run_in<F: Field>(cmd: &Command, text: &str, echo: Vec<String>) -> Result<Report, CliError> {
    let o = cmd.opts();
    let inst = Instance::<F>::parse(text)?;
    let window = inst.window(o.window.as_deref())?;
    let s_max = o.smax.or(inst.s_max).unwrap_or(DEFAULT_STAGES);
    let ctx = Ctx { inst, window, s_max };
    let mut r = Report::new(cmd.name(), echo);
    r.set("instance", if ctx.inst.name.is_empty() { o.instance.display().to_string() } else { ctx.inst.name.clone() });
    r.set("char", F::characteristic());
    r.set("vars", ctx.inst.ring.vars.join(","));
    r.set("ideal", &o.ideal);
    r.set("module", if o.dual { format!("D({})", o.module) } else { o.module.clone() });
    r.set("window", &ctx.window);
    let w = &ctx.window;
    match cmd {
        Command::Grade(o) => {
            reject_dual(o, "grade")?;
            let value = match derived::grade(ctx.inst.ideal(&o.ideal)?, &ctx.module(o)?) {
                Ok(g) => Some(g as i64),
                Err(Error::GradeUndefined) => None,
                Err(e) => return Err(e.into()),
            };
            r.config.remove("window");
            r.values.push(Value {
                label: format!("grade({}, {})", o.ideal, o.module),
                value,
            });
        }
        Command::Cograde(o) => {
            let m = ctx.module(o)?;
            if !o.dual && !m.is_finite_length() {
                return Err(Error::InvalidInput(format!(
                    "`{}` is not of finite length; pass --dual to use its Matlis dual",
                    o.module
                ))
                .into());
            }
            let (x, _) = ctx.target(o)?;
            r.set("nmodule", &o.nmodule);
            r.set("smax", s_max);
            let rep = derived::cograde(&ctx.tower(o)?, &x, w)?;
            let as_value = |v: Option<usize>| v.map(|x| x as i64);
            r.values.push(Value {
                label: "inf { i : U_i(N, X) != 0 }".into(),
                value: as_value(rep.via_homology),
            });
            r.values.push(Value {
                label: "inf { i : H^i_I(N, D(X)) != 0 }".into(),
                value: as_value(rep.via_dual_cohomology),
            });
            r.verdicts.push(verdict(
                "characterizations agree",
                rep.agree(),
                Exactness::WindowLimited,
                "homology on the window, dual cohomology on its mirror",
            ));
        }
        Command::Lc(o) => {
            reject_dual(o, "lc")?;
            let (ideal, m) = (ctx.inst.ideal(&o.ideal)?, ctx.module(o)?);
            for i in ctx.indices(o) {
                let t = cech::local_cohomology(ideal, &m, i, w)?;
                r.tables.push(Table::new(format!("H^{i}_{}({})", o.ideal, o.module), &t));
            }
        }
        Command::Glc(o) | Command::Glh(o) => {
            let (x, xname) = ctx.target(o)?;
            let tower = ctx.tower(o)?;
            r.set("nmodule", &o.nmodule);
            r.set("smax", s_max);
            for i in ctx.indices(o) {
                let (t, sys, label) = if matches!(cmd, Command::Glc(_)) {
                    let (t, s) = gen_local_cohomology(&tower, &x, i, w)?;
                    (t, s, format!("H^{i}_{}({}, {xname})", o.ideal, o.nmodule))
                } else {
                    let (t, s) = gen_local_homology(&tower, &x, i, w)?;
                    (t, s, format!("U_{i}({}, {xname})", o.nmodule))
                };
                r.tables.push(Table::new(label, &t));
                r.stabilization.push(stabilization(&sys));
            }
        }
        Command::Clh(o) => {
            let (x, xname) = ctx.target(o)?;
            let tower = ctx.tower(o)?;
            let n = ctx.inst.module(&o.nmodule)?;
            r.set("nmodule", &o.nmodule);
            r.set("smax", s_max);
            let t_max = o.tmax.or(ctx.inst.t_max);
            if let Some(t) = t_max {
                r.set("tmax", t);
            }
            for i in ctx.indices(o) {
                let ch = completion_homology(&tower, &x, i, w)?;
                r.tables.push(Table::new(format!("L_{i}({}, {xname})", o.nmodule), &ch.table));
                r.tables.push(Table::new(format!("lim^1 Tor_{}({}/I^s, {xname})", i + 1, o.nmodule), &ch.lim1.table));
                r.stabilization.push(stabilization(&ch.system));
                r.verdicts.push(verdict(
                    format!("lim^1 vanishes (i = {i})"),
                    ch.lim1.is_zero(),
                    Exactness::WindowLimited,
                    if ch.lim1.mittag_leffler { "Mittag-Leffler" } else { "images not yet stable" },
                ));
                if let Some(t) = t_max {
                    let ideal = ctx.inst.ideal(&o.ideal)?;
                    let (k, ksys) = completion_homology_koszul(&n, ideal, &x, i, w, t)?;
                    r.stabilization.push(stabilization(&ksys));
                    let wit = first_difference(&ch.table, &k, false);
                    r.verdicts.push(verdict(
                        format!("Koszul limit agrees (i = {i})"),
                        wit.is_none(),
                        Exactness::WindowLimited,
                        "lim_t H(C_t ⊗ X) against L_i",
                    ));
                    r.witnesses.extend(wit.map(|mut w| {
                        w.index = i;
                        w
                    }));
                }
            }
        }
        Command::Dual(o) => {
            reject_dual(o, "dual")?;
            let n = ctx.inst.module(&o.nmodule)?;
            let m = ctx.module(o)?;
            let mg: Graded<F> = Presented::shared(m.clone());
            let dm: Graded<F> = Dual::shared(mg.clone());
            let tower = ctx.tower(o)?;
            let mw = w.mirror();
            r.set("nmodule", &o.nmodule);
            r.set("smax", s_max);
            for i in ctx.indices(o) {
                let e = derived::ext_graded(&n, dm.clone(), i, w)?;
                let t = derived::tor(&n, &m, i, &mw)?;
                let wit = first_difference(&e, &t, true);
                r.verdicts.push(verdict(
                    format!("Ext^{i}(N, D M)_a = Tor_{i}(N, M)_-a"),
                    wit.is_none(),
                    Exactness::WindowLimited,
                    "",
                ));
                r.witnesses.extend(wit.map(|mut x| {
                    x.index = i;
                    x
                }));
                r.tables.push(Table::new(format!("Ext^{i}({}, D({}))", o.nmodule, o.module), &e));
                r.tables.push(Table::new(format!("Tor_{i}({}, {})", o.nmodule, o.module), &t));

                let (h, hs) = gen_local_cohomology(&tower, &mg, i, w)?;
                let (u, us) = gen_local_homology(&tower, &dm, i, &mw)?;
                let wit = first_difference(&h, &u, true);
                r.verdicts.push(verdict(
                    format!("D(H^{i}_I(N, M)) = U_{i}(N, D M)"),
                    wit.is_none(),
                    Exactness::WindowLimited,
                    "",
                ));
                r.witnesses.extend(wit.map(|mut x| {
                    x.index = i;
                    x
                }));
                r.tables.push(Table::new(format!("H^{i}_{}({}, {})", o.ideal, o.nmodule, o.module), &h));
                r.tables.push(Table::new(format!("U_{i}({}, D({}))", o.nmodule, o.module), &u));
                r.stabilization.push(stabilization(&hs));
                r.stabilization.push(stabilization(&us));
            }
        }
        Command::Verify { theorem, opts: o } => {
            reject_dual(o, "verify")?;
            let named = o.nlist.clone().or_else(|| match ctx.inst.nlists.keys().collect::<Vec<_>>()[..] {
                [only] => Some(only.clone()),
                _ => None,
            });
            let mut n_list = match &named {
                Some(l) => ctx.inst.nlist(l)?,
                None => Vec::new(),
            };
            if named.is_none() && o.nmodule != "R" {
                n_list.push((o.nmodule.clone(), ctx.inst.module(&o.nmodule)?));
            }
            let ses = match &ctx.inst.ses {
                Some(f) => Some(ctx.inst.map(f)?.clone()),
                None => None,
            };
            let input = TheoremInput {
                instance: ctx.inst.name.clone(),
                ideal: ctx.inst.ideal(&o.ideal)?.clone(),
                module: ctx.module(o)?,
                n_list,
                ses,
                window: w.clone(),
                s_max,
            }
            .with_default_n_list();
            r.set("theorem", theorem);
            r.set("smax", s_max);
            r.set("nlist", input.n_list.iter().map(|(l, _)| l.as_str()).collect::<Vec<_>>().join(","));
            let rep = verify_theorem(*theorem, &input)?;
            for c in &rep.conditions {
                r.verdicts.push(Verdict {
                    label: c.label.clone(),
                    holds: c.holds,
                    exactness: c.exactness,
                    detail: c.detail.clone(),
                });
                r.witnesses.extend(c.witness.clone());
            }
            for m in &rep.maps {
                let fail = m.first_failure();
                r.verdicts.push(verdict(
                    format!("map {} [N = {}]", kebab(m.map), m.n_label),
                    m.all_iso(),
                    Exactness::WindowLimited,
                    match fail {
                        Some((i, e)) => format!("i = {i}: rank {} between {} and {}", e.rank, e.source_dim, e.target_dim),
                        None => format!("iso for i in {:?}", m.rows.iter().map(|x| x.i).collect::<Vec<_>>()),
                    },
                ));
            }
            r.verdicts.push(verdict(
                "theorem consistent on instance",
                rep.consistent,
                Exactness::WindowLimited,
                "",
            ));
        }
        Command::OracleCheck(o) => {
            reject_dual(o, "oracle-check")?;
            let n = ctx.inst.module(&o.nmodule)?;
            let m = ctx.module(o)?;
            let ideal = ctx.inst.ideal(&o.ideal)?;
            let (rn, rm) = (oracle::RawModule::from_presentation(&n), oracle::RawModule::from_presentation(&m));
            let xs: Vec<Vec<u32>> = ideal.gens().iter().map(|g| g.0.clone()).collect();
            r.set("nmodule", &o.nmodule);
            for i in ctx.indices(o).into_iter().filter(|i| *i >= 0) {
                let checks = [
                    ("Ext", derived::ext(&n, &m, i, w)?, oracle::ext(&rn, &rm, i as usize, w)),
                    ("Tor", derived::tor(&n, &m, i, w)?, oracle::tor(&rn, &rm, i as usize, w)),
                    (
                        "H_I",
                        cech::local_cohomology(ideal, &m, i, w)?,
                        oracle::local_cohomology(&xs, &rm, i as usize, w),
                    ),
                ];
                for (name, engine, brute) in checks {
                    let wit = first_difference(&engine, &brute, false);
                    r.verdicts.push(verdict(
                        format!("{name}^{i} engine = oracle"),
                        wit.is_none(),
                        Exactness::WindowLimited,
                        format!("total dimension {}", engine.total()),
                    ));
                    r.witnesses.extend(wit.map(|mut x| {
                        x.index = i;
                        x
                    }));
                }
            }
        }
    }
    r.settle();
    Ok(r)
}

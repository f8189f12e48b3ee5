//! The `spbw` command line. [`run_command`] is the whole program; the binary
//! only forwards its arguments and exit code.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use super::elab::{elaborate, ElabOptions, MapValue, Presentation, RingValue};
use super::presets::{self, CATALOG};
use super::report::{elem_set, emit_report, to_value, ReportDoc};
use super::ShellError;
use crate::assocprimes::{
    enumerate_right_ideals, is_right_ideal, make_nilpotent_good, nass_ring, ndeg, quasi_prime_check, right_ideal_generators, verify_nass_extension, AssocError,
    DEFAULT_IDEAL_CAP,
};
use crate::finring::symbolic::SymRing;
use crate::finring::{default_cap, BuildOptions, FiniteRing};
use crate::nilweak::{
    certify, is_nilpotent_poly, pi_armendariz_check, verify_theorem, weak_annihilator_ext, weak_annihilator_ring,
    AnnMode, Certificate, NilError, NilMode, TheoremKind, DEFAULT_ENUMERATION_CAP,
};
use crate::ringmaps::symbolic::{check_compatibility_sym, SymDerivation, SymMap};
use crate::ringmaps::{check_compatibility, CheckMode, CompatReport, Derivation, RingMap};
use crate::spbwalg::{check_pbw_confluence, parse_poly, ExtOptions, Extension, SkewPoly, ORDER_TAG};

const DEFAULT_SAMPLES: u64 = 1000;
const SYMBOLIC_BOUND: i64 = 6;

#[derive(Parser, Debug)]
#[command(name = "spbw", version, about = "Skew PBW extensions over finite rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Fast,
    Brute,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Thm {
    AnnSubsets,
    AnnPrincipal,
    AnnElement,
    Armendariz,
    NassExt,
    Confluence,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Presentation file.
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    file: Option<PathBuf>,
    /// Built-in presentation (see `spbw presets`).
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Declared ring to act on instead of the active one.
    #[arg(long, value_name = "NAME")]
    ring: Option<String>,
    #[arg(long, value_name = "D")]
    degree: Option<u32>,
    #[arg(long, value_name = "N")]
    trials: Option<usize>,
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Write a JSON report here.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Cardinality cap for rings and ideal lattices.
    #[arg(long, value_name = "K")]
    cap: Option<u64>,
    /// Lift the ideal-lattice and enumeration caps.
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe the ring and its nilpotent structure.
    RingInfo(Common),
    /// Strict and weak (Σ,Δ)-compatibility of the active maps.
    CheckCompat(Common),
    /// Multiply two elements of the active extension (or ring).
    Mul {
        #[command(flatten)]
        common: Common,
        left: String,
        right: String,
    },
    /// N(R), and N(A) when the extension is certified.
    Nilradical(Common),
    /// Decide whether a polynomial is nilpotent.
    Nilpoly {
        #[command(flatten)]
        common: Common,
        poly: String,
    },
    /// Weak annihilator of ring elements, or of polynomials with --degree.
    WeakAnn {
        #[command(flatten)]
        common: Common,
        #[arg(required = true)]
        targets: Vec<String>,
    },
    /// Right-multiply a polynomial into a nilpotent good one.
    GoodPoly {
        #[command(flatten)]
        common: Common,
        poly: String,
    },
    /// Right-ideal lattice with quasi-prime certificates.
    QuasiPrimes(Common),
    /// Nilpotent associated primes of the ring.
    Nass(Common),
    /// Run a theorem harness.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        thm: Thm,
    },
    /// List the built-in presentations, or print one with --preset.
    Presets(Common),
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::RingInfo(c)
            | Command::CheckCompat(c)
            | Command::Nilradical(c)
            | Command::QuasiPrimes(c)
            | Command::Nass(c)
            | Command::Presets(c) => c,
            Command::Mul { common, .. }
            | Command::Nilpoly { common, .. }
            | Command::WeakAnn { common, .. }
            | Command::GoodPoly { common, .. }
            | Command::Verify { common, .. } => common,
        }
    }
}

/// Printed lines plus JSON results; `verdict` false means exit 1.
struct Outcome {
    lines: Vec<String>,
    results: Vec<Value>,
    verdict: bool,
    mode: String,
}

impl Outcome {
    fn new(mode: &str) -> Self {
        Outcome {
            lines: Vec::new(),
            results: Vec::new(),
            verdict: true,
            mode: mode.to_string(),
        }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }
}

struct Input {
    text: String,
    pres: Presentation,
}

fn load(c: &Common) -> Result<Input, ShellError> {
    let text = match (&c.file, &c.preset) {
        (Some(path), _) => {
            std::fs::read_to_string(path).map_err(|e| ShellError::Io(format!("{}: {e}", path.display())))?
        }
        (None, Some(name)) => presets::source(name)
            .ok_or_else(|| ShellError::UnknownPreset(name.clone()))?
            .to_string(),
        (None, None) => return Err(ShellError::Usage("give an input with --file PATH or --preset NAME".into())),
    };
    let opts = ElabOptions {
        build: BuildOptions {
            cap: c.cap.unwrap_or_else(default_cap),
        },
        ext: ExtOptions::default(),
    };
    let pres = elaborate(&text, &opts)?;
    Ok(Input { text, pres })
}

fn target_ring(c: &Common, pres: &Presentation) -> Result<(String, RingValue), ShellError> {
    match &c.ring {
        Some(name) => pres
            .ring(name)
            .cloned()
            .map(|r| (name.clone(), r))
            .ok_or_else(|| ShellError::Usage(format!("no ring named `{name}`"))),
        None => pres
            .active_ring()
            .ok_or_else(|| ShellError::Usage("the input declares no ring".into())),
    }
}

fn finite(name: &str, r: RingValue) -> Result<Arc<FiniteRing>, ShellError> {
    match r {
        RingValue::Finite(f) => Ok(f),
        RingValue::Symbolic(s) => Err(ShellError::Usage(format!(
            "`{name}` = {} is symbolic; this command needs a finite ring",
            s.describe()
        ))),
    }
}

fn active_ext(pres: &Presentation) -> Result<Arc<Extension>, ShellError> {
    pres.active_extension()
        .cloned()
        .ok_or_else(|| ShellError::Usage("the input declares no extension".into()))
}

fn lattice_cap(c: &Common) -> u64 {
    if c.force {
        u64::MAX
    } else {
        c.cap.unwrap_or(DEFAULT_IDEAL_CAP)
    }
}

fn enumeration_cap(c: &Common) -> u64 {
    if c.force {
        u64::MAX
    } else {
        DEFAULT_ENUMERATION_CAP
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn poly(ext: &Arc<Extension>, text: &str) -> Result<SkewPoly, ShellError> {
    Ok(parse_poly(ext, text)?)
}

fn ring_info(c: &Common, pres: &Presentation) -> Result<Outcome, ShellError> {
    let (name, rv) = target_ring(c, pres)?;
    let mut out = Outcome::new("exact");
    match rv {
        RingValue::Finite(r) => {
            let nil = r.nil_data();
            out.line(format!("ring {name} = {}", r.describe()));
            out.line(format!("cardinality: {}", r.card()));
            let gens: Vec<String> = r.generators().iter().map(|g| g.name.clone()).collect();
            out.line(format!("generators: {}", gens.join(", ")));
            out.line(format!("field: {}  commutative: {}", yes(r.is_field()), yes(r.is_commutative())));
            out.line(format!("|N(R)| = {}  NI: {}  2-primal: {}", nil.nilpotents.len(), yes(nil.is_ni), yes(nil.is_2primal)));
            if let Some(t) = nil.nilindex {
                out.line(format!("nilindex: {t}"));
            }
            out.line(format!("units: {}", nil.units.len()));
            let mut v = json!({
                "kind": "ring_info",
                "name": name,
                "ring": r.describe(),
                "cardinality": r.card(),
                "generators": gens,
                "is_field": r.is_field(),
                "is_commutative": r.is_commutative(),
                "is_ni": nil.is_ni,
                "is_2primal": nil.is_2primal,
                "nilindex": nil.nilindex,
                "nilradical": elem_set(&r, &nil.nilpotents),
                "prime_radical": elem_set(&r, &nil.prime_radical),
                "units": nil.units.len(),
            });
            if let Some(w) = nil.ni_witness {
                v["ni_witness"] = to_value(&w);
            }
            out.results.push(v);
            if let Some(ext) = pres.active_extension().filter(|e| e.ring().id() == r.id()) {
                out.line(format!("extension: {}", ext.describe()));
                for w in ext.warnings() {
                    out.line(format!("warning: {w}"));
                }
                out.results.push(json!({
                    "kind": "extension_info",
                    "extension": ext.describe(),
                    "variables": ext.var_names(),
                    "order": ORDER_TAG,
                    "warnings": ext.warnings(),
                }));
            }
        }
        RingValue::Symbolic(s) => {
            out.line(format!("ring {name} = {} (symbolic)", s.describe()));
            let mut gens = Vec::new();
            for (g, v) in s.generators() {
                let nilp = s.is_nilpotent(v)?;
                out.line(format!("  {g} = {}  nilpotent: {}", s.format(v), yes(nilp)));
                gens.push(json!({ "name": g, "value": s.format(v), "nilpotent": nilp }));
            }
            out.results.push(json!({
                "kind": "ring_info",
                "name": name,
                "ring": s.describe(),
                "symbolic": true,
                "generators": gens,
            }));
        }
    }
    Ok(out)
}

fn compat_lines(out: &mut Outcome, label: &str, rep: &CompatReport) {
    out.line(format!(
        "{label}: strict sigma {}  strict delta {}  weak sigma {}  weak delta {}",
        yes(rep.sigma_compatible),
        yes(rep.delta_compatible),
        yes(rep.weak_sigma),
        yes(rep.weak_delta)
    ));
    for w in &rep.witnesses {
        out.line(format!(
            "  witness {:?} for {}: a = {}, b = {}, product {} but twisted {}",
            w.law, w.map_name, w.a, w.b, w.product, w.twisted
        ));
    }
}

fn all_true(rep: &CompatReport) -> bool {
    rep.strict() && rep.weak()
}

fn finite_maps(pres: &Presentation, name: &str, r: &Arc<FiniteRing>) -> (Vec<RingMap>, Vec<Derivation>) {
    if let Some(ext) = pres.active_extension().filter(|e| e.ring().id() == r.id()) {
        return (ext.sigmas().to_vec(), ext.deltas().to_vec());
    }
    let mut sigmas = Vec::new();
    let mut deltas = Vec::new();
    for m in pres.maps_on(name) {
        match &m.value {
            MapValue::Endo(s) => sigmas.push(s.clone()),
            MapValue::Deriv(d) => deltas.push(d.clone()),
            _ => {}
        }
    }
    (sigmas, deltas)
}

fn sym_maps(pres: &Presentation, name: &str) -> (Vec<SymMap>, Vec<SymDerivation>) {
    let mut sigmas = Vec::new();
    let mut deltas = Vec::new();
    for m in pres.maps_on(name) {
        match &m.value {
            MapValue::SymEndo(s) => sigmas.push(s.clone()),
            MapValue::SymDeriv(d) => deltas.push(d.clone()),
            _ => {}
        }
    }
    (sigmas, deltas)
}

fn check_compat(c: &Common, pres: &Presentation) -> Result<Outcome, ShellError> {
    let (name, rv) = target_ring(c, pres)?;
    let sampled = CheckMode::Sampled {
        count: c.trials.map_or(DEFAULT_SAMPLES, |t| t as u64),
        seed: c.seed,
    };
    match rv {
        RingValue::Finite(r) => {
            let mode = c.mode.unwrap_or(Mode::Brute);
            let mut out = Outcome::new(mode_name(mode));
            let (sigmas, deltas) = finite_maps(pres, &name, &r);
            out.line(format!("ring {name} = {}: {} endomorphisms, {} derivations", r.describe(), sigmas.len(), deltas.len()));
            let mut reports = Vec::new();
            if matches!(mode, Mode::Fast | Mode::Both) {
                reports.push(("sampled", check_compatibility(&r, &sigmas, &deltas, sampled)?));
            }
            if matches!(mode, Mode::Brute | Mode::Both) {
                let pairs = u64::from(r.card()).pow(2);
                reports.push(("exhaustive", check_compatibility(&r, &sigmas, &deltas, CheckMode::Exhaustive)?));
                out.line(format!("exhaustive over all {pairs} pairs"));
            }
            for (label, rep) in &reports {
                compat_lines(&mut out, label, rep);
                out.results.push(json!({ "kind": "compatibility", "check": label, "report": to_value(rep) }));
            }
            if let [(_, s), (_, e)] = reports.as_slice() {
                // a sample can miss a violation, but never invent one
                let sound = (s.strict() || !e.strict()) && (s.weak() || !e.weak());
                out.line(format!("sampled verdicts consistent with exhaustive: {}", yes(sound)));
                out.results.push(json!({ "kind": "mode_comparison", "consistent": sound }));
                out.verdict &= sound;
            }
            let decisive = &reports.last().expect("at least one check").1;
            out.verdict &= all_true(decisive);
            Ok(out)
        }
        RingValue::Symbolic(s) => {
            let mode = c.mode.unwrap_or(Mode::Fast);
            if mode != Mode::Fast {
                return Err(ShellError::Usage(format!(
                    "{} is symbolic: only --mode fast (sampled) is available",
                    s.describe()
                )));
            }
            let mut out = Outcome::new("fast");
            let (sigmas, deltas) = sym_maps(pres, &name);
            out.line(format!(
                "ring {name} = {} (symbolic, entries in [-{SYMBOLIC_BOUND}, {SYMBOLIC_BOUND}]): {} endomorphisms, {} derivations",
                s.describe(),
                sigmas.len(),
                deltas.len()
            ));
            let rep = check_compatibility_sym(&s, &sigmas, &deltas, sampled, SYMBOLIC_BOUND)?;
            compat_lines(&mut out, "sampled", &rep);
            out.results.push(json!({ "kind": "compatibility", "check": "sampled", "report": to_value(&rep) }));
            out.verdict = all_true(&rep);
            Ok(out)
        }
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Fast => "fast",
        Mode::Brute => "brute",
        Mode::Both => "both",
    }
}

fn sym_mul(s: &SymRing, a: &str, b: &str) -> Result<String, ShellError> {
    let x = s.parse_elem(a)?;
    let y = s.parse_elem(b)?;
    Ok(s.format(&s.mul(&x, &y)))
}

fn mul(c: &Common, pres: &Presentation, a: &str, b: &str) -> Result<Outcome, ShellError> {
    let mut out = Outcome::new("exact");
    let product = if c.ring.is_none() && pres.active_extension().is_some() {
        let ext = active_ext(pres)?;
        poly(&ext, a)?.mul(&poly(&ext, b)?)?.format()
    } else {
        match target_ring(c, pres)?.1 {
            RingValue::Finite(r) => r.format(r.mul(r.parse_elem(a)?, r.parse_elem(b)?)),
            RingValue::Symbolic(s) => sym_mul(&s, a, b)?,
        }
    };
    out.line(product.clone());
    out.results.push(json!({ "kind": "product", "left": a, "right": b, "product": product }));
    Ok(out)
}

fn cert_json(cert: &Certificate) -> Value {
    json!({ "strict": cert.strict, "weak": cert.weak, "ni": cert.ni })
}

fn nilradical(c: &Common, pres: &Presentation) -> Result<Outcome, ShellError> {
    let (name, rv) = target_ring(c, pres)?;
    let r = finite(&name, rv)?;
    let nil = r.nil_data();
    let mut out = Outcome::new("exact");
    let shown: Vec<String> = nil.nilpotents.iter().take(64).map(|e| r.format(e)).collect();
    out.line(format!("N({name}) has {} elements: {}", nil.nilpotents.len(), shown.join(", ")));
    out.line(format!("NI: {}  2-primal: {}", yes(nil.is_ni), yes(nil.is_2primal)));
    let mut v = json!({
        "kind": "nilradical",
        "ring": r.describe(),
        "nilradical": elem_set(&r, &nil.nilpotents),
        "prime_radical": elem_set(&r, &nil.prime_radical),
        "is_ni": nil.is_ni,
        "is_2primal": nil.is_2primal,
        "nilindex": nil.nilindex,
    });
    if let Some(ext) = pres.active_extension().filter(|e| e.ring().id() == r.id()) {
        let cert = certify(ext)?;
        let holds = cert.weak_ni();
        if holds {
            out.line(format!(
                "N(A) = N(R)<{}>: f is nilpotent iff every coefficient lies in N(R)",
                ext.var_names().join(", ")
            ));
        } else {
            out.line("the extension is not certified weakly compatible and NI; N(A) is not described");
        }
        v["extension"] = json!({ "name": ext.name(), "certificate": cert_json(&cert), "coefficientwise": holds });
    }
    out.results.push(v);
    Ok(out)
}

fn nilpoly(c: &Common, pres: &Presentation, text: &str) -> Result<Outcome, ShellError> {
    let ext = active_ext(pres)?;
    let mode = c.mode.unwrap_or(Mode::Both);
    let nm = match mode {
        Mode::Fast => NilMode::Criterion,
        Mode::Brute => NilMode::Oracle,
        Mode::Both => NilMode::Both,
    };
    let f = poly(&ext, text)?;
    let cert = certify(&ext)?;
    let v = is_nilpotent_poly(&f, nm, Some(&cert))?;
    let mut out = Outcome::new(mode_name(mode));
    out.line(format!("{}: nilpotent {}", f.format(), yes(v.nilpotent)));
    if let Some(cr) = v.criterion {
        out.line(format!("  coefficient criterion: {}", yes(cr)));
    }
    if let Some(o) = &v.oracle {
        out.line(format!("  power oracle: {o:?}"));
    }
    if v.agree == Some(false) {
        out.line("  criterion and oracle DISAGREE");
    }
    out.verdict = v.nilpotent && v.agree != Some(false);
    out.results.push(json!({ "kind": "nilpoly", "poly": f.format(), "verdict": to_value(&v) }));
    Ok(out)
}

fn weak_ann(c: &Common, pres: &Presentation, targets: &[String]) -> Result<Outcome, ShellError> {
    if let (Some(d), None) = (c.degree, &c.ring) {
        let ext = active_ext(pres)?;
        let mode = c.mode.unwrap_or(Mode::Both);
        let am = match mode {
            Mode::Fast => AnnMode::Fast,
            Mode::Brute => AnnMode::Brute,
            Mode::Both => AnnMode::Both,
        };
        let us = targets.iter().map(|t| poly(&ext, t)).collect::<Result<Vec<_>, _>>()?;
        let cert = certify(&ext)?;
        let ann = weak_annihilator_ext(&ext, &us, d, am, Some(&cert), enumeration_cap(c))?;
        let r = ext.ring();
        let mut out = Outcome::new(mode_name(mode));
        let show = |set: &crate::finring::ElemSet| set.iter().take(64).map(|e| r.format(e)).collect::<Vec<_>>().join(", ");
        out.line(format!("C_U = {{{}}}", show(&ann.coefficient_set)));
        if let Some(ideal) = &ann.coefficient_ideal {
            out.line(format!("N_R(C_U) = {{{}}}", show(ideal)));
            out.line(format!("N_A(U) at degree <= {d}: polynomials with all coefficients in N_R(C_U)"));
        }
        out.line(format!("candidates: {}", ann.candidates));
        if let Some(n) = ann.brute_count {
            out.line(format!("enumerated members: {n} (inconclusive oracle calls: {})", ann.inconclusive));
        }
        if let Some(agree) = ann.agree {
            out.line(format!("fastpath and enumeration agree: {}", yes(agree)));
            out.verdict = agree;
        }
        if let Some(d) = &ann.first_divergence {
            out.line(format!("  first divergence: {d:?}"));
        }
        out.results.push(json!({
            "kind": "weak_annihilator_ext",
            "query": targets,
            "method": to_value(&ann.method),
            "degree_bound": d,
            "seed": c.seed,
            "coefficient_set": elem_set(r, &ann.coefficient_set),
            "verdicts": { "agree": ann.agree },
            "report": to_value(&ann),
        }));
        return Ok(out);
    }
    let (name, rv) = target_ring(c, pres)?;
    let r = finite(&name, rv)?;
    let xs = targets.iter().map(|t| r.parse_elem(t)).collect::<Result<Vec<_>, _>>()?;
    let ann = weak_annihilator_ring(&r, &xs)?;
    let mut out = Outcome::new("exact");
    let elems: Vec<String> = ann.annihilator.iter().take(64).map(|e| r.format(e)).collect();
    out.line(format!("N_R({}) has {} elements: {}", targets.join(", "), ann.annihilator.len(), elems.join(", ")));
    match ann.generator {
        Some(g) => out.line(format!("principal nilpotent generator: {}", r.format(g))),
        None => out.line("no nilpotent c with cR = N_R(X)"),
    }
    out.results.push(json!({
        "kind": "weak_annihilator_ring",
        "query": targets,
        "method": "exact",
        "annihilator": elem_set(&r, &ann.annihilator),
        "generator": ann.generator.map(|g| r.format(g)),
        "verdicts": { "principal_by_nilpotent": ann.generator.is_some() },
    }));
    Ok(out)
}

fn good_poly(c: &Common, pres: &Presentation, text: &str) -> Result<Outcome, ShellError> {
    let ext = active_ext(pres)?;
    let f = poly(&ext, text)?;
    let cert = certify(&ext)?;
    let before = ndeg(&f);
    let res = make_nilpotent_good(&f, &cert)?;
    let _ = c;
    let mut out = Outcome::new("exact");
    out.line(format!("f = {}  ndeg {}  good {}", before.poly, before.ndeg, yes(before.is_good)));
    for s in &res.trace {
        out.line(format!("  step: position {} offending {} multiply by {}", s.position, s.offending, s.multiplier));
    }
    out.line(format!("r = {}", res.r_display));
    out.line(format!("fr = {}  ndeg {}", res.fr, res.final_ndeg));
    out.results.push(json!({ "kind": "good_poly", "order": ORDER_TAG, "ndeg": to_value(&before), "result": to_value(&res) }));
    Ok(out)
}

fn quasi_primes(c: &Common, pres: &Presentation) -> Result<Outcome, ShellError> {
    let (name, rv) = target_ring(c, pres)?;
    let r = finite(&name, rv)?;
    let lattice = enumerate_right_ideals(&r, lattice_cap(c))?;
    let mut out = Outcome::new("exact");
    out.line(format!("{} right ideals of {}", lattice.len(), r.describe()));
    let mut ideals = Vec::new();
    for ideal in &lattice {
        let cert = quasi_prime_check(&r, &lattice, ideal);
        let ok = cert.reverify(&r);
        out.verdict &= ok;
        let gens: Vec<String> = ideal.generators.iter().map(|&g| r.format(g)).collect();
        let ann_gens: Vec<String> = if is_right_ideal(&r, &cert.annihilator) {
            right_ideal_generators(&r, &cert.annihilator).into_iter().map(|g| r.format(g)).collect()
        } else {
            vec!["not a right ideal".into()]
        };
        out.line(format!(
            "  ({})R  size {}  quasi-prime {}  N_R(I) = ({})R of size {}",
            gens.join(", "),
            ideal.len(),
            yes(cert.is_quasi_prime),
            ann_gens.join(", "),
            cert.annihilator.len()
        ));
        ideals.push(json!({
            "generators": gens,
            "ideal": elem_set(&r, &ideal.elements),
            "is_quasi_prime": cert.is_quasi_prime,
            "inside_nilradical": cert.inside_nilradical,
            "annihilator": elem_set(&r, &cert.annihilator),
            "witness": cert.witness.as_ref().map(|w| json!({
                "sub_ideal_generators": w.sub_ideal.iter().map(|&g| r.format(g)).collect::<Vec<_>>(),
                "sub_annihilator": elem_set(&r, &w.sub_annihilator),
            })),
            "reverified": ok,
        }));
    }
    out.results.push(json!({ "kind": "quasi_primes", "ring": r.describe(), "ideals": ideals }));
    Ok(out)
}

fn nass(c: &Common, pres: &Presentation) -> Result<Outcome, ShellError> {
    let (name, rv) = target_ring(c, pres)?;
    let r = finite(&name, rv)?;
    let lattice = enumerate_right_ideals(&r, lattice_cap(c))?;
    let primes = nass_ring(&r, &lattice)?;
    let mut out = Outcome::new("exact");
    out.line(format!("NAss({name}) has {} primes", primes.len()));
    let mut list = Vec::new();
    for p in &primes {
        let gens: Vec<String> = p.generators.iter().map(|&g| r.format(g)).collect();
        let is_nil = p.prime == r.nil_data().nilpotents;
        out.line(format!(
            "  ({})R  size {}{}",
            gens.join(", "),
            p.prime.len(),
            if is_nil { "  = N(R)" } else { "" }
        ));
        list.push(json!({
            "generators": gens,
            "cardinality": p.prime.len(),
            "prime": elem_set(&r, &p.prime),
            "equals_nilradical": is_nil,
            "from_ideals": p.from_ideals,
        }));
    }
    out.results.push(json!({ "kind": "nass", "ring": r.describe(), "lattice_size": lattice.len(), "primes": list }));
    Ok(out)
}

fn verify(c: &Common, pres: &Presentation, thm: Thm) -> Result<Outcome, ShellError> {
    let ext = active_ext(pres)?;
    let mut out = Outcome::new("both");
    if thm == Thm::Confluence {
        let rep = check_pbw_confluence(&ext)?;
        out.line(format!("{}: confluent {}", ext.describe(), yes(rep.confluent)));
        out.line(format!("  checked {}", rep.checked_bound));
        if let Some(d) = &rep.first_divergence {
            out.line(format!("  overlap {:?}: {} vs {}", d.overlap, d.left, d.right));
        }
        out.verdict = rep.confluent;
        out.mode = "exact".into();
        out.results.push(json!({ "kind": "confluence", "report": to_value(&rep) }));
        return Ok(out);
    }
    let cert = certify(&ext)?;
    let degree = c.degree.unwrap_or(1);
    match thm {
        Thm::AnnSubsets | Thm::AnnPrincipal | Thm::AnnElement => {
            let which = match thm {
                Thm::AnnSubsets => TheoremKind::Subsets,
                Thm::AnnPrincipal => TheoremKind::PrincipalIdeals,
                _ => TheoremKind::SingleElements,
            };
            let trials = c.trials.unwrap_or(20);
            let rep = verify_theorem(&ext, which, trials, c.seed, degree, &cert)?;
            out.line(format!(
                "{:?}: {} trials, {} failures, generators {}",
                which,
                rep.trials,
                rep.failures,
                rep.generators.join(", ")
            ));
            for t in rep.results.iter().filter(|t| !t.passed) {
                out.line(format!("  trial {} failed: {}", t.trial, t.failure.as_deref().unwrap_or("")));
            }
            out.verdict = rep.passed();
            out.results.push(json!({ "kind": "theorem", "report": to_value(&rep) }));
        }
        Thm::Armendariz => {
            let trials = c.trials.unwrap_or(500);
            let rep = pi_armendariz_check(&ext, trials, c.seed, &cert)?;
            out.line(format!("{} pairs, {} counterexamples", rep.pairs, rep.counterexamples.len()));
            for ce in &rep.counterexamples {
                out.line(format!("  f = {}  g = {}", ce.f, ce.g));
            }
            out.verdict = rep.passed();
            out.results.push(json!({ "kind": "armendariz", "report": to_value(&rep) }));
        }
        Thm::NassExt => {
            let trials = c.trials.unwrap_or(20);
            let rep = verify_nass_extension(&ext, degree, trials, c.seed, &cert, lattice_cap(c), enumeration_cap(c))?;
            for f in &rep.forward {
                out.line(format!(
                    "forward P = ({}): {} of {} candidates, passed {}",
                    f.ideal_generators.join(", "),
                    f.members,
                    f.candidates,
                    yes(f.passed)
                ));
            }
            let bad = rep.backward.iter().filter(|b| b.matches.is_none()).count();
            out.line(format!("backward: {} good polynomials, {} unmatched", rep.backward.len(), bad));
            out.verdict = rep.passed;
            out.results.push(json!({ "kind": "nass_ext", "report": to_value(&rep) }));
        }
        Thm::Confluence => unreachable!("handled above"),
    }
    Ok(out)
}

fn list_presets(c: &Common) -> Result<(Outcome, String), ShellError> {
    let mut out = Outcome::new("none");
    if let Some(name) = &c.preset {
        let p = presets::find(name).ok_or_else(|| ShellError::UnknownPreset(name.clone()))?;
        for l in p.source.lines() {
            out.line(l);
        }
        out.results.push(json!({ "kind": "preset", "name": p.name, "source": p.source }));
        return Ok((out, p.source.to_string()));
    }
    for p in CATALOG {
        out.line(format!("{:<20} {}", p.name, p.summary));
        out.results.push(json!({ "kind": "preset", "name": p.name, "summary": p.summary, "confluent": p.confluent }));
    }
    Ok((out, String::new()))
}

/// Errors that report a mathematical hypothesis or verdict failing rather
/// than bad input.
fn verdict_failure(e: &ShellError) -> bool {
    matches!(
        e,
        ShellError::Nil(NilError::HypothesisNotCertified(_) | NilError::HypothesisFailedRingSide { .. })
            | ShellError::Assoc(
                AssocError::NotNI
                    | AssocError::DescentStuck { .. }
                    | AssocError::Nil(NilError::HypothesisNotCertified(_))
            )
    )
}

fn dispatch(cmd: &Command) -> Result<(Outcome, String), ShellError> {
    if let Command::Presets(c) = cmd {
        return list_presets(c);
    }
    let c = cmd.common();
    let input = load(c)?;
    let pres = &input.pres;
    let out = match cmd {
        Command::RingInfo(c) => ring_info(c, pres),
        Command::CheckCompat(c) => check_compat(c, pres),
        Command::Mul { common, left, right } => mul(common, pres, left, right),
        Command::Nilradical(c) => nilradical(c, pres),
        Command::Nilpoly { common, poly } => nilpoly(common, pres, poly),
        Command::WeakAnn { common, targets } => weak_ann(common, pres, targets),
        Command::GoodPoly { common, poly } => good_poly(common, pres, poly),
        Command::QuasiPrimes(c) => quasi_primes(c, pres),
        Command::Nass(c) => nass(c, pres),
        Command::Verify { common, thm } => verify(common, pres, *thm),
        Command::Presets(_) => unreachable!("handled above"),
    }?;
    Ok((out, input.text))
}

/// Run `spbw` with `argv` (without the program name), writing human output
/// to `out`. Returns 0 on success, 1 when a verdict is false, 2 on bad input.
pub fn run_command(argv: &[String], out: &mut dyn Write) -> i32 {
    run_with_report(argv, out).0
}

/// Like [`run_command`] but also hands back the report document, which is
/// present whenever the command ran (exit 0 or 1).
pub fn run_with_report(argv: &[String], out: &mut dyn Write) -> (i32, Option<ReportDoc>) {
    let start = Instant::now();
    let cli = match Cli::try_parse_from(std::iter::once("spbw".to_string()).chain(argv.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{e}");
            return (if e.use_stderr() { 2 } else { 0 }, None);
        }
    };
    let c = cli.command.common().clone();
    let (outcome, text) = match dispatch(&cli.command) {
        Ok(r) => r,
        Err(e) if verdict_failure(&e) => {
            let mut o = Outcome::new("exact");
            o.line(format!("verdict false: {e}"));
            o.results.push(json!({ "kind": "hypothesis_failure", "message": e.to_string() }));
            o.verdict = false;
            (o, String::new())
        }
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            return (2, None);
        }
    };
    for l in &outcome.lines {
        let _ = writeln!(out, "{l}");
    }
    let mut doc = ReportDoc::new(argv.to_vec(), &text, c.seed, &outcome.mode);
    doc.results = outcome.results;
    doc.wall_time_ms = start.elapsed().as_millis() as u64;
    if let Some(path) = &c.json {
        if let Err(e) = emit_report(&doc, path) {
            let _ = writeln!(out, "error: {e}");
            return (2, Some(doc));
        }
    }
    (if outcome.verdict { 0 } else { 1 }, Some(doc))
}

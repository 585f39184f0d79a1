use std::fmt::Write;

use knotink::gauss::{detect_flavor, flatten_phrase, parse, FlatLike, Parsed};
use knotink::reidemeister::{random_walk_corrupted, Walk};
use knotink::{
    canonical_key, eta_iterate, eta_long, flatten, forget_arrows, invariant_bundle, parity_pairs, random_walk,
    smooth_pair, virtualize, Crossing, Decoration, End, FlatGaussCode, Flavor, FormalSum, GaussCode, GaussError,
    InvariantBundle, MoveKind, PhraseKind,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::Line;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub struct Settings {
    pub format: Format,
    pub depth: usize,
    pub seed: u64,
    pub steps: usize,
    pub j: usize,
    pub kinds: Vec<MoveKind>,
    pub walks: usize,
    pub corrupt: bool,
}

/// What a command produced. `notes` and `errors` go to standard error.
#[derive(Default)]
pub struct Report {
    pub out: String,
    pub notes: Vec<String>,
    pub errors: Vec<String>,
    pub failed: bool,
}

impl Report {
    fn emit(&mut self, s: &Settings, record: &Value, text: impl FnOnce() -> String) {
        match s.format {
            Format::Json => {
                self.out.push_str(&record.to_string());
                self.out.push('\n');
            }
            Format::Text => self.out.push_str(&text()),
        }
    }

    fn error(&mut self, line: &Line, msg: impl std::fmt::Display) {
        self.errors.push(format!("line {}: {msg}", line.number));
    }
}

fn header(line: &Line) -> String {
    match &line.name {
        Some(n) => format!("{n} (line {})", line.number),
        None => format!("line {}", line.number),
    }
}

fn with_name(line: &Line, mut v: Value) -> Value {
    let m = v.as_object_mut().expect("records are objects");
    let mut out = serde_json::Map::new();
    out.insert("line".into(), json!(line.number));
    if let Some(n) = &line.name {
        out.insert("name".into(), json!(n));
    }
    out.append(m);
    Value::Object(out)
}

fn virtual_code(line: &Line) -> Result<GaussCode<Crossing>, GaussError> {
    match parse::<Crossing>(&line.body)? {
        Parsed::Code(k) => Ok(k),
        Parsed::Phrase(_) => Err(GaussError::NotACode),
    }
}

fn bundle_record(code: &GaussCode<Crossing>, b: &InvariantBundle) -> Value {
    let mut v = serde_json::to_value(b).expect("bundle serializes");
    let m = v.as_object_mut().unwrap();
    m.insert("code".into(), json!(code.raw_string()));
    m.insert("distinguished".into(), json!(b.distinguished()));
    v
}

fn bundle_text(head: &str, code: &GaussCode<Crossing>, b: &InvariantBundle) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "{head}: {}", code.raw_string());
    let _ = writeln!(t, "  w = {}", b.writhe);
    let _ = writeln!(t, "  α = {:?}", b.alpha);
    let _ = writeln!(t, "  β = {:?}", b.beta);
    let _ = writeln!(t, "  γ = {:?}", b.gamma);
    let _ = writeln!(t, "  α(t) = {}", b.alpha_poly);
    let _ = writeln!(t, "  β(s) = {}", b.beta_poly);
    let _ = writeln!(t, "  γ(t,s) = {}", b.gamma_poly);
    let verdict = if b.distinguished() { "distinguished from the unknot" } else { "not distinguished from the unknot" };
    let _ = writeln!(t, "  {verdict}");
    t
}

pub fn invariants(lines: &[Line], s: &Settings) -> Report {
    let mut r = Report::default();
    for line in lines {
        match virtual_code(line) {
            Ok(k) => {
                let b = invariant_bundle(&k);
                r.emit(s, &with_name(line, bundle_record(&k, &b)), || bundle_text(&header(line), &k, &b));
            }
            Err(e) => r.error(line, e),
        }
    }
    r
}

fn sum_text<T>(sum: &FormalSum<T>) -> String {
    if sum.is_zero() {
        "0".to_string()
    } else {
        sum.keys().map(|k| format!("[{k}]")).collect::<Vec<_>>().join(" + ")
    }
}

fn eta_closed<D: FlatLike>(line: &Line, s: &Settings, r: &mut Report) {
    match parse::<D>(&line.body) {
        Ok(Parsed::Code(k)) => emit_eta(line, s, r, &eta_iterate(&k, s.j, s.depth)),
        Ok(Parsed::Phrase(p)) if p.kind() == PhraseKind::Long => {
            if s.j != 1 {
                r.error(line, "iterates are computed for knots only; use --j 1 for long links");
                return;
            }
            match eta_long(&p, s.depth) {
                Ok(sum) => emit_eta(line, s, r, &sum),
                Err(e) => r.error(line, e),
            }
        }
        Ok(Parsed::Phrase(_)) => r.error(line, "closed links are not supported; prefix long links with \"long:\""),
        Err(e) => r.error(line, e),
    }
}

fn emit_eta<T>(line: &Line, s: &Settings, r: &mut Report, sum: &FormalSum<T>) {
    let mut v = serde_json::to_value(sum).expect("sum serializes");
    v.as_object_mut().unwrap().insert("j".into(), json!(s.j));
    let name = if s.j == 1 { "η".to_string() } else { format!("η^{}", s.j) };
    r.emit(s, &with_name(line, v), || format!("{}: {name} = {}\n", header(line), sum_text(sum)));
}

pub fn eta(lines: &[Line], s: &Settings) -> Report {
    let mut r = Report::default();
    for line in lines {
        match detect_flavor(&line.body) {
            Flavor::Virtual => match parse::<Crossing>(&line.body) {
                Ok(Parsed::Code(k)) => {
                    r.notes.push(format!("line {}: note: virtual code flattened", line.number));
                    let flat = flatten(&k);
                    emit_eta(line, s, &mut r, &eta_iterate(&flat, s.j, s.depth));
                }
                Ok(Parsed::Phrase(p)) if p.kind() == PhraseKind::Long && s.j == 1 => {
                    r.notes.push(format!("line {}: note: virtual phrase flattened", line.number));
                    match eta_long(&flatten_phrase(&p), s.depth) {
                        Ok(sum) => emit_eta(line, s, &mut r, &sum),
                        Err(e) => r.error(line, e),
                    }
                }
                Ok(Parsed::Phrase(_)) => r.error(line, "only knots and long links (with --j 1) are supported"),
                Err(e) => r.error(line, e),
            },
            Flavor::Flat => eta_closed::<End>(line, s, &mut r),
            Flavor::Free => eta_closed::<()>(line, s, &mut r),
        }
    }
    r
}

fn canon_line<D: Decoration>(line: &Line, s: &Settings, r: &mut Report) {
    let key = match parse::<D>(&line.body) {
        Ok(Parsed::Code(k)) => canonical_key(&k, s.depth),
        Ok(Parsed::Phrase(p)) if p.kind() == PhraseKind::Long => knotink::canonical::canonical_key_long(&p, s.depth),
        Ok(Parsed::Phrase(_)) => {
            r.error(line, "closed links are not supported; prefix long links with \"long:\"");
            return;
        }
        Err(e) => {
            r.error(line, e);
            return;
        }
    };
    let v = json!({ "flavor": flavor_name(D::FLAVOR), "key": key.text, "reduced_size": key.reduced_size });
    r.emit(s, &with_name(line, v), || {
        format!("{}: {} ({} crossings after reduction)\n", header(line), key.text, key.reduced_size)
    });
}

fn flavor_name(f: Flavor) -> &'static str {
    match f {
        Flavor::Virtual => "virtual",
        Flavor::Flat => "flat",
        Flavor::Free => "free",
    }
}

pub fn canon(lines: &[Line], s: &Settings) -> Report {
    let mut r = Report::default();
    for line in lines {
        match detect_flavor(&line.body) {
            Flavor::Virtual => canon_line::<Crossing>(line, s, &mut r),
            Flavor::Flat => canon_line::<End>(line, s, &mut r),
            Flavor::Free => canon_line::<()>(line, s, &mut r),
        }
    }
    r
}

/// Invariants a walk must preserve, as comparable text.
trait Checked: Decoration {
    fn fingerprints(code: &GaussCode<Self>, depth: usize) -> Vec<(&'static str, String)>;
}

fn keys<D: FlatLike>(code: &GaussCode<D>, j: usize, depth: usize) -> String {
    sum_text(&eta_iterate(code, j, depth))
}

/// Smoothing a parity pair commutes with reversing the arrow of any other chord.
fn virtualization_commutes(code: &FlatGaussCode) -> bool {
    let pairs = parity_pairs(code);
    code.labels().into_iter().all(|c| {
        let kv = virtualize(code, c).unwrap();
        pairs
            .iter()
            .filter(|&&(a, b)| a != c && b != c)
            .all(|&p| smooth_pair(&kv, p).ok() == smooth_pair(code, p).ok().map(|t| virtualize(&t, c).unwrap()))
    })
}

impl Checked for Crossing {
    fn fingerprints(code: &GaussCode<Self>, depth: usize) -> Vec<(&'static str, String)> {
        let b = invariant_bundle(code);
        let bundle =
            format!("{:?} {:?} {:?} {} {} {}", b.alpha, b.beta, b.gamma, b.alpha_poly, b.beta_poly, b.gamma_poly);
        vec![("bundle", bundle), ("eta", keys(&flatten(code), 1, depth))]
    }
}

impl Checked for End {
    fn fingerprints(code: &GaussCode<Self>, depth: usize) -> Vec<(&'static str, String)> {
        let free = keys(&forget_arrows(code), 1, depth);
        vec![
            ("eta", keys(code, 1, depth)),
            ("eta2", keys(code, 2, depth)),
            ("virtualization", format!("{free} {}", virtualization_commutes(code))),
        ]
    }
}

impl Checked for () {
    fn fingerprints(code: &GaussCode<Self>, depth: usize) -> Vec<(&'static str, String)> {
        vec![("eta", keys(code, 1, depth)), ("eta2", keys(code, 2, depth))]
    }
}

fn fuzz_line<D: Checked>(line: &Line, s: &Settings, r: &mut Report) {
    let code = match parse::<D>(&line.body) {
        Ok(Parsed::Code(k)) => k,
        Ok(Parsed::Phrase(_)) => {
            r.error(line, GaussError::NotACode);
            return;
        }
        Err(e) => {
            r.error(line, e);
            return;
        }
    };
    let before = D::fingerprints(&code, s.depth);
    for w in 0..s.walks {
        let seed = s.seed.wrapping_add(w as u64);
        let walk: Walk<D> = if s.corrupt {
            random_walk_corrupted(&code, s.steps, seed, &s.kinds)
        } else {
            random_walk(&code, s.steps, seed, &s.kinds)
        };
        let after = D::fingerprints(&walk.code, s.depth);
        let checks: Vec<(&str, bool)> = before.iter().zip(&after).map(|((n, a), (_, b))| (*n, a == b)).collect();
        let pass = checks.iter().all(|c| c.1);
        r.failed |= !pass;
        let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
        let check_map: serde_json::Map<String, Value> =
            checks.iter().map(|(n, ok)| (n.to_string(), json!(verdict(*ok)))).collect();
        let v = json!({
            "flavor": flavor_name(D::FLAVOR),
            "seed": seed,
            "steps": walk.trace.len(),
            "kinds": s.kinds.iter().map(|k| k.name()).collect::<Vec<_>>(),
            "result": verdict(pass),
            "checks": check_map,
            "final_code": walk.code.raw_string(),
            "trace": serde_json::to_value(&walk.trace).expect("trace serializes"),
        });
        r.emit(s, &with_name(line, v), || {
            let mut t = String::new();
            let list: Vec<String> = checks.iter().map(|(n, ok)| format!("{n} {}", verdict(*ok))).collect();
            let _ = writeln!(t, "{} seed {seed}: {} ({})", header(line), verdict(pass), list.join(", "));
            for step in &walk.trace {
                let d = &step.descriptor;
                let _ = writeln!(t, "  {} {:?} {} -> {}", d.kind, d.site, d.variant, step.resulting_code.raw_string());
            }
            t
        });
    }
}

pub fn fuzz(lines: &[Line], s: &Settings) -> Report {
    let mut r = Report::default();
    for line in lines {
        match detect_flavor(&line.body) {
            Flavor::Virtual => fuzz_line::<Crossing>(line, s, &mut r),
            Flavor::Flat => fuzz_line::<End>(line, s, &mut r),
            Flavor::Free => fuzz_line::<()>(line, s, &mut r),
        }
    }
    r
}

#[derive(Default, Serialize)]
struct Counts {
    alpha: usize,
    beta: usize,
    gamma: usize,
    any: usize,
}

#[derive(Serialize)]
struct Summary {
    knots: usize,
    errors: usize,
    pairs: usize,
    pairs_distinguished: Counts,
    distinguished_from_unknot: Counts,
}

fn tally(c: &mut Counts, a: bool, b: bool, g: bool) {
    c.alpha += a as usize;
    c.beta += b as usize;
    c.gamma += g as usize;
    c.any += (a || b || g) as usize;
}

pub fn batch(lines: &[Line], s: &Settings) -> Report {
    let results: Vec<_> = lines
        .par_iter()
        .map(|line| {
            virtual_code(line).map(|k| {
                let b = invariant_bundle(&k);
                (k, b)
            })
        })
        .collect();
    let mut r = Report::default();
    let mut bundles = Vec::new();
    for (line, res) in lines.iter().zip(results) {
        match res {
            Ok((k, b)) => {
                r.emit(s, &with_name(line, bundle_record(&k, &b)), || bundle_text(&header(line), &k, &b));
                bundles.push(b);
            }
            Err(e) => r.error(line, e),
        }
    }
    let mut summary = Summary {
        knots: bundles.len(),
        errors: r.errors.len(),
        pairs: bundles.len() * bundles.len().saturating_sub(1) / 2,
        pairs_distinguished: Counts::default(),
        distinguished_from_unknot: Counts::default(),
    };
    for (i, x) in bundles.iter().enumerate() {
        tally(&mut summary.distinguished_from_unknot, x.alpha != [0], x.beta != [0], x.gamma != [vec![0]]);
        for y in &bundles[i + 1..] {
            tally(&mut summary.pairs_distinguished, x.alpha != y.alpha, x.beta != y.beta, x.gamma != y.gamma);
        }
    }
    let v = json!({ "summary": summary });
    r.emit(s, &v, || {
        let (p, u) = (&summary.pairs_distinguished, &summary.distinguished_from_unknot);
        format!(
            "{} knots, {} errors\npairs told apart: α {}, β {}, γ {}, any {} of {}\ntold apart from the unknot: α {}, β {}, γ {}, any {}\n",
            summary.knots, summary.errors, p.alpha, p.beta, p.gamma, p.any, summary.pairs, u.alpha, u.beta, u.gamma, u.any
        )
    });
    r
}

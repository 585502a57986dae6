//! Subcommand implementations. Each returns a JSON result, an optional CSV
//! table and the exit code; parallel loops collect in input order.

use std::time::Instant;

use anyhow::{anyhow, bail, ensure, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use scatterlab::certify::{
    aut_sp_compose, gamma_l1_sieve, random_gl_element, random_sp_element, sl_certificate, sp_certificate,
    spread_constraints, Outcome, RPart, RankCertificate, SieveVerdict,
};
use scatterlab::field::{gcd, prime_power};
use scatterlab::linpoly::Family;
use scatterlab::matgroup::{symplectic_form, EmbeddingContext, Semilinear};
use scatterlab::scatter::{check_uf_scattered, extension_of, is_scattered, probe_exceptional, Method, ScatterReport};
use scatterlab::{Elem, Field, LinearizedPoly, UfSubspace};

use crate::config::{
    CertifyArgs, CertifyKind, CoeffDomain, Command, EmbedArgs, FamiliesArgs, Global, MethodArg, ProbeArgs, RunConfig,
    SearchArgs, Show, SieveArgs, SieveKind, TestArgs,
};
use crate::parse::{parse_element, parse_field, parse_poly, parse_range};
use crate::report::{elem, elem_text, matrix, witness, Table, WitnessJson};

pub const EXIT_SCATTERED: i32 = 0;
pub const EXIT_NOT_SCATTERED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug)]
pub struct Output {
    pub result: Value,
    pub table: Option<Table>,
    pub exit: i32,
}

#[derive(Clone, Copy)]
struct Clock {
    reproducible: bool,
}

impl Clock {
    fn ms(self, start: Instant) -> u64 {
        if self.reproducible {
            0
        } else {
            start.elapsed().as_millis() as u64
        }
    }
}

pub fn dispatch(config: &RunConfig) -> Result<Output> {
    let g = &config.global;
    let clock = Clock { reproducible: g.reproducible };
    match &config.command {
        Command::Test(a) => cmd_test(g, a, clock),
        Command::Search(a) => cmd_search(g, a),
        Command::Probe(a) => cmd_probe(g, a, clock),
        Command::Embed(a) => cmd_embed(a),
        Command::Certify(CertifyKind::Sl(a)) => cmd_certify(a, g.seed, false),
        Command::Certify(CertifyKind::Sp(a)) => cmd_certify(a, g.seed, true),
        Command::Sieve(a) => cmd_sieve(a),
        Command::Families(a) => cmd_families(g, a),
    }
}

fn fields(g: &Global) -> Result<(Field, Field)> {
    let literal = g.field.as_deref().ok_or_else(|| anyhow!("--field is required"))?;
    parse_field(literal)?.build(g.base_level)
}

fn polynomial(g: &Global, top: &Field, base: &Field) -> Result<LinearizedPoly> {
    let literal = g.poly.as_deref().ok_or_else(|| anyhow!("--poly is required"))?;
    parse_poly(top, base, literal)
}

/// The single index from `--ell`, defaulting to the family's own index.
fn single_ell(g: &Global, f: &LinearizedPoly) -> Result<usize> {
    match &g.ell {
        Some(s) => {
            let v = parse_range(s)?;
            ensure!(v.len() == 1, "--ell must be a single index for this command");
            Ok(v[0] as usize)
        }
        None => f.declared_index().ok_or_else(|| anyhow!("--ell is required for polynomials outside the known families")),
    }
}

#[derive(Serialize)]
struct PolyJson {
    text: String,
    coefficients: Vec<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<Value>,
}

fn family_json(field: &Field, family: &Family) -> Value {
    match *family {
        Family::Pseudoregulus { s } => json!({"family": "pseudoregulus", "s": s}),
        Family::Lp { s, delta, rescaled } => {
            json!({"family": "lp", "s": s, "delta": elem(field, delta), "rescaled": rescaled})
        }
    }
}

fn poly_json(f: &LinearizedPoly) -> PolyJson {
    PolyJson {
        text: f.to_string(),
        coefficients: f.coefficient_tuples(),
        family: f.family().map(|fam| family_json(f.field(), fam)),
    }
}

#[derive(Serialize)]
struct MethodRun {
    method: &'static str,
    scattered: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessJson>,
    witness_verified: Option<bool>,
    elapsed_ms: u64,
}

fn method_run(f: &LinearizedPoly, ell: usize, r: &ScatterReport, clock: Clock, start: Instant) -> MethodRun {
    MethodRun {
        method: r.method.as_str(),
        scattered: r.scattered,
        witness: r.witness.as_ref().map(|w| witness(f.field(), w)),
        witness_verified: r.witness.as_ref().map(|w| w.verify(f, ell)),
        elapsed_ms: clock.ms(start),
    }
}

fn cmd_test(g: &Global, a: &TestArgs, clock: Clock) -> Result<Output> {
    let (top, base) = fields(g)?;
    let f = polynomial(g, &top, &base)?;
    let ell = single_ell(g, &f)?;
    let methods: &[Method] = match a.method {
        MethodArg::Kernel => &[Method::Kernel],
        MethodArg::Pairs => &[Method::Pairs],
        MethodArg::Both => &[Method::Kernel, Method::Pairs],
    };
    let mut runs = Vec::new();
    let mut verdicts = Vec::new();
    for &m in methods {
        let start = Instant::now();
        let r = is_scattered(&f, ell, m)?;
        verdicts.push(r.scattered);
        runs.push(method_run(&f, ell, &r, clock, start));
    }
    ensure!(verdicts.iter().all(|&v| v == verdicts[0]), "kernel and pair methods disagree");
    let scattered = verdicts[0];
    let uf = if a.uf {
        let u = UfSubspace::new(&f, ell)?;
        let c = check_uf_scattered(&u);
        ensure!(c.scattered == scattered, "U_f check disagrees with the scatteredness test");
        Some(json!({
            "dimension": u.dimension(),
            "scattered": c.scattered,
            "max_intersection": c.max_dim,
            "worst_point": [elem(&top, c.worst.0), elem(&top, c.worst.1)],
        }))
    } else {
        None
    };
    let normalization = match f.normalization(ell) {
        Ok(()) => json!("normalized"),
        Err(issue) => serde_json::to_value(issue)?,
    };
    let result = json!({
        "field": top.literal(),
        "base": base.literal(),
        "q": base.size(),
        "n": f.n(),
        "ell": ell,
        "polynomial": poly_json(&f),
        "normalization": normalization,
        "family_flags": f.family_flags(),
        "scattered": scattered,
        "runs": runs,
        "uf": uf,
    });
    let mut table = Table::new(&["field", "ell", "polynomial", "method", "scattered"]);
    for r in &runs {
        table.push(vec![top.literal(), ell.to_string(), f.to_string(), r.method.into(), r.scattered.to_string()]);
    }
    let exit = if scattered { EXIT_SCATTERED } else { EXIT_NOT_SCATTERED };
    Ok(Output { result, table: Some(table), exit })
}

/// One `(ℓ, k)` block of the search: monic, `a_ℓ = 0`, `a_0 ≠ 0` when `ℓ > 0`.
struct Block {
    ell: usize,
    k: usize,
    /// Free coefficient positions and their alphabets, lowest position first.
    slots: Vec<(usize, Vec<Elem>)>,
    count: u64,
}

impl Block {
    fn new(ell: usize, k: usize, alphabet: &[Elem]) -> Option<Block> {
        if k == ell {
            return None;
        }
        let mut slots = Vec::new();
        for i in 0..k {
            if i == ell {
                continue;
            }
            let letters: Vec<Elem> =
                if i == 0 && ell > 0 { alphabet.iter().copied().filter(|a| !a.is_zero()).collect() } else { alphabet.to_vec() };
            slots.push((i, letters));
        }
        let count = slots.iter().try_fold(1u64, |acc, (_, l)| acc.checked_mul(l.len() as u64))?;
        Some(Block { ell, k, slots, count })
    }

    fn coefficients(&self, mut t: u64) -> Vec<Elem> {
        let mut c = vec![Elem::ZERO; self.k + 1];
        c[self.k] = Elem::ONE;
        for (i, letters) in &self.slots {
            let r = letters.len() as u64;
            c[*i] = letters[(t % r) as usize];
            t /= r;
        }
        c
    }
}

fn cmd_search(g: &Global, a: &SearchArgs) -> Result<Output> {
    let start = Instant::now();
    let (top, base) = fields(g)?;
    let n = top.degree_over(&base)? as usize;
    let ells = parse_range(g.ell.as_deref().unwrap_or("0"))?;
    if let Some(&bad) = ells.iter().find(|&&l| l as usize >= n) {
        bail!("index {bad} is out of range for n = {n}");
    }
    let alphabet: Vec<Elem> = match a.coeffs {
        CoeffDomain::Full => top.elements().collect(),
        CoeffDomain::Base => base.elements().collect(),
    };
    let k_hi = (a.k_max as usize).min(n - 1);
    let mut blocks = Vec::new();
    for &ell in &ells {
        for k in a.k_min as usize..=k_hi {
            if let Some(b) = Block::new(ell as usize, k, &alphabet) {
                blocks.push(b);
            }
        }
    }
    let total = blocks.iter().try_fold(0u64, |acc, b| acc.checked_add(b.count)).unwrap_or(u64::MAX);
    ensure!(
        total <= a.max_candidates,
        "{total} candidates exceed the cap of {}; lower --k-max, use --coeffs base or raise --max-candidates",
        a.max_candidates
    );

    let rows: Vec<(usize, usize, LinearizedPoly, bool)> = blocks
        .par_iter()
        .flat_map_iter(|b| (0..b.count).map(move |t| (b, t)))
        .map(|(b, t)| {
            let f = LinearizedPoly::new(&top, &base, b.coefficients(t))?;
            debug_assert!(f.is_ell_normalized(b.ell));
            let r = is_scattered(&f, b.ell, Method::Kernel)?;
            Ok((b.ell, b.k, f, r.scattered))
        })
        .collect::<Result<_>>()?;

    let mut hasher = Sha256::new();
    let mut table = Table::new(&["ell", "k", "polynomial", "coefficients", "scattered"]);
    let mut found = Vec::new();
    for (ell, k, f, s) in &rows {
        let coeffs = serde_json::to_string(&f.coefficient_tuples())?;
        hasher.update(format!("{ell};{k};{coeffs};{}\n", u8::from(*s)).as_bytes());
        table.push(vec![ell.to_string(), k.to_string(), f.to_string(), coeffs, s.to_string()]);
        if *s {
            found.push(json!({"ell": ell, "k": k, "polynomial": f.to_string(), "coefficients": f.coefficient_tuples()}));
        }
    }
    let scattered = found.len();
    let result = json!({
        "grid": {
            "field": top.literal(),
            "base": base.literal(),
            "ells": ells,
            "k_min": a.k_min,
            "k_max": k_hi,
            "coeffs": a.coeffs,
        },
        "counts": {"tested": rows.len(), "scattered": scattered, "not_scattered": rows.len() - scattered},
        "scattered": found,
        "determinism_hash": hex::encode(hasher.finalize()),
        "elapsed_ms": Clock { reproducible: g.reproducible }.ms(start),
    });
    Ok(Output { result, table: Some(table), exit: 0 })
}

fn cmd_probe(g: &Global, a: &ProbeArgs, clock: Clock) -> Result<Output> {
    let (top, base) = fields(g)?;
    let f = polynomial(g, &top, &base)?;
    let ell = single_ell(g, &f)?;
    let report = probe_exceptional(&f, ell, a.depth)?;
    let mut table = Table::new(&["m", "field", "scattered", "family_conditions"]);
    let mut entries = Vec::new();
    for e in &report.entries {
        // the witness lives in the extension field F_(q^(n·m))
        let (ext, _) = extension_of(&f, e.m)?;
        entries.push(json!({
            "m": e.m,
            "field": e.report.field,
            "size": e.report.size,
            "scattered": e.report.scattered,
            "witness": e.report.witness.as_ref().map(|w| witness(&ext, w)),
            "family_flags": e.flags,
            "elapsed_ms": if clock.reproducible { 0 } else { e.report.elapsed_ms },
        }));
        let flags = e.flags.map(|f| f.holds().to_string()).unwrap_or_default();
        table.push(vec![e.m.to_string(), e.report.field.clone(), e.report.scattered.to_string(), flags]);
    }
    let result = json!({
        "polynomial": poly_json(&f),
        "ell": ell,
        "depth": a.depth,
        "entries": entries,
        "first_failure": report.first_failure,
        "truncated": report.truncated,
    });
    let exit = if report.first_failure.is_none() { EXIT_SCATTERED } else { EXIT_NOT_SCATTERED };
    Ok(Output { result, table: Some(table), exit })
}

fn cmd_embed(a: &EmbedArgs) -> Result<Output> {
    let ctx = EmbeddingContext::new(a.q, a.m, a.n)?;
    let fq = ctx.base_field();
    let fqm = ctx.mid_field();
    let shown = |s: Show| a.show == s || a.show == Show::All;
    let mut result = serde_json::Map::new();
    result.insert("q".into(), json!(a.q));
    result.insert("m".into(), json!(a.m));
    result.insert("n".into(), json!(a.n));
    result.insert("d".into(), json!(ctx.d()));
    result.insert("base_field".into(), json!(fq.literal()));
    result.insert("extension_field".into(), json!(fqm.literal()));
    result.insert("gamma".into(), json!(elem(fqm, ctx.gamma())));
    let minpoly: Vec<Vec<u32>> = ctx.minpoly().coeffs().iter().map(|&c| elem(fq, c)).collect();
    result.insert("minimal_polynomial".into(), json!(minpoly));
    if shown(Show::Phi) {
        let x = match &a.element {
            Some(s) => parse_element(fqm, s)?,
            None => ctx.gamma(),
        };
        result.insert("phi".into(), json!({"element": elem(fqm, x), "matrix": matrix(&ctx.phi(x)?)}));
    }
    if shown(Show::Eta) {
        let t = match &a.matrix {
            Some(s) => {
                let rows: Vec<Vec<Vec<u32>>> =
                    serde_json::from_str(s).map_err(|e| anyhow!("--matrix: line {}, column {}: {e}", e.line(), e.column()))?;
                let rows = rows
                    .iter()
                    .map(|r| r.iter().map(|t| fqm.from_digits(t)).collect::<scatterlab::Result<Vec<_>>>())
                    .collect::<scatterlab::Result<Vec<_>>>()?;
                ensure!(rows.len() == a.n as usize, "--matrix must have n = {} rows", a.n);
                ctx.matrix(&rows)?
            }
            None => scatterlab::Matrix::identity(fqm, a.n as usize),
        };
        result.insert("eta".into(), json!({"input": matrix(&t), "matrix": matrix(&ctx.eta(&t)?)}));
    }
    if shown(Show::Mbar) {
        result.insert("mbar".into(), json!(matrix(ctx.mbar())));
    }
    if shown(Show::M) {
        result.insert("M".into(), json!(matrix(&ctx.frobenius_block(a.n as usize))));
    }
    Ok(Output { result: Value::Object(result), table: None, exit: 0 })
}

#[derive(Serialize)]
struct CertificateJson {
    index: u32,
    kind: &'static str,
    input: Value,
    companion: Vec<Vec<Vec<u32>>>,
    product: Value,
    rank: usize,
    bound: usize,
    verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis_gram_is_h: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn semilinear_json(g: &Semilinear) -> Value {
    json!({"matrix": matrix(&g.matrix), "frobenius": g.frobenius})
}

fn certificate_json(ctx: &EmbeddingContext, index: u32, input: Value, cert: &RankCertificate) -> Result<CertificateJson> {
    let verified = cert.verify(ctx)?;
    let gram = match &cert.symplectic_basis {
        Some(b) => {
            let h = symplectic_form(ctx.mid_field(), cert.e)?;
            Some(b.transpose().mul(&h)?.mul(b)? == h)
        }
        None => None,
    };
    Ok(CertificateJson {
        index,
        kind: if gram.is_some() { "sp" } else { "sl" },
        input,
        companion: matrix(&cert.companion),
        product: semilinear_json(&cert.product),
        rank: cert.rank,
        bound: cert.bound,
        verified: verified && gram != Some(false),
        basis_gram_is_h: gram,
        error: None,
    })
}

fn one_certificate(ctx: &EmbeddingContext, seed: u64, index: u32, sp: bool) -> Result<CertificateJson> {
    // one ChaCha stream per sample keeps the draws independent of scheduling
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let fqm = ctx.mid_field();
    if sp {
        let el = random_sp_element(ctx, &mut rng)?;
        let r = match el.r {
            RPart::One => json!("identity"),
            RPart::Nonsquare { i } => json!({"nonsquare": {"i": i}}),
        };
        let input = json!({
            "r": r,
            "frobenius": el.frobenius,
            "scalar": elem(fqm, el.scalar),
            "a": matrix(&el.a),
            "element": semilinear_json(&aut_sp_compose(ctx, &el)?),
        });
        certificate_json(ctx, index, input, &sp_certificate(ctx, &el)?)
    } else {
        let (beta, j) = random_gl_element(ctx, &mut rng);
        let input = json!({"beta": matrix(&beta), "j": j});
        certificate_json(ctx, index, input, &sl_certificate(ctx, &beta, j)?)
    }
}

fn cmd_certify(a: &CertifyArgs, seed: u64, sp: bool) -> Result<Output> {
    ensure!(a.e > 0 && a.d % a.e == 0, "e = {} must divide d = {}", a.e, a.d);
    let m = a.d / a.e;
    if sp {
        ensure!(a.e >= 4 && a.e % 2 == 0, "Sp certificates need even e >= 4");
    } else {
        ensure!(a.e > 2, "SL certificates need e > 2");
    }
    let ctx = EmbeddingContext::new(a.q, m, a.e)?;
    let kind = if sp { "sp" } else { "sl" };
    let certs: Vec<CertificateJson> = (0..a.samples)
        .into_par_iter()
        .map(|i| {
            one_certificate(&ctx, seed, i, sp).or_else(|e| {
                Ok(CertificateJson {
                    index: i,
                    kind,
                    input: Value::Null,
                    companion: Vec::new(),
                    product: Value::Null,
                    rank: 0,
                    bound: 0,
                    verified: false,
                    basis_gram_is_h: None,
                    error: Some(e.to_string()),
                })
            })
        })
        .collect::<Result<_>>()?;
    let verified = certs.iter().filter(|c| c.verified).count();
    let bound = if sp { ctx.d() - a.e as usize / 2 } else { ctx.d() - 2 };
    let mut table = Table::new(&["index", "rank", "bound", "verified"]);
    for c in &certs {
        table.push(vec![c.index.to_string(), c.rank.to_string(), c.bound.to_string(), c.verified.to_string()]);
    }
    let result = json!({
        "kind": kind,
        "params": {"q": a.q, "e": a.e, "d": a.d, "m": m, "samples": a.samples, "seed": seed},
        "bound": bound,
        "criterion": ctx.d() - 1,
        "verified": verified,
        "failures": certs.len() - verified,
        "max_rank": certs.iter().filter(|c| c.error.is_none()).map(|c| c.rank).max(),
        "certificates": certs,
    });
    let exit = if verified == a.samples as usize { 0 } else { 1 };
    Ok(Output { result, table: Some(table), exit })
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::Excluded => "excluded",
        Outcome::MonomialBranch => "monomial_branch",
        Outcome::Unresolved => "unresolved",
        Outcome::Survivor => "survivor",
    }
}

fn cmd_sieve(a: &SieveArgs) -> Result<Output> {
    let qs = parse_range(&a.q)?;
    for &q in &qs {
        prime_power(q).with_context(|| format!("--q {q}"))?;
    }
    let ds: Vec<u32> = parse_range(&a.d)?
        .into_iter()
        .filter(|d| !(a.odd_only && d % 2 == 0) && !(a.even_only && d % 2 == 1))
        .map(|d| u32::try_from(d).map_err(|_| anyhow!("d = {d} is too large")))
        .collect::<Result<_>>()?;
    if a.kind == SieveKind::Spread {
        if let Some(d) = ds.iter().find(|&&d| d % 2 == 1 || d == 0) {
            bail!("the spread sieve needs even d > 0, got {d}; add --even-only");
        }
    }
    let mut grid = Vec::new();
    for &q in &qs {
        for &d in &ds {
            for k in 0..=d {
                for ell in 0..=d {
                    if k.max(ell) == d {
                        grid.push((q, k, ell));
                    }
                }
            }
        }
    }
    let rows: Vec<SieveVerdict> = grid
        .par_iter()
        .map(|&(q, k, ell)| match a.kind {
            SieveKind::GammaL1 => gamma_l1_sieve(q, k, ell),
            SieveKind::Spread => spread_constraints(q, k, ell),
        })
        .collect::<scatterlab::Result<_>>()?;
    let count = |o: Outcome| rows.iter().filter(|r| r.outcome == o).count();
    let mut table = Table::new(&[
        "q", "d", "k", "ell", "branch", "quantity", "bound", "divisor", "outcome", "excluded_by_orbit_argument",
    ]);
    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in &rows {
        table.push(vec![
            r.q.to_string(),
            r.d.to_string(),
            r.k.to_string(),
            r.ell.to_string(),
            serde_json::to_value(r.branch)?.as_str().unwrap_or_default().to_string(),
            opt(r.quantity.map(|x| x.to_string())),
            opt(r.bound.map(|x| x.to_string())),
            opt(r.divisor.map(|x| x.to_string())),
            outcome_name(r.outcome).to_string(),
            r.excluded_by_orbit_argument.to_string(),
        ]);
    }
    let survivors: Vec<[u32; 3]> =
        rows.iter().filter(|r| r.outcome == Outcome::Survivor).map(|r| [r.d, r.k, r.ell]).collect();
    let result = json!({
        "kind": a.kind,
        "interpretation": match a.kind {
            SieveKind::GammaL1 => "index bound i <= d",
            SieveKind::Spread => "orbit sizes on a d/2-spread",
        },
        "qs": qs,
        "ds": ds,
        "counts": {
            "rows": rows.len(),
            "excluded": count(Outcome::Excluded),
            "monomial_branch": count(Outcome::MonomialBranch),
            "unresolved": count(Outcome::Unresolved),
            "survivor": count(Outcome::Survivor),
        },
        "survivors": survivors,
        "rows": rows,
    });
    Ok(Output { result, table: Some(table), exit: 0 })
}

fn cmd_families(g: &Global, a: &FamiliesArgs) -> Result<Output> {
    let (top, base) = fields(g)?;
    let n = top.degree_over(&base)?;
    let mut members = Vec::new();
    for s in 1..n {
        members.push(LinearizedPoly::pseudoregulus(&top, &base, s)?);
    }
    for s in (1..n).filter(|s| 2 * s < n) {
        for delta in top.nonzero_elements() {
            members.push(LinearizedPoly::lp_binomial(&top, &base, s, delta, false)?);
        }
    }
    let rows: Vec<(LinearizedPoly, usize, bool, Option<bool>)> = members
        .into_par_iter()
        .map(|f| {
            let ell = f.declared_index().expect("family members carry an index");
            let holds = f.family_flags().expect("family members carry flags").holds();
            let tested = if a.test { Some(is_scattered(&f, ell, Method::Kernel)?.scattered) } else { None };
            Ok((f, ell, holds, tested))
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["family", "s", "delta", "ell", "gcd_ok", "norm_ok", "conditions_hold", "scattered"]);
    let mut list = Vec::new();
    for (f, ell, holds, tested) in &rows {
        let flags = f.family_flags().unwrap();
        let (name, s, delta) = match *f.family().unwrap() {
            Family::Pseudoregulus { s } => ("pseudoregulus", s, None),
            Family::Lp { s, delta, .. } => ("lp", s, Some(delta)),
        };
        table.push(vec![
            name.into(),
            s.to_string(),
            delta.map(|d| elem_text(&top, d)).unwrap_or_default(),
            ell.to_string(),
            flags.gcd_ok.to_string(),
            flags.norm_ok.to_string(),
            holds.to_string(),
            tested.map(|t| t.to_string()).unwrap_or_default(),
        ]);
        list.push(json!({
            "polynomial": poly_json(f),
            "ell": ell,
            "family_flags": flags,
            "conditions_hold": holds,
            "scattered": tested,
        }));
    }
    let holding = rows.iter().filter(|r| r.2).count();
    let contradictions = rows.iter().filter(|r| r.2 && r.3 == Some(false)).count();
    let result = json!({
        "field": top.literal(),
        "base": base.literal(),
        "n": n,
        "coprime_s": (1..n).filter(|&s| gcd(s as u64, n as u64) == 1).collect::<Vec<_>>(),
        "members": rows.len(),
        "conditions_hold": holding,
        "tested": a.test,
        "scattered": rows.iter().filter(|r| r.3 == Some(true)).count(),
        "conditions_hold_but_not_scattered": contradictions,
        "list": list,
    });
    Ok(Output { result, table: Some(table), exit: if contradictions == 0 { 0 } else { 1 } })
}

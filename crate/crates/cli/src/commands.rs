use jetvar::chern_simons::{cs_lagrangian, transgression_check};
use jetvar::closed_form;
use jetvar::gauge::{check_invariant_tensor, gauge_generator, gauge_generator_with_params, GaugeGenerator};
use jetvar::random;
use jetvar::symbolic::Polynomial;
use jetvar::variational::{cs_conservation, euler_lagrange, first_variational_check, noether_current};
use jetvar::{Background, CsData, Current, FieldSpec, HomotopyCenter, JetContext, VerificationReport};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::{ConfigError, RunConfig};

/// Lines shown per block before truncating; the dump always has everything.
pub const SCREEN_LINES: usize = 40;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
}

/// Text produced by a command, plus whether every check passed.
#[derive(Debug, Default)]
pub struct Output {
    pub screen: String,
    pub dump: String,
    pub passed: bool,
}

impl Output {
    fn new() -> Self {
        Output { passed: true, ..Default::default() }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        for out in [&mut self.screen, &mut self.dump] {
            out.push_str(s.as_ref());
            out.push('\n');
        }
    }

    /// A header followed by possibly many lines; the screen copy is cut at
    /// [`SCREEN_LINES`].
    fn block(&mut self, header: impl AsRef<str>, lines: &[String]) {
        self.line(header);
        for (i, l) in lines.iter().enumerate() {
            if i < SCREEN_LINES {
                self.screen.push_str(l);
                self.screen.push('\n');
            }
            self.dump.push_str(l);
            self.dump.push('\n');
        }
        if lines.len() > SCREEN_LINES {
            self.screen.push_str(&format!("... {} more lines\n", lines.len() - SCREEN_LINES));
        }
    }

    fn report(&mut self, r: &VerificationReport) {
        if !r.passed() {
            self.passed = false;
        }
        let mut header = format!("{} {}", r.status, r.check);
        if !r.term_counts.is_empty() {
            let counts: Vec<String> = r.term_counts.iter().map(|(l, n)| format!("{l}={n}")).collect();
            header.push_str(&format!(" [{}]", counts.join(", ")));
        }
        self.block(header, &r.residual);
        for note in &r.notes {
            self.line(format!("note: {note}"));
        }
    }

    fn fail(&mut self, check: &str, message: impl std::fmt::Display) {
        self.passed = false;
        self.line(format!("FAIL {check}: {message}"));
    }
}

fn poly_lines(label: &str, p: &Polynomial, out: &mut Vec<String>) {
    for (m, c) in p.terms() {
        out.push(format!("{label} : {}", Polynomial::term(c.clone(), m.clone())));
    }
}

fn current_lines(j: &Current) -> Vec<String> {
    let mut out = Vec::new();
    for (l, c) in j.components().iter().enumerate() {
        poly_lines(&format!("J^{l}"), c, &mut out);
    }
    out
}

fn invalid(e: jetvar::Error) -> CommandError {
    CommandError::Config(ConfigError::Invalid(e.to_string()))
}

/// Validated model for the variational commands.
fn model(cfg: &RunConfig, background: Background) -> Result<CsData, CommandError> {
    let alg = cfg.algebra.build().map_err(invalid)?;
    let b = cfg.invariant.build(&alg, cfg.k, &cfg.h).map_err(invalid)?;
    CsData::new(alg, b, background, cfg.jet_order).map_err(invalid)
}

fn generator(cfg: &RunConfig, cs: &CsData) -> Result<GaugeGenerator, CommandError> {
    let g = if cfg.zero_parameters {
        gauge_generator_with_params(cs.algebra(), cs.ctx(), &vec![Polynomial::zero(); cs.algebra().dim()])
    } else {
        gauge_generator(cs.algebra(), cs.ctx())
    };
    g.map_err(invalid)
}

fn header(out: &mut Output, cfg: &RunConfig, cs: &CsData) {
    out.line(format!(
        "model: algebra={} dim={} tensor={} k={} n={} h={} background={}",
        cs.algebra().name(),
        cs.algebra().dim(),
        cs.invariant().name(),
        cfg.k,
        cs.base_dim(),
        cfg.h,
        match cs.background() {
            Background::Zero => "zero",
            Background::Symbolic => "symbolic",
        }
    ));
}

pub fn check_algebra(cfg: &RunConfig) -> Result<Output, CommandError> {
    let mut out = Output::new();
    let alg = match cfg.algebra.build() {
        Ok(a) => a,
        Err(e) => {
            out.fail("structure constants", e);
            return Ok(out);
        }
    };
    out.line(format!("PASS structure constants of {} (dim {}): antisymmetry and Jacobi", alg.name(), alg.dim()));
    let killing: Vec<String> = alg
        .killing_form()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            format!("killing[{i}] : {}", cells.join(" "))
        })
        .collect();
    out.block("killing form", &killing);
    match cfg.invariant.build(&alg, cfg.k, &cfg.h) {
        Ok(b) => out.report(&check_invariant_tensor(&alg, &b)),
        Err(e) => out.fail("invariant tensor", e),
    }
    Ok(out)
}

pub fn transgression(cfg: &RunConfig) -> Result<Output, CommandError> {
    let alg = cfg.algebra.build().map_err(invalid)?;
    let b = cfg.invariant.build(&alg, cfg.k, &cfg.h).map_err(invalid)?;
    // invariance is one of the reported checks, so it is not enforced here
    let cs = CsData::new_unchecked(alg, b, cfg.background, cfg.jet_order).map_err(invalid)?;
    let mut out = Output::new();
    header(&mut out, cfg, &cs);
    match transgression_check(&cs) {
        Ok(report) => {
            for check in &report.checks {
                out.report(check);
            }
        }
        Err(e) => out.fail("transgression", e),
    }
    Ok(out)
}

fn el_lines(cs: &CsData) -> jetvar::Result<Vec<(String, Polynomial)>> {
    let el = euler_lagrange(&cs_lagrangian(cs)?, cs.ctx())?;
    Ok(el.components().map(|(y, e)| (format!("d/d{y}"), e.clone())).collect())
}

pub fn euler_lagrange_cmd(cfg: &RunConfig, compare_background: bool) -> Result<Output, CommandError> {
    let cs = model(cfg, cfg.background)?;
    let mut out = Output::new();
    header(&mut out, cfg, &cs);
    let components = match el_lines(&cs) {
        Ok(c) => c,
        Err(e) => {
            out.fail("euler-lagrange", e);
            return Ok(out);
        }
    };
    let mut lines = Vec::new();
    for (label, p) in &components {
        poly_lines(label, p, &mut lines);
    }
    out.block(format!("euler-lagrange components ({} monomials)", lines.len()), &lines);
    if compare_background {
        let (sym, zero) = match cs.background() {
            Background::Symbolic => (cs.clone(), cs.with_background(Background::Zero)),
            Background::Zero => (cs.with_background(Background::Symbolic), cs.clone()),
        };
        let result = el_lines(&sym).and_then(|s| Ok((s, el_lines(&zero)?)));
        match result {
            Ok((s, z)) => {
                let mut diff = Vec::new();
                for ((label, a), (_, b)) in s.iter().zip(&z) {
                    poly_lines(label, &(a - b), &mut diff);
                }
                out.report(&VerificationReport::from_lines("background independence: d(S(B)) - d(S(0)) = 0", diff));
            }
            Err(e) => out.fail("background independence", e),
        }
    }
    Ok(out)
}

pub fn noether(cfg: &RunConfig) -> Result<Output, CommandError> {
    let cs = model(cfg, cfg.background)?;
    let g = generator(cfg, &cs)?;
    let mut out = Output::new();
    header(&mut out, cfg, &cs);
    let result = cs_lagrangian(&cs).and_then(|l| Ok((noether_current(&l, g.field(), cs.ctx())?, l)));
    match result {
        Ok((j, l)) => {
            let lines = current_lines(&j);
            out.block(format!("noether current along the gauge generator ({} monomials)", lines.len()), &lines);
            out.report(&first_variational_check(&l, g.field(), cs.ctx()));
        }
        Err(e) => out.fail("noether current", e),
    }
    Ok(out)
}

pub fn verify_conservation(cfg: &RunConfig) -> Result<Output, CommandError> {
    let cs = model(cfg, cfg.background)?;
    let g = generator(cfg, &cs)?;
    let mut out = Output::new();
    header(&mut out, cfg, &cs);
    let run = match cs_conservation(&cs, &g, HomotopyCenter::Zero) {
        Ok(r) => r,
        Err(e) => {
            out.fail("conservation", e);
            return Ok(out);
        }
    };
    out.report(&run.report);
    out.line("note: primitive of xi_C _| dS built by the homotopy centred at a = 0");
    let sigma = current_lines(&run.boundary.sigma);
    out.block(format!("boundary term sigma ({} monomials)", sigma.len()), &sigma);
    let modified = current_lines(&run.modified);
    out.block(format!("modified current ({} monomials)", modified.len()), &modified);
    if cfg.k == 2 && !cfg.zero_parameters {
        match closed_form::modified_current(cs.algebra(), cs.invariant(), cs.ctx()) {
            Ok(reference) => {
                let diff = closed_form::current_diff(&run.modified, &reference);
                out.report(&VerificationReport::from_lines("modified current against the 3D closed form", diff));
            }
            Err(e) => out.fail("closed-form comparison", e),
        }
    }
    Ok(out)
}

pub fn first_variational_selftest(seed: u64, per_dim: usize) -> Result<Output, CommandError> {
    if per_dim == 0 {
        return Err(CommandError::Usage("--count must be positive".into()));
    }
    let mut out = Output::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 1..=3 {
        let ctx = JetContext::new(n, FieldSpec { gauge_dim: 1, matter_dim: 1 }, 2)
            .map_err(|e| CommandError::Usage(e.to_string()))?;
        let mut failures = Vec::new();
        for i in 0..per_dim {
            let l = random::first_order_lagrangian(&mut rng, &ctx);
            let u = random::vertical_field(&mut rng, &ctx);
            let r = first_variational_check(&l, &u, &ctx);
            if !r.passed() {
                failures.extend(r.residual.iter().map(|line| format!("instance {i}: {line}")));
            }
        }
        let report =
            VerificationReport::from_lines(format!("first variational formula, n={n}, {per_dim} instances"), failures);
        out.report(&report);
    }
    out.line(format!("seed: {seed}"));
    Ok(out)
}

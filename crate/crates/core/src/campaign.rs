//! Seeded verification campaigns: one per model case, each a fixed list of
//! checks whose outcomes are assembled, in plan order, into a JSON report.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`. The campaign generator hands each sampled check
//! its own sub-seed at planning time, so the report does not depend on how
//! checks are scheduled across threads.

use std::fmt;
use std::panic::{self, AssertUnwindSafe};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::forms::StandardModel;
use crate::groups::{self, check_onishchik_triple, Point};
use crate::linalg::{LieAlgebraBasis, Subspace, Vector};
use crate::orbits::{
    classify_point, orbit_report, quadric_representatives, random_so34_element,
    tangent_dim_grassmann, tangent_dim_projective, QuadricAlgebras, Stratum,
};
use crate::sampling::{self, SeededRng};
use crate::witnesses::{
    isotropic_normal_form_complex, isotropic_normal_form_real, transport_positive_line_sp, Witness,
};

pub const REPORT_SCHEMA: &str = "flagcert.report/1";
pub const PRNG: &str = "ChaCha8Rng::seed_from_u64";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseName {
    ProjectiveSplit,
    ProjectivePq,
    Quadric7,
    Isotropic,
}

impl CaseName {
    pub const ALL: [CaseName; 4] = [
        CaseName::ProjectiveSplit,
        CaseName::ProjectivePq,
        CaseName::Quadric7,
        CaseName::Isotropic,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CaseName::ProjectiveSplit => "projective-split",
            CaseName::ProjectivePq => "projective-pq",
            CaseName::Quadric7 => "quadric7",
            CaseName::Isotropic => "isotropic",
        }
    }
}

impl fmt::Display for CaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseName {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        CaseName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| ConfigError::UnknownCase(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error(
        "unknown case {0:?} (expected projective-split, projective-pq, quadric7 or isotropic)"
    )]
    UnknownCase(String),
    #[error("incompatible parameters: {0}")]
    Incompatible(String),
    #[error("samples must be at least 1")]
    NoSamples,
    #[error("the sampling bound must be at least 1")]
    BadBound,
}

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("internal failure in check {check:?}: {message}")]
    Internal { check: String, message: String },
}

/// A fully resolved campaign configuration; `n`, `p`, `q` are zero where
/// a case does not use them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignConfig {
    pub case: CaseName,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub samples: usize,
    pub seed: u64,
    pub bound: i64,
    pub strict: bool,
}

impl CampaignConfig {
    pub const DEFAULT_SAMPLES: usize = 25;
    pub const DEFAULT_BOUND: i64 = 5;

    /// Fills in per-case defaults and checks parameter compatibility:
    /// `p + q = n` for projective-pq, `p + q = 2n − 1` for isotropic.
    pub fn resolve(
        case: CaseName,
        n: Option<usize>,
        p: Option<usize>,
        q: Option<usize>,
    ) -> Result<CampaignConfig, ConfigError> {
        let bad = |m: String| Err(ConfigError::Incompatible(m));
        let (n, p, q) = match case {
            CaseName::ProjectiveSplit => {
                if p.is_some() || q.is_some() {
                    return bad("projective-split takes only n".into());
                }
                let n = n.unwrap_or(2);
                if n == 0 {
                    return bad("n must be at least 1".into());
                }
                (n, 0, 0)
            }
            CaseName::ProjectivePq => {
                let (p, q) = match (n, p, q) {
                    (_, Some(p), Some(q)) => (p, q),
                    (Some(n), Some(p), None) if p < n => (p, n - p),
                    (Some(n), None, Some(q)) if q < n => (n - q, q),
                    (None, None, None) => (1, 1),
                    _ => return bad("projective-pq needs p and q with p + q = n".into()),
                };
                if p == 0 || q == 0 {
                    return bad("projective-pq needs p, q >= 1".into());
                }
                if n.is_some_and(|n| n != p + q) {
                    return bad(format!("p + q = {} but n = {}", p + q, n.unwrap_or(0)));
                }
                (p + q, p, q)
            }
            CaseName::Quadric7 => {
                if n.is_some() || p.is_some() || q.is_some() {
                    return bad("quadric7 takes no n, p, q".into());
                }
                (0, 0, 0)
            }
            CaseName::Isotropic => {
                let n = match (n, p, q) {
                    (Some(n), _, _) => n,
                    (None, Some(p), Some(q)) if (p + q) % 2 == 1 => (p + q).div_ceil(2),
                    (None, None, None) => 2,
                    _ => return bad("isotropic needs n, or p and q with p + q odd".into()),
                };
                if n < 2 {
                    return bad("isotropic needs n >= 2".into());
                }
                let (p, q) = match (p, q) {
                    (Some(p), Some(q)) => (p, q),
                    (Some(p), None) if p < 2 * n - 1 => (p, 2 * n - 1 - p),
                    (None, Some(q)) if q < 2 * n - 1 => (2 * n - 1 - q, q),
                    (None, None) => (2, 2 * n - 3),
                    _ => return bad(format!("p + q must equal 2n - 1 = {}", 2 * n - 1)),
                };
                if p + q != 2 * n - 1 {
                    return bad(format!("p + q = {} but 2n - 1 = {}", p + q, 2 * n - 1));
                }
                if p == 0 || q == 0 {
                    return bad("isotropic needs p, q >= 1".into());
                }
                (n, p, q)
            }
        };
        Ok(CampaignConfig {
            case,
            n,
            p,
            q,
            samples: Self::DEFAULT_SAMPLES,
            seed: 0,
            bound: Self::DEFAULT_BOUND,
            strict: false,
        })
    }

    pub fn with_samples(mut self, samples: usize) -> Result<Self, ConfigError> {
        if samples == 0 {
            return Err(ConfigError::NoSamples);
        }
        self.samples = samples;
        Ok(self)
    }

    pub fn with_bound(mut self, bound: i64) -> Result<Self, ConfigError> {
        if bound < 1 {
            return Err(ConfigError::BadBound);
        }
        self.bound = bound;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn model(&self) -> StandardModel {
        StandardModel::from_case(self.case.as_str(), self.n, self.p, self.q)
            .expect("resolved configurations build their model")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub details: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit: Option<Value>,
}

impl Check {
    fn new(name: &str, ok: bool, details: String) -> Check {
        Check {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            details,
            witness: None,
            orbit: None,
        }
    }

    fn failed(name: &str, details: impl fmt::Display) -> Check {
        Check::new(name, false, details.to_string())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: &'static str,
    pub prng: &'static str,
    pub config: CampaignConfig,
    pub checks: Vec<Check>,
    pub summary: Summary,
    pub overall: Status,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.overall == Status::Pass
    }

    /// Pretty JSON with a trailing newline; byte-identical for equal reports.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

type Job = Box<dyn FnOnce() -> Check + Send>;

struct Planned {
    name: String,
    job: Job,
}

#[derive(Default)]
struct Plan {
    items: Vec<Planned>,
}

impl Plan {
    fn push(&mut self, name: impl Into<String>, job: impl FnOnce(&str) -> Check + Send + 'static) {
        let name = name.into();
        let n2 = name.clone();
        self.items.push(Planned {
            name,
            job: Box::new(move || job(&n2)),
        });
    }
}

/// Runs every check of the configured case and assembles the report.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<Report, CampaignError> {
    let mut rng = SeededRng::seed_from_u64(cfg.seed);
    let plan = match cfg.case {
        CaseName::ProjectiveSplit | CaseName::ProjectivePq => plan_projective(cfg, &mut rng),
        CaseName::Quadric7 => plan_quadric(cfg, &mut rng),
        CaseName::Isotropic => plan_isotropic(cfg, &mut rng),
    };
    let checks = if cfg.strict {
        run_fail_fast(plan)?
    } else {
        run_all(plan)?
    };
    let mut summary = Summary::default();
    for c in &checks {
        match c.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Skipped => summary.skipped += 1,
        }
    }
    Ok(Report {
        schema: REPORT_SCHEMA,
        version: VERSION,
        prng: PRNG,
        config: cfg.clone(),
        checks,
        summary,
        overall: if summary.fail == 0 {
            Status::Pass
        } else {
            Status::Fail
        },
    })
}

fn run_one(p: Planned) -> Result<Check, CampaignError> {
    let Planned { name, job } = p;
    panic::catch_unwind(AssertUnwindSafe(job)).map_err(|e| {
        let message = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        CampaignError::Internal {
            check: name,
            message,
        }
    })
}

fn run_fail_fast(plan: Plan) -> Result<Vec<Check>, CampaignError> {
    let mut out = Vec::new();
    let mut failed = false;
    for p in plan.items {
        if failed {
            out.push(Check {
                name: p.name,
                status: Status::Skipped,
                details: "skipped after an earlier failure".into(),
                witness: None,
                orbit: None,
            });
            continue;
        }
        let c = run_one(p)?;
        failed = c.status == Status::Fail;
        out.push(c);
    }
    Ok(out)
}

fn run_all(plan: Plan) -> Result<Vec<Check>, CampaignError> {
    let n = plan.items.len();
    let threads = std::thread::available_parallelism()
        .map(|t| t.get())
        .unwrap_or(1)
        .min(n.max(1));
    let queue: Vec<Mutex<Option<Planned>>> = plan
        .items
        .into_iter()
        .map(|p| Mutex::new(Some(p)))
        .collect();
    let results: Vec<Mutex<Option<Result<Check, CampaignError>>>> =
        (0..n).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                if k >= n {
                    break;
                }
                let p = queue[k].lock().unwrap().take().expect("each job runs once");
                *results[k].lock().unwrap() = Some(run_one(p));
            });
        }
    });
    results
        .into_iter()
        .map(|r| r.into_inner().unwrap().expect("every job ran"))
        .collect()
}

fn dim_check(plan: &mut Plan, label: &str, algebra: Arc<LieAlgebraBasis>, expected: usize) {
    plan.push(format!("dimension {label}"), move |name| {
        let d = algebra.dim();
        let closed = algebra.is_bracket_closed();
        Check::new(
            name,
            d == expected && closed,
            format!(
                "{:?} dimension {d} (expected {expected}); bracket-closed: {closed}",
                algebra.ground()
            ),
        )
    });
}

fn onishchik_check(
    plan: &mut Plan,
    label: &str,
    small: Arc<LieAlgebraBasis>,
    big: Arc<LieAlgebraBasis>,
    point: Point,
    expected: usize,
) {
    plan.push(
        format!("onishchik {label}"),
        move |name| match check_onishchik_triple(&small, &big, &point) {
            Ok(r) => {
                let ok = r.passed() && r.quotient_small == expected;
                let mut c = Check::new(
                    name,
                    ok,
                    format!(
                        "quotients {} and {} (expected {expected}); q = q̂ ∩ g: {}",
                        r.quotient_small, r.quotient_big, r.isotropy_is_intersection
                    ),
                );
                c.orbit = Some(serde_json::to_value(&r).expect("serializable"));
                c
            }
            Err(e) => Check::failed(name, e),
        },
    )
}

/// Re-verifies a witness and its JSON round trip; returns the JSON.
fn round_trip(w: &Witness) -> Result<Value, String> {
    if !w.verified || !w.reverify() {
        return Err("witness does not verify".into());
    }
    let v = w.to_json();
    let text = v.to_string();
    let back = serde_json::from_str(&text)
        .map_err(|e| e.to_string())
        .and_then(|v| Witness::from_json(&v).map_err(|e| e.to_string()))?;
    if !back.verified || back.element != w.element {
        return Err("serialized witness does not re-verify".into());
    }
    Ok(v)
}

fn sub_rng(rng: &mut SeededRng) -> SeededRng {
    SeededRng::seed_from_u64(rng.random())
}

fn plan_projective(cfg: &CampaignConfig, rng: &mut SeededRng) -> Plan {
    let m = Arc::new(cfg.model());
    let n = m.n();
    let mut plan = Plan::default();
    let (real_group, real_label, su_group, su_label) = if cfg.case == CaseName::ProjectiveSplit {
        (
            groups::sp2n_r(n),
            "sp2n(R)".to_string(),
            groups::su_nn(n),
            "su(n,n)".to_string(),
        )
    } else {
        (
            groups::sp_2p2q(cfg.p, cfg.q),
            format!("sp({},{})", 2 * cfg.p, 2 * cfg.q),
            groups::su_2p2q(cfg.p, cfg.q),
            format!("su({},{})", 2 * cfg.p, 2 * cfg.q),
        )
    };
    let real_group = real_group.expect("valid parameters");
    let sp = Arc::new(groups::sp2n_c(n).expect("n >= 1").lie_algebra());
    let sl = Arc::new(groups::sl2n_c(n).expect("n >= 1").lie_algebra());
    let real = Arc::new(real_group.lie_algebra());
    let su = Arc::new(su_group.expect("valid parameters").lie_algebra());
    let dsp = n * (2 * n + 1);
    let dsl = 4 * n * n - 1;
    dim_check(&mut plan, "sp2n(C)", sp.clone(), dsp);
    dim_check(&mut plan, "sl2n(C)", sl.clone(), dsl);
    dim_check(&mut plan, &real_label, real.clone(), dsp);
    dim_check(&mut plan, &su_label, su, dsl);
    let z = sampling::gaussian_vector(rng, 2 * n, cfg.bound);
    onishchik_check(&mut plan, "sp2n ⊂ sl2n", sp, sl, Point::Line(z), 2 * n - 1);

    for k in 0..cfg.samples {
        let sign: i8 = if k % 2 == 0 { 1 } else { -1 };
        let mut r = sub_rng(rng);
        let (m, real, bound) = (m.clone(), real.clone(), cfg.bound);
        let label = if sign > 0 { "positive" } else { "negative" };
        plan.push(format!("line transport {k} ({label})"), move |name| {
            let (z, zt) = sampling::same_sign_pair(&m, &mut r, bound, sign);
            projective_witness_check(name, &m, &real, &z, &zt)
        });
    }
    plan
}

fn projective_witness_check(
    name: &str,
    m: &StandardModel,
    real: &LieAlgebraBasis,
    z: &[crate::Scalar],
    zt: &[crate::Scalar],
) -> Check {
    let w = match transport_positive_line_sp(m, z, zt) {
        Ok(w) => w,
        Err(e) => return Check::failed(name, e),
    };
    let json = match round_trip(&w) {
        Ok(v) => v,
        Err(e) => return Check::failed(name, e),
    };
    let gz = w.element.mul_vec(z);
    let strata: Vec<_> = [z, zt, &gz[..]]
        .iter()
        .map(|v| classify_point(m, &Point::Line(v.to_vec())))
        .collect();
    let dims: Vec<_> = [z, zt]
        .iter()
        .map(|v| tangent_dim_projective(real, v))
        .collect();
    let full = 2 * m.manifold_dim();
    let mut c = match (&strata[..], &dims[..]) {
        ([Ok(a), Ok(b), Ok(c)], [Ok(d1), Ok(d2)]) => {
            let open = matches!(a, Stratum::Positive | Stratum::Negative);
            let ok = a == b && b == c && d1 == d2 && (*d1 == full) == open;
            Check::new(
                name,
                ok,
                format!(
                    "stratum {a} at both ends and at g·z; real tangent dims {d1}, {d2} of {full}"
                ),
            )
        }
        _ => Check::failed(name, "classification or tangent computation failed"),
    };
    c.witness = Some(json);
    c
}

fn plan_quadric(cfg: &CampaignConfig, rng: &mut SeededRng) -> Plan {
    let mut plan = Plan::default();
    let algebras = match QuadricAlgebras::build() {
        Ok(a) => Arc::new(a),
        Err(e) => {
            plan.push("dimension g2 (derivations)", move |name| {
                Check::failed(name, e)
            });
            return plan;
        }
    };
    let g2 = Arc::new(algebras.g2.clone());
    let g2c = Arc::new(algebras.g2.complexified());
    let so34 = Arc::new(algebras.so34.clone());
    let so7 = Arc::new(groups::so7_c().lie_algebra());
    dim_check(&mut plan, "g2 (derivations)", g2, 14);
    dim_check(
        &mut plan,
        "g2 (product-preserving)",
        Arc::new(groups::g2_split().lie_algebra()),
        14,
    );
    dim_check(&mut plan, "so7(C)", so7.clone(), 21);
    dim_check(&mut plan, "so(3,4)", so34, 21);
    let reps = quadric_representatives();
    for (stratum, z) in &reps {
        onishchik_check(
            &mut plan,
            &format!("g2 ⊂ so7 at {stratum} representative"),
            g2c.clone(),
            so7.clone(),
            Point::Line(z.clone()),
            5,
        );
    }
    for (stratum, rep) in reps {
        for k in 0..cfg.samples {
            let mut r = sub_rng(rng);
            let (alg, so7, rep, bound) = (algebras.clone(), so7.clone(), rep.clone(), cfg.bound);
            plan.push(format!("orbit equality {stratum} {k}"), move |name| {
                let g = random_so34_element(&mut r, bound);
                quadric_sample_check(name, &alg, &so7, stratum, g.mul_vec(&rep))
            });
        }
    }
    plan
}

fn quadric_sample_check(
    name: &str,
    alg: &QuadricAlgebras,
    so7: &LieAlgebraBasis,
    stratum: Stratum,
    z: Vector,
) -> Check {
    let m = StandardModel::quadric7();
    let point = Point::Line(z.clone());
    let reports = orbit_report(&m, &alg.g2, "g2split", &point)
        .and_then(|a| Ok((a, orbit_report(&m, &alg.so34, "so(3,4)", &point)?)));
    let (a, b) = match reports {
        Ok(r) => r,
        Err(e) => return Check::failed(name, e),
    };
    let complex = tangent_dim_projective(so7, &z).ok();
    let mut ok = a.stratum == stratum && a.tangent_dim == b.tangent_dim;
    if matches!(stratum, Stratum::Positive | Stratum::Negative) {
        ok &= a.tangent_dim == 10 && a.open && b.open;
    }
    if a.open {
        ok &= complex == Some(m.manifold_dim());
    }
    let mut c = Check::new(
        name,
        ok,
        format!(
            "stratum {}; real tangent dims g2 {} / so(3,4) {} of {}; so7(C) complex {}",
            a.stratum,
            a.tangent_dim,
            b.tangent_dim,
            a.manifold_dim_real,
            complex.map_or("n/a".into(), |d| d.to_string())
        ),
    );
    c.orbit = Some(json!([a, b]));
    c
}

fn plan_isotropic(cfg: &CampaignConfig, rng: &mut SeededRng) -> Plan {
    let m = Arc::new(cfg.model());
    let n = cfg.n;
    let mut plan = Plan::default();
    let so2n = Arc::new(groups::so2n_c(n).expect("n >= 2").lie_algebra());
    let so2n1 = Arc::new(groups::so2n1_c(n).expect("n >= 2").lie_algebra());
    let so_pq = Arc::new(
        groups::so_pq(cfg.p, cfg.q)
            .expect("p + q odd")
            .lie_algebra(),
    );
    let zdim = n * (n - 1) / 2;
    dim_check(&mut plan, "so2n(C)", so2n.clone(), n * (2 * n - 1));
    dim_check(&mut plan, "so2n-1(C)", so2n1.clone(), (2 * n - 1) * (n - 1));
    dim_check(
        &mut plan,
        &format!("so({},{})", cfg.p, cfg.q),
        so_pq.clone(),
        (2 * n - 1) * (n - 1),
    );
    let nf = m.normal_form_complex().expect("isotropic model");
    onishchik_check(
        &mut plan,
        "so2n-1 ⊂ so2n",
        so2n1.clone(),
        so2n,
        Point::Subspace(nf),
        zdim,
    );
    for k in 0..cfg.samples {
        let mut r = sub_rng(rng);
        let (m, so2n1, bound) = (m.clone(), so2n1.clone(), cfg.bound);
        plan.push(format!("complex normal form {k}"), move |name| {
            match sampling::scrambled_complex_plane(&m, &mut r, bound) {
                Ok(s) => complex_nf_check(name, &m, &so2n1, &s),
                Err(e) => Check::failed(name, e),
            }
        });
    }
    for k in 0..cfg.samples {
        let mut r = sub_rng(rng);
        let (m, so_pq, bound) = (m.clone(), so_pq.clone(), cfg.bound);
        plan.push(
            format!("real normal form {k}"),
            move |name| match sampling::scrambled_real_plane(&m, &mut r, bound) {
                Ok(s) => real_nf_check(name, &m, &so_pq, &s),
                Err(e) => Check::failed(name, e),
            },
        );
    }
    plan
}

fn complex_nf_check(name: &str, m: &StandardModel, so2n1: &LieAlgebraBasis, s: &Subspace) -> Check {
    let w = match isotropic_normal_form_complex(m, s) {
        Ok(w) => w,
        Err(e) => return Check::failed(name, e),
    };
    let json = match round_trip(&w) {
        Ok(v) => v,
        Err(e) => return Check::failed(name, e),
    };
    let want = m.manifold_dim();
    let mut c = match tangent_dim_grassmann(so2n1, s, Some(m.b())) {
        Ok(d) => Check::new(
            name,
            d == want,
            format!("maps to the normal form; complex tangent dim {d} of {want}"),
        ),
        Err(e) => Check::failed(name, e),
    };
    c.witness = Some(json);
    c
}

fn real_nf_check(name: &str, m: &StandardModel, so_pq: &LieAlgebraBasis, s: &Subspace) -> Check {
    let w = match isotropic_normal_form_real(m, s) {
        Ok(w) => w,
        Err(e) => return Check::failed(name, e),
    };
    let json = match round_trip(&w) {
        Ok(v) => v,
        Err(e) => return Check::failed(name, e),
    };
    let nf = m.normal_form_real().expect("isotropic model");
    let image = s.apply(&w.element);
    let reports = [s, &nf, &image]
        .into_iter()
        .map(|p| orbit_report(m, so_pq, "so(p,q)", &Point::Subspace(p.clone())))
        .collect::<Result<Vec<_>, _>>();
    let mut c = match reports {
        Ok(r) => {
            let open_flag = |x: &crate::orbits::OrbitReport| match x.stratum {
                Stratum::Signature { open, .. } => open,
                _ => false,
            };
            let ok = r.iter().all(|x| x.stratum == r[0].stratum)
                && r.iter().all(|x| x.tangent_dim == r[0].tangent_dim)
                && r.iter().all(|x| open_flag(x) == x.open)
                && r[0].open;
            let mut c = Check::new(
                name,
                ok,
                format!(
                    "stratum {} before, at the normal form and after; real tangent dim {} of {}",
                    r[0].stratum, r[0].tangent_dim, r[0].manifold_dim_real
                ),
            );
            c.orbit = Some(json!(r[0]));
            c
        }
        Err(e) => Check::failed(name, e),
    };
    c.witness = Some(json);
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(case: CaseName, n: Option<usize>, p: Option<usize>, q: Option<usize>) -> CampaignConfig {
        CampaignConfig::resolve(case, n, p, q).unwrap()
    }

    #[test]
    fn config_resolution() {
        let c = cfg(CaseName::ProjectivePq, None, Some(2), Some(1));
        assert_eq!((c.n, c.p, c.q), (3, 2, 1));
        let c = cfg(CaseName::Isotropic, Some(3), Some(3), None);
        assert_eq!((c.n, c.p, c.q), (3, 3, 2));
        assert!(CampaignConfig::resolve(CaseName::Isotropic, Some(2), Some(2), Some(2)).is_err());
        assert!(
            CampaignConfig::resolve(CaseName::ProjectivePq, Some(3), Some(1), Some(1)).is_err()
        );
        assert!(CampaignConfig::resolve(CaseName::Quadric7, Some(2), None, None).is_err());
        assert_eq!("quadric7".parse::<CaseName>().unwrap(), CaseName::Quadric7);
        assert!("quadric5".parse::<CaseName>().is_err());
        assert!(c.clone().with_samples(0).is_err());
        assert!(c.with_bound(0).is_err());
    }

    #[test]
    fn small_campaigns_pass_and_repeat() {
        let c = cfg(CaseName::ProjectiveSplit, Some(1), None, None)
            .with_samples(5)
            .unwrap()
            .with_seed(42);
        let a = run_campaign(&c).unwrap();
        assert!(a.passed(), "{}", a.to_json_string());
        assert_eq!(a.summary.pass, a.checks.len());
        let b = run_campaign(&c).unwrap();
        assert_eq!(a.to_json_string(), b.to_json_string());
        let strict = run_campaign(&c.with_strict(true)).unwrap();
        assert_eq!(strict.checks, a.checks);
    }
}

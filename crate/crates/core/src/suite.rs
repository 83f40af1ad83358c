//! Verification suites shared by the acceptance target and `qchev verify-suite`.
//!
//! Every suite returns one [`CaseResult`] per checked configuration, so callers can print a
//! summary line or write a CSV without knowing what the suite does.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::cartan::{CartanDatum, Weight, WeylGroup};
use crate::chevalley::{
    check_conditions_with, decompose_with, dimension_count, function_rank, has_double_root_weight, orbit_box,
    small_v_check, trace_family, verma_trace_series, TraceCache,
};
use crate::dynamical::{a_operator_rank1_direct, a_operator_rank1_formula, DynamicalWeyl};
use crate::error::{Error, Result};
use crate::intertwiner::HomSpace;
use crate::modules::{irreducible, WeightModule};
use crate::qfield::ExactScalar;
use crate::torus::TorusFunction;

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub suite: String,
    pub case: String,
    pub pass: bool,
    pub ms: u128,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub title: String,
    pub cases: Vec<CaseResult>,
    pub ms: u128,
}

impl SuiteResult {
    pub fn pass(&self) -> bool {
        !self.cases.is_empty() && self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub jobs: usize,
    /// Random combinations per configuration in the round-trip suite.
    pub samples: usize,
    /// Truncation depth of the Verma series comparison.
    pub depth: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 0, jobs: 1, samples: 100, depth: 10 }
    }
}

/// Suite identifiers with their one-line descriptions, in execution order.
pub const SUITES: &[(&str, &str)] = &[
    ("golden", "classical limit of rank-one adjoint traces, mu = 1..6"),
    ("hom-table", "dim Hom(L_l, L_l (x) L_2m) for m <= 3, l <= 10"),
    ("rank-one-operator", "Verma-derived A_s agrees with the product formula"),
    ("soundness", "generated trace functions pass conditions 1-3"),
    ("dimension-count", "condition kernel has dimension N - m + 1"),
    ("round-trip", "random combinations of traces decompose exactly"),
    ("injectivity", "trace functions are linearly independent"),
    ("cocycle", "cocycle, involutivity and word independence of the dynamical Weyl operators"),
    ("verma-series", "trace over L_mu equals the twisted alternating Verma sum"),
    ("small-v", "conditions 1 and 2 imply 3 for small V"),
];

/// Maps `f` over `items` on up to `jobs` threads, keeping the input order.
pub fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("suite worker panicked")).collect()
    })
}

fn case(suite: &str, name: String, run: impl FnOnce() -> Result<(bool, String)>) -> CaseResult {
    let t = Instant::now();
    let (pass, detail) = match run() {
        Ok(x) => x,
        Err(e) => (false, format!("error: {}", e)),
    };
    CaseResult { suite: suite.to_string(), case: name, pass, ms: t.elapsed().as_millis(), detail }
}

fn w1(x: i64) -> Weight {
    Weight(vec![x])
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A test configuration: a datum, a module `V` and the dominant weights to range over.
pub struct Config {
    pub label: String,
    pub v: WeightModule,
    pub mus: Vec<Weight>,
}

fn box_weights(rank: usize, max: i64) -> Vec<Weight> {
    let mut out = vec![Weight(vec![])];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..=max).map(move |k| {
                    let mut c = w.0.clone();
                    c.push(k);
                    Weight(c)
                })
            })
            .collect();
    }
    out
}

/// The configurations of the soundness, round-trip and injectivity suites.
pub fn standard_configs() -> Result<Vec<Config>> {
    let a1 = CartanDatum::rank_one();
    let mut out = Vec::new();
    for m in [1, 2] {
        out.push(Config {
            label: format!("A1 V=L{}", 2 * m),
            v: irreducible(&a1, &w1(2 * m))?,
            mus: (0..=8).map(w1).collect(),
        });
    }
    for (name, adj) in [("A2", vec![1, 1]), ("B2", vec![0, 2])] {
        let d = CartanDatum::from_name(name)?;
        out.push(Config {
            label: format!("{} V=adjoint", name),
            v: irreducible(&d, &Weight(adj))?,
            mus: box_weights(2, 2),
        });
    }
    Ok(out)
}

pub fn golden(_: &SuiteOptions) -> Result<Vec<CaseResult>> {
    let a1 = CartanDatum::rank_one();
    let v = irreducible(&a1, &w1(2))?;
    let z = v.weight_range(&w1(0)).start;
    Ok((1..=6)
        .map(|mu| {
            case("golden", format!("mu={}", mu), || {
                let h = HomSpace::new(&w1(mu), &v)?;
                let f = h.trace(&h.from_expectation(&[ExactScalar::one()])?)?;
                let got = f.classical_limit()?;
                let mut want: BTreeMap<Weight, Vec<BigRational>> = BTreeMap::new();
                for k in 0..=mu {
                    let nu = mu - 2 * k;
                    if nu != 0 {
                        let mut c = vec![rat(0, 1); v.dim()];
                        c[z] = rat(nu, mu);
                        want.insert(w1(nu), c);
                    }
                }
                let got: BTreeMap<_, _> = got
                    .into_iter()
                    .filter(|(_, c)| c.iter().any(|x| *x != rat(0, 1)))
                    .collect();
                Ok((got == want, format!("{} nonzero terms", want.len())))
            })
        })
        .collect())
}

pub fn hom_table(_: &SuiteOptions) -> Result<Vec<CaseResult>> {
    let a1 = CartanDatum::rank_one();
    let mut out = Vec::new();
    for m in 0..=3i64 {
        let v = irreducible(&a1, &w1(2 * m))?;
        out.push(case("hom-table", format!("m={}", m), || {
            let mut dims = Vec::new();
            let mut ok = true;
            for l in 0..=10i64 {
                let h = HomSpace::new(&w1(l), &v)?;
                let want = usize::from(l >= m);
                ok &= h.dimension() == want && h.kernel_characterization_dim() == want;
                dims.push(h.dimension().to_string());
            }
            Ok((ok, format!("dims {}", dims.join(""))))
        }));
    }
    Ok(out)
}

pub fn rank_one_operator(_: &SuiteOptions) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for m in 0..=3i64 {
        for l in m..=m + 6 {
            out.push(case("rank-one-operator", format!("m={} lambda={}", m, l), || {
                let depth = ((l + 1) as usize).max(m as usize);
                let direct = a_operator_rank1_direct(m, l, depth)?;
                let formula = a_operator_rank1_formula(m, l)?;
                Ok((direct == formula, direct.to_string()))
            }));
        }
    }
    Ok(out)
}

pub fn soundness(opts: &SuiteOptions) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for cfg in standard_configs()? {
        let dw = DynamicalWeyl::new(&cfg.v)?;
        out.extend(par_map(&cfg.mus, opts.jobs, |mu| {
            case("soundness", format!("{} mu={:?}", cfg.label, mu), || {
                let fam = trace_family(&cfg.v, std::slice::from_ref(mu))?;
                for (_, f) in &fam {
                    let rep = check_conditions_with(f, &cfg.v, &dw)?;
                    if let Some(c) = rep.first_failure() {
                        return Ok((false, format!("condition {} fails", c)));
                    }
                }
                Ok((true, format!("{} functions", fam.len())))
            })
        }));
    }
    Ok(out)
}

pub fn dimension(opts: &SuiteOptions) -> Result<Vec<CaseResult>> {
    let grid: Vec<(i64, i64)> = (0..=3).flat_map(|m| (0..=12).map(move |n| (m, n))).collect();
    Ok(par_map(&grid, opts.jobs, |&(m, n)| {
        case("dimension-count", format!("m={} N={}", m, n), || {
            let c = dimension_count(m, n)?;
            Ok((
                c.pass(),
                format!(
                    "expected {} kernel {} traces {} rank {}",
                    c.expected, c.kernel_dim, c.trace_count, c.trace_rank
                ),
            ))
        })
    }))
}

fn random_scalar(rng: &mut StdRng) -> ExactScalar {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-9i64..=9);
    }
    ExactScalar::from_rational(rat(n, rng.gen_range(1i64..=6)))
}

/// One random sample: a few `(mu, v)` pairs with distinct `mu` and admissible `v`.
fn random_terms(
    rng: &mut StdRng,
    spaces: &[(Weight, Vec<Vec<ExactScalar>>)],
) -> Vec<(Weight, Vec<ExactScalar>)> {
    let usable: Vec<&(Weight, Vec<Vec<ExactScalar>>)> = spaces.iter().filter(|(_, b)| !b.is_empty()).collect();
    let k = rng.gen_range(1..=usable.len().min(4));
    let mut picked: Vec<usize> = (0..usable.len()).collect();
    for i in 0..k {
        let j = rng.gen_range(i..picked.len());
        picked.swap(i, j);
    }
    let mut terms: Vec<(Weight, Vec<ExactScalar>)> = picked[..k]
        .iter()
        .map(|&i| {
            let (mu, basis) = usable[i];
            let mut v = vec![ExactScalar::zero(); basis[0].len()];
            for b in basis {
                let c = random_scalar(rng);
                for (a, x) in v.iter_mut().zip(b) {
                    *a += &(&c * x);
                }
            }
            (mu.clone(), v)
        })
        .collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    terms
}

pub fn round_trip(opts: &SuiteOptions) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for (ci, cfg) in standard_configs()?.into_iter().enumerate() {
        let mut cache = TraceCache::new(&cfg.v);
        let mut spaces = Vec::new();
        for mu in &cfg.mus {
            let h = HomSpace::new(mu, &cfg.v)?;
            let basis: Vec<Vec<ExactScalar>> =
                h.expectation_basis()?.iter().map(|phi| h.expectation_value(phi)).collect();
            spaces.push((mu.clone(), basis));
        }
        let mut rng = StdRng::seed_from_u64(opts.seed.wrapping_add(ci as u64));
        let t = Instant::now();
        let mut failed = Vec::new();
        let mut violations = 0;
        for s in 0..opts.samples {
            let terms = random_terms(&mut rng, &spaces);
            let mut f = TorusFunction::zero_for(&cfg.v);
            for (mu, v) in &terms {
                f = f.add(&cache.trace(mu, v)?);
            }
            match decompose_with(&f, &mut cache) {
                Ok(d) => {
                    let got: Vec<(Weight, Vec<ExactScalar>)> = d.terms.into_iter().map(|t| (t.mu, t.v)).collect();
                    if got != terms {
                        failed.push(s);
                    }
                }
                Err(Error::TheoremViolation(_)) => {
                    violations += 1;
                    failed.push(s);
                }
                Err(_) => failed.push(s),
            }
        }
        out.push(CaseResult {
            suite: "round-trip".into(),
            case: format!("{} samples={} seed={}", cfg.label, opts.samples, opts.seed),
            pass: failed.is_empty(),
            ms: t.elapsed().as_millis(),
            detail: if failed.is_empty() {
                "all samples reproduced".into()
            } else {
                format!("failed samples {:?}, theorem violations {}", failed, violations)
            },
        });
    }
    Ok(out)
}

pub fn injectivity(_: &SuiteOptions) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for cfg in standard_configs()? {
        out.push(case("injectivity", cfg.label.clone(), || {
            let fam: Vec<TorusFunction> = trace_family(&cfg.v, &cfg.mus)?.into_iter().map(|(_, f)| f).collect();
            let r = function_rank(&fam);
            Ok((r == fam.len(), format!("{} functions, rank {}", fam.len(), r)))
        }));
    }
    Ok(out)
}

/// The modules on which the dynamical Weyl group is checked symbolically.
pub fn cocycle_modules() -> Result<Vec<(String, WeightModule)>> {
    let a1 = CartanDatum::rank_one();
    let a2 = CartanDatum::from_name("A2")?;
    let b2 = CartanDatum::from_name("B2")?;
    Ok(vec![
        ("A1 V=L2".into(), irreducible(&a1, &w1(2))?),
        ("A1 V=L4".into(), irreducible(&a1, &w1(4))?),
        ("A1 V=L6".into(), irreducible(&a1, &w1(6))?),
        ("A2 V=adjoint".into(), irreducible(&a2, &Weight(vec![1, 1]))?),
        ("A2 V=L(3,0)".into(), irreducible(&a2, &Weight(vec![3, 0]))?),
        ("B2 V=adjoint".into(), irreducible(&b2, &Weight(vec![0, 2]))?),
        ("B2 V=L(1,0)".into(), irreducible(&b2, &Weight(vec![1, 0]))?),
    ])
}

pub fn cocycle(opts: &SuiteOptions) -> Result<Vec<CaseResult>> {
    let mods = cocycle_modules()?;
    Ok(par_map(&mods, opts.jobs, |(label, v)| {
        case("cocycle", label.clone(), || {
            let dw = DynamicalWeyl::new(v)?;
            let wg = WeylGroup::new(&v.datum);
            let ops: Vec<_> = wg.elements().iter().map(|w| dw.symbolic_unshifted(w)).collect();
            let mut pairs = 0;
            for (a, w1) in wg.elements().iter().enumerate() {
                for (b, w2) in wg.elements().iter().enumerate() {
                    let prod = wg.compose(w1, w2);
                    let p = wg.elements().iter().position(|x| *x == prod).expect("closed under products");
                    let rhs = ops[a].substitute_linear(&w2.matrix(&v.datum)).compose(&ops[b]);
                    if !ops[p].equals(&rhs) {
                        return Ok((false, format!("cocycle fails for {:?}, {:?}", w1.word, w2.word)));
                    }
                    pairs += 1;
                }
            }
            for w in wg.elements() {
                let words = wg.reduced_words(w);
                for word in &words[1..] {
                    if !dw.symbolic_unshifted_word(word).equals(&ops[wg.elements().iter().position(|x| x == w).unwrap()]) {
                        return Ok((false, format!("reduced words of {:?} disagree", w.word)));
                    }
                }
            }
            for i in 0..v.rank() {
                let s = crate::cartan::WeylElement::simple(i);
                let op = dw.symbolic_unshifted(&s);
                if !op.substitute_linear(&s.matrix(&v.datum)).compose(&op).is_identity() {
                    return Ok((false, format!("s{} is not an involution", i + 1)));
                }
            }
            Ok((true, format!("{} pairs, dim V[0] = {}", pairs, dw.zero_dim())))
        })
    }))
}

pub fn verma_series(opts: &SuiteOptions) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for m in [1i64, 2] {
        for mu in m..=m + 4 {
            out.push(case("verma-series", format!("V=L{} mu={} depth={}", 2 * m, mu, opts.depth), || {
                match verma_trace_series(m, mu, opts.depth) {
                    Ok(r) => Ok((
                        r.is_zero(),
                        format!("{} weights compared, residual at {:?}", r.compared, r.residual_support),
                    )),
                    Err(Error::Genericity(msg)) => Ok((true, format!("skipped: {}", msg))),
                    Err(e) => Err(e),
                }
            }));
        }
    }
    Ok(out)
}

pub fn small_v(_: &SuiteOptions) -> Result<Vec<CaseResult>> {
    let a1 = CartanDatum::rank_one();
    let a2 = CartanDatum::from_name("A2")?;
    let cases: Vec<(String, WeightModule, Vec<Weight>)> = vec![
        ("A1 V=L2".into(), irreducible(&a1, &w1(2))?, (-8..=8).map(w1).collect()),
        ("A2 V=adjoint".into(), irreducible(&a2, &Weight(vec![1, 1]))?, orbit_box(&a2, 3)),
    ];
    Ok(cases
        .into_iter()
        .map(|(label, v, support)| {
            case("small-v", label, || {
                if has_double_root_weight(&v) {
                    return Err(Error::Domain("module is not small".into()));
                }
                let r = small_v_check(&v, &support)?;
                Ok((
                    r.pass() && r.cond12_dim > 0,
                    format!(
                        "support {}, dim (1)+(2) = {}, dim (1)+(2)+(3) = {}, failures {}",
                        r.support_size, r.cond12_dim, r.cond123_dim, r.failures
                    ),
                ))
            })
        })
        .collect())
}

/// Runs one suite by name.
pub fn run(name: &str, opts: &SuiteOptions) -> Result<SuiteResult> {
    let t = Instant::now();
    let cases = match name {
        "golden" => golden(opts)?,
        "hom-table" => hom_table(opts)?,
        "rank-one-operator" => rank_one_operator(opts)?,
        "soundness" => soundness(opts)?,
        "dimension-count" => dimension(opts)?,
        "round-trip" => round_trip(opts)?,
        "injectivity" => injectivity(opts)?,
        "cocycle" => cocycle(opts)?,
        "verma-series" => verma_series(opts)?,
        "small-v" => small_v(opts)?,
        other => return Err(Error::Config(format!("unknown suite '{}'", other))),
    };
    let title = SUITES.iter().find(|(n, _)| *n == name).map(|(_, t)| t.to_string()).unwrap_or_default();
    Ok(SuiteResult { name: name.to_string(), title, cases, ms: t.elapsed().as_millis() })
}

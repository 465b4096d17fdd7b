//! Monte-Carlo runs: gadget failure rates, whole-block logical rates, and
//! the statistics used to read them.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decoders::code_lut::EnumerationCap;
use crate::decoders::{
    build_code_lut, build_cut_cat_lut, rule_decoder_for, CatDecoder, CodeLut, DecodeError, IdentityDecoder,
    LutDecoder, LutError,
};
use crate::frame::{trial_rng, EffectTable, Fault, NoiseModel, NoiseParams, Round2Source};
use crate::gadget::{GadgetError, GadgetSpec};
use crate::pauli::{residual_weight_mod_generator, BitVec, CssCode, GeneratorType};
use crate::verify::eval_upper_bound;
use crate::Scheme;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("min_failures must be at least 1")]
    MinFailures,
    #[error("slope fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("point {index} has a non-positive estimate")]
    NonPositive { index: usize },
    #[error("the code file has no LX/LZ rows, so logical failures cannot be detected")]
    MissingLogicals,
    #[error("no cut-cat decoder for distance {0}")]
    NoDecoder(usize),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error(transparent)]
    Lut(#[from] LutError),
    #[error(transparent)]
    Cap(#[from] EnumerationCap),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

/// Stopping rule shared by all Monte-Carlo runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub min_failures: u64,
    pub max_trials: u64,
    /// Size of the first batch; later batches double up to `max_batch`.
    pub first_batch: u64,
    pub max_batch: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { min_failures: 100, max_trials: 100_000_000, first_batch: 4096, max_batch: 1 << 21 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub trials: u64,
    pub failures: u64,
    pub seed: u64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// The trial cap was hit before `min_failures`.
    pub censored: bool,
}

impl TrialStats {
    pub fn new(trials: u64, failures: u64, seed: u64, censored: bool) -> Self {
        let estimate = if trials == 0 { 0.0 } else { failures as f64 / trials as f64 };
        let (ci_lo, ci_hi) = wilson_interval(failures, trials, Z95);
        Self { trials, failures, seed, estimate, ci_lo, ci_hi, censored }
    }

    /// Binomial standard error of the estimate.
    pub fn std_error(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        (self.estimate * (1.0 - self.estimate) / self.trials as f64).sqrt()
    }
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Runs batches of `trial(i)` until enough failures or the cap. Batch
/// boundaries depend only on the config, so results ignore thread count.
fn run_trials<F>(cfg: &McConfig, seed: u64, trial: F) -> Result<TrialStats, ExperimentError>
where
    F: Fn(&mut Vec<Fault>, u64) -> Result<bool, ExperimentError> + Sync,
{
    if cfg.min_failures == 0 {
        return Err(ExperimentError::MinFailures);
    }
    let (mut done, mut failures) = (0u64, 0u64);
    let mut batch = cfg.first_batch.max(1);
    while done < cfg.max_trials && failures < cfg.min_failures {
        let end = (done + batch).min(cfg.max_trials);
        failures += (done..end)
            .into_par_iter()
            .map_init(Vec::new, |buf, i| trial(buf, i).map(u64::from))
            .try_reduce(|| 0, |a, b| Ok(a + b))?;
        done = end;
        batch = (batch * 2).min(cfg.max_batch.max(1));
    }
    Ok(TrialStats::new(done, failures, seed, failures < cfg.min_failures))
}

/// The decoder a gadget spec calls for; distance 9 gets a synthesized LUT.
pub fn decoder_for(spec: &GadgetSpec) -> Result<Box<dyn CatDecoder>, ExperimentError> {
    if spec.scheme == Scheme::FullCat {
        return Ok(Box::new(IdentityDecoder { gamma: spec.gamma }));
    }
    if let Some(d) = rule_decoder_for(spec) {
        return Ok(d);
    }
    if !spec.adaptive && spec.base_rounds >= 2 {
        return Ok(Box::new(LutDecoder { lut: build_cut_cat_lut(spec)? }));
    }
    Err(ExperimentError::NoDecoder(spec.d))
}

/// One gadget outcome on its own support.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GadgetOutcome {
    /// Error left on the data after the cut-cat correction.
    pub data_x: u64,
    pub data_z: u64,
    pub correction: u64,
    pub gen_flip: bool,
}

/// A gadget with its noise model and decoder, ready for repeated sampling.
pub struct GadgetSim {
    pub gamma: usize,
    pub t: usize,
    table: EffectTable,
    noise: NoiseModel,
    decoder: Box<dyn CatDecoder>,
}

impl GadgetSim {
    pub fn new(spec: &GadgetSpec, decoder: Box<dyn CatDecoder>, params: &NoiseParams) -> Self {
        let g = spec.build();
        Self { gamma: spec.gamma, t: spec.t, table: EffectTable::new(&g), noise: NoiseModel::new(&g, params), decoder }
    }

    pub fn run(&self, seed: u64, trial: u64, buf: &mut Vec<Fault>) -> Result<GadgetOutcome, DecodeError> {
        self.noise.sample(seed, trial, buf);
        let (eff, af) = self.table.combine(buf);
        let syn = self.table.syndrome_of(&eff);
        let mut src = self.table.round2(&eff, af);
        let c = self.decoder.decode(&syn, &mut src as &mut dyn Round2Source)?.x_flips.to_u64();
        Ok(GadgetOutcome {
            data_x: eff.data_x ^ c,
            data_z: eff.data_z,
            correction: c,
            gen_flip: eff.gen_flip ^ src.gen_flip(),
        })
    }
}

/// Estimates Pr[coset weight of the corrected data error exceeds t].
pub fn run_gadget_mc(
    spec: &GadgetSpec,
    decoder: Box<dyn CatDecoder>,
    p_ft: f64,
    cfg: &McConfig,
    seed: u64,
) -> Result<TrialStats, ExperimentError> {
    if cfg.min_failures == 0 {
        return Err(ExperimentError::MinFailures);
    }
    if p_ft <= 0.0 {
        return Ok(TrialStats::new(cfg.max_trials, 0, seed, true));
    }
    let sim = GadgetSim::new(spec, decoder, &NoiseParams::gadget(p_ft));
    run_trials(cfg, seed, |buf, i| {
        let out = sim.run(seed, i, buf)?;
        Ok(residual_weight_mod_generator(out.data_x, sim.gamma) > sim.t)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub p: f64,
    pub p_ft: f64,
    pub stats: TrialStats,
    pub bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    /// Fit over the uncensored points with failures, when at least three exist.
    pub slope: Option<(f64, f64)>,
}

impl SweepResult {
    pub fn new(mut points: Vec<SweepPoint>) -> Self {
        points.sort_by(|a, b| a.p.total_cmp(&b.p));
        let usable: Vec<(f64, f64)> =
            points.iter().filter(|pt| !pt.stats.censored && pt.stats.failures > 0).map(|pt| (pt.p, pt.stats.estimate)).collect();
        let slope = fit_slope(&usable).ok();
        Self { points, slope }
    }

    pub fn write_csv(&self, out: impl Write) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for pt in &self.points {
            w.serialize(CsvRow {
                p: pt.p,
                p_ft: pt.p_ft,
                trials: pt.stats.trials,
                failures: pt.stats.failures,
                estimate: pt.stats.estimate,
                ci_lo: pt.stats.ci_lo,
                ci_hi: pt.stats.ci_hi,
                bound: pt.bound,
            })?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Serialize)]
struct CsvRow {
    p: f64,
    p_ft: f64,
    trials: u64,
    failures: u64,
    estimate: f64,
    ci_lo: f64,
    ci_hi: f64,
    bound: Option<f64>,
}

/// Seed of sweep point `i`, so points are independent of each other.
pub fn point_seed(seed: u64, i: usize) -> u64 {
    trial_rng(seed, u64::MAX - i as u64).random()
}

/// Gadget failure rate at each `p_ft`, alongside the analytic bound.
pub fn sweep_gadget(spec: &GadgetSpec, ps: &[f64], cfg: &McConfig, seed: u64) -> Result<SweepResult, ExperimentError> {
    let mut points = Vec::with_capacity(ps.len());
    for (i, &p) in ps.iter().enumerate() {
        let stats = run_gadget_mc(spec, decoder_for(spec)?, p, cfg, point_seed(seed, i))?;
        points.push(SweepPoint { p, p_ft: p, stats, bound: Some(eval_upper_bound(spec.gamma, spec.t, p)) });
    }
    Ok(SweepResult::new(points))
}

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| match i {
                0 => lo,
                i if i == n - 1 => hi,
                i => (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp(),
            })
            .collect(),
    }
}

/// Least-squares slope of `ln(estimate)` against `ln(p)`, with its standard error.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<(f64, f64), ExperimentError> {
    if points.len() < 3 {
        return Err(ExperimentError::TooFewPoints(points.len()));
    }
    if let Some(index) = points.iter().position(|&(p, e)| p <= 0.0 || e <= 0.0) {
        return Err(ExperimentError::NonPositive { index });
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok((slope, (ssr / (n - 2.0) / sxx).sqrt()))
}

/// Outcome of the repeat-until-stable protocol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableSyndrome {
    pub syndrome: BitVec,
    pub rounds: usize,
    /// False when `max_rounds` ran out; `syndrome` is then the last one seen.
    pub stable: bool,
}

/// Repeats `extract` until one value comes out `t + 1` times in a row.
pub fn repeat_until_stable(mut extract: impl FnMut(usize) -> BitVec, t: usize, max_rounds: usize) -> StableSyndrome {
    let max_rounds = max_rounds.max(t + 1);
    let mut last = extract(0);
    let mut run = 1;
    let mut rounds = 1;
    while run < t + 1 && rounds < max_rounds {
        let s = extract(rounds);
        rounds += 1;
        if s == last {
            run += 1;
        } else {
            last = s;
            run = 1;
        }
    }
    StableSyndrome { syndrome: last, rounds, stable: run == t + 1 }
}

/// Which gadget measures which generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetAssignment {
    /// Generators at least this heavy use the cut-cat gadget, the rest a full cat.
    pub cut_cat_min_weight: usize,
}

impl Default for GadgetAssignment {
    fn default() -> Self {
        Self { cut_cat_min_weight: 7 }
    }
}

impl GadgetAssignment {
    pub fn scheme_for(&self, weight: usize) -> Scheme {
        if weight >= self.cut_cat_min_weight {
            Scheme::CutCat
        } else {
            Scheme::FullCat
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockConfig {
    /// `p_ft = p / ratio`.
    pub ratio: f64,
    pub assignment: GadgetAssignment,
    /// Extraction rounds before giving up on a stable syndrome; `(t+1)^2` if unset.
    pub max_rounds: Option<usize>,
}

impl Default for BlockConfig {
    fn default() -> Self {
        Self { ratio: 20.0, assignment: GadgetAssignment::default(), max_rounds: None }
    }
}

struct Generator {
    kind: GeneratorType,
    row: BitVec,
    support: Vec<usize>,
    sim: GadgetSim,
}

/// Data block, gadgets and code decoder for one physical error rate.
pub struct BlockSim<'c> {
    code: &'c CssCode,
    lut: &'c CodeLut,
    p: f64,
    gens: Vec<Generator>,
    max_rounds: usize,
}

/// One decoder per gadget shape, synthesized once.
pub struct BlockDecoders {
    lut: CodeLut,
    specs: Vec<GadgetSpec>,
}

impl BlockDecoders {
    pub fn new(code: &CssCode, assignment: &GadgetAssignment) -> Result<Self, ExperimentError> {
        if !code.has_logicals() {
            return Err(ExperimentError::MissingLogicals);
        }
        let specs = (0..code.num_generators())
            .map(|i| {
                let w = code.generator(i).1.count_ones();
                match assignment.scheme_for(w) {
                    Scheme::CutCat => GadgetSpec::cut_cat(w, code.d),
                    Scheme::FullCat => GadgetSpec::full_cat(w, code.d),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { lut: build_code_lut(code)?, specs })
    }

    pub fn specs(&self) -> &[GadgetSpec] {
        &self.specs
    }
}

impl<'c> BlockSim<'c> {
    pub fn new(code: &'c CssCode, decoders: &'c BlockDecoders, p: f64, cfg: &BlockConfig) -> Result<Self, ExperimentError> {
        let params = NoiseParams::block(p / cfg.ratio);
        let mut luts: Vec<(GadgetSpec, crate::decoders::CutCatLut)> = Vec::new();
        let mut gens = Vec::with_capacity(decoders.specs.len());
        for (i, spec) in decoders.specs.iter().enumerate() {
            let (kind, row) = code.generator(i);
            let decoder: Box<dyn CatDecoder> = if spec.scheme == Scheme::CutCat && spec.base_rounds >= 2 {
                // distance 9 and up: reuse a LUT built for the same shape
                let lut = match luts.iter().find(|(s, _)| s == spec) {
                    Some((_, l)) => l.clone(),
                    None => {
                        let l = build_cut_cat_lut(spec)?;
                        luts.push((spec.clone(), l.clone()));
                        l
                    }
                };
                Box::new(LutDecoder { lut })
            } else {
                decoder_for(spec)?
            };
            gens.push(Generator { kind, row: row.clone(), support: row.iter_ones().collect(), sim: GadgetSim::new(spec, decoder, &params) });
        }
        let t = code.t();
        Ok(Self { code, lut: &decoders.lut, p, gens, max_rounds: cfg.max_rounds.unwrap_or((t + 1) * (t + 1)) })
    }

    fn depolarize(&self, x: &mut BitVec, z: &mut BitVec, seed: u64) {
        if self.p <= 0.0 {
            return;
        }
        let mut rng = trial_rng(seed, u64::MAX);
        for q in 0..self.code.n {
            if rng.random::<f64>() < self.p {
                let k = rng.random_range(1..4u8);
                if k & 1 != 0 {
                    x.flip(q);
                }
                if k & 2 != 0 {
                    z.flip(q);
                }
            }
        }
    }

    /// Measures every generator once, applying each gadget's residual error.
    fn extract(&self, x: &mut BitVec, z: &mut BitVec, seed: u64, round: usize, buf: &mut Vec<Fault>) -> Result<BitVec, DecodeError> {
        let mut bits = BitVec::zeros(self.gens.len());
        for (i, g) in self.gens.iter().enumerate() {
            let out = g.sim.run(seed, (round * self.gens.len() + i) as u64, buf)?;
            // an X-type check reads Z errors, and its hook errors are X errors
            let (hook, other) = match g.kind {
                GeneratorType::X => (&mut *x, &mut *z),
                GeneratorType::Z => (&mut *z, &mut *x),
            };
            bits.set(i, g.row.dot(other) ^ out.gen_flip);
            for (j, &q) in g.support.iter().enumerate() {
                if out.data_x >> j & 1 == 1 {
                    hook.flip(q);
                }
                if out.data_z >> j & 1 == 1 {
                    other.flip(q);
                }
            }
        }
        Ok(bits)
    }

    fn correct(&self, x: &mut BitVec, z: &mut BitVec, syndrome: &BitVec) {
        let nx = self.code.hx.len();
        let sx = BitVec::from_indices(nx, (0..nx).filter(|&i| syndrome.get(i)));
        let nz = self.code.hz.len();
        let sz = BitVec::from_indices(nz, (0..nz).filter(|&i| syndrome.get(nx + i)));
        if let Some(e) = self.lut.z_error(&sx) {
            z.xor_assign(e);
        }
        if let Some(e) = self.lut.x_error(&sz) {
            x.xor_assign(e);
        }
    }

    fn ideal_syndrome(&self, x: &BitVec, z: &BitVec) -> BitVec {
        let nx = self.code.hx.len();
        BitVec::from_indices(
            self.code.num_generators(),
            (0..self.code.num_generators()).filter(|&i| if i < nx { self.code.hx[i].dot(z) } else { self.code.hz[i - nx].dot(x) }),
        )
    }

    /// One block trial; true on a logical failure.
    pub fn trial(&self, seed: u64, trial: u64, buf: &mut Vec<Fault>) -> Result<bool, DecodeError> {
        let seed = trial_rng(seed, trial).random::<u64>();
        let n = self.code.n;
        let (mut x, mut z) = (BitVec::zeros(n), BitVec::zeros(n));
        self.depolarize(&mut x, &mut z, seed);
        let mut err = None;
        let accepted = repeat_until_stable(
            |round| match self.extract(&mut x, &mut z, seed, round, buf) {
                Ok(s) => s,
                Err(e) => {
                    err.get_or_insert(e);
                    BitVec::zeros(self.gens.len())
                }
            },
            self.code.t(),
            self.max_rounds,
        );
        if let Some(e) = err {
            return Err(e);
        }
        self.correct(&mut x, &mut z, &accepted.syndrome);
        let ideal = self.ideal_syndrome(&x, &z);
        self.correct(&mut x, &mut z, &ideal);
        Ok(self.code.lz.iter().any(|l| l.dot(&x)) || self.code.lx.iter().any(|l| l.dot(&z)))
    }
}

/// Logical failure rate of a code block at data error rate `p`.
pub fn run_block_mc(
    code: &CssCode,
    decoders: &BlockDecoders,
    p: f64,
    block: &BlockConfig,
    cfg: &McConfig,
    seed: u64,
) -> Result<TrialStats, ExperimentError> {
    if cfg.min_failures == 0 {
        return Err(ExperimentError::MinFailures);
    }
    if p <= 0.0 {
        return Ok(TrialStats::new(cfg.max_trials, 0, seed, true));
    }
    let sim = BlockSim::new(code, decoders, p, block)?;
    run_trials(cfg, seed, |buf, i| Ok(sim.trial(seed, i, buf)?))
}

pub fn sweep_block(
    code: &CssCode,
    ps: &[f64],
    block: &BlockConfig,
    cfg: &McConfig,
    seed: u64,
) -> Result<SweepResult, ExperimentError> {
    let decoders = BlockDecoders::new(code, &block.assignment)?;
    let mut points = Vec::with_capacity(ps.len());
    for (i, &p) in ps.iter().enumerate() {
        let stats = run_block_mc(code, &decoders, p, block, cfg, point_seed(seed, i))?;
        points.push(SweepPoint { p, p_ft: p / block.ratio, stats, bound: None });
    }
    Ok(SweepResult::new(points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::steane_code;

    fn bits(s: &str) -> BitVec {
        BitVec::from_indices(s.len(), s.char_indices().filter(|&(_, c)| c == '1').map(|(i, _)| i))
    }

    #[test]
    fn slope_of_exact_powers() {
        let ps = log_spaced(1e-3, 1e-2, 4);
        for k in [2, 3] {
            let pts: Vec<(f64, f64)> = ps.iter().map(|&p| (p, 5.0 * p.powi(k))).collect();
            let (s, se) = fit_slope(&pts).unwrap();
            assert!((s - k as f64).abs() < 1e-9, "{s}");
            assert!(se < 1e-6);
        }
        assert!(matches!(fit_slope(&[(1e-3, 1e-6)]), Err(ExperimentError::TooFewPoints(1))));
        assert!(matches!(
            fit_slope(&[(1e-3, 1e-6), (2e-3, 0.0), (3e-3, 1e-5)]),
            Err(ExperimentError::NonPositive { index: 1 })
        ));
    }

    #[test]
    fn log_spacing_hits_endpoints() {
        let v = log_spaced(1e-3, 1e-2, 5);
        assert_eq!((v[0], v[4]), (1e-3, 1e-2));
        assert!(v.windows(2).all(|w| (w[1] / w[0] - 10f64.powf(0.25)).abs() < 1e-12));
        assert_eq!(log_spaced(0.5, 1.0, 1), vec![0.5]);
    }

    #[test]
    fn stable_after_t_plus_one_repeats() {
        let seq = ["010", "010", "110", "110", "110"];
        let out = repeat_until_stable(|r| bits(seq[r]), 2, 10);
        assert_eq!(out, StableSyndrome { syndrome: bits("110"), rounds: 5, stable: true });
        let out = repeat_until_stable(|_| bits("1"), 0, 10);
        assert_eq!((out.rounds, out.stable), (1, true));
        let out = repeat_until_stable(|r| BitVec::from_u64(4, r as u64), 1, 4);
        assert_eq!(out, StableSyndrome { syndrome: BitVec::from_u64(4, 3), rounds: 4, stable: false });
    }

    #[test]
    fn wilson_examples() {
        let (lo, hi) = wilson_interval(0, 100, Z95);
        assert!(lo.abs() < 1e-15);
        assert!((hi - 0.036_994).abs() < 1e-5, "{hi}");
        let (lo, hi) = wilson_interval(50, 100, Z95);
        assert!((lo - 0.403_832).abs() < 1e-5 && (hi - 0.596_168).abs() < 1e-5);
        assert_eq!(wilson_interval(0, 0, Z95), (0.0, 1.0));
    }

    #[test]
    fn zero_noise_is_censored() {
        let spec = GadgetSpec::cut_cat(6, 3).unwrap();
        let cfg = McConfig::default();
        let st = run_gadget_mc(&spec, decoder_for(&spec).unwrap(), 0.0, &cfg, 1).unwrap();
        assert_eq!((st.failures, st.trials, st.censored), (0, cfg.max_trials, true));
        let bad = McConfig { min_failures: 0, ..cfg };
        assert!(matches!(run_gadget_mc(&spec, decoder_for(&spec).unwrap(), 0.01, &bad, 1), Err(ExperimentError::MinFailures)));
    }

    #[test]
    fn trial_cap_censors() {
        let spec = GadgetSpec::cut_cat(6, 3).unwrap();
        let cfg = McConfig { min_failures: 1_000_000, max_trials: 5000, ..McConfig::default() };
        let st = run_gadget_mc(&spec, decoder_for(&spec).unwrap(), 1e-3, &cfg, 3).unwrap();
        assert_eq!(st.trials, 5000);
        assert!(st.censored);
    }

    #[test]
    fn sweeps_are_deterministic() {
        let spec = GadgetSpec::cut_cat(8, 5).unwrap();
        let cfg = McConfig { min_failures: 20, ..McConfig::default() };
        let ps = [0.01, 0.02, 0.04];
        let a = sweep_gadget(&spec, &ps, &cfg, 9).unwrap();
        assert_eq!(a, sweep_gadget(&spec, &ps, &cfg, 9).unwrap());
        assert_ne!(a.points[0].stats, sweep_gadget(&spec, &ps, &cfg, 10).unwrap().points[0].stats);
        let mut x = Vec::new();
        let mut y = Vec::new();
        a.write_csv(&mut x).unwrap();
        sweep_gadget(&spec, &ps, &cfg, 9).unwrap().write_csv(&mut y).unwrap();
        assert_eq!(x, y);
        assert!(String::from_utf8(x).unwrap().starts_with("p,p_ft,trials,failures,estimate,ci_lo,ci_hi,bound\n"));
    }

    #[test]
    fn full_cat_never_corrects() {
        let spec = GadgetSpec::full_cat(6, 3).unwrap();
        assert_eq!(decoder_for(&spec).unwrap().name(), "identity");
        assert!(matches!(decoder_for(&GadgetSpec::with_rounds(14, 7, 1).unwrap()), Err(ExperimentError::NoDecoder(7))));
    }

    #[test]
    fn steane_block_runs() {
        let code = steane_code();
        let cfg = McConfig { min_failures: 5, ..McConfig::default() };
        let r = sweep_block(&code, &[0.05], &BlockConfig::default(), &cfg, 4).unwrap();
        let pt = r.points[0];
        assert_eq!(pt.p_ft, 0.05 / 20.0);
        assert!(pt.stats.failures >= 5 && pt.bound.is_none());
    }
}

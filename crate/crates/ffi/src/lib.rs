//! C ABI for bax-core.
//!
//! Every fallible function returns a [`BaxStatus`]; on anything other than
//! `BAX_STATUS_OK` a description is available from [`bax_last_error_message`]
//! on the same thread. Objects are handed out as opaque pointers and must be
//! released with the matching `*_free` function. Points are passed as a
//! pointer to `dim` contiguous doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::sync::Arc;

use bax_core::gp::{
    gaussian_entropy, Evidence, GPModel, KernelKind, KernelSpec, LazyFunctionSample, Posterior,
};
use bax_core::harness::{execute_experiment, parse_config, write_results, ResultsTable};
use bax_core::problems::{eval_benchmark, BenchmarkFn};
use bax_core::BaxError;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Numerical = 3,
    Config = 4,
    Contract = 5,
    NoPath = 6,
    Parse = 7,
    Io = 8,
    InvalidUtf8 = 9,
    Panic = 10,
}

/// Kernel family selector for [`bax_model_new`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaxKernel {
    SquaredExponential = 0,
    Matern52 = 1,
}

/// GP prior.
pub struct BaxModel(GPModel);

/// Growable set of noisy and noiseless observations.
pub struct BaxEvidence(Evidence);

/// GP posterior given a model and evidence.
pub struct BaxPosterior(Arc<Posterior>);

/// A posterior function draw, realized lazily point by point.
pub struct BaxSample(LazyFunctionSample);

/// A named benchmark objective.
pub struct BaxBenchmark(BenchmarkFn);

/// Results of a configured experiment.
pub struct BaxResults(ResultsTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &BaxError) -> BaxStatus {
    match e {
        BaxError::Input(_) => BaxStatus::InvalidInput,
        BaxError::Numerical { .. } => BaxStatus::Numerical,
        BaxError::Config(_) => BaxStatus::Config,
        BaxError::Contract(_) => BaxStatus::Contract,
        BaxError::NoPath { .. } => BaxStatus::NoPath,
        BaxError::Parse { .. } => BaxStatus::Parse,
        BaxError::Io { .. } => BaxStatus::Io,
    }
}

struct Failure(BaxStatus, String);

impl From<BaxError> for Failure {
    fn from(e: BaxError) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard<F>(f: F) -> BaxStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BaxStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            BaxStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(BaxStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn deref_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn string<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(BaxStatus::InvalidUtf8, format!("`{what}`: {e}")))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn free_box<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message for the most recent failure on this thread, or null after a
/// successful call. The pointer stays valid until the next call into this
/// library from the same thread.
#[no_mangle]
pub extern "C" fn bax_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static, NUL-terminated name of a status code.
#[no_mangle]
pub extern "C" fn bax_status_name(status: BaxStatus) -> *const c_char {
    let s: &'static CStr = match status {
        BaxStatus::Ok => c"ok",
        BaxStatus::NullPointer => c"null pointer",
        BaxStatus::InvalidInput => c"invalid input",
        BaxStatus::Numerical => c"numerical failure",
        BaxStatus::Config => c"configuration error",
        BaxStatus::Contract => c"contract violation",
        BaxStatus::NoPath => c"no path",
        BaxStatus::Parse => c"parse error",
        BaxStatus::Io => c"I/O error",
        BaxStatus::InvalidUtf8 => c"invalid UTF-8",
        BaxStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Creates a GP prior. `lengthscales` holds either one value (isotropic) or
/// one per input dimension.
///
/// # Safety
/// `lengthscales` must point to `num_lengthscales` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bax_model_new(
    kernel: BaxKernel,
    lengthscales: *const f64,
    num_lengthscales: usize,
    signal_variance: f64,
    prior_mean: f64,
    noise_variance: f64,
    out: *mut *mut BaxModel,
) -> BaxStatus {
    guard(|| {
        let ls = slice(lengthscales, num_lengthscales, "lengthscales")?.to_vec();
        let kind = match kernel {
            BaxKernel::SquaredExponential => KernelKind::SquaredExponential,
            BaxKernel::Matern52 => KernelKind::Matern52,
        };
        let model = GPModel::new(
            KernelSpec::new(kind, ls, signal_variance)?,
            prior_mean,
            noise_variance,
        )?;
        write_out(out, Box::into_raw(Box::new(BaxModel(model))), "out")
    })
}

/// # Safety
/// `model` must come from [`bax_model_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bax_model_free(model: *mut BaxModel) {
    free_box(model);
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bax_evidence_new(out: *mut *mut BaxEvidence) -> BaxStatus {
    guard(|| {
        write_out(
            out,
            Box::into_raw(Box::new(BaxEvidence(Evidence::new()))),
            "out",
        )
    })
}

/// Adds a noisy observation `y` at `x`.
///
/// # Safety
/// `evidence` must be a live handle and `x` must point to `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn bax_evidence_push_noisy(
    evidence: *mut BaxEvidence,
    x: *const f64,
    dim: usize,
    y: f64,
) -> BaxStatus {
    guard(|| {
        let ev = deref_mut(evidence, "evidence")?;
        ev.0.push_noisy(slice(x, dim, "x")?.to_vec(), y);
        Ok(())
    })
}

/// Adds an exact function value `fz` at `z`.
///
/// # Safety
/// `evidence` must be a live handle and `z` must point to `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn bax_evidence_push_noiseless(
    evidence: *mut BaxEvidence,
    z: *const f64,
    dim: usize,
    fz: f64,
) -> BaxStatus {
    guard(|| {
        let ev = deref_mut(evidence, "evidence")?;
        ev.0.push_noiseless(slice(z, dim, "z")?.to_vec(), fz);
        Ok(())
    })
}

/// # Safety
/// `evidence` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bax_evidence_len(
    evidence: *const BaxEvidence,
    out: *mut usize,
) -> BaxStatus {
    guard(|| write_out(out, deref(evidence, "evidence")?.0.len(), "out"))
}

/// # Safety
/// `evidence` must come from [`bax_evidence_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bax_evidence_free(evidence: *mut BaxEvidence) {
    free_box(evidence);
}

/// Conditions `model` on `evidence`. Both handles remain owned by the caller.
///
/// # Safety
/// Both handles must be live and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bax_posterior_new(
    model: *const BaxModel,
    evidence: *const BaxEvidence,
    out: *mut *mut BaxPosterior,
) -> BaxStatus {
    guard(|| {
        let m = deref(model, "model")?;
        let e = deref(evidence, "evidence")?;
        let post = Posterior::new(&m.0, &e.0)?;
        write_out(
            out,
            Box::into_raw(Box::new(BaxPosterior(Arc::new(post)))),
            "out",
        )
    })
}

/// Predictive mean and variance at `x`. With `predict_observation` nonzero
/// the observation noise is included in the variance.
///
/// # Safety
/// `posterior` must be live, `x` must point to `dim` doubles, outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn bax_posterior_marginal(
    posterior: *const BaxPosterior,
    x: *const f64,
    dim: usize,
    predict_observation: bool,
    mean: *mut f64,
    variance: *mut f64,
) -> BaxStatus {
    guard(|| {
        let p = deref(posterior, "posterior")?;
        let m = p.0.marginal(slice(x, dim, "x")?, predict_observation)?;
        write_out(mean, m.mean, "mean")?;
        write_out(variance, m.variance, "variance")
    })
}

/// # Safety
/// `posterior` must come from [`bax_posterior_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bax_posterior_free(posterior: *mut BaxPosterior) {
    free_box(posterior);
}

/// Differential entropy in nats of a normal with the given variance.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bax_gaussian_entropy(variance: f64, out: *mut f64) -> BaxStatus {
    guard(|| write_out(out, gaussian_entropy(variance)?, "out"))
}

/// Starts a seeded posterior function draw. The sample keeps its own
/// reference to the posterior, so the posterior handle may be freed first.
///
/// # Safety
/// `posterior` must be live and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bax_sample_new(
    posterior: *const BaxPosterior,
    seed: u64,
    out: *mut *mut BaxSample,
) -> BaxStatus {
    guard(|| {
        let p = deref(posterior, "posterior")?;
        let s = LazyFunctionSample::from_posterior(Arc::clone(&p.0), seed);
        write_out(out, Box::into_raw(Box::new(BaxSample(s))), "out")
    })
}

/// Value of the sampled function at `x`, consistent with every earlier query.
///
/// # Safety
/// `sample` must be live, `x` must point to `dim` doubles, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bax_sample_query(
    sample: *mut BaxSample,
    x: *const f64,
    dim: usize,
    out: *mut f64,
) -> BaxStatus {
    guard(|| {
        let s = deref_mut(sample, "sample")?;
        let v = s.0.query(slice(x, dim, "x")?)?;
        write_out(out, v, "out")
    })
}

/// # Safety
/// `sample` must come from [`bax_sample_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bax_sample_free(sample: *mut BaxSample) {
    free_box(sample);
}

/// Looks up a benchmark objective by name, e.g. `"branin"`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bax_benchmark_new(
    name: *const c_char,
    out: *mut *mut BaxBenchmark,
) -> BaxStatus {
    guard(|| {
        let f = BenchmarkFn::from_name(string(name, "name")?)?;
        write_out(out, Box::into_raw(Box::new(BaxBenchmark(f))), "out")
    })
}

/// Input dimension of the benchmark.
///
/// # Safety
/// `benchmark` must be live and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bax_benchmark_dim(
    benchmark: *const BaxBenchmark,
    out: *mut usize,
) -> BaxStatus {
    guard(|| write_out(out, deref(benchmark, "benchmark")?.0.dim(), "out"))
}

/// Writes the benchmark's box bounds into `lower` and `upper`, each of length `dim`.
///
/// # Safety
/// `benchmark` must be live and `lower`/`upper` must each hold `dim` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn bax_benchmark_bounds(
    benchmark: *const BaxBenchmark,
    lower: *mut f64,
    upper: *mut f64,
    dim: usize,
) -> BaxStatus {
    guard(|| {
        let b = deref(benchmark, "benchmark")?;
        let d = b.0.domain();
        if dim != d.dim() {
            return Err(
                BaxError::Input(format!("benchmark has dimension {}, got {dim}", d.dim())).into(),
            );
        }
        if lower.is_null() || upper.is_null() {
            return Err(null("lower/upper"));
        }
        ptr::copy_nonoverlapping(d.lower.as_ptr(), lower, dim);
        ptr::copy_nonoverlapping(d.upper.as_ptr(), upper, dim);
        Ok(())
    })
}

/// Evaluates the benchmark at `x`.
///
/// # Safety
/// `benchmark` must be live, `x` must point to `dim` doubles, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bax_benchmark_eval(
    benchmark: *const BaxBenchmark,
    x: *const f64,
    dim: usize,
    out: *mut f64,
) -> BaxStatus {
    guard(|| {
        let b = deref(benchmark, "benchmark")?;
        write_out(out, eval_benchmark(&b.0, slice(x, dim, "x")?)?, "out")
    })
}

/// # Safety
/// `benchmark` must come from [`bax_benchmark_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bax_benchmark_free(benchmark: *mut BaxBenchmark) {
    free_box(benchmark);
}

/// Runs the experiment in the TOML file at `config_path`. When `out_dir` is
/// non-null the results files are written there too. `trials` and `seed`
/// override the config when nonnegative.
///
/// Runs that abort are recorded in the results rather than failing the call.
///
/// # Safety
/// `config_path` must be a NUL-terminated string, `out_dir` null or one, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bax_experiment_run(
    config_path: *const c_char,
    out_dir: *const c_char,
    trials: i64,
    seed: i64,
    out: *mut *mut BaxResults,
) -> BaxStatus {
    guard(|| {
        let path = string(config_path, "config_path")?;
        let dir = if out_dir.is_null() {
            None
        } else {
            Some(string(out_dir, "out_dir")?)
        };
        if out.is_null() {
            return Err(null("out"));
        }
        let mut cfg = parse_config(Path::new(path))?;
        if trials >= 0 {
            cfg.trials = trials as usize;
        }
        if seed >= 0 {
            cfg.base_seed = seed as u64;
        }
        let cfg = cfg.resolve()?;
        let table = execute_experiment(&cfg)?;
        if let Some(d) = dir {
            write_results(&table, Some(&cfg), d)?;
        }
        write_out(out, Box::into_raw(Box::new(BaxResults(table))), "out")
    })
}

/// Number of metric rows in the results.
///
/// # Safety
/// `results` must be live and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bax_results_row_count(
    results: *const BaxResults,
    out: *mut usize,
) -> BaxStatus {
    guard(|| write_out(out, deref(results, "results")?.0.rows.len(), "out"))
}

/// Number of runs that aborted.
///
/// # Safety
/// `results` must be live and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bax_results_failure_count(
    results: *const BaxResults,
    out: *mut usize,
) -> BaxStatus {
    guard(|| write_out(out, deref(results, "results")?.0.failures.len(), "out"))
}

/// Mean and standard error across trials of `metric` for `method` at the
/// last recorded iteration.
///
/// # Safety
/// `results` must be live, strings NUL-terminated, outputs writable.
#[no_mangle]
pub unsafe extern "C" fn bax_results_final(
    results: *const BaxResults,
    method: *const c_char,
    metric: *const c_char,
    iteration: *mut usize,
    mean: *mut f64,
    std_err: *mut f64,
) -> BaxStatus {
    guard(|| {
        let r = deref(results, "results")?;
        let method = string(method, "method")?;
        let metric = string(metric, "metric")?;
        let last =
            r.0.summarize(method, metric)
                .last()
                .cloned()
                .ok_or_else(|| {
                    Failure(
                        BaxStatus::InvalidInput,
                        format!("no rows for method `{method}` and metric `{metric}`"),
                    )
                })?;
        write_out(iteration, last.iteration, "iteration")?;
        write_out(mean, last.mean, "mean")?;
        write_out(std_err, last.std_err, "std_err")
    })
}

/// # Safety
/// `results` must come from [`bax_experiment_run`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bax_results_free(results: *mut BaxResults) {
    free_box(results);
}

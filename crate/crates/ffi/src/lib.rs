//! C ABI for the simulator: opaque config handles, integer status codes, and
//! a thread-local last-error message.
//!
//! Conventions:
//! - Every fallible function returns a `FlashStatus`; `FLASH_STATUS_OK` is 0.
//! - On failure, `flashsim_last_error()` returns a message for the calling
//!   thread, valid until the next failing call on that thread.
//! - `FlashConfig` is opaque; create it with one of the constructors and
//!   release it with `flashsim_config_free`.
//! - Strings returned by `flashsim_*_to_toml` are owned by the caller and
//!   must be released with `flashsim_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};


use flashsim::config::ExperimentConfig;
use flashsim::error::Error;
use flashsim::output::{run_to_dir, RunManifest};

/// Status codes mirroring the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlashStatus {
    Ok = 0,
    /// Invalid configuration (bad key, range, file).
    ConfigError = 1,
    /// The experiment itself failed.
    RuntimeError = 2,
    /// Null pointer or malformed UTF-8 from the caller.
    InvalidArgument = 3,
}

/// Opaque experiment configuration handle.
pub struct FlashConfig {
    inner: ExperimentConfig,
}

/// Summary of one completed run.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlashSummary {
    /// Best held-out test accuracy (federated mode).
    pub best_accuracy: f64,
    /// Round at which the best accuracy was reached.
    pub best_round: u64,
    /// Total simulated seconds across executed rounds.
    pub total_simulated_seconds: f64,
    /// Final cumulative regret (regret mode).
    pub final_cumulative_regret: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> FlashStatus {
    match err.exit_code() {
        1 => FlashStatus::ConfigError,
        _ => FlashStatus::RuntimeError,
    }
}

fn fail(err: Error) -> FlashStatus {
    set_last_error(&err.to_string());
    status_of(&err)
}

fn invalid(msg: &str) -> FlashStatus {
    set_last_error(msg);
    FlashStatus::InvalidArgument
}

/// # Safety
/// `ptr` must be null or a NUL-terminated string valid for the call.
unsafe fn path_arg(ptr: *const c_char, name: &str) -> Result<PathBuf, FlashStatus> {
    str_arg(ptr, name).map(PathBuf::from)
}

/// # Safety
/// `ptr` must be null or a NUL-terminated string valid for the call.
unsafe fn str_arg(ptr: *const c_char, name: &str) -> Result<String, FlashStatus> {
    if ptr.is_null() {
        return Err(invalid(&format!("{name} is null")));
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(s.to_string()),
        Err(_) => Err(invalid(&format!("{name} is not valid UTF-8"))),
    }
}

fn return_config(cfg: ExperimentConfig, out: *mut *mut FlashConfig) -> FlashStatus {
    if out.is_null() {
        return invalid("out is null");
    }
    match cfg.validate() {
        Ok(()) => {
            let handle = Box::new(FlashConfig { inner: cfg });
            unsafe { *out = Box::into_raw(handle) };
            FlashStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn flashsim_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Message of the last failure on this thread (never null).
#[no_mangle]
pub extern "C" fn flashsim_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Fresh configuration with built-in defaults.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn flashsim_config_new(out: *mut *mut FlashConfig) -> FlashStatus {
    return_config(ExperimentConfig::default(), out)
}

/// Parse a TOML config file.
///
/// # Safety
/// `path` must be a valid NUL-terminated string; `out` as in
/// [`flashsim_config_new`].
#[no_mangle]
pub unsafe extern "C" fn flashsim_config_from_file(
    path: *const c_char,
    out: *mut *mut FlashConfig,
) -> FlashStatus {
    let path = match path_arg(path, "path") {
        Ok(p) => p,
        Err(status) => return status,
    };
    match ExperimentConfig::from_toml_file(&path) {
        Ok(cfg) => return_config(cfg, out),
        Err(e) => fail(e),
    }
}

/// Parse a TOML config document from memory.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` as in
/// [`flashsim_config_new`].
#[no_mangle]
pub unsafe extern "C" fn flashsim_config_from_toml(
    text: *const c_char,
    out: *mut *mut FlashConfig,
) -> FlashStatus {
    let text = match str_arg(text, "text") {
        Ok(t) => t,
        Err(status) => return status,
    };
    match ExperimentConfig::from_toml_str(&text) {
        Ok(cfg) => return_config(cfg, out),
        Err(e) => fail(e),
    }
}

/// Load the resolved config out of a `manifest.json` from a previous run.
///
/// # Safety
/// `path` must be a valid NUL-terminated string; `out` as in
/// [`flashsim_config_new`].
#[no_mangle]
pub unsafe extern "C" fn flashsim_config_from_manifest(
    path: *const c_char,
    out: *mut *mut FlashConfig,
) -> FlashStatus {
    let path = match path_arg(path, "path") {
        Ok(p) => p,
        Err(status) => return status,
    };
    match RunManifest::from_file(&path) {
        Ok(manifest) => return_config(manifest.config, out),
        Err(e) => fail(e),
    }
}

/// Override the top-level seed.
///
/// # Safety
/// `cfg` must be a live handle from a `flashsim_config_*` constructor.
#[no_mangle]
pub unsafe extern "C" fn flashsim_config_set_seed(
    cfg: *mut FlashConfig,
    seed: u64,
) -> FlashStatus {
    let Some(cfg) = cfg.as_mut() else {
        return invalid("cfg is null");
    };
    cfg.inner.seed = seed;
    FlashStatus::Ok
}

/// Override the round budget.
///
/// # Safety
/// `cfg` must be a live handle from a `flashsim_config_*` constructor.
#[no_mangle]
pub unsafe extern "C" fn flashsim_config_set_rounds(
    cfg: *mut FlashConfig,
    rounds: u64,
) -> FlashStatus {
    let Some(cfg) = cfg.as_mut() else {
        return invalid("cfg is null");
    };
    cfg.inner.rounds = rounds;
    FlashStatus::Ok
}

/// Override any config key by its TOML path, e.g.
/// `flashsim_config_set(cfg, "bandit.delta", "0.1")` or
/// `flashsim_config_set(cfg, "strategy", "\"random\"")`.
/// The value uses TOML syntax, so strings need quotes.
///
/// # Safety
/// `cfg` must be a live handle; `key` and `value` must be valid
/// NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn flashsim_config_set(
    cfg: *mut FlashConfig,
    key: *const c_char,
    value: *const c_char,
) -> FlashStatus {
    let Some(cfg) = cfg.as_mut() else {
        return invalid("cfg is null");
    };
    let key = match str_arg(key, "key") {
        Ok(k) => k,
        Err(status) => return status,
    };
    let value = match str_arg(value, "value") {
        Ok(v) => v,
        Err(status) => return status,
    };
    match set_toml_key(&cfg.inner, &key, &value) {
        Ok(updated) => {
            cfg.inner = updated;
            FlashStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Merge one `key.path = value` assignment into a config by round-tripping
/// through the TOML model, so paths, types, and unknown keys are checked
/// exactly like a config file.
fn set_toml_key(
    cfg: &ExperimentConfig,
    key: &str,
    value: &str,
) -> Result<ExperimentConfig, Error> {
    let parsed: toml::Value = toml::from_str(&format!("v = {value}"))
        .map_err(|e| Error::Config(format!("bad value `{value}`: {e}")))?;
    let parsed = parsed
        .get("v")
        .cloned()
        .ok_or_else(|| Error::Config(format!("bad value `{value}`")))?;

    let mut root = toml::Value::try_from(cfg).map_err(|e| Error::Config(e.to_string()))?;
    let mut cursor = &mut root;
    let segments: Vec<&str> = key.split('.').collect();
    let (leaf, path) = segments
        .split_last()
        .ok_or_else(|| Error::Config("empty key".into()))?;
    for segment in path {
        cursor = cursor
            .as_table_mut()
            .and_then(|t| t.get_mut(*segment))
            .ok_or_else(|| Error::Config(format!("unknown config section `{segment}`")))?;
    }
    cursor
        .as_table_mut()
        .ok_or_else(|| Error::Config(format!("`{key}` does not address a table entry")))?
        .insert(leaf.to_string(), parsed);
    root.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))
}

/// Serialize the resolved config as TOML; free with `flashsim_string_free`.
///
/// # Safety
/// `cfg` must be a live handle; `out` must point to writable storage for one
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn flashsim_config_to_toml(
    cfg: *const FlashConfig,
    out: *mut *mut c_char,
) -> FlashStatus {
    let Some(cfg) = cfg.as_ref() else {
        return invalid("cfg is null");
    };
    if out.is_null() {
        return invalid("out is null");
    }
    match cfg.inner.to_toml_string() {
        Ok(text) => match CString::new(text) {
            Ok(cstr) => {
                *out = cstr.into_raw();
                FlashStatus::Ok
            }
            Err(_) => invalid("config contains interior NUL"),
        },
        Err(e) => fail(e),
    }
}

/// Run the configured experiment, writing `metrics.csv` and `manifest.json`
/// into `out_dir`. `summary` may be null if the caller only wants the files.
///
/// # Safety
/// `cfg` must be a live handle; `out_dir` must be a valid NUL-terminated
/// string; `summary` must be null or point to writable storage for one
/// `FlashSummary`.
#[no_mangle]
pub unsafe extern "C" fn flashsim_run(
    cfg: *const FlashConfig,
    out_dir: *const c_char,
    summary: *mut FlashSummary,
) -> FlashStatus {
    let Some(cfg) = cfg.as_ref() else {
        return invalid("cfg is null");
    };
    let dir = match path_arg(out_dir, "out_dir") {
        Ok(d) => d,
        Err(status) => return status,
    };
    match run_to_dir(&cfg.inner, Path::new(&dir)) {
        Ok(artifacts) => {
            if !summary.is_null() {
                *summary = FlashSummary {
                    best_accuracy: artifacts.best_accuracy,
                    best_round: artifacts.best_round,
                    total_simulated_seconds: artifacts.total_simulated_seconds,
                    final_cumulative_regret: artifacts.final_cumulative_regret,
                };
            }
            FlashStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Release a config handle. Null is a no-op.
///
/// # Safety
/// `cfg` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn flashsim_config_free(cfg: *mut FlashConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Release a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a pointer returned by `flashsim_config_to_toml`.
#[no_mangle]
pub unsafe extern "C" fn flashsim_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[allow(dead_code)]
fn assert_ffi_types_are_send() {
    fn check<T: Send>() {}
    check::<FlashSummary>();
}

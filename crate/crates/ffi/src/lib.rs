//! C ABI for the Akton-Algebra toolchain.
//!
//! Every call returns an [`AktonStatus`]. On failure the message is kept per
//! thread and read with [`akton_last_error`]. Strings handed out must be
//! released with [`akton_string_free`], programs with [`akton_program_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use akton::digital::{simulate_network, Timing, Waveform};
use akton::metric::{layout, render_ascii, render_svg};
use akton::network::{reconstruct, Mode};
use akton::sort::check;
use akton::term::{parse_program, print, AtomRegistry, Program};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AktonStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    IllFormed = 4,
    SimulationError = 5,
    LayoutError = 6,
    BadInputs = 7,
    Panic = 99,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AktonLayoutFormat {
    Ascii = 0,
    Svg = 1,
    Json = 2,
}

/// Parsed program. Opaque to C.
pub struct AktonProgram {
    inner: Program,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl ToString) {
    let c = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Res<T> = Result<T, (AktonStatus, String)>;

fn guard(f: impl FnOnce() -> Res<()>) -> AktonStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AktonStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            AktonStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Res<&'a str> {
    if s.is_null() {
        return Err((AktonStatus::NullArgument, format!("{what} is NULL")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (AktonStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn program<'a>(p: *const AktonProgram) -> Res<&'a Program> {
    p.as_ref().map(|p| &p.inner).ok_or((AktonStatus::NullArgument, "program is NULL".into()))
}

unsafe fn give(out: *mut *mut c_char, s: String) -> Res<()> {
    if out.is_null() {
        return Err((AktonStatus::NullArgument, "output pointer is NULL".into()));
    }
    *out = CString::new(s).map_err(|_| (AktonStatus::Panic, "NUL in output".into()))?.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn akton_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn akton_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a program (definitions plus a final term).
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn akton_program_parse(src: *const c_char, out: *mut *mut AktonProgram) -> AktonStatus {
    guard(|| {
        let src = text(src, "source")?;
        if out.is_null() {
            return Err((AktonStatus::NullArgument, "output pointer is NULL".into()));
        }
        let p = parse_program(src, &AtomRegistry::new()).map_err(|e| (AktonStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(AktonProgram { inner: p }));
        Ok(())
    })
}

/// # Safety
/// `p` must come from [`akton_program_parse`] and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn akton_program_free(p: *mut AktonProgram) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Canonical text of the program term.
///
/// # Safety
/// `p` must be a live program; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn akton_program_print(p: *const AktonProgram, out: *mut *mut c_char) -> AktonStatus {
    guard(|| give(out, print(program(p)?.main())))
}

/// Sort report as JSON. Returns `IllFormed` (with the report still written)
/// when the term has violations.
///
/// # Safety
/// `p` must be a live program; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn akton_check_json(p: *const AktonProgram, out: *mut *mut c_char) -> AktonStatus {
    guard(|| {
        let p = program(p)?;
        let rep = check(p.main(), &p.registry);
        give(out, serde_json::to_string(&rep).expect("report serializes"))?;
        if rep.is_well_formed() {
            Ok(())
        } else {
            Err((AktonStatus::IllFormed, "term is not well-formed".into()))
        }
    })
}

/// Network JSON, healed or keeping cut edges.
///
/// # Safety
/// `p` must be a live program; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn akton_graph_json(p: *const AktonProgram, heal: bool, out: *mut *mut c_char) -> AktonStatus {
    guard(|| {
        let p = program(p)?;
        let mode = if heal { Mode::Heal } else { Mode::KeepCuts };
        let net = reconstruct(p.main(), &p.registry, mode).map_err(|e| (AktonStatus::IllFormed, e.to_string()))?;
        give(out, net.to_json())
    })
}

/// Simulates with inputs such as `"A=01,B=1"` and writes the final Exit
/// values as a string of `0`, `1` and `#` in Exit order.
///
/// # Safety
/// `p` must be a live program; `inputs` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn akton_simulate(
    p: *const AktonProgram,
    inputs: *const c_char,
    max_steps: usize,
    settle: bool,
    out: *mut *mut c_char,
) -> AktonStatus {
    guard(|| {
        let p = program(p)?;
        let inputs = text(inputs, "inputs")?;
        let net = reconstruct(p.main(), &p.registry, Mode::KeepCuts)
            .map_err(|e| (AktonStatus::IllFormed, e.to_string()))?;
        let n = net.entries(&p.registry).len();
        let names: Vec<String> =
            (0..n).map(|i| p.inputs.get(i).cloned().unwrap_or_else(|| format!("Entry{}", i + 1))).collect();
        let w = Waveform::parse(inputs, &names).map_err(|e| (AktonStatus::BadInputs, e.to_string()))?;
        let timing = if settle { Timing::Settle } else { Timing::Unit };
        let tr = simulate_network(&net, &p.registry, &w, max_steps, timing)
            .map_err(|e| (AktonStatus::SimulationError, e.to_string()))?;
        give(out, tr.outputs().iter().map(|v| v.as_char()).collect())
    })
}

/// Grid layout of a metric term.
///
/// # Safety
/// `p` must be a live program; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn akton_layout(
    p: *const AktonProgram,
    format: AktonLayoutFormat,
    out: *mut *mut c_char,
) -> AktonStatus {
    guard(|| {
        let p = program(p)?;
        let g = layout(p.main(), &p.registry).map_err(|e| (AktonStatus::LayoutError, e.to_string()))?;
        give(
            out,
            match format {
                AktonLayoutFormat::Ascii => render_ascii(&g),
                AktonLayoutFormat::Svg => render_svg(&g),
                AktonLayoutFormat::Json => g.to_json(),
            },
        )
    })
}

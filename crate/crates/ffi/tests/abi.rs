use std::ffi::{c_char, CStr, CString};
use std::ptr;

use akton_ffi::*;

const HALF_ADDER: &str = "#! inputs: A B
HAd := (Fork/Fork) > Wire/((Down/Wire) > (Wire/Up))/Wire > Or/And
     > Wire/Fork > Wire/Not/Wire > And/Wire;
Entry/Entry > HAd > Exit/Exit";

fn parsed(src: &str) -> *mut AktonProgram {
    let src = CString::new(src).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { akton_program_parse(src.as_ptr(), &mut p) }, AktonStatus::Ok);
    p
}

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { akton_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(akton_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn print_and_check() {
    let p = parsed("Entry > Fork > (Link/Link) > Join > Exit");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { akton_program_print(p, &mut s) }, AktonStatus::Ok);
    assert_eq!(take(s), "Entry > Fork > Link/Link > Join > Exit");
    assert_eq!(unsafe { akton_check_json(p, &mut s) }, AktonStatus::Ok);
    assert!(take(s).contains("\"sort\":\"CS\""));
    unsafe { akton_program_free(p) };
}

#[test]
fn errors_are_reported() {
    let src = CString::new("Entry > Nope").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { akton_program_parse(src.as_ptr(), &mut p) }, AktonStatus::ParseError);
    assert!(p.is_null());
    assert!(last_error().contains("Nope"));
    assert_eq!(unsafe { akton_program_parse(ptr::null(), &mut p) }, AktonStatus::NullArgument);

    let p = parsed("Entry > Join > Exit");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { akton_check_json(p, &mut s) }, AktonStatus::IllFormed);
    take(s);
    unsafe { akton_program_free(p) };
}

#[test]
fn simulate_half_adder() {
    let p = parsed(HALF_ADDER);
    for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let inputs = CString::new(format!("A={a},B={b}")).unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { akton_simulate(p, inputs.as_ptr(), 64, false, &mut s) }, AktonStatus::Ok);
        assert_eq!(take(s), format!("{}{}", a ^ b, a & b));
    }
    let bad = CString::new("A=1").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { akton_simulate(p, bad.as_ptr(), 64, false, &mut s) }, AktonStatus::BadInputs);
    unsafe { akton_program_free(p) };
}

#[test]
fn graph_and_layout() {
    let p = parsed("Entry > L_s > Exit");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { akton_layout(p, AktonLayoutFormat::Ascii, &mut s) }, AktonStatus::Ok);
    assert_eq!(take(s).lines().count(), 3);
    assert_eq!(unsafe { akton_graph_json(p, true, &mut s) }, AktonStatus::Ok);
    assert!(take(s).contains("\"L_s\""));
    unsafe { akton_program_free(p) };

    let p = parsed("Entry > Fork > Exit/Exit");
    assert_eq!(unsafe { akton_layout(p, AktonLayoutFormat::Svg, &mut s) }, AktonStatus::LayoutError);
    assert!(last_error().contains("Fork"));
    unsafe { akton_program_free(p) };
}

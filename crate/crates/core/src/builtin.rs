//! Named built-in instances on `Δ(2,3;4)`: the square `{12,13,24,34}` with the
//! triangle `{123,124,134}` at weight zero, everything else raised, and the two
//! one-coordinate repairs.

use crate::rational::rat;
use crate::tropical::{FlagInstance, PluckerVector};

pub const BUILTIN_NAMES: [&str; 3] = ["paper-ex1-invalid", "paper-ex1-x23", "paper-ex1-y234"];

fn pair(x23: i64, y234: i64) -> FlagInstance {
    let x = PluckerVector::from_fn(4, 2, |s| match s.to_string().as_str() {
        "14" => rat(1),
        "23" => rat(x23),
        _ => rat(0),
    })
    .expect("valid sizes");
    let y = PluckerVector::from_fn(4, 3, |s| if s.to_string() == "234" { rat(y234) } else { rat(0) })
        .expect("valid sizes");
    FlagInstance::new(vec![x, y]).expect("valid flag")
}

/// The instance called `name`, if it exists.
pub fn builtin(name: &str) -> Option<FlagInstance> {
    match name {
        "paper-ex1-invalid" => Some(pair(1, 1)),
        "paper-ex1-x23" => Some(pair(0, 1)),
        "paper-ex1-y234" => Some(pair(1, 0)),
        _ => None,
    }
}

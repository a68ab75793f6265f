//! Named symbols used throughout the experiments.

use crate::error::{Error, Result};
use crate::symbol::{LaurentSymbol, TridiagonalSymbol};

/// `i z^-1 + (1 - 2x) + (i/4) z`.
pub fn fig1() -> TridiagonalSymbol {
    TridiagonalSymbol::parse("i", "1-2*x", "i/4").expect("preset parses")
}

/// `(i/(x+1)) z^-1 + (i/(x^2+100)) z`.
pub fn fig2() -> TridiagonalSymbol {
    TridiagonalSymbol::parse("i/(x+1)", "0", "i/(x^2+100)").expect("preset parses")
}

/// Tetradiagonal: `i(1 - x/2) z^-1 + (1 - x) + (i/4)(1 + x) z + (3/2) z^2`.
pub fn ex4() -> LaurentSymbol {
    LaurentSymbol::from_pairs(&[(-1, "i*(1-x/2)"), (0, "1-x"), (1, "(i/4)*(1+x)"), (2, "3/2")]).expect("preset parses")
}

/// Pentadiagonal:
/// `-(1/5)(x+i) z^-2 + i(3/4 + x) z^-1 + (i/3) x + (1 - 2x) z + ((x^2 - 1)/5) z^2`.
pub fn ex5() -> LaurentSymbol {
    LaurentSymbol::from_pairs(&[
        (-2, "-(1/5)*(x+i)"),
        (-1, "i*(3/4+x)"),
        (0, "(i/3)*x"),
        (1, "1-2*x"),
        (2, "(x^2-1)/5"),
    ])
    .expect("preset parses")
}

pub const NAMES: [&str; 4] = ["fig1", "fig2", "ex4", "ex5"];

pub fn by_name(name: &str) -> Result<LaurentSymbol> {
    match name {
        "fig1" => Ok(fig1().to_laurent()),
        "fig2" => Ok(fig2().to_laurent()),
        "ex4" => Ok(ex4()),
        "ex5" => Ok(ex5()),
        _ => Err(Error::InvalidSymbol(format!("unknown preset `{name}` (expected one of {NAMES:?})"))),
    }
}

/// Symbols with `c = d`, for which the support set and the symbol range coincide.
pub fn symmetric_examples() -> Vec<TridiagonalSymbol> {
    [("1+x", "x^2", "1+x"), ("i*(1-x/2)", "1-2*x", "i*(1-x/2)"), ("exp(i*x)", "i*x", "exp(i*x)")]
        .iter()
        .map(|(d, b, c)| TridiagonalSymbol::parse(d, b, c).expect("preset parses"))
        .collect()
}

use serde::Serialize;

use crate::error::{Error, Result};

/// `p = x^2 + y^2` with `x` odd and both positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwoSquares {
    pub x: u64,
    pub y: u64,
}

pub fn two_squares(p: u64) -> Result<TwoSquares> {
    if p % 4 != 1 {
        return Err(Error::NoRepresentation(p));
    }
    let mut x = 1u64;
    while x * x < p {
        let rest = p - x * x;
        let y = (rest as f64).sqrt().round() as u64;
        if y > 0 && y * y == rest {
            return Ok(TwoSquares { x, y });
        }
        x += 2;
    }
    Err(Error::NoRepresentation(p))
}

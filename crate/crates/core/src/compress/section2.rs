use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{internal, Result};
use crate::exactnum::{GaussianRational, Mat};
use crate::generators::{is_projection, section2_algebra};

type Q = GaussianRational;

/// Replay of the introductory counterexample: `A = C(Q1+Q2)` compressed by
/// `P/3`, with `P = [[2,−1,−1],[−1,2,−1],[−1,−1,2]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section2Report {
    pub p: Mat,
    pub pbp: Mat,
    pub pbp_squared: Mat,
    /// `b22 + 5·b23` on the corner generator `P·(Q1+Q2)·P`.
    pub relation_on_generator: Q,
    /// The same functional on `(PBP)²`.
    pub relation_on_square: Q,
    pub square_matches_expected: bool,
    pub square_in_corner: bool,
    pub verdict: String,
}

fn relation(m: &Mat) -> Q {
    m.get(1, 1) + &(m.get(1, 2) * &Q::from_int(5))
}

pub fn repro_section2() -> Result<Section2Report> {
    let p = Mat::from_ints(&[[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]);
    if !is_projection(&p.scale(&Q::ratio(1, 3))) {
        return Err(internal("P/3 is not a projection"));
    }
    let alg = section2_algebra();
    let b = alg.basis()[0].clone();
    let pbp = &(&p * &b) * &p;
    let corner = alg.compress(&p)?;
    if !corner.basis().iter().all(|m| relation(m).is_zero()) {
        return Err(internal("corner basis violates b22 + 5·b23 = 0"));
    }
    let pbp_squared = &pbp * &pbp;
    let expected = Mat::from_ints(&[[42, -39, -3], [-39, 42, -3], [-3, -3, 6]]);
    let square_in_corner = corner.contains(&pbp_squared)?;
    let relation_on_square = relation(&pbp_squared);
    let verdict = if square_in_corner { "no conclusion" } else { "not projection compressible" };
    Ok(Section2Report {
        relation_on_generator: relation(&pbp),
        square_matches_expected: pbp_squared == expected,
        p,
        pbp,
        pbp_squared,
        relation_on_square,
        square_in_corner,
        verdict: verdict.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_values() {
        let r = repro_section2().unwrap();
        assert_eq!(r.pbp_squared.get(0, 0), &Q::from_int(42));
        assert!(r.square_matches_expected);
        assert_eq!(r.relation_on_generator, Q::from_int(0));
        assert_eq!(r.relation_on_square, Q::from_int(27));
        assert!(!r.square_in_corner);
        assert_eq!(r.verdict, "not projection compressible");
        assert_eq!(r.pbp, Mat::from_ints(&[[5, -4, -1], [-4, 5, -1], [-1, -1, 2]]));
    }
}

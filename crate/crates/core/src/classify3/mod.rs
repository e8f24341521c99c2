//! Classification of unital subalgebras of `M_3` up to transpose similarity.
//!
//! The label is read off the unhinged block form: sizes of the diagonal
//! blocks, the dimension of the block diagonal (how many blocks are linked),
//! the radical dimension, and which super-diagonal positions the radical
//! reaches. Only three outcomes fail to be compressible: the classes of the
//! algebras `B`, `C` and `D`.

use serde::{Deserialize, Serialize};

use crate::compress::{CornerReport, Require, SampleSet, Verdict};
use crate::error::{internal, precondition, shape, Result};
use crate::generators::SampleConfig;
use crate::span::Span;
use crate::structure::{analyze, radical_block_supports, BlockForm, StructureSummary};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Tag {
    Full,
    UnitizedLr,
    #[serde(rename = "EX_3_1_1")]
    Ex311,
    #[serde(rename = "EX_3_1_2")]
    Ex312,
    #[serde(rename = "EX_3_1_6")]
    Ex316,
    #[serde(rename = "EX_3_2_2")]
    Ex322,
    #[serde(rename = "EX_3_2_5")]
    Ex325,
    #[serde(rename = "EX_3_2_9")]
    Ex329,
    ClassB,
    ClassC,
    ClassD,
    Scalar,
}

impl Tag {
    pub const ALL: [Tag; 12] = [
        Tag::Full,
        Tag::UnitizedLr,
        Tag::Ex311,
        Tag::Ex312,
        Tag::Ex316,
        Tag::Ex322,
        Tag::Ex325,
        Tag::Ex329,
        Tag::ClassB,
        Tag::ClassC,
        Tag::ClassD,
        Tag::Scalar,
    ];

    pub fn compressible(self) -> bool {
        !matches!(self, Tag::ClassB | Tag::ClassC | Tag::ClassD)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Full => "FULL",
            Tag::UnitizedLr => "UNITIZED_LR",
            Tag::Ex311 => "EX_3_1_1",
            Tag::Ex312 => "EX_3_1_2",
            Tag::Ex316 => "EX_3_1_6",
            Tag::Ex322 => "EX_3_2_2",
            Tag::Ex325 => "EX_3_2_5",
            Tag::Ex329 => "EX_3_2_9",
            Tag::ClassB => "CLASS_B",
            Tag::ClassC => "CLASS_C",
            Tag::ClassD => "CLASS_D",
            Tag::Scalar => "SCALAR",
        }
    }
}

impl std::fmt::Display for Tag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassLabel {
    pub tag: Tag,
    pub compressible: bool,
    /// Whether the decision was made on the anti-transposed algebra.
    pub transposed: bool,
    pub evidence: StructureSummary,
}

fn support(bf: &BlockForm, i: usize, j: usize) -> usize {
    radical_block_supports(bf).iter().find(|p| p.i == i && p.j == j).map_or(0, |p| p.dim)
}

fn decide(bf: &BlockForm) -> Result<(Tag, bool)> {
    if bf.block_dims == [3] {
        return Ok((Tag::Full, false));
    }
    if bf.block_dims.contains(&2) {
        return Ok((Tag::UnitizedLr, false));
    }
    let rad = bf.radical.dim();
    let d = |i, j| support(bf, i, j);
    match bf.block_diagonal.dim() {
        3 => {
            if d(1, 2) + d(1, 3) + d(2, 3) != rad {
                return Err(internal("radical of an unlinked form is not the sum of its supports"));
            }
            Ok((
                match rad {
                    0 => Tag::ClassD,
                    1 => Tag::Ex322,
                    2 if d(1, 3) == 0 => return Err(internal("radical reaches (1,2) and (2,3) but not (1,3)")),
                    2 => Tag::Ex312,
                    _ => Tag::Ex311,
                },
                false,
            ))
        }
        2 => {
            let pair = bf
                .linked_partition
                .iter()
                .find(|g| g.len() == 2)
                .ok_or_else(|| internal("two-dimensional block diagonal without a linked pair"))?;
            if pair == &[2, 3] {
                let (tag, _) = case_two(&bf.anti_transpose()?)?;
                return Ok((tag, true));
            }
            case_two(bf)
        }
        1 => Ok((
            match rad {
                0 => Tag::Scalar,
                1 => Tag::UnitizedLr,
                2 if d(1, 2) == 0 || d(2, 3) == 0 => Tag::UnitizedLr,
                2 => Tag::ClassC,
                _ => Tag::Ex329,
            },
            false,
        )),
        _ => Err(internal("unexpected block diagonal dimension")),
    }
}

/// Two linked blocks, one of which is the first.
fn case_two(bf: &BlockForm) -> Result<(Tag, bool)> {
    let v2_linked = bf.linked_partition.iter().any(|g| g == &[1, 2]);
    let d = |i, j| support(bf, i, j);
    let tag = match (bf.radical.dim(), v2_linked) {
        (0, _) => Tag::UnitizedLr,
        (1, false) if d(1, 3) == 1 => Tag::ClassB,
        (1, false) => Tag::UnitizedLr,
        (1, true) if d(1, 2) == 0 => Tag::UnitizedLr,
        (1, true) => Tag::ClassB,
        (2, false) => Tag::Ex325,
        (2, true) if d(1, 2) == 0 => Tag::UnitizedLr,
        (2, true) if d(2, 3) != 0 => return Err(internal("remaining radical generator reaches position (2,3)")),
        (2, true) => Tag::Ex325,
        (_, false) => Tag::UnitizedLr,
        (_, true) => Tag::Ex316,
    };
    Ok((tag, false))
}

/// Class of a unital subalgebra of `M_3`.
pub fn classify(s: &Span) -> Result<ClassLabel> {
    if !s.is_square() || s.n() != 3 {
        return Err(shape("classification is implemented for subalgebras of M_3"));
    }
    if !s.is_mult_closed()? {
        return Err(precondition("span is not closed under multiplication"));
    }
    if !s.contains_identity() {
        return Err(precondition("classification needs a unital algebra"));
    }
    let bf = analyze(s)?;
    let (tag, transposed) = decide(&bf)?;
    Ok(ClassLabel { tag, compressible: tag.compressible(), transposed, evidence: StructureSummary::from(&bf) })
}

/// A classification checked against corner sampling in both modes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub label: ClassLabel,
    pub idempotent: CornerReport,
    pub projection: CornerReport,
    pub agrees: bool,
}

/// Sample sets for both modes, reusable across many algebras in `M_3`.
pub struct Samplers {
    pub idempotent: SampleSet,
    pub projection: SampleSet,
}

impl Samplers {
    pub fn new(cfg: &SampleConfig) -> Result<Samplers> {
        Ok(Samplers {
            idempotent: SampleSet::new(3, Require::Idempotent, cfg)?,
            projection: SampleSet::new(3, Require::Projection, cfg)?,
        })
    }
}

/// Compressible labels must survive sampling; `B`, `C` and `D` labels must
/// produce a witness in each mode.
pub fn cross_validate(s: &Span, cfg: &SampleConfig) -> Result<CrossValidation> {
    cross_validate_with(s, &Samplers::new(cfg)?)
}

pub fn cross_validate_with(s: &Span, samplers: &Samplers) -> Result<CrossValidation> {
    let label = classify(s)?;
    let idempotent = samplers.idempotent.falsify(s)?;
    let projection = samplers.projection.falsify(s)?;
    let found = |r: &CornerReport| r.verdict == Verdict::Counterexample;
    let agrees = if label.compressible {
        !found(&idempotent) && !found(&projection)
    } else {
        found(&idempotent) && found(&projection)
    };
    Ok(CrossValidation { label, idempotent, projection, agrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{canonical_b, canonical_c, canonical_d, coordinate_family, random_invertible, t3, Stream};
    use crate::exactnum::{GaussianRational as Q, Mat};

    #[test]
    fn canonical_labels() {
        assert_eq!(classify(&Span::full(3)).unwrap().tag, Tag::Full);
        assert_eq!(classify(&Span::scalars(3)).unwrap().tag, Tag::Scalar);
        let d = classify(&canonical_d()).unwrap();
        assert_eq!((d.tag, d.compressible), (Tag::ClassD, false));
        assert_eq!(classify(&canonical_b()).unwrap().tag, Tag::ClassB);
        assert_eq!(classify(&canonical_c()).unwrap().tag, Tag::ClassC);
        assert_eq!(classify(&t3()).unwrap().tag, Tag::Ex311);
        for (name, tag) in [
            ("3.1.1", Tag::Ex311),
            ("3.1.2", Tag::Ex312),
            ("3.1.6", Tag::Ex316),
            ("3.2.2", Tag::Ex322),
            ("3.2.5", Tag::Ex325),
            ("3.2.9", Tag::Ex329),
        ] {
            let fam = coordinate_family(name).unwrap();
            assert_eq!(classify(&fam.span).unwrap().tag, tag, "{name}");
        }
    }

    #[test]
    fn conjugated_c_r() {
        let s = crate::generators::c_r(&Q::from_int(2)).unwrap();
        let (sim, _) = random_invertible(3, &SampleConfig::default(), Stream::Similarity, 11).unwrap();
        let label = classify(&s.conjugate(&sim).unwrap()).unwrap();
        assert_eq!((label.tag, label.compressible), (Tag::ClassC, false));
    }

    #[test]
    fn rejects_bad_input() {
        let nonunital = Span::from_generators(3, 3, &[Mat::unit(3, 0, 1)]).unwrap();
        assert!(classify(&nonunital).is_err());
        assert!(classify(&Span::full(2)).is_err());
        let open = Span::from_generators(3, 3, &[Mat::identity(3), Mat::unit(3, 0, 1), Mat::unit(3, 1, 2)]).unwrap();
        assert!(classify(&open).is_err());
    }

    #[test]
    fn cross_validation_examples() {
        let cfg = SampleConfig { count: 60, ..SampleConfig::default() };
        let samplers = Samplers::new(&cfg).unwrap();
        for s in [canonical_c(), t3()] {
            let r = cross_validate_with(&s, &samplers).unwrap();
            assert!(r.agrees, "{:?}", r.label.tag);
        }
        let lr = crate::generators::lr_algebra(
            &(&Mat::unit(3, 0, 0) + &Mat::unit(3, 1, 1)),
            &(&Mat::unit(3, 1, 1) + &Mat::unit(3, 2, 2)),
        )
        .unwrap()
        .unitize()
        .unwrap();
        let r = cross_validate_with(&lr, &samplers).unwrap();
        assert_eq!(r.label.tag, Tag::UnitizedLr);
        assert!(r.agrees);
    }
}

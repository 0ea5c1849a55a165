use super::{Family, Ring, RingElem};
use crate::error::{Error, Result};

/// A surjection `R' ↠ R` of one level within a family. Its kernel
/// `I = (π^{n-1})` is a one-dimensional `k`-space killed by the maximal ideal.
#[derive(Clone, Debug)]
pub struct SmallSurj {
    source: Ring,
    target: Ring,
    kernel_gen: RingElem,
}

pub fn make_small_surjection(source: &Ring) -> Result<SmallSurj> {
    if source.is_field() {
        return Err(Error::NoSmallQuotient);
    }
    let target = source.at_level(source.family(), source.level() - 1)?;
    let kernel_gen = RingElem::pi_pow(source, source.level() - 1);
    Ok(SmallSurj { source: source.clone(), target, kernel_gen })
}

impl SmallSurj {
    pub fn source(&self) -> &Ring {
        &self.source
    }
    pub fn target(&self) -> &Ring {
        &self.target
    }
    pub fn kernel_gen(&self) -> &RingElem {
        &self.kernel_gen
    }

    pub fn reduce(&self, x: &RingElem) -> RingElem {
        x.reduce_to(&self.target).expect("element of the source ring")
    }

    /// Canonical coefficientwise section.
    pub fn lift(&self, y: &RingElem) -> RingElem {
        self.source.lift_from(y).expect("element of the target ring")
    }

    /// The `a ∈ k` with `x = lift(a) · kernel_gen`; `None` if `x ∉ I`.
    pub fn kernel_coordinate(&self, x: &RingElem) -> Option<RingElem> {
        let n = self.source.level();
        if x.valuation() < n - 1 {
            return None;
        }
        let k = self.source.residue_field();
        let f = self.source.f();
        let raw: Vec<i64> = match self.source.family() {
            Family::Witt => {
                let d = self.source.p().pow(n - 1);
                x.raw().iter().map(|&v| (v / d) as i64).collect()
            }
            Family::DualNumbers => x.raw()[(n as usize - 1) * f..].iter().map(|&v| v as i64).collect(),
        };
        Some(RingElem::from_coeffs(&k, &raw))
    }

    /// `lift(a) · kernel_gen` for `a ∈ k`.
    pub fn kernel_element(&self, a: &RingElem) -> RingElem {
        &self.source.lift_from(a).expect("residue field element") * &self.kernel_gen
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;

    #[test]
    fn canonical_examples() {
        let z25 = make_ring(Family::Witt, 5, 1, 2).unwrap();
        let s = make_small_surjection(&z25).unwrap();
        assert_eq!(*s.target(), make_ring(Family::Witt, 5, 1, 1).unwrap());
        assert_eq!(*s.kernel_gen(), RingElem::from_int(&z25, 5));

        let d3 = make_ring(Family::DualNumbers, 5, 1, 3).unwrap();
        let s = make_small_surjection(&d3).unwrap();
        assert_eq!(*s.target(), make_ring(Family::DualNumbers, 5, 1, 2).unwrap());
        assert_eq!(*s.kernel_gen(), RingElem::from_coeffs(&d3, &[0, 0, 1]));

        let z5 = make_ring(Family::Witt, 5, 1, 1).unwrap();
        assert_eq!(make_small_surjection(&z5).unwrap_err(), Error::NoSmallQuotient);
    }

    #[test]
    fn section_and_kernel_properties() {
        for src in [
            make_ring(Family::Witt, 3, 2, 3).unwrap(),
            make_ring(Family::DualNumbers, 3, 2, 3).unwrap(),
            make_ring(Family::Witt, 7, 1, 2).unwrap(),
        ] {
            let s = make_small_surjection(&src).unwrap();
            let tgt = s.target().clone();
            for code in 0..tgt.size() {
                let y = tgt.element_from_code(code);
                assert_eq!(s.reduce(&s.lift(&y)), y);
            }
            // kernel is killed by the maximal ideal, which is generated by π
            let pi = RingElem::pi_pow(&src, 1);
            assert!((&pi * s.kernel_gen()).is_zero());
            let k = src.residue_field();
            for a in k.field_elements().unwrap() {
                let x = s.kernel_element(&a);
                assert!(s.reduce(&x).is_zero());
                assert_eq!(s.kernel_coordinate(&x), Some(a));
            }
        }
    }
}

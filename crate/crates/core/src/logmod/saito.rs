use num_traits::Zero;

use super::derivation::Derivation;
use super::LogTarget;
use crate::error::{Error, Result};
use crate::exactalg::{poly_det, Polynomial, Rational};

/// Determinant of the coefficient matrix `[theta_i(x_j)]`.
pub fn coefficient_determinant(derivs: &[Derivation]) -> Result<Polynomial> {
    let rows: Vec<Vec<Polynomial>> = derivs.iter().map(|d| d.coefficients().to_vec()).collect();
    poly_det(&rows)
}

/// The constant `c` with `det = c * Q`, or `None` when the determinant is
/// not a nonzero multiple of the defining polynomial `Q`.
///
/// Every derivation must already belong to the module; a non-member is an
/// error, not a `None`.
pub fn saito_constant<T: LogTarget + ?Sized>(derivs: &[Derivation], target: &T) -> Result<Option<Rational>> {
    let n = target.arity();
    if derivs.len() != n {
        return Err(Error::InvalidParameter(format!(
            "Saito's criterion needs {n} derivations, got {}",
            derivs.len()
        )));
    }
    for (index, d) in derivs.iter().enumerate() {
        if let Some(w) = d.membership_witness(target)? {
            return Err(Error::NotInModule {
                index,
                detail: format!(
                    "remainder {} modulo ({})^{}",
                    w.remainder,
                    w.form,
                    w.component + 1
                ),
            });
        }
    }
    let det = coefficient_determinant(derivs)?;
    let q = target.defining_polynomial();
    let (Some((dm, dc)), Some((qm, qc))) = (det.leading_term(), q.leading_term()) else {
        return Ok(None);
    };
    if dm != qm {
        return Ok(None);
    }
    let c = dc / qc;
    if c.is_zero() || q.scale(&c) != det {
        return Ok(None);
    }
    Ok(Some(c))
}

/// Saito's criterion: `det = c * Q` with `c != 0`.
pub fn saito_test<T: LogTarget + ?Sized>(derivs: &[Derivation], target: &T) -> Result<bool> {
    Ok(saito_constant(derivs, target)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{cone, shi_arrangement, CentralArrangement};
    use crate::exactalg::LinearForm;
    use crate::logmod::euler_derivation;
    use crate::rootsys::{build_root_system, Family};

    fn boolean() -> CentralArrangement {
        CentralArrangement::new(
            2,
            vec![LinearForm::from_ints(&[1, 0]).unwrap(), LinearForm::from_ints(&[0, 1]).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn boolean_examples() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let zero = Polynomial::zero(2);
        let good = [
            Derivation::new(1, vec![x.clone(), zero.clone()]).unwrap(),
            Derivation::new(1, vec![zero.clone(), y.clone()]).unwrap(),
        ];
        assert!(saito_test(&good, &boolean()).unwrap());
        let degenerate = [
            Derivation::new(1, vec![x.clone(), zero.clone()]).unwrap(),
            Derivation::new(1, vec![zero, x.clone()]).unwrap(),
        ];
        // x d/dy sends y to x, which is not divisible by y
        assert!(matches!(
            saito_test(&degenerate, &boolean()),
            Err(Error::NotInModule { index: 1, .. })
        ));
    }

    #[test]
    fn zero_determinant_is_false() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let d = Derivation::new(2, vec![&x * &x, &x * &y]).unwrap();
        assert!(!saito_test(&[d.clone(), d], &boolean()).unwrap());
    }

    #[test]
    fn a1_cone_basis() {
        let rs = build_root_system(Family::A, 1).unwrap();
        let c = cone(&shi_arrangement(&rs, 1).unwrap());
        let x = Polynomial::var(2, 0);
        let z = Polynomial::var(2, 1);
        let phi = Derivation::new(2, vec![&x * &(&x - &z), Polynomial::zero(2)]).unwrap();
        let c_det = saito_constant(&[euler_derivation(2), phi], &c).unwrap();
        assert!(c_det.is_some());
        assert!(saito_test(&[euler_derivation(2)], &c).is_err());
    }
}

//! Taylor jets in z whose coefficients are q-expansions.
//!
//! A [`ZJet`] of degree J stands for `f(z₀ + z) = Σ_{j≤J} a_j z^j + O(z^{J+1})`
//! around an implicit base point. Logarithms are never formed: everything
//! that involves `log f` is written through `f'/f` and `(q∂q f)/f`.

use crate::error::{Error, Result};
use crate::exact::{Coefficient, Rational};
use crate::qexp::{Comparison, Mismatch, QExpansion};

#[derive(Clone, PartialEq)]
pub struct ZJet<F: Coefficient> {
    coeffs: Vec<QExpansion<F>>,
}

impl<F: Coefficient> std::fmt::Debug for ZJet<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl<F: Coefficient> ZJet<F> {
    /// Builds a jet from `a_0, …, a_J`; all slots must share one field.
    pub fn new(coeffs: Vec<QExpansion<F>>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::InvalidArgument(
                "a jet needs at least one slot".into(),
            ));
        };
        if let Some(bad) = coeffs.iter().find(|c| c.ctx() != first.ctx()) {
            return Err(Error::ConductorMismatch {
                left: F::ctx_id(first.ctx()),
                right: F::ctx_id(bad.ctx()),
            });
        }
        Ok(ZJet { coeffs })
    }

    /// The jet of a function independent of z.
    pub fn constant(a0: QExpansion<F>, degree: usize) -> Self {
        let zero = QExpansion::zero(a0.ctx().clone(), a0.base().clone(), a0.precision().clone());
        let mut coeffs = vec![a0];
        coeffs.resize(degree + 1, zero);
        ZJet { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[QExpansion<F>] {
        &self.coeffs
    }

    /// Slot a_j.
    pub fn coeff(&self, j: usize) -> &QExpansion<F> {
        &self.coeffs[j]
    }

    /// The smallest precision over all slots.
    pub fn precision(&self) -> Rational {
        self.coeffs
            .iter()
            .map(|c| c.precision().clone())
            .min()
            .expect("nonempty jet")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(QExpansion::is_zero)
    }

    /// Drops slots above `degree`.
    pub fn truncate_degree(&self, degree: usize) -> Self {
        ZJet {
            coeffs: self.coeffs[..=degree.min(self.degree())].to_vec(),
        }
    }

    fn paired(&self, other: &Self) -> usize {
        self.degree().min(other.degree())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let d = self.paired(other);
        let coeffs = (0..=d)
            .map(|j| self.coeffs[j].add(&other.coeffs[j]))
            .collect::<Result<_>>()?;
        Ok(ZJet { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let d = self.paired(other);
        let coeffs = (0..=d)
            .map(|j| self.coeffs[j].sub(&other.coeffs[j]))
            .collect::<Result<_>>()?;
        Ok(ZJet { coeffs })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        ZJet {
            coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect(),
        }
    }

    /// Truncated Cauchy product in z.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let d = self.paired(other);
        let mut coeffs = Vec::with_capacity(d + 1);
        for j in 0..=d {
            let mut acc = self.coeffs[0].mul(&other.coeffs[j])?;
            for i in 1..=j {
                acc = acc.add(&self.coeffs[i].mul(&other.coeffs[j - i])?)?;
            }
            coeffs.push(acc);
        }
        Ok(ZJet { coeffs })
    }

    pub fn square(&self) -> Result<Self> {
        self.mul(self)
    }

    /// Formal quotient in z; the divisor's constant slot must be a nonzero series.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let g0 = &other.coeffs[0];
        if g0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let d = self.paired(other);
        let mut quot: Vec<QExpansion<F>> = Vec::with_capacity(d + 1);
        for j in 0..=d {
            let mut num = self.coeffs[j].clone();
            for i in 1..=j {
                num = num.sub(&other.coeffs[i].mul(&quot[j - i])?)?;
            }
            quot.push(num.div(g0)?);
        }
        Ok(ZJet { coeffs: quot })
    }

    /// ∂/∂z: `(a_0, …, a_J) ↦ (a_1, 2a_2, …, J·a_J)`.
    pub fn d_dz(&self) -> Result<Self> {
        if self.degree() == 0 {
            return Err(Error::DegreeTooSmall { have: 0, need: 1 });
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&Rational::from_integer((i + 1).into())))
            .collect();
        Ok(ZJet { coeffs })
    }

    /// q∂/∂q applied slotwise.
    pub fn q_ddq(&self) -> Self {
        ZJet {
            coeffs: self.coeffs.iter().map(QExpansion::q_ddq).collect(),
        }
    }

    /// The substitution z ↦ s·z: slot j picks up s^j.
    pub fn scale_z(&self, s: &Rational) -> Self {
        let mut factor = Rational::from_integer(1.into());
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c.scale(&factor);
                factor *= s;
                out
            })
            .collect();
        ZJet { coeffs }
    }

    /// Divides out a zero of order `r` at the base point: `f/z^r`.
    ///
    /// The first `r` slots must vanish to their certified precision.
    pub fn shift_zero(&self, r: usize) -> Result<Self> {
        if r > self.degree() {
            return Err(Error::DegreeTooSmall {
                have: self.degree(),
                need: r,
            });
        }
        if let Some(slot) = self.coeffs[..r].iter().position(|c| !c.is_zero()) {
            return Err(Error::NonzeroLowCoefficient { order: r, slot });
        }
        Ok(ZJet {
            coeffs: self.coeffs[r..].to_vec(),
        })
    }

    /// `∂z log f = f'/f`, degree J-1.
    pub fn log_derivative(&self) -> Result<Self> {
        self.d_dz()?.div(self)
    }

    /// `∂²z log f` as a jet of degree J-2.
    pub fn log_second_derivative(&self) -> Result<Self> {
        self.log_derivative()?.d_dz()
    }

    /// `T(log f)` with `T = -8 q∂/∂q - ∂²/∂z²`, computed as
    /// `-8 (q∂q f)/f - ∂z(f'/f)` without any logarithm. Degree J-2.
    pub fn t_of_log(&self) -> Result<Self> {
        if self.degree() < 2 {
            return Err(Error::DegreeTooSmall {
                have: self.degree(),
                need: 2,
            });
        }
        let heat = self
            .q_ddq()
            .div(self)?
            .scale(&Rational::from_integer((-8).into()));
        let curvature = self.log_second_derivative()?;
        heat.truncate_degree(self.degree() - 2).sub(&curvature)
    }

    /// Exact slotwise comparison below `order`; the mismatch names its slot.
    pub fn equal_to(&self, other: &Self, order: &Rational) -> Result<Option<(usize, Mismatch<F>)>> {
        for j in 0..=self.paired(other) {
            if let Comparison::Differs(m) = self.coeffs[j].equal_to(&other.coeffs[j], order)? {
                return Ok(Some((j, m)));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    type S = QExpansion<Rational>;

    fn poly(cs: &[i64]) -> S {
        S::new((), int(0), cs.iter().map(|&c| int(c)).collect(), int(12)).unwrap()
    }

    fn jet(slots: &[&[i64]]) -> ZJet<Rational> {
        ZJet::new(slots.iter().map(|s| poly(s)).collect()).unwrap()
    }

    #[test]
    fn z_times_z() {
        let z = jet(&[&[], &[1], &[]]);
        let sq = z.mul(&z).unwrap();
        assert_eq!(
            sq.equal_to(&jet(&[&[], &[], &[1]]), &int(12)).unwrap(),
            None
        );
    }

    #[test]
    fn self_division_is_one() {
        let f = jet(&[&[1], &[1], &[1]]);
        assert_eq!(f.div(&f).unwrap(), jet(&[&[1], &[], &[]]));
        let g = jet(&[&[2, 1], &[0, 3], &[1]]);
        let h = f.div(&g).unwrap();
        assert_eq!(h.mul(&g).unwrap(), f);
        let bad = jet(&[&[], &[1], &[]]);
        assert_eq!(f.div(&bad), Err(Error::NotInvertible));
    }

    #[test]
    fn derivatives() {
        assert!(jet(&[&[5, 1]]).d_dz().is_err());
        assert!(jet(&[&[5, 1], &[]]).d_dz().unwrap().is_zero());
        let f = jet(&[&[], &[1, 1], &[2]]);
        assert_eq!(f.d_dz().unwrap(), jet(&[&[1, 1], &[4]]));
        let g = jet(&[&[1], &[2], &[3], &[4], &[5]]);
        // second derivative: slot j gets (j+2)(j+1)·a_{j+2}
        assert_eq!(
            g.d_dz().unwrap().d_dz().unwrap(),
            jet(&[&[6], &[24], &[60]])
        );
        assert!(jet(&[&[3], &[4]]).q_ddq().is_zero());
    }

    #[test]
    fn shift_zero_contract() {
        let f = jet(&[&[], &[1, 2], &[3]]);
        assert_eq!(f.shift_zero(1).unwrap(), jet(&[&[1, 2], &[3]]));
        let unit = jet(&[&[1], &[0], &[1]]);
        assert_eq!(
            unit.shift_zero(1),
            Err(Error::NonzeroLowCoefficient { order: 1, slot: 0 })
        );
    }

    #[test]
    fn t_operator_annihilates_constants() {
        let c = ZJet::constant(poly(&[3]), 4);
        assert!(c.t_of_log().unwrap().is_zero());
    }

    #[test]
    fn scale_z_powers() {
        let f = jet(&[&[1], &[1], &[1]]);
        assert_eq!(f.scale_z(&rat(3, 1)), jet(&[&[1], &[3], &[9]]));
    }
}

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::step::merge_points;
use super::{check_unit, IntervalSet, PLFunction, SpaceError, StepFunction, StepNorm};
use crate::scalar::{rat, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub location: Scalar,
    pub weight: Scalar,
}

/// Finite signed Borel measure on [0,1]: finitely many point masses plus an
/// absolutely continuous part with a step density. Atoms are sorted by
/// location, distinct, and have nonzero weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    atoms: Vec<Atom>,
    density: StepFunction,
}

impl Measure {
    /// Zero-weight atoms are dropped; repeated locations are rejected.
    pub fn new(atoms: Vec<Atom>, density: StepFunction) -> Result<Self, SpaceError> {
        let mut map: BTreeMap<Scalar, Scalar> = BTreeMap::new();
        for a in atoms {
            check_unit(&a.location)?;
            if map.contains_key(&a.location) {
                return Err(SpaceError::DuplicateAtom(a.location));
            }
            map.insert(a.location, a.weight);
        }
        Ok(Self::from_map(map, density))
    }

    fn from_map(map: BTreeMap<Scalar, Scalar>, density: StepFunction) -> Self {
        let atoms = map
            .into_iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(location, weight)| Atom { location, weight })
            .collect();
        Self { atoms, density }
    }

    pub fn zero() -> Self {
        Self {
            atoms: Vec::new(),
            density: StepFunction::zero(),
        }
    }

    pub fn from_density(density: StepFunction) -> Self {
        Self {
            atoms: Vec::new(),
            density,
        }
    }

    pub fn from_atoms(
        atoms: impl IntoIterator<Item = (Scalar, Scalar)>,
    ) -> Result<Self, SpaceError> {
        Self::new(
            atoms
                .into_iter()
                .map(|(location, weight)| Atom { location, weight })
                .collect(),
            StepFunction::zero(),
        )
    }

    pub fn dirac(location: Scalar) -> Result<Self, SpaceError> {
        Self::from_atoms([(location, Scalar::one())])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density(&self) -> &StepFunction {
        &self.density
    }

    pub fn atom_weight(&self, location: &Scalar) -> Scalar {
        self.atoms
            .iter()
            .find(|a| &a.location == location)
            .map(|a| a.weight.clone())
            .unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.density.is_zero()
    }

    pub fn is_purely_atomic(&self) -> bool {
        self.density.is_zero()
    }

    pub fn tv_norm(&self) -> Scalar {
        self.atoms.iter().map(|a| a.weight.abs()).sum::<Scalar>() + self.density.norm(StepNorm::L1)
    }

    /// ν([0,1]).
    pub fn total_mass(&self) -> Scalar {
        self.atoms.iter().map(|a| a.weight.clone()).sum::<Scalar>()
            + self.density.pair(&StepFunction::constant(Scalar::one()))
    }

    /// |ν|(S) for a finite union of closed intervals S.
    pub fn abs_mass_on(&self, set: &IntervalSet) -> Scalar {
        let atoms: Scalar = self
            .atoms
            .iter()
            .filter(|a| set.contains(&a.location))
            .map(|a| a.weight.abs())
            .sum();
        atoms + self.density.map(|v| v.abs()).integral_over(set)
    }

    /// ν(S) for a finite union of closed intervals S.
    pub fn mass_on(&self, set: &IntervalSet) -> Scalar {
        let atoms: Scalar = self
            .atoms
            .iter()
            .filter(|a| set.contains(&a.location))
            .map(|a| a.weight.clone())
            .sum();
        atoms + self.density.integral_over(set)
    }

    /// Exact ∫ f dν. On each segment of the common refinement both the
    /// density and f are affine, so the trapezoid rule is exact.
    pub fn pair(&self, f: &PLFunction) -> Scalar {
        let atoms: Scalar = self
            .atoms
            .iter()
            .map(|a| &a.weight * f.eval(&a.location))
            .sum();
        let bp = merge_points(self.density.breakpoints(), f.nodes());
        let dens = self.density.values_on(&bp);
        let fv = f.values_on(&bp);
        let cont: Scalar = bp
            .windows(2)
            .enumerate()
            .filter(|(i, _)| !dens[*i].is_zero())
            .map(|(i, w)| &dens[i] * (&w[1] - &w[0]) * (&fv[i] + &fv[i + 1]) * rat(1, 2))
            .sum();
        atoms + cont
    }

    /// (continuous part, purely atomic part).
    pub fn decompose(&self) -> (Measure, Measure) {
        (
            Measure::from_density(self.density.clone()),
            Measure {
                atoms: self.atoms.clone(),
                density: StepFunction::zero(),
            },
        )
    }

    /// Jordan decomposition ν = ν⁺ − ν⁻.
    pub fn jordan(&self) -> (Measure, Measure) {
        let pos = Measure {
            atoms: self
                .atoms
                .iter()
                .filter(|a| a.weight.is_positive())
                .cloned()
                .collect(),
            density: self.density.map(|v| if v.is_positive() { v.clone() } else { Scalar::zero() }),
        };
        let neg = Measure {
            atoms: self
                .atoms
                .iter()
                .filter(|a| a.weight.is_negative())
                .map(|a| Atom {
                    location: a.location.clone(),
                    weight: -a.weight.clone(),
                })
                .collect(),
            density: self.density.map(|v| if v.is_negative() { -v.clone() } else { Scalar::zero() }),
        };
        (pos, neg)
    }

    /// Closed support of ν⁺: closures of the positive density pieces plus
    /// positive atoms as singletons.
    pub fn positive_support(&self) -> IntervalSet {
        self.support_where(|v| v.is_positive())
    }

    pub fn negative_support(&self) -> IntervalSet {
        self.support_where(|v| v.is_negative())
    }

    pub fn support(&self) -> IntervalSet {
        self.support_where(|v| !v.is_zero())
    }

    fn support_where(&self, pred: impl Fn(&Scalar) -> bool) -> IntervalSet {
        let atoms = IntervalSet::new(
            self.atoms
                .iter()
                .filter(|a| pred(&a.weight))
                .map(|a| (a.location.clone(), a.location.clone())),
        )
        .expect("atoms lie in [0,1]");
        self.density.level_set(&pred).union(&atoms)
    }

    /// `self + lambda * other`.
    pub fn add_scaled(&self, other: &Measure, lambda: &Scalar) -> Measure {
        let mut map: BTreeMap<Scalar, Scalar> = self
            .atoms
            .iter()
            .map(|a| (a.location.clone(), a.weight.clone()))
            .collect();
        for a in &other.atoms {
            *map.entry(a.location.clone()).or_insert_with(Scalar::zero) += lambda * &a.weight;
        }
        Self::from_map(map, self.density.add_scaled(&other.density, lambda))
    }

    pub fn sub(&self, other: &Measure) -> Measure {
        self.add_scaled(other, &-Scalar::one())
    }

    pub fn scale(&self, lambda: &Scalar) -> Measure {
        Measure::zero().add_scaled(self, lambda)
    }
}

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use crate::error::{domain, Result};

/// Parameters of one clock-game round.
#[derive(Debug, Clone, PartialEq)]
pub struct GameConfig {
    bins: usize,
    levels: usize,
    parties: usize,
    timebin: usize,
    phases: Vec<f64>,
}

impl GameConfig {
    /// `bins` time-bins, `levels`-level ancilla qudits, `parties` players.
    /// Starts at the vacuum round (`timebin = 0`) with all phases zero.
    ///
    /// Requires `bins ≤ levels − 1`, the range the winning strategy covers.
    pub fn new(bins: usize, levels: usize, parties: usize) -> Result<Self> {
        let cfg = Self::undersized(bins, levels, parties)?;
        if bins + 1 > levels {
            return Err(domain(format!(
                "N = {bins} time-bins need at least N+1 = {} ancilla levels, got D = {levels}",
                bins + 1
            )));
        }
        Ok(cfg)
    }

    /// Like [`GameConfig::new`] but without the `N ≤ D − 1` check, for
    /// studying ancillas that are too small.
    pub fn undersized(bins: usize, levels: usize, parties: usize) -> Result<Self> {
        if bins < 1 {
            return Err(domain("need at least one time-bin"));
        }
        if levels < 2 {
            return Err(domain(format!("ancilla needs D ≥ 2 levels, got {levels}")));
        }
        if parties < 2 {
            return Err(domain(format!("need K ≥ 2 parties, got {parties}")));
        }
        Ok(Self {
            bins,
            levels,
            parties,
            timebin: 0,
            phases: vec![0.0; parties - 1],
        })
    }

    pub fn with_timebin(mut self, timebin: usize) -> Result<Self> {
        if timebin > self.bins {
            return Err(domain(format!(
                "time-bin {timebin} out of range 0..={}",
                self.bins
            )));
        }
        self.timebin = timebin;
        Ok(self)
    }

    /// Relative phases of parties 2..K with respect to party 1.
    pub fn with_phases(mut self, phases: Vec<f64>) -> Result<Self> {
        if phases.len() != self.parties - 1 {
            return Err(domain(format!(
                "expected {} phases for K = {}, got {}",
                self.parties - 1,
                self.parties,
                phases.len()
            )));
        }
        if let Some(bad) = phases.iter().find(|p| !(0.0..TAU).contains(*p)) {
            return Err(domain(format!("phase {bad} outside [0, 2π)")));
        }
        self.phases = phases;
        Ok(self)
    }

    /// Single relative phase, two-party shorthand.
    pub fn with_phase(self, phi: f64) -> Result<Self> {
        self.with_phases(vec![phi])
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn timebin(&self) -> usize {
        self.timebin
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn basis(&self) -> RefereeBasis {
        RefereeBasis {
            bins: self.bins,
            parties: self.parties,
        }
    }
}

/// One element of the single-excitation referee basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Vacuum,
    /// Excitation at `party` (0-based) in time-bin `bin` (1-based).
    Photon { party: usize, bin: usize },
}

/// The `{vac} ∪ {(party, bin)}` basis of dimension `K·N + 1`.
///
/// Index 0 is the vacuum; `(p, m)` sits at `1 + p·N + (m − 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RefereeBasis {
    pub bins: usize,
    pub parties: usize,
}

impl RefereeBasis {
    pub fn dim(&self) -> usize {
        self.parties * self.bins + 1
    }

    pub fn index(&self, component: Component) -> usize {
        match component {
            Component::Vacuum => 0,
            Component::Photon { party, bin } => {
                debug_assert!(party < self.parties && (1..=self.bins).contains(&bin));
                1 + party * self.bins + (bin - 1)
            }
        }
    }

    pub fn component(&self, index: usize) -> Component {
        if index == 0 {
            Component::Vacuum
        } else {
            let i = index - 1;
            Component::Photon {
                party: i / self.bins,
                bin: i % self.bins + 1,
            }
        }
    }

    /// Time-bin label carried by a component (0 for vacuum).
    pub fn timebin_of(&self, index: usize) -> usize {
        match self.component(index) {
            Component::Vacuum => 0,
            Component::Photon { bin, .. } => bin,
        }
    }
}

/// Referee state restricted to the vacuum plus single-excitation sector.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedRefereeState {
    basis: RefereeBasis,
    amps: Vec<C64>,
}

impl ReducedRefereeState {
    pub fn new(basis: RefereeBasis, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(crate::Error::DimensionMismatch {
                expected: basis.dim(),
                got: amps.len(),
            });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > crate::qudit::NORM_TOL {
            return Err(crate::error::invalid(
                "referee state",
                format!("squared norm {norm}"),
            ));
        }
        Ok(Self { basis, amps })
    }

    pub fn basis(&self) -> RefereeBasis {
        self.basis
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amp(&self, component: Component) -> C64 {
        self.amps[self.basis.index(component)]
    }

    /// Indices with nonzero amplitude.
    pub fn support(&self) -> Vec<usize> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn inner(&self, other: &ReducedRefereeState) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn density(&self) -> crate::qudit::DensityMatrix {
        let space = crate::qudit::HilbertSpace::new(vec![self.basis.dim()])
            .expect("referee basis is nonempty");
        let v = nalgebra::DVector::from_column_slice(&self.amps);
        crate::qudit::DensityMatrix::from_raw(space, &v * v.adjoint())
    }
}

/// The phase-encoded state the referee sends: vacuum for `n = 0`, otherwise
/// a single excitation shared by all parties in bin `n`, party 1 at phase 0.
pub fn referee_state(config: &GameConfig) -> ReducedRefereeState {
    encoded_state(config.basis(), config.timebin, config.phases())
}

pub(crate) fn encoded_state(basis: RefereeBasis, timebin: usize, phases: &[f64]) -> ReducedRefereeState {
    let mut amps = vec![C64::new(0.0, 0.0); basis.dim()];
    if timebin == 0 {
        amps[0] = C64::new(1.0, 0.0);
    } else {
        let scale = 1.0 / (basis.parties as f64).sqrt();
        for party in 0..basis.parties {
            let phase = if party == 0 { 0.0 } else { phases[party - 1] };
            amps[basis.index(Component::Photon { party, bin: timebin })] =
                C64::from_polar(scale, phase);
        }
    }
    ReducedRefereeState { basis, amps }
}

/// `(Σ x_i) mod D`.
pub fn decode_timebin(outcomes: &[usize], levels: usize) -> Result<usize> {
    if levels == 0 {
        return Err(domain("levels must be positive"));
    }
    if let Some(x) = outcomes.iter().find(|&&x| x >= levels) {
        return Err(domain(format!("outcome {x} out of range 0..{levels}")));
    }
    Ok(outcomes.iter().sum::<usize>() % levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn config_validation() {
        assert!(GameConfig::new(3, 3, 2).is_err());
        assert!(GameConfig::undersized(3, 3, 2).is_ok());
        assert!(GameConfig::new(3, 4, 1).is_err());
        assert!(GameConfig::new(0, 4, 2).is_err());
        let cfg = GameConfig::new(3, 4, 2).unwrap();
        assert!(cfg.clone().with_timebin(4).is_err());
        assert!(cfg.clone().with_phase(7.0).is_err());
        assert!(cfg.with_phases(vec![0.1, 0.2]).is_err());
    }

    #[test]
    fn vacuum_state() {
        let cfg = GameConfig::new(3, 4, 2).unwrap();
        let s = referee_state(&cfg);
        assert_eq!(s.amps().len(), 7);
        assert_eq!(s.amps()[0], C64::new(1.0, 0.0));
        assert!(s.amps()[1..].iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn two_party_sign() {
        let cfg = GameConfig::new(1, 2, 2).unwrap().with_timebin(1).unwrap().with_phase(PI).unwrap();
        let s = referee_state(&cfg);
        let h = 1.0 / 2f64.sqrt();
        assert!((s.amp(Component::Photon { party: 0, bin: 1 }) - C64::new(h, 0.0)).norm() < 1e-15);
        assert!((s.amp(Component::Photon { party: 1, bin: 1 }) - C64::new(-h, 0.0)).norm() < 1e-15);
        assert_eq!(s.amp(Component::Vacuum), C64::new(0.0, 0.0));
    }

    #[test]
    fn three_party_w_state() {
        let cfg = GameConfig::new(2, 3, 3)
            .unwrap()
            .with_timebin(2)
            .unwrap()
            .with_phases(vec![0.0, 0.0])
            .unwrap();
        let s = referee_state(&cfg);
        let w = 1.0 / 3f64.sqrt();
        for party in 0..3 {
            assert!((s.amp(Component::Photon { party, bin: 2 }) - C64::new(w, 0.0)).norm() < 1e-15);
            assert_eq!(s.amp(Component::Photon { party, bin: 1 }).norm(), 0.0);
        }
    }

    #[test]
    fn basis_indexing_round_trips() {
        let basis = RefereeBasis { bins: 4, parties: 3 };
        for i in 0..basis.dim() {
            assert_eq!(basis.index(basis.component(i)), i);
        }
        assert_eq!(basis.timebin_of(0), 0);
        assert_eq!(basis.timebin_of(basis.index(Component::Photon { party: 2, bin: 3 })), 3);
    }

    #[test]
    fn decode_cases() {
        assert_eq!(decode_timebin(&[1, 2], 4).unwrap(), 3);
        assert_eq!(decode_timebin(&[0, 0, 0], 5).unwrap(), 0);
        assert_eq!(decode_timebin(&[3, 2], 4).unwrap(), 1);
        assert!(decode_timebin(&[4, 0], 4).is_err());
    }
}

//! Named configurations `fig1` … `figC`. Chain presets use J = b = 1.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use crate::config::{ExperimentConfig, Grid, InitialState, Model, Observable};

pub struct Preset {
    pub name: &'static str,
    /// Subcommand the preset is meant for.
    pub command: &'static str,
    pub description: &'static str,
    build: fn() -> ExperimentConfig,
}

impl Preset {
    pub fn config(&self) -> ExperimentConfig {
        (self.build)()
    }
}

fn chain(model: Model, sites: usize) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(model);
    c.sites = Some(sites);
    c
}

fn two_angles() -> Grid {
    Grid::List(vec![PI / 30.0, FRAC_PI_3])
}

fn phi_range() -> Grid {
    Grid::Range {
        start: FRAC_PI_2 / 20.0,
        stop: FRAC_PI_2,
        count: 20,
    }
}

fn fig1() -> ExperimentConfig {
    let mut c = chain(Model::KickedIsing, 11);
    c.couplings.phi = phi_range();
    c
}

fn fig2() -> ExperimentConfig {
    let mut c = chain(Model::KickedIsing, 13);
    c.couplings.phi = two_angles();
    c.histogram_bins = Some(40);
    c
}

fn fig3() -> ExperimentConfig {
    let mut c = chain(Model::KickedIsing, 10);
    c.couplings.phi = two_angles();
    c.outputs = vec![Observable::Coefficients, Observable::Dispersion];
    c
}

fn fig4() -> ExperimentConfig {
    let mut c = chain(Model::KickedIsing, 10);
    c.couplings.phi = two_angles();
    c.steps = 2000;
    c.outputs = vec![Observable::Complexity, Observable::Entropy, Observable::Saturation];
    c
}

fn fig5() -> ExperimentConfig {
    let mut c = chain(Model::KickedIsing, 10);
    c.couplings.phi = phi_range();
    c.initial_state = InitialState::Random {
        count: 5,
        seed: Some(1),
    };
    c.outputs = vec![Observable::Dispersion];
    c
}

fn fig6() -> ExperimentConfig {
    let mut c = chain(Model::KickedIsing, 10);
    c.couplings.phi = phi_range();
    c.outputs = vec![Observable::Magnetization];
    c
}

fn fig7() -> ExperimentConfig {
    let mut c = chain(Model::KickedIsingNonlocal, 10);
    c.couplings.phi = Grid::Value(FRAC_PI_2);
    c.couplings.gamma = Grid::List(vec![0.0, 0.05, 0.1, 0.2, 0.4]);
    c.outputs = vec![Observable::Saturation, Observable::Slope, Observable::Dispersion];
    c
}

fn fig8() -> ExperimentConfig {
    let mut c = chain(Model::KickedIsing, 10);
    c.couplings.t = Grid::List(vec![0.05, 0.2, 0.5, 1.0]);
    c.steps = 1000;
    c
}

fn fig9() -> ExperimentConfig {
    let mut c = fig8();
    c.steps = 200;
    c.outputs = vec![Observable::Saturation, Observable::Slope];
    c
}

fn fig_a() -> ExperimentConfig {
    let mut c = chain(Model::SelfDual, 8);
    c.steps = 60;
    c
}

fn fig_c() -> ExperimentConfig {
    let mut c = ExperimentConfig::new(Model::Dimer);
    c.spin = Some(100.0);
    c.couplings.k = Grid::List(vec![0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0]);
    c.couplings.mu = Grid::List(vec![3.0, 6.0]);
    c
}

pub const PRESETS: &[Preset] = &[
    Preset { name: "fig1", command: "spectral", description: "η versus field angle φ, N = 11 parity sector", build: fig1 },
    Preset { name: "fig2", command: "spectral", description: "spacing histograms at φ = π/30 and π/3, N = 13", build: fig2 },
    Preset { name: "fig3", command: "complexity", description: "Arnoldi coefficients at φ = π/30 and π/3, N = 10", build: fig3 },
    Preset { name: "fig4", command: "complexity", description: "spread complexity and entropy at φ = π/30 and π/3, N = 10", build: fig4 },
    Preset { name: "fig5", command: "sweep", description: "coefficient dispersion versus φ, five random initial states", build: fig5 },
    Preset { name: "fig6", command: "sweep", description: "time-averaged magnetization versus φ", build: fig6 },
    Preset { name: "fig7", command: "sweep", description: "non-local coupling γ sweep at φ = π/2", build: fig7 },
    Preset { name: "fig8", command: "complexity", description: "complexity and coefficients for drive periods T, φ = π/3", build: fig8 },
    Preset { name: "fig9", command: "sweep", description: "saturation and initial slope versus drive period T", build: fig9 },
    Preset { name: "figA", command: "complexity", description: "self-dual kicked Ising chain, N = 8", build: fig_a },
    Preset { name: "figC", command: "spectral", description: "kicked dimer j = 100, η versus k at μ = 3 and 6", build: fig_c },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name.eq_ignore_ascii_case(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_is_valid_and_round_trips() {
        for p in PRESETS {
            let c = p.config();
            c.validate().unwrap_or_else(|e| panic!("{}: {e}", p.name));
            let text = c.to_toml().unwrap();
            assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), c, "{}", p.name);
            if p.command == "sweep" {
                assert!(!c.swept_parameters().is_empty(), "{}", p.name);
            }
        }
        assert_eq!(PRESETS.len(), 11);
    }

    #[test]
    fn lookup_is_case_insensitive() {
        assert_eq!(find("figa").unwrap().name, "figA");
        assert!(find("fig10").is_none());
    }

    #[test]
    fn fig1_has_twenty_points() {
        assert_eq!(find("fig1").unwrap().config().points().len(), 20);
    }
}

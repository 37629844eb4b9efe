//! Flat `section.key = value` configuration.
//!
//! Every key has a default. Lines starting with `#` and blank lines are
//! ignored; a `#` after a value starts a comment.

use std::fs;
use std::path::Path;

use netgame::Variant;
use netgame_encounter::EncounterConfig;

use crate::error::ExperimentError;

/// Settings of the experiment layer itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub encounters: usize,
    pub seed: u64,
    /// Counterfactual rollouts per horizontal candidate.
    pub rollouts: usize,
    /// Largest tolerated fraction of failed encounters (or failed rollouts
    /// per horizontal candidate).
    pub failure_threshold: f64,
    pub bootstrap: usize,
    pub histogram_bins: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            encounters: 200,
            seed: 1,
            rollouts: 50,
            failure_threshold: 0.1,
            bootstrap: 2000,
            histogram_bins: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Config {
    pub encounter: EncounterConfig,
    pub run: RunSettings,
}

macro_rules! keyed {
    ($($key:literal => $kind:ident ($($path:tt)+);)*) => {
        /// Every configuration key, in manifest order.
        pub const KEYS: &[&str] = &[$($key),*];

        fn set_field(c: &mut Config, key: &str, value: &str) -> Result<(), ExperimentError> {
            match key {
                $($key => c.$($path)+ = parse::$kind(key, value)?,)*
                "strategy.variant" => c.encounter.game.strategy.variant = parse::variant(key, value)?,
                "sim.mode" => c.encounter.horizontal = parse::mode(key, value)?,
                "proposal.kinematic_sigma" => c.encounter.game.proposal.kinematic_sigma = parse::list(key, value)?,
                "proposal.tcas_sigma" => c.encounter.game.proposal.tcas_sigma = parse::list(key, value)?,
                _ => return Err(ExperimentError::UnknownKey(key.to_string())),
            }
            Ok(())
        }

        fn get_field(c: &Config, key: &str) -> Option<String> {
            Some(match key {
                $($key => c.$($path)+.to_string(),)*
                "strategy.variant" => fmt::variant(c.encounter.game.strategy.variant).to_string(),
                "sim.mode" => (if c.encounter.horizontal { "horizontal" } else { "vertical" }).to_string(),
                "proposal.kinematic_sigma" => fmt::list(&c.encounter.game.proposal.kinematic_sigma),
                "proposal.tcas_sigma" => fmt::list(&c.encounter.game.proposal.tcas_sigma),
                _ => return None,
            })
        }
    };
}

const EXTRA_KEYS: &[&str] = &[
    "strategy.variant",
    "sim.mode",
    "proposal.kinematic_sigma",
    "proposal.tcas_sigma",
];

keyed! {
    "noise.M_w" => real (encounter.game.pilot_noise);
    "noise.M_WTCAS" => real (encounter.game.tcas_noise);
    "tcas.DMOD" => real (encounter.game.tcas.dmod);
    "tcas.ZTHR" => real (encounter.game.tcas.zthr);
    "tcas.tau" => real (encounter.game.tcas.tau);
    "tcas.ALIM" => real (encounter.game.tcas.alim);
    "tcas.response_delay" => real (encounter.game.tcas.response_delay);
    "tcas.response_accel" => real (encounter.game.tcas.response_accel);
    "tcas.descend_inhibit" => real (encounter.game.tcas.descend_inhibit);
    "utility.alpha1" => real (encounter.game.utility.alpha1);
    "utility.alpha2" => real (encounter.game.utility.alpha2);
    "utility.alpha3" => real (encounter.game.utility.alpha3);
    "utility.delta" => real (encounter.game.utility.delta);
    "strategy.K" => int (encounter.game.strategy.level);
    "strategy.M" => count (encounter.game.strategy.move_samples);
    "strategy.M_prime" => count (encounter.game.strategy.env_samples);
    "strategy.level0_sigma" => real (encounter.game.strategy.level0_sigma);
    "strategy.rejection_cap" => long (encounter.game.limits.rejection_cap);
    "strategy.redraw_factor" => count (encounter.game.limits.redraw_factor);
    "proposal.q" => real (encounter.game.proposal.intent_keep);
    "filters.tau_theta_dot" => real (encounter.game.filters.theta_dot);
    "filters.tau_z_dot" => real (encounter.game.filters.z_dot);
    "filters.tau_f" => real (encounter.game.filters.f);
    "sim.dt" => real (encounter.game.dt);
    "sim.reaction_delay" => real (encounter.game.reaction_delay);
    "sim.lookahead" => real (encounter.game.lookahead);
    "sim.max_duration" => real (encounter.max_duration);
    "sim.nmac_horizontal" => real (encounter.nmac_horizontal);
    "sim.nmac_vertical" => real (encounter.nmac_vertical);
    "generator.t_target_min" => real (encounter.generator.t_target.0);
    "generator.t_target_max" => real (encounter.generator.t_target.1);
    "generator.speed_min" => real (encounter.generator.speed.0);
    "generator.speed_max" => real (encounter.generator.speed.1);
    "generator.vertical_rate_min" => real (encounter.generator.vertical_rate.0);
    "generator.vertical_rate_max" => real (encounter.generator.vertical_rate.1);
    "generator.cpa_altitude_min" => real (encounter.generator.cpa_altitude.0);
    "generator.cpa_altitude_max" => real (encounter.generator.cpa_altitude.1);
    "generator.hmd_min" => real (encounter.generator.hmd.0);
    "generator.hmd_max" => real (encounter.generator.hmd.1);
    "generator.vmd_min" => real (encounter.generator.vmd.0);
    "generator.vmd_max" => real (encounter.generator.vmd.1);
    "generator.heading_min" => real (encounter.generator.heading.0);
    "generator.heading_max" => real (encounter.generator.heading.1);
    "generator.approach_angle_min" => real (encounter.generator.approach_angle.0);
    "generator.approach_angle_max" => real (encounter.generator.approach_angle.1);
    "generator.min_closing_speed" => real (encounter.generator.min_closing_speed);
    "generator.max_attempts" => count (encounter.generator.max_attempts);
    "run.encounters" => count (run.encounters);
    "run.seed" => long (run.seed);
    "run.rollouts" => count (run.rollouts);
    "run.failure_threshold" => real (run.failure_threshold);
    "run.bootstrap" => count (run.bootstrap);
    "run.histogram_bins" => count (run.histogram_bins);
}

impl Config {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ExperimentError> {
        set_field(self, key.trim(), value.trim())
    }

    pub fn get(&self, key: &str) -> Option<String> {
        get_field(self, key)
    }

    pub fn has_key(key: &str) -> bool {
        KEYS.contains(&key) || EXTRA_KEYS.contains(&key)
    }

    /// Applies `key = value` lines on top of the current values.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ExperimentError> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ExperimentError::Parse {
                line: n + 1,
                reason: format!("expected `key = value`, got `{line}`"),
            })?;
            self.set(key, value).map_err(|e| ExperimentError::Parse {
                line: n + 1,
                reason: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        let mut c = Config::default();
        c.apply_text(text)?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = fs::read_to_string(path).map_err(|e| ExperimentError::ConfigFile {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::parse(&text)
    }

    /// Every key with its current value, in a stable order.
    pub fn resolved(&self) -> Vec<(String, String)> {
        KEYS.iter()
            .chain(EXTRA_KEYS)
            .map(|k| (k.to_string(), get_field(self, k).unwrap_or_default()))
            .collect()
    }

    /// The resolved configuration in the file format; parsing it back gives
    /// the same configuration.
    pub fn to_text(&self) -> String {
        self.resolved()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        self.encounter.validate()?;
        let r = &self.run;
        if r.encounters == 0 || r.rollouts == 0 || r.bootstrap == 0 || r.histogram_bins == 0 {
            return Err(ExperimentError::InvalidRun(
                "run.encounters, run.rollouts, run.bootstrap and run.histogram_bins must be at least 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&r.failure_threshold) {
            return Err(ExperimentError::InvalidRun(format!(
                "run.failure_threshold must lie in [0, 1], got {}",
                r.failure_threshold
            )));
        }
        Ok(())
    }
}

mod parse {
    use super::*;

    fn bad(key: &str, value: &str, reason: impl ToString) -> ExperimentError {
        ExperimentError::BadValue {
            key: key.into(),
            value: value.into(),
            reason: reason.to_string(),
        }
    }

    pub fn real(key: &str, value: &str) -> Result<f64, ExperimentError> {
        let v: f64 = value.parse().map_err(|e| bad(key, value, e))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad(key, value, "not finite"))
        }
    }

    pub fn int(key: &str, value: &str) -> Result<u32, ExperimentError> {
        value.parse().map_err(|e| bad(key, value, e))
    }

    pub fn count(key: &str, value: &str) -> Result<usize, ExperimentError> {
        value.parse().map_err(|e| bad(key, value, e))
    }

    pub fn long(key: &str, value: &str) -> Result<u64, ExperimentError> {
        value.parse().map_err(|e| bad(key, value, e))
    }

    pub fn variant(key: &str, value: &str) -> Result<Variant, ExperimentError> {
        match value {
            "relaxed" => Ok(Variant::Relaxed),
            "d_relaxed" => Ok(Variant::DRelaxed),
            "likelihood_weighted" => Ok(Variant::LikelihoodWeighted),
            _ => Err(bad(
                key,
                value,
                "expected relaxed, d_relaxed or likelihood_weighted",
            )),
        }
    }

    pub fn mode(key: &str, value: &str) -> Result<bool, ExperimentError> {
        match value {
            "vertical" => Ok(false),
            "horizontal" => Ok(true),
            _ => Err(bad(key, value, "expected vertical or horizontal")),
        }
    }

    pub fn list<const N: usize>(key: &str, value: &str) -> Result<[f64; N], ExperimentError> {
        let items: Vec<f64> = value
            .split(',')
            .map(|s| real(key, s.trim()))
            .collect::<Result<_, _>>()?;
        items
            .try_into()
            .map_err(|v: Vec<f64>| bad(key, value, format!("expected {N} values, got {}", v.len())))
    }
}

mod fmt {
    use netgame::Variant;

    pub fn variant(v: Variant) -> &'static str {
        match v {
            Variant::Relaxed => "relaxed",
            Variant::DRelaxed => "d_relaxed",
            Variant::LikelihoodWeighted => "likelihood_weighted",
        }
    }

    pub fn list(v: &[f64]) -> String {
        v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
    }
}

//! The run configuration: one JSON document per run.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use sseq_core::abgroup::{ConcreteGroup, GroupExpr, GroupHom, HomRule, Symbol};
use sseq_core::serre::{BrauerData, FieldModel, SolveWindow};

use crate::Failure;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Pages,
    Solve,
    SbChow,
    Torsion,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Pages => "pages",
            Command::Solve => "solve",
            Command::SbChow => "sb-chow",
            Command::Torsion => "torsion",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// When present it must agree with the subcommand.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceConfig>,
    #[serde(default)]
    pub window: WindowConfig,
    #[serde(default)]
    pub field: FieldConfig,
    #[serde(default)]
    pub checks: ChecksConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion: Option<TorsionConfig>,
    /// 0 leaves the deduction log out of the report.
    #[serde(default = "default_verbosity")]
    pub verbosity: u8,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InstanceConfig {
    Bpgl { n: u32 },
    Bbgm,
    Sb(BrauerConfig),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BrauerConfig {
    pub n: u32,
    /// Order of the class in the Brauer group; 1 is the split case.
    pub order: u32,
    #[serde(default)]
    pub ker2: GroupSpec,
    #[serde(default)]
    pub ker3: GroupSpec,
    #[serde(default)]
    pub mul_a: MapSpec,
    /// Coordinates of the class in a concrete `ker2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Vec<i64>>,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupSpec {
    #[default]
    Symbolic,
    #[serde(untagged)]
    Concrete(ConcreteSpec),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConcreteSpec {
    #[serde(default)]
    pub free: usize,
    #[serde(default)]
    pub torsion: Vec<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapSpec {
    #[default]
    Symbolic,
    Zero,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub p_min: i64,
    pub p_max: i64,
    #[serde(default)]
    pub q_min: i64,
    pub q_max: i64,
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig { p_min: 0, p_max: 8, q_min: 0, q_max: 2 }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    #[serde(default)]
    pub roots_of_unity: bool,
    #[serde(default)]
    pub overrides: Vec<Override>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Override {
    pub p: i64,
    pub q: i64,
    pub group: ConcreteSpec,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksConfig {
    #[serde(default)]
    pub vanishing: bool,
    #[serde(default)]
    pub invert_n: bool,
    #[serde(default)]
    pub abutment: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorsionConfig {
    /// Every odd prime dividing `n` is run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Explicit odd primes, used instead of `n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primes: Option<Vec<u32>>,
    pub k_max: u32,
    #[serde(default = "default_max_degree")]
    pub max_degree: i64,
}

fn default_verbosity() -> u8 {
    1
}

fn default_max_degree() -> i64 {
    1000
}

const WINDOW_LIMIT: i64 = 64;
const K_LIMIT: u32 = 4;

fn bad<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Config(msg.into()))
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d: &u32| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        serde_json::from_str(text).map_err(|e| Failure::Config(format!("config: {e}")))
    }

    /// Canonical serialization, the input of the cache key.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn validate(&self, command: Command) -> Result<(), Failure> {
        if let Some(c) = self.command {
            if c != command {
                return bad(format!("config is for `{}`, not `{}`", c.name(), command.name()));
            }
        }
        let w = &self.window;
        if w.p_min > w.p_max || w.q_min > w.q_max || w.q_min < 0 {
            return bad(format!("window needs p_min ≤ p_max and 0 ≤ q_min ≤ q_max, got {w:?}"));
        }
        if w.p_max - w.p_min > WINDOW_LIMIT || w.q_max > WINDOW_LIMIT / 4 {
            return bad(format!("window {w:?} is larger than this driver accepts"));
        }
        match (command, &self.instance) {
            (Command::Torsion, _) => {
                let Some(t) = &self.torsion else { return bad("`torsion` needs a `torsion` section") };
                if t.k_max > K_LIMIT {
                    return bad(format!("k_max {} is above {K_LIMIT}", t.k_max));
                }
                match (&t.n, &t.primes) {
                    (Some(n), None) if *n >= 2 => {}
                    (Some(n), None) => return bad(format!("n = {n} must be at least 2")),
                    (None, Some(ps)) if !ps.is_empty() => {
                        if let Some(p) = ps.iter().find(|&&p| p == 2 || !is_prime(p)) {
                            return bad(format!("{p} is not an odd prime"));
                        }
                    }
                    _ => return bad("give exactly one of `n` and a nonempty `primes`"),
                }
            }
            (_, None) => return bad(format!("`{}` needs an `instance`", command.name())),
            (Command::SbChow, Some(InstanceConfig::Sb(_))) => {}
            (Command::SbChow, Some(_)) => return bad("`sb-chow` needs an instance of kind `sb`"),
            (_, Some(InstanceConfig::Bpgl { n })) if *n < 2 => return bad(format!("n = {n} must be at least 2")),
            _ => {}
        }
        for o in &self.field.overrides {
            if o.q < 0 || o.p > o.q {
                return bad(format!("override at ({}, {}): H^{{p,q}}(k) vanishes for p > q and q < 0", o.p, o.q));
            }
            o.group.check()?;
        }
        if let Some(InstanceConfig::Sb(b)) = &self.instance {
            for g in [&b.ker2, &b.ker3] {
                if let GroupSpec::Concrete(c) = g {
                    c.check()?;
                }
            }
            self.brauer_data(b)?;
        }
        Ok(())
    }

    pub fn field_model(&self) -> FieldModel {
        let mut f = FieldModel::new();
        f.root_of_unity = self.field.roots_of_unity;
        f.overrides = self.field.overrides.iter().map(|o| ((o.p, o.q), o.group.expr())).collect::<BTreeMap<_, _>>();
        f
    }

    pub fn solve_window(&self) -> Result<SolveWindow, Failure> {
        SolveWindow::new((self.window.p_min, self.window.p_max), self.window.q_max).map_err(|e| Failure::Config(e.to_string()))
    }

    pub fn brauer_data(&self, b: &BrauerConfig) -> Result<BrauerData, Failure> {
        let mut data = if b.order == 1 { BrauerData::split(b.n) } else { BrauerData::symbolic(b.n, b.order) };
        if b.order != 1 {
            if let GroupSpec::Concrete(c) = &b.ker2 {
                data.ker2 = c.expr();
            }
            if let GroupSpec::Concrete(c) = &b.ker3 {
                data.ker3 = c.expr();
            }
            let units = GroupExpr::symbol(Symbol::units());
            data.mul_a = match b.mul_a {
                MapSpec::Zero => GroupHom::zero(units, data.ker3.normalized()),
                MapSpec::Symbolic => GroupHom::new(units, data.ker3.normalized(), HomRule::Named("mulA".into())),
            };
            data.class = b.class.clone();
        }
        data.validate().map_err(|e| Failure::Config(e.to_string()))?;
        Ok(data)
    }
}

impl ConcreteSpec {
    fn check(&self) -> Result<(), Failure> {
        if self.torsion.contains(&0) {
            return bad("torsion orders must be positive; use `free` for copies of Z");
        }
        Ok(())
    }

    pub fn group(&self) -> ConcreteGroup {
        ConcreteGroup::from_cyclic_orders(self.free, self.torsion.iter().map(|&m| BigUint::from(m)))
    }

    pub fn expr(&self) -> GroupExpr {
        GroupExpr::from(&self.group())
    }
}

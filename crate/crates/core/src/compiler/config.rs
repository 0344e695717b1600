use std::fmt;
use std::str::FromStr;

/// How the theory enters compilation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Theory checks and propagation during search.
    Lazy,
    /// Theory lemmas added up front, then a purely propositional search.
    Eager,
    /// The theory is ignored; atoms are plain Boolean variables.
    Agnostic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Heuristic {
    /// Most occurrences in residual clauses, lowest id on ties.
    Dlcs,
    /// Lowest unassigned variable.
    FixedOrder,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lazy" => Ok(Mode::Lazy),
            "eager" => Ok(Mode::Eager),
            "agnostic" => Ok(Mode::Agnostic),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Lazy => "lazy",
            Mode::Eager => "eager",
            Mode::Agnostic => "agnostic",
        })
    }
}

impl FromStr for Heuristic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dlcs" => Ok(Heuristic::Dlcs),
            "fixed" | "fixed_order" => Ok(Heuristic::FixedOrder),
            _ => Err(format!("unknown heuristic `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompileConfig {
    pub mode: Mode,
    pub components: bool,
    pub cache: bool,
    pub learning: bool,
    /// Entailment checks per theory propagation round; `None` means twice the
    /// number of candidate atoms.
    pub propagation_budget: Option<usize>,
    pub heuristic: Heuristic,
    /// Also tag decided and unit-implied literals that the rest of the trail
    /// entails, so [`crate::ddnnf::condense`] can drop them.
    pub condense_output: bool,
    /// Accepted for reproducibility of runs; both heuristics are deterministic.
    pub random_seed: u64,
    /// Largest lemma size for eager mode; `None` means all linear atoms.
    pub eager_k: Option<usize>,
    /// Recompile every cache hit without the cache and compare counts.
    pub audit_cache: bool,
}

impl Default for CompileConfig {
    fn default() -> Self {
        CompileConfig {
            mode: Mode::Lazy,
            components: true,
            cache: true,
            learning: true,
            propagation_budget: None,
            heuristic: Heuristic::Dlcs,
            condense_output: false,
            random_seed: 0,
            eager_k: None,
            audit_cache: false,
        }
    }
}

impl CompileConfig {
    pub fn with_mode(mode: Mode) -> Self {
        CompileConfig { mode, ..Self::default() }
    }

    /// Whether the search itself consults the theory solver.
    pub fn theory_hooks(&self) -> bool {
        self.mode == Mode::Lazy
    }
}

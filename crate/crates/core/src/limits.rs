/// Search caps and size limits shared by every module.
///
/// Exceeding a cap yields [`crate::Error::Budget`]; nothing is silently truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Visited states for group searches (monomorphisms, word equations).
    pub search_states: u64,
    /// Groups up to this order get a full associativity check.
    pub assoc_check_order: usize,
    /// Number of cycles (or bicycles) an enumeration may produce.
    pub max_cycles: u64,
    /// Edge cap for cycle and bicycle enumeration.
    pub max_graph_edges: usize,
    /// Ground-set cap for explicit matroid and hypergraph tables.
    pub max_ground: usize,
    /// Ground-set cap for coloured systems handed to registries.
    pub max_system_ground: usize,
    pub max_colours: usize,
    /// Complement ground cap for coloured sums.
    pub max_sum_ground: usize,
    /// Complement ground cap for cleft search.
    pub max_cleft_ground: usize,
    /// Complements x interpretations tried by a cleft search.
    pub cleft_states: u64,
    pub max_delta: u32,
    pub max_formula_nodes: usize,
    /// Ambient group order cap for conviviality graphs.
    pub max_conviviality_order: usize,
    /// Enables rayon inside the enumerations that support it.
    pub parallel: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            search_states: 10_000_000,
            assoc_check_order: 64,
            max_cycles: 1_000_000,
            max_graph_edges: 30,
            max_ground: 20,
            max_system_ground: 12,
            max_colours: 6,
            max_sum_ground: 6,
            max_cleft_ground: 3,
            cleft_states: 10_000_000,
            max_delta: 8,
            max_formula_nodes: 64,
            max_conviviality_order: 48,
            parallel: false,
        }
    }
}

impl Limits {
    /// Applies one `key=value` setting, as found in `--config` files.
    pub fn set(&mut self, key: &str, value: &str) -> crate::Result<()> {
        let num = || {
            value
                .parse::<u64>()
                .map_err(|_| crate::Error::Invalid(format!("config `{key}`: `{value}` is not a number")))
        };
        match key {
            "search_states" => self.search_states = num()?,
            "assoc_check_order" => self.assoc_check_order = num()? as usize,
            "max_cycles" => self.max_cycles = num()?,
            "max_graph_edges" => self.max_graph_edges = (num()? as usize).min(128),
            "max_ground" => self.max_ground = (num()? as usize).min(26),
            "max_system_ground" => self.max_system_ground = (num()? as usize).min(20),
            "max_colours" => self.max_colours = num()? as usize,
            "max_sum_ground" => self.max_sum_ground = (num()? as usize).min(12),
            "max_cleft_ground" => self.max_cleft_ground = (num()? as usize).min(4),
            "cleft_states" => self.cleft_states = num()?,
            "max_delta" => self.max_delta = (num()? as u32).min(12),
            "max_formula_nodes" => self.max_formula_nodes = num()? as usize,
            "max_conviviality_order" => self.max_conviviality_order = num()? as usize,
            "parallel" => self.parallel = matches!(value, "1" | "true" | "yes"),
            _ => return Err(crate::Error::Invalid(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }
}

use clap::{Args, ValueEnum};

use super::CliError;
use crate::group::{Element, GroupSpec};
use crate::tseq::{
    EpsilonRule, HEnumeration, Lemma2Params, Lemma4Params, Lemma5Params, Lemma5Variant, OrderTail, OrderTarget,
    ResidueZero, SequenceRecipe,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Epsilon {
    AllOnes,
    ZeroAtNu,
}

/// Recipe selection shared by the sequence commands.
#[derive(Debug, Clone, Args)]
pub struct RecipeArgs {
    /// lemma2, lemma3, lemma4, lemma5, constant, or `@file.json` holding a
    /// serialized recipe.
    #[arg(long)]
    pub recipe: String,
    #[arg(long)]
    pub p: Option<u64>,
    /// The group H of the K ⊕ H constructions.
    #[arg(long = "H")]
    pub h: Option<String>,
    /// Leading coordinate for lemma4, as `c/p^t` or `0`.
    #[arg(long, default_value = "0")]
    pub e0: String,
    #[arg(long, value_enum, default_value_t = Epsilon::AllOnes)]
    pub epsilon: Epsilon,
    /// Orders u_j of the explicit prefix (lemma5).
    #[arg(long, value_delimiter = ',')]
    pub orders: Vec<u64>,
    /// Multipliers c_j with e'_j = c_j·e_j for the prefix (lemma5).
    #[arg(long, value_delimiter = ',')]
    pub multipliers: Vec<u64>,
    /// Constant order past the prefix (lemma5, variant a).
    #[arg(long, default_value_t = 4)]
    pub tail_order: u64,
    /// Multiplier past the prefix (lemma5).
    #[arg(long, default_value_t = 2)]
    pub tail_multiplier: u64,
    /// Unbounded orders p, p², … past the prefix (lemma5, variant b).
    #[arg(long)]
    pub ladder: Option<u64>,
    /// First index of the constant-order stretch (lemma5, variant a).
    #[arg(long, default_value_t = 0)]
    pub j0: u64,
    /// Ambient group of the constant fixture.
    #[arg(long = "G")]
    pub g: Option<String>,
    /// Value of the constant fixture.
    #[arg(long)]
    pub value: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub first: u64,
}

impl RecipeArgs {
    fn need<T: Clone>(&self, v: &Option<T>, flag: &str) -> Result<T, CliError> {
        v.clone().ok_or_else(|| CliError::Usage(format!("recipe {} needs --{flag}", self.recipe)))
    }

    pub fn build(&self) -> Result<SequenceRecipe, CliError> {
        if let Some(path) = self.recipe.strip_prefix('@') {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::File { path: path.into(), message: e.to_string() })?;
            return Ok(serde_json::from_str(&text)?);
        }
        let h = || -> Result<GroupSpec, CliError> { Ok(GroupSpec::parse(&self.need(&self.h, "H")?)?) };
        let recipe = match self.recipe.as_str() {
            "lemma2" => SequenceRecipe::Lemma2(Lemma2Params {
                p: self.need(&self.p, "p")?,
                h: h()?,
                enumeration: HEnumeration::Default,
                epsilon: match self.epsilon {
                    Epsilon::AllOnes => EpsilonRule::AllOnes,
                    Epsilon::ZeroAtNu => EpsilonRule::ZeroAtNu,
                },
                residue_zero: ResidueZero::ZeroElement,
            }),
            "lemma3" => SequenceRecipe::lemma3(self.need(&self.p, "p")?, h()?),
            "lemma4" => SequenceRecipe::Lemma4(Lemma4Params {
                p: self.need(&self.p, "p")?,
                e0: self.e0.clone(),
                h: h()?,
                enumeration: HEnumeration::Default,
            }),
            "lemma5" => {
                if self.orders.len() != self.multipliers.len() {
                    return Err(CliError::Usage("--orders and --multipliers must have equal length".into()));
                }
                let prefix = self
                    .orders
                    .iter()
                    .zip(&self.multipliers)
                    .map(|(&order, &target)| OrderTarget { order, target })
                    .collect();
                let (tail, variant) = match self.ladder {
                    Some(p) => (OrderTail::Ladder { p, target: self.tail_multiplier }, Lemma5Variant::B),
                    None => (
                        OrderTail::Constant { order: self.tail_order, target: self.tail_multiplier },
                        Lemma5Variant::A { j0: self.j0 },
                    ),
                };
                SequenceRecipe::Lemma5(Lemma5Params { prefix, tail, variant, d5: Default::default() })
            }
            "constant" => {
                let spec = GroupSpec::parse(&self.need(&self.g, "G")?)?;
                let value = Element::parse(std::sync::Arc::new(spec.clone()), &self.need(&self.value, "value")?)?;
                SequenceRecipe::constant(spec, &value, self.first)
            }
            other => return Err(CliError::Usage(format!("unknown recipe `{other}`"))),
        };
        Ok(recipe)
    }
}

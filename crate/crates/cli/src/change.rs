use beliefnet::epistemics::{EpistemicState, Ranking};
use beliefnet::logic::atom_names;
use beliefnet::operators::{
    dalal_revise, full_meet_contract, full_meet_revise, lex_revise, moderate_contract,
};
use beliefnet::{parse_formula, Vocabulary, WorldLabel, WorldSet};
use clap::Args;
use serde::Serialize;

use crate::{print_json, CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Revise,
    Contract,
}

#[derive(Args)]
pub struct ChangeArgs {
    /// Comma-separated atoms; inferred from the formulas when omitted.
    #[arg(long)]
    vocab: Option<String>,
    /// Current belief; defaults to the lowest layer of --ranking.
    #[arg(long)]
    belief: Option<String>,
    /// Input formula.
    #[arg(long)]
    input: String,
    /// full-meet, dalal or lex (revise); full-meet or moderate (contract).
    #[arg(long)]
    operator: String,
    /// Prior ranking as JSON layers of world labels such as
    /// `[["a=1 b=1"], ["a=0 b=1", "a=1 b=0", "a=0 b=0"]]`, or a path to such
    /// a file. Defaults to the belief's full-meet ranking.
    #[arg(long)]
    ranking: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Serialize)]
struct ChangeOutput {
    operator: String,
    vocabulary: Vec<String>,
    worlds: Vec<WorldLabel>,
    dnf: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    ranking: Option<Vec<Vec<WorldLabel>>>,
}

/// The explicit vocabulary, or the atoms of `formulas` in order of first
/// appearance.
pub fn resolve_vocab(explicit: Option<&str>, formulas: &[&str]) -> Result<Vocabulary, CliError> {
    if let Some(v) = explicit {
        return Vocabulary::parse_list(v).map_err(|e| CliError::Parse(e.to_string()));
    }
    let mut names: Vec<String> = Vec::new();
    for f in formulas {
        for n in atom_names(f).map_err(|e| CliError::Parse(format!("in `{f}`: {e}")))? {
            if !names.contains(&n) {
                names.push(n);
            }
        }
    }
    if names.is_empty() {
        return Err(CliError::Parse("no atoms to infer a vocabulary from; pass --vocab".into()));
    }
    Vocabulary::new(names).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn models(text: &str, vocab: &Vocabulary) -> Result<WorldSet, CliError> {
    let f = parse_formula(text, vocab).map_err(|e| CliError::Parse(format!("in `{text}`: {e}")))?;
    let u = vocab
        .full_universe()
        .map_err(|e| CliError::Semantic(e.to_string()))?;
    Ok(f.models(&u))
}

fn read_ranking(arg: &str, vocab: &Vocabulary) -> Result<Ranking, CliError> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Io(format!("{arg}: {e}")))?
    };
    let layers: Vec<Vec<WorldLabel>> =
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("ranking: {e}")))?;
    let u = vocab
        .full_universe()
        .map_err(|e| CliError::Semantic(e.to_string()))?;
    Ranking::from_layer_labels(&u, vocab, &layers).map_err(|e| CliError::Semantic(e.to_string()))
}

pub fn run(args: ChangeArgs, kind: Kind) -> CliResult {
    let formulas: Vec<&str> = args.belief.iter().map(String::as_str).chain([args.input.as_str()]).collect();
    let vocab = resolve_vocab(args.vocab.as_deref(), &formulas)?;
    let phi = models(&args.input, &vocab)?;
    let ranking = args.ranking.as_deref().map(|r| read_ranking(r, &vocab)).transpose()?;
    let state = match (&args.belief, ranking) {
        (Some(b), Some(rk)) => EpistemicState::new(models(b, &vocab)?, rk)
            .map_err(|e| CliError::Semantic(e.to_string()))?,
        (Some(b), None) => EpistemicState::full_meet(models(b, &vocab)?),
        (None, Some(rk)) => EpistemicState::from_ranking(rk),
        (None, None) => return Err(CliError::Parse("pass --belief or --ranking".into())),
    };

    let op = args.operator.as_str();
    let (belief, ranking) = match (kind, op) {
        (Kind::Revise, "full-meet" | "full-meet-revise") => {
            let s = full_meet_revise(state.belief(), &phi);
            (s.belief().clone(), Some(s.ranking().clone()))
        }
        (Kind::Revise, "dalal") => {
            if state.belief().is_empty() {
                return Err(CliError::Semantic(
                    "Dalal revision needs a consistent belief".into(),
                ));
            }
            (dalal_revise(state.belief(), &phi), None)
        }
        (Kind::Revise, "lex") => {
            let s = lex_revise(&state, &phi);
            (s.belief().clone(), Some(s.ranking().clone()))
        }
        (Kind::Contract, "full-meet" | "full-meet-contract") => {
            let s = full_meet_contract(state.belief(), &phi);
            (s.belief().clone(), Some(s.ranking().clone()))
        }
        (Kind::Contract, "moderate") => {
            let s = moderate_contract(&state, &phi);
            (s.belief().clone(), Some(s.ranking().clone()))
        }
        _ => {
            return Err(CliError::Parse(format!(
                "unknown operator `{op}` for {}",
                if kind == Kind::Revise { "revise" } else { "contract" }
            )))
        }
    };

    let out = ChangeOutput {
        operator: op.to_string(),
        vocabulary: vocab.atoms().to_vec(),
        worlds: belief.labels(&vocab),
        dnf: belief.to_dnf(&vocab),
        ranking: ranking.map(|r| r.to_layer_labels(&vocab)),
    };
    if args.json {
        print_json(&out);
    } else {
        println!("worlds: {{{}}}", join(&out.worlds));
        println!("dnf: {}", out.dnf);
        if let Some(layers) = &out.ranking {
            println!("ranking:");
            for (i, l) in layers.iter().enumerate() {
                println!("  {i}: {}", join(l));
            }
        }
    }
    Ok(())
}

pub fn join(labels: &[WorldLabel]) -> String {
    labels.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

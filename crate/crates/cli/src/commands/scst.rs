use std::path::Path;

use radreward::scst::{curve_to_csv, train_scst, ScstConfig, ScstError, ToyTask};

use crate::error::{CliError, Result};
use crate::input::{read, sha256_hex};
use crate::report::emit;

fn config_error(path: Option<&Path>, e: ScstError) -> CliError {
    let at = path.map_or_else(|| "config".to_string(), |p| p.display().to_string());
    CliError::Parse(format!("{at}: {e}"))
}

pub fn run(config: Option<&Path>, seed: Option<u64>, out: Option<&Path>) -> Result<()> {
    let mut cfg = match config {
        Some(path) => {
            let text = read("config", path, &mut Vec::new())?;
            ScstConfig::from_toml_str(&text).map_err(|e| config_error(config, e))?
        }
        None => ScstConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let task = ToyTask::bundled(cfg.reference.as_deref()).map_err(|e| config_error(config, e))?;
    let outcome = train_scst(&cfg, &task).map_err(|e| match e {
        ScstError::NonFiniteGradient { .. } => CliError::Runtime(e.to_string()),
        other => config_error(config, other),
    })?;
    for w in &outcome.warnings {
        eprintln!("radreward: warning: {w}");
    }
    emit(&curve_to_csv(&outcome.curve), out)?;

    let first = &outcome.curve[0];
    let last = outcome.final_point();
    eprintln!("config_hash   {}", sha256_hex(cfg.to_toml_string().as_bytes()));
    eprintln!("seed          {}", cfg.seed);
    eprintln!("iterations    {}", cfg.iterations);
    eprintln!(
        "greedy reward {:.6} -> {:.6} (upper bound {:.6})",
        first.greedy_reward,
        last.greedy_reward,
        cfg.weights.upper_bound()
    );
    eprintln!("final greedy  {}", task.vocab.decode(&outcome.final_greedy).join(" "));
    Ok(())
}

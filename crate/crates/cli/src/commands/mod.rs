mod fetch;
mod fit;
mod gravity;
mod map;
mod pei;

use crate::error::CliResult;
use crate::{Cli, Command};

pub fn dispatch(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Fetch(a) => fetch::run(cli, a),
        Command::FitDistances(a) => fit::run(cli, a),
        Command::SimulateGravity(a) => gravity::run(cli, a),
        Command::ComputePei(a) => pei::run(cli, a),
        Command::ExportMap(a) => map::run(cli, a),
    }
}

/// Fixed-width number for report tables.
pub(crate) fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.6}")
    }
}

use proxim_core::choropleth::ShareMap;
use proxim_core::pei::name_share_by_state;
use proxim_core::NameKey;
use serde::Serialize;

use super::pei::load_panel;
use crate::error::CliResult;
use crate::output::write;
use crate::provenance::Provenance;
use crate::{Cli, MapArgs};

#[derive(Serialize)]
struct Params<'a> {
    command: &'static str,
    args: &'a MapArgs,
}

pub fn run(cli: &Cli, args: &MapArgs) -> CliResult<()> {
    let mut prov = Provenance::new("export-map", &Params { command: "export-map", args }, None);
    let panel = load_panel(&args.data, None, args.year..=args.year, &mut prov)?;
    let key = NameKey::new(&args.name, args.sex);
    let map = ShareMap::new(key.clone(), args.year, name_share_by_state(&key, args.year, &panel));

    let stem = format!("map_{}_{}_{}", key.name, key.sex, args.year);
    let svg = map.to_svg();
    let (first, rest) = svg.split_once('\n').expect("svg has a root line");
    write(&cli.out_dir, &format!("{stem}.svg"), &format!("{first}\n{}{rest}", prov.xml_comment()))?;
    write(&cli.out_dir, &format!("{stem}.csv"), &format!("{}{}", prov.comment_block(), map.to_csv()))?;

    if map.is_empty() {
        eprintln!("warning: {key} is not listed in any state in {}; wrote an empty map", args.year);
    } else if !cli.quiet {
        let present: Vec<String> = map
            .shares
            .iter()
            .filter(|(_, &v)| v > 0.0)
            .map(|(s, v)| format!("{s} {:.3}%", 100.0 * v))
            .collect();
        println!("{key} {}: {}", args.year, present.join(", "));
    }
    Ok(())
}

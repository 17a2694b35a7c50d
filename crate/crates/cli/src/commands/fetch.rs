//! The only subcommand that touches the network.

use std::io::{Cursor, Read};
use std::path::Path;

use crate::error::{CliError, CliResult};
use crate::output::ensure_dir;
use crate::{Cli, Dataset, FetchArgs};

const NATIONAL_URL: &str = "https://www.ssa.gov/oact/babynames/names.zip";
const STATES_URL: &str = "https://www.ssa.gov/oact/babynames/state/namesbystate.zip";
const MAX_BYTES: u64 = 200 * 1024 * 1024;

fn download(url: &str) -> CliResult<Vec<u8>> {
    let mut resp = ureq::get(url).call().map_err(|e| CliError::Fetch(format!("{url}: {e}")))?;
    resp.body_mut()
        .with_config()
        .limit(MAX_BYTES)
        .read_to_vec()
        .map_err(|e| CliError::Fetch(format!("{url}: {e}")))
}

/// Extracts the `.txt` members of a zip archive into `dest`.
fn unpack(bytes: Vec<u8>, dest: &Path) -> CliResult<usize> {
    ensure_dir(dest)?;
    let mut archive = zip::ZipArchive::new(Cursor::new(bytes)).map_err(|e| CliError::Fetch(e.to_string()))?;
    let mut written = 0;
    for i in 0..archive.len() {
        let mut file = archive.by_index(i).map_err(|e| CliError::Fetch(e.to_string()))?;
        let Some(name) = file.enclosed_name().and_then(|p| p.file_name().map(|n| n.to_owned())) else {
            continue;
        };
        if !name.to_string_lossy().to_ascii_lowercase().ends_with(".txt") {
            continue;
        }
        let mut buf = Vec::with_capacity(file.size() as usize);
        file.read_to_end(&mut buf).map_err(|e| CliError::Fetch(e.to_string()))?;
        let path = dest.join(&name);
        std::fs::write(&path, buf).map_err(|source| CliError::Write { path, source })?;
        written += 1;
    }
    Ok(written)
}

pub fn run(cli: &Cli, args: &FetchArgs) -> CliResult<()> {
    let mut jobs = Vec::new();
    if matches!(args.dataset, Dataset::National | Dataset::Both) {
        jobs.push((NATIONAL_URL, args.dest.join("national")));
    }
    if matches!(args.dataset, Dataset::States | Dataset::Both) {
        jobs.push((STATES_URL, args.dest.join("states")));
    }
    for (url, dest) in jobs {
        let n = unpack(download(url)?, &dest)?;
        if !cli.quiet {
            println!("{url}: {n} files -> {}", dest.display());
        }
    }
    Ok(())
}

//! Persist distributions to JSON and read them back without losing a bit.
//!
//! Floats are written with enough digits to pin down the exact 64-bit
//! value, and equal inputs always serialize to equal bytes, which makes
//! the files safe to diff and to cache.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use uncertkit::datasets::{generate_blobs, BlobSpec};
use uncertkit::io::{load_distribution_file, save_distribution_file, DistributionFile};

fn out_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../target/examples");
    fs::create_dir_all(&dir).expect("create output directory");
    dir
}

fn main() -> uncertkit::Result<()> {
    let dists = generate_blobs(&BlobSpec::new(4, 3, 99))?;
    let mut provenance = BTreeMap::new();
    provenance.insert("generator".to_string(), "blobs".to_string());
    provenance.insert("seed".to_string(), "99".to_string());

    let path = out_dir().join("blobs.json");
    let file = DistributionFile {
        distributions: dists,
        provenance,
    };
    save_distribution_file(&file, &path)?;
    println!(
        "wrote {} ({} bytes)",
        path.display(),
        fs::metadata(&path).map(|m| m.len()).unwrap_or(0),
    );

    let loaded = load_distribution_file(&path)?;
    assert_eq!(loaded, file, "round trip is exact, not approximate");
    println!(
        "reloaded {} distributions, provenance seed = {}",
        loaded.distributions.len(),
        loaded.provenance["seed"],
    );

    // Loading re-validates everything, so a corrupted covariance is
    // rejected with a parse error instead of flowing downstream.
    let broken = fs::read_to_string(&path)
        .unwrap()
        .replacen("\"version\":1", "\"version\":3", 1);
    let bad_path = out_dir().join("unsupported.json");
    fs::write(&bad_path, broken).unwrap();
    match load_distribution_file(&bad_path) {
        Err(e) => println!("future version correctly refused: {e}"),
        Ok(_) => unreachable!("version gate must reject"),
    }
    Ok(())
}

//! Dataset directories: one `*.hier` document per attribute plus
//! `objects.csv` and `users.csv`.

use std::fs;
use std::path::{Path, PathBuf};

use gmco_core::hierarchy::Hierarchy;
use gmco_core::model::{io, Domain, Matcher, Problem, Similarity};

use crate::{io_err, Result, WorkbenchError};

pub const DATA_DIR_ENV: &str = "GMCO_DATA_DIR";
pub const OBJECTS_FILE: &str = "objects.csv";
pub const USERS_FILE: &str = "users.csv";

/// `$GMCO_DATA_DIR`, or `data` when unset.
pub fn default_data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("data"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

/// Hierarchy files of `dir`, sorted by name.
pub fn hierarchy_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| io_err(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "hier"))
        .collect();
    v.sort();
    if v.is_empty() {
        return Err(io_err(dir, "no .hier files"));
    }
    Ok(v)
}

pub fn load_hierarchy(path: &Path) -> Result<Hierarchy> {
    Hierarchy::parse(&read(path)?).map_err(|e| io_err(path, e))
}

/// Column names of an objects or users file.
fn header_names(text: &str) -> Vec<String> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    r.headers().map(|h| h.iter().map(String::from).collect()).unwrap_or_default()
}

/// Loads a problem from explicit files. Attributes take the column order of
/// the objects file.
pub fn load_files(hiers: &[PathBuf], objects: &Path, users: &Path, similarity: Similarity) -> Result<Problem> {
    let mut hs = hiers.iter().map(|p| load_hierarchy(p)).collect::<Result<Vec<_>>>()?;
    let otext = read(objects)?;
    let cols = header_names(&otext);
    hs.sort_by_key(|h| cols.iter().position(|c| c == h.name()).unwrap_or(usize::MAX));
    let mut domain = Domain::new(hs)?;
    let objs = io::parse_objects(&otext, &mut domain, &objects.display().to_string())?;
    let us = io::parse_users(&read(users)?, &domain, &users.display().to_string())?;
    Ok(Problem::new(domain, objs, us, Matcher::new(similarity))?)
}

pub fn load_dir(dir: &Path, similarity: Similarity) -> Result<Problem> {
    load_files(
        &hierarchy_files(dir)?,
        &dir.join(OBJECTS_FILE),
        &dir.join(USERS_FILE),
        similarity,
    )
}

/// File name used for a hierarchy when writing a dataset.
pub fn hierarchy_file_name(h: &Hierarchy) -> String {
    let safe: String = h
        .name()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' })
        .collect();
    format!("{safe}.hier")
}

/// Writes `p` as a dataset directory; returns the files written.
pub fn write_dir(dir: &Path, p: &Problem) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut files = Vec::new();
    let mut put = |name: String, text: String| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|e| io_err(&path, e))?;
        files.push(path);
        Ok(())
    };
    let mut names: Vec<String> = Vec::new();
    for a in p.domain.attributes() {
        let n = hierarchy_file_name(&a.hierarchy);
        if names.contains(&n) {
            return Err(WorkbenchError::Config(format!("two hierarchies map to file `{n}`")));
        }
        names.push(n.clone());
        put(n, a.hierarchy.to_document())?;
    }
    put(OBJECTS_FILE.into(), io::write_objects(&p.domain, &p.objects))?;
    put(USERS_FILE.into(), io::write_users(&p.domain, &p.users))?;
    Ok(files)
}

/// The miniature preference fixture: restaurants rated by a small panel,
/// with the list of objects the panel agreed on, best first.
pub mod fixture {
    pub const HIERARCHIES: [(&str, &str); 3] = [
        ("cuisine.hier", include_str!("../fixtures/preferences/cuisine.hier")),
        ("area.hier", include_str!("../fixtures/preferences/area.hier")),
        ("price.hier", include_str!("../fixtures/preferences/price.hier")),
    ];
    pub const OBJECTS: &str = include_str!("../fixtures/preferences/objects.csv");
    pub const USERS: &str = include_str!("../fixtures/preferences/users.csv");
    pub const TRUTH: &str = include_str!("../fixtures/preferences/truth.txt");

    /// Ground-truth ids, best first.
    pub fn truth() -> Vec<String> {
        super::parse_truth(TRUTH)
    }
}

/// Ground-truth list: one id per line, best first; `#` lines are comments.
pub fn parse_truth(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect()
}

/// Loads the bundled preference fixture.
pub fn preferences_fixture(similarity: Similarity) -> Result<Problem> {
    let hs = fixture::HIERARCHIES
        .iter()
        .map(|(n, t)| Hierarchy::parse(t).map_err(|e| io_err(*n, e)))
        .collect::<Result<Vec<_>>>()?;
    let mut domain = Domain::new(hs)?;
    let objs = io::parse_objects(fixture::OBJECTS, &mut domain, "preferences/objects.csv")?;
    let us = io::parse_users(fixture::USERS, &domain, "preferences/users.csv")?;
    Ok(Problem::new(domain, objs, us, Matcher::new(similarity))?)
}

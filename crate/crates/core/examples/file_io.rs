//! Generating tournaments and moving them through the `.trn` matrix format
//! and the arc-list format.

use tourney::generators::{layered, random_uniform, LayeredSpec};
use tourney::Tournament;

fn main() -> tourney::Result<()> {
    let t = random_uniform(6, 0x5eed)?;
    let trn = t.to_trn();
    print!("matrix form:\n{trn}");
    let arcs = t.to_arc_list();
    println!("arc list has {} lines", arcs.lines().count());

    assert_eq!(Tournament::parse_trn(&trn)?, t);
    assert_eq!(Tournament::parse_arc_list(&arcs, Some(6))?, t);

    let dir = std::env::temp_dir().join("tourney-file-io");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("layered.trn");
    let big = layered(&LayeredSpec::new(40, 0.25, 9)?)?;
    std::fs::write(&path, big.to_trn()).expect("write");
    let back = Tournament::parse_trn(&std::fs::read_to_string(&path).expect("read"))?;
    println!("round trip through {} ok: {}", path.display(), back == big);

    match Tournament::parse_trn("3\n010\n001\n") {
        Err(e) => println!("truncated file rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

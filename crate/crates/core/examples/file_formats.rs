//! Text formats and the CLI driven in-process: write a gain graph, read it
//! back, then run the frame-matroid verb on it.

use gain_workbench::formats::{parse_gaingraph, write_gaingraph};
use gain_workbench::{cli, Limits};

const GRAPH: &str = "\
gaingraph
group cyclic 4
vertex a
vertex b
edge e1 a b 1
edge e2 a b 3
loop L a 2
collection pair: e1 e2
";

fn main() -> gain_workbench::Result<()> {
    let lim = Limits::default();
    let file = parse_gaingraph(GRAPH, &lim)?;
    let text = write_gaingraph(&file.gaining);
    print!("{text}");
    println!("collections {:?}", file.collections);

    let path = std::env::temp_dir().join(format!("workbench-example-{}.gg", std::process::id()));
    std::fs::write(&path, &text)?;
    let (code, out) = cli::run(["workbench", "frame-matroid", "--gaingraph", path.to_str().unwrap()]);
    let _ = std::fs::remove_file(&path);
    print!("{out}");
    println!("exit {code}");
    Ok(())
}

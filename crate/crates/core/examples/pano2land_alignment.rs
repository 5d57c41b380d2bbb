//! Score landmark/panorama grounding matrices.

use landnav::alignment::{normalized_alignment, pano2land_score, GroundingMatrix};

fn show(name: &str, rows: &[&[u8]]) -> landnav::Result<()> {
    let m = GroundingMatrix::from_rows(rows)?;
    println!("{name}:");
    for r in rows {
        let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
        println!("  {}", cells.join(" "));
    }
    println!(
        "  score {} / {} panoramas = {:.3}\n",
        pano2land_score(&m),
        m.cols(),
        normalized_alignment(&m)
    );
    Ok(())
}

fn main() -> landnav::Result<()> {
    // Rows are landmarks in instruction order, columns panoramas in path order.
    show(
        "in order with a detour",
        &[&[1, 0, 0, 0, 0], &[0, 0, 1, 0, 0], &[0, 0, 0, 0, 1]],
    )?;
    show("out of order", &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])?;
    show("exact", &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])?;
    Ok(())
}

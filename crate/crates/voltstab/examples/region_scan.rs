//! Map of the load-state region where the voltage constraint has exactly
//! two positive real solutions. Completed trajectories never leave this
//! region; outside it a run cannot even start.
//!
//! ```bash
//! cargo run -p voltstab --example region_scan
//! ```

use voltstab::dynload::{valid_region_scan, RegionClass};
use voltstab::{DlLoadParams, NetworkParams};

fn main() {
    let net = NetworkParams::symmetric(1.0, 0.02).unwrap();
    let load = DlLoadParams::new(1.0, 1.0, 0.5625, 3.0, 1.0, 1.0).unwrap();

    let res = 31;
    let grid = valid_region_scan(&load, &net, (0.0, 30.0), (0.0, 30.0), res).expect("scan");

    println!("load-state map, x and y in [0, 30] ('#' = two admissible voltages):");
    println!();
    for iy in (0..res).rev() {
        let row: String = (0..res)
            .map(|ix| match grid.class_at(ix, iy) {
                RegionClass::TwoRoots => '#',
                RegionClass::FewerRoots => '.',
            })
            .collect();
        println!("  y={:>4.1} |{row}|", grid.y_values[iy]);
    }
    println!("         x: 0 .. 30");
    println!();

    let valid = grid.cells().filter(|(_, _, c)| *c == RegionClass::TwoRoots).count();
    println!("{valid} of {} cells admit two operating voltages", res * res);
    println!(
        "the stock equilibrium state (x = 1.0094, y = 1.0995) classifies as {:?}",
        voltstab::dynload::classify_region_point(
            &load,
            &net,
            &voltstab::LoadState::new(1.0094, 1.0995)
        )
        .unwrap()
    );
}

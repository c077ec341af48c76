//! Equilibrium analysis of the recovery load on the two-node circuit:
//! the steady-state voltage equation, the load states that hold each
//! equilibrium, and a fixed-point consistency check.
//!
//! ```bash
//! cargo run -p voltstab --example dl_equilibria
//! ```

use voltstab::dynload::{coupled_voltage, dl_equilibria, state_derivative, LoadState, RootPolicy};
use voltstab::{DlLoadParams, NetworkParams};

fn main() {
    let net = NetworkParams::symmetric(1.0, 0.02).unwrap();
    let load = DlLoadParams::new(1.0, 1.0, 0.5625, 3.0, 1.0, 1.0).unwrap();
    println!("recovery load: p0 = q0 = 1, a = {}, b = {}, tp = tq = 1 s", load.a, load.b);
    println!();

    let eqs = dl_equilibria(&load, &net).expect("equilibrium scan");
    println!("steady-state voltages ({} found):", eqs.len());
    for &v in &eqs {
        println!("  v2* = {v:.10}");
    }
    println!();

    println!("states holding each equilibrium (x = ps/pt, y = qs/qt):");
    for &v in &eqs {
        if v == 0.0 {
            continue;
        }
        let state = LoadState::new(
            load.ps(v).unwrap() / load.pt(v),
            load.qs(v).unwrap() / load.qt(v),
        );
        let (dx, dy) = state_derivative(&load, &state, v).unwrap();
        // The branch containing v2* decides which policy holds it fixed.
        let policy = if v > 0.5 { RootPolicy::Maximum } else { RootPolicy::Minimum };
        let solved = coupled_voltage(&load, &net, &state, policy).unwrap();
        println!(
            "  v2* = {:<13.8} x* = {:<11.8} y* = {:<11.8} dx/dt = {:+.1e} dy/dt = {:+.1e} \
             {:?} root = {:.8}",
            v, state.x, state.y, dx, dy, policy, solved
        );
    }
    println!();
    println!("a zero-load circuit has its single equilibrium at the source voltage:");
    let bare = DlLoadParams::new(0.0, 0.0, 0.5625, 3.0, 1.0, 1.0).unwrap();
    println!("  {:?}", dl_equilibria(&bare, &net).unwrap());
}

//! P-V (nose) curves of the two-node circuit at several power factor
//! ratios, with the maximum deliverable power located from the data.
//!
//! ```bash
//! cargo run -p voltstab --example pv_nose
//! ```

use voltstab::powerflow::pv_curve;
use voltstab::NetworkParams;

fn main() {
    let net = NetworkParams::symmetric(1.0, 0.02).expect("valid network");
    println!("two-node circuit: v1 = {}, r = x = {}", net.v1, net.r);
    println!();
    println!("{:>6} {:>12} {:>12}", "k", "p_max", "v_nose");

    for k in [0.0, 0.5, 1.0, 2.0] {
        let samples: Vec<f64> = (0..=14000).map(|i| i as f64 * 0.001).collect();
        let points = pv_curve(&net, k, &samples).expect("curve evaluates");
        let nose = points
            .iter()
            .rev()
            .find_map(|pt| pt.branches.map(|b| (pt.p2, b)))
            .expect("curve starts with solutions");
        println!("{:>6} {:>12.6} {:>12.6}", k, nose.0, 0.5 * (nose.1.upper + nose.1.lower));
    }

    println!();
    println!("unity power factor curve near the nose:");
    println!("{:>8} {:>12} {:>12}", "p2", "v_upper", "v_lower");
    for p2 in [0.0, 2.0, 4.0, 5.5, 6.0, 6.2, 6.25] {
        let pts = pv_curve(&net, 1.0, &[p2]).unwrap();
        match pts[0].branches {
            Some(b) => println!("{:>8} {:>12.6} {:>12.6}", p2, b.upper, b.lower),
            None => println!("{:>8} {:>12} {:>12}", p2, "-", "-"),
        }
    }
    println!();
    println!("past the nose (p2 = 6.3): {:?}", pv_curve(&net, 1.0, &[6.3]).unwrap()[0].branches);
}

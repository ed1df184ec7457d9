use botaug::eval::{mann_whitney_u, MwuMode};

fn main() {
    let baseline = [61.2, 58.7, 64.0, 60.3, 59.9, 62.5];
    let augmented = [63.8, 65.1, 62.9, 66.4, 64.2, 61.7];

    for mode in [MwuMode::Exact, MwuMode::Approx, MwuMode::Auto] {
        let r = mann_whitney_u(&baseline, &augmented, mode);
        println!("{mode:?}: U = {}, p = {:.5} (exact: {})", r.u, r.p_two_sided, r.exact);
    }

    // Ties force the normal approximation under Auto.
    let r = mann_whitney_u(&[1.0, 2.0, 2.0, 3.0], &[2.0, 3.0, 4.0, 4.0], MwuMode::Auto);
    println!("with ties: U = {}, p = {:.5}", r.u, r.p_two_sided);
}

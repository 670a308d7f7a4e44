//! Certify the three gadgets exhaustively and map hardness thresholds.

use z3pcp::gadgets::{certify_gamma, threshold_map, Gadget};
use z3pcp::rational::{fmt_rational, int, rat};

fn main() -> z3pcp::error::Result<()> {
    let nat = Gadget::four_nat_to_two_nlin();
    let lin = Gadget::two_nlin_to_two_to_one();
    let both = Gadget::compose(&nat, &lin)?;

    for g in [&nat, &lin, &both] {
        let cert = certify_gamma(g)?;
        let (c, s) = threshold_map(&int(1), &rat(2, 3), &cert.gamma)?;
        println!(
            "{:<28} {} -> {}  aux={}  rows={}  gamma={}  (1, 2/3) -> ({}, {})",
            g.name(),
            g.source_kind(),
            g.target_kind(),
            g.aux_spec().len(),
            cert.entries.len(),
            fmt_rational(&cert.gamma),
            fmt_rational(&c),
            fmt_rational(&s),
        );
    }

    // One violating row in detail: the best aux labels reach exactly gamma.
    let cert = certify_gamma(&nat)?;
    let row = cert.violating().next().expect("4NAT has violating tuples");
    println!(
        "\nexample: params {:?}, source {:?} -> best {} with aux {:?}",
        row.params,
        row.source,
        fmt_rational(&row.best_value),
        row.witness_aux
    );
    Ok(())
}
